//! End-to-end 3/2-approximation.
//!
//! Two network families are searched for their smallest feasible sink
//! capacity: `N(k, q)` and `N(k + 1, q)` with `k = floor(w_big / w_small)`.
//! Each feasible flow is rounded to an orientation, the transportation
//! fallback supplies a third candidate, and the cheapest one is returned.
//! If the optimum is below two big jobs, one of the network candidates is
//! within 3/2 of it; otherwise the fallback's additive `w_big` error is.

use std::fmt;

use thiserror::Error;

use crate::flow::max_flow;
use crate::flow::DiNetwork;
use crate::lst::{lst_round, lst_threshold, LstError};
use crate::model::{Instance, LoadValue, Orientation, SizeClass, VerifyError};
use crate::network::{feasible, Feasibility, NetworkError, NetworkParams};
use crate::rounding::{round_flow, RoundingError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error(transparent)]
    Rounding(#[from] RoundingError),
    #[error(transparent)]
    Lst(#[from] LstError),
    #[error("candidate orientation failed verification: {0}")]
    Verify(#[from] VerifyError),
    #[error("instance has two weight classes; exact_uniform needs a single one")]
    NotUniform,
}

impl SolveError {
    /// True for errors that indicate a bug rather than bad input.
    pub fn is_internal(&self) -> bool {
        !matches!(self, SolveError::Network(_) | SolveError::NotUniform)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Branch {
    /// Rounded flow of `N(k, q)`.
    NetworkA,
    /// Rounded flow of `N(k + 1, q)`.
    NetworkB,
    /// Transportation-flow fallback.
    Lst,
    /// Exact solver for single-weight (or empty) instances.
    ExactDegenerate,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::NetworkA => "A",
            Branch::NetworkB => "B",
            Branch::Lst => "LST",
            Branch::ExactDegenerate => "exact",
        })
    }
}

/// Minimal feasible sink capacities found for both network families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParamSearch {
    pub k: u64,
    pub q_a: Option<u64>,
    pub q_b: Option<u64>,
    pub lst_threshold: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    pub branch: Branch,
    pub makespan: LoadValue,
    pub total: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveReport {
    pub orientation: Orientation,
    pub makespan: LoadValue,
    /// Makespan in normalized integer weight units.
    pub total: u64,
    pub branch: Branch,
    /// `None` for degenerate instances.
    pub search: Option<ParamSearch>,
    pub candidates: Vec<Candidate>,
}

/// Smallest `q` in `0..=q_max` for which `N(p, q)` is feasible, with its flow.
pub fn min_feasible_q(
    instance: &Instance,
    p: u64,
    q_max: u64,
) -> Result<Option<(u64, Feasibility)>, NetworkError> {
    let top = feasible(instance, NetworkParams::new(p, q_max))?;
    if !top.feasible {
        return Ok(None);
    }
    let (mut lo, mut hi, mut best) = (0, q_max, top);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        let f = feasible(instance, NetworkParams::new(p, mid))?;
        if f.feasible {
            hi = mid;
            best = f;
        } else {
            lo = mid + 1;
        }
    }
    Ok(Some((lo, best)))
}

pub fn solve(instance: &Instance) -> Result<SolveReport, SolveError> {
    let Some(weights) = instance.weights() else {
        return exact_uniform(instance);
    };
    let k = weights.k();
    let small = instance.count(SizeClass::Small) as u64;
    let mut candidates: Vec<(Branch, Orientation)> = Vec::new();

    let q_a = match min_feasible_q(instance, k, k + small)? {
        Some((q, f)) => {
            candidates.push((Branch::NetworkA, round_flow(instance, &f.network, &f.flow)?));
            Some(q)
        }
        None => None,
    };
    let q_b = match min_feasible_q(instance, k + 1, k + 1 + small)? {
        Some((q, f)) => {
            candidates.push((Branch::NetworkB, round_flow(instance, &f.network, &f.flow)?));
            Some(q)
        }
        None => None,
    };
    let threshold = lst_threshold(instance);
    candidates.push((Branch::Lst, lst_round(instance, threshold)?));

    let search = ParamSearch {
        k,
        q_a,
        q_b,
        lst_threshold: threshold,
    };
    select(instance, candidates, Some(search))
}

/// Picks the candidate with the smallest makespan; earlier branches win ties.
fn select(
    instance: &Instance,
    candidates: Vec<(Branch, Orientation)>,
    search: Option<ParamSearch>,
) -> Result<SolveReport, SolveError> {
    let mut summary = Vec::with_capacity(candidates.len());
    let mut best: Option<(usize, u64)> = None;
    for (i, (branch, o)) in candidates.iter().enumerate() {
        let makespan = instance.makespan(o)?;
        let total = instance.total(makespan);
        summary.push(Candidate {
            branch: *branch,
            makespan,
            total,
        });
        if best.is_none_or(|(_, t)| total < t) {
            best = Some((i, total));
        }
    }
    let (i, total) = best.expect("fallback always yields a candidate");
    let (branch, orientation) = candidates.into_iter().nth(i).expect("index in range");
    Ok(SolveReport {
        makespan: summary[i].makespan,
        orientation,
        total,
        branch,
        search,
        candidates: summary,
    })
}

/// Exact optimum for instances where every job has the same weight: the
/// smallest per-machine job count admitting an integral transportation flow.
pub fn exact_uniform(instance: &Instance) -> Result<SolveReport, SolveError> {
    if !instance.is_degenerate() {
        return Err(SolveError::NotUniform);
    }
    let n = instance.job_count();
    let m = instance.machine_count();
    let build = |cap: u64| {
        let mut net = DiNetwork::new(2 + n + m, 0, 1).expect("source and sink exist");
        for j in 0..n {
            net.add_arc(0, 2 + j, 1).expect("node in range");
        }
        let mut job_arcs = Vec::with_capacity(n);
        for job in instance.jobs() {
            let arcs: Vec<(usize, usize)> = job
                .allowed
                .iter()
                .map(|&machine| {
                    let arc = net
                        .add_arc(2 + job.id, 2 + n + machine, 1)
                        .expect("node in range");
                    (machine, arc)
                })
                .collect();
            job_arcs.push(arcs);
        }
        for machine in 0..m {
            net.add_arc(2 + n + machine, 1, cap).expect("node in range");
        }
        (net, job_arcs)
    };
    let (mut lo, mut hi) = (0u64, n as u64);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if max_flow(&build(mid).0).value == n as u64 {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let (net, job_arcs) = build(lo);
    let flow = max_flow(&net);
    let assignment = job_arcs
        .iter()
        .map(|arcs| {
            arcs.iter()
                .find(|&&(_, a)| flow.flow[a] == 1)
                .map(|&(machine, _)| machine)
                .ok_or_else(|| {
                    SolveError::Rounding(RoundingError::Invariant(
                        "uniform flow left a job unrouted".into(),
                    ))
                })
        })
        .collect::<Result<Vec<_>, _>>()?;
    select(
        instance,
        vec![(Branch::ExactDegenerate, Orientation::new(assignment))],
        None,
    )
}
