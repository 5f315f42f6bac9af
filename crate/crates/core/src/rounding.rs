//! Rounding an integral feasible flow of `N(p, q)` to an orientation.
//!
//! Small jobs follow their unit of flow. A big job goes to the machine whose
//! arc carries more than `floor(p / 2)`; at most one arc can. For odd `p` that
//! orients every big job. For even `p` the remaining big jobs split exactly
//! `p / 2` / `p / 2` between two gates, every gate sees at most two of them,
//! and a path/cycle walk matches each to a distinct gate.

use std::collections::BTreeMap;

use num_rational::Ratio;
use thiserror::Error;

use crate::flow::{FlowError, FlowResult};
use crate::model::{Instance, Orientation, SizeClass, Weights};
use crate::network::BalanceNetwork;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RoundingError {
    #[error("flow is not a feasible flow of the network: {0}")]
    InvalidFlow(#[from] FlowError),
    #[error("flow does not saturate the source arc of job {job}")]
    Unsaturated { job: usize },
    #[error("network has {found} nodes, instance needs {expected}")]
    ShapeMismatch { expected: usize, found: usize },
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialOrientation {
    pub oriented: Vec<Option<usize>>,
    /// Big jobs whose flow splits evenly between two gates.
    pub unoriented_big: Vec<usize>,
}

/// An unoriented big job together with the two machines its flow reaches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SplitEdge {
    pub job: usize,
    pub machines: [usize; 2],
}

/// Unoriented big jobs viewed as edges between gate machines. Every edge has
/// two distinct endpoints and every machine touches at most two edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitGraph {
    edges: Vec<SplitEdge>,
}

impl SplitGraph {
    pub fn new(edges: Vec<SplitEdge>) -> Result<Self, RoundingError> {
        let mut degree: BTreeMap<usize, usize> = BTreeMap::new();
        for e in &edges {
            if e.machines[0] == e.machines[1] {
                return Err(RoundingError::Invariant(format!(
                    "split job {} is a loop",
                    e.job
                )));
            }
            for &m in &e.machines {
                let d = degree.entry(m).or_default();
                *d += 1;
                if *d > 2 {
                    return Err(RoundingError::Invariant(format!(
                        "gate {m} receives more than two split jobs"
                    )));
                }
            }
        }
        Ok(Self { edges })
    }

    pub fn edges(&self) -> &[SplitEdge] {
        &self.edges
    }
}

/// Assigns each split job to one of its two machines so that no machine gets
/// more than one.
///
/// Components are paths or cycles. A path is walked from its higher-indexed
/// endpoint, a cycle from its lowest machine along the edge to its smaller
/// neighbour; each edge goes to the machine it leads into.
pub fn match_split(split: &SplitGraph) -> Result<BTreeMap<usize, usize>, RoundingError> {
    let mut adj: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
    for (idx, e) in split.edges.iter().enumerate() {
        adj.entry(e.machines[0])
            .or_default()
            .push((e.machines[1], idx));
        adj.entry(e.machines[1])
            .or_default()
            .push((e.machines[0], idx));
    }
    for list in adj.values_mut() {
        list.sort_unstable();
    }

    let mut used = vec![false; split.edges.len()];
    let mut taken: BTreeMap<usize, usize> = BTreeMap::new();
    let mut result = BTreeMap::new();
    let mut visit = |start: usize, used: &mut Vec<bool>| -> Result<(), RoundingError> {
        let mut at = start;
        while let Some(&(to, idx)) = adj[&at].iter().find(|&&(_, idx)| !used[idx]) {
            used[idx] = true;
            if let Some(prev) = taken.insert(to, split.edges[idx].job) {
                return Err(RoundingError::Invariant(format!(
                    "machine {to} matched to split jobs {prev} and {}",
                    split.edges[idx].job
                )));
            }
            result.insert(split.edges[idx].job, to);
            at = to;
        }
        Ok(())
    };

    // Paths first, from their higher endpoint.
    let mut endpoints: Vec<usize> = adj
        .iter()
        .filter(|(_, l)| l.len() == 1)
        .map(|(&m, _)| m)
        .collect();
    endpoints.sort_unstable_by(|a, b| b.cmp(a));
    for m in endpoints {
        if !used[adj[&m][0].1] {
            visit(m, &mut used)?;
        }
    }
    // What remains are cycles.
    let starts: Vec<usize> = adj.keys().copied().collect();
    for m in starts {
        if adj[&m].iter().any(|&(_, idx)| !used[idx]) {
            visit(m, &mut used)?;
        }
    }
    if used.iter().any(|u| !u) {
        return Err(RoundingError::Invariant(
            "split graph walk left edges unmatched".into(),
        ));
    }
    Ok(result)
}

fn check_shape(instance: &Instance, network: &BalanceNetwork) -> Result<(), RoundingError> {
    let expected = 2 + instance.job_count() + 2 * instance.machine_count();
    let found = network.network().node_count();
    if found != expected {
        return Err(RoundingError::ShapeMismatch { expected, found });
    }
    Ok(())
}

/// Steps (i) and (ii): small jobs follow their flow, big jobs go to an arc
/// carrying more than `floor(p / 2)`.
pub fn partial_orientation(
    instance: &Instance,
    network: &BalanceNetwork,
    flow: &FlowResult,
) -> Result<PartialOrientation, RoundingError> {
    check_shape(instance, network)?;
    flow.check(network.network())?;
    let p = network.params().p;
    let g = network.network();
    let mut oriented = vec![None; instance.job_count()];
    let mut unoriented_big = Vec::new();

    for job in instance.jobs() {
        let src = network.source_arc(job.id);
        if flow.flow[src] != g.arcs()[src].capacity {
            return Err(RoundingError::Unsaturated { job: job.id });
        }
        let arcs = network.job_arcs(job.id);
        match job.size_class {
            SizeClass::Small => {
                let mut carrying = arcs.iter().filter(|ja| flow.flow[ja.arc] > 0);
                match (carrying.next(), carrying.next()) {
                    (Some(ja), None) => oriented[job.id] = Some(ja.machine),
                    _ => {
                        return Err(RoundingError::Invariant(format!(
                            "small job {} does not route its unit on a single arc",
                            job.id
                        )))
                    }
                }
            }
            SizeClass::Big => {
                let heavy: Vec<_> = arcs.iter().filter(|ja| flow.flow[ja.arc] > p / 2).collect();
                match heavy.as_slice() {
                    [ja] => oriented[job.id] = Some(ja.machine),
                    [] => unoriented_big.push(job.id),
                    _ => {
                        return Err(RoundingError::Invariant(format!(
                            "big job {} has two arcs above p/2",
                            job.id
                        )))
                    }
                }
            }
        }
    }
    if p % 2 == 1 && !unoriented_big.is_empty() {
        return Err(RoundingError::Invariant(format!(
            "odd p = {p} left big job {} unoriented",
            unoriented_big[0]
        )));
    }
    Ok(PartialOrientation {
        oriented,
        unoriented_big,
    })
}

/// Turns an integral feasible flow of the network into a complete orientation.
pub fn round_flow(
    instance: &Instance,
    network: &BalanceNetwork,
    flow: &FlowResult,
) -> Result<Orientation, RoundingError> {
    let partial = partial_orientation(instance, network, flow)?;
    let p = network.params().p;
    let mut edges = Vec::with_capacity(partial.unoriented_big.len());
    for &job in &partial.unoriented_big {
        let arcs = network.job_arcs(job);
        let ok = arcs.len() == 2 && arcs.iter().all(|ja| flow.flow[ja.arc] == p / 2);
        if !ok {
            return Err(RoundingError::Invariant(format!(
                "unoriented big job {job} does not split its flow evenly over two arcs"
            )));
        }
        edges.push(SplitEdge {
            job,
            machines: [arcs[0].machine, arcs[1].machine],
        });
    }
    let split = SplitGraph::new(edges)?;
    let matched = match_split(&split)?;

    let mut oriented = partial.oriented;
    for (job, machine) in matched {
        oriented[job] = Some(machine);
    }
    let assignment = oriented
        .into_iter()
        .enumerate()
        .map(|(job, m)| {
            m.ok_or_else(|| RoundingError::Invariant(format!("job {job} left unassigned")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Orientation::new(assignment))
}

/// `max(c q, 1 + c (q - floor((p + 1) / 2)))`, in units of the big weight.
pub fn rounding_bound(p: u64, q: u64, w: Weights) -> Ratio<i64> {
    let c = Ratio::new(w.small() as i64, w.big() as i64);
    let q = q as i64;
    let half = p.div_ceil(2) as i64;
    let small_only = c * q;
    let with_big = Ratio::from_integer(1) + c * (q - half);
    small_only.max(with_big)
}
