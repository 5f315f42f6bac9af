//! Benchmark suites: generate instances, solve them, compare against the
//! oracle where it fits the budget, and report exact ratios.
//!
//! A suite spec is a comma-separated list of entries:
//!
//! ```text
//! <family>:<n>:<m>:<w_small>/<w_big>:<count>    seeded generator runs
//! exhaustive:<vertices>:<edges>:<w_small>/<w_big>   every multigraph with
//!                                                    1..=vertices vertices
//! ```
//!
//! Instance `i` of a generator entry uses seed `base_seed + i`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::generate::{enumerate_multigraphs, generate, Family, GenError};
use crate::model::{Instance, Weights};
use crate::oracle::{brute_force_opt, DEFAULT_BUDGET};
use crate::solver::{solve, Branch, SolveError};

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("bad suite entry `{entry}`: {reason}")]
    Spec { entry: String, reason: String },
    #[error(transparent)]
    Gen(#[from] GenError),
    #[error("instance {id}: {source}")]
    Solve { id: usize, source: SolveError },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SuiteEntry {
    Family {
        family: Family,
        n: usize,
        m: usize,
        weights: Weights,
        count: usize,
    },
    Exhaustive {
        vertices: usize,
        edges: usize,
        weights: Weights,
    },
}

impl SuiteEntry {
    fn label(&self) -> String {
        match self {
            SuiteEntry::Family { family, n, m, .. } => format!("{family}:{n}:{m}"),
            SuiteEntry::Exhaustive {
                vertices, edges, ..
            } => format!("exhaustive:{vertices}:{edges}"),
        }
    }
}

pub fn parse_suite(spec: &str) -> Result<Vec<SuiteEntry>, BenchError> {
    spec.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(parse_entry)
        .collect()
}

fn parse_entry(entry: &str) -> Result<SuiteEntry, BenchError> {
    let bad = |reason: &str| BenchError::Spec {
        entry: entry.to_string(),
        reason: reason.to_string(),
    };
    let num = |s: &str| s.parse::<usize>().map_err(|_| bad("expected an integer"));
    let weights = |s: &str| s.parse::<Weights>().map_err(|e| bad(&e.to_string()));
    let parts: Vec<&str> = entry.split(':').collect();
    match parts.as_slice() {
        ["exhaustive", v, e, w] => Ok(SuiteEntry::Exhaustive {
            vertices: num(v)?,
            edges: num(e)?,
            weights: weights(w)?,
        }),
        [family, n, m, w, count] => Ok(SuiteEntry::Family {
            family: family.parse()?,
            n: num(n)?,
            m: num(m)?,
            weights: weights(w)?,
            count: num(count)?,
        }),
        _ => Err(bad(
            "expected <family>:<n>:<m>:<ws>/<wb>:<count> or exhaustive:<v>:<e>:<ws>/<wb>",
        )),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BenchOptions {
    pub seed: u64,
    pub oracle: bool,
    pub budget: u64,
}

impl Default for BenchOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            oracle: true,
            budget: DEFAULT_BUDGET,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchRow {
    pub id: usize,
    pub source: String,
    pub seed: Option<u64>,
    pub machines: usize,
    pub jobs: usize,
    /// Raw makespan (normalized total times the instance unit).
    pub makespan: Ratio<u64>,
    pub opt: Option<Ratio<u64>>,
    /// `makespan / opt`; 1 when both are zero.
    pub ratio: Option<Ratio<u64>>,
    pub branch: Branch,
    pub elapsed: Duration,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
}

fn decimal(r: Ratio<u64>) -> String {
    format!("{:.6}", *r.numer() as f64 / *r.denom() as f64)
}

fn run_one(
    instance: &Instance,
    id: usize,
    source: String,
    seed: Option<u64>,
    options: &BenchOptions,
) -> Result<BenchRow, BenchError> {
    let start = Instant::now();
    let report = solve(instance).map_err(|source| BenchError::Solve { id, source })?;
    let elapsed = start.elapsed();
    let opt_total = if options.oracle {
        brute_force_opt(instance, options.budget)
            .ok()
            .map(|r| instance.total(r.opt))
    } else {
        None
    };
    let ratio = opt_total.map(|opt| {
        if opt == 0 {
            Ratio::from_integer(1)
        } else {
            Ratio::new(report.total, opt)
        }
    });
    Ok(BenchRow {
        id,
        source,
        seed,
        machines: instance.machine_count(),
        jobs: instance.job_count(),
        makespan: instance.unit() * report.total,
        opt: opt_total.map(|t| instance.unit() * t),
        ratio,
        branch: report.branch,
        elapsed,
    })
}

pub fn run(entries: &[SuiteEntry], options: &BenchOptions) -> Result<BenchReport, BenchError> {
    let mut rows = Vec::new();
    for entry in entries {
        let label = entry.label();
        match *entry {
            SuiteEntry::Family {
                family,
                n,
                m,
                weights,
                count,
            } => {
                for i in 0..count {
                    let seed = options.seed.wrapping_add(i as u64);
                    let inst = generate(family, n, m, weights, seed)?;
                    rows.push(run_one(
                        &inst,
                        rows.len(),
                        label.clone(),
                        Some(seed),
                        options,
                    )?);
                }
            }
            SuiteEntry::Exhaustive {
                vertices,
                edges,
                weights,
            } => {
                for v in 1..=vertices {
                    for inst in enumerate_multigraphs(v, edges, weights) {
                        rows.push(run_one(&inst, rows.len(), label.clone(), None, options)?);
                    }
                }
            }
        }
    }
    Ok(BenchReport { rows })
}

impl BenchReport {
    pub fn max_ratio(&self) -> Option<Ratio<u64>> {
        self.rows.iter().filter_map(|r| r.ratio).max()
    }

    pub fn mean_ratio(&self) -> Option<BigRational> {
        let ratios: Vec<_> = self.rows.iter().filter_map(|r| r.ratio).collect();
        if ratios.is_empty() {
            return None;
        }
        let sum = ratios
            .iter()
            .fold(BigRational::from_integer(0.into()), |acc, r| {
                acc + BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
            });
        Some(sum / BigInt::from(ratios.len()))
    }

    /// Rows whose makespan exceeds 3/2 of the oracle optimum.
    pub fn violations(&self) -> usize {
        self.rows
            .iter()
            .filter(|r| r.ratio.is_some_and(|q| q > Ratio::new(3, 2)))
            .count()
    }

    /// Deterministic CSV; timings are left out so reruns are byte-identical.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "id,source,seed,machines,jobs,makespan,makespan_decimal,opt,opt_decimal,ratio,ratio_decimal,branch\n",
        );
        for r in &self.rows {
            let opt = r.opt.map(|o| (o.to_string(), decimal(o)));
            let ratio = r.ratio.map(|q| (q.to_string(), decimal(q)));
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{},{}",
                r.id,
                r.source,
                r.seed.map(|s| s.to_string()).unwrap_or_default(),
                r.machines,
                r.jobs,
                r.makespan,
                decimal(r.makespan),
                opt.as_ref().map(|o| o.0.as_str()).unwrap_or(""),
                opt.as_ref().map(|o| o.1.as_str()).unwrap_or(""),
                ratio.as_ref().map(|q| q.0.as_str()).unwrap_or(""),
                ratio.as_ref().map(|q| q.1.as_str()).unwrap_or(""),
                r.branch,
            );
        }
        out
    }

    pub fn summary(&self) -> String {
        let mut out = String::new();
        let mut branches: BTreeMap<Branch, usize> = BTreeMap::new();
        for r in &self.rows {
            *branches.entry(r.branch).or_default() += 1;
        }
        let checked = self.rows.iter().filter(|r| r.ratio.is_some()).count();
        let _ = writeln!(out, "instances: {}", self.rows.len());
        let _ = writeln!(out, "oracle-checked: {checked}");
        if let Some(max) = self.max_ratio() {
            let _ = writeln!(out, "max ratio: {max} ({})", decimal(max));
        }
        if let Some(mean) = self.mean_ratio() {
            let _ = writeln!(
                out,
                "mean ratio: {mean} ({:.6})",
                mean.to_f64().unwrap_or(f64::NAN)
            );
        }
        let _ = writeln!(out, "ratio > 3/2: {}", self.violations());
        let b: Vec<String> = branches.iter().map(|(b, n)| format!("{b}={n}")).collect();
        let _ = writeln!(out, "branches: {}", b.join(" "));
        let total: Duration = self.rows.iter().map(|r| r.elapsed).sum();
        let _ = writeln!(out, "solve time: {:.3} s", total.as_secs_f64());
        out
    }

    /// Human-readable table including wall time per instance.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{:>5} {:<20} {:>6} {:>4} {:>4} {:>10} {:>10} {:>8} {:>6} {:>10}\n",
            "id", "source", "seed", "m", "jobs", "makespan", "opt", "ratio", "branch", "time_us"
        );
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{:>5} {:<20} {:>6} {:>4} {:>4} {:>10} {:>10} {:>8} {:>6} {:>10}",
                r.id,
                r.source,
                r.seed.map(|s| s.to_string()).unwrap_or_else(|| "-".into()),
                r.machines,
                r.jobs,
                r.makespan.to_string(),
                r.opt.map(|o| o.to_string()).unwrap_or_else(|| "-".into()),
                r.ratio.map(|q| q.to_string()).unwrap_or_else(|| "-".into()),
                r.branch.to_string(),
                r.elapsed.as_micros(),
            );
        }
        out.push('\n');
        out.push_str(&self.summary());
        out
    }
}
