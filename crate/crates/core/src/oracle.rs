//! Exact optimum by depth-first enumeration with incumbent pruning.

use thiserror::Error;

use crate::model::{Instance, LoadValue, Orientation};

pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("instance too large for oracle: more than {budget} assignments")]
    TooLarge { budget: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub opt: LoadValue,
    pub witness: Orientation,
    /// Search nodes visited.
    pub explored: u64,
}

struct Search<'a> {
    instance: &'a Instance,
    order: Vec<usize>,
    loads: Vec<LoadValue>,
    current: Vec<usize>,
    best_total: u64,
    best: Option<(LoadValue, Vec<usize>)>,
    explored: u64,
}

impl Search<'_> {
    fn run(&mut self, depth: usize, max_so_far: u64) {
        self.explored += 1;
        if depth == self.order.len() {
            if self.best.is_none() || max_so_far < self.best_total {
                let loads = &self.loads;
                let inst = self.instance;
                let worst = loads.iter().copied().fold(LoadValue::ZERO, |acc, l| {
                    if inst.total(l) > inst.total(acc) {
                        l
                    } else {
                        acc
                    }
                });
                self.best_total = max_so_far;
                self.best = Some((worst, self.current.clone()));
            }
            return;
        }
        let job = self.order[depth];
        let class = self.instance.jobs()[job].size_class;
        let weight = self.instance.job_weight(job);
        for idx in 0..self.instance.jobs()[job].allowed.len() {
            let m = self.instance.jobs()[job].allowed[idx];
            let new_load = self.instance.total(self.loads[m]) + weight;
            if self.best.is_some() && new_load >= self.best_total {
                continue;
            }
            let before = self.loads[m];
            self.loads[m].add(class);
            self.current[job] = m;
            self.run(depth + 1, max_so_far.max(new_load));
            self.loads[m] = before;
        }
    }
}

/// Exact minimum makespan. Fails rather than approximating when the number of
/// complete assignments exceeds `budget`.
pub fn brute_force_opt(instance: &Instance, budget: u64) -> Result<OracleResult, OracleError> {
    let mut product: u128 = 1;
    for job in instance.jobs() {
        product = product.saturating_mul(job.allowed.len() as u128);
        if product > budget as u128 {
            return Err(OracleError::TooLarge { budget });
        }
    }

    let n = instance.job_count();
    let mut loads = vec![LoadValue::ZERO; instance.machine_count()];
    let mut current = vec![0; n];
    let mut max_so_far = 0;
    let mut order = Vec::new();
    for job in instance.jobs() {
        if let [m] = job.allowed[..] {
            loads[m].add(job.size_class);
            current[job.id] = m;
            max_so_far = max_so_far.max(instance.total(loads[m]));
        } else {
            order.push(job.id);
        }
    }
    // Heavier jobs first tightens the incumbent sooner.
    order.sort_by_key(|&j| std::cmp::Reverse(instance.job_weight(j)));

    let mut search = Search {
        instance,
        order,
        loads,
        current,
        best_total: u64::MAX,
        best: None,
        explored: 0,
    };
    search.run(0, max_so_far);
    let (opt, witness) = search
        .best
        .expect("at least one complete assignment exists");
    Ok(OracleResult {
        opt,
        witness: Orientation::new(witness),
        explored: search.explored,
    })
}
