//! 2-approximation fallback: fractional transportation flow plus combinatorial
//! rounding.
//!
//! The fractional relaxation is a transportation network where each job ships
//! its weight to its allowed machines and each machine accepts at most `T`.
//! Flow is split across machines for some jobs. Cancelling alternating cycles
//! among split jobs leaves a forest; rooting each tree at a machine and sending
//! every split job to one of its child machines adds at most one job per
//! machine, so the makespan is at most `T + w_big`.

use std::collections::{BTreeMap, VecDeque};

use thiserror::Error;

use crate::flow::{max_flow, DiNetwork};
use crate::model::{Instance, Orientation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LstError {
    #[error("transportation network is infeasible at threshold {0}")]
    Infeasible(u64),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

/// Integral amounts each job ships to each of its machines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FractionalAssignment {
    pub threshold: u64,
    /// `amounts[job]` lists `(machine, amount)` for every allowed machine.
    pub amounts: Vec<Vec<(usize, u64)>>,
}

impl FractionalAssignment {
    pub fn machine_loads(&self, machine_count: usize) -> Vec<u64> {
        let mut loads = vec![0; machine_count];
        for row in &self.amounts {
            for &(m, a) in row {
                loads[m] += a;
            }
        }
        loads
    }

    pub fn job_totals(&self) -> Vec<u64> {
        self.amounts
            .iter()
            .map(|row| row.iter().map(|&(_, a)| a).sum())
            .collect()
    }

    /// Jobs whose weight is spread over more than one machine.
    pub fn split_jobs(&self) -> Vec<usize> {
        (0..self.amounts.len())
            .filter(|&j| self.support(j).count() > 1)
            .collect()
    }

    fn support(&self, job: usize) -> impl Iterator<Item = usize> + '_ {
        self.amounts[job]
            .iter()
            .filter(|&&(_, a)| a > 0)
            .map(|&(m, _)| m)
    }

    fn amount_mut(&mut self, job: usize, machine: usize) -> &mut u64 {
        &mut self.amounts[job]
            .iter_mut()
            .find(|(m, _)| *m == machine)
            .expect("machine in allowed set")
            .1
    }

    /// Repeatedly shifts flow around a job/machine alternating cycle in the
    /// support of split jobs until the support is a forest. Job totals and
    /// machine loads are unchanged.
    pub fn cancel_cycles(&mut self) {
        while let Some(cycle) = self.find_cycle() {
            // cycle = [j0, m0, j1, m1, ..., j_{r-1}, m_{r-1}], closing back to j0.
            // Even positions of the edge sequence lose flow: (j_i, m_i) gains,
            // (m_i, j_{i+1}) loses.
            let r = cycle.len() / 2;
            let losing = |i: usize| (cycle[(2 * i + 2) % (2 * r)], cycle[2 * i + 1]);
            let delta = (0..r)
                .map(|i| {
                    let (j, m) = losing(i);
                    *self.amount_mut(j, m)
                })
                .min()
                .expect("nonempty cycle");
            for i in 0..r {
                *self.amount_mut(cycle[2 * i], cycle[2 * i + 1]) += delta;
                let (j, m) = losing(i);
                *self.amount_mut(j, m) -= delta;
            }
        }
    }

    /// A cycle in the bipartite support graph of split jobs, as an alternating
    /// job/machine node sequence starting with a job.
    fn find_cycle(&self) -> Option<Vec<usize>> {
        #[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
        enum Node {
            Job(usize),
            Machine(usize),
        }
        let mut adj: BTreeMap<Node, Vec<Node>> = BTreeMap::new();
        for j in self.split_jobs() {
            for m in self.support(j) {
                adj.entry(Node::Job(j)).or_default().push(Node::Machine(m));
                adj.entry(Node::Machine(m)).or_default().push(Node::Job(j));
            }
        }
        let mut parent: BTreeMap<Node, Option<Node>> = BTreeMap::new();
        let roots: Vec<Node> = adj.keys().copied().collect();
        for root in roots {
            if parent.contains_key(&root) {
                continue;
            }
            parent.insert(root, None);
            let mut stack = vec![root];
            while let Some(u) = stack.pop() {
                for &v in &adj[&u] {
                    if parent[&u] == Some(v) {
                        continue;
                    }
                    if parent.contains_key(&v) {
                        // Non-tree edge u-v closes a cycle through their common ancestor.
                        let path_to_root = |mut x: Node| {
                            let mut path = vec![x];
                            while let Some(p) = parent[&x] {
                                path.push(p);
                                x = p;
                            }
                            path
                        };
                        let pu = path_to_root(u);
                        let pv = path_to_root(v);
                        let lca = *pu.iter().find(|x| pv.contains(x)).expect("same tree");
                        let mut cycle: Vec<Node> =
                            pu.iter().copied().take_while(|&x| x != lca).collect();
                        cycle.push(lca);
                        let tail: Vec<Node> =
                            pv.iter().copied().take_while(|&x| x != lca).collect();
                        cycle.extend(tail.into_iter().rev());
                        // Rotate so the sequence starts with a job.
                        if matches!(cycle[0], Node::Machine(_)) {
                            cycle.rotate_left(1);
                        }
                        return Some(
                            cycle
                                .into_iter()
                                .map(|n| match n {
                                    Node::Job(x) | Node::Machine(x) => x,
                                })
                                .collect(),
                        );
                    }
                    parent.insert(v, Some(u));
                    stack.push(v);
                }
            }
        }
        None
    }
}

fn transportation(instance: &Instance, threshold: u64) -> (DiNetwork, u64) {
    let n = instance.job_count();
    let m = instance.machine_count();
    let (source, sink) = (0, 1);
    let mut net = DiNetwork::new(2 + n + m, source, sink).expect("source and sink exist");
    let mut supply = 0;
    for j in 0..n {
        let w = instance.job_weight(j);
        supply += w;
        net.add_arc(source, 2 + j, w).expect("node in range");
    }
    for job in instance.jobs() {
        let w = instance.job_weight(job.id);
        for &machine in &job.allowed {
            net.add_arc(2 + job.id, 2 + n + machine, w)
                .expect("node in range");
        }
    }
    for machine in 0..m {
        net.add_arc(2 + n + machine, sink, threshold)
            .expect("node in range");
    }
    (net, supply)
}

/// Integral transportation flow at `threshold`, or `None` if it cannot carry
/// every job's weight.
pub fn fractional_assignment(instance: &Instance, threshold: u64) -> Option<FractionalAssignment> {
    let (net, supply) = transportation(instance, threshold);
    let flow = max_flow(&net);
    if flow.value != supply {
        return None;
    }
    let mut arc = instance.job_count();
    let amounts = instance
        .jobs()
        .iter()
        .map(|job| {
            job.allowed
                .iter()
                .map(|&machine| {
                    let a = flow.flow[arc];
                    arc += 1;
                    (machine, a)
                })
                .collect()
        })
        .collect();
    Some(FractionalAssignment { threshold, amounts })
}

/// Smallest integer threshold at which the transportation network is feasible.
pub fn lst_threshold(instance: &Instance) -> u64 {
    let (mut lo, mut hi) = (0, instance.total_weight());
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if fractional_assignment(instance, mid).is_some() {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    lo
}

/// Rounds the transportation flow at `threshold` to an orientation with
/// makespan at most `threshold + w_big`.
pub fn lst_round(instance: &Instance, threshold: u64) -> Result<Orientation, LstError> {
    let mut frac =
        fractional_assignment(instance, threshold).ok_or(LstError::Infeasible(threshold))?;
    frac.cancel_cycles();
    if frac.find_cycle().is_some() {
        return Err(LstError::Invariant("support still has a cycle".into()));
    }

    let n = instance.job_count();
    let mut assignment: Vec<Option<usize>> = vec![None; n];
    for (j, slot) in assignment.iter_mut().enumerate() {
        let mut s = frac.support(j);
        if let (Some(m), None) = (s.next(), s.next()) {
            *slot = Some(m);
        }
    }

    // Forest over split jobs and machines; each tree is rooted at its lowest machine.
    let split = frac.split_jobs();
    let mut machine_adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &j in &split {
        for m in frac.support(j) {
            machine_adj.entry(m).or_default().push(j);
        }
    }
    let mut machine_seen: BTreeMap<usize, bool> = BTreeMap::new();
    for &root in machine_adj.keys() {
        if machine_seen.contains_key(&root) {
            continue;
        }
        machine_seen.insert(root, true);
        let mut queue = VecDeque::from([root]);
        while let Some(m) = queue.pop_front() {
            for &j in &machine_adj[&m] {
                if assignment[j].is_some() {
                    continue;
                }
                // j is reached from its parent machine m; its other machines are children.
                let children: Vec<usize> = frac.support(j).filter(|&c| c != m).collect();
                let &first = children
                    .first()
                    .ok_or_else(|| LstError::Invariant(format!("split job {j} has no child")))?;
                assignment[j] = Some(first);
                for c in children {
                    if machine_seen.insert(c, true).is_some() {
                        return Err(LstError::Invariant(format!(
                            "machine {c} reached twice; support is not a forest"
                        )));
                    }
                    queue.push_back(c);
                }
            }
        }
    }

    let assignment = assignment
        .into_iter()
        .enumerate()
        .map(|(j, m)| m.ok_or_else(|| LstError::Invariant(format!("job {j} left unassigned"))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Orientation::new(assignment))
}
