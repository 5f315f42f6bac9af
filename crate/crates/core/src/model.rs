//! Instances, weights, loads and orientations.
//!
//! All arithmetic is done on a coprime integer weight pair `(w_small, w_big)`.
//! The scaled small weight `c = w_small / w_big` and `k = floor(1 / c)` are
//! derived from it on demand.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("weight must be positive (job {job})")]
    NonPositiveWeight { job: usize },
    #[error("more than two distinct job weights: {0}")]
    TooManyWeights(String),
    #[error("invalid weight pair ({small}, {big}): need 0 < small < big")]
    InvalidWeights { small: u64, big: u64 },
    #[error("job {job} has an empty allowed set")]
    EmptyAllowed { job: usize },
    #[error("job {job} references machine {machine} but there are only {machine_count} machines")]
    MachineOutOfRange {
        job: usize,
        machine: usize,
        machine_count: usize,
    },
    #[error("big job {job} may have at most 2 allowed machines, found {found}")]
    BigJobArity { job: usize, found: usize },
    #[error("weight arithmetic overflow")]
    Overflow,
    #[error("weight pair must be <w_small>/<w_big>, got `{0}`")]
    BadWeightPair(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("job {job} has no assignment")]
    Missing { job: usize },
    #[error("job {job} assigned to machine {machine}, which is not in its allowed set")]
    Disallowed { job: usize, machine: usize },
    #[error("assignment lists {found} jobs but the instance has {expected}")]
    LengthMismatch { expected: usize, found: usize },
}

/// Coprime integer weight pair with `0 < w_small < w_big`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Weights {
    w_small: u64,
    w_big: u64,
}

/// Parses `<w_small>/<w_big>`, e.g. `2/5`.
impl FromStr for Weights {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ModelError::BadWeightPair(s.to_string());
        let (a, b) = s.split_once('/').ok_or_else(bad)?;
        let a = a.trim().parse().map_err(|_| bad())?;
        let b = b.trim().parse().map_err(|_| bad())?;
        Weights::new(a, b)
    }
}

impl Weights {
    /// Builds the canonical pair, dividing out the gcd.
    pub fn new(w_small: u64, w_big: u64) -> Result<Self, ModelError> {
        if w_small == 0 || w_small >= w_big {
            return Err(ModelError::InvalidWeights {
                small: w_small,
                big: w_big,
            });
        }
        let g = w_small.gcd(&w_big);
        Ok(Self {
            w_small: w_small / g,
            w_big: w_big / g,
        })
    }

    pub fn small(&self) -> u64 {
        self.w_small
    }

    pub fn big(&self) -> u64 {
        self.w_big
    }

    /// The small weight in units of the big weight.
    pub fn c(&self) -> Ratio<u64> {
        Ratio::new(self.w_small, self.w_big)
    }

    /// `floor(1 / c)`, the number of small jobs that fit under one big job.
    pub fn k(&self) -> u64 {
        self.w_big / self.w_small
    }

    pub fn weight_of(&self, class: SizeClass) -> u64 {
        match class {
            SizeClass::Big => self.w_big,
            SizeClass::Small => self.w_small,
        }
    }

    pub fn total(&self, load: LoadValue) -> u64 {
        load.total(self.w_big, self.w_small)
    }

    /// Exact check of `den * makespan <= num * opt`.
    pub fn ratio_within(
        &self,
        makespan: LoadValue,
        opt: LoadValue,
        num: u64,
        den: u64,
    ) -> Result<bool, Incomparable> {
        ratio_within(self.total(makespan), self.total(opt), num, den)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SizeClass {
    Big,
    Small,
}

impl fmt::Display for SizeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SizeClass::Big => f.write_str("big"),
            SizeClass::Small => f.write_str("small"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Job {
    pub id: usize,
    pub size_class: SizeClass,
    /// Sorted, deduplicated machine indices.
    pub allowed: Vec<usize>,
}

impl Job {
    pub fn is_loop(&self) -> bool {
        self.allowed.len() == 1
    }
}

/// A job as read from input, before weights are normalized.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawJob {
    pub weight: Ratio<u64>,
    pub allowed: Vec<usize>,
}

impl RawJob {
    pub fn new(weight: Ratio<u64>, allowed: impl IntoIterator<Item = usize>) -> Self {
        Self {
            weight,
            allowed: allowed.into_iter().collect(),
        }
    }

    /// An undirected edge `{u, v}`; `u == v` gives a loop.
    pub fn edge(u: usize, v: usize, weight: u64) -> Self {
        Self::new(Ratio::from_integer(weight), [u, v])
    }
}

/// Result of scaling the raw job weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Normalized {
    /// Zero or one distinct weight. `unit` is that weight (1 when there are no jobs).
    Degenerate { unit: Ratio<u64> },
    /// Two distinct weights; `unit` maps normalized integer weights back to raw ones.
    Two {
        weights: Weights,
        classes: Vec<SizeClass>,
        unit: Ratio<u64>,
    },
}

/// Classifies raw weights into at most two classes and scales them to a
/// coprime integer pair.
pub fn normalize(raw: &[Ratio<u64>]) -> Result<Normalized, ModelError> {
    let mut distinct: Vec<Ratio<u64>> = Vec::new();
    for (job, w) in raw.iter().enumerate() {
        if *w.numer() == 0 {
            return Err(ModelError::NonPositiveWeight { job });
        }
        if !distinct.contains(w) {
            distinct.push(*w);
        }
    }
    distinct.sort();
    match distinct.as_slice() {
        [] => Ok(Normalized::Degenerate {
            unit: Ratio::from_integer(1),
        }),
        [only] => Ok(Normalized::Degenerate { unit: *only }),
        [small, big] => {
            let l = small.denom().lcm(big.denom());
            let scaled_small = (*small * l).to_integer();
            let scaled_big = (*big * l).to_integer();
            let weights = Weights::new(scaled_small, scaled_big)?;
            let classes = raw
                .iter()
                .map(|w| {
                    if w == big {
                        SizeClass::Big
                    } else {
                        SizeClass::Small
                    }
                })
                .collect();
            Ok(Normalized::Two {
                weights,
                classes,
                unit: *small / weights.small(),
            })
        }
        more => Err(ModelError::TooManyWeights(
            more.iter()
                .map(|w| w.to_string())
                .collect::<Vec<_>>()
                .join(", "),
        )),
    }
}

/// Load of one machine: `big * w_big + small * w_small`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct LoadValue {
    pub big: u64,
    pub small: u64,
}

impl LoadValue {
    pub const ZERO: LoadValue = LoadValue { big: 0, small: 0 };

    pub fn new(big: u64, small: u64) -> Self {
        Self { big, small }
    }

    pub fn total(&self, w_big: u64, w_small: u64) -> u64 {
        self.big * w_big + self.small * w_small
    }

    pub fn add(&mut self, class: SizeClass) {
        match class {
            SizeClass::Big => self.big += 1,
            SizeClass::Small => self.small += 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("ratio undefined: optimum is zero but makespan is not")]
pub struct Incomparable;

/// Exact check of `den * makespan <= num * opt` on integer totals.
pub fn ratio_within(makespan: u64, opt: u64, num: u64, den: u64) -> Result<bool, Incomparable> {
    if opt == 0 {
        return if makespan == 0 {
            Ok(true)
        } else {
            Err(Incomparable)
        };
    }
    Ok(den as u128 * makespan as u128 <= num as u128 * opt as u128)
}

/// Total assignment of jobs to machines, indexed by job id.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Orientation {
    pub assignment: Vec<usize>,
}

impl Orientation {
    pub fn new(assignment: Vec<usize>) -> Self {
        Self { assignment }
    }

    pub fn machine_of(&self, job: usize) -> usize {
        self.assignment[job]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    machine_count: usize,
    jobs: Vec<Job>,
    weights: Option<Weights>,
    unit: Ratio<u64>,
}

impl Instance {
    /// Normalizes raw job weights and validates allowed sets.
    pub fn new(machine_count: usize, raw: Vec<RawJob>) -> Result<Self, ModelError> {
        let weights_raw: Vec<_> = raw.iter().map(|j| j.weight).collect();
        let allowed: Vec<Vec<usize>> = raw.into_iter().map(|j| j.allowed).collect();
        match normalize(&weights_raw)? {
            Normalized::Degenerate { unit } => {
                let n = allowed.len();
                Self::assemble(machine_count, None, vec![SizeClass::Big; n], allowed, unit)
            }
            Normalized::Two {
                weights,
                classes,
                unit,
            } => Self::assemble(machine_count, Some(weights), classes, allowed, unit),
        }
    }

    /// Two-class instance given directly in normalized form.
    pub fn with_classes(
        machine_count: usize,
        weights: Weights,
        jobs: Vec<(SizeClass, Vec<usize>)>,
    ) -> Result<Self, ModelError> {
        let (classes, allowed): (Vec<_>, Vec<_>) = jobs.into_iter().unzip();
        if !classes.contains(&SizeClass::Big) || !classes.contains(&SizeClass::Small) {
            // One class only: the other weight never occurs.
            let w = weights.weight_of(classes.first().copied().unwrap_or(SizeClass::Big));
            let n = allowed.len();
            return Self::assemble(
                machine_count,
                None,
                vec![SizeClass::Big; n],
                allowed,
                Ratio::from_integer(w),
            );
        }
        Self::assemble(
            machine_count,
            Some(weights),
            classes,
            allowed,
            Ratio::from_integer(1),
        )
    }

    /// Single-weight instance with unit job weight.
    pub fn uniform(machine_count: usize, jobs: Vec<Vec<usize>>) -> Result<Self, ModelError> {
        let n = jobs.len();
        Self::assemble(
            machine_count,
            None,
            vec![SizeClass::Big; n],
            jobs,
            Ratio::from_integer(1),
        )
    }

    fn assemble(
        machine_count: usize,
        weights: Option<Weights>,
        classes: Vec<SizeClass>,
        allowed: Vec<Vec<usize>>,
        unit: Ratio<u64>,
    ) -> Result<Self, ModelError> {
        let mut jobs = Vec::with_capacity(allowed.len());
        for (id, (size_class, mut allowed)) in classes.into_iter().zip(allowed).enumerate() {
            allowed.sort_unstable();
            allowed.dedup();
            if allowed.is_empty() {
                return Err(ModelError::EmptyAllowed { job: id });
            }
            if let Some(&machine) = allowed.iter().find(|&&m| m >= machine_count) {
                return Err(ModelError::MachineOutOfRange {
                    job: id,
                    machine,
                    machine_count,
                });
            }
            if weights.is_some() && size_class == SizeClass::Big && allowed.len() > 2 {
                return Err(ModelError::BigJobArity {
                    job: id,
                    found: allowed.len(),
                });
            }
            jobs.push(Job {
                id,
                size_class,
                allowed,
            });
        }
        Ok(Self {
            machine_count,
            jobs,
            weights,
            unit,
        })
    }

    pub fn machine_count(&self) -> usize {
        self.machine_count
    }

    pub fn jobs(&self) -> &[Job] {
        &self.jobs
    }

    pub fn job_count(&self) -> usize {
        self.jobs.len()
    }

    /// `None` for single-weight (or empty) instances.
    pub fn weights(&self) -> Option<Weights> {
        self.weights
    }

    pub fn is_degenerate(&self) -> bool {
        self.weights.is_none()
    }

    /// Raw weight of one normalized unit.
    pub fn unit(&self) -> Ratio<u64> {
        self.unit
    }

    pub fn big_weight(&self) -> u64 {
        self.weights.map_or(1, |w| w.big())
    }

    pub fn small_weight(&self) -> u64 {
        self.weights.map_or(1, |w| w.small())
    }

    pub fn job_weight(&self, job: usize) -> u64 {
        match self.jobs[job].size_class {
            SizeClass::Big => self.big_weight(),
            SizeClass::Small => self.small_weight(),
        }
    }

    pub fn raw_weight(&self, job: usize) -> Ratio<u64> {
        self.unit * self.job_weight(job)
    }

    pub fn total_weight(&self) -> u64 {
        (0..self.jobs.len()).map(|j| self.job_weight(j)).sum()
    }

    pub fn count(&self, class: SizeClass) -> usize {
        self.jobs.iter().filter(|j| j.size_class == class).count()
    }

    /// Normalized integer total of a load.
    pub fn total(&self, load: LoadValue) -> u64 {
        load.total(self.big_weight(), self.small_weight())
    }

    pub fn compare(&self, a: LoadValue, b: LoadValue) -> Ordering {
        self.total(a).cmp(&self.total(b))
    }

    /// Checks that `orientation` is total and respects allowed sets.
    pub fn verify(&self, orientation: &Orientation) -> Result<(), VerifyError> {
        if orientation.assignment.len() != self.jobs.len() {
            return Err(VerifyError::LengthMismatch {
                expected: self.jobs.len(),
                found: orientation.assignment.len(),
            });
        }
        for (job, &machine) in self.jobs.iter().zip(&orientation.assignment) {
            if job.allowed.binary_search(&machine).is_err() {
                return Err(VerifyError::Disallowed {
                    job: job.id,
                    machine,
                });
            }
        }
        Ok(())
    }

    /// Per-machine loads of a verified orientation.
    pub fn loads(&self, orientation: &Orientation) -> Result<Vec<LoadValue>, VerifyError> {
        self.verify(orientation)?;
        let mut loads = vec![LoadValue::ZERO; self.machine_count];
        for (job, &machine) in self.jobs.iter().zip(&orientation.assignment) {
            loads[machine].add(job.size_class);
        }
        Ok(loads)
    }

    /// Maximum machine load; the lowest-indexed machine wins among equal totals.
    pub fn makespan(&self, orientation: &Orientation) -> Result<LoadValue, VerifyError> {
        let loads = self.loads(orientation)?;
        let mut best = LoadValue::ZERO;
        for load in loads {
            if self.total(load) > self.total(best) {
                best = load;
            }
        }
        Ok(best)
    }
}
