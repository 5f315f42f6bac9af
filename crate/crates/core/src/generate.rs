//! Seeded instance generators and exhaustive small-multigraph enumeration.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use rand::seq::index::sample;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::model::{Instance, ModelError, RawJob, SizeClass, Weights};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("unknown family `{0}` (expected random, parallel, starmix or cyclemix)")]
    UnknownFamily(String),
    #[error("{family} needs at least {min} vertices, got {n}")]
    TooFewVertices {
        family: Family,
        n: usize,
        min: usize,
    },
    #[error("cyclemix on {n} vertices needs at least {cycle} edges, got {m}")]
    TooFewEdges { n: usize, m: usize, cycle: usize },
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// `m` edges with uniform endpoints (loops allowed), each big or small
    /// with probability 1/2.
    Random,
    /// `m` parallel big edges on vertices 0 and 1, plus a small loop on every
    /// other vertex.
    Parallel,
    /// Big star centred at 0 over up to `n - 1` leaves; remaining edges are
    /// small loops at random vertices.
    StarMix,
    /// Big cycle over the largest odd number of vertices `<= n`; remaining
    /// edges are small chords between random distinct vertices.
    CycleMix,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Random => "random",
            Family::Parallel => "parallel",
            Family::StarMix => "starmix",
            Family::CycleMix => "cyclemix",
        })
    }
}

impl FromStr for Family {
    type Err = GenError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "random" => Ok(Family::Random),
            "parallel" => Ok(Family::Parallel),
            "starmix" => Ok(Family::StarMix),
            "cyclemix" => Ok(Family::CycleMix),
            _ => Err(GenError::UnknownFamily(s.to_string())),
        }
    }
}

/// Deterministic for a fixed `(family, n, m, weights, seed)`.
pub fn generate(
    family: Family,
    n: usize,
    m: usize,
    weights: Weights,
    seed: u64,
) -> Result<Instance, GenError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edge = |u: usize, v: usize, class| {
        RawJob::new(Ratio::from_integer(weights.weight_of(class)), [u, v])
    };
    let need = |min: usize| {
        if n < min {
            Err(GenError::TooFewVertices { family, n, min })
        } else {
            Ok(())
        }
    };
    let mut jobs = Vec::new();
    match family {
        Family::Random => {
            need(1)?;
            for _ in 0..m {
                let u = rng.gen_range(0..n);
                let v = rng.gen_range(0..n);
                let class = if rng.gen_bool(0.5) {
                    SizeClass::Big
                } else {
                    SizeClass::Small
                };
                jobs.push(edge(u, v, class));
            }
        }
        Family::Parallel => {
            need(2)?;
            for _ in 0..m {
                jobs.push(edge(0, 1, SizeClass::Big));
            }
            for v in 2..n {
                jobs.push(edge(v, v, SizeClass::Small));
            }
        }
        Family::StarMix => {
            need(2)?;
            let leaves = m.min(n - 1);
            for leaf in 1..=leaves {
                jobs.push(edge(0, leaf, SizeClass::Big));
            }
            for _ in leaves..m {
                let v = rng.gen_range(0..n);
                jobs.push(edge(v, v, SizeClass::Small));
            }
        }
        Family::CycleMix => {
            need(3)?;
            let cycle = if n % 2 == 1 { n } else { n - 1 };
            if m < cycle {
                return Err(GenError::TooFewEdges { n, m, cycle });
            }
            for i in 0..cycle {
                jobs.push(edge(i, (i + 1) % cycle, SizeClass::Big));
            }
            for _ in cycle..m {
                let pair = sample(&mut rng, n, 2);
                jobs.push(edge(pair.index(0), pair.index(1), SizeClass::Small));
            }
        }
    }
    Ok(Instance::new(n, jobs)?)
}

/// Random restricted-assignment instance: big jobs get one or two machines,
/// small jobs between one and `max_small_arity` distinct machines.
pub fn random_restricted<R: Rng>(
    rng: &mut R,
    machines: usize,
    jobs: usize,
    weights: Weights,
    max_small_arity: usize,
) -> Result<Instance, GenError> {
    if machines == 0 {
        return Err(GenError::TooFewVertices {
            family: Family::Random,
            n: 0,
            min: 1,
        });
    }
    let mut out = Vec::with_capacity(jobs);
    for _ in 0..jobs {
        let (class, arity) = if rng.gen_bool(0.5) {
            (SizeClass::Big, rng.gen_range(1..=2.min(machines)))
        } else {
            let top = max_small_arity.clamp(1, machines);
            (SizeClass::Small, rng.gen_range(1..=top))
        };
        let allowed = sample(rng, machines, arity).into_vec();
        out.push((class, allowed));
    }
    Ok(Instance::with_classes(machines, weights, out)?)
}

/// Every multigraph on exactly `vertices` vertices with at most `max_edges`
/// edges (loops and parallel edges allowed), each edge big or small. Edge
/// multisets are enumerated once each, in lexicographic order.
pub fn enumerate_multigraphs(vertices: usize, max_edges: usize, weights: Weights) -> Vec<Instance> {
    let mut kinds = Vec::new();
    for u in 0..vertices {
        for v in u..vertices {
            for class in [SizeClass::Big, SizeClass::Small] {
                kinds.push((class, vec![u, v]));
            }
        }
    }

    fn rec(
        start: usize,
        kinds: &[(SizeClass, Vec<usize>)],
        max_edges: usize,
        chosen: &mut Vec<usize>,
        emit: &mut dyn FnMut(&[usize]),
    ) {
        emit(chosen);
        if chosen.len() == max_edges {
            return;
        }
        for k in start..kinds.len() {
            chosen.push(k);
            rec(k, kinds, max_edges, chosen, emit);
            chosen.pop();
        }
    }

    let mut out = Vec::new();
    rec(0, &kinds, max_edges, &mut Vec::new(), &mut |sel| {
        let jobs = sel.iter().map(|&k| kinds[k].clone()).collect();
        out.push(Instance::with_classes(vertices, weights, jobs).expect("valid by construction"));
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::{parse, serialize};

    fn w25() -> Weights {
        Weights::new(2, 5).unwrap()
    }

    #[test]
    fn parallel_is_the_gate_stress_case() {
        let inst = generate(Family::Parallel, 3, 3, w25(), 0).unwrap();
        assert_eq!(inst.count(SizeClass::Big), 3);
        assert!(inst.jobs()[..3].iter().all(|j| j.allowed == vec![0, 1]));
        assert_eq!(inst.jobs()[3].allowed, vec![2]);
    }

    #[test]
    fn same_seed_same_bytes() {
        for family in [
            Family::Random,
            Family::StarMix,
            Family::CycleMix,
            Family::Parallel,
        ] {
            let a = generate(family, 7, 12, w25(), 99).unwrap();
            let b = generate(family, 7, 12, w25(), 99).unwrap();
            assert_eq!(serialize(&a), serialize(&b));
        }
        let a = generate(Family::Random, 7, 12, w25(), 1).unwrap();
        let b = generate(Family::Random, 7, 12, w25(), 2).unwrap();
        assert_ne!(serialize(&a), serialize(&b));
    }

    #[test]
    fn random_round_trips_through_text() {
        let inst = generate(Family::Random, 6, 10, w25(), 7).unwrap();
        assert_eq!(parse(&serialize(&inst)).unwrap(), inst);
    }

    #[test]
    fn cyclemix_shape() {
        let inst = generate(Family::CycleMix, 6, 8, w25(), 3).unwrap();
        // cycle over 5 vertices, then 3 small chords
        assert_eq!(inst.count(SizeClass::Big), 5);
        assert_eq!(inst.count(SizeClass::Small), 3);
        assert!(inst.jobs()[5..].iter().all(|j| j.allowed.len() == 2));
        assert!(matches!(
            generate(Family::CycleMix, 6, 2, w25(), 3),
            Err(GenError::TooFewEdges { .. })
        ));
    }

    #[test]
    fn starmix_shape() {
        let inst = generate(Family::StarMix, 4, 6, w25(), 3).unwrap();
        assert_eq!(inst.count(SizeClass::Big), 3);
        assert!(inst.jobs()[3..].iter().all(|j| j.is_loop()));
    }

    #[test]
    fn family_names() {
        assert_eq!("CycleMix".parse::<Family>().unwrap(), Family::CycleMix);
        assert!("grid".parse::<Family>().is_err());
        assert!(generate(Family::Parallel, 1, 2, w25(), 0).is_err());
    }

    #[test]
    fn enumeration_counts() {
        // 2 vertices: 3 slots x 2 classes = 6 kinds; multisets of size <= 2: 1 + 6 + 21
        assert_eq!(enumerate_multigraphs(2, 2, w25()).len(), 28);
        // 1 vertex, 2 kinds, up to 3 edges: 1 + 2 + 3 + 4
        assert_eq!(enumerate_multigraphs(1, 3, w25()).len(), 10);
    }

    #[test]
    fn restricted_respects_arity() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let inst = random_restricted(&mut rng, 6, 10, w25(), 4).unwrap();
            assert!(inst.jobs().iter().all(|j| j.allowed.len() <= 4));
            if inst.weights().is_some() {
                assert!(inst
                    .jobs()
                    .iter()
                    .filter(|j| j.size_class == SizeClass::Big)
                    .all(|j| j.allowed.len() <= 2));
            }
        }
    }
}
