use graph_balance::format::{parse, serialize};
use graph_balance::network::{feasible, NetworkParams};
use graph_balance::oracle::{brute_force_opt, DEFAULT_BUDGET};
use graph_balance::solver::{min_feasible_q, Branch};
use graph_balance::{round_flow, rounding_bound, solve, Instance, SizeClass, Weights};
use num_rational::Ratio;
use proptest::prelude::*;

fn arb_weights() -> impl Strategy<Value = Weights> {
    (1u64..6, 1u64..8).prop_map(|(s, extra)| Weights::new(s, s + extra).unwrap())
}

fn arb_instance() -> impl Strategy<Value = Instance> {
    (1usize..6, arb_weights()).prop_flat_map(|(m, w)| {
        proptest::collection::vec(
            (
                any::<bool>(),
                proptest::collection::btree_set(0..m, 1..=m.min(3)),
            ),
            0..9,
        )
        .prop_map(move |jobs| {
            let jobs = jobs
                .into_iter()
                .map(|(big, set)| {
                    let mut allowed: Vec<usize> = set.into_iter().collect();
                    if big {
                        allowed.truncate(2);
                        (SizeClass::Big, allowed)
                    } else {
                        (SizeClass::Small, allowed)
                    }
                })
                .collect();
            Instance::with_classes(m, w, jobs).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn solve_is_within_three_halves(inst in arb_instance()) {
        let report = solve(&inst).unwrap();
        let opt = inst.total(brute_force_opt(&inst, DEFAULT_BUDGET).unwrap().opt);
        prop_assert!(report.total >= opt);
        prop_assert!(2 * report.total <= 3 * opt);
        prop_assert_eq!(inst.total(inst.makespan(&report.orientation).unwrap()), report.total);
    }

    #[test]
    fn network_candidates_meet_their_bound(inst in arb_instance()) {
        let Some(w) = inst.weights() else { return Ok(()); };
        let small = inst.count(SizeClass::Small) as u64;
        for p in [w.k(), w.k() + 1] {
            if let Some((q, f)) = min_feasible_q(&inst, p, p + small).unwrap() {
                if q > 0 {
                    prop_assert!(!feasible(&inst, NetworkParams::new(p, q - 1)).unwrap().feasible);
                }
                prop_assert!(feasible(&inst, NetworkParams::new(p, q + 1)).unwrap().feasible);
                let o = round_flow(&inst, &f.network, &f.flow).unwrap();
                let ms = inst.total(inst.makespan(&o).unwrap());
                prop_assert!(Ratio::new(ms as i64, w.big() as i64) <= rounding_bound(p, q, w));
            }
        }
    }

    #[test]
    fn solve_is_deterministic(inst in arb_instance()) {
        let again = parse(&serialize(&inst)).unwrap();
        if inst.job_count() > 0 {
            prop_assert_eq!(&again, &inst);
        }
        prop_assert_eq!(solve(&inst).unwrap().orientation, solve(&again).unwrap().orientation);
    }
}

#[test]
fn chosen_branch_has_the_smallest_candidate() {
    let w = Weights::new(1, 3).unwrap();
    let inst = Instance::with_classes(
        3,
        w,
        vec![
            (SizeClass::Big, vec![0, 1]),
            (SizeClass::Big, vec![1, 2]),
            (SizeClass::Big, vec![0, 2]),
            (SizeClass::Small, vec![0, 1, 2]),
            (SizeClass::Small, vec![0]),
        ],
    )
    .unwrap();
    let r = solve(&inst).unwrap();
    let min = r.candidates.iter().map(|c| c.total).min().unwrap();
    assert_eq!(r.total, min);
    let first = r.candidates.iter().find(|c| c.total == min).unwrap();
    assert_eq!(first.branch, r.branch);
    assert_ne!(r.branch, Branch::ExactDegenerate);
}
