//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use graph_balance::bench::{parse_suite, run, BenchOptions};
use graph_balance::flow::{max_flow, reference_max_flow, DiNetwork};
use graph_balance::generate::{enumerate_multigraphs, random_restricted};
use graph_balance::lst::{lst_round, lst_threshold};
use graph_balance::network::{feasible, NetworkParams};
use graph_balance::oracle::{brute_force_opt, DEFAULT_BUDGET};
use graph_balance::rounding::partial_orientation;
use graph_balance::solver::min_feasible_q;
use graph_balance::{
    exact_uniform, ratio_within, round_flow, rounding_bound, solve, Instance, SizeClass, Weights,
};
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const EXHAUSTIVE_PAIRS: [(u64, u64); 4] = [(1, 2), (2, 5), (1, 3), (3, 4)];
const RANDOM_PAIRS: [(u64, u64); 8] = [
    (1, 2),
    (2, 5),
    (1, 3),
    (3, 4),
    (2, 7),
    (3, 5),
    (3, 10),
    (5, 8),
];
const CRITERION1_SECONDS: f64 = 60.0;

struct Outcome {
    id: &'static str,
    name: &'static str,
    passed: bool,
    detail: String,
}

/// Instance with its exact optimum total.
struct Checked {
    instance: Instance,
    opt: u64,
}

fn pair(rng: &mut ChaCha8Rng, pairs: &[(u64, u64)]) -> Weights {
    let (s, b) = pairs[rng.gen_range(0..pairs.len())];
    Weights::new(s, b).unwrap()
}

fn ratio_suite() -> (Outcome, Vec<Checked>) {
    let start = Instant::now();
    let mut instances = Vec::new();
    for &(s, b) in &EXHAUSTIVE_PAIRS {
        let w = Weights::new(s, b).unwrap();
        for v in 1..=4 {
            instances.extend(enumerate_multigraphs(v, 5, w));
        }
    }
    let exhaustive = instances.len();

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let mut random = 0;
    while random < 1000 {
        let machines = rng.gen_range(1..=8);
        let jobs = rng.gen_range(0..=12);
        let w = pair(&mut rng, &RANDOM_PAIRS);
        let inst = random_restricted(&mut rng, machines, jobs, w, 4).unwrap();
        let product: u128 = inst
            .jobs()
            .iter()
            .map(|j| j.allowed.len() as u128)
            .product();
        if product > DEFAULT_BUDGET as u128 {
            continue;
        }
        instances.push(inst);
        random += 1;
    }

    let mut checked = Vec::with_capacity(instances.len());
    let mut violations = Vec::new();
    let mut worst = Ratio::new(0u64, 1);
    for inst in instances {
        let report = solve(&inst).expect("solve");
        let opt = brute_force_opt(&inst, DEFAULT_BUDGET).expect("oracle");
        let opt_total = inst.total(opt.opt);
        let ok = report.total >= opt_total
            && ratio_within(report.total, opt_total, 3, 2).unwrap_or(false)
            && inst.total(inst.makespan(&report.orientation).unwrap()) == report.total;
        if opt_total > 0 {
            worst = worst.max(Ratio::new(report.total, opt_total));
        }
        if !ok {
            violations.push(format!(
                "{:?} -> {} vs opt {}",
                inst, report.total, opt_total
            ));
        }
        checked.push(Checked {
            instance: inst,
            opt: opt_total,
        });
    }
    let secs = start.elapsed().as_secs_f64();
    let passed = violations.is_empty() && secs < CRITERION1_SECONDS;
    let mut detail = format!(
        "{exhaustive} exhaustive + {random} random instances, {} violations, max ratio {worst}, {secs:.1}s (limit {CRITERION1_SECONDS}s)",
        violations.len()
    );
    if let Some(v) = violations.first() {
        detail.push_str(&format!("; first: {v}"));
    }
    (
        Outcome {
            id: "1",
            name: "approximation ratio <= 3/2 against oracle",
            passed,
            detail,
        },
        checked,
    )
}

fn opt_coupling(suite: &[Checked]) -> Outcome {
    let (mut shape_a, mut shape_b, mut failures) = (0, 0, Vec::new());
    for c in suite {
        let Some(w) = c.instance.weights() else {
            continue;
        };
        let (ws, wb, k) = (w.small(), w.big(), w.k());
        if c.opt >= 2 * wb {
            continue;
        }
        let params = if c.opt >= wb && (c.opt - wb) % ws == 0 {
            shape_a += 1;
            NetworkParams::new(k, (c.opt - wb) / ws + k)
        } else if c.opt % ws == 0 {
            shape_b += 1;
            NetworkParams::new(k + 1, c.opt / ws)
        } else {
            failures.push(format!("opt {} has neither shape for w=({ws},{wb})", c.opt));
            continue;
        };
        if !feasible(&c.instance, params).unwrap().feasible {
            failures.push(format!("{:?} infeasible at {:?}", c.instance, params));
        }
    }
    let mut detail = format!(
        "{shape_a} instances with opt = w_big + t*w_small, {shape_b} with opt = t*w_small, {} violations",
        failures.len()
    );
    if let Some(f) = failures.first() {
        detail.push_str(&format!("; first: {f}"));
    }
    Outcome {
        id: "2",
        name: "feasibility of N(k, t+k) and N(k+1, t) at the optimum",
        passed: failures.is_empty() && shape_a > 0 && shape_b > 0,
        detail,
    }
}

fn rounding_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
    let (mut done, mut failures) = (0, Vec::new());
    let (mut even, mut with_split) = (0, 0);
    while done < 500 {
        let machines = rng.gen_range(1..=8);
        let jobs = rng.gen_range(1..=14);
        let w = pair(&mut rng, &RANDOM_PAIRS);
        let inst = random_restricted(&mut rng, machines, jobs, w, 4).unwrap();
        let Some(w) = inst.weights() else { continue };
        let p = rng.gen_range(1..=6);
        let small = inst.count(SizeClass::Small) as u64;
        let Some((q_min, _)) = min_feasible_q(&inst, p, p + small).unwrap() else {
            continue;
        };
        let q = q_min + rng.gen_range(0..=2);
        let f = feasible(&inst, NetworkParams::new(p, q)).unwrap();
        assert!(f.feasible, "feasibility is monotone in q");
        done += 1;
        if p % 2 == 0 {
            even += 1;
        }

        if let Ok(partial) = partial_orientation(&inst, &f.network, &f.flow) {
            if !partial.unoriented_big.is_empty() {
                with_split += 1;
            }
        }
        let o = match round_flow(&inst, &f.network, &f.flow) {
            Ok(o) => o,
            Err(e) => {
                failures.push(format!("rounding error {e} on {inst:?} p={p} q={q}"));
                continue;
            }
        };
        let Ok(loads) = inst.loads(&o) else {
            failures.push(format!("disallowed assignment on {inst:?}"));
            continue;
        };
        if loads.iter().any(|l| l.big > 1) {
            failures.push(format!("two big jobs on one machine: {inst:?} p={p} q={q}"));
        }
        let ms = inst.total(inst.makespan(&o).unwrap());
        let scaled = Ratio::new(ms as i64, w.big() as i64);
        let bound = rounding_bound(p, q, w);
        if scaled > bound {
            failures.push(format!(
                "makespan {scaled} > bound {bound}: {inst:?} p={p} q={q}"
            ));
        }
    }
    let mut detail = format!(
        "{done} feasible (instance, p, q) triples ({even} with even p, {with_split} needing the split matching), {} violations",
        failures.len()
    );
    if let Some(f) = failures.first() {
        detail.push_str(&format!("; first: {f}"));
    }
    Outcome {
        id: "3",
        name: "rounded makespan within the rounding bound",
        passed: failures.is_empty(),
        detail,
    }
}

fn lst_suite(suite: &[Checked]) -> Outcome {
    let mut failures = Vec::new();
    for c in suite {
        let t = lst_threshold(&c.instance);
        let o = lst_round(&c.instance, t).expect("lst_round at its own threshold");
        let ms = c.instance.total(c.instance.makespan(&o).unwrap());
        if ms > t + c.instance.big_weight() || t > c.opt {
            failures.push(format!(
                "{:?}: threshold {t}, makespan {ms}, opt {}",
                c.instance, c.opt
            ));
        }
    }
    let mut detail = format!("{} instances, {} violations", suite.len(), failures.len());
    if let Some(f) = failures.first() {
        detail.push_str(&format!("; first: {f}"));
    }
    Outcome {
        id: "4",
        name: "fallback makespan <= threshold + w_big and threshold <= opt",
        passed: failures.is_empty(),
        detail,
    }
}

fn flow_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0005);
    let mut failures = Vec::new();
    let mut total_value = 0;
    for _ in 0..500 {
        let n = rng.gen_range(2..=40);
        let arcs = rng.gen_range(0..=200);
        let source = rng.gen_range(0..n);
        let mut sink = rng.gen_range(0..n - 1);
        if sink >= source {
            sink += 1;
        }
        let mut g = DiNetwork::new(n, source, sink).unwrap();
        for _ in 0..arcs {
            g.add_arc(
                rng.gen_range(0..n),
                rng.gen_range(0..n),
                rng.gen_range(0..=20),
            )
            .unwrap();
        }
        let fast = max_flow(&g);
        let slow = reference_max_flow(&g);
        total_value += fast.value;
        if fast.value != slow.value || fast.check(&g).is_err() || slow.check(&g).is_err() {
            failures.push(format!("values {} vs {}", fast.value, slow.value));
        }
    }
    Outcome {
        id: "5",
        name: "Dinic equals reference augmenting paths",
        passed: failures.is_empty(),
        detail: format!(
            "500 networks (total flow {total_value}), {} mismatches",
            failures.len()
        ),
    }
}

fn degenerate_exactness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0006);
    let mut failures = Vec::new();
    for _ in 0..200 {
        let machines = rng.gen_range(1..=6);
        let edges = rng.gen_range(0..=10);
        let jobs = (0..edges)
            .map(|_| vec![rng.gen_range(0..machines), rng.gen_range(0..machines)])
            .collect();
        let inst = Instance::uniform(machines, jobs).unwrap();
        let exact = exact_uniform(&inst).unwrap();
        let opt = brute_force_opt(&inst, DEFAULT_BUDGET).unwrap();
        if exact.total != inst.total(opt.opt) {
            failures.push(format!(
                "{inst:?}: {} vs {}",
                exact.total,
                inst.total(opt.opt)
            ));
        }
    }
    Outcome {
        id: "6",
        name: "single-weight solver equals oracle",
        passed: failures.is_empty(),
        detail: format!("200 instances, {} mismatches", failures.len()),
    }
}

fn reproducibility() -> Outcome {
    let suite = parse_suite(
        "random:6:10:2/5:20,parallel:3:4:2/5:3,starmix:6:9:1/3:10,cyclemix:7:10:3/4:10,exhaustive:2:3:1/2",
    )
    .unwrap();
    let options = BenchOptions {
        seed: 42,
        ..BenchOptions::default()
    };
    let a = run(&suite, &options).unwrap().to_csv();
    let b = run(&suite, &options).unwrap().to_csv();
    Outcome {
        id: "7",
        name: "bench CSV byte-identical across runs",
        passed: a == b,
        detail: format!("{} bytes, {} rows", a.len(), a.lines().count() - 1),
    }
}

fn main() -> ExitCode {
    let (c1, suite) = ratio_suite();
    let outcomes = vec![
        c1,
        opt_coupling(&suite),
        rounding_suite(),
        lst_suite(&suite),
        flow_equivalence(),
        degenerate_exactness(),
        reproducibility(),
    ];
    let mut failed = 0;
    for o in &outcomes {
        let tag = if o.passed { "PASS" } else { "FAIL" };
        if !o.passed {
            failed += 1;
        }
        println!("[{tag}] criterion {}: {} -- {}", o.id, o.name, o.detail);
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        outcomes.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
