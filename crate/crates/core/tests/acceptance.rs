//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails. Every random instance is seeded.

mod common;

use std::process::ExitCode;

use common::*;
use degroot::forests::ENUMERATION_BOUND;
use degroot::matrix::{DEFAULT_MAX_DOUBLINGS, DEFAULT_PIVOT_TOL, DEFAULT_TOL};
use degroot::*;
use rand::Rng;
use serde_json::Value;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn stationary_via_cli(method: &str) -> Result<Vec<f64>, String> {
    let path = data_path("example1.csv");
    let args = [
        "degroot",
        "--json",
        "stationary",
        path.to_str().unwrap(),
        "--method",
        method,
    ];
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = cli::run(args, &mut out, &mut err);
    if code != 0 {
        return Err(format!(
            "method {method}: exit {code}: {}",
            String::from_utf8_lossy(&err)
        ));
    }
    let doc: Value = serde_json::from_slice(&out).map_err(|e| e.to_string())?;
    doc["pi"]
        .as_array()
        .ok_or("missing pi")?
        .iter()
        .map(|v| v.as_f64().ok_or_else(|| "non-numeric pi".to_string()))
        .collect()
}

/// 1. Worked-example stationary vector by all three methods within 1e-10.
fn criterion_1() -> Check {
    let mut worst = 0.0f64;
    for method in ["linear", "trees", "power"] {
        let pi = stationary_via_cli(method)?;
        let gap = pi
            .iter()
            .zip(EXAMPLE_PI)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        ensure(gap <= 1e-10, || {
            format!("method {method}: max error {gap:e}")
        })?;
        worst = worst.max(gap);
    }
    Ok(format!("max error over methods {worst:.2e} <= 1e-10"))
}

/// 2. Worked-example synthesis with beta = 10/101.
fn criterion_2() -> Check {
    let spec = cycle_from_pi(&example_pi(), Some(10.0 / 101.0), None).map_err(|e| e.to_string())?;
    let x_want = [2.0 / 9.0, 5.0 / 18.0, 1.0, 1.0];
    let loop_want = [7.0 / 9.0, 13.0 / 18.0, 0.0, 0.0];
    let gap = spec
        .entering_weight()
        .iter()
        .zip(x_want)
        .chain(spec.loop_weight().iter().zip(loop_want))
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    ensure(gap <= 1e-12, || format!("max error {gap:e}"))?;
    Ok(format!(
        "entering and loop weights within {gap:.2e} <= 1e-12"
    ))
}

/// 3. The synthesized cycle shares the power limit of P, in both orders.
fn criterion_3() -> Check {
    let p = example_p();
    let default_cycle =
        cycle_to_matrix(&cycle_from_pi(&example_pi(), Some(10.0 / 101.0), None).unwrap()).unwrap();
    // Any order other than the default; which one is immaterial.
    let other_order = [0, 2, 1, 3];
    let reordered_cycle = cycle_to_matrix(
        &cycle_from_pi(&example_pi(), Some(10.0 / 101.0), Some(&other_order)).unwrap(),
    )
    .unwrap();
    ensure(default_cycle != reordered_cycle, || {
        "orders produced the same matrix".into()
    })?;

    let lim = |m: &StochasticMatrix| limit_powers(m, DEFAULT_TOL, DEFAULT_MAX_DOUBLINGS);
    let (lp, lb) = (lim(&p), lim(&default_cycle));
    ensure(lp.converged() && lb.converged(), || {
        "a power limit did not converge".into()
    })?;
    let diff = (&lb.limit_candidate - &lp.limit_candidate).norm_inf();
    ensure(diff <= 1e-8, || format!("||P_H^inf - P^inf|| = {diff:e}"))?;

    for (name, ph) in [
        ("default order", &default_cycle),
        ("other order", &reordered_cycle),
    ] {
        let r = verify_equivalence(&p, ph, 1e-9).unwrap();
        ensure(r.verdict == Verdict::Equivalent, || {
            format!("{name}: verdict {:?}", r.verdict)
        })?;
    }
    let r = verify_equivalence(&default_cycle, &reordered_cycle, 1e-9).unwrap();
    ensure(r.verdict == Verdict::Equivalent, || {
        "the two orders are not equivalent".into()
    })?;
    Ok(format!(
        "||P_H^inf - P^inf||_inf = {diff:.2e}; both orders equivalent"
    ))
}

/// 4. Tree-weight round trip on 200 random positive q, n in 2..=7.
fn criterion_4() -> Check {
    let mut rng = rng(4);
    let mut worst = 0.0f64;
    for case in 0..200 {
        let n = rng.random_range(2..=7);
        let q: Vec<f64> = (0..n)
            .map(|_| 10f64.powf(rng.random_range(-3.0..=3.0)))
            .collect();
        let order = random_order(&mut rng, n);
        let spec = cycle_from_tree_weights(&q, Some(&order)).map_err(|e| e.to_string())?;
        let t = tree_weight_vector(&spec.to_digraph()).map_err(|e| e.to_string())?;
        let gap = t
            .per_root
            .iter()
            .zip(&q)
            .map(|(a, b)| (a - b).abs() / b)
            .fold(0.0, f64::max);
        ensure(gap <= 1e-9, || {
            format!("case {case}: relative error {gap:e}")
        })?;
        worst = worst.max(gap);
    }
    Ok(format!(
        "200 cases, worst relative error {worst:.2e} <= 1e-9"
    ))
}

/// 5. Matrix-tree minors agree with enumeration on 100 random digraphs.
fn criterion_5() -> Check {
    let mut rng = rng(5);
    let mut worst = 0.0f64;
    for case in 0..100 {
        let n = rng.random_range(1..=6);
        let g = random_digraph(&mut rng, n);
        let enumerated = tree_weight_vector(&g).map_err(|e| e.to_string())?;
        let minors = tree_weights_via_minors(&g);
        let gap = scaled_gap(&enumerated.per_root, &minors.per_root);
        ensure(gap <= 1e-9, || format!("case {case}: relative gap {gap:e}"))?;
        worst = worst.max(gap);
    }
    Ok(format!(
        "100 digraphs, worst relative gap {worst:.2e} <= 1e-9"
    ))
}

struct Instance {
    p: StochasticMatrix,
    report: AnalysisReport,
    limit: LimitResult,
}

fn suite() -> Vec<Instance> {
    let mut rng = rng(6);
    (0..100)
        .map(|_| random_stochastic(&mut rng))
        .map(|p| {
            let report = analyze(&digraph_from_matrix(&p, 0.0));
            let limit = limit_powers(&p, DEFAULT_TOL, DEFAULT_MAX_DOUBLINGS);
            Instance { p, report, limit }
        })
        .collect()
}

/// 6. rank L = n - nu, rank L = rank L^2, rank P^inf = nu when it exists.
fn criterion_6(suite: &[Instance]) -> Check {
    let mut converged = 0;
    for (case, inst) in suite.iter().enumerate() {
        let n = inst.p.dim();
        let l = inst.p.laplacian();
        let rank_l = matrix_rank(&l, DEFAULT_PIVOT_TOL);
        let rank_l2 = matrix_rank(&(&l * &l), DEFAULT_PIVOT_TOL);
        let nu = inst.report.nu;
        ensure(rank_l == n - nu, || {
            format!("case {case}: rank L = {rank_l}, n - nu = {}", n - nu)
        })?;
        ensure(rank_l == rank_l2, || {
            format!("case {case}: rank L = {rank_l}, rank L^2 = {rank_l2}")
        })?;
        if inst.limit.converged() {
            converged += 1;
            let rank_lim = matrix_rank(&inst.limit.limit_candidate, 1e-8);
            ensure(rank_lim == nu, || {
                format!("case {case}: rank P^inf = {rank_lim}, nu = {nu}")
            })?;
        }
    }
    let nus: Vec<usize> = suite.iter().map(|i| i.report.nu).collect();
    Ok(format!(
        "100 matrices (nu up to {}, {converged} with a limit): all rank identities hold",
        nus.iter().max().unwrap()
    ))
}

/// 7. Graph criteria agree with the numeric power limit.
fn criterion_7(suite: &[Instance]) -> Check {
    let mut cases: Vec<(String, StochasticMatrix, AnalysisReport, LimitResult)> = suite
        .iter()
        .enumerate()
        .map(|(i, inst)| {
            (
                format!("random {i}"),
                inst.p.clone(),
                inst.report.clone(),
                inst.limit.clone(),
            )
        })
        .collect();
    for (name, p) in crafted_periodic() {
        let report = analyze(&digraph_from_matrix(&p, 0.0));
        let limit = limit_powers(&p, DEFAULT_TOL, DEFAULT_MAX_DOUBLINGS);
        cases.push((name.to_string(), p, report, limit));
    }
    let (mut periodic, mut regular) = (0, 0);
    for (name, _, report, limit) in &cases {
        ensure(report.limit_exists == limit.converged(), || {
            format!(
                "{name}: limit_exists = {}, power method converged = {}",
                report.limit_exists,
                limit.converged()
            )
        })?;
        let rank_one_limit = limit.converged() && rows_equal(&limit.limit_candidate, 1e-8);
        ensure(report.regular == rank_one_limit, || {
            format!(
                "{name}: regular = {}, rank-one limit = {rank_one_limit}",
                report.regular
            )
        })?;
        periodic += usize::from(!report.limit_exists);
        regular += usize::from(report.regular);
    }
    Ok(format!(
        "{} cases ({periodic} without a limit, {regular} regular): 100% agreement",
        cases.len()
    ))
}

/// 8. Stationary vector of synthesized cycles is pi for every beta and order.
fn criterion_8() -> Check {
    let mut rng = rng(8);
    let (mut worst_pi, mut worst_beta) = (0.0f64, 0.0f64);
    for case in 0..50 {
        let n = rng.random_range(2..=8);
        let pi = random_pi(&mut rng, n);
        let min_pi = pi.iter().copied().fold(f64::INFINITY, f64::min);
        for b in 0..5 {
            let beta = if b == 0 {
                min_pi
            } else {
                min_pi * rng.random_range(0.01..1.0)
            };
            for _ in 0..3 {
                let order = random_order(&mut rng, n);
                let spec =
                    cycle_from_pi(&pi, Some(beta), Some(&order)).map_err(|e| e.to_string())?;
                let p = cycle_to_matrix(&spec).map_err(|e| e.to_string())?;
                let got = stationary_vector(&p).map_err(|e| e.to_string())?;
                let gap = got
                    .iter()
                    .zip(pi.iter())
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max);
                ensure(gap <= 1e-10, || {
                    format!("case {case}: stationary error {gap:e}")
                })?;
                worst_pi = worst_pi.max(gap);

                let products: Vec<f64> = spec
                    .entering_weight()
                    .iter()
                    .zip(pi.iter())
                    .map(|(x, p)| x * p)
                    .collect();
                let spread = products
                    .iter()
                    .map(|v| (v - products[0]).abs())
                    .fold(0.0, f64::max);
                ensure(spread <= 1e-12, || {
                    format!("case {case}: x_k pi_k spread {spread:e}")
                })?;
                worst_beta = worst_beta.max(spread);
            }
        }
    }
    Ok(format!(
        "750 cycles: stationary error {worst_pi:.2e} <= 1e-10, x_k*pi_k spread {worst_beta:.2e} <= 1e-12"
    ))
}

/// 9. The forest matrix is the eigenprojection: idempotent, annihilates L.
fn criterion_9(suite: &[Instance]) -> Check {
    let mut worst = 0.0f64;
    let mut checked = 0;
    for (case, inst) in suite
        .iter()
        .enumerate()
        .filter(|(_, i)| i.limit.converged())
    {
        assert!(inst.p.dim() <= ENUMERATION_BOUND);
        let j = max_out_forest_matrix(&digraph_from_matrix(&inst.p, 0.0))
            .map_err(|e| format!("case {case}: {e}"))?
            .entries;
        let l = inst.p.laplacian();
        let idem = (&(&j * &j) - &j).norm_inf();
        let jl = (&j * &l).norm_inf();
        let lj = (&l * &j).norm_inf();
        let m = idem.max(jl).max(lj);
        ensure(m <= 1e-9, || {
            format!("case {case}: ||J^2-J||={idem:e} ||JL||={jl:e} ||LJ||={lj:e}")
        })?;
        worst = worst.max(m);
        checked += 1;
    }
    Ok(format!(
        "{checked} converged cases, worst norm {worst:.2e} <= 1e-9"
    ))
}

fn main() -> ExitCode {
    let suite = suite();
    let results: Vec<(&str, Check)> = vec![
        ("1 example stationary vector (three methods)", criterion_1()),
        ("2 example synthesis, beta = 10/101", criterion_2()),
        ("3 equivalence of P and its cycles", criterion_3()),
        ("4 tree-weight round trip", criterion_4()),
        ("5 matrix-tree minors vs enumeration", criterion_5()),
        ("6 rank identities", criterion_6(&suite)),
        ("7 convergence criterion agreement", criterion_7(&suite)),
        ("8 beta and order invariance", criterion_8()),
        ("9 eigenprojection properties", criterion_9(&suite)),
    ];
    let mut failed = 0;
    for (name, result) in &results {
        match result {
            Ok(detail) => println!("PASS  criterion {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  criterion {name}: {detail}");
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        results.len() - failed,
        results.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
