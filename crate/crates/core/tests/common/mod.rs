//! Random instance generators and fixtures shared by the integration tests.
#![allow(dead_code)]

use degroot::{Arc, Matrix, ProbabilityVector, StochasticMatrix, WeightedDigraph};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

pub const EXAMPLE_P: [[f64; 4]; 4] = [
    [0.9, 0.1, 0.0, 0.0],
    [0.0, 0.75, 0.25, 0.0],
    [0.25, 0.3, 0.1, 0.35],
    [0.2, 0.15, 0.0, 0.65],
];

pub const EXAMPLE_PI: [f64; 4] = [45.0 / 101.0, 36.0 / 101.0, 10.0 / 101.0, 10.0 / 101.0];

pub fn example_p() -> StochasticMatrix {
    StochasticMatrix::from_rows(&EXAMPLE_P).unwrap()
}

pub fn example_pi() -> ProbabilityVector {
    ProbabilityVector::new(EXAMPLE_PI.to_vec()).unwrap()
}

pub fn data_path(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

fn weight(rng: &mut StdRng) -> f64 {
    rng.random_range(0.01..1.0)
}

/// Normalizes each row; a row left empty gets one random positive entry.
fn finish(
    rng: &mut StdRng,
    mut rows: Vec<Vec<f64>>,
    fallback: impl Fn(usize) -> Vec<usize>,
) -> StochasticMatrix {
    for (i, row) in rows.iter_mut().enumerate() {
        if row.iter().all(|&x| x == 0.0) {
            let options = fallback(i);
            let j = options[rng.random_range(0..options.len())];
            row[j] = weight(rng);
        }
        let sum: f64 = row.iter().sum();
        row.iter_mut().for_each(|x| *x /= sum);
    }
    StochasticMatrix::from_rows(&rows).unwrap()
}

/// Random sparse stochastic matrix; each off-diagonal entry is present with
/// probability `density`, each diagonal entry with probability `loops`.
pub fn sparse_stochastic(rng: &mut StdRng, n: usize, density: f64, loops: f64) -> StochasticMatrix {
    let mut rows = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            let p = if i == j { loops } else { density };
            if rng.random_bool(p) {
                rows[i][j] = weight(rng);
            }
        }
    }
    finish(rng, rows, |i| vec![i])
}

/// Vertices split into `d` cyclic classes; agents in class `c + 1` are only
/// influenced by agents in class `c`.
pub fn cyclic_class_stochastic(
    rng: &mut StdRng,
    n: usize,
    d: usize,
    density: f64,
) -> StochasticMatrix {
    let mut class: Vec<usize> = (0..n).map(|v| v % d).collect();
    class.shuffle(rng);
    let mut rows = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            if class[i] == (class[j] + 1) % d && rng.random_bool(density) {
                rows[i][j] = weight(rng);
            }
        }
    }
    let class2 = class.clone();
    finish(rng, rows, move |i| {
        let want = (class2[i] + d - 1) % d;
        let opts: Vec<usize> = (0..n).filter(|&j| class2[j] == want).collect();
        if opts.is_empty() {
            vec![i]
        } else {
            opts
        }
    })
}

/// Block-diagonal combination of two independent random blocks.
pub fn block_stochastic(rng: &mut StdRng, n: usize) -> StochasticMatrix {
    let k = rng.random_range(1..n);
    let a = sparse_stochastic(rng, k, 0.6, 0.5);
    let b = sparse_stochastic(rng, n - k, 0.6, 0.5);
    let m = Matrix::from_fn(n, |i, j| match (i < k, j < k) {
        (true, true) => a[(i, j)],
        (false, false) => b[(i - k, j - k)],
        _ => 0.0,
    });
    StochasticMatrix::from_rows(&m.to_rows()).unwrap()
}

/// Mixture of sparse, dense, block and periodic stochastic matrices, n <= 8.
pub fn random_stochastic(rng: &mut StdRng) -> StochasticMatrix {
    let n = rng.random_range(1..=8);
    match rng.random_range(0..10) {
        0..=4 => {
            let density = rng.random_range(0.1..0.7);
            let loops = rng.random_range(0.0..1.0);
            sparse_stochastic(rng, n, density, loops)
        }
        5 => sparse_stochastic(rng, n, 1.0, 1.0),
        6 if n >= 2 => block_stochastic(rng, n),
        7 | 8 if n >= 2 => {
            let d = rng.random_range(2..=n.min(4));
            let density = rng.random_range(0.3..1.0);
            cyclic_class_stochastic(rng, n, d, density)
        }
        _ => sparse_stochastic(rng, n, 0.3, 0.2),
    }
}

/// Hand-built periodic and near-periodic cases.
pub fn crafted_periodic() -> Vec<(&'static str, StochasticMatrix)> {
    let m = |rows: &[&[f64]]| {
        let rows: Vec<Vec<f64>> = rows.iter().map(|r| r.to_vec()).collect();
        StochasticMatrix::from_rows(&rows).unwrap()
    };
    vec![
        ("swap", m(&[&[0.0, 1.0], &[1.0, 0.0]])),
        (
            "3-cycle",
            m(&[&[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0], &[1.0, 0.0, 0.0]]),
        ),
        (
            "4-cycle",
            m(&[
                &[0.0, 1.0, 0.0, 0.0],
                &[0.0, 0.0, 1.0, 0.0],
                &[0.0, 0.0, 0.0, 1.0],
                &[1.0, 0.0, 0.0, 0.0],
            ]),
        ),
        (
            "complete bipartite",
            m(&[
                &[0.0, 0.0, 0.5, 0.5],
                &[0.0, 0.0, 0.3, 0.7],
                &[0.6, 0.4, 0.0, 0.0],
                &[0.1, 0.9, 0.0, 0.0],
            ]),
        ),
        (
            "3-cycle with a loop",
            m(&[&[0.5, 0.5, 0.0], &[0.0, 0.0, 1.0], &[1.0, 0.0, 0.0]]),
        ),
        (
            "cycle lengths 2 and 3",
            m(&[&[0.0, 0.5, 0.5], &[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]]),
        ),
        (
            "swap plus absorbing",
            m(&[&[0.0, 1.0, 0.0], &[1.0, 0.0, 0.0], &[0.0, 0.0, 1.0]]),
        ),
        (
            "periodic basic with follower",
            m(&[&[0.0, 1.0, 0.0], &[1.0, 0.0, 0.0], &[0.5, 0.0, 0.5]]),
        ),
        (
            "periodic transient into absorbing",
            m(&[&[1.0, 0.0, 0.0], &[0.2, 0.0, 0.8], &[0.0, 1.0, 0.0]]),
        ),
        (
            "two periodic classes",
            m(&[
                &[0.0, 1.0, 0.0, 0.0, 0.0],
                &[1.0, 0.0, 0.0, 0.0, 0.0],
                &[0.0, 0.0, 0.0, 1.0, 0.0],
                &[0.0, 0.0, 0.0, 0.0, 1.0],
                &[0.0, 0.0, 1.0, 0.0, 0.0],
            ]),
        ),
    ]
}

/// Random digraph with weights in (0, 1], loops allowed.
pub fn random_digraph(rng: &mut StdRng, n: usize) -> WeightedDigraph {
    let density = rng.random_range(0.2..0.9);
    let mut arcs = Vec::new();
    for t in 0..n {
        for h in 0..n {
            if rng.random_bool(density) {
                arcs.push(Arc::new(t, h, rng.random_range(f64::EPSILON..=1.0)));
            }
        }
    }
    WeightedDigraph::new(n, arcs).unwrap()
}

/// Positive probability vector with entries proportional to draws from
/// [0.01, 1).
pub fn random_pi(rng: &mut StdRng, n: usize) -> ProbabilityVector {
    let raw: Vec<f64> = (0..n).map(|_| weight(rng)).collect();
    let sum: f64 = raw.iter().sum();
    ProbabilityVector::new(raw.into_iter().map(|x| x / sum).collect()).unwrap()
}

pub fn random_order(rng: &mut StdRng, n: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    order
}

/// `|a - b| <= tol * max(|a|, |b|)` entrywise.
pub fn rel_close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len()
        && a.iter()
            .zip(b)
            .all(|(x, y)| (x - y).abs() <= tol * x.abs().max(y.abs()))
}

/// Worst relative gap measured against the largest entry of either vector.
pub fn scaled_gap(a: &[f64], b: &[f64]) -> f64 {
    let scale = a.iter().chain(b).fold(0.0f64, |m, x| m.max(x.abs()));
    if scale == 0.0 {
        return 0.0;
    }
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
        / scale
}

pub fn rows_equal(m: &Matrix, tol: f64) -> bool {
    let first = m.row(0);
    m.rows()
        .all(|r| r.iter().zip(first).all(|(a, b)| (a - b).abs() <= tol))
}
