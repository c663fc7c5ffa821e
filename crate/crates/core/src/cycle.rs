//! Hamiltonian cycles with loops that realize a prescribed final weight
//! distribution.
//!
//! In a Hamiltonian cycle the only out-tree rooted at `k` is the cycle minus
//! the arc entering `k`, so `t_k` is the product of all entering weights
//! except `x_k`. Inverting that relation gives the unique cycle with tree
//! weights `q`:
//!
//! ```text
//! x_k = (q_1 q_2 ... q_n)^(1/(n-1)) / q_k
//! ```
//!
//! A positive probability vector `pi` is realized by entering weights
//! `x_k = beta / pi_k` for any `0 < beta <= min pi`, with a loop of weight
//! `1 - x_k` at every vertex. Neither `beta` nor the visiting order affects
//! the final distribution.

use crate::digraph::{Arc, WeightedDigraph};
use crate::error::{Error, Result};
use crate::matrix::{
    limit_powers, Matrix, ProbabilityVector, StochasticMatrix, DEFAULT_MAX_DOUBLINGS, DEFAULT_TOL,
};

/// Slack allowed when `beta` is compared against `min pi`.
const BETA_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct CycleSpec {
    order: Vec<usize>,
    entering_weight: Vec<f64>,
    loop_weight: Vec<f64>,
    beta: Option<f64>,
}

impl CycleSpec {
    pub fn n(&self) -> usize {
        self.order.len()
    }

    /// Visiting order `v_1, ..., v_n`; the cycle arcs are
    /// `v_1 -> v_2 -> ... -> v_n -> v_1`.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// Weight `x_k` of the cycle arc entering each vertex `k`.
    pub fn entering_weight(&self) -> &[f64] {
        &self.entering_weight
    }

    pub fn loop_weight(&self) -> &[f64] {
        &self.loop_weight
    }

    pub fn beta(&self) -> Option<f64> {
        self.beta
    }

    /// Tail of the cycle arc entering `v`.
    pub fn predecessor(&self, v: usize) -> usize {
        let n = self.n();
        let pos = self
            .order
            .iter()
            .position(|&u| u == v)
            .expect("vertex on the cycle");
        self.order[(pos + n - 1) % n]
    }

    /// The cycle as a digraph, with loops of positive weight.
    pub fn to_digraph(&self) -> WeightedDigraph {
        let n = self.n();
        let arcs = if n == 1 {
            vec![Arc::new(
                0,
                0,
                self.entering_weight[0] + self.loop_weight[0],
            )]
        } else {
            let mut arcs: Vec<Arc> = (0..n)
                .map(|v| Arc::new(self.predecessor(v), v, self.entering_weight[v]))
                .collect();
            arcs.extend(
                (0..n)
                    .filter(|&v| self.loop_weight[v] > 0.0)
                    .map(|v| Arc::new(v, v, self.loop_weight[v])),
            );
            arcs
        };
        WeightedDigraph::new(n, arcs).expect("cycle arcs are valid")
    }
}

/// The order `n-1 -> n-2 -> ... -> 0 -> n-1`.
pub fn default_order(n: usize) -> Vec<usize> {
    (0..n).rev().collect()
}

fn resolve_order(n: usize, order: Option<&[usize]>) -> Result<Vec<usize>> {
    let Some(order) = order else {
        return Ok(default_order(n));
    };
    let mut seen = vec![false; n];
    if order.len() != n {
        return Err(Error::InvalidOrder { n });
    }
    for &v in order {
        if v >= n || std::mem::replace(&mut seen[v], true) {
            return Err(Error::InvalidOrder { n });
        }
    }
    Ok(order.to_vec())
}

/// The unique Hamiltonian cycle (no loops) whose spanning out-tree weights
/// equal `q`. The weights do not depend on `order`.
pub fn cycle_from_tree_weights(q: &[f64], order: Option<&[usize]>) -> Result<CycleSpec> {
    let n = q.len();
    if n < 2 {
        return Err(Error::DegenerateN);
    }
    if let Some(k) = q.iter().position(|&x| !(x > 0.0 && x.is_finite())) {
        return Err(Error::NonPositiveTarget { vertex: k });
    }
    let order = resolve_order(n, order)?;
    let log_mean = q.iter().map(|x| x.ln()).sum::<f64>() / (n - 1) as f64;
    let entering_weight = q.iter().map(|x| (log_mean - x.ln()).exp()).collect();
    Ok(CycleSpec {
        order,
        entering_weight,
        loop_weight: vec![0.0; n],
        beta: None,
    })
}

/// A stochastic Hamiltonian cycle with loops whose stationary vector is
/// `pi`. The entering weight of vertex `k` is `beta / pi_k`; `beta`
/// defaults to `min pi`, the largest value keeping every weight at most 1.
pub fn cycle_from_pi(
    pi: &ProbabilityVector,
    beta: Option<f64>,
    order: Option<&[usize]>,
) -> Result<CycleSpec> {
    if let Some(k) = pi.iter().position(|&x| x <= 0.0) {
        return Err(Error::NonPositivePi { agent: k });
    }
    let n = pi.len();
    let order = resolve_order(n, order)?;
    let min_pi = pi.iter().copied().fold(f64::INFINITY, f64::min);
    let beta = beta.unwrap_or(min_pi);
    if !(beta > 0.0) || beta > min_pi * (1.0 + BETA_SLACK) {
        return Err(Error::BetaOutOfRange { beta, max: min_pi });
    }
    let entering_weight: Vec<f64> = pi.iter().map(|&p| (beta / p).min(1.0)).collect();
    let loop_weight = entering_weight.iter().map(|x| 1.0 - x).collect();
    Ok(CycleSpec {
        order,
        entering_weight,
        loop_weight,
        beta: Some(beta),
    })
}

/// Influence matrix of the cycle: row `v` carries `x_v` on the predecessor
/// of `v` and `1 - x_v` on `v` itself.
pub fn cycle_to_matrix(spec: &CycleSpec) -> Result<StochasticMatrix> {
    let n = spec.n();
    let mut m = Matrix::zeros(n);
    for v in 0..n {
        let x = spec.entering_weight[v];
        if x > 1.0 {
            return Err(Error::WeightAboveOne {
                vertex: v,
                weight: x,
            });
        }
        m[(v, spec.predecessor(v))] += x;
        m[(v, v)] += 1.0 - x;
    }
    Ok(StochasticMatrix::from_checked(m))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Equivalent,
    NotEquivalent,
    /// At least one of the power limits does not exist.
    Indeterminate,
}

/// Limit diagnostics for one side of an equivalence check.
#[derive(Debug, Clone, PartialEq)]
pub struct SideReport {
    pub limit_exists: bool,
    /// All rows of the limit agree within the tolerance.
    pub rank_one: bool,
    /// First row of the limit, when it exists.
    pub stationary_row: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceReport {
    pub a: SideReport,
    pub b: SideReport,
    /// Whether the stationary rows agree within the tolerance; `None` when
    /// either side lacks a rank-one limit.
    pub rows_match: Option<bool>,
    pub max_row_difference: Option<f64>,
    pub verdict: Verdict,
}

fn side_report(p: &StochasticMatrix, tol: f64) -> SideReport {
    let lim = limit_powers(p, DEFAULT_TOL, DEFAULT_MAX_DOUBLINGS);
    if !lim.converged() {
        return SideReport {
            limit_exists: false,
            rank_one: false,
            stationary_row: None,
        };
    }
    let q = &lim.limit_candidate;
    let first = q.row(0);
    let rank_one = q
        .rows()
        .all(|row| row.iter().zip(first).all(|(a, b)| (a - b).abs() <= tol));
    SideReport {
        limit_exists: true,
        rank_one,
        stationary_row: Some(first.to_vec()),
    }
}

/// Whether two procedures reach the same consensus for every initial
/// opinion vector: both power limits exist, are rank one, and share their
/// rows within `tol`.
pub fn verify_equivalence(
    pa: &StochasticMatrix,
    pb: &StochasticMatrix,
    tol: f64,
) -> Result<EquivalenceReport> {
    if pa.dim() != pb.dim() {
        return Err(Error::DimensionMismatch {
            expected: pa.dim(),
            found: pb.dim(),
        });
    }
    let a = side_report(pa, tol);
    let b = side_report(pb, tol);
    let (rows_match, max_row_difference) = match (&a.stationary_row, &b.stationary_row) {
        (Some(ra), Some(rb)) if a.rank_one && b.rank_one => {
            let diff = ra
                .iter()
                .zip(rb)
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max);
            (Some(diff <= tol), Some(diff))
        }
        _ => (None, None),
    };
    let verdict = if !(a.limit_exists && b.limit_exists) {
        Verdict::Indeterminate
    } else if rows_match == Some(true) {
        Verdict::Equivalent
    } else {
        Verdict::NotEquivalent
    };
    Ok(EquivalenceReport {
        a,
        b,
        rows_match,
        max_row_difference,
        verdict,
    })
}
