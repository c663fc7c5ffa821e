//! Dense square matrices and the stochastic-matrix operations built on them.

use std::fmt;
use std::ops::{Index, IndexMut, Mul, Sub};

use crate::digraph::{analyze, digraph_from_matrix};
use crate::error::{Error, Result};

/// Default convergence tolerance for [`limit_powers`].
pub const DEFAULT_TOL: f64 = 1e-12;
/// Default cap on the number of squarings in [`limit_powers`].
pub const DEFAULT_MAX_DOUBLINGS: usize = 60;
/// Default absolute tolerance on row sums in [`validate_stochastic`].
pub const DEFAULT_ROW_TOL: f64 = 1e-9;
/// Default pivot tolerance for ranks and linear solves.
pub const DEFAULT_PIVOT_TOL: f64 = 1e-10;

/// Square matrix of finite reals, stored row-major.
#[derive(Clone, PartialEq)]
pub struct Matrix {
    n: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    /// Builds a matrix from rows, rejecting ragged, non-square, empty or
    /// non-finite input.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Empty);
        }
        let mut data = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != n {
                return Err(Error::NotSquare);
            }
            for (j, &x) in row.iter().enumerate() {
                if !x.is_finite() {
                    return Err(Error::NonFinite { row: i, col: j });
                }
                data.push(x);
            }
        }
        Ok(Self { n, data })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks(self.n.max(1)).take(self.n)
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.rows().map(<[f64]>::to_vec).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)])
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        debug_assert_eq!(v.len(), self.n);
        self.rows()
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        self.rows()
            .map(|row| row.iter().map(|x| x.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Largest absolute entrywise difference.
    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        assert_eq!(self.n, other.n);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Divides every row with a positive sum by that sum.
    fn normalize_rows(&mut self) {
        let n = self.n;
        for row in self.data.chunks_mut(n.max(1)) {
            let sum: f64 = row.iter().sum();
            if sum > 0.0 && sum != 1.0 {
                row.iter_mut().for_each(|x| *x /= sum);
            }
        }
    }

    /// Determinant by LU elimination with partial pivoting. The empty
    /// matrix has determinant 1.
    pub fn determinant(&self) -> f64 {
        determinant_of(self.n, self.data.clone())
    }

    /// Determinant of the matrix with row `k` and column `k` deleted.
    pub fn principal_minor(&self, k: usize) -> f64 {
        assert!(k < self.n);
        let m = self.n - 1;
        let mut data = Vec::with_capacity(m * m);
        for i in (0..self.n).filter(|&i| i != k) {
            for j in (0..self.n).filter(|&j| j != k) {
                data.push(self[(i, j)]);
            }
        }
        determinant_of(m, data)
    }
}

fn determinant_of(n: usize, mut a: Vec<f64>) -> f64 {
    let mut det = 1.0;
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&r, &s| a[r * n + col].abs().total_cmp(&a[s * n + col].abs()))
            .unwrap();
        let pivot = a[pivot_row * n + col];
        if pivot == 0.0 {
            return 0.0;
        }
        if pivot_row != col {
            for j in 0..n {
                a.swap(pivot_row * n + j, col * n + j);
            }
            det = -det;
        }
        det *= pivot;
        for r in col + 1..n {
            let factor = a[r * n + col] / pivot;
            if factor != 0.0 {
                for j in col..n {
                    a[r * n + j] -= factor * a[col * n + j];
                }
            }
        }
    }
    det
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }
}

impl Mul for &Matrix {
    type Output = Matrix;

    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        let n = self.n;
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        out
    }
}

impl Sub for &Matrix {
    type Output = Matrix;

    fn sub(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        Matrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.rows()).finish()
    }
}

/// Row-stochastic influence matrix: non-negative entries, unit row sums.
#[derive(Debug, Clone, PartialEq)]
pub struct StochasticMatrix(Matrix);

impl StochasticMatrix {
    /// Validates `rows` with the default row tolerance.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        validate_stochastic(&Matrix::from_rows(rows)?, DEFAULT_ROW_TOL)
    }

    pub fn identity(n: usize) -> Self {
        Self(Matrix::identity(n))
    }

    /// Wraps a matrix the caller has already checked to be stochastic.
    pub(crate) fn from_checked(m: Matrix) -> Self {
        Self(m)
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn as_matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }

    /// Kirchhoff matrix `I - P` of the communication digraph.
    pub fn laplacian(&self) -> Matrix {
        &Matrix::identity(self.dim()) - &self.0
    }
}

impl Index<(usize, usize)> for StochasticMatrix {
    type Output = f64;

    fn index(&self, idx: (usize, usize)) -> &f64 {
        &self.0[idx]
    }
}

/// Checks that `raw` is row-stochastic and rescales each row to unit sum.
pub fn validate_stochastic(raw: &Matrix, row_tol: f64) -> Result<StochasticMatrix> {
    let n = raw.dim();
    let mut m = raw.clone();
    for i in 0..n {
        for j in 0..n {
            if raw[(i, j)] < 0.0 {
                return Err(Error::NegativeEntry { row: i, col: j });
            }
        }
        let sum: f64 = raw.row(i).iter().sum();
        if (sum - 1.0).abs() > row_tol {
            return Err(Error::RowSumOutOfTolerance { row: i, sum });
        }
        if sum != 1.0 {
            for j in 0..n {
                m[(i, j)] = raw[(i, j)] / sum;
            }
        }
    }
    Ok(StochasticMatrix(m))
}

/// Probability vector: non-negative entries summing to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityVector(Vec<f64>);

impl ProbabilityVector {
    /// Accepts entries that are non-negative and sum to 1 within
    /// [`DEFAULT_ROW_TOL`]; the vector is rescaled to unit sum.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        let sum: f64 = values.iter().sum();
        if values.is_empty()
            || values.iter().any(|x| !x.is_finite() || *x < 0.0)
            || (sum - 1.0).abs() > DEFAULT_ROW_TOL
        {
            return Err(Error::NotProbability { sum });
        }
        let values = if sum == 1.0 {
            values
        } else {
            values.into_iter().map(|x| x / sum).collect()
        };
        Ok(Self(values))
    }

    pub fn uniform(n: usize) -> Self {
        Self(vec![1.0 / n as f64; n])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl std::ops::Deref for ProbabilityVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

/// Returns the trajectory `[s(0), s(1), ..., s(steps)]` with `s(k) = P s(k-1)`.
pub fn iterate_opinions(p: &StochasticMatrix, s0: &[f64], steps: usize) -> Result<Vec<Vec<f64>>> {
    if s0.len() != p.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            found: s0.len(),
        });
    }
    let mut out = Vec::with_capacity(steps + 1);
    out.push(s0.to_vec());
    for _ in 0..steps {
        let next = p.as_matrix().mul_vec(out.last().unwrap());
        out.push(next);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitStatus {
    Converged,
    NotConverged,
}

#[derive(Debug, Clone)]
pub struct LimitResult {
    pub status: LimitStatus,
    /// Last power `Q = P^(2^m)` computed.
    pub limit_candidate: Matrix,
    /// `||Q P - Q||_inf`.
    pub residual: f64,
    pub doublings_used: usize,
}

impl LimitResult {
    pub fn converged(&self) -> bool {
        self.status == LimitStatus::Converged
    }
}

/// Approximates `lim P^k` by repeated squaring.
///
/// Squaring stops once two successive powers agree within `tol` or after
/// `max_doublings` squarings. The candidate `Q` is accepted only if
/// `||Q P - Q||_inf <= tol`; squaring alone settles on `P^2` for a period-2
/// chain, and this check rejects it.
///
/// Each square is rescaled to unit row sums. Without that, rounding error in
/// a row sum is squared along with the matrix, and after enough doublings a
/// non-convergent chain decays towards the zero matrix, which passes the
/// residual check.
pub fn limit_powers(p: &StochasticMatrix, tol: f64, max_doublings: usize) -> LimitResult {
    let mut q = p.as_matrix().clone();
    let mut doublings = 0;
    while doublings < max_doublings {
        let mut next = &q * &q;
        next.normalize_rows();
        doublings += 1;
        let delta = (&next - &q).norm_inf();
        q = next;
        if delta <= tol {
            break;
        }
    }
    let residual = (&(&q * p.as_matrix()) - &q).norm_inf();
    let stochastic = q.rows().all(|r| (r.iter().sum::<f64>() - 1.0).abs() <= tol);
    let status = if residual <= tol && stochastic {
        LimitStatus::Converged
    } else {
        LimitStatus::NotConverged
    };
    LimitResult {
        status,
        limit_candidate: q,
        residual,
        doublings_used: doublings,
    }
}

/// Unique stationary vector `pi^T P = pi^T` of a matrix whose communication
/// digraph has exactly one basic bicomponent.
///
/// Solves `(P^T - I) pi = 0` with the last equation replaced by
/// `sum(pi) = 1`, so periodic chains are handled as well.
pub fn stationary_vector(p: &StochasticMatrix) -> Result<ProbabilityVector> {
    let nu = analyze(&digraph_from_matrix(p, 0.0)).nu;
    if nu != 1 {
        return Err(Error::NotUnique { nu });
    }
    let n = p.dim();
    let mut a = Matrix::from_fn(n, |i, j| p[(j, i)] - if i == j { 1.0 } else { 0.0 });
    for j in 0..n {
        a[(n - 1, j)] = 1.0;
    }
    let mut rhs = vec![0.0; n];
    rhs[n - 1] = 1.0;
    let mut pi = solve(a, rhs, DEFAULT_PIVOT_TOL).ok_or(Error::SingularSystem)?;
    for x in pi.iter_mut() {
        if *x < 0.0 {
            if *x < -1e-9 {
                return Err(Error::SingularSystem);
            }
            *x = 0.0;
        }
    }
    let sum: f64 = pi.iter().sum();
    ProbabilityVector::new(pi.into_iter().map(|x| x / sum).collect())
}

/// Gaussian elimination with partial pivoting; `None` when a pivot falls
/// below `pivot_tol`.
fn solve(mut a: Matrix, mut b: Vec<f64>, pivot_tol: f64) -> Option<Vec<f64>> {
    let n = a.dim();
    for col in 0..n {
        let pivot_row =
            (col..n).max_by(|&r, &s| a[(r, col)].abs().total_cmp(&a[(s, col)].abs()))?;
        if a[(pivot_row, col)].abs() <= pivot_tol {
            return None;
        }
        if pivot_row != col {
            for j in 0..n {
                let tmp = a[(pivot_row, j)];
                a[(pivot_row, j)] = a[(col, j)];
                a[(col, j)] = tmp;
            }
            b.swap(pivot_row, col);
        }
        for r in col + 1..n {
            let factor = a[(r, col)] / a[(col, col)];
            if factor != 0.0 {
                for j in col..n {
                    a[(r, j)] -= factor * a[(col, j)];
                }
                b[r] -= factor * b[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|j| a[(i, j)] * x[j]).sum();
        x[i] = (b[i] - s) / a[(i, i)];
    }
    Some(x)
}

/// The consensus `pi^T s(0)`.
pub fn consensus_value(pi: &ProbabilityVector, s0: &[f64]) -> Result<f64> {
    if pi.len() != s0.len() {
        return Err(Error::DimensionMismatch {
            expected: pi.len(),
            found: s0.len(),
        });
    }
    Ok(pi.iter().zip(s0).map(|(a, b)| a * b).sum())
}

/// Numerical rank by elimination with full pivoting. Pivots with absolute
/// value at most `pivot_tol` count as zero.
pub fn matrix_rank(m: &Matrix, pivot_tol: f64) -> usize {
    let n = m.dim();
    let mut a = m.clone();
    let mut rank = 0;
    for step in 0..n {
        let mut best = (step, step, 0.0f64);
        for i in step..n {
            for j in step..n {
                let v = a[(i, j)].abs();
                if v > best.2 {
                    best = (i, j, v);
                }
            }
        }
        if best.2 <= pivot_tol {
            break;
        }
        let (pr, pc, _) = best;
        for j in 0..n {
            let tmp = a[(pr, j)];
            a[(pr, j)] = a[(step, j)];
            a[(step, j)] = tmp;
        }
        for i in 0..n {
            let tmp = a[(i, pc)];
            a[(i, pc)] = a[(i, step)];
            a[(i, step)] = tmp;
        }
        let pivot = a[(step, step)];
        for i in step + 1..n {
            let factor = a[(i, step)] / pivot;
            if factor != 0.0 {
                for j in step..n {
                    a[(i, j)] -= factor * a[(step, j)];
                }
            }
        }
        rank += 1;
    }
    rank
}
