//! Precision-generic dense linear algebra: Householder least squares,
//! a cyclic Jacobi eigensolver for symmetric matrices, and condition
//! numbers. Everything is deterministic for a fixed input and backend.

mod dd;
mod scalar;

pub use dd::Dd;
pub use scalar::Scalar;

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum LinalgError {
    #[error("dimension mismatch: matrix order {order}, vector length {len}")]
    DimensionMismatch { order: usize, len: usize },
    #[error("singular system: zero pivot column at index {pivot}")]
    SingularSystem { pivot: usize },
    #[error("Jacobi sweep budget exhausted; off-diagonal residual {residual:e}")]
    NonConvergence { residual: f64 },
    #[error("matrix not positive definite: pivot {pivot} is {value:e}")]
    NotPositiveDefinite { pivot: usize, value: f64 },
}

/// Dense symmetric matrix storing one (lower) triangle.
#[derive(Clone, Debug)]
pub struct SymMatrix<S> {
    order: usize,
    // Row-major packed lower triangle: (i, j) with i >= j at i(i+1)/2 + j.
    data: Vec<S>,
}

impl<S: Scalar> SymMatrix<S> {
    pub fn zeros(order: usize) -> Self {
        SymMatrix {
            order,
            data: vec![S::zero(); order * (order + 1) / 2],
        }
    }

    /// Build from an entry generator; only the lower triangle is evaluated,
    /// which enforces symmetry by construction.
    pub fn from_fn(order: usize, mut entry: impl FnMut(usize, usize) -> S) -> Self {
        let mut m = SymMatrix::zeros(order);
        for i in 0..order {
            for j in 0..=i {
                m.data[i * (i + 1) / 2 + j] = entry(i, j);
            }
        }
        m
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> S {
        let (r, c) = if i >= j { (i, j) } else { (j, i) };
        self.data[r * (r + 1) / 2 + c]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: S) {
        let (r, c) = if i >= j { (i, j) } else { (j, i) };
        self.data[r * (r + 1) / 2 + c] = value;
    }

    pub fn trace(&self) -> S {
        let mut t = S::zero();
        for i in 0..self.order {
            t += self.get(i, i);
        }
        t
    }

    /// Frobenius norm.
    pub fn norm_fro(&self) -> S {
        let mut sum = S::zero();
        for i in 0..self.order {
            for j in 0..self.order {
                let a = self.get(i, j);
                sum += a * a;
            }
        }
        sum.sqrt()
    }

    /// y = T x.
    pub fn mul_vec(&self, x: &[S]) -> Vec<S> {
        assert_eq!(x.len(), self.order);
        (0..self.order)
            .map(|i| {
                let mut acc = S::zero();
                for (j, &xj) in x.iter().enumerate() {
                    acc += self.get(i, j) * xj;
                }
                acc
            })
            .collect()
    }

    fn to_full(&self) -> Vec<S> {
        let n = self.order;
        let mut full = vec![S::zero(); n * n];
        for i in 0..n {
            for j in 0..n {
                full[i * n + j] = self.get(i, j);
            }
        }
        full
    }
}

/// Solve `T q = A` by Householder triangulation.
///
/// No pivoting beyond the transformation's inherent stability; the output
/// is deterministic for fixed inputs and backend. An exactly zero pivot
/// column reports which index collapsed.
pub fn householder_solve<S: Scalar>(t: &SymMatrix<S>, a: &[S]) -> Result<Vec<S>, LinalgError> {
    let n = t.order();
    if a.len() != n {
        return Err(LinalgError::DimensionMismatch {
            order: n,
            len: a.len(),
        });
    }

    let mut m = t.to_full();
    let mut rhs = a.to_vec();

    for k in 0..n {
        // Column norm below the diagonal.
        let mut norm_sq = S::zero();
        for i in k..n {
            let v = m[i * n + k];
            norm_sq += v * v;
        }
        if norm_sq == S::zero() {
            return Err(LinalgError::SingularSystem { pivot: k });
        }
        let norm = norm_sq.sqrt();
        let pivot = m[k * n + k];
        let alpha = if pivot < S::zero() { norm } else { -norm };

        // Householder vector v = x - alpha e1, stored in place of the column.
        // alpha is chosen opposite in sign to the pivot, so v0 never cancels.
        let v0 = pivot - alpha;
        let vtv = norm_sq - pivot * pivot + v0 * v0;
        m[k * n + k] = v0;
        let two = S::from_f64(2.0);

        for col in (k + 1)..n {
            let mut dot = S::zero();
            for i in k..n {
                dot += m[i * n + k] * m[i * n + col];
            }
            let factor = two * dot / vtv;
            for i in k..n {
                let vik = m[i * n + k];
                m[i * n + col] -= factor * vik;
            }
        }
        {
            let mut dot = S::zero();
            for i in k..n {
                dot += m[i * n + k] * rhs[i];
            }
            let factor = two * dot / vtv;
            for i in k..n {
                let vik = m[i * n + k];
                rhs[i] -= factor * vik;
            }
        }

        m[k * n + k] = alpha;
        for i in (k + 1)..n {
            m[i * n + k] = S::zero();
        }
    }

    // Back substitution on the upper triangle.
    let mut q = vec![S::zero(); n];
    for i in (0..n).rev() {
        let mut acc = rhs[i];
        for j in (i + 1)..n {
            acc -= m[i * n + j] * q[j];
        }
        let diag = m[i * n + i];
        if diag == S::zero() {
            return Err(LinalgError::SingularSystem { pivot: i });
        }
        q[i] = acc / diag;
    }
    Ok(q)
}

/// All eigenvalues of a symmetric matrix by cyclic Jacobi rotations,
/// sorted descending. Converged when the off-diagonal Frobenius norm
/// drops below `n^2 * eps * ||T||_F`; gives up after 50 sweeps.
pub fn jacobi_eigenvalues<S: Scalar>(t: &SymMatrix<S>) -> Result<Vec<S>, LinalgError> {
    const MAX_SWEEPS: usize = 50;

    let n = t.order();
    if n == 0 {
        return Ok(Vec::new());
    }
    if n == 1 {
        return Ok(vec![t.get(0, 0)]);
    }

    let mut a = t.to_full();
    let norm = t.norm_fro();
    let threshold = S::from_f64((n * n) as f64 * S::epsilon()) * norm;

    let off_norm = |a: &[S]| -> S {
        let mut sum = S::zero();
        for p in 0..n {
            for q in (p + 1)..n {
                let v = a[p * n + q];
                sum += v * v;
            }
        }
        (sum + sum).sqrt()
    };

    let mut residual = off_norm(&a);
    for _ in 0..MAX_SWEEPS {
        if residual <= threshold {
            let mut eigs: Vec<S> = (0..n).map(|i| a[i * n + i]).collect();
            eigs.sort_by(|x, y| y.partial_cmp(x).expect("eigenvalues are ordered"));
            return Ok(eigs);
        }
        for p in 0..n - 1 {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == S::zero() {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (S::from_f64(2.0) * apq);
                let t_abs = S::one() / (theta.abs() + (theta * theta + S::one()).sqrt());
                let tan = if theta < S::zero() { -t_abs } else { t_abs };
                let cos = S::one() / (tan * tan + S::one()).sqrt();
                let sin = tan * cos;
                let tau = sin / (S::one() + cos);

                a[p * n + p] = app - tan * apq;
                a[q * n + q] = aqq + tan * apq;
                a[p * n + q] = S::zero();
                a[q * n + p] = S::zero();

                for i in 0..n {
                    if i == p || i == q {
                        continue;
                    }
                    let aip = a[i * n + p];
                    let aiq = a[i * n + q];
                    let new_ip = aip - sin * (aiq + tau * aip);
                    let new_iq = aiq + sin * (aip - tau * aiq);
                    a[i * n + p] = new_ip;
                    a[p * n + i] = new_ip;
                    a[i * n + q] = new_iq;
                    a[q * n + i] = new_iq;
                }
            }
        }
        residual = off_norm(&a);
    }

    Err(LinalgError::NonConvergence {
        residual: residual.to_f64(),
    })
}

/// Cholesky factor of a symmetric positive definite matrix; serves as the
/// positive-definiteness certificate for orders where a full eigensolve
/// is too slow. Returns the packed lower factor.
pub fn cholesky_factor<S: Scalar>(t: &SymMatrix<S>) -> Result<Vec<S>, LinalgError> {
    let n = t.order();
    let mut l = vec![S::zero(); n * (n + 1) / 2];
    for i in 0..n {
        for j in 0..=i {
            let mut sum = t.get(i, j);
            for k in 0..j {
                sum -= l[i * (i + 1) / 2 + k] * l[j * (j + 1) / 2 + k];
            }
            if i == j {
                if !(sum > S::zero()) {
                    return Err(LinalgError::NotPositiveDefinite {
                        pivot: i,
                        value: sum.to_f64(),
                    });
                }
                l[i * (i + 1) / 2 + j] = sum.sqrt();
            } else {
                l[i * (i + 1) / 2 + j] = sum / l[j * (j + 1) / 2 + j];
            }
        }
    }
    Ok(l)
}

/// Ratio of the largest to the smallest eigenvalue, reported in double
/// regardless of backend. A nonpositive smallest eigenvalue means the
/// matrix is singular (or indefinite) at the working precision, in which
/// case the ratio is unbounded and only `1/eps` can be claimed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ConditionNumber {
    Finite(f64),
    /// Smallest eigenvalue was zero or negative at the working precision.
    BeyondPrecision { lambda_max: f64, lambda_min: f64 },
}

impl ConditionNumber {
    pub fn finite(&self) -> Option<f64> {
        match self {
            ConditionNumber::Finite(c) => Some(*c),
            ConditionNumber::BeyondPrecision { .. } => None,
        }
    }

    /// Lower bound usable in comparisons: the computed ratio, or `1/eps`
    /// of the backend that produced the eigenvalues.
    pub fn lower_bound(&self, backend_eps: f64) -> f64 {
        match self {
            ConditionNumber::Finite(c) => *c,
            ConditionNumber::BeyondPrecision { .. } => 1.0 / backend_eps,
        }
    }
}

impl fmt::Display for ConditionNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConditionNumber::Finite(c) => write!(f, "{c:.3e}"),
            ConditionNumber::BeyondPrecision {
                lambda_max,
                lambda_min,
            } => write!(
                f,
                "singular-at-precision (lambda_max {lambda_max:.3e}, lambda_min {lambda_min:.3e})"
            ),
        }
    }
}

/// Condition number from eigenvalues sorted descending.
pub fn condition_number<S: Scalar>(eigs: &[S]) -> ConditionNumber {
    assert!(!eigs.is_empty(), "condition number of an empty spectrum");
    let lambda_max = eigs[0].to_f64();
    let lambda_min = eigs[eigs.len() - 1].to_f64();
    if lambda_min <= 0.0 {
        ConditionNumber::BeyondPrecision {
            lambda_max,
            lambda_min,
        }
    } else {
        ConditionNumber::Finite(lambda_max / lambda_min)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn approx(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} !~ {b} (tol {tol})");
    }

    #[test]
    fn identity_solve() {
        let t = SymMatrix::from_fn(3, |i, j| if i == j { 1.0 } else { 0.0 });
        let q = householder_solve(&t, &[1.0, 2.0, 3.0]).unwrap();
        approx(q[0], 1.0, 1e-14);
        approx(q[1], 2.0, 1e-14);
        approx(q[2], 3.0, 1e-14);
    }

    #[test]
    fn two_by_two_analytic() {
        let t = SymMatrix::from_fn(2, |i, j| if i == j { 2.0 } else { 1.0 });
        let q = householder_solve(&t, &[3.0, 3.0]).unwrap();
        approx(q[0], 1.0, 1e-14);
        approx(q[1], 1.0, 1e-14);
    }

    #[test]
    fn hilbert_4_row_sums() {
        let t = SymMatrix::from_fn(4, |i, j| 1.0 / ((i + j + 1) as f64));
        // Exact rational row sums of the 4x4 Hilbert matrix.
        let a = [25.0 / 12.0, 77.0 / 60.0, 19.0 / 20.0, 319.0 / 420.0];
        let q = householder_solve(&t, &a).unwrap();
        for qi in q {
            approx(qi, 1.0, 1e-10);
        }
    }

    #[test]
    fn singular_column_reports_pivot() {
        let t = SymMatrix::from_fn(2, |_, _| 0.0);
        assert_eq!(
            householder_solve(&t, &[1.0, 1.0]),
            Err(LinalgError::SingularSystem { pivot: 0 })
        );
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let t = SymMatrix::from_fn(2, |i, j| if i == j { 1.0 } else { 0.0 });
        assert!(matches!(
            householder_solve(&t, &[1.0]),
            Err(LinalgError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn jacobi_diagonal_and_analytic() {
        let d = SymMatrix::from_fn(3, |i, j| {
            if i == j {
                [3.0, 1.0, 2.0][i]
            } else {
                0.0
            }
        });
        let eigs = jacobi_eigenvalues(&d).unwrap();
        assert_eq!(eigs, vec![3.0, 2.0, 1.0]);

        let t = SymMatrix::from_fn(2, |i, j| if i == j { 2.0 } else { 1.0 });
        let eigs = jacobi_eigenvalues(&t).unwrap();
        approx(eigs[0], 3.0, 1e-14);
        approx(eigs[1], 1.0, 1e-14);
    }

    /// Roots of the characteristic cubic of a symmetric 3x3, by the
    /// trigonometric closed form. Independent of the Jacobi path.
    fn cubic_eigs(m: &SymMatrix<f64>) -> [f64; 3] {
        let a = m.get(0, 0);
        let b = m.get(1, 1);
        let c = m.get(2, 2);
        let d = m.get(0, 1);
        let e = m.get(1, 2);
        let f = m.get(0, 2);
        let p1 = d * d + e * e + f * f;
        let q = (a + b + c) / 3.0;
        let p2 = (a - q).powi(2) + (b - q).powi(2) + (c - q).powi(2) + 2.0 * p1;
        let p = (p2 / 6.0).sqrt();
        // B = (A - qI)/p; r = det(B)/2 in [-1, 1].
        let bm = |i: usize, j: usize| (m.get(i, j) - if i == j { q } else { 0.0 }) / p;
        let det_b = bm(0, 0) * (bm(1, 1) * bm(2, 2) - bm(1, 2) * bm(2, 1))
            - bm(0, 1) * (bm(1, 0) * bm(2, 2) - bm(1, 2) * bm(2, 0))
            + bm(0, 2) * (bm(1, 0) * bm(2, 1) - bm(1, 1) * bm(2, 0));
        let r = (det_b / 2.0).clamp(-1.0, 1.0);
        let phi = r.acos() / 3.0;
        let e1 = q + 2.0 * p * phi.cos();
        let e3 = q + 2.0 * p * (phi + 2.0 * std::f64::consts::PI / 3.0).cos();
        let e2 = 3.0 * q - e1 - e3;
        [e1, e2, e3]
    }

    #[test]
    fn jacobi_matches_cubic_oracle() {
        let m = SymMatrix::from_fn(3, |i, j| {
            let vals = [[2.0, -0.4, 0.7], [-0.4, 1.3, 0.2], [0.7, 0.2, 3.1]];
            vals[i][j]
        });
        let mut oracle = cubic_eigs(&m);
        oracle.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let eigs = jacobi_eigenvalues(&m).unwrap();
        for (got, want) in eigs.iter().zip(oracle.iter()) {
            approx(*got, *want, 1e-12);
        }
    }

    #[test]
    fn eigenvalue_sum_matches_trace() {
        let m = SymMatrix::from_fn(6, |i, j| 1.0 / ((i + j + 1) as f64) + if i == j { 0.5 } else { 0.0 });
        let eigs = jacobi_eigenvalues(&m).unwrap();
        let sum: f64 = eigs.iter().sum();
        approx(sum, m.trace(), 1e-12 * m.trace().abs());

        let md = SymMatrix::<Dd>::from_fn(6, |i, j| {
            Dd::from_f64(1.0) / Dd::from_f64((i + j + 1) as f64)
                + if i == j { Dd::from_f64(0.5) } else { Dd::ZERO }
        });
        let eigs = jacobi_eigenvalues(&md).unwrap();
        let mut sum = Dd::ZERO;
        for e in &eigs {
            sum += *e;
        }
        let rel = ((sum - md.trace()) / md.trace()).abs();
        assert!(rel.to_f64() < 1e-28, "relative trace error {rel:?}");
    }

    #[test]
    fn condition_number_basics() {
        assert_eq!(condition_number(&[3.0, 1.0]), ConditionNumber::Finite(3.0));
        assert_eq!(
            condition_number(&[1.0, 1.0, 1.0]),
            ConditionNumber::Finite(1.0)
        );
        assert!(matches!(
            condition_number(&[2.0, 0.0]),
            ConditionNumber::BeyondPrecision { .. }
        ));
        assert!(matches!(
            condition_number(&[2.0, -1.0e-20]),
            ConditionNumber::BeyondPrecision { .. }
        ));
    }

    #[test]
    fn backsubstitution_residual_bound() {
        // Moderately conditioned deterministic test matrix, both backends.
        let n = 12;
        let entry = |i: usize, j: usize| {
            1.0 / ((i + j + 1) as f64) + if i == j { 2.0 } else { 0.0 }
        };
        let t = SymMatrix::from_fn(n, entry);
        let a: Vec<f64> = (0..n).map(|i| (i as f64 * 0.37).sin()).collect();
        let q = householder_solve(&t, &a).unwrap();
        let tq = t.mul_vec(&q);

        let inf = |v: &[f64]| v.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
        let norm_t = (0..n)
            .map(|i| (0..n).map(|j| t.get(i, j).abs()).sum::<f64>())
            .fold(0.0_f64, f64::max);
        let resid: Vec<f64> = tq.iter().zip(a.iter()).map(|(x, y)| x - y).collect();
        let bound = 10.0 * n as f64 * f64::EPSILON * (norm_t * inf(&q) + inf(&a));
        assert!(inf(&resid) <= bound, "residual {} > bound {}", inf(&resid), bound);
    }

    #[test]
    fn cholesky_certifies_definiteness() {
        let t = SymMatrix::from_fn(3, |i, j| if i == j { 2.0 } else { 1.0 });
        assert!(cholesky_factor(&t).is_ok());

        let indef = SymMatrix::from_fn(2, |i, j| if i == j { 0.0 } else { 1.0 });
        assert!(matches!(
            cholesky_factor(&indef),
            Err(LinalgError::NotPositiveDefinite { .. })
        ));
    }
}
