use crate::error::{Error, Result};
use crate::matrix::{Matrix, C64, ZERO};

use super::qr::qr_matrix;
use super::{rank_from_singular_values, RankTolerance, EPS};

const MAX_SWEEPS: usize = 60;

/// `A = U diag(s) V^H` with `U` (`m x m`) and `V` (`n x n`) unitary and `s`
/// nonincreasing, of length `min(m, n)`.
#[derive(Debug, Clone)]
pub struct MatrixSvd {
    pub u: Matrix,
    pub s: Vec<f64>,
    pub v: Matrix,
}

impl MatrixSvd {
    /// The `m x n` diagonal factor.
    pub fn sigma(&self) -> Matrix {
        let mut out = Matrix::zeros(self.u.rows(), self.v.rows());
        for (i, &s) in self.s.iter().enumerate() {
            out[(i, i)] = C64::new(s, 0.0);
        }
        out
    }

    pub fn reconstruct(&self) -> Matrix {
        &(&self.u * &self.sigma()) * &self.v.adjoint()
    }
}

/// Columns with norm at or below `EPS * ||A||_F` are rounding noise: they sit
/// under every rank cutoff, and rotating them against each other need not
/// converge.
fn noise_floor(a: &Matrix) -> f64 {
    EPS * a.frobenius_norm()
}

/// One-sided (Hestenes) Jacobi on the columns of a tall `m x n` matrix.
/// Returns the orthogonalized columns `W = A V` and the accumulated `V`.
fn jacobi_columns(a: &Matrix) -> Result<(Matrix, Matrix)> {
    let (m, n) = a.shape();
    let floor = noise_floor(a).powi(2);
    let mut w = a.clone();
    let mut v = Matrix::identity(n);
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = ZERO;
                for i in 0..m {
                    let (wp, wq) = (w[(i, p)], w[(i, q)]);
                    alpha += wp.norm_sqr();
                    beta += wq.norm_sqr();
                    gamma += wp.conj() * wq;
                }
                let g = gamma.norm();
                if g == 0.0 || g <= EPS * (alpha * beta).sqrt() || alpha.min(beta) <= floor {
                    continue;
                }
                rotated = true;
                let phase = (gamma / g).conj();
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + zeta.hypot(1.0));
                let c = 1.0 / t.hypot(1.0);
                let s = c * t;
                for mat in [&mut w, &mut v] {
                    for i in 0..mat.rows() {
                        let xp = mat[(i, p)];
                        let xq = mat[(i, q)] * phase;
                        mat[(i, p)] = xp * c - xq * s;
                        mat[(i, q)] = xp * s + xq * c;
                    }
                }
            }
        }
        if !rotated {
            return Ok((w, v));
        }
    }
    Err(Error::NonConvergence {
        routine: "jacobi svd",
        iterations: MAX_SWEEPS,
    })
}

/// Extends `k` orthonormal columns of an `m x k` matrix to an `m x m` unitary.
fn complete_unitary(basis: &Matrix) -> Matrix {
    let (m, k) = basis.shape();
    if k == m {
        return basis.clone();
    }
    let q = qr_matrix(basis).q;
    let mut out = Matrix::zeros(m, m);
    out.set_submatrix(0, 0, basis);
    out.set_submatrix(0, k, &q.submatrix(0, k, m, m - k));
    out
}

fn svd_tall(a: &Matrix) -> Result<MatrixSvd> {
    let (m, n) = a.shape();
    let (w, v) = jacobi_columns(a)?;
    let norms: Vec<f64> = (0..n)
        .map(|j| (0..m).map(|i| w[(i, j)].norm_sqr()).sum::<f64>().sqrt())
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| norms[y].total_cmp(&norms[x]));

    let s: Vec<f64> = order.iter().map(|&j| norms[j]).collect();
    let v_sorted = Matrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    // noise columns are not orthogonalized, so their left vectors come from
    // the unitary completion instead
    let floor = noise_floor(a).max(f64::MIN_POSITIVE);
    let nonzero = s.iter().take_while(|&&x| x > floor).count();
    let u_thin = Matrix::from_fn(m, nonzero, |i, j| w[(i, order[j])] / s[j]);
    Ok(MatrixSvd {
        u: complete_unitary(&u_thin),
        s,
        v: v_sorted,
    })
}

/// Full SVD by one-sided Jacobi.
pub fn svd_matrix(a: &Matrix) -> Result<MatrixSvd> {
    if a.rows() >= a.cols() {
        svd_tall(a)
    } else {
        let t = svd_tall(&a.adjoint())?;
        Ok(MatrixSvd {
            u: t.v,
            s: t.s,
            v: t.u,
        })
    }
}

pub(crate) fn singular_values(a: &Matrix) -> Result<Vec<f64>> {
    Ok(svd_matrix(a)?.s)
}

/// Rank with the default cutoff `max(m, n) * EPS * sigma_max`, or `tol` if given.
pub fn numerical_rank(a: &Matrix, tol: Option<f64>) -> Result<usize> {
    let s = singular_values(a)?;
    let cutoff = tol.unwrap_or_else(|| {
        RankTolerance::new(a.rows().max(a.cols()), s.first().copied().unwrap_or(0.0)).cutoff()
    });
    Ok(rank_from_singular_values(&s, cutoff))
}

/// Moore-Penrose inverse `V S^+ U^H`, reciprocating singular values above `cutoff`.
pub fn pinv_with(a: &Matrix, cutoff: f64) -> Result<Matrix> {
    let f = svd_matrix(a)?;
    let r = rank_from_singular_values(&f.s, cutoff);
    let (m, n) = a.shape();
    let mut x = Matrix::zeros(n, m);
    for k in 0..r {
        let inv = 1.0 / f.s[k];
        for i in 0..n {
            let vik = f.v[(i, k)] * inv;
            for j in 0..m {
                x[(i, j)] += vik * f.u[(j, k)].conj();
            }
        }
    }
    Ok(x)
}

pub fn pinv_matrix(a: &Matrix) -> Result<Matrix> {
    let tol = RankTolerance::for_matrix(a)?;
    pinv_with(a, tol.cutoff())
}
