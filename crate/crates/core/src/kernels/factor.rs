use crate::error::Result;
use crate::matrix::{Matrix, C64, ONE};

use super::qr::qr_pivoted;
use super::svd::svd_matrix;
use super::{rank_from_singular_values, RankTolerance};

/// `A = M N` with `M` of full column rank `r` and `N` of full row rank `r`.
/// A zero matrix gives `r = 0` and zero-width factors.
#[derive(Debug, Clone)]
pub struct MatrixFullRank {
    pub m: Matrix,
    pub n: Matrix,
    pub r: usize,
}

/// `A = Q D R` with `Q` (`n x r`) of full column rank, `D` invertible
/// diagonal and `R` (`r x m`) of full row rank. `R` is upper triangular after
/// undoing the column permutation: `R[:, perm[j]]` is column `j` of a
/// triangular matrix.
#[derive(Debug, Clone)]
pub struct MatrixQdr {
    pub q: Matrix,
    pub d: Matrix,
    pub r_factor: Matrix,
    pub perm: Vec<usize>,
    pub r: usize,
}

impl MatrixQdr {
    pub fn reconstruct(&self) -> Matrix {
        &(&self.q * &self.d) * &self.r_factor
    }
}

/// Full-rank factorization from the SVD: `M = U_r S_r`, `N = V_r^H`.
pub fn full_rank_with(a: &Matrix, tol: &RankTolerance) -> Result<MatrixFullRank> {
    let (rows, cols) = a.shape();
    let f = svd_matrix(a)?;
    let r = rank_from_singular_values(&f.s, tol.cutoff());
    let m = Matrix::from_fn(rows, r, |i, j| f.u[(i, j)] * f.s[j]);
    let n = Matrix::from_fn(r, cols, |i, j| f.v[(j, i)].conj());
    Ok(MatrixFullRank { m, n, r })
}

pub fn full_rank_matrix(a: &Matrix) -> Result<MatrixFullRank> {
    full_rank_with(a, &RankTolerance::for_matrix(a)?)
}

/// QDR from column-pivoted QR, truncated at the numerical rank.
pub fn qdr_with(a: &Matrix, tol: &RankTolerance) -> Result<MatrixQdr> {
    let (rows, cols) = a.shape();
    let s = svd_matrix(a)?.s;
    let r = rank_from_singular_values(&s, tol.cutoff());
    let (qr, perm) = qr_pivoted(a);
    let q = qr.q.submatrix(0, 0, rows, r);
    let diag: Vec<C64> = (0..r).map(|i| qr.r[(i, i)]).collect();
    let d = Matrix::from_diag(&diag);
    let mut r_factor = Matrix::zeros(r, cols);
    for i in 0..r {
        let scale = ONE / diag[i];
        for (j, &pj) in perm.iter().enumerate() {
            r_factor[(i, pj)] = qr.r[(i, j)] * scale;
        }
    }
    Ok(MatrixQdr {
        q,
        d,
        r_factor,
        perm,
        r,
    })
}

pub fn qdr_matrix(a: &Matrix) -> Result<MatrixQdr> {
    qdr_with(a, &RankTolerance::for_matrix(a)?)
}
