use crate::error::Result;
use crate::matrix::Matrix;

use super::lu::inverse;
use super::svd::{pinv_with, svd_matrix};
use super::{rank_from_singular_values, RankTolerance};

/// `A = P blkdiag(C, N) P^{-1}` with `C` (`r x r`) invertible and `N` nilpotent
/// of index `k`.
#[derive(Debug, Clone)]
pub struct MatrixCoreNilpotent {
    pub p: Matrix,
    pub p_inv: Matrix,
    pub c: Matrix,
    pub n: Matrix,
    pub r: usize,
    pub k: usize,
}

impl MatrixCoreNilpotent {
    pub fn reconstruct(&self) -> Matrix {
        let block = Matrix::block_diag(&[self.c.clone(), self.n.clone()]);
        &(&self.p * &block) * &self.p_inv
    }

    /// `P blkdiag(C^{-1}, 0) P^{-1}`, or `None` if `C` is exactly singular.
    pub fn drazin(&self) -> Option<Matrix> {
        let size = self.p.rows();
        let c_inv = inverse(&self.c)?;
        let block = Matrix::block_diag(&[c_inv, Matrix::zeros(size - self.r, size - self.r)]);
        Some(&(&self.p * &block) * &self.p_inv)
    }
}

fn rank_with_cutoff(a: &Matrix, cutoff: f64) -> Result<usize> {
    Ok(rank_from_singular_values(&svd_matrix(a)?.s, cutoff))
}

/// Smallest `k` with `rank(A^k) = rank(A^{k+1})`, where the rank of `A^k` is
/// taken with `tol.power_cutoff(k)`.
pub fn index_with(a: &Matrix, tol: &RankTolerance) -> Result<usize> {
    assert!(a.is_square(), "index of a non-square matrix");
    let n = a.rows();
    let mut prev_rank = n;
    let mut power = Matrix::identity(n);
    for k in 0..n {
        power = &power * a;
        let rank = rank_with_cutoff(&power, tol.power_cutoff(k + 1))?;
        if rank == prev_rank {
            return Ok(k);
        }
        prev_rank = rank;
    }
    Ok(n)
}

pub fn index_matrix(a: &Matrix) -> Result<usize> {
    index_with(a, &RankTolerance::for_matrix(a)?)
}

/// `A^k (A^{2k+1})^+ A^k` with `k = ind(A)`. Returns the inverse and `k`.
pub fn drazin_with(a: &Matrix, tol: &RankTolerance) -> Result<(Matrix, usize)> {
    let k = index_with(a, tol)?;
    let ak = a.pow(k);
    let big = &(&ak * &ak) * a;
    let middle = pinv_with(&big, tol.power_cutoff(2 * k + 1))?;
    Ok((&(&ak * &middle) * &ak, k))
}

pub fn drazin_matrix(a: &Matrix) -> Result<Matrix> {
    Ok(drazin_with(a, &RankTolerance::for_matrix(a)?)?.0)
}

/// Core-nilpotent split built from the SVD of `A^k`: the first `r` columns of
/// `P` span the range of `A^k`, the rest span its null space.
pub fn core_nilpotent_with(a: &Matrix, tol: &RankTolerance) -> Result<MatrixCoreNilpotent> {
    let k = index_with(a, tol)?;
    let size = a.rows();
    let ak = a.pow(k);
    let f = svd_matrix(&ak)?;
    let r = if k == 0 {
        size
    } else {
        rank_from_singular_values(&f.s, tol.power_cutoff(k))
    };
    let mut p = Matrix::zeros(size, size);
    p.set_submatrix(0, 0, &f.u.submatrix(0, 0, size, r));
    p.set_submatrix(0, r, &f.v.submatrix(0, r, size, size - r));
    // range(A^k) and null(A^k) are complementary once k >= ind(A)
    let p_inv = inverse(&p).expect("range and null space of A^k are complementary");
    let b = &(&p_inv * a) * &p;
    Ok(MatrixCoreNilpotent {
        c: b.submatrix(0, 0, r, r),
        n: b.submatrix(r, r, size - r, size - r),
        p,
        p_inv,
        r,
        k,
    })
}

pub fn core_nilpotent_matrix(a: &Matrix) -> Result<MatrixCoreNilpotent> {
    core_nilpotent_with(a, &RankTolerance::for_matrix(a)?)
}
