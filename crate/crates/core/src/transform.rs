//! The cosine transform `L` and the block Toeplitz-plus-Hankel embedding.
//!
//! `L(A) = A x_3 M` with `M = W^{-1} C (I + Z)`, where `C` is the orthonormal
//! DCT-II matrix, `W = diag(C[:, 0])` and `Z` the upshift matrix. Under `L`
//! the embedding `mat(A)` becomes block diagonal:
//! `(C (x) I) mat(A) (C^T (x) I) = blkdiag(L(A)^(1), ..., L(A)^(n3))`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::kernels::{self, RankTolerance};
use crate::matrix::{Matrix, C64, ONE};
use crate::tensor::{Dims, Tensor3};

/// Orthonormal DCT-II matrix:
/// `C[k][j] = b_k sqrt(2/n) cos(pi k (2j + 1) / (2n))`, `b_0 = 1/sqrt(2)`, else 1.
pub fn dct_matrix(n: usize) -> Matrix {
    let scale = (2.0 / n as f64).sqrt();
    Matrix::from_fn(n, n, |k, j| {
        let beta = if k == 0 {
            std::f64::consts::FRAC_1_SQRT_2
        } else {
            1.0
        };
        let angle = PI * (k * (2 * j + 1)) as f64 / (2 * n) as f64;
        C64::new(beta * scale * angle.cos(), 0.0)
    })
}

/// Precomputed transform machinery for one tube length `n3`.
#[derive(Debug, Clone)]
pub struct TransformContext {
    n3: usize,
    dct: Matrix,
    w: Matrix,
    z: Matrix,
    m: Matrix,
    m_inv: Matrix,
    rank_tol: Option<f64>,
}

impl TransformContext {
    pub fn new(n3: usize) -> Self {
        assert!(n3 >= 1, "tube length must be positive");
        let dct = dct_matrix(n3);
        let first: Vec<C64> = dct.column(0);
        let w = Matrix::from_diag(&first);
        let w_inv = Matrix::from_diag(&first.iter().map(|v| ONE / v).collect::<Vec<_>>());
        let mut z = Matrix::zeros(n3, n3);
        for i in 0..n3 - 1 {
            z[(i, i + 1)] = ONE;
        }
        let m = &(&w_inv * &dct) * &(&Matrix::identity(n3) + &z);
        // M is upper triangular times an invertible factor; W^{-1} C (I + Z) is
        // invertible because each factor is
        let m_inv = kernels::inverse(&m).expect("transform matrix is invertible");
        Self {
            n3,
            dct,
            w,
            z,
            m,
            m_inv,
            rank_tol: None,
        }
    }

    /// Replaces the default rank cutoff with an absolute one.
    pub fn with_rank_tol(mut self, tol: f64) -> Self {
        self.rank_tol = Some(tol);
        self
    }

    pub fn rank_tol_override(&self) -> Option<f64> {
        self.rank_tol
    }

    pub fn n3(&self) -> usize {
        self.n3
    }

    pub fn dct(&self) -> &Matrix {
        &self.dct
    }

    pub fn w(&self) -> &Matrix {
        &self.w
    }

    pub fn z(&self) -> &Matrix {
        &self.z
    }

    pub fn m(&self) -> &Matrix {
        &self.m
    }

    pub fn m_inv(&self) -> &Matrix {
        &self.m_inv
    }

    fn check_tubes(&self, a: &Tensor3) -> Result<()> {
        if a.n3() != self.n3 {
            return Err(Error::shape(format!(
                "tensor has tube length {}, transform expects {}",
                a.n3(),
                self.n3
            )));
        }
        Ok(())
    }

    pub fn apply_l(&self, a: &Tensor3) -> Result<Tensor3> {
        self.check_tubes(a)?;
        a.mode3_product(&self.m)
    }

    pub fn apply_l_inv(&self, a: &Tensor3) -> Result<Tensor3> {
        self.check_tubes(a)?;
        a.mode3_product(&self.m_inv)
    }

    /// Frontal slices of `L(A)`.
    pub fn forward_slices(&self, a: &Tensor3) -> Result<Vec<Matrix>> {
        Ok(self.apply_l(a)?.slices())
    }

    /// `L^{-1}` of the tensor whose frontal slices are `slices`.
    pub fn from_transform_slices(&self, slices: &[Matrix]) -> Result<Tensor3> {
        self.apply_l_inv(&Tensor3::from_slices(slices)?)
    }

    /// Applies `f` to every transform-domain slice and maps the result back.
    pub fn map_slices(
        &self,
        a: &Tensor3,
        mut f: impl FnMut(usize, &Matrix) -> Result<Matrix>,
    ) -> Result<Tensor3> {
        let out = self
            .forward_slices(a)?
            .iter()
            .enumerate()
            .map(|(i, s)| f(i, s))
            .collect::<Result<Vec<_>>>()?;
        self.from_transform_slices(&out)
    }

    /// Rank rule for a set of transform-domain slices.
    ///
    /// The slices are the diagonal blocks of a matrix orthogonally similar to
    /// `mat(A)`, so the cutoff is the default one for `mat(A)`: the largest
    /// slice dimension times `n3`, times `EPS`, times the largest singular
    /// value over all slices. An override set with [`with_rank_tol`] wins.
    ///
    /// [`with_rank_tol`]: TransformContext::with_rank_tol
    pub fn slice_tolerance(&self, slices: &[Matrix]) -> Result<RankTolerance> {
        if let Some(t) = self.rank_tol {
            return Ok(RankTolerance::absolute(t));
        }
        let mut sigma: f64 = 0.0;
        let mut dim = 0;
        for s in slices {
            dim = dim.max(s.rows().max(s.cols()));
            let top = kernels::svd_matrix(s)?.s.first().copied().unwrap_or(0.0);
            sigma = sigma.max(top);
        }
        Ok(RankTolerance::new(dim * self.n3, sigma))
    }

    /// [`slice_tolerance`](TransformContext::slice_tolerance) of `L(A)`.
    pub fn tolerance_of(&self, a: &Tensor3) -> Result<RankTolerance> {
        self.slice_tolerance(&self.forward_slices(a)?)
    }

    /// Diagonal blocks of `(C (x) I_n1) mat(A) (C^T (x) I_n2)`; fails if an
    /// off-diagonal block exceeds `1e-8 * max|A|`.
    pub fn block_diag_oracle(&self, a: &Tensor3) -> Result<Vec<Matrix>> {
        self.check_tubes(a)?;
        let (n1, n2, n3) = a.dims();
        let left = Matrix::kron(&self.dct, &Matrix::identity(n1));
        let right = Matrix::kron(&self.dct.transpose(), &Matrix::identity(n2));
        let full = &(&left * &mat_embed(a)) * &right;
        let tolerance = 1e-8 * a.max_abs();
        let mut blocks = Vec::with_capacity(n3);
        for bi in 0..n3 {
            for bj in 0..n3 {
                let block = full.submatrix(bi * n1, bj * n2, n1, n2);
                if bi == bj {
                    blocks.push(block);
                } else {
                    let magnitude = block.max_abs();
                    if magnitude > tolerance {
                        return Err(Error::BlockDiagonalizationFailure {
                            row: bi + 1,
                            col: bj + 1,
                            magnitude,
                            tolerance,
                        });
                    }
                }
            }
        }
        Ok(blocks)
    }
}

/// Slice index (0-based) feeding block `(bi, bj)` of the Hankel part, if any.
fn hankel_slice(bi: usize, bj: usize, n3: usize) -> Option<usize> {
    // 1-based block position s = bi + bj + 2: slice s for s <= n3, nothing at
    // s = n3 + 1, slice 2 n3 + 2 - s beyond that
    let s = bi + bj + 2;
    match s.cmp(&(n3 + 1)) {
        std::cmp::Ordering::Less => Some(s - 1),
        std::cmp::Ordering::Equal => None,
        std::cmp::Ordering::Greater => Some(2 * n3 + 1 - s),
    }
}

/// Block Toeplitz-plus-Hankel matrix of size `(n1 n3) x (n2 n3)`. Block
/// `(i, j)` is `A^(|i-j|)` plus the Hankel contribution.
pub fn mat_embed(a: &Tensor3) -> Matrix {
    let (n1, n2, n3) = a.dims();
    let slices = a.slices();
    let mut out = Matrix::zeros(n1 * n3, n2 * n3);
    for bi in 0..n3 {
        for bj in 0..n3 {
            let toeplitz = &slices[bi.abs_diff(bj)];
            let block = match hankel_slice(bi, bj, n3) {
                Some(h) => toeplitz + &slices[h],
                None => toeplitz.clone(),
            };
            out.set_submatrix(bi * n1, bj * n2, &block);
        }
    }
    out
}

/// Inverse of [`mat_embed`]. Reads the first block column, whose blocks are
/// `A^(k) + A^(k+1)` for `k < n3` and `A^(n3)` last, and back-substitutes.
pub fn ten_extract(mtx: &Matrix, dims: Dims) -> Result<Tensor3> {
    let (n1, n2, n3) = dims;
    if mtx.rows() != n1 * n3 || mtx.cols() != n2 * n3 {
        return Err(Error::shape(format!(
            "a {}x{} matrix cannot be mat() of a {n1}x{n2}x{n3} tensor",
            mtx.rows(),
            mtx.cols()
        )));
    }
    let mut slices = vec![Matrix::zeros(n1, n2); n3];
    slices[n3 - 1] = mtx.submatrix((n3 - 1) * n1, 0, n1, n2);
    for k in (0..n3 - 1).rev() {
        slices[k] = &mtx.submatrix(k * n1, 0, n1, n2) - &slices[k + 1];
    }
    let a = Tensor3::from_slices(&slices)?;
    let residual = mat_embed(&a).max_abs_diff(mtx);
    if residual > 1e-8 * mtx.max_abs().max(1.0) {
        return Err(Error::NotInMatImage { residual });
    }
    Ok(a)
}
