//! Dense complex matrix factorizations and matrix-level generalized inverses.
//!
//! These run on one transform-domain slice at a time; the tensor modules map
//! them over slices.

mod drazin;
mod factor;
mod lu;
mod qr;
mod schur;
mod svd;

pub use drazin::{
    core_nilpotent_matrix, core_nilpotent_with, drazin_matrix, drazin_with, index_matrix,
    index_with, MatrixCoreNilpotent,
};
pub use factor::{
    full_rank_matrix, full_rank_with, qdr_matrix, qdr_with, MatrixFullRank, MatrixQdr,
};
pub use lu::{inverse, solve};
pub use qr::{qr_matrix, qr_pivoted, MatrixQr};
pub use schur::{schur_matrix, MatrixSchur};
pub use svd::{numerical_rank, pinv_matrix, pinv_with, svd_matrix, MatrixSvd};

/// Unit roundoff used by every default cutoff (2^-52).
pub const EPS: f64 = f64::EPSILON;

/// Cutoff rule for deciding which singular values count as zero.
///
/// The default for a single `m x n` matrix is `max(m, n) * EPS * sigma_max`.
/// For a power `A^k` the cutoff scales with `sigma_max^k`, so that a power
/// that is zero in exact arithmetic is not mistaken for a full-rank matrix
/// made of rounding noise. An absolute override replaces both rules.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankTolerance {
    dim: usize,
    sigma: f64,
    absolute: Option<f64>,
}

impl RankTolerance {
    pub fn new(dim: usize, sigma_max: f64) -> Self {
        Self {
            dim,
            sigma: sigma_max,
            absolute: None,
        }
    }

    pub fn absolute(tol: f64) -> Self {
        Self {
            dim: 0,
            sigma: 0.0,
            absolute: Some(tol),
        }
    }

    /// Default rule for one matrix, using its largest singular value.
    pub fn for_matrix(a: &crate::Matrix) -> crate::Result<Self> {
        let sigma = svd::singular_values(a)?.first().copied().unwrap_or(0.0);
        Ok(Self::new(a.rows().max(a.cols()), sigma))
    }

    /// Keeps an absolute override if one is given, otherwise uses `self`.
    pub fn or_override(self, tol: Option<f64>) -> Self {
        match tol {
            Some(t) => Self::absolute(t),
            None => self,
        }
    }

    pub fn cutoff(&self) -> f64 {
        self.power_cutoff(1)
    }

    pub fn power_cutoff(&self, k: usize) -> f64 {
        match self.absolute {
            Some(t) => t,
            None => self.dim as f64 * k.max(1) as f64 * EPS * self.sigma.powi(k as i32),
        }
    }
}

/// Number of singular values strictly above `cutoff`.
pub fn rank_from_singular_values(s: &[f64], cutoff: f64) -> usize {
    s.iter().take_while(|&&v| v > cutoff).count()
}
