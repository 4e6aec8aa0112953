//! Dense third-order tensors.
//!
//! Storage is slice-major: the `n1 x n2` frontal slices are laid out one after
//! another, each in row-major order. A frontal slice is therefore a contiguous
//! run of the backing buffer, and the row-major buffer read as an
//! `n3 x (n1*n2)` matrix is exactly the mode-3 unfolding.
//!
//! All indices in this API are 0-based. Error messages that name a slice use
//! 1-based numbering.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Neg, Sub};

use crate::error::{Error, Result};
use crate::matrix::{Matrix, C64, ZERO};

#[derive(Clone, PartialEq)]
pub struct Tensor3 {
    n1: usize,
    n2: usize,
    n3: usize,
    data: Vec<C64>,
}

pub type Dims = (usize, usize, usize);

impl Tensor3 {
    pub fn new(dims: Dims, data: Vec<C64>) -> Result<Self> {
        let (n1, n2, n3) = dims;
        if data.len() != n1 * n2 * n3 {
            return Err(Error::shape(format!(
                "{} entries cannot fill a {n1}x{n2}x{n3} tensor",
                data.len()
            )));
        }
        Ok(Self { n1, n2, n3, data })
    }

    pub fn zeros(dims: Dims) -> Self {
        let (n1, n2, n3) = dims;
        Self {
            n1,
            n2,
            n3,
            data: vec![ZERO; n1 * n2 * n3],
        }
    }

    pub fn from_fn(dims: Dims, mut f: impl FnMut(usize, usize, usize) -> C64) -> Self {
        let (n1, n2, n3) = dims;
        let mut data = Vec::with_capacity(n1 * n2 * n3);
        for k in 0..n3 {
            for i in 0..n1 {
                for j in 0..n2 {
                    data.push(f(i, j, k));
                }
            }
        }
        Self { n1, n2, n3, data }
    }

    /// Stacks equally-shaped matrices as frontal slices.
    pub fn from_slices(slices: &[Matrix]) -> Result<Self> {
        let Some(first) = slices.first() else {
            return Err(Error::shape("a tensor needs at least one frontal slice"));
        };
        let (n1, n2) = first.shape();
        let mut data = Vec::with_capacity(n1 * n2 * slices.len());
        for (k, s) in slices.iter().enumerate() {
            if s.shape() != (n1, n2) {
                return Err(Error::shape(format!(
                    "slice {} is {}x{}, expected {n1}x{n2}",
                    k + 1,
                    s.rows(),
                    s.cols()
                )));
            }
            data.extend_from_slice(s.data());
        }
        Ok(Self {
            n1,
            n2,
            n3: slices.len(),
            data,
        })
    }

    /// Real tensor from nested `[slice][row][col]` arrays. Panics on ragged input.
    pub fn from_real_slices(slices: &[&[&[f64]]]) -> Self {
        let mats: Vec<Matrix> = slices.iter().map(|s| Matrix::from_real_rows(s)).collect();
        Self::from_slices(&mats).expect("ragged slices")
    }

    pub fn dims(&self) -> Dims {
        (self.n1, self.n2, self.n3)
    }

    pub fn n1(&self) -> usize {
        self.n1
    }

    pub fn n2(&self) -> usize {
        self.n2
    }

    pub fn n3(&self) -> usize {
        self.n3
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn is_real(&self) -> bool {
        self.data.iter().all(|v| v.im == 0.0)
    }

    pub fn slice_data(&self, k: usize) -> &[C64] {
        let len = self.n1 * self.n2;
        &self.data[k * len..(k + 1) * len]
    }

    pub fn frontal_slice(&self, k: usize) -> Matrix {
        Matrix::new(self.n1, self.n2, self.slice_data(k).to_vec()).expect("slice shape")
    }

    pub fn slices(&self) -> Vec<Matrix> {
        (0..self.n3).map(|k| self.frontal_slice(k)).collect()
    }

    pub fn tube(&self, i: usize, j: usize) -> Vec<C64> {
        (0..self.n3).map(|k| self[(i, j, k)]).collect()
    }

    /// The `n3 x (n1*n2)` mode-3 unfolding. Row `i3` holds slice `i3`; within a
    /// row the column index is `i1 * n2 + i2`.
    pub fn mode3_unfold(&self) -> Matrix {
        Matrix::new(self.n3, self.n1 * self.n2, self.data.clone()).expect("unfold shape")
    }

    pub fn mode3_fold(y: &Matrix, dims: Dims) -> Result<Self> {
        let (n1, n2, n3) = dims;
        if y.rows() != n3 || y.cols() != n1 * n2 {
            return Err(Error::shape(format!(
                "a {}x{} matrix does not fold to {n1}x{n2}x{n3}",
                y.rows(),
                y.cols()
            )));
        }
        Ok(Self {
            n1,
            n2,
            n3,
            data: y.data().to_vec(),
        })
    }

    /// Mode-3 product `A x_3 U` for `U` of shape `J x n3`.
    pub fn mode3_product(&self, u: &Matrix) -> Result<Self> {
        if u.cols() != self.n3 {
            return Err(Error::shape(format!(
                "mode-3 product needs {} columns, matrix has {}",
                self.n3,
                u.cols()
            )));
        }
        let y = u.matmul(&self.mode3_unfold())?;
        Self::mode3_fold(&y, (self.n1, self.n2, u.rows()))
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> Self {
        Self {
            n1: self.n1,
            n2: self.n2,
            n3: self.n3,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        self.map(|v| v * s)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise absolute difference. Panics if dims differ.
    pub fn max_abs_diff(&self, other: &Tensor3) -> f64 {
        assert_eq!(self.dims(), other.dims(), "max_abs_diff dims mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Max-entry comparison shared by every cross-method check.
    pub fn approx_eq(&self, other: &Tensor3, tol: f64) -> bool {
        self.dims() == other.dims() && self.max_abs_diff(other) <= tol
    }

    /// Rectangular sub-block across all slices.
    pub fn sub_block(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> Result<Self> {
        if r0 + nr > self.n1 || c0 + nc > self.n2 {
            return Err(Error::shape(format!(
                "block [{r0}..{}, {c0}..{}] exceeds {}x{}",
                r0 + nr,
                c0 + nc,
                self.n1,
                self.n2
            )));
        }
        Ok(Self::from_fn((nr, nc, self.n3), |i, j, k| {
            self[(r0 + i, c0 + j, k)]
        }))
    }

    pub fn block_split(&self, s: usize, t: usize) -> Result<BlockPartition2x2> {
        if s == 0 || s >= self.n1 || t == 0 || t >= self.n2 {
            return Err(Error::SplitOutOfRange {
                s,
                t,
                n1: self.n1,
                n2: self.n2,
            });
        }
        let (n1, n2) = (self.n1, self.n2);
        Ok(BlockPartition2x2 {
            split: (s, t),
            blocks: [
                self.sub_block(0, 0, s, t)?,
                self.sub_block(0, t, s, n2 - t)?,
                self.sub_block(s, 0, n1 - s, t)?,
                self.sub_block(s, t, n1 - s, n2 - t)?,
            ],
        })
    }

    /// Assembles `[[a1, a2], [a3, a4]]`. Blocks may have zero rows or columns
    /// as long as the partition is consistent.
    pub fn compose_blocks(a1: &Tensor3, a2: &Tensor3, a3: &Tensor3, a4: &Tensor3) -> Result<Self> {
        let n3 = a1.n3;
        let consistent = [a2, a3, a4].iter().all(|b| b.n3 == n3)
            && a1.n1 == a2.n1
            && a3.n1 == a4.n1
            && a1.n2 == a3.n2
            && a2.n2 == a4.n2;
        if !consistent {
            return Err(Error::shape(format!(
                "inconsistent 2x2 blocks: {:?} {:?} / {:?} {:?}",
                a1.dims(),
                a2.dims(),
                a3.dims(),
                a4.dims()
            )));
        }
        let (s, t) = (a1.n1, a1.n2);
        Ok(Self::from_fn(
            (s + a3.n1, t + a2.n2, n3),
            |i, j, k| match (i < s, j < t) {
                (true, true) => a1[(i, j, k)],
                (true, false) => a2[(i, j - t, k)],
                (false, true) => a3[(i - s, j, k)],
                (false, false) => a4[(i - s, j - t, k)],
            },
        ))
    }
}

/// A tensor cut at row `s` and column `t` into four blocks
/// `[[A1, A2], [A3, A4]]`, each keeping all frontal slices.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockPartition2x2 {
    pub split: (usize, usize),
    pub blocks: [Tensor3; 4],
}

impl BlockPartition2x2 {
    pub fn compose(&self) -> Result<Tensor3> {
        let [a1, a2, a3, a4] = &self.blocks;
        Tensor3::compose_blocks(a1, a2, a3, a4)
    }
}

impl Index<(usize, usize, usize)> for Tensor3 {
    type Output = C64;

    fn index(&self, (i, j, k): (usize, usize, usize)) -> &C64 {
        debug_assert!(i < self.n1 && j < self.n2 && k < self.n3);
        &self.data[(k * self.n1 + i) * self.n2 + j]
    }
}

impl IndexMut<(usize, usize, usize)> for Tensor3 {
    fn index_mut(&mut self, (i, j, k): (usize, usize, usize)) -> &mut C64 {
        debug_assert!(i < self.n1 && j < self.n2 && k < self.n3);
        &mut self.data[(k * self.n1 + i) * self.n2 + j]
    }
}

impl Add for &Tensor3 {
    type Output = Tensor3;

    fn add(self, rhs: &Tensor3) -> Tensor3 {
        assert_eq!(self.dims(), rhs.dims(), "tensor sum dims mismatch");
        Tensor3 {
            n1: self.n1,
            n2: self.n2,
            n3: self.n3,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &Tensor3 {
    type Output = Tensor3;

    fn sub(self, rhs: &Tensor3) -> Tensor3 {
        assert_eq!(self.dims(), rhs.dims(), "tensor difference dims mismatch");
        Tensor3 {
            n1: self.n1,
            n2: self.n2,
            n3: self.n3,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &Tensor3 {
    type Output = Tensor3;

    fn neg(self) -> Tensor3 {
        self.map(|v| -v)
    }
}

impl fmt::Debug for Tensor3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Tensor3 {}x{}x{}", self.n1, self.n2, self.n3)?;
        for k in 0..self.n3 {
            writeln!(f, "slice {}: {:?}", k + 1, self.frontal_slice(k))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn sample(dims: Dims) -> Tensor3 {
        Tensor3::from_fn(dims, |i, j, k| {
            C64::new((i * 7 + j * 3 + k) as f64, (i + 2 * k) as f64 - j as f64)
        })
    }

    #[test]
    fn unfold_single_tube() {
        let a = Tensor3::new((1, 1, 2), vec![c(5.0), c(7.0)]).unwrap();
        let y = a.mode3_unfold();
        assert_eq!(y, Matrix::from_real_rows(&[&[5.0], &[7.0]]));
        assert_eq!(
            Tensor3::mode3_fold(&y, (1, 1, 2)).unwrap().tube(0, 0),
            vec![c(5.0), c(7.0)]
        );
    }

    #[test]
    fn unfold_identity_slices() {
        let a =
            Tensor3::from_real_slices(&[&[&[1.0, 0.0], &[0.0, 1.0]], &[&[0.0, 0.0], &[0.0, 0.0]]]);
        let expect = Matrix::from_real_rows(&[&[1.0, 0.0, 0.0, 1.0], &[0.0, 0.0, 0.0, 0.0]]);
        assert_eq!(a.mode3_unfold(), expect);
        assert_eq!(Tensor3::mode3_fold(&expect, (2, 2, 2)).unwrap(), a);
    }

    #[test]
    fn unfold_column_order_enumerates_i2_fastest() {
        let a = sample((2, 3, 2));
        let y = a.mode3_unfold();
        for i in 0..2 {
            for j in 0..3 {
                for k in 0..2 {
                    assert_eq!(y[(k, i * 3 + j)], a[(i, j, k)]);
                }
            }
        }
    }

    #[test]
    fn fold_round_trip_is_exact() {
        for dims in [(3, 4, 5), (2, 3, 4)] {
            let a = sample(dims);
            assert_eq!(Tensor3::mode3_fold(&a.mode3_unfold(), dims).unwrap(), a);
        }
    }

    #[test]
    fn fold_rejects_bad_shape() {
        let y = Matrix::zeros(2, 5);
        assert!(matches!(
            Tensor3::mode3_fold(&y, (2, 2, 2)),
            Err(Error::ShapeMismatch(_))
        ));
    }

    #[test]
    fn mode3_identity_and_permutation() {
        let a = sample((3, 2, 4));
        assert_eq!(a.mode3_product(&Matrix::identity(4)).unwrap(), a);

        let t = Tensor3::new((1, 1, 2), vec![c(1.0), c(2.0)]).unwrap();
        let p = Matrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        assert_eq!(
            t.mode3_product(&p).unwrap().tube(0, 0),
            vec![c(2.0), c(1.0)]
        );
    }

    #[test]
    fn mode3_product_matches_definition() {
        let a = sample((2, 2, 3));
        let u = Matrix::from_fn(4, 3, |j, k| {
            C64::new(j as f64 - k as f64, 0.5 * (j * k) as f64)
        });
        let y = a.mode3_product(&u).unwrap();
        assert_eq!(y.dims(), (2, 2, 4));
        for i1 in 0..2 {
            for i2 in 0..2 {
                for j in 0..4 {
                    let mut s = ZERO;
                    for i3 in 0..3 {
                        s += a[(i1, i2, i3)] * u[(j, i3)];
                    }
                    assert!((y[(i1, i2, j)] - s).norm() < 1e-12);
                }
            }
        }
        assert!(matches!(
            a.mode3_product(&Matrix::zeros(2, 2)),
            Err(Error::ShapeMismatch(_))
        ));
    }

    #[test]
    fn split_and_compose() {
        let a = Tensor3::from_real_slices(&[&[&[1.0, 2.0], &[3.0, 4.0]]]);
        let p = a.block_split(1, 1).unwrap();
        let entries: Vec<f64> = p.blocks.iter().map(|b| b[(0, 0, 0)].re).collect();
        assert_eq!(entries, vec![1.0, 2.0, 3.0, 4.0]);
        assert_eq!(p.compose().unwrap(), a);

        let b = sample((4, 5, 3));
        assert_eq!(b.block_split(2, 3).unwrap().compose().unwrap(), b);
    }

    #[test]
    fn split_out_of_range() {
        let a = sample((2, 2, 1));
        assert!(matches!(
            a.block_split(0, 1),
            Err(Error::SplitOutOfRange { .. })
        ));
        assert!(matches!(
            a.block_split(1, 2),
            Err(Error::SplitOutOfRange { .. })
        ));
    }

    #[test]
    fn compose_allows_empty_blocks() {
        let a1 = sample((2, 2, 2));
        let a2 = Tensor3::zeros((2, 0, 2));
        let a3 = Tensor3::zeros((1, 2, 2));
        let a4 = Tensor3::zeros((1, 0, 2));
        let full = Tensor3::compose_blocks(&a1, &a2, &a3, &a4).unwrap();
        assert_eq!(full.dims(), (3, 2, 2));
        assert_eq!(full.sub_block(0, 0, 2, 2).unwrap(), a1);
    }
}
