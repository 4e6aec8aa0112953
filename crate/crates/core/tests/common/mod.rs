//! Fixtures shared by the integration tests.
#![allow(dead_code)]

use std::path::PathBuf;

use ctensor::markov::{transition_from_transform_slices, TransitionTensor};
use ctensor::{kernels, Matrix, Tensor3, TransformContext, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn slices(rows: &[[[f64; 3]; 3]]) -> Tensor3 {
    let refs: Vec<Vec<&[f64]>> = rows
        .iter()
        .map(|s| s.iter().map(|r| &r[..]).collect())
        .collect();
    let slices: Vec<&[&[f64]]> = refs.iter().map(|s| &s[..]).collect();
    Tensor3::from_real_slices(&slices)
}

pub fn example1_input() -> Tensor3 {
    slices(&[
        [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 3.0]],
        [[2.0, 3.0, 0.0], [2.0, 0.0, 0.0], [1.0, 0.0, 5.0]],
        [[3.0, 1.0, 0.0], [0.0, 2.0, 3.0], [4.0, 0.0, 0.0]],
        [[3.0, 1.0, 4.0], [0.0, 2.0, 2.0], [1.0, 0.0, 2.0]],
    ])
}

/// Moore-Penrose inverse of example 1, rounded to four decimals.
pub fn example1_reference() -> Tensor3 {
    slices(&[
        [
            [1.6666, 1.3333, 9.7778],
            [1.3333, 1.0, 7.5556],
            [0.0, 0.0, -0.3333],
        ],
        [
            [-1.2722, -1.0482, -8.2780],
            [-1.2295, -0.7384, -6.2015],
            [0.1057, -0.0651, 0.2724],
        ],
        [
            [0.7451, 0.7255, 5.0065],
            [1.1372, 0.3529, 3.4837],
            [-0.2353, 0.1568, -0.0196],
        ],
        [
            [-0.2723, -0.3815, -1.6113],
            [-0.5629, -0.0718, -1.0905],
            [0.1057, -0.0651, -0.0610],
        ],
    ])
}

pub fn example2_input() -> Tensor3 {
    slices(&[
        [[2.0, 0.0, 0.0], [1.0, 3.0, 0.0], [0.0, 0.0, 0.0]],
        [[1.0, 3.0, 3.0], [0.0, 4.0, 5.0], [3.0, 0.0, 0.0]],
        [[3.0, 2.0, 0.0], [0.0, 1.0, 3.0], [2.0, 0.0, 1.0]],
    ])
}

/// Drazin inverse of example 2, rounded to four decimals.
pub fn example2_reference() -> Tensor3 {
    slices(&[
        [
            [0.0007, 0.0123, -0.1008],
            [-0.1030, 0.0358, 0.0223],
            [-0.0036, -0.0617, 0.0042],
        ],
        [
            [0.2056, -0.0473, 0.6283],
            [0.0145, 0.0637, -0.1531],
            [0.1721, 0.0365, 0.0585],
        ],
        [
            [-0.1937, 0.0317, -0.5392],
            [0.1115, -0.1005, 0.0693],
            [-0.2316, 0.0415, -0.0040],
        ],
    ])
}

pub fn example3_a() -> Tensor3 {
    slices(&[
        [[1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [3.0, 0.0, 0.0]],
        [[0.0, 0.0, 3.0], [5.0, 2.0, 0.0], [0.0, 0.0, 1.0]],
        [[0.0, 2.0, 0.0], [0.0, 0.0, 2.0], [0.0, 4.0, 3.0]],
    ])
}

pub fn example3_g() -> Tensor3 {
    slices(&[
        [[3.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 2.0]],
        [[1.0, 0.0, 5.0], [2.0, 0.0, 0.0], [2.0, 0.0, 1.0]],
        [[0.0, 3.0, 4.0], [1.0, 0.0, 3.0], [1.0, 0.0, 0.0]],
    ])
}

/// Inverse of example 3's A along G, rounded to four decimals.
pub fn example3_reference() -> Tensor3 {
    slices(&[
        [
            [-0.1043, -0.0495, 0.1030],
            [0.4039, -0.1304, -0.2377],
            [-0.4616, 0.0521, 0.1951],
        ],
        [
            [0.1220, 0.1565, -0.0864],
            [-0.4423, 0.1439, 0.1765],
            [0.5999, -0.0208, -0.2729],
        ],
        [
            [-0.0972, -0.0769, 0.0281],
            [0.0075, -0.1129, 0.1342],
            [-0.1260, 0.0084, 0.0486],
        ],
    ])
}

pub fn random_matrix(rng: &mut ChaCha8Rng, m: usize, n: usize, complex: bool) -> Matrix {
    Matrix::from_fn(m, n, |_, _| {
        let im = if complex {
            rng.gen_range(-1.0..1.0)
        } else {
            0.0
        };
        C64::new(rng.gen_range(-1.0..1.0), im)
    })
}

pub fn random_tensor(rng: &mut ChaCha8Rng, dims: (usize, usize, usize), complex: bool) -> Tensor3 {
    Tensor3::from_fn(dims, |_, _, _| {
        let im = if complex {
            rng.gen_range(-1.0..1.0)
        } else {
            0.0
        };
        C64::new(rng.gen_range(-1.0..1.0), im)
    })
}

/// `n1 x n2 x n3` tensor whose transform slices all have rank `r`.
pub fn equal_rank(
    rng: &mut ChaCha8Rng,
    (n1, n2, n3): (usize, usize, usize),
    r: usize,
    complex: bool,
) -> Tensor3 {
    let ctx = TransformContext::new(n3);
    let slices: Vec<Matrix> = (0..n3)
        .map(|_| &random_matrix(rng, n1, r, complex) * &random_matrix(rng, r, n2, complex))
        .collect();
    ctx.from_transform_slices(&slices).unwrap()
}

/// Square tensor whose transform slices are `P blkdiag(C, J) P^{-1}` with `C`
/// (`core x core`) well conditioned and `J` a single nilpotent Jordan block,
/// so the index is `n - core` (or 0 when `core = n`).
pub fn core_plus_nilpotent(
    rng: &mut ChaCha8Rng,
    n: usize,
    core: usize,
    n3: usize,
    complex: bool,
) -> Tensor3 {
    let ctx = TransformContext::new(n3);
    let slices: Vec<Matrix> = (0..n3)
        .map(|_| {
            let mut c = random_matrix(rng, core, core, complex);
            for i in 0..core {
                c[(i, i)] += C64::new(3.0, 0.0);
            }
            let mut j = Matrix::zeros(n - core, n - core);
            for i in 1..n - core {
                j[(i - 1, i)] = C64::new(1.0, 0.0);
            }
            let mut p = random_matrix(rng, n, n, complex).scale(C64::new(0.3, 0.0));
            for i in 0..n {
                p[(i, i)] += C64::new(1.0, 0.0);
            }
            let p_inv = kernels::inverse(&p).unwrap();
            &(&p * &Matrix::block_diag(&[c, j])) * &p_inv
        })
        .collect();
    ctx.from_transform_slices(&slices).unwrap()
}

/// Column-stochastic matrix with entries bounded away from zero.
pub fn random_stochastic(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
    let mut m = Matrix::from_fn(n, n, |_, _| C64::new(rng.gen_range(0.05..1.0), 0.0));
    for j in 0..n {
        let total: f64 = (0..n).map(|i| m[(i, j)].re).sum();
        for i in 0..n {
            m[(i, j)] /= total;
        }
    }
    m
}

/// A transition tensor whose transform slices are column-stochastic. With
/// entries confined to `[0, 1]` this forces every transform slice to be the
/// same matrix, so the chain is built from one random stochastic matrix.
pub fn random_chain(
    rng: &mut ChaCha8Rng,
    n: usize,
    n3: usize,
) -> (TransformContext, TransitionTensor) {
    let ctx = TransformContext::new(n3);
    let p1 = random_stochastic(rng, n);
    let t = transition_from_transform_slices(&vec![p1; n3], &ctx).unwrap();
    (ctx, t)
}
