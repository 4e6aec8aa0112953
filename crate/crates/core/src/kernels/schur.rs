use crate::error::{Error, Result};
use crate::matrix::{Matrix, C64, ZERO};

use super::qr::{householder, reflect_cols, reflect_rows};
use super::EPS;

/// `A = Q^H T Q` with `Q` unitary and `T` upper triangular (eigenvalues on
/// the diagonal).
#[derive(Debug, Clone)]
pub struct MatrixSchur {
    pub q: Matrix,
    pub t: Matrix,
}

impl MatrixSchur {
    pub fn reconstruct(&self) -> Matrix {
        &(&self.q.adjoint() * &self.t) * &self.q
    }

    pub fn eigenvalues(&self) -> Vec<C64> {
        (0..self.t.rows()).map(|i| self.t[(i, i)]).collect()
    }
}

/// Unitary Hessenberg reduction `A = Z H Z^H`.
fn hessenberg(a: &Matrix) -> (Matrix, Matrix) {
    let n = a.rows();
    let mut h = a.clone();
    let mut z = Matrix::identity(n);
    for j in 0..n.saturating_sub(2) {
        let x: Vec<C64> = (j + 1..n).map(|i| h[(i, j)]).collect();
        if let Some((v, _)) = householder(&x) {
            reflect_rows(&mut h, &v, j + 1, j);
            reflect_cols(&mut h, &v, 0, j + 1);
            reflect_cols(&mut z, &v, 0, j + 1);
        }
        for i in j + 2..n {
            h[(i, j)] = ZERO;
        }
    }
    (h, z)
}

/// Rotation `[c, s; -conj(s), c]` mapping `(a, b)` to `(r, 0)`.
fn givens(a: C64, b: C64) -> (f64, C64) {
    if b == ZERO {
        return (1.0, ZERO);
    }
    if a == ZERO {
        return (0.0, C64::new(1.0, 0.0));
    }
    let na = a.norm();
    let r = na.hypot(b.norm());
    (na / r, (a / na) * b.conj() / r)
}

/// Eigenvalue of the trailing 2x2 block `[a b; c d]` closest to `d`.
fn wilkinson_shift(a: C64, b: C64, c: C64, d: C64) -> C64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let mid = (a + d) * 0.5;
    let (l1, l2) = (mid + disc, mid - disc);
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Complex Schur form by Hessenberg reduction and single-shift QR iteration
/// with Wilkinson shifts.
pub fn schur_matrix(a: &Matrix) -> Result<MatrixSchur> {
    assert!(a.is_square(), "Schur form of a non-square matrix");
    let n = a.rows();
    let (mut h, mut z) = hessenberg(a);
    let hnorm = h.frobenius_norm();
    let budget = 30 * n.max(1);
    let mut total = 0;
    let mut since_deflation = 0;
    let mut hi = n.saturating_sub(1);

    while hi > 0 {
        let mut lo = hi;
        while lo > 0 {
            let sub = h[(lo, lo - 1)].norm();
            let local = h[(lo - 1, lo - 1)].norm() + h[(lo, lo)].norm();
            if sub <= EPS * local || sub <= EPS * hnorm {
                h[(lo, lo - 1)] = ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            hi -= 1;
            since_deflation = 0;
            continue;
        }

        total += 1;
        since_deflation += 1;
        if total > budget {
            return Err(Error::NonConvergence {
                routine: "complex schur",
                iterations: budget,
            });
        }

        let mu = if since_deflation % 10 == 0 {
            // exceptional shift to break cycles
            let mut s = h[(hi, hi - 1)].re.abs();
            if hi >= lo + 2 {
                s += h[(hi - 1, hi - 2)].re.abs();
            }
            h[(hi, hi)] + C64::new(s, 0.0)
        } else {
            wilkinson_shift(
                h[(hi - 1, hi - 1)],
                h[(hi - 1, hi)],
                h[(hi, hi - 1)],
                h[(hi, hi)],
            )
        };

        for i in lo..=hi {
            h[(i, i)] -= mu;
        }
        let mut rotations = Vec::with_capacity(hi - lo);
        for k in lo..hi {
            let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
            for col in k..n {
                let x = h[(k, col)];
                let y = h[(k + 1, col)];
                h[(k, col)] = x * c + s * y;
                h[(k + 1, col)] = -s.conj() * x + y * c;
            }
            h[(k + 1, k)] = ZERO;
            rotations.push((k, c, s));
        }
        for &(k, c, s) in &rotations {
            for row in 0..=k + 1 {
                let x = h[(row, k)];
                let y = h[(row, k + 1)];
                h[(row, k)] = x * c + y * s.conj();
                h[(row, k + 1)] = -x * s + y * c;
            }
            for row in 0..n {
                let x = z[(row, k)];
                let y = z[(row, k + 1)];
                z[(row, k)] = x * c + y * s.conj();
                z[(row, k + 1)] = -x * s + y * c;
            }
        }
        for i in lo..=hi {
            h[(i, i)] += mu;
        }
    }

    for i in 1..n {
        for j in 0..i {
            h[(i, j)] = ZERO;
        }
    }
    Ok(MatrixSchur {
        q: z.adjoint(),
        t: h,
    })
}
