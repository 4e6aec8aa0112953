use crate::matrix::{Matrix, C64, ONE, ZERO};

/// `A = Q R` with `Q` unitary (`m x m`) and `R` upper triangular (`m x n`).
#[derive(Debug, Clone)]
pub struct MatrixQr {
    pub q: Matrix,
    pub r: Matrix,
}

/// Householder vector `v` with `(I - 2 v v^H / v^H v) x = alpha e1`.
/// Returns `None` when `x` is already a multiple of `e1`.
pub(crate) fn householder(x: &[C64]) -> Option<(Vec<C64>, C64)> {
    let tail: f64 = x[1..].iter().map(|v| v.norm_sqr()).sum();
    if tail == 0.0 {
        return None;
    }
    let norm = (x[0].norm_sqr() + tail).sqrt();
    let phase = if x[0] == ZERO {
        ONE
    } else {
        x[0] / x[0].norm()
    };
    let alpha = -phase * norm;
    let mut v = x.to_vec();
    v[0] -= alpha;
    Some((v, alpha))
}

/// `B[r0.., c0..] <- H B[r0.., c0..]` for the reflector defined by `v`.
pub(crate) fn reflect_rows(b: &mut Matrix, v: &[C64], r0: usize, c0: usize) {
    let vnorm: f64 = v.iter().map(|x| x.norm_sqr()).sum();
    let beta = 2.0 / vnorm;
    for c in c0..b.cols() {
        let mut dot = ZERO;
        for (i, vi) in v.iter().enumerate() {
            dot += vi.conj() * b[(r0 + i, c)];
        }
        let f = dot * beta;
        for (i, vi) in v.iter().enumerate() {
            b[(r0 + i, c)] -= vi * f;
        }
    }
}

/// `B[r0.., c0..] <- B[r0.., c0..] H` for the reflector defined by `v`.
pub(crate) fn reflect_cols(b: &mut Matrix, v: &[C64], r0: usize, c0: usize) {
    let vnorm: f64 = v.iter().map(|x| x.norm_sqr()).sum();
    let beta = 2.0 / vnorm;
    for r in r0..b.rows() {
        let mut dot = ZERO;
        for (i, vi) in v.iter().enumerate() {
            dot += b[(r, c0 + i)] * vi;
        }
        let f = dot * beta;
        for (i, vi) in v.iter().enumerate() {
            b[(r, c0 + i)] -= f * vi.conj();
        }
    }
}

fn householder_qr(a: &Matrix, pivot: bool) -> (MatrixQr, Vec<usize>) {
    let (m, n) = a.shape();
    let mut r = a.clone();
    let mut q = Matrix::identity(m);
    let mut perm: Vec<usize> = (0..n).collect();
    for j in 0..m.min(n) {
        if pivot {
            let col_norm = |r: &Matrix, c: usize| (j..m).map(|i| r[(i, c)].norm_sqr()).sum::<f64>();
            let best = (j..n)
                .max_by(|&x, &y| col_norm(&r, x).total_cmp(&col_norm(&r, y)))
                .unwrap();
            if best != j {
                r.swap_columns(best, j);
                perm.swap(best, j);
            }
        }
        let x: Vec<C64> = (j..m).map(|i| r[(i, j)]).collect();
        if let Some((v, alpha)) = householder(&x) {
            reflect_rows(&mut r, &v, j, j);
            reflect_cols(&mut q, &v, 0, j);
            r[(j, j)] = alpha;
            for i in j + 1..m {
                r[(i, j)] = ZERO;
            }
        }
    }
    (MatrixQr { q, r }, perm)
}

/// Householder QR.
pub fn qr_matrix(a: &Matrix) -> MatrixQr {
    householder_qr(a, false).0
}

/// Column-pivoted Householder QR: `A[:, perm] = Q R` with `|R_jj|` nonincreasing.
pub fn qr_pivoted(a: &Matrix) -> (MatrixQr, Vec<usize>) {
    householder_qr(a, true)
}
