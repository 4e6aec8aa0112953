use crate::matrix::{Matrix, C64, ZERO};

/// LU factorization with partial pivoting, packed in place. `None` when a
/// pivot is exactly zero.
fn lu_decompose(a: &Matrix) -> Option<(Matrix, Vec<usize>)> {
    assert!(a.is_square(), "LU of a non-square matrix");
    let n = a.rows();
    let mut lu = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    for j in 0..n {
        let p = (j..n)
            .max_by(|&x, &y| lu[(x, j)].norm().total_cmp(&lu[(y, j)].norm()))
            .unwrap();
        if lu[(p, j)] == ZERO {
            return None;
        }
        if p != j {
            perm.swap(p, j);
            for c in 0..n {
                let tmp = lu[(p, c)];
                lu[(p, c)] = lu[(j, c)];
                lu[(j, c)] = tmp;
            }
        }
        let pivot = lu[(j, j)];
        for i in j + 1..n {
            let f = lu[(i, j)] / pivot;
            lu[(i, j)] = f;
            if f != ZERO {
                for c in j + 1..n {
                    let u = lu[(j, c)];
                    lu[(i, c)] -= f * u;
                }
            }
        }
    }
    Some((lu, perm))
}

/// Solves `A X = B` for square `A`. `None` if `A` is exactly singular.
pub fn solve(a: &Matrix, b: &Matrix) -> Option<Matrix> {
    assert_eq!(a.rows(), b.rows(), "solve: row mismatch");
    let n = a.rows();
    let (lu, perm) = lu_decompose(a)?;
    let mut x = Matrix::from_fn(n, b.cols(), |i, j| b[(perm[i], j)]);
    for col in 0..b.cols() {
        for i in 0..n {
            let mut s = x[(i, col)];
            for k in 0..i {
                s -= lu[(i, k)] * x[(k, col)];
            }
            x[(i, col)] = s;
        }
        for i in (0..n).rev() {
            let mut s: C64 = x[(i, col)];
            for k in i + 1..n {
                s -= lu[(i, k)] * x[(k, col)];
            }
            x[(i, col)] = s / lu[(i, i)];
        }
    }
    Some(x)
}

pub fn inverse(a: &Matrix) -> Option<Matrix> {
    solve(a, &Matrix::identity(a.rows()))
}
