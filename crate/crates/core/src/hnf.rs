//! Integer row/column echelon forms, integer kernels and saturation.

use num::integer::Integer;
use num::{BigInt, One, Signed, Zero};

use crate::matrix::Matrix;

/// Column echelon form `E = A·U` with `U` unimodular.
///
/// Returns `(E, U, r)` where the first `r` columns of `E` carry one pivot per
/// independent row of `A` and columns `r..n` of `E` vanish.
pub fn column_echelon(a: &Matrix<BigInt>) -> (Matrix<BigInt>, Matrix<BigInt>, usize) {
    let n = a.ncols();
    let mut e = a.clone();
    let mut u = Matrix::from_fn(n, n, |i, j| BigInt::from((i == j) as i32));
    let mut p = 0;
    for r in 0..a.nrows() {
        if p == n {
            break;
        }
        for c in p + 1..n {
            if e[(r, c)].is_zero() {
                continue;
            }
            if e[(r, p)].is_zero() {
                swap_cols(&mut e, p, c);
                swap_cols(&mut u, p, c);
                continue;
            }
            let a_rp = e[(r, p)].clone();
            let a_rc = e[(r, c)].clone();
            let g = a_rp.extended_gcd(&a_rc);
            // [[x, -b/g], [y, a/g]] has determinant 1
            let m = [
                [g.x.clone(), -(&a_rc / &g.gcd)],
                [g.y.clone(), &a_rp / &g.gcd],
            ];
            combine_cols(&mut e, p, c, &m);
            combine_cols(&mut u, p, c, &m);
        }
        if !e[(r, p)].is_zero() {
            p += 1;
        }
    }
    (e, u, p)
}

fn swap_cols(m: &mut Matrix<BigInt>, a: usize, b: usize) {
    for i in 0..m.nrows() {
        let t = m[(i, a)].clone();
        m[(i, a)] = m[(i, b)].clone();
        m[(i, b)] = t;
    }
}

/// Replaces columns `(a, b)` by `(a, b) · m`.
fn combine_cols(mat: &mut Matrix<BigInt>, a: usize, b: usize, m: &[[BigInt; 2]; 2]) {
    for i in 0..mat.nrows() {
        let x = mat[(i, a)].clone();
        let y = mat[(i, b)].clone();
        mat[(i, a)] = &x * &m[0][0] + &y * &m[1][0];
        mat[(i, b)] = &x * &m[0][1] + &y * &m[1][1];
    }
}

/// Basis (as rows) of the integer kernel `{x ∈ ℤⁿ | A·x = 0}`.
///
/// The basis is taken from the trailing columns of a unimodular transform,
/// so its span is saturated in ℤⁿ. Rows are returned in Hermite normal form.
pub fn integer_kernel(a: &Matrix<BigInt>) -> Matrix<BigInt> {
    let n = a.ncols();
    let (_, u, r) = column_echelon(a);
    let rows: Vec<Vec<BigInt>> = (r..n)
        .map(|j| (0..n).map(|i| u[(i, j)].clone()).collect())
        .collect();
    if rows.is_empty() {
        return Matrix::zeros(0, n);
    }
    hermite_normal_form(&Matrix::from_rows(rows).expect("equal lengths"))
}

/// Row Hermite normal form of a matrix with independent rows: pivots are
/// positive, entries above a pivot lie in `[0, pivot)`.
pub fn hermite_normal_form(a: &Matrix<BigInt>) -> Matrix<BigInt> {
    let mut h = a.to_rows();
    let rows = h.len();
    let cols = a.ncols();
    let mut cur = 0;
    for c in 0..cols {
        if cur == rows {
            break;
        }
        for i in cur + 1..rows {
            if h[i][c].is_zero() {
                continue;
            }
            if h[cur][c].is_zero() {
                h.swap(cur, i);
                continue;
            }
            let a_c = h[cur][c].clone();
            let b_c = h[i][c].clone();
            let g = a_c.extended_gcd(&b_c);
            let (ra, rb) = (h[cur].clone(), h[i].clone());
            for j in 0..cols {
                h[cur][j] = &g.x * &ra[j] + &g.y * &rb[j];
                h[i][j] = -(&b_c / &g.gcd) * &ra[j] + (&a_c / &g.gcd) * &rb[j];
            }
        }
        if h[cur][c].is_zero() {
            continue;
        }
        if h[cur][c].is_negative() {
            for x in h[cur].iter_mut() {
                *x = -x.clone();
            }
        }
        let pivot = h[cur][c].clone();
        for i in 0..cur {
            let q = h[i][c].div_floor(&pivot);
            if q.is_zero() {
                continue;
            }
            for j in 0..cols {
                let v = &q * &h[cur][j];
                h[i][j] -= v;
            }
        }
        cur += 1;
    }
    h.truncate(cur);
    if h.is_empty() {
        return Matrix::zeros(0, cols);
    }
    Matrix::from_rows(h).expect("equal lengths")
}

/// Index of the row span of `b` in its saturation, i.e. the gcd of the
/// maximal minors. Equals 1 exactly when the span is saturated.
pub fn saturation_index(b: &Matrix<BigInt>) -> BigInt {
    let (e, _, r) = column_echelon(b);
    assert_eq!(r, b.nrows(), "rows must be independent");
    (0..r).fold(BigInt::one(), |acc, i| acc * e[(i, i)].abs())
}

pub fn is_saturated(b: &Matrix<BigInt>) -> bool {
    b.nrows() == 0 || saturation_index(b).is_one()
}
