//! Independent oracles and random generators shared by the integration tests.
//! Nothing here calls the library's enumeration code.
#![allow(dead_code)]

use k3cycles::arith::{gauss, int, rat, GaussRational, Rational};
use k3cycles::cycle::ThreeSpace;
use k3cycles::matrix::Matrix;
use k3cycles::quadspace::{k3_e, k3_e8_offset, k3_f, k3_lattice, IntegralLattice, Isometry};
use k3cycles::weyl::{reflection_matrix, Root};
use num::{BigInt, ToPrimitive};
use rand::Rng;

pub fn to_i64_rows(m: &Matrix<BigInt>) -> Vec<Vec<i64>> {
    m.to_rows()
        .into_iter()
        .map(|r| r.iter().map(|x| x.to_i64().unwrap()).collect())
        .collect()
}

pub fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn small(v: &[BigInt]) -> Vec<i64> {
    v.iter().map(|x| x.to_i64().unwrap()).collect()
}

pub fn rational_vec(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| int(x)).collect()
}

pub fn gauss_vec(v: &[i64]) -> Vec<GaussRational> {
    v.iter().map(|&x| gauss(int(x), int(0))).collect()
}

fn invert_f64(g: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = g.len();
    let mut a: Vec<Vec<f64>> = g
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).max_by(|&x, &y| a[x][c].abs().total_cmp(&a[y][c].abs())).unwrap();
        a.swap(c, p);
        let d = a[c][c];
        for x in a[c].iter_mut() {
            *x /= d;
        }
        for r in 0..n {
            if r != c {
                let f = a[r][c];
                let pivot = a[c].clone();
                for (x, y) in a[r].iter_mut().zip(pivot) {
                    *x -= f * y;
                }
            }
        }
    }
    a.into_iter().map(|r| r[n..].to_vec()).collect()
}

/// Every integer `x` with `xᵀgx = target`, found by walking the full box
/// `|xᵢ| ≤ ⌊√(target·(g⁻¹)ᵢᵢ)⌋` with no pruning.
pub fn naive_box_search(g: &[Vec<i64>], target: i64) -> Vec<Vec<i64>> {
    let n = g.len();
    let gf: Vec<Vec<f64>> = g.iter().map(|r| r.iter().map(|&x| x as f64).collect()).collect();
    let inv = invert_f64(&gf);
    let bounds: Vec<i64> = (0..n)
        .map(|i| ((target as f64) * inv[i][i] + 1e-9).sqrt().floor() as i64)
        .collect();
    let mut out = Vec::new();
    let mut x = vec![0i64; n];
    box_walk(g, target, &bounds, 0, 0, &mut vec![0i64; n], &mut x, &mut out);
    out.sort();
    out
}

// `h[j] = Σ_{i<k} g_ij x_i` and `s` is the form on the first k coordinates.
#[allow(clippy::too_many_arguments)]
fn box_walk(
    g: &[Vec<i64>],
    target: i64,
    bounds: &[i64],
    k: usize,
    s: i64,
    h: &mut Vec<i64>,
    x: &mut Vec<i64>,
    out: &mut Vec<Vec<i64>>,
) {
    let n = g.len();
    if k == n {
        if s == target {
            out.push(x.clone());
        }
        return;
    }
    for v in -bounds[k]..=bounds[k] {
        x[k] = v;
        let s2 = s + 2 * v * h[k] + g[k][k] * v * v;
        for j in k + 1..n {
            h[j] += g[k][j] * v;
        }
        box_walk(g, target, bounds, k + 1, s2, h, x, out);
        for j in k + 1..n {
            h[j] -= g[k][j] * v;
        }
    }
    x[k] = 0;
}

/// Floating point Fincke–Pohst: every integer `x` with `xᵀgx ≤ bound`
/// (plus a small margin), using a Cholesky factor and enumerating from the
/// first coordinate. Candidates are exactly re-checked by the caller.
pub fn float_short_vectors(g: &[Vec<i64>], bound: f64) -> Vec<Vec<i64>> {
    let n = g.len();
    // g = Lᵀ D L with L unit lower triangular, eliminated from the last index
    // so that coordinate 0 is innermost in the quadratic completion.
    let mut a: Vec<Vec<f64>> = g.iter().map(|r| r.iter().map(|&x| x as f64).collect()).collect();
    let mut q = vec![vec![0.0; n]; n];
    for i in (0..n).rev() {
        q[i][i] = a[i][i];
        assert!(q[i][i] > 0.0, "form must be positive definite");
        for j in 0..i {
            q[i][j] = a[i][j] / q[i][i];
        }
        for j in 0..i {
            for k in 0..i {
                a[j][k] -= q[i][j] * q[i][k] * q[i][i];
            }
        }
    }
    // Q(x) = Σ_i q_ii (x_i + Σ_{j<i} q_ij x_j)²
    let mut out = Vec::new();
    let mut x = vec![0i64; n];
    fp_walk(&q, bound * (1.0 + 1e-9) + 1e-9, 0, 0.0, &mut x, &mut out);
    out.sort();
    out
}

fn fp_walk(q: &[Vec<f64>], bound: f64, k: usize, used: f64, x: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
    let n = q.len();
    if k == n {
        out.push(x.clone());
        return;
    }
    let c: f64 = (0..k).map(|j| q[k][j] * x[j] as f64).sum();
    let r = ((bound - used).max(0.0) / q[k][k]).sqrt();
    let lo = (-c - r).ceil() as i64;
    let hi = (-c + r).floor() as i64;
    for v in lo..=hi {
        let t = v as f64 + c;
        let u = used + q[k][k] * t * t;
        if u <= bound {
            x[k] = v;
            fp_walk(q, bound, k + 1, u, x, out);
        }
    }
    x[k] = 0;
}

pub fn quad_i64(g: &[Vec<i64>], x: &[i64]) -> i64 {
    let mut s = 0;
    for i in 0..x.len() {
        for j in 0..x.len() {
            s += x[i] * g[i][j] * x[j];
        }
    }
    s
}

/// Roots of U³ ⊕ E8(−1)² orthogonal to the standard frame, assembled block by
/// block: ±(eᵢ − fᵢ) and the E8 roots placed in either E8(−1) summand.
pub fn frame_complement_roots(e8_roots: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    for i in 1..=3 {
        for s in [1, -1] {
            let mut v = vec![0i64; 22];
            v[k3_e(i)] = s;
            v[k3_f(i)] = -s;
            out.push(v);
        }
    }
    for block in 0..2 {
        let off = k3_e8_offset(block);
        for r in e8_roots {
            let mut v = vec![0i64; 22];
            v[off..off + 8].copy_from_slice(r);
            out.push(v);
        }
    }
    out.sort();
    out
}

pub fn k3() -> IntegralLattice {
    k3_lattice()
}

pub fn frame_rows() -> Vec<Vec<i64>> {
    (1..=3)
        .map(|i| {
            let mut v = vec![0i64; 22];
            v[k3_e(i)] = 1;
            v[k3_f(i)] = 1;
            v
        })
        .collect()
}

pub fn real_space(l: &IntegralLattice, rows: &[Vec<i64>]) -> ThreeSpace {
    let m = Matrix::from_rows(rows.iter().map(|r| rational_vec(r)).collect()).unwrap();
    ThreeSpace::from_real(l.space().clone(), &m).unwrap()
}

pub fn u3_diagonal() -> ThreeSpace {
    real_space(&k3(), &frame_rows())
}

/// Real positive three-space of the K3 lattice orthogonal to no root.
pub const V_PRIME: [[i64; 22]; 3] = [
    [8, 7, 0, 0, 0, 0, 0, 0, 1, -1, 1, 0, 1, -1, -1, 0, 1, 0, 0, 0, 1, 1],
    [0, 0, 4, 7, 0, 0, -1, 1, 0, 1, -1, -1, 0, 0, -1, -1, 0, -1, 0, -1, -1, 1],
    [0, 0, 0, 0, 4, 8, 1, 1, 0, 1, -1, 0, 0, -1, -1, -1, 1, -1, 1, 0, 1, 0],
];

pub fn v_prime() -> ThreeSpace {
    let rows: Vec<Vec<i64>> = V_PRIME.iter().map(|r| r.to_vec()).collect();
    real_space(&k3(), &rows)
}

pub fn random_small_rational<R: Rng>(rng: &mut R, num: i64, den: i64) -> Rational {
    rat(rng.gen_range(-num..=num), rng.gen_range(1..=den))
}

fn small_step<R: Rng>(rng: &mut R) -> Rational {
    rat(rng.gen_range(-2..=2), rng.gen_range(4..=9))
}

/// The K3 frame plus a small random perturbation, real or complex. Callers
/// check positivity themselves; with these ranges it almost always holds.
pub fn perturbed_frame<R: Rng>(rng: &mut R, complex: bool) -> Matrix<GaussRational> {
    let frame = frame_rows();
    let rows = frame
        .iter()
        .map(|r| {
            r.iter()
                .map(|&x| {
                    let dr = if rng.gen_bool(0.3) { small_step(rng) } else { int(0) };
                    let di = if complex && rng.gen_bool(0.3) {
                        small_step(rng)
                    } else {
                        int(0)
                    };
                    gauss(int(x) + dr, di)
                })
                .collect()
        })
        .collect();
    Matrix::from_rows(rows).unwrap()
}

pub fn random_positive_space<R: Rng>(rng: &mut R, l: &IntegralLattice, complex: bool) -> ThreeSpace {
    loop {
        let b = perturbed_frame(rng, complex);
        if let Ok(v) = ThreeSpace::new(l.space().clone(), b) {
            if v.is_positive() {
                return v;
            }
        }
    }
}

/// Random element of GL₃(ℚ(i)) with small Gaussian integer entries.
pub fn random_gl3<R: Rng>(rng: &mut R) -> Matrix<GaussRational> {
    loop {
        let m = Matrix::from_fn(3, 3, |_, _| {
            gauss(int(rng.gen_range(-3..=3)), int(rng.gen_range(-3..=3)))
        });
        if m.rank() == 3 {
            return m;
        }
    }
}

/// A pool of K3 roots built by hand: ±(eᵢ − fᵢ), eᵢ + fᵢ + α₀ + α₁ and
/// eᵢ + α₂ (mixing U and E8(−1) parts), and the simple roots of both E8
/// blocks.
pub fn hand_roots(l: &IntegralLattice) -> Vec<Vec<BigInt>> {
    let mut out = Vec::new();
    let e8 = k3_e8_offset(0);
    for i in 1..=3 {
        let mut v = vec![0i64; 22];
        v[k3_e(i)] = 1;
        v[k3_f(i)] = -1;
        out.push(v);
        let mut w = vec![0i64; 22];
        w[k3_e(i)] = 1;
        w[k3_f(i)] = 1;
        w[e8] = 1;
        w[e8 + 1] = 1;
        out.push(w);
        let mut u = vec![0i64; 22];
        u[k3_e(i)] = 1;
        u[e8 + 2] = 1;
        out.push(u);
    }
    for block in 0..2 {
        for s in 0..8 {
            let mut v = vec![0i64; 22];
            v[k3_e8_offset(block) + s] = 1;
            out.push(v);
        }
    }
    let out: Vec<Vec<BigInt>> = out.iter().map(|v| big(v)).collect();
    for r in &out {
        assert_eq!(l.norm(r).unwrap(), BigInt::from(-2));
    }
    out
}

pub fn random_reflection_word<R: Rng>(rng: &mut R, l: &IntegralLattice, pool: &[Vec<BigInt>], len: usize) -> Isometry {
    let mut g = Isometry::identity(l.rank());
    for _ in 0..len {
        let r = Root::new(l, pool[rng.gen_range(0..pool.len())].clone()).unwrap();
        g = g.compose(&reflection_matrix(l, &r).unwrap());
    }
    g
}

/// Integer determinant by fraction-free elimination.
pub fn bareiss_det(m: &[Vec<BigInt>]) -> BigInt {
    use num::{One, Zero};
    let n = m.len();
    let mut a = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// gcd of all maximal minors of an `r × n` integer matrix; the row span is
/// saturated in ℤⁿ exactly when this is 1.
pub fn maximal_minor_gcd(rows: &[Vec<BigInt>]) -> BigInt {
    use num::Integer;
    let r = rows.len();
    let n = rows[0].len();
    let mut g = BigInt::from(0);
    let mut cols: Vec<usize> = (0..r).collect();
    loop {
        let sub: Vec<Vec<BigInt>> = rows.iter().map(|row| cols.iter().map(|&c| row[c].clone()).collect()).collect();
        g = g.gcd(&bareiss_det(&sub));
        if g == BigInt::from(1) {
            return g;
        }
        match (0..r).rev().find(|&i| cols[i] < n - r + i) {
            Some(i) => {
                cols[i] += 1;
                for j in i + 1..r {
                    cols[j] = cols[j - 1] + 1;
                }
            }
            None => return g,
        }
    }
}
