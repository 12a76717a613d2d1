//! Quadratic spaces over ℚ, integral lattices, their isometries, and exact
//! Sylvester inertia of symmetric and Hermitian forms.

use std::cmp::Ordering;
use std::fmt;

use num::{BigInt, One, Signed, Zero};

use crate::arith::{GaussRational, Rational, Scalar};
use crate::error::{Error, Result};
use crate::matrix::{dot, Matrix};

/// Inertia `(positive, negative, null)` of a form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Inertia {
    pub pos: usize,
    pub neg: usize,
    pub null: usize,
}

impl Inertia {
    pub const fn new(pos: usize, neg: usize, null: usize) -> Self {
        Inertia { pos, neg, null }
    }

    pub fn as_tuple(&self) -> (usize, usize, usize) {
        (self.pos, self.neg, self.null)
    }
}

impl fmt::Display for Inertia {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.pos, self.neg, self.null)
    }
}

/// Inertia by congruence diagonalization.
///
/// Nonzero diagonal pivots are eliminated one at a time. When the remaining
/// diagonal vanishes, an off-diagonal pair `(k, l)` spans a hyperbolic plane
/// with inertia `(1, 1)` and is split off through its Schur complement.
fn congruence_inertia<T: Scalar>(m: &Matrix<T>) -> Inertia {
    let mut a = m.clone();
    let mut active: Vec<usize> = (0..m.nrows()).collect();
    let mut inertia = Inertia::new(0, 0, 0);
    while !active.is_empty() {
        if let Some(pos) = active.iter().position(|&k| !a[(k, k)].is_zero()) {
            let k = active.remove(pos);
            let pivot = a[(k, k)].clone();
            match pivot.real_sign() {
                Ordering::Greater => inertia.pos += 1,
                Ordering::Less => inertia.neg += 1,
                Ordering::Equal => unreachable!("nonzero Hermitian diagonal is real"),
            }
            for &i in &active {
                if a[(i, k)].is_zero() {
                    continue;
                }
                let f = a[(i, k)].clone() / pivot.clone();
                for &j in &active {
                    let v = f.clone() * a[(k, j)].clone();
                    a[(i, j)] = a[(i, j)].clone() - v;
                }
            }
            continue;
        }
        let pair = active.iter().enumerate().find_map(|(ik, &k)| {
            active[ik + 1..]
                .iter()
                .find(|&&l| !a[(k, l)].is_zero())
                .map(|&l| (k, l))
        });
        let Some((k, l)) = pair else {
            inertia.null += active.len();
            break;
        };
        inertia.pos += 1;
        inertia.neg += 1;
        active.retain(|&x| x != k && x != l);
        let inv_b = T::one() / a[(k, l)].clone();
        let inv_b_conj = T::one() / a[(l, k)].clone();
        for &i in &active {
            for &j in &active {
                let v = a[(i, k)].clone() * inv_b_conj.clone() * a[(l, j)].clone()
                    + a[(i, l)].clone() * inv_b.clone() * a[(k, j)].clone();
                a[(i, j)] = a[(i, j)].clone() - v;
            }
        }
    }
    inertia
}

/// Congruence diagonalization `Tᵀ H T = diag(d)` of a symmetric matrix
/// (bilinear, no conjugation). Zero diagonals are repaired by adding a partner basis vector.
pub fn diagonalize_symmetric<T: Scalar>(h: &Matrix<T>) -> (Matrix<T>, Vec<T>) {
    let n = h.nrows();
    let mut a = h.clone();
    let mut t = Matrix::<T>::identity(n);
    let mut d = Vec::with_capacity(n);
    for k in 0..n {
        if a[(k, k)].is_zero() {
            if let Some(p) = (k + 1..n).find(|&p| !a[(k, p)].is_zero()) {
                // b_k ← b_k ± b_p has diagonal a_pp ± 2·a_kp, nonzero for one sign
                let two_b = a[(k, p)].clone() + a[(p, k)].clone();
                let f = if (a[(p, p)].clone() + two_b).is_zero() { -T::one() } else { T::one() };
                add_basis(&mut a, &mut t, k, p, &f);
            }
        }
        let pivot = a[(k, k)].clone();
        d.push(pivot.clone());
        if pivot.is_zero() {
            continue;
        }
        for j in k + 1..n {
            if a[(k, j)].is_zero() {
                continue;
            }
            let f = -(a[(k, j)].clone() / pivot.clone());
            add_basis(&mut a, &mut t, j, k, &f);
        }
    }
    (t, d)
}

/// Basis change `b_target ← b_target + f·b_source`, applied to both the form
/// and the transform.
fn add_basis<T: Scalar>(a: &mut Matrix<T>, t: &mut Matrix<T>, target: usize, source: usize, f: &T) {
    let n = a.nrows();
    for i in 0..n {
        let v = f.clone() * a[(i, source)].clone();
        a[(i, target)] = a[(i, target)].clone() + v;
    }
    for j in 0..n {
        let v = f.clone() * a[(source, j)].clone();
        a[(target, j)] = a[(target, j)].clone() + v;
    }
    for i in 0..n {
        let v = f.clone() * t[(i, source)].clone();
        t[(i, target)] = t[(i, target)].clone() + v;
    }
}

/// Exact inertia of a symmetric rational matrix.
pub fn signature(m: &Matrix<Rational>) -> Result<Inertia> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    if !m.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    Ok(congruence_inertia(m))
}

/// Exact inertia of a Hermitian matrix over ℚ(i).
pub fn hermitian_signature(h: &Matrix<GaussRational>) -> Result<Inertia> {
    if !h.is_square() {
        return Err(Error::NotSquare {
            rows: h.nrows(),
            cols: h.ncols(),
        });
    }
    if !h.is_hermitian() {
        return Err(Error::NotHermitian);
    }
    Ok(congruence_inertia(h))
}

/// Nondegenerate symmetric bilinear form on ℚⁿ.
///
/// The optional positive frame is a fixed triple of vectors spanning a
/// positive three-space; it orients the positive directions for O⁺ tests.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticSpace {
    gram: Matrix<Rational>,
    frame: Option<Matrix<Rational>>,
}

impl QuadraticSpace {
    pub fn new(gram: Matrix<Rational>) -> Result<Self> {
        if !gram.is_square() {
            return Err(Error::NotSquare {
                rows: gram.nrows(),
                cols: gram.ncols(),
            });
        }
        if gram.nrows() == 0 {
            return Err(Error::Degenerate);
        }
        if !gram.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        if gram.determinant()?.is_zero() {
            return Err(Error::Degenerate);
        }
        Ok(QuadraticSpace { gram, frame: None })
    }

    /// Attaches a designated positive frame (three rows spanning a positive
    /// definite subspace).
    pub fn with_frame(mut self, frame: Matrix<Rational>) -> Result<Self> {
        if frame.nrows() != 3 || frame.ncols() != self.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rank(),
                found: frame.ncols(),
            });
        }
        let g = self.restrict(&frame)?;
        if signature(&g)? != Inertia::new(3, 0, 0) {
            return Err(Error::NotPositiveDefinite);
        }
        self.frame = Some(frame);
        Ok(self)
    }

    /// Attaches the conventional frame when the Gram matrix is recognised as
    /// the K3 form or a diagonal form with exactly three `+1` entries.
    pub fn with_detected_frame(self) -> Self {
        if self.frame.is_some() {
            return self;
        }
        let n = self.rank();
        let k3 = k3_gram();
        let frame = if self.gram == k3 {
            Some(k3_positive_frame())
        } else if is_diagonal(&self.gram) {
            let plus: Vec<usize> = (0..n)
                .filter(|&i| self.gram[(i, i)] == Rational::one())
                .collect();
            let minus = (0..n).filter(|&i| self.gram[(i, i)] == -Rational::one()).count();
            (plus.len() == 3 && plus.len() + minus == n).then(|| {
                Matrix::from_fn(3, n, |r, c| {
                    if c == plus[r] {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
            })
        } else {
            None
        };
        match frame {
            Some(f) => self.with_frame(f).expect("conventional frame is positive"),
            None => self,
        }
    }

    pub fn rank(&self) -> usize {
        self.gram.nrows()
    }

    pub fn gram(&self) -> &Matrix<Rational> {
        &self.gram
    }

    pub fn positive_frame(&self) -> Option<&Matrix<Rational>> {
        self.frame.as_ref()
    }

    pub fn signature(&self) -> Inertia {
        congruence_inertia(&self.gram)
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rank(),
                found: len,
            });
        }
        Ok(())
    }

    /// Rational pairing `xᵀ G y`.
    pub fn pair(&self, x: &[Rational], y: &[Rational]) -> Result<Rational> {
        self.check_len(x.len())?;
        self.check_len(y.len())?;
        Ok(dot(x, &self.gram.mul_vec(y)?))
    }

    /// Gram matrix `B G Bᵀ` of the rows of `basis`.
    pub fn restrict(&self, basis: &Matrix<Rational>) -> Result<Matrix<Rational>> {
        self.check_len(basis.ncols())?;
        basis.matmul(&self.gram)?.matmul(&basis.transpose())
    }

    pub fn same_form(&self, other: &QuadraticSpace) -> bool {
        self.gram == other.gram
    }
}

fn is_diagonal(m: &Matrix<Rational>) -> bool {
    (0..m.nrows()).all(|i| (0..m.ncols()).all(|j| i == j || m[(i, j)].is_zero()))
}

/// ℂ-bilinear extension `xᵀ G y` (no conjugation).
pub fn bilinear(space: &QuadraticSpace, x: &[GaussRational], y: &[GaussRational]) -> Result<GaussRational> {
    space.check_len(x.len())?;
    space.check_len(y.len())?;
    let mut re = Rational::zero();
    let mut im = Rational::zero();
    for (i, xi) in x.iter().enumerate() {
        if xi.is_zero() {
            continue;
        }
        for (j, yj) in y.iter().enumerate() {
            let g = &space.gram[(i, j)];
            if g.is_zero() || yj.is_zero() {
                continue;
            }
            let p = xi * yj;
            re += &p.re * g;
            im += &p.im * g;
        }
    }
    Ok(GaussRational::new(re, im))
}

/// Sesquilinear pairing `⟨x, ȳ⟩`.
pub fn hermitian_pair(space: &QuadraticSpace, x: &[GaussRational], y: &[GaussRational]) -> Result<GaussRational> {
    let y_bar: Vec<GaussRational> = y.iter().map(Scalar::conj).collect();
    bilinear(space, x, &y_bar)
}

/// Quadratic space with integral Gram matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralLattice {
    space: QuadraticSpace,
    gram: Matrix<BigInt>,
}

impl IntegralLattice {
    pub fn new(space: QuadraticSpace) -> Result<Self> {
        let gram = space.gram.to_integer().ok_or(Error::NonIntegral)?;
        Ok(IntegralLattice { space, gram })
    }

    pub fn from_gram(gram: Matrix<BigInt>) -> Result<Self> {
        let space = QuadraticSpace::new(gram.to_rational())?.with_detected_frame();
        Ok(IntegralLattice { space, gram })
    }

    pub fn space(&self) -> &QuadraticSpace {
        &self.space
    }

    pub fn gram(&self) -> &Matrix<BigInt> {
        &self.gram
    }

    pub fn rank(&self) -> usize {
        self.space.rank()
    }

    pub fn pair(&self, x: &[BigInt], y: &[BigInt]) -> Result<BigInt> {
        self.space.check_len(x.len())?;
        self.space.check_len(y.len())?;
        Ok(dot(x, &self.gram.mul_vec(y)?))
    }

    pub fn norm(&self, x: &[BigInt]) -> Result<BigInt> {
        self.pair(x, x)
    }

    /// `G·x`, the linear functional `y ↦ ⟨x, y⟩` as a row.
    pub fn dual_row(&self, x: &[BigInt]) -> Result<Vec<BigInt>> {
        self.gram.mul_vec(x)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeInvariants {
    pub even: bool,
    pub determinant: BigInt,
    pub unimodular: bool,
}

pub fn lattice_invariants(lattice: &IntegralLattice) -> LatticeInvariants {
    let g = lattice.gram();
    let even = (0..g.nrows()).all(|i| (&g[(i, i)] % BigInt::from(2)).is_zero());
    let det = lattice
        .space
        .gram
        .determinant()
        .expect("Gram matrix is square")
        .to_integer();
    LatticeInvariants {
        even,
        unimodular: det.abs().is_one(),
        determinant: det,
    }
}

/// True iff `gᵀ G g = G`.
pub fn is_isometry(lattice: &IntegralLattice, g: &Matrix<BigInt>) -> Result<bool> {
    let n = lattice.rank();
    if g.nrows() != n || g.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: if g.nrows() != n { g.nrows() } else { g.ncols() },
        });
    }
    let pulled = g.transpose().matmul(lattice.gram())?.matmul(g)?;
    Ok(&pulled == lattice.gram())
}

/// Integer matrix preserving the Gram matrix of a lattice; acts on column
/// vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Isometry {
    matrix: Matrix<BigInt>,
}

impl Isometry {
    pub fn new(lattice: &IntegralLattice, matrix: Matrix<BigInt>) -> Result<Self> {
        if !is_isometry(lattice, &matrix)? {
            return Err(Error::NotAnIsometry);
        }
        let det = matrix.to_rational().determinant()?;
        assert!(det.abs().is_one(), "isometry of a nondegenerate form has unit determinant");
        Ok(Isometry { matrix })
    }

    pub fn identity(n: usize) -> Self {
        Isometry {
            matrix: Matrix::from_fn(n, n, |i, j| BigInt::from((i == j) as i32)),
        }
    }

    pub fn matrix(&self) -> &Matrix<BigInt> {
        &self.matrix
    }

    pub fn apply(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.matrix.mul_vec(x).expect("dimension checked at construction")
    }

    pub fn apply_rational(&self, x: &[Rational]) -> Vec<Rational> {
        self.matrix.to_rational().mul_vec(x).expect("dimension checked at construction")
    }

    pub fn apply_gauss(&self, x: &[GaussRational]) -> Vec<GaussRational> {
        self.matrix
            .to_rational()
            .to_gauss()
            .mul_vec(x)
            .expect("dimension checked at construction")
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Isometry) -> Isometry {
        Isometry {
            matrix: self.matrix.matmul(&other.matrix).expect("same rank"),
        }
    }

    pub fn inverse(&self, lattice: &IntegralLattice) -> Isometry {
        // g⁻¹ = G⁻¹ gᵀ G
        let g = lattice.space.gram();
        let inv = g
            .inverse()
            .expect("nondegenerate")
            .matmul(&self.matrix.to_rational().transpose())
            .and_then(|m| m.matmul(g))
            .expect("square");
        Isometry {
            matrix: inv.to_integer().expect("inverse of a lattice isometry is integral"),
        }
    }

    pub fn determinant(&self) -> BigInt {
        self.matrix.to_rational().determinant().expect("square").to_integer()
    }
}

/// Named standard forms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LatticeKind {
    U,
    E8,
    E8Neg,
    K3,
    Diag(Vec<i8>),
}

impl std::str::FromStr for LatticeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "U" => Ok(LatticeKind::U),
            "E8" => Ok(LatticeKind::E8),
            "E8_neg" | "E8(-1)" => Ok(LatticeKind::E8Neg),
            "K3" => Ok(LatticeKind::K3),
            _ => {
                let inner = s
                    .strip_prefix("diag(")
                    .and_then(|t| t.strip_suffix(')'))
                    .ok_or_else(|| Error::Parse(format!("unknown lattice kind {s:?}")))?;
                let signs = inner
                    .split(',')
                    .map(|t| match t.trim() {
                        "+" | "1" | "+1" => Ok(1),
                        "-" | "-1" => Ok(-1),
                        other => Err(Error::Parse(format!("invalid sign {other:?}"))),
                    })
                    .collect::<Result<Vec<i8>>>()?;
                Ok(LatticeKind::Diag(signs))
            }
        }
    }
}

/// Result of [`make_standard_lattice`]: diagonal forms are plain quadratic
/// spaces without a chosen integral structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StandardSpace {
    Lattice(IntegralLattice),
    Space(QuadraticSpace),
}

impl StandardSpace {
    pub fn space(&self) -> &QuadraticSpace {
        match self {
            StandardSpace::Lattice(l) => l.space(),
            StandardSpace::Space(s) => s,
        }
    }

    pub fn lattice(&self) -> Option<&IntegralLattice> {
        match self {
            StandardSpace::Lattice(l) => Some(l),
            StandardSpace::Space(_) => None,
        }
    }
}

pub fn make_standard_lattice(kind: &LatticeKind) -> Result<StandardSpace> {
    let lattice = |g: Matrix<BigInt>| IntegralLattice::from_gram(g).map(StandardSpace::Lattice);
    match kind {
        LatticeKind::U => lattice(int_matrix(&hyperbolic_plane())),
        LatticeKind::E8 => lattice(e8_gram()),
        LatticeKind::E8Neg => lattice(e8_gram().map(|x| -x)),
        LatticeKind::K3 => lattice(k3_gram().to_integer().expect("integral")),
        LatticeKind::Diag(signs) => {
            if signs.is_empty() || signs.iter().any(|&s| s != 1 && s != -1) {
                return Err(Error::InvalidSigns);
            }
            let n = signs.len();
            let gram = Matrix::from_fn(n, n, |i, j| {
                if i == j {
                    Rational::from_integer(BigInt::from(signs[i]))
                } else {
                    Rational::zero()
                }
            });
            Ok(StandardSpace::Space(QuadraticSpace::new(gram)?.with_detected_frame()))
        }
    }
}

/// The K3 lattice `U ⊕ U ⊕ U ⊕ E8(−1) ⊕ E8(−1)`.
pub fn k3_lattice() -> IntegralLattice {
    match make_standard_lattice(&LatticeKind::K3).expect("K3 form is valid") {
        StandardSpace::Lattice(l) => l,
        StandardSpace::Space(_) => unreachable!(),
    }
}

/// `diag(1, 1, 1, −1, …, −1)` of rank `n`.
pub fn diag_space(n: usize) -> Result<QuadraticSpace> {
    if n < 3 {
        return Err(Error::OutOfRange(format!("diagonal ambient needs rank >= 3, got {n}")));
    }
    let signs: Vec<i8> = (0..n).map(|i| if i < 3 { 1 } else { -1 }).collect();
    Ok(make_standard_lattice(&LatticeKind::Diag(signs))?.space().clone())
}

fn hyperbolic_plane() -> [[i64; 2]; 2] {
    [[0, 1], [1, 0]]
}

fn int_matrix<const N: usize>(rows: &[[i64; N]; N]) -> Matrix<BigInt> {
    Matrix::from_fn(N, N, |i, j| BigInt::from(rows[i][j]))
}

/// Gram matrix of E8 in the basis of simple roots
///
/// ```text
/// α1 = ½(1,−1,−1,−1,−1,−1,−1,1)   α2 = ε1+ε2   α3 = ε2−ε1   α4 = ε3−ε2
/// α5 = ε4−ε3   α6 = ε5−ε4   α7 = ε6−ε5   α8 = ε7−ε6
/// ```
///
/// inside `D8 ∪ (D8 + (½,…,½))`. This is the Cartan matrix with the chain
/// 1–3–4–5–6–7–8 and node 2 attached to node 4.
pub fn e8_gram() -> Matrix<BigInt> {
    const EDGES: [(usize, usize); 7] = [(0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (1, 3)];
    let mut g = Matrix::from_fn(8, 8, |i, j| BigInt::from(if i == j { 2 } else { 0 }));
    for (a, b) in EDGES {
        g[(a, b)] = BigInt::from(-1);
        g[(b, a)] = BigInt::from(-1);
    }
    g
}

/// Index of `e_i` (1-based `i ∈ {1,2,3}`) in K3 coordinates.
pub fn k3_e(i: usize) -> usize {
    2 * (i - 1)
}

/// Index of `f_i` (1-based `i ∈ {1,2,3}`) in K3 coordinates.
pub fn k3_f(i: usize) -> usize {
    2 * (i - 1) + 1
}

/// Offset of the first (`block = 0`) or second E8(−1) block in K3 coordinates.
pub fn k3_e8_offset(block: usize) -> usize {
    6 + 8 * block
}

pub const K3_RANK: usize = 22;

fn k3_gram() -> Matrix<Rational> {
    let u = int_matrix(&hyperbolic_plane());
    let e8n = e8_gram().map(|x| -x);
    Matrix::block_diagonal(&[&u, &u, &u, &e8n, &e8n]).to_rational()
}

/// `(e₁+f₁, e₂+f₂, e₃+f₃)`.
pub fn k3_positive_frame() -> Matrix<Rational> {
    Matrix::from_fn(3, K3_RANK, |r, c| {
        if c == k3_e(r + 1) || c == k3_f(r + 1) {
            Rational::one()
        } else {
            Rational::zero()
        }
    })
}

/// Unit vector `e_i` (0-based index) of length `n` as integers.
pub fn unit(n: usize, i: usize) -> Vec<BigInt> {
    (0..n).map(|j| BigInt::from((i == j) as i32)).collect()
}
