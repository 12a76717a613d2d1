//! Saturated orthogonal complements and enumeration of lattice vectors of a
//! prescribed norm.
//!
//! The enumerator is a Fincke–Pohst branch and bound over an exact rational
//! LDLᵀ decomposition: coordinates are fixed from the last to the first, and
//! each coordinate ranges over the integers of an interval whose radius is
//! the remaining norm budget.

use num::integer::Integer;
use num::{BigInt, One, Signed, Zero};

use crate::arith::Rational;
use crate::cycle::ThreeSpace;
use crate::error::{Error, Result};
use crate::hnf::integer_kernel;
use crate::matrix::{int_to_rational_vec, Matrix};
use crate::quadspace::{signature, Inertia, IntegralLattice};

/// Saturated sublattice given by a basis in Hermite normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sublattice {
    ambient: IntegralLattice,
    basis: Matrix<BigInt>,
    restricted_gram: Matrix<BigInt>,
}

impl Sublattice {
    pub fn ambient(&self) -> &IntegralLattice {
        &self.ambient
    }

    /// Basis vectors as rows.
    pub fn basis(&self) -> &Matrix<BigInt> {
        &self.basis
    }

    pub fn restricted_gram(&self) -> &Matrix<BigInt> {
        &self.restricted_gram
    }

    pub fn rank(&self) -> usize {
        self.basis.nrows()
    }

    /// Ambient vector with the given sublattice coordinates.
    pub fn embed(&self, coords: &[BigInt]) -> Vec<BigInt> {
        self.basis
            .transpose()
            .mul_vec(coords)
            .expect("coordinate count equals rank")
    }
}

/// Finite list of lattice vectors, sorted lexicographically without
/// duplicates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootList {
    roots: Vec<Vec<BigInt>>,
    complete: bool,
    bound: Option<u64>,
}

impl RootList {
    pub fn new(mut roots: Vec<Vec<BigInt>>, complete: bool, bound: Option<u64>) -> Self {
        roots.sort();
        roots.dedup();
        RootList {
            roots,
            complete,
            bound,
        }
    }

    pub fn roots(&self) -> &[Vec<BigInt>] {
        &self.roots
    }

    pub fn into_roots(self) -> Vec<Vec<BigInt>> {
        self.roots
    }

    pub fn complete(&self) -> bool {
        self.complete
    }

    pub fn bound(&self) -> Option<u64> {
        self.bound
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.roots.binary_search_by(|r| r.as_slice().cmp(v)).is_ok()
    }
}

/// Clears denominators of a rational vector.
fn primitive_integer_row(v: &[Rational]) -> Vec<BigInt> {
    let lcm = v
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    v.iter()
        .map(|x| (x * Rational::from_integer(lcm.clone())).to_integer())
        .collect()
}

/// The saturated sublattice `{x ∈ ℤⁿ | ⟨x, c⟩ = 0 for every constraint c}`.
pub fn orthogonal_complement_lattice(
    lattice: &IntegralLattice,
    constraints: &[Vec<Rational>],
) -> Result<Sublattice> {
    let n = lattice.rank();
    let gram = lattice.space().gram();
    let mut rows = Vec::with_capacity(constraints.len());
    for c in constraints {
        if c.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: c.len(),
            });
        }
        rows.push(primitive_integer_row(&gram.mul_vec(c)?));
    }
    let a = if rows.is_empty() {
        Matrix::zeros(0, n)
    } else {
        Matrix::from_rows(rows)?
    };
    let basis = integer_kernel(&a);
    debug_assert!(crate::hnf::is_saturated(&basis));
    let restricted_gram = basis
        .matmul(lattice.gram())?
        .matmul(&basis.transpose())?;
    Ok(Sublattice {
        ambient: lattice.clone(),
        basis,
        restricted_gram,
    })
}

/// Decomposition `Q(x) = Σᵢ dᵢ (xᵢ + Σ_{j>i} μᵢⱼ xⱼ)²` of a positive
/// definite form, rescaled to integers: with `μᵢⱼ = num[i][j] / den[i]` and
/// `aᵢ = Σ_{j>i} num[i][j]·xⱼ`, the `i`-th term is `wᵢ (den[i]·xᵢ + aᵢ)² / scale`.
struct Ldl {
    num: Vec<Vec<BigInt>>,
    den: Vec<BigInt>,
    weight: Vec<BigInt>,
    scale: BigInt,
}

impl Ldl {
    fn new(g: &Matrix<Rational>) -> Self {
        Self::partial(g, g.nrows()).0
    }

    /// Eliminates the first `h` coordinates only. Returns the decomposition
    /// of those `h` terms together with the Schur complement on the rest,
    /// whose upper triangle holds the remaining form.
    fn partial(g: &Matrix<Rational>, h: usize) -> (Self, Matrix<Rational>) {
        let n = g.nrows();
        let mut q = g.clone();
        for i in 0..h {
            for j in i + 1..n {
                q[(j, i)] = q[(i, j)].clone();
                q[(i, j)] = &q[(i, j)] / &q[(i, i)];
            }
            for k in i + 1..n {
                for l in k..n {
                    let v = &q[(k, i)] * &q[(i, l)];
                    q[(k, l)] -= v;
                }
            }
        }
        let mut num = Vec::with_capacity(h);
        let mut den = Vec::with_capacity(h);
        for i in 0..h {
            let d = (i + 1..n).fold(BigInt::one(), |acc, j| acc.lcm(q[(i, j)].denom()));
            num.push(
                (0..n)
                    .map(|j| {
                        if j > i {
                            (&q[(i, j)] * Rational::from_integer(d.clone())).to_integer()
                        } else {
                            BigInt::zero()
                        }
                    })
                    .collect(),
            );
            den.push(d);
        }
        let w: Vec<Rational> = (0..h)
            .map(|i| &q[(i, i)] / Rational::from_integer(&den[i] * &den[i]))
            .collect();
        let scale = w.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let weight = w
            .iter()
            .map(|x| (x * Rational::from_integer(scale.clone())).to_integer())
            .collect();
        let m = n - h;
        let schur = Matrix::from_fn(m, m, |a, b| {
            let (k, l) = if a <= b { (a + h, b + h) } else { (b + h, a + h) };
            q[(k, l)].clone()
        });
        (Ldl { num, den, weight, scale }, schur)
    }

    /// `budget · scale` when that is an integer; otherwise the form can only
    /// reach values below `budget`, so the floor serves for `AtMost` searches
    /// and no vector attains it exactly.
    fn scaled_budget(&self, budget: &Rational) -> (BigInt, bool) {
        let b = budget * Rational::from_integer(self.scale.clone());
        (b.floor().to_integer(), b.is_integer())
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    Exact,
    AtMost,
}

struct Enumerator<'a> {
    ldl: &'a Ldl,
    mode: Mode,
    box_bound: Option<BigInt>,
    x: Vec<BigInt>,
    out: Vec<Vec<BigInt>>,
}

impl Enumerator<'_> {
    fn offset(&self, i: usize) -> BigInt {
        let row = &self.ldl.num[i];
        let mut acc = BigInt::zero();
        for j in i + 1..self.x.len() {
            if !self.x[j].is_zero() && !row[j].is_zero() {
                acc += &row[j] * &self.x[j];
            }
        }
        acc
    }

    fn in_box(&self, v: &BigInt) -> bool {
        self.box_bound.as_ref().is_none_or(|b| v.abs() <= *b)
    }

    fn search(&mut self, i: usize, budget: BigInt) {
        let a = self.offset(i);
        let ldl = self.ldl;
        let (m, w) = (&ldl.den[i], &ldl.weight[i]);
        if i == 0 && self.mode == Mode::Exact {
            // the last coordinate must use up the budget exactly
            let (sq, rem) = budget.div_rem(w);
            if !rem.is_zero() {
                return;
            }
            let root = sq.sqrt();
            if &root * &root != sq {
                return;
            }
            let mut targets = vec![-&root];
            if !root.is_zero() {
                targets.push(root);
            }
            for t in targets {
                let (v, r) = (t - &a).div_rem(m);
                if r.is_zero() && self.in_box(&v) {
                    self.x[0] = v;
                    self.out.push(self.x.clone());
                }
            }
            self.x[0] = BigInt::zero();
            return;
        }
        let start = (-&a).div_floor(m);
        let cost = |v: &BigInt| {
            let t = m * v + &a;
            w * &t * &t
        };
        let box_bound = self.box_bound.clone();
        // false once the scan has left the ellipsoid or the box
        let visit = |this: &mut Self, v: BigInt, upward: bool| -> bool {
            if let Some(b) = &box_bound {
                if (upward && &v > b) || (!upward && v < -b) {
                    return false;
                }
            }
            let k = cost(&v);
            if k > budget {
                return false;
            }
            if this.in_box(&v) {
                this.x[i] = v;
                if i == 0 {
                    this.out.push(this.x.clone());
                } else {
                    this.search(i - 1, &budget - &k);
                }
            }
            true
        };
        let mut v = start.clone();
        while visit(self, v.clone(), false) {
            v -= 1;
        }
        let mut v: BigInt = start + 1;
        while visit(self, v.clone(), true) {
            v += 1;
        }
        self.x[i] = BigInt::zero();
    }
}

fn check_positive_definite(g: &Matrix<Rational>) -> Result<()> {
    let n = g.nrows();
    if signature(g)? != Inertia::new(n, 0, 0) {
        return Err(Error::NotPositiveDefinite);
    }
    Ok(())
}

fn run_enumeration(
    g: &Matrix<Rational>,
    budget: &Rational,
    mode: Mode,
    box_bound: Option<BigInt>,
) -> Vec<Vec<BigInt>> {
    let n = g.nrows();
    if n == 0 {
        return if mode == Mode::AtMost || budget.is_zero() {
            vec![vec![]]
        } else {
            vec![]
        };
    }
    let ldl = Ldl::new(g);
    let (scaled, exact) = ldl.scaled_budget(budget);
    if mode == Mode::Exact && !exact {
        return vec![];
    }
    let mut e = Enumerator {
        ldl: &ldl,
        mode,
        box_bound,
        x: vec![BigInt::zero(); n],
        out: Vec::new(),
    };
    e.search(n - 1, scaled);
    let mut out = e.out;
    out.sort();
    out
}

/// All integer vectors `x` with `xᵀ g x = target`, sorted lexicographically.
/// Both `x` and `−x` are listed.
pub fn enumerate_norm_vectors(g: &Matrix<Rational>, target: &Rational) -> Result<Vec<Vec<BigInt>>> {
    check_positive_definite(g)?;
    if !target.is_positive() {
        return Err(Error::OutOfRange("target norm must be positive".into()));
    }
    let out = run_enumeration(g, target, Mode::Exact, None);
    debug_assert!(out.iter().all(|x| &quad_form(g, x) == target));
    Ok(out)
}

/// All integer vectors `x` with `xᵀ g x ≤ bound`, optionally restricted to the
/// coordinate box `|xᵢ| ≤ box_bound`. Includes the zero vector.
pub fn enumerate_short_vectors(
    g: &Matrix<Rational>,
    bound: &Rational,
    box_bound: Option<u64>,
) -> Result<Vec<Vec<BigInt>>> {
    check_positive_definite(g)?;
    if bound.is_negative() {
        return Ok(vec![]);
    }
    Ok(run_enumeration(g, bound, Mode::AtMost, box_bound.map(BigInt::from)))
}

pub(crate) fn quad_form(g: &Matrix<Rational>, x: &[BigInt]) -> Rational {
    let xr = int_to_rational_vec(x);
    crate::matrix::dot(&xr, &g.mul_vec(&xr).expect("dimension"))
}

/// `xᵀ g x` over the integers, skipping zero coordinates.
fn integer_quad_form(g: &Matrix<BigInt>, x: &[BigInt]) -> BigInt {
    let support: Vec<usize> = (0..x.len()).filter(|&i| !x[i].is_zero()).collect();
    let mut acc = BigInt::zero();
    for &i in &support {
        let mut row = BigInt::zero();
        for &j in &support {
            if !g[(i, j)].is_zero() {
                row += &g[(i, j)] * &x[j];
            }
        }
        acc += row * &x[i];
    }
    acc
}

fn minus_two() -> BigInt {
    BigInt::from(-2)
}

/// The complete list of roots of `lattice` orthogonal to a positive
/// three-space.
///
/// The constraints are the real and imaginary parts of the basis of `v`.
/// Their complement is negative definite because `v` is positive, so the
/// negated form is searched for vectors of norm 2.
pub fn roots_orthogonal_to_threespace(lattice: &IntegralLattice, v: &ThreeSpace) -> Result<RootList> {
    if !v.ambient().same_form(lattice.space()) {
        return Err(Error::AmbientMismatch);
    }
    let sig = v.hermitian_signature();
    if sig != Inertia::new(3, 0, 0) {
        return Err(Error::NotPositive(sig.as_tuple()));
    }
    let complement = orthogonal_complement_lattice(lattice, &v.real_constraints())?;
    let neg = complement.restricted_gram().map(|x| Rational::from_integer(-x));
    let coords = if complement.rank() == 0 {
        vec![]
    } else {
        enumerate_norm_vectors(&neg, &Rational::from_integer(BigInt::from(2)))?
    };
    let roots: Vec<Vec<BigInt>> = coords.iter().map(|y| complement.embed(y)).collect();
    for r in &roots {
        assert_eq!(lattice.norm(r)?, minus_two(), "enumerated vector is a root");
        debug_assert!(v.is_orthogonal_to(&int_to_rational_vec(r)));
    }
    Ok(RootList::new(roots, true, None))
}

/// Greedy ordering of coordinates: a maximal set on which `g` is positive
/// definite comes first, the rest after it.
fn definite_head_order(g: &Matrix<Rational>) -> Result<(Vec<usize>, usize)> {
    let n = g.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| g[(b, b)].cmp(&g[(a, a)]));
    let mut head = Vec::new();
    let mut tail = Vec::new();
    for k in order {
        if !g[(k, k)].is_positive() {
            tail.push(k);
            continue;
        }
        head.push(k);
        let sub = Matrix::from_fn(head.len(), head.len(), |i, j| g[(head[i], head[j])].clone());
        if signature(&sub)? != Inertia::new(head.len(), 0, 0) {
            head.pop();
            tail.push(k);
        }
    }
    let h = head.len();
    head.extend(tail);
    Ok((head, h))
}

/// Roots of `lattice` orthogonal to every constraint whose coordinates in
/// the complement sublattice's basis all lie in `[−coord_bound, coord_bound]`.
///
/// The complement may be indefinite. Its coordinates are reordered so that
/// the negated form is positive definite on a leading block; every box value
/// of the remaining coordinates fixes the rest of the form, and the leading
/// block is then an exact norm enumeration with shifted center.
pub fn bounded_root_search(
    lattice: &IntegralLattice,
    constraints: &[Vec<Rational>],
    coord_bound: u64,
) -> Result<RootList> {
    let complement = orthogonal_complement_lattice(lattice, constraints)?;
    let r = complement.rank();
    if r == 0 || coord_bound == 0 {
        return Ok(RootList::new(vec![], false, Some(coord_bound)));
    }
    let neg = complement.restricted_gram().map(|x| Rational::from_integer(-x));
    let (perm, h) = definite_head_order(&neg)?;
    let g = Matrix::from_fn(r, r, |i, j| neg[(perm[i], perm[j])].clone());
    let (ldl, schur) = Ldl::partial(&g, h);
    let two = Rational::from_integer(BigInt::from(2));
    let b = BigInt::from(coord_bound);
    let mut tail = vec![-&b; r - h];
    let mut found: Vec<Vec<BigInt>> = Vec::new();
    loop {
        let t = int_to_rational_vec(&tail);
        let rest = crate::matrix::dot(&t, &schur.mul_vec(&t).expect("dimension"));
        let budget = &two - rest;
        let (scaled, exact) = ldl.scaled_budget(&budget);
        if exact && !budget.is_negative() {
            let mut x = vec![BigInt::zero(); r];
            x[h..].clone_from_slice(&tail);
            if h == 0 {
                if budget.is_zero() {
                    found.push(x);
                }
            } else {
                let mut e = Enumerator {
                    ldl: &ldl,
                    mode: Mode::Exact,
                    box_bound: Some(b.clone()),
                    x,
                    out: Vec::new(),
                };
                e.search(h - 1, scaled);
                found.extend(e.out);
            }
        }
        // odometer over the tail box
        let mut k = 0;
        while k < tail.len() && tail[k] == b {
            tail[k] = -&b;
            k += 1;
        }
        if k == tail.len() {
            break;
        }
        tail[k] += 1;
    }
    let hi = complement.restricted_gram();
    let mut roots = Vec::with_capacity(found.len());
    for x in found {
        let mut y = vec![BigInt::zero(); r];
        for (i, v) in x.into_iter().enumerate() {
            y[perm[i]] = v;
        }
        assert_eq!(integer_quad_form(hi, &y), minus_two(), "enumerated vector is a root");
        roots.push(complement.embed(&y));
    }
    for root in &roots {
        assert_eq!(lattice.norm(root)?, minus_two());
    }
    Ok(RootList::new(roots, false, Some(coord_bound)))
}
