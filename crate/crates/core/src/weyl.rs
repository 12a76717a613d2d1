//! Reflections in roots, orientation of the positive directions, and sign
//! partitions of root sets by a chamber vector.

use num::{BigInt, One, Signed, Zero};

use crate::arith::{format_rational, GaussRational, Rational, Scalar};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::quadspace::{bilinear, hermitian_pair, IntegralLattice, Isometry};
use crate::roots::{bounded_root_search, RootList};

/// A vector of norm −2.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Root {
    vec: Vec<BigInt>,
}

impl Root {
    pub fn new(lattice: &IntegralLattice, vec: Vec<BigInt>) -> Result<Self> {
        let norm = lattice.norm(&vec)?;
        if norm != BigInt::from(-2) {
            return Err(Error::NotARoot { norm: norm.to_string() });
        }
        Ok(Root { vec })
    }

    pub fn vec(&self) -> &[BigInt] {
        &self.vec
    }

    pub fn into_vec(self) -> Vec<BigInt> {
        self.vec
    }
}

/// `x + ⟨x, δ⟩ δ` for a rational or Gaussian-rational vector `x`.
pub fn reflect<T: Scalar>(lattice: &IntegralLattice, delta: &Root, x: &[T]) -> Result<Vec<T>> {
    if x.len() != lattice.rank() || delta.vec.len() != lattice.rank() {
        return Err(Error::DimensionMismatch {
            expected: lattice.rank(),
            found: x.len(),
        });
    }
    let g_delta = lattice.dual_row(&delta.vec)?;
    let lift = |v: &BigInt| T::from_rational(Rational::from_integer(v.clone()));
    let pairing = x
        .iter()
        .zip(&g_delta)
        .fold(T::zero(), |acc, (xi, gi)| acc + xi.clone() * lift(gi));
    Ok(x.iter()
        .zip(&delta.vec)
        .map(|(xi, di)| xi.clone() + pairing.clone() * lift(di))
        .collect())
}

/// Integer matrix of `reflect`: `s_δ = I + δ·(Gδ)ᵀ`.
pub fn reflection_matrix(lattice: &IntegralLattice, delta: &Root) -> Result<Isometry> {
    let n = lattice.rank();
    let g_delta = lattice.dual_row(&delta.vec)?;
    let m = Matrix::from_fn(n, n, |i, j| {
        let id = if i == j { BigInt::one() } else { BigInt::zero() };
        id + &delta.vec[i] * &g_delta[j]
    });
    Isometry::new(lattice, m)
}

/// Whether `g` preserves the orientation of the positive directions.
///
/// The frame `P₀` is mapped by `g` and projected back onto `span(P₀)`; the
/// sign of the projection's determinant equals the sign of
/// `det(⟨p_k, g·p_j⟩)` since the Gram matrix of `P₀` is positive definite.
pub fn is_in_o_plus(lattice: &IntegralLattice, g: &Isometry) -> Result<bool> {
    if !crate::quadspace::is_isometry(lattice, g.matrix())? {
        return Err(Error::NotAnIsometry);
    }
    let frame = lattice.space().positive_frame().ok_or(Error::NoPositiveFrame)?;
    let images: Vec<Vec<Rational>> = frame.rows().map(|p| g.apply_rational(p)).collect();
    let m = Matrix::from_fn(3, 3, |k, j| {
        lattice.space().pair(frame.row(k), &images[j]).expect("frame length")
    });
    Ok(m.determinant()?.is_positive())
}

/// Projective representative `x` of a point of the period domain:
/// `⟨x, x⟩ = 0` and `⟨x, x̄⟩ > 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodPoint {
    x: Vec<GaussRational>,
}

impl PeriodPoint {
    pub fn new(lattice: &IntegralLattice, x: Vec<GaussRational>) -> Result<Self> {
        let space = lattice.space();
        if x.iter().all(Zero::is_zero) {
            return Err(Error::InvalidPeriodPoint("zero vector".into()));
        }
        if !bilinear(space, &x, &x)?.is_zero() {
            return Err(Error::InvalidPeriodPoint("<x, x> is not zero".into()));
        }
        if !hermitian_pair(space, &x, &x)?.re.is_positive() {
            return Err(Error::InvalidPeriodPoint("<x, conj x> is not positive".into()));
        }
        Ok(PeriodPoint { x })
    }

    pub fn x(&self) -> &[GaussRational] {
        &self.x
    }

    /// Nonzero real and imaginary parts of `x`.
    pub fn real_constraints(&self) -> Vec<Vec<Rational>> {
        let re: Vec<Rational> = self.x.iter().map(|z| z.re.clone()).collect();
        let im: Vec<Rational> = self.x.iter().map(|z| z.im.clone()).collect();
        [re, im]
            .into_iter()
            .filter(|v| v.iter().any(|c| !c.is_zero()))
            .collect()
    }
}

/// Roots orthogonal to `p` with complement coordinates bounded by
/// `coord_bound`. Never complete.
pub fn delta_p_bounded(lattice: &IntegralLattice, p: &PeriodPoint, coord_bound: u64) -> Result<RootList> {
    bounded_root_search(lattice, &p.real_constraints(), coord_bound)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChamberPartition {
    pub kappa: Vec<Rational>,
    pub roots: RootList,
    pub plus: RootList,
    pub minus: RootList,
}

fn pair_with_rational(lattice: &IntegralLattice, kappa: &[Rational], root: &[BigInt]) -> Result<Rational> {
    let g_root = lattice.dual_row(root)?;
    Ok(kappa
        .iter()
        .zip(&g_root)
        .fold(Rational::zero(), |acc, (k, g)| acc + k * Rational::from_integer(g.clone())))
}

/// Splits `roots` by the sign of `⟨κ, δ⟩`.
pub fn partition_by_chamber(lattice: &IntegralLattice, roots: &RootList, kappa: &[Rational]) -> Result<ChamberPartition> {
    if kappa.len() != lattice.rank() {
        return Err(Error::DimensionMismatch {
            expected: lattice.rank(),
            found: kappa.len(),
        });
    }
    let norm = lattice.space().pair(kappa, kappa)?;
    if !norm.is_positive() {
        return Err(Error::NonPositiveKappa {
            norm: format_rational(&norm),
        });
    }
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    for r in roots.roots() {
        let s = pair_with_rational(lattice, kappa, r)?;
        if s.is_zero() {
            return Err(Error::WallError {
                root: r.iter().map(ToString::to_string).collect(),
            });
        }
        if s.is_positive() {
            plus.push(r.clone());
        } else {
            minus.push(r.clone());
        }
    }
    Ok(ChamberPartition {
        kappa: kappa.to_vec(),
        roots: roots.clone(),
        plus: RootList::new(plus, roots.complete(), roots.bound()),
        minus: RootList::new(minus, roots.complete(), roots.bound()),
    })
}

pub const DEFAULT_PARTITION_DEPTH: u32 = 4;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionCheck {
    pub ok: bool,
    /// Coefficients `nᵢ` (indexed like `plus`) and the root `Σ nᵢ δᵢ` missing from `plus`.
    pub violation: Option<(Vec<u32>, Vec<BigInt>)>,
}

/// Checks that every root of the form `Σ nᵢ δᵢ`, `δᵢ ∈ plus`, `nᵢ ≥ 0`,
/// `2 ≤ Σ nᵢ ≤ depth`, lies in `plus`. Combinations are visited by total
/// degree, then lexicographically; the first violation is reported.
pub fn check_partition_property(lattice: &IntegralLattice, plus: &RootList, depth: u32) -> Result<PartitionCheck> {
    let roots = plus.roots();
    let n = lattice.rank();
    for r in roots {
        if r.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: r.len(),
            });
        }
    }
    for total in 2..=depth {
        let mut coeffs = vec![0u32; roots.len()];
        let mut sum = vec![BigInt::zero(); n];
        if let Some(v) = combos(lattice, plus, 0, total, &mut coeffs, &mut sum)? {
            return Ok(PartitionCheck {
                ok: false,
                violation: Some(v),
            });
        }
    }
    Ok(PartitionCheck { ok: true, violation: None })
}

type Violation = (Vec<u32>, Vec<BigInt>);

fn combos(
    lattice: &IntegralLattice,
    plus: &RootList,
    start: usize,
    remaining: u32,
    coeffs: &mut Vec<u32>,
    sum: &mut Vec<BigInt>,
) -> Result<Option<Violation>> {
    if remaining == 0 {
        if lattice.norm(sum)? == BigInt::from(-2) && !plus.contains(sum) {
            return Ok(Some((coeffs.clone(), sum.clone())));
        }
        return Ok(None);
    }
    let roots = plus.roots();
    for i in start..roots.len() {
        coeffs[i] += 1;
        for (s, r) in sum.iter_mut().zip(&roots[i]) {
            *s += r;
        }
        let found = combos(lattice, plus, i, remaining - 1, coeffs, sum)?;
        coeffs[i] -= 1;
        for (s, r) in sum.iter_mut().zip(&roots[i]) {
            *s -= r;
        }
        if found.is_some() {
            return Ok(found);
        }
    }
    Ok(None)
}
