//! Points on the conic `ℙ(V) ∩ Q`: deterministic sampling and intersection
//! with hyperplanes `ℙ(δ⊥)`.

use num::integer::Integer;
use num::{BigInt, One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{gauss, is_real, norm_sqr, sqrt_gauss, GaussRational, Rational};
use crate::cycle::ThreeSpace;
use crate::error::{Error, Result};
use crate::matrix::{to_gauss_vec, Matrix};
use crate::quadspace::{bilinear, diagonalize_symmetric, QuadraticSpace};

pub const DEFAULT_PRECISION: u32 = 128;
pub const DEFAULT_SAMPLES: usize = 1000;
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct SampleOptions {
    pub samples: usize,
    /// Binary digits kept by approximate square roots.
    pub precision: u32,
    pub tolerance: f64,
}

impl Default for SampleOptions {
    fn default() -> Self {
        SampleOptions {
            samples: DEFAULT_SAMPLES,
            precision: DEFAULT_PRECISION,
            tolerance: DEFAULT_TOLERANCE,
        }
    }
}

/// A point of the conic in ambient coordinates, either exact or rounded to
/// `precision` bits.
#[derive(Clone, Debug, PartialEq)]
pub struct SamplePoint {
    pub coords: Vec<GaussRational>,
    pub exact: bool,
    pub precision: u32,
    /// `⟨v, v̄⟩`.
    pub hermitian_value: Rational,
    /// `⟨v, v̄⟩ / Σ|vᵢ|²`.
    pub normalized_hermitian: Rational,
    /// `|⟨v, v⟩| / Σ|vᵢ|²`, zero for exact points.
    pub quadric_residual: Rational,
}

impl SamplePoint {
    pub fn new(space: &QuadraticSpace, coords: Vec<GaussRational>, exact: bool, precision: u32) -> Self {
        let (h, q, size) = integral_pairings(space, &coords);
        let (normalized_hermitian, quadric_residual) = if size.is_zero() {
            (Rational::zero(), Rational::zero())
        } else {
            (&h / &size, crate::arith::sqrt_rational_approx(&norm_sqr(&q), precision.max(64)) / &size)
        };
        SamplePoint {
            coords,
            exact,
            precision,
            hermitian_value: h,
            normalized_hermitian,
            quadric_residual,
        }
    }
}

/// `(⟨x, x̄⟩, ⟨x, x⟩, Σ|xᵢ|²)` computed over the integers after clearing the
/// denominators of `x` and of the Gram entries on its support.
fn integral_pairings(space: &QuadraticSpace, x: &[GaussRational]) -> (Rational, GaussRational, Rational) {
    let scale = x
        .iter()
        .fold(BigInt::one(), |acc, z| acc.lcm(z.re.denom()).lcm(z.im.denom()));
    let support: Vec<usize> = (0..x.len()).filter(|&i| !x[i].is_zero()).collect();
    let a: Vec<BigInt> = x.iter().map(|z| (&z.re * &scale).to_integer()).collect();
    let b: Vec<BigInt> = x.iter().map(|z| (&z.im * &scale).to_integer()).collect();
    let gram = space.gram();
    let mut den = BigInt::one();
    for &i in &support {
        for &j in &support {
            den = den.lcm(gram[(i, j)].denom());
        }
    }
    let (mut h, mut q_re, mut q_im) = (BigInt::zero(), BigInt::zero(), BigInt::zero());
    for &i in &support {
        for &j in &support {
            let g = &gram[(i, j)];
            if g.is_zero() {
                continue;
            }
            let g = (g * &den).to_integer();
            let aa = &a[i] * &a[j];
            let bb = &b[i] * &b[j];
            h += &g * (&aa + &bb);
            q_re += &g * (aa - bb);
            q_im += &g * (&a[i] * &b[j] + &b[i] * &a[j]);
        }
    }
    let size = support.iter().fold(BigInt::zero(), |acc, &i| acc + &a[i] * &a[i] + &b[i] * &b[i]);
    let pair_den = &den * &scale * &scale;
    let r = |n: BigInt| Rational::new(n, pair_den.clone());
    (
        r(h),
        gauss(r(q_re), r(q_im)),
        Rational::new(size, &scale * &scale),
    )
}

/// Parameter for sample `index`: real for even indices, complex for odd ones,
/// on a 2⁻³⁰ grid.
fn sample_parameter(index: usize) -> GaussRational {
    let mut rng = ChaCha8Rng::seed_from_u64(index as u64);
    let mut draw = || {
        let x: f64 = rng.gen_range(-4.0..4.0);
        Rational::new(BigInt::from((x * (1u64 << 30) as f64).round() as i64), BigInt::one() << 30)
    };
    let re = draw();
    let im = if index % 2 == 1 { draw() } else { Rational::zero() };
    gauss(re, im)
}

/// Indices `(j, k)` of nonzero diagonal entries, preferring a real pair of
/// opposite signs so that a real three-space yields a real point.
fn choose_pair(c: &[GaussRational]) -> Option<(usize, usize)> {
    let nz: Vec<usize> = (0..c.len()).filter(|&i| !c[i].is_zero()).collect();
    for &j in &nz {
        for &k in &nz {
            if j != k && is_real(&c[j]) && is_real(&c[k]) && c[j].re.is_positive() && c[k].re.is_negative() {
                return Some((j, k));
            }
        }
    }
    match nz.as_slice() {
        [j, k, ..] => Some((*j, *k)),
        _ => None,
    }
}

/// Parametrization of the conic of a fixed three-space. The diagonalization
/// of the symmetric Gram matrix and the square root it needs are computed
/// once.
pub struct ConicSampler<'a> {
    v: &'a ThreeSpace,
    precision: u32,
    t: Matrix<GaussRational>,
    c: Vec<GaussRational>,
    zeros: Vec<usize>,
    /// `(j, k, l, s, exact)` with `c_j s² + c_k = 0`.
    pair: Option<(usize, usize, usize, GaussRational, bool)>,
}

impl<'a> ConicSampler<'a> {
    pub fn new(v: &'a ThreeSpace, precision: u32) -> Self {
        let (t, c) = diagonalize_symmetric(&v.symmetric_gram());
        let zeros: Vec<usize> = (0..3).filter(|&i| c[i].is_zero()).collect();
        let pair = if zeros.len() <= 1 {
            let (j, k) = choose_pair(&c).expect("two nonzero entries");
            let (s, exact) = sqrt_gauss(&(-(c[k].clone() / c[j].clone())), precision);
            Some((j, k, 3 - j - k, s, exact))
        } else {
            None
        };
        ConicSampler {
            v,
            precision,
            t,
            c,
            zeros,
            pair,
        }
    }

    /// The `index`-th sample. Sample 0 is a distinguished point, exact
    /// whenever the needed square root lies in ℚ(i).
    pub fn sample(&self, index: usize) -> SamplePoint {
        let one = GaussRational::one;
        let c = &self.c;
        let mut y = vec![GaussRational::zero(); 3];
        let mut exact = true;
        let tau = sample_parameter(index);
        match (&self.pair, self.zeros.as_slice()) {
            (Some((j, k, l, s, s_exact)), []) => {
                let (j, k, l) = (*j, *k, *l);
                exact = *s_exact;
                if index == 0 {
                    y[j] = s.clone();
                    y[k] = one();
                } else {
                    let ct2 = c[j].clone() * tau.clone() * tau.clone();
                    y[j] = s.clone() * (ct2.clone() - c[l].clone());
                    y[k] = -(c[l].clone() + ct2);
                    y[l] = GaussRational::from(Rational::from_integer(2.into())) * c[j].clone() * s.clone() * tau;
                }
            }
            (Some((j, k, l, s, s_exact)), _) => {
                // two lines through the vertex e_l
                let (j, k, l) = (*j, *k, *l);
                if index == 0 {
                    y[l] = one();
                } else {
                    exact = *s_exact;
                    y[j] = if index % 4 < 2 { s.clone() } else { -s.clone() };
                    y[k] = one();
                    y[l] = tau;
                }
            }
            (None, [k, l]) => {
                y[*k] = one();
                if index > 0 {
                    y[*l] = tau;
                }
            }
            (None, _) => {
                y[0] = one();
                if index > 0 {
                    y[1] = tau;
                    y[2] = sample_parameter(index + 1_000_003);
                }
            }
        }
        let alpha = self.t.mul_vec(&y).expect("3x3");
        // projective point: clear denominators before expanding in the basis
        let scale = Rational::from_integer(
            alpha
                .iter()
                .fold(BigInt::one(), |acc, z| acc.lcm(z.re.denom()).lcm(z.im.denom())),
        );
        let alpha: Vec<GaussRational> = alpha.iter().map(|z| gauss(&z.re * &scale, &z.im * &scale)).collect();
        let coords = self.v.combine(&alpha);
        SamplePoint::new(self.v.ambient(), coords, exact, self.precision)
    }
}

/// The `index`-th sample of the conic of `v`; see [`ConicSampler::sample`].
pub fn sample_conic(v: &ThreeSpace, index: usize, options: &SampleOptions) -> SamplePoint {
    ConicSampler::new(v, options.precision).sample(index)
}

#[derive(Clone, Debug, PartialEq)]
pub enum IntersectionKind {
    Containment,
    TwoPoints,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HyperplaneIntersection {
    pub kind: IntersectionKind,
    pub line_basis: Option<Matrix<GaussRational>>,
    /// `(a, b, c)` with `q(s·w₁ + t·w₂) = a s² + 2b st + c t²`.
    pub quad_coeffs: Option<(GaussRational, GaussRational, GaussRational)>,
    pub discriminant: Option<GaussRational>,
    /// Both points, normalized so the first coordinate of largest modulus is 1.
    pub points: Option<[SamplePoint; 2]>,
}

/// `ℙ(V) ∩ Q ∩ ℙ(δ⊥)`: either the whole conic or two points (counted with
/// multiplicity).
pub fn intersect_hyperplane(v: &ThreeSpace, delta: &[Rational], precision: u32) -> Result<HyperplaneIntersection> {
    let space = v.ambient();
    if delta.len() != space.rank() {
        return Err(Error::DimensionMismatch {
            expected: space.rank(),
            found: delta.len(),
        });
    }
    if delta.iter().all(Zero::is_zero) {
        return Err(Error::ZeroDelta);
    }
    let d = to_gauss_vec(delta);
    let cs: Vec<GaussRational> = (0..3)
        .map(|i| bilinear(space, v.vector(i), &d))
        .collect::<Result<_>>()?;
    let Some(k) = cs.iter().position(|x| !x.is_zero()) else {
        return Ok(HyperplaneIntersection {
            kind: IntersectionKind::Containment,
            line_basis: None,
            quad_coeffs: None,
            discriminant: None,
            points: None,
        });
    };
    let w: Vec<Vec<GaussRational>> = (0..3)
        .filter(|&j| j != k)
        .map(|j| {
            let f = cs[j].clone() / cs[k].clone();
            v.vector(j)
                .iter()
                .zip(v.vector(k))
                .map(|(a, b)| a - &f * b)
                .collect()
        })
        .collect();
    let line_basis = Matrix::from_rows(w)?;
    assert_eq!(line_basis.rank(), 2, "V ∩ δ⊥ has dimension 2");
    let (w1, w2) = (line_basis.row(0), line_basis.row(1));
    let a = bilinear(space, w1, w1)?;
    let b = bilinear(space, w1, w2)?;
    let c = bilinear(space, w2, w2)?;
    let disc = &b * &b - &a * &c;
    let combo = |s: &GaussRational, t: &GaussRational| -> Vec<GaussRational> {
        w1.iter().zip(w2).map(|(x, y)| s * x + t * y).collect()
    };
    let (p1, p2, exact) = if !a.is_zero() {
        let (root, exact) = sqrt_gauss(&disc, precision);
        (combo(&(-&b + &root), &a), combo(&(-&b - &root), &a), exact)
    } else if !b.is_zero() || !c.is_zero() {
        let two = GaussRational::from(Rational::from_integer(2.into()));
        (
            combo(&GaussRational::one(), &GaussRational::zero()),
            combo(&(-c.clone()), &(two * &b)),
            true,
        )
    } else {
        return Err(Error::LineOnQuadric);
    };
    let points = [
        SamplePoint::new(space, normalize(p1), exact, precision),
        SamplePoint::new(space, normalize(p2), exact, precision),
    ];
    Ok(HyperplaneIntersection {
        kind: IntersectionKind::TwoPoints,
        line_basis: Some(line_basis),
        quad_coeffs: Some((a, b, c)),
        discriminant: Some(disc),
        points: Some(points),
    })
}

/// Projective representative whose first coordinate of maximal modulus is 1.
fn normalize(p: Vec<GaussRational>) -> Vec<GaussRational> {
    let mut best: Option<(usize, Rational)> = None;
    for (i, z) in p.iter().enumerate() {
        let m = norm_sqr(z);
        if best.as_ref().map_or(!m.is_zero(), |(_, b)| &m > b) {
            best = Some((i, m));
        }
    }
    match best {
        Some((i, _)) => {
            let pivot = p[i].clone();
            p.into_iter().map(|z| z / pivot.clone()).collect()
        }
        None => p,
    }
}

pub fn point_to_f64(p: &[GaussRational]) -> Vec<(f64, f64)> {
    p.iter()
        .map(|z| (z.re.to_f64().unwrap_or(f64::NAN), z.im.to_f64().unwrap_or(f64::NAN)))
        .collect()
}
