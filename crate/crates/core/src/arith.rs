//! Scalar fields used throughout the crate: the rationals and the Gaussian
//! rationals, plus exact and fixed-precision square roots.

use std::cmp::Ordering;
use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num::bigint::Sign;
use num::{BigInt, BigRational, Complex, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational number in lowest terms with positive denominator.
pub type Rational = BigRational;

/// Element of ℚ(i). Conjugation negates the imaginary part.
pub type GaussRational = Complex<Rational>;

/// Exact field scalar with an involution.
///
/// For [`Rational`] the involution is the identity, for [`GaussRational`] it is
/// complex conjugation. Congruence diagonalization of Hermitian forms is
/// written once against this trait.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn conj(&self) -> Self;

    /// Sign of the real part. Diagonal entries of a Hermitian form are real,
    /// so this is the sign of the form value there.
    fn real_sign(&self) -> Ordering;

    fn from_rational(r: Rational) -> Self;
}

impl Scalar for Rational {
    fn conj(&self) -> Self {
        self.clone()
    }

    fn real_sign(&self) -> Ordering {
        sign_of(self)
    }

    fn from_rational(r: Rational) -> Self {
        r
    }
}

impl Scalar for GaussRational {
    fn conj(&self) -> Self {
        Complex::conj(self)
    }

    fn real_sign(&self) -> Ordering {
        sign_of(&self.re)
    }

    fn from_rational(r: Rational) -> Self {
        Complex::new(r, Rational::zero())
    }
}

pub fn sign_of(r: &Rational) -> Ordering {
    match r.numer().sign() {
        Sign::Minus => Ordering::Less,
        Sign::NoSign => Ordering::Equal,
        Sign::Plus => Ordering::Greater,
    }
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn gauss(re: Rational, im: Rational) -> GaussRational {
    Complex::new(re, im)
}

pub fn gauss_int(re: i64, im: i64) -> GaussRational {
    Complex::new(int(re), int(im))
}

pub fn is_real(z: &GaussRational) -> bool {
    z.im.is_zero()
}

/// Squared modulus `|z|²` of a Gaussian rational.
pub fn norm_sqr(z: &GaussRational) -> Rational {
    &z.re * &z.re + &z.im * &z.im
}

/// Formats as `"p/q"`, omitting `/q` when `q = 1`.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Rational::new(p, q))
        }
        None => {
            let p: BigInt = s.parse().map_err(|_| bad())?;
            Ok(Rational::from_integer(p))
        }
    }
}

pub fn parse_rational_list(s: &str) -> Result<Vec<Rational>> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(parse_rational)
        .collect()
}

/// Exact square root of a non-negative rational, if it is a square.
pub fn sqrt_rational_exact(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

/// Exact square root in ℚ(i), if one exists. The root with non-negative real
/// part (and non-negative imaginary part when the real part vanishes) is
/// returned.
pub fn sqrt_gauss_exact(z: &GaussRational) -> Option<GaussRational> {
    if z.is_zero() {
        return Some(GaussRational::zero());
    }
    let modulus = sqrt_rational_exact(&norm_sqr(z))?;
    let two = int(2);
    let x = sqrt_rational_exact(&((&modulus + &z.re) / &two))?;
    let root = if x.is_zero() {
        // z is a negative real
        gauss(Rational::zero(), sqrt_rational_exact(&(-&z.re))?)
    } else {
        let y = &z.im / (&two * &x);
        gauss(x, y)
    };
    debug_assert_eq!(&(&root * &root), z);
    Some(root)
}

/// `floor(sqrt(r))` to `bits` binary digits after the point.
pub fn sqrt_rational_approx(r: &Rational, bits: u32) -> Rational {
    if !r.is_positive() {
        return Rational::zero();
    }
    let scale = BigInt::one() << (2 * bits as usize);
    let scaled = (r * Rational::from_integer(scale)).floor().to_integer();
    Rational::new(scaled.sqrt(), BigInt::one() << bits as usize)
}

/// Principal square root in ℂ, approximated by Gaussian rationals with
/// absolute error about `2^-bits` (for arguments of moderate size).
pub fn sqrt_gauss_approx(z: &GaussRational, bits: u32) -> GaussRational {
    let inner = bits + 16;
    let modulus = sqrt_rational_approx(&norm_sqr(z), inner);
    let two = int(2);
    let x = sqrt_rational_approx(&((&modulus + &z.re) / &two), bits);
    let mut y = sqrt_rational_approx(&((&modulus - &z.re) / &two), bits);
    if z.im.is_negative() {
        y = -y;
    }
    gauss(x, y)
}

/// Square root, exact when possible. The flag reports exactness.
pub fn sqrt_gauss(z: &GaussRational, bits: u32) -> (GaussRational, bool) {
    match sqrt_gauss_exact(z) {
        Some(r) => (r, true),
        None => (sqrt_gauss_approx(z, bits), false),
    }
}

/// Decimal rendering of a rational rounded to `digits` fractional digits.
pub fn to_decimal(r: &Rational, digits: usize) -> String {
    let scale = num::pow(BigInt::from(10), digits);
    let scaled = (r * Rational::from_integer(scale)).round().to_integer();
    let negative = scaled.is_negative();
    let mut s = scaled.abs().to_string();
    if digits > 0 {
        if s.len() <= digits {
            s = "0".repeat(digits + 1 - s.len()) + &s;
        }
        s.insert(s.len() - digits, '.');
    }
    if negative {
        s.insert(0, '-');
    }
    s
}

/// Number of decimal digits carried by `bits` binary digits.
pub fn decimal_digits(bits: u32) -> usize {
    ((bits as f64) * std::f64::consts::LOG10_2).floor() as usize
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}
