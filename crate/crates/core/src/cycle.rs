//! Complex three-spaces `V ⊂ Λ ⊗ ℚ(i)` and the cycles `ℙ(V) ∩ Q` they cut
//! out of the period quadric.

use num::{BigInt, One, Zero};

use crate::arith::{GaussRational, Rational};
use crate::conic::{ConicSampler, SampleOptions, SamplePoint};
use crate::error::{Error, Result};
use crate::matrix::{to_gauss_vec, Matrix};
use crate::quadspace::{bilinear, diag_space, hermitian_signature, Inertia, IntegralLattice, Isometry, QuadraticSpace};
use crate::roots::roots_orthogonal_to_threespace;

/// Rank-3 subspace of `ambient ⊗ ℚ(i)`, stored by a 3×n basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThreeSpace {
    ambient: QuadraticSpace,
    basis: Matrix<GaussRational>,
}

impl ThreeSpace {
    pub fn new(ambient: QuadraticSpace, basis: Matrix<GaussRational>) -> Result<Self> {
        let sig = ambient.signature();
        if sig.pos != 3 || sig.null != 0 {
            return Err(Error::AmbientSignature { found: sig.as_tuple() });
        }
        if basis.ncols() != ambient.rank() {
            return Err(Error::DimensionMismatch {
                expected: ambient.rank(),
                found: basis.ncols(),
            });
        }
        let rank = basis.rank();
        if basis.nrows() != 3 || rank != 3 {
            return Err(Error::RankDeficient(rank.min(basis.nrows())));
        }
        Ok(ThreeSpace { ambient, basis })
    }

    pub fn from_real(ambient: QuadraticSpace, basis: &Matrix<Rational>) -> Result<Self> {
        ThreeSpace::new(ambient, basis.to_gauss())
    }

    pub fn ambient(&self) -> &QuadraticSpace {
        &self.ambient
    }

    pub fn basis(&self) -> &Matrix<GaussRational> {
        &self.basis
    }

    pub fn vector(&self, i: usize) -> &[GaussRational] {
        self.basis.row(i)
    }

    /// `Σ αᵢ vᵢ` in ambient coordinates.
    pub fn combine(&self, coeffs: &[GaussRational]) -> Vec<GaussRational> {
        self.basis
            .transpose()
            .mul_vec(coeffs)
            .expect("three coefficients")
    }

    /// Symmetric Gram `⟨vᵢ, vⱼ⟩`.
    pub fn symmetric_gram(&self) -> Matrix<GaussRational> {
        Matrix::from_fn(3, 3, |i, j| {
            bilinear(&self.ambient, self.vector(i), self.vector(j)).expect("dimension checked")
        })
    }

    /// Hermitian Gram `⟨vᵢ, v̄ⱼ⟩`.
    pub fn hermitian_gram(&self) -> Matrix<GaussRational> {
        let conj = self.basis.conj();
        Matrix::from_fn(3, 3, |i, j| {
            bilinear(&self.ambient, self.vector(i), conj.row(j)).expect("dimension checked")
        })
    }

    pub fn hermitian_signature(&self) -> Inertia {
        hermitian_signature(&self.hermitian_gram()).expect("Hermitian by construction")
    }

    pub fn is_smooth(&self) -> bool {
        !self.symmetric_gram().determinant().expect("square").is_zero()
    }

    /// `V = V̄`, decided by the rank of the basis stacked with its conjugate.
    pub fn is_real(&self) -> bool {
        self.basis
            .vstack(&self.basis.conj())
            .expect("same width")
            .rank()
            == 3
    }

    pub fn is_positive(&self) -> bool {
        self.hermitian_signature() == Inertia::new(3, 0, 0)
    }

    /// Nonzero real and imaginary parts of the basis rows.
    pub fn real_constraints(&self) -> Vec<Vec<Rational>> {
        let re = self.basis.real_part();
        let im = self.basis.imag_part();
        re.rows()
            .chain(im.rows())
            .filter(|r| r.iter().any(|x| !x.is_zero()))
            .map(<[Rational]>::to_vec)
            .collect()
    }

    /// A rational basis of a real three-space.
    pub fn real_basis(&self) -> Option<Matrix<Rational>> {
        if !self.is_real() {
            return None;
        }
        let rows = self.real_constraints();
        let mut chosen: Vec<Vec<Rational>> = Vec::new();
        for r in rows {
            let mut trial = chosen.clone();
            trial.push(r);
            if Matrix::from_rows(trial.clone()).expect("equal lengths").rank() == trial.len() {
                chosen = trial;
            }
            if chosen.len() == 3 {
                break;
            }
        }
        Matrix::from_rows(chosen).ok()
    }

    /// `⟨δ, vᵢ⟩ = 0` for every basis vector.
    pub fn is_orthogonal_to(&self, delta: &[Rational]) -> bool {
        let d = to_gauss_vec(delta);
        (0..3).all(|i| {
            bilinear(&self.ambient, &d, self.vector(i))
                .map(|x| x.is_zero())
                .unwrap_or(false)
        })
    }

    pub fn same_span(&self, other: &ThreeSpace) -> bool {
        self.ambient.same_form(&other.ambient)
            && self.basis.vstack(&other.basis).map(|m| m.rank() == 3).unwrap_or(false)
    }

    /// Basis replaced by `m · basis` for an invertible 3×3 matrix `m`.
    pub fn change_basis(&self, m: &Matrix<GaussRational>) -> Result<ThreeSpace> {
        if m.nrows() != 3 || m.ncols() != 3 {
            return Err(Error::DimensionMismatch {
                expected: 3,
                found: m.nrows(),
            });
        }
        ThreeSpace::new(self.ambient.clone(), m.matmul(&self.basis)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TwistorStatus {
    True,
    /// A root orthogonal to `V`, lexicographically smallest.
    False { certificate: Vec<BigInt> },
    NotApplicable { reason: String },
}

#[derive(Clone, Debug, PartialEq)]
pub enum DomainStatus {
    /// `V` is positive, so the whole conic lies in the period domain.
    VerifiedPositive,
    /// All sampled conic points satisfy `⟨v, v̄⟩ > 0`.
    SampledOk { samples: usize },
    /// A conic point with `⟨v, v̄⟩ ≤ 0` (exactly when the point is exact,
    /// within tolerance otherwise).
    Counterexample { point: SamplePoint },
}

impl DomainStatus {
    pub fn kind(&self) -> &'static str {
        match self {
            DomainStatus::VerifiedPositive => "verified_positive",
            DomainStatus::SampledOk { .. } => "sampled_ok",
            DomainStatus::Counterexample { .. } => "counterexample",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CycleClassification {
    pub smooth: bool,
    pub hermitian_signature: Inertia,
    pub real: bool,
    pub positive: bool,
    pub twistor: TwistorStatus,
    pub domain_status: DomainStatus,
}

/// Classifies the cycle of `v`. Without an integral structure the twistor
/// predicate is not applicable.
pub fn classify_cycle(
    v: &ThreeSpace,
    lattice: Option<&IntegralLattice>,
    options: &SampleOptions,
) -> Result<CycleClassification> {
    let hermitian_signature = v.hermitian_signature();
    let positive = hermitian_signature == Inertia::new(3, 0, 0);
    let twistor = match lattice {
        Some(l) => is_twistor(l, v)?,
        None => TwistorStatus::NotApplicable {
            reason: "no integral structure".into(),
        },
    };
    let domain_status = if positive {
        DomainStatus::VerifiedPositive
    } else {
        domain_by_sampling(v, options)
    };
    Ok(CycleClassification {
        smooth: v.is_smooth(),
        hermitian_signature,
        real: v.is_real(),
        positive,
        twistor,
        domain_status,
    })
}

fn domain_by_sampling(v: &ThreeSpace, options: &SampleOptions) -> DomainStatus {
    let tol = Rational::from_float(options.tolerance).expect("finite tolerance");
    let sampler = ConicSampler::new(v, options.precision);
    for k in 0..options.samples {
        let point = sampler.sample(k);
        let outside = if point.exact {
            !point.hermitian_value.is_positive_rational()
        } else {
            point.normalized_hermitian <= tol
        };
        if outside {
            return DomainStatus::Counterexample { point };
        }
    }
    DomainStatus::SampledOk {
        samples: options.samples,
    }
}

trait PositiveRational {
    fn is_positive_rational(&self) -> bool;
}

impl PositiveRational for Rational {
    fn is_positive_rational(&self) -> bool {
        num::Signed::is_positive(self)
    }
}

/// Twistor predicate: a real positive `V` is a twistor cycle iff no root is
/// orthogonal to it.
pub fn is_twistor(lattice: &IntegralLattice, v: &ThreeSpace) -> Result<TwistorStatus> {
    if !v.ambient().same_form(lattice.space()) {
        return Err(Error::AmbientMismatch);
    }
    if !v.is_real() {
        return Ok(TwistorStatus::NotApplicable {
            reason: "three-space is not real".into(),
        });
    }
    if !v.is_positive() {
        return Ok(TwistorStatus::NotApplicable {
            reason: "three-space is not positive".into(),
        });
    }
    let roots = roots_orthogonal_to_threespace(lattice, v)?;
    Ok(match roots.into_roots().into_iter().next() {
        None => TwistorStatus::True,
        Some(certificate) => TwistorStatus::False { certificate },
    })
}

/// Image `g(V)`.
pub fn apply_isometry(lattice: &IntegralLattice, g: &Isometry, v: &ThreeSpace) -> Result<ThreeSpace> {
    if !v.ambient().same_form(lattice.space()) || g.matrix().nrows() != lattice.rank() {
        return Err(Error::AmbientMismatch);
    }
    let rows: Vec<Vec<GaussRational>> = (0..3).map(|i| g.apply_gauss(v.vector(i))).collect();
    ThreeSpace::new(v.ambient().clone(), Matrix::from_rows(rows)?)
}

pub const DEFAULT_FAMILY_RANK: usize = 22;

/// `V_t = ℂ(e₁ + i·t·e₄) ⊕ ℂe₂ ⊕ ℂe₃` in `diag(1, 1, 1, −1, …, −1)` of rank `n`.
pub fn example_family(t: &Rational, n: usize) -> Result<ThreeSpace> {
    if n <= 3 {
        return Err(Error::OutOfRange(format!("example family needs rank n > 3, got {n}")));
    }
    let ambient = diag_space(n)?;
    let mut basis = Matrix::<GaussRational>::zeros(3, n);
    basis[(0, 0)] = GaussRational::one();
    basis[(0, 3)] = GaussRational::new(Rational::zero(), t.clone());
    basis[(1, 1)] = GaussRational::one();
    basis[(2, 2)] = GaussRational::one();
    ThreeSpace::new(ambient, basis)
}

/// Dimension `(n − 2)(d + 1) − 3` of the space of degree-`d` rational curves
/// in a period domain of rank `n`; for `d = 2` this is `3(n − 3)`.
pub fn moduli_dimension(n: u64, d: u64) -> Result<i64> {
    if n < 3 || d < 1 {
        return Err(Error::OutOfRange(format!("need n >= 3 and d >= 1, got n={n}, d={d}")));
    }
    let value = (n as i128 - 2) * (d as i128 + 1) - 3;
    i64::try_from(value).map_err(|_| Error::OutOfRange("dimension overflows i64".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{gauss_int, int, rat};
    use crate::quadspace::{k3_e, k3_f, k3_lattice, make_standard_lattice, LatticeKind};

    fn opts() -> SampleOptions {
        SampleOptions::default()
    }

    #[test]
    fn family_signatures() {
        let cases = [
            (int(0), Inertia::new(3, 0, 0)),
            (rat(1, 2), Inertia::new(3, 0, 0)),
            (int(1), Inertia::new(2, 0, 1)),
            (rat(3, 2), Inertia::new(2, 1, 0)),
            (int(2), Inertia::new(2, 1, 0)),
        ];
        for (t, sig) in cases {
            let v = example_family(&t, 22).unwrap();
            assert_eq!(v.hermitian_signature(), sig, "t = {t}");
            assert!(v.is_smooth());
        }
        assert!(example_family(&int(0), 3).is_err());
        assert!(example_family(&int(0), 4).is_ok());
    }

    #[test]
    fn classify_examples() {
        let half = classify_cycle(&example_family(&rat(1, 2), 22).unwrap(), None, &opts()).unwrap();
        assert!(half.smooth && half.positive && !half.real);
        assert_eq!(half.domain_status, DomainStatus::VerifiedPositive);

        let base = classify_cycle(&example_family(&int(0), 22).unwrap(), None, &opts()).unwrap();
        assert!(base.smooth && base.positive && base.real);
        assert!(matches!(base.twistor, TwistorStatus::NotApplicable { .. }));

        let d = make_standard_lattice(&LatticeKind::Diag(vec![1, 1, 1, -1])).unwrap();
        let mut b = Matrix::<GaussRational>::zeros(3, 4);
        b[(0, 0)] = gauss_int(1, 0);
        b[(0, 1)] = gauss_int(0, 1);
        b[(1, 2)] = gauss_int(1, 0);
        b[(2, 3)] = gauss_int(1, 0);
        let v = ThreeSpace::new(d.space().clone(), b).unwrap();
        let c = classify_cycle(&v, None, &opts()).unwrap();
        assert!(!c.smooth);
    }

    #[test]
    fn rejects_bad_input() {
        let d = diag_space(5).unwrap();
        let degenerate = Matrix::<GaussRational>::zeros(3, 5);
        assert!(matches!(ThreeSpace::new(d.clone(), degenerate), Err(Error::RankDeficient(_))));
        let u = make_standard_lattice(&LatticeKind::U).unwrap();
        let b = Matrix::<GaussRational>::identity(2);
        assert!(matches!(
            ThreeSpace::new(u.space().clone(), b),
            Err(Error::AmbientSignature { .. })
        ));
    }

    #[test]
    fn twistor_of_u3_diagonal() {
        let l = k3_lattice();
        let v = ThreeSpace::from_real(l.space().clone(), l.space().positive_frame().unwrap()).unwrap();
        match is_twistor(&l, &v).unwrap() {
            TwistorStatus::False { certificate } => {
                let mut want = vec![BigInt::zero(); 22];
                want[k3_e(1)] = BigInt::from(-1);
                want[k3_f(1)] = BigInt::from(1);
                assert_eq!(certificate, want);
            }
            other => panic!("expected False, got {other:?}"),
        }
        let base = example_family(&int(0), 22).unwrap();
        assert_eq!(is_twistor(&l, &base), Err(Error::AmbientMismatch));
    }

    #[test]
    fn dimension_formula() {
        assert_eq!(moduli_dimension(22, 2).unwrap(), 57);
        assert_eq!(moduli_dimension(22, 4).unwrap(), 97);
        assert_eq!(moduli_dimension(3, 2).unwrap(), 0);
        assert!(moduli_dimension(2, 2).is_err());
        assert!(moduli_dimension(5, 0).is_err());
    }
}
