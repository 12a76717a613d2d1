//! JSON encodings shared by the library and the command-line tool.
//!
//! Rationals are strings `"p/q"` (`"p"` when `q = 1`), Gaussian rationals
//! are `{"re": .., "im": ..}`, integers are JSON numbers (strings when they
//! do not fit in 64 bits) and matrices are row-major arrays of arrays.

use num::{BigInt, ToPrimitive};
use serde_json::{json, Map, Value};

use crate::arith::{decimal_digits, format_rational, gauss, parse_rational, to_decimal, GaussRational, Rational};
use crate::conic::{HyperplaneIntersection, IntersectionKind, SamplePoint};
use crate::cycle::{CycleClassification, DomainStatus, ThreeSpace, TwistorStatus};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::quadspace::{Inertia, LatticeInvariants, QuadraticSpace};
use crate::roots::RootList;
use crate::weyl::{ChamberPartition, PartitionCheck};

pub trait ToJson {
    fn to_json(&self) -> Value;
}

pub trait FromJson: Sized {
    fn from_json(v: &Value) -> Result<Self>;
}

fn parse_err(what: &str) -> Error {
    Error::Parse(format!("expected {what}"))
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| Error::Parse(format!("missing key \"{key}\"")))
}

fn as_array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| parse_err(what))
}

fn as_bool(v: &Value, what: &str) -> Result<bool> {
    v.as_bool().ok_or_else(|| parse_err(what))
}

fn as_str<'a>(v: &'a Value, what: &str) -> Result<&'a str> {
    v.as_str().ok_or_else(|| parse_err(what))
}

fn as_usize(v: &Value, what: &str) -> Result<usize> {
    v.as_u64()
        .and_then(|x| usize::try_from(x).ok())
        .ok_or_else(|| parse_err(what))
}

impl ToJson for Rational {
    fn to_json(&self) -> Value {
        Value::String(format_rational(self))
    }
}

impl FromJson for Rational {
    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::String(s) => parse_rational(s),
            Value::Number(n) if n.is_i64() => Ok(Rational::from_integer(BigInt::from(n.as_i64().unwrap()))),
            _ => Err(parse_err("rational string \"p/q\"")),
        }
    }
}

impl ToJson for GaussRational {
    fn to_json(&self) -> Value {
        json!({"re": self.re.to_json(), "im": self.im.to_json()})
    }
}

impl FromJson for GaussRational {
    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::Object(_) => Ok(gauss(
                Rational::from_json(field(v, "re")?)?,
                Rational::from_json(field(v, "im")?)?,
            )),
            // a bare rational is read as a real number
            _ => Ok(gauss(Rational::from_json(v)?, Rational::from(BigInt::from(0)))),
        }
    }
}

impl ToJson for BigInt {
    fn to_json(&self) -> Value {
        match self.to_i64() {
            Some(x) => Value::from(x),
            None => Value::String(self.to_string()),
        }
    }
}

impl FromJson for BigInt {
    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::Number(n) => n.as_i64().map(BigInt::from).ok_or_else(|| parse_err("integer")),
            Value::String(s) => s.trim().parse().map_err(|_| parse_err("integer")),
            _ => Err(parse_err("integer")),
        }
    }
}

impl<T: ToJson> ToJson for Vec<T> {
    fn to_json(&self) -> Value {
        Value::Array(self.iter().map(ToJson::to_json).collect())
    }
}

impl<T: FromJson> FromJson for Vec<T> {
    fn from_json(v: &Value) -> Result<Self> {
        as_array(v, "array")?.iter().map(T::from_json).collect()
    }
}

impl<T: ToJson + Clone> ToJson for Matrix<T> {
    fn to_json(&self) -> Value {
        Value::Array(self.rows().map(|r| r.to_vec().to_json()).collect())
    }
}

impl<T: FromJson + Clone> FromJson for Matrix<T> {
    fn from_json(v: &Value) -> Result<Self> {
        let rows: Vec<Vec<T>> = FromJson::from_json(v)?;
        Matrix::from_rows(rows)
    }
}

impl ToJson for Inertia {
    fn to_json(&self) -> Value {
        json!([self.pos, self.neg, self.null])
    }
}

impl FromJson for Inertia {
    fn from_json(v: &Value) -> Result<Self> {
        let a = as_array(v, "[p, n, z]")?;
        if a.len() != 3 {
            return Err(parse_err("[p, n, z]"));
        }
        Ok(Inertia::new(
            as_usize(&a[0], "count")?,
            as_usize(&a[1], "count")?,
            as_usize(&a[2], "count")?,
        ))
    }
}

impl ToJson for QuadraticSpace {
    fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("gram".into(), self.gram().to_json());
        if let Some(f) = self.positive_frame() {
            m.insert("frame".into(), f.to_json());
        }
        Value::Object(m)
    }
}

impl FromJson for QuadraticSpace {
    /// Without an explicit `"frame"` the conventional frame is attached when
    /// the Gram matrix is recognised.
    fn from_json(v: &Value) -> Result<Self> {
        let space = QuadraticSpace::new(Matrix::from_json(field(v, "gram")?)?)?;
        match v.get("frame") {
            Some(f) => space.with_frame(Matrix::from_json(f)?),
            None => Ok(space.with_detected_frame()),
        }
    }
}

impl ToJson for ThreeSpace {
    fn to_json(&self) -> Value {
        json!({"ambient": self.ambient().to_json(), "basis": self.basis().to_json()})
    }
}

impl FromJson for ThreeSpace {
    fn from_json(v: &Value) -> Result<Self> {
        ThreeSpace::new(
            QuadraticSpace::from_json(field(v, "ambient")?)?,
            Matrix::from_json(field(v, "basis")?)?,
        )
    }
}

impl ToJson for RootList {
    fn to_json(&self) -> Value {
        json!({
            "complete": self.complete(),
            "bound": self.bound(),
            "count": self.len(),
            "roots": self.roots().to_vec().to_json(),
        })
    }
}

impl FromJson for RootList {
    /// `"count"` is informational and ignored.
    fn from_json(v: &Value) -> Result<Self> {
        let bound = match field(v, "bound")? {
            Value::Null => None,
            b => Some(b.as_u64().ok_or_else(|| parse_err("non-negative bound"))?),
        };
        Ok(RootList::new(
            FromJson::from_json(field(v, "roots")?)?,
            as_bool(field(v, "complete")?, "bool")?,
            bound,
        ))
    }
}

impl ToJson for ChamberPartition {
    fn to_json(&self) -> Value {
        json!({
            "kappa": self.kappa.to_json(),
            "plus": self.plus.roots().to_vec().to_json(),
            "minus": self.minus.roots().to_vec().to_json(),
            "complete": self.roots.complete(),
            "bound": self.roots.bound(),
        })
    }
}

impl FromJson for ChamberPartition {
    /// The root list is rebuilt as `plus ∪ minus`. Missing `"complete"`
    /// reads as `false`.
    fn from_json(v: &Value) -> Result<Self> {
        let plus: Vec<Vec<BigInt>> = FromJson::from_json(field(v, "plus")?)?;
        let minus: Vec<Vec<BigInt>> = FromJson::from_json(field(v, "minus")?)?;
        let all: Vec<Vec<BigInt>> = plus.iter().chain(&minus).cloned().collect();
        let complete = optional(v, "complete", |c| as_bool(c, "bool"))?.unwrap_or(false);
        let bound = optional(v, "bound", |b| b.as_u64().ok_or_else(|| parse_err("non-negative bound")))?;
        Ok(ChamberPartition {
            kappa: FromJson::from_json(field(v, "kappa")?)?,
            roots: RootList::new(all, complete, bound),
            plus: RootList::new(plus, complete, bound),
            minus: RootList::new(minus, complete, bound),
        })
    }
}

impl ToJson for PartitionCheck {
    fn to_json(&self) -> Value {
        let violation = match &self.violation {
            None => Value::Null,
            Some((coeffs, delta)) => json!({"coefficients": coeffs, "delta": delta.to_json()}),
        };
        json!({"ok": self.ok, "violation": violation})
    }
}

impl FromJson for PartitionCheck {
    fn from_json(v: &Value) -> Result<Self> {
        let violation = match field(v, "violation")? {
            Value::Null => None,
            x => {
                let coeffs = as_array(field(x, "coefficients")?, "coefficients")?
                    .iter()
                    .map(|c| {
                        c.as_u64()
                            .and_then(|c| u32::try_from(c).ok())
                            .ok_or_else(|| parse_err("coefficient"))
                    })
                    .collect::<Result<Vec<u32>>>()?;
                Some((coeffs, FromJson::from_json(field(x, "delta")?)?))
            }
        };
        Ok(PartitionCheck {
            ok: as_bool(field(v, "ok")?, "bool")?,
            violation,
        })
    }
}

impl ToJson for LatticeInvariants {
    fn to_json(&self) -> Value {
        json!({
            "even": self.even,
            "determinant": self.determinant.to_json(),
            "unimodular": self.unimodular,
        })
    }
}

impl FromJson for LatticeInvariants {
    fn from_json(v: &Value) -> Result<Self> {
        Ok(LatticeInvariants {
            even: as_bool(field(v, "even")?, "bool")?,
            determinant: BigInt::from_json(field(v, "determinant")?)?,
            unimodular: as_bool(field(v, "unimodular")?, "bool")?,
        })
    }
}

fn decimal_point(coords: &[GaussRational], digits: usize) -> Value {
    Value::Array(
        coords
            .iter()
            .map(|z| json!({"re": to_decimal(&z.re, digits), "im": to_decimal(&z.im, digits)}))
            .collect(),
    )
}

impl ToJson for SamplePoint {
    /// Exact fields as rationals, plus a decimal rendering tagged with the
    /// binary precision. The decimal fields are ignored when parsing.
    fn to_json(&self) -> Value {
        let digits = decimal_digits(self.precision);
        json!({
            "exact": self.exact,
            "precision": self.precision,
            "coords": self.coords.to_json(),
            "hermitian_value": self.hermitian_value.to_json(),
            "normalized_hermitian": self.normalized_hermitian.to_json(),
            "quadric_residual": self.quadric_residual.to_json(),
            "decimal": {
                "digits": digits,
                "coords": decimal_point(&self.coords, digits),
                "normalized_hermitian": to_decimal(&self.normalized_hermitian, digits),
                "quadric_residual": to_decimal(&self.quadric_residual, digits),
            },
        })
    }
}

impl FromJson for SamplePoint {
    fn from_json(v: &Value) -> Result<Self> {
        let precision = field(v, "precision")?
            .as_u64()
            .and_then(|p| u32::try_from(p).ok())
            .ok_or_else(|| parse_err("precision"))?;
        Ok(SamplePoint {
            coords: FromJson::from_json(field(v, "coords")?)?,
            exact: as_bool(field(v, "exact")?, "bool")?,
            precision,
            hermitian_value: FromJson::from_json(field(v, "hermitian_value")?)?,
            normalized_hermitian: FromJson::from_json(field(v, "normalized_hermitian")?)?,
            quadric_residual: FromJson::from_json(field(v, "quadric_residual")?)?,
        })
    }
}

impl ToJson for TwistorStatus {
    fn to_json(&self) -> Value {
        match self {
            TwistorStatus::True => json!({"status": "true"}),
            TwistorStatus::False { certificate } => {
                json!({"status": "false", "certificate": certificate.to_json()})
            }
            TwistorStatus::NotApplicable { reason } => {
                json!({"status": "not_applicable", "reason": reason})
            }
        }
    }
}

impl FromJson for TwistorStatus {
    fn from_json(v: &Value) -> Result<Self> {
        match as_str(field(v, "status")?, "twistor status")? {
            "true" => Ok(TwistorStatus::True),
            "false" => Ok(TwistorStatus::False {
                certificate: FromJson::from_json(field(v, "certificate")?)?,
            }),
            "not_applicable" => Ok(TwistorStatus::NotApplicable {
                reason: as_str(field(v, "reason")?, "reason")?.to_string(),
            }),
            other => Err(Error::Parse(format!("unknown twistor status \"{other}\""))),
        }
    }
}

impl ToJson for DomainStatus {
    fn to_json(&self) -> Value {
        match self {
            DomainStatus::VerifiedPositive => json!({"kind": self.kind()}),
            DomainStatus::SampledOk { samples } => json!({"kind": self.kind(), "samples": samples}),
            DomainStatus::Counterexample { point } => json!({"kind": self.kind(), "point": point.to_json()}),
        }
    }
}

impl FromJson for DomainStatus {
    fn from_json(v: &Value) -> Result<Self> {
        match as_str(field(v, "kind")?, "domain status")? {
            "verified_positive" => Ok(DomainStatus::VerifiedPositive),
            "sampled_ok" => Ok(DomainStatus::SampledOk {
                samples: as_usize(field(v, "samples")?, "samples")?,
            }),
            "counterexample" => Ok(DomainStatus::Counterexample {
                point: SamplePoint::from_json(field(v, "point")?)?,
            }),
            other => Err(Error::Parse(format!("unknown domain status \"{other}\""))),
        }
    }
}

impl ToJson for CycleClassification {
    fn to_json(&self) -> Value {
        json!({
            "smooth": self.smooth,
            "hermitian_signature": self.hermitian_signature.to_json(),
            "real": self.real,
            "positive": self.positive,
            "twistor": self.twistor.to_json(),
            "domain_status": self.domain_status.to_json(),
        })
    }
}

impl FromJson for CycleClassification {
    fn from_json(v: &Value) -> Result<Self> {
        Ok(CycleClassification {
            smooth: as_bool(field(v, "smooth")?, "bool")?,
            hermitian_signature: Inertia::from_json(field(v, "hermitian_signature")?)?,
            real: as_bool(field(v, "real")?, "bool")?,
            positive: as_bool(field(v, "positive")?, "bool")?,
            twistor: TwistorStatus::from_json(field(v, "twistor")?)?,
            domain_status: DomainStatus::from_json(field(v, "domain_status")?)?,
        })
    }
}

impl ToJson for HyperplaneIntersection {
    fn to_json(&self) -> Value {
        let kind = match self.kind {
            IntersectionKind::Containment => "containment",
            IntersectionKind::TwoPoints => "two_points",
        };
        json!({
            "kind": kind,
            "line_basis": self.line_basis.as_ref().map(ToJson::to_json),
            "quad_coeffs": self.quad_coeffs.as_ref().map(|(a, b, c)| {
                json!({"a": a.to_json(), "b": b.to_json(), "c": c.to_json()})
            }),
            "discriminant": self.discriminant.as_ref().map(ToJson::to_json),
            "points": self.points.as_ref().map(|p| json!([p[0].to_json(), p[1].to_json()])),
        })
    }
}

fn optional<T>(v: &Value, key: &str, f: impl Fn(&Value) -> Result<T>) -> Result<Option<T>> {
    match v.get(key) {
        None | Some(Value::Null) => Ok(None),
        Some(x) => f(x).map(Some),
    }
}

impl FromJson for HyperplaneIntersection {
    fn from_json(v: &Value) -> Result<Self> {
        let kind = match as_str(field(v, "kind")?, "intersection kind")? {
            "containment" => IntersectionKind::Containment,
            "two_points" => IntersectionKind::TwoPoints,
            other => return Err(Error::Parse(format!("unknown intersection kind \"{other}\""))),
        };
        let quad_coeffs = optional(v, "quad_coeffs", |q| {
            Ok((
                GaussRational::from_json(field(q, "a")?)?,
                GaussRational::from_json(field(q, "b")?)?,
                GaussRational::from_json(field(q, "c")?)?,
            ))
        })?;
        let points = optional(v, "points", |p| {
            let pts: Vec<SamplePoint> = FromJson::from_json(p)?;
            <[SamplePoint; 2]>::try_from(pts).map_err(|_| parse_err("two points"))
        })?;
        Ok(HyperplaneIntersection {
            kind,
            line_basis: optional(v, "line_basis", Matrix::from_json)?,
            quad_coeffs,
            discriminant: optional(v, "discriminant", GaussRational::from_json)?,
            points,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{gauss_int, int, rat};
    use crate::cycle::example_family;

    #[test]
    fn scalar_encodings() {
        assert_eq!(rat(3, 4).to_json(), json!("3/4"));
        assert_eq!(int(-2).to_json(), json!("-2"));
        assert_eq!(gauss_int(1, -1).to_json(), json!({"re": "1", "im": "-1"}));
        assert_eq!(Rational::from_json(&json!("-6/8")).unwrap(), rat(-3, 4));
        assert_eq!(GaussRational::from_json(&json!("1/2")).unwrap(), gauss(rat(1, 2), int(0)));
        let big: BigInt = "123456789012345678901234567890".parse().unwrap();
        assert_eq!(big.to_json(), json!("123456789012345678901234567890"));
        assert_eq!(BigInt::from_json(&big.to_json()).unwrap(), big);
        assert!(Rational::from_json(&json!(true)).is_err());
    }

    #[test]
    fn three_space_round_trip() {
        let v = example_family(&rat(1, 2), 5).unwrap();
        let back = ThreeSpace::from_json(&v.to_json()).unwrap();
        assert_eq!(back, v);
    }

    #[test]
    fn root_list_ignores_count() {
        let v = json!({"complete": true, "bound": null, "count": 99, "roots": [[1, 0], [0, -1]]});
        let r = RootList::from_json(&v).unwrap();
        assert_eq!(r.len(), 2);
        assert_eq!(r.to_json()["count"], json!(2));
        assert_eq!(r.roots()[0], vec![BigInt::from(0), BigInt::from(-1)]);
    }
}
