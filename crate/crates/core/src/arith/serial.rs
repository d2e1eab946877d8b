//! JSON encoding of cyclotomic numbers and rational functions.
//!
//! `CycNumber`: `{"N": 8, "coeffs": ["1/2", "0", "-3", "0"]}`.
//! `RationalFunction`: `{"N": 8, "num": [[deg, [coeffs..]], ..], "den": [..]}`
//! with every coefficient written in the common field `Q(zeta_N)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Value};

use super::int::{euler_phi, lcm};
use super::{CycNumber, LaurentPoly, RationalFunction};
use crate::error::{Error, Result};

fn rat_str(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn parse_rat(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("bad rational {s:?}"));
    let (a, b) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s.trim(), "1"),
    };
    let a: BigInt = a.parse().map_err(|_| bad())?;
    let b: BigInt = b.parse().map_err(|_| bad())?;
    if b == BigInt::from(0) {
        return Err(bad());
    }
    Ok(BigRational::new(a, b))
}

fn coeff_list(x: &CycNumber, n: u64) -> Value {
    Value::Array(
        x.compact()
            .lift(n)
            .coeffs()
            .iter()
            .map(|c| Value::String(rat_str(c)))
            .collect(),
    )
}

fn parse_coeff_list(v: &Value, n: u64) -> Result<CycNumber> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::Parse("coefficient list expected".into()))?;
    if arr.len() as u64 != euler_phi(n) {
        return Err(Error::Parse(format!(
            "expected {} coefficients for N = {n}, got {}",
            euler_phi(n),
            arr.len()
        )));
    }
    let coeffs = arr
        .iter()
        .map(|c| {
            c.as_str()
                .ok_or_else(|| Error::Parse("coefficient must be a string".into()))
                .and_then(parse_rat)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CycNumber::from_coeffs(n, &coeffs))
}

fn parse_modulus(v: &Value) -> Result<u64> {
    v.get("N")
        .and_then(Value::as_u64)
        .filter(|&n| n >= 1)
        .ok_or_else(|| Error::Parse("missing or invalid \"N\"".into()))
}

pub fn cyc_to_json(x: &CycNumber) -> Value {
    let x = x.compact();
    json!({"N": x.modulus(), "coeffs": coeff_list(&x, x.modulus())})
}

pub fn cyc_from_json(v: &Value) -> Result<CycNumber> {
    let n = parse_modulus(v)?;
    parse_coeff_list(
        v.get("coeffs")
            .ok_or_else(|| Error::Parse("missing \"coeffs\"".into()))?,
        n,
    )
}

fn poly_modulus(p: &LaurentPoly<CycNumber>) -> u64 {
    p.terms().fold(1, |m, (_, c)| lcm(m, c.compact().modulus()))
}

fn poly_to_json(p: &LaurentPoly<CycNumber>, n: u64) -> Value {
    Value::Array(
        p.terms()
            .map(|(d, c)| json!([d, coeff_list(c, n)]))
            .collect(),
    )
}

fn poly_from_json(v: &Value, n: u64) -> Result<LaurentPoly<CycNumber>> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::Parse("term list expected".into()))?;
    let terms = arr
        .iter()
        .map(|t| {
            let pair = t
                .as_array()
                .filter(|a| a.len() == 2)
                .ok_or_else(|| Error::Parse("term must be [deg, coeffs]".into()))?;
            let d = pair[0]
                .as_i64()
                .ok_or_else(|| Error::Parse("degree must be an integer".into()))?;
            Ok((d, parse_coeff_list(&pair[1], n)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LaurentPoly::from_terms(terms))
}

pub fn ratfunc_to_json(f: &RationalFunction<CycNumber>) -> Value {
    let n = lcm(poly_modulus(f.numerator()), poly_modulus(f.denominator()));
    json!({
        "N": n,
        "num": poly_to_json(f.numerator(), n),
        "den": poly_to_json(f.denominator(), n),
    })
}

pub fn ratfunc_from_json(v: &Value) -> Result<RationalFunction<CycNumber>> {
    let n = parse_modulus(v)?;
    let get = |k: &str| {
        v.get(k)
            .ok_or_else(|| Error::Parse(format!("missing {k:?}")))
    };
    let num = poly_from_json(get("num")?, n)?;
    let den = poly_from_json(get("den")?, n)?;
    RationalFunction::new(num, den)
}

impl Serialize for CycNumber {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        cyc_to_json(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycNumber {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        cyc_from_json(&v).map_err(D::Error::custom)
    }
}

impl Serialize for RationalFunction<CycNumber> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ratfunc_to_json(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for RationalFunction<CycNumber> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        ratfunc_from_json(&v).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::EulerFactor;

    #[test]
    fn cyc_round_trip() {
        let x = CycNumber::zeta(8, 3) * CycNumber::from_ratio(-3, 7) + CycNumber::from_ratio(1, 2);
        let v = cyc_to_json(&x);
        assert_eq!(v["N"], 8);
        assert_eq!(v["coeffs"][0], "1/2");
        assert_eq!(cyc_from_json(&v).unwrap(), x);
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(serde_json::from_str::<CycNumber>(&s).unwrap(), x);
    }

    #[test]
    fn ratfunc_round_trip() {
        let f = EulerFactor::simple(CycNumber::zeta(4, 1), 2)
            .to_rational()
            .scale(&CycNumber::from(3));
        let v = ratfunc_to_json(&f);
        assert_eq!(v["N"], 4);
        assert_eq!(v["num"], json!([[0, ["3", "0"]]]));
        assert_eq!(v["den"], json!([[0, ["1", "0"]], [2, ["0", "-1"]]]));
        assert_eq!(ratfunc_from_json(&v).unwrap(), f);
    }

    #[test]
    fn rejects_wrong_length() {
        let v = json!({"N": 3, "coeffs": ["1"]});
        assert!(cyc_from_json(&v).is_err());
    }
}
