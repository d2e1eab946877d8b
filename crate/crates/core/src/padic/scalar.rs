//! Elements of `Q_p` represented exactly by rationals.
//!
//! Every computation in the local layer stays inside `Q`, so a rational with
//! its `p`-adic valuation is all that is needed. Denominators prime to `p`
//! are units and appear naturally when dividing by Iwasawa pivots.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::int::inv_mod;

pub type PadicScalar = BigRational;

pub fn rat(a: i64) -> PadicScalar {
    BigRational::from_integer(BigInt::from(a))
}

pub fn ratio(a: i64, b: i64) -> PadicScalar {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

fn val_int(n: &BigInt, p: u64) -> i64 {
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// `v_p(x)`, or `None` for `x = 0`.
pub fn val(x: &PadicScalar, p: u64) -> Option<i64> {
    if x.is_zero() {
        return None;
    }
    Some(val_int(x.numer(), p) - val_int(x.denom(), p))
}

pub fn is_integral(x: &PadicScalar, p: u64) -> bool {
    val(x, p).is_none_or(|v| v >= 0)
}

pub fn is_unit(x: &PadicScalar, p: u64) -> bool {
    val(x, p) == Some(0)
}

/// `x` lies in `p^k Z_p`.
pub fn in_ideal(x: &PadicScalar, p: u64, k: i64) -> bool {
    val(x, p).is_none_or(|v| v >= k)
}

/// `p^k` as a rational, `k` of any sign.
pub fn p_pow(p: u64, k: i64) -> PadicScalar {
    let base = BigInt::from(p).pow(k.unsigned_abs() as u32);
    if k >= 0 {
        BigRational::from_integer(base)
    } else {
        BigRational::new(BigInt::one(), base)
    }
}

/// `|x|_p = p^{-v_p(x)}`.
pub fn abs(x: &PadicScalar, p: u64) -> PadicScalar {
    match val(x, p) {
        None => BigRational::zero(),
        Some(v) => p_pow(p, -v),
    }
}

/// Residue of a `p`-integral `x` modulo `p^m`, in `0..p^m`.
pub fn residue(x: &PadicScalar, p: u64, m: u32) -> Option<u64> {
    if !is_integral(x, p) {
        return None;
    }
    let modulus = (p as i128).pow(m);
    let num = (x.numer() % BigInt::from(modulus)).to_i128()?;
    let den = (x.denom() % BigInt::from(modulus)).to_i128()?;
    let dinv = inv_mod(den.rem_euclid(modulus), modulus)?;
    Some((num.rem_euclid(modulus) * dinv).rem_euclid(modulus) as u64)
}

/// The unit part `x / p^{v(x)}`.
pub fn unit_part(x: &PadicScalar, p: u64) -> Option<PadicScalar> {
    val(x, p).map(|v| x * p_pow(p, -v))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valuations() {
        assert_eq!(val(&ratio(9, 2), 3), Some(2));
        assert_eq!(val(&ratio(2, 27), 3), Some(-3));
        assert_eq!(val(&rat(0), 3), None);
        assert!(is_unit(&ratio(5, 7), 3));
        assert!(in_ideal(&rat(0), 3, 100));
    }

    #[test]
    fn residues() {
        assert_eq!(residue(&ratio(1, 2), 3, 1), Some(2));
        assert_eq!(residue(&ratio(-1, 2), 5, 2), Some(12));
        assert_eq!(residue(&ratio(1, 3), 3, 1), None);
    }

    #[test]
    fn ultrametric() {
        let p = 3;
        let xs = [ratio(3, 2), ratio(9, 4), ratio(1, 3), rat(6), ratio(-2, 9)];
        for a in &xs {
            for b in &xs {
                let s = a + b;
                if let (Some(vs), Some(va), Some(vb)) = (val(&s, p), val(a, p), val(b, p)) {
                    assert!(vs >= va.min(vb));
                }
            }
        }
    }
}
