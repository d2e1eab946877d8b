//! Exact arithmetic in cyclotomic fields `Q(zeta_N)`.
//!
//! An element is stored in the power basis `1, zeta_N, ..., zeta_N^(phi(N)-1)`
//! as integer numerators over one positive common denominator. Binary
//! operations between different moduli embed both operands into
//! `Q(zeta_lcm)` first, so values coming from different parts of a
//! computation can be mixed freely.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::int::{divisors, euler_phi, gcd, lcm};
use super::Scalar;

/// The defining data of `Q(zeta_N)`: the monic cyclotomic polynomial.
#[derive(Debug)]
pub struct CycField {
    pub modulus: u64,
    pub phi: usize,
    /// Coefficients of `Phi_N`, lowest degree first, length `phi + 1`.
    pub poly: Vec<i64>,
}

fn field_cache() -> &'static RwLock<HashMap<u64, Arc<CycField>>> {
    static CACHE: OnceLock<RwLock<HashMap<u64, Arc<CycField>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Memoized `Q(zeta_N)` data. The cache only ever grows and is read-mostly.
pub fn cyc_field(n: u64) -> Arc<CycField> {
    assert!(n >= 1, "cyclotomic modulus must be positive");
    if let Some(f) = field_cache().read().unwrap().get(&n) {
        return f.clone();
    }
    let poly = cyclotomic_poly(n);
    let f = Arc::new(CycField {
        modulus: n,
        phi: poly.len() - 1,
        poly,
    });
    field_cache().write().unwrap().insert(n, f.clone());
    f
}

/// `Phi_N` by exact division of `x^N - 1` by `Phi_d` for proper divisors `d`.
fn cyclotomic_poly(n: u64) -> Vec<i64> {
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in divisors(n) {
        if d == n {
            continue;
        }
        let den = cyc_field(d).poly.clone();
        num = div_exact_monic(&num, &den);
    }
    debug_assert_eq!(num.len() as u64 - 1, euler_phi(n));
    num
}

fn div_exact_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qd = rem.len() - 1 - dd;
    let mut quot = vec![0i64; qd + 1];
    for k in (0..=qd).rev() {
        let c = rem[k + dd];
        quot[k] = c;
        if c != 0 {
            for (j, &dj) in den.iter().enumerate() {
                rem[k + j] -= c * dj;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0), "inexact cyclotomic division");
    quot
}

/// Reduces an exponent-indexed vector modulo `Phi_N` in place and truncates it
/// to `phi` coordinates.
fn reduce_mod_phi(mut v: Vec<BigInt>, field: &CycField) -> Vec<BigInt> {
    let phi = field.phi;
    if v.len() > phi {
        for k in (phi..v.len()).rev() {
            if v[k].is_zero() {
                continue;
            }
            let c = std::mem::take(&mut v[k]);
            for j in 0..phi {
                let pj = field.poly[j];
                if pj != 0 {
                    v[k - phi + j] -= &c * pj;
                }
            }
        }
        v.truncate(phi);
    }
    v.resize(phi, BigInt::zero());
    v
}

#[derive(Clone, Debug)]
pub struct CycNumber {
    modulus: u64,
    num: Vec<BigInt>,
    den: BigInt,
}

impl CycNumber {
    pub fn zero() -> Self {
        Self::from_integer(0)
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    pub fn from_integer(n: i64) -> Self {
        Self {
            modulus: 1,
            num: vec![BigInt::from(n)],
            den: BigInt::one(),
        }
    }

    pub fn from_rational(r: &BigRational) -> Self {
        Self::from_parts(1, vec![r.numer().clone()], r.denom().clone())
    }

    pub fn from_ratio(a: i64, b: i64) -> Self {
        Self::from_rational(&BigRational::new(a.into(), b.into()))
    }

    /// `zeta_N^k` in canonical form.
    pub fn zeta(n: u64, k: i64) -> Self {
        let field = cyc_field(n);
        let e = k.rem_euclid(n as i64) as usize;
        let mut v = vec![BigInt::zero(); e.max(field.phi) + 1];
        v[e] = BigInt::one();
        Self::from_parts(n, reduce_mod_phi(v, &field), BigInt::one())
    }

    /// Builds `(sum coeffs[i] zeta_N^i)` from rational power-basis coordinates
    /// (any length; reduced modulo `Phi_N`).
    pub fn from_coeffs(n: u64, coeffs: &[BigRational]) -> Self {
        let field = cyc_field(n);
        let den = coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let v: Vec<BigInt> = coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        Self::from_parts(n, reduce_mod_phi(v, &field), den)
    }

    fn from_parts(modulus: u64, num: Vec<BigInt>, den: BigInt) -> Self {
        let mut x = Self { modulus, num, den };
        x.normalize();
        x
    }

    fn normalize(&mut self) {
        if self.den.is_negative() {
            self.den = -&self.den;
            for c in &mut self.num {
                *c = -&*c;
            }
        }
        let mut g = self.den.clone();
        for c in &self.num {
            if g.is_one() {
                break;
            }
            g = g.gcd(c);
        }
        if self.num.iter().all(Zero::is_zero) {
            self.den = BigInt::one();
            return;
        }
        if !g.is_one() {
            for c in &mut self.num {
                *c = &*c / &g;
            }
            self.den = &self.den / &g;
        }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Power-basis coordinates as rationals, length `phi(N)`.
    pub fn coeffs(&self) -> Vec<BigRational> {
        self.num
            .iter()
            .map(|c| BigRational::new(c.clone(), self.den.clone()))
            .collect()
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub fn numerators(&self) -> &[BigInt] {
        &self.num
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    /// The value as a rational number, if it is one.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.num.iter().skip(1).all(Zero::is_zero) {
            Some(BigRational::new(self.num[0].clone(), self.den.clone()))
        } else {
            None
        }
    }

    /// Embeds into `Q(zeta_to)`; `to` must be a multiple of the modulus.
    pub fn lift(&self, to: u64) -> Self {
        if to == self.modulus {
            return self.clone();
        }
        assert!(
            to.is_multiple_of(self.modulus),
            "cannot embed Q(zeta_{}) into Q(zeta_{})",
            self.modulus,
            to
        );
        let field = cyc_field(to);
        let step = (to / self.modulus) as usize;
        let mut v = vec![BigInt::zero(); (to as usize).max(field.phi)];
        for (i, c) in self.num.iter().enumerate() {
            if !c.is_zero() {
                v[(i * step) % to as usize] += c;
            }
        }
        Self::from_parts(to, reduce_mod_phi(v, &field), self.den.clone())
    }

    fn aligned(&self, other: &Self) -> (Self, Self) {
        if self.modulus == other.modulus {
            return (self.clone(), other.clone());
        }
        let m = lcm(self.modulus, other.modulus);
        (self.lift(m), other.lift(m))
    }

    fn add_impl(&self, other: &Self, sign: i8) -> Self {
        if self.modulus != other.modulus {
            let (a, b) = self.aligned(other);
            return a.add_impl(&b, sign);
        }
        let num = self
            .num
            .iter()
            .zip(&other.num)
            .map(|(a, b)| {
                let l = a * &other.den;
                let r = b * &self.den;
                if sign > 0 {
                    l + r
                } else {
                    l - r
                }
            })
            .collect();
        Self::from_parts(self.modulus, num, &self.den * &other.den)
    }

    fn mul_impl(&self, other: &Self) -> Self {
        if self.modulus != other.modulus {
            let (a, b) = self.aligned(other);
            return a.mul_impl(&b);
        }
        if let Some(r) = other.as_rational() {
            return self.scale(&r);
        }
        if let Some(r) = self.as_rational() {
            return other.scale(&r);
        }
        let field = cyc_field(self.modulus);
        let mut v = vec![BigInt::zero(); 2 * field.phi - 1];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.num.iter().enumerate() {
                if !b.is_zero() {
                    v[i + j] += a * b;
                }
            }
        }
        Self::from_parts(
            self.modulus,
            reduce_mod_phi(v, &field),
            &self.den * &other.den,
        )
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        let num = self.num.iter().map(|c| c * r.numer()).collect();
        Self::from_parts(self.modulus, num, &self.den * r.denom())
    }

    /// The Galois conjugate `zeta_N -> zeta_N^k`, `gcd(k, N) = 1`.
    pub fn galois(&self, k: u64) -> Self {
        let n = self.modulus;
        debug_assert_eq!(gcd(k % n.max(1), n), 1 % n.max(1));
        let field = cyc_field(n);
        let mut v = vec![BigInt::zero(); (n as usize).max(field.phi)];
        for (i, c) in self.num.iter().enumerate() {
            if !c.is_zero() {
                v[(i as u64 * k % n) as usize] += c;
            }
        }
        Self::from_parts(n, reduce_mod_phi(v, &field), self.den.clone())
    }

    /// Multiplicative inverse via the product of the nontrivial conjugates.
    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if let Some(r) = self.as_rational() {
            return Some(Self::from_rational(&r.recip()));
        }
        let n = self.modulus;
        let mut prod = Self::one().lift(n);
        for k in 2..n {
            if gcd(k, n) == 1 {
                prod = prod.mul_impl(&self.galois(k));
            }
        }
        let norm = self
            .mul_impl(&prod)
            .as_rational()
            .expect("field norm must be rational");
        Some(prod.scale(&norm.recip()))
    }

    /// `self / rhs`, or `None` when `rhs` is zero.
    pub fn div_checked(&self, rhs: &Self) -> Option<Self> {
        rhs.inverse().map(|r| self * &r)
    }

    pub fn pow(&self, e: i64) -> Self {
        if e < 0 {
            return self.inverse().expect("negative power of zero").pow(-e);
        }
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Complex conjugate (`zeta -> zeta^{-1}`).
    pub fn conj(&self) -> Self {
        if self.modulus <= 2 {
            return self.clone();
        }
        self.galois(self.modulus - 1)
    }

    /// Every denominator is prime to `ell` (the element lies in the
    /// localization of `Z[zeta_N]` at `ell`).
    pub fn is_integral_at(&self, ell: u64) -> bool {
        !(&self.den % BigInt::from(ell)).is_zero()
    }

    /// Smallest `d | N` with the value in `Q(zeta_d)`; `d = 2 mod 4` is
    /// skipped since `Q(zeta_d) = Q(zeta_{d/2})` there.
    pub fn minimal_modulus(&self) -> u64 {
        self.compact().modulus
    }

    /// Re-expresses the value in its minimal cyclotomic field.
    pub fn compact(&self) -> Self {
        if self.as_rational().is_some() {
            return Self::from_parts(1, vec![self.num[0].clone()], self.den.clone());
        }
        for d in divisors(self.modulus) {
            if d == self.modulus {
                break;
            }
            if d % 4 == 2 {
                continue;
            }
            if let Some(x) = self.descend(d) {
                return x;
            }
        }
        self.clone()
    }

    /// Coordinates in `Q(zeta_d)` by exact elimination against the lifted
    /// power basis, if the value lies there.
    fn descend(&self, d: u64) -> Option<Self> {
        let phi_d = euler_phi(d) as usize;
        let rows = self.num.len();
        // Augmented matrix: columns are lift(zeta_d^j), last column the value.
        let mut m: Vec<Vec<BigRational>> = vec![Vec::with_capacity(phi_d + 1); rows];
        for j in 0..phi_d {
            let b = Self::zeta(d, j as i64).lift(self.modulus);
            for (r, row) in m.iter_mut().enumerate() {
                row.push(BigRational::from_integer(b.num[r].clone()));
            }
        }
        for (r, row) in m.iter_mut().enumerate() {
            row.push(BigRational::from_integer(self.num[r].clone()));
        }
        let mut pivots = Vec::new();
        let mut top = 0;
        for col in 0..phi_d {
            let Some(pr) = (top..rows).find(|&r| !m[r][col].is_zero()) else {
                continue;
            };
            m.swap(top, pr);
            let inv = m[top][col].recip();
            for c in col..=phi_d {
                m[top][c] = &m[top][c] * &inv;
            }
            for r in 0..rows {
                if r != top && !m[r][col].is_zero() {
                    let f = m[r][col].clone();
                    for c in col..=phi_d {
                        let t = &f * &m[top][c];
                        m[r][c] -= t;
                    }
                }
            }
            pivots.push(col);
            top += 1;
        }
        if m[top..].iter().any(|row| !row[phi_d].is_zero()) {
            return None;
        }
        let mut coeffs = vec![BigRational::zero(); phi_d];
        for (r, &col) in pivots.iter().enumerate() {
            coeffs[col] = &m[r][phi_d] / BigRational::from_integer(self.den.clone());
        }
        Some(Self::from_coeffs(d, &coeffs))
    }

    /// Approximate complex value, for display and sanity checks only.
    pub fn to_complex_f64(&self) -> (f64, f64) {
        let den = self.den.to_f64().unwrap_or(f64::NAN);
        let mut re = 0.0;
        let mut im = 0.0;
        for (i, c) in self.num.iter().enumerate() {
            let a = c.to_f64().unwrap_or(f64::NAN) / den;
            let t = 2.0 * std::f64::consts::PI * i as f64 / self.modulus as f64;
            re += a * t.cos();
            im += a * t.sin();
        }
        (re, im)
    }
}

impl PartialEq for CycNumber {
    fn eq(&self, other: &Self) -> bool {
        if self.modulus == other.modulus {
            return self.den == other.den && self.num == other.num;
        }
        let (a, b) = self.aligned(other);
        a.den == b.den && a.num == b.num
    }
}

impl Eq for CycNumber {}

impl Scalar for CycNumber {
    fn zero_like(&self) -> Self {
        Self::zero()
    }
    fn one_like(&self) -> Self {
        Self::one()
    }
    fn is_zero(&self) -> bool {
        CycNumber::is_zero(self)
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        self.add_impl(rhs, 1)
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self.add_impl(rhs, -1)
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self.mul_impl(rhs)
    }
    fn neg_ref(&self) -> Self {
        let num = self.num.iter().map(|c| -c).collect();
        Self {
            modulus: self.modulus,
            num,
            den: self.den.clone(),
        }
    }
    fn inv(&self) -> Option<Self> {
        self.inverse()
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl $tr<&CycNumber> for &CycNumber {
            type Output = CycNumber;
            fn $m(self, rhs: &CycNumber) -> CycNumber {
                $body(self, rhs)
            }
        }
        impl $tr<CycNumber> for CycNumber {
            type Output = CycNumber;
            fn $m(self, rhs: CycNumber) -> CycNumber {
                $body(&self, &rhs)
            }
        }
        impl $tr<&CycNumber> for CycNumber {
            type Output = CycNumber;
            fn $m(self, rhs: &CycNumber) -> CycNumber {
                $body(&self, rhs)
            }
        }
        impl $tr<CycNumber> for &CycNumber {
            type Output = CycNumber;
            fn $m(self, rhs: CycNumber) -> CycNumber {
                $body(self, &rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a: &CycNumber, b: &CycNumber| a.add_impl(b, 1));
forward_binop!(Sub, sub, |a: &CycNumber, b: &CycNumber| a.add_impl(b, -1));
forward_binop!(Mul, mul, |a: &CycNumber, b: &CycNumber| a.mul_impl(b));
forward_binop!(Div, div, |a: &CycNumber, b: &CycNumber| a
    .mul_impl(&b.inverse().expect("division by zero")));

impl Neg for CycNumber {
    type Output = CycNumber;
    fn neg(self) -> CycNumber {
        self.neg_ref()
    }
}

impl Neg for &CycNumber {
    type Output = CycNumber;
    fn neg(self) -> CycNumber {
        self.neg_ref()
    }
}

impl std::iter::Sum for CycNumber {
    fn sum<I: Iterator<Item = CycNumber>>(iter: I) -> Self {
        iter.fold(CycNumber::zero(), |a, b| a + b)
    }
}

impl std::iter::Product for CycNumber {
    fn product<I: Iterator<Item = CycNumber>>(iter: I) -> Self {
        iter.fold(CycNumber::one(), |a, b| a * b)
    }
}

impl From<i64> for CycNumber {
    fn from(n: i64) -> Self {
        CycNumber::from_integer(n)
    }
}

/// Prints in the command-line grammar, e.g. `1/2 - 3*zeta(8)^3`.
impl fmt::Display for CycNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let x = self.compact();
        let mut first = true;
        for (i, c) in x.coeffs().into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            if i == 0 {
                write!(f, "{}", a)?;
            } else {
                if !a.is_one() {
                    write!(f, "{}*", a)?;
                }
                write!(f, "zeta({})", x.modulus)?;
                if i > 1 {
                    write!(f, "^{}", i)?;
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// `zeta_N^k` in canonical form.
pub fn cyc_embed_root(n: u64, k: i64) -> CycNumber {
    CycNumber::zeta(n, k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyc_field(1).poly, vec![-1, 1]);
        assert_eq!(cyc_field(3).poly, vec![1, 1, 1]);
        assert_eq!(cyc_field(4).poly, vec![1, 0, 1]);
        assert_eq!(cyc_field(12).poly, vec![1, 0, -1, 0, 1]);
        assert_eq!(cyc_field(120).phi, 32);
    }

    #[test]
    fn embed_root_examples() {
        assert_eq!(cyc_embed_root(1, 0), CycNumber::one());
        assert_eq!(cyc_embed_root(4, 2), CycNumber::from_integer(-1));
        let z3 = cyc_embed_root(3, 1);
        assert_eq!(z3.pow(3), CycNumber::one());
        assert_ne!(z3, CycNumber::one());
    }

    #[test]
    fn root_orders() {
        for n in [5u64, 8, 12, 15] {
            for k in 0..n as i64 {
                let z = cyc_embed_root(n, k);
                let ord = n / gcd(k as u64, n);
                assert_eq!(z.pow(ord as i64), CycNumber::one());
                for d in 1..ord {
                    assert_ne!(z.pow(d as i64), CycNumber::one());
                }
            }
        }
    }

    #[test]
    fn mixed_moduli() {
        let i = CycNumber::zeta(4, 1);
        let w = CycNumber::zeta(3, 1);
        let z12 = CycNumber::zeta(12, 1);
        // zeta_12 = zeta_4 * zeta_3^{-1}... check zeta_12^4 = zeta_3, zeta_12^3 = zeta_4
        assert_eq!(z12.pow(4), w);
        assert_eq!(z12.pow(3), i);
        assert_eq!(&i * &i, CycNumber::from_integer(-1));
        assert_eq!(CycNumber::zeta(2, 1), CycNumber::from_integer(-1));
    }

    #[test]
    fn inverse_and_division() {
        let x = CycNumber::zeta(5, 1) + CycNumber::from_integer(2);
        let y = x.inverse().unwrap();
        assert_eq!(&x * &y, CycNumber::one());
        assert_eq!((&x / &x), CycNumber::one());
        assert!(CycNumber::zero().inverse().is_none());
    }

    #[test]
    fn sum_of_roots_vanishes() {
        let s: CycNumber = (0..7).map(|k| CycNumber::zeta(7, k)).sum();
        assert!(s.is_zero());
    }

    #[test]
    fn compact_and_display() {
        let z = CycNumber::zeta(3, 1).lift(24);
        assert_eq!(z.minimal_modulus(), 3);
        assert_eq!(z.to_string(), "zeta(3)");
        assert_eq!(CycNumber::from_ratio(-3, 2).to_string(), "-3/2");
        let w = CycNumber::zeta(3, 2);
        assert_eq!(w.to_string(), "-1 - zeta(3)");
    }

    #[test]
    fn integrality() {
        assert!(CycNumber::from_ratio(1, 2).is_integral_at(3));
        assert!(!CycNumber::from_ratio(1, 2).is_integral_at(2));
    }
}
