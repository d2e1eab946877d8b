//! Reduction of cyclotomic integers modulo a prime above `ell`.
//!
//! For `N = ell^a M` with `ell` not dividing `M`, the prime ideals above `ell`
//! in `Z[zeta_N]` correspond to the monic irreducible factors of `Phi_M`
//! over `F_ell`. Factors are listed in a fixed order (lexicographic on the
//! coefficients from `x^(d-1)` down to the constant term) and chosen by
//! index. The residue field is `F_ell[x]/(g)`; `zeta_N^(ell^a)` maps to `x`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::int::{euler_phi, factorize, gcd, inv_mod, is_prime, mult_order};
use super::{CycNumber, Scalar};
use crate::error::{Error, Result};

// ---- polynomials over F_p, lowest degree first, no trailing zeros ----

pub(crate) fn fp_trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub(crate) fn fp_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    fp_trim(out)
}

pub(crate) fn fp_sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    fp_trim(out)
}

/// Remainder of `a` modulo a nonzero `m`.
pub(crate) fn fp_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    fp_divrem(a, m, p).1
}

pub(crate) fn fp_divrem(a: &[u64], m: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let m = fp_trim(m.to_vec());
    assert!(!m.is_empty(), "division by zero polynomial");
    let mut r = fp_trim(a.to_vec());
    let dm = m.len() - 1;
    if r.len() <= dm {
        return (Vec::new(), r);
    }
    let lead_inv = inv_mod(m[dm] as i128, p as i128).unwrap() as u64;
    let mut q = vec![0u64; r.len() - dm];
    for k in (0..q.len()).rev() {
        let c = r[k + dm] * lead_inv % p;
        if c == 0 {
            continue;
        }
        q[k] = c;
        for (j, &mj) in m.iter().enumerate() {
            r[k + j] = (r[k + j] + p - c * mj % p) % p;
        }
    }
    r.truncate(dm);
    (fp_trim(q), fp_trim(r))
}

pub(crate) fn fp_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = fp_trim(a.to_vec());
    let mut b = fp_trim(b.to_vec());
    while !b.is_empty() {
        let r = fp_rem(&a, &b, p);
        a = b;
        b = r;
    }
    if let Some(&lead) = a.last() {
        let li = inv_mod(lead as i128, p as i128).unwrap() as u64;
        for c in a.iter_mut() {
            *c = *c * li % p;
        }
    }
    a
}

pub(crate) fn fp_powmod(base: &[u64], mut e: u128, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = fp_rem(&[1], m, p);
    let mut b = fp_rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = fp_rem(&fp_mul(&acc, &b, p), m, p);
        }
        e >>= 1;
        if e > 0 {
            b = fp_rem(&fp_mul(&b, &b, p), m, p);
        }
    }
    acc
}

/// Inverse of `a` modulo an irreducible `m`.
pub(crate) fn fp_inv_mod(a: &[u64], m: &[u64], p: u64) -> Option<Vec<u64>> {
    let (mut r0, mut r1) = (fp_trim(m.to_vec()), fp_rem(a, m, p));
    let (mut s0, mut s1): (Vec<u64>, Vec<u64>) = (Vec::new(), vec![1]);
    while !r1.is_empty() {
        let (q, r) = fp_divrem(&r0, &r1, p);
        let s = fp_sub(&s0, &fp_mul(&q, &s1, p), p);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    if r0.len() != 1 {
        return None;
    }
    let ci = inv_mod(r0[0] as i128, p as i128).unwrap() as u64;
    Some(fp_rem(
        &s0.iter().map(|c| c * ci % p).collect::<Vec<_>>(),
        m,
        p,
    ))
}

pub(crate) fn is_irreducible(f: &[u64], p: u64) -> bool {
    let d = f.len() - 1;
    if d == 0 {
        return false;
    }
    if d == 1 {
        return true;
    }
    let x = vec![0, 1];
    let q = p as u128;
    // x^(p^d) = x mod f, and gcd(x^(p^(d/r)) - x, f) = 1 for each prime r | d.
    if fp_powmod(&x, q.pow(d as u32), f, p) != fp_rem(&x, f, p) {
        return false;
    }
    factorize(d as u64).into_iter().all(|(r, _)| {
        let h = fp_powmod(&x, q.pow((d as u64 / r) as u32), f, p);
        fp_gcd(&fp_sub(&h, &x, p), f, p).len() == 1
    })
}

/// Lexicographically least monic irreducible polynomial of degree `d`,
/// comparing coefficients from `x^(d-1)` down to the constant term.
pub(crate) fn least_irreducible(d: usize, p: u64) -> Vec<u64> {
    if d == 1 {
        return vec![0, 1];
    }
    let total = (p as u128).pow(d as u32);
    for idx in 0..total {
        // idx written in base p, most significant digit = coefficient of x^(d-1).
        let mut f = vec![0u64; d + 1];
        f[d] = 1;
        let mut t = idx;
        for slot in f.iter_mut().take(d) {
            *slot = (t % p as u128) as u64;
            t /= p as u128;
        }
        if f[0] != 0 && is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

fn lex_key(f: &[u64]) -> Vec<u64> {
    f.iter().rev().skip(1).copied().collect()
}

/// Monic irreducible factors of `Phi_M` over `F_ell` in the fixed order.
pub fn cyclotomic_factors_mod(m: u64, ell: u64) -> Vec<Vec<u64>> {
    assert!(gcd(m, ell) == 1);
    let d = mult_order(ell % m.max(1), m) as usize;
    let modp = least_irreducible(d, ell);
    let order = (ell as u128).pow(d as u32) - 1;
    let zeta = primitive_root_of_order(m, ell, &modp, order);
    let mut seen = vec![false; m as usize];
    let mut out = Vec::new();
    for j in 1..=m {
        let j = j % m;
        if gcd(j, m) != 1 || seen[j as usize] {
            continue;
        }
        // Conjugates zeta^(j ell^i) over F_ell.
        let mut poly: Vec<Vec<u64>> = vec![vec![1]];
        let mut e = j;
        for _ in 0..d {
            seen[e as usize] = true;
            let root = fp_powmod(&zeta, e as u128, &modp, ell);
            // poly *= (X - root), coefficients in F_ell[y]/(modp)
            let mut next: Vec<Vec<u64>> = vec![Vec::new(); poly.len() + 1];
            for (k, c) in poly.iter().enumerate() {
                next[k + 1] = fp_sub(&next[k + 1], &fp_sub(&[], c, ell), ell);
                let prod = fp_rem(&fp_mul(c, &root, ell), &modp, ell);
                next[k] = fp_sub(&next[k], &prod, ell);
            }
            poly = next;
            e = e * ell % m;
        }
        let f: Vec<u64> = poly
            .into_iter()
            .map(|c| {
                debug_assert!(c.len() <= 1, "minimal polynomial leaves F_ell");
                c.first().copied().unwrap_or(0)
            })
            .collect();
        out.push(f);
    }
    out.sort_by_key(|f| lex_key(f));
    out
}

fn primitive_root_of_order(m: u64, ell: u64, modp: &[u64], order: u128) -> Vec<u64> {
    let d = modp.len() - 1;
    let cofactor = order / m as u128;
    let primes: Vec<u64> = factorize(m).into_iter().map(|(r, _)| r).collect();
    let total = (ell as u128).pow(d as u32);
    for idx in 1..total {
        let mut h = vec![0u64; d];
        let mut t = idx;
        for slot in h.iter_mut() {
            *slot = (t % ell as u128) as u64;
            t /= ell as u128;
        }
        let z = fp_powmod(&fp_trim(h), cofactor, modp, ell);
        let one = fp_rem(&[1], modp, ell);
        if primes
            .iter()
            .all(|&r| fp_powmod(&z, (m / r) as u128, modp, ell) != one)
        {
            return z;
        }
    }
    unreachable!("multiplicative group is cyclic")
}

// ---- residue field and scalars ----

#[derive(Debug, PartialEq, Eq)]
pub struct ResidueField {
    pub ell: u64,
    /// Monic modulus, lowest degree first.
    pub modulus_poly: Vec<u64>,
}

impl ResidueField {
    pub fn degree(&self) -> usize {
        self.modulus_poly.len() - 1
    }
}

#[derive(Clone, Debug)]
pub struct ResidueScalar {
    field: Arc<ResidueField>,
    coeffs: Vec<u64>,
}

impl ResidueScalar {
    pub fn new(field: Arc<ResidueField>, coeffs: &[u64]) -> Self {
        let ell = field.ell;
        let c: Vec<u64> = coeffs.iter().map(|c| c % ell).collect();
        let coeffs = fp_rem(&c, &field.modulus_poly, ell);
        Self { field, coeffs }
    }

    pub fn from_int(field: Arc<ResidueField>, n: i64) -> Self {
        let ell = field.ell as i64;
        Self::new(field, &[n.rem_euclid(ell) as u64])
    }

    pub fn field(&self) -> &Arc<ResidueField> {
        &self.field
    }

    /// Coordinates in `1, x, ..., x^(d-1)` (trailing zeros dropped).
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    /// The value as an element of the prime field, if it is one.
    pub fn as_prime_field(&self) -> Option<u64> {
        match self.coeffs.len() {
            0 => Some(0),
            1 => Some(self.coeffs[0]),
            _ => None,
        }
    }

    fn with(&self, coeffs: Vec<u64>) -> Self {
        Self {
            field: self.field.clone(),
            coeffs,
        }
    }
}

impl PartialEq for ResidueScalar {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs && *self.field == *other.field
    }
}

impl Scalar for ResidueScalar {
    fn zero_like(&self) -> Self {
        self.with(Vec::new())
    }
    fn one_like(&self) -> Self {
        self.with(vec![1])
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        let p = self.field.ell;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let v = (0..n)
            .map(|i| {
                (self.coeffs.get(i).copied().unwrap_or(0) + rhs.coeffs.get(i).copied().unwrap_or(0))
                    % p
            })
            .collect();
        self.with(fp_trim(v))
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self.with(fp_sub(&self.coeffs, &rhs.coeffs, self.field.ell))
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        let p = self.field.ell;
        self.with(fp_rem(
            &fp_mul(&self.coeffs, &rhs.coeffs, p),
            &self.field.modulus_poly,
            p,
        ))
    }
    fn neg_ref(&self) -> Self {
        self.with(fp_sub(&[], &self.coeffs, self.field.ell))
    }
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        fp_inv_mod(&self.coeffs, &self.field.modulus_poly, self.field.ell).map(|c| self.with(c))
    }
}

impl fmt::Display for ResidueScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, c) {
                (0, _) => write!(f, "{c}")?,
                (1, 1) => write!(f, "x")?,
                (1, _) => write!(f, "{c}*x")?,
                (_, 1) => write!(f, "x^{i}")?,
                _ => write!(f, "{c}*x^{i}")?,
            }
        }
        Ok(())
    }
}

/// The ring map `Z[zeta_N]_(ell) -> F_ell[x]/(g)` for a chosen factor `g`.
#[derive(Debug)]
pub struct ReductionMap {
    modulus: u64,
    factor_index: usize,
    factor_count: usize,
    field: Arc<ResidueField>,
    /// Images of `zeta_N^i` for `0 <= i < phi(N)`.
    powers: Vec<ResidueScalar>,
}

impl ReductionMap {
    pub fn new(n: u64, ell: u64, choice: usize) -> Result<Arc<Self>> {
        static CACHE: OnceLock<Mutex<HashMap<(u64, u64, usize), Arc<ReductionMap>>>> =
            OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(m) = cache.lock().unwrap().get(&(n, ell, choice)) {
            return Ok(m.clone());
        }
        let m = Arc::new(Self::build(n, ell, choice)?);
        cache.lock().unwrap().insert((n, ell, choice), m.clone());
        Ok(m)
    }

    fn build(n: u64, ell: u64, choice: usize) -> Result<Self> {
        if !is_prime(ell) {
            return Err(Error::BadEll(ell));
        }
        let mut m = n;
        let mut a = 0u32;
        while m.is_multiple_of(ell) {
            m /= ell;
            a += 1;
        }
        let factors = cyclotomic_factors_mod(m, ell);
        let count = factors.len();
        let g = factors.into_iter().nth(choice).ok_or(Error::FactorIndex {
            index: choice,
            count,
        })?;
        let field = Arc::new(ResidueField {
            ell,
            modulus_poly: g,
        });
        // zeta_N -> x^c with c = ell^(-a) mod M, so that zeta_N^(ell^a) -> x.
        let ella = (ell as u128).pow(a) % m.max(1) as u128;
        let c = if m == 1 {
            0
        } else {
            inv_mod(ella as i128, m as i128).unwrap() as u128
        };
        let one = ResidueScalar::from_int(field.clone(), 1);
        let w = ResidueScalar::new(field.clone(), &[0, 1]).pow_u(c as u64);
        let phi = euler_phi(n) as usize;
        let mut powers = Vec::with_capacity(phi);
        let mut cur = one;
        for _ in 0..phi {
            powers.push(cur.clone());
            cur = cur.mul_ref(&w);
        }
        Ok(Self {
            modulus: n,
            factor_index: choice,
            factor_count: count,
            field,
            powers,
        })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn ell(&self) -> u64 {
        self.field.ell
    }

    pub fn factor_index(&self) -> usize {
        self.factor_index
    }

    pub fn factor_count(&self) -> usize {
        self.factor_count
    }

    pub fn field(&self) -> &Arc<ResidueField> {
        &self.field
    }

    pub fn zero(&self) -> ResidueScalar {
        ResidueScalar::from_int(self.field.clone(), 0)
    }

    pub fn from_int(&self, n: i64) -> ResidueScalar {
        ResidueScalar::from_int(self.field.clone(), n)
    }

    /// Reduces `x`, whose modulus must divide the map's modulus.
    pub fn reduce(&self, x: &CycNumber) -> Result<ResidueScalar> {
        let ell = self.field.ell;
        if !x.is_integral_at(ell) {
            return Err(Error::NotIntegralAtEll { ell });
        }
        let compact;
        let x = if !self.modulus.is_multiple_of(x.modulus()) {
            compact = x.compact();
            &compact
        } else {
            x
        };
        if !self.modulus.is_multiple_of(x.modulus()) {
            return Err(Error::InvalidParameter(format!(
                "value in Q(zeta_{}) outside the reduction field Q(zeta_{})",
                x.modulus(),
                self.modulus
            )));
        }
        let x = x.lift(self.modulus);
        let ellb = BigInt::from(ell);
        let to_fl = |b: &BigInt| -> u64 {
            let r = b % &ellb;
            let r = if r < BigInt::from(0) { r + &ellb } else { r };
            r.to_u64().unwrap()
        };
        let den_inv = inv_mod(to_fl(x.denominator()) as i128, ell as i128).unwrap() as u64;
        let mut acc = self.zero();
        for (i, c) in x.numerators().iter().enumerate() {
            let c = to_fl(c) * den_inv % ell;
            if c != 0 {
                acc = acc.add_ref(&self.powers[i].mul_ref(&self.from_int(c as i64)));
            }
        }
        Ok(acc)
    }
}

/// Reduces `x` with the map for its own modulus.
pub fn reduce_mod_ell(x: &CycNumber, ell: u64, choice: usize) -> Result<ResidueScalar> {
    if !is_prime(ell) {
        return Err(Error::BadEll(ell));
    }
    if !x.is_integral_at(ell) {
        return Err(Error::NotIntegralAtEll { ell });
    }
    ReductionMap::new(x.modulus(), ell, choice)?.reduce(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn least_irreducibles() {
        assert_eq!(least_irreducible(2, 2), vec![1, 1, 1]);
        assert_eq!(least_irreducible(2, 3), vec![1, 0, 1]);
        assert_eq!(least_irreducible(3, 2), vec![1, 1, 0, 1]);
    }

    #[test]
    fn phi3_mod_7() {
        let f = cyclotomic_factors_mod(3, 7);
        assert_eq!(f, vec![vec![3, 1], vec![5, 1]]);
        let f = cyclotomic_factors_mod(3, 5);
        assert_eq!(f, vec![vec![1, 1, 1]]);
    }

    #[test]
    fn zeta3_mod_7() {
        let z = CycNumber::zeta(3, 1);
        assert_eq!(reduce_mod_ell(&z, 7, 1).unwrap().as_prime_field(), Some(2));
        assert_eq!(reduce_mod_ell(&z, 7, 0).unwrap().as_prime_field(), Some(4));
        assert_eq!(
            reduce_mod_ell(&z, 7, 2).unwrap_err(),
            Error::FactorIndex { index: 2, count: 2 }
        );
    }

    #[test]
    fn rational_and_nonintegral() {
        let two = CycNumber::from(2);
        assert_eq!(
            reduce_mod_ell(&two, 3, 0).unwrap().as_prime_field(),
            Some(2)
        );
        let half = CycNumber::from_ratio(1, 2);
        assert_eq!(
            reduce_mod_ell(&half, 2, 0).unwrap_err(),
            Error::NotIntegralAtEll { ell: 2 }
        );
        assert_eq!(reduce_mod_ell(&half, 4, 0).unwrap_err(), Error::BadEll(4));
    }

    #[test]
    fn ell_dividing_modulus() {
        // zeta_9 has 3-power order, so it reduces to 1 modulo 3.
        let z = CycNumber::zeta(9, 2);
        assert_eq!(reduce_mod_ell(&z, 3, 0).unwrap().as_prime_field(), Some(1));
        // zeta_12 mod 3 is a primitive 4th root.
        let map = ReductionMap::new(12, 3, 0).unwrap();
        let r = map.reduce(&CycNumber::zeta(12, 1)).unwrap();
        assert_eq!(r.pow_u(4), map.from_int(1));
        assert_ne!(r.pow_u(2), map.from_int(1));
    }

    #[test]
    fn homomorphism_on_samples() {
        let map = ReductionMap::new(24, 5, 1).unwrap();
        let a = CycNumber::zeta(8, 3) + CycNumber::from_ratio(1, 3);
        let b = CycNumber::zeta(3, 1) * CycNumber::from(7) - CycNumber::zeta(24, 5);
        let ra = map.reduce(&a).unwrap();
        let rb = map.reduce(&b).unwrap();
        assert_eq!(map.reduce(&(&a * &b)).unwrap(), ra.mul_ref(&rb));
        assert_eq!(map.reduce(&(&a + &b)).unwrap(), ra.add_ref(&rb));
        let inv = map.reduce(&a.inverse().unwrap()).unwrap();
        assert_eq!(inv.mul_ref(&ra), map.from_int(1));
    }
}
