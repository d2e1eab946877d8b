//! Finite fields `F_{p^k}` with elements encoded as integers in `0..p^k`.
//!
//! The encoding reads the base-`p` digits of an element as the coefficients
//! (lowest first) of a polynomial modulo the lexicographically least monic
//! irreducible of degree `k`. Multiplication goes through log/exp tables of
//! the least generator, so fields are meant to be small.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use crate::arith::int::{ipow, is_prime};
use crate::arith::residue::{fp_mul, fp_rem, least_irreducible};
use crate::error::{Error, Result};

/// Element of a [`FiniteField`]; `0` is zero and `1` is one.
pub type Elem = u32;

const NO_LOG: u32 = u32::MAX;

#[derive(Debug)]
pub struct FiniteField {
    p: u32,
    k: u32,
    q: u32,
    modulus: Vec<u64>,
    generator: Elem,
    exp: Vec<Elem>,
    log: Vec<u32>,
}

fn cache() -> &'static RwLock<HashMap<(u32, u32), Arc<FiniteField>>> {
    static CACHE: OnceLock<RwLock<HashMap<(u32, u32), Arc<FiniteField>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

impl FiniteField {
    /// Shared instance of `F_{p^k}`. Fields larger than `2^20` are refused.
    pub fn new(p: u32, k: u32) -> Result<Arc<Self>> {
        if !is_prime(p as u64) {
            return Err(Error::InvalidParameter(format!("{p} is not prime")));
        }
        if k == 0 {
            return Err(Error::InvalidParameter(
                "extension degree must be positive".into(),
            ));
        }
        let size = (p as u128).checked_pow(k).unwrap_or(u128::MAX);
        if size > 1 << 20 {
            return Err(Error::TooLarge(size));
        }
        if let Some(f) = cache().read().unwrap().get(&(p, k)) {
            return Ok(f.clone());
        }
        let f = Arc::new(Self::build(p, k));
        cache().write().unwrap().insert((p, k), f.clone());
        Ok(f)
    }

    /// `F_q` for a prime power `q`.
    pub fn of_order(q: u32) -> Result<Arc<Self>> {
        match crate::arith::int::prime_power(q as u64) {
            Some((p, k)) => Self::new(p as u32, k),
            None => Err(Error::InvalidParameter(format!("{q} is not a prime power"))),
        }
    }

    fn build(p: u32, k: u32) -> Self {
        let q = ipow(p as u64, k) as u32;
        let modulus = if k == 1 {
            vec![0, 1]
        } else {
            least_irreducible(k as usize, p as u64)
        };
        let mut f = Self {
            p,
            k,
            q,
            modulus,
            generator: 0,
            exp: Vec::new(),
            log: Vec::new(),
        };
        for g in 1..q {
            let mut powers = Vec::with_capacity(q as usize - 1);
            let mut x: Elem = 1;
            loop {
                powers.push(x);
                x = f.mul_slow(x, g);
                if x == 1 {
                    break;
                }
            }
            if powers.len() == q as usize - 1 {
                let mut log = vec![NO_LOG; q as usize];
                for (i, &x) in powers.iter().enumerate() {
                    log[x as usize] = i as u32;
                }
                f.generator = g;
                f.exp = powers;
                f.log = log;
                break;
            }
        }
        f
    }

    fn digits(&self, a: Elem) -> Vec<u64> {
        let mut d = Vec::with_capacity(self.k as usize);
        let mut a = a;
        for _ in 0..self.k {
            d.push((a % self.p) as u64);
            a /= self.p;
        }
        d
    }

    fn undigits(&self, d: &[u64]) -> Elem {
        d.iter().rev().fold(0u32, |acc, &c| acc * self.p + c as u32)
    }

    fn mul_slow(&self, a: Elem, b: Elem) -> Elem {
        if self.k == 1 {
            return ((a as u64 * b as u64) % self.p as u64) as Elem;
        }
        let prod = fp_mul(&self.digits(a), &self.digits(b), self.p as u64);
        self.undigits(&fp_rem(&prod, &self.modulus, self.p as u64))
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    /// Defining polynomial, lowest coefficient first.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// The least element of multiplicative order `q - 1`.
    pub fn generator(&self) -> Elem {
        self.generator
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.q
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.k == 1 {
            return (a + b) % self.p;
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.k {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn neg(&self, a: Elem) -> Elem {
        if self.k == 1 {
            return (self.p - a) % self.p;
        }
        let mut a = a;
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.k {
            out += ((self.p - a % self.p) % self.p) * place;
            a /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a == 0 || b == 0 {
            return 0;
        }
        let e = (self.log[a as usize] as u64 + self.log[b as usize] as u64) % (self.q as u64 - 1);
        self.exp[e as usize]
    }

    pub fn inv(&self, a: Elem) -> Option<Elem> {
        if a == 0 {
            return None;
        }
        let l = self.log[a as usize];
        Some(self.exp[((self.q - 1 - l) % (self.q - 1)) as usize])
    }

    pub fn div(&self, a: Elem, b: Elem) -> Option<Elem> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let l = (self.log[a as usize] as u128 * e as u128) % (self.q as u128 - 1);
        self.exp[l as usize]
    }

    /// Discrete logarithm to the base [`generator`](Self::generator).
    pub fn log(&self, a: Elem) -> Option<u32> {
        (a != 0).then(|| self.log[a as usize])
    }

    /// `generator^e`.
    pub fn exp(&self, e: u64) -> Elem {
        self.exp[(e % (self.q as u64 - 1)) as usize]
    }

    /// Image of the integer `n` in the prime field.
    pub fn from_int(&self, n: i64) -> Elem {
        n.rem_euclid(self.p as i64) as Elem
    }

    /// The prime-field value of `a`, if `a` lies in `F_p`.
    pub fn as_prime(&self, a: Elem) -> Option<u32> {
        (a < self.p).then_some(a)
    }

    /// `x -> x^(p^j)`.
    pub fn frobenius(&self, a: Elem, j: u32) -> Elem {
        self.pow(a, ipow(self.p as u64, j % self.k))
    }

    /// Absolute trace to `F_p`.
    pub fn trace_to_prime(&self, a: Elem) -> u32 {
        let t = (0..self.k).fold(0, |acc, j| self.add(acc, self.frobenius(a, j)));
        self.as_prime(t).expect("trace lies in the prime field")
    }
}

/// `F_q` embedded in `F_{q^n}` by sending the defining root of `F_q` to the
/// least root of its defining polynomial in `F_{q^n}`.
#[derive(Debug)]
pub struct FieldExtension {
    pub base: Arc<FiniteField>,
    pub ext: Arc<FiniteField>,
    degree: u32,
    embed: Vec<Elem>,
    restrict: HashMap<Elem, Elem>,
}

impl FieldExtension {
    pub fn new(base: Arc<FiniteField>, n: u32) -> Result<Self> {
        let p = base.characteristic();
        let ext = FiniteField::new(p, base.degree() * n)?;
        let root = if base.degree() == 1 {
            p
        } else {
            (0..ext.order())
                .find(|&r| {
                    let value = base.modulus().iter().rev().fold(0, |acc, &c| {
                        ext.add(ext.mul(acc, r), ext.from_int(c as i64))
                    });
                    value == 0
                })
                .expect("defining polynomial splits in the extension")
        };
        let embed: Vec<Elem> = base
            .elements()
            .map(|a| {
                if base.degree() == 1 {
                    return a;
                }
                let mut acc = 0;
                let mut d = a;
                let mut rp = 1;
                for _ in 0..base.degree() {
                    acc = ext.add(acc, ext.mul(ext.from_int((d % p) as i64), rp));
                    d /= p;
                    rp = ext.mul(rp, root);
                }
                acc
            })
            .collect();
        let restrict = embed
            .iter()
            .enumerate()
            .map(|(a, &b)| (b, a as Elem))
            .collect();
        Ok(Self {
            base,
            ext,
            degree: n,
            embed,
            restrict,
        })
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn embed(&self, a: Elem) -> Elem {
        self.embed[a as usize]
    }

    /// Inverse of [`embed`](Self::embed) on its image.
    pub fn restrict(&self, a: Elem) -> Option<Elem> {
        self.restrict.get(&a).copied()
    }

    /// `x -> x^q` on the extension.
    pub fn frobenius(&self, a: Elem) -> Elem {
        self.ext.pow(a, self.base.order() as u64)
    }

    pub fn trace(&self, a: Elem) -> Elem {
        let mut acc = 0;
        let mut x = a;
        for _ in 0..self.degree {
            acc = self.ext.add(acc, x);
            x = self.frobenius(x);
        }
        self.restrict(acc).expect("trace lies in the base field")
    }

    pub fn norm(&self, a: Elem) -> Elem {
        let mut acc = 1;
        let mut x = a;
        for _ in 0..self.degree {
            acc = self.ext.mul(acc, x);
            x = self.frobenius(x);
        }
        self.restrict(acc).expect("norm lies in the base field")
    }
}

/// `F_q` together with the extensions `F_{q^n}` for the listed degrees.
#[derive(Debug)]
pub struct FiniteFieldTower {
    pub base: Arc<FiniteField>,
    pub extensions: Vec<FieldExtension>,
}

impl FiniteFieldTower {
    pub fn new(q: u32, degrees: &[u32]) -> Result<Self> {
        let base = FiniteField::of_order(q)?;
        let extensions = degrees
            .iter()
            .map(|&n| FieldExtension::new(base.clone(), n))
            .collect::<Result<_>>()?;
        Ok(Self { base, extensions })
    }

    pub fn extension(&self, n: u32) -> Option<&FieldExtension> {
        self.extensions.iter().find(|e| e.degree() == n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_basics() {
        let f = FiniteField::new(7, 1).unwrap();
        assert_eq!(f.generator(), 3);
        assert_eq!(f.mul(3, 5), 1);
        assert_eq!(f.inv(3), Some(5));
        assert_eq!(f.neg(2), 5);
        assert_eq!(f.pow(3, 6), 1);
    }

    #[test]
    fn generator_has_full_order() {
        for (p, k) in [(2, 2), (2, 3), (3, 2), (5, 2), (2, 4)] {
            let f = FiniteField::new(p, k).unwrap();
            let g = f.generator();
            let n = f.order() - 1;
            let mut x = 1;
            for i in 1..=n {
                x = f.mul(x, g);
                assert_eq!(x == 1, i == n, "p={p} k={k} i={i}");
            }
        }
    }

    #[test]
    fn field_axioms_exhaustive_f9() {
        let f = FiniteField::new(3, 2).unwrap();
        for a in f.elements() {
            assert_eq!(f.add(a, f.neg(a)), 0);
            if a != 0 {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            }
            for b in f.elements() {
                assert_eq!(f.mul(a, b), f.mul_slow(a, b));
                for c in f.elements() {
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
    }

    #[test]
    fn extension_embedding_is_a_homomorphism() {
        for q in [2, 3, 4, 5] {
            let tower = FiniteFieldTower::new(q, &[2, 3]).unwrap();
            for ext in &tower.extensions {
                let (b, e) = (&tower.base, &ext.ext);
                for x in b.elements() {
                    assert_eq!(ext.frobenius(ext.embed(x)), ext.embed(x));
                    for y in b.elements() {
                        assert_eq!(ext.embed(b.add(x, y)), e.add(ext.embed(x), ext.embed(y)));
                        assert_eq!(ext.embed(b.mul(x, y)), e.mul(ext.embed(x), ext.embed(y)));
                    }
                }
            }
        }
    }

    #[test]
    fn trace_and_norm() {
        let tower = FiniteFieldTower::new(2, &[2, 4]).unwrap();
        let e2 = tower.extension(2).unwrap();
        let e4 = tower.extension(4).unwrap();
        let mut hits = std::collections::HashSet::new();
        for x in e2.ext.elements() {
            hits.insert(e2.trace(x));
        }
        assert_eq!(hits.len(), 2);
        let g = e4.ext.generator();
        assert_ne!(e4.norm(g), 0);
        assert_eq!(e4.ext.pow(g, 15), 1);
    }
}
