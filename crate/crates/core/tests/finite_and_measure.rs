use std::sync::Arc;

use num_traits::One;
use whitvec::arith::CycNumber;
use whitvec::cuspidal::{cuspidal_character, RegularCharacter};
use whitvec::finite::{group_order, FiniteField, Gl2Classifier};
use whitvec::padic::scalar::rat;
use whitvec::padic::splitting_report;
use whitvec::types::{make_type, TypeParams};

fn regular(q: u64) -> impl Iterator<Item = i64> {
    (1..(q * q - 1) as i64).filter(move |k| k % (q as i64 + 1) != 0)
}

#[test]
fn every_cuspidal_character_is_certified() {
    for q in [2u32, 3, 5] {
        let mut count = 0;
        for k in regular(q as u64) {
            let theta = RegularCharacter::new(q, 2, k).unwrap();
            let chi = cuspidal_character(&theta).unwrap();
            chi.check_invariants().unwrap();
            assert_eq!(chi.inner_product(&chi).unwrap(), CycNumber::one());
            assert!(chi.unipotent_sum().is_zero());
            assert_eq!(chi.degree(), CycNumber::from_integer(q as i64 - 1));
            count += 1;
        }
        assert_eq!(count, (q * q - q) as usize);
    }
}

#[test]
fn class_equation() {
    for q in [2u32, 3, 5] {
        let f = FiniteField::new(q, 1).unwrap();
        let c = Gl2Classifier::new(Arc::clone(&f)).unwrap();
        let total: u64 = c.labels().iter().map(|l| l.class_size(q as u64)).sum();
        assert_eq!(total as u128, group_order(2, q as u64));
    }
}

#[test]
fn bessel_suites_of_types() {
    let t = make_type(&TypeParams::depth_zero(2, 1, CycNumber::one())).unwrap();
    let s = t.bessel_suite(usize::MAX, 1).unwrap();
    assert!(s.passed());
    assert_eq!((s.elements, s.pairs), (6, 36));
    for (q, k) in [(3, 1), (3, 2), (5, 1), (5, 7)] {
        let t = make_type(&TypeParams::depth_zero(q, k, CycNumber::one())).unwrap();
        let s = t.bessel_suite(200, 3).unwrap();
        assert!(s.passed(), "q = {q}, k = {k}");
        assert_eq!(s.pairs, 200);
    }
    for (p, sigma) in [(3, 1), (5, 2)] {
        let t = make_type(&TypeParams::ramified(p, sigma, CycNumber::zeta(8, 1))).unwrap();
        let s = t.bessel_suite(200, 5).unwrap();
        assert!(s.passed(), "p = {p}");
    }
}

#[test]
fn measure_normalizations() {
    for (n, q) in [(2, 2), (2, 3), (2, 5), (3, 2), (3, 3), (3, 5)] {
        let r = splitting_report(n, q).unwrap();
        assert_eq!(r.vol_g_k, rat(r.group_order as i64), "n = {n}, q = {q}");
        assert!(r.k1_volumes.iter().all(|v| v.is_one()));
        assert!(r.pk_splitting);
        assert_eq!(r.pzk_ratio, rat(q as i64 - 1));
    }
}
