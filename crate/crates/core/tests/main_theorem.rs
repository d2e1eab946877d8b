use std::sync::Arc;
use std::time::{Duration, Instant};

use whitvec::arith::{euler_normalize, CycNumber, EulerFactor};
use whitvec::rankin::{
    l_factor, oracle_check, pair_evaluators, q_power, rankin_selberg_i, verify_main_theorem,
    EngineConfig, Phi, VerifyConfig,
};
use whitvec::types::{make_type, SimpleType, TypeParams};

fn dz(q: u64, k: i64, a: CycNumber) -> Arc<SimpleType> {
    make_type(&TypeParams::depth_zero(q, k, a)).unwrap()
}

fn ram(p: u64, sigma: i64, s: i64, a: CycNumber) -> Arc<SimpleType> {
    make_type(&TypeParams::ramified(p, sigma, a).with_beta_sign(s)).unwrap()
}

fn regular(q: u64) -> impl Iterator<Item = i64> {
    (1..(q * q - 1) as i64).filter(move |k| k % (q as i64 + 1) != 0)
}

fn dual_partners(q: u64, k: i64) -> Vec<i64> {
    let order = (q * q - 1) as i64;
    let mut v = vec![(-k).rem_euclid(order), (-(q as i64) * k).rem_euclid(order)];
    v.dedup();
    v
}

/// `I = mu (q-1)(q^{n/e}-1) L` with `mu` a power of `q`; returns the exponent.
fn check_identity(t1: &Arc<SimpleType>, t2: &Arc<SimpleType>, twist: Option<&CycNumber>) -> i64 {
    let (w1, w2) = pair_evaluators(t1, t2, twist).unwrap();
    let rs = rankin_selberg_i(&w1, &w2, Phi::LatticeIndicator, &EngineConfig::default()).unwrap();
    let l = l_factor(t1, t2, twist).unwrap();
    let (factor, c, shift) = euler_normalize(&rs.value).unwrap();
    assert_eq!(shift, 0);
    assert_eq!(factor, l);
    let q = t1.q();
    let ne = (t1.n() / t1.e()) as u32;
    let mu = (c / CycNumber::from_integer(((q - 1) * (q.pow(ne) - 1)) as i64))
        .as_rational()
        .expect("rational scalar");
    let expected = l.to_rational().scale(
        &(CycNumber::from_rational(&mu)
            * CycNumber::from_integer(((q - 1) * (q.pow(ne) - 1)) as i64)),
    );
    assert_eq!(rs.value, expected);
    q_power(&mu, q).expect("mu is a power of q")
}

#[test]
fn depth_zero_dual_pairs() {
    for q in [2, 3, 5] {
        for k in regular(q) {
            for k2 in dual_partners(q, k) {
                let start = Instant::now();
                let t1 = dz(q, k, CycNumber::one());
                let t2 = dz(q, k2, CycNumber::one());
                check_identity(&t1, &t2, None);
                assert_eq!(
                    l_factor(&t1, &t2, None).unwrap(),
                    EulerFactor::simple(CycNumber::one(), 2)
                );
                assert!(start.elapsed() < Duration::from_secs(10));
            }
        }
    }
}

#[test]
fn depth_zero_twisted_pairs() {
    for q in [2, 3, 5] {
        for k in regular(q) {
            let k2 = dual_partners(q, k)[0];
            for c in [CycNumber::from_integer(-1), CycNumber::zeta(4, 1)] {
                let t1 = dz(q, k, CycNumber::one());
                let t2 = dz(q, k2, c.clone());
                check_identity(&t1, &t2, None);
                assert_eq!(
                    l_factor(&t1, &t2, None).unwrap(),
                    EulerFactor::simple(c.clone(), 2)
                );
            }
        }
    }
}

#[test]
fn ramified_dual_pairs() {
    for p in [3u64, 5] {
        for sigma in 0..(p as i64 - 1) {
            let s2 = (-sigma).rem_euclid(p as i64 - 1);
            for (a1, a2) in [
                (CycNumber::one(), CycNumber::one()),
                (CycNumber::zeta(8, 1), CycNumber::zeta(8, 1)),
            ] {
                let start = Instant::now();
                let t1 = ram(p, sigma, 1, a1.clone());
                let t2 = ram(p, s2, -1, a2.clone());
                let mu = check_identity(&t1, &t2, None);
                assert_eq!(
                    l_factor(&t1, &t2, None).unwrap(),
                    EulerFactor::simple(a1 * a2, 1)
                );
                assert_eq!(mu, 1, "mu = q at p = {p}");
                assert!(start.elapsed() < Duration::from_secs(60));
            }
        }
    }
}

#[test]
fn ramified_same_sign_partner_is_normalized() {
    let t1 = ram(5, 1, 1, CycNumber::one());
    let t2 = ram(5, 3, 1, CycNumber::one());
    check_identity(&t1, &t2, None);
}

#[test]
fn non_dual_pairs_give_trivial_factor() {
    let t1 = dz(3, 1, CycNumber::one());
    let t2 = dz(3, 1, CycNumber::one());
    assert!(l_factor(&t1, &t2, None).unwrap().is_trivial());
    let r = verify_main_theorem(&t1, &t2, &VerifyConfig::default()).unwrap();
    assert!(!r.applicable);
}

#[test]
fn oracle_agrees_on_small_fields() {
    let cfg = EngineConfig::default();
    let cases = vec![
        (dz(2, 1, CycNumber::one()), dz(2, 2, CycNumber::one())),
        (dz(3, 1, CycNumber::one()), dz(3, 7, CycNumber::one())),
        (
            dz(3, 2, CycNumber::one()),
            dz(3, 2, CycNumber::from_integer(-1)),
        ),
        (
            ram(3, 0, 1, CycNumber::one()),
            ram(3, 0, -1, CycNumber::one()),
        ),
        (
            ram(3, 1, 1, CycNumber::one()),
            ram(3, 1, -1, CycNumber::zeta(4, 1)),
        ),
    ];
    for (t1, t2) in cases {
        let (w1, w2) = pair_evaluators(&t1, &t2, None).unwrap();
        let rep = oracle_check(&w1, &w2, &cfg, 0, 6).unwrap();
        assert_eq!(rep.rows.len(), 7);
        assert!(rep.all_agree, "{rep:?}");
    }
}

#[test]
fn full_reports_pass() {
    let cfg = VerifyConfig {
        oracle: Some((0, 4)),
        bessel_pairs: 50,
        ..Default::default()
    };
    let cases = vec![
        (dz(2, 1, CycNumber::one()), dz(2, 2, CycNumber::one())),
        (dz(5, 1, CycNumber::one()), dz(5, 19, CycNumber::one())),
        (
            ram(3, 1, 1, CycNumber::one()),
            ram(3, 1, -1, CycNumber::one()),
        ),
    ];
    for (t1, t2) in cases {
        let r = verify_main_theorem(&t1, &t2, &cfg).unwrap();
        assert!(r.passed, "{:?}", r.notes);
        assert_eq!(
            r.support.violations_1 + r.support.violations_2 + r.support.violations_3,
            0
        );
        let d = r.diagnostics.as_ref().unwrap();
        assert!(d.f_i_constant && d.c_i_shape && d.volume_identity);
    }
}

#[test]
fn ramified_p5_verify_under_a_minute() {
    let start = Instant::now();
    let t1 = ram(5, 1, 1, CycNumber::one());
    let t2 = ram(5, 3, -1, CycNumber::one());
    let r = verify_main_theorem(&t1, &t2, &VerifyConfig::default()).unwrap();
    assert!(r.passed, "{:?}", r.notes);
    assert!(start.elapsed() < Duration::from_secs(60));
}
