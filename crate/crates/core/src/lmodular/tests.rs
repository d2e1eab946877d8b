use super::*;
use crate::arith::reduce_mod_ell;
use crate::types::{make_type, TypeParams};

fn dz(q: u64, k: i64) -> Arc<SimpleType> {
    make_type(&TypeParams::depth_zero(q, k, CycNumber::one())).unwrap()
}

fn ram(p: u64, sigma: i64, s: i64) -> Arc<SimpleType> {
    make_type(&TypeParams::ramified(p, sigma, CycNumber::one()).with_beta_sign(s)).unwrap()
}

#[test]
fn banality_examples() {
    let v = banal_check(&dz(2, 1), 3).unwrap();
    assert_eq!((v.witness, v.banal), (0, false));
    let v = banal_check(&dz(2, 1), 5).unwrap();
    assert_eq!((v.witness, v.banal), (3, true));
    let v = banal_check(&ram(3, 0, 1), 5).unwrap();
    assert_eq!((v.witness, v.banal, v.e), (4, true, 2));
    assert_eq!(banal_check(&dz(2, 1), 2), Err(Error::EllEqualsP(2)));
    assert_eq!(banal_check(&dz(2, 1), 4), Err(Error::BadEll(4)));
}

#[test]
fn reduce_factor_examples() {
    let l = EulerFactor::simple(CycNumber::one(), 2);
    let r = reduce_euler_factor(&l, 5, 0).unwrap();
    assert_eq!(
        r.to_string(),
        "1 / ((1) + (4)*X^2)".replace(
            "(4)",
            &format!(
                "({})",
                reduce_mod_ell(&CycNumber::from_integer(-1), 5, 0).unwrap()
            )
        )
    );
    let l = EulerFactor::simple(CycNumber::zeta(3, 1), 1);
    let r = reduce_euler_factor(&l, 7, 0).unwrap();
    let z = reduce_mod_ell(&CycNumber::zeta(3, 1), 7, 0).unwrap();
    assert!(matches!(z.as_prime_field(), Some(2 | 4)));
    assert_eq!(r.inverse_poly().coeff(1).unwrap(), &z.neg_ref());
    let l = EulerFactor::simple(CycNumber::from_ratio(1, 7), 1);
    assert_eq!(
        reduce_euler_factor(&l, 7, 0).unwrap_err(),
        Error::NotIntegralAtEll { ell: 7 }
    );
}

#[test]
fn corollary_cases() {
    let cfg = EngineConfig::default();
    let r = verify_corollary(&dz(2, 1), &dz(2, 2), 5, 0, None, &cfg).unwrap();
    assert!(r.matches, "{r:?}");
    for ell in [5, 7] {
        let r = verify_corollary(&dz(3, 1), &dz(3, 7), ell, 0, None, &cfg).unwrap();
        assert!(r.matches, "{r:?}");
    }
    let r = verify_corollary(&ram(3, 0, 1), &ram(3, 0, -1), 5, 0, None, &cfg).unwrap();
    assert!(r.matches, "{r:?}");
    assert!(matches!(
        verify_corollary(&dz(2, 1), &dz(2, 2), 3, 0, None, &cfg),
        Err(Error::NonBanal { ell: 3, witness: 0 })
    ));
    let c = CycNumber::zeta(4, 1);
    let r = verify_corollary(&ram(3, 1, 1), &ram(3, 1, -1), 5, 1, Some(&c), &cfg).unwrap();
    assert!(r.matches, "{r:?}");
}
