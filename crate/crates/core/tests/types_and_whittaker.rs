use std::sync::Arc;

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use whitvec::arith::CycNumber;
use whitvec::padic::scalar::{p_pow, rat, ratio};
use whitvec::padic::{theta_eval, PadicMatrix};
use whitvec::types::{
    make_type, support_decompose, varpi_power, whittaker_eval, Family, SimpleType, TypeParams,
    WhittakerEvaluator,
};
use whitvec::Error;

fn dz(q: u64, k: i64) -> Arc<SimpleType> {
    make_type(&TypeParams::depth_zero(q, k, CycNumber::one())).unwrap()
}

fn ram(p: u64, sigma: i64, a: CycNumber) -> Arc<SimpleType> {
    make_type(&TypeParams::ramified(p, sigma, a)).unwrap()
}

fn n_of(x: BigRational) -> PadicMatrix {
    PadicMatrix::unipotent(2, &[x])
}

fn random_scalar(rng: &mut ChaCha8Rng, p: u64, lo: i64, hi: i64) -> BigRational {
    let den = [1, 2, 5, 7, 11][rng.gen_range(0..5)];
    let den = if (den as u64).is_multiple_of(p) {
        1
    } else {
        den
    };
    ratio(rng.gen_range(-40..40), den) * p_pow(p, rng.gen_range(lo..=hi))
}

#[test]
fn construction_examples() {
    let t = dz(2, 1);
    assert_eq!((t.e(), t.level(), t.family()), (1, 1, Family::DepthZero));
    let t = ram(3, 0, CycNumber::one());
    assert_eq!((t.e(), t.family()), (2, Family::Ramified));
    assert!(matches!(
        make_type(&TypeParams::depth_zero(3, 4, CycNumber::one())),
        Err(Error::NotRegular)
    ));
}

#[test]
fn psi_examples() {
    let u = n_of(rat(1));
    assert_eq!(
        dz(3, 1).psi_t(1).eval(&PadicMatrix::identity(2)).unwrap(),
        CycNumber::one()
    );
    assert_eq!(dz(3, 1).psi_t(1).eval(&u).unwrap(), CycNumber::zeta(3, 1));
    assert_eq!(
        ram(3, 0, CycNumber::one()).psi_t(1).eval(&u).unwrap(),
        CycNumber::zeta(9, 1)
    );
    assert_eq!(
        theta_eval(&ratio(1, 3), 3, 2).unwrap(),
        CycNumber::zeta(9, 1)
    );
    assert_eq!(theta_eval(&rat(3), 3, 2).unwrap(), CycNumber::one());
}

#[test]
fn bessel_examples() {
    let t = dz(2, 1);
    let one = PadicMatrix::identity(2);
    assert_eq!(t.bessel(1, 0, &one).unwrap(), CycNumber::one());
    let u = PadicMatrix::from_ints(2, &[1, 1, 0, 1]);
    assert_eq!(t.bessel(1, 0, &u).unwrap(), CycNumber::from_integer(-1));
    let z8 = CycNumber::zeta(8, 1);
    let r = ram(3, 0, z8.clone());
    assert_eq!(r.bessel(1, 1, &one).unwrap(), z8);
    assert_eq!(whittaker_eval(&r, 1, r.varpi_e()).unwrap(), z8);
}

#[test]
fn support_and_whittaker_examples() {
    let t = dz(2, 1);
    let one = PadicMatrix::identity(2);
    let s = support_decompose(&t, &one).unwrap().unwrap();
    assert_eq!(
        (s.i, s.u.clone(), s.j0.clone()),
        (0, one.clone(), one.clone())
    );
    let d = PadicMatrix::diag(&[rat(2), rat(1)]);
    assert!(support_decompose(&t, &d).unwrap().is_none());
    assert_eq!(whittaker_eval(&t, 1, &one).unwrap(), CycNumber::one());
    assert!(whittaker_eval(&t, 1, &d).unwrap().is_zero());
    assert_eq!(
        whittaker_eval(&t, 1, &PadicMatrix::scalar(2, rat(2))).unwrap(),
        CycNumber::one()
    );
    let r = ram(3, 0, CycNumber::one());
    let s = support_decompose(&r, r.varpi_e()).unwrap().unwrap();
    assert_eq!((s.i, s.u, s.j0), (1, one.clone(), one));
}

/// `W(u g) = psi(u) W(g)` on random invertible `g`, 500 trials per family.
#[test]
fn equivariance_random_trials() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let families: [Vec<Arc<SimpleType>>; 2] = [
        vec![dz(2, 1), dz(3, 2), dz(5, 7)],
        vec![
            ram(3, 1, CycNumber::zeta(8, 1)),
            ram(5, 2, CycNumber::one()),
        ],
    ];
    for types in families {
        let (mut nonzero, mut done, mut trial) = (0, 0, 0usize);
        while done < 500 {
            trial += 1;
            let ty = &types[trial % types.len()];
            let p = ty.p();
            let sign = ty.beta_sign();
            let w = if trial % 2 == 0 {
                WhittakerEvaluator::model(ty.clone(), sign).unwrap()
            } else {
                WhittakerEvaluator::contragredient(ty.clone(), sign).unwrap()
            };
            let psi = w.simple_type().psi_t(w.psi_sign());
            let reps = ty.j_reps();
            let g = if trial % 3 == 0 {
                let j = &reps[rng.gen_range(0..reps.len())];
                n_of(random_scalar(&mut rng, p, 0, 2))
                    .mul(&varpi_power(ty, rng.gen_range(-2..3)))
                    .mul(j)
            } else {
                loop {
                    let e: Vec<BigRational> =
                        (0..4).map(|_| random_scalar(&mut rng, p, -1, 2)).collect();
                    let g = PadicMatrix::new(2, e);
                    if g.inverse().is_some() {
                        break g;
                    }
                }
            };
            let u = n_of(random_scalar(&mut rng, p, -1, 3));
            let (base, moved, pu) = match (w.eval(&g), w.eval(&u.mul(&g)), psi.eval(&u)) {
                (Ok(a), Ok(b), Ok(c)) => (a, b, c),
                (Err(Error::DepthExceeded { .. }), _, _)
                | (_, Err(Error::DepthExceeded { .. }), _)
                | (_, _, Err(Error::DepthExceeded { .. })) => continue,
                (a, b, c) => panic!("{a:?} {b:?} {c:?}"),
            };
            done += 1;
            if !base.is_zero() {
                nonzero += 1;
            }
            assert_eq!(moved, pu * base);
        }
        assert!(nonzero > 100, "{nonzero} nonzero values of {trial}");
    }
}
