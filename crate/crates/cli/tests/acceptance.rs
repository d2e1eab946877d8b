//! One line per acceptance criterion. Exits nonzero when a criterion's
//! status differs from the expected one.

use std::process::{Command, ExitCode};
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_traits::One;
use whitvec::arith::{CycNumber, EulerFactor};
use whitvec::cuspidal::{cuspidal_character, RegularCharacter};
use whitvec::lmodular::{reduce_euler_factor, verify_corollary};
use whitvec::padic::scalar::rat;
use whitvec::padic::splitting_report;
use whitvec::rankin::{
    l_factor, oracle_check, pair_evaluators, q_power, verify_main_theorem, EngineConfig,
    VerificationReport, VerifyConfig,
};
use whitvec::types::{make_type, SimpleType, TypeParams};

struct Verdict {
    ok: bool,
    detail: String,
}

fn verdict(ok: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        ok,
        detail: detail.into(),
    }
}

fn dz(q: u64, k: i64, a: CycNumber) -> Arc<SimpleType> {
    make_type(&TypeParams::depth_zero(q, k, a)).unwrap()
}

fn ram(p: u64, sigma: i64, s: i64, a: CycNumber) -> Arc<SimpleType> {
    make_type(&TypeParams::ramified(p, sigma, a).with_beta_sign(s)).unwrap()
}

fn regular(q: u64) -> Vec<i64> {
    (1..(q * q - 1) as i64)
        .filter(|k| k % (q as i64 + 1) != 0)
        .collect()
}

fn dual_partners(q: u64, k: i64) -> Vec<i64> {
    let order = (q * q - 1) as i64;
    let mut v = vec![(-k).rem_euclid(order), (-(q as i64) * k).rem_euclid(order)];
    v.dedup();
    v
}

struct Run {
    report: VerificationReport,
    elapsed: Duration,
}

fn run(t1: &Arc<SimpleType>, t2: &Arc<SimpleType>) -> Run {
    let cfg = VerifyConfig {
        bessel_pairs: 20,
        ..Default::default()
    };
    let start = Instant::now();
    let report = verify_main_theorem(t1, t2, &cfg).expect("verification runs");
    Run {
        report,
        elapsed: start.elapsed(),
    }
}

/// `I = mu (q-1)(q^{n/e}-1) L` exactly, with `mu` a power of `q`.
fn identity_holds(t1: &SimpleType, t2: &SimpleType, r: &VerificationReport) -> bool {
    let q = t1.q();
    let ne = (t1.n() / t1.e()) as u32;
    let Some(mu) =
        r.mu.as_ref()
            .and_then(|m| m.parse::<num_rational::BigRational>().ok())
    else {
        return false;
    };
    if q_power(&mu, q).is_none() {
        return false;
    }
    let l = l_factor(t1, t2, None).unwrap();
    let c =
        CycNumber::from_rational(&mu) * CycNumber::from_integer(((q - 1) * (q.pow(ne) - 1)) as i64);
    r.integral == l.to_rational().scale(&c) && r.checks.main_identity == Some(true)
}

fn mus(runs: &[(Arc<SimpleType>, Arc<SimpleType>, Run)]) -> String {
    let mut v: Vec<String> = runs
        .iter()
        .filter_map(|(_, _, r)| r.report.mu.clone())
        .collect();
    v.sort();
    v.dedup();
    v.join(", ")
}

fn criterion_1(runs: &mut Vec<(Arc<SimpleType>, Arc<SimpleType>, Run)>) -> Verdict {
    let mut bad = Vec::new();
    let mut slow = 0;
    let start = runs.len();
    for q in [2, 3, 5] {
        for k in regular(q) {
            for k2 in dual_partners(q, k) {
                let t1 = dz(q, k, CycNumber::one());
                let t2 = dz(q, k2, CycNumber::one());
                let r = run(&t1, &t2);
                let square =
                    l_factor(&t1, &t2, None).unwrap() == EulerFactor::simple(CycNumber::one(), 2);
                if !square || !identity_holds(&t1, &t2, &r.report) {
                    bad.push(format!("q={q} theta=({k},{k2})"));
                }
                if r.elapsed > Duration::from_secs(10) {
                    slow += 1;
                }
                runs.push((t1, t2, r));
            }
        }
    }
    let n = runs.len() - start;
    verdict(
        bad.is_empty() && slow == 0,
        format!(
            "{n} dual pairs, q in {{2,3,5}}, mu in {{{}}}, {slow} over 10 s {bad:?}",
            mus(&runs[start..])
        ),
    )
}

fn criterion_2(runs: &mut Vec<(Arc<SimpleType>, Arc<SimpleType>, Run)>) -> Verdict {
    let mut bad = Vec::new();
    let start = runs.len();
    for q in [2, 3, 5] {
        for k in regular(q) {
            let k2 = dual_partners(q, k)[0];
            for c in [CycNumber::from_integer(-1), CycNumber::zeta(4, 1)] {
                let t1 = dz(q, k, CycNumber::one());
                let t2 = dz(q, k2, c.clone());
                let r = run(&t1, &t2);
                let l = l_factor(&t1, &t2, None).unwrap();
                if l != EulerFactor::simple(c.clone(), 2) || !identity_holds(&t1, &t2, &r.report) {
                    bad.push(format!("q={q} theta=({k},{k2}) c={c}"));
                }
                runs.push((t1, t2, r));
            }
        }
    }
    let n = runs.len() - start;
    verdict(
        bad.is_empty(),
        format!("{n} twisted pairs, A2 in {{-1, zeta(4)}} {bad:?}"),
    )
}

fn criterion_3(runs: &mut Vec<(Arc<SimpleType>, Arc<SimpleType>, Run)>) -> Verdict {
    let mut bad = Vec::new();
    let mut worst = Duration::ZERO;
    let start = runs.len();
    for p in [3u64, 5] {
        for sigma in 0..(p as i64 - 1) {
            let s2 = (-sigma).rem_euclid(p as i64 - 1);
            for a in [CycNumber::one(), CycNumber::zeta(8, 1)] {
                let t1 = ram(p, sigma, 1, a.clone());
                let t2 = ram(p, s2, -1, CycNumber::one());
                let r = run(&t1, &t2);
                let l = l_factor(&t1, &t2, None).unwrap();
                if l != EulerFactor::simple(a.clone(), 1) || !identity_holds(&t1, &t2, &r.report) {
                    bad.push(format!("p={p} sigma={sigma} A1={a}"));
                }
                if p == 5 {
                    worst = worst.max(r.elapsed);
                }
                runs.push((t1, t2, r));
            }
        }
    }
    let n = runs.len() - start;
    verdict(
        bad.is_empty() && worst < Duration::from_secs(60),
        format!(
            "{n} dual pairs, p in {{3,5}}, mu in {{{}}}, slowest p=5 run {:.1} s {bad:?}",
            mus(&runs[start..]),
            worst.as_secs_f64()
        ),
    )
}

fn criterion_4() -> Verdict {
    let cfg = EngineConfig::default();
    let cases = [
        (dz(2, 1, CycNumber::one()), dz(2, 2, CycNumber::one())),
        (
            dz(2, 1, CycNumber::one()),
            dz(2, 2, CycNumber::from_integer(-1)),
        ),
        (dz(3, 1, CycNumber::one()), dz(3, 7, CycNumber::one())),
        (dz(3, 2, CycNumber::one()), dz(3, 6, CycNumber::zeta(4, 1))),
        (dz(3, 1, CycNumber::one()), dz(3, 2, CycNumber::one())),
        (
            ram(3, 0, 1, CycNumber::one()),
            ram(3, 0, -1, CycNumber::one()),
        ),
        (
            ram(3, 1, 1, CycNumber::zeta(8, 1)),
            ram(3, 1, -1, CycNumber::one()),
        ),
    ];
    let mut rows = 0;
    let mut bad = 0;
    for (t1, t2) in &cases {
        let (w1, w2) = pair_evaluators(t1, t2, None).unwrap();
        let r = oracle_check(&w1, &w2, &cfg, 0, 6).unwrap();
        rows += r.rows.len();
        bad += r.rows.iter().filter(|x| !x.agree).count();
    }
    verdict(
        bad == 0,
        format!(
            "{} pairs, {rows} coefficients k in [0,6], {bad} disagreements",
            cases.len()
        ),
    )
}

fn criterion_5() -> Verdict {
    let mut lines = Vec::new();
    let mut ok = true;
    let mut check = |ty: Arc<SimpleType>, pairs: usize, label: String| {
        let s = ty.bessel_suite(pairs, 7).unwrap();
        ok &= s.passed();
        lines.push(format!(
            "{label}: {} elements {} pairs",
            s.elements, s.pairs
        ));
    };
    for k in regular(2) {
        check(
            dz(2, k, CycNumber::one()),
            usize::MAX,
            format!("q=2 theta={k}"),
        );
    }
    for q in [3, 5] {
        for k in regular(q).into_iter().take(4) {
            check(dz(q, k, CycNumber::one()), 200, format!("q={q} theta={k}"));
        }
    }
    check(ram(3, 1, 1, CycNumber::one()), 200, "ramified p=3".into());
    check(ram(5, 1, 1, CycNumber::one()), 200, "ramified p=5".into());
    verdict(ok, lines.join("; "))
}

fn criterion_6(runs: &[(Arc<SimpleType>, Arc<SimpleType>, Run)]) -> Verdict {
    let points: usize = runs.iter().map(|(_, _, r)| r.report.support.points).sum();
    let violations: usize = runs
        .iter()
        .map(|(_, _, r)| {
            let s = &r.report.support;
            s.violations_1 + s.violations_2 + s.violations_3
        })
        .sum();
    verdict(
        violations == 0 && runs.iter().all(|(_, _, r)| r.report.checks.support),
        format!(
            "{} runs, {points} cell points, {violations} violations",
            runs.len()
        ),
    )
}

fn criterion_7(runs: &[(Arc<SimpleType>, Arc<SimpleType>, Run)]) -> Verdict {
    let mut bad = 0;
    for (_, _, r) in runs {
        let ok = match &r.report.diagnostics {
            Some(d) => {
                d.f_i_constant
                    && d.c_i_shape
                    && d.volume_identity
                    && d.lambda_vol.is_some()
                    && d.mu.is_some()
                    && d.u.is_some()
                    && d.mu == r.report.mu
            }
            None => false,
        };
        if !ok {
            bad += 1;
        }
    }
    verdict(
        bad == 0,
        format!("{} runs: F_i constant, c_i q^(in/e) = a^i mu (q^(n/e)-1), volumes u (q^(n/e)-1) q^(-in/e); {bad} failures", runs.len()),
    )
}

fn criterion_8() -> Verdict {
    let mut parts = Vec::new();
    let mut literal = true;
    let mut rest = true;
    for n in [2, 3] {
        for q in [2, 3, 5] {
            let r = splitting_report(n, q).unwrap();
            rest &= r.vol_g_k == rat(r.group_order as i64)
                && r.k1_volumes.iter().all(|v| v.is_one())
                && r.pk_splitting;
            literal &= r.pzk_splitting();
            parts.push(format!("n={n} q={q}: dp dz dk / dg = {}", r.pzk_ratio));
        }
    }
    verdict(
        literal && rest,
        format!(
            "vol(K) = |GL_n(F_q)|, vol(K^1) = 1 and dg = dp dk: {}; dg = dp dz dk fails: {}",
            if rest { "ok" } else { "FAIL" },
            parts.join(", ")
        ),
    )
}

fn criterion_9() -> Verdict {
    let cfg = EngineConfig::default();
    let mut ok = true;
    let mut notes = Vec::new();
    let cases = [
        (dz(2, 1, CycNumber::one()), dz(2, 2, CycNumber::one()), 5, 2),
        (dz(3, 1, CycNumber::one()), dz(3, 7, CycNumber::one()), 5, 2),
        (dz(3, 1, CycNumber::one()), dz(3, 7, CycNumber::one()), 7, 2),
        (dz(3, 2, CycNumber::one()), dz(3, 6, CycNumber::one()), 7, 2),
        (
            ram(3, 0, 1, CycNumber::one()),
            ram(3, 0, -1, CycNumber::one()),
            5,
            1,
        ),
    ];
    for (t1, t2, ell, deg) in &cases {
        let r = verify_corollary(t1, t2, *ell, 0, None, &cfg).unwrap();
        let expected = reduce_euler_factor(&EulerFactor::simple(CycNumber::one(), *deg), *ell, 0)
            .unwrap()
            .to_string();
        let good = r.matches && r.commutes && r.integral_values && r.reduced_factor == expected;
        ok &= good;
        notes.push(format!("q={} ell={ell}: {}", t1.q(), r.reduced_factor));
    }
    let status = Command::new(env!("CARGO_BIN_EXE_whitvec"))
        .args(["reduce", "--q", "2", "--theta", "1", "--ell", "3"])
        .output()
        .expect("binary runs")
        .status
        .code();
    ok &= status == Some(3);
    notes.push(format!("q=2 ell=3 exit {status:?}"));
    verdict(ok, notes.join("; "))
}

fn criterion_10() -> Verdict {
    let mut count = 0;
    let mut bad = 0;
    for q in [2u32, 3, 5] {
        for k in regular(q as u64) {
            let chi = cuspidal_character(&RegularCharacter::new(q, 2, k).unwrap()).unwrap();
            count += 1;
            if chi.check_invariants().is_err() {
                bad += 1;
            }
        }
    }
    verdict(
        bad == 0,
        format!("{count} characters, q in {{2,3,5}}, {bad} failures"),
    )
}

fn main() -> ExitCode {
    let mut runs = Vec::new();
    let title = [
        "main theorem, depth zero",
        "main theorem, twisted",
        "main theorem, ramified GL2",
        "oracle equivalence",
        "Bessel identities",
        "support propositions",
        "coefficient diagnostics",
        "measure consistency",
        "l-modular corollary",
        "cuspidal characters",
    ];
    // Criterion 8 cannot hold: dp dz dk is (q-1) dg under the volume
    // normalizations, so it is expected to stay red.
    let expected = [true, true, true, true, true, true, true, false, true, true];
    let results = vec![
        criterion_1(&mut runs),
        criterion_2(&mut runs),
        criterion_3(&mut runs),
        criterion_4(),
        criterion_5(),
        criterion_6(&runs),
        criterion_7(&runs),
        criterion_8(),
        criterion_9(),
        criterion_10(),
    ];
    let mut unexpected = 0;
    for (i, v) in results.iter().enumerate() {
        let tag = if v.ok { "PASS" } else { "FAIL" };
        let note = if v.ok == expected[i] {
            ""
        } else {
            " (unexpected)"
        };
        if v.ok != expected[i] {
            unexpected += 1;
        }
        println!(
            "criterion {:>2} {tag}{note}: {}: {}",
            i + 1,
            title[i],
            v.detail
        );
    }
    let passed = results.iter().filter(|v| v.ok).count();
    println!("acceptance: {passed}/10 pass, {unexpected} unexpected");
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
