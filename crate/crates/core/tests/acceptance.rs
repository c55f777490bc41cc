//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::f64::consts::PI;
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use frobtrace::densities::{self, DistributionModel};
use frobtrace::ec::{self, CurveSpec};
use frobtrace::equidist;
use frobtrace::experiments::{self, SequenceSource};
use frobtrace::poly::{self, IntPolynomial, SalemReason};

const THETA_DIGITS: &str = "0.9827937232473290679857106110146660144";

struct Outcome {
    ok: bool,
    detail: String,
}

fn check(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        ok,
        detail: detail.into(),
    }
}

fn curve(a: i64, b: i64) -> CurveSpec {
    CurveSpec::new(a, b).unwrap()
}

fn fixture_angle() -> ec::FrobeniusAngle {
    let pc = ec::count_points(&curve(1, 1), 13).unwrap();
    ec::frobenius_angle(pc.trace, 13).unwrap()
}

fn within(elapsed: Duration, limit: Duration) -> (bool, String) {
    (elapsed < limit, format!("{:.3} ms (limit {:.0} ms)", elapsed.as_secs_f64() * 1e3, limit.as_secs_f64() * 1e3))
}

fn c1() -> Outcome {
    let t = Instant::now();
    let pc = ec::count_points(&curve(1, 1), 13).unwrap();
    let count_time = t.elapsed();
    let angle = ec::frobenius_angle(4, 13).unwrap();
    let digits = angle.theta().to_decimal(37);
    let matching = digits
        .chars()
        .zip(THETA_DIGITS.chars())
        .take_while(|(a, b)| a == b)
        .filter(|(c, _)| c.is_ascii_digit())
        .count()
        - 1;
    let (fast, timing) = within(count_time, Duration::from_millis(1));
    check(
        pc.count == 18 && pc.trace == -4 && pc.character_sum == 4 && matching >= 30 && fast,
        format!(
            "#E={} a1={} char_sum={} theta={} ({} significant digits match), count {}",
            pc.count, pc.trace, pc.character_sum, digits, matching, timing
        ),
    )
}

fn c2() -> Outcome {
    let t = Instant::now();
    let angle = fixture_angle();
    let exact = ec::trace_powers(angle.a1(), 13, 40).unwrap();
    let seq = ec::normalized_trace_sequence(&angle, 40).unwrap();
    let mut worst = 0.0f64;
    for n in 1..=40u32 {
        let e = ec::normalized_from_exact(&exact[n as usize], 13, n, 256);
        worst = worst.max((e - seq.values()[n as usize - 1]).abs());
    }
    let (fast, timing) = within(t.elapsed(), Duration::from_secs(1));
    check(worst < 1e-9 && fast, format!("max |exact - float| = {worst:.3e} over n <= 40, {timing}"))
}

fn weyl_at(k: i64) -> (f64, f64, Duration) {
    let t = Instant::now();
    let seq = ec::normalized_trace_sequence(&fixture_angle(), 1_000_000).unwrap();
    let w = equidist::weyl_sum(&seq, k).unwrap();
    (w.sum_real, densities::bessel_j0(2.0 * PI * k as f64).unwrap(), t.elapsed())
}

fn c3a() -> Outcome {
    let (v, j0, el) = weyl_at(1);
    let (fast, timing) = within(el, Duration::from_secs(10));
    check(
        (v - j0).abs() < 0.02 && (j0 - 0.22027).abs() < 1e-5 && fast,
        format!("k=1: weyl={v:.6} J0(2pi)={j0:.6} |diff|={:.2e}, {timing}", (v - j0).abs()),
    )
}

fn c3b() -> Outcome {
    let (v, j0, el) = weyl_at(2);
    let (fast, timing) = within(el, Duration::from_secs(10));
    check(
        v < 0.0 && (v - (-0.0429)).abs() < 0.02 && fast,
        format!(
            "k=2: weyl={v:.6} (required negative, within 0.02 of -0.0429); J0(4pi)={j0:.6}, {timing}"
        ),
    )
}

fn c4() -> Outcome {
    let t = Instant::now();
    let seq = ec::normalized_trace_sequence(&fixture_angle(), 100_000).unwrap();
    let ks_arc = equidist::ks_distance(&seq, &DistributionModel::Arcsine).unwrap();
    let ks_uni = equidist::ks_distance(&seq, &DistributionModel::uniform(-1.0, 1.0).unwrap()).unwrap();
    let (fast, timing) = within(t.elapsed(), Duration::from_secs(5));
    check(
        ks_arc < 0.01 && (ks_uni - 0.1056).abs() <= 0.01 && fast,
        format!("KS vs arcsine={ks_arc:.5} KS vs uniform={ks_uni:.5}, {timing}"),
    )
}

fn c5() -> Outcome {
    let t = Instant::now();
    let ladder = [1_000, 10_000, 100_000];
    let trace = experiments::discrepancy_ladder(&SequenceSource::UnitTrace(fixture_angle()), &ladder, 10).unwrap();
    let golden = experiments::discrepancy_ladder(&SequenceSource::golden_rotation(), &ladder, 10).unwrap();
    let plateau = trace.points.iter().all(|r| (r.d_star - 0.1056).abs() <= 0.015);
    let flat = trace.trend_exponent.is_some_and(|e| e > -0.1 && e < 0.1);
    let decays = golden.trend_exponent.is_some_and(|e| e < -0.8);
    let et = trace
        .points
        .iter()
        .chain(golden.points.iter())
        .all(|r| r.et_bound >= r.d_star);
    let (fast, timing) = within(t.elapsed(), Duration::from_secs(30));
    let ds: Vec<String> = trace.points.iter().map(|r| format!("{:.5}", r.d_star)).collect();
    check(
        plateau && flat && decays && et && fast,
        format!(
            "trace D*=[{}] exponent={:.4} golden exponent={:.4} ET>=D* {et}, {timing}",
            ds.join(", "),
            trace.trend_exponent.unwrap_or(f64::NAN),
            golden.trend_exponent.unwrap_or(f64::NAN)
        ),
    )
}

fn c6() -> Outcome {
    let t = Instant::now();
    let r = experiments::prime_sweep(&curve(-1, 0), 10_000).unwrap();
    let f = r.supersingular_fraction().unwrap_or(f64::NAN);
    let (fast, timing) = within(t.elapsed(), Duration::from_secs(60));
    check(
        (f - 0.5).abs() <= 0.05 && fast,
        format!("supersingular fraction={f:.4} over {} good primes, {timing}", r.prime_count),
    )
}

fn c7() -> Outcome {
    let t = Instant::now();
    let r = experiments::prime_sweep(&curve(1, 1), 10_000).unwrap();
    let ks = experiments::sweep_ks(&r, &DistributionModel::Semicircle).unwrap();
    let (fast, timing) = within(t.elapsed(), Duration::from_secs(60));
    check(ks < 0.1 && fast, format!("KS vs semicircle={ks:.4} over {} primes, {timing}", r.prime_count))
}

fn c8() -> Outcome {
    let t = Instant::now();
    let r = experiments::fixed_prime_distribution(&curve(0, 1), 5, 10_000).unwrap();
    let others = r.n as u64 - r.plus_one - r.minus_one - (r.zero_fraction * r.n as f64).round() as u64;
    let balanced = r.plus_one.abs_diff(r.minus_one) <= 1;
    let (fast, timing) = within(t.elapsed(), Duration::from_secs(1));
    check(
        r.zero_fraction == 0.5 && others == 0 && balanced && fast,
        format!(
            "a1={} zero_fraction={} +1:{} -1:{} other:{others}, {timing}",
            r.a1, r.zero_fraction, r.plus_one, r.minus_one
        ),
    )
}

fn bisect_tau() -> f64 {
    let f = |x: f64| x.powi(4) - x.powi(3) - x * x - x + 1.0;
    let (mut lo, mut hi) = (1.5, 2.0);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn c9() -> Outcome {
    let t = Instant::now();
    let salem = IntPolynomial::from_descending(&[1, -1, -1, -1, 1]).unwrap();
    let v = poly::salem_classify(&salem);
    let oracle = bisect_tau();
    let tau_ok = v.is_salem && v.tau.is_some_and(|tau| (tau - oracle).abs() <= 1e-4);
    let rejected = |n: u32| {
        let p = poly::shift_constant(&poly::cyclotomic(n).unwrap(), -3).unwrap();
        let v = poly::salem_classify(&p);
        !v.is_salem
            && v.reasons
                .iter()
                .any(|r| matches!(r, SalemReason::NoRealRootGt1 | SalemReason::ConjugateOutsideDisk))
    };
    let (r5, r13) = (rejected(5), rejected(13));
    let m = poly::power_mod1_sequence(&salem, 10_000).unwrap();
    let ks = equidist::ks_distance(&m.sequence, &DistributionModel::uniform(0.0, 1.0).unwrap()).unwrap();
    let h = equidist::histogram(&m.sequence, 20, 0.0, 1.0).unwrap();
    let dense = h.counts.iter().all(|&c| c > 0);
    let (fast, timing) = within(t.elapsed(), Duration::from_secs(5));
    check(
        tau_ok && r5 && r13 && m.certified == 10_000 && ks > 0.02 && dense && fast,
        format!(
            "tau={:?} (bisection {oracle:.8}) reject Phi5-3:{r5} Phi13-3:{r13} certified={} KS={ks:.4} min bin={}, {timing}",
            v.tau,
            m.certified,
            h.counts.iter().min().unwrap()
        ),
    )
}

fn c10() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let (mut compared, mut mismatched) = (0usize, 0usize);
    for _ in 0..25 {
        let deg = rng.gen_range(1..=8usize);
        let mut coeffs: Vec<i64> = (0..deg).map(|_| rng.gen_range(-5..=5)).collect();
        coeffs.push(1);
        let p = IntPolynomial::new(coeffs).unwrap();
        let exact = poly::newton_power_sums(&p, 30).unwrap();
        let Ok(rs) = p.roots() else { continue };
        for (n, s) in exact.iter().enumerate() {
            let mut sum = Complex64::new(0.0, 0.0);
            let mut bound = 0.0;
            for (z, r) in rs.roots().iter().zip(rs.radii()) {
                let zn = z.powu(n as u32);
                sum += zn;
                let m = z.norm() + r;
                bound += (m.powi(n as i32) - z.norm().powi(n as i32)) + 4.0 * f64::EPSILON * (n as f64 + 1.0) * m.powi(n as i32);
            }
            if bound < 0.5 {
                compared += 1;
                if BigInt::from(sum.re.round() as i64) != *s || s.to_f64().is_none() {
                    mismatched += 1;
                }
            }
        }
    }
    let (fast, timing) = within(t.elapsed(), Duration::from_secs(5));
    check(
        compared > 0 && mismatched == 0 && fast,
        format!("{compared} power sums compared, {mismatched} mismatches, {timing}"),
    )
}

fn c11() -> Outcome {
    let t = Instant::now();
    let mut worst = 0.0f64;
    for z in [0.5, 1.0, 2.0 * PI, 10.0] {
        let m = 10_000;
        let h = PI / m as f64;
        let f = |w: f64| (z * w.cos()).cos();
        let mut s = f(0.0) + f(PI);
        for i in 1..m {
            s += f(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        let integral = s * h / 3.0 / PI;
        worst = worst.max((densities::bessel_j0(z).unwrap() - integral).abs());
    }
    let (fast, timing) = within(t.elapsed(), Duration::from_secs(1));
    check(worst < 1e-8 && fast, format!("max |J0 - quadrature| = {worst:.3e}, {timing}"))
}

fn c12() -> Outcome {
    let t = Instant::now();
    let mut worst = 0.0f64;
    for z in [0.0, 0.5, -0.5, 0.99, -0.99] {
        worst = worst.max((densities::gen_arcsine_limit_check(1000, z).unwrap() - 0.5).abs());
    }
    let (fast, timing) = within(t.elapsed(), Duration::from_millis(1));
    check(worst < 1e-3 && fast, format!("max |f_1000(z) - 1/2| = {worst:.3e}, {timing}"))
}

fn cli_cases() -> Vec<Vec<&'static str>> {
    vec![
        vec!["trace-seq", "--curve", "1,1", "-p", "13", "-N", "2000"],
        vec!["point-count", "--curve", "1,1", "-p", "1009"],
        vec!["angle", "--a1", "4", "-p", "13"],
        vec!["weyl", "--curve", "1,1", "-p", "13", "-N", "200000", "-k", "1"],
        vec!["summatory", "--curve", "1,1", "-p", "13", "-k", "1", "--ladder", "100,1000,10000"],
        vec!["discrepancy", "--curve", "1,1", "-p", "13", "--ladder", "1000,10000"],
        vec!["discrepancy", "--source", "golden", "--ladder", "1000,10000", "--format", "json"],
        vec!["ks", "--curve", "1,1", "-p", "13", "-N", "50000", "--model", "arcsine"],
        vec!["histogram", "--curve", "1,1", "-p", "13", "-N", "50000", "--bins", "50"],
        vec!["density", "--model", "gen-arcsine", "--d", "12"],
        vec!["salem", "--poly", "1,-1,-1,-1,1", "-N", "5000"],
        vec!["power-sums", "--poly", "1,-1,-1,-1,1", "-N", "40"],
        vec!["sweep", "--curve", "1,1", "-X", "5000"],
        vec!["sato-tate", "--curve", "1,1", "-X", "5000", "--a", "-0.5", "--b", "0.5", "--model", "semicircle"],
        vec!["lang-trotter", "--curve", "1,1", "-X", "5000", "-r", "0"],
        vec!["fixed-prime", "--curve", "0,1", "-p", "5", "-N", "5000"],
    ]
}

fn c13() -> Outcome {
    let t = Instant::now();
    let bin = env!("CARGO_BIN_EXE_frobtrace");
    let mut failures = Vec::new();
    let cases = cli_cases();
    for args in &cases {
        let mut outputs = Vec::new();
        for threads in ["1", "8", "1", "8"] {
            let out = Command::new(bin).args(args).args(["--threads", threads]).output().unwrap();
            if !out.status.success() {
                failures.push(format!("{} exited {}", args[0], out.status));
            }
            outputs.push(out.stdout);
        }
        if outputs.windows(2).any(|w| w[0] != w[1]) || outputs[0].is_empty() {
            failures.push(format!("{} output differs", args[0]));
        }
    }
    let (fast, timing) = within(t.elapsed(), Duration::from_secs(60));
    check(
        failures.is_empty() && fast,
        format!("{} invocations x4 runs; problems: {:?}, {timing}", cases.len(), failures),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 14] = [
        ("1 point-count fixture and angle digits", c1),
        ("2 exact/float coherence", c2),
        ("3a Weyl limit k=1", c3a),
        ("3b Weyl limit k=2 negative", c3b),
        ("4 dense but not equidistributed", c4),
        ("5 discrepancy ladder", c5),
        ("6 CM supersingular split", c6),
        ("7 Sato-Tate shape", c7),
        ("8 fixed-prime supersingular pattern", c8),
        ("9 Salem suite", c9),
        ("10 Newton identities", c10),
        ("11 Bessel integral identity", c11),
        ("12 generalized arcsine limit", c12),
        ("13 CLI determinism", c13),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let o = f();
        if !o.ok {
            failed += 1;
        }
        println!("{} criterion {name}: {}", if o.ok { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
