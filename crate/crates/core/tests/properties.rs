use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use frobtrace::densities::{self, Cdf, DistributionModel};
use frobtrace::ec::{self, CurveSpec};
use frobtrace::equidist::{self, EmpiricalCdf};
use frobtrace::experiments;
use frobtrace::poly::{self, IntPolynomial};
use frobtrace::sequence::RealSequence;

const SMALL_PRIMES: &[u64] = &[
    5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
    101, 211, 307, 401, 509, 601, 701, 809, 907, 1009, 1201, 1499, 1999,
];

fn good_curve_and_prime() -> impl Strategy<Value = (CurveSpec, u64)> {
    (-50i64..50, -50i64..50, prop::sample::select(SMALL_PRIMES)).prop_filter_map(
        "singular or bad reduction",
        |(a, b, p)| {
            let c = CurveSpec::new(a, b).ok()?;
            c.good_reduction(p).ok()?.then_some((c, p))
        },
    )
}

fn naive_count(c: &CurveSpec, p: u64) -> u64 {
    let (a, b) = (c.a().rem_euclid(p as i64) as u64, c.b().rem_euclid(p as i64) as u64);
    let mut n = 1;
    for x in 0..p {
        let rhs = (x * x % p * x + a * x + b) % p;
        n += (0..p).filter(|y| y * y % p == rhs).count() as u64;
    }
    n
}

fn unit(values: Vec<f64>) -> RealSequence {
    RealSequence::new(values, 1, (0.0, 1.0), "test").unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn hasse_bound_holds((c, p) in good_curve_and_prime()) {
        let pc = ec::count_points(&c, p).unwrap();
        prop_assert!(pc.satisfies_hasse());
        prop_assert!((pc.trace * pc.trace) as u64 <= 4 * p);
    }

    #[test]
    fn count_matches_pair_enumeration((c, p) in good_curve_and_prime()) {
        prop_assume!(p < 400);
        let pc = ec::count_points(&c, p).unwrap();
        prop_assert_eq!(pc.count, naive_count(&c, p));
        prop_assert_eq!(pc.character_sum, -pc.trace);
    }

    #[test]
    fn doubling_identity((c, p) in good_curve_and_prime(), n in 1u32..30) {
        let a1 = ec::count_points(&c, p).unwrap().trace;
        let a = ec::trace_powers(a1, p, 2 * n).unwrap();
        let pn = BigInt::from(p).pow(n);
        prop_assert_eq!(&a[2 * n as usize], &(&a[n as usize] * &a[n as usize] - 2 * pn));
    }

    #[test]
    fn exact_and_float_traces_agree((c, p) in good_curve_and_prime()) {
        let a1 = ec::count_points(&c, p).unwrap().trace;
        let angle = ec::frobenius_angle(a1, p).unwrap();
        let exact = ec::trace_powers(a1, p, 40).unwrap();
        for n in 1..=40u32 {
            let e = ec::normalized_from_exact(&exact[n as usize], p, n, 256);
            prop_assert!((e - angle.cos_multiple(n as u64)).abs() < 1e-9);
        }
    }

    #[test]
    fn roots_have_small_exact_residuals(coeffs in prop::collection::vec(-6i64..=6, 1..7)) {
        let mut c = coeffs;
        c.push(1);
        let p = IntPolynomial::new(c.clone()).unwrap();
        let rs = p.roots().unwrap();
        prop_assert_eq!(rs.len(), p.degree());
        for z in rs.roots() {
            let zr = Complex::new(
                BigRational::from_float(z.re).unwrap(),
                BigRational::from_float(z.im).unwrap(),
            );
            let mut acc: Complex<BigRational> = Complex::new(BigRational::zero(), BigRational::zero());
            for &k in c.iter().rev() {
                acc = acc * zr.clone() + Complex::new(BigRational::from_integer(k.into()), BigRational::zero());
            }
            let re = acc.re.abs().to_f64().unwrap();
            let im = acc.im.abs().to_f64().unwrap();
            prop_assert!(re.hypot(im) <= 1e-9 * p.magnitude_scale(*z).max(1.0));
        }
    }

    #[test]
    fn roots_are_closed_under_conjugation(coeffs in prop::collection::vec(-6i64..=6, 1..7)) {
        let mut c = coeffs;
        c.push(1);
        let p = IntPolynomial::new(c).unwrap();
        let rs = p.roots().unwrap();
        for (i, z) in rs.roots().iter().enumerate() {
            let tol = rs.radii()[i].max(1e-9);
            prop_assert!(rs.roots().iter().any(|w| (w - z.conj()).norm() <= 2.0 * tol));
        }
    }

    #[test]
    fn newton_sums_match_float_sums(coeffs in prop::collection::vec(-3i64..=3, 1..6)) {
        let mut c = coeffs;
        c.push(1);
        let p = IntPolynomial::new(c).unwrap();
        let exact = poly::newton_power_sums(&p, 12).unwrap();
        let rs = p.roots().unwrap();
        for (n, s) in exact.iter().enumerate() {
            let f: Complex64 = rs.roots().iter().map(|z| z.powu(n as u32)).sum();
            // Each root lies within its inclusion radius of a true root.
            let bound: f64 = rs
                .roots()
                .iter()
                .zip(rs.radii())
                .map(|(z, r)| {
                    let m = z.norm() + r;
                    m.powi(n as i32) - z.norm().powi(n as i32) + 1e-13 * m.powi(n as i32).max(1.0)
                })
                .sum();
            let s = s.to_f64().unwrap();
            prop_assert!((f.re - s).abs() <= bound, "n={} float={} exact={} bound={}", n, f.re, s, bound);
        }
    }

    #[test]
    fn erdos_turan_dominates_discrepancy(v in prop::collection::vec(0.0f64..=1.0, 1..300), h in 1u32..20) {
        let s = unit(v);
        prop_assert!(equidist::erdos_turan_bound(&s, h).unwrap() >= equidist::star_discrepancy(&s).unwrap());
    }

    #[test]
    fn discrepancy_ignores_order(v in prop::collection::vec(0.0f64..=1.0, 1..300), seed in any::<u64>()) {
        let mut w = v.clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for i in (1..w.len()).rev() {
            w.swap(i, rng.gen_range(0..=i));
        }
        prop_assert_eq!(
            equidist::star_discrepancy(&unit(v)).unwrap(),
            equidist::star_discrepancy(&unit(w)).unwrap()
        );
    }

    #[test]
    fn weyl_modulus_at_most_one(v in prop::collection::vec(-1.0f64..=1.0, 1..300), k in 1i64..50) {
        let s = RealSequence::new(v, 1, (-1.0, 1.0), "t").unwrap();
        let w = equidist::weyl_sum(&s, k).unwrap();
        prop_assert!(w.modulus <= 1.0);
    }

    #[test]
    fn ks_against_own_empirical_law(v in prop::collection::vec(0.0f64..=1.0, 1..300)) {
        let s = unit(v);
        let e = EmpiricalCdf::new(&s);
        prop_assert!(equidist::ks_distance(&s, &e).unwrap() <= 1.0 / s.len() as f64 + 1e-15);
    }

    #[test]
    fn histogram_partitions_samples(v in prop::collection::vec(-2.0f64..=2.0, 0..300), bins in 1usize..40) {
        let s = RealSequence::new(v, 1, (-2.0, 2.0), "t").unwrap();
        let h = equidist::histogram(&s, bins, -1.0, 1.0).unwrap();
        prop_assert_eq!(h.counts.iter().sum::<u64>() as usize, h.total as usize);
        prop_assert_eq!(h.total as usize + h.underflow as usize + h.overflow as usize, s.len());
    }

    #[test]
    fn cdf_derivative_is_pdf(t in -0.95f64..0.95, scale in 1.0f64..50.0) {
        for m in [
            DistributionModel::Arcsine,
            DistributionModel::Semicircle,
            DistributionModel::gen_arcsine_scaled(scale).unwrap(),
            DistributionModel::uniform(-1.0, 1.0).unwrap(),
        ] {
            let h = 1e-6;
            let d = (m.cdf(t + h).unwrap() - m.cdf(t - h).unwrap()) / (2.0 * h);
            let f = m.pdf(t).unwrap();
            prop_assert!((d - f).abs() < 1e-5 * f, "{:?} at {}", m, t);
        }
    }
}

#[test]
fn densities_integrate_to_one() {
    // z = -cos s removes the endpoint singularities.
    for m in [
        DistributionModel::Arcsine,
        DistributionModel::Semicircle,
        DistributionModel::gen_arcsine(4).unwrap(),
        DistributionModel::gen_arcsine(12).unwrap(),
        DistributionModel::uniform(-1.0, 1.0).unwrap(),
    ] {
        let n = 4000;
        let h = PI / n as f64;
        let g = |s: f64| {
            let z = -s.cos();
            if s == 0.0 || s == PI {
                if m == DistributionModel::Arcsine {
                    1.0 / PI
                } else {
                    0.0
                }
            } else {
                m.pdf(z).unwrap() * s.sin()
            }
        };
        let mut acc = g(0.0) + g(PI);
        for i in 1..n {
            acc += g(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        let total = acc * h / 3.0;
        assert!((total - 1.0).abs() < 1e-8, "{m:?}: {total}");
        assert_eq!(m.cdf(1.0).unwrap(), 1.0);
    }
}

#[test]
fn bessel_is_continuous_across_the_seam() {
    let below = densities::bessel_j0(12.0 - 1e-12).unwrap();
    let above = densities::bessel_j0(12.0 + 1e-12).unwrap();
    assert!((below - above).abs() < 1e-9);
    for (z, want) in [
        (11.5, -0.067653948111665228),
        (12.0, 0.047689310796833537),
        (12.5, 0.14688405470042110),
        (6.0 * PI, 0.12906351943681890),
    ] {
        assert!((densities::bessel_j0(z).unwrap() - want).abs() < 1e-10, "J0({z})");
    }
}

#[test]
fn cosine_pushes_uniform_to_arcsine() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let v: Vec<f64> = (0..100_000).map(|_| (2.0 * PI * rng.gen::<f64>()).cos()).collect();
    let s = RealSequence::new(v, 1, (-1.0, 1.0), "cos(2 pi U)").unwrap();
    assert!(equidist::ks_distance(&s, &DistributionModel::Arcsine).unwrap() < 0.01);
}

#[test]
fn weyl_sums_approach_bessel_limit() {
    let c = CurveSpec::new(1, 1).unwrap();
    for p in [13u64, 101, 1009] {
        let a1 = ec::count_points(&c, p).unwrap().trace;
        assert_ne!(a1, 0);
        let seq = ec::normalized_trace_sequence(&ec::frobenius_angle(a1, p).unwrap(), 200_000).unwrap();
        for k in 1..=3 {
            let w = equidist::weyl_sum(&seq, k).unwrap();
            let j0 = densities::weyl_limit(k).unwrap();
            assert!((w.sum_real - j0).abs() < 0.02 && w.sum_imag.abs() < 0.02, "p={p} k={k}");
        }
    }
}

#[test]
fn sweep_is_thread_count_invariant() {
    let c = CurveSpec::new(2, 3).unwrap();
    let one = experiments::prime_sweep_with_threads(&c, 20_000, 1).unwrap();
    let many = experiments::prime_sweep_with_threads(&c, 20_000, 6).unwrap();
    assert_eq!(one, many);
    assert_eq!(one.bad_primes(), vec![5, 11]);
}

#[test]
fn lang_trotter_counts_partition_the_primes() {
    let c = CurveSpec::new(1, 1).unwrap();
    let sweep = experiments::prime_sweep(&c, 5_000).unwrap();
    let bound = 2 * (5_000f64).sqrt() as i64 + 2;
    let total: u64 = (-bound..=bound)
        .map(|r| experiments::lang_trotter_counts(&sweep, r).count)
        .sum();
    assert_eq!(total as usize, sweep.prime_count);
}

#[test]
fn supersingular_angle_cycles_with_period_four() {
    let angle = ec::frobenius_angle(0, 1_000_003).unwrap();
    assert!(angle.is_supersingular());
    for n in 1..=400u64 {
        let want = [1.0, 0.0, -1.0, 0.0][(n % 4) as usize];
        assert_eq!(angle.cos_multiple(n), want);
    }
}

#[test]
fn summatory_sums_are_bounded_by_length() {
    let c = CurveSpec::new(3, 7).unwrap();
    let a1 = ec::count_points(&c, 97).unwrap().trace;
    let angle = ec::frobenius_angle(a1, 97).unwrap();
    for k in [-2, 1, 3] {
        for pt in experiments::summatory_check(&angle, k, &[1, 10, 100, 1000, 10_000]).unwrap() {
            assert!(pt.sum_real.hypot(pt.sum_imag) <= pt.x as f64 * (1.0 + 1e-12));
        }
    }
}

#[test]
fn salem_numbers_survive_reversal() {
    // Salem polynomials are self-reciprocal, so reversal leaves the verdict unchanged.
    for c in [&[1, -1, -1, -1, 1][..], &[1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1]] {
        let p = IntPolynomial::from_descending(c).unwrap();
        let a = poly::salem_classify(&p);
        let b = poly::salem_classify(&p.reversed().unwrap());
        assert!(a.is_salem, "{p}");
        assert_eq!(a, b);
    }
}

#[test]
fn arcsine_cdf_is_the_cosine_pushforward() {
    let n = 10_000;
    let v: Vec<f64> = (0..n).map(|i| -((i as f64 + 0.5) * PI / n as f64).cos()).collect();
    let s = RealSequence::new(v, 1, (-1.0, 1.0), "grid").unwrap();
    let e = EmpiricalCdf::new(&s);
    for i in 0..=200 {
        let t = -1.0 + i as f64 / 100.0;
        let gap = (e.cdf(t).unwrap() - DistributionModel::Arcsine.cdf(t).unwrap()).abs();
        assert!(gap <= 1.0 / (2.0 * n as f64) + 1e-12, "t={t} gap={gap}");
    }
}

#[test]
fn sato_tate_fractions_partition() {
    let sweep = experiments::prime_sweep(&CurveSpec::new(1, 1).unwrap(), 3_000).unwrap();
    let cuts = [-1.0, -0.6180339887, -0.3141592653, 0.2718281828, 0.7345678912, 1.0];
    let m = DistributionModel::Semicircle;
    let (emp, pred) = cuts.windows(2).fold((0.0, 0.0), |(e, p), w| {
        let r = experiments::sato_tate_test(&sweep, w[0], w[1], &m).unwrap();
        (e + r.empirical, p + r.predicted)
    });
    assert!((emp - 1.0).abs() < 1e-12);
    assert!((pred - 1.0).abs() < 1e-12);
}

#[test]
fn single_point_discrepancy() {
    for x in [0.0, 0.25, 0.5, 0.9, 1.0] {
        let d = equidist::star_discrepancy(&unit(vec![x])).unwrap();
        assert!((d - x.max(1.0 - x)).abs() < 1e-15, "x={x} d={d}");
    }
}
