use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;
use vdclab::equidist::*;
use vdclab::sequences::{sample_mod1, SequenceSpec};
use vdclab::vdc::*;

const SQRT2_Q64: u64 = 0x6a09e667f3bcc908;
const PHI_Q64: u64 = 0x9e3779b97f4a7c15;

/// `frac(c · m)` from a 64-bit fixed-point fractional part of `c`.
fn fixed_frac(c_q64: u64, m: u128) -> f64 {
    (m.wrapping_mul(c_q64 as u128) as u64) as f64 / 2f64.powi(64)
}

fn direct_average(points: &[f64], h: i64) -> Complex64 {
    points.iter().map(|&x| Complex64::cis(TAU * h as f64 * x)).sum::<Complex64>() / points.len() as f64
}

#[test]
fn quadratic_weyl_sum_matches_oracle() {
    let n = 100_000;
    let pts = sample_mod1(&"poly:0,0,sqrt2".parse::<SequenceSpec>().unwrap(), n).unwrap();
    let oracle: Vec<f64> = (1..=n as u128).map(|k| fixed_frac(SQRT2_Q64, k * k)).collect();
    for h in 1..=5 {
        let got = weyl_sum(&pts, h).unwrap();
        let want = direct_average(&oracle, h);
        assert!((got - want).norm() < 1e-9, "h = {h}");
        assert!(got.norm() < 0.02);
    }
}

fn brute_star_discrepancy(points: &[f64]) -> f64 {
    let n = points.len() as f64;
    let mut worst = 0.0f64;
    for &t in points {
        let below = points.iter().filter(|&&x| x < t).count() as f64;
        let upto = points.iter().filter(|&&x| x <= t).count() as f64;
        worst = worst.max((below / n - t).abs()).max((upto / n - t).abs());
    }
    worst
}

#[test]
fn star_discrepancy_matches_brute_force() {
    for n in [1usize, 2, 17, 400, 1000] {
        let pts: Vec<f64> = (1..=n as u128).map(|k| fixed_frac(PHI_Q64, k)).collect();
        let got = star_discrepancy(&pts).unwrap().d_star;
        assert!((got - brute_star_discrepancy(&pts)).abs() < 1e-12, "n = {n}");
    }
    let golden = sample_mod1(&SequenceSpec::linear("phi").unwrap(), 10_000).unwrap();
    assert!(star_discrepancy(&golden).unwrap().d_star < 5e-3);
}

#[test]
fn windows_match_naive_scan() {
    let spec: SequenceSpec = "lin:phi+log".parse().unwrap();
    let pts = sample_mod1(&spec, 3000).unwrap();
    let (window, m_max) = (200, 2500);
    let mags = window_magnitudes(&pts, 1, window, m_max).unwrap();
    assert_eq!(mags.len(), m_max + 1);
    for m in (0..=m_max).step_by(97) {
        let want = direct_average(&pts[m..m + window], 1).norm();
        assert!((mags[m] - want).abs() < 1e-9);
    }
}

proptest! {
    #[test]
    fn vdc_gap_nonnegative(seed in any::<u64>(), n in 1usize..300, d in 1usize..40) {
        prop_assume!(n >= d);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u: Vec<Complex64> = (0..n + d)
            .map(|_| Complex64::from_polar(rng.gen::<f64>(), TAU * rng.gen::<f64>()))
            .collect();
        let r = vdc_inequality_gap(&u, n, d, 1.0).unwrap();
        prop_assert!(r.gap >= -1e-9);
    }
}

#[test]
fn vdc_sides_match_direct_sums() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (n, d) = (500, 13);
    let u: Vec<Complex64> = (0..n + d).map(|_| Complex64::new(rng.gen(), rng.gen()) * 0.5).collect();
    let r = vdc_inequality_gap(&u, n, d, 1.0).unwrap();
    let inner: Vec<Complex64> = (1..=n)
        .map(|k| (1..=d).map(|j| u[k + j - 1]).sum::<Complex64>() / d as f64)
        .collect();
    let lhs = (inner.iter().sum::<Complex64>() / n as f64).norm_sqr();
    let rhs = inner.iter().map(|z| z.norm_sqr()).sum::<f64>() / n as f64;
    assert!((r.lhs - lhs).abs() < 1e-12 && (r.rhs - rhs).abs() < 1e-12);
}

/// `∫_0^τ e^{i√s} ds = 2[−iU e^{iU} + e^{iU} − 1]`, `U = √τ`.
fn sqrt_phase_integral(tau: f64) -> Complex64 {
    let u = tau.sqrt();
    let e = Complex64::cis(u);
    2.0 * (-Complex64::i() * u * e + e - 1.0)
}

#[test]
fn simpson_matches_closed_form() {
    for tau in [1.0, 100.0, 10_000.0] {
        let got = simpson_average(|s| Ok(Complex64::cis(s.sqrt())), tau, 20_000).unwrap();
        let want = sqrt_phase_integral(tau) / tau;
        assert!((got - want).norm() < 1e-4, "tau = {tau}: {got} vs {want}");
    }
}

#[test]
fn change_of_variable_matches_closed_form() {
    let tau = 10_000.0;
    let r = change_of_variable_gap(&ComplexFn::unit_circle(), &SequenceSpec::power(0.5), tau, 0.05).unwrap();
    let direct = (Complex64::cis(tau) - 1.0) / Complex64::i();
    let want = ((direct - sqrt_phase_integral(tau)) / tau).norm();
    assert!((r.gap - want).abs() < 1e-4, "{} vs {want}", r.gap);
    assert!(r.gap < 0.05);
}

#[test]
fn simpson_error_shrinks_with_step() {
    // smooth integrand e^{is} on [1, 2] shifted to start at 0
    let f = |s: f64| Ok(Complex64::cis(s + 1.0));
    let exact = (Complex64::cis(2.0) - Complex64::cis(1.0)) / Complex64::i();
    let e1 = (simpson_average(f, 1.0, 8).unwrap() - exact).norm();
    let e2 = (simpson_average(f, 1.0, 16).unwrap() - exact).norm();
    assert!(e1 / e2 >= 4.0, "{e1} {e2}");
}
