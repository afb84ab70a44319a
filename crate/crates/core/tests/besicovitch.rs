use num_complex::Complex64;
use proptest::prelude::*;
use vdclab::besicovitch::*;
use vdclab::ipcomb::syndetic_gap;
use vdclab::real::Real;

fn squarefree_by_trial_division(n: u64) -> bool {
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d * d) {
            return false;
        }
        d += 1;
    }
    true
}

#[test]
fn squarefree_counts_and_gap() {
    let sf = squarefree_indicator(10_000).unwrap();
    for n in 1..=10_000 {
        assert_eq!(sf.contains(n), squarefree_by_trial_division(n), "n = {n}");
    }
    assert_eq!(squarefree_indicator(100).unwrap().count(), 61);
    // longest run of non-squarefree integers, plus one
    let mut run = 0u64;
    let mut longest = 0u64;
    for n in 1..=10_000 {
        run = if squarefree_by_trial_division(n) { 0 } else { run + 1 };
        longest = longest.max(run);
    }
    assert_eq!(syndetic_gap(&sf.bits), Some(longest + 1));
    assert_eq!(longest, 5);
    assert!((844..=848).all(|n| !sf.contains(n)));
}

#[test]
fn qfree_with_prime_squares_is_squarefree() {
    let n = 50_000;
    let squares: Vec<u64> = vdclab::arith::primes_up_to(250).iter().map(|p| p * p).collect();
    let q = qfree_indicator(&squares, n).unwrap();
    assert_eq!(q.bits, squarefree_indicator(n).unwrap().bits);
}

#[test]
fn squarefree_density() {
    let d = squarefree_indicator(1_000_000).unwrap().density();
    assert!((d - 6.0 / std::f64::consts::PI.powi(2)).abs() < 0.002);
}

fn isqrt_u128(n: u128) -> u128 {
    let mut r = (n as f64).sqrt() as u128;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

#[test]
fn beatty_sqrt2_matches_integer_floor() {
    let n = 100_000u64;
    let ind = beatty_indicator(&Real::parse("sqrt2").unwrap(), n).unwrap();
    let mut want = vec![false; n as usize + 1];
    for k in 1u128.. {
        let v = isqrt_u128(2 * k * k);
        if v > n as u128 {
            break;
        }
        want[v as usize] = true;
    }
    for m in 1..=n {
        assert_eq!(ind.contains(m), want[m as usize], "m = {m}");
    }
}

#[test]
fn beatty_dual_methods_agree() {
    for alpha in ["sqrt2", "phi", "3/2", "e", "pi", "7/3"] {
        let a = Real::parse(alpha).unwrap();
        let ind = beatty_indicator(&a, 100_000).unwrap();
        assert_eq!(ind.bits, beatty_criterion_bits(&a, 100_000).unwrap(), "{alpha}");
    }
}

proptest! {
    #[test]
    fn beatty_rational_dual(p in 2u64..200, q in 1u64..200) {
        prop_assume!(p > q);
        let a = Real::parse(&format!("{p}/{q}")).unwrap();
        let ind = beatty_indicator(&a, 5_000).unwrap();
        for m in 1..=5_000u64 {
            // m = ⌊kp/q⌋ for some k iff ⌈mq/p⌉ · p / q < m + 1
            let k = (m * q).div_ceil(p);
            prop_assert_eq!(ind.contains(m), k * p / q == m);
        }
    }
}

#[test]
fn rational_approximation_bound() {
    let n = 1_000_000u64;
    let f = squarefree_indicator(n).unwrap().as_complex();
    for m in [2u64, 3, 5] {
        let approx = rational_approximation(&IndicatorSource::Squarefree, m, n).unwrap();
        let dist = besicovitch_distance(&f, &approx.poly).unwrap();
        assert!(dist <= approx.error_bound + 1e-9, "M = {m}: {dist} > {}", approx.error_bound);
        let want: f64 = vdclab::arith::primes_up_to(m).iter().map(|&p| 1.0 - 1.0 / (p * p) as f64).product();
        assert!((approx.density - want).abs() < 1e-12);
    }
}

#[test]
fn distance_to_density_constant() {
    let n = 1_000_000;
    let f = squarefree_indicator(n).unwrap().as_complex();
    let d = 6.0 / std::f64::consts::PI.powi(2);
    let dist = besicovitch_distance(&f, &TrigPolynomial::constant(d)).unwrap();
    assert!((dist - 2.0 * d * (1.0 - d)).abs() < 2e-3, "{dist}");
    let ones: Vec<Complex64> = vec![Complex64::new(1.0, 0.0); 100];
    assert_eq!(besicovitch_distance(&ones, &TrigPolynomial::constant(1.0)).unwrap(), 0.0);
}
