use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use vdclab::adeles::*;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn small_adele() -> impl Strategy<Value = FiniteAdele> {
    (
        (-50i64..50, 1i64..40),
        (-20i64..20, 1i64..30),
        prop::collection::vec((prop::sample::select(vec![2u64, 3, 5, 7, 11]), -30i64..30, 0u32..4), 0..3),
    )
        .prop_map(|((rn, rd), (tn, td), ex)| {
            let mut x = FiniteAdele::diagonal(&rat(tn, td)).unwrap();
            x = x.add(&FiniteAdele::archimedean(rat(rn, rd) - rat(tn, td)));
            for (p, k, e) in ex {
                let v = rat(k, (p as i64).pow(e));
                x = x.add(&FiniteAdele::at_prime(p, v).unwrap());
            }
            x
        })
}

proptest! {
    #[test]
    fn phi_kills_diagonal(n in -1_000_000_000i64..=1_000_000_000, d in 1i64..=1_000_000_000) {
        prop_assert!(phi(&FiniteAdele::diagonal(&rat(n, d)).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn phi_is_additive(a in small_adele(), b in small_adele()) {
        let lhs = phi(&a.add(&b)).unwrap();
        let rhs = ktilde_add(&phi(&a).unwrap(), &phi(&b).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn ktilde_group_laws(a in small_adele(), b in small_adele(), c in small_adele()) {
        let (a, b, c) = (phi(&a).unwrap(), phi(&b).unwrap(), phi(&c).unwrap());
        let ab_c = ktilde_add(&ktilde_add(&a, &b).unwrap(), &c).unwrap();
        let a_bc = ktilde_add(&a, &ktilde_add(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(ab_c, a_bc);
        prop_assert_eq!(ktilde_add(&a, &b).unwrap(), ktilde_add(&b, &a).unwrap());
        prop_assert_eq!(ktilde_add(&a, &KTildeElement::zero()).unwrap(), a.clone());
        let inv = phi(&a.adele().neg()).unwrap();
        prop_assert!(ktilde_add(&a, &inv).unwrap().is_zero());
    }

    #[test]
    fn p_fractional_postcondition(n in -1_000_000i64..1_000_000, d in 1i64..1_000_000, pi in 0usize..25) {
        let primes = vdclab::arith::primes_up_to(97);
        let p = primes[pi];
        let q = rat(n, d);
        let y = p_fractional(&q, p).unwrap();
        let pb = BigInt::from(p);
        // q - y is p-integral
        let diff = &q - &y;
        prop_assert!(!diff.denom().is_multiple_of(&pb));
        // y in [0, 1) with a p-power denominator
        prop_assert!(!y.is_negative() && y < BigRational::one());
        let mut den = y.denom().clone();
        while den.is_multiple_of(&pb) {
            den /= &pb;
        }
        prop_assert!(den.is_one());
    }
}

/// `N! = 2^a m`, `m` odd.
fn split_factorial(level: u32) -> (u32, u128) {
    let mut f: u128 = (1..=level as u128).product();
    let mut a = 0;
    while f.is_multiple_of(2) {
        f /= 2;
        a += 1;
    }
    (a, f)
}

fn inverse_mod_pow2(m: u128, bits: u32) -> u128 {
    let modulus = 1u128 << bits;
    let mut x = 1u128;
    for _ in 0..7 {
        x = x.wrapping_mul(2u128.wrapping_sub(m.wrapping_mul(x))) % modulus;
    }
    assert_eq!(m * x % modulus, 1);
    x
}

/// Direct average of `e(f_2(k^deg / (2 N!^deg)))` over `|k| <= N·N!`.
fn oracle_average(level: u32, deg: u32) -> f64 {
    let (a, m) = split_factorial(level);
    let bits = deg * a + 1;
    let modulus = 1u128 << bits;
    let inv = inverse_mod_pow2(m.pow(deg) % modulus, bits);
    let fact: i128 = (1..=level as i128).product();
    let span = level as i128 * fact;
    let mut acc = Complex64::zero();
    for k in -span..=span {
        let kk = k.rem_euclid(modulus as i128) as u128;
        let c = kk.pow(deg) % modulus * inv % modulus;
        let t = c as f64 / modulus as f64;
        acc += Complex64::from_polar(1.0, std::f64::consts::TAU * t);
    }
    (acc / (2 * span + 1) as f64).norm()
}

fn alpha() -> FiniteAdele {
    FiniteAdele::at_prime(2, rat(1, 2)).unwrap()
}

#[test]
fn linear_weyl_matches_character_sum() {
    let mut last = f64::INFINITY;
    for level in [4u32, 6, 8] {
        let g = AdelicPolynomial::monomial(alpha(), 1);
        let rep = adelic_weyl_average(&g, &BigRational::one(), &folner_rationals(level).unwrap()).unwrap();
        let fact: u64 = (1..=level as u64).product();
        let closed = 1.0 / (2 * level as u64 * fact + 1) as f64;
        assert!((rep.magnitude - oracle_average(level, 1)).abs() < 1e-9);
        assert!((rep.magnitude - closed).abs() < 1e-9);
        assert!(rep.magnitude < last);
        last = rep.magnitude;
    }
    assert!(last < 0.2);
}

#[test]
fn quadratic_weyl_matches_character_sum() {
    for level in [4u32, 6, 8] {
        let g = AdelicPolynomial::monomial(alpha(), 2);
        let rep = adelic_weyl_average(&g, &BigRational::one(), &folner_rationals(level).unwrap()).unwrap();
        let want = oracle_average(level, 2);
        assert!((rep.magnitude - want).abs() < 1e-9, "level {level}: {} vs {want}", rep.magnitude);
        if level == 8 {
            assert!(rep.magnitude < 0.3);
        }
    }
}

#[test]
fn folner_shift_ratio() {
    let f = folner_rationals(6).unwrap();
    let sd = f.shift_symmetric_difference(&rat(1, 3));
    // shifting by 240/720 moves 240 points out at each end
    assert_eq!(sd, 480);
    assert_eq!(f.len(), 2 * 6 * 720 + 1);
}
