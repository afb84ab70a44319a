use std::collections::BTreeSet;

use num_bigint::BigInt;
use proptest::prelude::*;
use vdclab::pet::*;

fn cv(v: &[u64]) -> CharacteristicVector {
    CharacteristicVector::new(v.to_vec()).unwrap()
}

/// Lexicographic from the top degree after comparing lengths.
fn oracle_less(a: &[u64], b: &[u64]) -> bool {
    if a.len() != b.len() {
        return a.len() < b.len();
    }
    for j in (0..a.len()).rev() {
        if a[j] != b[j] {
            return a[j] < b[j];
        }
    }
    false
}

fn vector() -> impl Strategy<Value = Vec<u64>> {
    (prop::collection::vec(0u64..4, 0..5), 1u64..4).prop_map(|(mut v, top)| {
        v.push(top);
        v
    })
}

/// Characteristic vector of integer polynomials by direct class counting.
fn oracle_cv(members: &[IntPolynomial]) -> Vec<u64> {
    let classes: BTreeSet<(usize, BigInt)> = members
        .iter()
        .map(|p| (p.degree().unwrap(), p.leading().unwrap().clone()))
        .collect();
    let d = classes.iter().map(|c| c.0).max().unwrap();
    let mut v = vec![0u64; d];
    for (deg, _) in classes {
        v[deg - 1] += 1;
    }
    v
}

fn family_strategy() -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(
        (1usize..=3).prop_flat_map(|deg| {
            (prop::collection::vec(-3i64..=3, deg), prop::sample::select(vec![-3i64, -2, -1, 1, 2, 3])).prop_map(
                |(mut low, lead)| {
                    low.push(lead);
                    low
                },
            )
        }),
        1..=4,
    )
}

fn no_constant_differences(f: &[Vec<i64>]) -> bool {
    let tails: BTreeSet<Vec<i64>> = f.iter().map(|c| c[1..].to_vec()).collect();
    tails.len() == f.len()
}

#[test]
fn reference_vectors() {
    let f = PolyFamily::parse("x;2x-1;3x;x^3+2x^2;x^3+1").unwrap();
    assert_eq!(characteristic_vector(&f).unwrap().to_string(), "(3,0,1)");
    assert!(cv_less(&cv(&[1, 2, 3]), &cv(&[0, 0, 0, 1])));
    assert!(cv_less(&cv(&[9, 3, 5, 2, 4]), &cv(&[1, 7, 6, 2, 4])));
}

proptest! {
    #[test]
    fn cv_less_is_strict_total_order(a in vector(), b in vector(), c in vector()) {
        let (x, y, z) = (cv(&a), cv(&b), cv(&c));
        prop_assert_eq!(cv_less(&x, &y), oracle_less(&a, &b));
        prop_assert!(!cv_less(&x, &x));
        if a != b {
            prop_assert!(cv_less(&x, &y) ^ cv_less(&y, &x));
        }
        if cv_less(&x, &y) && cv_less(&y, &z) {
            prop_assert!(cv_less(&x, &z));
        }
    }

    #[test]
    fn cv_ignores_constants(f in family_strategy(), shifts in prop::collection::vec(-50i64..50, 4)) {
        prop_assume!(no_constant_differences(&f));
        let base: Vec<IntPolynomial> = f.iter().map(|c| IntPolynomial::from_i64(c)).collect();
        let moved: Vec<IntPolynomial> = f
            .iter()
            .zip(&shifts)
            .map(|(c, s)| {
                let mut c = c.clone();
                c[0] += s;
                IntPolynomial::from_i64(&c)
            })
            .collect();
        let a = characteristic_vector(&PolyFamily::from_int(&base).unwrap()).unwrap();
        let b = characteristic_vector(&PolyFamily::from_int(&moved).unwrap()).unwrap();
        prop_assert_eq!(a.entries(), &oracle_cv(&base)[..]);
        prop_assert_eq!(a, b);
    }

    #[test]
    fn reduction_matches_specialization(f in family_strategy(), h in 1000i64..1_000_000) {
        prop_assume!(no_constant_differences(&f));
        let base: Vec<IntPolynomial> = f.iter().map(|c| IntPolynomial::from_i64(c)).collect();
        let family = PolyFamily::from_int(&base).unwrap();
        prop_assume!(!characteristic_vector(&family).unwrap().is_base());
        let r = reduce_family(&family, None).unwrap();
        prop_assert!(cv_less(&r.after, &r.before));
        let specialized: Vec<IntPolynomial> = r
            .family
            .members()
            .iter()
            .map(|p| p.specialize(&[h]))
            .collect();
        prop_assert_eq!(r.after.entries(), &oracle_cv(&specialized)[..]);
    }
}

#[test]
fn constant_difference_is_rejected() {
    let f = PolyFamily::parse("x^2;x^2+3").unwrap();
    assert!(matches!(reduce_family(&f, None), Err(vdclab::Error::Precondition(_))));
}

#[test]
fn short_chains_terminate() {
    for (text, len) in [("n^2", 2), ("n", 1)] {
        let c = descent_chain(&PolyFamily::parse(text).unwrap()).unwrap();
        assert!(c.terminated && c.is_strictly_decreasing());
        assert_eq!(c.len(), len);
    }
    let c = descent_chain(&PolyFamily::parse("n;n^2;2n^2").unwrap()).unwrap();
    assert!(c.terminated && c.is_strictly_decreasing());
}
