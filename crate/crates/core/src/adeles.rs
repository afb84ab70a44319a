//! Exact arithmetic on finite-support adeles over ℚ.
//!
//! An adele is stored as a rational real part, a rational `tail` used at every
//! prime not listed, and a finite map of exceptional primes. Every prime
//! dividing the tail's denominator must be listed, so the tail is `p`-integral
//! at all unlisted primes.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use serde_json::{Map, Value};

use crate::accum;
use crate::arith::is_prime;
use crate::error::{arg, Error, Result};
use crate::real::{format_rational, parse_rational, rational_to_f64, ModOnePoly};

/// Largest supported Følner level.
pub const MAX_FOLNER_LEVEL: u32 = 12;

/// `p`-adic valuation; `PlusInfinity` for zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Valuation {
    Finite(i64),
    PlusInfinity,
}

fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        arg(format!("{p} is not prime"))
    }
}

/// Exponent of `p` in `n` and the cofactor.
fn split_power(n: &BigInt, p: &BigInt) -> (i64, BigInt) {
    let mut n = n.clone();
    let mut k = 0;
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            return (k, n);
        }
        n = q;
        k += 1;
    }
}

pub fn p_valuation(q: &BigRational, p: u64) -> Result<Valuation> {
    check_prime(p)?;
    if q.is_zero() {
        return Ok(Valuation::PlusInfinity);
    }
    let p = BigInt::from(p);
    let (a, _) = split_power(q.numer(), &p);
    let (b, _) = split_power(q.denom(), &p);
    Ok(Valuation::Finite(a - b))
}

fn p_fractional_unchecked(q: &BigRational, p: u64) -> BigRational {
    let pb = BigInt::from(p);
    let (k, b) = split_power(q.denom(), &pb);
    if k == 0 {
        return BigRational::zero();
    }
    let pk = pb.pow(k as u32);
    let inv = b.extended_gcd(&pk).x.mod_floor(&pk);
    let y = (q.numer() * inv).mod_floor(&pk);
    BigRational::new(y, pk)
}

/// The `y ∈ [0, 1)` with `p`-power denominator such that `q − y` is `p`-integral.
pub fn p_fractional(q: &BigRational, p: u64) -> Result<BigRational> {
    check_prime(p)?;
    Ok(p_fractional_unchecked(q, p))
}

/// Distinct prime factors of a positive integer.
pub fn prime_factors(n: &BigInt) -> Result<Vec<u64>> {
    if let Some(m) = n.to_u64() {
        return Ok(num_prime::nt_funcs::factorize64(m).into_keys().collect());
    }
    if let Some(m) = n.to_u128() {
        return num_prime::nt_funcs::factorize128(m)
            .into_keys()
            .map(|p| {
                u64::try_from(p).map_err(|_| Error::Resource(format!("prime factor {p} exceeds 64 bits")))
            })
            .collect();
    }
    Err(Error::Resource(format!("cannot factor denominators beyond 128 bits ({n})")))
}

fn den_is_p_free(q: &BigRational, p: u64) -> bool {
    !q.denom().is_multiple_of(&BigInt::from(p))
}

#[derive(Clone, PartialEq, Eq)]
pub struct FiniteAdele {
    real: BigRational,
    tail: BigRational,
    exceptions: BTreeMap<u64, BigRational>,
}

impl fmt::Debug for FiniteAdele {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_json())
    }
}

impl FiniteAdele {
    pub fn new(real: BigRational, tail: BigRational, exceptions: BTreeMap<u64, BigRational>) -> Result<Self> {
        for &p in exceptions.keys() {
            check_prime(p)?;
        }
        let x = Self {
            real,
            tail,
            exceptions,
        };
        x.validate()?;
        Ok(x.normalized())
    }

    /// Checks that the tail is integral at every unlisted prime.
    pub fn validate(&self) -> Result<()> {
        for p in prime_factors(self.tail.denom())? {
            if !self.exceptions.contains_key(&p) {
                return Err(Error::Invariant(format!(
                    "tail denominator divisible by unlisted prime {p}"
                )));
            }
        }
        Ok(())
    }

    fn normalized(mut self) -> Self {
        let tail = &self.tail;
        self.exceptions
            .retain(|&p, v| v != tail || !den_is_p_free(tail, p));
        self
    }

    pub fn zero() -> Self {
        Self {
            real: BigRational::zero(),
            tail: BigRational::zero(),
            exceptions: BTreeMap::new(),
        }
    }

    /// Diagonal embedding of a rational.
    pub fn diagonal(q: &BigRational) -> Result<Self> {
        let exceptions = prime_factors(q.denom())?
            .into_iter()
            .map(|p| (p, q.clone()))
            .collect();
        Ok(Self {
            real: q.clone(),
            tail: q.clone(),
            exceptions,
        })
    }

    /// Real part `x`, all `p`-parts zero.
    pub fn archimedean(x: BigRational) -> Self {
        Self {
            real: x,
            ..Self::zero()
        }
    }

    /// Real part zero, a single non-zero `p`-component.
    pub fn at_prime(p: u64, value: BigRational) -> Result<Self> {
        Self::new(BigRational::zero(), BigRational::zero(), BTreeMap::from([(p, value)]))
    }

    pub fn real(&self) -> &BigRational {
        &self.real
    }

    pub fn tail(&self) -> &BigRational {
        &self.tail
    }

    pub fn exceptions(&self) -> &BTreeMap<u64, BigRational> {
        &self.exceptions
    }

    /// `x_p`.
    pub fn component(&self, p: u64) -> &BigRational {
        self.exceptions.get(&p).unwrap_or(&self.tail)
    }

    /// True when this is the image of a rational.
    pub fn is_diagonal(&self) -> bool {
        self.real == self.tail && self.exceptions.values().all(|v| *v == self.tail)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut exceptions = BTreeMap::new();
        for &p in self.exceptions.keys().chain(other.exceptions.keys()) {
            exceptions
                .entry(p)
                .or_insert_with(|| self.component(p) + other.component(p));
        }
        Self {
            real: &self.real + &other.real,
            tail: &self.tail + &other.tail,
            exceptions,
        }
        .normalized()
    }

    pub fn neg(&self) -> Self {
        Self {
            real: -&self.real,
            tail: -&self.tail,
            exceptions: self.exceptions.iter().map(|(&p, v)| (p, -v)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Componentwise multiplication by a rational.
    pub fn scale(&self, r: &BigRational) -> Result<Self> {
        let tail = &self.tail * r;
        let mut exceptions: BTreeMap<u64, BigRational> =
            self.exceptions.iter().map(|(&p, v)| (p, v * r)).collect();
        for p in prime_factors(r.denom())? {
            exceptions.entry(p).or_insert_with(|| tail.clone());
        }
        Ok(Self {
            real: &self.real * r,
            tail,
            exceptions,
        }
        .normalized())
    }

    /// `x − diag(q)`.
    pub fn sub_rational(&self, q: &BigRational) -> Result<Self> {
        Ok(self.sub(&Self::diagonal(q)?))
    }

    /// `{"real": "a/b", "tail": "c/d", "exceptions": {"2": "e/f"}}`.
    pub fn to_json(&self) -> Value {
        let ex: Map<String, Value> = self
            .exceptions
            .iter()
            .map(|(p, v)| (p.to_string(), Value::String(format_rational(v))))
            .collect();
        let mut m = Map::new();
        m.insert("real".into(), Value::String(format_rational(&self.real)));
        m.insert("tail".into(), Value::String(format_rational(&self.tail)));
        m.insert("exceptions".into(), Value::Object(ex));
        Value::Object(m)
    }

    pub fn from_json(doc: &Value) -> Result<Self> {
        let field = |k: &str| -> Result<BigRational> {
            match doc.get(k) {
                Some(Value::String(s)) => parse_rational(s),
                Some(Value::Number(n)) => parse_rational(&n.to_string()),
                None => Ok(BigRational::zero()),
                _ => Err(Error::Parse(format!("adele field '{k}' must be a rational string"))),
            }
        };
        let mut exceptions = BTreeMap::new();
        if let Some(ex) = doc.get("exceptions") {
            let ex = ex
                .as_object()
                .ok_or_else(|| Error::Parse("adele 'exceptions' must be an object".into()))?;
            for (k, v) in ex {
                let p: u64 = k
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad prime key '{k}'")))?;
                let v = match v {
                    Value::String(s) => parse_rational(s)?,
                    Value::Number(n) => parse_rational(&n.to_string())?,
                    _ => return Err(Error::Parse(format!("bad value at prime {p}"))),
                };
                exceptions.insert(p, v);
            }
        }
        Self::new(field("real")?, field("tail")?, exceptions)
    }

    /// JSON text, or `diag:q` / `real:q` shorthands.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(q) = s.strip_prefix("diag:") {
            return Self::diagonal(&parse_rational(q)?);
        }
        if let Some(q) = s.strip_prefix("real:") {
            return Ok(Self::archimedean(parse_rational(q)?));
        }
        let doc: Value = serde_json::from_str(s).map_err(|e| Error::Parse(format!("adele JSON: {e}")))?;
        Self::from_json(&doc)
    }
}

/// `f̃(x) = Σ_p f_p(x_p)` over the listed primes.
pub fn fractional_tilde(x: &FiniteAdele) -> BigRational {
    x.exceptions
        .iter()
        .map(|(&p, v)| p_fractional_unchecked(v, p))
        .fold(BigRational::zero(), |a, b| a + b)
}

/// `f(x) = f̃(x) + ⌊x_∞ − f̃(x)⌋`.
pub fn adele_fractional(x: &FiniteAdele) -> Result<BigRational> {
    x.validate()?;
    let ft = fractional_tilde(x);
    let f = &ft + (&x.real - &ft).floor();
    let y = x.sub_rational(&f)?;
    check_fundamental(&y)?;
    Ok(f)
}

fn check_fundamental(y: &FiniteAdele) -> Result<()> {
    if y.real.is_negative() || y.real >= BigRational::one() {
        return Err(Error::Invariant(format!(
            "real part {} outside [0, 1)",
            format_rational(&y.real)
        )));
    }
    for (&p, v) in &y.exceptions {
        if !den_is_p_free(v, p) {
            return Err(Error::Invariant(format!("component at {p} is not {p}-integral")));
        }
    }
    y.validate()
}

/// An element of `[0, 1) × Π_p ℤ_p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KTildeElement(FiniteAdele);

impl KTildeElement {
    pub fn zero() -> Self {
        KTildeElement(FiniteAdele::zero())
    }

    pub fn adele(&self) -> &FiniteAdele {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0 == FiniteAdele::zero()
    }
}

/// `φ(x) = x − f(x)`.
pub fn phi(x: &FiniteAdele) -> Result<KTildeElement> {
    let f = adele_fractional(x)?;
    Ok(KTildeElement(x.sub_rational(&f)?))
}

/// Group law on the fundamental domain: `φ(a + b)`.
pub fn ktilde_add(a: &KTildeElement, b: &KTildeElement) -> Result<KTildeElement> {
    phi(&a.0.add(&b.0))
}

/// `f̃(ru) − r·u_∞`, not reduced.
pub fn character_exponent_raw(r: &BigRational, u: &FiniteAdele) -> Result<BigRational> {
    let ru = u.scale(r)?;
    Ok(fractional_tilde(&ru) - r * &u.real)
}

/// The character exponent reduced into `[0, 1)`.
pub fn character_exponent(r: &BigRational, u: &FiniteAdele) -> Result<BigRational> {
    let e = character_exponent_raw(r, u)?;
    Ok(&e - e.floor())
}

/// `χ_r(u) = exp(2πi(f̃(ru) − r·u_∞))`.
pub fn character(r: &BigRational, u: &FiniteAdele) -> Result<Complex64> {
    Ok(accum::unit(rational_to_f64(&character_exponent(r, u)?)))
}

/// `{k/N! : |k| <= N·N!}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FolnerSet {
    level: u32,
    factorial: u64,
}

pub fn folner_rationals(level: u32) -> Result<FolnerSet> {
    if level == 0 {
        return arg("Folner level must be >= 1");
    }
    if level > MAX_FOLNER_LEVEL {
        return Err(Error::Resource(format!(
            "Folner level {level} exceeds {MAX_FOLNER_LEVEL} (set size grows like 2N·N!)"
        )));
    }
    Ok(FolnerSet {
        level,
        factorial: (1..=level as u64).product(),
    })
}

impl FolnerSet {
    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn factorial(&self) -> u64 {
        self.factorial
    }

    fn radius(&self) -> i64 {
        (self.level as u64 * self.factorial) as i64
    }

    pub fn len(&self) -> usize {
        2 * self.radius() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Elements in increasing order.
    pub fn get(&self, i: usize) -> BigRational {
        BigRational::new(
            BigInt::from(i as i64 - self.radius()),
            BigInt::from(self.factorial),
        )
    }

    pub fn iter(&self) -> impl Iterator<Item = BigRational> + '_ {
        (0..self.len()).map(|i| self.get(i))
    }

    pub fn contains(&self, q: &BigRational) -> bool {
        let scaled = q * BigRational::from_integer(BigInt::from(self.factorial));
        scaled.is_integer() && scaled.to_integer().abs() <= BigInt::from(self.radius())
    }

    /// `|(F + g) Δ F|`.
    pub fn shift_symmetric_difference(&self, g: &BigRational) -> u64 {
        let scaled = g * BigRational::from_integer(BigInt::from(self.factorial));
        if !scaled.is_integer() {
            return 2 * self.len() as u64;
        }
        let shift = scaled.to_integer().abs();
        let outside = shift.to_u64().unwrap_or(u64::MAX).min(self.len() as u64);
        2 * outside
    }
}

/// `Σ_j α_j x^j` with adelic coefficients, constant term first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdelicPolynomial {
    pub coeffs: Vec<FiniteAdele>,
}

impl AdelicPolynomial {
    pub fn new(coeffs: Vec<FiniteAdele>) -> Self {
        Self { coeffs }
    }

    /// `α x^m`.
    pub fn monomial(alpha: FiniteAdele, m: usize) -> Self {
        let mut coeffs = vec![FiniteAdele::zero(); m];
        coeffs.push(alpha);
        Self { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.iter().rposition(|c| *c != FiniteAdele::zero()).unwrap_or(0)
    }

    pub fn eval(&self, x: &BigRational) -> Result<FiniteAdele> {
        let mut acc = FiniteAdele::zero();
        let mut power = BigRational::one();
        for c in &self.coeffs {
            acc = acc.add(&c.scale(&power)?);
            power *= x;
        }
        Ok(acc)
    }

    /// Some non-constant coefficient lies outside the diagonal copy of ℚ.
    pub fn has_irrational_coefficient(&self) -> bool {
        self.coeffs.iter().skip(1).any(|c| !c.is_diagonal())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdelicWeylReport {
    #[serde(rename = "N")]
    pub level: u32,
    pub size: usize,
    pub re: f64,
    pub im: f64,
    pub magnitude: f64,
    /// False when every non-constant coefficient is rational; the average is then trivially 1.
    pub hypothesis_holds: bool,
}

impl AdelicWeylReport {
    pub const CSV_HEADER: &'static str = "N,size,re,im,magnitude";

    pub fn csv_row(&self) -> String {
        format!("{},{},{},{},{}", self.level, self.size, self.re, self.im, self.magnitude)
    }
}

/// `f̃(su) − s·u_∞` modulo 1 without factoring `den(s)`: at primes outside the
/// exception set the fractional parts of `s·tail` sum to `s·tail` modulo 1.
fn scaled_exponent(s: &BigRational, u: &FiniteAdele) -> BigRational {
    let st = s * &u.tail;
    let mut e = &st - s * &u.real;
    for (&p, v) in &u.exceptions {
        e += p_fractional_unchecked(&(s * v), p) - p_fractional_unchecked(&st, p);
    }
    e
}

/// Average of `χ_r(g(x))` over a Følner level.
pub fn adelic_weyl_average(g: &AdelicPolynomial, r: &BigRational, folner: &FolnerSet) -> Result<AdelicWeylReport> {
    if g.degree() == 0 {
        return arg("polynomial degree must be >= 1");
    }
    if r.is_zero() {
        return arg("r = 0 gives the trivial character");
    }
    // χ_s(α) is additive in s, so χ_r(α_j (k/N!)^j) = e(β_j k^j) with β_j the exponent at r/N!^j.
    let fact = BigRational::from_integer(BigInt::from(folner.factorial()));
    let mut s = r.clone();
    let betas: Vec<BigRational> = g
        .coeffs
        .iter()
        .map(|c| {
            let e = scaled_exponent(&s, c);
            s = &s / &fact;
            &e - e.floor()
        })
        .collect();
    let poly = ModOnePoly::new(&betas);
    let radius = folner.len() as i64 / 2;
    let avg = accum::sum_complex(folner.len(), |i| accum::unit(poly.frac_at_signed(i as i64 - radius)))
        / folner.len() as f64;
    Ok(AdelicWeylReport {
        level: folner.level(),
        size: folner.len(),
        re: avg.re,
        im: avg.im,
        magnitude: avg.norm(),
        hypothesis_holds: g.has_irrational_coefficient(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> BigRational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn scaled_exponent_matches_character() {
        let u = FiniteAdele::parse(r#"{"real":"2/7","tail":"1/3","exceptions":{"3":"5/9","2":"1/8"}}"#).unwrap();
        for s in ["1", "3/4", "-5/6", "7/10", "11/36", "13/15"] {
            let s = q(s);
            let e = scaled_exponent(&s, &u);
            assert_eq!(&e - e.floor(), character_exponent(&s, &u).unwrap());
        }
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(p_valuation(&q("12"), 2).unwrap(), Valuation::Finite(2));
        assert_eq!(p_valuation(&q("3/4"), 2).unwrap(), Valuation::Finite(-2));
        assert_eq!(p_valuation(&q("0"), 5).unwrap(), Valuation::PlusInfinity);
        assert!(p_valuation(&q("3"), 4).is_err());
    }

    #[test]
    fn fractional_examples() {
        assert_eq!(p_fractional(&q("7"), 5).unwrap(), q("0"));
        assert_eq!(p_fractional(&q("3/4"), 2).unwrap(), q("3/4"));
        assert_eq!(p_fractional(&q("5/3"), 3).unwrap(), q("2/3"));
        assert_eq!(p_fractional(&q("-1/2"), 2).unwrap(), q("1/2"));
    }

    #[test]
    fn adele_fractional_examples() {
        let half = FiniteAdele::diagonal(&q("1/2")).unwrap();
        assert_eq!(adele_fractional(&half).unwrap(), q("1/2"));
        assert!(phi(&half).unwrap().is_zero());
        let m = FiniteAdele::diagonal(&q("-7")).unwrap();
        assert_eq!(adele_fractional(&m).unwrap(), q("-7"));
        let third = FiniteAdele::archimedean(q("1/3"));
        assert_eq!(adele_fractional(&third).unwrap(), q("0"));
        assert_eq!(*phi(&third).unwrap().adele().real(), q("1/3"));

        let x = FiniteAdele::archimedean(q("5/2"));
        let y = phi(&x).unwrap();
        assert_eq!(*y.adele().real(), q("1/2"));
        assert_eq!(*y.adele().tail(), q("-2"));
        assert!(phi(&FiniteAdele::zero()).unwrap().is_zero());
    }

    #[test]
    fn malformed_adele_rejected() {
        let bad = FiniteAdele::new(q("0"), q("1/3"), BTreeMap::new());
        assert!(matches!(bad, Err(Error::Invariant(_))));
        assert!(FiniteAdele::new(q("0"), q("0"), BTreeMap::from([(6, q("1"))])).is_err());
    }

    #[test]
    fn ktilde_example() {
        let a = phi(&FiniteAdele::archimedean(q("3/4"))).unwrap();
        let s = ktilde_add(&a, &a).unwrap();
        assert_eq!(*s.adele().real(), q("1/2"));
        assert_eq!(*s.adele().tail(), q("-1"));
        assert_eq!(ktilde_add(&a, &KTildeElement::zero()).unwrap(), a);
    }

    #[test]
    fn character_examples() {
        let u = FiniteAdele::diagonal(&q("7/12")).unwrap();
        assert_eq!(character_exponent(&q("1"), &u).unwrap(), q("0"));
        let v = FiniteAdele::archimedean(q("1/3"));
        assert_eq!(character_exponent(&q("0"), &v).unwrap(), q("0"));
        assert_eq!(character_exponent(&q("1"), &v).unwrap(), q("2/3"));
        let z = character(&q("1"), &v).unwrap();
        assert!((z - Complex64::cis(-2.0 * std::f64::consts::PI / 3.0)).norm() < 1e-15);
    }

    #[test]
    fn folner_examples() {
        let f1 = folner_rationals(1).unwrap();
        assert_eq!(f1.iter().collect::<Vec<_>>(), vec![q("-1"), q("0"), q("1")]);
        let f2 = folner_rationals(2).unwrap();
        assert_eq!(f2.len(), 9);
        assert_eq!(f2.get(1), q("-3/2"));
        assert!(folner_rationals(13).is_err());
        let f6 = folner_rationals(6).unwrap();
        assert_eq!(f6.shift_symmetric_difference(&q("1/3")), 480);
        assert!(480.0 / f6.len() as f64 <= 1.0 / 18.0);
        assert_eq!(f6.shift_symmetric_difference(&q("1/7")), 2 * f6.len() as u64);
    }

    #[test]
    fn json_round_trip() {
        let x = FiniteAdele::new(q("5/2"), q("1/6"), BTreeMap::from([(2, q("1/6")), (3, q("4/9")), (7, q("1/7"))]))
            .unwrap();
        let back = FiniteAdele::from_json(&x.to_json()).unwrap();
        assert_eq!(back, x);
        assert_eq!(FiniteAdele::parse(&x.to_json().to_string()).unwrap(), x);
        assert_eq!(x.to_json()["exceptions"]["3"], "4/9");
    }

    #[test]
    fn weyl_average_small_level() {
        let alpha = FiniteAdele::at_prime(2, q("1/2")).unwrap();
        let g = AdelicPolynomial::monomial(alpha, 1);
        let r = adelic_weyl_average(&g, &q("1"), &folner_rationals(4).unwrap()).unwrap();
        assert!((r.magnitude - 1.0 / 193.0).abs() < 1e-12);
        assert!(r.hypothesis_holds);
        let g = AdelicPolynomial::monomial(FiniteAdele::diagonal(&q("2/3")).unwrap(), 1);
        let r = adelic_weyl_average(&g, &q("1"), &folner_rationals(3).unwrap()).unwrap();
        assert!(!r.hypothesis_holds && (r.re - 1.0).abs() < 1e-12);
        assert!(adelic_weyl_average(&g, &q("0"), &folner_rationals(3).unwrap()).is_err());
    }
}
