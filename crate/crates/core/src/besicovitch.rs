//! Indicator sequences, the Besicovitch seminorm, and subsequence extraction.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rustfft::FftPlanner;
use serde_json::{json, Value};

use crate::accum;
use crate::arith::{isqrt, primes_up_to};
use crate::error::{arg, Error, Result};
use crate::real::{bigint_to_u64, Real};

/// Default cap on indicator horizons.
pub const DEFAULT_MAX_HORIZON: u64 = 100_000_000;
/// Default cap on the period `P` of a rational approximation.
pub const DEFAULT_MAX_PERIOD: u64 = 1 << 22;
/// Fourier coefficients below this magnitude are dropped.
pub const DROP_THRESHOLD: f64 = 1e-12;

/// Membership bits for `n = 1..=len`, packed into 64-bit words.
#[derive(Clone, PartialEq, Eq)]
pub struct Bits {
    len: u64,
    words: Vec<u64>,
}

impl fmt::Debug for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bits(len = {}, ones = {})", self.len, self.count_ones())
    }
}

impl Bits {
    pub fn zeros(len: u64) -> Self {
        Self {
            len,
            words: vec![0; len.div_ceil(64) as usize],
        }
    }

    pub fn ones(len: u64) -> Self {
        let mut b = Self {
            len,
            words: vec![u64::MAX; len.div_ceil(64) as usize],
        };
        b.clear_tail();
        b
    }

    fn clear_tail(&mut self) {
        let r = self.len % 64;
        if r != 0 {
            if let Some(w) = self.words.last_mut() {
                *w &= (1u64 << r) - 1;
            }
        }
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Membership of `n` (1-based).
    pub fn get(&self, n: u64) -> bool {
        debug_assert!(n >= 1 && n <= self.len);
        let i = n - 1;
        self.words[(i / 64) as usize] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, n: u64, value: bool) {
        debug_assert!(n >= 1 && n <= self.len);
        let i = n - 1;
        let w = &mut self.words[(i / 64) as usize];
        if value {
            *w |= 1 << (i % 64);
        } else {
            *w &= !(1 << (i % 64));
        }
    }

    pub fn count_ones(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    /// Members in increasing order.
    pub fn iter_ones(&self) -> impl Iterator<Item = u64> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let t = w.trailing_zeros() as u64;
                w &= w - 1;
                Some(k as u64 * 64 + t + 1)
            })
        })
    }

    /// Maximal runs of members as `(start, length)`.
    pub fn runs(&self) -> Vec<(u64, u64)> {
        let mut out: Vec<(u64, u64)> = Vec::new();
        for n in self.iter_ones() {
            match out.last_mut() {
                Some((s, l)) if *s + *l == n => *l += 1,
                _ => out.push((n, 1)),
            }
        }
        out
    }

    pub fn from_runs(len: u64, runs: &[(u64, u64)]) -> Result<Self> {
        let mut b = Self::zeros(len);
        for &(s, l) in runs {
            if s == 0 || s.checked_add(l).is_none_or(|e| e - 1 > len) {
                return arg(format!("run ({s}, {l}) outside 1..={len}"));
            }
            for n in s..s + l {
                b.set(n, true);
            }
        }
        Ok(b)
    }

    /// Little-endian `u64` length header followed by little-endian words.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(8 * (self.words.len() + 1));
        out.extend_from_slice(&self.len.to_le_bytes());
        for w in &self.words {
            out.extend_from_slice(&w.to_le_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < 8 || !bytes.len().is_multiple_of(8) {
            return Err(Error::Parse("bitset file must be a sequence of 64-bit words".into()));
        }
        let mut words = bytes
            .chunks_exact(8)
            .map(|c| u64::from_le_bytes(c.try_into().expect("8-byte chunk")));
        let len = words.next().expect("header present");
        let words: Vec<u64> = words.collect();
        if words.len() as u64 != len.div_ceil(64) {
            return Err(Error::Parse(format!(
                "header says {len} bits but file holds {} words",
                words.len()
            )));
        }
        let mut b = Self { len, words };
        b.clear_tail();
        Ok(b)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum IndicatorSource {
    Squarefree,
    /// Integers with no divisor in `Q`.
    QFree(Vec<u64>),
    /// Values of `⌊kα⌋`, `k >= 1`.
    Beatty(Real),
    /// `gcd(n, ⌊nα⌋) = 1`.
    CoprimeFloor(Real),
}

impl fmt::Display for IndicatorSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndicatorSource::Squarefree => write!(f, "squarefree"),
            IndicatorSource::QFree(q) => {
                let q: Vec<String> = q.iter().map(u64::to_string).collect();
                write!(f, "qfree:{}", q.join(","))
            }
            IndicatorSource::Beatty(a) => write!(f, "beatty:{}", a.repr()),
            IndicatorSource::CoprimeFloor(a) => write!(f, "coprime-floor:{}", a.repr()),
        }
    }
}

impl IndicatorSource {
    /// Inverse of the `Display` form.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "squarefree" {
            return Ok(IndicatorSource::Squarefree);
        }
        let (kind, rest) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("unknown indicator source '{s}'")))?;
        match kind {
            "qfree" => {
                let q = rest
                    .split(',')
                    .map(|t| {
                        t.trim()
                            .parse::<u64>()
                            .map_err(|_| Error::Parse(format!("bad divisor '{t}'")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(IndicatorSource::QFree(q))
            }
            "beatty" => Ok(IndicatorSource::Beatty(Real::parse(rest)?)),
            "coprime-floor" => Ok(IndicatorSource::CoprimeFloor(Real::parse(rest)?)),
            _ => Err(Error::Parse(format!("unknown indicator source '{kind}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IndicatorSequence {
    pub source: IndicatorSource,
    pub horizon: u64,
    pub bits: Bits,
    pub notes: Vec<String>,
}

impl IndicatorSequence {
    fn new(source: IndicatorSource, bits: Bits) -> Self {
        Self {
            source,
            horizon: bits.len(),
            bits,
            notes: Vec::new(),
        }
    }

    pub fn count(&self) -> u64 {
        self.bits.count_ones()
    }

    /// `|A ∩ [1, N]| / N`.
    pub fn density(&self) -> f64 {
        self.count() as f64 / self.horizon as f64
    }

    pub fn contains(&self, n: u64) -> bool {
        n >= 1 && n <= self.horizon && self.bits.get(n)
    }

    pub fn members(&self) -> impl Iterator<Item = u64> + '_ {
        self.bits.iter_ones()
    }

    /// Values in `1..=N` as a 0/1 complex sequence (`f[0] = 1_A(1)`).
    pub fn as_complex(&self) -> Vec<Complex64> {
        (1..=self.horizon)
            .map(|n| Complex64::new(if self.bits.get(n) { 1.0 } else { 0.0 }, 0.0))
            .collect()
    }

    /// Run-length form: members as `[start, length]` pairs.
    pub fn to_rle_json(&self) -> Value {
        let runs: Vec<[u64; 2]> = self.bits.runs().into_iter().map(|(s, l)| [s, l]).collect();
        json!({
            "source": self.source.to_string(),
            "horizon": self.horizon,
            "count": self.count(),
            "runs": runs,
        })
    }

    pub fn from_rle_json(doc: &Value) -> Result<Self> {
        let bad = |m: &str| Error::Parse(format!("indicator JSON: {m}"));
        let source = IndicatorSource::parse(
            doc.get("source").and_then(Value::as_str).ok_or_else(|| bad("missing source"))?,
        )?;
        let horizon = doc.get("horizon").and_then(Value::as_u64).ok_or_else(|| bad("missing horizon"))?;
        let runs = doc
            .get("runs")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing runs"))?
            .iter()
            .map(|r| match r.as_array().map(|a| (a.first().and_then(Value::as_u64), a.get(1).and_then(Value::as_u64))) {
                Some((Some(s), Some(l))) => Ok((s, l)),
                _ => Err(bad("runs must be [start, length] pairs")),
            })
            .collect::<Result<Vec<_>>>()?;
        let bits = Bits::from_runs(horizon, &runs)?;
        Ok(Self::new(source, bits))
    }
}

fn check_horizon(n: u64) -> Result<()> {
    if n == 0 {
        return arg("horizon must be >= 1");
    }
    if n > DEFAULT_MAX_HORIZON {
        return Err(Error::Resource(format!(
            "horizon {n} exceeds the cap of {DEFAULT_MAX_HORIZON}"
        )));
    }
    Ok(())
}

fn clear_multiples(bits: &mut Bits, q: u64) {
    let mut m = q;
    while m <= bits.len() {
        bits.set(m, false);
        m += q;
    }
}

pub fn squarefree_indicator(n: u64) -> Result<IndicatorSequence> {
    check_horizon(n)?;
    let mut bits = Bits::ones(n);
    for p in primes_up_to(isqrt(n)) {
        clear_multiples(&mut bits, p * p);
    }
    Ok(IndicatorSequence::new(IndicatorSource::Squarefree, bits))
}

fn normalize_q(q: &[u64]) -> Result<Vec<u64>> {
    if q.iter().any(|&x| x <= 1) {
        return arg("Q must consist of integers >= 2");
    }
    let mut q = q.to_vec();
    q.sort_unstable();
    q.dedup();
    Ok(q)
}

/// Members of `[1, N]` with no divisor in `Q`. Elements of `Q` above `N` are ignored.
pub fn qfree_indicator(q: &[u64], n: u64) -> Result<IndicatorSequence> {
    check_horizon(n)?;
    let q = normalize_q(q)?;
    let mut bits = Bits::ones(n);
    for &d in q.iter().filter(|&&d| d <= n) {
        clear_multiples(&mut bits, d);
    }
    Ok(IndicatorSequence::new(IndicatorSource::QFree(q), bits))
}

/// Positive numerator and denominator of `α >= 1`.
fn beatty_parts(alpha: &Real) -> Result<(BigInt, BigInt)> {
    let v = alpha.value();
    if *v < BigRational::one() {
        return arg(format!("Beatty sequences need alpha >= 1, got {}", alpha.repr()));
    }
    Ok((v.numer().clone(), v.denom().clone()))
}

/// Iterator over `⌊kα⌋`, `k = 1, 2, …`, for `α = p/q`, by exact remainder tracking.
struct FloorMultiples {
    whole: BigInt,
    step: BigInt,
    q: BigInt,
    rem: BigInt,
    value: BigInt,
}

impl FloorMultiples {
    fn new(p: &BigInt, q: &BigInt) -> Self {
        let (whole, step) = p.div_mod_floor(q);
        Self {
            whole,
            step,
            q: q.clone(),
            rem: BigInt::zero(),
            value: BigInt::zero(),
        }
    }
}

impl Iterator for FloorMultiples {
    type Item = BigInt;

    fn next(&mut self) -> Option<BigInt> {
        self.rem += &self.step;
        self.value += &self.whole;
        if self.rem >= self.q {
            self.rem -= &self.q;
            self.value += 1;
        }
        Some(self.value.clone())
    }
}

/// Beatty membership via `nβ mod 1 ∈ (1 − β, 1]` with `β = 1/α` and a zero
/// residue read as 1.
pub fn beatty_criterion_bits(alpha: &Real, n: u64) -> Result<Bits> {
    check_horizon(n)?;
    let (p, q) = beatty_parts(alpha)?;
    // β = q/p; nβ mod 1 = r/p with r = nq mod p
    let step = &q % &p;
    let threshold = &p - &q;
    let mut r = BigInt::zero();
    let mut bits = Bits::zeros(n);
    for m in 1..=n {
        r += &step;
        if r >= p {
            r -= &p;
        }
        let member = if r.is_zero() { p > threshold } else { r > threshold };
        if member {
            bits.set(m, true);
        }
    }
    Ok(bits)
}

/// Indicator of `{⌊kα⌋ : k >= 1}`, cross-checked against [`beatty_criterion_bits`].
pub fn beatty_indicator(alpha: &Real, n: u64) -> Result<IndicatorSequence> {
    check_horizon(n)?;
    let (p, q) = beatty_parts(alpha)?;
    let mut bits = Bits::zeros(n);
    let limit = BigInt::from(n);
    for v in FloorMultiples::new(&p, &q) {
        if v > limit {
            break;
        }
        bits.set(bigint_to_u64(&v).expect("1 <= value <= N"), true);
    }
    let dual = beatty_criterion_bits(alpha, n)?;
    if dual != bits {
        let bad = (1..=n).find(|&m| dual.get(m) != bits.get(m)).unwrap_or(0);
        return Err(Error::Invariant(format!(
            "Beatty enumeration and membership criterion disagree at n = {bad}"
        )));
    }
    Ok(IndicatorSequence::new(IndicatorSource::Beatty(alpha.clone()), bits))
}

/// A warning if `α` lies within `1e-30` of a fraction with denominator below `10⁶`.
pub fn near_rational_warning(alpha: &BigRational) -> Option<String> {
    let tol = BigRational::new(BigInt::one(), BigInt::from(10).pow(30));
    let limit = BigInt::from(1_000_000);
    let (mut p0, mut q0) = (BigInt::zero(), BigInt::one());
    let (mut p1, mut q1) = (BigInt::one(), BigInt::zero());
    let mut x = alpha.clone();
    loop {
        let a = x.floor().to_integer();
        let (p2, q2) = (&a * &p1 + &p0, &a * &q1 + &q0);
        if q2 >= limit {
            return None;
        }
        let approx = BigRational::new(p2.clone(), q2.clone());
        if (alpha - &approx).abs() < tol {
            return Some(format!(
                "alpha is within 1e-30 of {p2}/{q2}; floor values may reflect the rational, not the irrational"
            ));
        }
        let frac = &x - BigRational::from_integer(a);
        if frac.is_zero() {
            return None;
        }
        x = frac.recip();
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
    }
}

/// `gcd(n, ⌊nα⌋) = 1` for `n <= N`, with `⌊nα⌋` exact in the stored precision.
pub fn coprime_floor_indicator(alpha: &Real, n: u64) -> Result<IndicatorSequence> {
    check_horizon(n)?;
    if !alpha.is_irrational() {
        return arg(format!("{} is not flagged irrational", alpha.repr()));
    }
    if alpha.value().is_negative() {
        return arg("alpha must be positive");
    }
    let v = alpha.value();
    let mut bits = Bits::zeros(n);
    for (m, fl) in (1..=n).zip(FloorMultiples::new(v.numer(), v.denom())) {
        let fl = bigint_to_u64(&fl)
            .ok_or_else(|| Error::Domain(format!("floor(n alpha) overflows u64 at n = {m}")))?;
        if m.gcd(&fl) == 1 {
            bits.set(m, true);
        }
    }
    let mut seq = IndicatorSequence::new(IndicatorSource::CoprimeFloor(alpha.clone()), bits);
    seq.notes.extend(near_rational_warning(v));
    Ok(seq)
}

pub fn build_indicator(source: &IndicatorSource, n: u64) -> Result<IndicatorSequence> {
    match source {
        IndicatorSource::Squarefree => squarefree_indicator(n),
        IndicatorSource::QFree(q) => qfree_indicator(q, n),
        IndicatorSource::Beatty(a) => beatty_indicator(a, n),
        IndicatorSource::CoprimeFloor(a) => coprime_floor_indicator(a, n),
    }
}

/// A point of the circle: exact fraction `num/den` or a float in `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Frequency {
    Rational { num: u64, den: u64 },
    Real(f64),
}

impl Frequency {
    /// `num/den` reduced into `[0, 1)`.
    pub fn rational(num: i64, den: u64) -> Result<Self> {
        if den == 0 {
            return arg("frequency denominator must be positive");
        }
        let r = num.rem_euclid(den as i64) as u64;
        let g = r.gcd(&den);
        Ok(Frequency::Rational { num: r / g, den: den / g })
    }

    pub fn real(x: f64) -> Self {
        Frequency::Real(crate::sequences::torus(x))
    }

    pub fn value(&self) -> f64 {
        match *self {
            Frequency::Rational { num, den } => num as f64 / den as f64,
            Frequency::Real(x) => x,
        }
    }

    /// `α n mod 1`, exact for rational `α`.
    pub fn phase(&self, n: u64) -> f64 {
        match *self {
            Frequency::Rational { num, den } => {
                ((num as u128 * (n % den) as u128) % den as u128) as f64 / den as f64
            }
            Frequency::Real(x) => crate::sequences::torus(x * n as f64),
        }
    }
}

impl fmt::Display for Frequency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Frequency::Rational { num, den } => write!(f, "{num}/{den}"),
            Frequency::Real(x) => write!(f, "{x}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrigTerm {
    pub freq: Frequency,
    pub coeff: Complex64,
}

/// `Σ_j c_j e^{2πi α_j n}` with distinct frequencies.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TrigPolynomial {
    terms: Vec<TrigTerm>,
}

impl TrigPolynomial {
    pub fn new(terms: Vec<TrigTerm>) -> Result<Self> {
        for (i, a) in terms.iter().enumerate() {
            if terms[..i].iter().any(|b| b.freq == a.freq) {
                return arg(format!("duplicate frequency {}", a.freq));
            }
        }
        Ok(Self { terms })
    }

    pub fn constant(c: f64) -> Self {
        Self {
            terms: vec![TrigTerm {
                freq: Frequency::Rational { num: 0, den: 1 },
                coeff: Complex64::new(c, 0.0),
            }],
        }
    }

    pub fn terms(&self) -> &[TrigTerm] {
        &self.terms
    }

    pub fn eval(&self, n: u64) -> Complex64 {
        self.terms
            .iter()
            .map(|t| t.coeff * accum::unit(t.freq.phase(n)))
            .sum()
    }

    /// Common period when every frequency is rational and the lcm stays below `limit`.
    pub fn period(&self, limit: u64) -> Option<u64> {
        let mut p = 1u64;
        for t in &self.terms {
            match t.freq {
                Frequency::Rational { den, .. } => {
                    p = p.lcm(&den);
                    if p > limit {
                        return None;
                    }
                }
                Frequency::Real(_) => return None,
            }
        }
        Some(p)
    }

    /// Values at `n = 1..=count`.
    pub fn values(&self, count: usize) -> Vec<Complex64> {
        match self.period(DEFAULT_MAX_PERIOD) {
            Some(p) if (p as usize) < count => {
                let table: Vec<Complex64> = (0..p).map(|r| self.eval(r)).collect();
                (1..=count as u64).map(|n| table[(n % p) as usize]).collect()
            }
            _ => accum::chunked(count, |r| {
                r.map(|i| self.eval(i as u64 + 1)).collect::<Vec<_>>()
            })
            .into_iter()
            .flatten()
            .collect(),
        }
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|t| json!({"freq": t.freq.to_string(), "re": t.coeff.re, "im": t.coeff.im}))
                .collect(),
        )
    }
}

/// `(1/N) Σ_{n<=N} |f(n) − poly(n)|` with `f[0] = f(1)`.
pub fn besicovitch_distance(f: &[Complex64], poly: &TrigPolynomial) -> Result<f64> {
    if f.is_empty() {
        return arg("sequence must be non-empty");
    }
    let p = poly.values(f.len());
    Ok(accum::sum_real(f.len(), |i| (f[i] - p[i]).norm()) / f.len() as f64)
}

#[derive(Debug, Clone)]
pub struct RationalApproximation {
    pub poly: TrigPolynomial,
    pub period: u64,
    /// The truncated divisor set `Q_M`.
    pub divisors: Vec<u64>,
    /// Exact density of `Q_M`-free integers.
    pub density: f64,
    /// `Σ 1/q` over `q ∈ Q`, `M < q <= N`.
    pub tail_bound: f64,
    /// `Σ |c_j|` over dropped coefficients.
    pub dropped_mass: f64,
    pub error_bound: f64,
}

/// Truncated divisor set and the tail reciprocal sum up to `horizon`.
///
/// For [`IndicatorSource::Squarefree`], `m` bounds the primes (`Q_M = {p² : p <= M}`);
/// for [`IndicatorSource::QFree`], `Q_M = Q ∩ [1, M]`.
fn truncate_divisors(source: &IndicatorSource, m: u64, horizon: u64) -> Result<(Vec<u64>, f64)> {
    match source {
        IndicatorSource::Squarefree => {
            let primes = primes_up_to(m.max(isqrt(horizon)));
            let head = primes.iter().filter(|&&p| p <= m).map(|p| p * p).collect();
            let tail = primes
                .iter()
                .filter(|&&p| p > m && p * p <= horizon)
                .map(|&p| 1.0 / (p * p) as f64)
                .sum();
            Ok((head, tail))
        }
        IndicatorSource::QFree(q) => {
            let q = normalize_q(q)?;
            let head = q.iter().copied().filter(|&d| d <= m).collect();
            let tail = q
                .iter()
                .filter(|&&d| d > m && d <= horizon)
                .map(|&d| 1.0 / d as f64)
                .sum();
            Ok((head, tail))
        }
        other => arg(format!("rational approximation needs a Q-free source, got {other}")),
    }
}

/// Fourier expansion of the periodic indicator of `Q_M`-free integers.
pub fn rational_approximation(source: &IndicatorSource, m: u64, horizon: u64) -> Result<RationalApproximation> {
    let (divisors, tail_bound) = truncate_divisors(source, m, horizon)?;
    let mut period = 1u64;
    for &d in &divisors {
        period = period.lcm(&d);
        if period > DEFAULT_MAX_PERIOD {
            return Err(Error::Resource(format!(
                "period lcm(Q_M) exceeds {DEFAULT_MAX_PERIOD}; choose a smaller M"
            )));
        }
    }
    let pattern: Vec<bool> = (0..period)
        .map(|r| !divisors.iter().any(|&d| r % d == 0))
        .collect();
    let ones = pattern.iter().filter(|&&b| b).count();
    let mut buf: Vec<Complex64> = pattern
        .iter()
        .map(|&b| Complex64::new(if b { 1.0 } else { 0.0 }, 0.0))
        .collect();
    FftPlanner::new().plan_fft_forward(period as usize).process(&mut buf);
    let scale = 1.0 / period as f64;
    let mut terms = Vec::new();
    let mut dropped = accum::Neumaier::new();
    for (j, x) in buf.into_iter().enumerate() {
        let c = x * scale;
        if c.norm() < DROP_THRESHOLD {
            dropped.add(c.norm());
        } else {
            terms.push(TrigTerm {
                freq: Frequency::rational(j as i64, period)?,
                coeff: c,
            });
        }
    }
    let dropped_mass = dropped.value();
    Ok(RationalApproximation {
        poly: TrigPolynomial::new(terms)?,
        period,
        divisors,
        density: ones as f64 / period as f64,
        tail_bound,
        dropped_mass,
        error_bound: tail_bound + dropped_mass,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Extraction {
    pub values: Vec<f64>,
    pub indices: Vec<u64>,
    pub warning: Option<String>,
}

/// `x_{n_k}` for the members `n_1 < n_2 < …` of the indicator; `base[0] = x_1`.
pub fn subsequence_extract(indicator: &IndicatorSequence, base: &[f64]) -> Result<Extraction> {
    if (base.len() as u64) < indicator.horizon {
        return arg(format!(
            "base has {} values but the indicator horizon is {}",
            base.len(),
            indicator.horizon
        ));
    }
    let indices: Vec<u64> = indicator.members().collect();
    let values = indices.iter().map(|&n| base[(n - 1) as usize]).collect();
    let warning = indices
        .is_empty()
        .then(|| "indicator set is empty; nothing extracted".to_string());
    Ok(Extraction {
        values,
        indices,
        warning,
    })
}

/// Row-major `K × L` grid of `u(a_k, b_l)` over the first members of two indicators.
pub fn product_extract<F>(a: &IndicatorSequence, b: &IndicatorSequence, k: usize, l: usize, u: F) -> Result<Vec<f64>>
where
    F: Fn(u64, u64) -> Result<f64> + Sync + Send,
{
    let rows: Vec<u64> = a.members().take(k).collect();
    let cols: Vec<u64> = b.members().take(l).collect();
    if rows.len() < k || cols.len() < l {
        return arg(format!(
            "indicators have only {} x {} members below their horizons",
            rows.len(),
            cols.len()
        ));
    }
    accum::try_collect_chunked(k * l, |i| u(rows[i / l], cols[i % l]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set_of(ind: &IndicatorSequence) -> Vec<u64> {
        ind.members().collect()
    }

    #[test]
    fn squarefree_small() {
        let s = squarefree_indicator(12).unwrap();
        assert_eq!(set_of(&s), vec![1, 2, 3, 5, 6, 7, 10, 11]);
        assert_eq!(squarefree_indicator(100).unwrap().count(), 61);
        assert!(squarefree_indicator(0).is_err());
        assert!(matches!(squarefree_indicator(DEFAULT_MAX_HORIZON + 1), Err(Error::Resource(_))));
    }

    #[test]
    fn qfree_examples() {
        assert_eq!(set_of(&qfree_indicator(&[2], 10).unwrap()), vec![1, 3, 5, 7, 9]);
        let q = qfree_indicator(&[6, 10], 30).unwrap();
        assert_eq!(q.count(), 23);
        for x in [6, 10, 12, 18, 20, 24, 30] {
            assert!(!q.contains(x));
        }
        assert!(qfree_indicator(&[1, 4], 10).is_err());
        let squares: Vec<u64> = (2..=100).map(|k| k * k).collect();
        assert_eq!(qfree_indicator(&squares, 5000).unwrap().bits, squarefree_indicator(5000).unwrap().bits);
    }

    #[test]
    fn beatty_examples() {
        let s2 = Real::parse("sqrt2").unwrap();
        assert_eq!(set_of(&beatty_indicator(&s2, 7).unwrap()), vec![1, 2, 4, 5, 7]);
        assert_eq!(beatty_indicator(&Real::from_integer(1), 5).unwrap().count(), 5);
        let r = Real::parse("3/2").unwrap();
        assert_eq!(set_of(&beatty_indicator(&r, 9).unwrap()), vec![1, 3, 4, 6, 7, 9]);
        assert!(beatty_indicator(&Real::parse("1/2").unwrap(), 9).is_err());
    }

    #[test]
    fn coprime_floor_examples() {
        let s2 = Real::parse("sqrt2").unwrap();
        let c = coprime_floor_indicator(&s2, 10).unwrap();
        assert!(c.contains(1) && !c.contains(2) && c.contains(5));
        assert!(c.notes.is_empty());
        assert!(coprime_floor_indicator(&Real::parse("3/2").unwrap(), 10).is_err());
        let q = BigRational::new(BigInt::from(355), BigInt::from(113));
        assert!(near_rational_warning(&q).is_some());
        assert!(near_rational_warning(Real::parse("pi").unwrap().value()).is_none());
    }

    #[test]
    fn bitset_round_trip() {
        let s = squarefree_indicator(1000).unwrap();
        let bytes = s.bits.to_bytes();
        assert_eq!(&bytes[..8], &1000u64.to_le_bytes());
        assert_eq!(Bits::from_bytes(&bytes).unwrap(), s.bits);
        let back = IndicatorSequence::from_rle_json(&s.to_rle_json()).unwrap();
        assert_eq!(back.bits, s.bits);
        assert_eq!(back.source, s.source);
        assert!(Bits::from_bytes(&bytes[..12]).is_err());
    }

    #[test]
    fn trig_examples() {
        let even: Vec<Complex64> = (1..=100)
            .map(|n| Complex64::new(if n % 2 == 0 { 1.0 } else { 0.0 }, 0.0))
            .collect();
        let half = Complex64::new(0.5, 0.0);
        let poly = TrigPolynomial::new(vec![
            TrigTerm { freq: Frequency::rational(0, 1).unwrap(), coeff: half },
            TrigTerm { freq: Frequency::rational(1, 2).unwrap(), coeff: half },
        ])
        .unwrap();
        assert!(besicovitch_distance(&even, &poly).unwrap() < 1e-12);
        let own = poly.values(50);
        assert!(besicovitch_distance(&own, &poly).unwrap() < 1e-12);
        assert!(TrigPolynomial::new(vec![
            TrigTerm { freq: Frequency::rational(1, 2).unwrap(), coeff: half },
            TrigTerm { freq: Frequency::rational(3, 2).unwrap(), coeff: half },
        ])
        .is_err());
    }

    #[test]
    fn rational_approximation_examples() {
        let a = rational_approximation(&IndicatorSource::Squarefree, 2, 100).unwrap();
        assert_eq!(a.period, 4);
        assert_eq!(a.density, 0.75);
        let c0 = a.poly.terms().iter().find(|t| t.freq.value() == 0.0).unwrap();
        assert!((c0.coeff - 0.75).norm() < 1e-15);
        for t in a.poly.terms().iter().filter(|t| t.freq.value() != 0.0) {
            assert!((t.coeff + 0.25).norm() < 1e-15);
        }
        for n in 1..=16u64 {
            let expect = if n % 4 == 0 { 0.0 } else { 1.0 };
            assert!((a.poly.eval(n) - expect).norm() < 1e-12);
        }

        let odd = rational_approximation(&IndicatorSource::QFree(vec![2]), 2, 100).unwrap();
        assert_eq!(odd.poly.terms().len(), 2);
        assert!((odd.poly.eval(3) - 1.0).norm() < 1e-15);
        assert_eq!(odd.tail_bound, 0.0);

        let five = rational_approximation(&IndicatorSource::Squarefree, 5, 100).unwrap();
        assert_eq!(five.period, 900);
        assert!((five.density - 0.64).abs() < 1e-15);
    }

    #[test]
    fn extraction_examples() {
        let odd = qfree_indicator(&[2], 20).unwrap();
        let alpha = 0.1234;
        let base: Vec<f64> = (1..=20).map(|n| crate::sequences::torus(n as f64 * alpha)).collect();
        let e = subsequence_extract(&odd, &base).unwrap();
        assert_eq!(e.values.len(), 10);
        assert_eq!(e.values[1], base[2]);
        let empty = beatty_indicator(&Real::from_integer(2), 1).unwrap();
        let e = subsequence_extract(&empty, &base).unwrap();
        assert!(e.values.is_empty() && e.warning.is_some());
        assert!(subsequence_extract(&odd, &base[..5]).is_err());
    }
}
