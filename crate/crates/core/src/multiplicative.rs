//! Möbius and Liouville sieves, multiplicativity checks, and Kátai's
//! correlation criterion.

use std::sync::Arc;

use num_complex::Complex64;
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::accum::{self, unit};
use crate::arith::{is_prime, primes_up_to};
use crate::error::{arg, Error, Result};
use crate::sequences::{CompiledSpec, SequenceSpec};

/// Default cap on sieve sizes.
pub const DEFAULT_MAX_TABLE: u64 = 100_000_000;
/// Tolerance for `|F(ab) − F(a)F(b)|`.
pub const MULTIPLICATIVITY_TOL: f64 = 1e-9;

/// `0.05 · sqrt(10⁵ / N)`.
pub fn katai_threshold(n: usize) -> f64 {
    0.05 * (1e5 / n as f64).sqrt()
}

/// `μ(n)` and `λ(n)` for `n <= N`; index 0 holds 0.
#[derive(Debug, Clone)]
pub struct ArithmeticTables {
    pub mobius: Vec<i8>,
    pub liouville: Vec<i8>,
}

/// Linear sieve for `μ` and `λ`.
pub fn sieve_tables(n: u64) -> Result<ArithmeticTables> {
    if n == 0 {
        return arg("table size must be >= 1");
    }
    if n > DEFAULT_MAX_TABLE {
        return Err(Error::Resource(format!("table size {n} exceeds {DEFAULT_MAX_TABLE}")));
    }
    let n = n as usize;
    let mut lp = vec![0u32; n + 1];
    let mut primes: Vec<u32> = Vec::new();
    let mut mobius = vec![0i8; n + 1];
    let mut liouville = vec![0i8; n + 1];
    mobius[1] = 1;
    liouville[1] = 1;
    for i in 2..=n {
        if lp[i] == 0 {
            lp[i] = i as u32;
            primes.push(i as u32);
            mobius[i] = -1;
            liouville[i] = -1;
        }
        for &p in &primes {
            let m = i * p as usize;
            if p > lp[i] || m > n {
                break;
            }
            lp[m] = p;
            liouville[m] = -liouville[i];
            mobius[m] = if p == lp[i] { 0 } else { -mobius[i] };
        }
    }
    if let Some(bad) = (1..=n).find(|&k| mobius[k] != 0 && mobius[k] != liouville[k]) {
        return Err(Error::Invariant(format!("mu and lambda disagree at squarefree {bad}")));
    }
    Ok(ArithmeticTables { mobius, liouville })
}

pub fn mobius_table(n: u64) -> Result<Vec<i8>> {
    Ok(sieve_tables(n)?.mobius)
}

pub fn liouville_table(n: u64) -> Result<Vec<i8>> {
    Ok(sieve_tables(n)?.liouville)
}

pub fn as_f64_table(t: &[i8]) -> Vec<f64> {
    t.iter().map(|&v| v as f64).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Violation {
    pub a: u64,
    pub b: u64,
    pub product: f64,
    pub expected: f64,
}

/// Random coprime pairs `(a, b)` with `ab <= N` where `F(ab) ≠ F(a)F(b)`.
///
/// `table[n] = F(n)`; index 0 is ignored.
pub fn multiplicativity_check(table: &[f64], trials: usize, seed: u64) -> Result<Vec<Violation>> {
    if table.len() < 3 {
        return arg("table must cover at least 1..=2");
    }
    let n = (table.len() - 1) as u64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let mut done = 0;
    let mut attempts = 0usize;
    while done < trials && attempts < trials.saturating_mul(100).max(1000) {
        attempts += 1;
        let a = rng.gen_range(1..=n / 2);
        let b = rng.gen_range(1..=n / a);
        if a.gcd(&b) != 1 {
            continue;
        }
        done += 1;
        let product = table[(a * b) as usize];
        let expected = table[a as usize] * table[b as usize];
        if (product - expected).abs() > MULTIPLICATIVITY_TOL {
            out.push(Violation {
                a,
                b,
                product,
                expected,
            });
        }
    }
    Ok(out)
}

/// Bounded complex sequences indexed by `n >= 1`.
#[derive(Debug, Clone)]
pub enum ComplexSequence {
    Constant(Complex64),
    /// `e^{2πi h x_n}` for a scalar spec.
    Character { spec: SequenceSpec, h: i64 },
    Mobius,
    Liouville,
    /// `values[n - 1]`.
    Table(Arc<Vec<Complex64>>),
}

impl ComplexSequence {
    pub fn exp(spec: SequenceSpec) -> Self {
        ComplexSequence::Character { spec, h: 1 }
    }

    /// `mobius`, `liouville`, `one`, `const:re[,im]`, or `exp:<spec>`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "mobius" | "mu" => return Ok(ComplexSequence::Mobius),
            "liouville" | "lambda" => return Ok(ComplexSequence::Liouville),
            "one" => return Ok(ComplexSequence::Constant(Complex64::new(1.0, 0.0))),
            _ => {}
        }
        if let Some(rest) = s.strip_prefix("const:") {
            let v = rest
                .split(',')
                .map(|t| t.trim().parse::<f64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| Error::Parse(format!("bad constant '{rest}'")))?;
            return match v.as_slice() {
                [re] => Ok(ComplexSequence::Constant(Complex64::new(*re, 0.0))),
                [re, im] => Ok(ComplexSequence::Constant(Complex64::new(*re, *im))),
                _ => Err(Error::Parse(format!("bad constant '{rest}'"))),
            };
        }
        if let Some(rest) = s.strip_prefix("exp:") {
            let spec: SequenceSpec = rest.parse()?;
            if spec.dimension() != 1 {
                return arg("exp: needs a scalar spec");
            }
            return Ok(ComplexSequence::exp(spec));
        }
        Err(Error::Parse(format!(
            "unknown sequence '{s}' (expected mobius, liouville, one, const:, exp:<spec>)"
        )))
    }

    pub fn sup_bound(&self) -> f64 {
        match self {
            ComplexSequence::Constant(c) => c.norm(),
            ComplexSequence::Table(v) => v.iter().map(|z| z.norm()).fold(0.0, f64::max),
            _ => 1.0,
        }
    }

    /// Evaluator valid for indices up to `max_index`.
    pub fn prepare(&self, max_index: u64) -> Result<PreparedSequence> {
        Ok(match self {
            ComplexSequence::Constant(c) => PreparedSequence::Constant(*c),
            ComplexSequence::Character { spec, h } => {
                if spec.dimension() != 1 {
                    return arg("character sequences need a scalar spec");
                }
                PreparedSequence::Character(spec.compile()?, *h)
            }
            ComplexSequence::Mobius => PreparedSequence::Table(Arc::new(as_f64_table(&mobius_table(max_index)?))),
            ComplexSequence::Liouville => {
                PreparedSequence::Table(Arc::new(as_f64_table(&liouville_table(max_index)?)))
            }
            ComplexSequence::Table(v) => {
                if (v.len() as u64) < max_index {
                    return arg(format!("table has {} values, need {max_index}", v.len()));
                }
                PreparedSequence::Complex(v.clone())
            }
        })
    }
}

pub enum PreparedSequence {
    Constant(Complex64),
    Character(CompiledSpec, i64),
    /// Real table indexed by `n` (index 0 unused).
    Table(Arc<Vec<f64>>),
    Complex(Arc<Vec<Complex64>>),
}

impl PreparedSequence {
    pub fn at(&self, n: u64) -> Result<Complex64> {
        Ok(match self {
            PreparedSequence::Constant(c) => *c,
            PreparedSequence::Character(spec, h) => unit(*h as f64 * spec.scalar(n)?),
            PreparedSequence::Table(t) => Complex64::new(t[n as usize], 0.0),
            PreparedSequence::Complex(v) => v[(n - 1) as usize],
        })
    }

    /// `a(m n)` for `n = 1..=count`.
    pub fn dilated(&self, m: u64, count: usize) -> Result<Vec<Complex64>> {
        accum::try_collect_chunked(count, |i| self.at(m * (i as u64 + 1)))
    }
}

fn check_distinct_primes(p: u64, q: u64) -> Result<()> {
    if p == q {
        return arg("p and q must be distinct");
    }
    for x in [p, q] {
        if !is_prime(x) {
            return arg(format!("{x} is not prime"));
        }
    }
    Ok(())
}

fn correlate(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    accum::sum_complex(a.len(), |i| a[i] * b[i].conj()) / a.len() as f64
}

/// `(1/N) Σ_{n<=N} a(pn) · conj(a(qn))`.
pub fn katai_correlation(a: &ComplexSequence, p: u64, q: u64, n: usize) -> Result<Complex64> {
    check_distinct_primes(p, q)?;
    if n == 0 {
        return arg("N must be >= 1");
    }
    let prepared = a.prepare(p.max(q) * n as u64)?;
    Ok(correlate(&prepared.dilated(p, n)?, &prepared.dilated(q, n)?))
}

/// `(1/N) Σ_{n<=N} a(n) F(n)`; `table[n] = F(n)`.
pub fn weighted_weyl_sum(table: &[f64], a: &ComplexSequence, n: usize) -> Result<Complex64> {
    if n == 0 {
        return arg("N must be >= 1");
    }
    if table.len() <= n {
        return arg(format!("table covers 1..={} but N = {n}", table.len().saturating_sub(1)));
    }
    let prepared = a.prepare(n as u64)?;
    let values = prepared.dilated(1, n)?;
    Ok(accum::sum_complex(n, |i| values[i] * table[i + 1]) / n as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KataiEntry {
    pub p: u64,
    pub q: u64,
    pub re: f64,
    pub im: f64,
    pub magnitude: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KataiReport {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "P")]
    pub prime_cutoff: u64,
    pub threshold: f64,
    pub entries: Vec<KataiEntry>,
    pub max_magnitude: f64,
    /// Every pairwise magnitude is below the threshold.
    pub consistent: bool,
}

impl KataiReport {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("p,q,re,im,magnitude\n");
        for e in &self.entries {
            s.push_str(&format!("{},{},{},{},{}\n", e.p, e.q, e.re, e.im, e.magnitude));
        }
        s
    }

    pub fn verdict_json(&self) -> Value {
        json!({
            "N": self.n,
            "P": self.prime_cutoff,
            "threshold": self.threshold,
            "max_magnitude": self.max_magnitude,
            "consistent": self.consistent,
        })
    }
}

/// All correlations `p < q <= P` over primes.
pub fn katai_report(a: &ComplexSequence, prime_cutoff: u64, n: usize, threshold: Option<f64>) -> Result<KataiReport> {
    if prime_cutoff < 3 {
        return arg("prime cutoff P must be >= 3");
    }
    if n == 0 {
        return arg("N must be >= 1");
    }
    let primes = primes_up_to(prime_cutoff);
    let prepared = a.prepare(*primes.last().expect("P >= 3") * n as u64)?;
    let dilations = primes
        .iter()
        .map(|&p| prepared.dilated(p, n))
        .collect::<Result<Vec<_>>>()?;
    let mut entries = Vec::new();
    for i in 0..primes.len() {
        for j in i + 1..primes.len() {
            let c = correlate(&dilations[i], &dilations[j]);
            entries.push(KataiEntry {
                p: primes[i],
                q: primes[j],
                re: c.re,
                im: c.im,
                magnitude: c.norm(),
            });
        }
    }
    let threshold = threshold.unwrap_or_else(|| katai_threshold(n));
    let max_magnitude = entries.iter().map(|e| e.magnitude).fold(0.0, f64::max);
    Ok(KataiReport {
        n,
        prime_cutoff,
        threshold,
        entries,
        max_magnitude,
        consistent: max_magnitude < threshold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sieve_examples() {
        let t = sieve_tables(100).unwrap();
        assert_eq!((t.mobius[1], t.mobius[4], t.mobius[6], t.mobius[30]), (1, 0, 1, -1));
        assert_eq!(t.liouville[12], -1);
        assert!(t.liouville[1..].iter().all(|&v| v == 1 || v == -1));
    }

    #[test]
    fn mobius_over_n_small() {
        let mu = mobius_table(1_000_000).unwrap();
        let s: f64 = (1..mu.len()).map(|n| mu[n] as f64 / n as f64).sum();
        assert!(s.abs() < 0.01);
    }

    #[test]
    fn multiplicativity_examples() {
        let mu = as_f64_table(&mobius_table(10_000).unwrap());
        assert!(multiplicativity_check(&mu, 2000, 7).unwrap().is_empty());
        let id: Vec<f64> = (0..=10_000).map(|n| n as f64).collect();
        assert!(multiplicativity_check(&id, 2000, 7).unwrap().is_empty());
        let shifted: Vec<f64> = (0..=10_000).map(|n| n as f64 + 1.0).collect();
        assert!(!multiplicativity_check(&shifted, 2000, 7).unwrap().is_empty());
    }

    #[test]
    fn katai_constant_and_conjugate() {
        let one = ComplexSequence::Constant(Complex64::new(1.0, 0.0));
        let c = katai_correlation(&one, 2, 3, 100).unwrap();
        assert!((c - 1.0).norm() < 1e-15);
        assert!(katai_correlation(&one, 3, 3, 100).is_err());
        assert!(katai_correlation(&one, 4, 3, 100).is_err());

        let a = ComplexSequence::exp(SequenceSpec::polynomial_from_tokens(&["0", "0", "sqrt2"]).unwrap());
        let x = katai_correlation(&a, 2, 5, 5000).unwrap();
        let y = katai_correlation(&a, 5, 2, 5000).unwrap();
        assert!((x - y.conj()).norm() < 1e-10);
    }

    #[test]
    fn katai_linear_phase_is_tiny() {
        let a = ComplexSequence::exp(SequenceSpec::linear("sqrt2").unwrap());
        let c = katai_correlation(&a, 2, 3, 100_000).unwrap();
        assert!(c.norm() < 1e-4);
    }

    #[test]
    fn weighted_trivial() {
        let ones = vec![1.0; 101];
        let one = ComplexSequence::Constant(Complex64::new(1.0, 0.0));
        assert!((weighted_weyl_sum(&ones, &one, 100).unwrap() - 1.0).norm() < 1e-15);
        assert!(weighted_weyl_sum(&ones, &one, 100).is_ok());
        assert!(weighted_weyl_sum(&ones, &one, 101).is_err());
    }

    #[test]
    fn parse_sequences() {
        assert!(matches!(ComplexSequence::parse("mobius").unwrap(), ComplexSequence::Mobius));
        assert!(matches!(ComplexSequence::parse("exp:poly:0,0,sqrt2").unwrap(), ComplexSequence::Character { .. }));
        assert!(matches!(ComplexSequence::parse("const:0.5,0.5").unwrap(), ComplexSequence::Constant(_)));
        assert!(ComplexSequence::parse("exp:prod:poly:0,1;poly:0,2").is_err());
    }
}
