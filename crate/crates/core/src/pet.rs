//! Polynomial exhaustion (PET) combinatorics.
//!
//! Families of integer polynomials in `n`, their characteristic vectors, the
//! well-order on those vectors, and the van der Corput reduction step. After
//! a reduction, coefficients live in `ℤ[h_1, …, h_k]`: every step introduces a
//! new formal shift parameter. Degree and class decisions are made for
//! generic parameters.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{arg, Error, Result};

/// Upper bound on reduction steps in [`descent_chain`].
pub const MAX_CHAIN_STEPS: usize = 200;
/// Range searched for exceptional shift values.
pub const EXCEPTIONAL_H_RANGE: i64 = 64;

/// Polynomial in the shift parameters with integer coefficients.
///
/// Keys are exponent vectors `(e_1, …, e_k)` without trailing zeros.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MPoly {
    terms: BTreeMap<Vec<u32>, BigInt>,
}

fn trim_exponents(mut e: Vec<u32>) -> Vec<u32> {
    while e.last() == Some(&0) {
        e.pop();
    }
    e
}

impl MPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: BigInt) -> Self {
        let mut m = Self::zero();
        if !c.is_zero() {
            m.terms.insert(Vec::new(), c);
        }
        m
    }

    /// `h_{index+1}^power`.
    pub fn monomial(index: usize, power: u32) -> Self {
        let mut e = vec![0; index + 1];
        e[index] = power;
        let mut m = Self::zero();
        m.terms.insert(trim_exponents(e), BigInt::one());
        m
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_constant(&self) -> Option<BigInt> {
        match self.terms.len() {
            0 => Some(BigInt::zero()),
            1 => self.terms.get(&Vec::new()).cloned(),
            _ => None,
        }
    }

    fn add_term(&mut self, e: Vec<u32>, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let e = trim_exponents(e);
        let entry = self.terms.entry(e.clone()).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let len = e1.len().max(e2.len());
                let e: Vec<u32> = (0..len)
                    .map(|i| e1.get(i).copied().unwrap_or(0) + e2.get(i).copied().unwrap_or(0))
                    .collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    /// `k · h_{index+1}^power · self`.
    fn times_monomial(&self, index: usize, power: u32, k: &BigInt) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut e = e.clone();
                if power > 0 {
                    if e.len() <= index {
                        e.resize(index + 1, 0);
                    }
                    e[index] += power;
                }
                (e, c * k)
            })
            .collect();
        Self { terms }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect(),
        }
    }

    /// Number of parameters that occur.
    pub fn arity(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    /// Value at integer parameters (missing entries count as 0).
    pub fn eval(&self, h: &[i64]) -> BigInt {
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter().enumerate().fold(c.clone(), |acc, (i, &k)| {
                    acc * BigInt::from(h.get(i).copied().unwrap_or(0)).pow(k)
                })
            })
            .sum()
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { format!("h{}", i + 1) } else { format!("h{}^{}", i + 1, k) })
                .collect();
            write_term(f, c, &mono.join("*"), first)?;
            first = false;
        }
        Ok(())
    }
}

/// Writes `± |c|·mono` with the usual elisions.
fn write_term(f: &mut fmt::Formatter<'_>, c: &BigInt, mono: &str, first: bool) -> fmt::Result {
    let sign = if c.is_negative() { "-" } else { "+" };
    let a = c.abs();
    match (first, c.is_negative()) {
        (true, true) => write!(f, "-")?,
        (true, false) => {}
        (false, _) => write!(f, " {sign} ")?,
    }
    if mono.is_empty() {
        write!(f, "{a}")
    } else if a.is_one() {
        write!(f, "{mono}")
    } else {
        write!(f, "{a}{mono}")
    }
}

/// Polynomial in `n` with integer coefficients, constant term first.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn eval(&self, n: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * n + c)
    }

    /// Parse sums of terms like `3x^2`, `-x`, `2*n`, `7` in the variable `x` or `n`.
    pub fn parse(s: &str) -> Result<Self> {
        let text: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if text.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let bad = || Error::Parse(format!("cannot parse polynomial '{s}'"));
        let mut terms = Vec::new();
        let mut start = 0;
        for (i, ch) in text.char_indices() {
            if (ch == '+' || ch == '-') && i > 0 && !text[..i].ends_with('^') {
                terms.push(&text[start..i]);
                start = i;
            }
        }
        terms.push(&text[start..]);
        let mut coeffs: Vec<BigInt> = Vec::new();
        for term in terms {
            let (neg, body) = match term.as_bytes().first() {
                Some(b'-') => (true, &term[1..]),
                Some(b'+') => (false, &term[1..]),
                _ => (false, term),
            };
            if body.is_empty() {
                return Err(bad());
            }
            let var_pos = body.find(['x', 'n']);
            let (coef, power) = match var_pos {
                None => (body.parse::<BigInt>().map_err(|_| bad())?, 0usize),
                Some(p) => {
                    let head = body[..p].trim_end_matches('*');
                    let coef = if head.is_empty() {
                        BigInt::one()
                    } else {
                        head.parse::<BigInt>().map_err(|_| bad())?
                    };
                    let tail = &body[p + 1..];
                    let power = if tail.is_empty() {
                        1
                    } else {
                        tail.strip_prefix('^')
                            .ok_or_else(bad)?
                            .parse::<usize>()
                            .map_err(|_| bad())?
                    };
                    (coef, power)
                }
            };
            if power > 64 {
                return Err(bad());
            }
            if coeffs.len() <= power {
                coeffs.resize(power + 1, BigInt::zero());
            }
            coeffs[power] += if neg { -coef } else { coef };
        }
        Ok(Self::new(coeffs))
    }
}

impl fmt::Display for IntPolynomial {
    /// Ascending powers of `n`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            let mono = match j {
                0 => String::new(),
                1 => "n".to_string(),
                _ => format!("n^{j}"),
            };
            write_term(f, c, &mono, first)?;
            first = false;
        }
        Ok(())
    }
}

/// Same degree and same leading coefficient.
pub fn equivalent(p1: &IntPolynomial, p2: &IntPolynomial) -> Result<bool> {
    if p1.is_zero() || p2.is_zero() {
        return arg("equivalence is defined for nonzero polynomials");
    }
    Ok(p1.degree() == p2.degree() && p1.leading() == p2.leading())
}

/// Polynomial in `n` with coefficients in `ℤ[h_1, …, h_k]`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HPolynomial {
    coeffs: Vec<MPoly>,
}

impl HPolynomial {
    pub fn new(mut coeffs: Vec<MPoly>) -> Self {
        while coeffs.last().is_some_and(MPoly::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[MPoly] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Generic degree in `n`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&MPoly> {
        self.coeffs.last()
    }

    pub fn sub(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let zero = MPoly::zero();
        Self::new(
            (0..len)
                .map(|i| {
                    self.coeffs.get(i).unwrap_or(&zero).sub(other.coeffs.get(i).unwrap_or(&zero))
                })
                .collect(),
        )
    }

    /// `p(n + h_{index+1})`.
    pub fn shift(&self, index: usize) -> Self {
        let mut out = vec![MPoly::zero(); self.coeffs.len()];
        for (j, c) in self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (i, slot) in out.iter_mut().enumerate().take(j + 1) {
                let b = binomial(BigInt::from(j), BigInt::from(i));
                *slot = slot.add(&c.times_monomial(index, (j - i) as u32, &b));
            }
        }
        Self::new(out)
    }

    /// Drops the `n⁰` coefficient.
    pub fn without_constant(&self) -> Self {
        let mut c = self.coeffs.clone();
        if let Some(first) = c.first_mut() {
            *first = MPoly::zero();
        }
        Self::new(c)
    }

    pub fn arity(&self) -> usize {
        self.coeffs.iter().map(MPoly::arity).max().unwrap_or(0)
    }

    /// Integer polynomial obtained by fixing every parameter.
    pub fn specialize(&self, h: &[i64]) -> IntPolynomial {
        IntPolynomial::new(self.coeffs.iter().map(|c| c.eval(h)).collect())
    }
}

impl From<&IntPolynomial> for HPolynomial {
    fn from(p: &IntPolynomial) -> Self {
        Self::new(p.coeffs.iter().cloned().map(MPoly::constant).collect())
    }
}

impl fmt::Display for HPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        for (j, c) in self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            let mono = match j {
                0 => String::new(),
                1 => "n".to_string(),
                _ => format!("n^{j}"),
            };
            let part = match (c.as_constant(), mono.is_empty()) {
                (Some(k), _) => {
                    let mut s = String::new();
                    let _ = fmt::write(&mut s, format_args!("{}", TermFmt(&k, &mono)));
                    s
                }
                (None, true) => format!("{c}"),
                (None, false) if c.terms.len() == 1 => format!("{c}*{mono}"),
                (None, false) => format!("({c})*{mono}"),
            };
            parts.push(part);
        }
        let mut out = parts[0].clone();
        for p in &parts[1..] {
            match p.strip_prefix('-') {
                Some(rest) => out.push_str(&format!(" - {rest}")),
                None => out.push_str(&format!(" + {p}")),
            }
        }
        write!(f, "{out}")
    }
}

struct TermFmt<'a>(&'a BigInt, &'a str);

impl fmt::Display for TermFmt<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_term(f, self.0, self.1, true)
    }
}

/// `(s_1, …, s_d)` with `s_d > 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct CharacteristicVector(pub Vec<u64>);

impl CharacteristicVector {
    pub fn new(entries: Vec<u64>) -> Result<Self> {
        match entries.last() {
            Some(&s) if s > 0 => Ok(Self(entries)),
            _ => arg("characteristic vector must be nonempty with positive last entry"),
        }
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[u64] {
        &self.0
    }

    /// The base case `(1)`: a single linear class.
    pub fn is_base(&self) -> bool {
        self.0 == [1]
    }
}

impl Ord for CharacteristicVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.iter().rev().cmp(other.0.iter().rev()))
    }
}

impl PartialOrd for CharacteristicVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for CharacteristicVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(u64::to_string).collect();
        write!(f, "({})", s.join(","))
    }
}

pub fn cv_less(v1: &CharacteristicVector, v2: &CharacteristicVector) -> bool {
    v1 < v2
}

/// A finite set of nonzero polynomials in `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyFamily {
    members: Vec<HPolynomial>,
    /// Number of shift parameters introduced so far.
    params: usize,
}

impl PolyFamily {
    /// Deduplicates and drops zero members.
    pub fn new(members: Vec<HPolynomial>, params: usize) -> Result<Self> {
        let set: BTreeSet<HPolynomial> = members.into_iter().filter(|p| !p.is_zero()).collect();
        if set.is_empty() {
            return arg("family is empty after removing zero polynomials");
        }
        Ok(Self {
            members: set.into_iter().collect(),
            params,
        })
    }

    pub fn from_int(members: &[IntPolynomial]) -> Result<Self> {
        Self::new(members.iter().map(HPolynomial::from).collect(), 0)
    }

    /// `;`-separated polynomials, e.g. `x;2x-1;x^3+1`.
    pub fn parse(s: &str) -> Result<Self> {
        let members = s
            .split(';')
            .filter(|t| !t.trim().is_empty())
            .map(IntPolynomial::parse)
            .collect::<Result<Vec<_>>>()?;
        Self::from_int(&members)
    }

    pub fn members(&self) -> &[HPolynomial] {
        &self.members
    }

    pub fn params(&self) -> usize {
        self.params
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn min_degree(&self) -> usize {
        self.members.iter().filter_map(HPolynomial::degree).min().unwrap_or(0)
    }

    /// Pairs of distinct members whose difference does not involve `n`.
    pub fn constant_differences(&self) -> Vec<(usize, usize)> {
        let mut seen: BTreeMap<HPolynomial, usize> = BTreeMap::new();
        let mut out = Vec::new();
        for (i, p) in self.members.iter().enumerate() {
            match seen.entry(p.without_constant()) {
                std::collections::btree_map::Entry::Occupied(e) => out.push((*e.get(), i)),
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(i);
                }
            }
        }
        out
    }

    fn check_hypothesis(&self) -> Result<()> {
        if let Some(&(i, j)) = self.constant_differences().first() {
            return Err(Error::Precondition(format!(
                "members {} and {} differ by a constant",
                self.members[i], self.members[j]
            )));
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "params": self.params,
            "members": self.members.iter().map(ToString::to_string).collect::<Vec<_>>(),
        })
    }
}

/// Counts equivalence classes per degree.
pub fn characteristic_vector(family: &PolyFamily) -> Result<CharacteristicVector> {
    let mut classes: BTreeSet<(usize, &MPoly)> = BTreeSet::new();
    for p in &family.members {
        match p.degree() {
            Some(d) if d >= 1 => {
                classes.insert((d, p.leading().expect("nonzero")));
            }
            _ => return arg(format!("member {p} is constant in n and has no class")),
        }
    }
    let d = classes.iter().map(|(d, _)| *d).max().ok_or_else(|| Error::Argument("empty family".into()))?;
    let mut v = vec![0u64; d];
    for (deg, _) in classes {
        v[deg - 1] += 1;
    }
    CharacteristicVector::new(v)
}

#[derive(Debug, Clone)]
pub struct Reduction {
    pub family: PolyFamily,
    /// 1 when the selected member has degree > 1, 2 when it is linear.
    pub case: u8,
    pub selected: HPolynomial,
    pub before: CharacteristicVector,
    pub after: CharacteristicVector,
    /// Values of the new parameter in `[-64, 64]` where the generic
    /// description degenerates (only computed for one-parameter families).
    pub exceptional_h: Option<Vec<i64>>,
}

/// One van der Corput step. `selected` indexes a member of minimal degree;
/// `None` picks the first such member.
pub fn reduce_family(family: &PolyFamily, selected: Option<usize>) -> Result<Reduction> {
    family.check_hypothesis()?;
    let before = characteristic_vector(family)?;
    if before.is_base() {
        return arg("family is at the base case (1); nothing to reduce");
    }
    let stripped: Vec<HPolynomial> = family.members.iter().map(HPolynomial::without_constant).collect();
    let e = family.min_degree();
    let qi = match selected {
        Some(i) if i >= stripped.len() => return arg(format!("member index {i} out of range")),
        Some(i) if stripped[i].degree() != Some(e) => {
            return arg(format!("member {} is not of minimal degree {e}", family.members[i]))
        }
        Some(i) => i,
        None => stripped.iter().position(|p| p.degree() == Some(e)).expect("min degree attained"),
    };
    let q = &stripped[qi];
    let h = family.params;
    let mut out = Vec::new();
    if e > 1 {
        for (i, p) in stripped.iter().enumerate() {
            if i != qi {
                out.push(p.sub(q));
            }
            out.push(p.shift(h).sub(q));
        }
    } else {
        for p in &stripped {
            match p.degree() {
                Some(1) => out.push(p.sub(q)),
                _ => {
                    out.push(p.sub(q));
                    out.push(p.shift(h).sub(q));
                }
            }
        }
    }
    // constant-in-n leftovers vanish once constants are stripped
    out.retain(|p| p.degree().unwrap_or(0) >= 1);
    let reduced = PolyFamily::new(out, h + 1)?;
    let after = characteristic_vector(&reduced)?;
    if after >= before {
        return Err(Error::Invariant(format!(
            "reduction did not decrease the characteristic vector: {before} -> {after}"
        )));
    }
    let exceptional_h = (reduced.params == 1).then(|| exceptional_shifts(&reduced));
    Ok(Reduction {
        family: reduced,
        case: if e > 1 { 1 } else { 2 },
        selected: family.members[qi].clone(),
        before,
        after,
        exceptional_h,
    })
}

/// Shifts where some leading coefficient, or the difference of two
/// inequivalent leading coefficients of equal degree, vanishes.
fn exceptional_shifts(family: &PolyFamily) -> Vec<i64> {
    let mut critical: Vec<MPoly> = family
        .members
        .iter()
        .filter_map(|p| p.leading().cloned())
        .collect();
    for (i, a) in family.members.iter().enumerate() {
        for b in &family.members[i + 1..] {
            if a.degree() == b.degree() && a.leading() != b.leading() {
                critical.push(a.leading().expect("nonzero").sub(b.leading().expect("nonzero")));
            }
        }
    }
    (-EXCEPTIONAL_H_RANGE..=EXCEPTIONAL_H_RANGE)
        .filter(|&h| critical.iter().any(|c| c.eval(&[h]).is_zero()))
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct DescentChain {
    pub vectors: Vec<CharacteristicVector>,
    /// Sizes of the families along the chain.
    pub sizes: Vec<usize>,
    /// Reached the base case `(1)`.
    pub terminated: bool,
    pub diagnostic: Option<String>,
}

impl DescentChain {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn is_strictly_decreasing(&self) -> bool {
        self.vectors.windows(2).all(|w| w[1] < w[0])
    }

    pub fn to_json(&self) -> Value {
        json!({
            "vectors": self.vectors.iter().map(|v| v.0.clone()).collect::<Vec<_>>(),
            "sizes": self.sizes,
            "length": self.len(),
            "terminated": self.terminated,
            "diagnostic": self.diagnostic,
        })
    }
}

/// Limits for [`descent_chain_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DescentBudget {
    pub max_steps: usize,
    /// Largest family size a reduction may produce before the chain is abandoned.
    pub max_family_size: usize,
}

impl Default for DescentBudget {
    fn default() -> Self {
        Self {
            max_steps: MAX_CHAIN_STEPS,
            max_family_size: 1 << 14,
        }
    }
}

/// Repeated reduction until the characteristic vector is `(1)`, with the default budget.
pub fn descent_chain(family: &PolyFamily) -> Result<DescentChain> {
    descent_chain_with(family, DescentBudget::default())
}

/// Family sizes roughly double at every step, so long chains are cut off by
/// `budget`; the partial chain is returned with a diagnostic.
pub fn descent_chain_with(family: &PolyFamily, budget: DescentBudget) -> Result<DescentChain> {
    let mut current = family.clone();
    let mut chain = DescentChain {
        vectors: vec![characteristic_vector(&current)?],
        sizes: vec![current.len()],
        terminated: false,
        diagnostic: None,
    };
    for _ in 0..budget.max_steps {
        if chain.vectors.last().expect("nonempty").is_base() {
            chain.terminated = true;
            return Ok(chain);
        }
        if 2 * current.len() > budget.max_family_size {
            chain.diagnostic = Some(format!(
                "next family may exceed {} members; stopped after {} steps",
                budget.max_family_size,
                chain.len() - 1
            ));
            return Ok(chain);
        }
        match reduce_family(&current, None) {
            Ok(r) => {
                chain.vectors.push(r.after);
                chain.sizes.push(r.family.len());
                current = r.family;
            }
            Err(e @ Error::Precondition(_)) => {
                chain.diagnostic = Some(e.to_string());
                return Ok(chain);
            }
            Err(e) => return Err(e),
        }
    }
    chain.terminated = chain.vectors.last().expect("nonempty").is_base();
    if !chain.terminated {
        chain.diagnostic = Some(format!("stopped after {} steps", budget.max_steps));
    }
    Ok(chain)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cv(v: &[u64]) -> CharacteristicVector {
        CharacteristicVector::new(v.to_vec()).unwrap()
    }

    fn fam(s: &str) -> PolyFamily {
        PolyFamily::parse(s).unwrap()
    }

    #[test]
    fn parse_and_print() {
        let p = IntPolynomial::parse("x^3+2x^2").unwrap();
        assert_eq!(p, IntPolynomial::from_i64(&[0, 0, 2, 1]));
        assert_eq!(p.to_string(), "2n^2 + n^3");
        assert_eq!(IntPolynomial::parse("2x - 1").unwrap().to_string(), "-1 + 2n");
        assert_eq!(IntPolynomial::parse("-n^2+3*n").unwrap(), IntPolynomial::from_i64(&[0, 3, -1]));
        assert_eq!(IntPolynomial::parse("7").unwrap().degree(), Some(0));
        assert!(IntPolynomial::parse("x^").is_err());
        assert!(IntPolynomial::parse("2y").is_err());
    }

    #[test]
    fn equivalence_examples() {
        let p = |s| IntPolynomial::parse(s).unwrap();
        assert!(!equivalent(&p("x"), &p("2x-1")).unwrap());
        assert!(equivalent(&p("2x"), &p("2x-1")).unwrap());
        assert!(equivalent(&p("x^3+2x^2"), &p("x^3+1")).unwrap());
        assert!(equivalent(&p("0"), &p("x")).is_err());
    }

    #[test]
    fn vector_examples() {
        assert_eq!(characteristic_vector(&fam("x;2x-1;3x;x^3+2x^2;x^3+1")).unwrap(), cv(&[3, 0, 1]));
        assert_eq!(characteristic_vector(&fam("n^2")).unwrap(), cv(&[0, 1]));
        assert_eq!(characteristic_vector(&fam("x;x+5;2x")).unwrap(), cv(&[2]));
        assert_eq!(characteristic_vector(&fam("x;x+5;2x")).unwrap().to_string(), "(2)");
    }

    #[test]
    fn ordering_examples() {
        assert!(cv_less(&cv(&[1, 2, 3]), &cv(&[0, 0, 0, 1])));
        assert!(cv_less(&cv(&[9, 3, 5, 2, 4]), &cv(&[1, 7, 6, 2, 4])));
        assert!(!cv_less(&cv(&[2, 1]), &cv(&[2, 1])));
        assert!(CharacteristicVector::new(vec![1, 0]).is_err());
    }

    #[test]
    fn square_reduces_to_linear() {
        let r = reduce_family(&fam("n^2"), None).unwrap();
        assert_eq!(r.case, 1);
        assert_eq!(r.family.len(), 1);
        assert_eq!(r.family.members()[0].to_string(), "h1^2 + 2h1*n");
        assert_eq!(r.after, cv(&[1]));
        assert_eq!(r.exceptional_h, Some(vec![0]));
    }

    #[test]
    fn linear_pair_case_two() {
        let r = reduce_family(&fam("n;2n"), Some(0)).unwrap();
        assert_eq!(r.case, 2);
        assert_eq!(r.family.members()[0].to_string(), "n");
        assert_eq!(r.after, cv(&[1]));
    }

    #[test]
    fn linear_cubic_case_two_merges() {
        let r = reduce_family(&fam("n;n^3"), None).unwrap();
        assert_eq!(r.family.len(), 2);
        assert_eq!(r.after, cv(&[0, 0, 1]));
        assert!(cv_less(&r.after, &cv(&[1, 0, 1])));
    }

    #[test]
    fn selection_must_have_minimal_degree() {
        let f = fam("n;n^3");
        let cubic = f.members().iter().position(|p| p.degree() == Some(3)).unwrap();
        assert!(matches!(reduce_family(&f, Some(cubic)), Err(Error::Argument(_))));
    }

    #[test]
    fn constant_difference_rejected() {
        assert!(matches!(reduce_family(&fam("n^2;n^2+3"), None), Err(Error::Precondition(_))));
        let c = descent_chain(&fam("n^2;n^2+3")).unwrap();
        assert!(c.diagnostic.is_some() && !c.terminated);
    }

    #[test]
    fn chain_examples() {
        let c = descent_chain(&fam("n^2")).unwrap();
        assert_eq!(c.vectors, vec![cv(&[0, 1]), cv(&[1])]);
        let c = descent_chain(&fam("n")).unwrap();
        assert_eq!(c.len(), 1);
        assert!(c.terminated);
        let c = descent_chain(&fam("n;n^2;2n^2")).unwrap();
        assert!(c.is_strictly_decreasing());
        let tight = DescentBudget { max_steps: 200, max_family_size: 64 };
        let c = descent_chain_with(&fam("x^3;2x^3"), tight).unwrap();
        assert!(!c.terminated && c.diagnostic.is_some());
        assert!(c.sizes.iter().all(|&s| s <= 64));
    }

    #[test]
    fn shift_matches_substitution() {
        let p = HPolynomial::from(&IntPolynomial::parse("3n^3 - n + 4").unwrap());
        let s = p.shift(0);
        for h in -3..=3i64 {
            let spec = s.specialize(&[h]);
            for n in -5..=5i64 {
                let lhs = spec.eval(&BigInt::from(n));
                let rhs = p.specialize(&[]).eval(&BigInt::from(n + h));
                assert_eq!(lhs, rhs);
            }
        }
    }
}
