//! Finite IP-set combinatorics, window syndeticity checks and monochromatic pattern searches.

use std::fmt;
use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::besicovitch::Bits;
use crate::error::{arg, Error, Result};
use crate::pet::IntPolynomial;

/// Largest generator count accepted by [`ip_enumerate`].
pub const MAX_IP_GENERATORS: usize = 24;
const MAX_ROOT_BITS: u64 = 1 << 13;

/// Strictly increasing positive generators `n_1 < ... < n_s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IPGenerators(Vec<u64>);

impl IPGenerators {
    pub fn new(gens: Vec<u64>) -> Result<Self> {
        if gens.is_empty() {
            return arg("IP generators must be nonempty");
        }
        if gens[0] == 0 {
            return arg("IP generators must be positive");
        }
        if gens.windows(2).any(|w| w[0] >= w[1]) {
            return arg("IP generators must be strictly increasing");
        }
        Ok(Self(gens))
    }

    /// Comma-separated list, e.g. `1,2,4`.
    pub fn parse(s: &str) -> Result<Self> {
        let gens = s
            .split(',')
            .map(|t| t.trim().parse::<u64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::Parse(format!("cannot parse generators '{s}'")))?;
        Self::new(gens)
    }

    /// `1, 2, 4, ..., 2^(s-1)`.
    pub fn powers_of_two(s: usize) -> Result<Self> {
        if s == 0 || s > 63 {
            return arg("power-of-two generator count must be in 1..=63");
        }
        Self::new((0..s).map(|k| 1u64 << k).collect())
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Largest finite sum `n_1 + ... + n_s`, `None` on overflow.
    pub fn total(&self) -> Option<u64> {
        self.0.iter().try_fold(0u64, |acc, &g| acc.checked_add(g))
    }
}

impl fmt::Display for IPGenerators {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Distinct finite sums with the number of subsets producing each.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IpEnumeration {
    pub values: Vec<u64>,
    pub multiplicity: Vec<u32>,
}

impl IpEnumeration {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn all_distinct(&self) -> bool {
        self.multiplicity.iter().all(|&m| m == 1)
    }

    pub fn contains(&self, v: u64) -> bool {
        self.values.binary_search(&v).is_ok()
    }
}

/// All sums over nonempty subsets of the generators, sorted, with multiplicities.
pub fn ip_enumerate(gens: &IPGenerators) -> Result<IpEnumeration> {
    let s = gens.len();
    if s > MAX_IP_GENERATORS {
        return Err(Error::Resource(format!(
            "{s} generators exceed the enumeration limit of {MAX_IP_GENERATORS}"
        )));
    }
    if gens.total().is_none() {
        return arg("IP sums overflow u64");
    }
    let mut sums = Vec::with_capacity(1 << s);
    sums.push(0u64);
    for &g in gens.as_slice() {
        let k = sums.len();
        for i in 0..k {
            sums.push(sums[i] + g);
        }
    }
    sums.swap_remove(0);
    sums.sort_unstable();
    let mut values = Vec::with_capacity(sums.len());
    let mut multiplicity: Vec<u32> = Vec::with_capacity(sums.len());
    for v in sums {
        if values.last() == Some(&v) {
            *multiplicity.last_mut().unwrap() += 1;
        } else {
            values.push(v);
            multiplicity.push(1);
        }
    }
    Ok(IpEnumeration { values, multiplicity })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IpStarEntry {
    pub generators: IPGenerators,
    pub met: Option<bool>,
    pub witness: Option<u64>,
    pub warning: Option<String>,
}

/// Window-consistent IP* verdict: `consistent` iff every checked set is met.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IpStarReport {
    pub window: u64,
    pub entries: Vec<IpStarEntry>,
    pub consistent: bool,
}

impl IpStarReport {
    pub fn to_json(&self) -> Value {
        let entries: Vec<Value> = self
            .entries
            .iter()
            .map(|e| {
                json!({
                    "generators": e.generators.as_slice(),
                    "met": e.met,
                    "witness": e.witness,
                    "warning": e.warning,
                })
            })
            .collect();
        json!({
            "window": self.window,
            "entries": entries,
            "verdict": if self.consistent { "IP*-consistent on window" } else { "not IP*-consistent on window" },
        })
    }
}

/// Check whether `a` meets each finite IP set; sets with sums beyond the window are skipped.
pub fn ip_star_window_test(a: &Bits, ip_list: &[IPGenerators]) -> Result<IpStarReport> {
    let window = a.len();
    let mut entries = Vec::with_capacity(ip_list.len());
    for gens in ip_list {
        if gens.total().is_none_or(|t| t > window) {
            entries.push(IpStarEntry {
                generators: gens.clone(),
                met: None,
                witness: None,
                warning: Some(format!("sums of {gens} exceed the window [1..{window}]; skipped")),
            });
            continue;
        }
        let sums = ip_enumerate(gens)?;
        let witness = sums.values.iter().copied().find(|&v| a.get(v));
        entries.push(IpStarEntry {
            generators: gens.clone(),
            met: Some(witness.is_some()),
            witness,
            warning: None,
        });
    }
    let consistent = entries.iter().all(|e| e.met != Some(false));
    Ok(IpStarReport { window, entries, consistent })
}

/// Largest gap between consecutive members, counting `first - 0` and `(N + 1) - last`.
/// `None` stands for an unbounded gap (empty set).
pub fn syndetic_gap(a: &Bits) -> Option<u64> {
    let mut prev = 0u64;
    let mut gap = 0u64;
    let mut any = false;
    for n in a.iter_ones() {
        gap = gap.max(n - prev);
        prev = n;
        any = true;
    }
    if !any {
        return None;
    }
    Some(gap.max(a.len() + 1 - prev))
}

/// First start `s` such that `[s, s + l - 1]` contains no run of `g` consecutive non-members.
pub fn piecewise_syndetic_scan(a: &Bits, g: u64, l: u64) -> Result<Option<u64>> {
    let n = a.len();
    if g == 0 || l == 0 {
        return arg("gap bound and interval length must be positive");
    }
    if l > n {
        return arg(format!("interval length {l} exceeds window {n}"));
    }
    if g > l {
        return arg(format!("gap bound {g} exceeds interval length {l}"));
    }
    // bad[i]: positions i-g+1..=i are all non-members; prefix[i] counts bad ends <= i.
    let mut prefix = vec![0u32; n as usize + 1];
    let mut run = 0u64;
    for i in 1..=n {
        run = if a.get(i) { 0 } else { run + 1 };
        prefix[i as usize] = prefix[i as usize - 1] + u32::from(run >= g);
    }
    for s in 1..=(n - l + 1) {
        let lo = (s + g - 1) as usize;
        let hi = (s + l - 1) as usize;
        if prefix[hi] == prefix[lo - 1] {
            return Ok(Some(s));
        }
    }
    Ok(None)
}

/// Colors in `1..=r` on the window `[1..N]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coloring {
    colors: Vec<u32>,
    r: u32,
}

impl Coloring {
    pub fn new(colors: Vec<u32>, r: u32) -> Result<Self> {
        if r == 0 {
            return arg("a coloring needs at least one color");
        }
        if let Some((i, c)) = colors.iter().enumerate().find(|(_, &c)| c == 0 || c > r) {
            return arg(format!("color {c} at position {} is outside 1..={r}", i + 1));
        }
        Ok(Self { colors, r })
    }

    pub fn monochrome(n: u64) -> Self {
        Self { colors: vec![1; n as usize], r: 1 }
    }

    /// Color `n` by its membership in `set` (1 = member, 2 = not).
    pub fn from_set(set: &Bits) -> Self {
        let colors = (1..=set.len()).map(|n| if set.get(n) { 1 } else { 2 }).collect();
        Self { colors, r: 2 }
    }

    pub fn len(&self) -> u64 {
        self.colors.len() as u64
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn colors(&self) -> u32 {
        self.r
    }

    /// Color of `n`, `None` outside `[1..N]`.
    pub fn get(&self, n: u64) -> Option<u32> {
        if n == 0 {
            return None;
        }
        self.colors.get(n as usize - 1).copied()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.colors
    }

    /// Header `N r`, then `N` entries separated by whitespace or commas.
    /// When `r <= 9` the entries may also be a run of bare digits.
    pub fn parse(text: &str) -> Result<Self> {
        let bad = |m: &str| Error::Parse(format!("coloring: {m}"));
        let mut lines = text.lines().filter(|l| !l.trim().is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| bad("missing header"))?;
        let mut head = header.split_whitespace();
        let n: usize = head
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| bad("header must be 'N r'"))?;
        let r: u32 = head
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| bad("header must be 'N r'"))?;
        let body: Vec<&str> = lines.collect();
        let tokens: Vec<&str> = body
            .iter()
            .flat_map(|l| l.split(|c: char| c.is_whitespace() || c == ','))
            .filter(|t| !t.is_empty())
            .collect();
        let colors: Vec<u32> = if tokens.len() == n {
            tokens
                .iter()
                .map(|t| t.parse::<u32>().map_err(|_| bad(&format!("bad entry '{t}'"))))
                .collect::<Result<_>>()?
        } else if r <= 9 {
            tokens
                .concat()
                .chars()
                .map(|c| c.to_digit(10).ok_or_else(|| bad(&format!("bad digit '{c}'"))))
                .collect::<Result<_>>()?
        } else {
            return Err(bad(&format!("expected {n} entries, found {}", tokens.len())));
        };
        if colors.len() != n {
            return Err(bad(&format!("expected {n} entries, found {}", colors.len())));
        }
        Self::new(colors, r)
    }

    pub fn to_text(&self) -> String {
        let sep = if self.r <= 9 { "" } else { " " };
        let body: Vec<String> = self.colors.iter().map(u32::to_string).collect();
        format!("{} {}\n{}\n", self.colors.len(), self.r, body.join(sep))
    }
}

/// Displacement `a(n)`: an integer polynomial, or `floor(a(n^(1/m)))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Displacement {
    Poly(IntPolynomial),
    FloorPower { poly: IntPolynomial, m: u32 },
}

impl Displacement {
    /// `2n^2`, or `floor:<poly in x>:<m>` for `floor(poly(n^(1/m)))`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("floor:") {
            let (poly, m) = rest
                .rsplit_once(':')
                .ok_or_else(|| Error::Parse(format!("floor displacement needs ':m' in '{s}'")))?;
            let m: u32 = m
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad root order in '{s}'")))?;
            if m == 0 {
                return Err(Error::Parse("root order must be positive".into()));
            }
            return Ok(Self::FloorPower { poly: IntPolynomial::parse(poly)?, m });
        }
        Ok(Self::Poly(IntPolynomial::parse(s)?))
    }

    pub fn eval(&self, n: u64) -> Result<BigInt> {
        match self {
            Self::Poly(p) => Ok(p.eval(&BigInt::from(n))),
            Self::FloorPower { poly, m } => floor_poly_root(poly, *m, n),
        }
    }
}

impl fmt::Display for Displacement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Poly(p) => write!(f, "{p}"),
            Self::FloorPower { poly, m } => {
                let x = poly.to_string().replace('n', "x");
                write!(f, "floor:{x}:{m}")
            }
        }
    }
}

/// `floor(poly(n^(1/m)))`, exact.
pub fn floor_poly_root(poly: &IntPolynomial, m: u32, n: u64) -> Result<BigInt> {
    if m == 0 {
        return arg("root order must be positive");
    }
    // Smallest t | m with n^(t/m) an integer; then x = base^(1/t) has degree t over Q.
    let (t, base) = (1..=m)
        .filter(|t| m.is_multiple_of(*t))
        .find_map(|t| {
            let e = m / t;
            let r = n.nth_root(e);
            (BigInt::from(r).pow(e) == BigInt::from(n)).then_some((t, BigInt::from(r)))
        })
        .expect("t = m always qualifies");
    let mut b = vec![BigInt::zero(); t as usize];
    for (j, c) in poly.coeffs().iter().enumerate() {
        let (q, r) = (j as u32 / t, j as u32 % t);
        b[r as usize] += c * base.pow(q);
    }
    if b[1..].iter().all(Zero::is_zero) {
        return Ok(b[0].clone());
    }
    let mut bits = 64u64;
    while bits <= MAX_ROOT_BITS {
        let scaled: BigInt = &base << (bits * t as u64);
        let lo = scaled.nth_root(t);
        let hi: BigInt = &lo + 1;
        let top = bits * (t as u64 - 1);
        let mut sum_lo = &b[0] << top;
        let mut sum_hi = sum_lo.clone();
        for (r, c) in b.iter().enumerate().skip(1) {
            let shift = bits * (t as u64 - 1 - r as u64);
            let a = lo.pow(r as u32) << shift;
            let z = hi.pow(r as u32) << shift;
            if c.is_negative() {
                sum_lo += c * &z;
                sum_hi += c * &a;
            } else {
                sum_lo += c * &a;
                sum_hi += c * &z;
            }
        }
        let denom = BigInt::one() << top;
        let f_lo = sum_lo.div_floor(&denom);
        let f_hi = sum_hi.div_floor(&denom);
        // The true value is irrational, so it is never equal to sum_hi's floor boundary.
        if f_lo == f_hi || (f_hi == &f_lo + 1 && sum_hi.is_multiple_of(&denom)) {
            return Ok(f_lo);
        }
        bits *= 2;
    }
    Err(Error::Resource(format!("floor of polynomial at {n}^(1/{m}) did not resolve")))
}

/// Displacements `a_1(n), ..., a_k(n)`; the base point `x` itself is implicit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternFamily(Vec<Displacement>);

impl PatternFamily {
    pub fn new(members: Vec<Displacement>) -> Result<Self> {
        if members.is_empty() {
            return arg("pattern family must be nonempty");
        }
        Ok(Self(members))
    }

    /// `;`-separated displacements, e.g. `n;2n` or `floor:x:2;floor:x^3:2`.
    pub fn parse(s: &str) -> Result<Self> {
        let members = s
            .split(';')
            .filter(|t| !t.trim().is_empty())
            .map(Displacement::parse)
            .collect::<Result<Vec<_>>>()?;
        Self::new(members)
    }

    pub fn members(&self) -> &[Displacement] {
        &self.0
    }

    /// Displacement values at `n`; a negative value violates the family's invariant.
    /// `Ok(None)` if some value exceeds `limit`.
    pub fn values(&self, n: u64, limit: u64) -> Result<Option<Vec<u64>>> {
        let mut out = Vec::with_capacity(self.0.len());
        for d in &self.0 {
            let v = d.eval(n)?;
            if v.is_negative() {
                return Err(Error::Precondition(format!("displacement {d} is negative at n = {n}")));
            }
            match v.to_u64() {
                Some(v) if v <= limit => out.push(v),
                _ => return Ok(None),
            }
        }
        Ok(Some(out))
    }
}

impl fmt::Display for PatternFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(Displacement::to_string).collect();
        write!(f, "{}", parts.join(";"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PatternHit {
    pub color: u32,
    pub x: u64,
    pub n: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternSearch {
    pub hit: Option<PatternHit>,
    pub window: u64,
    pub candidates: usize,
    pub verified: bool,
}

impl PatternSearch {
    pub fn to_json(&self) -> Value {
        json!({
            "hit": self.hit.map(|h| json!({"color": h.color, "x": h.x, "n": h.n})),
            "stats": {
                "window": self.window,
                "candidates": self.candidates,
                "verified": self.verified,
            },
        })
    }
}

fn first_mono_base(coloring: &Coloring, disps: &[u64]) -> Option<(u32, u64)> {
    let n = coloring.len();
    let reach = disps.iter().copied().max().unwrap_or(0);
    if reach >= n {
        return None;
    }
    (1..=n - reach).find_map(|x| {
        let c = coloring.get(x)?;
        disps
            .iter()
            .all(|&d| coloring.get(x + d) == Some(c))
            .then_some((c, x))
    })
}

fn find_first_ordered<T, F>(items: &[u64], f: F) -> Result<Option<T>>
where
    T: Send,
    F: Fn(u64) -> Result<Option<T>> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        let found = items
            .par_iter()
            .map(|&n| f(n))
            .find_first(|r| !matches!(r, Ok(None)));
        found.unwrap_or(Ok(None))
    }
    #[cfg(not(feature = "parallel"))]
    {
        for &n in items {
            if let Some(hit) = f(n)? {
                return Ok(Some(hit));
            }
        }
        Ok(None)
    }
}

/// Direct membership check of a reported hit.
pub fn verify_pattern_hit(coloring: &Coloring, patterns: &PatternFamily, hit: &PatternHit) -> Result<bool> {
    if coloring.get(hit.x) != Some(hit.color) {
        return Ok(false);
    }
    for d in patterns.members() {
        let v = d.eval(hit.n)?;
        let ok = v
            .to_u64()
            .and_then(|v| hit.x.checked_add(v))
            .and_then(|y| coloring.get(y))
            == Some(hit.color);
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// First `(n, x)` in `(n, x)` ascending order with `{x} ∪ {x + a_i(n)}` monochromatic.
pub fn pattern_search(coloring: &Coloring, patterns: &PatternFamily, candidates: &[u64]) -> Result<PatternSearch> {
    let mut ns = candidates.to_vec();
    ns.sort_unstable();
    ns.dedup();
    let window = coloring.len();
    let hit = find_first_ordered(&ns, |n| {
        let Some(disps) = patterns.values(n, window)? else {
            return Ok(None);
        };
        Ok(first_mono_base(coloring, &disps).map(|(color, x)| PatternHit { color, x, n }))
    })?;
    if let Some(h) = &hit {
        if !verify_pattern_hit(coloring, patterns, h)? {
            return Err(Error::Invariant(format!("pattern hit {h:?} failed re-verification")));
        }
    }
    Ok(PatternSearch { hit, window, candidates: ns.len(), verified: true })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VdwCheck {
    pub window: u64,
    pub colorings: u64,
    pub with_hit: u64,
    pub first_without: Option<Vec<u32>>,
}

impl VdwCheck {
    pub fn every_coloring_hit(&self) -> bool {
        self.with_hit == self.colorings
    }
}

/// Exhaustive check of monochromatic `k`-term progressions over all 2-colorings of `[1..n]`.
pub fn vdw_exhaustive(k: u32, n: u64) -> Result<VdwCheck> {
    if k < 2 {
        return arg("progression length must be at least 2");
    }
    if n > 24 {
        return Err(Error::Resource(format!("2^{n} colorings exceed the exhaustive limit")));
    }
    let patterns = PatternFamily::new(
        (1..k).map(|j| Displacement::Poly(IntPolynomial::from_i64(&[0, j as i64]))).collect(),
    )?;
    let candidates: Vec<u64> = (1..=n).collect();
    let total = 1u64 << n;
    let mut with_hit = 0;
    let mut first_without = None;
    for mask in 0..total {
        let colors: Vec<u32> = (0..n).map(|i| 1 + ((mask >> i) & 1) as u32).collect();
        let coloring = Coloring::new(colors, 2)?;
        if pattern_search(&coloring, &patterns, &candidates)?.hit.is_some() {
            with_hit += 1;
        } else if first_without.is_none() {
            first_without = Some(coloring.colors);
        }
    }
    Ok(VdwCheck { window: n, colorings: total, with_hit, first_without })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FloorPowerHit {
    pub k: u64,
    pub n: u64,
    pub x: u64,
    pub y: u64,
}

impl FloorPowerHit {
    pub fn to_json(&self) -> Value {
        json!({"k": self.k, "n": self.n, "x": self.x, "y": self.y})
    }
}

/// Smallest member `x` of `set` with every `x + d` also a member.
pub fn first_containing_base(set: &Bits, disps: &[u64]) -> Option<u64> {
    let n = set.len();
    let reach = disps.iter().copied().max().unwrap_or(0);
    if reach >= n {
        return None;
    }
    set.iter_ones()
        .take_while(|&x| x + reach <= n)
        .find(|&x| disps.iter().all(|&d| set.get(x + d)))
}

/// Search `n = k^m` in `n_range` for bases `x`, `y` with the patterns inside `a` and `b`.
pub fn floor_power_search(
    a: &Bits,
    b: &Bits,
    spec_a: &PatternFamily,
    spec_b: &PatternFamily,
    m: u32,
    n_range: RangeInclusive<u64>,
) -> Result<Option<FloorPowerHit>> {
    if m == 0 {
        return arg("power must be positive");
    }
    let lo = *n_range.start();
    let hi = *n_range.end();
    let mut ks = Vec::new();
    let mut k = lo.nth_root(m);
    while let Some(n) = k.checked_pow(m) {
        if n > hi {
            break;
        }
        if n >= lo {
            ks.push(k);
        }
        k += 1;
    }
    let hit = find_first_ordered(&ks, |k| {
        let n = k.pow(m);
        let (Some(da), Some(db)) = (spec_a.values(n, a.len())?, spec_b.values(n, b.len())?) else {
            return Ok(None);
        };
        let Some(x) = first_containing_base(a, &da) else {
            return Ok(None);
        };
        Ok(first_containing_base(b, &db).map(|y| FloorPowerHit { k, n, x, y }))
    })?;
    Ok(hit)
}

/// Random subset of `[1..n]` with independent membership probability `density`.
pub fn random_subset(n: u64, density: f64, seed: u64) -> Bits {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bits = Bits::zeros(n);
    for i in 1..=n {
        if rng.gen::<f64>() < density {
            bits.set(i, true);
        }
    }
    bits
}

/// Generators `a < b < c` with pairwise disjoint binary supports whose seven sums share a color.
/// These span a sub-IP set of the IP set generated by the powers of two.
pub fn monochromatic_sub_ip(coloring: &Coloring) -> Option<[u64; 3]> {
    let n = coloring.len();
    let color = |v: u64| coloring.get(v);
    for a in 1..=n {
        let ca = color(a)?;
        for b in (a + 1)..=n {
            if a & b != 0 || a + b > n || color(b) != Some(ca) || color(a + b) != Some(ca) {
                continue;
            }
            for c in (b + 1)..=n {
                if (a | b) & c != 0 || a + b + c > n {
                    continue;
                }
                if [c, a + c, b + c, a + b + c].iter().all(|&v| color(v) == Some(ca)) {
                    return Some([a, b, c]);
                }
            }
        }
    }
    None
}

/// Random 2-partition of `[1..2^s - 1]`.
pub fn random_partition(s: u32, seed: u64) -> Coloring {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = (1u64 << s) - 1;
    let colors = (0..n).map(|_| rng.gen_range(1..=2u32)).collect();
    Coloring { colors, r: 2 }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set_of(n: u64, pred: impl Fn(u64) -> bool) -> Bits {
        let mut b = Bits::zeros(n);
        for i in 1..=n {
            if pred(i) {
                b.set(i, true);
            }
        }
        b
    }

    #[test]
    fn enumerate_examples() {
        let e = ip_enumerate(&IPGenerators::new(vec![1, 2, 4]).unwrap()).unwrap();
        assert_eq!(e.values, (1..=7).collect::<Vec<_>>());
        assert!(e.all_distinct());
        let e = ip_enumerate(&IPGenerators::new(vec![2, 3]).unwrap()).unwrap();
        assert_eq!(e.values, vec![2, 3, 5]);
        assert!(IPGenerators::new(vec![1, 1]).is_err());
        assert!(IPGenerators::new(vec![0, 1]).is_err());
        let e = ip_enumerate(&IPGenerators::new(vec![1, 2, 3]).unwrap()).unwrap();
        assert_eq!(e.values, vec![1, 2, 3, 4, 5, 6]);
        assert_eq!(e.multiplicity, vec![1, 1, 2, 1, 1, 1]);
        let big = IPGenerators::new((1..=25).collect()).unwrap();
        assert!(matches!(ip_enumerate(&big), Err(Error::Resource(_))));
    }

    #[test]
    fn powers_of_two_fill_interval() {
        for s in 1..=12 {
            let e = ip_enumerate(&IPGenerators::powers_of_two(s).unwrap()).unwrap();
            assert_eq!(e.len(), (1 << s) - 1);
            assert_eq!(*e.values.last().unwrap(), (1 << s) - 1);
        }
    }

    #[test]
    fn ip_star_examples() {
        let all = Bits::ones(50);
        let lists = vec![IPGenerators::new(vec![1, 2]).unwrap(), IPGenerators::new(vec![3, 5, 9]).unwrap()];
        assert!(ip_star_window_test(&all, &lists).unwrap().consistent);
        let evens = set_of(50, |n| n % 2 == 0);
        let r = ip_star_window_test(&evens, &lists[..1]).unwrap();
        assert_eq!(r.entries[0].witness, Some(2));
        let fours = set_of(100, |n| n % 4 == 0);
        let r = ip_star_window_test(&fours, &[IPGenerators::new(vec![1, 2]).unwrap()]).unwrap();
        assert!(!r.consistent);
        let r = ip_star_window_test(&fours, &[IPGenerators::powers_of_two(3).unwrap()]).unwrap();
        assert_eq!(r.entries[0].witness, Some(4));
        let r = ip_star_window_test(&fours, &[IPGenerators::new(vec![60, 70]).unwrap()]).unwrap();
        assert!(r.entries[0].met.is_none() && r.entries[0].warning.is_some());
        assert!(r.consistent);
    }

    #[test]
    fn gaps() {
        assert_eq!(syndetic_gap(&set_of(100, |n| n % 2 == 0)), Some(2));
        assert_eq!(syndetic_gap(&set_of(100, |n| n == 1 || n == 100)), Some(99));
        assert_eq!(syndetic_gap(&Bits::zeros(10)), None);
        assert_eq!(syndetic_gap(&set_of(10, |n| n == 3)), Some(8));
    }

    #[test]
    fn piecewise_examples() {
        let threes = set_of(300, |n| n % 3 == 0);
        assert_eq!(piecewise_syndetic_scan(&threes, 3, 40).unwrap(), Some(1));
        assert_eq!(piecewise_syndetic_scan(&threes, 2, 40).unwrap(), None);
        let block = set_of(200, |n| (120..=150).contains(&n));
        assert_eq!(piecewise_syndetic_scan(&block, 1, 31).unwrap(), Some(120));
        assert_eq!(piecewise_syndetic_scan(&block, 1, 32).unwrap(), None);
        assert!(piecewise_syndetic_scan(&block, 1, 201).is_err());
    }

    #[test]
    fn coloring_text() {
        let c = Coloring::parse("8 2\n11221122\n").unwrap();
        assert_eq!(c.as_slice(), &[1, 1, 2, 2, 1, 1, 2, 2]);
        assert_eq!(Coloring::parse(&c.to_text()).unwrap(), c);
        let c = Coloring::parse("3 12\n1 12 7").unwrap();
        assert_eq!(c.get(2), Some(12));
        assert_eq!(Coloring::parse(&c.to_text()).unwrap(), c);
        assert!(Coloring::parse("3 2\n123").is_err());
        assert!(Coloring::parse("4 2\n121").is_err());
    }

    #[test]
    fn floor_roots() {
        let x = IntPolynomial::from_i64(&[0, 1]);
        let x3 = IntPolynomial::from_i64(&[0, 0, 0, 1]);
        for n in 0..3000u64 {
            assert_eq!(floor_poly_root(&x, 2, n).unwrap(), BigInt::from(n.sqrt()));
            let want = ((n as f64).powf(1.5) + 1e-9).floor() as u64;
            let got = floor_poly_root(&x3, 2, n).unwrap().to_u64().unwrap();
            assert!(got.pow(2) <= n.pow(3) && (got + 1).pow(2) > n.pow(3), "n={n} got={got} f64={want}");
        }
        let x2 = IntPolynomial::from_i64(&[0, 0, 1]);
        assert_eq!(floor_poly_root(&x2, 4, 4).unwrap(), BigInt::from(2));
        assert_eq!(floor_poly_root(&x2, 4, 5).unwrap(), BigInt::from(2));
        let mixed = IntPolynomial::from_i64(&[0, -3, 1]);
        // x^2 - 3x at x = sqrt(10): 10 - 9.4868 = 0.513
        assert_eq!(floor_poly_root(&mixed, 2, 10).unwrap(), BigInt::from(0));
        assert_eq!(floor_poly_root(&mixed, 2, 2).unwrap(), BigInt::from(-3));
    }

    #[test]
    fn displacement_text() {
        let d = Displacement::parse("floor:x^3:2").unwrap();
        assert_eq!(d.eval(4).unwrap(), BigInt::from(8));
        assert_eq!(Displacement::parse(&d.to_string()).unwrap(), d);
        let p = PatternFamily::parse("n;2n").unwrap();
        assert_eq!(p.to_string(), "n;2n");
        assert!(Displacement::parse("floor:x:0").is_err());
    }

    #[test]
    fn search_examples() {
        let pats = PatternFamily::parse("n^2").unwrap();
        let r = pattern_search(&Coloring::monochrome(10), &pats, &[3, 1, 2]).unwrap();
        assert_eq!(r.hit, Some(PatternHit { color: 1, x: 1, n: 1 }));
        let witness = Coloring::parse("8 2\n11221122").unwrap();
        let ap = PatternFamily::parse("n;2n").unwrap();
        let r = pattern_search(&witness, &ap, &(1..=8).collect::<Vec<_>>()).unwrap();
        assert!(r.hit.is_none());
        let neg = PatternFamily::parse("n-5").unwrap();
        assert!(matches!(
            pattern_search(&witness, &neg, &[1]),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn van_der_waerden_three_two() {
        let nine = vdw_exhaustive(3, 9).unwrap();
        assert!(nine.every_coloring_hit());
        let eight = vdw_exhaustive(3, 8).unwrap();
        assert!(!eight.every_coloring_hit());
        assert_eq!(eight.colorings - eight.with_hit, 6);
    }

    #[test]
    fn floor_power_examples() {
        let evens = set_of(1000, |n| n % 2 == 0);
        let odds = set_of(1000, |n| n % 2 == 1);
        let spec = PatternFamily::parse("floor:x:2").unwrap();
        let hit = floor_power_search(&evens, &odds, &spec, &spec, 2, 1..=1000).unwrap().unwrap();
        assert_eq!((hit.k, hit.n, hit.x, hit.y), (2, 4, 2, 1));
        let full = Bits::ones(100);
        let hit = floor_power_search(&full, &full, &spec, &spec, 2, 1..=100).unwrap().unwrap();
        assert_eq!((hit.k, hit.x, hit.y), (1, 1, 1));
        let hit = floor_power_search(&full, &full, &spec, &spec, 3, 2..=100).unwrap().unwrap();
        assert_eq!(hit.n, 8);
    }

    #[test]
    fn dense_random_sets_hit() {
        let spec = PatternFamily::parse("floor:x:2;floor:x^3:2").unwrap();
        for seed in 0..10 {
            let a = random_subset(100_000, 0.9, seed);
            let b = random_subset(100_000, 0.9, seed + 1000);
            let hit = floor_power_search(&a, &b, &spec, &spec, 2, 1..=100_000).unwrap();
            let hit = hit.expect("dense sets should contain the pattern");
            assert!(a.get(hit.x) && a.get(hit.x + hit.k) && a.get(hit.x + hit.k.pow(3)));
            assert!(b.get(hit.y) && b.get(hit.y + hit.k) && b.get(hit.y + hit.k.pow(3)));
        }
    }

    #[test]
    fn sub_ip_in_partitions() {
        for seed in 0..20 {
            let c = random_partition(10, seed);
            let [a, b, d] = monochromatic_sub_ip(&c).expect("partition cell contains a sub-IP");
            assert!(a & b == 0 && a & d == 0 && b & d == 0);
            let col = c.get(a).unwrap();
            for v in [a, b, d, a + b, a + d, b + d, a + b + d] {
                assert_eq!(c.get(v), Some(col));
            }
        }
    }
}
