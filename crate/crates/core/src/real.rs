//! Exact and high-precision real coefficients.
//!
//! Every coefficient is held as a [`BigRational`]. User-supplied decimals and
//! fractions are exact; the named irrational constants are dyadic rationals
//! accurate to [`PRECISION_BITS`] bits. Reduction mod 1 of polynomial values
//! is then exact integer arithmetic on a common denominator.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Fractional bits carried by the built-in irrational constants.
pub const PRECISION_BITS: u32 = 192;

const GUARD_BITS: u32 = 64;

fn dyadic(numerator: BigInt, bits: u32) -> BigRational {
    BigRational::new(numerator, BigInt::one() << bits)
}

/// `sqrt(k)` truncated to `PRECISION_BITS` fractional bits.
pub fn sqrt_of(k: u64) -> BigRational {
    let scaled = BigInt::from(k) << (2 * PRECISION_BITS);
    dyadic(scaled.sqrt(), PRECISION_BITS)
}

pub fn golden_ratio() -> BigRational {
    (BigRational::one() + sqrt_of(5)) / BigRational::from_integer(2.into())
}

/// Euler's number from the factorial series.
pub fn euler_e() -> BigRational {
    let bits = PRECISION_BITS + GUARD_BITS;
    let one = BigInt::one() << bits;
    let mut term = one.clone();
    let mut total = BigInt::zero();
    let mut k = 1u32;
    while !term.is_zero() {
        total += &term;
        term /= k;
        k += 1;
    }
    dyadic(total >> GUARD_BITS, PRECISION_BITS)
}

/// `atan(1/x)` in fixed point with `bits` fractional bits.
fn arctan_inv(x: u32, bits: u32) -> BigInt {
    let x2 = BigInt::from(x) * x;
    let mut power = (BigInt::one() << bits) / x;
    let mut total = BigInt::zero();
    let mut k = 0u32;
    while !power.is_zero() {
        let term = &power / (2 * k + 1);
        if k.is_multiple_of(2) {
            total += term;
        } else {
            total -= term;
        }
        power /= &x2;
        k += 1;
    }
    total
}

/// Machin's formula.
pub fn pi() -> BigRational {
    let bits = PRECISION_BITS + GUARD_BITS;
    let value = arctan_inv(5, bits) * 16 - arctan_inv(239, bits) * 4;
    dyadic(value >> GUARD_BITS, PRECISION_BITS)
}

/// A real coefficient: exact rational value plus the token it was parsed from.
#[derive(Clone, PartialEq, Eq)]
pub struct Real {
    value: BigRational,
    irrational: bool,
    repr: String,
}

impl Real {
    pub fn from_rational(value: BigRational) -> Self {
        let repr = format_rational(&value);
        Self {
            value,
            irrational: false,
            repr,
        }
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Self::from_integer(0)
    }

    pub fn value(&self) -> &BigRational {
        &self.value
    }

    /// Set when the value is a truncated irrational constant.
    pub fn is_irrational(&self) -> bool {
        self.irrational
    }

    pub fn repr(&self) -> &str {
        &self.repr
    }

    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.value)
    }

    /// `floor(n * self)`, exact.
    pub fn floor_mul(&self, n: u64) -> BigInt {
        (BigInt::from(n) * self.value.numer()).div_floor(self.value.denom())
    }

    /// Parse one coefficient token.
    ///
    /// Accepted forms: integers, decimals (`0.25`, `1e-3`), fractions (`3/4`),
    /// the constants `sqrtK`, `phi`, `e`, `pi`, and `c*NAME` / `-NAME`
    /// multiples of a constant with a rational `c`.
    pub fn parse(token: &str) -> Result<Self> {
        let token = token.trim();
        if token.is_empty() {
            return Err(Error::Parse("empty coefficient".into()));
        }
        if let Some((factor, name)) = token.split_once('*') {
            let c = parse_rational(factor)?;
            let k = named_constant(name.trim())?
                .ok_or_else(|| Error::Parse(format!("unknown constant `{name}`")))?;
            return Ok(Self {
                value: c * k.0,
                irrational: k.1,
                repr: token.to_string(),
            });
        }
        let (negative, body) = match token.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, token.strip_prefix('+').unwrap_or(token)),
        };
        if let Some((value, irrational)) = named_constant(body)? {
            let value = if negative { -value } else { value };
            return Ok(Self {
                value,
                irrational,
                repr: token.to_string(),
            });
        }
        let value = parse_rational(token)?;
        Ok(Self {
            value,
            irrational: false,
            repr: token.to_string(),
        })
    }
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Real({})", self.repr)
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.repr)
    }
}

impl FromStr for Real {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Real::parse(s)
    }
}

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.repr)
    }
}

impl<'de> Deserialize<'de> for Real {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Real::parse(&s).map_err(serde::de::Error::custom)
    }
}

fn named_constant(name: &str) -> Result<Option<(BigRational, bool)>> {
    let v = match name {
        "phi" => (golden_ratio(), true),
        "e" => (euler_e(), true),
        "pi" => (pi(), true),
        _ => {
            let Some(k) = name.strip_prefix("sqrt") else {
                return Ok(None);
            };
            let k: u64 = k
                .parse()
                .map_err(|_| Error::Parse(format!("bad square-root constant `{name}`")))?;
            let r = k.sqrt();
            if r * r == k {
                (BigRational::from_integer(r.into()), false)
            } else {
                (sqrt_of(k), true)
            }
        }
    };
    Ok(Some(v))
}

/// Exact parse of `a`, `a/b`, or a decimal with optional exponent.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: `{s}`"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in `{s}`")));
        }
        return Ok(BigRational::new(n, d));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (negative, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let mut numer: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().map_err(|_| bad())?
    };
    if negative {
        numer = -numer;
    }
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    Ok(if scale >= 0 {
        BigRational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(numer, num_traits::pow(ten, (-scale) as usize))
    })
}

/// `p/q` or `p` when the denominator is 1.
pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Correctly scaled f64 approximation of a big rational.
pub fn rational_to_f64(q: &BigRational) -> f64 {
    if let (Some(n), Some(d)) = (q.numer().to_f64(), q.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 && n.abs() < 1e300 && d < 1e300
            && n.abs() < 9.0e15 && d < 9.0e15 {
                return n / d;
            }
    }
    // Shift both to ~60 significant bits before dividing.
    let nb = q.numer().bits() as i64;
    let db = q.denom().bits() as i64;
    let shift = 64 - (nb - db);
    let scaled = if shift >= 0 {
        (q.numer() << shift as usize) / q.denom()
    } else {
        q.numer() / (q.denom() << (-shift) as usize)
    };
    scaled.to_f64().unwrap_or(f64::NAN) * 2f64.powi(-shift as i32)
}

/// `r / modulus` for `0 <= r < modulus`, truncated to 53 bits so the result
/// is strictly below 1.
pub fn unit_fraction(r: &BigInt, modulus: &BigInt) -> f64 {
    debug_assert!(!r.is_negative() && r < modulus);
    let top: BigInt = (r << 53u32) / modulus;
    top.to_u64().unwrap_or(0) as f64 / (1u64 << 53) as f64
}

/// A polynomial with rational coefficients prepared for exact evaluation
/// modulo 1 at integer arguments.
#[derive(Debug, Clone)]
pub struct ModOnePoly {
    /// Coefficients multiplied by the common denominator, constant first.
    scaled: Vec<BigInt>,
    modulus: BigInt,
    /// Word-sized copy of `(modulus, scaled mod modulus)` when the modulus fits.
    small: Option<(u64, Vec<u64>)>,
}

impl ModOnePoly {
    pub fn new(coeffs: &[BigRational]) -> Self {
        let modulus = coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let scaled = coeffs
            .iter()
            .map(|c| c.numer() * (&modulus / c.denom()))
            .collect::<Vec<BigInt>>();
        let small = modulus.to_u64().map(|m| {
            let reduced = scaled
                .iter()
                .map(|c| c.mod_floor(&modulus).to_u64().expect("reduced below a u64 modulus"))
                .collect();
            (m, reduced)
        });
        Self { scaled, modulus, small }
    }

    pub fn modulus(&self) -> &BigInt {
        &self.modulus
    }

    /// `p(n) mod 1` as a residue over the common denominator.
    pub fn residue(&self, n: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.scaled.iter().rev() {
            acc = acc * n + c;
        }
        acc.mod_floor(&self.modulus)
    }

    pub fn frac_at(&self, n: u64) -> f64 {
        self.frac_at_i64_or(n as i128, || BigInt::from(n))
    }

    pub fn frac_at_signed(&self, n: i64) -> f64 {
        self.frac_at_i64_or(n as i128, || BigInt::from(n))
    }

    fn frac_at_i64_or(&self, n: i128, big: impl FnOnce() -> BigInt) -> f64 {
        if let Some((m, coeffs)) = &self.small {
            let m = *m as u128;
            let x = n.rem_euclid(m as i128) as u128;
            let mut acc = 0u128;
            for &c in coeffs.iter().rev() {
                acc = (acc * x + c as u128) % m;
            }
            return ((acc << 53) / m) as f64 / (1u64 << 53) as f64;
        }
        let r = self.residue(&big());
        unit_fraction(&r, &self.modulus)
    }

    /// `floor(p(n))`, exact.
    pub fn floor_at(&self, n: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.scaled.iter().rev() {
            acc = acc * n + c;
        }
        acc.div_floor(&self.modulus)
    }
}

pub(crate) fn bigint_to_u64(n: &BigInt) -> Option<u64> {
    match n.sign() {
        Sign::Minus => None,
        _ => n.to_u64(),
    }
}
