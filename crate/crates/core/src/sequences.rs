//! Declarative real sequences and their evaluation modulo 1.
//!
//! A [`SequenceSpec`] describes one of the sequence families used throughout
//! the crate. Polynomial parts with rational or built-in-constant coefficients
//! are reduced mod 1 exactly; tempered and logarithmic parts are evaluated in
//! `f64` and added afterwards.

use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::accum;
use crate::error::{arg, domain, Error, Result};
use crate::real::{bigint_to_u64, ModOnePoly, Real};

/// Document version written into serialized specs.
pub const SPEC_VERSION: u64 = 1;

/// Heuristic thresholds for [`fejer_check`].
pub const FEJER_EPS_SMALL: f64 = 1e-2;
pub const FEJER_M_LARGE: f64 = 10.0;
/// Fraction of samples (from the end) on which monotonicity is tested.
pub const FEJER_TAIL_FRACTION: f64 = 0.25;

/// Minimum boundary distance of the `p(cτ)/p(τ)` band for an
/// admissible-consistent verdict.
pub const ADMISSIBLE_EPS_FLOOR: f64 = 1e-2;

/// Closed forms for tempered functions.
#[derive(Debug, Clone, PartialEq)]
pub enum TemperedForm {
    /// `Σ c_i x^{α_i}`
    PowerSum { terms: Vec<(f64, f64)> },
    /// `c x^α log^β x`
    PowerLog { c: f64, alpha: f64, beta: f64 },
    /// `c x^α (cos(log^β x) + d)`
    PowerCosLog { c: f64, alpha: f64, beta: f64, d: f64 },
}

impl TemperedForm {
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            TemperedForm::PowerSum { ref terms } => {
                terms.iter().map(|&(c, a)| c * x.powf(a)).sum()
            }
            TemperedForm::PowerLog { c, alpha, beta } => c * x.powf(alpha) * x.ln().powf(beta),
            TemperedForm::PowerCosLog { c, alpha, beta, d } => {
                c * x.powf(alpha) * (x.ln().powf(beta).cos() + d)
            }
        }
    }

    /// The smallest integer `ℓ` with `f^{(ℓ+1)} → 0`.
    pub fn degree(&self) -> u32 {
        let floor_deg = |alpha: f64| alpha.max(0.0).floor() as u32;
        match *self {
            TemperedForm::PowerSum { ref terms } => terms
                .iter()
                .filter(|(c, _)| *c != 0.0)
                .map(|&(_, a)| floor_deg(a))
                .max()
                .unwrap_or(0),
            TemperedForm::PowerLog { alpha, beta, .. } => {
                if alpha >= 1.0 && alpha.fract() == 0.0 && beta < 0.0 {
                    alpha as u32 - 1
                } else {
                    floor_deg(alpha)
                }
            }
            TemperedForm::PowerCosLog { alpha, .. } => floor_deg(alpha),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            TemperedForm::PowerSum { terms } => json!({
                "form": "power_sum",
                "terms": terms.iter().map(|(c, a)| json!({"c": c, "alpha": a})).collect::<Vec<_>>(),
            }),
            TemperedForm::PowerLog { c, alpha, beta } => {
                json!({"form": "power_log", "c": c, "alpha": alpha, "beta": beta})
            }
            TemperedForm::PowerCosLog { c, alpha, beta, d } => {
                json!({"form": "power_cos_log", "c": c, "alpha": alpha, "beta": beta, "d": d})
            }
        }
    }

    fn from_json(v: &Value) -> Result<Self> {
        let num = |key: &str, default: Option<f64>| -> Result<f64> {
            match v.get(key) {
                Some(x) => x
                    .as_f64()
                    .ok_or_else(|| Error::Parse(format!("`{key}` must be a number"))),
                None => default.ok_or_else(|| Error::Parse(format!("missing `{key}`"))),
            }
        };
        match v.get("form").and_then(Value::as_str) {
            Some("power_sum") => {
                let terms = v
                    .get("terms")
                    .and_then(Value::as_array)
                    .ok_or_else(|| Error::Parse("power_sum needs `terms`".into()))?
                    .iter()
                    .map(|t| {
                        let c = t.get("c").and_then(Value::as_f64);
                        let a = t.get("alpha").and_then(Value::as_f64);
                        c.zip(a)
                            .ok_or_else(|| Error::Parse("term needs numeric `c` and `alpha`".into()))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(TemperedForm::PowerSum { terms })
            }
            Some("power_log") => Ok(TemperedForm::PowerLog {
                c: num("c", Some(1.0))?,
                alpha: num("alpha", None)?,
                beta: num("beta", None)?,
            }),
            Some("power_cos_log") => Ok(TemperedForm::PowerCosLog {
                c: num("c", Some(1.0))?,
                alpha: num("alpha", None)?,
                beta: num("beta", None)?,
                d: num("d", None)?,
            }),
            other => Err(Error::Parse(format!("unknown tempered form {other:?}"))),
        }
    }
}

/// Declarative description of a real sequence or function.
#[derive(Debug, Clone, PartialEq)]
pub enum SequenceSpec {
    /// `c_0 + c_1 n + … + c_s n^s`, reduced mod 1 exactly.
    PolynomialMod1 { coeffs: Vec<Real> },
    Tempered(TemperedForm),
    /// `n α + v_n`
    PerturbedLinear {
        alpha: Real,
        perturbation: Box<SequenceSpec>,
    },
    /// `scale · log n`
    LogSeq { scale: f64 },
    /// `outer(⌊n β⌋)`
    BeattyComposed {
        outer: Box<SequenceSpec>,
        beta: Real,
    },
    /// Componentwise tuple, one torus coordinate per entry.
    Product(Vec<SequenceSpec>),
    /// Pointwise sum of scalar specs.
    Sum(Vec<SequenceSpec>),
}

/// Value of a sequence on the torus: scalar or tuple.
#[derive(Debug, Clone, PartialEq)]
pub enum TorusPoint {
    Scalar(f64),
    Tuple(Vec<f64>),
}

impl TorusPoint {
    pub fn coords(&self) -> &[f64] {
        match self {
            TorusPoint::Scalar(x) => std::slice::from_ref(x),
            TorusPoint::Tuple(v) => v,
        }
    }
}

/// Reduce to `[0, 1)`.
#[inline]
pub fn torus(x: f64) -> f64 {
    let f = x - x.floor();
    if f >= 1.0 {
        0.0
    } else {
        f
    }
}

impl SequenceSpec {
    pub fn polynomial(coeffs: Vec<Real>) -> Result<Self> {
        let spec = SequenceSpec::PolynomialMod1 { coeffs };
        spec.validate()?;
        Ok(spec)
    }

    /// Polynomial from coefficient tokens, constant term first.
    pub fn polynomial_from_tokens(tokens: &[&str]) -> Result<Self> {
        let coeffs = tokens.iter().map(|t| Real::parse(t)).collect::<Result<Vec<_>>>()?;
        Self::polynomial(coeffs)
    }

    /// `n α` for a single coefficient token.
    pub fn linear(alpha: &str) -> Result<Self> {
        Self::polynomial_from_tokens(&["0", alpha])
    }

    pub fn power(alpha: f64) -> Self {
        SequenceSpec::Tempered(TemperedForm::PowerSum {
            terms: vec![(1.0, alpha)],
        })
    }

    pub fn log() -> Self {
        SequenceSpec::LogSeq { scale: 1.0 }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            SequenceSpec::PolynomialMod1 { coeffs } => {
                if coeffs.len() < 2 {
                    return arg("polynomial needs degree >= 1");
                }
                Ok(())
            }
            SequenceSpec::Tempered(form) => {
                if let TemperedForm::PowerSum { terms } = form {
                    if terms.is_empty() {
                        return arg("power sum needs at least one term");
                    }
                }
                Ok(())
            }
            SequenceSpec::PerturbedLinear { perturbation, .. } => {
                perturbation.require_scalar()?;
                perturbation.validate()
            }
            SequenceSpec::LogSeq { scale } => {
                if !scale.is_finite() {
                    return arg("log scale must be finite");
                }
                Ok(())
            }
            SequenceSpec::BeattyComposed { outer, beta } => {
                if beta.value() < &BigRational::from_integer(1.into()) {
                    return arg("Beatty composition needs beta >= 1");
                }
                outer.require_scalar()?;
                outer.validate()
            }
            SequenceSpec::Product(parts) => {
                if parts.is_empty() {
                    return arg("product needs at least one component");
                }
                for p in parts {
                    p.require_scalar()?;
                    p.validate()?;
                }
                Ok(())
            }
            SequenceSpec::Sum(parts) => {
                if parts.is_empty() {
                    return arg("sum needs at least one term");
                }
                for p in parts {
                    p.require_scalar()?;
                    p.validate()?;
                }
                Ok(())
            }
        }
    }

    fn require_scalar(&self) -> Result<()> {
        if matches!(self, SequenceSpec::Product(_)) {
            return arg("nested products are not supported");
        }
        Ok(())
    }

    /// Number of torus coordinates produced.
    pub fn dimension(&self) -> usize {
        match self {
            SequenceSpec::Product(parts) => parts.len(),
            _ => 1,
        }
    }

    /// Build an evaluator; call once and reuse for many `n`.
    pub fn compile(&self) -> Result<CompiledSpec> {
        self.validate()?;
        CompiledSpec::build(self)
    }

    /// Real-argument evaluation (no reduction mod 1).
    pub fn eval_real(&self, x: f64) -> Result<f64> {
        let v = match self {
            SequenceSpec::PolynomialMod1 { coeffs } => coeffs
                .iter()
                .rev()
                .fold(0.0, |acc, c| acc * x + c.to_f64()),
            SequenceSpec::Tempered(form) => {
                if x <= 0.0 {
                    return domain(format!("tempered function evaluated at {x}"));
                }
                form.eval(x)
            }
            SequenceSpec::PerturbedLinear {
                alpha,
                perturbation,
            } => alpha.to_f64() * x + perturbation.eval_real(x)?,
            SequenceSpec::LogSeq { scale } => {
                if x <= 0.0 {
                    return domain(format!("log evaluated at {x}"));
                }
                scale * x.ln()
            }
            SequenceSpec::BeattyComposed { outer, beta } => {
                outer.eval_real((x * beta.to_f64()).floor())?
            }
            SequenceSpec::Sum(parts) => {
                let mut acc = 0.0;
                for p in parts {
                    acc += p.eval_real(x)?;
                }
                acc
            }
            SequenceSpec::Product(_) => {
                return domain("product sequences have no scalar real value")
            }
        };
        if !v.is_finite() {
            return domain(format!("non-finite value at x = {x}"));
        }
        Ok(v)
    }

    pub fn to_json(&self) -> Value {
        let (variant, params) = match self {
            SequenceSpec::PolynomialMod1 { coeffs } => (
                "PolynomialMod1",
                json!({ "coeffs": coeffs.iter().map(|c| c.repr()).collect::<Vec<_>>() }),
            ),
            SequenceSpec::Tempered(form) => ("Tempered", form.to_json()),
            SequenceSpec::PerturbedLinear {
                alpha,
                perturbation,
            } => (
                "PerturbedLinear",
                json!({"alpha": alpha.repr(), "perturbation": perturbation.to_json()}),
            ),
            SequenceSpec::LogSeq { scale } => ("LogSeq", json!({ "scale": scale })),
            SequenceSpec::BeattyComposed { outer, beta } => (
                "BeattyComposed",
                json!({"beta": beta.repr(), "outer": outer.to_json()}),
            ),
            SequenceSpec::Product(parts) => (
                "Product",
                json!({"components": parts.iter().map(|p| p.to_json()).collect::<Vec<_>>()}),
            ),
            SequenceSpec::Sum(parts) => (
                "Sum",
                json!({"terms": parts.iter().map(|p| p.to_json()).collect::<Vec<_>>()}),
            ),
        };
        json!({"v": SPEC_VERSION, "variant": variant, "params": params})
    }

    pub fn from_json(doc: &Value) -> Result<Self> {
        if let Some(v) = doc.get("v") {
            if v.as_u64() != Some(SPEC_VERSION) {
                return Err(Error::Parse(format!("unsupported spec version {v}")));
            }
        }
        let variant = doc
            .get("variant")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Parse("missing `variant`".into()))?;
        let params = doc.get("params").cloned().unwrap_or(Value::Null);
        let real = |key: &str| -> Result<Real> {
            params
                .get(key)
                .and_then(Value::as_str)
                .ok_or_else(|| Error::Parse(format!("missing string `{key}`")))
                .and_then(Real::parse)
        };
        let nested = |key: &str| -> Result<Box<SequenceSpec>> {
            let v = params
                .get(key)
                .ok_or_else(|| Error::Parse(format!("missing `{key}`")))?;
            Ok(Box::new(SequenceSpec::from_json(v)?))
        };
        let list = |key: &str| -> Result<Vec<SequenceSpec>> {
            params
                .get(key)
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Parse(format!("missing array `{key}`")))?
                .iter()
                .map(SequenceSpec::from_json)
                .collect()
        };
        let spec = match variant {
            "PolynomialMod1" => {
                let coeffs = params
                    .get("coeffs")
                    .and_then(Value::as_array)
                    .ok_or_else(|| Error::Parse("missing `coeffs`".into()))?
                    .iter()
                    .map(|c| match c {
                        Value::String(s) => Real::parse(s),
                        Value::Number(n) => Real::parse(&n.to_string()),
                        _ => Err(Error::Parse("coefficient must be string or number".into())),
                    })
                    .collect::<Result<Vec<_>>>()?;
                SequenceSpec::PolynomialMod1 { coeffs }
            }
            "Tempered" => SequenceSpec::Tempered(TemperedForm::from_json(&params)?),
            "PerturbedLinear" => SequenceSpec::PerturbedLinear {
                alpha: real("alpha")?,
                perturbation: nested("perturbation")?,
            },
            "LogSeq" => SequenceSpec::LogSeq {
                scale: params.get("scale").and_then(Value::as_f64).unwrap_or(1.0),
            },
            "BeattyComposed" => SequenceSpec::BeattyComposed {
                outer: nested("outer")?,
                beta: real("beta")?,
            },
            "Product" => SequenceSpec::Product(list("components")?),
            "Sum" => SequenceSpec::Sum(list("terms")?),
            other => return Err(Error::Parse(format!("unknown variant `{other}`"))),
        };
        spec.validate()?;
        Ok(spec)
    }
}

impl std::str::FromStr for SequenceSpec {
    type Err = Error;

    /// Compact text form, or a JSON document if the text starts with `{`.
    ///
    /// ```text
    /// poly:c0,c1,...      pow:α[,c]        powlog:α,β[,c]
    /// coslog:α,β,d[,c]    log | log:c      lin:α+<spec>
    /// beatty:β:<spec>     prod:<spec>;...  sum:<spec>|...
    /// ```
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.starts_with('{') {
            let doc: Value =
                serde_json::from_str(s).map_err(|e| Error::Parse(format!("spec JSON: {e}")))?;
            return Self::from_json(&doc);
        }
        if s == "log" {
            return Ok(Self::log());
        }
        let (head, rest) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("cannot parse sequence spec '{s}'")))?;
        let floats = |text: &str, min: usize, max: usize| -> Result<Vec<f64>> {
            let v = text
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::Parse(format!("bad number '{t}' in '{s}'")))
                })
                .collect::<Result<Vec<_>>>()?;
            if v.len() < min || v.len() > max {
                return Err(Error::Parse(format!("'{head}' takes {min} to {max} numbers")));
            }
            Ok(v)
        };
        let spec = match head {
            "poly" => {
                let tokens: Vec<&str> = rest.split(',').collect();
                Self::polynomial_from_tokens(&tokens)?
            }
            "pow" => {
                let v = floats(rest, 1, 2)?;
                SequenceSpec::Tempered(TemperedForm::PowerSum {
                    terms: vec![(v.get(1).copied().unwrap_or(1.0), v[0])],
                })
            }
            "powlog" => {
                let v = floats(rest, 2, 3)?;
                SequenceSpec::Tempered(TemperedForm::PowerLog {
                    c: v.get(2).copied().unwrap_or(1.0),
                    alpha: v[0],
                    beta: v[1],
                })
            }
            "coslog" => {
                let v = floats(rest, 3, 4)?;
                SequenceSpec::Tempered(TemperedForm::PowerCosLog {
                    c: v.get(3).copied().unwrap_or(1.0),
                    alpha: v[0],
                    beta: v[1],
                    d: v[2],
                })
            }
            "log" => SequenceSpec::LogSeq {
                scale: floats(rest, 1, 1)?[0],
            },
            "lin" => {
                let (alpha, inner) = rest
                    .split_once('+')
                    .ok_or_else(|| Error::Parse("lin needs the form lin:α+<spec>".into()))?;
                SequenceSpec::PerturbedLinear {
                    alpha: Real::parse(alpha)?,
                    perturbation: Box::new(inner.parse()?),
                }
            }
            "beatty" => {
                let (beta, inner) = rest
                    .split_once(':')
                    .ok_or_else(|| Error::Parse("beatty needs the form beatty:β:<spec>".into()))?;
                SequenceSpec::BeattyComposed {
                    outer: Box::new(inner.parse()?),
                    beta: Real::parse(beta)?,
                }
            }
            "prod" => SequenceSpec::Product(
                rest.split(';').map(str::parse).collect::<Result<Vec<_>>>()?,
            ),
            "sum" => SequenceSpec::Sum(rest.split('|').map(str::parse).collect::<Result<Vec<_>>>()?),
            _ => return Err(Error::Parse(format!("unknown spec kind '{head}'"))),
        };
        spec.validate()?;
        Ok(spec)
    }
}

impl Serialize for SequenceSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for SequenceSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        SequenceSpec::from_json(&v).map_err(serde::de::Error::custom)
    }
}

/// Prepared evaluator for a [`SequenceSpec`].
#[derive(Debug, Clone)]
pub struct CompiledSpec {
    node: Node,
    dim: usize,
}

#[derive(Debug, Clone)]
enum Node {
    Poly(ModOnePoly),
    Float(SequenceSpec),
    Perturbed(ModOnePoly, Box<Node>),
    Beatty(Box<Node>, Real),
    Sum(Vec<Node>),
    Product(Vec<Node>),
}

/// Exact torus part in `[0,1)` plus an unreduced float part.
type Parts = (f64, f64);

impl Node {
    fn build(spec: &SequenceSpec) -> Result<Node> {
        Ok(match spec {
            SequenceSpec::PolynomialMod1 { coeffs } => {
                let values: Vec<BigRational> = coeffs.iter().map(|c| c.value().clone()).collect();
                Node::Poly(ModOnePoly::new(&values))
            }
            SequenceSpec::Tempered(_) | SequenceSpec::LogSeq { .. } => Node::Float(spec.clone()),
            SequenceSpec::PerturbedLinear {
                alpha,
                perturbation,
            } => Node::Perturbed(
                ModOnePoly::new(&[BigRational::from_integer(0.into()), alpha.value().clone()]),
                Box::new(Node::build(perturbation)?),
            ),
            SequenceSpec::BeattyComposed { outer, beta } => {
                Node::Beatty(Box::new(Node::build(outer)?), beta.clone())
            }
            SequenceSpec::Sum(parts) => {
                Node::Sum(parts.iter().map(Node::build).collect::<Result<_>>()?)
            }
            SequenceSpec::Product(parts) => {
                Node::Product(parts.iter().map(Node::build).collect::<Result<_>>()?)
            }
        })
    }

    fn parts(&self, n: u64) -> Result<Parts> {
        Ok(match self {
            Node::Poly(p) => (p.frac_at(n), 0.0),
            Node::Float(spec) => {
                if n == 0 {
                    return domain("sequence index must be >= 1");
                }
                (0.0, spec.eval_real(n as f64)?)
            }
            Node::Perturbed(p, inner) => {
                let (a, b) = inner.parts(n)?;
                (torus(p.frac_at(n) + a), b)
            }
            Node::Beatty(outer, beta) => {
                let m = beta.floor_mul(n);
                let m = bigint_to_u64(&m)
                    .ok_or_else(|| Error::Domain(format!("floor(n*beta) out of range at n = {n}")))?;
                outer.parts(m)?
            }
            Node::Sum(parts) => {
                let mut exact = 0.0;
                let mut float = 0.0;
                for p in parts {
                    let (a, b) = p.parts(n)?;
                    exact = torus(exact + a);
                    float += b;
                }
                (exact, float)
            }
            Node::Product(_) => return domain("product sequences are not scalar"),
        })
    }
}

impl CompiledSpec {
    fn build(spec: &SequenceSpec) -> Result<Self> {
        Ok(Self {
            node: Node::build(spec)?,
            dim: spec.dimension(),
        })
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    /// Scalar value mod 1 at index `n`.
    pub fn scalar(&self, n: u64) -> Result<f64> {
        let (a, b) = self.node.parts(n)?;
        if !b.is_finite() {
            return domain(format!("non-finite value at n = {n}"));
        }
        Ok(torus(a + torus(b)))
    }

    pub fn point(&self, n: u64) -> Result<TorusPoint> {
        match &self.node {
            Node::Product(parts) => parts
                .iter()
                .map(|p| {
                    let (a, b) = p.parts(n)?;
                    Ok(torus(a + torus(b)))
                })
                .collect::<Result<Vec<_>>>()
                .map(TorusPoint::Tuple),
            _ => self.scalar(n).map(TorusPoint::Scalar),
        }
    }

    /// `x_{start}, …, x_{start+count-1}` mod 1 for a scalar spec.
    pub fn sample(&self, start: u64, count: usize) -> Result<Vec<f64>> {
        accum::try_collect_chunked(count, |i| self.scalar(start + i as u64))
    }

    pub fn sample_points(&self, start: u64, count: usize) -> Result<Vec<TorusPoint>> {
        accum::try_collect_chunked(count, |i| self.point(start + i as u64))
    }
}

/// `f(n) - ⌊f(n)⌋` (componentwise for products).
pub fn eval_mod1(spec: &SequenceSpec, n: u64) -> Result<TorusPoint> {
    if n == 0 {
        return arg("n must be >= 1");
    }
    spec.compile()?.point(n)
}

/// `x_1, …, x_count` mod 1 for a scalar spec.
pub fn sample_mod1(spec: &SequenceSpec, count: usize) -> Result<Vec<f64>> {
    spec.compile()?.sample(1, count)
}

/// `Δ^s` by repeated forward differencing; length shrinks by `s`.
pub fn discrete_derivative<T>(values: &[T], order: usize) -> Result<Vec<T>>
where
    T: Copy + std::ops::Sub<Output = T>,
{
    if order == 0 {
        return arg("order must be >= 1");
    }
    if order >= values.len() {
        return arg(format!(
            "order {order} needs more than {} values",
            values.len()
        ));
    }
    let mut cur = values.to_vec();
    for _ in 0..order {
        cur = cur.windows(2).map(|w| w[1] - w[0]).collect();
    }
    Ok(cur)
}

/// Outcome of the sampled Fejér-condition check.
#[derive(Debug, Clone, Serialize)]
pub struct FejerReport {
    pub horizon: u64,
    /// `Δf` non-increasing over the final quarter of samples.
    pub eventually_decreasing: bool,
    pub tail_delta: f64,
    pub tail_n_delta: f64,
    pub satisfied: bool,
    pub note: &'static str,
}

/// Sampled check of the Fejér hypotheses on `n = 2..=N`.
pub fn fejer_check(spec: &SequenceSpec, horizon: u64) -> Result<FejerReport> {
    if horizon < 8 {
        return arg("fejer_check needs a horizon of at least 8");
    }
    // tempered functions start at n = 2 (log 1 = 0)
    let start = 2u64;
    let mut deltas = Vec::with_capacity((horizon - start + 1) as usize);
    let mut prev = spec.eval_real(start as f64)?;
    for n in start..=horizon {
        let next = spec.eval_real((n + 1) as f64)?;
        deltas.push(next - prev);
        prev = next;
    }
    let tail_len = ((deltas.len() as f64) * FEJER_TAIL_FRACTION).ceil() as usize;
    let tail = &deltas[deltas.len() - tail_len.max(2)..];
    let eventually_decreasing = tail.windows(2).all(|w| w[1] <= w[0]);
    let tail_delta = *deltas.last().unwrap();
    let tail_n_delta = horizon as f64 * tail_delta;
    let satisfied = eventually_decreasing
        && tail_delta < FEJER_EPS_SMALL
        && tail_n_delta > FEJER_M_LARGE;
    Ok(FejerReport {
        horizon,
        eventually_decreasing,
        tail_delta,
        tail_n_delta,
        satisfied,
        note: "heuristic finite-sample check (eps_small = 1e-2, M_large = 10, last 25% of samples)",
    })
}

/// Outcome of the sampled admissibility check.
#[derive(Debug, Clone, Serialize)]
pub struct AdmissibleReport {
    pub c: f64,
    pub derivative_monotone: bool,
    /// `(min, max)` of `p(cτ)/p(τ)` over the tail half of the grid.
    pub ratio_band: (f64, f64),
    /// Boundary distance extrapolated to `τ → ∞` assuming `ε(τ) = ε∞ + b/log τ`.
    pub extrapolated_eps: f64,
    /// `min(observed boundary distance, extrapolated_eps)`.
    pub eps: f64,
    pub consistent: bool,
}

/// Sampled test of the two admissibility conditions on an increasing grid.
///
/// A sampled check can only falsify: `consistent` means no violation was seen.
pub fn admissible_check(spec: &SequenceSpec, grid: &[f64], c: f64) -> Result<AdmissibleReport> {
    if !(c > 0.0 && c < 1.0) {
        return arg("c must lie in (0, 1)");
    }
    if grid.len() < 4 {
        return arg("grid needs at least 4 points");
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return arg("grid must be strictly increasing");
    }
    let tail = &grid[grid.len() / 2..];
    let mut derivs = Vec::with_capacity(tail.len());
    let mut ratios = Vec::with_capacity(tail.len());
    for &t in tail {
        let h = 1e-4 * t.abs().max(1.0);
        let d = (spec.eval_real(t + h)? - spec.eval_real(t - h)?) / (2.0 * h);
        let r = spec.eval_real(c * t)? / spec.eval_real(t)?;
        if !d.is_finite() || !r.is_finite() {
            return domain(format!("non-finite derivative or ratio at {t}"));
        }
        derivs.push(d);
        ratios.push(r);
    }
    let nondecreasing = derivs.windows(2).all(|w| w[1] >= w[0] - 1e-9 * w[0].abs());
    let nonincreasing = derivs.windows(2).all(|w| w[1] <= w[0] + 1e-9 * w[0].abs());
    let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = ratios.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let boundary = |r: f64| r.min(1.0 - r);
    let observed = lo.min(1.0 - hi);
    let (t1, t2) = (tail[0], *tail.last().unwrap());
    let (e1, e2) = (boundary(ratios[0]), boundary(*ratios.last().unwrap()));
    let (l1, l2) = (t1.ln(), t2.ln());
    let extrapolated = if l1 > 0.0 && (1.0 / l1 - 1.0 / l2).abs() > 0.0 {
        let b = (e1 - e2) / (1.0 / l1 - 1.0 / l2);
        e2 - b / l2
    } else {
        e2
    };
    let eps = observed.min(extrapolated);
    let derivative_monotone = nondecreasing || nonincreasing;
    Ok(AdmissibleReport {
        c,
        derivative_monotone,
        ratio_band: (lo, hi),
        extrapolated_eps: extrapolated,
        eps,
        consistent: derivative_monotone && eps > ADMISSIBLE_EPS_FLOOR,
    })
}

/// Geometric grid of `count` points from `from` to `to`.
pub fn geometric_grid(from: f64, to: f64, count: usize) -> Vec<f64> {
    let ratio = (to / from).powf(1.0 / (count.max(2) - 1) as f64);
    (0..count).map(|i| from * ratio.powi(i as i32)).collect()
}

/// Integer-valued sequence helper used by the discrete-derivative tests.
pub fn integer_values(coeffs: &[i64], n_max: u64) -> Vec<i128> {
    (1..=n_max as i128)
        .map(|n| coeffs.iter().rev().fold(0i128, |acc, &c| acc * n + c as i128))
        .collect()
}
