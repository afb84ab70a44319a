//! Difference-theorem harness.
//!
//! Finite-`N` versions of the quantities appearing in the van der Corput
//! argument: difference sequences, the averaged Cauchy–Schwarz inequality,
//! correlation profiles of vector-valued sequences, the logarithmic ratio
//! test for subpolynomial functions, and the change-of-variable gap for
//! admissible reparametrizations. All limits are replaced by finite
//! averages; boundary effects of order `D/N` are not corrected.

use num_complex::Complex64;
use serde::Serialize;

use crate::accum::{self, ComplexSum};
use crate::error::{arg, domain, Result};
use crate::real::Real;
use crate::sequences::{torus, SequenceSpec};

/// Slack allowed for rounding when checking `|u_n| <= B`.
const BOUND_SLACK: f64 = 1e-12;

/// `x_{n+d} − x_n mod 1`.
pub fn difference_sequence(points: &[f64], d: usize) -> Result<Vec<f64>> {
    if d == 0 {
        return arg("shift d must be >= 1");
    }
    if d >= points.len() {
        return arg(format!("shift {d} needs more than {} points", points.len()));
    }
    Ok(points
        .iter()
        .zip(&points[d..])
        .map(|(&a, &b)| torus(b - a))
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GapReport {
    pub lhs: f64,
    pub rhs: f64,
    pub gap: f64,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "D")]
    pub depth: usize,
    #[serde(rename = "B")]
    pub bound: f64,
}

fn check_bounded(u: &[Complex64], bound: f64) -> Result<()> {
    for (i, z) in u.iter().enumerate() {
        if !z.re.is_finite() || !z.im.is_finite() {
            return domain(format!("non-finite value at index {}", i + 1));
        }
        if z.norm() > bound * (1.0 + BOUND_SLACK) {
            return domain(format!(
                "|u_{}| = {} exceeds the stated bound {bound}",
                i + 1,
                z.norm()
            ));
        }
    }
    Ok(())
}

/// Both sides of the averaged Cauchy–Schwarz step:
///
/// `lhs = |(1/N)(1/D) Σ_n Σ_d u_{n+d}|²`, `rhs = (1/N) Σ_n |(1/D) Σ_d u_{n+d}|²`.
///
/// `u[0]` is `u_1`; the slice must reach `u_{N+D}`.
pub fn vdc_inequality_gap(u: &[Complex64], n: usize, depth: usize, bound: f64) -> Result<GapReport> {
    if depth == 0 || n < depth {
        return arg(format!("need N >= D >= 1, got N = {n}, D = {depth}"));
    }
    if u.len() < n + depth {
        return arg(format!("sequence must reach index N + D = {}", n + depth));
    }
    if !(bound > 0.0 && bound.is_finite()) {
        return arg("bound B must be positive and finite");
    }
    check_bounded(&u[..n + depth], bound)?;
    let inner: Vec<Complex64> = accum::chunked(n, |r| {
        r.map(|i| {
            // n = i + 1; terms u_{n+1..=n+D} live at u[i+1..=i+D]
            u[i + 1..=i + depth].iter().copied().collect::<ComplexSum>().value() / depth as f64
        })
        .collect::<Vec<_>>()
    })
    .into_iter()
    .flatten()
    .collect();
    let mean = accum::sum_complex(n, |i| inner[i]) / n as f64;
    let lhs = mean.norm_sqr();
    let rhs = accum::sum_real(n, |i| inner[i].norm_sqr()) / n as f64;
    Ok(GapReport {
        lhs,
        rhs,
        gap: rhs - lhs,
        n,
        depth,
        bound,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationProfile {
    #[serde(rename = "N")]
    pub n: usize,
    /// `(h, γ̂(h))` for `h = 1..=D`.
    pub gammas: Vec<(usize, Complex64)>,
    /// `(1/D) Σ_h γ̂(h)`.
    pub cesaro: Complex64,
    /// `‖(1/N) Σ_n u(n)‖`.
    pub mean_norm: f64,
}

fn inner_product(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    x.iter().zip(y).map(|(a, b)| a * b.conj()).sum()
}

/// `γ̂(h) = (1/N) Σ_{n<=N} ⟨u(n+h), u(n)⟩` for `h = 1..=D`.
///
/// `u[0]` is `u(1)`; the slice must reach `u(N+D)`.
pub fn correlation_profile(u: &[Vec<Complex64>], n: usize, depth: usize) -> Result<CorrelationProfile> {
    if depth == 0 || depth >= n {
        return arg(format!("need 1 <= D < N, got N = {n}, D = {depth}"));
    }
    if u.len() < n + depth {
        return arg(format!("sequence must reach index N + D = {}", n + depth));
    }
    let k = u[0].len();
    if u[..n + depth].iter().any(|v| v.len() != k) {
        return arg("vectors must share a common dimension");
    }
    let gammas: Vec<(usize, Complex64)> = (1..=depth)
        .map(|h| {
            let g = accum::sum_complex(n, |i| inner_product(&u[i + h], &u[i])) / n as f64;
            (h, g)
        })
        .collect();
    let cesaro = gammas.iter().map(|(_, g)| *g).collect::<ComplexSum>().value() / depth as f64;
    let mean: Vec<Complex64> = (0..k)
        .map(|j| accum::sum_complex(n, |i| u[i][j]) / n as f64)
        .collect();
    let mean_norm = mean.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    Ok(CorrelationProfile {
        n,
        gammas,
        cesaro,
        mean_norm,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoshernitzanReport {
    pub grid: Vec<f64>,
    /// `log x / |f(x) − p(x)|`; `+inf` where the two agree exactly.
    pub ratios: Vec<f64>,
    pub tail_decreasing: bool,
    /// Tail decreases and drops below half its initial value.
    pub consistent: bool,
}

/// Sampled `log x / |f(x) − p(x)|` on a grid of points `> 1`.
///
/// The Hardy-field hypothesis itself is not checkable; the verdict only
/// reports whether the sampled tail looks like it decays to 0.
pub fn boshernitzan_ratio(f: &SequenceSpec, p: &[Real], grid: &[f64]) -> Result<BoshernitzanReport> {
    if grid.len() < 2 {
        return arg("grid needs at least two points");
    }
    if grid.iter().any(|&x| x <= 1.0) || grid.windows(2).any(|w| w[1] <= w[0]) {
        return arg("grid must be increasing and > 1");
    }
    let coeffs: Vec<f64> = p.iter().map(Real::to_f64).collect();
    let ratios = grid
        .iter()
        .map(|&x| {
            let fx = f.eval_real(x)?;
            let px = coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c);
            let diff = (fx - px).abs();
            Ok(if diff == 0.0 { f64::INFINITY } else { x.ln() / diff })
        })
        .collect::<Result<Vec<_>>>()?;
    let tail = &ratios[ratios.len() / 2..];
    let tail_decreasing = tail
        .windows(2)
        .all(|w| w[1] <= w[0] * (1.0 + 1e-9));
    let consistent = tail_decreasing
        && tail.last().unwrap().is_finite()
        && *tail.last().unwrap() <= 0.5 * tail[0];
    Ok(BoshernitzanReport {
        grid: grid.to_vec(),
        ratios,
        tail_decreasing,
        consistent,
    })
}

/// Bounded complex function of a real variable.
#[derive(Debug, Clone, PartialEq)]
pub enum ComplexFn {
    Constant(Complex64),
    /// `exp(i · scale · g(s))`
    Phase { inner: SequenceSpec, scale: f64 },
}

impl ComplexFn {
    /// `e^{i s}`.
    pub fn unit_circle() -> Self {
        ComplexFn::Phase {
            inner: SequenceSpec::linear("1").expect("static spec"),
            scale: 1.0,
        }
    }

    pub fn bound(&self) -> f64 {
        match self {
            ComplexFn::Constant(c) => c.norm(),
            ComplexFn::Phase { .. } => 1.0,
        }
    }

    pub fn eval(&self, s: f64) -> Result<Complex64> {
        match self {
            ComplexFn::Constant(c) => Ok(*c),
            ComplexFn::Phase { inner, scale } => Ok(Complex64::cis(scale * inner.eval_real(s)?)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuadratureReport {
    /// `|(1/τ) ∫_0^τ [a(s) − a(σ(s))] ds|`
    pub gap: f64,
    pub average: Complex64,
    /// Richardson estimate `|S_h − S_{2h}| / 15`, divided by `τ`.
    pub error_estimate: f64,
    pub tau: f64,
    pub step: f64,
    pub intervals: usize,
    pub scheme: &'static str,
}

fn simpson(values: &[Complex64], step: f64) -> Complex64 {
    let last = values.len() - 1;
    let s = accum::sum_complex(values.len(), |i| {
        let w = if i == 0 || i == last {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        values[i] * w
    });
    s * (step / 3.0)
}

/// Composite Simpson estimate of the change-of-variable gap.
///
/// The step is shrunk so the interval count is a multiple of 4 (needed for the
/// Richardson comparison with the doubled step). If `σ` is undefined at 0 the
/// right limit is sampled at `10⁻⁹ · step` instead.
pub fn change_of_variable_gap(
    a: &ComplexFn,
    sigma: &SequenceSpec,
    tau: f64,
    quad_step: f64,
) -> Result<QuadratureReport> {
    if !(tau > 0.0 && tau.is_finite()) {
        return arg("tau must be positive");
    }
    if !(quad_step > 0.0 && quad_step <= tau) {
        return arg("quad_step must lie in (0, tau]");
    }
    let intervals = ((tau / quad_step).ceil() as usize).div_ceil(4) * 4;
    let step = tau / intervals as f64;
    let bound = a.bound();
    let integrand = |s: f64| -> Result<Complex64> {
        let sig = match sigma.eval_real(s) {
            Ok(v) => v,
            Err(_) if s == 0.0 => sigma.eval_real(step * 1e-9)?,
            Err(e) => return Err(e),
        };
        let (x, y) = (a.eval(s)?, a.eval(sig)?);
        if x.norm() > bound * (1.0 + BOUND_SLACK) || y.norm() > bound * (1.0 + BOUND_SLACK) {
            return domain("integrand exceeds the stated bound");
        }
        Ok(x - y)
    };
    let values = accum::try_collect_chunked(intervals + 1, |i| integrand(i as f64 * step))?;
    let fine = simpson(&values, step);
    let coarse_values: Vec<Complex64> = values.iter().step_by(2).copied().collect();
    let coarse = simpson(&coarse_values, 2.0 * step);
    let average = fine / tau;
    Ok(QuadratureReport {
        gap: average.norm(),
        average,
        error_estimate: (fine - coarse).norm() / 15.0 / tau,
        tau,
        step,
        intervals,
        scheme: "composite Simpson, Richardson error estimate",
    })
}

/// `(1/τ) ∫_0^τ f` by composite Simpson with `intervals` (even) subintervals.
pub fn simpson_average<F>(f: F, tau: f64, intervals: usize) -> Result<Complex64>
where
    F: Fn(f64) -> Result<Complex64> + Sync + Send,
{
    if intervals == 0 || intervals % 2 == 1 {
        return arg("interval count must be even and positive");
    }
    let step = tau / intervals as f64;
    let values = accum::try_collect_chunked(intervals + 1, |i| f(i as f64 * step))?;
    Ok(simpson(&values, step) / tau)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::accum::unit;

    #[test]
    fn difference_examples() {
        let alpha = 0.377_f64;
        let pts: Vec<f64> = (1..=50).map(|n| torus(n as f64 * alpha)).collect();
        let d = difference_sequence(&pts, 3).unwrap();
        assert_eq!(d.len(), 47);
        assert!(d.iter().all(|&x| (x - torus(3.0 * alpha)).abs() < 1e-12));
        assert!(difference_sequence(&[0.5; 10], 4).unwrap().iter().all(|&x| x == 0.0));
        assert!(difference_sequence(&[0.1, 0.2], 2).is_err());
    }

    #[test]
    fn gap_equality_cases() {
        let ones = vec![Complex64::new(1.0, 0.0); 200];
        let g = vdc_inequality_gap(&ones, 100, 10, 1.0).unwrap();
        assert!((g.lhs - 1.0).abs() < 1e-15 && (g.rhs - 1.0).abs() < 1e-15);
        assert!(g.gap.abs() < 1e-15);

        let alt: Vec<Complex64> = (1..=110)
            .map(|n| Complex64::new(if n % 2 == 0 { 1.0 } else { -1.0 }, 0.0))
            .collect();
        let g = vdc_inequality_gap(&alt, 100, 2, 1.0).unwrap();
        assert!(g.lhs.abs() < 1e-30 && g.rhs.abs() < 1e-30);
    }

    #[test]
    fn gap_rejects_bad_input() {
        let big = vec![Complex64::new(2.0, 0.0); 30];
        assert!(vdc_inequality_gap(&big, 10, 5, 1.0).is_err());
        let nan = vec![Complex64::new(f64::NAN, 0.0); 30];
        assert!(vdc_inequality_gap(&nan, 10, 5, 1.0).is_err());
        assert!(vdc_inequality_gap(&big, 10, 5, 2.0).is_ok());
        assert!(vdc_inequality_gap(&big, 10, 50, 2.0).is_err());
    }

    #[test]
    fn correlation_constant_and_alternating() {
        let v = vec![Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)];
        let u = vec![v.clone(); 60];
        let p = correlation_profile(&u, 50, 5).unwrap();
        assert!(p.gammas.iter().all(|(_, g)| (g - 1.0).norm() < 1e-14));
        assert!((p.mean_norm - 1.0).abs() < 1e-14);

        let alt: Vec<Vec<Complex64>> = (1..=60)
            .map(|n| {
                let s = if n % 2 == 0 { 1.0 } else { -1.0 };
                v.iter().map(|z| z * s).collect()
            })
            .collect();
        let p = correlation_profile(&alt, 50, 2).unwrap();
        assert!((p.gammas[0].1 + 1.0).norm() < 1e-14);
        assert!((p.gammas[1].1 - 1.0).norm() < 1e-14);
        assert!(p.mean_norm < 1e-14);

        let ragged = vec![vec![Complex64::new(1.0, 0.0)], vec![]];
        assert!(correlation_profile(&ragged, 1, 1).is_err());
    }

    #[test]
    fn correlation_matches_difference_weyl_sum() {
        let alpha = 0.732_050_807_568_877_2_f64;
        let x: Vec<f64> = (1..=2100).map(|n| torus((n * n) as f64 * alpha * 1e-3)).collect();
        let u: Vec<Vec<Complex64>> = x.iter().map(|&t| vec![unit(t)]).collect();
        let n = 2000;
        let p = correlation_profile(&u, n, 10).unwrap();
        for &(d, g) in &p.gammas {
            let diff = difference_sequence(&x, d).unwrap();
            let w = crate::equidist::weyl_sum(&diff[..n], 1).unwrap();
            assert!((g - w).norm() <= d as f64 / n as f64 + 1e-12);
        }
    }

    #[test]
    fn boshernitzan_examples() {
        let grid = crate::sequences::geometric_grid(10.0, 1e6, 30);
        let r = boshernitzan_ratio(&SequenceSpec::power(1.5), &[], &grid).unwrap();
        assert!(r.consistent);
        assert!((r.ratios.last().unwrap() - 13.815_510_557_964_274 / 1e9).abs() < 1e-12);

        let r = boshernitzan_ratio(&SequenceSpec::log(), &[], &grid).unwrap();
        assert!(r.ratios.iter().all(|&q| (q - 1.0).abs() < 1e-12));
        assert!(!r.consistent);

        let f = SequenceSpec::Sum(vec![
            SequenceSpec::polynomial_from_tokens(&["0", "0", "1"]).unwrap(),
            SequenceSpec::log(),
        ]);
        let p = vec![Real::zero(), Real::zero(), Real::from_integer(1)];
        let r = boshernitzan_ratio(&f, &p, &grid).unwrap();
        assert!(r.ratios.iter().all(|&q| (q - 1.0).abs() < 1e-4));
        assert!(!r.consistent);

        let same = boshernitzan_ratio(&SequenceSpec::linear("2").unwrap(), &[Real::zero(), Real::from_integer(2)], &grid).unwrap();
        assert!(same.ratios.iter().all(|q| q.is_infinite()));
    }

    #[test]
    fn change_of_variable_trivial_cases() {
        let c = ComplexFn::Constant(Complex64::new(0.3, -0.4));
        let r = change_of_variable_gap(&c, &SequenceSpec::power(0.5), 100.0, 0.5).unwrap();
        assert_eq!(r.gap, 0.0);
        let id = SequenceSpec::linear("1").unwrap();
        let r = change_of_variable_gap(&ComplexFn::unit_circle(), &id, 1000.0, 0.1).unwrap();
        assert!(r.gap < 1e-6);
    }
}
