//! Equidistribution statistics: interval proportions, Weyl sums, star
//! discrepancy, and sliding-window (well-distribution) scans.

use num_complex::Complex64;
use serde::Serialize;

use crate::accum::{self, ComplexSum};
use crate::error::{arg, Result};
use crate::sequences::SequenceSpec;

/// Sliding window sums are recomputed from scratch at this period.
pub const WINDOW_REFRESH: usize = 1 << 16;

/// Frequencies `±1, …, ±10`.
pub fn default_frequencies() -> Vec<i64> {
    (1..=10).flat_map(|h| [h, -h]).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeylEntry {
    pub h: i64,
    pub re: f64,
    pub im: f64,
    pub magnitude: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeylReport {
    #[serde(rename = "N")]
    pub n: usize,
    pub entries: Vec<WeylEntry>,
}

impl WeylReport {
    /// CSV with header `h,N,re,im,magnitude`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("h,N,re,im,magnitude\n");
        for e in &self.entries {
            out.push_str(&format!(
                "{},{},{:e},{:e},{:e}\n",
                e.h, self.n, e.re, e.im, e.magnitude
            ));
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiscrepancyReport {
    #[serde(rename = "N")]
    pub n: usize,
    pub d_star: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WindowStat {
    pub window: usize,
    pub h: i64,
    pub m_max: usize,
    pub sup_magnitude: f64,
    pub argmax_m: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub consistent: bool,
    pub threshold: f64,
    pub worst_h: i64,
    pub worst_magnitude: f64,
}

/// `|{n : a <= x_n < b}| / N`.
pub fn empirical_proportion(points: &[f64], a: f64, b: f64) -> Result<f64> {
    if points.is_empty() {
        return arg("empty point set");
    }
    if !(0.0 <= a && a < b && b <= 1.0) {
        return arg(format!("need 0 <= a < b <= 1, got [{a}, {b})"));
    }
    let count = points.iter().filter(|&&x| a <= x && x < b).count();
    Ok(count as f64 / points.len() as f64)
}

#[inline]
fn character(x: f64, h: i64) -> Complex64 {
    // h*x is reduced mod 1 before scaling by 2π
    accum::unit(h as f64 * x)
}

fn window_sum(points: &[f64], h: i64) -> Complex64 {
    accum::sum_complex(points.len(), |i| character(points[i], h))
}

/// `(1/N) Σ e^{2πi h x_n}` with compensated summation.
pub fn weyl_sum(points: &[f64], h: i64) -> Result<Complex64> {
    if h == 0 {
        return arg("frequency h = 0 is the trivial character");
    }
    if points.is_empty() {
        return arg("empty point set");
    }
    Ok(window_sum(points, h) / points.len() as f64)
}

/// Weyl sum of a multidimensional point set against an integer frequency
/// vector: `(1/N) Σ e^{2πi ⟨h, x_n⟩}`.
pub fn weyl_sum_vector(points: &[Vec<f64>], h: &[i64]) -> Result<Complex64> {
    if h.iter().all(|&c| c == 0) {
        return arg("frequency vector must be nonzero");
    }
    if points.is_empty() {
        return arg("empty point set");
    }
    if points.iter().any(|p| p.len() != h.len()) {
        return arg("dimension mismatch between points and frequency");
    }
    let s = accum::sum_complex(points.len(), |i| {
        let phase: f64 = points[i]
            .iter()
            .zip(h)
            .map(|(&x, &c)| {
                let t = c as f64 * x;
                t - t.floor()
            })
            .sum();
        accum::unit(phase)
    });
    Ok(s / points.len() as f64)
}

pub fn weyl_report(points: &[f64], freqs: &[i64]) -> Result<WeylReport> {
    let mut entries = Vec::with_capacity(freqs.len());
    for (i, &h) in freqs.iter().enumerate() {
        if freqs[..i].contains(&h) {
            return arg(format!("duplicate frequency {h}"));
        }
        let z = weyl_sum(points, h)?;
        entries.push(WeylEntry {
            h,
            re: z.re,
            im: z.im,
            magnitude: z.norm().min(1.0),
        });
    }
    Ok(WeylReport {
        n: points.len(),
        entries,
    })
}

/// `max_i max(i/N − x_(i), x_(i) − (i−1)/N)` over the sorted sample.
///
/// This is the sup over prefix intervals `[0, t)`; the sup over all
/// subintervals `[a, b)` is at most twice this value.
pub fn star_discrepancy(points: &[f64]) -> Result<DiscrepancyReport> {
    if points.is_empty() {
        return arg("empty point set");
    }
    let mut sorted = points.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let d_star = sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let i = i as f64;
            ((i + 1.0) / n - x).max(x - i / n)
        })
        .fold(0.0, f64::max);
    Ok(DiscrepancyReport {
        n: points.len(),
        d_star,
    })
}

/// Magnitudes `|1/L Σ_{n=M+1}^{M+L} e^{2πi h x_n}|` for every start
/// `M = 0..=m_max`; `points[0]` is `x_1`.
pub fn window_magnitudes(points: &[f64], h: i64, window: usize, m_max: usize) -> Result<Vec<f64>> {
    if window == 0 {
        return arg("window length must be >= 1");
    }
    if h == 0 {
        return arg("frequency h = 0 is the trivial character");
    }
    if points.len() < m_max + window {
        return arg(format!(
            "need {} points for window {window} and m_max {m_max}, got {}",
            m_max + window,
            points.len()
        ));
    }
    let len = window as f64;
    let blocks = accum::chunked_by(m_max + 1, WINDOW_REFRESH, |starts| {
        let mut out = Vec::with_capacity(starts.len());
        let first = starts.start;
        let mut acc = window_sum(&points[first..first + window], h);
        out.push((acc / len).norm());
        for m in starts.start + 1..starts.end {
            acc += character(points[m + window - 1], h) - character(points[m - 1], h);
            out.push((acc / len).norm());
        }
        out
    });
    Ok(blocks.into_iter().flatten().map(|m| m.min(1.0)).collect())
}

/// Worst window Weyl average over all starts `M <= m_max`.
pub fn well_distribution_scan_points(
    points: &[f64],
    h: i64,
    window: usize,
    m_max: usize,
) -> Result<WindowStat> {
    let mags = window_magnitudes(points, h, window, m_max)?;
    let (argmax_m, sup_magnitude) = mags
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |best, (i, m)| if m > best.1 { (i, m) } else { best });
    Ok(WindowStat {
        window,
        h,
        m_max,
        sup_magnitude,
        argmax_m,
    })
}

pub fn well_distribution_scan(
    spec: &SequenceSpec,
    h: i64,
    window: usize,
    m_max: usize,
) -> Result<WindowStat> {
    let points = spec.compile()?.sample(1, m_max + window)?;
    well_distribution_scan_points(&points, h, window, m_max)
}

/// Consistent iff every magnitude is below `threshold`.
pub fn ud_verdict(report: &WeylReport, threshold: f64) -> Result<Verdict> {
    if !(threshold > 0.0 && threshold < 1.0) {
        return arg("threshold must lie in (0, 1)");
    }
    let worst = report
        .entries
        .iter()
        .copied()
        .reduce(|a, b| if b.magnitude > a.magnitude { b } else { a })
        .ok_or_else(|| crate::Error::Argument("empty Weyl report".into()))?;
    Ok(Verdict {
        consistent: report.entries.iter().all(|e| e.magnitude < threshold),
        threshold,
        worst_h: worst.h,
        worst_magnitude: worst.magnitude,
    })
}

/// Direct `O(N)` window sum without sliding, for cross-checks.
pub fn window_average(points: &[f64], h: i64, start: usize, window: usize) -> Complex64 {
    points[start..start + window]
        .iter()
        .map(|&x| character(x, h))
        .collect::<ComplexSum>()
        .value()
        / window as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn proportion_examples() {
        assert!((empirical_proportion(&[0.1, 0.2, 0.8], 0.0, 0.5).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(empirical_proportion(&[0.25; 7], 0.0, 1.0).unwrap(), 1.0);
        assert!(empirical_proportion(&[], 0.0, 1.0).is_err());
        assert!(empirical_proportion(&[0.1], 0.5, 0.2).is_err());
    }

    #[test]
    fn weyl_trivial_cases() {
        let z = weyl_sum(&[0.0; 100], 1).unwrap();
        assert_eq!(z, Complex64::new(1.0, 0.0));
        let alt: Vec<f64> = (0..1000).map(|i| if i % 2 == 0 { 0.0 } else { 0.5 }).collect();
        assert!(weyl_sum(&alt, 1).unwrap().norm() < 1e-15);
        assert!(weyl_sum(&alt, 0).is_err());
    }

    #[test]
    fn weyl_negative_frequency_conjugates() {
        let pts: Vec<f64> = (1..500).map(|n| (n as f64 * 0.618_033_988_7).fract()).collect();
        let a = weyl_sum(&pts, 3).unwrap();
        let b = weyl_sum(&pts, -3).unwrap();
        assert!((a - b.conj()).norm() < 1e-14);
    }

    #[test]
    fn discrepancy_examples() {
        assert_eq!(star_discrepancy(&[0.0; 10]).unwrap().d_star, 1.0);
        let n = 50;
        let lattice: Vec<f64> = (0..n).map(|i| (2 * i + 1) as f64 / (2 * n) as f64).collect();
        let d = star_discrepancy(&lattice).unwrap().d_star;
        assert!((d - 1.0 / (2 * n) as f64).abs() < 1e-15);
        assert!(star_discrepancy(&[]).is_err());
    }

    #[test]
    fn verdict_examples() {
        let rep = |mags: &[f64]| WeylReport {
            n: 10,
            entries: mags
                .iter()
                .enumerate()
                .map(|(i, &m)| WeylEntry { h: i as i64 + 1, re: m, im: 0.0, magnitude: m })
                .collect(),
        };
        assert!(ud_verdict(&rep(&[0.01, 0.02]), 0.05).unwrap().consistent);
        let v = ud_verdict(&rep(&[0.01, 0.5]), 0.05).unwrap();
        assert!(!v.consistent);
        assert_eq!(v.worst_h, 2);
        assert!(ud_verdict(&rep(&[]), 0.05).is_err());
    }

    #[test]
    fn scan_with_full_window_matches_weyl_sum() {
        let pts: Vec<f64> = (1..=777).map(|n| ((n * n) as f64 * 0.414_213_562).fract()).collect();
        let stat = well_distribution_scan_points(&pts, 2, pts.len(), 0).unwrap();
        assert_eq!(stat.sup_magnitude, weyl_sum(&pts, 2).unwrap().norm());
    }

    #[test]
    fn sliding_matches_direct() {
        let pts: Vec<f64> = (1..=3000).map(|n| (n as f64).sqrt().fract()).collect();
        let mags = window_magnitudes(&pts, 1, 100, 2000).unwrap();
        for m in [0, 1, 17, 999, 2000] {
            let direct = window_average(&pts, 1, m, 100).norm();
            assert!((mags[m] - direct).abs() < 1e-12);
        }
    }

    #[test]
    fn vector_weyl_sum_reduces_to_scalar() {
        let pts: Vec<Vec<f64>> = (1..200).map(|n| vec![(n as f64 * 0.3).fract(), 0.0]).collect();
        let scalar: Vec<f64> = pts.iter().map(|p| p[0]).collect();
        let a = weyl_sum_vector(&pts, &[2, 5]).unwrap();
        let b = weyl_sum(&scalar, 2).unwrap();
        assert!((a - b).norm() < 1e-13);
        assert!(weyl_sum_vector(&pts, &[0, 0]).is_err());
    }
}
