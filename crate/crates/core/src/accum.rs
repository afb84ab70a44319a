//! Compensated accumulation and deterministic chunked reduction.
//!
//! Every long sum in the crate goes through [`chunked`]: the index range is cut
//! into fixed-size chunks (independent of the worker count), each chunk is
//! summed with Neumaier compensation, and the chunk totals are merged in index
//! order. Results are therefore bit-identical for any number of threads.

use std::ops::Range;

use num_complex::Complex64;

/// Chunk length used for all parallel reductions.
pub const CHUNK: usize = 1 << 14;

/// Neumaier (improved Kahan) summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Compensated complex accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct ComplexSum {
    re: Neumaier,
    im: Neumaier,
}

impl ComplexSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

impl FromIterator<Complex64> for ComplexSum {
    fn from_iter<I: IntoIterator<Item = Complex64>>(iter: I) -> Self {
        let mut acc = ComplexSum::new();
        for z in iter {
            acc.add(z);
        }
        acc
    }
}

/// Split `0..len` into `CHUNK`-sized ranges, map each (possibly in parallel),
/// and return the per-chunk results in index order.
pub fn chunked<T, F>(len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(Range<usize>) -> T + Sync + Send,
{
    chunked_by(len, CHUNK, f)
}

pub fn chunked_by<T, F>(len: usize, chunk: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(Range<usize>) -> T + Sync + Send,
{
    let chunk = chunk.max(1);
    let count = len.div_ceil(chunk);
    let range_of = |i: usize| (i * chunk)..((i + 1) * chunk).min(len);
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..count).into_par_iter().map(|i| f(range_of(i))).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..count).map(|i| f(range_of(i))).collect()
    }
}

/// Deterministic compensated sum of `term(i)` over `0..len`.
pub fn sum_complex<F>(len: usize, term: F) -> Complex64
where
    F: Fn(usize) -> Complex64 + Sync + Send,
{
    let partials = chunked(len, |r| r.map(&term).collect::<ComplexSum>().value());
    partials.into_iter().collect::<ComplexSum>().value()
}

/// Deterministic compensated sum of `term(i)` over `0..len`.
pub fn sum_real<F>(len: usize, term: F) -> f64
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    let partials = chunked(len, |r| {
        let mut acc = Neumaier::new();
        for i in r {
            acc.add(term(i));
        }
        acc.value()
    });
    let mut acc = Neumaier::new();
    for p in partials {
        acc.add(p);
    }
    acc.value()
}

/// Fallible variant of [`chunked`] that flattens per-chunk vectors.
pub fn try_collect_chunked<T, E, F>(len: usize, f: F) -> Result<Vec<T>, E>
where
    T: Send,
    E: Send,
    F: Fn(usize) -> Result<T, E> + Sync + Send,
{
    let parts = chunked(len, |r| r.map(&f).collect::<Result<Vec<T>, E>>());
    let mut out = Vec::with_capacity(len);
    for p in parts {
        out.extend(p?);
    }
    Ok(out)
}

/// `e^{2πi t}` with `t` reduced mod 1 first.
#[inline]
pub fn unit(t: f64) -> Complex64 {
    let f = t - t.floor();
    Complex64::cis(std::f64::consts::TAU * f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neumaier_recovers_small_terms() {
        let mut acc = Neumaier::new();
        acc.add(1.0);
        for _ in 0..10_000 {
            acc.add(1e-16);
        }
        acc.add(-1.0);
        assert!((acc.value() - 1e-12).abs() < 1e-24);
    }

    #[test]
    fn chunked_preserves_order() {
        let v = chunked_by(10, 3, |r| r.start);
        assert_eq!(v, vec![0, 3, 6, 9]);
    }

    #[test]
    fn sum_of_roots_of_unity_vanishes() {
        let n = 100_000;
        let s = sum_complex(n, |i| unit(i as f64 / n as f64));
        assert!(s.norm() < 1e-9);
    }
}
