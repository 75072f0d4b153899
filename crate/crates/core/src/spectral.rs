//! Discrete Fourier tools for periodic samples.
//!
//! All transforms use the convention `c_k = (1/n) sum_j x_j e^{-2 pi i jk/n}`,
//! so `c_k` are the Fourier coefficients of the trigonometric interpolant.
//! Power-of-two lengths go through an iterative radix-2 FFT, other lengths
//! through the direct sum.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::C64;

fn bit_reverse_permute(data: &mut [C64]) {
    let n = data.len();
    let mut j = 0usize;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            data.swap(i, j);
        }
    }
}

/// In-place unnormalized transform with kernel `e^{sign * 2 pi i jk/n}`.
fn transform_in_place(data: &mut [C64], sign: f64) {
    let n = data.len();
    if n <= 1 {
        return;
    }
    if !n.is_power_of_two() {
        let src = data.to_vec();
        for (k, out) in data.iter_mut().enumerate() {
            let mut acc = C64::new(0.0, 0.0);
            for (j, x) in src.iter().enumerate() {
                let ang = sign * 2.0 * PI * ((j * k) % n) as f64 / n as f64;
                acc += x * C64::from_polar(1.0, ang);
            }
            *out = acc;
        }
        return;
    }
    bit_reverse_permute(data);
    let mut len = 2;
    while len <= n {
        let half = len / 2;
        let step = sign * 2.0 * PI / len as f64;
        for start in (0..n).step_by(len) {
            for k in 0..half {
                let w = C64::from_polar(1.0, step * k as f64);
                let a = data[start + k];
                let b = data[start + k + half] * w;
                data[start + k] = a + b;
                data[start + k + half] = a - b;
            }
        }
        len <<= 1;
    }
}

/// Normalized forward transform: returns `c_k` for `k = 0..n` (wrapped indices).
pub fn forward(samples: &[C64]) -> Vec<C64> {
    let mut data = samples.to_vec();
    transform_in_place(&mut data, -1.0);
    let scale = 1.0 / samples.len() as f64;
    for c in &mut data {
        *c *= scale;
    }
    data
}

/// Inverse of [`forward`]: `x_j = sum_k c_k e^{2 pi i jk/n}`.
pub fn inverse(coeffs: &[C64]) -> Vec<C64> {
    let mut data = coeffs.to_vec();
    transform_in_place(&mut data, 1.0);
    data
}

/// Signed frequency of the wrapped index `k` in a length-`n` transform.
/// The Nyquist index maps to `-n/2`.
pub fn signed_frequency(k: usize, n: usize) -> i64 {
    if 2 * k < n {
        k as i64
    } else {
        k as i64 - n as i64
    }
}

/// Spectral derivative of samples of a `period`-periodic function on a uniform grid.
pub fn derivative(samples: &[C64], period: f64) -> Vec<C64> {
    let n = samples.len();
    let omega = 2.0 * PI / period;
    let mut coeffs = forward(samples);
    for (k, c) in coeffs.iter_mut().enumerate() {
        let freq = signed_frequency(k, n);
        if 2 * k == n {
            // Nyquist mode has no consistent derivative for real data.
            *c = C64::new(0.0, 0.0);
        } else {
            *c *= C64::new(0.0, omega * freq as f64);
        }
    }
    inverse(&coeffs)
}

/// A band-limited periodic function `x(t) = sum_k c_k e^{i omega k t}`,
/// evaluable at arbitrary points.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TrigSeries {
    period: f64,
    /// `(frequency, coefficient)` pairs, negligible modes dropped.
    terms: Vec<(i64, C64)>,
}

impl TrigSeries {
    /// Trigonometric interpolant of uniform samples over one period.
    ///
    /// Modes below `rel_cutoff * max|c_k|` are dropped; pass `0.0` to keep all.
    /// The Nyquist mode is split evenly between `+n/2` and `-n/2` so that
    /// real samples give a real interpolant.
    pub fn interpolate(samples: &[C64], period: f64, rel_cutoff: f64) -> Self {
        let n = samples.len();
        let coeffs = forward(samples);
        let cmax = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let floor = rel_cutoff * cmax;
        let mut terms = Vec::new();
        for (k, &c) in coeffs.iter().enumerate() {
            if c.norm() < floor || c.norm() == 0.0 {
                continue;
            }
            if 2 * k == n {
                let half = n as i64 / 2;
                terms.push((half, c * 0.5));
                terms.push((-half, c * 0.5));
            } else {
                terms.push((signed_frequency(k, n), c));
            }
        }
        Self { period, terms }
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    /// The series of `t -> a * x(t / stretch) + b`, whose period is `stretch * period`.
    pub fn affine(&self, a: C64, b: C64, stretch: f64) -> Self {
        let mut terms: Vec<(i64, C64)> = self.terms.iter().map(|&(k, c)| (k, a * c)).collect();
        match terms.iter_mut().find(|(k, _)| *k == 0) {
            Some((_, c)) => *c += b,
            None => terms.push((0, b)),
        }
        Self {
            period: self.period * stretch,
            terms,
        }
    }

    pub fn mode_count(&self) -> usize {
        self.terms.len()
    }

    fn phases(&self, t: f64) -> Phases {
        let kmax = self.terms.iter().map(|(k, _)| k.unsigned_abs()).max().unwrap_or(0);
        Phases::new(2.0 * PI / self.period * t, kmax)
    }

    pub fn eval(&self, t: f64) -> C64 {
        let p = self.phases(t);
        self.terms.iter().map(|&(k, c)| c * p.get(k)).sum()
    }

    /// First derivative at `t`.
    pub fn eval_derivative(&self, t: f64) -> C64 {
        let w = 2.0 * PI / self.period;
        let p = self.phases(t);
        self.terms
            .iter()
            .map(|&(k, c)| c * C64::new(0.0, w * k as f64) * p.get(k))
            .sum()
    }

    /// Value, first and second derivative at `t`.
    pub fn eval_jet(&self, t: f64) -> (C64, C64, C64) {
        let w = 2.0 * PI / self.period;
        let p = self.phases(t);
        let mut v = C64::new(0.0, 0.0);
        let mut d1 = v;
        let mut d2 = v;
        for &(k, c) in &self.terms {
            let kw = w * k as f64;
            let e = c * p.get(k);
            v += e;
            d1 += e * C64::new(0.0, kw);
            d2 -= e * (kw * kw);
        }
        (v, d1, d2)
    }
}

/// `e^{i k theta}` for `|k| <= kmax` as a product of two directly evaluated
/// factors, `e^{i q B theta} e^{i r theta}` with `k = q B + r`.
struct Phases {
    fine: Vec<C64>,
    coarse: Vec<C64>,
}

const PHASE_BLOCK: u64 = 16;

impl Phases {
    fn new(theta: f64, kmax: u64) -> Self {
        let fine = (0..PHASE_BLOCK)
            .map(|r| C64::from_polar(1.0, theta * r as f64))
            .collect();
        let coarse = (0..=kmax / PHASE_BLOCK)
            .map(|q| C64::from_polar(1.0, theta * (q * PHASE_BLOCK) as f64))
            .collect();
        Self { fine, coarse }
    }

    fn get(&self, k: i64) -> C64 {
        let a = k.unsigned_abs();
        let e = self.coarse[(a / PHASE_BLOCK) as usize] * self.fine[(a % PHASE_BLOCK) as usize];
        if k < 0 {
            e.conj()
        } else {
            e
        }
    }
}

/// Antiderivative of periodic samples, evaluable anywhere:
/// `F(t) = mean * t + P(t)` with `P` periodic and `F(0) = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicIntegral {
    mean: C64,
    periodic: TrigSeries,
    offset: C64,
}

impl PeriodicIntegral {
    pub fn new(samples: &[C64], period: f64) -> Self {
        let n = samples.len();
        let coeffs = forward(samples);
        let omega = 2.0 * PI / period;
        let mut terms = Vec::with_capacity(n);
        for (k, &c) in coeffs.iter().enumerate().skip(1) {
            if 2 * k == n {
                continue;
            }
            let freq = signed_frequency(k, n);
            terms.push((freq, c / C64::new(0.0, omega * freq as f64)));
        }
        let periodic = TrigSeries { period, terms };
        let offset = periodic.eval(0.0);
        Self {
            mean: coeffs[0],
            periodic,
            offset,
        }
    }

    /// Mean value of the integrand over one period.
    pub fn mean(&self) -> C64 {
        self.mean
    }

    pub fn eval(&self, t: f64) -> C64 {
        self.mean * t + self.periodic.eval(t) - self.offset
    }

    /// Periodic part `P(t)` of the antiderivative (zero mean over a period).
    pub fn periodic_part(&self, t: f64) -> C64 {
        self.periodic.eval(t)
    }

    /// Values on the sample grid `t_j = j * period / n`, computed by one inverse FFT.
    pub fn on_grid(&self, n: usize) -> Vec<C64> {
        let period = self.periodic.period;
        let mut coeffs = vec![C64::new(0.0, 0.0); n];
        for &(k, c) in &self.periodic.terms {
            let idx = if k >= 0 { k as usize } else { (n as i64 + k) as usize };
            if idx < n {
                coeffs[idx] += c;
            }
        }
        let periodic = inverse(&coeffs);
        periodic
            .into_iter()
            .enumerate()
            .map(|(j, p)| self.mean * (j as f64 * period / n as f64) + p - self.offset)
            .collect()
    }
}

/// Unwrap a sequence of angles so consecutive differences lie in `(-pi, pi]`.
pub fn unwrap_angles(angles: &mut [f64]) {
    for j in 1..angles.len() {
        let mut d = angles[j] - angles[j - 1];
        while d > PI {
            d -= 2.0 * PI;
        }
        while d <= -PI {
            d += 2.0 * PI;
        }
        angles[j] = angles[j - 1] + d;
    }
}

/// Real samples as complex numbers.
pub fn complexify(values: &[f64]) -> Vec<C64> {
    values.iter().map(|&v| C64::new(v, 0.0)).collect()
}

/// Periodic trapezoid rule: `period * mean(samples)`.
pub fn trapezoid_periodic(samples: &[f64], period: f64) -> f64 {
    let n = samples.len() as f64;
    samples.iter().sum::<f64>() * period / n
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: usize) -> impl Iterator<Item = f64> {
        (0..n).map(move |j| 2.0 * PI * j as f64 / n as f64)
    }

    #[test]
    fn fft_matches_direct_sum() {
        let samples: Vec<C64> = grid(16)
            .map(|t| C64::new((3.0 * t).cos() + 0.2, (t * 2.0).sin() - 0.5 * t.cos()))
            .collect();
        let fast = forward(&samples);
        for (k, c) in fast.iter().enumerate() {
            let mut acc = C64::new(0.0, 0.0);
            for (j, x) in samples.iter().enumerate() {
                acc += x * C64::from_polar(1.0, -2.0 * PI * (j * k) as f64 / 16.0);
            }
            assert!((acc / 16.0 - c).norm() < 1e-14);
        }
        let back = inverse(&fast);
        for (a, b) in back.iter().zip(&samples) {
            assert!((a - b).norm() < 1e-14);
        }
    }

    #[test]
    fn odd_lengths_use_the_direct_sum() {
        let samples: Vec<C64> = (0..15).map(|j| C64::new(j as f64, -(j as f64).sqrt())).collect();
        let back = inverse(&forward(&samples));
        for (a, b) in back.iter().zip(&samples) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn derivative_of_band_limited_signal_is_exact() {
        let n = 64;
        let samples: Vec<C64> = grid(n).map(|t| C64::new((5.0 * t).sin(), t.cos())).collect();
        let d = derivative(&samples, 2.0 * PI);
        for (t, v) in grid(n).zip(d) {
            assert!((v - C64::new(5.0 * (5.0 * t).cos(), -t.sin())).norm() < 1e-12);
        }
    }

    #[test]
    fn periodic_integral_handles_mean_and_offset() {
        let n = 32;
        let samples: Vec<C64> = grid(n).map(|t| C64::new(1.0 + 0.5 * t.cos(), 0.0)).collect();
        let integral = PeriodicIntegral::new(&samples, 2.0 * PI);
        for t in [0.0, 0.3, 1.7, 2.0 * PI] {
            let expected = t + 0.5 * t.sin();
            assert!((integral.eval(t).re - expected).abs() < 1e-13, "t = {t}");
        }
        let on_grid = integral.on_grid(n);
        for (t, v) in grid(n).zip(on_grid) {
            assert!((v.re - (t + 0.5 * t.sin())).abs() < 1e-13);
        }
    }

    #[test]
    fn interpolant_reproduces_samples_and_derivatives() {
        let n = 32;
        let f = |t: f64| C64::new(2.0 * t.cos(), t.sin() + 0.1 * (3.0 * t).cos());
        let samples: Vec<C64> = grid(n).map(f).collect();
        let series = TrigSeries::interpolate(&samples, 2.0 * PI, 0.0);
        let t = 0.77;
        assert!((series.eval(t) - f(t)).norm() < 1e-13);
        let (_, d1, d2) = series.eval_jet(t);
        let exact_d1 = C64::new(-2.0 * t.sin(), t.cos() - 0.3 * (3.0 * t).sin());
        let exact_d2 = C64::new(-2.0 * t.cos(), -t.sin() - 0.9 * (3.0 * t).cos());
        assert!((d1 - exact_d1).norm() < 1e-12);
        assert!((d2 - exact_d2).norm() < 1e-12);
        assert!((series.eval_derivative(t) - exact_d1).norm() < 1e-12);
    }

    #[test]
    fn unwrap_restores_monotone_angle() {
        let mut a: Vec<f64> = (0..50)
            .map(|j| {
                let x = 0.3 * j as f64;
                x.sin().atan2(x.cos())
            })
            .collect();
        unwrap_angles(&mut a);
        for (j, v) in a.iter().enumerate() {
            assert!((v - 0.3 * j as f64).abs() < 1e-12);
        }
    }
}
