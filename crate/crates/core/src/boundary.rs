//! Degree-one boundary maps of the unit circle onto convex curves.
//!
//! A boundary map is described kinematically by an arc-length schedule
//! `s(t)`, nondecreasing with `s(t + 2 pi) = s(t) + L`, and `f(t) = z(s(t))`
//! where `z` is the arc-length parametrization of the target curve.

use alloc::vec::Vec;
use core::f64::consts::PI;

// std, when linked into the graph, provides these as inherent methods
#[allow(unused_imports)]
use num_traits::Float;

use crate::curves::ConvexCurve;
use crate::spectral::{self, PeriodicIntegral};
use crate::{Error, Result, C64};

/// Default number of Fourier modes kept on each side.
pub const DEFAULT_MODES: usize = 256;

/// Speed samples `v(t_i)` on the uniform grid `t_i = 2 pi i / n`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SpeedProfile {
    samples: Vec<f64>,
}

impl SpeedProfile {
    /// Accepts nonnegative samples; strict positivity is checked where a diffeomorphism is required.
    pub fn new(samples: Vec<f64>) -> Result<Self> {
        if samples.len() < 8 {
            return Err(Error::InvalidArgument(
                "a speed profile needs at least 8 samples".into(),
            ));
        }
        if let Some((index, &value)) = samples
            .iter()
            .enumerate()
            .find(|(_, v)| !(**v >= 0.0) || !v.is_finite())
        {
            return Err(Error::NonPositiveSpeed { index, value });
        }
        Ok(Self { samples })
    }

    pub fn from_fn(n: usize, v: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new((0..n).map(|i| v(2.0 * PI * i as f64 / n as f64)).collect())
    }

    pub fn constant(n: usize) -> Self {
        Self {
            samples: alloc::vec![1.0; n],
        }
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

/// `f(t_i) = z(s(t_i))` on a uniform grid of `[0, 2 pi)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryMap {
    target: ConvexCurve,
    schedule: Vec<f64>,
    increase: f64,
    samples: Vec<C64>,
    min_speed: f64,
    max_speed: f64,
}

impl BoundaryMap {
    /// Builds the map from a lifted schedule `s(t_i)` with `s(t + 2 pi) = s(t) + increase`.
    ///
    /// Monotonicity is not enforced here (see [`monotonicity_degree_check`]).
    /// Speed bounds come from the spectral derivative of the schedule.
    pub fn from_schedule(target: ConvexCurve, schedule: Vec<f64>, increase: f64) -> Result<Self> {
        if schedule.len() < 8 {
            return Err(Error::InvalidArgument("a schedule needs at least 8 samples".into()));
        }
        let samples = schedule.iter().map(|&s| target.point_at(s)).collect();
        let mut map = Self {
            target,
            schedule,
            increase,
            samples,
            min_speed: 0.0,
            max_speed: 0.0,
        };
        let speed = map.speed_samples();
        map.min_speed = speed.iter().cloned().fold(f64::INFINITY, f64::min);
        map.max_speed = speed.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        Ok(map)
    }

    /// `s(t) = L t / 2 pi`, constant arc speed `L / 2 pi`.
    pub fn constant_speed(target: ConvexCurve, samples: usize) -> Self {
        let l = target.length();
        let schedule = (0..samples).map(|i| l * i as f64 / samples as f64).collect();
        Self::from_schedule(target, schedule, l).expect("constant schedule")
    }

    /// Boundary map with speed proportional to `v`, shifted in time by `phase`:
    /// `f(t) = z(S(t + phase))` where `S(t) = (L / int v) int_0^t v`.
    pub fn from_speed(target: ConvexCurve, v: &SpeedProfile, phase: f64) -> Result<Self> {
        if let Some((index, &value)) = v.samples.iter().enumerate().find(|(_, &x)| !(x > 0.0)) {
            return Err(Error::NonPositiveSpeed { index, value });
        }
        let n = v.len();
        let l = target.length();
        let integral = PeriodicIntegral::new(&spectral::complexify(&v.samples), 2.0 * PI);
        let scale = l / (2.0 * PI * integral.mean().re);
        let schedule: Vec<f64> = if phase == 0.0 {
            integral.on_grid(n).iter().map(|c| scale * c.re).collect()
        } else {
            (0..n)
                .map(|i| scale * integral.eval(2.0 * PI * i as f64 / n as f64 + phase).re)
                .collect()
        };
        let mut map = Self::from_schedule(target, schedule, l)?;
        map.min_speed = v.samples.iter().cloned().fold(f64::INFINITY, f64::min) * scale;
        map.max_speed = v.samples.iter().cloned().fold(f64::NEG_INFINITY, f64::max) * scale;
        Ok(map)
    }

    pub fn target(&self) -> &ConvexCurve {
        &self.target
    }

    /// Lifted schedule `s(t_i)`.
    pub fn schedule(&self) -> &[f64] {
        &self.schedule
    }

    /// `s(2 pi) - s(0)`; equals `L` for degree one.
    pub fn increase(&self) -> f64 {
        self.increase
    }

    pub fn samples(&self) -> &[C64] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// `(m, M)`: lower and upper bounds of `|f'|` on the grid.
    pub fn speed_bounds(&self) -> (f64, f64) {
        (self.min_speed, self.max_speed)
    }

    /// `|f'(t_i)| = s'(t_i)` by spectral differentiation of the periodic part of the schedule.
    pub fn speed_samples(&self) -> Vec<f64> {
        let n = self.schedule.len();
        let slope = self.increase / (2.0 * PI);
        let periodic: Vec<C64> = self
            .schedule
            .iter()
            .enumerate()
            .map(|(i, s)| C64::new(s - slope * 2.0 * PI * i as f64 / n as f64, 0.0))
            .collect();
        spectral::derivative(&periodic, 2.0 * PI)
            .iter()
            .map(|d| slope + d.re)
            .collect()
    }

    /// Lifted schedule at arbitrary `t`, by linear interpolation.
    pub fn schedule_at(&self, t: f64) -> f64 {
        let n = self.schedule.len();
        let h = 2.0 * PI / n as f64;
        let turns = (t / (2.0 * PI)).floor();
        let local = t - turns * 2.0 * PI;
        let x = local / h;
        let i = (x.floor() as usize).min(n - 1);
        let frac = x - i as f64;
        let a = self.schedule[i];
        let b = if i + 1 == n {
            self.schedule[0] + self.increase
        } else {
            self.schedule[i + 1]
        };
        turns * self.increase + a + frac * (b - a)
    }

    pub fn fourier_coefficients(&self, modes: usize) -> Result<FourierCoeffs> {
        fourier_coefficients(&self.samples, modes)
    }
}

/// Boundary map with speed proportional to `v` and zero phase.
pub fn boundary_from_speed(curve: ConvexCurve, v: &SpeedProfile) -> Result<BoundaryMap> {
    BoundaryMap::from_speed(curve, v, 0.0)
}

/// Number of nodes on each side of the mollifier.
const KERNEL_HALF_NODES: i32 = 32;

/// Mollifies a monotone schedule into a strictly increasing one:
/// `s_eps = (1 - eps) (K * s) + eps L t / 2 pi` with a triangular kernel of half-width `pi eps`.
pub fn smooth_monotone(map: &BoundaryMap, eps: f64) -> Result<BoundaryMap> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidEpsilon(eps));
    }
    let n = map.schedule.len();
    let width = PI * eps;
    let nodes: Vec<(f64, f64)> = (-KERNEL_HALF_NODES..=KERNEL_HALF_NODES)
        .map(|j| {
            let u = width * j as f64 / KERNEL_HALF_NODES as f64;
            (u, 1.0 - (u / width).abs())
        })
        .filter(|(_, w)| *w > 0.0)
        .collect();
    let total: f64 = nodes.iter().map(|(_, w)| w).sum();
    let l = map.increase;
    let schedule = (0..n)
        .map(|i| {
            let t = 2.0 * PI * i as f64 / n as f64;
            let smooth: f64 = nodes.iter().map(|&(u, w)| w * map.schedule_at(t - u)).sum::<f64>() / total;
            (1.0 - eps) * smooth + eps * (l * t / (2.0 * PI) + map.schedule[0])
        })
        .collect();
    BoundaryMap::from_schedule(map.target.clone(), schedule, l)
}

/// `(ok, worst slope)`: `ok` iff every forward-difference slope of the
/// schedule is at least `-1e-9` and the total increase equals `L`.
pub fn monotonicity_degree_check(map: &BoundaryMap) -> (bool, f64) {
    let n = map.schedule.len();
    let h = 2.0 * PI / n as f64;
    let worst = (0..n)
        .map(|i| {
            let next = if i + 1 == n {
                map.schedule[0] + map.increase
            } else {
                map.schedule[i + 1]
            };
            (next - map.schedule[i]) / h
        })
        .fold(f64::INFINITY, f64::min);
    let l = map.target.length();
    let degree_one = (map.increase - l).abs() <= 1e-9 * l;
    (worst >= -1e-9 && degree_one, worst)
}

/// Boundary Fourier coefficients `c_k`, `|k| <= N`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FourierCoeffs {
    modes: usize,
    coeffs: Vec<C64>,
    tail: f64,
}

impl FourierCoeffs {
    /// Coefficients given as `(k, c_k)` pairs; missing indices are zero.
    pub fn from_pairs(pairs: &[(i64, C64)]) -> Self {
        let modes = pairs.iter().map(|(k, _)| k.unsigned_abs() as usize).max().unwrap_or(0);
        let mut coeffs = alloc::vec![C64::new(0.0, 0.0); 2 * modes + 1];
        for &(k, c) in pairs {
            coeffs[(k + modes as i64) as usize] += c;
        }
        Self {
            modes,
            coeffs,
            tail: 0.0,
        }
    }

    /// Highest retained frequency `N`.
    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn get(&self, k: i64) -> C64 {
        if k.unsigned_abs() as usize > self.modes {
            return C64::new(0.0, 0.0);
        }
        self.coeffs[(k + self.modes as i64) as usize]
    }

    /// `(k, c_k)` for `k = -N..=N`.
    pub fn iter(&self) -> impl Iterator<Item = (i64, C64)> + '_ {
        let n = self.modes as i64;
        self.coeffs.iter().enumerate().map(move |(i, &c)| (i as i64 - n, c))
    }

    /// `sum |c_k|` over the discarded modes `N < |k| <= M/2`; bounds the sup-norm truncation error.
    pub fn tail_bound(&self) -> f64 {
        self.tail
    }

    /// Evaluates `sum c_k e^{ikt}`.
    pub fn eval(&self, t: f64) -> C64 {
        self.iter().map(|(k, c)| c * C64::from_polar(1.0, k as f64 * t)).sum()
    }

    /// Samples of the truncated series on a uniform grid of `n` points.
    pub fn reconstruct(&self, n: usize) -> Vec<C64> {
        (0..n).map(|j| self.eval(2.0 * PI * j as f64 / n as f64)).collect()
    }
}

/// Trapezoid-rule coefficients `c_k = (1/n) sum_j f(t_j) e^{-ik t_j}`, `|k| <= N`.
pub fn fourier_coefficients(samples: &[C64], modes: usize) -> Result<FourierCoeffs> {
    let m = samples.len();
    if m < 2 * modes + 2 {
        return Err(Error::InsufficientSamples { samples: m, modes });
    }
    let all = spectral::forward(samples);
    let mut coeffs = Vec::with_capacity(2 * modes + 1);
    for k in -(modes as i64)..=(modes as i64) {
        let idx = if k >= 0 { k as usize } else { (m as i64 + k) as usize };
        coeffs.push(all[idx]);
    }
    let tail = all
        .iter()
        .enumerate()
        .filter(|&(i, _)| spectral::signed_frequency(i, m).unsigned_abs() as usize > modes)
        .map(|(_, c)| c.norm())
        .sum();
    Ok(FourierCoeffs { modes, coeffs, tail })
}
