//! Seeded families of disk scenarios.
//!
//! Two kinds of member are drawn from one ChaCha stream:
//!
//! * self-maps of the unit disk whose speed is `pi`-periodic, so the boundary
//!   map satisfies `f(t + pi) = -f(t)` and the extension is odd with `h(0) = 0`;
//! * convex curves with radius of curvature `rho(psi) = s (1 + sum a_j cos(j psi + b_j))`,
//!   `j >= 2`, carrying a random positive speed, translated so that `h(0) = 0`.

use std::f64::consts::PI;

use harmlab_core::boundary::{BoundaryMap, SpeedProfile};
use harmlab_core::claims::Scenario;
use harmlab_core::curves::DEFAULT_SAMPLES;
use harmlab_core::{ConvexCurve, DiskGrid, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::hash::sha256_hex;
use crate::scenario::curve_from_curvature_radius;

pub const GALLERY_MODES: usize = 256;
const SPEED_SAMPLES: usize = 1024;
const RADIUS_SAMPLES: usize = 512;

/// Injectivity spot check: source separation, and image separation relative to the diameter.
pub const SOURCE_GAP: f64 = 0.05;
pub const IMAGE_GAP: f64 = 1e-3;

/// `amplitude * cos(frequency * x + phase)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Harmonic {
    pub frequency: u32,
    pub amplitude: f64,
    pub phase: f64,
}

fn series(terms: &[Harmonic], x: f64) -> f64 {
    1.0 + terms
        .iter()
        .map(|h| h.amplitude * (h.frequency as f64 * x + h.phase).cos())
        .sum::<f64>()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Member {
    /// Unit-circle self-map with speed `1 + sum(speed)`, shifted in time by `time_phase`.
    SelfMap {
        label: String,
        speed: Vec<Harmonic>,
        time_phase: f64,
    },
    /// Curve with radius of curvature `scale (1 + sum(radius))` and speed `1 + sum(speed)`.
    Curve {
        label: String,
        scale: f64,
        radius: Vec<Harmonic>,
        speed: Vec<Harmonic>,
        time_phase: f64,
    },
}

impl Member {
    pub fn label(&self) -> &str {
        match self {
            Member::SelfMap { label, .. } | Member::Curve { label, .. } => label,
        }
    }

    pub fn is_self_map(&self) -> bool {
        matches!(self, Member::SelfMap { .. })
    }

    pub fn curve(&self) -> Result<ConvexCurve> {
        match self {
            Member::SelfMap { .. } => Ok(ConvexCurve::circle(1.0, C64::new(0.0, 0.0), DEFAULT_SAMPLES)?),
            Member::Curve { scale, radius, .. } => {
                let rho: Vec<f64> = (0..RADIUS_SAMPLES)
                    .map(|i| scale * series(radius, 2.0 * PI * i as f64 / RADIUS_SAMPLES as f64))
                    .collect();
                curve_from_curvature_radius(&rho, DEFAULT_SAMPLES)
            }
        }
    }

    pub fn boundary_map(&self) -> Result<BoundaryMap> {
        let (speed, phase) = match self {
            Member::SelfMap { speed, time_phase, .. } | Member::Curve { speed, time_phase, .. } => (speed, *time_phase),
        };
        let v = SpeedProfile::from_fn(SPEED_SAMPLES, |t| series(speed, t))?;
        Ok(BoundaryMap::from_speed(self.curve()?, &v, phase)?)
    }

    /// The member as a disk scenario with `h(0) = 0`.
    pub fn scenario(&self, grid: DiskGrid) -> Result<Scenario> {
        let s = Scenario::from_boundary(self.label(), self.boundary_map()?, GALLERY_MODES, grid)?;
        Ok(match self {
            Member::SelfMap { .. } => s,
            Member::Curve { .. } => {
                let shift = -s.image_origin();
                s.similar(C64::new(1.0, 0.0), shift)?
            }
        })
    }
}

/// Splits a total amplitude over the given frequencies with random weights and phases.
fn harmonics(rng: &mut ChaCha8Rng, frequencies: &[u32], total: f64) -> Vec<Harmonic> {
    let weights: Vec<f64> = frequencies.iter().map(|_| rng.gen_range(0.05..1.0)).collect();
    let sum: f64 = weights.iter().sum();
    frequencies
        .iter()
        .zip(weights)
        .map(|(&frequency, w)| Harmonic {
            frequency,
            amplitude: total * w / sum,
            phase: rng.gen_range(0.0..2.0 * PI),
        })
        .collect()
}

/// Number of curve members accompanying `count` self-maps.
pub fn curve_count(count: usize) -> usize {
    (count / 4).max(1)
}

/// `count` odd self-maps followed by [`curve_count`] convex-curve members, reproducible from `seed`.
pub fn generate(count: usize, seed: u64) -> Vec<Member> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count + curve_count(count));
    for i in 0..count {
        let total = rng.gen_range(0.0..0.85);
        out.push(Member::SelfMap {
            label: format!("odd-{i:02}"),
            speed: harmonics(&mut rng, &[2, 4, 6], total),
            time_phase: rng.gen_range(0.0..2.0 * PI),
        });
    }
    for i in 0..curve_count(count) {
        let scale = rng.gen_range(0.5..3.0);
        let radius_total = rng.gen_range(0.0..0.7);
        let radius = harmonics(&mut rng, &[2, 3, 4], radius_total);
        let speed_total = rng.gen_range(0.0..0.6);
        out.push(Member::Curve {
            label: format!("curve-{i:02}"),
            scale,
            radius,
            speed: harmonics(&mut rng, &[1, 2, 3], speed_total),
            time_phase: rng.gen_range(0.0..2.0 * PI),
        });
    }
    out
}

/// Digest of the member descriptions; equal seeds give equal digests.
pub fn digest(members: &[Member]) -> String {
    sha256_hex(&serde_json::to_vec(members).expect("gallery members serialize"))
}
