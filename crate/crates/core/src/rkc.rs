//! Jacobian certification for Poisson extensions of boundary maps onto convex
//! curves, and the homotopy sweep between two such maps.

use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;

// std, when linked into the graph, provides these as inherent methods
#[allow(unused_imports)]
use num_traits::Float;

use crate::boundary::{monotonicity_degree_check, BoundaryMap};
use crate::claims::{curvature_bound, diameter_bound, Scenario};
use crate::conformal::golden_min;
use crate::curves::ConvexCurve;
use crate::harmonic2d::{DiskGrid, DiskHarmonicMap};
use crate::{Error, Result, C64};

/// Radius of the ring standing in for the circle.
pub const RING_RADIUS: f64 = 1.0 - 1e-4;

/// Angular oversampling of the ring relative to the grid.
const RING_OVERSAMPLING: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum BoundId {
    /// `k m^3 / (2 pi K M)`.
    Curvature,
    /// `diam m / (8 pi M)`.
    Diameter,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Verdict {
    Certified,
    NotCertified,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Certificate {
    pub ring_radius: f64,
    pub ring_min: f64,
    pub ring_argmin_theta: f64,
    pub interior_min: f64,
    pub interior_argmin: [f64; 2],
    pub curvature_bound: f64,
    pub diameter_bound: f64,
    /// The larger of the two bounds.
    pub applied: BoundId,
    pub bound_value: f64,
    pub tolerance: f64,
    pub verdict: Verdict,
}

/// Evaluates `J` on the ring `|z| = 1 - 1e-4` and on the grid, and both lower bounds.
///
/// Certified iff both minima are positive and the interior minimum is at least
/// the ring minimum up to the algebraic tolerance.
pub fn certify(s: &Scenario) -> Result<Certificate> {
    let (k, big_k) = s.domain().boundary().curvature_range();
    if !(k > 0.0) {
        return Err(Error::NonConvexCurve);
    }
    let (m, big_m) = s.speed_bounds();
    if !(m > 1e-12 * big_m) {
        return Err(Error::DegenerateSpeed(m));
    }
    let map = s.map();
    let samples = RING_OVERSAMPLING * s.grid.angular;
    let h = 2.0 * PI / samples as f64;
    let on_ring = |t: f64| map.jet_unchecked(C64::from_polar(RING_RADIUS, t)).jacobian();
    let mut ring = (f64::INFINITY, 0.0);
    for j in 0..samples {
        let t = h * j as f64;
        let v = on_ring(t);
        if v < ring.0 {
            ring = (v, t);
        }
    }
    let ring_min = golden_min(&on_ring, ring.1 - h, ring.1 + h, 1e-12).min(ring.0);
    let mut interior = (f64::INFINITY, [0.0; 2]);
    for p in s.grid.points() {
        let j = map.jet_unchecked(p.z).jacobian();
        if j < interior.0 {
            interior = (j, [p.z.re, p.z.im]);
        }
    }
    let curvature = curvature_bound(k, big_k, m, big_m);
    let diameter = diameter_bound(s.domain().diameter(), m, big_m);
    let (applied, bound_value) = if curvature >= diameter {
        (BoundId::Curvature, curvature)
    } else {
        (BoundId::Diameter, diameter)
    };
    let tolerance = s.tolerances.algebraic;
    let certified = interior.0 > 0.0 && ring_min > 0.0 && interior.0 >= ring_min - tolerance;
    Ok(Certificate {
        ring_radius: RING_RADIUS,
        ring_min,
        ring_argmin_theta: ring.1,
        interior_min: interior.0,
        interior_argmin: interior.1,
        curvature_bound: curvature,
        diameter_bound: diameter,
        applied,
        bound_value,
        tolerance,
        verdict: if certified {
            Verdict::Certified
        } else {
            Verdict::NotCertified
        },
    })
}

/// Minimum of `J` over the grid for the Poisson extension of `map` truncated at `modes`.
pub fn min_jacobian(map: &BoundaryMap, modes: usize, grid: &DiskGrid) -> Result<f64> {
    let h = DiskHarmonicMap::extend(&map.fourier_coefficients(modes)?);
    Ok(grid
        .points()
        .map(|p| h.jet_unchecked(p.z).jacobian())
        .fold(f64::INFINITY, f64::min))
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct HomotopyTrace {
    pub lambdas: Vec<f64>,
    /// `m(lambda_j)`, the grid minimum of `J`.
    pub minima: Vec<f64>,
    /// `max_j |m(lambda_{j+1}) - m(lambda_j)|`.
    pub max_jump: f64,
    pub note: String,
}

/// Note attached to every trace.
pub const HOMOTOPY_NOTE: &str = "family starts at the constant arc-speed parametrization, \
     not at a conformal boundary correspondence; schedules are convex combinations in arc length";

/// Lift of `g`'s schedule closest to the constant-speed one at `t = 0`, as a multiple of `L`.
fn lift_shift(l: f64, g: &BoundaryMap) -> f64 {
    let offset = -g.schedule()[0] / l;
    // ties go to the lift at or below the constant schedule
    let k = (offset - 0.5).ceil();
    k * l
}

/// The boundary map with schedule `(1 - lambda) s_0 + lambda s_g`.
pub fn homotopy_map(curve: &ConvexCurve, g: &BoundaryMap, lambda: f64) -> Result<BoundaryMap> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::InvalidArgument(alloc::format!(
            "lambda = {lambda} outside [0, 1]"
        )));
    }
    let n = g.len();
    let l = curve.length();
    let shift = lift_shift(l, g);
    let schedule = g
        .schedule()
        .iter()
        .enumerate()
        .map(|(i, sg)| {
            let s0 = l * i as f64 / n as f64;
            (1.0 - lambda) * s0 + lambda * (sg + shift)
        })
        .collect();
    let increase = (1.0 - lambda) * l + lambda * g.increase();
    BoundaryMap::from_schedule(curve.clone(), schedule, increase)
}

/// Tracks `m(lambda)` over `lambda_j = j / steps`, `j = 0..=steps`.
///
/// The endpoints are built from exactly the schedules of
/// `BoundaryMap::constant_speed(curve, n)` and of `g`, so they agree bit for bit
/// with [`min_jacobian`] applied to those maps.
pub fn homotopy_trace(
    curve: &ConvexCurve,
    g: &BoundaryMap,
    steps: usize,
    modes: usize,
    grid: &DiskGrid,
) -> Result<HomotopyTrace> {
    if steps < 2 {
        return Err(Error::InvalidArgument("the homotopy needs at least 2 steps".into()));
    }
    check_homotopy_input(curve, g)?;
    let lambdas: Vec<f64> = (0..=steps).map(|j| j as f64 / steps as f64).collect();
    let mut minima = Vec::with_capacity(lambdas.len());
    for &lambda in &lambdas {
        minima.push(min_jacobian(&homotopy_map(curve, g, lambda)?, modes, grid)?);
    }
    Ok(HomotopyTrace::assemble(lambdas, minima))
}

/// Preconditions of [`homotopy_trace`]: `g` is monotone of degree one onto `curve`.
pub fn check_homotopy_input(curve: &ConvexCurve, g: &BoundaryMap) -> Result<()> {
    let l = curve.length();
    if (g.target().length() - l).abs() > 1e-9 * l {
        return Err(Error::InvalidArgument("g does not target the given curve".into()));
    }
    let (ok, worst) = monotonicity_degree_check(g);
    if !ok {
        return Err(Error::NonMonotoneInput(worst));
    }
    Ok(())
}

impl HomotopyTrace {
    /// Builds a trace from per-slice minima in `lambda` order.
    pub fn assemble(lambdas: Vec<f64>, minima: Vec<f64>) -> Self {
        let max_jump = minima.windows(2).map(|w| (w[1] - w[0]).abs()).fold(0.0, f64::max);
        Self {
            lambdas,
            minima,
            max_jump,
            note: HOMOTOPY_NOTE.into(),
        }
    }

    pub fn max_minimum(&self) -> f64 {
        self.minima.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min_minimum(&self) -> f64 {
        self.minima.iter().cloned().fold(f64::INFINITY, f64::min)
    }
}
