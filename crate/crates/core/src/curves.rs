//! Closed strictly convex plane curves stored by arc length.
//!
//! A [`ConvexCurve`] keeps uniform arc-length samples of the position, the
//! tangential angle and the curvature, plus the trigonometric interpolant of
//! the position so that the curve can be evaluated between samples. Curves
//! are oriented counterclockwise, so the inward normal at `z(s)` is
//! `i z'(s)`.

use alloc::vec::Vec;
use core::f64::consts::PI;

// std, when linked into the graph, provides these as inherent methods
#[allow(unused_imports)]
use num_traits::Float;

use crate::spectral::{self, PeriodicIntegral, TrigSeries};
use crate::{Error, Result, C64};

/// Default number of arc-length samples.
pub const DEFAULT_SAMPLES: usize = 2048;

/// Modes of the position interpolant below this fraction of the largest are dropped.
const SERIES_CUTOFF: f64 = 1e-16;

#[derive(Debug, Clone, PartialEq)]
pub struct ConvexCurve {
    length: f64,
    curvature: Vec<f64>,
    tangent_angle: Vec<f64>,
    points: Vec<C64>,
    position: TrigSeries,
}

/// How far a curve is from satisfying the [`ConvexCurve`] invariants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveDiagnostics {
    /// `|phi(L) - phi(0) - 2 pi|` measured as the trapezoid integral of curvature.
    pub turning_error: f64,
    /// `|z(L) - z(0)| / L`.
    pub closure_gap: f64,
    pub min_curvature: f64,
    /// `max | |z'(s)| - 1 |` from the spectral derivative of the samples.
    pub unit_speed_error: f64,
}

impl ConvexCurve {
    /// Integrates a positive curvature profile sampled at `s_j = j L / M`.
    ///
    /// The curvature is rescaled so its integral is exactly `2 pi`, and the
    /// mean of `e^{i phi}` is subtracted from the tangent so the curve closes.
    /// When that projection is not negligible the result is re-parametrized
    /// by arc length. The curve is placed with zero arc-length centroid and
    /// starting tangent angle `pi / 2`.
    pub fn from_curvature(curvature: &[f64], length: f64) -> Result<Self> {
        Self::integrate_curvature(curvature, length, PI / 2.0)
    }

    /// Like [`ConvexCurve::from_curvature`] with a prescribed start point and initial tangent angle.
    pub fn from_curvature_anchored(curvature: &[f64], length: f64, start: C64, initial_angle: f64) -> Result<Self> {
        let curve = Self::integrate_curvature(curvature, length, initial_angle)?;
        let shift = start - curve.points[0];
        Ok(curve.transformed(C64::new(1.0, 0.0), shift))
    }

    fn integrate_curvature(curvature: &[f64], length: f64, initial_angle: f64) -> Result<Self> {
        if !(length > 0.0) || curvature.len() < 8 {
            return Err(Error::InvalidArgument(alloc::format!(
                "need a positive length and at least 8 samples (got L = {length}, {} samples)",
                curvature.len()
            )));
        }
        if let Some((index, &value)) = curvature.iter().enumerate().find(|(_, &k)| !(k > 0.0)) {
            return Err(Error::NonPositiveCurvature { index, value });
        }
        let m = curvature.len();
        let total = spectral::trapezoid_periodic(curvature, length);
        if (total - 2.0 * PI).abs() > 0.05 * 2.0 * PI {
            return Err(Error::TurningNumberMismatch { total });
        }
        let rescale = 2.0 * PI / total;
        let kappa: Vec<f64> = curvature.iter().map(|k| k * rescale).collect();

        let turning = PeriodicIntegral::new(&spectral::complexify(&kappa), length).on_grid(m);
        let phi: Vec<f64> = turning.iter().map(|v| initial_angle + v.re).collect();
        let tangent: Vec<C64> = phi.iter().map(|&p| C64::from_polar(1.0, p)).collect();
        let mean: C64 = tangent.iter().sum::<C64>() / m as f64;
        if mean.norm() >= 0.5 {
            return Err(Error::NotClosable { mean: mean.norm() });
        }

        // z(s) = periodic antiderivative of the projected tangent, zero mean.
        let mut coeffs = spectral::forward(&tangent);
        let omega = 2.0 * PI / length;
        coeffs[0] = C64::new(0.0, 0.0);
        for (k, c) in coeffs.iter_mut().enumerate().skip(1) {
            if 2 * k == m {
                *c = C64::new(0.0, 0.0);
            } else {
                *c /= C64::new(0.0, omega * spectral::signed_frequency(k, m) as f64);
            }
        }
        let points = spectral::inverse(&coeffs);

        if mean.norm() > 1e-12 {
            // The projected tangent is no longer unit length; restore arc length.
            let curve = Self::from_parametrization(&points, m)?;
            let shift = -curve.points.iter().sum::<C64>() / m as f64;
            return Ok(curve.transformed(C64::new(1.0, 0.0), shift));
        }

        let position = TrigSeries::interpolate(&points, length, SERIES_CUTOFF);
        Ok(Self {
            length,
            curvature: kappa,
            tangent_angle: phi,
            points,
            position,
        })
    }

    /// Resamples a smooth closed curve, given by uniform samples of any regular
    /// periodic parametrization, at `samples` uniform arc-length positions.
    ///
    /// Clockwise input is reversed. Fails with `NonPositiveCurvature` if the
    /// curve is not strictly convex.
    pub fn from_parametrization(param: &[C64], samples: usize) -> Result<Self> {
        let q = param.len();
        if q < 8 || samples < 8 {
            return Err(Error::InvalidArgument("too few samples for a closed curve".into()));
        }
        let signed_area: f64 = (0..q).map(|j| (param[j].conj() * param[(j + 1) % q]).im).sum::<f64>() * 0.5;
        let w: Vec<C64> = if signed_area < 0.0 {
            (0..q).map(|j| param[(q - j) % q]).collect()
        } else {
            param.to_vec()
        };
        let series = TrigSeries::interpolate(&w, 2.0 * PI, SERIES_CUTOFF);
        let speed: Vec<C64> = spectral::derivative(&w, 2.0 * PI)
            .iter()
            .map(|d| C64::new(d.norm(), 0.0))
            .collect();
        let arc = PeriodicIntegral::new(&speed, 2.0 * PI);
        let length = arc.mean().re * 2.0 * PI;
        if !(length > 0.0) {
            return Err(Error::InvalidArgument("degenerate parametrization".into()));
        }

        let mut points = Vec::with_capacity(samples);
        let mut phi = Vec::with_capacity(samples);
        let mut kappa = Vec::with_capacity(samples);
        let mut t_prev = 0.0;
        for i in 0..samples {
            let target = length * i as f64 / samples as f64;
            let t = invert_monotone(|t| arc.eval(t).re, |t| series.eval_derivative(t).norm(), target, t_prev);
            t_prev = t;
            let (z, d1, d2) = series.eval_jet(t);
            let sp = d1.norm();
            points.push(z);
            phi.push(d1.im.atan2(d1.re));
            kappa.push((d1.conj() * d2).im / (sp * sp * sp));
        }
        spectral::unwrap_angles(&mut phi);
        if let Some((index, &value)) = kappa.iter().enumerate().find(|(_, &k)| !(k > 0.0)) {
            return Err(Error::NonPositiveCurvature { index, value });
        }
        let position = TrigSeries::interpolate(&points, length, SERIES_CUTOFF);
        Ok(Self {
            length,
            curvature: kappa,
            tangent_angle: phi,
            points,
            position,
        })
    }

    /// Ellipse with semi-axes `a >= b > 0`, centred at the origin, starting at `(a, 0)`.
    pub fn ellipse(a: f64, b: f64) -> Result<Self> {
        Self::ellipse_with_samples(a, b, DEFAULT_SAMPLES)
    }

    pub fn ellipse_with_samples(a: f64, b: f64, samples: usize) -> Result<Self> {
        if !(b > 0.0) || !(a >= b) || !a.is_finite() {
            return Err(Error::InvalidAxes { a, b });
        }
        let q = (4 * samples).max(256);
        let param: Vec<C64> = (0..q)
            .map(|j| {
                let t = 2.0 * PI * j as f64 / q as f64;
                C64::new(a * t.cos(), b * t.sin())
            })
            .collect();
        Self::from_parametrization(&param, samples)
    }

    /// Circle of the given radius and centre, starting at `center + radius`.
    pub fn circle(radius: f64, center: C64, samples: usize) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::InvalidAxes { a: radius, b: radius });
        }
        let kappa = alloc::vec![1.0 / radius; samples];
        Self::from_curvature_anchored(&kappa, 2.0 * PI * radius, center + radius, PI / 2.0)
    }

    /// Image of the curve under the similarity `z -> a z + b` (`a != 0`).
    pub fn transformed(&self, a: C64, b: C64) -> Self {
        let scale = a.norm();
        let rot = a.arg();
        Self {
            length: self.length * scale,
            curvature: self.curvature.iter().map(|k| k / scale).collect(),
            tangent_angle: self.tangent_angle.iter().map(|p| p + rot).collect(),
            points: self.points.iter().map(|&z| a * z + b).collect(),
            position: self.position.affine(a, b, scale),
        }
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Arc-length step between samples.
    pub fn step(&self) -> f64 {
        self.length / self.points.len() as f64
    }

    pub fn arc_positions(&self) -> impl Iterator<Item = f64> + '_ {
        let h = self.step();
        (0..self.points.len()).map(move |j| h * j as f64)
    }

    pub fn points(&self) -> &[C64] {
        &self.points
    }

    pub fn curvature(&self) -> &[f64] {
        &self.curvature
    }

    pub fn tangent_angles(&self) -> &[f64] {
        &self.tangent_angle
    }

    /// `(min kappa, max kappa)` over the samples.
    pub fn curvature_range(&self) -> (f64, f64) {
        self.curvature
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &k| {
                (lo.min(k), hi.max(k))
            })
    }

    /// Position at arbitrary arc length (periodic in `s`).
    pub fn point_at(&self, s: f64) -> C64 {
        self.position.eval(s)
    }

    /// Unit tangent at arbitrary arc length.
    pub fn tangent_at(&self, s: f64) -> C64 {
        let d = self.position.eval_derivative(s);
        d / d.norm()
    }

    /// Total turning, the trapezoid integral of the curvature.
    pub fn total_turning(&self) -> f64 {
        spectral::trapezoid_periodic(&self.curvature, self.length)
    }

    pub fn diagnostics(&self) -> CurveDiagnostics {
        let deriv = spectral::derivative(&self.points, self.length);
        let unit_speed_error = deriv.iter().map(|d| (d.norm() - 1.0).abs()).fold(0.0, f64::max);
        let closure_gap = (self.point_at(self.length) - self.points[0]).norm() / self.length;
        CurveDiagnostics {
            turning_error: (self.total_turning() - 2.0 * PI).abs(),
            closure_gap,
            min_curvature: self.curvature_range().0,
            unit_speed_error,
        }
    }

    /// Arc-centroid `(1/L) int z ds`.
    pub fn arc_centroid(&self) -> C64 {
        self.points.iter().sum::<C64>() / self.points.len() as f64
    }
}

/// Solves `f(t) = target` for nondecreasing `f` with derivative `df`, Newton with a bisection guard.
fn invert_monotone(f: impl Fn(f64) -> f64, df: impl Fn(f64) -> f64, target: f64, guess: f64) -> f64 {
    let mut lo = guess - 0.5;
    while f(lo) > target {
        lo -= 0.5;
    }
    let mut hi = guess.max(lo) + 0.5;
    while f(hi) < target {
        hi += 0.5;
    }
    let mut t = guess.clamp(lo, hi);
    for _ in 0..100 {
        let r = f(t) - target;
        if r.abs() < 1e-15 * (1.0 + target.abs()) {
            break;
        }
        if r > 0.0 {
            hi = t;
        } else {
            lo = t;
        }
        let d = df(t);
        let mut next = if d > 0.0 { t - r / d } else { 0.5 * (lo + hi) };
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - t).abs() < 1e-16 * (1.0 + t.abs()) {
            t = next;
            break;
        }
        t = next;
    }
    t
}

/// A supporting line through a boundary point: `(w - contact, normal) >= 0` on the closed domain.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SupportLine {
    pub contact: C64,
    /// Inward unit normal.
    pub normal: C64,
}

impl SupportLine {
    /// Signed offset `(w - contact, normal)`; nonnegative on the domain side.
    pub fn offset(&self, w: C64) -> f64 {
        dot(w - self.contact, self.normal)
    }
}

pub(crate) fn dot(a: C64, b: C64) -> f64 {
    a.re * b.re + a.im * b.im
}

fn cross(a: C64, b: C64) -> f64 {
    a.re * b.im - a.im * b.re
}

/// The bounded convex domain enclosed by a [`ConvexCurve`], with a reference interior point.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexDomain2 {
    boundary: ConvexCurve,
    reference: C64,
}

/// Nearest boundary point of a query, refined between samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryProjection {
    pub index: usize,
    /// Arc length of the refined foot point.
    pub arc: f64,
    pub point: C64,
    pub distance: f64,
}

impl ConvexDomain2 {
    pub fn new(boundary: ConvexCurve, reference: C64) -> Result<Self> {
        let dom = Self { boundary, reference };
        if (dom.winding_number(reference) - 1.0).abs() > 1e-6 {
            return Err(Error::PointOutside);
        }
        Ok(dom)
    }

    /// Uses the arc-length centroid as the reference point.
    pub fn from_curve(boundary: ConvexCurve) -> Result<Self> {
        let c = boundary.arc_centroid();
        Self::new(boundary, c)
    }

    pub fn unit_disk() -> Self {
        let c = ConvexCurve::circle(1.0, C64::new(0.0, 0.0), DEFAULT_SAMPLES).expect("unit circle");
        Self {
            boundary: c,
            reference: C64::new(0.0, 0.0),
        }
    }

    pub fn boundary(&self) -> &ConvexCurve {
        &self.boundary
    }

    pub fn reference(&self) -> C64 {
        self.reference
    }

    /// Image under the similarity `z -> a z + b`.
    pub fn transformed(&self, a: C64, b: C64) -> Self {
        Self {
            boundary: self.boundary.transformed(a, b),
            reference: a * self.reference + b,
        }
    }

    /// Winding number of the boundary polyline about `x`.
    pub fn winding_number(&self, x: C64) -> f64 {
        let pts = self.boundary.points();
        let n = pts.len();
        let mut total = 0.0;
        for j in 0..n {
            let a = pts[j] - x;
            let b = pts[(j + 1) % n] - x;
            total += (b / a).arg();
        }
        total / (2.0 * PI)
    }

    /// Strict interior test against the boundary polygon.
    pub fn contains(&self, x: C64) -> bool {
        let pts = self.boundary.points();
        let n = pts.len();
        (0..n).all(|j| cross(pts[(j + 1) % n] - pts[j], x - pts[j]) > 0.0)
    }

    /// Nearest boundary sample, followed by one Newton step on the osculating
    /// parabola `z_j + t sigma + (i kappa_j / 2) t sigma^2`.
    pub fn project(&self, x: C64) -> BoundaryProjection {
        let pts = self.boundary.points();
        let (index, d2) = pts
            .iter()
            .enumerate()
            .map(|(j, p)| (j, (p - x).norm_sqr()))
            .fold((0, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best });
        let h = self.boundary.step();
        let z = pts[index];
        let t = C64::from_polar(1.0, self.boundary.tangent_angles()[index]);
        let kappa = self.boundary.curvature()[index];
        let d = z - x;
        let g = dot(d, t);
        let dg = 1.0 + kappa * dot(d, C64::i() * t);
        let mut sigma = 0.0;
        if dg > 1e-3 {
            sigma = (-g / dg).clamp(-h, h);
        }
        let foot = z + t * sigma + C64::i() * t * (0.5 * kappa * sigma * sigma);
        let refined = (foot - x).norm();
        let distance = if refined <= d2.sqrt() { refined } else { d2.sqrt() };
        let arc = h * index as f64 + if refined <= d2.sqrt() { sigma } else { 0.0 };
        BoundaryProjection {
            index,
            arc,
            point: if refined <= d2.sqrt() { foot } else { z },
            distance,
        }
    }

    /// `d(x) = dist(x, boundary)`.
    pub fn dist_to_boundary(&self, x: C64) -> f64 {
        self.project(x).distance
    }

    /// Distance to the boundary, negative outside the domain.
    pub fn signed_distance(&self, x: C64) -> f64 {
        let proj = self.project(x);
        let t = C64::from_polar(1.0, self.boundary.tangent_angles()[proj.index]);
        if dot(x - proj.point, C64::i() * t) < 0.0 {
            -proj.distance
        } else {
            proj.distance
        }
    }

    /// Supporting line at a boundary point `a` (within `1e-8` of the boundary polyline).
    ///
    /// At a sample the inward normal is `i e^{i phi}`; strictly between samples
    /// the normal of the polyline edge is used, which supports the polygon.
    pub fn support_normal(&self, a: C64) -> Result<SupportLine> {
        let pts = self.boundary.points();
        let n = pts.len();
        let scale = 1.0 + self.boundary.length();
        let mut best = (f64::INFINITY, 0usize, 0.0f64);
        for j in 0..n {
            let p = pts[j];
            let q = pts[(j + 1) % n];
            let e = q - p;
            let u = (dot(a - p, e) / e.norm_sqr()).clamp(0.0, 1.0);
            let dist = (p + e * u - a).norm();
            if dist < best.0 {
                best = (dist, j, u);
            }
        }
        let (dist, j, u) = best;
        if dist > 1e-8 * scale {
            return Err(Error::PointNotOnBoundary { distance: dist });
        }
        let edge = pts[(j + 1) % n] - pts[j];
        let edge_len = edge.norm();
        let at_start = u * edge_len <= 1e-12 * scale;
        let at_end = (1.0 - u) * edge_len <= 1e-12 * scale;
        let mut normal = if at_start {
            C64::i() * C64::from_polar(1.0, self.boundary.tangent_angles()[j])
        } else if at_end {
            C64::i() * C64::from_polar(1.0, self.boundary.tangent_angles()[(j + 1) % n])
        } else {
            C64::i() * edge / edge_len
        };
        if dot(self.reference - a, normal) < 0.0 {
            normal = -normal;
        }
        Ok(SupportLine { contact: a, normal })
    }

    /// Supporting line at the boundary point nearest to `w`, using the
    /// smooth curve (not the polyline) for both contact point and normal.
    pub fn support_at_nearest(&self, w: C64) -> SupportLine {
        let proj = self.project(w);
        let contact = self.boundary.point_at(proj.arc);
        let mut normal = C64::i() * self.boundary.tangent_at(proj.arc);
        if dot(self.reference - contact, normal) < 0.0 {
            normal = -normal;
        }
        SupportLine { contact, normal }
    }

    /// Largest `R` with `B(c, R)` inside the domain.
    pub fn inradius(&self, c: C64) -> Result<f64> {
        if !self.contains(c) {
            return Err(Error::PointOutside);
        }
        Ok(self.dist_to_boundary(c))
    }

    /// Maximum distance between boundary samples (rotating calipers).
    pub fn diameter(&self) -> f64 {
        let pts = self.boundary.points();
        let n = pts.len();
        if n < 3 {
            return if n == 2 { (pts[0] - pts[1]).norm() } else { 0.0 };
        }
        let mut j = 1;
        let mut best: f64 = 0.0;
        for i in 0..n {
            let e = pts[(i + 1) % n] - pts[i];
            let mut guard = 0;
            while cross(e, pts[(j + 1) % n] - pts[j]) > 0.0 && guard < n {
                j = (j + 1) % n;
                guard += 1;
            }
            best = best.max((pts[i] - pts[j]).norm());
            best = best.max((pts[(i + 1) % n] - pts[j]).norm());
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn assert_invariants(c: &ConvexCurve) {
        let d = c.diagnostics();
        assert!(d.turning_error <= 1e-8, "turning error {}", d.turning_error);
        assert!(d.closure_gap <= 1e-8, "closure gap {}", d.closure_gap);
        assert!(d.min_curvature > 0.0);
        assert!(d.unit_speed_error <= 1e-6, "unit speed error {}", d.unit_speed_error);
    }

    #[test]
    fn constant_curvature_gives_unit_circle() {
        let c = ConvexCurve::from_curvature(&[1.0; 512], 2.0 * PI).unwrap();
        assert_invariants(&c);
        for (s, z) in c.arc_positions().zip(c.points()) {
            assert!((z - C64::from_polar(1.0, s)).norm() < 1e-12);
        }
        assert!((c.point_at(2.0 * PI) - c.points()[0]).norm() <= 1e-10);
    }

    #[test]
    fn scaled_curvature_gives_circle_of_radius_r() {
        let r = 3.5;
        let c = ConvexCurve::from_curvature(&[1.0 / r; 1024], 2.0 * PI * r).unwrap();
        assert_invariants(&c);
        for z in c.points() {
            assert!((z.norm() - r).abs() < 1e-11);
        }
    }

    #[test]
    fn curvature_errors() {
        let mut k = [1.0; 64];
        k[5] = -0.1;
        assert!(matches!(
            ConvexCurve::from_curvature(&k, 2.0 * PI),
            Err(Error::NonPositiveCurvature { index: 5, .. })
        ));
        assert!(matches!(
            ConvexCurve::from_curvature(&[1.2; 64], 2.0 * PI),
            Err(Error::TurningNumberMismatch { .. })
        ));
        // 3% off is rescaled, not rejected
        let c = ConvexCurve::from_curvature(&[1.03; 64], 2.0 * PI).unwrap();
        assert!((c.total_turning() - 2.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn ellipse_axes_validation() {
        assert!(matches!(ConvexCurve::ellipse(1.0, 2.0), Err(Error::InvalidAxes { .. })));
        assert!(matches!(ConvexCurve::ellipse(1.0, 0.0), Err(Error::InvalidAxes { .. })));
    }

    #[test]
    fn unit_ellipse_is_the_unit_circle() {
        let c = ConvexCurve::ellipse(1.0, 1.0).unwrap();
        assert_invariants(&c);
        let (lo, hi) = c.curvature_range();
        assert!((lo - 1.0).abs() < 1e-10 && (hi - 1.0).abs() < 1e-10);
    }

    #[test]
    fn ellipse_curvature_range_and_length() {
        // Oracle: kappa(t) = ab / (a^2 sin^2 t + b^2 cos^2 t)^{3/2} has extremes b/a^2 and a/b^2.
        let c = ConvexCurve::ellipse(2.0, 1.0).unwrap();
        assert_invariants(&c);
        let (lo, hi) = c.curvature_range();
        assert!((lo - 0.25).abs() < 1e-6, "{lo}");
        assert!((hi - 2.0).abs() < 1e-6, "{hi}");
        // Oracle: adaptive Simpson on the perimeter integral, frozen.
        assert!((c.length() - 9.688448220547675).abs() < 1e-9, "{}", c.length());
    }

    #[test]
    fn ellipse_perimeter_oracle() {
        // Adaptive Simpson quadrature of 4 * int_0^{pi/2} sqrt(4 sin^2 t + cos^2 t) dt.
        fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, whole: f64, depth: u32) -> f64 {
            let m = 0.5 * (a + b);
            let left = (m - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + m)) + f(m));
            let right = (b - m) / 6.0 * (f(m) + 4.0 * f(0.5 * (m + b)) + f(b));
            if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
                left + right + (left + right - whole) / 15.0
            } else {
                simpson(f, a, m, tol / 2.0, left, depth - 1) + simpson(f, m, b, tol / 2.0, right, depth - 1)
            }
        }
        let f = |t: f64| (4.0 * t.sin().powi(2) + t.cos().powi(2)).sqrt();
        let b = PI / 2.0;
        let whole = b / 6.0 * (f(0.0) + 4.0 * f(b / 2.0) + f(b));
        let perimeter = 4.0 * simpson(&f, 0.0, b, 1e-14, whole, 40);
        assert!((perimeter - 9.688448220547675).abs() < 1e-11, "{perimeter}");
    }

    #[test]
    fn ellipse_curvature_reintegrates_to_ellipse() {
        let e = ConvexCurve::ellipse(2.0, 1.0).unwrap();
        let c = ConvexCurve::from_curvature_anchored(e.curvature(), e.length(), C64::new(2.0, 0.0), PI / 2.0).unwrap();
        let worst = c
            .points()
            .iter()
            .zip(e.points())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(worst <= 1e-6, "{worst}");
        // independent check against the parametric form
        for z in c.points() {
            assert!((z.re * z.re / 4.0 + z.im * z.im - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn near_closed_curvature_is_projected_and_resampled() {
        // A first harmonic in curvature opens the curve; projection must close it again.
        let m = 1024;
        let k: Vec<f64> = (0..m)
            .map(|j| 1.0 + 0.05 * (2.0 * PI * j as f64 / m as f64).cos())
            .collect();
        let c = ConvexCurve::from_curvature(&k, 2.0 * PI).unwrap();
        assert_invariants(&c);
    }

    #[test]
    fn support_normals_of_disk_and_ellipse() {
        let disk = ConvexDomain2::unit_disk();
        let n = disk.support_normal(C64::new(1.0, 0.0)).unwrap().normal;
        assert!((n - C64::new(-1.0, 0.0)).norm() < 1e-12);
        let n = disk.support_normal(C64::new(0.0, 1.0)).unwrap().normal;
        assert!((n - C64::new(0.0, -1.0)).norm() < 1e-12);
        let ell = ConvexDomain2::from_curve(ConvexCurve::ellipse(2.0, 1.0).unwrap()).unwrap();
        let n = ell.support_normal(C64::new(2.0, 0.0)).unwrap().normal;
        // gradient of x^2/4 + y^2 at (2, 0) is (1, 0); inward is its negative
        assert!((n - C64::new(-1.0, 0.0)).norm() < 1e-10);
        assert!(matches!(
            ell.support_normal(C64::new(1.0, 0.0)),
            Err(Error::PointNotOnBoundary { .. })
        ));
    }

    #[test]
    fn support_line_keeps_all_samples_on_one_side() {
        let ell = ConvexDomain2::from_curve(ConvexCurve::ellipse(2.0, 1.0).unwrap()).unwrap();
        let diam = ell.diameter();
        let pts = ell.boundary().points();
        for j in (0..pts.len()).step_by(37) {
            // a sample, and a point in the middle of an edge
            let mid = 0.5 * (pts[j] + pts[(j + 1) % pts.len()]);
            for a in [pts[j], mid] {
                let line = ell.support_normal(a).unwrap();
                let worst = pts.iter().map(|&w| line.offset(w)).fold(f64::INFINITY, f64::min);
                assert!(worst >= -1e-9 * diam, "{worst}");
            }
        }
    }

    #[test]
    fn distance_examples() {
        let disk = ConvexDomain2::unit_disk();
        assert!((disk.dist_to_boundary(C64::new(0.0, 0.0)) - 1.0).abs() < 1e-12);
        let ell = ConvexDomain2::from_curve(ConvexCurve::ellipse(2.0, 1.0).unwrap()).unwrap();
        assert!((ell.dist_to_boundary(C64::new(0.0, 0.0)) - 1.0).abs() < 1e-10);
        // Oracle: minimum over 10^6 parametric boundary samples.
        let dense = |x: C64| {
            (0..1_000_000)
                .map(|j| {
                    let t = 2.0 * PI * j as f64 / 1e6;
                    (C64::new(2.0 * t.cos(), t.sin()) - x).norm()
                })
                .fold(f64::INFINITY, f64::min)
        };
        for x in [
            C64::new(1.0, 0.0),
            C64::new(0.5, 0.0),
            C64::new(-0.3, 0.6),
            C64::new(1.7, 0.2),
        ] {
            let d = ell.dist_to_boundary(x);
            let oracle = dense(x);
            assert!((d - oracle).abs() < 1e-6, "x = {x}: {d} vs {oracle}");
        }
        assert!((ell.inradius(C64::new(0.5, 0.0)).unwrap() - dense(C64::new(0.5, 0.0))).abs() < 1e-6);
        assert_eq!(ell.inradius(C64::new(3.0, 0.0)), Err(Error::PointOutside));
        assert!((disk.inradius(C64::new(0.0, 0.0)).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn diameter_examples() {
        assert!((ConvexDomain2::unit_disk().diameter() - 2.0).abs() < 1e-12);
        let ell = ConvexDomain2::from_curve(ConvexCurve::ellipse(2.0, 1.0).unwrap()).unwrap();
        assert!((ell.diameter() - 4.0).abs() < 1e-12);
    }

    fn wobbly_curve(a2: f64, a3: f64, phase: f64) -> ConvexCurve {
        // radius of curvature rho(psi) = 1 + a2 cos 2psi + a3 cos(3psi + phase), as a function of tangent angle
        let q = 512;
        let rho = |psi: f64| 1.0 + a2 * (2.0 * psi).cos() + a3 * (3.0 * psi + phase).cos();
        let tangent: Vec<C64> = (0..q)
            .map(|j| {
                let psi = 2.0 * PI * j as f64 / q as f64;
                rho(psi) * C64::from_polar(1.0, psi)
            })
            .collect();
        let integral = PeriodicIntegral::new(&tangent, 2.0 * PI);
        let param: Vec<C64> = (0..q)
            .map(|j| integral.periodic_part(2.0 * PI * j as f64 / q as f64))
            .collect();
        ConvexCurve::from_parametrization(&param, 1024).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]

        #[test]
        fn random_curves_satisfy_invariants(a2 in -0.4f64..0.4, a3 in -0.3f64..0.3, phase in 0.0f64..6.0) {
            let c = wobbly_curve(a2, a3, phase);
            assert_invariants(&c);
            let dom = ConvexDomain2::from_curve(c).unwrap();
            // diameter against brute force over all sample pairs
            let pts = dom.boundary().points();
            let mut brute: f64 = 0.0;
            for p in pts {
                for q in pts {
                    brute = brute.max((p - q).norm());
                }
            }
            prop_assert!((dom.diameter() - brute).abs() < 1e-14 * brute.max(1.0));
        }

        #[test]
        fn distance_is_one_lipschitz(x1 in -0.5f64..0.5, y1 in -0.5f64..0.5, x2 in -0.5f64..0.5, y2 in -0.5f64..0.5) {
            let dom = ConvexDomain2::from_curve(wobbly_curve(0.2, 0.1, 1.0)).unwrap();
            let a = C64::new(x1, y1);
            let b = C64::new(x2, y2);
            let da = dom.dist_to_boundary(a);
            let db = dom.dist_to_boundary(b);
            prop_assert!((da - db).abs() <= (a - b).norm() + 1e-9);
            for w in dom.boundary().points().iter().step_by(16) {
                prop_assert!(da <= (a - w).norm() + 1e-12);
            }
        }
    }
}
