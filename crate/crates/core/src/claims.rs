//! Inequality checks over a scenario, each reduced to a worst signed margin.
//!
//! A claim evaluates `lhs - rhs` over an evaluation set and keeps the minimum.
//! It passes when that minimum is at least `-tolerance`. Hypotheses that the
//! scenario cannot certify (say `h(0) != 0` for a bound stated under that
//! normalization) give an `Unverifiable` report instead of a failure.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;
use core::str::FromStr;

// std, when linked into the graph, provides these as inherent methods
#[allow(unused_imports)]
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::boundary::BoundaryMap;
use crate::conformal::{golden_min, ConformalMap};
use crate::curves::{ConvexCurve, ConvexDomain2};
use crate::diffops::{self, CenteredBall};
use crate::harmonic2d::{DiskGrid, DiskHarmonicMap, Jet};
use crate::harmonic3d::{self, Ellipsoid, HarmonicPoly3, Poly3, PolyMap3};
use crate::quadrature::SphereRule;
use crate::{Error, Result, C64, P3};

/// `c_0 = 27 / (4 pi^2)`.
pub fn hall_c0() -> f64 {
    27.0 / (4.0 * PI * PI)
}

/// `sigma_0 = 3 sqrt(3) / (2 sqrt(2) pi) = sqrt(c_0 / 2)`.
pub fn hall_sigma0() -> f64 {
    3.0 * 3.0f64.sqrt() / (2.0 * 2.0f64.sqrt() * PI)
}

/// Resolution of the sub-checks that sweep the conformal catalog.
const CATALOG_GRID: (usize, usize, f64) = (16, 64, 0.95);

/// Angular oversampling of the outer circle in the minimum principle check.
const RING_OVERSAMPLING: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum ClaimId {
    T11Distance,
    T11RadialNormal,
    T12AnalyticPart,
    Hall,
    T13T15,
    T17Rkc,
    T18Diameter,
    T19,
    MinPrinciple,
    Identities,
    HeinzKoebe,
    WeakHRatio,
    T21Ball,
    Lgw,
    Cr,
    RadialDistortion,
}

impl ClaimId {
    pub const ALL: [ClaimId; 16] = [
        ClaimId::T11Distance,
        ClaimId::T11RadialNormal,
        ClaimId::T12AnalyticPart,
        ClaimId::Hall,
        ClaimId::T13T15,
        ClaimId::T17Rkc,
        ClaimId::T18Diameter,
        ClaimId::T19,
        ClaimId::MinPrinciple,
        ClaimId::Identities,
        ClaimId::HeinzKoebe,
        ClaimId::WeakHRatio,
        ClaimId::T21Ball,
        ClaimId::Lgw,
        ClaimId::Cr,
        ClaimId::RadialDistortion,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ClaimId::T11Distance => "T11_distance",
            ClaimId::T11RadialNormal => "T11_radial_normal",
            ClaimId::T12AnalyticPart => "T12_analytic_part",
            ClaimId::Hall => "hall",
            ClaimId::T13T15 => "T13_T15",
            ClaimId::T17Rkc => "T17_rkc",
            ClaimId::T18Diameter => "T18_diameter",
            ClaimId::T19 => "T19",
            ClaimId::MinPrinciple => "min_principle",
            ClaimId::Identities => "identities",
            ClaimId::HeinzKoebe => "heinz_koebe",
            ClaimId::WeakHRatio => "weak_H_ratio",
            ClaimId::T21Ball => "T21_ball",
            ClaimId::Lgw => "LGW",
            ClaimId::Cr => "CR",
            ClaimId::RadialDistortion => "radial_distortion",
        }
    }

    pub fn description(&self) -> &'static str {
        match self {
            ClaimId::T11Distance => "d(h(z), boundary) >= (1 - |z|) R0 / 2",
            ClaimId::T11RadialNormal => "(h_r, outward normal) >= R0 / 2 on the circle",
            ClaimId::T12AnalyticPart => "|f'| >= R0 / 4 and lambda_h >= (1 - k) R0 / 4",
            ClaimId::Hall => "|a1|^2 + |b1|^2 >= 27 / (4 pi^2), |a1| >= sigma0 for self-maps fixing 0",
            ClaimId::T13T15 => "d |h_z| / d_* >= sigma0 / 4; catalog density d <= 1/rho <= 8 d",
            ClaimId::T17Rkc => "J >= k m^3 / (2 pi K M)",
            ClaimId::T18Diameter => "J >= diam m / (8 pi M)",
            ClaimId::T19 => "J >= m dist(0, boundary) / 2 when h(0) = 0",
            ClaimId::MinPrinciple => "interior min of J (and of H in the ball) >= boundary min",
            ClaimId::Identities => "J_z formula, corrected log-Jacobian and inverse-Jacobian identities",
            ClaimId::HeinzKoebe => "D(h) >= 1/pi^2, D(h) >= R0^2 / 16, catalog D* in [1/4, 4]",
            ClaimId::WeakHRatio => "inf d Lambda / d_* over the grid (observation)",
            ClaimId::T21Ball => "d(h(x), boundary) >= (1 - |x|) R0 / 4 for ball gradient maps",
            ClaimId::Lgw => "Delta ln|H| <= 0 for Hessian determinants of harmonic cubics",
            ClaimId::Cr => "gradient maps have symmetric traceless derivative",
            ClaimId::RadialDistortion => "K_I(f_3) = 3, K_O(f_3) = 9 and the radial pair inequality",
        }
    }
}

impl fmt::Display for ClaimId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ClaimId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ClaimId::ALL
            .iter()
            .copied()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown claim id {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum ClaimStatus {
    /// The inequality was evaluated; `pass` reflects the margin.
    Checked,
    /// A quantity is reported without a threshold of its own beyond positivity.
    Observation,
    /// A hypothesis could not be certified; reported, not failed.
    Unverifiable,
    /// Evaluation broke down (for instance a vanishing Jacobian); counted as a failure.
    Error,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ClaimReport {
    pub id: String,
    pub status: ClaimStatus,
    /// Minimum of `lhs - rhs` over the evaluation set.
    pub margin: f64,
    pub argmin: Vec<f64>,
    pub pass: bool,
    pub tolerance: f64,
    pub parameters: BTreeMap<String, f64>,
    pub evaluations: u64,
    pub note: Option<String>,
}

impl ClaimReport {
    fn unverifiable(id: ClaimId, tolerance: f64, note: String) -> Self {
        Self {
            id: id.as_str().into(),
            status: ClaimStatus::Unverifiable,
            margin: 0.0,
            argmin: Vec::new(),
            pass: true,
            tolerance,
            parameters: BTreeMap::new(),
            evaluations: 0,
            note: Some(note),
        }
    }

    fn failed(id: ClaimId, tolerance: f64, err: &Error) -> Self {
        Self {
            id: id.as_str().into(),
            status: ClaimStatus::Error,
            margin: f64::NEG_INFINITY,
            argmin: Vec::new(),
            pass: false,
            tolerance,
            parameters: BTreeMap::new(),
            evaluations: 0,
            note: Some(err.to_string()),
        }
    }

    /// Looks up a recorded parameter.
    pub fn param(&self, key: &str) -> Option<f64> {
        self.parameters.get(key).copied()
    }
}

/// Running minimum of a margin together with where it was attained.
#[derive(Debug, Clone)]
struct Worst {
    margin: f64,
    argmin: Vec<f64>,
    count: u64,
}

impl Worst {
    fn new() -> Self {
        Self {
            margin: f64::INFINITY,
            argmin: Vec::new(),
            count: 0,
        }
    }

    fn push(&mut self, margin: f64, at: &[f64]) {
        self.count += 1;
        if self.margin.is_nan() {
            return;
        }
        if margin.is_nan() || margin < self.margin {
            self.margin = margin;
            self.argmin = at.to_vec();
        }
    }

    fn merge(&mut self, other: Worst) {
        let count = self.count + other.count;
        if other.margin.is_nan() || (!self.margin.is_nan() && other.margin < self.margin) {
            *self = other;
        }
        self.count = count;
    }
}

struct Builder {
    id: ClaimId,
    status: ClaimStatus,
    tolerance: f64,
    worst: Worst,
    parameters: BTreeMap<String, f64>,
    note: Option<String>,
}

impl Builder {
    fn new(id: ClaimId, tolerance: f64) -> Self {
        Self {
            id,
            status: ClaimStatus::Checked,
            tolerance,
            worst: Worst::new(),
            parameters: BTreeMap::new(),
            note: None,
        }
    }

    fn param(&mut self, key: &str, value: f64) -> &mut Self {
        self.parameters.insert(key.into(), value);
        self
    }

    fn finish(self) -> ClaimReport {
        let margin = self.worst.margin;
        ClaimReport {
            id: self.id.as_str().into(),
            status: self.status,
            margin,
            argmin: self.worst.argmin,
            pass: margin >= -self.tolerance,
            tolerance: self.tolerance,
            parameters: self.parameters,
            evaluations: self.worst.count,
            note: self.note,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Tolerances {
    /// For claims whose margins are limited by roundoff and series truncation.
    pub algebraic: f64,
    /// For claims built on finite differences.
    pub finite_difference: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            algebraic: 1e-8,
            finite_difference: 1e-5,
        }
    }
}

impl Tolerances {
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            algebraic: self.algebraic * factor,
            finite_difference: self.finite_difference * factor,
        }
    }
}

/// Sample sizes of the claims that live in three-space.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SpatialSettings {
    pub cubics: usize,
    pub points_per_cubic: usize,
    pub pairs: usize,
    pub distortion_points: usize,
}

impl Default for SpatialSettings {
    fn default() -> Self {
        Self {
            cubics: 20,
            points_per_cubic: 1000,
            pairs: 10_000,
            distortion_points: 1000,
        }
    }
}

/// A disk map, its target domain and the evaluation grid.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    domain: ConvexDomain2,
    boundary: Option<BoundaryMap>,
    map: DiskHarmonicMap,
    pub grid: DiskGrid,
    pub tolerances: Tolerances,
    pub seed: u64,
    pub spatial: SpatialSettings,
}

impl Scenario {
    /// Poisson extension of a boundary map, truncated at `modes`.
    pub fn from_boundary(name: &str, boundary: BoundaryMap, modes: usize, grid: DiskGrid) -> Result<Self> {
        let map = DiskHarmonicMap::extend(&boundary.fourier_coefficients(modes)?);
        let curve = boundary.target().clone();
        let mut s = Self::from_map(name, map, curve, grid)?;
        s.boundary = Some(boundary);
        Ok(s)
    }

    /// A map given directly by its series, with `curve` the boundary of its image.
    pub fn from_map(name: &str, map: DiskHarmonicMap, curve: ConvexCurve, grid: DiskGrid) -> Result<Self> {
        let origin = map.eval(C64::new(0.0, 0.0))?;
        let domain = ConvexDomain2::new(curve, origin)?;
        Ok(Self {
            name: name.into(),
            domain,
            boundary: None,
            map,
            grid,
            tolerances: Tolerances::default(),
            seed: 0,
            spatial: SpatialSettings::default(),
        })
    }

    /// The identity of the unit disk.
    pub fn identity(grid: DiskGrid) -> Self {
        let curve = ConvexCurve::circle(1.0, C64::new(0.0, 0.0), crate::curves::DEFAULT_SAMPLES).expect("unit circle");
        let boundary = BoundaryMap::constant_speed(curve, 1024);
        let map = DiskHarmonicMap::from_analytic(&[C64::new(0.0, 0.0), C64::new(1.0, 0.0)], &[]);
        let mut s = Self::from_map("identity", map, boundary.target().clone(), grid).expect("identity");
        s.boundary = Some(boundary);
        s
    }

    /// The same scenario pushed forward by `w -> a w + b`.
    pub fn similar(&self, a: C64, b: C64) -> Result<Self> {
        let boundary = match &self.boundary {
            Some(bm) => {
                let target = bm.target().transformed(a, b);
                let scale = a.norm();
                let schedule = bm.schedule().iter().map(|s| s * scale).collect();
                Some(BoundaryMap::from_schedule(target, schedule, bm.increase() * scale)?)
            }
            None => None,
        };
        Ok(Self {
            name: self.name.clone(),
            domain: self.domain.transformed(a, b),
            boundary,
            map: self.map.similar(a, b),
            grid: self.grid,
            tolerances: self.tolerances,
            seed: self.seed,
            spatial: self.spatial,
        })
    }

    pub fn with_tolerances(mut self, tolerances: Tolerances) -> Self {
        self.tolerances = tolerances;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn domain(&self) -> &ConvexDomain2 {
        &self.domain
    }

    pub fn boundary(&self) -> Option<&BoundaryMap> {
        self.boundary.as_ref()
    }

    pub fn map(&self) -> &DiskHarmonicMap {
        &self.map
    }

    /// `h(0)`.
    pub fn image_origin(&self) -> C64 {
        self.domain.reference()
    }

    /// `R_0 = d(h(0), boundary)`.
    pub fn inradius(&self) -> f64 {
        self.domain.signed_distance(self.image_origin())
    }

    /// `(m, M)`: extreme boundary speeds, from the boundary map when present and
    /// otherwise from `|d/dt h(e^{it})|` of the series on a fine grid.
    pub fn speed_bounds(&self) -> (f64, f64) {
        if let Some(b) = &self.boundary {
            return b.speed_bounds();
        }
        let n = 16 * (self.map.degree() + 1).max(256);
        let mut lo = f64::INFINITY;
        let mut hi: f64 = 0.0;
        for j in 0..n {
            let t = 2.0 * PI * j as f64 / n as f64;
            let v = self
                .map
                .angular_derivative(1.0, t)
                .map(|d| d.norm())
                .unwrap_or(f64::NAN);
            lo = lo.min(v);
            hi = hi.max(v);
        }
        (lo, hi)
    }

    /// Whether the target is the unit circle centred at the origin.
    pub fn targets_unit_disk(&self) -> bool {
        let c = self.domain.boundary();
        let (k, kk) = c.curvature_range();
        (c.length() - 2.0 * PI).abs() < 1e-9
            && (k - 1.0).abs() < 1e-6
            && (kk - 1.0).abs() < 1e-6
            && c.arc_centroid().norm() < 1e-9
    }

    fn origin_fixed(&self) -> bool {
        self.image_origin().norm() <= 1e-9 * (1.0 + self.domain.boundary().length())
    }

    fn jets(&self) -> impl Iterator<Item = (C64, Jet)> + '_ {
        self.grid.points().map(move |p| (p.z, self.map.jet_unchecked(p.z)))
    }

    fn jacobian_min(&self) -> Worst {
        let mut w = Worst::new();
        for (z, jet) in self.jets() {
            w.push(jet.jacobian(), &[z.re, z.im]);
        }
        w
    }
}

fn at(z: C64) -> [f64; 2] {
    [z.re, z.im]
}

/// Runs one claim; errors become failed or unverifiable reports.
pub fn run(id: ClaimId, s: &Scenario) -> ClaimReport {
    let tol = tolerance_for(id, &s.tolerances);
    let out = match id {
        ClaimId::T11Distance => check_t11_distance(s),
        ClaimId::T11RadialNormal => check_t11_radial_normal(s),
        ClaimId::T12AnalyticPart => check_t12_analytic_part(s),
        ClaimId::Hall => check_hall(s),
        ClaimId::T13T15 => check_t13_t15(s),
        ClaimId::T17Rkc => check_t17_rkc(s),
        ClaimId::T18Diameter => check_t18_diameter(s),
        ClaimId::T19 => check_t19(s),
        ClaimId::MinPrinciple => check_min_principle(s),
        ClaimId::Identities => check_identities(s),
        ClaimId::HeinzKoebe => check_heinz_koebe(s),
        ClaimId::WeakHRatio => check_weak_h_ratio(s),
        ClaimId::T21Ball => check_t21_ball(s),
        ClaimId::Lgw => check_lgw(s),
        ClaimId::Cr => check_cr(s),
        ClaimId::RadialDistortion => check_radial_distortion(s),
    };
    match out {
        Ok(r) => r,
        Err(Error::HypothesisUnverifiable(note)) => ClaimReport::unverifiable(id, tol, note),
        Err(e) => ClaimReport::failed(id, tol, &e),
    }
}

/// Runs every claim in `ids` in order.
pub fn run_all(ids: &[ClaimId], s: &Scenario) -> Vec<ClaimReport> {
    ids.iter().map(|&id| run(id, s)).collect()
}

pub fn tolerance_for(id: ClaimId, t: &Tolerances) -> f64 {
    match id {
        ClaimId::Identities | ClaimId::Lgw => t.finite_difference,
        _ => t.algebraic,
    }
}

fn builder(id: ClaimId, s: &Scenario) -> Builder {
    Builder::new(id, tolerance_for(id, &s.tolerances))
}

fn require_inradius(s: &Scenario) -> Result<f64> {
    let r0 = s.inradius();
    if !(r0 > 0.0) {
        return Err(Error::HypothesisUnverifiable(format!(
            "h(0) is not inside the target (R0 = {r0:e})"
        )));
    }
    Ok(r0)
}

/// `d(h(z), boundary) - (1 - |z|) R_0 / 2` over the grid.
pub fn check_t11_distance(s: &Scenario) -> Result<ClaimReport> {
    let r0 = require_inradius(s)?;
    let mut b = builder(ClaimId::T11Distance, s);
    b.param("R0", r0).param("c", 0.5);
    for p in s.grid.points() {
        let w = s.map.eval(p.z)?;
        b.worst
            .push(s.domain.signed_distance(w) - (1.0 - p.r) * r0 * 0.5, &at(p.z));
    }
    Ok(b.finish())
}

/// `(h_r, -n) - R_0 / 2` at the circle, with `h_r` the radial limit and `n` the inward normal
/// at `h(e^{it})`. Also records `|(h_r, N)| - J` with `N = i h_t`, which vanishes identically.
pub fn check_t11_radial_normal(s: &Scenario) -> Result<ClaimReport> {
    let r0 = require_inradius(s)?;
    let mut b = builder(ClaimId::T11RadialNormal, s);
    let n = s.grid.angular;
    let mut identity_residual: f64 = 0.0;
    let mut normal_margin = f64::INFINITY;
    for j in 0..n {
        let theta = 2.0 * PI * j as f64 / n as f64;
        let a = s.map.eval(C64::from_polar(1.0, theta))?;
        let hr = s.map.abel_radial_limit(theta);
        let line = s.domain.support_at_nearest(a);
        let outward = -line.normal;
        b.worst.push(crate::curves::dot(hr, outward) - 0.5 * r0, &[theta]);
        let big_n = C64::i() * s.map.angular_derivative(1.0, theta)?;
        let jac = s.map.jet_unchecked(C64::from_polar(1.0, theta)).jacobian();
        let pairing = crate::curves::dot(hr, big_n);
        identity_residual = identity_residual.max((pairing.abs() - jac.abs()).abs() / (1.0 + jac.abs()));
        normal_margin = normal_margin.min(pairing.abs() - 0.5 * r0 * big_n.norm());
    }
    b.param("R0", r0)
        .param("c", 0.5)
        .param("jacobian_pairing_residual", identity_residual)
        .param("scaled_normal_margin", normal_margin);
    Ok(b.finish())
}

/// `|f'| - R_0 / 4`, and `lambda_h - (1 - k) R_0 / 4` with `k = sup |h_zbar / h_z|` on the grid.
pub fn check_t12_analytic_part(s: &Scenario) -> Result<ClaimReport> {
    let r0 = require_inradius(s)?;
    let k = s.map.second_dilatation_sup(&s.grid)?;
    let mut analytic = Worst::new();
    let mut qc = Worst::new();
    for (z, jet) in s.jets() {
        analytic.push(jet.f[1].norm() - 0.25 * r0, &at(z));
        let (_, lambda) = jet.stretches();
        qc.push(lambda - (1.0 - k) * 0.25 * r0, &at(z));
    }
    let mut b = builder(ClaimId::T12AnalyticPart, s);
    b.param("R0", r0)
        .param("k", k)
        .param("analytic_margin", analytic.margin)
        .param("qc_margin", qc.margin);
    b.worst.merge(analytic);
    b.worst.merge(qc);
    Ok(b.finish())
}

/// Hall's bound on the first coefficients, for self-maps of the disk fixing the origin.
pub fn check_hall(s: &Scenario) -> Result<ClaimReport> {
    if !s.targets_unit_disk() || !s.origin_fixed() {
        return Err(Error::HypothesisUnverifiable(
            "the bound is stated for self-maps of the disk with h(0) = 0".into(),
        ));
    }
    let (sum, a1) = s.map.hall_quantities();
    let b1 = s.map.coefficient(-1).norm();
    let mut b = builder(ClaimId::Hall, s);
    b.param("c0", hall_c0())
        .param("sigma0", hall_sigma0())
        .param("a1_sq_plus_b1_sq", sum)
        .param("abs_a1", a1)
        .param("abs_b1", b1);
    b.worst.push(sum - hall_c0(), &[]);
    if a1 > b1 {
        b.worst.push(a1 - hall_sigma0(), &[]);
    }
    Ok(b.finish())
}

fn catalog_points() -> impl Iterator<Item = C64> {
    let (radial, angular, rmax) = CATALOG_GRID;
    let grid = DiskGrid {
        radial,
        angular,
        max_radius: rmax,
    };
    grid.points().map(|p| p.z).collect::<Vec<_>>().into_iter()
}

/// `d |h_z| / d_*(h) - sigma_0 / 4` over the grid, the ratio `d Lambda / d_*` as a report,
/// and the catalog sandwich `1 <= rho^{-1} / d <= 8`.
pub fn check_t13_t15(s: &Scenario) -> Result<ClaimReport> {
    let c = 0.25 * hall_sigma0();
    let mut b = builder(ClaimId::T13T15, s);
    let mut ratio_min = f64::INFINITY;
    let mut ratio_max: f64 = 0.0;
    for (z, jet) in s.jets() {
        let d = 1.0 - z.norm();
        let dstar = s.domain.signed_distance(jet.value());
        let (lam_max, _) = jet.stretches();
        let ratio = d * lam_max / dstar;
        ratio_min = ratio_min.min(ratio);
        ratio_max = ratio_max.max(ratio);
        b.worst.push(d * jet.f[1].norm() / dstar - c, &at(z));
    }
    let mut sandwich = Worst::new();
    let mut lo = f64::INFINITY;
    let mut hi: f64 = 0.0;
    for phi in ConformalMap::catalog() {
        for z in catalog_points() {
            let r = phi.density_ratio(z)?;
            lo = lo.min(r);
            hi = hi.max(r);
            sandwich.push((r - 1.0).min(8.0 - r), &at(z));
        }
    }
    b.param("c", c)
        .param("ratio_min", ratio_min)
        .param("ratio_max", ratio_max)
        .param("density_ratio_min", lo)
        .param("density_ratio_max", hi)
        .param("density_margin", sandwich.margin);
    b.worst.merge(sandwich);
    Ok(b.finish())
}

/// `(m, M)` with `m > 1e-12 M` required.
fn positive_speeds(s: &Scenario) -> Result<(f64, f64)> {
    let (m, big_m) = s.speed_bounds();
    if !(m > 1e-12 * big_m) {
        return Err(Error::DegenerateSpeed(m));
    }
    Ok((m, big_m))
}

fn speed_and_curvature(s: &Scenario) -> Result<(f64, f64, f64, f64)> {
    let (m, big_m) = positive_speeds(s)?;
    let (k, big_k) = s.domain.boundary().curvature_range();
    if !(k > 0.0) {
        return Err(Error::NonConvexCurve);
    }
    Ok((m, big_m, k, big_k))
}

/// Curvature bound `k m^3 / (2 pi K M)`.
pub fn curvature_bound(k: f64, big_k: f64, m: f64, big_m: f64) -> f64 {
    k * m * m * m / (2.0 * PI * big_k * big_m)
}

/// Diameter bound `d m / (8 pi M)`.
pub fn diameter_bound(d: f64, m: f64, big_m: f64) -> f64 {
    d * m / (8.0 * PI * big_m)
}

pub fn check_t17_rkc(s: &Scenario) -> Result<ClaimReport> {
    let (m, big_m, k, big_k) = speed_and_curvature(s)?;
    let bound = curvature_bound(k, big_k, m, big_m);
    let mut b = builder(ClaimId::T17Rkc, s);
    let jmin = s.jacobian_min();
    b.param("m", m)
        .param("M", big_m)
        .param("k", k)
        .param("K", big_k)
        .param("bound", bound)
        .param("min_jacobian", jmin.margin);
    b.worst = jmin;
    b.worst.margin -= bound;
    Ok(b.finish())
}

pub fn check_t18_diameter(s: &Scenario) -> Result<ClaimReport> {
    let (m, big_m) = positive_speeds(s)?;
    let d = s.domain.diameter();
    let bound = diameter_bound(d, m, big_m);
    let mut b = builder(ClaimId::T18Diameter, s);
    let jmin = s.jacobian_min();
    b.param("m", m)
        .param("M", big_m)
        .param("diameter", d)
        .param("bound", bound)
        .param("min_jacobian", jmin.margin);
    b.worst = jmin;
    b.worst.margin -= bound;
    Ok(b.finish())
}

pub fn check_t19(s: &Scenario) -> Result<ClaimReport> {
    if !s.origin_fixed() {
        return Err(Error::HypothesisUnverifiable(format!(
            "needs h(0) = 0, got |h(0)| = {:e}",
            s.image_origin().norm()
        )));
    }
    let (m, big_m) = positive_speeds(s)?;
    let dist0 = s.domain.signed_distance(C64::new(0.0, 0.0));
    let bound = m * dist0 * 0.5;
    let mut b = builder(ClaimId::T19, s);
    let jmin = s.jacobian_min();
    b.param("m", m)
        .param("M", big_m)
        .param("dist0", dist0)
        .param("bound", bound)
        .param("min_jacobian", jmin.margin);
    b.worst = jmin;
    b.worst.margin -= bound;
    Ok(b.finish())
}

/// Minimum of `t -> field(t)` on a circle, from `samples` points refined by golden section.
fn ring_min(field: impl Fn(f64) -> f64, samples: usize) -> (f64, f64) {
    let h = 2.0 * PI / samples as f64;
    let mut best = (f64::INFINITY, 0.0);
    for j in 0..samples {
        let t = h * j as f64;
        let v = field(t);
        if v < best.0 {
            best = (v, t);
        }
    }
    let refined = golden_min(&field, best.1 - h, best.1 + h, 1e-12);
    (refined.min(best.0), best.1)
}

/// A harmonic potential with `H = 16 - 144 eps^2 (x^2 + y^2) > 0` on the unit ball.
pub fn positive_hessian_potential(eps: f64) -> HarmonicPoly3 {
    HarmonicPoly3::new(Poly3::from_terms(&[
        (2, 0, 0, -1.0),
        (0, 2, 0, -1.0),
        (0, 0, 2, 2.0),
        (3, 0, 0, eps),
        (1, 2, 0, -3.0 * eps),
    ]))
    .expect("harmonic")
}

/// Interior grid minimum of `J` against the minimum over the outermost circle.
///
/// The circle is swept at `8x` the grid's angular resolution and refined, so its
/// minimum is not overestimated by sampling. The ball part does the same for
/// `H = det Hess u` with [`positive_hessian_potential`].
pub fn check_min_principle(s: &Scenario) -> Result<ClaimReport> {
    let mut interior = Worst::new();
    for p in s.grid.interior_points() {
        interior.push(s.map.jet_unchecked(p.z).jacobian(), &at(p.z));
    }
    let rmax = s.grid.max_radius;
    let jac_on_ring = |t: f64| s.map.jet_unchecked(C64::from_polar(rmax, t)).jacobian();
    let (ring, ring_theta) = ring_min(jac_on_ring, RING_OVERSAMPLING * s.grid.angular);
    if !(interior.margin > 0.0 && ring > 0.0) {
        return Err(Error::HypothesisUnverifiable(format!(
            "J > 0 not certified on the grid (interior min {:e}, ring min {ring:e})",
            interior.margin
        )));
    }
    let u = positive_hessian_potential(0.1);
    let hp = u.hessian_poly();
    let inner_h = harmonic3d::ball_grid(8, 8, 16, 0.9)
        .iter()
        .map(|p| hp.eval(p))
        .fold(f64::INFINITY, f64::min);
    let sphere = SphereRule::new(32, 64);
    let sphere_h = sphere.points.iter().map(|p| hp.eval(p)).fold(f64::INFINITY, f64::min);
    let witness = crate::harmonic2d::PlanarPolyMap::four_z_plus_half_zbar_squared();
    let mut b = builder(ClaimId::MinPrinciple, s);
    b.param("interior_min", interior.margin)
        .param("ring_min", ring)
        .param("ring_radius", rmax)
        .param("ring_argmin_theta", ring_theta)
        .param("ball_interior_min_H", inner_h)
        .param("sphere_min_H", sphere_h)
        .param("witness_J_at_origin", witness.jacobian(C64::new(0.0, 0.0)))
        .param("witness_J_on_circle", witness.jacobian(C64::new(1.0, 0.0)));
    b.note = Some("the maximum principle is not asserted: J = 16 - |z|^2 peaks at the origin".into());
    interior.margin -= ring;
    interior.count += (RING_OVERSAMPLING * s.grid.angular) as u64;
    b.worst = interior;
    b.worst.push(inner_h - sphere_h, &[]);
    Ok(b.finish())
}

fn disk_samples(rng: &mut ChaCha8Rng, n: usize, rmax: f64) -> Vec<C64> {
    (0..n)
        .map(|_| {
            let r = rmax * rng.gen::<f64>().sqrt();
            C64::from_polar(r, rng.gen_range(0.0..2.0 * PI))
        })
        .collect()
}

fn ball_samples(rng: &mut ChaCha8Rng, n: usize, rmax: f64) -> Vec<P3> {
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let p: P3 = [
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        ];
        if diffops::norm(&p) < 1.0 {
            out.push(p.map(|c| c * rmax));
        }
    }
    out
}

/// `J_z` from Ridders-extrapolated central differences of `J` along both axes.
fn fd_jacobian_z(map: &DiskHarmonicMap, z: C64) -> Result<C64> {
    let h0 = (0.25 * (1.0 - z.norm())).min(0.05);
    let jac = |w: C64| Some(map.jet_unchecked(w).jacobian());
    // a tableau can stop early on a lucky cancellation; keep the start step with the smallest error estimate
    let best = |f: &dyn Fn(f64) -> Option<f64>, x: f64| -> Result<f64> {
        let mut out = (0.0, f64::INFINITY);
        for h in [h0, 0.4 * h0, 0.16 * h0] {
            let r = diffops::ridders_derivative(f, x, h)?;
            if r.1 < out.1 {
                out = r;
            }
        }
        Ok(out.0)
    };
    let jx = best(&|x| jac(C64::new(x, z.im)), z.re)?;
    let jy = best(&|y| jac(C64::new(z.re, y)), z.im)?;
    Ok(C64::new(jx, -jy) * 0.5)
}

fn relative(a: f64, b: f64) -> f64 {
    (a - b).abs() / (1.0 + b.abs())
}

/// Residuals of the three Jacobian identities at 100 seeded points of `|z| <= 0.9`.
///
/// The margin is minus the worst relative residual. The closed-form map
/// `4z + conj(z)^2 / 2` is evaluated alongside, where both sides equal 16.
pub fn check_identities(s: &Scenario) -> Result<ClaimReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(s.seed ^ 0x1d);
    let mut b = builder(ClaimId::Identities, s);
    let (mut i3, mut i6, mut i7, mut i6_alg) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for z in disk_samples(&mut rng, 100, 0.9) {
        let jet = s.map.jet(z)?;
        let exact = jet.jacobian_z();
        let fd = fd_jacobian_z(&s.map, z)?;
        let r3 = (fd - exact).norm() / (1.0 + exact.norm());
        let (l7, r7) = s.map.log_jacobian_curvature(z)?;
        let (l6, r6) = s.map.inverse_jacobian_curvature(z)?;
        let alg = relative(r6, jet.jacobian_z().norm_sqr() + jet.cross_term());
        let r7 = relative(l7, r7);
        let r6 = relative(l6, r6);
        i3 = i3.max(r3);
        i7 = i7.max(r7);
        i6 = i6.max(r6);
        i6_alg = i6_alg.max(alg);
        b.worst.push(-r3.max(r7).max(r6).max(alg), &at(z));
    }
    let witness = DiskHarmonicMap::from_analytic(
        &[C64::new(0.0, 0.0), C64::new(4.0, 0.0)],
        &[C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(0.5, 0.0)],
    );
    let wz = C64::new(0.3, 0.2);
    let (wl, wr) = witness.log_jacobian_curvature(wz)?;
    b.param("I3_max", i3)
        .param("I6_max", i6)
        .param("I7_max", i7)
        .param("I6_algebraic_max", i6_alg)
        .param("closed_form_lhs", wl)
        .param("closed_form_rhs", wr);
    b.worst.push(-(wl - 16.0).abs().max((wr - 16.0).abs()), &at(wz));
    Ok(b.finish())
}

/// Heinz, the convex-target energy bound, and Koebe's quantity over the conformal catalog.
pub fn check_heinz_koebe(s: &Scenario) -> Result<ClaimReport> {
    let r0 = require_inradius(s)?;
    let self_map = s.targets_unit_disk() && s.origin_fixed();
    let mut energy = Worst::new();
    for (z, jet) in s.jets() {
        energy.push(jet.energy(), &at(z));
    }
    let dmin = energy.margin;
    let mut b = builder(ClaimId::HeinzKoebe, s);
    let heinz = 1.0 / (PI * PI);
    b.param("R0", r0)
        .param("min_energy", dmin)
        .param("energy_bound", r0 * r0 / 16.0)
        .param("heinz_bound", heinz);
    let mut t43 = energy.clone();
    t43.margin -= r0 * r0 / 16.0;
    b.worst.merge(t43);
    if self_map {
        let mut h = energy;
        h.margin -= heinz;
        b.worst.merge(h);
    } else {
        b.note = Some("Heinz part skipped: not a self-map of the disk fixing 0".into());
    }
    let mut koebe = Worst::new();
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for phi in ConformalMap::catalog() {
        for z in catalog_points() {
            let q = phi.koebe_quantity(z)?;
            lo = lo.min(q);
            hi = hi.max(q);
            koebe.push((q - 0.25).min(4.0 - q), &at(z));
        }
    }
    let mobius = ConformalMap::Mobius { b: C64::new(0.5, 0.0) };
    b.param("koebe_min", lo)
        .param("koebe_max", hi)
        .param(
            "mobius_half_derivative_at_0",
            mobius.derivative(C64::new(0.0, 0.0))?.norm(),
        )
        .param(
            "square_shift_derivative_near_1",
            ConformalMap::SquareShift.derivative(C64::new(0.999, 0.0))?.norm(),
        );
    b.worst.merge(koebe);
    Ok(b.finish())
}

/// `inf d Lambda / d_*` on the grid, plus the same ratio for the gradient of
/// `x^2 + y^2 - 2 z^2` on the ball (target ellipsoid with semi-axes 2, 2, 4).
pub fn check_weak_h_ratio(s: &Scenario) -> Result<ClaimReport> {
    let mut b = builder(ClaimId::WeakHRatio, s);
    b.status = ClaimStatus::Observation;
    for (z, jet) in s.jets() {
        let (lam, _) = jet.stretches();
        let dstar = s.domain.signed_distance(jet.value());
        b.worst.push((1.0 - z.norm()) * lam / dstar, &at(z));
    }
    let e = Ellipsoid::new([2.0, 2.0, 4.0])?;
    let ball_ratio = harmonic3d::ball_grid(8, 8, 16, 0.99)
        .iter()
        .map(|p| {
            let img = [2.0 * p[0], 2.0 * p[1], -4.0 * p[2]];
            (1.0 - diffops::norm(p)) * 4.0 / e.distance(&img)
        })
        .fold(f64::INFINITY, f64::min);
    b.param("ball_ratio_min", ball_ratio);
    b.note = Some("observation: reports the constant in d Lambda >= c d_*".into());
    Ok(b.finish())
}

/// Gradients of `a x^2 + b y^2 + c z^2` with `a + b + c = 0`, as `(coefficients, image ellipsoid)`.
pub fn quadratic_gradient_examples() -> Vec<([f64; 3], Ellipsoid)> {
    [[1.0, 1.0, -2.0], [1.0, 2.0, -3.0], [0.5, 1.0, -1.5]]
        .iter()
        .map(|c| (*c, Ellipsoid::new(c.map(|v: f64| 2.0 * v.abs())).expect("axes")))
        .collect()
}

/// Ball version of the distance bound with `c = 1/4`, on quadratic gradient maps and the identity.
pub fn check_t21_ball(s: &Scenario) -> Result<ClaimReport> {
    let mut b = builder(ClaimId::T21Ball, s);
    let points = harmonic3d::ball_grid(12, 12, 24, 0.99);
    for (i, (c, e)) in quadratic_gradient_examples().into_iter().enumerate() {
        let h = |p: &P3| [2.0 * c[0] * p[0], 2.0 * c[1] * p[1], 2.0 * c[2] * p[2]];
        let m = harmonic3d::harnack_distance_margin(h, &points, &e);
        b.param(&format!("R0_{i}"), m.inradius);
        b.param("c", m.constant);
        let mut w = Worst::new();
        w.push(m.margin, &m.argmin);
        w.count = points.len() as u64;
        b.worst.merge(w);
    }
    let id = harmonic3d::harnack_distance_margin(|p: &P3| *p, &points, &CenteredBall { radius: 1.0 });
    b.param("R0_identity", id.inradius);
    let mut w = Worst::new();
    w.push(id.margin, &id.argmin);
    w.count = points.len() as u64;
    b.worst.merge(w);
    Ok(b.finish())
}

/// Seeded harmonic cubics: random combinations of the degree-1..=3 basis.
pub fn seeded_cubics(seed: u64, count: usize) -> Vec<HarmonicPoly3> {
    let basis = harmonic3d::harmonic_basis(3).expect("basis");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut p = Poly3::zero(3);
            for u in &basis {
                p = p.add(&u.poly().scale(rng.gen_range(-1.0..1.0) / u.poly().max_coeff()));
            }
            HarmonicPoly3::new(p).expect("combination of harmonic polynomials")
        })
        .collect()
}

/// `Delta ln|H| <= 0` by finite differences at admissible points (`|H| > scale / 10`).
pub fn check_lgw(s: &Scenario) -> Result<ClaimReport> {
    let mut b = builder(ClaimId::Lgw, s);
    let cubics = seeded_cubics(s.seed ^ 0x16, s.spatial.cubics);
    let mut rng = ChaCha8Rng::seed_from_u64(s.seed ^ 0x61);
    let mut rejected = 0u64;
    let mut worst: f64 = f64::NEG_INFINITY;
    for u in &cubics {
        let scale = harmonic3d::hessian_scale(u);
        let hp = u.hessian_poly();
        let floor = 0.1 * scale;
        let mut accepted = 0;
        let mut attempts = 0;
        while accepted < s.spatial.points_per_cubic && attempts < 50 * s.spatial.points_per_cubic {
            attempts += 1;
            let p = ball_samples(&mut rng, 1, 0.9)[0];
            if hp.eval(&p).abs() <= floor {
                rejected += 1;
                continue;
            }
            let lap = harmonic3d::lgw_residual(u, &p, 1e-2, floor)?;
            worst = worst.max(lap);
            b.worst.push(-lap, &p);
            accepted += 1;
        }
    }
    b.param("max_laplacian_ln_H", worst)
        .param("rejected_points", rejected as f64)
        .param("cubics", cubics.len() as f64);
    Ok(b.finish())
}

/// Symmetry and trace of `D(grad u)` for the seeded cubics and the quadric.
pub fn check_cr(s: &Scenario) -> Result<ClaimReport> {
    let mut b = builder(ClaimId::Cr, s);
    let mut rng = ChaCha8Rng::seed_from_u64(s.seed ^ 0xc2);
    let mut potentials = seeded_cubics(s.seed ^ 0x16, s.spatial.cubics);
    potentials.push(HarmonicPoly3::new(Poly3::from_terms(&[
        (2, 0, 0, 1.0),
        (0, 2, 0, 1.0),
        (0, 0, 2, -2.0),
    ]))?);
    for u in &potentials {
        let g = harmonic3d::gradient_map(u);
        for p in ball_samples(&mut rng, 50, 1.0) {
            let (asym, tr) = g.cr_residual(&p);
            b.worst.push(-asym.max(tr), &p);
        }
    }
    let (wood_asym, _) = PolyMap3::wood().cr_residual(&[1.0, 1.0, 1.0]);
    b.param("wood_asymmetry_at_ones", wood_asym);
    Ok(b.finish())
}

/// `K_I(f_3) = 3`, `K_O(f_3) = 9` from finite-difference derivatives, and the pair inequality for `a = 1, 2, 3`.
pub fn check_radial_distortion(s: &Scenario) -> Result<ClaimReport> {
    let mut b = builder(ClaimId::RadialDistortion, s);
    let mut rng = ChaCha8Rng::seed_from_u64(s.seed ^ 0x3a);
    let (mut ki_err, mut ko_err, mut half_err) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..s.spatial.distortion_points {
        let dir = ball_samples(&mut rng, 1, 1.0)[0];
        let n = diffops::norm(&dir);
        let r = rng.gen_range(0.5..1.5);
        let p = dir.map(|c| c * r / n);
        let m = diffops::fd_jacobian(|x: &P3| diffops::radial_map(3.0, x).ok(), &p, 1e-3, true)?;
        let (ko, ki) = diffops::distortion(&m)?;
        ki_err = ki_err.max((ki - 3.0).abs());
        ko_err = ko_err.max((ko - 9.0).abs());
        b.worst.push(-(ki - 3.0).abs().max((ko - 9.0).abs()), &p);
        let mh = diffops::fd_jacobian(|x: &P3| diffops::radial_map(0.5, x).ok(), &p, 1e-4, true)?;
        let (ko_half, _) = diffops::distortion(&mh)?;
        half_err = half_err.max((ko_half - 2.0).abs());
    }
    let mut pair = Worst::new();
    let mut identity_residual: f64 = 0.0;
    for a in [1.0, 2.0, 3.0] {
        for _ in 0..s.spatial.pairs {
            let x = ball_samples(&mut rng, 1, 1.0)[0];
            let y = ball_samples(&mut rng, 1, 1.0)[0];
            let rp = diffops::radial_pair(a, &x, &y)?;
            identity_residual = identity_residual.max(rp.identity_residual.abs());
            let mut at_xy = x.to_vec();
            at_xy.extend_from_slice(&y);
            at_xy.push(a);
            pair.push(rp.margin(), &at_xy);
        }
    }
    b.param("K_I_error", ki_err)
        .param("K_O_error", ko_err)
        .param("K_O_half_error", half_err)
        .param("pair_margin", pair.margin)
        .param("pair_identity_residual", identity_residual);
    b.worst.merge(pair);
    Ok(b.finish())
}

/// Claims that read only the scenario seed and spatial settings, not the disk map.
pub fn is_spatial(id: ClaimId) -> bool {
    matches!(
        id,
        ClaimId::T21Ball | ClaimId::Lgw | ClaimId::Cr | ClaimId::RadialDistortion
    )
}

/// Every claim id paired with its description.
pub fn catalog() -> Vec<(&'static str, &'static str)> {
    ClaimId::ALL.iter().map(|c| (c.as_str(), c.description())).collect()
}

/// Parses a comma-separated list; `all` selects everything.
pub fn parse_list(list: &str) -> Result<Vec<ClaimId>> {
    let mut out = Vec::new();
    for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        if item == "all" {
            return Ok(ClaimId::ALL.to_vec());
        }
        out.push(item.parse()?);
    }
    if out.is_empty() {
        return Err(Error::InvalidArgument("empty claim list".into()));
    }
    Ok(out)
}
