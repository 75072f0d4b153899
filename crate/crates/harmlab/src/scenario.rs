//! Scenario files: parsing, validation and construction of the disk scenario.
//!
//! The schema is documented in `docs/scenario-schema.md`.

use std::f64::consts::PI;
use std::path::Path;

use harmlab_core::boundary::{BoundaryMap, SpeedProfile};
use harmlab_core::claims::{self, ClaimId, Scenario, SpatialSettings, Tolerances};
use harmlab_core::curves::DEFAULT_SAMPLES;
use harmlab_core::spectral::{self, PeriodicIntegral};
use harmlab_core::{ConvexCurve, DiskGrid, DiskHarmonicMap, C64};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::expr::Expr;
use crate::hash::sha256_hex;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub schema_version: u32,
    pub name: String,
    pub domain: DomainSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary: Option<BoundarySpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map: Option<MapSpec>,
    #[serde(default)]
    pub numerics: Numerics,
    #[serde(default = "all_claims")]
    pub claims: Vec<String>,
    #[serde(default)]
    pub outputs: Outputs,
}

fn all_claims() -> Vec<String> {
    vec!["all".into()]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum DomainSpec {
    Circle {
        #[serde(default = "one")]
        radius: f64,
        #[serde(default)]
        center: [f64; 2],
    },
    Ellipse {
        a: f64,
        b: f64,
        #[serde(default)]
        center: [f64; 2],
        /// Radians.
        #[serde(default)]
        rotation: f64,
    },
    /// Curvature sampled at uniform arc length over `[0, length)`.
    CurvatureSamples { samples: Vec<f64>, length: f64 },
    /// Radius of curvature as an expression in the tangent angle `psi`.
    CurvatureRadius {
        radius: String,
        #[serde(default = "default_curve_samples")]
        samples: usize,
    },
    /// The curve traced by `h(e^{it})` of the `[map]` section.
    Image,
}

fn one() -> f64 {
    1.0
}

fn default_curve_samples() -> usize {
    DEFAULT_SAMPLES
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundarySpec {
    /// Speed profile as an expression in `t`; constant speed when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub speed: Option<String>,
    /// Speed samples at `t_i = 2 pi i / n`, instead of `speed`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<Vec<f64>>,
    #[serde(default)]
    pub phase: f64,
    #[serde(default = "default_resolution")]
    pub resolution: usize,
}

fn default_resolution() -> usize {
    1024
}

/// `h = f + conj(g)` by power-series coefficients `[re, im]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapSpec {
    pub analytic: Vec<[f64; 2]>,
    #[serde(default)]
    pub coanalytic: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Numerics {
    pub modes: usize,
    pub radial: usize,
    pub angular: usize,
    pub max_radius: f64,
    pub algebraic_tolerance: f64,
    pub fd_tolerance: f64,
    pub seed: u64,
    pub cubics: usize,
    pub points_per_cubic: usize,
    pub pairs: usize,
    pub distortion_points: usize,
}

impl Default for Numerics {
    fn default() -> Self {
        let t = Tolerances::default();
        let sp = SpatialSettings::default();
        Self {
            modes: 256,
            radial: 32,
            angular: 128,
            max_radius: 0.99,
            algebraic_tolerance: t.algebraic,
            fd_tolerance: t.finite_difference,
            seed: 0,
            cubics: sp.cubics,
            points_per_cubic: sp.points_per_cubic,
            pairs: sp.pairs,
            distortion_points: sp.distortion_points,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Outputs {
    /// Report file name, relative to the output directory; `<name>.json` by default.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<String>,
    pub grids: Vec<GridOutput>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridOutput {
    pub field: String,
    pub path: String,
}

/// Command-line settings that take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub claims: Option<String>,
    pub tolerance_scale: Option<f64>,
}

/// A validated scenario file together with everything built from it.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub file: ScenarioFile,
    /// Digest of the file bytes.
    pub sha256: String,
    pub scenario: Scenario,
    pub claims: Vec<ClaimId>,
    pub tolerance_scale: f64,
}

impl ScenarioFile {
    pub fn parse(text: &str, origin: &Path) -> Result<Self> {
        let file: ScenarioFile = toml::from_str(text).map_err(|e| CliError::parse(origin, e.to_string()))?;
        file.validate(origin)?;
        Ok(file)
    }

    /// Checks everything that can be checked before any numerics run.
    pub fn validate(&self, origin: &Path) -> Result<()> {
        let bad = |m: String| Err(CliError::parse(origin, m));
        if self.schema_version != SCHEMA_VERSION {
            return bad(format!(
                "schema_version {} is not supported (expected {SCHEMA_VERSION})",
                self.schema_version
            ));
        }
        if self.name.trim().is_empty() {
            return bad("name must not be empty".into());
        }
        let n = &self.numerics;
        if n.modes == 0 || n.radial == 0 || n.angular == 0 {
            return bad("modes, radial and angular must be positive".into());
        }
        if !(n.max_radius > 0.0 && n.max_radius < 1.0) {
            return bad(format!("max_radius {} must lie in (0, 1)", n.max_radius));
        }
        if !(n.algebraic_tolerance > 0.0) || !(n.fd_tolerance > 0.0) {
            return bad("tolerances must be positive".into());
        }
        match (&self.domain, &self.map, &self.boundary) {
            (DomainSpec::Image, None, _) => return bad("domain kind `image` needs a [map] section".into()),
            (DomainSpec::Image, Some(_), Some(_)) => {
                return bad("domain kind `image` takes its boundary from [map]; drop [boundary]".into())
            }
            (DomainSpec::Image, Some(m), None) if m.analytic.is_empty() => {
                return bad("map.analytic must not be empty".into())
            }
            (DomainSpec::Image, Some(_), None) => {}
            (_, Some(_), _) => return bad("a [map] section requires domain kind `image`".into()),
            _ => {}
        }
        if let Some(b) = &self.boundary {
            if b.speed.is_some() && b.samples.is_some() {
                return bad("boundary.speed and boundary.samples are exclusive".into());
            }
            if b.resolution < 8 {
                return bad("boundary.resolution must be at least 8".into());
            }
            if let Some(src) = &b.speed {
                Expr::parse(src, "t").map_err(|e| CliError::parse(origin, e))?;
            }
        }
        if let DomainSpec::CurvatureRadius { radius, .. } = &self.domain {
            Expr::parse(radius, "psi").map_err(|e| CliError::parse(origin, e))?;
        }
        claims::parse_list(&self.claims.join(",")).map_err(|e| CliError::parse(origin, e.to_string()))?;
        for g in &self.outputs.grids {
            crate::grid::Field::parse(&g.field).map_err(|e| CliError::parse(origin, e.to_string()))?;
        }
        Ok(())
    }

    pub fn grid(&self) -> DiskGrid {
        DiskGrid {
            radial: self.numerics.radial,
            angular: self.numerics.angular,
            max_radius: self.numerics.max_radius,
        }
    }

    pub fn report_name(&self) -> String {
        self.outputs
            .report
            .clone()
            .unwrap_or_else(|| format!("{}.json", self.name))
    }

    /// The target curve. For `image` domains it is traced from the map.
    pub fn curve(&self) -> Result<ConvexCurve> {
        let c = |v: [f64; 2]| C64::new(v[0], v[1]);
        Ok(match &self.domain {
            DomainSpec::Circle { radius, center } => ConvexCurve::circle(*radius, c(*center), DEFAULT_SAMPLES)?,
            DomainSpec::Ellipse { a, b, center, rotation } => {
                ConvexCurve::ellipse(*a, *b)?.transformed(C64::from_polar(1.0, *rotation), c(*center))
            }
            DomainSpec::CurvatureSamples { samples, length } => ConvexCurve::from_curvature(samples, *length)?,
            DomainSpec::CurvatureRadius { radius, samples } => {
                let mut e = Expr::parse(radius, "psi").map_err(CliError::Usage)?;
                let rho = e.sample_periodic(4 * (*samples).max(256)).map_err(CliError::Usage)?;
                curve_from_curvature_radius(&rho, *samples)?
            }
            DomainSpec::Image => {
                let map = self.disk_map().expect("validated");
                image_curve(&map)?
            }
        })
    }

    fn disk_map(&self) -> Option<DiskHarmonicMap> {
        let m = self.map.as_ref()?;
        let c = |v: &[f64; 2]| C64::new(v[0], v[1]);
        let f: Vec<C64> = m.analytic.iter().map(c).collect();
        let g: Vec<C64> = m.coanalytic.iter().map(c).collect();
        Some(DiskHarmonicMap::from_analytic(&f, &g))
    }

    fn boundary_map(&self, curve: ConvexCurve) -> Result<BoundaryMap> {
        let spec = self.boundary.clone().unwrap_or(BoundarySpec {
            speed: None,
            samples: None,
            phase: 0.0,
            resolution: default_resolution(),
        });
        let profile = match (&spec.speed, &spec.samples) {
            (Some(src), _) => {
                let mut e = Expr::parse(src, "t").map_err(CliError::Usage)?;
                SpeedProfile::new(e.sample_periodic(spec.resolution).map_err(CliError::Usage)?)?
            }
            (None, Some(v)) => SpeedProfile::new(v.clone())?,
            (None, None) if spec.phase == 0.0 => return Ok(BoundaryMap::constant_speed(curve, spec.resolution)),
            (None, None) => SpeedProfile::constant(spec.resolution),
        };
        Ok(BoundaryMap::from_speed(curve, &profile, spec.phase)?)
    }

    /// Builds the disk scenario with the file's numerics.
    pub fn build(&self) -> Result<Scenario> {
        let curve = self.curve()?;
        let grid = DiskGrid::new(self.numerics.radial, self.numerics.angular, self.numerics.max_radius)?;
        let s = match self.disk_map() {
            Some(map) => Scenario::from_map(&self.name, map, curve, grid)?,
            None => Scenario::from_boundary(&self.name, self.boundary_map(curve)?, self.numerics.modes, grid)?,
        };
        let n = &self.numerics;
        let mut s = s
            .with_tolerances(Tolerances {
                algebraic: n.algebraic_tolerance,
                finite_difference: n.fd_tolerance,
            })
            .with_seed(n.seed);
        s.spatial = SpatialSettings {
            cubics: n.cubics,
            points_per_cubic: n.points_per_cubic,
            pairs: n.pairs,
            distortion_points: n.distortion_points,
        };
        Ok(s)
    }
}

/// Reads, validates and builds a scenario file, then applies `overrides`.
pub fn load(path: &Path, overrides: &Overrides) -> Result<Loaded> {
    let bytes = std::fs::read(path).map_err(|e| CliError::io(format!("reading {}", path.display()), e))?;
    let text = std::str::from_utf8(&bytes).map_err(|e| CliError::parse(path, e.to_string()))?;
    let file = ScenarioFile::parse(text, path)?;
    let claims = match &overrides.claims {
        Some(list) => parse_claims_flag(list)?,
        None => claims::parse_list(&file.claims.join(",")).map_err(|e| CliError::parse(path, e.to_string()))?,
    };
    let scale = overrides.tolerance_scale.unwrap_or(1.0);
    if !(scale > 0.0) || !scale.is_finite() {
        return Err(CliError::Usage(format!(
            "--tolerance-scale must be positive, got {scale}"
        )));
    }
    let mut scenario = file.build()?;
    scenario.tolerances = scenario.tolerances.scaled(scale);
    if let Some(seed) = overrides.seed {
        scenario.seed = seed;
    }
    Ok(Loaded {
        file,
        sha256: sha256_hex(&bytes),
        scenario,
        claims,
        tolerance_scale: scale,
    })
}

/// Parses a `--claims` value; unknown ids are reported by name.
pub fn parse_claims_flag(list: &str) -> Result<Vec<ClaimId>> {
    for item in list.split(',').map(str::trim).filter(|s| !s.is_empty() && *s != "all") {
        if item.parse::<ClaimId>().is_err() {
            return Err(CliError::UnknownClaim(item.into()));
        }
    }
    claims::parse_list(list).map_err(|e| CliError::Usage(e.to_string()))
}

/// Closed convex curve with radius of curvature `rho(psi)` sampled at `psi_i = 2 pi i / n`.
///
/// The curve is `z(psi) = int_0^psi rho(u) e^{iu} du`; it closes only when the
/// first Fourier mode of `rho` vanishes.
pub fn curve_from_curvature_radius(rho: &[f64], samples: usize) -> Result<ConvexCurve> {
    if let Some((index, &value)) = rho.iter().enumerate().find(|(_, r)| !(**r > 0.0)) {
        // a vanishing radius of curvature is a corner, not a smooth convex curve
        return Err(harmlab_core::Error::NonPositiveCurvature { index, value }.into());
    }
    let n = rho.len();
    let integrand: Vec<C64> = rho
        .iter()
        .enumerate()
        .map(|(i, &r)| C64::from_polar(r, 2.0 * PI * i as f64 / n as f64))
        .collect();
    let z = PeriodicIntegral::new(&integrand, 2.0 * PI);
    let scale = spectral::trapezoid_periodic(rho, 2.0 * PI) / (2.0 * PI);
    if z.mean().norm() > 1e-9 * scale {
        return Err(harmlab_core::Error::NotClosable {
            mean: z.mean().norm() / scale,
        }
        .into());
    }
    Ok(ConvexCurve::from_parametrization(&z.on_grid(n), samples)?)
}

/// The curve `t -> h(e^{it})`, summed from the series.
pub fn image_curve(map: &DiskHarmonicMap) -> Result<ConvexCurve> {
    let q = (16 * (map.degree() + 1)).max(4 * DEFAULT_SAMPLES);
    let pts: Vec<C64> = (0..q)
        .map(|j| {
            let w = C64::from_polar(1.0, 2.0 * PI * j as f64 / q as f64);
            let f = map
                .analytic_coefficients()
                .iter()
                .rev()
                .fold(C64::new(0.0, 0.0), |acc, c| acc * w + c);
            let g = map
                .coanalytic_coefficients()
                .iter()
                .rev()
                .fold(C64::new(0.0, 0.0), |acc, c| acc * w + c);
            f + g.conj()
        })
        .collect();
    Ok(ConvexCurve::from_parametrization(&pts, DEFAULT_SAMPLES)?)
}
