//! Scenario runner for `harmlab-core`: scenario files, the seeded gallery,
//! JSON reports and CSV grid dumps.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::path::{Path, PathBuf};

use harmlab_core::claims::{self, ClaimId, ClaimReport, Scenario};
use harmlab_core::rkc::{self, HomotopyTrace};
use harmlab_core::DiskGrid;
use rayon::prelude::*;

pub mod error;
pub mod expr;
pub mod gallery;
pub mod grid;
mod hash;
pub mod report;
pub mod scenario;

pub use error::{CliError, Result};
pub use hash::sha256_hex;
pub use scenario::{load, Loaded, Overrides, ScenarioFile};

use report::{Environment, GalleryEntry, GalleryReport, HomotopyReport, RunReport, ScenarioInfo, Summary, Tool};

/// Runs the claims in parallel; the result is in `ids` order.
pub fn run_claims(s: &Scenario, ids: &[ClaimId]) -> Vec<ClaimReport> {
    ids.par_iter().map(|&id| claims::run(id, s)).collect()
}

pub fn scenario_info(s: &Scenario, sha256: &str, modes: usize, tolerance_scale: f64) -> ScenarioInfo {
    let curve = s.domain().boundary();
    let (k, big_k) = curve.curvature_range();
    let (m, big_m) = s.speed_bounds();
    let o = s.image_origin();
    ScenarioInfo {
        name: s.name.clone(),
        sha256: sha256.into(),
        seed: s.seed,
        modes,
        grid: s.grid,
        tolerances: s.tolerances,
        tolerance_scale,
        image_origin: [o.re, o.im],
        inradius: s.inradius(),
        curvature_range: [k, big_k],
        speed_range: [m, big_m],
        diameter: s.domain().diameter(),
        length: curve.length(),
    }
}

fn info(l: &Loaded) -> ScenarioInfo {
    scenario_info(&l.scenario, &l.sha256, l.file.numerics.modes, l.tolerance_scale)
}

/// Claims plus, for boundary-map scenarios, the Jacobian certificate.
pub fn build_run_report(l: &Loaded) -> RunReport {
    let claims = run_claims(&l.scenario, &l.claims);
    let (certificate, certificate_error) = match l.scenario.boundary() {
        Some(_) => match rkc::certify(&l.scenario) {
            Ok(c) => (Some(c), None),
            Err(e) => (None, Some(e.to_string())),
        },
        None => (None, Some("scenario is not given by a boundary map".into())),
    };
    let summary = Summary::of(&claims);
    RunReport {
        schema_version: report::REPORT_SCHEMA_VERSION,
        tool: Tool::default(),
        environment: Environment::default(),
        generated_at_unix: report::now_unix(),
        scenario: info(l),
        certificate,
        certificate_error,
        claims,
        summary,
    }
}

/// `run`: writes the report and any grids named in the file; returns the report and its path.
pub fn run_scenario(path: &Path, out: &Path, overrides: &Overrides) -> Result<(RunReport, PathBuf)> {
    let loaded = load(path, overrides)?;
    let report = build_run_report(&loaded);
    let target = out.join(loaded.file.report_name());
    report::write_atomic(&target, report::to_json(&report).as_bytes())?;
    for g in &loaded.file.outputs.grids {
        let field = grid::Field::parse(&g.field)?;
        let csv = grid::dump(&loaded.scenario, field, &loaded.sha256);
        report::write_atomic(&out.join(&g.path), csv.as_bytes())?;
    }
    Ok((report, target))
}

/// `grid-dump`: one CSV for one field.
pub fn grid_dump(path: &Path, field: &str, out: &Path, overrides: &Overrides) -> Result<PathBuf> {
    let field = grid::Field::parse(field)?;
    let loaded = load(path, overrides)?;
    let target = out.join(format!("{}-{}.csv", loaded.file.name, field.as_str()));
    let csv = grid::dump(&loaded.scenario, field, &loaded.sha256);
    report::write_atomic(&target, csv.as_bytes())?;
    Ok(target)
}

/// The homotopy from the constant-speed map to the scenario's boundary map; lambda slices run in parallel.
pub fn homotopy(l: &Loaded, steps: usize) -> Result<HomotopyTrace> {
    let g = l
        .scenario
        .boundary()
        .ok_or_else(|| CliError::Usage("homotopy needs a scenario given by a boundary map".into()))?;
    if steps < 2 {
        return Err(CliError::Usage(format!(
            "the homotopy needs at least 2 steps, got {steps}"
        )));
    }
    let curve = g.target();
    rkc::check_homotopy_input(curve, g)?;
    let modes = l.file.numerics.modes;
    let grid = l.scenario.grid;
    let lambdas: Vec<f64> = (0..=steps).map(|j| j as f64 / steps as f64).collect();
    let minima = lambdas
        .par_iter()
        .map(|&lambda| rkc::min_jacobian(&rkc::homotopy_map(curve, g, lambda)?, modes, &grid))
        .collect::<harmlab_core::Result<Vec<f64>>>()?;
    Ok(HomotopyTrace::assemble(lambdas, minima))
}

/// `homotopy`: writes `<name>-homotopy.json`.
pub fn homotopy_command(
    path: &Path,
    steps: usize,
    out: &Path,
    overrides: &Overrides,
) -> Result<(HomotopyReport, PathBuf)> {
    let loaded = load(path, overrides)?;
    let trace = homotopy(&loaded, steps)?;
    let report = HomotopyReport {
        schema_version: report::REPORT_SCHEMA_VERSION,
        tool: Tool::default(),
        environment: Environment::default(),
        generated_at_unix: report::now_unix(),
        scenario: info(&loaded),
        steps,
        all_positive: trace.minima.iter().all(|m| *m > 0.0),
        trace,
    };
    let target = out.join(format!("{}-homotopy.json", loaded.file.name));
    report::write_atomic(&target, report::to_json(&report).as_bytes())?;
    Ok((report, target))
}

/// Evaluates the gallery members, running `ids` on each; members are processed in parallel.
pub fn gallery_report(count: usize, seed: u64, grid: DiskGrid, ids: &[ClaimId]) -> Result<GalleryReport> {
    if count == 0 {
        return Err(CliError::Usage("gallery count must be at least 1".into()));
    }
    let members = gallery::generate(count, seed);
    let entries = members
        .par_iter()
        .map(|m| -> Result<GalleryEntry> {
            let s = m.scenario(grid)?.with_seed(seed);
            let (k, big_k) = s.domain().boundary().curvature_range();
            let (lo, hi) = s.speed_bounds();
            let claims = ids.iter().map(|&id| claims::run(id, &s)).collect();
            Ok(GalleryEntry {
                member: m.clone(),
                inradius: s.inradius(),
                curvature_range: [k, big_k],
                speed_range: [lo, hi],
                abs_c0: s.map().coefficient(0).norm(),
                abs_a1: s.map().coefficient(1).norm(),
                abs_b1: s.map().coefficient(-1).norm(),
                injectivity_violations: s.map().injectivity_violations(
                    &grid,
                    gallery::IMAGE_GAP * s.domain().diameter(),
                    gallery::SOURCE_GAP,
                ),
                claims,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let all: Vec<ClaimReport> = entries.iter().flat_map(|e| e.claims.iter().cloned()).collect();
    Ok(GalleryReport {
        schema_version: report::REPORT_SCHEMA_VERSION,
        tool: Tool::default(),
        generated_at_unix: report::now_unix(),
        seed,
        count,
        members_sha256: gallery::digest(&members),
        members: entries,
        summary: Summary::of(&all),
    })
}
