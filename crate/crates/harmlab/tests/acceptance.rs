//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::f64::consts::PI;
use std::panic::{self, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::OnceLock;
use std::time::Instant;

use harmlab::gallery::{self, Member};
use harmlab::report::strip_timestamp;
use harmlab_core::boundary::SpeedProfile;
use harmlab_core::claims::{self, ClaimId, ClaimStatus, Scenario};
use harmlab_core::conformal::ConformalMap;
use harmlab_core::harmonic3d::{self, HarmonicPoly3, Poly3, PolyMap3};
use harmlab_core::rkc::{self, Verdict};
use harmlab_core::{BoundaryMap, ConvexCurve, DiskGrid, DiskHarmonicMap, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

const GALLERY_SEED: u64 = 7;
const GALLERY_COUNT: usize = 50;

fn fine_grid() -> DiskGrid {
    DiskGrid::new(64, 256, 0.99).unwrap()
}

fn c0_oracle() -> f64 {
    27.0 / (4.0 * PI * PI)
}

fn sigma0_oracle() -> f64 {
    3.0 * 3f64.sqrt() / (2.0 * 2f64.sqrt() * PI)
}

static GALLERY: OnceLock<Vec<(Member, Scenario)>> = OnceLock::new();

fn gallery() -> &'static [(Member, Scenario)] {
    GALLERY.get_or_init(|| {
        gallery::generate(GALLERY_COUNT, GALLERY_SEED)
            .into_iter()
            .map(|m| {
                let s = m.scenario(fine_grid()).expect("gallery member").with_seed(GALLERY_SEED);
                (m, s)
            })
            .collect()
    })
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn claim(id: ClaimId, s: &Scenario) -> Result<claims::ClaimReport, String> {
    let r = claims::run(id, s);
    if r.status == ClaimStatus::Error {
        return Err(format!("{id} on {}: {}", s.name, r.note.clone().unwrap_or_default()));
    }
    Ok(r)
}

fn param(r: &claims::ClaimReport, key: &str) -> Result<f64, String> {
    r.param(key).ok_or_else(|| format!("{} has no parameter {key}", r.id))
}

fn min_grid_jacobian(map: &DiskHarmonicMap, points: impl Iterator<Item = C64>) -> f64 {
    points
        .map(|z| map.jet_unchecked(z).jacobian())
        .fold(f64::INFINITY, f64::min)
}

/// Perimeter of the ellipse by the trapezoid rule on its standard parametrization.
fn ellipse_perimeter(a: f64, b: f64) -> f64 {
    let n = 4096;
    (0..n)
        .map(|j| {
            let t = 2.0 * PI * j as f64 / n as f64;
            (a * a * t.sin().powi(2) + b * b * t.cos().powi(2)).sqrt()
        })
        .sum::<f64>()
        * 2.0
        * PI
        / n as f64
}

fn hall_constant() -> Check {
    let (mut sum_min, mut a1_min) = (f64::INFINITY, f64::INFINITY);
    let mut preserving = 0;
    for (m, s) in gallery().iter().filter(|(m, _)| m.is_self_map()) {
        let r = claim(ClaimId::Hall, s)?;
        ensure(r.status == ClaimStatus::Checked, || {
            format!("{} not checked: {:?}", m.label(), r.note)
        })?;
        ensure((param(&r, "c0")? - c0_oracle()).abs() < 1e-15, || {
            "c0 constant differs".into()
        })?;
        let sum = param(&r, "a1_sq_plus_b1_sq")?;
        let (a1, b1) = (param(&r, "abs_a1")?, param(&r, "abs_b1")?);
        // independent of the claim: first coefficients straight from the series
        let (fa1, fb1) = (s.map().coefficient(1).norm(), s.map().coefficient(-1).norm());
        ensure((a1 - fa1).abs() < 1e-15 && (b1 - fb1).abs() < 1e-15, || {
            "coefficients disagree".into()
        })?;
        sum_min = sum_min.min(sum);
        if a1 > b1 {
            preserving += 1;
            a1_min = a1_min.min(a1);
        }
    }
    ensure(sum_min >= c0_oracle() - 1e-6, || {
        format!("min |a1|^2+|b1|^2 = {sum_min}")
    })?;
    ensure(preserving > 0 && a1_min >= sigma0_oracle() - 1e-6, || {
        format!("min |a1| = {a1_min}")
    })?;
    Ok(format!(
        "min |a1|^2+|b1|^2 = {sum_min:.6} >= {:.6}; min |a1| = {a1_min:.6} >= {:.6} over {preserving} members",
        c0_oracle(),
        sigma0_oracle()
    ))
}

fn harnack_distance() -> Check {
    let mut worst = f64::INFINITY;
    for (_, s) in gallery() {
        let r = claim(ClaimId::T11Distance, s)?;
        ensure(r.status == ClaimStatus::Checked, || format!("{} unchecked", s.name))?;
        ensure(r.evaluations as usize >= s.grid.len(), || "grid not covered".into())?;
        worst = worst.min(r.margin);
    }
    ensure(worst >= -1e-8, || format!("worst disk margin {worst:e}"))?;
    let ball = claim(ClaimId::T21Ball, &gallery()[0].1)?;
    ensure((param(&ball, "c")? - 0.25).abs() < 1e-15, || {
        "ball constant is not 1/4".into()
    })?;
    ensure(ball.margin >= -1e-8, || format!("ball margin {:e}", ball.margin))?;
    Ok(format!(
        "disk worst margin {worst:.3e} over {} scenarios; ball margin {:.3e}",
        gallery().len(),
        ball.margin
    ))
}

fn rkc_bounds() -> Check {
    let curve = ConvexCurve::ellipse(2.0, 1.0).map_err(|e| e.to_string())?;
    let l = ellipse_perimeter(2.0, 1.0);
    ensure((curve.length() - l).abs() < 1e-9, || {
        format!("perimeter {} vs {l}", curve.length())
    })?;
    let bm = BoundaryMap::constant_speed(curve, 1024);
    let s = Scenario::from_boundary("ellipse", bm, 256, fine_grid()).map_err(|e| e.to_string())?;
    let m = l / (2.0 * PI);
    let big_m = m;
    let jmin = min_grid_jacobian(s.map(), s.grid.points().map(|p| p.z));
    let curvature = 0.25 * m.powi(3) / (2.0 * PI * 2.0 * big_m);
    let diameter = 4.0 * m / (8.0 * PI * big_m);
    ensure(jmin - curvature >= 0.0, || format!("J {jmin} below {curvature}"))?;
    ensure(jmin - diameter >= 0.0, || format!("J {jmin} below {diameter}"))?;
    let r = claim(ClaimId::T17Rkc, &s)?;
    ensure(
        (param(&r, "k")? - 0.25).abs() < 1e-6 && (param(&r, "K")? - 2.0).abs() < 1e-6,
        || "curvature range".into(),
    )?;
    ensure(
        (param(&r, "m")? - m).abs() < 1e-9 && (param(&r, "M")? - m).abs() < 1e-9,
        || "speed range".into(),
    )?;
    Ok(format!(
        "min J = {jmin:.6}; margins {:.6} (curvature), {:.6} (diameter)",
        jmin - curvature,
        jmin - diameter
    ))
}

fn minimum_principle() -> Check {
    let mut worst = f64::INFINITY;
    let mut certified = 0;
    for (_, s) in gallery() {
        let c = rkc::certify(s).map_err(|e| format!("{}: {e}", s.name))?;
        if c.verdict != Verdict::Certified {
            continue;
        }
        certified += 1;
        let interior = min_grid_jacobian(s.map(), s.grid.interior_points().map(|p| p.z));
        let ring = min_grid_jacobian(s.map(), s.grid.outer_ring().map(|p| p.z));
        worst = worst.min(interior - ring);
        let r = claim(ClaimId::MinPrinciple, s)?;
        ensure(r.pass, || format!("{}: claim margin {:e}", s.name, r.margin))?;
    }
    ensure(certified == gallery().len(), || format!("only {certified} certified"))?;
    ensure(worst >= -1e-8, || format!("interior - ring = {worst:e}"))?;
    // 4z + conj(z)^2/2 has J = 16 - |z|^2: its maximum sits inside, at the origin
    let w = DiskHarmonicMap::from_analytic(
        &[C64::new(0.0, 0.0), C64::new(4.0, 0.0)],
        &[C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(0.5, 0.0)],
    );
    let grid = fine_grid();
    let (jmax, zmax) = grid.points().map(|p| (w.jet_unchecked(p.z).jacobian(), p.z)).fold(
        (f64::NEG_INFINITY, C64::new(0.0, 0.0)),
        |a, b| if b.0 > a.0 { b } else { a },
    );
    ensure(jmax == 16.0 && zmax == C64::new(0.0, 0.0), || {
        format!("witness max {jmax} at {zmax}")
    })?;
    Ok(format!(
        "worst interior - ring = {worst:.3e} over {certified} certified maps; witness J max 16 at 0"
    ))
}

fn identity_suite() -> Check {
    let (mut i3, mut i7) = (0.0f64, 0.0f64);
    let mut closed = (0.0, 0.0);
    for (_, s) in gallery() {
        let r = claim(ClaimId::Identities, s)?;
        i3 = i3.max(param(&r, "I3_max")?);
        i7 = i7.max(param(&r, "I7_max")?);
        closed = (param(&r, "closed_form_lhs")?, param(&r, "closed_form_rhs")?);
    }
    ensure(i3 <= 1e-7, || format!("I3 residual {i3:e}"))?;
    ensure(i7 <= 1e-5, || format!("I7 residual {i7:e}"))?;
    ensure(
        (closed.0 - 16.0).abs() <= 1e-9 && (closed.1 - 16.0).abs() <= 1e-9,
        || format!("closed form {closed:?}"),
    )?;
    Ok(format!(
        "I3 max {i3:.2e}, I7 max {i7:.2e}; closed form {:.12} = {:.12}",
        closed.0, closed.1
    ))
}

fn random_ball_points(n: usize, seed: u64) -> Vec<[f64; 3]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let p = [
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        ];
        if p.iter().map(|v: &f64| v * v).sum::<f64>() < 1.0 {
            out.push(p);
        }
    }
    out
}

fn spatial_exactness() -> Check {
    let points = random_ball_points(10_000, 0x3d);
    let wood = PolyMap3::wood();
    let paraboloid = PolyMap3::paraboloid_example();
    let (mut wood_err, mut para_err) = (0.0f64, 0.0f64);
    for p in &points {
        wood_err = wood_err.max((wood.jacobian3(p).0 - 3.0 * p[0] * p[0]).abs());
        para_err = para_err.max((paraboloid.jacobian3(p).0 + 4.0 * p[2]).abs());
    }
    ensure(wood_err <= 1e-12, || format!("Wood Jacobian error {wood_err:e}"))?;
    ensure(para_err <= 1e-12, || format!("paraboloid Jacobian error {para_err:e}"))?;
    let quadric = HarmonicPoly3::new(Poly3::from_terms(&[(2, 0, 0, 1.0), (0, 2, 0, 1.0), (0, 0, 2, -2.0)]))
        .map_err(|e| e.to_string())?;
    let g = harmonic3d::gradient_map(&quadric);
    for p in &points {
        ensure(g.eval(p) == [2.0 * p[0], 2.0 * p[1], -4.0 * p[2]], || {
            format!("gradient at {p:?}")
        })?;
    }
    let mut potentials = claims::seeded_cubics(GALLERY_SEED, 20);
    potentials.push(quadric);
    potentials.push(claims::positive_hessian_potential(0.1));
    for (c, _) in claims::quadratic_gradient_examples() {
        potentials.push(
            HarmonicPoly3::new(Poly3::from_terms(&[(2, 0, 0, c[0]), (0, 2, 0, c[1]), (0, 0, 2, c[2])]))
                .map_err(|e| e.to_string())?,
        );
    }
    let mut cr: f64 = 0.0;
    for u in &potentials {
        let g = harmonic3d::gradient_map(u);
        for p in points.iter().step_by(20) {
            let (asym, tr) = g.cr_residual(p);
            cr = cr.max(asym).max(tr);
        }
    }
    ensure(cr <= 1e-12, || format!("CR residual {cr:e}"))?;
    Ok(format!(
        "Wood {wood_err:.1e}, paraboloid {para_err:.1e}, CR {cr:.1e} over {} gradient maps",
        potentials.len()
    ))
}

fn lewy_gleason_wolff() -> Check {
    let s = Scenario::identity(DiskGrid::new(4, 16, 0.9).unwrap()).with_seed(GALLERY_SEED);
    let r = claim(ClaimId::Lgw, &s)?;
    ensure(param(&r, "cubics")? == 20.0, || "cubic count".into())?;
    ensure(r.evaluations >= 20_000, || format!("only {} points", r.evaluations))?;
    let worst = param(&r, "max_laplacian_ln_H")?;
    ensure(worst <= 1e-6, || format!("max Delta ln|H| = {worst:e}"))?;
    Ok(format!(
        "max Delta ln|H| = {worst:.3e} over {} admissible points",
        r.evaluations
    ))
}

fn radial_distortion() -> Check {
    let s = Scenario::identity(DiskGrid::new(4, 16, 0.9).unwrap()).with_seed(GALLERY_SEED);
    let r = claim(ClaimId::RadialDistortion, &s)?;
    let (ki, ko) = (param(&r, "K_I_error")?, param(&r, "K_O_error")?);
    let pair = param(&r, "pair_margin")?;
    ensure(ki <= 1e-8 && ko <= 1e-8, || {
        format!("K_I error {ki:e}, K_O error {ko:e}")
    })?;
    ensure(pair >= -1e-12, || format!("pair margin {pair:e}"))?;
    ensure(s.spatial.pairs == 10_000, || "pair count".into())?;
    Ok(format!(
        "|K_I - 3| {ki:.1e}, |K_O - 9| {ko:.1e}, pair margin {pair:.3e}"
    ))
}

fn heinz_koebe() -> Check {
    let heinz = 1.0 / (PI * PI);
    let (mut heinz_margin, mut energy_margin) = (f64::INFINITY, f64::INFINITY);
    for (m, s) in gallery() {
        let r = claim(ClaimId::HeinzKoebe, s)?;
        let dmin = param(&r, "min_energy")?;
        let r0 = s.inradius();
        energy_margin = energy_margin.min(dmin - r0 * r0 / 16.0);
        if m.is_self_map() {
            heinz_margin = heinz_margin.min(dmin - heinz);
        }
    }
    ensure(heinz_margin >= -1e-6, || format!("Heinz margin {heinz_margin:e}"))?;
    ensure(energy_margin >= -1e-6, || format!("R0^2/16 margin {energy_margin:e}"))?;
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for phi in ConformalMap::catalog() {
        for i in 0..16 {
            for j in 0..64 {
                let z = C64::from_polar(0.95 * i as f64 / 15.0, 2.0 * PI * j as f64 / 64.0 + 0.05);
                let q = phi.koebe_quantity(z).map_err(|e| e.to_string())?;
                lo = lo.min(q);
                hi = hi.max(q);
            }
        }
    }
    ensure(lo >= 0.25 - 1e-6 && hi <= 4.0 + 1e-6, || format!("D* in [{lo}, {hi}]"))?;
    let b = C64::new(0.5, 0.0);
    let d = ConformalMap::Mobius { b }
        .derivative(C64::new(0.0, 0.0))
        .map_err(|e| e.to_string())?;
    ensure(d == C64::new(1.0 - b.norm_sqr(), 0.0) && d.re == 0.75, || {
        format!("phi_b'(0) = {d}")
    })?;
    Ok(format!(
        "Heinz margin {heinz_margin:.4}, R0^2/16 margin {energy_margin:.4}, D* in [{lo:.4}, {hi:.4}], phi'(0) = 0.75"
    ))
}

fn homotopy() -> Check {
    let curve = ConvexCurve::ellipse(2.0, 1.0).map_err(|e| e.to_string())?;
    let v = SpeedProfile::from_fn(1024, |t| 1.0 + 0.5 * t.cos()).map_err(|e| e.to_string())?;
    let g = BoundaryMap::from_speed(curve.clone(), &v, 0.0).map_err(|e| e.to_string())?;
    let (modes, grid) = (256, fine_grid());
    let t = rkc::homotopy_trace(&curve, &g, 21, modes, &grid).map_err(|e| e.to_string())?;
    ensure(t.lambdas.len() == 22, || "P = 21 gives 22 slices".into())?;
    ensure(t.minima.iter().all(|m| *m > 0.0), || format!("minima {:?}", t.minima))?;
    ensure(t.max_jump <= 0.5 * t.max_minimum(), || {
        format!("jump {} vs max {}", t.max_jump, t.max_minimum())
    })?;
    let start =
        rkc::min_jacobian(&BoundaryMap::constant_speed(curve, g.len()), modes, &grid).map_err(|e| e.to_string())?;
    let end = rkc::min_jacobian(&g, modes, &grid).map_err(|e| e.to_string())?;
    let (first, last) = (t.minima[0], t.minima[21]);
    ensure(first.to_bits() == start.to_bits(), || {
        format!("start {first} vs {start}")
    })?;
    ensure(last.to_bits() == end.to_bits(), || format!("end {last} vs {end}"))?;
    Ok(format!(
        "m in [{:.5}, {:.5}], max jump {:.5}; endpoints bit-exact",
        t.min_minimum(),
        t.max_minimum(),
        t.max_jump
    ))
}

fn bundled_scenarios() -> Vec<PathBuf> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios");
    let mut v: Vec<PathBuf> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "toml"))
        .collect();
    v.sort();
    v
}

fn run_all(out: &Path) -> Result<Vec<(String, Vec<u8>)>, String> {
    let mut outputs = Vec::new();
    for path in bundled_scenarios() {
        let status = Command::new(env!("CARGO_BIN_EXE_harmlab"))
            .args(["run", "--scenario"])
            .arg(&path)
            .arg("--out")
            .arg(out)
            .output()
            .map_err(|e| e.to_string())?;
        ensure(status.status.code() == Some(0), || {
            format!(
                "{} exited with {:?}: {}",
                path.display(),
                status.status.code(),
                String::from_utf8_lossy(&status.stdout)
            )
        })?;
    }
    let mut files: Vec<PathBuf> = std::fs::read_dir(out).unwrap().map(|e| e.unwrap().path()).collect();
    files.sort();
    for f in files {
        outputs.push((
            f.file_name().unwrap().to_string_lossy().into_owned(),
            std::fs::read(&f).unwrap(),
        ));
    }
    Ok(outputs)
}

fn cli_suite() -> Check {
    let scenarios = bundled_scenarios();
    ensure(scenarios.len() >= 4, || "bundled scenarios missing".into())?;
    let a = tempfile::tempdir().map_err(|e| e.to_string())?;
    let b = tempfile::tempdir().map_err(|e| e.to_string())?;
    let start = Instant::now();
    let first = run_all(a.path())?;
    let elapsed = start.elapsed().as_secs_f64();
    ensure(elapsed < 60.0, || format!("first pass took {elapsed:.1} s"))?;
    let second = run_all(b.path())?;
    ensure(first.len() == second.len(), || "different file sets".into())?;
    for ((na, ba), (nb, bb)) in first.iter().zip(&second) {
        ensure(na == nb, || format!("{na} vs {nb}"))?;
        let (sa, sb) = (String::from_utf8_lossy(ba), String::from_utf8_lossy(bb));
        ensure(strip_timestamp(&sa) == strip_timestamp(&sb), || {
            format!("{na} differs between runs")
        })?;
    }
    Ok(format!(
        "{} scenarios, {} files byte-stable; first pass {elapsed:.1} s",
        scenarios.len(),
        first.len()
    ))
}

type Criterion = (&'static str, Option<f64>, fn() -> Check);

fn main() {
    let criteria: [Criterion; 11] = [
        ("Hall constant", Some(10.0), hall_constant),
        ("Harnack distance bound", Some(20.0), harnack_distance),
        ("RKC Jacobian bounds", Some(5.0), rkc_bounds),
        ("minimum principle", None, minimum_principle),
        ("identity suite", None, identity_suite),
        ("3-D exactness", None, spatial_exactness),
        ("Lewy-Gleason-Wolff", Some(30.0), lewy_gleason_wolff),
        ("radial distortion", None, radial_distortion),
        ("Heinz and Koebe", None, heinz_koebe),
        ("homotopy continuation", None, homotopy),
        ("full CLI suite", None, cli_suite),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failures = 0;
    for (i, (name, budget, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        let outcome = match (outcome, budget) {
            (Ok(_), Some(b)) if secs > *b => Err(format!("took {secs:.1} s, budget {b} s")),
            (o, _) => o,
        };
        match outcome {
            Ok(detail) => println!("PASS criterion {:>2} {name} ({secs:.1} s): {detail}", i + 1),
            Err(why) => {
                failures += 1;
                println!("FAIL criterion {:>2} {name} ({secs:.1} s): {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
