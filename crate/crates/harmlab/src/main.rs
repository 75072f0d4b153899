use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use harmlab::scenario::parse_claims_flag;
use harmlab::{report, CliError, Overrides};
use harmlab_core::{claims, DiskGrid};

#[derive(Parser)]
#[command(
    name = "harmlab",
    version,
    about = "Checks Jacobian and distortion bounds for harmonic maps of the disk and ball"
)]
struct Cli {
    /// Worker threads (defaults to the number of cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Common {
    #[arg(long)]
    scenario: PathBuf,
    #[arg(long, default_value = ".")]
    out: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    /// Comma-separated claim ids, or `all`.
    #[arg(long)]
    claims: Option<String>,
    #[arg(long)]
    tolerance_scale: Option<f64>,
}

impl Common {
    fn overrides(&self) -> Overrides {
        Overrides {
            seed: self.seed,
            claims: self.claims.clone(),
            tolerance_scale: self.tolerance_scale,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run the claims of a scenario file and write a JSON report.
    Run(Common),
    /// Print every claim id with a one-line description.
    ListClaims,
    /// Generate the seeded gallery and optionally run claims on every member.
    Gallery {
        #[arg(long, default_value_t = 50)]
        count: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Claims to run on every member; none by default.
        #[arg(long)]
        claims: Option<String>,
        #[arg(long)]
        tolerance_scale: Option<f64>,
        #[arg(long, default_value_t = 64)]
        radial: usize,
        #[arg(long, default_value_t = 256)]
        angular: usize,
    },
    /// Dump one pointwise field over the scenario grid as CSV.
    GridDump {
        #[command(flatten)]
        common: Common,
        /// J, Lambda, lambda, D or lnJ.
        #[arg(long)]
        field: String,
    },
    /// Track the grid minimum of J along the homotopy from constant speed to the scenario map.
    Homotopy {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 21)]
        steps: usize,
    },
}

fn execute(cli: Cli) -> Result<bool, CliError> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    match cli.command {
        Command::Run(c) => {
            let (r, path) = harmlab::run_scenario(&c.scenario, &c.out, &c.overrides())?;
            for claim in &r.claims {
                println!(
                    "{:<18} {:<5} margin {:+.6e}",
                    claim.id,
                    if claim.pass { "pass" } else { "FAIL" },
                    claim.margin
                );
            }
            println!(
                "{}/{} passed, report {}",
                r.summary.passed,
                r.summary.total,
                path.display()
            );
            Ok(r.summary.all_pass)
        }
        Command::ListClaims => {
            for (id, description) in claims::catalog() {
                println!("{id:<18} {description}");
            }
            Ok(true)
        }
        Command::Gallery {
            count,
            seed,
            out,
            claims,
            tolerance_scale,
            radial,
            angular,
        } => {
            let ids = match &claims {
                Some(list) => parse_claims_flag(list)?,
                None => Vec::new(),
            };
            if tolerance_scale.is_some() && ids.is_empty() {
                return Err(CliError::Usage("--tolerance-scale needs --claims".into()));
            }
            let grid = DiskGrid::new(radial, angular, 0.99)?;
            let mut r = harmlab::gallery_report(count, seed, grid, &ids)?;
            if let Some(scale) = tolerance_scale {
                // the gallery runs at default tolerances; rescale the pass flags afterwards
                for e in &mut r.members {
                    for c in &mut e.claims {
                        c.tolerance *= scale;
                        c.pass = c.status != claims::ClaimStatus::Error && c.margin >= -c.tolerance;
                    }
                }
                let all: Vec<_> = r.members.iter().flat_map(|e| e.claims.iter().cloned()).collect();
                r.summary = report::Summary::of(&all);
            }
            let path = out.join(format!("gallery-{seed}-{count}.json"));
            report::write_atomic(&path, report::to_json(&r).as_bytes())?;
            println!(
                "{} members, digest {}, report {}",
                r.members.len(),
                r.members_sha256,
                path.display()
            );
            Ok(r.summary.all_pass)
        }
        Command::GridDump { common, field } => {
            let path = harmlab::grid_dump(&common.scenario, &field, &common.out, &common.overrides())?;
            println!("{}", path.display());
            Ok(true)
        }
        Command::Homotopy { common, steps } => {
            let (r, path) = harmlab::homotopy_command(&common.scenario, steps, &common.out, &common.overrides())?;
            println!(
                "min m = {:.6e}, max m = {:.6e}, max jump = {:.6e}, report {}",
                r.trace.min_minimum(),
                r.trace.max_minimum(),
                r.trace.max_jump,
                path.display()
            );
            Ok(r.all_positive)
        }
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
