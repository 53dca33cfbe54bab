//! Deterministic front end for the wedge-locality toolkit: every
//! subcommand runs one numeric pipeline, writes a canonical
//! `report.json` (plus CSV artifacts) into the output directory, and
//! exits nonzero when a check fails.

mod config;
mod report;
mod run;

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;

use config::{out_dir, pick, FileConfig};

#[derive(Parser)]
#[command(name = "wedgelab", version, about = "Numerical checks for wedge-local models")]
struct Cli {
    /// JSON config file; flags override its values
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory (also via WEDGELAB_OUT_DIR)
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the defining constraints of a scattering function
    SmatrixCheck(SmatrixArgs),
    /// Check the exchange-algebra relations on random smearings
    ZfCheck(ZfArgs),
    /// Compare the two analytic continuation evaluations
    ContinuationCompare(ContinuationArgs),
    /// Singular values of the wedge kernel, with grid refinement
    KernelSpectrum(KernelArgs),
    /// One-particle contraction bound over sampled profiles
    Bounds(BoundsArgs),
    /// Tensor-power decay table from the compressed kernel norm
    SectorDecay(DecayArgs),
    /// Finite-dimensional modular data and nuclearity spectrum
    ModularToy(ModularArgs),
}

#[derive(Args)]
struct SmatrixArgs {
    /// free-bose, free-fermi, or sinh:b=<float>
    #[arg(long)]
    smatrix: Option<String>,
    #[arg(long)]
    theta_max: Option<f64>,
    #[arg(long)]
    panels: Option<usize>,
    #[arg(long)]
    order: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args)]
struct ZfArgs {
    #[arg(long)]
    smatrix: Option<String>,
    #[arg(long)]
    mass: Option<f64>,
    #[arg(long)]
    n_max: Option<usize>,
    #[arg(long)]
    pairs: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    theta_max: Option<f64>,
    #[arg(long)]
    panels: Option<usize>,
    #[arg(long)]
    order: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args)]
struct ContinuationArgs {
    /// phi or pi
    #[arg(long = "type")]
    kind: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    center: Option<f64>,
    #[arg(long)]
    radius: Option<f64>,
    #[arg(long)]
    amplitude: Option<f64>,
    #[arg(long)]
    mass: Option<f64>,
    #[arg(long)]
    theta_max: Option<f64>,
    #[arg(long)]
    panels: Option<usize>,
    #[arg(long)]
    order: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args)]
struct KernelArgs {
    /// phi or pi
    #[arg(long = "type")]
    kind: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    x0: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    x1: Option<f64>,
    #[arg(long)]
    mass: Option<f64>,
    #[arg(long)]
    theta_max: Option<f64>,
    #[arg(long)]
    panels: Option<usize>,
    #[arg(long)]
    order: Option<usize>,
    /// allowed relative trace-norm change under grid doubling
    #[arg(long)]
    refine_tol: Option<f64>,
}

#[derive(Args)]
struct BoundsArgs {
    /// phi or pi
    #[arg(long = "type")]
    kind: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    x0: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    x1: Option<f64>,
    #[arg(long)]
    mass: Option<f64>,
    #[arg(long)]
    profiles: Option<usize>,
    #[arg(long)]
    theta_max: Option<f64>,
    #[arg(long)]
    panels: Option<usize>,
    #[arg(long)]
    order: Option<usize>,
    /// discretization allowance on top of the bound
    #[arg(long)]
    slack: Option<f64>,
}

#[derive(Args)]
struct DecayArgs {
    /// phi or pi
    #[arg(long = "type")]
    kind: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    x0: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    x1: Option<f64>,
    #[arg(long)]
    mass: Option<f64>,
    #[arg(long)]
    profiles: Option<usize>,
    #[arg(long)]
    n_max: Option<usize>,
    #[arg(long)]
    theta_max: Option<f64>,
    #[arg(long)]
    panels: Option<usize>,
    #[arg(long)]
    order: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args)]
struct ModularArgs {
    #[arg(long)]
    d: Option<usize>,
    /// comma-separated weights, e.g. 0.9,0.1
    #[arg(long)]
    p: Option<String>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    tol: Option<f64>,
}

fn parse_weights(raw: &str) -> Result<Vec<f64>, String> {
    raw.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<f64>()
                .map_err(|_| format!("invalid weight `{tok}` in --p"))
        })
        .collect()
}

fn main() {
    let cli = Cli::parse();
    let file = match FileConfig::load(cli.config.as_deref()) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(2);
        }
    };
    let dir = out_dir(cli.out_dir.clone(), &file);

    let result = match &cli.command {
        Command::SmatrixCheck(a) => run::smatrix_check(
            &run::SmatrixParams {
                smatrix: pick(a.smatrix.clone(), file.smatrix.clone(), "free-bose".into()),
                theta_max: pick(a.theta_max, file.theta_max, 5.0),
                panels: pick(a.panels, file.panels, 4),
                order: pick(a.order, file.order, 8),
                tol: a.tol.or(file.tol),
            },
            &dir,
        ),
        Command::ZfCheck(a) => run::zf_check(
            &run::ZfParams {
                smatrix: pick(a.smatrix.clone(), file.smatrix.clone(), "free-bose".into()),
                mass: pick(a.mass, file.mass, 1.0),
                n_max: pick(a.n_max, file.n_max, 3),
                pairs: pick(a.pairs, file.pairs, 20),
                seed: pick(a.seed, file.seed, 1),
                theta_max: pick(a.theta_max, file.theta_max, 5.0),
                panels: pick(a.panels, file.panels, 8),
                order: pick(a.order, file.order, 8),
                tol: pick(a.tol, file.tol, 1e-10),
            },
            &dir,
        ),
        Command::ContinuationCompare(a) => run::continuation_compare(
            &run::ContinuationParams {
                kind: pick(a.kind.clone(), file.kind.clone(), "phi".into()),
                center: pick(a.center, file.center, -2.0),
                radius: pick(a.radius, file.radius, 0.5),
                amplitude: pick(a.amplitude, file.amplitude, 1.0),
                mass: pick(a.mass, file.mass, 1.0),
                theta_max: pick(a.theta_max, file.theta_max, 8.0),
                panels: pick(a.panels, file.panels, 384),
                order: pick(a.order, file.order, 16),
                tol: pick(a.tol, file.tol, 1e-6),
            },
            &dir,
        ),
        Command::KernelSpectrum(a) => run::kernel_spectrum(
            &run::KernelParams {
                kind: pick(a.kind.clone(), file.kind.clone(), "phi".into()),
                x0: pick(a.x0, file.x0, 0.0),
                x1: pick(a.x1, file.x1, -1.0),
                mass: pick(a.mass, file.mass, 1.0),
                theta_max: pick(a.theta_max, file.theta_max, 10.0),
                panels: pick(a.panels, file.panels, 32),
                order: pick(a.order, file.order, 8),
                refine_tol: pick(a.refine_tol, file.tol, 0.01),
            },
            &dir,
        ),
        Command::Bounds(a) => run::bounds(
            &run::BoundsParams {
                kind: pick(a.kind.clone(), file.kind.clone(), "phi".into()),
                x0: pick(a.x0, file.x0, 0.0),
                x1: pick(a.x1, file.x1, -1.0),
                mass: pick(a.mass, file.mass, 1.0),
                profiles: pick(a.profiles, file.profiles, 20),
                theta_max: pick(a.theta_max, file.theta_max, 8.0),
                panels: pick(a.panels, file.panels, 16),
                order: pick(a.order, file.order, 12),
                slack: pick(a.slack, file.tol, 1e-8),
            },
            &dir,
        ),
        Command::SectorDecay(a) => run::sector_decay(
            &run::DecayParams {
                kind: pick(a.kind.clone(), file.kind.clone(), "phi".into()),
                x0: pick(a.x0, file.x0, 0.0),
                x1: pick(a.x1, file.x1, -1.0),
                mass: pick(a.mass, file.mass, 1.0),
                profiles: pick(a.profiles, file.profiles, 12),
                n_max: pick(a.n_max, file.n_max, 4),
                theta_max: pick(a.theta_max, file.theta_max, 8.0),
                panels: pick(a.panels, file.panels, 16),
                order: pick(a.order, file.order, 12),
                tol: pick(a.tol, file.tol, 1e-8),
            },
            &dir,
        ),
        Command::ModularToy(a) => {
            let weights = match &a.p {
                Some(raw) => match parse_weights(raw) {
                    Ok(w) => Some(w),
                    Err(e) => {
                        eprintln!("error: {e}");
                        std::process::exit(2);
                    }
                },
                None => None,
            };
            let p = weights.or(file.p.clone()).unwrap_or(vec![0.5, 0.5]);
            run::modular_toy(
                &run::ModularParams {
                    d: pick(a.d, file.d, p.len()),
                    p,
                    alpha: pick(a.alpha, file.alpha, 0.25),
                    tol: pick(a.tol, file.tol, 1e-12),
                },
                &dir,
            )
        }
    };

    match result {
        Ok(report) => {
            if let Err(e) = report.write(&dir) {
                eprintln!("error: cannot write report to {}: {e}", dir.display());
                std::process::exit(2);
            }
            for check in &report.checks {
                println!(
                    "{}: {} (measured {:.6e}, bound {:.6e})",
                    check.name,
                    if check.pass { "pass" } else { "FAIL" },
                    check.measured,
                    check.bound
                );
            }
            println!("report: {}", dir.join("report.json").display());
            if !report.passed() {
                std::process::exit(1);
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(2);
        }
    }
}
