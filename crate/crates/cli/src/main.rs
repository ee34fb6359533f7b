use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use fdadm_cli::config::ModeName;
use fdadm_cli::{
    emit_weights, load_config, run_ber_sweep, run_secrecy_sweep, verify_weights_file,
    write_output, CliError, Experiment,
};
use fdadm_core::{ChannelMode, DEFAULT_INCREMENT_GUARD};

/// Two-ray FDA directional-modulation experiment runner.
///
/// All flags can also be set through the environment with the `FDADM_`
/// prefix (`FDADM_CONFIG`, `FDADM_SEED`, `FDADM_OUT`, `FDADM_MODE`).
#[derive(Parser)]
#[command(name = "fdadm", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// JSON experiment config; omit for the built-in reference setup.
    #[arg(long, env = "FDADM_CONFIG")]
    config: Option<PathBuf>,
    /// Master seed override.
    #[arg(long, env = "FDADM_SEED")]
    seed: Option<u64>,
    /// Output directory override.
    #[arg(long, env = "FDADM_OUT")]
    out: Option<PathBuf>,
    /// Channel mode override: two-ray | single-path.
    #[arg(long, env = "FDADM_MODE")]
    mode: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Monte Carlo BER along an r / theta / psi sweep through the receiver.
    BerSweep(CommonArgs),
    /// Secrecy rate versus SNR or eavesdropper location.
    SecrecySweep(CommonArgs),
    /// Synthesize weight pairs and write them as CSV.
    Weights {
        #[command(flatten)]
        common: CommonArgs,
        /// Number of independent pairs to draw.
        #[arg(long, default_value_t = 1)]
        count: usize,
    },
    /// Check a weights CSV against the receiver constraints (report-only).
    Verify {
        #[command(flatten)]
        common: CommonArgs,
        /// Weights CSV to verify (interchange or multi-draw format).
        #[arg(long)]
        weights: PathBuf,
        /// Residual bound for a PASS verdict.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
}

fn resolve(common: &CommonArgs) -> Result<Experiment, CliError> {
    let mut cfg = load_config(common.config.as_deref())?;
    if let Some(seed) = common.seed {
        cfg.mc.seed = seed;
    }
    if let Some(out) = &common.out {
        cfg.output = out.clone();
    }
    if let Some(mode) = &common.mode {
        let parsed: ChannelMode = mode.parse().map_err(CliError::Config)?;
        cfg.mode = ModeName::from(parsed);
    }
    let exp = cfg.resolve()?;
    if exp.array.exceeds_increment_guard(DEFAULT_INCREMENT_GUARD) {
        eprintln!(
            "warning: |delta_f|/f0 = {:.3e} exceeds the narrowband guard {:.0e}; \
             results stray from the model's assumptions",
            exp.array.increment_ratio(),
            DEFAULT_INCREMENT_GUARD
        );
    }
    Ok(exp)
}

fn run() -> Result<(), CliError> {
    let cli = Cli::parse();
    match cli.command {
        Command::BerSweep(common) => {
            let exp = resolve(&common)?;
            let csv = run_ber_sweep(&exp)?;
            let path = write_output(&exp.output, &csv)?;
            println!("{}", path.display());
        }
        Command::SecrecySweep(common) => {
            let exp = resolve(&common)?;
            let csv = run_secrecy_sweep(&exp)?;
            let path = write_output(&exp.output, &csv)?;
            println!("{}", path.display());
        }
        Command::Weights { common, count } => {
            let exp = resolve(&common)?;
            let csv = emit_weights(&exp, count)?;
            let path = write_output(&exp.output, &csv)?;
            println!("{}", path.display());
        }
        Command::Verify {
            common,
            weights,
            tol,
        } => {
            let exp = resolve(&common)?;
            let outcomes = verify_weights_file(&exp, &weights, tol)?;
            let mut passed = 0usize;
            for v in &outcomes {
                println!(
                    "{}: |kappa-1| = {:.3e}  |eta| = {:.3e}  {}",
                    v.label,
                    v.report.kappa_residual,
                    v.report.eta_residual,
                    if v.pass { "PASS" } else { "FAIL" }
                );
                if v.pass {
                    passed += 1;
                }
            }
            println!("{passed}/{} pairs within tol {tol:e}", outcomes.len());
        }
    }
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
