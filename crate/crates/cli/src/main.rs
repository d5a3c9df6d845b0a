//! Command-line front end: field sweeps, side-limit reports, the
//! verification battery, and completion of partial models into separable
//! ones.

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use spinsep::factor::{
    derive_fields, derive_vy, eigen_residual, factorized_energy, gs_certificate, total_overlap,
};
use spinsep::model::{CouplingTensor, ModelSpec};
use spinsep::sweep::{run_sweep, side_limit_report, verify_suite, SweepConfig};
use std::fs;
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "spinsep",
    about = "Separable eigenstates and entanglement side limits in XYZ spin arrays",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ConfigSource {
    /// Sweep config file (flat key = value form).
    #[arg(long, conflicts_with = "fig")]
    config: Option<PathBuf>,
    /// Built-in preset reproducing one of the published sweep figures.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
    fig: Option<u8>,
}

impl ConfigSource {
    fn load(&self) -> Result<SweepConfig> {
        match (&self.config, self.fig) {
            (Some(path), None) => {
                let text = fs::read_to_string(path)
                    .with_context(|| format!("reading {}", path.display()))?;
                Ok(SweepConfig::parse_text(&text)?)
            }
            (None, Some(which)) => {
                SweepConfig::figure_preset(which).ok_or_else(|| anyhow!("unknown preset {which}"))
            }
            (None, None) => bail!("pass either --config <path> or --fig <1|2|3>"),
            (Some(_), Some(_)) => unreachable!("clap enforces exclusivity"),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run a field sweep and emit one CSV row per grid point.
    Sweep {
        #[command(flatten)]
        source: ConfigSource,
        /// Write the CSV here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare numeric negativities at the separability point against the
    /// closed-form side limits.
    Report {
        #[command(flatten)]
        source: ConfigSource,
        /// Write the aligned table here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write one JSON record per table row to this file.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Run the full self-check battery (residuals, certificates, oracles,
    /// identities).
    Verify {
        /// Seed for the randomized suites.
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Also write one JSON record per check to this file.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Complete a partial model (spins, vx, vz) into a separable one by
    /// deriving vy and the factorizing fields from rotation angles, and
    /// emit it in the same flat text format.
    Complete {
        /// Partial model file; vy and field records are ignored.
        #[arg(long)]
        model: PathBuf,
        /// Comma-separated per-site angles in radians.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        angles: Vec<f64>,
        /// Write the completed model here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn write_or_stdout(path: &Option<PathBuf>, content: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, content).with_context(|| format!("writing {}", p.display()))?,
        None => print!("{content}"),
    }
    Ok(())
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Sweep { source, out } => {
            let cfg = source.load()?;
            let output = run_sweep(&cfg)?;
            let mut csv = Vec::new();
            output.write_csv(&mut csv)?;
            write_or_stdout(&out, std::str::from_utf8(&csv)?)?;
            eprint!("{}", output.summary());
        }
        Command::Report { source, out, json } => {
            let cfg = source.load()?;
            let report = side_limit_report(&cfg)?;
            write_or_stdout(&out, &report.table())?;
            if let Some(path) = json {
                let mut buf = Vec::new();
                report.write_jsonl(&mut buf)?;
                fs::write(&path, buf).with_context(|| format!("writing {}", path.display()))?;
            }
            if !report.all_pass {
                eprintln!("side limits exceeded the tolerance");
                std::process::exit(2);
            }
        }
        Command::Verify { seed, json } => {
            let report = verify_suite(seed)?;
            print!("{}", report.table());
            if let Some(path) = json {
                let mut buf = Vec::new();
                report.write_jsonl(&mut buf)?;
                fs::write(&path, buf).with_context(|| format!("writing {}", path.display()))?;
            }
            if !report.all_passed() {
                std::process::exit(2);
            }
        }
        Command::Complete { model, angles, out } => {
            let text = fs::read_to_string(&model)
                .with_context(|| format!("reading {}", model.display()))?;
            let partial = ModelSpec::parse_text(&text)?;
            let n = partial.n_sites();
            if angles.len() != n {
                bail!("{} angles given for {} sites", angles.len(), n);
            }
            let vy = derive_vy(&partial.couplings.vx, &partial.couplings.vz, &angles);
            let derived =
                derive_fields(&partial.couplings.vx, &partial.couplings.vz, &angles, &partial.spins)?;
            let completed = ModelSpec::new(
                partial.spins.clone(),
                CouplingTensor {
                    vx: partial.couplings.vx.clone(),
                    vy,
                    vz: partial.couplings.vz.clone(),
                },
                derived.fields,
            );
            write_or_stdout(&out, &completed.to_text())?;

            let energy = factorized_energy(&completed, &angles);
            let residual = eigen_residual(&completed, &angles)?;
            let cert = gs_certificate(&completed, &angles);
            let overlap = total_overlap(&completed.spins, &angles);
            let mut info = String::new();
            info.push_str(&format!("energy = {energy}\n"));
            info.push_str(&format!("overlap = {overlap}\n"));
            info.push_str(&format!(
                "residual = {:.3e} (partner {:.3e})\n",
                residual.residual, residual.partner_residual
            ));
            for (site, free) in derived.field_free.iter().enumerate() {
                if *free {
                    info.push_str(&format!("site {site}: field unconstrained (sinθ = 0)\n"));
                }
            }
            match cert.reason {
                None => info.push_str("ground state: certified\n"),
                Some(reason) => info.push_str(&format!("ground state: not certified ({reason})\n")),
            }
            eprint!("{info}");
        }
    }
    Ok(())
}
