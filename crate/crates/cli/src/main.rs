use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use dbc::experiments::{run_experiment, ExperimentConfig, ExperimentError, ExperimentId};
use dbc::output::{write_csv, write_mesh};
use dbc_core::mesh::hierarchy;

#[derive(Parser)]
#[command(name = "dbc", version, about = "Energy-space Dirichlet boundary control: convergence experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a convergence study and write its table as CSV.
    Run {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        experiment: u8,
        #[arg(long, default_value_t = 6)]
        levels: usize,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        lambda: f64,
        #[arg(long = "quad-degree", default_value_t = 2)]
        quad_degree: usize,
        #[arg(long)]
        out: PathBuf,
        /// Lower control bound (experiment 2 only; defaults to 0).
        #[arg(long, allow_negative_numbers = true)]
        lower: Option<f64>,
        /// Upper control bound (experiment 2 only).
        #[arg(long, allow_negative_numbers = true)]
        upper: Option<f64>,
    },
    /// Write a refined unit-square mesh in the plain `V T` text format.
    Mesh {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        refinements: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

fn run(command: Command) -> Result<(), ExperimentError> {
    match command {
        Command::Run { experiment, levels, lambda, quad_degree, out, lower, upper } => {
            let config = ExperimentConfig {
                experiment: ExperimentId::from_number(experiment).expect("range checked by clap"),
                levels,
                lambda,
                quad_degree,
                lower,
                upper,
            };
            config.validate()?;
            let report = run_experiment(&config)?;
            write_csv(BufWriter::new(File::create(&out)?), &report.records, &report.rates)?;
            println!(
                "{}: rate_h1_sq={:.3} rate_l2_sq={:.3} rate_l2_boundary_sq={:.3} -> {}",
                config.experiment,
                report.rates.h1_sq,
                report.rates.l2_sq,
                report.rates.l2_boundary_sq,
                out.display()
            );
            Ok(())
        }
        Command::Mesh { n, refinements, out } => {
            if n == 0 || refinements > 10 {
                return Err(ExperimentError::InvalidConfig("need n >= 1 and at most 10 refinements".into()));
            }
            let meshes = hierarchy(n, refinements).map_err(|e| ExperimentError::InvalidConfig(e.to_string()))?;
            write_mesh(BufWriter::new(File::create(out)?), meshes.last().unwrap())?;
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
