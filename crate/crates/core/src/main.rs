use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use radproof::config::RunConfig;
use radproof::error::{PipelineError, Stage, StageExt};
use radproof::pipeline;

#[derive(Parser)]
#[command(name = "radproof", version, about = "Computer-assisted proofs of localized radial solutions")]
struct Cli {
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full proof for a configuration.
    Prove {
        #[arg(long)]
        config: PathBuf,
        /// Only enclose the eigendata of the linearization at the equilibrium.
        #[arg(long)]
        eigen_only: bool,
        #[arg(long)]
        emit_profile: Option<PathBuf>,
        #[arg(long)]
        cert: Option<PathBuf>,
    },
    /// Produce a sampled seed profile by shooting.
    Seed {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print a certificate in readable form.
    Report {
        #[arg(long)]
        cert: PathBuf,
    },
}

fn run(cli: Cli) -> Result<bool, PipelineError> {
    match cli.command {
        Command::Prove {
            config,
            eigen_only,
            emit_profile,
            cert,
        } => {
            let cfg = RunConfig::load(&config).stage(Stage::Config)?;
            if eigen_only {
                let sd = pipeline::eigen_only(&cfg)?;
                print!("{}", pipeline::spectral_report(&sd));
                return Ok(true);
            }
            let run = pipeline::run_proof(&cfg)?;
            print!("{}", pipeline::report(&run.certificate));
            if let Some(p) = cert {
                pipeline::write_file(&p, &pipeline::certificate_json(&run.certificate)).stage(Stage::Output)?;
            }
            if let Some(p) = emit_profile {
                pipeline::write_file(&p, &pipeline::profile_csv(&run)).stage(Stage::Output)?;
            }
            Ok(run.certificate.passed)
        }
        Command::Seed { config, out } => {
            let cfg = RunConfig::load(&config).stage(Stage::Config)?;
            let p = radproof::config::build_problem(&cfg.problem).stage(Stage::Problem)?;
            let seed = pipeline::make_seed(&cfg, &p).stage(Stage::Seed)?;
            pipeline::write_file(&out, &seed.to_json()).stage(Stage::Output)?;
            println!("wrote {} samples, u(0) = {:?}", seed.rows.len(), seed.phi());
            Ok(true)
        }
        Command::Report { cert } => {
            let c = pipeline::read_certificate(&cert).stage(Stage::Output)?;
            print!("{}", pipeline::report(&c));
            Ok(c.passed)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
