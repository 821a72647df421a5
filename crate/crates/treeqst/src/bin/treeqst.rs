use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use treeqst::{emit, run, run_verification, CliError, ConfigLayer, Format, Mode, Preset};

/// State transfer and entanglement distribution over dissipative binary-tree
/// spin networks with weak measurement and measurement reversal.
///
/// Settings are layered: built-in defaults, then --preset, then --config,
/// then the remaining flags.
#[derive(Debug, Parser)]
#[command(name = "treeqst", version)]
struct Cli {
    /// fidelity, success, concurrence, ed-success, amplitudes or verify
    #[arg(long)]
    mode: Option<Mode>,
    /// Number of generations N (the tree has 2^N - 1 sites)
    #[arg(long)]
    generations: Option<u32>,
    /// Receiving site r, 1-based (default 2^(N-1))
    #[arg(long)]
    site: Option<usize>,
    /// Nearest-neighbour coupling
    #[arg(long)]
    nu: Option<f64>,
    /// Spectral width of the reservoirs
    #[arg(long)]
    lambda: Option<f64>,
    /// System-reservoir coupling strength
    #[arg(long)]
    gamma: Option<f64>,
    /// Qubit frequency
    #[arg(long)]
    omega0: Option<f64>,
    /// Final time
    #[arg(long)]
    tmax: Option<f64>,
    /// Number of output times, including t = 0
    #[arg(long)]
    steps: Option<usize>,
    /// Weak-measurement strength; repeat for a sweep
    #[arg(long = "p", allow_negative_numbers = true)]
    p: Vec<f64>,
    /// Polar angle of the input state
    #[arg(long)]
    theta: Option<f64>,
    /// Azimuthal angle of the input state
    #[arg(long, allow_negative_numbers = true)]
    phi: Option<f64>,
    /// csv or json
    #[arg(long)]
    format: Option<Format>,
    /// Output file (default: stdout)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed for randomized verification suites
    #[arg(long)]
    seed: Option<u64>,
    /// key = value file
    #[arg(long)]
    config: Option<PathBuf>,
    /// fig2a, fig2c, fig3a or fig3c
    #[arg(long)]
    preset: Option<Preset>,
    /// Print the resolved configuration as a config file and exit
    #[arg(long)]
    dump_config: bool,
}

impl Cli {
    fn layer(&self) -> ConfigLayer {
        ConfigLayer {
            preset: self.preset,
            mode: self.mode,
            generations: self.generations,
            site: self.site,
            nu: self.nu,
            lambda: self.lambda,
            gamma: self.gamma,
            omega0: self.omega0,
            tmax: self.tmax,
            steps: self.steps,
            p: (!self.p.is_empty()).then(|| self.p.clone()),
            theta: self.theta,
            phi: self.phi,
            format: self.format,
            out: self.out.clone(),
            seed: self.seed,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn execute(cli: &Cli) -> Result<ExitCode, CliError> {
    let file = match &cli.config {
        Some(path) => ConfigLayer::load(path)?,
        None => ConfigLayer::default(),
    };
    let config = file.merge(cli.layer()).resolve()?;
    if cli.dump_config {
        print!("{}", config.to_config_string());
        return Ok(ExitCode::SUCCESS);
    }
    if config.mode == Mode::Verify {
        let report = run_verification(&config)?;
        println!("{report}");
        return Ok(if report.passed() {
            ExitCode::SUCCESS
        } else {
            ExitCode::from(2)
        });
    }
    let table = run(&config)?;
    emit(&table, config.format, config.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}
