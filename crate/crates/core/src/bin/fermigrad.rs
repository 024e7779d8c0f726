use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use fermigrad::io::{
    cmd_adapt, cmd_energy, cmd_excited, cmd_grad, cmd_spectrum, cmd_vqe, exit_code, Inputs,
    Outcome, ProblemFile, RunConfig,
};
use fermigrad::sim::Branch;
#[cfg(feature = "parallel")]
use fermigrad::Error;
use fermigrad::Result;

#[derive(Parser)]
struct Args {
    /// Hamiltonian file, or `bundled:<name>`.
    problem: String,
    #[arg(long)]
    circuit: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    scheme: Option<SchemeArg>,
    #[arg(long, value_parser = parse_alpha, allow_hyphen_values = true)]
    alpha: Option<Branch>,
    /// JSON record path; the CSV trace goes next to it with a `.csv` extension.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Parameter assignment `name=value`; repeatable.
    #[arg(long = "param", value_parser = parse_assignment)]
    params: Vec<(String, f64)>,
    /// Number of eigenvalues (`spectrum`).
    #[arg(long)]
    k: Option<usize>,
    /// Particle-number sector (`spectrum`).
    #[arg(long)]
    electrons: Option<usize>,
    /// Restrict to singlets (`spectrum`).
    #[arg(long)]
    singlet: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum SchemeArg {
    Qubit,
    Exact4,
    Real2,
    Approx,
}

impl SchemeArg {
    fn name(self) -> &'static str {
        match self {
            SchemeArg::Qubit => "qubit",
            SchemeArg::Exact4 => "exact4",
            SchemeArg::Real2 => "real2",
            SchemeArg::Approx => "approx",
        }
    }
}

fn parse_alpha(s: &str) -> std::result::Result<Branch, String> {
    Branch::parse(s).ok_or_else(|| format!("expected + or -, got `{s}`"))
}

fn parse_assignment(s: &str) -> std::result::Result<(String, f64), String> {
    let (name, value) = s
        .split_once('=')
        .ok_or_else(|| format!("expected name=value, got `{s}`"))?;
    let v: f64 = value.trim().parse().map_err(|_| format!("invalid number `{value}`"))?;
    Ok((name.trim().to_string(), v))
}

#[derive(Parser)]
#[command(name = "fermigrad", version, about = "Fermionic excitation circuits: energies, gradients, VQE")]
struct Full {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Energy of a circuit (the reference state when no circuit is given).
    Energy(Args),
    /// Energy and gradient columns over one parameter, as CSV.
    Grad(Args),
    /// Fixed-ansatz VQE.
    Vqe(Args),
    /// Adaptive ansatz growth.
    Adapt(Args),
    /// Successive penalized searches for low-lying states.
    Excited(Args),
    /// Lowest eigenvalues by exact diagonalization.
    Spectrum(Args),
}

fn build_inputs(args: &Args) -> Result<Inputs> {
    let problem = ProblemFile::load(&args.problem)?;
    let mut inputs = Inputs::new(problem, args.problem.clone());
    if let Some(path) = &args.circuit {
        inputs.circuit_text = Some(std::fs::read_to_string(path)?);
        inputs.circuit_source = Some(path.display().to_string());
    }
    if let Some(path) = &args.config {
        inputs.config = RunConfig::parse(&std::fs::read_to_string(path)?)?;
    }
    inputs.scheme = args.scheme.map(|s| s.name().to_string());
    inputs.alpha = args.alpha.unwrap_or(Branch::Plus);
    inputs.params = args.params.iter().cloned().collect();
    inputs.seed = args.seed;
    inputs.k = args.k;
    inputs.electrons = args.electrons;
    inputs.singlet = args.singlet;
    Ok(inputs)
}

fn write_outputs(out: &Outcome, path: Option<&Path>) -> Result<()> {
    let json = out.record.to_json();
    match path {
        Some(p) => {
            std::fs::write(p, json + "\n")?;
            if let Some(csv) = &out.csv {
                std::fs::write(p.with_extension("csv"), csv)?;
            }
            eprintln!("{}", out.summary);
        }
        None => println!("{json}"),
    }
    Ok(())
}

fn run(sub: &Sub) -> Result<bool> {
    let (args, f): (&Args, fn(&Inputs) -> Result<Outcome>) = match sub {
        Sub::Energy(a) => (a, cmd_energy),
        Sub::Grad(a) => (a, cmd_grad),
        Sub::Vqe(a) => (a, cmd_vqe),
        Sub::Adapt(a) => (a, cmd_adapt),
        Sub::Excited(a) => (a, cmd_excited),
        Sub::Spectrum(a) => (a, cmd_spectrum),
    };
    #[cfg(feature = "parallel")]
    if let Some(n) = args.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Config(e.to_string()))?;
    }
    let inputs = build_inputs(args)?;
    let out = f(&inputs)?;
    write_outputs(&out, args.out.as_deref())?;
    Ok(out.converged)
}

fn main() -> ExitCode {
    let cli = Full::parse();
    match run(&cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("error: optimizer did not converge");
            ExitCode::from(4)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
