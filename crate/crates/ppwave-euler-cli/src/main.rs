//! Command-line runner for ppwave-euler reproductions.
//!
//! Every subcommand writes one CSV table (stdout or `--out`) preceded by a
//! `#` header that records the tool version and all parameters. Usage errors
//! exit with 2, numeric failures with 3; both print `error: kind=... ` on stderr.
//! Quadrature threads follow `RAYON_NUM_THREADS`.

mod commands;
mod table;

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "ppwave-euler", version, about = "Euler-class invariants of pp-wave worldsheets")]
struct Cli {
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Conformal factor and Euler density on a grid.
    Density(DensityArgs),
    /// Excised integral at one radius, or the two iterated integrals.
    Integrate(IntegrateArgs),
    /// Excised integral over a list of radii with extrapolation.
    Sweep(SweepArgs),
    /// Solutions of the quantization condition chi = k.
    Spectrum(SpectrumArgs),
    /// Energy lattice H(k) of the two-field configuration.
    Energy(EnergyArgs),
    /// Pfaffian of the target-space curvature and the Dirac mass table.
    TargetCheck(TargetArgs),
    /// Fixed reproduction data sets, numbered 1 to 5.
    Figures(FigureArgs),
}

#[derive(Args)]
pub struct ConfigArgs {
    /// Configuration file; defaults to one right and one left level-1 mode
    /// with unit amplitudes at alpha' = p+ = 1, mu^2 = 3.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Chart {
    TauSigma,
    Xy,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Source {
    /// Finite differences of log f.
    Fd,
    /// Closed form for two-mode configurations.
    Closed,
}

#[derive(Args)]
pub struct DensityArgs {
    #[command(flatten)]
    pub config: ConfigArgs,
    #[arg(long, value_enum, default_value = "tau-sigma")]
    pub chart: Chart,
    #[arg(long, value_enum, default_value = "fd")]
    pub source: Source,
    /// Points per axis.
    #[arg(long, default_value_t = 64)]
    pub grid: usize,
    /// Upper tau limit; defaults to the sigma period.
    #[arg(long)]
    pub tau_max: Option<f64>,
    /// Upper sigma limit; defaults to the sigma period.
    #[arg(long)]
    pub sigma_max: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Excision {
    Coordinate,
    Gradient,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Method {
    Excised,
    Iterated,
}

#[derive(Args)]
pub struct QuadArgs {
    /// Gauss-Legendre nodes per axis across the cell.
    #[arg(long, default_value_t = 2048)]
    pub grid_n: usize,
    #[arg(long, value_enum, default_value = "coordinate")]
    pub excision: Excision,
}

#[derive(Args)]
pub struct IntegrateArgs {
    #[command(flatten)]
    pub config: ConfigArgs,
    #[command(flatten)]
    pub quad: QuadArgs,
    #[arg(long, value_enum, default_value = "excised")]
    pub method: Method,
    /// Excision radius.
    #[arg(long, default_value_t = 1e-3)]
    pub epsilon: f64,
}

#[derive(Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub config: ConfigArgs,
    #[command(flatten)]
    pub quad: QuadArgs,
    /// Strictly decreasing excision radii.
    #[arg(long, value_delimiter = ',', default_value = "1e-2,1e-3,1e-4,1e-5,1e-6")]
    pub epsilons: Vec<f64>,
    /// Skip the power-law extrapolation.
    #[arg(long)]
    pub no_extrapolation: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Case {
    #[value(name = "A")]
    A,
    #[value(name = "B")]
    B,
    #[value(name = "C")]
    C,
}

#[derive(Args)]
pub struct SpectrumArgs {
    #[arg(long, value_enum, ignore_case = true)]
    pub case: Case,
    /// Inclusive range `a..b`.
    #[arg(long, value_parser = parse_k_range, default_value = "1..5")]
    pub k_range: (i64, i64),
    /// Mode levels `m,n`.
    #[arg(long, value_parser = parse_levels, default_value = "1,1")]
    pub levels: (u32, u32),
    /// Parameter file with a `[params]` section; defaults to alpha' = p+ = 1, mu^2 = 3.
    #[arg(long)]
    pub params: Option<PathBuf>,
    /// Fixed amplitude r~_n.
    #[arg(long, default_value_t = 1.0)]
    pub fixed_amplitude: f64,
}

#[derive(Args)]
pub struct EnergyArgs {
    #[arg(long, value_parser = parse_k_range, default_value = "1..4")]
    pub k_range: (i64, i64),
    #[arg(long, value_parser = parse_levels, default_value = "3,1")]
    pub levels: (u32, u32),
    /// Parameter file; defaults to alpha' = p+ = 1, mu = 2.
    #[arg(long)]
    pub params: Option<PathBuf>,
    #[arg(long, default_value_t = 2.0)]
    pub fixed_amplitude: f64,
}

#[derive(Args)]
pub struct TargetArgs {
    /// Number of sampled points.
    #[arg(long, default_value_t = 100)]
    pub points: usize,
    /// Half-width of the sampling box in every coordinate.
    #[arg(long, default_value_t = 3.0)]
    pub half_width: f64,
    /// Parameter file; defaults to alpha' = p+ = 1, mu = 1.
    #[arg(long)]
    pub params: Option<PathBuf>,
    /// Largest n in the Dirac mass table.
    #[arg(long, default_value_t = 10)]
    pub dirac_max: u32,
}

#[derive(Args)]
pub struct FigureArgs {
    /// 1: sweep over epsilon; 2: its derivative; 3: chi over (r, r~);
    /// 4: amplitude lattice; 5: energy lattice.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=5))]
    pub which: u8,
}

fn parse_k_range(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s.split_once("..").ok_or_else(|| format!("expected a..b, got '{s}'"))?;
    let a: i64 = a.trim().parse().map_err(|e| format!("'{a}': {e}"))?;
    let b: i64 = b.trim().parse().map_err(|e| format!("'{b}': {e}"))?;
    if a > b {
        return Err(format!("empty range {a}..{b}"));
    }
    Ok((a, b))
}

fn parse_levels(s: &str) -> Result<(u32, u32), String> {
    let (m, n) = s.split_once(',').ok_or_else(|| format!("expected m,n, got '{s}'"))?;
    let m: u32 = m.trim().parse().map_err(|e| format!("'{m}': {e}"))?;
    let n: u32 = n.trim().parse().map_err(|e| format!("'{n}': {e}"))?;
    if m == 0 || n == 0 {
        return Err("levels must be at least 1".into());
    }
    Ok((m, n))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprintln!("error: kind=usage");
            let _ = e.print();
            return ExitCode::from(2);
        }
    };
    let result = match &cli.command {
        Command::Density(a) => commands::density(a),
        Command::Integrate(a) => commands::integrate(a),
        Command::Sweep(a) => commands::sweep(a),
        Command::Spectrum(a) => commands::spectrum(a),
        Command::Energy(a) => commands::energy(a),
        Command::TargetCheck(a) => commands::target_check(a, cli.seed),
        Command::Figures(a) => commands::figure(a),
    };
    let outcome = result.and_then(|table| {
        let text = table.render();
        match &cli.out {
            Some(path) => std::fs::write(path, text)
                .map_err(|e| commands::Failure::usage("io", format!("{}: {e}", path.display()))),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    });
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: kind={} {}", f.kind, f.message);
            ExitCode::from(f.code)
        }
    }
}
