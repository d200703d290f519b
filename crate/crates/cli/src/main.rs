//! `phaseq`: phase-space quantization toolkit command line.
//!
//! Exit codes: 0 success, 1 numerical verification failure, 2 configuration
//! or usage errors.

mod io;
mod plot;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;

use phaseq_core::grid::GridSpec;
use phaseq_core::quantize::{build_op_bj, build_op_tau};
use phaseq_core::signals::{chirp, gaussian, hermite, two_gaussian};
use phaseq_core::suites::{parse_suite, run_suite, SuiteConfig};
use phaseq_core::symbolic::{order_monomial, OrderingRule};
use phaseq_core::wigner::{
    born_jordan_distribution, cross_ambiguity, cross_wigner, tau_wigner, TauParameter,
};

#[derive(Parser)]
#[command(
    name = "phaseq",
    about = "Shubin tau, Weyl and Born-Jordan quantization on phase space",
    version
)]
struct Cli {
    /// Worker threads for matrix assembly (0 = library default). Outputs are
    /// identical at any thread count.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct GridArgs {
    /// Sample count (power of two, >= 8)
    #[arg(long, default_value_t = 256)]
    n: usize,
    /// Left edge of the position window
    #[arg(long, default_value_t = -16.0, allow_hyphen_values = true)]
    x_min: f64,
    /// Right edge of the position window
    #[arg(long, default_value_t = 16.0, allow_hyphen_values = true)]
    x_max: f64,
    /// Planck parameter
    #[arg(long, default_value_t = 1.0)]
    hbar: f64,
}

impl GridArgs {
    fn build(&self) -> Result<GridSpec> {
        Ok(GridSpec::new(self.n, self.x_min, self.x_max, self.hbar)?)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SignalKind {
    Gaussian,
    Hermite,
    Chirp,
    TwoGaussian,
}

#[derive(Clone, Copy, ValueEnum)]
enum Scheme {
    Weyl,
    Bj,
    Tau,
    Kn,
}

#[derive(Clone, Copy, ValueEnum)]
enum RuleName {
    Bj,
    Weyl,
    Kn,
    Tau,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a test signal and write it as CSV.
    Gen {
        #[arg(long, value_enum)]
        kind: SignalKind,
        /// Center (gaussian) in position
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        center: f64,
        /// Momentum boost (gaussian, chirp)
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        momentum: f64,
        /// Width parameter (gaussian, chirp)
        #[arg(long, default_value_t = 1.0)]
        width: f64,
        /// Hermite order
        #[arg(long, default_value_t = 0)]
        order: u32,
        /// Chirp rate
        #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
        rate: f64,
        /// Half separation of the two-gaussian probe
        #[arg(long, default_value_t = 4.0)]
        separation: f64,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Cross-Wigner distribution of one or two signals.
    Wigner {
        #[arg(long)]
        psi: PathBuf,
        #[arg(long)]
        phi: Option<PathBuf>,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long)]
        plot: Option<PathBuf>,
    },
    /// tau-Wigner distribution.
    Tauwig {
        #[arg(long, allow_hyphen_values = true)]
        tau: f64,
        #[arg(long)]
        psi: PathBuf,
        #[arg(long)]
        phi: Option<PathBuf>,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long)]
        plot: Option<PathBuf>,
    },
    /// Born-Jordan distribution.
    Bjdist {
        #[arg(long)]
        psi: PathBuf,
        #[arg(long)]
        phi: Option<PathBuf>,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long)]
        plot: Option<PathBuf>,
    },
    /// tau cross-ambiguity transform (tau = 1/2 is the plain one).
    Ambiguity {
        #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
        tau: f64,
        #[arg(long)]
        psi: PathBuf,
        #[arg(long)]
        phi: Option<PathBuf>,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long)]
        plot: Option<PathBuf>,
    },
    /// Build an operator matrix from a symbol JSON.
    Quantize {
        #[arg(long, value_enum)]
        scheme: Scheme,
        #[arg(long, allow_hyphen_values = true)]
        tau: Option<f64>,
        #[arg(long)]
        symbol: PathBuf,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(short, long)]
        output: PathBuf,
        /// Apply the operator to this signal as well
        #[arg(long)]
        apply: Option<PathBuf>,
        /// Where to write the applied signal
        #[arg(long)]
        apply_out: Option<PathBuf>,
    },
    /// Weyl symbol of the Born-Jordan operator with the given symbol.
    Weylsym {
        #[arg(long)]
        symbol: PathBuf,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Print the canonical ordering of a monomial symbol.
    Order {
        #[arg(long, value_enum)]
        rule: RuleName,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        n: u32,
        /// Exact rational tau substitution "r/s" for the tau rule
        #[arg(long)]
        tau: Option<String>,
    },
    /// Run a verification suite and emit the JSON residual report.
    Verify {
        #[arg(long)]
        suite: String,
        /// JSON config {"grid": {"n":..., "x_min":..., "x_max":..., "hbar":...}, "seed":...};
        /// defaults to the desk-scale grid (PHASEQ_CONFIG overrides the path)
        #[arg(long)]
        config: Option<PathBuf>,
        /// Also write the report to this path
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

fn load_pair(psi: &Path, phi: &Option<PathBuf>) -> Result<(phaseq_core::Signal, phaseq_core::Signal)> {
    let a = io::read_signal(psi)?;
    let b = match phi {
        Some(p) => io::read_signal(p)?,
        None => a.clone(),
    };
    Ok((a, b))
}

fn parse_exact_tau(text: &str) -> Result<BigRational> {
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text.trim(), "1"),
    };
    let n: BigInt = num.parse().map_err(|_| anyhow!("bad numerator '{num}'"))?;
    let d: BigInt = den.parse().map_err(|_| anyhow!("bad denominator '{den}'"))?;
    if d == BigInt::from(0) {
        bail!("tau denominator must be nonzero");
    }
    Ok(BigRational::new(n, d))
}

fn field_command(
    output: &Path,
    plot: &Option<PathBuf>,
    title: &str,
    field: phaseq_core::PhaseSpaceField,
) -> Result<()> {
    io::write_field(output, &field)?;
    if let Some(script) = plot {
        plot::write_field_plot(script, output, title)?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Gen {
            kind,
            center,
            momentum,
            width,
            order,
            rate,
            separation,
            grid,
            output,
        } => {
            let g = grid.build()?;
            let signal = match kind {
                SignalKind::Gaussian => gaussian(&g, center, momentum, width)?,
                SignalKind::Hermite => hermite(&g, order)?,
                SignalKind::Chirp => chirp(&g, momentum, rate, width)?,
                SignalKind::TwoGaussian => two_gaussian(&g, separation)?,
            };
            io::write_signal(&output, &signal)?;
            Ok(0)
        }
        Command::Wigner { psi, phi, output, plot } => {
            let (a, b) = load_pair(&psi, &phi)?;
            field_command(&output, &plot, "cross-Wigner", cross_wigner(&a, &b)?)?;
            Ok(0)
        }
        Command::Tauwig { tau, psi, phi, output, plot } => {
            let (a, b) = load_pair(&psi, &phi)?;
            let t = TauParameter::new(tau)?;
            field_command(&output, &plot, "tau-Wigner", tau_wigner(&a, &b, t)?)?;
            Ok(0)
        }
        Command::Bjdist { psi, phi, output, plot } => {
            let (a, b) = load_pair(&psi, &phi)?;
            field_command(
                &output,
                &plot,
                "Born-Jordan distribution",
                born_jordan_distribution(&a, &b)?,
            )?;
            Ok(0)
        }
        Command::Ambiguity { tau, psi, phi, output, plot } => {
            let (a, b) = load_pair(&psi, &phi)?;
            let t = TauParameter::new(tau)?;
            field_command(&output, &plot, "cross-ambiguity", cross_ambiguity(&a, &b, t)?)?;
            Ok(0)
        }
        Command::Quantize { scheme, tau, symbol, grid, output, apply, apply_out } => {
            let g = grid.build()?;
            let spec = io::read_symbol(&symbol)?;
            let built = match scheme {
                Scheme::Weyl => build_op_tau(&spec, TauParameter::weyl(), &g)?,
                Scheme::Kn => build_op_tau(&spec, TauParameter::new(1.0)?, &g)?,
                Scheme::Tau => {
                    let t = tau.ok_or_else(|| anyhow!("--tau is required with --scheme tau"))?;
                    build_op_tau(&spec, TauParameter::new(t)?, &g)?
                }
                Scheme::Bj => build_op_bj(&spec, &g)?,
            };
            if built.diagnostics.aliasing_warning {
                eprintln!(
                    "warning: symbol spectrum has not decayed at the grid boundary \
                     (ratio {:.2e}); the built operator may carry aliasing artifacts",
                    built.diagnostics.boundary_spectrum_ratio
                );
            }
            io::write_operator(&output, &built.matrix)?;
            if let Some(psi_path) = apply {
                let psi = io::read_signal(&psi_path)?;
                let out_path = apply_out
                    .ok_or_else(|| anyhow!("--apply-out is required with --apply"))?;
                io::write_signal(&out_path, &built.matrix.apply(&psi)?)?;
            }
            Ok(0)
        }
        Command::Weylsym { symbol, grid, output } => {
            let g = grid.build()?;
            let spec = io::read_symbol(&symbol)?;
            let field = spec.render(&g)?;
            io::write_field(&output, &phaseq_core::quantize::bj_to_weyl_symbol(&field))?;
            Ok(0)
        }
        Command::Order { rule, m, n, tau } => {
            let poly = match rule {
                RuleName::Bj => order_monomial(OrderingRule::BornJordan, m, n, 1),
                RuleName::Weyl => order_monomial(OrderingRule::Weyl, m, n, 1),
                RuleName::Kn => order_monomial(OrderingRule::KohnNirenberg, m, n, 1),
                RuleName::Tau => {
                    let base = order_monomial(OrderingRule::ShubinTau, m, n, 1);
                    match &tau {
                        Some(text) => base.substitute_tau(&parse_exact_tau(text)?),
                        None => base,
                    }
                }
            };
            println!("{}", poly.render());
            Ok(0)
        }
        Command::Verify { suite, config, output } => {
            let kind = parse_suite(&suite)?;
            let cfg = load_config(config.as_deref())?;
            let report = run_suite(kind, &cfg)?;
            let json = serde_json::to_string_pretty(&report)?;
            println!("{json}");
            if let Some(path) = output {
                std::fs::write(&path, &json)
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            if report.pass {
                Ok(0)
            } else {
                for rec in report.records.iter().filter(|r| !r.pass) {
                    eprintln!(
                        "FAILED {} (tau {:?}): residual {:.3e} vs tolerance {:.3e}",
                        rec.identity, rec.tau, rec.residual, rec.tolerance
                    );
                }
                Ok(1)
            }
        }
    }
}

fn load_config(path: Option<&Path>) -> Result<SuiteConfig> {
    let resolved: Option<PathBuf> = match path {
        Some(p) => Some(p.to_path_buf()),
        None => std::env::var_os("PHASEQ_CONFIG").map(PathBuf::from),
    };
    match resolved {
        None => Ok(SuiteConfig::default()),
        Some(p) => {
            let text = std::fs::read_to_string(&p)
                .with_context(|| format!("reading config {}", p.display()))?;
            let cfg: SuiteConfig = serde_json::from_str(&text)
                .with_context(|| format!("parsing config {}", p.display()))?;
            Ok(cfg)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads > 0 {
        if let Err(err) = phaseq_core::set_worker_threads(cli.threads) {
            eprintln!("error: {err}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(0) => ExitCode::SUCCESS,
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
