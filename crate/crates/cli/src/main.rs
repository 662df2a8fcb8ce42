//! `opclt` — command-line interface to the operator central-limit toolkit.
//!
//! Subcommands: `hermite` (polynomial tables), `kmatrix` (operator tables
//! against a measure), `clt` (finite-N coefficients, limits, convergence),
//! `gauss` (centered Gaussian operators and kernels), `hyper`
//! (hypercontractivity checks). Reports are JSON by default; tabular
//! commands can emit CSV. Exit codes: 0 success, 1 validation failure,
//! 2 usage error.

mod emit;
mod parse;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use opclt::algebra::float::C64Parts;
use opclt::algebra::{ComplexScalar, Scalar};
use opclt::clt;
use opclt::gaussian;
use opclt::hermite;
use opclt::hyper::{self, ExponentPair, GridSpec};
use opclt::measures::Measure;
use opclt::operators::{self, KMatrix, OperatorInput};

use emit::{csv_float, print_json};
use parse::{parse_c64, parse_exact_or_float, read_json_file, CliError};

#[derive(Parser)]
#[command(name = "opclt", version, about = "operator central-limit toolkit", max_term_width = 100)]
struct Cli {
    /// Output format (tabular commands support csv)
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Seed recorded in report headers and used by randomized scans
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Hermite polynomial tables
    Hermite {
        #[command(subcommand)]
        cmd: HermiteCmd,
    },
    /// K-matrix of an operator against a measure
    Kmatrix(KmatrixArgs),
    /// Tensorized coefficients: finite-N values, limits, convergence
    Clt {
        #[command(subcommand)]
        cmd: CltCmd,
    },
    /// Centered Gaussian operators and their kernels
    Gauss {
        #[command(subcommand)]
        cmd: GaussCmd,
    },
    /// Hypercontractivity checks
    Hyper {
        #[command(subcommand)]
        cmd: HyperCmd,
    },
}

#[derive(Subcommand)]
enum HermiteCmd {
    /// Print H_0..H_L with exact coefficients and values at zero
    Table {
        #[arg(long)]
        max: usize,
    },
}

#[derive(Args)]
struct KmatrixArgs {
    /// Measure file (JSON)
    #[arg(long)]
    measure: PathBuf,
    /// Operator file (JSON)
    #[arg(long)]
    operator: PathBuf,
    /// Degree cutoff of the table
    #[arg(long, default_value_t = 8)]
    cutoff: usize,
}

#[derive(Args)]
struct KmSource {
    /// Measure file (JSON); use together with --operator
    #[arg(long, requires = "operator", conflicts_with = "kmatrix")]
    measure: Option<PathBuf>,
    /// Operator file (JSON); use together with --measure
    #[arg(long, requires = "measure")]
    operator: Option<PathBuf>,
    /// Precomputed K-matrix file (JSON), as emitted by `opclt kmatrix`
    #[arg(long)]
    kmatrix: Option<PathBuf>,
    /// Degree cutoff when building the K-matrix from measure + operator
    #[arg(long, default_value_t = 8)]
    cutoff: usize,
}

impl KmSource {
    fn load(&self) -> Result<KMatrix, CliError> {
        match (&self.measure, &self.operator, &self.kmatrix) {
            (Some(m), Some(o), None) => {
                if self.cutoff < 2 {
                    return Err(CliError::Usage(
                        "--cutoff must be at least 2 (K[0][2] is needed)".into(),
                    ));
                }
                let mu: Measure = read_json_file(m)?;
                let op: OperatorInput = read_json_file(o)?;
                let spec = op.materialize(&mu, self.cutoff).map_err(CliError::validation)?;
                operators::k_matrix(&spec, &mu, self.cutoff).map_err(CliError::validation)
            }
            (None, None, Some(k)) => read_json_file(k),
            _ => Err(CliError::Usage(
                "provide either --measure with --operator, or --kmatrix".into(),
            )),
        }
    }
}

#[derive(Subcommand)]
enum CltCmd {
    /// Closed-form limit coefficients and the identified operator parameters
    Limit {
        #[command(flatten)]
        source: KmSource,
        /// Table extends over l, m <= lmax
        #[arg(long, default_value_t = 6)]
        lmax: usize,
    },
    /// Exact finite-N coefficient table
    FiniteN {
        #[command(flatten)]
        source: KmSource,
        #[arg(long = "N")]
        n: u64,
        #[arg(long, default_value_t = 6)]
        lmax: usize,
    },
    /// Finite-N values against the limit for a list of N
    Converge {
        #[command(flatten)]
        source: KmSource,
        #[arg(long)]
        l: usize,
        #[arg(long)]
        m: usize,
        /// Comma-separated list, e.g. 10,100,1000,10000
        #[arg(long = "Ns", value_delimiter = ',')]
        ns: Vec<u64>,
    },
}

#[derive(Subcommand)]
enum GaussCmd {
    /// Kernel parameters (A, B, C, D) of M_tau T_omega S_lambda
    Kernel {
        #[arg(long, allow_hyphen_values = true)]
        tau: String,
        #[arg(long, allow_hyphen_values = true)]
        omega: String,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
    },
    /// Apply the operator to a polynomial and evaluate at a point
    Apply {
        /// Parameters "tau,omega,lambda" (rational-complex or float literals)
        #[arg(long, allow_hyphen_values = true)]
        params: String,
        /// Coefficients, lowest degree first, e.g. "-1,0,1" for x^2-1
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
        /// Evaluation point (complex literal or "re,im")
        #[arg(long, allow_hyphen_values = true)]
        at: String,
    },
}

#[derive(Subcommand)]
enum HyperCmd {
    /// Epperson's condition over a grid of omega values
    Epperson {
        #[arg(long)]
        p: f64,
        #[arg(long)]
        q: f64,
        /// Grid "re0,re1,im0,im1,steps"
        #[arg(long = "omega-grid", allow_hyphen_values = true)]
        omega_grid: String,
    },
    /// Contraction ratio scan for K_omega on the two-point space
    TwoPoint {
        #[arg(long)]
        p: f64,
        #[arg(long)]
        q: f64,
        /// Defaults to i*sqrt(p-1)
        #[arg(long, allow_hyphen_values = true)]
        omega: Option<String>,
        /// Scan grid "re0,re1,im0,im1,steps" for the test-function parameter
        #[arg(long, allow_hyphen_values = true)]
        grid: Option<String>,
    },
    /// End-to-end transference pipeline report
    Transfer {
        #[arg(long)]
        measure: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        omega: String,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        q: f64,
    },
}

fn main() -> ExitCode {
    opclt::init_parallelism_from_env();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            eprintln!("run `opclt --help` for usage");
            ExitCode::from(2)
        }
        Err(CliError::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn format_or(
    cli_format: Option<Format>,
    default: Format,
    supports_csv: bool,
) -> Result<Format, CliError> {
    let f = cli_format.unwrap_or(default);
    if f == Format::Csv && !supports_csv {
        return Err(CliError::Usage("this command does not support --format csv".into()));
    }
    Ok(f)
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Hermite { cmd: HermiteCmd::Table { max } } => {
            format_or(cli.format, Format::Json, false)?;
            hermite_table_report(max)
        }
        Command::Kmatrix(args) => {
            format_or(cli.format, Format::Json, false)?;
            let source = KmSource {
                measure: Some(args.measure),
                operator: Some(args.operator),
                kmatrix: None,
                cutoff: args.cutoff,
            };
            let km = source.load()?;
            print_json(&km);
            Ok(())
        }
        Command::Clt { cmd } => match cmd {
            CltCmd::Limit { source, lmax } => {
                format_or(cli.format, Format::Json, false)?;
                let km = source.load()?;
                limit_report(&km, lmax)
            }
            CltCmd::FiniteN { source, n, lmax } => {
                format_or(cli.format, Format::Json, false)?;
                let km = source.load()?;
                finite_n_report(&km, n, lmax)
            }
            CltCmd::Converge { source, l, m, ns } => {
                let fmt = format_or(cli.format, Format::Csv, true)?;
                let km = source.load()?;
                converge_report(&km, l, m, &ns, fmt)
            }
        },
        Command::Gauss { cmd } => match cmd {
            GaussCmd::Kernel { tau, omega, lambda } => {
                format_or(cli.format, Format::Json, false)?;
                kernel_report(&tau, &omega, &lambda)
            }
            GaussCmd::Apply { params, poly, at } => {
                format_or(cli.format, Format::Json, false)?;
                apply_report(&params, &poly, &at)
            }
        },
        Command::Hyper { cmd } => match cmd {
            HyperCmd::Epperson { p, q, omega_grid } => {
                let fmt = format_or(cli.format, Format::Csv, true)?;
                epperson_report(p, q, &omega_grid, fmt)
            }
            HyperCmd::TwoPoint { p, q, omega, grid } => {
                format_or(cli.format, Format::Json, false)?;
                two_point_report(p, q, omega.as_deref(), grid.as_deref(), cli.seed)
            }
            HyperCmd::Transfer { measure, omega, p, q } => {
                format_or(cli.format, Format::Json, false)?;
                transfer_report(&measure, &omega, p, q, cli.seed)
            }
        },
    }
}

// --- reports ----------------------------------------------------------------

fn hermite_table_report(max: usize) -> Result<(), CliError> {
    #[derive(Serialize)]
    struct Row {
        l: usize,
        coeffs: Vec<ComplexScalar>,
        display: String,
        at_zero: String,
    }
    #[derive(Serialize)]
    struct Report {
        command: &'static str,
        max: usize,
        rows: Vec<Row>,
    }
    let rows = hermite::hermite_table(max)
        .into_iter()
        .enumerate()
        .map(|(l, h)| Row {
            display: h.to_string(),
            coeffs: h.coeffs().to_vec(),
            at_zero: hermite::hermite_at_zero(l).to_string(),
            l,
        })
        .collect();
    print_json(&Report { command: "hermite table", max, rows });
    Ok(())
}

fn limit_report(km: &KMatrix, lmax: usize) -> Result<(), CliError> {
    #[derive(Serialize)]
    struct Report<'a> {
        command: &'static str,
        k02: &'a ComplexScalar,
        k20: &'a ComplexScalar,
        k11: &'a ComplexScalar,
        params: clt::GaussianParams,
        table: clt::CoefficientTable,
    }
    let (k02, k20, k11) = (km.entry(0, 2), km.entry(2, 0), km.entry(1, 1));
    let params = clt::solve_params(k02, k20, k11).map_err(CliError::validation)?;
    let table = clt::limit_table(km, lmax).map_err(CliError::validation)?;
    print_json(&Report { command: "clt limit", k02, k20, k11, params, table });
    Ok(())
}

fn finite_n_report(km: &KMatrix, n: u64, lmax: usize) -> Result<(), CliError> {
    #[derive(Serialize)]
    struct Report {
        command: &'static str,
        n: u64,
        table: clt::CoefficientTable,
    }
    if n == 0 {
        return Err(CliError::Usage("--N must be at least 1".into()));
    }
    let table = clt::finite_n_table(km, lmax, n).map_err(CliError::validation)?;
    print_json(&Report { command: "clt finite-n", n, table });
    Ok(())
}

fn converge_report(
    km: &KMatrix,
    l: usize,
    m: usize,
    ns: &[u64],
    fmt: Format,
) -> Result<(), CliError> {
    if ns.is_empty() {
        return Err(CliError::Usage("--Ns needs at least one value".into()));
    }
    if ns.contains(&0) {
        return Err(CliError::Usage("every N in --Ns must be at least 1".into()));
    }
    let rows = clt::convergence_table(km, l, m, ns).map_err(CliError::validation)?;
    match fmt {
        Format::Csv => {
            println!("N,re(cN),im(cN),abs_err");
            for row in &rows {
                let v = row.value.to_c64();
                println!(
                    "{},{},{},{}",
                    row.n,
                    csv_float(v.re),
                    csv_float(v.im),
                    csv_float(row.abs_err)
                );
            }
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Report<'a> {
                command: &'static str,
                l: usize,
                m: usize,
                rows: &'a [clt::ConvergenceRow],
            }
            print_json(&Report { command: "clt converge", l, m, rows: &rows });
        }
    }
    Ok(())
}

fn parse_params_triple(s: &str) -> Result<clt::GaussianParams, CliError> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(CliError::Usage(format!(
            "--params expects \"tau,omega,lambda\", got {s:?}"
        )));
    }
    let tau = parse_exact_or_float(parts[0])?;
    let omega = parse_exact_or_float(parts[1])?;
    let lambda = parse_exact_or_float(parts[2])?;
    clt::GaussianParams::new(tau, omega, lambda).map_err(CliError::validation)
}

fn kernel_report(tau: &str, omega: &str, lambda: &str) -> Result<(), CliError> {
    #[derive(Serialize)]
    struct Report {
        command: &'static str,
        params: clt::GaussianParams,
        kernel: gaussian::GaussianKernelParams,
    }
    let params = clt::GaussianParams::new(
        parse_exact_or_float(tau)?,
        parse_exact_or_float(omega)?,
        parse_exact_or_float(lambda)?,
    )
    .map_err(CliError::validation)?;
    let kernel = gaussian::kernel_params(&params).map_err(CliError::validation)?;
    print_json(&Report { command: "gauss kernel", params, kernel });
    Ok(())
}

fn apply_report(params: &str, poly: &str, at: &str) -> Result<(), CliError> {
    #[derive(Serialize)]
    struct Report {
        command: &'static str,
        params: clt::GaussianParams,
        poly: Vec<ComplexScalar>,
        prefactor: Scalar,
        tau: Scalar,
        image_poly: Vec<Scalar>,
        at: C64Parts,
        value: C64Parts,
    }
    let gp = parse_params_triple(params)?;
    let coeffs: Vec<ComplexScalar> = poly
        .split(',')
        .map(|c| {
            c.trim()
                .parse::<ComplexScalar>()
                .map_err(|e| CliError::Usage(format!("bad --poly coefficient {c:?}: {e}")))
        })
        .collect::<Result<_, _>>()?;
    let f = opclt::Polynomial::new(coeffs.clone());
    let image = gaussian::apply_c(&gp, &f);
    let x = parse_c64(at)?;
    let value = image.eval_c64(x);
    let image_poly = match image.poly() {
        gaussian::PolyPart::Exact(p) => p.coeffs().iter().cloned().map(Scalar::Exact).collect(),
        gaussian::PolyPart::Float(v) => v.iter().copied().map(Scalar::Float).collect(),
    };
    print_json(&Report {
        command: "gauss apply",
        prefactor: image.prefactor(),
        tau: image.tau().clone(),
        params: gp,
        poly: coeffs,
        image_poly,
        at: x.into(),
        value: value.into(),
    });
    Ok(())
}

fn parse_grid_spec(s: &str) -> Result<(f64, f64, f64, f64, usize), CliError> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 5 {
        return Err(CliError::Usage(format!(
            "grid expects \"re0,re1,im0,im1,steps\", got {s:?}"
        )));
    }
    let f = |i: usize| -> Result<f64, CliError> {
        parts[i]
            .trim()
            .parse::<f64>()
            .map_err(|_| CliError::Usage(format!("bad grid number {:?}", parts[i])))
    };
    let steps = parts[4]
        .trim()
        .parse::<usize>()
        .map_err(|_| CliError::Usage(format!("bad grid step count {:?}", parts[4])))?;
    if steps < 2 {
        return Err(CliError::Usage("grid needs at least 2 steps per axis".into()));
    }
    Ok((f(0)?, f(1)?, f(2)?, f(3)?, steps))
}

fn epperson_report(p: f64, q: f64, omega_grid: &str, fmt: Format) -> Result<(), CliError> {
    let pq = ExponentPair::new(p, q).map_err(CliError::validation)?;
    let (re0, re1, im0, im1, steps) = parse_grid_spec(omega_grid)?;
    let dre = (re1 - re0) / (steps - 1) as f64;
    let dim = (im1 - im0) / (steps - 1) as f64;
    let mut rows = Vec::with_capacity(steps * steps);
    for i in 0..steps {
        for j in 0..steps {
            let omega = Complex64::new(re0 + dre * i as f64, im0 + dim * j as f64);
            let r = hyper::epperson_ok(&pq, omega);
            rows.push((omega, r));
        }
    }
    match fmt {
        Format::Csv => {
            println!("re,im,slack,ok");
            for (omega, r) in &rows {
                println!(
                    "{},{},{},{}",
                    csv_float(omega.re),
                    csv_float(omega.im),
                    csv_float(r.slack),
                    r.ok
                );
            }
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Row {
                omega: C64Parts,
                slack: f64,
                ok: bool,
            }
            #[derive(Serialize)]
            struct Report {
                command: &'static str,
                p: f64,
                q: f64,
                rows: Vec<Row>,
            }
            print_json(&Report {
                command: "hyper epperson",
                p,
                q,
                rows: rows
                    .into_iter()
                    .map(|(omega, r)| Row { omega: omega.into(), slack: r.slack, ok: r.ok })
                    .collect(),
            });
        }
    }
    Ok(())
}

fn two_point_report(
    p: f64,
    q: f64,
    omega: Option<&str>,
    grid: Option<&str>,
    seed: u64,
) -> Result<(), CliError> {
    #[derive(Serialize)]
    struct Report {
        command: &'static str,
        seed: u64,
        p: f64,
        q: f64,
        omega: C64Parts,
        grid: GridSpec,
        epperson: hyper::EppersonResult,
        scan: hyper::ScanResult,
    }
    let pq = ExponentPair::new(p, q).map_err(CliError::validation)?;
    let omega = match omega {
        Some(s) => parse_c64(s)?,
        None => Complex64::new(0.0, (p - 1.0).max(0.0).sqrt()),
    };
    let grid = match grid {
        Some(s) => {
            let (re0, re1, im0, im1, steps) = parse_grid_spec(s)?;
            GridSpec { re_range: (re0, re1), im_range: (im0, im1), steps }
        }
        None => GridSpec::default(),
    };
    let scan = hyper::two_point_ratio_scan(&pq, omega, &grid).map_err(CliError::validation)?;
    let epperson = hyper::epperson_ok(&pq, omega);
    print_json(&Report {
        command: "hyper two-point",
        seed,
        p,
        q,
        omega: omega.into(),
        grid,
        epperson,
        scan,
    });
    Ok(())
}

fn transfer_report(
    measure: &Path,
    omega: &str,
    p: f64,
    q: f64,
    seed: u64,
) -> Result<(), CliError> {
    #[derive(Serialize)]
    struct Report {
        command: &'static str,
        seed: u64,
        report: hyper::TransferenceReport,
    }
    let mu: Measure = read_json_file(measure)?;
    let pq = ExponentPair::new(p, q).map_err(CliError::validation)?;
    let omega = parse_c64(omega)?;
    let report = hyper::transference_demo(&mu, omega, &pq).map_err(CliError::validation)?;
    print_json(&Report { command: "hyper transfer", seed, report });
    Ok(())
}
