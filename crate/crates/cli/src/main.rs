//! `anharm`: spectra, partition functions, coupling sweeps, figure data and
//! the validation suite from the command line.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use anharm::report::{self, Format, Table};
use anharm::sweep::{self, DEFAULT_ORACLE_TOL};
use anharm::validation::{self, ValidationConfig, FIGURE_G_COUNT, FIGURE_G_START, FIGURE_G_STOP};
use anharm::OscillatorParams;

#[derive(Parser)]
#[command(name = "anharm", version, about = "Model energy levels and partition function of x^(2m) anharmonic oscillators")]
struct Cli {
    /// Worker threads for sweeps (0 = all cores).
    #[arg(long, env = "ANHARM_THREADS", default_value_t = 0, global = true)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Model and oracle levels at one coupling or over a coupling grid.
    Spectrum(LevelArgs),
    /// Model partition function over a temperature grid.
    Zeval(ZArgs),
    /// Model and oracle levels over a log-spaced coupling grid.
    Sweep(LevelArgs),
    /// Figure data: one CSV per anharmonicity with model and oracle columns.
    Figure(FigureArgs),
    /// Run the acceptance checks and print a pass/fail table.
    Validate(ValidateArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Csv,
    Json,
}

impl From<OutFormat> for Format {
    fn from(f: OutFormat) -> Self {
        match f {
            OutFormat::Csv => Format::Csv,
            OutFormat::Json => Format::Json,
        }
    }
}

#[derive(Args, Clone)]
struct GridArgs {
    /// Single coupling (overrides the grid).
    #[arg(long)]
    g: Option<f64>,
    #[arg(long, default_value_t = FIGURE_G_START)]
    g_start: f64,
    #[arg(long, default_value_t = FIGURE_G_STOP)]
    g_stop: f64,
    #[arg(long, default_value_t = FIGURE_G_COUNT)]
    g_count: usize,
}

impl GridArgs {
    fn couplings(&self) -> anharm::Result<Vec<f64>> {
        match self.g {
            Some(g) => Ok(vec![g]),
            None => sweep::log_grid(self.g_start, self.g_stop, self.g_count),
        }
    }
}

#[derive(Args, Clone)]
struct SolverArgs {
    #[arg(long, default_value_t = 1.0)]
    omega: f64,
    #[arg(long, default_value_t = 8)]
    n_max: usize,
    #[arg(long, default_value_t = 12)]
    truncation: usize,
    #[arg(long, default_value_t = DEFAULT_ORACLE_TOL)]
    oracle_tol: f64,
}

#[derive(Args)]
struct LevelArgs {
    #[arg(long)]
    m: u32,
    #[command(flatten)]
    grid: GridArgs,
    #[command(flatten)]
    solver: SolverArgs,
    /// Output file (stdout if absent).
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutFormat::Csv)]
    format: OutFormat,
}

#[derive(Args)]
struct ZArgs {
    #[arg(long)]
    m: u32,
    #[arg(long, default_value_t = 1.0)]
    omega: f64,
    #[arg(long)]
    g: f64,
    /// Single inverse temperature (overrides the grid).
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long, default_value_t = 0.1)]
    beta_start: f64,
    #[arg(long, default_value_t = 50.0)]
    beta_stop: f64,
    #[arg(long, default_value_t = 20)]
    beta_count: usize,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutFormat::Csv)]
    format: OutFormat,
}

#[derive(Args)]
struct FigureArgs {
    /// Anharmonicities to plot; repeat for several (default 2, 3 and 4).
    #[arg(long, num_args = 1..)]
    m: Vec<u32>,
    #[command(flatten)]
    grid: GridArgs,
    #[command(flatten)]
    solver: SolverArgs,
    /// Directory receiving fig_<kind>.csv.
    #[arg(long, default_value = ".")]
    output: PathBuf,
}

#[derive(Args)]
struct ValidateArgs {
    /// Harmonic limit, Q polynomials and series consistency only.
    #[arg(long)]
    quick: bool,
    #[arg(long, default_value_t = DEFAULT_ORACLE_TOL)]
    oracle_tol: f64,
    /// Keep the figure CSVs produced by the figure check here.
    #[arg(long)]
    figure_dir: Option<PathBuf>,
    /// Write the report as JSON to this file as well.
    #[arg(long)]
    output: Option<PathBuf>,
}

type Outcome = Result<bool, String>;

fn emit(text: &str, output: Option<&PathBuf>) -> Result<(), String> {
    match output {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| e.to_string()),
    }
}

fn levels(args: &LevelArgs) -> Outcome {
    let s = &args.solver;
    let couplings = args.grid.couplings().map_err(|e| e.to_string())?;
    OscillatorParams::new(s.omega, 0.0, args.m).map_err(|e| e.to_string())?;
    let rows = sweep::level_table(args.m, s.omega, &couplings, s.n_max, s.truncation, s.oracle_tol);
    let pairs: Vec<_> = couplings.iter().cloned().zip(rows.iter()).collect();
    let max_basis = rows.iter().flatten().map(|r| r.oracle_basis).max().unwrap_or(0);
    let table: Table = report::level_table(&pairs, args.m, s.omega)
        .meta("tool", format!("anharm {}", report::TOOL_VERSION))
        .meta("m", args.m)
        .meta("omega", s.omega)
        .meta("n_max", s.n_max)
        .meta("truncation", s.truncation)
        .meta("oracle_tol", format!("{:e}", s.oracle_tol))
        .meta("oracle_max_basis", max_basis);
    emit(&table.render(args.format.into()).map_err(|e| e.to_string())?, args.output.as_ref())?;

    let mut ok = true;
    let mut worst = 0.0f64;
    for (g, row) in &pairs {
        match row {
            Ok(r) => {
                worst = worst.max(r.max_abs_rel_err());
                if !r.oracle_converged {
                    ok = false;
                    eprintln!("g = {g}: oracle not converged (drift {:e})", r.oracle_drift);
                }
            }
            Err(e) => {
                ok = false;
                eprintln!("g = {g}: {e}");
            }
        }
    }
    eprintln!("max |rel_err| over {} coupling(s): {:.3e}", couplings.len(), worst);
    Ok(ok)
}

fn zeval(args: &ZArgs) -> Outcome {
    let p = OscillatorParams::new(args.omega, args.g, args.m).map_err(|e| e.to_string())?;
    let betas = match args.beta {
        Some(b) => vec![b],
        None => sweep::log_grid(args.beta_start, args.beta_stop, args.beta_count).map_err(|e| e.to_string())?,
    };
    let rows = sweep::z_table(&p, &betas);
    let pairs: Vec<_> = betas.iter().cloned().zip(rows.iter()).collect();
    let table = report::z_table(&pairs)
        .meta("tool", format!("anharm {}", report::TOOL_VERSION))
        .meta("m", args.m)
        .meta("omega", args.omega)
        .meta("g", args.g);
    emit(&table.render(args.format.into()).map_err(|e| e.to_string())?, args.output.as_ref())?;

    let mut ok = true;
    let mut prev_nc = 0.0;
    for (beta, row) in &pairs {
        match row {
            Ok(r) => {
                if r.n_c < 1.0 - 1e-12 || r.n_c < prev_nc {
                    ok = false;
                    eprintln!("beta = {beta}: n_c = {} breaks n_c >= 1 / monotone growth", r.n_c);
                }
                prev_nc = r.n_c;
            }
            Err(e) => {
                ok = false;
                eprintln!("beta = {beta}: {e}");
            }
        }
    }
    Ok(ok)
}

fn figure(args: &FigureArgs) -> Outcome {
    let ms = if args.m.is_empty() { vec![2, 3, 4] } else { args.m.clone() };
    let couplings = args.grid.couplings().map_err(|e| e.to_string())?;
    let s = &args.solver;
    std::fs::create_dir_all(&args.output).map_err(|e| format!("{}: {e}", args.output.display()))?;
    let mut ok = true;
    for m in ms {
        if !(2..=4).contains(&m) {
            return Err(format!("figures exist for m = 2, 3, 4 only (got {m})"));
        }
        let (csv, converged) =
            validation::figure_csv(m, s.omega, &couplings, s.n_max, s.truncation, s.oracle_tol).map_err(|e| e.to_string())?;
        let path = args.output.join(report::figure_file_name(m));
        std::fs::write(&path, csv).map_err(|e| format!("{}: {e}", path.display()))?;
        eprintln!("wrote {}", path.display());
        if !converged {
            eprintln!("m = {m}: some points failed or did not converge; see the status column");
        }
        ok &= converged;
    }
    Ok(ok)
}

fn validate(args: &ValidateArgs) -> Outcome {
    let cfg = ValidationConfig {
        oracle_tol: args.oracle_tol,
        quick: args.quick,
        figure_dir: args.figure_dir.clone(),
    };
    let report = validation::run(&cfg);
    println!("{report}");
    if let Some(path) = &args.output {
        let json = serde_json::to_string_pretty(&report).map_err(|e| e.to_string())?;
        std::fs::write(path, json + "\n").map_err(|e| format!("{}: {e}", path.display()))?;
    }
    Ok(report.all_passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global() {
            eprintln!("error: thread pool: {e}");
            return ExitCode::from(2);
        }
    }
    let outcome = match &cli.command {
        Command::Spectrum(a) | Command::Sweep(a) => levels(a),
        Command::Zeval(a) => zeval(a),
        Command::Figure(a) => figure(a),
        Command::Validate(a) => validate(a),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
