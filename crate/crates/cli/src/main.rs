mod input;

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use moment_hyp::analysis::is_real_diagonalizable;
use moment_hyp::grad13::{assemble_1d, assemble_m1};
use moment_hyp::mod13::{is_hyperbolic, HyperbolicOptions};
use moment_hyp::region::{self, CriterionInput, ScanOptions};
use moment_hyp::{DiagOptions, DiagReport, GradState, GradState1D, ModState, Rational, Scalar};
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::{Map, Value};

use input::{parse_assignment, parse_state_text, rational_string, resolve, System};

#[derive(Parser)]
#[command(name = "moment-hyp", version, about = "Hyperbolicity analysis of 13-moment systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Spectrum and real diagonalizability of the x₁ coefficient matrix at one state.
    Analyze {
        #[arg(value_enum)]
        system: System,
        /// State file, JSON or one `key = value` per line. Missing fields take equilibrium values.
        #[arg(long)]
        state: Option<PathBuf>,
        /// Override one field, e.g. `--set theta12=1/10`. Repeatable.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
        /// Exact rational arithmetic for the diagonalizability decision.
        #[arg(long)]
        exact: bool,
        /// Tolerance on imaginary parts, relative to the spectral radius.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Scan the (η₁, η₂) triangle and write CSV.
    Region {
        #[arg(long, default_value_t = 0.15)]
        eta1_max: f64,
        #[arg(long, default_value_t = 0.15)]
        eta2_max: f64,
        #[arg(long, default_value_t = 400)]
        n1: usize,
        #[arg(long, default_value_t = 400)]
        n2: usize,
        #[arg(long, default_value_t = region::DEFAULT_IMAG_TOL)]
        imag_tol: f64,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Estimate the threshold δ̃ and the resulting C_hyp.
    DeltaMax {
        #[arg(long, default_value_t = region::DEFAULT_BISECTION_TOL)]
        tol: f64,
    },
    /// Check |∇θ| < C_hyp·θ/l_mfp.
    Criterion {
        #[arg(long)]
        grad_theta: f64,
        #[arg(long)]
        theta: f64,
        #[arg(long)]
        l_mfp: f64,
        #[arg(long, default_value_t = 0.095)]
        delta_max: f64,
    },
}

enum CliError {
    Input(String),
    Numeric(String),
    /// Downstream closed stdout (`| head`); not a failure.
    ClosedPipe,
}

impl From<moment_hyp::Error> for CliError {
    fn from(e: moment_hyp::Error) -> Self {
        use moment_hyp::Error::*;
        match e {
            InvalidInput(_) | InvalidState(_) => CliError::Input(e.to_string()),
            NoConvergence { .. } | NotRepresentable(_) | Bracket(_) => CliError::Numeric(e.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        match e.kind() {
            io::ErrorKind::BrokenPipe => CliError::ClosedPipe,
            _ => CliError::Input(e.to_string()),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Serialize)]
struct Certificates {
    annihilation_residual: f64,
    certified: bool,
    witness: Option<String>,
}

#[derive(Serialize)]
struct AnalysisReport {
    system: &'static str,
    exact: bool,
    state: Map<String, Value>,
    eigenvalues: Vec<[f64; 2]>,
    all_real: bool,
    diagonalizable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    eta1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    eta2: Option<f64>,
    /// `η₂ < δ`, the direction-free sufficient condition.
    #[serde(skip_serializing_if = "Option::is_none")]
    within_proven_region: Option<bool>,
    certificates: Certificates,
}

fn vec3<T: Scalar>(v: &std::collections::BTreeMap<&str, T>, prefix: &str) -> [T; 3] {
    std::array::from_fn(|i| v[format!("{prefix}{}", i + 1).as_str()].clone())
}

fn tensor<T: Scalar>(v: &std::collections::BTreeMap<&str, T>) -> [[T; 3]; 3] {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let (a, b) = (i.min(j) + 1, i.max(j) + 1);
            v[format!("theta{a}{b}").as_str()].clone()
        })
    })
}

fn analyze_in<T: Scalar>(
    system: System,
    values: &std::collections::BTreeMap<&'static str, Rational>,
    conv: impl Fn(&Rational) -> T,
    tol: f64,
) -> CliResult<(DiagReport, Option<(f64, f64, bool)>)> {
    let v: std::collections::BTreeMap<&str, T> = values.iter().map(|(k, x)| (*k, conv(x))).collect();
    let diag = DiagOptions::with_imag_tol(tol);
    Ok(match system {
        System::Grad1d => {
            let st = GradState1D::new(v["rho"].clone(), v["u1"].clone(), v["theta11"].clone(), v["theta22"].clone(), v["q1"].clone())?;
            (is_real_diagonalizable(&assemble_1d(&st), &diag)?, None)
        }
        System::Grad3d => {
            let st = GradState::new(v["rho"].clone(), vec3(&v, "u"), tensor(&v), vec3(&v, "q"))?;
            (is_real_diagonalizable(&assemble_m1(&st), &diag)?, None)
        }
        System::Mod13 => {
            let st = ModState::new(v["rho"].clone(), vec3(&v, "u"), tensor(&v), vec3(&v, "s"))?;
            let rep = is_hyperbolic(&st, &HyperbolicOptions { diag, ..HyperbolicOptions::default() })?;
            let extra = (rep.eta.eta1, rep.eta.eta2, rep.within_proven_region);
            (rep.report, Some(extra))
        }
    })
}

fn cmd_analyze(system: System, state: Option<PathBuf>, set: &[String], exact: bool, tol: f64) -> CliResult<String> {
    if !(tol >= 0.0 && tol.is_finite()) {
        return Err(CliError::Input(format!("--tol must be finite and nonnegative, got {tol}")));
    }
    let mut pairs = match &state {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
            parse_state_text(&text).map_err(CliError::Input)?
        }
        None => Vec::new(),
    };
    for s in set {
        pairs.push(parse_assignment(s).map_err(CliError::Input)?);
    }
    let values = resolve(system, &pairs).map_err(CliError::Input)?;
    let (rep, extra) = if exact {
        analyze_in(system, &values, |x| x.clone(), tol)?
    } else {
        analyze_in(system, &values, |x| x.to_f64().unwrap_or(f64::NAN), tol)?
    };
    let state = values
        .iter()
        .map(|(k, x)| {
            let v = if exact {
                Value::String(rational_string(x))
            } else {
                serde_json::Number::from_f64(x.to_f64().unwrap_or(f64::NAN)).map_or(Value::Null, Value::Number)
            };
            (k.to_string(), v)
        })
        .collect();
    let report = AnalysisReport {
        system: system.name(),
        exact,
        state,
        eigenvalues: rep.eigenvalues.sorted().iter().map(|z| [z.re, z.im]).collect(),
        all_real: rep.all_real,
        diagonalizable: rep.diagonalizable,
        eta1: extra.map(|e| e.0),
        eta2: extra.map(|e| e.1),
        within_proven_region: extra.map(|e| e.2),
        certificates: Certificates {
            annihilation_residual: rep.annihilation_residual,
            certified: rep.certified,
            witness: rep.witness,
        },
    };
    Ok(serde_json::to_string_pretty(&report).expect("report serializes"))
}

fn sig17(x: f64) -> String {
    format!("{x:.16e}")
}

fn cmd_region(
    eta1_max: f64,
    eta2_max: f64,
    n1: usize,
    n2: usize,
    imag_tol: f64,
    out: Option<PathBuf>,
) -> CliResult<()> {
    let opts = ScanOptions { imag_tol, ..ScanOptions::default() };
    let grid = region::scan_grid(eta1_max, eta2_max, n1, n2, &opts)?;
    let sink: Box<dyn Write> = match &out {
        Some(path) => Box::new(fs::File::create(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?),
        None => Box::new(io::stdout().lock()),
    };
    let mut w = BufWriter::new(sink);
    writeln!(w, "eta1,eta2,max_imag,resultant,hyperbolic")?;
    for gs in &grid.samples {
        let s = &gs.sample;
        writeln!(w, "{},{},{},{},{}", sig17(s.eta1), sig17(s.eta2), sig17(s.max_imag), sig17(s.resultant), s.hyperbolic)?;
    }
    w.flush()?;
    Ok(())
}

fn cmd_delta_max(tol: f64) -> CliResult<String> {
    let d = region::estimate_delta_max(tol)?;
    let report = serde_json::json!({
        "delta_tilde": d.delta,
        "eta1_at_min": d.eta1_at_min,
        "c_hyp": region::c_hyp(d.delta),
        "s1_zero_edge_positive": d.s1_zero_edge_positive,
        "diagonal_edge_positive": d.diagonal_edge_positive,
        "tol": tol,
    });
    Ok(serde_json::to_string_pretty(&report).expect("report serializes"))
}

fn cmd_criterion(grad_theta: f64, theta: f64, l_mfp: f64, delta_max: f64) -> CliResult<String> {
    let input = CriterionInput { grad_theta_norm: grad_theta, theta, l_mfp, delta_max };
    let r = region::hyperbolicity_criterion(&input)?;
    let report = serde_json::json!({
        "c_hyp": r.c_hyp,
        "satisfied": r.satisfied,
        "threshold": r.c_hyp * theta / l_mfp,
    });
    Ok(serde_json::to_string_pretty(&report).expect("report serializes"))
}

fn configure_threads() -> CliResult<()> {
    let Ok(raw) = std::env::var("MOMENT_HYP_THREADS") else { return Ok(()) };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| CliError::Input(format!("MOMENT_HYP_THREADS must be a nonnegative integer, got {raw:?}")))?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Numeric(e.to_string()))?;
    }
    Ok(())
}

fn run(cli: Cli) -> CliResult<()> {
    configure_threads()?;
    let text = match cli.command {
        Command::Analyze { system, state, set, exact, tol } => cmd_analyze(system, state, &set, exact, tol)?,
        Command::Region { eta1_max, eta2_max, n1, n2, imag_tol, out } => {
            return cmd_region(eta1_max, eta2_max, n1, n2, imag_tol, out)
        }
        Command::DeltaMax { tol } => cmd_delta_max(tol)?,
        Command::Criterion { grad_theta, theta, l_mfp, delta_max } => cmd_criterion(grad_theta, theta, l_mfp, delta_max)?,
    };
    writeln!(io::stdout().lock(), "{text}")?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) | Err(CliError::ClosedPipe) => ExitCode::SUCCESS,
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Numeric(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
