//! `hankelid` command-line front end.
//!
//! Exit codes: 0 success or informative, 1 checked and negative, 2 I/O or
//! data error, 64 usage error. `HANKELID_TOL` overrides the rank tolerance.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use hankelid::io::{self, DataFormat};
use hankelid::numerics::mat_to_rows;
use hankelid::{
    check_fixed_order, check_fundamental_lemma, check_main, identify_minimal, invariants,
    lag_bounds, Error, IOTrajectory, IsoSystem, Mat, PriorBounds, SizeCaps, Tolerance, Vector,
};

#[derive(Parser)]
#[command(name = "hankelid", version, about = "Identify linear systems from one input-output trajectory")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Relative singular-value threshold for rank decisions [env: HANKELID_TOL].
    #[arg(long, global = true)]
    rank_tol: Option<f64>,

    /// Absolute threshold for residual checks.
    #[arg(long, global = true)]
    residual_tol: Option<f64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Main,
    Pe,
    Fixed,
}

#[derive(Subcommand)]
enum Command {
    /// Rank increments, lag and state dimension lower bounds of the data.
    Invariants {
        #[arg(long)]
        data: PathBuf,
        /// Use only the first T samples.
        #[arg(long)]
        prefix: Option<usize>,
    },
    /// Construct a minimal explaining system.
    Identify {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        prefix: Option<usize>,
    },
    /// Decide whether the data are informative for system identification.
    Check {
        #[arg(long)]
        data: PathBuf,
        #[arg(long, default_value_t = 0)]
        lminus: usize,
        #[arg(long)]
        lplus: usize,
        #[arg(long, default_value_t = 0)]
        nminus: usize,
        #[arg(long)]
        nplus: usize,
        #[arg(long)]
        prefix: Option<usize>,
        /// `fixed` reads the true lag and state dimension from --lplus and --nplus.
        #[arg(long, value_enum, default_value_t = Method::Main)]
        method: Method,
    },
    /// Simulate a system from an initial state.
    Simulate {
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        input: PathBuf,
        /// Comma-separated initial state; empty for a memoryless system.
        #[arg(long, allow_hyphen_values = true, default_value = "")]
        x0: String,
        /// Output file; CSV unless it ends in .json. Defaults to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Test whether two systems differ only by a change of state coordinates.
    Isomorphic {
        #[arg(long)]
        sys1: PathBuf,
        #[arg(long)]
        sys2: PathBuf,
    },
    /// Randomised checks of the invariant bounds and informativity theory.
    Harness {
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = SizeCaps::default().max_n)]
        max_n: usize,
        #[arg(long, default_value_t = SizeCaps::default().max_m)]
        max_m: usize,
        #[arg(long, default_value_t = SizeCaps::default().max_p)]
        max_p: usize,
        #[arg(long, default_value_t = SizeCaps::default().max_t)]
        max_t: usize,
    },
}

enum Failure {
    Usage(String),
    Data(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidBounds(_) => Failure::Usage(e.to_string()),
            _ => Failure::Data(e.to_string()),
        }
    }
}

/// `Ok(true)` maps to exit 0, `Ok(false)` to exit 1.
type Outcome = std::result::Result<bool, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(64) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(64)
        }
        Err(Failure::Data(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

/// `--rank-tol` wins over `HANKELID_TOL`, which wins over the default.
fn tolerance(cli: &Cli) -> std::result::Result<Tolerance, Failure> {
    let base = Tolerance::default();
    let env = match std::env::var("HANKELID_TOL") {
        Ok(v) => Some(v.trim().parse::<f64>().map_err(|_| {
            Failure::Usage(format!("HANKELID_TOL must be a number, got \"{v}\""))
        })?),
        Err(_) => None,
    };
    Tolerance::new(
        cli.rank_tol.or(env).unwrap_or(base.rank_rel),
        cli.residual_tol.unwrap_or(base.residual_abs),
    )
    .map_err(|e| Failure::Usage(e.to_string()))
}

fn run(cli: Cli) -> Outcome {
    let tol = tolerance(&cli)?;
    let fmt = cli.format;
    match &cli.command {
        Command::Invariants { data, prefix } => cmd_invariants(&load(data, *prefix)?, fmt, &tol),
        Command::Identify { data, prefix } => cmd_identify(&load(data, *prefix)?, fmt, &tol),
        Command::Check { data, lminus, lplus, nminus, nplus, prefix, method } => {
            let bounds = PriorBounds::new(*lminus, *lplus, *nminus, *nplus)
                .map_err(|e| Failure::Usage(e.to_string()))?;
            cmd_check(&load(data, *prefix)?, &bounds, *method, fmt, &tol)
        }
        Command::Simulate { system, input, x0, out } => {
            cmd_simulate(system, input, x0, out.as_deref(), fmt)
        }
        Command::Isomorphic { sys1, sys2 } => cmd_isomorphic(sys1, sys2, fmt, &tol),
        Command::Harness { trials, seed, max_n, max_m, max_p, max_t } => {
            let caps = SizeCaps { max_n: *max_n, max_m: *max_m, max_p: *max_p, max_t: *max_t };
            if caps.max_n == 0 || caps.max_m == 0 || caps.max_p == 0 || caps.max_t < 2 {
                return Err(Failure::Usage("size caps must be positive, --max-t at least 2".into()));
            }
            cmd_harness(*trials, caps, *seed, fmt, &tol)
        }
    }
}

fn load(path: &Path, prefix: Option<usize>) -> std::result::Result<IOTrajectory, Failure> {
    if prefix == Some(0) {
        return Err(Failure::Usage("--prefix must be at least 1".into()));
    }
    let traj = io::load_trajectory(path, DataFormat::from_path(path))?;
    match prefix {
        Some(t) => Ok(traj.prefix(t)?),
        None => Ok(traj),
    }
}

fn emit(fmt: Format, value: &Value, text: impl FnOnce() -> String) {
    match fmt {
        Format::Json => println!("{}", serde_json::to_string_pretty(value).expect("plain JSON")),
        Format::Text => print!("{}", text()),
    }
}

fn cmd_invariants(traj: &IOTrajectory, fmt: Format, tol: &Tolerance) -> Outcome {
    let inv = invariants(traj, tol);
    let mut value = serde_json::to_value(&inv).expect("plain JSON");
    value["T"] = json!(traj.len());
    emit(fmt, &value, || {
        let mut s = String::from("T");
        for k in -1..inv.delta.len() as isize - 1 {
            write!(s, "\tδ{k}").unwrap();
        }
        s.push_str("\tℓ\tn\n");
        write!(s, "{}", traj.len()).unwrap();
        for d in &inv.delta {
            write!(s, "\t{d}").unwrap();
        }
        writeln!(s, "\t{}\t{}", inv.l_min, inv.n_min).unwrap();
        s
    });
    Ok(true)
}

fn matrix_text(name: &str, m: &Mat) -> String {
    let mut s = format!("{name} ({}x{}):\n", m.nrows(), m.ncols());
    if m.ncols() == 0 {
        return s;
    }
    for row in mat_to_rows(m) {
        let cells: Vec<String> = row.iter().map(|v| format!("{:>12.6}", v + 0.0)).collect();
        writeln!(s, "  {}", cells.join(" ")).unwrap();
    }
    s
}

fn system_text(sys: &IsoSystem) -> String {
    [("A", sys.a()), ("B", sys.b()), ("C", sys.c()), ("D", sys.d())]
        .iter()
        .map(|(name, m)| matrix_text(name, m))
        .collect()
}

fn cmd_identify(traj: &IOTrajectory, fmt: Format, tol: &Tolerance) -> Outcome {
    let res = identify_minimal(traj, tol)?;
    let value = json!({
        "T": traj.len(),
        "n": res.system.n(),
        "lag": res.system.lag(tol),
        "residual": res.residual,
        "system": io::system_to_json(&res.system),
    });
    emit(fmt, &value, || {
        format!(
            "T = {}, n = {}, lag = {}, residual = {:.3e}\n{}",
            traj.len(),
            res.system.n(),
            res.system.lag(tol),
            res.residual,
            system_text(&res.system)
        )
    });
    Ok(true)
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn cmd_check(
    traj: &IOTrajectory,
    bounds: &PriorBounds,
    method: Method,
    fmt: Format,
    tol: &Tolerance,
) -> Outcome {
    let t = traj.len();
    let lb = lag_bounds(&invariants(traj, tol), bounds);
    let header = "T\tL-\tL+\tN-\tN+\tL_d\tL_a\tinformative\n";
    let row = |verdict: bool| {
        format!(
            "{header}{t}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
            bounds.l_minus,
            bounds.l_plus,
            bounds.n_minus,
            bounds.n_plus,
            lb.l_d,
            lb.l_a,
            yes_no(verdict)
        )
    };
    match method {
        Method::Main => {
            let v = check_main(traj, bounds, tol);
            let mut value = serde_json::to_value(&v).expect("plain JSON");
            value["T"] = json!(t);
            value["method"] = json!("main");
            emit(fmt, &value, || row(v.informative));
            Ok(v.informative)
        }
        Method::Pe => {
            let v = check_fundamental_lemma(traj, bounds, tol);
            let mut value = serde_json::to_value(v).expect("plain JSON");
            value["T"] = json!(t);
            value["method"] = json!("pe");
            emit(fmt, &value, || row(v.concluded_informative));
            Ok(v.concluded_informative)
        }
        Method::Fixed => {
            let (l, n) = (bounds.l_plus, bounds.n_plus);
            let ok = check_fixed_order(traj, l, n, tol);
            let value = json!({ "T": t, "method": "fixed", "lag": l, "n": n, "informative": ok });
            emit(fmt, &value, || {
                format!("T\tℓ\tn\tinformative\n{t}\t{l}\t{n}\t{}\n", yes_no(ok))
            });
            Ok(ok)
        }
    }
}

fn parse_x0(text: &str) -> std::result::Result<Vector, Failure> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(Vector::zeros(0));
    }
    let vals = text
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|_| Failure::Usage(format!("--x0 must be comma-separated numbers, got \"{text}\"")))?;
    Ok(Vector::from_vec(vals))
}

fn cmd_simulate(system: &Path, input: &Path, x0: &str, out: Option<&Path>, fmt: Format) -> Outcome {
    let x0 = parse_x0(x0)?;
    let sys = io::load_system(system)?;
    let u = io::load_input(input, DataFormat::from_path(input))?;
    let (y, _) = sys.simulate(&x0, &u)?;
    match out {
        Some(path) => {
            let f = std::fs::File::create(path).map_err(|e| Failure::Data(e.to_string()))?;
            io::write_signals(f, &u, &y, DataFormat::from_path(path))?;
        }
        None => {
            let data_fmt = match fmt {
                Format::Json => DataFormat::Json,
                Format::Text => DataFormat::Csv,
            };
            let stdout = std::io::stdout().lock();
            io::write_signals(stdout, &u, &y, data_fmt)?;
            std::io::stdout().flush().map_err(|e| Failure::Data(e.to_string()))?;
        }
    }
    Ok(true)
}

fn cmd_isomorphic(sys1: &Path, sys2: &Path, fmt: Format, tol: &Tolerance) -> Outcome {
    let a = io::load_system(sys1)?;
    let b = io::load_system(sys2)?;
    let (iso, transform, residual) = if a.m() != b.m() || a.p() != b.p() {
        (false, None, None)
    } else {
        let r = a.is_isomorphic(&b, tol)?;
        (r.isomorphic, r.transform, Some(r.residual))
    };
    let value = json!({
        "isomorphic": iso,
        "transform": transform.as_ref().map(mat_to_rows),
        "residual": residual,
    });
    emit(fmt, &value, || {
        let mut s = format!("isomorphic: {}\n", yes_no(iso));
        if let Some(r) = residual {
            writeln!(s, "residual: {r:.3e}").unwrap();
        }
        if let Some(t) = &transform {
            s.push_str(&matrix_text("S", t));
        }
        s
    });
    Ok(iso)
}

fn cmd_harness(trials: usize, caps: SizeCaps, seed: u64, fmt: Format, tol: &Tolerance) -> Outcome {
    let report = hankelid::harness(trials, caps, seed, tol);
    let clean = report.violations.total() == 0;
    let value = serde_json::to_value(&report).expect("plain JSON");
    emit(fmt, &value, || {
        let v = &report.violations;
        let s = &report.stats;
        let mut out = format!("trials: {}  seed: {}  violations: {}\n", report.trials, report.seed, v.total());
        for (name, count) in [
            ("rho_below_delta", v.rho_below_delta),
            ("lag_exceeds_true", v.lag_exceeds_true),
            ("state_bound", v.state_bound),
            ("identification", v.identification),
            ("informative_wrong_order", v.informative_wrong_order),
            ("informative_not_isomorphic", v.informative_not_isomorphic),
            ("pe_without_main", v.pe_without_main),
            ("witness_failed", v.witness_failed),
        ] {
            writeln!(out, "  {name:<28}{count}").unwrap();
        }
        writeln!(out, "informative: {}  pe concluded: {}  skipped: {}", s.informative, s.pe_concluded, s.skipped).unwrap();
        out
    });
    Ok(clean)
}
