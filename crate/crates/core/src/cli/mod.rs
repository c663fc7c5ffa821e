//! The `degroot` command-line front end.
//!
//! Exit status: 0 success, 1 validation failure or negative verdict,
//! 2 non-convergence or indeterminate verdict, 3 I/O or parse error.

mod files;
mod format;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{ArgAction, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::cycle::{
    cycle_from_pi, cycle_to_matrix, verify_equivalence, CycleSpec, SideReport, Verdict,
};
use crate::digraph::{analyze, digraph_from_matrix, kirchhoff, WeightedDigraph};
use crate::error::Error;
use crate::forests::tree_weight_vector;
use crate::matrix::{
    iterate_opinions, limit_powers, matrix_rank, stationary_vector, validate_stochastic, Matrix,
    ProbabilityVector, StochasticMatrix, DEFAULT_MAX_DOUBLINGS, DEFAULT_PIVOT_TOL, DEFAULT_ROW_TOL,
    DEFAULT_TOL,
};

pub use files::{matrix_text, read_matrix, read_vector, FileError, Format};
pub use format::{human, json_num, sig};

/// Rows of a power limit closer than this count as equal.
pub const ROW_EQUALITY_TOL: f64 = 1e-9;

pub const EXIT_OK: u8 = 0;
pub const EXIT_INVALID: u8 = 1;
pub const EXIT_NOT_CONVERGED: u8 = 2;
pub const EXIT_IO: u8 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "degroot",
    version,
    about = "Analyze DeGroot opinion pooling and synthesize equivalent Hamiltonian cycles"
)]
struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,
    /// Absolute tolerance on row sums when loading a matrix.
    #[arg(long, global = true, default_value_t = DEFAULT_ROW_TOL)]
    row_tol: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Linear,
    Trees,
    Power,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check that a matrix is row-stochastic.
    Validate { matrix: PathBuf },
    /// Strong components, basic bicomponents, periods and convergence criteria.
    Analyze {
        matrix: PathBuf,
        /// Entries at or below this value produce no arc.
        #[arg(long, default_value_t = 0.0)]
        zero_tol: f64,
        #[arg(long, default_value_t = DEFAULT_PIVOT_TOL)]
        pivot_tol: f64,
    },
    /// Limit of the powers of the matrix by repeated squaring.
    Limit {
        matrix: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long, default_value_t = DEFAULT_MAX_DOUBLINGS)]
        max_doublings: usize,
    },
    /// Stationary vector (final weight distribution).
    Stationary {
        matrix: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Linear)]
        method: Method,
        #[arg(long, default_value_t = 0.0)]
        zero_tol: f64,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long, default_value_t = DEFAULT_MAX_DOUBLINGS)]
        max_doublings: usize,
    },
    /// Hamiltonian cycle with loops realizing a weight distribution.
    Synthesize {
        pi: PathBuf,
        /// Scaling parameter, decimal or fraction such as 10/101. Defaults to min pi.
        #[arg(long)]
        beta: Option<String>,
        /// Visiting order as comma-separated one-based vertices, e.g. 4,3,2,1.
        #[arg(long)]
        order: Option<String>,
        /// Write the synthesized matrix here (.csv or .json).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the synthesized digraph here in DOT.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Whether two procedures reach the same consensus for all initial opinions.
    Verify {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = ROW_EQUALITY_TOL)]
        tol: f64,
    },
    /// Opinion trajectory s(k) = P s(k-1) as CSV.
    Simulate {
        matrix: PathBuf,
        s0: PathBuf,
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Communication digraph in DOT.
    ExportDot {
        matrix: PathBuf,
        #[arg(long, action = ArgAction::Set, num_args = 0..=1, default_value_t = false, default_missing_value = "true")]
        show_loops: bool,
        #[arg(long, default_value_t = 0.0)]
        zero_tol: f64,
    },
}

enum Failure {
    Invalid(String),
    NotConverged(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Invalid(_) => EXIT_INVALID,
            Failure::NotConverged(_) => EXIT_NOT_CONVERGED,
            Failure::Io(_) => EXIT_IO,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Invalid(m) | Failure::NotConverged(m) | Failure::Io(m) => m,
        }
    }
}

impl From<FileError> for Failure {
    fn from(e: FileError) -> Self {
        Failure::Io(e.to_string())
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Invalid(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

type Outcome = Result<u8, Failure>;

/// Runs the CLI on `args` (including the program name) and returns the exit
/// status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_IO
                }
            };
        }
    };
    let json = cli.json;
    let result = match cli.command {
        Command::Validate { matrix } => cmd_validate(&matrix, cli.row_tol, json, out),
        Command::Analyze {
            matrix,
            zero_tol,
            pivot_tol,
        } => cmd_analyze(&matrix, cli.row_tol, zero_tol, pivot_tol, json, out),
        Command::Limit {
            matrix,
            tol,
            max_doublings,
        } => cmd_limit(&matrix, cli.row_tol, tol, max_doublings, json, out),
        Command::Stationary {
            matrix,
            method,
            zero_tol,
            tol,
            max_doublings,
        } => cmd_stationary(
            &matrix,
            cli.row_tol,
            method,
            zero_tol,
            tol,
            max_doublings,
            json,
            out,
        ),
        Command::Synthesize {
            pi,
            beta,
            order,
            out: out_path,
            dot,
        } => cmd_synthesize(
            &pi,
            beta.as_deref(),
            order.as_deref(),
            out_path.as_deref(),
            dot.as_deref(),
            json,
            out,
        ),
        Command::Verify { a, b, tol } => cmd_verify(&a, &b, cli.row_tol, tol, json, out),
        Command::Simulate {
            matrix,
            s0,
            steps,
            out: out_path,
        } => cmd_simulate(
            &matrix,
            &s0,
            steps,
            out_path.as_deref(),
            cli.row_tol,
            json,
            out,
        ),
        Command::ExportDot {
            matrix,
            show_loops,
            zero_tol,
        } => cmd_export_dot(&matrix, cli.row_tol, show_loops, zero_tol, out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message());
            f.code()
        }
    }
}

fn load_stochastic(path: &Path, row_tol: f64) -> Result<StochasticMatrix, Failure> {
    let raw = read_matrix(path)?;
    validate_stochastic(&raw, row_tol)
        .map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

fn print_json(out: &mut dyn Write, value: &Value) -> Result<(), Failure> {
    writeln!(
        out,
        "{}",
        serde_json::to_string_pretty(value).expect("json")
    )?;
    Ok(())
}

fn join(xs: &[f64], f: impl Fn(f64) -> String) -> String {
    xs.iter().map(|&x| f(x)).collect::<Vec<_>>().join(",")
}

fn labels(vs: &[usize]) -> Vec<usize> {
    vs.iter().map(|v| v + 1).collect()
}

fn cmd_validate(path: &Path, row_tol: f64, json: bool, out: &mut dyn Write) -> Outcome {
    let raw = read_matrix(path)?;
    let deviations: Vec<f64> = raw.rows().map(|r| r.iter().sum::<f64>() - 1.0).collect();
    match validate_stochastic(&raw, row_tol) {
        Ok(p) => {
            if json {
                print_json(
                    out,
                    &json!({
                        "valid": true,
                        "n": p.dim(),
                        "row_sum_deviations": format::json_vec(&deviations),
                    }),
                )?;
            } else {
                writeln!(out, "valid stochastic matrix, n={}", p.dim())?;
                for (i, d) in deviations.iter().enumerate() {
                    writeln!(out, "row {}: sum - 1 = {}", i + 1, human(*d))?;
                }
            }
            Ok(EXIT_OK)
        }
        Err(e) => {
            if json {
                print_json(
                    out,
                    &json!({ "valid": false, "n": raw.dim(), "error": format!("{e:?}"), "message": e.to_string() }),
                )?;
            } else {
                writeln!(out, "invalid: {e} ({e:?})")?;
            }
            Ok(EXIT_INVALID)
        }
    }
}

fn cmd_analyze(
    path: &Path,
    row_tol: f64,
    zero_tol: f64,
    pivot_tol: f64,
    json: bool,
    out: &mut dyn Write,
) -> Outcome {
    let p = load_stochastic(path, row_tol)?;
    let g = digraph_from_matrix(&p, zero_tol);
    let r = analyze(&g);
    let rank_l = matrix_rank(&kirchhoff(&g), pivot_tol);
    if json {
        let comps: Vec<Vec<usize>> = r.components.iter().map(|c| labels(c)).collect();
        print_json(
            out,
            &json!({
                "n": g.n(),
                "components": comps,
                "basic": r.basic,
                "periods": r.periods,
                "nu": r.nu,
                "b": r.b,
                "has_spanning_out_tree": r.has_spanning_out_tree,
                "regular": r.regular,
                "limit_exists": r.limit_exists,
                "rank_L": rank_l,
            }),
        )?;
    } else {
        writeln!(out, "n={}", g.n())?;
        writeln!(out, "components:")?;
        for ((c, basic), period) in r.components.iter().zip(&r.basic).zip(&r.periods) {
            let set = labels(c)
                .iter()
                .map(usize::to_string)
                .collect::<Vec<_>>()
                .join(",");
            let kind = if *basic { "basic" } else { "nonbasic" };
            let period = period.map_or("inf".to_string(), |p| p.to_string());
            writeln!(out, "  {{{set}}} {kind} period={period}")?;
        }
        writeln!(out, "nu={}", r.nu)?;
        writeln!(out, "b={}", r.b)?;
        writeln!(out, "has_spanning_out_tree={}", r.has_spanning_out_tree)?;
        writeln!(out, "regular={}", r.regular)?;
        writeln!(out, "limit_exists={}", r.limit_exists)?;
        writeln!(out, "rank_L={rank_l}")?;
    }
    Ok(EXIT_OK)
}

fn cmd_limit(
    path: &Path,
    row_tol: f64,
    tol: f64,
    max_doublings: usize,
    json: bool,
    out: &mut dyn Write,
) -> Outcome {
    let p = load_stochastic(path, row_tol)?;
    let lim = limit_powers(&p, tol, max_doublings);
    if json {
        print_json(
            out,
            &json!({
                "status": if lim.converged() { "converged" } else { "not_converged" },
                "residual": json_num(lim.residual),
                "doublings_used": lim.doublings_used,
                "limit": format::json_rows(lim.limit_candidate.rows()),
            }),
        )?;
    } else if lim.converged() {
        for row in lim.limit_candidate.rows() {
            writeln!(out, "{}", join(row, human))?;
        }
    } else {
        writeln!(
            out,
            "not converged: residual={} doublings={}",
            human(lim.residual),
            lim.doublings_used
        )?;
    }
    Ok(if lim.converged() {
        EXIT_OK
    } else {
        EXIT_NOT_CONVERGED
    })
}

#[allow(clippy::too_many_arguments)]
fn cmd_stationary(
    path: &Path,
    row_tol: f64,
    method: Method,
    zero_tol: f64,
    tol: f64,
    max_doublings: usize,
    json: bool,
    out: &mut dyn Write,
) -> Outcome {
    let p = load_stochastic(path, row_tol)?;
    let pi = match method {
        Method::Linear => stationary_vector(&p)?.into_vec(),
        Method::Trees => tree_weight_vector(&digraph_from_matrix(&p, zero_tol))?
            .normalized()?
            .into_vec(),
        Method::Power => {
            let lim = limit_powers(&p, tol, max_doublings);
            if !lim.converged() {
                return Err(Failure::NotConverged(format!(
                    "powers do not converge: residual={} doublings={}",
                    human(lim.residual),
                    lim.doublings_used
                )));
            }
            let q = &lim.limit_candidate;
            let first = q.row(0);
            let rank_one = q.rows().all(|r| {
                r.iter()
                    .zip(first)
                    .all(|(a, b)| (a - b).abs() <= ROW_EQUALITY_TOL)
            });
            if !rank_one {
                let nu = analyze(&digraph_from_matrix(&p, zero_tol)).nu;
                return Err(Error::NotUnique { nu }.into());
            }
            first.to_vec()
        }
    };
    if json {
        let method = format!("{method:?}").to_lowercase();
        print_json(
            out,
            &json!({ "method": method, "pi": format::json_vec(&pi) }),
        )?;
    } else {
        writeln!(out, "{}", join(&pi, human))?;
    }
    Ok(EXIT_OK)
}

/// Parses a decimal or a fraction `a/b`.
fn parse_real(s: &str) -> Option<f64> {
    let x = match s.split_once('/') {
        Some((a, b)) => a.trim().parse::<f64>().ok()? / b.trim().parse::<f64>().ok()?,
        None => s.trim().parse().ok()?,
    };
    x.is_finite().then_some(x)
}

fn parse_order(s: &str) -> Option<Vec<usize>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .ok()
                .filter(|&v| v >= 1)
                .map(|v| v - 1)
        })
        .collect()
}

/// DOT text with arcs in the direction of influence.
pub fn dot_text(g: &WeightedDigraph, show_loops: bool) -> String {
    let mut s = String::from("digraph G {\n");
    for a in g.arcs().iter().filter(|a| show_loops || !a.is_loop()) {
        s.push_str(&format!(
            "  {} -> {} [label=\"{}\"];\n",
            a.tail + 1,
            a.head + 1,
            sig(a.weight, 6)
        ));
    }
    s.push_str("}\n");
    s
}

fn cycle_json(spec: &CycleSpec, m: &Matrix) -> Value {
    json!({
        "n": spec.n(),
        "order": labels(spec.order()),
        "beta": spec.beta().map(json_num),
        "entering_weight": format::json_vec(spec.entering_weight()),
        "loop_weight": format::json_vec(spec.loop_weight()),
        "matrix": format::json_rows(m.rows()),
    })
}

fn cmd_synthesize(
    pi_path: &Path,
    beta: Option<&str>,
    order: Option<&str>,
    out_path: Option<&Path>,
    dot_path: Option<&Path>,
    json: bool,
    out: &mut dyn Write,
) -> Outcome {
    let pi = ProbabilityVector::new(read_vector(pi_path)?)?;
    let beta = beta
        .map(|b| parse_real(b).ok_or_else(|| Failure::Io(format!("invalid --beta value {b:?}"))))
        .transpose()?;
    let order = order
        .map(|o| parse_order(o).ok_or_else(|| Failure::Io(format!("invalid --order value {o:?}"))))
        .transpose()?;
    let spec = cycle_from_pi(&pi, beta, order.as_deref())?;
    let p = cycle_to_matrix(&spec)?;

    if let Some(path) = out_path {
        files::write_file(path, &matrix_text(p.as_matrix(), Format::of(path)))?;
    }
    if let Some(path) = dot_path {
        files::write_file(path, &dot_text(&spec.to_digraph(), true))?;
    }

    if json {
        print_json(out, &cycle_json(&spec, p.as_matrix()))?;
    } else {
        let mut cycle: Vec<String> = labels(spec.order()).iter().map(usize::to_string).collect();
        cycle.push(cycle[0].clone());
        writeln!(out, "order: {}", cycle.join(" -> "))?;
        if let Some(beta) = spec.beta() {
            writeln!(out, "beta: {}", human(beta))?;
        }
        writeln!(out, "vertex,entering_weight,loop_weight")?;
        for v in 0..spec.n() {
            writeln!(
                out,
                "{},{},{}",
                v + 1,
                human(spec.entering_weight()[v]),
                human(spec.loop_weight()[v])
            )?;
        }
    }
    Ok(EXIT_OK)
}

fn side_json(s: &SideReport) -> Value {
    json!({
        "limit_exists": s.limit_exists,
        "rank_one": s.rank_one,
        "stationary_row": s.stationary_row.as_deref().map(format::json_vec),
    })
}

fn cmd_verify(
    a: &Path,
    b: &Path,
    row_tol: f64,
    tol: f64,
    json: bool,
    out: &mut dyn Write,
) -> Outcome {
    let pa = load_stochastic(a, row_tol)?;
    let pb = load_stochastic(b, row_tol)?;
    let r = verify_equivalence(&pa, &pb, tol)?;
    let verdict = match r.verdict {
        Verdict::Equivalent => "equivalent",
        Verdict::NotEquivalent => "not-equivalent",
        Verdict::Indeterminate => "indeterminate",
    };
    if json {
        print_json(
            out,
            &json!({
                "a": side_json(&r.a),
                "b": side_json(&r.b),
                "rows_match": r.rows_match,
                "max_row_difference": r.max_row_difference.map(json_num),
                "verdict": verdict,
            }),
        )?;
    } else {
        for (name, s) in [("a", &r.a), ("b", &r.b)] {
            writeln!(
                out,
                "{name}: limit_exists={} rank_one={}",
                s.limit_exists, s.rank_one
            )?;
        }
        if let Some(d) = r.max_row_difference {
            writeln!(out, "max_row_difference={}", human(d))?;
        }
        writeln!(out, "verdict: {verdict}")?;
    }
    Ok(match r.verdict {
        Verdict::Equivalent => EXIT_OK,
        Verdict::NotEquivalent => EXIT_INVALID,
        Verdict::Indeterminate => EXIT_NOT_CONVERGED,
    })
}

fn trajectory_csv(traj: &[Vec<f64>]) -> String {
    let n = traj.first().map_or(0, Vec::len);
    let mut s = String::from("step");
    for i in 1..=n {
        s.push_str(&format!(",s{i}"));
    }
    s.push('\n');
    for (k, state) in traj.iter().enumerate() {
        s.push_str(&format!("{k},{}\n", join(state, |x| x.to_string())));
    }
    s
}

fn cmd_simulate(
    matrix: &Path,
    s0: &Path,
    steps: usize,
    out_path: Option<&Path>,
    row_tol: f64,
    json: bool,
    out: &mut dyn Write,
) -> Outcome {
    let p = load_stochastic(matrix, row_tol)?;
    let s0 = read_vector(s0)?;
    let traj = iterate_opinions(&p, &s0, steps)?;
    match out_path {
        Some(path) => files::write_file(path, &trajectory_csv(&traj))?,
        None if json => print_json(
            out,
            &json!({ "trajectory": traj.iter().map(|s| format::json_vec(s)).collect::<Vec<_>>() }),
        )?,
        None => write!(out, "{}", trajectory_csv(&traj))?,
    }
    Ok(EXIT_OK)
}

fn cmd_export_dot(
    path: &Path,
    row_tol: f64,
    show_loops: bool,
    zero_tol: f64,
    out: &mut dyn Write,
) -> Outcome {
    let p = load_stochastic(path, row_tol)?;
    write!(
        out,
        "{}",
        dot_text(&digraph_from_matrix(&p, zero_tol), show_loops)
    )?;
    Ok(EXIT_OK)
}
