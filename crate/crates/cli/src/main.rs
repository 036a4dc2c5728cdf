//! `symorb` command-line front end.
//!
//! Exit codes: 0 success, 1 verification mismatch or failed certificate,
//! 2 usage or input error, 3 enumeration budget exceeded.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::Value;

use symorb::algebra::field::identity;
use symorb::algebra::rational::{fmt_rational, parse_rational};
use symorb::algebra::{Matrix, Orders, Rational};
use symorb::hurwitz::{hurwitz, hurwitz_fast, one_part_double_hurwitz, HurwitzQuery};
use symorb::invariants::{two_point_series, DivisorSymbol, ZeroDegreeTable};
use symorb::operators::{
    basis_a1n2, divisor_operator, eigen_certify_closed, eigen_certify_rational, paper_matrix_a1n2,
    paper_matrix_latex, verify_a1n2, zero_degree_table_a1n2, EigenSpec,
};
use symorb::partitions::{weighted_partitions_of, ClassLabel, Partition, WeightedPartition};
use symorb::surface::TangentWeights;
use symorb::Error;

#[derive(Parser, Debug)]
#[command(name = "symorb", version, about = "Divisor operators of Sym^n(A_r) in exact arithmetic")]
struct Cli {
    /// JSON file {"command": ..., flag: value, ...} used instead of flags.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Backend {
    Brute,
    Fast,
    Gjv,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Latex,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Hurwitz number H(η1, ..., ηs), or H(σ, (2)^b, (k)) with --gjv.
    Hurwitz {
        #[arg(long)]
        n: Option<u32>,
        /// Profiles separated by ';', e.g. "2;2".
        #[arg(long)]
        profiles: Option<String>,
        #[arg(long, value_enum, default_value = "fast")]
        backend: Backend,
        /// Closed form for one-part double Hurwitz numbers.
        #[arg(long)]
        gjv: bool,
        #[arg(long)]
        sigma: Option<String>,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long)]
        b: Option<u32>,
    },
    /// Nonzero-degree two-point series ⟨⟨left, right⟩⟩ as JSON.
    TwoPoint {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        r: usize,
        #[arg(long, default_value_t = 0)]
        u_order: u32,
        /// One order for all s_l, or a comma-separated list.
        #[arg(long, default_value = "3")]
        s_order: String,
    },
    /// Matrix of D ∗ − in a basis.
    OpMatrix {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        r: usize,
        /// `D<l>` or `(2)`.
        #[arg(long, default_value = "D1")]
        divisor: String,
        /// Basis separated by ';'. Defaults to all partitions weighted by 1, E1..Er.
        #[arg(long)]
        basis: Option<String>,
        #[arg(long, default_value_t = 2)]
        u_order: u32,
        #[arg(long, default_value = "3")]
        s_order: String,
        /// Zero-degree table JSON, or `builtin` for the n = 2, r = 1 table.
        #[arg(long)]
        table: Option<String>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Print the n = 2, r = 1 closed form instead of computing.
        #[arg(long)]
        closed_form: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Compare the computed n = 2, r = 1 operator with its closed form.
    VerifyA1n2 {
        #[arg(long, default_value_t = 6)]
        u_order: u32,
        #[arg(long, default_value_t = 6)]
        s_order: u32,
        /// Zero-degree table JSON; defaults to the built-in table.
        #[arg(long)]
        table: Option<PathBuf>,
    },
    /// Distinct-eigenvalue certificate for the n = 2, r = 1 closed form.
    Eigencheck {
        #[arg(long, default_value = "1")]
        t1: String,
        #[arg(long, default_value = "2")]
        t2: String,
        #[arg(long, default_value = "1/3")]
        s: String,
        #[arg(long, default_value = "1/5")]
        q: String,
        /// Run the identity-matrix negative control instead.
        #[arg(long)]
        identity_self_test: bool,
    },
    /// Write the built-in n = 2, r = 1 zero-degree table as JSON.
    TableA1n2 {
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

enum Failure {
    Mismatch(String),
    Usage(String),
    Budget(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Budget { .. } => Failure::Budget(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn usage(flag: &str, msg: impl std::fmt::Display) -> Failure {
    Failure::Usage(format!("--{flag}: {msg}"))
}

fn emit(text: &str, output: Option<&Path>) -> Outcome {
    match output {
        Some(p) => fs::write(p, text).map_err(|e| usage("output", format!("{}: {e}", p.display()))),
        None => {
            let mut out = io::stdout().lock();
            let tail = if text.ends_with('\n') { "" } else { "\n" };
            match out.write_all(text.as_bytes()).and_then(|_| out.write_all(tail.as_bytes())) {
                // A closed pipe (e.g. `| head`) is not an error.
                Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(Failure::Usage(format!("stdout: {e}"))),
                _ => Ok(()),
            }
        }
    }
}

fn parse_orders(u: u32, s: &str, r: usize) -> Result<Orders, Failure> {
    let parts = s
        .split(',')
        .map(|x| x.trim().parse::<u32>().map_err(|_| usage("s-order", format!("'{x}' is not a nonnegative integer"))))
        .collect::<Result<Vec<_>, _>>()?;
    let s = match parts.len() {
        1 => vec![parts[0]; r],
        k if k == r => parts,
        k => return Err(usage("s-order", format!("{k} orders given for r = {r}"))),
    };
    Ok(Orders::new(u, s))
}

fn parse_wp(flag: &str, s: &str) -> Result<WeightedPartition, Failure> {
    s.parse().map_err(|e: Error| usage(flag, e))
}

fn parse_rat(flag: &str, s: &str) -> Result<Rational, Failure> {
    parse_rational(s).map_err(|e| usage(flag, e))
}

fn load_table(arg: &str) -> Result<ZeroDegreeTable, Failure> {
    if arg == "builtin" {
        return Ok(zero_degree_table_a1n2()?);
    }
    let text = fs::read_to_string(arg).map_err(|e| usage("table", format!("{arg}: {e}")))?;
    serde_json::from_str(&text).map_err(|e| usage("table", format!("{arg}: {e}")))
}

fn cmd_hurwitz(
    n: Option<u32>,
    profiles: Option<String>,
    backend: Backend,
    gjv: bool,
    sigma: Option<String>,
    k: Option<u32>,
    b: Option<u32>,
) -> Outcome {
    if gjv || matches!(backend, Backend::Gjv) {
        let sigma: Partition = sigma
            .ok_or_else(|| usage("sigma", "required with --gjv"))?
            .parse()
            .map_err(|e: Error| usage("sigma", e))?;
        let b = b.ok_or_else(|| usage("b", "required with --gjv"))?;
        if let Some(k) = k {
            if k != sigma.size() {
                return Err(usage("k", format!("{k} differs from |sigma| = {}", sigma.size())));
            }
        }
        return emit(&fmt_rational(&one_part_double_hurwitz(&sigma, b)), None);
    }
    let n = n.ok_or_else(|| usage("n", "required"))?;
    let profiles = profiles.ok_or_else(|| usage("profiles", "required"))?;
    let ps = profiles
        .split(';')
        .map(|p| p.parse::<Partition>().map_err(|e| usage("profiles", e)))
        .collect::<Result<Vec<_>, _>>()?;
    let q = HurwitzQuery::new(n, ps).map_err(|e| usage("profiles", e))?;
    let v = match backend {
        Backend::Brute => hurwitz(&q)?,
        _ => hurwitz_fast(&q)?,
    };
    emit(&fmt_rational(&v), None)
}

fn cmd_two_point(left: &str, right: &str, n: u32, r: usize, u: u32, s: &str) -> Outcome {
    let (l, rt) = (parse_wp("left", left)?, parse_wp("right", right)?);
    for (flag, p) in [("left", &l), ("right", &rt)] {
        if p.size() != n {
            return Err(usage(flag, format!("{p} has size {}, expected n = {n}", p.size())));
        }
    }
    let w = TangentWeights::new(r).map_err(|e| usage("r", e))?;
    let orders = parse_orders(u, s, r)?;
    let series = two_point_series(&l, &rt, &orders, &w)?;
    emit(&serde_json::to_string_pretty(&series).expect("series serialize"), None)
}

#[allow(clippy::too_many_arguments)]
fn cmd_op_matrix(
    n: u32,
    r: usize,
    divisor: &str,
    basis: Option<&str>,
    u: u32,
    s: &str,
    table: Option<&str>,
    format: Format,
    closed_form: bool,
    output: Option<&Path>,
) -> Outcome {
    if closed_form {
        if (n, r) != (2, 1) {
            return Err(usage("closed-form", "only available for n = 2, r = 1"));
        }
        let text = match format {
            Format::Latex => paper_matrix_latex(),
            Format::Json | Format::Csv => {
                let rows: Vec<Vec<String>> =
                    paper_matrix_a1n2().iter().map(|row| row.iter().map(|e| e.to_string()).collect()).collect();
                serde_json::to_string_pretty(&rows).expect("strings serialize")
            }
        };
        return emit(&text, output);
    }
    let d: DivisorSymbol = divisor.parse().map_err(|e: Error| usage("divisor", e))?;
    let w = TangentWeights::new(r).map_err(|e| usage("r", e))?;
    let orders = parse_orders(u, s, r)?;
    let basis: Vec<WeightedPartition> = match basis {
        Some(b) => b.split(';').map(|x| parse_wp("basis", x)).collect::<Result<_, _>>()?,
        None if (n, r) == (2, 1) => basis_a1n2(),
        None => {
            let mut labels = vec![ClassLabel::One];
            labels.extend((1..=r).map(ClassLabel::ECurve));
            weighted_partitions_of(n, &labels)
        }
    };
    let table = match table {
        Some(t) => load_table(t)?,
        None => ZeroDegreeTable::new(),
    };
    let m = divisor_operator(n, r, d, &basis, &orders, &w, &table)?;
    if !m.gaps.is_empty() {
        eprintln!("note: {} entries lack their degree-zero part (no table value)", m.gaps.len());
    }
    let text = match format {
        Format::Json => m.to_json(),
        Format::Latex => m.to_latex(),
        Format::Csv => m.to_csv(),
    };
    emit(&text, output)
}

fn cmd_verify(u: u32, s: u32, table: Option<&Path>) -> Outcome {
    let table = match table {
        Some(p) => Some(load_table(&p.to_string_lossy())?),
        None => None,
    };
    let report = verify_a1n2(&Orders::new(u, vec![s]), table.as_ref())?;
    emit(&report.to_string(), None)?;
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Mismatch(format!(
            "{} mismatching coefficients, {} gaps",
            report.mismatches.len(),
            report.gaps.len()
        )))
    }
}

fn cmd_eigencheck(t1: &str, t2: &str, s: &str, q: &str, identity_self_test: bool) -> Outcome {
    if identity_self_test {
        let id: Matrix<Rational> = identity(5);
        let rep = eigen_certify_rational(&id)?;
        emit(&rep.to_string(), None)?;
        return if rep.squarefree {
            Err(Failure::Mismatch("identity control reported distinct eigenvalues".into()))
        } else {
            emit("self-test ok: identity is derogatory", None)
        };
    }
    let spec = EigenSpec {
        t1: parse_rat("t1", t1)?,
        t2: parse_rat("t2", t2)?,
        s: vec![parse_rat("s", s)?],
        q: parse_rat("q", q)?,
    };
    let rep = eigen_certify_closed(&paper_matrix_a1n2(), &spec)?;
    emit(&rep.to_string(), None)?;
    if rep.squarefree {
        Ok(())
    } else {
        Err(Failure::Mismatch("characteristic polynomial has a repeated root".into()))
    }
}

fn dispatch(cmd: Command) -> Outcome {
    match cmd {
        Command::Hurwitz { n, profiles, backend, gjv, sigma, k, b } => cmd_hurwitz(n, profiles, backend, gjv, sigma, k, b),
        Command::TwoPoint { left, right, n, r, u_order, s_order } => {
            cmd_two_point(&left, &right, n, r, u_order, &s_order)
        }
        Command::OpMatrix { n, r, divisor, basis, u_order, s_order, table, format, closed_form, output } => cmd_op_matrix(
            n,
            r,
            &divisor,
            basis.as_deref(),
            u_order,
            &s_order,
            table.as_deref(),
            format,
            closed_form,
            output.as_deref(),
        ),
        Command::VerifyA1n2 { u_order, s_order, table } => cmd_verify(u_order, s_order, table.as_deref()),
        Command::Eigencheck { t1, t2, s, q, identity_self_test } => cmd_eigencheck(&t1, &t2, &s, &q, identity_self_test),
        Command::TableA1n2 { output } => {
            let t = zero_degree_table_a1n2()?;
            emit(&serde_json::to_string_pretty(&t).expect("table serialize"), output.as_deref())
        }
    }
}

/// Turns `{"command": "verify-a1n2", "u-order": 2}` into argv.
fn config_argv(path: &Path) -> Result<Vec<String>, Failure> {
    let text = fs::read_to_string(path).map_err(|e| usage("config", format!("{}: {e}", path.display())))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| usage("config", e))?;
    let obj = v.as_object().ok_or_else(|| usage("config", "top level must be an object"))?;
    let cmd = obj
        .get("command")
        .and_then(Value::as_str)
        .ok_or_else(|| usage("config", "missing string field \"command\""))?;
    let mut argv = vec!["symorb".to_string(), cmd.to_string()];
    for (k, val) in obj {
        if k == "command" {
            continue;
        }
        let flag = format!("--{}", k.replace('_', "-"));
        match val {
            Value::Bool(true) => argv.push(flag),
            Value::Bool(false) | Value::Null => {}
            Value::String(s) => argv.extend([flag, s.clone()]),
            Value::Number(x) => argv.extend([flag, x.to_string()]),
            other => return Err(usage("config", format!("field {k}: unsupported value {other}"))),
        }
    }
    Ok(argv)
}

fn run() -> Outcome {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => std::process::exit(0),
                _ => std::process::exit(2),
            }
        }
    };
    let cmd = match (cli.config, cli.command) {
        (Some(path), None) => {
            let argv = config_argv(&path)?;
            let parsed = Cli::try_parse_from(&argv).map_err(|e| usage("config", e.to_string().trim_end().to_string()))?;
            parsed.command.ok_or_else(|| usage("config", "no command"))?
        }
        (Some(_), Some(_)) => return Err(usage("config", "give either a config file or a subcommand, not both")),
        (None, Some(c)) => c,
        (None, None) => return Err(Failure::Usage("no subcommand given; see --help".into())),
    };
    dispatch(cmd)
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Mismatch(m)) => {
            eprintln!("mismatch: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Budget(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
    }
}
