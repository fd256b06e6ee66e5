//! The `quartic-mass` command line.
//!
//! Exit codes: 0 success, 1 mismatch, 2 usage error, 3 precision or budget
//! exhausted.

use std::collections::{BTreeMap, BTreeSet};
use std::ffi::OsString;
use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use num_traits::Zero;
use serde_json::json;

use quartic_mass::oracle::{verify, Method, OracleError, VerifyOptions};
use quartic_mass::padic::{derive_params, FieldSpec, PadicError};
use quartic_mass::sweep::{run_sweep, Check};
use quartic_mass::{count, CountTable, FieldParams, FormulaError, GroupTag, MassTable, MinusOneClass};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "quartic-mass", version, about = "Counts and masses of totally ramified quartic extensions of 2-adic fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Csv,
    Json,
    Table,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OracleArg {
    Density,
    Tower,
    Dedup,
    All,
}

#[derive(clap::Args, Debug)]
struct ParamArgs {
    /// Ramification index of K over Q2.
    #[arg(long)]
    e: u32,
    /// Inertia degree of K over Q2.
    #[arg(long)]
    f: u32,
    /// Discriminant exponent of K(sqrt(-1))/K.
    #[arg(long = "d-minus-one")]
    d_minus_one: u32,
    /// square, ramified or unramified.
    #[arg(long = "minus-one-class", value_parser = parse_class)]
    minus_one_class: MinusOneClass,
}

impl ParamArgs {
    fn params(&self) -> Result<FieldParams, Failure> {
        FieldParams::new(self.e, self.f, self.d_minus_one, self.minus_one_class).map_err(|e| Failure::usage(e.to_string()))
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Closed-form counts by discriminant exponent and group.
    Count {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long = "m-min", default_value_t = 0)]
        m_min: i64,
        /// Defaults to 8e+3.
        #[arg(long = "m-max")]
        m_max: Option<i64>,
        /// Restrict to these groups (repeat or comma-separate).
        #[arg(long, value_delimiter = ',', value_parser = parse_group)]
        group: Vec<GroupTag>,
        /// Keep zero rows.
        #[arg(long)]
        all: bool,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Closed-form masses per group.
    Mass {
        #[command(flatten)]
        params: ParamArgs,
        /// Also check that the masses sum to q^-3.
        #[arg(long = "check-serre")]
        check_serre: bool,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Compare the closed forms with brute-force oracles over a concrete field.
    Verify {
        #[arg(long)]
        field: PathBuf,
        #[arg(long = "m-max")]
        m_max: u32,
        #[arg(long, value_enum, default_value_t = OracleArg::All)]
        oracle: OracleArg,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long)]
        cache: Option<PathBuf>,
        /// Give up on dedup after this many candidate classes.
        #[arg(long = "dedup-budget")]
        dedup_budget: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Compute (e, f, q, d(-1), class) of a concrete field.
    DeriveParams {
        #[arg(long)]
        field: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Compare an exported local-field table with the closed forms.
    LmfdbCheck {
        #[arg(long)]
        csv: PathBuf,
        #[arg(long)]
        field: PathBuf,
    },
    /// Check identities over every valid parameter tuple.
    Sweep {
        #[arg(long = "e-max")]
        e_max: u32,
        #[arg(long = "f-max")]
        f_max: u32,
        /// Defaults to all checks.
        #[arg(long, value_delimiter = ',', value_parser = parse_check)]
        check: Vec<Check>,
    },
}

fn parse_class(s: &str) -> Result<MinusOneClass, String> {
    s.parse().map_err(|e: quartic_mass::ParamsError| e.to_string())
}

fn parse_group(s: &str) -> Result<GroupTag, String> {
    s.parse().map_err(|e: quartic_mass::ParamsError| e.to_string())
}

fn parse_check(s: &str) -> Result<Check, String> {
    s.parse()
}

#[derive(Debug)]
struct Failure {
    code: i32,
    msg: String,
}

impl Failure {
    fn usage(msg: impl Into<String>) -> Failure {
        Failure { code: EXIT_USAGE, msg: msg.into() }
    }
    fn mismatch(msg: impl Into<String>) -> Failure {
        Failure { code: EXIT_MISMATCH, msg: msg.into() }
    }
}

impl From<FormulaError> for Failure {
    fn from(e: FormulaError) -> Failure {
        match e {
            FormulaError::Params(p) => Failure::usage(p.to_string()),
            other => Failure::mismatch(other.to_string()),
        }
    }
}

impl From<PadicError> for Failure {
    fn from(e: PadicError) -> Failure {
        let code = match e {
            PadicError::PrecisionExhausted(_) | PadicError::BudgetExceeded(_) => EXIT_RESOURCE,
            PadicError::InvalidSpec(_) | PadicError::NotEisenstein(_) => EXIT_USAGE,
            _ => EXIT_MISMATCH,
        };
        Failure { code, msg: e.to_string() }
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Failure {
        match e {
            OracleError::Padic(p) => p.into(),
            OracleError::Formula(f) => f.into(),
            e if e.is_resource() => Failure { code: EXIT_RESOURCE, msg: e.to_string() },
            e => Failure::mismatch(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Failure {
        Failure::usage(e.to_string())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Failure {
        Failure::usage(e.to_string())
    }
}

/// Parses `argv` (program name first), runs the subcommand and returns the
/// exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = io::stdout();
    let stderr = io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// [`run`] with explicit output streams.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.msg);
            f.code
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    match cmd {
        Command::Count { params, m_min, m_max, group, all, format } => {
            let p = params.params()?;
            let m_max = m_max.unwrap_or(p.m_max());
            if m_min > m_max {
                return Err(Failure::usage(format!("--m-min {m_min} exceeds --m-max {m_max}")));
            }
            let groups = if group.is_empty() { GroupTag::ALL.to_vec() } else { dedup(group) };
            let table = CountTable::build(&p, m_min, m_max, &groups, all)?;
            match format {
                Format::Csv => table.write_csv(&mut *out)?,
                Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&table.to_json()).unwrap())?,
                Format::Table => out.write_all(table.to_table().as_bytes())?,
            }
            Ok(EXIT_OK)
        }
        Command::Mass { params, check_serre, format } => {
            let p = params.params()?;
            let table = MassTable::closed_form(&p)?;
            let serre = check_serre.then(|| quartic_mass::masses::serre_total(&p).is_ok());
            let verdict = |ok: bool| if ok { "ok" } else { "FAIL" };
            match format {
                Format::Csv => {
                    table.write_csv(&mut *out)?;
                    if let Some(ok) = serre {
                        writeln!(err, "serre: {}", verdict(ok))?;
                    }
                }
                Format::Json => {
                    let mut v = table.to_json();
                    if let Some(ok) = serre {
                        v["serre"] = json!(verdict(ok));
                    }
                    writeln!(out, "{}", serde_json::to_string_pretty(&v).unwrap())?;
                }
                Format::Table => {
                    out.write_all(table.to_table().as_bytes())?;
                    if let Some(ok) = serre {
                        writeln!(out, "serre: {}", verdict(ok))?;
                    }
                }
            }
            Ok(if serre == Some(false) { EXIT_MISMATCH } else { EXIT_OK })
        }
        Command::Verify { field, m_max, oracle, jobs, cache, dedup_budget, format } => {
            let spec = load_spec(&field)?;
            let methods: BTreeSet<Method> = match oracle {
                OracleArg::Density => [Method::Density].into(),
                OracleArg::Tower => [Method::Tower].into(),
                OracleArg::Dedup => [Method::Dedup].into(),
                OracleArg::All => Method::ALL.into(),
            };
            let opts = VerifyOptions { cache, dedup_budget };
            let report = match jobs {
                Some(0) => return Err(Failure::usage("--jobs must be positive")),
                Some(n) => {
                    let pool = rayon::ThreadPoolBuilder::new()
                        .num_threads(n)
                        .build()
                        .map_err(|e| Failure::usage(e.to_string()))?;
                    pool.install(|| verify(&spec, m_max, &methods, &opts))?
                }
                None => verify(&spec, m_max, &methods, &opts)?,
            };
            match format {
                Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&report.to_json()).unwrap())?,
                Format::Table => out.write_all(report.to_table().as_bytes())?,
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(&mut *out);
                    w.write_record(["m", "group", "method", "formula", "oracle", "precision", "status"])?;
                    for r in &report.rows {
                        let status = if r.status == quartic_mass::oracle::Status::Pass { "pass" } else { "fail" };
                        w.write_record([
                            r.m.to_string(),
                            r.group.to_string(),
                            r.method.to_string(),
                            r.formula.to_string(),
                            r.oracle.to_string(),
                            r.precision.to_string(),
                            status.to_string(),
                        ])?;
                    }
                    w.flush()?;
                }
            }
            Ok(if report.pass() { EXIT_OK } else { EXIT_MISMATCH })
        }
        Command::DeriveParams { field, format } => {
            let spec = load_spec(&field)?;
            let p = derive_params(&spec.build()?)?;
            match format {
                Format::Json => {
                    let v = json!({ "field": spec.describe(), "field_hash": spec.hash(), "params": p });
                    writeln!(out, "{}", serde_json::to_string_pretty(&v).unwrap())?;
                }
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(&mut *out);
                    w.write_record(["e", "f", "q", "d_minus_one", "minus_one_class"])?;
                    w.write_record([
                        p.e.to_string(),
                        p.f.to_string(),
                        p.q.to_string(),
                        p.d_minus_one.to_string(),
                        p.minus_one_class.to_string(),
                    ])?;
                    w.flush()?;
                }
                Format::Table => {
                    writeln!(out, "field {}", spec.describe())?;
                    writeln!(
                        out,
                        "e={} f={} q={} d_minus_one={} minus_one_class={}",
                        p.e, p.f, p.q, p.d_minus_one, p.minus_one_class
                    )?;
                }
            }
            Ok(EXIT_OK)
        }
        Command::LmfdbCheck { csv, field } => lmfdb_check(&csv, &field, out, err),
        Command::Sweep { e_max, f_max, check } => {
            if e_max == 0 || f_max == 0 || f_max > 62 {
                return Err(Failure::usage("--e-max and --f-max must be positive, --f-max at most 62"));
            }
            let checks = if check.is_empty() { Check::ALL.to_vec() } else { dedup(check) };
            let summary = run_sweep(e_max, f_max, &checks);
            writeln!(out, "sweep e<={e_max} f<={f_max}: {} formal tuples", summary.tuples)?;
            for c in &checks {
                let bad = summary.failures.iter().filter(|f| f.check == *c).count();
                if bad == 0 {
                    writeln!(out, "{c}: ok")?;
                } else {
                    writeln!(out, "{c}: FAIL ({bad} tuples)")?;
                }
            }
            for f in &summary.failures {
                let p = &f.params;
                writeln!(
                    err,
                    "{} e={} f={} d_minus_one={} {}: {}",
                    f.check, p.e, p.f, p.d_minus_one, p.minus_one_class, f.error
                )?;
            }
            Ok(if summary.failures.is_empty() { EXIT_OK } else { EXIT_MISMATCH })
        }
    }
}

fn dedup<T: Ord + Copy>(v: Vec<T>) -> Vec<T> {
    v.into_iter().collect::<BTreeSet<_>>().into_iter().collect()
}

fn load_spec(path: &Path) -> Result<FieldSpec, Failure> {
    FieldSpec::load(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

/// Closure group from a transitive-group label `4T1`..`4T5` or a group name.
fn galois_group(label: &str) -> Option<GroupTag> {
    match label.trim() {
        "4T1" => Some(GroupTag::C4),
        "4T2" => Some(GroupTag::V4),
        "4T3" => Some(GroupTag::D4),
        "4T4" => Some(GroupTag::A4),
        "4T5" => Some(GroupTag::S4),
        other => other.parse().ok(),
    }
}

/// Degree from the label: `p.n.c.i` or `p.f.e.c...` forms.
fn label_degree(label: &str) -> Option<u32> {
    let parts: Vec<&str> = label.trim().split('.').collect();
    match parts.as_slice() {
        [p, n, _, _] if *p == "2" => n.parse().ok(),
        [p, f, rest, ..] if *p == "2" => {
            let f: u32 = f.parse().ok()?;
            let e: u32 = rest.parse().ok()?;
            Some(e * f)
        }
        _ => None,
    }
}

fn lmfdb_check(csv_path: &Path, field: &Path, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let spec = load_spec(field)?;
    let k = spec.build()?;
    let params = derive_params(&k)?;
    if params != FieldParams::q2() || spec.e() != 1 {
        return Err(Failure::usage(format!(
            "lmfdb-check compares extensions of Q2 only; {} is a different base",
            spec.describe()
        )));
    }
    let file = File::open(csv_path).map_err(|e| Failure::usage(format!("{}: {e}", csv_path.display())))?;
    let mut reader = csv::ReaderBuilder::new().flexible(true).from_reader(file);
    let headers = reader.headers()?.clone();
    let col = |name: &str| headers.iter().position(|h| h.trim() == name);
    let (label, e_col, c_col, gal) = match (col("label"), col("e"), col("c"), col("galois_label")) {
        (Some(a), Some(b), Some(c), Some(d)) => (a, b, c, d),
        _ => return Err(Failure::usage("csv needs columns label, e, c, galois_label")),
    };
    let n_col = col("n");
    let mut seen: BTreeMap<(i64, GroupTag), BigUint> = BTreeMap::new();
    let (mut used, mut malformed) = (0usize, 0usize);
    for rec in reader.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line());
        let get = |i: usize| rec.get(i).map(str::trim).filter(|s| !s.is_empty());
        let parsed = (|| {
            let lab = get(label).ok_or("missing label")?;
            let n = match n_col.and_then(get) {
                Some(n) => n.parse::<u32>().map_err(|_| "bad n")?,
                None => label_degree(lab).ok_or("cannot read degree from label")?,
            };
            let e: u32 = get(e_col).ok_or("missing e")?.parse().map_err(|_| "bad e")?;
            let c: i64 = get(c_col).ok_or("missing c")?.parse().map_err(|_| "bad c")?;
            let g = get(gal).ok_or("missing galois_label")?;
            Ok::<_, &str>((n, e, c, g.to_string()))
        })();
        match parsed {
            Err(why) => {
                malformed += 1;
                writeln!(err, "line {line}: {why}")?;
            }
            Ok((n, e, c, g)) => {
                if n != 4 || e != 4 {
                    continue;
                }
                match galois_group(&g) {
                    Some(g) => {
                        *seen.entry((c, g)).or_default() += 1u32;
                        used += 1;
                    }
                    None => {
                        malformed += 1;
                        writeln!(err, "line {line}: unknown galois_label {g:?}")?;
                    }
                }
            }
        }
    }
    writeln!(out, "{:>4}  {:<5} {:>8} {:>8}  status", "m", "group", "formula", "file")?;
    let mut failed = 0;
    let top = params.m_max().max(seen.keys().map(|k| k.0).max().unwrap_or(0));
    for m in 0..=top {
        for g in GroupTag::ALL {
            let formula = count(&params, m, g)?;
            let file = seen.get(&(m, g)).cloned().unwrap_or_default();
            if formula.is_zero() && file.is_zero() {
                continue;
            }
            let ok = formula == file;
            failed += usize::from(!ok);
            writeln!(out, "{m:>4}  {g:<5} {formula:>8} {file:>8}  {}", if ok { "pass" } else { "FAIL" })?;
        }
    }
    writeln!(out, "{used} quartic totally ramified rows, {malformed} malformed, {failed} mismatches")?;
    Ok(if failed == 0 { EXIT_OK } else { EXIT_MISMATCH })
}
