//! Command-line front end.
//!
//! Exit codes: 0 when something was found or constructed, 1 when the result
//! is provably empty, 2 on usage errors. Integers larger than 2⁵³ in JSON are
//! emitted as decimal strings.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};
use serde_json::{json, Map, Value};

use crate::constructors::{self, FermionicReport};
use crate::enumerator::{self, FixedLOutcome, GapReason, SearchBox};
use crate::kmatrix::{verify_solution, ChargeVector, ConstructionTrace, Filling, KMatrix, Solution};
use crate::ntheory::{self, ObstructionEquation};

pub const EXIT_FOUND: i32 = 0;
pub const EXIT_EMPTY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "halperin", version, about = "Exact K-matrix solutions for bilayer quantum Hall fillings")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Debug, Clone, Args)]
pub struct Output {
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Write to this file instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Auto,
    T10,
    T11,
    Integer,
    Unity,
    Nu1,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List every solution inside a box.
    Enumerate {
        #[arg(long)]
        nu: String,
        #[arg(long = "t")]
        charge: String,
        /// Bound for both m and n.
        #[arg(long = "max", required_unless_present_all = ["m_max", "n_max"])]
        max: Option<u64>,
        #[arg(long)]
        m_max: Option<u64>,
        #[arg(long)]
        n_max: Option<u64>,
        /// Keep only l equal to this value.
        #[arg(long)]
        fix_l: Option<String>,
        /// Worker threads; output does not depend on it.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Build one solution with determinant above a threshold.
    Construct {
        #[arg(long)]
        nu: String,
        #[arg(long = "t")]
        charge: String,
        #[arg(long, default_value = "0")]
        min_det: String,
        #[arg(long, value_enum, default_value = "auto")]
        family: FamilyArg,
        /// Diagonal entry m for the t10 family.
        #[arg(long)]
        m: Option<String>,
        #[arg(long)]
        t_index: Option<String>,
        #[arg(long)]
        beta: Option<String>,
        /// Even factor for --bosonic, or the amplification factor for t10.
        #[arg(long)]
        alpha: Option<String>,
        /// All-even K-matrix.
        #[arg(long)]
        bosonic: bool,
        #[arg(long)]
        d1: Option<String>,
        #[arg(long)]
        d2: Option<String>,
        #[command(flatten)]
        output: Output,
    },
    /// Solve the problem with l held fixed.
    FixedL {
        #[arg(long)]
        nu: String,
        #[arg(long = "t")]
        charge: String,
        #[arg(long = "l")]
        l0: String,
        #[command(flatten)]
        output: Output,
    },
    /// Certified upper bound on the fillings reachable at fixed l.
    Bound {
        #[arg(long = "t")]
        charge: String,
        #[arg(long = "l")]
        l0: String,
        #[arg(long, default_value_t = enumerator::DEFAULT_BOUND_SCAN)]
        scan: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Fillings that no l in a finite set can produce.
    Gap {
        #[arg(long = "t")]
        charge: String,
        /// Comma-separated l values.
        #[arg(long = "l")]
        l_set: String,
        /// Comma-separated candidate fillings.
        #[arg(long)]
        nu: String,
        #[command(flatten)]
        output: Output,
    },
    /// Parity class, determinant and filling of a K-matrix.
    Classify {
        /// m,n,l
        #[arg(long)]
        k: String,
        #[arg(long = "t")]
        charge: Option<String>,
        #[command(flatten)]
        output: Output,
    },
    /// Parity obstruction for odd-diagonal K-matrices.
    Fermionic {
        #[arg(long)]
        nu: String,
        #[arg(long = "t")]
        charge: String,
        #[command(flatten)]
        output: Output,
    },
    /// Legendre symbol and quadratic-residue witness.
    Residue {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long)]
        p: String,
        #[command(flatten)]
        output: Output,
    },
    /// Pythagorean triple from Euclid's formula.
    Triples {
        #[arg(long)]
        m: String,
        #[arg(long)]
        n: String,
        #[arg(long, default_value = "1")]
        k: String,
        #[command(flatten)]
        output: Output,
    },
    /// Scan residues for a modular obstruction.
    Modcheck {
        #[arg(long)]
        eq: String,
        #[arg(long = "mod")]
        modulus: String,
        #[command(flatten)]
        output: Output,
    },
    /// Re-verify solutions emitted by another subcommand.
    Verify {
        /// JSON or CSV file produced by enumerate, construct or fixed-l.
        #[arg(long)]
        input: PathBuf,
        /// Required for CSV input.
        #[arg(long)]
        nu: Option<String>,
        #[arg(long = "t")]
        charge: Option<String>,
        #[command(flatten)]
        output: Output,
    },
}

/// Usage problem detected after argument parsing.
#[derive(Debug)]
struct Usage(String);

impl<E: std::fmt::Display> From<E> for Usage {
    fn from(e: E) -> Self {
        Usage(e.to_string())
    }
}

type CmdResult = std::result::Result<(i32, Rendered), Usage>;

/// A report ready to print in any of the three formats.
enum Rendered {
    Solutions { header: Value, rows: Vec<Value> },
    Report(Value),
}

/// Runs the CLI on `args` (including the program name).
pub fn run<I, A>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = A>,
    A: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_FOUND };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let output = output_of(&cli.command).clone();
    match dispatch(cli.command, stderr) {
        Ok((code, rendered)) => {
            let text = render(&rendered, output.format);
            let written = match &output.out {
                Some(path) => fs::write(path, text.as_bytes()).map_err(|e| format!("{}: {e}", path.display())),
                None => stdout.write_all(text.as_bytes()).map_err(|e| e.to_string()),
            };
            match written {
                Ok(()) => code,
                Err(e) => {
                    let _ = writeln!(stderr, "error: {e}");
                    EXIT_USAGE
                }
            }
        }
        Err(Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
    }
}

fn output_of(cmd: &Command) -> &Output {
    match cmd {
        Command::Enumerate { output, .. }
        | Command::Construct { output, .. }
        | Command::FixedL { output, .. }
        | Command::Bound { output, .. }
        | Command::Gap { output, .. }
        | Command::Classify { output, .. }
        | Command::Fermionic { output, .. }
        | Command::Residue { output, .. }
        | Command::Triples { output, .. }
        | Command::Modcheck { output, .. }
        | Command::Verify { output, .. } => output,
    }
}

fn dispatch(cmd: Command, stderr: &mut dyn Write) -> CmdResult {
    match cmd {
        Command::Enumerate {
            nu,
            charge,
            max,
            m_max,
            n_max,
            fix_l,
            jobs,
            ..
        } => {
            let nu = parse_filling(&nu, stderr)?;
            let t = parse_charge(&charge)?;
            let bounds = SearchBox::new(
                m_max.or(max).ok_or_else(|| Usage("missing --m-max".into()))?,
                n_max.or(max).ok_or_else(|| Usage("missing --n-max".into()))?,
            );
            if bounds.m_max == 0 || bounds.n_max == 0 {
                return Err(Usage("bounds must be >= 1".into()));
            }
            let sols = match fix_l {
                Some(l) => enumerator::enumerate_at_l(&nu, &t, &parse_nonneg("fix-l", &l)?, bounds),
                None => enumerator::enumerate_parallel(&nu, &t, bounds, jobs),
            };
            let code = if sols.is_empty() { EXIT_EMPTY } else { EXIT_FOUND };
            let outcome = if sols.is_empty() { "empty" } else { "found" };
            Ok((code, solution_list(&nu, &t, &sols, outcome, Map::new())))
        }
        Command::Construct {
            nu,
            charge,
            min_det,
            family,
            m,
            t_index,
            beta,
            alpha,
            bosonic,
            d1,
            d2,
            ..
        } => {
            let nu = parse_filling(&nu, stderr)?;
            let t = parse_charge(&charge)?;
            let min_det = parse_nonneg("min-det", &min_det)?;
            let opt = |name: &str, v: &Option<String>| v.as_deref().map(|s| parse_positive(name, s)).transpose();
            let (m, t_index, beta, alpha, d1, d2) = (
                opt("m", &m)?,
                opt("t-index", &t_index)?,
                opt("beta", &beta)?,
                opt("alpha", &alpha)?,
                opt("d1", &d1)?,
                opt("d2", &d2)?,
            );
            let s = construct_with(&nu, &t, &min_det, family, bosonic, m, t_index, beta, alpha, d1, d2)?;
            if s.det <= min_det {
                return Err(Usage(format!("determinant {} does not exceed --min-det {min_det}", s.det)));
            }
            Ok((EXIT_FOUND, solution_list(&s.nu, &s.charge, std::slice::from_ref(&s), "constructed", Map::new())))
        }
        Command::FixedL { nu, charge, l0, .. } => {
            let nu = parse_filling(&nu, stderr)?;
            let t = parse_charge(&charge)?;
            let l0 = parse_nonneg("l", &l0)?;
            let outcome = enumerator::solve_fixed_l(&nu, &t, &l0);
            let mut extra = Map::new();
            extra.insert("l".into(), int_json(&l0));
            if let Some(desc) = outcome.family_description() {
                extra.insert("family".into(), Value::String(desc));
            }
            let code = match outcome {
                FixedLOutcome::Empty => EXIT_EMPTY,
                _ => EXIT_FOUND,
            };
            Ok((code, solution_list(&nu, &t, outcome.solutions(), outcome.kind(), extra)))
        }
        Command::Bound { charge, l0, scan, .. } => {
            let t = parse_charge(&charge)?;
            let l0 = parse_nonneg("l", &l0)?;
            let c = enumerator::max_filling_fixed_l_scan(&t, &l0, scan)?;
            Ok((
                EXIT_FOUND,
                Rendered::Report(json!({
                    "t": charge_json(&t),
                    "l": int_json(&c.l0),
                    "analytic_bound": int_json(&c.analytic_bound),
                    "finite_region_limit": int_json(&c.finite_region_limit),
                    "finite_region_max": c.finite_region_max.as_ref().map(|f| f.to_string()),
                    "certified_upper_bound": c.certified_upper_bound.to_string(),
                    "empirical_max": c.empirical_max.to_string(),
                    "scan_box": c.scan_box,
                })),
            ))
        }
        Command::Gap { charge, l_set, nu, .. } => {
            let t = parse_charge(&charge)?;
            let ls = l_set
                .split(',')
                .map(|l| parse_nonneg("l", l))
                .collect::<std::result::Result<Vec<_>, _>>()?;
            let candidates = nu
                .split(',')
                .map(|s| parse_filling(s, stderr))
                .collect::<std::result::Result<Vec<_>, _>>()?;
            let gaps = enumerator::union_gap_check(&t, &ls, &candidates)?;
            let code = if gaps.is_empty() { EXIT_EMPTY } else { EXIT_FOUND };
            let rows: Vec<Value> = gaps
                .iter()
                .map(|g| {
                    json!({
                        "nu": g.nu.to_string(),
                        "reason": match g.reason {
                            GapReason::ExceedsCertifiedBound => "exceeds_certified_bound",
                            GapReason::NoSolutionAtAnyL => "no_solution_at_any_l",
                        },
                    })
                })
                .collect();
            Ok((
                code,
                Rendered::Report(json!({
                    "t": charge_json(&t),
                    "l": ls.iter().map(int_json).collect::<Vec<_>>(),
                    "unattainable": rows,
                })),
            ))
        }
        Command::Classify { k, charge, .. } => {
            let parts = parse_list(&k)?;
            let [m, n, l] = <[BigInt; 3]>::try_from(parts).map_err(|_| Usage("--k needs m,n,l".into()))?;
            let k = KMatrix::new(m, n, l);
            let mut report = json!({
                "m": int_json(&k.m),
                "n": int_json(&k.n),
                "l": int_json(&k.l),
                "det": int_json(&k.determinant()),
                "valid": k.is_valid_state(),
                "parity": k.parity_class().to_string(),
            });
            if let Some(c) = charge {
                let t = parse_charge(&c)?;
                report["t"] = charge_json(&t);
                report["nu"] = match k.filling_fraction(&t) {
                    Ok(f) => Value::String(f.to_string()),
                    Err(_) => Value::Null,
                };
            }
            Ok((EXIT_FOUND, Rendered::Report(report)))
        }
        Command::Fermionic { nu, charge, .. } => {
            let nu = parse_filling(&nu, stderr)?;
            let t = parse_charge(&charge)?;
            let report = match constructors::fermionic_obstruction(&nu, &t) {
                FermionicReport::Obstructed => "obstructed",
                FermionicReport::Unknown => "unknown",
            };
            Ok((
                EXIT_FOUND,
                Rendered::Report(json!({"nu": nu.to_string(), "t": charge_json(&t), "fermionic": report})),
            ))
        }
        Command::Residue { a, p, .. } => {
            let a = parse_int("a", &a)?;
            let p = parse_positive("p", &p)?;
            let legendre = ntheory::legendre_symbol(&a, &p).ok();
            let witness = ntheory::quadratic_residue_witness(&a, &p)?;
            Ok((
                EXIT_FOUND,
                Rendered::Report(json!({
                    "a": int_json(&a),
                    "p": int_json(&p),
                    "legendre": legendre,
                    "is_residue": witness.is_some(),
                    "witness": witness.map(|w| int_json(&w.h)),
                })),
            ))
        }
        Command::Triples { m, n, k, .. } => {
            let tr = ntheory::euclid_triple(&parse_int("m", &m)?, &parse_int("n", &n)?, &parse_int("k", &k)?)?;
            Ok((
                EXIT_FOUND,
                Rendered::Report(json!({
                    "a": int_json(&tr.a),
                    "b": int_json(&tr.b),
                    "c": int_json(&tr.c),
                    "primitive": tr.primitive,
                })),
            ))
        }
        Command::Modcheck { eq, modulus, .. } => {
            let equation = ObstructionEquation::<BigInt>::from_str(&eq)?;
            let modulus = parse_int("mod", &modulus)?;
            let r = ntheory::mod_solvable(&equation, &modulus)?;
            let code = if r.solvable { EXIT_FOUND } else { EXIT_EMPTY };
            Ok((
                code,
                Rendered::Report(json!({
                    "equation": equation.to_string(),
                    "modulus": int_json(&modulus),
                    "solvable": r.solvable,
                    "witness": r.witness.map(|w| w.iter().map(int_json).collect::<Vec<_>>()),
                    "count": r.count,
                })),
            ))
        }
        Command::Verify { input, nu, charge, .. } => {
            let text = fs::read_to_string(&input).map_err(|e| Usage(format!("{}: {e}", input.display())))?;
            let nu = nu.map(|s| parse_filling(&s, stderr)).transpose()?;
            let t = charge.map(|s| parse_charge(&s)).transpose()?;
            verify_file(&text, nu, t)
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn construct_with(
    nu: &Filling<BigInt>,
    t: &ChargeVector<BigInt>,
    min_det: &BigInt,
    family: FamilyArg,
    bosonic: bool,
    m: Option<BigInt>,
    t_index: Option<BigInt>,
    beta: Option<BigInt>,
    alpha: Option<BigInt>,
    d1: Option<BigInt>,
    d2: Option<BigInt>,
) -> std::result::Result<Solution<BigInt>, Usage> {
    let need_charge = |t1: i64, t2: i64, name: &str| {
        if t.is(t1, t2) {
            Ok(())
        } else {
            Err(Usage(format!("family {name} needs --t {t1},{t2}")))
        }
    };
    if bosonic {
        if family != FamilyArg::Auto {
            return Err(Usage("--bosonic only combines with --family auto".into()));
        }
        let alpha = alpha.unwrap_or_else(|| BigInt::from(2));
        return Ok(constructors::bosonic_construct(nu, t, min_det, &alpha)?);
    }
    let s = match family {
        FamilyArg::Auto => constructors::construct(nu, t, min_det)?,
        FamilyArg::T10 => {
            need_charge(1, 0, "t10")?;
            let m = m.unwrap_or_else(|| constructors::smallest_t10_m(nu, min_det));
            let base = constructors::construct_t10(nu, &m)?;
            match alpha {
                Some(a) => constructors::amplify_t10(&base, &a)?,
                None => base,
            }
        }
        FamilyArg::T11 => {
            need_charge(1, 1, "t11")?;
            let ti = match t_index {
                Some(ti) => ti,
                None => constructors::smallest_t11_index(nu, min_det)?,
            };
            constructors::construct_t11(nu, &ti)?
        }
        FamilyArg::Integer | FamilyArg::Unity => {
            let coef_p = if family == FamilyArg::Unity {
                if !(nu.is_integer() && nu.p().is_one()) {
                    return Err(Usage("family unity needs --nu 1".into()));
                }
                BigInt::one()
            } else {
                if !nu.is_integer() || nu.p() < &BigInt::from(2) {
                    return Err(Usage("family integer needs an integer --nu >= 2".into()));
                }
                nu.p() - 1
            };
            let beta = match beta {
                Some(b) => b,
                None => constructors::smallest_beta(&(coef_p * t.t1() * t.t1()), min_det)?,
            };
            if family == FamilyArg::Unity {
                constructors::construct_unity_general(t, &beta)?
            } else {
                constructors::construct_integer_general(nu.p(), t, &beta)?
            }
        }
        FamilyArg::Nu1 => {
            need_charge(1, 1, "nu1")?;
            if !(nu.is_integer() && nu.p().is_one()) {
                return Err(Usage("family nu1 needs --nu 1".into()));
            }
            let (Some(d1), Some(d2)) = (d1, d2) else {
                return Err(Usage("family nu1 needs --d1 and --d2".into()));
            };
            constructors::construct_nu1_t11(&d1, &d2)?
        }
    };
    Ok(s)
}

fn verify_file(text: &str, nu: Option<Filling<BigInt>>, t: Option<ChargeVector<BigInt>>) -> CmdResult {
    let trimmed = text.trim_start();
    let (nu, t, rows): (Filling<BigInt>, ChargeVector<BigInt>, Vec<[BigInt; 4]>) = if trimmed.starts_with('{') {
        let v: Value = serde_json::from_str(trimmed)?;
        let nu = match nu {
            Some(n) => n,
            None => Filling::parse(v["nu"].as_str().ok_or_else(|| Usage("input lacks \"nu\"".into()))?)?.0,
        };
        let t = match t {
            Some(t) => t,
            None => {
                let arr = v["t"].as_array().ok_or_else(|| Usage("input lacks \"t\"".into()))?;
                if arr.len() != 2 {
                    return Err(Usage("\"t\" must have two entries".into()));
                }
                ChargeVector::new(json_int(&arr[0])?, json_int(&arr[1])?)?
            }
        };
        let sols = v["solutions"].as_array().ok_or_else(|| Usage("input lacks \"solutions\"".into()))?;
        let rows = sols
            .iter()
            .map(|s| Ok([json_int(&s["m"])?, json_int(&s["n"])?, json_int(&s["l"])?, json_int(&s["det"])?]))
            .collect::<std::result::Result<Vec<_>, Usage>>()?;
        (nu, t, rows)
    } else {
        let (Some(nu), Some(t)) = (nu, t) else {
            return Err(Usage("CSV input needs --nu and --t".into()));
        };
        let mut rows = Vec::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            if line == "m,n,l,det" {
                continue;
            }
            let vals = parse_list(line)?;
            rows.push(<[BigInt; 4]>::try_from(vals).map_err(|_| Usage(format!("bad CSV row {line:?}")))?);
        }
        (nu, t, rows)
    };

    let mut failed = Vec::new();
    for [m, n, l, det] in &rows {
        let s = Solution {
            kmatrix: KMatrix::new(m.clone(), n.clone(), l.clone()),
            det: det.clone(),
            nu: nu.clone(),
            charge: t.clone(),
            trace: None,
        };
        if !verify_solution(&s) {
            failed.push(s.to_string());
        }
    }
    let ok = !rows.is_empty() && failed.is_empty();
    Ok((
        if ok { EXIT_FOUND } else { EXIT_EMPTY },
        Rendered::Report(json!({
            "nu": nu.to_string(),
            "t": charge_json(&t),
            "checked": rows.len(),
            "failed": failed,
            "all_verified": ok,
        })),
    ))
}

fn parse_int(name: &str, s: &str) -> std::result::Result<BigInt, Usage> {
    BigInt::from_str(s.trim()).map_err(|_| Usage(format!("--{name}: {s:?} is not an integer")))
}

fn parse_nonneg(name: &str, s: &str) -> std::result::Result<BigInt, Usage> {
    let v = parse_int(name, s)?;
    if v.is_negative() {
        return Err(Usage(format!("--{name} must be >= 0")));
    }
    Ok(v)
}

fn parse_positive(name: &str, s: &str) -> std::result::Result<BigInt, Usage> {
    let v = parse_int(name, s)?;
    if !v.is_positive() {
        return Err(Usage(format!("--{name} must be >= 1")));
    }
    Ok(v)
}

fn parse_list(s: &str) -> std::result::Result<Vec<BigInt>, Usage> {
    s.split(',').map(|part| parse_int("value", part)).collect()
}

fn parse_filling(s: &str, stderr: &mut dyn Write) -> std::result::Result<Filling<BigInt>, Usage> {
    let (f, reduced) = Filling::parse(s.trim())?;
    if reduced {
        let _ = writeln!(stderr, "warning: filling {s} reduced to {f}");
    }
    Ok(f)
}

fn parse_charge(s: &str) -> std::result::Result<ChargeVector<BigInt>, Usage> {
    let parts = parse_list(s)?;
    let [t1, t2] = <[BigInt; 2]>::try_from(parts).map_err(|_| Usage(format!("--t {s:?}: expected t1,t2")))?;
    Ok(ChargeVector::new(t1, t2)?)
}

const JSON_SAFE: i64 = 1 << 53;

/// JSON number when exactly representable as a double, decimal string otherwise.
pub fn int_json(v: &BigInt) -> Value {
    match v.to_i64() {
        Some(x) if x.abs() <= JSON_SAFE => Value::from(x),
        _ => Value::String(v.to_string()),
    }
}

fn json_int(v: &Value) -> std::result::Result<BigInt, Usage> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| Usage(format!("non-integer value {n}"))),
        Value::String(s) => parse_int("value", s),
        other => Err(Usage(format!("expected an integer, got {other}"))),
    }
}

fn charge_json(t: &ChargeVector<BigInt>) -> Value {
    Value::Array(vec![int_json(t.t1()), int_json(t.t2())])
}

fn trace_json(tr: &ConstructionTrace<BigInt>) -> Value {
    let mut map = Map::new();
    for (name, v) in tr.fields() {
        map.insert(name.into(), int_json(v));
    }
    if tr.swapped {
        map.insert("swapped".into(), Value::Bool(true));
    }
    Value::Object(map)
}

fn solution_json(s: &Solution<BigInt>) -> Value {
    let mut v = json!({
        "m": int_json(&s.kmatrix.m),
        "n": int_json(&s.kmatrix.n),
        "l": int_json(&s.kmatrix.l),
        "det": int_json(&s.det),
    });
    if let Some(tr) = &s.trace {
        v["family"] = Value::String(tr.family.tag().into());
        v["parity"] = Value::String(s.kmatrix.parity_class().to_string());
        v["trace"] = trace_json(tr);
    }
    v
}

fn solution_list(
    nu: &Filling<BigInt>,
    t: &ChargeVector<BigInt>,
    sols: &[Solution<BigInt>],
    outcome: &str,
    extra: Map<String, Value>,
) -> Rendered {
    let mut header = json!({
        "nu": nu.to_string(),
        "t": charge_json(t),
        "outcome": outcome,
    });
    for (k, v) in extra {
        header[k] = v;
    }
    Rendered::Solutions {
        header,
        rows: sols.iter().map(solution_json).collect(),
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        Value::Array(items) => items.iter().map(plain).collect::<Vec<_>>().join(" "),
        other => other.to_string(),
    }
}

fn render(r: &Rendered, format: Format) -> String {
    const COLS: [&str; 4] = ["m", "n", "l", "det"];
    match (r, format) {
        (Rendered::Solutions { header, rows }, Format::Json) => {
            let mut v = header.clone();
            v["solutions"] = Value::Array(rows.clone());
            format!("{}\n", serde_json::to_string_pretty(&v).expect("JSON values serialize"))
        }
        (Rendered::Solutions { rows, .. }, Format::Csv) => {
            let mut out = String::from("m,n,l,det\n");
            for row in rows {
                let cells: Vec<String> = COLS.iter().map(|c| plain(&row[*c])).collect();
                out.push_str(&cells.join(","));
                out.push('\n');
            }
            out
        }
        (Rendered::Solutions { header, rows }, Format::Table) => {
            let mut out = String::new();
            for (k, v) in header.as_object().into_iter().flatten() {
                out.push_str(&format!("# {k}: {}\n", plain(v)));
            }
            let cells: Vec<Vec<String>> = rows
                .iter()
                .map(|row| COLS.iter().map(|c| plain(&row[*c])).collect())
                .collect();
            let widths: Vec<usize> = (0..COLS.len())
                .map(|i| cells.iter().map(|r| r[i].len()).chain([COLS[i].len()]).max().unwrap_or(1))
                .collect();
            let line = |vals: Vec<&str>| {
                vals.iter()
                    .zip(&widths)
                    .map(|(v, w)| format!("{v:>w$}"))
                    .collect::<Vec<_>>()
                    .join("  ")
            };
            out.push_str(&line(COLS.to_vec()));
            out.push('\n');
            for row in &cells {
                out.push_str(&line(row.iter().map(String::as_str).collect()));
                out.push('\n');
            }
            out
        }
        (Rendered::Report(v), Format::Json) => {
            format!("{}\n", serde_json::to_string_pretty(v).expect("JSON values serialize"))
        }
        (Rendered::Report(v), Format::Csv) => {
            let mut out = String::from("key,value\n");
            for (k, val) in v.as_object().into_iter().flatten() {
                out.push_str(&format!("{k},{}\n", csv_cell(val)));
            }
            out
        }
        (Rendered::Report(v), Format::Table) => {
            let mut out = String::new();
            for (k, val) in v.as_object().into_iter().flatten() {
                out.push_str(&format!("{k}: {}\n", plain(val)));
            }
            out
        }
    }
}

fn csv_cell(v: &Value) -> String {
    let text = match v {
        Value::Array(_) | Value::Object(_) => v.to_string(),
        _ => plain(v),
    };
    if text.contains([',', '"', '\n']) {
        format!("\"{}\"", text.replace('"', "\"\""))
    } else {
        text
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("halperin").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn big_integers_become_strings() {
        assert_eq!(int_json(&BigInt::from(JSON_SAFE)), json!(JSON_SAFE));
        assert_eq!(int_json(&BigInt::from(JSON_SAFE + 1)), json!((JSON_SAFE + 1).to_string()));
        assert_eq!(int_json(&BigInt::from(-JSON_SAFE - 1)), json!((-JSON_SAFE - 1).to_string()));
        assert_eq!(json_int(&json!("123456789012345678901234567890")).unwrap().to_string(), "123456789012345678901234567890");
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run_args(&["enumerate", "--nu", "2/3"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["enumerate", "--nu", "0/3", "--t", "1,1", "--max", "5"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["enumerate", "--nu", "2/3", "--t", "0,0", "--max", "5"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["construct", "--nu", "2/3", "--t", "1,1", "--family", "t10"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["triples", "--m", "1", "--n", "2"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["modcheck", "--eq", "x^3=y", "--mod", "3"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["bogus"]).0, EXIT_USAGE);
    }

    #[test]
    fn help_exits_zero() {
        let (code, out, _) = run_args(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("enumerate"));
    }

    #[test]
    fn reduction_warns() {
        let (code, out, err) = run_args(&["construct", "--nu", "4/6", "--t", "1,1"]);
        assert_eq!(code, 0);
        assert!(err.contains("reduced to 2/3"));
        assert!(out.contains("\"nu\": \"2/3\""));
    }
}
