//! `lfm` — exact mean-value formulas for products of Dirichlet L-functions
//! at positive integers, with a high-precision numerical verifier.
//!
//! Subcommands: `formula` (emit a closed formula), `verify` (compare the
//! formula against the character-sum oracle), `identity` (audit the
//! Bernoulli double-sum identity), `table` (bulk formulas/values as CSV or
//! JSON). Exit codes: 0 success, 1 verification/identity failure, 2 bad
//! input.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::{One, Signed};
use serde::Serialize;

use lfm_core::formulas::{
    check_bernoulli_identity, mean_value, mean_value_all_ones, mean_value_pair,
    mean_value_single,
};
use lfm_core::numeric::{le, pow2, render_decimal, BigFloat, GUARD_BITS, RM};
use lfm_core::oracle::{brute_force_mean, collapsed_mean};
use lfm_core::{MeanValueFormula, Rational};

const DEFAULT_PRECISION: u32 = 256;
const PRECISION_ENV: &str = "LFM_PRECISION_BITS";

#[derive(Parser)]
#[command(
    name = "lfm",
    version,
    about = "Exact mean values of products of Dirichlet L-functions, verified numerically"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit one mean-value formula in canonical form
    Formula(FormulaArgs),
    /// Check formulas against the numerical oracle (JSON lines output)
    Verify(VerifyArgs),
    /// Audit the Bernoulli double-sum identity in both sign readings
    Identity(IdentityArgs),
    /// Emit tables of formulas and exact evaluations
    Table(TableArgs),
}

#[derive(Args)]
struct FormulaArgs {
    /// Exponent vector m_1 m_2 ... (length >= 2, even sum)
    m_vec: Vec<u32>,
    /// Single-exponent closed form for |L(m, chi)|^2 means
    #[arg(long, conflicts_with_all = ["pair", "all_ones"])]
    single: Option<u32>,
    /// Two-exponent closed form: --pair M N
    #[arg(long, num_args = 2, value_names = ["M", "N"], conflicts_with = "all_ones")]
    pair: Option<Vec<u32>>,
    /// All-ones closed form of even length N
    #[arg(long = "all-ones", value_name = "N")]
    all_ones: Option<u32>,
    #[arg(long, value_enum, default_value_t = TextOrJson::Text)]
    format: TextOrJson,
}

#[derive(Args)]
struct VerifyArgs {
    /// Exponent vector m_1 m_2 ... (length >= 2, even sum)
    #[arg(required = true)]
    m_vec: Vec<u32>,
    /// Moduli to verify at (each > 2), comma- or space-separated
    #[arg(long = "f-list", value_delimiter = ',', num_args = 1.., required = true)]
    f_list: Vec<u64>,
    /// Working precision in bits (>= 64); default from LFM_PRECISION_BITS or 256
    #[arg(long)]
    prec: Option<u32>,
    /// Acceptance tolerance, written as 2^-K
    #[arg(long, default_value = "2^-160")]
    tol: String,
    /// Which oracle to compare against
    #[arg(long, value_enum, default_value_t = OracleKind::Collapsed)]
    oracle: OracleKind,
}

#[derive(Args)]
struct IdentityArgs {
    /// Check every same-parity (m, n) with m + n <= W (W >= 2)
    #[arg(long = "max-weight", value_name = "W")]
    max_weight: u32,
    #[arg(long, value_enum, default_value_t = TextOrJson::Text)]
    format: TextOrJson,
}

#[derive(Args)]
struct TableArgs {
    /// Single-exponent formulas for m in A..B (inclusive)
    #[arg(long = "single-range", value_name = "A..B", conflicts_with = "pair_grid")]
    single_range: Option<String>,
    /// Two-exponent formulas for same-parity (m, n) in [A..B]^2, (1,1) skipped
    #[arg(long = "pair-grid", value_name = "A..B")]
    pair_grid: Option<String>,
    /// Moduli to evaluate at; with no list, coefficients are emitted instead
    #[arg(long = "f-list", value_delimiter = ',', num_args = 0..)]
    f_list: Vec<u64>,
    #[arg(long, value_enum, default_value_t = CsvOrJson::Csv)]
    format: CsvOrJson,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TextOrJson {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CsvOrJson {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OracleKind {
    /// Single collapsed cotangent sum over one residue class
    Collapsed,
    /// Literal nested character-tuple average
    Nested,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Formula(args) => cmd_formula(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Identity(args) => cmd_identity(args),
        Command::Table(args) => cmd_table(args),
    };
    match result {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

/// Print one output line, exiting quietly if the consumer closed the pipe
/// (`lfm ... | head` must not panic).
fn emit(line: &str) {
    use std::io::Write;
    if writeln!(std::io::stdout(), "{line}").is_err() {
        std::process::exit(0);
    }
}

/// `c` as `num/den` (or just `num` when the denominator is 1).
fn rational_str(c: &Rational) -> String {
    if c.denom().is_one() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Text rendering, e.g. `pi^4/90 * ( phi_4(f) - 5*phi_2(f)/f^2 )`: the
/// leading zeta coefficient becomes the prefactor and every other term is
/// shown relative to it, the way the formulas are usually displayed.
fn render_text(formula: &MeanValueFormula) -> String {
    let p = formula.pi_power();
    let lead = formula.coefficient(p);
    let mut out = if lead.numer().is_one() {
        format!("pi^{p}/{}", lead.denom())
    } else {
        format!("{}/{}*pi^{p}", lead.numer(), lead.denom())
    };
    out.push_str(&format!(" * ( phi_{p}(f)"));
    for (&l, c) in formula.terms().iter().rev().skip(1) {
        let t = c / &lead;
        out.push_str(if t.is_negative() { " - " } else { " + " });
        let mag = t.abs();
        if !mag.is_one() {
            out.push_str(&rational_str(&mag));
            out.push('*');
        }
        out.push_str(&format!("phi_{l}(f)/f^{}", p - l));
    }
    out.push_str(" )");
    out
}

fn build_formula(args: &FormulaArgs) -> Result<MeanValueFormula, String> {
    let mut selections = 0;
    if !args.m_vec.is_empty() {
        selections += 1;
    }
    if args.single.is_some() {
        selections += 1;
    }
    if args.pair.is_some() {
        selections += 1;
    }
    if args.all_ones.is_some() {
        selections += 1;
    }
    if selections != 1 {
        return Err(
            "give exactly one of: an exponent vector, --single, --pair, --all-ones".into(),
        );
    }
    if let Some(m) = args.single {
        if m == 0 {
            return Err("--single needs m >= 1".into());
        }
        return Ok(mean_value_single(m));
    }
    if let Some(pair) = &args.pair {
        return mean_value_pair(pair[0], pair[1]).map_err(|e| e.to_string());
    }
    if let Some(n) = args.all_ones {
        return mean_value_all_ones(n).map_err(|e| e.to_string());
    }
    mean_value(&args.m_vec).map_err(|e| e.to_string())
}

fn cmd_formula(args: FormulaArgs) -> Result<ExitCode, String> {
    let formula = build_formula(&args)?;
    match args.format {
        TextOrJson::Text => emit(&render_text(&formula)),
        TextOrJson::Json => emit(&formula.to_json()),
    }
    Ok(ExitCode::SUCCESS)
}

fn resolve_precision(flag: Option<u32>) -> Result<u32, String> {
    let prec = match flag {
        Some(p) => p,
        None => match std::env::var(PRECISION_ENV) {
            Ok(s) => s
                .parse::<u32>()
                .map_err(|_| format!("{PRECISION_ENV} must be an integer, got {s:?}"))?,
            Err(_) => DEFAULT_PRECISION,
        },
    };
    if prec < 64 {
        return Err(format!("precision must be at least 64 bits, got {prec}"));
    }
    Ok(prec)
}

/// Tolerances are written as powers of two: `2^-160`.
fn parse_tolerance(s: &str) -> Result<i32, String> {
    s.strip_prefix("2^")
        .and_then(|e| e.parse::<i32>().ok())
        .ok_or_else(|| format!("tolerance must look like 2^-160, got {s:?}"))
}

fn render_digits(precision_bits: u32) -> usize {
    ((precision_bits as f64 * 0.301 - 2.0).round() as usize).max(1)
}

#[derive(Serialize)]
struct VerificationRecord {
    m_vec: Vec<u32>,
    f: u64,
    formula_value: String,
    oracle_value: String,
    abs_diff: String,
    precision_bits: u32,
    pass: bool,
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode, String> {
    let prec = resolve_precision(args.prec)?;
    let tol_exp = parse_tolerance(&args.tol)?;
    for &f in &args.f_list {
        if f <= 2 {
            return Err(format!("every modulus must exceed 2, got {f}"));
        }
    }
    let formula = mean_value(&args.m_vec).map_err(|e| e.to_string())?;
    let p = prec as usize + GUARD_BITS;
    let tol = pow2(tol_exp, p);
    let digits = render_digits(prec);

    let mut all_pass = true;
    for &f in &args.f_list {
        let formula_value = formula.evaluate_numeric(f, prec).map_err(|e| e.to_string())?;
        let oracle_value: BigFloat = match args.oracle {
            OracleKind::Collapsed => {
                collapsed_mean(&args.m_vec, f, prec).map_err(|e| e.to_string())?
            }
            OracleKind::Nested => brute_force_mean(&args.m_vec, f, prec)
                .map_err(|e| e.to_string())?
                .re,
        };
        let abs_diff = formula_value.sub(&oracle_value, p, RM).abs();
        let pass = le(&abs_diff, &tol);
        all_pass &= pass;
        let record = VerificationRecord {
            m_vec: args.m_vec.clone(),
            f,
            formula_value: render_decimal(&formula_value, digits),
            oracle_value: render_decimal(&oracle_value, digits),
            abs_diff: render_decimal(&abs_diff, digits),
            precision_bits: prec,
            pass,
        };
        emit(&serde_json::to_string(&record).expect("record serialization"));
    }
    Ok(if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

#[derive(Serialize)]
struct IdentityRow {
    m: u32,
    n: u32,
    bernoulli: String,
    double_sum: String,
    printed_sign_matches: bool,
    corrected_sign_matches: bool,
}

fn cmd_identity(args: IdentityArgs) -> Result<ExitCode, String> {
    if args.max_weight < 2 {
        return Err("--max-weight must be at least 2".into());
    }
    let mut all_corrected = true;
    for weight in (2..=args.max_weight).step_by(2) {
        for m in 1..weight {
            let n = weight - m;
            if m % 2 != n % 2 {
                continue;
            }
            let report = check_bernoulli_identity(m, n).map_err(|e| e.to_string())?;
            all_corrected &= report.corrected_sign_matches;
            match args.format {
                TextOrJson::Text => emit(&format!(
                    "m={m:2} n={n:2}  B_{weight} = {}  D = {}  printed={}  corrected={}",
                    rational_str(&report.lhs),
                    rational_str(&report.rhs),
                    if report.printed_sign_matches { "ok" } else { "fail" },
                    if report.corrected_sign_matches { "ok" } else { "fail" },
                )),
                TextOrJson::Json => {
                    let row = IdentityRow {
                        m,
                        n,
                        bernoulli: rational_str(&report.lhs),
                        double_sum: rational_str(&report.rhs),
                        printed_sign_matches: report.printed_sign_matches,
                        corrected_sign_matches: report.corrected_sign_matches,
                    };
                    emit(&serde_json::to_string(&row).expect("row serialization"));
                }
            }
        }
    }
    Ok(if all_corrected {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn parse_range(s: &str) -> Result<(u32, u32), String> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| format!("range must look like 1..5, got {s:?}"))?;
    let a: u32 = a.parse().map_err(|_| format!("bad range start {a:?}"))?;
    let b: u32 = b.parse().map_err(|_| format!("bad range end {b:?}"))?;
    if a < 1 || b < a {
        return Err(format!("range {s:?} is empty or starts below 1"));
    }
    Ok((a, b))
}

#[derive(Serialize)]
struct TableTerm {
    l: u32,
    num: String,
    den: String,
}

#[derive(Serialize)]
struct TableValue {
    f: u64,
    value: String,
}

#[derive(Serialize)]
struct TableEntry {
    m_vec: Vec<u32>,
    pi_power: u32,
    terms: Vec<TableTerm>,
    #[serde(skip_serializing_if = "Option::is_none")]
    values: Option<Vec<TableValue>>,
}

fn cmd_table(args: TableArgs) -> Result<ExitCode, String> {
    let formulas: Vec<MeanValueFormula> = if let Some(range) = &args.single_range {
        let (a, b) = parse_range(range)?;
        (a..=b).map(mean_value_single).collect()
    } else if let Some(range) = &args.pair_grid {
        let (a, b) = parse_range(range)?;
        let mut out = Vec::new();
        for m in a..=b {
            for n in a..=b {
                if m % 2 != n % 2 || (m, n) == (1, 1) {
                    continue;
                }
                out.push(mean_value_pair(m, n).map_err(|e| e.to_string())?);
            }
        }
        out
    } else {
        return Err("give one of --single-range or --pair-grid".into());
    };
    for &f in &args.f_list {
        if f <= 2 {
            return Err(format!("every modulus must exceed 2, got {f}"));
        }
    }

    match args.format {
        CsvOrJson::Csv => {
            if args.f_list.is_empty() {
                emit("m_vec,pi_power,l,coeff");
                for formula in &formulas {
                    let m_vec = join_m_vec(formula.m_vec());
                    for (&l, c) in formula.terms().iter().rev() {
                        emit(&format!("{m_vec},{},{l},{}", formula.pi_power(), rational_str(c)));
                    }
                }
            } else {
                emit("m_vec,pi_power,f,value");
                for formula in &formulas {
                    let m_vec = join_m_vec(formula.m_vec());
                    for &f in &args.f_list {
                        let v = formula.evaluate_exact(f).map_err(|e| e.to_string())?;
                        emit(&format!("{m_vec},{},{f},{}", formula.pi_power(), rational_str(&v)));
                    }
                }
            }
        }
        CsvOrJson::Json => {
            let entries: Result<Vec<TableEntry>, String> = formulas
                .iter()
                .map(|formula| {
                    let values = if args.f_list.is_empty() {
                        None
                    } else {
                        Some(
                            args.f_list
                                .iter()
                                .map(|&f| {
                                    formula
                                        .evaluate_exact(f)
                                        .map(|v| TableValue {
                                            f,
                                            value: rational_str(&v),
                                        })
                                        .map_err(|e| e.to_string())
                                })
                                .collect::<Result<Vec<_>, _>>()?,
                        )
                    };
                    Ok(TableEntry {
                        m_vec: formula.m_vec().to_vec(),
                        pi_power: formula.pi_power(),
                        terms: formula
                            .terms()
                            .iter()
                            .rev()
                            .map(|(&l, c)| TableTerm {
                                l,
                                num: c.numer().to_string(),
                                den: c.denom().to_string(),
                            })
                            .collect(),
                        values,
                    })
                })
                .collect();
            emit(&serde_json::to_string(&entries?).expect("table serialization"));
        }
    }
    Ok(ExitCode::SUCCESS)
}

/// CSV-safe rendering of an exponent vector: `1;1;2`.
fn join_m_vec(m_vec: &[u32]) -> String {
    m_vec
        .iter()
        .map(u32::to_string)
        .collect::<Vec<_>>()
        .join(";")
}
