//! `clarkrif`: analyze, verify and plot Clark measures of bidegree (n,1)
//! rational inner functions.

mod alpha;
mod verify;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use clarkrif::catalog::{self, CatalogEntry};
use clarkrif::clark::{
    classify_extreme, classify_unitary, clark_measure, level_set_sample, nearest_exceptional_distance, Extremality,
    Unitarity, UNITARITY_SCOPE,
};
use clarkrif::rif::{validate, BiPolyN1, Rif};
use clarkrif::{Complex64, Error};
use serde_json::{json, Value};

/// Alphas closer than this to an exceptional value get a conditioning warning.
const NEAR_EXCEPTIONAL_WARN: f64 = 1e-4;

const EXIT_INPUT: u8 = 2;
const EXIT_NUMERIC: u8 = 3;
const EXIT_SUITE: u8 = 4;

#[derive(Parser)]
#[command(name = "clarkrif", version, about = "Clark measures of bidegree (n,1) rational inner functions on the bidisk")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form Clark measure of one alpha as a JSON report.
    Analyze(AnalyzeArgs),
    /// Run the invariant suites and report per-suite maximal deviations.
    Verify(VerifyArgs),
    /// Write the unimodular level set of each alpha as CSV.
    Levelset(LevelsetArgs),
    /// List the built-in examples or print one of them.
    Catalog(CatalogArgs),
}

#[derive(Args)]
struct Common {
    /// Catalog name or path to a JSON file holding {"n", "p1", "p2"} (or {"rif": {...}}).
    input: String,
    /// Quadrature nodes (curve part and each line).
    #[arg(long, default_value_t = clarkrif::clark::DEFAULT_NODES)]
    nodes: usize,
    #[arg(long, default_value_t = clarkrif::DEFAULT_TOL)]
    tol: f64,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    common: Common,
    /// Unimodular constant, e.g. -1, i, 0.6+0.8i, exp(i*pi/4), e^{iπ/2}.
    #[arg(long, allow_hyphen_values = true)]
    alpha: String,
    /// JSON report (default).
    #[arg(long)]
    json: bool,
    /// Discretized measure as CSV rows theta1,theta2,weight,branch instead of JSON.
    #[arg(long, conflicts_with = "json")]
    csv: bool,
    /// Write to this file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: Common,
    /// Comma-separated suites (properties, poisson, mass, gram, agler, pointmass, facts); default all.
    #[arg(long, value_delimiter = ',')]
    suite: Vec<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// JSON report (the only format).
    #[arg(long)]
    json: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct LevelsetArgs {
    #[command(flatten)]
    common: Common,
    /// Comma-separated list of unimodular constants.
    #[arg(long, allow_hyphen_values = true)]
    alphas: String,
    /// Directory receiving one CSV per alpha.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Rows emitted for each vertical line component.
    #[arg(long, default_value_t = 256)]
    line_samples: usize,
    /// CSV output (the only format).
    #[arg(long)]
    csv: bool,
}

#[derive(Args)]
struct CatalogArgs {
    /// Print this entry instead of the list.
    name: Option<String>,
    #[arg(long)]
    json: bool,
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if e.is_validation() { EXIT_INPUT } else { EXIT_NUMERIC };
        Failure { code, message: e.to_string() }
    }
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_INPUT, message: message.into() }
}

fn warn(msg: &str) {
    eprintln!("warning: {msg}");
}

/// Catalog entry or JSON file.
fn load_input(input: &str, tol: f64) -> Result<(Rif, Option<CatalogEntry>), Failure> {
    let (poly, entry) = match catalog::get(input) {
        Some(e) => (e.rif.clone(), Some(e)),
        None => {
            let path = Path::new(input);
            if !path.exists() {
                return Err(input_error(format!(
                    "{input:?} is neither a catalog entry ({}) nor an existing file",
                    catalog::names().join(", ")
                )));
            }
            let text = fs::read_to_string(path).map_err(|e| input_error(format!("cannot read {input}: {e}")))?;
            (parse_poly(&text).map_err(|e| input_error(format!("{input}: {e}")))?, None)
        }
    };
    Ok((validate(&poly, tol)?, entry))
}

fn parse_poly(text: &str) -> Result<BiPolyN1, String> {
    let v: Value = serde_json::from_str(text).map_err(|e| e.to_string())?;
    let v = v.get("rif").cloned().unwrap_or(v);
    let p: BiPolyN1 = serde_json::from_value(v).map_err(|e| e.to_string())?;
    BiPolyN1::new(p.n, p.p1, p.p2).map_err(|e| e.to_string())
}

fn parse_alpha_checked(text: &str, rif: &Rif, tol: f64) -> Result<Complex64, Failure> {
    let (alpha, warning) = alpha::parse_alpha(text).map_err(input_error)?;
    if let Some(w) = warning {
        warn(&w);
    }
    warn_if_near_exceptional(rif, alpha, tol);
    Ok(alpha)
}

fn warn_if_near_exceptional(rif: &Rif, alpha: Complex64, tol: f64) {
    if let Some(d) = nearest_exceptional_distance(rif, alpha) {
        if d >= tol && d < NEAR_EXCEPTIONAL_WARN {
            warn(&format!(
                "alpha = {alpha} is within {d:e} of an exceptional value; the curve weight is ill-conditioned"
            ));
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| input_error(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

fn analyze(args: AnalyzeArgs) -> Result<(), Failure> {
    let Common { input, nodes, tol } = args.common;
    let (rif, _) = load_input(&input, tol)?;
    let alpha = parse_alpha_checked(&args.alpha, &rif, tol)?;
    let cm = clark_measure(&rif, alpha, tol)?;
    if args.csv {
        let d = cm.discretize(nodes);
        let mut s = String::from("theta1,theta2,weight,branch\n");
        for ((z, w), wt) in &d.curve {
            let _ = writeln!(s, "{:.12},{:.12},{wt:e},curve", z.arg(), w.arg());
        }
        for (k, (tau, wt)) in d.lines.iter().enumerate() {
            for w in &d.line_nodes {
                let _ = writeln!(s, "{:.12},{:.12},{wt:e},line_{}", tau.arg(), w.arg(), k + 1);
            }
        }
        return emit(args.out.as_deref(), &s);
    }
    let mut report = serde_json::to_value(cm.report(nodes)).expect("report serializes");
    let unitary = classify_unitary(&rif, alpha, tol)? == Unitarity::Unitary;
    let extreme = classify_extreme(&rif, alpha, tol)?;
    let obj = report.as_object_mut().expect("report is an object");
    obj.insert("input".into(), json!(input));
    obj.insert("unitary".into(), json!(unitary));
    obj.insert("unitarity_scope".into(), json!(UNITARITY_SCOPE));
    obj.insert("extreme".into(), json!(extreme.label()));
    if let Extremality::Undetermined(reason) = &extreme {
        obj.insert("extreme_reason".into(), json!(reason));
    }
    obj.insert("nearest_exceptional_distance".into(), json!(nearest_exceptional_distance(&rif, alpha)));
    emit(args.out.as_deref(), &pretty(&report))
}

fn run_verify(args: VerifyArgs) -> Result<(), Failure> {
    let Common { input, nodes, tol } = args.common;
    let (rif, entry) = load_input(&input, tol)?;
    let selected: Vec<String> = if args.suite.is_empty() || args.suite.iter().any(|s| s == "all") {
        verify::SUITES.iter().map(|s| s.to_string()).collect()
    } else {
        args.suite.clone()
    };
    if let Some(bad) = selected.iter().find(|s| !verify::SUITES.contains(&s.as_str())) {
        return Err(input_error(format!("unknown suite {bad:?}; choose from {}", verify::SUITES.join(", "))));
    }
    if selected.iter().any(|s| s == "facts") && entry.is_none() && !args.suite.is_empty() {
        return Err(input_error("the facts suite needs a catalog entry as input"));
    }
    let ctx = verify::Context { rif: &rif, entry: entry.as_ref(), nodes, tol, seed: args.seed };
    let results: Vec<verify::SuiteResult> = selected.iter().filter_map(|s| verify::run(s, &ctx)).collect();
    let passed = results.iter().all(|r| r.passed);
    let report = json!({
        "input": input,
        "seed": args.seed,
        "nodes": nodes,
        "tol": tol,
        "passed": passed,
        "suites": results,
    });
    emit(args.out.as_deref(), &pretty(&report))?;
    for r in results.iter().filter(|r| !r.passed) {
        eprintln!("suite {} failed (max deviation {:e})", r.suite, r.max_deviation);
    }
    if results.iter().any(|r| r.numeric_failure) {
        return Err(Failure { code: EXIT_NUMERIC, message: "a suite hit a numeric error".into() });
    }
    if !passed {
        return Err(Failure { code: EXIT_SUITE, message: "verification failed".into() });
    }
    Ok(())
}

/// File-name friendly form of an alpha token.
fn slug(token: &str) -> String {
    let s: String = token
        .chars()
        .map(|c| match c {
            'a'..='z' | 'A'..='Z' | '0'..='9' | '.' | '-' | '+' => c,
            'π' => 'p',
            _ => '_',
        })
        .collect();
    let mut out = String::new();
    for c in s.trim_matches('_').chars() {
        if !(c == '_' && out.ends_with('_')) {
            out.push(c);
        }
    }
    out
}

fn levelset(args: LevelsetArgs) -> Result<(), Failure> {
    let Common { input, nodes, tol } = args.common;
    let (rif, _) = load_input(&input, tol)?;
    let alphas = alpha::parse_alpha_list(&args.alphas).map_err(input_error)?;
    if alphas.is_empty() {
        return Err(input_error("--alphas is empty"));
    }
    fs::create_dir_all(&args.out).map_err(|e| input_error(format!("cannot create {}: {e}", args.out.display())))?;
    let stem = Path::new(&input).file_stem().and_then(|s| s.to_str()).unwrap_or("rif").to_string();
    for (k, (token, alpha, warning)) in alphas.iter().enumerate() {
        if let Some(w) = warning {
            warn(w);
        }
        warn_if_near_exceptional(&rif, *alpha, tol);
        let ls = level_set_sample(&rif, *alpha, nodes, tol)?;
        let path = args.out.join(format!("{stem}_{}_{}.csv", k + 1, slug(token)));
        fs::write(&path, ls.to_csv(args.line_samples))
            .map_err(|e| input_error(format!("cannot write {}: {e}", path.display())))?;
        println!("{}", path.display());
    }
    Ok(())
}

fn show_catalog(args: CatalogArgs) -> Result<(), Failure> {
    match args.name {
        Some(name) => {
            let e = catalog::get(&name).ok_or_else(|| input_error(format!("unknown catalog entry {name:?}")))?;
            emit(None, &pretty(&serde_json::to_value(e).expect("entry serializes")))
        }
        None if args.json => emit(None, &pretty(&serde_json::to_value(catalog::entries()).expect("entries serialize"))),
        None => {
            let mut s = String::new();
            for e in catalog::entries() {
                let _ = writeln!(s, "{:<12} n={}  {}", e.name, e.rif.n, e.description);
            }
            emit(None, &s)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze(a) => analyze(a),
        Command::Verify(a) => run_verify(a),
        Command::Levelset(a) => levelset(a),
        Command::Catalog(a) => show_catalog(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
