//! `grass-slice`: dictionary, phi, slice and lattice counts, flag fibers and
//! the verification suites from the command line.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde_json::{json, Value};

use grass_slice::combinatorics::{kostka, Composition, Partition};
use grass_slice::dictionary::{backward, backward_with_weight, forward, QuiverData};
use grass_slice::flags::{fiber_count_at, fit_count_polynomial, multiplicity_check};
use grass_slice::grassmannian::decomposition_check;
use grass_slice::harness::{run_suite, Suite, SuiteOptions};
use grass_slice::linalg::{ExactMatrix, FieldSpec, MatrixJson, PrimeField, Rationals};
use grass_slice::quiver::{in_lambda, phi, phi_unchecked, QuiverPoint, QuiverPointJson};
use grass_slice::slice::{count_slice_points, DEFAULT_BUDGET};
use grass_slice::{Error, Field, SCHEMA};

#[derive(Parser)]
#[command(name = "grass-slice", version, about = "Quiver varieties, nilpotent slices and lattice models in type A")]
struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Cap on enumerated candidates in brute-force counts.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u128,
    /// Count tables as CSV (case-id,q,count) instead of JSON.
    #[arg(long, global = true)]
    csv: bool,
    /// JSON file supplying any argument not given as a flag.
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Also write the JSON output to this path.
    #[arg(long, global = true)]
    json: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Translate (v, d) to (lambda, mu), or back with --lambda and --mu or --a.
    Dict(DictArgs),
    /// The matrix phi(point) and its Jordan type.
    Phi(PhiArgs),
    /// Jordan type of a nilpotent matrix.
    Jordan,
    /// Points of the slice through x_lambda meeting the closure of O_mu.
    SliceCount(SliceArgs),
    /// Both sides of the stratification count of closure(G_mu).
    Decompose(DecomposeArgs),
    /// Points of the flag fiber over x_lambda, optionally fitted by a polynomial.
    Fiber(FiberArgs),
    /// Leading coefficient of the fiber count against Kostka and Pieri counts.
    MultCheck(MultArgs),
    /// Number of semistandard tableaux.
    Kostka(KostkaArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct DictArgs {
    #[arg(long, value_delimiter = ',')]
    v: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    d: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    lambda: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    mu: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    a: Option<Vec<usize>>,
}

#[derive(Args)]
struct PhiArgs {
    /// Evaluate even when the point is off the zero fiber of the moment map.
    #[arg(long)]
    allow_off_lambda: bool,
}

#[derive(Args)]
struct SliceArgs {
    #[arg(long, value_delimiter = ',')]
    lambda: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    mu: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    q: Option<Vec<u64>>,
}

#[derive(Args)]
struct DecomposeArgs {
    #[arg(long, value_delimiter = ',')]
    mu: Option<Vec<usize>>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    q: Option<Vec<u64>>,
}

#[derive(Args)]
struct FiberArgs {
    #[arg(long, value_delimiter = ',')]
    lambda: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    a: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    q: Option<Vec<u64>>,
    /// Fit the counts by a polynomial in q, checked at every given prime.
    #[arg(long)]
    fit: bool,
}

#[derive(Args)]
struct MultArgs {
    #[arg(long, value_delimiter = ',')]
    v: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    d: Option<Vec<usize>>,
}

#[derive(Args)]
struct KostkaArgs {
    #[arg(long, value_delimiter = ',')]
    shape: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    content: Option<Vec<usize>>,
}

#[derive(Args)]
struct VerifyArgs {
    /// dictionary, phi, slice, psi, decomposition, howe, multiplicity or all.
    #[arg(long, default_value = "all")]
    suite: String,
    /// Points per datum and field in the phi suite.
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long, default_value_t = 10)]
    group_elements: usize,
    /// Largest N in catalog-driven suites (suite default when omitted).
    #[arg(long)]
    max_total: Option<usize>,
    /// Fields for the phi suite, e.g. F5,Q.
    #[arg(long, value_delimiter = ',', default_value = "F5,Q")]
    fields: Vec<String>,
    /// Stop after this many seconds and report the cases run so far.
    #[arg(long)]
    time_limit: Option<f64>,
    /// Replay a single case by key.
    #[arg(long)]
    case: Option<String>,
    /// Include wall time in the report.
    #[arg(long)]
    timing: bool,
}

enum Failure {
    Input(String),
    Budget(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::BudgetExceeded { .. } => Failure::Budget(e.to_string()),
            e => Failure::Input(e.to_string()),
        }
    }
}

type Out = Result<(), Failure>;

struct Ctx {
    input: Option<Value>,
    csv: bool,
    json: Option<PathBuf>,
}

impl Ctx {
    /// The flag value, or the `key` field of the --input document.
    fn get<T: DeserializeOwned>(&self, flag: Option<T>, key: &str) -> Result<T, Failure> {
        if let Some(v) = flag {
            return Ok(v);
        }
        match self.input.as_ref().and_then(|i| i.get(key)) {
            Some(v) => serde_json::from_value(v.clone())
                .map_err(|e| Failure::Input(format!("input field {key:?}: {e}"))),
            None => Err(Failure::Input(format!("missing --{} (flag or input field {key:?})", key.replace('_', "-")))),
        }
    }

    fn has(&self, flag: bool, key: &str) -> bool {
        flag || self.input.as_ref().is_some_and(|i| i.get(key).is_some())
    }

    fn document(&self) -> Result<&Value, Failure> {
        self.input.as_ref().ok_or_else(|| Failure::Input("this command needs --input".into()))
    }

    fn emit(&self, value: &Value) -> Out {
        let text = serde_json::to_string_pretty(value).expect("json");
        say(&text);
        self.write_json(&text)
    }

    fn write_json(&self, text: &str) -> Out {
        if let Some(path) = &self.json {
            fs::write(path, format!("{text}\n"))
                .map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))?;
        }
        Ok(())
    }

    fn emit_counts(&self, case_id: &str, counts: &[(u64, u128)], value: Value) -> Out {
        if self.csv {
            say("case-id,q,count");
            let id = format!("\"{}\"", case_id.replace('"', "\"\""));
            for (q, c) in counts {
                say(&format!("{id},{q},{c}"));
            }
            let text = serde_json::to_string_pretty(&value).expect("json");
            self.write_json(&text)
        } else {
            self.emit(&value)
        }
    }
}

/// Prints a line to stdout; a closed pipe ends the process quietly.
fn say(line: &str) {
    if let Err(e) = writeln!(io::stdout().lock(), "{line}") {
        if e.kind() == io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        panic!("cannot write to stdout: {e}");
    }
}

fn partition(parts: Vec<usize>) -> Result<Partition, Failure> {
    Ok(Partition::new(parts)?)
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

fn run(cli: Cli) -> Out {
    let input = match &cli.input {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
            let value: Value = serde_json::from_str(&text)
                .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            if let Some(schema) = value.get("schema").and_then(Value::as_str) {
                if schema != SCHEMA {
                    return Err(Failure::Input(format!("{}: schema {schema:?}, expected {SCHEMA:?}", path.display())));
                }
            }
            Some(value)
        }
        None => None,
    };
    let ctx = Ctx { input, csv: cli.csv, json: cli.json.clone() };
    let budget = cli.budget;
    match cli.command {
        Command::Dict(a) => dict(&ctx, a),
        Command::Phi(a) => phi_cmd(&ctx, a),
        Command::Jordan => jordan(&ctx),
        Command::SliceCount(a) => {
            let lambda = partition(ctx.get(a.lambda, "lambda")?)?;
            let mu = partition(ctx.get(a.mu, "mu")?)?;
            let qs: Vec<u64> = ctx.get(a.q, "q")?;
            let mut counts = Vec::new();
            for &q in &qs {
                counts.push((q, count_slice_points(&lambda, &mu, q, budget)?));
            }
            let value = json!({
                "schema": SCHEMA,
                "lambda": lambda.parts(),
                "mu": mu.parts(),
                "counts": counts.iter().map(|(q, c)| json!({"q": q, "count": c.to_string()})).collect::<Vec<_>>(),
            });
            ctx.emit_counts(&format!("lambda={};mu={}", join(lambda.parts()), join(mu.parts())), &counts, value)
        }
        Command::Decompose(a) => {
            let mu = partition(ctx.get(a.mu, "mu")?)?;
            let m: usize = ctx.get(a.m, "m")?;
            let qs: Vec<u64> = ctx.get(a.q, "q")?;
            let mut reports = Vec::new();
            let mut counts = Vec::new();
            for &q in &qs {
                let r = decomposition_check(&mu, m, q, budget)?;
                counts.push((q, r.grassmannian_points));
                reports.push(r);
            }
            let holds = reports.iter().all(|r| r.holds);
            let value = json!({"schema": SCHEMA, "reports": reports, "holds": holds});
            ctx.emit_counts(&format!("mu={};m={m}", join(mu.parts())), &counts, value)?;
            if holds {
                Ok(())
            } else {
                Err(Failure::Verification("the stratification count does not balance".into()))
            }
        }
        Command::Fiber(a) => {
            let lambda = partition(ctx.get(a.lambda, "lambda")?)?;
            let weight = Composition::new(ctx.get(a.a, "a")?);
            let qs: Vec<u64> = ctx.get(a.q, "q")?;
            let mut counts = Vec::new();
            for &q in &qs {
                counts.push((q, fiber_count_at(&lambda, &weight, q, budget)?));
            }
            let mut value = json!({
                "schema": SCHEMA,
                "lambda": lambda.parts(),
                "a": weight.entries(),
                "counts": counts.iter().map(|(q, c)| json!({"q": q, "count": c.to_string()})).collect::<Vec<_>>(),
            });
            if ctx.has(a.fit, "fit") {
                let poly = fit_count_polynomial(&lambda, &weight, &qs)?;
                value["polynomial"] = json!(poly.to_string());
                value["coefficients"] = json!(poly.coefficients.iter().map(ToString::to_string).collect::<Vec<_>>());
                value["leading"] = json!(poly.leading().to_string());
            }
            ctx.emit_counts(&format!("lambda={};a={}", join(lambda.parts()), join(weight.entries())), &counts, value)
        }
        Command::MultCheck(a) => {
            let data = QuiverData::from_vectors(&ctx.get(a.v, "v")?, &ctx.get(a.d, "d")?)?;
            let r = multiplicity_check(&data)?;
            let mut value = serde_json::to_value(&r).expect("json");
            value["schema"] = json!(SCHEMA);
            value["polynomial_text"] = json!(r.polynomial.to_string());
            ctx.emit(&value)?;
            if r.holds {
                Ok(())
            } else {
                Err(Failure::Verification("multiplicities disagree".into()))
            }
        }
        Command::Kostka(a) => {
            let shape = partition(ctx.get(a.shape, "shape")?)?;
            let content = Composition::new(ctx.get(a.content, "content")?);
            let k = kostka(&shape, &content)?;
            say(&k.to_string());
            ctx.write_json(&json!({"schema": SCHEMA, "shape": shape.parts(), "content": content.entries(), "kostka": k.to_string()}).to_string())
        }
        Command::Verify(a) => verify(&ctx, cli.seed, budget, a),
    }
}

fn dict(ctx: &Ctx, a: DictArgs) -> Out {
    let by_partitions = a.lambda.is_some() || (a.v.is_none() && ctx.input.as_ref().is_some_and(|i| i.get("lambda").is_some()));
    let rec = if by_partitions {
        let lambda = partition(ctx.get(a.lambda, "lambda")?)?;
        if ctx.has(a.a.is_some(), "a") {
            backward_with_weight(&lambda, &Composition::new(ctx.get(a.a, "a")?))?.1
        } else {
            backward(&lambda, &partition(ctx.get(a.mu, "mu")?)?)?.1
        }
    } else {
        forward(&QuiverData::from_vectors(&ctx.get(a.v, "v")?, &ctx.get(a.d, "d")?)?)?
    };
    let mut value = serde_json::to_value(&rec).expect("json");
    value["schema"] = json!(SCHEMA);
    ctx.emit(&value)
}

fn phi_on<F: Field>(ctx: &Ctx, pj: &QuiverPointJson, field: &F, allow: bool) -> Out {
    let pt: QuiverPoint<F> = pj.to_point(field)?;
    let rec = forward(&pt.data)?;
    let on_lambda = in_lambda(&pt)?;
    let matrix = if allow && !on_lambda { phi_unchecked(&pt, &rec)? } else { phi(&pt, &rec)? };
    let jordan = match matrix.jordan_type() {
        Ok(p) => json!(p.parts()),
        Err(Error::NotNilpotent) => Value::Null,
        Err(e) => return Err(e.into()),
    };
    let rows: Vec<Vec<String>> =
        (0..matrix.rows()).map(|r| (0..matrix.cols()).map(|c| field.render(matrix.get(r, c))).collect()).collect();
    ctx.emit(&json!({
        "schema": SCHEMA,
        "field": field.spec(),
        "lambda": rec.lambda,
        "mu": rec.mu,
        "in_lambda": on_lambda,
        "matrix": rows,
        "jordan_type": jordan,
    }))
}

fn phi_cmd(ctx: &Ctx, a: PhiArgs) -> Out {
    let doc = ctx.document()?;
    let pj: QuiverPointJson =
        serde_json::from_value(doc.clone()).map_err(|e| Failure::Input(format!("point: {e}")))?;
    let allow = ctx.has(a.allow_off_lambda, "allow_off_lambda");
    match pj.field {
        FieldSpec::Rationals => phi_on(ctx, &pj, &Rationals, allow),
        FieldSpec::Prime(p) => phi_on(ctx, &pj, &PrimeField::new(p)?, allow),
    }
}

fn jordan(ctx: &Ctx) -> Out {
    let doc = ctx.document()?;
    let mj: MatrixJson = serde_json::from_value(doc.clone()).map_err(|e| Failure::Input(format!("matrix: {e}")))?;
    let m = ExactMatrix::from_json(&mj)?;
    let ty = m.jordan_type()?;
    say(&join(ty.parts()));
    ctx.write_json(&json!({"schema": SCHEMA, "jordan_type": ty.parts()}).to_string())
}

fn verify(ctx: &Ctx, seed: u64, budget: u128, a: VerifyArgs) -> Out {
    let suite: Suite = a.suite.parse()?;
    let fields = a
        .fields
        .iter()
        .map(|f| f.parse::<FieldSpec>())
        .collect::<Result<Vec<_>, _>>()?;
    let time_limit = match a.time_limit {
        Some(s) if !(s.is_finite() && s >= 0.0) => return Err(Failure::Input(format!("bad --time-limit {s}"))),
        Some(s) => Some(Duration::from_secs_f64(s)),
        None => None,
    };
    let opts = SuiteOptions {
        seed,
        samples: a.samples,
        group_elements: a.group_elements,
        max_total: a.max_total,
        fields,
        budget,
        time_limit,
        timing: a.timing,
        case: a.case,
        ..SuiteOptions::default()
    };
    let report = run_suite(suite, &opts)?;
    say(report.render_human().trim_end());
    ctx.write_json(&report.to_json())?;
    match report.exit_code() {
        0 => Ok(()),
        2 => Err(Failure::Budget(report.budget_exceeded.clone().unwrap_or_default())),
        _ => Err(Failure::Verification(format!("{} failures", report.failures.len()))),
    }
}

fn main() -> ExitCode {
    if let Some(n) = std::env::var("GRASS_SLICE_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Budget(msg)) => {
            eprintln!("budget exceeded: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(3)
        }
    }
}
