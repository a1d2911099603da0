use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use charp_dilog::bloch::{li2, li2p, BlochSym};
use charp_dilog::bloch::pounds1;
use charp_dilog::cycles::{rho_cycle, rho_k_cycle};
use charp_dilog::json::{self, breakdown_to_json, elem_to_json, field, TruncJson};
use charp_dilog::regulator::{regulator_breakdown, Breakdown, Functional, PointRef};
use charp_dilog::verify::{run_suite, Suite, SuiteConfig, SuiteReport};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "charp-dilog", version, about = "Additive dilogarithms and regulators in characteristic p")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Plain)]
    format: Format,
    /// Seed for every random choice.
    #[arg(long, global = true, env = "CHARP_DILOG_SEED", default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
    Plain,
}

#[derive(Args)]
struct FieldArgs {
    /// Characteristic, a prime ≥ 5.
    #[arg(long)]
    p: u64,
    /// Modulus of F_q over F_p, low coefficient first, e.g. 2,0,1 for u²+2.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    ext: Option<Vec<i64>>,
}

#[derive(Args)]
struct InputArgs {
    /// JSON input file.
    #[arg(long)]
    input: PathBuf,
}

#[derive(Subcommand)]
enum Cmd {
    /// £₁ on all of F_p, or at one point.
    Li1 {
        #[command(flatten)]
        field: FieldArgs,
        /// Element, as an integer or a JSON coefficient array.
        x: Option<String>,
    },
    /// ℓi₂ of a generator [x], x ∈ F_q[t]/(t²) given as JSON, e.g. [2,3].
    Li2 {
        #[command(flatten)]
        field: FieldArgs,
        x: String,
    },
    /// ℓi₂^(p) of a generator [x].
    Li2p {
        #[command(flatten)]
        field: FieldArgs,
        x: String,
    },
    /// ρ of f∧g∧h on P¹, with the per-point breakdown.
    Rho(InputArgs),
    /// ρ_K of f∧g∧h on P¹, with the per-point breakdown.
    RhoK(InputArgs),
    /// ρ and ρ_K of a parametrized cycle.
    Cycle(InputArgs),
    /// Run a seeded verification suite.
    Verify {
        suite: String,
        #[command(flatten)]
        field: FieldArgs,
        /// Trials; defaults depend on the suite.
        #[arg(long)]
        trials: Option<usize>,
    },
}

#[derive(Debug)]
enum Failure {
    Input(String),
    Verification(String),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Failure {
        Failure::Input(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Verification(out)) => {
            print!("{out}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<String, Failure> {
    let fmt = cli.common.format;
    match &cli.cmd {
        Cmd::Li1 { field: f, x } => li1(f, x.as_deref(), fmt),
        Cmd::Li2 { field: f, x } => dilog(f, x, fmt, "li2"),
        Cmd::Li2p { field: f, x } => dilog(f, x, fmt, "li2p"),
        Cmd::Rho(i) => regulator(i, Functional::Plain, cli.common.seed, fmt),
        Cmd::RhoK(i) => regulator(i, Functional::Kontsevich, cli.common.seed, fmt),
        Cmd::Cycle(i) => cycle(i, fmt),
        Cmd::Verify { suite, field: f, trials } => verify(suite, f, *trials, cli.common.seed, fmt),
    }
}

fn elem_string(x: &charp_dilog::gf::Fq) -> String {
    serde_json::to_string(&elem_to_json(x)).expect("serializable")
}

fn csv_out<S: AsRef<str>>(header: &[&str], rows: impl IntoIterator<Item = Vec<S>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(r.iter().map(|x| x.as_ref())).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

fn json_out(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn li1(f: &FieldArgs, x: Option<&str>, fmt: Format) -> Result<String, Failure> {
    let k = field(f.p, f.ext.as_deref())?;
    let xs = match x {
        Some(s) => vec![json::elem_from_json(k, &serde_json::from_str(s)?)?],
        None => k.elements().collect(),
    };
    let rows: Vec<(String, String)> = xs.iter().map(|x| (elem_string(x), elem_string(&pounds1(x)))).collect();
    Ok(match fmt {
        Format::Json => json_out(&Value::Array(
            xs.iter().map(|x| json!({"x": elem_to_json(x), "li1": elem_to_json(&pounds1(x))})).collect(),
        )),
        Format::Csv => csv_out(&["x", "li1"], rows.iter().map(|(a, b)| vec![a, b])),
        Format::Plain => rows.iter().fold(String::new(), |mut acc, (a, b)| {
            let _ = writeln!(acc, "{a}\t{b}");
            acc
        }),
    })
}

fn dilog(f: &FieldArgs, x: &str, fmt: Format, name: &str) -> Result<String, Failure> {
    let k = field(f.p, f.ext.as_deref())?;
    let t: TruncJson = serde_json::from_str(x)?;
    let x = json::trunc_from_json(k, &t, 2)?;
    if x.modulus() != 2 {
        return Err(Failure::Input(format!("expected an element of F_q[t]/(t^2), got modulus t^{}", x.modulus())));
    }
    let b = BlochSym::gen(x.clone())?;
    let v = if name == "li2" { li2(&b)? } else { li2p(&b)? }.expect("one generator");
    Ok(match fmt {
        Format::Json => json_out(&json!({"x": json::trunc_to_json(&x), name: elem_to_json(&v)})),
        Format::Csv => csv_out(&["x", name], [vec![serde_json::to_string(&json::trunc_to_json(&x))?, elem_string(&v)]]),
        Format::Plain => format!("{}\n", elem_string(&v)),
    })
}

fn point_label(p: PointRef) -> String {
    match p {
        PointRef::Table(i) => i.to_string(),
        PointRef::Infinity => "inf".into(),
    }
}

fn breakdown_out(b: &Breakdown, fmt: Format) -> String {
    match fmt {
        Format::Json => {
            let mut v = breakdown_to_json(b);
            v["schema"] = json!(json::SCHEMA);
            json_out(&v)
        }
        Format::Csv => {
            let rows = b.terms.iter().map(|t| vec![point_label(t.point), t.degree.to_string(), elem_string(&t.value)]);
            csv_out(&["point", "degree", "value"], rows.chain([vec!["total".into(), String::new(), elem_string(&b.total)]]))
        }
        Format::Plain => {
            let mut s = format!("total {}\n", elem_string(&b.total));
            for t in &b.terms {
                let _ = writeln!(s, "point {} degree {} value {}", point_label(t.point), t.degree, elem_string(&t.value));
            }
            s
        }
    }
}

fn read(i: &InputArgs) -> Result<String, Failure> {
    std::fs::read_to_string(&i.input).map_err(|e| Failure::Input(format!("{}: {e}", i.input.display())))
}

fn regulator(i: &InputArgs, fun: Functional, seed: u64, fmt: Format) -> Result<String, Failure> {
    let inp = json::parse_regulator(&read(i)?)?;
    Ok(breakdown_out(&regulator_breakdown(&inp, fun, seed)?, fmt))
}

fn cycle(i: &InputArgs, fmt: Format) -> Result<String, Failure> {
    let z = json::parse_cycle(&read(i)?)?;
    let adm = z.admissibility_check();
    if !adm.is_admissible() {
        return Err(Failure::Input(format!("cycle is not admissible: {adm:?}")));
    }
    let (r, rk) = (rho_cycle(&z.resized(3))?, rho_k_cycle(&z)?);
    Ok(match fmt {
        Format::Json => json_out(&json!({"schema": json::SCHEMA, "rho": elem_to_json(&r), "rho_k": elem_to_json(&rk)})),
        Format::Csv => csv_out(&["rho", "rho_k"], [vec![elem_string(&r), elem_string(&rk)]]),
        Format::Plain => format!("rho {}\nrho_k {}\n", elem_string(&r), elem_string(&rk)),
    })
}

fn report_out(r: &SuiteReport, fmt: Format) -> Result<String, Failure> {
    Ok(match fmt {
        Format::Json => json_out(&serde_json::to_value(r)?),
        Format::Csv => {
            let mut rows = Vec::new();
            for f in &r.failures {
                rows.push(vec![f.trial.to_string(), f.detail.clone(), serde_json::to_string(&f.input)?]);
            }
            csv_out(&["trial", "detail", "input"], rows)
        }
        Format::Plain => {
            let status = if r.ok() { "PASS" } else { "FAIL" };
            let total = r.passed + r.failures.len();
            let mut s = format!("{status} {} p={} seed={}: {}/{total} trials passed\n", r.suite, r.p, r.seed, r.passed);
            for e in &r.excluded {
                let _ = writeln!(s, "excluded {e}");
            }
            for (k, v) in &r.notes {
                let _ = writeln!(s, "note {k}: {v}");
            }
            for f in &r.failures {
                let _ = writeln!(s, "failure trial {}: {}\n  input {}", f.trial, f.detail, serde_json::to_string(&f.input)?);
            }
            s
        }
    })
}

fn verify(suite: &str, f: &FieldArgs, trials: Option<usize>, seed: u64, fmt: Format) -> Result<String, Failure> {
    let suite: Suite = suite.parse()?;
    let cfg = SuiteConfig { suite, p: f.p, ext: f.ext.clone(), seed, trials: trials.unwrap_or(suite.default_trials()) };
    let report = run_suite(&cfg)?;
    let out = report_out(&report, fmt)?;
    if report.ok() {
        Ok(out)
    } else {
        Err(Failure::Verification(out))
    }
}
