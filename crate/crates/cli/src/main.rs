use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use pcf_core::heights::height_report;
use pcf_core::pcf::portrait::portrait_of;
use pcf_core::pcf::{
    classify, conjugacy_dedupe, critical_divisor, derive_search_bound, orbit_certify, search_box, tuple_count,
    Budgets, ConjugacyClass, OrbitStatus, Quad, SearchConfig, SearchReport,
};
use pcf_core::pushforward::{pushforward, RadicalOrbit};
use pcf_core::{normalize_divisor, Divisor, Error, Form, PolyMap, Rational};

const EXIT_INVALID: u8 = 2;
const EXIT_UNKNOWN: u8 = 3;
const EXIT_DEFECT: u8 = 4;

#[derive(Parser)]
#[command(name = "pcf", version, about = "Exact tools for monic polynomial maps of projective space")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args, Clone)]
struct MapArgs {
    /// PolyMap JSON file
    #[arg(long, conflicts_with = "quad")]
    map: Option<PathBuf>,
    /// Quadratic family member a,b,c,d (integers or fractions)
    #[arg(long, allow_hyphen_values = true)]
    quad: Option<String>,
}

#[derive(Args, Clone)]
struct Common {
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write output here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct Budget {
    #[arg(long, default_value_t = 8)]
    max_steps: usize,
    #[arg(long, default_value_t = 128, value_parser = clap::value_parser!(u32).range(16..=4096))]
    precision: u32,
}

#[derive(Subcommand)]
enum Command {
    /// Jacobian form J_f
    Jacobian {
        #[command(flatten)]
        map: MapArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Divisor pushforward f_*(D)
    Pushforward {
        #[command(flatten)]
        map: MapArgs,
        /// Form JSON file
        #[arg(long)]
        divisor: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Radical orbit of a divisor (the critical divisor by default)
    Orbit {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long)]
        divisor: Option<PathBuf>,
        #[command(flatten)]
        budget: Budget,
        #[command(flatten)]
        common: Common,
    },
    /// PCF / non-PCF certificate
    Classify {
        #[command(flatten)]
        map: MapArgs,
        #[command(flatten)]
        budget: Budget,
        #[command(flatten)]
        common: Common,
    },
    /// Per-place heights of the critical divisor
    Heights {
        #[command(flatten)]
        map: MapArgs,
        #[command(flatten)]
        budget: Budget,
        #[command(flatten)]
        common: Common,
    },
    /// Box search over the integer quadratic family
    Search {
        #[arg(long = "box")]
        bound: i64,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        /// Stop after about this many tuples (for staged runs)
        #[arg(long)]
        stop_after: Option<u64>,
        /// Tuples per checkpointed chunk
        #[arg(long, default_value_t = 512, value_parser = clap::value_parser!(u64).range(1..))]
        chunk_size: u64,
        #[command(flatten)]
        budget: Budget,
        #[command(flatten)]
        common: Common,
    },
    /// Group quadratic tuples into conjugacy classes
    Dedupe {
        /// Tuples a,b,c,d; options must come before them
        #[arg(allow_hyphen_values = true)]
        tuples: Vec<String>,
        /// File with one tuple per line
        #[arg(long)]
        input: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Coefficient bound for PCF quadratic maps
    Bound {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        d: u32,
        #[command(flatten)]
        common: Common,
    },
}

enum Failure {
    Invalid(String),
    Defect(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::ResultantFailure => Failure::Defect(e.to_string()),
            _ => Failure::Invalid(e.to_string()),
        }
    }
}

type Res<T> = std::result::Result<T, Failure>;

fn invalid<T>(msg: impl Into<String>) -> Res<T> {
    Err(Failure::Invalid(msg.into()))
}

fn parse_quad_rational(s: &str) -> Res<[Rational; 4]> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return invalid(format!("expected four comma-separated values, got {s:?}"));
    }
    let mut out = Vec::new();
    for p in parts {
        out.push(p.parse::<Rational>().map_err(|_| Failure::Invalid(format!("bad number {p:?}")))?);
    }
    Ok([out[0].clone(), out[1].clone(), out[2].clone(), out[3].clone()])
}

fn parse_quad_int(s: &str) -> Res<Quad> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return invalid(format!("expected four comma-separated integers, got {s:?}"));
    }
    let mut t = [0i64; 4];
    for (slot, p) in t.iter_mut().zip(parts) {
        *slot = p.parse().map_err(|_| Failure::Invalid(format!("bad integer {p:?}")))?;
    }
    Ok(t)
}

fn read_file(p: &PathBuf) -> Res<String> {
    fs::read_to_string(p).map_err(|e| Failure::Invalid(format!("{}: {e}", p.display())))
}

fn load_map(m: &MapArgs) -> Res<PolyMap> {
    match (&m.map, &m.quad) {
        (Some(p), None) => Ok(PolyMap::from_json_str(&read_file(p)?)?),
        (None, Some(q)) => {
            let [a, b, c, d] = parse_quad_rational(q)?;
            Ok(PolyMap::quadratic(a, b, c, d))
        }
        _ => invalid("exactly one of --map or --quad is required"),
    }
}

fn load_divisor(p: &PathBuf, f: &PolyMap) -> Res<Divisor> {
    let form = Form::from_json_str(&read_file(p)?)?;
    if form.nvars() != f.n() + 1 {
        return invalid(format!("divisor has {} variables, map needs {}", form.nvars(), f.n() + 1));
    }
    Ok(normalize_divisor(&form)?)
}

fn no_csv(c: &Common) -> Res<()> {
    if c.format == Format::Csv {
        return invalid("csv output is only available for search and dedupe");
    }
    Ok(())
}

fn emit(c: &Common, body: String) -> Res<()> {
    let body = if body.ends_with('\n') { body } else { body + "\n" };
    match &c.out {
        Some(p) => fs::write(p, body).map_err(|e| Failure::Invalid(format!("{}: {e}", p.display()))),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json")
}

fn quad_string(t: &Quad) -> String {
    format!("{},{},{},{}", t[0], t[1], t[2], t[3])
}

fn classes_json(classes: &[ConjugacyClass]) -> Value {
    Value::Array(
        classes
            .iter()
            .map(|c| json!({"representative": c.representative, "members": c.members}))
            .collect(),
    )
}

fn search_csv(r: &SearchReport) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["tuple", "verdict", "witness_place", "witness_step", "class_representative"]).unwrap();
    for s in &r.survivors {
        let rep = r.representative_of(&s.tuple).map(|t| quad_string(&t)).unwrap_or_default();
        let step = if s.verdict == "PCF_PROVEN" { s.step.to_string() } else { String::new() };
        w.write_record([quad_string(&s.tuple), s.verdict.clone(), String::new(), step, rep]).unwrap();
    }
    String::from_utf8(w.into_inner().unwrap()).unwrap()
}

fn search_summary(r: &SearchReport) -> Value {
    json!({
        "box": r.bound,
        "total": r.total,
        "processed": r.processed,
        "complete": r.complete,
        "not_pcf": r.not_pcf,
        "not_pcf_by_place": r.not_pcf_by_place,
        "pcf": r.pcf().map(|s| s.tuple).collect::<Vec<_>>(),
        "unknown": r.unknown().map(|s| s.tuple).collect::<Vec<_>>(),
        "classes": classes_json(&r.classes),
    })
}

fn run(cli: Cli) -> Res<u8> {
    match cli.command {
        Command::Jacobian { map, common } => {
            no_csv(&common)?;
            let f = load_map(&map)?;
            let j = f.jacobian_form();
            let body = match common.format {
                Format::Text => j.to_string(),
                _ => j.to_json_string(),
            };
            emit(&common, body)?;
            Ok(0)
        }
        Command::Pushforward { map, divisor, common } => {
            no_csv(&common)?;
            let f = load_map(&map)?;
            let d = load_divisor(&divisor, &f)?;
            let img = pushforward(&f, &d)?;
            let body = match common.format {
                Format::Text => img.form().to_string(),
                _ => img.form().to_json_string(),
            };
            emit(&common, body)?;
            Ok(0)
        }
        Command::Orbit { map, divisor, budget, common } => {
            no_csv(&common)?;
            let f = load_map(&map)?;
            let d = match &divisor {
                Some(p) => load_divisor(p, &f)?,
                None => critical_divisor(&f),
            };
            let rec = orbit_certify(&f, &d, budget.max_steps)?;
            let proven = matches!(rec.status, OrbitStatus::PreperiodicProvenAt(_));
            let portrait = if proven {
                let mut orbit = RadicalOrbit::new(&f, &d)?;
                orbit.get(rec.steps.len() - 1)?;
                Some(portrait_of(&f, orbit.computed())?)
            } else {
                None
            };
            let body = match common.format {
                Format::Text => {
                    let mut s = String::new();
                    for st in &rec.steps {
                        s += &format!("R_{} (degree {}): {}\n", st.n, st.degree, st.radical);
                    }
                    s += &format!("{:?}\n", rec.status);
                    if let Some(p) = &portrait {
                        s += &p.to_string();
                    }
                    s
                }
                _ => {
                    let mut v = rec.to_json();
                    if let Some(p) = &portrait {
                        v["portrait"] = p.to_json();
                    }
                    pretty(&v)
                }
            };
            emit(&common, body)?;
            Ok(if proven { 0 } else { EXIT_UNKNOWN })
        }
        Command::Classify { map, budget, common } => {
            no_csv(&common)?;
            let f = load_map(&map)?;
            let cert = classify(&f, Budgets { max_steps: budget.max_steps, precision: budget.precision })?;
            let body = match common.format {
                Format::Text => cert.verdict.to_string(),
                _ => pretty(&cert.to_json()),
            };
            emit(&common, body)?;
            Ok(if cert.verdict.is_unknown() { EXIT_UNKNOWN } else { 0 })
        }
        Command::Heights { map, budget, common } => {
            no_csv(&common)?;
            let f = load_map(&map)?;
            let rep = height_report(&f, budget.max_steps, budget.precision)?;
            let body = match common.format {
                Format::Text => {
                    let mut s = String::new();
                    for p in rep["places"].as_array().unwrap() {
                        s += &format!("place {}: B = {}, lambda_crit = {}\n", p["place"], p["B"], p["lambda_crit"]);
                    }
                    s += &format!("h_Weil in {}\nh_crit in {}\n", rep["weil_height"], rep["crit_height"]);
                    s
                }
                _ => pretty(&rep),
            };
            emit(&common, body)?;
            Ok(0)
        }
        Command::Search { bound, threads, checkpoint, stop_after, chunk_size, budget, common } => {
            if bound < 0 {
                return invalid("--box must be non-negative");
            }
            if threads == 0 {
                return invalid("--threads must be positive");
            }
            let mut cfg = SearchConfig::new(bound);
            cfg.threads = threads;
            cfg.checkpoint = checkpoint;
            cfg.stop_after = stop_after;
            cfg.chunk_size = chunk_size as usize;
            cfg.budgets = Budgets { max_steps: budget.max_steps, precision: budget.precision };
            let r = search_box(&cfg)?;
            let csv = search_csv(&r);
            match (&common.out, common.format) {
                (Some(p), _) => {
                    fs::write(p, &csv).map_err(|e| Failure::Invalid(format!("{}: {e}", p.display())))?;
                    let summary = match common.format {
                        Format::Text => format!(
                            "{} of {} tuples processed, {} not PCF, {} PCF, {} unknown, {} classes",
                            r.processed,
                            r.total,
                            r.not_pcf,
                            r.pcf().count(),
                            r.unknown().count(),
                            r.classes.len()
                        ),
                        _ => pretty(&search_summary(&r)),
                    };
                    println!("{summary}");
                }
                (None, Format::Csv) => print!("{csv}"),
                (None, Format::Text) => {
                    for c in &r.classes {
                        println!("{} <- {}", quad_string(&c.representative), c.members.iter().map(quad_string).collect::<Vec<_>>().join(" "));
                    }
                }
                (None, Format::Json) => println!("{}", pretty(&search_summary(&r))),
            }
            Ok(if r.unknown().next().is_some() { EXIT_UNKNOWN } else { 0 })
        }
        Command::Dedupe { tuples, input, common } => {
            let mut all = Vec::new();
            if let Some(p) = &input {
                for line in read_file(p)?.lines().map(str::trim).filter(|l| !l.is_empty()) {
                    all.push(parse_quad_int(line)?);
                }
            }
            for t in &tuples {
                all.push(parse_quad_int(t)?);
            }
            let classes = conjugacy_dedupe(&all);
            let body = match common.format {
                Format::Json => pretty(&classes_json(&classes)),
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(Vec::new());
                    w.write_record(["tuple", "class_representative"]).unwrap();
                    for c in &classes {
                        for m in &c.members {
                            w.write_record([quad_string(m), quad_string(&c.representative)]).unwrap();
                        }
                    }
                    String::from_utf8(w.into_inner().unwrap()).unwrap()
                }
                Format::Text => classes
                    .iter()
                    .map(|c| format!("{} <- {}", quad_string(&c.representative), c.members.iter().map(quad_string).collect::<Vec<_>>().join(" ")))
                    .collect::<Vec<_>>()
                    .join("\n"),
            };
            emit(&common, body)?;
            Ok(0)
        }
        Command::Bound { n, d, common } => {
            no_csv(&common)?;
            let b = derive_search_bound(n, d)?;
            let count = tuple_count(b);
            let body = match common.format {
                Format::Text => format!("max(|a|,|b|,|c|,|d|) <= {b}; {count} tuples with a, d even"),
                _ => pretty(&json!({"bound": b, "tuple_count": count.to_string()})),
            };
            emit(&common, body)?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = std::panic::catch_unwind(move || run(cli));
    match outcome {
        Ok(Ok(code)) => ExitCode::from(code),
        Ok(Err(Failure::Invalid(msg))) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INVALID)
        }
        Ok(Err(Failure::Defect(msg))) => {
            eprintln!("internal defect: {msg}");
            ExitCode::from(EXIT_DEFECT)
        }
        Err(_) => ExitCode::from(EXIT_DEFECT),
    }
}
