use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use dynforge_core::ga::{random_baseline, run_with, GenerationRecord};
use dynforge_core::{
    parse_config, parse_map, preperiodic_census, verify_orbit, CensusParams, ConfigFileError, DynSystem, Flavor,
    GAConfig, Integer, Orbit, RunOptions, Target,
};

const SCHEMA: u32 = 1;

const EXIT_CONFIG: u8 = 2;
const EXIT_MISMATCH: u8 = 3;

#[derive(Parser)]
#[command(
    name = "dynforge",
    version,
    about = "Genetic search for extreme rational dynamical systems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the genetic search and stream JSONL records.
    Search(SearchArgs),
    /// Interpolate one orbit and report its map, invariants and score.
    VerifyOrbit(VerifyArgs),
    /// Rational preperiodic points of a map, with the f-graph.
    Census(CensusArgs),
    /// GA best-so-far against random sampling with the same budget, as CSV.
    Baseline(BaselineArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Configuration file (`key = value` or `params['key'] = value`).
    #[arg(long)]
    config: PathBuf,
    /// Overrides the seed in the configuration.
    #[arg(long)]
    seed: Option<u64>,
    /// Scoring threads; results do not depend on this.
    #[arg(long, default_value_t = 1)]
    threads: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SearchArgs {
    #[command(flatten)]
    run: RunArgs,
    #[arg(long, default_value_t = 10)]
    hall_size: usize,
    /// Record wall time in the summary (makes files differ between runs).
    #[arg(long)]
    wall_time: bool,
}

#[derive(Args)]
struct OrbitArgs {
    #[arg(long)]
    degree: usize,
    /// `poly`/`polynomial` or `rational`.
    #[arg(long, value_parser = parse_flavor)]
    map_type: Flavor,
    /// Orbit of 0, e.g. "0,-2,1,-3".
    #[arg(long, allow_hyphen_values = true)]
    orbit: String,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    orbit: OrbitArgs,
    #[arg(long, value_parser = parse_target)]
    target: Target,
    /// `(w_n, w_m)` for the period targets, e.g. "5,1".
    #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
    weights: Option<(f64, f64)>,
    /// Expected score; a mismatch exits with status 3.
    #[arg(long, allow_hyphen_values = true)]
    expect: Option<f64>,
    #[arg(long, default_value_t = 0.0)]
    tolerance: f64,
    /// Expected dehomogenized map, e.g. "1/6z^2 - 7/6z - 2".
    #[arg(long, allow_hyphen_values = true)]
    expect_map: Option<String>,
    #[arg(long)]
    pretty: bool,
}

#[derive(Args)]
struct CensusArgs {
    #[arg(long)]
    degree: Option<usize>,
    #[arg(long, value_parser = parse_flavor)]
    map_type: Option<Flavor>,
    #[arg(long, allow_hyphen_values = true)]
    orbit: Option<String>,
    /// The map as an expression, e.g. "z^2" or "(z^2 - 2)/(3z)".
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["orbit", "numerator"])]
    map: Option<String>,
    /// Numerator coefficients, ascending powers of z (bypasses the orbit).
    #[arg(long, allow_hyphen_values = true, requires = "denominator", conflicts_with = "orbit")]
    numerator: Option<String>,
    #[arg(long, allow_hyphen_values = true, requires = "numerator")]
    denominator: Option<String>,
    #[arg(long, default_value_t = CensusParams::default().n_max)]
    n_max: usize,
    #[arg(long, default_value_t = CensusParams::default().h_scan)]
    h_scan: u64,
    /// Do not count the point at infinity.
    #[arg(long)]
    exclude_infinity: bool,
    #[arg(long)]
    pretty: bool,
}

#[derive(Args)]
struct BaselineArgs {
    #[command(flatten)]
    run: RunArgs,
}

fn parse_flavor(s: &str) -> Result<Flavor, String> {
    Flavor::parse(s).ok_or_else(|| format!("unknown map type `{s}`"))
}

fn parse_target(s: &str) -> Result<Target, String> {
    Target::parse(s).ok_or_else(|| format!("unknown target `{s}`"))
}

fn parse_pair(s: &str) -> Result<(f64, f64), String> {
    let inner = s.trim().trim_start_matches(['(', '[']).trim_end_matches([')', ']']);
    match inner
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<Vec<_>, _>>()
    {
        Ok(v) if v.len() == 2 => Ok((v[0], v[1])),
        _ => Err(format!("expected a pair like 5,1, got `{s}`")),
    }
}

fn parse_integers(s: &str) -> Result<Vec<Integer>, String> {
    let inner = s.trim().trim_start_matches('[').trim_end_matches(']');
    inner
        .split(',')
        .map(|p| {
            p.trim()
                .parse::<Integer>()
                .map_err(|_| format!("not an integer: `{}`", p.trim()))
        })
        .collect()
}

fn error_json(kind: &str, message: impl ToString) -> Value {
    json!({"schema": SCHEMA, "kind": "error", "error": kind, "message": message.to_string()})
}

// A failure carrying its exit status; the JSON goes to stdout, text to stderr.
struct Failure {
    code: u8,
    record: Value,
}

impl Failure {
    fn config(kind: &str, message: impl ToString) -> Self {
        Failure {
            code: EXIT_CONFIG,
            record: error_json(kind, message),
        }
    }

    fn io(e: io::Error) -> Self {
        Failure {
            code: 1,
            record: error_json("io", e),
        }
    }
}

impl From<ConfigFileError> for Failure {
    fn from(e: ConfigFileError) -> Self {
        match &e {
            ConfigFileError::Parse { line, key, message } => Failure {
                code: EXIT_CONFIG,
                record: json!({"schema": SCHEMA, "kind": "error", "error": "parse", "line": line, "key": key, "message": message}),
            },
            ConfigFileError::Validation(_) => Failure::config("validation", e),
            ConfigFileError::Io(_) => Failure::config("io", e),
        }
    }
}

fn print_json(value: &impl Serialize, pretty: bool) -> io::Result<()> {
    let mut out = io::stdout().lock();
    if pretty {
        serde_json::to_writer_pretty(&mut out, value)?;
    } else {
        serde_json::to_writer(&mut out, value)?;
    }
    writeln!(out)
}

fn load_config(args: &RunArgs) -> Result<GAConfig, Failure> {
    let mut config = parse_config(&args.config)?;
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    Ok(config)
}

fn create(path: &Path) -> Result<BufWriter<File>, Failure> {
    File::create(path).map(BufWriter::new).map_err(Failure::io)
}

fn jsonl(out: &mut impl Write, kind: &str, body: Value) -> io::Result<()> {
    let mut record = json!({"schema": SCHEMA, "kind": kind});
    if let (Value::Object(r), Value::Object(b)) = (&mut record, body) {
        r.extend(b);
    }
    serde_json::to_writer(&mut *out, &record)?;
    writeln!(out)
}

fn cmd_search(args: SearchArgs) -> Result<(), Failure> {
    let config = load_config(&args.run)?;
    let mut out = create(&args.run.out)?;
    jsonl(
        &mut out,
        "config",
        json!({"config": config, "rng": dynforge_core::ga::RNG_NAME, "seed": config.seed}),
    )
    .map_err(Failure::io)?;
    let options = RunOptions {
        threads: args.run.threads,
        hall_size: args.hall_size,
    };
    let mut write_error = None;
    let report = run_with(&config, &options, |r: &GenerationRecord| {
        if write_error.is_none() {
            write_error = jsonl(&mut out, "generation", serde_json::to_value(r).expect("serializable")).err();
        }
    })
    .map_err(|e| Failure::config("validation", e))?;
    if let Some(e) = write_error {
        return Err(Failure::io(e));
    }
    jsonl(
        &mut out,
        "hall_of_fame",
        json!({"entries": report.hall_of_fame.entries()}),
    )
    .map_err(Failure::io)?;
    let mut summary = json!({
        "status": report.status,
        "generations_run": report.generations.len(),
        "evaluations": report.evaluations,
        "best": report.best,
    });
    if args.wall_time {
        summary["wall_time_secs"] = json!(report.wall_time_secs);
    }
    jsonl(&mut out, "summary", summary.clone()).map_err(Failure::io)?;
    out.flush().map_err(Failure::io)?;
    print_json(&summary, false).map_err(Failure::io)
}

fn read_orbit(args: &OrbitArgs) -> Result<Orbit, Failure> {
    let entries = parse_integers(&args.orbit).map_err(|e| Failure::config("invalid_orbit", e))?;
    Orbit::new(entries, args.degree, args.map_type).map_err(|e| Failure::config("invalid_orbit", e))
}

fn cmd_verify(args: VerifyArgs) -> Result<(), Failure> {
    let orbit = read_orbit(&args.orbit)?;
    let record = verify_orbit(&orbit, args.target, args.weights).map_err(|e| Failure::config("interpolation", e))?;
    let mut mismatches = Vec::new();
    if let Some(expected) = args.expect {
        let ok = record
            .score
            .value
            .finite()
            .is_some_and(|v| (v - expected).abs() <= args.tolerance);
        if !ok {
            mismatches.push(format!("score {} != expected {expected}", record.score.value));
        }
    }
    if let Some(expected) = &args.expect_map {
        let want = parse_map(expected).map_err(|e| Failure::config("invalid_map", e))?;
        if want != record.map {
            mismatches.push(format!("map {} != expected {expected}", record.map_display));
        }
    }
    let mut value = serde_json::to_value(&record).expect("serializable");
    value["schema"] = json!(SCHEMA);
    value["kind"] = json!("verify");
    if !mismatches.is_empty() {
        value["mismatches"] = json!(mismatches);
    }
    print_json(&value, args.pretty).map_err(Failure::io)?;
    if mismatches.is_empty() {
        Ok(())
    } else {
        Err(Failure {
            code: EXIT_MISMATCH,
            record: json!({"schema": SCHEMA, "kind": "error", "error": "mismatch", "message": mismatches.join("; ")}),
        })
    }
}

fn cmd_census(args: CensusArgs) -> Result<(), Failure> {
    let (f, orbit) = match (&args.numerator, &args.denominator, &args.orbit) {
        _ if args.map.is_some() => {
            let text = args.map.as_deref().unwrap_or_default();
            (parse_map(text).map_err(|e| Failure::config("invalid_map", e))?, None)
        }
        (Some(n), Some(d), _) => {
            let n = parse_integers(n).map_err(|e| Failure::config("invalid_map", e))?;
            let d = parse_integers(d).map_err(|e| Failure::config("invalid_map", e))?;
            (
                DynSystem::new(n, d).map_err(|e| Failure::config("invalid_map", e))?,
                None,
            )
        }
        (_, _, Some(o)) => {
            let (Some(degree), Some(map_type)) = (args.degree, args.map_type) else {
                return Err(Failure::config("usage", "--orbit needs --degree and --map-type"));
            };
            let orbit = read_orbit(&OrbitArgs {
                degree,
                map_type,
                orbit: o.clone(),
            })?;
            let f = orbit.to_map().map_err(|e| Failure::config("interpolation", e))?;
            (f, Some(orbit))
        }
        _ => {
            return Err(Failure::config(
                "usage",
                "give --orbit, --map or --numerator/--denominator",
            ))
        }
    };
    let params = CensusParams {
        n_max: args.n_max,
        h_scan: args.h_scan,
        include_infinity: !args.exclude_infinity,
        ..CensusParams::default()
    };
    let census = preperiodic_census(&f, &params);
    let value = json!({
        "schema": SCHEMA,
        "kind": "census",
        "orbit": orbit,
        "map": f,
        "map_display": f.display_affine(),
        "count": census.count,
        "complete": census.complete,
        "flags": census.flags,
        "points": census.points,
        "edges": census.edges,
    });
    print_json(&value, args.pretty).map_err(Failure::io)
}

fn cmd_baseline(args: BaselineArgs) -> Result<(), Failure> {
    let config = load_config(&args.run)?;
    let options = RunOptions {
        threads: args.run.threads,
        ..RunOptions::default()
    };
    let report = run_with(&config, &options, |_| {}).map_err(|e| Failure::config("validation", e))?;
    let checkpoints: Vec<usize> = report.generations.iter().map(|r| r.evaluations).collect();
    let random =
        random_baseline(&config, &checkpoints, args.run.threads).map_err(|e| Failure::config("validation", e))?;
    let mut writer = csv::Writer::from_writer(create(&args.run.out)?);
    let csv_err = |e: csv::Error| Failure::io(io::Error::other(e));
    writer
        .write_record(["evaluations", "ga_best", "random_best"])
        .map_err(csv_err)?;
    for (g, r) in report.generations.iter().zip(&random) {
        writer
            .write_record([g.evaluations.to_string(), g.best_score.to_string(), r.best.to_string()])
            .map_err(csv_err)?;
    }
    writer.flush().map_err(Failure::io)?;
    let (ga, rnd) = (report.generations.last(), random.last());
    print_json(
        &json!({
            "schema": SCHEMA,
            "kind": "baseline",
            "evaluations": report.evaluations,
            "ga_best": ga.map(|g| g.best_score),
            "random_best": rnd.map(|r| r.best),
        }),
        false,
    )
    .map_err(Failure::io)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Search(a) => cmd_search(a),
        Command::VerifyOrbit(a) => cmd_verify(a),
        Command::Census(a) => cmd_census(a),
        Command::Baseline(a) => cmd_baseline(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            // Mismatch details were already printed with the record.
            if f.code != EXIT_MISMATCH {
                let _ = print_json(&f.record, false);
            }
            eprintln!("dynforge: {}", f.record["message"].as_str().unwrap_or("error"));
            ExitCode::from(f.code)
        }
    }
}
