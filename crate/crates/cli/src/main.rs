use std::fs;
use std::io::{self, Read};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use dipoly_core::corpus::{random_digraphs, RandomSpec};
use dipoly_core::digraph::Digraph;
use dipoly_core::engine::{Engine, EngineStats, PolyKind};
use dipoly_core::polynomial::MultiPoly;
use dipoly_core::relations::{oracle_value, CheckReport, Checker, Identity, SearchLimits, Status};
use num_rational::BigRational;
use num_traits::One;
use serde_json::{json, Value};

const MISMATCH: u8 = 2;
const USAGE: u8 = 1;

#[derive(Parser)]
#[command(name = "dipoly", version, about = "Cycle, path and cover polynomials of directed multigraphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Options,
}

#[derive(Subcommand)]
enum Command {
    /// Compute polynomials of one digraph.
    Compute,
    /// Check identities over an exhaustive and a random corpus.
    Verify {
        /// Identities to check; all of them when omitted.
        identities: Vec<String>,
    },
    /// Search for a counterexample to one identity.
    Falsify { identity: String },
    /// Time recurrence against enumeration over graph families.
    Bench,
}

#[derive(Args)]
struct Options {
    /// Polynomial(s): sigma, pi, sigma-hat, pi-hat, sigma-pi, geo-cover,
    /// cover, xi, or all.
    #[arg(long, global = true, value_delimiter = ',', default_value = "all")]
    poly: Vec<String>,
    /// Defaults to `rec` for compute and `both` for bench.
    #[arg(long, global = true, value_enum)]
    method: Option<Method>,
    /// Digraph file, `-` for stdin, or inline JSON. Reads stdin when absent.
    #[arg(long, global = true)]
    input: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long, global = true, env = "DIPOLY_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 5)]
    max_n: usize,
    #[arg(long, global = true, default_value_t = 2)]
    max_mult: u32,
    /// Random digraphs after the exhaustive phase.
    #[arg(long, global = true, default_value_t = 200)]
    trials: usize,
    /// Rational points per digraph for the co-reduction checks.
    #[arg(long, global = true, default_value_t = 5)]
    points: usize,
    /// Deletion weight for well-definedness: a rational such as `2` or
    /// `1/2`, or `t` to keep it symbolic.
    #[arg(long, global = true, default_value = "t")]
    t: String,
    #[arg(long, global = true, default_value_t = 120)]
    budget_seconds: u64,
    #[arg(long, global = true)]
    no_cache: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Rec,
    Enum,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Latex,
}

impl Options {
    fn kinds(&self) -> Result<Vec<PolyKind>> {
        if self.poly.iter().any(|p| p == "all") {
            return Ok(PolyKind::ALL.to_vec());
        }
        self.poly
            .iter()
            .map(|p| p.parse::<PolyKind>().map_err(anyhow::Error::msg))
            .collect()
    }

    fn t_value(&self) -> Result<Option<BigRational>> {
        if self.t == "t" {
            return Ok(None);
        }
        self.t
            .parse::<BigRational>()
            .map(Some)
            .map_err(|_| anyhow::anyhow!("--t expects a rational or `t`, got {:?}", self.t))
    }

    fn engine(&self) -> Engine {
        if self.no_cache {
            Engine::new().without_cache()
        } else {
            Engine::new()
        }
    }

    fn checker(&self) -> Result<Checker> {
        let checker = Checker::new(self.seed)
            .with_point_count(self.points.max(1))
            .with_t(self.t_value()?);
        Ok(if self.no_cache { checker.without_cache() } else { checker })
    }

    fn limits(&self) -> SearchLimits {
        SearchLimits {
            max_n: self.max_n,
            max_mult: self.max_mult,
            random_trials: self.trials,
            budget: Duration::from_secs(self.budget_seconds),
        }
    }

    fn read_digraph(&self) -> Result<Digraph> {
        let text = match self.input.as_deref() {
            Some(s) if s.trim_start().starts_with('{') => s.to_string(),
            Some("-") | None => {
                let mut buf = String::new();
                io::stdin().read_to_string(&mut buf).context("reading stdin")?;
                buf
            }
            Some(path) => fs::read_to_string(path).with_context(|| format!("reading {}", path))?,
        };
        Ok(Digraph::parse(&text)?)
    }
}

fn render(p: &MultiPoly, format: Format) -> String {
    match format {
        Format::Text => p.to_string(),
        Format::Json => p.to_json_string(),
        Format::Latex => p.to_latex(),
    }
}

fn compute(opts: &Options) -> Result<u8> {
    let kinds = opts.kinds()?;
    let d = opts.read_digraph()?;
    let method = opts.method.unwrap_or(Method::Rec);
    let mut engine = opts.engine();
    let mut mismatch = false;
    let mut json_out = serde_json::Map::new();
    for kind in &kinds {
        let rec = (method != Method::Enum).then(|| engine.compute(*kind, &d));
        let en = (method != Method::Rec).then(|| oracle_value(*kind, &d));
        let agree = match (&rec, &en) {
            (Some(a), Some(b)) => Some(a == b),
            _ => None,
        };
        mismatch |= agree == Some(false);
        let prefix = if kinds.len() > 1 { format!("{}: ", kind) } else { String::new() };
        match opts.format {
            Format::Json => {
                let value = match (&rec, &en) {
                    (Some(p), None) | (None, Some(p)) => p.to_json(),
                    (Some(a), Some(b)) => json!({"rec": a.to_json(), "enum": b.to_json(), "match": agree}),
                    (None, None) => Value::Null,
                };
                json_out.insert(kind.name().to_string(), value);
            }
            _ => match (&rec, &en) {
                (Some(p), None) | (None, Some(p)) => println!("{}{}", prefix, render(p, opts.format)),
                (Some(a), Some(b)) => {
                    println!("{}rec:  {}", prefix, render(a, opts.format));
                    println!("{}enum: {}", prefix, render(b, opts.format));
                    println!("{}{}", prefix, if agree == Some(true) { "MATCH" } else { "MISMATCH" });
                }
                (None, None) => {}
            },
        }
    }
    if opts.format == Format::Json {
        let out = if kinds.len() == 1 {
            json_out.into_iter().next().map(|(_, v)| v).unwrap_or(Value::Null)
        } else {
            Value::Object(json_out)
        };
        println!("{}", out);
    }
    Ok(if mismatch { MISMATCH } else { 0 })
}

/// How an outcome relates to what is documented for the identity.
fn verdict(identity: Identity, t: &Option<BigRational>, r: &CheckReport) -> (&'static str, bool) {
    let expected_to_hold = identity.expected_to_hold()
        || (identity == Identity::WellDefinedness && t.as_ref().is_some_and(One::is_one));
    match (r.status, expected_to_hold) {
        (Status::Pass, true) => ("PASS", true),
        (Status::Fail, true) => ("FAIL", false),
        (Status::Fail, false) => ("EXPECTED-FAIL", true),
        (Status::Pass, false) => ("UNEXPECTED-PASS", false),
        (Status::Skipped, _) => ("SKIPPED", false),
    }
}

fn verify(opts: &Options, names: &[String]) -> Result<u8> {
    let identities: Vec<Identity> = if names.is_empty() {
        Identity::ALL.to_vec()
    } else {
        names
            .iter()
            .map(|n| n.parse::<Identity>().map_err(anyhow::Error::msg))
            .collect::<Result<_>>()?
    };
    let t = opts.t_value()?;
    let limits = opts.limits();
    let mut ok = true;
    let mut rows = Vec::new();
    for identity in identities {
        let report = opts.checker()?.falsify(identity, &limits);
        let (label, fine) = verdict(identity, &t, &report);
        ok &= fine;
        rows.push((identity, label, report));
    }
    match opts.format {
        Format::Json => {
            let out: Vec<Value> = rows
                .iter()
                .map(|(_, label, r)| {
                    let mut v = r.to_json();
                    v["verdict"] = json!(label);
                    v
                })
                .collect();
            println!("{}", Value::Array(out));
        }
        _ => {
            println!("{:<22} {:<16} {:>8}  witness", "identity", "verdict", "graphs");
            for (identity, label, r) in &rows {
                let witness = r.witness.as_ref().map_or("-".to_string(), Digraph::to_json_string);
                println!("{:<22} {:<16} {:>8}  {}", identity.name(), label, r.graphs_tested, witness);
            }
            for (_, label, r) in &rows {
                if r.status != Status::Pass {
                    println!("\n[{}]\n{}", label, r.to_text());
                }
            }
        }
    }
    Ok(if ok { 0 } else { MISMATCH })
}

fn falsify(opts: &Options, name: &str) -> Result<u8> {
    let identity: Identity = name.parse().map_err(anyhow::Error::msg)?;
    let t = opts.t_value()?;
    let report = opts.checker()?.falsify(identity, &opts.limits());
    match opts.format {
        Format::Json => println!("{}", report.to_json()),
        _ => match &report.witness {
            Some(w) => {
                println!("{}", w.to_json_string());
                eprintln!("{}", report.to_text());
            }
            None => {
                println!("none found");
                eprintln!("{}", report.to_text());
            }
        },
    }
    let (_, fine) = verdict(identity, &t, &report);
    Ok(if report.failed() && !fine { MISMATCH } else { 0 })
}

struct BenchRow {
    label: String,
    d: Digraph,
    rec_time: Option<Duration>,
    enum_time: Option<Duration>,
    stats: Option<EngineStats>,
    terms: usize,
    agree: Option<bool>,
}

fn bench(opts: &Options) -> Result<u8> {
    let kinds = opts.kinds()?;
    let kind = match kinds.as_slice() {
        [k] => *k,
        _ if opts.poly.iter().any(|p| p == "all") => PolyKind::SigmaPi,
        _ => bail!("bench takes a single --poly"),
    };
    let graphs: Vec<(String, Digraph)> = if opts.input.is_some() {
        vec![("input".into(), opts.read_digraph()?)]
    } else {
        let mut g: Vec<(String, Digraph)> = (2..=opts.max_n.max(2)).map(|k| (format!("C{}", k), Digraph::cycle(k))).collect();
        g.extend((2..=opts.max_n.clamp(2, 5)).map(|k| (format!("K{}", k), Digraph::complete(k))));
        let spec = RandomSpec { max_n: opts.max_n.max(1), max_mult: opts.max_mult, ..RandomSpec::default() };
        g.extend(
            random_digraphs(opts.seed, opts.trials.min(20), spec)
                .into_iter()
                .enumerate()
                .map(|(i, d)| (format!("R{}", i), d)),
        );
        g.push(("E20".into(), Digraph::empty(20)));
        g
    };

    let method = opts.method.unwrap_or(Method::Both);
    let mut rows = Vec::new();
    for (label, d) in graphs {
        let (rec, rec_time, stats) = if method != Method::Enum {
            let mut engine = opts.engine();
            let start = Instant::now();
            let p = engine.compute(kind, &d);
            (Some(p), Some(start.elapsed()), Some(engine.stats()))
        } else {
            (None, None, None)
        };
        let (en, enum_time) = if method != Method::Rec {
            let start = Instant::now();
            let p = oracle_value(kind, &d);
            (Some(p), Some(start.elapsed()))
        } else {
            (None, None)
        };
        let terms = rec.as_ref().or(en.as_ref()).map_or(0, MultiPoly::num_terms);
        let agree = rec.as_ref().zip(en.as_ref()).map(|(a, b)| a == b);
        rows.push(BenchRow { label, d, rec_time, enum_time, stats, terms, agree });
    }

    let micros = |t: Option<Duration>| t.map(|t| t.as_micros() as u64);
    match opts.format {
        Format::Json => {
            let out: Vec<Value> = rows
                .iter()
                .map(|r| {
                    json!({
                        "graph": r.label,
                        "n": r.d.n(),
                        "arcs": r.d.arc_count(),
                        "rec_us": micros(r.rec_time),
                        "enum_us": micros(r.enum_time),
                        "stats": r.stats,
                        "terms": r.terms,
                        "match": r.agree,
                    })
                })
                .collect();
            println!("{}", json!({"poly": kind.name(), "cache": !opts.no_cache, "rows": out}));
        }
        _ => {
            println!("poly {}, cache {}", kind, if opts.no_cache { "off" } else { "on" });
            println!(
                "{:<6} {:>3} {:>5} {:>10} {:>10} {:>8} {:>8} {:>8} {:>8} {:>6} {:>6}",
                "graph", "n", "arcs", "rec_us", "enum_us", "steps", "hits", "misses", "peak", "terms", "match"
            );
            let show = |t: Option<u64>| t.map_or("-".into(), |t| t.to_string());
            for r in &rows {
                let s = r.stats.unwrap_or_default();
                println!(
                    "{:<6} {:>3} {:>5} {:>10} {:>10} {:>8} {:>8} {:>8} {:>8} {:>6} {:>6}",
                    r.label,
                    r.d.n(),
                    r.d.arc_count(),
                    show(micros(r.rec_time)),
                    show(micros(r.enum_time)),
                    s.arc_steps,
                    s.cache_hits,
                    s.cache_misses,
                    s.peak_cache_size,
                    r.terms,
                    r.agree.map_or("-", |a| if a { "yes" } else { "no" })
                );
            }
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(USAGE),
            };
        }
    };
    let result = match &cli.command {
        Command::Compute => compute(&cli.opts),
        Command::Verify { identities } => verify(&cli.opts, identities),
        Command::Falsify { identity } => falsify(&cli.opts, identity),
        Command::Bench => bench(&cli.opts),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {:#}", e);
            ExitCode::from(USAGE)
        }
    }
}
