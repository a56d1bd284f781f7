//! `koszul`: Betti tables and syzygy checks for plane curve models.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use koszul_core::algebra::{is_prime, next_prime, rank_with, PrimeField, RankOptions};
use koszul_core::curves::builtin::{recipe, CURVES, TWISTED_CUBIC};
use koszul_core::curves::{
    build_graded_module, builtin, builtin_names, load_model, model_to_json, normalize_divisor, Model, Synthetic,
    DEFAULT_PRIMES, DEFAULT_SEED,
};
use koszul_core::experiments::{
    consensus_run, run_suite, Check, ModelSource, RunContext, SuiteReport, Verdict, CHECK_NAMES, SUITE_NAMES,
};
use koszul_core::koszul::{betti_table_with, complex::build_differential_with, BettiTable, GradedModule};
use koszul_core::{Error, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Parser)]
#[command(name = "koszul", version, about = "Koszul cohomology of plane curve models over prime fields")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Prime to work over; repeat for several
    #[arg(long = "prime", global = true)]
    prime: Vec<u64>,
    /// Pick this many primes above 10^6 from the seed
    #[arg(long, global = true, conflicts_with = "prime")]
    primes: Option<usize>,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Maximal power-series precision for valuations at places
    #[arg(long = "precision-cap", global = true)]
    precision_cap: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a model's curve, nodes and marked points are consistent
    Validate { model: String },
    /// Print the Betti table of a divisor of a model
    Betti {
        model: String,
        #[arg(long, default_value = "L")]
        divisor: String,
        /// Divisor F twisting the sections: B_q = H0(qD + F)
        #[arg(long)]
        twist: Option<String>,
        #[arg(long)]
        p_min: Option<i64>,
        #[arg(long)]
        p_max: Option<i64>,
        #[arg(long)]
        q_min: Option<i64>,
        #[arg(long)]
        q_max: Option<i64>,
    },
    /// Run one named check on a model
    Verify {
        check: String,
        model: String,
        /// Claimed gonality for vanishing-boundary
        #[arg(long)]
        gonality: Option<i64>,
    },
    /// Run a named suite of checks on the built-in models
    Suite {
        #[arg(default_value = "default")]
        name: String,
    },
    /// Time the construction and rank of one Koszul differential
    Bench {
        #[arg(long, default_value_t = 9)]
        n: usize,
        /// dim B_0, dim B_1, dim B_2
        #[arg(long, value_delimiter = ',', default_values_t = [1usize, 9, 24])]
        dims: Vec<usize>,
        /// Exterior degree; defaults to n/2
        #[arg(long)]
        p: Option<i64>,
        #[arg(long, default_value_t = 1)]
        q: i64,
        #[arg(long)]
        sequential: bool,
    },
    /// Built-in models
    Model {
        #[command(subcommand)]
        command: ModelCommand,
    },
    /// List checks, suites and built-in models
    List,
}

#[derive(Subcommand)]
enum ModelCommand {
    List,
    /// Write a built-in model over the first prime as a model file
    Export {
        name: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) | Error::Json(_) | Error::InvalidModulus(..) | Error::Io(_) => 2,
        Error::Geometry(_) => 3,
        _ => 4,
    }
}

struct Session {
    primes: Vec<u64>,
    explicit_primes: bool,
    format: Format,
    ctx: RunContext,
}

impl Session {
    fn new(g: &Global) -> Result<Self> {
        let explicit_primes = !g.prime.is_empty() || g.primes.is_some();
        let primes = if !g.prime.is_empty() {
            for &p in &g.prime {
                if !is_prime(p) {
                    return Err(Error::InvalidModulus(p, "not prime"));
                }
            }
            g.prime.clone()
        } else if let Some(n) = g.primes {
            let mut p = 1_000_000 + g.seed % 1_000_000;
            (0..n)
                .map(|_| {
                    p = next_prime(p + 1);
                    p
                })
                .collect()
        } else {
            DEFAULT_PRIMES.to_vec()
        };
        let mut ctx = RunContext::new(g.seed);
        ctx.precision_cap = g.precision_cap;
        Ok(Session {
            primes,
            explicit_primes,
            format: g.format,
            ctx,
        })
    }

    fn source(&self, spec: &str) -> Result<ModelSource> {
        let path = Path::new(spec);
        if path.exists() {
            return Ok(ModelSource::Fixed(load_model(path)?));
        }
        if builtin_names().contains(&spec) {
            return Ok(ModelSource::Builtin(spec.to_string()));
        }
        Err(Error::Parse(format!(
            "{spec:?} is neither a model file nor a built-in model ({})",
            builtin_names().join(", ")
        )))
    }

    /// The models to work on: the file's own prime, or the built-in over each prime.
    fn models(&self, spec: &str) -> Result<Vec<Model>> {
        let model = match self.source(spec)? {
            ModelSource::Fixed(m) => vec![m],
            ModelSource::Builtin(name) => self
                .primes
                .iter()
                .map(|&p| builtin(&name, p, self.ctx.seed))
                .collect::<Result<_>>()?,
        };
        Ok(match self.ctx.precision_cap {
            Some(cap) => model.into_iter().map(|m| m.with_precision_cap(cap)).collect(),
            None => model,
        })
    }
}

fn validate(s: &Session, spec: &str) -> Result<u8> {
    for model in s.models(spec)? {
        model.validate()?;
        match &model {
            Model::Synthetic { synthetic, field, .. } => {
                println!("ok: {} (synthetic {:?}) over F_{}", model.name(), synthetic, field.modulus())
            }
            Model::Curve(m) => println!(
                "ok: {} over F_{}: degree {}, {} node(s), genus {}, {} point(s), divisors {}",
                m.name,
                m.field().modulus(),
                m.curve.degree(),
                m.curve.nodes().len(),
                m.curve.genus(),
                m.points.len(),
                m.divisors.keys().cloned().collect::<Vec<_>>().join(", ")
            ),
        }
    }
    Ok(0)
}

struct BettiArgs<'a> {
    divisor: &'a str,
    twist: Option<&'a str>,
    p: (Option<i64>, Option<i64>),
    q: (Option<i64>, Option<i64>),
}

fn betti_for(s: &Session, model: &Model, a: &BettiArgs) -> Result<BettiTable> {
    let (module, default_q): (GradedModule, i64) = match model {
        Model::Synthetic { field, synthetic, .. } => {
            let q_hi = a.q.1.unwrap_or(1);
            let Synthetic::RationalNormalCurve { degree, q_max } = *synthetic;
            let q_max = q_max.max(q_hi.max(0) as usize + 1);
            let m = Synthetic::RationalNormalCurve { degree, q_max }.module(*field);
            (m, 1)
        }
        Model::Curve(m) => {
            let q_hi = a.q.1.unwrap_or(2).max(0);
            let mut rng = ChaCha8Rng::seed_from_u64(s.ctx.seed ^ m.field().modulus());
            let mut prepare = |name: &str| -> Result<_> {
                let d = m.divisor(name)?;
                Ok(if d.places_nonpositive() {
                    d
                } else {
                    normalize_divisor(&m.curve, &d, &mut rng)?.divisor
                })
            };
            let d = prepare(a.divisor)?;
            let twist = a.twist.map(|t| m.divisor(t)).transpose()?;
            let b = build_graded_module(&m.curve, &d, twist.as_ref(), q_hi as usize + 1, s.ctx.parallel)?;
            (b.module, 2)
        }
    };
    let n = module.n() as i64;
    let p_range = a.p.0.unwrap_or(1)..=a.p.1.unwrap_or(n - 1);
    let q_range = a.q.0.unwrap_or(1)..=a.q.1.unwrap_or(default_q);
    let opts = RankOptions {
        parallel: s.ctx.parallel,
        ..RankOptions::default()
    };
    betti_table_with(&module, p_range, q_range, opts)
}

fn betti(s: &Session, spec: &str, a: &BettiArgs) -> Result<u8> {
    let mut models = s.models(spec)?;
    if !s.explicit_primes {
        models.truncate(1);
    }
    let tables: Vec<(String, BettiTable)> = models
        .iter()
        .map(|m| Ok((m.name().to_string(), betti_for(s, m, a)?)))
        .collect::<Result<_>>()?;
    match s.format {
        Format::Text => {
            for (name, t) in &tables {
                println!("{name}, divisor {}, over F_{}:", a.divisor, t.prime);
                print!("{}", t.to_diagram());
            }
        }
        Format::Csv => {
            for (i, (_, t)) in tables.iter().enumerate() {
                let csv = t.to_csv();
                // one header for all primes
                print!("{}", if i == 0 { &csv[..] } else { csv.split_once('\n').map_or("", |x| x.1) });
            }
        }
        Format::Json => {
            let ts: Vec<&BettiTable> = tables.iter().map(|(_, t)| t).collect();
            println!("{}", serde_json::to_string_pretty(&ts)?);
        }
    }
    Ok(0)
}

fn print_suite(s: &Session, r: &SuiteReport) -> Result<()> {
    match s.format {
        Format::Json => println!("{}", r.to_json()),
        _ => print!("{}", r.to_text()),
    }
    Ok(())
}

fn verify(s: &Session, check: &str, spec: &str, gonality: Option<i64>) -> Result<u8> {
    let mut check: Check = check.parse()?;
    if let (Check::VanishingBoundary { gonality: g }, Some(d)) = (&mut check, gonality) {
        *g = Some(d);
    }
    let source = s.source(spec)?;
    let report = consensus_run(&check, &source, &s.primes, &s.ctx);
    match s.format {
        Format::Json => println!("{}", report.to_json()),
        _ => print!("{}", report.to_text()),
    }
    Ok(u8::from(report.verdict == Verdict::Fail))
}

fn suite(s: &Session, name: &str) -> Result<u8> {
    let report = run_suite(name, &s.primes, &s.ctx)?;
    print_suite(s, &report)?;
    Ok(u8::from(report.failures() > 0))
}

fn bench(s: &Session, n: usize, dims: &[usize], p: Option<i64>, q: i64, sequential: bool) -> Result<u8> {
    if dims.len() != 3 || dims[0] != 1 || dims[1] != n {
        return Err(Error::Parse(format!("--dims must be 1,{n},dim2 for n = {n}")));
    }
    let field = PrimeField::new(s.primes[0])?;
    let module = GradedModule::random_quadratic(field, n, dims[2], s.ctx.seed)?;
    let p = p.unwrap_or(n as i64 / 2);
    let parallel = s.ctx.parallel && !sequential;
    let t = Instant::now();
    let d = build_differential_with(&module, p, q, parallel)?;
    let build = t.elapsed();
    let mut h = DefaultHasher::new();
    for t in d.triplets() {
        t.hash(&mut h);
    }
    let t = Instant::now();
    let rank = rank_with(&d, &RankOptions { parallel, ..RankOptions::default() });
    let rank_time = t.elapsed();
    let out = serde_json::json!({
        "n": n,
        "dims": dims,
        "p": p,
        "q": q,
        "prime": field.modulus(),
        "seed": s.ctx.seed,
        "mode": if parallel { "parallel" } else { "sequential" },
        "rows": d.rows(),
        "cols": d.cols(),
        "nnz": d.nnz(),
        "hash": format!("{:016x}", h.finish()),
        "rank": rank,
        "build_ms": build.as_secs_f64() * 1e3,
        "rank_ms": rank_time.as_secs_f64() * 1e3,
    });
    match s.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&out)?),
        _ => println!(
            "d_{{{p},{q}}}: {} x {} ({} nonzeros, hash {}), rank {} [{}]\n  build {:.3} ms, rank {:.3} ms",
            d.rows(),
            d.cols(),
            d.nnz(),
            out["hash"].as_str().unwrap_or_default(),
            rank,
            out["mode"].as_str().unwrap_or_default(),
            build.as_secs_f64() * 1e3,
            rank_time.as_secs_f64() * 1e3
        ),
    }
    Ok(0)
}

fn model_command(s: &Session, cmd: &ModelCommand) -> Result<u8> {
    match cmd {
        ModelCommand::List => {
            println!("{TWISTED_CUBIC:<14} rational normal curve of degree 3 (synthetic module)");
            for r in CURVES {
                println!("{:<14} {}", r.name, r.summary);
            }
            Ok(0)
        }
        ModelCommand::Export { name, output } => {
            if name != TWISTED_CUBIC && recipe(name).is_none() {
                return Err(Error::Parse(format!("unknown built-in model {name:?}")));
            }
            let model = builtin(name, s.primes[0], s.ctx.seed)?;
            let json = model_to_json(&model) + "\n";
            match output {
                Some(path) => std::fs::write(path, json)?,
                None => std::io::stdout().write_all(json.as_bytes())?,
            }
            Ok(0)
        }
    }
}

fn list() -> Result<u8> {
    println!("checks: {}", CHECK_NAMES.join(", "));
    println!("suites: {}", SUITE_NAMES.join(", "));
    println!("models: {}", builtin_names().join(", "));
    Ok(0)
}

fn configure_threads(threads: Option<usize>) -> Result<()> {
    let Some(n) = threads else { return Ok(()) };
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::Parse(format!("--threads {n}: {e}")))?;
    #[cfg(not(feature = "parallel"))]
    eprintln!("note: built without the parallel feature; --threads {n} has no effect");
    Ok(())
}

fn run(cli: Cli) -> Result<u8> {
    configure_threads(cli.global.threads)?;
    let s = Session::new(&cli.global)?;
    match &cli.command {
        Command::Validate { model } => validate(&s, model),
        Command::Betti {
            model,
            divisor,
            twist,
            p_min,
            p_max,
            q_min,
            q_max,
        } => betti(
            &s,
            model,
            &BettiArgs {
                divisor,
                twist: twist.as_deref(),
                p: (*p_min, *p_max),
                q: (*q_min, *q_max),
            },
        ),
        Command::Verify { check, model, gonality } => verify(&s, check, model, *gonality),
        Command::Suite { name } => suite(&s, name),
        Command::Bench {
            n,
            dims,
            p,
            q,
            sequential,
        } => bench(&s, *n, dims, *p, *q, *sequential),
        Command::Model { command } => model_command(&s, command),
        Command::List => list(),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
