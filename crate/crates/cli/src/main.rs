//! Command-line front end for the extension calculator.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use sl2ext_core::cache::{export_file, import_file};
use sl2ext_core::ext_engine::{ExtEngine, FormalModule};
use sl2ext_core::quantum::{gl2, QuantumContext};
use sl2ext_core::verify::{run as run_suites, VerifyOptions, SUITES};
use sl2ext_core::weights::{decompose, WeightContext};
use sl2ext_core::{Error, Weight};

#[derive(Parser)]
#[command(
    name = "sl2ext",
    about = "Dimensions of higher extensions between SL2 modules in prime characteristic",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute one dimension vector Ext^*(A(lambda), B(mu)).
    Ext(ExtArgs),
    /// Compute a grid of dimension vectors over inclusive weight ranges.
    Table(TableArgs),
    /// Run the self-verification suites.
    Verify(VerifyArgs),
    /// Inspect persisted memo tables.
    Cache(CacheArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    /// Ext(Delta(lambda), Delta(mu)).
    DeltaDelta,
    /// Ext(Delta(lambda), L(mu)).
    DeltaSimple,
    /// Ext(L(lambda), Delta(mu)).
    SimpleDelta,
    /// Ext(L(lambda), L(mu)).
    SimpleSimple,
    /// Ext(T(lambda), Delta(mu)).
    TiltingDelta,
    /// Ext(Nabla(lambda), Nabla(mu)).
    NablaNabla,
    /// Ext(Nabla(lambda), Delta(mu)); not covered by the implemented
    /// families and reported as such.
    NablaDelta,
    /// Ext(Delta(a)^[1] (x) L(r), Nabla(b)^[1] (x) L(s)) with
    /// lambda = p*a + r and mu = p*b + s.
    TwistClosedForm,
}

impl Family {
    fn modules(self, p: u64, lambda: u64, mu: u64) -> Result<(FormalModule, FormalModule), Error> {
        use FormalModule as M;
        Ok(match self {
            Family::DeltaDelta => (M::weyl(lambda), M::weyl(mu)),
            Family::DeltaSimple => (M::weyl(lambda), M::simple(mu)),
            Family::SimpleDelta => (M::simple(lambda), M::weyl(mu)),
            Family::SimpleSimple => (M::simple(lambda), M::simple(mu)),
            Family::TiltingDelta => (M::tilting(lambda), M::weyl(mu)),
            Family::NablaNabla => (M::induced(lambda), M::induced(mu)),
            Family::NablaDelta => (M::induced(lambda), M::weyl(mu)),
            Family::TwistClosedForm => {
                let ctx = WeightContext::new(p)?;
                let l = decompose(&Weight::from(lambda), &ctx)?;
                let m = decompose(&Weight::from(mu), &ctx)?;
                (
                    M::TwistProd(Box::new(M::Weyl(l.a)), l.i),
                    M::TwistProd(Box::new(M::Induced(m.a)), m.i),
                )
            }
        })
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Args)]
struct QueryOpts {
    /// Characteristic of the base field (a prime).
    #[arg(long)]
    p: u64,
    /// Pair of module families for the query.
    #[arg(long, value_enum, default_value = "delta-delta")]
    family: Family,
    /// Truncate the output at this cohomological degree.
    #[arg(long)]
    max_degree: Option<usize>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Quantum parameter l; switches to the quantum layer
    /// (delta-delta only) over a base field of characteristic --base-char.
    #[arg(long)]
    quantum_l: Option<u64>,
    /// Base-field characteristic for the quantum layer (0 or a prime).
    #[arg(long, default_value_t = 0)]
    base_char: u64,
    /// Memo-table file: imported before the run, exported after.
    #[arg(long)]
    cache: Option<PathBuf>,
    /// Recompute every imported cache record and reject mismatches.
    #[arg(long)]
    paranoid: bool,
}

#[derive(Args)]
struct ExtArgs {
    #[command(flatten)]
    query: QueryOpts,
    #[arg(long)]
    lambda: u64,
    #[arg(long)]
    mu: u64,
    /// Second coordinate of lambda in the quantum layer.
    #[arg(long, default_value_t = 0)]
    lambda2: i64,
    /// Second coordinate of mu in the quantum layer.
    #[arg(long, default_value_t = 0)]
    mu2: i64,
}

#[derive(Args)]
struct TableArgs {
    #[command(flatten)]
    query: QueryOpts,
    /// Inclusive range A..B for the first weight.
    #[arg(long)]
    lambda: String,
    /// Inclusive range A..B for the second weight.
    #[arg(long)]
    mu: String,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite name, or `all`.
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, default_value_t = 60)]
    max_weight: u64,
    #[arg(long, default_value_t = 50)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// List the available suites and exit.
    #[arg(long)]
    list: bool,
}

#[derive(Args)]
struct CacheArgs {
    #[command(subcommand)]
    action: CacheAction,
}

#[derive(Subcommand)]
enum CacheAction {
    /// Parse a memo file and report record counts.
    Validate {
        file: PathBuf,
        /// Characteristic the records must match.
        #[arg(long)]
        p: u64,
        /// Recompute every record and reject mismatches.
        #[arg(long)]
        paranoid: bool,
    },
}

#[derive(Serialize)]
struct QueryRecord {
    family: String,
    p: u64,
    lambda: u64,
    mu: u64,
    dims: Vec<u64>,
    cutoff: usize,
}

fn family_label(f: Family) -> &'static str {
    match f {
        Family::DeltaDelta => "delta-delta",
        Family::DeltaSimple => "delta-simple",
        Family::SimpleDelta => "simple-delta",
        Family::SimpleSimple => "simple-simple",
        Family::TiltingDelta => "tilting-delta",
        Family::NablaNabla => "nabla-nabla",
        Family::NablaDelta => "nabla-delta",
        Family::TwistClosedForm => "twist-closed-form",
    }
}

fn parse_range(s: &str) -> Result<(u64, u64), Error> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| Error::InvalidInput(format!("range `{s}` is not of the form A..B")))?;
    let lo: u64 = a
        .parse()
        .map_err(|_| Error::InvalidInput(format!("bad range endpoint `{a}`")))?;
    let hi: u64 = b
        .parse()
        .map_err(|_| Error::InvalidInput(format!("bad range endpoint `{b}`")))?;
    if hi < lo {
        return Err(Error::InvalidInput(format!("empty range `{s}`")));
    }
    Ok((lo, hi))
}

struct Session {
    engine: ExtEngine,
    cache: Option<PathBuf>,
}

impl Session {
    fn open(opts: &QueryOpts) -> Result<Session, Error> {
        let engine = ExtEngine::new(WeightContext::new(opts.p)?);
        if let Some(path) = &opts.cache {
            if path.exists() {
                let report = import_file(&engine, path, opts.paranoid)?;
                eprintln!(
                    "cache: imported {} records ({} skipped{})",
                    report.imported,
                    report.skipped,
                    if opts.paranoid {
                        format!(", {} verified", report.verified)
                    } else {
                        String::new()
                    }
                );
            }
        }
        Ok(Session { engine, cache: opts.cache.clone() })
    }

    fn close(&self) -> Result<(), Error> {
        if let Some(path) = &self.cache {
            let n = export_file(&self.engine, path)?;
            eprintln!("cache: exported {n} records");
        }
        Ok(())
    }
}

fn compute_one(
    session: &Session,
    opts: &QueryOpts,
    args: &ExtArgs,
) -> Result<QueryRecord, Error> {
    let dims = if let Some(l) = opts.quantum_l {
        if !matches!(opts.family, Family::DeltaDelta) {
            return Err(Error::InvalidInput(
                "the quantum layer only supports --family delta-delta".into(),
            ));
        }
        let q = QuantumContext::new(l, opts.base_char)?;
        q.qext_weyl_weyl(
            &gl2(args.lambda as i64, args.lambda2),
            &gl2(args.mu as i64, args.mu2),
        )?
    } else {
        let (src, tgt) = opts.family.modules(opts.p, args.lambda, args.mu)?;
        session.engine.query(&src, &tgt, opts.max_degree)?
    };
    let dims = match opts.max_degree {
        Some(d) => dims.truncated(d),
        None => dims,
    };
    Ok(QueryRecord {
        family: family_label(opts.family).into(),
        p: opts.quantum_l.unwrap_or(opts.p),
        lambda: args.lambda,
        mu: args.mu,
        dims: dims.dims().to_vec(),
        cutoff: dims.cutoff(),
    })
}

fn emit(records: &[QueryRecord], format: Format) {
    match format {
        Format::Text => {
            for r in records {
                let dims = if r.dims.is_empty() {
                    "0".to_string()
                } else {
                    r.dims
                        .iter()
                        .enumerate()
                        .map(|(q, d)| format!("q{q}:{d}"))
                        .collect::<Vec<_>>()
                        .join(" ")
                };
                println!("{} lambda={} mu={}  {}", r.family, r.lambda, r.mu, dims);
            }
        }
        Format::Json => {
            for r in records {
                println!("{}", serde_json::to_string(r).expect("record serializes"));
            }
        }
        Format::Csv => {
            println!("lambda,mu,q,dim");
            for r in records {
                for (q, d) in r.dims.iter().enumerate() {
                    println!("{},{},{},{}", r.lambda, r.mu, q, d);
                }
            }
        }
    }
}

fn cmd_ext(args: &ExtArgs) -> Result<(), Error> {
    let session = Session::open(&args.query)?;
    let record = compute_one(&session, &args.query, args)?;
    emit(std::slice::from_ref(&record), args.query.format);
    session.close()
}

const MAX_TABLE_CELLS: u64 = 10_000;

fn cmd_table(args: &TableArgs) -> Result<(), Error> {
    let (l_lo, l_hi) = parse_range(&args.lambda)?;
    let (m_lo, m_hi) = parse_range(&args.mu)?;
    let cells = (l_hi - l_lo + 1) * (m_hi - m_lo + 1);
    if cells > MAX_TABLE_CELLS {
        return Err(Error::InvalidInput(format!(
            "table of {cells} cells exceeds the limit of {MAX_TABLE_CELLS}"
        )));
    }
    let session = Session::open(&args.query)?;
    let mut records = Vec::new();
    for lambda in l_lo..=l_hi {
        for mu in m_lo..=m_hi {
            let one = ExtArgs {
                query: QueryOpts {
                    p: args.query.p,
                    family: args.query.family,
                    max_degree: args.query.max_degree,
                    format: args.query.format,
                    quantum_l: args.query.quantum_l,
                    base_char: args.query.base_char,
                    cache: None,
                    paranoid: false,
                },
                lambda,
                mu,
                lambda2: 0,
                mu2: 0,
            };
            records.push(compute_one(&session, &args.query, &one)?);
        }
    }
    emit(&records, args.query.format);
    session.close()
}

fn cmd_verify(args: &VerifyArgs) -> Result<bool, Error> {
    if args.list {
        for s in SUITES {
            println!("{s}");
        }
        return Ok(true);
    }
    let opts = VerifyOptions {
        max_weight: args.max_weight,
        trials: args.trials,
        seed: args.seed,
    };
    let reports = run_suites(&args.suite, &opts)?;
    let mut ok = true;
    for r in &reports {
        let status = if r.pass { "PASS" } else { "FAIL" };
        println!("{status} {} ({} checks) {}", r.name, r.checked, r.detail);
        ok &= r.pass;
    }
    Ok(ok)
}

fn cmd_cache(args: &CacheArgs) -> Result<(), Error> {
    match &args.action {
        CacheAction::Validate { file, p, paranoid } => {
            let engine = ExtEngine::new(WeightContext::new(*p)?);
            let report = import_file(&engine, file, *paranoid)?;
            println!(
                "records: {} valid, {} skipped{}",
                report.imported,
                report.skipped,
                if *paranoid {
                    format!(", {} verified", report.verified)
                } else {
                    String::new()
                }
            );
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // Help and version requests are successes; everything else is
            // a usage error.
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match &cli.command {
        Command::Ext(a) => cmd_ext(a).map(|()| true),
        Command::Table(a) => cmd_table(a).map(|()| true),
        Command::Verify(a) => cmd_verify(a),
        Command::Cache(a) => cmd_cache(a).map(|()| true),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Error::UnsupportedFamily(msg)) => {
            eprintln!("unsupported: {msg}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
