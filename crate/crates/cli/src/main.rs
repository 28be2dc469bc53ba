//! `negacirc`: classification, censuses, distances and bounds for self-dual
//! double- and four-negacirculant codes.

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use negacirc_core::bounds::{expurgation_margin, vg_threshold, BoundResult, ExpurgationMargin};
use negacirc_core::census::{census_double, census_four, make_crt_context, DoubleMode, FourMode, DEFAULT_SAMPLE_SIZE};
use negacirc_core::field::field_of_order;
use negacirc_core::nega::{build_double, build_four, min_distance, LinearCode, DEFAULT_DISTANCE_BUDGET};
use negacirc_core::poly::factorize;
use negacirc_core::report::{
    survey_table, ClassificationDoc, CodeDoc, Envelope, FactorReportDoc, FactorizationDoc, OutputFormat, RunConfig,
};
use negacirc_core::{classify, survey, Error, FactorCase, Poly};

const DEFAULT_SEED: u64 = 20_240_101;

#[derive(Parser)]
#[command(name = "negacirc", version, about = "Self-dual negacirculant codes over finite fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    common: Common,
}

#[derive(Args, Clone)]
struct Common {
    /// Seed for every randomized step
    #[arg(long, global = true, env = "NEGACIRC_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,

    /// Worker threads (default: available parallelism)
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Write output to this file instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    /// Delimiter-separated table (survey only)
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum DoubleModeArg {
    Formula,
    Constructive,
    Exhaustive,
}

#[derive(Clone, Copy, ValueEnum)]
enum FourModeArg {
    Formula,
    Components,
    Sample,
}

#[derive(Subcommand)]
enum Command {
    /// Factor x^{2p}+1 over F_q and classify it
    Classify {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        q: u64,
    },
    /// Factor a polynomial over F_q
    Factor {
        #[arg(long)]
        q: u64,
        /// Ascending coefficients, e.g. "1,0,1"; extension residues joined by ';'
        #[arg(long, conflicts_with = "n", required_unless_present = "n")]
        poly: Option<String>,
        /// Factor x^n+1 instead
        #[arg(long)]
        n: Option<usize>,
    },
    /// Count self-dual double-negacirculant codes of length 4p
    CensusDouble {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        q: u64,
        #[arg(long, value_enum, default_value = "constructive")]
        mode: DoubleModeArg,
    },
    /// Count self-dual four-negacirculant codes of length 8p
    CensusFour {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        q: u64,
        #[arg(long, value_enum, default_value = "components")]
        mode: FourModeArg,
        /// Random CRT lifts to verify in sample mode
        #[arg(long, default_value_t = DEFAULT_SAMPLE_SIZE)]
        samples: usize,
    },
    /// Minimum distance of a double- (--a) or four-negacirculant (--a, --b) code
    Mindist {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: Option<String>,
        /// Refuse when q^k exceeds this
        #[arg(long, default_value_t = DEFAULT_DISTANCE_BUDGET)]
        budget: u64,
    },
    /// Relative distance thresholds, and the finite-length expurgation margin when --p is given
    Bound {
        #[arg(long)]
        q: u64,
        /// 2 (double) or 4 (four-negacirculant)
        #[arg(long, default_value_t = 2)]
        index: u32,
        #[arg(long)]
        p: Option<u64>,
    },
    /// Orders, case and primitivity of q for every prime p = 3 (mod 4) up to --p-max
    Survey {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        p_max: u64,
    },
}

#[derive(Serialize)]
struct BoundDoc {
    threshold: BoundResult,
    expurgation: Option<ExpurgationMargin>,
}

/// Outcome of a command: the document to print and whether the hypotheses held.
struct Outcome {
    text: String,
    hypotheses_met: bool,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .format_timestamp(None)
        .init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            if let Err(e) = emit(&cli.common, &out.text) {
                eprintln!("error: {e:#}");
                return ExitCode::from(2);
            }
            if out.hypotheses_met {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::Hypothesis(_) | Error::Infeasible(_) | Error::Audit(_)) => 1,
        _ => 2,
    }
}

fn emit(common: &Common, text: &str) -> anyhow::Result<()> {
    match &common.out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> anyhow::Result<Outcome> {
    let common = &cli.common;
    let workers = match common.workers {
        Some(0) => bail!(Error::InvalidInput("--workers must be positive".into())),
        Some(w) => w,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    if common.format == Format::Csv && !matches!(cli.command, Command::Survey { .. }) {
        bail!(Error::InvalidInput("--format csv is only available for survey".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(workers).build()?;
    let (name, parameters) = describe(&cli.command);
    let config = RunConfig {
        command: name.to_string(),
        parameters,
        seed: common.seed,
        workers,
        output: common.out.as_ref().map(|p| p.display().to_string()),
        format: match common.format {
            Format::Json => OutputFormat::Json,
            Format::Csv => OutputFormat::Csv,
        },
    };
    pool.install(|| execute(&cli.command, config))
}

fn describe(command: &Command) -> (&'static str, BTreeMap<String, Value>) {
    let (name, v) = match command {
        Command::Classify { p, q } => ("classify", json!({ "p": p, "q": q })),
        Command::Factor { q, poly, n } => ("factor", json!({ "q": q, "poly": poly, "n": n })),
        Command::CensusDouble { p, q, mode } => (
            "census-double",
            json!({ "p": p, "q": q, "mode": mode.to_possible_value().unwrap().get_name() }),
        ),
        Command::CensusFour { p, q, mode, samples } => (
            "census-four",
            json!({ "p": p, "q": q, "mode": mode.to_possible_value().unwrap().get_name(), "samples": samples }),
        ),
        Command::Mindist { q, n, a, b, budget } => {
            ("mindist", json!({ "q": q, "n": n, "a": a, "b": b, "budget": budget }))
        }
        Command::Bound { q, index, p } => ("bound", json!({ "q": q, "index": index, "p": p })),
        Command::Survey { q, p_max } => ("survey", json!({ "q": q, "p_max": p_max })),
    };
    let Value::Object(map) = v else { unreachable!() };
    (name, map.into_iter().collect())
}

fn envelope<T: Serialize>(config: RunConfig, result: T) -> anyhow::Result<String> {
    let mut text = Envelope::new(config, result).to_json()?;
    text.push('\n');
    Ok(text)
}

fn execute(command: &Command, config: RunConfig) -> anyhow::Result<Outcome> {
    let seed = config.seed;
    let ok = |text| Ok(Outcome { text, hypotheses_met: true });
    match command {
        Command::Classify { p, q } => {
            let report = classify(*p, *q)?;
            let met = report.case == FactorCase::SelfReciprocalPair;
            if !met {
                log::warn!("case {}: x^{}+1 over F_{q} is not a self-reciprocal pair", report.case, report.n);
            }
            let text = envelope(config, ClassificationDoc::from_report(&report))?;
            Ok(Outcome { text, hypotheses_met: met })
        }
        Command::Factor { q, poly, n } => {
            let field = field_of_order(*q)?;
            let f = match (poly, n) {
                (Some(text), _) => Poly::parse(&field, text)?,
                (None, Some(n)) => Poly::xn_plus_one(&field, *n),
                (None, None) => unreachable!("clap requires one of --poly, --n"),
            };
            if f.is_zero() {
                bail!(Error::InvalidInput("cannot factor the zero polynomial".into()));
            }
            let doc = FactorReportDoc {
                q: *q,
                poly: f.to_text(),
                factorization: FactorizationDoc::from_result(&factorize(&f)?),
            };
            ok(envelope(config, doc)?)
        }
        Command::CensusDouble { p, q, mode } => {
            let ctx = make_crt_context(&classify(*p, *q)?)?;
            let mode = match mode {
                DoubleModeArg::Formula => DoubleMode::Formula,
                DoubleModeArg::Constructive => DoubleMode::Constructive,
                DoubleModeArg::Exhaustive => DoubleMode::Exhaustive,
            };
            let report = census_double(&ctx, mode)?;
            check_agreement(report.agree)?;
            ok(envelope(config, report)?)
        }
        Command::CensusFour { p, q, mode, samples } => {
            let ctx = make_crt_context(&classify(*p, *q)?)?;
            let mode = match mode {
                FourModeArg::Formula => FourMode::Formula,
                FourModeArg::Components => FourMode::ConstructiveComponents,
                FourModeArg::Sample => FourMode::SampleLift,
            };
            let report = census_four(&ctx, mode, *samples, seed)?;
            check_agreement(report.agree)?;
            ok(envelope(config, report)?)
        }
        Command::Mindist { q, n, a, b, budget } => {
            let field = field_of_order(*q)?;
            let pa = Poly::parse(&field, a)?;
            let (kind, polys, generator, self_dual) = match b {
                None => {
                    let code = build_double(&pa, *n)?;
                    ("double", vec![pa.to_text()], code.generator().clone(), code.is_self_dual())
                }
                Some(b) => {
                    let pb = Poly::parse(&field, b)?;
                    let code = build_four(&pa, &pb, *n)?;
                    ("four", vec![pa.to_text(), pb.to_text()], code.generator().clone(), code.is_self_dual())
                }
            };
            let d = min_distance(&generator, Some(*budget))?;
            let doc = CodeDoc {
                kind: kind.into(),
                n: *n,
                q: *q,
                polys,
                length: generator.cols(),
                dimension: generator.rank(),
                self_dual,
                min_distance: d,
                budget: *budget,
            };
            ok(envelope(config, doc)?)
        }
        Command::Bound { q, index, p } => {
            let doc = BoundDoc {
                threshold: vg_threshold(*q, *index)?,
                expurgation: p.map(|p| expurgation_margin(p, *q)).transpose()?,
            };
            if let Some(m) = &doc.expurgation {
                if m.d_n.is_none() {
                    log::warn!("no distance guarantee at n = {}: lhs {} >= rhs {}", m.n, m.lhs, m.rhs);
                }
            }
            ok(envelope(config, doc)?)
        }
        Command::Survey { q, p_max } => {
            let s = survey(*q, *p_max)?;
            log::info!(
                "{} primes, q primitive for {} ({:.4})",
                s.summary.rows,
                s.summary.primitive_rows,
                s.summary.primitive_fraction
            );
            match config.format {
                OutputFormat::Csv => ok(survey_table(&s, &config)?),
                OutputFormat::Json => ok(envelope(config, s)?),
            }
        }
    }
}

fn check_agreement(agree: bool) -> anyhow::Result<()> {
    if !agree {
        bail!(Error::Audit("census modes disagree".into()));
    }
    Ok(())
}
