//! Command-line front end: `run`, `verify`, `sweep` and `bounds`.
//!
//! Samples are labelled `1..=t` on the command line and in every output file.
//! JSON outputs carry `"schema": 1`.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use pooltest_core::analysis::reference_bounds;
use pooltest_core::binomial::ceil_log2;
use pooltest_core::oracle::TranscriptDump;
use pooltest_core::strategy::two_defect::{
    bound_breakdown, select_params_in, SearchSpace, DEFAULT_N_PRIME_MAX,
};
use pooltest_core::verify::{verify_exhaustive, SetOutcome, Verification};
use pooltest_core::{
    run_generic, BinaryCode, GenericStrategyConfig, Oracle, S2Params, StageTranscript,
    TwoDefectStrategy,
};

pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INCORRECT: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

pub const SWEEP_CSV_HEADER: &str = "t,log2t,bound,bound/log2t,info_bound,dr82,two_stage,damaschke25";
pub const VERIFY_S2_CSV_HEADER: &str = "t,q,n_hat,n_prime,w,bound,measured_worst,stages,sets,all_correct";
pub const VERIFY_GENERIC_CSV_HEADER: &str = "t,s,n_rows,column_weight,sets,all_correct,measured_worst,stages";
pub const RUN_CSV_HEADER: &str = "strategy,t,s,hidden,answer,correct,total,stages,tests_per_stage";
pub const FULL_DUMP_CSV_HEADER: &str = "defects,answer,correct,total,stages";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] pooltest_core::Error),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use pooltest_core::Error as E;
        match self {
            CliError::Core(E::Contract(_) | E::Inconsistent(_)) => EXIT_INCORRECT,
            _ => EXIT_USAGE,
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

#[derive(Debug, Parser)]
#[command(name = "pooltest", version, about = "Multistage group testing runs, verification and sweeps")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Identify one defect set and report the tests spent.
    Run(RunArgs),
    /// Check a strategy against every defect set of size at most s.
    Verify(VerifyArgs),
    /// Optimized two-defect test counts against reference bounds over many t.
    Sweep(SweepArgs),
    /// Reference test counts for one (t, s).
    Bounds(BoundsArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyKind {
    S2,
    Generic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct S2Args {
    /// Fix the inner code length.
    #[arg(long)]
    pub n_prime: Option<usize>,
    /// Fix the inner code weight.
    #[arg(long)]
    pub inner_weight: Option<usize>,
    /// Fix the outer alphabet size.
    #[arg(long)]
    pub q: Option<usize>,
    /// Largest inner length searched when --n-prime is not given.
    #[arg(long, default_value_t = DEFAULT_N_PRIME_MAX)]
    pub n_prime_max: usize,
}

impl S2Args {
    pub fn search_space(&self) -> SearchSpace {
        SearchSpace {
            n_prime: match self.n_prime {
                Some(n) => n..=n,
                None => 2..=self.n_prime_max,
            },
            inner_weight: self.inner_weight.map(|k| k..=k),
            q: self.q.map(|q| q..=q),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct GenericArgs {
    /// Rows of the random first-stage code; defaults to s·⌈log₂ t⌉.
    #[arg(long)]
    pub rows: Option<usize>,
    /// Relative column weight of the random first-stage code.
    #[arg(long, default_value_t = 0.25)]
    pub col_weight: f64,
    /// Search every positive class at stage 3 and stop there.
    #[arg(long)]
    pub identify_all_at_stage3: bool,
}

#[derive(Debug, Clone, Args)]
pub struct InstanceArgs {
    #[arg(long)]
    pub t: usize,
    #[arg(long, default_value_t = 2)]
    pub s: usize,
    #[arg(long, value_enum, default_value_t = StrategyKind::S2)]
    pub strategy: StrategyKind,
    /// Seeds the random generic code and random defect sets.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub s2: S2Args,
    #[command(flatten)]
    pub generic: GenericArgs,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    /// Comma-separated defective samples (1-based); empty for none. Random when omitted.
    #[arg(long)]
    pub defects: Option<String>,
    /// Write the stage transcript as JSON.
    #[arg(long)]
    pub dump_transcript: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    /// Write one CSV row per defect set.
    #[arg(long)]
    pub full_dump: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    /// Population sizes, comma-separated.
    #[arg(long, value_delimiter = ',')]
    pub t: Vec<usize>,
    /// Also sweep t = 2^e for e from --log2-from to --log2-to.
    #[arg(long)]
    pub log2_from: Option<u32>,
    #[arg(long)]
    pub log2_to: Option<u32>,
    #[arg(long, default_value_t = 1)]
    pub log2_step: u32,
    #[command(flatten)]
    pub s2: S2Args,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct BoundsArgs {
    #[arg(long)]
    pub t: usize,
    #[arg(long, default_value_t = 2)]
    pub s: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Runs a parsed command and returns the process exit code.
pub fn execute(cli: &Cli) -> i32 {
    let result = match &cli.command {
        Command::Run(a) => cmd_run(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Sweep(a) => cmd_sweep(a).map(|()| EXIT_OK),
        Command::Bounds(a) => cmd_bounds(a).map(|()| EXIT_OK),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

enum Built {
    S2(TwoDefectStrategy),
    Generic(GenericStrategyConfig, f64),
}

impl Built {
    fn describe(&self) -> serde_json::Value {
        match self {
            Built::S2(s) => json!({
                "params": s.params(),
                "bound": bound_breakdown(s.params()).total(),
            }),
            Built::Generic(c, w) => json!({
                "code": {
                    "n_rows": c.code.n_rows(),
                    "column_weight": w,
                    "identify_all_at_stage3": c.identify_all_at_stage3,
                },
            }),
        }
    }
}

fn build_strategy(inst: &InstanceArgs) -> Result<Built, CliError> {
    if inst.t < 2 {
        return Err(usage(format!("--t must be at least 2, got {}", inst.t)));
    }
    if inst.s == 0 {
        return Err(usage("--s must be at least 1"));
    }
    match inst.strategy {
        StrategyKind::S2 => {
            if inst.s > 2 {
                return Err(usage(format!(
                    "the s2 strategy handles at most 2 defects, got --s {}",
                    inst.s
                )));
            }
            let params = select_params_in(inst.t, &inst.s2.search_space())?;
            Ok(Built::S2(TwoDefectStrategy::new(params)?))
        }
        StrategyKind::Generic => {
            let rows = inst
                .generic
                .rows
                .unwrap_or(inst.s * ceil_log2(inst.t) as usize)
                .max(2);
            let w = inst.generic.col_weight;
            if !(w > 0.0 && w < 1.0) {
                return Err(usage(format!("--col-weight must lie in (0, 1), got {w}")));
            }
            let weight = ((w * rows as f64).round() as usize).clamp(1, rows - 1);
            let code = BinaryCode::random_constant_weight(rows, weight, inst.t, inst.seed)?;
            let config = GenericStrategyConfig::new(code, inst.s)?
                .identify_all_at_stage3(inst.generic.identify_all_at_stage3);
            Ok(Built::Generic(config, weight as f64 / rows as f64))
        }
    }
}

/// Parses a 1-based, comma-separated list into sorted 0-based indices.
pub fn parse_defects(spec: &str, t: usize, s: usize) -> Result<Vec<usize>, CliError> {
    let mut out = Vec::new();
    for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let label: usize = part
            .parse()
            .map_err(|_| usage(format!("not a sample label: {part:?}")))?;
        if label == 0 || label > t {
            return Err(usage(format!("defect {label} outside 1..={t}")));
        }
        out.push(label - 1);
    }
    out.sort_unstable();
    if out.windows(2).any(|w| w[0] == w[1]) {
        return Err(usage("repeated defect label"));
    }
    if out.len() > s {
        return Err(usage(format!("{} defects given but --s is {s}", out.len())));
    }
    Ok(out)
}

fn random_defects(t: usize, s: usize, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1);
    let mut d = sample(&mut rng, t, s.min(t)).into_vec();
    d.sort_unstable();
    d
}

fn one_based(xs: &[usize]) -> Vec<usize> {
    xs.iter().map(|x| x + 1).collect()
}

fn join_labels(xs: &[usize]) -> String {
    xs.iter()
        .map(|x| (x + 1).to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn write_output(path: Option<&Path>, content: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, content).map_err(|source| CliError::Io {
            path: p.to_path_buf(),
            source,
        }),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct TranscriptFile<'a> {
    schema: u32,
    #[serde(flatten)]
    dump: &'a TranscriptDump,
}

pub fn cmd_run(args: &RunArgs) -> Result<i32, CliError> {
    let inst = &args.instance;
    let built = build_strategy(inst)?;
    let hidden = match &args.defects {
        Some(spec) => parse_defects(spec, inst.t, inst.s)?,
        None => random_defects(inst.t, inst.s, inst.seed),
    };
    let mut oracle = Oracle::new(inst.t, inst.s, &hidden)?;
    let (answer, extra) = match &built {
        Built::S2(s) => {
            let report = s.run(&mut oracle)?;
            let extra = json!({
                "layer_weights": report.layer_weights,
                "split_layer": report.split_layer.map(|l| l + 1),
            });
            (report.answer, extra)
        }
        Built::Generic(c, _) => {
            let report = run_generic(c, &mut oracle)?;
            let extra = json!({ "edges": report.edges, "colors": report.colors });
            (report.answer, extra)
        }
    };
    let (revealed, transcript): (Vec<usize>, StageTranscript) = oracle.into_parts();
    let correct = answer == revealed;
    if let Some(path) = &args.dump_transcript {
        let dump = transcript.to_dump();
        write_output(
            Some(path),
            &to_json(&TranscriptFile {
                schema: SCHEMA_VERSION,
                dump: &dump,
            }),
        )?;
    }
    let strategy = match inst.strategy {
        StrategyKind::S2 => "s2",
        StrategyKind::Generic => "generic",
    };
    let content = match args.output.format.unwrap_or(Format::Json) {
        Format::Json => {
            let mut report = json!({
                "schema": SCHEMA_VERSION,
                "command": "run",
                "strategy": strategy,
                "t": inst.t,
                "s": inst.s,
                "seed": inst.seed,
                "hidden": one_based(&revealed),
                "answer": one_based(&answer),
                "correct": correct,
                "tests_per_stage": transcript.stage_sizes(),
                "total": transcript.total_tests(),
                "stages": transcript.stage_count(),
                "details": extra,
            });
            merge(&mut report, built.describe());
            to_json(&report)
        }
        Format::Csv => format!(
            "{RUN_CSV_HEADER}\n{strategy},{},{},{},{},{correct},{},{},{}\n",
            inst.t,
            inst.s,
            join_labels(&revealed),
            join_labels(&answer),
            transcript.total_tests(),
            transcript.stage_count(),
            transcript
                .stage_sizes()
                .iter()
                .map(usize::to_string)
                .collect::<Vec<_>>()
                .join(" "),
        ),
    };
    write_output(args.output.output.as_deref(), &content)?;
    Ok(if correct { EXIT_OK } else { EXIT_INCORRECT })
}

fn merge(into: &mut serde_json::Value, from: serde_json::Value) {
    if let (Some(a), serde_json::Value::Object(b)) = (into.as_object_mut(), from) {
        a.extend(b);
    }
}

pub fn cmd_verify(args: &VerifyArgs) -> Result<i32, CliError> {
    let inst = &args.instance;
    let built = build_strategy(inst)?;
    let verification: Verification = match &built {
        Built::S2(s) => verify_exhaustive(s, inst.s)?,
        Built::Generic(c, _) => verify_exhaustive(c, inst.s)?,
    };
    let summary = &verification.summary;
    if let Some(path) = &args.full_dump {
        write_output(Some(path), &full_dump_csv(&verification.outcomes))?;
    }
    let content = match args.output.format.unwrap_or(Format::Json) {
        Format::Json => {
            let mut report = json!({
                "schema": SCHEMA_VERSION,
                "command": "verify",
                "strategy": summary.strategy,
                "t": summary.t,
                "s": summary.s,
                "seed": inst.seed,
                "sets": summary.sets,
                "all_correct": summary.all_correct,
                "incorrect": summary.incorrect,
                "worst_total": summary.worst_total,
                "worst_case_set": one_based(&summary.worst_case_set),
                "histogram": summary.histogram,
                "max_stages": summary.max_stages,
                "declared_stages": summary.declared_stages,
            });
            merge(&mut report, built.describe());
            to_json(&report)
        }
        Format::Csv => match &built {
            Built::S2(s) => {
                let p = s.params();
                format!(
                    "{VERIFY_S2_CSV_HEADER}\n{},{},{},{},{:.6},{},{},{},{},{}\n",
                    p.t,
                    p.q,
                    p.n_hat,
                    p.n_prime,
                    p.relative_weight(),
                    bound_breakdown(p).total(),
                    summary.worst_total,
                    summary.max_stages,
                    summary.sets,
                    summary.all_correct,
                )
            }
            Built::Generic(c, w) => format!(
                "{VERIFY_GENERIC_CSV_HEADER}\n{},{},{},{:.6},{},{},{},{}\n",
                summary.t,
                summary.s,
                c.code.n_rows(),
                w,
                summary.sets,
                summary.all_correct,
                summary.worst_total,
                summary.max_stages,
            ),
        },
    };
    write_output(args.output.output.as_deref(), &content)?;
    Ok(if summary.all_correct {
        EXIT_OK
    } else {
        EXIT_INCORRECT
    })
}

fn full_dump_csv(outcomes: &[SetOutcome]) -> String {
    let mut out = String::from(FULL_DUMP_CSV_HEADER);
    out.push('\n');
    for o in outcomes {
        let answer = o.answer.as_deref().map(join_labels).unwrap_or_else(|| "error".into());
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            join_labels(&o.defects),
            answer,
            o.correct,
            o.total,
            o.stages
        );
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub t: usize,
    pub log2t: f64,
    pub params: S2Params,
    pub bound: u64,
    pub bound_per_log2t: f64,
    pub info_bound: f64,
    pub dr82: f64,
    pub two_stage: f64,
    pub damaschke25: f64,
}

pub fn sweep_rows(ts: &[usize], space: &SearchSpace) -> Result<Vec<SweepRow>, CliError> {
    ts.iter()
        .map(|&t| {
            let params = select_params_in(t, space)?;
            let bound = bound_breakdown(&params).total();
            let refs = reference_bounds(t, 2)?;
            Ok(SweepRow {
                t,
                log2t: refs.log2_t,
                params,
                bound,
                bound_per_log2t: bound as f64 / refs.log2_t,
                info_bound: refs.info_bound,
                dr82: refs.dr82_nonadaptive,
                two_stage: refs.two_stage,
                damaschke25: refs.damaschke.unwrap_or(f64::NAN),
            })
        })
        .collect()
}

fn sweep_values(args: &SweepArgs) -> Result<Vec<usize>, CliError> {
    let mut ts = args.t.clone();
    match (args.log2_from, args.log2_to) {
        (Some(from), Some(to)) => {
            if args.log2_step == 0 || from > to || to >= usize::BITS {
                return Err(usage("need --log2-from <= --log2-to and a positive --log2-step"));
            }
            ts.extend((from..=to).step_by(args.log2_step as usize).map(|e| 1usize << e));
        }
        (None, None) => {}
        _ => return Err(usage("--log2-from and --log2-to go together")),
    }
    if ts.is_empty() {
        return Err(usage("nothing to sweep: give --t or --log2-from/--log2-to"));
    }
    Ok(ts)
}

pub fn cmd_sweep(args: &SweepArgs) -> Result<(), CliError> {
    let ts = sweep_values(args)?;
    let rows = sweep_rows(&ts, &args.s2.search_space())?;
    let content = match args.output.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut out = format!("{SWEEP_CSV_HEADER}\n");
            for r in &rows {
                let _ = writeln!(
                    out,
                    "{},{:.6},{},{:.6},{:.6},{:.6},{:.6},{:.6}",
                    r.t, r.log2t, r.bound, r.bound_per_log2t, r.info_bound, r.dr82, r.two_stage, r.damaschke25
                );
            }
            out
        }
        Format::Json => to_json(&json!({
            "schema": SCHEMA_VERSION,
            "command": "sweep",
            "rows": rows,
        })),
    };
    write_output(args.output.output.as_deref(), &content)
}

pub fn cmd_bounds(args: &BoundsArgs) -> Result<(), CliError> {
    let r = reference_bounds(args.t, args.s).map_err(|e| usage(e.to_string()))?;
    let content = match args.output.format.unwrap_or(Format::Json) {
        Format::Json => to_json(&json!({
            "schema": SCHEMA_VERSION,
            "command": "bounds",
            "note": "main terms only; (1 + o(1)) factors omitted; two_stage is asymptotic in s",
            "report": r,
        })),
        Format::Csv => format!(
            "t,s,log2t,info_bound,dr82,two_stage,damaschke25\n{},{},{:.6},{:.6},{:.6},{:.6},{}\n",
            r.t,
            r.s,
            r.log2_t,
            r.info_bound,
            r.dr82_nonadaptive,
            r.two_stage,
            r.damaschke.map_or_else(String::new, |d| format!("{d:.6}")),
        ),
    };
    write_output(args.output.output.as_deref(), &content)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defect_labels() {
        assert_eq!(parse_defects("1,36", 36, 2).unwrap(), [0, 35]);
        assert_eq!(parse_defects("", 36, 2).unwrap(), Vec::<usize>::new());
        assert_eq!(parse_defects(" 5 ", 36, 2).unwrap(), [4]);
        assert!(parse_defects("37", 36, 2).is_err());
        assert!(parse_defects("0", 36, 2).is_err());
        assert!(parse_defects("1,2,3", 36, 2).is_err());
        assert!(parse_defects("2,2", 36, 2).is_err());
        assert!(parse_defects("x", 36, 2).is_err());
    }

    #[test]
    fn random_defects_are_seeded() {
        assert_eq!(random_defects(100, 2, 9), random_defects(100, 2, 9));
        assert_eq!(random_defects(100, 2, 9).len(), 2);
    }

    #[test]
    fn sweep_range_validation() {
        let args = |from, to| SweepArgs {
            t: vec![],
            log2_from: from,
            log2_to: to,
            log2_step: 2,
            s2: S2Args {
                n_prime: None,
                inner_weight: None,
                q: None,
                n_prime_max: 24,
            },
            output: OutputArgs {
                output: None,
                format: None,
            },
        };
        assert_eq!(sweep_values(&args(Some(10), Some(14))).unwrap(), [1024, 4096, 16384]);
        assert!(sweep_values(&args(Some(10), None)).is_err());
        assert!(sweep_values(&args(None, None)).is_err());
    }
}
