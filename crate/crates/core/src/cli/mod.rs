//! Command-line front end.
//!
//! Exit codes: 0 success, 1 diagnostics or validation failure, 2 usage
//! error, 3 guard rejection.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::bench::{measure, InstanceParams, MeasureOptions, ScalingPlan, Workload};
use crate::hierarchy::{
    compile_out, compile_out_weighted, default_epsilon, validate, CompileError, CompiledSet,
};
use crate::insertion::{
    exact_insert, greedy_insert, prune_redundant, InsertionError, DEFAULT_MAX_REGULAR,
};
use crate::scalar::parse_rational;
use crate::Rational;

mod entry;
mod format;

pub use entry::{EntryDocument, Payoff, RunnerUp, TraceStep};
pub use format::{parse, render, HierarchyDocument, ObjectDecl, ParseError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DIAGNOSTICS: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_GUARD: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "lexinsert",
    version,
    about = "Insert objects into feature-based default inheritance hierarchies"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    Uniform,
    Staircase,
    Clashfree,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Report cycles, dangling parents and inheritance ambiguities.
    Validate {
        /// Hierarchy file.
        file: PathBuf,
    },
    /// Print every class with its compiled feature set.
    Compile {
        /// Hierarchy file.
        file: PathBuf,
        /// Print inheritance-distance weights next to each feature.
        #[arg(long)]
        weighted: bool,
        /// Per-link weight increment, e.g. 1/64 or 0.01.
        #[arg(long, requires = "weighted")]
        epsilon: Option<String>,
    },
    /// Insert an object with the greedy algorithm.
    Insert {
        /// Hierarchy file.
        file: PathBuf,
        /// Object declared in the file.
        #[arg(long)]
        object: String,
        /// Remove redundant parent links afterwards.
        #[arg(long)]
        prune: bool,
        /// Break payoff ties in favour of closer inheritance.
        #[arg(long)]
        weighted: bool,
        /// Per-link weight increment, e.g. 1/64 or 0.01.
        #[arg(long, requires = "weighted")]
        epsilon: Option<String>,
        /// Show every iteration with its runners-up.
        #[arg(long)]
        trace: bool,
        /// Print JSON instead of the text entry.
        #[arg(long)]
        json: bool,
    },
    /// Insert an object optimally by exhaustive search.
    Exact {
        /// Hierarchy file.
        file: PathBuf,
        /// Object declared in the file.
        #[arg(long)]
        object: String,
        /// Refuse hierarchies with more regular classes than this.
        #[arg(long, default_value_t = DEFAULT_MAX_REGULAR)]
        max_regular: usize,
        /// Print JSON instead of the text entry.
        #[arg(long)]
        json: bool,
    },
    /// Compare greedy against exact cost on generated instances.
    Bench(BenchArgs),
}

#[derive(Debug, clap::Args)]
pub struct BenchArgs {
    #[arg(long, value_enum)]
    pub preset: Preset,
    #[arg(long)]
    pub trials: usize,
    #[arg(long)]
    pub seed: u64,
    /// CSV output path.
    #[arg(long)]
    pub out: PathBuf,
    /// Attribute universe size (defaults to 2x known, or known when clash-free).
    #[arg(long)]
    pub attrs: Option<usize>,
    #[arg(long, default_value_t = 3)]
    pub values: usize,
    /// Regular class counts to sweep.
    #[arg(long, value_delimiter = ',', default_value = "10")]
    pub regular: Vec<usize>,
    /// Known object feature counts to sweep.
    #[arg(long, value_delimiter = ',', default_value = "12")]
    pub known: Vec<usize>,
    #[arg(long, default_value_t = 1)]
    pub min_size: usize,
    /// Largest class (defaults to min(6, known)).
    #[arg(long)]
    pub max_size: Option<usize>,
    /// Ignored by the clashfree preset.
    #[arg(long, default_value_t = 0.2)]
    pub clash_density: f64,
    /// Conflicting class pairs per instance (uniform preset).
    #[arg(long, default_value_t = 1)]
    pub pairs: usize,
    /// Staircase block counts to sweep.
    #[arg(long, value_delimiter = ',', default_value = "3,4,5")]
    pub blocks: Vec<usize>,
    #[arg(long, default_value_t = DEFAULT_MAX_REGULAR)]
    pub max_regular: usize,
    /// Write zero in the timing columns.
    #[arg(long)]
    pub no_timings: bool,
    /// Also time greedy while doubling |N| and |F|.
    #[arg(long)]
    pub scaling: bool,
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

fn load(path: &Path) -> Result<HierarchyDocument, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::new(EXIT_DIAGNOSTICS, format!("{}: {e}", path.display())))?;
    parse(&text).map_err(|e| Failure::new(EXIT_DIAGNOSTICS, format!("{}:{e}", path.display())))
}

fn compile_failure(e: CompileError) -> Failure {
    match e {
        CompileError::EpsilonTooLarge { .. } => Failure::new(EXIT_GUARD, e.to_string()),
        CompileError::Invalid(report) => {
            Failure::new(EXIT_DIAGNOSTICS, report.to_string().trim_end().to_string())
        }
        CompileError::NonPositiveEpsilon => Failure::new(EXIT_USAGE, e.to_string()),
    }
}

fn compile_doc(
    doc: &HierarchyDocument,
    weighted: bool,
    epsilon: Option<&str>,
) -> Result<CompiledSet<Rational>, Failure> {
    if !weighted {
        return compile_out(&doc.hierarchy).map_err(compile_failure);
    }
    let eps = match epsilon {
        Some(text) => parse_rational(text)
            .ok_or_else(|| Failure::new(EXIT_USAGE, format!("cannot parse epsilon {text:?}")))?,
        None => default_epsilon(&doc.hierarchy).map_err(compile_failure)?,
    };
    compile_out_weighted(&doc.hierarchy, eps).map_err(compile_failure)
}

fn object_spec(doc: &HierarchyDocument, name: &str) -> Result<crate::ObjectSpec, Failure> {
    doc.object_spec(name)
        .ok_or_else(|| Failure::new(EXIT_DIAGNOSTICS, format!("no object named {name}")))
}

fn emit(doc: &EntryDocument, json: bool) -> String {
    if json {
        doc.to_json()
    } else {
        doc.to_text()
    }
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<i32, Failure> {
    let io = |e: std::io::Error| Failure::new(EXIT_DIAGNOSTICS, e.to_string());
    match cli.command {
        Command::Validate { file } => {
            let doc = load(&file)?;
            let report = validate(&doc.hierarchy);
            if report.is_empty() {
                writeln!(out, "ok: {} classes", doc.hierarchy.len()).map_err(io)?;
                Ok(EXIT_OK)
            } else {
                Err(Failure::new(
                    EXIT_DIAGNOSTICS,
                    report.to_string().trim_end().to_string(),
                ))
            }
        }
        Command::Compile {
            file,
            weighted,
            epsilon,
        } => {
            let doc = load(&file)?;
            let n = compile_doc(&doc, weighted, epsilon.as_deref())?;
            for c in n.classes() {
                let mut line = format!("{} {{", c.name);
                for (a, v) in c.features.iter() {
                    line.push_str(&format!(" {a} = {v}"));
                    if c.weights.is_some() {
                        line.push_str(&format!(" @ {}", c.weight(a)));
                    }
                }
                line.push_str(" }");
                writeln!(out, "{line}").map_err(io)?;
            }
            Ok(EXIT_OK)
        }
        Command::Insert {
            file,
            object,
            prune,
            weighted,
            epsilon,
            trace,
            json,
        } => {
            let doc = load(&file)?;
            let f = object_spec(&doc, &object)?;
            let n = crate::hierarchy::augment_singletons(
                &compile_doc(&doc, weighted, epsilon.as_deref())?,
                &f,
            );
            let mut result = greedy_insert(&f, &n);
            if prune {
                result = prune_redundant(&result, &f, &n)
                    .map_err(|e| Failure::new(EXIT_DIAGNOSTICS, e.to_string()))?;
            }
            let entry = EntryDocument::from_result(&result, &n, trace);
            out.write_all(emit(&entry, json).as_bytes()).map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Exact {
            file,
            object,
            max_regular,
            json,
        } => {
            let doc = load(&file)?;
            let f = object_spec(&doc, &object)?;
            let n = crate::hierarchy::augment_singletons(&compile_doc(&doc, false, None)?, &f);
            let result = exact_insert(&f, &n, max_regular).map_err(|e| match e {
                InsertionError::TooManyRegular { .. } => Failure::new(EXIT_GUARD, e.to_string()),
                other => Failure::new(EXIT_DIAGNOSTICS, other.to_string()),
            })?;
            let entry = EntryDocument::from_result(&result, &n, false);
            out.write_all(emit(&entry, json).as_bytes()).map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Bench(args) => bench(args, out),
    }
}

fn bench(args: BenchArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let io = |e: std::io::Error| Failure::new(EXIT_DIAGNOSTICS, e.to_string());
    let mut sweep = Vec::new();
    match args.preset {
        Preset::Staircase => sweep.extend(args.blocks.iter().map(|&b| Workload::Staircase(b))),
        Preset::Uniform | Preset::Clashfree => {
            let clash_free = args.preset == Preset::Clashfree;
            for &regular in &args.regular {
                for &known in &args.known {
                    let params = InstanceParams {
                        n_attributes: args
                            .attrs
                            .unwrap_or(if clash_free { known } else { 2 * known })
                            .max(1),
                        n_values_per_attribute: args.values,
                        n_regular_classes: regular,
                        class_size_range: (
                            args.min_size,
                            args.max_size.unwrap_or(known.clamp(1, 6)),
                        ),
                        object_known_count: known,
                        clash_density: if clash_free { 0.0 } else { args.clash_density },
                        conflicting_pairs: if clash_free { 0 } else { args.pairs },
                        seed: args.seed,
                    };
                    params
                        .check()
                        .map_err(|e| Failure::new(EXIT_USAGE, e.to_string()))?;
                    sweep.push(Workload::Random(params));
                }
            }
        }
    }
    if let Some(&b) = args.blocks.iter().find(|&&b| !(1..=20).contains(&b)) {
        return Err(Failure::new(
            EXIT_USAGE,
            format!("staircase block count {b} outside 1..=20"),
        ));
    }
    let opts = MeasureOptions {
        max_regular: args.max_regular,
        timings: !args.no_timings,
        scaling: args.scaling.then(|| ScalingPlan {
            f_known: 16,
            n_sizes: vec![200, 400, 800],
            n_fixed: 200,
            f_sizes: vec![8, 16, 32],
            reps: 11,
            seed: args.seed,
        }),
    };
    let report =
        measure(&sweep, args.trials, &opts).map_err(|e| Failure::new(EXIT_USAGE, e.to_string()))?;
    let file = fs::File::create(&args.out)
        .map_err(|e| Failure::new(EXIT_DIAGNOSTICS, format!("{}: {e}", args.out.display())))?;
    report
        .write_csv(file)
        .map_err(|e| Failure::new(EXIT_DIAGNOSTICS, e.to_string()))?;
    writeln!(out, "{}", report.summary()).map_err(io)?;
    for row in &report.scaling {
        writeln!(
            out,
            "scaling n_regular={} f_known={} median_nanos={} max_iterations={}",
            row.n_regular, row.f_known, row.median_nanos, row.max_iterations
        )
        .map_err(io)?;
    }
    Ok(if report.violations() > 0 {
        EXIT_DIAGNOSTICS
    } else {
        EXIT_OK
    })
}

/// Runs the command line `args` (program name first), writing results to
/// `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    match execute(cli, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "{}", f.message);
            f.code
        }
    }
}
