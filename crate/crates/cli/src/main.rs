//! Command-line front end: reproducible runs over graph/operation files with
//! stable output and exit codes.
//!
//! Exit status: 0 on success or a consistent report, 2 when a property
//! violation was found, 1 on usage or hypothesis errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use looplab::algebra::{
    find_taylor_system, is_compatible, loop_oracle, OpTable, Relation,
    DEFAULT_CLOSURE_BUDGET,
};
use looplab::algebra::star::DEFAULT_LEAF_BUDGET;
use looplab::construction::ReducedOverrides;
use looplab::doubleloop::{
    extract_double_loop_term, find_double_loop, generate_q, local_free_algebra,
};
use looplab::error::Error;
use looplab::io::{load_alpha, load_digraph, load_op};
use looplab::loopfinder::{
    extract_loop, prepare_instance, sample_dichotomy, verify_dichotomy_exhaustive,
    InstanceOptions, LoopReport,
};
use looplab::strongloop::strong_loop_pipeline;

#[derive(Parser)]
#[command(name = "looplab", version, about = "Loop lemma workbench for finite digraphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct OutputArgs {
    /// Output format for reports
    #[arg(long, value_enum, default_value = "json", global = true)]
    format: Format,
}

#[derive(Args)]
struct OpArgs {
    /// Path to an operation table file (JSON)
    #[arg(long)]
    op: Option<PathBuf>,
    /// Builtin operation name: projection:i:n[:m], min-chain[:m],
    /// majority3, minority3
    #[arg(long = "op-builtin", conflicts_with = "op")]
    op_builtin: Option<String>,
}

impl OpArgs {
    fn load(&self) -> Result<OpTable, Error> {
        match (&self.op, &self.op_builtin) {
            (Some(path), None) => load_op(path),
            (None, Some(name)) => OpTable::builtin(name),
            _ => Err(Error::InvalidParams(
                "exactly one of --op and --op-builtin is required".into(),
            )),
        }
    }
}

fn parse_reduced(spec: &str) -> Result<ReducedOverrides, Error> {
    let parts: Vec<&str> = spec.split(',').collect();
    let nums: Option<Vec<usize>> = parts.iter().map(|p| p.trim().parse().ok()).collect();
    match nums.as_deref() {
        Some([window, right, left]) => Ok(ReducedOverrides {
            window: *window,
            right: *right,
            left: *left,
        }),
        _ => Err(Error::InvalidParams(format!(
            "--reduced expects W,R,L (three integers), got `{spec}`"
        ))),
    }
}

fn parse_x_set(spec: &Option<String>, domain: usize) -> Result<Vec<usize>, Error> {
    match spec {
        None => Ok((0..domain).collect()),
        Some(s) => {
            let parsed: Option<Vec<usize>> =
                s.split(',').map(|p| p.trim().parse().ok()).collect();
            parsed.ok_or_else(|| {
                Error::InvalidParams(format!("--x expects a comma-separated list, got `{s}`"))
            })
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Structural analysis: SCC, algebraic length, walk constant, cycle lengths
    Analyze {
        #[arg(long)]
        graph: PathBuf,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Check compatibility of an operation with a digraph's edge relation
    Compat {
        #[arg(long)]
        graph: PathBuf,
        #[command(flatten)]
        op: OpArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Close the edge set under the operation and report a derived loop
    OracleLoop {
        #[arg(long)]
        graph: PathBuf,
        #[command(flatten)]
        op: OpArgs,
        #[arg(long = "budget-closure", default_value_t = DEFAULT_CLOSURE_BUDGET)]
        budget_closure: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Search for a Taylor (or quasi-Taylor) system on a subset X
    Taylor {
        #[command(flatten)]
        op: OpArgs,
        /// Comma-separated subset of the domain; defaults to the full domain
        #[arg(long)]
        x: Option<String>,
        /// Drop the idempotency equation
        #[arg(long)]
        quasi: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Build the construction context and dump parameters and the table
    Construct {
        #[arg(long)]
        graph: PathBuf,
        #[command(flatten)]
        op: OpArgs,
        #[arg(long)]
        alpha: PathBuf,
        /// Reduced parameter overrides W,R,L
        #[arg(long)]
        reduced: Option<String>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Sample the dichotomy and shift lemmas with a seeded generator
    Sample {
        #[arg(long)]
        graph: PathBuf,
        #[command(flatten)]
        op: OpArgs,
        #[arg(long)]
        alpha: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
        #[arg(long)]
        reduced: Option<String>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Exhaustive dichotomy verification plus star-power loop extraction
    ExtractLoop {
        #[arg(long)]
        graph: PathBuf,
        #[command(flatten)]
        op: OpArgs,
        #[arg(long)]
        alpha: PathBuf,
        #[arg(long)]
        reduced: Option<String>,
        #[arg(long = "budget-star", default_value_t = DEFAULT_LEAF_BUDGET)]
        budget_star: u64,
        #[arg(long = "budget-closure", default_value_t = DEFAULT_CLOSURE_BUDGET)]
        budget_closure: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Find a double loop over X and extract the witnessing term
    DoubleLoop {
        #[command(flatten)]
        op: OpArgs,
        #[arg(long)]
        x: Option<String>,
        #[arg(long = "budget-closure", default_value_t = DEFAULT_CLOSURE_BUDGET)]
        budget_closure: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Strong loop pipeline: fan-in hypotheses, witnesses, and the loop
    StrongLoop {
        #[arg(long)]
        graph: PathBuf,
        #[command(flatten)]
        op: OpArgs,
        #[arg(long = "budget-closure", default_value_t = DEFAULT_CLOSURE_BUDGET)]
        budget_closure: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
}

fn flatten(prefix: &str, value: &serde_json::Value, out: &mut Vec<String>) {
    match value {
        serde_json::Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(&key, v, out);
            }
        }
        other => out.push(format!("{prefix} = {other}")),
    }
}

fn print_report<T: Serialize>(report: &T, format: Format) {
    match format {
        Format::Json => {
            println!("{}", serde_json::to_string_pretty(report).expect("serializable report"));
        }
        Format::Text => {
            let value = serde_json::to_value(report).expect("serializable report");
            let mut lines = Vec::new();
            flatten("", &value, &mut lines);
            for line in lines {
                println!("{line}");
            }
        }
    }
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Inconsistency(_) | Error::CorollaryViolated { .. } => 2,
        _ => 1,
    }
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Analyze { graph, out } => {
            let g = load_digraph(&graph)?;
            print_report(&looplab::digraph::analyze(&g), out.format);
            Ok(0)
        }
        Command::Compat { graph, op, out } => {
            let g = load_digraph(&graph)?;
            let t = op.load()?;
            #[derive(Serialize)]
            struct CompatReport {
                compatible: bool,
            }
            let compatible = is_compatible(&t, &Relation::from_digraph(&g))?;
            print_report(&CompatReport { compatible }, out.format);
            Ok(0)
        }
        Command::OracleLoop {
            graph,
            op,
            budget_closure,
            out,
        } => {
            let g = load_digraph(&graph)?;
            let t = op.load()?;
            #[derive(Serialize)]
            struct OracleReport {
                found: bool,
                vertex: Option<usize>,
                term: Option<String>,
            }
            let witness = loop_oracle(&t, &g, budget_closure)?;
            let report = match witness {
                None => OracleReport {
                    found: false,
                    vertex: None,
                    term: None,
                },
                Some(w) => {
                    let gen_names: Vec<String> = g
                        .edges()
                        .into_iter()
                        .map(|(u, v)| format!("({u},{v})"))
                        .collect();
                    OracleReport {
                        found: true,
                        vertex: Some(w.vertex),
                        term: Some(w.arena.render(w.root, &["t".into()], &gen_names)),
                    }
                }
            };
            print_report(&report, out.format);
            Ok(0)
        }
        Command::Taylor { op, x, quasi, out } => {
            let t = op.load()?;
            let x_set = parse_x_set(&x, t.domain())?;
            #[derive(Serialize)]
            struct TaylorReport {
                found: bool,
                verified: Option<bool>,
                system: Option<looplab::algebra::TaylorSystem>,
            }
            let system = find_taylor_system(&t, &x_set, !quasi)?;
            let report = TaylorReport {
                found: system.is_some(),
                verified: system.as_ref().map(|s| s.holds(&t, &x_set)),
                system,
            };
            print_report(&report, out.format);
            Ok(0)
        }
        Command::Construct {
            graph,
            op,
            alpha,
            reduced,
            out,
        } => {
            let g = load_digraph(&graph)?;
            let t = op.load()?;
            let a = load_alpha(&alpha)?;
            let options = InstanceOptions {
                reduced: reduced.as_deref().map(parse_reduced).transpose()?,
                require_compatible: false,
                ..Default::default()
            };
            let inst = prepare_instance(g, t, a, &options)?;
            #[derive(Serialize)]
            struct ConstructReport<'a> {
                params: &'a looplab::construction::ConstructionParams,
                compatible: bool,
                table: Vec<looplab::construction::TableEntry>,
            }
            print_report(
                &ConstructReport {
                    params: inst.context().params(),
                    compatible: inst.compatible(),
                    table: inst.context().table_dump(),
                },
                out.format,
            );
            Ok(0)
        }
        Command::Sample {
            graph,
            op,
            alpha,
            seed,
            samples,
            reduced,
            out,
        } => {
            let g = load_digraph(&graph)?;
            let t = op.load()?;
            let a = load_alpha(&alpha)?;
            let options = InstanceOptions {
                reduced: reduced.as_deref().map(parse_reduced).transpose()?,
                require_compatible: false,
                ..Default::default()
            };
            let inst = prepare_instance(g, t, a, &options)?;
            let report = sample_dichotomy(&inst, samples, seed)?;
            // stream violations as JSON lines, then the summary document
            #[derive(Serialize)]
            struct ViolationLine<'a> {
                seed: u64,
                #[serde(flatten)]
                violation: &'a looplab::loopfinder::SampleViolation,
            }
            for v in &report.violations {
                match out.format {
                    Format::Json => println!(
                        "{}",
                        serde_json::to_string(&ViolationLine { seed, violation: v })
                            .expect("serializable violation")
                    ),
                    Format::Text => println!(
                        "violation seed={seed} sample={} kind={} word={:?}: {}",
                        v.index, v.kind, v.word, v.detail
                    ),
                }
            }
            let ok = report.ok();
            let summary = LoopReport {
                mode: "full-sampled".into(),
                compatible: inst.compatible(),
                seed: Some(seed),
                samples: Some(samples),
                dichotomy: report.dichotomy,
                shift_checked: Some(report.shift_checked),
                shift_violations: Some(report.shift_violations),
                loop_vertex: None,
                star_values: None,
                oracle_loop: None,
                odd_girth: None,
                violating_words: None,
            };
            print_report(&summary, out.format);
            Ok(if ok { 0 } else { 2 })
        }
        Command::ExtractLoop {
            graph,
            op,
            alpha,
            reduced,
            budget_star,
            budget_closure,
            out,
        } => {
            let g = load_digraph(&graph)?;
            let t = op.load()?;
            let a = load_alpha(&alpha)?;
            let options = InstanceOptions {
                reduced: reduced.as_deref().map(parse_reduced).transpose()?,
                require_compatible: true,
                closure_budget: budget_closure,
                star_budget: budget_star,
            };
            let inst = prepare_instance(g.clone(), t.clone(), a, &options)?;
            let verification = verify_dichotomy_exhaustive(&inst)?;
            if verification.stats.violations > 0 {
                let report = LoopReport {
                    mode: "reduced-exhaustive".into(),
                    compatible: inst.compatible(),
                    seed: None,
                    samples: None,
                    dichotomy: verification.stats,
                    shift_checked: None,
                    shift_violations: None,
                    loop_vertex: None,
                    star_values: None,
                    oracle_loop: None,
                    odd_girth: None,
                    violating_words: Some(verification.violating_words),
                };
                print_report(&report, out.format);
                return Ok(2);
            }
            let extraction = extract_loop(&inst)?;
            let oracle = loop_oracle(&t, &g, budget_closure)?;
            let oracle_loop = oracle.map(|w| w.vertex);
            if oracle_loop.is_none() {
                return Err(Error::Inconsistency(
                    "extraction produced a loop but the closure oracle found none".into(),
                ));
            }
            let report = LoopReport {
                mode: "reduced-exhaustive".into(),
                compatible: inst.compatible(),
                seed: None,
                samples: None,
                dichotomy: verification.stats,
                shift_checked: None,
                shift_violations: None,
                loop_vertex: Some(extraction.vertex),
                star_values: Some(extraction.star_values),
                oracle_loop,
                odd_girth: None,
                violating_words: Some(Vec::new()),
            };
            print_report(&report, out.format);
            Ok(0)
        }
        Command::DoubleLoop {
            op,
            x,
            budget_closure,
            out,
        } => {
            let t = op.load()?;
            let x_set = parse_x_set(&x, t.domain())?;
            let ops = vec![t];
            let free = local_free_algebra(&ops, &x_set, budget_closure)?;
            let q = generate_q(&free, &ops, budget_closure)?;
            #[derive(Serialize)]
            struct DoubleLoopReport {
                free_size: usize,
                q_size: usize,
                found: bool,
                a: Option<usize>,
                b: Option<usize>,
                term: Option<looplab::doubleloop::DoubleLoopTerm>,
            }
            match find_double_loop(&q) {
                None => {
                    print_report(
                        &DoubleLoopReport {
                            free_size: free.len(),
                            q_size: q.len(),
                            found: false,
                            a: None,
                            b: None,
                            term: None,
                        },
                        out.format,
                    );
                    Ok(0)
                }
                Some(dl) => {
                    let term = extract_double_loop_term(&free, &q, &dl, &ops)?;
                    let verified = term.verified;
                    print_report(
                        &DoubleLoopReport {
                            free_size: free.len(),
                            q_size: q.len(),
                            found: true,
                            a: Some(dl.a),
                            b: Some(dl.b),
                            term: Some(term),
                        },
                        out.format,
                    );
                    Ok(if verified { 0 } else { 2 })
                }
            }
        }
        Command::StrongLoop {
            graph,
            op,
            budget_closure,
            out,
        } => {
            let g = load_digraph(&graph)?;
            let t = op.load()?;
            let report = strong_loop_pipeline(&t, &g, budget_closure)?;
            print_report(&report, out.format);
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}
