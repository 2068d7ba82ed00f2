use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use tree_rendezvous::harness::sweep::{self, DelaySpec, DstarSpec, Placement, SweepSpec};
use tree_rendezvous::harness::verify::{self, Suite};
use tree_rendezvous::sim_engine::{self, RunOptions};
use tree_rendezvous::{AlgorithmKind, DegreeGen, LabelingMode, Variant};

#[derive(Parser)]
#[command(
    name = "rendezvous",
    version,
    about = "Two-agent rendezvous on infinite trees"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate one scenario.
    Run(RunArgs),
    /// Run a TOML-described grid and write a CSV report.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a named verification suite.
    Verify {
        #[arg(long, value_enum)]
        suite: SuiteArg,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Model {
    UnorientedRegular,
    Oriented,
}

#[derive(Clone, Copy, ValueEnum)]
enum LabelingArg {
    Seeded,
    Symmetric,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgoArg {
    Urt,
    Kbl,
    Kbd,
    Nek,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Faithful,
    NoBacktrack,
    RawBinaryLabel,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Codecs,
    Schedule,
    Tree,
    UrtBounds,
    OrientedBounds,
    All,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, value_enum)]
    model: Model,
    /// Degree of the unoriented regular tree.
    #[arg(long)]
    d: Option<u32>,
    /// Child-count generator of the oriented tree, e.g. `regular(2)` or `random(1,3)`.
    #[arg(long)]
    degree_gen: Option<DegreeGen>,
    #[arg(long, value_enum, default_value = "seeded")]
    labeling: LabelingArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Initial distance (unoriented model).
    #[arg(long = "D")]
    distance: Option<u32>,
    #[arg(long)]
    k1: Option<u32>,
    #[arg(long)]
    k2: Option<u32>,
    #[arg(long)]
    h: Option<u32>,
    #[arg(long)]
    l1: u64,
    #[arg(long)]
    l2: u64,
    #[arg(long, default_value_t = 0)]
    delta: u64,
    #[arg(long, value_enum)]
    algo: AlgoArg,
    #[arg(long)]
    lstar: Option<u64>,
    #[arg(long)]
    dstar: Option<u64>,
    /// Label-space size used by the NEK deadline; defaults to max(l1, l2).
    #[arg(long)]
    label_space: Option<u64>,
    #[arg(long)]
    horizon: Option<u64>,
    #[arg(long)]
    trace: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "faithful")]
    variant: VariantArg,
    /// Allow a non-zero delay for the oriented algorithms.
    #[arg(long)]
    probe: bool,
}

fn single_point_spec(args: &RunArgs) -> Result<SweepSpec> {
    let algorithm = match args.algo {
        AlgoArg::Urt => AlgorithmKind::Urt,
        AlgoArg::Kbl => AlgorithmKind::Kbl,
        AlgoArg::Kbd => AlgorithmKind::Kbd,
        AlgoArg::Nek => AlgorithmKind::Nek,
    };
    let mut spec = SweepSpec::new(algorithm);
    spec.variant = match args.variant {
        VariantArg::Faithful => Variant::Faithful,
        VariantArg::NoBacktrack => Variant::NoBacktrack,
        VariantArg::RawBinaryLabel => Variant::RawBinaryLabel,
    };
    spec.label_pairs = vec![[args.l1, args.l2]];
    spec.label_space = args.label_space;
    spec.delays = vec![DelaySpec::Rounds(args.delta)];
    spec.seeds = vec![args.seed];
    spec.counterexample_probe = args.probe;
    match (args.model, algorithm) {
        (Model::UnorientedRegular, AlgorithmKind::Urt) => {
            spec.degrees = vec![args.d.context("--d is required for unoriented-regular")?];
            spec.distances = vec![args
                .distance
                .context("--D is required for unoriented-regular")?];
            spec.labelings = vec![match args.labeling {
                LabelingArg::Seeded => LabelingMode::Seeded,
                LabelingArg::Symmetric => LabelingMode::Symmetric,
            }];
        }
        (Model::Oriented, AlgorithmKind::Kbl | AlgorithmKind::Kbd | AlgorithmKind::Nek) => {
            spec.degree_gens = vec![args
                .degree_gen
                .context("--degree-gen is required for oriented")?];
            spec.placements = vec![Placement {
                k1: args.k1.context("--k1 is required for oriented")?,
                k2: args.k2.context("--k2 is required for oriented")?,
                h: args.h.context("--h is required for oriented")?,
            }];
            match algorithm {
                AlgorithmKind::Kbl => {
                    spec.lstar = vec![args.lstar.context("--lstar is required for kbl")?]
                }
                AlgorithmKind::Kbd => {
                    spec.dstar = vec![DstarSpec::Fixed(
                        args.dstar.context("--dstar is required for kbd")?,
                    )]
                }
                _ => {}
            }
        }
        (Model::UnorientedRegular, _) => bail!("kbl, kbd and nek need --model oriented"),
        (Model::Oriented, _) => bail!("urt needs --model unoriented-regular"),
    }
    Ok(spec)
}

fn run(args: RunArgs) -> Result<ExitCode> {
    let spec = single_point_spec(&args)?;
    let mut points = sweep::expand(&spec)?;
    let mut point = points.pop().context("empty scenario")?;
    if let Some(h) = args.horizon {
        point.scenario.horizon = h;
    }
    let options = RunOptions {
        record_history: false,
        record_trace: args.trace.is_some(),
    };
    let outcome = sim_engine::run_with(&point.scenario, options)?;
    if let Some(path) = &args.trace {
        let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
        sim_engine::write_trace(&outcome.trace, BufWriter::new(file))?;
    }
    let pass = outcome.meeting_round.is_some_and(|t| t <= point.deadline);
    let s = &point.scenario;
    let mut out = std::io::stdout().lock();
    writeln!(out, "tree: {} seed={}", s.tree.shape(), point.seed)?;
    writeln!(out, "starts: v1={} v2={} D={}", s.v1, s.v2, s.distance())?;
    writeln!(out, "labels: l1={} l2={} delta={}", s.l1, s.l2, s.delay)?;
    writeln!(out, "algorithm: {} {}", s.algorithm.kind(), point.knowledge)?;
    writeln!(out, "met: {}", outcome.met)?;
    match (&outcome.meeting_round, &outcome.meeting_node) {
        (Some(t), Some(n)) => writeln!(out, "meeting: round {t} at {n}")?,
        _ => writeln!(out, "meeting: none within {} rounds", outcome.rounds)?,
    }
    writeln!(
        out,
        "deadline: {} ({})",
        point.deadline,
        if pass { "pass" } else { "fail" }
    )?;
    writeln!(
        out,
        "moves: a1={} a2={}",
        outcome.moves[0], outcome.moves[1]
    )?;
    Ok(if pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn run_sweep(config: PathBuf, out: PathBuf) -> Result<ExitCode> {
    let text = std::fs::read_to_string(&config)
        .with_context(|| format!("reading {}", config.display()))?;
    let spec = SweepSpec::from_toml(&text)?;
    let report = sweep::sweep(&spec)?;
    let file = File::create(&out).with_context(|| format!("creating {}", out.display()))?;
    report.write_csv(BufWriter::new(file))?;
    let failures = report.failures().count();
    println!(
        "{} scenarios, {failures} failures, report in {}",
        report.rows.len(),
        out.display()
    );
    Ok(ExitCode::SUCCESS)
}

fn run_verify(suite: SuiteArg) -> Result<ExitCode> {
    let suite = match suite {
        SuiteArg::Codecs => Suite::Codecs,
        SuiteArg::Schedule => Suite::Schedule,
        SuiteArg::Tree => Suite::Tree,
        SuiteArg::UrtBounds => Suite::UrtBounds,
        SuiteArg::OrientedBounds => Suite::OrientedBounds,
        SuiteArg::All => Suite::All,
    };
    let mut ok = true;
    for check in verify::run_suite_with(suite, |check| println!("{check}")) {
        ok &= check.passed;
    }
    Ok(if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn main() -> Result<ExitCode> {
    match Cli::parse().command {
        Command::Run(args) => run(args),
        Command::Sweep { config, out } => run_sweep(config, out),
        Command::Verify { suite } => run_verify(suite),
    }
}
