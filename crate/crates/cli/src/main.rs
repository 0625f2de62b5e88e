//! Batch front end for the `lemma-forge` proof-trace toolkit.
//!
//! Every subcommand is a straight pipeline over the library: read the trace
//! (with progress on stderr for very large files), build the inference DAG,
//! run one analysis, and write its standard text format to `--out` or
//! stdout. Exit codes: 0 on success, 1 on any input problem, 2 on an
//! internal fault (a panic). Identical inputs and flags always produce
//! byte-identical outputs, regardless of `--threads`.

use std::collections::BTreeSet;
use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::panic::catch_unwind;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use lemma_forge::export::{
    export_ranking, fmt_sig, write_chrono, write_edge_list, write_problems, write_ranked_pairs,
    write_stats,
};
use lemma_forge::scenarios::{derive_new_graph, emit_problems, fully_honest_schedule, ProblemMode};
use lemma_forge::{
    compute_metric, merge_alpha_variants, prune_variants, read_names, read_normal_forms,
    remap_names, select_schedule, write_names, write_trace, LemmaId, MetricId, MetricParams,
    NamedMap, NormalFormMap, ProofGraph, ProofTrace, TagSet, TraceReader,
};

#[derive(Parser)]
#[command(
    name = "lemma-forge",
    version,
    about = "Mine kernel proof traces: statistics, lemma ranking, selection, and derived premise datasets"
)]
struct Cli {
    /// Cap worker threads (default: all cores; env LEMMA_FORGE_THREADS).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a trace and report its size; fail on the first malformed line.
    ParseCheck(ParseCheckArgs),
    /// Print summary statistics of the inference DAG.
    Stats(StatsArgs),
    /// Rewrite dependencies onto canonical alpha-variants.
    Normalize(NormalizeArgs),
    /// Rank all lemmas under a quality metric.
    Rank(RankArgs),
    /// Greedily select the best lemmas and name them.
    Select(SelectArgs),
    /// Export the derived dependency graph over the named lemmas.
    Derive(DeriveArgs),
    /// Emit one premise problem per named theorem.
    Problems(ProblemsArgs),
    /// Re-run selection against each theorem's strict chronological prefix.
    HonestRun(HonestRunArgs),
    /// Export the chronological premise dataset for external learners.
    ChronoExport(ChronoArgs),
}

#[derive(Args)]
struct InputArgs {
    /// Proof-trace file.
    #[arg(long)]
    trace: PathBuf,
    /// Named-lemma sidecar, one "INDEX NAME" per line.
    #[arg(long)]
    names: Option<PathBuf>,
    /// Tag letters treated as axioms.
    #[arg(long, default_value = "A")]
    axioms: String,
}

#[derive(Args)]
struct MetricArgs {
    /// Metric id: q1, q1r:<r>, q2, q3, eq1, eq2, pr1..pr5.
    #[arg(long)]
    metric: String,
    /// Damping factor for the rank metrics.
    #[arg(long, default_value_t = 0.85)]
    damping: f64,
    /// L1 convergence tolerance for the rank metrics.
    #[arg(long, default_value_t = 1e-12)]
    pr_tol: f64,
    /// Iteration cap for the rank metrics.
    #[arg(long, default_value_t = 200)]
    pr_iters: u32,
}

impl MetricArgs {
    fn metric(&self) -> Result<MetricId> {
        Ok(self.metric.parse()?)
    }

    fn params(&self) -> MetricParams {
        MetricParams {
            damping: self.damping,
            pr_tolerance: self.pr_tol,
            pr_max_iters: self.pr_iters,
        }
    }
}

#[derive(Args)]
struct OutArgs {
    /// Output file (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ParseCheckArgs {
    /// Proof-trace file.
    #[arg(long)]
    trace: PathBuf,
}

#[derive(Args)]
struct StatsArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Normal-form sidecar; adds the distinct-forms count.
    #[arg(long)]
    nf: Option<PathBuf>,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct NormalizeArgs {
    /// Proof-trace file.
    #[arg(long)]
    trace: PathBuf,
    /// Normal-form sidecar, one "INDEX<TAB>FORM" per line.
    #[arg(long)]
    nf: PathBuf,
    /// Also drop unnamed non-canonical variants and renumber.
    #[arg(long)]
    prune: bool,
    /// Named-lemma sidecar to carry through a prune.
    #[arg(long)]
    names: Option<PathBuf>,
    /// Where to write the renumbered names after a prune.
    #[arg(long, requires = "prune")]
    names_out: Option<PathBuf>,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct RankArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    metric: MetricArgs,
    /// Keep only the top K lines.
    #[arg(long)]
    top: Option<usize>,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct SelectArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    metric: MetricArgs,
    /// How many lemmas to select.
    #[arg(long)]
    count: usize,
    /// Ignore existing names when scoring (default: extend them).
    #[arg(long, conflicts_with = "extend")]
    from_scratch: bool,
    /// Score against the existing named set (the default).
    #[arg(long)]
    extend: bool,
    /// Report progress after every K selections.
    #[arg(long)]
    checkpoint_every: Option<usize>,
    /// Where to write the updated names, new picks as LEMMA_00001, ...
    #[arg(long)]
    names_out: Option<PathBuf>,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct DeriveArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct ProblemsArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Extra names treated as members but not as conjectures.
    #[arg(long)]
    lemmas: Option<PathBuf>,
    /// Premise policy.
    #[arg(long, value_enum)]
    mode: Mode,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    /// Keep every derived-graph parent.
    Cheating,
    /// Replace parents from the conjecture's own proof segment.
    AlmostHonest,
}

#[derive(Args)]
struct HonestRunArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    metric: MetricArgs,
    /// Re-select before every K-th named theorem.
    #[arg(long, default_value_t = 1)]
    step: usize,
    /// How many lemmas to select per run.
    #[arg(long)]
    count: usize,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct ChronoArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Extra names included as members.
    #[arg(long)]
    lemmas: Option<PathBuf>,
    #[command(flatten)]
    out: OutArgs,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // Usage problems are input errors (exit 1); help and version
            // requests are successes.
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            std::process::exit(code);
        }
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();

    if let Some(threads) = thread_cap(cli.threads) {
        if let Err(err) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            log::warn!("could not configure {threads} worker threads: {err}");
        }
    }

    match catch_unwind(|| run(cli.command)) {
        Ok(Ok(())) => {}
        Ok(Err(err)) => {
            eprintln!("error: {err:#}");
            std::process::exit(1);
        }
        Err(_) => {
            eprintln!("internal error: worker panicked");
            std::process::exit(2);
        }
    }
}

fn thread_cap(flag: Option<usize>) -> Option<usize> {
    flag.or_else(|| match std::env::var("LEMMA_FORGE_THREADS") {
        Ok(raw) => match raw.trim().parse() {
            Ok(n) => Some(n),
            Err(_) => {
                log::warn!("ignoring unparsable LEMMA_FORGE_THREADS={raw:?}");
                None
            }
        },
        Err(_) => None,
    })
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::ParseCheck(args) => parse_check(args),
        Command::Stats(args) => stats(args),
        Command::Normalize(args) => normalize(args),
        Command::Rank(args) => rank(args),
        Command::Select(args) => select(args),
        Command::Derive(args) => derive(args),
        Command::Problems(args) => problems(args),
        Command::HonestRun(args) => honest_run(args),
        Command::ChronoExport(args) => chrono_export(args),
    }
}

/// Reads a trace, reporting progress on stderr every million lemmas.
fn load_trace(path: &Path) -> Result<ProofTrace> {
    let file = File::open(path).with_context(|| path.display().to_string())?;
    let mut nodes = Vec::new();
    for node in TraceReader::new(BufReader::new(file)) {
        nodes.push(node.with_context(|| path.display().to_string())?);
        if nodes.len() % 1_000_000 == 0 {
            eprintln!("{}: parsed {} lemmas", path.display(), nodes.len());
        }
    }
    ProofTrace::from_nodes(nodes).with_context(|| path.display().to_string())
}

fn load_names(path: &Path) -> Result<NamedMap> {
    let file = File::open(path).with_context(|| path.display().to_string())?;
    read_names(BufReader::new(file)).with_context(|| path.display().to_string())
}

fn load_names_opt(path: &Option<PathBuf>) -> Result<NamedMap> {
    match path {
        Some(path) => load_names(path),
        None => Ok(NamedMap::new()),
    }
}

fn load_normal_forms(path: &Path) -> Result<NormalFormMap> {
    let file = File::open(path).with_context(|| path.display().to_string())?;
    read_normal_forms(BufReader::new(file)).with_context(|| path.display().to_string())
}

fn load_graph(input: &InputArgs) -> Result<(ProofGraph, NamedMap)> {
    let trace = load_trace(&input.trace)?;
    let names = load_names_opt(&input.names)?;
    let tags: TagSet = input
        .axioms
        .parse()
        .with_context(|| format!("--axioms {:?}", input.axioms))?;
    let graph = ProofGraph::build(trace, &names, tags)?;
    Ok((graph, names))
}

/// Runs `body` against `--out` or stdout, through a buffered writer.
fn write_out<F>(out: &OutArgs, body: F) -> Result<()>
where
    F: FnOnce(&mut dyn Write) -> Result<()>,
{
    match &out.out {
        Some(path) => {
            let file = File::create(path).with_context(|| path.display().to_string())?;
            let mut writer = BufWriter::new(file);
            body(&mut writer)?;
            writer.flush().with_context(|| path.display().to_string())?;
        }
        None => {
            let stdout = io::stdout();
            let mut writer = BufWriter::new(stdout.lock());
            body(&mut writer)?;
            writer.flush()?;
        }
    }
    Ok(())
}

fn parse_check(args: ParseCheckArgs) -> Result<()> {
    let trace = load_trace(&args.trace)?;
    println!("OK: {} lemmas", trace.len());
    Ok(())
}

fn stats(args: StatsArgs) -> Result<()> {
    let (graph, _) = load_graph(&args.input)?;
    let nf = match &args.nf {
        Some(path) => Some(load_normal_forms(path)?),
        None => None,
    };
    let stats = graph.stats(nf.as_ref());
    write_out(&args.out, |w| Ok(write_stats(&stats, w)?))
}

fn normalize(args: NormalizeArgs) -> Result<()> {
    let trace = load_trace(&args.trace)?;
    let nf = load_normal_forms(&args.nf)?;
    if args.prune {
        let names = load_names_opt(&args.names)?;
        let (pruned, remap) = prune_variants(&trace, &nf, &names);
        if let Some(path) = &args.names_out {
            let file = File::create(path).with_context(|| path.display().to_string())?;
            let mut writer = BufWriter::new(file);
            write_names(&remap_names(&names, &remap), &mut writer)?;
            writer.flush().with_context(|| path.display().to_string())?;
        }
        write_out(&args.out, |w| Ok(write_trace(&pruned, w)?))
    } else {
        let merged = merge_alpha_variants(&trace, &nf);
        write_out(&args.out, |w| Ok(write_trace(&merged, w)?))
    }
}

fn rank(args: RankArgs) -> Result<()> {
    let (graph, names) = load_graph(&args.input)?;
    let scores = compute_metric(&graph, args.metric.metric()?, &args.metric.params())?;
    let top = args.top.unwrap_or(graph.len());
    write_out(&args.out, |w| Ok(export_ranking(&scores, &names, top, w)?))
}

fn select(args: SelectArgs) -> Result<()> {
    let (graph, names) = load_graph(&args.input)?;
    let named0: BTreeSet<LemmaId> = if args.from_scratch {
        BTreeSet::new()
    } else {
        names.keys().copied().collect()
    };
    let emit_every = args.checkpoint_every.unwrap_or(args.count).max(1);
    let schedule = select_schedule(
        &graph,
        args.metric.metric()?,
        &args.metric.params(),
        &named0,
        args.count,
        emit_every,
    )?;

    let mut last = None;
    for snapshot in schedule {
        eprintln!("selected {} of {} lemmas", snapshot.chosen.len(), args.count);
        last = Some(snapshot);
    }
    let result = last.expect("schedule emits at least one snapshot");

    let mut updated = names.clone();
    for (ordinal, &(id, _)) in result.chosen.iter().enumerate() {
        updated.insert(id, format!("LEMMA_{:05}", ordinal + 1));
    }
    if let Some(path) = &args.names_out {
        let file = File::create(path).with_context(|| path.display().to_string())?;
        let mut writer = BufWriter::new(file);
        write_names(&updated, &mut writer)?;
        writer.flush().with_context(|| path.display().to_string())?;
    }
    write_out(&args.out, |w| {
        Ok(write_ranked_pairs(&result.chosen, &updated, w)?)
    })
}

fn derive(args: DeriveArgs) -> Result<()> {
    let (graph, names) = load_graph(&args.input)?;
    let members: BTreeSet<LemmaId> = names.keys().copied().collect();
    let dg = derive_new_graph(&graph, &members)?;
    write_out(&args.out, |w| Ok(write_edge_list(&dg, w)?))
}

fn problems(args: ProblemsArgs) -> Result<()> {
    let (graph, names) = load_graph(&args.input)?;
    let orig: BTreeSet<LemmaId> = names.keys().copied().collect();
    let mut members = orig.clone();
    if let Some(path) = &args.lemmas {
        members.extend(load_names(path)?.keys().copied());
    }
    let dg = derive_new_graph(&graph, &members)?;
    let mode = match args.mode {
        Mode::Cheating => ProblemMode::Cheating,
        Mode::AlmostHonest => ProblemMode::AlmostHonest,
    };
    let set = emit_problems(&graph, &dg, &orig, mode)?;
    write_out(&args.out, |w| Ok(write_problems(&set, w)?))
}

fn honest_run(args: HonestRunArgs) -> Result<()> {
    let (graph, _) = load_graph(&args.input)?;
    let metric = args.metric.metric()?;
    let params = args.metric.params();
    write_out(&args.out, |w| {
        for (theorem, result) in fully_honest_schedule(&graph, metric, &params, args.step,
                                                       args.count)? {
            for (ordinal, &(id, score)) in result.chosen.iter().enumerate() {
                writeln!(w, "{theorem}\t{}\t{id}\t{}", ordinal + 1, fmt_sig(score))?;
            }
        }
        Ok(())
    })
}

fn chrono_export(args: ChronoArgs) -> Result<()> {
    let (graph, names) = load_graph(&args.input)?;
    let mut members: BTreeSet<LemmaId> = names.keys().copied().collect();
    if let Some(path) = &args.lemmas {
        members.extend(load_names(path)?.keys().copied());
    }
    let dg = derive_new_graph(&graph, &members)?;
    write_out(&args.out, |w| Ok(write_chrono(&dg, w)?))
}
