//! `taxmine`: materialize itemset taxonomies, mine them against simulated
//! or human oracles, and benchmark miners against their query bounds.
//!
//! Exit status is 0 on success, 1 when a mined result fails verification
//! and 2 on usage errors (bad flags, unreadable or invalid input files).

use std::fmt;
use std::io::{self, BufRead, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use taxmine_core::harness::experiment::OutputFormat;
use taxmine_core::harness::fixtures;
use taxmine_core::harness::generators::{gen_chain, gen_flat, gen_random_dag};
use taxmine_core::harness::io::{
    itemset_poset_doc, read_json, read_taxonomy, solution_poset_doc, write_json, BoundDoc, DatabaseDoc, ResultDoc,
    TaxonomyDoc,
};
use taxmine_core::harness::{
    antichain_cap_from_env, bound_for, ground_truth, run_experiment, write_records, BoundInputs, ExperimentConfig,
};
use taxmine_core::itemset::{solution_count, solution_taxonomy};
use taxmine_core::miners::{MinerOptions, Strategy};
use taxmine_core::oracle::{DatabaseOracle, InteractiveOracle, PredicateOracle};
use taxmine_core::par::Execution;
use taxmine_core::{
    Antichain, FrequencyOracle, InstrumentedOracle, ItemsetTaxonomy, KItemsetTaxonomy, Miner, MiningError,
    MiningResult, Poset, Taxonomy, DEFAULT_NODE_CAP,
};

#[derive(Parser)]
#[command(
    name = "taxmine",
    version,
    about = "Taxonomy-guided frequent itemset mining with a crowd oracle"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated taxonomy file.
    Generate(GenerateArgs),
    /// Materialize the itemset taxonomy, a k-itemset taxonomy or the
    /// solution taxonomy, with statistics.
    Materialize(MaterializeArgs),
    /// Mine one taxonomy against one oracle and print the result as JSON.
    Mine(MineArgs),
    /// Run an experiment config and write one record per run.
    Bench(BenchArgs),
    /// Mine by asking yes/no questions on the terminal.
    Interactive(InteractiveArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum GeneratorKind {
    Chain,
    Flat,
    RandomDag,
    RunningExample,
}

#[derive(clap::Args)]
struct GenerateArgs {
    #[arg(value_enum)]
    kind: GeneratorKind,
    /// Number of items.
    #[arg(short, default_value_t = 4)]
    n: usize,
    #[arg(long, default_value_t = 0.3)]
    edge_prob: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; standard output when omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(clap::Args)]
struct MaterializeArgs {
    #[arg(short, long)]
    taxonomy: PathBuf,
    /// Restrict to itemsets of at most K items.
    #[arg(short, long, conflicts_with = "solutions")]
    k: Option<usize>,
    /// Materialize the solution taxonomy instead.
    #[arg(long)]
    solutions: bool,
    #[arg(long, default_value_t = DEFAULT_NODE_CAP)]
    node_cap: usize,
    /// Write the full document here and print only the statistics.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(clap::Args)]
struct OracleArgs {
    /// Ground-truth maximal frequent itemsets as JSON, e.g. "[[3],[4]]".
    #[arg(long, conflicts_with = "database", required_unless_present = "database")]
    mfis: Option<String>,
    /// Transaction file; answers come from its support at its threshold.
    #[arg(long)]
    database: Option<PathBuf>,
}

#[derive(clap::Args)]
struct MineArgs {
    #[arg(short, long)]
    taxonomy: PathBuf,
    #[command(flatten)]
    oracle: OracleArgs,
    /// alg1[-any|-minimal|-maximal|-dual], exhaustive, halving,
    /// chain-partition or greedy.
    #[arg(short, long, default_value = "alg1")]
    miner: Miner,
    #[arg(short, long)]
    k: Option<usize>,
    /// Query budget for the greedy miner.
    #[arg(long)]
    budget: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_NODE_CAP)]
    node_cap: usize,
    #[arg(long)]
    sequential: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(clap::Args)]
struct BenchArgs {
    #[arg(short, long)]
    config: PathBuf,
    /// Overrides the output path of the config.
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    sequential: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(clap::Args)]
struct InteractiveArgs {
    #[arg(short, long)]
    taxonomy: PathBuf,
    #[arg(short, long, default_value = "alg1-minimal")]
    miner: Miner,
    #[arg(short, long)]
    k: Option<usize>,
    /// Where the question transcript is saved.
    #[arg(long, default_value = "transcript.json")]
    transcript: PathBuf,
    #[arg(long, default_value_t = DEFAULT_NODE_CAP)]
    node_cap: usize,
}

/// Bad input from the user: exit status 2.
#[derive(Debug)]
struct Usage(String);

impl fmt::Display for Usage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(e: impl fmt::Display) -> anyhow::Error {
    Usage(e.to_string()).into()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Generate(args) => generate(args),
        Command::Materialize(args) => materialize(args),
        Command::Mine(args) => mine(args),
        Command::Bench(args) => bench(args),
        Command::Interactive(args) => interactive(args),
    };
    match outcome {
        Ok(code) => code,
        Err(e) if closed_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.is::<Usage>() {
                ExitCode::from(2)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}

/// Output cut short by the reader, as in `taxmine mine … | head`.
fn closed_pipe(e: &anyhow::Error) -> bool {
    e.chain().any(|c| {
        c.downcast_ref::<io::Error>().map(io::Error::kind) == Some(io::ErrorKind::BrokenPipe)
            || c.downcast_ref::<serde_json::Error>()
                .and_then(serde_json::Error::io_error_kind)
                == Some(io::ErrorKind::BrokenPipe)
    })
}

fn print_json<T: serde::Serialize>(value: &T) -> Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn emit<T: serde::Serialize>(value: &T, output: Option<&Path>) -> Result<()> {
    match output {
        Some(path) => write_json(path, value)?,
        None => print_json(value)?,
    }
    Ok(())
}

fn load_taxonomy(path: &Path) -> Result<Taxonomy> {
    read_taxonomy(path).map_err(usage)
}

fn generate(args: GenerateArgs) -> Result<ExitCode> {
    if !(0.0..=1.0).contains(&args.edge_prob) {
        return Err(usage(format!("--edge-prob must lie in [0, 1], got {}", args.edge_prob)));
    }
    let t = match args.kind {
        GeneratorKind::Chain => gen_chain(args.n),
        GeneratorKind::Flat => gen_flat(args.n),
        GeneratorKind::RandomDag => gen_random_dag(args.n, args.edge_prob, args.seed),
        GeneratorKind::RunningExample => fixtures::psi1(),
    };
    emit(&TaxonomyDoc::from_taxonomy(&t), args.output.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

fn materialize(args: MaterializeArgs) -> Result<ExitCode> {
    let t = load_taxonomy(&args.taxonomy)?;
    let cap = antichain_cap_from_env();
    let build = |e| usage(format!("{}: {e}", args.taxonomy.display()));
    let (doc, stats) = if args.solutions {
        let it = ItemsetTaxonomy::build(t.order(), args.node_cap).map_err(build)?;
        let s = solution_taxonomy(t.order(), args.node_cap).map_err(build)?;
        let doc = solution_poset_doc(&t, &it, &s);
        let stats = serde_json::to_value(&doc.stats)?;
        (serde_json::to_value(doc)?, stats)
    } else {
        let (kind, poset) = match args.k {
            Some(k) => (
                "k-itemset-taxonomy",
                KItemsetTaxonomy::build(t.order(), k).map_err(build)?.poset().clone(),
            ),
            None => (
                "itemset-taxonomy",
                ItemsetTaxonomy::build(t.order(), args.node_cap)
                    .map_err(build)?
                    .into_poset(),
            ),
        };
        let doc = itemset_poset_doc(kind, &t, &poset, solution_count(poset.order(), cap).ok());
        let stats = serde_json::to_value(&doc.stats)?;
        (serde_json::to_value(doc)?, stats)
    };
    match &args.output {
        Some(path) => {
            write_json(path, &doc)?;
            print_json(&stats)?;
        }
        None => print_json(&doc)?,
    }
    Ok(ExitCode::SUCCESS)
}

/// The poset a miner runs on.
enum Target {
    Full(Box<ItemsetTaxonomy>),
    K(KItemsetTaxonomy),
}

impl Target {
    fn build(t: &Taxonomy, k: Option<usize>, node_cap: usize, miner: Miner) -> Result<Target> {
        match k {
            Some(_) if matches!(miner, Miner::Alg1(_)) => Err(usage(
                "The alg1 miners need the full itemset taxonomy; drop -k or pick another miner",
            )),
            Some(k) => Ok(Target::K(KItemsetTaxonomy::build(t.order(), k).map_err(usage)?)),
            None => Ok(Target::Full(Box::new(
                ItemsetTaxonomy::build(t.order(), node_cap).map_err(usage)?,
            ))),
        }
    }

    fn poset(&self) -> &Poset<Antichain> {
        match self {
            Target::Full(it) => it.poset(),
            Target::K(kt) => kt.poset(),
        }
    }

    fn mine<O: FrequencyOracle>(
        &self,
        miner: Miner,
        oracle: &mut InstrumentedOracle<O>,
        opts: &MinerOptions,
    ) -> Result<MiningResult, MiningError> {
        match self {
            Target::Full(it) => miner.mine(it, oracle, opts),
            Target::K(kt) => miner.mine_k(kt, oracle, opts),
        }
    }
}

enum CliOracle {
    Predicate(PredicateOracle),
    Database(DatabaseOracle),
}

impl FrequencyOracle for CliOracle {
    fn is_frequent(&mut self, itemset: &Antichain) -> Result<bool, taxmine_core::OracleError> {
        match self {
            CliOracle::Predicate(o) => o.is_frequent(itemset),
            CliOracle::Database(o) => o.is_frequent(itemset),
        }
    }
}

fn build_oracle(t: &Taxonomy, args: &OracleArgs, exec: Execution) -> Result<CliOracle> {
    if let Some(text) = &args.mfis {
        let ids: Vec<Vec<u64>> = serde_json::from_str(text).map_err(|e| usage(format!("--mfis {text:?}: {e}")))?;
        let itemsets = ids
            .iter()
            .map(|set| t.itemset(set))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| usage(format!("--mfis {text:?}: {e}")))?;
        for (i, a) in itemsets.iter().enumerate() {
            if let Some(b) = itemsets[i + 1..].iter().find(|b| t.set_leq(a, b) || t.set_leq(b, a)) {
                return Err(usage(format!(
                    "--mfis {text:?}: {:?} and {:?} are comparable, so both cannot be maximal",
                    t.ids_of(a),
                    t.ids_of(b)
                )));
            }
        }
        return Ok(CliOracle::Predicate(PredicateOracle::from_itemsets(
            t.order(),
            itemsets,
        )));
    }
    let path = args.database.as_ref().expect("clap requires one oracle source");
    let doc: DatabaseDoc = read_json(path).map_err(usage)?;
    let db = doc
        .to_database(t)
        .map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let oracle = DatabaseOracle::new(t.order(), &db, doc.theta).map_err(usage)?;
    Ok(CliOracle::Database(oracle.with_execution(exec)))
}

fn execution(sequential: bool) -> Execution {
    if sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    }
}

fn mine(args: MineArgs) -> Result<ExitCode> {
    let t = load_taxonomy(&args.taxonomy)?;
    let target = Target::build(&t, args.k, args.node_cap, args.miner)?;
    let exec = execution(args.sequential);
    let poset = target.poset();

    let (true_mfis, true_miis) = ground_truth(poset, build_oracle(&t, &args.oracle, exec)?)?;
    let mut inputs = BoundInputs::new(
        poset.order(),
        t.len(),
        true_mfis.len(),
        true_miis.len(),
        antichain_cap_from_env(),
    );
    inputs.budget = args.budget;

    let opts = MinerOptions {
        antichain_cap: antichain_cap_from_env(),
        budget: args.budget,
        exec,
    };
    let mut oracle = InstrumentedOracle::new(build_oracle(&t, &args.oracle, exec)?);
    let result = target.mine(args.miner, &mut oracle, &opts)?;

    let bounds: Vec<BoundDoc> = bound_for(args.miner, &inputs)
        .map(|value| BoundDoc {
            name: bound_name(args.miner).to_string(),
            value,
            satisfied: result.crowd_queries as u64 <= value,
        })
        .into_iter()
        .collect();
    let borders_ok =
        !result.completed || (result.mfi_nodes == true_mfis.items() && result.mii_nodes == true_miis.items());
    let verified = borders_ok && bounds.iter().all(|b| b.satisfied);

    emit(&ResultDoc::from_result(&t, &result, bounds), args.output.as_deref())?;
    if !borders_ok {
        eprintln!("verification failed: mined borders differ from the ground truth");
    }
    Ok(if verified { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn bound_name(miner: Miner) -> &'static str {
    match miner {
        Miner::Alg1(Strategy::Any) => "(|I|+1)(|MF|+|MI|)",
        Miner::Alg1(Strategy::Minimal) => "|MI|+(|I|+1)|MF|",
        Miner::Alg1(Strategy::Maximal) => "|MF|+(|I|+1)|MI|",
        Miner::Alg1(Strategy::Dual) => "2 min(minimal, maximal)+1",
        Miner::Exhaustive => "nodes",
        Miner::Halving => "ceil(ln|S| / ln(1/0.83))",
        Miner::ChainPartition => "width * ceil(log2(longest chain + 1))",
        Miner::Greedy => "min(budget, nodes)",
    }
}

fn bench(args: BenchArgs) -> Result<ExitCode> {
    if !args.config.is_file() {
        return Err(usage(format!("config file {} not found", args.config.display())));
    }
    let cfg: ExperimentConfig = read_json(&args.config).map_err(usage)?;
    cfg.validate().map_err(usage)?;
    let base_dir = args.config.parent().map(Path::to_path_buf);
    let records = run_experiment(&cfg, base_dir.as_deref(), execution(args.sequential)).map_err(usage)?;

    let format = match args.format {
        Some(Format::Json) => OutputFormat::Json,
        Some(Format::Csv) => OutputFormat::Csv,
        None => cfg.format,
    };
    let output = args.output.clone().or_else(|| {
        cfg.output.as_ref().map(|p| {
            base_dir
                .as_deref()
                .filter(|_| p.is_relative())
                .map_or(p.clone(), |d| d.join(p))
        })
    });
    match &output {
        Some(path) => write_records(path, format, &records)?,
        None if matches!(format, OutputFormat::Json) => print_json(&records)?,
        None => {
            let mut w = csv::Writer::from_writer(io::stdout().lock());
            for r in &records {
                w.serialize(r)?;
            }
            w.flush()?;
        }
    }

    let failed = records.iter().filter(|r| !r.passed).count();
    eprintln!("{} runs, {failed} failed", records.len());
    for r in records.iter().filter(|r| !r.passed) {
        eprintln!(
            "  FAILED {} / {} / {}: queries {} bound {:?}{}",
            r.taxonomy,
            r.predicate,
            r.miner,
            r.crowd_queries,
            r.bound,
            r.error.as_deref().map(|e| format!(", error: {e}")).unwrap_or_default()
        );
    }
    Ok(if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn interactive(args: InteractiveArgs) -> Result<ExitCode> {
    let t = load_taxonomy(&args.taxonomy)?;
    let target = Target::build(&t, args.k, args.node_cap, args.miner)?;
    let stdin = io::stdin();
    let stdout = io::stdout();
    run_interactive(&t, &target, args.miner, stdin.lock(), stdout.lock(), &args.transcript)
}

fn run_interactive<R: BufRead, W: Write>(
    t: &Taxonomy,
    target: &Target,
    miner: Miner,
    input: R,
    mut output: W,
    transcript_path: &Path,
) -> Result<ExitCode> {
    writeln!(
        output,
        "Answer y or n. {} candidate itemsets over {} items.",
        target.poset().len(),
        t.len()
    )?;
    let mut oracle = InstrumentedOracle::new(InteractiveOracle::new(t, input, &mut output));
    let outcome = target.mine(miner, &mut oracle, &MinerOptions::default());
    let transcript = oracle.into_inner().into_transcript();
    write_json(transcript_path, &transcript).with_context(|| "saving the transcript")?;

    let (result, code) = match outcome {
        Ok(r) => (r, ExitCode::SUCCESS),
        Err(MiningError::Aborted { reason, partial }) => {
            writeln!(output, "Session ended early ({reason}); showing what was established.")?;
            (*partial, ExitCode::FAILURE)
        }
        Err(e) => return Err(e.into()),
    };
    let name = |a: &Antichain| -> String {
        if a.is_empty() {
            "{}".to_string()
        } else {
            let labels: Vec<String> = a.iter().map(|i| t.display_name(i)).collect();
            format!("{{{}}}", labels.join(", "))
        }
    };
    writeln!(output, "Asked {} questions.", result.crowd_queries)?;
    for (title, sets) in [
        ("Frequent combinations", &result.mfis),
        ("Rare combinations", &result.miis),
    ] {
        let list: Vec<String> = sets.iter().map(name).collect();
        writeln!(
            output,
            "{title}: {}",
            if list.is_empty() {
                "none".to_string()
            } else {
                list.join(" ")
            }
        )?;
    }
    writeln!(output, "Transcript saved to {}.", transcript_path.display())?;
    Ok(code)
}
