//! The experiment runner: every (taxonomy, predicate, miner) triple is
//! mined against an instrumented oracle, checked against ground truth and
//! against the query bound of its miner.

use std::path::{Path, PathBuf};
use std::time::Instant;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use super::generators::{gen_chain, gen_flat, gen_random_dag, gen_random_predicate};
use super::io::{read_json, read_taxonomy, DatabaseDoc};
use super::{antichain_cap_from_env, fixtures, HarnessError};
use crate::itemset::{mfis_from_predicate, miis_from_predicate, solution_count, ItemsetTaxonomy, KItemsetTaxonomy};
use crate::miners::{Miner, MinerOptions, MiningResult, Strategy};
use crate::oracle::{
    realize_itemsets, DatabaseOracle, FrequencyOracle, InstrumentedOracle, OracleError, PredicateOracle, Threshold,
};
use crate::par::{map_slice, Execution};
use crate::poset::{Antichain, Order, Poset, Taxonomy};
use crate::DEFAULT_NODE_CAP;

/// Where a taxonomy comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TaxonomySource {
    File { path: PathBuf },
    Chain { n: usize },
    Flat { n: usize },
    RandomDag { n: usize, edge_prob: f64, seed: u64 },
    RunningExample,
}

impl TaxonomySource {
    pub fn label(&self) -> String {
        match self {
            TaxonomySource::File { path } => path.display().to_string(),
            TaxonomySource::Chain { n } => format!("chain({n})"),
            TaxonomySource::Flat { n } => format!("flat({n})"),
            TaxonomySource::RandomDag { n, edge_prob, seed } => format!("dag({n},{edge_prob},{seed})"),
            TaxonomySource::RunningExample => "running-example".to_string(),
        }
    }

    pub fn build(&self, base_dir: Option<&Path>) -> Result<Taxonomy, HarnessError> {
        Ok(match self {
            TaxonomySource::File { path } => read_taxonomy(&resolve(base_dir, path))?,
            TaxonomySource::Chain { n } => gen_chain(*n),
            TaxonomySource::Flat { n } => gen_flat(*n),
            TaxonomySource::RandomDag { n, edge_prob, seed } => gen_random_dag(*n, *edge_prob, *seed),
            TaxonomySource::RunningExample => fixtures::psi1(),
        })
    }
}

/// Where the ground-truth predicate comes from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PredicateSource {
    /// `count` random antichains of the mined poset, seeds `seed..`.
    Random {
        seed: u64,
        #[serde(default = "one")]
        count: usize,
    },
    /// Explicit maximal frequent itemsets as item-id lists.
    Mfis { mfis: Vec<Vec<u64>> },
    /// A transaction file; its Θ is used.
    Database { path: PathBuf },
}

fn one() -> usize {
    1
}

/// How predicate sources are turned into oracles.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OracleKind {
    /// Answer directly from the MFIs.
    #[default]
    Predicate,
    /// Realize a database for the MFIs at Θ and answer from its support.
    Database,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

/// A bench run, read from a JSON document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub taxonomies: Vec<TaxonomySource>,
    pub predicates: Vec<PredicateSource>,
    pub miners: Vec<Miner>,
    /// Mine the k-itemset taxonomy instead of the full one.
    #[serde(default)]
    pub k: Option<usize>,
    #[serde(default)]
    pub oracle: OracleKind,
    #[serde(default = "default_theta")]
    pub theta: Threshold,
    #[serde(default = "default_node_cap")]
    pub node_cap: usize,
    #[serde(default = "antichain_cap_from_env")]
    pub antichain_cap: u64,
    /// Query budget for the greedy miner.
    #[serde(default)]
    pub budget: Option<usize>,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub format: OutputFormat,
}

fn default_theta() -> Threshold {
    Threshold::new(1, 2).expect("valid")
}

fn default_node_cap() -> usize {
    DEFAULT_NODE_CAP
}

impl ExperimentConfig {
    pub fn new(taxonomies: Vec<TaxonomySource>, predicates: Vec<PredicateSource>, miners: Vec<Miner>) -> Self {
        ExperimentConfig {
            taxonomies,
            predicates,
            miners,
            k: None,
            oracle: OracleKind::default(),
            theta: default_theta(),
            node_cap: default_node_cap(),
            antichain_cap: antichain_cap_from_env(),
            budget: None,
            output: None,
            format: OutputFormat::default(),
        }
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |m: &str| Err(HarnessError::ConfigInvalid(m.to_string()));
        if self.miners.is_empty() {
            return bad("at least one miner is required");
        }
        if self.taxonomies.is_empty() {
            return bad("at least one taxonomy is required");
        }
        if self.predicates.is_empty() {
            return bad("at least one predicate source is required");
        }
        if self.node_cap == 0 || self.antichain_cap == 0 {
            return bad("caps must be positive");
        }
        if self.k.is_some() && self.miners.iter().any(|m| matches!(m, Miner::Alg1(_))) {
            return bad("The alg1 miners need the full itemset taxonomy; drop k or the alg1 miners");
        }
        Ok(())
    }
}

fn resolve(base_dir: Option<&Path>, path: &Path) -> PathBuf {
    match base_dir {
        Some(dir) if path.is_relative() => dir.join(path),
        _ => path.to_path_buf(),
    }
}

/// One (taxonomy, predicate, miner) measurement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub taxonomy: String,
    pub predicate: String,
    pub miner: String,
    pub items: usize,
    pub nodes: usize,
    pub width: usize,
    pub longest_chain: usize,
    /// Antichain count of the mined poset, when within the cap.
    pub solutions: Option<u64>,
    pub true_mfis: usize,
    pub true_miis: usize,
    pub crowd_queries: usize,
    pub wall_time_us: u64,
    pub bound_alg1: u64,
    pub bound_minimal: u64,
    pub bound_maximal: u64,
    pub bound_dual: u64,
    pub bound_halving: Option<u64>,
    pub bound_chain: u64,
    /// The bound that applies to this miner.
    pub bound: Option<u64>,
    pub bound_satisfied: bool,
    pub borders_match: bool,
    /// Every true MFI and MII was queried.
    pub witness_ok: bool,
    pub completed: bool,
    pub passed: bool,
    pub error: Option<String>,
}

/// Quantities the query bounds are computed from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundInputs {
    pub items: usize,
    pub mfis: usize,
    pub miis: usize,
    pub nodes: usize,
    pub width: usize,
    pub longest_chain: usize,
    pub solutions: Option<u64>,
    pub budget: Option<usize>,
}

impl BoundInputs {
    pub fn new(poset: &Order, items: usize, mfis: usize, miis: usize, antichain_cap: u64) -> Self {
        let chains = poset.chain_partition();
        BoundInputs {
            items,
            mfis,
            miis,
            nodes: poset.len(),
            width: chains.len(),
            longest_chain: chains.iter().map(Vec::len).max().unwrap_or(0),
            solutions: solution_count(poset, antichain_cap).ok(),
            budget: None,
        }
    }

    pub fn alg1(&self) -> u64 {
        ((self.items + 1) * (self.mfis + self.miis)) as u64
    }

    pub fn minimal(&self) -> u64 {
        (self.miis + (self.items + 1) * self.mfis) as u64
    }

    pub fn maximal(&self) -> u64 {
        (self.mfis + (self.items + 1) * self.miis) as u64
    }

    /// Two interleaved instances, each within its own bound, stop when the
    /// first finishes: at most twice the smaller bound plus one.
    pub fn dual(&self) -> u64 {
        self.minimal().min(self.maximal()) * 2 + 1
    }

    pub fn chain(&self) -> u64 {
        (self.width * ceil_log2(self.longest_chain + 1)) as u64
    }
}

/// `ceil(log2(x))` for `x >= 1`.
fn ceil_log2(x: usize) -> usize {
    (usize::BITS - (x.max(1) - 1).leading_zeros()) as usize
}

/// Queries needed when every answer keeps at least a 0.17 fraction of the
/// remaining solutions on each side: `ceil(ln S / ln(1 / 0.83))`.
pub fn halving_bound(solutions: u64) -> u64 {
    let s = solutions.max(1) as f64;
    (s.ln() / (1.0f64 / 0.83).ln()).ceil() as u64
}

/// The query bound a miner is checked against, if one is known.
pub fn bound_for(miner: Miner, b: &BoundInputs) -> Option<u64> {
    match miner {
        Miner::Alg1(Strategy::Any) => Some(b.alg1()),
        Miner::Alg1(Strategy::Minimal) => Some(b.minimal()),
        Miner::Alg1(Strategy::Maximal) => Some(b.maximal()),
        Miner::Alg1(Strategy::Dual) => Some(b.dual()),
        Miner::Exhaustive => Some(b.nodes as u64),
        Miner::Halving => b.solutions.map(halving_bound),
        Miner::ChainPartition => Some(b.chain()),
        Miner::Greedy => Some(b.budget.map_or(b.nodes, |k| k.min(b.nodes)) as u64),
    }
}

enum Mined {
    Full(Box<ItemsetTaxonomy>),
    K(KItemsetTaxonomy),
}

impl Mined {
    fn poset(&self) -> &Poset<Antichain> {
        match self {
            Mined::Full(it) => it.poset(),
            Mined::K(kt) => kt.poset(),
        }
    }
}

#[derive(Clone)]
enum PreparedOracle {
    Predicate(PredicateOracle),
    Database(DatabaseOracle),
}

impl FrequencyOracle for PreparedOracle {
    fn is_frequent(&mut self, itemset: &Antichain) -> Result<bool, OracleError> {
        match self {
            PreparedOracle::Predicate(o) => o.is_frequent(itemset),
            PreparedOracle::Database(o) => o.is_frequent(itemset),
        }
    }
}

struct Instance {
    taxonomy: String,
    items: usize,
    mined: Mined,
    bounds: BoundInputs,
    predicates: Vec<PreparedPredicate>,
}

struct PreparedPredicate {
    label: String,
    oracle: PreparedOracle,
    mfis: Antichain,
    miis: Antichain,
}

/// Runs every triple of `cfg`, in parallel when `exec` allows. Records come
/// back in config order: taxonomy, then predicate, then miner.
pub fn run_experiment(
    cfg: &ExperimentConfig,
    base_dir: Option<&Path>,
    exec: Execution,
) -> Result<Vec<ExperimentRecord>, HarnessError> {
    cfg.validate()?;
    let instances = cfg
        .taxonomies
        .iter()
        .map(|src| prepare_instance(cfg, src, base_dir))
        .collect::<Result<Vec<_>, _>>()?;

    let jobs: Vec<(usize, usize, Miner)> = instances
        .iter()
        .enumerate()
        .flat_map(|(t, inst)| (0..inst.predicates.len()).flat_map(move |p| cfg.miners.iter().map(move |&m| (t, p, m))))
        .collect();
    let opts = MinerOptions {
        antichain_cap: cfg.antichain_cap,
        budget: cfg.budget,
        exec,
    };
    Ok(map_slice(exec, &jobs, |&(t, p, miner)| {
        run_job(&instances[t], &instances[t].predicates[p], miner, &opts)
    }))
}

fn prepare_instance(
    cfg: &ExperimentConfig,
    src: &TaxonomySource,
    base_dir: Option<&Path>,
) -> Result<Instance, HarnessError> {
    let taxonomy = src.build(base_dir)?;
    let mined = match cfg.k {
        Some(k) => Mined::K(KItemsetTaxonomy::build(taxonomy.order(), k)?),
        None => Mined::Full(Box::new(ItemsetTaxonomy::build(taxonomy.order(), cfg.node_cap)?)),
    };
    let poset = mined.poset();

    let mut predicates = Vec::new();
    for source in &cfg.predicates {
        for (label, oracle) in prepare_oracles(cfg, source, &taxonomy, poset, base_dir)? {
            let (mfis, miis) = ground_truth(poset, oracle.clone())?;
            predicates.push(PreparedPredicate {
                label,
                oracle,
                mfis,
                miis,
            });
        }
    }
    let mut bounds = BoundInputs::new(poset.order(), taxonomy.len(), 0, 0, cfg.antichain_cap);
    bounds.budget = cfg.budget;
    Ok(Instance {
        taxonomy: src.label(),
        items: taxonomy.len(),
        mined,
        bounds,
        predicates,
    })
}

fn prepare_oracles(
    cfg: &ExperimentConfig,
    source: &PredicateSource,
    taxonomy: &Taxonomy,
    poset: &Poset<Antichain>,
    base_dir: Option<&Path>,
) -> Result<Vec<(String, PreparedOracle)>, HarnessError> {
    let from_mfis = |mfis: Vec<Antichain>| -> Result<PreparedOracle, HarnessError> {
        Ok(match cfg.oracle {
            OracleKind::Predicate => PreparedOracle::Predicate(PredicateOracle::from_itemsets(taxonomy.order(), mfis)),
            OracleKind::Database => {
                let r = realize_itemsets(taxonomy.len(), &mfis, cfg.theta);
                PreparedOracle::Database(DatabaseOracle::new(taxonomy.order(), &r.database, cfg.theta)?)
            }
        })
    };
    match source {
        PredicateSource::Random { seed, count } => (0..*count as u64)
            .map(|i| {
                let m = gen_random_predicate(poset.order(), seed + i);
                let mfis = m.iter().map(|v| poset.element(v).clone()).collect();
                Ok((format!("random({})", seed + i), from_mfis(mfis)?))
            })
            .collect(),
        PredicateSource::Mfis { mfis } => {
            let itemsets = mfis
                .iter()
                .map(|ids| taxonomy.itemset(ids))
                .collect::<Result<Vec<_>, _>>()?;
            let label = format!("mfis({mfis:?})").replace(' ', "");
            Ok(vec![(label, from_mfis(itemsets)?)])
        }
        PredicateSource::Database { path } => {
            let path = resolve(base_dir, path);
            let doc: DatabaseDoc = read_json(&path)?;
            let db = doc.to_database(taxonomy)?;
            let oracle = DatabaseOracle::new(taxonomy.order(), &db, doc.theta)?;
            Ok(vec![(path.display().to_string(), PreparedOracle::Database(oracle))])
        }
    }
}

/// Ground truth for `oracle` on `poset`: its answer on every node, reduced
/// to the true MFI and MII nodes. The oracle is used uninstrumented.
pub fn ground_truth<O: FrequencyOracle>(
    poset: &Poset<Antichain>,
    mut oracle: O,
) -> Result<(Antichain, Antichain), HarnessError> {
    let mut truth = FixedBitSet::with_capacity(poset.len());
    for (v, itemset) in poset.elements().iter().enumerate() {
        truth.set(v, oracle.is_frequent(itemset)?);
    }
    let mfis = mfis_from_predicate(poset.order(), &truth)?;
    let miis = miis_from_predicate(poset.order(), &truth)?;
    Ok((mfis, miis))
}

fn run_job(inst: &Instance, pred: &PreparedPredicate, miner: Miner, opts: &MinerOptions) -> ExperimentRecord {
    let mut b = inst.bounds;
    b.mfis = pred.mfis.len();
    b.miis = pred.miis.len();
    let bound = bound_for(miner, &b);

    let mut oracle = InstrumentedOracle::new(pred.oracle.clone());
    let started = Instant::now();
    let outcome = match &inst.mined {
        Mined::Full(it) => miner.mine(it, &mut oracle, opts),
        Mined::K(kt) => miner.mine_k(kt, &mut oracle, opts),
    };
    let wall_time_us = started.elapsed().as_micros() as u64;

    let mut record = ExperimentRecord {
        taxonomy: inst.taxonomy.clone(),
        predicate: pred.label.clone(),
        miner: miner.name().to_string(),
        items: inst.items,
        nodes: b.nodes,
        width: b.width,
        longest_chain: b.longest_chain,
        solutions: b.solutions,
        true_mfis: b.mfis,
        true_miis: b.miis,
        crowd_queries: oracle.query_count(),
        wall_time_us,
        bound_alg1: b.alg1(),
        bound_minimal: b.minimal(),
        bound_maximal: b.maximal(),
        bound_dual: b.dual(),
        bound_halving: b.solutions.map(halving_bound),
        bound_chain: b.chain(),
        bound,
        bound_satisfied: bound.is_none_or(|v| oracle.query_count() as u64 <= v),
        borders_match: false,
        witness_ok: false,
        completed: false,
        passed: false,
        error: None,
    };
    match outcome {
        Ok(result) => {
            record.completed = result.completed;
            if result.completed {
                record.borders_match = result.mfi_nodes == pred.mfis.items() && result.mii_nodes == pred.miis.items();
                record.witness_ok = witnessed(&result, inst.mined.poset(), &pred.mfis, &pred.miis);
            }
            let must_complete = !(miner == Miner::Greedy && opts.budget.is_some());
            record.passed = record.bound_satisfied
                && (!result.completed || (record.borders_match && record.witness_ok))
                && (result.completed || !must_complete);
        }
        Err(e) => record.error = Some(e.to_string()),
    }
    record
}

/// Every true border element appears in the transcript.
fn witnessed(result: &MiningResult, poset: &Poset<Antichain>, mfis: &Antichain, miis: &Antichain) -> bool {
    let asked: std::collections::HashSet<&Antichain> = result.transcript.iter().map(|q| &q.itemset).collect();
    mfis.iter().chain(miis.iter()).all(|v| asked.contains(poset.element(v)))
}

/// Writes records as pretty JSON or as CSV with one row per record.
pub fn write_records(path: &Path, format: OutputFormat, records: &[ExperimentRecord]) -> Result<(), HarnessError> {
    match format {
        OutputFormat::Json => super::io::write_json(path, &records),
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_path(path)?;
            for r in records {
                w.serialize(r)?;
            }
            w.flush().map_err(|source| HarnessError::Io {
                path: path.display().to_string(),
                source,
            })
        }
    }
}
