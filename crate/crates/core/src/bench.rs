//! Exhaustive benchmark over all 9! two-trit reversible functions.
//!
//! Every function (ranked lexicographically by image table) is synthesized
//! with each selected method, verified by simulation, and recorded with its
//! raw, adjusted, and optimized costs. The aggregate statistics compare the
//! methods pairwise:
//!
//! - A: fraction where MMD+ costs no more than the natural-cycle strategy
//! - B: fraction where MMD+ costs strictly less than natural cycles
//! - C: fraction where natural cycles cost strictly less than 3-cycles
//! - D: fraction where transpositions cost strictly less than MMD+
//!
//! Runs are deterministic: every function derives its tie-break seed as
//! `base_seed XOR rank`, so sharding and parallel execution cannot change
//! results. Shards checkpoint their progress and can resume.

use std::fs;
use std::ops::Range;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circuit::Circuit;
use crate::cost::{adjusted_cost, raw_cost, CostMode, CostModel};
use crate::cycles::{synth_cycles, Strategy};
use crate::error::{Error, Result};
use crate::mmd::{mmd_plus, Direction, SynthOptions, TieBreak, DEFAULT_MAX_GATES, DEFAULT_SEED};
use crate::peephole::optimize;
use crate::perm::Perm;

/// 9!: the number of two-trit reversible functions.
pub const FUNCTION_COUNT: u64 = 362_880;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Mmd,
    Natural,
    ThreeCycles,
    Transpositions,
}

impl Method {
    pub const ALL: [Method; 4] =
        [Method::Mmd, Method::Natural, Method::ThreeCycles, Method::Transpositions];

    pub fn name(self) -> &'static str {
        match self {
            Method::Mmd => "mmd",
            Method::Natural => "natural",
            Method::ThreeCycles => "3cyc",
            Method::Transpositions => "transp",
        }
    }

    pub fn parse(s: &str) -> Result<Method> {
        match s {
            "mmd" => Ok(Method::Mmd),
            "natural" => Ok(Method::Natural),
            "3cyc" => Ok(Method::ThreeCycles),
            "transp" => Ok(Method::Transpositions),
            other => Err(Error::InvalidCircuit(format!("unknown method `{other}`"))),
        }
    }

    pub fn synthesize(self, f: &Perm, opts: &SynthOptions, pivot_search: bool) -> Result<Circuit> {
        match self {
            Method::Mmd => mmd_plus(f, opts),
            Method::Natural => synth_cycles(f, Strategy::natural(), opts),
            Method::ThreeCycles => synth_cycles(f, Strategy::three_cycles(), opts),
            Method::Transpositions => {
                synth_cycles(f, Strategy::transpositions(pivot_search), opts)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchConfig {
    pub methods: Vec<Method>,
    pub cost_mode: CostMode,
    pub base_seed: u64,
    pub direction: Direction,
    pub pivot_search: bool,
    pub max_gates: usize,
}

impl Default for BenchConfig {
    fn default() -> BenchConfig {
        BenchConfig {
            methods: Method::ALL.to_vec(),
            cost_mode: CostMode::Raw,
            base_seed: DEFAULT_SEED,
            direction: Direction::Bidirectional,
            pivot_search: false,
            max_gates: DEFAULT_MAX_GATES,
        }
    }
}

impl BenchConfig {
    fn options_for(&self, rank: u64) -> SynthOptions {
        SynthOptions {
            direction: self.direction,
            tie_break: TieBreak::Seeded(self.base_seed ^ rank),
            cost_model: CostModel::default(),
            max_gates: self.max_gates,
        }
    }
}

/// Per-method costs for one benchmark function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MethodResult {
    pub raw: u32,
    pub adjusted: u32,
    pub optimized: u32,
    pub gates: u32,
}

impl MethodResult {
    fn cost(&self, mode: CostMode) -> u32 {
        match mode {
            CostMode::Raw => self.raw,
            CostMode::Adjusted => self.adjusted,
            CostMode::Optimized => self.optimized,
        }
    }
}

/// One benchmark row: results aligned with the configured method list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub rank: u64,
    pub results: Vec<MethodResult>,
    pub verified: bool,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatCounts {
    pub total: u64,
    pub mmd_le_natural: u64,
    pub mmd_lt_natural: u64,
    pub natural_lt_three_cycles: u64,
    pub transpositions_lt_mmd: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatFractions {
    pub mmd_le_natural: Option<f64>,
    pub mmd_lt_natural: Option<f64>,
    pub natural_lt_three_cycles: Option<f64>,
    pub transpositions_lt_mmd: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchMetadata {
    pub seed: u64,
    pub cost_mode: CostMode,
    pub methods: Vec<Method>,
    pub direction: Direction,
    pub pivot_search: bool,
    pub version: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchStats {
    pub metadata: BenchMetadata,
    pub counts: StatCounts,
    pub fractions: StatFractions,
}

struct MethodIndices {
    mmd: Option<usize>,
    natural: Option<usize>,
    three_cycles: Option<usize>,
    transpositions: Option<usize>,
}

impl MethodIndices {
    fn of(methods: &[Method]) -> MethodIndices {
        let find = |m: Method| methods.iter().position(|&x| x == m);
        MethodIndices {
            mmd: find(Method::Mmd),
            natural: find(Method::Natural),
            three_cycles: find(Method::ThreeCycles),
            transpositions: find(Method::Transpositions),
        }
    }
}

fn accumulate(counts: &mut StatCounts, idx: &MethodIndices, mode: CostMode, record: &BenchRecord) {
    counts.total += 1;
    let cost = |i: usize| record.results[i].cost(mode);
    if let (Some(m), Some(n)) = (idx.mmd, idx.natural) {
        if cost(m) <= cost(n) {
            counts.mmd_le_natural += 1;
        }
        if cost(m) < cost(n) {
            counts.mmd_lt_natural += 1;
        }
    }
    if let (Some(n), Some(t3)) = (idx.natural, idx.three_cycles) {
        if cost(n) < cost(t3) {
            counts.natural_lt_three_cycles += 1;
        }
    }
    if let (Some(t), Some(m)) = (idx.transpositions, idx.mmd) {
        if cost(t) < cost(m) {
            counts.transpositions_lt_mmd += 1;
        }
    }
}

pub fn compute_stats(config: &BenchConfig, records: &[BenchRecord]) -> BenchStats {
    let idx = MethodIndices::of(&config.methods);
    let mut counts = StatCounts::default();
    for record in records {
        accumulate(&mut counts, &idx, config.cost_mode, record);
    }
    stats_from_counts(config, counts)
}

fn stats_from_counts(config: &BenchConfig, counts: StatCounts) -> BenchStats {
    let idx = MethodIndices::of(&config.methods);
    let frac = |present: bool, n: u64| {
        (present && counts.total > 0).then(|| n as f64 / counts.total as f64)
    };
    let fractions = StatFractions {
        mmd_le_natural: frac(idx.mmd.is_some() && idx.natural.is_some(), counts.mmd_le_natural),
        mmd_lt_natural: frac(idx.mmd.is_some() && idx.natural.is_some(), counts.mmd_lt_natural),
        natural_lt_three_cycles: frac(
            idx.natural.is_some() && idx.three_cycles.is_some(),
            counts.natural_lt_three_cycles,
        ),
        transpositions_lt_mmd: frac(
            idx.transpositions.is_some() && idx.mmd.is_some(),
            counts.transpositions_lt_mmd,
        ),
    };
    BenchStats {
        metadata: BenchMetadata {
            seed: config.base_seed,
            cost_mode: config.cost_mode,
            methods: config.methods.clone(),
            direction: config.direction,
            pivot_search: config.pivot_search,
            version: env!("CARGO_PKG_VERSION").to_string(),
        },
        counts,
        fractions,
    }
}

/// All 9! two-trit reversible functions in lexicographic order.
pub fn all_functions() -> impl Iterator<Item = Perm> {
    (0..FUNCTION_COUNT).map(|rank| Perm::from_rank(rank, 9).expect("rank in range"))
}

fn run_one(config: &BenchConfig, rank: u64) -> Result<BenchRecord> {
    let f = Perm::from_rank(rank, 9)?;
    let opts = config.options_for(rank);
    let model = CostModel::default();
    let mut results = Vec::with_capacity(config.methods.len());
    for &method in &config.methods {
        let circuit = method.synthesize(&f, &opts, config.pivot_search)?;
        if circuit.simulate() != f {
            return Err(Error::Verification { rank, method: method.name().into() });
        }
        let optimized = optimize(&circuit);
        results.push(MethodResult {
            raw: raw_cost(&circuit, &model),
            adjusted: adjusted_cost(&circuit, &model),
            optimized: raw_cost(&optimized, &model),
            gates: circuit.len() as u32,
        });
    }
    Ok(BenchRecord { rank, results, verified: true })
}

/// Synthesize and verify every rank in the range, sequentially.
pub fn run_range(config: &BenchConfig, ranks: Range<u64>) -> Result<Vec<BenchRecord>> {
    ranks.map(|rank| run_one(config, rank)).collect()
}

/// Contiguous shard ranges covering `0..total`.
pub fn shard_bounds(total: u64, shards: usize) -> Vec<Range<u64>> {
    let shards = shards.max(1) as u64;
    let chunk = total.div_ceil(shards);
    (0..shards)
        .map(|i| (i * chunk).min(total)..((i + 1) * chunk).min(total))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRun {
    pub config: BenchConfig,
    pub records: Vec<BenchRecord>,
    pub stats: BenchStats,
}

/// Run the whole benchmark, fanning shards out to worker threads. The record
/// order and all results are independent of the shard count.
pub fn run_full(config: &BenchConfig, shards: usize) -> Result<BenchRun> {
    let bounds = shard_bounds(FUNCTION_COUNT, shards);
    let chunks: Vec<Result<Vec<BenchRecord>>> =
        bounds.into_par_iter().map(|range| run_range(config, range)).collect();
    let mut records = Vec::with_capacity(FUNCTION_COUNT as usize);
    for chunk in chunks {
        records.extend(chunk?);
    }
    let stats = compute_stats(config, &records);
    Ok(BenchRun { config: config.clone(), records, stats })
}

/// Nine-digit image string of the ranked permutation, e.g. `437581260`.
fn perm_digits(rank: u64) -> String {
    let p = Perm::from_rank(rank, 9).expect("rank in range");
    p.outputs().map(|v| char::from(b'0' + v as u8)).collect()
}

pub fn records_to_csv(config: &BenchConfig, records: &[BenchRecord]) -> String {
    let mut out = String::with_capacity(records.len() * 64 + 128);
    out.push_str("rank,perm");
    for m in &config.methods {
        let name = m.name();
        out.push_str(&format!(",{name}_raw,{name}_adj,{name}_opt,{name}_gates"));
    }
    out.push_str(",verified\n");
    for r in records {
        out.push_str(&r.rank.to_string());
        out.push(',');
        out.push_str(&perm_digits(r.rank));
        for m in &r.results {
            out.push_str(&format!(",{},{},{},{}", m.raw, m.adjusted, m.optimized, m.gates));
        }
        out.push_str(if r.verified { ",true\n" } else { ",false\n" });
    }
    out
}

/// Parse a records CSV back into the method list and the records.
pub fn records_from_csv(text: &str) -> Result<(Vec<Method>, Vec<BenchRecord>)> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::Parse { line: 1, msg: "empty CSV".into() })?;
    let cols: Vec<&str> = header.split(',').collect();
    if cols.first() != Some(&"rank") || cols.get(1) != Some(&"perm") || cols.last() != Some(&"verified")
    {
        return Err(Error::Parse { line: 1, msg: "unexpected CSV header".into() });
    }
    let mut methods = Vec::new();
    let mut i = 2;
    while i + 4 <= cols.len() && cols[i].ends_with("_raw") {
        let name = cols[i].trim_end_matches("_raw");
        methods.push(Method::parse(name).map_err(|e| Error::Parse { line: 1, msg: e.to_string() })?);
        i += 4;
    }
    if i != cols.len() - 1 {
        return Err(Error::Parse { line: 1, msg: "malformed method columns".into() });
    }
    let mut records = Vec::new();
    for (lineno, line) in lines {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != cols.len() {
            return Err(Error::Parse { line: lineno + 1, msg: "wrong field count".into() });
        }
        let parse_u = |s: &str| -> Result<u64> {
            s.parse().map_err(|_| Error::Parse { line: lineno + 1, msg: format!("bad number `{s}`") })
        };
        let rank = parse_u(fields[0])?;
        let mut results = Vec::with_capacity(methods.len());
        for k in 0..methods.len() {
            let base = 2 + k * 4;
            results.push(MethodResult {
                raw: parse_u(fields[base])? as u32,
                adjusted: parse_u(fields[base + 1])? as u32,
                optimized: parse_u(fields[base + 2])? as u32,
                gates: parse_u(fields[base + 3])? as u32,
            });
        }
        let verified = fields[cols.len() - 1] == "true";
        records.push(BenchRecord { rank, results, verified });
    }
    Ok((methods, records))
}

pub fn stats_to_json(stats: &BenchStats) -> String {
    serde_json::to_string_pretty(stats).expect("stats serialize")
}

pub fn stats_from_json(text: &str) -> Result<BenchStats> {
    serde_json::from_str(text).map_err(|e| Error::Checkpoint(e.to_string()))
}

/// Full-run JSON export mirroring the CSV records plus the stats block.
pub fn run_to_json(run: &BenchRun) -> String {
    #[derive(Serialize)]
    struct Export<'a> {
        stats: &'a BenchStats,
        records: &'a [BenchRecord],
    }
    serde_json::to_string_pretty(&Export { stats: &run.stats, records: &run.records })
        .expect("run serialize")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    /// The records table; statistics are recomputable from it.
    Csv,
    /// Records plus the stats block with its metadata.
    Json,
}

/// Write a completed run to a file.
pub fn export(run: &BenchRun, format: ExportFormat, path: &Path) -> Result<()> {
    let text = match format {
        ExportFormat::Csv => records_to_csv(&run.config, &run.records),
        ExportFormat::Json => run_to_json(run),
    };
    fs::write(path, text)?;
    Ok(())
}

// ---------------------------------------------------------------------------
// sharded execution with checkpoint/resume
// ---------------------------------------------------------------------------

/// Which slice of the rank space a shard covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShardPlan {
    pub total: u64,
    pub shards: usize,
    pub shard: usize,
}

impl ShardPlan {
    pub fn range(&self) -> Result<Range<u64>> {
        if self.shard >= self.shards {
            return Err(Error::Checkpoint(format!(
                "shard {} out of range for {} shards",
                self.shard, self.shards
            )));
        }
        Ok(shard_bounds(self.total, self.shards)[self.shard].clone())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub config: BenchConfig,
    pub plan: ShardPlan,
    /// First rank not yet recorded.
    pub next_rank: u64,
    pub complete: bool,
    pub partial: StatCounts,
}

pub fn shard_records_path(dir: &Path, shard: usize) -> PathBuf {
    dir.join(format!("records_shard_{shard}.csv"))
}

pub fn shard_checkpoint_path(dir: &Path, shard: usize) -> PathBuf {
    dir.join(format!("checkpoint_shard_{shard}.json"))
}

pub fn load_checkpoint(path: &Path) -> Result<Checkpoint> {
    let text = fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Checkpoint(format!("{}: {e}", path.display())))
}

pub fn save_checkpoint(path: &Path, checkpoint: &Checkpoint) -> Result<()> {
    let tmp = path.with_extension("json.tmp");
    fs::write(&tmp, serde_json::to_string_pretty(checkpoint).expect("checkpoint serialize"))?;
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Run (or resume) one shard, appending records to its CSV and checkpointing
/// every `interval` ranks.
pub fn run_shard_to_dir(
    config: &BenchConfig,
    plan: ShardPlan,
    dir: &Path,
    interval: u64,
) -> Result<Checkpoint> {
    let range = plan.range()?;
    fs::create_dir_all(dir)?;
    let records_path = shard_records_path(dir, plan.shard);
    let checkpoint_path = shard_checkpoint_path(dir, plan.shard);
    let interval = interval.max(1);
    let idx = MethodIndices::of(&config.methods);

    let mut checkpoint = if checkpoint_path.exists() {
        let found = load_checkpoint(&checkpoint_path)?;
        if found.config != *config || found.plan != plan {
            return Err(Error::Checkpoint(format!(
                "{} was written by a different run configuration",
                checkpoint_path.display()
            )));
        }
        found
    } else {
        Checkpoint {
            config: config.clone(),
            plan,
            next_rank: range.start,
            complete: false,
            partial: StatCounts::default(),
        }
    };
    if checkpoint.complete {
        return Ok(checkpoint);
    }

    // Keep only rows below the checkpointed rank; anything later was not yet
    // committed.
    let mut csv = if records_path.exists() {
        let text = fs::read_to_string(&records_path)?;
        let mut kept = String::new();
        for (i, line) in text.lines().enumerate() {
            if i == 0 {
                kept.push_str(line);
                kept.push('\n');
                continue;
            }
            if let Some((rank, _)) = line.split_once(',') {
                if rank.parse::<u64>().is_ok_and(|r| r < checkpoint.next_rank) {
                    kept.push_str(line);
                    kept.push('\n');
                }
            }
        }
        kept
    } else {
        records_to_csv(config, &[])
    };

    let mut next = checkpoint.next_rank;
    while next < range.end {
        let stop = (next + interval).min(range.end);
        let block = run_range(config, next..stop)?;
        for record in &block {
            accumulate(&mut checkpoint.partial, &idx, config.cost_mode, record);
        }
        let block_csv = records_to_csv(config, &block);
        csv.push_str(block_csv.split_once('\n').map(|(_, rows)| rows).unwrap_or(""));
        fs::write(&records_path, &csv)?;
        next = stop;
        checkpoint.next_rank = next;
        checkpoint.complete = next == range.end;
        save_checkpoint(&checkpoint_path, &checkpoint)?;
    }
    Ok(checkpoint)
}

/// Merge completed shard outputs into one run.
pub fn merge_shards(config: &BenchConfig, total: u64, shards: usize, dir: &Path) -> Result<BenchRun> {
    let mut records = Vec::new();
    for shard in 0..shards {
        let path = shard_records_path(dir, shard);
        let text = fs::read_to_string(&path)?;
        let (methods, mut shard_records) = records_from_csv(&text)?;
        if methods != config.methods {
            return Err(Error::Checkpoint(format!(
                "{} records different methods than the merge configuration",
                path.display()
            )));
        }
        let expect = shard_bounds(total, shards)[shard].clone();
        if shard_records.len() as u64 != expect.end - expect.start {
            return Err(Error::Checkpoint(format!(
                "{} is incomplete ({} of {} records)",
                path.display(),
                shard_records.len(),
                expect.end - expect.start
            )));
        }
        records.append(&mut shard_records);
    }
    let stats = compute_stats(config, &records);
    Ok(BenchRun { config: config.clone(), records, stats })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_config() -> BenchConfig {
        BenchConfig::default()
    }

    #[test]
    fn all_functions_starts_at_identity() {
        let mut it = all_functions();
        assert_eq!(it.next().unwrap(), Perm::identity(9));
        assert_eq!(it.next().unwrap(), Perm::from_outputs(vec![0, 1, 2, 3, 4, 5, 6, 8, 7]).unwrap());
    }

    #[test]
    fn all_functions_count() {
        // counting the stream exercises every rank decode
        assert_eq!(all_functions().count() as u64, FUNCTION_COUNT);
    }

    #[test]
    fn run_range_verifies_and_ties_on_identity() {
        let config = tiny_config();
        let records = run_range(&config, 0..64).unwrap();
        assert_eq!(records.len(), 64);
        assert!(records.iter().all(|r| r.verified));
        // rank 0 is the identity: every method yields the empty circuit
        let id = &records[0];
        for m in &id.results {
            assert_eq!((m.raw, m.adjusted, m.optimized, m.gates), (0, 0, 0, 0));
        }
        let stats = compute_stats(&config, &records);
        assert_eq!(stats.counts.total, 64);
        assert!(stats.counts.mmd_le_natural >= stats.counts.mmd_lt_natural);
    }

    #[test]
    fn shard_bounds_cover_everything() {
        let bounds = shard_bounds(100, 7);
        assert_eq!(bounds.len(), 7);
        assert_eq!(bounds[0].start, 0);
        assert_eq!(bounds.last().unwrap().end, 100);
        let total: u64 = bounds.iter().map(|r| r.end - r.start).sum();
        assert_eq!(total, 100);
    }

    #[test]
    fn shard_union_equals_unsharded_run() {
        let config = tiny_config();
        let whole = run_range(&config, 0..90).unwrap();
        let mut pieces = Vec::new();
        for range in shard_bounds(90, 4) {
            pieces.extend(run_range(&config, range).unwrap());
        }
        assert_eq!(whole, pieces);
    }

    #[test]
    fn csv_round_trip_preserves_stats() {
        let config = tiny_config();
        let records = run_range(&config, 100..180).unwrap();
        let csv = records_to_csv(&config, &records);
        let (methods, back) = records_from_csv(&csv).unwrap();
        assert_eq!(methods, config.methods);
        assert_eq!(back, records);
        assert_eq!(compute_stats(&config, &back), compute_stats(&config, &records));
    }

    #[test]
    fn csv_is_deterministic() {
        let config = tiny_config();
        let a = records_to_csv(&config, &run_range(&config, 0..40).unwrap());
        let b = records_to_csv(&config, &run_range(&config, 0..40).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn checkpoint_round_trip_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("checkpoint_shard_0.json");
        let checkpoint = Checkpoint {
            config: tiny_config(),
            plan: ShardPlan { total: 100, shards: 2, shard: 0 },
            next_rank: 42,
            complete: false,
            partial: StatCounts { total: 42, ..StatCounts::default() },
        };
        save_checkpoint(&path, &checkpoint).unwrap();
        assert_eq!(load_checkpoint(&path).unwrap(), checkpoint);
        std::fs::write(&path, "not json").unwrap();
        assert!(matches!(load_checkpoint(&path), Err(Error::Checkpoint(_))));
    }

    #[test]
    fn sharded_files_merge_to_full_run() {
        let dir = tempfile::tempdir().unwrap();
        let config = tiny_config();
        let total = 72;
        for shard in 0..3 {
            let plan = ShardPlan { total, shards: 3, shard };
            let ck = run_shard_to_dir(&config, plan, dir.path(), 10).unwrap();
            assert!(ck.complete);
            assert_eq!(ck.next_rank, plan.range().unwrap().end);
        }
        let merged = merge_shards(&config, total, 3, dir.path()).unwrap();
        let expect = run_range(&config, 0..total).unwrap();
        assert_eq!(merged.records, expect);
        assert_eq!(merged.stats, compute_stats(&config, &expect));

        // rerunning a completed shard is a no-op
        let again =
            run_shard_to_dir(&config, ShardPlan { total, shards: 3, shard: 0 }, dir.path(), 10)
                .unwrap();
        assert!(again.complete);
    }

    #[test]
    fn shard_resume_continues_from_checkpoint() {
        let dir = tempfile::tempdir().unwrap();
        let config = tiny_config();
        let plan = ShardPlan { total: 40, shards: 1, shard: 0 };

        // craft a half-finished shard: 25 committed ranks plus an unsaved tail
        // row that must be discarded on resume
        let committed = run_range(&config, 0..25).unwrap();
        let mut csv = records_to_csv(&config, &committed);
        csv.push_str("39,999999999,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,true\n");
        fs::write(shard_records_path(dir.path(), 0), csv).unwrap();
        let idx = MethodIndices::of(&config.methods);
        let mut partial = StatCounts::default();
        for r in &committed {
            accumulate(&mut partial, &idx, config.cost_mode, r);
        }
        save_checkpoint(
            &shard_checkpoint_path(dir.path(), 0),
            &Checkpoint { config: config.clone(), plan, next_rank: 25, complete: false, partial },
        )
        .unwrap();

        let ck = run_shard_to_dir(&config, plan, dir.path(), 8).unwrap();
        assert!(ck.complete);
        let text = fs::read_to_string(shard_records_path(dir.path(), 0)).unwrap();
        let (_, records) = records_from_csv(&text).unwrap();
        assert_eq!(records, run_range(&config, 0..40).unwrap());
        assert_eq!(ck.partial, compute_stats(&config, &records).counts);
    }

    #[test]
    fn mismatched_checkpoint_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let config = tiny_config();
        let plan = ShardPlan { total: 20, shards: 1, shard: 0 };
        run_shard_to_dir(&config, plan, dir.path(), 50).unwrap();
        let other = BenchConfig { base_seed: 999, ..tiny_config() };
        assert!(matches!(
            run_shard_to_dir(&other, plan, dir.path(), 50),
            Err(Error::Checkpoint(_))
        ));
    }

    #[test]
    fn export_writes_both_formats() {
        let dir = tempfile::tempdir().unwrap();
        let config = tiny_config();
        let records = run_range(&config, 0..12).unwrap();
        let stats = compute_stats(&config, &records);
        let run = BenchRun { config: config.clone(), records, stats };

        let csv_path = dir.path().join("records.csv");
        export(&run, ExportFormat::Csv, &csv_path).unwrap();
        let (_, back) = records_from_csv(&fs::read_to_string(&csv_path).unwrap()).unwrap();
        assert_eq!(back, run.records);

        let json_path = dir.path().join("run.json");
        export(&run, ExportFormat::Json, &json_path).unwrap();
        let text = fs::read_to_string(&json_path).unwrap();
        assert!(text.contains("\"stats\"") && text.contains("\"records\""));
        assert!(text.contains("\"seed\""));
    }

    #[test]
    fn stats_json_round_trip() {
        let config = tiny_config();
        let records = run_range(&config, 0..32).unwrap();
        let stats = compute_stats(&config, &records);
        let json = stats_to_json(&stats);
        assert_eq!(stats_from_json(&json).unwrap(), stats);
        assert!(json.contains("mmd_le_natural"));
    }
}
