//! `tsynth`: command-line front end for the ternary reversible synthesis
//! toolkit. Thin adapters around the library: synthesis, verification,
//! peephole optimization, cycle decomposition, the exhaustive benchmark, and
//! 3x3 multiplexed composition.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use tsynth_core::bench::{
    self, merge_shards, run_full, run_shard_to_dir, BenchConfig, Method, ShardPlan,
};
use tsynth_core::cost::{adjusted_cost, raw_cost, CostMode, CostModel};
use tsynth_core::cycles::{
    natural_cycles, synth_cycles, three_cycle_factors, transposition_factors, Strategy,
};
use tsynth_core::mmd::{mmd_plus, Direction, SynthOptions, TieBreak, DEFAULT_SEED};
use tsynth_core::peephole::optimize;
use tsynth_core::perm::Perm;
use tsynth_core::scale::{compose_3x3, near_neighbor_check, ControlSequence, MuxSpec};
use tsynth_core::Circuit;

#[derive(Parser)]
#[command(
    name = "tsynth",
    version,
    about = "Synthesis toolkit for two-trit (and multiplexed n-line) ternary reversible circuits"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize a circuit for a permutation.
    Synth(SynthArgs),
    /// Check that a circuit file realizes a permutation.
    Verify(VerifyArgs),
    /// Apply merge and template passes to a circuit file.
    Optimize(OptimizeArgs),
    /// Print the cycle decomposition of a permutation.
    Decompose(DecomposeArgs),
    /// Run the exhaustive two-trit benchmark.
    Bench(BenchArgs),
    /// Compose three two-line circuits into a 3x3 multiplexer.
    Compose3(Compose3Args),
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Mmd,
    Natural,
    #[value(name = "3cyc")]
    ThreeCyc,
    Transp,
}

#[derive(Clone, Copy, ValueEnum)]
enum DirectionArg {
    Forward,
    Bidirectional,
}

#[derive(Args)]
struct SynthArgs {
    /// Comma-separated image list, e.g. 4,3,7,5,8,1,2,6,0
    #[arg(long)]
    perm: String,
    #[arg(long, value_enum)]
    method: MethodArg,
    /// Tie-break seed (default: TSYNTH_SEED or 1)
    #[arg(long)]
    seed: Option<u64>,
    /// Try every cyclic rotation of each cycle (transposition method only)
    #[arg(long)]
    pivot_search: bool,
    /// Emit the peephole-optimized circuit
    #[arg(long)]
    optimize: bool,
    #[arg(long, value_enum, default_value = "bidirectional")]
    direction: DirectionArg,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    perm: String,
    /// Circuit file in the one-gate-per-line text format
    #[arg(long)]
    circuit: PathBuf,
}

#[derive(Args)]
struct OptimizeArgs {
    #[arg(long)]
    circuit: PathBuf,
    /// Write the optimized circuit here instead of stdout
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct DecomposeArgs {
    #[arg(long)]
    perm: String,
    #[arg(long, value_enum, default_value = "natural")]
    strategy: StrategyArg,
    #[arg(long)]
    pivot_search: bool,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Natural,
    #[value(name = "3cyc")]
    ThreeCyc,
    Transp,
}

#[derive(Args)]
struct BenchArgs {
    /// Output directory for records and statistics
    #[arg(long)]
    out: PathBuf,
    /// Comma-separated subset of mmd,natural,3cyc,transp
    #[arg(long, default_value = "mmd,natural,3cyc,transp")]
    methods: String,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value = "raw")]
    cost: String,
    #[arg(long, default_value_t = 8)]
    shards: usize,
    /// Run only this shard (with checkpoint/resume); omit for a full run
    #[arg(long)]
    shard: Option<usize>,
    /// Merge previously completed shard files instead of running
    #[arg(long)]
    merge: bool,
    /// Restrict the run to the first N ranks (smoke testing)
    #[arg(long)]
    limit: Option<u64>,
    #[arg(long)]
    pivot_search: bool,
    /// Ranks per checkpoint interval in shard mode
    #[arg(long, default_value_t = 4096)]
    checkpoint_interval: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum SequenceArg {
    /// Three X gates on the control line
    Xxx,
    /// N, XT, P12 on the control line
    Nxp,
}

#[derive(Args)]
struct Compose3Args {
    #[arg(long)]
    c0: PathBuf,
    #[arg(long)]
    c1: PathBuf,
    #[arg(long)]
    c2: PathBuf,
    #[arg(long, value_enum, default_value = "xxx")]
    sequence: SequenceArg,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

fn default_seed() -> u64 {
    std::env::var("TSYNTH_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_SEED)
}

fn parse_perm(text: &str) -> Result<Perm> {
    let perm: Perm = text.parse().context("invalid permutation")?;
    if perm.size() != 9 {
        bail!("synthesis works on two-line permutations (9 images), got {}", perm.size());
    }
    Ok(perm)
}

fn read_circuit(path: &Path) -> Result<Circuit> {
    let text =
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    Circuit::parse(&text).with_context(|| format!("cannot parse {}", path.display()))
}

fn options(seed: Option<u64>, direction: DirectionArg) -> SynthOptions {
    SynthOptions {
        direction: match direction {
            DirectionArg::Forward => Direction::Forward,
            DirectionArg::Bidirectional => Direction::Bidirectional,
        },
        tie_break: TieBreak::Seeded(seed.unwrap_or_else(default_seed)),
        ..SynthOptions::default()
    }
}

fn print_circuit_report(circuit: &Circuit) {
    let model = CostModel::default();
    print!("{circuit}");
    if !circuit.is_empty() {
        println!();
        println!("{}", circuit.diagram());
    }
    println!();
    println!("gates: {}", circuit.len());
    println!("cost raw: {}", raw_cost(circuit, &model));
    println!("cost adjusted: {}", adjusted_cost(circuit, &model));
    println!("cost optimized: {}", raw_cost(&optimize(circuit), &model));
}

fn cmd_synth(args: SynthArgs) -> Result<()> {
    let perm = parse_perm(&args.perm)?;
    let opts = options(args.seed, args.direction);
    let mut circuit = match args.method {
        MethodArg::Mmd => mmd_plus(&perm, &opts)?,
        MethodArg::Natural => synth_cycles(&perm, Strategy::natural(), &opts)?,
        MethodArg::ThreeCyc => synth_cycles(&perm, Strategy::three_cycles(), &opts)?,
        MethodArg::Transp => {
            synth_cycles(&perm, Strategy::transpositions(args.pivot_search), &opts)?
        }
    };
    if args.optimize {
        circuit = optimize(&circuit);
    }
    print_circuit_report(&circuit);
    Ok(())
}

fn cmd_verify(args: VerifyArgs) -> Result<bool> {
    let perm = parse_perm(&args.perm)?;
    let circuit = read_circuit(&args.circuit)?;
    if circuit.lines() != 2 {
        bail!("verification expects a two-line circuit, got {} lines", circuit.lines());
    }
    let simulated = circuit.simulate();
    match (0..9).find(|&i| simulated.apply(i) != perm.apply(i)) {
        None => {
            println!("ok");
            Ok(true)
        }
        Some(i) => {
            println!(
                "mismatch at input {i}: expected {}, got {}",
                perm.apply(i),
                simulated.apply(i)
            );
            Ok(false)
        }
    }
}

fn cmd_optimize(args: OptimizeArgs) -> Result<()> {
    let circuit = read_circuit(&args.circuit)?;
    let model = CostModel::default();
    let optimized = optimize(&circuit);
    if let Some(path) = &args.output {
        fs::write(path, optimized.to_string())?;
    } else {
        print!("{optimized}");
    }
    println!(
        "cost: {} -> {} ({} -> {} gates)",
        raw_cost(&circuit, &model),
        raw_cost(&optimized, &model),
        circuit.len(),
        optimized.len()
    );
    Ok(())
}

fn cmd_decompose(args: DecomposeArgs) -> Result<()> {
    let perm = parse_perm(&args.perm)?;
    let decomposition = natural_cycles(&perm);
    if decomposition.factors.is_empty() {
        println!("identity");
        return Ok(());
    }
    let opts = options(args.seed, DirectionArg::Bidirectional);
    let mut out = String::new();
    for cycle in &decomposition.factors {
        let factors = match args.strategy {
            StrategyArg::Natural => vec![cycle.clone()],
            StrategyArg::ThreeCyc => three_cycle_factors(cycle),
            StrategyArg::Transp => {
                let rotation = if args.pivot_search && cycle.len() >= 3 {
                    tsynth_core::cycles::best_pivot(cycle, &opts)?.0
                } else {
                    0
                };
                transposition_factors(cycle, rotation)?
            }
        };
        for f in factors {
            out.push_str(&f.to_string());
        }
    }
    println!("{out}");
    Ok(())
}

fn parse_methods(text: &str) -> Result<Vec<Method>> {
    text.split(',')
        .map(|tok| Method::parse(tok.trim()).map_err(anyhow::Error::from))
        .collect()
}

fn cmd_bench(args: BenchArgs) -> Result<()> {
    let config = BenchConfig {
        methods: parse_methods(&args.methods)?,
        cost_mode: CostMode::parse(&args.cost)?,
        base_seed: args.seed.unwrap_or_else(default_seed),
        pivot_search: args.pivot_search,
        ..BenchConfig::default()
    };
    let total = args.limit.unwrap_or(bench::FUNCTION_COUNT);
    fs::create_dir_all(&args.out)?;

    if let Some(shard) = args.shard {
        let plan = ShardPlan { total, shards: args.shards, shard };
        let checkpoint = run_shard_to_dir(&config, plan, &args.out, args.checkpoint_interval)?;
        println!(
            "shard {shard}/{}: complete through rank {} ({} functions)",
            args.shards, checkpoint.next_rank, checkpoint.partial.total
        );
        return Ok(());
    }

    let run = if args.merge {
        merge_shards(&config, total, args.shards, &args.out)?
    } else if args.limit.is_some() {
        let records = bench::run_range(&config, 0..total)?;
        let stats = bench::compute_stats(&config, &records);
        bench::BenchRun { config: config.clone(), records, stats }
    } else {
        run_full(&config, args.shards)?
    };

    let records_path = args.out.join("records.csv");
    let stats_path = args.out.join("stats.json");
    fs::write(&records_path, bench::records_to_csv(&config, &run.records))?;
    fs::write(&stats_path, bench::stats_to_json(&run.stats))?;
    println!("records: {}", records_path.display());
    println!("stats: {}", stats_path.display());
    let f = &run.stats.fractions;
    let pct = |v: Option<f64>| v.map_or("n/a".into(), |x| format!("{:.2}%", x * 100.0));
    println!("functions: {}", run.stats.counts.total);
    println!("mmd <= natural: {}", pct(f.mmd_le_natural));
    println!("mmd < natural: {}", pct(f.mmd_lt_natural));
    println!("natural < 3cyc: {}", pct(f.natural_lt_three_cycles));
    println!("transp < mmd: {}", pct(f.transpositions_lt_mmd));
    Ok(())
}

fn cmd_compose3(args: Compose3Args) -> Result<()> {
    let c0 = read_circuit(&args.c0)?;
    let c1 = read_circuit(&args.c1)?;
    let c2 = read_circuit(&args.c2)?;
    let sequence = match args.sequence {
        SequenceArg::Xxx => ControlSequence::TripleX,
        SequenceArg::Nxp => ControlSequence::ShiftMix,
    };
    let composed = compose_3x3(&c0, &c1, &c2, sequence)?;
    let spec = MuxSpec::new(3, vec![c0, c1, c2])?;
    debug_assert_eq!(composed.simulate(), spec.perm());
    if let Some(path) = &args.output {
        fs::write(path, composed.to_string())?;
    } else {
        print!("{composed}");
        println!();
    }
    println!("perm: {}", composed.simulate());
    let violations = near_neighbor_check(&composed);
    println!("near-neighbor violations: {}", violations.len());
    for v in violations {
        println!("  gate {}: {:?}", v.gate_index, v.gate);
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Synth(args) => cmd_synth(args).map(|()| true),
        Command::Verify(args) => cmd_verify(args),
        Command::Optimize(args) => cmd_optimize(args).map(|()| true),
        Command::Decompose(args) => cmd_decompose(args).map(|()| true),
        Command::Bench(args) => cmd_bench(args).map(|()| true),
        Command::Compose3(args) => cmd_compose3(args).map(|()| true),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
