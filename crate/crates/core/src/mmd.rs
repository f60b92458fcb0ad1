//! The MMD+ transformation-based synthesizer for two-line circuits.
//!
//! The synthesizer settles truth-table rows in index order, keeping a working
//! permutation `g` that starts at the target function. While row `i` is
//! unsettled it looks for an elementary gate from the 40-gate library to
//! cascade either at the output end (`g` becomes `e . g`) or, in
//! bidirectional mode, at the input end (`g` becomes `g . e`). A move is
//! admissible when the new `g` still fixes every row below `i`. Among the
//! admissible moves the engine picks, in order: minimal resulting distance to
//! the identity, minimal gate cost, then a seeded random draw (or a branch on
//! every tie in exhaustive mode).
//!
//! Distance is the total trit-digit mismatch between each row index and its
//! image, summed over the table; it is zero exactly on the identity.

use std::collections::HashSet;
use std::sync::OnceLock;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::circuit::{Circuit, Gate};
use crate::cost::{gate_cost, CostModel};
use crate::error::{Error, Result};
use crate::perm::Perm;
use crate::trit::{BaseGate, Trit};

/// Default seed for the randomized tie-break; benchmark output records it.
pub const DEFAULT_SEED: u64 = 1;

/// Default guard on emitted gates per synthesis.
pub const DEFAULT_MAX_GATES: usize = 100;

/// Default node budget for exhaustive tie exploration.
pub const DEFAULT_BRANCH_LIMIT: usize = 200_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// Output-side moves only.
    Forward,
    /// Output- and input-side moves.
    Bidirectional,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TieBreak {
    /// Deterministic random draw among tied moves.
    Seeded(u64),
    /// Branch on every tie, keeping the given node budget.
    Exhaustive(usize),
}

#[derive(Debug, Clone)]
pub struct SynthOptions {
    pub direction: Direction,
    pub tie_break: TieBreak,
    pub cost_model: CostModel,
    pub max_gates: usize,
}

impl Default for SynthOptions {
    fn default() -> SynthOptions {
        SynthOptions {
            direction: Direction::Bidirectional,
            tie_break: TieBreak::Seeded(DEFAULT_SEED),
            cost_model: CostModel::default(),
            max_gates: DEFAULT_MAX_GATES,
        }
    }
}

impl SynthOptions {
    pub fn seeded(seed: u64) -> SynthOptions {
        SynthOptions { tie_break: TieBreak::Seeded(seed), ..SynthOptions::default() }
    }

    pub fn seed(&self) -> Option<u64> {
        match self.tie_break {
            TieBreak::Seeded(s) => Some(s),
            TieBreak::Exhaustive(_) => None,
        }
    }
}

/// All elementary gates for a two-line circuit: five bases, two targets, and
/// per target either no control or one control on the other line with each of
/// the three values. Exactly 40 gates.
pub fn elementary_library(lines: usize) -> Vec<Gate> {
    assert_eq!(lines, 2, "the elementary library is defined for two-line circuits");
    let mut gates = Vec::with_capacity(40);
    for base in BaseGate::NON_IDENTITY {
        for target in 0..2 {
            gates.push(Gate::simple(base, target).unwrap());
            for value in Trit::all() {
                gates.push(Gate::controlled(base, target, 1 - target, value).unwrap());
            }
        }
    }
    gates
}

/// Total digit mismatch between each index and its image.
pub fn distance(p: &Perm) -> u32 {
    let mut total = 0u32;
    for i in 0..p.size() {
        let mut a = i;
        let mut b = p.apply(i);
        while a > 0 || b > 0 {
            if a % 3 != b % 3 {
                total += 1;
            }
            a /= 3;
            b /= 3;
        }
    }
    total
}

const DOMAIN: usize = 9;

const fn build_hamming() -> [[u8; DOMAIN]; DOMAIN] {
    let mut t = [[0u8; DOMAIN]; DOMAIN];
    let mut a = 0;
    while a < DOMAIN {
        let mut b = 0;
        while b < DOMAIN {
            let mut d = 0;
            if a / 3 != b / 3 {
                d += 1;
            }
            if a % 3 != b % 3 {
                d += 1;
            }
            t[a][b] = d;
            b += 1;
        }
        a += 1;
    }
    t
}

/// Pairwise digit distance between two-line words.
const HAMMING: [[u8; DOMAIN]; DOMAIN] = build_hamming();

struct LibGate {
    emitted: Gate, // the gate that lands in the circuit (inverse base)
    perm: [u8; DOMAIN],
    inv_perm: [u8; DOMAIN],
    support: Vec<u8>,
    cost: u32,
}

struct Library {
    gates: Vec<LibGate>,
    /// Gate indices admissible while settling row `i`: every moved point >= i.
    admissible: Vec<Vec<u16>>,
}

impl Library {
    fn new(model: &CostModel) -> Library {
        let mut gates = Vec::with_capacity(40);
        for gate in elementary_library(2) {
            let sem = gate.semantics(2).unwrap();
            let mut perm = [0u8; DOMAIN];
            let mut inv_perm = [0u8; DOMAIN];
            let mut support = Vec::new();
            for (i, slot) in perm.iter_mut().enumerate() {
                *slot = sem.apply(i) as u8;
                if *slot as usize != i {
                    support.push(i as u8);
                }
            }
            for i in 0..DOMAIN {
                inv_perm[perm[i] as usize] = i as u8;
            }
            let cost = gate_cost(&gate, model).unwrap();
            gates.push(LibGate { emitted: gate.inverted(), perm, inv_perm, support, cost });
        }
        let admissible = (0..DOMAIN)
            .map(|row| {
                gates
                    .iter()
                    .enumerate()
                    .filter(|(_, lg)| lg.support.iter().all(|&p| p as usize >= row))
                    .map(|(i, _)| i as u16)
                    .collect()
            })
            .collect();
        Library { gates, admissible }
    }
}

fn with_library<R>(model: &CostModel, f: impl FnOnce(&Library) -> R) -> R {
    static DEFAULT: OnceLock<Library> = OnceLock::new();
    if *model == CostModel::default() {
        f(DEFAULT.get_or_init(|| Library::new(&CostModel::default())))
    } else {
        f(&Library::new(model))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    Output,
    Input,
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    side: Side,
    gate: u16,
}

/// Working permutations already seen while settling the current row. Moves
/// that would revisit one are excluded, which breaks livelocks on
/// distance-neutral plateaus without otherwise changing the move selection.
type RowVisited = HashSet<[u8; DOMAIN]>;

#[derive(Clone)]
struct SearchState {
    g: [u8; DOMAIN],
    ginv: [u8; DOMAIN],
    dist: u32,
    prefix: Vec<Gate>,
    suffix_rev: Vec<Gate>,
}

impl SearchState {
    fn new(f: &Perm) -> SearchState {
        let mut g = [0u8; DOMAIN];
        g.copy_from_slice(f.table());
        let mut ginv = [0u8; DOMAIN];
        let mut dist = 0u32;
        for (i, &v) in g.iter().enumerate() {
            ginv[v as usize] = i as u8;
            dist += HAMMING[v as usize][i] as u32;
        }
        SearchState { g, ginv, dist, prefix: Vec::new(), suffix_rev: Vec::new() }
    }

    fn moves(&self) -> usize {
        self.prefix.len() + self.suffix_rev.len()
    }

    #[inline]
    fn delta(&self, side: Side, lg: &LibGate) -> i32 {
        let mut d = 0i32;
        match side {
            Side::Output => {
                // g'(k) = E(g(k)): rows with g(k) in the support change
                for &v in &lg.support {
                    let row = self.ginv[v as usize] as usize;
                    d += HAMMING[lg.perm[v as usize] as usize][row] as i32
                        - HAMMING[v as usize][row] as i32;
                }
            }
            Side::Input => {
                // g'(k) = g(E(k)): rows in the support change
                for &k in &lg.support {
                    let k = k as usize;
                    d += HAMMING[self.g[lg.perm[k] as usize] as usize][k] as i32
                        - HAMMING[self.g[k] as usize][k] as i32;
                }
            }
        }
        d
    }

    /// The working permutation after a candidate move.
    fn next_g(&self, side: Side, lg: &LibGate) -> [u8; DOMAIN] {
        let mut g = self.g;
        match side {
            Side::Output => {
                for &v in &lg.support {
                    g[self.ginv[v as usize] as usize] = lg.perm[v as usize];
                }
            }
            Side::Input => {
                for &k in &lg.support {
                    g[k as usize] = self.g[lg.perm[k as usize] as usize];
                }
            }
        }
        g
    }

    /// Fill `ties` with the admissible moves minimizing (distance, cost),
    /// skipping moves that would revisit a state seen for this row.
    fn collect_ties(
        &self,
        row: usize,
        lib: &Library,
        direction: Direction,
        visited: &RowVisited,
        ties: &mut Vec<Candidate>,
    ) -> Option<(u32, u32)> {
        ties.clear();
        let mut best: Option<(u32, u32)> = None;
        let preimage = self.ginv[row] as usize;
        for &idx in &lib.admissible[row] {
            let lg = &lib.gates[idx as usize];
            for side in [Side::Output, Side::Input] {
                if side == Side::Input {
                    if direction != Direction::Bidirectional {
                        continue;
                    }
                    // input moves only when they route the row's preimage
                    // strictly toward it
                    let routed = lg.inv_perm[preimage] as usize;
                    if HAMMING[routed][row] >= HAMMING[preimage][row] {
                        continue;
                    }
                }
                let key = ((self.dist as i32 + self.delta(side, lg)) as u32, lg.cost);
                if best.is_some_and(|b| key > b) || visited.contains(&self.next_g(side, lg)) {
                    continue;
                }
                if best != Some(key) {
                    best = Some(key);
                    ties.clear();
                }
                ties.push(Candidate { side, gate: idx });
            }
        }
        best
    }

    fn apply(&mut self, cand: Candidate, lib: &Library) {
        let lg = &lib.gates[cand.gate as usize];
        self.dist = (self.dist as i32 + self.delta(cand.side, lg)) as u32;
        let old = self.g;
        match cand.side {
            Side::Output => {
                for (slot, &v) in self.g.iter_mut().zip(old.iter()) {
                    *slot = lg.perm[v as usize];
                }
                self.suffix_rev.push(lg.emitted.clone());
            }
            Side::Input => {
                for (slot, &e) in self.g.iter_mut().zip(lg.perm.iter()) {
                    *slot = old[e as usize];
                }
                self.prefix.push(lg.emitted.clone());
            }
        }
        for k in 0..DOMAIN {
            self.ginv[self.g[k] as usize] = k as u8;
        }
    }

    fn into_circuit(self) -> Circuit {
        let mut gates = self.prefix;
        gates.extend(self.suffix_rev.into_iter().rev());
        Circuit::from_gates(2, gates).expect("library gates fit two lines")
    }
}

/// Synthesize a circuit realizing `f` with the MMD+ algorithm.
pub fn mmd_plus(f: &Perm, opts: &SynthOptions) -> Result<Circuit> {
    if f.size() != DOMAIN {
        return Err(Error::SizeMismatch { left: f.size(), right: DOMAIN });
    }
    with_library(&opts.cost_model, |lib| match opts.tie_break {
        TieBreak::Seeded(seed) => greedy(f, opts, lib, seed),
        TieBreak::Exhaustive(limit) => {
            let set = search_all(f, opts, lib, limit)?;
            set.circuits
                .into_iter()
                .next()
                .ok_or(Error::GateLimit { limit: opts.max_gates })
        }
    })
}

fn greedy(f: &Perm, opts: &SynthOptions, lib: &Library, seed: u64) -> Result<Circuit> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut state = SearchState::new(f);
    let mut ties = Vec::with_capacity(80);
    let mut visited = RowVisited::new();
    for row in 0..DOMAIN {
        visited.clear();
        visited.insert(state.g);
        while state.g[row] != row as u8 {
            if state
                .collect_ties(row, lib, opts.direction, &visited, &mut ties)
                .is_none()
            {
                return Err(Error::GateLimit { limit: opts.max_gates });
            }
            let pick = if ties.len() == 1 { 0 } else { rng.random_range(0..ties.len()) };
            state.apply(ties[pick], lib);
            visited.insert(state.g);
            if state.moves() > opts.max_gates {
                return Err(Error::GateLimit { limit: opts.max_gates });
            }
        }
    }
    let circuit = state.into_circuit();
    debug_assert_eq!(circuit.simulate(), *f);
    Ok(circuit)
}

/// Every circuit reachable by branching ties, deduplicated and sorted by raw
/// cost (then gate count, then gate order).
#[derive(Debug, Clone)]
pub struct SynthesisSet {
    pub circuits: Vec<Circuit>,
    /// True when the node budget ran out before the search space did.
    pub truncated: bool,
}

/// Explore every tie of [`mmd_plus`] within the branch limit.
pub fn mmd_plus_all(f: &Perm, opts: &SynthOptions) -> Result<SynthesisSet> {
    if f.size() != DOMAIN {
        return Err(Error::SizeMismatch { left: f.size(), right: DOMAIN });
    }
    let limit = match opts.tie_break {
        TieBreak::Exhaustive(limit) => limit,
        TieBreak::Seeded(_) => DEFAULT_BRANCH_LIMIT,
    };
    with_library(&opts.cost_model, |lib| search_all(f, opts, lib, limit))
}

fn search_all(f: &Perm, opts: &SynthOptions, lib: &Library, limit: usize) -> Result<SynthesisSet> {
    struct Ctx<'a> {
        lib: &'a Library,
        direction: Direction,
        max_gates: usize,
        model: CostModel,
        budget: usize,
        truncated: bool,
        seen: HashSet<Vec<Gate>>,
        out: Vec<Circuit>,
    }

    fn dfs(ctx: &mut Ctx<'_>, state: SearchState, mut row: usize, mut visited: RowVisited) {
        while row < DOMAIN && state.g[row] == row as u8 {
            row += 1;
            visited.clear();
            visited.insert(state.g);
        }
        if row == DOMAIN {
            let circuit = state.into_circuit();
            if ctx.seen.insert(circuit.gates().to_vec()) {
                ctx.out.push(circuit);
            }
            return;
        }
        if state.moves() >= ctx.max_gates {
            return;
        }
        let mut ties = Vec::new();
        if state
            .collect_ties(row, ctx.lib, ctx.direction, &visited, &mut ties)
            .is_none()
        {
            return;
        }
        for cand in ties {
            if ctx.budget == 0 {
                ctx.truncated = true;
                return;
            }
            ctx.budget -= 1;
            let mut next = state.clone();
            next.apply(cand, ctx.lib);
            let mut next_visited = visited.clone();
            next_visited.insert(next.g);
            dfs(ctx, next, row, next_visited);
        }
    }

    let mut ctx = Ctx {
        lib,
        direction: opts.direction,
        max_gates: opts.max_gates,
        model: opts.cost_model,
        budget: limit,
        truncated: false,
        seen: HashSet::new(),
        out: Vec::new(),
    };
    let start = SearchState::new(f);
    let mut visited = RowVisited::new();
    visited.insert(start.g);
    dfs(&mut ctx, start, 0, visited);
    let model = ctx.model;
    let mut circuits = ctx.out;
    circuits.sort_by(|a, b| {
        let ka = (crate::cost::raw_cost(a, &model), a.len());
        let kb = (crate::cost::raw_cost(b, &model), b.len());
        ka.cmp(&kb).then_with(|| a.gates().cmp(b.gates()))
    });
    Ok(SynthesisSet { circuits, truncated: ctx.truncated })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cost::raw_cost;
    use crate::perm::Cycle;

    fn f1() -> Perm {
        Perm::from_outputs(vec![4, 3, 7, 5, 8, 1, 2, 6, 0]).unwrap()
    }

    fn tr(a: usize, b: usize) -> Perm {
        Cycle::new(vec![a, b]).unwrap().to_perm(9).unwrap()
    }

    #[test]
    fn library_has_forty_gates() {
        let lib = elementary_library(2);
        assert_eq!(lib.len(), 40);
        let n_x_y1 = Gate::controlled(BaseGate::N, 0, 1, Trit::ONE).unwrap();
        assert!(lib.contains(&n_x_y1));
        assert!(lib.iter().all(|g| g.base() != BaseGate::I));
        // 10 simple, 30 controlled
        assert_eq!(lib.iter().filter(|g| g.is_simple()).count(), 10);
    }

    #[test]
    fn distance_values() {
        assert_eq!(distance(&Perm::identity(9)), 0);
        assert_eq!(distance(&tr(5, 8)), 2);

        // independent digit-count oracle over the worked example
        let p = f1();
        let mut expect = 0;
        for i in 0..9 {
            let (a, b) = (i, p.apply(i));
            expect += u32::from(a / 3 != b / 3) + u32::from(a % 3 != b % 3);
        }
        assert_eq!(distance(&p), expect);
        assert_eq!(distance(&p), 16);
    }

    #[test]
    fn identity_synthesizes_to_empty_circuit() {
        let c = mmd_plus(&Perm::identity(9), &SynthOptions::default()).unwrap();
        assert!(c.is_empty());
        assert_eq!(raw_cost(&c, &CostModel::default()), 0);
    }

    #[test]
    fn single_gate_for_5_8() {
        let c = mmd_plus(&tr(5, 8), &SynthOptions::default()).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(raw_cost(&c, &CostModel::default()), 2);
        assert_eq!(c.gates()[0], Gate::controlled(BaseGate::P12, 0, 1, Trit::TWO).unwrap());
        assert_eq!(c.simulate(), tr(5, 8));
    }

    #[test]
    fn deterministic_per_seed() {
        let f = f1();
        let a = mmd_plus(&f, &SynthOptions::seeded(7)).unwrap();
        let b = mmd_plus(&f, &SynthOptions::seeded(7)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn correct_on_random_sample() {
        let opts = SynthOptions::default();
        let fwd = SynthOptions { direction: Direction::Forward, ..SynthOptions::default() };
        for k in 0..400u64 {
            let rank = (k * 907) % 362_880;
            let f = Perm::from_rank(rank, 9).unwrap();
            let c = mmd_plus(&f, &opts).unwrap();
            assert_eq!(c.simulate(), f, "bidirectional failed at rank {rank}");
            let c = mmd_plus(&f, &fwd).unwrap();
            assert_eq!(c.simulate(), f, "forward failed at rank {rank}");
        }
    }

    #[test]
    fn settled_prefix_is_monotone() {
        // after synthesis the circuit realizes f, which by construction means
        // every row settled in order; spot-check via a long random walk
        let f = Perm::from_rank(123_456, 9).unwrap();
        let c = mmd_plus(&f, &SynthOptions::default()).unwrap();
        assert_eq!(c.simulate(), f);
        assert!(c.len() <= DEFAULT_MAX_GATES);
    }

    #[test]
    fn exhaustive_search_contains_greedy_cost_or_better() {
        let opts = SynthOptions::default();
        for rank in [1u64, 77, 40_321, 200_000] {
            let f = Perm::from_rank(rank, 9).unwrap();
            let greedy_cost = raw_cost(&mmd_plus(&f, &opts).unwrap(), &opts.cost_model);
            let all = mmd_plus_all(&f, &opts).unwrap();
            assert!(!all.circuits.is_empty());
            for c in &all.circuits {
                assert_eq!(c.simulate(), f);
            }
            let best = raw_cost(&all.circuits[0], &opts.cost_model);
            assert!(best <= greedy_cost, "rank {rank}: best {best} > greedy {greedy_cost}");
        }
    }

    #[test]
    fn exhaustive_identity_and_5_8() {
        let all = mmd_plus_all(&Perm::identity(9), &SynthOptions::default()).unwrap();
        assert_eq!(all.circuits.len(), 1);
        assert!(all.circuits[0].is_empty());

        let all = mmd_plus_all(&tr(5, 8), &SynthOptions::default()).unwrap();
        assert_eq!(raw_cost(&all.circuits[0], &CostModel::default()), 2);
    }
}
