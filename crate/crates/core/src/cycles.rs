//! Cycle-based synthesis: natural cycles, 3-cycles, and transpositions.
//!
//! A permutation factors into disjoint natural cycles, which commute and can
//! be cascaded in any order; the ordering is chosen to maximize merging
//! between border gates of neighboring subcircuits. Each cycle can be
//! realized directly, split into 3-cycles, or split into transpositions with
//! the product model `(a1 .. ak) = (a1 a2)(a1 a3) .. (a1 ak)` (left factor
//! applied first). Transpositions whose two words differ in a single trit
//! are realizable with one controlled gate; everything else goes through the
//! MMD+ engine.

use itertools::Itertools;

use crate::circuit::{Circuit, Gate};
use crate::cost::{raw_cost, CostModel};
use crate::error::{Error, Result};
use crate::mmd::{mmd_plus, SynthOptions};
use crate::perm::{Cycle, Perm};
use crate::trit::Trit;

/// Ordered cycle factors of a permutation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleDecomposition {
    pub factors: Vec<Cycle>,
    /// When true no point appears in two factors and the factors commute.
    pub disjoint: bool,
}

impl std::fmt::Display for CycleDecomposition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for c in &self.factors {
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StrategyKind {
    Natural,
    ThreeCycles,
    Transpositions,
}

/// A cycle-based synthesis strategy. Pivot search applies only to the
/// transposition strategy, where a cyclic reordering of each cycle may lower
/// the factor costs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Strategy {
    kind: StrategyKind,
    pivot_search: bool,
}

impl Strategy {
    pub fn natural() -> Strategy {
        Strategy { kind: StrategyKind::Natural, pivot_search: false }
    }

    pub fn three_cycles() -> Strategy {
        Strategy { kind: StrategyKind::ThreeCycles, pivot_search: false }
    }

    pub fn transpositions(pivot_search: bool) -> Strategy {
        Strategy { kind: StrategyKind::Transpositions, pivot_search }
    }

    pub fn kind(&self) -> StrategyKind {
        self.kind
    }

    pub fn pivot_search(&self) -> bool {
        self.pivot_search
    }
}

/// Disjoint cycles covering all non-fixed points, each starting at its
/// minimum, ordered by minimum. Fixed points are omitted; the identity
/// decomposes into no factors.
pub fn natural_cycles(p: &Perm) -> CycleDecomposition {
    let mut visited = vec![false; p.size()];
    let mut factors = Vec::new();
    for start in 0..p.size() {
        if visited[start] {
            continue;
        }
        visited[start] = true;
        if p.apply(start) == start {
            continue;
        }
        let mut points = vec![start];
        let mut cur = p.apply(start);
        while cur != start {
            visited[cur] = true;
            points.push(cur);
            cur = p.apply(cur);
        }
        factors.push(Cycle::new(points).expect("orbit points are distinct"));
    }
    CycleDecomposition { factors, disjoint: true }
}

/// Split a cycle into 3-cycles sharing the first point, with a trailing
/// transposition when the length is even. Cycles of length 2 or 3 are
/// returned unchanged. The left-to-right product of the factors equals the
/// input cycle.
pub fn three_cycle_factors(cycle: &Cycle) -> Vec<Cycle> {
    let pts = cycle.points();
    if pts.len() <= 3 {
        return vec![cycle.clone()];
    }
    let anchor = pts[0];
    let mut out = Vec::new();
    let mut j = 1;
    while j + 1 < pts.len() {
        out.push(Cycle::new(vec![anchor, pts[j], pts[j + 1]]).unwrap());
        j += 2;
    }
    if j < pts.len() {
        out.push(Cycle::new(vec![anchor, pts[j]]).unwrap());
    }
    out
}

/// Product-model transposition factors after rotating the cycle to start at
/// the point with index `rotation`.
pub fn transposition_factors(cycle: &Cycle, rotation: usize) -> Result<Vec<Cycle>> {
    if rotation >= cycle.len() {
        return Err(Error::InvalidCycle(format!(
            "rotation {rotation} out of range for a {}-cycle",
            cycle.len()
        )));
    }
    let rot = cycle.rotated(rotation);
    let pts = rot.points().to_vec();
    if pts.len() == 2 {
        return Ok(vec![rot]);
    }
    Ok(pts[1..]
        .iter()
        .map(|&b| Cycle::new(vec![pts[0], b]).unwrap())
        .collect())
}

/// The one-gate realization of the transposition `(a, b)` on two lines, when
/// the two words differ in exactly one digit: the base swaps the differing
/// values on the differing line, controlled by the shared digit of the other
/// line.
pub fn single_gate_transposition(a: usize, b: usize) -> Option<Gate> {
    assert!(a < 9 && b < 9 && a != b, "need two distinct two-line points");
    let (ax, ay) = ((a / 3) as u8, (a % 3) as u8);
    let (bx, by) = ((b / 3) as u8, (b % 3) as u8);
    let (target, va, vb, ctrl_line, ctrl_val) = match (ax != bx, ay != by) {
        (true, false) => (0, ax, bx, 1, ay),
        (false, true) => (1, ay, by, 0, ax),
        _ => return None,
    };
    let base = Trit::new(va)
        .and_then(|ta| Trit::new(vb).and_then(|tb| crate::trit::BaseGate::swapping(ta, tb)))
        .expect("digits differ and are trits");
    Some(
        Gate::controlled(base, target, ctrl_line, Trit::new(ctrl_val).unwrap())
            .expect("control line differs from target"),
    )
}

/// Realize one cycle factor: the single-gate form for cheap transpositions,
/// MMD+ for everything else.
pub fn synth_factor(cycle: &Cycle, opts: &SynthOptions) -> Result<Circuit> {
    if cycle.is_transposition() {
        if let Some(gate) = single_gate_transposition(cycle.points()[0], cycle.points()[1]) {
            return Circuit::from_gates(2, vec![gate]);
        }
    }
    mmd_plus(&cycle.to_perm(9)?, opts)
}

/// Realize a chain of (possibly non-disjoint) cycle factors in the given
/// product order, merging border gates of neighboring factor circuits.
pub fn synth_chain(factors: &[Cycle], opts: &SynthOptions) -> Result<Circuit> {
    let circuits = factors
        .iter()
        .map(|c| synth_factor(c, opts))
        .collect::<Result<Vec<_>>>()?;
    Ok(concat_with_merges(circuits.iter()))
}

/// Merge the border pair of two neighboring subcircuits when the last gate of
/// the left one and the first gate of the right one share target and
/// controls. Only the single outermost pair per junction is considered.
fn concat_with_merges<'a>(parts: impl Iterator<Item = &'a Circuit>) -> Circuit {
    let mut gates: Vec<Gate> = Vec::new();
    for part in parts {
        let mut rest = part.gates().iter();
        if let (Some(last), Some(first)) = (gates.last(), part.gates().first()) {
            if last.target() == first.target() && last.controls() == first.controls() {
                let base = last.base().then(first.base());
                gates.pop();
                rest.next();
                if !base.is_identity() {
                    gates.push(first.with_base(base).expect("merged gate keeps valid controls"));
                }
            }
        }
        gates.extend(rest.cloned());
    }
    Circuit::from_gates(2, gates).expect("parts are two-line circuits")
}

/// Search all cascade orderings of commuting subcircuits for one that
/// maximizes the border-merge saving. Returns the ordering (as indices into
/// the input) and the saving; ties go to the lexicographically first
/// ordering.
pub fn order_disjoint(circuits: &[Circuit], model: &CostModel) -> Result<(Vec<usize>, u32)> {
    let perms: Vec<Perm> = circuits.iter().map(Circuit::simulate).collect();
    for i in 0..perms.len() {
        for j in i + 1..perms.len() {
            if perms[i].then(&perms[j])? != perms[j].then(&perms[i])? {
                return Err(Error::NonCommuting);
            }
        }
    }
    let unmerged: u32 = circuits.iter().map(|c| raw_cost(c, model)).sum();
    let mut best: Option<(Vec<usize>, u32)> = None;
    for ordering in (0..circuits.len()).permutations(circuits.len()) {
        let merged = concat_with_merges(ordering.iter().map(|&i| &circuits[i]));
        let saving = unmerged - raw_cost(&merged, model);
        if best.as_ref().is_none_or(|(_, s)| saving > *s) {
            best = Some((ordering, saving));
        }
    }
    Ok(best.unwrap_or((Vec::new(), 0)))
}

/// Synthesize `f` by cycle decomposition under the given strategy: decompose,
/// realize each cycle's factor chain, order the disjoint chains for maximal
/// border merging, and concatenate.
pub fn synth_cycles(f: &Perm, strategy: Strategy, opts: &SynthOptions) -> Result<Circuit> {
    let decomposition = natural_cycles(f);
    let mut chains = Vec::with_capacity(decomposition.factors.len());
    for cycle in &decomposition.factors {
        let factors = match strategy.kind {
            StrategyKind::Natural => vec![cycle.clone()],
            StrategyKind::ThreeCycles => three_cycle_factors(cycle),
            StrategyKind::Transpositions => {
                let rotation = if strategy.pivot_search && cycle.len() >= 3 {
                    best_pivot(cycle, opts)?.0
                } else {
                    0
                };
                transposition_factors(cycle, rotation)?
            }
        };
        chains.push(synth_chain(&factors, opts)?);
    }
    let (ordering, _saving) = order_disjoint(&chains, &opts.cost_model)?;
    let result = concat_with_merges(ordering.iter().map(|&i| &chains[i]));
    Ok(result)
}

/// Evaluate all cyclic rotations of a cycle under the transposition strategy
/// and return one minimizing the summed factor cost.
pub fn best_pivot(cycle: &Cycle, opts: &SynthOptions) -> Result<(usize, u32)> {
    assert!(cycle.len() >= 3, "pivot rotation needs a cycle of length >= 3");
    let mut best: Option<(usize, u32)> = None;
    for rotation in 0..cycle.len() {
        let mut total = 0u32;
        for t in transposition_factors(cycle, rotation)? {
            total += raw_cost(&synth_factor(&t, opts)?, &opts.cost_model);
        }
        if best.is_none_or(|(_, c)| total < c) {
            best = Some((rotation, total));
        }
    }
    Ok(best.expect("at least one rotation"))
}
