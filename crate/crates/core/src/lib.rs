//! A synthesis toolkit for two-line (and multiplexed n-line) ternary
//! reversible circuits.
//!
//! The toolkit covers:
//!
//! - the ternary gate algebra: the six base gates over `{0, 1, 2}` (the
//!   symmetric group S3), value-controlled Muthukrishnan-Stroud gates, and
//!   their permutation semantics ([`trit`], [`circuit`]);
//! - the MMD+ transformation-based synthesizer with distance-then-cost move
//!   selection and seeded or exhaustive tie-breaking ([`mmd`]);
//! - cycle-based synthesis: natural cycles, 3-cycles, and transpositions
//!   with pivot rotation, plus merge-aware ordering of disjoint subcircuits
//!   ([`cycles`]);
//! - peephole post-processing: neighbor-gate merging and the control-value
//!   templates, iterated to a fixpoint ([`peephole`]);
//! - the 2x2-based n x n circuit class: multiplexed composition, control-line
//!   realization, and the near-neighbor check ([`scale`]);
//! - an exhaustive, deterministic, shardable benchmark over all 362,880
//!   two-trit reversible functions comparing the methods ([`bench`]).
//!
//! Costs follow the Muthukrishnan-Stroud model: simple gates cost 1, gates
//! controlled by 2 cost 2, gates controlled by 0 or 1 cost 4.

pub mod bench;
pub mod circuit;
pub mod cost;
pub mod cycles;
pub mod error;
pub mod mmd;
pub mod peephole;
pub mod perm;
pub mod scale;
pub mod trit;

pub use circuit::{Circuit, Control, Gate};
pub use cost::{adjusted_cost, circuit_cost, gate_cost, raw_cost, CostMode, CostModel};
pub use cycles::{
    best_pivot, natural_cycles, order_disjoint, single_gate_transposition, synth_cycles,
    three_cycle_factors, transposition_factors, CycleDecomposition, Strategy,
};
pub use error::{Error, Result};
pub use mmd::{distance, elementary_library, mmd_plus, mmd_plus_all, SynthOptions};
pub use peephole::{merge_pass, optimize, template_pass};
pub use perm::{Cycle, Perm};
pub use scale::{class_size, compose_3x3, compose_mux, near_neighbor_check, ControlSequence, MuxSpec};
pub use trit::{BaseGate, Trit, Word};
