//! Cost-reducing post-processing: adjacent-gate merging and control-value
//! templates, iterated to a fixpoint.
//!
//! Merging combines neighboring gates with identical target and controls by
//! composing their bases (removing both when the composition is the
//! identity). The templates rewrite a pair of same-base gates on the same
//! target whose controls sit on the same line with two different values:
//! since `G<0> G<1> G<2>` on one control line equals a simple `G` on the
//! target, any two of the three controlled gates equal a simple `G` followed
//! by `G^-1` controlled by the missing value. The pair controlled by 0 and 1
//! drops from cost 8 to 3; the pairs involving a 2-control drop from 6 to 5.

use std::sync::OnceLock;

use crate::circuit::{Circuit, Gate};
use crate::trit::{BaseGate, Trit};

/// A control-value rewrite: a pair of same-base, same-target, same-line gates
/// controlled by `pair` (in either order) becomes a simple gate followed by
/// the inverse base controlled by `replacement`.
#[derive(Debug, Clone, Copy)]
pub struct RewriteRule {
    pub name: &'static str,
    pub pair: (Trit, Trit),
    pub replacement: Trit,
}

impl RewriteRule {
    fn matches(&self, a: Trit, b: Trit) -> bool {
        (a, b) == self.pair || (b, a) == self.pair
    }
}

/// The three template rules. Registration proves each rule exhaustively on
/// all nine two-line words for every base and both control-line assignments.
pub fn template_rules() -> &'static [RewriteRule; 3] {
    static RULES: OnceLock<[RewriteRule; 3]> = OnceLock::new();
    RULES.get_or_init(|| {
        let rules = [
            RewriteRule { name: "not-2", pair: (Trit::ZERO, Trit::ONE), replacement: Trit::TWO },
            RewriteRule { name: "not-1", pair: (Trit::ZERO, Trit::TWO), replacement: Trit::ONE },
            RewriteRule { name: "not-0", pair: (Trit::ONE, Trit::TWO), replacement: Trit::ZERO },
        ];
        for rule in &rules {
            for base in BaseGate::NON_IDENTITY {
                for (target, line) in [(0usize, 1usize), (1, 0)] {
                    for (va, vb) in [rule.pair, (rule.pair.1, rule.pair.0)] {
                        let before = Circuit::from_gates(
                            2,
                            vec![
                                Gate::controlled(base, target, line, va).unwrap(),
                                Gate::controlled(base, target, line, vb).unwrap(),
                            ],
                        )
                        .unwrap();
                        let after = Circuit::from_gates(
                            2,
                            vec![
                                Gate::simple(base, target).unwrap(),
                                Gate::controlled(base.inverse(), target, line, rule.replacement)
                                    .unwrap(),
                            ],
                        )
                        .unwrap();
                        assert_eq!(
                            before.simulate(),
                            after.simulate(),
                            "template rule {} is unsound for base {base}",
                            rule.name
                        );
                    }
                }
            }
        }
        rules
    })
}

/// Merge adjacent gates with identical target and controls until no pair is
/// left; composing to the identity removes both gates.
pub fn merge_pass(circuit: &Circuit) -> Circuit {
    let mut gates: Vec<Gate> = Vec::with_capacity(circuit.len());
    for gate in circuit.gates() {
        let mut gate = gate.clone();
        loop {
            match gates.last() {
                Some(prev)
                    if prev.target() == gate.target() && prev.controls() == gate.controls() =>
                {
                    let base = prev.base().then(gate.base());
                    gates.pop();
                    if base.is_identity() {
                        break;
                    }
                    gate = gate.with_base(base).expect("merged base is not the identity");
                }
                _ => {
                    gates.push(gate);
                    break;
                }
            }
        }
    }
    Circuit::from_gates(circuit.lines(), gates).expect("merging keeps gates in range")
}

/// Apply the template rules left to right on adjacent pairs.
pub fn template_pass(circuit: &Circuit) -> Circuit {
    let rules = template_rules();
    let gates = circuit.gates();
    let mut out: Vec<Gate> = Vec::with_capacity(gates.len());
    let mut i = 0;
    while i < gates.len() {
        if i + 1 < gates.len() {
            if let Some(rewritten) = rewrite_pair(&gates[i], &gates[i + 1], rules) {
                out.extend(rewritten);
                i += 2;
                continue;
            }
        }
        out.push(gates[i].clone());
        i += 1;
    }
    Circuit::from_gates(circuit.lines(), out).expect("templates keep gates in range")
}

fn rewrite_pair(a: &Gate, b: &Gate, rules: &[RewriteRule; 3]) -> Option<[Gate; 2]> {
    if a.base() != b.base() || a.target() != b.target() {
        return None;
    }
    let (ca, cb) = match (a.controls(), b.controls()) {
        ([ca], [cb]) if ca.line == cb.line => (ca, cb),
        _ => return None,
    };
    let rule = rules.iter().find(|r| r.matches(ca.value, cb.value))?;
    Some([
        Gate::simple(a.base(), a.target()).expect("base is not the identity"),
        Gate::controlled(a.base().inverse(), a.target(), ca.line, rule.replacement)
            .expect("control keeps its line"),
    ])
}

/// Alternate merge and template passes to a fixpoint. The raw cost never
/// increases and the simulated permutation is preserved.
pub fn optimize(circuit: &Circuit) -> Circuit {
    let mut current = circuit.clone();
    loop {
        let next = template_pass(&merge_pass(&current));
        if next == current {
            return current;
        }
        current = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cost::{raw_cost, CostMode, CostModel};
    use crate::perm::Perm;

    fn model() -> CostModel {
        CostModel::default()
    }

    #[test]
    fn merge_same_control_neighbors() {
        // P01<1_x> P12<1_x> on y merge into X<1_x>
        let c = Circuit::parse("P01 y @ x=1\nP12 y @ x=1\n").unwrap();
        let m = merge_pass(&c);
        assert_eq!(m, Circuit::parse("X y @ x=1").unwrap());
        assert_eq!(m.simulate(), c.simulate());

        // P12<2_x> N<2_x> merge into X<2_x>
        let c = Circuit::parse("P12 y @ x=2\nN y @ x=2\n").unwrap();
        assert_eq!(merge_pass(&c), Circuit::parse("X y @ x=2").unwrap());

        // inverse pair vanishes
        let c = Circuit::parse("X x\nXT x\n").unwrap();
        assert!(merge_pass(&c).is_empty());
    }

    #[test]
    fn merge_cascades_through_removals() {
        // removing an inverse pair exposes a new mergeable pair
        let c = Circuit::parse("P01 y @ x=1\nX y @ x=1\nXT y @ x=1\nP01 y @ x=1\n").unwrap();
        let m = merge_pass(&c);
        assert!(m.is_empty(), "got {m}");
        assert_eq!(c.simulate(), Perm::identity(9));
    }

    #[test]
    fn template_rule_a_costs_8_to_3() {
        let c = Circuit::parse("N y @ x=0\nN y @ x=1\n").unwrap();
        let t = template_pass(&c);
        assert_eq!(t, Circuit::parse("N y\nN y @ x=2\n").unwrap());
        assert_eq!(raw_cost(&c, &model()), 8);
        assert_eq!(raw_cost(&t, &model()), 3);
        assert_eq!(t.simulate(), c.simulate());
    }

    #[test]
    fn template_rule_b_costs_6_to_5() {
        let c = Circuit::parse("X y @ x=0\nX y @ x=2\n").unwrap();
        let t = template_pass(&c);
        assert_eq!(t, Circuit::parse("X y\nXT y @ x=1\n").unwrap());
        assert_eq!(raw_cost(&c, &model()), 6);
        assert_eq!(raw_cost(&t, &model()), 5);
        assert_eq!(t.simulate(), c.simulate());
    }

    #[test]
    fn template_ignores_non_matching_pairs() {
        let c = Circuit::parse("N y @ x=0\nP01 y @ x=1\n").unwrap(); // different bases
        assert_eq!(template_pass(&c), c);
        let c = Circuit::parse("N y @ x=0\nN x @ y=1\n").unwrap(); // different targets
        assert_eq!(template_pass(&c), c);
        let c = Circuit::parse("N y @ x=0\nN y @ x=0\n").unwrap(); // same value: merge_pass territory
        assert_eq!(template_pass(&c), c);
    }

    #[test]
    fn not_2_identity_underlies_the_templates() {
        // G<0> G<1> G<2> on the same line equals a simple G on the target
        for base in BaseGate::NON_IDENTITY {
            let c = Circuit::from_gates(
                2,
                vec![
                    Gate::controlled(base, 1, 0, Trit::ZERO).unwrap(),
                    Gate::controlled(base, 1, 0, Trit::ONE).unwrap(),
                    Gate::controlled(base, 1, 0, Trit::TWO).unwrap(),
                ],
            )
            .unwrap();
            let simple = Circuit::from_gates(2, vec![Gate::simple(base, 1).unwrap()]).unwrap();
            assert_eq!(c.simulate(), simple.simulate());
        }
    }

    #[test]
    fn optimize_reaches_fixpoint_and_preserves_semantics() {
        // merging exposes a template pair: P01<1> P12<1> -> X<1>, then
        // X<0> X<1> is a template match
        let c = Circuit::parse("X y @ x=0\nP01 y @ x=1\nP12 y @ x=1\n").unwrap();
        let o = optimize(&c);
        assert_eq!(o.simulate(), c.simulate());
        assert!(raw_cost(&o, &model()) <= raw_cost(&c, &model()));
        assert_eq!(o, optimize(&o));

        // already-optimal circuits are untouched
        let c = Circuit::parse("P12 y @ x=2\nN x @ y=2\nP12 y @ x=2\n").unwrap();
        assert_eq!(optimize(&c), c);
    }

    #[test]
    fn optimize_random_circuits_monotone() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for _ in 0..200 {
            let mut gates = Vec::new();
            for _ in 0..rng.random_range(0..10) {
                let base = BaseGate::NON_IDENTITY[rng.random_range(0..5)];
                let target = rng.random_range(0..2);
                let gate = if rng.random_bool(0.7) {
                    Gate::controlled(base, target, 1 - target, Trit::new(rng.random_range(0..3)).unwrap())
                        .unwrap()
                } else {
                    Gate::simple(base, target).unwrap()
                };
                gates.push(gate);
            }
            let c = Circuit::from_gates(2, gates).unwrap();
            let o = optimize(&c);
            assert_eq!(o.simulate(), c.simulate());
            assert!(raw_cost(&o, &model()) <= raw_cost(&c, &model()));
            assert!(
                crate::cost::circuit_cost(&c, &model(), CostMode::Optimized)
                    <= raw_cost(&c, &model())
            );
        }
    }
}
