//! The class of 2x2-based n x n circuits: multiplexed composition,
//! control-line realization, and the near-neighbor check.
//!
//! An n-line circuit of this class uses the top n-2 lines as controls and
//! drives the bottom two working lines through a bank of 3^(n-2) two-line
//! subcircuits, one per control word. Each subcircuit is activated by its
//! selecting word and the control lines are recovered at the outputs. The
//! realization cascades a sequence of simple gates on the control line that
//! routes each control value through 2 exactly once, with each subcircuit
//! lifted (controlled by 2 on the control line) in between.

use num_bigint::BigUint;

use crate::circuit::{Circuit, Control, Gate};
use crate::error::{Error, Result};
use crate::perm::Perm;
use crate::trit::{pow3, BaseGate, Trit};

/// A multiplexer specification: `3^(n-2)` two-line subcircuits indexed by
/// control word (top line most significant).
#[derive(Debug, Clone)]
pub struct MuxSpec {
    lines: usize,
    subcircuits: Vec<Circuit>,
}

impl MuxSpec {
    pub fn new(lines: usize, subcircuits: Vec<Circuit>) -> Result<MuxSpec> {
        if lines < 2 {
            return Err(Error::InvalidCircuit("a mux needs at least 2 lines".into()));
        }
        let expect = pow3(lines - 2);
        if subcircuits.len() != expect {
            return Err(Error::InvalidCircuit(format!(
                "{lines}-line mux needs {expect} subcircuits, got {}",
                subcircuits.len()
            )));
        }
        if let Some(bad) = subcircuits.iter().find(|c| c.lines() != 2) {
            return Err(Error::InvalidCircuit(format!(
                "subcircuits must have 2 lines, got {}",
                bad.lines()
            )));
        }
        Ok(MuxSpec { lines, subcircuits })
    }

    pub fn lines(&self) -> usize {
        self.lines
    }

    pub fn subcircuits(&self) -> &[Circuit] {
        &self.subcircuits
    }

    /// The multiplexed permutation: `(controls, x, y)` maps to
    /// `(controls, C_s(x, y))` where `s` is the control word's index.
    pub fn perm(&self) -> Perm {
        let size = pow3(self.lines);
        let sub_perms: Vec<Perm> = self.subcircuits.iter().map(Circuit::simulate).collect();
        let mut outputs = Vec::with_capacity(size);
        for index in 0..size {
            let pair = index % 9;
            let selector = index / 9;
            outputs.push(selector * 9 + sub_perms[selector].apply(pair));
        }
        Perm::from_outputs(outputs).expect("blockwise bijection")
    }
}

/// The cascade of simple gates applied to the control line. Each sequence
/// routes control value 0, then 1, then 2 through the active value 2 and
/// restores the line afterwards.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ControlSequence {
    /// X, X, X (three +2 shifts compose to the identity).
    TripleX,
    /// N, XT, P12.
    ShiftMix,
}

impl ControlSequence {
    fn bases(self) -> [BaseGate; 3] {
        match self {
            ControlSequence::TripleX => [BaseGate::X, BaseGate::X, BaseGate::X],
            ControlSequence::ShiftMix => [BaseGate::N, BaseGate::XT, BaseGate::P12],
        }
    }
}

/// Compose three two-line circuits into a 3-line multiplexer on lines
/// `(c, x, y)`; `simulate` of the result equals [`MuxSpec::perm`].
pub fn compose_3x3(
    c0: &Circuit,
    c1: &Circuit,
    c2: &Circuit,
    sequence: ControlSequence,
) -> Result<Circuit> {
    let spec = MuxSpec::new(3, vec![c0.clone(), c1.clone(), c2.clone()])?;
    compose_mux(&spec, sequence)
}

/// Compose a mux of any width. A two-line spec is its single subcircuit; a
/// wider spec is three shifted blocks of the next-narrower composite, each
/// lifted under one more control.
pub fn compose_mux(spec: &MuxSpec, sequence: ControlSequence) -> Result<Circuit> {
    if spec.lines == 2 {
        return Ok(spec.subcircuits[0].clone());
    }
    let block = pow3(spec.lines - 3);
    let mut result = Circuit::new(spec.lines);
    for (step, base) in sequence.bases().into_iter().enumerate() {
        result.push(Gate::simple(base, 0)?)?;
        let sub = MuxSpec::new(
            spec.lines - 1,
            spec.subcircuits[step * block..(step + 1) * block].to_vec(),
        )?;
        let inner = compose_mux(&sub, sequence)?;
        for gate in inner.gates() {
            result.push(lift(gate)?)?;
        }
    }
    Ok(result)
}

/// Shift a gate one line down and add a 2-control on the new top line.
fn lift(gate: &Gate) -> Result<Gate> {
    let mut controls: Vec<Control> = gate
        .controls()
        .iter()
        .map(|c| Control::new(c.line + 1, c.value))
        .collect();
    controls.push(Control::new(0, Trit::TWO));
    Gate::with_controls(gate.base(), gate.target() + 1, controls)
}

/// A near-neighbor violation: a controlled gate none of whose control lines
/// is adjacent to its target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub gate_index: usize,
    pub gate: Gate,
}

/// Check the near-neighbor lines constraint. Two-line circuits never
/// violate; in a lifted composite the only offenders are gates that were
/// simple gates on the bottom working line, whose sole control is the distant
/// control line.
pub fn near_neighbor_check(circuit: &Circuit) -> Vec<Violation> {
    circuit
        .gates()
        .iter()
        .enumerate()
        .filter(|(_, g)| {
            !g.controls().is_empty()
                && !g.controls().iter().any(|c| c.line.abs_diff(g.target()) == 1)
        })
        .map(|(gate_index, g)| Violation { gate_index, gate: g.clone() })
        .collect()
}

/// Exact size of the 2x2-based class on `n` lines: `(9!)^(3^(n-2))`.
pub fn class_size(lines: usize) -> BigUint {
    assert!(lines >= 2, "the class is defined for at least 2 lines");
    BigUint::from(362_880u32).pow(pow3(lines - 2) as u32)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn empty2() -> Circuit {
        Circuit::new(2)
    }

    #[test]
    fn mux_spec_validation() {
        assert!(MuxSpec::new(3, vec![empty2(); 3]).is_ok());
        assert!(MuxSpec::new(3, vec![empty2(); 2]).is_err());
        assert!(MuxSpec::new(2, vec![empty2()]).is_ok());
        assert!(MuxSpec::new(3, vec![Circuit::new(3), Circuit::new(2), Circuit::new(2)]).is_err());
    }

    #[test]
    fn mux_perm_identity_and_selective() {
        let spec = MuxSpec::new(3, vec![empty2(); 3]).unwrap();
        assert_eq!(spec.perm(), Perm::identity(27));

        // C0 applies N on x only where the control digit is 0
        let c0 = Circuit::parse("N x").unwrap();
        let spec = MuxSpec::new(3, vec![c0.clone(), empty2(), empty2()]).unwrap();
        let p = spec.perm();
        let n_on_x = c0.simulate();
        for w in 0..27 {
            let expect = if w / 9 == 0 { n_on_x.apply(w % 9) } else { w % 9 };
            assert_eq!(p.apply(w), (w / 9) * 9 + expect);
        }
    }

    #[test]
    fn two_line_mux_is_its_subcircuit() {
        let c = Circuit::parse("P12 y @ x=2\nN x\n").unwrap();
        let spec = MuxSpec::new(2, vec![c.clone()]).unwrap();
        assert_eq!(spec.perm(), c.simulate());
        assert_eq!(compose_mux(&spec, ControlSequence::TripleX).unwrap(), c);
    }

    #[test]
    fn empty_subcircuits_compose_to_identity() {
        let c =
            compose_3x3(&empty2(), &empty2(), &empty2(), ControlSequence::TripleX).unwrap();
        assert_eq!(c.len(), 3); // the three X gates on the control line
        assert_eq!(c.simulate(), Perm::identity(27));
        let c = compose_3x3(&empty2(), &empty2(), &empty2(), ControlSequence::ShiftMix).unwrap();
        assert_eq!(c.simulate(), Perm::identity(27));
    }

    #[test]
    fn composite_matches_mux_perm() {
        let c0 = Circuit::parse("N x").unwrap();
        let spec = MuxSpec::new(3, vec![c0.clone(), empty2(), empty2()]).unwrap();
        let composed = compose_3x3(&c0, &empty2(), &empty2(), ControlSequence::TripleX).unwrap();
        assert_eq!(composed.simulate(), spec.perm());

        let c1 = Circuit::parse("P12 y @ x=2\nN y\n").unwrap();
        let c2 = Circuit::parse("P01 x @ y=1\n").unwrap();
        let spec = MuxSpec::new(3, vec![c0.clone(), c1.clone(), c2.clone()]).unwrap();
        for seq in [ControlSequence::TripleX, ControlSequence::ShiftMix] {
            let composed = compose_3x3(&c0, &c1, &c2, seq).unwrap();
            assert_eq!(composed.simulate(), spec.perm(), "{seq:?}");
            // control digit restored on every word
            for w in 0..27 {
                assert_eq!(spec.perm().apply(w) / 9, w / 9);
            }
        }
    }

    #[test]
    fn four_line_recursion() {
        let mut subs = vec![empty2(); 9];
        subs[4] = Circuit::parse("N y @ x=2\n").unwrap();
        subs[7] = Circuit::parse("X x\n").unwrap();
        let spec = MuxSpec::new(4, subs).unwrap();
        let composed = compose_mux(&spec, ControlSequence::TripleX).unwrap();
        assert_eq!(composed.simulate(), spec.perm());
        assert_eq!(composed.lines(), 4);
    }

    #[test]
    fn near_neighbor_two_line_circuits_never_violate() {
        let c = Circuit::parse("P12 y @ x=2\nN x @ y=0\nX y\n").unwrap();
        assert!(near_neighbor_check(&c).is_empty());
    }

    #[test]
    fn near_neighbor_violations_from_lifted_bottom_simple_gates() {
        // a simple gate on the bottom line picks up the distant control
        let c2 = Circuit::parse("X y\n").unwrap();
        let composed = compose_3x3(&empty2(), &empty2(), &c2, ControlSequence::TripleX).unwrap();
        let violations = near_neighbor_check(&composed);
        assert_eq!(violations.len(), 1);
        assert_eq!(violations[0].gate.target(), 2);
        assert_eq!(violations[0].gate.controls(), &[Control::new(0, Trit::TWO)]);

        // gates on x stay adjacent to the control line, and controlled gates
        // on y keep their x control next door
        let fine = Circuit::parse("N x\nP12 y @ x=1\nP01 x @ y=0\n").unwrap();
        let composed =
            compose_3x3(&fine, &fine, &fine, ControlSequence::TripleX).unwrap();
        assert!(near_neighbor_check(&composed).is_empty());
    }

    #[test]
    fn class_sizes() {
        assert_eq!(class_size(2), BigUint::from(362_880u32));
        assert_eq!(class_size(3), "47784725839872000".parse::<BigUint>().unwrap());
        // (9!)^9 = ((9!)^3)^3, a 51-digit number
        assert_eq!(class_size(4), class_size(3).pow(3));
        assert_eq!(class_size(4).to_string().len(), 51);
    }
}
