//! Gates, circuits, and their permutation semantics.
//!
//! A gate applies one of the five non-identity base gates to a target line,
//! optionally guarded by value controls on other lines: the gate is active on
//! a word exactly when every control line carries its control value,
//! otherwise it behaves as the identity. A circuit is a left-to-right
//! cascade; the first gate in the sequence is applied first.
//!
//! The text format is one gate per line, e.g. `P12 y @ x=2` for a controlled
//! gate or `N x` for a simple one. Two-line circuits name their lines `x`
//! (top) and `y` (bottom); wider circuits use `l0 .. l(n-1)`.

use std::fmt;

use crate::error::{Error, Result};
use crate::perm::Perm;
use crate::trit::{pow3, BaseGate, Trit};

/// A value control: the gate fires only when `line` carries `value`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Control {
    pub line: usize,
    pub value: Trit,
}

impl Control {
    pub fn new(line: usize, value: Trit) -> Control {
        Control { line, value }
    }
}

/// A base gate on a target line with a (possibly empty) set of controls.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gate {
    base: BaseGate,
    target: usize,
    controls: Vec<Control>,
}

impl Gate {
    /// An uncontrolled ("simple") gate.
    pub fn simple(base: BaseGate, target: usize) -> Result<Gate> {
        Gate::with_controls(base, target, vec![])
    }

    /// A gate with a single control.
    pub fn controlled(base: BaseGate, target: usize, line: usize, value: Trit) -> Result<Gate> {
        Gate::with_controls(base, target, vec![Control::new(line, value)])
    }

    pub fn with_controls(base: BaseGate, target: usize, mut controls: Vec<Control>) -> Result<Gate> {
        if base.is_identity() {
            return Err(Error::InvalidGate("identity base needs no gate".into()));
        }
        controls.sort_unstable();
        for pair in controls.windows(2) {
            if pair[0].line == pair[1].line {
                return Err(Error::InvalidGate(format!(
                    "duplicate control on line {}",
                    pair[0].line
                )));
            }
        }
        if controls.iter().any(|c| c.line == target) {
            return Err(Error::InvalidGate(format!("control on target line {target}")));
        }
        Ok(Gate { base, target, controls })
    }

    pub fn base(&self) -> BaseGate {
        self.base
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn controls(&self) -> &[Control] {
        &self.controls
    }

    pub fn is_simple(&self) -> bool {
        self.controls.is_empty()
    }

    /// Same activation set, inverse base.
    pub fn inverted(&self) -> Gate {
        Gate { base: self.base.inverse(), target: self.target, controls: self.controls.clone() }
    }

    /// Same target and controls, different base.
    pub fn with_base(&self, base: BaseGate) -> Result<Gate> {
        Gate::with_controls(base, self.target, self.controls.clone())
    }

    pub fn max_line(&self) -> usize {
        self.controls.iter().map(|c| c.line).fold(self.target, usize::max)
    }

    /// Whether the gate fires on the word with the given digits.
    #[inline]
    pub(crate) fn active_on(&self, digits: &[u8]) -> bool {
        self.controls.iter().all(|c| digits[c.line] == c.value.value())
    }

    /// The permutation this gate induces on an `n`-line circuit.
    pub fn semantics(&self, lines: usize) -> Result<Perm> {
        if self.max_line() >= lines {
            return Err(Error::InvalidCircuit(format!(
                "gate touches line {} but the circuit has {lines} lines",
                self.max_line()
            )));
        }
        let size = pow3(lines);
        let mut outputs = Vec::with_capacity(size);
        let mut digits = vec![0u8; lines];
        for index in 0..size {
            decode(index, &mut digits);
            if self.active_on(&digits) {
                digits[self.target] = self.base.apply_raw(digits[self.target]);
            }
            outputs.push(encode(&digits) as u8);
        }
        Ok(Perm::from_table_unchecked(outputs))
    }

    fn format(&self, f: &mut fmt::Formatter<'_>, lines: usize) -> fmt::Result {
        write!(f, "{} {}", self.base, line_name(self.target, lines))?;
        for (i, c) in self.controls.iter().enumerate() {
            let sep = if i == 0 { " @ " } else { ", " };
            write!(f, "{sep}{}={}", line_name(c.line, lines), c.value)?;
        }
        Ok(())
    }
}

#[inline]
fn decode(index: usize, digits: &mut [u8]) {
    let mut rest = index;
    for d in digits.iter_mut().rev() {
        *d = (rest % 3) as u8;
        rest /= 3;
    }
}

#[inline]
fn encode(digits: &[u8]) -> usize {
    digits.iter().fold(0usize, |acc, &d| acc * 3 + d as usize)
}

fn line_name(line: usize, lines: usize) -> String {
    if lines == 2 {
        match line {
            0 => "x".into(),
            _ => "y".into(),
        }
    } else {
        format!("l{line}")
    }
}

fn parse_line_name(tok: &str) -> Option<usize> {
    match tok {
        "x" => Some(0),
        "y" => Some(1),
        _ => tok.strip_prefix('l').and_then(|rest| rest.parse().ok()),
    }
}

/// An ordered cascade of gates on a fixed number of lines.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Circuit {
    lines: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(lines: usize) -> Circuit {
        assert!(lines >= 2, "a circuit needs at least 2 lines");
        Circuit { lines, gates: Vec::new() }
    }

    pub fn from_gates(lines: usize, gates: Vec<Gate>) -> Result<Circuit> {
        let mut c = Circuit::new(lines);
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn lines(&self) -> usize {
        self.lines
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        if gate.max_line() >= self.lines {
            return Err(Error::InvalidCircuit(format!(
                "gate touches line {} but the circuit has {} lines",
                gate.max_line(),
                self.lines
            )));
        }
        self.gates.push(gate);
        Ok(())
    }

    pub fn extend(&mut self, other: &Circuit) -> Result<()> {
        if other.lines != self.lines {
            return Err(Error::SizeMismatch { left: self.lines, right: other.lines });
        }
        self.gates.extend(other.gates.iter().cloned());
        Ok(())
    }

    /// Simulate the cascade: fold each gate over every input word.
    pub fn simulate(&self) -> Perm {
        let size = pow3(self.lines);
        let mut outputs = Vec::with_capacity(size);
        let mut digits = vec![0u8; self.lines];
        for index in 0..size {
            decode(index, &mut digits);
            for gate in &self.gates {
                if gate.active_on(&digits) {
                    digits[gate.target] = gate.base.apply_raw(digits[gate.target]);
                }
            }
            outputs.push(encode(&digits) as u8);
        }
        Perm::from_table_unchecked(outputs)
    }

    /// Gates reversed with each base inverted; simulates the inverse
    /// permutation.
    pub fn inverse(&self) -> Circuit {
        Circuit {
            lines: self.lines,
            gates: self.gates.iter().rev().map(Gate::inverted).collect(),
        }
    }

    /// Parse the one-gate-per-line text format. An optional `lines <n>`
    /// header fixes the line count; otherwise it is inferred from the line
    /// names used.
    pub fn parse(text: &str) -> Result<Circuit> {
        struct Parsed {
            gate: (BaseGate, usize, Vec<Control>),
        }
        let mut declared: Option<usize> = None;
        let mut parsed: Vec<Parsed> = Vec::new();
        let mut max_line = 0usize;

        for (lineno, raw) in text.lines().enumerate() {
            let lineno = lineno + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(rest) = line.strip_prefix("lines") {
                let n: usize = rest.trim().parse().map_err(|_| Error::Parse {
                    line: lineno,
                    msg: format!("bad line count `{}`", rest.trim()),
                })?;
                if n < 2 {
                    return Err(Error::Parse { line: lineno, msg: "need at least 2 lines".into() });
                }
                declared = Some(n);
                continue;
            }
            let (head, ctrl_part) = match line.split_once('@') {
                Some((h, c)) => (h.trim(), Some(c.trim())),
                None => (line, None),
            };
            let mut toks = head.split_whitespace();
            let base_tok = toks
                .next()
                .ok_or_else(|| Error::Parse { line: lineno, msg: "missing base gate".into() })?;
            let base = BaseGate::parse(base_tok)
                .map_err(|e| Error::Parse { line: lineno, msg: e.to_string() })?;
            let target_tok = toks
                .next()
                .ok_or_else(|| Error::Parse { line: lineno, msg: "missing target line".into() })?;
            if toks.next().is_some() {
                return Err(Error::Parse { line: lineno, msg: "unexpected trailing tokens".into() });
            }
            let target = parse_line_name(target_tok).ok_or_else(|| Error::Parse {
                line: lineno,
                msg: format!("bad line name `{target_tok}`"),
            })?;
            max_line = max_line.max(target);

            let mut controls = Vec::new();
            if let Some(ctrl_part) = ctrl_part {
                for spec in ctrl_part.split(',') {
                    let spec = spec.trim();
                    let (name, val) = spec.split_once('=').ok_or_else(|| Error::Parse {
                        line: lineno,
                        msg: format!("bad control `{spec}` (expected line=value)"),
                    })?;
                    let cl = parse_line_name(name.trim()).ok_or_else(|| Error::Parse {
                        line: lineno,
                        msg: format!("bad line name `{}`", name.trim()),
                    })?;
                    let v: u8 = val.trim().parse().map_err(|_| Error::Parse {
                        line: lineno,
                        msg: format!("bad control value `{}`", val.trim()),
                    })?;
                    let value = Trit::new(v)
                        .map_err(|e| Error::Parse { line: lineno, msg: e.to_string() })?;
                    max_line = max_line.max(cl);
                    controls.push(Control::new(cl, value));
                }
            }
            parsed.push(Parsed { gate: (base, target, controls) });
        }

        let lines = declared.unwrap_or((max_line + 1).max(2));
        let mut circuit = Circuit::new(lines);
        for p in parsed {
            let (base, target, controls) = p.gate;
            let gate = Gate::with_controls(base, target, controls)
                .map_err(|e| Error::InvalidCircuit(e.to_string()))?;
            circuit.push(gate)?;
        }
        Ok(circuit)
    }

    /// Columnar diagram with one column per gate. The target cell shows the
    /// base symbol; control cells show a dot per value (2 black, 1 grey,
    /// 0 white).
    pub fn diagram(&self) -> String {
        let symbol = |b: BaseGate| match b {
            BaseGate::N => "N",
            BaseGate::P01 => "01",
            BaseGate::P12 => "02",
            BaseGate::X => "+2",
            BaseGate::XT => "+1",
            BaseGate::I => "",
        };
        let dot = |v: Trit| match v.value() {
            2 => "\u{25CF}", // ●
            1 => "\u{25D0}", // ◐
            _ => "\u{25CB}", // ○
        };
        let mut rows: Vec<String> = (0..self.lines)
            .map(|l| format!("{:>2} ", line_name(l, self.lines)))
            .collect();
        for gate in &self.gates {
            let mut cells: Vec<String> = vec![String::new(); self.lines];
            cells[gate.target] = symbol(gate.base).to_string();
            for c in &gate.controls {
                cells[c.line] = dot(c.value).to_string();
            }
            let width = cells.iter().map(|c| c.chars().count()).max().unwrap_or(1).max(1);
            for (row, cell) in rows.iter_mut().zip(cells) {
                row.push('\u{2500}');
                let pad = width - cell.chars().count();
                let left = pad / 2 + pad % 2;
                for _ in 0..left {
                    row.push('\u{2500}');
                }
                if cell.is_empty() {
                    row.push('\u{2500}');
                } else {
                    row.push_str(&cell);
                }
                for _ in 0..(pad - left) {
                    row.push('\u{2500}');
                }
                row.push('\u{2500}');
            }
        }
        for row in rows.iter_mut() {
            row.push('\u{2500}');
        }
        rows.join("\n")
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "lines {}", self.lines)?;
        for gate in &self.gates {
            gate.format(f, self.lines)?;
            writeln!(f)?;
        }
        Ok(())
    }
}
