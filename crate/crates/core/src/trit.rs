//! Ternary digits, the six base gates, and positional trit words.
//!
//! A base gate is one of the six permutations of `{0, 1, 2}`. Together they
//! form the symmetric group S3, which is exactly the set of transformations
//! a single-line ternary reversible gate can perform:
//!
//! | gate | map (mod 3) | action on `{0,1,2}` |
//! |------|-------------|---------------------|
//! | N    | 2t + 2      | swaps 0 and 2       |
//! | P01  | 2t + 1      | swaps 0 and 1       |
//! | P12  | 2t          | swaps 1 and 2       |
//! | X    | t + 2       | cycle (0 2 1)       |
//! | XT   | t + 1       | cycle (0 1 2)       |
//! | I    | t           | identity            |

use std::fmt;

use crate::error::{Error, Result};

/// A ternary digit. The inner value is always in `{0, 1, 2}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Trit(u8);

impl Trit {
    pub const ZERO: Trit = Trit(0);
    pub const ONE: Trit = Trit(1);
    pub const TWO: Trit = Trit(2);

    pub fn new(value: u8) -> Result<Trit> {
        if value < 3 {
            Ok(Trit(value))
        } else {
            Err(Error::InvalidTrit(value))
        }
    }

    #[inline]
    pub fn value(self) -> u8 {
        self.0
    }

    /// All three trits in ascending order.
    pub fn all() -> [Trit; 3] {
        [Trit(0), Trit(1), Trit(2)]
    }
}

impl fmt::Display for Trit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// One of the six single-line ternary reversible gates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BaseGate {
    N,
    P01,
    P12,
    X,
    XT,
    I,
}

impl BaseGate {
    /// The five non-identity bases, in canonical library order.
    pub const NON_IDENTITY: [BaseGate; 5] =
        [BaseGate::N, BaseGate::P01, BaseGate::P12, BaseGate::X, BaseGate::XT];

    /// Apply the gate to a single trit.
    #[inline]
    pub fn apply(self, t: Trit) -> Trit {
        Trit(self.apply_raw(t.0))
    }

    #[inline]
    pub(crate) fn apply_raw(self, t: u8) -> u8 {
        match self {
            BaseGate::N => (2 * t + 2) % 3,
            BaseGate::P01 => (2 * t + 1) % 3,
            BaseGate::P12 => (2 * t) % 3,
            BaseGate::X => (t + 2) % 3,
            BaseGate::XT => (t + 1) % 3,
            BaseGate::I => t,
        }
    }

    /// Compose two bases, `self` applied first.
    pub fn then(self, other: BaseGate) -> BaseGate {
        Self::from_images([
            other.apply_raw(self.apply_raw(0)),
            other.apply_raw(self.apply_raw(1)),
            other.apply_raw(self.apply_raw(2)),
        ])
    }

    /// The unique base `g` with `self.then(g) == I`.
    pub fn inverse(self) -> BaseGate {
        match self {
            BaseGate::X => BaseGate::XT,
            BaseGate::XT => BaseGate::X,
            other => other, // N, P01, P12 and I are involutions
        }
    }

    pub fn is_identity(self) -> bool {
        self == BaseGate::I
    }

    /// Recover a base from its images of 0, 1, 2.
    pub fn from_images(images: [u8; 3]) -> BaseGate {
        match images {
            [0, 1, 2] => BaseGate::I,
            [2, 1, 0] => BaseGate::N,
            [1, 0, 2] => BaseGate::P01,
            [0, 2, 1] => BaseGate::P12,
            [2, 0, 1] => BaseGate::X,
            [1, 2, 0] => BaseGate::XT,
            other => panic!("images {other:?} do not describe a permutation of 0..3"),
        }
    }

    /// The base that swaps the two given distinct values and fixes the third.
    pub fn swapping(a: Trit, b: Trit) -> Result<BaseGate> {
        let (lo, hi) = if a.0 < b.0 { (a.0, b.0) } else { (b.0, a.0) };
        match (lo, hi) {
            (0, 1) => Ok(BaseGate::P01),
            (0, 2) => Ok(BaseGate::N),
            (1, 2) => Ok(BaseGate::P12),
            _ => Err(Error::InvalidGate(format!("no base swaps {a} with {b}"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BaseGate::N => "N",
            BaseGate::P01 => "P01",
            BaseGate::P12 => "P12",
            BaseGate::X => "X",
            BaseGate::XT => "XT",
            BaseGate::I => "I",
        }
    }

    pub fn parse(s: &str) -> Result<BaseGate> {
        match s {
            "N" => Ok(BaseGate::N),
            "P01" => Ok(BaseGate::P01),
            "P12" => Ok(BaseGate::P12),
            "X" => Ok(BaseGate::X),
            "XT" => Ok(BaseGate::XT),
            "I" => Ok(BaseGate::I),
            other => Err(Error::InvalidGate(format!("unknown base gate `{other}`"))),
        }
    }
}

impl fmt::Display for BaseGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A fixed-length vector of trits naming a circuit line assignment.
///
/// Digit 0 is the top line (`x` for two-line circuits); the index encoding is
/// positional base 3 with the top line most significant, so the two-line word
/// `(1, 2)` has index 5 and `(2, 1)` has index 7.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word {
    digits: Vec<Trit>,
}

impl Word {
    pub fn new(digits: Vec<Trit>) -> Result<Word> {
        if digits.len() < 2 {
            return Err(Error::InvalidCircuit(format!(
                "a word needs at least 2 digits, got {}",
                digits.len()
            )));
        }
        Ok(Word { digits })
    }

    pub fn digits(&self) -> &[Trit] {
        &self.digits
    }

    pub fn lines(&self) -> usize {
        self.digits.len()
    }

    /// Positional base-3 index of this word, top line most significant.
    pub fn index(&self) -> usize {
        self.digits.iter().fold(0, |acc, d| acc * 3 + d.value() as usize)
    }

    /// Inverse of [`Word::index`] for a circuit with `lines` lines.
    pub fn from_index(index: usize, lines: usize) -> Result<Word> {
        let size = pow3(lines);
        if lines < 2 || index >= size {
            return Err(Error::IndexOutOfRange { index, lines });
        }
        let mut digits = vec![Trit::ZERO; lines];
        let mut rest = index;
        for d in digits.iter_mut().rev() {
            *d = Trit((rest % 3) as u8);
            rest /= 3;
        }
        Ok(Word { digits })
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.digits {
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

/// 3^lines.
pub fn pow3(lines: usize) -> usize {
    3usize.pow(lines as u32)
}

/// Number of lines for a domain of `size` points, if `size` is a power of 3.
pub fn lines_for_size(size: usize) -> Option<usize> {
    let mut n = 0;
    let mut s = 1;
    while s < size {
        s *= 3;
        n += 1;
    }
    (s == size && n >= 1).then_some(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_gate_maps() {
        // N: 2x+2, P01: 2x+1, P12: 2x, X: x+2, XT: x+1, I: x
        assert_eq!(BaseGate::N.apply(Trit::ZERO), Trit::TWO);
        assert_eq!(BaseGate::I.apply(Trit::ONE), Trit::ONE);
        assert_eq!(BaseGate::P12.apply(Trit::ONE), Trit::TWO);
        assert_eq!(BaseGate::P01.apply(Trit::ZERO), Trit::ONE);
        assert_eq!(BaseGate::X.apply(Trit::ZERO), Trit::TWO);
        assert_eq!(BaseGate::XT.apply(Trit::TWO), Trit::ZERO);
    }

    #[test]
    fn composition_examples() {
        assert_eq!(BaseGate::P01.then(BaseGate::P12), BaseGate::X);
        assert_eq!(BaseGate::P12.then(BaseGate::N), BaseGate::X);
        assert_eq!(BaseGate::X.then(BaseGate::XT), BaseGate::I);
    }

    #[test]
    fn inverses() {
        assert_eq!(BaseGate::N.inverse(), BaseGate::N);
        assert_eq!(BaseGate::X.inverse(), BaseGate::XT);
        assert_eq!(BaseGate::I.inverse(), BaseGate::I);
        for g in [BaseGate::N, BaseGate::P01, BaseGate::P12, BaseGate::X, BaseGate::XT, BaseGate::I]
        {
            assert_eq!(g.then(g.inverse()), BaseGate::I);
            assert_eq!(g.inverse().then(g), BaseGate::I);
        }
    }

    #[test]
    fn group_axioms_exhaustive() {
        let all = [BaseGate::N, BaseGate::P01, BaseGate::P12, BaseGate::X, BaseGate::XT, BaseGate::I];
        for a in all {
            assert_eq!(a.then(BaseGate::I), a);
            assert_eq!(BaseGate::I.then(a), a);
            for b in all {
                // closure: `then` always yields a valid base
                let ab = a.then(b);
                for c in all {
                    assert_eq!(ab.then(c), a.then(b.then(c)));
                }
            }
        }
    }

    #[test]
    fn word_index_examples() {
        let w = Word::new(vec![Trit::ONE, Trit::TWO]).unwrap();
        assert_eq!(w.index(), 5);
        let w = Word::new(vec![Trit::ZERO, Trit::ZERO]).unwrap();
        assert_eq!(w.index(), 0);
        let w = Word::new(vec![Trit::TWO, Trit::ONE]).unwrap();
        assert_eq!(w.index(), 7);
    }

    #[test]
    fn word_round_trip() {
        for n in 2..=4 {
            for i in 0..pow3(n) {
                let w = Word::from_index(i, n).unwrap();
                assert_eq!(w.index(), i);
                assert_eq!(w.lines(), n);
            }
        }
        assert!(Word::from_index(9, 2).is_err());
    }

    #[test]
    fn swapping_bases() {
        assert_eq!(BaseGate::swapping(Trit::ZERO, Trit::TWO).unwrap(), BaseGate::N);
        assert_eq!(BaseGate::swapping(Trit::ONE, Trit::ZERO).unwrap(), BaseGate::P01);
        assert_eq!(BaseGate::swapping(Trit::ONE, Trit::TWO).unwrap(), BaseGate::P12);
        assert!(BaseGate::swapping(Trit::ONE, Trit::ONE).is_err());
    }

    #[test]
    fn trit_bounds() {
        assert!(Trit::new(2).is_ok());
        assert!(Trit::new(3).is_err());
    }
}
