//! Permutations over `{0 .. 3^n - 1}` and cycle notation.
//!
//! A permutation is the specification of a reversible function: `outputs[i]`
//! is the image of input index `i` (one-line notation). The text form is a
//! comma-separated image list such as `4,3,7,5,8,1,2,6,0`; cycles print as
//! `(0 4 8)(1 3 5)(2 7 6)`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::trit::lines_for_size;

/// A bijection on `{0 .. 3^n - 1}`, stored as a dense image table.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Perm {
    outputs: Vec<u8>,
}

impl Perm {
    pub fn identity(size: usize) -> Perm {
        check_size(size).expect("size must be a power of 3, at least 9");
        Perm { outputs: (0..size as u8).collect() }
    }

    /// Build from a one-line image table, checking bijectivity.
    pub fn from_outputs(outputs: Vec<usize>) -> Result<Perm> {
        check_size(outputs.len())?;
        let mut seen = vec![false; outputs.len()];
        for &v in &outputs {
            if v >= outputs.len() {
                return Err(Error::InvalidPerm(format!("image {v} out of range")));
            }
            if seen[v] {
                return Err(Error::InvalidPerm(format!("image {v} repeated")));
            }
            seen[v] = true;
        }
        Ok(Perm { outputs: outputs.into_iter().map(|v| v as u8).collect() })
    }

    pub(crate) fn from_table_unchecked(outputs: Vec<u8>) -> Perm {
        Perm { outputs }
    }

    #[inline]
    pub fn apply(&self, point: usize) -> usize {
        self.outputs[point] as usize
    }

    pub fn size(&self) -> usize {
        self.outputs.len()
    }

    /// Number of circuit lines for this domain.
    pub fn lines(&self) -> usize {
        lines_for_size(self.outputs.len()).expect("perm size is a power of 3")
    }

    pub fn outputs(&self) -> impl Iterator<Item = usize> + '_ {
        self.outputs.iter().map(|&v| v as usize)
    }

    pub(crate) fn table(&self) -> &[u8] {
        &self.outputs
    }

    pub fn is_identity(&self) -> bool {
        self.outputs.iter().enumerate().all(|(i, &v)| i == v as usize)
    }

    /// Compose with `other`, `self` applied first.
    pub fn then(&self, other: &Perm) -> Result<Perm> {
        if self.size() != other.size() {
            return Err(Error::SizeMismatch { left: self.size(), right: other.size() });
        }
        Ok(Perm { outputs: self.outputs.iter().map(|&v| other.outputs[v as usize]).collect() })
    }

    pub fn inverse(&self) -> Perm {
        let mut outputs = vec![0u8; self.outputs.len()];
        for (i, &v) in self.outputs.iter().enumerate() {
            outputs[v as usize] = i as u8;
        }
        Perm { outputs }
    }

    /// Build a permutation from a product of cycles, left factor applied
    /// first. Points absent from every cycle are fixed. The cycles need not
    /// be disjoint; a point repeated inside a single cycle is an error.
    pub fn from_cycles(cycles: &[Cycle], size: usize) -> Result<Perm> {
        check_size(size)?;
        let mut acc = Perm::identity(size);
        for cycle in cycles {
            let mut table: Vec<u8> = (0..size as u8).collect();
            for (k, &p) in cycle.points().iter().enumerate() {
                let next = cycle.points()[(k + 1) % cycle.len()];
                if p >= size {
                    return Err(Error::InvalidCycle(format!("point {p} out of range")));
                }
                table[p] = next as u8;
            }
            acc = acc.then(&Perm { outputs: table })?;
        }
        Ok(acc)
    }

    /// Lexicographic rank of the image table (factorial number system).
    pub fn rank(&self) -> u64 {
        let n = self.outputs.len();
        let mut rank = 0u64;
        for i in 0..n {
            let smaller_after = self.outputs[i + 1..]
                .iter()
                .filter(|&&v| v < self.outputs[i])
                .count() as u64;
            rank = rank * (n - i) as u64 + smaller_after;
        }
        rank
    }

    /// Inverse of [`Perm::rank`]: the `rank`-th permutation of the given size
    /// in lexicographic order. Rank 0 is the identity.
    pub fn from_rank(rank: u64, size: usize) -> Result<Perm> {
        check_size(size)?;
        let mut factorial = 1u64;
        for k in 1..=size as u64 {
            factorial *= k;
        }
        if rank >= factorial {
            return Err(Error::InvalidPerm(format!("rank {rank} >= {size}!")));
        }
        let mut rest = rank;
        let mut pool: Vec<u8> = (0..size as u8).collect();
        let mut outputs = Vec::with_capacity(size);
        for i in 0..size {
            factorial /= (size - i) as u64;
            let idx = (rest / factorial) as usize;
            rest %= factorial;
            outputs.push(pool.remove(idx));
        }
        Ok(Perm { outputs })
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.outputs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl FromStr for Perm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Perm> {
        let outputs = s
            .split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidPerm(format!("bad image `{}`", tok.trim())))
            })
            .collect::<Result<Vec<_>>>()?;
        Perm::from_outputs(outputs)
    }
}

fn check_size(size: usize) -> Result<()> {
    match lines_for_size(size) {
        Some(n) if n >= 2 => Ok(()),
        _ => Err(Error::InvalidPerm(format!(
            "domain size {size} is not 3^n with n >= 2"
        ))),
    }
}

/// A cyclic permutation of at least two distinct points.
///
/// The stored point order matters: `(7 1 3 5)` and `(1 3 5 7)` denote the
/// same permutation but factor differently into transpositions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cycle {
    points: Vec<usize>,
}

impl Cycle {
    pub fn new(points: Vec<usize>) -> Result<Cycle> {
        if points.len() < 2 {
            return Err(Error::InvalidCycle(format!(
                "cycle needs at least 2 points, got {}",
                points.len()
            )));
        }
        let mut sorted = points.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidCycle(format!("repeated point in ({points:?})")));
        }
        Ok(Cycle { points })
    }

    pub fn points(&self) -> &[usize] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false // a valid cycle always has at least two points
    }

    pub fn is_transposition(&self) -> bool {
        self.points.len() == 2
    }

    /// Rotate so that the point at `start` comes first, preserving the cyclic
    /// order (and therefore the permutation).
    pub fn rotated(&self, start: usize) -> Cycle {
        let mut points = Vec::with_capacity(self.points.len());
        for k in 0..self.points.len() {
            points.push(self.points[(start + k) % self.points.len()]);
        }
        Cycle { points }
    }

    /// Canonical form: rotated to start at the minimum point.
    pub fn canonical(&self) -> Cycle {
        let min_at = self
            .points
            .iter()
            .enumerate()
            .min_by_key(|&(_, p)| p)
            .map(|(i, _)| i)
            .unwrap();
        self.rotated(min_at)
    }

    /// The permutation of this single cycle on a domain of `size` points.
    pub fn to_perm(&self, size: usize) -> Result<Perm> {
        Perm::from_cycles(std::slice::from_ref(self), size)
    }
}

impl fmt::Display for Cycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.points.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// Parse a cycle product such as `(0 4 8)(1 3 5)`.
pub fn parse_cycles(s: &str) -> Result<Vec<Cycle>> {
    let s = s.trim();
    let mut cycles = Vec::new();
    let mut rest = s;
    while !rest.is_empty() {
        let open = rest
            .find('(')
            .ok_or_else(|| Error::InvalidCycle(format!("expected `(` in `{rest}`")))?;
        if !rest[..open].trim().is_empty() {
            return Err(Error::InvalidCycle(format!("stray text `{}`", &rest[..open])));
        }
        let close = rest
            .find(')')
            .ok_or_else(|| Error::InvalidCycle("unterminated cycle".into()))?;
        let body = &rest[open + 1..close];
        let points = body
            .split_whitespace()
            .map(|tok| {
                tok.parse::<usize>()
                    .map_err(|_| Error::InvalidCycle(format!("bad point `{tok}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        cycles.push(Cycle::new(points)?);
        rest = &rest[close + 1..];
        rest = rest.trim_start();
    }
    Ok(cycles)
}
