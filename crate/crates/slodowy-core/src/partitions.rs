//! Partitions of n, dominance order, and covering relations.
//!
//! Covers are produced from the classical single-box-move characterisation:
//! a box slides from a donor row `j` to a receiver row `i < j`, subject to
//! `j = i + 1` or the resulting rows differing by exactly 2. The brute-force
//! transitive reduction of the dominance poset lives in the test suite as
//! the independent oracle.

use crate::error::{CoreError, Result};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;

/// Largest n accepted by the enumeration entry points.
pub const MAX_N: usize = 20;

/// A partition of a positive integer: weakly decreasing positive parts.
///
/// Rows are 1-based in all public APIs, matching the usual lambda_1, ...,
/// lambda_k indexing.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    /// Build from parts, validating the invariants.
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() {
            return Err(CoreError::Input("partition must have at least one part".into()));
        }
        if parts.contains(&0) {
            return Err(CoreError::Input(format!("zero part in {parts:?}")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(CoreError::Input(format!("parts not weakly decreasing: {parts:?}")));
        }
        Ok(Partition { parts })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Sum of the parts.
    pub fn n(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Number of rows.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        false // a valid partition always has a part
    }

    /// 1-based row access; rows past the last are zero.
    pub fn part(&self, row: usize) -> usize {
        assert!(row >= 1, "rows are 1-based");
        self.parts.get(row - 1).copied().unwrap_or(0)
    }

    /// Conjugate (transpose) partition: column lengths of the diagram.
    pub fn conjugate(&self) -> Partition {
        let cols = self.parts[0];
        let parts = (1..=cols)
            .map(|c| self.parts.iter().filter(|&&p| p >= c).count())
            .collect();
        Partition { parts }
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, p) in self.parts.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.parts.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let parts = Vec::<usize>::deserialize(d)?;
        Partition::new(parts).map_err(D::Error::custom)
    }
}

/// Donor/receiver rows of a dominance cover: the box moves from row
/// `donor` down to row `receiver` (1-based, `receiver < donor`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverRows {
    pub receiver: usize,
    pub donor: usize,
}

/// All partitions of `n`, each exactly once, lexicographically descending.
pub fn all_partitions(n: usize) -> Result<Vec<Partition>> {
    if n == 0 || n > MAX_N {
        return Err(CoreError::Input(format!("n must be in 1..={MAX_N}, got {n}")));
    }
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn rec(remaining: usize, max: usize, current: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition { parts: current.clone() });
            return;
        }
        for p in (1..=remaining.min(max)).rev() {
            current.push(p);
            rec(remaining - p, p, current, out);
            current.pop();
        }
    }
    rec(n, n, &mut current, &mut out);
    Ok(out)
}

/// Dominance order: `a <= b` iff every prefix sum of `a` is at most the
/// corresponding prefix sum of `b`, padding the shorter with zeros.
pub fn dominance_leq(a: &Partition, b: &Partition) -> Result<bool> {
    if a.n() != b.n() {
        return Err(CoreError::Input(format!(
            "dominance comparison needs equal size: |{a}| = {} vs |{b}| = {}",
            a.n(),
            b.n()
        )));
    }
    let rows = a.len().max(b.len());
    let (mut sa, mut sb) = (0usize, 0usize);
    for r in 1..=rows {
        sa += a.part(r);
        sb += b.part(r);
        if sa > sb {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The partitions covering `mu` in dominance order.
///
/// Each cover is a single box move from donor row `j` to receiver row
/// `i < j` with either `j = i + 1` or `lambda_j = lambda_i - 2`; the box
/// move determines the rows uniquely, so no deduplication is needed.
pub fn covers_above(mu: &Partition) -> Vec<Partition> {
    let k = mu.len();
    let mut out = Vec::new();
    for i in 1..=k {
        // receiver must stay weakly decreasing
        if i > 1 && mu.part(i - 1) < mu.part(i) + 1 {
            continue;
        }
        for j in i + 1..=k {
            if mu.part(j) == 0 || mu.part(j) - 1 < mu.part(j + 1) {
                continue;
            }
            let mut parts = mu.parts.clone();
            parts[i - 1] += 1;
            parts[j - 1] -= 1;
            while let Some(&0) = parts.last() {
                parts.pop();
            }
            let lam = Partition { parts };
            debug_assert!(lam.parts.windows(2).all(|w| w[0] >= w[1]));
            let li = lam.part(i);
            let lj = lam.part(j);
            if j == i + 1 || lj + 2 == li {
                out.push(lam);
            }
        }
    }
    out.sort();
    out.reverse(); // lexicographically descending, consistent with all_partitions
    out
}

/// The unique (receiver, donor) rows of a cover `mu` lessdot `lam`.
pub fn cover_rows(mu: &Partition, lam: &Partition) -> Result<CoverRows> {
    if !covers_above(mu).contains(lam) {
        return Err(CoreError::Relation(format!("{lam} does not cover {mu} in dominance order")));
    }
    let rows = mu.len().max(lam.len());
    let mut receiver = None;
    let mut donor = None;
    for r in 1..=rows {
        match (lam.part(r), mu.part(r)) {
            (l, m) if l == m + 1 => receiver = Some(r),
            (l, m) if l + 1 == m => donor = Some(r),
            (l, m) if l == m => {}
            _ => {
                return Err(CoreError::Relation(format!("{mu} and {lam} differ by more than one box")))
            }
        }
    }
    match (receiver, donor) {
        (Some(i), Some(j)) if i < j => Ok(CoverRows { receiver: i, donor: j }),
        _ => Err(CoreError::Relation(format!("no single box move takes {mu} to {lam}"))),
    }
}

/// Conjugate partition (free function mirroring the operation table).
pub fn conjugate(p: &Partition) -> Partition {
    p.conjugate()
}

/// Dimension of the adjoint orbit of a nilpotent with Jordan type `p`
/// inside gl_n (equivalently sl_n): `n^2 - sum (p^T_i)^2`.
pub fn orbit_dim(p: &Partition) -> usize {
    let n = p.n();
    let sq: usize = p.conjugate().parts().iter().map(|&c| c * c).sum();
    n * n - sq
}

/// Every cover pair `(mu, lam)` with `|mu| = n`, sorted.
pub fn all_covers(n: usize) -> Result<Vec<(Partition, Partition)>> {
    let mut out = Vec::new();
    for mu in all_partitions(n)? {
        for lam in covers_above(&mu) {
            out.push((mu.clone(), lam));
        }
    }
    out.sort();
    Ok(out)
}
