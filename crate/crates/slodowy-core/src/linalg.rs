//! Sparse exact linear algebra over the rationals.
//!
//! Everything downstream (centralizers, good-grading ranks, invariant
//! spaces, lift solves) funnels into the reduced row echelon form computed
//! here. The echelon form is fully reduced with unit pivots and rows sorted
//! by pivot column, so it is a canonical representative of its row span:
//! two subspaces are equal iff their `Echelon`s are equal.

use crate::rat::Rat;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// Sparse vector: index -> nonzero rational coefficient.
pub type SparseVec = BTreeMap<usize, Rat>;

/// `dst += c * src`, dropping entries that cancel to zero.
pub fn add_scaled(dst: &mut SparseVec, src: &SparseVec, c: &Rat) {
    if c.is_zero() {
        return;
    }
    for (&i, v) in src {
        let entry = dst.entry(i).or_insert_with(Rat::zero);
        *entry += v * c;
        if entry.is_zero() {
            dst.remove(&i);
        }
    }
}

/// Scale a sparse vector by a nonzero constant.
pub fn scaled(v: &SparseVec, c: &Rat) -> SparseVec {
    if c.is_zero() {
        return SparseVec::new();
    }
    v.iter().map(|(&i, x)| (i, x * c)).collect()
}

/// Leading (smallest-index) entry.
pub fn leading(v: &SparseVec) -> Option<(usize, &Rat)> {
    v.iter().next().map(|(&i, c)| (i, c))
}

/// Reduced row echelon form of a set of sparse rows.
///
/// Invariants: each row's pivot coefficient is 1, pivot columns occur in no
/// other row, and rows are sorted by pivot column.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Echelon {
    rows: Vec<SparseVec>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new() -> Self {
        Echelon::default()
    }

    /// Build the canonical echelon form of the span of `rows`.
    pub fn from_rows<I: IntoIterator<Item = SparseVec>>(rows: I) -> Self {
        let mut e = Echelon::new();
        for r in rows {
            e.insert(r);
        }
        e
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Residual of `v` after eliminating every pivot column.
    pub fn residual(&self, v: &SparseVec) -> SparseVec {
        let mut r = v.clone();
        // Pivot columns are sorted, and eliminating one cannot reintroduce
        // an earlier one, so a single left-to-right sweep suffices.
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if let Some(c) = r.get(&p).cloned() {
                let neg = -c;
                add_scaled(&mut r, row, &neg);
            }
        }
        r
    }

    /// True iff `v` lies in the row span.
    pub fn contains(&self, v: &SparseVec) -> bool {
        self.residual(v).is_empty()
    }

    /// Insert a row; returns `true` if it enlarged the span.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        let mut r = self.residual(&v);
        let Some((pivot, lead)) = leading(&r).map(|(i, c)| (i, c.clone())) else {
            return false;
        };
        let inv = lead.recip();
        r = scaled(&r, &inv);
        // Back-substitute the new pivot out of the existing rows.
        for row in &mut self.rows {
            if let Some(c) = row.get(&pivot).cloned() {
                let neg = -c;
                add_scaled(row, &r, &neg);
            }
        }
        let at = self.pivots.partition_point(|&p| p < pivot);
        self.pivots.insert(at, pivot);
        self.rows.insert(at, r);
        true
    }

    /// Coordinates of `v` in the echelon rows, if `v` lies in the span.
    pub fn coordinates(&self, v: &SparseVec) -> Option<Vec<Rat>> {
        let mut r = v.clone();
        let mut coords = vec![Rat::zero(); self.rows.len()];
        for (k, (row, &p)) in self.rows.iter().zip(&self.pivots).enumerate() {
            if let Some(c) = r.get(&p).cloned() {
                let neg = -c.clone();
                add_scaled(&mut r, row, &neg);
                coords[k] = c;
            }
        }
        r.is_empty().then_some(coords)
    }
}

/// Basis of `{ lambda : sum_i lambda_i v_i = 0 }` for the given vectors,
/// i.e. the nullspace of the matrix with columns `v_i`.
///
/// Returned as a canonical echelon over the coefficient indices `0..k`.
pub fn relation_kernel(vectors: &[SparseVec]) -> Echelon {
    let mut ech: Vec<(SparseVec, SparseVec)> = Vec::new(); // (residual, combination)
    let mut kernel_rows = Vec::new();
    for (i, v) in vectors.iter().enumerate() {
        let mut r = v.clone();
        let mut comb = SparseVec::from([(i, Rat::one())]);
        for (row, rcomb) in &ech {
            if let Some((p, _)) = leading(row) {
                if let Some(c) = r.get(&p).cloned() {
                    let neg = -c;
                    add_scaled(&mut r, row, &neg);
                    add_scaled(&mut comb, rcomb, &neg);
                }
            }
        }
        if r.is_empty() {
            kernel_rows.push(comb);
        } else {
            let inv = leading(&r).unwrap().1.clone().recip();
            r = scaled(&r, &inv);
            comb = scaled(&comb, &inv);
            // keep rows ordered by pivot so the sweep above stays valid
            let p = leading(&r).unwrap().0;
            let at = ech.partition_point(|(row, _)| leading(row).unwrap().0 < p);
            ech.insert(at, (r, comb));
        }
    }
    Echelon::from_rows(kernel_rows)
}

/// An independent family of vectors supporting coordinate queries in the
/// ORIGINAL family (not the reduced rows).
#[derive(Debug, Clone)]
pub struct TrackedBasis {
    // (reduced vector, combination over original indices), ordered by pivot
    rows: Vec<(SparseVec, SparseVec)>,
}

impl TrackedBasis {
    /// Build from an independent family; `None` if the vectors are dependent.
    pub fn new(vectors: &[SparseVec]) -> Option<Self> {
        let mut rows: Vec<(SparseVec, SparseVec)> = Vec::new();
        for (i, v) in vectors.iter().enumerate() {
            let mut r = v.clone();
            let mut comb = SparseVec::from([(i, Rat::one())]);
            for (row, rcomb) in &rows {
                let p = leading(row).unwrap().0;
                if let Some(c) = r.get(&p).cloned() {
                    let neg = -c;
                    add_scaled(&mut r, row, &neg);
                    add_scaled(&mut comb, rcomb, &neg);
                }
            }
            let (p, lead) = leading(&r).map(|(p, c)| (p, c.clone()))?;
            let inv = lead.recip();
            r = scaled(&r, &inv);
            comb = scaled(&comb, &inv);
            let at = rows.partition_point(|(row, _)| leading(row).unwrap().0 < p);
            rows.insert(at, (r, comb));
        }
        Some(TrackedBasis { rows })
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Coordinates of `v` in the original family, if it lies in the span.
    pub fn coordinates(&self, v: &SparseVec) -> Option<SparseVec> {
        let mut r = v.clone();
        let mut coords = SparseVec::new();
        for (row, rcomb) in &self.rows {
            let p = leading(row).unwrap().0;
            if let Some(c) = r.get(&p).cloned() {
                let neg = -c.clone();
                add_scaled(&mut r, row, &neg);
                add_scaled(&mut coords, rcomb, &c);
            }
        }
        r.is_empty().then_some(coords)
    }
}

/// Outcome of an exact affine solve.
#[derive(Debug, Clone)]
pub enum SolveOutcome {
    /// A particular solution (free variables set to zero).
    Solution(SparseVec),
    /// The system is inconsistent.
    Inconsistent,
}

/// Solve `A x = b` given as rows `(a_i, b_i)` over unknown indices.
pub fn solve_affine(rows: &[(SparseVec, Rat)]) -> SolveOutcome {
    // Augmented column: put the right-hand side at usize::MAX.
    const RHS: usize = usize::MAX;
    let mut ech = Echelon::new();
    for (a, b) in rows {
        let mut r = a.clone();
        if !b.is_zero() {
            r.insert(RHS, b.clone());
        }
        ech.insert(r);
    }
    let mut sol = SparseVec::new();
    for (row, &p) in ech.rows().iter().zip(ech.pivots()) {
        if p == RHS {
            return SolveOutcome::Inconsistent;
        }
        // Free variables are zero, so x_p is just the RHS entry.
        if let Some(b) = row.get(&RHS) {
            sol.insert(p, b.clone());
        }
    }
    SolveOutcome::Solution(sol)
}
