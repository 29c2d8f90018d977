//! Pyramids (shifted Young diagrams), fillings, and the nilpotent and
//! grading they induce.
//!
//! Boxes have width 2; a row's horizontal position is the column coordinate
//! of its leftmost box center, so shifts by half a box are integer shifts of
//! the offset. Row 1 is the bottom row (French convention) and is a longest
//! row, normalised to offset 0; only coordinate differences ever matter.

use crate::error::{CoreError, Result};
use crate::gradings::{grade_from_semisimple, Grading};
use crate::lie::Mat;
use crate::partitions::Partition;
use crate::rat::Rat;
use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

/// A pyramid: shape plus per-row offsets of the leftmost box center.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pyramid {
    shape: Partition,
    offsets: Vec<i64>,
}

impl Pyramid {
    /// Validate the defining conditions: first-box columns weakly increase
    /// and last-box columns weakly decrease from bottom to top.
    pub fn new(shape: Partition, offsets: Vec<i64>) -> Result<Self> {
        if offsets.len() != shape.len() {
            return Err(CoreError::Input("one offset per row required".into()));
        }
        for r in 0..offsets.len() - 1 {
            let first_ok = offsets[r] <= offsets[r + 1];
            let last_here = offsets[r] + 2 * (shape.parts()[r] as i64 - 1);
            let last_above = offsets[r + 1] + 2 * (shape.parts()[r + 1] as i64 - 1);
            if !first_ok || last_above > last_here {
                return Err(CoreError::Input(format!(
                    "rows {} and {} violate the pyramid conditions",
                    r + 1,
                    r + 2
                )));
            }
        }
        Ok(Pyramid { shape, offsets })
    }

    pub fn shape(&self) -> &Partition {
        &self.shape
    }

    pub fn offsets(&self) -> &[i64] {
        &self.offsets
    }

    pub fn n(&self) -> usize {
        self.shape.n()
    }

    pub fn rows(&self) -> usize {
        self.shape.len()
    }

    /// Column of the `t`-th box from the left (0-based) in `row` (1-based).
    pub fn col(&self, row: usize, t: usize) -> i64 {
        self.offsets[row - 1] + 2 * t as i64
    }

    /// All boxes as (row, column), bottom row first, left to right.
    pub fn boxes(&self) -> Vec<(usize, i64)> {
        let mut out = Vec::with_capacity(self.n());
        for r in 1..=self.rows() {
            for t in 0..self.shape.part(r) {
                out.push((r, self.col(r, t)));
            }
        }
        out
    }

    /// Box position of a given (row, column), if present.
    pub fn box_at(&self, row: usize, col: i64) -> Option<usize> {
        if row < 1 || row > self.rows() {
            return None;
        }
        let off = self.offsets[row - 1];
        if col < off || (col - off) % 2 != 0 {
            return None;
        }
        let t = ((col - off) / 2) as usize;
        (t < self.shape.part(row)).then_some(t)
    }

    /// True iff all rows share the same last-box column.
    pub fn is_right_aligned(&self) -> bool {
        let last: Vec<i64> = (1..=self.rows())
            .map(|r| self.col(r, self.shape.part(r) - 1))
            .collect();
        last.windows(2).all(|w| w[0] == w[1])
    }
}

/// The unique pyramid of the given shape whose rows are right-aligned.
pub fn right_aligned(shape: &Partition) -> Pyramid {
    let longest = shape.parts()[0] as i64;
    let offsets = shape.parts().iter().map(|&p| 2 * (longest - p as i64)).collect();
    Pyramid { shape: shape.clone(), offsets }
}

/// All pyramids of the given shape, translation-normalised so the bottom
/// row has offset 0, ordered lexicographically by offset vector.
pub fn enumerate_pyramids(shape: &Partition) -> Vec<Pyramid> {
    let parts = shape.parts();
    let mut out = Vec::new();
    let mut offsets = vec![0i64; parts.len()];
    fn rec(parts: &[usize], r: usize, offsets: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if r == parts.len() {
            out.push(offsets.clone());
            return;
        }
        let prev = offsets[r - 1];
        let slack = 2 * (parts[r - 1] as i64 - parts[r] as i64);
        for o in prev..=prev + slack {
            offsets[r] = o;
            rec(parts, r + 1, offsets, out);
        }
    }
    let mut raw = Vec::new();
    if parts.len() == 1 {
        raw.push(offsets.clone());
    } else {
        rec(parts, 1, &mut offsets, &mut raw);
    }
    for o in raw {
        out.push(Pyramid { shape: shape.clone(), offsets: o });
    }
    out
}

/// A bijective labelling of the boxes of a pyramid by 1..n.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Filling {
    pyramid: Pyramid,
    /// labels[r-1][t] is the label of the t-th box from the left in row r.
    labels: Vec<Vec<usize>>,
}

impl Filling {
    pub fn new(pyramid: Pyramid, labels: Vec<Vec<usize>>) -> Result<Self> {
        let n = pyramid.n();
        if labels.len() != pyramid.rows()
            || labels
                .iter()
                .zip(pyramid.shape().parts())
                .any(|(row, &len)| row.len() != len)
        {
            return Err(CoreError::Input("labels must match the pyramid shape".into()));
        }
        let mut seen = vec![false; n + 1];
        for &l in labels.iter().flatten() {
            if l < 1 || l > n || seen[l] {
                return Err(CoreError::Input(format!("labels must be a bijection onto 1..={n}")));
            }
            seen[l] = true;
        }
        Ok(Filling { pyramid, labels })
    }

    pub fn pyramid(&self) -> &Pyramid {
        &self.pyramid
    }

    pub fn n(&self) -> usize {
        self.pyramid.n()
    }

    /// Row of the box labelled `k` (1-based).
    pub fn row(&self, k: usize) -> usize {
        self.position(k).0
    }

    /// Column of the box labelled `k`.
    pub fn col(&self, k: usize) -> i64 {
        let (r, t) = self.position(k);
        self.pyramid.col(r, t)
    }

    /// (row, index-from-left) of the box labelled `k`.
    pub fn position(&self, k: usize) -> (usize, usize) {
        for (r, row) in self.labels.iter().enumerate() {
            if let Some(t) = row.iter().position(|&l| l == k) {
                return (r + 1, t);
            }
        }
        panic!("label {k} out of range");
    }

    /// Label of the `t`-th box from the left (0-based) in `row`.
    pub fn label_at(&self, row: usize, t: usize) -> usize {
        self.labels[row - 1][t]
    }

    /// Label of the `t`-th box from the right (1-based), the EK convention.
    pub fn label_from_right(&self, row: usize, t: usize) -> Option<usize> {
        let len = self.pyramid.shape().part(row);
        (t >= 1 && t <= len).then(|| self.labels[row - 1][len - t])
    }

    /// Right-adjacent pairs (k, l): same row, col(l) = col(k) + 2.
    pub fn adjacencies(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for row in &self.labels {
            for w in row.windows(2) {
                out.push((w[0], w[1]));
            }
        }
        out
    }

    /// Apply a relabelling permutation (old label -> perm[old - 1]).
    pub fn relabel(&self, perm: &[usize]) -> Result<Filling> {
        if perm.len() != self.n() {
            return Err(CoreError::Input("permutation length must equal n".into()));
        }
        let labels = self
            .labels
            .iter()
            .map(|row| row.iter().map(|&l| perm[l - 1]).collect())
            .collect();
        Filling::new(self.pyramid.clone(), labels)
    }
}

/// The deterministic filling: sort boxes by (column, then row), label 1..n.
///
/// This is the labelling that increases first up columns and then left to
/// right.
pub fn standard_filling(p: &Pyramid) -> Filling {
    let mut boxes: Vec<(i64, usize, usize)> = Vec::new(); // (col, row, t)
    for r in 1..=p.rows() {
        for t in 0..p.shape().part(r) {
            boxes.push((p.col(r, t), r, t));
        }
    }
    boxes.sort();
    let mut labels: Vec<Vec<usize>> = p.shape().parts().iter().map(|&len| vec![0; len]).collect();
    for (next, &(_, r, t)) in boxes.iter().enumerate() {
        labels[r - 1][t] = next + 1;
    }
    Filling { pyramid: p.clone(), labels }
}

/// The nilpotent of a filled pyramid: sum of E_{k l} over right-adjacent
/// pairs k -> l.
pub fn nilpotent_of(f: &Filling) -> Mat {
    let n = f.n();
    let mut e = Mat::zero(n);
    for (k, l) in f.adjacencies() {
        e.set(k, l, Rat::from_integer(1.into()));
    }
    e
}

/// The diagonal semisimple element of the pyramid grading: entry -col(k)
/// plus the constant making the trace zero.
pub fn grading_element(f: &Filling) -> Mat {
    let n = f.n();
    let total: i64 = (1..=n).map(|k| f.col(k)).sum();
    let shift = Rat::new(BigInt::from(total), BigInt::from(n as i64));
    let mut h = Mat::zero(n);
    for k in 1..=n {
        let v = &shift - &Rat::from_integer(BigInt::from(f.col(k)));
        if !v.is_zero() {
            h.set(k, k, v);
        }
    }
    h
}

/// The grading induced by a filled pyramid: E_{ij} sits in degree
/// col(j) - col(i), realised through the diagonal element above.
pub fn grading_of(f: &Filling) -> Result<Grading> {
    grade_from_semisimple(&grading_element(f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gradings::check_good;
    use crate::lie::jordan_type;
    use crate::partitions::all_partitions;
    use crate::rat::rat;

    fn part(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    /// Brute-force oracle: scan all offset vectors within the width bound.
    fn enumerate_by_scan(shape: &Partition) -> usize {
        let rows = shape.len();
        let bound = 2 * shape.n() as i64;
        let mut count = 0usize;
        let mut offsets = vec![0i64; rows];
        fn rec(shape: &Partition, r: usize, bound: i64, offsets: &mut Vec<i64>, count: &mut usize) {
            if r == offsets.len() {
                if Pyramid::new(shape.clone(), offsets.clone()).is_ok() {
                    *count += 1;
                }
                return;
            }
            for o in -bound..=bound {
                offsets[r] = o;
                rec(shape, r + 1, bound, offsets, count);
            }
        }
        if rows == 1 {
            return 1;
        }
        rec(shape, 1, bound, &mut offsets, &mut count);
        count
    }

    #[test]
    fn pyramid_census_small() {
        assert_eq!(enumerate_pyramids(&part(&[4, 3])).len(), 3);
        assert_eq!(enumerate_pyramids(&part(&[5])).len(), 1);
        assert_eq!(enumerate_pyramids(&part(&[2, 2, 2])).len(), 1);
        for n in 1..=6 {
            for shape in all_partitions(n).unwrap() {
                assert_eq!(
                    enumerate_pyramids(&shape).len(),
                    enumerate_by_scan(&shape),
                    "census mismatch for {shape}"
                );
            }
        }
    }

    #[test]
    fn right_aligned_examples() {
        let p = right_aligned(&part(&[2, 2, 2]));
        assert_eq!(p.offsets(), &[0, 0, 0]);
        assert!(p.is_right_aligned());
        let p = right_aligned(&part(&[4, 3]));
        assert_eq!(p.offsets(), &[0, 2]);
        assert!(p.is_right_aligned());
        let p = right_aligned(&part(&[1, 1]));
        assert_eq!(p.offsets(), &[0, 0]);
    }

    #[test]
    fn standard_filling_matches_worked_example() {
        // right-aligned (2,2,2): rows bottom to top read (1,4), (2,5), (3,6)
        let f = standard_filling(&right_aligned(&part(&[2, 2, 2])));
        assert_eq!(f.label_at(1, 0), 1);
        assert_eq!(f.label_at(1, 1), 4);
        assert_eq!(f.label_at(2, 0), 2);
        assert_eq!(f.label_at(2, 1), 5);
        assert_eq!(f.label_at(3, 0), 3);
        assert_eq!(f.label_at(3, 1), 6);

        let f = standard_filling(&right_aligned(&part(&[5])));
        assert_eq!((1..=5).map(|t| f.label_at(1, t - 1)).collect::<Vec<_>>(), vec![1, 2, 3, 4, 5]);
    }

    #[test]
    fn nilpotent_of_worked_examples() {
        let f = standard_filling(&right_aligned(&part(&[2, 2, 2])));
        let e = nilpotent_of(&f);
        let expected = &(&Mat::e(6, 1, 4) + &Mat::e(6, 2, 5)) + &Mat::e(6, 3, 6);
        assert_eq!(e, expected);

        let single = standard_filling(&right_aligned(&part(&[1])));
        assert!(nilpotent_of(&single).is_zero());

        let f = standard_filling(&right_aligned(&part(&[3, 1])));
        assert_eq!(jordan_type(&nilpotent_of(&f)).unwrap(), part(&[3, 1]));
    }

    #[test]
    fn grading_degrees() {
        // right-aligned pyramids have even gradings with e in degree 2
        let f = standard_filling(&right_aligned(&part(&[2, 2, 2])));
        let g = grading_of(&f).unwrap();
        assert_eq!(g.degrees(), vec![-2, 0, 2]);
        let e = nilpotent_of(&f);
        assert!(g.is_homogeneous(&e, 2));
        assert_eq!(grading_element(&f), Mat::diag(&[rat(1), rat(1), rat(1), rat(-1), rat(-1), rat(-1)]));

        // the middle (Dynkin) pyramid of (4,3) has odd degrees
        let pyr = Pyramid::new(part(&[4, 3]), vec![0, 1]).unwrap();
        let f = standard_filling(&pyr);
        let g = grading_of(&f).unwrap();
        assert!(g.degrees().iter().any(|d| d % 2 != 0));
    }

    #[test]
    fn every_pyramid_up_to_5_is_good_with_right_jordan_type() {
        for n in 1..=5 {
            for shape in all_partitions(n).unwrap() {
                for pyr in enumerate_pyramids(&shape) {
                    let f = standard_filling(&pyr);
                    let e = nilpotent_of(&f);
                    assert_eq!(jordan_type(&e).unwrap(), shape, "jordan type at {shape}");
                    let g = grading_of(&f).unwrap();
                    let report = check_good(&g, &e).unwrap();
                    assert!(report.pass(), "{shape} {:?}: {report:?}", pyr.offsets());
                }
            }
        }
    }

    #[test]
    fn relabelling_conjugates_the_nilpotent() {
        let f = standard_filling(&right_aligned(&part(&[3, 2])));
        let perm = vec![3, 1, 4, 2, 5]; // old label k -> perm[k-1]
        let g = f.relabel(&perm).unwrap();
        let e = nilpotent_of(&f);
        let e2 = nilpotent_of(&g);
        // conjugation by the permutation matrix sending basis vector k to perm(k)
        let mut pmat = Mat::zero(5);
        for k in 1..=5 {
            pmat.set(perm[k - 1], k, rat(1));
        }
        let pinv = pmat.inverse().unwrap();
        assert_eq!(e2, &(&pmat * &e) * &pinv);
        assert_eq!(jordan_type(&e2).unwrap(), jordan_type(&e).unwrap());
    }

    #[test]
    fn invalid_pyramids_rejected() {
        assert!(Pyramid::new(part(&[4, 3]), vec![0, 3]).is_err());
        assert!(Pyramid::new(part(&[4, 3]), vec![0, -1]).is_err());
        assert!(Pyramid::new(part(&[4, 3]), vec![0]).is_err());
        assert!(Filling::new(right_aligned(&part(&[2, 1])), vec![vec![1, 1], vec![2]]).is_err());
    }
}
