//! Exact-rational matrix Lie algebra layer.
//!
//! Matrices are sparse over arbitrary-precision rationals with 1-based
//! indices throughout the public API (matching the E_ij notation of the
//! surrounding mathematics). The ambient algebra is gl_n; sl_n is handled
//! as the trace-zero subspace.
//!
//! The bilinear form used everywhere is the trace form tr(xy), not the
//! Killing form; they differ by the scalar 2n on sl_n. This is the single
//! normalization knob of the whole crate.

use crate::error::{CoreError, Result};
use crate::linalg::{relation_kernel, Echelon, SparseVec};
use crate::partitions::Partition;
use crate::rat::{format_rat, parse_rat, Rat};
use num_traits::{One, Zero};
use serde::de::Error as _;
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Sparse n x n matrix over the rationals. Indices are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    n: usize,
    entries: BTreeMap<(usize, usize), Rat>,
}

impl Mat {
    pub fn zero(n: usize) -> Self {
        Mat { n, entries: BTreeMap::new() }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zero(n);
        for i in 1..=n {
            m.set(i, i, Rat::one());
        }
        m
    }

    /// Elementary matrix E_ij (1-based).
    pub fn e(n: usize, i: usize, j: usize) -> Self {
        let mut m = Mat::zero(n);
        m.set(i, j, Rat::one());
        m
    }

    /// Diagonal matrix from entries.
    pub fn diag(entries: &[Rat]) -> Self {
        let mut m = Mat::zero(entries.len());
        for (i, v) in entries.iter().enumerate() {
            m.set(i + 1, i + 1, v.clone());
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> Rat {
        assert!((1..=self.n).contains(&i) && (1..=self.n).contains(&j), "index out of range");
        self.entries.get(&(i, j)).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        assert!((1..=self.n).contains(&i) && (1..=self.n).contains(&j), "index out of range");
        if v.is_zero() {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), v);
        }
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: &Rat) {
        let cur = self.entry(i, j);
        self.set(i, j, cur + v);
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &Rat)> {
        self.entries.iter().map(|(&(i, j), v)| (i, j, v))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_diagonal(&self) -> bool {
        self.entries.keys().all(|&(i, j)| i == j)
    }

    pub fn scale(&self, c: &Rat) -> Mat {
        if c.is_zero() {
            return Mat::zero(self.n);
        }
        Mat {
            n: self.n,
            entries: self.entries.iter().map(|(&k, v)| (k, v * c)).collect(),
        }
    }

    pub fn trace(&self) -> Rat {
        let mut t = Rat::zero();
        for i in 1..=self.n {
            if let Some(v) = self.entries.get(&(i, i)) {
                t += v;
            }
        }
        t
    }

    pub fn pow(&self, k: usize) -> Mat {
        let mut acc = Mat::identity(self.n);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// True iff the matrix is nilpotent (x^n = 0).
    pub fn is_nilpotent(&self) -> bool {
        self.pow(self.n).is_zero()
    }

    /// Apply to a column vector.
    pub fn mul_vec(&self, v: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (&(i, j), c) in &self.entries {
            if let Some(x) = v.get(&(j - 1)) {
                let e = out.entry(i - 1).or_insert_with(Rat::zero);
                *e += c * x;
                if e.is_zero() {
                    out.remove(&(i - 1));
                }
            }
        }
        out
    }

    /// Flatten to a sparse vector over indices (i-1)*n + (j-1).
    pub fn to_vec(&self) -> SparseVec {
        self.entries
            .iter()
            .map(|(&(i, j), v)| ((i - 1) * self.n + (j - 1), v.clone()))
            .collect()
    }

    pub fn from_vec(n: usize, v: &SparseVec) -> Mat {
        let mut m = Mat::zero(n);
        for (&idx, c) in v {
            m.set(idx / n + 1, idx % n + 1, c.clone());
        }
        m
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        let mut rows: BTreeMap<usize, SparseVec> = BTreeMap::new();
        for (&(i, j), v) in &self.entries {
            rows.entry(i).or_default().insert(j, v.clone());
        }
        Echelon::from_rows(rows.into_values()).rank()
    }

    /// Exact inverse, if the matrix is invertible.
    pub fn inverse(&self) -> Option<Mat> {
        let n = self.n;
        // Reduce [A | I] to [I | A^{-1}].
        let mut ech = Echelon::new();
        for i in 1..=n {
            let mut row: SparseVec = SparseVec::new();
            for j in 1..=n {
                let v = self.entry(i, j);
                if !v.is_zero() {
                    row.insert(j - 1, v);
                }
            }
            row.insert(n + i - 1, Rat::one());
            ech.insert(row);
        }
        let left_pivots_ok =
            ech.rank() == n && ech.pivots().iter().enumerate().all(|(k, &p)| p == k);
        if !left_pivots_ok {
            return None;
        }
        let mut inv = Mat::zero(n);
        for (k, row) in ech.rows().iter().enumerate() {
            for (&idx, v) in row.range(n..) {
                inv.set(k + 1, idx - n + 1, v.clone());
            }
        }
        debug_assert_eq!(&inv * self, Mat::identity(n));
        Some(inv)
    }
}

impl fmt::Display for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{} x {}]", self.n, self.n)?;
        for i in 1..=self.n {
            let row: Vec<String> = (1..=self.n).map(|j| format_rat(&self.entry(i, j))).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Add for &Mat {
    type Output = Mat;
    fn add(self, rhs: &Mat) -> Mat {
        assert_eq!(self.n, rhs.n, "matrix dimension mismatch");
        let mut out = self.clone();
        for (&(i, j), v) in &rhs.entries {
            out.add_to(i, j, v);
        }
        out
    }
}

impl Sub for &Mat {
    type Output = Mat;
    fn sub(self, rhs: &Mat) -> Mat {
        assert_eq!(self.n, rhs.n, "matrix dimension mismatch");
        let mut out = self.clone();
        for (&(i, j), v) in &rhs.entries {
            let neg = -v.clone();
            out.add_to(i, j, &neg);
        }
        out
    }
}

impl Neg for &Mat {
    type Output = Mat;
    fn neg(self) -> Mat {
        self.scale(&-Rat::one())
    }
}

impl Mul for &Mat {
    type Output = Mat;
    fn mul(self, rhs: &Mat) -> Mat {
        assert_eq!(self.n, rhs.n, "matrix dimension mismatch");
        let mut out = Mat::zero(self.n);
        // group rhs entries by row for the sparse product
        let mut by_row: BTreeMap<usize, Vec<(usize, &Rat)>> = BTreeMap::new();
        for (&(i, j), v) in &rhs.entries {
            by_row.entry(i).or_default().push((j, v));
        }
        for (&(i, k), a) in &self.entries {
            if let Some(row) = by_row.get(&k) {
                for &(j, b) in row {
                    out.add_to(i, j, &(a * b));
                }
            }
        }
        out
    }
}

impl Serialize for Mat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            n: usize,
            entries: Vec<(usize, usize, &'a str)>,
        }
        let strings: Vec<(usize, usize, String)> = self
            .entries
            .iter()
            .map(|(&(i, j), v)| (i, j, format_rat(v)))
            .collect();
        let repr = Repr {
            n: self.n,
            entries: strings.iter().map(|(i, j, v)| (*i, *j, v.as_str())).collect(),
        };
        repr.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Mat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            n: usize,
            entries: Vec<(usize, usize, String)>,
        }
        let repr = Repr::deserialize(d)?;
        let mut m = Mat::zero(repr.n);
        for (i, j, v) in repr.entries {
            if !(1..=repr.n).contains(&i) || !(1..=repr.n).contains(&j) {
                return Err(D::Error::custom(format!("entry ({i},{j}) out of range for n={}", repr.n)));
            }
            m.set(i, j, parse_rat(&v).map_err(D::Error::custom)?);
        }
        Ok(m)
    }
}

/// A subspace of gl_n given by a canonical (echelonized) basis.
///
/// Two `Subalg`s are equal iff they span the same subspace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subalg {
    n: usize,
    basis: Vec<Mat>,
    ech: Echelon,
}

impl Subalg {
    /// Span of the given matrices, echelonized into a canonical basis.
    pub fn span(n: usize, mats: &[Mat]) -> Self {
        for m in mats {
            assert_eq!(m.dim(), n, "matrix dimension mismatch in span");
        }
        let ech = Echelon::from_rows(mats.iter().map(Mat::to_vec));
        let basis = ech.rows().iter().map(|r| Mat::from_vec(n, r)).collect();
        Subalg { n, basis, ech }
    }

    pub fn zero(n: usize) -> Self {
        Subalg::span(n, &[])
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Mat] {
        &self.basis
    }

    pub fn contains(&self, m: &Mat) -> bool {
        m.dim() == self.n && self.ech.contains(&m.to_vec())
    }

    /// Coordinates of `m` in the canonical basis, if it lies in the span.
    pub fn coordinates(&self, m: &Mat) -> Option<Vec<Rat>> {
        self.ech.coordinates(&m.to_vec())
    }

    /// Sum of subspaces.
    pub fn sum(&self, other: &Subalg) -> Subalg {
        assert_eq!(self.n, other.n);
        let mats: Vec<Mat> = self.basis.iter().chain(other.basis.iter()).cloned().collect();
        Subalg::span(self.n, &mats)
    }

    /// True iff the span is closed under the matrix commutator.
    pub fn is_subalgebra(&self) -> bool {
        self.basis.iter().enumerate().all(|(a, x)| {
            self.basis.iter().skip(a + 1).all(|y| self.contains(&bracket_unchecked(x, y)))
        })
    }

    /// True iff `[other, self] \subseteq self`.
    pub fn is_ideal_under(&self, other: &Subalg) -> bool {
        other
            .basis
            .iter()
            .all(|x| self.basis.iter().all(|y| self.contains(&bracket_unchecked(x, y))))
    }

    /// True iff all brackets of basis elements vanish.
    pub fn is_abelian(&self) -> bool {
        self.basis.iter().enumerate().all(|(a, x)| {
            self.basis.iter().skip(a + 1).all(|y| bracket_unchecked(x, y).is_zero())
        })
    }

    /// Dimension of the intersection with another subspace.
    pub fn intersection_dim(&self, other: &Subalg) -> usize {
        self.dim() + other.dim() - self.sum(other).dim()
    }
}

impl Serialize for Subalg {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.basis.len()))?;
        for m in &self.basis {
            seq.serialize_element(m)?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for Subalg {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let mats = Vec::<Mat>::deserialize(d)?;
        let n = mats
            .first()
            .map(Mat::dim)
            .ok_or_else(|| D::Error::custom("cannot infer ambient dimension of an empty span"))?;
        if mats.iter().any(|m| m.dim() != n) {
            return Err(D::Error::custom("mixed ambient dimensions in span"));
        }
        Ok(Subalg::span(n, &mats))
    }
}

/// A linear functional on a subalgebra, stored by its values on the
/// canonical basis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Char {
    pub domain: Subalg,
    #[serde(with = "crate::rat::serde_rat_vec")]
    pub values: Vec<Rat>,
}

impl Char {
    /// Evaluate at an element of the domain.
    pub fn eval(&self, y: &Mat) -> Result<Rat> {
        let coords = self
            .domain
            .coordinates(y)
            .ok_or_else(|| CoreError::Domain("element outside the character's domain".into()))?;
        Ok(coords
            .iter()
            .zip(&self.values)
            .map(|(c, v)| c * v)
            .fold(Rat::zero(), |a, b| a + b))
    }

    /// True iff the functional kills all brackets of domain elements.
    pub fn is_character(&self) -> bool {
        let b = self.domain.basis();
        b.iter().enumerate().all(|(i, x)| {
            b.iter().skip(i + 1).all(|y| {
                let br = bracket_unchecked(x, y);
                match (self.domain.contains(&br), self.eval(&br)) {
                    (true, Ok(v)) => v.is_zero(),
                    _ => br.is_zero(),
                }
            })
        })
    }
}

fn bracket_unchecked(x: &Mat, y: &Mat) -> Mat {
    &(x * y) - &(y * x)
}

/// Matrix commutator `xy - yx`.
pub fn bracket(x: &Mat, y: &Mat) -> Result<Mat> {
    if x.dim() != y.dim() {
        return Err(CoreError::Dimension(format!("bracket of {} x {} with {} x {}", x.dim(), x.dim(), y.dim(), y.dim())));
    }
    Ok(bracket_unchecked(x, y))
}

/// Trace form tr(xy).
pub fn trace_pair(x: &Mat, y: &Mat) -> Result<Rat> {
    if x.dim() != y.dim() {
        return Err(CoreError::Dimension(format!("trace pairing of {} x {} with {} x {}", x.dim(), x.dim(), y.dim(), y.dim())));
    }
    Ok((x * y).trace())
}

/// The functional y -> tr(e y) restricted to the basis of `m`.
pub fn chi_of(e: &Mat, m: &Subalg) -> Result<Char> {
    if e.dim() != m.ambient_dim() {
        return Err(CoreError::Dimension("character source has wrong dimension".into()));
    }
    let values = m.basis().iter().map(|b| trace_pair(e, b)).collect::<Result<Vec<_>>>()?;
    Ok(Char { domain: m.clone(), values })
}

/// Ambient algebra for centralizer computations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ambient {
    Gl,
    Sl,
}

/// Centralizer of `e`: kernel of x -> [e, x] on the ambient algebra.
pub fn centralizer(e: &Mat, ambient: Ambient) -> Subalg {
    let n = e.dim();
    // images of the elementary matrices under ad e, in the gl basis order
    let mut units = Vec::with_capacity(n * n);
    let mut images = Vec::with_capacity(n * n);
    for i in 1..=n {
        for j in 1..=n {
            let u = Mat::e(n, i, j);
            images.push(bracket_unchecked(e, &u).to_vec());
            units.push(u);
        }
    }
    let kernel = relation_kernel(&images);
    let mut basis: Vec<Mat> = kernel
        .rows()
        .iter()
        .map(|comb| {
            let mut m = Mat::zero(n);
            for (&idx, c) in comb {
                m = &m + &units[idx].scale(c);
            }
            m
        })
        .collect();
    if ambient == Ambient::Sl {
        basis = restrict_traceless(n, &basis);
    }
    Subalg::span(n, &basis)
}

/// Basis of the trace-zero part of a span.
fn restrict_traceless(n: usize, basis: &[Mat]) -> Vec<Mat> {
    let rows: Vec<SparseVec> = basis
        .iter()
        .map(|m| {
            let t = m.trace();
            if t.is_zero() {
                SparseVec::new()
            } else {
                SparseVec::from([(0usize, t)])
            }
        })
        .collect();
    relation_kernel(&rows)
        .rows()
        .iter()
        .map(|comb| {
            let mut m = Mat::zero(n);
            for (&idx, c) in comb {
                m = &m + &basis[idx].scale(c);
            }
            m
        })
        .collect()
}

/// Jordan type of a nilpotent matrix, from the rank sequence of its powers.
pub fn jordan_type(x: &Mat) -> Result<Partition> {
    let n = x.dim();
    if !x.is_nilpotent() {
        return Err(CoreError::Domain("matrix is not nilpotent".into()));
    }
    // ranks r_k of x^k; blocks of size exactly s occur r_{s-1} - 2 r_s + r_{s+1} times
    let mut ranks = vec![n];
    let mut p = Mat::identity(n);
    loop {
        p = &p * x;
        let r = p.rank();
        ranks.push(r);
        if r == 0 {
            break;
        }
    }
    let t = ranks.len() - 1;
    let rk = |s: usize| if s <= t { ranks[s] } else { 0 };
    let mut parts = Vec::new();
    for s in (1..=t).rev() {
        let mult = rk(s - 1) + rk(s + 1) - 2 * rk(s);
        for _ in 0..mult {
            parts.push(s);
        }
    }
    Partition::new(parts)
}

/// Jordan chains of a nilpotent matrix.
///
/// Each chain is `[v, x v, x^2 v, ...]`; the last element lies in the
/// kernel and chains are ordered by decreasing length.
pub fn jordan_chains(x: &Mat) -> Result<Vec<Vec<SparseVec>>> {
    let n = x.dim();
    if !x.is_nilpotent() {
        return Err(CoreError::Domain("matrix is not nilpotent".into()));
    }
    // kernels of successive powers
    let mut kernels: Vec<Echelon> = Vec::new();
    let mut p = Mat::identity(n);
    loop {
        p = &p * x;
        let images: Vec<SparseVec> = (0..n)
            .map(|col| p.mul_vec(&SparseVec::from([(col, Rat::one())])))
            .collect();
        let ker = relation_kernel(&images);
        let full = ker.rank() == n;
        kernels.push(ker);
        if full {
            break;
        }
    }
    let t = kernels.len();
    let ker_rank = |s: usize| if s == 0 { 0 } else { kernels[s - 1].rank() };

    let mut chains: Vec<Vec<SparseVec>> = Vec::new();
    for s in (1..=t).rev() {
        // forbidden span at height s: ker(x^{s-1}) plus the height-s elements
        // of the taller chains already chosen
        let mut base = Echelon::new();
        if s >= 2 {
            for row in kernels[s - 2].rows() {
                base.insert(row.clone());
            }
        }
        for chain in &chains {
            let h = chain.len();
            if h > s {
                base.insert(chain[h - s].clone());
            }
        }
        let taller = chains.len() as isize;
        let expected_new = ker_rank(s) as isize - ker_rank(s - 1) as isize - taller;
        if expected_new < 0 {
            return Err(CoreError::Internal("Jordan chain extraction miscounted".into()));
        }
        let mut added = 0;
        for row in kernels[s - 1].rows() {
            if added == expected_new {
                break;
            }
            if base.insert(row.clone()) {
                let mut chain = vec![row.clone()];
                for _ in 1..s {
                    let next = x.mul_vec(chain.last().unwrap());
                    chain.push(next);
                }
                chains.push(chain);
                added += 1;
            }
        }
        if added != expected_new {
            return Err(CoreError::Internal("Jordan chain extraction miscounted".into()));
        }
    }
    chains.sort_by_key(|c| std::cmp::Reverse(c.len()));
    let total: usize = chains.iter().map(|c| c.len()).sum();
    if total != n {
        return Err(CoreError::Internal("Jordan chains do not span".into()));
    }
    Ok(chains)
}

/// Complete a nonzero nilpotent to an sl2-triple (e, h, f) with
/// [h,e] = 2e, [h,f] = -2f, [e,f] = h.
pub fn sl2_complete(e: &Mat) -> Result<(Mat, Mat, Mat)> {
    let n = e.dim();
    if e.is_zero() {
        return Err(CoreError::Domain("cannot complete the zero element to an sl2-triple".into()));
    }
    let chains = jordan_chains(e)?;
    // basis matrix with each chain laid out bottom (kernel) first, so that
    // e acts as the shift with ones on the superdiagonal
    let mut pmat = Mat::zero(n);
    let mut col = 0usize;
    let mut blocks = Vec::new();
    for chain in &chains {
        let m = chain.len();
        blocks.push(m);
        for (k, veck) in chain.iter().rev().enumerate() {
            // column col + k + 1 holds x^{m-1-k} v
            for (&ri, c) in veck {
                pmat.set(ri + 1, col + k + 1, c.clone());
            }
        }
        col += m;
    }
    let pinv = pmat
        .inverse()
        .ok_or_else(|| CoreError::Internal("Jordan basis matrix is singular".into()))?;
    // standard triple per block: on w_1..w_m with e w_k = w_{k-1},
    // h w_k = (m + 1 - 2k) w_k and f w_k = k (m - k) w_{k+1}
    let mut hstd = Mat::zero(n);
    let mut fstd = Mat::zero(n);
    let mut off = 0usize;
    for &m in &blocks {
        for k in 1..=m {
            let coeff = (m as i64) + 1 - 2 * (k as i64);
            hstd.set(off + k, off + k, Rat::from_integer(coeff.into()));
            if k < m {
                let c = (k * (m - k)) as i64;
                fstd.set(off + k + 1, off + k, Rat::from_integer(c.into()));
            }
        }
        off += m;
    }
    let h = &(&pmat * &hstd) * &pinv;
    let f = &(&pmat * &fstd) * &pinv;
    // the relations are cheap to confirm and guard the chain bookkeeping
    let ok = bracket_unchecked(&h, e) == e.scale(&Rat::from_integer(2.into()))
        && bracket_unchecked(&h, &f) == f.scale(&Rat::from_integer((-2).into()))
        && bracket_unchecked(e, &f) == h;
    if !ok {
        return Err(CoreError::Internal("constructed sl2-triple fails its relations".into()));
    }
    Ok((e.clone(), h, f))
}

/// An ordered basis of sl_n adapted to a subalgebra: complement letters
/// first (diagonal h_k, then off-diagonal units in row-major order away
/// from the subalgebra's echelon pivots), then the subalgebra's canonical
/// basis. Returns the letters, their names, and the complement count.
///
/// Requires every subalgebra pivot to be an off-diagonal matrix position,
/// which holds for all the nilpotent subalgebras built in this crate.
pub fn adapted_sl_basis(m: &Subalg) -> Result<(Vec<Mat>, Vec<String>, usize)> {
    let n = m.ambient_dim();
    let mut pivot_positions = std::collections::BTreeSet::new();
    for b in m.basis() {
        let (i, j, _) = b
            .iter()
            .next()
            .ok_or_else(|| CoreError::Input("zero vector in subalgebra basis".into()))?;
        if i == j {
            return Err(CoreError::Input(
                "subalgebra pivots must be off-diagonal matrix positions".into(),
            ));
        }
        pivot_positions.insert((i, j));
    }
    let mut letters = Vec::new();
    let mut names = Vec::new();
    for k in 1..n {
        letters.push(&Mat::e(n, k, k) - &Mat::e(n, k + 1, k + 1));
        names.push(format!("h{k}"));
    }
    for i in 1..=n {
        for j in 1..=n {
            if i != j && !pivot_positions.contains(&(i, j)) {
                letters.push(Mat::e(n, i, j));
                names.push(format!("E{i}{j}"));
            }
        }
    }
    let complement = letters.len();
    for (idx, b) in m.basis().iter().enumerate() {
        let singleton = b.iter().count() == 1;
        let name = if singleton {
            let (i, j, _) = b.iter().next().unwrap();
            format!("E{i}{j}")
        } else {
            format!("m{}", idx + 1)
        };
        letters.push(b.clone());
        names.push(name);
    }
    if letters.len() != n * n - 1 {
        return Err(CoreError::Input(format!(
            "adapted letters do not fill sl_{n}: got {}, need {}",
            letters.len(),
            n * n - 1
        )));
    }
    Ok((letters, names, complement))
}

/// Structural checks on a nilpotent subalgebra with optional complement
/// and character.
#[derive(Debug, Clone, Serialize)]
pub struct SubalgebraReport {
    pub closed_under_bracket: bool,
    pub m1_ideal_in_sum: Option<bool>,
    pub k_abelian: Option<bool>,
    pub chi_vanishes_on_commutators: Option<bool>,
}

impl SubalgebraReport {
    pub fn pass(&self) -> bool {
        self.closed_under_bracket
            && self.m1_ideal_in_sum.unwrap_or(true)
            && self.k_abelian.unwrap_or(true)
            && self.chi_vanishes_on_commutators.unwrap_or(true)
    }
}

/// Check bracket closure of `m1`, the ideal property of `m1` in `m1 + k`,
/// abelianness of `k`, and vanishing of `chi` on commutators.
pub fn subalgebra_checks(m1: &Subalg, k: Option<&Subalg>, chi: Option<&Char>) -> SubalgebraReport {
    let closed = m1.is_subalgebra();
    let (ideal, abelian) = match k {
        Some(k) => {
            let sum = m1.sum(k);
            let ideal = sum.basis().iter().all(|x| {
                m1.basis().iter().all(|y| m1.contains(&bracket_unchecked(x, y)))
            });
            (Some(ideal), Some(k.is_abelian()))
        }
        None => (None, None),
    };
    SubalgebraReport {
        closed_under_bracket: closed,
        m1_ideal_in_sum: ideal,
        k_abelian: abelian,
        chi_vanishes_on_commutators: chi.map(Char::is_character),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    #[test]
    fn bracket_sl2_relation() {
        let e12 = Mat::e(2, 1, 2);
        let e21 = Mat::e(2, 2, 1);
        let h = &Mat::e(2, 1, 1) - &Mat::e(2, 2, 2);
        assert_eq!(bracket(&e12, &e21).unwrap(), h);
        assert!(bracket(&e12, &e12).unwrap().is_zero());
        assert!(bracket(&e12, &Mat::e(3, 1, 2)).is_err());
    }

    #[test]
    fn bracket_jacobi_sampled() {
        // deterministic pseudo-random triples, exact arithmetic
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for n in 2..=6 {
            for _ in 0..(100 / 5) {
                let rand_mat = |next: &mut dyn FnMut() -> u64| {
                    let mut m = Mat::zero(n);
                    for i in 1..=n {
                        for j in 1..=n {
                            let v = (next() % 7) as i64 - 3;
                            m.set(i, j, rat(v));
                        }
                    }
                    m
                };
                let x = rand_mat(&mut next);
                let y = rand_mat(&mut next);
                let z = rand_mat(&mut next);
                let jac = &(&bracket_unchecked(&bracket_unchecked(&x, &y), &z)
                    + &bracket_unchecked(&bracket_unchecked(&y, &z), &x))
                    + &bracket_unchecked(&bracket_unchecked(&z, &x), &y);
                assert!(jac.is_zero());
                // invariance of the trace form
                let lhs = trace_pair(&bracket_unchecked(&x, &y), &z).unwrap();
                let rhs = trace_pair(&x, &bracket_unchecked(&y, &z)).unwrap();
                assert_eq!(lhs, rhs);
                assert_eq!(trace_pair(&x, &y).unwrap(), trace_pair(&y, &x).unwrap());
            }
        }
    }

    #[test]
    fn chi_values_for_regular_sl3() {
        let e = &Mat::e(3, 1, 2) + &Mat::e(3, 2, 3);
        let m = Subalg::span(3, &[Mat::e(3, 2, 1), Mat::e(3, 3, 1), Mat::e(3, 3, 2)]);
        let chi = chi_of(&e, &m).unwrap();
        assert_eq!(chi.eval(&Mat::e(3, 2, 1)).unwrap(), rat(1));
        assert_eq!(chi.eval(&Mat::e(3, 3, 2)).unwrap(), rat(1));
        assert_eq!(chi.eval(&Mat::e(3, 3, 1)).unwrap(), rat(0));
        let zero_chi = chi_of(&Mat::zero(3), &m).unwrap();
        assert!(zero_chi.values.iter().all(Rat::is_zero));
    }

    #[test]
    fn centralizer_dims() {
        assert_eq!(centralizer(&Mat::zero(3), Ambient::Gl).dim(), 9);
        assert_eq!(centralizer(&Mat::zero(3), Ambient::Sl).dim(), 8);
        for n in 2..=5 {
            let mut e = Mat::zero(n);
            for i in 1..n {
                e.set(i, i + 1, Rat::one());
            }
            assert_eq!(centralizer(&e, Ambient::Gl).dim(), n, "regular centralizer in gl_{n}");
        }
        // type (2,2,2) in gl_6: sum of min(mu_i, mu_j) = 18
        let e = &(&Mat::e(6, 1, 4) + &Mat::e(6, 2, 5)) + &Mat::e(6, 3, 6);
        assert_eq!(centralizer(&e, Ambient::Gl).dim(), 18);
        // ad-rank oracle for the orbit dimension formula
        assert_eq!(crate::partitions::orbit_dim(&jordan_type(&e).unwrap()), 36 - 18);
    }

    #[test]
    fn jordan_types() {
        assert_eq!(
            jordan_type(&Mat::zero(4)).unwrap(),
            Partition::new(vec![1, 1, 1, 1]).unwrap()
        );
        let e1 = &(&Mat::e(6, 1, 4) + &Mat::e(6, 2, 5)) + &Mat::e(6, 3, 6);
        assert_eq!(jordan_type(&e1).unwrap(), Partition::new(vec![2, 2, 2]).unwrap());
        let e2 = &(&e1 + &Mat::e(6, 1, 3)) + &Mat::e(6, 4, 6);
        assert_eq!(jordan_type(&e2).unwrap(), Partition::new(vec![3, 2, 1]).unwrap());
        assert!(jordan_type(&Mat::identity(2)).is_err());
    }

    #[test]
    fn jordan_type_is_conjugation_invariant() {
        let e = &Mat::e(4, 1, 2) + &Mat::e(4, 3, 4);
        // a handful of explicit invertible g
        let mut g = Mat::identity(4);
        g.set(1, 3, rat(2));
        g.set(2, 4, rat(-1));
        g.set(1, 4, rat(5));
        let ginv = g.inverse().unwrap();
        let conj = &(&g * &e) * &ginv;
        assert_eq!(jordan_type(&conj).unwrap(), jordan_type(&e).unwrap());
    }

    #[test]
    fn sl2_triples() {
        let (e, h, f) = sl2_complete(&Mat::e(2, 1, 2)).unwrap();
        assert_eq!(h, Mat::diag(&[rat(1), rat(-1)]));
        assert_eq!(f, Mat::e(2, 2, 1));
        assert_eq!(e, Mat::e(2, 1, 2));

        // regular nilpotent in sl3: relations hold exactly
        let e = &Mat::e(3, 1, 2) + &Mat::e(3, 2, 3);
        let (e, h, f) = sl2_complete(&e).unwrap();
        assert_eq!(bracket_unchecked(&h, &e), e.scale(&rat(2)));
        assert_eq!(bracket_unchecked(&h, &f), f.scale(&rat(-2)));
        assert_eq!(bracket_unchecked(&e, &f), h);

        // type (2,1): h = diag(1,-1,0) up to basis; here the chain algorithm
        // works in the standard basis so it is exactly diagonal
        let (_, h, _) = sl2_complete(&Mat::e(3, 1, 2)).unwrap();
        assert_eq!(h, Mat::diag(&[rat(1), rat(-1), rat(0)]));

        assert!(sl2_complete(&Mat::zero(3)).is_err());
        assert!(sl2_complete(&Mat::identity(3)).is_err());
    }

    #[test]
    fn centralizer_contains_powers() {
        let e = &(&Mat::e(5, 1, 2) + &Mat::e(5, 2, 3)) + &Mat::e(5, 4, 5);
        let z = centralizer(&e, Ambient::Gl);
        let mut p = Mat::identity(5);
        for _ in 0..5 {
            assert!(z.contains(&p) || p.is_zero());
            p = &p * &e;
        }
    }

    #[test]
    fn subalgebra_checks_sl3() {
        let m = Subalg::span(3, &[Mat::e(3, 2, 1), Mat::e(3, 3, 1), Mat::e(3, 3, 2)]);
        let e = &Mat::e(3, 1, 2) + &Mat::e(3, 2, 3);
        let chi = chi_of(&e, &m).unwrap();
        let report = subalgebra_checks(&m, None, Some(&chi));
        assert!(report.closed_under_bracket);
        assert_eq!(report.chi_vanishes_on_commutators, Some(true));
    }

    #[test]
    fn mat_json_roundtrip() {
        let mut m = Mat::e(3, 1, 2);
        m.set(2, 3, crate::rat::ratio(-5, 3));
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, r#"{"n":3,"entries":[[1,2,"1"],[2,3,"-5/3"]]}"#);
        let back: Mat = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
    }
}
