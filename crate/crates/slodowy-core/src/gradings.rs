//! Z-gradings of gl_n from diagonal semisimple elements, the good-grading
//! property list, the symplectic form on the degree -1 piece, and Premet
//! subalgebras.
//!
//! Only gradings diagonal in the standard basis are supported; after the
//! standard-filling basis choice this covers every pyramid and Dynkin
//! grading in type A. Entries of the semisimple element may be rational
//! (trace normalization shifts them off the integers) but their pairwise
//! differences, i.e. the ad-eigenvalues, must be integers.

use crate::error::{CoreError, Result};
use crate::lie::{bracket, centralizer, chi_of, trace_pair, Ambient, Mat, Subalg};
use crate::linalg::{relation_kernel, SparseVec};
use crate::partitions::orbit_dim;
use crate::rat::{is_integer, to_integer, Rat};
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;
use std::collections::BTreeMap;

/// Eigenspace decomposition of ad h on gl_n for a diagonal h.
#[derive(Debug, Clone)]
pub struct Grading {
    n: usize,
    semisimple: Mat,
    diag: Vec<Rat>,
    pieces: BTreeMap<i64, Subalg>,
}

impl Grading {
    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn semisimple(&self) -> &Mat {
        &self.semisimple
    }

    /// Ad-eigenvalue of the elementary matrix E_ij.
    pub fn degree_of_unit(&self, i: usize, j: usize) -> i64 {
        let d = &self.diag[i - 1] - &self.diag[j - 1];
        to_integer(&d).to_i64().expect("grading degree out of i64 range")
    }

    /// Degrees with a nonzero piece, ascending.
    pub fn degrees(&self) -> Vec<i64> {
        self.pieces.keys().copied().collect()
    }

    /// The degree-d piece (empty span if absent).
    pub fn piece(&self, d: i64) -> Subalg {
        self.pieces.get(&d).cloned().unwrap_or_else(|| Subalg::zero(self.n))
    }

    /// Split a matrix into homogeneous components by degree.
    pub fn decompose(&self, m: &Mat) -> BTreeMap<i64, Mat> {
        let mut out: BTreeMap<i64, Mat> = BTreeMap::new();
        for (i, j, v) in m.iter() {
            let d = self.degree_of_unit(i, j);
            out.entry(d).or_insert_with(|| Mat::zero(self.n)).set(i, j, v.clone());
        }
        out
    }

    /// True iff `m` is homogeneous of degree `d` (the zero matrix counts).
    pub fn is_homogeneous(&self, m: &Mat, d: i64) -> bool {
        m.iter().all(|(i, j, _)| self.degree_of_unit(i, j) == d)
    }

    /// Direct sum of the pieces in degrees <= -2.
    pub fn nonpositive_tail(&self) -> Subalg {
        let mats: Vec<Mat> = self
            .pieces
            .iter()
            .filter(|(&d, _)| d <= -2)
            .flat_map(|(_, s)| s.basis().iter().cloned())
            .collect();
        Subalg::span(self.n, &mats)
    }
}

/// Build the grading determined by a diagonal semisimple element.
pub fn grade_from_semisimple(h: &Mat) -> Result<Grading> {
    let n = h.dim();
    if !h.is_diagonal() {
        return Err(CoreError::Domain("grading element must be diagonal in the standard basis".into()));
    }
    let diag: Vec<Rat> = (1..=n).map(|i| h.entry(i, i)).collect();
    for i in 0..n {
        for j in 0..n {
            if !is_integer(&(&diag[i] - &diag[j])) {
                return Err(CoreError::Domain(format!(
                    "ad-eigenvalue h_{} - h_{} is not an integer",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    let mut units: BTreeMap<i64, Vec<Mat>> = BTreeMap::new();
    for i in 1..=n {
        for j in 1..=n {
            let d = &diag[i - 1] - &diag[j - 1];
            let d = to_integer(&d).to_i64().expect("degree out of range");
            units.entry(d).or_default().push(Mat::e(n, i, j));
        }
    }
    let pieces = units.into_iter().map(|(d, mats)| (d, Subalg::span(n, &mats))).collect();
    Ok(Grading { n, semisimple: h.clone(), diag, pieces })
}

/// Outcome of the six good-grading checks for a nilpotent.
#[derive(Debug, Clone, Serialize)]
pub struct GoodGradingReport {
    /// e lies in the degree 2 piece.
    pub gg1_e_in_degree_2: bool,
    /// ad e is injective from degree j to j+2 for every j <= -1.
    pub gg2_injective_below: bool,
    /// ad e is surjective onto degree j+2 for every j >= -1.
    pub gg3_surjective_above: bool,
    /// the centralizer of e sits in nonnegative degrees.
    pub gg4_centralizer_nonnegative: bool,
    /// trace pairing vanishes between degrees i, j unless i + j = 0.
    pub gg5_pairing_graded: bool,
    /// dim z(e) = dim g_0 + dim g_1.
    pub gg6_centralizer_dimension: bool,
    /// a kernel element of ad e in negative degree, when GG2 fails.
    pub gg2_witness: Option<Mat>,
}

impl GoodGradingReport {
    pub fn pass(&self) -> bool {
        self.gg1_e_in_degree_2
            && self.gg2_injective_below
            && self.gg3_surjective_above
            && self.gg4_centralizer_nonnegative
            && self.gg5_pairing_graded
            && self.gg6_centralizer_dimension
    }
}

/// Run the good-grading property list for `e` against the grading.
pub fn check_good(g: &Grading, e: &Mat) -> Result<GoodGradingReport> {
    if e.dim() != g.ambient_dim() {
        return Err(CoreError::Dimension("nilpotent and grading have different ambient sizes".into()));
    }
    // the zero matrix is homogeneous of every degree, so gg1 holds for e = 0
    let gg1 = g.is_homogeneous(e, 2);
    let degrees = g.degrees();

    let mut gg2 = true;
    let mut gg2_witness = None;
    let mut gg3 = true;
    // sweep source degrees where either the source or the target piece is
    // nonzero; a nonzero target over an empty source still breaks GG3
    let mut source_degrees: Vec<i64> = degrees.iter().flat_map(|&d| [d, d - 2]).collect();
    source_degrees.sort_unstable();
    source_degrees.dedup();
    // the degree-(d+2) component of [e, x]; for e in g_2 this is all of it
    let graded_ad = |x: &Mat, d: i64| -> Mat {
        g.decompose(&bracket(e, x).unwrap())
            .remove(&(d + 2))
            .unwrap_or_else(|| Mat::zero(g.ambient_dim()))
    };
    for &d in &source_degrees {
        let piece = g.piece(d);
        if d <= -1 && piece.dim() > 0 {
            let images: Vec<SparseVec> =
                piece.basis().iter().map(|x| graded_ad(x, d).to_vec()).collect();
            let ker = relation_kernel(&images);
            if ker.rank() > 0 {
                gg2 = false;
                if gg2_witness.is_none() {
                    let combo = &ker.rows()[0];
                    let mut w = Mat::zero(g.n);
                    for (&idx, c) in combo {
                        w = &w + &piece.basis()[idx].scale(c);
                    }
                    gg2_witness = Some(w);
                }
            }
        }
        if d >= -1 {
            let target = g.piece(d + 2);
            if target.dim() > 0 {
                let images: Vec<Mat> = piece.basis().iter().map(|x| graded_ad(x, d)).collect();
                let image_span = Subalg::span(g.n, &images);
                if image_span.dim() != target.dim() {
                    gg3 = false;
                }
            }
        }
    }

    let z = centralizer(e, Ambient::Gl);
    let gg4 = z.basis().iter().all(|x| g.decompose(x).keys().all(|&d| d >= 0));
    let mut gg5 = true;
    for &di in &degrees {
        for &dj in &degrees {
            if di + dj == 0 {
                continue;
            }
            for x in g.piece(di).basis() {
                for y in g.piece(dj).basis() {
                    if !trace_pair(x, y)?.is_zero() {
                        gg5 = false;
                    }
                }
            }
        }
    }
    let gg6 = z.dim() == g.piece(0).dim() + g.piece(1).dim();

    Ok(GoodGradingReport {
        gg1_e_in_degree_2: gg1,
        gg2_injective_below: gg2,
        gg3_surjective_above: gg3,
        gg4_centralizer_nonnegative: gg4,
        gg5_pairing_graded: gg5,
        gg6_centralizer_dimension: gg6,
        gg2_witness,
    })
}

/// The symplectic form omega(x, y) = tr(e [x, y]) on the degree -1 piece.
#[derive(Debug, Clone)]
pub struct SympForm {
    pub space: Subalg,
    pub gram: Vec<Vec<Rat>>,
}

impl SympForm {
    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// Rank of the Gram matrix.
    pub fn rank(&self) -> usize {
        let rows: Vec<SparseVec> = self
            .gram
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(j, v)| (j, v.clone()))
                    .collect()
            })
            .collect();
        crate::linalg::Echelon::from_rows(rows).rank()
    }
}

/// Gram matrix of the natural symplectic form on g_{-1}.
///
/// Under a good grading the form is nondegenerate; a degenerate Gram matrix
/// here indicates an inconsistency upstream, not a user error.
pub fn symplectic_on_gminus1(g: &Grading, e: &Mat) -> Result<SympForm> {
    let space = g.piece(-1);
    let b = space.basis();
    let mut gram = vec![vec![Rat::zero(); b.len()]; b.len()];
    for (a, x) in b.iter().enumerate() {
        for (c, y) in b.iter().enumerate().skip(a + 1) {
            let v = trace_pair(e, &bracket(x, y)?)?;
            gram[a][c] = v.clone();
            gram[c][a] = -v;
        }
    }
    let form = SympForm { space, gram };
    if form.rank() != form.dim() {
        return Err(CoreError::Internal(
            "symplectic form on g_{-1} is degenerate; the grading is not good for e".into(),
        ));
    }
    Ok(form)
}

/// Deterministic Lagrangian subspace of a symplectic space.
///
/// Greedy symplectic Gram-Schmidt in basis order: pair the first unmatched
/// vector with its first partner, keep the first member of every pair.
pub fn choose_lagrangian(s: &SympForm) -> Result<Subalg> {
    let n_amb = s.space.ambient_dim();
    let dim = s.dim();
    if !dim.is_multiple_of(2) {
        return Err(CoreError::Internal("symplectic space of odd dimension".into()));
    }
    let omega = |u: &Vec<Rat>, v: &Vec<Rat>| -> Rat {
        let mut acc = Rat::zero();
        for (a, ua) in u.iter().enumerate() {
            if ua.is_zero() {
                continue;
            }
            for (b, vb) in v.iter().enumerate() {
                if !vb.is_zero() {
                    acc += ua * vb * &s.gram[a][b];
                }
            }
        }
        acc
    };
    let mut pool: Vec<Vec<Rat>> = (0..dim)
        .map(|i| {
            let mut v = vec![Rat::zero(); dim];
            v[i] = Rat::from_integer(1.into());
            v
        })
        .collect();
    let mut first_members: Vec<Vec<Rat>> = Vec::new();
    while !pool.is_empty() {
        let p = pool.remove(0);
        let partner = pool.iter().position(|v| !omega(&p, v).is_zero());
        let Some(idx) = partner else {
            return Err(CoreError::Internal("no symplectic partner found; form degenerate".into()));
        };
        let mut q = pool.remove(idx);
        let scale = omega(&p, &q).recip();
        for entry in &mut q {
            *entry = &*entry * &scale;
        }
        // clear omega(p, .) and omega(q, .) on the remaining pool
        for v in pool.iter_mut() {
            let a = omega(&q, v);
            let b = omega(&p, v);
            for k in 0..dim {
                let adj = &(&a * &p[k]) - &(&b * &q[k]);
                v[k] = &v[k] + &adj;
            }
        }
        first_members.push(p);
    }
    let mats: Vec<Mat> = first_members
        .iter()
        .map(|coords| {
            let mut m = Mat::zero(n_amb);
            for (k, c) in coords.iter().enumerate() {
                if !c.is_zero() {
                    m = &m + &s.space.basis()[k].scale(c);
                }
            }
            m
        })
        .collect();
    Ok(Subalg::span(n_amb, &mats))
}

/// The Premet subalgebra l + (pieces of degree <= -2).
pub fn premet_subalgebra(g: &Grading, e: &Mat, l: &Subalg) -> Result<Subalg> {
    let gm1 = g.piece(-1);
    for x in l.basis() {
        if !gm1.contains(x) {
            return Err(CoreError::Input("Lagrangian not contained in g_{-1}".into()));
        }
        for y in l.basis() {
            if !trace_pair(e, &bracket(x, y)?)?.is_zero() {
                return Err(CoreError::Input("chosen subspace of g_{-1} is not isotropic".into()));
            }
        }
    }
    Ok(g.nonpositive_tail().sum(l))
}

/// The four Premet-subalgebra properties for a pair (m, e).
#[derive(Debug, Clone, Serialize)]
pub struct PremetReport {
    /// every basis element nilpotent and the span closed under brackets.
    pub chi1_ad_nilpotent: bool,
    /// dim m equals half the adjoint orbit dimension of e.
    pub chi2_half_orbit_dim: bool,
    /// m intersects the centralizer of e trivially.
    pub chi3_trivial_centralizer_intersection: bool,
    /// tr(e .) kills all brackets of m.
    pub chi4_character: bool,
}

impl PremetReport {
    pub fn pass(&self) -> bool {
        self.chi1_ad_nilpotent
            && self.chi2_half_orbit_dim
            && self.chi3_trivial_centralizer_intersection
            && self.chi4_character
    }
}

/// Check the Premet properties of a candidate subalgebra for `e`.
pub fn premet_report(m: &Subalg, e: &Mat) -> Result<PremetReport> {
    let chi1 = m.basis().iter().all(Mat::is_nilpotent) && m.is_subalgebra();
    let jt = crate::lie::jordan_type(e)?;
    let chi2 = 2 * m.dim() == orbit_dim(&jt);
    let z = centralizer(e, Ambient::Gl);
    let chi3 = m.intersection_dim(&z) == 0;
    let chi4 = chi_of(e, m)?.is_character();
    Ok(PremetReport {
        chi1_ad_nilpotent: chi1,
        chi2_half_orbit_dim: chi2,
        chi3_trivial_centralizer_intersection: chi3,
        chi4_character: chi4,
    })
}
