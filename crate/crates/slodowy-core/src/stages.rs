//! The cover construction: for a dominance cover mu lessdot lambda, build
//! the larger nilpotent e2, the abelian complement k, the subalgebra
//! m2 = m1 + k, and the semisimple element h2' from the right-aligned
//! pyramid of mu, together with the full verification suite.
//!
//! Conventions: the pyramid is right-aligned and carries the standard
//! filling; the box slides from donor row j down to receiver row i < j.
//! b_{i,t} denotes the basis vector of the t-th box from the right in
//! row i (1-based), matching the centralizer basis pictures.

use crate::error::{CoreError, Result};
use crate::gradings::{check_good, grade_from_semisimple, GoodGradingReport, PremetReport};
use crate::lie::{bracket, centralizer, chi_of, jordan_type, Ambient, Char, Mat, Subalg};
use crate::linalg::{add_scaled, scaled, Echelon, SparseVec};
use crate::partitions::{cover_rows, CoverRows, Partition};
use crate::pyramids::{grading_of, nilpotent_of, right_aligned, standard_filling, Filling};
use crate::rat::Rat;
use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

/// Everything the construction produces for one cover mu lessdot lambda.
#[derive(Debug, Clone, Serialize)]
pub struct StageData {
    pub mu: Partition,
    pub lam: Partition,
    pub rows: CoverRows,
    pub filling: Filling,
    pub e1: Mat,
    pub e2: Mat,
    pub h2prime: Mat,
    pub m1: Subalg,
    pub k: Subalg,
    pub m2: Subalg,
    /// The generators E_1, ..., E_{j-i} of k, before echelonization.
    pub k_gens: Vec<Mat>,
    pub chi1: Char,
    pub chi2: Char,
    /// Restriction of chi2 to k.
    pub kappa: Char,
}

/// Build the full stage datum for a cover.
pub fn stage_data(mu: &Partition, lam: &Partition) -> Result<StageData> {
    let rows = cover_rows(mu, lam)?;
    let filling = standard_filling(&right_aligned(mu));
    let e1 = nilpotent_of(&filling);
    let grading = grading_of(&filling)?;
    // right-aligned pyramids give even gradings, so the Premet subalgebra
    // needs no Lagrangian choice
    let m1 = grading.nonpositive_tail();
    let e2 = construct_e2(&filling, &rows)?;
    let k_gens = k_generators(&filling, &rows)?;
    let k = Subalg::span(filling.n(), &k_gens);
    let m2 = m1.sum(&k);
    let h2prime = construct_h2prime(&filling, &rows)?;
    let chi1 = chi_of(&e1, &m1)?;
    let chi2 = chi_of(&e2, &m2)?;
    let kappa = chi_of(&e2, &k)?;
    Ok(StageData {
        mu: mu.clone(),
        lam: lam.clone(),
        rows,
        filling,
        e1,
        e2,
        h2prime,
        m1,
        k,
        m2,
        k_gens,
        chi1,
        chi2,
        kappa,
    })
}

fn check_rows(f: &Filling, r: &CoverRows) -> Result<()> {
    let rows = f.pyramid().rows();
    if r.receiver < 1 || r.donor <= r.receiver || r.donor > rows {
        return Err(CoreError::Input(format!(
            "cover rows ({}, {}) out of range for a pyramid with {rows} rows",
            r.receiver, r.donor
        )));
    }
    Ok(())
}

/// e2 = e1 plus one E_{k l} for every column shared by the receiver and
/// donor rows.
pub fn construct_e2(f: &Filling, r: &CoverRows) -> Result<Mat> {
    check_rows(f, r)?;
    let p = f.pyramid();
    let mut e2 = nilpotent_of(f);
    for t in 0..p.shape().part(r.receiver) {
        let c = p.col(r.receiver, t);
        if let Some(tj) = p.box_at(r.donor, c) {
            let k = f.label_at(r.receiver, t);
            let l = f.label_at(r.donor, tj);
            e2.set(k, l, Rat::from_integer(1.into()));
        }
    }
    Ok(e2)
}

/// The generators E_m = sum of E_{l k} over box pairs at row distance m
/// with equal columns, rows between receiver and donor.
pub fn k_generators(f: &Filling, r: &CoverRows) -> Result<Vec<Mat>> {
    check_rows(f, r)?;
    let p = f.pyramid();
    let n = f.n();
    let mut gens = Vec::new();
    for m in 1..=r.donor - r.receiver {
        let mut em = Mat::zero(n);
        for low in r.receiver..=r.donor - m {
            let high = low + m;
            for t in 0..p.shape().part(low) {
                let c = p.col(low, t);
                if let Some(th) = p.box_at(high, c) {
                    let k = f.label_at(low, t);
                    let l = f.label_at(high, th);
                    em.set(l, k, Rat::from_integer(1.into()));
                }
            }
        }
        gens.push(em);
    }
    Ok(gens)
}

/// k = span(E_1, ..., E_{j-i}) and m2 = m1 + k.
pub fn construct_k_m2(f: &Filling, r: &CoverRows) -> Result<(Subalg, Subalg)> {
    let gens = k_generators(f, r)?;
    let n = f.n();
    let k = Subalg::span(n, &gens);
    let m1 = grading_of(f)?.nonpositive_tail();
    Ok((k.clone(), m1.sum(&k)))
}

/// The semisimple element h2'.
///
/// Rows away from the cover get the usual weights lambda_s - 1 - 2t. The
/// merged rows are indexed by slots t = 0..lambda_i, where slot t addresses
/// the t-th box of row i from the left, extending row i's columns virtually
/// to the right; the row-j partner sits one box left of the slot column.
/// The constant K is fixed by zero trace.
///
/// When the donor and receiver rows are adjacent with a length gap of at
/// least 3 and other rows are present, the trace-zero K is fractional
/// against the centered weights of the untouched rows, so no Z-grading
/// results. In that case the untouched rows are re-centered on the short
/// merged string (an integer relative shift) and K is re-solved; the
/// realigned element still satisfies [h2', e2] = 2 e2 and zero trace, and
/// its grading is good. Covers with a length gap of exactly 2 never hit
/// this branch, so all worked small cases keep their literal values.
pub fn construct_h2prime(f: &Filling, r: &CoverRows) -> Result<Mat> {
    check_rows(f, r)?;
    let p = f.pyramid();
    let n = f.n();
    let (i, j) = (r.receiver, r.donor);
    let mu_i = p.shape().part(i);
    let mu_j = p.shape().part(j);
    let lam_i = mu_i + 1;

    let mut base = Mat::zero(n);
    let mut merged_ind = Mat::zero(n);
    let mut outside_ind = Mat::zero(n);
    let one = Rat::from_integer(1.into());
    for s in 1..=p.rows() {
        if s == i || s == j {
            continue;
        }
        let lam_s = p.shape().part(s) as i64;
        for t in 0..p.shape().part(s) {
            let l = f.label_at(s, t);
            base.set(l, l, Rat::from_integer(BigInt::from(lam_s - 1 - 2 * t as i64)));
            outside_ind.add_to(l, l, &one);
        }
    }
    for t in 0..=lam_i {
        // coefficient lambda_i + K - 2t, split into base and K-indicator
        let coeff = Rat::from_integer(BigInt::from(lam_i as i64 - 2 * t as i64));
        let slot_col = p.col(i, 0) + 2 * t as i64;
        if t < mu_i {
            let l = f.label_at(i, t);
            base.add_to(l, l, &coeff);
            merged_ind.add_to(l, l, &one);
        }
        if let Some(tm) = p.box_at(j, slot_col - 2) {
            let m = f.label_at(j, tm);
            base.add_to(m, m, &coeff);
            merged_ind.add_to(m, m, &one);
        }
    }
    let merged_slots = merged_ind.trace();
    if merged_slots.is_zero() {
        return Err(CoreError::Internal("no slots in the merged-row sum".into()));
    }
    let kconst = -base.trace() / &merged_slots;
    let h2 = &base + &merged_ind.scale(&kconst);
    let integral = {
        let first = h2.entry(1, 1);
        (2..=n).all(|a| crate::rat::is_integer(&(&h2.entry(a, a) - &first)))
    };
    if integral || outside_ind.is_zero() {
        debug_assert!(h2.trace().is_zero());
        return Ok(h2);
    }
    // realignment branch: shift every untouched row by K + (3 - gap), the
    // center of the short merged string, and re-solve the trace
    let gap = (lam_i as i64) - (mu_j as i64 - 1);
    let delta = Rat::from_integer(BigInt::from(3 - gap));
    let outside_slots = outside_ind.trace();
    let total = &merged_slots + &outside_slots;
    let kconst = -(base.trace() + &delta * &outside_slots) / total;
    let shift = &kconst + &delta;
    let h2 = &(&base + &merged_ind.scale(&kconst)) + &outside_ind.scale(&shift);
    if !h2.trace().is_zero() {
        return Err(CoreError::Internal("trace normalization failed".into()));
    }
    Ok(h2)
}

/// The row-shift endomorphisms spanning the centralizer of the pyramid
/// nilpotent: E_i^j[r] sends b_{i,t} to b_{j,t+r} wherever both boxes
/// exist, with r in [0, mu_j) for i <= j and [mu_j - mu_i, mu_j) for i > j.
pub fn ek_basis(shape: &Partition) -> Vec<Mat> {
    ek_basis_for(&standard_filling(&right_aligned(shape)))
}

/// The same basis relative to an arbitrary filled pyramid.
pub fn ek_basis_for(f: &Filling) -> Vec<Mat> {
    ek_indexed(f).into_iter().map(|(_, _, _, m)| m).collect()
}

/// Row-shift basis with its (i, j, r) indices.
pub fn ek_indexed(f: &Filling) -> Vec<(usize, usize, usize, Mat)> {
    let p = f.pyramid();
    let n = f.n();
    let rows = p.rows();
    let mut out = Vec::new();
    for i in 1..=rows {
        let mu_i = p.shape().part(i);
        for j in 1..=rows {
            let mu_j = p.shape().part(j);
            let lo = if i <= j { 0 } else { mu_j - mu_i };
            for r in lo..mu_j {
                let mut m = Mat::zero(n);
                for t in 1..=mu_i {
                    if t + r <= mu_j {
                        let src = f.label_from_right(i, t).unwrap();
                        let dst = f.label_from_right(j, t + r).unwrap();
                        m.set(dst, src, Rat::from_integer(1.into()));
                    }
                }
                out.push((i, j, r, m));
            }
        }
    }
    out
}

/// Explicit Jordan chains for e2, read off the merged pyramid rows.
///
/// Each chain lists vectors so that e2 maps every element to the next and
/// the last to zero; chain lengths form the partition lambda.
pub fn jordan_strings_e2(f: &Filling, r: &CoverRows) -> Result<Vec<Vec<SparseVec>>> {
    check_rows(f, r)?;
    let p = f.pyramid();
    let (i, j) = (r.receiver, r.donor);
    let mu_i = p.shape().part(i);
    let mu_j = p.shape().part(j);
    let basis = |row: usize, t: usize| -> SparseVec {
        let label = f.label_from_right(row, t).expect("box index in range");
        SparseVec::from([(label - 1, Rat::from_integer(1.into()))])
    };
    let mut chains = Vec::new();
    for s in 1..=p.rows() {
        if s == i || s == j {
            continue;
        }
        let len = p.shape().part(s);
        chains.push((1..=len).map(|t| basis(s, t)).collect::<Vec<_>>());
    }
    // merged chain of length mu_i + 1 = lambda_i:
    // b_{j,1} -> (k b_{i,k} + b_{j,k+1}) -> ... -> mu_j b_{i,t}
    let mut long = vec![basis(j, 1)];
    for k in 1..mu_j {
        let mut v = scaled(&basis(i, k), &Rat::from_integer(BigInt::from(k as i64)));
        add_scaled(&mut v, &basis(j, k + 1), &Rat::from_integer(1.into()));
        long.push(v);
    }
    for t in mu_j..=mu_i {
        long.push(scaled(&basis(i, t), &Rat::from_integer(BigInt::from(mu_j as i64))));
    }
    chains.push(long);
    // merged chain of length mu_j - 1 = lambda_j:
    // ((mu_j - k) b_{i,k} - b_{j,k+1}), advancing with k
    if mu_j >= 2 {
        let mut short = Vec::new();
        for k in 1..mu_j {
            let mut v =
                scaled(&basis(i, k), &Rat::from_integer(BigInt::from((mu_j - k) as i64)));
            add_scaled(&mut v, &basis(j, k + 1), &(-Rat::from_integer(1.into())));
            short.push(v);
        }
        chains.push(short);
    }
    chains.sort_by_key(|c| std::cmp::Reverse(c.len()));
    Ok(chains)
}

/// Every check of the two theorems and the goodness lemma for one cover.
#[derive(Debug, Clone, Serialize)]
pub struct StageReport {
    pub mu: Partition,
    pub lam: Partition,
    pub rows: CoverRows,
    /// jordan_type(e2) = lambda.
    pub jordan_type_matches: bool,
    /// m2 closed under brackets.
    pub sr1_m2_closed: bool,
    /// m1 is an ideal in m2.
    pub sr1_m1_ideal: bool,
    /// [m2, m2] lands inside m1.
    pub m2_commutators_in_m1: bool,
    /// k is abelian.
    pub sr1_k_abelian: bool,
    /// chi2 kills [m2, m2].
    pub sr2_chi2_character: bool,
    /// chi2 restricted to m1 equals chi1.
    pub sr2_restricts_to_chi1: bool,
    /// chi1([k, m1]) = 0.
    pub sr3_k_annihilates_chi1: bool,
    /// chi1-chi4 for the pair (e2, m2).
    pub premet: PremetReport,
    /// [h2', e2] = 2 e2.
    pub h2_bracket_gives_2e2: bool,
    /// tr h2' = 0.
    pub h2_trace_zero: bool,
    /// the h2' grading is good for e2.
    pub h2_good: GoodGradingReport,
    /// [h2', m1] inside m1.
    pub h2_preserves_m1: bool,
    /// the explicit chains are e2-chains, a basis, with lengths lambda.
    pub jordan_strings_valid: bool,
    /// span of the row-shift basis equals ker(ad e1).
    pub ek_span_matches_centralizer: bool,
    /// its size is sum of min(mu_a, mu_b).
    pub ek_count_matches: bool,
}

impl StageReport {
    pub fn pass(&self) -> bool {
        self.failures().is_empty()
    }

    /// Names of the failed sub-checks.
    pub fn failures(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        let mut record = |ok: bool, name: &'static str| {
            if !ok {
                out.push(name);
            }
        };
        record(self.jordan_type_matches, "jordan_type");
        record(self.sr1_m2_closed, "sr1_m2_closed");
        record(self.sr1_m1_ideal, "sr1_m1_ideal");
        record(self.m2_commutators_in_m1, "m2_commutators_in_m1");
        record(self.sr1_k_abelian, "sr1_k_abelian");
        record(self.sr2_chi2_character, "sr2_chi2_character");
        record(self.sr2_restricts_to_chi1, "sr2_restricts_to_chi1");
        record(self.sr3_k_annihilates_chi1, "sr3_k_annihilates_chi1");
        record(self.premet.chi1_ad_nilpotent, "chi1");
        record(self.premet.chi2_half_orbit_dim, "chi2");
        record(self.premet.chi3_trivial_centralizer_intersection, "chi3");
        record(self.premet.chi4_character, "chi4");
        record(self.h2_bracket_gives_2e2, "h2_bracket");
        record(self.h2_trace_zero, "h2_trace");
        record(self.h2_good.pass(), "h2_good");
        record(self.h2_preserves_m1, "h2_preserves_m1");
        record(self.jordan_strings_valid, "jordan_strings");
        record(self.ek_span_matches_centralizer, "ek_span");
        record(self.ek_count_matches, "ek_count");
        out
    }
}

/// Run every check for the cover mu lessdot lambda.
pub fn verify_stage(mu: &Partition, lam: &Partition) -> Result<StageReport> {
    let sd = stage_data(mu, lam)?;
    let jordan_type_matches = jordan_type(&sd.e2)? == *lam;

    let sr1_m2_closed = sd.m2.is_subalgebra();
    let sr1_m1_ideal = sd.m1.is_ideal_under(&sd.m2);
    let sr1_k_abelian = sd.k.is_abelian();
    let m2_commutators_in_m1 = sd.m2.basis().iter().enumerate().all(|(a, x)| {
        sd.m2.basis().iter().skip(a + 1).all(|y| sd.m1.contains(&bracket(x, y).unwrap()))
    });

    let sr2_chi2_character = sd.chi2.is_character();
    let sr2_restricts_to_chi1 = sd
        .m1
        .basis()
        .iter()
        .all(|b| sd.chi2.eval(b).ok() == sd.chi1.eval(b).ok());

    let mut sr3 = true;
    for xi in sd.k.basis() {
        for y in sd.m1.basis() {
            let br = bracket(xi, y)?;
            if !sd.m1.contains(&br) || !sd.chi1.eval(&br)?.is_zero() {
                sr3 = false;
            }
        }
    }

    let premet = crate::gradings::premet_report(&sd.m2, &sd.e2)?;

    let two_e2 = sd.e2.scale(&Rat::from_integer(2.into()));
    let h2_bracket_gives_2e2 = bracket(&sd.h2prime, &sd.e2)? == two_e2;
    let h2_trace_zero = sd.h2prime.trace().is_zero();
    let h2_grading = grade_from_semisimple(&sd.h2prime)?;
    let h2_good = check_good(&h2_grading, &sd.e2)?;
    let h2_preserves_m1 = sd
        .m1
        .basis()
        .iter()
        .all(|b| sd.m1.contains(&bracket(&sd.h2prime, b).unwrap()));

    let strings = jordan_strings_e2(&sd.filling, &sd.rows)?;
    let jordan_strings_valid = validate_strings(&sd.e2, lam, &strings);

    let ek = ek_basis(mu);
    let z1 = centralizer(&sd.e1, Ambient::Gl);
    let ek_span = Subalg::span(sd.e1.dim(), &ek);
    let ek_span_matches_centralizer = ek_span == z1;
    let expected = ek_expected_count(mu);
    let ek_count_matches = ek.len() == expected && ek_span.dim() == expected;

    Ok(StageReport {
        mu: mu.clone(),
        lam: lam.clone(),
        rows: sd.rows,
        jordan_type_matches,
        sr1_m2_closed,
        sr1_m1_ideal,
        m2_commutators_in_m1,
        sr1_k_abelian,
        sr2_chi2_character,
        sr2_restricts_to_chi1,
        sr3_k_annihilates_chi1: sr3,
        premet,
        h2_bracket_gives_2e2,
        h2_trace_zero,
        h2_good,
        h2_preserves_m1,
        jordan_strings_valid,
        ek_span_matches_centralizer,
        ek_count_matches,
    })
}

/// sum over row pairs of min(mu_a, mu_b): the centralizer dimension in gl_n.
pub fn ek_expected_count(mu: &Partition) -> usize {
    (1..=mu.len())
        .flat_map(|a| (1..=mu.len()).map(move |b| (a, b)))
        .map(|(a, b)| mu.part(a).min(mu.part(b)))
        .sum()
}

fn validate_strings(e2: &Mat, lam: &Partition, chains: &[Vec<SparseVec>]) -> bool {
    let mut lengths: Vec<usize> = chains.iter().map(Vec::len).collect();
    lengths.sort_unstable();
    lengths.reverse();
    if lengths != lam.parts() {
        return false;
    }
    for chain in chains {
        for (a, b) in chain.iter().zip(chain.iter().skip(1)) {
            if &e2.mul_vec(a) != b {
                return false;
            }
        }
        if !e2.mul_vec(chain.last().unwrap()).is_empty() {
            return false;
        }
    }
    let all: Vec<SparseVec> = chains.iter().flatten().cloned().collect();
    all.len() == e2.dim() && Echelon::from_rows(all).rank() == e2.dim()
}
