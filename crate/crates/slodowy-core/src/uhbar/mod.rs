//! The hbar-extended enveloping algebra of sl_n as a PBW rewriting system,
//! quotients by shifted left ideals, invariants by exact linear algebra,
//! and the map from the two-stage reduction to the one-shot reduction.
//!
//! A reduction context orders a basis of sl_n with the subalgebra letters
//! last, so the left-ideal quotient by { y - chi(y) hbar } is realised by
//! rewriting trailing letters. Kazhdan degrees come from the stage grading
//! (degree j letters weigh j + 2, hbar weighs 2); invariant dimensions are
//! organised by PBW level (word length plus hbar power), within which the
//! hbar power is determined and every computation is finite and exact.

pub mod pbw;

pub use pbw::{eval_mat_word, pbw_bracket, pbw_mul, LieBasis, PbwElem, PbwJson, PbwTermJson};

use crate::error::{CoreError, Result};
use crate::gradings::Grading;
use crate::lie::{trace_pair, Mat, Subalg};
use crate::linalg::{relation_kernel, Echelon, SparseVec};
use crate::partitions::Partition;
use crate::rat::Rat;
use crate::stages::{stage_data, StageData};
use num_traits::Zero;
use serde::Serialize;
use std::collections::BTreeMap;

/// Guard against runaway truncation requests.
const MAX_SLICE: usize = 200_000;

/// A quotient-and-invariants context: ordered letters with the subalgebra
/// last, its character, and Kazhdan weights from the stage grading.
#[derive(Debug, Clone)]
pub struct ReductionCtx {
    basis: LieBasis,
    complement: usize,
    chi: Vec<Rat>,
    kaz: Vec<i64>,
}

impl ReductionCtx {
    /// Assemble a context for the pair (m, chi = tr(e .)) inside sl_n,
    /// with Kazhdan degrees taken from `grading`.
    ///
    /// The complement letters are the standard sl_n basis elements away
    /// from the echelon pivots of m: the diagonal h_k first, then the
    /// off-diagonal units in row-major order.
    pub fn new(m: &Subalg, e: &Mat, grading: &Grading) -> Result<Self> {
        let n = m.ambient_dim();
        let (letters, names, complement) = crate::lie::adapted_sl_basis(m)?;
        let chi = m
            .basis()
            .iter()
            .map(|b| trace_pair(e, b))
            .collect::<Result<Vec<_>>>()?;
        let mut kaz = Vec::with_capacity(letters.len());
        for l in &letters {
            let parts = grading.decompose(l);
            if parts.len() != 1 {
                return Err(CoreError::Input(
                    "letters must be homogeneous for the stage grading".into(),
                ));
            }
            kaz.push(parts.keys().next().unwrap() + 2);
        }
        for (idx, &d) in kaz.iter().enumerate() {
            if idx < complement && d <= 0 {
                return Err(CoreError::Input(
                    "complement letters need positive Kazhdan degree for finite truncations".into(),
                ));
            }
            if idx >= complement && d > 2 {
                return Err(CoreError::Input(
                    "subalgebra letters must sit in nonpositive grading degrees".into(),
                ));
            }
        }
        let basis = LieBasis::new(n, letters, names)?;
        Ok(ReductionCtx { basis, complement, chi, kaz })
    }

    pub fn basis(&self) -> &LieBasis {
        &self.basis
    }

    pub fn complement_count(&self) -> usize {
        self.complement
    }

    pub fn subalgebra_letters(&self) -> impl Iterator<Item = usize> + '_ {
        self.complement..self.basis.len()
    }

    pub fn chi_of_letter(&self, letter: usize) -> &Rat {
        &self.chi[letter - self.complement]
    }

    /// Kazhdan degree of a word, hbar not counted.
    pub fn word_kaz(&self, word: &[usize]) -> i64 {
        word.iter().map(|&l| self.kaz[l]).sum()
    }

    /// Kazhdan degree of a monomial with hbar of weight 2.
    pub fn mono_kaz(&self, word: &[usize], hpow: usize) -> i64 {
        self.word_kaz(word) + 2 * hpow as i64
    }

    /// Canonical representative mod the left ideal generated by the
    /// shifted letters y - chi(y) hbar: every trailing subalgebra letter
    /// rewrites to its character value times hbar.
    pub fn reduce(&self, u: &PbwElem) -> PbwElem {
        let mut out = PbwElem::zero();
        'terms: for ((word, h), c) in u.terms() {
            let mut word = word.clone();
            let mut h = *h;
            let mut c = c.clone();
            while let Some(&last) = word.last() {
                if last < self.complement {
                    break;
                }
                word.pop();
                c *= self.chi_of_letter(last);
                h += 1;
                if c.is_zero() {
                    continue 'terms;
                }
            }
            out.add_term((word, h), c);
        }
        out
    }

    /// reduce([x_letter, u]).
    pub fn ad_letter(&self, letter: usize, u: &PbwElem) -> PbwElem {
        let x = PbwElem::letter(letter);
        self.reduce(&pbw_bracket(&self.basis, &x, u))
    }

    /// reduce([a, u]) for a Lie element.
    pub fn ad_mat(&self, a: &Mat, u: &PbwElem) -> Result<PbwElem> {
        let mut x = PbwElem::zero();
        for (idx, c) in self.basis.coordinates(a)? {
            x.add_term((vec![idx], 0), c);
        }
        Ok(self.reduce(&pbw_bracket(&self.basis, &x, u)))
    }

    /// True iff the class of u is killed by every subalgebra letter.
    pub fn is_invariant(&self, u: &PbwElem) -> bool {
        self.subalgebra_letters().all(|l| self.ad_letter(l, u).is_zero())
    }

    /// First subalgebra letter whose action does not vanish, if any.
    pub fn failing_letter(&self, u: &PbwElem) -> Option<String> {
        self.subalgebra_letters()
            .find(|&l| !self.ad_letter(l, u).is_zero())
            .map(|l| self.basis.name(l).to_string())
    }

    /// Evaluate fixture-style terms (coefficient, word of Lie elements,
    /// hbar power) into normal form, unreduced.
    pub fn eval_terms(&self, terms: &[(Rat, Vec<Mat>, usize)]) -> Result<PbwElem> {
        self.eval_terms_shifted(terms, &Rat::zero())
    }

    /// Evaluate terms reading each diagonal word factor d as
    /// d + shift * rho(d) * hbar, where rho(d) is the sum of the simple
    /// coroot coefficients of d. This is the normalization dictionary used
    /// by the worked-example fixtures.
    pub fn eval_terms_shifted(
        &self,
        terms: &[(Rat, Vec<Mat>, usize)],
        shift: &Rat,
    ) -> Result<PbwElem> {
        let n = self.basis.ambient_dim();
        let mut acc = PbwElem::zero();
        for (c, mats, h) in terms {
            let mut prod = PbwElem::term(&[], *h, c.clone());
            for m in mats {
                let mut factor = PbwElem::zero();
                for (idx, co) in self.basis.coordinates(m)? {
                    factor.add_term((vec![idx], 0), co);
                }
                if !shift.is_zero() && m.is_diagonal() && !m.is_zero() {
                    // rho-coefficient: sum over k of the h_k coordinate,
                    // i.e. sum_r (n - r) d_r for diagonal entries d_r
                    let mut rho = Rat::zero();
                    for r in 1..=n {
                        rho += m.entry(r, r) * Rat::from_integer(((n - r) as i64).into());
                    }
                    factor.add_term((vec![], 1), shift * rho);
                }
                prod = pbw_mul(&self.basis, &prod, &factor);
            }
            acc = acc.add(&prod);
        }
        Ok(acc)
    }

    /// All quotient-basis monomials of the given PBW level whose hbar-free
    /// Kazhdan degree is at most `cap` (no cap when `None`).
    pub fn slice(&self, level: usize, cap: Option<i64>) -> Result<Vec<pbw::Mono>> {
        let mut out = Vec::new();
        let mut word = Vec::new();
        self.slice_rec(level, cap, 0, &mut word, &mut out)?;
        Ok(out)
    }

    fn slice_rec(
        &self,
        level: usize,
        cap: Option<i64>,
        min_letter: usize,
        word: &mut Vec<usize>,
        out: &mut Vec<pbw::Mono>,
    ) -> Result<()> {
        if out.len() > MAX_SLICE {
            return Err(CoreError::Resource(format!(
                "truncation slice exceeds {MAX_SLICE} monomials at level {level}"
            )));
        }
        if let Some(cap) = cap {
            if self.word_kaz(word) > cap {
                return Ok(());
            }
        }
        if word.len() <= level {
            out.push((word.clone(), level - word.len()));
        } else {
            return Ok(());
        }
        if word.len() == level {
            return Ok(());
        }
        for l in min_letter..self.complement {
            word.push(l);
            self.slice_rec(level, cap, l, word, out)?;
            word.pop();
        }
        Ok(())
    }

    /// Basis of the invariants within one PBW level (optionally cut at an
    /// hbar-free Kazhdan degree): the joint kernel of all subalgebra
    /// actions, canonically echelonized over the monomial index space.
    pub fn kernel_at_level(&self, level: usize, cap: Option<i64>) -> Result<Vec<PbwElem>> {
        let monos = self.slice(level, cap)?;
        if monos.is_empty() {
            return Ok(Vec::new());
        }
        let m_letters: Vec<usize> = self.subalgebra_letters().collect();
        let mut target_index: BTreeMap<pbw::Mono, usize> = BTreeMap::new();
        let mut columns: Vec<SparseVec> = Vec::with_capacity(monos.len());
        for mono in &monos {
            let u = PbwElem::term(&mono.0, mono.1, Rat::from_integer(1.into()));
            let mut col = SparseVec::new();
            for (block, &l) in m_letters.iter().enumerate() {
                let img = self.ad_letter(l, &u);
                for (m, c) in img.terms() {
                    let next = target_index.len();
                    let idx = *target_index.entry(m.clone()).or_insert(next);
                    col.insert(block * MAX_SLICE + idx, c.clone());
                }
            }
            columns.push(col);
        }
        let kernel = relation_kernel(&columns);
        // normalise to a canonical echelon over the monomial indices
        let rows: Vec<SparseVec> = kernel.rows().to_vec();
        let canon = Echelon::from_rows(rows);
        Ok(canon
            .rows()
            .iter()
            .map(|combo| {
                let mut e = PbwElem::zero();
                for (&i, c) in combo {
                    e.add_term(monos[i].clone(), c.clone());
                }
                e
            })
            .collect())
    }

    /// Vectorize an element over a monomial index map (extending the map).
    fn vectorize(&self, u: &PbwElem, index: &mut BTreeMap<pbw::Mono, usize>) -> SparseVec {
        let mut v = SparseVec::new();
        for (m, c) in u.terms() {
            let next = index.len();
            let idx = *index.entry(m.clone()).or_insert(next);
            v.insert(idx, c.clone());
        }
        v
    }
}

/// Canonical representative mod the shifted left ideal.
pub fn ideal_reduce(ctx: &ReductionCtx, u: &PbwElem) -> PbwElem {
    ctx.reduce(u)
}

/// True iff [a, u] reduces to zero; `a` must lie in the subalgebra.
pub fn ad_invariant(ctx: &ReductionCtx, a: &Mat, u: &PbwElem) -> Result<bool> {
    Ok(ctx.ad_mat(a, u)?.is_zero())
}

/// C[hbar]-module generators of the invariants of hbar-free Kazhdan degree
/// at most `d`, in increasing PBW level.
///
/// Within each level the hbar power of a monomial is determined, so the
/// level slices are finite; a generator is new when it is not hbar times
/// an invariant of the previous level. Generators carry a monomial with
/// hbar power zero, which bounds the levels by d/2.
pub fn invariant_basis(ctx: &ReductionCtx, d: i64) -> Result<Vec<PbwElem>> {
    if d < 0 {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut prev: Vec<PbwElem> = Vec::new();
    for level in 0..=(d / 2) as usize {
        let kernel = ctx.kernel_at_level(level, Some(d))?;
        let mut index = BTreeMap::new();
        let mut ech = Echelon::new();
        for k in &prev {
            ech.insert(ctx.vectorize(&k.mul_hbar(1), &mut index));
        }
        for k in &kernel {
            if ech.insert(ctx.vectorize(k, &mut index)) {
                out.push(k.clone());
            }
        }
        prev = kernel;
    }
    Ok(out)
}

/// The two reduction contexts of a stage datum plus the second-stage data.
#[derive(Debug, Clone)]
pub struct StageCtxs {
    pub data: StageData,
    /// Reduction by m1 at chi1 (the first stage).
    pub first: ReductionCtx,
    /// Reduction by m2 at chi2 (the one-shot reduction).
    pub oneshot: ReductionCtx,
    /// The comoment images xi - kappa(xi) hbar of the k generators, in the
    /// first-stage letters.
    shift_gens: Vec<PbwElem>,
    /// The k generators as first-stage degree-one elements.
    kgen_elems: Vec<PbwElem>,
    kgen_names: Vec<String>,
}

/// Build both contexts for a cover.
pub fn stage_ctxs(mu: &Partition, lam: &Partition) -> Result<StageCtxs> {
    let data = stage_data(mu, lam)?;
    let grading = crate::pyramids::grading_of(&data.filling)?;
    let first = ReductionCtx::new(&data.m1, &data.e1, &grading)?;
    let oneshot = ReductionCtx::new(&data.m2, &data.e2, &grading)?;
    let mut shift_gens = Vec::new();
    let mut kgen_elems = Vec::new();
    let mut kgen_names = Vec::new();
    for (gi, gen) in data.k_gens.iter().enumerate() {
        let mut xi = PbwElem::zero();
        for (idx, c) in first.basis.coordinates(gen)? {
            xi.add_term((vec![idx], 0), c);
        }
        let kappa_val = trace_pair(&data.e2, gen)?;
        let mut shifted = xi.clone();
        shifted.add_term((Vec::new(), 1), -kappa_val);
        kgen_elems.push(xi);
        shift_gens.push(shifted);
        kgen_names.push(format!("K{}", gi + 1));
    }
    Ok(StageCtxs { data, first, oneshot, shift_gens, kgen_elems, kgen_names })
}

impl StageCtxs {
    /// Quantum comoment image of a k element in the first-stage quotient:
    /// the class of its natural lift.
    pub fn comoment(&self, xi: &Mat) -> Result<PbwElem> {
        let mut x = PbwElem::zero();
        for (idx, c) in self.first.basis.coordinates(xi)? {
            x.add_term((vec![idx], 0), c);
        }
        Ok(self.first.reduce(&x))
    }

    /// The shifted comoment generators xi - kappa(xi) hbar.
    pub fn shift_gens(&self) -> &[PbwElem] {
        &self.shift_gens
    }

    /// Spanning vectors of the second-stage ideal at one PBW level:
    /// reduce1(w g) over first-stage invariants w of the previous level
    /// and shifted generators g.
    pub fn second_stage_ideal_at_level(&self, level: usize) -> Result<Vec<PbwElem>> {
        if level == 0 {
            return Ok(Vec::new());
        }
        let w_basis = self.first.kernel_at_level(level - 1, None)?;
        let mut out = Vec::new();
        for w in &w_basis {
            for g in &self.shift_gens {
                let prod = self.first.reduce(&pbw_mul(&self.first.basis, w, g));
                if !prod.is_zero() {
                    out.push(prod);
                }
            }
        }
        Ok(out)
    }

    /// Map a first-stage canonical representative to its one-shot
    /// canonical form, checking the two invariance preconditions and
    /// well-definedness under representative perturbation.
    pub fn phi(&self, u: &PbwElem) -> Result<PbwElem> {
        // m1-invariance of the class
        if let Some(name) = self.first.failing_letter(u) {
            return Err(CoreError::Domain(format!(
                "element is not a first-stage invariant: ad {name} does not vanish"
            )));
        }
        // k-invariance mod the kappa-shifted ideal, level by level
        for (level, part) in u.level_parts() {
            let ideal = self.second_stage_ideal_at_level(level + 1)?;
            let mut index = BTreeMap::new();
            let mut ech = Echelon::new();
            for v in &ideal {
                ech.insert(self.first.vectorize(v, &mut index));
            }
            for (gi, xi) in self.kgen_elems.iter().enumerate() {
                let img = self.first.reduce(&pbw_bracket(&self.first.basis, xi, &part));
                let vec = self.first.vectorize(&img, &mut index);
                if !ech.contains(&vec) {
                    return Err(CoreError::Domain(format!(
                        "class is not k-invariant mod the kappa ideal: generator {}",
                        self.kgen_names[gi]
                    )));
                }
            }
        }
        let image = self.translate_and_reduce(u)?;
        // well-definedness: perturb the representative inside its class
        let mut rng: u64 = 0x5de4_93ab_7c65_11e7;
        let mut next = move || {
            rng ^= rng << 13;
            rng ^= rng >> 7;
            rng ^= rng << 17;
            rng
        };
        for trial in 0..3 {
            let mut pert = u.clone();
            // a multiple of a shifted m1 generator
            let m_letter = self.first.complement
                + (next() as usize) % (self.first.basis.len() - self.first.complement);
            let c = Rat::from_integer(((next() % 5) as i64 - 2).into());
            let mut gen = PbwElem::letter(m_letter);
            gen.add_term((Vec::new(), 1), -self.first.chi_of_letter(m_letter).clone());
            let word_letter = (next() as usize) % self.first.complement;
            let factor = PbwElem::term(&[word_letter], trial % 2, c);
            pert = pert.add(&pbw_mul(&self.first.basis, &factor, &gen));
            // plus an hbar multiple of a shifted comoment generator
            let g = &self.shift_gens[(next() as usize) % self.shift_gens.len()];
            pert = pert.add(&g.mul_hbar(1).scale(&Rat::from_integer(((next() % 3) as i64).into())));
            let image2 = self.translate_and_reduce(&pert)?;
            if image2 != image {
                return Err(CoreError::Internal(
                    "phi image depends on the chosen representative".into(),
                ));
            }
        }
        Ok(image)
    }

    /// Rewrite a first-stage element over the one-shot letters and reduce.
    pub fn translate_and_reduce(&self, u: &PbwElem) -> Result<PbwElem> {
        let mut acc = PbwElem::zero();
        for ((word, h), c) in u.terms() {
            let mats: Vec<Mat> =
                word.iter().map(|&l| self.first.basis.letter(l).clone()).collect();
            acc = acc.add(&eval_mat_word(&self.oneshot.basis, &mats, *h, c)?);
        }
        Ok(self.oneshot.reduce(&acc))
    }

    /// Invariant dimensions of the one-shot reduction per (level, degree).
    pub fn one_shot_dims(&self, p_max: usize, d_max: i64) -> Result<Vec<Vec<usize>>> {
        let mut table = Vec::new();
        for p in 0..=p_max {
            let kernel = self.oneshot.kernel_at_level(p, None)?;
            let mut index = BTreeMap::new();
            let vecs: Vec<SparseVec> =
                kernel.iter().map(|k| self.oneshot.vectorize(k, &mut index)).collect();
            let mono_of: Vec<pbw::Mono> = {
                let mut v = vec![(Vec::new(), 0); index.len()];
                for (m, &i) in &index {
                    v[i] = m.clone();
                }
                v
            };
            let mut row = Vec::new();
            for d in 0..=d_max {
                row.push(dim_within(&vecs, |i| {
                    self.oneshot.word_kaz(&mono_of[i].0) <= d
                }));
            }
            table.push(row);
        }
        Ok(table)
    }

    /// Invariant dimensions of the two-stage reduction per (level, degree):
    /// k-invariants of the first stage modulo the kappa ideal.
    pub fn two_stage_dims(&self, p_max: usize, d_max: i64) -> Result<Vec<Vec<usize>>> {
        let mut table = Vec::new();
        for p in 0..=p_max {
            let w_basis = self.first.kernel_at_level(p, None)?;
            let ideal_next = self.second_stage_ideal_at_level(p + 1)?;
            let ideal_here = self.second_stage_ideal_at_level(p)?;

            let mut index = BTreeMap::new();
            // T_p: members of W_p whose k-action lands in the next-level ideal
            let mut ech_next = Echelon::new();
            for v in &ideal_next {
                ech_next.insert(self.first.vectorize(v, &mut index));
            }
            let mut residuals: Vec<SparseVec> = Vec::new();
            for w in &w_basis {
                let mut stacked = SparseVec::new();
                for (block, xi) in self.kgen_elems.iter().enumerate() {
                    let img = self.first.reduce(&pbw_bracket(&self.first.basis, xi, w));
                    let vec = self.first.vectorize(&img, &mut index);
                    let res = ech_next.residual(&vec);
                    for (i, c) in res {
                        stacked.insert(block * MAX_SLICE + i, c);
                    }
                }
                residuals.push(stacked);
            }
            let t_combos = relation_kernel(&residuals);
            let t_basis: Vec<SparseVec> = t_combos
                .rows()
                .iter()
                .map(|combo| {
                    let mut v = SparseVec::new();
                    for (&wi, c) in combo {
                        let wv = self.first.vectorize(&w_basis[wi], &mut index);
                        crate::linalg::add_scaled(&mut v, &wv, c);
                    }
                    v
                })
                .collect();
            let mono_of: Vec<pbw::Mono> = {
                let mut v = vec![(Vec::new(), 0); index.len()];
                for (m, &i) in &index {
                    v[i] = m.clone();
                }
                v
            };
            let ideal_vecs: Vec<SparseVec> =
                ideal_here.iter().map(|v| self.first.vectorize(v, &mut index)).collect();
            let s_ech = Echelon::from_rows(ideal_vecs);

            let mut row = Vec::new();
            for d in 0..=d_max {
                // dim of (T_p cut at degree d) modulo the level-p ideal
                let allowed = |i: usize| self.first.word_kaz(&mono_of[i].0) <= d;
                let cut = basis_within(&t_basis, allowed);
                let mut ech = s_ech.clone();
                let mut dim = 0;
                for v in &cut {
                    if ech.insert(v.clone()) {
                        dim += 1;
                    }
                }
                row.push(dim);
            }
            table.push(row);
        }
        Ok(table)
    }
}

/// Dimension of the subspace of span(vectors) supported on allowed
/// coordinates.
fn dim_within<F: Fn(usize) -> bool>(vectors: &[SparseVec], allowed: F) -> usize {
    basis_within(vectors, allowed).len()
}

/// Basis of the subspace of span(vectors) supported on allowed coordinates.
fn basis_within<F: Fn(usize) -> bool>(vectors: &[SparseVec], allowed: F) -> Vec<SparseVec> {
    let bad: Vec<SparseVec> = vectors
        .iter()
        .map(|v| v.iter().filter(|(i, _)| !allowed(**i)).map(|(&i, c)| (i, c.clone())).collect())
        .collect();
    let combos = relation_kernel(&bad);
    combos
        .rows()
        .iter()
        .map(|combo| {
            let mut v = SparseVec::new();
            for (&i, c) in combo {
                crate::linalg::add_scaled(&mut v, &vectors[i], c);
            }
            v
        })
        .collect()
}

/// The full sl3 worked-example verification.
#[derive(Debug, Clone, Serialize)]
pub struct Sl3Report {
    /// The normalization dictionary applied to the fixture's Cartan
    /// symbols, as a multiple of hbar.
    pub cartan_shift: String,
    pub z1_invariant_oneshot: bool,
    pub z2_invariant_oneshot: bool,
    pub z1_z2_commute_in_reduction: bool,
    pub lift1_first_stage_invariant: bool,
    pub lift2_first_stage_invariant: bool,
    pub phi_lift1_is_z1: bool,
    pub phi_lift2_is_z2: bool,
    pub dims_agree: bool,
    pub one_shot_dims: Vec<Vec<usize>>,
    pub two_stage_dims: Vec<Vec<usize>>,
    pub failures: Vec<String>,
}

impl Sl3Report {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Check the sl3 example end to end against the fixture formulas.
pub fn verify_sl3(fixture_dir: &std::path::Path) -> Result<Sl3Report> {
    let fx = crate::fixtures::load_sl3(fixture_dir)?;
    let mu = Partition::new(vec![2, 1])?;
    let lam = Partition::new(vec![3])?;
    let ctxs = stage_ctxs(&mu, &lam)?;
    let mut failures = Vec::new();

    let shift = &fx.cartan_shift;
    let z1 = ctxs.oneshot.reduce(&ctxs.oneshot.eval_terms_shifted(&fx.z1, shift)?);
    let z2 = ctxs.oneshot.reduce(&ctxs.oneshot.eval_terms_shifted(&fx.z2, shift)?);
    let z1_inv = ctxs.oneshot.is_invariant(&z1);
    let z2_inv = ctxs.oneshot.is_invariant(&z2);
    if !z1_inv {
        failures.push("z1 is not invariant in the one-shot reduction".into());
    }
    if !z2_inv {
        failures.push("z2 is not invariant in the one-shot reduction".into());
    }

    let prod = pbw_mul(&ctxs.oneshot.basis, &z1, &z2)
        .sub(&pbw_mul(&ctxs.oneshot.basis, &z2, &z1));
    let commute = ctxs.oneshot.reduce(&prod).is_zero();
    if !commute {
        failures.push("z1 and z2 do not commute in the reduction".into());
    }

    let lift1 = ctxs.first.reduce(&ctxs.first.eval_terms_shifted(&fx.lift1, shift)?);
    let lift2 = ctxs.first.reduce(&ctxs.first.eval_terms_shifted(&fx.lift2, shift)?);
    let l1_inv = ctxs.first.is_invariant(&lift1);
    let l2_inv = ctxs.first.is_invariant(&lift2);
    if !l1_inv {
        failures.push("lift of z1 is not m1-invariant mod the eta ideal".into());
    }
    if !l2_inv {
        failures.push("lift of z2 is not m1-invariant mod the eta ideal".into());
    }

    let phi1 = ctxs.phi(&lift1)?;
    let phi2 = ctxs.phi(&lift2)?;
    let phi1_ok = phi1 == z1;
    let phi2_ok = phi2 == z2;
    if !phi1_ok {
        failures.push("phi does not send the first lift to z1".into());
    }
    if !phi2_ok {
        failures.push("phi does not send the second lift to z2".into());
    }

    let p_max = 5;
    let d_max = 8;
    let one_shot = ctxs.one_shot_dims(p_max, d_max)?;
    let two_stage = ctxs.two_stage_dims(p_max, d_max)?;
    let dims_agree = one_shot == two_stage;
    if !dims_agree {
        failures.push(format!(
            "per-degree dimensions differ: one-shot {one_shot:?} vs two-stage {two_stage:?}"
        ));
    }

    Ok(Sl3Report {
        cartan_shift: crate::rat::format_rat(&fx.cartan_shift),
        z1_invariant_oneshot: z1_inv,
        z2_invariant_oneshot: z2_inv,
        z1_z2_commute_in_reduction: commute,
        lift1_first_stage_invariant: l1_inv,
        lift2_first_stage_invariant: l2_inv,
        phi_lift1_is_z1: phi1_ok,
        phi_lift2_is_z2: phi2_ok,
        dims_agree,
        one_shot_dims: one_shot,
        two_stage_dims: two_stage,
        failures,
    })
}
