//! Classical shadow: the Lie-Poisson bracket on polynomial functions on
//! the dual of sl_n, reduction modulo the character ideal, invariant
//! lifts of slice coordinates, and the sl4 worked-example verification.
//!
//! Coordinates are an adapted basis of sl_n (complement letters first,
//! subalgebra letters last), so the ideal of the character level set is
//! generated by affine-linear functions in the trailing coordinates and
//! reduction is a substitution.

use crate::error::{CoreError, Result};
use crate::fixtures::{RawPoly, Sl4Fixture};
use crate::lie::{adapted_sl_basis, jordan_type, sl2_complete, trace_pair, Mat, Subalg};
use crate::linalg::{solve_affine, SolveOutcome, SparseVec};
use crate::rat::{format_rat, parse_rat, Rat};
use crate::uhbar::LieBasis;
use num_traits::Zero;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;

/// Exponent vector, one slot per variable.
pub type Expo = Vec<u16>;

/// Multivariate polynomial with rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Expo, Rat>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rat) -> Self {
        let mut p = Poly::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn var(nvars: usize, idx: usize) -> Self {
        let mut e = vec![0u16; nvars];
        e[idx] = 1;
        let mut p = Poly::zero(nvars);
        p.add_term(e, Rat::from_integer(1.into()));
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Expo, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn degree(&self) -> usize {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&x| x as usize).sum())
            .max()
            .unwrap_or(0)
    }

    pub fn coeff(&self, e: &Expo) -> Rat {
        self.terms.get(e).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn add_term(&mut self, e: Expo, c: Rat) {
        assert_eq!(e.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(&-Rat::from_integer(1.into())))
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = Poly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Expo = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    /// Partial derivative in variable `idx`.
    pub fn derivative(&self, idx: usize) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[idx] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[idx] -= 1;
            out.add_term(e2, c * Rat::from_integer((e[idx] as i64).into()));
        }
        out
    }

    /// Substitute each variable by a polynomial in a new variable space.
    pub fn substitute(&self, images: &[Poly]) -> Poly {
        assert_eq!(images.len(), self.nvars);
        let target_vars = images.first().map(Poly::nvars).unwrap_or(0);
        let one = Poly::constant(target_vars, Rat::from_integer(1.into()));
        let mut powers: Vec<Vec<Poly>> =
            images.iter().map(|p| vec![one.clone(), p.clone()]).collect();
        let mut out = Poly::zero(target_vars);
        for (e, c) in &self.terms {
            let mut term = Poly::constant(target_vars, c.clone());
            for (v, &pow) in e.iter().enumerate() {
                while powers[v].len() <= pow as usize {
                    let next = powers[v].last().unwrap().mul(&images[v]);
                    powers[v].push(next);
                }
                if pow > 0 {
                    term = term.mul(&powers[v][pow as usize]);
                }
            }
            out = out.add(&term);
        }
        out
    }

    /// Render using the given variable names.
    pub fn display<'a>(&'a self, names: &'a [String]) -> PolyDisplay<'a> {
        PolyDisplay { poly: self, names }
    }

    /// Parse a raw fixture polynomial.
    pub fn from_raw(raw: &RawPoly, nvars: usize) -> Result<Poly> {
        let mut p = Poly::zero(nvars);
        for (c, e) in raw {
            if e.len() != nvars {
                return Err(CoreError::Fixture(format!(
                    "exponent vector {e:?} has wrong length, expected {nvars}"
                )));
            }
            let coeff = parse_rat(c).map_err(CoreError::Fixture)?;
            p.add_term(e.iter().map(|&x| x as u16).collect(), coeff);
        }
        Ok(p)
    }
}

pub struct PolyDisplay<'a> {
    poly: &'a Poly,
    names: &'a [String],
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.poly.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})", format_rat(c))?;
            for (v, &pow) in e.iter().enumerate() {
                match pow {
                    0 => {}
                    1 => write!(f, " {}", self.names[v])?,
                    _ => write!(f, " {}^{}", self.names[v], pow)?,
                }
            }
        }
        Ok(())
    }
}

/// Coordinates on the dual of sl_n with their Lie-Poisson structure
/// constants, adapted to a subalgebra (its letters come last).
#[derive(Debug, Clone)]
pub struct PoissonSpace {
    basis: LieBasis,
    complement: usize,
    chi: Vec<Rat>,
}

impl PoissonSpace {
    /// Space adapted to the pair (m, chi = tr(e .)).
    pub fn new(m: &Subalg, e: &Mat) -> Result<Self> {
        let (letters, names, complement) = adapted_sl_basis(m)?;
        let n = m.ambient_dim();
        let chi = m.basis().iter().map(|b| trace_pair(e, b)).collect::<Result<Vec<_>>>()?;
        let basis = LieBasis::new(n, letters, names)?;
        Ok(PoissonSpace { basis, complement, chi })
    }

    pub fn basis(&self) -> &LieBasis {
        &self.basis
    }

    pub fn nvars(&self) -> usize {
        self.basis.len()
    }

    pub fn names(&self) -> &[String] {
        self.basis.names()
    }

    pub fn complement_count(&self) -> usize {
        self.complement
    }

    pub fn subalgebra_vars(&self) -> impl Iterator<Item = usize> + '_ {
        self.complement..self.basis.len()
    }

    pub fn chi_of_var(&self, var: usize) -> &Rat {
        &self.chi[var - self.complement]
    }

    /// The linear coordinate function of a Lie element.
    pub fn coordinate_of(&self, m: &Mat) -> Result<Poly> {
        let mut p = Poly::zero(self.nvars());
        for (idx, c) in self.basis.coordinates(m)? {
            let mut e = vec![0u16; self.nvars()];
            e[idx] = 1;
            p.add_term(e, c);
        }
        Ok(p)
    }

    /// The bracket of two coordinate functions, as a linear polynomial.
    fn coord_bracket(&self, a: usize, b: usize) -> Poly {
        let br = crate::lie::bracket(self.basis.letter(a), self.basis.letter(b)).unwrap();
        self.coordinate_of(&br).expect("letters closed under bracket")
    }

    /// Lie-Poisson bracket, extended as a biderivation.
    pub fn lp_bracket(&self, f: &Poly, g: &Poly) -> Poly {
        assert_eq!(f.nvars(), self.nvars());
        assert_eq!(g.nvars(), self.nvars());
        let used = |p: &Poly| -> Vec<usize> {
            let mut seen = vec![false; self.nvars()];
            for (e, _) in p.terms() {
                for (v, &pow) in e.iter().enumerate() {
                    if pow > 0 {
                        seen[v] = true;
                    }
                }
            }
            seen.iter().enumerate().filter(|(_, &s)| s).map(|(v, _)| v).collect()
        };
        let mut out = Poly::zero(self.nvars());
        for &a in &used(f) {
            let dfa = f.derivative(a);
            for &b in &used(g) {
                if a == b {
                    continue;
                }
                let br = self.coord_bracket(a, b);
                if br.is_zero() {
                    continue;
                }
                out = out.add(&dfa.mul(&g.derivative(b)).mul(&br));
            }
        }
        out
    }

    /// Substitute each subalgebra coordinate by its character value.
    pub fn reduce_mod_ichi(&self, f: &Poly) -> Poly {
        let mut out = Poly::zero(self.nvars());
        for (e, c) in f.terms() {
            let mut coeff = c.clone();
            let mut e2 = e.clone();
            for (off, slot) in e2[self.complement..].iter_mut().enumerate() {
                let pow = *slot;
                if pow > 0 {
                    let chi = self.chi_of_var(self.complement + off);
                    for _ in 0..pow {
                        coeff = &coeff * chi;
                    }
                    *slot = 0;
                    if coeff.is_zero() {
                        break;
                    }
                }
            }
            out.add_term(e2, coeff);
        }
        out
    }

    /// True iff {x_m, f} lies in the character ideal for every subalgebra
    /// coordinate.
    pub fn is_invariant(&self, f: &Poly) -> bool {
        self.failing_generator(f).is_none()
    }

    /// First subalgebra coordinate whose flow moves f off the ideal.
    pub fn failing_generator(&self, f: &Poly) -> Option<String> {
        for v in self.complement..self.nvars() {
            let xm = Poly::var(self.nvars(), v);
            if !self.reduce_mod_ichi(&self.lp_bracket(&xm, f)).is_zero() {
                return Some(self.basis.name(v).to_string());
            }
        }
        None
    }

    /// Reduced bracket of two invariants.
    pub fn reduced_bracket(&self, f: &Poly, g: &Poly) -> Result<Poly> {
        for (name, side) in
            [(self.failing_generator(f), "left"), (self.failing_generator(g), "right")]
        {
            if let Some(generator) = name {
                return Err(CoreError::Domain(format!(
                    "{side} argument is not invariant: generator {generator}"
                )));
            }
        }
        Ok(self.reduce_mod_ichi(&self.lp_bracket(f, g)))
    }

    /// An m-invariant polynomial of degree <= bound agreeing with `target`
    /// on the section, or `None` when no lift exists at this bound.
    ///
    /// The section assigns to every coordinate letter its restriction, a
    /// polynomial in the section variables. The lift is sought among
    /// polynomials in the complement coordinates only, which loses nothing:
    /// the ideal substitution of an invariant is again invariant.
    pub fn invariant_lift(
        &self,
        section: &[Poly],
        target: &Poly,
        bound: usize,
    ) -> Result<Option<Poly>> {
        assert_eq!(section.len(), self.nvars());
        let nv = self.nvars();
        let mut monos: Vec<Expo> = Vec::new();
        let mut cur = vec![0u16; nv];
        fn enumerate(v: usize, left: usize, complement: usize, cur: &mut Expo, out: &mut Vec<Expo>) {
            if v == complement {
                out.push(cur.clone());
                return;
            }
            for p in 0..=left {
                cur[v] = p as u16;
                enumerate(v + 1, left - p, complement, cur, out);
            }
            cur[v] = 0;
        }
        enumerate(0, bound, self.complement, &mut cur, &mut monos);

        let mut rows: Vec<(SparseVec, Rat)> = Vec::new();
        let mut row_index: BTreeMap<(usize, Expo), usize> = BTreeMap::new();
        for (block, v) in self.subalgebra_vars().enumerate() {
            let xm = Poly::var(nv, v);
            for (mi, mono) in monos.iter().enumerate() {
                let mut mp = Poly::zero(nv);
                mp.add_term(mono.clone(), Rat::from_integer(1.into()));
                let image = self.reduce_mod_ichi(&self.lp_bracket(&xm, &mp));
                for (e, c) in image.terms() {
                    let key = (block, e.clone());
                    let next = row_index.len();
                    let ri = *row_index.entry(key).or_insert(next);
                    while rows.len() <= ri {
                        rows.push((SparseVec::new(), Rat::zero()));
                    }
                    rows[ri].0.insert(mi, c.clone());
                }
            }
        }
        let section_vars = section.first().map(Poly::nvars).unwrap_or(0);
        let mut sec_rows: BTreeMap<Expo, (SparseVec, Rat)> = BTreeMap::new();
        for (mi, mono) in monos.iter().enumerate() {
            let mut mp = Poly::zero(nv);
            mp.add_term(mono.clone(), Rat::from_integer(1.into()));
            let restricted = mp.substitute(section);
            for (e, c) in restricted.terms() {
                sec_rows
                    .entry(e.clone())
                    .or_insert_with(|| (SparseVec::new(), Rat::zero()))
                    .0
                    .insert(mi, c.clone());
            }
        }
        for (e, c) in target.terms() {
            if e.len() != section_vars {
                return Err(CoreError::Input("target lives in the wrong variable space".into()));
            }
            sec_rows
                .entry(e.clone())
                .or_insert_with(|| (SparseVec::new(), Rat::zero()))
                .1 = c.clone();
        }
        rows.extend(sec_rows.into_values());
        match solve_affine(&rows) {
            SolveOutcome::Inconsistent => Ok(None),
            SolveOutcome::Solution(sol) => {
                let mut p = Poly::zero(nv);
                for (mi, c) in sol {
                    p.add_term(monos[mi].clone(), c);
                }
                Ok(Some(p))
            }
        }
    }
}

/// Poisson bracket on a polynomial ring presented by a bracket table on
/// its generators, extended by the Leibniz rule.
pub fn table_bracket(table: &dyn Fn(usize, usize) -> Poly, f: &Poly, g: &Poly) -> Poly {
    let nv = f.nvars();
    let mut out = Poly::zero(nv);
    for a in 0..nv {
        let dfa = f.derivative(a);
        if dfa.is_zero() {
            continue;
        }
        for b in 0..nv {
            if a == b {
                continue;
            }
            let dgb = g.derivative(b);
            if dgb.is_zero() {
                continue;
            }
            let br = table(a, b);
            if br.is_zero() {
                continue;
            }
            out = out.add(&dfa.mul(&dgb).mul(&br));
        }
    }
    out
}

/// Everything the sl4 classical verification produces.
#[derive(Debug, Clone, Serialize)]
pub struct Sl4Report {
    /// The single scalar (sign included) relating computed brackets to the
    /// expected tables.
    pub global_scalar: Option<String>,
    pub slice_bracket_matches: usize,
    pub slice_bracket_total: usize,
    pub reduced_bracket_matches: usize,
    pub reduced_bracket_total: usize,
    pub phi_is_ring_isomorphism: bool,
    pub phi_respects_brackets: bool,
    /// degrees of the invariant lifts, slice then reduced coordinates.
    pub lift_degrees: Vec<usize>,
    pub failures: Vec<String>,
}

impl Sl4Report {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

struct Side {
    space: PoissonSpace,
    vars: Vec<String>,
    section: Vec<Poly>,
    lifts: Vec<Poly>,
    degrees: Vec<usize>,
}

fn section_matrix(raw: &[Vec<RawPoly>], nvars: usize, n: usize) -> Result<Vec<Vec<Poly>>> {
    let mut out = Vec::new();
    for row in raw {
        let mut r = Vec::new();
        for entry in row {
            r.push(Poly::from_raw(entry, nvars)?);
        }
        if r.len() != n {
            return Err(CoreError::Fixture("bad section row".into()));
        }
        out.push(r);
    }
    Ok(out)
}

/// The matrix at the origin of a polynomial matrix family.
fn base_point(section: &[Vec<Poly>], n: usize) -> Mat {
    let mut m = Mat::zero(n);
    for (i, row) in section.iter().enumerate() {
        for (j, p) in row.iter().enumerate() {
            let c = p.coeff(&vec![0; p.nvars()]);
            if !c.is_zero() {
                m.set(i + 1, j + 1, c);
            }
        }
    }
    m
}

fn build_side(
    space: PoissonSpace,
    vars: Vec<String>,
    section_entries: Vec<Vec<Poly>>,
    bound: usize,
    label: &str,
    failures: &mut Vec<String>,
) -> Result<Side> {
    let kvars = vars.len();
    // restriction of every coordinate letter to the section:
    // tr(S . letter) as a polynomial in the section variables
    let mut section = Vec::with_capacity(space.nvars());
    for idx in 0..space.nvars() {
        let letter = space.basis.letter(idx);
        let mut p = Poly::zero(kvars);
        for (i, j, c) in letter.iter() {
            // tr(S B) picks up S_ji B_ij
            p = p.add(&section_entries[j - 1][i - 1].scale(c));
        }
        section.push(p);
    }
    // the family must stay on the character level set
    for v in space.subalgebra_vars() {
        let expected = Poly::constant(kvars, space.chi_of_var(v).clone());
        if section[v] != expected {
            failures.push(format!(
                "{label}: section leaves the character level set at {}",
                space.basis.name(v)
            ));
        }
    }
    let mut lifts = Vec::new();
    let mut degrees = Vec::new();
    for (k, name) in vars.iter().enumerate() {
        let target = Poly::var(kvars, k);
        // ascending search yields the minimal-degree invariant lift
        let mut found = None;
        for b in 1..=bound {
            if let Some(l) = space.invariant_lift(&section, &target, b)? {
                found = Some(l);
                break;
            }
        }
        match found {
            Some(l) => {
                degrees.push(l.degree());
                lifts.push(l);
            }
            None => {
                failures.push(format!("{label}: no invariant lift of {name} at degree {bound}"));
                degrees.push(0);
                lifts.push(Poly::zero(space.nvars()));
            }
        }
    }
    Ok(Side { space, vars, section, lifts, degrees })
}

/// Expected-bracket lookup: the fixture lists nonzero pairs only.
fn expected_bracket(
    entries: &[crate::fixtures::BracketEntry],
    vars: &[String],
    a: usize,
    b: usize,
) -> Result<Poly> {
    let nv = vars.len();
    for e in entries {
        let (li, ri) =
            (vars.iter().position(|v| *v == e.lhs), vars.iter().position(|v| *v == e.rhs));
        let (Some(li), Some(ri)) = (li, ri) else {
            return Err(CoreError::Fixture(format!("unknown bracket pair {},{}", e.lhs, e.rhs)));
        };
        if li == a && ri == b {
            return Poly::from_raw(&e.value, nv);
        }
        if li == b && ri == a {
            return Ok(Poly::from_raw(&e.value, nv)?.scale(&-Rat::from_integer(1.into())));
        }
    }
    Ok(Poly::zero(nv))
}

/// Compare computed section brackets against a table, sharing one scalar.
fn compare_table(
    side: &Side,
    entries: &[crate::fixtures::BracketEntry],
    scalar: &mut Option<Rat>,
    label: &str,
    failures: &mut Vec<String>,
) -> Result<(usize, usize)> {
    let k = side.vars.len();
    let mut matches = 0;
    let mut total = 0;
    for a in 0..k {
        for b in a + 1..k {
            total += 1;
            let raw = side.space.lp_bracket(&side.lifts[a], &side.lifts[b]);
            let computed = raw.substitute(&side.section);
            let expected = expected_bracket(entries, &side.vars, a, b)?;
            let ok = match (computed.is_zero(), expected.is_zero()) {
                (true, true) => true,
                (false, true) | (true, false) => false,
                (false, false) => {
                    let (e0, c0) = {
                        let (e, c) = expected.terms().next().unwrap();
                        (e.clone(), c.clone())
                    };
                    let ratio = computed.coeff(&e0) / c0;
                    if ratio.is_zero() {
                        false
                    } else {
                        match scalar {
                            None => {
                                let ok = computed == expected.scale(&ratio);
                                if ok {
                                    *scalar = Some(ratio);
                                }
                                ok
                            }
                            Some(s) => computed == expected.scale(s),
                        }
                    }
                }
            };
            if ok {
                matches += 1;
            } else {
                failures.push(format!(
                    "{label}: bracket {{{}, {}}} mismatch",
                    side.vars[a], side.vars[b]
                ));
            }
        }
    }
    Ok((matches, total))
}

/// Verify the sl4 worked example end to end.
pub fn verify_sl4(fixture_dir: &std::path::Path) -> Result<Sl4Report> {
    let fx = crate::fixtures::load_sl4(fixture_dir)?;
    let n = fx.n;
    let mut failures = Vec::new();

    // slice side: the Premet reduction for the nilpotent at the section's
    // origin, graded by its Jordan-basis sl2-triple
    let slice_entries = section_matrix(&fx.slice_section, fx.slice_vars.len(), n)?;
    let e_slice = base_point(&slice_entries, n);
    if jordan_type(&e_slice)? != crate::partitions::Partition::new(vec![3, 1])? {
        failures.push("slice base point is not of type (3,1)".into());
    }
    let (_, h, _) = sl2_complete(&e_slice)?;
    let grading = crate::gradings::grade_from_semisimple(&h)?;
    let form = crate::gradings::symplectic_on_gminus1(&grading, &e_slice)?;
    let lagrangian = crate::gradings::choose_lagrangian(&form)?;
    let m_slice = crate::gradings::premet_subalgebra(&grading, &e_slice, &lagrangian)?;
    let slice_space = PoissonSpace::new(&m_slice, &e_slice)?;
    let slice =
        build_side(slice_space, fx.slice_vars.clone(), slice_entries, 4, "slice", &mut failures)?;

    // reduced side: the stage subalgebra m2 for (2,2) -> (3,1)
    let mu = crate::partitions::Partition::new(vec![2, 2])?;
    let lam = crate::partitions::Partition::new(vec![3, 1])?;
    let sd = crate::stages::stage_data(&mu, &lam)?;
    let reduced_entries = section_matrix(&fx.reduced_section, fx.reduced_vars.len(), n)?;
    let e_reduced = base_point(&reduced_entries, n);
    if e_reduced != sd.e2 {
        failures.push("reduced base point differs from the stage nilpotent".into());
    }
    let reduced_space = PoissonSpace::new(&sd.m2, &sd.e2)?;
    let reduced = build_side(
        reduced_space,
        fx.reduced_vars.clone(),
        reduced_entries,
        4,
        "reduced",
        &mut failures,
    )?;

    // compare both bracket tables against one shared scalar
    let mut scalar: Option<Rat> = None;
    let (sm, st) = compare_table(&slice, &fx.slice_brackets, &mut scalar, "slice", &mut failures)?;
    let (rm, rt) =
        compare_table(&reduced, &fx.reduced_brackets, &mut scalar, "reduced", &mut failures)?;

    // the comparison map: ring isomorphism witness and bracket
    // compatibility through the expected tables
    let kv_slice = fx.slice_vars.len();
    let kv_reduced = fx.reduced_vars.len();
    let mut phi_images = Vec::new();
    for v in &fx.slice_vars {
        let raw =
            fx.phi.get(v).ok_or_else(|| CoreError::Fixture(format!("phi missing image of {v}")))?;
        phi_images.push(Poly::from_raw(raw, kv_reduced)?);
    }
    let phi_iso = check_phi_iso(&fx, &phi_images, kv_reduced, &mut failures)?;

    let reduced_table_entries = fx.reduced_brackets.clone();
    let reduced_vars = fx.reduced_vars.clone();
    let table = move |a: usize, b: usize| -> Poly {
        expected_bracket(&reduced_table_entries, &reduced_vars, a, b).expect("reduced table lookup")
    };
    let mut phi_brackets_ok = true;
    for a in 0..kv_slice {
        for b in a + 1..kv_slice {
            let lhs_slice = expected_bracket(&fx.slice_brackets, &fx.slice_vars, a, b)?;
            let lhs = lhs_slice.substitute(&phi_images);
            let rhs = table_bracket(&table, &phi_images[a], &phi_images[b]);
            if lhs != rhs {
                phi_brackets_ok = false;
                failures.push(format!(
                    "phi does not intertwine {{{}, {}}}",
                    fx.slice_vars[a], fx.slice_vars[b]
                ));
            }
        }
    }

    let lift_degrees = slice.degrees.iter().chain(reduced.degrees.iter()).copied().collect();
    Ok(Sl4Report {
        global_scalar: scalar.map(|s| format_rat(&s)),
        slice_bracket_matches: sm,
        slice_bracket_total: st,
        reduced_bracket_matches: rm,
        reduced_bracket_total: rt,
        phi_is_ring_isomorphism: phi_iso,
        phi_respects_brackets: phi_brackets_ok,
        lift_degrees,
        failures,
    })
}

/// Witness that phi is a ring isomorphism: the reduced variables are
/// recovered from the phi images by explicit triangular formulas.
fn check_phi_iso(
    fx: &Sl4Fixture,
    phi: &[Poly],
    kv: usize,
    failures: &mut Vec<String>,
) -> Result<bool> {
    let pos = |name: &str| -> Result<usize> {
        fx.slice_vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| CoreError::Fixture(format!("missing slice variable {name}")))
    };
    let rpos = |name: &str| -> Result<usize> {
        fx.reduced_vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| CoreError::Fixture(format!("missing reduced variable {name}")))
    };
    let (a, b, c, d, f) = (pos("a")?, pos("b")?, pos("c")?, pos("d")?, pos("f")?);
    let (u, v, x, y, z) = (rpos("u")?, rpos("v")?, rpos("x")?, rpos("y")?, rpos("z")?);
    let var = |i: usize| Poly::var(kv, i);
    let rr = |p: i64, q: i64| Rat::new(p.into(), q.into());
    let yq = phi[a].scale(&rr(-3, 1));
    let xq = phi[b].clone();
    let zq = phi[c].add(&xq.mul(&yq).scale(&rr(8, 3))).scale(&rr(1, 2));
    let vq = phi[d].sub(&xq).sub(&yq.mul(&yq));
    let uq = phi[f].scale(&rr(-1, 1)).sub(&xq).sub(&yq.mul(&yq));
    let ok = yq == var(y) && xq == var(x) && zq == var(z) && vq == var(v) && uq == var(u);
    if !ok {
        failures.push("phi is not inverted by the triangular formulas".into());
    }
    Ok(ok)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn sl2_space() -> PoissonSpace {
        let e = Mat::e(2, 1, 2);
        let m = Subalg::span(2, &[Mat::e(2, 2, 1)]);
        PoissonSpace::new(&m, &e).unwrap()
    }

    #[test]
    fn structure_constants_sl2() {
        // letters: h1, E12, E21; {x_e, x_f} = x_h
        let s = sl2_space();
        let e = Poly::var(3, 1);
        let f = Poly::var(3, 2);
        let h = Poly::var(3, 0);
        assert_eq!(s.lp_bracket(&e, &f), h);
        assert!(s.lp_bracket(&f, &f).is_zero());
    }

    #[test]
    fn jacobi_and_leibniz_sampled() {
        let s = sl2_space();
        let mut state = 0x0123456789abcdefu64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        let rand_poly = |next: &mut dyn FnMut() -> u64| {
            let mut p = Poly::zero(3);
            for _ in 0..3 {
                let e: Expo = (0..3).map(|_| (next() % 3) as u16).collect();
                p.add_term(e, rat((next() % 9) as i64 - 4));
            }
            p
        };
        for _ in 0..100 {
            let f = rand_poly(&mut next);
            let g = rand_poly(&mut next);
            let h = rand_poly(&mut next);
            assert_eq!(s.lp_bracket(&f, &g), s.lp_bracket(&g, &f).scale(&rat(-1)));
            let jac = s
                .lp_bracket(&f, &s.lp_bracket(&g, &h))
                .add(&s.lp_bracket(&g, &s.lp_bracket(&h, &f)))
                .add(&s.lp_bracket(&h, &s.lp_bracket(&f, &g)));
            assert!(jac.is_zero(), "jacobi failed");
            let lhs = s.lp_bracket(&f, &g.mul(&h));
            let rhs = s.lp_bracket(&f, &g).mul(&h).add(&g.mul(&s.lp_bracket(&f, &h)));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn reduction_is_algebra_map_and_kills_generators() {
        let s = sl2_space();
        let f = Poly::var(3, 2);
        let gen = f.sub(&Poly::constant(3, rat(1)));
        assert!(s.reduce_mod_ichi(&gen).is_zero());
        let mut state = 0xfeedfacecafebeefu64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for _ in 0..50 {
            let mut p = Poly::zero(3);
            let mut q = Poly::zero(3);
            for _ in 0..2 {
                let e: Expo = (0..3).map(|_| (next() % 3) as u16).collect();
                p.add_term(e, rat((next() % 7) as i64 - 3));
                let e: Expo = (0..3).map(|_| (next() % 2) as u16).collect();
                q.add_term(e, rat((next() % 7) as i64 - 3));
            }
            assert_eq!(
                s.reduce_mod_ichi(&p.mul(&q)),
                s.reduce_mod_ichi(&p).mul(&s.reduce_mod_ichi(&q))
            );
        }
    }

    #[test]
    fn sl2_reduced_algebra_is_polynomial_in_the_casimir() {
        let s = sl2_space();
        let h = Poly::var(3, 0);
        let e = Poly::var(3, 1);
        let f = Poly::var(3, 2);
        let cas = h.mul(&h).add(&e.mul(&f).scale(&rat(4)));
        assert!(s.is_invariant(&cas));
        let red = s.reduce_mod_ichi(&cas);
        assert_eq!(red, h.mul(&h).add(&e.scale(&rat(4))));
        let rb = s.reduced_bracket(&cas, &cas.mul(&cas)).unwrap();
        assert!(rb.is_zero());
        assert_eq!(s.failing_generator(&h), Some("E21".into()));
        assert!(s.reduced_bracket(&h, &cas).is_err());
    }

    #[test]
    fn reduced_bracket_is_lift_independent() {
        let s = sl2_space();
        let h = Poly::var(3, 0);
        let e = Poly::var(3, 1);
        let f = Poly::var(3, 2);
        let cas = h.mul(&h).add(&e.mul(&f).scale(&rat(4)));
        let gen = f.sub(&Poly::constant(3, rat(1)));
        let mut state = 0x7c3a1f2e9b8d4c5au64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        let base = s.reduce_mod_ichi(&s.lp_bracket(&cas, &cas));
        for _ in 0..50 {
            let mut noise = Poly::zero(3);
            let ex: Expo = (0..3).map(|_| (next() % 2) as u16).collect();
            noise.add_term(ex, rat((next() % 5) as i64 - 2));
            let cas2 = cas.add(&noise.mul(&gen));
            let red = s.reduce_mod_ichi(&s.lp_bracket(&cas, &cas2));
            assert_eq!(red, base, "perturbed lift changed the reduced bracket");
        }
    }

    #[test]
    fn invariant_lift_small_cases() {
        let s = sl2_space();
        // section: the slice {h = 0, e = c, f = 1} with one variable c
        let section = vec![Poly::zero(1), Poly::var(1, 0), Poly::constant(1, rat(1))];
        let c7 = Poly::constant(1, rat(7));
        let lift = s.invariant_lift(&section, &c7, 2).unwrap().unwrap();
        assert_eq!(lift, Poly::constant(3, rat(7)));
        let t = Poly::var(1, 0);
        let lift = s.invariant_lift(&section, &t, 2).unwrap().unwrap();
        assert!(s.is_invariant(&lift));
        assert_eq!(lift.substitute(&section), t);
    }
}
