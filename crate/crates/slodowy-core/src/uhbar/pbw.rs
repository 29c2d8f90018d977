//! PBW machinery: an ordered Lie basis with structure constants, and
//! elements of the hbar-extended enveloping algebra as rational
//! combinations of sorted monomials times hbar powers.
//!
//! The defining relation is x y - y x = [x, y] hbar; straightening moves
//! out-of-order adjacent letters and emits the bracket term with one more
//! power of hbar. Monomials are kept sorted by the global letter order.

use crate::error::{CoreError, Result};
use crate::lie::{bracket, Mat};
use crate::linalg::{SparseVec, TrackedBasis};
use crate::rat::{format_rat, Rat};
use num_traits::Zero;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;

/// An ordered basis of a matrix Lie algebra with a precomputed bracket
/// table for straightening.
#[derive(Debug, Clone)]
pub struct LieBasis {
    n: usize,
    letters: Vec<Mat>,
    names: Vec<String>,
    tracked: TrackedBasis,
    /// table[a][b] for a > b: coordinates of [x_a, x_b] in the letters.
    table: Vec<Vec<Vec<(usize, Rat)>>>,
}

impl LieBasis {
    /// Build a basis from independent matrices closed under brackets.
    pub fn new(n: usize, letters: Vec<Mat>, names: Vec<String>) -> Result<Self> {
        assert_eq!(letters.len(), names.len());
        let vecs: Vec<SparseVec> = letters.iter().map(Mat::to_vec).collect();
        let tracked = TrackedBasis::new(&vecs)
            .ok_or_else(|| CoreError::Input("basis letters are linearly dependent".into()))?;
        let mut table = vec![vec![Vec::new(); letters.len()]; letters.len()];
        for a in 0..letters.len() {
            for b in 0..a {
                let br = bracket(&letters[a], &letters[b])?;
                let coords = tracked.coordinates(&br.to_vec()).ok_or_else(|| {
                    CoreError::Input("letters are not closed under the bracket".into())
                })?;
                table[a][b] = coords.into_iter().collect();
            }
        }
        Ok(LieBasis { n, letters, names, tracked, table })
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letter(&self, idx: usize) -> &Mat {
        &self.letters[idx]
    }

    pub fn name(&self, idx: usize) -> &str {
        &self.names[idx]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Coordinates of a Lie element in the letters.
    pub fn coordinates(&self, m: &Mat) -> Result<Vec<(usize, Rat)>> {
        let coords = self
            .tracked
            .coordinates(&m.to_vec())
            .ok_or_else(|| CoreError::Domain("element outside the letter span".into()))?;
        Ok(coords.into_iter().collect())
    }

    fn bracket_coords(&self, a: usize, b: usize) -> Vec<(usize, Rat)> {
        use std::cmp::Ordering;
        match a.cmp(&b) {
            Ordering::Greater => self.table[a][b].clone(),
            Ordering::Equal => Vec::new(),
            Ordering::Less => self.table[b][a]
                .iter()
                .map(|(i, c)| (*i, -c.clone()))
                .collect(),
        }
    }
}

/// Monomial key: sorted letter indices plus an hbar power.
pub type Mono = (Vec<usize>, usize);

/// Element of the hbar-extended enveloping algebra in normal form.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PbwElem {
    terms: BTreeMap<Mono, Rat>,
}

impl PbwElem {
    pub fn zero() -> Self {
        PbwElem::default()
    }

    pub fn one() -> Self {
        PbwElem::term(&[], 0, Rat::from_integer(1.into()))
    }

    /// hbar^k only.
    pub fn hbar(k: usize) -> Self {
        PbwElem::term(&[], k, Rat::from_integer(1.into()))
    }

    /// A single normal-form term; the word must already be sorted.
    pub fn term(word: &[usize], hpow: usize, coeff: Rat) -> Self {
        assert!(word.windows(2).all(|w| w[0] <= w[1]), "word must be sorted");
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert((word.to_vec(), hpow), coeff);
        }
        PbwElem { terms }
    }

    /// A single Lie letter.
    pub fn letter(idx: usize) -> Self {
        PbwElem::term(&[idx], 0, Rat::from_integer(1.into()))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, word: &[usize], hpow: usize) -> Rat {
        self.terms
            .get(&(word.to_vec(), hpow))
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    pub fn add_term(&mut self, mono: Mono, coeff: Rat) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
        }
    }

    pub fn add(&self, other: &PbwElem) -> PbwElem {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &PbwElem) -> PbwElem {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> PbwElem {
        if c.is_zero() {
            return PbwElem::zero();
        }
        PbwElem {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    /// Multiply by hbar^k.
    pub fn mul_hbar(&self, k: usize) -> PbwElem {
        PbwElem {
            terms: self
                .terms
                .iter()
                .map(|((w, h), v)| ((w.clone(), h + k), v.clone()))
                .collect(),
        }
    }

    /// Split into PBW-level-homogeneous parts, ascending.
    pub fn level_parts(&self) -> Vec<(usize, PbwElem)> {
        let mut map: BTreeMap<usize, PbwElem> = BTreeMap::new();
        for ((w, h), c) in &self.terms {
            map.entry(w.len() + h)
                .or_insert_with(PbwElem::zero)
                .add_term((w.clone(), *h), c.clone());
        }
        map.into_iter().collect()
    }

    /// Render against letter names, for diagnostics.
    pub fn display<'a>(&'a self, basis: &'a LieBasis) -> PbwDisplay<'a> {
        PbwDisplay { elem: self, basis }
    }
}

pub struct PbwDisplay<'a> {
    elem: &'a PbwElem,
    basis: &'a LieBasis,
}

impl fmt::Display for PbwDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.elem.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((word, h), c) in &self.elem.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})", format_rat(c))?;
            for &l in word {
                write!(f, " {}", self.basis.name(l))?;
            }
            if *h > 0 {
                write!(f, " hbar^{h}")?;
            }
        }
        Ok(())
    }
}

/// Product in normal form via recursive straightening: an out-of-order
/// adjacent pair x_a x_b (a > b) rewrites to x_b x_a + [x_a, x_b] hbar.
pub fn pbw_mul(basis: &LieBasis, x: &PbwElem, y: &PbwElem) -> PbwElem {
    let mut out = PbwElem::zero();
    for ((wx, hx), cx) in &x.terms {
        for ((wy, hy), cy) in &y.terms {
            let mut word = Vec::with_capacity(wx.len() + wy.len());
            word.extend_from_slice(wx);
            word.extend_from_slice(wy);
            straighten_into(basis, word, hx + hy, cx * cy, &mut out);
        }
    }
    out
}

/// Commutator x y - y x.
pub fn pbw_bracket(basis: &LieBasis, x: &PbwElem, y: &PbwElem) -> PbwElem {
    pbw_mul(basis, x, y).sub(&pbw_mul(basis, y, x))
}

fn straighten_into(basis: &LieBasis, word: Vec<usize>, hpow: usize, coeff: Rat, out: &mut PbwElem) {
    if coeff.is_zero() {
        return;
    }
    let mut stack = vec![(word, hpow, coeff)];
    while let Some((mut word, hpow, coeff)) = stack.pop() {
        // find the first descent
        let pos = word.windows(2).position(|w| w[0] > w[1]);
        match pos {
            None => out.add_term((word, hpow), coeff),
            Some(p) => {
                let (a, b) = (word[p], word[p + 1]);
                for (idx, c) in basis.bracket_coords(a, b) {
                    let mut shorter = Vec::with_capacity(word.len() - 1);
                    shorter.extend_from_slice(&word[..p]);
                    shorter.push(idx);
                    shorter.extend_from_slice(&word[p + 2..]);
                    stack.push((shorter, hpow + 1, &coeff * &c));
                }
                word.swap(p, p + 1);
                stack.push((word, hpow, coeff));
            }
        }
    }
}

/// Evaluate a product word of Lie elements into normal form.
pub fn eval_mat_word(basis: &LieBasis, mats: &[Mat], hpow: usize, coeff: &Rat) -> Result<PbwElem> {
    let mut acc = PbwElem::term(&[], hpow, coeff.clone());
    for m in mats {
        let mut factor = PbwElem::zero();
        for (idx, c) in basis.coordinates(m)? {
            factor.add_term((vec![idx], 0), c);
        }
        acc = pbw_mul(basis, &acc, &factor);
    }
    Ok(acc)
}

/// JSON shape for PBW elements: letters by name plus sparse terms.
#[derive(Debug, Clone, Serialize)]
pub struct PbwJson {
    pub letters: Vec<String>,
    pub terms: Vec<PbwTermJson>,
}

#[derive(Debug, Clone, Serialize, serde::Deserialize)]
pub struct PbwTermJson {
    pub mono: Vec<usize>,
    pub hpow: usize,
    pub coeff: String,
}

impl PbwJson {
    pub fn encode(basis: &LieBasis, elem: &PbwElem) -> Self {
        PbwJson {
            letters: basis.names().to_vec(),
            terms: elem
                .terms()
                .map(|((w, h), c)| PbwTermJson {
                    mono: w.clone(),
                    hpow: *h,
                    coeff: format_rat(c),
                })
                .collect(),
        }
    }
}

/// Decode terms (the letter list is contextual).
pub fn decode_terms(basis: &LieBasis, terms: &[PbwTermJson]) -> Result<PbwElem> {
    let mut out = PbwElem::zero();
    for t in terms {
        if t.mono.iter().any(|&i| i >= basis.len()) {
            return Err(CoreError::Input(format!("letter index out of range in {:?}", t.mono)));
        }
        let mut word = t.mono.clone();
        let sorted = word.windows(2).all(|w| w[0] <= w[1]);
        if !sorted {
            word.sort_unstable();
            return Err(CoreError::Input(
                "monomials must be sorted by the letter order".into(),
            ));
        }
        let coeff = crate::rat::parse_rat(&t.coeff).map_err(CoreError::Input)?;
        out.add_term((word, t.hpow), coeff);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn sl2_basis() -> LieBasis {
        // order: h, e, f
        let h = &Mat::e(2, 1, 1) - &Mat::e(2, 2, 2);
        let e = Mat::e(2, 1, 2);
        let f = Mat::e(2, 2, 1);
        LieBasis::new(2, vec![h, e, f], vec!["h".into(), "e".into(), "f".into()]).unwrap()
    }

    #[test]
    fn defining_relation_sl2() {
        let b = sl2_basis();
        let e = PbwElem::letter(1);
        let f = PbwElem::letter(2);
        // e f - f e = h hbar
        let lhs = pbw_bracket(&b, &e, &f);
        assert_eq!(lhs, PbwElem::term(&[0], 1, rat(1)));
    }

    #[test]
    fn commuting_letters_concatenate() {
        let b = LieBasis::new(
            2,
            vec![Mat::e(2, 1, 1), Mat::e(2, 2, 2)],
            vec!["a".into(), "b".into()],
        )
        .unwrap();
        let x = PbwElem::letter(1);
        let y = PbwElem::letter(0);
        let p = pbw_mul(&b, &x, &y);
        assert_eq!(p, PbwElem::term(&[0, 1], 0, rat(1)));
    }

    #[test]
    fn casimir_is_central_sl2() {
        let b = sl2_basis();
        // C = h^2 + 2 e f + 2 f e
        let h2 = PbwElem::term(&[0, 0], 0, rat(1));
        let ef = pbw_mul(&b, &PbwElem::letter(1), &PbwElem::letter(2));
        let fe = pbw_mul(&b, &PbwElem::letter(2), &PbwElem::letter(1));
        let c = h2.add(&ef.scale(&rat(2))).add(&fe.scale(&rat(2)));
        for l in 0..3 {
            let x = PbwElem::letter(l);
            assert!(pbw_bracket(&b, &x, &c).is_zero(), "letter {l}");
        }
    }

    #[test]
    fn associativity_sampled() {
        let b = sl2_basis();
        let mut state = 0xdeadbeefcafef00du64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        let rand_elem = |next: &mut dyn FnMut() -> u64| {
            let mut e = PbwElem::zero();
            for _ in 0..3 {
                let len = (next() % 3) as usize;
                let mut word: Vec<usize> = (0..len).map(|_| (next() % 3) as usize).collect();
                word.sort_unstable();
                let h = (next() % 2) as usize;
                let c = (next() % 9) as i64 - 4;
                e.add_term((word, h), rat(c));
            }
            e
        };
        for _ in 0..50 {
            let x = rand_elem(&mut next);
            let y = rand_elem(&mut next);
            let z = rand_elem(&mut next);
            let left = pbw_mul(&b, &pbw_mul(&b, &x, &y), &z);
            let right = pbw_mul(&b, &x, &pbw_mul(&b, &y, &z));
            assert_eq!(left, right);
            // unit
            assert_eq!(pbw_mul(&b, &PbwElem::one(), &x), x);
            assert_eq!(pbw_mul(&b, &x, &PbwElem::one()), x);
        }
    }
}
