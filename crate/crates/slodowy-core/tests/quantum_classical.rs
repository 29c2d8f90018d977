//! Cross checks between the quantum and classical reductions: top symbols
//! of quantum invariants are Poisson-invariant, the two-stage and one-shot
//! invariant dimensions agree for the sl4 cover, and oversized truncation
//! requests fail loudly instead of thrashing.

use slodowy_core::error::CoreError;
use slodowy_core::partitions::Partition;
use slodowy_core::poisson::{Poly, PoissonSpace};
use slodowy_core::stages::stage_data;
use slodowy_core::uhbar::{invariant_basis, stage_ctxs, PbwElem, ReductionCtx};

fn part(parts: &[usize]) -> Partition {
    Partition::new(parts.to_vec()).unwrap()
}

/// Top Kazhdan symbol of a quantum invariant: keep the monomials of
/// maximal hbar-free degree, set hbar to 1, read words as commutative
/// monomials.
fn top_symbol(ctx: &ReductionCtx, u: &PbwElem, nvars: usize) -> Poly {
    let top = u.terms().map(|((w, _), _)| ctx.word_kaz(w)).max().unwrap_or(0);
    let mut p = Poly::zero(nvars);
    for ((word, _), c) in u.terms() {
        if ctx.word_kaz(word) == top {
            let mut e = vec![0u16; nvars];
            for &l in word {
                e[l] += 1;
            }
            p.add_term(e, c.clone());
        }
    }
    p
}

/// The one-shot reduction context graded by h2', the grading that is good
/// for e2: this is the weighting under which top symbols land in the
/// slice ring.
fn symbol_ctx(mu: &Partition, lam: &Partition) -> (ReductionCtx, PoissonSpace) {
    let sd = stage_data(mu, lam).unwrap();
    let grading = slodowy_core::gradings::grade_from_semisimple(&sd.h2prime).unwrap();
    let ctx = ReductionCtx::new(&sd.m2, &sd.e2, &grading).unwrap();
    let space = PoissonSpace::new(&sd.m2, &sd.e2).unwrap();
    (ctx, space)
}

#[test]
fn quantum_symbols_are_poisson_invariant_sl3() {
    let (ctx, space) = symbol_ctx(&part(&[2, 1]), &part(&[3]));
    // same adapted letter order on both sides
    assert_eq!(ctx.basis().names(), space.names());
    let basis = invariant_basis(&ctx, 6).unwrap();
    assert!(basis.len() >= 2, "expected at least the unit and one Casimir class");
    for u in &basis {
        let symbol = top_symbol(&ctx, u, space.nvars());
        assert!(
            space.is_invariant(&symbol),
            "symbol of a quantum invariant must Poisson-commute with the moment coordinates"
        );
    }
}

#[test]
fn quantum_symbols_are_poisson_invariant_sl2() {
    let (ctx, space) = symbol_ctx(&part(&[1, 1]), &part(&[2]));
    let basis = invariant_basis(&ctx, 6).unwrap();
    assert!(basis.len() >= 2);
    for u in &basis {
        let symbol = top_symbol(&ctx, u, space.nvars());
        assert!(space.is_invariant(&symbol));
    }
}

#[test]
fn two_stage_dimensions_agree_for_sl4_cover() {
    // the n = 4 analogue of the sl3 dimension shadow: levels up to 4,
    // hbar-free Kazhdan degree up to 8
    let ctxs = stage_ctxs(&part(&[2, 2]), &part(&[3, 1])).unwrap();
    let one_shot = ctxs.one_shot_dims(4, 8).unwrap();
    let two_stage = ctxs.two_stage_dims(4, 8).unwrap();
    assert_eq!(one_shot, two_stage, "one-shot {one_shot:?} vs two-stage {two_stage:?}");
}

#[test]
fn phi_preserves_the_unit_and_comoment_images() {
    let ctxs = stage_ctxs(&part(&[2, 1]), &part(&[3])).unwrap();
    assert_eq!(ctxs.phi(&PbwElem::one()).unwrap(), PbwElem::one());
    // the comoment image of a k generator is the class of its natural lift
    let xi = &ctxs.data.k_gens[0];
    let image = ctxs.comoment(xi).unwrap();
    let mut expected = PbwElem::zero();
    for (idx, c) in ctxs.first.basis().coordinates(xi).unwrap() {
        expected.add_term((vec![idx], 0), c);
    }
    assert_eq!(image, expected);
    // non-invariant inputs are rejected with the failing generator named
    let h = PbwElem::letter(0);
    let err = ctxs.phi(&h).unwrap_err();
    assert!(matches!(err, CoreError::Domain(_)));
}

#[test]
fn oversized_truncations_are_rejected() {
    let ctxs = stage_ctxs(&part(&[2, 1]), &part(&[3])).unwrap();
    let err = ctxs.oneshot.slice(60, None).unwrap_err();
    assert!(matches!(err, CoreError::Resource(_)), "got {err:?}");
}
