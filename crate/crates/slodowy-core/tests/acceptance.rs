//! Acceptance suite: one test per release criterion, each printing a
//! pass/fail line with its runtime against the stated budget.
//!
//! All arithmetic is exact; the only tolerance anywhere is the single
//! global scalar relating the sl4 bracket tables to their source
//! normalization, which criterion 8 requires to be discovered and
//! recorded rather than assumed.

use slodowy_core::fixtures::default_fixture_dir;
use slodowy_core::gradings::check_good;
use slodowy_core::lie::{centralizer, jordan_type, Ambient, Mat, Subalg};
use slodowy_core::partitions::{all_covers, all_partitions, covers_above, dominance_leq, Partition};
use slodowy_core::poisson::{Poly, PoissonSpace};
use slodowy_core::pyramids::{enumerate_pyramids, grading_of, nilpotent_of, right_aligned, standard_filling};
use slodowy_core::rat::{rat, Rat};
use slodowy_core::stages::{ek_basis, ek_expected_count, stage_data, verify_stage};
use slodowy_core::uhbar::{pbw_mul, stage_ctxs, PbwElem};
use std::time::{Duration, Instant};

fn part(parts: &[usize]) -> Partition {
    Partition::new(parts.to_vec()).unwrap()
}

struct Criterion {
    number: u32,
    name: &'static str,
    budget: Duration,
    started: Instant,
    failures: Vec<String>,
}

impl Criterion {
    fn new(number: u32, name: &'static str, budget_secs: u64) -> Self {
        Criterion {
            number,
            name,
            budget: Duration::from_secs(budget_secs),
            started: Instant::now(),
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: &str) {
        if !ok {
            self.failures.push(what.to_string());
        }
    }

    fn finish(mut self) {
        let elapsed = self.started.elapsed();
        if elapsed > self.budget {
            self.failures.push(format!(
                "runtime {elapsed:.2?} exceeds the {:.0?} budget",
                self.budget
            ));
        }
        let verdict = if self.failures.is_empty() { "PASS" } else { "FAIL" };
        println!(
            "criterion {} ({}): {verdict} in {elapsed:.2?}",
            self.number, self.name
        );
        assert!(
            self.failures.is_empty(),
            "criterion {} failed: {:?}",
            self.number,
            self.failures
        );
    }
}

/// Deterministic xorshift sampler for the property suites.
struct Rng(u64);

impl Rng {
    fn next(&mut self) -> u64 {
        self.0 ^= self.0 << 13;
        self.0 ^= self.0 >> 7;
        self.0 ^= self.0 << 17;
        self.0
    }

    fn small(&mut self, span: i64) -> i64 {
        (self.next() % (2 * span as u64 + 1)) as i64 - span
    }
}

#[test]
fn criterion_1_cover_relations() {
    let mut c = Criterion::new(1, "cover relations", 10);
    // brute-force covering relation by transitive reduction of dominance
    for n in 1..=12 {
        let all = all_partitions(n).unwrap();
        for mu in &all {
            let mut oracle: Vec<Partition> = Vec::new();
            'outer: for lam in &all {
                if lam == mu || !dominance_leq(mu, lam).unwrap() {
                    continue;
                }
                for nu in &all {
                    if nu != mu
                        && nu != lam
                        && dominance_leq(mu, nu).unwrap()
                        && dominance_leq(nu, lam).unwrap()
                    {
                        continue 'outer;
                    }
                }
                oracle.push(lam.clone());
            }
            oracle.sort();
            oracle.reverse();
            c.check(
                covers_above(mu) == oracle,
                &format!("cover set of {mu} disagrees with the oracle"),
            );
        }
    }
    c.check(
        covers_above(&part(&[2, 2, 2])) == vec![part(&[3, 2, 1])],
        "(2,2,2) must be covered exactly by (3,2,1)",
    );
    c.check(
        covers_above(&part(&[1, 1, 1])) == vec![part(&[2, 1])]
            && covers_above(&part(&[2, 1])) == vec![part(&[3])],
        "the chain (1,1,1) < (2,1) < (3) must be cover steps",
    );
    c.finish();
}

#[test]
fn criterion_2_pyramid_census_and_goodness() {
    let mut c = Criterion::new(2, "pyramid census and goodness", 120);
    c.check(
        enumerate_pyramids(&part(&[4, 3])).len() == 3,
        "shape (4,3) must have exactly 3 pyramids",
    );
    for n in 1..=7 {
        for shape in all_partitions(n).unwrap() {
            for pyr in enumerate_pyramids(&shape) {
                let f = standard_filling(&pyr);
                let e = nilpotent_of(&f);
                c.check(
                    jordan_type(&e).unwrap() == shape,
                    &format!("pyramid {:?} of {shape} has the wrong Jordan type", pyr.offsets()),
                );
                let g = grading_of(&f).unwrap();
                let report = check_good(&g, &e).unwrap();
                c.check(
                    report.pass(),
                    &format!("pyramid {:?} of {shape} fails goodness: {report:?}", pyr.offsets()),
                );
                // the induced nilpotent subalgebra has all four properties
                let form = slodowy_core::gradings::symplectic_on_gminus1(&g, &e).unwrap();
                let l = slodowy_core::gradings::choose_lagrangian(&form).unwrap();
                let m = slodowy_core::gradings::premet_subalgebra(&g, &e, &l).unwrap();
                let pr = slodowy_core::gradings::premet_report(&m, &e).unwrap();
                c.check(
                    pr.pass(),
                    &format!("pyramid {:?} of {shape} fails the subalgebra checks: {pr:?}", pyr.offsets()),
                );
            }
        }
    }
    c.finish();
}

#[test]
fn criterion_3_sl6_golden_reproduction() {
    let mut c = Criterion::new(3, "sl6 golden reproduction", 10);
    let sd = stage_data(&part(&[2, 2, 2]), &part(&[3, 2, 1])).unwrap();
    let e1 = &(&Mat::e(6, 1, 4) + &Mat::e(6, 2, 5)) + &Mat::e(6, 3, 6);
    c.check(sd.e1 == e1, "e1 must be E14 + E25 + E36");
    c.check(
        sd.e2 == &(&e1 + &Mat::e(6, 1, 3)) + &Mat::e(6, 4, 6),
        "e2 must be e1 + E13 + E46",
    );
    let k1 = &(&(&Mat::e(6, 2, 1) + &Mat::e(6, 3, 2)) + &Mat::e(6, 5, 4)) + &Mat::e(6, 6, 5);
    let k2 = &Mat::e(6, 3, 1) + &Mat::e(6, 6, 4);
    c.check(sd.k_gens.len() == 2, "k must have two generators");
    c.check(sd.k_gens[0] == k1, "E_1 must be E21 + E32 + E54 + E65");
    c.check(sd.k_gens[1] == k2, "E_2 must be E31 + E64");
    c.check(
        sd.h2prime == Mat::diag(&[rat(2), rat(1), rat(0), rat(0), rat(-1), rat(-2)]),
        "h2' must be (E22 - E55) + (2 E11 - 2 E66), i.e. diag(2,1,0,0,-1,-2)",
    );
    c.finish();
}

#[test]
fn criterion_4_theorem_suite_up_to_8() {
    let mut c = Criterion::new(4, "theorem suite for all covers up to n = 8", 600);
    for n in 2..=8 {
        for (mu, lam) in all_covers(n).unwrap() {
            let report = verify_stage(&mu, &lam).unwrap();
            c.check(
                report.pass(),
                &format!("{mu} -> {lam} fails: {:?}", report.failures()),
            );
        }
    }
    c.finish();
}

#[test]
fn criterion_5_ek_centralizer_basis() {
    let mut c = Criterion::new(5, "row-shift centralizer basis", 60);
    for n in 1..=7 {
        for shape in all_partitions(n).unwrap() {
            let basis = ek_basis(&shape);
            let expected = ek_expected_count(&shape);
            c.check(basis.len() == expected, &format!("count at {shape}"));
            let f = standard_filling(&right_aligned(&shape));
            let e = nilpotent_of(&f);
            let span = Subalg::span(n, &basis);
            c.check(span.dim() == expected, &format!("independence at {shape}"));
            c.check(
                span == centralizer(&e, Ambient::Gl),
                &format!("span differs from ker(ad e) at {shape}"),
            );
            // sum of unit shifts recovers the nilpotent
            let mut s = Mat::zero(n);
            for (i, j, r, m) in slodowy_core::stages::ek_indexed(&f) {
                if i == j && r == 1 {
                    s = &s + &m;
                }
            }
            c.check(s == e, &format!("sum of E_i^i[1] differs from e at {shape}"));
        }
    }
    c.finish();
}

#[test]
fn criterion_6_subregular_to_regular() {
    let mut c = Criterion::new(6, "subregular to regular covers", 10);
    for n in 2..=6 {
        let mu = if n == 2 { part(&[1, 1]) } else { Partition::new(vec![n - 1, 1]).unwrap() };
        let lam = Partition::new(vec![n]).unwrap();
        let sd = stage_data(&mu, &lam).unwrap();
        let mut lower = Vec::new();
        for a in 1..=n {
            for b in 1..a {
                lower.push(Mat::e(n, a, b));
            }
        }
        c.check(
            sd.m2 == Subalg::span(n, &lower),
            &format!("m2 at n = {n} is not the full lower triangular subalgebra"),
        );
        c.check(
            jordan_type(&sd.e2).unwrap() == lam,
            &format!("e2 at n = {n} is not regular"),
        );
    }
    c.finish();
}

#[test]
fn criterion_7_sl3_quantum_golden() {
    let mut c = Criterion::new(7, "sl3 quantum golden test", 300);
    let report = slodowy_core::uhbar::verify_sl3(&default_fixture_dir()).unwrap();
    c.check(report.z1_invariant_oneshot, "z1 invariant in the one-shot reduction");
    c.check(report.z2_invariant_oneshot, "z2 invariant in the one-shot reduction");
    c.check(report.z1_z2_commute_in_reduction, "z1 and z2 commute");
    c.check(report.lift1_first_stage_invariant, "first lift m1-invariant");
    c.check(report.lift2_first_stage_invariant, "second lift m1-invariant");
    c.check(report.phi_lift1_is_z1, "phi sends the first lift to z1");
    c.check(report.phi_lift2_is_z2, "phi sends the second lift to z2");
    c.check(
        report.dims_agree,
        "two-stage and one-shot dimensions agree per level and degree <= 8",
    );
    c.finish();
}

#[test]
fn criterion_8_sl4_classical_golden() {
    let mut c = Criterion::new(8, "sl4 classical golden test", 300);
    let report = slodowy_core::poisson::verify_sl4(&default_fixture_dir()).unwrap();
    c.check(
        report.slice_bracket_matches == report.slice_bracket_total,
        "every slice bracket matches up to the global scalar",
    );
    c.check(
        report.reduced_bracket_matches == report.reduced_bracket_total,
        "every reduced bracket matches up to the same scalar",
    );
    c.check(report.global_scalar.is_some(), "a global scalar was discovered");
    c.check(report.phi_is_ring_isomorphism, "phi is a ring isomorphism");
    c.check(report.phi_respects_brackets, "phi intertwines the bracket tables");
    c.check(report.pass(), "no residual failures");
    if let Some(s) = &report.global_scalar {
        println!("  recorded normalization scalar: {s}");
    }
    c.finish();
}

#[test]
fn criterion_9_property_suites() {
    let mut c = Criterion::new(9, "algebraic property suites", 300);

    // PBW associativity on 200 random triples in U_hbar(sl3), degree <= 3
    let ctxs = stage_ctxs(&part(&[2, 1]), &part(&[3])).unwrap();
    let ctx = &ctxs.oneshot;
    let nletters = ctx.basis().len();
    let mut rng = Rng(0x1234_5678_9abc_def1);
    let rand_elem = |rng: &mut Rng, letters: usize, maxlen: usize| {
        let mut e = PbwElem::zero();
        for _ in 0..3 {
            let len = (rng.next() % (maxlen as u64 + 1)) as usize;
            let mut word: Vec<usize> =
                (0..len).map(|_| (rng.next() % letters as u64) as usize).collect();
            word.sort_unstable();
            e.add_term((word, (rng.next() % 2) as usize), Rat::from_integer(rng.small(4).into()));
        }
        e
    };
    for i in 0..200 {
        let x = rand_elem(&mut rng, nletters, 3);
        let y = rand_elem(&mut rng, nletters, 3);
        let z = rand_elem(&mut rng, nletters, 3);
        let left = pbw_mul(ctx.basis(), &pbw_mul(ctx.basis(), &x, &y), &z);
        let right = pbw_mul(ctx.basis(), &x, &pbw_mul(ctx.basis(), &y, &z));
        c.check(left == right, &format!("associativity sample {i}"));
        if i < 100 {
            let one = PbwElem::one();
            c.check(pbw_mul(ctx.basis(), &one, &x) == x, &format!("left unit sample {i}"));
        }
    }

    // ideal_reduce idempotence and shifted-generator annihilation, 150 samples
    for i in 0..150 {
        let u = rand_elem(&mut rng, nletters, 4);
        let r = ctx.reduce(&u);
        c.check(ctx.reduce(&r) == r, &format!("reduce idempotence sample {i}"));
        let m_letter = ctx.complement_count()
            + (rng.next() as usize) % (nletters - ctx.complement_count());
        let mut gen = PbwElem::letter(m_letter);
        gen.add_term((Vec::new(), 1), -ctx.chi_of_letter(m_letter).clone());
        let prod = pbw_mul(ctx.basis(), &u, &gen);
        c.check(
            ctx.reduce(&prod).is_zero(),
            &format!("shifted generator not annihilated, sample {i}"),
        );
    }

    // Lie-Poisson antisymmetry, Jacobi, Leibniz on sl3, 100 samples
    let sd = stage_data(&part(&[2, 1]), &part(&[3])).unwrap();
    let space = PoissonSpace::new(&sd.m2, &sd.e2).unwrap();
    let nv = space.nvars();
    let rand_poly = |rng: &mut Rng, deg: u64| {
        let mut p = Poly::zero(nv);
        for _ in 0..3 {
            let mut e = vec![0u16; nv];
            let total = rng.next() % (deg + 1);
            for _ in 0..total {
                let v = (rng.next() % nv as u64) as usize;
                e[v] += 1;
            }
            p.add_term(e, Rat::from_integer(rng.small(4).into()));
        }
        p
    };
    for i in 0..100 {
        let f = rand_poly(&mut rng, 2);
        let g = rand_poly(&mut rng, 2);
        let h = rand_poly(&mut rng, 2);
        c.check(
            space.lp_bracket(&f, &g) == space.lp_bracket(&g, &f).scale(&rat(-1)),
            &format!("antisymmetry sample {i}"),
        );
        let jac = space
            .lp_bracket(&f, &space.lp_bracket(&g, &h))
            .add(&space.lp_bracket(&g, &space.lp_bracket(&h, &f)))
            .add(&space.lp_bracket(&h, &space.lp_bracket(&f, &g)));
        c.check(jac.is_zero(), &format!("jacobi sample {i}"));
        let leib = space.lp_bracket(&f, &g.mul(&h));
        let rhs = space.lp_bracket(&f, &g).mul(&h).add(&g.mul(&space.lp_bracket(&f, &h)));
        c.check(leib == rhs, &format!("leibniz sample {i}"));
    }

    // reduced-bracket independence of the invariant lift, 100 perturbations
    let h1 = Poly::var(nv, 0);
    let h2 = Poly::var(nv, 1);
    // the quadratic Casimir-type invariant of the regular sl3 reduction:
    // sum over the trace-dual pairs
    let mut casimir = Poly::zero(nv);
    {
        // 2/3 (h1^2 + h1 h2 + h2^2) + sum over i<j of 2 x_Eij x_Eji
        casimir = casimir
            .add(&h1.mul(&h1).scale(&Rat::new(2.into(), 3.into())))
            .add(&h1.mul(&h2).scale(&Rat::new(2.into(), 3.into())))
            .add(&h2.mul(&h2).scale(&Rat::new(2.into(), 3.into())));
        for (i, j) in [(1usize, 2usize), (1, 3), (2, 3)] {
            let upper = space.coordinate_of(&Mat::e(3, i, j)).unwrap();
            let lower = space.coordinate_of(&Mat::e(3, j, i)).unwrap();
            casimir = casimir.add(&upper.mul(&lower).scale(&rat(2)));
        }
    }
    assert!(space.is_invariant(&casimir), "the Casimir function must be invariant");
    let witness = rand_poly(&mut rng, 2);
    let base = space.reduce_mod_ichi(&space.lp_bracket(&casimir, &witness.mul(&Poly::zero(nv)).add(&casimir)));
    for i in 0..100 {
        // perturb by ideal multiples: (x_m - chi(m)) times random noise
        let v = space.complement_count() + (rng.next() as usize) % 3;
        let gen = Poly::var(nv, v)
            .sub(&Poly::constant(nv, space.chi_of_var(v).clone()));
        let noise = rand_poly(&mut rng, 1);
        let lifted = casimir.add(&noise.mul(&gen));
        let red = space.reduce_mod_ichi(&space.lp_bracket(&casimir, &lifted));
        c.check(red == base, &format!("lift independence sample {i}"));
    }
    c.finish();
}
