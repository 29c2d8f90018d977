//! Integration points of the worked-example machinery that the acceptance
//! suite does not already pin down: bounded-search behaviour of the
//! invariant lift, including its negative control.

use slodowy_core::fixtures::{default_fixture_dir, load_sl4};
use slodowy_core::partitions::Partition;
use slodowy_core::poisson::{Poly, PoissonSpace};
use slodowy_core::stages::stage_data;

fn reduced_side() -> (PoissonSpace, Vec<Poly>, Vec<String>) {
    let fx = load_sl4(&default_fixture_dir()).unwrap();
    let mu = Partition::new(vec![2, 2]).unwrap();
    let lam = Partition::new(vec![3, 1]).unwrap();
    let sd = stage_data(&mu, &lam).unwrap();
    let space = PoissonSpace::new(&sd.m2, &sd.e2).unwrap();
    let kv = fx.reduced_vars.len();
    let entries: Vec<Vec<Poly>> = fx
        .reduced_section
        .iter()
        .map(|row| row.iter().map(|e| Poly::from_raw(e, kv).unwrap()).collect())
        .collect();
    let mut section = Vec::new();
    for idx in 0..space.nvars() {
        let letter = space.basis().letter(idx);
        let mut p = Poly::zero(kv);
        for (i, j, c) in letter.iter() {
            p = p.add(&entries[j - 1][i - 1].scale(c));
        }
        section.push(p);
    }
    (space, section, fx.reduced_vars)
}

#[test]
fn lift_of_z_is_infeasible_below_degree_4() {
    let (space, section, vars) = reduced_side();
    let z = vars.iter().position(|v| v == "z").unwrap();
    let target = Poly::var(vars.len(), z);
    // bounded-search failure at every bound <= 3 is not a mathematical
    // verdict; the lift exists one degree higher
    for bound in 1..=3 {
        assert!(
            space.invariant_lift(&section, &target, bound).unwrap().is_none(),
            "z should have no invariant lift at degree {bound}"
        );
    }
    let lift = space.invariant_lift(&section, &target, 4).unwrap().unwrap();
    assert_eq!(lift.degree(), 4);
    assert!(space.is_invariant(&lift));
    assert_eq!(lift.substitute(&section), target);
}

#[test]
fn constant_targets_lift_to_themselves() {
    let (space, section, vars) = reduced_side();
    let c = Poly::constant(vars.len(), slodowy_core::rat::ratio(-5, 3));
    let lift = space.invariant_lift(&section, &c, 2).unwrap().unwrap();
    assert_eq!(lift, Poly::constant(space.nvars(), slodowy_core::rat::ratio(-5, 3)));
}

#[test]
fn linear_coordinates_lift_within_degree_4() {
    let (space, section, vars) = reduced_side();
    for (k, name) in vars.iter().enumerate() {
        let target = Poly::var(vars.len(), k);
        let mut found = None;
        for bound in 1..=4 {
            if let Some(l) = space.invariant_lift(&section, &target, bound).unwrap() {
                found = Some(l);
                break;
            }
        }
        let lift = found.unwrap_or_else(|| panic!("no lift of {name} up to degree 4"));
        assert!(space.is_invariant(&lift), "lift of {name} not invariant");
        assert_eq!(lift.substitute(&section), target, "lift of {name} off the section");
    }
}
