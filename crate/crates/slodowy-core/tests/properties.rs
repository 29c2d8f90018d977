//! Property tests over randomly generated partitions and matrices.

use proptest::prelude::*;
use slodowy_core::lie::{bracket, jordan_type, trace_pair, Mat};
use slodowy_core::partitions::{conjugate, dominance_leq, orbit_dim, Partition};
use slodowy_core::pyramids::{enumerate_pyramids, nilpotent_of, standard_filling};
use slodowy_core::rat::rat;

fn arb_partition(max_n: usize) -> impl Strategy<Value = Partition> {
    // weakly decreasing positive parts with bounded sum
    proptest::collection::vec(1usize..=4, 1..=4).prop_map(move |mut parts| {
        parts.sort_unstable();
        parts.reverse();
        let mut total = 0;
        let mut kept = Vec::new();
        for p in parts {
            if total + p > max_n {
                break;
            }
            total += p;
            kept.push(p);
        }
        if kept.is_empty() {
            kept.push(1);
        }
        Partition::new(kept).unwrap()
    })
}

proptest! {
    #[test]
    fn conjugate_is_an_involution(p in arb_partition(10)) {
        prop_assert_eq!(conjugate(&conjugate(&p)), p);
    }

    #[test]
    fn conjugate_reverses_dominance((a, b) in (2usize..=9).prop_flat_map(|n| {
        let all = slodowy_core::partitions::all_partitions(n).unwrap();
        let count = all.len();
        let all2 = all.clone();
        (0..count, 0..count).prop_map(move |(i, j)| (all[i].clone(), all2[j].clone()))
    })) {
        prop_assert_eq!(
            dominance_leq(&a, &b).unwrap(),
            dominance_leq(&conjugate(&b), &conjugate(&a)).unwrap()
        );
    }

    #[test]
    fn orbit_dimension_is_even(p in arb_partition(10)) {
        prop_assert_eq!(orbit_dim(&p) % 2, 0);
    }

    #[test]
    fn pyramid_nilpotents_have_their_shape(p in arb_partition(6)) {
        for pyr in enumerate_pyramids(&p) {
            let e = nilpotent_of(&standard_filling(&pyr));
            prop_assert_eq!(jordan_type(&e).unwrap(), p.clone());
        }
    }

    #[test]
    fn trace_form_is_invariant(seed in proptest::array::uniform3(-3i64..=3)) {
        // structured triple built from a seed, exact arithmetic
        let n = 3;
        let x = &Mat::e(n, 1, 2).scale(&rat(seed[0])) + &Mat::e(n, 2, 3);
        let y = &Mat::e(n, 2, 1).scale(&rat(seed[1])) + &Mat::e(n, 3, 1);
        let z = &Mat::e(n, 1, 1).scale(&rat(seed[2])) - &Mat::e(n, 3, 3).scale(&rat(seed[2]));
        let lhs = trace_pair(&bracket(&x, &y).unwrap(), &z).unwrap();
        let rhs = trace_pair(&x, &bracket(&y, &z).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn mat_json_roundtrips(entries in proptest::collection::vec((1usize..=4, 1usize..=4, -9i64..=9), 0..6)) {
        let mut m = Mat::zero(4);
        for (i, j, v) in entries {
            m.set(i, j, rat(v));
        }
        let s = serde_json::to_string(&m).unwrap();
        let back: Mat = serde_json::from_str(&s).unwrap();
        prop_assert_eq!(back, m);
    }
}
