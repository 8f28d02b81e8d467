use std::collections::BTreeMap;

use poset_ramsey::permutations::{
    all_permutations, count_proper, decode_restriction, encode_restriction, is_r_proper, is_t_close,
    properness, proper_restriction, Permutation,
};
use proptest::prelude::*;

fn permutation(max_k: usize) -> impl Strategy<Value = Permutation> {
    (1..=max_k)
        .prop_flat_map(|k| Just((1..=k as u32).collect::<Vec<_>>()).prop_shuffle())
        .prop_map(|v| Permutation::new(v).unwrap())
}

proptest! {
    #[test]
    fn encoding_round_trips_at_the_least_r(p in permutation(10)) {
        let r = properness(&p).max(1);
        let rho = proper_restriction(&p);
        prop_assert!(rho.load() <= properness(&p));
        let enc = encode_restriction(&rho, r, p.len() as u32).unwrap();
        prop_assert_eq!(decode_restriction(&enc).unwrap(), rho);
    }

    #[test]
    fn restriction_keeps_exactly_the_bad_indices(p in permutation(10)) {
        let rho = proper_restriction(&p);
        for i in 1..=p.len() as u32 {
            prop_assert_eq!(rho.map.get(&i).copied(), (p.at(i) >= i).then(|| p.at(i)));
        }
    }
}

#[test]
fn counts_agree_with_filtering() {
    for k in 1..=6 {
        let perms = all_permutations(k);
        for r in 1..=4 {
            let filtered = perms.iter().filter(|p| is_r_proper(p, r)).count() as u64;
            assert_eq!(count_proper(k, r).unwrap(), filtered);
        }
    }
}

#[test]
fn one_proper_permutations_vanish() {
    // At j = 2 both l = 1 and l = 2 satisfy pi(l) >= 1.
    assert_eq!(count_proper(1, 1).unwrap(), 1);
    for k in 2..=7 {
        assert_eq!(count_proper(k, 1).unwrap(), 0);
    }
}

#[test]
fn encodings_are_injective() {
    for r in [2u32, 3] {
        for k in 1..=6 {
            let mut seen = BTreeMap::new();
            for p in all_permutations(k).iter().filter(|p| is_r_proper(p, r)) {
                let rho = proper_restriction(p);
                let enc = encode_restriction(&rho, r, k).unwrap().to_strings();
                if let Some(other) = seen.insert(enc, rho.clone()) {
                    assert_eq!(other, rho);
                }
            }
        }
    }
}

#[test]
fn closeness_is_monotone_in_t() {
    for p in all_permutations(6) {
        for t in 0..6 {
            if is_t_close(p.values(), t) {
                assert!(is_t_close(p.values(), t + 1), "{p} is {t}-close but not {}-close", t + 1);
            }
        }
        assert!(is_t_close(p.values(), 6));
    }
}
