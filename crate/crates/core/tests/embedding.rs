mod common;

use common::{naive_copies, naive_lattice_copies, posets_up_to, subset_less};
use poset_ramsey::embed::{enumerate_copies_in, find_embedding_in, HostPoset, Pattern};
use poset_ramsey::lattice::{layered_coloring, LayerSpec};
use poset_ramsey::{find_embedding, find_monochromatic_copy, Color, ColoredLattice, Poset};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn lattice_copies_match_subset_oracle() {
    for p in posets_up_to(4) {
        for dim in 0..=4 {
            let host = HostPoset::boolean_lattice(dim);
            let engine: Vec<Vec<u32>> = enumerate_copies_in(&Pattern::new(&p), &host, 64)
                .unwrap()
                .into_iter()
                .map(|c| c.vertices)
                .collect();
            assert_eq!(engine, naive_lattice_copies(&p, dim), "{p:?} in Q_{dim}");
        }
    }
}

#[test]
fn returned_embeddings_are_induced() {
    for p in posets_up_to(4) {
        for dim in 0..=4 {
            let host = HostPoset::boolean_lattice(dim);
            if let Some(e) = find_embedding_in(&Pattern::new(&p), &host) {
                assert!(e.is_valid(&p, |a, b| a & b == a), "{p:?} -> {:?}", e.map);
            }
        }
    }
}

#[test]
fn monochromatic_search_matches_restricted_oracle() {
    let patterns = posets_up_to(3);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..12 {
        let c = ColoredLattice::from_fn(4, |_| if rng.gen_bool(0.5) { Color::Blue } else { Color::Red })
            .unwrap();
        for color in [Color::Blue, Color::Red] {
            let host: Vec<u32> = (0..16).filter(|&z| c.color(z) == color).collect();
            for p in &patterns {
                let found = find_monochromatic_copy(p, &c, color).unwrap();
                let naive = naive_copies(p, &host, subset_less);
                assert_eq!(found.is_some(), !naive.is_empty(), "{p:?} in {c:?}");
                if let Some(copy) = found {
                    assert!(naive.contains(&copy.vertices));
                }
            }
        }
    }
}

#[test]
fn copies_persist_in_larger_cubes() {
    for p in posets_up_to(4) {
        for dim in 0..4 {
            let small = find_embedding(&p, &Poset::boolean_cube(dim)).is_some();
            let large = find_embedding(&p, &Poset::boolean_cube(dim + 1)).is_some();
            assert!(!small || large, "{p:?}: found in Q_{dim} but not Q_{}", dim + 1);
        }
    }
}

#[test]
fn layered_colorings_bound_chain_lengths() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for dim in 1..=8u32 {
        for _ in 0..4 {
            let blue: Vec<u32> = (0..=dim).filter(|_| rng.gen_bool(0.5)).collect();
            let b = blue.len();
            let c = layered_coloring(&LayerSpec::new(dim, blue).unwrap()).unwrap();
            let red = dim as usize + 1 - b;
            let longest = |color: Color, len: usize| {
                len == 0 || find_monochromatic_copy(&Poset::chain(len), &c, color).unwrap().is_some()
            };
            assert!(longest(Color::Blue, b) && !longest(Color::Blue, b + 1), "dim {dim}, {b} blue");
            assert!(longest(Color::Red, red) && !longest(Color::Red, red + 1), "dim {dim}, {red} red");
        }
    }
}

#[test]
fn random_posets_as_hosts() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let patterns = posets_up_to(3);
    for size in [5usize, 8, 11] {
        let pairs: Vec<(usize, usize)> = (0..size)
            .flat_map(|a| (a + 1..size).map(move |b| (a, b)))
            .filter(|_| rng.gen_bool(0.35))
            .collect();
        let host = Poset::from_relations(size, pairs).unwrap();
        let ids: Vec<u32> = (0..size as u32).collect();
        for p in &patterns {
            let engine: Vec<Vec<u32>> = poset_ramsey::enumerate_copies(p, &host)
                .unwrap()
                .into_iter()
                .map(|c| c.vertices)
                .collect();
            assert_eq!(engine, naive_copies(p, &ids, |a, b| host.less(a as usize, b as usize)));
        }
    }
}
