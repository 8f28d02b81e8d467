use poset_ramsey::chain_lemma::{chain_or_cube, run_chain_lemma, verify_certificate, ChainLemmaResult};
use poset_ramsey::lattice::{layered_coloring, LayerSpec};
use poset_ramsey::permutations::all_permutations;
use poset_ramsey::{Color, ColoredLattice, SubsetCode};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_coloring(rng: &mut ChaCha8Rng, dim: u32, p_blue: f64) -> ColoredLattice {
    ColoredLattice::from_fn(dim, |_| if rng.gen_bool(p_blue) { Color::Blue } else { Color::Red }).unwrap()
}

fn orderings(elements: &[u32]) -> Vec<Vec<u32>> {
    all_permutations(elements.len() as u32)
        .into_iter()
        .map(|p| p.values().iter().map(|&i| elements[i as usize - 1]).collect())
        .collect()
}

#[test]
fn labels_are_monotone_and_red() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..500 {
        let c = random_coloring(&mut rng, 6, 0.3);
        let x_mask = SubsetCode(0b000111);
        let tau = [6, 4, 5];
        if let ChainLemmaResult::RedCube { labels, .. } = run_chain_lemma(&c, x_mask, &tau).unwrap() {
            for a in 0..labels.len() {
                for b in 0..labels.len() {
                    if a & b == a {
                        assert!(labels[a] <= labels[b]);
                    }
                }
            }
        }
    }
}

#[test]
fn distinct_orderings_give_distinct_chains() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..200 {
        let c = random_coloring(&mut rng, 5, 0.75);
        let mut seen = Vec::new();
        for tau in orderings(&[3, 4, 5]) {
            let res = run_chain_lemma(&c, SubsetCode(0b11), &tau).unwrap();
            assert!(verify_certificate(&res, &c, SubsetCode(0b11), &tau));
            if let ChainLemmaResult::BlueChain(cert) = res {
                assert!(!seen.contains(&cert.vertices), "two orderings share a chain");
                seen.push(cert.vertices);
            }
        }
    }
}

#[test]
fn random_splits_verify() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..2000 {
        let dim = rng.gen_range(1..=7u32);
        let p_blue = rng.gen_range(0.1..0.9);
        let c = random_coloring(&mut rng, dim, p_blue);
        let x_mask = rng.gen_range(0..(1u32 << dim) - 1);
        let ys: Vec<u32> = (1..=dim).filter(|&e| x_mask >> (e - 1) & 1 == 0).collect();
        let all = orderings(&ys);
        let tau = &all[rng.gen_range(0..all.len())];
        let res = run_chain_lemma(&c, SubsetCode(x_mask), tau).unwrap();
        assert!(verify_certificate(&res, &c, SubsetCode(x_mask), tau));
    }
}

#[test]
fn square_form_on_layered_cube() {
    let c = layered_coloring(&LayerSpec::new(3, [0, 1]).unwrap()).unwrap();
    let res = chain_or_cube(&c, 1, 2).unwrap();
    assert!(verify_certificate(&res, &c, SubsetCode(0b1), &[2, 3]));
    let blue = ColoredLattice::monochromatic(5, Color::Blue).unwrap();
    match chain_or_cube(&blue, 2, 3).unwrap() {
        ChainLemmaResult::BlueChain(cert) => assert_eq!(cert.vertices.len(), 4),
        other => panic!("{other:?}"),
    }
    let red = ColoredLattice::monochromatic(5, Color::Red).unwrap();
    assert!(matches!(chain_or_cube(&red, 2, 3).unwrap(), ChainLemmaResult::RedCube { .. }));
}

#[test]
fn tampered_certificates_fail() {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    for _ in 0..200 {
        let c = random_coloring(&mut rng, 5, 0.5);
        let tau = [4, 5, 3];
        let res = run_chain_lemma(&c, SubsetCode(0b11), &tau).unwrap();
        let tampered = match res.clone() {
            ChainLemmaResult::RedCube { x_mask, tau, mut labels } => {
                let last = labels.len() - 1;
                labels[last] = labels[last].wrapping_add(4);
                ChainLemmaResult::RedCube { x_mask, tau, labels }
            }
            ChainLemmaResult::BlueChain(mut cert) => {
                cert.vertices.swap(1, 2);
                ChainLemmaResult::BlueChain(cert)
            }
        };
        assert!(!verify_certificate(&tampered, &c, SubsetCode(0b11), &tau));
    }
}
