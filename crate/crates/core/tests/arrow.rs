mod common;

use common::{naive_arrow, posets_up_to};
use poset_ramsey::ramsey::{decide_arrow, export_cnf, ArrowInstance, SearchOutcome};
use poset_ramsey::{exact_ramsey, ramsey_bounds, verify_witness, Error, Poset};

fn decide(p: &Poset, n: u32, dim: u32) -> SearchOutcome {
    decide_arrow(&ArrowInstance { pattern: p.clone(), n, dim }).unwrap()
}

#[test]
fn solver_matches_exhaustive_colorings() {
    for p in posets_up_to(3) {
        for n in 0..=2 {
            for dim in 0..=3 {
                assert_eq!(decide(&p, n, dim).holds(), naive_arrow(&p, n, dim), "{p:?}, n={n}, N={dim}");
            }
        }
    }
    for p in [Poset::n_shape(), Poset::boolean_cube(2), Poset::antichain(4), Poset::j_shape()] {
        for dim in 2..=4 {
            assert_eq!(decide(&p, 1, dim).holds(), naive_arrow(&p, 1, dim), "{p:?} at N={dim}");
        }
    }
}

#[test]
fn arrow_is_monotone_in_dimension() {
    for p in posets_up_to(4) {
        let mut held = false;
        for dim in 0..=4 {
            let holds = decide(&p, 1, dim).holds();
            assert!(!held || holds, "{p:?}: holds below N={dim} but not at it");
            held = holds;
        }
    }
}

#[test]
fn counterexamples_revalidate() {
    for p in posets_up_to(4) {
        for dim in 0..=4 {
            if let SearchOutcome::Counterexample(c) = decide(&p, 1, dim) {
                assert!(verify_witness(&c, &p, 1).unwrap().is_witness());
            }
        }
    }
}

#[test]
fn long_chain_or_red_cube() {
    for n in 1..=4u32 {
        for k in 1..=5 - n {
            assert!(decide(&Poset::chain(k as usize + 1), n, n + k).holds(), "n={n}, k={k}");
        }
    }
}

#[test]
fn exact_values_sit_inside_bounds() {
    for p in posets_up_to(4) {
        match exact_ramsey(&p, 1, 6) {
            Ok(value) => {
                let report = ramsey_bounds(&p, 1).unwrap();
                assert!(report.admits(u64::from(value)), "{p:?}: {value} vs {report:?}");
                if let Some(exact) = report.exact {
                    assert_eq!(exact, u64::from(value), "{p:?}");
                }
            }
            Err(Error::Budget(_)) => {}
            Err(e) => panic!("{p:?}: {e}"),
        }
    }
}

#[test]
fn cnf_header_matches_body() {
    for p in posets_up_to(3) {
        let cnf = export_cnf(&ArrowInstance { pattern: p.clone(), n: 1, dim: 3 }).unwrap();
        let mut lines = cnf.lines();
        let header: Vec<usize> = lines
            .next()
            .unwrap()
            .strip_prefix("p cnf ")
            .unwrap()
            .split(' ')
            .map(|x| x.parse().unwrap())
            .collect();
        let body: Vec<&str> = lines.collect();
        assert_eq!(header, vec![8, body.len()]);
        for clause in body {
            let lits: Vec<i64> = clause.split(' ').map(|x| x.parse().unwrap()).collect();
            assert_eq!(*lits.last().unwrap(), 0);
            assert!(lits[..lits.len() - 1].iter().all(|&l| l != 0 && l.abs() <= 8));
        }
    }
}
