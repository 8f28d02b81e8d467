//! Exact decision of `Q_N → (P, Q_n)` and of `R(P, Q_n)` for small `N`.
//!
//! Vertex `Z` of `Q_N` becomes variable `Z`, true meaning blue. Every copy
//! of `P` contributes the clause "some vertex is red" and every copy of
//! `Q_n` the clause "some vertex is blue". The arrow holds exactly when the
//! clauses are unsatisfiable; a model is a coloring with neither copy.

use std::fmt::Write as _;

use serde::Serialize;

use crate::dpll::{Lit, SatResult, Solver, SolverStats};
use crate::embed::{enumerate_copies_in, HostPoset, Pattern};
use crate::error::{budget, param, Error, Result};
use crate::lattice::{verify_witness, Color, ColoredLattice, SubsetCode};
use crate::poset::Poset;

/// Default largest lattice dimension for [`decide_arrow`]: 64 variables.
pub const MAX_SEARCH_DIM: u32 = 6;

#[derive(Clone, Debug)]
pub struct ArrowInstance {
    pub pattern: Poset,
    pub n: u32,
    pub dim: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    /// Forces singleton colors to be sorted blue-first. Sound because
    /// permuting the ground set maps colorings without the two copies to
    /// colorings without them.
    pub symmetry: bool,
    pub max_dim: u32,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { symmetry: false, max_dim: MAX_SEARCH_DIM }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Holds,
    Counterexample(ColoredLattice),
}

impl SearchOutcome {
    pub fn holds(&self) -> bool {
        matches!(self, SearchOutcome::Holds)
    }
}

/// Clause counts and solver statistics of one decision.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ArrowStats {
    pub variables: u32,
    pub pattern_copies: u64,
    pub cube_copies: u64,
    pub solver: SolverStats,
}

struct Encoding {
    variables: u32,
    clauses: Vec<Vec<Lit>>,
    pattern_copies: u64,
    cube_copies: u64,
}

fn encode(inst: &ArrowInstance, opts: &SearchOptions) -> Result<Encoding> {
    if inst.dim > opts.max_dim {
        return Err(budget(format!(
            "dimension {} exceeds the search cap {}",
            inst.dim, opts.max_dim
        )));
    }
    let host = HostPoset::boolean_lattice(inst.dim);
    let cap = 1usize << opts.max_dim;
    let p_copies = enumerate_copies_in(&Pattern::new(&inst.pattern), &host, cap)?;
    let q_copies = if inst.n > inst.dim {
        Vec::new()
    } else {
        enumerate_copies_in(&Pattern::new(&Poset::boolean_cube(inst.n)), &host, cap)?
    };
    let mut clauses = Vec::with_capacity(p_copies.len() + q_copies.len());
    for copy in &p_copies {
        clauses.push(copy.vertices.iter().map(|&z| Lit::new(z, false)).collect());
    }
    for copy in &q_copies {
        clauses.push(copy.vertices.iter().map(|&z| Lit::new(z, true)).collect());
    }
    if opts.symmetry {
        for i in 0..inst.dim.saturating_sub(1) {
            let (a, b) = (1u32 << i, 1u32 << (i + 1));
            clauses.push(vec![Lit::new(a, true), Lit::new(b, false)]);
        }
    }
    Ok(Encoding {
        variables: 1 << inst.dim,
        clauses,
        pattern_copies: p_copies.len() as u64,
        cube_copies: q_copies.len() as u64,
    })
}

pub fn decide_arrow(inst: &ArrowInstance) -> Result<SearchOutcome> {
    decide_arrow_with(inst, &SearchOptions::default()).map(|(o, _)| o)
}

/// Decides the arrow relation and returns the solver statistics as well.
///
/// A counterexample is re-checked by embedding search before it is
/// returned.
pub fn decide_arrow_with(
    inst: &ArrowInstance,
    opts: &SearchOptions,
) -> Result<(SearchOutcome, ArrowStats)> {
    let enc = encode(inst, opts)?;
    let mut solver = Solver::new(enc.variables);
    for c in &enc.clauses {
        solver.add_clause(c);
    }
    let result = solver.solve();
    let stats = ArrowStats {
        variables: enc.variables,
        pattern_copies: enc.pattern_copies,
        cube_copies: enc.cube_copies,
        solver: solver.stats,
    };
    match result {
        SatResult::Unsat => Ok((SearchOutcome::Holds, stats)),
        SatResult::Sat(model) => {
            let coloring = ColoredLattice::from_fn(inst.dim, |z: SubsetCode| {
                if model[z.0 as usize] {
                    Color::Blue
                } else {
                    Color::Red
                }
            })?;
            let report = verify_witness(&coloring, &inst.pattern, inst.n)?;
            if !report.is_witness() {
                return Err(Error::Verification(
                    "solver model failed re-validation by embedding search".into(),
                ));
            }
            Ok((SearchOutcome::Counterexample(coloring), stats))
        }
    }
}

/// Least `N ≤ n_max` with `Q_N → (P, Q_n)`, scanning up from `n + h(P) − 1`.
pub fn exact_ramsey(p: &Poset, n: u32, n_max: u32) -> Result<u32> {
    exact_ramsey_with(p, n, n_max, &SearchOptions::default())
}

pub fn exact_ramsey_with(p: &Poset, n: u32, n_max: u32, opts: &SearchOptions) -> Result<u32> {
    if n_max > opts.max_dim {
        return Err(param(format!(
            "n_max = {n_max} exceeds the search cap {}",
            opts.max_dim
        )));
    }
    if p.is_empty() {
        return Err(param("the pattern poset must be non-empty"));
    }
    let start = (n as usize + p.height() - 1) as u32;
    let mut last = None;
    for dim in start..=n_max {
        let inst = ArrowInstance { pattern: p.clone(), n, dim };
        match decide_arrow_with(&inst, opts)?.0 {
            SearchOutcome::Holds => return Ok(dim),
            SearchOutcome::Counterexample(c) => last = Some(c),
        }
    }
    Err(budget(match last {
        Some(c) => format!(
            "no arrow up to dimension {n_max}; largest counterexample: {}",
            c.to_json()
        ),
        None => format!("the lower bound {start} already exceeds n_max = {n_max}"),
    }))
}

/// The clauses of [`decide_arrow`] in DIMACS CNF. Variable `Z + 1` stands
/// for vertex `Z`; a positive literal means blue.
pub fn export_cnf(inst: &ArrowInstance) -> Result<String> {
    export_cnf_with(inst, &SearchOptions::default())
}

pub fn export_cnf_with(inst: &ArrowInstance, opts: &SearchOptions) -> Result<String> {
    let enc = encode(inst, opts)?;
    let mut out = String::new();
    writeln!(out, "p cnf {} {}", enc.variables, enc.clauses.len()).unwrap();
    for c in &enc.clauses {
        for l in c {
            write!(out, "{} ", l.to_dimacs()).unwrap();
        }
        out.push_str("0\n");
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(p: Poset, n: u32, dim: u32) -> ArrowInstance {
        ArrowInstance { pattern: p, n, dim }
    }

    #[test]
    fn chain_examples() {
        assert!(decide_arrow(&inst(Poset::chain(2), 1, 2)).unwrap().holds());
        match decide_arrow(&inst(Poset::chain(2), 1, 1)).unwrap() {
            SearchOutcome::Counterexample(c) => {
                assert_eq!(c.color(0), Color::Blue);
                assert_eq!(c.color(1), Color::Red);
            }
            SearchOutcome::Holds => panic!("Q_1 has a coloring avoiding both"),
        }
    }

    #[test]
    fn two_chain_counterexample_at_three() {
        let p = Poset::chain_composition(&[2, 2]);
        match decide_arrow(&inst(p.clone(), 1, 3)).unwrap() {
            SearchOutcome::Counterexample(c) => {
                assert!(verify_witness(&c, &p, 1).unwrap().is_witness())
            }
            SearchOutcome::Holds => panic!("expected a counterexample"),
        }
    }

    #[test]
    fn small_exact_values() {
        assert_eq!(exact_ramsey(&Poset::v_shape(), 1, 6).unwrap(), 3);
        assert_eq!(exact_ramsey(&Poset::chain(3), 1, 6).unwrap(), 3);
        assert_eq!(exact_ramsey(&Poset::antichain(2), 1, 6).unwrap(), 3);
    }

    #[test]
    fn symmetry_does_not_change_answers() {
        let opts = SearchOptions { symmetry: true, ..Default::default() };
        for p in [Poset::v_shape(), Poset::chain_composition(&[2, 1]), Poset::antichain(2)] {
            assert_eq!(
                exact_ramsey_with(&p, 1, 6, &opts).unwrap(),
                exact_ramsey(&p, 1, 6).unwrap()
            );
        }
    }

    #[test]
    fn cnf_exports() {
        let cnf = export_cnf(&inst(Poset::chain(2), 1, 2)).unwrap();
        let mut lines = cnf.lines();
        assert_eq!(lines.next(), Some("p cnf 4 10"));
        assert_eq!(lines.count(), 10);
        let cnf = export_cnf(&inst(Poset::chain(1), 0, 0)).unwrap();
        assert_eq!(cnf, "p cnf 1 2\n-1 0\n1 0\n");
    }

    #[test]
    fn caps() {
        assert!(matches!(
            decide_arrow(&inst(Poset::chain(2), 1, 7)),
            Err(Error::Budget(_))
        ));
        assert!(matches!(
            exact_ramsey(&Poset::chain_composition(&[2, 2]), 1, 3),
            Err(Error::Budget(_))
        ));
    }
}
