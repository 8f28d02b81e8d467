//! A small DPLL solver with unit propagation over two watched literals.
//!
//! Branching takes the lowest unassigned variable and tries `true` first.
//! Backtracking is chronological, so the search and its model are fully
//! determined by the clause list.

use serde::Serialize;

/// A literal over variable `var`; `positive` means the variable is true.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit(u32);

impl Lit {
    pub fn new(var: u32, positive: bool) -> Self {
        Lit(var << 1 | u32::from(!positive))
    }

    pub fn var(self) -> u32 {
        self.0 >> 1
    }

    pub fn is_positive(self) -> bool {
        self.0 & 1 == 0
    }

    fn negate(self) -> Lit {
        Lit(self.0 ^ 1)
    }

    /// DIMACS form: `var + 1`, negated for negative literals.
    pub fn to_dimacs(self) -> i64 {
        let v = i64::from(self.var()) + 1;
        if self.is_positive() {
            v
        } else {
            -v
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SolverStats {
    pub decisions: u64,
    pub propagations: u64,
    pub conflicts: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SatResult {
    Sat(Vec<bool>),
    Unsat,
}

const UNASSIGNED: u8 = 2;

struct Decision {
    trail_len: usize,
    lit: Lit,
    flipped: bool,
}

pub struct Solver {
    num_vars: u32,
    clauses: Vec<Vec<Lit>>,
    units: Vec<Lit>,
    trivially_unsat: bool,
    /// `watches[lit]` holds the clauses to revisit when `lit` becomes false.
    watches: Vec<Vec<usize>>,
    values: Vec<u8>,
    trail: Vec<Lit>,
    head: usize,
    pub stats: SolverStats,
}

impl Solver {
    pub fn new(num_vars: u32) -> Self {
        Solver {
            num_vars,
            clauses: Vec::new(),
            units: Vec::new(),
            trivially_unsat: false,
            watches: vec![Vec::new(); 2 * num_vars as usize],
            values: vec![UNASSIGNED; num_vars as usize],
            trail: Vec::new(),
            head: 0,
            stats: SolverStats::default(),
        }
    }

    /// Adds a clause. Duplicate literals are removed; tautologies are dropped.
    pub fn add_clause(&mut self, lits: &[Lit]) {
        let mut c: Vec<Lit> = lits.to_vec();
        c.sort_unstable();
        c.dedup();
        if c.windows(2).any(|w| w[0].var() == w[1].var()) {
            return;
        }
        assert!(c.iter().all(|l| l.var() < self.num_vars), "literal out of range");
        match c.len() {
            0 => self.trivially_unsat = true,
            1 => self.units.push(c[0]),
            _ => {
                let id = self.clauses.len();
                self.watches[c[0].negate().0 as usize].push(id);
                self.watches[c[1].negate().0 as usize].push(id);
                self.clauses.push(c);
            }
        }
    }

    fn value(&self, lit: Lit) -> u8 {
        match self.values[lit.var() as usize] {
            UNASSIGNED => UNASSIGNED,
            v => v ^ (lit.0 as u8 & 1),
        }
    }

    fn assign(&mut self, lit: Lit) {
        self.values[lit.var() as usize] = u8::from(lit.is_positive());
        self.trail.push(lit);
    }

    fn undo_to(&mut self, len: usize) {
        for lit in self.trail.drain(len..) {
            self.values[lit.var() as usize] = UNASSIGNED;
        }
        self.head = self.head.min(len);
    }

    /// Propagates pending assignments; false on conflict.
    fn propagate(&mut self) -> bool {
        while self.head < self.trail.len() {
            let lit = self.trail[self.head];
            self.head += 1;
            let falsified = lit.negate();
            let mut list = std::mem::take(&mut self.watches[lit.0 as usize]);
            let mut i = 0;
            let mut ok = true;
            while i < list.len() {
                let id = list[i];
                let clause = &mut self.clauses[id];
                if clause[0] == falsified {
                    clause.swap(0, 1);
                }
                let first = clause[0];
                if self.values[first.var() as usize] != UNASSIGNED
                    && self.values[first.var() as usize] ^ (first.0 as u8 & 1) == 1
                {
                    i += 1;
                    continue;
                }
                let mut moved = false;
                for j in 2..clause.len() {
                    let l = clause[j];
                    let v = self.values[l.var() as usize];
                    if v == UNASSIGNED || v ^ (l.0 as u8 & 1) == 1 {
                        clause.swap(1, j);
                        let new_watch = clause[1].negate().0 as usize;
                        self.watches[new_watch].push(id);
                        list.swap_remove(i);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                match self.value(first) {
                    UNASSIGNED => {
                        self.stats.propagations += 1;
                        self.assign(first);
                        i += 1;
                    }
                    _ => {
                        ok = false;
                        break;
                    }
                }
            }
            // Clauses whose watch moved were removed from `list`; anything
            // added to this slot meanwhile must be kept as well.
            let added = std::mem::take(&mut self.watches[lit.0 as usize]);
            list.extend(added);
            self.watches[lit.0 as usize] = list;
            if !ok {
                self.stats.conflicts += 1;
                return false;
            }
        }
        true
    }

    pub fn solve(&mut self) -> SatResult {
        if self.trivially_unsat {
            return SatResult::Unsat;
        }
        for lit in self.units.clone() {
            match self.value(lit) {
                UNASSIGNED => self.assign(lit),
                1 => {}
                _ => return SatResult::Unsat,
            }
        }
        let mut decisions: Vec<Decision> = Vec::new();
        loop {
            if !self.propagate() {
                loop {
                    let Some(d) = decisions.pop() else {
                        return SatResult::Unsat;
                    };
                    self.undo_to(d.trail_len);
                    if !d.flipped {
                        let lit = d.lit.negate();
                        decisions.push(Decision { trail_len: d.trail_len, lit, flipped: true });
                        self.assign(lit);
                        break;
                    }
                }
                continue;
            }
            let Some(var) = (0..self.num_vars).find(|&v| self.values[v as usize] == UNASSIGNED) else {
                return SatResult::Sat(self.values.iter().map(|&v| v == 1).collect());
            };
            self.stats.decisions += 1;
            let lit = Lit::new(var, true);
            decisions.push(Decision { trail_len: self.trail.len(), lit, flipped: false });
            self.assign(lit);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lit(d: i32) -> Lit {
        Lit::new(d.unsigned_abs() - 1, d > 0)
    }

    fn solve(n: u32, clauses: &[&[i32]]) -> SatResult {
        let mut s = Solver::new(n);
        for c in clauses {
            s.add_clause(&c.iter().map(|&d| lit(d)).collect::<Vec<_>>());
        }
        s.solve()
    }

    fn satisfies(model: &[bool], clauses: &[&[i32]]) -> bool {
        clauses.iter().all(|c| {
            c.iter().any(|&d| model[(d.unsigned_abs() - 1) as usize] == (d > 0))
        })
    }

    #[test]
    fn simple_instances() {
        assert_eq!(solve(1, &[&[1], &[-1]]), SatResult::Unsat);
        assert_eq!(solve(2, &[&[1, 2], &[-1]]), SatResult::Sat(vec![false, true]));
        assert_eq!(solve(1, &[&[]]), SatResult::Unsat);
        assert_eq!(solve(2, &[]), SatResult::Sat(vec![true, true]));
    }

    #[test]
    fn pigeonhole_three_into_two() {
        // p(i, h): pigeon i in hole h, variable 2i + h + 1.
        let v = |i: i32, h: i32| 2 * i + h + 1;
        let mut clauses: Vec<Vec<i32>> = (0..3).map(|i| vec![v(i, 0), v(i, 1)]).collect();
        for h in 0..2 {
            for a in 0..3 {
                for b in a + 1..3 {
                    clauses.push(vec![-v(a, h), -v(b, h)]);
                }
            }
        }
        let refs: Vec<&[i32]> = clauses.iter().map(|c| c.as_slice()).collect();
        assert_eq!(solve(6, &refs), SatResult::Unsat);
    }

    #[test]
    fn agrees_with_truth_tables() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..400 {
            let n = rng.gen_range(1..=6u32);
            let m = rng.gen_range(0..=14);
            let clauses: Vec<Vec<i32>> = (0..m)
                .map(|_| {
                    let len = rng.gen_range(1..=3);
                    (0..len)
                        .map(|_| {
                            let v = rng.gen_range(1..=n as i32);
                            if rng.gen_bool(0.5) { v } else { -v }
                        })
                        .collect()
                })
                .collect();
            let refs: Vec<&[i32]> = clauses.iter().map(|c| c.as_slice()).collect();
            let brute = (0..1u32 << n)
                .map(|bits| (0..n).map(|i| bits >> i & 1 == 1).collect::<Vec<_>>())
                .any(|model| satisfies(&model, &refs));
            match solve(n, &refs) {
                SatResult::Sat(model) => assert!(brute && satisfies(&model, &refs)),
                SatResult::Unsat => assert!(!brute, "{clauses:?}"),
            }
        }
    }
}
