//! Induced-subposet embedding search.
//!
//! A pattern poset is mapped injectively into a host so that `a <= b` holds
//! in the pattern exactly when `map(a) <= map(b)` holds in the host. The
//! search is plain backtracking over a static vertex order with bitset
//! domains, forward checking and arc consistency on the pairwise order
//! constraints. Hosts that are Boolean lattices with a vertex set invariant
//! under permutations of the ground set additionally get ground-set symmetry
//! breaking when only existence is asked for.

use std::collections::BTreeSet;
use std::ops::ControlFlow;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{budget, Result};
use crate::lattice::{Color, ColoredLattice};
use crate::poset::Poset;

/// Default vertex cap for [`enumerate_copies`].
pub const COPY_HOST_CAP: usize = 64;

/// Largest host the engine will materialize.
pub const HOST_CAP: usize = 1 << 13;

/// An order embedding: `map[a]` is the host identifier of pattern vertex `a`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Embedding {
    pub map: Vec<u32>,
}

impl Embedding {
    /// Checks injectivity and `a <= b  <=>  map(a) <= map(b)` for all pairs,
    /// using only the supplied host order.
    pub fn is_valid(&self, pattern: &Poset, host_leq: impl Fn(u32, u32) -> bool) -> bool {
        let m = pattern.size();
        if self.map.len() != m {
            return false;
        }
        let distinct: BTreeSet<u32> = self.map.iter().copied().collect();
        if distinct.len() != m {
            return false;
        }
        (0..m).all(|a| {
            (0..m).all(|b| pattern.leq(a, b) == host_leq(self.map[a], self.map[b]))
        })
    }

    pub fn copy_set(&self) -> CopySet {
        CopySet::new(self.map.clone())
    }
}

/// The vertex set of a copy, sorted ascending. Serializes as a JSON array.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CopySet {
    pub vertices: Vec<u32>,
}

impl CopySet {
    pub fn new(mut vertices: Vec<u32>) -> Self {
        vertices.sort_unstable();
        vertices.dedup();
        CopySet { vertices }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// The induced order on the vertices, as a [`Poset`] on `0..len` in the
    /// sorted vertex order.
    pub fn induced(&self, host_less: impl Fn(u32, u32) -> bool) -> Poset {
        let v = &self.vertices;
        let pairs = (0..v.len())
            .flat_map(|a| (0..v.len()).map(move |b| (a, b)))
            .filter(|&(a, b)| a != b && host_less(v[a], v[b]));
        Poset::from_relations(v.len(), pairs.collect::<Vec<_>>())
            .expect("host order restricted to a subset is a partial order")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Rel {
    Less,
    Greater,
    Incomparable,
}

/// A pattern poset with the precomputed data the search needs.
#[derive(Clone, Debug)]
pub struct Pattern {
    poset: Poset,
    rel: Vec<Option<Rel>>,
    depth: Vec<usize>,
    codepth: Vec<usize>,
    n_above: Vec<usize>,
    n_below: Vec<usize>,
    n_incomparable: Vec<usize>,
    order: Vec<usize>,
}

impl Pattern {
    pub fn new(poset: &Poset) -> Self {
        let m = poset.size();
        let mut rel = vec![None; m * m];
        for a in 0..m {
            for b in 0..m {
                if a == b {
                    continue;
                }
                rel[a * m + b] = Some(if poset.less(a, b) {
                    Rel::Less
                } else if poset.less(b, a) {
                    Rel::Greater
                } else {
                    Rel::Incomparable
                });
            }
        }
        let count = |a: usize, r: Rel| (0..m).filter(|&b| rel[a * m + b] == Some(r)).count();
        let n_above: Vec<usize> = (0..m).map(|a| count(a, Rel::Less)).collect();
        let n_below: Vec<usize> = (0..m).map(|a| count(a, Rel::Greater)).collect();
        let n_incomparable = (0..m).map(|a| count(a, Rel::Incomparable)).collect();
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by_key(|&a| (std::cmp::Reverse(n_above[a] + n_below[a]), a));
        Pattern {
            poset: poset.clone(),
            depth: poset.depths(),
            codepth: poset.codepths(),
            rel,
            n_above,
            n_below,
            n_incomparable,
            order,
        }
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn size(&self) -> usize {
        self.poset.size()
    }

    fn rel(&self, a: usize, b: usize) -> Rel {
        self.rel[a * self.size() + b].expect("distinct vertices")
    }
}

/// A host poset with strict up- and down-sets stored as bitsets over host
/// indices. Host indices are positions in `ids`, which are the identifiers
/// reported back (poset elements or subset codes).
#[derive(Clone, Debug)]
pub struct HostPoset {
    ids: Vec<u32>,
    above: Vec<FixedBitSet>,
    below: Vec<FixedBitSet>,
    topo: Vec<usize>,
    lattice_dim: Option<u32>,
    symmetric: bool,
}

impl HostPoset {
    pub fn from_poset(p: &Poset) -> Self {
        let m = p.size();
        let mut above = vec![FixedBitSet::with_capacity(m); m];
        let mut below = vec![FixedBitSet::with_capacity(m); m];
        for a in 0..m {
            for b in 0..m {
                if p.less(a, b) {
                    above[a].insert(b);
                    below[b].insert(a);
                }
            }
        }
        HostPoset {
            ids: (0..m as u32).collect(),
            above,
            below,
            topo: p.linear_extension(),
            lattice_dim: None,
            symmetric: false,
        }
    }

    /// The full Boolean lattice `Q_n` on subset codes.
    pub fn boolean_lattice(n: u32) -> Self {
        let mut h = Self::lattice_restricted(n, |_| true);
        h.symmetric = true;
        h
    }

    /// The subposet of `Q_n` on the codes accepted by `keep`.
    pub fn lattice_restricted(n: u32, keep: impl Fn(u32) -> bool) -> Self {
        let full = 1u32 << n;
        let ids: Vec<u32> = (0..full).filter(|&c| keep(c)).collect();
        let mut index = vec![u32::MAX; full as usize];
        for (i, &c) in ids.iter().enumerate() {
            index[c as usize] = i as u32;
        }
        let len = ids.len();
        let mut above = vec![FixedBitSet::with_capacity(len); len];
        let mut below = vec![FixedBitSet::with_capacity(len); len];
        for (x, &c) in ids.iter().enumerate() {
            // Proper submasks of c.
            let mut s = c;
            while s != 0 {
                s = (s - 1) & c;
                let y = index[s as usize];
                if y != u32::MAX {
                    below[x].insert(y as usize);
                    above[y as usize].insert(x);
                }
            }
        }
        HostPoset {
            ids,
            above,
            below,
            topo: (0..len).collect(),
            lattice_dim: Some(n),
            symmetric: false,
        }
    }

    /// Vertices of one color. A layered coloring keeps the ground-set
    /// symmetry of the lattice.
    pub fn colored(c: &ColoredLattice, color: Color) -> Result<Self> {
        let n = c.n_ground();
        if (1usize << n) > HOST_CAP {
            let count = (0..1u32 << n).filter(|&z| c.color(z) == color).count();
            if count > HOST_CAP {
                return Err(budget(format!(
                    "{count} host vertices exceed the cap of {HOST_CAP}"
                )));
            }
        }
        let mut h = Self::lattice_restricted(n, |z| c.color(z) == color);
        h.symmetric = c.is_layered();
        Ok(h)
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[u32] {
        &self.ids
    }

    /// Strict order between host indices.
    pub fn less(&self, x: usize, y: usize) -> bool {
        self.above[x].contains(y)
    }

    fn has_support(&self, x: usize, rel: Rel, dom: &FixedBitSet) -> bool {
        let d = dom.as_slice();
        match rel {
            Rel::Less => intersects(self.above[x].as_slice(), d),
            Rel::Greater => intersects(self.below[x].as_slice(), d),
            Rel::Incomparable => {
                let up = self.above[x].as_slice();
                let down = self.below[x].as_slice();
                let (word, bit) = (x / BLOCK_BITS, x % BLOCK_BITS);
                d.iter().enumerate().any(|(i, &w)| {
                    let mut free = w & !up[i] & !down[i];
                    if i == word {
                        free &= !(1 << bit);
                    }
                    free != 0
                })
            }
        }
    }

    /// Restricts `dom` to the vertices standing in relation `rel` to `x`.
    fn restrict(&self, dom: &mut FixedBitSet, x: usize, rel: Rel) {
        match rel {
            Rel::Less => dom.intersect_with(&self.above[x]),
            Rel::Greater => dom.intersect_with(&self.below[x]),
            Rel::Incomparable => {
                dom.difference_with(&self.above[x]);
                dom.difference_with(&self.below[x]);
                dom.set(x, false);
            }
        }
    }
}

const BLOCK_BITS: usize = usize::BITS as usize;

fn intersects(a: &[usize], b: &[usize]) -> bool {
    a.iter().zip(b).any(|(x, y)| x & y != 0)
}

struct Search<'a> {
    pat: &'a Pattern,
    host: &'a HostPoset,
    symmetry: bool,
    assigned: Vec<usize>,
}

const UNASSIGNED: usize = usize::MAX;

impl<'a> Search<'a> {
    fn new(pat: &'a Pattern, host: &'a HostPoset, symmetry: bool) -> Self {
        Search {
            pat,
            host,
            symmetry: symmetry && host.symmetric && host.lattice_dim.is_some(),
            assigned: vec![UNASSIGNED; pat.size()],
        }
    }

    /// Initial domains after degree, depth and arc-consistency filtering, or
    /// `None` if some pattern vertex has no candidate.
    fn root_domains(&self) -> Option<Vec<FixedBitSet>> {
        let (pat, host) = (self.pat, self.host);
        let m = pat.size();
        let hn = host.len();
        if m > hn {
            return None;
        }
        let mut doms = vec![FixedBitSet::with_capacity(hn); m];
        for d in doms.iter_mut() {
            d.insert_range(..);
        }
        loop {
            let mut union = FixedBitSet::with_capacity(hn);
            for d in &doms {
                union.union_with(d);
            }
            let stats = host_stats(host, &union);
            let mut changed = false;
            for (u, dom) in doms.iter_mut().enumerate() {
                let before = dom.count_ones(..);
                let keep: Vec<usize> = dom
                    .ones()
                    .filter(|&x| {
                        let s = &stats[x];
                        s.depth >= pat.depth[u]
                            && s.codepth >= pat.codepth[u]
                            && s.above >= pat.n_above[u]
                            && s.below >= pat.n_below[u]
                            && s.incomparable >= pat.n_incomparable[u]
                    })
                    .collect();
                if keep.len() != before {
                    changed = true;
                    dom.clear();
                    keep.into_iter().for_each(|x| dom.insert(x));
                }
                if dom.is_clear() {
                    return None;
                }
            }
            if !changed {
                break;
            }
        }
        let all: Vec<usize> = (0..m).collect();
        if !self.arc_consistency(&mut doms, &all) {
            return None;
        }
        Some(doms)
    }

    /// Removes unsupported candidates until every pair of unassigned vertices
    /// is arc consistent. Returns false on a wipeout.
    fn arc_consistency(&self, doms: &mut [FixedBitSet], free: &[usize]) -> bool {
        let mut removed = Vec::new();
        loop {
            let mut changed = false;
            for &u in free {
                for &w in free {
                    if u == w {
                        continue;
                    }
                    let rel = self.pat.rel(u, w);
                    removed.clear();
                    removed.extend(
                        doms[u]
                            .ones()
                            .filter(|&x| !self.host.has_support(x, rel, &doms[w])),
                    );
                    if removed.is_empty() {
                        continue;
                    }
                    changed = true;
                    for &x in &removed {
                        doms[u].set(x, false);
                    }
                    if doms[u].is_clear() {
                        return false;
                    }
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn run(
        &mut self,
        level: usize,
        doms: &[FixedBitSet],
        cells: &[u32],
        visit: &mut dyn FnMut(&[usize]) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        let m = self.pat.size();
        if level == m {
            return visit(&self.assigned);
        }
        let u = self.pat.order[level];
        let free: Vec<usize> = self.pat.order[level + 1..].to_vec();
        for x in doms[u].ones() {
            if self.symmetry && !is_canonical(self.host.ids[x], cells) {
                continue;
            }
            let mut next = doms.to_vec();
            let mut dead = false;
            for &w in &free {
                self.host.restrict(&mut next[w], x, self.pat.rel(u, w));
                if next[w].is_clear() {
                    dead = true;
                    break;
                }
            }
            if dead || !self.arc_consistency(&mut next, &free) {
                continue;
            }
            self.assigned[u] = x;
            let next_cells = if self.symmetry {
                refine_cells(cells, self.host.ids[x])
            } else {
                Vec::new()
            };
            let flow = self.run(level + 1, &next, &next_cells, visit);
            self.assigned[u] = UNASSIGNED;
            flow?;
        }
        ControlFlow::Continue(())
    }
}

#[derive(Clone, Copy, Default)]
struct VertexStats {
    depth: usize,
    codepth: usize,
    above: usize,
    below: usize,
    incomparable: usize,
}

/// Depth, codepth and neighbourhood counts of each vertex inside the
/// subposet induced by `within`.
fn host_stats(host: &HostPoset, within: &FixedBitSet) -> Vec<VertexStats> {
    let mut stats = vec![VertexStats::default(); host.len()];
    let total = within.count_ones(..);
    for &x in &host.topo {
        if !within.contains(x) {
            continue;
        }
        let d = host.below[x]
            .intersection(within)
            .map(|y| stats[y].depth)
            .max()
            .unwrap_or(0);
        stats[x].depth = d + 1;
    }
    for &x in host.topo.iter().rev() {
        if !within.contains(x) {
            continue;
        }
        let d = host.above[x]
            .intersection(within)
            .map(|y| stats[y].codepth)
            .max()
            .unwrap_or(0);
        let s = &mut stats[x];
        s.codepth = d + 1;
        s.above = host.above[x].intersection_count(within);
        s.below = host.below[x].intersection_count(within);
        s.incomparable = total - 1 - s.above - s.below;
    }
    stats
}

/// A candidate is canonical if, within every cell of ground elements that the
/// assigned vertices cannot tell apart, it uses the lowest elements of the
/// cell. Any embedding can be moved onto a canonical one by permuting inside
/// cells, which fixes every assigned vertex.
fn is_canonical(code: u32, cells: &[u32]) -> bool {
    cells.iter().all(|&cell| {
        let k = (code & cell).count_ones();
        lowest_bits(cell, k) == code & cell
    })
}

fn lowest_bits(mut mask: u32, k: u32) -> u32 {
    let mut out = 0;
    for _ in 0..k {
        let b = mask & mask.wrapping_neg();
        out |= b;
        mask ^= b;
    }
    out
}

fn refine_cells(cells: &[u32], code: u32) -> Vec<u32> {
    cells
        .iter()
        .flat_map(|&c| [c & code, c & !code])
        .filter(|&c| c != 0)
        .collect()
}

fn initial_cells(host: &HostPoset) -> Vec<u32> {
    match host.lattice_dim {
        Some(n) if n > 0 => vec![((1u64 << n) - 1) as u32],
        _ => Vec::new(),
    }
}

fn to_embedding(host: &HostPoset, assigned: &[usize]) -> Embedding {
    Embedding {
        map: assigned.iter().map(|&x| host.ids[x]).collect(),
    }
}

/// First embedding in search order, without symmetry breaking.
///
/// Candidates are tried in ascending host order for each pattern vertex in
/// the static search order, so the result is the lexicographically least
/// embedding when read in that order.
pub fn find_embedding_in(pattern: &Pattern, host: &HostPoset) -> Option<Embedding> {
    let mut search = Search::new(pattern, host, false);
    let doms = search.root_domains()?;
    let mut found = None;
    let _ = search.run(0, &doms, &[], &mut |a| {
        found = Some(to_embedding(host, a));
        ControlFlow::Break(())
    });
    found
}

/// Existence check. Uses ground-set symmetry breaking when the host allows
/// it, so the witness is some embedding but not necessarily the least one.
pub fn search_any(pattern: &Pattern, host: &HostPoset) -> Option<Embedding> {
    let mut search = Search::new(pattern, host, true);
    let doms = search.root_domains()?;
    let cells = initial_cells(host);
    let mut found = None;
    let _ = search.run(0, &doms, &cells, &mut |a| {
        found = Some(to_embedding(host, a));
        ControlFlow::Break(())
    });
    found
}

pub fn find_embedding(pattern: &Poset, host: &Poset) -> Option<Embedding> {
    find_embedding_in(&Pattern::new(pattern), &HostPoset::from_poset(host))
}

/// All copies of `pattern` in `host` as distinct vertex sets, sorted.
pub fn enumerate_copies_in(
    pattern: &Pattern,
    host: &HostPoset,
    cap: usize,
) -> Result<Vec<CopySet>> {
    if host.len() > cap {
        return Err(budget(format!(
            "host has {} vertices, copy enumeration is capped at {cap}",
            host.len()
        )));
    }
    let search = Search::new(pattern, host, false);
    let Some(doms) = search.root_domains() else {
        return Ok(Vec::new());
    };
    if pattern.size() == 0 {
        return Ok(vec![CopySet::new(Vec::new())]);
    }
    let first = pattern.order[0];
    let candidates: Vec<usize> = doms[first].ones().collect();
    // Split over the first vertex's candidates; the merge below is ordered,
    // so the result does not depend on scheduling.
    let parts: Vec<BTreeSet<CopySet>> = candidates
        .par_iter()
        .map(|&x| {
            let mut local = Search::new(pattern, host, false);
            let mut doms = doms.clone();
            for d in doms.iter_mut() {
                d.set(x, false);
            }
            doms[first].clear();
            doms[first].insert(x);
            let mut out = BTreeSet::new();
            let _ = local.run(0, &doms, &[], &mut |a| {
                out.insert(to_embedding(host, a).copy_set());
                ControlFlow::Continue(())
            });
            out
        })
        .collect();
    let mut all = BTreeSet::new();
    for part in parts {
        all.extend(part);
    }
    Ok(all.into_iter().collect())
}

pub fn enumerate_copies(pattern: &Poset, host: &Poset) -> Result<Vec<CopySet>> {
    enumerate_copies_in(
        &Pattern::new(pattern),
        &HostPoset::from_poset(host),
        COPY_HOST_CAP,
    )
}

/// A copy of `pattern` all of whose vertices have the given color.
pub fn find_monochromatic_copy(
    pattern: &Poset,
    coloring: &ColoredLattice,
    color: Color,
) -> Result<Option<CopySet>> {
    let host = HostPoset::colored(coloring, color)?;
    Ok(search_any(&Pattern::new(pattern), &host).map(|e| e.copy_set()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn subset(a: u32, b: u32) -> bool {
        a & b == a
    }

    #[test]
    fn chain_in_q2() {
        let e = find_embedding(&Poset::chain(2), &Poset::boolean_cube(2)).unwrap();
        assert!(e.is_valid(&Poset::chain(2), subset));
        assert_eq!(e.map, vec![0, 1]);
    }

    #[test]
    fn two_two_chains_not_in_q2() {
        let p = Poset::chain_composition(&[2, 2]);
        assert!(find_embedding(&p, &Poset::boolean_cube(2)).is_none());
    }

    #[test]
    fn v_in_q2_is_unique() {
        let v = Poset::v_shape();
        let e = find_embedding(&v, &Poset::boolean_cube(2)).unwrap();
        assert_eq!(e.copy_set().vertices, vec![0b00, 0b01, 0b10]);
        let copies = enumerate_copies(&v, &Poset::boolean_cube(2)).unwrap();
        assert_eq!(copies.len(), 1);
    }

    #[test]
    fn copy_counts() {
        let q2 = Poset::boolean_cube(2);
        let q3 = Poset::boolean_cube(3);
        assert_eq!(enumerate_copies(&Poset::chain(2), &q2).unwrap().len(), 5);
        assert_eq!(enumerate_copies(&Poset::antichain(2), &q3).unwrap().len(), 9);
        assert_eq!(enumerate_copies(&Poset::chain(1), &q3).unwrap().len(), 8);
    }

    #[test]
    fn copy_cap() {
        let err = enumerate_copies(&Poset::chain(1), &Poset::boolean_cube(7)).unwrap_err();
        assert!(matches!(err, crate::Error::Budget(_)));
    }

    #[test]
    fn canonical_cells() {
        assert!(is_canonical(0b001, &[0b111]));
        assert!(!is_canonical(0b010, &[0b111]));
        let cells = refine_cells(&[0b1111], 0b0001);
        assert_eq!(cells, vec![0b0001, 0b1110]);
        assert!(is_canonical(0b0011, &cells));
        assert!(!is_canonical(0b0101, &cells));
    }

    #[test]
    fn symmetric_search_agrees() {
        for n in 0..=4 {
            let host = HostPoset::boolean_lattice(n);
            for p in [
                Poset::chain_composition(&[2, 2]),
                Poset::v_shape(),
                Poset::n_shape(),
                Poset::boolean_cube(2),
                Poset::subdivided_diamond(1, 2),
            ] {
                let pat = Pattern::new(&p);
                assert_eq!(
                    search_any(&pat, &host).is_some(),
                    find_embedding_in(&pat, &host).is_some(),
                    "{p:?} in Q_{n}"
                );
                if let Some(e) = search_any(&pat, &host) {
                    assert!(e.is_valid(&p, subset));
                }
            }
        }
    }
}
