//! Finite posets in strict form, the named constructions, and structural
//! parameters (height, width, 2-dimension, triviality).
//!
//! Elements are positional: a poset of size `m` lives on `0..m`, and two
//! posets built in different ways are only ever identified through an explicit
//! isomorphism check.

use std::fmt;

use serde::Serialize;

use crate::embed::{self, HostPoset, Pattern};
use crate::error::{param, Error, Result};

/// A finite strict partial order on `0..size`.
///
/// The relation is stored transitively closed; `less(a, b)` is `a < b`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poset {
    size: usize,
    less: Vec<bool>,
}

/// Height, width and triviality of a poset.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PosetParameters {
    pub height: usize,
    pub width: usize,
    pub trivial: bool,
}

/// Default host-dimension cap for [`Poset::dim2`].
pub const DIM2_CAP: u32 = 7;

impl Poset {
    /// Builds a poset from generating pairs `(a, b)` meaning `a < b`.
    ///
    /// The transitive closure is taken; a cycle (including `a < a`) is
    /// rejected.
    pub fn from_relations(
        size: usize,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let mut less = vec![false; size * size];
        for (a, b) in pairs {
            if a >= size || b >= size {
                return Err(param(format!("pair ({a}, {b}) out of range for size {size}")));
            }
            less[a * size + b] = true;
        }
        for k in 0..size {
            for i in 0..size {
                if !less[i * size + k] {
                    continue;
                }
                for j in 0..size {
                    if less[k * size + j] {
                        less[i * size + j] = true;
                    }
                }
            }
        }
        if (0..size).any(|a| less[a * size + a]) {
            return Err(Error::Construction("relation contains a cycle".into()));
        }
        Ok(Poset { size, less })
    }

    /// Builds a poset from a predicate that is already a strict partial order.
    fn from_fn(size: usize, f: impl Fn(usize, usize) -> bool) -> Self {
        let mut less = vec![false; size * size];
        for a in 0..size {
            for b in 0..size {
                less[a * size + b] = a != b && f(a, b);
            }
        }
        let p = Poset { size, less };
        debug_assert!(p.is_valid());
        p
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    /// `a < b`.
    #[inline]
    pub fn less(&self, a: usize, b: usize) -> bool {
        self.less[a * self.size + b]
    }

    /// `a <= b`.
    #[inline]
    pub fn leq(&self, a: usize, b: usize) -> bool {
        a == b || self.less(a, b)
    }

    #[inline]
    pub fn comparable(&self, a: usize, b: usize) -> bool {
        a == b || self.less(a, b) || self.less(b, a)
    }

    /// Number of strictly comparable pairs `a < b`.
    pub fn strict_pairs(&self) -> usize {
        self.less.iter().filter(|&&x| x).count()
    }

    /// Checks irreflexivity, antisymmetry and transitivity.
    pub fn is_valid(&self) -> bool {
        let m = self.size;
        for a in 0..m {
            if self.less(a, a) {
                return false;
            }
            for b in 0..m {
                if self.less(a, b) && self.less(b, a) {
                    return false;
                }
                if !self.less(a, b) {
                    continue;
                }
                for c in 0..m {
                    if self.less(b, c) && !self.less(a, c) {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn chain(t: usize) -> Self {
        Self::from_fn(t, |a, b| a < b)
    }

    pub fn antichain(l: usize) -> Self {
        Self::from_fn(l, |_, _| false)
    }

    /// Disjoint union with every cross pair incomparable.
    pub fn parallel(&self, other: &Poset) -> Self {
        let m = self.size;
        Self::from_fn(m + other.size, |a, b| match (a < m, b < m) {
            (true, true) => self.less(a, b),
            (false, false) => other.less(a - m, b - m),
            _ => false,
        })
    }

    /// `C_{t_1} + ... + C_{t_l}`, laid out with the longest chain first.
    pub fn chain_composition(lengths: &[usize]) -> Self {
        let mut sorted = lengths.to_vec();
        sorted.sort_unstable_by(|a, b| b.cmp(a));
        sorted
            .iter()
            .fold(Poset::antichain(0), |acc, &t| acc.parallel(&Poset::chain(t)))
    }

    /// Complete multipartite poset `K_{t_1,...,t_l}`: layer `i` lies entirely
    /// below layer `j` whenever `i < j`.
    pub fn multipartite(layers: &[usize]) -> Self {
        let layer_of: Vec<usize> = layers
            .iter()
            .enumerate()
            .flat_map(|(i, &t)| std::iter::repeat_n(i, t))
            .collect();
        Self::from_fn(layer_of.len(), |a, b| layer_of[a] < layer_of[b])
    }

    /// `SD_{s,t}`: chains of `s` and `t` vertices between a common minimum
    /// (element 0) and a common maximum (the last element).
    pub fn subdivided_diamond(s: usize, t: usize) -> Self {
        let top = s + t + 1;
        // 1..=s is the first chain, s+1..=s+t the second.
        Self::from_fn(top + 1, |a, b| {
            if a == 0 {
                return true;
            }
            if b == top {
                return a != top;
            }
            if a == top || b == 0 {
                return false;
            }
            let same_side = (a <= s) == (b <= s);
            same_side && a < b
        })
    }

    /// The Boolean lattice `Q_n`; element `i` is the subset with code `i`.
    pub fn boolean_cube(n: u32) -> Self {
        Self::from_fn(1usize << n, |a, b| a & b == a)
    }

    /// `V`: element 0 below the incomparable elements 1 and 2.
    pub fn v_shape() -> Self {
        Self::multipartite(&[1, 2])
    }

    /// `Λ`: the incomparable elements 0 and 1 below element 2.
    pub fn lambda_shape() -> Self {
        Self::multipartite(&[2, 1])
    }

    /// `N` on `A, B, C, D` = `0, 1, 2, 3` with `A < C`, `B < C`, `B < D`.
    pub fn n_shape() -> Self {
        Self::from_relations(4, [(0, 2), (1, 2), (1, 3)]).expect("acyclic")
    }

    /// `J` on `A, B, C, D` = `0, 1, 2, 3` with `B < C < D` and `B < A`.
    pub fn j_shape() -> Self {
        Self::from_relations(4, [(1, 2), (2, 3), (1, 0)]).expect("acyclic")
    }

    /// Reverses the order.
    pub fn dual(&self) -> Self {
        Self::from_fn(self.size, |a, b| self.less(b, a))
    }

    pub fn minimum(&self) -> Option<usize> {
        (0..self.size).find(|&x| (0..self.size).all(|y| self.leq(x, y)))
    }

    pub fn maximum(&self) -> Option<usize> {
        (0..self.size).find(|&x| (0..self.size).all(|y| self.leq(y, x)))
    }

    /// Identifies the minimum of `self` with the maximum of `lower`.
    ///
    /// The result keeps `self`'s elements at `0..m1` (the glued vertex is the
    /// old minimum) and appends the elements of `lower` other than its maximum.
    /// Everything from `lower` ends up below everything from `self`.
    pub fn glue(&self, lower: &Poset) -> Result<Self> {
        let min = self.minimum().ok_or_else(|| {
            Error::Construction("glue: left operand has no minimum".into())
        })?;
        let max = lower.maximum().ok_or_else(|| {
            Error::Construction("glue: right operand has no maximum".into())
        })?;
        let m1 = self.size;
        let rest: Vec<usize> = (0..lower.size).filter(|&x| x != max).collect();
        // Position in the glued poset of each element of `lower`.
        let mut pos = vec![0; lower.size];
        for (i, &x) in rest.iter().enumerate() {
            pos[x] = m1 + i;
        }
        pos[max] = min;
        let mut pairs = Vec::new();
        for a in 0..m1 {
            for b in 0..m1 {
                if self.less(a, b) {
                    pairs.push((a, b));
                }
            }
        }
        for a in 0..lower.size {
            for b in 0..lower.size {
                if lower.less(a, b) {
                    pairs.push((pos[a], pos[b]));
                }
            }
        }
        Self::from_relations(m1 + rest.len(), pairs)
    }

    /// Elements sorted by the size of their down-set, which is a linear
    /// extension.
    pub fn linear_extension(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.size).collect();
        order.sort_by_key(|&x| ((0..self.size).filter(|&y| self.less(y, x)).count(), x));
        order
    }

    /// Longest chain ending at each element, counted in vertices.
    pub fn depths(&self) -> Vec<usize> {
        let mut depth = vec![1; self.size];
        for x in self.linear_extension() {
            for y in 0..self.size {
                if self.less(y, x) {
                    depth[x] = depth[x].max(depth[y] + 1);
                }
            }
        }
        depth
    }

    /// Longest chain starting at each element.
    pub fn codepths(&self) -> Vec<usize> {
        self.dual().depths()
    }

    pub fn height(&self) -> usize {
        self.depths().into_iter().max().unwrap_or(0)
    }

    /// Size of the largest antichain.
    ///
    /// Branch-and-bound maximum clique on the incomparability graph for up to
    /// 64 elements; larger posets fall back to [`Poset::width_by_matching`].
    pub fn width(&self) -> usize {
        if self.size > 64 {
            return self.width_by_matching();
        }
        let adj: Vec<u64> = (0..self.size)
            .map(|a| {
                (0..self.size)
                    .filter(|&b| !self.comparable(a, b))
                    .fold(0u64, |acc, b| acc | (1 << b))
            })
            .collect();
        max_clique(&adj)
    }

    /// Width via Dilworth: `m` minus a maximum matching of the bipartite
    /// graph with an edge `a -> b` for every `a < b`.
    pub fn width_by_matching(&self) -> usize {
        let m = self.size;
        let mut match_right: Vec<Option<usize>> = vec![None; m];
        let mut matched = 0;
        for a in 0..m {
            let mut seen = vec![false; m];
            if self.augment(a, &mut seen, &mut match_right) {
                matched += 1;
            }
        }
        m - matched
    }

    fn augment(&self, a: usize, seen: &mut [bool], match_right: &mut [Option<usize>]) -> bool {
        for b in 0..self.size {
            if !self.less(a, b) || seen[b] {
                continue;
            }
            seen[b] = true;
            let free = match match_right[b] {
                None => true,
                Some(a2) => self.augment(a2, seen, match_right),
            };
            if free {
                match_right[b] = Some(a);
                return true;
            }
        }
        false
    }

    /// True iff the poset contains neither `V` nor `Λ` as an induced subposet.
    ///
    /// An induced `V` is an element with two incomparable elements above it,
    /// and dually for `Λ`.
    pub fn is_trivial(&self) -> bool {
        let m = self.size;
        for x in 0..m {
            let up: Vec<usize> = (0..m).filter(|&y| self.less(x, y)).collect();
            let down: Vec<usize> = (0..m).filter(|&y| self.less(y, x)).collect();
            let has_incomparable = |set: &[usize]| {
                set.iter()
                    .enumerate()
                    .any(|(i, &a)| set[i + 1..].iter().any(|&b| !self.comparable(a, b)))
            };
            if has_incomparable(&up) || has_incomparable(&down) {
                return false;
            }
        }
        true
    }

    /// Connected components of the comparability graph, as element lists in
    /// ascending order.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let m = self.size;
        let mut comp = vec![usize::MAX; m];
        let mut out = Vec::new();
        for start in 0..m {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut stack = vec![start];
            let mut members = Vec::new();
            comp[start] = id;
            while let Some(x) = stack.pop() {
                members.push(x);
                for y in 0..m {
                    if comp[y] == usize::MAX && x != y && self.comparable(x, y) {
                        comp[y] = id;
                        stack.push(y);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    /// If every comparability component is a chain, returns the chain
    /// lengths in non-increasing order.
    pub fn chain_lengths(&self) -> Option<Vec<usize>> {
        let mut lengths = Vec::new();
        for comp in self.components() {
            let all_comparable = comp
                .iter()
                .all(|&a| comp.iter().all(|&b| self.comparable(a, b)));
            if !all_comparable {
                return None;
            }
            lengths.push(comp.len());
        }
        lengths.sort_unstable_by(|a, b| b.cmp(a));
        Some(lengths)
    }

    pub fn parameters(&self) -> PosetParameters {
        PosetParameters {
            height: self.height(),
            width: self.width(),
            trivial: self.is_trivial(),
        }
    }

    /// Least `N` such that `Q_N` contains an induced copy of `self`, searching
    /// `N = ceil(log2 m), ...` up to `cap`.
    pub fn dim2(&self, cap: u32) -> Result<u32> {
        let pattern = Pattern::new(self);
        let start = ceil_log2(self.size);
        if start > cap {
            return Err(budget_dim(cap, None));
        }
        let mut last = None;
        for n in start..=cap {
            last = Some(n);
            // Q_N has height N + 1.
            if self.height() > n as usize + 1 {
                continue;
            }
            let host = HostPoset::boolean_lattice(n);
            if embed::find_embedding_in(&pattern, &host).is_some() {
                return Ok(n);
            }
        }
        Err(budget_dim(cap, last))
    }

    /// True iff some bijection preserves `<` in both directions.
    pub fn is_isomorphic(&self, other: &Poset) -> bool {
        if self.size != other.size || self.strict_pairs() != other.strict_pairs() {
            return false;
        }
        let mut a = self.depths();
        let mut b = other.depths();
        a.sort_unstable();
        b.sort_unstable();
        if a != b {
            return false;
        }
        let host = HostPoset::from_poset(other);
        embed::find_embedding_in(&Pattern::new(self), &host).is_some()
    }
}

fn budget_dim(cap: u32, last: Option<u32>) -> Error {
    match last {
        Some(n) => crate::error::budget(format!("dim2: no embedding up to Q_{n} (cap {cap})")),
        None => crate::error::budget(format!("dim2: poset needs more than Q_{cap}")),
    }
}

pub(crate) fn ceil_log2(m: usize) -> u32 {
    if m <= 1 {
        0
    } else {
        usize::BITS - (m - 1).leading_zeros()
    }
}

impl fmt::Debug for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs: Vec<(usize, usize)> = (0..self.size)
            .flat_map(|a| (0..self.size).map(move |b| (a, b)))
            .filter(|&(a, b)| self.less(a, b))
            .collect();
        f.debug_struct("Poset")
            .field("size", &self.size)
            .field("less", &pairs)
            .finish()
    }
}

/// Maximum clique with greedy-coloring bounds over `u64` adjacency masks.
fn max_clique(adj: &[u64]) -> usize {
    let n = adj.len();
    if n == 0 {
        return 0;
    }
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut best = 0;
    expand(adj, all, 0, &mut best);
    best
}

fn expand(adj: &[u64], mut cand: u64, size: usize, best: &mut usize) {
    let (order, colors) = color_sort(adj, cand);
    for i in (0..order.len()).rev() {
        if size + colors[i] <= *best {
            return;
        }
        let v = order[i];
        let next = cand & adj[v];
        if next == 0 {
            *best = (*best).max(size + 1);
        } else {
            expand(adj, next, size + 1, best);
        }
        cand &= !(1u64 << v);
    }
}

fn color_sort(adj: &[u64], cand: u64) -> (Vec<usize>, Vec<usize>) {
    let mut order = Vec::new();
    let mut colors = Vec::new();
    let mut uncolored = cand;
    let mut color = 0;
    while uncolored != 0 {
        color += 1;
        let mut q = uncolored;
        while q != 0 {
            let v = q.trailing_zeros() as usize;
            q &= !(1u64 << v);
            q &= !adj[v];
            uncolored &= !(1u64 << v);
            order.push(v);
            colors.push(color);
        }
    }
    (order, colors)
}
