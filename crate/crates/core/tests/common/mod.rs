//! Brute-force oracles that share no search code with the library.

#![allow(dead_code)]

use poset_ramsey::Poset;

/// Every permutation of `0..m`.
pub fn permutations(m: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                go(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; m], &mut out);
    out
}

/// A strict order given as a relation matrix.
pub type Relation = Vec<Vec<bool>>;

pub fn relation_of(p: &Poset) -> Relation {
    (0..p.size()).map(|a| (0..p.size()).map(|b| p.less(a, b)).collect()).collect()
}

pub fn isomorphic_relations(a: &Relation, b: &Relation) -> bool {
    let m = a.len();
    if m != b.len() {
        return false;
    }
    permutations(m)
        .iter()
        .any(|perm| (0..m).all(|x| (0..m).all(|y| a[x][y] == b[perm[x]][perm[y]])))
}

/// All strict partial orders on `0..m` (labelled).
pub fn labelled_posets(m: usize) -> Vec<Relation> {
    let pairs: Vec<(usize, usize)> = (0..m)
        .flat_map(|a| (0..m).map(move |b| (a, b)))
        .filter(|(a, b)| a != b)
        .collect();
    let mut out = Vec::new();
    for mask in 0u32..1 << pairs.len() {
        let mut r = vec![vec![false; m]; m];
        for (i, &(a, b)) in pairs.iter().enumerate() {
            if mask >> i & 1 == 1 {
                r[a][b] = true;
            }
        }
        let antisymmetric = (0..m).all(|a| (0..m).all(|b| !(r[a][b] && r[b][a])));
        let transitive = (0..m).all(|a| {
            (0..m).all(|b| (0..m).all(|c| !(r[a][b] && r[b][c]) || r[a][c]))
        });
        if antisymmetric && transitive {
            out.push(r);
        }
    }
    out
}

pub fn to_poset(r: &Relation) -> Poset {
    let m = r.len();
    let pairs: Vec<(usize, usize)> = (0..m)
        .flat_map(|a| (0..m).map(move |b| (a, b)))
        .filter(|&(a, b)| r[a][b])
        .collect();
    Poset::from_relations(m, pairs).unwrap()
}

/// One representative per isomorphism class with `1..=max_m` elements.
pub fn posets_up_to(max_m: usize) -> Vec<Poset> {
    let mut out = Vec::new();
    for m in 1..=max_m {
        let mut reps: Vec<Relation> = Vec::new();
        for r in labelled_posets(m) {
            if !reps.iter().any(|q| isomorphic_relations(q, &r)) {
                reps.push(r);
            }
        }
        out.extend(reps.iter().map(to_poset));
    }
    out
}

/// All `k`-subsets of `items`, in lexicographic order of positions.
pub fn subsets<T: Copy>(items: &[T], k: usize) -> Vec<Vec<T>> {
    fn go<T: Copy>(items: &[T], k: usize, start: usize, cur: &mut Vec<T>, out: &mut Vec<Vec<T>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            if items.len() - i < k - cur.len() {
                break;
            }
            cur.push(items[i]);
            go(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(items, k, 0, &mut Vec::new(), &mut out);
    out
}

/// Every vertex subset of `host` whose induced order is isomorphic to the
/// pattern, each sorted ascending.
pub fn naive_copies(pattern: &Poset, host: &[u32], host_less: impl Fn(u32, u32) -> bool) -> Vec<Vec<u32>> {
    let pr = relation_of(pattern);
    let m = pattern.size();
    let mut out = Vec::new();
    for mut s in subsets(host, m) {
        s.sort_unstable();
        let induced: Relation = (0..m)
            .map(|a| (0..m).map(|b| a != b && host_less(s[a], s[b])).collect())
            .collect();
        if isomorphic_relations(&pr, &induced) {
            out.push(s);
        }
    }
    out.sort();
    out
}

pub fn subset_less(a: u32, b: u32) -> bool {
    a != b && a & b == a
}

/// Copies of the pattern in `Q_dim`, by subset enumeration.
pub fn naive_lattice_copies(pattern: &Poset, dim: u32) -> Vec<Vec<u32>> {
    let host: Vec<u32> = (0..1u32 << dim).collect();
    naive_copies(pattern, &host, subset_less)
}

/// Whether every coloring of `Q_dim` has a blue copy of `p` or a red copy
/// of `Q_n`, by enumerating all `2^(2^dim)` colorings.
pub fn naive_arrow(p: &Poset, n: u32, dim: u32) -> bool {
    let p_copies = naive_lattice_copies(p, dim);
    let q_copies = if n > dim { Vec::new() } else { naive_lattice_copies(&Poset::boolean_cube(n), dim) };
    let to_mask = |c: &Vec<u32>| c.iter().fold(0u64, |acc, &z| acc | 1 << z);
    let p_masks: Vec<u64> = p_copies.iter().map(to_mask).collect();
    let q_masks: Vec<u64> = q_copies.iter().map(to_mask).collect();
    let vertices = 1u32 << dim;
    let all = if vertices == 64 { u64::MAX } else { (1u64 << vertices) - 1 };
    (0..=all).all(|blue| {
        let red = !blue & all;
        p_masks.iter().any(|&m| m & blue == m) || q_masks.iter().any(|&m| m & red == m)
    })
}

pub fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}
