//! r-proper permutations, their bad-index restrictions and the interval
//! encoding of a restriction by `r` binary vectors.
//!
//! A permutation `π` of `[k]` is r-proper when
//! `|{ℓ ≤ j : π(ℓ) ≥ j − 1}| ≤ r` for every `j ∈ [k]`. Index `i` is bad
//! when `π(i) ≥ i`. Everything here is 1-based, as in one-line notation.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{budget, param, Error, Result};

/// Largest `k` for which [`count_proper`] enumerates all of `S_k`.
pub const COUNT_CAP: u32 = 9;

/// A permutation of `[k]` in one-line notation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Permutation(Vec<u32>);

impl Permutation {
    pub fn new(values: Vec<u32>) -> Result<Self> {
        let k = values.len();
        let mut seen = vec![false; k + 1];
        for &v in &values {
            if v == 0 || v as usize > k || seen[v as usize] {
                return Err(param(format!(
                    "{values:?} is not a permutation of [{k}]"
                )));
            }
            seen[v as usize] = true;
        }
        Ok(Permutation(values))
    }

    pub fn identity(k: u32) -> Self {
        Permutation((1..=k).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `π(l)` for `l ∈ [k]`.
    pub fn at(&self, l: u32) -> u32 {
        self.0[l as usize - 1]
    }

    pub fn values(&self) -> &[u32] {
        &self.0
    }
}

impl TryFrom<Vec<u32>> for Permutation {
    type Error = Error;

    fn try_from(v: Vec<u32>) -> Result<Self> {
        Permutation::new(v)
    }
}

impl From<Permutation> for Vec<u32> {
    fn from(p: Permutation) -> Self {
        p.0
    }
}

impl FromStr for Permutation {
    type Err = Error;

    /// Parses comma-separated one-line notation such as `6,1,3,4,5,2`.
    fn from_str(s: &str) -> Result<Self> {
        let values = s
            .split(',')
            .map(|part| {
                part.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Format(format!("'{}' is not a positive integer", part.trim())))
            })
            .collect::<Result<Vec<_>>>()?;
        Permutation::new(values)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// `max_j |{ℓ ≤ j : π(ℓ) ≥ j − 1}|`, the least `r` for which `π` is r-proper.
pub fn properness(p: &Permutation) -> u32 {
    let k = p.len() as u32;
    (1..=k)
        .map(|j| (1..=j).filter(|&l| p.at(l) + 1 >= j).count() as u32)
        .max()
        .unwrap_or(0)
}

pub fn is_r_proper(p: &Permutation, r: u32) -> bool {
    properness(p) <= r
}

/// Calls `f` on every permutation of `values` that starts with `prefix`,
/// in lexicographic order.
fn for_each_permutation(k: u32, first: u32, mut f: impl FnMut(&Permutation)) {
    let mut rest: Vec<u32> = (1..=k).filter(|&v| v != first).collect();
    let mut current = Vec::with_capacity(k as usize);
    current.push(first);
    loop {
        current.truncate(1);
        current.extend_from_slice(&rest);
        f(&Permutation(current.clone()));
        if !next_permutation(&mut rest) {
            break;
        }
    }
}

fn next_permutation(v: &mut [u32]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// All permutations of `[k]` in lexicographic order.
pub fn all_permutations(k: u32) -> Vec<Permutation> {
    let mut out = Vec::new();
    if k == 0 {
        out.push(Permutation(Vec::new()));
        return out;
    }
    for first in 1..=k {
        for_each_permutation(k, first, |p| out.push(p.clone()));
    }
    out
}

/// `N(k, r)`, by enumeration of all `k!` permutations.
pub fn count_proper(k: u32, r: u32) -> Result<u64> {
    if k > COUNT_CAP {
        return Err(budget(format!(
            "counting r-proper permutations enumerates k!; k = {k} exceeds {COUNT_CAP}"
        )));
    }
    if k == 0 {
        return Ok(1);
    }
    Ok((1..=k)
        .into_par_iter()
        .map(|first| {
            let mut count = 0u64;
            for_each_permutation(k, first, |p| {
                if is_r_proper(p, r) {
                    count += 1;
                }
            });
            count
        })
        .sum())
}

/// The restriction of a permutation to its bad indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ProperRestriction {
    pub k: u32,
    /// Bad index `i` to `ρ(i)`.
    pub map: BTreeMap<u32, u32>,
}

impl ProperRestriction {
    pub fn bad_indices(&self) -> Vec<u32> {
        self.map.keys().copied().collect()
    }

    /// `max_j |{ℓ ∈ B : ℓ ≤ j, ρ(ℓ) ≥ j − 1}|`.
    pub fn load(&self) -> u32 {
        (1..=self.k)
            .map(|j| self.map.iter().filter(|&(&l, &v)| l <= j && v + 1 >= j).count() as u32)
            .max()
            .unwrap_or(0)
    }
}

pub fn proper_restriction(p: &Permutation) -> ProperRestriction {
    let k = p.len() as u32;
    ProperRestriction {
        k,
        map: (1..=k).filter(|&i| p.at(i) >= i).map(|i| (i, p.at(i))).collect(),
    }
}

/// `r` binary vectors of length `k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RestrictionEncoding {
    pub vectors: Vec<Vec<bool>>,
}

impl RestrictionEncoding {
    pub fn to_strings(&self) -> Vec<String> {
        self.vectors
            .iter()
            .map(|v| v.iter().map(|&b| if b { '1' } else { '0' }).collect())
            .collect()
    }

    /// Builds an encoding from strings of `0` and `1` of equal length.
    pub fn from_strings<S: AsRef<str>>(rows: &[S]) -> Result<Self> {
        let mut vectors = Vec::with_capacity(rows.len());
        for row in rows {
            let row = row.as_ref().trim();
            let v = row
                .chars()
                .map(|ch| match ch {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    _ => Err(Error::Encoding(format!("'{ch}' is not a binary digit"))),
                })
                .collect::<Result<Vec<bool>>>()?;
            vectors.push(v);
        }
        if vectors.windows(2).any(|w| w[0].len() != w[1].len()) {
            return Err(Error::Encoding("vectors differ in length".into()));
        }
        Ok(RestrictionEncoding { vectors })
    }
}

/// Encodes `ρ` by properly coloring the intervals `I_i = [i, ρ(i)+1]` with at
/// most `r` colors and writing ones on positions `i..=ρ(i)` of the vector of
/// the color of `I_i`.
///
/// Intervals are colored greedily by left endpoint with the least free color,
/// which is optimal on interval graphs.
pub fn encode_restriction(rho: &ProperRestriction, r: u32, k: u32) -> Result<RestrictionEncoding> {
    if rho.k != k {
        return Err(Error::Encoding(format!(
            "restriction is over [{}], encoding requested for [{k}]",
            rho.k
        )));
    }
    let mut vectors = vec![vec![false; k as usize]; r as usize];
    // Right endpoint of the last interval given each color.
    let mut last_end: Vec<u32> = Vec::new();
    for (&i, &v) in &rho.map {
        if i == 0 || v > k || v < i {
            return Err(Error::Encoding(format!("{i} -> {v} is not a bad-index assignment in [{k}]")));
        }
        let end = v + 1;
        let color = match last_end.iter().position(|&e| e < i) {
            Some(c) => c,
            None => {
                last_end.push(0);
                last_end.len() - 1
            }
        };
        if color >= r as usize {
            return Err(Error::Encoding(format!(
                "the interval graph of the restriction needs more than {r} colors"
            )));
        }
        last_end[color] = end;
        for pos in i..=v {
            vectors[color][pos as usize - 1] = true;
        }
    }
    Ok(RestrictionEncoding { vectors })
}

/// Reads every maximal run `i..=e` of ones as `ρ(i) = e`.
pub fn decode_restriction(enc: &RestrictionEncoding) -> Result<ProperRestriction> {
    let k = enc.vectors.first().map_or(0, |v| v.len()) as u32;
    let mut map = BTreeMap::new();
    for v in &enc.vectors {
        if v.len() as u32 != k {
            return Err(Error::Encoding("vectors differ in length".into()));
        }
        let mut pos = 0usize;
        while pos < v.len() {
            if !v[pos] {
                pos += 1;
                continue;
            }
            let start = pos;
            while pos < v.len() && v[pos] {
                pos += 1;
            }
            let (i, e) = (start as u32 + 1, pos as u32);
            if map.insert(i, e).is_some() {
                return Err(Error::Encoding(format!("two runs start at index {i}")));
            }
        }
    }
    Ok(ProperRestriction { k, map })
}

/// Whether `tau`, an ordering of `[k]`, is t-close to `(1, …, k)`: for every
/// `i ∈ [k − t]`, `[i]` lies in the first `i + t` entries of `tau` or the
/// first `i` entries of `tau` lie in `[i + t]`.
pub fn is_t_close(tau: &[u32], t: u32) -> bool {
    t_closeness_witness(tau, t).is_none()
}

/// The least `i` violating t-closeness, if any.
pub fn t_closeness_witness(tau: &[u32], t: u32) -> Option<u32> {
    let k = tau.len() as u32;
    if k <= t {
        return None;
    }
    let mut position = vec![0u32; k as usize + 1];
    for (idx, &y) in tau.iter().enumerate() {
        position[y as usize] = idx as u32 + 1;
    }
    // Running maxima: the largest position among 1..=i and the largest value
    // among the first i entries.
    let mut max_pos = 0;
    let mut max_val = 0;
    for i in 1..=k - t {
        max_pos = max_pos.max(position[i as usize]);
        max_val = max_val.max(tau[i as usize - 1]);
        if max_pos > i + t && max_val > i + t {
            return Some(i);
        }
    }
    None
}
