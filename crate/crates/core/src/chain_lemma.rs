//! The labelling algorithm that turns any coloring of `Q(X ∪ Y)` and an
//! ordering `τ` of `Y` into either a red copy of `Q(X)` or a blue Y-chain.
//!
//! Subsets `X' ⊆ X` are processed by cardinality and then by code. Each gets
//! a label `ℓ_{X'}`, the least `ℓ` at or above the largest label of a proper
//! subset for which `X' ∪ Y[ℓ]` is red, together with a blue support chain
//! of length `ℓ_{X'}`. When some subset has no label, the support chain of
//! a maximizing subset is extended into a blue Y-chain. Otherwise
//! `X' ↦ X' ∪ Y[ℓ_{X'}]` is a red copy of `Q(X)`.

use serde::{Deserialize, Serialize};

use crate::error::{param, Result};
use crate::lattice::{Color, ColoredLattice, SubsetCode};

/// A blue chain `Z_0 ⊂ … ⊂ Z_k` whose trace on `Y` grows along `tau`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct YChainCertificate {
    /// The ordering of `Y`, as 1-based ground elements.
    pub tau: Vec<u32>,
    /// Subset codes of `Z_0, …, Z_k`.
    pub vertices: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ChainLemmaResult {
    /// Labels of the subsets of `x_mask`, in ascending subset-code order.
    /// Subset `X'` maps to `X' ∪ Y[labels[X']]`.
    RedCube {
        x_mask: u32,
        tau: Vec<u32>,
        labels: Vec<u32>,
    },
    #[serde(rename = "blue_ychain")]
    BlueChain(YChainCertificate),
}

impl ChainLemmaResult {
    /// The cube image as subset codes, indexed like `labels`.
    pub fn red_cube_image(&self) -> Option<Vec<u32>> {
        match self {
            ChainLemmaResult::RedCube { x_mask, tau, labels } => {
                let prefixes = y_prefixes(tau);
                Some(
                    labels
                        .iter()
                        .enumerate()
                        .map(|(j, &l)| deposit(j as u32, *x_mask) | prefixes[l as usize])
                        .collect(),
                )
            }
            ChainLemmaResult::BlueChain(_) => None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("certificate serializes")
    }
}

/// Spreads the low bits of `index` over the set bits of `mask`.
pub(crate) fn deposit(index: u32, mask: u32) -> u32 {
    let mut out = 0;
    let mut m = mask;
    let mut bit = 0;
    while m != 0 {
        let low = m & m.wrapping_neg();
        if index >> bit & 1 == 1 {
            out |= low;
        }
        m &= m - 1;
        bit += 1;
    }
    out
}

/// `Y[i]` for `i = 0..=k`.
fn y_prefixes(tau: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(tau.len() + 1);
    let mut acc = 0u32;
    out.push(0);
    for &y in tau {
        acc |= 1 << (y - 1);
        out.push(acc);
    }
    out
}

fn check_partition(n_ground: u32, x_mask: SubsetCode, tau: &[u32]) -> Result<u32> {
    if tau.is_empty() {
        return Err(param("the ordering of Y must be non-empty"));
    }
    let full = SubsetCode::prefix(n_ground).0;
    let mut y_mask = 0u32;
    for &y in tau {
        if y == 0 || y > n_ground {
            return Err(param(format!("element {y} is outside the ground set [{n_ground}]")));
        }
        if y_mask >> (y - 1) & 1 == 1 {
            return Err(param(format!("element {y} repeats in the ordering")));
        }
        y_mask |= 1 << (y - 1);
    }
    if x_mask.0 & !full != 0 {
        return Err(param("x_mask has elements outside the ground set"));
    }
    if x_mask.0 & y_mask != 0 || (x_mask.0 | y_mask) != full {
        return Err(param("x_mask and the ordering must partition the ground set"));
    }
    Ok(y_mask)
}

/// Runs the labelling algorithm.
///
/// The returned certificate always passes [`verify_certificate`].
pub fn run_chain_lemma(
    c: &ColoredLattice,
    x_mask: SubsetCode,
    tau: &[u32],
) -> Result<ChainLemmaResult> {
    check_partition(c.n_ground(), x_mask, tau)?;
    let k = tau.len();
    let prefixes = y_prefixes(tau);
    let n = x_mask.len();
    let size = 1usize << n;
    let red = |z: u32| c.color(z) == Color::Red;

    let mut order: Vec<u32> = (0..size as u32).collect();
    order.sort_by_key(|&j| (j.count_ones(), j));

    let mut labels = vec![0u32; size];
    let mut support: Vec<Vec<u32>> = vec![Vec::new(); size];

    for &j in &order {
        let set = deposit(j, x_mask.0);
        // Largest label among proper subsets; ascending scan keeps the
        // least maximizer.
        let (floor, w) = if j == 0 {
            (0, None)
        } else {
            let mut best = (labels[0], 0u32);
            let mut sub = 0u32;
            loop {
                sub = sub.wrapping_sub(j) & j;
                if sub == j {
                    break;
                }
                if labels[sub as usize] > best.0 {
                    best = (labels[sub as usize], sub);
                }
            }
            (best.0, Some(best.1))
        };
        let found = (floor as usize..=k).find(|&l| red(set | prefixes[l]));
        let mut chain = match w {
            Some(w) => support[w as usize].clone(),
            None => Vec::new(),
        };
        match found {
            Some(l) => {
                chain.extend((floor as usize..l).map(|i| set | prefixes[i]));
                debug_assert_eq!(chain.len(), l);
                labels[j as usize] = l as u32;
                support[j as usize] = chain;
            }
            None => {
                chain.extend((floor as usize..=k).map(|i| set | prefixes[i]));
                return Ok(ChainLemmaResult::BlueChain(YChainCertificate {
                    tau: tau.to_vec(),
                    vertices: chain,
                }));
            }
        }
    }
    Ok(ChainLemmaResult::RedCube {
        x_mask: x_mask.0,
        tau: tau.to_vec(),
        labels,
    })
}

/// Runs the algorithm on a coloring of `Q_{n+k}` with `X = [n]` and
/// `τ = (n+1, …, n+k)`.
pub fn chain_or_cube(c: &ColoredLattice, n: u32, k: u32) -> Result<ChainLemmaResult> {
    if c.n_ground() != n + k {
        return Err(param(format!(
            "coloring has dimension {}, expected n + k = {}",
            c.n_ground(),
            n + k
        )));
    }
    let tau: Vec<u32> = (n + 1..=n + k).collect();
    run_chain_lemma(c, SubsetCode::prefix(n), &tau)
}

/// Checks a certificate against the coloring, using only the definitions.
pub fn verify_certificate(
    res: &ChainLemmaResult,
    c: &ColoredLattice,
    x_mask: SubsetCode,
    tau: &[u32],
) -> bool {
    let Ok(y_mask) = check_partition(c.n_ground(), x_mask, tau) else {
        return false;
    };
    let k = tau.len();
    let prefixes = y_prefixes(tau);
    match res {
        ChainLemmaResult::RedCube { x_mask: xm, tau: t, labels } => {
            if *xm != x_mask.0 || t != tau || labels.len() != 1 << x_mask.len() {
                return false;
            }
            if labels.iter().any(|&l| l as usize > k) {
                return false;
            }
            let Some(image) = res.red_cube_image() else {
                return false;
            };
            if image.iter().any(|&z| c.color(z) != Color::Red) {
                return false;
            }
            let subsets: Vec<u32> = (0..labels.len() as u32).map(|j| deposit(j, x_mask.0)).collect();
            for a in 0..image.len() {
                for b in 0..image.len() {
                    let below = subsets[a] & subsets[b] == subsets[a];
                    let image_below = image[a] & image[b] == image[a];
                    if below != image_below {
                        return false;
                    }
                }
            }
            true
        }
        ChainLemmaResult::BlueChain(cert) => {
            if cert.tau != tau || cert.vertices.len() != k + 1 {
                return false;
            }
            let full = SubsetCode::prefix(c.n_ground()).0;
            let mut prev_x = 0u32;
            for (i, &z) in cert.vertices.iter().enumerate() {
                if z & !full != 0 || c.color(z) != Color::Blue {
                    return false;
                }
                if z & y_mask != prefixes[i] {
                    return false;
                }
                let xs = z & x_mask.0;
                if xs & prev_x != prev_x {
                    return false;
                }
                prev_x = xs;
            }
            true
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lattice(n: u32, f: impl Fn(u32) -> Color) -> ColoredLattice {
        ColoredLattice::from_fn(n, |z| f(z.0)).unwrap()
    }

    #[test]
    fn deposit_spreads_bits() {
        assert_eq!(deposit(0b11, 0b1010), 0b1010);
        assert_eq!(deposit(0b01, 0b1010), 0b0010);
        assert_eq!(deposit(0b10, 0b1010), 0b1000);
    }

    #[test]
    fn all_red_gives_zero_labels() {
        let c = ColoredLattice::monochromatic(4, Color::Red).unwrap();
        let res = run_chain_lemma(&c, SubsetCode(0b0101), &[2, 4]).unwrap();
        match &res {
            ChainLemmaResult::RedCube { labels, .. } => assert!(labels.iter().all(|&l| l == 0)),
            _ => panic!("expected a red cube"),
        }
        assert_eq!(res.red_cube_image().unwrap(), vec![0b0000, 0b0001, 0b0100, 0b0101]);
        assert!(verify_certificate(&res, &c, SubsetCode(0b0101), &[2, 4]));
    }

    #[test]
    fn all_blue_gives_y_chain() {
        let c = ColoredLattice::monochromatic(5, Color::Blue).unwrap();
        let res = chain_or_cube(&c, 2, 3).unwrap();
        assert_eq!(
            res,
            ChainLemmaResult::BlueChain(YChainCertificate {
                tau: vec![3, 4, 5],
                vertices: vec![0, 0b00100, 0b01100, 0b11100],
            })
        );
    }

    #[test]
    fn hand_run_two_elements() {
        // ∅ and {y} blue, {x} and {x,y} red, with x = 1 and y = 2.
        let c = lattice(2, |z| if z & 1 == 0 { Color::Blue } else { Color::Red });
        let res = run_chain_lemma(&c, SubsetCode(0b01), &[2]).unwrap();
        assert_eq!(
            res,
            ChainLemmaResult::BlueChain(YChainCertificate { tau: vec![2], vertices: vec![0, 0b10] })
        );
    }

    #[test]
    fn rejects_bad_partitions() {
        let c = ColoredLattice::monochromatic(3, Color::Red).unwrap();
        assert!(run_chain_lemma(&c, SubsetCode(0b001), &[2]).is_err());
        assert!(run_chain_lemma(&c, SubsetCode(0b011), &[2, 3]).is_err());
        assert!(run_chain_lemma(&c, SubsetCode(0b111), &[]).is_err());
        assert!(chain_or_cube(&c, 1, 1).is_err());
    }

    #[test]
    fn verifier_rejects_tampering() {
        let c = ColoredLattice::monochromatic(2, Color::Blue).unwrap();
        let wrong_trace = ChainLemmaResult::BlueChain(YChainCertificate {
            tau: vec![1, 2],
            vertices: vec![0, 0b10, 0b11],
        });
        assert!(!verify_certificate(&wrong_trace, &c, SubsetCode(0), &[1, 2]));

        let mut c = ColoredLattice::monochromatic(2, Color::Red).unwrap();
        let res = run_chain_lemma(&c, SubsetCode(0b01), &[2]).unwrap();
        assert!(verify_certificate(&res, &c, SubsetCode(0b01), &[2]));
        c.set_color(SubsetCode(0b01), Color::Blue);
        assert!(!verify_certificate(&res, &c, SubsetCode(0b01), &[2]));
    }

    #[test]
    fn json_shape() {
        let c = ColoredLattice::monochromatic(2, Color::Red).unwrap();
        let res = run_chain_lemma(&c, SubsetCode(0b01), &[2]).unwrap();
        assert_eq!(res.to_json(), r#"{"kind":"red_cube","x_mask":1,"tau":[2],"labels":[0,0]}"#);
        let c = ColoredLattice::monochromatic(1, Color::Blue).unwrap();
        let res = run_chain_lemma(&c, SubsetCode(0), &[1]).unwrap();
        assert_eq!(res.to_json(), r#"{"kind":"blue_ychain","tau":[1],"vertices":[0,1]}"#);
        let back: ChainLemmaResult = serde_json::from_str(&res.to_json()).unwrap();
        assert_eq!(back, res);
    }
}
