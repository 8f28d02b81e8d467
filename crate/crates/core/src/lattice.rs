//! Boolean lattices over the ground set `[N]`, blue/red colorings, layered
//! colorings and the lower-bound witness colorings for chain compositions.
//!
//! A vertex is a [`SubsetCode`]: bit `i - 1` is set iff element `i` belongs to
//! the subset.

use std::collections::BTreeSet;
use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::embed;
use crate::error::{param, Error, Result};
use crate::poset::Poset;

/// Largest ground set for which colorings are materialized (2^24 bits).
pub const MAX_DIMENSION: u32 = 24;

/// A subset of `[N]` encoded as a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SubsetCode(pub u32);

impl SubsetCode {
    pub const EMPTY: SubsetCode = SubsetCode(0);

    /// The subset `{1, ..., k}`.
    pub fn prefix(k: u32) -> Self {
        SubsetCode(((1u64 << k) - 1) as u32)
    }

    /// Builds a code from 1-based ground elements.
    pub fn from_elements(elements: impl IntoIterator<Item = u32>) -> Self {
        SubsetCode(elements.into_iter().fold(0, |acc, e| acc | (1 << (e - 1))))
    }

    /// The 1-based elements, ascending.
    pub fn elements(self) -> Vec<u32> {
        (0..32).filter(|i| self.0 >> i & 1 == 1).map(|i| i + 1).collect()
    }

    pub fn contains(self, element: u32) -> bool {
        self.0 >> (element - 1) & 1 == 1
    }

    pub fn len(self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: SubsetCode) -> bool {
        self.0 & other.0 == self.0
    }

    pub fn is_proper_subset(self, other: SubsetCode) -> bool {
        self != other && self.is_subset(other)
    }

    pub fn with(self, element: u32) -> Self {
        SubsetCode(self.0 | 1 << (element - 1))
    }
}

impl fmt::Debug for SubsetCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.elements()).finish()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Blue,
    Red,
}

impl Color {
    pub fn other(self) -> Color {
        match self {
            Color::Blue => Color::Red,
            Color::Red => Color::Blue,
        }
    }
}

/// A blue/red coloring of `Q(N)`, stored one bit per vertex with blue = 1.
#[derive(Clone, PartialEq, Eq)]
pub struct ColoredLattice {
    n_ground: u32,
    blue: FixedBitSet,
}

impl ColoredLattice {
    pub fn from_fn(n_ground: u32, mut f: impl FnMut(SubsetCode) -> Color) -> Result<Self> {
        check_dimension(n_ground)?;
        let size = 1usize << n_ground;
        let mut blue = FixedBitSet::with_capacity(size);
        for z in 0..size {
            if f(SubsetCode(z as u32)) == Color::Blue {
                blue.insert(z);
            }
        }
        Ok(ColoredLattice { n_ground, blue })
    }

    pub fn monochromatic(n_ground: u32, color: Color) -> Result<Self> {
        Self::from_fn(n_ground, |_| color)
    }

    pub fn n_ground(&self) -> u32 {
        self.n_ground
    }

    pub fn vertex_count(&self) -> usize {
        1 << self.n_ground
    }

    pub fn color(&self, z: u32) -> Color {
        if self.blue.contains(z as usize) {
            Color::Blue
        } else {
            Color::Red
        }
    }

    pub fn color_of(&self, z: SubsetCode) -> Color {
        self.color(z.0)
    }

    pub fn set_color(&mut self, z: SubsetCode, color: Color) {
        self.blue.set(z.0 as usize, color == Color::Blue);
    }

    pub fn count(&self, color: Color) -> usize {
        let blue = self.blue.count_ones(..);
        match color {
            Color::Blue => blue,
            Color::Red => self.vertex_count() - blue,
        }
    }

    /// Per-layer colors if every layer is monochromatic.
    pub fn layer_colors(&self) -> Option<Vec<Color>> {
        let n = self.n_ground;
        let colors: Vec<Color> = (0..=n).map(|l| self.color(SubsetCode::prefix(l).0)).collect();
        (0..1u32 << n)
            .all(|z| self.color(z) == colors[z.count_ones() as usize])
            .then_some(colors)
    }

    pub fn is_layered(&self) -> bool {
        self.layer_colors().is_some()
    }

    /// The coloring induced on the subcube `{Z : fixed ⊆ Z ⊆ fixed ∪ free}`,
    /// re-indexed as `Q(|free|)` with the free elements in ascending order.
    pub fn subcube(&self, fixed: SubsetCode, free: SubsetCode) -> Result<Self> {
        if fixed.0 & free.0 != 0 {
            return Err(param("subcube: fixed and free sets overlap"));
        }
        let positions: Vec<u32> = free.elements();
        Self::from_fn(positions.len() as u32, |local| {
            let z = positions
                .iter()
                .enumerate()
                .filter(|(i, _)| local.0 >> i & 1 == 1)
                .fold(fixed, |acc, (_, &e)| acc.with(e));
            self.color_of(z)
        })
    }

    /// Hex string of the packed color bits: one byte per eight consecutive
    /// subset codes, least significant bit first.
    pub fn to_hex(&self) -> String {
        hex::encode(self.to_bytes())
    }

    fn to_bytes(&self) -> Vec<u8> {
        let size = self.vertex_count();
        let mut bytes = vec![0u8; size.div_ceil(8)];
        for z in self.blue.ones() {
            bytes[z / 8] |= 1 << (z % 8);
        }
        bytes
    }

    pub fn from_hex(n_ground: u32, text: &str) -> Result<Self> {
        check_dimension(n_ground)?;
        let bytes = hex::decode(text).map_err(|e| Error::Format(format!("blue_bits: {e}")))?;
        let size = 1usize << n_ground;
        if bytes.len() != size.div_ceil(8) {
            return Err(Error::Format(format!(
                "blue_bits: expected {} bytes for N = {n_ground}, got {}",
                size.div_ceil(8),
                bytes.len()
            )));
        }
        let mut blue = FixedBitSet::with_capacity(size);
        for (i, &b) in bytes.iter().enumerate() {
            for bit in 0..8 {
                if b >> bit & 1 == 0 {
                    continue;
                }
                let z = i * 8 + bit;
                if z >= size {
                    return Err(Error::Format("blue_bits: padding bits must be zero".into()));
                }
                blue.insert(z);
            }
        }
        Ok(ColoredLattice { n_ground, blue })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&ColoringFile {
            n_ground: self.n_ground,
            blue_bits: self.to_hex(),
        })
        .expect("plain struct")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ColoringFile =
            serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        Self::from_hex(file.n_ground, &file.blue_bits)
    }
}

impl fmt::Debug for ColoredLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ColoredLattice")
            .field("n_ground", &self.n_ground)
            .field("blue_bits", &self.to_hex())
            .finish()
    }
}

/// On-disk form of a coloring.
#[derive(Serialize, Deserialize)]
struct ColoringFile {
    n_ground: u32,
    blue_bits: String,
}

impl Serialize for ColoredLattice {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ColoringFile {
            n_ground: self.n_ground,
            blue_bits: self.to_hex(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ColoredLattice {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let file = ColoringFile::deserialize(d)?;
        Self::from_hex(file.n_ground, &file.blue_bits).map_err(serde::de::Error::custom)
    }
}

fn check_dimension(n: u32) -> Result<()> {
    if n > MAX_DIMENSION {
        return Err(crate::error::budget(format!(
            "lattice dimension {n} exceeds the cap of {MAX_DIMENSION}"
        )));
    }
    Ok(())
}

/// Which layers of `Q(N)` are blue.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayerSpec {
    n: u32,
    blue_layers: BTreeSet<u32>,
}

impl LayerSpec {
    pub fn new(n: u32, blue_layers: impl IntoIterator<Item = u32>) -> Result<Self> {
        let blue_layers: BTreeSet<u32> = blue_layers.into_iter().collect();
        if let Some(&l) = blue_layers.iter().find(|&&l| l > n) {
            return Err(param(format!("layer {l} does not exist in Q_{n}")));
        }
        Ok(LayerSpec { n, blue_layers })
    }

    pub fn dimension(&self) -> u32 {
        self.n
    }

    pub fn blue_layers(&self) -> &BTreeSet<u32> {
        &self.blue_layers
    }

    pub fn red_layers(&self) -> Vec<u32> {
        (0..=self.n).filter(|l| !self.blue_layers.contains(l)).collect()
    }
}

/// Colors vertex `Z` blue iff `|Z|` is a blue layer.
pub fn layered_coloring(spec: &LayerSpec) -> Result<ColoredLattice> {
    ColoredLattice::from_fn(spec.n, |z| {
        if spec.blue_layers.contains(&z.len()) {
            Color::Blue
        } else {
            Color::Red
        }
    })
}

/// Layer pattern of the witness against `C_{t1,t2}` versus `Q_n`: the lattice
/// has dimension `n + t1`, the two one-element layers and layers
/// `1..t1-1` are blue, and the remaining `n` layers are red.
pub fn thm4_layers(n: u32, t1: u32) -> Result<LayerSpec> {
    if n < 1 || t1 < 1 {
        return Err(param("chain-pair witness needs n >= 1 and t1 >= 1"));
    }
    let dim = n + t1;
    LayerSpec::new(dim, (0..t1).chain([dim]))
}

pub fn thm4_witness(n: u32, t1: u32) -> Result<ColoredLattice> {
    layered_coloring(&thm4_layers(n, t1)?)
}

/// Layer pattern of the witness against `C_{t,t-1,t'}` versus `Q_n`: the
/// lattice has dimension `n + t + 1`, layers `0, 1, N-2, N-1` (with `N - 1`
/// the top layer) and layers `2..t-1` are blue, the remaining `n` layers red.
pub fn thm5_layers(n: u32, t: u32, t_prime: u32) -> Result<LayerSpec> {
    if n < 1 || t_prime < 1 || t < t_prime + 1 {
        return Err(param(format!(
            "three-chain witness needs n >= 1 and t >= t' + 1 >= 2 (got t = {t}, t' = {t_prime})"
        )));
    }
    let dim = n + t + 1;
    LayerSpec::new(dim, (0..t).chain([dim - 1, dim]))
}

pub fn thm5_witness(n: u32, t: u32, t_prime: u32) -> Result<ColoredLattice> {
    layered_coloring(&thm5_layers(n, t, t_prime)?)
}

/// Outcome of checking a coloring against `P` (blue) and `Q_n` (red).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessReport {
    pub has_blue_copy_of_p: bool,
    pub has_red_copy_of_qn: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub blue_copy: Option<embed::CopySet>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub red_copy: Option<embed::CopySet>,
}

impl WitnessReport {
    /// Neither monochromatic copy exists, so the coloring shows
    /// `R(P, Q_n) > N`.
    pub fn is_witness(&self) -> bool {
        !self.has_blue_copy_of_p && !self.has_red_copy_of_qn
    }
}

pub fn verify_witness(c: &ColoredLattice, p: &Poset, n: u32) -> Result<WitnessReport> {
    let blue_copy = embed::find_monochromatic_copy(p, c, Color::Blue)?;
    let red_copy = if n > c.n_ground() {
        None
    } else {
        embed::find_monochromatic_copy(&Poset::boolean_cube(n), c, Color::Red)?
    };
    Ok(WitnessReport {
        has_blue_copy_of_p: blue_copy.is_some(),
        has_red_copy_of_qn: red_copy.is_some(),
        blue_copy,
        red_copy,
    })
}
