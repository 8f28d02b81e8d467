//! Closed-form bounds on `R(P, Q_n)`.

use serde::Serialize;

use crate::error::{param, Result};
use crate::poset::{Poset, DIM2_CAP};
use crate::sd::Interval;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Provenance {
    Thm1Trivial,
    Thm1Nontrivial,
    Thm4Chain,
    Thm4TwoChains,
    Thm5,
    Cor7,
    Table1,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub lower: f64,
    pub upper: f64,
    /// Whether `upper` is a strict bound.
    pub upper_strict: bool,
    /// The largest integer the upper bound allows.
    pub best_integer_upper: u64,
    pub exact: Option<u64>,
    /// `n + n/(15 log2 n)`, valid only for sufficiently large `n`; never
    /// folded into `lower`.
    pub asymptotic_lower: Option<f64>,
    pub provenance: Vec<Provenance>,
}

impl BoundReport {
    fn exact(value: u64, tag: Provenance) -> Self {
        BoundReport {
            lower: value as f64,
            upper: value as f64,
            upper_strict: false,
            best_integer_upper: value,
            exact: Some(value),
            asymptotic_lower: None,
            provenance: vec![tag],
        }
    }

    /// Whether an integer value is compatible with the report.
    pub fn admits(&self, value: u64) -> bool {
        self.lower <= value as f64 && value <= self.best_integer_upper
    }
}

/// Encloses `n + h + log2 w + ½ log2 log2 w + 1` for `w ≥ 2`.
pub fn cor7_upper(n: u64, h: u64, w: u64) -> Interval {
    let wi = Interval::point(w as f64);
    let lw = wi.log2();
    let llw = if w == 2 { Interval::point(0.0) } else { lw.log2() };
    Interval::point((n + h + 1) as f64)
        .add(lw)
        .add(Interval::point(0.5).mul(llw))
}

/// Bounds for `R(P, Q_n)`.
///
/// Chain compositions with one, two, or three chains of the shape
/// `t, t−1, t'` get exact values; other chain compositions get the width
/// range; non-trivial posets get `[n + h − 1, h·n + dim2]`.
pub fn ramsey_bounds(p: &Poset, n: u64) -> Result<BoundReport> {
    if n == 0 {
        return Err(param("n must be at least 1"));
    }
    if p.is_empty() {
        return Err(param("the poset must be non-empty"));
    }
    let h = p.height() as u64;
    let w = p.width() as u64;
    if let Some(ts) = p.chain_lengths() {
        let ts: Vec<u64> = ts.into_iter().map(|t| t as u64).collect();
        return Ok(match ts.as_slice() {
            [_] => BoundReport::exact(n + h - 1, Provenance::Thm4Chain),
            [t1, _] => BoundReport::exact(n + t1 + 1, Provenance::Thm4TwoChains),
            [t, t2, t3] if *t >= 2 && *t2 == t - 1 && t3 <= t2 => {
                BoundReport::exact(n + t + 2, Provenance::Thm5)
            }
            _ => {
                let up = cor7_upper(n, h, w);
                BoundReport {
                    lower: (n + h + 1) as f64,
                    upper: up.hi,
                    upper_strict: true,
                    best_integer_upper: up.lo.ceil() as u64 - 1,
                    exact: None,
                    asymptotic_lower: None,
                    provenance: vec![Provenance::Cor7],
                }
            }
        });
    }
    let dim2 = u64::from(p.dim2(DIM2_CAP)?);
    let upper = h * n + dim2;
    let asymptotic_lower = (n >= 2).then(|| n as f64 + n as f64 / (15.0 * (n as f64).log2()));
    Ok(BoundReport {
        lower: (n + h - 1) as f64,
        upper: upper as f64,
        upper_strict: false,
        best_integer_upper: upper,
        exact: None,
        asymptotic_lower,
        provenance: vec![Provenance::Thm1Nontrivial],
    })
}

fn central_binomial(n: u32) -> u128 {
    let k = n / 2;
    (0..k).fold(1u128, |acc, i| acc * u128::from(n - i) / u128::from(i + 1))
}

/// Least `N` with `binom(N, ⌊N/2⌋) ≥ l`.
pub fn sperner_alpha(l: u64) -> Result<u32> {
    if l == 0 {
        return Err(param("the Sperner number needs l >= 1"));
    }
    Ok((0..).find(|&n| central_binomial(n) >= u128::from(l)).expect("binomials grow"))
}

/// `max(parts) + α(ℓ)` for a parallel composition of `ℓ ≥ 2` parts.
pub fn walzer_union_bound(part_bounds: &[u64], l: usize) -> Result<u64> {
    if l < 2 {
        return Err(param("the union bound needs at least two parts"));
    }
    if part_bounds.len() != l {
        return Err(param(format!(
            "{} part bounds given for l = {l}",
            part_bounds.len()
        )));
    }
    let max = *part_bounds.iter().max().expect("l >= 2");
    Ok(max + u64::from(sperner_alpha(l as u64)?))
}

/// Leading constant `c1 + c2` of the glued poset's bound.
pub fn glue_bound(c1: f64, c2: f64) -> Result<f64> {
    if !(c1 > 0.0 && c2 > 0.0) {
        return Err(param("gluing constants must be positive"));
    }
    Ok(c1 + c2)
}

/// A row of the small-poset table whose value is proved by the exact
/// formulas above.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TableRow {
    pub poset: &'static str,
    pub expression: &'static str,
    pub value: u64,
    pub provenance: Vec<Provenance>,
}

pub const TABLE1_ROWS: [(&str, &str); 8] = [
    ("C_1", "C(1)"),
    ("C_2", "C(2)"),
    ("C_3", "C(3)"),
    ("C_{2,1}", "CC(2,1)"),
    ("C_4", "C(4)"),
    ("C_{2,2}", "CC(2,2)"),
    ("C_{3,1}", "CC(3,1)"),
    ("C_{2,1,1}", "CC(2,1,1)"),
];

pub fn table1(n: u64) -> Result<Vec<TableRow>> {
    TABLE1_ROWS
        .iter()
        .map(|&(poset, expression)| {
            let p = crate::expr::parse_poset_expression(expression)?.construct()?;
            let report = ramsey_bounds(&p, n)?;
            let mut provenance = vec![Provenance::Table1];
            provenance.extend(report.provenance);
            Ok(TableRow {
                poset,
                expression,
                value: report.exact.expect("table rows have exact formulas"),
                provenance,
            })
        })
        .collect()
}
