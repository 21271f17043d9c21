//! Multivanishing sequences along a ladder and compatible edge strata.

use crate::divisor::{EdgePairStats, Ladder};
use crate::error::{Error, Result};

pub const DEFAULT_BUDGET: usize = 1_000_000;

/// A nondecreasing sequence `a_0 ≤ … ≤ a_r` of critical ladder degrees.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultivanishingSequence {
    pub values: Vec<i64>,
    /// `r_j` for `j = 0..=b`: how often `deg D_j` occurs (0 off `C`).
    pub mult: Vec<usize>,
}

impl MultivanishingSequence {
    /// Reads a sequence against a ladder, checking every invariant.
    pub fn on_ladder(ladder: &Ladder, values: Vec<i64>) -> Result<Self> {
        if values.is_empty() || values.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::InvalidArgument(format!("not a nondecreasing sequence: {values:?}")));
        }
        let mut mult = vec![0usize; ladder.b() + 1];
        for &a in &values {
            let j = ladder
                .critical_index_of(a)
                .ok_or_else(|| Error::InvalidArgument(format!("{a} is not a critical degree")))?;
            mult[j] += 1;
        }
        for (j, &m) in mult.iter().enumerate() {
            if m as i64 > ladder.gap(j) {
                return Err(Error::InvalidArgument(format!("degree {} repeated {m} times", ladder.degree(j))));
            }
        }
        Ok(MultivanishingSequence { values, mult })
    }

    pub fn r(&self) -> usize {
        self.values.len() - 1
    }

    pub fn is_constant(&self) -> bool {
        self.values.windows(2).all(|w| w[0] == w[1])
    }
}

fn choose2(k: usize) -> i64 {
    (k * k.saturating_sub(1) / 2) as i64
}

/// `Σ_ℓ (a_ℓ − ℓ) + Σ_j C(r_j, 2)`.
pub fn schubert_codim(a: &MultivanishingSequence) -> i64 {
    let shifted: i64 = a.values.iter().enumerate().map(|(l, &v)| v - l as i64).sum();
    shifted + a.mult.iter().map(|&m| choose2(m)).sum::<i64>()
}

/// All multivanishing sequences of length `r + 1` on `ladder` with values at
/// most `cap`, in lexicographic order.
pub fn enumerate_sequences(ladder: &Ladder, r: usize, cap: i64, budget: usize) -> Result<Vec<MultivanishingSequence>> {
    let slots: Vec<(usize, i64, usize)> = ladder
        .critical()
        .into_iter()
        .filter(|&j| ladder.degree(j) <= cap)
        .map(|j| (j, ladder.degree(j), ladder.gap(j) as usize))
        .collect();
    let mut out = Vec::new();
    let mut mult = vec![0usize; ladder.b() + 1];
    let mut values = Vec::with_capacity(r + 1);
    fill(&slots, 0, r + 1, &mut values, &mut mult, &mut out, budget)?;
    Ok(out)
}

fn fill(
    slots: &[(usize, i64, usize)],
    from: usize,
    len: usize,
    values: &mut Vec<i64>,
    mult: &mut Vec<usize>,
    out: &mut Vec<MultivanishingSequence>,
    budget: usize,
) -> Result<()> {
    if values.len() == len {
        if out.len() == budget {
            return Err(Error::EnumerationBudgetExceeded { budget });
        }
        out.push(MultivanishingSequence { values: values.clone(), mult: mult.clone() });
        return Ok(());
    }
    for (k, &(j, deg, cap)) in slots.iter().enumerate().skip(from) {
        if mult[j] == cap {
            continue;
        }
        mult[j] += 1;
        values.push(deg);
        fill(slots, k, len, values, mult, out, budget)?;
        values.pop();
        mult[j] -= 1;
    }
    Ok(())
}

/// A pair of sequences on the two sides of a collapsed edge.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeStratum {
    pub a1: MultivanishingSequence,
    pub a2: MultivanishingSequence,
    pub refined: bool,
}

impl EdgeStratum {
    pub fn swapped(&self) -> Self {
        EdgeStratum { a1: self.a2.clone(), a2: self.a1.clone(), refined: self.refined }
    }
}

/// One-directional check: whenever `a_ℓ = deg D_j` with `j` critical,
/// `a'_{r−ℓ} ≥ deg D'_{b−j}`. Returns `None` if violated, else whether all
/// cases were equalities.
fn one_side(near: &Ladder, far: &Ladder, a: &[i64], a_far: &[i64]) -> Option<bool> {
    let b = near.b();
    let r = a.len() - 1;
    let mut equal = true;
    for (l, &v) in a.iter().enumerate() {
        let Some(j) = near.critical_index_of(v) else { continue };
        let bound = far.degree(b - j);
        match a_far[r - l].cmp(&bound) {
            std::cmp::Ordering::Less => return None,
            std::cmp::Ordering::Greater => equal = false,
            std::cmp::Ordering::Equal => {}
        }
    }
    Some(equal)
}

/// `None` if the pair is incompatible, otherwise `Some(refined)`.
pub fn compatibility(stats: &EdgePairStats, a1: &MultivanishingSequence, a2: &MultivanishingSequence) -> Option<bool> {
    if a1.values.len() != a2.values.len() {
        return None;
    }
    let forward = one_side(&stats.near, &stats.far, &a1.values, &a2.values)?;
    let backward = one_side(&stats.far, &stats.near, &a2.values, &a1.values)?;
    Some(forward && backward)
}

/// All compatible pairs with `a¹` capped at `cap1` and `a²` at `cap2`, in
/// lexicographic order of `(a¹, a²)`.
pub fn edge_strata(stats: &EdgePairStats, r: usize, cap1: i64, cap2: i64, budget: usize) -> Result<Vec<EdgeStratum>> {
    let side1 = enumerate_sequences(&stats.near, r, cap1, budget)?;
    let side2 = enumerate_sequences(&stats.far, r, cap2, budget)?;
    let mut out = Vec::new();
    for a1 in &side1 {
        for a2 in &side2 {
            if let Some(refined) = compatibility(stats, a1, a2) {
                if out.len() == budget {
                    return Err(Error::EnumerationBudgetExceeded { budget });
                }
                out.push(EdgeStratum { a1: a1.clone(), a2: a2.clone(), refined });
            }
        }
    }
    Ok(out)
}
