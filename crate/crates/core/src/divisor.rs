//! Divisor ladders along collapsed edges.
//!
//! For a side `(e, v)` the ladder `D_0 ≤ D_1 ≤ … ≤ D_{b+1}` is a nondecreasing
//! sequence of divisors supported on the nodes over `e`. Divisors are kept as
//! multisets of node (edge) indices; only their degrees feed the dimension
//! count.

use std::collections::BTreeMap;

use crate::curve::Curve;
use crate::error::{Error, Result};
use crate::family::ConcentratedFamily;

/// Degrees `deg D_0, …, deg D_{b+1}` of a ladder with `D_0 = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Ladder {
    degrees: Vec<i64>,
}

impl Ladder {
    pub fn from_degrees(degrees: Vec<i64>) -> Result<Self> {
        if degrees.len() < 2 || degrees[0] != 0 || degrees.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::InvalidArgument(format!("not a ladder: {degrees:?}")));
        }
        Ok(Ladder { degrees })
    }

    /// Ladder whose `j`-th increment has degree `gaps[j]`.
    pub fn from_gaps(gaps: &[i64]) -> Self {
        let mut degrees = Vec::with_capacity(gaps.len() + 1);
        degrees.push(0);
        let mut acc = 0;
        for &f in gaps {
            assert!(f >= 0, "ladder gaps are nonnegative");
            acc += f;
            degrees.push(acc);
        }
        Ladder { degrees }
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn degree(&self, j: usize) -> i64 {
        self.degrees[j]
    }

    /// Index of the last increment; the ladder has `b + 2` entries.
    pub fn b(&self) -> usize {
        self.degrees.len() - 2
    }

    /// `deg D_{j+1} − deg D_j` for `j ≤ b`.
    pub fn gap(&self, j: usize) -> i64 {
        self.degrees[j + 1] - self.degrees[j]
    }

    pub fn is_critical(&self, j: usize) -> bool {
        j <= self.b() && self.gap(j) > 0
    }

    pub fn critical(&self) -> Vec<usize> {
        (0..=self.b()).filter(|&j| self.is_critical(j)).collect()
    }

    /// Critical index whose degree is `a`, if any.
    pub fn critical_index_of(&self, a: i64) -> Option<usize> {
        (0..=self.b()).find(|&j| self.degrees[j] == a && self.gap(j) > 0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisorSequence {
    pub collapsed_edge: usize,
    pub vertex: usize,
    /// Node indices added at each step: `D_{i+1} − D_i` for `i = 0..=b`.
    pub increments: Vec<Vec<usize>>,
    pub ladder: Ladder,
}

impl DivisorSequence {
    /// `D_i` as a multiset `node index → multiplicity`.
    pub fn entry(&self, i: usize) -> BTreeMap<usize, usize> {
        let mut out = BTreeMap::new();
        for inc in &self.increments[..i] {
            for &e in inc {
                *out.entry(e).or_insert(0) += 1;
            }
        }
        out
    }
}

/// Ladder of the side `(ce, v)` built from the residues of `w_v`.
///
/// The node of `ẽ` enters at step `i` exactly when
/// `σ(ẽ,v)·μ_v(ẽ) ≡ −i (mod n(ẽ))`.
pub fn divisor_sequence(curve: &Curve, family: &ConcentratedFamily, ce: usize, v: usize) -> Result<DivisorSequence> {
    let cedge = curve.tree().edge(ce);
    if !cedge.contains(v) {
        return Err(Error::NotAdjacent { edge: curve.collapsed_label(ce), vertex: curve.graph().vertex_id(v).into() });
    }
    let b = usize::try_from(family.b(ce)).expect("twist counts are nonnegative");
    let mu = &family.members[v].mu;
    let mut increments = Vec::with_capacity(b + 1);
    let mut degrees = Vec::with_capacity(b + 2);
    degrees.push(0);
    for i in 0..=b as i64 {
        let step: Vec<usize> = cedge
            .edges
            .iter()
            .copied()
            .filter(|&e| {
                let edge = curve.edge(e);
                let s = edge.sigma(v).expect("edge meets v");
                (s * mu[e] + i).rem_euclid(edge.n) == 0
            })
            .collect();
        degrees.push(degrees.last().unwrap() + step.len() as i64);
        increments.push(step);
    }
    Ok(DivisorSequence { collapsed_edge: ce, vertex: v, increments, ladder: Ladder { degrees } })
}

/// The two ladders across one collapsed edge with their shared invariants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgePairStats {
    /// Ladder on the first side (`D¹`).
    pub near: Ladder,
    /// Ladder on the second side (`D²`).
    pub far: Ladder,
    pub b: usize,
    /// `deg D¹_j + deg D²_{b+1−j}`, the same for every `j`.
    pub c: i64,
    /// `f_j` for `j = 0..=b`.
    pub gaps: Vec<i64>,
    pub critical: Vec<usize>,
    /// Whether reading the gap formula with subscripts `c+1−j`, `c−j` on `D²`
    /// gives the same `f_j`; recorded because that reading is sometimes
    /// printed in place of `b+1−j`.
    pub literal_subscripts_agree: bool,
}

impl EdgePairStats {
    /// Synthetic pair whose near ladder has the given gaps; the far ladder is
    /// the complementary one.
    pub fn from_gaps(gaps: &[i64]) -> Self {
        let reversed: Vec<i64> = gaps.iter().rev().copied().collect();
        pair_stats(&Ladder::from_gaps(gaps), &Ladder::from_gaps(&reversed)).expect("complementary by construction")
    }

    pub fn gap(&self, j: usize) -> i64 {
        self.gaps[j]
    }

    /// The same pair seen from the other side.
    pub fn swapped(&self) -> Self {
        pair_stats(&self.far, &self.near).expect("complementarity is symmetric")
    }
}

pub fn pair_stats(near: &Ladder, far: &Ladder) -> Result<EdgePairStats> {
    let (d1, d2) = (near.degrees(), far.degrees());
    if d1.len() != d2.len() {
        return Err(Error::ComplementarityViolation(format!("ladder lengths {} and {}", d1.len(), d2.len())));
    }
    let b = near.b();
    let c = d1[0] + d2[b + 1];
    for j in 0..=b + 1 {
        if d1[j] + d2[b + 1 - j] != c {
            return Err(Error::ComplementarityViolation(format!(
                "deg D1_{j} + deg D2_{} = {} != {c}",
                b + 1 - j,
                d1[j] + d2[b + 1 - j]
            )));
        }
    }
    let gaps: Vec<i64> = (0..=b).map(|j| near.gap(j)).collect();
    for (j, &f) in gaps.iter().enumerate() {
        if far.gap(b - j) != f {
            return Err(Error::ComplementarityViolation(format!("gap mismatch at j={j}")));
        }
        if near.is_critical(j) != far.is_critical(b - j) {
            return Err(Error::ComplementarityViolation(format!("critical index mismatch at j={j}")));
        }
    }
    let literal_subscripts_agree = (0..=b).all(|j| {
        let hi = c + 1 - j as i64;
        let lo = c - j as i64;
        lo >= 0 && hi <= b as i64 + 1 && d2[hi as usize] - d2[lo as usize] == gaps[j]
    });
    let critical = near.critical();
    Ok(EdgePairStats { near: near.clone(), far: far.clone(), b, c, gaps, critical, literal_subscripts_agree })
}

/// Ladders on both sides of `ce`, first side the smaller vertex index.
pub fn edge_pair(
    curve: &Curve,
    family: &ConcentratedFamily,
    ce: usize,
) -> Result<(DivisorSequence, DivisorSequence, EdgePairStats)> {
    let [a, b] = curve.tree().edge(ce).ends;
    let s1 = divisor_sequence(curve, family, ce, a)?;
    let s2 = divisor_sequence(curve, family, ce, b)?;
    let stats = pair_stats(&s1.ladder, &s2.ladder)?;
    Ok((s1, s2, stats))
}
