//! Binary curves: two rational components meeting in `g + 1` nodes.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::curve::Curve;
use crate::divisor::edge_pair;
use crate::error::{Error, Result};
use crate::family::ConcentratedFamily;
use crate::scalar::Scalar;
use crate::strata::EdgeStratum;
use crate::Rational;

/// A point `[x : y]` of the projective line; `∞ = [1 : 0]`.
#[derive(Debug, Clone)]
pub struct ProjectivePoint<T> {
    pub x: T,
    pub y: T,
}

impl<T: Scalar> ProjectivePoint<T> {
    pub fn new(x: T, y: T) -> Result<Self> {
        if x.is_zero() && y.is_zero() {
            return Err(Error::DegenerateInput("[0:0] is not a point".into()));
        }
        Ok(ProjectivePoint { x, y })
    }

    pub fn affine(x: T) -> Self {
        ProjectivePoint { x, y: T::one() }
    }

    pub fn infinity() -> Self {
        ProjectivePoint { x: T::one(), y: T::zero() }
    }

    pub fn same_as(&self, other: &Self) -> bool {
        self.x.clone() * other.y.clone() == other.x.clone() * self.y.clone()
    }
}

impl<T: Scalar> PartialEq for ProjectivePoint<T> {
    fn eq(&self, other: &Self) -> bool {
        self.same_as(other)
    }
}

impl FromStr for ProjectivePoint<Rational> {
    type Err = Error;

    /// `inf`, an integer, or `p/q`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "inf" {
            return Ok(ProjectivePoint::infinity());
        }
        let bad = || Error::InvalidArgument(format!("bad point `{s}`"));
        let value = match s.split_once('/') {
            Some((p, q)) => {
                let p: BigInt = p.parse().map_err(|_| bad())?;
                let q: BigInt = q.parse().map_err(|_| bad())?;
                if q.is_zero() {
                    return Err(bad());
                }
                Rational::new(p, q)
            }
            None => Rational::from_integer(s.parse().map_err(|_| bad())?),
        };
        Ok(ProjectivePoint::affine(value))
    }
}

impl fmt::Display for ProjectivePoint<Rational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.y.is_zero() {
            write!(f, "inf")
        } else {
            write!(f, "{}", self.x.clone() / self.y.clone())
        }
    }
}

type Matrix<T> = [[T; 2]; 2];

fn apply<T: Scalar>(m: &Matrix<T>, p: &ProjectivePoint<T>) -> ProjectivePoint<T> {
    ProjectivePoint {
        x: m[0][0].clone() * p.x.clone() + m[0][1].clone() * p.y.clone(),
        y: m[1][0].clone() * p.x.clone() + m[1][1].clone() * p.y.clone(),
    }
}

fn mul<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>) -> Matrix<T> {
    let e = |i: usize, j: usize| a[i][0].clone() * b[0][j].clone() + a[i][1].clone() * b[1][j].clone();
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

fn adjugate<T: Scalar>(m: &Matrix<T>) -> Matrix<T> {
    [[m[1][1].clone(), -m[0][1].clone()], [-m[1][0].clone(), m[0][0].clone()]]
}

/// Matrix sending `∞, 0, 1` to `p0, p1, p2`, up to scale. Columns are
/// `λ·p0` and `μ·p1` with `λ·p0 + μ·p1 = p2`, solved by Cramer's rule
/// and scaled by the determinant so only ring operations are used.
fn frame<T: Scalar>(p: &[ProjectivePoint<T>]) -> Matrix<T> {
    let det = p[0].x.clone() * p[1].y.clone() - p[0].y.clone() * p[1].x.clone();
    let lambda = p[2].x.clone() * p[1].y.clone() - p[2].y.clone() * p[1].x.clone();
    let mu = p[0].x.clone() * p[2].y.clone() - p[0].y.clone() * p[2].x.clone();
    debug_assert!(!det.is_zero());
    [[lambda.clone() * p[0].x.clone(), mu.clone() * p[1].x.clone()], [lambda * p[0].y.clone(), mu * p[1].y.clone()]]
}

/// Two copies of the projective line glued at `points1[i] ~ points2[i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BinaryCurve<T: Scalar> {
    pub g: usize,
    pub points1: Vec<ProjectivePoint<T>>,
    pub points2: Vec<ProjectivePoint<T>>,
}

impl<T: Scalar> BinaryCurve<T> {
    pub fn new(points1: Vec<ProjectivePoint<T>>, points2: Vec<ProjectivePoint<T>>) -> Result<Self> {
        if points1.len() != points2.len() {
            return Err(Error::DegenerateInput(format!("{} points against {}", points1.len(), points2.len())));
        }
        if points1.len() < 3 {
            return Err(Error::DegenerateInput("a binary curve needs at least 3 nodes".into()));
        }
        for side in [&points1, &points2] {
            for (i, p) in side.iter().enumerate() {
                if p.x.is_zero() && p.y.is_zero() {
                    return Err(Error::DegenerateInput("[0:0] is not a point".into()));
                }
                if side[..i].iter().any(|q| q.same_as(p)) {
                    return Err(Error::DegenerateInput(format!("repeated marked point at node {i}")));
                }
            }
        }
        Ok(BinaryCurve { g: points1.len() - 1, points1, points2 })
    }

    pub fn swapped(&self) -> Self {
        BinaryCurve { g: self.g, points1: self.points2.clone(), points2: self.points1.clone() }
    }
}

/// Whether one Möbius transformation carries every `points1[i]` to
/// `points2[i]`.
pub fn g12_exists<T: Scalar>(curve: &BinaryCurve<T>) -> bool {
    let (p, q) = (&curve.points1, &curve.points2);
    if p.len() < 3 {
        return true;
    }
    let m = mul(&frame(&q[..3]), &adjugate(&frame(&p[..3])));
    p.iter().zip(q).all(|(a, b)| apply(&m, a).same_as(b))
}

/// Checks that every `(d₁, d₂)` with `0 ≤ d_i ≤ g − 1` lies within
/// `(d − g − 1)/2 ≤ d_i ≤ (d + g + 1)/2`.
pub fn range_check_in<T: Scalar + PartialOrd>(g: i64) -> bool {
    let two = T::from_int(2);
    (0..g).all(|d1| {
        (0..g).all(|d2| {
            let d = d1 + d2;
            let lo = T::from_int(d - g - 1) / two.clone();
            let hi = T::from_int(d + g + 1) / two.clone();
            [d1, d2].iter().all(|&di| {
                let di = T::from_int(di);
                lo <= di && di <= hi
            })
        })
    })
}

pub fn range_check(g: i64) -> bool {
    range_check_in::<Rational>(g)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndexClass {
    FullImage,
    Boundary,
    DoublyExtremal,
    Unused,
}

impl IndexClass {
    pub fn as_str(self) -> &'static str {
        match self {
            IndexClass::FullImage => "full-image",
            IndexClass::Boundary => "boundary",
            IndexClass::DoublyExtremal => "doubly-extremal",
            IndexClass::Unused => "unused",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexEntry {
    pub j: usize,
    pub class: IndexClass,
    /// `dim W¹_j` and `dim W²_{b−j}` for sections of `O(d_i)`.
    pub dims: (i64, i64),
    pub gluing_codim: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduction {
    /// Nodes at which the curve is partially normalized.
    pub nodes: Vec<usize>,
    pub degrees: (i64, i64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GluingLedger {
    pub g: i64,
    pub d1: i64,
    pub d2: i64,
    pub r: usize,
    pub j1: usize,
    pub j2: usize,
    pub entries: Vec<IndexEntry>,
    pub reduction: Option<Reduction>,
}

fn h0(d: i64) -> i64 {
    (d + 1).max(0)
}

/// Index bookkeeping for one edge stratum on a binary curve.
pub fn gluing_ledger(
    curve: &Curve,
    family: &ConcentratedFamily,
    stratum: &EdgeStratum,
    r: usize,
) -> Result<GluingLedger> {
    let graph = curve.graph();
    if graph.vertex_count() != 2 || graph.vertices().iter().any(|v| v.genus != 0) || graph.edge_count() < 3 {
        return Err(Error::NotBinary("expected two rational components joined by at least three nodes".into()));
    }
    let g = curve.genus();
    let (s1, _, stats) = edge_pair(curve, family, 0)?;
    let (d1, d2) = (family.local_degree(0), family.local_degree(1));
    let b = stats.b;
    let last_within = |ladder: &crate::divisor::Ladder, cap: i64| {
        (0..=b + 1).filter(|&j| ladder.degree(j) <= cap).max().expect("deg D_0 = 0")
    };
    let j1 = last_within(&stats.near, d1 + 1);
    let j2 = last_within(&stats.far, d2 + 1);
    let balance = crate::audit::combin_balance(&stats, stratum)?;

    let entries = stats
        .critical
        .iter()
        .map(|&j| {
            let k = b - j;
            let class = match (j.cmp(&j1), k.cmp(&j2)) {
                (std::cmp::Ordering::Less, std::cmp::Ordering::Less) => IndexClass::FullImage,
                (std::cmp::Ordering::Equal, std::cmp::Ordering::Equal) => IndexClass::DoublyExtremal,
                (std::cmp::Ordering::Greater, _) | (_, std::cmp::Ordering::Greater) => IndexClass::Unused,
                _ => IndexClass::Boundary,
            };
            let w1 = h0(d1 - stats.near.degree(j)) - h0(d1 - stats.near.degree(j + 1));
            let w2 = h0(d2 - stats.far.degree(k)) - h0(d2 - stats.far.degree(k + 1));
            IndexEntry { j, class, dims: (w1, w2), gluing_codim: balance.summands[j].max(0) }
        })
        .collect::<Vec<_>>();

    let extremal = j1 <= b && b - j1 == j2 && stats.near.is_critical(j1);
    let constant_at = |a: &crate::strata::MultivanishingSequence, v: i64| a.values.iter().all(|&x| x == v);
    let reduction = if extremal
        && constant_at(&stratum.a1, stats.near.degree(j1))
        && constant_at(&stratum.a2, stats.far.degree(b - j1))
    {
        let degrees = (d1 - stats.near.degree(j1), d2 - stats.far.degree(b - j1));
        for x in [degrees.0, degrees.1] {
            if x < 0 || x > g - 1 {
                return Err(Error::LemmaViolation(format!("reduced multidegree {degrees:?} leaves [0, {}]", g - 1)));
            }
        }
        Some(Reduction { nodes: s1.increments[j1].clone(), degrees })
    } else {
        None
    };
    Ok(GluingLedger { g, d1, d2, r, j1, j2, entries, reduction })
}

/// Parses a comma-separated point list such as `0,1,inf,2/3`.
pub fn parse_points(s: &str) -> Result<Vec<ProjectivePoint<Rational>>> {
    s.split(',').map(str::parse).collect()
}

impl ProjectivePoint<Rational> {
    pub fn from_i64(n: i64) -> Self {
        ProjectivePoint::affine(Rational::from_integer(n.into()))
    }
}
