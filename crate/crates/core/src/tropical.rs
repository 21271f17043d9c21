//! Multidegrees as divisors on the subdivided graph: chip-firing, reduced
//! divisors, and a brute-force Baker–Norine rank.

use std::collections::VecDeque;

use num_traits::Zero;

use crate::curve::{ChainGraph, Curve, SubdividedGraph};
use crate::error::{Error, Result};
use crate::linalg::solve;
use crate::multidegree::AdmissibleMultidegree;
use crate::scalar::Scalar;
use crate::Rational;

/// A finite connected loopless multigraph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Multigraph {
    labels: Vec<String>,
    edges: Vec<(usize, usize)>,
    /// Neighbor lists with multiplicity.
    adjacency: Vec<Vec<usize>>,
}

impl Multigraph {
    pub fn new(labels: Vec<String>, edges: Vec<(usize, usize)>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::EmptyGraph);
        }
        let mut adjacency = vec![Vec::new(); labels.len()];
        for &(a, b) in &edges {
            if a == b {
                return Err(Error::LoopEdge(labels[a].clone()));
            }
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        let g = Multigraph { labels, edges, adjacency };
        if g.distances(0).contains(&usize::MAX) {
            return Err(Error::Disconnected);
        }
        Ok(g)
    }

    /// Vertices labelled `0, 1, …`.
    pub fn from_edge_list(vertex_count: usize, edges: &[(usize, usize)]) -> Result<Self> {
        Multigraph::new((0..vertex_count).map(|i| i.to_string()).collect(), edges.to_vec())
    }

    pub fn from_subdivided(sub: &SubdividedGraph) -> Result<Self> {
        Multigraph::new(sub.labels.clone(), sub.segments.clone())
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label_index(&self, label: &str) -> Result<usize> {
        self.labels.iter().position(|l| l == label).ok_or_else(|| Error::UnknownVertex(label.to_string()))
    }

    /// First Betti number.
    pub fn genus(&self) -> i64 {
        self.edges.len() as i64 - self.labels.len() as i64 + 1
    }

    pub fn valence(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    fn distances(&self, q: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.vertex_count()];
        dist[q] = 0;
        let mut queue = VecDeque::from([q]);
        while let Some(v) = queue.pop_front() {
            for &u in &self.adjacency[v] {
                if dist[u] == usize::MAX {
                    dist[u] = dist[v] + 1;
                    queue.push_back(u);
                }
            }
        }
        dist
    }

    /// `K(v) = val(v) − 2`.
    pub fn canonical(&self) -> TropicalDivisor {
        TropicalDivisor { chips: (0..self.vertex_count()).map(|v| self.valence(v) as i64 - 2).collect() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TropicalDivisor {
    pub chips: Vec<i64>,
}

impl TropicalDivisor {
    pub fn zero(n: usize) -> Self {
        TropicalDivisor { chips: vec![0; n] }
    }

    pub fn degree(&self) -> i64 {
        self.chips.iter().sum()
    }

    pub fn is_effective(&self) -> bool {
        self.chips.iter().all(|&c| c >= 0)
    }

    pub fn sub(&self, other: &TropicalDivisor) -> TropicalDivisor {
        TropicalDivisor { chips: self.chips.iter().zip(&other.chips).map(|(a, b)| a - b).collect() }
    }
}

/// Image of a multidegree: original weights on the original vertices and
/// one chip on the `μ(e)`-th inserted vertex from the tail.
pub fn to_divisor(sub: &SubdividedGraph, w: &AdmissibleMultidegree) -> TropicalDivisor {
    let mut chips = vec![0; sub.vertex_count()];
    chips[..sub.original_count].copy_from_slice(&w.weights);
    for (e, &mu) in w.mu.iter().enumerate() {
        if mu != 0 {
            chips[sub.chains[e][mu as usize]] += 1;
        }
    }
    TropicalDivisor { chips }
}

/// Inverse of [`to_divisor`] on divisors that are nonnegative on inserted
/// vertices with at most one chip per chain.
pub fn from_divisor(graph: &ChainGraph, sub: &SubdividedGraph, div: &TropicalDivisor) -> Option<AdmissibleMultidegree> {
    let weights = div.chips[..sub.original_count].to_vec();
    let mut mu = Vec::with_capacity(graph.edge_count());
    for chain in &sub.chains {
        let inner = &chain[1..chain.len() - 1];
        if inner.iter().any(|&x| div.chips[x] < 0) || inner.iter().map(|&x| div.chips[x]).sum::<i64>() > 1 {
            return None;
        }
        mu.push(inner.iter().position(|&x| div.chips[x] == 1).map_or(0, |k| k as i64 + 1));
    }
    AdmissibleMultidegree::new(graph, weights, mu).ok()
}

/// Vertices on the `v` side once, on every edge over `ce`, the
/// `(σμ + 1)`-th segment counted from `v` is removed.
pub fn firing_set_for_twist(
    curve: &Curve,
    sub: &SubdividedGraph,
    w: &AdmissibleMultidegree,
    ce: usize,
    v: usize,
) -> Result<Vec<bool>> {
    let cedge = curve.tree().edge(ce);
    if !cedge.contains(v) {
        return Err(Error::NotAdjacent { edge: curve.collapsed_label(ce), vertex: curve.graph().vertex_id(v).into() });
    }
    let mut cut = Vec::with_capacity(cedge.edges.len());
    for &e in &cedge.edges {
        let edge = curve.edge(e);
        let s = edge.sigma(v).expect("edge meets v");
        let from_v = (s * w.mu[e]).rem_euclid(edge.n) as usize;
        let n = edge.n as usize;
        let k = if s == 1 { from_v } else { n - 1 - from_v };
        let chain = &sub.chains[e];
        cut.push((chain[k], chain[k + 1]));
    }
    let mut adjacency = vec![Vec::new(); sub.vertex_count()];
    let mut removed = cut.clone();
    for &(a, b) in &sub.segments {
        if let Some(pos) = removed.iter().position(|&c| c == (a, b)) {
            removed.swap_remove(pos);
            continue;
        }
        adjacency[a].push(b);
        adjacency[b].push(a);
    }
    let mut inside = vec![false; sub.vertex_count()];
    inside[v] = true;
    let mut stack = vec![v];
    while let Some(x) = stack.pop() {
        for &y in &adjacency[x] {
            if !inside[y] {
                inside[y] = true;
                stack.push(y);
            }
        }
    }
    Ok(inside)
}

/// Every vertex of `set` sends one chip along each edge leaving `set`.
pub fn chip_fire(g: &Multigraph, div: &TropicalDivisor, set: &[bool]) -> TropicalDivisor {
    let mut chips = div.chips.clone();
    for &(a, b) in &g.edges {
        if set[a] != set[b] {
            let (from, to) = if set[a] { (a, b) } else { (b, a) };
            chips[from] -= 1;
            chips[to] += 1;
        }
    }
    TropicalDivisor { chips }
}

/// Dhar's burning process from `q`; returns the burnt set.
pub fn burn(g: &Multigraph, div: &TropicalDivisor, q: usize) -> Vec<bool> {
    let n = g.vertex_count();
    let mut burnt = vec![false; n];
    burnt[q] = true;
    let mut queue = VecDeque::from([q]);
    let mut fire_edges = vec![0i64; n];
    while let Some(x) = queue.pop_front() {
        for &y in &g.adjacency[x] {
            if !burnt[y] {
                fire_edges[y] += 1;
                if fire_edges[y] > div.chips[y] {
                    burnt[y] = true;
                    queue.push_back(y);
                }
            }
        }
    }
    burnt
}

pub fn is_reduced(g: &Multigraph, div: &TropicalDivisor, q: usize) -> bool {
    div.chips.iter().enumerate().all(|(v, &c)| v == q || c >= 0) && burn(g, div, q).iter().all(|&b| b)
}

fn apply_firing(g: &Multigraph, div: &mut TropicalDivisor, set: &[bool], script: &mut [i64]) {
    *div = chip_fire(g, div, set);
    for (v, &inside) in set.iter().enumerate() {
        if inside {
            script[v] += 1;
        }
    }
}

/// The unique `q`-reduced divisor equivalent to `div`.
pub fn dhar_reduce(g: &Multigraph, div: &TropicalDivisor, q: usize) -> Result<TropicalDivisor> {
    let n = g.vertex_count();
    let mut d = div.clone();
    let mut script = vec![0i64; n];

    // push chips outward layer by layer until every vertex but q is nonnegative
    let dist = g.distances(q);
    let max = dist.iter().copied().max().unwrap_or(0);
    for k in (0..max).rev() {
        let ball: Vec<bool> = dist.iter().map(|&x| x <= k).collect();
        while (0..n).any(|v| dist[v] == k + 1 && d.chips[v] < 0) {
            apply_firing(g, &mut d, &ball, &mut script);
        }
    }

    loop {
        let burnt = burn(g, &d, q);
        if burnt.iter().all(|&b| b) {
            break;
        }
        let unburnt: Vec<bool> = burnt.iter().map(|&b| !b).collect();
        apply_firing(g, &mut d, &unburnt, &mut script);
    }

    // div − d must be the Laplacian image of the firing script
    let mut expected = div.chips.clone();
    for &(a, b) in &g.edges {
        let flow = script[a] - script[b];
        expected[a] -= flow;
        expected[b] += flow;
    }
    if expected != d.chips {
        return Err(Error::NonEquivalentInput);
    }
    Ok(d)
}

/// Linear equivalence decided by solving `L x = a − b` over the rationals and
/// checking integrality.
pub fn linearly_equivalent(g: &Multigraph, a: &TropicalDivisor, b: &TropicalDivisor) -> bool {
    if a.degree() != b.degree() {
        return false;
    }
    let n = g.vertex_count();
    if n == 1 {
        return true;
    }
    let q = n - 1;
    let mut lap = vec![vec![Rational::zero(); n - 1]; n - 1];
    for &(x, y) in &g.edges {
        for (p, o) in [(x, y), (y, x)] {
            if p != q {
                lap[p][p] = lap[p][p].clone() + Rational::from_int(1);
                if o != q {
                    lap[p][o] = lap[p][o].clone() - Rational::from_int(1);
                }
            }
        }
    }
    let rhs: Vec<Rational> = (0..n - 1).map(|v| Rational::from_int(a.chips[v] - b.chips[v])).collect();
    match solve(lap, rhs) {
        Some(x) => x.iter().all(|v| v.is_integer()),
        None => false,
    }
}

/// Brute-force size bounds for [`bn_rank`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RankLimits {
    pub max_vertices: usize,
    pub max_degree: i64,
}

impl Default for RankLimits {
    fn default() -> Self {
        RankLimits { max_vertices: 8, max_degree: 12 }
    }
}

fn equivalent_to_effective(g: &Multigraph, div: &TropicalDivisor) -> Result<bool> {
    if div.degree() < 0 {
        return Ok(false);
    }
    Ok(dhar_reduce(g, div, 0)?.chips[0] >= 0)
}

/// Calls `f` on every effective divisor of degree `k`; stops early on `false`.
fn for_each_effective(n: usize, k: i64, f: &mut dyn FnMut(&[i64]) -> Result<bool>) -> Result<bool> {
    fn rec(v: usize, left: i64, e: &mut Vec<i64>, f: &mut dyn FnMut(&[i64]) -> Result<bool>) -> Result<bool> {
        if v + 1 == e.len() {
            e[v] = left;
            let ok = f(e)?;
            e[v] = 0;
            return Ok(ok);
        }
        for c in 0..=left {
            e[v] = c;
            if !rec(v + 1, left - c, e, f)? {
                e[v] = 0;
                return Ok(false);
            }
        }
        e[v] = 0;
        Ok(true)
    }
    let mut e = vec![0; n];
    rec(0, k, &mut e, f)
}

/// Baker–Norine rank by enumerating effective subtractions.
pub fn bn_rank(g: &Multigraph, div: &TropicalDivisor, limits: RankLimits) -> Result<i64> {
    if g.vertex_count() > limits.max_vertices || div.degree().abs() > limits.max_degree {
        return Err(Error::OracleBudgetExceeded(format!(
            "{} vertices, degree {}; limits are {} and {}",
            g.vertex_count(),
            div.degree(),
            limits.max_vertices,
            limits.max_degree
        )));
    }
    if !equivalent_to_effective(g, div)? {
        return Ok(-1);
    }
    let n = g.vertex_count();
    for k in 1..=div.degree() + 1 {
        let all = for_each_effective(n, k, &mut |e| {
            let rest = TropicalDivisor { chips: div.chips.iter().zip(e).map(|(a, b)| a - b).collect() };
            equivalent_to_effective(g, &rest)
        })?;
        if !all {
            return Ok(k - 1);
        }
    }
    unreachable!("rank never exceeds the degree")
}
