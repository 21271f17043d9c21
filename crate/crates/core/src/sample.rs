//! Instance builders: small fixed curves and seeded random pseudocompact
//! graphs for property sweeps.

use rand::Rng;

use crate::curve::{validate, ChainGraph, Curve, EdgeSpec, Vertex};

/// Builds and validates a curve from `(id, genus)` vertices and
/// `(id, tail, head, n)` edges. Panics on invalid input.
pub fn curve_from(vertices: &[(&str, u32)], edges: &[(&str, &str, &str, i64)]) -> Curve {
    let graph = ChainGraph::new(
        vertices.iter().map(|&(id, g)| Vertex::new(id, g)).collect(),
        edges.iter().map(|&(id, t, h, n)| EdgeSpec::new(id, t, h, n)).collect(),
    )
    .expect("fixture graph is well formed");
    validate(&graph).expect("fixture graph is of pseudocompact type")
}

fn vertex_name(i: usize) -> String {
    format!("v{:02}", i)
}

/// Chain of genus-0 components `v00 – v01 – …` where consecutive components
/// meet in `multiplicities[i]` nodes, each with chain length `n`.
pub fn chain(multiplicities: &[usize], n: i64) -> ChainGraph {
    let vertices = (0..=multiplicities.len()).map(|i| Vertex::new(vertex_name(i), 0)).collect();
    let mut edges = Vec::new();
    for (i, &m) in multiplicities.iter().enumerate() {
        for k in 0..m {
            edges.push(EdgeSpec::new(
                format!("e{:02}{}", i, (b'a' + k as u8) as char),
                vertex_name(i),
                vertex_name(i + 1),
                n,
            ));
        }
    }
    ChainGraph::new(vertices, edges).expect("chain is well formed")
}

/// Two rational components glued at `g + 1` nodes with the given chain
/// lengths (cycled if shorter than `g + 1`).
pub fn binary_graph(g: usize, lengths: &[i64]) -> ChainGraph {
    let vertices = vec![Vertex::new("z1", 0), Vertex::new("z2", 0)];
    let edges = (0..=g)
        .map(|i| {
            let n = if lengths.is_empty() { 1 } else { lengths[i % lengths.len()] };
            EdgeSpec::new(format!("p{:02}", i), "z1", "z2", n)
        })
        .collect();
    ChainGraph::new(vertices, edges).expect("binary graph is well formed")
}

/// Bounds for [`random_graph`].
#[derive(Debug, Clone, Copy)]
pub struct GraphShape {
    pub max_vertices: usize,
    pub max_multiplicity: usize,
    pub max_chain: i64,
    pub max_genus: u32,
}

impl Default for GraphShape {
    fn default() -> Self {
        GraphShape { max_vertices: 6, max_multiplicity: 3, max_chain: 4, max_genus: 1 }
    }
}

/// Random pseudocompact graph: a random tree with random edge multiplicities,
/// orientations, and chain lengths.
pub fn random_graph<R: Rng + ?Sized>(rng: &mut R, shape: GraphShape) -> ChainGraph {
    let nv = rng.gen_range(1..=shape.max_vertices.max(1));
    let vertices = (0..nv).map(|i| Vertex::new(vertex_name(i), rng.gen_range(0..=shape.max_genus))).collect();
    let mut edges = Vec::new();
    for child in 1..nv {
        let parent = rng.gen_range(0..child);
        let m = rng.gen_range(1..=shape.max_multiplicity.max(1));
        for k in 0..m {
            let (t, h) = if rng.gen_bool(0.5) { (parent, child) } else { (child, parent) };
            let n = rng.gen_range(1..=shape.max_chain.max(1));
            edges.push(EdgeSpec::new(
                format!("e{:02}{}", child, (b'a' + k as u8) as char),
                vertex_name(t),
                vertex_name(h),
                n,
            ));
        }
    }
    ChainGraph::new(vertices, edges).expect("random graph is well formed")
}

pub fn random_curve<R: Rng + ?Sized>(rng: &mut R, shape: GraphShape) -> Curve {
    validate(&random_graph(rng, shape)).expect("random tree is of pseudocompact type")
}

/// Random connected multigraph without loops on `nv` vertices with `ne ≥ nv − 1`
/// edges, as an edge list.
pub fn random_multigraph<R: Rng + ?Sized>(rng: &mut R, nv: usize, ne: usize) -> Vec<(usize, usize)> {
    let mut edges = Vec::with_capacity(ne);
    for child in 1..nv {
        edges.push((rng.gen_range(0..child), child));
    }
    while edges.len() < ne && nv > 1 {
        let a = rng.gen_range(0..nv);
        let b = rng.gen_range(0..nv);
        if a != b {
            edges.push((a, b));
        }
    }
    edges
}
