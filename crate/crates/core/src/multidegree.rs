//! Admissible multidegrees and the twist calculus.

use crate::curve::{ChainGraph, Curve};
use crate::error::{Error, Result};

/// Vertex weights together with one residue `μ(e) ∈ ℤ/n(e)` per edge.
///
/// Residues are stored as their canonical representative in `[0, n(e))`, so
/// structural equality is equality of multidegrees.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AdmissibleMultidegree {
    pub weights: Vec<i64>,
    pub mu: Vec<i64>,
}

impl AdmissibleMultidegree {
    /// Builds a multidegree, reducing each residue modulo its chain length.
    pub fn new(graph: &ChainGraph, weights: Vec<i64>, mu: Vec<i64>) -> Result<Self> {
        if weights.len() != graph.vertex_count() || mu.len() != graph.edge_count() {
            return Err(Error::InvalidArgument(format!(
                "multidegree has {} weights and {} residues for {} vertices and {} edges",
                weights.len(),
                mu.len(),
                graph.vertex_count(),
                graph.edge_count()
            )));
        }
        let mu = mu.iter().zip(graph.edges()).map(|(&m, e)| m.rem_euclid(e.n)).collect();
        Ok(AdmissibleMultidegree { weights, mu })
    }

    /// Total degree `#{e : μ(e) ≠ 0} + Σ_v w(v)`.
    pub fn degree(&self) -> i64 {
        self.weights.iter().sum::<i64>() + self.mu.iter().filter(|&&m| m != 0).count() as i64
    }

    pub fn min_weight(&self) -> i64 {
        self.weights.iter().copied().min().unwrap_or(0)
    }
}

/// All degree placed on `v`, every residue zero.
pub fn point_mass(graph: &ChainGraph, v: usize, d: i64) -> AdmissibleMultidegree {
    let mut weights = vec![0; graph.vertex_count()];
    weights[v] = d;
    AdmissibleMultidegree { weights, mu: vec![0; graph.edge_count()] }
}

/// Twists `w` at the collapsed edge `ce` and adjacent vertex `v`, in place.
///
/// Each underlying edge has its residue shifted by `σ(ẽ,v)`; `v` loses one
/// unit per edge whose residue was zero and the far end gains one per edge
/// whose new residue is zero.
pub fn twist_in_place(curve: &Curve, w: &mut AdmissibleMultidegree, ce: usize, v: usize) -> Result<()> {
    let cedge = curve.tree().edge(ce);
    if !cedge.contains(v) {
        return Err(Error::NotAdjacent { edge: curve.collapsed_label(ce), vertex: curve.graph().vertex_id(v).into() });
    }
    let other = cedge.other(v);
    for &e in &cedge.edges {
        let edge = curve.edge(e);
        let sigma = edge.sigma(v).expect("underlying edge meets its collapsed edge's endpoints");
        if w.mu[e] == 0 {
            w.weights[v] -= 1;
        }
        w.mu[e] = (w.mu[e] + sigma).rem_euclid(edge.n);
        if w.mu[e] == 0 {
            w.weights[other] += 1;
        }
    }
    Ok(())
}

pub fn twist(curve: &Curve, w: &AdmissibleMultidegree, ce: usize, v: usize) -> Result<AdmissibleMultidegree> {
    let mut out = w.clone();
    twist_in_place(curve, &mut out, ce, v)?;
    Ok(out)
}

/// True iff, for every other vertex `v'`, twisting once at `v'` toward `v`
/// leaves `v'` with negative weight.
pub fn is_concentrated(curve: &Curve, w: &AdmissibleMultidegree, v: usize) -> bool {
    let rooted = curve.tree().rooted_at(v);
    rooted.order.iter().skip(1).all(|&u| {
        let (_, ce) = rooted.parent[u].expect("non-root vertex has a parent");
        let twisted = twist(curve, w, ce, u).expect("parent edge is adjacent");
        twisted.weights[u] < 0
    })
}

/// A multidegree of total degree `d` concentrated at `v1` and nonnegative in
/// every index.
///
/// Starts from all degree at `v1` and repairs negative indices, farthest
/// vertices first, by the minimal number of twists toward them.
pub fn concentrate(curve: &Curve, d: i64, v1: usize) -> Result<AdmissibleMultidegree> {
    let mut w = point_mass(curve.graph(), v1, d);
    let rooted = curve.tree().rooted_at(v1);
    for &u in rooted.order.iter().skip(1).rev() {
        let (parent, ce) = rooted.parent[u].expect("non-root vertex has a parent");
        let mut guard = 0usize;
        while w.weights[u] < 0 {
            twist_in_place(curve, &mut w, ce, parent)?;
            guard += 1;
            if guard > 1_000_000 {
                return Err(Error::VacuousTheory(curve.graph().vertex_id(v1).into()));
            }
        }
    }
    if w.weights[v1] < 0 || !is_concentrated(curve, &w, v1) {
        return Err(Error::VacuousTheory(curve.graph().vertex_id(v1).into()));
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{validate, EdgeSpec, Vertex};

    fn curve(vs: &[&str], es: &[(&str, &str, &str, i64)]) -> Curve {
        let g = ChainGraph::new(
            vs.iter().map(|&id| Vertex::new(id, 0)).collect(),
            es.iter().map(|&(id, t, h, n)| EdgeSpec::new(id, t, h, n)).collect(),
        )
        .unwrap();
        validate(&g).unwrap()
    }

    fn md(c: &Curve, w: &[i64], mu: &[i64]) -> AdmissibleMultidegree {
        AdmissibleMultidegree::new(c.graph(), w.to_vec(), mu.to_vec()).unwrap()
    }

    #[test]
    fn compact_type_twist() {
        let c = curve(&["u", "v"], &[("e", "u", "v", 1)]);
        let w = twist(&c, &md(&c, &[2, 0], &[0]), 0, 0).unwrap();
        assert_eq!(w, md(&c, &[1, 1], &[0]));
    }

    #[test]
    fn twist_on_a_chain_of_length_two() {
        let c = curve(&["u", "v"], &[("e", "u", "v", 2)]);
        let w0 = md(&c, &[2, 0], &[0]);
        let w1 = twist(&c, &w0, 0, 0).unwrap();
        assert_eq!(w1, md(&c, &[1, 0], &[1]));
        assert_eq!(w1.degree(), 2);
        assert_eq!(twist(&c, &w1, 0, 1).unwrap(), w0);
    }

    #[test]
    fn twist_at_head_runs_residue_backwards() {
        let c = curve(&["u", "v"], &[("e", "v", "u", 3)]);
        let w = twist(&c, &md(&c, &[1, 0], &[0]), 0, 0).unwrap();
        assert_eq!(w, md(&c, &[0, 0], &[2]));
    }

    #[test]
    fn not_adjacent() {
        let c = curve(&["u", "v", "w"], &[("e1", "u", "v", 1), ("e2", "v", "w", 1)]);
        let ce = c.tree().edge_between(1, 2).unwrap();
        assert_eq!(twist(&c, &md(&c, &[0, 0, 0], &[0, 0]), ce, 0).unwrap_err().name(), "NotAdjacent");
    }

    #[test]
    fn concentration_on_a_path() {
        let c = curve(&["u", "v", "w"], &[("e1", "u", "v", 1), ("e2", "v", "w", 1)]);
        assert!(is_concentrated(&c, &md(&c, &[2, 0, 0], &[0, 0]), 0));
        assert!(!is_concentrated(&c, &md(&c, &[1, 1, 0], &[0, 0]), 0));
        let single = curve(&["u"], &[]);
        assert!(is_concentrated(&single, &md(&single, &[-3], &[]), 0));
    }

    #[test]
    fn concentrate_examples() {
        let c = curve(&["u", "v", "w"], &[("e1", "u", "v", 1), ("e2", "v", "w", 1)]);
        assert_eq!(concentrate(&c, 2, 0).unwrap(), md(&c, &[2, 0, 0], &[0, 0]));
        assert_eq!(concentrate(&c, 0, 1).unwrap(), md(&c, &[0, 0, 0], &[0, 0]));
        let c = curve(&["u", "v"], &[("e1", "u", "v", 2), ("e2", "u", "v", 3)]);
        assert_eq!(concentrate(&c, 2, 0).unwrap(), md(&c, &[2, 0], &[0, 0]));
        assert_eq!(concentrate(&c, -1, 0).unwrap_err().name(), "VacuousTheory");
    }
}
