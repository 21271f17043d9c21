//! Concentrated families `(w_v)_v` and the twist graph they span.

use std::collections::{HashMap, HashSet};

use crate::curve::Curve;
use crate::error::{Error, Result};
use crate::multidegree::{concentrate, is_concentrated, twist, twist_in_place, AdmissibleMultidegree};

/// One multidegree per vertex, each concentrated at its vertex, linked along
/// every collapsed edge by a number of twists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConcentratedFamily {
    pub seed: usize,
    /// `w_v`, indexed by vertex.
    pub members: Vec<AdmissibleMultidegree>,
    /// `b_{v,v'}` per collapsed edge: twisting `w_v` that many times at
    /// `(e, v)` gives `w_{v'}`. Symmetric in the two ends.
    pub twists: Vec<i64>,
}

impl ConcentratedFamily {
    pub fn w0(&self) -> &AdmissibleMultidegree {
        &self.members[self.seed]
    }

    pub fn degree(&self) -> i64 {
        self.w0().degree()
    }

    /// `d_v`: the weight of `w_v` at `v`.
    pub fn local_degree(&self, v: usize) -> i64 {
        self.members[v].weights[v]
    }

    pub fn b(&self, ce: usize) -> i64 {
        self.twists[ce]
    }

    /// Builds a family from explicit members, recovering each `b_{v,v'}` and
    /// checking every family invariant.
    pub fn from_members(curve: &Curve, seed: usize, members: Vec<AdmissibleMultidegree>) -> Result<Self> {
        if members.len() != curve.vertex_count() {
            return Err(Error::InvalidFamily(format!("expected {} members", curve.vertex_count())));
        }
        let mut twists = Vec::with_capacity(curve.tree().edges().len());
        for (ce, cedge) in curve.tree().edges().iter().enumerate() {
            let [a, b] = cedge.ends;
            twists.push(count_twists(curve, &members[a], &members[b], ce, a)?);
        }
        let family = ConcentratedFamily { seed, members, twists };
        family.check(curve)?;
        Ok(family)
    }

    /// Verifies concentration, nonnegativity, equal degrees and the twist
    /// links along every collapsed edge.
    pub fn check(&self, curve: &Curve) -> Result<()> {
        let d = self.degree();
        for (v, w) in self.members.iter().enumerate() {
            let id = curve.graph().vertex_id(v);
            if w.degree() != d {
                return Err(Error::InvalidFamily(format!("w_{id} has degree {} != {d}", w.degree())));
            }
            if w.weights[v] < 0 {
                return Err(Error::VacuousTheory(id.into()));
            }
            if w.min_weight() < 0 {
                return Err(Error::InvalidFamily(format!("w_{id} is negative somewhere")));
            }
            if !is_concentrated(curve, w, v) {
                return Err(Error::InvalidFamily(format!("w_{id} is not concentrated at {id}")));
            }
        }
        for (ce, cedge) in curve.tree().edges().iter().enumerate() {
            let [a, b] = cedge.ends;
            let mut w = self.members[a].clone();
            for _ in 0..self.twists[ce] {
                twist_in_place(curve, &mut w, ce, a)?;
            }
            if w != self.members[b] {
                return Err(Error::InvalidFamily(format!("twist link broken on {}", curve.collapsed_label(ce))));
            }
        }
        Ok(())
    }
}

/// Number of twists at `(ce, v)` taking `from` to `to`.
fn count_twists(
    curve: &Curve,
    from: &AdmissibleMultidegree,
    to: &AdmissibleMultidegree,
    ce: usize,
    v: usize,
) -> Result<i64> {
    // Index v never increases under these twists, so stop once it drops below
    // the target.
    let mut w = from.clone();
    let mut b = 0;
    loop {
        if &w == to {
            return Ok(b);
        }
        if w.weights[v] < to.weights[v] {
            return Err(Error::InvalidFamily(format!(
                "w_{} is not a twist of w_{} along {}",
                curve.graph().vertex_id(curve.tree().edge(ce).other(v)),
                curve.graph().vertex_id(v),
                curve.collapsed_label(ce)
            )));
        }
        twist_in_place(curve, &mut w, ce, v)?;
        b += 1;
    }
}

/// The canonical nonnegative concentrated family seeded at `v1`.
///
/// `w_{v1}` comes from [`concentrate`]; every other `w_v` is obtained from its
/// parent's member by twisting toward `v` as many times as possible while the
/// parent index stays nonnegative.
pub fn concentrated_family(curve: &Curve, d: i64, v1: usize) -> Result<ConcentratedFamily> {
    let n = curve.vertex_count();
    let mut members: Vec<Option<AdmissibleMultidegree>> = vec![None; n];
    let mut twists = vec![0i64; curve.tree().edges().len()];
    members[v1] = Some(concentrate(curve, d, v1)?);
    let rooted = curve.tree().rooted_at(v1);
    for &v in rooted.order.iter().skip(1) {
        let (parent, ce) = rooted.parent[v].expect("non-root vertex has a parent");
        let mut w = members[parent].clone().expect("parents precede children");
        let mut b = 0;
        loop {
            let next = twist(curve, &w, ce, parent)?;
            if next.weights[parent] < 0 {
                break;
            }
            w = next;
            b += 1;
        }
        twists[ce] = b;
        members[v] = Some(w);
    }
    let members = members.into_iter().map(|m| m.expect("tree is connected")).collect();
    Ok(ConcentratedFamily { seed: v1, members, twists })
}

/// Directed arc of the twist graph, labelled by the twist producing it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TwistArc {
    pub from: usize,
    pub to: usize,
    pub collapsed_edge: usize,
    pub vertex: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistGraph {
    pub vertices: Vec<AdmissibleMultidegree>,
    pub arcs: Vec<TwistArc>,
}

pub fn build_twist_graph(curve: &Curve, family: &ConcentratedFamily) -> Result<TwistGraph> {
    let mut vertices = Vec::new();
    let mut lookup: HashMap<AdmissibleMultidegree, usize> = HashMap::new();
    let mut intern = |w: &AdmissibleMultidegree, vertices: &mut Vec<AdmissibleMultidegree>| -> usize {
        *lookup.entry(w.clone()).or_insert_with(|| {
            vertices.push(w.clone());
            vertices.len() - 1
        })
    };
    for w in &family.members {
        intern(w, &mut vertices);
    }
    let mut arcs = Vec::new();
    let mut seen = HashSet::new();
    for (ce, cedge) in curve.tree().edges().iter().enumerate() {
        let [a, b] = cedge.ends;
        let mut w = family.members[a].clone();
        let mut from = intern(&w, &mut vertices);
        for _ in 0..family.twists[ce] {
            twist_in_place(curve, &mut w, ce, a)?;
            let to = intern(&w, &mut vertices);
            for arc in [
                TwistArc { from, to, collapsed_edge: ce, vertex: a },
                TwistArc { from: to, to: from, collapsed_edge: ce, vertex: b },
            ] {
                if seen.insert(arc) {
                    arcs.push(arc);
                }
            }
            from = to;
        }
    }
    Ok(TwistGraph { vertices, arcs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::curve_from;

    fn md(c: &Curve, w: &[i64], mu: &[i64]) -> AdmissibleMultidegree {
        AdmissibleMultidegree::new(c.graph(), w.to_vec(), mu.to_vec()).unwrap()
    }

    #[test]
    fn path_family() {
        let c = curve_from(&[("u", 0), ("v", 0), ("w", 0)], &[("e1", "u", "v", 1), ("e2", "v", "w", 1)]);
        let f = concentrated_family(&c, 2, 0).unwrap();
        assert_eq!(f.members[0], md(&c, &[2, 0, 0], &[0, 0]));
        assert_eq!(f.members[1], md(&c, &[0, 2, 0], &[0, 0]));
        assert_eq!(f.members[2], md(&c, &[0, 0, 2], &[0, 0]));
        assert_eq!(f.twists, vec![2, 2]);
        f.check(&c).unwrap();

        let tg = build_twist_graph(&c, &f).unwrap();
        assert_eq!(tg.vertices.len(), 5);
        assert_eq!(tg.arcs.len(), 8);
        assert!(tg.vertices.contains(&md(&c, &[1, 1, 0], &[0, 0])));
        assert!(tg.vertices.contains(&md(&c, &[0, 1, 1], &[0, 0])));
    }

    #[test]
    fn single_vertex_family() {
        let c = curve_from(&[("u", 3)], &[]);
        let f = concentrated_family(&c, 5, 0).unwrap();
        assert_eq!(f.members, vec![md(&c, &[5], &[])]);
        assert!(f.twists.is_empty());
        let tg = build_twist_graph(&c, &f).unwrap();
        assert_eq!((tg.vertices.len(), tg.arcs.len()), (1, 0));
    }

    #[test]
    fn chain_of_length_two_family() {
        let c = curve_from(&[("u", 0), ("v", 0)], &[("e", "u", "v", 2)]);
        let f = concentrated_family(&c, 1, 0).unwrap();
        assert_eq!(f.members[0], md(&c, &[1, 0], &[0]));
        assert_eq!(f.members[1], md(&c, &[0, 1], &[0]));
        assert_eq!(f.twists, vec![2]);
        let tg = build_twist_graph(&c, &f).unwrap();
        assert!(tg.vertices.contains(&md(&c, &[0, 0], &[1])));
    }

    #[test]
    fn one_step_twist_graph() {
        let c = curve_from(&[("u", 0), ("v", 0)], &[("e", "u", "v", 1)]);
        let f = concentrated_family(&c, 1, 0).unwrap();
        assert_eq!(f.twists, vec![1]);
        let tg = build_twist_graph(&c, &f).unwrap();
        assert_eq!((tg.vertices.len(), tg.arcs.len()), (2, 2));
    }

    #[test]
    fn from_members_recovers_twist_counts() {
        let c = curve_from(&[("u", 0), ("v", 0), ("w", 0)], &[("e1", "u", "v", 1), ("e2", "v", "w", 1)]);
        let canonical = concentrated_family(&c, 2, 0).unwrap();
        let rebuilt = ConcentratedFamily::from_members(&c, 0, canonical.members.clone()).unwrap();
        assert_eq!(rebuilt, canonical);

        let bad = vec![md(&c, &[2, 0, 0], &[0, 0]), md(&c, &[1, 1, 0], &[0, 0]), md(&c, &[0, 0, 2], &[0, 0])];
        assert_eq!(ConcentratedFamily::from_members(&c, 0, bad).unwrap_err().name(), "InvalidFamily");
    }

    #[test]
    fn binary_family_with_balanced_members() {
        let es: Vec<(String, String, String, i64)> =
            (0..4).map(|i| (format!("e{i}"), "z1".to_string(), "z2".to_string(), 1)).collect();
        let es: Vec<(&str, &str, &str, i64)> =
            es.iter().map(|(a, b, c, n)| (a.as_str(), b.as_str(), c.as_str(), *n)).collect();
        let c = curve_from(&[("z1", 0), ("z2", 0)], &es);
        let w = md(&c, &[2, 2], &[0, 0, 0, 0]);
        let f = ConcentratedFamily::from_members(&c, 0, vec![w.clone(), w]).unwrap();
        assert_eq!(f.twists, vec![0]);
        assert_eq!(f.degree(), 4);
    }
}
