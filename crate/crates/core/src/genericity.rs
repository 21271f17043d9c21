//! Chain-structure genericity conditions and the degeneration checker.

use num_integer::Integer;

use crate::curve::{classify_component, Curve, StrongBnCertificate, TorsionFlag, WeierstrassFlag};
use crate::error::{Error, Result};

/// A zero-sum tuple with a unique positive entry `x` at position `j` whose
/// floor sum does not exceed `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Witness {
    pub j: usize,
    pub x: i64,
    pub floor_sum: i64,
}

/// Smallest `x ∈ [1, bound]` with `x·target` in the numerical semigroup
/// generated by `gens`.
fn min_semigroup_multiple(target: i64, gens: &[i64], bound: i64) -> Option<i64> {
    if gens.is_empty() || bound < 1 {
        return None;
    }
    let limit = (target * bound) as usize;
    let mut reach = vec![false; limit + 1];
    reach[0] = true;
    for s in 1..=limit {
        reach[s] = gens.iter().any(|&g| s >= g as usize && reach[s - g as usize]);
    }
    (1..=bound).find(|&x| reach[(x * target) as usize])
}

/// Condition (II) for the chain lengths `ns` of one vertex pair.
///
/// Any zero-sum tuple with a unique positive entry `x_j` at `j` has
/// `x_j·n_j` in the semigroup spanned by the other lengths, and its floor
/// sum `Σ_i ⌊x_j n_j / n_i⌋` depends only on `(j, x_j)` and grows with
/// `x_j`. So it suffices to test the least such `x_j` for every `j`. The
/// `i = j` term alone is `x_j`, so `x_j > d` always passes and the search
/// stops at `d`.
pub fn multi_edge_test(ns: &[i64], d: i64) -> (bool, Option<Witness>) {
    assert!(ns.iter().all(|&n| n >= 1), "chain lengths are positive");
    let g = ns.iter().fold(0, |acc: i64, &n| acc.gcd(&n));
    let ns: Vec<i64> = ns.iter().map(|&n| n / g.max(1)).collect();
    for j in 0..ns.len() {
        let others: Vec<i64> = ns.iter().enumerate().filter(|&(i, _)| i != j).map(|(_, &n)| n).collect();
        let Some(x) = min_semigroup_multiple(ns[j], &others, d) else { continue };
        let floor_sum: i64 = ns.iter().map(|&n| x * ns[j] / n).sum();
        if floor_sum <= d {
            return (false, Some(Witness { j, x, floor_sum }));
        }
    }
    (true, None)
}

/// `lcm/n₁ + lcm/n₂ > d`.
pub fn two_edge_closed_form(n1: i64, n2: i64, d: i64) -> bool {
    let l = n1.lcm(&n2);
    l / n1 + l / n2 > d
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairReport {
    pub collapsed_edge: usize,
    pub label: String,
    pub edge_count: usize,
    pub cond_i: bool,
    pub cond_ii: bool,
    pub witness: Option<Witness>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenericityReport {
    pub degree: i64,
    pub pairs: Vec<PairReport>,
    pub certificates: Vec<Result<StrongBnCertificate>>,
    pub overall: bool,
}

impl GenericityReport {
    pub fn cond_iii(&self) -> bool {
        self.certificates.iter().all(|c| c.as_ref().is_ok_and(|c| c.status.is_certified()))
    }
}

fn chain_lengths(curve: &Curve, ce: usize) -> Vec<i64> {
    curve.tree().edge(ce).edges.iter().map(|&e| curve.edge(e).n).collect()
}

/// Conditions (I)–(III) for degree `d`.
pub fn check_curve(curve: &Curve, d: i64) -> GenericityReport {
    let pairs: Vec<PairReport> = curve
        .tree()
        .edges()
        .iter()
        .enumerate()
        .map(|(ce, cedge)| {
            let (cond_ii, witness) = multi_edge_test(&chain_lengths(curve, ce), d);
            PairReport {
                collapsed_edge: ce,
                label: curve.collapsed_label(ce),
                edge_count: cedge.multiplicity(),
                cond_i: cedge.multiplicity() <= 3,
                cond_ii,
                witness,
            }
        })
        .collect();
    let certificates = (0..curve.vertex_count()).map(|v| classify_component(curve, v)).collect();
    let mut report = GenericityReport { degree: d, pairs, certificates, overall: false };
    report.overall = report.pairs.iter().all(|p| p.cond_i && p.cond_ii) && report.cond_iii();
    report
}

/// Whether component `v` has one of the four admissible shapes.
fn component_form(curve: &Curve, v: usize) -> Result<bool> {
    let vx = &curve.graph().vertices()[v];
    let sizes = crate::curve::cluster_sizes(curve, v);
    let singles = sizes.iter().all(|&m| m == 1);
    Ok(match vx.genus {
        0 => (sizes.len() <= 2 && sizes.iter().all(|&m| m <= 3)) || singles,
        1 if singles && sizes.len() <= 1 => true,
        1 if singles && sizes.len() == 2 => match vx.torsion {
            TorsionFlag::None => true,
            TorsionFlag::Present => false,
            TorsionFlag::Unknown => return Err(Error::UnknownFlag { vertex: vx.id.clone(), flag: "torsion" }),
        },
        2 if sizes.is_empty() => true,
        2 if sizes == [1] => match vx.weierstrass {
            WeierstrassFlag::No => true,
            WeierstrassFlag::Yes => false,
            WeierstrassFlag::Unknown => return Err(Error::UnknownFlag { vertex: vx.id.clone(), flag: "weierstrass" }),
        },
        _ => false,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegenerationReport {
    /// Vertices failing every component form.
    pub bad_components: Vec<String>,
    /// Pairs failing condition (II) at `d = 2g − 2`.
    pub failing_pairs: Vec<(String, Witness)>,
}

impl DegenerationReport {
    pub fn passes(&self) -> bool {
        self.bad_components.is_empty() && self.failing_pairs.is_empty()
    }
}

/// Component shapes plus condition (II) with `d = 2g − 2`.
pub fn degeneration_check(curve: &Curve) -> Result<DegenerationReport> {
    let mut bad_components = Vec::new();
    for v in 0..curve.vertex_count() {
        if !component_form(curve, v)? {
            bad_components.push(curve.graph().vertex_id(v).to_string());
        }
    }
    let d = 2 * curve.genus() - 2;
    let mut failing_pairs = Vec::new();
    if d > 0 {
        for ce in 0..curve.tree().edges().len() {
            if let (false, Some(w)) = multi_edge_test(&chain_lengths(curve, ce), d) {
                failing_pairs.push((curve.collapsed_label(ce), w));
            }
        }
    }
    Ok(DegenerationReport { bad_components, failing_pairs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{validate, ChainGraph, EdgeSpec, Vertex};
    use crate::sample::chain;

    /// Direct check over all tuples with `|x_i| ≤ bound`.
    fn brute_force(ns: &[i64], d: i64, bound: i64) -> bool {
        let k = ns.len();
        let mut x = vec![-bound; k];
        loop {
            let positive: Vec<usize> = (0..k).filter(|&i| x[i] > 0).collect();
            let sum: i64 = x.iter().zip(ns).map(|(a, n)| a * n).sum();
            if sum == 0 && positive.len() == 1 {
                let j = positive[0];
                let fs: i64 = ns.iter().map(|&n| x[j] * ns[j] / n).sum();
                if fs <= d {
                    return false;
                }
            }
            let mut i = 0;
            loop {
                if i == k {
                    return true;
                }
                x[i] += 1;
                if x[i] <= bound {
                    break;
                }
                x[i] = -bound;
                i += 1;
            }
        }
    }

    #[test]
    fn examples() {
        for n in 2..8 {
            assert!(multi_edge_test(&[1, n, n * n], n).0);
        }
        assert_eq!(multi_edge_test(&[1, 1], 2), (false, Some(Witness { j: 0, x: 1, floor_sum: 2 })));
        assert!(multi_edge_test(&[2, 3], 4).0);
        assert!(multi_edge_test(&[5], 100).0);
    }

    #[test]
    fn agrees_with_brute_force() {
        for ns in [vec![1, 1], vec![2, 3], vec![1, 2, 4], vec![2, 3, 5], vec![3, 4], vec![1, 1, 1], vec![2, 2, 3]] {
            for d in 1..10 {
                assert_eq!(multi_edge_test(&ns, d).0, brute_force(&ns, d, 20), "ns={ns:?} d={d}");
            }
        }
    }

    #[test]
    fn closed_form_agrees() {
        for n1 in 1..15 {
            for n2 in 1..15 {
                for d in 1..30 {
                    assert_eq!(multi_edge_test(&[n1, n2], d).0, two_edge_closed_form(n1, n2, d));
                }
            }
        }
    }

    #[test]
    fn curve_checks() {
        let c = validate(&chain(&[1, 1, 1], 1)).unwrap();
        assert!(check_curve(&c, 17).overall);
        let c = validate(&chain(&[4], 1)).unwrap();
        let report = check_curve(&c, 2);
        assert!(!report.pairs[0].cond_i && !report.overall);
        let c = validate(&chain(&[2, 1, 2], 1)).unwrap();
        let report = check_curve(&c, 2 * c.genus() - 2);
        assert!(!report.overall);
        assert!(report.pairs[0].witness.is_some());
    }

    #[test]
    fn degeneration_examples() {
        let g3 = |n: [i64; 2]| {
            let vertices = (0..6).map(|i| Vertex::new(format!("v{i}"), 0)).collect();
            let mut edges = Vec::new();
            for (i, m) in [2, 1, 2, 1, 2].into_iter().enumerate() {
                let lengths = if m == 2 { n } else { [1, 1] };
                for (k, &len) in lengths.iter().take(m).enumerate() {
                    edges.push(EdgeSpec::new(format!("e{i}{k}"), format!("v{i}"), format!("v{}", i + 1), len));
                }
            }
            validate(&ChainGraph::new(vertices, edges).unwrap()).unwrap()
        };
        let good = g3([2, 3]);
        assert_eq!(good.genus(), 3);
        assert!(degeneration_check(&good).unwrap().passes());
        let trivial = degeneration_check(&g3([1, 1])).unwrap();
        assert!(!trivial.passes());
        assert_eq!(trivial.failing_pairs[0].1.floor_sum, 2);
    }

    #[test]
    fn genus_two_component_flags() {
        let build = |w: WeierstrassFlag| {
            let vs = vec![Vertex::new("a", 2).with_weierstrass(w), Vertex::new("b", 0)];
            validate(&ChainGraph::new(vs, vec![EdgeSpec::new("e", "a", "b", 1)]).unwrap()).unwrap()
        };
        assert!(!degeneration_check(&build(WeierstrassFlag::Yes)).unwrap().passes());
        assert!(degeneration_check(&build(WeierstrassFlag::No)).unwrap().passes());
        assert_eq!(degeneration_check(&build(WeierstrassFlag::Unknown)).unwrap_err().name(), "UnknownFlag");
    }
}
