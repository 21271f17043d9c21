//! The expected-dimension ledger: ρ, the degree identity, the per-edge
//! combinatorial balance, and the per-stratum report.

use rayon::prelude::*;

use crate::curve::{classify_component, Curve, StrongBnCertificate};
use crate::divisor::{edge_pair, EdgePairStats};
use crate::error::{Error, Result};
use crate::family::ConcentratedFamily;
use crate::strata::{edge_strata, schubert_codim, EdgeStratum, MultivanishingSequence, DEFAULT_BUDGET};

/// `g + (r+1)(d − r − g)`.
pub fn rho(g: i64, r: i64, d: i64) -> i64 {
    g + (r + 1) * (d - r - g)
}

/// ρ lowered by the Schubert codimension of each imposed sequence.
pub fn rho_with_vanishing(g: i64, r: i64, d: i64, constraints: &[MultivanishingSequence]) -> i64 {
    rho(g, r, d) - constraints.iter().map(schubert_codim).sum::<i64>()
}

/// `Σ_v d_v − Σ_e c_e + |E(Γ)|`.
pub fn degree_ledger(curve: &Curve, family: &ConcentratedFamily, stats: &[EdgePairStats]) -> i64 {
    let dv: i64 = (0..curve.vertex_count()).map(|v| family.local_degree(v)).sum();
    let c: i64 = stats.iter().map(|s| s.c).sum();
    dv - c + curve.graph().edge_count() as i64
}

pub fn degree_identity(curve: &Curve, family: &ConcentratedFamily, stats: &[EdgePairStats]) -> Result<()> {
    let d = family.degree();
    let ledger = degree_ledger(curve, family, stats);
    if d != ledger {
        return Err(Error::IdentityViolation { d, ledger });
    }
    Ok(())
}

/// Both sides of the combinatorial inequality for one edge stratum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Balance {
    pub lhs: i64,
    pub rhs: i64,
    /// `g_j`, indexed by `j = 0..=b` (zero off the critical set).
    pub g: Vec<i64>,
    /// `g_j(f_j + g_j − r¹_j − r²_{b−j})`, indexed like `g`.
    pub summands: Vec<i64>,
}

impl Balance {
    /// Gluing codimension: the summands with negatives replaced by zero.
    pub fn clamped(&self) -> i64 {
        self.summands.iter().map(|&s| s.max(0)).sum()
    }
}

fn choose2(k: usize) -> i64 {
    (k * k.saturating_sub(1) / 2) as i64
}

/// Evaluates both sides and checks `lhs ≥ rhs`, with equality exactly when
/// the stratum is refined.
pub fn combin_balance(stats: &EdgePairStats, stratum: &EdgeStratum) -> Result<Balance> {
    let b = stats.b;
    let (r1, r2) = (&stratum.a1.mult, &stratum.a2.mult);
    let r = stratum.a1.values.len() as i64 - 1;
    let mut g = vec![0i64; b + 1];
    let mut summands = vec![0i64; b + 1];
    let mut carry = 0i64;
    let mut binomials = 0i64;
    for &j in &stats.critical {
        let (x, y) = (r1[j] as i64, r2[b - j] as i64);
        g[j] = x + carry;
        summands[j] = g[j] * (stats.gap(j) + g[j] - x - y);
        carry += x - y;
        binomials += choose2(r1[j]) + choose2(r2[b - j]);
    }
    let lhs = summands.iter().sum();
    let paired: i64 = stratum.a1.values.iter().zip(stratum.a2.values.iter().rev()).map(|(x, y)| x + y).sum();
    let rhs = (r + 1) * (stats.c - 1) - paired - binomials;
    if lhs < rhs || (lhs == rhs) != stratum.refined {
        return Err(Error::LemmaViolation(format!(
            "gaps={:?} a1={:?} a2={:?} refined={} lhs={lhs} rhs={rhs}",
            stats.gaps, stratum.a1.values, stratum.a2.values, stratum.refined
        )));
    }
    Ok(Balance { lhs, rhs, g, summands })
}

/// Gluing conditions on one collapsed edge against its free torus parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BudgetFlag {
    pub collapsed_edge: usize,
    pub conditions: i64,
    /// `m − 1` for `m` underlying edges.
    pub torus_params: i64,
}

impl BudgetFlag {
    pub fn raised(&self) -> bool {
        self.conditions > self.torus_params
    }
}

/// Ledger entries of one edge stratum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeEval {
    pub vanishing_codim: i64,
    pub balance: Balance,
    pub gluing_codim: i64,
    pub flag: BudgetFlag,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeReport {
    pub collapsed_edge: usize,
    pub label: String,
    pub multiplicity: usize,
    pub stats: EdgePairStats,
    pub strata: Vec<EdgeStratum>,
    pub evals: Vec<EdgeEval>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StratumReport {
    pub id: usize,
    /// Index into each edge's stratum list.
    pub selection: Vec<usize>,
    pub base_dim: i64,
    pub vanishing_codim: i64,
    pub gluing_codim: i64,
    pub expected_dim: i64,
    pub refined: bool,
    /// Raised flags only.
    pub flags: Vec<BudgetFlag>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimensionReport {
    pub genus: i64,
    pub degree: i64,
    pub r: usize,
    pub rho: i64,
    pub base_dim: i64,
    pub edges: Vec<EdgeReport>,
    pub strata: Vec<StratumReport>,
    pub max_expected_dim: Option<i64>,
    /// Per vertex; an `UnknownFlag` error when a flag left the case open.
    pub certificates: Vec<Result<StrongBnCertificate>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AuditOptions {
    pub r: usize,
    pub budget: usize,
    pub workers: usize,
}

impl AuditOptions {
    pub fn new(r: usize) -> Self {
        AuditOptions { r, budget: DEFAULT_BUDGET, workers: 1 }
    }
}

/// `Σ_v (g_v + (r+1)(d_v − r − g_v)) + (|E| − |V| + 1)`.
pub fn base_dim(curve: &Curve, family: &ConcentratedFamily, r: i64) -> i64 {
    let graph = curve.graph();
    let local: i64 = graph
        .vertices()
        .iter()
        .enumerate()
        .map(|(v, vx)| {
            let gv = vx.genus as i64;
            gv + (r + 1) * (family.local_degree(v) - r - gv)
        })
        .sum();
    local + graph.edge_count() as i64 - graph.vertex_count() as i64 + 1
}

fn edge_report(curve: &Curve, family: &ConcentratedFamily, ce: usize, opts: &AuditOptions) -> Result<EdgeReport> {
    let cedge = curve.tree().edge(ce);
    let (_, _, stats) = edge_pair(curve, family, ce)?;
    let [u, v] = cedge.ends;
    let strata = edge_strata(&stats, opts.r, family.local_degree(u), family.local_degree(v), opts.budget)?;
    let torus_params = cedge.multiplicity() as i64 - 1;
    let evals = strata
        .iter()
        .map(|s| {
            let balance = combin_balance(&stats, s)?;
            let gluing_codim = balance.clamped();
            Ok(EdgeEval {
                vanishing_codim: schubert_codim(&s.a1) + schubert_codim(&s.a2),
                gluing_codim,
                flag: BudgetFlag { collapsed_edge: ce, conditions: gluing_codim, torus_params },
                balance,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EdgeReport {
        collapsed_edge: ce,
        label: curve.collapsed_label(ce),
        multiplicity: cedge.multiplicity(),
        stats,
        strata,
        evals,
    })
}

/// Mixed-radix digits of `id`, last edge fastest.
fn decode(mut id: usize, radix: &[usize]) -> Vec<usize> {
    let mut out = vec![0; radix.len()];
    for k in (0..radix.len()).rev() {
        out[k] = id % radix[k];
        id /= radix[k];
    }
    out
}

/// Full expected-dimension report over every global stratum.
///
/// Output order is the lexicographic order of the per-edge selections and
/// does not depend on `opts.workers`.
pub fn audit(curve: &Curve, family: &ConcentratedFamily, opts: AuditOptions) -> Result<DimensionReport> {
    family.check(curve)?;
    let r = opts.r as i64;
    let edges =
        (0..curve.tree().edges().len()).map(|ce| edge_report(curve, family, ce, &opts)).collect::<Result<Vec<_>>>()?;
    let stats: Vec<EdgePairStats> = edges.iter().map(|e| e.stats.clone()).collect();
    degree_identity(curve, family, &stats)?;

    let genus = curve.genus();
    let degree = family.degree();
    let rho = rho(genus, r, degree);
    let base = base_dim(curve, family, r);
    let radix: Vec<usize> = edges.iter().map(|e| e.strata.len()).collect();
    let total = radix
        .iter()
        .try_fold(1usize, |acc, &k| acc.checked_mul(k))
        .filter(|&t| t <= opts.budget)
        .ok_or(Error::EnumerationBudgetExceeded { budget: opts.budget })?;

    let evaluate = |id: usize| -> Result<StratumReport> {
        let selection = decode(id, &radix);
        let mut van = 0;
        let mut glue = 0;
        let mut slack = 0;
        let mut refined = true;
        let mut flags = Vec::new();
        for (edge, &k) in edges.iter().zip(&selection) {
            let ev = &edge.evals[k];
            van += ev.vanishing_codim;
            glue += ev.gluing_codim;
            slack += ev.balance.rhs - ev.gluing_codim;
            refined &= edge.strata[k].refined;
            if ev.flag.raised() {
                flags.push(ev.flag);
            }
        }
        let expected_dim = base - van - glue;
        if expected_dim != rho + slack {
            return Err(Error::LemmaViolation(format!(
                "stratum {id}: ledger gives {expected_dim}, rearranged form gives {}",
                rho + slack
            )));
        }
        if expected_dim > rho || (expected_dim == rho) != refined {
            return Err(Error::LemmaViolation(format!(
                "stratum {id}: expected dimension {expected_dim} against rho {rho}, refined={refined}"
            )));
        }
        Ok(StratumReport {
            id,
            selection,
            base_dim: base,
            vanishing_codim: van,
            gluing_codim: glue,
            expected_dim,
            refined,
            flags,
        })
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.workers.max(1))
        .build()
        .map_err(|e| Error::InvalidArgument(format!("worker pool: {e}")))?;
    let strata = pool.install(|| (0..total).into_par_iter().map(evaluate).collect::<Result<Vec<_>>>())?;

    let max_expected_dim = strata.iter().map(|s| s.expected_dim).max();
    let certificates = (0..curve.vertex_count()).map(|v| classify_component(curve, v)).collect();
    Ok(DimensionReport { genus, degree, r: opts.r, rho, base_dim: base, edges, strata, max_expected_dim, certificates })
}

impl DimensionReport {
    pub fn has_refined(&self) -> bool {
        self.strata.iter().any(|s| s.refined)
    }

    /// The sequences chosen on each collapsed edge by a global stratum.
    pub fn selection(&self, stratum: &StratumReport) -> Vec<&EdgeStratum> {
        self.edges.iter().zip(&stratum.selection).map(|(e, &k)| &e.strata[k]).collect()
    }
}
