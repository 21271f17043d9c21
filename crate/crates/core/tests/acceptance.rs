//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits nonzero if any criterion fails.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use llsdim::audit::{audit, combin_balance, degree_identity, rho, AuditOptions};
use llsdim::binary::{g12_exists, gluing_ledger, parse_points, range_check, BinaryCurve};
use llsdim::curve::{subdivide, validate};
use llsdim::divisor::{edge_pair, EdgePairStats};
use llsdim::family::{concentrated_family, ConcentratedFamily};
use llsdim::genericity::{multi_edge_test, two_edge_closed_form};
use llsdim::multidegree::{twist, twist_in_place, AdmissibleMultidegree};
use llsdim::sample::{binary_graph, chain, curve_from, random_curve, random_multigraph, GraphShape};
use llsdim::strata::{edge_strata, enumerate_sequences, DEFAULT_BUDGET};
use llsdim::tropical::{
    bn_rank, chip_fire, dhar_reduce, firing_set_for_twist, is_reduced, linearly_equivalent, to_divisor, Multigraph,
    RankLimits, TropicalDivisor,
};
use llsdim::{Curve, ProjectivePoint};

const SEED: u64 = 0x5eed_2024;
/// Wall-clock limit for the exhaustive inequality sweep.
const SWEEP_LIMIT: Duration = Duration::from_secs(60);

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn all_gap_vectors(len: usize, max: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..=max).map(move |f| {
                    let mut w = v.clone();
                    w.push(f);
                    w
                })
            })
            .collect();
    }
    out
}

fn criterion_1() -> Verdict {
    let start = Instant::now();
    let (mut configs, mut strata, mut refined) = (0usize, 0usize, 0usize);
    for b in 0..=4usize {
        for gaps in all_gap_vectors(b + 1, 3) {
            let stats = EdgePairStats::from_gaps(&gaps);
            configs += 1;
            for r in 0..=3usize {
                let side1 = enumerate_sequences(&stats.near, r, stats.c, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
                let side2 = enumerate_sequences(&stats.far, r, stats.c, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
                for a1 in &side1 {
                    for a2 in &side2 {
                        let Some(is_refined) = llsdim::strata::compatibility(&stats, a1, a2) else { continue };
                        let s = llsdim::strata::EdgeStratum { a1: a1.clone(), a2: a2.clone(), refined: is_refined };
                        let bal = combin_balance(&stats, &s).map_err(|e| e.to_string())?;
                        ensure(bal.lhs >= bal.rhs && (bal.lhs == bal.rhs) == is_refined, || {
                            format!("gaps={gaps:?} a1={:?} a2={:?}", a1.values, a2.values)
                        })?;
                        strata += 1;
                        refined += is_refined as usize;
                    }
                }
            }
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < SWEEP_LIMIT, || format!("sweep took {elapsed:?}"))?;
    ensure(refined > 0 && refined < strata, || "sweep is degenerate".into())?;
    Ok(format!("{configs} ladders, {strata} strata ({refined} refined), 0 violations, {:.1}s", elapsed.as_secs_f64()))
}

fn random_multidegree(rng: &mut ChaCha8Rng, curve: &Curve) -> AdmissibleMultidegree {
    let g = curve.graph();
    let weights = (0..g.vertex_count()).map(|_| rng.gen_range(-3..=5)).collect();
    let mu = g.edges().iter().map(|e| rng.gen_range(0..e.n)).collect();
    AdmissibleMultidegree::new(g, weights, mu).unwrap()
}

fn criterion_2() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let shape = GraphShape { max_vertices: 8, max_multiplicity: 3, max_chain: 6, max_genus: 1 };
    let mut steps = 0usize;
    for case in 0..1000 {
        let curve = random_curve(&mut rng, shape);
        let mut w = random_multidegree(&mut rng, &curve);
        let d = w.degree();
        let ces = curve.tree().edges().len();
        for _ in 0..20 {
            if ces == 0 {
                break;
            }
            let ce = rng.gen_range(0..ces);
            let v = curve.tree().edge(ce).ends[rng.gen_range(0..2)];
            let before = w.clone();
            twist_in_place(&curve, &mut w, ce, v).unwrap();
            let back = twist(&curve, &w, ce, curve.tree().edge(ce).other(v)).unwrap();
            ensure(w.degree() == d, || format!("case {case}: degree changed"))?;
            ensure(back == before, || format!("case {case}: twists are not inverse"))?;
            steps += 1;
        }
    }
    Ok(format!("1000 sequences, {steps} twists, degree conserved and inverses exact"))
}

fn random_family(rng: &mut ChaCha8Rng, shape: GraphShape) -> (Curve, ConcentratedFamily) {
    let curve = random_curve(rng, shape);
    let d = rng.gen_range(0..=10);
    let v = rng.gen_range(0..curve.vertex_count());
    let family = concentrated_family(&curve, d, v).expect("nonnegative degree gives a family");
    (curve, family)
}

fn criterion_3() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 3);
    let shape = GraphShape { max_vertices: 6, max_multiplicity: 3, max_chain: 4, max_genus: 1 };
    let mut checks = 0usize;
    for case in 0..150 {
        let (curve, family) = random_family(&mut rng, shape);
        let sub = subdivide(curve.graph());
        let g = Multigraph::from_subdivided(&sub).unwrap();
        for w in &family.members {
            for (ce, cedge) in curve.tree().edges().iter().enumerate() {
                for v in cedge.ends {
                    let set = firing_set_for_twist(&curve, &sub, w, ce, v).unwrap();
                    let lhs = to_divisor(&sub, &twist(&curve, w, ce, v).unwrap());
                    let rhs = chip_fire(&g, &to_divisor(&sub, w), &set);
                    ensure(lhs == rhs, || format!("case {case}: twist and firing disagree"))?;
                    checks += 1;
                }
            }
        }
    }
    Ok(format!("150 families, {checks} twist/firing pairs equal"))
}

fn criterion_4() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 4);
    let shape = GraphShape { max_vertices: 7, max_multiplicity: 3, max_chain: 5, max_genus: 2 };
    for case in 0..200 {
        let (curve, family) = random_family(&mut rng, shape);
        family.check(&curve).map_err(|e| format!("case {case}: {e}"))?;
        let stats: Vec<EdgePairStats> = (0..curve.tree().edges().len())
            .map(|ce| edge_pair(&curve, &family, ce).map(|p| p.2))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        degree_identity(&curve, &family, &stats).map_err(|e| format!("case {case}: {e}"))?;
    }
    Ok("200 families concentrated, nonnegative, twist-linked; degree identity exact".into())
}

fn criterion_5() -> Verdict {
    ensure(rho(3, 1, 2) == -1, || "rho(3,1,2)".into())?;
    ensure(rho(4, 1, 3) == 0, || "rho(4,1,3)".into())?;
    let curve = curve_from(&[("u", 0), ("v", 0)], &[("e", "u", "v", 1)]);
    let family = concentrated_family(&curve, 2, 0).unwrap();
    let report = audit(&curve, &family, AuditOptions::new(1)).map_err(|e| e.to_string())?;
    ensure(report.rho == 2 && report.max_expected_dim == Some(2), || format!("{:?}", report.max_expected_dim))?;
    let attaining = report.strata.iter().filter(|s| s.refined && s.expected_dim == 2).count();
    ensure(attaining > 0, || "no refined stratum attains rho".into())?;
    Ok(format!("rho(3,1,2)=-1, rho(4,1,3)=0, compact pair max expdim 2 on {attaining} refined strata"))
}

fn criterion_6() -> Verdict {
    let curve = validate(&chain(&[2, 1, 2, 1, 2], 1)).unwrap();
    let family = concentrated_family(&curve, 2, 0).unwrap();
    let report = audit(&curve, &family, AuditOptions::new(1)).map_err(|e| e.to_string())?;
    ensure(curve.genus() == 3 && report.rho == -1, || format!("genus {} rho {}", curve.genus(), report.rho))?;
    let target = report
        .strata
        .iter()
        .find(|s| report.selection(s).iter().all(|e| e.a1.values == [0, 2] && e.a2.values == [0, 2]))
        .ok_or("the (0,2) stratum is missing")?;
    let doubles: Vec<usize> = report.edges.iter().filter(|e| e.multiplicity == 2).map(|e| e.collapsed_edge).collect();
    ensure(target.flags.len() == doubles.len(), || format!("{} flags", target.flags.len()))?;
    for f in &target.flags {
        ensure(doubles.contains(&f.collapsed_edge) && f.conditions == 2 && f.torus_params == 1, || format!("{f:?}"))?;
    }
    Ok(format!(
        "genus 3, rho=-1, stratum {} with (0,2) everywhere has expdim {}, flags on {} double edges (2 vs 1)",
        target.id,
        target.expected_dim,
        doubles.len()
    ))
}

fn criterion_7() -> Verdict {
    for d in 1..=20i64 {
        for n in d.max(1)..=20 {
            ensure(multi_edge_test(&[1, n, n * n], d).0, || format!("(1,{n},{}) at d={d}", n * n))?;
        }
        if d >= 2 {
            ensure(!multi_edge_test(&[1, 1], d).0, || format!("(1,1) passed at d={d}"))?;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 7);
    for _ in 0..500 {
        let (n1, n2, d) = (rng.gen_range(1..=50), rng.gen_range(1..=50), rng.gen_range(1..=100));
        ensure(multi_edge_test(&[n1, n2], d).0 == two_edge_closed_form(n1, n2, d), || format!("({n1},{n2}) d={d}"))?;
    }
    let mut scaled = 0;
    for _ in 0..200 {
        let k = rng.gen_range(1..=3);
        let ns: Vec<i64> = (0..k).map(|_| rng.gen_range(1..=12)).collect();
        let d = rng.gen_range(1..=30);
        let base = multi_edge_test(&ns, d).0;
        for c in 1..=5 {
            let cns: Vec<i64> = ns.iter().map(|n| n * c).collect();
            ensure(multi_edge_test(&cns, d).0 == base, || format!("{ns:?} scaled by {c}"))?;
            scaled += 1;
        }
    }
    Ok(format!("(1,n,n^2) passes, (1,1) fails, closed form agrees on 500, {scaled} scalings invariant"))
}

fn criterion_8() -> Verdict {
    for g in 2..=10i64 {
        let pts: Vec<ProjectivePoint> = (0..=g).map(ProjectivePoint::from_i64).collect();
        let c = BinaryCurve::new(pts.clone(), pts).map_err(|e| e.to_string())?;
        ensure(g12_exists(&c), || format!("self-glued g={g}"))?;
    }
    let c = BinaryCurve::new(parse_points("0,1,inf,2").unwrap(), parse_points("0,1,inf,3").unwrap()).unwrap();
    ensure(!g12_exists(&c), || "(0,1,inf,2)/(0,1,inf,3) admits a g12".into())?;
    for g in 2..=50 {
        ensure(range_check(g), || format!("range containment fails at g={g}"))?;
    }
    let mut reductions = 0;
    let mut ledgers = 0;
    for g in 2..=5usize {
        let curve = validate(&binary_graph(g, &[1])).unwrap();
        let mut families = Vec::new();
        for d1 in 0..g as i64 {
            for d2 in 0..g as i64 {
                let w = AdmissibleMultidegree::new(curve.graph(), vec![d1, d2], vec![0; g + 1]).unwrap();
                families
                    .push(ConcentratedFamily::from_members(&curve, 0, vec![w.clone(), w]).map_err(|e| e.to_string())?);
            }
        }
        for d in 0..=2 * g as i64 {
            families.push(concentrated_family(&curve, d, 0).unwrap());
        }
        for family in &families {
            let (_, _, stats) = edge_pair(&curve, family, 0).unwrap();
            for r in 0..=2 {
                let strata =
                    edge_strata(&stats, r, family.local_degree(0), family.local_degree(1), DEFAULT_BUDGET).unwrap();
                for s in &strata {
                    let ledger = gluing_ledger(&curve, family, s, r).map_err(|e| format!("g={g}: {e}"))?;
                    ledgers += 1;
                    if let Some(red) = ledger.reduction {
                        let top = g as i64 - 1;
                        ensure((0..=top).contains(&red.degrees.0) && (0..=top).contains(&red.degrees.1), || {
                            format!("reduction {:?} outside [0,{top}]", red.degrees)
                        })?;
                        reductions += 1;
                    }
                }
            }
        }
    }
    ensure(reductions > 0, || "no reductions exercised".into())?;
    Ok(format!("g12 on self-glued g=2..10, (0,1,inf,2)/(0,1,inf,3) false, ranges g<=50, {reductions}/{ledgers} ledgers reduce into [0,g-1]"))
}

fn criterion_9() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 9);
    let limits = RankLimits { max_vertices: 6, max_degree: 20 };
    let mut cases = 0;
    while cases < 240 {
        let nv = rng.gen_range(1..=6);
        let ne = rng.gen_range(nv - 1..=9.max(nv - 1));
        let g = Multigraph::from_edge_list(nv, &random_multigraph(&mut rng, nv, ne)).unwrap();
        let target = rng.gen_range(-2..=6);
        let mut d = TropicalDivisor::zero(nv);
        for _ in 0..target.max(0) {
            d.chips[rng.gen_range(0..nv)] += 1;
        }
        if target < 0 || rng.gen_bool(0.3) {
            let v = rng.gen_range(0..nv);
            d.chips[v] -= 1;
            d.chips[rng.gen_range(0..nv)] += rng.gen_range(0..=1);
        }
        if d.degree() > 6 {
            continue;
        }
        let k = g.canonical();
        let r = bn_rank(&g, &d, limits).map_err(|e| e.to_string())?;
        let rk = bn_rank(&g, &k.sub(&d), limits).map_err(|e| e.to_string())?;
        ensure(r - rk == d.degree() - g.genus() + 1, || format!("RR fails: {:?} on {:?}", d.chips, g.edges()))?;
        let q = rng.gen_range(0..nv);
        let red = dhar_reduce(&g, &d, q).map_err(|e| e.to_string())?;
        ensure(is_reduced(&g, &red, q), || format!("{:?} not reduced", red.chips))?;
        ensure(linearly_equivalent(&g, &red, &d), || format!("{:?} not equivalent", red.chips))?;
        cases += 1;
    }
    Ok(format!("{cases} divisors: Riemann-Roch holds, reductions reduced and equivalent"))
}

fn criterion_10() -> Verdict {
    let input = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/alternating_chain_23.curve");
    let mut outputs = Vec::new();
    for workers in ["1", "2", "8"] {
        let out = Command::new(env!("CARGO_BIN_EXE_llsdim"))
            .args([
                "audit",
                input,
                "--degree",
                "4",
                "--rank",
                "1",
                "--seed",
                "11",
                "--list-strata",
                "--workers",
                workers,
            ])
            .output()
            .map_err(|e| e.to_string())?;
        ensure(out.status.code() == Some(0), || format!("exit {:?} with {workers} workers", out.status.code()))?;
        outputs.push(out.stdout);
    }
    ensure(outputs[0] == outputs[1] && outputs[1] == outputs[2], || "outputs differ".into())?;
    let lines = outputs[0].iter().filter(|&&b| b == b'\n').count();
    ensure(lines > 100, || format!("only {lines} lines"))?;
    Ok(format!("audit output identical for 1, 2, 8 workers ({} bytes, {lines} lines)", outputs[0].len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("inequality exhaustive", criterion_1),
        ("twist calculus", criterion_2),
        ("tropical dictionary", criterion_3),
        ("concentrated families", criterion_4),
        ("rho spot values", criterion_5),
        ("alternating genus-3 chain", criterion_6),
        ("genericity", criterion_7),
        ("binary curves", criterion_8),
        ("rank oracle", criterion_9),
        ("determinism", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
