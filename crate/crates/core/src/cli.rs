//! Command-line front end. [`run`] returns the exit code and the full
//! standard output so it can be tested without spawning a process.

use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::audit::{audit, rho, AuditOptions};
use crate::binary::{g12_exists, parse_points, range_check, BinaryCurve};
use crate::curve::{parse_curve, subdivide, validate, ChainGraph, Curve};
use crate::divisor::{divisor_sequence, pair_stats};
use crate::error::Error;
use crate::family::{build_twist_graph, concentrated_family};
use crate::genericity::{check_curve, degeneration_check};
use crate::multidegree::{concentrate, AdmissibleMultidegree};
use crate::strata::DEFAULT_BUDGET;
use crate::tropical::{bn_rank, chip_fire, dhar_reduce, Multigraph, RankLimits, TropicalDivisor};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Records,
}

#[derive(Debug, Parser)]
#[command(name = "llsdim", version, about = "Expected dimensions of limit linear series on pseudocompact-type curves")]
pub struct Cli {
    /// Output style.
    #[arg(long, value_enum, default_value = "records", global = true)]
    pub format: Format,
    /// Recorded in the output of commands that report it; no command draws
    /// random numbers.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct FamilyArgs {
    /// Curve file.
    pub file: String,
    #[arg(long)]
    pub degree: i64,
    /// Vertex the family is concentrated at (default: first vertex).
    #[arg(long)]
    pub at: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the pseudocompact-type hypothesis.
    Validate { file: String },
    /// Arithmetic genus.
    Genus { file: String },
    /// Multidegree of the given degree concentrated at a vertex.
    Concentrate(FamilyArgs),
    /// Concentrated family and the twists linking its members.
    Twistgraph(FamilyArgs),
    /// Divisor ladders along collapsed edges.
    Divseq {
        #[command(flatten)]
        family: FamilyArgs,
        /// Only edges at this vertex.
        #[arg(long)]
        toward: Option<String>,
    },
    /// Expected-dimension report over all strata.
    Audit {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        rank: usize,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
        /// Also list per-edge strata and raised flags.
        #[arg(long)]
        list_strata: bool,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// Chain-structure genericity conditions.
    Genericity {
        file: String,
        #[arg(long)]
        degree: i64,
    },
    /// Component shapes and condition (II) at degree 2g − 2.
    Degeneration { file: String },
    /// Chip firing on the subdivided dual graph.
    #[command(subcommand)]
    Tropical(TropicalCommand),
    /// Two rational components glued at g + 1 nodes.
    #[command(subcommand)]
    Binary(BinaryCommand),
    /// g + (r+1)(d − r − g).
    Rho {
        #[arg(long, allow_hyphen_values = true)]
        genus: i64,
        #[arg(long, allow_hyphen_values = true)]
        rank: i64,
        #[arg(long, allow_hyphen_values = true)]
        degree: i64,
    },
}

#[derive(Debug, Args)]
pub struct ChipArgs {
    /// Curve file; chains are subdivided.
    pub file: String,
    /// Chip counts as `label:count,...`; inserted vertices are `edge#k`.
    #[arg(long, default_value = "", allow_hyphen_values = true)]
    pub chips: String,
}

#[derive(Debug, Subcommand)]
pub enum TropicalCommand {
    /// Baker–Norine rank.
    Rank(ChipArgs),
    /// Reduced divisor with respect to a vertex.
    Reduce {
        #[command(flatten)]
        chips: ChipArgs,
        #[arg(long)]
        at: String,
    },
    /// Fire a set of vertices once.
    Fire {
        #[command(flatten)]
        chips: ChipArgs,
        /// Comma-separated labels.
        #[arg(long)]
        set: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum BinaryCommand {
    /// Whether a g¹₂ of multidegree (1,1) exists.
    G12 {
        #[arg(long, allow_hyphen_values = true)]
        points1: String,
        #[arg(long, allow_hyphen_values = true)]
        points2: String,
    },
    /// Weak range against the Caporaso range.
    Ranges {
        #[arg(long)]
        genus: i64,
    },
}

/// One output line: a kind tag and ordered fields.
struct Record {
    kind: &'static str,
    fields: Vec<(&'static str, String)>,
}

#[derive(Default)]
struct Report {
    records: Vec<Record>,
}

impl Report {
    fn push(&mut self, kind: &'static str, fields: Vec<(&'static str, String)>) {
        self.records.push(Record { kind, fields });
    }

    fn render(&self, format: Format) -> String {
        let mut out = String::new();
        match format {
            Format::Records => {
                for r in &self.records {
                    let body: Vec<String> = r.fields.iter().map(|(k, v)| format!("{k}={v}")).collect();
                    if r.kind.is_empty() {
                        writeln!(out, "{}", body.join(" ")).unwrap();
                    } else {
                        writeln!(out, "{} {}", r.kind, body.join(" ")).unwrap();
                    }
                }
            }
            Format::Text => {
                let mut i = 0;
                while i < self.records.len() {
                    let keys: Vec<&str> = self.records[i].fields.iter().map(|f| f.0).collect();
                    let kind = self.records[i].kind;
                    let mut j = i;
                    while j < self.records.len()
                        && self.records[j].kind == kind
                        && self.records[j].fields.iter().map(|f| f.0).eq(keys.iter().copied())
                    {
                        j += 1;
                    }
                    let group = &self.records[i..j];
                    let widths: Vec<usize> = (0..keys.len())
                        .map(|c| group.iter().map(|r| r.fields[c].1.len()).chain([keys[c].len()]).max().unwrap())
                        .collect();
                    if !out.is_empty() {
                        out.push('\n');
                    }
                    if !kind.is_empty() {
                        writeln!(out, "[{kind}]").unwrap();
                    }
                    let line = |cells: Vec<&str>| {
                        cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect::<Vec<_>>().join("  ")
                    };
                    writeln!(out, "{}", line(keys.clone()).trim_end()).unwrap();
                    for r in group {
                        writeln!(out, "{}", line(r.fields.iter().map(|f| f.1.as_str()).collect()).trim_end()).unwrap();
                    }
                    i = j;
                }
            }
        }
        out
    }
}

enum Failure {
    Engine(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Engine(e)
    }
}

type Outcome = std::result::Result<(i32, Report), Failure>;

fn read_graph(path: &str) -> std::result::Result<ChainGraph, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{path}: {e}")))?;
    Ok(parse_curve(&text)?)
}

fn read_curve(path: &str) -> std::result::Result<Curve, Failure> {
    Ok(validate(&read_graph(path)?)?)
}

fn join<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    let s: Vec<String> = items.into_iter().map(|x| x.to_string()).collect();
    if s.is_empty() {
        "-".into()
    } else {
        s.join(",")
    }
}

fn seed_vertex(curve: &Curve, at: &Option<String>) -> crate::Result<usize> {
    match at {
        Some(id) => curve.graph().vertex_index(id),
        None => Ok(0),
    }
}

fn weights_field(curve: &Curve, w: &AdmissibleMultidegree) -> String {
    join(w.weights.iter().enumerate().map(|(v, x)| format!("{}:{x}", curve.graph().vertex_id(v))))
}

fn mu_field(curve: &Curve, w: &AdmissibleMultidegree) -> String {
    join(w.mu.iter().enumerate().map(|(e, x)| format!("{}:{x}", curve.graph().edges()[e].id)))
}

fn bool_str(b: bool) -> String {
    b.to_string()
}

/// Parses argv (including the program name) and executes the command.
pub fn run<I, T>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => (0, e.to_string()),
                _ => {
                    let first = e.to_string().lines().next().unwrap_or("").to_string();
                    (2, format!("error=UsageError detail={:?}\n", first.trim_start_matches("error: ")))
                }
            };
        }
    };
    let format = cli.format;
    match execute(&cli) {
        Ok((code, report)) => (code, report.render(format)),
        Err(Failure::Engine(e)) => {
            let code = if e.is_condition_failure() { 1 } else { 2 };
            (code, format!("error={} detail={:?}\n", e.name(), e.to_string()))
        }
        Err(Failure::Io(msg)) => (2, format!("error=IoError detail={msg:?}\n")),
    }
}

fn execute(cli: &Cli) -> Outcome {
    let mut rep = Report::default();
    let code = match &cli.command {
        Command::Validate { file } => {
            let curve = read_curve(file)?;
            rep.push(
                "",
                vec![
                    ("valid", "true".into()),
                    ("vertices", curve.vertex_count().to_string()),
                    ("edges", curve.graph().edge_count().to_string()),
                    ("collapsed_edges", curve.tree().edges().len().to_string()),
                    ("genus", curve.genus().to_string()),
                ],
            );
            0
        }
        Command::Genus { file } => {
            let curve = read_curve(file)?;
            rep.push("", vec![("genus", curve.genus().to_string())]);
            0
        }
        Command::Concentrate(args) => {
            let curve = read_curve(&args.file)?;
            let v = seed_vertex(&curve, &args.at)?;
            let w = concentrate(&curve, args.degree, v)?;
            rep.push(
                "",
                vec![
                    ("at", curve.graph().vertex_id(v).into()),
                    ("degree", w.degree().to_string()),
                    ("weights", weights_field(&curve, &w)),
                    ("mu", mu_field(&curve, &w)),
                ],
            );
            0
        }
        Command::Twistgraph(args) => {
            let curve = read_curve(&args.file)?;
            let v = seed_vertex(&curve, &args.at)?;
            let family = concentrated_family(&curve, args.degree, v)?;
            let tg = build_twist_graph(&curve, &family)?;
            rep.push(
                "",
                vec![
                    ("at", curve.graph().vertex_id(v).into()),
                    ("degree", family.degree().to_string()),
                    ("nodes", tg.vertices.len().to_string()),
                    ("arcs", tg.arcs.len().to_string()),
                ],
            );
            for (u, w) in family.members.iter().enumerate() {
                rep.push(
                    "member",
                    vec![
                        ("vertex", curve.graph().vertex_id(u).into()),
                        ("weights", weights_field(&curve, w)),
                        ("mu", mu_field(&curve, w)),
                    ],
                );
            }
            for ce in 0..curve.tree().edges().len() {
                rep.push("link", vec![("edge", curve.collapsed_label(ce)), ("b", family.b(ce).to_string())]);
            }
            for (i, w) in tg.vertices.iter().enumerate() {
                rep.push(
                    "node",
                    vec![("id", i.to_string()), ("weights", weights_field(&curve, w)), ("mu", mu_field(&curve, w))],
                );
            }
            for a in &tg.arcs {
                rep.push(
                    "arc",
                    vec![
                        ("from", a.from.to_string()),
                        ("to", a.to.to_string()),
                        ("edge", curve.collapsed_label(a.collapsed_edge)),
                        ("twist_at", curve.graph().vertex_id(a.vertex).into()),
                    ],
                );
            }
            0
        }
        Command::Divseq { family: args, toward } => {
            let curve = read_curve(&args.file)?;
            let v = seed_vertex(&curve, &args.at)?;
            let family = concentrated_family(&curve, args.degree, v)?;
            let toward = toward.as_ref().map(|id| curve.graph().vertex_index(id)).transpose()?;
            for (ce, cedge) in curve.tree().edges().iter().enumerate() {
                if toward.is_some_and(|t| !cedge.contains(t)) {
                    continue;
                }
                let label = curve.collapsed_label(ce);
                let mut seqs = Vec::new();
                for side in cedge.ends {
                    let s = divisor_sequence(&curve, &family, ce, side)?;
                    let incs = s.increments.iter().map(|inc| {
                        if inc.is_empty() {
                            "0".to_string()
                        } else {
                            inc.iter().map(|&e| curve.graph().edges()[e].id.clone()).collect::<Vec<_>>().join("+")
                        }
                    });
                    rep.push(
                        "ladder",
                        vec![
                            ("edge", label.clone()),
                            ("side", curve.graph().vertex_id(side).into()),
                            ("b", s.ladder.b().to_string()),
                            ("degrees", join(s.ladder.degrees())),
                            ("critical", join(s.ladder.critical())),
                            ("increments", incs.collect::<Vec<_>>().join(";")),
                        ],
                    );
                    seqs.push(s);
                }
                let stats = pair_stats(&seqs[0].ladder, &seqs[1].ladder)?;
                rep.push(
                    "pair",
                    vec![
                        ("edge", label),
                        ("c", stats.c.to_string()),
                        ("gaps", join(&stats.gaps)),
                        ("critical", join(&stats.critical)),
                        ("literal_subscripts_agree", bool_str(stats.literal_subscripts_agree)),
                    ],
                );
            }
            0
        }
        Command::Audit { family: args, rank, budget, list_strata, workers } => {
            let curve = read_curve(&args.file)?;
            let v = seed_vertex(&curve, &args.at)?;
            let family = concentrated_family(&curve, args.degree, v)?;
            let report = audit(&curve, &family, AuditOptions { r: *rank, budget: *budget, workers: *workers })?;
            let mut head = vec![
                ("genus", report.genus.to_string()),
                ("degree", report.degree.to_string()),
                ("rank", report.r.to_string()),
                ("at", curve.graph().vertex_id(v).to_string()),
                ("rho", report.rho.to_string()),
                ("base", report.base_dim.to_string()),
                ("strata", report.strata.len().to_string()),
                ("refined_strata", report.strata.iter().filter(|s| s.refined).count().to_string()),
                ("max_expdim", report.max_expected_dim.map_or("none".into(), |x| x.to_string())),
            ];
            if let Some(seed) = cli.seed {
                head.push(("seed", seed.to_string()));
            }
            rep.push("", head);
            for e in &report.edges {
                rep.push(
                    "edge",
                    vec![
                        ("label", e.label.clone()),
                        ("m", e.multiplicity.to_string()),
                        ("b", e.stats.b.to_string()),
                        ("c", e.stats.c.to_string()),
                        ("gaps", join(&e.stats.gaps)),
                        ("critical", join(&e.stats.critical)),
                        ("strata", e.strata.len().to_string()),
                    ],
                );
            }
            for (vx, cert) in curve.graph().vertices().iter().zip(&report.certificates) {
                let fields = match cert {
                    Ok(c) => vec![
                        ("vertex", vx.id.clone()),
                        ("status", c.status.as_str().into()),
                        ("case", c.case.as_str().into()),
                    ],
                    Err(e) => vec![("vertex", vx.id.clone()), ("status", "unknown".into()), ("case", e.name().into())],
                };
                rep.push("certificate", fields);
            }
            if *list_strata {
                for e in &report.edges {
                    for (i, (s, ev)) in e.strata.iter().zip(&e.evals).enumerate() {
                        rep.push(
                            "edgestratum",
                            vec![
                                ("edge", e.label.clone()),
                                ("index", i.to_string()),
                                ("a1", join(&s.a1.values)),
                                ("a2", join(&s.a2.values)),
                                ("refined", bool_str(s.refined)),
                                ("vancodim", ev.vanishing_codim.to_string()),
                                ("gluecodim", ev.gluing_codim.to_string()),
                                ("lhs", ev.balance.lhs.to_string()),
                                ("rhs", ev.balance.rhs.to_string()),
                            ],
                        );
                    }
                }
            }
            for s in &report.strata {
                rep.push(
                    "stratum",
                    vec![
                        ("id", s.id.to_string()),
                        ("refined", bool_str(s.refined)),
                        ("base", s.base_dim.to_string()),
                        ("vancodim", s.vanishing_codim.to_string()),
                        ("gluecodim", s.gluing_codim.to_string()),
                        ("expdim", s.expected_dim.to_string()),
                        ("flags", s.flags.len().to_string()),
                    ],
                );
            }
            if *list_strata {
                for s in &report.strata {
                    for f in &s.flags {
                        rep.push(
                            "flag",
                            vec![
                                ("stratum", s.id.to_string()),
                                ("edge", curve.collapsed_label(f.collapsed_edge)),
                                ("conditions", f.conditions.to_string()),
                                ("torus_params", f.torus_params.to_string()),
                            ],
                        );
                    }
                }
            }
            0
        }
        Command::Genericity { file, degree } => {
            let curve = read_curve(file)?;
            let report = check_curve(&curve, *degree);
            for p in &report.pairs {
                let mut fields = vec![
                    ("pair", p.label.clone()),
                    ("m", p.edge_count.to_string()),
                    ("cond_i", bool_str(p.cond_i)),
                    ("cond_ii", bool_str(p.cond_ii)),
                ];
                if let Some(w) = p.witness {
                    let edge = curve.tree().edge(p.collapsed_edge).edges[w.j];
                    fields.push(("witness_edge", curve.graph().edges()[edge].id.clone()));
                    fields.push(("witness_x", w.x.to_string()));
                    fields.push(("witness_floor_sum", w.floor_sum.to_string()));
                }
                rep.push("", fields);
            }
            for (vx, cert) in curve.graph().vertices().iter().zip(&report.certificates) {
                let (status, case) = match cert {
                    Ok(c) => (c.status.as_str().to_string(), c.case.as_str().to_string()),
                    Err(e) => ("unknown".to_string(), e.name().to_string()),
                };
                rep.push("", vec![("component", vx.id.clone()), ("status", status), ("case", case)]);
            }
            rep.push(
                "",
                vec![
                    ("degree", degree.to_string()),
                    ("cond_iii", bool_str(report.cond_iii())),
                    ("generic", bool_str(report.overall)),
                ],
            );
            if report.overall {
                0
            } else {
                1
            }
        }
        Command::Degeneration { file } => {
            let curve = read_curve(file)?;
            let report = degeneration_check(&curve)?;
            for id in &report.bad_components {
                rep.push("", vec![("component", id.clone()), ("form", "none".into())]);
            }
            for (label, w) in &report.failing_pairs {
                rep.push("", vec![("pair", label.clone()), ("witness_floor_sum", w.floor_sum.to_string())]);
            }
            rep.push(
                "",
                vec![
                    ("genus", curve.genus().to_string()),
                    ("degree", (2 * curve.genus() - 2).to_string()),
                    ("general", bool_str(report.passes())),
                ],
            );
            if report.passes() {
                0
            } else {
                1
            }
        }
        Command::Tropical(cmd) => tropical(cmd, &mut rep)?,
        Command::Binary(BinaryCommand::G12 { points1, points2 }) => {
            let curve = BinaryCurve::new(parse_points(points1)?, parse_points(points2)?)?;
            rep.push("", vec![("g", curve.g.to_string()), ("g12_exists", bool_str(g12_exists(&curve)))]);
            0
        }
        Command::Binary(BinaryCommand::Ranges { genus }) => {
            if *genus < 2 {
                return Err(Error::InvalidArgument("genus must be at least 2".into()).into());
            }
            let ok = range_check(*genus);
            rep.push("", vec![("genus", genus.to_string()), ("contained", bool_str(ok))]);
            if ok {
                0
            } else {
                1
            }
        }
        Command::Rho { genus, rank, degree } => {
            rep.push("", vec![("rho", rho(*genus, *rank, *degree).to_string())]);
            0
        }
    };
    Ok((code, rep))
}

fn parse_chips(g: &Multigraph, spec: &str) -> crate::Result<TropicalDivisor> {
    let mut d = TropicalDivisor::zero(g.vertex_count());
    for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (label, count) = item
            .rsplit_once(':')
            .ok_or_else(|| Error::InvalidArgument(format!("expected label:count, got `{item}`")))?;
        let count: i64 = count.parse().map_err(|_| Error::InvalidArgument(format!("bad chip count `{count}`")))?;
        d.chips[g.label_index(label)?] += count;
    }
    Ok(d)
}

fn chips_field(g: &Multigraph, d: &TropicalDivisor) -> String {
    join(g.labels().iter().zip(&d.chips).map(|(l, c)| format!("{l}:{c}")))
}

fn tropical(cmd: &TropicalCommand, rep: &mut Report) -> std::result::Result<i32, Failure> {
    let args = match cmd {
        TropicalCommand::Rank(a) => a,
        TropicalCommand::Reduce { chips, .. } | TropicalCommand::Fire { chips, .. } => chips,
    };
    let graph = read_graph(&args.file)?;
    let g = Multigraph::from_subdivided(&subdivide(&graph))?;
    let d = parse_chips(&g, &args.chips)?;
    match cmd {
        TropicalCommand::Rank(_) => {
            let r = bn_rank(&g, &d, RankLimits::default())?;
            rep.push(
                "",
                vec![("rank", r.to_string()), ("degree", d.degree().to_string()), ("genus", g.genus().to_string())],
            );
        }
        TropicalCommand::Reduce { at, .. } => {
            let q = g.label_index(at)?;
            let reduced = dhar_reduce(&g, &d, q)?;
            rep.push("", vec![("q", at.clone()), ("chips", chips_field(&g, &reduced))]);
        }
        TropicalCommand::Fire { set, .. } => {
            let mut inside = vec![false; g.vertex_count()];
            for label in set.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                inside[g.label_index(label)?] = true;
            }
            rep.push("", vec![("chips", chips_field(&g, &chip_fire(&g, &d, &inside)))]);
        }
    }
    Ok(0)
}
