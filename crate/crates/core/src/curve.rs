//! Dual graphs of nodal curves with chain structure.
//!
//! A [`ChainGraph`] is a directed multigraph without loops whose edges carry a
//! positive chain length `n(e)`. A graph is of *pseudocompact type* when merging
//! parallel edges yields a tree; [`validate`] checks this and returns a
//! [`Curve`] carrying the collapsed tree, which every downstream computation
//! works from.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Coarse geometric class of a component, as supplied by the user.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ComponentClass {
    Rational,
    Elliptic,
    Genus2,
    General,
}

/// Whether the difference of the two nodes on an elliptic component is torsion
/// of small order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TorsionFlag {
    None,
    Present,
    Unknown,
}

/// Whether the node on a genus-2 component is a Weierstrass point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WeierstrassFlag {
    No,
    Yes,
    Unknown,
}

macro_rules! keyword_enum {
    ($ty:ty, $what:literal, { $($kw:literal => $variant:expr),+ $(,)? }) => {
        impl FromStr for $ty {
            type Err = String;
            fn from_str(s: &str) -> std::result::Result<Self, String> {
                match s {
                    $($kw => Ok($variant),)+
                    other => Err(format!("unknown {} `{}`", $what, other)),
                }
            }
        }
        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                let s = match self { $(v if *v == $variant => $kw,)+ _ => unreachable!() };
                f.write_str(s)
            }
        }
    };
}

keyword_enum!(ComponentClass, "class", {
    "rational" => ComponentClass::Rational,
    "elliptic" => ComponentClass::Elliptic,
    "genus2" => ComponentClass::Genus2,
    "general" => ComponentClass::General,
});
keyword_enum!(TorsionFlag, "torsion flag", {
    "none" => TorsionFlag::None,
    "present" => TorsionFlag::Present,
    "unknown" => TorsionFlag::Unknown,
});
keyword_enum!(WeierstrassFlag, "weierstrass flag", {
    "no" => WeierstrassFlag::No,
    "yes" => WeierstrassFlag::Yes,
    "unknown" => WeierstrassFlag::Unknown,
});

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex {
    pub id: String,
    pub genus: u32,
    pub class: ComponentClass,
    pub torsion: TorsionFlag,
    pub weierstrass: WeierstrassFlag,
}

impl Vertex {
    /// A vertex with default metadata (`class=general`, unknown flags).
    pub fn new(id: impl Into<String>, genus: u32) -> Self {
        Vertex {
            id: id.into(),
            genus,
            class: ComponentClass::General,
            torsion: TorsionFlag::Unknown,
            weierstrass: WeierstrassFlag::Unknown,
        }
    }

    pub fn with_torsion(mut self, torsion: TorsionFlag) -> Self {
        self.torsion = torsion;
        self
    }

    pub fn with_weierstrass(mut self, weierstrass: WeierstrassFlag) -> Self {
        self.weierstrass = weierstrass;
        self
    }

    pub fn with_class(mut self, class: ComponentClass) -> Self {
        self.class = class;
        self
    }
}

/// Edge as written by the user, referring to vertices by id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeSpec {
    pub id: String,
    pub tail: String,
    pub head: String,
    pub n: i64,
}

impl EdgeSpec {
    pub fn new(id: impl Into<String>, tail: impl Into<String>, head: impl Into<String>, n: i64) -> Self {
        EdgeSpec { id: id.into(), tail: tail.into(), head: head.into(), n }
    }
}

/// Edge with resolved vertex indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub tail: usize,
    pub head: usize,
    pub n: i64,
}

impl Edge {
    /// `+1` if `v` is the tail, `-1` if the head, `None` otherwise.
    pub fn sigma(&self, v: usize) -> Option<i64> {
        if v == self.tail {
            Some(1)
        } else if v == self.head {
            Some(-1)
        } else {
            None
        }
    }

    pub fn other(&self, v: usize) -> usize {
        if v == self.tail {
            self.head
        } else {
            self.tail
        }
    }
}

/// Directed dual graph with chain structure.
///
/// Vertices and edges are kept sorted by id so that every derived output is
/// deterministic. Loops and chain lengths below one are rejected on
/// construction; the tree condition is checked by [`validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainGraph {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    index: BTreeMap<String, usize>,
}

impl ChainGraph {
    pub fn new(mut vertices: Vec<Vertex>, mut edges: Vec<EdgeSpec>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::EmptyGraph);
        }
        vertices.sort_by(|a, b| a.id.cmp(&b.id));
        let mut index = BTreeMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if index.insert(v.id.clone(), i).is_some() {
                return Err(Error::DuplicateId(v.id.clone()));
            }
        }
        edges.sort_by(|a, b| a.id.cmp(&b.id));
        let mut resolved = Vec::with_capacity(edges.len());
        for (k, e) in edges.iter().enumerate() {
            if k > 0 && edges[k - 1].id == e.id {
                return Err(Error::DuplicateId(e.id.clone()));
            }
            let tail = *index.get(&e.tail).ok_or_else(|| Error::UnknownVertex(e.tail.clone()))?;
            let head = *index.get(&e.head).ok_or_else(|| Error::UnknownVertex(e.head.clone()))?;
            if tail == head {
                return Err(Error::LoopEdge(e.id.clone()));
            }
            if e.n < 1 {
                return Err(Error::BadChainLength { edge: e.id.clone(), n: e.n });
            }
            resolved.push(Edge { id: e.id.clone(), tail, head, n: e.n });
        }
        if let Some(id) = index.keys().find(|id| resolved.iter().any(|e| &e.id == *id)) {
            return Err(Error::DuplicateId(id.clone()));
        }
        Ok(ChainGraph { vertices, edges: resolved, index })
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_index(&self, id: &str) -> Result<usize> {
        self.index.get(id).copied().ok_or_else(|| Error::UnknownVertex(id.to_string()))
    }

    pub fn vertex_id(&self, v: usize) -> &str {
        &self.vertices[v].id
    }

    /// Edge specs in id order; feeding them back to [`ChainGraph::new`]
    /// reproduces this graph.
    pub fn edge_specs(&self) -> Vec<EdgeSpec> {
        self.edges
            .iter()
            .map(|e| EdgeSpec::new(e.id.clone(), self.vertex_id(e.tail), self.vertex_id(e.head), e.n))
            .collect()
    }

    /// Same graph with every chain length replaced by `f(edge)`.
    pub fn with_chain_lengths(&self, mut f: impl FnMut(&Edge) -> i64) -> Result<ChainGraph> {
        let specs = self
            .edges
            .iter()
            .map(|e| EdgeSpec::new(e.id.clone(), self.vertex_id(e.tail), self.vertex_id(e.head), f(e)))
            .collect();
        ChainGraph::new(self.vertices.clone(), specs)
    }

    /// First Betti number plus the component genera, assuming connectivity.
    pub fn arithmetic_genus(&self) -> i64 {
        let sum: i64 = self.vertices.iter().map(|v| v.genus as i64).sum();
        sum + self.edges.len() as i64 - self.vertices.len() as i64 + 1
    }

    pub fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.vertices.len()];
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for e in &self.edges {
            adj[e.tail].push(e.head);
            adj[e.head].push(e.tail);
        }
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &u in &adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

/// One edge of the collapsed graph: all parallel edges between a vertex pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollapsedEdge {
    /// Endpoints, smaller vertex index first.
    pub ends: [usize; 2],
    /// Underlying edge indices, in id order.
    pub edges: Vec<usize>,
}

impl CollapsedEdge {
    pub fn multiplicity(&self) -> usize {
        self.edges.len()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.ends[0] == v || self.ends[1] == v
    }

    pub fn other(&self, v: usize) -> usize {
        if self.ends[0] == v {
            self.ends[1]
        } else {
            self.ends[0]
        }
    }
}

/// The tree obtained by merging parallel edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollapsedTree {
    edges: Vec<CollapsedEdge>,
    adjacency: Vec<Vec<(usize, usize)>>,
}

/// Breadth-first layout of the collapsed tree from a root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedTree {
    pub root: usize,
    /// Vertices sorted by (distance from root, vertex index).
    pub order: Vec<usize>,
    pub distance: Vec<usize>,
    /// `(parent vertex, collapsed edge to parent)`, `None` for the root.
    pub parent: Vec<Option<(usize, usize)>>,
}

impl CollapsedTree {
    pub fn edges(&self) -> &[CollapsedEdge] {
        &self.edges
    }

    pub fn edge(&self, ce: usize) -> &CollapsedEdge {
        &self.edges[ce]
    }

    /// `(neighbor, collapsed edge)` pairs of `v`, by neighbor index.
    pub fn neighbors(&self, v: usize) -> &[(usize, usize)] {
        &self.adjacency[v]
    }

    /// Collapsed edge joining `u` and `v`, if adjacent.
    pub fn edge_between(&self, u: usize, v: usize) -> Option<usize> {
        self.adjacency[u].iter().find(|(w, _)| *w == v).map(|&(_, ce)| ce)
    }

    pub fn rooted_at(&self, root: usize) -> RootedTree {
        let n = self.adjacency.len();
        let mut distance = vec![usize::MAX; n];
        let mut parent = vec![None; n];
        distance[root] = 0;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &(u, ce) in &self.adjacency[v] {
                if distance[u] == usize::MAX {
                    distance[u] = distance[v] + 1;
                    parent[u] = Some((v, ce));
                    queue.push_back(u);
                }
            }
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&v| (distance[v], v));
        RootedTree { root, order, distance, parent }
    }
}

/// A validated graph of pseudocompact type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Curve {
    graph: ChainGraph,
    tree: CollapsedTree,
    genus: i64,
}

impl Curve {
    pub fn graph(&self) -> &ChainGraph {
        &self.graph
    }

    pub fn tree(&self) -> &CollapsedTree {
        &self.tree
    }

    /// `g = Σ g_v + |E| − |V| + 1`.
    pub fn genus(&self) -> i64 {
        self.genus
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.graph.edges[e]
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    /// Human-readable label `u-v` for a collapsed edge.
    pub fn collapsed_label(&self, ce: usize) -> String {
        let [a, b] = self.tree.edges[ce].ends;
        format!("{}-{}", self.graph.vertex_id(a), self.graph.vertex_id(b))
    }
}

/// Checks the pseudocompact-type hypothesis and computes the genus.
pub fn validate(graph: &ChainGraph) -> Result<Curve> {
    let nv = graph.vertex_count();
    let mut groups: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (i, e) in graph.edges.iter().enumerate() {
        let key = (e.tail.min(e.head), e.tail.max(e.head));
        groups.entry(key).or_default().push(i);
    }

    // union-find over the collapsed edges; a repeated root is a cycle
    let mut parent: Vec<usize> = (0..nv).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut edges = Vec::with_capacity(groups.len());
    let mut adjacency = vec![Vec::new(); nv];
    for ((a, b), members) in groups {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra == rb {
            return Err(Error::NotPseudocompactType(format!(
                "cycle through {} and {}",
                graph.vertex_id(a),
                graph.vertex_id(b)
            )));
        }
        parent[ra] = rb;
        let ce = edges.len();
        adjacency[a].push((b, ce));
        adjacency[b].push((a, ce));
        edges.push(CollapsedEdge { ends: [a, b], edges: members });
    }
    if edges.len() + 1 != nv {
        return Err(Error::NotPseudocompactType("collapsed graph is disconnected".into()));
    }
    for adj in &mut adjacency {
        adj.sort();
    }
    let genus = graph.arithmetic_genus();
    Ok(Curve { graph: graph.clone(), tree: CollapsedTree { edges, adjacency }, genus })
}

/// Graph obtained by inserting `n(e) − 1` genus-0 vertices into each edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubdividedGraph {
    /// Labels: original ids first, then `edge#k` for the k-th inserted vertex
    /// counted from the tail.
    pub labels: Vec<String>,
    pub genera: Vec<u32>,
    pub original_count: usize,
    /// Segments as vertex pairs, oriented tail to head along the original edge.
    pub segments: Vec<(usize, usize)>,
    /// For every original edge, the vertices at positions `0..=n` from tail
    /// to head.
    pub chains: Vec<Vec<usize>>,
}

impl SubdividedGraph {
    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    /// Component genera plus first Betti number.
    pub fn genus(&self) -> i64 {
        let sum: i64 = self.genera.iter().map(|&g| g as i64).sum();
        sum + self.segments.len() as i64 - self.labels.len() as i64 + 1
    }

    pub fn label_index(&self, label: &str) -> Result<usize> {
        self.labels.iter().position(|l| l == label).ok_or_else(|| Error::UnknownVertex(label.to_string()))
    }
}

pub fn subdivide(graph: &ChainGraph) -> SubdividedGraph {
    let mut labels: Vec<String> = graph.vertices.iter().map(|v| v.id.clone()).collect();
    let mut genera: Vec<u32> = graph.vertices.iter().map(|v| v.genus).collect();
    let mut segments = Vec::new();
    let mut chains = Vec::with_capacity(graph.edges.len());
    for e in &graph.edges {
        let mut chain = vec![e.tail];
        for k in 1..e.n {
            labels.push(format!("{}#{}", e.id, k));
            genera.push(0);
            chain.push(labels.len() - 1);
        }
        chain.push(e.head);
        for w in chain.windows(2) {
            segments.push((w[0], w[1]));
        }
        chains.push(chain);
    }
    SubdividedGraph { labels, genera, original_count: graph.vertex_count(), segments, chains }
}

/// Outcome of a strong Brill-Noether generality check on one component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CertificateStatus {
    Certified,
    /// Valid in characteristic 0 or characteristic `p > d`.
    CertifiedCharRestricted,
    RequiresGenerality,
}

impl CertificateStatus {
    pub fn is_certified(self) -> bool {
        !matches!(self, CertificateStatus::RequiresGenerality)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            CertificateStatus::Certified => "certified",
            CertificateStatus::CertifiedCharRestricted => "certified-char-restricted",
            CertificateStatus::RequiresGenerality => "requires-generality",
        }
    }
}

/// Which decidable case of the component generality theorem applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CaseTag {
    /// Rational with at most two marked clusters.
    III,
    /// Rational, every cluster a single point.
    IV,
    /// Elliptic, at most two single points.
    V,
    /// Genus two, at most one non-Weierstrass point.
    VI,
    /// Only the "general curve, general points" cases apply.
    General,
}

impl CaseTag {
    pub fn as_str(self) -> &'static str {
        match self {
            CaseTag::III => "III",
            CaseTag::IV => "IV",
            CaseTag::V => "V",
            CaseTag::VI => "VI",
            CaseTag::General => "I/II",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrongBnCertificate {
    pub vertex: String,
    pub status: CertificateStatus,
    pub case: CaseTag,
}

/// Classifies a marked component from its genus, the sizes of its node
/// clusters and its flags. `Ok(None)` means no decidable case applies.
pub fn classify_profile(
    genus: u32,
    multiplicities: &[usize],
    torsion: TorsionFlag,
    weierstrass: WeierstrassFlag,
) -> std::result::Result<(CertificateStatus, CaseTag), &'static str> {
    let n = multiplicities.len();
    let singles = multiplicities.iter().all(|&m| m == 1);
    let general = Ok((CertificateStatus::RequiresGenerality, CaseTag::General));
    match genus {
        0 if n <= 2 => Ok((CertificateStatus::Certified, CaseTag::III)),
        0 if singles => Ok((CertificateStatus::CertifiedCharRestricted, CaseTag::IV)),
        1 if n <= 2 && singles => {
            if n < 2 {
                return Ok((CertificateStatus::Certified, CaseTag::V));
            }
            match torsion {
                TorsionFlag::None => Ok((CertificateStatus::Certified, CaseTag::V)),
                TorsionFlag::Present => general,
                TorsionFlag::Unknown => Err("torsion"),
            }
        }
        2 if n == 0 => Ok((CertificateStatus::Certified, CaseTag::VI)),
        2 if n == 1 && singles => match weierstrass {
            WeierstrassFlag::No => Ok((CertificateStatus::Certified, CaseTag::VI)),
            WeierstrassFlag::Yes => general,
            WeierstrassFlag::Unknown => Err("weierstrass"),
        },
        _ => general,
    }
}

/// Sizes of the node clusters at `v`, one per neighbor in the collapsed tree.
pub fn cluster_sizes(curve: &Curve, v: usize) -> Vec<usize> {
    curve.tree.neighbors(v).iter().map(|&(_, ce)| curve.tree.edges[ce].multiplicity()).collect()
}

pub fn classify_component(curve: &Curve, v: usize) -> Result<StrongBnCertificate> {
    let vertex = &curve.graph.vertices[v];
    let sizes = cluster_sizes(curve, v);
    let (status, case) = classify_profile(vertex.genus, &sizes, vertex.torsion, vertex.weierstrass)
        .map_err(|flag| Error::UnknownFlag { vertex: vertex.id.clone(), flag })?;
    Ok(StrongBnCertificate { vertex: vertex.id.clone(), status, case })
}

fn parse_attr<T: FromStr<Err = String>>(line: usize, value: &str) -> Result<T> {
    value.parse().map_err(|msg| Error::Parse { line, msg })
}

/// Parses the `curve v1` text format.
pub fn parse_curve(text: &str) -> Result<ChainGraph> {
    let mut header_seen = false;
    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        if !header_seen {
            if tokens != ["curve", "v1"] {
                return Err(Error::Parse { line, msg: "expected header `curve v1`".into() });
            }
            header_seen = true;
            continue;
        }
        let bad = |msg: String| Error::Parse { line, msg };
        match tokens[0] {
            "vertex" => {
                let id = tokens.get(1).ok_or_else(|| bad("vertex needs an id".into()))?;
                let mut genus = None;
                let mut v = Vertex::new(*id, 0);
                let mut class = None;
                for attr in &tokens[2..] {
                    let (key, value) =
                        attr.split_once('=').ok_or_else(|| bad(format!("malformed attribute `{attr}`")))?;
                    match key {
                        "genus" => genus = Some(value.parse::<u32>().map_err(|_| bad(format!("bad genus `{value}`")))?),
                        "class" => class = Some(parse_attr::<ComponentClass>(line, value)?),
                        "torsion" => v.torsion = parse_attr(line, value)?,
                        "weierstrass" => v.weierstrass = parse_attr(line, value)?,
                        other => return Err(bad(format!("unknown attribute `{other}`"))),
                    }
                }
                v.genus = genus.ok_or_else(|| bad("vertex needs genus=<int>".into()))?;
                if let Some(class) = class {
                    let expected = match class {
                        ComponentClass::Rational => Some(0),
                        ComponentClass::Elliptic => Some(1),
                        ComponentClass::Genus2 => Some(2),
                        ComponentClass::General => None,
                    };
                    if expected.is_some_and(|g| g != v.genus) {
                        return Err(bad(format!("class={class} contradicts genus={}", v.genus)));
                    }
                    v.class = class;
                }
                vertices.push(v);
            }
            "edge" => {
                if tokens.len() != 5 {
                    return Err(bad("expected `edge <id> <tail> <head> n=<int>`".into()));
                }
                let n = tokens[4]
                    .strip_prefix("n=")
                    .and_then(|s| s.parse::<i64>().ok())
                    .ok_or_else(|| bad(format!("bad chain length `{}`", tokens[4])))?;
                edges.push(EdgeSpec::new(tokens[1], tokens[2], tokens[3], n));
            }
            other => return Err(bad(format!("unknown record `{other}`"))),
        }
    }
    if !header_seen {
        return Err(Error::Parse { line: 1, msg: "missing header `curve v1`".into() });
    }
    ChainGraph::new(vertices, edges)
}

/// Writes a graph in the `curve v1` format.
pub fn write_curve(graph: &ChainGraph) -> String {
    let mut out = String::from("curve v1\n");
    for v in &graph.vertices {
        out.push_str(&format!(
            "vertex {} genus={} class={} torsion={} weierstrass={}\n",
            v.id, v.genus, v.class, v.torsion, v.weierstrass
        ));
    }
    for e in &graph.edges {
        out.push_str(&format!("edge {} {} {} n={}\n", e.id, graph.vertex_id(e.tail), graph.vertex_id(e.head), e.n));
    }
    out
}
