//! Problem representation: vertices, edges, colors, domains.
//!
//! An [`Instance`] bundles a simple graph `(X, E)`, an ordered color set `Y`,
//! and a set-valued mapping `F: X -> 2^Y` given by explicit domain lists.
//! Vertices and colors are opaque string tokens with a canonical total order
//! (lexicographic); all downstream tie-breaking derives from that order, so
//! solver traces are reproducible.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Vertex identifier; ordered lexicographically by token.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct VertexId(String);

impl VertexId {
    pub fn new(token: impl Into<String>) -> Self {
        VertexId(token.into())
    }

    pub fn token(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for VertexId {
    fn from(s: &str) -> Self {
        VertexId(s.to_owned())
    }
}

/// Color identifier; ordered lexicographically by token.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ColorId(String);

impl ColorId {
    pub fn new(token: impl Into<String>) -> Self {
        ColorId(token.into())
    }

    pub fn token(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ColorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for ColorId {
    fn from(s: &str) -> Self {
        ColorId(s.to_owned())
    }
}

/// A point of the product `X x Y`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Point {
    pub x: VertexId,
    pub y: ColorId,
}

impl Point {
    pub fn new(x: impl Into<VertexId>, y: impl Into<ColorId>) -> Self {
        Point { x: x.into(), y: y.into() }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

/// Canonically ordered, duplicate-free point set.
pub type PointSet = BTreeSet<Point>;
/// Canonically ordered vertex set.
pub type VertexSet = BTreeSet<VertexId>;
/// Canonically ordered color set.
pub type ColorSet = BTreeSet<ColorId>;
/// A (total) selection: one color per vertex.
pub type Selection = BTreeMap<VertexId, ColorId>;

/// Undirected simple graph with canonically ordered vertices.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SimpleGraph {
    vertices: Vec<VertexId>,
    edges: BTreeSet<(VertexId, VertexId)>,
}

impl SimpleGraph {
    /// Builds a graph, normalizing edge orientation and rejecting self-loops,
    /// duplicate vertices, and edges with unknown endpoints.
    pub fn new(vertices: Vec<VertexId>, edges: Vec<(VertexId, VertexId)>) -> Result<Self> {
        let mut sorted = vertices;
        sorted.sort();
        for pair in sorted.windows(2) {
            if pair[0] == pair[1] {
                return Err(Error::DuplicateVertex(pair[0].token().to_owned()));
            }
        }
        let known: BTreeSet<&VertexId> = sorted.iter().collect();
        let mut edge_set = BTreeSet::new();
        for (a, b) in edges {
            if a == b {
                return Err(Error::SelfLoop(a.token().to_owned()));
            }
            if !known.contains(&a) {
                return Err(Error::UnknownVertex(a.token().to_owned()));
            }
            if !known.contains(&b) {
                return Err(Error::UnknownVertex(b.token().to_owned()));
            }
            let edge = if a < b { (a, b) } else { (b, a) };
            edge_set.insert(edge);
        }
        Ok(SimpleGraph { vertices: sorted, edges: edge_set })
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn contains(&self, v: &VertexId) -> bool {
        self.vertices.binary_search(v).is_ok()
    }

    pub fn adjacent(&self, a: &VertexId, b: &VertexId) -> bool {
        if a == b {
            return false;
        }
        let edge = if a < b { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) };
        self.edges.contains(&edge)
    }

    pub fn edges(&self) -> impl Iterator<Item = &(VertexId, VertexId)> {
        self.edges.iter()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }
}

/// Set-valued mapping `F` as explicit per-vertex color lists.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SetValuedMap {
    domains: BTreeMap<VertexId, ColorSet>,
}

impl SetValuedMap {
    pub fn domain(&self, x: &VertexId) -> &ColorSet {
        static EMPTY: ColorSet = ColorSet::new();
        self.domains.get(x).unwrap_or(&EMPTY)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&VertexId, &ColorSet)> {
        self.domains.iter()
    }
}

/// A full problem instance: graph, color universe, and domains.
///
/// Immutable after construction; cloning is cheap enough at the scales this
/// crate targets, and all derived mappings (restrictions, complement
/// mappings, kernels) are materialized as fresh instances.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Instance {
    graph: SimpleGraph,
    colors: Vec<ColorId>,
    map: SetValuedMap,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceDoc {
    vertices: Vec<String>,
    edges: Vec<(String, String)>,
    colors: Vec<String>,
    domains: BTreeMap<String, Vec<String>>,
}

impl Instance {
    /// Validates and canonicalizes the parts of an instance.
    ///
    /// Every vertex gets a domain entry (defaulting to empty); domains must
    /// reference known vertices and colors.
    pub fn new(
        vertices: Vec<VertexId>,
        edges: Vec<(VertexId, VertexId)>,
        colors: Vec<ColorId>,
        domains: BTreeMap<VertexId, ColorSet>,
    ) -> Result<Self> {
        let graph = SimpleGraph::new(vertices, edges)?;
        let mut sorted_colors = colors;
        sorted_colors.sort();
        for pair in sorted_colors.windows(2) {
            if pair[0] == pair[1] {
                return Err(Error::DuplicateColor(pair[0].token().to_owned()));
            }
        }
        let color_set: BTreeSet<&ColorId> = sorted_colors.iter().collect();
        let mut full = BTreeMap::new();
        for v in graph.vertices() {
            full.insert(v.clone(), ColorSet::new());
        }
        for (v, dom) in domains {
            if !graph.contains(&v) {
                return Err(Error::UnknownVertex(v.token().to_owned()));
            }
            for c in &dom {
                if !color_set.contains(c) {
                    return Err(Error::UnknownColor(c.token().to_owned()));
                }
            }
            full.insert(v, dom);
        }
        Ok(Instance { graph, colors: sorted_colors, map: SetValuedMap { domains: full } })
    }

    /// Convenience constructor from string slices; used heavily in tests.
    pub fn from_parts(
        vertices: &[&str],
        edges: &[(&str, &str)],
        colors: &[&str],
        domains: &[(&str, &[&str])],
    ) -> Result<Self> {
        let vs = vertices.iter().map(|v| VertexId::new(*v)).collect();
        let es = edges.iter().map(|(a, b)| (VertexId::new(*a), VertexId::new(*b))).collect();
        let cs = colors.iter().map(|c| ColorId::new(*c)).collect();
        let ds = domains
            .iter()
            .map(|(v, cols)| {
                (VertexId::new(*v), cols.iter().map(|c| ColorId::new(*c)).collect::<ColorSet>())
            })
            .collect();
        Instance::new(vs, es, cs, ds)
    }

    pub fn vertices(&self) -> &[VertexId] {
        self.graph.vertices()
    }

    pub fn vertex_set(&self) -> VertexSet {
        self.graph.vertices().iter().cloned().collect()
    }

    pub fn colors(&self) -> &[ColorId] {
        &self.colors
    }

    pub fn graph(&self) -> &SimpleGraph {
        &self.graph
    }

    pub fn map(&self) -> &SetValuedMap {
        &self.map
    }

    pub fn domain(&self, x: &VertexId) -> &ColorSet {
        self.map.domain(x)
    }

    pub fn contains_vertex(&self, v: &VertexId) -> bool {
        self.graph.contains(v)
    }

    pub fn adjacent(&self, a: &VertexId, b: &VertexId) -> bool {
        self.graph.adjacent(a, b)
    }

    /// The graph of the mapping: `{ (x, y) | y in F(x) }`.
    pub fn graph_of(&self) -> PointSet {
        let mut points = PointSet::new();
        for (v, dom) in self.map.iter() {
            for c in dom {
                points.insert(Point { x: v.clone(), y: c.clone() });
            }
        }
        points
    }

    /// The full product `X x Y`.
    pub fn product(&self) -> PointSet {
        let mut points = PointSet::new();
        for v in self.graph.vertices() {
            for c in &self.colors {
                points.insert(Point { x: v.clone(), y: c.clone() });
            }
        }
        points
    }

    /// Restriction of the instance to `W`: induced subgraph, domains kept.
    pub fn restrict(&self, w: &VertexSet) -> Result<Instance> {
        for v in w {
            if !self.graph.contains(v) {
                return Err(Error::UnknownVertex(v.token().to_owned()));
            }
        }
        let vertices: Vec<VertexId> = w.iter().cloned().collect();
        let edges: Vec<(VertexId, VertexId)> = self
            .graph
            .edges()
            .filter(|(a, b)| w.contains(a) && w.contains(b))
            .cloned()
            .collect();
        let domains: BTreeMap<VertexId, ColorSet> =
            w.iter().map(|v| (v.clone(), self.domain(v).clone())).collect();
        Instance::new(vertices, edges, self.colors.clone(), domains)
    }

    /// Same graph and colors, domains replaced by the fibers of `points`.
    ///
    /// Points must lie in `X x Y`; this is how derived submappings are
    /// materialized from a graph identity.
    pub fn with_graph_points(&self, points: &PointSet) -> Result<Instance> {
        let mut domains: BTreeMap<VertexId, ColorSet> =
            self.graph.vertices().iter().map(|v| (v.clone(), ColorSet::new())).collect();
        let color_set: BTreeSet<&ColorId> = self.colors.iter().collect();
        for p in points {
            if !self.graph.contains(&p.x) {
                return Err(Error::UnknownVertex(p.x.token().to_owned()));
            }
            if !color_set.contains(&p.y) {
                return Err(Error::UnknownColor(p.y.token().to_owned()));
            }
            domains.get_mut(&p.x).expect("vertex present").insert(p.y.clone());
        }
        Instance::new(
            self.graph.vertices().to_vec(),
            self.graph.edges().cloned().collect(),
            self.colors.clone(),
            domains,
        )
    }

    /// Same instance with one vertex's domain replaced.
    pub fn with_domain(&self, x: &VertexId, dom: ColorSet) -> Result<Instance> {
        if !self.graph.contains(x) {
            return Err(Error::UnknownVertex(x.token().to_owned()));
        }
        let mut domains: BTreeMap<VertexId, ColorSet> =
            self.map.iter().map(|(v, d)| (v.clone(), d.clone())).collect();
        domains.insert(x.clone(), dom);
        Instance::new(
            self.graph.vertices().to_vec(),
            self.graph.edges().cloned().collect(),
            self.colors.clone(),
            domains,
        )
    }

    /// Checks that `s` assigns every vertex a color from its domain.
    pub fn is_selection(&self, s: &Selection) -> bool {
        if s.len() != self.graph.vertices().len() {
            return false;
        }
        s.iter().all(|(x, y)| self.graph.contains(x) && self.domain(x).contains(y))
    }

    /// Canonical JSON serialization; `parse_instance` inverts it.
    pub fn serialize(&self) -> String {
        let doc = InstanceDoc {
            vertices: self.graph.vertices().iter().map(|v| v.token().to_owned()).collect(),
            edges: self
                .graph
                .edges()
                .map(|(a, b)| (a.token().to_owned(), b.token().to_owned()))
                .collect(),
            colors: self.colors.iter().map(|c| c.token().to_owned()).collect(),
            domains: self
                .map
                .iter()
                .map(|(v, dom)| {
                    (v.token().to_owned(), dom.iter().map(|c| c.token().to_owned()).collect())
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("instance serialization cannot fail")
    }
}

/// Parses the JSON instance format.
///
/// Top-level fields: `vertices`, `edges`, `colors`, `domains`. Unknown fields
/// are rejected.
pub fn parse_instance(text: &str) -> Result<Instance> {
    let doc: InstanceDoc =
        serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
    let vertices = doc.vertices.into_iter().map(VertexId::new).collect();
    let edges =
        doc.edges.into_iter().map(|(a, b)| (VertexId::new(a), VertexId::new(b))).collect();
    let colors = doc.colors.into_iter().map(ColorId::new).collect();
    let domains = doc
        .domains
        .into_iter()
        .map(|(v, cols)| (VertexId::new(v), cols.into_iter().map(ColorId::new).collect()))
        .collect();
    Instance::new(vertices, edges, colors, domains)
}

/// The graph `G(s)` of a selection.
pub fn selection_graph(s: &Selection) -> PointSet {
    s.iter().map(|(x, y)| Point { x: x.clone(), y: y.clone() }).collect()
}

/// Canonical small instances used across the test suite and examples.
pub mod fixtures {
    use super::Instance;

    /// One vertex `a`, no edges, colors `{1,2}`, domain `{1}`.
    pub fn single() -> Instance {
        Instance::from_parts(&["a"], &[], &["1", "2"], &[("a", &["1"])]).unwrap()
    }

    /// Two adjacent vertices, both with full domain `{1,2}`.
    pub fn edge2() -> Instance {
        Instance::from_parts(
            &["1", "2"],
            &[("1", "2")],
            &["1", "2"],
            &[("1", &["1", "2"]), ("2", &["1", "2"])],
        )
        .unwrap()
    }

    /// Two adjacent vertices forced onto the same single color.
    pub fn conflict() -> Instance {
        Instance::from_parts(&["1", "2"], &[("1", "2")], &["1"], &[("1", &["1"]), ("2", &["1"])])
            .unwrap()
    }

    /// Path 1-2-3 with pinned endpoints and a free middle vertex.
    pub fn path3() -> Instance {
        Instance::from_parts(
            &["1", "2", "3"],
            &[("1", "2"), ("2", "3")],
            &["1", "2"],
            &[("1", &["1"]), ("2", &["1", "2"]), ("3", &["1"])],
        )
        .unwrap()
    }

    /// Two disjoint edges (cliques {1,2} and {3,4}), all domains full.
    pub fn cliques() -> Instance {
        Instance::from_parts(
            &["1", "2", "3", "4"],
            &[("1", "2"), ("3", "4")],
            &["1", "2"],
            &[
                ("1", &["1", "2"]),
                ("2", &["1", "2"]),
                ("3", &["1", "2"]),
                ("4", &["1", "2"]),
            ],
        )
        .unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_conflict_document() {
        let text = r#"{
            "vertices": ["2", "1"],
            "edges": [["2", "1"]],
            "colors": ["1"],
            "domains": {"1": ["1"], "2": ["1"]}
        }"#;
        let inst = parse_instance(text).unwrap();
        assert_eq!(inst.vertices().len(), 2);
        assert_eq!(inst.graph().edge_count(), 1);
        assert_eq!(inst.colors().len(), 1);
        assert_eq!(inst, fixtures::conflict());
    }

    #[test]
    fn parse_rejects_self_loop() {
        let text = r#"{"vertices": ["1"], "edges": [["1", "1"]], "colors": [], "domains": {}}"#;
        assert!(matches!(parse_instance(text), Err(Error::SelfLoop(_))));
    }

    #[test]
    fn parse_rejects_unknown_domain_color() {
        let text = r#"{"vertices": ["1"], "edges": [], "colors": ["1"], "domains": {"1": ["z"]}}"#;
        assert!(matches!(parse_instance(text), Err(Error::UnknownColor(_))));
    }

    #[test]
    fn parse_rejects_unknown_fields_and_duplicates() {
        let unknown = r#"{"vertices": [], "edges": [], "colors": [], "domains": {}, "extra": 1}"#;
        assert!(matches!(parse_instance(unknown), Err(Error::Malformed(_))));
        let dup_v = r#"{"vertices": ["1", "1"], "edges": [], "colors": [], "domains": {}}"#;
        assert!(matches!(parse_instance(dup_v), Err(Error::DuplicateVertex(_))));
        let dup_c = r#"{"vertices": [], "edges": [], "colors": ["a", "a"], "domains": {}}"#;
        assert!(matches!(parse_instance(dup_c), Err(Error::DuplicateColor(_))));
        let bad_edge = r#"{"vertices": ["1"], "edges": [["1", "9"]], "colors": [], "domains": {}}"#;
        assert!(matches!(parse_instance(bad_edge), Err(Error::UnknownVertex(_))));
    }

    #[test]
    fn restrict_matches_definition() {
        let path3 = fixtures::path3();
        let w: VertexSet = ["1", "2"].iter().map(|v| VertexId::new(*v)).collect();
        let r = path3.restrict(&w).unwrap();
        assert_eq!(r.vertices().len(), 2);
        assert_eq!(r.graph().edge_count(), 1);
        assert_eq!(r.domain(&VertexId::new("1")).len(), 1);
        assert_eq!(r.domain(&VertexId::new("2")).len(), 2);

        let empty = path3.restrict(&VertexSet::new()).unwrap();
        assert!(empty.vertices().is_empty());

        let cliques = fixtures::cliques();
        let w13: VertexSet = ["1", "3"].iter().map(|v| VertexId::new(*v)).collect();
        let r13 = cliques.restrict(&w13).unwrap();
        assert_eq!(r13.vertices().len(), 2);
        assert_eq!(r13.graph().edge_count(), 0);

        let bad: VertexSet = [VertexId::new("9")].into_iter().collect();
        assert!(path3.restrict(&bad).is_err());
    }

    #[test]
    fn restrict_composes() {
        let inst = fixtures::cliques();
        let all = inst.vertex_set();
        assert_eq!(inst.restrict(&all).unwrap(), inst);
        let w: VertexSet = ["1", "2", "3"].iter().map(|v| VertexId::new(*v)).collect();
        let v: VertexSet = ["1", "3"].iter().map(|x| VertexId::new(*x)).collect();
        assert_eq!(
            inst.restrict(&w).unwrap().restrict(&v).unwrap(),
            inst.restrict(&v).unwrap()
        );
    }

    #[test]
    fn graph_of_reads_off_domains() {
        let conflict = fixtures::conflict();
        let expected: PointSet =
            [Point::new("1", "1"), Point::new("2", "1")].into_iter().collect();
        assert_eq!(conflict.graph_of(), expected);

        let single = fixtures::single();
        assert_eq!(single.graph_of(), [Point::new("a", "1")].into_iter().collect());

        let empty_domains =
            Instance::from_parts(&["1", "2"], &[], &["1"], &[]).unwrap();
        assert!(empty_domains.graph_of().is_empty());
        let total: usize = empty_domains.vertices().iter().map(|v| empty_domains.domain(v).len()).sum();
        assert_eq!(empty_domains.graph_of().len(), total);
    }

    #[test]
    fn serialize_roundtrips() {
        for inst in [
            fixtures::single(),
            fixtures::edge2(),
            fixtures::conflict(),
            fixtures::path3(),
            fixtures::cliques(),
        ] {
            let text = inst.serialize();
            assert_eq!(parse_instance(&text).unwrap(), inst);
        }
    }

    #[test]
    fn graph_size_is_domain_sum() {
        let inst = fixtures::path3();
        let total: usize = inst.vertices().iter().map(|v| inst.domain(v).len()).sum();
        assert_eq!(inst.graph_of().len(), total);
    }
}
