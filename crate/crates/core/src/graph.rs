//! Finite colored pregraphs, graphs and trees.
//!
//! Vertices and colors are stored by index; identifiers are opaque strings
//! kept alongside. Edge triples are held sorted and deduplicated so every
//! derived artifact (serialization, DOT output, search order) is deterministic.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scc::tarjan;

/// Reserved identifier of the neutral color ε.
pub const EPS_NAME: &str = "eps";

/// Index of a color in a graph's alphabet, or the reserved ε.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Color(pub u16);

impl Color {
    /// ε sorts after every ordinary color.
    pub const EPS: Color = Color(u16::MAX);

    pub fn is_eps(self) -> bool {
        self == Color::EPS
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Player controlling a vertex.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Owner {
    Eve,
    Adam,
}

/// Whether sinks are allowed.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum GraphKind {
    Graph,
    Pregraph,
}

/// A colored directed graph over a declared alphabet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoredGraph {
    alphabet: Vec<String>,
    ids: Vec<String>,
    edges: Vec<(usize, Color, usize)>,
    out: Vec<Vec<(Color, usize)>>,
    kind: GraphKind,
}

/// Total map from source vertex indices to target vertex indices.
pub type VertexMap = Vec<usize>;

impl ColoredGraph {
    /// Builds and validates a graph from indexed parts.
    pub fn new(
        alphabet: Vec<String>,
        ids: Vec<String>,
        mut edges: Vec<(usize, Color, usize)>,
        kind: GraphKind,
    ) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for c in &alphabet {
            if c == EPS_NAME {
                return Err(Error::InvalidObjective(format!(
                    "`{EPS_NAME}` is reserved and cannot be declared"
                )));
            }
            if !seen.insert(c.as_str()) {
                return Err(Error::DuplicateColor(c.clone()));
            }
        }
        let mut seen = BTreeSet::new();
        for id in &ids {
            if !seen.insert(id.as_str()) {
                return Err(Error::DuplicateVertex(id.clone()));
            }
        }
        let n = ids.len();
        for &(u, c, v) in &edges {
            if u >= n || v >= n {
                return Err(Error::DanglingEndpoint(format!("({u}, {}, {v})", c.0)));
            }
            if !c.is_eps() && c.index() >= alphabet.len() {
                return Err(Error::UnknownColor(format!("#{}", c.0)));
            }
        }
        edges.sort_unstable();
        edges.dedup();
        let mut out = vec![Vec::new(); n];
        for &(u, c, v) in &edges {
            out[u].push((c, v));
        }
        let g = ColoredGraph { alphabet, ids, edges, out, kind };
        if kind == GraphKind::Graph {
            let sinks = g.sinks();
            if !sinks.is_empty() {
                return Err(Error::Sinks(sinks.into_iter().map(|v| g.ids[v].clone()).collect()));
            }
        }
        Ok(g)
    }

    /// Validates a graph given by identifiers, the shape used in files.
    pub fn from_named(
        alphabet: &[String],
        vertices: &[String],
        edges: &[(String, String, String)],
        kind: GraphKind,
    ) -> Result<Self> {
        let mut index = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if index.insert(v.as_str(), i).is_some() {
                return Err(Error::DuplicateVertex(v.clone()));
            }
        }
        let colors: HashMap<&str, usize> =
            alphabet.iter().enumerate().map(|(i, c)| (c.as_str(), i)).collect();
        let mut out = Vec::with_capacity(edges.len());
        for (s, c, d) in edges {
            let (Some(&u), Some(&v)) = (index.get(s.as_str()), index.get(d.as_str())) else {
                return Err(Error::DanglingEndpoint(format!("[{s}, {c}, {d}]")));
            };
            let color = if c == EPS_NAME {
                Color::EPS
            } else {
                match colors.get(c.as_str()) {
                    Some(&i) => Color(i as u16),
                    None => return Err(Error::UnknownColor(c.clone())),
                }
            };
            out.push((u, color, v));
        }
        ColoredGraph::new(alphabet.to_vec(), vertices.to_vec(), out, kind)
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    pub fn is_graph(&self) -> bool {
        self.sinks().is_empty()
    }

    /// Same graph retagged; fails when asking for graph status with sinks.
    pub fn with_kind(mut self, kind: GraphKind) -> Result<Self> {
        if kind == GraphKind::Graph {
            let sinks = self.sinks();
            if !sinks.is_empty() {
                return Err(Error::Sinks(sinks.into_iter().map(|v| self.ids[v].clone()).collect()));
            }
        }
        self.kind = kind;
        Ok(self)
    }

    pub fn vertex_count(&self) -> usize {
        self.ids.len()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id(&self, v: usize) -> &str {
        &self.ids[v]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.ids.iter().position(|x| x == id)
    }

    pub fn color_name(&self, c: Color) -> &str {
        if c.is_eps() {
            EPS_NAME
        } else {
            &self.alphabet[c.index()]
        }
    }

    pub fn color_of(&self, name: &str) -> Option<Color> {
        if name == EPS_NAME {
            return Some(Color::EPS);
        }
        self.alphabet.iter().position(|c| c == name).map(|i| Color(i as u16))
    }

    /// Sorted, deduplicated edge triples.
    pub fn edges(&self) -> &[(usize, Color, usize)] {
        &self.edges
    }

    /// Outgoing edges of `v`, sorted by (color, target).
    pub fn successors(&self, v: usize) -> &[(Color, usize)] {
        &self.out[v]
    }

    pub fn has_edge(&self, u: usize, c: Color, v: usize) -> bool {
        self.out[u].binary_search(&(c, v)).is_ok()
    }

    pub fn uses_eps(&self) -> bool {
        self.edges.iter().any(|e| e.1.is_eps())
    }

    pub fn sinks(&self) -> Vec<usize> {
        (0..self.ids.len()).filter(|&v| self.out[v].is_empty()).collect()
    }

    /// Vertices reachable from `v`, `v` included.
    pub fn reachable_from(&self, v: usize) -> BTreeSet<usize> {
        self.reachable_from_all(&[v])
    }

    pub fn reachable_from_all(&self, starts: &[usize]) -> BTreeSet<usize> {
        let mut seen = vec![false; self.ids.len()];
        let mut queue: VecDeque<usize> = VecDeque::new();
        for &s in starts {
            if !seen[s] {
                seen[s] = true;
                queue.push_back(s);
            }
        }
        while let Some(u) = queue.pop_front() {
            for &(_, w) in &self.out[u] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        (0..seen.len()).filter(|&v| seen[v]).collect()
    }

    /// Strongly connected components in reverse topological order.
    pub fn sccs(&self) -> Vec<Vec<usize>> {
        let adj: Vec<Vec<usize>> =
            self.out.iter().map(|s| s.iter().map(|&(_, w)| w).collect()).collect();
        tarjan(&adj)
    }

    /// Induced subgraph on `keep`, tagged as a pregraph. Also returns, for
    /// each new vertex, its index in `self`.
    pub fn restrict(&self, keep: &BTreeSet<usize>) -> (ColoredGraph, Vec<usize>) {
        let old: Vec<usize> = keep.iter().copied().filter(|&v| v < self.ids.len()).collect();
        let mut new_of = vec![usize::MAX; self.ids.len()];
        for (i, &v) in old.iter().enumerate() {
            new_of[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, _, v)| new_of[u] != usize::MAX && new_of[v] != usize::MAX)
            .map(|&(u, c, v)| (new_of[u], c, new_of[v]))
            .collect();
        let ids = old.iter().map(|&v| self.ids[v].clone()).collect();
        let g = ColoredGraph::new(self.alphabet.clone(), ids, edges, GraphKind::Pregraph)
            .expect("restriction of a valid graph is valid");
        (g, old)
    }

    /// Same vertices and edges over a larger alphabet that contains this one.
    pub fn reindex_alphabet(&self, alphabet: &[String]) -> Result<ColoredGraph> {
        let tr = color_translation(self, alphabet);
        let mut edges = Vec::with_capacity(self.edges.len());
        for &(u, c, v) in &self.edges {
            match tr[slot(c)] {
                Some(c2) => edges.push((u, c2, v)),
                None => return Err(Error::UnknownColor(self.color_name(c).to_string())),
            }
        }
        ColoredGraph::new(alphabet.to_vec(), self.ids.clone(), edges, self.kind)
    }

    /// Graphviz rendering; Eve vertices are circles and Adam vertices boxes.
    pub fn to_dot(&self, name: &str, owners: Option<&[Owner]>) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "digraph {} {{", dot_quote(name));
        for (v, id) in self.ids.iter().enumerate() {
            let shape = match owners.map(|o| o[v]) {
                Some(Owner::Adam) => "box",
                _ => "circle",
            };
            let _ = writeln!(s, "  {} [shape={shape}];", dot_quote(id));
        }
        for &(u, c, v) in &self.edges {
            let _ = writeln!(
                s,
                "  {} -> {} [label={}];",
                dot_quote(&self.ids[u]),
                dot_quote(&self.ids[v]),
                dot_quote(self.color_name(c))
            );
        }
        s.push_str("}\n");
        s
    }
}

pub(crate) fn dot_quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Position of a color in translation tables: ordinary colors first, ε last.
pub(crate) fn slot(c: Color) -> usize {
    if c.is_eps() {
        0
    } else {
        c.index() + 1
    }
}

/// For each color of `g` (ε at slot 0), the color with the same name in
/// `alphabet`, if any.
pub(crate) fn color_translation(g: &ColoredGraph, alphabet: &[String]) -> Vec<Option<Color>> {
    let mut tr = vec![Some(Color::EPS)];
    for c in g.alphabet() {
        tr.push(alphabet.iter().position(|x| x == c).map(|i| Color(i as u16)));
    }
    tr
}

/// Incremental construction by vertex identifier.
#[derive(Clone, Debug, Default)]
pub struct GraphBuilder {
    alphabet: Vec<String>,
    ids: Vec<String>,
    index: HashMap<String, usize>,
    edges: Vec<(usize, Color, usize)>,
}

impl GraphBuilder {
    pub fn new<S: AsRef<str>>(alphabet: &[S]) -> Self {
        GraphBuilder {
            alphabet: alphabet.iter().map(|c| c.as_ref().to_string()).collect(),
            ..Default::default()
        }
    }

    /// Index of the vertex named `id`, creating it if needed.
    pub fn vertex(&mut self, id: impl Into<String>) -> usize {
        let id = id.into();
        if let Some(&i) = self.index.get(&id) {
            return i;
        }
        let i = self.ids.len();
        self.index.insert(id.clone(), i);
        self.ids.push(id);
        i
    }

    pub fn color(&self, name: &str) -> Color {
        if name == EPS_NAME {
            return Color::EPS;
        }
        let i = self
            .alphabet
            .iter()
            .position(|c| c == name)
            .unwrap_or_else(|| panic!("color `{name}` not in builder alphabet"));
        Color(i as u16)
    }

    pub fn edge(&mut self, u: usize, c: Color, v: usize) -> &mut Self {
        self.edges.push((u, c, v));
        self
    }

    /// Adds an edge between named vertices, creating them as needed.
    pub fn named_edge(&mut self, u: &str, c: &str, v: &str) -> &mut Self {
        let (u, v) = (self.vertex(u), self.vertex(v));
        let c = self.color(c);
        self.edge(u, c, v)
    }

    pub fn vertex_count(&self) -> usize {
        self.ids.len()
    }

    pub fn build(self, kind: GraphKind) -> Result<ColoredGraph> {
        ColoredGraph::new(self.alphabet, self.ids, self.edges, kind)
    }
}

/// Checks that `map` is a morphism. Returns the first source edge (in
/// canonical order) whose image is missing, or `None` when it is a morphism.
pub fn check_morphism(
    source: &ColoredGraph,
    target: &ColoredGraph,
    map: &[usize],
) -> Result<Option<(usize, Color, usize)>> {
    if map.len() != source.vertex_count() {
        return Err(Error::MapNotTotal { expected: source.vertex_count(), got: map.len() });
    }
    if map.iter().any(|&x| x >= target.vertex_count()) {
        return Err(Error::MapOutOfRange);
    }
    let tr = color_translation(source, target.alphabet());
    for &(u, c, v) in source.edges() {
        let ok = match tr[slot(c)] {
            Some(c2) => target.has_edge(map[u], c2, map[v]),
            None => false,
        };
        if !ok {
            return Ok(Some((u, c, v)));
        }
    }
    Ok(None)
}

/// Backtracking search for a morphism from `source` to `target`. The anchor,
/// if given, restricts the image of one source vertex.
pub fn find_graph_morphism(
    source: &ColoredGraph,
    target: &ColoredGraph,
    anchor: Option<(usize, &[usize])>,
) -> Option<VertexMap> {
    let n = source.vertex_count();
    let t = target.vertex_count();
    if n == 0 {
        return Some(Vec::new());
    }
    if t == 0 {
        return None;
    }
    let tr = color_translation(source, target.alphabet());
    let mut out_e: Vec<Vec<(Color, usize)>> = vec![Vec::new(); n];
    let mut in_e: Vec<Vec<(Color, usize)>> = vec![Vec::new(); n];
    for &(u, c, v) in source.edges() {
        let c2 = tr[slot(c)]?;
        out_e[u].push((c2, v));
        in_e[v].push((c2, u));
    }
    // pred[x] lists (color, y) with y -c-> x in the target.
    let mut pred: Vec<Vec<(Color, usize)>> = vec![Vec::new(); t];
    for &(y, c, x) in target.edges() {
        pred[x].push((c, y));
    }
    let has_out = |x: usize, c: Color| target.successors(x).iter().any(|&(d, _)| d == c);
    let has_in = |x: usize, c: Color| pred[x].iter().any(|&(d, _)| d == c);
    let mut domains: Vec<Vec<bool>> = vec![vec![true; t]; n];
    for v in 0..n {
        for x in 0..t {
            let ok = out_e[v].iter().all(|&(c, _)| has_out(x, c))
                && in_e[v].iter().all(|&(c, _)| has_in(x, c));
            domains[v][x] = ok;
        }
    }
    if let Some((a, allowed)) = anchor {
        if a >= n {
            return None;
        }
        let mut mask = vec![false; t];
        for &x in allowed {
            if x < t {
                mask[x] = true;
            }
        }
        for x in 0..t {
            domains[a][x] &= mask[x];
        }
    }
    let mut assign = vec![usize::MAX; n];
    if search_morphism(target, &out_e, &in_e, &pred, &mut domains, &mut assign) {
        debug_assert_eq!(check_morphism(source, target, &assign), Ok(None));
        Some(assign)
    } else {
        None
    }
}

fn search_morphism(
    target: &ColoredGraph,
    out_e: &[Vec<(Color, usize)>],
    in_e: &[Vec<(Color, usize)>],
    pred: &[Vec<(Color, usize)>],
    domains: &mut Vec<Vec<bool>>,
    assign: &mut Vec<usize>,
) -> bool {
    // Most constrained unassigned variable.
    let mut best: Option<(usize, usize)> = None;
    for v in 0..assign.len() {
        if assign[v] != usize::MAX {
            continue;
        }
        let size = domains[v].iter().filter(|&&b| b).count();
        if best.map_or(true, |(_, s)| size < s) {
            best = Some((v, size));
        }
    }
    let Some((v, size)) = best else { return true };
    if size == 0 {
        return false;
    }
    let candidates: Vec<usize> = (0..domains[v].len()).filter(|&x| domains[v][x]).collect();
    for x in candidates {
        if out_e[v].iter().any(|&(c, w)| w == v && !target.has_edge(x, c, x)) {
            continue;
        }
        let consistent = out_e[v]
            .iter()
            .all(|&(c, w)| assign[w] == usize::MAX || target.has_edge(x, c, assign[w]))
            && in_e[v]
                .iter()
                .all(|&(c, w)| assign[w] == usize::MAX || target.has_edge(assign[w], c, x));
        if !consistent {
            continue;
        }
        let saved = domains.clone();
        assign[v] = x;
        let mut wiped = false;
        for &(c, w) in &out_e[v] {
            if assign[w] != usize::MAX {
                continue;
            }
            let mut allowed = vec![false; domains[w].len()];
            for &(d, y) in target.successors(x) {
                if d == c {
                    allowed[y] = true;
                }
            }
            for y in 0..allowed.len() {
                domains[w][y] &= allowed[y];
            }
            wiped |= !domains[w].iter().any(|&b| b);
        }
        for &(c, w) in &in_e[v] {
            if assign[w] != usize::MAX {
                continue;
            }
            let mut allowed = vec![false; domains[w].len()];
            for &(d, y) in &pred[x] {
                if d == c {
                    allowed[y] = true;
                }
            }
            for y in 0..allowed.len() {
                domains[w][y] &= allowed[y];
            }
            wiped |= !domains[w].iter().any(|&b| b);
        }
        if !wiped && search_morphism(target, out_e, in_e, pred, domains, assign) {
            return true;
        }
        assign[v] = usize::MAX;
        *domains = saved;
    }
    false
}

/// A pregraph with a root from which every vertex has a unique path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootedTree {
    pub graph: ColoredGraph,
    pub root: usize,
    /// For unfoldings, the base-graph vertex each node ends at.
    pub projection: Vec<usize>,
}

impl RootedTree {
    /// Checks the tree invariants: root in-degree 0, every other vertex
    /// in-degree 1, everything reachable from the root.
    pub fn check(&self) -> bool {
        let n = self.graph.vertex_count();
        let mut indeg = vec![0usize; n];
        for &(_, _, v) in self.graph.edges() {
            indeg[v] += 1;
        }
        if indeg[self.root] != 0 {
            return false;
        }
        if (0..n).any(|v| v != self.root && indeg[v] != 1) {
            return false;
        }
        self.graph.reachable_from(self.root).len() == n
    }
}

/// Unfolding of `g` from `v0`, truncated to paths with at most `depth` edges.
/// Node identifiers spell the path as `v0/c1/v1/c2/v2...`.
pub fn unfold(g: &ColoredGraph, v0: usize, depth: usize) -> RootedTree {
    let mut ids = vec![g.id(v0).to_string()];
    let mut projection = vec![v0];
    let mut edges = Vec::new();
    let mut frontier = vec![0usize];
    for _ in 0..depth {
        let mut next = Vec::new();
        for &node in &frontier {
            let last = projection[node];
            for &(c, w) in g.successors(last) {
                let child = ids.len();
                ids.push(format!("{}/{}/{}", ids[node], g.color_name(c), g.id(w)));
                projection.push(w);
                edges.push((node, c, child));
                next.push(child);
            }
        }
        frontier = next;
    }
    let graph = ColoredGraph::new(g.alphabet().to_vec(), ids, edges, GraphKind::Pregraph)
        .expect("unfolding is a valid pregraph");
    RootedTree { graph, root: 0, projection }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    fn loop_a() -> ColoredGraph {
        let mut b = GraphBuilder::new(&["a"]);
        b.named_edge("v", "a", "v");
        b.build(GraphKind::Graph).unwrap()
    }

    fn two_cycle() -> ColoredGraph {
        let mut b = GraphBuilder::new(&["a", "b"]);
        b.named_edge("v", "a", "w").named_edge("w", "b", "v");
        b.build(GraphKind::Graph).unwrap()
    }

    #[test]
    fn validate_examples() {
        assert!(loop_a().is_graph());
        let err = ColoredGraph::from_named(&names(&["a"]), &names(&["v"]), &[], GraphKind::Graph);
        assert_eq!(err, Err(Error::Sinks(vec!["v".into()])));
        let chain = ColoredGraph::from_named(
            &names(&["a"]),
            &names(&["v", "w"]),
            &[("v".into(), "a".into(), "w".into())],
            GraphKind::Pregraph,
        )
        .unwrap();
        assert_eq!(chain.sinks(), vec![1]);
    }

    #[test]
    fn validate_errors() {
        let e = |edges: &[(&str, &str, &str)], vs: &[&str]| {
            let edges: Vec<_> = edges
                .iter()
                .map(|(a, b, c)| (a.to_string(), b.to_string(), c.to_string()))
                .collect();
            ColoredGraph::from_named(&names(&["a"]), &names(vs), &edges, GraphKind::Pregraph)
        };
        assert!(matches!(e(&[("v", "a", "x")], &["v"]), Err(Error::DanglingEndpoint(_))));
        assert!(matches!(e(&[("v", "z", "v")], &["v"]), Err(Error::UnknownColor(_))));
        assert!(matches!(e(&[], &["v", "v"]), Err(Error::DuplicateVertex(_))));
    }

    #[test]
    fn edges_are_canonical() {
        let mut b = GraphBuilder::new(&["a", "b"]);
        b.named_edge("v", "b", "v").named_edge("v", "a", "v").named_edge("v", "b", "v");
        let g = b.build(GraphKind::Graph).unwrap();
        assert_eq!(g.edges(), &[(0, Color(0), 0), (0, Color(1), 0)]);
    }

    #[test]
    fn morphism_examples() {
        let g = two_cycle();
        assert_eq!(check_morphism(&g, &g, &[0, 1]), Ok(None));
        let collapsed = loop_a();
        let witness = check_morphism(&g, &collapsed, &[0, 0]).unwrap();
        assert_eq!(witness, Some((1, Color(1), 0)));
        assert!(matches!(check_morphism(&g, &g, &[0]), Err(Error::MapNotTotal { .. })));
    }

    #[test]
    fn morphism_search_examples() {
        let g = two_cycle();
        assert_eq!(find_graph_morphism(&g, &g, None), Some(vec![0, 1]));
        let mut b = GraphBuilder::new(&["a", "b"]);
        b.named_edge("x", "b", "y").named_edge("y", "a", "y").named_edge("y", "b", "x");
        let target = b.build(GraphKind::Graph).unwrap();
        let m = find_graph_morphism(&loop_a(), &target, None).unwrap();
        assert_eq!(m, vec![1]);
        assert_eq!(find_graph_morphism(&g, &loop_a(), None), None);
    }

    #[test]
    fn unfold_examples() {
        let t = unfold(&loop_a(), 0, 3);
        assert_eq!(t.graph.vertex_count(), 4);
        assert!(t.check());
        let t = unfold(&two_cycle(), 0, 2);
        assert_eq!(t.graph.ids(), &["v", "v/a/w", "v/a/w/b/v"]);
        let mut b = GraphBuilder::new(&["a", "b"]);
        b.named_edge("v", "a", "v").named_edge("v", "b", "v");
        let t = unfold(&b.build(GraphKind::Graph).unwrap(), 0, 2);
        assert_eq!(t.graph.vertex_count(), 7);
        assert_eq!(check_morphism(&t.graph, &b_graph_base(), &t.projection), Ok(None));
    }

    fn b_graph_base() -> ColoredGraph {
        let mut b = GraphBuilder::new(&["a", "b"]);
        b.named_edge("v", "a", "v").named_edge("v", "b", "v");
        b.build(GraphKind::Graph).unwrap()
    }

    #[test]
    fn restrict_examples() {
        let g = two_cycle();
        let all: BTreeSet<usize> = [0, 1].into();
        assert_eq!(g.restrict(&all).0.edges(), g.edges());
        let (empty, _) = g.restrict(&BTreeSet::new());
        assert_eq!(empty.vertex_count(), 0);
        let (one, old) = g.restrict(&[0].into());
        assert!(one.edges().is_empty());
        assert_eq!(old, vec![0]);
    }

    #[test]
    fn reachability_and_sccs() {
        assert_eq!(loop_a().reachable_from(0), [0].into());
        assert_eq!(loop_a().sccs(), vec![vec![0]]);
        assert_eq!(two_cycle().sccs(), vec![vec![0, 1]]);
        let mut b = GraphBuilder::new(&["a"]);
        b.named_edge("v", "a", "w");
        let chain = b.build(GraphKind::Pregraph).unwrap();
        assert_eq!(chain.sccs(), vec![vec![1], vec![0]]);
    }

    #[test]
    fn dot_shapes() {
        let g = two_cycle();
        let dot = g.to_dot("g", Some(&[Owner::Eve, Owner::Adam]));
        assert!(dot.contains("\"v\" [shape=circle]"));
        assert!(dot.contains("\"w\" [shape=box]"));
        assert!(dot.contains("\"v\" -> \"w\" [label=\"a\"]"));
    }
}
