//! Partial orders on graph vertices: monotonicity, width, chain covers and
//! ε-separated structures.

use std::fmt;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::graph::{Color, ColoredGraph, GraphKind};

/// A colored graph with a partial order on its vertices, stored closed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderedGraph {
    graph: ColoredGraph,
    /// `up[v]` is the set of `u` with `v <= u`.
    up: Vec<FixedBitSet>,
    /// `down[v]` is the set of `u` with `u <= v`.
    down: Vec<FixedBitSet>,
}

/// A violation `u >= v -c-> v2 >= u2` without the edge `u -c-> u2`.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct MonotoneWitness {
    pub u: usize,
    pub v: usize,
    pub v2: usize,
    pub u2: usize,
    pub color: Color,
}

impl OrderedGraph {
    /// Order generated by `pairs` of (lesser, greater) vertex indices.
    pub fn new(graph: ColoredGraph, pairs: &[(usize, usize)]) -> Result<Self> {
        let n = graph.vertex_count();
        let mut up = vec![FixedBitSet::with_capacity(n); n];
        for (v, row) in up.iter_mut().enumerate() {
            row.insert(v);
        }
        for &(a, b) in pairs {
            if a >= n || b >= n {
                return Err(Error::UnknownVertex(format!("#{}", a.max(b))));
            }
            up[a].insert(b);
        }
        for k in 0..n {
            let row_k = up[k].clone();
            for row in up.iter_mut() {
                if row.contains(k) {
                    row.union_with(&row_k);
                }
            }
        }
        for a in 0..n {
            for b in up[a].ones() {
                if b != a && up[b].contains(a) {
                    return Err(Error::NotAntisymmetric(
                        graph.id(a).to_string(),
                        graph.id(b).to_string(),
                    ));
                }
            }
        }
        Ok(Self::from_up(graph, up))
    }

    /// Order given by a predicate `leq(a, b)`, assumed to be a partial order.
    pub fn from_fn(graph: ColoredGraph, leq: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let n = graph.vertex_count();
        let mut pairs = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a != b && leq(a, b) {
                    pairs.push((a, b));
                }
            }
        }
        Self::new(graph, &pairs)
    }

    fn from_up(graph: ColoredGraph, up: Vec<FixedBitSet>) -> Self {
        let n = graph.vertex_count();
        let mut down = vec![FixedBitSet::with_capacity(n); n];
        for (a, row) in up.iter().enumerate() {
            for b in row.ones() {
                down[b].insert(a);
            }
        }
        OrderedGraph { graph, up, down }
    }

    pub fn graph(&self) -> &ColoredGraph {
        &self.graph
    }

    pub fn into_graph(self) -> ColoredGraph {
        self.graph
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.up[a].contains(b)
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq(a, b)
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.leq(a, b) || self.leq(b, a)
    }

    pub fn up_set(&self, v: usize) -> &FixedBitSet {
        &self.up[v]
    }

    pub fn down_set(&self, v: usize) -> &FixedBitSet {
        &self.down[v]
    }

    /// Covering pairs (lesser, greater); they generate the order.
    pub fn cover_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.vertex_count();
        let mut out = Vec::new();
        for a in 0..n {
            for b in self.up[a].ones() {
                if b == a {
                    continue;
                }
                let covered = self.up[a].ones().any(|c| c != a && c != b && self.up[c].contains(b));
                if !covered {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Same order over a graph with the same vertices but other edges.
    pub fn with_graph(&self, graph: ColoredGraph) -> Self {
        assert_eq!(graph.vertex_count(), self.vertex_count());
        OrderedGraph { graph, up: self.up.clone(), down: self.down.clone() }
    }

    /// Per color, successor sets as bitsets; ε (if used) comes last.
    fn successor_sets(&self) -> (Vec<Color>, Vec<Vec<FixedBitSet>>) {
        let n = self.vertex_count();
        let mut colors: Vec<Color> =
            (0..self.graph.alphabet().len()).map(|i| Color(i as u16)).collect();
        if self.graph.uses_eps() {
            colors.push(Color::EPS);
        }
        let mut succ = vec![vec![FixedBitSet::with_capacity(n); n]; colors.len()];
        for &(u, c, v) in self.graph.edges() {
            let ci = if c.is_eps() { colors.len() - 1 } else { c.index() };
            succ[ci][u].insert(v);
        }
        (colors, succ)
    }

    /// `None` when monotone; otherwise the lexicographically first violating
    /// quadruple ordered by (u, v, v2, u2, color).
    pub fn check_monotone(&self) -> Option<MonotoneWitness> {
        let (colors, succ) = self.successor_sets();
        let mut ok = true;
        'outer: for &(v, c, v2) in self.graph.edges() {
            let ci = if c.is_eps() { colors.len() - 1 } else { c.index() };
            for u in self.up[v].ones() {
                if !self.down[v2].is_subset(&succ[ci][u]) {
                    ok = false;
                    break 'outer;
                }
            }
        }
        if ok {
            return None;
        }
        let n = self.vertex_count();
        for u in 0..n {
            let mut best: Option<MonotoneWitness> = None;
            for v in self.down[u].ones() {
                for &(c, v2) in self.graph.successors(v) {
                    let ci = if c.is_eps() { colors.len() - 1 } else { c.index() };
                    for u2 in self.down[v2].ones() {
                        if !succ[ci][u].contains(u2) {
                            let w = MonotoneWitness { u, v, v2, u2, color: c };
                            let key = |w: &MonotoneWitness| (w.v, w.v2, w.u2, w.color);
                            if best.map_or(true, |b| key(&w) < key(&b)) {
                                best = Some(w);
                            }
                        }
                    }
                }
            }
            if best.is_some() {
                return best;
            }
        }
        unreachable!("fast check found a violation")
    }

    /// Human-readable witness.
    pub fn describe_witness(&self, w: &MonotoneWitness) -> String {
        let g = &self.graph;
        format!(
            "{} >= {} -{}-> {} >= {} but no edge {} -{}-> {}",
            g.id(w.u),
            g.id(w.v),
            g.color_name(w.color),
            g.id(w.v2),
            g.id(w.u2),
            g.id(w.u),
            g.color_name(w.color),
            g.id(w.u2)
        )
    }

    /// Smallest monotone edge set containing the current one.
    pub fn close_monotone(&self) -> OrderedGraph {
        let n = self.vertex_count();
        let (colors, succ) = self.successor_sets();
        let mut edges = Vec::new();
        for (ci, &c) in colors.iter().enumerate() {
            // Down-closure of successor sets, then union over lower sources.
            let closed: Vec<FixedBitSet> = (0..n)
                .map(|v| {
                    let mut s = FixedBitSet::with_capacity(n);
                    for w in succ[ci][v].ones() {
                        s.union_with(&self.down[w]);
                    }
                    s
                })
                .collect();
            for u in 0..n {
                let mut t = FixedBitSet::with_capacity(n);
                for v in self.down[u].ones() {
                    t.union_with(&closed[v]);
                }
                for w in t.ones() {
                    edges.push((u, c, w));
                }
            }
        }
        let g = ColoredGraph::new(
            self.graph.alphabet().to_vec(),
            self.graph.ids().to_vec(),
            edges,
            self.graph.kind(),
        )
        .expect("closure of a valid graph is valid");
        self.with_graph(g)
    }

    /// Maximum matching on the strict order, as `next[a] = Some(b)` with a < b.
    fn chain_matching(&self, subset: &[usize]) -> Vec<Option<usize>> {
        let n = self.vertex_count();
        let mut in_subset = vec![false; n];
        for &v in subset {
            in_subset[v] = true;
        }
        let mut match_right: Vec<Option<usize>> = vec![None; n];
        let mut next: Vec<Option<usize>> = vec![None; n];
        for &a in subset {
            let mut visited = vec![false; n];
            self.augment(a, &in_subset, &mut visited, &mut match_right, &mut next);
        }
        next
    }

    fn augment(
        &self,
        a: usize,
        in_subset: &[bool],
        visited: &mut [bool],
        match_right: &mut [Option<usize>],
        next: &mut [Option<usize>],
    ) -> bool {
        for b in self.up[a].ones() {
            if b == a || !in_subset[b] || visited[b] {
                continue;
            }
            visited[b] = true;
            let free = match match_right[b] {
                None => true,
                Some(a2) => self.augment(a2, in_subset, visited, match_right, next),
            };
            if free {
                match_right[b] = Some(a);
                next[a] = Some(b);
                return true;
            }
        }
        false
    }

    fn width_of(&self, subset: &[usize]) -> usize {
        let next = self.chain_matching(subset);
        subset.len() - subset.iter().filter(|&&a| next[a].is_some()).count()
    }

    /// Size of a maximum antichain.
    pub fn width(&self) -> Result<usize> {
        if self.vertex_count() == 0 {
            return Err(Error::EmptyPoset);
        }
        let all: Vec<usize> = (0..self.vertex_count()).collect();
        Ok(self.width_of(&all))
    }

    /// Width together with the lexicographically smallest (by identifier)
    /// maximum antichain.
    pub fn poset_width(&self) -> Result<(usize, Vec<usize>)> {
        let width = self.width()?;
        let mut order: Vec<usize> = (0..self.vertex_count()).collect();
        order.sort_by(|&a, &b| self.graph.id(a).cmp(self.graph.id(b)));
        let mut chosen: Vec<usize> = Vec::new();
        for &x in &order {
            if chosen.len() == width {
                break;
            }
            if chosen.iter().any(|&y| self.comparable(x, y)) {
                continue;
            }
            let pool: Vec<usize> = (0..self.vertex_count())
                .filter(|&z| z != x && !self.comparable(z, x))
                .filter(|&z| chosen.iter().all(|&y| !self.comparable(z, y)))
                .collect();
            let rest = if pool.is_empty() { 0 } else { self.width_of(&pool) };
            if chosen.len() + 1 + rest == width {
                chosen.push(x);
            }
        }
        debug_assert_eq!(chosen.len(), width);
        chosen.sort_by(|&a, &b| self.graph.id(a).cmp(self.graph.id(b)));
        Ok((width, chosen))
    }

    /// Minimum chain cover from the matching. Each chain is listed bottom-up;
    /// chains are ordered by their bottom element.
    pub fn chain_decomposition(&self) -> Vec<Vec<usize>> {
        let n = self.vertex_count();
        let all: Vec<usize> = (0..n).collect();
        let next = self.chain_matching(&all);
        let mut has_pred = vec![false; n];
        for b in next.iter().flatten() {
            has_pred[*b] = true;
        }
        let mut chains = Vec::new();
        for start in 0..n {
            if has_pred[start] {
                continue;
            }
            let mut chain = vec![start];
            let mut cur = start;
            while let Some(b) = next[cur] {
                chain.push(b);
                cur = b;
            }
            chains.push(chain);
        }
        chains.sort_by_key(|c| c[0]);
        chains
    }
}

/// Update function of a chromatic ε-separated graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChromaticTag {
    /// `update[m][c]` for each ordinary color index `c`.
    pub update: Vec<Vec<usize>>,
    /// Image of ε; must be the identity.
    pub eps: Vec<usize>,
}

impl ChromaticTag {
    pub fn new(update: Vec<Vec<usize>>) -> Self {
        let eps = (0..update.len()).collect();
        ChromaticTag { update, eps }
    }

    pub fn apply(&self, m: usize, c: Color) -> usize {
        if c.is_eps() {
            self.eps[m]
        } else {
            self.update[m][c.index()]
        }
    }
}

/// A monotone graph whose order is its ε-relation, split into chains.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpsSeparatedGraph {
    pub graph: ColoredGraph,
    pub part: Vec<usize>,
    pub part_names: Vec<String>,
    pub tag: Option<ChromaticTag>,
}

/// Failed clause of the ε-separation or chromatic conditions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SeparationViolation {
    NotReflexive(String),
    NotTransitive(String, String, String),
    NotAntisymmetric(String, String),
    CrossingEps(String, String),
    NotAChain(String, String),
    NotMonotone(String),
    WrongPart { edge: (String, String, String), expected: String, found: String },
    EpsMovesPart(String),
    PartitionNotTotal,
}

impl fmt::Display for SeparationViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use SeparationViolation::*;
        match self {
            NotReflexive(v) => write!(f, "reflexivity: no eps-loop on {v}"),
            NotTransitive(a, b, c) => write!(f, "transitivity: {a} -eps-> {b} -eps-> {c} not closed"),
            NotAntisymmetric(a, b) => write!(f, "antisymmetry: eps-edges both ways between {a} and {b}"),
            CrossingEps(a, b) => write!(f, "separation: eps-edge {a} -> {b} crosses parts"),
            NotAChain(a, b) => write!(f, "chain: {a} and {b} share a part but are incomparable"),
            NotMonotone(w) => write!(f, "monotonicity: {w}"),
            WrongPart { edge, expected, found } => write!(
                f,
                "chromatic: edge {} -{}-> {} lands in part {found}, update gives {expected}",
                edge.0, edge.1, edge.2
            ),
            EpsMovesPart(m) => write!(f, "chromatic: update({m}, eps) != {m}"),
            PartitionNotTotal => write!(f, "partition does not cover every vertex"),
        }
    }
}

/// Validates the ε-separation invariants.
pub fn check_eps_separated(
    g: &ColoredGraph,
    part: &[usize],
) -> std::result::Result<(), SeparationViolation> {
    use SeparationViolation::*;
    let n = g.vertex_count();
    if part.len() != n {
        return Err(PartitionNotTotal);
    }
    let eps = |a: usize, b: usize| g.has_edge(a, Color::EPS, b);
    for v in 0..n {
        if !eps(v, v) {
            return Err(NotReflexive(g.id(v).into()));
        }
    }
    for &(a, c, b) in g.edges() {
        if !c.is_eps() {
            continue;
        }
        if part[a] != part[b] {
            return Err(CrossingEps(g.id(a).into(), g.id(b).into()));
        }
        if a != b && eps(b, a) {
            return Err(NotAntisymmetric(g.id(a).into(), g.id(b).into()));
        }
        for &(c2, d) in g.successors(b) {
            if c2.is_eps() && !eps(a, d) {
                return Err(NotTransitive(g.id(a).into(), g.id(b).into(), g.id(d).into()));
            }
        }
    }
    for a in 0..n {
        for b in a + 1..n {
            if part[a] == part[b] && !eps(a, b) && !eps(b, a) {
                return Err(NotAChain(g.id(a).into(), g.id(b).into()));
            }
        }
    }
    let og = ordered_by_eps(g);
    if let Some(w) = og.check_monotone() {
        return Err(NotMonotone(og.describe_witness(&w)));
    }
    Ok(())
}

/// Validates that every edge follows the update function.
pub fn check_chromatic(
    g: &ColoredGraph,
    part: &[usize],
    part_names: &[String],
    tag: &ChromaticTag,
) -> std::result::Result<(), SeparationViolation> {
    if part.len() != g.vertex_count() {
        return Err(SeparationViolation::PartitionNotTotal);
    }
    for (m, &e) in tag.eps.iter().enumerate() {
        if e != m {
            return Err(SeparationViolation::EpsMovesPart(part_names[m].clone()));
        }
    }
    for &(u, c, v) in g.edges() {
        let expected = tag.apply(part[u], c);
        if expected != part[v] {
            return Err(SeparationViolation::WrongPart {
                edge: (g.id(u).into(), g.color_name(c).into(), g.id(v).into()),
                expected: part_names[expected].clone(),
                found: part_names[part[v]].clone(),
            });
        }
    }
    Ok(())
}

fn ordered_by_eps(g: &ColoredGraph) -> OrderedGraph {
    let n = g.vertex_count();
    let mut up = vec![FixedBitSet::with_capacity(n); n];
    for &(a, c, b) in g.edges() {
        if c.is_eps() {
            // a -eps-> b means b <= a.
            up[b].insert(a);
        }
    }
    OrderedGraph::from_up(g.clone(), up)
}

impl EpsSeparatedGraph {
    pub fn breadth(&self) -> usize {
        self.part_names.len()
    }

    /// The ordered graph whose order is the ε-relation (ε-edges kept).
    pub fn as_ordered(&self) -> OrderedGraph {
        ordered_by_eps(&self.graph)
    }

    pub fn validate(&self) -> std::result::Result<(), SeparationViolation> {
        check_eps_separated(&self.graph, &self.part)?;
        if let Some(tag) = &self.tag {
            check_chromatic(&self.graph, &self.part, &self.part_names, tag)?;
        }
        Ok(())
    }

    /// Parts visited along a path of colors from part `m`.
    pub fn run_update(&self, m: usize, colors: &[Color]) -> Option<Vec<usize>> {
        let tag = self.tag.as_ref()?;
        let mut parts = vec![m];
        let mut cur = m;
        for &c in colors {
            cur = tag.apply(cur, c);
            parts.push(cur);
        }
        Some(parts)
    }
}

/// ε-separation along a minimum chain cover.
pub fn eps_separate(og: &OrderedGraph) -> Result<EpsSeparatedGraph> {
    let chains = og.chain_decomposition();
    let mut part = vec![0; og.vertex_count()];
    for (i, chain) in chains.iter().enumerate() {
        for &v in chain {
            part[v] = i;
        }
    }
    let names = (0..chains.len()).map(|i| format!("m{i}")).collect();
    eps_separate_with(og, part, names, None)
}

/// ε-separation along a given partition into chains.
pub fn eps_separate_with(
    og: &OrderedGraph,
    part: Vec<usize>,
    part_names: Vec<String>,
    tag: Option<ChromaticTag>,
) -> Result<EpsSeparatedGraph> {
    if let Some(w) = og.check_monotone() {
        return Err(Error::NotMonotone(og.describe_witness(&w)));
    }
    let g = og.graph();
    let n = g.vertex_count();
    if part.len() != n || part.iter().any(|&m| m >= part_names.len()) {
        return Err(Error::Precondition("partition must cover every vertex".into()));
    }
    let mut edges: Vec<(usize, Color, usize)> =
        g.edges().iter().copied().filter(|e| !e.1.is_eps()).collect();
    for a in 0..n {
        for b in 0..n {
            if part[a] != part[b] {
                continue;
            }
            if !og.comparable(a, b) {
                return Err(Error::Precondition(format!(
                    "part {} is not a chain: {} and {}",
                    part_names[part[a]],
                    g.id(a),
                    g.id(b)
                )));
            }
            if og.leq(b, a) {
                edges.push((a, Color::EPS, b));
            }
        }
    }
    let graph = ColoredGraph::new(g.alphabet().to_vec(), g.ids().to_vec(), edges, GraphKind::Pregraph)?;
    let graph = if og.graph().kind() == GraphKind::Graph { graph.with_kind(GraphKind::Graph)? } else { graph };
    Ok(EpsSeparatedGraph { graph, part, part_names, tag })
}

/// Every antichain of `og` of maximum size, by brute force (tests only).
pub fn brute_force_width(og: &OrderedGraph) -> usize {
    let n = og.vertex_count();
    assert!(n <= 20);
    let mut best = 0;
    for mask in 0u32..(1u32 << n) {
        let members: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        if members.len() <= best {
            continue;
        }
        let anti = members
            .iter()
            .enumerate()
            .all(|(i, &a)| members[i + 1..].iter().all(|&b| !og.comparable(a, b)));
        if anti {
            best = members.len();
        }
    }
    best
}
