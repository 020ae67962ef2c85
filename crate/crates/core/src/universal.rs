//! Universal-graph constructions with a finite bound standing in for every
//! ordinal counter.
//!
//! All constructions return ordered graphs over named colors. Where the
//! structure is naturally split into chains with a color-driven update, an
//! ε-separated graph is returned instead.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::graph::{Color, ColoredGraph, GraphBuilder, GraphKind};
use crate::objective::builtin::{self, letter_alphabet, Params};
use crate::objective::{satisfying_vertices, Objective};
use crate::order::{eps_separate_with, ChromaticTag, EpsSeparatedGraph, OrderedGraph};
use crate::zielonka::{build_zielonka, ZielonkaTree};

/// Either kind of universal structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Universal {
    Ordered(OrderedGraph),
    Separated(EpsSeparatedGraph),
}

impl Universal {
    /// The ordered view (for ε-separated graphs, ordered by ε).
    pub fn ordered(&self) -> OrderedGraph {
        match self {
            Universal::Ordered(o) => o.clone(),
            Universal::Separated(s) => s.as_ordered(),
        }
    }

    pub fn graph(&self) -> &ColoredGraph {
        match self {
            Universal::Ordered(o) => o.graph(),
            Universal::Separated(s) => &s.graph,
        }
    }

    /// Graphviz rendering with one box per chain (or part). Edges implied by
    /// monotonicity from another edge are left out.
    pub fn to_dot(&self, name: &str) -> String {
        use std::fmt::Write as _;
        let og = self.ordered();
        let g = og.graph();
        let groups: Vec<(String, Vec<usize>)> = match self {
            Universal::Ordered(o) => {
                o.chain_decomposition().into_iter().enumerate().map(|(i, c)| (format!("c{i}"), c)).collect()
            }
            Universal::Separated(s) => s
                .part_names
                .iter()
                .enumerate()
                .map(|(i, n)| (n.clone(), (0..g.vertex_count()).filter(|&v| s.part[v] == i).collect()))
                .collect(),
        };
        let q = crate::graph::dot_quote;
        let mut out = String::new();
        let _ = writeln!(out, "digraph {} {{", q(name));
        for (i, (label, members)) in groups.iter().enumerate() {
            let _ = writeln!(out, "  subgraph cluster_{i} {{\n    label={};\n    style=rounded;", q(label));
            for &v in members {
                let _ = writeln!(out, "    {} [shape=circle];", q(g.id(v)));
            }
            out.push_str("  }\n");
        }
        let edges = g.edges();
        for &(u, c, v) in edges {
            let derived = edges.iter().any(|&(u2, c2, v2)| {
                c2 == c && (u2, v2) != (u, v) && og.leq(u2, u) && og.leq(v, v2)
            });
            if !derived {
                let _ = writeln!(out, "  {} -> {} [label={}];", q(g.id(u)), q(g.id(v)), q(g.color_name(c)));
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Graph with an order given by generator pairs, built by vertex name.
struct Draft {
    builder: GraphBuilder,
    less: Vec<(usize, usize)>,
}

impl Draft {
    fn new<S: AsRef<str>>(alphabet: &[S]) -> Self {
        Draft { builder: GraphBuilder::new(alphabet), less: Vec::new() }
    }

    fn v(&mut self, id: impl Into<String>) -> usize {
        self.builder.vertex(id)
    }

    fn e(&mut self, u: usize, c: &str, v: usize) {
        let c = self.builder.color(c);
        self.builder.edge(u, c, v);
    }

    fn chain(&mut self, vs: &[usize]) {
        for w in vs.windows(2) {
            self.less.push((w[0], w[1]));
        }
    }

    fn finish(self, kind: GraphKind) -> Result<OrderedGraph> {
        let g = self.builder.build(kind)?;
        OrderedGraph::new(g, &self.less)
    }
}

fn check_bound(bound: usize) -> Result<()> {
    if bound == 0 {
        return Err(Error::BadParams("bound must be at least 1".into()));
    }
    Ok(())
}

/// Copies of `u` indexed by `0..bound`; copy index dominates the order and
/// every color points from a higher copy to every lower one.
pub fn ltimes_repeat(u: &OrderedGraph, bound: usize) -> Result<OrderedGraph> {
    let all: Vec<usize> = (0..u.graph().alphabet().len()).collect();
    ltimes_repeat_on(u, bound, &all)
}

/// As [`ltimes_repeat`], with the downward edges restricted to `colors`.
fn ltimes_repeat_on(u: &OrderedGraph, bound: usize, colors: &[usize]) -> Result<OrderedGraph> {
    check_bound(bound)?;
    let g = u.graph();
    let n = g.vertex_count();
    let id = |v: usize, l: usize| v + l * n;
    let ids: Vec<String> = (0..bound).flat_map(|l| (0..n).map(move |v| (v, l))).map(|(v, l)| format!("{}@{l}", g.id(v))).collect();
    let mut edges = Vec::new();
    for l in 0..bound {
        for &(a, c, b) in g.edges() {
            edges.push((id(a, l), c, id(b, l)));
        }
        for l2 in 0..l {
            for a in 0..n {
                for b in 0..n {
                    for &c in colors {
                        edges.push((id(a, l), Color(c as u16), id(b, l2)));
                    }
                }
            }
        }
    }
    let graph = ColoredGraph::new(g.alphabet().to_vec(), ids, edges, g.kind())?;
    let mut less = Vec::new();
    for l in 0..bound {
        for (a, b) in u.cover_pairs() {
            less.push((id(a, l), id(b, l)));
        }
        if l + 1 < bound {
            // every vertex of copy l below every vertex of copy l + 1
            for a in 0..n {
                for b in 0..n {
                    less.push((id(a, l), id(b, l + 1)));
                }
            }
        }
    }
    OrderedGraph::new(graph, &less)
}

/// Recursive construction over the Zielonka tree of a Muller family.
pub fn muller_universal(obj: &Objective, bound: usize) -> Result<OrderedGraph> {
    check_bound(bound)?;
    let tree = build_zielonka(obj)?;
    muller_node(&tree, 0, bound)
}

fn muller_node(tree: &ZielonkaTree, n: usize, bound: usize) -> Result<OrderedGraph> {
    let node = &tree.nodes[n];
    let alphabet = &tree.universe;
    let colors: Vec<usize> = (0..alphabet.len()).filter(|&i| node.label >> i & 1 == 1).collect();
    if node.children.is_empty() {
        let mut d = Draft::new(alphabet);
        if node.positive {
            let v = d.v(tree.names(node.label).concat());
            for &c in &colors {
                d.e(v, &alphabet[c], v);
            }
            return d.finish(GraphKind::Graph);
        }
        let vs: Vec<usize> = (0..bound).map(|x| d.v(x.to_string())).collect();
        for x in 0..bound {
            for y in 0..x {
                for &c in &colors {
                    d.e(vs[x], &alphabet[c], vs[y]);
                }
            }
        }
        d.chain(&vs);
        return d.finish(GraphKind::Pregraph);
    }
    let parts: Vec<(String, OrderedGraph, u64)> = node
        .children
        .iter()
        .map(|&c| {
            let label = tree.names(tree.nodes[c].label).concat();
            muller_node(tree, c, bound).map(|g| (label, g, tree.nodes[c].label))
        })
        .collect::<Result<_>>()?;
    let mut ids = Vec::new();
    let mut offset = Vec::new();
    for (label, g, _) in &parts {
        offset.push(ids.len());
        ids.extend(g.graph().ids().iter().map(|v| format!("{label}.{v}")));
    }
    let mut edges = Vec::new();
    let mut less = Vec::new();
    for (i, (_, g, _)) in parts.iter().enumerate() {
        for &(a, c, b) in g.graph().edges() {
            edges.push((offset[i] + a, c, offset[i] + b));
        }
        for (a, b) in g.cover_pairs() {
            less.push((offset[i] + a, offset[i] + b));
        }
    }
    let s = parts.len();
    let size = |i: usize| parts[i].1.vertex_count();
    if node.positive {
        for i in 0..s {
            let j = (i + 1) % s;
            let sub = parts[i].2;
            for &c in colors.iter().filter(|&&c| sub >> c & 1 == 0) {
                for a in 0..size(i) {
                    for b in 0..size(j) {
                        edges.push((offset[i] + a, Color(c as u16), offset[j] + b));
                    }
                }
            }
        }
        let g = ColoredGraph::new(alphabet.clone(), ids, edges, GraphKind::Pregraph)?;
        OrderedGraph::new(g, &less)
    } else {
        for i in 0..s {
            for j in 0..i {
                for a in 0..size(i) {
                    for b in 0..size(j) {
                        for &c in &colors {
                            edges.push((offset[i] + a, Color(c as u16), offset[j] + b));
                        }
                        if i == j + 1 {
                            less.push((offset[j] + b, offset[i] + a));
                        }
                    }
                }
            }
        }
        let g = ColoredGraph::new(alphabet.clone(), ids, edges, GraphKind::Pregraph)?;
        ltimes_repeat_on(&OrderedGraph::new(g, &less)?, bound, &colors)
    }
}

/// Left-quotient graph of a safety objective together with its top vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientGraph {
    pub graph: OrderedGraph,
    pub top: usize,
    /// The objective is empty and the graph is the top vertex alone.
    pub degenerate: bool,
}

/// Nonempty left quotients of a safety objective ordered by inclusion, with
/// edges `[u] -c-> [v]` for every `[v] <= [uc]`, plus a top vertex.
pub fn safety_quotient_universal(obj: &Objective) -> Result<QuotientGraph> {
    let Objective::Safety { alphabet, dfa } = obj else {
        return Err(Error::InvalidObjective("safety objective expected".into()));
    };
    obj.validate()?;
    let mon = obj.monitor();
    let live: Vec<bool> = (0..dfa.states.len()).map(|q| mon.live(q)).collect();
    let k = alphabet.len();
    // Reachable live states with their shortest access words.
    let mut access: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    if live[dfa.initial] {
        access.insert(dfa.initial, Vec::new());
        let mut queue = VecDeque::from([dfa.initial]);
        while let Some(q) = queue.pop_front() {
            for c in 0..k {
                let q2 = dfa.delta[q][c];
                if live[q2] && !access.contains_key(&q2) {
                    let mut w = access[&q].clone();
                    w.push(c);
                    access.insert(q2, w);
                    queue.push_back(q2);
                }
            }
        }
    }
    // L(p) is included in L(q) iff no word keeps p live while killing q.
    let included = |p: usize, q: usize| -> bool {
        let mut seen = BTreeSet::from([(p, q)]);
        let mut queue = VecDeque::from([(p, q)]);
        while let Some((x, y)) = queue.pop_front() {
            if live[x] && !live[y] {
                return false;
            }
            if !live[x] {
                continue;
            }
            for c in 0..k {
                let pair = (dfa.delta[x][c], dfa.delta[y][c]);
                if seen.insert(pair) {
                    queue.push_back(pair);
                }
            }
        }
        true
    };
    // Classes of language-equivalent states; representative = first by access word.
    let mut reps: Vec<usize> = Vec::new();
    let mut class_of: HashMap<usize, usize> = HashMap::new();
    let mut by_word: Vec<(&Vec<usize>, usize)> = access.iter().map(|(&q, w)| (w, q)).collect();
    by_word.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then(a.0.cmp(b.0)));
    for &(_, q) in &by_word {
        match reps.iter().position(|&r| included(r, q) && included(q, r)) {
            Some(i) => {
                class_of.insert(q, i);
            }
            None => {
                class_of.insert(q, reps.len());
                reps.push(q);
            }
        }
    }
    let word_name = |q: usize| -> String {
        let w = &access[&q];
        if w.is_empty() {
            "[eps]".to_string()
        } else {
            format!("[{}]", w.iter().map(|&c| alphabet[c].as_str()).collect::<Vec<_>>().join(""))
        }
    };
    let mut d = Draft::new(alphabet);
    let vs: Vec<usize> = reps.iter().map(|&q| d.v(word_name(q))).collect();
    let top = d.v("top");
    for (i, &p) in reps.iter().enumerate() {
        for c in 0..k {
            let q2 = dfa.delta[p][c];
            if !live[q2] {
                continue;
            }
            for (j, &r) in reps.iter().enumerate() {
                if included(r, q2) {
                    d.e(vs[i], &alphabet[c], vs[j]);
                }
            }
        }
        for (j, &r) in reps.iter().enumerate() {
            if i != j && included(p, r) {
                d.less.push((vs[i], vs[j]));
            }
        }
        d.less.push((vs[i], top));
    }
    for c in alphabet {
        for &v in vs.iter().chain([&top]) {
            d.e(top, c, v);
        }
    }
    let degenerate = reps.is_empty();
    Ok(QuotientGraph { graph: d.finish(GraphKind::Pregraph)?, top, degenerate })
}

/// Lexicographic product: each vertex of `u2` is replaced by a copy of `u1`.
pub fn lexico_product(u1: &OrderedGraph, u2: &OrderedGraph) -> Result<OrderedGraph> {
    let (g1, g2) = (u1.graph(), u2.graph());
    for c in g2.alphabet() {
        if g1.alphabet().contains(c) {
            return Err(Error::AlphabetOverlap(c.clone()));
        }
    }
    let mut alphabet = g1.alphabet().to_vec();
    alphabet.extend(g2.alphabet().iter().cloned());
    let k1 = g1.alphabet().len();
    let (n1, n2) = (g1.vertex_count(), g2.vertex_count());
    let id = |x1: usize, x2: usize| x2 * n1 + x1;
    let mut ids = Vec::with_capacity(n1 * n2);
    for x2 in 0..n2 {
        for x1 in 0..n1 {
            ids.push(format!("({},{})", g1.id(x1), g2.id(x2)));
        }
    }
    let mut edges = Vec::new();
    for x2 in 0..n2 {
        for y2 in 0..n2 {
            if u2.lt(y2, x2) {
                for x1 in 0..n1 {
                    for y1 in 0..n1 {
                        for c in 0..k1 {
                            edges.push((id(x1, x2), Color(c as u16), id(y1, y2)));
                        }
                    }
                }
            }
        }
        for &(x1, c, y1) in g1.edges() {
            if !c.is_eps() {
                edges.push((id(x1, x2), c, id(y1, x2)));
            }
        }
    }
    for &(x2, c, y2) in g2.edges() {
        if c.is_eps() {
            continue;
        }
        let c = Color((c.index() + k1) as u16);
        for x1 in 0..n1 {
            for y1 in 0..n1 {
                edges.push((id(x1, x2), c, id(y1, y2)));
            }
        }
    }
    let graph = ColoredGraph::new(alphabet, ids, edges, GraphKind::Pregraph)?;
    OrderedGraph::from_fn(graph, |a, b| {
        let (a1, a2, b1, b2) = (a % n1, a / n1, b % n1, b / n1);
        u2.lt(a2, b2) || (a2 == b2 && u1.leq(a1, b1))
    })
}

fn same_alphabet(g1: &ColoredGraph, g2: &ColoredGraph) -> Result<Vec<Color>> {
    let a: BTreeSet<&String> = g1.alphabet().iter().collect();
    let b: BTreeSet<&String> = g2.alphabet().iter().collect();
    if a != b {
        return Err(Error::AlphabetMismatch);
    }
    Ok(g2.alphabet().iter().map(|c| g1.color_of(c).unwrap()).collect())
}

/// Coordinatewise product: an edge exists iff it exists in both factors.
pub fn direct_product(u1: &OrderedGraph, u2: &OrderedGraph) -> Result<OrderedGraph> {
    let (g1, g2) = (u1.graph(), u2.graph());
    let tr = same_alphabet(g1, g2)?;
    let (n1, n2) = (g1.vertex_count(), g2.vertex_count());
    let id = |x1: usize, x2: usize| x1 * n2 + x2;
    let mut ids = Vec::new();
    for x1 in 0..n1 {
        for x2 in 0..n2 {
            ids.push(format!("({},{})", g1.id(x1), g2.id(x2)));
        }
    }
    let mut edges = Vec::new();
    for &(x1, c, y1) in g1.edges() {
        for &(x2, c2, y2) in g2.edges() {
            let c2 = if c2.is_eps() { c2 } else { tr[c2.index()] };
            if c == c2 {
                edges.push((id(x1, x2), c, id(y1, y2)));
            }
        }
    }
    let graph = ColoredGraph::new(g1.alphabet().to_vec(), ids, edges, GraphKind::Pregraph)?;
    OrderedGraph::from_fn(graph, |a, b| u1.leq(a / n2, b / n2) && u2.leq(a % n2, b % n2))
}

/// Direct sum: the summands side by side, later ones above earlier ones,
/// with every color pointing from a later summand to every earlier one.
pub fn direct_sum(parts: &[OrderedGraph]) -> Result<OrderedGraph> {
    let first = parts.first().ok_or_else(|| Error::BadParams("empty sum".into()))?;
    let alphabet = first.graph().alphabet().to_vec();
    let mut ids = Vec::new();
    let mut offset = Vec::new();
    let mut edges = Vec::new();
    let mut less = Vec::new();
    for (i, p) in parts.iter().enumerate() {
        let tr = same_alphabet(first.graph(), p.graph())?;
        offset.push(ids.len());
        ids.extend(p.graph().ids().iter().map(|v| format!("{i}:{v}")));
        for &(a, c, b) in p.graph().edges() {
            let c = if c.is_eps() { c } else { tr[c.index()] };
            edges.push((offset[i] + a, c, offset[i] + b));
        }
        for (a, b) in p.cover_pairs() {
            less.push((offset[i] + a, offset[i] + b));
        }
    }
    for i in 0..parts.len() {
        for j in 0..i {
            for a in 0..parts[i].vertex_count() {
                for b in 0..parts[j].vertex_count() {
                    for c in 0..alphabet.len() {
                        edges.push((offset[i] + a, Color(c as u16), offset[j] + b));
                    }
                    if i == j + 1 {
                        less.push((offset[j] + b, offset[i] + a));
                    }
                }
            }
        }
    }
    let graph = ColoredGraph::new(alphabet, ids, edges, GraphKind::Pregraph)?;
    OrderedGraph::new(graph, &less)
}

/// Restriction to the vertices satisfying `obj`, plus a top vertex with every
/// outgoing edge and no incoming edge except its own loops.
pub fn top_complete(u: &OrderedGraph, obj: &Objective) -> Result<(OrderedGraph, usize)> {
    let g = u.graph();
    let sat = satisfying_vertices(g, obj)?;
    let keep: BTreeSet<usize> = (0..g.vertex_count()).filter(|&v| sat[v]).collect();
    let (sub, old) = g.restrict(&keep);
    let n = sub.vertex_count();
    let mut ids = sub.ids().to_vec();
    ids.push("top".into());
    let mut edges = sub.edges().to_vec();
    for c in 0..g.alphabet().len() {
        for v in 0..=n {
            edges.push((n, Color(c as u16), v));
        }
    }
    let graph = ColoredGraph::new(g.alphabet().to_vec(), ids, edges, GraphKind::Pregraph)?;
    let og = OrderedGraph::from_fn(graph, |a, b| b == n || (a < n && b < n && u.leq(old[a], old[b])))?;
    Ok((og, n))
}

/// Single vertex with a loop of color `c`.
pub fn trivially_winning(c: &str) -> OrderedGraph {
    let mut d = Draft::new(&[c]);
    let v = d.v("w");
    d.e(v, c, v);
    d.finish(GraphKind::Graph).expect("valid")
}

/// Chain `0..bound` with `x -c-> y` for `x > y`.
pub fn trivially_losing(c: &str, bound: usize) -> Result<OrderedGraph> {
    check_bound(bound)?;
    let mut d = Draft::new(&[c]);
    let vs: Vec<usize> = (0..bound).map(|x| d.v(x.to_string())).collect();
    for x in 0..bound {
        for y in 0..x {
            d.e(vs[x], c, vs[y]);
        }
    }
    d.chain(&vs);
    d.finish(GraphKind::Pregraph)
}

/// Lexicographic product of the layers for priorities `0..=max`: winning
/// layers for even priorities and losing chains of length `bound` for odd ones.
pub fn parity_universal(max: usize, bound: usize) -> Result<OrderedGraph> {
    let layer = |p: usize| -> Result<OrderedGraph> {
        let c = p.to_string();
        if p % 2 == 0 {
            Ok(trivially_winning(&c))
        } else {
            trivially_losing(&c, bound)
        }
    };
    let mut acc = layer(0)?;
    for p in 1..=max {
        acc = lexico_product(&acc, &layer(p)?)?;
    }
    Ok(acc)
}

/// Width-(n+1) graph for W3 over `{a, b}`.
pub fn w3_universal(m: usize, n: usize, bound: usize) -> Result<OrderedGraph> {
    check_bound(bound)?;
    if m == 0 || n == 0 {
        return Err(Error::BadParams("W3 needs m, n >= 1".into()));
    }
    let mut d = Draft::new(&["a", "b"]);
    let q: Vec<Vec<usize>> = (0..m).map(|j| (0..bound).map(|l| d.v(format!("q{j},{l}"))).collect()).collect();
    let p: Vec<usize> = (0..n).map(|i| d.v(format!("p{i}"))).collect();
    let boxed: Vec<usize> = (0..bound).map(|l| d.v(format!("p{n},{l}"))).collect();
    let top = d.v("top");
    let qs: Vec<usize> = q.iter().flatten().copied().collect();
    d.chain(&qs);
    d.chain(&boxed);
    for &x in p.iter().chain(&boxed[..1]) {
        d.less.push((*qs.last().unwrap(), x));
    }
    for &x in p.iter().chain(&boxed[bound - 1..]) {
        d.less.push((x, top));
    }
    for j in 0..m {
        for l in 0..bound {
            for l2 in 0..l {
                d.e(q[j][l], "b", q[j][l2]);
            }
            if j + 1 < m {
                for l2 in 0..bound {
                    d.e(q[j][l], "a", q[j + 1][l2]);
                }
            } else {
                d.e(q[j][l], "a", p[0]);
            }
        }
    }
    for i in 0..n {
        for c in ["a", "b"] {
            if i + 1 < n {
                d.e(p[i], c, p[i + 1]);
            } else {
                for &x in &boxed {
                    d.e(p[i], c, x);
                }
            }
        }
    }
    for l in 0..bound {
        for l2 in 0..l {
            d.e(boxed[l], "b", boxed[l2]);
        }
        d.e(boxed[l], "a", top);
    }
    let all: Vec<usize> = (0..d.builder.vertex_count()).collect();
    for c in ["a", "b"] {
        for &x in &all {
            d.e(top, c, x);
        }
    }
    Ok(d.finish(GraphKind::Pregraph)?.close_monotone())
}

/// Chromatic ε-separated graph of breadth n+1 for W3. Part `k` counts the
/// trailing `b`s (capped at n); `a` resets to part 0.
pub fn w3_chromatic(m: usize, n: usize, bound: usize) -> Result<EpsSeparatedGraph> {
    check_bound(bound)?;
    if m == 0 || n == 0 {
        return Err(Error::BadParams("W3 needs m, n >= 1".into()));
    }
    let parts = n + 1;
    let after_b = |k: usize| (k + 1).min(n);
    let mut d = Draft::new(&["a", "b"]);
    let mut q = vec![vec![vec![0usize; bound]; m]; parts];
    let mut r = vec![vec![Vec::new(); n + 1]; parts];
    let mut top = vec![0usize; parts];
    let mut part_of: Vec<usize> = Vec::new();
    for k in 0..parts {
        let mut chain = Vec::new();
        for j in 0..m {
            for l in 0..bound {
                q[k][j][l] = d.v(format!("q{j},{l}|{k}"));
                chain.push(q[k][j][l]);
            }
        }
        for i in k..n {
            r[k][i] = vec![d.v(format!("r{i}|{k}"))];
            chain.push(r[k][i][0]);
        }
        r[k][n] = (0..bound).map(|l| d.v(format!("r{n},{l}|{k}"))).collect();
        chain.extend(r[k][n].iter().copied());
        top[k] = d.v(format!("top|{k}"));
        chain.push(top[k]);
        d.chain(&chain);
        part_of.resize(d.builder.vertex_count(), k);
    }
    for k in 0..parts {
        let kb = after_b(k);
        for j in 0..m {
            for l in 0..bound {
                for l2 in 0..l {
                    d.e(q[k][j][l], "b", q[kb][j][l2]);
                }
                if j + 1 < m {
                    for l2 in 0..bound {
                        d.e(q[k][j][l], "a", q[0][j + 1][l2]);
                    }
                } else {
                    let target = r[0][0].clone();
                    for t in target {
                        d.e(q[k][j][l], "a", t);
                    }
                }
            }
        }
        for i in k..n {
            let src = r[k][i][0];
            let tb = r[kb][i + 1].clone();
            for t in tb {
                d.e(src, "b", t);
            }
            let ta = r[0][i + 1].clone();
            for t in ta {
                d.e(src, "a", t);
            }
        }
        for l in 0..bound {
            for l2 in 0..l {
                d.e(r[k][n][l], "b", r[kb][n][l2]);
            }
            d.e(r[k][n][l], "a", top[0]);
        }
        for (c, target) in [("a", 0), ("b", kb)] {
            let all: Vec<usize> = (0..part_of.len()).filter(|&v| part_of[v] == target).collect();
            for v in all {
                d.e(top[k], c, v);
            }
        }
    }
    let og = d.finish(GraphKind::Pregraph)?.close_monotone();
    let update = (0..parts).map(|k| vec![0, after_b(k)]).collect();
    let names = (0..parts).map(|k| format!("b{k}")).collect();
    eps_separate_with(&og, part_of, names, Some(ChromaticTag::new(update)))
}

/// Breadth-2 chromatic graph for W4 over `{a, b, c}` with chains
/// `(q,0) < (q,1) < ...` and `(p,0) < (p',0) < (p,1) < (p',1) < ...`.
pub fn w4_universal(bound: usize) -> Result<EpsSeparatedGraph> {
    check_bound(bound)?;
    let mut d = Draft::new(&["a", "b", "c"]);
    let q: Vec<usize> = (0..bound).map(|l| d.v(format!("q,{l}"))).collect();
    let mut p = Vec::new();
    let mut pp = Vec::new();
    let mut pchain = Vec::new();
    for l in 0..bound {
        p.push(d.v(format!("p,{l}")));
        pp.push(d.v(format!("p',{l}")));
        pchain.push(p[l]);
        pchain.push(pp[l]);
    }
    d.chain(&q);
    d.chain(&pchain);
    let rs = |l: usize| [p[l], pp[l]];
    for l in 0..bound {
        for l2 in 0..bound {
            // (1) b-edges inside Q
            d.e(q[l], "b", q[l2]);
        }
        for l2 in 0..l {
            for r in rs(l) {
                // (2) back to Q with a strict decrease
                d.e(r, "b", q[l2]);
            }
            for dcol in ["a", "c"] {
                for t in rs(l2) {
                    // (3) from Q into P with a strict decrease
                    d.e(q[l], dcol, t);
                    // (4) inside P with a strict decrease
                    for r in rs(l) {
                        d.e(r, dcol, t);
                    }
                }
            }
        }
        for r in rs(l) {
            for t in rs(l) {
                // (5) c-edges at the same level
                d.e(r, "c", t);
            }
        }
        // (6)
        d.e(pp[l], "a", p[l]);
    }
    let og = d.finish(GraphKind::Pregraph)?.close_monotone();
    let n = og.vertex_count();
    let part: Vec<usize> = (0..n).map(|v| usize::from(!og.graph().id(v).starts_with('q'))).collect();
    let tag = ChromaticTag::new(vec![vec![1, 0, 1], vec![1, 0, 1]]);
    eps_separate_with(&og, part, vec!["Q".into(), "P".into()], Some(tag))
}

/// Chromatic ε-separated graph of breadth |C| for W5. Part `x` holds the
/// columns of color `x`; every color moves to its own part.
pub fn w5_chromatic(k: usize, bound: usize) -> Result<EpsSeparatedGraph> {
    check_bound(bound)?;
    if k < 2 {
        return Err(Error::BadParams("W5 needs at least 2 colors".into()));
    }
    let alphabet = letter_alphabet(k);
    let mut pairs = Vec::new();
    for x in 0..k {
        for y in x + 1..k {
            pairs.push((x, y));
        }
    }
    let mut d = Draft::new(&alphabet);
    // vertex (lambda, g, x, mu)
    let mut id: HashMap<(usize, usize, usize, usize), usize> = HashMap::new();
    let mut part_of = Vec::new();
    for x in 0..k {
        let mut chain = Vec::new();
        for lam in 0..bound {
            for (gi, &(g0, g1)) in pairs.iter().enumerate() {
                if x != g0 && x != g1 {
                    continue;
                }
                for mu in 0..bound {
                    let v = d.v(format!("{}{}:{}@{lam},{mu}", alphabet[g0], alphabet[g1], alphabet[x]));
                    id.insert((lam, gi, x, mu), v);
                    chain.push(v);
                }
            }
        }
        d.chain(&chain);
        part_of.resize(d.builder.vertex_count(), x);
    }
    let keys: Vec<(usize, usize, usize, usize)> = {
        let mut ks: Vec<_> = id.keys().copied().collect();
        ks.sort_unstable();
        ks
    };
    for &(lam, gi, x, mu) in &keys {
        let src = id[&(lam, gi, x, mu)];
        let (g0, g1) = pairs[gi];
        let y = if x == g0 { g1 } else { g0 };
        for mu2 in 0..mu {
            d.e(src, &alphabet[x], id[&(lam, gi, x, mu2)]);
        }
        for mu2 in 0..bound {
            d.e(src, &alphabet[y], id[&(lam, gi, y, mu2)]);
        }
        for c in 0..k {
            for &(lam2, gj, x2, mu2) in &keys {
                if x2 != c {
                    continue;
                }
                let lower_series = lam2 == lam && gj < gi;
                let lower_copy = lam2 < lam;
                if lower_series || lower_copy {
                    d.e(src, &alphabet[c], id[&(lam2, gj, x2, mu2)]);
                }
            }
        }
    }
    let og = d.finish(GraphKind::Pregraph)?.close_monotone();
    let update = (0..k).map(|_| (0..k).collect()).collect();
    eps_separate_with(&og, part_of, alphabet, Some(ChromaticTag::new(update)))
}

/// The width-2 graph for W1 split into its two columns.
pub fn w1_chromatic(bound: usize) -> Result<EpsSeparatedGraph> {
    let og = muller_universal(&builtin::w1(), bound)?;
    let part: Vec<usize> = (0..og.vertex_count()).map(|v| usize::from(og.graph().id(v).starts_with('b'))).collect();
    let tag = ChromaticTag::new(vec![vec![0, 1], vec![0, 1]]);
    eps_separate_with(&og, part, vec!["a-side".into(), "b-side".into()], Some(tag))
}

fn param(params: &Params, key: &str, default: usize) -> usize {
    params.get(key).copied().unwrap_or(default)
}

/// Builtin construction by name.
pub fn builtin_universal(name: &str, params: &Params, bound: usize) -> Result<Universal> {
    let colors = param(params, "colors", 3);
    match name.to_ascii_lowercase().as_str() {
        "w1" => Ok(Universal::Ordered(muller_universal(&builtin::w1(), bound)?)),
        "w1-chromatic" => Ok(Universal::Separated(w1_chromatic(bound)?)),
        "w2" => Ok(Universal::Ordered(safety_quotient_universal(&builtin::w2(colors)?)?.graph)),
        "alternation" => Ok(Universal::Ordered(safety_quotient_universal(&builtin::alternation())?.graph)),
        "w3" => Ok(Universal::Ordered(w3_universal(param(params, "m", 1), param(params, "n", 2), bound)?)),
        "w3-chromatic" => {
            Ok(Universal::Separated(w3_chromatic(param(params, "m", 1), param(params, "n", 2), bound)?))
        }
        "w4" => Ok(Universal::Separated(w4_universal(bound)?)),
        "w5" => Ok(Universal::Ordered(muller_universal(&builtin::w5(colors)?, bound)?)),
        "w5-chromatic" => Ok(Universal::Separated(w5_chromatic(colors, bound)?)),
        "parity" => Ok(Universal::Ordered(parity_universal(param(params, "max", 2), bound)?)),
        other => Err(Error::UnknownName(other.to_string())),
    }
}

/// Names accepted by [`builtin_universal`].
pub const BUILTIN_UNIVERSAL: &[&str] =
    &["w1", "w1-chromatic", "w2", "alternation", "w3", "w3-chromatic", "w4", "w5", "w5-chromatic", "parity"];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objective::builtin::{alternation, w1, w2, w3, w4, w5};
    use crate::objective::{graph_satisfies, SatMode};
    use crate::order::check_eps_separated;

    fn assert_monotone(og: &OrderedGraph) {
        if let Some(w) = og.check_monotone() {
            panic!("not monotone: {}", og.describe_witness(&w));
        }
    }

    #[test]
    fn muller_basic_cases() {
        let full = Objective::muller(&["a"], &[vec!["a"]]).unwrap();
        let u = muller_universal(&full, 3).unwrap();
        assert_eq!(u.vertex_count(), 1);
        assert_eq!(u.graph().edges().len(), 1);
        let empty = Objective::muller::<&str>(&["a"], &[]).unwrap();
        let u = muller_universal(&empty, 3).unwrap();
        assert_eq!(u.graph().ids(), &["0", "1", "2"]);
        assert_eq!(u.graph().edges().len(), 3);
        assert!(u.graph().sccs().iter().all(|c| c.len() == 1));
    }

    #[test]
    fn w1_graph_shape() {
        let u = muller_universal(&w1(), 2).unwrap();
        assert_eq!(u.graph().ids(), &["a.0", "a.1", "b.0", "b.1"]);
        assert_eq!(u.width().unwrap(), 2);
        assert_monotone(&u);
        assert_eq!(graph_satisfies(u.graph(), &w1(), SatMode::AllVertices).unwrap(), None);
        let sep = w1_chromatic(2).unwrap();
        assert_eq!(sep.validate(), Ok(()));
    }

    #[test]
    fn w5_width_two() {
        let u = muller_universal(&w5(3).unwrap(), 2).unwrap();
        assert_monotone(&u);
        assert_eq!(u.width().unwrap(), 2);
        assert_eq!(graph_satisfies(u.graph(), &w5(3).unwrap(), SatMode::AllVertices).unwrap(), None);
    }

    #[test]
    fn w2_quotients() {
        let q = safety_quotient_universal(&w2(3).unwrap()).unwrap();
        let ids = q.graph.graph().ids().to_vec();
        assert_eq!(ids, vec!["[eps]", "[a]", "[b]", "[c]", "top"]);
        assert_monotone(&q.graph);
        assert_eq!(q.graph.width().unwrap(), 3);
        for i in 1..4 {
            assert!(q.graph.lt(i, 0));
            for j in 1..4 {
                assert_eq!(q.graph.comparable(i, j), i == j);
            }
        }
        let sat = satisfying_vertices(q.graph.graph(), &w2(3).unwrap()).unwrap();
        assert_eq!(sat, vec![true, true, true, true, false]);
    }

    #[test]
    fn alternation_quotients() {
        let q = safety_quotient_universal(&alternation()).unwrap();
        assert_eq!(q.graph.graph().ids(), &["[eps]", "[a]", "top"]);
        assert_eq!(q.graph.width().unwrap(), 2);
        assert!(!q.degenerate);
    }

    #[test]
    fn degenerate_and_full_safety() {
        use crate::objective::Dfa;
        let a = vec!["a".to_string()];
        let empty = Objective::Safety {
            alphabet: a.clone(),
            dfa: Dfa { states: vec!["s".into(), "x".into()], initial: 0, sink: 1, delta: vec![vec![1], vec![1]] },
        };
        let q = safety_quotient_universal(&empty).unwrap();
        assert!(q.degenerate);
        assert_eq!(q.graph.vertex_count(), 1);
        let full = Objective::Safety {
            alphabet: a,
            dfa: Dfa { states: vec!["s".into(), "x".into()], initial: 0, sink: 1, delta: vec![vec![0], vec![1]] },
        };
        let q = safety_quotient_universal(&full).unwrap();
        assert_eq!(q.graph.vertex_count(), 2);
        assert_eq!(q.graph.width().unwrap(), 1);
    }

    #[test]
    fn ltimes_examples() {
        let u = trivially_winning("a");
        let one = ltimes_repeat(&u, 1).unwrap();
        assert_eq!(one.graph().edges().len(), 1);
        let two = ltimes_repeat(&u, 2).unwrap();
        assert_eq!(two.vertex_count(), 2);
        assert!(two.graph().has_edge(1, Color(0), 0));
        assert!(!two.graph().has_edge(0, Color(0), 1));
        assert_monotone(&two);
        let w3g = w3_universal(1, 2, 2).unwrap();
        assert_eq!(ltimes_repeat(&w3g, 2).unwrap().width().unwrap(), w3g.width().unwrap());
    }

    #[test]
    fn w3_graph() {
        let u = w3_universal(1, 2, 2).unwrap();
        assert_monotone(&u);
        assert_eq!(u.width().unwrap(), 3);
        let sat = satisfying_vertices(u.graph(), &w3(1, 2).unwrap()).unwrap();
        let winners: Vec<&str> = (0..u.vertex_count()).filter(|&v| sat[v]).map(|v| u.graph().id(v)).collect();
        assert_eq!(winners, vec!["q0,0", "q0,1"]);
        let u = w3_universal(2, 1, 2).unwrap();
        assert_monotone(&u);
        assert_eq!(u.width().unwrap(), 2);
    }

    #[test]
    fn w3_chromatic_graph() {
        let sep = w3_chromatic(1, 2, 2).unwrap();
        assert_eq!(sep.validate(), Ok(()));
        assert_eq!(sep.breadth(), 3);
        let sat = satisfying_vertices(&sep.graph, &w3(1, 2).unwrap()).unwrap();
        assert!(sat[sep.graph.index_of("q0,0|0").unwrap()]);
    }

    #[test]
    fn w4_graph() {
        let sep = w4_universal(3).unwrap();
        assert_eq!(sep.graph.vertex_count(), 9);
        assert_eq!(sep.breadth(), 2);
        assert_eq!(check_eps_separated(&sep.graph, &sep.part), Ok(()));
        assert_eq!(sep.validate(), Ok(()));
        assert_eq!(graph_satisfies(&sep.graph, &w4(), SatMode::AllVertices).unwrap(), None);
    }

    #[test]
    fn w5_chromatic_graph() {
        let sep = w5_chromatic(3, 2).unwrap();
        assert_eq!(sep.validate(), Ok(()));
        assert_eq!(sep.breadth(), 3);
        assert_eq!(graph_satisfies(&sep.graph, &w5(3).unwrap(), SatMode::AllVertices).unwrap(), None);
    }

    #[test]
    fn lexico_and_parity() {
        let u = parity_universal(2, 2).unwrap();
        assert_monotone(&u);
        let obj = builtin::parity(2).unwrap();
        assert_eq!(graph_satisfies(u.graph(), &obj, SatMode::AllVertices).unwrap(), None);
        assert_eq!(u.width().unwrap(), 1);
        let single = trivially_winning("z");
        let w1g = muller_universal(&w1(), 2).unwrap();
        let prod = lexico_product(&w1g, &single).unwrap();
        assert_eq!(prod.vertex_count(), w1g.vertex_count());
        assert_eq!(prod.width().unwrap(), 2);
        assert!(matches!(lexico_product(&w1g, &w1g), Err(Error::AlphabetOverlap(_))));
    }

    #[test]
    fn products_and_sums() {
        let w1g = muller_universal(&w1(), 2).unwrap();
        let mut full = Draft::new(&["a", "b"]);
        let v = full.v("*");
        full.e(v, "a", v);
        full.e(v, "b", v);
        let full = full.finish(GraphKind::Graph).unwrap();
        let prod = direct_product(&w1g, &full).unwrap();
        assert_eq!(prod.vertex_count(), w1g.vertex_count());
        assert_eq!(prod.graph().edges().len(), w1g.graph().edges().len());
        let chain = trivially_losing("a", 3).unwrap();
        let sum = direct_sum(&[chain.clone(), chain.clone()]).unwrap();
        assert_eq!(sum.width().unwrap(), 1);
        assert_monotone(&sum);
        let grid = direct_product(&chain, &chain).unwrap();
        assert_eq!(grid.width().unwrap(), 3);
        assert!(matches!(direct_product(&w1g, &chain), Err(Error::AlphabetMismatch)));
    }

    #[test]
    fn top_completion() {
        let q = safety_quotient_universal(&w2(3).unwrap()).unwrap();
        let (t, top) = top_complete(&q.graph, &w2(3).unwrap()).unwrap();
        assert_eq!(t.graph().ids(), q.graph.graph().ids());
        assert_eq!(top, 4);
        assert_monotone(&t);
        let u = muller_universal(&w1(), 2).unwrap();
        let mut b = GraphBuilder::new(&["a", "b"]);
        for v in u.graph().ids() {
            b.vertex(v.clone());
        }
        for &(x, c, y) in u.graph().edges() {
            b.edge(x, c, y);
        }
        let extra = b.vertex("bad");
        b.edge(extra, Color(0), extra);
        let g = b.build(GraphKind::Pregraph).unwrap();
        let og = OrderedGraph::new(g, &u.cover_pairs()).unwrap();
        let (t, _) = top_complete(&og, &w1()).unwrap();
        assert_eq!(t.vertex_count(), u.vertex_count() + 1);
        assert!(t.graph().index_of("bad").is_none());
    }
}
