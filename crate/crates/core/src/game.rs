//! Games, product strategies and their verification, plus the named games
//! witnessing memory lower bounds.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{slot, Color, ColoredGraph, GraphBuilder, GraphKind, Owner};
use crate::objective::builtin::{letter_alphabet, w2, w3, w4, Params};
use crate::objective::Monitor;
use crate::objective::{monitor_violation, Objective, Violation};

/// A two-player game on a colored graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Game {
    pub graph: ColoredGraph,
    /// `eve[v]` iff Eve controls `v`.
    pub eve: Vec<bool>,
    pub initial: usize,
    pub objective: Objective,
    /// Whether ε-edges are allowed.
    pub epsilon: bool,
}

impl Game {
    pub fn new(graph: ColoredGraph, eve: Vec<bool>, initial: usize, objective: Objective, epsilon: bool) -> Result<Self> {
        let graph = graph.with_kind(GraphKind::Graph)?;
        if eve.len() != graph.vertex_count() {
            return Err(Error::MapNotTotal { expected: graph.vertex_count(), got: eve.len() });
        }
        if initial >= graph.vertex_count() {
            return Err(Error::UnknownVertex(format!("#{initial}")));
        }
        objective.validate()?;
        let alphabet = objective.alphabet();
        for c in graph.alphabet() {
            if !alphabet.contains(c) {
                return Err(Error::UnknownColor(c.clone()));
            }
        }
        if graph.uses_eps() && !epsilon {
            return Err(Error::Precondition("ε-edges in a game not flagged as an ε-game".into()));
        }
        Ok(Game { graph, eve, initial, objective, epsilon })
    }

    pub fn owner(&self, v: usize) -> Owner {
        if self.eve[v] {
            Owner::Eve
        } else {
            Owner::Adam
        }
    }

    pub fn owners(&self) -> Vec<Owner> {
        (0..self.eve.len()).map(|v| self.owner(v)).collect()
    }

    pub fn with_initial(&self, v: usize) -> Game {
        Game { initial: v, ..self.clone() }
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn to_dot(&self) -> String {
        self.graph.to_dot("game", Some(&self.owners()))
    }
}

/// A strategy given as a graph over pairs (game vertex, memory state).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductStrategy {
    pub memory: Vec<String>,
    pub vertices: Vec<(usize, usize)>,
    /// Edges between indices of `vertices`, colored like the game.
    pub edges: Vec<(usize, Color, usize)>,
    pub initial: usize,
    /// `delta[m][slot]` with slot 0 for ε and `i + 1` for color `i`.
    pub delta: Option<Vec<Vec<usize>>>,
    pub eps_respecting: bool,
}

impl ProductStrategy {
    /// Number of memory states used at each game vertex.
    pub fn fiber_sizes(&self, vertex_count: usize) -> Vec<usize> {
        let mut sizes = vec![0; vertex_count];
        for &(v, _) in &self.vertices {
            sizes[v] += 1;
        }
        sizes
    }

    pub fn max_fiber(&self) -> usize {
        let n = self.vertices.iter().map(|&(v, _)| v + 1).max().unwrap_or(0);
        self.fiber_sizes(n).into_iter().max().unwrap_or(0)
    }

    /// The strategy graph with ids `vertex|memory`.
    pub fn graph(&self, game: &Game) -> Result<ColoredGraph> {
        let ids = self
            .vertices
            .iter()
            .map(|&(v, m)| format!("{}|{}", game.graph.id(v), self.memory.get(m).map_or("?", |s| s.as_str())))
            .collect();
        ColoredGraph::new(game.graph.alphabet().to_vec(), ids, self.edges.clone(), GraphKind::Pregraph)
    }

    /// Restriction to the part reachable from the initial vertex.
    pub fn trimmed(&self) -> ProductStrategy {
        let mut out = vec![Vec::new(); self.vertices.len()];
        for &(a, c, b) in &self.edges {
            out[a].push((c, b));
        }
        let mut index = vec![usize::MAX; self.vertices.len()];
        let mut order = vec![self.initial];
        index[self.initial] = 0;
        let mut i = 0;
        while i < order.len() {
            for &(_, b) in &out[order[i]] {
                if index[b] == usize::MAX {
                    index[b] = order.len();
                    order.push(b);
                }
            }
            i += 1;
        }
        let vertices = order.iter().map(|&s| self.vertices[s]).collect();
        let edges = self
            .edges
            .iter()
            .filter(|(a, _, _)| index[*a] != usize::MAX)
            .map(|&(a, c, b)| (index[a], c, index[b]))
            .collect();
        ProductStrategy { vertices, edges, initial: 0, ..self.clone() }
    }
}

/// A broken strategy invariant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StructuralViolation {
    BadState { index: usize },
    DuplicateState { vertex: String, memory: String },
    WrongInitial { expected: String, found: String },
    NotAMorphism { from: String, color: String, to: String },
    AdamClosure { state: String, color: String, target: String },
    Sink { state: String },
    EpsUpdate { from: String, to: String },
    DeltaMismatch { from: String, color: String, to: String },
}

impl fmt::Display for StructuralViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StructuralViolation::BadState { index } => write!(f, "state #{index} refers to an unknown vertex or memory state"),
            StructuralViolation::DuplicateState { vertex, memory } => write!(f, "state ({vertex}, {memory}) listed twice"),
            StructuralViolation::WrongInitial { expected, found } => {
                write!(f, "initial state projects to {found}, expected {expected}")
            }
            StructuralViolation::NotAMorphism { from, color, to } => {
                write!(f, "projection: edge {from} -{color}-> {to} has no counterpart in the game")
            }
            StructuralViolation::AdamClosure { state, color, target } => {
                write!(f, "closure: {state} does not answer the move -{color}-> {target}")
            }
            StructuralViolation::Sink { state } => write!(f, "sink: {state} has no outgoing edge"),
            StructuralViolation::EpsUpdate { from, to } => write!(f, "ε-respecting: {from} -eps-> {to} changes memory"),
            StructuralViolation::DeltaMismatch { from, color, to } => {
                write!(f, "chromatic: {from} -{color}-> {to} does not follow the update function")
            }
        }
    }
}

/// Outcome of [`verify_strategy`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Winning,
    Losing(Violation),
    Structural(StructuralViolation),
}

impl Verdict {
    pub fn is_winning(&self) -> bool {
        matches!(self, Verdict::Winning)
    }
}

/// Checks the invariants of a product strategy for Eve and that every play
/// it allows satisfies the objective.
pub fn verify_strategy(game: &Game, s: &ProductStrategy) -> Result<Verdict> {
    verify_for(game, s, Owner::Eve, &game.objective.monitor())
}

/// Checks a strategy for Adam: closure on Eve's moves and every play
/// violating the objective. Only meaningful for ε-free games.
pub fn verify_adam_strategy(game: &Game, s: &ProductStrategy) -> Result<Verdict> {
    verify_for(game, s, Owner::Adam, &game.objective.monitor().complement())
}

fn verify_for(game: &Game, s: &ProductStrategy, player: Owner, mon: &Monitor) -> Result<Verdict> {
    if let Some(v) = structural_check(game, s, player) {
        return Ok(Verdict::Structural(v));
    }
    let trimmed = s.trimmed();
    let g = trimmed.graph(game)?;
    match monitor_violation(&g, mon, &[trimmed.initial])? {
        None => Ok(Verdict::Winning),
        Some(v) => Ok(Verdict::Losing(v)),
    }
}

fn structural_check(game: &Game, s: &ProductStrategy, player: Owner) -> Option<StructuralViolation> {
    let n = game.vertex_count();
    let k = s.memory.len();
    let mut index: HashMap<(usize, usize), usize> = HashMap::new();
    for (i, &(v, m)) in s.vertices.iter().enumerate() {
        if v >= n || m >= k {
            return Some(StructuralViolation::BadState { index: i });
        }
        if index.insert((v, m), i).is_some() {
            return Some(StructuralViolation::DuplicateState {
                vertex: game.graph.id(v).into(),
                memory: s.memory[m].clone(),
            });
        }
    }
    if s.initial >= s.vertices.len() {
        return Some(StructuralViolation::BadState { index: s.initial });
    }
    let name = |i: usize| {
        let (v, m) = s.vertices[i];
        format!("({}, {})", game.graph.id(v), s.memory[m])
    };
    if s.vertices[s.initial].0 != game.initial {
        return Some(StructuralViolation::WrongInitial {
            expected: game.graph.id(game.initial).into(),
            found: game.graph.id(s.vertices[s.initial].0).into(),
        });
    }
    let mut out = vec![Vec::new(); s.vertices.len()];
    for &(a, c, b) in &s.edges {
        if a >= s.vertices.len() || b >= s.vertices.len() {
            return Some(StructuralViolation::BadState { index: a.max(b) });
        }
        let (va, ma) = s.vertices[a];
        let (vb, mb) = s.vertices[b];
        if !game.graph.has_edge(va, c, vb) {
            return Some(StructuralViolation::NotAMorphism {
                from: name(a),
                color: game.graph.color_name(c).into(),
                to: name(b),
            });
        }
        if c.is_eps() && s.eps_respecting && ma != mb {
            return Some(StructuralViolation::EpsUpdate { from: name(a), to: name(b) });
        }
        if let Some(delta) = &s.delta {
            let expected = delta.get(ma).and_then(|row| row.get(slot(c))).copied();
            if expected != Some(mb) {
                return Some(StructuralViolation::DeltaMismatch {
                    from: name(a),
                    color: game.graph.color_name(c).into(),
                    to: name(b),
                });
            }
        }
        out[a].push((c, vb));
    }
    for (i, &(v, _)) in s.vertices.iter().enumerate() {
        if out[i].is_empty() {
            return Some(StructuralViolation::Sink { state: name(i) });
        }
        if game.owner(v) != player {
            for &(c, w) in game.graph.successors(v) {
                if !out[i].contains(&(c, w)) {
                    return Some(StructuralViolation::AdamClosure {
                        state: name(i),
                        color: game.graph.color_name(c).into(),
                        target: game.graph.id(w).into(),
                    });
                }
            }
        }
    }
    None
}

/// Builds a product strategy by exploring from `(initial, m0)` with a
/// successor function returning `(color, vertex, memory)` triples.
pub(crate) fn explore_strategy(
    game: &Game,
    memory: Vec<String>,
    m0: usize,
    mut next: impl FnMut(usize, usize) -> Vec<(Color, usize, usize)>,
) -> ProductStrategy {
    let mut index: HashMap<(usize, usize), usize> = HashMap::new();
    let mut vertices = vec![(game.initial, m0)];
    index.insert((game.initial, m0), 0);
    let mut edges = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let (v, m) = vertices[i];
        for (c, w, m2) in next(v, m) {
            let j = *index.entry((w, m2)).or_insert_with(|| {
                vertices.push((w, m2));
                queue.push_back(vertices.len() - 1);
                vertices.len() - 1
            });
            edges.push((i, c, j));
        }
    }
    ProductStrategy { memory, vertices, edges, initial: 0, delta: None, eps_respecting: false }
}

/// Names accepted by [`lower_bound_game`].
pub const LOWER_BOUND_GAMES: &[&str] = &["fig1", "w1", "w3", "w4", "w2-eps", "w2-chromatic"];

/// Named lower-bound games. Parameters: `m`, `n` for `w3`; `mu` for
/// `w2-eps`; `colors` and `length` for `w2-chromatic`.
pub fn lower_bound_game(name: &str, params: &Params) -> Result<Game> {
    let p = |k: &str, d: usize| params.get(k).copied().unwrap_or(d);
    match name.to_ascii_lowercase().as_str() {
        "fig1" => fig1_game(),
        "w1" => w1_game(),
        "w3" => w3_game(p("m", 1), p("n", 2)),
        "w4" => w4_game(),
        "w2-eps" => w2_eps_game(p("mu", 3)),
        "w2-chromatic" => {
            let colors = p("colors", 3);
            w2_chromatic_game(colors, p("length", colors))
        }
        other => Err(Error::UnknownName(other.to_string())),
    }
}

fn build(b: GraphBuilder, eve: &[usize], objective: Objective, epsilon: bool) -> Result<Game> {
    let n = b.vertex_count();
    let g = b.build(GraphKind::Graph)?;
    let mut flags = vec![false; n];
    for &v in eve {
        flags[v] = true;
    }
    Game::new(g, flags, 0, objective, epsilon)
}

/// Three vertices with objective `(ab)^ω`: Eve at `v2` must alternate her two
/// self-loops.
pub fn fig1_game() -> Result<Game> {
    let mut b = GraphBuilder::new(&["a", "b"]);
    let v0 = b.vertex("v0");
    let v1 = b.vertex("v1");
    let v2 = b.vertex("v2");
    b.named_edge("v0", "a", "v1").named_edge("v0", "a", "v2");
    b.named_edge("v1", "b", "v0").named_edge("v1", "a", "v2");
    b.named_edge("v2", "a", "v2").named_edge("v2", "b", "v2");
    let _ = v0;
    build(b, &[v1, v2], crate::objective::builtin::alternation(), false)
}

/// One Eve vertex choosing between `a` and `b` forever, for "both colors
/// infinitely often".
pub fn w1_game() -> Result<Game> {
    let mut b = GraphBuilder::new(&["a", "b"]);
    let v = b.vertex("v");
    b.named_edge("v", "a", "v").named_edge("v", "b", "v");
    build(b, &[v], crate::objective::builtin::w1(), false)
}

/// Adam plays the first `m` letters `a`; Eve must then wait at least `n`
/// letters before playing `a`, which needs a counter up to `n`.
pub fn w3_game(m: usize, n: usize) -> Result<Game> {
    let obj = w3(m, n)?;
    let mut b = GraphBuilder::new(&["a", "b"]);
    let xs: Vec<usize> = (0..m).map(|j| b.vertex(format!("x{j}"))).collect();
    let e = b.vertex("e");
    let w = b.vertex("w");
    let (ca, cb) = (b.color("a"), b.color("b"));
    for j in 0..m {
        let next = if j + 1 < m { xs[j + 1] } else { e };
        b.edge(xs[j], ca, next);
    }
    b.edge(e, cb, e).edge(e, ca, w).edge(w, ca, w).edge(w, cb, w);
    build(b, &[e], obj, false)
}

/// Adam plays `b` or `c`; Eve must answer `b` to `b` and `a` to `c`.
pub fn w4_game() -> Result<Game> {
    let mut b = GraphBuilder::new(&["a", "b", "c"]);
    let _adam = b.vertex("A");
    let eve = b.vertex("E");
    b.named_edge("A", "b", "E").named_edge("A", "c", "E");
    b.named_edge("E", "a", "A").named_edge("E", "b", "A");
    build(b, &[eve], w4(), false)
}

/// Eve at `v0` sends the play by ε to one of `mu` Adam vertices; vertex `x`
/// returns to `v0` with any color other than `x`.
pub fn w2_eps_game(mu: usize) -> Result<Game> {
    let obj = w2(mu)?;
    let alphabet = letter_alphabet(mu);
    let mut b = GraphBuilder::new(&alphabet);
    let v0 = b.vertex("v0");
    let xs: Vec<usize> = alphabet.iter().map(|c| b.vertex(format!("x{c}"))).collect();
    for (i, &x) in xs.iter().enumerate() {
        b.edge(v0, Color::EPS, x);
        for (j, c) in alphabet.iter().enumerate() {
            if i != j {
                let c = b.color(c);
                b.edge(x, c, v0);
            }
        }
    }
    build(b, &[v0], obj, true)
}

/// Adam spells a repetition-free word of length at most `length`, then
/// hands Eve a pair of colors to alternate between.
pub fn w2_chromatic_game(colors: usize, length: usize) -> Result<Game> {
    if length == 0 {
        return Err(Error::BadParams("truncation length must be at least 1".into()));
    }
    let obj = w2(colors)?;
    let alphabet = letter_alphabet(colors);
    let mut b = GraphBuilder::new(&alphabet);
    let mut words: Vec<Vec<usize>> = vec![Vec::new()];
    let mut i = 0;
    while i < words.len() {
        if words[i].len() < length {
            for c in 0..colors {
                if words[i].last() != Some(&c) {
                    let mut w = words[i].clone();
                    w.push(c);
                    words.push(w);
                }
            }
        }
        i += 1;
    }
    let spell = |w: &[usize]| w.iter().map(|&c| alphabet[c].as_str()).collect::<String>();
    let ids: Vec<usize> = words.iter().map(|w| b.vertex(format!("v[{}]", spell(w)))).collect();
    let mut pairs = Vec::new();
    for c in 0..colors {
        for d in 0..colors {
            if c != d {
                pairs.push((c, d, b.vertex(format!("e[{}{}]", alphabet[c], alphabet[d]))));
            }
        }
    }
    let word_index: BTreeMap<Vec<usize>, usize> = words.iter().cloned().zip(ids.iter().copied()).collect();
    for (w, &v) in words.iter().zip(&ids) {
        for c in 0..colors {
            if w.last() == Some(&c) {
                continue;
            }
            let mut wc = w.clone();
            wc.push(c);
            if let Some(&t) = word_index.get(&wc) {
                b.edge(v, Color(c as u16), t);
            }
            for &(_, _, e) in &pairs {
                b.edge(v, Color(c as u16), e);
            }
        }
    }
    for &(c, d, e) in &pairs {
        b.edge(e, Color(c as u16), e).edge(e, Color(d as u16), e);
    }
    let eve: Vec<usize> = pairs.iter().map(|p| p.2).collect();
    build(b, &eve, obj, false)
}

/// Graph on `0..m` with `i -a-> j` and `j -b-> i` for all `i < j`.
pub fn non_orderable_graph(m: usize) -> Result<ColoredGraph> {
    if m < 2 {
        return Err(Error::BadParams("need at least 2 vertices".into()));
    }
    let mut b = GraphBuilder::new(&["a", "b"]);
    let vs: Vec<usize> = (0..m).map(|i| b.vertex(i.to_string())).collect();
    let (ca, cb) = (b.color("a"), b.color("b"));
    for i in 0..m {
        for j in i + 1..m {
            b.edge(vs[i], ca, vs[j]).edge(vs[j], cb, vs[i]);
        }
    }
    b.build(GraphKind::Graph)
}
