//! Exhaustive search for strategies with few memory states, the explicit
//! two-state strategy for "no color twice in a row", and the search for
//! small parity automata.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::game::{verify_strategy, Game, ProductStrategy, Verdict};
use crate::graph::{color_translation, slot, Color};
use crate::objective::builtin::{letter_alphabet, w4_automaton};
use crate::objective::search::{find_bad_subgraph, LEdge};
use crate::objective::{Dpa, LassoWord, Monitor};
use crate::solve::solve_oracle;

/// Which strategies count.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum MemoryVariant {
    /// Any memory update on any edge.
    EpsFree,
    /// Memory is kept on ε-edges.
    Eps,
    /// Updates given by a function of (memory, color).
    Chromatic,
    /// Chromatic, with ε leaving memory unchanged.
    EpsChromatic,
}

impl MemoryVariant {
    pub const ALL: [MemoryVariant; 4] =
        [MemoryVariant::EpsFree, MemoryVariant::Eps, MemoryVariant::Chromatic, MemoryVariant::EpsChromatic];

    fn chromatic(self) -> bool {
        matches!(self, MemoryVariant::Chromatic | MemoryVariant::EpsChromatic)
    }

    fn keeps_on_eps(self) -> bool {
        matches!(self, MemoryVariant::Eps | MemoryVariant::EpsChromatic)
    }

    pub fn name(self) -> &'static str {
        match self {
            MemoryVariant::EpsFree => "eps-free",
            MemoryVariant::Eps => "eps",
            MemoryVariant::Chromatic => "chromatic",
            MemoryVariant::EpsChromatic => "eps-chromatic",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        MemoryVariant::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::UnknownName(format!("memory variant `{s}`")))
    }
}

impl fmt::Display for MemoryVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Outcome of [`min_memory`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MinMemory {
    Found { k: usize, strategy: ProductStrategy },
    /// Eve wins, but not with at most `k_max` memory states.
    Exceeded { k_max: usize },
    /// Eve does not win from the initial vertex at all.
    Losing,
}

impl MinMemory {
    pub fn value(&self) -> Option<usize> {
        match self {
            MinMemory::Found { k, .. } => Some(*k),
            _ => None,
        }
    }
}

/// Default cap on explored search nodes; `MEMORIA_MAX_SEARCH` overrides it.
pub const DEFAULT_BUDGET: u64 = 20_000_000;

/// Largest accepted `|V| · k_max`.
pub const MAX_SEARCH_SIZE: usize = 2_000;

pub fn search_budget() -> u64 {
    std::env::var("MEMORIA_MAX_SEARCH").ok().and_then(|s| s.parse().ok()).unwrap_or(DEFAULT_BUDGET)
}

/// Least `k <= k_max` such that Eve wins with a strategy of the given
/// variant over `k` memory states, with a verified witness.
pub fn min_memory(game: &Game, variant: MemoryVariant, k_max: usize) -> Result<MinMemory> {
    min_memory_with_budget(game, variant, k_max, search_budget())
}

pub fn min_memory_with_budget(game: &Game, variant: MemoryVariant, k_max: usize, budget: u64) -> Result<MinMemory> {
    if k_max == 0 {
        return Err(Error::BadParams("k_max must be at least 1".into()));
    }
    if game.vertex_count() * k_max > MAX_SEARCH_SIZE {
        return Err(Error::Precondition(format!(
            "search space too large: {} vertices × {k_max} memory states",
            game.vertex_count()
        )));
    }
    if !solve_oracle(game)?.region[game.initial] {
        return Ok(MinMemory::Losing);
    }
    let mut spent = 0u64;
    for k in 1..=k_max {
        let mut s = Search::new(game, variant, k, budget.saturating_sub(spent));
        let found = s.run()?;
        spent += s.nodes;
        if let Some(strategy) = found {
            match verify_strategy(game, &strategy)? {
                Verdict::Winning => return Ok(MinMemory::Found { k, strategy }),
                other => panic!("search produced an invalid strategy: {other:?}"),
            }
        }
    }
    Ok(MinMemory::Exceeded { k_max })
}

/// Backtracking over the successor choices of reachable positions
/// `(vertex, memory)`, with memory states introduced in order of first use.
struct Search<'a> {
    game: &'a Game,
    variant: MemoryVariant,
    k: usize,
    mon: Monitor,
    /// Monitor letter per game color slot.
    letters: Vec<Option<usize>>,
    slots: usize,
    decided: Vec<Option<Vec<(Color, usize)>>>,
    delta: Vec<Option<usize>>,
    used: usize,
    nodes: u64,
    budget: u64,
}

impl<'a> Search<'a> {
    fn new(game: &'a Game, variant: MemoryVariant, k: usize, budget: u64) -> Self {
        let mon = game.objective.monitor();
        let letters = color_translation(&game.graph, &mon.alphabet)
            .into_iter()
            .map(|c| c.filter(|c| !c.is_eps()).map(|c| c.index()))
            .collect();
        let slots = game.graph.alphabet().len() + 1;
        Search {
            game,
            variant,
            k,
            mon,
            letters,
            slots,
            decided: vec![None; game.vertex_count() * k],
            delta: vec![None; k * slots],
            used: 1,
            nodes: 0,
            budget,
        }
    }

    fn pos(&self, v: usize, m: usize) -> usize {
        v * self.k + m
    }

    fn run(&mut self) -> Result<Option<ProductStrategy>> {
        if self.search()? {
            Ok(Some(self.strategy()))
        } else {
            Ok(None)
        }
    }

    fn root(&self) -> usize {
        self.pos(self.game.initial, 0)
    }

    /// First undecided position reached from the root through decided ones,
    /// in breadth-first order along successor lists.
    fn next_undecided(&self) -> Option<usize> {
        let mut seen = vec![false; self.decided.len()];
        let mut queue = std::collections::VecDeque::from([self.root()]);
        seen[self.root()] = true;
        while let Some(p) = queue.pop_front() {
            match &self.decided[p] {
                None => return Some(p),
                Some(succ) => {
                    for &(_, q) in succ {
                        if !seen[q] {
                            seen[q] = true;
                            queue.push_back(q);
                        }
                    }
                }
            }
        }
        None
    }

    /// Whether the decided part can still be completed into a winning
    /// strategy: no reachable dead monitor state and no rejecting cycle.
    fn consistent(&self) -> bool {
        let mut index: HashMap<(usize, usize), usize> = HashMap::new();
        let mut nodes = vec![(self.root(), self.mon.initial)];
        index.insert(nodes[0], 0);
        let mut edges: Vec<LEdge<()>> = Vec::new();
        let mut i = 0;
        while i < nodes.len() {
            let (p, q) = nodes[i];
            if !self.mon.live(q) {
                return false;
            }
            if let Some(succ) = &self.decided[p] {
                for &(c, p2) in succ {
                    let (q2, mask) = match self.letters[slot(c)] {
                        Some(l) => self.mon.next[q][l],
                        None => (q, 0),
                    };
                    let key = (p2, q2);
                    let j = *index.entry(key).or_insert_with(|| {
                        nodes.push(key);
                        nodes.len() - 1
                    });
                    edges.push(LEdge { from: i, mask, to: j, payload: () });
                }
            }
            i += 1;
        }
        let all: Vec<usize> = (0..edges.len()).collect();
        find_bad_subgraph(&edges, all, &mut |mask, node| self.mon.rejects(mask, nodes[node].1)).is_none()
    }

    /// Memory values allowed for the edge `(v, m) -c->`, with the δ entry
    /// to record when it is not yet fixed.
    fn targets(&self, m: usize, c: Color) -> (Vec<usize>, Option<usize>) {
        if c.is_eps() && self.variant.keeps_on_eps() {
            return (vec![m], None);
        }
        let fresh = (self.used + 1).min(self.k);
        if self.variant.chromatic() {
            let key = m * self.slots + slot(c);
            match self.delta[key] {
                Some(t) => (vec![t], None),
                None => ((0..fresh).collect(), Some(key)),
            }
        } else {
            ((0..fresh).collect(), None)
        }
    }

    fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::BudgetExceeded(self.budget));
        }
        Ok(())
    }

    fn search(&mut self) -> Result<bool> {
        self.tick()?;
        if !self.consistent() {
            return Ok(false);
        }
        let Some(p) = self.next_undecided() else { return Ok(true) };
        let (v, m) = (p / self.k, p % self.k);
        let edges: Vec<(Color, usize)> = self.game.graph.successors(v).to_vec();
        if self.game.eve[v] {
            for &(c, w) in &edges {
                let (ts, key) = self.targets(m, c);
                for t in ts {
                    let saved = self.assign(key, t);
                    self.decided[p] = Some(vec![(c, self.pos(w, t))]);
                    if self.search()? {
                        return Ok(true);
                    }
                    self.decided[p] = None;
                    self.restore(key, saved);
                }
            }
            Ok(false)
        } else {
            let mut acc = Vec::with_capacity(edges.len());
            self.answer_all(p, m, &edges, 0, &mut acc)
        }
    }

    /// Chooses a memory value for each of Adam's moves in turn.
    fn answer_all(&mut self, p: usize, m: usize, edges: &[(Color, usize)], i: usize, acc: &mut Vec<(Color, usize)>) -> Result<bool> {
        if i == edges.len() {
            self.decided[p] = Some(acc.clone());
            if self.search()? {
                return Ok(true);
            }
            self.decided[p] = None;
            return Ok(false);
        }
        let (c, w) = edges[i];
        let (ts, key) = self.targets(m, c);
        for t in ts {
            let saved = self.assign(key, t);
            acc.push((c, self.pos(w, t)));
            if self.answer_all(p, m, edges, i + 1, acc)? {
                return Ok(true);
            }
            acc.pop();
            self.restore(key, saved);
            self.tick()?;
        }
        Ok(false)
    }

    fn assign(&mut self, key: Option<usize>, t: usize) -> usize {
        let saved = self.used;
        if let Some(key) = key {
            self.delta[key] = Some(t);
        }
        if t == self.used {
            self.used += 1;
        }
        saved
    }

    fn restore(&mut self, key: Option<usize>, saved: usize) {
        if let Some(key) = key {
            self.delta[key] = None;
        }
        self.used = saved;
    }

    fn strategy(&self) -> ProductStrategy {
        let mut index: HashMap<usize, usize> = HashMap::new();
        let mut order = vec![self.root()];
        index.insert(self.root(), 0);
        let mut edges = Vec::new();
        let mut i = 0;
        while i < order.len() {
            let p = order[i];
            for &(c, p2) in self.decided[p].as_ref().expect("complete strategy") {
                let j = *index.entry(p2).or_insert_with(|| {
                    order.push(p2);
                    order.len() - 1
                });
                edges.push((i, c, j));
            }
            i += 1;
        }
        let vertices = order.iter().map(|&p| (p / self.k, p % self.k)).collect();
        let delta = self.variant.chromatic().then(|| {
            (0..self.k)
                .map(|m| {
                    (0..self.slots)
                        .map(|s| if s == 0 && self.variant.keeps_on_eps() { m } else { self.delta[m * self.slots + s].unwrap_or(m) })
                        .collect()
                })
                .collect()
        });
        ProductStrategy {
            memory: (0..self.k).map(|m| format!("m{m}")).collect(),
            vertices,
            edges,
            initial: 0,
            delta,
            eps_respecting: self.variant.keeps_on_eps(),
        }
    }
}

/// Removes moves that give the opponent an immediate repetition, then
/// vertices left without moves, until stable. Returns `None` if the initial
/// vertex disappears.
pub fn normalize_w2_game(game: &Game) -> Result<Option<Game>> {
    if game.graph.uses_eps() {
        return Err(Error::Precondition("ε-free game expected".into()));
    }
    let n = game.vertex_count();
    let mut alive = vec![true; n];
    let mut edges: Vec<(usize, Color, usize)> = game.graph.edges().to_vec();
    loop {
        let mut out: Vec<Vec<Color>> = vec![Vec::new(); n];
        for &(a, c, _) in &edges {
            out[a].push(c);
        }
        let before = (edges.len(), alive.iter().filter(|&&b| b).count());
        edges.retain(|&(a, c, b)| {
            alive[a]
                && alive[b]
                && if game.eve[b] { out[b].iter().any(|&d| d != c) } else { !out[b].contains(&c) }
        });
        let mut has_out = vec![false; n];
        for &(a, _, _) in &edges {
            has_out[a] = true;
        }
        for v in 0..n {
            // Adam vertices that lost a move are removed entirely
            let lost = !game.eve[v] && game.graph.successors(v).len() != edges.iter().filter(|e| e.0 == v).count();
            if alive[v] && (!has_out[v] || lost) {
                alive[v] = false;
            }
        }
        if (edges.len(), alive.iter().filter(|&&b| b).count()) == before {
            break;
        }
    }
    if !alive[game.initial] {
        return Ok(None);
    }
    let keep: std::collections::BTreeSet<usize> = (0..n).filter(|&v| alive[v]).collect();
    let mut map = vec![usize::MAX; n];
    for (i, &v) in keep.iter().enumerate() {
        map[v] = i;
    }
    let ids: Vec<String> = keep.iter().map(|&v| game.graph.id(v).to_string()).collect();
    let edges = edges.into_iter().map(|(a, c, b)| (map[a], c, map[b])).collect();
    let g = crate::graph::ColoredGraph::new(game.graph.alphabet().to_vec(), ids, edges, crate::graph::GraphKind::Graph)?;
    let eve = keep.iter().map(|&v| game.eve[v]).collect();
    Game::new(g, eve, map[game.initial], game.objective.clone(), false).map(Some)
}

/// Whether a game already has the shape the two-state strategy needs: every
/// move into an Eve vertex leaves her a different color, and no move into an
/// Adam vertex lets him repeat it.
pub fn is_w2_normal(game: &Game) -> bool {
    game.graph.edges().iter().all(|&(_, c, b)| {
        let out = game.graph.successors(b);
        if game.eve[b] {
            out.iter().any(|&(d, _)| d != c)
        } else {
            out.iter().all(|&(d, _)| d != c)
        }
    })
}

/// Two-state strategy for "no color twice in a row": at each Eve vertex two
/// moves with different colors are fixed, and memory records whether the
/// last color was the first of them.
pub fn w2_two_state_strategy(game: &Game) -> Result<ProductStrategy> {
    if game.graph.uses_eps() {
        return Err(Error::Precondition("ε-free game expected".into()));
    }
    if !is_w2_normal(game) {
        return Err(Error::Precondition("game is not normalized (see normalize_w2_game)".into()));
    }
    let n = game.vertex_count();
    // (color, target) of the two chosen moves
    let mut picks: Vec<Option<[(Color, usize); 2]>> = vec![None; n];
    for v in (0..n).filter(|&v| game.eve[v]) {
        let succ = game.graph.successors(v);
        let first = succ[0];
        let second = succ.iter().copied().find(|&(c, _)| c != first.0).unwrap_or(first);
        picks[v] = Some([first, second]);
    }
    let first_color = |v: usize| picks[v].map(|p| p[0].0);
    let memory_after = |c: Color, w: usize| usize::from(first_color(w) == Some(c));
    let s = crate::game::explore_strategy(game, vec!["1".into(), "2".into()], 0, |v, m| match picks[v] {
        Some(p) => {
            let (c, w) = p[m];
            vec![(c, w, memory_after(c, w))]
        }
        None => game.graph.successors(v).iter().map(|&(c, w)| (c, w, memory_after(c, w))).collect(),
    });
    Ok(ProductStrategy { eps_respecting: true, ..s })
}

/// Outcome of [`parity_automaton_minimality_probe`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProbeOutcome {
    /// Every candidate disagreed with the objective on some probe lasso.
    NoneFound { candidates: u64 },
    /// An automaton agreeing with the objective on all probe lassos.
    Found(Dpa),
}

/// Membership in "infinitely many `bb`, or finitely many `b` and finitely
/// many `aa`", read directly off the cycle of a lasso.
pub fn w4_reference(w: &LassoWord) -> bool {
    let k = w.cycle.len();
    let at = |i: usize| w.cycle[i % k].as_str();
    let inf_bb = (0..k).any(|i| at(i) == "b" && at(i + 1) == "b");
    let inf_b = w.cycle.iter().any(|c| c == "b");
    let inf_aa = (0..k).any(|i| at(i) == "a" && at(i + 1) == "a");
    inf_bb || (!inf_b && !inf_aa)
}

/// Lassos separating small automata from the objective: cycles `ac`, `aac`,
/// and `bxy`, `bbxy`, `byxbxy` for `x, y` in `{a, c}`, each after every
/// prefix of length at most `prefix_len`.
pub fn probe_lassos(prefix_len: usize) -> Vec<LassoWord> {
    let mut cycles: Vec<String> = vec!["ac".into(), "aac".into()];
    for x in ["a", "c"] {
        for y in ["a", "c"] {
            cycles.push(format!("b{x}{y}"));
            cycles.push(format!("bb{x}{y}"));
            cycles.push(format!("b{y}{x}b{x}{y}"));
        }
    }
    let mut prefixes = vec![String::new()];
    let mut layer = prefixes.clone();
    for _ in 0..prefix_len {
        layer = layer.iter().flat_map(|p| ["a", "b", "c"].map(|c| format!("{p}{c}"))).collect();
        prefixes.extend(layer.iter().cloned());
    }
    let mut out = Vec::new();
    for p in &prefixes {
        for c in &cycles {
            out.push(LassoWord::from_chars(p, c));
        }
    }
    out
}

/// Max-parity acceptance of a lasso by a deterministic automaton over
/// `{a, b, c}`.
pub fn dpa_accepts(dpa: &Dpa, w: &LassoWord) -> bool {
    let letter = |s: &str| (s.as_bytes()[0] - b'a') as usize;
    let mut q = dpa.initial;
    for l in &w.prefix {
        q = dpa.delta[q][letter(l)].0;
    }
    let mut seen: HashMap<usize, usize> = HashMap::new();
    let mut maxima = Vec::new();
    loop {
        if let Some(&i) = seen.get(&q) {
            return maxima[i..].iter().max().map_or(false, |p: &u32| p % 2 == 0);
        }
        seen.insert(q, maxima.len());
        let mut best = 0;
        for l in &w.cycle {
            let (q2, p) = dpa.delta[q][letter(l)];
            best = best.max(p);
            q = q2;
        }
        maxima.push(best);
    }
}

/// Enumerates every deterministic parity automaton over `{a, b, c}` with the
/// given number of states (initial state 0) and priorities, looking for one
/// that agrees with the objective on all probe lassos.
pub fn parity_automaton_minimality_probe(states: usize, priorities: &[u32], prefix_len: usize) -> Result<ProbeOutcome> {
    if states == 0 || priorities.is_empty() {
        return Err(Error::BadParams("need at least one state and one priority".into()));
    }
    let lassos = probe_lassos(prefix_len);
    let expected: Vec<bool> = lassos.iter().map(w4_reference).collect();
    let choices = states * priorities.len();
    let cells = states * 3;
    let total = (choices as f64).powi(cells as i32);
    if total > 5e7 {
        return Err(Error::Precondition(format!("{total:.0} candidate automata is too many")));
    }
    let names: Vec<String> = (0..states).map(|i| format!("s{i}")).collect();
    let mut digits = vec![0usize; cells];
    let mut candidates = 0u64;
    loop {
        candidates += 1;
        let delta = (0..states)
            .map(|q| {
                (0..3)
                    .map(|c| {
                        let d = digits[q * 3 + c];
                        (d / priorities.len(), priorities[d % priorities.len()])
                    })
                    .collect()
            })
            .collect();
        let dpa = Dpa { states: names.clone(), initial: 0, delta };
        if lassos.iter().zip(&expected).all(|(w, &e)| dpa_accepts(&dpa, w) == e) {
            return Ok(ProbeOutcome::Found(dpa));
        }
        let mut i = 0;
        loop {
            if i == cells {
                return Ok(ProbeOutcome::NoneFound { candidates });
            }
            digits[i] += 1;
            if digits[i] < choices {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

/// Whether the three-state automaton for the objective passes every probe.
pub fn reference_automaton_passes(prefix_len: usize) -> bool {
    let dpa = w4_automaton();
    probe_lassos(prefix_len).iter().all(|w| dpa_accepts(&dpa, w) == w4_reference(w))
}

/// Alphabet of the probe.
pub fn probe_alphabet() -> Vec<String> {
    letter_alphabet(3)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{fig1_game, w1_game, w2_eps_game, w3_game, w4_game};

    #[test]
    fn fig1_needs_two() {
        let g = fig1_game().unwrap();
        for v in [MemoryVariant::EpsFree, MemoryVariant::Eps] {
            assert_eq!(min_memory(&g, v, 4).unwrap().value(), Some(2), "{v}");
        }
    }

    #[test]
    fn small_lower_bounds() {
        assert_eq!(min_memory(&w1_game().unwrap(), MemoryVariant::EpsFree, 3).unwrap().value(), Some(2));
        assert_eq!(min_memory(&w4_game().unwrap(), MemoryVariant::EpsFree, 3).unwrap().value(), Some(2));
        assert_eq!(min_memory(&w3_game(1, 2).unwrap(), MemoryVariant::EpsFree, 4).unwrap().value(), Some(3));
        assert_eq!(min_memory(&w3_game(1, 2).unwrap(), MemoryVariant::EpsFree, 2).unwrap(), MinMemory::Exceeded { k_max: 2 });
    }

    #[test]
    fn eps_game_needs_mu() {
        let g = w2_eps_game(3).unwrap();
        assert_eq!(min_memory(&g, MemoryVariant::Eps, 4).unwrap().value(), Some(3));
    }

    #[test]
    fn budget_is_enforced() {
        let g = w3_game(1, 2).unwrap();
        assert!(matches!(
            min_memory_with_budget(&g, MemoryVariant::EpsFree, 4, 3),
            Err(Error::BudgetExceeded(3))
        ));
    }

    #[test]
    fn w2_strategy_on_alternating_vertex() {
        let mut b = crate::graph::GraphBuilder::new(&["a", "b"]);
        let v = b.vertex("v");
        b.named_edge("v", "a", "v").named_edge("v", "b", "v");
        let g = Game::new(
            b.build(crate::graph::GraphKind::Graph).unwrap(),
            vec![true],
            v,
            crate::objective::builtin::w2(2).unwrap(),
            false,
        )
        .unwrap();
        let s = w2_two_state_strategy(&g).unwrap();
        assert_eq!(verify_strategy(&g, &s).unwrap(), Verdict::Winning);
        assert_eq!(s.max_fiber(), 2);
    }

    #[test]
    fn probe_results() {
        assert!(reference_automaton_passes(2));
        assert!(matches!(parity_automaton_minimality_probe(1, &[0, 1, 2], 2).unwrap(), ProbeOutcome::NoneFound { .. }));
        assert!(matches!(parity_automaton_minimality_probe(2, &[0, 1, 2], 2).unwrap(), ProbeOutcome::NoneFound { .. }));
    }

    #[test]
    fn chromatic_game_needs_three() {
        let g = crate::game::w2_chromatic_game(3, 3).unwrap();
        for v in [MemoryVariant::Chromatic, MemoryVariant::EpsChromatic] {
            let r = min_memory(&g, v, 4).unwrap();
            assert_eq!(r.value(), Some(3), "{v}");
            if let MinMemory::Found { strategy, .. } = r {
                assert!(strategy.delta.is_some());
            }
        }
    }
}

