//! Solving games: an oracle through parity games, the fixpoint over a
//! universal graph, strategy extraction from it, and universality testing on
//! sample graphs.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::game::{explore_strategy, Game, ProductStrategy};
use crate::graph::{color_translation, slot, Color, ColoredGraph, Owner};
use crate::objective::{satisfying_vertices, Monitor, Objective};
use crate::order::OrderedGraph;
use crate::parity::{ParityArena, ParitySolution};
use crate::universal::Universal;
use crate::zielonka::{ZielonkaTree, MAX_UNIVERSE};

/// Winning regions of a game computed by reduction to a parity game over
/// game vertex × monitor state × Zielonka-tree leaf.
pub struct OracleSolution {
    /// `region[v]` iff Eve wins from `v`.
    pub region: Vec<bool>,
    arena: ParityArena,
    sol: ParitySolution,
    positions: Vec<(usize, usize, usize)>,
    index: HashMap<(usize, usize, usize), usize>,
    /// For edge nodes: color and target position node.
    moves: Vec<Option<(Color, usize)>>,
    start: (usize, usize),
    mon: Monitor,
    leaves: Vec<usize>,
}

/// Solves a game from every vertex.
pub fn solve_oracle(game: &Game) -> Result<OracleSolution> {
    let mon = game.objective.monitor();
    if mon.label_count > MAX_UNIVERSE {
        return Err(Error::BadParams(format!("objective needs {} labels, at most {MAX_UNIVERSE}", mon.label_count)));
    }
    let universe: Vec<String> = (0..mon.label_count.max(1)).map(|i| format!("l{i}")).collect();
    let tree = ZielonkaTree::build_with(universe, &|x| mon.accepts_mask(x))?;
    let leaves = tree.leaves();
    let map = color_translation(&game.graph, &mon.alphabet);
    let start = (mon.initial, leaves[0]);
    let mut arena = ParityArena::default();
    let mut positions = Vec::new();
    let mut index: HashMap<(usize, usize, usize), usize> = HashMap::new();
    let mut edge_nodes: HashMap<(Color, usize, u32), usize> = HashMap::new();
    let mut moves: Vec<Option<(Color, usize)>> = Vec::new();
    let mut queue = Vec::new();
    let mut intern = |key: (usize, usize, usize),
                      arena: &mut ParityArena,
                      positions: &mut Vec<(usize, usize, usize)>,
                      moves: &mut Vec<Option<(Color, usize)>>,
                      queue: &mut Vec<usize>| {
        *index.entry(key).or_insert_with(|| {
            let id = arena.add_node(game.owner(key.0), 0);
            positions.push(key);
            moves.push(None);
            queue.push(id);
            id
        })
    };
    for v in 0..game.vertex_count() {
        intern((v, start.0, start.1), &mut arena, &mut positions, &mut moves, &mut queue);
    }
    let mut head = 0;
    while head < queue.len() {
        let node = queue[head];
        head += 1;
        // arena nodes and `positions` are allocated in lockstep
        let (v, q, l) = positions[node];
        for &(c, w) in game.graph.successors(v) {
            let letter = map[slot(c)].filter(|c2| !c2.is_eps()).map(|c2| c2.index());
            let (q2, l2, prio) = match letter {
                Some(i) => {
                    let (q2, mask) = mon.next[q][i];
                    if mask == 0 {
                        (q2, l, u32::from(!mon.live(q2)))
                    } else {
                        let (l2, p) = tree.step(l, mask);
                        (q2, l2, p + 2)
                    }
                }
                None => (q, l, u32::from(!mon.live(q))),
            };
            let target = intern((w, q2, l2), &mut arena, &mut positions, &mut moves, &mut queue);
            let e = *edge_nodes.entry((c, target, prio)).or_insert_with(|| {
                let id = arena.add_node(Owner::Eve, prio);
                arena.succ[id].push(target);
                positions.push((usize::MAX, 0, 0));
                moves.push(Some((c, target)));
                id
            });
            if !arena.succ[node].contains(&e) {
                arena.succ[node].push(e);
            }
        }
    }
    let sol = arena.solve();
    let region = (0..game.vertex_count()).map(|v| sol.winner[index[&(v, start.0, start.1)]] == Owner::Eve).collect();
    Ok(OracleSolution { region, arena, sol, positions, index, moves, start, mon, leaves })
}

impl OracleSolution {
    pub fn arena_size(&self) -> usize {
        self.arena.node_count()
    }

    /// Winning strategy for Eve from `v`, if she wins there.
    pub fn eve_strategy(&self, game: &Game, v: usize) -> Option<ProductStrategy> {
        self.strategy_for(game, v, Owner::Eve)
    }

    /// Winning strategy for Adam from `v`, if he wins there.
    pub fn adam_strategy(&self, game: &Game, v: usize) -> Option<ProductStrategy> {
        self.strategy_for(game, v, Owner::Adam)
    }

    fn strategy_for(&self, game: &Game, v: usize, player: Owner) -> Option<ProductStrategy> {
        let root = self.index[&(v, self.start.0, self.start.1)];
        if self.sol.winner[root] != player {
            return None;
        }
        let mut mems: Vec<(usize, usize)> = vec![self.start];
        let mut mem_index: HashMap<(usize, usize), usize> = HashMap::from([(self.start, 0)]);
        let g = game.with_initial(v);
        let mut s = explore_strategy(&g, Vec::new(), 0, |u, m| {
            let (q, l) = mems[m];
            let node = self.index[&(u, q, l)];
            let chosen: Vec<usize> = if game.owner(u) == player {
                vec![self.sol.strategy[node].expect("winning node has a move")]
            } else {
                self.arena.succ[node].clone()
            };
            chosen
                .into_iter()
                .map(|e| {
                    let (c, target) = self.moves[e].expect("edge node");
                    let (w, q2, l2) = self.positions[target];
                    let m2 = *mem_index.entry((q2, l2)).or_insert_with(|| {
                        mems.push((q2, l2));
                        mems.len() - 1
                    });
                    (c, w, m2)
                })
                .collect()
        });
        s.memory = mems
            .iter()
            .map(|&(q, l)| {
                let leaf = self.leaves.iter().position(|&x| x == l).unwrap_or(0);
                format!("{}#{leaf}", self.mon.state_names[q])
            })
            .collect();
        s.eps_respecting = false;
        Some(s)
    }
}

/// Successor sets of a universal graph per game color slot, with ε read as
/// the order when the graph has no ε-edges.
struct UEdges {
    /// `succ[slot][x]`.
    succ: Vec<Vec<FixedBitSet>>,
}

impl UEdges {
    fn new(u: &OrderedGraph, src: &ColoredGraph) -> Self {
        let g = u.graph();
        let n = g.vertex_count();
        let tr = color_translation(src, g.alphabet());
        let mut succ = vec![vec![FixedBitSet::with_capacity(n); n]; tr.len()];
        let use_order = !g.uses_eps();
        for (s, t) in tr.iter().enumerate() {
            let Some(t) = t else { continue };
            if t.is_eps() && use_order {
                for x in 0..n {
                    succ[s][x] = u.down_set(x).clone();
                }
                continue;
            }
            for &(a, c, b) in g.edges() {
                if c == *t {
                    succ[s][a].insert(b);
                }
            }
        }
        UEdges { succ }
    }
}

/// Greatest set of pairs `(v, x)` closed under answering moves: at vertices
/// with `all[v]` every edge must be answered, elsewhere one.
fn simulation(src: &ColoredGraph, all: &dyn Fn(usize) -> bool, ue: &UEdges, nu: usize) -> Vec<FixedBitSet> {
    let n = src.vertex_count();
    let mut full = FixedBitSet::with_capacity(nu);
    full.insert_range(..);
    let mut r = vec![full; n];
    loop {
        let mut changed = false;
        for v in 0..n {
            let xs: Vec<usize> = r[v].ones().collect();
            for x in xs {
                let answer = |&(c, w): &(Color, usize)| !ue.succ[slot(c)][x].is_disjoint(&r[w]);
                let ok = if all(v) {
                    src.successors(v).iter().all(answer)
                } else {
                    src.successors(v).iter().any(answer)
                };
                if !ok {
                    r[v].set(x, false);
                    changed = true;
                }
            }
        }
        if !changed {
            return r;
        }
    }
}

/// Position of a vertex of `u` in the progress map: the minimal elements of
/// its set, or the implicit top when the set is empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Progress {
    pub minimal: Vec<usize>,
    /// A canonical minimal element, satisfying when possible; `None` is top.
    pub representative: Option<usize>,
}

/// Result of [`solve_via_universal`].
#[derive(Clone, Debug)]
pub struct UniversalSolution {
    pub region: Vec<bool>,
    /// For each game vertex, the vertices of `u` from which Eve can keep
    /// mapping plays into `u`; the implicit top is always allowed.
    pub reach: Vec<FixedBitSet>,
    pub progress: Vec<Progress>,
    /// Vertices of `u` satisfying the objective.
    pub sat: Vec<bool>,
}

/// Solves a game with a monotone graph `u`: Eve wins from `v` iff some
/// satisfying vertex of `u` can follow every play from `v` she allows.
pub fn solve_via_universal(game: &Game, u: &OrderedGraph) -> Result<UniversalSolution> {
    if let Some(w) = u.check_monotone() {
        return Err(Error::NotMonotone(u.describe_witness(&w)));
    }
    let sat = satisfying_vertices(u.graph(), &game.objective)?;
    let nu = u.vertex_count();
    let ue = UEdges::new(u, &game.graph);
    let reach = simulation(&game.graph, &|v| !game.eve[v], &ue, nu);
    let region = reach.iter().map(|r| r.ones().any(|x| sat[x])).collect();
    let progress = reach
        .iter()
        .map(|r| {
            let minimal: Vec<usize> = r.ones().filter(|&x| !r.ones().any(|y| y != x && u.leq(y, x))).collect();
            let representative =
                minimal.iter().copied().find(|&x| sat[x]).or_else(|| minimal.first().copied());
            Progress { minimal, representative }
        })
        .collect();
    Ok(UniversalSolution { region, reach, progress, sat })
}

/// Builds a strategy from the fixpoint of [`solve_via_universal`]. Memory
/// states are the chains of a minimum chain cover of `u`, or its parts when
/// `u` is ε-separated; each state stands for the least vertex of its chain
/// from which Eve can still follow the play.
pub fn extract_strategy(game: &Game, u: &Universal, sol: &UniversalSolution) -> Result<ProductStrategy> {
    let og = u.ordered();
    let n = og.vertex_count();
    let (chain_of, names, rank, tag) = match u {
        Universal::Ordered(o) => {
            let chains = o.chain_decomposition();
            let mut chain_of = vec![0; n];
            let mut rank = vec![0; n];
            for (i, c) in chains.iter().enumerate() {
                for (r, &x) in c.iter().enumerate() {
                    chain_of[x] = i;
                    rank[x] = r;
                }
            }
            let names = (0..chains.len()).map(|i| format!("c{i}")).collect::<Vec<_>>();
            (chain_of, names, rank, None)
        }
        Universal::Separated(s) => {
            let mut rank = vec![0; n];
            for x in 0..n {
                rank[x] = (0..n).filter(|&y| s.part[y] == s.part[x] && og.lt(y, x)).count();
            }
            (s.part.clone(), s.part_names.clone(), rank, s.tag.clone())
        }
    };
    let separated = matches!(u, Universal::Separated(_));
    // minimal elements of R(v), per part in the separated case
    let minimal_below = |v: usize, x2: usize| -> Option<usize> {
        let r = &sol.reach[v];
        r.ones()
            .filter(|&y| og.leq(y, x2) && (!separated || chain_of[y] == chain_of[x2]))
            .filter(|&y| !r.ones().any(|z| z != y && og.leq(z, y) && (!separated || chain_of[z] == chain_of[y])))
            .min_by_key(|&y| (chain_of[y], rank[y]))
    };
    let v0 = game.initial;
    let x0 = sol.reach[v0]
        .ones()
        .filter(|&x| sol.sat[x])
        .filter_map(|x| minimal_below(v0, x))
        .min_by_key(|&y| (chain_of[y], rank[y]))
        .ok_or_else(|| Error::Precondition("initial vertex is not winning".into()))?;
    let ue = UEdges::new(&og, &game.graph);
    // memory state m at v stands for the unique tracked vertex of chain m
    let mut tracked: HashMap<(usize, usize), usize> = HashMap::from([((v0, chain_of[x0]), x0)]);
    let mut failure = None;
    let mut s = explore_strategy(game, names.clone(), chain_of[x0], |v, m| {
        let x = tracked[&(v, m)];
        let mut out = Vec::new();
        for &(c, w) in game.graph.successors(v) {
            let answer = ue.succ[slot(c)][x].ones().filter(|&x2| sol.reach[w].contains(x2)).find_map(|x2| minimal_below(w, x2));
            match answer {
                Some(y) => {
                    let key = (w, chain_of[y]);
                    match tracked.get(&key) {
                        Some(&old) if old != y => failure = Some(format!("two vertices of one chain at {}", game.graph.id(w))),
                        _ => {
                            tracked.insert(key, y);
                        }
                    }
                    out.push((c, w, chain_of[y]));
                    if game.eve[v] {
                        break;
                    }
                }
                None if game.eve[v] => continue,
                None => failure = Some(format!("no answer at {}", game.graph.id(v))),
            }
        }
        if out.is_empty() {
            failure = Some(format!("stuck at {}", game.graph.id(v)));
        }
        out
    });
    if let Some(f) = failure {
        return Err(Error::Precondition(f));
    }
    s.eps_respecting = separated || !game.graph.uses_eps();
    if let Some(tag) = tag {
        let k = names.len();
        let slots = game.graph.alphabet().len() + 1;
        let tr = color_translation(&game.graph, u.graph().alphabet());
        let delta = (0..k)
            .map(|m| (0..slots).map(|sl| tr[sl].map_or(m, |c| tag.apply(m, c))).collect())
            .collect();
        s.delta = Some(delta);
    }
    Ok(s)
}

/// Outcome of [`check_universality_sample`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UniversalityReport {
    Pass,
    /// No satisfying vertex of `u` can simulate `root` of sample `sample`;
    /// `stuck` is a configuration `(sample vertex, u vertex)` with an
    /// unanswerable move.
    Fail { sample: usize, root: usize, stuck: (usize, usize), color: String, target: usize },
}

impl UniversalityReport {
    pub fn passed(&self) -> bool {
        matches!(self, UniversalityReport::Pass)
    }
}

/// For each sample graph and each of its vertices satisfying `obj`, checks
/// that some satisfying vertex of `u` simulates it forever.
pub fn check_universality_sample(u: &Universal, obj: &Objective, samples: &[ColoredGraph]) -> Result<UniversalityReport> {
    let og = u.ordered();
    let sat_u = satisfying_vertices(og.graph(), obj)?;
    let nu = og.vertex_count();
    for (i, h) in samples.iter().enumerate() {
        let sat_h = satisfying_vertices(h, obj)?;
        if !sat_h.iter().any(|&b| b) {
            return Err(Error::Precondition(format!("sample {i} has no vertex satisfying the objective")));
        }
        let ue = UEdges::new(&og, h);
        let r = simulation(h, &|_| true, &ue, nu);
        for root in (0..h.vertex_count()).filter(|&v| sat_h[v]) {
            if r[root].ones().any(|x| sat_u[x]) {
                continue;
            }
            let x = (0..nu).find(|&x| sat_u[x]).unwrap_or(0);
            let (stuck, color, target) = stuck_configuration(h, &ue, &r, root, x);
            return Ok(UniversalityReport::Fail {
                sample: i,
                root,
                stuck,
                color: h.color_name(color).to_string(),
                target,
            });
        }
    }
    Ok(UniversalityReport::Pass)
}

/// Follows answerable moves from `(h, x)` until a move with no answer in the
/// fixpoint is found.
fn stuck_configuration(h: &ColoredGraph, ue: &UEdges, r: &[FixedBitSet], h0: usize, x0: usize) -> ((usize, usize), Color, usize) {
    let (mut hv, mut x) = (h0, x0);
    for _ in 0..=h.vertex_count() * r.first().map_or(1, |b| b.len()) {
        let mut next = None;
        for &(c, w) in h.successors(hv) {
            let s = &ue.succ[slot(c)][x];
            if s.is_disjoint(&r[w]) {
                if s.count_ones(..) == 0 {
                    return ((hv, x), c, w);
                }
                if next.is_none() {
                    next = s.ones().next().map(|x2| (w, x2, c));
                }
            }
        }
        match next {
            Some((w, x2, _)) => {
                hv = w;
                x = x2;
            }
            None => break,
        }
    }
    let (c, w) = h.successors(h0)[0];
    ((h0, x0), c, w)
}
