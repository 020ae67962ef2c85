//! Objectives: symbolic winning conditions, lasso semantics and satisfaction
//! of finite graphs.
//!
//! Every objective compiles to a deterministic [`Monitor`]; membership of
//! lasso words and satisfaction of graphs are both decided on that monitor.
//! ε is a reserved color outside every alphabet: it leaves the monitor in
//! place, which gives the neutral-letter extension of the objective.

pub mod builtin;
mod monitor;
pub(crate) mod search;

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{slot, Color, ColoredGraph, EPS_NAME};
pub use monitor::{Monitor, MAX_LABELS};
use monitor::{product, Acc};
use search::{find_bad_subgraph, lasso_through, nodes_reaching_bad, LEdge};

/// Deterministic automaton with a rejecting sink; missing moves are not allowed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dfa {
    pub states: Vec<String>,
    pub initial: usize,
    pub sink: usize,
    /// `delta[state][letter]`.
    pub delta: Vec<Vec<usize>>,
}

/// Deterministic max-parity automaton with priorities on transitions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dpa {
    pub states: Vec<String>,
    pub initial: usize,
    /// `delta[state][letter] = (state', priority)`.
    pub delta: Vec<Vec<(usize, u32)>>,
}

/// A winning condition over a finite alphabet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Objective {
    /// Accept iff the set of colors seen infinitely often is in `family`
    /// (bit `i` of a member stands for `alphabet[i]`).
    Muller { alphabet: Vec<String>, family: BTreeSet<u64> },
    /// Max-parity on color priorities.
    Parity { alphabet: Vec<String>, priorities: Vec<u32> },
    /// Words never reaching the sink of the automaton.
    Safety { alphabet: Vec<String>, dfa: Dfa },
    /// Words accepted by a deterministic parity automaton.
    Automaton { alphabet: Vec<String>, dpa: Dpa, prefix_independent: bool },
    /// Right decides if its colors occur infinitely often, left otherwise.
    Lexico(Box<Objective>, Box<Objective>),
    Union(Vec<Objective>),
    Intersection(Vec<Objective>),
}

/// The ultimately periodic word `prefix · cycle^ω`, letters by name.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LassoWord {
    pub prefix: Vec<String>,
    pub cycle: Vec<String>,
}

impl LassoWord {
    pub fn new<S: AsRef<str>>(prefix: &[S], cycle: &[S]) -> Self {
        LassoWord {
            prefix: prefix.iter().map(|s| s.as_ref().to_string()).collect(),
            cycle: cycle.iter().map(|s| s.as_ref().to_string()).collect(),
        }
    }

    /// One letter per character; `_` stands for ε.
    pub fn from_chars(prefix: &str, cycle: &str) -> Self {
        let split = |s: &str| -> Vec<String> {
            s.chars().map(|c| if c == '_' { EPS_NAME.to_string() } else { c.to_string() }).collect()
        };
        LassoWord { prefix: split(prefix), cycle: split(cycle) }
    }
}

impl fmt::Display for LassoWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.prefix {
            write!(f, "{c} ")?;
        }
        write!(f, "({})^w", self.cycle.join(" "))
    }
}

/// Where satisfaction is checked.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum SatMode {
    AllVertices,
    From(usize),
}

/// A reachable violating lasso and the vertex it starts from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub start: usize,
    pub lasso: LassoWord,
}

fn mask_of(bits: &[usize]) -> u64 {
    bits.iter().fold(0, |m, &b| m | 1u64 << b)
}

impl Objective {
    /// Muller objective from named colors.
    pub fn muller<S: AsRef<str>>(alphabet: &[S], family: &[Vec<S>]) -> Result<Objective> {
        let alphabet: Vec<String> = alphabet.iter().map(|c| c.as_ref().to_string()).collect();
        let mut fam = BTreeSet::new();
        for set in family {
            let mut bits = Vec::new();
            for c in set {
                match alphabet.iter().position(|x| x == c.as_ref()) {
                    Some(i) => bits.push(i),
                    None => return Err(Error::UnknownColor(c.as_ref().to_string())),
                }
            }
            fam.insert(mask_of(&bits));
        }
        let o = Objective::Muller { alphabet, family: fam };
        o.validate()?;
        Ok(o)
    }

    /// Parity objective from (color, priority) pairs.
    pub fn parity<S: AsRef<str>>(colors: &[(S, u32)]) -> Result<Objective> {
        let o = Objective::Parity {
            alphabet: colors.iter().map(|(c, _)| c.as_ref().to_string()).collect(),
            priorities: colors.iter().map(|&(_, p)| p).collect(),
        };
        o.validate()?;
        Ok(o)
    }

    /// Declared alphabet, in letter order.
    pub fn alphabet(&self) -> Vec<String> {
        match self {
            Objective::Muller { alphabet, .. }
            | Objective::Parity { alphabet, .. }
            | Objective::Safety { alphabet, .. }
            | Objective::Automaton { alphabet, .. } => alphabet.clone(),
            Objective::Lexico(l, r) => {
                let mut a = l.alphabet();
                a.extend(r.alphabet());
                a
            }
            Objective::Union(parts) | Objective::Intersection(parts) => {
                parts.first().map(|p| p.alphabet()).unwrap_or_default()
            }
        }
    }

    /// Declared prefix independence.
    pub fn prefix_independent(&self) -> bool {
        match self {
            Objective::Muller { .. } | Objective::Parity { .. } => true,
            Objective::Safety { .. } => false,
            Objective::Automaton { prefix_independent, .. } => *prefix_independent,
            Objective::Lexico(l, r) => l.prefix_independent() && r.prefix_independent(),
            Objective::Union(p) | Objective::Intersection(p) => p.iter().all(|o| o.prefix_independent()),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let check_alphabet = |a: &[String]| -> Result<()> {
            if a.is_empty() {
                return Err(Error::EmptyAlphabet);
            }
            let mut seen = BTreeSet::new();
            for c in a {
                if c == EPS_NAME {
                    return Err(Error::InvalidObjective(format!("`{EPS_NAME}` is reserved")));
                }
                if !seen.insert(c) {
                    return Err(Error::DuplicateColor(c.clone()));
                }
            }
            Ok(())
        };
        match self {
            Objective::Muller { alphabet, family } => {
                check_alphabet(alphabet)?;
                if alphabet.len() > 16 {
                    return Err(Error::InvalidObjective("Muller alphabets are limited to 16 colors".into()));
                }
                let full = (1u64 << alphabet.len()) - 1;
                for &m in family {
                    if m == 0 || m & !full != 0 {
                        return Err(Error::InvalidObjective(
                            "family members must be nonempty subsets of the alphabet".into(),
                        ));
                    }
                }
                Ok(())
            }
            Objective::Parity { alphabet, priorities } => {
                check_alphabet(alphabet)?;
                if priorities.len() != alphabet.len() {
                    return Err(Error::InvalidObjective("one priority per color".into()));
                }
                Ok(())
            }
            Objective::Safety { alphabet, dfa } => {
                check_alphabet(alphabet)?;
                let n = dfa.states.len();
                if dfa.initial >= n || dfa.sink >= n || dfa.delta.len() != n {
                    return Err(Error::InvalidObjective("malformed automaton".into()));
                }
                for row in &dfa.delta {
                    if row.len() != alphabet.len() || row.iter().any(|&q| q >= n) {
                        return Err(Error::InvalidObjective("automaton must be total".into()));
                    }
                }
                if dfa.delta[dfa.sink].iter().any(|&q| q != dfa.sink) {
                    return Err(Error::InvalidObjective("sink must be absorbing".into()));
                }
                Ok(())
            }
            Objective::Automaton { alphabet, dpa, .. } => {
                check_alphabet(alphabet)?;
                let n = dpa.states.len();
                if dpa.initial >= n || dpa.delta.len() != n {
                    return Err(Error::InvalidObjective("malformed automaton".into()));
                }
                for row in &dpa.delta {
                    if row.len() != alphabet.len() || row.iter().any(|&(q, _)| q >= n) {
                        return Err(Error::InvalidObjective("automaton must be total".into()));
                    }
                }
                Ok(())
            }
            Objective::Lexico(l, r) => {
                l.validate()?;
                r.validate()?;
                let la: BTreeSet<String> = l.alphabet().into_iter().collect();
                for c in r.alphabet() {
                    if la.contains(&c) {
                        return Err(Error::AlphabetOverlap(c));
                    }
                }
                Ok(())
            }
            Objective::Union(parts) | Objective::Intersection(parts) => {
                let first = parts
                    .first()
                    .ok_or_else(|| Error::InvalidObjective("empty combination".into()))?;
                let a: BTreeSet<String> = first.alphabet().into_iter().collect();
                for p in parts {
                    p.validate()?;
                    let b: BTreeSet<String> = p.alphabet().into_iter().collect();
                    if a != b {
                        return Err(Error::AlphabetMismatch);
                    }
                }
                Ok(())
            }
        }
    }

    /// Compiles the objective to a deterministic monitor.
    pub fn monitor(&self) -> Monitor {
        match self {
            Objective::Muller { alphabet, family } => {
                let next = vec![(0..alphabet.len()).map(|c| (0, 1u64 << c)).collect()];
                let acc = Acc::Muller { offset: 0, width: alphabet.len() as u32, family: family.clone() };
                Monitor::new(alphabet.clone(), vec!["*".into()], 0, next, alphabet.len(), acc)
            }
            Objective::Parity { alphabet, priorities } => {
                let distinct: Vec<u32> = priorities.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
                let label = |p: u32| distinct.iter().position(|&x| x == p).unwrap();
                let next = vec![priorities.iter().map(|&p| (0, 1u64 << label(p))).collect()];
                let acc = Acc::MaxEven { offset: 0, priorities: distinct.clone() };
                Monitor::new(alphabet.clone(), vec!["*".into()], 0, next, distinct.len(), acc)
            }
            Objective::Safety { alphabet, dfa } => {
                let next = dfa
                    .delta
                    .iter()
                    .enumerate()
                    .map(|(q, row)| {
                        row.iter()
                            .map(|&q2| (q2, if q == dfa.sink || q2 == dfa.sink { 2 } else { 1 }))
                            .collect()
                    })
                    .collect();
                Monitor::new(alphabet.clone(), dfa.states.clone(), dfa.initial, next, 2, Acc::NoBad { bad: 2 })
            }
            Objective::Automaton { alphabet, dpa, .. } => {
                let distinct: Vec<u32> = dpa
                    .delta
                    .iter()
                    .flatten()
                    .map(|&(_, p)| p)
                    .collect::<BTreeSet<_>>()
                    .into_iter()
                    .collect();
                let label = |p: u32| distinct.iter().position(|&x| x == p).unwrap();
                let next = dpa
                    .delta
                    .iter()
                    .map(|row| row.iter().map(|&(q2, p)| (q2, 1u64 << label(p))).collect())
                    .collect();
                let acc = Acc::MaxEven { offset: 0, priorities: distinct.clone() };
                Monitor::new(alphabet.clone(), dpa.states.clone(), dpa.initial, next, distinct.len(), acc)
            }
            Objective::Lexico(l, r) => {
                let (ml, mr) = (l.monitor(), r.monitor());
                let (nl, nr) = (ml.alphabet.len(), mr.alphabet.len());
                let alphabet = self.alphabet();
                let left_map = (0..nl + nr).map(|i| (i < nl).then_some(i)).collect();
                let right_map = (0..nl + nr).map(|i| (i >= nl).then(|| i - nl)).collect();
                let right_mask = ((1u64 << mr.label_count) - 1) << ml.label_count;
                product(alphabet, vec![ml, mr], vec![left_map, right_map], |mut accs| {
                    let right = accs.pop().unwrap();
                    let left = accs.pop().unwrap();
                    Acc::Lexico { left: Box::new(left), right: Box::new(right), right_mask }
                })
            }
            Objective::Union(parts) | Objective::Intersection(parts) => {
                let alphabet = self.alphabet();
                let monitors: Vec<Monitor> = parts.iter().map(|p| p.monitor()).collect();
                let maps = monitors
                    .iter()
                    .map(|m| alphabet.iter().map(|c| m.alphabet.iter().position(|x| x == c)).collect())
                    .collect();
                let union = matches!(self, Objective::Union(_));
                product(alphabet, monitors, maps, |accs| if union { Acc::Any(accs) } else { Acc::All(accs) })
            }
        }
    }

    /// Membership of an ε-free lasso.
    pub fn lasso_membership(&self, w: &LassoWord) -> Result<bool> {
        if w.prefix.iter().chain(&w.cycle).any(|c| c == EPS_NAME) {
            return Err(Error::UnknownColor(EPS_NAME.into()));
        }
        run_lasso(&self.monitor(), w)
    }

    /// Membership in the ε-extension of the objective.
    pub fn eps_lasso_membership(&self, w: &LassoWord) -> Result<bool> {
        run_lasso(&self.monitor(), w)
    }
}

fn letters(mon: &Monitor, word: &[String]) -> Result<Vec<Option<usize>>> {
    word.iter()
        .map(|c| {
            if c == EPS_NAME {
                Ok(None)
            } else {
                mon.alphabet.iter().position(|x| x == c).map(Some).ok_or_else(|| Error::UnknownColor(c.clone()))
            }
        })
        .collect()
}

/// Runs a monitor on a lasso and decides acceptance.
pub fn run_lasso(mon: &Monitor, w: &LassoWord) -> Result<bool> {
    if w.cycle.is_empty() {
        return Err(Error::Parse("lasso cycle must be nonempty".into()));
    }
    let prefix = letters(mon, &w.prefix)?;
    let cycle = letters(mon, &w.cycle)?;
    let mut q = mon.initial;
    for l in prefix.into_iter().flatten() {
        q = mon.next[q][l].0;
    }
    let mut seen: HashMap<usize, usize> = HashMap::new();
    let mut masks: Vec<u64> = Vec::new();
    loop {
        if let Some(&first) = seen.get(&q) {
            let mask = masks[first..].iter().fold(0, |a, &m| a | m);
            return Ok(!mon.rejects(mask, q));
        }
        seen.insert(q, masks.len());
        let mut mask = 0;
        for l in cycle.iter().flatten() {
            let (q2, m) = mon.next[q][*l];
            q = q2;
            mask |= m;
        }
        masks.push(mask);
    }
}

/// Translation of a graph's colors to monitor letters; ε maps to `None`.
fn letter_map(g: &ColoredGraph, mon: &Monitor) -> Result<Vec<Option<usize>>> {
    let mut map = vec![None];
    for c in g.alphabet() {
        match mon.alphabet.iter().position(|x| x == c) {
            Some(i) => map.push(Some(i)),
            None => return Err(Error::UnknownColor(c.clone())),
        }
    }
    Ok(map)
}

struct Product {
    nodes: Vec<(usize, usize)>,
    edges: Vec<LEdge<Color>>,
    out: Vec<Vec<usize>>,
    start_nodes: Vec<usize>,
}

/// Reachable part of `g × mon` from `(s, initial)` for each start `s`.
fn product_graph(g: &ColoredGraph, mon: &Monitor, starts: &[usize]) -> Result<Product> {
    let map = letter_map(g, mon)?;
    let mut index: HashMap<(usize, usize), usize> = HashMap::new();
    let mut nodes: Vec<(usize, usize)> = Vec::new();
    let mut start_nodes = Vec::new();
    for &s in starts {
        let key = (s, mon.initial);
        let id = *index.entry(key).or_insert_with(|| {
            nodes.push(key);
            nodes.len() - 1
        });
        start_nodes.push(id);
    }
    let mut edges: Vec<LEdge<Color>> = Vec::new();
    let mut out: Vec<Vec<usize>> = Vec::new();
    let mut i = 0;
    while i < nodes.len() {
        let (v, q) = nodes[i];
        out.push(Vec::new());
        for &(c, w) in g.successors(v) {
            let (q2, mask) = match map[slot(c)] {
                Some(l) => mon.next[q][l],
                None => (q, 0),
            };
            let key = (w, q2);
            let id = *index.entry(key).or_insert_with(|| {
                nodes.push(key);
                nodes.len() - 1
            });
            out[i].push(edges.len());
            edges.push(LEdge { from: i, mask, to: id, payload: c });
        }
        i += 1;
    }
    Ok(Product { nodes, edges, out, start_nodes })
}

/// Checks that every infinite path of `g` from the given start vertices is
/// accepted by `mon`. Returns a violating lasso otherwise.
pub fn monitor_violation(g: &ColoredGraph, mon: &Monitor, starts: &[usize]) -> Result<Option<Violation>> {
    let Product { nodes, edges, out, start_nodes } = product_graph(g, mon, starts)?;
    let all: Vec<usize> = (0..edges.len()).collect();
    let found = find_bad_subgraph(&edges, all, &mut |mask, node| mon.rejects(mask, nodes[node].1));
    let Some(sub) = found else { return Ok(None) };
    let (start, prefix, cycle) = lasso_through(&edges, &out, &start_nodes, &sub);
    let name = |e: &usize| g.color_name(edges[*e].payload).to_string();
    Ok(Some(Violation {
        start: nodes[start].0,
        lasso: LassoWord { prefix: prefix.iter().map(name).collect(), cycle: cycle.iter().map(name).collect() },
    }))
}

/// For each vertex, whether all infinite paths from it are accepted.
pub fn satisfying_vertices_monitor(g: &ColoredGraph, mon: &Monitor) -> Result<Vec<bool>> {
    let starts: Vec<usize> = (0..g.vertex_count()).collect();
    let p = product_graph(g, mon, &starts)?;
    let bad = nodes_reaching_bad(p.nodes.len(), &p.edges, &mut |mask, node| mon.rejects(mask, p.nodes[node].1));
    Ok(p.start_nodes.iter().map(|&s| !bad[s]).collect())
}

/// For each vertex, whether it satisfies `obj` (ε-extension semantics).
pub fn satisfying_vertices(g: &ColoredGraph, obj: &Objective) -> Result<Vec<bool>> {
    satisfying_vertices_monitor(g, &obj.monitor())
}

/// Whether every infinite path of `g` (from every vertex, or from one) is
/// in the ε-extension of `obj`. On failure returns a reachable violating lasso.
pub fn graph_satisfies(g: &ColoredGraph, obj: &Objective, mode: SatMode) -> Result<Option<Violation>> {
    let mon = obj.monitor();
    let starts: Vec<usize> = match mode {
        SatMode::AllVertices => (0..g.vertex_count()).collect(),
        SatMode::From(v) => {
            if v >= g.vertex_count() {
                return Err(Error::UnknownVertex(format!("#{v}")));
            }
            vec![v]
        }
    };
    monitor_violation(g, &mon, &starts)
}

/// Shorthand for `graph_satisfies(..).is_none()` from one vertex.
pub fn satisfies_from(g: &ColoredGraph, obj: &Objective, v: usize) -> Result<bool> {
    Ok(graph_satisfies(g, obj, SatMode::From(v))?.is_none())
}
