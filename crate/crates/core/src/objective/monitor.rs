//! Deterministic label-emitting monitors compiled from objectives.
//!
//! Every letter moves the monitor and emits a nonempty set of labels; ε keeps
//! the state and emits nothing. Acceptance of an infinite run depends only on
//! the set of labels emitted infinitely often, except when that set is empty
//! (finitely many real letters), where it falls back to `live`: whether some
//! accepting continuation exists from the current state.

use std::collections::{BTreeSet, HashMap};

use super::search::{nodes_reaching_bad, LEdge};

/// Acceptance condition over label masks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Acc {
    /// Labels `offset..offset+width` are colors; accept iff the set is in the family.
    Muller { offset: u32, width: u32, family: BTreeSet<u64> },
    /// Label `offset+i` carries priority `priorities[i]`; accept iff the maximum is even.
    MaxEven { offset: u32, priorities: Vec<u32> },
    /// Accept iff no label in `bad` occurs.
    NoBad { bad: u64 },
    /// Right decides when one of its labels occurs, left otherwise.
    Lexico { left: Box<Acc>, right: Box<Acc>, right_mask: u64 },
    Any(Vec<Acc>),
    All(Vec<Acc>),
    Not(Box<Acc>),
}

impl Acc {
    pub(crate) fn eval(&self, mask: u64) -> bool {
        match self {
            Acc::Muller { offset, width, family } => {
                let bits = (mask >> offset) & low_bits(*width);
                family.contains(&bits)
            }
            Acc::MaxEven { offset, priorities } => {
                let mut best: Option<u32> = None;
                for (i, &p) in priorities.iter().enumerate() {
                    if mask >> (offset + i as u32) & 1 == 1 {
                        best = Some(best.map_or(p, |b| b.max(p)));
                    }
                }
                best.map_or(false, |p| p % 2 == 0)
            }
            Acc::NoBad { bad } => mask & bad == 0,
            Acc::Lexico { left, right, right_mask } => {
                if mask & right_mask != 0 {
                    right.eval(mask)
                } else {
                    left.eval(mask)
                }
            }
            Acc::Any(parts) => parts.iter().any(|a| a.eval(mask)),
            Acc::All(parts) => parts.iter().all(|a| a.eval(mask)),
            Acc::Not(a) => !a.eval(mask),
        }
    }

    fn shift(&mut self, k: u32) {
        match self {
            Acc::Muller { offset, .. } | Acc::MaxEven { offset, .. } => *offset += k,
            Acc::NoBad { bad } => *bad <<= k,
            Acc::Lexico { left, right, right_mask } => {
                left.shift(k);
                right.shift(k);
                *right_mask <<= k;
            }
            Acc::Any(parts) | Acc::All(parts) => parts.iter_mut().for_each(|a| a.shift(k)),
            Acc::Not(a) => a.shift(k),
        }
    }
}

fn low_bits(width: u32) -> u64 {
    if width >= 64 {
        u64::MAX
    } else {
        (1u64 << width) - 1
    }
}

/// Maximum number of labels a monitor may use.
pub const MAX_LABELS: usize = 64;

/// A deterministic monitor over an alphabet of letters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monitor {
    pub alphabet: Vec<String>,
    pub state_names: Vec<String>,
    pub initial: usize,
    /// `next[q][letter] = (q', labels)`.
    pub next: Vec<Vec<(usize, u64)>>,
    pub label_count: usize,
    pub(crate) acc: Acc,
    live: Vec<bool>,
}

impl Monitor {
    pub(crate) fn new(
        alphabet: Vec<String>,
        state_names: Vec<String>,
        initial: usize,
        next: Vec<Vec<(usize, u64)>>,
        label_count: usize,
        acc: Acc,
    ) -> Self {
        assert!(label_count <= MAX_LABELS, "too many monitor labels");
        let mut m = Monitor { alphabet, state_names, initial, next, label_count, acc, live: Vec::new() };
        m.live = m.compute_live();
        m
    }

    pub fn state_count(&self) -> usize {
        self.next.len()
    }

    pub fn accepts_mask(&self, mask: u64) -> bool {
        self.acc.eval(mask)
    }

    /// Whether some infinite word is accepted from `q`.
    pub fn live(&self, q: usize) -> bool {
        self.live[q]
    }

    /// Acceptance of a run whose infinitely-often label set is `mask`, sitting
    /// in state `q` once the real letters stop (if they do).
    pub fn rejects(&self, mask: u64, q: usize) -> bool {
        if mask == 0 {
            !self.live[q]
        } else {
            !self.acc.eval(mask)
        }
    }

    /// Monitor for the complement language (ε-free semantics).
    pub fn complement(&self) -> Monitor {
        Monitor::new(
            self.alphabet.clone(),
            self.state_names.clone(),
            self.initial,
            self.next.clone(),
            self.label_count,
            Acc::Not(Box::new(self.acc.clone())),
        )
    }

    fn compute_live(&self) -> Vec<bool> {
        let n = self.state_count();
        let mut edges = Vec::new();
        for (q, row) in self.next.iter().enumerate() {
            for &(q2, mask) in row {
                edges.push(LEdge { from: q, mask, to: q2, payload: () });
            }
        }
        nodes_reaching_bad(n, &edges, &mut |mask, _| self.acc.eval(mask))
    }
}

/// Builds the reachable product of component monitors. `maps[i][letter]`
/// gives the letter of component `i` moved by a product letter, or `None`.
pub(crate) fn product(
    alphabet: Vec<String>,
    parts: Vec<Monitor>,
    maps: Vec<Vec<Option<usize>>>,
    combine: impl FnOnce(Vec<Acc>) -> Acc,
) -> Monitor {
    let mut offsets = Vec::new();
    let mut total = 0u32;
    let mut accs = Vec::new();
    for p in &parts {
        offsets.push(total);
        let mut a = p.acc.clone();
        a.shift(total);
        accs.push(a);
        total += p.label_count as u32;
    }
    let init: Vec<usize> = parts.iter().map(|p| p.initial).collect();
    let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut states = vec![init.clone()];
    index.insert(init, 0);
    let mut next = Vec::new();
    let mut i = 0;
    while i < states.len() {
        let cur = states[i].clone();
        let mut row = Vec::with_capacity(alphabet.len());
        for letter in 0..alphabet.len() {
            let mut tuple = cur.clone();
            let mut mask = 0u64;
            for (k, p) in parts.iter().enumerate() {
                if let Some(l) = maps[k][letter] {
                    let (q2, m) = p.next[cur[k]][l];
                    tuple[k] = q2;
                    mask |= m << offsets[k];
                }
            }
            let id = *index.entry(tuple.clone()).or_insert_with(|| {
                states.push(tuple);
                states.len() - 1
            });
            row.push((id, mask));
        }
        next.push(row);
        i += 1;
    }
    let names = states
        .iter()
        .map(|t| {
            let inner: Vec<&str> =
                t.iter().enumerate().map(|(k, &q)| parts[k].state_names[q].as_str()).collect();
            format!("({})", inner.join(","))
        })
        .collect();
    Monitor::new(alphabet, names, 0, next, total as usize, combine(accs))
}
