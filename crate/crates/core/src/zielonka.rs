//! Zielonka trees of Muller families, their memory value and the leaf-walk
//! parity automaton.
//!
//! Trees are built over an abstract universe of symbols given as bit
//! positions, so the same code serves Muller families over colors and
//! acceptance conditions over monitor labels.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::dot_quote;
use crate::objective::{Dpa, Objective};

/// One node of a Zielonka tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZNode {
    pub label: u64,
    /// Whether `label` itself is accepting.
    pub positive: bool,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    pub depth: usize,
    /// Accepting subsets of `label`.
    pub family: Vec<u64>,
}

/// Zielonka tree stored as an arena; node 0 is the root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZielonkaTree {
    pub universe: Vec<String>,
    pub nodes: Vec<ZNode>,
}

/// Largest universe the subset enumeration accepts.
pub const MAX_UNIVERSE: usize = 16;

impl ZielonkaTree {
    /// Tree of the family of accepting subsets given by `accepting`.
    pub fn build_with(universe: Vec<String>, accepting: &dyn Fn(u64) -> bool) -> Result<Self> {
        if universe.is_empty() {
            return Err(Error::EmptyAlphabet);
        }
        if universe.len() > MAX_UNIVERSE {
            return Err(Error::BadParams(format!("at most {MAX_UNIVERSE} symbols")));
        }
        let mut tree = ZielonkaTree { universe, nodes: Vec::new() };
        let full = (1u64 << tree.universe.len()) - 1;
        tree.grow(full, None, 0, accepting);
        Ok(tree)
    }

    fn grow(&mut self, label: u64, parent: Option<usize>, depth: usize, accepting: &dyn Fn(u64) -> bool) -> usize {
        let positive = accepting(label);
        let mut family = Vec::new();
        let mut flipped = Vec::new();
        for sub in submasks(label) {
            let acc = accepting(sub);
            if acc {
                family.push(sub);
            }
            if sub != label && acc != positive {
                flipped.push(sub);
            }
        }
        family.sort_unstable();
        let mut maximal: Vec<u64> = flipped
            .iter()
            .copied()
            .filter(|&s| !flipped.iter().any(|&t| t != s && t & s == s))
            .collect();
        maximal.sort_by(|&x, &y| self.names(x).cmp(&self.names(y)));
        let id = self.nodes.len();
        self.nodes.push(ZNode { label, positive, parent, children: Vec::new(), depth, family });
        for s in maximal {
            let child = self.grow(s, Some(id), depth + 1, accepting);
            self.nodes[id].children.push(child);
        }
        id
    }

    /// Sorted symbol names of a subset.
    pub fn names(&self, set: u64) -> Vec<&str> {
        let mut v: Vec<&str> =
            (0..self.universe.len()).filter(|&i| set >> i & 1 == 1).map(|i| self.universe[i].as_str()).collect();
        v.sort_unstable();
        v
    }

    pub fn root(&self) -> &ZNode {
        &self.nodes[0]
    }

    /// Leaves in left-to-right order.
    pub fn leaves(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![0usize];
        while let Some(n) = stack.pop() {
            if self.nodes[n].children.is_empty() {
                out.push(n);
            }
            for &c in self.nodes[n].children.iter().rev() {
                stack.push(c);
            }
        }
        out
    }

    pub fn max_depth(&self) -> usize {
        self.nodes.iter().map(|n| n.depth).max().unwrap_or(0)
    }

    /// 1 on leaves, sum over children at positive nodes, maximum at negative ones.
    pub fn memory(&self) -> usize {
        self.memory_at(0)
    }

    fn memory_at(&self, n: usize) -> usize {
        let node = &self.nodes[n];
        if node.children.is_empty() {
            1
        } else if node.positive {
            node.children.iter().map(|&c| self.memory_at(c)).sum()
        } else {
            node.children.iter().map(|&c| self.memory_at(c)).max().unwrap_or(1)
        }
    }

    /// Priority attached to a node: even exactly on positive nodes and
    /// decreasing with depth.
    pub fn priority(&self, n: usize) -> u32 {
        let top = self.top_priority();
        (top - self.nodes[n].depth) as u32
    }

    fn top_priority(&self) -> usize {
        let d = self.max_depth();
        if (d % 2 == 0) == self.root().positive {
            d
        } else {
            d + 1
        }
    }

    fn leftmost_leaf(&self, mut n: usize) -> usize {
        while let Some(&c) = self.nodes[n].children.first() {
            n = c;
        }
        n
    }

    /// One step of the leaf walk: from leaf `leaf` reading the symbol set `x`,
    /// returns the next leaf and the emitted priority.
    pub fn step(&self, leaf: usize, x: u64) -> (usize, u32) {
        let mut n = leaf;
        let mut child = None;
        while x & !self.nodes[n].label != 0 {
            child = Some(n);
            n = self.nodes[n].parent.expect("root label contains every symbol");
        }
        let prio = self.priority(n);
        match child {
            None => (leaf, prio),
            Some(c) => {
                let siblings = &self.nodes[n].children;
                let pos = siblings.iter().position(|&s| s == c).unwrap();
                let next = siblings[(pos + 1) % siblings.len()];
                (self.leftmost_leaf(next), prio)
            }
        }
    }

    /// Indented rendering: `(..)` marks positive nodes, `[..]` negative ones.
    pub fn render(&self) -> String {
        let mut s = String::new();
        let mut stack = vec![0usize];
        while let Some(n) = stack.pop() {
            let node = &self.nodes[n];
            let inner = self.names(node.label).join(",");
            let (l, r) = if node.positive { ('(', ')') } else { ('[', ']') };
            let _ = writeln!(s, "{}{l}{inner}{r}", "  ".repeat(node.depth));
            for &c in node.children.iter().rev() {
                stack.push(c);
            }
        }
        s
    }

    /// Graphviz rendering with circles for positive and boxes for negative nodes.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph zielonka {\n");
        for (i, node) in self.nodes.iter().enumerate() {
            let shape = if node.positive { "circle" } else { "box" };
            let label = self.names(node.label).join(",");
            let _ = writeln!(s, "  n{i} [shape={shape}, label={}];", dot_quote(&label));
        }
        for (i, node) in self.nodes.iter().enumerate() {
            for &c in &node.children {
                let _ = writeln!(s, "  n{i} -> n{c};");
            }
        }
        s.push_str("}\n");
        s
    }
}

/// Nonempty submasks of `mask`, in decreasing numeric order.
fn submasks(mask: u64) -> impl Iterator<Item = u64> {
    let mut sub = mask;
    let mut done = mask == 0;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let cur = sub;
        sub = (sub - 1) & mask;
        if sub == 0 {
            done = true;
        }
        Some(cur)
    })
}

/// Zielonka tree of a Muller objective.
pub fn build_zielonka(obj: &Objective) -> Result<ZielonkaTree> {
    match obj {
        Objective::Muller { alphabet, family } => {
            ZielonkaTree::build_with(alphabet.clone(), &|s| family.contains(&s))
        }
        _ => Err(Error::InvalidObjective("Zielonka trees need a Muller objective".into())),
    }
}

pub fn memory_of(tree: &ZielonkaTree) -> usize {
    tree.memory()
}

/// Deterministic parity automaton whose states are the leaves of the tree,
/// reading one symbol at a time.
pub fn zielonka_to_parity(tree: &ZielonkaTree) -> Dpa {
    let leaves = tree.leaves();
    let index = |n: usize| leaves.iter().position(|&l| l == n).unwrap();
    let delta = leaves
        .iter()
        .map(|&l| {
            (0..tree.universe.len())
                .map(|c| {
                    let (next, p) = tree.step(l, 1u64 << c);
                    (index(next), p)
                })
                .collect()
        })
        .collect();
    let states = leaves.iter().map(|&l| format!("leaf{}:{}", index(l), tree.names(tree.nodes[l].label).join(","))).collect();
    Dpa { states, initial: 0, delta }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objective::builtin::{w1, w5};
    use crate::objective::LassoWord;

    fn fig_family() -> Objective {
        Objective::muller(&["a", "b", "c"], &[vec!["a", "b"], vec!["a", "c"], vec!["b"]]).unwrap()
    }

    #[test]
    fn w1_tree() {
        let t = build_zielonka(&w1()).unwrap();
        assert!(t.root().positive);
        let kids: Vec<Vec<&str>> = t.root().children.iter().map(|&c| t.names(t.nodes[c].label)).collect();
        assert_eq!(kids, vec![vec!["a"], vec!["b"]]);
        assert!(t.root().children.iter().all(|&c| !t.nodes[c].positive && t.nodes[c].children.is_empty()));
        assert_eq!(t.memory(), 2);
        assert_eq!(t.render(), "(a,b)\n  [a]\n  [b]\n");
    }

    #[test]
    fn three_color_tree() {
        let t = build_zielonka(&fig_family()).unwrap();
        assert_eq!(t.render(), "[a,b,c]\n  (a,b)\n    [a]\n  (a,c)\n    [a]\n    [c]\n");
        assert_eq!(t.memory(), 2);
        assert_eq!(zielonka_to_parity(&t).states.len(), 3);
    }

    #[test]
    fn full_family_is_a_leaf() {
        let all = vec![vec!["a"], vec!["b"], vec!["a", "b"]];
        let t = build_zielonka(&Objective::muller(&["a", "b"], &all).unwrap()).unwrap();
        assert_eq!(t.nodes.len(), 1);
        assert_eq!(t.memory(), 1);
        let dpa = zielonka_to_parity(&t);
        assert_eq!(dpa.states.len(), 1);
        assert!(dpa.delta[0].iter().all(|&(_, p)| p % 2 == 0));
        let empty = build_zielonka(&Objective::muller::<&str>(&["a"], &[]).unwrap()).unwrap();
        assert_eq!(empty.memory(), 1);
        assert!(!empty.root().positive);
    }

    #[test]
    fn w5_memory() {
        assert_eq!(build_zielonka(&w5(3).unwrap()).unwrap().memory(), 2);
    }

    #[test]
    fn parity_automaton_agrees_on_short_lassos() {
        for obj in [w1(), fig_family()] {
            let t = build_zielonka(&obj).unwrap();
            let auto = Objective::Automaton { alphabet: obj.alphabet(), dpa: zielonka_to_parity(&t), prefix_independent: true };
            let letters = obj.alphabet();
            let mut words: Vec<Vec<String>> = vec![vec![]];
            let mut layer = words.clone();
            for _ in 0..4 {
                let mut next = Vec::new();
                for w in &layer {
                    for l in &letters {
                        let mut x = w.clone();
                        x.push(l.clone());
                        next.push(x);
                    }
                }
                words.extend(next.iter().cloned());
                layer = next;
            }
            for u in words.iter().filter(|u| u.len() <= 2) {
                for v in words.iter().filter(|v| !v.is_empty()) {
                    let lasso = LassoWord::new(u, v);
                    assert_eq!(obj.lasso_membership(&lasso), auto.lasso_membership(&lasso), "{lasso}");
                }
            }
        }
    }
}
