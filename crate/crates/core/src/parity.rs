//! Recursive solver for max-parity games on explicit arenas, with positional
//! strategies for both players.

use crate::graph::Owner;

/// Explicit parity arena; Eve wins a play iff the largest priority seen
/// infinitely often is even.
#[derive(Clone, Debug, Default)]
pub struct ParityArena {
    pub owner: Vec<Owner>,
    pub priority: Vec<u32>,
    pub succ: Vec<Vec<usize>>,
}

/// Winner of every node and, for each node, a successor that keeps the owner
/// winning when the owner is the winner.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParitySolution {
    pub winner: Vec<Owner>,
    pub strategy: Vec<Option<usize>>,
}

impl ParityArena {
    pub fn add_node(&mut self, owner: Owner, priority: u32) -> usize {
        self.owner.push(owner);
        self.priority.push(priority);
        self.succ.push(Vec::new());
        self.owner.len() - 1
    }

    pub fn node_count(&self) -> usize {
        self.owner.len()
    }

    /// Solves the arena; every node must have a successor.
    pub fn solve(&self) -> ParitySolution {
        let n = self.node_count();
        assert!(self.succ.iter().all(|s| !s.is_empty()), "parity arena has a sink");
        let mut pred = vec![Vec::new(); n];
        for (v, s) in self.succ.iter().enumerate() {
            for &w in s {
                pred[w].push(v);
            }
        }
        let mut strategy = vec![None; n];
        let all = vec![true; n];
        let (w_eve, _) = self.zielonka(&all, &pred, &mut strategy);
        let winner = (0..n).map(|v| if w_eve[v] { Owner::Eve } else { Owner::Adam }).collect();
        ParitySolution { winner, strategy }
    }

    /// Attractor for `player` to `target` inside `sub`, recording attracting
    /// moves of `player` in `strategy`.
    fn attractor(
        &self,
        sub: &[bool],
        target: &[bool],
        player: Owner,
        pred: &[Vec<usize>],
        strategy: &mut [Option<usize>],
    ) -> Vec<bool> {
        let n = self.node_count();
        let mut attr = target.to_vec();
        let mut count: Vec<usize> =
            (0..n).map(|v| if sub[v] { self.succ[v].iter().filter(|&&w| sub[w]).count() } else { 0 }).collect();
        let mut queue: Vec<usize> = (0..n).filter(|&v| attr[v]).collect();
        while let Some(w) = queue.pop() {
            for &v in &pred[w] {
                if !sub[v] || attr[v] {
                    continue;
                }
                if self.owner[v] == player {
                    attr[v] = true;
                    strategy[v] = Some(w);
                    queue.push(v);
                } else {
                    count[v] -= 1;
                    if count[v] == 0 {
                        attr[v] = true;
                        queue.push(v);
                    }
                }
            }
        }
        attr
    }

    /// Returns the winning regions of Eve and Adam in the subgame `sub`.
    fn zielonka(&self, sub: &[bool], pred: &[Vec<usize>], strategy: &mut [Option<usize>]) -> (Vec<bool>, Vec<bool>) {
        let n = self.node_count();
        let Some(p) = (0..n).filter(|&v| sub[v]).map(|v| self.priority[v]).max() else {
            return (vec![false; n], vec![false; n]);
        };
        let alpha = if p % 2 == 0 { Owner::Eve } else { Owner::Adam };
        let target: Vec<bool> = (0..n).map(|v| sub[v] && self.priority[v] == p).collect();
        let a = self.attractor(sub, &target, alpha, pred, strategy);
        let rest: Vec<bool> = (0..n).map(|v| sub[v] && !a[v]).collect();
        let (w_eve, w_adam) = self.zielonka(&rest, pred, strategy);
        let (w_alpha, w_other) = if alpha == Owner::Eve { (w_eve, w_adam) } else { (w_adam, w_eve) };
        if !w_other.iter().any(|&b| b) {
            for v in 0..n {
                if target[v] && self.owner[v] == alpha {
                    strategy[v] = self.succ[v].iter().copied().find(|&w| sub[w]);
                }
            }
            let _ = w_alpha;
            let full = sub.to_vec();
            let none = vec![false; n];
            return if alpha == Owner::Eve { (full, none) } else { (none, full) };
        }
        let other = opponent(alpha);
        let b = self.attractor(sub, &w_other, other, pred, strategy);
        let rest2: Vec<bool> = (0..n).map(|v| sub[v] && !b[v]).collect();
        let (w2_eve, w2_adam) = self.zielonka(&rest2, pred, strategy);
        if alpha == Owner::Eve {
            let adam: Vec<bool> = (0..n).map(|v| b[v] || w2_adam[v]).collect();
            (w2_eve, adam)
        } else {
            let eve: Vec<bool> = (0..n).map(|v| b[v] || w2_eve[v]).collect();
            (eve, w2_adam)
        }
    }
}

pub fn opponent(p: Owner) -> Owner {
    match p {
        Owner::Eve => Owner::Adam,
        Owner::Adam => Owner::Eve,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute force: Eve wins from `v` iff some positional Eve strategy makes
    /// every cycle reachable under all Adam moves even-maximal.
    fn brute(a: &ParityArena) -> Vec<Owner> {
        let n = a.node_count();
        let eve_nodes: Vec<usize> = (0..n).filter(|&v| a.owner[v] == Owner::Eve).collect();
        let mut wins = vec![false; n];
        let mut choice = vec![0usize; eve_nodes.len()];
        loop {
            let succ: Vec<Vec<usize>> = (0..n)
                .map(|v| match eve_nodes.iter().position(|&e| e == v) {
                    Some(i) => vec![a.succ[v][choice[i]]],
                    None => a.succ[v].clone(),
                })
                .collect();
            for start in 0..n {
                // every simple cycle reachable from start must be even-maximal;
                // check each priority threshold: no cycle through a node of odd
                // priority p using only nodes of priority <= p
                let reach = reach_from(&succ, start, &vec![true; n]);
                let mut ok = true;
                for v in 0..n {
                    if !reach[v] || a.priority[v] % 2 == 0 {
                        continue;
                    }
                    let allowed: Vec<bool> = (0..n).map(|w| a.priority[w] <= a.priority[v]).collect();
                    let from_v = reach_from(&succ, v, &allowed);
                    if succ[v].iter().any(|&w| allowed[w] && (w == v || reach_from(&succ, w, &allowed)[v])) && from_v[v] {
                        ok = false;
                    }
                }
                wins[start] |= ok;
            }
            let mut i = 0;
            loop {
                if i == eve_nodes.len() {
                    return (0..n).map(|v| if wins[v] { Owner::Eve } else { Owner::Adam }).collect();
                }
                choice[i] += 1;
                if choice[i] < a.succ[eve_nodes[i]].len() {
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
        }
    }

    fn reach_from(succ: &[Vec<usize>], s: usize, allowed: &[bool]) -> Vec<bool> {
        let mut seen = vec![false; succ.len()];
        let mut stack = vec![s];
        seen[s] = true;
        while let Some(v) = stack.pop() {
            for &w in &succ[v] {
                if allowed[w] && !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen
    }

    fn check_strategies(a: &ParityArena, sol: &ParitySolution) {
        for v in 0..a.node_count() {
            if sol.winner[v] == a.owner[v] {
                let w = sol.strategy[v].expect("winner has a move");
                assert!(a.succ[v].contains(&w));
                assert_eq!(sol.winner[w], sol.winner[v]);
            } else {
                assert!(a.succ[v].iter().all(|&w| sol.winner[w] == sol.winner[v]));
            }
        }
    }

    #[test]
    fn small_random_arenas_match_brute_force() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let n = rng.gen_range(1..=6);
            let mut a = ParityArena::default();
            for _ in 0..n {
                let o = if rng.gen_bool(0.5) { Owner::Eve } else { Owner::Adam };
                a.add_node(o, rng.gen_range(0..4));
            }
            for v in 0..n {
                let k = rng.gen_range(1..=2);
                for _ in 0..k {
                    let w = rng.gen_range(0..n);
                    if !a.succ[v].contains(&w) {
                        a.succ[v].push(w);
                    }
                }
            }
            let sol = a.solve();
            assert_eq!(sol.winner, brute(&a));
            check_strategies(&a, &sol);
        }
    }
}
