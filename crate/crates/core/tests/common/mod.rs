//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use memoria::error::Error;
use memoria::game::Game;
use memoria::memsearch::{min_memory, MemoryVariant, MinMemory};
use memoria::objective::{LassoWord, Objective};
use memoria::{ColoredGraph, OrderedGraph};

/// Largest antichain, by trying every subset.
pub fn antichain_width(og: &OrderedGraph) -> usize {
    let n = og.vertex_count();
    let mut best = 0;
    for mask in 0u32..1 << n {
        let set: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let anti = set.iter().all(|&a| set.iter().all(|&b| a == b || !(og.leq(a, b) || og.leq(b, a))));
        if anti {
            best = best.max(set.len());
        }
    }
    best
}

/// `chains` partitions the vertices into totally ordered sets.
pub fn is_chain_cover(og: &OrderedGraph, chains: &[Vec<usize>]) -> bool {
    let mut seen = vec![0; og.vertex_count()];
    for c in chains {
        for &a in c {
            seen[a] += 1;
            if !c.iter().all(|&b| og.leq(a, b) || og.leq(b, a)) {
                return false;
            }
        }
    }
    seen.iter().all(|&k| k == 1)
}

/// Whether some vertex map preserves every edge, matching colors by name.
pub fn morphism_exists(src: &ColoredGraph, tgt: &ColoredGraph) -> bool {
    let (n, t) = (src.vertex_count(), tgt.vertex_count());
    if n == 0 {
        return true;
    }
    if t == 0 {
        return false;
    }
    let edges: Vec<(usize, &str, usize)> = src.edges().iter().map(|&(u, c, v)| (u, src.color_name(c), v)).collect();
    let tedges: std::collections::HashSet<(usize, &str, usize)> =
        tgt.edges().iter().map(|&(u, c, v)| (u, tgt.color_name(c), v)).collect();
    let mut map = vec![0usize; n];
    loop {
        if edges.iter().all(|&(u, c, v)| tedges.contains(&(map[u], c, map[v]))) {
            return true;
        }
        let mut i = 0;
        loop {
            if i == n {
                return false;
            }
            map[i] += 1;
            if map[i] < t {
                break;
            }
            map[i] = 0;
            i += 1;
        }
    }
}

/// Membership is unchanged by moving the first cycle letter into the prefix
/// and by doubling the cycle.
pub fn lasso_invariant(obj: &Objective, w: &LassoWord) -> bool {
    let base = obj.lasso_membership(w).unwrap();
    let mut rotated = w.clone();
    let first = rotated.cycle.remove(0);
    rotated.prefix.push(first.clone());
    rotated.cycle.push(first);
    let mut doubled = w.clone();
    doubled.cycle.extend(w.cycle.iter().cloned());
    obj.lasso_membership(&rotated).unwrap() == base && obj.lasso_membership(&doubled).unwrap() == base
}

/// `Some(k)` when found, `Some(usize::MAX)` for "more than k_max" or losing,
/// `None` when the search budget ran out.
pub fn memory_value(game: &Game, v: MemoryVariant, k_max: usize) -> Option<usize> {
    match min_memory(game, v, k_max) {
        Ok(MinMemory::Found { k, .. }) => Some(k),
        Ok(_) => Some(usize::MAX),
        Err(Error::BudgetExceeded(_)) => None,
        Err(e) => panic!("min_memory failed: {e}"),
    }
}

/// eps-free ≤ eps ≤ eps-chromatic and eps-free ≤ chromatic ≤ eps-chromatic,
/// over the values that could be computed.
pub fn memory_chain_holds(values: &[(MemoryVariant, Option<usize>)]) -> bool {
    use MemoryVariant::*;
    let get = |v: MemoryVariant| values.iter().find(|x| x.0 == v).and_then(|x| x.1);
    let le = |a: MemoryVariant, b: MemoryVariant| match (get(a), get(b)) {
        (Some(x), Some(y)) => x <= y,
        _ => true,
    };
    le(EpsFree, Eps) && le(Eps, EpsChromatic) && le(EpsFree, Chromatic) && le(Chromatic, EpsChromatic)
}
