//! Search for strongly connected subgraphs whose label set is rejecting.
//!
//! A product graph carries a label mask on every edge. The infinite paths
//! of a finite graph that stay in a strongly connected region visit exactly
//! the edges of some strongly connected subgraph, so a violation exists iff
//! some strongly connected subgraph has a rejecting label set. Candidates are
//! explored by SCC decomposition followed by deleting one label at a time.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::scc::tarjan;

/// Labeled edge `(from, mask, to)` plus an opaque payload used for lassos.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub(crate) struct LEdge<P> {
    pub from: usize,
    pub mask: u64,
    pub to: usize,
    pub payload: P,
}

/// Edge ids of a strongly connected subgraph for which `bad(mask, node)`
/// holds, where `node` is any node of the subgraph.
pub(crate) fn find_bad_subgraph<P>(
    edges: &[LEdge<P>],
    candidates: Vec<usize>,
    bad: &mut dyn FnMut(u64, usize) -> bool,
) -> Option<Vec<usize>> {
    let mut memo: HashSet<Vec<usize>> = HashSet::new();
    search(edges, candidates, bad, &mut memo)
}

fn search<P>(
    edges: &[LEdge<P>],
    ids: Vec<usize>,
    bad: &mut dyn FnMut(u64, usize) -> bool,
    memo: &mut HashSet<Vec<usize>>,
) -> Option<Vec<usize>> {
    let mut local: HashMap<usize, usize> = HashMap::new();
    let mut nodes: Vec<usize> = Vec::new();
    for &e in &ids {
        for x in [edges[e].from, edges[e].to] {
            local.entry(x).or_insert_with(|| {
                nodes.push(x);
                nodes.len() - 1
            });
        }
    }
    let mut adj = vec![Vec::new(); nodes.len()];
    for &e in &ids {
        adj[local[&edges[e].from]].push(local[&edges[e].to]);
    }
    let comps = tarjan(&adj);
    let mut comp_of = vec![0usize; nodes.len()];
    for (i, c) in comps.iter().enumerate() {
        for &x in c {
            comp_of[x] = i;
        }
    }
    let mut inner: Vec<Vec<usize>> = vec![Vec::new(); comps.len()];
    for &e in &ids {
        let (a, b) = (local[&edges[e].from], local[&edges[e].to]);
        if comp_of[a] == comp_of[b] {
            inner[comp_of[a]].push(e);
        }
    }
    for sub in inner {
        if sub.is_empty() {
            continue;
        }
        let mask = sub.iter().fold(0u64, |m, &e| m | edges[e].mask);
        if bad(mask, edges[sub[0]].from) {
            return Some(sub);
        }
        let mut bits = mask;
        while bits != 0 {
            let bit = bits & bits.wrapping_neg();
            bits &= bits - 1;
            let smaller: Vec<usize> = sub.iter().copied().filter(|&e| edges[e].mask & bit == 0).collect();
            if smaller.is_empty() || !memo.insert(smaller.clone()) {
                continue;
            }
            if let Some(found) = search(edges, smaller, bad, memo) {
                return Some(found);
            }
        }
    }
    None
}

/// Nodes from which some strongly connected subgraph satisfying `bad` is
/// reachable.
pub(crate) fn nodes_reaching_bad<P>(
    node_count: usize,
    edges: &[LEdge<P>],
    bad: &mut dyn FnMut(u64, usize) -> bool,
) -> Vec<bool> {
    let mut adj = vec![Vec::new(); node_count];
    for e in edges {
        adj[e.from].push(e.to);
    }
    let comps = tarjan(&adj);
    let mut comp_of = vec![0usize; node_count];
    for (i, c) in comps.iter().enumerate() {
        for &x in c {
            comp_of[x] = i;
        }
    }
    let mut inner: Vec<Vec<usize>> = vec![Vec::new(); comps.len()];
    for (i, e) in edges.iter().enumerate() {
        if comp_of[e.from] == comp_of[e.to] {
            inner[comp_of[e.from]].push(i);
        }
    }
    let mut marked = vec![false; node_count];
    for (ci, ids) in inner.into_iter().enumerate() {
        if !ids.is_empty() && find_bad_subgraph(edges, ids, bad).is_some() {
            for &x in &comps[ci] {
                marked[x] = true;
            }
        }
    }
    let mut pred = vec![Vec::new(); node_count];
    for e in edges {
        pred[e.to].push(e.from);
    }
    let mut queue: VecDeque<usize> = (0..node_count).filter(|&x| marked[x]).collect();
    while let Some(x) = queue.pop_front() {
        for &p in &pred[x] {
            if !marked[p] {
                marked[p] = true;
                queue.push_back(p);
            }
        }
    }
    marked
}

/// A path from one of `starts` into `sub` followed by a closed walk through
/// every edge of the strongly connected subgraph `sub`. Returns the edge
/// sequences (prefix, cycle) and the start node used.
pub(crate) fn lasso_through<P>(
    edges: &[LEdge<P>],
    out: &[Vec<usize>],
    starts: &[usize],
    sub: &[usize],
) -> (usize, Vec<usize>, Vec<usize>) {
    let target: HashSet<usize> = sub.iter().map(|&e| edges[e].from).collect();
    // BFS over the whole product graph for the prefix.
    let mut parent: HashMap<usize, Option<usize>> = HashMap::new();
    let mut queue = VecDeque::new();
    for &s in starts {
        if !parent.contains_key(&s) {
            parent.insert(s, None);
            queue.push_back(s);
        }
    }
    let mut hit = None;
    while let Some(x) = queue.pop_front() {
        if target.contains(&x) {
            hit = Some(x);
            break;
        }
        for &e in &out[x] {
            let y = edges[e].to;
            if !parent.contains_key(&y) {
                parent.insert(y, Some(e));
                queue.push_back(y);
            }
        }
    }
    let entry = hit.expect("bad subgraph is reachable");
    let mut prefix = Vec::new();
    let mut cur = entry;
    while let Some(Some(e)) = parent.get(&cur) {
        prefix.push(*e);
        cur = edges[*e].from;
    }
    let start = cur;
    prefix.reverse();
    // Closed walk inside the subgraph covering each of its edges.
    let mut sub_out: HashMap<usize, Vec<usize>> = HashMap::new();
    for &e in sub {
        sub_out.entry(edges[e].from).or_default().push(e);
    }
    let path_inside = |from: usize, to: usize| -> Vec<usize> {
        if from == to {
            return Vec::new();
        }
        let mut par: HashMap<usize, usize> = HashMap::new();
        let mut q = VecDeque::from([from]);
        let mut seen: HashSet<usize> = HashSet::from([from]);
        while let Some(x) = q.pop_front() {
            if x == to {
                break;
            }
            for &e in sub_out.get(&x).map(|v| v.as_slice()).unwrap_or(&[]) {
                let y = edges[e].to;
                if seen.insert(y) {
                    par.insert(y, e);
                    q.push_back(y);
                }
            }
        }
        let mut path = Vec::new();
        let mut c = to;
        while c != from {
            let e = par[&c];
            path.push(e);
            c = edges[e].from;
        }
        path.reverse();
        path
    };
    let mut cycle = Vec::new();
    let mut pos = entry;
    for &e in sub {
        cycle.extend(path_inside(pos, edges[e].from));
        cycle.push(e);
        pos = edges[e].to;
    }
    cycle.extend(path_inside(pos, entry));
    (start, prefix, cycle)
}
