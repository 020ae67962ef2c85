//! Seeded generators for graphs, games, lassos and posets. All randomness
//! goes through `ChaCha8Rng`, so a seed fixes the output on every platform.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::game::Game;
use crate::graph::{Color, ColoredGraph, GraphKind};
use crate::objective::{satisfying_vertices, LassoWord, Objective};
use crate::order::OrderedGraph;

pub type Rng8 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng8 {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Sink-free graph on `n` vertices with one to `max_out` edges per vertex;
/// each edge is an ε-edge with probability `eps`.
pub fn random_graph(rng: &mut Rng8, n: usize, alphabet: &[String], max_out: usize, eps: f64) -> ColoredGraph {
    assert!(n > 0 && !alphabet.is_empty() && max_out > 0);
    let mut edges = Vec::new();
    for v in 0..n {
        for _ in 0..rng.gen_range(1..=max_out) {
            let c = if rng.gen_bool(eps) { Color::EPS } else { Color(rng.gen_range(0..alphabet.len()) as u16) };
            edges.push((v, c, rng.gen_range(0..n)));
        }
    }
    let ids = (0..n).map(|i| format!("v{i}")).collect();
    ColoredGraph::new(alphabet.to_vec(), ids, edges, GraphKind::Graph).expect("generated graph is valid")
}

/// Game on a random graph over the objective's alphabet, random owners,
/// initial vertex 0.
pub fn random_game(rng: &mut Rng8, n: usize, objective: &Objective, eps: f64) -> Result<Game> {
    let g = random_graph(rng, n, &objective.alphabet(), 2, eps);
    let eve = (0..n).map(|_| rng.gen_bool(0.5)).collect();
    let epsilon = g.uses_eps();
    Game::new(g, eve, 0, objective.clone(), epsilon)
}

/// Random graph of at most `max_n` vertices restricted to what is reachable
/// from its satisfying vertices; `None` when `tries` attempts found none.
pub fn random_satisfying_graph(rng: &mut Rng8, max_n: usize, objective: &Objective, tries: usize) -> Result<Option<ColoredGraph>> {
    let alphabet = objective.alphabet();
    for _ in 0..tries {
        let n = rng.gen_range(1..=max_n);
        let g = random_graph(rng, n, &alphabet, 2, 0.0);
        let sat = satisfying_vertices(&g, objective)?;
        let roots: Vec<usize> = (0..n).filter(|&v| sat[v]).collect();
        if roots.is_empty() {
            continue;
        }
        let keep = g.reachable_from_all(&roots);
        return Ok(Some(g.restrict(&keep).0));
    }
    Ok(None)
}

/// `count` satisfying samples; fails if the objective is too rarely met.
pub fn satisfying_samples(rng: &mut Rng8, count: usize, max_n: usize, objective: &Objective) -> Result<Vec<ColoredGraph>> {
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        match random_satisfying_graph(rng, max_n, objective, 1000)? {
            Some(g) => out.push(g),
            None => {
                return Err(crate::error::Error::Precondition("could not sample a satisfying graph".into()));
            }
        }
    }
    Ok(out)
}

pub fn random_lasso(rng: &mut Rng8, alphabet: &[String], max_prefix: usize, max_cycle: usize) -> LassoWord {
    let plen = rng.gen_range(0..=max_prefix);
    let clen = rng.gen_range(1..=max_cycle);
    let prefix = (0..plen).map(|_| alphabet.choose(rng).unwrap().clone()).collect();
    let cycle = (0..clen).map(|_| alphabet.choose(rng).unwrap().clone()).collect();
    LassoWord { prefix, cycle }
}

/// Generating pairs of a random partial order on `n` points: a random DAG
/// compatible with a shuffled linear order.
pub fn random_order_pairs(rng: &mut Rng8, n: usize, density: f64) -> Vec<(usize, usize)> {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(density) {
                pairs.push((perm[i], perm[j]));
            }
        }
    }
    pairs
}

/// Random monotone graph: random order and edges, then monotone closure.
pub fn random_monotone(rng: &mut Rng8, n: usize, alphabet: &[String]) -> OrderedGraph {
    let density = rng.gen_range(0.1..0.6);
    let pairs = random_order_pairs(rng, n, density);
    let g = random_graph(rng, n, alphabet, 2, 0.0);
    OrderedGraph::new(g, &pairs).expect("random order is acyclic").close_monotone()
}

/// Subset of `0..n` as a set, each element kept with probability `p`.
pub fn random_subset(rng: &mut Rng8, n: usize, p: f64) -> BTreeSet<usize> {
    (0..n).filter(|_| rng.gen_bool(p)).collect()
}
