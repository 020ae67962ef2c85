//! JSON documents for graphs, games, objectives and strategies.
//!
//! Graph documents carry `alphabet`, `vertices` (`{id, owner?}`), `edges`
//! (`[src, color, dst]`, color `eps` for ε) and optionally `initial`.
//! Ordered graphs add `order` (cover pairs `[lower, upper]`), ε-separated
//! ones add `parts` and `delta`, and games add `eve`, `objective` and
//! `epsilon`.

use std::collections::{BTreeMap, HashMap};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{Game, ProductStrategy};
use crate::graph::{Color, ColoredGraph, GraphKind, Owner, EPS_NAME};
use crate::objective::builtin::{builtin_objective, Params};
use crate::objective::{Dfa, Dpa, Objective};
use crate::order::{ChromaticTag, EpsSeparatedGraph, OrderedGraph};
use crate::universal::Universal;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexDoc {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub owner: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartDoc {
    pub name: String,
    pub vertices: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDoc {
    pub alphabet: Vec<String>,
    pub vertices: Vec<VertexDoc>,
    pub edges: Vec<(String, String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<Vec<(String, String)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parts: Option<Vec<PartDoc>>,
    /// `delta[part][color] = part`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<BTreeMap<String, BTreeMap<String, String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eve: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub objective: Option<ObjectiveRef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<bool>,
}

/// An inline objective or the path of an objective file, relative to the
/// document that mentions it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ObjectiveRef {
    Inline(ObjectiveDoc),
    File(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DfaDoc {
    pub states: Vec<String>,
    pub initial: String,
    pub sink: String,
    /// `delta[state][letter] = state`.
    pub delta: BTreeMap<String, BTreeMap<String, String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum ObjectiveDoc {
    Muller {
        alphabet: Vec<String>,
        family: Vec<Vec<String>>,
    },
    Parity {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        alphabet: Option<Vec<String>>,
        priorities: BTreeMap<String, u32>,
    },
    Safety {
        alphabet: Vec<String>,
        dfa: DfaDoc,
    },
    Dpa {
        alphabet: Vec<String>,
        states: Vec<String>,
        initial: String,
        /// `delta[state][letter] = [state, priority]`.
        delta: BTreeMap<String, BTreeMap<String, (String, u32)>>,
        #[serde(default)]
        prefix_independent: bool,
    },
    Lexico {
        parts: Vec<ObjectiveDoc>,
    },
    Union {
        parts: Vec<ObjectiveDoc>,
    },
    Intersection {
        parts: Vec<ObjectiveDoc>,
    },
    Builtin {
        name: String,
        #[serde(default)]
        params: Params,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrategyDoc {
    pub memory: Vec<String>,
    /// `[vertex, memory]`.
    pub initial: (String, String),
    /// `[src, mem, color, dst, mem]`.
    pub edges: Vec<(String, String, String, String, String)>,
    /// `delta[mem][color] = mem`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<BTreeMap<String, BTreeMap<String, String>>>,
    #[serde(default)]
    pub eps_respecting: bool,
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

fn to_json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

pub fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn index_by_id(g: &ColoredGraph, id: &str) -> Result<usize> {
    g.index_of(id).ok_or_else(|| Error::UnknownVertex(id.to_string()))
}

fn color_by_name(g: &ColoredGraph, name: &str) -> Result<Color> {
    if name == EPS_NAME {
        return Ok(Color::EPS);
    }
    g.color_of(name).ok_or_else(|| Error::UnknownColor(name.to_string()))
}

fn owner_name(o: Owner) -> &'static str {
    match o {
        Owner::Eve => "eve",
        Owner::Adam => "adam",
    }
}

// ---- graphs ----

pub fn graph_doc(g: &ColoredGraph, owners: Option<&[Owner]>) -> GraphDoc {
    GraphDoc {
        alphabet: g.alphabet().to_vec(),
        vertices: (0..g.vertex_count())
            .map(|v| VertexDoc { id: g.id(v).to_string(), owner: owners.map(|o| owner_name(o[v]).to_string()) })
            .collect(),
        edges: g
            .edges()
            .iter()
            .map(|&(a, c, b)| (g.id(a).to_string(), g.color_name(c).to_string(), g.id(b).to_string()))
            .collect(),
        initial: None,
        order: None,
        parts: None,
        delta: None,
        eve: None,
        objective: None,
        epsilon: None,
    }
}

fn doc_graph(doc: &GraphDoc, kind: GraphKind) -> Result<ColoredGraph> {
    let ids: Vec<String> = doc.vertices.iter().map(|v| v.id.clone()).collect();
    ColoredGraph::from_named(&doc.alphabet, &ids, &doc.edges, kind)
}

pub fn parse_graph(text: &str) -> Result<ColoredGraph> {
    doc_graph(&parse_json(text)?, GraphKind::Graph)
}

pub fn write_graph(g: &ColoredGraph) -> String {
    to_json(&graph_doc(g, None))
}

// ---- ordered and ε-separated graphs ----

pub fn universal_doc(u: &Universal) -> GraphDoc {
    match u {
        Universal::Ordered(og) => {
            let g = og.graph();
            let mut doc = graph_doc(g, None);
            doc.order =
                Some(og.cover_pairs().into_iter().map(|(a, b)| (g.id(a).to_string(), g.id(b).to_string())).collect());
            doc
        }
        Universal::Separated(s) => {
            let g = &s.graph;
            let mut doc = graph_doc(g, None);
            doc.parts = Some(
                s.part_names
                    .iter()
                    .enumerate()
                    .map(|(i, name)| PartDoc {
                        name: name.clone(),
                        vertices: (0..g.vertex_count()).filter(|&v| s.part[v] == i).map(|v| g.id(v).to_string()).collect(),
                    })
                    .collect(),
            );
            doc.delta = s.tag.as_ref().map(|t| {
                s.part_names
                    .iter()
                    .enumerate()
                    .map(|(i, name)| {
                        let row = g
                            .alphabet()
                            .iter()
                            .enumerate()
                            .map(|(c, cname)| (cname.clone(), s.part_names[t.update[i][c]].clone()))
                            .collect();
                        (name.clone(), row)
                    })
                    .collect()
            });
            doc
        }
    }
}

pub fn parse_universal(text: &str) -> Result<Universal> {
    let doc: GraphDoc = parse_json(text)?;
    let g = doc_graph(&doc, GraphKind::Pregraph)?;
    if let Some(parts) = &doc.parts {
        let mut part = vec![usize::MAX; g.vertex_count()];
        for (i, p) in parts.iter().enumerate() {
            for id in &p.vertices {
                part[index_by_id(&g, id)?] = i;
            }
        }
        if let Some(v) = part.iter().position(|&p| p == usize::MAX) {
            return Err(Error::Parse(format!("vertex `{}` is in no part", g.id(v))));
        }
        let names: Vec<String> = parts.iter().map(|p| p.name.clone()).collect();
        let tag = match &doc.delta {
            None => None,
            Some(delta) => {
                let mut update = Vec::with_capacity(names.len());
                for name in &names {
                    let row = delta.get(name).ok_or_else(|| Error::Parse(format!("delta misses part `{name}`")))?;
                    let mut out = Vec::with_capacity(g.alphabet().len());
                    for c in g.alphabet() {
                        let target = row.get(c).ok_or_else(|| Error::Parse(format!("delta misses `{name}`, `{c}`")))?;
                        out.push(
                            names
                                .iter()
                                .position(|n| n == target)
                                .ok_or_else(|| Error::Parse(format!("unknown part `{target}`")))?,
                        );
                    }
                    update.push(out);
                }
                Some(ChromaticTag::new(update))
            }
        };
        let s = EpsSeparatedGraph { graph: g, part, part_names: names, tag };
        s.validate().map_err(|e| Error::NotMonotone(e.to_string()))?;
        return Ok(Universal::Separated(s));
    }
    let mut pairs = Vec::new();
    for (a, b) in doc.order.iter().flatten() {
        pairs.push((index_by_id(&g, a)?, index_by_id(&g, b)?));
    }
    Ok(Universal::Ordered(OrderedGraph::new(g, &pairs)?))
}

pub fn write_universal(u: &Universal) -> String {
    to_json(&universal_doc(u))
}

// ---- objectives ----

pub fn objective_doc(o: &Objective) -> ObjectiveDoc {
    match o {
        Objective::Muller { alphabet, family } => ObjectiveDoc::Muller {
            alphabet: alphabet.clone(),
            family: family
                .iter()
                .map(|&m| (0..alphabet.len()).filter(|&i| m >> i & 1 == 1).map(|i| alphabet[i].clone()).collect())
                .collect(),
        },
        Objective::Parity { alphabet, priorities } => ObjectiveDoc::Parity {
            alphabet: Some(alphabet.clone()),
            priorities: alphabet.iter().cloned().zip(priorities.iter().copied()).collect(),
        },
        Objective::Safety { alphabet, dfa } => ObjectiveDoc::Safety {
            alphabet: alphabet.clone(),
            dfa: DfaDoc {
                states: dfa.states.clone(),
                initial: dfa.states[dfa.initial].clone(),
                sink: dfa.states[dfa.sink].clone(),
                delta: dfa
                    .states
                    .iter()
                    .enumerate()
                    .map(|(q, name)| {
                        let row = alphabet.iter().enumerate().map(|(l, c)| (c.clone(), dfa.states[dfa.delta[q][l]].clone())).collect();
                        (name.clone(), row)
                    })
                    .collect(),
            },
        },
        Objective::Automaton { alphabet, dpa, prefix_independent } => ObjectiveDoc::Dpa {
            alphabet: alphabet.clone(),
            states: dpa.states.clone(),
            initial: dpa.states[dpa.initial].clone(),
            delta: dpa
                .states
                .iter()
                .enumerate()
                .map(|(q, name)| {
                    let row = alphabet
                        .iter()
                        .enumerate()
                        .map(|(l, c)| {
                            let (q2, p) = dpa.delta[q][l];
                            (c.clone(), (dpa.states[q2].clone(), p))
                        })
                        .collect();
                    (name.clone(), row)
                })
                .collect(),
            prefix_independent: *prefix_independent,
        },
        Objective::Lexico(l, r) => ObjectiveDoc::Lexico { parts: vec![objective_doc(l), objective_doc(r)] },
        Objective::Union(p) => ObjectiveDoc::Union { parts: p.iter().map(objective_doc).collect() },
        Objective::Intersection(p) => ObjectiveDoc::Intersection { parts: p.iter().map(objective_doc).collect() },
    }
}

fn state_table<T: Clone>(
    states: &[String],
    alphabet: &[String],
    delta: &BTreeMap<String, BTreeMap<String, T>>,
    mut resolve: impl FnMut(&T) -> Result<(usize, u32)>,
) -> Result<Vec<Vec<(usize, u32)>>> {
    let mut out = Vec::with_capacity(states.len());
    for q in states {
        let row = delta.get(q).ok_or_else(|| Error::Parse(format!("no transitions for state `{q}`")))?;
        let mut r = Vec::with_capacity(alphabet.len());
        for c in alphabet {
            let t = row.get(c).ok_or_else(|| Error::Parse(format!("no transition from `{q}` on `{c}`")))?;
            r.push(resolve(t)?);
        }
        out.push(r);
    }
    Ok(out)
}

fn state_index(states: &[String], name: &str) -> Result<usize> {
    states.iter().position(|s| s == name).ok_or_else(|| Error::Parse(format!("unknown state `{name}`")))
}

pub fn doc_objective(doc: &ObjectiveDoc) -> Result<Objective> {
    let o = match doc {
        ObjectiveDoc::Muller { alphabet, family } => return Objective::muller(alphabet, family),
        ObjectiveDoc::Parity { alphabet, priorities } => {
            let alphabet: Vec<String> = alphabet.clone().unwrap_or_else(|| priorities.keys().cloned().collect());
            let mut colors = Vec::with_capacity(alphabet.len());
            for c in &alphabet {
                let p = priorities.get(c).ok_or_else(|| Error::Parse(format!("no priority for `{c}`")))?;
                colors.push((c.clone(), *p));
            }
            if priorities.len() != alphabet.len() {
                return Err(Error::Parse("priorities name colors outside the alphabet".into()));
            }
            return Objective::parity(&colors);
        }
        ObjectiveDoc::Safety { alphabet, dfa } => {
            let table = state_table(&dfa.states, alphabet, &dfa.delta, |t: &String| Ok((state_index(&dfa.states, t)?, 0)))?;
            Objective::Safety {
                alphabet: alphabet.clone(),
                dfa: Dfa {
                    states: dfa.states.clone(),
                    initial: state_index(&dfa.states, &dfa.initial)?,
                    sink: state_index(&dfa.states, &dfa.sink)?,
                    delta: table.into_iter().map(|r| r.into_iter().map(|(q, _)| q).collect()).collect(),
                },
            }
        }
        ObjectiveDoc::Dpa { alphabet, states, initial, delta, prefix_independent } => {
            let table = state_table(states, alphabet, delta, |(t, p): &(String, u32)| Ok((state_index(states, t)?, *p)))?;
            Objective::Automaton {
                alphabet: alphabet.clone(),
                dpa: Dpa { states: states.clone(), initial: state_index(states, initial)?, delta: table },
                prefix_independent: *prefix_independent,
            }
        }
        ObjectiveDoc::Lexico { parts } => {
            let [l, r] = parts.as_slice() else {
                return Err(Error::Parse("lexico takes exactly two parts".into()));
            };
            Objective::Lexico(Box::new(doc_objective(l)?), Box::new(doc_objective(r)?))
        }
        ObjectiveDoc::Union { parts } => Objective::Union(parts.iter().map(doc_objective).collect::<Result<_>>()?),
        ObjectiveDoc::Intersection { parts } => {
            Objective::Intersection(parts.iter().map(doc_objective).collect::<Result<_>>()?)
        }
        ObjectiveDoc::Builtin { name, params } => return builtin_objective(name, params),
    };
    o.validate()?;
    Ok(o)
}

pub fn parse_objective(text: &str) -> Result<Objective> {
    doc_objective(&parse_json(text)?)
}

pub fn write_objective(o: &Objective) -> String {
    to_json(&objective_doc(o))
}

pub fn load_objective(path: &Path) -> Result<Objective> {
    parse_objective(&read_file(path)?)
}

// ---- games ----

pub fn game_doc(game: &Game) -> GraphDoc {
    let g = &game.graph;
    let mut doc = graph_doc(g, Some(&game.owners()));
    doc.initial = Some(g.id(game.initial).to_string());
    doc.eve = Some((0..g.vertex_count()).filter(|&v| game.eve[v]).map(|v| g.id(v).to_string()).collect());
    doc.objective = Some(ObjectiveRef::Inline(objective_doc(&game.objective)));
    doc.epsilon = Some(game.epsilon);
    doc
}

/// Parses a game; objective file references resolve against `base`.
pub fn parse_game(text: &str, base: Option<&Path>) -> Result<Game> {
    let doc: GraphDoc = parse_json(text)?;
    let g = doc_graph(&doc, GraphKind::Graph)?;
    let n = g.vertex_count();
    let eve = match &doc.eve {
        Some(list) => {
            let mut eve = vec![false; n];
            for id in list {
                eve[index_by_id(&g, id)?] = true;
            }
            eve
        }
        None => {
            let mut eve = Vec::with_capacity(n);
            for v in &doc.vertices {
                eve.push(match v.owner.as_deref() {
                    Some("eve") => true,
                    Some("adam") | None => false,
                    Some(o) => return Err(Error::Parse(format!("unknown owner `{o}`"))),
                });
            }
            eve
        }
    };
    let initial = match &doc.initial {
        Some(id) => index_by_id(&g, id)?,
        None if n > 0 => 0,
        None => return Err(Error::Parse("game without vertices".into())),
    };
    let objective = match &doc.objective {
        None => return Err(Error::Parse("game without objective".into())),
        Some(ObjectiveRef::Inline(o)) => doc_objective(o)?,
        Some(ObjectiveRef::File(f)) => {
            let p = base.map_or_else(|| PathBuf::from(f), |b| b.join(f));
            load_objective(&p)?
        }
    };
    let epsilon = doc.epsilon.unwrap_or_else(|| g.uses_eps());
    Game::new(g, eve, initial, objective, epsilon)
}

pub fn write_game(game: &Game) -> String {
    to_json(&game_doc(game))
}

pub fn load_game(path: &Path) -> Result<Game> {
    parse_game(&read_file(path)?, path.parent())
}

// ---- strategies ----

pub fn strategy_doc(game: &Game, s: &ProductStrategy) -> StrategyDoc {
    let g = &game.graph;
    let name = |i: usize| {
        let (v, m) = s.vertices[i];
        (g.id(v).to_string(), s.memory[m].clone())
    };
    let delta = s.delta.as_ref().map(|d| {
        s.memory
            .iter()
            .enumerate()
            .map(|(m, mname)| {
                let mut row: BTreeMap<String, String> = BTreeMap::new();
                row.insert(EPS_NAME.to_string(), s.memory[d[m][0]].clone());
                for (c, cname) in g.alphabet().iter().enumerate() {
                    row.insert(cname.clone(), s.memory[d[m][c + 1]].clone());
                }
                (mname.clone(), row)
            })
            .collect()
    });
    StrategyDoc {
        memory: s.memory.clone(),
        initial: name(s.initial),
        edges: s
            .edges
            .iter()
            .map(|&(a, c, b)| {
                let (v, m) = name(a);
                let (w, m2) = name(b);
                (v, m, g.color_name(c).to_string(), w, m2)
            })
            .collect(),
        delta,
        eps_respecting: s.eps_respecting,
    }
}

pub fn parse_strategy(text: &str, game: &Game) -> Result<ProductStrategy> {
    let doc: StrategyDoc = parse_json(text)?;
    let g = &game.graph;
    let mem = |name: &str| -> Result<usize> {
        doc.memory.iter().position(|m| m == name).ok_or_else(|| Error::Parse(format!("unknown memory state `{name}`")))
    };
    let mut index: HashMap<(usize, usize), usize> = HashMap::new();
    let mut vertices = Vec::new();
    let mut intern = |v: usize, m: usize| -> usize {
        *index.entry((v, m)).or_insert_with(|| {
            vertices.push((v, m));
            vertices.len() - 1
        })
    };
    let initial = intern(index_by_id(g, &doc.initial.0)?, mem(&doc.initial.1)?);
    let mut edges = Vec::with_capacity(doc.edges.len());
    for (v, m, c, w, m2) in &doc.edges {
        let a = intern(index_by_id(g, v)?, mem(m)?);
        let b = intern(index_by_id(g, w)?, mem(m2)?);
        edges.push((a, color_by_name(g, c)?, b));
    }
    let slots = g.alphabet().len() + 1;
    let delta = match &doc.delta {
        None => None,
        Some(d) => {
            let mut table = vec![vec![0; slots]; doc.memory.len()];
            for (m, row) in table.iter_mut().enumerate() {
                let given = d.get(&doc.memory[m]);
                for (s, entry) in row.iter_mut().enumerate() {
                    let cname = if s == 0 { EPS_NAME.to_string() } else { g.alphabet()[s - 1].clone() };
                    let target = given.and_then(|r| r.get(&cname));
                    *entry = match target {
                        Some(t) => mem(t)?,
                        None if s == 0 => m,
                        None => return Err(Error::Parse(format!("delta misses `{}`, `{cname}`", doc.memory[m]))),
                    };
                }
            }
            Some(table)
        }
    };
    Ok(ProductStrategy { memory: doc.memory.clone(), vertices, edges, initial, delta, eps_respecting: doc.eps_respecting })
}

pub fn write_strategy(game: &Game, s: &ProductStrategy) -> String {
    to_json(&strategy_doc(game, s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{fig1_game, verify_strategy, w2_eps_game};
    use crate::objective::builtin::{parity, w1, w2, w3, w4};
    use crate::solve::solve_oracle;
    use crate::universal::{muller_universal, w4_universal};

    #[test]
    fn objectives_round_trip() {
        let objs = vec![
            w1(),
            w2(3).unwrap(),
            w3(1, 2).unwrap(),
            w4(),
            parity(3).unwrap(),
            Objective::Union(vec![w1(), w1()]),
            Objective::Lexico(Box::new(parity(1).unwrap()), Box::new(Objective::muller(&["x"], &[vec!["x"]]).unwrap())),
        ];
        for o in objs {
            let text = write_objective(&o);
            assert_eq!(parse_objective(&text).unwrap(), o, "{text}");
        }
    }

    #[test]
    fn games_round_trip() {
        for g in [fig1_game().unwrap(), w2_eps_game(3).unwrap()] {
            let text = write_game(&g);
            let back = parse_game(&text, None).unwrap();
            assert_eq!(back.graph, g.graph);
            assert_eq!(back.eve, g.eve);
            assert_eq!(back.objective, g.objective);
            assert_eq!(write_game(&back), text);
        }
    }

    #[test]
    fn universal_round_trip() {
        let u = Universal::Ordered(muller_universal(&w1(), 2).unwrap());
        let text = write_universal(&u);
        assert_eq!(write_universal(&parse_universal(&text).unwrap()), text);
        let s = Universal::Separated(w4_universal(3).unwrap());
        let text = write_universal(&s);
        let back = parse_universal(&text).unwrap();
        assert!(matches!(back, Universal::Separated(ref b) if b.tag.is_some()));
        assert_eq!(write_universal(&back), text);
    }

    #[test]
    fn strategy_round_trip() {
        let g = fig1_game().unwrap();
        let s = solve_oracle(&g).unwrap().eve_strategy(&g, g.initial).unwrap();
        let text = write_strategy(&g, &s);
        let back = parse_strategy(&text, &g).unwrap();
        assert_eq!(write_strategy(&g, &back), text);
        assert!(verify_strategy(&g, &back).unwrap().is_winning());
    }

    #[test]
    fn malformed_input_is_an_error() {
        assert!(matches!(parse_objective("{\"type\":\"muller\"}"), Err(Error::Parse(_))));
        assert!(parse_objective(r#"{"type":"muller","alphabet":["a"],"family":[["z"]]}"#).is_err());
        assert!(parse_graph(r#"{"alphabet":["a"],"vertices":[{"id":"x"}],"edges":[]}"#).is_err());
    }
}
