//! Named example objectives.

use std::collections::BTreeMap;

use super::{Dfa, Dpa, Objective};
use crate::error::{Error, Result};

/// Integer parameters by name, e.g. `colors`, `m`, `n`.
pub type Params = BTreeMap<String, usize>;

/// The first `k` letters `a, b, c, ...`.
pub fn letter_alphabet(k: usize) -> Vec<String> {
    (0..k).map(|i| ((b'a' + i as u8) as char).to_string()).collect()
}

fn param(params: &Params, key: &str, default: usize) -> usize {
    params.get(key).copied().unwrap_or(default)
}

/// Both `a` and `b` infinitely often.
pub fn w1() -> Objective {
    Objective::muller(&["a", "b"], &[vec!["a", "b"]]).expect("valid family")
}

/// No color repeated twice in a row, over `k` colors.
pub fn w2(k: usize) -> Result<Objective> {
    if !(2..=26).contains(&k) {
        return Err(Error::BadParams("W2 needs between 2 and 26 colors".into()));
    }
    let alphabet = letter_alphabet(k);
    let mut states = vec!["start".to_string()];
    states.extend(alphabet.iter().map(|c| format!("last={c}")));
    states.push("sink".into());
    let sink = k + 1;
    let mut delta = vec![(1..=k).collect::<Vec<_>>()];
    for last in 1..=k {
        delta.push((1..=k).map(|c| if c == last { sink } else { c }).collect());
    }
    delta.push(vec![sink; k]);
    Ok(Objective::Safety { alphabet, dfa: Dfa { states, initial: 0, sink, delta } })
}

/// Words with at least `m` occurrences of `a`, then after the `m`-th one
/// another `a` at least `n + 1` letters later. Over `{a, b}`.
pub fn w3(m: usize, n: usize) -> Result<Objective> {
    if m == 0 || n == 0 {
        return Err(Error::BadParams("W3 needs m, n >= 1".into()));
    }
    let alphabet = letter_alphabet(2);
    let mut states: Vec<String> = (0..m).map(|j| format!("q{j}")).collect();
    states.extend((0..=n).map(|i| format!("p{i}")));
    states.push("won".into());
    let p = |i: usize| m + i;
    let won = m + n + 1;
    let mut delta = Vec::new();
    for j in 0..m {
        let on_a = if j + 1 < m { j + 1 } else { p(0) };
        delta.push(vec![(on_a, 1), (j, 1)]);
    }
    for i in 0..n {
        delta.push(vec![(p(i + 1), 1), (p(i + 1), 1)]);
    }
    delta.push(vec![(won, 0), (p(n), 1)]);
    delta.push(vec![(won, 0), (won, 0)]);
    Ok(Objective::Automaton {
        alphabet,
        dpa: Dpa { states, initial: 0, delta },
        prefix_independent: false,
    })
}

/// The three-state parity automaton for "infinitely many `bb`, or finitely
/// many `b` and finitely many `aa`", over `{a, b, c}`.
pub fn w4_automaton() -> Dpa {
    // states: q (last letter b or start), p (last letter a), p' (last letter c)
    let (q, p, pp) = (0, 1, 2);
    Dpa {
        states: vec!["q".into(), "p".into(), "p'".into()],
        initial: q,
        delta: vec![
            vec![(p, 1), (q, 2), (pp, 1)],
            vec![(p, 1), (q, 1), (pp, 0)],
            vec![(p, 0), (q, 1), (pp, 0)],
        ],
    }
}

pub fn w4() -> Objective {
    Objective::Automaton { alphabet: letter_alphabet(3), dpa: w4_automaton(), prefix_independent: true }
}

/// Exactly two colors infinitely often, over `k` colors.
pub fn w5(k: usize) -> Result<Objective> {
    if !(2..=16).contains(&k) {
        return Err(Error::BadParams("W5 needs between 2 and 16 colors".into()));
    }
    let alphabet = letter_alphabet(k);
    let mut family = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            family.push(vec![alphabet[i].clone(), alphabet[j].clone()]);
        }
    }
    Objective::muller(&alphabet, &family)
}

/// The single word `(ab)^ω`.
pub fn alternation() -> Objective {
    let dfa = Dfa {
        states: vec!["expect-a".into(), "expect-b".into(), "sink".into()],
        initial: 0,
        sink: 2,
        delta: vec![vec![1, 2], vec![2, 0], vec![2, 2]],
    };
    Objective::Safety { alphabet: letter_alphabet(2), dfa }
}

/// Max-parity on colors `0..=max` where color `i` has priority `i`.
pub fn parity(max: usize) -> Result<Objective> {
    if max > 30 {
        return Err(Error::BadParams("at most 31 priorities".into()));
    }
    let colors: Vec<(String, u32)> = (0..=max).map(|p| (p.to_string(), p as u32)).collect();
    Objective::parity(&colors)
}

pub const BUILTIN_OBJECTIVES: &[&str] = &["w1", "w2", "w3", "w4", "w5", "alternation", "parity"];

/// Builtin objective by name, one of [`BUILTIN_OBJECTIVES`].

pub fn builtin_objective(name: &str, params: &Params) -> Result<Objective> {
    match name.to_ascii_lowercase().as_str() {
        "w1" => Ok(w1()),
        "w2" => w2(param(params, "colors", 3)),
        "w3" => w3(param(params, "m", 1), param(params, "n", 2)),
        "w4" => Ok(w4()),
        "w5" => w5(param(params, "colors", 3)),
        "alternation" => Ok(alternation()),
        "parity" => parity(param(params, "max", 2)),
        other => Err(Error::UnknownName(other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objective::LassoWord;

    /// Direct reading of the W3 definition on a lasso: find the m-th `a`,
    /// then look for an `a` at distance at least n + 1.
    fn w3_direct(m: usize, n: usize, w: &LassoWord) -> bool {
        let mut word: Vec<String> = w.prefix.clone();
        let horizon = w.prefix.len() + (m + n + 2) * w.cycle.len() + 1;
        while word.len() < horizon {
            word.extend(w.cycle.iter().cloned());
        }
        let a_positions: Vec<usize> = (0..word.len()).filter(|&i| word[i] == "a").collect();
        if a_positions.len() < m {
            return false;
        }
        let i0 = a_positions[m - 1];
        a_positions.iter().any(|&j| j >= i0 + n + 1)
    }

    #[test]
    fn w3_agrees_with_direct_reading() {
        let letters = ["a", "b"];
        let mut words = vec![vec![]];
        for _ in 0..4 {
            let mut next = Vec::new();
            for w in &words {
                for l in letters {
                    let mut x: Vec<&str> = w.clone();
                    x.push(l);
                    next.push(x);
                }
            }
            words.extend(next);
            words.sort();
            words.dedup();
        }
        for (m, n) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
            let obj = w3(m, n).unwrap();
            for u in &words {
                for v in words.iter().filter(|v| !v.is_empty()) {
                    let lasso = LassoWord::new(u, v);
                    assert_eq!(obj.lasso_membership(&lasso).unwrap(), w3_direct(m, n, &lasso), "{lasso}");
                }
            }
        }
    }

    /// Direct reading of W4 on a lasso: bb infinitely often, or b and aa
    /// both finitely often.
    fn w4_direct(w: &LassoWord) -> bool {
        let mut cyc = w.cycle.clone();
        cyc.extend(w.cycle.iter().cloned());
        let inf_bb = (0..w.cycle.len()).any(|i| cyc[i] == "b" && cyc[i + 1] == "b");
        let inf_b = w.cycle.iter().any(|c| c == "b");
        let inf_aa = (0..w.cycle.len()).any(|i| cyc[i] == "a" && cyc[i + 1] == "a");
        inf_bb || (!inf_b && !inf_aa)
    }

    #[test]
    fn w4_automaton_agrees_with_direct_reading() {
        let letters = ["a", "b", "c"];
        let mut words: Vec<Vec<&str>> = vec![vec![]];
        let mut layer: Vec<Vec<&str>> = vec![vec![]];
        for _ in 0..4 {
            let mut next = Vec::new();
            for w in &layer {
                for l in letters {
                    let mut x = w.clone();
                    x.push(l);
                    next.push(x);
                }
            }
            words.extend(next.iter().cloned());
            layer = next;
        }
        let obj = w4();
        for u in words.iter().filter(|u| u.len() <= 2) {
            for v in words.iter().filter(|v| !v.is_empty()) {
                let lasso = LassoWord::new(u, v);
                assert_eq!(obj.lasso_membership(&lasso).unwrap(), w4_direct(&lasso), "{lasso}");
            }
        }
    }

    #[test]
    fn parameters_are_checked() {
        assert!(w2(1).is_err());
        assert!(w3(0, 1).is_err());
        assert!(builtin_objective("nope", &Params::new()).is_err());
        assert_eq!(builtin_objective("W1", &Params::new()).unwrap(), w1());
    }
}
