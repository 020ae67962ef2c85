use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use proptest::prelude::*;
use rand::Rng;

use memoria::game::lower_bound_game;
use memoria::io;
use memoria::objective::builtin::{builtin_objective, Params, BUILTIN_OBJECTIVES};
use memoria::random::{random_game, random_monotone, rng};
use memoria::solve::{extract_strategy, solve_via_universal};
use memoria::universal::{builtin_universal, muller_universal, Universal, BUILTIN_UNIVERSAL};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn memoria(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_memoria")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn builtin_objectives_round_trip() {
    for name in BUILTIN_OBJECTIVES {
        let obj = builtin_objective(name, &Params::new()).unwrap();
        let text = io::write_objective(&obj);
        let back = io::parse_objective(&text).unwrap();
        assert_eq!(io::write_objective(&back), text, "{name}");
    }
}

#[test]
fn builtin_universals_round_trip() {
    for name in BUILTIN_UNIVERSAL {
        let u = builtin_universal(name, &Params::new(), 2).unwrap();
        let text = io::write_universal(&u);
        let back = io::parse_universal(&text).unwrap();
        assert_eq!(io::write_universal(&back), text, "{name}");
        assert_eq!(matches!(back, Universal::Separated(_)), matches!(u, Universal::Separated(_)));
    }
}

#[test]
fn lower_bound_games_and_strategies_round_trip() {
    for name in memoria::game::LOWER_BOUND_GAMES {
        let g = lower_bound_game(name, &Params::new()).unwrap();
        let text = io::write_game(&g);
        let back = io::parse_game(&text, None).unwrap();
        assert_eq!(io::write_game(&back), text, "{name}");
    }
    let g = lower_bound_game("w1", &Params::new()).unwrap();
    let u = Universal::Ordered(muller_universal(&g.objective, 4).unwrap());
    let sol = solve_via_universal(&g, &u.ordered()).unwrap();
    let s = extract_strategy(&g, &u, &sol).unwrap();
    let text = io::write_strategy(&g, &s);
    let back = io::parse_strategy(&text, &g).unwrap();
    assert_eq!(io::write_strategy(&g, &back), text);
}

#[test]
fn malformed_documents_are_rejected() {
    assert!(io::parse_graph("{").is_err());
    assert!(io::parse_graph(r#"{"alphabet":["a"],"vertices":[{"id":"x"}],"edges":[["x","a","y"]]}"#).is_err());
    assert!(io::parse_graph(r#"{"alphabet":["a"],"vertices":[{"id":"x"}],"edges":[["x","z","x"]]}"#).is_err());
    assert!(io::parse_objective(r#"{"type":"muller","alphabet":[],"family":[]}"#).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn random_documents_round_trip(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(1..=5);
        let og = random_monotone(&mut r, n, &["a".to_string(), "b".to_string()]);
        let u = Universal::Ordered(og);
        let text = io::write_universal(&u);
        prop_assert_eq!(io::write_universal(&io::parse_universal(&text).unwrap()), text);

        let obj = builtin_objective("w2", &Params::new()).unwrap();
        let n = r.gen_range(1..=5);
        let g = random_game(&mut r, n, &obj, 0.2).unwrap();
        let text = io::write_game(&g);
        prop_assert_eq!(io::write_game(&io::parse_game(&text, None).unwrap()), text);
    }
}

#[test]
fn zielonka_reports_memory() {
    let o = memoria(&["zielonka", data("zielonka-example.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("result: pass"), "{}", stdout(&o));
}

#[test]
fn reports_are_deterministic() {
    let args = ["--json", "checkuniv", "w1", "w1", "--samples", "10", "--size", "4", "--seed", "3"];
    let a = memoria(&args);
    let b = memoria(&args);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(stdout(&a), stdout(&b));
    let v: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert!(v["inputs_digest"].is_string());
}

#[test]
fn exit_codes() {
    assert_eq!(memoria(&["minmem", "fig1", "eps-free", "4", "--expect", "2"]).status.code(), Some(0));
    assert_eq!(memoria(&["minmem", "fig1", "eps-free", "4", "--expect", "3"]).status.code(), Some(1));
    assert_eq!(memoria(&["build", "nope"]).status.code(), Some(2));
    assert_eq!(memoria(&["zielonka", "/nonexistent.json"]).status.code(), Some(2));
}
