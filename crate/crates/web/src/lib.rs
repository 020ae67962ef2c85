//! Browser bindings: each export takes plain strings and returns a text
//! report, or throws a string on bad input.

use wasm_bindgen::prelude::*;

use memoria::game::lower_bound_game;
use memoria::io;
use memoria::memsearch::{min_memory, MemoryVariant, MinMemory};
use memoria::objective::builtin::Params;
use memoria::universal::{builtin_universal, Universal};
use memoria::zielonka::{build_zielonka, memory_of};

fn fail(e: memoria::Error) -> JsValue {
    JsValue::from_str(&e.to_string())
}

/// Zielonka tree of a Muller objective given as a JSON document.
#[wasm_bindgen]
pub fn zielonka(objective_json: &str) -> Result<String, JsValue> {
    let obj = io::parse_objective(objective_json).map_err(fail)?;
    let tree = build_zielonka(&obj).map_err(fail)?;
    let mut out = format!("memory: {}\nleaves: {}\n\n", memory_of(&tree), tree.leaves().len());
    for n in &tree.nodes {
        let sign = if n.positive { '+' } else { '-' };
        out.push_str(&format!("{}{sign} {{{}}}\n", "  ".repeat(n.depth), tree.names(n.label).join(",")));
    }
    Ok(out)
}

/// Summary of a builtin universal structure at the given bound.
#[wasm_bindgen]
pub fn universal(name: &str, bound: usize) -> Result<String, JsValue> {
    let u = builtin_universal(name, &Params::new(), bound).map_err(fail)?;
    let o = u.ordered();
    let mut out = format!(
        "vertices: {}\nedges: {}\nwidth: {}\n",
        o.vertex_count(),
        o.graph().edges().len(),
        o.width().map_err(fail)?
    );
    if let Universal::Separated(s) = &u {
        out.push_str(&format!("parts: {}\nbreadth: {}\n", s.part_names.len(), s.breadth()));
    }
    out.push('\n');
    out.push_str(&u.to_dot(name));
    Ok(out)
}

/// Least memory of each strategy class on a named lower-bound game.
#[wasm_bindgen]
pub fn minmem(game: &str, k_max: usize) -> Result<String, JsValue> {
    let g = lower_bound_game(game, &Params::new()).map_err(fail)?;
    let mut out = String::new();
    for v in MemoryVariant::ALL {
        let line = match min_memory(&g, v, k_max) {
            Ok(MinMemory::Found { k, .. }) => k.to_string(),
            Ok(MinMemory::Exceeded { k_max }) => format!("more than {k_max}"),
            Ok(MinMemory::Losing) => "losing".into(),
            Err(e) => e.to_string(),
        };
        out.push_str(&format!("{v}: {line}\n"));
    }
    Ok(out)
}
