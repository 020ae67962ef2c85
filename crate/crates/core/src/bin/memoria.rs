use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use memoria::error::{Error, Result};
use memoria::game::{lower_bound_game, verify_strategy, Game};
use memoria::io;
use memoria::memsearch::{min_memory, MemoryVariant, MinMemory};
use memoria::objective::builtin::{builtin_objective, Params};
use memoria::objective::Objective;
use memoria::random::{rng, satisfying_samples};
use memoria::report::{table1_row, Provenance, RunReport, TABLE1_ROWS};
use memoria::solve::{check_universality_sample, extract_strategy, solve_oracle, solve_via_universal, UniversalityReport};
use memoria::universal::{builtin_universal, muller_universal, safety_quotient_universal, Universal, BUILTIN_UNIVERSAL};
use memoria::zielonka::build_zielonka;

#[derive(Parser)]
#[command(name = "memoria", version, about = "Universal graphs, Zielonka trees and memory bounds for games on graphs")]
struct Cli {
    /// Print reports as JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone, Default)]
struct ParamArgs {
    /// Integer parameter `key=value` (repeatable), e.g. `--param n=2`.
    #[arg(long = "param", value_parser = parse_param)]
    params: Vec<(String, usize)>,
}

impl ParamArgs {
    fn map(&self) -> Params {
        self.params.iter().cloned().collect()
    }
}

fn parse_param(s: &str) -> std::result::Result<(String, usize), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected key=value, got `{s}`"))?;
    let v = v.parse().map_err(|e| format!("`{v}`: {e}"))?;
    Ok((k.trim().to_string(), v))
}

#[derive(Subcommand)]
enum Cmd {
    /// Zielonka tree and memory of a Muller objective file.
    Zielonka {
        file: PathBuf,
        /// Print the tree as Graphviz instead.
        #[arg(long)]
        dot: bool,
    },
    /// Build a universal structure: a builtin name, or `muller`/`quotient`
    /// applied to `--objective`.
    Build {
        name: String,
        #[arg(long)]
        objective: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        bound: usize,
        #[command(flatten)]
        params: ParamArgs,
        /// Write the graph document here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Emit Graphviz instead of the graph document.
        #[arg(long)]
        dot: bool,
    },
    /// Winning region of a game, by the automaton oracle or through a
    /// universal graph file.
    Solve {
        game: String,
        #[arg(long)]
        universal: Option<PathBuf>,
        #[command(flatten)]
        params: ParamArgs,
        /// Write a winning strategy from the initial vertex here.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        dot: bool,
    },
    /// Least memory of a strategy class winning a game (file or builtin name).
    Minmem {
        game: String,
        /// eps-free, eps, chromatic or eps-chromatic.
        variant: String,
        kmax: usize,
        #[command(flatten)]
        params: ParamArgs,
        /// Exit with 1 unless the result equals this value.
        #[arg(long)]
        expect: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sampled universality check of a universal graph for an objective.
    Checkuniv {
        universal: String,
        objective: String,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long, default_value_t = 5)]
        size: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Bound for builtin constructions; defaults to `size + 1`.
        #[arg(long)]
        bound: Option<usize>,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Reproduce rows of the memory-requirement table.
    Table1 {
        #[arg(long)]
        row: Option<String>,
    },
}

enum Outcome {
    Pass,
    Fail,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let result = run(&cli);
    eprintln!("duration: {:.3}s", start.elapsed().as_secs_f64());
    match result {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn emit(cli: &Cli, report: &RunReport) -> Outcome {
    if cli.json {
        print!("{}", report.to_json());
    } else {
        print!("{}", report.render());
    }
    if report.passed() {
        Outcome::Pass
    } else {
        Outcome::Fail
    }
}

fn write_out(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

/// A game file if the path exists, otherwise a builtin lower-bound game.
fn load_game(spec: &str, params: &Params) -> Result<(Game, String)> {
    let p = Path::new(spec);
    if p.exists() {
        let text = io::read_file(p)?;
        Ok((io::parse_game(&text, p.parent())?, text))
    } else {
        Ok((lower_bound_game(spec, params)?, format!("{spec} {params:?}")))
    }
}

/// An objective file if the path exists, otherwise a builtin objective.
fn load_objective(spec: &str, params: &Params) -> Result<(Objective, String)> {
    let p = Path::new(spec);
    if p.exists() {
        let text = io::read_file(p)?;
        Ok((io::parse_objective(&text)?, text))
    } else {
        Ok((builtin_objective(spec, params)?, format!("{spec} {params:?}")))
    }
}

fn load_universal(spec: &str, params: &Params, bound: usize) -> Result<(Universal, String)> {
    let p = Path::new(spec);
    if p.exists() {
        let text = io::read_file(p)?;
        Ok((io::parse_universal(&text)?, text))
    } else {
        Ok((builtin_universal(spec, params, bound)?, format!("{spec} {params:?} {bound}")))
    }
}

fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.cmd {
        Cmd::Zielonka { file, dot } => {
            let text = io::read_file(file)?;
            let obj = io::parse_objective(&text)?;
            let tree = build_zielonka(&obj)?;
            if *dot {
                print!("{}", tree.to_dot());
                return Ok(Outcome::Pass);
            }
            let mut r = RunReport::new(format!("zielonka {}", file.display()), &[&text]);
            r.info("memory", tree.memory());
            r.info("leaves", tree.leaves().len());
            if !cli.json {
                print!("{}", tree.render());
            }
            Ok(emit(cli, &r))
        }
        Cmd::Build { name, objective, bound, params, out, dot } => {
            let params = params.map();
            let mut inputs = vec![format!("{name} {bound} {params:?}")];
            let u = match name.as_str() {
                "muller" | "quotient" => {
                    let path = objective
                        .as_ref()
                        .ok_or_else(|| Error::BadParams(format!("`{name}` needs --objective")))?;
                    let text = io::read_file(path)?;
                    let obj = io::parse_objective(&text)?;
                    inputs.push(text);
                    if name == "muller" {
                        Universal::Ordered(muller_universal(&obj, *bound)?)
                    } else {
                        Universal::Ordered(safety_quotient_universal(&obj)?.graph)
                    }
                }
                other if BUILTIN_UNIVERSAL.contains(&other) => builtin_universal(other, &params, *bound)?,
                other => return Err(Error::UnknownName(other.to_string())),
            };
            let text = if *dot { u.to_dot(name) } else { io::write_universal(&u) };
            match out {
                Some(path) => write_out(path, &text)?,
                None => print!("{text}"),
            }
            let og = u.ordered();
            let mut r = RunReport::new(format!("build {name}"), &inputs);
            r.info("vertices", og.vertex_count());
            r.info("edges", og.graph().edges().len());
            r.info("width", og.width()?);
            r.info("monotone", og.check_monotone().is_none());
            if let Universal::Separated(s) = &u {
                r.info("breadth", s.breadth());
                r.info("chromatic", s.tag.is_some());
            }
            if out.is_some() {
                emit(cli, &r);
            } else {
                for row in &r.rows {
                    eprintln!("{}: {}", row.name, row.value);
                }
            }
            Ok(Outcome::Pass)
        }
        Cmd::Solve { game, universal, params, out, dot } => {
            let params = params.map();
            let (g, gtext) = load_game(game, &params)?;
            let mut inputs = vec![gtext];
            let oracle = solve_oracle(&g)?;
            let mut r = RunReport::new(format!("solve {game}"), &inputs);
            let ids = |region: &[bool]| -> String {
                let w: Vec<&str> = (0..g.vertex_count()).filter(|&v| region[v]).map(|v| g.graph.id(v)).collect();
                format!("{{{}}}", w.join(", "))
            };
            let strategy = match universal {
                None => {
                    r.info("eve region", ids(&oracle.region));
                    oracle.eve_strategy(&g, g.initial)
                }
                Some(path) => {
                    let text = io::read_file(path)?;
                    let u = io::parse_universal(&text)?;
                    inputs.push(text);
                    r = RunReport::new(format!("solve {game} --universal {}", path.display()), &inputs);
                    let sol = solve_via_universal(&g, &u.ordered())?;
                    r.info("eve region", ids(&sol.region));
                    r.check("agrees with oracle", sol.region == oracle.region, true, Provenance::Derived);
                    if sol.region[g.initial] {
                        let s = extract_strategy(&g, &u, &sol)?;
                        r.check("extracted strategy wins", verify_strategy(&g, &s)?.is_winning(), true, Provenance::Derived);
                        r.info("max memory per vertex", s.max_fiber());
                        Some(s)
                    } else {
                        None
                    }
                }
            };
            r.info("initial vertex winning", oracle.region[g.initial]);
            if let (Some(path), Some(s)) = (out, &strategy) {
                write_out(path, &io::write_strategy(&g, s))?;
            }
            if *dot {
                eprint!("{}", g.to_dot());
            }
            Ok(emit(cli, &r))
        }
        Cmd::Minmem { game, variant, kmax, params, expect, out } => {
            let params = params.map();
            let variant = MemoryVariant::parse(variant)?;
            let (g, gtext) = load_game(game, &params)?;
            let res = min_memory(&g, variant, *kmax)?;
            let mut r = RunReport::new(format!("minmem {game} {variant} {kmax}"), &[gtext]);
            let value = match &res {
                MinMemory::Found { k, .. } => k.to_string(),
                MinMemory::Exceeded { k_max } => format!(">{k_max}"),
                MinMemory::Losing => "losing".to_string(),
            };
            match expect {
                Some(e) => r.check(format!("{variant} memory"), value, e, Provenance::Derived),
                None => r.info(format!("{variant} memory"), value),
            }
            if let (Some(path), MinMemory::Found { strategy, .. }) = (out, &res) {
                write_out(path, &io::write_strategy(&g, strategy))?;
            }
            Ok(emit(cli, &r))
        }
        Cmd::Checkuniv { universal, objective, samples, size, seed, bound, params } => {
            let params = params.map();
            let (u, utext) = load_universal(universal, &params, bound.unwrap_or(size + 1))?;
            let (obj, otext) = load_objective(objective, &params)?;
            let graphs = satisfying_samples(&mut rng(*seed), *samples, *size, &obj)?;
            let rep = check_universality_sample(&u, &obj, &graphs)?;
            let mut r = RunReport::new(
                format!("checkuniv {universal} {objective} --samples {samples} --size {size} --seed {seed}"),
                &[utext, otext],
            );
            r.check("universality sample", rep.passed(), true, Provenance::Derived);
            if let UniversalityReport::Fail { sample, root, stuck, color, target } = &rep {
                let h = &graphs[*sample];
                r.info(
                    "counterexample",
                    format!(
                        "sample {sample}, root {}, stuck at ({}, {}) on {color} to {}",
                        h.id(*root),
                        h.id(stuck.0),
                        u.graph().id(stuck.1),
                        h.id(*target)
                    ),
                );
            }
            Ok(emit(cli, &r))
        }
        Cmd::Table1 { row } => {
            let rows: Vec<&str> = match row {
                Some(r) => vec![r.as_str()],
                None => TABLE1_ROWS.to_vec(),
            };
            let mut all = Outcome::Pass;
            for name in rows {
                if let Outcome::Fail = emit(cli, &table1_row(name)?) {
                    all = Outcome::Fail;
                }
            }
            Ok(all)
        }
    }
}
