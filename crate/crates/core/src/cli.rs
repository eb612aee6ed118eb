//! Command-line front end. Every command builds a [`Report`]; `--emit json`
//! prints it as one JSON document with `"schema": 1`.

use std::fs;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::explorer::{bfs_exchange_graph, ExchangeGraph};
use crate::matrix::{ExchangeMatrix, Quiver};
use crate::mcg::MappingClassElement;
use crate::models::{orbit, ArcModel, Model, ModelTriangulation, RotationOrder};
use crate::mutation::{find_maximal_green_sequences, GreenSearchOptions};
use crate::proofkit::{
    build_canonical_triangulation, canonical_sweep, genus_mutation_replay, source_flip_check,
    SourceFlipCase,
};
use crate::surface::MarkedSurface;
use crate::triangulation::TaggedTriangulation;

pub const DEFAULT_SEED: u64 = 0x7a67;

#[derive(Debug, Parser)]
#[command(
    name = "tagrot",
    version,
    about = "Tagged triangulations, flips, mutation and the tagged rotation"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Emit::Text, global = true)]
    pub emit: Emit,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Text,
    Json,
    Dot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Start {
    Canonical,
    File,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    SourceFlip,
    GenusReplay,
    CanonicalSweep,
    Commutation,
    All,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rank, type and Euler characteristic of a surface.
    Surface {
        #[arg(long)]
        surface: MarkedSurface,
    },
    /// Prints the built triangulation of a surface.
    Triangulate {
        #[arg(long)]
        surface: MarkedSurface,
    },
    /// Flips one arc (1-based label).
    Flip {
        #[arg(long)]
        surface: MarkedSurface,
        #[arg(long)]
        triangulation: Option<PathBuf>,
        #[arg(long)]
        arc: usize,
    },
    /// Applies a power of the tagged rotation.
    Rotate {
        #[arg(long)]
        surface: MarkedSurface,
        #[arg(long)]
        triangulation: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        power: u64,
    },
    /// Order of the tagged rotation.
    Order {
        #[arg(long)]
        surface: MarkedSurface,
    },
    /// First rotates of an arc: a 1-based slot of the model's initial
    /// triangulation or an arc in JSON.
    Orbit {
        #[arg(long)]
        surface: MarkedSurface,
        #[arg(long)]
        arc: String,
        #[arg(short = 'k', default_value_t = 10)]
        k: usize,
    },
    /// Breadth-first exchange graph.
    Explore {
        #[arg(long)]
        surface: MarkedSurface,
        #[arg(long, value_enum, default_value_t = Start::Canonical)]
        start: Start,
        #[arg(long)]
        triangulation: Option<PathBuf>,
        #[arg(long, default_value_t = 10_000)]
        max: usize,
    },
    /// Maximal green sequences of a triangulation's quiver.
    Greenseq {
        #[arg(long)]
        surface: MarkedSurface,
        #[arg(long)]
        triangulation: Option<PathBuf>,
        #[arg(long = "max-len", default_value_t = 10)]
        max_len: usize,
    },
    /// Runs verification suites.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long = "max-rank", default_value_t = 8)]
        max_rank: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Random flips per surface in the commutation suite.
        #[arg(long, default_value_t = 200)]
        flips: usize,
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub expected: Value,
    pub actual: Value,
}

impl Check {
    fn new(name: impl Into<String>, expected: impl Serialize, actual: impl Serialize) -> Check {
        let (expected, actual) = (json!(expected), json!(actual));
        Check {
            name: name.into(),
            pass: expected == actual,
            expected,
            actual,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: u32,
    pub command: String,
    pub pass: bool,
    pub checks: Vec<Check>,
    pub result: Value,
    #[serde(skip)]
    text: String,
    #[serde(skip)]
    dot: Option<String>,
}

impl Report {
    fn new(command: &str, result: Value, text: String) -> Report {
        Report {
            schema: 1,
            command: command.into(),
            pass: true,
            checks: Vec::new(),
            result,
            text,
            dot: None,
        }
    }

    fn with_checks(mut self, checks: Vec<Check>) -> Report {
        self.pass = checks.iter().all(|c| c.pass);
        self.checks = checks;
        self
    }

    pub fn render(&self, emit: Emit) -> String {
        match emit {
            Emit::Json => serde_json::to_string_pretty(self).expect("report serializes") + "\n",
            Emit::Dot => self.dot.clone().unwrap_or_else(|| self.text.clone()),
            Emit::Text => {
                let mut s = self.text.clone();
                for c in &self.checks {
                    let mark = if c.pass { "PASS" } else { "FAIL" };
                    s.push_str(&format!("{mark}  {}\n", c.name));
                    if !c.pass {
                        s.push_str(&format!(
                            "      expected {}\n      actual   {}\n",
                            c.expected, c.actual
                        ));
                    }
                }
                s
            }
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

fn usage(e: impl ToString) -> CliError {
    CliError::Usage(e.to_string())
}

fn load(surface: &MarkedSurface, path: Option<&PathBuf>) -> Result<TaggedTriangulation, CliError> {
    let t = match path {
        None => build_canonical_triangulation(surface).map_err(usage)?,
        Some(p) => {
            let text =
                fs::read_to_string(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
            let v: Value = serde_json::from_str(&text).map_err(usage)?;
            TaggedTriangulation::from_json(&v).map_err(usage)?
        }
    };
    if t.surface() != surface {
        return Err(usage(format!(
            "triangulation is on {}, not {surface}",
            t.surface()
        )));
    }
    Ok(t)
}

fn matrix_text(b: &ExchangeMatrix<i64>) -> String {
    b.rows()
        .iter()
        .map(|r| r.iter().map(|x| format!("{x:>3}")).collect::<String>() + "\n")
        .collect()
}

fn triangulation_report(command: &str, t: &TaggedTriangulation) -> Report {
    let b = t.b_matrix::<i64>();
    let text = format!(
        "{}\n{}",
        serde_json::to_string(&t.to_json()).expect("json"),
        matrix_text(&b)
    );
    Report::new(
        command,
        json!({"triangulation": t.to_json(), "b": b.rows()}),
        text,
    )
}

fn cmd_surface(s: &MarkedSurface) -> Report {
    let result = json!({
        "surface": s,
        "rank": s.rank(),
        "type": s.classify_type().to_string(),
        "euler_characteristic": s.euler_characteristic(),
        "marked_points": s.num_marked(),
    });
    let text = format!(
        "surface {s}\nrank {}\ntype {}\neuler characteristic {}\n",
        s.rank(),
        s.classify_type(),
        s.euler_characteristic()
    );
    Report::new("surface", result, text)
}

fn cmd_order(s: &MarkedSurface) -> Result<Report, CliError> {
    let model = Model::for_surface(s).map_err(usage)?;
    let order = model.rotation_order();
    let text = match order {
        RotationOrder::Finite(k) => format!("{k}\n"),
        RotationOrder::Infinite { distinct } => format!("infinite ({distinct} distinct rotates)\n"),
    };
    Ok(Report::new(
        "order",
        json!({"surface": s, "order": order}),
        text,
    ))
}

fn orbit_in<M: ArcModel>(model: &M, arc: &str, k: usize) -> Result<Report, CliError> {
    let arc: M::Arc = match arc.trim().parse::<usize>() {
        Ok(slot) => {
            let initial = model.initial();
            slot.checked_sub(1)
                .and_then(|i| initial.get(i).cloned())
                .ok_or_else(|| usage(format!("slot {slot} not in 1..={}", initial.len())))?
        }
        Err(_) => serde_json::from_str(arc).map_err(usage)?,
    };
    if !model.is_valid(&arc) {
        return Err(usage(format!("invalid arc {arc:?}")));
    }
    let o = orbit(model, &arc, k);
    let text: String = o
        .arcs
        .iter()
        .enumerate()
        .map(|(z, a)| format!("{z}: {}\n", serde_json::to_string(a).expect("json")))
        .collect();
    Ok(Report::new("orbit", json!(o), text))
}

fn explore_model<M: ArcModel>(model: M, max: usize) -> Result<ExchangeGraph, CliError> {
    let ex = bfs_exchange_graph(ModelTriangulation::initial(model), max).map_err(usage)?;
    Ok(ex.graph)
}

fn graph_report(g: ExchangeGraph) -> Report {
    let text = format!(
        "vertices {}\nedges {}\ncomplete {}\nregular {}\n",
        g.vertex_count(),
        g.undirected_edges().len(),
        g.complete,
        g.is_regular()
    );
    let mut r = Report::new("explore", g.to_json(), text);
    r.dot = Some(g.to_dot());
    r
}

fn cmd_explore(
    s: &MarkedSurface,
    start: Start,
    file: Option<&PathBuf>,
    max: usize,
) -> Result<Report, CliError> {
    if start == Start::File {
        let file = file.ok_or_else(|| usage("--start file needs --triangulation"))?;
        let t = load(s, Some(file))?;
        return Ok(graph_report(
            bfs_exchange_graph(t, max).map_err(usage)?.graph,
        ));
    }
    let g = match Model::for_surface(s) {
        Ok(Model::Polygon(m)) => explore_model(m, max)?,
        Ok(Model::Punctured(m)) => explore_model(m, max)?,
        Ok(Model::Annulus(m)) => explore_model(m, max)?,
        Err(_) => {
            let t = build_canonical_triangulation(s).map_err(usage)?;
            bfs_exchange_graph(t, max).map_err(usage)?.graph
        }
    };
    Ok(graph_report(g))
}

fn cmd_greenseq(t: &TaggedTriangulation, max_len: usize) -> Result<Report, CliError> {
    let b = t.b_matrix::<i64>();
    let res =
        find_maximal_green_sequences(&b, GreenSearchOptions::bounded(max_len)).map_err(usage)?;
    let one_based: Vec<Value> = res
        .sequences
        .iter()
        .map(|s| {
            json!({
                "mutations": s.mutations.iter().map(|k| k + 1).collect::<Vec<_>>(),
                "permutation": s.permutation.iter().map(|k| k + 1).collect::<Vec<_>>(),
            })
        })
        .collect();
    let mut text = format!(
        "{} maximal green sequences up to length {max_len}{}\n",
        res.sequences.len(),
        if res.is_exhaustive() {
            ""
        } else {
            " (search truncated)"
        }
    );
    for s in &res.sequences {
        let seq: Vec<String> = s.mutations.iter().map(|k| (k + 1).to_string()).collect();
        text.push_str(&seq.join(" "));
        text.push('\n');
    }
    let quiver = Quiver::from_matrix(&b).map_err(usage)?;
    let labels: Vec<String> = (1..=t.rank()).map(|k| k.to_string()).collect();
    let mut r = Report::new(
        "greenseq",
        json!({
            "sequences": one_based,
            "exhaustive": res.is_exhaustive(),
            "truncated_branches": res.truncated_branches,
        }),
        text,
    );
    r.dot = Some(quiver.to_dot(&labels));
    Ok(r)
}

fn source_flip_checks() -> Vec<Check> {
    SourceFlipCase::ALL
        .iter()
        .map(|&case| {
            let r = source_flip_check(case);
            Check {
                name: format!("source-flip {}", r.case),
                pass: r.passed,
                expected: json!({"alpha_is_sink": true, "flipped": r.rotated}),
                actual: json!({"alpha_is_sink": r.alpha_is_sink, "flipped": r.flipped, "combinatorial_agrees": r.combinatorial_agrees}),
            }
        })
        .collect()
}

fn genus_replay_checks() -> Vec<Check> {
    let r = genus_mutation_replay();
    let mut checks: Vec<Check> = r
        .steps
        .iter()
        .map(|s| {
            Check::new(
                format!("genus-replay mutation {}", s.mutated),
                &s.expected,
                &s.actual,
            )
        })
        .collect();
    checks.push(Check::new(
        "genus-replay surface flips",
        vec![true; r.steps.len()],
        r.steps
            .iter()
            .map(|s| s.surface_matches)
            .collect::<Vec<_>>(),
    ));
    checks.push(Check::new(
        "genus-replay rotated loop",
        true,
        r.final_loop_rotated,
    ));
    checks
}

fn sweep_checks(max_rank: usize) -> Vec<Check> {
    canonical_sweep(max_rank)
        .into_iter()
        .map(|e| Check {
            name: format!("canonical-sweep {}", e.surface),
            pass: e.passed(),
            expected: json!("boundary_to_boundary, boundary_to_puncture or essential_loop for every arc"),
            actual: match &e.error {
                Some(err) => json!(err),
                None => json!(e.types),
            },
        })
        .collect()
}

/// Random flips on the built triangulations of two surfaces, comparing the
/// matrix of each flip with the mutated matrix.
fn commutation_checks(seed: u64, flips: usize) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    ["0,2:[2,2],0", "1,1:[1],0"]
        .iter()
        .map(|s| {
            let s: MarkedSurface = s.parse().expect("fixed surface");
            let mut t = build_canonical_triangulation(&s).expect("builds");
            let mut mismatches = 0usize;
            for _ in 0..flips {
                let k = rng.gen_range(0..t.rank());
                let next = t.flip(k).expect("tagged flips are total");
                let expected = t.b_matrix::<i64>().mutate(k).expect("skew");
                if next.b_matrix::<i64>() != expected {
                    mismatches += 1;
                }
                t = next;
            }
            Check::new(format!("commutation {s} ({flips} flips)"), 0, mismatches)
        })
        .collect()
}

fn cmd_verify(suite: Suite, max_rank: usize, seed: u64, flips: usize) -> Report {
    let mut checks = Vec::new();
    if matches!(suite, Suite::All | Suite::CanonicalSweep) {
        checks.extend(sweep_checks(max_rank));
    }
    if matches!(suite, Suite::All | Suite::Commutation) {
        checks.extend(commutation_checks(seed, flips));
    }
    if matches!(suite, Suite::All | Suite::GenusReplay) {
        checks.extend(genus_replay_checks());
    }
    if matches!(suite, Suite::All | Suite::SourceFlip) {
        checks.extend(source_flip_checks());
    }
    let passed = checks.iter().filter(|c| c.pass).count();
    let text = format!("{passed}/{} checks passed\n", checks.len());
    Report::new("verify", json!({"seed": seed}), text).with_checks(checks)
}

fn execute(cli: &Cli) -> Result<Report, CliError> {
    Ok(match &cli.command {
        Command::Surface { surface } => cmd_surface(surface),
        Command::Triangulate { surface } => {
            triangulation_report("triangulate", &load(surface, None)?)
        }
        Command::Flip {
            surface,
            triangulation,
            arc,
        } => {
            let t = load(surface, triangulation.as_ref())?;
            let k = arc
                .checked_sub(1)
                .filter(|&k| k < t.rank())
                .ok_or_else(|| usage(format!("arc {arc} not in 1..={}", t.rank())))?;
            let f = t.flip(k).map_err(usage)?;
            triangulation_report("flip", &f)
        }
        Command::Rotate {
            surface,
            triangulation,
            power,
        } => {
            let t = load(surface, triangulation.as_ref())?;
            let g = MappingClassElement::tagged_rotation(surface).power(*power);
            let r = g.act_on_triangulation(&t).map_err(usage)?;
            triangulation_report("rotate", &r)
        }
        Command::Order { surface } => cmd_order(surface)?,
        Command::Orbit { surface, arc, k } => match Model::for_surface(surface).map_err(usage)? {
            Model::Polygon(m) => orbit_in(&m, arc, *k)?,
            Model::Punctured(m) => orbit_in(&m, arc, *k)?,
            Model::Annulus(m) => orbit_in(&m, arc, *k)?,
        },
        Command::Explore {
            surface,
            start,
            triangulation,
            max,
        } => cmd_explore(surface, *start, triangulation.as_ref(), *max)?,
        Command::Greenseq {
            surface,
            triangulation,
            max_len,
        } => cmd_greenseq(&load(surface, triangulation.as_ref())?, *max_len)?,
        Command::Verify {
            suite,
            max_rank,
            seed,
            flips,
        } => cmd_verify(*suite, *max_rank, *seed, *flips),
    })
}

/// Parses `args` (program name first), runs the command and returns the
/// output text and exit code.
pub fn run_to_string<I, S>(args: I) -> (String, i32)
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return (e.to_string(), code);
        }
    };
    match execute(&cli) {
        Ok(report) => (report.render(cli.emit), if report.pass { 0 } else { 1 }),
        Err(e) => {
            let code = e.exit_code();
            let msg = match e {
                CliError::Usage(m) | CliError::Io(m) => m,
            };
            let out = if cli.emit == Emit::Json {
                serde_json::to_string_pretty(&json!({"schema": 1, "error": msg, "exit": code}))
                    .expect("json")
                    + "\n"
            } else {
                format!("error: {msg}\n")
            };
            (out, code)
        }
    }
}

/// Entry point used by the binary.
pub fn run() -> i32 {
    let (out, code) = run_to_string(std::env::args_os());
    if code == 0 || code == 1 {
        print!("{out}");
    } else {
        eprint!("{out}");
    }
    code
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> (String, i32) {
        run_to_string(std::iter::once("tagrot").chain(args.iter().copied()))
    }

    #[test]
    fn order_of_octagon() {
        let (out, code) = run(&["order", "--surface", "0,1:[8],0"]);
        assert_eq!((out.trim(), code), ("8", 0));
    }

    #[test]
    fn explore_pentagon_json() {
        let (out, code) = run(&["explore", "--surface", "0,1:[5],0", "--emit", "json"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["schema"], 1);
        assert_eq!(v["result"]["vertices"].as_array().unwrap().len(), 5);
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run(&["order"]).1, 2);
        assert_eq!(run(&["order", "--surface", "nonsense"]).1, 2);
        assert_eq!(run(&["order", "--surface", "1,1:[1],0"]).1, 2);
        assert_eq!(run(&["flip", "--surface", "0,1:[5],0", "--arc", "9"]).1, 2);
    }

    #[test]
    fn missing_file_exits_three() {
        let (_, code) = run(&[
            "rotate",
            "--surface",
            "0,1:[5],0",
            "--triangulation",
            "/nonexistent/t.json",
        ]);
        assert_eq!(code, 3);
    }

    #[test]
    fn json_is_deterministic() {
        let args = [
            "verify",
            "--suite",
            "commutation",
            "--flips",
            "20",
            "--emit",
            "json",
        ];
        assert_eq!(run(&args), run(&args));
    }
}
