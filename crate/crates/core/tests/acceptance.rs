//! Acceptance run: one line per criterion with its time limit. Runs without
//! the test harness so the lines always print; exits non-zero on any failure.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tagrot::explorer::{bfs_exchange_graph, is_automorphism};
use tagrot::models::{
    rotates_distinct, AnnulusModel, ArcModel, FiniteArcModel, Model, ModelTriangulation,
    PolygonModel, PuncturedModel, RotationOrder,
};
use tagrot::proofkit::{canonical_sweep, genus_mutation_replay, source_flip_check, SourceFlipCase};
use tagrot::{find_maximal_green_sequences, GreenSearchOptions, MarkedSurface};

type Outcome = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Outcome);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn rotation_orders_a() -> Outcome {
    for n in 1..=8 {
        let s = MarkedSurface::polygon(n + 3).unwrap();
        let order = match Model::for_surface(&s).unwrap().rotation_order() {
            RotationOrder::Finite(k) => k,
            other => return Err(format!("A{n}: {other:?}")),
        };
        ensure(
            order == n as u64 + 3,
            format!("A{n}: order {order}, expected {}", n + 3),
        )?;
    }
    Ok("A1..A8 have order n+3".into())
}

fn rotation_orders_d() -> Outcome {
    for n in 3..=8 {
        let s = MarkedSurface::punctured_polygon(n).unwrap();
        let order = match Model::for_surface(&s).unwrap().rotation_order() {
            RotationOrder::Finite(k) => k,
            other => return Err(format!("D{n}: {other:?}")),
        };
        let expected = if n % 2 == 0 { n } else { 2 * n } as u64;
        ensure(
            order == expected,
            format!("D{n}: order {order}, expected {expected}"),
        )?;
    }
    Ok("D3..D8 have order n (even) / 2n (odd)".into())
}

fn genus_replay() -> Outcome {
    let r = genus_mutation_replay();
    for s in &r.steps {
        ensure(
            s.matrix_matches,
            format!(
                "mutation {}: expected {:?}, got {:?}",
                s.mutated, s.expected, s.actual
            ),
        )?;
    }
    Ok("mutations 1, 2, 3 reproduce quivers 2, 3, 4".into())
}

fn source_flips() -> Outcome {
    for case in SourceFlipCase::ALL {
        let r = source_flip_check(case);
        ensure(r.passed, format!("{r:?}"))?;
    }
    Ok("boundary diagonal, radius with plain neighbor, tagged radius pair".into())
}

/// Every triangulation reachable from the initial one, compared slot by slot.
fn commutation_complete<M: FiniteArcModel>(model: M) -> Result<usize, String> {
    let ex = bfs_exchange_graph(ModelTriangulation::initial(model), 100_000)
        .map_err(|e| e.to_string())?;
    ensure(ex.graph.complete, "exchange graph incomplete")?;
    let mut checked = 0;
    for t in &ex.nodes {
        let b = t.b_matrix::<i64>().map_err(|e| e.to_string())?;
        let real = t.realize().map_err(|e| e.to_string())?;
        for k in 0..t.rank() {
            let f = t.flip(k).map_err(|e| e.to_string())?;
            let mu = b.mutate(k).unwrap();
            ensure(
                f.b_matrix::<i64>().unwrap() == mu,
                format!("model flip {k} of {:?}", t.arcs()),
            )?;
            let g = real.flip(k).map_err(|e| e.to_string())?;
            ensure(
                g.b_matrix::<i64>() == mu,
                format!("tagged flip {k} of {:?}", t.arcs()),
            )?;
            checked += 1;
        }
    }
    Ok(checked)
}

fn commutation_random(surface: &str, flips: usize, seed: u64) -> Result<(), String> {
    let s: MarkedSurface = surface.parse().unwrap();
    let mut t = tagrot::proofkit::build_canonical_triangulation(&s).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for step in 0..flips {
        let k = rng.gen_range(0..t.rank());
        let next = t.flip(k).map_err(|e| e.to_string())?;
        next.validate()
            .map_err(|e| format!("{surface} step {step}: {e}"))?;
        let mu = t.b_matrix::<i64>().mutate(k).unwrap();
        ensure(
            next.b_matrix::<i64>() == mu,
            format!("{surface} step {step} flip {k}"),
        )?;
        t = next;
    }
    Ok(())
}

fn commutation() -> Outcome {
    let mut checked = 0;
    checked += commutation_complete(PolygonModel::new(5).unwrap())?;
    checked += commutation_complete(PolygonModel::new(6).unwrap())?;
    checked += commutation_complete(PuncturedModel::new(3).unwrap())?;
    checked += commutation_complete(PuncturedModel::new(4).unwrap())?;
    commutation_random("0,2:[2,2],0", 200, 1)?;
    commutation_random("1,1:[1],0", 200, 2)?;
    Ok(format!("{checked} flips on A2, A3, D3, D4; 200 random flips on each of annulus (2,2) and torus (1,[1],0)"))
}

fn equivariance<M: FiniteArcModel>(model: M, name: &str) -> Result<usize, String> {
    let ex = bfs_exchange_graph(ModelTriangulation::initial(model), 100_000)
        .map_err(|e| e.to_string())?;
    ensure(ex.graph.complete, format!("{name}: incomplete"))?;
    ensure(
        is_automorphism(&ex, |t| t.rotated()),
        format!("{name}: rotation is not an automorphism"),
    )?;
    let mut checked = 0;
    for t in &ex.nodes {
        for k in 0..t.rank() {
            let lhs = t.flip(k).map_err(|e| e.to_string())?.rotated();
            let alpha = t.model().rotate(&t.arcs()[k]);
            let rhs = t.rotated().flip_arc(&alpha).map_err(|e| e.to_string())?;
            ensure(
                lhs.arc_set() == rhs.arc_set(),
                format!("{name}: {:?} slot {k}", t.arcs()),
            )?;
            checked += 1;
        }
    }
    Ok(checked)
}

fn rotation_equivariance() -> Outcome {
    let a = equivariance(PolygonModel::new(6).unwrap(), "A3")?;
    let d = equivariance(PuncturedModel::new(4).unwrap(), "D4")?;
    Ok(format!(
        "automorphism of A3 and D4, {} flip pairs commute",
        a + d
    ))
}

fn counts_vs_oracle() -> Outcome {
    let mut parts = Vec::new();
    for (name, m, expected) in [("A2", 5, Some(5)), ("A3", 6, Some(14))] {
        let (oracle, sizes) = common::polygon_triangulation_count(m);
        ensure(
            sizes == BTreeSet::from([m - 3]),
            format!("{name}: maximal sets of sizes {sizes:?}"),
        )?;
        if let Some(e) = expected {
            ensure(oracle == e, format!("{name}: oracle {oracle}"))?;
        }
        let bfs = bfs_exchange_graph(
            ModelTriangulation::initial(PolygonModel::new(m).unwrap()),
            100_000,
        )
        .map_err(|e| e.to_string())?;
        ensure(
            bfs.graph.complete && bfs.graph.vertex_count() == oracle,
            format!(
                "{name}: bfs {} vs oracle {oracle}",
                bfs.graph.vertex_count()
            ),
        )?;
        parts.push(format!("{name}={oracle}"));
    }
    for (name, m) in [("D3", 3), ("D4", 4)] {
        let (oracle, sizes) = common::punctured_triangulation_count(m);
        ensure(
            sizes == BTreeSet::from([m]),
            format!("{name}: maximal sets of sizes {sizes:?}"),
        )?;
        let bfs = bfs_exchange_graph(
            ModelTriangulation::initial(PuncturedModel::new(m).unwrap()),
            100_000,
        )
        .map_err(|e| e.to_string())?;
        ensure(
            bfs.graph.complete && bfs.graph.vertex_count() == oracle,
            format!(
                "{name}: bfs {} vs oracle {oracle}",
                bfs.graph.vertex_count()
            ),
        )?;
        parts.push(format!("{name}={oracle}"));
    }
    Ok(parts.join(" "))
}

fn annulus_infinite() -> Outcome {
    let model = AnnulusModel::new(1, 1).unwrap();
    let bridge = model.initial()[0];
    ensure(rotates_distinct(&model, &bridge, 50), "rotates repeat")?;
    Ok(format!("50 distinct rotates of {bridge:?}"))
}

fn mgs_endpoint<M: ArcModel>(
    model: M,
    bound: usize,
    name: &str,
    exhaustive: bool,
) -> Result<String, String> {
    let start = ModelTriangulation::initial(model);
    let b = start.b_matrix::<i64>().map_err(|e| e.to_string())?;
    let res = find_maximal_green_sequences(&b, GreenSearchOptions::bounded(bound))
        .map_err(|e| e.to_string())?;
    if exhaustive {
        ensure(res.is_exhaustive(), format!("{name}: search truncated"))?;
    }
    ensure(!res.sequences.is_empty(), format!("{name}: no sequences"))?;
    let target = start.rotated().arc_set();
    for s in &res.sequences {
        let mut t = start.clone();
        for &k in &s.mutations {
            t = t.flip(k).map_err(|e| e.to_string())?;
        }
        ensure(
            t.arc_set() == target,
            format!("{name}: {:?} ends elsewhere", s.mutations),
        )?;
    }
    Ok(format!("{name} {}", res.sequences.len()))
}

fn green_sequences() -> Outcome {
    let a2 = mgs_endpoint(PolygonModel::new(5).unwrap(), 16, "A2", true)?;
    let a3 = mgs_endpoint(PolygonModel::new(6).unwrap(), 10, "A3", false)?;
    let d4 = mgs_endpoint(PuncturedModel::new(4).unwrap(), 12, "D4", false)?;
    Ok(format!(
        "sequences ending at the rotated start: {a2}, {a3}, {d4}"
    ))
}

fn sweep() -> Outcome {
    let entries = canonical_sweep(8);
    let bad: Vec<String> = entries
        .iter()
        .filter(|e| !e.passed())
        .map(|e| format!("{} {:?} {:?}", e.surface, e.error, e.types))
        .collect();
    ensure(bad.is_empty(), bad.join("; "))?;
    Ok(format!(
        "{} surfaces, every arc boundary-to-boundary, boundary-to-puncture or an essential loop",
        entries.len()
    ))
}

fn main() {
    let criteria: [Criterion; 10] = [
        (
            "rotation orders, type A",
            Duration::from_secs(1),
            rotation_orders_a,
        ),
        (
            "rotation orders, type D",
            Duration::from_secs(1),
            rotation_orders_d,
        ),
        (
            "genus-one mutation replay",
            Duration::from_secs(1),
            genus_replay,
        ),
        (
            "source-flip configurations",
            Duration::from_secs(1),
            source_flips,
        ),
        (
            "flip/mutation commutation",
            Duration::from_secs(30),
            commutation,
        ),
        (
            "rotation equivariance and automorphism",
            Duration::from_secs(30),
            rotation_equivariance,
        ),
        (
            "exchange-graph counts vs oracle",
            Duration::from_secs(60),
            counts_vs_oracle,
        ),
        (
            "annulus rotates pairwise distinct",
            Duration::from_secs(1),
            annulus_infinite,
        ),
        (
            "maximal green sequence endpoints",
            Duration::from_secs(300),
            green_sequences,
        ),
        (
            "canonical triangulation sweep",
            Duration::from_secs(120),
            sweep,
        ),
    ];
    let mut failed = 0;
    for (i, (name, limit, check)) in criteria.iter().enumerate() {
        let t0 = Instant::now();
        let outcome = check();
        let elapsed = t0.elapsed();
        let line = match outcome {
            Ok(detail) if elapsed <= *limit => format!(
                "PASS  {:>2}. {name} ({elapsed:.2?} / {limit:?}): {detail}",
                i + 1
            ),
            Ok(detail) => format!(
                "FAIL  {:>2}. {name}: over time limit ({elapsed:.2?} / {limit:?}): {detail}",
                i + 1
            ),
            Err(e) => format!("FAIL  {:>2}. {name} ({elapsed:.2?}): {e}", i + 1),
        };
        if line.starts_with("FAIL") {
            failed += 1;
        }
        println!("{line}");
    }
    println!("acceptance: {}/10 passed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
