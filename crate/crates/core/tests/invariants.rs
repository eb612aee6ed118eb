mod common;

use proptest::prelude::*;
use tagrot::explorer::{bfs_exchange_graph, canonical_key};
use tagrot::mcg::rotate;
use tagrot::models::{
    finite_rotation_order, ArcModel, FiniteArcModel, ModelTriangulation, PolygonModel,
    PuncturedModel,
};
use tagrot::proofkit::{
    build_canonical_triangulation, classify_arc_type, source_flip_on, sweep_surfaces, ArcType,
    LocalSourceFlip,
};
use tagrot::{MarkedSurface, Quiver, TaggedTriangulation};

fn surfaces(max_rank: usize) -> Vec<MarkedSurface> {
    sweep_surfaces(max_rank, 2, 3, 2)
}

fn check_flip(t: &TaggedTriangulation, k: usize) -> TaggedTriangulation {
    let f = t.flip(k).expect("tagged flips are total");
    f.validate().expect("flip stays valid");
    assert_eq!(f.b_matrix::<i64>(), t.b_matrix::<i64>().mutate(k).unwrap());
    let q = Quiver::from_matrix(&f.b_matrix::<i64>()).unwrap();
    assert!(!q.has_loops() && !q.has_two_cycles());
    let back = f.flip(k).unwrap();
    assert_eq!(
        back.normalized().labeled_form(),
        t.normalized().labeled_form()
    );
    f
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_flip_walks(index in 0usize..1000, walk in prop::collection::vec(0usize..64, 1..40)) {
        let all = surfaces(6);
        let s = &all[index % all.len()];
        let mut t = build_canonical_triangulation(s).unwrap();
        for k in walk {
            t = check_flip(&t, k % t.rank());
        }
    }

    #[test]
    fn rotation_preserves_matrix(index in 0usize..1000, walk in prop::collection::vec(0usize..64, 0..20)) {
        let all = surfaces(7);
        let s = &all[index % all.len()];
        let mut t = build_canonical_triangulation(s).unwrap();
        for k in walk {
            t = t.flip(k % t.rank()).unwrap();
        }
        let r = rotate(&t);
        r.validate().unwrap();
        prop_assert_eq!(r.b_matrix::<i64>(), t.b_matrix::<i64>());
        // Rotating then flipping equals flipping then rotating, label by label.
        for k in 0..t.rank() {
            let a = rotate(&t.flip(k).unwrap()).normalized().labeled_form();
            let b = r.flip(k).unwrap().normalized().labeled_form();
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn canonical_key_ignores_labels(index in 0usize..1000, seed in any::<u64>()) {
        let all = surfaces(6);
        let t = build_canonical_triangulation(&all[index % all.len()]).unwrap();
        let n = t.rank();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut x = seed;
        for i in (1..n).rev() {
            x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (x >> 33) as usize % (i + 1));
        }
        prop_assert_eq!(canonical_key(&t.relabeled(&perm)), canonical_key(&t));
    }
}

#[test]
fn every_canonical_arc_classifies() {
    for s in surfaces(8) {
        let t = build_canonical_triangulation(&s).unwrap();
        assert_eq!(t.rank(), s.rank(), "{s}");
        assert!(
            t.ideal()
                .triangles()
                .iter()
                .any(|tri| tri.has_boundary_side()),
            "{s}"
        );
        for a in 0..t.rank() {
            assert_ne!(
                classify_arc_type(&t, a).unwrap(),
                ArcType::Other,
                "{s} arc {a}"
            );
        }
    }
}

#[test]
fn source_flip_holds_on_canonical_arcs() {
    let mut checked = 0;
    for s in surfaces(5) {
        let t = build_canonical_triangulation(&s).unwrap();
        for a in 0..t.rank() {
            if matches!(
                classify_arc_type(&t, a).unwrap(),
                ArcType::BoundaryToBoundary | ArcType::BoundaryToPuncture
            ) {
                assert_eq!(
                    source_flip_on(&t, a, 5000),
                    LocalSourceFlip::Passed,
                    "{s} arc {a}"
                );
                checked += 1;
            }
        }
    }
    assert!(checked > 50);
}

fn rotation_preserves_compatibility<M: FiniteArcModel>(model: M) {
    let arcs = model.enumerate_arcs();
    for a in &arcs {
        assert!(arcs.contains(&model.rotate(a)));
        for b in &arcs {
            assert_eq!(
                model.compatible(a, b),
                model.compatible(&model.rotate(a), &model.rotate(b))
            );
        }
    }
}

#[test]
fn rotation_permutes_compatible_arcs() {
    rotation_preserves_compatibility(PolygonModel::new(6).unwrap());
    rotation_preserves_compatibility(PuncturedModel::new(4).unwrap());
    rotation_preserves_compatibility(PuncturedModel::new(5).unwrap());
}

#[test]
fn model_compatibility_matches_oracles() {
    for m in 4..9 {
        let model = PolygonModel::new(m).unwrap();
        let arcs = model.enumerate_arcs();
        for a in &arcs {
            for b in &arcs {
                assert_eq!(
                    model.compatible(a, b),
                    !common::diagonals_cross((a.i, a.j), (b.i, b.j))
                );
            }
        }
    }
    for m in 2..8 {
        let model = PuncturedModel::new(m).unwrap();
        let ours = model.enumerate_arcs();
        let theirs = common::cover_arcs(m);
        assert_eq!(ours.len(), theirs.len());
        let (count, _) = common::punctured_triangulation_count(m);
        let bfs = bfs_exchange_graph(ModelTriangulation::initial(model), 100_000).unwrap();
        assert_eq!(bfs.graph.vertex_count(), count, "D{m}");
    }
}

#[test]
fn exchange_graphs_are_regular_and_rotation_order_divides() {
    fn check<M: FiniteArcModel>(model: M) {
        let order = finite_rotation_order(&model);
        let ex = bfs_exchange_graph(ModelTriangulation::initial(model), 100_000).unwrap();
        assert!(ex.graph.complete && ex.graph.is_regular());
        // Order of the induced permutation of vertices.
        let mut vertex_order = 1u64;
        let mut cur: Vec<_> = ex.nodes.clone();
        while {
            cur = cur.iter().map(|t| t.rotated()).collect();
            cur.iter()
                .zip(&ex.nodes)
                .any(|(a, b)| a.arc_set() != b.arc_set())
        } {
            vertex_order += 1;
        }
        assert_eq!(order % vertex_order, 0);
    }
    for m in 4..9 {
        check(PolygonModel::new(m).unwrap());
    }
    for m in 2..7 {
        check(PuncturedModel::new(m).unwrap());
    }
}

/// The general-surface graph is a finite quotient, so neighbors can merge and
/// it need not be regular. Each vertex keeps its own labeling, so the edge
/// back may carry a different slot.
#[test]
fn general_surface_graph_edges_are_symmetric() {
    for s in ["0,2:[1,1],1", "1,1:[1],0", "0,1:[2],2", "0,3:[1,1,1],0"] {
        let s: MarkedSurface = s.parse().unwrap();
        let t = build_canonical_triangulation(&s).unwrap();
        let ex = bfs_exchange_graph(t, 400).unwrap();
        assert!(ex.graph.complete, "{s}");
        let pairs: std::collections::BTreeSet<_> =
            ex.graph.edges.iter().map(|&(a, _, b)| (a, b)).collect();
        for &(a, b) in &pairs {
            assert!(pairs.contains(&(b, a)), "{s}: {a} -> {b}");
        }
    }
}
