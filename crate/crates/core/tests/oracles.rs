//! Fixed instances checked three ways: the main path, an independent oracle,
//! and a frozen value.

mod common;

use sheafrig::associated::{associated_dims, build_independent_sheaf, sample_associated_spec, IndependentSheaf};
use sheafrig::graphs::{generate_tight, Multigraph};
use sheafrig::lie::{bar_joint_spec, parallel_spec, transform_subspace, AffineSubspace, Arrangement, EuclideanModel, Framework, ParallelModel};
use sheafrig::linalg::{rat, Matrix, Rational};
use sheafrig::motion::{analyze, check_main_theorem, sample_generic_spec, MotionSheafSpec};
use sheafrig::oracles::{brute_h0, brute_sparsity, parallel_redrawing_matrix, rigidity_matrix};
use sheafrig::subspace::Subspace;

fn points(xs: &[&[i64]]) -> Vec<Vec<Rational>> {
    xs.iter().map(|p| p.iter().map(|&x| rat(x)).collect()).collect()
}

fn prism() -> Multigraph {
    Multigraph::with_vertices(6, vec![(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (0, 3), (1, 4), (2, 5)]).unwrap()
}

/// (graph, positions, rank, h1) for planar bar-joint frameworks.
fn planar_cases() -> Vec<(&'static str, Multigraph, Vec<Vec<Rational>>, usize, usize)> {
    vec![
        ("four-cycle", Multigraph::cycle(4), points(&[&[0, 0], &[5, 1], &[6, 7], &[-1, 4]]), 4, 0),
        ("K4", Multigraph::complete(4), points(&[&[0, 0], &[4, 0], &[1, 3], &[5, 6]]), 5, 1),
        ("prism", prism(), points(&[&[0, 0], &[7, 1], &[3, 8], &[1, -5], &[9, -2], &[4, 11]]), 9, 0),
        // The same prism with the three struts on concurrent lines through the origin.
        (
            "degenerate prism",
            prism(),
            points(&[&[1, 0], &[0, 1], &[-1, -1], &[2, 0], &[0, 2], &[-2, -2]]),
            8,
            1,
        ),
    ]
}

#[test]
fn planar_frameworks_match_the_rigidity_matrix() {
    let model = EuclideanModel::new(2).unwrap();
    for (name, g, pos, rank, h1) in planar_cases() {
        let fw = Framework::from_graph(&g, 2, pos).unwrap();
        let oracle = rigidity_matrix(&fw).unwrap();
        let v = analyze(&bar_joint_spec(&model, &fw).unwrap()).unwrap();
        assert_eq!(oracle.rank(), rank, "{name}");
        assert_eq!(v.h0, oracle.motions(), "{name}");
        assert_eq!(v.h1, h1, "{name}");
        assert_eq!(v.h1, g.edge_count() - oracle.rank(), "{name}");
    }
}

#[test]
fn graph_classes_are_counted_correctly() {
    let counts: Vec<usize> = (1..=6).map(|n| common::simple_graphs(n).len()).collect();
    assert_eq!(counts, vec![1, 2, 4, 11, 34, 156]);
    assert_eq!(common::connected_graphs_up_to(6).len(), 1 + 1 + 2 + 6 + 21 + 112);
}

#[test]
fn generated_graphs_are_tight_by_enumeration() {
    for (n, vertices, edges, max_mult) in [(3, 2, 1, 1), (4, 5, 11, 2), (6, 4, 14, 4), (6, 2, 4, 4)] {
        let g = generate_tight(n, vertices, 1).unwrap().graph;
        assert_eq!((g.vertex_count(), g.edge_count()), (vertices, edges));
        assert!(g.max_multiplicity() <= max_mult);
        let brute = brute_sparsity(&g, n - 1, n).unwrap();
        assert!(brute.sparse && brute.tight, "n={n}");
    }
}

#[test]
fn main_theorem_small_graphs() {
    for (name, g, sparse) in [
        ("K3", Multigraph::complete(3), true),
        ("K4", Multigraph::complete(4), false),
        ("C4", Multigraph::cycle(4), true),
    ] {
        let rep = check_main_theorem(&g, 3, 10, 7).unwrap();
        assert_eq!(rep.sparse, sparse, "{name}");
        assert_eq!(rep.sparse, brute_sparsity(&g, 2, 3).unwrap().sparse);
        assert!(rep.agrees, "{name}");
        assert!(rep.trials.iter().all(|t| (t.h1 == 0) == sparse));
    }
}

fn line(v: [i64; 3]) -> Subspace {
    Subspace::span(3, vec![v.iter().map(|&x| rat(x)).collect()]).unwrap()
}

#[test]
fn k3_line_configurations() {
    let k3 = Multigraph::complete(3).to_hypergraph();
    for (lines, h0) in [
        ([[1, 0, 0], [1, 0, 0], [1, 0, 0]], 2),
        ([[1, 0, 0], [0, 1, 0], [0, 0, 1]], 3),
        ([[1, 0, 0], [0, 1, 0], [1, 1, 0]], 4),
    ] {
        let spec = MotionSheafSpec::new(k3.clone(), 3, lines.iter().map(|&l| line(l)).collect()).unwrap();
        assert_eq!(analyze(&spec).unwrap().h0, h0);
        assert_eq!(brute_h0(&spec).unwrap(), h0);
    }
}

#[test]
fn generic_k3_lines_almost_always_span() {
    let k3 = Multigraph::complete(3).to_hypergraph();
    let spanning = (0..1000u64)
        .filter(|&seed| analyze(&sample_generic_spec(&k3, 1, 3, seed).unwrap()).unwrap().h0 == 3)
        .count();
    assert!(spanning >= 999, "{spanning}/1000");
}

#[test]
fn minimal_rigidity_count() {
    // With r = 2: (n − 2s)|E| = (n − s)|V| − n.
    let model = EuclideanModel::new(2).unwrap();
    for seed in 0..10 {
        let g = generate_tight(3, 3 + seed as usize % 4, seed).unwrap().graph;
        let spec = bar_joint_spec(&model, &Framework::random(&g, 2, seed).unwrap()).unwrap();
        assert!(analyze(&spec).unwrap().minimally_rigid);
        let (n, s) = (spec.ambient_dim() as i64, spec.subspace_dim() as i64);
        assert_eq!((n - 2 * s) * g.edge_count() as i64, (n - s) * g.vertex_count() as i64 - n);
    }
}

#[test]
fn base_case_multigraph_is_independent() {
    for n in 3..=6 {
        let spec = sample_associated_spec(&Multigraph::k2(n - 2), 1, n, 11).unwrap();
        assert_eq!(associated_dims(&spec).unwrap().h1, 0, "n={n}");
    }
}

#[test]
fn independent_sheaf_on_the_prism() {
    match build_independent_sheaf(&prism(), 3, 4).unwrap() {
        IndependentSheaf::Built { spec, .. } => assert_eq!(associated_dims(&spec).unwrap().h1, 0),
        IndependentSheaf::NotSparse { .. } => panic!("the prism is (2,3)-tight"),
    }
    let k4 = build_independent_sheaf(&Multigraph::complete(4), 3, 4).unwrap();
    assert!(matches!(k4, IndependentSheaf::NotSparse { .. }));
}

/// (graph, h0, h1) for points in ℚ³ under parallel redrawing.
#[test]
fn parallel_redrawings_in_space() {
    let model = ParallelModel::new(3).unwrap();
    let pos = points(&[&[0, 0, 0], &[3, 1, 0], &[1, 4, 2], &[-2, 5, 7], &[6, -1, 3], &[2, 2, -5]]);
    for (name, g, h0, h1) in [
        ("K3", Multigraph::complete(3), 4, 1),
        ("path", Multigraph::with_vertices(3, vec![(0, 1), (1, 2)]).unwrap(), 5, 0),
        ("K5", Multigraph::complete(5), 4, 9),
        ("K6", Multigraph::complete(6), 4, 16),
    ] {
        let nv = g.vertex_count();
        let fw = Framework::from_graph(&g, 3, pos[..nv].to_vec()).unwrap();
        let arr = Arrangement::new(g.to_hypergraph(), 3, pos[..nv].iter().cloned().map(AffineSubspace::point).collect()).unwrap();
        let v = analyze(&parallel_spec(&model, &arr).unwrap()).unwrap();
        assert_eq!((v.h0, v.h1), (h0, h1), "{name}");
        assert_eq!(parallel_redrawing_matrix(&fw).unwrap().motions(), h0, "{name}");
    }
}

#[test]
fn euclidean_stabilizers() {
    let e2 = EuclideanModel::new(2).unwrap();
    let q = [rat(3), rat(-2)];
    // One rotation parameter ω acting as (ω, ω·y, −ω·x).
    assert_eq!(
        e2.point_stabilizer_algebra(&q).unwrap(),
        Subspace::span(3, vec![vec![rat(1), rat(-2), rat(-3)]]).unwrap()
    );
    assert_eq!(e2.edge_stabilizer_algebra(&q, &[rat(1), rat(1)]).unwrap().dim(), 0);

    // Conjugating stab(0, 0) by the translation (3, −2) gives stab(3, −2).
    let ad = e2.adjoint_matrix(&Matrix::identity(2), &q).unwrap();
    let moved = transform_subspace(&ad, &e2.point_stabilizer_algebra(&[rat(0), rat(0)]).unwrap()).unwrap();
    assert_eq!(moved, e2.point_stabilizer_algebra(&q).unwrap());

    // In e(3): pairs (ω, −ω × q).
    let e3 = EuclideanModel::new(3).unwrap();
    let q = [rat(1), rat(2), rat(3)];
    let stab = e3.point_stabilizer_algebra(&q).unwrap();
    for omega in [[1, 0, 0], [0, 1, 0], [2, -1, 5]] {
        let w: Vec<Rational> = omega.iter().map(|&x| rat(x)).collect();
        let t = [&w[2] * &q[1] - &w[1] * &q[2], &w[0] * &q[2] - &w[2] * &q[0], &w[1] * &q[0] - &w[0] * &q[1]];
        let mut v = EuclideanModel::axial_to_coords(&[w[0].clone(), w[1].clone(), w[2].clone()]);
        v.extend(t);
        assert!(stab.contains(&v));
    }
}
