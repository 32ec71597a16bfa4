use proptest::prelude::*;

use sheafrig::associated::{associated_sheaf, r_matrix, sample_associated_spec, AssociatedSheafSpec};
use sheafrig::graphs::{is_sparse, Multigraph};
use sheafrig::lie::{is_subalgebra, transform_subspace, AffineSubspace, EuclideanModel, OrbitModel, ParallelModel};
use sheafrig::linalg::{Matrix, Rational};
use sheafrig::motion::{analyze, build_motion_sheaf, h0_via_projection_trick, maxwell_defect, sample_generic_spec, MotionSheafSpec};
use sheafrig::oracles::{brute_h0_with, brute_sparsity_with, OracleBudget};
use sheafrig::rng::{random_vector, rng_from_seed};
use sheafrig::subspace::{intersect, projection_of, sample_subspace, sum, Subspace};

fn graph_strategy(max_vertices: usize, max_edges: usize) -> impl Strategy<Value = Multigraph> {
    (2..=max_vertices).prop_flat_map(move |n| {
        prop::collection::vec((0..n, 0..n), 0..=max_edges).prop_map(move |pairs| {
            let edges = pairs.into_iter().filter(|(u, v)| u != v).collect();
            Multigraph::with_vertices(n, edges).unwrap()
        })
    })
}

fn params() -> impl Strategy<Value = (usize, usize)> {
    prop::sample::select(vec![(1, 3), (1, 4), (2, 5), (0, 2)])
}

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 48,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn maxwell_defect_is_h0_minus_h1(g in graph_strategy(6, 10), (s, n) in params(), seed: u64) {
        let spec = sample_generic_spec(&g.to_hypergraph(), s, n, seed).unwrap();
        let dims = build_motion_sheaf(&spec).unwrap().cohomology_dims();
        prop_assert_eq!(dims.h0 as i64 - dims.h1 as i64, maxwell_defect(&spec));
    }

    #[test]
    fn three_routes_to_h0(g in graph_strategy(5, 7), (s, n) in params(), seed: u64, copy in any::<bool>()) {
        let mut spec = sample_generic_spec(&g.to_hypergraph(), s, n, seed).unwrap();
        if copy {
            // Repeat the first subspace everywhere to force large edge intersections.
            let same = vec![spec.subspaces()[0].clone(); g.vertex_count()];
            spec = MotionSheafSpec::new(g.to_hypergraph(), n, same).unwrap();
        }
        let h0 = analyze(&spec).unwrap().h0;
        prop_assert_eq!(h0, h0_via_projection_trick(&spec).unwrap());
        let budget = OracleBudget { max_vertices: 12, max_unknowns: 400 };
        if let Ok(b) = brute_h0_with(&spec, budget) {
            prop_assert_eq!(h0, b);
        }
    }

    #[test]
    fn associated_direct_matches_r_matrix(g in graph_strategy(5, 8), seed: u64, n in 3usize..=5) {
        prop_assume!(g.edge_count() > 0);
        let spec = sample_associated_spec(&g, 1, n, seed).unwrap();
        let direct = associated_sheaf(&spec).unwrap().cohomology_dims();
        let rank = r_matrix(&spec).rank();
        let nv = g.vertex_count();
        prop_assert_eq!(direct.h0, n * nv - rank - nv);
        prop_assert_eq!(direct.h1, g.edge_count() - rank);
    }

    #[test]
    fn sampled_associated_specs_lie_in_z(g in graph_strategy(5, 8), seed: u64, (s, n) in prop::sample::select(vec![(1, 3), (1, 4), (2, 5)])) {
        prop_assume!(g.edge_count() > 0);
        let spec = sample_associated_spec(&g, s, n, seed).unwrap();
        for (e, &(u, v)) in g.edges().iter().enumerate() {
            let form = &spec.forms()[e];
            prop_assert!(!form.is_zero());
            prop_assert!(form.annihilates(&spec.subspaces()[u]) && form.annihilates(&spec.subspaces()[v]));
            prop_assert_eq!(intersect(n, &[&spec.subspaces()[u], &spec.subspaces()[v]]).unwrap().dim(), 0);
        }
        // The constructor re-validates everything above.
        let rebuilt = AssociatedSheafSpec::new(g.clone(), n, spec.subspaces().to_vec(), spec.forms().to_vec());
        prop_assert!(rebuilt.is_ok());
    }

    #[test]
    fn adding_an_edge_never_adds_motions(g in graph_strategy(5, 6), (s, n) in params(), seed: u64, a in 0usize..5, b in 0usize..5) {
        let nv = g.vertex_count();
        prop_assume!(a % nv != b % nv);
        let spec = sample_generic_spec(&g.to_hypergraph(), s, n, seed).unwrap();
        let mut bigger = g.clone();
        bigger.add_edge(a % nv, b % nv).unwrap();
        let spec2 = MotionSheafSpec::new(bigger.to_hypergraph(), n, spec.subspaces().to_vec()).unwrap();
        let (before, after) = (analyze(&spec).unwrap(), analyze(&spec2).unwrap());
        prop_assert!(after.h0 <= before.h0);
        prop_assert!(after.h1 >= before.h1);
    }

    #[test]
    fn collinear_points_detected(d in 2usize..=4, seed: u64, p in -20i64..20, q in 1i64..7) {
        let model = EuclideanModel::new(d).unwrap();
        let mut rng = rng_from_seed(seed);
        let x = random_vector(&mut rng, d);
        let y = random_vector(&mut rng, d);
        prop_assume!(p != 0 && p != q);
        let t = Rational::new(p.into(), q.into());
        let on: Vec<Rational> = x.iter().zip(&y).map(|(a, b)| a + &t * (b - a)).collect();
        prop_assert!(model.collinear(&x, &y, &on).unwrap());
        let off = random_vector(&mut rng, d);
        // Generic third point: the 2x2 minors of (y − x, off − x) are not all zero.
        let u: Vec<Rational> = y.iter().zip(&x).map(|(a, b)| a - b).collect();
        let w: Vec<Rational> = off.iter().zip(&x).map(|(a, b)| a - b).collect();
        let dependent = (0..d).all(|i| (0..d).all(|j| &u[i] * &w[j] == &u[j] * &w[i]));
        prop_assert_eq!(model.collinear(&x, &y, &off).unwrap(), dependent);
    }

    #[test]
    fn stabilizers_are_subalgebras(d in 2usize..=4, seed: u64, dir_seed: u64, s in 0usize..2) {
        let model = EuclideanModel::new(d).unwrap();
        let mut rng = rng_from_seed(seed);
        let q1 = random_vector(&mut rng, d);
        let q2 = random_vector(&mut rng, d);
        let bracket = |x: &[Rational], y: &[Rational]| model.bracket(x, y);
        for sub in [model.point_stabilizer_algebra(&q1).unwrap(), model.edge_stabilizer_algebra(&q1, &q2).unwrap()] {
            prop_assert!(closed_under(&sub, bracket));
        }
        let conjugated = transform_subspace(&model.sample_adjoint(&mut rng).unwrap(), &model.base_subalgebra().unwrap()).unwrap();
        prop_assert!(closed_under(&conjugated, bracket));
        prop_assert!(is_subalgebra(&conjugated, bracket));

        let parallel = ParallelModel::new(d).unwrap();
        let dirs = sample_subspace(s, d, dir_seed).unwrap();
        let affine = AffineSubspace::new(q2.clone(), dirs).unwrap();
        let stab = parallel.affine_stabilizer_algebra(&affine).unwrap();
        prop_assert_eq!(stab.dim(), 1 + s);
        prop_assert!(closed_under(&stab, |x, y| parallel.bracket(x, y)));
    }

    #[test]
    fn pebble_game_matches_enumeration(g in graph_strategy(7, 14), (d, l) in prop::sample::select(vec![(1, 1), (1, 0), (2, 3), (2, 2), (3, 4), (3, 5)])) {
        let budget = OracleBudget { max_vertices: 8, max_unknowns: 0 };
        let fast = is_sparse(&g, d, l).unwrap();
        let slow = brute_sparsity_with(&g, d, l, budget).unwrap();
        prop_assert_eq!((fast.sparse, fast.tight), (slow.sparse, slow.tight));
    }

    #[test]
    fn subspace_lattice_and_projections(seed: u64, a in 0usize..=4, b in 0usize..=4) {
        let sa = sample_subspace(a, 4, seed).unwrap();
        let sb = sample_subspace(b, 4, seed.wrapping_add(1)).unwrap();
        let total = sum(&sa, &sb).unwrap().dim() + intersect(4, &[&sa, &sb]).unwrap().dim();
        prop_assert_eq!(total, a + b);
        let p = projection_of(&sa);
        let m: &Matrix = p.matrix();
        prop_assert_eq!(&m.mul(m).unwrap(), m);
        prop_assert_eq!(m.rank(), a);
    }

    #[test]
    fn sampling_is_deterministic(g in graph_strategy(4, 5), seed: u64) {
        let a = sample_generic_spec(&g.to_hypergraph(), 1, 3, seed).unwrap();
        let b = sample_generic_spec(&g.to_hypergraph(), 1, 3, seed).unwrap();
        prop_assert_eq!(a, b);
    }
}

/// Every bracket of basis vectors lands back in the subspace.
fn closed_under(s: &Subspace, bracket: impl Fn(&[Rational], &[Rational]) -> Vec<Rational>) -> bool {
    let rows = s.basis().to_rows();
    rows.iter().all(|x| rows.iter().all(|y| s.contains(&bracket(x, y))))
}
