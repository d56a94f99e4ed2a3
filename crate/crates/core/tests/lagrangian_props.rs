use proptest::prelude::*;

use hyperlag::lagrangian::{
    eval, grid_lower_bound, growth_step, pair_partial, partial, shift, solve, solve_reduced,
    stationarity_residual, support_pairs_covered, weight_classes, within_class_average,
};
use hyperlag::tuple_order::all_tuples;
use hyperlag::{Hypergraph, SolverConfig, Weighting};

fn graph(r: usize, n: u32, min_edges: usize) -> impl Strategy<Value = Hypergraph> {
    let all = all_tuples(r, n).unwrap();
    let len = all.len();
    proptest::sample::subsequence(all, min_edges..=len)
        .prop_map(move |e| Hypergraph::new(r, n, e).unwrap())
}

fn weighting(n: usize) -> impl Strategy<Value = Weighting> {
    proptest::collection::vec(0.0f64..1.0, n)
        .prop_filter("non-zero", |v| v.iter().sum::<f64>() > 1e-3)
        .prop_map(|v| Weighting::normalized(v).unwrap())
}

fn graph_and_weighting() -> impl Strategy<Value = (Hypergraph, Weighting)> {
    (2usize..=4, 4u32..=7).prop_flat_map(|(r, n)| (graph(r, n, 1), weighting(n as usize)))
}

fn quick() -> SolverConfig {
    SolverConfig {
        restarts: 16,
        ..SolverConfig::default()
    }
}

proptest! {
    #[test]
    fn partials_match_central_differences((g, x) in graph_and_weighting()) {
        let h = 1e-5;
        for i in 1..=g.n() {
            let mut up = x.values().to_vec();
            let mut down = up.clone();
            up[i as usize - 1] += h;
            down[i as usize - 1] -= h;
            // eval is a polynomial, so it extends off the simplex
            let fd = (raw_eval(&g, &up) - raw_eval(&g, &down)) / (2.0 * h);
            prop_assert!((partial(&g, &x, i).unwrap() - fd).abs() <= 1e-6);
        }
    }

    #[test]
    fn shift_identity((g, x) in graph_and_weighting(), i in 1u32..=7, j in 1u32..=7, frac in 0.0f64..=1.0) {
        prop_assume!(i != j && i <= g.n() && j <= g.n());
        let delta = frac * x.get(j);
        let y = shift(&x, i, j, delta).unwrap();
        let lhs = eval(&g, &y).unwrap() - eval(&g, &x).unwrap();
        let rhs = delta * (partial(&g, &x, i).unwrap() - partial(&g, &x, j).unwrap())
            - delta * delta * pair_partial(&g, &x, i, j).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12);
    }

    #[test]
    fn growth_transform_never_decreases((g, x) in graph_and_weighting()) {
        let mut cur = x;
        let mut val = eval(&g, &cur).unwrap();
        prop_assume!(val > 0.0);
        for _ in 0..50 {
            cur = growth_step(&g, &cur).unwrap();
            let next = eval(&g, &cur).unwrap();
            prop_assert!(next >= val - 1e-13);
            val = next;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn solver_outputs_are_stationary(g in (2usize..=4).prop_flat_map(|r| graph(r, 6, 1))) {
        let est = solve(&g, &quick()).unwrap();
        prop_assert!(est.residual <= 1e-9);
        prop_assert!(support_pairs_covered(&g, &est.witness));
        prop_assert_eq!(est.support_size, est.witness.support().len());
        prop_assert!((est.value - eval(&g, &est.witness).unwrap()).abs() <= 1e-15);
    }

    #[test]
    fn subgraphs_have_smaller_lagrangians((g, keep) in (2usize..=3).prop_flat_map(|r| (graph(r, 6, 2), proptest::collection::vec(any::<bool>(), 20)))) {
        let sub: Vec<_> = g.edges().iter().zip(keep.iter().cycle()).filter(|(_, k)| **k).map(|(e, _)| e.clone()).collect();
        prop_assume!(!sub.is_empty());
        let h = Hypergraph::new(g.r(), g.n(), sub).unwrap();
        prop_assert!(solve(&h, &quick()).unwrap().value <= solve(&g, &quick()).unwrap().value + 1e-9);
    }

    #[test]
    fn compression_does_not_lower_the_lagrangian(g in (2usize..=3).prop_flat_map(|r| graph(r, 6, 1))) {
        let c = g.compress();
        prop_assert!(solve(&c, &quick()).unwrap().value >= solve(&g, &quick()).unwrap().value - 1e-9);
    }

    #[test]
    fn grid_bound_sits_below_the_solver(g in (2usize..=3).prop_flat_map(|r| graph(r, 5, 1)), d in 1u64..=12) {
        let bound = grid_lower_bound(&g, d).unwrap();
        let est = solve(&g, &quick()).unwrap();
        prop_assert!(bound.to_f64() <= est.value + 1e-12);
    }

    #[test]
    fn compressed_witnesses_are_monotone(g in (2usize..=4).prop_flat_map(|r| graph(r, 7, 1))) {
        let c = g.compress();
        let est = solve(&c, &quick()).unwrap();
        let classes = weight_classes(&c).unwrap();
        let avg = within_class_average(&est.witness, &classes);
        prop_assert!((eval(&c, &avg).unwrap() - est.value).abs() <= 1e-9);
        prop_assert!(avg.values().windows(2).all(|w| w[0] >= w[1] - 1e-9), "{:?}", avg);
        let reduced = solve_reduced(&c, &classes).unwrap();
        prop_assert!((reduced.value - est.value).abs() <= 1e-9);
    }
}

/// Polynomial evaluation without the simplex check.
fn raw_eval(g: &Hypergraph, x: &[f64]) -> f64 {
    g.edges()
        .iter()
        .map(|e| {
            e.elems()
                .iter()
                .map(|&v| x[v as usize - 1])
                .product::<f64>()
        })
        .sum()
}

#[test]
fn residual_vanishes_at_uniform_complete() {
    let g = hyperlag::complete_graph(3, 6).unwrap();
    let x = Weighting::uniform(6);
    assert!(stationarity_residual(&g, &x).unwrap() < 1e-15);
}
