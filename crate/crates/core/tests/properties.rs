//! Property tests for the structural invariants that must hold for every
//! graph, operator, and map — not just the worked examples.

use num_complex::Complex64;
use proptest::prelude::*;
use specdec::eigen;
use specdec::gamma::HerglotzRational;
use specdec::graph::check_compatibility;
use specdec::krylov::krylov_cyclic_decomposition;
use specdec::operator::{build_decorated_operator, green_diag_at};
use specdec::spectrum::{branch_invert, preimage};
use specdec::{decorate, Graph, RootedGraph, SymmetricOperator};

/// Arbitrary graph on `1..=max_n` vertices from a presence mask over the
/// upper-triangular vertex pairs.
fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |mask| {
            let mut edges = Vec::new();
            let mut idx = 0;
            for i in 0..n {
                for j in (i + 1)..n {
                    if mask[idx] {
                        edges.push((i, j));
                    }
                    idx += 1;
                }
            }
            Graph::new(n, edges).expect("mask edges are valid")
        })
    })
}

fn arb_rooted(max_n: usize) -> impl Strategy<Value = RootedGraph> {
    arb_graph(max_n).prop_flat_map(|g| {
        let n = g.vertex_count();
        (Just(g), 0..n).prop_map(|(g, root)| RootedGraph::new(g, root).expect("root in range"))
    })
}

fn arb_operator(max_n: usize) -> impl Strategy<Value = SymmetricOperator> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec(-1.0..1.0f64, n * (n + 1) / 2).prop_map(move |vals| {
            let mut idx = vec![vec![0usize; n]; n];
            let upper = (0..n).flat_map(|i| (i..n).map(move |j| (i, j)));
            for (next, (i, j)) in upper.enumerate() {
                idx[i][j] = next;
                idx[j][i] = next;
            }
            SymmetricOperator::from_fn(n, |i, j| vals[idx[i][j]])
        })
    })
}

/// Maps with well-separated poles so interval arithmetic stays meaningful.
fn arb_map() -> impl Strategy<Value = HerglotzRational> {
    (
        -3.0..3.0f64,
        prop::collection::btree_set(-50i32..50, 0..=4),
        prop::collection::vec(0.001..10.0f64, 4),
    )
        .prop_map(|(c, pole_grid, weights)| {
            let poles: Vec<f64> = pole_grid.into_iter().map(|p| p as f64 / 10.0).collect();
            let weights = weights[..poles.len()].to_vec();
            HerglotzRational::new(c, poles, weights).expect("grid poles are distinct")
        })
}

proptest! {
    /// The spectral-sum resolvent and Gaussian elimination agree.
    #[test]
    fn green_diag_matches_direct_solve(
        a in arb_operator(12),
        re in -5.0..5.0f64,
        im in 0.2..2.0f64,
        seed in any::<u32>(),
    ) {
        let z = Complex64::new(re, im);
        let i = seed as usize % a.dim();
        let es = eigen::eigendecompose(&a).unwrap();
        let mut v = vec![0.0; a.dim()];
        v[i] = 1.0;
        let spectral = es.green_diag(&v, z).unwrap();
        let direct = green_diag_at(&a, i, z).unwrap();
        prop_assert!((spectral - direct).norm() <= 1e-10 * (1.0 + direct.norm()));
    }

    /// Splitting along any cyclic subspace preserves the full spectrum.
    #[test]
    fn cyclic_split_preserves_spectrum(a in arb_operator(10), seed in any::<u32>()) {
        let root = seed as usize % a.dim();
        let d = krylov_cyclic_decomposition(&a, root).unwrap();
        let (cyclic, weights) = d.cyclic_spectral_data().unwrap();
        prop_assert!((weights.iter().sum::<f64>() - 1.0).abs() <= 1e-10);
        let mut combined: Vec<f64> = cyclic.iter().chain(&d.remainder_eigenvalues).copied().collect();
        combined.sort_by(f64::total_cmp);
        let full = eigen::eigendecompose(&a).unwrap().values;
        prop_assert_eq!(combined.len(), full.len());
        let scale = 1.0 + a.frobenius_norm();
        for (c, f) in combined.iter().zip(&full) {
            prop_assert!((c - f).abs() <= 1e-9 * scale);
        }
    }

    /// Assembling Laplacians along a decoration equals the Laplacian of the
    /// decorated graph.
    #[test]
    fn decorated_laplacian_commutes(base in arb_graph(8), dec in arb_rooted(5)) {
        let h = build_decorated_operator(
            &base.laplacian(),
            &dec.graph().laplacian(),
            dec.root(),
            base.vertex_count(),
        ).unwrap();
        let product = decorate(&base, &dec).into_product();
        prop_assert_eq!(&h, &product.laplacian());
        prop_assert!(check_compatibility(&h, &product).unwrap());
    }

    /// Vertex and edge counts of the decorated graph.
    #[test]
    fn decoration_counts(base in arb_graph(8), dec in arb_rooted(5)) {
        let d = decorate(&base, &dec);
        let (n, m) = (base.vertex_count(), dec.graph().vertex_count());
        prop_assert_eq!(d.product().vertex_count(), n * m);
        prop_assert_eq!(
            d.product().edge_count(),
            base.edge_count() + n * dec.graph().edge_count()
        );
        // determinism
        let again = decorate(&base, &dec);
        prop_assert_eq!(d.product(), again.product());
    }

    /// Every graph Laplacian is compatible with its own graph.
    #[test]
    fn laplacian_is_compatible(g in arb_graph(8)) {
        prop_assert!(check_compatibility(&g.laplacian(), &g).unwrap());
    }

    /// Branch inversion round-trips, stays inside its branch, and is
    /// monotone in the inverted value.
    #[test]
    fn branch_inversion_round_trip(
        map in arb_map(),
        v in -20.0..20.0f64,
        dv in 0.01..5.0f64,
    ) {
        for branch in 0..=map.poles.len() {
            let e = branch_invert(&map, branch, v).unwrap();
            let lo = branch.checked_sub(1).map(|i| map.poles[i]);
            let hi = map.poles.get(branch);
            prop_assert!(lo.is_none_or(|p| e > p));
            prop_assert!(hi.is_none_or(|&p| e < p));
            let back = map.evaluate(e).unwrap();
            prop_assert!((back - v).abs() <= 1e-11 * (1.0 + v.abs()));
            let e2 = branch_invert(&map, branch, v + dv).unwrap();
            prop_assert!(e2 > e);
        }
    }

    /// Pulled-back intervals avoid the poles and cover exactly the energies
    /// that map into the input interval.
    #[test]
    fn preimage_excludes_poles(map in arb_map(), a in -10.0..10.0f64, len in 0.0..8.0f64) {
        let intervals = preimage(&map, &[[a, a + len]]).unwrap();
        prop_assert_eq!(intervals.len(), map.poles.len() + 1);
        for [lo, hi] in &intervals {
            prop_assert!(lo <= hi);
            for p in &map.poles {
                prop_assert!(!(lo <= p && p <= hi), "pole {} inside [{}, {}]", p, lo, hi);
            }
            // midpoints map back into the input interval
            let mid = 0.5 * (lo + hi);
            let v = map.evaluate(mid).unwrap();
            prop_assert!(v >= a - 1e-9 && v <= a + len + 1e-9);
        }
    }
}
