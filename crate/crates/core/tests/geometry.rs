use selfaffine_core::connect::{decide, inner_band, outer_band};
use selfaffine_core::geometry::{
    adjacency_graph, first_certified_cut, graph_connected, EdgePolicy, DEFAULT_NODE_BUDGET,
};
use selfaffine_core::rational::{frac, int};
use selfaffine_core::{AffinePair, Rational};

fn far_from(a: &Rational, ends: &[Rational]) -> bool {
    ends.iter()
        .all(|e| (a - e) >= frac(1, 2) || (e - a) >= frac(1, 2))
}

#[test]
fn disconnected_points_get_a_certified_cut() {
    for q in [3i64, -3] {
        let (o_lo, o_hi) = outer_band(q, 2);
        let (i_lo, i_hi) = inner_band(q, 2);
        let ends = [o_lo, o_hi.unwrap(), i_lo, i_hi.unwrap()];
        for k in 0..=24 {
            let a = frac(k, 2);
            let pair = AffinePair::new(4, q, a.clone(), 6, 2).unwrap();
            if decide(&pair).unwrap().is_connected() || !far_from(&a, &ends) {
                continue;
            }
            let cut = first_certified_cut(&pair, 8, DEFAULT_NODE_BUDGET).unwrap();
            assert!(cut.is_some(), "q={q} a={a}: no cut up to depth 8");
        }
    }
}

#[test]
fn connected_points_keep_a_connected_graph() {
    for (p, q, a, m, n) in [
        (4, 3, int(1), 6, 2),
        (4, 3, int(3), 6, 2),
        (4, 3, int(9), 6, 2),
        (4, -3, frac(7, 2), 6, 2),
        (3, 3, int(6), 3, 3),
        (3, -3, int(-2), 3, 3),
    ] {
        let pair = AffinePair::new(p, q, a, m, n).unwrap();
        assert!(decide(&pair).unwrap().is_connected());
        for depth in 1..=7 {
            let g = adjacency_graph(&pair, depth).unwrap();
            assert!(
                graph_connected(&g, EdgePolicy::PlausibleOnly),
                "{pair} depth {depth}"
            );
        }
    }
}
