//! Shared fixtures for the integration suites: the ten-node benchmark
//! network, the 4-regular six-node network, and a seeded random-graph
//! generator for ensemble checks.
#![allow(dead_code)]

use netsec_core::network::Graph;
use netsec_core::total_effort::{Externality, GameSpec};
use netsec_core::weighting::WeightingSpec;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Cost/loss ratio used by the benchmark games unless stated otherwise.
pub const STANDARD_COST: f64 = 0.45;

/// Curvature used by the benchmark games unless stated otherwise.
pub const STANDARD_ALPHA: f64 = 0.6;

/// The ten-node benchmark network: a triangle core {4,5,6} with pendant
/// nodes 1, 2, 3, a hub 7 adjacent to the whole core, and a bridge 8
/// carrying two leaves 9 and 10. Extended neighborhood sizes come out as
/// 2 for the leaves, 5 for the core and hub, and 4 for the bridge.
pub fn ten_node() -> Graph {
    let edges = [
        (1, 4),
        (2, 5),
        (3, 6),
        (4, 5),
        (4, 6),
        (5, 6),
        (4, 7),
        (5, 7),
        (6, 7),
        (7, 8),
        (8, 9),
        (8, 10),
    ];
    let g = Graph::from_edges(None, &edges).unwrap();
    let want = [2usize, 2, 2, 5, 5, 5, 5, 4, 2, 2];
    for (i, &w) in want.iter().enumerate() {
        assert_eq!(g.extended_size(i + 1), w, "extended size of node {}", i + 1);
    }
    g
}

/// The complete graph on six nodes minus a perfect matching, written out
/// edge by edge; identical to the 4-regular circulant the generator
/// produces.
pub fn k6_minus_matching() -> Graph {
    let edges = [
        (1, 2),
        (1, 3),
        (1, 5),
        (1, 6),
        (2, 3),
        (2, 4),
        (2, 6),
        (3, 4),
        (3, 5),
        (4, 5),
        (4, 6),
        (5, 6),
    ];
    let g = Graph::from_edges(None, &edges).unwrap();
    let circulant = Graph::k_regular(6, 4).unwrap();
    assert_eq!(g.edges(), circulant.edges());
    g
}

/// A homogeneous total-effort game with Prelec curvature `alpha` and
/// cost/loss ratio `c` (loss fixed at 1).
pub fn standard_game(graph: Graph, alpha: f64, c: f64) -> GameSpec {
    let spec = WeightingSpec::prelec(alpha).unwrap();
    GameSpec::homogeneous(graph, spec, c, 1.0, Externality::TotalEffort).unwrap()
}

/// Same parameters under a different externality.
pub fn standard_game_with(graph: Graph, alpha: f64, c: f64, ext: Externality) -> GameSpec {
    let spec = WeightingSpec::prelec(alpha).unwrap();
    GameSpec::homogeneous(graph, spec, c, 1.0, ext).unwrap()
}

/// Erdos-Renyi draw with edge probability `p`, redrawn until connected.
pub fn er_connected(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    loop {
        let mut edges = Vec::new();
        for u in 1..=n {
            for v in (u + 1)..=n {
                if rng.random::<f64>() < p {
                    edges.push((u, v));
                }
            }
        }
        if edges.is_empty() {
            continue;
        }
        let g = Graph::from_edges(Some(n), &edges).unwrap();
        if g.is_connected() {
            return g;
        }
    }
}

/// Central difference for the first derivative, step scaled to the
/// distance from the ends of the unit interval so the estimate stays
/// accurate where the function steepens.
pub fn fd_prime(spec: &WeightingSpec, x: f64) -> f64 {
    let h = 1e-4 * x.min(1.0 - x);
    (spec.eval(x + h).unwrap() - spec.eval(x - h).unwrap()) / (2.0 * h)
}

/// Richardson-extrapolated second difference with the same end-scaled
/// step policy.
pub fn fd_second(spec: &WeightingSpec, x: f64) -> f64 {
    let h = 1e-2 * x.min(1.0 - x);
    let second = |hh: f64| {
        (spec.eval(x + hh).unwrap() - 2.0 * spec.eval(x).unwrap() + spec.eval(x - hh).unwrap())
            / (hh * hh)
    };
    (4.0 * second(0.5 * h) - second(h)) / 3.0
}

/// The named graphs the structural checks sweep over.
pub fn fixture_graphs() -> Vec<(&'static str, Graph)> {
    vec![
        ("ten_node", ten_node()),
        ("cycle6", Graph::cycle(6).unwrap()),
        ("k6_minus_matching", k6_minus_matching()),
        ("star5", Graph::star(5).unwrap()),
        ("path5", Graph::path(5).unwrap()),
        ("complete6", Graph::complete(6).unwrap()),
    ]
}
