//! Deterministic instance generators.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::decomposition::{part_vertex, Partition, TreeDecomposition};
use crate::graph::{VertexId, VertexSet, WeightedGraph};
use crate::rational::Distance;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The unit `(d, m)`-grid: vertices are `[m]^d` numbered in mixed radix,
/// adjacent when they differ by exactly 1 in exactly one coordinate.
pub fn grid(d: u32, m: u64) -> WeightedGraph {
    let n = m.pow(d);
    let mut g = WeightedGraph::with_vertices((0..n).map(VertexId));
    for x in 0..n {
        let mut stride = 1;
        for _ in 0..d {
            if (x / stride) % m + 1 < m {
                g.add_edge(VertexId(x), VertexId(x + stride), Distance::finite(1)).unwrap();
            }
            stride *= m;
        }
    }
    g
}

/// Rows of the `m x m` grid as parts, and the path decomposition of the
/// quotient with bags `{i, i+1}`.
pub fn grid_rows(m: u64) -> (Partition, TreeDecomposition) {
    let rows = (0..m).map(|i| (0..m).map(|j| VertexId(i * m + j)).collect()).collect();
    let p = Partition::new(rows).unwrap();
    let td = if m == 1 {
        TreeDecomposition::trivial(VertexSet::from([part_vertex(0)]))
    } else {
        let m = m as usize;
        TreeDecomposition::new(
            (0..m - 1).map(|i| (i, VertexSet::from([part_vertex(i), part_vertex(i + 1)]))),
            (1..m - 1).map(|i| (i - 1, i)),
        )
        .unwrap()
    };
    (p, td)
}

/// A uniform random recursive tree on `0..n` with unit weights, and its
/// width-1 decomposition (one bag per edge, or one bag when `n = 1`).
pub fn random_tree(n: u64, rng: &mut impl Rng) -> (WeightedGraph, TreeDecomposition) {
    assert!(n >= 1, "a tree needs a vertex");
    let mut g = WeightedGraph::with_vertices((0..n).map(VertexId));
    let parents: Vec<u64> = (1..n).map(|i| rng.gen_range(0..i)).collect();
    for (i, &p) in (1..n).zip(&parents) {
        g.add_edge(VertexId(p), VertexId(i), Distance::finite(1)).unwrap();
    }
    (g, tree_decomposition(n, &parents))
}

/// Bag `i - 1` is `{parent(i), i}`; it hangs off the bag of the parent's own
/// edge, or bag 0 for children of the root.
fn tree_decomposition(n: u64, parents: &[u64]) -> TreeDecomposition {
    if n == 1 {
        return TreeDecomposition::trivial(VertexSet::from([VertexId(0)]));
    }
    let bags = (1..n).map(|i| ((i - 1) as usize, VertexSet::from([VertexId(parents[i as usize - 1]), VertexId(i)])));
    let edges = (2..n).map(|i| {
        let p = parents[i as usize - 1];
        let attach = if p == 0 { 0 } else { p - 1 };
        (attach as usize, (i - 1) as usize)
    });
    TreeDecomposition::new(bags, edges).unwrap()
}

/// A random tree on `0..n` plus `extra` distinct random chords, unit weights.
pub fn random_connected(n: u64, extra: usize, rng: &mut impl Rng) -> WeightedGraph {
    let (mut g, _) = random_tree(n, rng);
    let max_edges = (n * n.saturating_sub(1) / 2) as usize;
    let target = (g.edge_count() + extra).min(max_edges);
    while g.edge_count() < target {
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if a != b && !g.has_edge(VertexId(a), VertexId(b)) {
            g.add_edge(VertexId(a), VertexId(b), Distance::finite(1)).unwrap();
        }
    }
    g
}

/// The unit path on `0..n`.
pub fn path(n: u64) -> WeightedGraph {
    let mut g = WeightedGraph::with_vertices((0..n).map(VertexId));
    for i in 1..n {
        g.add_edge(VertexId(i - 1), VertexId(i), Distance::finite(1)).unwrap();
    }
    g
}

/// Every connected unit-weight graph on `0..n`, one per edge subset.
pub fn all_connected_graphs(n: u64) -> Vec<WeightedGraph> {
    let pairs: Vec<(u64, u64)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    assert!(pairs.len() < 32, "too many vertices to enumerate");
    (0u32..1 << pairs.len())
        .filter_map(|mask| {
            let mut g = WeightedGraph::with_vertices((0..n).map(VertexId));
            for (i, &(a, b)) in pairs.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    g.add_edge(VertexId(a), VertexId(b), Distance::finite(1)).unwrap();
                }
            }
            g.is_connected().then_some(g)
        })
        .collect()
}
