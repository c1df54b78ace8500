//! Weighted graphs and their shortest-path metric.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap};
use std::fmt;

use thiserror::Error;

use crate::rational::{Distance, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct VertexId(pub u64);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<u64> for VertexId {
    fn from(v: u64) -> Self {
        VertexId(v)
    }
}

pub type VertexSet = BTreeSet<VertexId>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(VertexId),
    #[error("parallel edge {0}-{1}")]
    ParallelEdge(VertexId, VertexId),
    #[error("edge {0}-{1} has non-positive weight {2}")]
    NonPositiveWeight(VertexId, VertexId, Rational),
    #[error("vertex {0} is not in the graph")]
    UnknownVertex(VertexId),
    #[error("weak diameter of an empty vertex set is undefined")]
    EmptyVertexSet,
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("edge {0}-{1} carries conflicting weights {2} and {3}")]
    WeightConflict(VertexId, VertexId, Distance, Distance),
}

/// A finite simple undirected graph with positive rational or infinite weights.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WeightedGraph {
    adj: BTreeMap<VertexId, BTreeMap<VertexId, Distance>>,
}

impl WeightedGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_vertices(vertices: impl IntoIterator<Item = VertexId>) -> Self {
        let mut g = Self::new();
        for v in vertices {
            g.add_vertex(v);
        }
        g
    }

    pub fn add_vertex(&mut self, v: VertexId) {
        self.adj.entry(v).or_default();
    }

    /// Adds `uv`, creating missing endpoints. Rejects loops, duplicates and
    /// non-positive weights.
    pub fn add_edge(&mut self, u: VertexId, v: VertexId, w: Distance) -> Result<(), GraphError> {
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        if let Distance::Finite(r) = &w {
            if !r.is_positive() {
                return Err(GraphError::NonPositiveWeight(u, v, r.clone()));
            }
        }
        if self.has_edge(u, v) {
            return Err(GraphError::ParallelEdge(u, v));
        }
        self.adj.entry(u).or_default().insert(v, w.clone());
        self.adj.entry(v).or_default().insert(u, w);
        Ok(())
    }

    /// Adds `uv` or, when it exists, checks that the weights agree.
    pub fn merge_edge(&mut self, u: VertexId, v: VertexId, w: Distance) -> Result<(), GraphError> {
        match self.weight(u, v) {
            Some(old) if *old == w => Ok(()),
            Some(old) => Err(GraphError::WeightConflict(u, v, old.clone(), w)),
            None => self.add_edge(u, v, w),
        }
    }

    pub fn set_weight(&mut self, u: VertexId, v: VertexId, w: Distance) -> Result<(), GraphError> {
        if !self.has_edge(u, v) {
            return Err(GraphError::UnknownVertex(if self.has_vertex(u) { v } else { u }));
        }
        if let Distance::Finite(r) = &w {
            if !r.is_positive() {
                return Err(GraphError::NonPositiveWeight(u, v, r.clone()));
            }
        }
        self.adj.get_mut(&u).unwrap().insert(v, w.clone());
        self.adj.get_mut(&v).unwrap().insert(u, w);
        Ok(())
    }

    pub fn has_vertex(&self, v: VertexId) -> bool {
        self.adj.contains_key(&v)
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.adj.get(&u).is_some_and(|n| n.contains_key(&v))
    }

    pub fn weight(&self, u: VertexId, v: VertexId) -> Option<&Distance> {
        self.adj.get(&u).and_then(|n| n.get(&v))
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.values().map(BTreeMap::len).sum::<usize>() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.adj.keys().copied()
    }

    pub fn vertex_set(&self) -> VertexSet {
        self.adj.keys().copied().collect()
    }

    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = (VertexId, &Distance)> + '_ {
        self.adj.get(&v).into_iter().flat_map(|n| n.iter().map(|(u, w)| (*u, w)))
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj.get(&v).map_or(0, BTreeMap::len)
    }

    /// Edges `(u, v, w)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId, &Distance)> + '_ {
        self.adj.iter().flat_map(|(&u, n)| {
            n.iter().filter(move |(&v, _)| u < v).map(move |(&v, w)| (u, v, w))
        })
    }

    pub fn max_vertex_id(&self) -> Option<VertexId> {
        self.adj.keys().next_back().copied()
    }

    pub fn induced(&self, set: &VertexSet) -> WeightedGraph {
        let mut adj = BTreeMap::new();
        for &v in set {
            if let Some(n) = self.adj.get(&v) {
                let kept = n
                    .iter()
                    .filter(|(u, _)| set.contains(u))
                    .map(|(u, w)| (*u, w.clone()))
                    .collect();
                adj.insert(v, kept);
            }
        }
        WeightedGraph { adj }
    }

    pub fn without(&self, removed: &VertexSet) -> WeightedGraph {
        let keep: VertexSet = self.vertices().filter(|v| !removed.contains(v)).collect();
        self.induced(&keep)
    }

    /// The same graph with every weight set to 1.
    pub fn unit_shape(&self) -> WeightedGraph {
        let adj = self
            .adj
            .iter()
            .map(|(&v, n)| (v, n.keys().map(|&u| (u, Distance::finite(1))).collect()))
            .collect();
        WeightedGraph { adj }
    }

    /// Union of two graphs whose weights agree on shared edges.
    pub fn union(&self, other: &WeightedGraph) -> Result<WeightedGraph, GraphError> {
        let mut out = self.clone();
        for v in other.vertices() {
            out.add_vertex(v);
        }
        for (u, v, w) in other.edges() {
            out.merge_edge(u, v, w.clone())?;
        }
        Ok(out)
    }

    /// Connected components in ascending order of their smallest vertex.
    pub fn components(&self) -> Vec<VertexSet> {
        let mut seen = VertexSet::new();
        let mut out = Vec::new();
        for v in self.vertices() {
            if seen.contains(&v) {
                continue;
            }
            let mut comp = VertexSet::new();
            let mut stack = vec![v];
            seen.insert(v);
            while let Some(x) = stack.pop() {
                comp.insert(x);
                for (y, _) in self.neighbors(x) {
                    if seen.insert(y) {
                        stack.push(y);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }
}

/// Exact all-pairs distances over a fixed vertex set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceMatrix {
    vertices: Vec<VertexId>,
    dist: Vec<Distance>,
}

impl DistanceMatrix {
    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn index(&self, v: VertexId) -> Option<usize> {
        self.vertices.binary_search(&v).ok()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.index(v).is_some()
    }

    pub fn at(&self, i: usize, j: usize) -> &Distance {
        &self.dist[i * self.vertices.len() + j]
    }

    /// Panics when either vertex is outside the matrix.
    pub fn get(&self, u: VertexId, v: VertexId) -> &Distance {
        let i = self.index(u).unwrap_or_else(|| panic!("vertex {u} not in distance matrix"));
        let j = self.index(v).unwrap_or_else(|| panic!("vertex {v} not in distance matrix"));
        self.at(i, j)
    }

    /// Distances restricted to `set`; valid as the metric of any subgraph
    /// that is tight in the host.
    pub fn restrict(&self, set: &VertexSet) -> DistanceMatrix {
        let idx: Vec<usize> = set.iter().map(|&v| self.index(v).expect("vertex in matrix")).collect();
        let n = idx.len();
        let mut dist = Vec::with_capacity(n * n);
        for &i in &idx {
            for &j in &idx {
                dist.push(self.at(i, j).clone());
            }
        }
        DistanceMatrix { vertices: set.iter().copied().collect(), dist }
    }

    pub fn dist_to_set(&self, v: VertexId, set: &VertexSet) -> Distance {
        set.iter()
            .map(|&s| self.get(v, s))
            .min()
            .cloned()
            .unwrap_or(Distance::Infinite)
    }

    /// `N^r(S)`: every vertex within distance `r` of `set`.
    pub fn neighborhood(&self, set: &VertexSet, r: &Rational) -> VertexSet {
        let sources: Vec<usize> = set.iter().filter_map(|&s| self.index(s)).collect();
        self.vertices
            .iter()
            .enumerate()
            .filter(|&(i, _)| sources.iter().any(|&s| self.at(i, s).at_most(r)))
            .map(|(_, &v)| v)
            .collect()
    }

    pub fn weak_diameter(&self, set: &VertexSet) -> Result<Distance, GraphError> {
        if set.is_empty() {
            return Err(GraphError::EmptyVertexSet);
        }
        let idx: Vec<usize> = set
            .iter()
            .map(|&v| self.index(v).ok_or(GraphError::UnknownVertex(v)))
            .collect::<Result<_, _>>()?;
        let mut best = Distance::zero();
        for (a, &i) in idx.iter().enumerate() {
            for &j in &idx[a + 1..] {
                if *self.at(i, j) > best {
                    best = self.at(i, j).clone();
                }
            }
        }
        Ok(best)
    }

    /// A pair realising the weak diameter of `set`.
    pub fn farthest_pair(&self, set: &VertexSet) -> Option<(VertexId, VertexId, Distance)> {
        let mut best: Option<(VertexId, VertexId, Distance)> = None;
        let items: Vec<VertexId> = set.iter().copied().collect();
        for (a, &u) in items.iter().enumerate() {
            for &v in &items[a..] {
                let d = self.get(u, v);
                if best.as_ref().is_none_or(|(_, _, b)| d > b) {
                    best = Some((u, v, d.clone()));
                }
            }
        }
        best
    }

    /// Radius and the smallest-id central vertex.
    pub fn radius_and_center(&self) -> Result<(Distance, VertexId), GraphError> {
        let n = self.vertices.len();
        if n == 0 {
            return Err(GraphError::EmptyGraph);
        }
        let mut best: Option<(Distance, VertexId)> = None;
        for i in 0..n {
            let ecc = (0..n).map(|j| self.at(i, j)).max().cloned().unwrap_or_else(Distance::zero);
            if best.as_ref().is_none_or(|(b, _)| ecc < *b) {
                best = Some((ecc, self.vertices[i]));
            }
        }
        Ok(best.unwrap())
    }

    /// Edges of the `r`-th power: pairs `u < v` with `dist(u, v) <= r`.
    pub fn power_adjacency(&self, r: &Rational) -> BTreeSet<(VertexId, VertexId)> {
        let n = self.vertices.len();
        let mut out = BTreeSet::new();
        for i in 0..n {
            for j in i + 1..n {
                if self.at(i, j).at_most(r) {
                    out.insert((self.vertices[i], self.vertices[j]));
                }
            }
        }
        out
    }

    /// Whether consecutive entries of `seq` are at distance at most `r`.
    pub fn is_r_walk(&self, seq: &[VertexId], r: &Rational) -> bool {
        !seq.is_empty()
            && seq.iter().all(|&v| self.contains(v))
            && seq.windows(2).all(|w| self.get(w[0], w[1]).at_most(r))
    }
}

/// Adjacency lists over dense indices, skipping infinite edges.
struct IndexedGraph {
    vertices: Vec<VertexId>,
    adj: Vec<Vec<(usize, Rational)>>,
}

impl IndexedGraph {
    fn new(g: &WeightedGraph) -> Self {
        let vertices: Vec<VertexId> = g.vertices().collect();
        let adj = vertices
            .iter()
            .map(|&v| {
                g.neighbors(v)
                    .filter_map(|(u, w)| {
                        let j = vertices.binary_search(&u).unwrap();
                        w.as_finite().map(|r| (j, r.clone()))
                    })
                    .collect()
            })
            .collect();
        IndexedGraph { vertices, adj }
    }

    fn dijkstra(&self, src: usize) -> (Vec<Distance>, Vec<Option<usize>>) {
        let n = self.vertices.len();
        let mut dist = vec![Distance::Infinite; n];
        let mut parent = vec![None; n];
        let mut done = vec![false; n];
        let mut heap = BinaryHeap::new();
        dist[src] = Distance::zero();
        heap.push(Reverse((Rational::zero(), src)));
        while let Some(Reverse((d, x))) = heap.pop() {
            if done[x] {
                continue;
            }
            done[x] = true;
            for (y, w) in &self.adj[x] {
                if done[*y] {
                    continue;
                }
                let cand = &d + w;
                let better = match &dist[*y] {
                    Distance::Infinite => true,
                    Distance::Finite(cur) => cand < *cur,
                };
                if better {
                    dist[*y] = Distance::Finite(cand.clone());
                    parent[*y] = Some(x);
                    heap.push(Reverse((cand, *y)));
                }
            }
        }
        (dist, parent)
    }
}

/// Exact shortest-path distances between all pairs of vertices.
///
/// Edges of infinite weight never lie on a finite path, so they are skipped.
pub fn all_pairs_distances(g: &WeightedGraph) -> DistanceMatrix {
    let ig = IndexedGraph::new(g);
    let n = ig.vertices.len();
    let mut dist = Vec::with_capacity(n * n);
    for s in 0..n {
        dist.extend(ig.dijkstra(s).0);
    }
    DistanceMatrix { vertices: ig.vertices, dist }
}

/// Single-source shortest-path tree: distance and parent per reached vertex.
pub fn shortest_path_tree(
    g: &WeightedGraph,
    source: VertexId,
) -> Result<BTreeMap<VertexId, (Distance, Option<VertexId>)>, GraphError> {
    let ig = IndexedGraph::new(g);
    let src = ig.vertices.binary_search(&source).map_err(|_| GraphError::UnknownVertex(source))?;
    let (dist, parent) = ig.dijkstra(src);
    Ok(ig
        .vertices
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, (dist[i].clone(), parent[i].map(|p| ig.vertices[p]))))
        .collect())
}

/// Outcome of a tightness check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tightness {
    Tight,
    /// A pair whose distance in the subgraph differs from the host distance.
    Violated { u: VertexId, v: VertexId, sub: Distance, host: Distance },
}

impl Tightness {
    pub fn is_tight(&self) -> bool {
        matches!(self, Tightness::Tight)
    }
}

/// Whether `sub` is tight in the graph whose metric is `host`.
pub fn is_tight_in(sub: &WeightedGraph, host: &DistanceMatrix) -> Result<Tightness, GraphError> {
    if let Some(v) = sub.vertices().find(|&v| !host.contains(v)) {
        return Err(GraphError::UnknownVertex(v));
    }
    let own = all_pairs_distances(sub);
    let verts = own.vertices();
    for (i, &u) in verts.iter().enumerate() {
        for (j, &v) in verts.iter().enumerate().skip(i + 1) {
            let (a, b) = (own.at(i, j), host.get(u, v));
            if a != b {
                return Ok(Tightness::Violated { u, v, sub: a.clone(), host: b.clone() });
            }
        }
    }
    Ok(Tightness::Tight)
}

/// Whether `sub` is tight in `host`: every pairwise distance agrees exactly.
pub fn is_tight(sub: &WeightedGraph, host: &WeightedGraph) -> Result<Tightness, GraphError> {
    if let Some(v) = sub.vertices().find(|&v| !host.has_vertex(v)) {
        return Err(GraphError::UnknownVertex(v));
    }
    is_tight_in(sub, &all_pairs_distances(host))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(i: u64) -> VertexId {
        VertexId(i)
    }

    fn unit_path(n: u64) -> WeightedGraph {
        let mut g = WeightedGraph::with_vertices((0..n).map(v));
        for i in 1..n {
            g.add_edge(v(i - 1), v(i), Distance::finite(1)).unwrap();
        }
        g
    }

    fn set(ids: &[u64]) -> VertexSet {
        ids.iter().map(|&i| v(i)).collect()
    }

    #[test]
    fn path_distances() {
        let d = all_pairs_distances(&unit_path(3));
        assert_eq!(*d.get(v(0), v(2)), Distance::finite(2));
        assert_eq!(*d.get(v(1), v(1)), Distance::zero());
    }

    #[test]
    fn isolated_vertices_are_infinitely_far() {
        let g = WeightedGraph::with_vertices([v(0), v(1)]);
        let d = all_pairs_distances(&g);
        assert_eq!(*d.get(v(0), v(1)), Distance::Infinite);
        assert_eq!(d.weak_diameter(&set(&[0, 1])).unwrap(), Distance::Infinite);
    }

    #[test]
    fn infinite_edges_do_not_connect() {
        let mut g = WeightedGraph::new();
        g.add_edge(v(0), v(1), Distance::Infinite).unwrap();
        let d = all_pairs_distances(&g);
        assert_eq!(*d.get(v(0), v(1)), Distance::Infinite);
    }

    #[test]
    fn rejects_bad_edges() {
        let mut g = unit_path(2);
        assert_eq!(g.add_edge(v(0), v(0), Distance::finite(1)), Err(GraphError::SelfLoop(v(0))));
        assert!(matches!(g.add_edge(v(1), v(0), Distance::finite(1)), Err(GraphError::ParallelEdge(..))));
        assert!(matches!(g.add_edge(v(2), v(3), Distance::finite(0)), Err(GraphError::NonPositiveWeight(..))));
    }

    #[test]
    fn neighborhoods() {
        let g = unit_path(3);
        let d = all_pairs_distances(&g);
        assert_eq!(d.neighborhood(&set(&[0]), &Rational::zero()), set(&[0]));
        assert_eq!(d.neighborhood(&set(&[0]), &Rational::one()), set(&[0, 1]));
        assert_eq!(d.neighborhood(&set(&[0, 1, 2]), &Rational::from_integer(5)), set(&[0, 1, 2]));
    }

    #[test]
    fn weak_diameter_cases() {
        let d = all_pairs_distances(&unit_path(3));
        assert_eq!(d.weak_diameter(&set(&[1])).unwrap(), Distance::zero());
        assert_eq!(d.weak_diameter(&set(&[0, 2])).unwrap(), Distance::finite(2));
        assert_eq!(d.weak_diameter(&VertexSet::new()), Err(GraphError::EmptyVertexSet));
    }

    #[test]
    fn radius_and_center_cases() {
        let single = all_pairs_distances(&WeightedGraph::with_vertices([v(7)]));
        assert_eq!(single.radius_and_center().unwrap(), (Distance::zero(), v(7)));
        let d = all_pairs_distances(&unit_path(3));
        assert_eq!(d.radius_and_center().unwrap(), (Distance::finite(1), v(1)));
        // unit 4-cycle: every eccentricity is 2, tie broken by smallest id
        let mut c4 = unit_path(4);
        c4.add_edge(v(3), v(0), Distance::finite(1)).unwrap();
        let d = all_pairs_distances(&c4);
        assert_eq!(d.radius_and_center().unwrap(), (Distance::finite(2), v(0)));
        assert_eq!(all_pairs_distances(&WeightedGraph::new()).radius_and_center(), Err(GraphError::EmptyGraph));
    }

    #[test]
    fn power_adjacency_cases() {
        let d = all_pairs_distances(&unit_path(3));
        let r1 = d.power_adjacency(&Rational::one());
        assert_eq!(r1, [(v(0), v(1)), (v(1), v(2))].into_iter().collect());
        let r2 = d.power_adjacency(&Rational::from_integer(2));
        assert!(r2.contains(&(v(0), v(2))));
        assert!(d.power_adjacency(&Rational::new(1, 2)).is_empty());
    }

    #[test]
    fn r_walks() {
        let d = all_pairs_distances(&unit_path(3));
        let one = Rational::one();
        assert!(d.is_r_walk(&[v(0)], &one));
        assert!(d.is_r_walk(&[v(0), v(0), v(1)], &one));
        assert!(!d.is_r_walk(&[v(0), v(2)], &one));
    }

    #[test]
    fn tightness_cases() {
        let mut tri = unit_path(3);
        tri.add_edge(v(0), v(2), Distance::finite(1)).unwrap();
        assert!(is_tight(&tri, &tri).unwrap().is_tight());
        let mut h = WeightedGraph::with_vertices(tri.vertices());
        h.add_edge(v(0), v(1), Distance::finite(1)).unwrap();
        h.add_edge(v(1), v(2), Distance::finite(1)).unwrap();
        assert_eq!(
            is_tight(&h, &tri).unwrap(),
            Tightness::Violated { u: v(0), v: v(2), sub: Distance::finite(2), host: Distance::finite(1) }
        );
        let outside = WeightedGraph::with_vertices([v(9)]);
        assert_eq!(is_tight(&outside, &tri), Err(GraphError::UnknownVertex(v(9))));
    }

    fn arb_graph() -> impl Strategy<Value = WeightedGraph> {
        (2u64..9, prop::collection::vec((0u64..9, 0u64..9, 1i64..6, 1i64..4, any::<bool>()), 0..20)).prop_map(
            |(n, edges)| {
                let mut g = WeightedGraph::with_vertices((0..n).map(v));
                for (a, b, p, q, inf) in edges {
                    let (a, b) = (a % n, b % n);
                    if a != b && !g.has_edge(v(a), v(b)) {
                        let w = if inf && p == 5 { Distance::Infinite } else { Distance::Finite(Rational::new(p, q)) };
                        g.add_edge(v(a), v(b), w).unwrap();
                    }
                }
                g
            },
        )
    }

    proptest! {
        #[test]
        fn metric_axioms(g in arb_graph()) {
            let d = all_pairs_distances(&g);
            let n = d.len();
            for i in 0..n {
                prop_assert_eq!(d.at(i, i), &Distance::zero());
                for j in 0..n {
                    prop_assert_eq!(d.at(i, j), d.at(j, i));
                    for k in 0..n {
                        prop_assert!(*d.at(i, k) <= d.at(i, j) + d.at(j, k));
                    }
                }
            }
        }

        #[test]
        fn monotone_in_radius(g in arb_graph(), a in 0i64..8, b in 0i64..8) {
            let d = all_pairs_distances(&g);
            let (lo, hi) = (Rational::new(a.min(b), 2), Rational::new(a.max(b), 2));
            let s: VertexSet = g.vertices().take(2).collect();
            prop_assert!(d.neighborhood(&s, &lo).is_subset(&d.neighborhood(&s, &hi)));
            if lo.is_positive() {
                prop_assert!(d.power_adjacency(&lo).is_subset(&d.power_adjacency(&hi)));
            }
        }

        #[test]
        fn infinite_edges_keep_tightness(g in arb_graph()) {
            let mut host = g.clone();
            let vs: Vec<VertexId> = g.vertices().collect();
            for (i, &a) in vs.iter().enumerate() {
                for &b in &vs[i + 1..] {
                    if !host.has_edge(a, b) {
                        host.add_edge(a, b, Distance::Infinite).unwrap();
                    }
                }
            }
            prop_assert!(is_tight(&g, &host).unwrap().is_tight());
        }

        #[test]
        fn shortest_path_tree_reproduces_distances(g in arb_graph()) {
            let d = all_pairs_distances(&g);
            for s in g.vertices() {
                let tree = shortest_path_tree(&g, s).unwrap();
                for (&t, (dist, _)) in &tree {
                    prop_assert_eq!(dist, d.get(s, t));
                    if dist.is_finite() {
                        let mut total = Distance::zero();
                        let mut cur = t;
                        while let Some(p) = tree[&cur].1 {
                            total = &total + g.weight(p, cur).unwrap();
                            cur = p;
                        }
                        prop_assert_eq!(cur, s);
                        prop_assert_eq!(&total, dist);
                    }
                }
            }
        }
    }
}
