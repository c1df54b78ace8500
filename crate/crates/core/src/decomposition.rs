//! Tree-decompositions, weighted torsos, completions, shallow partitions and
//! strong-constructions.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use thiserror::Error;

use crate::graph::{all_pairs_distances, DistanceMatrix, GraphError, VertexId, VertexSet, WeightedGraph};
use crate::rational::{Distance, Rational};

pub type NodeId = usize;

/// Bags indexed by tree nodes, plus the tree edges.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TreeDecomposition {
    bags: BTreeMap<NodeId, VertexSet>,
    edges: BTreeSet<(NodeId, NodeId)>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TdViolation {
    #[error("tree edge {0}-{1} uses an unknown node")]
    UnknownNode(NodeId, NodeId),
    #[error("tree edge {0}-{0} is a loop")]
    Loop(NodeId),
    #[error("the decomposition tree is not a tree")]
    NotATree,
    #[error("the decomposition has no bags but the graph is nonempty")]
    NoBags,
    #[error("bag {node} contains {vertex}, which is not a vertex of the graph")]
    UnknownVertex { node: NodeId, vertex: VertexId },
    #[error("vertex {0} is in no bag")]
    VertexUncovered(VertexId),
    #[error("the bags containing vertex {0} do not form a subtree")]
    Disconnected(VertexId),
    #[error("edge {0}-{1} is in no bag")]
    EdgeUncovered(VertexId, VertexId),
}

/// Width and adhesion of a valid decomposition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TdSummary {
    pub width: usize,
    pub adhesion: usize,
}

impl TreeDecomposition {
    pub fn new(
        bags: impl IntoIterator<Item = (NodeId, VertexSet)>,
        edges: impl IntoIterator<Item = (NodeId, NodeId)>,
    ) -> Result<Self, TdViolation> {
        let bags: BTreeMap<NodeId, VertexSet> = bags.into_iter().collect();
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a == b {
                return Err(TdViolation::Loop(a));
            }
            if !bags.contains_key(&a) || !bags.contains_key(&b) {
                return Err(TdViolation::UnknownNode(a, b));
            }
            set.insert((a.min(b), a.max(b)));
        }
        let td = TreeDecomposition { bags, edges: set };
        if !td.is_tree() {
            return Err(TdViolation::NotATree);
        }
        Ok(td)
    }

    /// A single bag holding every vertex.
    pub fn trivial(vertices: VertexSet) -> Self {
        TreeDecomposition { bags: BTreeMap::from([(0, vertices)]), edges: BTreeSet::new() }
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.bags.keys().copied()
    }

    pub fn node_count(&self) -> usize {
        self.bags.len()
    }

    pub fn bag(&self, t: NodeId) -> &VertexSet {
        &self.bags[&t]
    }

    pub fn bags(&self) -> impl Iterator<Item = (NodeId, &VertexSet)> + '_ {
        self.bags.iter().map(|(&t, b)| (t, b))
    }

    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.edges.iter().copied()
    }

    pub fn neighbours(&self, t: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.edges.iter().filter_map(move |&(a, b)| {
            if a == t {
                Some(b)
            } else if b == t {
                Some(a)
            } else {
                None
            }
        })
    }

    fn adjacency(&self) -> BTreeMap<NodeId, Vec<NodeId>> {
        let mut adj: BTreeMap<NodeId, Vec<NodeId>> = self.bags.keys().map(|&t| (t, Vec::new())).collect();
        for &(a, b) in &self.edges {
            adj.get_mut(&a).unwrap().push(b);
            adj.get_mut(&b).unwrap().push(a);
        }
        adj
    }

    fn is_tree(&self) -> bool {
        if self.bags.is_empty() {
            return self.edges.is_empty();
        }
        self.edges.len() + 1 == self.bags.len() && self.node_components(&self.bags.keys().copied().collect()).len() == 1
    }

    /// Connected components of the subforest induced by `nodes`, each sorted.
    pub fn node_components(&self, nodes: &BTreeSet<NodeId>) -> Vec<BTreeSet<NodeId>> {
        let adj = self.adjacency();
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for &start in nodes {
            if !seen.insert(start) {
                continue;
            }
            let mut comp = BTreeSet::from([start]);
            let mut queue = VecDeque::from([start]);
            while let Some(t) = queue.pop_front() {
                for &u in &adj[&t] {
                    if nodes.contains(&u) && seen.insert(u) {
                        comp.insert(u);
                        queue.push_back(u);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    /// The decomposition restricted to a set of nodes inducing a subtree,
    /// with every bag mapped through `f`.
    pub fn restrict(&self, nodes: &BTreeSet<NodeId>, mut f: impl FnMut(&VertexSet) -> VertexSet) -> TreeDecomposition {
        TreeDecomposition {
            bags: self.bags.iter().filter(|(t, _)| nodes.contains(t)).map(|(&t, b)| (t, f(b))).collect(),
            edges: self.edges.iter().filter(|(a, b)| nodes.contains(a) && nodes.contains(b)).copied().collect(),
        }
    }

    /// Maximum bag size minus one (0 when there are no bags).
    pub fn width(&self) -> usize {
        self.bags.values().map(|b| b.len()).max().unwrap_or(0).saturating_sub(1)
    }

    pub fn adhesion(&self) -> usize {
        self.edges.iter().map(|(a, b)| self.bags[a].intersection(&self.bags[b]).count()).max().unwrap_or(0)
    }

    pub fn max_bag_size(&self) -> usize {
        self.bags.values().map(|b| b.len()).max().unwrap_or(0)
    }

    /// The smallest node whose bag contains `v`.
    pub fn node_containing(&self, v: VertexId) -> Option<NodeId> {
        self.bags.iter().find(|(_, b)| b.contains(&v)).map(|(&t, _)| t)
    }
}

/// Checks the decomposition axioms against `g` and reports width and adhesion.
pub fn validate_td(g: &WeightedGraph, td: &TreeDecomposition) -> Result<TdSummary, TdViolation> {
    if td.bags.is_empty() && !g.is_empty() {
        return Err(TdViolation::NoBags);
    }
    for (&node, bag) in &td.bags {
        if let Some(&vertex) = bag.iter().find(|v| !g.has_vertex(**v)) {
            return Err(TdViolation::UnknownVertex { node, vertex });
        }
    }
    if !td.is_tree() {
        return Err(TdViolation::NotATree);
    }
    let mut holders: BTreeMap<VertexId, BTreeSet<NodeId>> = BTreeMap::new();
    for (&t, bag) in &td.bags {
        for &v in bag {
            holders.entry(v).or_default().insert(t);
        }
    }
    for v in g.vertices() {
        match holders.get(&v) {
            None => return Err(TdViolation::VertexUncovered(v)),
            Some(nodes) if td.node_components(nodes).len() != 1 => return Err(TdViolation::Disconnected(v)),
            Some(_) => {}
        }
    }
    for (u, v, _) in g.edges() {
        if !holders[&u].iter().any(|t| holders[&v].contains(t)) {
            return Err(TdViolation::EdgeUncovered(u, v));
        }
    }
    Ok(TdSummary { width: td.width(), adhesion: td.adhesion() })
}

fn add_torso_edges(out: &mut WeightedGraph, g: &WeightedGraph, dist: &DistanceMatrix, td: &TreeDecomposition, t: NodeId) {
    let bag = td.bag(t);
    for &v in bag {
        out.add_vertex(v);
    }
    for &u in bag {
        for (v, _) in g.neighbors(u) {
            if u < v && bag.contains(&v) {
                out.merge_edge(u, v, dist.get(u, v).clone()).unwrap();
            }
        }
    }
    for s in td.neighbours(t) {
        let shared: Vec<VertexId> = bag.intersection(td.bag(s)).copied().collect();
        for (i, &u) in shared.iter().enumerate() {
            for &v in &shared[i + 1..] {
                out.merge_edge(u, v, dist.get(u, v).clone()).unwrap();
            }
        }
    }
}

/// `G[B_t]` plus an edge for every pair sharing a neighbouring bag, every
/// edge weighted by its distance in `G`.
pub fn weighted_torso(g: &WeightedGraph, dist: &DistanceMatrix, td: &TreeDecomposition, t: NodeId) -> WeightedGraph {
    let mut out = WeightedGraph::new();
    add_torso_edges(&mut out, g, dist, td, t);
    out
}

/// The union of all weighted torsos.
pub fn completion(g: &WeightedGraph, dist: &DistanceMatrix, td: &TreeDecomposition) -> WeightedGraph {
    let mut out = WeightedGraph::with_vertices(g.vertices());
    for t in td.nodes() {
        add_torso_edges(&mut out, g, dist, td, t);
    }
    out
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PartitionError {
    #[error("part {0} is empty")]
    EmptyPart(usize),
    #[error("vertex {0} lies in two parts")]
    Overlap(VertexId),
    #[error("vertex {0} lies in no part")]
    Uncovered(VertexId),
    #[error("vertex {0} of a part is not in the graph")]
    UnknownVertex(VertexId),
    #[error("part {0} does not induce a connected subgraph")]
    Disconnected(usize),
    #[error("part {part} has radius {radius}, above l = {ell}")]
    TooDeep { part: usize, radius: Distance, ell: Rational },
    #[error("quotient has treewidth {width}, above k = {k}")]
    TooWide { width: usize, k: usize },
    #[error("quotient has {size} vertices, above the exact treewidth limit {limit}; supply a decomposition")]
    NeedsCertificate { size: usize, limit: usize },
    #[error("quotient decomposition: {0}")]
    Certificate(#[from] TdViolation),
    #[error("part {part} contains {count} separator vertices instead of one")]
    SeparatorCount { part: usize, count: usize },
    #[error("{0}")]
    Precondition(String),
}

/// Disjoint nonempty vertex sets; part `i` is the quotient vertex `VertexId(i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    parts: Vec<VertexSet>,
    part_of: BTreeMap<VertexId, usize>,
}

impl Partition {
    /// Builds a partition from disjoint nonempty sets (coverage is checked
    /// against a graph separately).
    pub fn new(parts: Vec<VertexSet>) -> Result<Self, PartitionError> {
        let mut part_of = BTreeMap::new();
        for (i, p) in parts.iter().enumerate() {
            if p.is_empty() {
                return Err(PartitionError::EmptyPart(i));
            }
            for &v in p {
                if part_of.insert(v, i).is_some() {
                    return Err(PartitionError::Overlap(v));
                }
            }
        }
        Ok(Partition { parts, part_of })
    }

    pub fn singletons(g: &WeightedGraph) -> Self {
        Partition::new(g.vertices().map(|v| VertexSet::from([v])).collect()).unwrap()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn parts(&self) -> &[VertexSet] {
        &self.parts
    }

    pub fn part(&self, i: usize) -> &VertexSet {
        &self.parts[i]
    }

    pub fn part_of(&self, v: VertexId) -> Option<usize> {
        self.part_of.get(&v).copied()
    }

    /// Indices of the parts meeting `set`.
    pub fn parts_of(&self, set: &VertexSet) -> BTreeSet<usize> {
        set.iter().filter_map(|&v| self.part_of(v)).collect()
    }

    /// The union of the given parts.
    pub fn union_of<'a>(&self, ids: impl IntoIterator<Item = &'a usize>) -> VertexSet {
        ids.into_iter().flat_map(|&i| self.parts[i].iter().copied()).collect()
    }

    /// The union of the parts named in a quotient bag.
    pub fn union_of_bag(&self, bag: &VertexSet) -> VertexSet {
        bag.iter().flat_map(|p| self.parts[p.0 as usize].iter().copied()).collect()
    }

    /// The vertex-level decomposition `(∪_{P∈B_t} P)` of a quotient decomposition.
    pub fn lift(&self, td: &TreeDecomposition) -> TreeDecomposition {
        td.restrict(&td.nodes().collect(), |b| self.union_of_bag(b))
    }

    fn check_cover(&self, g: &WeightedGraph) -> Result<(), PartitionError> {
        if let Some(&v) = self.part_of.keys().find(|v| !g.has_vertex(**v)) {
            return Err(PartitionError::UnknownVertex(v));
        }
        if let Some(v) = g.vertices().find(|v| !self.part_of.contains_key(v)) {
            return Err(PartitionError::Uncovered(v));
        }
        Ok(())
    }
}

pub fn part_vertex(i: usize) -> VertexId {
    VertexId(i as u64)
}

/// The quotient `G / P` with unit weights; part `i` becomes `VertexId(i)`.
pub fn quotient(g: &WeightedGraph, p: &Partition) -> Result<WeightedGraph, PartitionError> {
    p.check_cover(g)?;
    for (i, part) in p.parts().iter().enumerate() {
        if !g.induced(part).is_connected() {
            return Err(PartitionError::Disconnected(i));
        }
    }
    let mut q = WeightedGraph::with_vertices((0..p.len()).map(part_vertex));
    for (u, v, _) in g.edges() {
        let (a, b) = (p.part_of(u).unwrap(), p.part_of(v).unwrap());
        if a != b && !q.has_edge(part_vertex(a), part_vertex(b)) {
            q.add_edge(part_vertex(a), part_vertex(b), Distance::finite(1)).unwrap();
        }
    }
    Ok(q)
}

/// Radius and a central vertex of `G[P]`, measured inside `G[P]`.
pub fn part_centre(g: &WeightedGraph, part: &VertexSet) -> Result<(Distance, VertexId), GraphError> {
    all_pairs_distances(&g.induced(part)).radius_and_center()
}

pub const DEFAULT_TREEWIDTH_LIMIT: usize = 12;

/// Largest part radius and the certified quotient width.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionSummary {
    pub max_radius: Distance,
    pub width: usize,
}

/// Checks that `p` is a `(k, l)`-partition: connected parts of radius at most
/// `l` and a quotient of treewidth at most `k`. The treewidth comes from
/// the exact oracle for small quotients, otherwise from `certificate`.
pub fn validate_partition(
    g: &WeightedGraph,
    p: &Partition,
    k: usize,
    ell: &Rational,
    certificate: Option<&TreeDecomposition>,
    limit: usize,
) -> Result<PartitionSummary, PartitionError> {
    let q = quotient(g, p)?;
    let mut max_radius = Distance::zero();
    for (i, part) in p.parts().iter().enumerate() {
        let (radius, _) = part_centre(g, part).unwrap();
        if !radius.at_most(ell) {
            return Err(PartitionError::TooDeep { part: i, radius, ell: ell.clone() });
        }
        max_radius = max_radius.max(radius);
    }
    let width = match certificate {
        Some(td) => validate_td(&q, td)?.width,
        None if q.vertex_count() <= limit => treewidth_exact(&q, limit).unwrap(),
        None => return Err(PartitionError::NeedsCertificate { size: q.vertex_count(), limit }),
    };
    if width > k {
        return Err(PartitionError::TooWide { width, k });
    }
    Ok(PartitionSummary { max_radius, width })
}

/// Voronoi partition of `G[N^r(S)]`: each vertex joins the nearest vertex of
/// `S`, ties to the smallest id.
pub fn neighborhood_partition(dist: &DistanceMatrix, s: &VertexSet, r: &Rational) -> Partition {
    let zone = dist.neighborhood(s, r);
    let mut parts: BTreeMap<VertexId, VertexSet> = s.iter().map(|&x| (x, VertexSet::new())).collect();
    for &v in &zone {
        let owner = crate::rerouting::nearest(dist, v, s).unwrap();
        parts.get_mut(&owner).unwrap().insert(v);
    }
    Partition::new(parts.into_values().collect()).unwrap()
}

/// A decomposition of `H` whose bags are indexed by the separator vertices,
/// with `s ∈ J_s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootedDecomposition {
    pub bags: BTreeMap<VertexId, VertexSet>,
}

impl RootedDecomposition {
    pub fn width(&self) -> usize {
        self.bags.values().map(|b| b.len()).max().unwrap_or(0).saturating_sub(1)
    }
}

/// Given a separation `(G, H)` of `G'` with separator `S`, a partition of `G`
/// with one separator vertex per part, a decomposition of its quotient and a
/// rooted `G[S]`-decomposition of `H`, returns the partition of `G'` that adds
/// the singletons of `V(H) \ S`, together with the decomposition `(K_t)`.
pub fn combine_separation_partition(
    g_prime: &WeightedGraph,
    g: &WeightedGraph,
    h: &WeightedGraph,
    p: &Partition,
    td: &TreeDecomposition,
    rooted: &RootedDecomposition,
) -> Result<(Partition, TreeDecomposition), PartitionError> {
    let pre = |msg: String| PartitionError::Precondition(msg);
    let union = g.union(h).map_err(|e| pre(format!("sides disagree: {e}")))?;
    if union != *g_prime {
        return Err(pre("G' is not the union of the two sides".into()));
    }
    let s: VertexSet = g.vertex_set().intersection(&h.vertex_set()).copied().collect();
    let q = quotient(g, p)?;
    validate_td(&q, td)?;
    for (i, part) in p.parts().iter().enumerate() {
        let count = part.intersection(&s).count();
        if count != 1 {
            return Err(PartitionError::SeparatorCount { part: i, count });
        }
    }
    // rooted G[S]-decomposition of H
    if rooted.bags.keys().copied().collect::<VertexSet>() != s {
        return Err(pre("rooted decomposition must have one bag per separator vertex".into()));
    }
    for (&x, bag) in &rooted.bags {
        if !bag.contains(&x) {
            return Err(pre(format!("bag of {x} does not contain {x}")));
        }
        if let Some(v) = bag.iter().find(|v| !h.has_vertex(**v)) {
            return Err(pre(format!("bag of {x} contains {v}, which is not in H")));
        }
    }
    let gs = g.induced(&s);
    for v in h.vertices() {
        let holders: VertexSet = rooted.bags.iter().filter(|(_, b)| b.contains(&v)).map(|(&x, _)| x).collect();
        if holders.is_empty() || !gs.induced(&holders).is_connected() {
            return Err(pre(format!("the bags containing {v} do not induce a nonempty connected subgraph of G[S]")));
        }
    }
    for (u, v, _) in h.edges() {
        if !rooted.bags.values().any(|b| b.contains(&u) && b.contains(&v)) {
            return Err(pre(format!("edge {u}-{v} of H is in no bag")));
        }
    }

    let mut parts = p.parts().to_vec();
    parts.extend(h.vertices().filter(|v| !s.contains(v)).map(|v| VertexSet::from([v])));
    let p_prime = Partition::new(parts)?;
    let k_td = td.restrict(&td.nodes().collect(), |bag| {
        let s_t: VertexSet = p.union_of_bag(bag).intersection(&s).copied().collect();
        s_t.iter()
            .flat_map(|x| p_prime.parts_of(&rooted.bags[x]))
            .map(part_vertex)
            .collect()
    });
    Ok((p_prime, k_td))
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreewidthError {
    #[error("{size} vertices exceed the exact treewidth limit {limit}")]
    LimitExceeded { size: usize, limit: usize },
}

/// Vertices outside `s ∪ {v}` reachable from `v` through `s`.
fn q_set(adj: &[u32], s: u32, v: usize) -> u32 {
    let mut seen = 1u32 << v;
    let mut stack = vec![v];
    let mut out = 0u32;
    while let Some(x) = stack.pop() {
        let mut nb = adj[x] & !seen;
        while nb != 0 {
            let y = nb.trailing_zeros() as usize;
            nb &= nb - 1;
            seen |= 1 << y;
            if s >> y & 1 == 1 {
                stack.push(y);
            } else {
                out |= 1 << y;
            }
        }
    }
    out
}

/// Exact treewidth with an optimal elimination order, by dynamic programming
/// over vertex subsets.
fn treewidth_order(g: &WeightedGraph, limit: usize) -> Result<(usize, Vec<VertexId>), TreewidthError> {
    let verts: Vec<VertexId> = g.vertices().collect();
    let n = verts.len();
    if n > limit || n > 20 {
        return Err(TreewidthError::LimitExceeded { size: n, limit: limit.min(20) });
    }
    if n == 0 {
        return Ok((0, Vec::new()));
    }
    let index: BTreeMap<VertexId, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut adj = vec![0u32; n];
    for (u, v, _) in g.edges() {
        adj[index[&u]] |= 1 << index[&v];
        adj[index[&v]] |= 1 << index[&u];
    }
    let full = (1usize << n) - 1;
    let mut tw = vec![usize::MAX; full + 1];
    let mut choice = vec![0usize; full + 1];
    tw[0] = 0;
    for s in 1..=full {
        let mut rest = s;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let before = s & !(1 << v);
            let q = q_set(&adj, before as u32, v).count_ones() as usize;
            let cost = tw[before].max(q);
            if cost < tw[s] {
                tw[s] = cost;
                choice[s] = v;
            }
        }
    }
    let mut order = Vec::with_capacity(n);
    let mut s = full;
    while s != 0 {
        let v = choice[s];
        order.push(verts[v]);
        s &= !(1 << v);
    }
    order.reverse();
    Ok((tw[full], order))
}

/// Exact treewidth for graphs with at most `limit` vertices.
pub fn treewidth_exact(g: &WeightedGraph, limit: usize) -> Result<usize, TreewidthError> {
    treewidth_order(g, limit).map(|(w, _)| w)
}

/// An optimal-width tree-decomposition for small graphs, built from an
/// optimal elimination order.
pub fn exact_tree_decomposition(g: &WeightedGraph, limit: usize) -> Result<TreeDecomposition, TreewidthError> {
    let (_, order) = treewidth_order(g, limit)?;
    Ok(elimination_decomposition(g, &order))
}

/// The decomposition induced by an elimination order: node `i` holds the
/// `i`-th eliminated vertex and its later neighbours in the filled graph.
pub fn elimination_decomposition(g: &WeightedGraph, order: &[VertexId]) -> TreeDecomposition {
    let pos: BTreeMap<VertexId, usize> = order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut adj: BTreeMap<VertexId, VertexSet> = g.vertices().map(|v| (v, g.neighbors(v).map(|(u, _)| u).collect())).collect();
    let mut bags = BTreeMap::new();
    let mut edges = Vec::new();
    let mut roots = Vec::new();
    for (i, &v) in order.iter().enumerate() {
        let later: VertexSet = adj[&v].iter().copied().filter(|u| pos[u] > i).collect();
        for &a in &later {
            for &b in &later {
                if a != b {
                    adj.get_mut(&a).unwrap().insert(b);
                }
            }
        }
        match later.iter().map(|u| pos[u]).min() {
            Some(parent) => edges.push((i, parent)),
            None => roots.push(i),
        }
        let mut bag = later;
        bag.insert(v);
        bags.insert(i, bag);
    }
    for w in roots.windows(2) {
        edges.push((w[0], w[1]));
    }
    TreeDecomposition::new(bags, edges).expect("elimination gives a tree")
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StrongError {
    #[error(transparent)]
    Decomposition(#[from] TdViolation),
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error("adhesion {adhesion} exceeds k = {k}")]
    Adhesion { adhesion: usize, k: usize },
    #[error("bag {node} has {size} parts, more than the {limit} centres allowed")]
    BagTooLarge { node: NodeId, size: usize, limit: usize },
}

/// A shallow partition with a decomposition of its quotient of adhesion at
/// most `k`. Bags are `(centres_per_bag, l)`-centred, witnessed by one
/// central vertex per part; the witness carries over to every sub-bag.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrongConstruction {
    pub partition: Partition,
    /// Decomposition of the quotient; bags hold `VertexId(part index)`.
    pub td: TreeDecomposition,
    pub k: usize,
    pub ell: Rational,
    pub centres: Vec<VertexId>,
    pub centres_per_bag: usize,
}

impl StrongConstruction {
    /// Checks shallowness, the decomposition, adhesion and the per-bag
    /// centred witness against `g`.
    pub fn validate(&self, g: &WeightedGraph) -> Result<TdSummary, StrongError> {
        let q = quotient(g, &self.partition)?;
        let summary = validate_td(&q, &self.td)?;
        if summary.adhesion > self.k {
            return Err(StrongError::Adhesion { adhesion: summary.adhesion, k: self.k });
        }
        for (i, part) in self.partition.parts().iter().enumerate() {
            let d = all_pairs_distances(&g.induced(part));
            let c = self.centres[i];
            let radius = d.vertices().iter().map(|&v| d.get(c, v).clone()).max().unwrap();
            if !part.contains(&c) || !radius.at_most(&self.ell) {
                return Err(PartitionError::TooDeep { part: i, radius, ell: self.ell.clone() }.into());
            }
        }
        for (node, bag) in self.td.bags() {
            if bag.len() > self.centres_per_bag {
                return Err(StrongError::BagTooLarge { node, size: bag.len(), limit: self.centres_per_bag });
            }
        }
        Ok(summary)
    }

    /// The vertex-level decomposition `(∪_{P∈B_t} P)`.
    pub fn vertex_decomposition(&self) -> TreeDecomposition {
        self.partition.lift(&self.td)
    }
}

/// Strong-construction from a shallow partition and any decomposition of its
/// quotient of adhesion at most `k`; bags are centred by their part centres.
pub fn strong_construction(
    g: &WeightedGraph,
    p: Partition,
    td: TreeDecomposition,
    k: usize,
    ell: Rational,
) -> Result<StrongConstruction, StrongError> {
    let mut centres = Vec::with_capacity(p.len());
    for part in p.parts() {
        centres.push(part_centre(g, part).map_err(|_| PartitionError::EmptyPart(centres.len()))?.1);
    }
    let centres_per_bag = td.max_bag_size().max(1);
    let sc = StrongConstruction { partition: p, td, k, ell, centres, centres_per_bag };
    sc.validate(g)?;
    Ok(sc)
}

/// The singleton partition of `G` with its own decomposition, as a
/// `(k, 0)`-strong-construction whose bags are `(k+1, 0)`-centred.
pub fn singleton_strong_construction(
    g: &WeightedGraph,
    td: &TreeDecomposition,
    k: usize,
) -> Result<StrongConstruction, StrongError> {
    let summary = validate_td(g, td)?;
    if summary.adhesion > k {
        return Err(StrongError::Adhesion { adhesion: summary.adhesion, k });
    }
    if let Some((node, bag)) = td.bags().find(|(_, b)| b.len() > k + 1) {
        return Err(StrongError::BagTooLarge { node, size: bag.len(), limit: k + 1 });
    }
    let p = Partition::singletons(g);
    let qtd = td.restrict(&td.nodes().collect(), |b| b.iter().map(|&v| part_vertex(p.part_of(v).unwrap())).collect());
    let centres: Vec<VertexId> = p.parts().iter().map(|s| *s.iter().next().unwrap()).collect();
    let sc = StrongConstruction { partition: p, td: qtd, k, ell: Rational::zero(), centres, centres_per_bag: k + 1 };
    sc.validate(g)?;
    Ok(sc)
}

/// A `(k, l)`-partition with a width-`k` decomposition of its quotient, as a
/// strong-construction whose bags are `(k+1, l)`-centred.
pub fn partition_strong_construction(
    g: &WeightedGraph,
    p: Partition,
    td: TreeDecomposition,
    k: usize,
    ell: Rational,
) -> Result<StrongConstruction, StrongError> {
    validate_partition(g, &p, k, &ell, Some(&td), DEFAULT_TREEWIDTH_LIMIT)?;
    let mut sc = strong_construction(g, p, td, k, ell)?;
    sc.centres_per_bag = k + 1;
    Ok(sc)
}
