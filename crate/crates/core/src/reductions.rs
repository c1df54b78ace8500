//! Moving colourings between graphs: pullbacks along distance-scaling maps,
//! reweighting a host so a minor is metrically embedded, clearing rational
//! denominators, subdividing integer weights away, and the exponentially
//! weighted grid.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use thiserror::Error;

use crate::colouring::{verify_mrd, Colouring, ColouringError, MrdViolation};
use crate::decomposition::{NodeId, TreeDecomposition};
use crate::graph::{all_pairs_distances, DistanceMatrix, GraphError, VertexId, VertexSet, WeightedGraph};
use crate::rational::{Distance, Rational};
use crate::rerouting::Mode;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReductionError {
    #[error("sandwich fails at {u},{v}: dist_H = {dist_h}, dist_G = {dist_g}")]
    Sandwich { u: VertexId, v: VertexId, dist_h: Distance, dist_g: Distance },
    #[error("iota has no image for {0}")]
    MissingImage(VertexId),
    #[error("scaling factors must be positive")]
    NonPositiveScale,
    #[error("epsilon must be positive")]
    NonPositiveEpsilon,
    #[error("H must be connected")]
    Disconnected,
    #[error("invalid model: {0}")]
    Model(#[from] ModelViolation),
    #[error("edge {u}-{v} has infinite weight")]
    InfiniteWeight { u: VertexId, v: VertexId },
    #[error("edge {u}-{v} has weight {weight}, not a positive integer")]
    NonIntegerWeight { u: VertexId, v: VertexId, weight: Distance },
    #[error("root {root} is not a vertex of the {m}x{m} grid")]
    RootOutsideGrid { root: VertexId, m: u64 },
    #[error("pulled-back colouring exceeds its bound: {0:?}")]
    Certificate(MrdViolation),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Colouring(#[from] ColouringError),
}

/// A map `iota: V(H) -> V(G)` with
/// `beta dist_H(u,v) <= dist_G(iota u, iota v) <= alpha dist_H(u,v)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalingMap {
    pub iota: BTreeMap<VertexId, VertexId>,
    pub alpha: Rational,
    pub beta: Rational,
}

impl ScalingMap {
    pub fn identity(vertices: impl IntoIterator<Item = VertexId>, alpha: Rational, beta: Rational) -> Self {
        ScalingMap { iota: vertices.into_iter().map(|v| (v, v)).collect(), alpha, beta }
    }

    /// Checks the sandwich for every pair, exactly.
    pub fn check(&self, dist_h: &DistanceMatrix, dist_g: &DistanceMatrix) -> Result<(), ReductionError> {
        if !self.alpha.is_positive() || !self.beta.is_positive() {
            return Err(ReductionError::NonPositiveScale);
        }
        let verts = dist_h.vertices();
        let mut image = Vec::with_capacity(verts.len());
        for &v in verts {
            let x = *self.iota.get(&v).ok_or(ReductionError::MissingImage(v))?;
            if !dist_g.contains(x) {
                return Err(GraphError::UnknownVertex(x).into());
            }
            image.push(x);
        }
        for i in 0..verts.len() {
            for j in i + 1..verts.len() {
                let dh = dist_h.at(i, j);
                let dg = dist_g.get(image[i], image[j]);
                let ok = match (dh, dg) {
                    (Distance::Finite(h), Distance::Finite(g)) => &self.beta * h <= *g && *g <= &self.alpha * h,
                    (Distance::Infinite, Distance::Infinite) => true,
                    _ => false,
                };
                if !ok {
                    return Err(ReductionError::Sandwich { u: verts[i], v: verts[j], dist_h: dh.clone(), dist_g: dg.clone() });
                }
            }
        }
        Ok(())
    }
}

/// Pulls an `(m, alpha r, f(alpha r))`-colouring of `G` back to `H`, where it
/// is an `(m, r, f(alpha r)/beta)`-colouring. Returns the colouring and its
/// bound. Test mode also verifies the input and the output.
pub fn pullback_colouring(
    dist_h: &DistanceMatrix,
    dist_g: &DistanceMatrix,
    sm: &ScalingMap,
    c_g: &Colouring,
    f_alpha_r: &Rational,
    r: &Rational,
    mode: Mode,
) -> Result<(Colouring, Rational), ReductionError> {
    sm.check(dist_h, dist_g)?;
    let mut c_h = Colouring::new(c_g.colours());
    for &v in dist_h.vertices() {
        let x = sm.iota[&v];
        let col = c_g.get(x).ok_or(ColouringError::Uncoloured(x))?;
        c_h.set(v, col)?;
    }
    let bound = f_alpha_r / &sm.beta;
    if mode == Mode::Test {
        let verdict = verify_mrd(dist_g, c_g, &(&sm.alpha * r), &Distance::finite(f_alpha_r.clone()))?;
        if let Some(v) = verdict.violation {
            return Err(ReductionError::Certificate(v));
        }
        let verdict = verify_mrd(dist_h, &c_h, r, &Distance::finite(bound.clone()))?;
        if let Some(v) = verdict.violation {
            return Err(ReductionError::Certificate(v));
        }
    }
    Ok((c_h, bound))
}

/// A model of `H` in `G`: disjoint connected parts of a subgraph `host` of
/// `G`, with `parts[i]` standing for `map[i]` in `H`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinorModel {
    pub host: WeightedGraph,
    pub parts: Vec<VertexSet>,
    pub map: Vec<VertexId>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelViolation {
    #[error("{0} parts but {1} H-vertices in the map")]
    LengthMismatch(usize, usize),
    #[error("host edge {0}-{1} is not an edge of G")]
    NotSubgraph(VertexId, VertexId),
    #[error("host vertex {0} is not in G")]
    UnknownVertex(VertexId),
    #[error("part {0} is empty")]
    EmptyPart(usize),
    #[error("vertex {0} lies in two parts")]
    Overlap(VertexId),
    #[error("host vertex {0} lies in no part")]
    Uncovered(VertexId),
    #[error("part vertex {0} is not a host vertex")]
    OutsideHost(VertexId),
    #[error("part {0} is not connected in the host")]
    DisconnectedPart(usize),
    #[error("the map is not a bijection onto V(H)")]
    NotBijective,
    #[error("H-vertices {0} and {1}: adjacency differs from the quotient")]
    NotIsomorphic(VertexId, VertexId),
}

impl MinorModel {
    /// Model with host the edges of `G` inside a part or between parts whose
    /// H-vertices are adjacent.
    pub fn from_parts(g: &WeightedGraph, h: &WeightedGraph, parts: Vec<VertexSet>, map: Vec<VertexId>) -> Self {
        let owner: BTreeMap<VertexId, VertexId> =
            parts.iter().zip(&map).flat_map(|(p, &x)| p.iter().map(move |&v| (v, x))).collect();
        let mut host = WeightedGraph::with_vertices(owner.keys().copied().filter(|&v| g.has_vertex(v)));
        for (u, v, w) in g.edges() {
            if let (Some(&a), Some(&b)) = (owner.get(&u), owner.get(&v)) {
                if a == b || h.has_edge(a, b) {
                    host.add_edge(u, v, w.clone()).unwrap();
                }
            }
        }
        MinorModel { host, parts, map }
    }

    /// The smallest vertex of each part, keyed by the H-vertex.
    pub fn iota(&self) -> BTreeMap<VertexId, VertexId> {
        self.map.iter().zip(&self.parts).map(|(&x, p)| (x, *p.iter().next().unwrap())).collect()
    }

    fn part_index(&self) -> BTreeMap<VertexId, usize> {
        self.parts.iter().enumerate().flat_map(|(i, p)| p.iter().map(move |&v| (v, i))).collect()
    }
}

/// Checks that `model` is a model of `h` in `g`; the bijection is supplied,
/// never searched for.
pub fn verify_model(g: &WeightedGraph, h: &WeightedGraph, model: &MinorModel) -> Result<(), ModelViolation> {
    if model.parts.len() != model.map.len() {
        return Err(ModelViolation::LengthMismatch(model.parts.len(), model.map.len()));
    }
    if let Some(v) = model.host.vertices().find(|&v| !g.has_vertex(v)) {
        return Err(ModelViolation::UnknownVertex(v));
    }
    if let Some((u, v, _)) = model.host.edges().find(|&(u, v, _)| !g.has_edge(u, v)) {
        return Err(ModelViolation::NotSubgraph(u, v));
    }
    let mut seen = VertexSet::new();
    for (i, part) in model.parts.iter().enumerate() {
        if part.is_empty() {
            return Err(ModelViolation::EmptyPart(i));
        }
        for &v in part {
            if !model.host.has_vertex(v) {
                return Err(ModelViolation::OutsideHost(v));
            }
            if !seen.insert(v) {
                return Err(ModelViolation::Overlap(v));
            }
        }
        if !model.host.induced(part).is_connected() {
            return Err(ModelViolation::DisconnectedPart(i));
        }
    }
    if let Some(v) = model.host.vertices().find(|v| !seen.contains(v)) {
        return Err(ModelViolation::Uncovered(v));
    }
    let images: VertexSet = model.map.iter().copied().collect();
    if images.len() != model.map.len() || images != h.vertex_set() {
        return Err(ModelViolation::NotBijective);
    }
    let index = model.part_index();
    let mut quotient = BTreeSet::new();
    for (u, v, _) in model.host.edges() {
        let (a, b) = (model.map[index[&u]], model.map[index[&v]]);
        if a != b {
            quotient.insert((a.min(b), a.max(b)));
        }
    }
    let target: BTreeSet<(VertexId, VertexId)> = h.edges().map(|(u, v, _)| (u, v)).collect();
    if let Some(&(a, b)) = quotient.symmetric_difference(&target).next() {
        return Err(ModelViolation::NotIsomorphic(a, b));
    }
    Ok(())
}

/// `G` reweighted so that `H` sits inside it with distortion `1 + epsilon`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinorWeighting {
    pub graph: WeightedGraph,
    pub map: ScalingMap,
}

/// Weights the edges of `G`: 1 between parts of the model, `epsilon / p`
/// inside parts (`p` the number of such edges, at least 1), and
/// `(1 + epsilon) diam(H) + 1` off the model. The resulting map satisfies
/// the sandwich with `alpha = 1 + epsilon`, `beta = 1`, which is checked.
pub fn minor_weighting(
    g: &WeightedGraph,
    h: &WeightedGraph,
    model: &MinorModel,
    epsilon: &Rational,
) -> Result<MinorWeighting, ReductionError> {
    if !epsilon.is_positive() {
        return Err(ReductionError::NonPositiveEpsilon);
    }
    if h.is_empty() || !h.is_connected() {
        return Err(ReductionError::Disconnected);
    }
    verify_model(g, h, model)?;
    let dist_h = all_pairs_distances(&h.unit_shape());
    let diam = dist_h.weak_diameter(&h.vertex_set())?;
    let diam = diam.as_finite().cloned().ok_or(ReductionError::Disconnected)?;
    let index = model.part_index();
    let intra = model.host.edges().filter(|(u, v, _)| index[u] == index[v]).count();
    let p = Rational::from_integer(intra.max(1) as i64);
    let one = Rational::one();
    let w_inter = Distance::finite(one.clone());
    let w_intra = Distance::finite(epsilon / &p);
    let w_off = Distance::finite(&(&(&one + epsilon) * &diam) + &one);
    let mut out = WeightedGraph::with_vertices(g.vertices());
    for (u, v, _) in g.edges() {
        let w = if !model.host.has_edge(u, v) {
            w_off.clone()
        } else if index[&u] == index[&v] {
            w_intra.clone()
        } else {
            w_inter.clone()
        };
        out.add_edge(u, v, w)?;
    }
    let map = ScalingMap { iota: model.iota(), alpha: &one + epsilon, beta: one };
    map.check(&dist_h, &all_pairs_distances(&out))?;
    Ok(MinorWeighting { graph: out, map })
}

/// Multiplies every weight by the least common multiple `k` of the
/// denominators; all distances scale by exactly `k`.
pub fn integerize(g: &WeightedGraph) -> Result<(WeightedGraph, BigInt), ReductionError> {
    let mut k = BigInt::one();
    for (u, v, w) in g.edges() {
        let w = w.as_finite().ok_or(ReductionError::InfiniteWeight { u, v })?;
        k = k.lcm(&w.denom());
    }
    let scale = Rational::from_bigint(k.clone());
    let mut out = WeightedGraph::with_vertices(g.vertices());
    for (u, v, w) in g.edges() {
        out.add_edge(u, v, Distance::finite(&scale * w.as_finite().unwrap()))?;
    }
    Ok((out, k))
}

/// A subdivided graph with the path replacing each edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowUp {
    pub graph: WeightedGraph,
    /// `(u, v, internal vertices from u to v)` for each edge `u < v`.
    pub paths: Vec<(VertexId, VertexId, Vec<VertexId>)>,
}

impl BlowUp {
    /// Every original vertex keeps its id.
    pub fn embedding(&self, g: &WeightedGraph) -> BTreeMap<VertexId, VertexId> {
        g.vertices().map(|v| (v, v)).collect()
    }
}

const MAX_SUBDIVISION_WEIGHT: u64 = 1 << 24;

/// Replaces each edge of integer weight `w` by an unweighted path with
/// `w - 1` new internal vertices, numbered after the largest id in edge
/// order.
pub fn subdivision_blowup(g: &WeightedGraph) -> Result<BlowUp, ReductionError> {
    let mut next = g.max_vertex_id().map_or(0, |v| v.0 + 1);
    let mut out = WeightedGraph::with_vertices(g.vertices());
    let mut paths = Vec::with_capacity(g.edge_count());
    for (u, v, w) in g.edges() {
        let bad = || ReductionError::NonIntegerWeight { u, v, weight: w.clone() };
        let w = w.as_finite().ok_or_else(bad)?;
        if !w.is_integer() || !w.is_positive() {
            return Err(bad());
        }
        let len = w.numer().to_u64().filter(|&n| n <= MAX_SUBDIVISION_WEIGHT).ok_or_else(bad)?;
        let internal: Vec<VertexId> = (0..len - 1).map(|i| VertexId(next + i)).collect();
        next += len - 1;
        let mut prev = u;
        for &x in internal.iter().chain(std::iter::once(&v)) {
            out.add_vertex(x);
            out.add_edge(prev, x, Distance::finite(1))?;
            prev = x;
        }
        paths.push((u, v, internal));
    }
    Ok(BlowUp { graph: out, paths })
}

/// Subdivides every edge of `h` `times` times and returns the result with
/// the model of `h` whose parts are the branch vertices, each with the
/// internal vertices of the paths to its larger neighbours.
pub fn subdivision_model(h: &WeightedGraph, times: usize) -> Result<(WeightedGraph, MinorModel), ReductionError> {
    let mut unit = WeightedGraph::with_vertices(h.vertices());
    for (u, v, _) in h.edges() {
        unit.add_edge(u, v, Distance::finite(times as i64 + 1))?;
    }
    let blow = subdivision_blowup(&unit)?;
    let mut parts: BTreeMap<VertexId, VertexSet> = h.vertices().map(|v| (v, VertexSet::from([v]))).collect();
    for (u, _, internal) in &blow.paths {
        parts.get_mut(u).unwrap().extend(internal.iter().copied());
    }
    let (map, parts) = parts.into_iter().unzip();
    let model = MinorModel { host: blow.graph.clone(), parts, map };
    Ok((blow.graph, model))
}

/// Extends a decomposition of `G` to one of its blow-up: each path hangs
/// off a bag holding both ends as a chain of bags of size 3.
pub fn blowup_decomposition(td: &TreeDecomposition, blow: &BlowUp) -> TreeDecomposition {
    let mut bags: BTreeMap<NodeId, VertexSet> = td.bags().map(|(t, b)| (t, b.clone())).collect();
    let mut edges: Vec<(NodeId, NodeId)> = td.edges().collect();
    let mut next = bags.keys().next_back().map_or(0, |t| t + 1);
    for (u, v, internal) in &blow.paths {
        if internal.is_empty() {
            continue;
        }
        let mut attach = td.nodes().find(|&t| td.bag(t).contains(u) && td.bag(t).contains(v)).expect("edge in some bag");
        let mut prev = *u;
        for &x in internal {
            bags.insert(next, [prev, x, *v].into_iter().collect());
            edges.push((attach, next));
            attach = next;
            next += 1;
            prev = x;
        }
    }
    TreeDecomposition::new(bags, edges).expect("hanging chains keep a tree")
}

/// The `m x m` grid on ids `i * m + j`, each edge weighted by `2^h` where
/// `h` is the smaller hop distance from `root` to its two ends.
pub fn exponential_grid_weighting(m: u64, root: VertexId) -> Result<WeightedGraph, ReductionError> {
    if m == 0 || root.0 >= m * m {
        return Err(ReductionError::RootOutsideGrid { root, m });
    }
    let (ri, rj) = (root.0 / m, root.0 % m);
    let hop = |i: u64, j: u64| (i.abs_diff(ri) + j.abs_diff(rj)) as u32;
    let mut g = WeightedGraph::with_vertices((0..m * m).map(VertexId));
    for i in 0..m {
        for j in 0..m {
            let here = hop(i, j);
            if j + 1 < m {
                g.add_edge(VertexId(i * m + j), VertexId(i * m + j + 1), Distance::finite(Rational::pow2(here.min(hop(i, j + 1)))))?;
            }
            if i + 1 < m {
                g.add_edge(VertexId(i * m + j), VertexId((i + 1) * m + j), Distance::finite(Rational::pow2(here.min(hop(i + 1, j)))))?;
            }
        }
    }
    Ok(g)
}
