//! Rerouting of `r`-paths through centred sets, barrier colourings and the
//! gluing of colourings across separations.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::colouring::{verify_mrd, Colour, Colouring, ColouringError, MrdViolation};
use crate::graph::{all_pairs_distances, is_tight_in, DistanceMatrix, GraphError, Tightness, VertexId, VertexSet, WeightedGraph};
use crate::rational::{Distance, Rational};

/// How much self-checking the constructions do.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Trust the lemmas; only structural errors are reported.
    Fast,
    /// Check every hypothesis and re-verify every certified bound.
    Test,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RerouteError {
    #[error("the walk is empty")]
    EmptyWalk,
    #[error("{0} is not an r-walk")]
    NotAWalk(String),
    #[error("vertex {v} is at distance {distance} from its image {image}, above l")]
    ImageTooFar { v: VertexId, image: VertexId, distance: Distance },
    #[error("subpath {path:?} outside Z has weak diameter {diameter}, above d")]
    WideSubpath { path: Vec<VertexId>, diameter: Distance },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CentredError {
    #[error("centre has {size} vertices, more than k = {k}")]
    CentreTooLarge { size: usize, k: usize },
    #[error("centre is empty but Z is not")]
    EmptyCentre,
    #[error("vertex {0} is farther than l from every centre vertex")]
    NotCovered(VertexId),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// `Z` together with a centre `S`, `|S| <= k`, and `iota: Z -> S` sending each
/// vertex to a centre vertex within distance `l`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CentredSet {
    pub z: VertexSet,
    pub centre: VertexSet,
    pub k: usize,
    pub ell: Rational,
    pub iota: BTreeMap<VertexId, VertexId>,
}

impl CentredSet {
    /// Builds the set with `iota` mapping to the nearest centre vertex,
    /// ties by smallest id.
    pub fn new(
        dist: &DistanceMatrix,
        z: VertexSet,
        centre: VertexSet,
        k: usize,
        ell: Rational,
    ) -> Result<Self, CentredError> {
        if centre.len() > k {
            return Err(CentredError::CentreTooLarge { size: centre.len(), k });
        }
        if centre.is_empty() && !z.is_empty() {
            return Err(CentredError::EmptyCentre);
        }
        for &v in z.iter().chain(centre.iter()) {
            if !dist.contains(v) {
                return Err(GraphError::UnknownVertex(v).into());
            }
        }
        let mut iota = BTreeMap::new();
        for &v in &z {
            let s = nearest(dist, v, &centre).unwrap();
            if !dist.get(v, s).at_most(&ell) {
                return Err(CentredError::NotCovered(v));
            }
            iota.insert(v, s);
        }
        Ok(CentredSet { z, centre, k, ell, iota })
    }

    /// `N^{extra}(Z)` is centred by the same centre with `l + extra`.
    pub fn widen(&self, dist: &DistanceMatrix, extra: &Rational) -> Result<CentredSet, CentredError> {
        CentredSet::new(dist, dist.neighborhood(&self.z, extra), self.centre.clone(), self.k, &self.ell + extra)
    }
}

/// The vertex of `set` nearest to `v`, ties by smallest id.
pub fn nearest(dist: &DistanceMatrix, v: VertexId, set: &VertexSet) -> Option<VertexId> {
    let mut best: Option<(VertexId, &Distance)> = None;
    for &s in set {
        let d = dist.get(v, s);
        if best.is_none_or(|(_, b)| d < b) {
            best = Some((s, d));
        }
    }
    best.map(|(s, _)| s)
}

/// Replaces the part of the `r`-walk `p` inside `Z` by its image under `iota`:
/// the result is `x, iota(v_1), ..., iota(v_n), y` where `v_1..v_n` are the
/// vertices of `p` in `Z`. It is a `(d + 2r + 2l)`-walk.
pub fn reroute(
    dist: &DistanceMatrix,
    p: &[VertexId],
    r: &Rational,
    iota: &BTreeMap<VertexId, VertexId>,
    ell: &Rational,
    d: &Rational,
) -> Result<Vec<VertexId>, RerouteError> {
    let (&x, &y) = match (p.first(), p.last()) {
        (Some(x), Some(y)) => (x, y),
        _ => return Err(RerouteError::EmptyWalk),
    };
    if !dist.is_r_walk(p, r) {
        return Err(RerouteError::NotAWalk(format!("{p:?}")));
    }
    for (&v, &image) in iota {
        let distance = dist.get(v, image);
        if !distance.at_most(ell) {
            return Err(RerouteError::ImageTooFar { v, image, distance: distance.clone() });
        }
    }
    for run in p.split(|v| iota.contains_key(v)).filter(|run| !run.is_empty()) {
        let set: VertexSet = run.iter().copied().collect();
        let diameter = dist.weak_diameter(&set).unwrap();
        if !diameter.at_most(d) {
            return Err(RerouteError::WideSubpath { path: run.to_vec(), diameter });
        }
    }
    let mut out = vec![x];
    out.extend(p.iter().filter_map(|v| iota.get(v).copied()));
    out.push(y);
    debug_assert!(dist.is_r_walk(&out, &(d + &(Rational::from_integer(2) * (r + ell)))));
    Ok(out)
}

/// A pair of `Z` joined by an `r`-path inside `Z` but farther apart than
/// `(k+1)(2r+2l)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CentredBoundViolation {
    pub x: VertexId,
    pub y: VertexId,
    pub distance: Distance,
    pub bound: Rational,
}

pub fn centred_rpath_bound(k: usize, r: &Rational, ell: &Rational) -> Rational {
    Rational::from_integer(k as i64 + 1) * Rational::from_integer(2) * (r + ell)
}

/// Checks that every two vertices of `Z` joined by an `r`-path inside `Z`
/// are within `(k+1)(2r+2l)`.
pub fn check_centred_rpath_bound(
    dist: &DistanceMatrix,
    cs: &CentredSet,
    r: &Rational,
) -> Result<(), CentredBoundViolation> {
    let bound = centred_rpath_bound(cs.k, r, &cs.ell);
    let z: Vec<VertexId> = cs.z.iter().copied().collect();
    let c = Colouring::constant(1, z.iter().copied(), 1);
    let report = crate::colouring::monochromatic_components(&dist.restrict(&cs.z), &c, r).unwrap();
    // components of the r-th power of G restricted to Z; distances stay in G
    for comp in &report.components {
        if let Some((x, y, distance)) = dist.farthest_pair(&comp.vertices) {
            if !distance.at_most(&bound) {
                return Err(CentredBoundViolation { x, y, distance, bound });
            }
        }
    }
    Ok(())
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExtendError {
    #[error("the colouring of G - Z violates its bound: {0:?}")]
    Precondition(MrdViolation),
    #[error("the extended colouring exceeds the certified bound: {0:?}")]
    Certificate(MrdViolation),
    #[error("colourings of G - Z and Z overlap or are incomplete: {0}")]
    Colouring(#[from] ColouringError),
}

/// `(k+1)(d+4r+2l)`.
pub fn centred_extension_bound(k: usize, r: &Rational, ell: &Rational, d: &Rational) -> Rational {
    Rational::from_integer(k as i64 + 1) * (d + &(Rational::from_integer(4) * r) + Rational::from_integer(2) * ell)
}

/// Extends an `(m,r,d)`-colouring `c` of `G - Z` by an arbitrary colouring
/// of the centred set `Z`, returning the union and its certified bound.
///
/// `minus_z` may carry the already computed metric of `G - Z`. In test mode
/// the precondition is checked against it and the result is verified in `G`.
#[allow(clippy::too_many_arguments)]
pub fn extend_colouring_centred(
    g: &WeightedGraph,
    dist: &DistanceMatrix,
    minus_z: Option<&DistanceMatrix>,
    cs: &CentredSet,
    c: &Colouring,
    c_z: &Colouring,
    r: &Rational,
    d: &Rational,
    mode: Mode,
) -> Result<(Colouring, Rational), ExtendError> {
    let bound = centred_extension_bound(cs.k, r, &cs.ell, d);
    let restset: VertexSet = dist.vertices().iter().copied().filter(|v| !cs.z.contains(v)).collect();
    let rest: Vec<VertexId> = restset.iter().copied().collect();
    let z: Vec<VertexId> = cs.z.iter().copied().collect();
    if !rest.is_empty() {
        c.check_total(&rest)?;
    }
    if !z.is_empty() {
        c_z.check_total(&z)?;
    }
    let out = c.restrict(&restset).union(&c_z.restrict(&cs.z))?;
    if mode == Mode::Test {
        let own;
        let minus_z = match minus_z {
            Some(m) => m,
            None => {
                own = all_pairs_distances(&g.without(&cs.z));
                &own
            }
        };
        if !rest.is_empty() {
            let pre = verify_mrd(minus_z, &c.restrict(&restset), r, &Distance::finite(d.clone()))?;
            if let Some(v) = pre.violation {
                return Err(ExtendError::Precondition(v));
            }
        }
        let post = verify_mrd(dist, &out, r, &Distance::finite(bound.clone()))?;
        if let Some(v) = post.violation {
            return Err(ExtendError::Certificate(v));
        }
    }
    Ok((out, bound))
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BarrierError {
    #[error("a barrier needs at least two colours, got {0}")]
    TooFewColours(usize),
    #[error(transparent)]
    Colouring(#[from] ColouringError),
    #[error("vertex {0} near S has no same-coloured S vertex within r")]
    PropertyA(VertexId),
    #[error("the {which} annulus is not monochromatic")]
    NotMonochromatic { which: &'static str },
    #[error("both annuli use colour {0}")]
    SameColour(Colour),
    #[error("vertex {0} of the barrier zone is not coloured")]
    Uncoloured(VertexId),
}

/// A colouring of `Z ⊇ N^{3r}(S)` with an `(S,r)`-barrier.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BarrierColouring {
    pub colouring: Colouring,
    pub alpha: Colour,
    pub beta: Colour,
}

/// The annuli `N^r(S) \ S`, `N^{2r}(S) \ N^r(S)`, `N^{3r}(S) \ N^{2r}(S)`.
pub fn annuli(dist: &DistanceMatrix, s: &VertexSet, r: &Rational) -> [VertexSet; 3] {
    let n1 = dist.neighborhood(s, r);
    let n2 = dist.neighborhood(s, &(Rational::from_integer(2) * r));
    let n3 = dist.neighborhood(s, &(Rational::from_integer(3) * r));
    [&n1 - s, &n2 - &n1, &n3 - &n2]
}

/// Extends `c_s` to `N^{3r}(S) ∪ extra` so that it has an `(S,r)`-barrier:
/// the first annulus copies the nearest vertex of `S`, the second gets
/// colour 1, the third colour 2, and everything else colour 1.
pub fn build_barrier_colouring(
    dist: &DistanceMatrix,
    s: &VertexSet,
    r: &Rational,
    c_s: &Colouring,
    m: usize,
    extra: &VertexSet,
) -> Result<BarrierColouring, BarrierError> {
    if m < 2 {
        return Err(BarrierError::TooFewColours(m));
    }
    let sv: Vec<VertexId> = s.iter().copied().collect();
    c_s.check_total(&sv)?;
    let [a1, a2, a3] = annuli(dist, s, r);
    let mut c = c_s.restrict(s).with_colours(m);
    for &v in &a1 {
        let near = nearest(dist, v, s).unwrap();
        c.set(v, c_s.get(near).unwrap())?;
    }
    for &v in &a2 {
        c.set(v, 1)?;
    }
    for &v in &a3 {
        c.set(v, 2)?;
    }
    for &v in extra {
        if c.get(v).is_none() {
            c.set(v, 1)?;
        }
    }
    Ok(BarrierColouring { colouring: c, alpha: 1, beta: 2 })
}

/// Checks that `c` has an `(S,r)`-barrier in the graph with metric `dist`,
/// returning a witnessing pair of colours. Empty annuli impose nothing.
pub fn check_barrier(
    dist: &DistanceMatrix,
    s: &VertexSet,
    r: &Rational,
    c: &Colouring,
) -> Result<(Colour, Colour), BarrierError> {
    if c.colours() < 2 {
        return Err(BarrierError::TooFewColours(c.colours()));
    }
    let [a1, a2, a3] = annuli(dist, s, r);
    for &v in s.iter().chain(a1.iter()).chain(a2.iter()).chain(a3.iter()) {
        if c.get(v).is_none() {
            return Err(BarrierError::Uncoloured(v));
        }
    }
    for &v in &a1 {
        let ok = s.iter().any(|&x| dist.get(v, x).at_most(r) && c.get(x) == c.get(v));
        if !ok {
            return Err(BarrierError::PropertyA(v));
        }
    }
    let mono = |set: &VertexSet, which| -> Result<Option<Colour>, BarrierError> {
        let colours: VertexSet = set.iter().map(|&v| VertexId(c.get(v).unwrap() as u64)).collect();
        if colours.len() > 1 {
            return Err(BarrierError::NotMonochromatic { which });
        }
        Ok(colours.iter().next().map(|x| x.0 as Colour))
    };
    let alpha = mono(&a2, "second")?;
    let beta = mono(&a3, "third")?;
    match (alpha, beta) {
        (Some(a), Some(b)) if a == b => Err(BarrierError::SameColour(a)),
        (Some(a), Some(b)) => Ok((a, b)),
        (Some(a), None) => Ok((a, if a == 1 { 2 } else { 1 })),
        (None, Some(b)) => Ok((if b == 1 { 2 } else { 1 }, b)),
        (None, None) => Ok((1, 2)),
    }
}

/// One of the graphs `G_1, ..., G_a` being glued onto `G_0`.
#[derive(Clone, Debug)]
pub struct GluePiece {
    pub graph: WeightedGraph,
    pub colouring: Colouring,
    /// A centre of the separator `S_i`, of size at most `k` within `l`.
    pub centre: VertexSet,
}

/// Numeric parameters of the gluing.
#[derive(Clone, Debug)]
pub struct GlueParams {
    pub r: Rational,
    pub ell: Rational,
    pub k: usize,
    pub m: usize,
    pub d: Rational,
    pub big_d: Rational,
}

impl GlueParams {
    /// `l' = (k+1)(6r+2l)`.
    pub fn ell_prime(&self) -> Rational {
        Rational::from_integer(self.k as i64 + 1)
            * (Rational::from_integer(6) * &self.r + Rational::from_integer(2) * &self.ell)
    }

    /// `r' = 2r + 2l'`.
    pub fn r_prime(&self) -> Rational {
        Rational::from_integer(2) * (&self.r + &self.ell_prime())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GlueError {
    #[error("parameters: {0}")]
    Parameters(String),
    #[error("graph {index} is not a tight subgraph: {detail}")]
    NotTight { index: usize, detail: String },
    #[error("hypothesis (a): {0}")]
    Cover(String),
    #[error("hypothesis (b)(i): separator vertex {vertex} of piece {index} is not in G_0")]
    SeparatorOutside { index: usize, vertex: VertexId },
    #[error("hypothesis (b)(ii): piece {index}: {source}")]
    NotCentred { index: usize, source: CentredError },
    #[error("hypothesis (c): {0}")]
    BaseColouring(String),
    #[error("hypothesis (d)(i): piece {index}: {detail}")]
    PieceColouring { index: usize, detail: String },
    #[error("hypothesis (d)(ii): piece {index} disagrees with G_0 at {vertex}")]
    Disagree { index: usize, vertex: VertexId },
    #[error("hypothesis (d)(iii): piece {index}: {source}")]
    Barrier { index: usize, source: BarrierError },
    #[error("glued colouring exceeds D: {0:?}")]
    Output(MrdViolation),
    #[error(transparent)]
    Colouring(#[from] ColouringError),
}

fn check_subgraph(index: usize, sub: &WeightedGraph, g: &WeightedGraph, dist: &DistanceMatrix) -> Result<(), GlueError> {
    let err = |detail: String| GlueError::NotTight { index, detail };
    for (u, v, w) in sub.edges() {
        if g.weight(u, v) != Some(w) {
            return Err(err(format!("edge {u}-{v} is not an edge of G with the same weight")));
        }
    }
    match is_tight_in(sub, dist) {
        Ok(Tightness::Tight) => Ok(()),
        Ok(Tightness::Violated { u, v, sub, host }) => Err(err(format!("{u}-{v}: {sub} vs {host}"))),
        Err(e) => Err(err(e.to_string())),
    }
}

fn mrd_detail(dist: &DistanceMatrix, c: &Colouring, m: usize, r: &Rational, d: &Rational) -> Option<String> {
    if c.colours() > m || c.iter().any(|(_, col)| col > m) {
        return Some(format!("uses more than {m} colours"));
    }
    match verify_mrd(dist, c, r, &Distance::finite(d.clone())) {
        Ok(v) => v.violation.map(|v| format!("{v:?}")),
        Err(e) => Some(e.to_string()),
    }
}

/// Glues colourings of tight subgraphs `G_0, ..., G_a` covering `G` into an
/// `(m, r, D)`-colouring of `G`. In test mode every hypothesis is checked and
/// the result is verified.
pub fn glue_colourings(
    g: &WeightedGraph,
    dist: &DistanceMatrix,
    g0: &WeightedGraph,
    c0: &Colouring,
    pieces: &[GluePiece],
    params: &GlueParams,
    mode: Mode,
) -> Result<Colouring, GlueError> {
    if mode == Mode::Test {
        check_glue_hypotheses(g, dist, g0, c0, pieces, params)?;
    }
    let mut out = c0.restrict(&g0.vertex_set());
    for piece in pieces {
        out = out.union(&piece.colouring.restrict(&piece.graph.vertex_set()))?;
    }
    let out = out.with_colours(params.m);
    if mode == Mode::Test {
        let verdict = verify_mrd(dist, &out, &params.r, &Distance::finite(params.big_d.clone()))?;
        if let Some(v) = verdict.violation {
            return Err(GlueError::Output(v));
        }
    }
    Ok(out)
}

fn check_glue_hypotheses(
    g: &WeightedGraph,
    dist: &DistanceMatrix,
    g0: &WeightedGraph,
    c0: &Colouring,
    pieces: &[GluePiece],
    p: &GlueParams,
) -> Result<(), GlueError> {
    if p.k < 1 || p.m < 2 || !p.r.is_positive() || p.ell.is_negative() {
        return Err(GlueError::Parameters("need k >= 1, m >= 2, r > 0, l >= 0".into()));
    }
    let r_prime = p.r_prime();
    if p.big_d < &p.d + &(Rational::from_integer(2) * &r_prime) {
        return Err(GlueError::Parameters(format!("D = {} is below d + 2r' = {}", p.big_d, &p.d + &(Rational::from_integer(2) * &r_prime))));
    }
    check_subgraph(0, g0, g, dist)?;
    for (i, piece) in pieces.iter().enumerate() {
        check_subgraph(i + 1, &piece.graph, g, dist)?;
    }
    // (a)
    let graphs: Vec<&WeightedGraph> = std::iter::once(g0).chain(pieces.iter().map(|p| &p.graph)).collect();
    for v in g.vertices() {
        if !graphs.iter().any(|h| h.has_vertex(v)) {
            return Err(GlueError::Cover(format!("vertex {v} is in no G_i")));
        }
    }
    for (u, v, _) in g.edges() {
        if !graphs.iter().any(|h| h.has_edge(u, v)) {
            return Err(GlueError::Cover(format!("edge {u}-{v} is in no G_i")));
        }
    }
    // (c)
    let d0 = dist.restrict(&g0.vertex_set());
    if let Some(detail) = mrd_detail(&d0, &c0.restrict(&g0.vertex_set()), p.m, &r_prime, &p.d) {
        return Err(GlueError::BaseColouring(detail));
    }
    for (i, piece) in pieces.iter().enumerate() {
        let index = i + 1;
        let vi = piece.graph.vertex_set();
        let others: VertexSet = graphs
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != index)
            .flat_map(|(_, h)| h.vertices())
            .collect();
        let si: VertexSet = vi.intersection(&others).copied().collect();
        // (b)
        if let Some(&vertex) = si.iter().find(|v| !g0.has_vertex(**v)) {
            return Err(GlueError::SeparatorOutside { index, vertex });
        }
        CentredSet::new(dist, si.clone(), piece.centre.clone(), p.k, p.ell.clone())
            .map_err(|source| GlueError::NotCentred { index, source })?;
        // (d)
        let di = dist.restrict(&vi);
        let ci = piece.colouring.restrict(&vi);
        if let Some(detail) = mrd_detail(&di, &ci, p.m, &p.r, &p.big_d) {
            return Err(GlueError::PieceColouring { index, detail });
        }
        if let Some(&vertex) = si.iter().find(|&&v| ci.get(v) != c0.get(v)) {
            return Err(GlueError::Disagree { index, vertex });
        }
        check_barrier(&di, &si, &p.r, &ci.with_colours(p.m)).map_err(|source| GlueError::Barrier { index, source })?;
    }
    Ok(())
}
