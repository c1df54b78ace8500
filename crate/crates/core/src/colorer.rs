//! The recursive colouring of strongly-constructable graphs, its linear
//! control-function ladder, and the partition and treewidth pipelines.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::colouring::{verify_mrd, Colouring, ColouringError};
use crate::decomposition::{
    completion, exact_tree_decomposition, part_vertex, partition_strong_construction, singleton_strong_construction,
    strong_construction, validate_td, weighted_torso, NodeId, Partition, StrongConstruction, StrongError, TdViolation,
    TreeDecomposition, TreewidthError, DEFAULT_TREEWIDTH_LIMIT,
};
use crate::graph::{all_pairs_distances, is_tight_in, DistanceMatrix, VertexId, VertexSet, WeightedGraph};
use crate::rational::{Distance, Rational};
use crate::rerouting::{
    build_barrier_colouring, extend_colouring_centred, glue_colourings, BarrierError, CentredError, CentredSet,
    ExtendError, GlueError, GluePiece, GlueParams, Mode,
};

/// A dilation `r -> slope * r`, required to hold for `r >= ell`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ControlFunction {
    pub slope: Rational,
    pub ell: Rational,
}

impl ControlFunction {
    pub fn new(slope: Rational, ell: Rational) -> Self {
        assert!(slope.is_positive(), "a dilation needs a positive slope");
        ControlFunction { slope, ell }
    }

    pub fn eval(&self, r: &Rational) -> Rational {
        &self.slope * r
    }
}

/// Slopes of the auxiliary dilations at one level `k >= 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LadderStep {
    pub g_prime: Rational,
    pub g_star: Rational,
    pub f_star: Rational,
    pub f_sharp: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LadderLevel {
    pub k: usize,
    /// `None` at level 0.
    pub step: Option<LadderStep>,
    pub f: Rational,
}

/// Slopes of `f_0, ..., f_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ladder {
    pub levels: Vec<LadderLevel>,
}

impl Ladder {
    pub fn f(&self, k: usize) -> &Rational {
        &self.levels[k].f
    }

    pub fn step(&self, k: usize) -> &LadderStep {
        self.levels[k].step.as_ref().expect("level 0 has no step")
    }

    pub fn top(&self) -> &LadderLevel {
        self.levels.last().unwrap()
    }
}

/// The slopes of the recurrence
/// `g' = 8(k+1)`, `g* = 2g' + 2`, `f* = f_{k-1} g*`, `f# = (k+1)(f* + 4g* + 12)`,
/// `f_k = f# + 2g*`, starting from `f_0 = base`.
pub fn ladder(k: usize, base: &ControlFunction) -> Ladder {
    let int = |n: i64| Rational::from_integer(n);
    let mut levels = vec![LadderLevel { k: 0, step: None, f: base.slope.clone() }];
    for j in 1..=k {
        let j1 = int(j as i64 + 1);
        let g_prime = int(8) * &j1;
        let g_star = int(2) * &g_prime + int(2);
        let f_star = &levels[j - 1].f * &g_star;
        let f_sharp = &j1 * &(&f_star + &(int(4) * &g_star) + int(12));
        let f = &f_sharp + &(int(2) * &g_star);
        levels.push(LadderLevel { k: j, step: Some(LadderStep { g_prime, g_star, f_star, f_sharp }), f });
    }
    Ladder { levels }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ColorerError {
    #[error("r must be positive")]
    NonPositiveRadius,
    #[error("r = {r} is below the l-almost threshold l = {ell}")]
    RadiusBelowEll { r: Rational, ell: Rational },
    #[error("{size} separator parts exceed k = {k}")]
    TooManySeparatorParts { size: usize, k: usize },
    #[error("the separator parts are not all in bag {0}")]
    SeparatorOutsideBag(NodeId),
    #[error("the colouring of Z misses vertex {0}")]
    IncompleteZ(VertexId),
    #[error("a colouring of Z was given but Z is empty at level 0")]
    UnexpectedZ,
    #[error("base colorer: {0}")]
    Base(String),
    #[error("strong-construction: {0}")]
    Strong(#[from] StrongError),
    #[error("decomposition: {0}")]
    Decomposition(#[from] TdViolation),
    #[error(transparent)]
    Treewidth(#[from] TreewidthError),
    #[error("treewidth {width} exceeds k = {k}")]
    WidthExceeded { width: usize, k: usize },
    #[error("{step}: {detail}")]
    Step { step: &'static str, detail: String },
    #[error(transparent)]
    Colouring(#[from] ColouringError),
}

fn step<E: std::fmt::Display>(step: &'static str) -> impl Fn(E) -> ColorerError {
    move |e| ColorerError::Step { step, detail: e.to_string() }
}

/// A colorer for the graphs of the bag class: colours one bag torso with
/// `dimension() + 1` colours and weak diameter at most `control()(r)`.
pub trait BaseColorer {
    fn dimension(&self) -> usize;
    fn control(&self) -> &ControlFunction;
    /// `parts` lists the parts of the bag with a centre of each.
    fn colour(
        &self,
        torso: &WeightedGraph,
        dist: &DistanceMatrix,
        parts: &[(VertexSet, VertexId)],
        r: &Rational,
    ) -> Result<Colouring, ColorerError>;
}

/// Constant colouring of graphs whose vertex set is `(centres, l)`-centred;
/// weak diameter of the single component is at most `4(centres + 1) r` for
/// `r >= l`.
#[derive(Clone, Debug)]
pub struct CentredBaseColorer {
    pub centres: usize,
    control: ControlFunction,
}

impl CentredBaseColorer {
    pub fn new(centres: usize, ell: Rational) -> Self {
        let slope = Rational::from_integer(4 * (centres as i64 + 1));
        CentredBaseColorer { centres, control: ControlFunction::new(slope, ell) }
    }
}

impl BaseColorer for CentredBaseColorer {
    fn dimension(&self) -> usize {
        0
    }

    fn control(&self) -> &ControlFunction {
        &self.control
    }

    fn colour(
        &self,
        torso: &WeightedGraph,
        dist: &DistanceMatrix,
        parts: &[(VertexSet, VertexId)],
        r: &Rational,
    ) -> Result<Colouring, ColorerError> {
        let centre: VertexSet = parts.iter().map(|(_, c)| *c).collect();
        let z = torso.vertex_set();
        CentredSet::new(dist, z.clone(), centre, self.centres, self.control.ell.clone())
            .map_err(|e| ColorerError::Base(e.to_string()))?;
        let _ = r;
        Ok(Colouring::constant(1, z, 1))
    }
}

/// Exhaustive search for a centre of at most `k` vertices within `ell` of
/// every vertex, smallest sets first, lexicographic within a size.
pub fn find_centre(dist: &DistanceMatrix, k: usize, ell: &Rational, limit: usize) -> Option<VertexSet> {
    let verts = dist.vertices();
    if verts.len() > limit {
        return None;
    }
    fn rec(dist: &DistanceMatrix, ell: &Rational, start: usize, left: usize, chosen: &mut Vec<VertexId>) -> bool {
        let verts = dist.vertices();
        if verts.iter().all(|&v| chosen.iter().any(|&c| dist.get(v, c).at_most(ell))) {
            return true;
        }
        if left == 0 {
            return false;
        }
        for (i, &v) in verts.iter().enumerate().skip(start) {
            chosen.push(v);
            if rec(dist, ell, i + 1, left - 1, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    for size in 0..=k.min(verts.len()) {
        let mut chosen = Vec::new();
        if size == 0 && !verts.is_empty() {
            continue;
        }
        // search exactly up to `size` vertices
        if rec(dist, ell, 0, size, &mut chosen) {
            return Some(chosen.into_iter().collect());
        }
    }
    None
}

pub const DEFAULT_CENTRE_SEARCH_LIMIT: usize = 15;

/// Constant colouring of a graph whose vertex set is `(k+1, l)`-centred,
/// certified at `4(k+2) r`. Without explicit centres, a centre is searched
/// for on graphs of at most 15 vertices.
pub fn centred_base_colour(
    g: &WeightedGraph,
    dist: &DistanceMatrix,
    centres: Option<&VertexSet>,
    k: usize,
    ell: &Rational,
    r: &Rational,
) -> Result<(Colouring, Rational), ColorerError> {
    if r < ell {
        return Err(ColorerError::RadiusBelowEll { r: r.clone(), ell: ell.clone() });
    }
    let centre = match centres {
        Some(c) => c.clone(),
        None => find_centre(dist, k + 1, ell, DEFAULT_CENTRE_SEARCH_LIMIT)
            .ok_or_else(|| ColorerError::Base("no centre found within the search limit".into()))?,
    };
    CentredSet::new(dist, g.vertex_set(), centre, k + 1, ell.clone()).map_err(|e| ColorerError::Base(e.to_string()))?;
    let bound = Rational::from_integer(4 * (k as i64 + 2)) * r;
    Ok((Colouring::constant(1, g.vertices(), 1), bound))
}

/// The recursion state: a graph with its metric and a decomposition of its
/// quotient by the active parts.
struct Instance {
    g: WeightedGraph,
    dist: DistanceMatrix,
    td: TreeDecomposition,
}

struct Recursion<'a> {
    partition: &'a Partition,
    base: &'a dyn BaseColorer,
    ladder: Ladder,
    m: usize,
    mode: Mode,
}

fn part_ids(bag: &VertexSet) -> BTreeSet<usize> {
    bag.iter().map(|p| p.0 as usize).collect()
}

impl Recursion<'_> {
    fn union(&self, ids: &BTreeSet<usize>) -> VertexSet {
        self.partition.union_of(ids)
    }

    fn check(&self, dist: &DistanceMatrix, c: &Colouring, r: &Rational, bound: &Rational, what: &'static str) -> Result<(), ColorerError> {
        if self.mode == Mode::Test {
            let verdict = verify_mrd(dist, c, r, &Distance::finite(bound.clone()))?;
            if let Some(v) = verdict.violation {
                return Err(ColorerError::Step { step: what, detail: format!("{v:?}") });
            }
        }
        Ok(())
    }

    fn centre_of(&self, g: &WeightedGraph, part: usize) -> Result<VertexId, ColorerError> {
        let p = self.partition.part(part);
        Ok(all_pairs_distances(&g.induced(p)).radius_and_center().map_err(step("part centre"))?.1)
    }

    fn base_case(&self, inst: &Instance, r: &Rational, c_z: &Colouring) -> Result<Colouring, ColorerError> {
        if !c_z.is_empty() {
            return Err(ColorerError::UnexpectedZ);
        }
        let vtd = self.partition.lift(&inst.td);
        let mut out = Colouring::new(self.m);
        let mut seen = BTreeSet::new();
        for (t, bag) in inst.td.bags() {
            let ids = part_ids(bag);
            if ids.is_empty() {
                continue;
            }
            if let Some(p) = ids.iter().find(|p| !seen.insert(**p)) {
                return Err(ColorerError::Step { step: "base case", detail: format!("part {p} lies in two bags") });
            }
            let torso = weighted_torso(&inst.g, &inst.dist, &vtd, t);
            let tdist = inst.dist.restrict(&torso.vertex_set());
            let mut parts = Vec::with_capacity(ids.len());
            for &p in &ids {
                parts.push((self.partition.part(p).clone(), self.centre_of(&torso, p)?));
            }
            let c = self.base.colour(&torso, &tdist, &parts, r)?;
            self.check(&tdist, &c, r, &self.base.control().eval(r), "base colouring")?;
            out = out.union(&c.with_colours(self.m))?;
        }
        self.check(&inst.dist, &out, r, &(self.ladder.f(0) * r), "level 0")?;
        Ok(out)
    }

    fn colour(
        &self,
        k: usize,
        inst: Instance,
        r: &Rational,
        q: Option<NodeId>,
        sp: BTreeSet<usize>,
        c_z: Colouring,
    ) -> Result<Colouring, ColorerError> {
        if inst.g.is_empty() {
            return Ok(Colouring::new(self.m));
        }
        if sp.len() > k {
            return Err(ColorerError::TooManySeparatorParts { size: sp.len(), k });
        }
        if k == 0 {
            return self.base_case(&inst, r, &c_z);
        }
        let int = |n: i64| Rational::from_integer(n);
        let ls = self.ladder.step(k).clone();
        let f_k = self.ladder.f(k) * r;

        // work in the completion, which has the same metric
        let vtd = self.partition.lift(&inst.td);
        let ghat = completion(&inst.g, &inst.dist, &vtd);
        if self.mode == Mode::Test && !is_tight_in(&ghat, &inst.dist).map_err(step("completion"))?.is_tight() {
            return Err(ColorerError::Step { step: "completion", detail: "completion changed a distance".into() });
        }
        let dist = &inst.dist;

        // seed with the part of the smallest vertex
        let (sp, q, c_z, seeded) = if sp.is_empty() {
            let v0 = inst.g.vertices().next().unwrap();
            let p0 = self.partition.part_of(v0).unwrap();
            let q0 = inst.td.node_containing(part_vertex(p0)).unwrap();
            (BTreeSet::from([p0]), Some(q0), c_z, true)
        } else {
            (sp, q, c_z, false)
        };
        if let Some(q) = q {
            let bag = part_ids(inst.td.bag(q));
            if !sp.is_subset(&bag) {
                return Err(ColorerError::SeparatorOutsideBag(q));
            }
        }
        let s = self.union(&sp);
        let zp = self.partition.parts_of(&dist.neighborhood(&s, &(int(3) * r)));
        let z = self.union(&zp);
        let c_z = if seeded {
            Colouring::constant(self.m, z.iter().copied(), 1)
        } else {
            if let Some(&v) = z.iter().find(|&&v| c_z.get(v).is_none()) {
                return Err(ColorerError::IncompleteZ(v));
            }
            c_z.restrict(&z).with_colours(self.m)
        };

        // the core G' and the pieces G_e
        let t_prime: BTreeSet<NodeId> =
            inst.td.bags().filter(|(_, b)| part_ids(b).iter().any(|p| zp.contains(p))).map(|(t, _)| t).collect();
        let v_prime = self.union(&t_prime.iter().flat_map(|&t| part_ids(inst.td.bag(t))).collect::<BTreeSet<usize>>());
        let g_prime = ghat.induced(&v_prime);
        let d_prime = dist.restrict(&v_prime);

        let core_vertices: VertexSet = v_prime.difference(&z).copied().collect();
        let g_core = ghat.induced(&core_vertices);
        let d_core = all_pairs_distances(&g_core);
        let td_core = inst.td.restrict(&t_prime, |b| b.iter().filter(|p| !zp.contains(&(p.0 as usize))).copied().collect());
        let r_core = &ls.g_star * r;
        let c_core = self.colour(
            k - 1,
            Instance { g: g_core, dist: d_core.clone(), td: td_core },
            &r_core,
            None,
            BTreeSet::new(),
            Colouring::new(self.m),
        )?;

        let mut s_star = VertexSet::new();
        for &p in &sp {
            s_star.insert(self.centre_of(&g_prime, p)?);
        }
        let cs = CentredSet::new(&d_prime, z.clone(), s_star, k, int(6) * r)
            .map_err(|e: CentredError| ColorerError::Step { step: "Z is (k,6r)-centred", detail: e.to_string() })?;
        let (c_core_ext, bound) = extend_colouring_centred(
            &g_prime,
            &d_prime,
            Some(&d_core),
            &cs,
            &c_core,
            &c_z,
            &r_core,
            &(&ls.f_star * r),
            self.mode,
        )
        .map_err(|e: ExtendError| ColorerError::Step { step: "extension over Z", detail: e.to_string() })?;
        debug_assert_eq!(bound, &ls.f_sharp * r);

        // pieces in ascending order of their attachment node
        let mut boundary: Vec<(NodeId, NodeId)> = t_prime
            .iter()
            .flat_map(|&t| inst.td.neighbours(t).filter(|u| !t_prime.contains(u)).map(move |u| (u, t)))
            .collect();
        boundary.sort();
        let outside: BTreeSet<NodeId> = inst.td.nodes().filter(|t| !t_prime.contains(t)).collect();
        let components = inst.td.node_components(&outside);
        let mut pieces = Vec::with_capacity(boundary.len());
        for (q_e, t) in boundary {
            let t_e = components.iter().find(|c| c.contains(&q_e)).unwrap();
            let v_e = self.union(&t_e.iter().flat_map(|&x| part_ids(inst.td.bag(x))).collect::<BTreeSet<usize>>());
            let g_e = ghat.induced(&v_e);
            let d_e = dist.restrict(&v_e);
            let se_p: BTreeSet<usize> = part_ids(inst.td.bag(t)).intersection(&part_ids(inst.td.bag(q_e))).copied().collect();
            let s_e = self.union(&se_p);
            let zp_e = self.partition.parts_of(&d_e.neighborhood(&s_e, &(int(3) * r)));
            let z_e = self.union(&zp_e);
            let barrier = build_barrier_colouring(&d_e, &s_e, r, &c_core_ext.restrict(&s_e), self.m, &z_e)
                .map_err(|e: BarrierError| ColorerError::Step { step: "barrier", detail: e.to_string() })?;
            let mut centre = VertexSet::new();
            for &p in &se_p {
                centre.insert(self.centre_of(&g_e, p)?);
            }
            let td_e = inst.td.restrict(t_e, |b| b.clone());
            let c_e = self.colour(
                k,
                Instance { g: g_e.clone(), dist: d_e, td: td_e },
                r,
                Some(q_e),
                se_p,
                barrier.colouring,
            )?;
            pieces.push(GluePiece { graph: g_e, colouring: c_e, centre });
        }

        let params = GlueParams { r: r.clone(), ell: r.clone(), k, m: self.m, d: &ls.f_sharp * r, big_d: f_k };
        let out = glue_colourings(&ghat, dist, &g_prime, &c_core_ext, &pieces, &params, self.mode)
            .map_err(|e: GlueError| ColorerError::Step { step: "gluing", detail: e.to_string() })?;
        if self.mode == Mode::Test && !out.extends(&c_z) {
            return Err(ColorerError::Step { step: "gluing", detail: "output does not extend c_Z".into() });
        }
        Ok(out)
    }
}

/// A colouring with the bound it is certified for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certified {
    pub colouring: Colouring,
    pub r: Rational,
    pub bound: Rational,
    pub ladder: Ladder,
}

/// Extends `c_z` (a colouring of the parts meeting `N^{3r}(∪SP)`) to an
/// `(n'+1, r, f_k(r))`-colouring of `G`, `n' = max(n, 1)`.
#[allow(clippy::too_many_arguments)]
pub fn strong_construction_colour(
    g: &WeightedGraph,
    dist: &DistanceMatrix,
    sc: &StrongConstruction,
    base: &dyn BaseColorer,
    r: &Rational,
    q: Option<NodeId>,
    sp: &BTreeSet<usize>,
    c_z: &Colouring,
    mode: Mode,
) -> Result<Certified, ColorerError> {
    if !r.is_positive() {
        return Err(ColorerError::NonPositiveRadius);
    }
    if *r < sc.ell || *r < base.control().ell {
        return Err(ColorerError::RadiusBelowEll { r: r.clone(), ell: sc.ell.clone().max(base.control().ell.clone()) });
    }
    if mode == Mode::Test {
        sc.validate(g)?;
    }
    let ladder = ladder(sc.k, base.control());
    let m = base.dimension().max(1) + 1;
    let rec = Recursion { partition: &sc.partition, base, ladder: ladder.clone(), m, mode };
    let inst = Instance { g: g.clone(), dist: dist.clone(), td: sc.td.clone() };
    let colouring = rec.colour(sc.k, inst, r, q, sp.clone(), c_z.clone())?;
    let bound = ladder.f(sc.k) * r;
    if mode == Mode::Test {
        let verdict = verify_mrd(dist, &colouring, r, &Distance::finite(bound.clone()))?;
        if let Some(v) = verdict.violation {
            return Err(ColorerError::Step { step: "final verification", detail: format!("{v:?}") });
        }
    }
    Ok(Certified { colouring, r: r.clone(), bound, ladder })
}

/// Two-colouring of a graph with a `(k, l)`-partition, certified at `f_k(r)`
/// for the base slope `4(k+2)`.
#[allow(clippy::too_many_arguments)]
pub fn colour_partitioned(
    g: &WeightedGraph,
    dist: &DistanceMatrix,
    p: Partition,
    td: TreeDecomposition,
    k: usize,
    ell: &Rational,
    r: &Rational,
    mode: Mode,
) -> Result<Certified, ColorerError> {
    if *r < *ell {
        return Err(ColorerError::RadiusBelowEll { r: r.clone(), ell: ell.clone() });
    }
    let sc = partition_strong_construction(g, p, td, k, ell.clone())?;
    let base = CentredBaseColorer::new(k + 1, ell.clone());
    strong_construction_colour(g, dist, &sc, &base, r, None, &BTreeSet::new(), &Colouring::new(2), mode)
}

/// Two-colouring of a graph of treewidth at most `k`, certified at `f_k(r)`.
/// Without a decomposition one is computed exactly for small graphs.
pub fn colour_bounded_treewidth(
    g: &WeightedGraph,
    dist: &DistanceMatrix,
    td: Option<&TreeDecomposition>,
    k: usize,
    r: &Rational,
    mode: Mode,
) -> Result<Certified, ColorerError> {
    let owned;
    let td = match td {
        Some(td) => td,
        None => {
            owned = exact_tree_decomposition(g, DEFAULT_TREEWIDTH_LIMIT)?;
            &owned
        }
    };
    let width = validate_td(g, td)?.width;
    if width > k {
        return Err(ColorerError::WidthExceeded { width, k });
    }
    let sc = singleton_strong_construction(g, td, k)?;
    let base = CentredBaseColorer::new(k + 1, Rational::zero());
    strong_construction_colour(g, dist, &sc, &base, r, None, &BTreeSet::new(), &Colouring::new(2), mode)
}

/// Colouring through a decomposition of adhesion at most `k` whose bag
/// torsos the given base colorer handles.
pub fn colour_constructable(
    g: &WeightedGraph,
    dist: &DistanceMatrix,
    td: &TreeDecomposition,
    k: usize,
    base: &dyn BaseColorer,
    r: &Rational,
    mode: Mode,
) -> Result<Certified, ColorerError> {
    let summary = validate_td(g, td)?;
    if summary.adhesion > k {
        return Err(StrongError::Adhesion { adhesion: summary.adhesion, k }.into());
    }
    let p = Partition::singletons(g);
    let qtd = td.restrict(&td.nodes().collect(), |b| b.iter().map(|&v| part_vertex(p.part_of(v).unwrap())).collect());
    let sc = strong_construction(g, p, qtd, k, Rational::zero())?;
    strong_construction_colour(g, dist, &sc, base, r, None, &BTreeSet::new(), &Colouring::new(2), mode)
}

/// Colouring through an arbitrary shallow partition whose quotient
/// decomposition has adhesion at most `k`; bags are centred by their part
/// centres, so the base slope is `4(b+1)` for the largest bag size `b`.
#[allow(clippy::too_many_arguments)]
pub fn colour_strong(
    g: &WeightedGraph,
    dist: &DistanceMatrix,
    p: Partition,
    td: TreeDecomposition,
    k: usize,
    ell: &Rational,
    r: &Rational,
    mode: Mode,
) -> Result<Certified, ColorerError> {
    let sc = strong_construction(g, p, td, k, ell.clone())?;
    let base = CentredBaseColorer::new(sc.centres_per_bag, ell.clone());
    strong_construction_colour(g, dist, &sc, &base, r, None, &BTreeSet::new(), &Colouring::new(2), mode)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colouring::{brute_force_optimal_d, monochromatic_components};
    use proptest::prelude::*;

    fn v(i: u64) -> VertexId {
        VertexId(i)
    }

    fn int(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    fn unit(edges: &[(u64, u64)], n: u64) -> WeightedGraph {
        let mut g = WeightedGraph::with_vertices((0..n).map(v));
        for &(a, b) in edges {
            g.add_edge(v(a), v(b), Distance::finite(1)).unwrap();
        }
        g
    }

    fn path(n: u64) -> WeightedGraph {
        unit(&(1..n).map(|i| (i - 1, i)).collect::<Vec<_>>(), n)
    }

    fn tree_td(g: &WeightedGraph) -> TreeDecomposition {
        // one bag per edge, attached through the parent edge
        let edges: Vec<(VertexId, VertexId)> = g.edges().map(|(a, b, _)| (a, b)).collect();
        if edges.is_empty() {
            return TreeDecomposition::new(g.vertices().enumerate().map(|(i, x)| (i, VertexSet::from([x]))), (1..g.vertex_count()).map(|i| (i - 1, i))).unwrap();
        }
        crate::decomposition::elimination_decomposition(g, &elim_leaves(g))
    }

    fn elim_leaves(g: &WeightedGraph) -> Vec<VertexId> {
        let mut h = g.clone();
        let mut order = Vec::new();
        while !h.is_empty() {
            let leaf = h.vertices().find(|&x| h.degree(x) <= 1).unwrap();
            order.push(leaf);
            let rest: VertexSet = h.vertices().filter(|&x| x != leaf).collect();
            h = h.induced(&rest);
        }
        order
    }

    #[test]
    fn ladder_values() {
        let l = ladder(1, &ControlFunction::new(int(12), int(0)));
        let s = l.step(1);
        assert_eq!((&s.g_prime, &s.g_star, &s.f_star, &s.f_sharp), (&int(16), &int(34), &int(408), &int(1112)));
        assert_eq!(l.f(1), &int(1180));
        let l = ladder(2, &ControlFunction::new(int(16), int(0)));
        assert_eq!(l.f(1), &int(1452));
        let s = l.step(2);
        assert_eq!((&s.g_prime, &s.g_star, &s.f_star, &s.f_sharp), (&int(24), &int(50), &int(72600), &int(218436)));
        assert_eq!(l.f(2), &int(218536));
        assert_eq!(ladder(0, &ControlFunction::new(int(7), int(0))).f(0), &int(7));
    }

    #[test]
    fn centred_base_examples() {
        let single = WeightedGraph::with_vertices([v(0)]);
        let d = all_pairs_distances(&single);
        let (c, bound) = centred_base_colour(&single, &d, None, 0, &int(0), &int(1)).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(bound, int(8));

        let star = unit(&[(0, 1), (0, 2), (0, 3)], 4);
        let d = all_pairs_distances(&star);
        let (c, bound) = centred_base_colour(&star, &d, None, 0, &int(1), &int(1)).unwrap();
        let rep = monochromatic_components(&d, &c, &int(1)).unwrap();
        assert_eq!(rep.max_weak_diameter(), Distance::finite(2));
        assert!(Distance::finite(2).at_most(&bound));

        // two centres at distance 2r with l = 0
        let two = unit(&[(0, 1), (1, 2)], 3);
        let sub = two.induced(&[v(0), v(2)].into_iter().collect());
        let d = all_pairs_distances(&two).restrict(&sub.vertex_set());
        let (c, bound) = centred_base_colour(&sub, &d, None, 1, &int(0), &int(1)).unwrap();
        assert_eq!(bound, int(12));
        assert!(verify_mrd(&d, &c, &int(1), &Distance::finite(12)).unwrap().passed());
        assert!(brute_force_optimal_d(&d, 1, &int(1), 9).unwrap() <= Distance::finite(12));

        assert!(centred_base_colour(&star, &all_pairs_distances(&star), None, 0, &int(0), &int(1)).is_err());
        assert!(matches!(
            centred_base_colour(&star, &all_pairs_distances(&star), None, 0, &int(2), &int(1)),
            Err(ColorerError::RadiusBelowEll { .. })
        ));
    }

    #[test]
    fn path_of_six() {
        let g = path(6);
        let d = all_pairs_distances(&g);
        let td = tree_td(&g);
        let cert = colour_bounded_treewidth(&g, &d, Some(&td), 1, &int(1), Mode::Test).unwrap();
        assert_eq!(cert.bound, int(1180));
        assert_eq!(cert.colouring.len(), 6);
        assert!(cert.colouring.iter().all(|(_, c)| c == 1 || c == 2));
        let achieved = verify_mrd(&d, &cert.colouring, &int(1), &Distance::finite(1180)).unwrap();
        assert!(achieved.passed());
        assert!(brute_force_optimal_d(&d, 2, &int(1), 9).unwrap() <= achieved.report.max_weak_diameter());
    }

    #[test]
    fn empty_and_edgeless() {
        let empty = WeightedGraph::new();
        let d = all_pairs_distances(&empty);
        let sc = singleton_strong_construction(&empty, &TreeDecomposition::default(), 1).unwrap();
        let base = CentredBaseColorer::new(2, int(0));
        let cert = strong_construction_colour(&empty, &d, &sc, &base, &int(1), None, &BTreeSet::new(), &Colouring::new(2), Mode::Test).unwrap();
        assert!(cert.colouring.is_empty());

        let edgeless = WeightedGraph::with_vertices((0..4).map(v));
        let d = all_pairs_distances(&edgeless);
        let cert = colour_bounded_treewidth(&edgeless, &d, None, 0, &int(1), Mode::Test).unwrap();
        assert_eq!(cert.bound, int(8));
        let rep = monochromatic_components(&d, &cert.colouring, &int(1)).unwrap();
        assert_eq!(rep.components.len(), 4);
    }

    #[test]
    fn pipelines() {
        let g = path(50);
        let d = all_pairs_distances(&g);
        let cert = colour_bounded_treewidth(&g, &d, Some(&tree_td(&g)), 1, &int(5), Mode::Test).unwrap();
        assert_eq!(cert.bound, int(5900));

        let star = unit(&(1..=10).map(|i| (0, i)).collect::<Vec<_>>(), 11);
        let d = all_pairs_distances(&star);
        let cert = colour_bounded_treewidth(&star, &d, Some(&tree_td(&star)), 1, &int(1), Mode::Test).unwrap();
        let rep = monochromatic_components(&d, &cert.colouring, &int(1)).unwrap();
        assert!(rep.max_weak_diameter() <= Distance::finite(2));

        // rows of the 5x5 grid
        let m = 5u64;
        let mut edges = Vec::new();
        for i in 0..m {
            for j in 0..m {
                if j + 1 < m {
                    edges.push((i * m + j, i * m + j + 1));
                }
                if i + 1 < m {
                    edges.push((i * m + j, (i + 1) * m + j));
                }
            }
        }
        let g = unit(&edges, m * m);
        let d = all_pairs_distances(&g);
        let rows = Partition::new((0..m).map(|i| (0..m).map(|j| v(i * m + j)).collect()).collect()).unwrap();
        let td = TreeDecomposition::new(
            (0..m as usize - 1).map(|i| (i, [part_vertex(i), part_vertex(i + 1)].into_iter().collect())),
            (1..m as usize - 1).map(|i| (i - 1, i)),
        )
        .unwrap();
        let cert = colour_partitioned(&g, &d, rows.clone(), td.clone(), 1, &int(4), &int(4), Mode::Test).unwrap();
        assert_eq!(cert.bound, int(1180 * 4));
        assert!(matches!(
            colour_partitioned(&g, &d, rows, td, 1, &int(4), &int(3), Mode::Test),
            Err(ColorerError::RadiusBelowEll { .. })
        ));

        // one part, k = 0
        let one = Partition::new(vec![g.vertex_set()]).unwrap();
        let cert = colour_partitioned(&g, &d, one, TreeDecomposition::trivial([part_vertex(0)].into_iter().collect()), 0, &int(4), &int(4), Mode::Test).unwrap();
        assert_eq!(cert.bound, int(32));
        assert!(cert.colouring.iter().all(|(_, c)| c == 1));
    }

    #[test]
    fn extends_given_colouring() {
        let g = path(12);
        let d = all_pairs_distances(&g);
        let td = tree_td(&g);
        let sc = singleton_strong_construction(&g, &td, 1).unwrap();
        let base = CentredBaseColorer::new(2, int(0));
        // separator: the part of vertex 5, in some bag
        let p5 = sc.partition.part_of(v(5)).unwrap();
        let q = sc.td.node_containing(part_vertex(p5)).unwrap();
        let r = int(1);
        let z = d.neighborhood(&VertexSet::from([v(5)]), &int(3));
        let c_z = Colouring::from_pairs(2, z.iter().map(|&x| (x, if x.0 % 3 == 0 { 2 } else { 1 }))).unwrap();
        let cert = strong_construction_colour(&g, &d, &sc, &base, &r, Some(q), &BTreeSet::from([p5]), &c_z, Mode::Test).unwrap();
        assert!(cert.colouring.extends(&c_z));
    }

    fn arb_tree() -> impl Strategy<Value = WeightedGraph> {
        (1u64..25, prop::collection::vec(0u64..1000, 24), prop::collection::vec(1i64..4, 24)).prop_map(|(n, parents, w)| {
            let mut g = WeightedGraph::with_vertices((0..n).map(v));
            for i in 1..n {
                g.add_edge(v(parents[i as usize - 1] % i), v(i), Distance::finite(w[i as usize - 1])).unwrap();
            }
            g
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn weighted_trees_are_certified(g in arb_tree(), r in 1i64..4) {
            let d = all_pairs_distances(&g);
            let r = int(r);
            let td = tree_td(&g);
            let k = td.width().max(1);
            let cert = colour_bounded_treewidth(&g, &d, Some(&td), k, &r, Mode::Test).unwrap();
            prop_assert_eq!(&cert.bound, &(ladder(k, &ControlFunction::new(int(4 * (k as i64 + 2)), int(0))).f(k) * &r));
            prop_assert!(verify_mrd(&d, &cert.colouring, &r, &Distance::finite(cert.bound.clone())).unwrap().passed());
            let fast = colour_bounded_treewidth(&g, &d, Some(&td), k, &r, Mode::Fast).unwrap();
            prop_assert_eq!(fast.colouring, cert.colouring);
        }

        #[test]
        fn bound_is_a_dilation(r in 1i64..50) {
            let l = ladder(2, &ControlFunction::new(int(16), int(0)));
            let once = l.f(2) * &int(r);
            prop_assert_eq!(l.f(2) * &int(2 * r), &int(2) * &once);
        }
    }
}
