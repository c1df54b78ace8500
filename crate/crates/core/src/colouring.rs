//! Colourings, monochromatic `r`-components and `(m, r, d)` verification.
//!
//! Every check here is measured in the metric of the host graph, given as a
//! [`DistanceMatrix`]; the matrix's vertex set is taken as the vertex set of
//! the graph being coloured.

use std::collections::{BTreeMap, VecDeque};

use petgraph::unionfind::UnionFind;
use thiserror::Error;

use crate::graph::{DistanceMatrix, VertexId, VertexSet};
use crate::rational::{Distance, Rational};

pub type Colour = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ColouringError {
    #[error("colour {colour} of vertex {vertex} is outside 1..={max}")]
    OutOfRange { vertex: VertexId, colour: Colour, max: usize },
    #[error("vertex {0} is not coloured")]
    Uncoloured(VertexId),
    #[error("vertex {vertex} coloured both {a} and {b}")]
    Conflict { vertex: VertexId, a: Colour, b: Colour },
    #[error("a colouring needs at least one colour")]
    NoColours,
    #[error("vertex {0} is not covered by any set of the cover")]
    Uncovered(VertexId),
    #[error("{vertices} vertices exceed the brute-force limit of {limit}")]
    LimitExceeded { vertices: usize, limit: usize },
}

/// A map from vertices to colours `1..=m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Colouring {
    colours: usize,
    assignment: BTreeMap<VertexId, Colour>,
}

impl Colouring {
    pub fn new(colours: usize) -> Self {
        Colouring { colours, assignment: BTreeMap::new() }
    }

    pub fn constant(colours: usize, vertices: impl IntoIterator<Item = VertexId>, colour: Colour) -> Self {
        let mut c = Self::new(colours);
        for v in vertices {
            c.assignment.insert(v, colour);
        }
        c
    }

    pub fn from_pairs(
        colours: usize,
        pairs: impl IntoIterator<Item = (VertexId, Colour)>,
    ) -> Result<Self, ColouringError> {
        let mut c = Self::new(colours);
        for (v, col) in pairs {
            c.set(v, col)?;
        }
        Ok(c)
    }

    pub fn colours(&self) -> usize {
        self.colours
    }

    /// Reinterprets the colouring over a larger palette.
    pub fn with_colours(mut self, colours: usize) -> Self {
        self.colours = self.colours.max(colours);
        self
    }

    pub fn set(&mut self, v: VertexId, colour: Colour) -> Result<(), ColouringError> {
        if colour == 0 || colour > self.colours {
            return Err(ColouringError::OutOfRange { vertex: v, colour, max: self.colours });
        }
        self.assignment.insert(v, colour);
        Ok(())
    }

    pub fn get(&self, v: VertexId) -> Option<Colour> {
        self.assignment.get(&v).copied()
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    pub fn domain(&self) -> VertexSet {
        self.assignment.keys().copied().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (VertexId, Colour)> + '_ {
        self.assignment.iter().map(|(&v, &c)| (v, c))
    }

    pub fn restrict(&self, set: &VertexSet) -> Colouring {
        Colouring {
            colours: self.colours,
            assignment: self
                .assignment
                .iter()
                .filter(|(v, _)| set.contains(v))
                .map(|(&v, &c)| (v, c))
                .collect(),
        }
    }

    /// Whether `self` agrees with `other` on every vertex of `other`.
    pub fn extends(&self, other: &Colouring) -> bool {
        other.iter().all(|(v, c)| self.get(v) == Some(c))
    }

    /// The union of two colourings that agree on their common domain.
    pub fn union(&self, other: &Colouring) -> Result<Colouring, ColouringError> {
        let mut out = self.clone().with_colours(other.colours);
        for (v, c) in other.iter() {
            match out.get(v) {
                Some(a) if a != c => return Err(ColouringError::Conflict { vertex: v, a, b: c }),
                _ => {
                    out.assignment.insert(v, c);
                }
            }
        }
        Ok(out)
    }

    /// Checks totality on `vertices` and the colour range.
    pub fn check_total(&self, vertices: &[VertexId]) -> Result<(), ColouringError> {
        if self.colours == 0 {
            return Err(ColouringError::NoColours);
        }
        for &v in vertices {
            match self.get(v) {
                None => return Err(ColouringError::Uncoloured(v)),
                Some(c) if c == 0 || c > self.colours => {
                    return Err(ColouringError::OutOfRange { vertex: v, colour: c, max: self.colours })
                }
                Some(_) => {}
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub id: usize,
    pub colour: Colour,
    pub vertices: VertexSet,
    pub weak_diameter: Distance,
}

/// The monochromatic `r`-components of a colouring, ordered by smallest vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentReport {
    pub r: Rational,
    pub components: Vec<Component>,
}

impl ComponentReport {
    pub fn max_weak_diameter(&self) -> Distance {
        self.components.iter().map(|c| c.weak_diameter.clone()).max().unwrap_or_else(Distance::zero)
    }

    /// Components as a partition, for comparing two reports.
    pub fn partition(&self) -> Vec<VertexSet> {
        self.components.iter().map(|c| c.vertices.clone()).collect()
    }

    pub fn component_of(&self, v: VertexId) -> Option<&Component> {
        self.components.iter().find(|c| c.vertices.contains(&v))
    }
}

fn build_report(dist: &DistanceMatrix, c: &Colouring, r: &Rational, groups: Vec<VertexSet>) -> ComponentReport {
    let mut groups = groups;
    groups.sort_by_key(|g| *g.iter().next().unwrap());
    let components = groups
        .into_iter()
        .enumerate()
        .map(|(id, vertices)| {
            let first = *vertices.iter().next().unwrap();
            let weak_diameter = dist.weak_diameter(&vertices).expect("component is nonempty");
            Component { id, colour: c.get(first).unwrap(), vertices, weak_diameter }
        })
        .collect();
    ComponentReport { r: r.clone(), components }
}

/// Monochromatic `r`-components via union-find over same-coloured pairs at
/// distance at most `r`.
pub fn monochromatic_components(
    dist: &DistanceMatrix,
    c: &Colouring,
    r: &Rational,
) -> Result<ComponentReport, ColouringError> {
    let verts = dist.vertices();
    c.check_total(verts)?;
    let colour: Vec<Colour> = verts.iter().map(|&v| c.get(v).unwrap()).collect();
    let n = verts.len();
    let mut uf = UnionFind::<usize>::new(n);
    for i in 0..n {
        for j in i + 1..n {
            if colour[i] == colour[j] && dist.at(i, j).at_most(r) {
                uf.union(i, j);
            }
        }
    }
    let mut groups: BTreeMap<usize, VertexSet> = BTreeMap::new();
    for (i, &v) in verts.iter().enumerate() {
        groups.entry(uf.find(i)).or_default().insert(v);
    }
    Ok(build_report(dist, c, r, groups.into_values().collect()))
}

/// The same components found by breadth-first search in the colour-restricted
/// `r`-th power. Kept as an independent cross-check.
pub fn monochromatic_components_bfs(
    dist: &DistanceMatrix,
    c: &Colouring,
    r: &Rational,
) -> Result<ComponentReport, ColouringError> {
    let verts = dist.vertices();
    c.check_total(verts)?;
    let n = verts.len();
    let mut seen = vec![false; n];
    let mut groups = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let col = c.get(verts[start]).unwrap();
        let mut group = VertexSet::new();
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        while let Some(x) = queue.pop_front() {
            group.insert(verts[x]);
            for y in 0..n {
                if !seen[y] && c.get(verts[y]) == Some(col) && dist.at(x, y).at_most(r) {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        groups.push(group);
    }
    Ok(build_report(dist, c, r, groups))
}

/// A component whose weak diameter exceeds the bound, with a witness pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MrdViolation {
    pub component: usize,
    pub u: VertexId,
    pub v: VertexId,
    pub distance: Distance,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MrdVerdict {
    pub report: ComponentReport,
    pub violation: Option<MrdViolation>,
}

impl MrdVerdict {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

/// Checks that `c` is an `(m, r, d)`-colouring: every monochromatic
/// `r`-component has weak diameter at most `d`.
pub fn verify_mrd(
    dist: &DistanceMatrix,
    c: &Colouring,
    r: &Rational,
    d: &Distance,
) -> Result<MrdVerdict, ColouringError> {
    let report = monochromatic_components(dist, c, r)?;
    let violation = report.components.iter().find(|comp| comp.weak_diameter > *d).map(|comp| {
        let (u, v, distance) = dist.farthest_pair(&comp.vertices).unwrap();
        MrdViolation { component: comp.id, u, v, distance }
    });
    Ok(MrdVerdict { report, violation })
}

/// `m` collections of vertex sets, each collection `r`-disjoint, covering the
/// graph, every set of weak diameter at most `bound`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseCover {
    pub collections: Vec<Vec<VertexSet>>,
    pub r: Rational,
    pub bound: Distance,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoverViolation {
    #[error("vertex {0} is not covered")]
    Uncovered(VertexId),
    #[error("collection {collection}: vertices {u} and {v} of different sets are within distance r")]
    NotDisjoint { collection: usize, u: VertexId, v: VertexId },
    #[error("collection {collection}: a set has weak diameter {diameter} above the bound")]
    TooWide { collection: usize, diameter: Distance },
    #[error("collection {0} contains an empty set")]
    EmptySet(usize),
}

impl SparseCover {
    /// Checks the covering, `r`-disjointness and diameter conditions.
    pub fn check(&self, dist: &DistanceMatrix) -> Result<(), CoverViolation> {
        for &v in dist.vertices() {
            if !self.collections.iter().flatten().any(|s| s.contains(&v)) {
                return Err(CoverViolation::Uncovered(v));
            }
        }
        for (ci, coll) in self.collections.iter().enumerate() {
            for (a, s) in coll.iter().enumerate() {
                let diameter = dist.weak_diameter(s).map_err(|_| CoverViolation::EmptySet(ci))?;
                if diameter > self.bound {
                    return Err(CoverViolation::TooWide { collection: ci, diameter });
                }
                for t in &coll[a + 1..] {
                    for &u in s {
                        for &v in t {
                            if dist.get(u, v).at_most(&self.r) {
                                return Err(CoverViolation::NotDisjoint { collection: ci, u, v });
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Collection `i` holds the vertex sets of the `i`-monochromatic
/// `r`-components; the bound is the largest component weak diameter.
pub fn colouring_to_cover(
    dist: &DistanceMatrix,
    c: &Colouring,
    r: &Rational,
) -> Result<SparseCover, ColouringError> {
    let report = monochromatic_components(dist, c, r)?;
    let mut collections = vec![Vec::new(); c.colours()];
    for comp in &report.components {
        collections[comp.colour - 1].push(comp.vertices.clone());
    }
    Ok(SparseCover { collections, r: r.clone(), bound: report.max_weak_diameter() })
}

/// Colours each vertex by the smallest index of a collection containing it.
pub fn cover_to_colouring(dist: &DistanceMatrix, cover: &SparseCover) -> Result<Colouring, ColouringError> {
    let m = cover.collections.len();
    if m == 0 {
        return Err(ColouringError::NoColours);
    }
    let mut c = Colouring::new(m);
    for &v in dist.vertices() {
        let idx = cover
            .collections
            .iter()
            .position(|coll| coll.iter().any(|s| s.contains(&v)))
            .ok_or(ColouringError::Uncovered(v))?;
        c.set(v, idx + 1)?;
    }
    Ok(c)
}

pub const DEFAULT_BRUTE_FORCE_LIMIT: usize = 9;

/// Least `d` such that some `m`-colouring is an `(m, r, d)`-colouring, by
/// exhaustive enumeration with the first vertex's colour fixed.
pub fn brute_force_optimal_d(
    dist: &DistanceMatrix,
    m: usize,
    r: &Rational,
    limit: usize,
) -> Result<Distance, ColouringError> {
    let n = dist.len();
    if m == 0 {
        return Err(ColouringError::NoColours);
    }
    if n > limit {
        return Err(ColouringError::LimitExceeded { vertices: n, limit });
    }
    if n == 0 {
        return Ok(Distance::zero());
    }
    // rank distances so the inner loop compares integers
    let mut values: Vec<Distance> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| dist.at(i, j).clone()).collect();
    values.sort();
    values.dedup();
    let rank: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..n).map(|j| values.binary_search(dist.at(i, j)).unwrap()).collect())
        .collect();
    let close: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| dist.at(i, j).at_most(r)).collect()).collect();

    let mut colours = vec![0usize; n];
    let mut best = usize::MAX;
    let total = m.pow((n - 1) as u32);
    let mut comp = vec![usize::MAX; n];
    let mut stack = Vec::with_capacity(n);
    for code in 0..total {
        let mut x = code;
        for slot in colours.iter_mut().skip(1) {
            *slot = x % m;
            x /= m;
        }
        comp.iter_mut().for_each(|c| *c = usize::MAX);
        let mut worst = 0;
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            let mut members = vec![s];
            comp[s] = s;
            stack.push(s);
            while let Some(a) = stack.pop() {
                for b in 0..n {
                    if comp[b] == usize::MAX && colours[b] == colours[a] && close[a][b] {
                        comp[b] = s;
                        members.push(b);
                        stack.push(b);
                    }
                }
            }
            for (i, &a) in members.iter().enumerate() {
                for &b in &members[i + 1..] {
                    worst = worst.max(rank[a][b]);
                }
            }
            if worst >= best {
                break;
            }
        }
        best = best.min(worst);
    }
    Ok(values[best].clone())
}
