//! Line-oriented text formats for graphs, tree-decompositions, colourings,
//! partitions, minor models, certificates and component reports.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use thiserror::Error;

use crate::colorer::Certified;
use crate::colouring::{Colouring, ComponentReport};
use crate::decomposition::{NodeId, Partition, TreeDecomposition};
use crate::graph::{VertexId, VertexSet, WeightedGraph};
use crate::rational::Distance;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct FormatError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> FormatError {
    FormatError { line, message: message.into() }
}

fn parse<T: FromStr>(line: usize, token: Option<&str>, what: &str) -> Result<T, FormatError>
where
    T::Err: std::fmt::Display,
{
    let token = token.ok_or_else(|| err(line, format!("missing {what}")))?;
    token.parse().map_err(|e| err(line, format!("bad {what} `{token}`: {e}")))
}

fn vertex(line: usize, token: Option<&str>) -> Result<VertexId, FormatError> {
    parse::<u64>(line, token, "vertex id").map(VertexId)
}

fn no_trailing<'a>(line: usize, mut tokens: impl Iterator<Item = &'a str>) -> Result<(), FormatError> {
    match tokens.next() {
        Some(t) => Err(err(line, format!("unexpected token `{t}`"))),
        None => Ok(()),
    }
}

/// Non-empty lines with their 1-based numbers, skipping comments.
fn lines<'a>(text: &'a str, comment: &'a str) -> impl Iterator<Item = (usize, &'a str)> + 'a {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(move |(_, l)| !l.is_empty() && !l.starts_with(comment))
}

/// `v <id>` declares a vertex, `e <u> <v> <weight>` an edge; `#` starts a
/// comment line.
pub fn read_graph(text: &str) -> Result<WeightedGraph, FormatError> {
    let mut g = WeightedGraph::new();
    for (n, l) in lines(text, "#") {
        let mut tok = l.split_whitespace();
        match tok.next() {
            Some("v") => g.add_vertex(vertex(n, tok.next())?),
            Some("e") => {
                let u = vertex(n, tok.next())?;
                let v = vertex(n, tok.next())?;
                let w: Distance = parse(n, tok.next(), "weight")?;
                g.add_vertex(u);
                g.add_vertex(v);
                g.add_edge(u, v, w).map_err(|e| err(n, e.to_string()))?;
            }
            Some(other) => return Err(err(n, format!("unknown record `{other}`"))),
            None => unreachable!(),
        }
        no_trailing(n, tok)?;
    }
    Ok(g)
}

pub fn write_graph(g: &WeightedGraph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# {} vertices, {} edges", g.vertex_count(), g.edge_count());
    for v in g.vertices() {
        let _ = writeln!(out, "v {v}");
    }
    for (u, v, w) in g.edges() {
        let _ = writeln!(out, "e {u} {v} {w}");
    }
    out
}

/// `s td <bags> <max bag size> <vertices>`, then `b <id> <v...>` per bag and
/// `<id> <id>` per tree edge; `c` starts a comment line.
pub fn read_td(text: &str) -> Result<TreeDecomposition, FormatError> {
    let mut header: Option<(usize, usize)> = None;
    let mut bags: BTreeMap<NodeId, VertexSet> = BTreeMap::new();
    let mut edges = Vec::new();
    let mut last = 0;
    for (n, l) in lines(text, "c") {
        last = n;
        let mut tok = l.split_whitespace();
        match tok.next() {
            Some("s") => {
                if tok.next() != Some("td") {
                    return Err(err(n, "expected `s td`"));
                }
                let count: usize = parse(n, tok.next(), "bag count")?;
                let max: usize = parse(n, tok.next(), "max bag size")?;
                let _vertices: usize = parse(n, tok.next(), "vertex count")?;
                no_trailing(n, tok)?;
                header = Some((count, max));
            }
            Some("b") => {
                let id: NodeId = parse(n, tok.next(), "bag id")?;
                let bag = tok.map(|t| vertex(n, Some(t))).collect::<Result<VertexSet, _>>()?;
                if bags.insert(id, bag).is_some() {
                    return Err(err(n, format!("bag {id} declared twice")));
                }
            }
            Some(first) => {
                let a: NodeId = parse(n, Some(first), "bag id")?;
                let b: NodeId = parse(n, tok.next(), "bag id")?;
                no_trailing(n, tok)?;
                edges.push((a, b));
            }
            None => unreachable!(),
        }
    }
    let (count, max) = header.ok_or_else(|| err(1, "missing `s td` header"))?;
    if count != bags.len() {
        return Err(err(last, format!("header declares {count} bags, found {}", bags.len())));
    }
    let actual = bags.values().map(|b| b.len()).max().unwrap_or(0);
    if actual > max {
        return Err(err(last, format!("bag of size {actual} exceeds the declared {max}")));
    }
    TreeDecomposition::new(bags, edges).map_err(|e| err(last, e.to_string()))
}

pub fn write_td(td: &TreeDecomposition) -> String {
    let vertices: VertexSet = td.bags().flat_map(|(_, b)| b.iter().copied()).collect();
    let mut out = String::new();
    let _ = writeln!(out, "s td {} {} {}", td.node_count(), td.max_bag_size(), vertices.len());
    for (t, bag) in td.bags() {
        let _ = write!(out, "b {t}");
        for v in bag {
            let _ = write!(out, " {v}");
        }
        out.push('\n');
    }
    for (a, b) in td.edges() {
        let _ = writeln!(out, "{a} {b}");
    }
    out
}

/// `<vertex> <colour>` per line. The palette size is the largest colour
/// used unless given.
pub fn read_colouring(text: &str, colours: Option<usize>) -> Result<Colouring, FormatError> {
    let mut pairs = Vec::new();
    for (n, l) in lines(text, "#") {
        let mut tok = l.split_whitespace();
        let v = vertex(n, tok.next())?;
        let c: usize = parse(n, tok.next(), "colour")?;
        no_trailing(n, tok)?;
        pairs.push((n, v, c));
    }
    let m = colours.unwrap_or_else(|| pairs.iter().map(|p| p.2).max().unwrap_or(1));
    let mut c = Colouring::new(m);
    for (n, v, col) in pairs {
        if c.get(v).is_some() {
            return Err(err(n, format!("vertex {v} coloured twice")));
        }
        c.set(v, col).map_err(|e| err(n, e.to_string()))?;
    }
    Ok(c)
}

pub fn write_colouring(c: &Colouring) -> String {
    let mut out = String::new();
    for (v, col) in c.iter() {
        let _ = writeln!(out, "{v} {col}");
    }
    out
}

/// Parts and, for models, the part-to-H-vertex map.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PartFile {
    pub parts: BTreeMap<u64, VertexSet>,
    pub map: BTreeMap<u64, VertexId>,
}

impl PartFile {
    /// Parts in increasing id order as a partition.
    pub fn partition(&self) -> Result<Partition, String> {
        Partition::new(self.parts.values().cloned().collect()).map_err(|e| e.to_string())
    }

    /// Parts and their H-vertices in increasing part id order.
    pub fn model_parts(&self) -> Result<(Vec<VertexSet>, Vec<VertexId>), String> {
        let mut parts = Vec::with_capacity(self.parts.len());
        let mut map = Vec::with_capacity(self.parts.len());
        for (id, part) in &self.parts {
            parts.push(part.clone());
            map.push(*self.map.get(id).ok_or_else(|| format!("part {id} has no `map` line"))?);
        }
        if let Some(id) = self.map.keys().find(|id| !self.parts.contains_key(id)) {
            return Err(format!("`map` line for unknown part {id}"));
        }
        Ok((parts, map))
    }

    pub fn from_partition(p: &Partition) -> Self {
        PartFile { parts: p.parts().iter().cloned().enumerate().map(|(i, s)| (i as u64, s)).collect(), map: BTreeMap::new() }
    }
}

/// `p <part> <v...>` and `map <part> <H-vertex>` lines; `#` comments.
pub fn read_parts(text: &str) -> Result<PartFile, FormatError> {
    let mut file = PartFile::default();
    for (n, l) in lines(text, "#") {
        let mut tok = l.split_whitespace();
        match tok.next() {
            Some("p") => {
                let id: u64 = parse(n, tok.next(), "part id")?;
                let part = tok.map(|t| vertex(n, Some(t))).collect::<Result<VertexSet, _>>()?;
                if file.parts.insert(id, part).is_some() {
                    return Err(err(n, format!("part {id} declared twice")));
                }
            }
            Some("map") => {
                let id: u64 = parse(n, tok.next(), "part id")?;
                let x = vertex(n, tok.next())?;
                no_trailing(n, tok)?;
                if file.map.insert(id, x).is_some() {
                    return Err(err(n, format!("part {id} mapped twice")));
                }
            }
            Some(other) => return Err(err(n, format!("unknown record `{other}`"))),
            None => unreachable!(),
        }
    }
    Ok(file)
}

pub fn write_parts(file: &PartFile) -> String {
    let mut out = String::new();
    for (id, part) in &file.parts {
        let _ = write!(out, "p {id}");
        for v in part {
            let _ = write!(out, " {v}");
        }
        out.push('\n');
    }
    for (id, x) in &file.map {
        let _ = writeln!(out, "map {id} {x}");
    }
    out
}

/// `key value` lines describing a certified colouring.
pub fn write_certificate(cert: &Certified, pipeline: &str) -> String {
    let top = cert.ladder.top();
    let mut out = String::new();
    let _ = writeln!(out, "pipeline {pipeline}");
    let _ = writeln!(out, "m {}", cert.colouring.colours());
    let _ = writeln!(out, "k {}", top.k);
    let _ = writeln!(out, "r {}", cert.r);
    let _ = writeln!(out, "d {}", cert.bound);
    for level in &cert.ladder.levels {
        let _ = write!(out, "slope {} f={}", level.k, level.f);
        if let Some(s) = &level.step {
            let _ = write!(out, " g'={} g*={} f*={} f#={}", s.g_prime, s.g_star, s.f_star, s.f_sharp);
        }
        out.push('\n');
    }
    out
}

/// `component_id,color,size,weak_diameter`, one row per component.
pub fn report_csv(report: &ComponentReport) -> String {
    let mut out = String::from("component_id,color,size,weak_diameter\n");
    for c in &report.components {
        let _ = writeln!(out, "{},{},{},{}", c.id, c.colour, c.vertices.len(), c.weak_diameter);
    }
    out
}

/// Human-readable component listing.
pub fn report_text(report: &ComponentReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "r = {}, {} components, max weak diameter {}", report.r, report.components.len(), report.max_weak_diameter());
    for c in &report.components {
        let ids: Vec<String> = c.vertices.iter().map(|v| v.to_string()).collect();
        let _ = writeln!(out, "component {} colour {} diameter {}: {}", c.id, c.colour, c.weak_diameter, ids.join(" "));
    }
    out
}
