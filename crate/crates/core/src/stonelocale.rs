//! Clopen subsets of graph path spaces.
//!
//! For a finite directed graph and a vertex `x`, the path space `P_x` is the
//! Stone space of infinite backward paths `… → v₂ → v₁ → x`. A finite path
//! ending at `x` determines the cylinder of all infinite paths ending with it.
//!
//! Paths are stored and printed *anchor-outward*: `x:a.b` is the edge `a`
//! into `x` followed by the edge `b` into the source of `a`. Extending a path
//! appends an edge, so cylinder containment is the prefix order.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;


use crate::error::{Error, Result};
use crate::scalars::Scalar;

pub type VertexId = usize;
pub type EdgeId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
struct EdgeData {
    name: String,
    src: VertexId,
    tgt: VertexId,
}

/// A finite directed graph with canonically ordered vertices and edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    vertices: Vec<String>,
    edges: Vec<EdgeData>,
    in_edges: Vec<Vec<EdgeId>>,
    alive: Vec<bool>,
}

fn valid_name(name: &str) -> bool {
    !name.is_empty()
        && name
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

impl Graph {
    pub fn new(vertices: Vec<String>, edges: Vec<(String, VertexId, VertexId)>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for v in &vertices {
            if !valid_name(v) || !seen.insert(v.clone()) {
                return Err(Error::invalid(format!("bad or duplicate vertex name `{v}`")));
            }
        }
        let mut seen_edges = BTreeSet::new();
        let mut data = Vec::with_capacity(edges.len());
        for (name, src, tgt) in edges {
            if !valid_name(&name) || !seen_edges.insert(name.clone()) {
                return Err(Error::invalid(format!("bad or duplicate edge name `{name}`")));
            }
            if src >= vertices.len() || tgt >= vertices.len() {
                return Err(Error::invalid(format!("edge `{name}` references a missing vertex")));
            }
            data.push(EdgeData { name, src, tgt });
        }
        let mut in_edges = vec![Vec::new(); vertices.len()];
        for (id, e) in data.iter().enumerate() {
            in_edges[e.tgt].push(id);
        }
        // a vertex is alive when some infinite backward path ends at it
        let mut alive = vec![true; vertices.len()];
        loop {
            let mut changed = false;
            for v in 0..vertices.len() {
                if alive[v] && !in_edges[v].iter().any(|&e| alive[data[e].src]) {
                    alive[v] = false;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        Ok(Graph {
            vertices,
            edges: data,
            in_edges,
            alive,
        })
    }

    /// Convenience constructor from names, e.g. `from_names(&["x"], &[("a","x","x")])`.
    pub fn from_names(vertices: &[&str], edges: &[(&str, &str, &str)]) -> Result<Self> {
        let vs: Vec<String> = vertices.iter().map(|s| s.to_string()).collect();
        let find = |n: &str| {
            vs.iter()
                .position(|v| v == n)
                .ok_or_else(|| Error::invalid(format!("unknown vertex `{n}`")))
        };
        let es = edges
            .iter()
            .map(|(n, s, t)| Ok((n.to_string(), find(s)?, find(t)?)))
            .collect::<Result<Vec<_>>>()?;
        Graph::new(vs, es)
    }

    /// Parses the line-oriented graph format:
    ///
    /// ```text
    /// # comment
    /// vertex x
    /// edge a x x
    /// ```
    pub fn parse(text: &str) -> Result<Self> {
        let mut vertices: Vec<String> = Vec::new();
        let mut edges = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("");
            let col = |tok: &str| raw.find(tok).map_or(1, |p| p + 1);
            let words: Vec<&str> = line.split_whitespace().collect();
            match words.as_slice() {
                [] => {}
                ["vertex", name] => {
                    if !valid_name(name) || vertices.iter().any(|v| v == name) {
                        return Err(Error::parse(line_no, col(name), format!("bad or duplicate vertex `{name}`")));
                    }
                    vertices.push(name.to_string());
                }
                ["edge", name, src, tgt] => {
                    if !valid_name(name) || edges.iter().any(|(n, _, _)| n == name) {
                        return Err(Error::parse(line_no, col(name), format!("bad or duplicate edge `{name}`")));
                    }
                    let lookup = |v: &str| {
                        vertices
                            .iter()
                            .position(|x| x == v)
                            .ok_or_else(|| Error::parse(line_no, col(v), format!("undeclared vertex `{v}`")))
                    };
                    let s = lookup(src)?;
                    let t = lookup(tgt)?;
                    edges.push((name.to_string(), s, t));
                }
                [kw, ..] => {
                    return Err(Error::parse(
                        line_no,
                        col(kw),
                        format!("expected `vertex <name>` or `edge <name> <src> <tgt>`, found `{}`", line.trim()),
                    ))
                }
            }
        }
        Graph::new(vertices, edges)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for v in &self.vertices {
            out.push_str(&format!("vertex {v}\n"));
        }
        for e in &self.edges {
            out.push_str(&format!(
                "edge {} {} {}\n",
                e.name, self.vertices[e.src], self.vertices[e.tgt]
            ));
        }
        out
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertices[v]
    }

    pub fn edge_name(&self, e: EdgeId) -> &str {
        &self.edges[e].name
    }

    pub fn vertex(&self, name: &str) -> Option<VertexId> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn edge(&self, name: &str) -> Option<EdgeId> {
        self.edges.iter().position(|e| e.name == name)
    }

    pub fn src(&self, e: EdgeId) -> VertexId {
        self.edges[e].src
    }

    pub fn tgt(&self, e: EdgeId) -> VertexId {
        self.edges[e].tgt
    }

    pub fn in_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.in_edges[v]
    }

    pub fn out_edges(&self, v: VertexId) -> impl Iterator<Item = EdgeId> + '_ {
        (0..self.edges.len()).filter(move |&e| self.edges[e].src == v)
    }

    pub fn is_alive(&self, v: VertexId) -> bool {
        self.alive[v]
    }

    /// Incoming edges whose source carries a nonempty path space.
    pub fn live_in_edges(&self, v: VertexId) -> impl Iterator<Item = EdgeId> + '_ {
        self.in_edges[v]
            .iter()
            .copied()
            .filter(move |&e| self.alive[self.edges[e].src])
    }

    /// The least live incoming edge; the rewriting systems contract along it.
    pub fn designated_edge(&self, v: VertexId) -> Option<EdgeId> {
        self.live_in_edges(v).next()
    }

    /// Live paths of exactly `len` edges extending `base`.
    pub fn extensions(&self, base: &Path, len: usize) -> Vec<Path> {
        let mut frontier = vec![base.clone()];
        for _ in 0..len {
            let mut next = Vec::new();
            for p in &frontier {
                for e in self.live_in_edges(p.source(self)) {
                    next.push(p.extend(e));
                }
            }
            frontier = next;
        }
        frontier.retain(|p| self.is_alive(p.source(self)));
        frontier
    }
}

/// A finite path written anchor-outward.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    anchor: VertexId,
    edges: Vec<EdgeId>,
}

impl Path {
    pub fn empty(anchor: VertexId) -> Self {
        Path {
            anchor,
            edges: Vec::new(),
        }
    }

    pub fn new(graph: &Graph, anchor: VertexId, edges: Vec<EdgeId>) -> Result<Self> {
        if anchor >= graph.vertex_count() {
            return Err(Error::invalid("path anchor out of range"));
        }
        let mut at = anchor;
        for &e in &edges {
            if e >= graph.edge_count() || graph.tgt(e) != at {
                return Err(Error::invalid(format!(
                    "edges do not compose into a path ending at `{}`",
                    graph.vertex_name(anchor)
                )));
            }
            at = graph.src(e);
        }
        Ok(Path { anchor, edges })
    }

    /// Parses `x:a.b` (or `x:` for the empty path).
    pub fn parse(graph: &Graph, text: &str) -> Result<Self> {
        let bad = |m: String| Error::parse(1, 1, m);
        let (anchor, rest) = text
            .split_once(':')
            .ok_or_else(|| bad(format!("expected `vertex:edges`, found `{text}`")))?;
        let anchor = graph
            .vertex(anchor.trim())
            .ok_or_else(|| bad(format!("unknown vertex `{anchor}`")))?;
        let rest = rest.trim();
        let edges = if rest.is_empty() {
            Vec::new()
        } else {
            rest.split('.')
                .map(|n| graph.edge(n).ok_or_else(|| bad(format!("unknown edge `{n}`"))))
                .collect::<Result<Vec<_>>>()?
        };
        Path::new(graph, anchor, edges).map_err(|e| bad(e.to_string()))
    }

    /// Path of edge names alone, anchored at the target of the first edge.
    pub fn from_edge_names(graph: &Graph, anchor: VertexId, names: &str) -> Result<Self> {
        if names.is_empty() {
            return Path::new(graph, anchor, Vec::new());
        }
        let edges = names
            .split('.')
            .map(|n| {
                graph
                    .edge(n)
                    .ok_or_else(|| Error::parse(1, 1, format!("unknown edge `{n}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Path::new(graph, anchor, edges)
    }

    pub fn anchor(&self) -> VertexId {
        self.anchor
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// The outermost vertex (source of the last edge).
    pub fn source(&self, graph: &Graph) -> VertexId {
        self.edges.last().map_or(self.anchor, |&e| graph.src(e))
    }

    pub fn extend(&self, e: EdgeId) -> Path {
        let mut edges = self.edges.clone();
        edges.push(e);
        Path {
            anchor: self.anchor,
            edges,
        }
    }

    pub fn concat(&self, tail: &[EdgeId]) -> Path {
        let mut edges = self.edges.clone();
        edges.extend_from_slice(tail);
        Path {
            anchor: self.anchor,
            edges,
        }
    }

    pub fn parent(&self) -> Option<Path> {
        (!self.edges.is_empty()).then(|| Path {
            anchor: self.anchor,
            edges: self.edges[..self.edges.len() - 1].to_vec(),
        })
    }

    pub fn last_edge(&self) -> Option<EdgeId> {
        self.edges.last().copied()
    }

    pub fn is_prefix_of(&self, other: &Path) -> bool {
        self.anchor == other.anchor && other.edges.starts_with(&self.edges)
    }

    /// The edges of `other` past `self`, when `self` is a prefix of it.
    pub fn strip_from<'a>(&self, other: &'a Path) -> Option<&'a [EdgeId]> {
        self.is_prefix_of(other).then(|| &other.edges[self.edges.len()..])
    }

    /// Cylinders of two paths at the same anchor are nested or disjoint.
    pub fn disjoint_from(&self, other: &Path) -> bool {
        self.anchor != other.anchor || !(self.is_prefix_of(other) || other.is_prefix_of(self))
    }

    pub fn edge_names(&self, graph: &Graph) -> String {
        self.edges
            .iter()
            .map(|&e| graph.edge_name(e))
            .collect::<Vec<_>>()
            .join(".")
    }

    pub fn display<'a>(&'a self, graph: &'a Graph) -> PathDisplay<'a> {
        PathDisplay { path: self, graph }
    }
}

pub struct PathDisplay<'a> {
    path: &'a Path,
    graph: &'a Graph,
}

impl fmt::Display for PathDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}",
            self.graph.vertex_name(self.path.anchor),
            self.path.edge_names(self.graph)
        )
    }
}

/// Splits weighted cylinders into pairwise disjoint cylinders carrying the
/// accumulated value. Cylinders that are empty (dead source) are dropped.
/// Only the part of the space covered by some input cylinder is returned.
pub(crate) fn disjointify<V: Clone>(
    graph: &Graph,
    anchor: VertexId,
    pieces: impl IntoIterator<Item = (Path, V)>,
    combine: impl Fn(&V, &V) -> V,
) -> Vec<(Path, V)> {
    let mut nodes: BTreeMap<Path, V> = BTreeMap::new();
    for (p, v) in pieces {
        debug_assert_eq!(p.anchor, anchor);
        if !graph.is_alive(p.source(graph)) {
            continue;
        }
        match nodes.get_mut(&p) {
            Some(old) => *old = combine(old, &v),
            None => {
                nodes.insert(p, v);
            }
        }
    }
    let mut internal: BTreeSet<Path> = BTreeSet::new();
    for p in nodes.keys() {
        let mut q = p.parent();
        while let Some(x) = q {
            if !internal.insert(x.clone()) {
                break;
            }
            q = x.parent();
        }
    }
    let mut out = Vec::new();
    let root = Path::empty(anchor);
    if !graph.is_alive(anchor) || (nodes.is_empty()) {
        return out;
    }
    let mut stack: Vec<(Path, Option<V>)> = vec![(root, None)];
    while let Some((p, acc)) = stack.pop() {
        let acc = match (acc, nodes.get(&p)) {
            (Some(a), Some(v)) => Some(combine(&a, v)),
            (None, Some(v)) => Some(v.clone()),
            (a, None) => a,
        };
        if internal.contains(&p) {
            for e in graph.live_in_edges(p.source(graph)) {
                stack.push((p.extend(e), acc.clone()));
            }
        } else if let Some(a) = acc {
            out.push((p, a));
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

/// Merges complete sibling families with equal values into their parent,
/// bottom-up, yielding the maximal cylinders of each level set.
pub(crate) fn coarsen<V: Clone + PartialEq>(graph: &Graph, pieces: Vec<(Path, V)>) -> Vec<(Path, V)> {
    let mut map: BTreeMap<Path, V> = pieces.into_iter().collect();
    let max_len = map.keys().map(Path::len).max().unwrap_or(0);
    for len in (1..=max_len).rev() {
        let parents: BTreeSet<Path> = map
            .keys()
            .filter(|p| p.len() == len)
            .filter_map(Path::parent)
            .collect();
        for parent in parents {
            let children: Vec<Path> = graph
                .live_in_edges(parent.source(graph))
                .map(|e| parent.extend(e))
                .collect();
            let first = match map.get(&children[0]) {
                Some(v) => v.clone(),
                None => continue,
            };
            if children[1..].iter().all(|c| map.get(c) == Some(&first)) {
                for c in &children {
                    map.remove(c);
                }
                map.insert(parent, first);
            }
        }
    }
    map.into_iter().collect()
}

/// A clopen subset of `P_anchor`, kept as its maximal cylinders.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Clopen {
    anchor: VertexId,
    cylinders: Vec<Path>,
}

impl Clopen {
    pub fn empty(anchor: VertexId) -> Self {
        Clopen {
            anchor,
            cylinders: Vec::new(),
        }
    }

    pub fn full(graph: &Graph, anchor: VertexId) -> Self {
        Self::from_cylinders(graph, anchor, vec![Path::empty(anchor)]).expect("root path")
    }

    pub fn cylinder(graph: &Graph, path: Path) -> Self {
        let anchor = path.anchor;
        Self::from_cylinders(graph, anchor, vec![path]).expect("single anchor")
    }

    pub fn from_cylinders(graph: &Graph, anchor: VertexId, cylinders: Vec<Path>) -> Result<Self> {
        if let Some(p) = cylinders.iter().find(|p| p.anchor != anchor) {
            return Err(Error::AnchorMismatch {
                left: graph.vertex_name(anchor).to_string(),
                right: graph.vertex_name(p.anchor).to_string(),
            });
        }
        let pieces = disjointify(graph, anchor, cylinders.into_iter().map(|p| (p, ())), |_, _| ());
        Ok(Clopen {
            anchor,
            cylinders: coarsen(graph, pieces).into_iter().map(|(p, _)| p).collect(),
        })
    }

    pub fn anchor(&self) -> VertexId {
        self.anchor
    }

    pub fn cylinders(&self) -> &[Path] {
        &self.cylinders
    }

    pub fn is_empty(&self) -> bool {
        self.cylinders.is_empty()
    }

    fn check_anchor(&self, graph: &Graph, other: &Clopen) -> Result<()> {
        if self.anchor != other.anchor {
            return Err(Error::AnchorMismatch {
                left: graph.vertex_name(self.anchor).to_string(),
                right: graph.vertex_name(other.anchor).to_string(),
            });
        }
        Ok(())
    }

    /// Boolean combination: `keep` receives bit `k` set when the point lies in `inputs[k]`.
    fn combine(graph: &Graph, anchor: VertexId, inputs: &[&Clopen], keep: impl Fn(u32) -> bool) -> Clopen {
        const WHOLE: u32 = 1 << 31;
        let mut pieces = vec![(Path::empty(anchor), WHOLE)];
        for (k, c) in inputs.iter().enumerate() {
            pieces.extend(c.cylinders.iter().map(|p| (p.clone(), 1u32 << k)));
        }
        let kept: Vec<(Path, ())> = disjointify(graph, anchor, pieces, |a, b| a | b)
            .into_iter()
            .filter(|(_, m)| keep(m & !WHOLE))
            .map(|(p, _)| (p, ()))
            .collect();
        Clopen {
            anchor,
            cylinders: coarsen(graph, kept).into_iter().map(|(p, _)| p).collect(),
        }
    }

    pub fn meet(&self, graph: &Graph, other: &Clopen) -> Result<Clopen> {
        self.check_anchor(graph, other)?;
        Ok(Self::combine(graph, self.anchor, &[self, other], |m| m == 0b11))
    }

    pub fn join(&self, graph: &Graph, other: &Clopen) -> Result<Clopen> {
        self.check_anchor(graph, other)?;
        Ok(Self::combine(graph, self.anchor, &[self, other], |m| m != 0))
    }

    pub fn complement(&self, graph: &Graph) -> Clopen {
        Self::combine(graph, self.anchor, &[self], |m| m == 0)
    }

    pub fn difference(&self, graph: &Graph, other: &Clopen) -> Result<Clopen> {
        self.check_anchor(graph, other)?;
        Ok(Self::combine(graph, self.anchor, &[self, other], |m| m == 0b01))
    }

    pub fn is_subset(&self, graph: &Graph, other: &Clopen) -> Result<bool> {
        Ok(self.difference(graph, other)?.is_empty())
    }

    pub fn contains_path(&self, path: &Path) -> bool {
        self.cylinders.iter().any(|c| c.is_prefix_of(path))
    }

    /// Live paths of length `depth` whose cylinders partition this clopen.
    pub fn refine_to_depth(&self, graph: &Graph, depth: usize) -> Result<Vec<Path>> {
        let mut out = Vec::new();
        for c in &self.cylinders {
            if c.len() > depth {
                return Err(Error::DepthTooSmall {
                    depth,
                    needed: c.len(),
                });
            }
            out.extend(graph.extensions(c, depth - c.len()));
        }
        out.sort();
        Ok(out)
    }

    pub fn depth(&self) -> usize {
        self.cylinders.iter().map(Path::len).max().unwrap_or(0)
    }

    pub fn display(&self, graph: &Graph) -> String {
        if self.cylinders.is_empty() {
            return format!("{}:∅", graph.vertex_name(self.anchor));
        }
        self.cylinders
            .iter()
            .map(|p| p.display(graph).to_string())
            .collect::<Vec<_>>()
            .join(" ∪ ")
    }
}

/// `U ≪ V`. Clopens of a Stone space are compact, so this is inclusion.
pub fn way_below(graph: &Graph, u: &Clopen, v: &Clopen) -> Result<bool> {
    u.is_subset(graph, v)
}

/// `U ◁ V`, returning the separating witness `W` (with `W ∪ V = X`, `W ∩ U = ∅`).
pub fn rather_below(graph: &Graph, u: &Clopen, v: &Clopen) -> Result<Option<Clopen>> {
    if !u.is_subset(graph, v)? {
        return Ok(None);
    }
    let w = u.complement(graph);
    debug_assert!(w.join(graph, v)? == Clopen::full(graph, u.anchor));
    debug_assert!(w.meet(graph, u)?.is_empty());
    Ok(Some(w))
}

/// A locally constant, compactly supported section of the constant sheaf.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LCSection<S> {
    anchor: VertexId,
    pieces: Vec<(Path, S)>,
}

impl<S: Scalar> LCSection<S> {
    pub fn zero(anchor: VertexId) -> Self {
        LCSection {
            anchor,
            pieces: Vec::new(),
        }
    }

    /// Sum of `value · indicator(cylinder)` over possibly overlapping pieces.
    pub fn from_pieces(graph: &Graph, anchor: VertexId, pieces: Vec<(Path, S)>) -> Result<Self> {
        if let Some((p, _)) = pieces.iter().find(|(p, _)| p.anchor != anchor) {
            return Err(Error::AnchorMismatch {
                left: graph.vertex_name(anchor).to_string(),
                right: graph.vertex_name(p.anchor).to_string(),
            });
        }
        let disjoint = disjointify(graph, anchor, pieces, |a, b| a.clone() + b.clone());
        Ok(Self::canonical(graph, anchor, disjoint))
    }

    fn canonical(graph: &Graph, anchor: VertexId, disjoint: Vec<(Path, S)>) -> Self {
        let nonzero = disjoint.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        LCSection {
            anchor,
            pieces: coarsen(graph, nonzero),
        }
    }

    pub fn constant(graph: &Graph, region: &Clopen, value: S) -> Self {
        let pieces = region.cylinders.iter().map(|p| (p.clone(), value.clone())).collect();
        Self::from_pieces(graph, region.anchor, pieces).expect("single anchor")
    }

    pub fn anchor(&self) -> VertexId {
        self.anchor
    }

    pub fn pieces(&self) -> &[(Path, S)] {
        &self.pieces
    }

    pub fn is_zero(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn support(&self, graph: &Graph) -> Clopen {
        Clopen::from_cylinders(graph, self.anchor, self.pieces.iter().map(|(p, _)| p.clone()).collect())
            .expect("single anchor")
    }

    /// Value on the cylinder of `path`, if the section is constant there.
    pub fn value_on(&self, path: &Path) -> Option<S> {
        if let Some((_, v)) = self.pieces.iter().find(|(p, _)| p.is_prefix_of(path)) {
            return Some(v.clone());
        }
        if self.pieces.iter().any(|(p, _)| path.is_prefix_of(p)) {
            return None;
        }
        Some(S::zero())
    }

    pub fn add(&self, graph: &Graph, other: &Self) -> Result<Self> {
        let pieces = self.pieces.iter().chain(&other.pieces).cloned().collect();
        Self::from_pieces(graph, self.anchor, pieces)
    }

    pub fn scale(&self, graph: &Graph, c: &S) -> Self {
        let pieces = self
            .pieces
            .iter()
            .map(|(p, v)| (p.clone(), c.clone() * v.clone()))
            .collect();
        Self::from_pieces(graph, self.anchor, pieces).expect("single anchor")
    }

    pub fn neg(&self) -> Self {
        LCSection {
            anchor: self.anchor,
            pieces: self.pieces.iter().map(|(p, v)| (p.clone(), -v.clone())).collect(),
        }
    }

    pub fn restrict(&self, graph: &Graph, region: &Clopen) -> Result<Self> {
        if region.anchor != self.anchor {
            return Err(Error::AnchorMismatch {
                left: graph.vertex_name(self.anchor).to_string(),
                right: graph.vertex_name(region.anchor).to_string(),
            });
        }
        let pieces = self
            .pieces
            .iter()
            .map(|(p, v)| (p.clone(), (v.clone(), false)))
            .chain(region.cylinders.iter().map(|p| (p.clone(), (S::zero(), true))));
        let split = disjointify(graph, self.anchor, pieces, |a, b| {
            (a.0.clone() + b.0.clone(), a.1 || b.1)
        });
        let kept = split.into_iter().filter(|(_, (_, inside))| *inside).map(|(p, (v, _))| (p, v)).collect();
        Ok(Self::canonical(graph, self.anchor, kept))
    }

    pub fn display(&self, graph: &Graph) -> String {
        if self.pieces.is_empty() {
            return "0".to_string();
        }
        self.pieces
            .iter()
            .map(|(p, v)| format!("{v} * [{}]", p.display(graph)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// Extends the restriction of `s` to `U` by zero, so that the result agrees
/// with `s` on `U` and is supported in `V`. Requires `U ⊆ V`.
pub fn extend_with_support<S: Scalar>(
    graph: &Graph,
    s: &LCSection<S>,
    u: &Clopen,
    v: &Clopen,
) -> Result<LCSection<S>> {
    if s.anchor != u.anchor {
        return Err(Error::AnchorMismatch {
            left: graph.vertex_name(s.anchor).to_string(),
            right: graph.vertex_name(u.anchor).to_string(),
        });
    }
    if !way_below(graph, u, v)? {
        return Err(Error::precondition(format!(
            "{} is not contained in {}",
            u.display(graph),
            v.display(graph)
        )));
    }
    // U itself is clopen, so it serves as the intermediate clopen U ⊆ U' ⊆ V
    s.restrict(graph, u)
}

/// Splits `s` into sections `s_i` with `Σ s_i = s` and `supp(s_i) ⊆ cover[i]`.
/// Each disjoint piece of the support goes to the first cover member containing it.
pub fn partition_of_support<S: Scalar>(
    graph: &Graph,
    s: &LCSection<S>,
    cover: &[Clopen],
) -> Result<Vec<LCSection<S>>> {
    if cover.len() > 120 {
        return Err(Error::precondition("at most 120 covering clopens are supported"));
    }
    if let Some(c) = cover.iter().find(|c| c.anchor != s.anchor) {
        return Err(Error::AnchorMismatch {
            left: graph.vertex_name(s.anchor).to_string(),
            right: graph.vertex_name(c.anchor).to_string(),
        });
    }
    let pieces = s
        .pieces
        .iter()
        .map(|(p, v)| (p.clone(), (v.clone(), 0u128)))
        .chain(cover.iter().enumerate().flat_map(|(k, c)| {
            c.cylinders.iter().map(move |p| (p.clone(), (S::zero(), 1u128 << k)))
        }));
    let split = disjointify(graph, s.anchor, pieces, |a, b| (a.0.clone() + b.0.clone(), a.1 | b.1));
    let mut assigned: Vec<Vec<(Path, S)>> = vec![Vec::new(); cover.len()];
    for (p, (v, mask)) in split {
        if v.is_zero() {
            continue;
        }
        if mask == 0 {
            return Err(Error::precondition(format!(
                "cover misses the support at {}",
                p.display(graph)
            )));
        }
        assigned[mask.trailing_zeros() as usize].push((p, v));
    }
    Ok(assigned
        .into_iter()
        .map(|pieces| LCSection::canonical(graph, s.anchor, pieces))
        .collect())
}
