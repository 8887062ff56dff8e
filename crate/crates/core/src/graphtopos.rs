//! The graph family: compactly supported sections over pairs of path spaces.
//!
//! A pair of finite paths `α` (ending at `x`) and `β` (ending at `y`) with a
//! common source `v` determines the compact open bisection
//! `Z(α,β) = {(τα, τβ) : τ an infinite path ending at v}`. Sections are
//! finite combinations of indicators of these. Composition refines pair
//! cylinders along common tails until the middle paths agree.
//!
//! Normal forms are computed in the section picture: the terms sharing a
//! root pair (the pair with its common tail removed) form one locally
//! constant function on a path space, which is canonicalized and then
//! expanded in the basis of cylinders whose last edge is not designated.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;

use crate::error::{Error, Result};
use crate::leavitt::{Generator, LpaElement, Monomial};
use crate::linalg::Matrix;
use crate::scalars::Scalar;
use crate::stonelocale::{coarsen, disjointify, Graph, Path, VertexId};

/// `Z(α, β)`; the left anchor is the target of `α`, the right anchor that of `β`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PairCylinder {
    alpha: Path,
    beta: Path,
}

impl PairCylinder {
    pub fn new(graph: &Graph, alpha: Path, beta: Path) -> Result<Self> {
        if alpha.source(graph) != beta.source(graph) {
            return Err(Error::invalid(format!(
                "Z({} | {}) has mismatched sources",
                alpha.display(graph),
                beta.display(graph)
            )));
        }
        Ok(PairCylinder { alpha, beta })
    }

    /// `Z(ε_x, ε_x)`, the diagonal over the whole of `P_x`.
    pub fn diagonal(x: VertexId) -> Self {
        PairCylinder {
            alpha: Path::empty(x),
            beta: Path::empty(x),
        }
    }

    pub fn alpha(&self) -> &Path {
        &self.alpha
    }

    pub fn beta(&self) -> &Path {
        &self.beta
    }

    pub fn left(&self) -> VertexId {
        self.alpha.anchor()
    }

    pub fn right(&self) -> VertexId {
        self.beta.anchor()
    }

    pub fn source(&self, graph: &Graph) -> VertexId {
        self.alpha.source(graph)
    }

    pub fn swap(&self) -> Self {
        PairCylinder {
            alpha: self.beta.clone(),
            beta: self.alpha.clone(),
        }
    }

    /// Splits into the root pair and the common tail, so that
    /// `self = Z(α₀ τ, β₀ τ)` with `α₀`, `β₀` not ending in a common edge.
    pub fn root(&self) -> (PairCylinder, Vec<usize>) {
        let a = self.alpha.edges();
        let b = self.beta.edges();
        let mut k = 0;
        while k < a.len() && k < b.len() && a[a.len() - 1 - k] == b[b.len() - 1 - k] {
            k += 1;
        }
        let tail = a[a.len() - k..].to_vec();
        let root = PairCylinder {
            alpha: Path::empty(self.alpha.anchor()).concat(&a[..a.len() - k]),
            beta: Path::empty(self.beta.anchor()).concat(&b[..b.len() - k]),
        };
        (root, tail)
    }

    /// The sub-bisection `Z(ατ, βτ)`.
    pub fn refine_along(&self, tail: &[usize]) -> Self {
        PairCylinder {
            alpha: self.alpha.concat(tail),
            beta: self.beta.concat(tail),
        }
    }

    pub fn display(&self, graph: &Graph) -> String {
        format!(
            "Z({}: {} | {}: {})",
            graph.vertex_name(self.alpha.anchor()),
            self.alpha.edge_names(graph),
            graph.vertex_name(self.beta.anchor()),
            self.beta.edge_names(graph)
        )
    }
}

/// A section of the graph algebroid, possibly spread over several blocks
/// `Γ_c(P_x × P_y)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConvElement<S> {
    terms: BTreeMap<PairCylinder, S>,
}

/// Expands a locally constant function on `P_v`, given by disjoint maximal
/// level-set cylinders, in the designated basis. The coefficient of `Z(τ)` is
/// the value along the designated ray from `τ` minus that from its parent.
fn designated_coefficients<S: Scalar>(graph: &Graph, pieces: &[(Path, S)]) -> Vec<(Path, S)> {
    let Some((first, _)) = pieces.first() else {
        return Vec::new();
    };
    let anchor = first.anchor();
    let values: BTreeMap<&Path, &S> = pieces.iter().map(|(p, v)| (p, v)).collect();
    let mut internal: BTreeSet<Path> = BTreeSet::new();
    for (p, _) in pieces {
        let mut q = p.parent();
        while let Some(x) = q {
            if !internal.insert(x.clone()) {
                break;
            }
            q = x.parent();
        }
    }
    let ray_value = |start: &Path| -> S {
        let mut cur = start.clone();
        loop {
            if let Some(v) = values.get(&cur) {
                return (*v).clone();
            }
            if !internal.contains(&cur) {
                return S::zero();
            }
            let d = graph
                .designated_edge(cur.source(graph))
                .expect("live vertex has a designated edge");
            cur = cur.extend(d);
        }
    };
    let root = Path::empty(anchor);
    let mut out = vec![(root.clone(), ray_value(&root))];
    for sigma in &internal {
        let src = sigma.source(graph);
        let d = graph.designated_edge(src);
        let base = ray_value(sigma);
        for e in graph.live_in_edges(src) {
            if Some(e) != d {
                let tau = sigma.extend(e);
                let c = ray_value(&tau) - base.clone();
                out.push((tau, c));
            }
        }
    }
    out.retain(|(_, c)| !c.is_zero());
    out
}

impl<S: Scalar> ConvElement<S> {
    pub fn zero() -> Self {
        ConvElement {
            terms: BTreeMap::new(),
        }
    }

    /// Canonical form of an arbitrary combination of pair cylinders.
    pub fn from_terms(graph: &Graph, terms: impl IntoIterator<Item = (PairCylinder, S)>) -> Self {
        let mut groups: BTreeMap<PairCylinder, Vec<(Path, S)>> = BTreeMap::new();
        for (z, c) in terms {
            if c.is_zero() || !graph.is_alive(z.source(graph)) {
                continue;
            }
            let (root, tail) = z.root();
            let v = root.source(graph);
            groups
                .entry(root)
                .or_default()
                .push((Path::empty(v).concat(&tail), c));
        }
        let mut out = BTreeMap::new();
        for (root, pieces) in groups {
            let v = root.source(graph);
            let disjoint = disjointify(graph, v, pieces, |a, b| a.clone() + b.clone());
            let level_sets = coarsen(
                graph,
                disjoint.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
            );
            for (tau, c) in designated_coefficients(graph, &level_sets) {
                out.insert(root.refine_along(tau.edges()), c);
            }
        }
        ConvElement { terms: out }
    }

    /// The section as a function: disjoint bisections with their values.
    ///
    /// Bisections with the same root pair have disjoint tails; bisections with
    /// different root pairs are disjoint as subsets of the groupoid.
    pub fn level_sets(&self, graph: &Graph) -> Vec<(PairCylinder, S)> {
        let mut groups: BTreeMap<PairCylinder, Vec<(Path, S)>> = BTreeMap::new();
        for (z, c) in &self.terms {
            let (root, tail) = z.root();
            let v = root.source(graph);
            groups.entry(root).or_default().push((Path::empty(v).concat(&tail), c.clone()));
        }
        let mut out = Vec::new();
        for (root, pieces) in groups {
            let v = root.source(graph);
            for (tau, c) in disjointify(graph, v, pieces, |a, b| a.clone() + b.clone()) {
                if !c.is_zero() {
                    out.push((root.refine_along(tau.edges()), c));
                }
            }
        }
        out
    }

    pub fn basis(graph: &Graph, z: PairCylinder) -> Self {
        Self::from_terms(graph, [(z, S::one())])
    }

    /// `p_x ↦ Z(ε_x, ε_x)`, `v_a ↦ Z(a, ε)`, `v_a* ↦ Z(ε, a)`.
    pub fn generator(graph: &Graph, gen: Generator) -> Self {
        let m = gen.monomial(graph);
        Self::basis(
            graph,
            PairCylinder {
                alpha: m.alpha().clone(),
                beta: m.beta().clone(),
            },
        )
    }

    /// The product of a word of generators, computed by convolution.
    pub fn word(graph: &Graph, word: &[Generator]) -> Self {
        word.iter().fold(Self::unit(graph), |acc, &g| {
            conv_mul(graph, &acc, &Self::generator(graph, g))
        })
    }

    /// `Σ_x Z(ε_x, ε_x)`.
    pub fn unit(graph: &Graph) -> Self {
        Self::from_terms(
            graph,
            (0..graph.vertex_count()).map(|x| (PairCylinder::diagonal(x), S::one())),
        )
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PairCylinder, &S)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, graph: &Graph, other: &Self) -> Self {
        Self::from_terms(
            graph,
            self.terms.iter().chain(&other.terms).map(|(z, c)| (z.clone(), c.clone())),
        )
    }

    pub fn scale(&self, graph: &Graph, c: &S) -> Self {
        Self::from_terms(
            graph,
            self.terms.iter().map(|(z, x)| (z.clone(), c.clone() * x.clone())),
        )
    }

    pub fn sub(&self, graph: &Graph, other: &Self) -> Self {
        self.add(graph, &other.scale(graph, &-S::one()))
    }

    /// The `Γ_c(P_x × P_y)` component.
    pub fn block(&self, x: VertexId, y: VertexId) -> Self {
        ConvElement {
            terms: self
                .terms
                .iter()
                .filter(|(z, _)| z.left() == x && z.right() == y)
                .map(|(z, c)| (z.clone(), c.clone()))
                .collect(),
        }
    }

    /// Nonzero blocks keyed by `(x, y)`.
    pub fn blocks(&self) -> BTreeMap<(VertexId, VertexId), Self> {
        let mut out: BTreeMap<(VertexId, VertexId), Self> = BTreeMap::new();
        for (z, c) in &self.terms {
            out.entry((z.left(), z.right()))
                .or_insert_with(Self::zero)
                .terms
                .insert(z.clone(), c.clone());
        }
        out
    }

    pub fn display(&self, graph: &Graph) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        self.terms
            .iter()
            .map(|(z, c)| {
                if c.is_one() {
                    z.display(graph)
                } else {
                    format!("{c} * {}", z.display(graph))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// Parses the printed form `c * Z(x: a.b | y: c) + ...`.
    pub fn parse(graph: &Graph, text: &str) -> Result<Self> {
        let text = text.trim();
        if text == "0" {
            return Ok(Self::zero());
        }
        let mut terms = Vec::new();
        let mut offset = 0;
        for chunk in split_top_level(text) {
            let col = offset + 1;
            offset += chunk.len() + 3;
            let bad = |m: String| Error::parse(1, col, m);
            let (coef, body) = match chunk.split_once(" * ") {
                Some((c, body)) => (S::parse(c.trim()).map_err(|e| bad(e.to_string()))?, body.trim()),
                None => (S::one(), chunk.trim()),
            };
            let inner = body
                .strip_prefix("Z(")
                .and_then(|b| b.strip_suffix(')'))
                .ok_or_else(|| bad(format!("expected `Z(x: path | y: path)`, found `{body}`")))?;
            let (l, r) = inner
                .split_once('|')
                .ok_or_else(|| bad("missing `|`".to_string()))?;
            let alpha = Path::parse(graph, &l.replace(' ', "")).map_err(|e| bad(e.to_string()))?;
            let beta = Path::parse(graph, &r.replace(' ', "")).map_err(|e| bad(e.to_string()))?;
            let z = PairCylinder::new(graph, alpha, beta).map_err(|e| bad(e.to_string()))?;
            terms.push((z, coef));
        }
        Ok(Self::from_terms(graph, terms))
    }
}

fn split_top_level(text: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b' ' if depth == 0 && text[i..].starts_with(" + ") => {
                out.push(&text[start..i]);
                start = i + 3;
                i += 3;
                continue;
            }
            _ => {}
        }
        i += 1;
    }
    out.push(&text[start..]);
    out
}

/// Product of two pair cylinders: the term whose middle path is shorter is
/// refined along the extra edges of the other; any other refinement has a
/// middle path that can never match.
fn cylinder_product(x: &PairCylinder, y: &PairCylinder) -> Option<PairCylinder> {
    if x.right() != y.left() {
        return None;
    }
    let bound = x.alpha.len() + x.beta.len() + y.alpha.len() + y.beta.len();
    if let Some(tau) = x.beta.strip_from(&y.alpha) {
        let refined = x.refine_along(tau);
        assert!(refined.beta.len() <= bound, "refinement depth bound exceeded");
        debug_assert_eq!(refined.beta, y.alpha);
        Some(PairCylinder {
            alpha: refined.alpha,
            beta: y.beta.clone(),
        })
    } else if let Some(tau) = y.alpha.strip_from(&x.beta) {
        let refined = y.refine_along(tau);
        assert!(refined.alpha.len() <= bound, "refinement depth bound exceeded");
        debug_assert_eq!(refined.alpha, x.beta);
        Some(PairCylinder {
            alpha: x.alpha.clone(),
            beta: refined.beta,
        })
    } else {
        None
    }
}

pub fn conv_mul<S: Scalar>(graph: &Graph, f: &ConvElement<S>, g: &ConvElement<S>) -> ConvElement<S> {
    let mut raw = Vec::new();
    for (x, c) in &f.terms {
        for (y, d) in &g.terms {
            if let Some(z) = cylinder_product(x, y) {
                raw.push((z, c.clone() * d.clone()));
            }
        }
    }
    ConvElement::from_terms(graph, raw)
}

pub fn conv_star<S: Scalar>(graph: &Graph, f: &ConvElement<S>) -> ConvElement<S> {
    ConvElement::from_terms(graph, f.terms.iter().map(|(z, c)| (z.swap(), c.star())))
}

/// `Z(α,β) ↦ v_α v_β*`.
pub fn to_leavitt<S: Scalar>(graph: &Graph, f: &ConvElement<S>) -> LpaElement<S> {
    LpaElement::from_terms(
        graph,
        f.terms.iter().map(|(z, c)| {
            (
                Monomial::new(graph, z.alpha.clone(), z.beta.clone()).expect("pair cylinder sources agree"),
                c.clone(),
            )
        }),
    )
}

/// `v_α v_β* ↦ Z(α,β)`; use [`ConvElement::blocks`] for the matrix of blocks.
pub fn from_leavitt<S: Scalar>(graph: &Graph, u: &LpaElement<S>) -> ConvElement<S> {
    ConvElement::from_terms(
        graph,
        u.terms().map(|(m, c)| {
            (
                PairCylinder {
                    alpha: m.alpha().clone(),
                    beta: m.beta().clone(),
                },
                c.clone(),
            )
        }),
    )
}

/// The defining relations of the Leavitt path algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Relation {
    /// `p_x p_y = δ p_x`
    Projections,
    /// `v_a p_{s(a)} = p_{t(a)} v_a = v_a`
    EdgeSupport,
    /// `v_a* v_b = δ p_{s(a)}`
    Ck1,
    /// `p_x = Σ_{t(a)=x} v_a v_a*`
    Ck2,
}

impl Relation {
    pub const ALL: [Relation; 4] = [Relation::Projections, Relation::EdgeSupport, Relation::Ck1, Relation::Ck2];

    pub fn name(self) -> &'static str {
        match self {
            Relation::Projections => "projections",
            Relation::EdgeSupport => "edge-support",
            Relation::Ck1 => "ck1",
            Relation::Ck2 => "ck2",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Engine {
    Rewriting,
    Convolution,
}

impl Engine {
    pub fn name(self) -> &'static str {
        match self {
            Engine::Rewriting => "rewriting",
            Engine::Convolution => "convolution",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationCheck {
    pub relation: Relation,
    pub engine: Engine,
    pub instance: String,
    pub holds: bool,
}

/// Every instance of the four relations, evaluated in both engines.
pub fn verify_relations<S: Scalar>(graph: &Graph) -> Vec<RelationCheck> {
    let mut out = Vec::new();
    let lpa = |g: Generator| LpaElement::<S>::generator(graph, g);
    let conv = |g: Generator| ConvElement::<S>::generator(graph, g);
    let mut record = |relation, instance: String, lhs: (LpaElement<S>, ConvElement<S>), rhs: (LpaElement<S>, ConvElement<S>)| {
        out.push(RelationCheck {
            relation,
            engine: Engine::Rewriting,
            instance: instance.clone(),
            holds: lhs.0 == rhs.0,
        });
        out.push(RelationCheck {
            relation,
            engine: Engine::Convolution,
            instance,
            holds: lhs.1 == rhs.1,
        });
    };
    let both = |g: Generator| (lpa(g), conv(g));
    let mul = |x: &(LpaElement<S>, ConvElement<S>), y: &(LpaElement<S>, ConvElement<S>)| {
        (crate::leavitt::lpa_mul(graph, &x.0, &y.0), conv_mul(graph, &x.1, &y.1))
    };
    let zero = || (LpaElement::<S>::zero(), ConvElement::<S>::zero());
    let n = graph.vertex_count();
    for x in 0..n {
        for y in 0..n {
            let lhs = mul(&both(Generator::P(x)), &both(Generator::P(y)));
            let rhs = if x == y { both(Generator::P(x)) } else { zero() };
            let instance = format!("p[{}] p[{}]", graph.vertex_name(x), graph.vertex_name(y));
            record(Relation::Projections, instance, lhs, rhs);
        }
    }
    for a in 0..graph.edge_count() {
        let name = graph.edge_name(a);
        let va = both(Generator::V(a));
        let right = mul(&va, &both(Generator::P(graph.src(a))));
        let left = mul(&both(Generator::P(graph.tgt(a))), &va);
        record(Relation::EdgeSupport, format!("v[{name}] p[s]"), right, va.clone());
        record(Relation::EdgeSupport, format!("p[t] v[{name}]"), left, va);
    }
    for a in 0..graph.edge_count() {
        for b in 0..graph.edge_count() {
            let lhs = mul(&both(Generator::W(a)), &both(Generator::V(b)));
            let rhs = if a == b { both(Generator::P(graph.src(a))) } else { zero() };
            let instance = format!("w[{}] v[{}]", graph.edge_name(a), graph.edge_name(b));
            record(Relation::Ck1, instance, lhs, rhs);
        }
    }
    for x in 0..n {
        let mut sum = zero();
        for &a in graph.in_edges(x) {
            let t = mul(&both(Generator::V(a)), &both(Generator::W(a)));
            sum = (sum.0.add(&t.0), sum.1.add(graph, &t.1));
        }
        record(Relation::Ck2, format!("p[{}]", graph.vertex_name(x)), both(Generator::P(x)), sum);
    }
    out
}

/// A presheaf of finite free modules on the graph: `F(a): F(t a) → F(s a)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GSheaf<S: Scalar> {
    ranks: Vec<usize>,
    maps: Vec<Matrix<S>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SheafCheck {
    Sheaf,
    NotSquare { vertex: VertexId, rows: usize, cols: usize },
    Singular { vertex: VertexId },
}

impl SheafCheck {
    pub fn is_sheaf(&self) -> bool {
        matches!(self, SheafCheck::Sheaf)
    }

    pub fn vertex(&self) -> Option<VertexId> {
        match self {
            SheafCheck::Sheaf => None,
            SheafCheck::NotSquare { vertex, .. } | SheafCheck::Singular { vertex } => Some(*vertex),
        }
    }

    pub fn describe(&self, graph: &Graph) -> String {
        match self {
            SheafCheck::Sheaf => "sheaf".to_string(),
            SheafCheck::NotSquare { vertex, rows, cols } => format!(
                "stacked map at `{}` is {rows}×{cols}",
                graph.vertex_name(*vertex)
            ),
            SheafCheck::Singular { vertex } => {
                format!("stacked map at `{}` is not invertible", graph.vertex_name(*vertex))
            }
        }
    }
}

impl<S: Scalar> GSheaf<S> {
    pub fn new(graph: &Graph, ranks: Vec<usize>, maps: Vec<Matrix<S>>) -> Result<Self> {
        if ranks.len() != graph.vertex_count() || maps.len() != graph.edge_count() {
            return Err(Error::invalid("presheaf data does not match the graph"));
        }
        for (e, m) in maps.iter().enumerate() {
            if (m.rows(), m.cols()) != (ranks[graph.src(e)], ranks[graph.tgt(e)]) {
                return Err(Error::invalid(format!(
                    "map of `{}` should be {}×{}",
                    graph.edge_name(e),
                    ranks[graph.src(e)],
                    ranks[graph.tgt(e)]
                )));
            }
        }
        Ok(GSheaf { ranks, maps })
    }

    pub fn zero(graph: &Graph) -> Self {
        GSheaf {
            ranks: vec![0; graph.vertex_count()],
            maps: vec![Matrix::zeros(0, 0); graph.edge_count()],
        }
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn maps(&self) -> &[Matrix<S>] {
        &self.maps
    }

    /// `F(x) → ⊕_{t(a)=x} F(s a)`, incoming edges in canonical order.
    pub fn stacked_map(&self, graph: &Graph, x: VertexId) -> Matrix<S> {
        let blocks: Vec<Matrix<S>> = graph.in_edges(x).iter().map(|&e| self.maps[e].clone()).collect();
        Matrix::vstack(self.ranks[x], &blocks)
    }

    /// Rank vectors with `r(x) = Σ_{t(a)=x} r(s a)` and entries at most `max_rank`.
    pub fn rank_solutions(graph: &Graph, max_rank: usize) -> Vec<Vec<usize>> {
        let n = graph.vertex_count();
        let mut out = Vec::new();
        let mut r = vec![0usize; n];
        loop {
            let ok = (0..n).all(|x| r[x] == graph.in_edges(x).iter().map(|&e| r[graph.src(e)]).sum::<usize>());
            if ok {
                out.push(r.clone());
            }
            let mut i = 0;
            loop {
                if i == n {
                    return out;
                }
                r[i] += 1;
                if r[i] <= max_rank {
                    break;
                }
                r[i] = 0;
                i += 1;
            }
        }
    }

    /// A random sheaf: random admissible ranks and random invertible stacked maps.
    pub fn random<R: Rng + ?Sized>(graph: &Graph, rng: &mut R, max_rank: usize) -> Self {
        let solutions = Self::rank_solutions(graph, max_rank);
        let ranks = solutions[rng.gen_range(0..solutions.len())].clone();
        let mut maps: Vec<Matrix<S>> = (0..graph.edge_count())
            .map(|e| Matrix::zeros(ranks[graph.src(e)], ranks[graph.tgt(e)]))
            .collect();
        for x in 0..graph.vertex_count() {
            let stacked = Matrix::<S>::random_unimodular(ranks[x], rng);
            let mut row = 0;
            for &e in graph.in_edges(x) {
                let h = ranks[graph.src(e)];
                maps[e] = stacked.submatrix(row..row + h, 0..ranks[x]);
                row += h;
            }
        }
        GSheaf { ranks, maps }
    }
}

/// The sheaf condition: every stacked map is square and invertible over the ring.
pub fn gsheaf_check<S: Scalar>(graph: &Graph, sheaf: &GSheaf<S>) -> SheafCheck {
    for x in 0..graph.vertex_count() {
        let m = sheaf.stacked_map(graph, x);
        if m.rows() != m.cols() {
            return SheafCheck::NotSquare {
                vertex: x,
                rows: m.rows(),
                cols: m.cols(),
            };
        }
        if m.ring_inverse().is_none() {
            return SheafCheck::Singular { vertex: x };
        }
    }
    SheafCheck::Sheaf
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Q, QI};

    fn two_loops() -> Graph {
        Graph::from_names(&["x"], &[("a", "x", "x"), ("b", "x", "x")]).unwrap()
    }

    fn z(g: &Graph, a: &str, b: &str) -> PairCylinder {
        let x = 0;
        let alpha = Path::from_edge_names(g, x, a).unwrap();
        let beta = Path::from_edge_names(g, x, b).unwrap();
        PairCylinder::new(g, alpha, beta).unwrap()
    }

    #[test]
    fn composition_examples() {
        let g = two_loops();
        let e = |a: &str, b: &str| ConvElement::<Q>::basis(&g, z(&g, a, b));
        assert_eq!(conv_mul(&g, &e("a", "b"), &e("b", "")), e("a", ""));
        // v_a* v_b = 0
        assert!(conv_mul(&g, &e("", "a"), &e("b", "")).is_zero());
        // Σ Z(e,e) = Z(ε,ε)
        let sum = e("a", "a").add(&g, &e("b", "b"));
        assert_eq!(sum, e("", ""));
        assert_eq!(conv_mul(&g, &ConvElement::unit(&g), &e("a.b", "b")), e("a.b", "b"));
    }

    #[test]
    fn star_examples() {
        let g = two_loops();
        let f = ConvElement::<QI>::from_terms(&g, [(z(&g, "a", "b.b"), QI::i())]);
        let s = conv_star(&g, &f);
        assert_eq!(s.display(&g), "-i * Z(x: b.b | x: a)");
        assert_eq!(conv_star(&g, &s), f);
        let d = ConvElement::<Q>::basis(&g, z(&g, "", ""));
        assert_eq!(conv_star(&g, &d), d);
    }

    #[test]
    fn leavitt_bridge_generators() {
        let g = two_loops();
        let f = ConvElement::<Q>::basis(&g, z(&g, "a", ""));
        assert_eq!(to_leavitt(&g, &f).display(&g), "v[a]");
        assert_eq!(from_leavitt(&g, &to_leavitt(&g, &f)), f);
    }

    #[test]
    fn parse_roundtrip() {
        let g = two_loops();
        let f = ConvElement::<Q>::parse(&g, "2 * Z(x: a.b | x: b) + -1/3 * Z(x: | x: a)").unwrap();
        assert_eq!(ConvElement::parse(&g, &f.display(&g)).unwrap(), f);
        assert!(ConvElement::<Q>::parse(&g, "Z(x: a | y: b)").is_err());
    }

    #[test]
    fn sheaf_checks() {
        let one = Graph::from_names(&["x"], &[("e", "x", "x")]).unwrap();
        let s = GSheaf::<Q>::new(&one, vec![1], vec![Matrix::identity(1)]).unwrap();
        assert!(gsheaf_check(&one, &s).is_sheaf());
        let g = two_loops();
        let s = GSheaf::<Q>::new(&g, vec![1], vec![Matrix::identity(1), Matrix::identity(1)]).unwrap();
        assert_eq!(gsheaf_check(&g, &s), SheafCheck::NotSquare { vertex: 0, rows: 2, cols: 1 });
        assert_eq!(GSheaf::<Q>::rank_solutions(&g, 4), vec![vec![0]]);
        let cyc = Graph::from_names(&["x", "y"], &[("a", "x", "y"), ("b", "y", "x")]).unwrap();
        let s = GSheaf::<Q>::new(&cyc, vec![1, 1], vec![Matrix::identity(1), Matrix::identity(1)]).unwrap();
        assert!(gsheaf_check(&cyc, &s).is_sheaf());
        let s = GSheaf::<Q>::new(&cyc, vec![1, 1], vec![Matrix::identity(1), Matrix::zeros(1, 1)]).unwrap();
        assert_eq!(gsheaf_check(&cyc, &s), SheafCheck::Singular { vertex: 0 });
    }
}
