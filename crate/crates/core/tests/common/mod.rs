#![allow(dead_code)]

use std::collections::BTreeMap;

use convalg::finitegroupoid::FiniteGroupoid;
use convalg::leavitt::LpaElement;
use convalg::stonelocale::{EdgeId, Graph, Path, VertexId};
use convalg::Scalar;
use rand::Rng;

pub const GRAPHS: &[(&str, &str)] = &[
    ("one_loop", include_str!("../fixtures/graphs/one_loop.graph")),
    ("two_loops", include_str!("../fixtures/graphs/two_loops.graph")),
    ("two_cycle", include_str!("../fixtures/graphs/two_cycle.graph")),
    ("toeplitz", include_str!("../fixtures/graphs/toeplitz.graph")),
    ("dead_source", include_str!("../fixtures/graphs/dead_source.graph")),
    ("triangle_loop", include_str!("../fixtures/graphs/triangle_loop.graph")),
    ("crossed", include_str!("../fixtures/graphs/crossed.graph")),
    ("three_cycle", include_str!("../fixtures/graphs/three_cycle.graph")),
];

pub const GROUPOIDS: &[(&str, &str)] = &[
    ("trivial", include_str!("../fixtures/groupoids/trivial.gpd")),
    ("z2", include_str!("../fixtures/groupoids/z2.gpd")),
    ("z3", include_str!("../fixtures/groupoids/z3.gpd")),
    ("z4", include_str!("../fixtures/groupoids/z4.gpd")),
    ("pair2", include_str!("../fixtures/groupoids/pair2.gpd")),
    ("z2_point", include_str!("../fixtures/groupoids/z2_point.gpd")),
    ("pair2_z2", include_str!("../fixtures/groupoids/pair2_z2.gpd")),
    ("s3", include_str!("../fixtures/groupoids/s3.gpd")),
];

pub fn groupoids() -> Vec<(&'static str, FiniteGroupoid)> {
    GROUPOIDS
        .iter()
        .map(|(name, text)| (*name, FiniteGroupoid::parse(text).expect("fixture parses")))
        .collect()
}

pub fn groupoid(name: &str) -> FiniteGroupoid {
    groupoids().into_iter().find(|(n, _)| *n == name).expect("known fixture").1
}

pub fn graphs() -> Vec<(&'static str, Graph)> {
    GRAPHS
        .iter()
        .map(|(name, text)| (*name, Graph::parse(text).expect("fixture parses")))
        .collect()
}

pub fn graph(name: &str) -> Graph {
    graphs().into_iter().find(|(n, _)| *n == name).expect("known fixture").1
}

/// Applies `v_α v_β* = Σ_e v_{αe} v_{βe}*` until every `α` has length `depth`.
pub fn expand<S: Scalar>(g: &Graph, u: &LpaElement<S>, depth: usize) -> BTreeMap<(Path, Path), S> {
    let mut out: BTreeMap<(Path, Path), S> = BTreeMap::new();
    let mut stack: Vec<(Path, Path, S)> = u
        .terms()
        .map(|(m, c)| (m.alpha().clone(), m.beta().clone(), c.clone()))
        .collect();
    while let Some((a, b, c)) = stack.pop() {
        assert!(a.len() <= depth, "expansion depth too small");
        if !g.is_alive(a.source(g)) {
            continue;
        }
        if a.len() == depth {
            let e = out.entry((a, b)).or_insert_with(S::zero);
            *e = e.clone() + c;
            continue;
        }
        for e in g.live_in_edges(a.source(g)) {
            stack.push((a.extend(e), b.extend(e), c.clone()));
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

pub fn max_alpha(u: &LpaElement<impl Scalar>) -> usize {
    u.terms().map(|(m, _)| m.alpha().len()).max().unwrap_or(0)
}

/// An eventually periodic infinite backward path: a finite prefix, then
/// forever the edge chosen by `rule` at the current outermost vertex.
#[derive(Debug, Clone)]
pub struct Ray {
    pub anchor: VertexId,
    pub prefix: Vec<EdgeId>,
    pub rule: Vec<Option<EdgeId>>,
}

impl Ray {
    pub fn random<R: Rng>(g: &Graph, rng: &mut R, start: &Path, extra: usize) -> Ray {
        let mut prefix = start.edges().to_vec();
        let mut at = start.source(g);
        for _ in 0..extra {
            let live: Vec<EdgeId> = g.live_in_edges(at).collect();
            let e = live[rng.gen_range(0..live.len())];
            prefix.push(e);
            at = g.src(e);
        }
        let rule = (0..g.vertex_count())
            .map(|v| {
                let live: Vec<EdgeId> = g.live_in_edges(v).collect();
                (!live.is_empty()).then(|| live[rng.gen_range(0..live.len())])
            })
            .collect();
        Ray {
            anchor: start.anchor(),
            prefix,
            rule,
        }
    }

    pub fn edges(&self, g: &Graph, n: usize) -> Vec<EdgeId> {
        let mut out: Vec<EdgeId> = self.prefix.iter().copied().take(n).collect();
        let mut at = match out.last() {
            Some(&e) => g.src(e),
            None => self.anchor,
        };
        while out.len() < n {
            let e = self.rule[at].expect("ray stays on live vertices");
            out.push(e);
            at = g.src(e);
        }
        out
    }

    fn horizon(&self, g: &Graph, other: &Ray) -> usize {
        let v = g.vertex_count();
        self.prefix.len().max(other.prefix.len()) + 2 * v * v + 2 * v + 4
    }

    /// The ray with its first `k` edges removed.
    pub fn shift(&self, g: &Graph, k: usize) -> Ray {
        let head = self.edges(g, k + self.prefix.len());
        let anchor = if k == 0 { self.anchor } else { g.src(head[k - 1]) };
        Ray {
            anchor,
            prefix: head[k..].to_vec(),
            rule: self.rule.clone(),
        }
    }

    /// `path` followed by this ray.
    pub fn prepend(&self, g: &Graph, path: &Path) -> Ray {
        assert_eq!(path.source(g), self.anchor);
        let mut prefix = path.edges().to_vec();
        prefix.extend(&self.prefix);
        Ray {
            anchor: path.anchor(),
            prefix,
            rule: self.rule.clone(),
        }
    }

    pub fn starts_with(&self, g: &Graph, path: &Path) -> bool {
        self.anchor == path.anchor() && self.edges(g, path.len()) == path.edges()
    }

    pub fn same(&self, g: &Graph, other: &Ray) -> bool {
        let n = self.horizon(g, other);
        self.anchor == other.anchor && self.edges(g, n) == other.edges(g, n)
    }
}
