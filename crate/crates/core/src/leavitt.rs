//! Leavitt path algebras by generators and relations.
//!
//! Conventions follow `v_a = p_{t(a)} v_a p_{s(a)}`: the generator of an edge
//! sits between the projection of its target (left) and of its source
//! (right). The relations are
//!
//! * `p_e p_f = δ_{e,f} p_e`
//! * `v_a p_{s(a)} = p_{t(a)} v_a = v_a`
//! * `v_a* v_b = δ_{a,b} p_{s(a)}`
//! * `p_e = Σ_{t(a)=e} v_a v_a*`
//!
//! A path `α = a₁…aₙ` (anchor-outward, `t(a₁)` the anchor) gives the monomial
//! `v_α = v_{a₁}⋯v_{aₙ}`. Every element is a combination of `v_α v_β*` with
//! `s(α) = s(β)`. The last relation is applied in the contracting direction
//! only along the designated edge of each vertex, which terminates and yields
//! a normal form.

use std::collections::BTreeMap;

use rand::Rng;

use crate::error::{Error, Result};
use crate::graphtopos::{gsheaf_check, GSheaf, SheafCheck};
use crate::linalg::Matrix;
use crate::scalars::Scalar;
use crate::stonelocale::{EdgeId, Graph, Path, VertexId};

/// The monomial `v_α v_β*`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    alpha: Path,
    beta: Path,
}

impl Monomial {
    pub fn new(graph: &Graph, alpha: Path, beta: Path) -> Result<Self> {
        if alpha.source(graph) != beta.source(graph) {
            return Err(Error::invalid(format!(
                "v[{}] w[{}] has mismatched sources",
                alpha.display(graph),
                beta.display(graph)
            )));
        }
        Ok(Monomial { alpha, beta })
    }

    pub fn vertex(v: VertexId) -> Self {
        Monomial {
            alpha: Path::empty(v),
            beta: Path::empty(v),
        }
    }

    pub fn edge(graph: &Graph, e: EdgeId) -> Self {
        Monomial {
            alpha: Path::empty(graph.tgt(e)).extend(e),
            beta: Path::empty(graph.src(e)),
        }
    }

    pub fn edge_star(graph: &Graph, e: EdgeId) -> Self {
        Self::edge(graph, e).star()
    }

    pub fn alpha(&self) -> &Path {
        &self.alpha
    }

    pub fn beta(&self) -> &Path {
        &self.beta
    }

    /// Vertex of the left projection `p_x` in `p_x v_α v_β* p_y`.
    pub fn left(&self) -> VertexId {
        self.alpha.anchor()
    }

    pub fn right(&self) -> VertexId {
        self.beta.anchor()
    }

    pub fn source(&self, graph: &Graph) -> VertexId {
        self.alpha.source(graph)
    }

    pub fn star(&self) -> Self {
        Monomial {
            alpha: self.beta.clone(),
            beta: self.alpha.clone(),
        }
    }

    /// False when both paths end in the same designated edge.
    pub fn is_reduced(&self, graph: &Graph) -> bool {
        match (self.alpha.last_edge(), self.beta.last_edge()) {
            (Some(a), Some(b)) if a == b => graph.designated_edge(graph.tgt(a)) != Some(a),
            _ => true,
        }
    }

    pub fn display(&self, graph: &Graph) -> String {
        let mut parts = Vec::new();
        if !self.alpha.is_empty() {
            parts.push(format!("v[{}]", self.alpha.edge_names(graph)));
        }
        if !self.beta.is_empty() {
            parts.push(format!("w[{}]", self.beta.edge_names(graph)));
        }
        if parts.is_empty() {
            return format!("p[{}]", graph.vertex_name(self.alpha.anchor()));
        }
        parts.join(" * ")
    }
}

/// A generator of the algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    P(VertexId),
    V(EdgeId),
    W(EdgeId),
}

impl Generator {
    pub fn all(graph: &Graph) -> Vec<Generator> {
        let mut out: Vec<Generator> = (0..graph.vertex_count()).map(Generator::P).collect();
        out.extend((0..graph.edge_count()).map(Generator::V));
        out.extend((0..graph.edge_count()).map(Generator::W));
        out
    }

    pub fn monomial(self, graph: &Graph) -> Monomial {
        match self {
            Generator::P(v) => Monomial::vertex(v),
            Generator::V(e) => Monomial::edge(graph, e),
            Generator::W(e) => Monomial::edge_star(graph, e),
        }
    }

    pub fn name(self, graph: &Graph) -> String {
        match self {
            Generator::P(v) => format!("p[{}]", graph.vertex_name(v)),
            Generator::V(e) => format!("v[{}]", graph.edge_name(e)),
            Generator::W(e) => format!("w[{}]", graph.edge_name(e)),
        }
    }
}

/// A random word of `1..=max_len` generators.
pub fn random_word<R: Rng + ?Sized>(graph: &Graph, rng: &mut R, max_len: usize) -> Vec<Generator> {
    let all = Generator::all(graph);
    let len = rng.gen_range(1..=max_len.max(1));
    (0..len).map(|_| all[rng.gen_range(0..all.len())]).collect()
}

/// A random monomial `v_α v_β*` with `|α|, |β| ≤ max_len` and a live source.
pub fn random_monomial<R: Rng + ?Sized>(graph: &Graph, rng: &mut R, max_len: usize) -> Option<Monomial> {
    let live: Vec<VertexId> = (0..graph.vertex_count()).filter(|&v| graph.is_alive(v)).collect();
    if live.is_empty() {
        return None;
    }
    let v = live[rng.gen_range(0..live.len())];
    let walk = |rng: &mut R| {
        let len = rng.gen_range(0..=max_len);
        let mut at = v;
        let mut forward = Vec::new();
        for _ in 0..len {
            let outs: Vec<EdgeId> = graph.out_edges(at).collect();
            if outs.is_empty() {
                break;
            }
            let e = outs[rng.gen_range(0..outs.len())];
            forward.push(e);
            at = graph.tgt(e);
        }
        forward.reverse();
        Path::new(graph, at, forward).expect("walk composes")
    };
    let alpha = walk(rng);
    let beta = walk(rng);
    Some(Monomial { alpha, beta })
}

/// Random combination of at most `max_terms` monomials with small coefficients.
pub fn random_element<S: Scalar, R: Rng + ?Sized>(
    graph: &Graph,
    rng: &mut R,
    max_terms: usize,
    max_len: usize,
) -> LpaElement<S> {
    let n = rng.gen_range(0..=max_terms);
    let terms: Vec<(Monomial, S)> = (0..n)
        .filter_map(|_| random_monomial(graph, rng, max_len).map(|m| (m, S::sample(rng))))
        .collect();
    LpaElement::from_terms(graph, terms)
}

/// Product of monomials by contracting the middle `v_β* v_γ`.
pub fn monomial_product(graph: &Graph, x: &Monomial, y: &Monomial) -> Option<Monomial> {
    if x.beta.anchor() != y.alpha.anchor() {
        return None;
    }
    let m = if let Some(tau) = x.beta.strip_from(&y.alpha) {
        Monomial {
            alpha: x.alpha.concat(tau),
            beta: y.beta.clone(),
        }
    } else if let Some(tau) = y.alpha.strip_from(&x.beta) {
        Monomial {
            alpha: x.alpha.clone(),
            beta: y.beta.concat(tau),
        }
    } else {
        return None;
    };
    graph.is_alive(m.source(graph)).then_some(m)
}

/// A Leavitt path algebra element in normal form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LpaElement<S> {
    terms: BTreeMap<Monomial, S>,
}

impl<S: Scalar> LpaElement<S> {
    pub fn zero() -> Self {
        LpaElement {
            terms: BTreeMap::new(),
        }
    }

    /// Normalizes an arbitrary combination of monomials.
    pub fn from_terms(graph: &Graph, terms: impl IntoIterator<Item = (Monomial, S)>) -> Self {
        let mut out: BTreeMap<Monomial, S> = BTreeMap::new();
        for (m, c) in terms {
            reduce_into(graph, m, c, &mut out);
        }
        out.retain(|_, c| !c.is_zero());
        LpaElement { terms: out }
    }

    pub fn monomial(graph: &Graph, m: Monomial) -> Self {
        Self::from_terms(graph, [(m, S::one())])
    }

    pub fn p(graph: &Graph, v: VertexId) -> Self {
        Self::monomial(graph, Monomial::vertex(v))
    }

    pub fn v(graph: &Graph, e: EdgeId) -> Self {
        Self::monomial(graph, Monomial::edge(graph, e))
    }

    pub fn w(graph: &Graph, e: EdgeId) -> Self {
        Self::monomial(graph, Monomial::edge_star(graph, e))
    }

    /// `Σ p_e`, the unit.
    pub fn unit(graph: &Graph) -> Self {
        Self::from_terms(
            graph,
            (0..graph.vertex_count()).map(|v| (Monomial::vertex(v), S::one())),
        )
    }

    pub fn generator(graph: &Graph, gen: Generator) -> Self {
        Self::monomial(graph, gen.monomial(graph))
    }

    /// The product of a word of generators.
    pub fn word(graph: &Graph, word: &[Generator]) -> Self {
        word.iter().fold(Self::unit(graph), |acc, &g| {
            lpa_mul(graph, &acc, &Self::generator(graph, g))
        })
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &S)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> S {
        self.terms.get(m).cloned().unwrap_or_else(S::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            let entry = terms.entry(m.clone()).or_insert_with(S::zero);
            *entry = entry.clone() + c.clone();
        }
        terms.retain(|_, c| !c.is_zero());
        LpaElement { terms }
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut terms: BTreeMap<Monomial, S> = self
            .terms
            .iter()
            .map(|(m, x)| (m.clone(), c.clone() * x.clone()))
            .collect();
        terms.retain(|_, c| !c.is_zero());
        LpaElement { terms }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-S::one())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Parses `c * v[a.b] * w[c] + p[x] - ...`; products of factors are multiplied out.
    pub fn parse(graph: &Graph, text: &str) -> Result<Self> {
        parse_element(graph, text)
    }

    pub fn display(&self, graph: &Graph) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        self.terms
            .iter()
            .map(|(m, c)| {
                if c.is_one() {
                    m.display(graph)
                } else {
                    format!("{c} * {}", m.display(graph))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

fn accumulate<S: Scalar>(out: &mut BTreeMap<Monomial, S>, m: Monomial, c: S) {
    let entry = out.entry(m).or_insert_with(S::zero);
    *entry = entry.clone() + c;
}

/// `v_{α'd} v_{β'd}* → v_α' v_β'* − Σ_{e≠d} v_{α'e} v_{β'e}*`, repeated while the
/// contracted monomial still ends in a designated pair.
fn reduce_into<S: Scalar>(graph: &Graph, m: Monomial, c: S, out: &mut BTreeMap<Monomial, S>) {
    if c.is_zero() || !graph.is_alive(m.source(graph)) {
        return;
    }
    let mut current = m;
    while !current.is_reduced(graph) {
        let d = current.alpha.last_edge().expect("reducible monomial has edges");
        let before = current.alpha.len() + current.beta.len();
        let alpha = current.alpha.parent().expect("nonempty");
        let beta = current.beta.parent().expect("nonempty");
        for e in graph.live_in_edges(graph.tgt(d)) {
            if e != d {
                // last edge e is not designated, so these are already reduced
                accumulate(
                    out,
                    Monomial {
                        alpha: alpha.extend(e),
                        beta: beta.extend(e),
                    },
                    -c.clone(),
                );
            }
        }
        current = Monomial { alpha, beta };
        assert!(current.alpha.len() + current.beta.len() < before);
    }
    accumulate(out, current, c);
}

pub fn lpa_mul<S: Scalar>(graph: &Graph, u: &LpaElement<S>, v: &LpaElement<S>) -> LpaElement<S> {
    let mut raw = Vec::new();
    for (x, c) in &u.terms {
        for (y, d) in &v.terms {
            if let Some(m) = monomial_product(graph, x, y) {
                raw.push((m, c.clone() * d.clone()));
            }
        }
    }
    LpaElement::from_terms(graph, raw)
}

pub fn lpa_star<S: Scalar>(graph: &Graph, u: &LpaElement<S>) -> LpaElement<S> {
    LpaElement::from_terms(graph, u.terms.iter().map(|(m, c)| (m.star(), c.star())))
}

pub fn lpa_equal<S: Scalar>(u: &LpaElement<S>, v: &LpaElement<S>) -> bool {
    u == v
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Plus,
    Minus,
    Times,
    Word(String),
}

fn tokenize(text: &str) -> Vec<(Token, usize)> {
    let mut out = Vec::new();
    let mut offset = 0;
    for raw in text.split_inclusive(char::is_whitespace) {
        let word = raw.trim_end();
        let start = offset;
        offset += raw.len();
        if word.is_empty() {
            continue;
        }
        match word {
            "+" => out.push((Token::Plus, start + 1)),
            "-" => out.push((Token::Minus, start + 1)),
            _ => {
                let mut col = start;
                for (i, piece) in word.split('*').enumerate() {
                    if i > 0 {
                        out.push((Token::Times, col + 1));
                        col += 1;
                    }
                    if !piece.is_empty() {
                        out.push((Token::Word(piece.to_string()), col + 1));
                    }
                    col += piece.len();
                }
            }
        }
    }
    out
}

fn parse_factor<S: Scalar>(graph: &Graph, word: &str, col: usize) -> Result<LpaElement<S>> {
    let bad = |m: String| Error::parse(1, col, m);
    if let Some(neg) = word.strip_prefix('-') {
        if neg.starts_with(['v', 'w', 'p']) && neg.contains('[') {
            return Ok(parse_factor::<S>(graph, neg, col + 1)?.neg());
        }
    }
    let generator = word
        .split_once('[')
        .and_then(|(head, rest)| rest.strip_suffix(']').map(|body| (head, body)));
    let Some((head, body)) = generator else {
        let c = S::parse(word).map_err(|e| bad(format!("expected scalar or generator: {e}")))?;
        return Ok(LpaElement::from_terms(graph, (0..graph.vertex_count()).map(|v| (Monomial::vertex(v), c.clone()))));
    };
    match head {
        "p" => {
            let v = graph
                .vertex(body)
                .ok_or_else(|| bad(format!("unknown vertex `{body}`")))?;
            Ok(LpaElement::p(graph, v))
        }
        "v" | "w" => {
            if body.is_empty() {
                return Err(bad("empty path".to_string()));
            }
            let mut edges = Vec::new();
            for name in body.split('.') {
                edges.push(
                    graph
                        .edge(name)
                        .ok_or_else(|| bad(format!("unknown edge `{name}`")))?,
                );
            }
            let path = Path::new(graph, graph.tgt(edges[0]), edges)
                .map_err(|e| bad(e.to_string()))?;
            let src = Path::empty(path.source(graph));
            let m = if head == "v" {
                Monomial { alpha: path, beta: src }
            } else {
                Monomial { alpha: src, beta: path }
            };
            Ok(LpaElement::monomial(graph, m))
        }
        other => Err(bad(format!("unknown generator `{other}[`"))),
    }
}

fn parse_element<S: Scalar>(graph: &Graph, text: &str) -> Result<LpaElement<S>> {
    let tokens = tokenize(text);
    if tokens.len() == 1 && tokens[0].0 == Token::Word("0".into()) {
        return Ok(LpaElement::zero());
    }
    if tokens.is_empty() {
        return Err(Error::parse(1, 1, "empty element"));
    }
    let mut total = LpaElement::zero();
    let mut i = 0;
    let mut sign = S::one();
    if let Some((Token::Minus, _)) = tokens.first() {
        sign = -S::one();
        i = 1;
    }
    loop {
        // one term: factor (* factor)*
        let mut term: Option<LpaElement<S>> = None;
        loop {
            let (tok, col) = tokens
                .get(i)
                .ok_or_else(|| Error::parse(1, text.len() + 1, "expected a factor"))?;
            let Token::Word(w) = tok else {
                return Err(Error::parse(1, *col, "expected a factor"));
            };
            let f = parse_factor::<S>(graph, w, *col)?;
            term = Some(match term {
                None => f,
                Some(t) => lpa_mul(graph, &t, &f),
            });
            i += 1;
            match tokens.get(i) {
                Some((Token::Times, _)) => i += 1,
                _ => break,
            }
        }
        total = total.add(&term.expect("nonempty term").scale(&sign));
        match tokens.get(i) {
            None => break,
            Some((Token::Plus, _)) => sign = S::one(),
            Some((Token::Minus, _)) => sign = -S::one(),
            Some((_, col)) => return Err(Error::parse(1, *col, "expected `+` or `-`")),
        }
        i += 1;
    }
    Ok(total)
}

/// A finite-dimensional right module, `M = ⊕ M(e)` with `M(e) = M·p_e`.
///
/// Right multiplication by `v_a` maps `M(t(a)) → M(s(a))`, by `v_a*` the
/// other way. Actions are stored as column-vector matrices, so
/// `m·x = R(x) m` and `R(xy) = R(y) R(x)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpaModule<S: Scalar> {
    ranks: Vec<usize>,
    offsets: Vec<usize>,
    v_blocks: Vec<Matrix<S>>,
    w_blocks: Vec<Matrix<S>>,
}

impl<S: Scalar> LpaModule<S> {
    /// `v_blocks[a]` is `r(s a) × r(t a)`, `w_blocks[a]` is `r(t a) × r(s a)`.
    pub fn new(
        graph: &Graph,
        ranks: Vec<usize>,
        v_blocks: Vec<Matrix<S>>,
        w_blocks: Vec<Matrix<S>>,
    ) -> Result<Self> {
        if ranks.len() != graph.vertex_count()
            || v_blocks.len() != graph.edge_count()
            || w_blocks.len() != graph.edge_count()
        {
            return Err(Error::invalid("module data does not match the graph"));
        }
        for e in 0..graph.edge_count() {
            let (s, t) = (ranks[graph.src(e)], ranks[graph.tgt(e)]);
            if (v_blocks[e].rows(), v_blocks[e].cols()) != (s, t)
                || (w_blocks[e].rows(), w_blocks[e].cols()) != (t, s)
            {
                return Err(Error::invalid(format!(
                    "action blocks of `{}` have the wrong shape",
                    graph.edge_name(e)
                )));
            }
        }
        let mut offsets = Vec::with_capacity(ranks.len());
        let mut acc = 0;
        for r in &ranks {
            offsets.push(acc);
            acc += r;
        }
        let module = LpaModule {
            ranks,
            offsets,
            v_blocks,
            w_blocks,
        };
        module.check_relations(graph)?;
        Ok(module)
    }

    fn check_relations(&self, graph: &Graph) -> Result<()> {
        for a in 0..graph.edge_count() {
            for b in 0..graph.edge_count() {
                if graph.tgt(a) != graph.tgt(b) {
                    continue;
                }
                // R(v_a* v_b) = R(v_b) R(v_a*) = δ R(p_{s(a)})
                let prod = self.v_blocks[b].mul(&self.w_blocks[a]);
                let expect = if a == b {
                    Matrix::identity(self.ranks[graph.src(a)])
                } else {
                    Matrix::zeros(prod.rows(), prod.cols())
                };
                if prod != expect {
                    return Err(Error::invalid(format!(
                        "relation v*[{}] v[{}] fails",
                        graph.edge_name(a),
                        graph.edge_name(b)
                    )));
                }
            }
        }
        for x in 0..graph.vertex_count() {
            let r = self.ranks[x];
            let mut sum = Matrix::zeros(r, r);
            for &e in graph.in_edges(x) {
                sum = sum.add(&self.w_blocks[e].mul(&self.v_blocks[e]));
            }
            if sum != Matrix::identity(r) {
                return Err(Error::invalid(format!(
                    "relation p[{}] = Σ v v* fails",
                    graph.vertex_name(x)
                )));
            }
        }
        Ok(())
    }

    pub fn zero(graph: &Graph) -> Self {
        let ranks = vec![0; graph.vertex_count()];
        let v = (0..graph.edge_count()).map(|_| Matrix::zeros(0, 0)).collect::<Vec<_>>();
        LpaModule::new(graph, ranks, v.clone(), v).expect("zero module")
    }

    pub fn dim(&self) -> usize {
        self.ranks.iter().sum()
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn v_block(&self, e: EdgeId) -> &Matrix<S> {
        &self.v_blocks[e]
    }

    pub fn w_block(&self, e: EdgeId) -> &Matrix<S> {
        &self.w_blocks[e]
    }

    pub fn projection(&self, x: VertexId) -> Matrix<S> {
        let mut m = Matrix::zeros(self.dim(), self.dim());
        m.set_block(self.offsets[x], self.offsets[x], &Matrix::identity(self.ranks[x]));
        m
    }

    pub fn action_v(&self, graph: &Graph, e: EdgeId) -> Matrix<S> {
        let mut m = Matrix::zeros(self.dim(), self.dim());
        m.set_block(self.offsets[graph.src(e)], self.offsets[graph.tgt(e)], &self.v_blocks[e]);
        m
    }

    pub fn action_w(&self, graph: &Graph, e: EdgeId) -> Matrix<S> {
        let mut m = Matrix::zeros(self.dim(), self.dim());
        m.set_block(self.offsets[graph.tgt(e)], self.offsets[graph.src(e)], &self.w_blocks[e]);
        m
    }

    /// Matrix of right multiplication by `u`.
    pub fn act(&self, graph: &Graph, u: &LpaElement<S>) -> Matrix<S> {
        let n = self.dim();
        let mut total = Matrix::zeros(n, n);
        for (m, c) in u.terms() {
            // R(v_α v_β*) = R(v_β*) R(v_α); R(v_α) = R(v_aₙ)⋯R(v_a₁)
            let mut r = self.projection(m.left());
            for &e in m.alpha().edges() {
                r = self.action_v(graph, e).mul(&r);
            }
            for &e in m.beta().edges().iter().rev() {
                r = self.action_w(graph, e).mul(&r);
            }
            total = total.add(&r.scale(c));
        }
        total
    }
}

/// `M = ⊕ F(x)` with `v_a` acting by `F(a)` and `v_a*` by the matching block of
/// the inverse of the stacked sheaf map.
pub fn module_from_gsheaf<S: Scalar>(graph: &Graph, sheaf: &GSheaf<S>) -> Result<LpaModule<S>> {
    match gsheaf_check(graph, sheaf) {
        SheafCheck::Sheaf => {}
        bad => return Err(Error::invalid(format!("not a sheaf: {}", bad.describe(graph)))),
    }
    let ranks = sheaf.ranks().to_vec();
    let mut w_blocks: Vec<Matrix<S>> = (0..graph.edge_count())
        .map(|e| Matrix::zeros(ranks[graph.tgt(e)], ranks[graph.src(e)]))
        .collect();
    for x in 0..graph.vertex_count() {
        let stacked = sheaf.stacked_map(graph, x);
        let inverse = stacked.ring_inverse().expect("sheaf check passed");
        let mut col = 0;
        for &e in graph.in_edges(x) {
            let width = ranks[graph.src(e)];
            w_blocks[e] = inverse.submatrix(0..ranks[x], col..col + width);
            col += width;
        }
    }
    LpaModule::new(graph, ranks, sheaf.maps().to_vec(), w_blocks)
}

pub fn gsheaf_from_module<S: Scalar>(graph: &Graph, module: &LpaModule<S>) -> Result<GSheaf<S>> {
    let sheaf = GSheaf::new(graph, module.ranks.clone(), module.v_blocks.clone())?;
    match gsheaf_check(graph, &sheaf) {
        SheafCheck::Sheaf => Ok(sheaf),
        bad => Err(Error::invalid(format!(
            "module does not define a sheaf: {}",
            bad.describe(graph)
        ))),
    }
}
