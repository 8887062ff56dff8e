//! The convolution category over a family of separating objects.
//!
//! A morphism `i → j` is a compactly supported section on `X_j × X_i`; the
//! three shipped families realize these sections as pair-cylinder
//! combinations (graphs), functions on arrows (finite groupoids) and
//! invariant kernels (the `Z/p^k` tower). This module is written against the
//! [`InstanceFamily`] contract and adds the generic pieces: checked
//! composition, pushforward along maps with finite fibers, the coequalizer
//! engine and the exchange of variables.

use std::collections::BTreeMap;
use std::fmt::{Debug, Display};

use rand::RngCore;

use crate::error::{Error, Result};
use crate::finitegroupoid::{gpd_convolve, gpd_star, ArrowId, FiniteGroupoid, GpdElement, ObjectId};
use crate::graphtopos::{conv_mul, conv_star, from_leavitt, ConvElement, PairCylinder};
use crate::hecke::{hecke_compose, hecke_star, TowerElement};
use crate::leavitt::random_element;
use crate::linalg::{Cokernel, Matrix, Quotient};
use crate::scalars::Scalar;
use crate::stonelocale::{Clopen, Graph, LCSection, Path, VertexId};

/// A concrete family of separating objects with its hom-sections.
///
/// Sections are identified by basis labels `(row, col)`: `row` indexes the
/// target factor and `col` the source factor of `X_j × X_i`.
pub trait InstanceFamily {
    type Scalar: Scalar;
    type Object: Clone + Ord + Debug + Display;
    type Section: Clone + PartialEq + Debug;
    type Row: Clone + Ord + Debug;
    type Col: Clone + Ord + Debug;

    fn objects(&self) -> Vec<Self::Object>;

    /// Whether `section` is a normal-form section `src → tgt`.
    fn contains(&self, src: &Self::Object, tgt: &Self::Object, section: &Self::Section) -> bool;

    fn zero(&self, src: &Self::Object, tgt: &Self::Object) -> Self::Section;

    /// Basis sections `src → tgt` representable at `depth`; the basis at
    /// `depth` is contained in the basis at `depth + 1`.
    fn basis(&self, src: &Self::Object, tgt: &Self::Object, depth: usize) -> Vec<Self::Section>;

    fn add(&self, a: &Self::Section, b: &Self::Section) -> Self::Section;

    fn scale(&self, a: &Self::Section, c: &Self::Scalar) -> Self::Section;

    /// `g ∘ f`.
    fn compose(&self, f: &Self::Section, g: &Self::Section) -> Self::Section;

    fn star(&self, f: &Self::Section) -> Self::Section;

    /// A diagonal indicator `u: src → src` with `f ∘ u = f`.
    fn support_unit(&self, src: &Self::Object, f: &Self::Section) -> Self::Section;

    fn terms(&self, f: &Self::Section) -> Vec<((Self::Row, Self::Col), Self::Scalar)>;

    fn from_terms(
        &self,
        src: &Self::Object,
        tgt: &Self::Object,
        terms: Vec<((Self::Row, Self::Col), Self::Scalar)>,
    ) -> Result<Self::Section>;

    fn label(&self, row: &Self::Row, col: &Self::Col) -> String;

    fn random(&self, src: &Self::Object, tgt: &Self::Object, rng: &mut dyn RngCore) -> Self::Section;
}

/// A morphism `source → target` of the convolution category.
pub struct AlgebroidElement<F: InstanceFamily> {
    pub source: F::Object,
    pub target: F::Object,
    pub section: F::Section,
}

impl<F: InstanceFamily> Clone for AlgebroidElement<F> {
    fn clone(&self) -> Self {
        AlgebroidElement {
            source: self.source.clone(),
            target: self.target.clone(),
            section: self.section.clone(),
        }
    }
}

impl<F: InstanceFamily> PartialEq for AlgebroidElement<F> {
    fn eq(&self, other: &Self) -> bool {
        self.source == other.source && self.target == other.target && self.section == other.section
    }
}

impl<F: InstanceFamily> Debug for AlgebroidElement<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} -> {}: {:?}", self.source, self.target, self.section)
    }
}

impl<F: InstanceFamily> AlgebroidElement<F> {
    pub fn new(fam: &F, source: F::Object, target: F::Object, section: F::Section) -> Result<Self> {
        if !fam.contains(&source, &target, &section) {
            return Err(Error::invalid(format!("section is not a morphism {source} -> {target}")));
        }
        Ok(AlgebroidElement { source, target, section })
    }

    pub fn zero(fam: &F, source: F::Object, target: F::Object) -> Self {
        let section = fam.zero(&source, &target);
        AlgebroidElement { source, target, section }
    }

    pub fn random(fam: &F, source: F::Object, target: F::Object, rng: &mut dyn RngCore) -> Self {
        let section = fam.random(&source, &target, rng);
        AlgebroidElement { source, target, section }
    }

    pub fn basis(fam: &F, source: F::Object, target: F::Object, depth: usize) -> Vec<Self> {
        fam.basis(&source, &target, depth)
            .into_iter()
            .map(|section| AlgebroidElement {
                source: source.clone(),
                target: target.clone(),
                section,
            })
            .collect()
    }

    fn signature(&self) -> String {
        format!("{} -> {}", self.source, self.target)
    }

    pub fn add(&self, fam: &F, other: &Self) -> Result<Self> {
        if (&self.source, &self.target) != (&other.source, &other.target) {
            return Err(Error::ObjectMismatch {
                left: self.signature(),
                right: other.signature(),
            });
        }
        Ok(AlgebroidElement {
            section: fam.add(&self.section, &other.section),
            ..self.clone()
        })
    }

    pub fn scale(&self, fam: &F, c: &F::Scalar) -> Self {
        AlgebroidElement {
            section: fam.scale(&self.section, c),
            ..self.clone()
        }
    }

    /// `(label, coefficient)` pairs sorted by label.
    pub fn serialize(&self, fam: &F) -> Vec<(String, String)> {
        let mut out: Vec<(String, String)> = fam
            .terms(&self.section)
            .into_iter()
            .map(|((r, c), s)| (fam.label(&r, &c), s.to_string()))
            .collect();
        out.sort();
        out
    }
}

/// `g ∘ f` for `f: i → j`, `g: j → k`.
pub fn compose<F: InstanceFamily>(
    fam: &F,
    f: &AlgebroidElement<F>,
    g: &AlgebroidElement<F>,
) -> Result<AlgebroidElement<F>> {
    if f.target != g.source {
        return Err(Error::ObjectMismatch {
            left: f.signature(),
            right: g.signature(),
        });
    }
    Ok(AlgebroidElement {
        source: f.source.clone(),
        target: g.target.clone(),
        section: fam.compose(&f.section, &g.section),
    })
}

pub fn star<F: InstanceFamily>(fam: &F, f: &AlgebroidElement<F>) -> AlgebroidElement<F> {
    AlgebroidElement {
        source: f.target.clone(),
        target: f.source.clone(),
        section: fam.star(&f.section),
    }
}

/// The local unit `u` at the source with `f ∘ u = f`, built from the support of `f`.
pub fn local_unit<F: InstanceFamily>(fam: &F, f: &AlgebroidElement<F>) -> AlgebroidElement<F> {
    AlgebroidElement {
        source: f.source.clone(),
        target: f.source.clone(),
        section: fam.support_unit(&f.source, &f.section),
    }
}

/// `Γ_c(Y × X; V) → Γ_c(Y; ⊕_{x ∈ X} V)`: the coefficients grouped by the
/// source label.
pub type Exchanged<F> =
    BTreeMap<<F as InstanceFamily>::Col, Vec<(<F as InstanceFamily>::Row, <F as InstanceFamily>::Scalar)>>;

pub fn exchange<F: InstanceFamily>(fam: &F, f: &AlgebroidElement<F>) -> Exchanged<F> {
    let mut out: Exchanged<F> = BTreeMap::new();
    for ((r, c), s) in fam.terms(&f.section) {
        out.entry(c).or_default().push((r, s));
    }
    out
}

/// Inverse of [`exchange`].
pub fn unexchange<F: InstanceFamily>(
    fam: &F,
    source: F::Object,
    target: F::Object,
    data: Exchanged<F>,
) -> Result<AlgebroidElement<F>> {
    let terms = data
        .into_iter()
        .flat_map(|(c, col)| col.into_iter().map(move |(r, s)| ((r, c.clone()), s)))
        .collect();
    let section = fam.from_terms(&source, &target, terms)?;
    Ok(AlgebroidElement { source, target, section })
}

// ---------------------------------------------------------------------------
// graph family

/// Separating objects are the path spaces `P_v` of the live vertices.
pub struct GraphFamily<'a, S> {
    pub graph: &'a Graph,
    /// Bounds for [`InstanceFamily::random`]: number of terms and word length.
    pub random_terms: usize,
    pub random_len: usize,
    _ring: std::marker::PhantomData<S>,
}

impl<'a, S> GraphFamily<'a, S> {
    pub fn new(graph: &'a Graph) -> Self {
        GraphFamily {
            graph,
            random_terms: 3,
            random_len: 3,
            _ring: std::marker::PhantomData,
        }
    }
}

/// A vertex as an object, displayed by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Vertex(pub VertexId);

impl Display for Vertex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "v{}", self.0)
    }
}

impl<S: Scalar> InstanceFamily for GraphFamily<'_, S> {
    type Scalar = S;
    type Object = Vertex;
    type Section = ConvElement<S>;
    type Row = Path;
    type Col = Path;

    fn objects(&self) -> Vec<Vertex> {
        (0..self.graph.vertex_count())
            .filter(|&v| self.graph.is_alive(v))
            .map(Vertex)
            .collect()
    }

    fn contains(&self, src: &Vertex, tgt: &Vertex, section: &ConvElement<S>) -> bool {
        section.terms().all(|(z, _)| z.left() == tgt.0 && z.right() == src.0)
            && ConvElement::from_terms(self.graph, section.terms().map(|(z, c)| (z.clone(), c.clone()))) == *section
    }

    fn zero(&self, _: &Vertex, _: &Vertex) -> ConvElement<S> {
        ConvElement::zero()
    }

    fn basis(&self, src: &Vertex, tgt: &Vertex, depth: usize) -> Vec<ConvElement<S>> {
        let g = self.graph;
        let mut out = Vec::new();
        for la in 0..=depth {
            for alpha in g.extensions(&Path::empty(tgt.0), la) {
                for lb in 0..=depth {
                    for beta in g.extensions(&Path::empty(src.0), lb) {
                        let Ok(z) = PairCylinder::new(g, alpha.clone(), beta) else { continue };
                        let e: ConvElement<S> = ConvElement::basis(g, z.clone());
                        let normal = e.len() == 1 && e.terms().all(|(w, c)| *w == z && c.is_one());
                        if normal {
                            out.push(e);
                        }
                    }
                }
            }
        }
        out
    }

    fn add(&self, a: &ConvElement<S>, b: &ConvElement<S>) -> ConvElement<S> {
        a.add(self.graph, b)
    }

    fn scale(&self, a: &ConvElement<S>, c: &S) -> ConvElement<S> {
        a.scale(self.graph, c)
    }

    fn compose(&self, f: &ConvElement<S>, g: &ConvElement<S>) -> ConvElement<S> {
        conv_mul(self.graph, g, f)
    }

    fn star(&self, f: &ConvElement<S>) -> ConvElement<S> {
        conv_star(self.graph, f)
    }

    fn support_unit(&self, src: &Vertex, f: &ConvElement<S>) -> ConvElement<S> {
        let g = self.graph;
        let betas: Vec<Path> = f.level_sets(g).into_iter().map(|(z, _)| z.beta().clone()).collect();
        let region = Clopen::from_cylinders(g, src.0, betas).expect("source cylinders share the anchor");
        ConvElement::from_terms(
            g,
            region
                .cylinders()
                .iter()
                .map(|p| (PairCylinder::new(g, p.clone(), p.clone()).expect("diagonal pair"), S::one())),
        )
    }

    fn terms(&self, f: &ConvElement<S>) -> Vec<((Path, Path), S)> {
        f.terms()
            .map(|(z, c)| ((z.alpha().clone(), z.beta().clone()), c.clone()))
            .collect()
    }

    fn from_terms(&self, src: &Vertex, tgt: &Vertex, terms: Vec<((Path, Path), S)>) -> Result<ConvElement<S>> {
        let mut pairs = Vec::with_capacity(terms.len());
        for ((a, b), c) in terms {
            if a.anchor() != tgt.0 || b.anchor() != src.0 {
                return Err(Error::ObjectMismatch {
                    left: format!("{src} -> {tgt}"),
                    right: format!("v{} -> v{}", b.anchor(), a.anchor()),
                });
            }
            pairs.push((PairCylinder::new(self.graph, a, b)?, c));
        }
        Ok(ConvElement::from_terms(self.graph, pairs))
    }

    fn label(&self, row: &Path, col: &Path) -> String {
        format!("[{}|{}]", row.display(self.graph), col.display(self.graph))
    }

    fn random(&self, src: &Vertex, tgt: &Vertex, mut rng: &mut dyn RngCore) -> ConvElement<S> {
        let u = random_element::<S, _>(self.graph, &mut rng, self.random_terms, self.random_len);
        from_leavitt(self.graph, &u).block(tgt.0, src.0)
    }
}

// ---------------------------------------------------------------------------
// finite groupoid family

/// Separating objects are the objects of the groupoid; `i → j` sections are
/// functions on the arrows from `i` to `j`.
pub struct GroupoidFamily<'a, S> {
    pub groupoid: &'a FiniteGroupoid,
    _ring: std::marker::PhantomData<S>,
}

impl<'a, S> GroupoidFamily<'a, S> {
    pub fn new(groupoid: &'a FiniteGroupoid) -> Self {
        GroupoidFamily {
            groupoid,
            _ring: std::marker::PhantomData,
        }
    }
}

/// An object of a finite groupoid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Obj(pub ObjectId);

impl Display for Obj {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "o{}", self.0)
    }
}

impl<S: Scalar> InstanceFamily for GroupoidFamily<'_, S> {
    type Scalar = S;
    type Object = Obj;
    type Section = GpdElement<S>;
    type Row = ArrowId;
    type Col = ();

    fn objects(&self) -> Vec<Obj> {
        (0..self.groupoid.object_count()).map(Obj).collect()
    }

    fn contains(&self, src: &Obj, tgt: &Obj, section: &GpdElement<S>) -> bool {
        section
            .terms()
            .all(|(a, c)| !c.is_zero() && self.groupoid.src(a) == src.0 && self.groupoid.tgt(a) == tgt.0)
    }

    fn zero(&self, _: &Obj, _: &Obj) -> GpdElement<S> {
        GpdElement::zero()
    }

    fn basis(&self, src: &Obj, tgt: &Obj, _depth: usize) -> Vec<GpdElement<S>> {
        self.groupoid.arrows_between(src.0, tgt.0).map(GpdElement::delta).collect()
    }

    fn add(&self, a: &GpdElement<S>, b: &GpdElement<S>) -> GpdElement<S> {
        a.add(b)
    }

    fn scale(&self, a: &GpdElement<S>, c: &S) -> GpdElement<S> {
        a.scale(c)
    }

    fn compose(&self, f: &GpdElement<S>, g: &GpdElement<S>) -> GpdElement<S> {
        gpd_convolve(self.groupoid, g, f)
    }

    fn star(&self, f: &GpdElement<S>) -> GpdElement<S> {
        gpd_star(self.groupoid, f)
    }

    fn support_unit(&self, src: &Obj, _f: &GpdElement<S>) -> GpdElement<S> {
        GpdElement::delta(self.groupoid.identity(src.0))
    }

    fn terms(&self, f: &GpdElement<S>) -> Vec<((ArrowId, ()), S)> {
        f.terms().map(|(a, c)| ((a, ()), c.clone())).collect()
    }

    fn from_terms(&self, src: &Obj, tgt: &Obj, terms: Vec<((ArrowId, ()), S)>) -> Result<GpdElement<S>> {
        let g = self.groupoid;
        if let Some(((a, _), _)) = terms.iter().find(|((a, _), _)| g.src(*a) != src.0 || g.tgt(*a) != tgt.0) {
            return Err(Error::ObjectMismatch {
                left: format!("{src} -> {tgt}"),
                right: g.arrow_name(*a).to_string(),
            });
        }
        Ok(GpdElement::from_terms(terms.into_iter().map(|((a, _), c)| (a, c))))
    }

    fn label(&self, row: &ArrowId, _: &()) -> String {
        self.groupoid.arrow_name(*row).to_string()
    }

    fn random(&self, src: &Obj, tgt: &Obj, rng: &mut dyn RngCore) -> GpdElement<S> {
        GpdElement::from_terms(self.groupoid.arrows_between(src.0, tgt.0).map(|a| (a, S::sample(rng))))
    }
}

// ---------------------------------------------------------------------------
// Z/p^k tower

/// Separating objects `X_k = Z/p^k` for `k ≤ max_level`.
pub struct HeckeFamily<S> {
    pub p: u64,
    pub max_level: u32,
    _ring: std::marker::PhantomData<S>,
}

impl<S: Scalar> HeckeFamily<S> {
    pub fn new(p: u64, max_level: u32) -> Result<Self> {
        crate::hecke::check_ring::<S>(p)?;
        Ok(HeckeFamily {
            p,
            max_level,
            _ring: std::marker::PhantomData,
        })
    }
}

impl<S: Scalar> InstanceFamily for HeckeFamily<S> {
    type Scalar = S;
    type Object = u32;
    type Section = TowerElement<S>;
    type Row = usize;
    type Col = ();

    fn objects(&self) -> Vec<u32> {
        (0..=self.max_level).collect()
    }

    fn contains(&self, src: &u32, tgt: &u32, section: &TowerElement<S>) -> bool {
        section.p() == self.p && section.source() == *src && section.target() == *tgt
    }

    fn zero(&self, src: &u32, tgt: &u32) -> TowerElement<S> {
        TowerElement::zero(self.p, *src, *tgt).expect("ring checked at construction")
    }

    fn basis(&self, src: &u32, tgt: &u32, _depth: usize) -> Vec<TowerElement<S>> {
        TowerElement::basis(self.p, *src, *tgt).expect("ring checked at construction")
    }

    fn add(&self, a: &TowerElement<S>, b: &TowerElement<S>) -> TowerElement<S> {
        a.add(b).expect("same hom-set")
    }

    fn scale(&self, a: &TowerElement<S>, c: &S) -> TowerElement<S> {
        a.scale(c)
    }

    fn compose(&self, f: &TowerElement<S>, g: &TowerElement<S>) -> TowerElement<S> {
        hecke_compose(f, g).expect("levels checked by the caller")
    }

    fn star(&self, f: &TowerElement<S>) -> TowerElement<S> {
        hecke_star(f)
    }

    fn support_unit(&self, src: &u32, _f: &TowerElement<S>) -> TowerElement<S> {
        TowerElement::delta(self.p, *src, *src, 0).expect("ring checked at construction")
    }

    fn terms(&self, f: &TowerElement<S>) -> Vec<((usize, ()), S)> {
        f.values()
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(c, v)| ((c, ()), v.clone()))
            .collect()
    }

    fn from_terms(&self, src: &u32, tgt: &u32, terms: Vec<((usize, ()), S)>) -> Result<TowerElement<S>> {
        let mut e = TowerElement::zero(self.p, *src, *tgt)?;
        let n = e.values().len();
        for ((c, _), v) in terms {
            if c >= n {
                return Err(Error::invalid(format!("class {c} out of range for modulus {n}")));
            }
            e = e.add(&TowerElement::delta(self.p, *src, *tgt, c)?.scale(&v))?;
        }
        Ok(e)
    }

    fn label(&self, row: &usize, _: &()) -> String {
        format!("[{row}]")
    }

    fn random(&self, src: &u32, tgt: &u32, mut rng: &mut dyn RngCore) -> TowerElement<S> {
        TowerElement::random(self.p, *src, *tgt, &mut rng).expect("ring checked at construction")
    }
}

// ---------------------------------------------------------------------------
// pushforward

/// `w(y) = Σ_{f(x) = y} v(x)` for a map between finite sets of points.
pub fn pushforward<X, Y: Ord, S: Scalar>(map: impl Fn(&X) -> Y, v: &[(X, S)]) -> BTreeMap<Y, S> {
    let mut w: BTreeMap<Y, S> = BTreeMap::new();
    for (x, c) in v {
        let slot = w.entry(map(x)).or_insert_with(S::zero);
        *slot = slot.clone() + c.clone();
    }
    w.retain(|_, c| !c.is_zero());
    w
}

/// Pushforward along truncation from the depth-`from` cylinders to the
/// depth-`to` cylinders at the same anchor.
pub fn pushforward_truncation<S: Scalar>(
    graph: &Graph,
    v: &LCSection<S>,
    from: usize,
    to: usize,
) -> Result<BTreeMap<Path, S>> {
    if to > from {
        return Err(Error::precondition(format!("cannot truncate depth {from} to depth {to}")));
    }
    let mut points = Vec::new();
    for (p, c) in v.pieces() {
        if p.len() > from {
            return Err(Error::DepthTooSmall {
                depth: from,
                needed: p.len(),
            });
        }
        for q in graph.extensions(p, from - p.len()) {
            points.push((q, c.clone()));
        }
    }
    Ok(pushforward(
        |q: &Path| Path::new(graph, q.anchor(), q.edges()[..to].to_vec()).expect("prefix of a path"),
        &points,
    ))
}

/// Whether the cylinder of `p` is a single infinite path. Otherwise it is
/// infinite: some vertex past the source has two live incoming edges, and
/// one lap around the vertices finds it.
fn is_point(graph: &Graph, p: &Path) -> bool {
    let mut at = p.source(graph);
    for _ in 0..graph.vertex_count() {
        let mut live = graph.live_in_edges(at);
        let Some(e) = live.next() else { return false };
        if live.next().is_some() {
            return false;
        }
        at = graph.src(e);
    }
    true
}

/// Pushforward to the one-point object: the sum of the values over all
/// points. Fails when the support has infinitely many points.
pub fn pushforward_to_point<S: Scalar>(graph: &Graph, v: &LCSection<S>) -> Result<S> {
    let mut total = S::zero();
    for (p, c) in v.pieces() {
        if !is_point(graph, p) {
            return Err(Error::InfiniteFiber(p.display(graph).to_string()));
        }
        total = total + c.clone();
    }
    Ok(total)
}

// ---------------------------------------------------------------------------
// coequalizer

/// `⊕_k Γ_c(D'_k) ⇉ ⊕_i Γ_c(D_i)` with both maps given as matrices into the
/// stacked generator coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeqPresentation<S: Scalar> {
    pub generators: Vec<usize>,
    /// `(rank of D'_k, first map, second map)`.
    pub relations: Vec<(usize, Matrix<S>, Matrix<S>)>,
}

impl<S: Scalar> CoeqPresentation<S> {
    pub fn generator_rank(&self) -> usize {
        self.generators.iter().sum()
    }

    pub fn check(&self) -> Result<()> {
        let n = self.generator_rank();
        for (k, (rank, a, b)) in self.relations.iter().enumerate() {
            for m in [a, b] {
                if m.rows() != n || m.cols() != *rank {
                    return Err(Error::invalid(format!(
                        "relation {k}: expected a {n} x {rank} matrix, got {} x {}",
                        m.rows(),
                        m.cols()
                    )));
                }
            }
        }
        Ok(())
    }

    /// `first − second`, all relation summands side by side.
    pub fn difference(&self) -> Matrix<S> {
        let n = self.generator_rank();
        let blocks: Vec<Matrix<S>> = self.relations.iter().map(|(_, a, b)| a.sub(b)).collect();
        if blocks.is_empty() {
            Matrix::zeros(n, 0)
        } else {
            Matrix::hstack(&blocks)
        }
    }
}

pub fn coequalize<S: Cokernel>(p: &CoeqPresentation<S>) -> Result<Quotient<S>> {
    p.check()?;
    Ok(S::cokernel(&p.difference()))
}

/// `Γ_c(U)` at depth `d` is free on the depth-`d` cylinders inside `U`.
pub fn sections_basis(graph: &Graph, u: &Clopen, depth: usize) -> Result<Vec<Path>> {
    let mut cells = u.refine_to_depth(graph, depth)?;
    cells.retain(|p| graph.is_alive(p.source(graph)));
    Ok(cells)
}

/// The presentation `⊕_{i<j} Γ_c(U_i ∩ U_j) ⇉ ⊕_i Γ_c(U_i)` of a cover,
/// with the cylinders labelling each generator.
pub fn cover_presentation<S: Scalar>(
    graph: &Graph,
    cover: &[Clopen],
    depth: usize,
) -> Result<(CoeqPresentation<S>, Vec<(usize, Path)>)> {
    let charts: Vec<Vec<Path>> = cover.iter().map(|c| sections_basis(graph, c, depth)).collect::<Result<_>>()?;
    let mut offsets = Vec::with_capacity(charts.len());
    let mut labels = Vec::new();
    for (i, chart) in charts.iter().enumerate() {
        offsets.push(labels.len());
        labels.extend(chart.iter().map(|p| (i, p.clone())));
    }
    let n = labels.len();
    let position = |i: usize, p: &Path| offsets[i] + charts[i].binary_search(p).expect("cell of the chart");
    let mut relations = Vec::new();
    for i in 0..cover.len() {
        for j in i + 1..cover.len() {
            let overlap = sections_basis(graph, &cover[i].meet(graph, &cover[j])?, depth)?;
            let mut first = Matrix::zeros(n, overlap.len());
            let mut second = Matrix::zeros(n, overlap.len());
            for (k, p) in overlap.iter().enumerate() {
                first[(position(i, p), k)] = S::one();
                second[(position(j, p), k)] = S::one();
            }
            relations.push((overlap.len(), first, second));
        }
    }
    let generators = charts.iter().map(Vec::len).collect();
    Ok((CoeqPresentation { generators, relations }, labels))
}

/// A cover's quotient compared with the direct computation of `Γ_c(U)`.
#[derive(Debug, Clone)]
pub struct CoverComparison<S: Scalar> {
    pub quotient: Quotient<S>,
    /// The depth-`d` cylinders of the union.
    pub cells: Vec<Path>,
    /// Gluing `⊕ Γ_c(U_i) → Γ_c(U)`, extension by zero and sum.
    pub gluing: Matrix<S>,
    /// The induced map `quotient → Γ_c(U)`, with `iso · projection = gluing`.
    pub iso: Matrix<S>,
    pub iso_inverse: Option<Matrix<S>>,
}

impl<S: Scalar> CoverComparison<S> {
    pub fn holds(&self) -> bool {
        self.quotient.torsion.is_empty()
            && self.quotient.free_rank == self.cells.len()
            && self.iso.mul(&self.quotient.projection) == self.gluing
            && self.iso_inverse.is_some()
    }
}

pub fn compare_cover<S: Cokernel>(graph: &Graph, cover: &[Clopen], depth: usize) -> Result<CoverComparison<S>> {
    let anchor = cover
        .first()
        .map(Clopen::anchor)
        .ok_or_else(|| Error::precondition("empty cover"))?;
    let mut union = Clopen::empty(anchor);
    for c in cover {
        union = union.join(graph, c)?;
    }
    let cells = sections_basis(graph, &union, depth)?;
    let (presentation, labels) = cover_presentation::<S>(graph, cover, depth)?;
    let quotient = coequalize(&presentation)?;
    let mut gluing = Matrix::zeros(cells.len(), labels.len());
    for (k, (_, p)) in labels.iter().enumerate() {
        let row = cells.binary_search(p).expect("chart cells lie in the union");
        gluing[(row, k)] = S::one();
    }
    // the projection is onto, so the induced map is the unique solution of
    // iso · projection = gluing; solve over the fraction field and come back
    let proj = quotient.projection.to_field();
    let right_inverse = proj
        .solve(&Matrix::identity(proj.rows()))
        .ok_or_else(|| Error::invalid("quotient projection is not onto"))?;
    let iso_field = gluing.to_field().mul(&right_inverse);
    let iso = Matrix::from_field(&iso_field).ok_or_else(|| Error::invalid("induced map leaves the ring"))?;
    let iso_inverse = if iso.is_square() { iso.ring_inverse() } else { None };
    Ok(CoverComparison {
        quotient,
        cells,
        gluing,
        iso,
        iso_inverse,
    })
}

/// Explicit isomorphism between the quotients of two covers of the same
/// clopen, through their common comparison with `Γ_c(U)`.
pub fn cover_isomorphism<S: Scalar>(a: &CoverComparison<S>, b: &CoverComparison<S>) -> Option<Matrix<S>> {
    if a.cells != b.cells {
        return None;
    }
    Some(b.iso_inverse.as_ref()?.mul(&a.iso))
}
