//! Sheaves versus non-degenerate modules, checked on finite-dimensional instances.
//!
//! A family presents its algebra by finitely many generators, among them one
//! local unit `e_x` per object. A right module is a vector space with one
//! matrix per generator, acting on column vectors, so `R(xy) = R(y)R(x)`.
//!
//! `S` sends a sheaf to `⊕_x F(x)` with the family's action. `T` sends a
//! module to the sheaf with `T(M)(x) = M·e_x`; a generator mapping `M·e_x`
//! into `M·e_y` induces the corresponding structure map. The unit
//! `M → S(T(M))` records the components `m·e_x`; the counit
//! `T(S(F)) → F` reads a vector of `S(F)·e_x` off in the summand `F(x)`.

use std::fmt::Debug;

use rand::Rng;

use crate::error::{Error, Result};
use crate::finitegroupoid::{EquivariantSheaf, FiniteGroupoid};
use crate::graphtopos::{gsheaf_check, GSheaf};
use crate::leavitt::{module_from_gsheaf, Generator};
use crate::linalg::Matrix;
use crate::scalars::FieldScalar;
use crate::stonelocale::Graph;

/// Action matrices of a right module, one per generator of the family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RightModule<F: FieldScalar> {
    dim: usize,
    actions: Vec<Matrix<F>>,
}

impl<F: FieldScalar> RightModule<F> {
    pub fn new(dim: usize, actions: Vec<Matrix<F>>) -> Result<Self> {
        if actions.iter().any(|a| a.rows() != dim || a.cols() != dim) {
            return Err(Error::invalid("action matrices must be square of the module dimension"));
        }
        Ok(RightModule { dim, actions })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn action(&self, g: usize) -> &Matrix<F> {
        &self.actions[g]
    }

    pub fn actions(&self) -> &[Matrix<F>] {
        &self.actions
    }

    /// The same module in the basis given by the columns of `q`.
    pub fn conjugate(&self, q: &Matrix<F>) -> Result<Self> {
        let inv = q.inverse().ok_or_else(|| Error::precondition("change of basis is singular"))?;
        Ok(RightModule {
            dim: self.dim,
            actions: self.actions.iter().map(|a| inv.mul(a).mul(q)).collect(),
        })
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        RightModule {
            dim: self.dim + other.dim,
            actions: self
                .actions
                .iter()
                .zip(&other.actions)
                .map(|(a, b)| Matrix::block_diagonal(&[a.clone(), b.clone()]))
                .collect(),
        }
    }

    /// Whether `phi: self → other` commutes with every generator.
    pub fn is_morphism_to(&self, other: &Self, phi: &Matrix<F>) -> bool {
        phi.rows() == other.dim
            && phi.cols() == self.dim
            && self
                .actions
                .iter()
                .zip(&other.actions)
                .all(|(a, b)| b.mul(phi) == phi.mul(a))
    }
}

/// A presentation of an algebra together with its category of sheaves.
pub trait SheafModuleFamily<F: FieldScalar> {
    type Sheaf: Clone + Debug + PartialEq;

    fn objects(&self) -> usize;

    fn generators(&self) -> usize;

    fn generator_name(&self, g: usize) -> String;

    /// The generator acting as the local unit at `x`.
    fn local_unit(&self, x: usize) -> usize;

    /// `(from, to)`: the generator maps `M·e_from` into `M·e_to`.
    fn generator_ends(&self, g: usize) -> (usize, usize);

    fn ranks(&self, sheaf: &Self::Sheaf) -> Vec<usize>;

    /// `S(F)` on `⊕_x F(x)`, summands in object order.
    fn build_s(&self, sheaf: &Self::Sheaf) -> RightModule<F>;

    /// The sheaf whose structure maps are the given generator actions,
    /// `restricted[g]: F(from) → F(to)`.
    fn assemble_sheaf(&self, ranks: Vec<usize>, restricted: &[Matrix<F>]) -> Result<Self::Sheaf>;

    fn random_sheaf<R: Rng + ?Sized>(&self, rng: &mut R, max_rank: usize) -> Self::Sheaf;
}

/// `T(M)` with the chosen bases of `M·e_x` as columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Localized<F: FieldScalar, Sh> {
    pub sheaf: Sh,
    pub bases: Vec<Matrix<F>>,
    /// Each generator's action between the chosen bases.
    pub restricted: Vec<Matrix<F>>,
}

fn offsets(ranks: &[usize]) -> Vec<usize> {
    let mut acc = 0;
    ranks
        .iter()
        .map(|r| {
            let o = acc;
            acc += r;
            o
        })
        .collect()
}

/// Rejects modules on which the local units do not sum to the identity.
///
/// The witness is a vector not fixed by `Σ e_x`, taken from the kernel of
/// `Σ R(e_x)` when that is nonzero.
pub fn check_nondegenerate<F: FieldScalar, Fam: SheafModuleFamily<F>>(fam: &Fam, m: &RightModule<F>) -> Result<()> {
    let mut sum = Matrix::zeros(m.dim(), m.dim());
    for x in 0..fam.objects() {
        sum = sum.add(m.action(fam.local_unit(x)));
    }
    let id = Matrix::identity(m.dim());
    if sum == id {
        return Ok(());
    }
    let kernel = sum.kernel();
    let witness = if kernel.cols() > 0 {
        kernel.column(0)
    } else {
        let bad = (0..m.dim()).find(|&c| sum.column(c) != id.column(c)).expect("sum differs from identity");
        id.column(bad)
    };
    Err(Error::DegenerateModule {
        witness: witness.iter().map(|c| c.to_string()).collect(),
    })
}

pub fn functor_t<F: FieldScalar, Fam: SheafModuleFamily<F>>(
    fam: &Fam,
    m: &RightModule<F>,
) -> Result<Localized<F, Fam::Sheaf>> {
    check_nondegenerate(fam, m)?;
    let bases: Vec<Matrix<F>> = (0..fam.objects())
        .map(|x| m.action(fam.local_unit(x)).column_space())
        .collect();
    let mut restricted = Vec::with_capacity(fam.generators());
    for g in 0..fam.generators() {
        let (from, to) = fam.generator_ends(g);
        let image = m.action(g).mul(&bases[from]);
        let coords = bases[to].solve(&image).ok_or_else(|| {
            Error::invalid(format!("generator {} leaves the expected summand", fam.generator_name(g)))
        })?;
        restricted.push(coords);
    }
    let ranks = bases.iter().map(Matrix::cols).collect();
    let sheaf = fam.assemble_sheaf(ranks, &restricted)?;
    Ok(Localized {
        sheaf,
        bases,
        restricted,
    })
}

/// `M → S(T(M))`: the coordinates of `m·e_x` in the basis of `M·e_x`, stacked.
pub fn unit_matrix<F: FieldScalar, Fam: SheafModuleFamily<F>>(
    fam: &Fam,
    m: &RightModule<F>,
    t: &Localized<F, Fam::Sheaf>,
) -> Matrix<F> {
    let blocks: Vec<Matrix<F>> = (0..fam.objects())
        .map(|x| {
            t.bases[x]
                .solve(m.action(fam.local_unit(x)))
                .expect("projection lands in its image")
        })
        .collect();
    Matrix::vstack(m.dim(), &blocks)
}

/// `T(S(F)) → F` at each object: the rows of the summand `F(x)` in the basis of `S(F)·e_x`.
pub fn counit_blocks<F: FieldScalar, Fam: SheafModuleFamily<F>>(
    fam: &Fam,
    sheaf: &Fam::Sheaf,
    ts: &Localized<F, Fam::Sheaf>,
) -> Vec<Matrix<F>> {
    let ranks = fam.ranks(sheaf);
    let off = offsets(&ranks);
    (0..fam.objects())
        .map(|x| {
            let b = &ts.bases[x];
            b.submatrix(off[x]..off[x] + ranks[x], 0..b.cols())
        })
        .collect()
}

/// A basis of the families of maps `ψ_x: F(x) → G(x)` commuting with every
/// generator, given each generator's action on both sides.
fn objectwise_intertwiners<F: FieldScalar, Fam: SheafModuleFamily<F>>(
    fam: &Fam,
    from: (&[usize], &[Matrix<F>]),
    to: (&[usize], &[Matrix<F>]),
) -> Vec<Vec<Matrix<F>>> {
    let (rm, am) = from;
    let (rn, an) = to;
    let mut start = Vec::with_capacity(rm.len());
    let mut unknowns = 0;
    for x in 0..fam.objects() {
        start.push(unknowns);
        unknowns += rn[x] * rm[x];
    }
    if unknowns == 0 {
        return Vec::new();
    }
    let var = |x: usize, i: usize, j: usize| start[x] + i * rm[x] + j;
    let mut rows = Vec::new();
    for g in 0..fam.generators() {
        let (a, b) = fam.generator_ends(g);
        // (N_g ψ_a − ψ_b M_g)[i][j] = 0
        for i in 0..rn[b] {
            for j in 0..rm[a] {
                let mut row = vec![F::zero(); unknowns];
                for k in 0..rn[a] {
                    let v = var(a, k, j);
                    row[v] = row[v].clone() + an[g][(i, k)].clone();
                }
                for k in 0..rm[b] {
                    let v = var(b, i, k);
                    row[v] = row[v].clone() - am[g][(k, j)].clone();
                }
                if row.iter().any(|c| !c.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    let kernel = Matrix::from_rows(unknowns, rows).kernel();
    (0..kernel.cols())
        .map(|c| {
            (0..fam.objects())
                .map(|x| Matrix::from_fn(rn[x], rm[x], |i, j| kernel[(var(x, i, j), c)].clone()))
                .collect()
        })
        .collect()
}

/// A basis of the module maps `m → n`.
pub fn module_morphisms<F: FieldScalar, Fam: SheafModuleFamily<F>>(
    fam: &Fam,
    m: &RightModule<F>,
    n: &RightModule<F>,
) -> Result<Vec<Matrix<F>>> {
    let (tm, tn) = (functor_t(fam, m)?, functor_t(fam, n)?);
    let (rm, rn) = (fam.ranks(&tm.sheaf), fam.ranks(&tn.sheaf));
    let unit = unit_matrix(fam, m, &tm);
    let spread = Matrix::hstack(&tn.bases);
    Ok(objectwise_intertwiners(fam, (&rm, &tm.restricted), (&rn, &tn.restricted))
        .into_iter()
        .map(|psi| spread.mul(&s_on_morphism(&psi)).mul(&unit))
        .collect())
}

/// A basis of the sheaf maps `f → g`, as objectwise components.
pub fn sheaf_morphisms<F: FieldScalar, Fam: SheafModuleFamily<F>>(
    fam: &Fam,
    f: &Fam::Sheaf,
    g: &Fam::Sheaf,
) -> Vec<Vec<Matrix<F>>> {
    let restrict = |sheaf: &Fam::Sheaf| {
        let module = fam.build_s(sheaf);
        let ranks = fam.ranks(sheaf);
        let off = offsets(&ranks);
        let actions: Vec<Matrix<F>> = (0..fam.generators())
            .map(|k| {
                let (a, b) = fam.generator_ends(k);
                module.action(k).submatrix(off[b]..off[b] + ranks[b], off[a]..off[a] + ranks[a])
            })
            .collect();
        (ranks, actions)
    };
    let (rf, af) = restrict(f);
    let (rg, ag) = restrict(g);
    objectwise_intertwiners(fam, (&rf, &af), (&rg, &ag))
}

/// `S` on a morphism given by its components.
pub fn s_on_morphism<F: FieldScalar>(components: &[Matrix<F>]) -> Matrix<F> {
    Matrix::block_diagonal(components)
}

/// `T` on a module map `phi: M → N`.
pub fn t_on_morphism<F: FieldScalar, Sh>(
    tm: &Localized<F, Sh>,
    tn: &Localized<F, Sh>,
    phi: &Matrix<F>,
) -> Vec<Matrix<F>> {
    tm.bases
        .iter()
        .zip(&tn.bases)
        .map(|(bm, bn)| bn.solve(&phi.mul(bm)).expect("module maps preserve the summands"))
        .collect()
}

pub fn is_sheaf_morphism<F: FieldScalar, Fam: SheafModuleFamily<F>>(
    fam: &Fam,
    from: &Fam::Sheaf,
    to: &Fam::Sheaf,
    components: &[Matrix<F>],
) -> bool {
    fam.build_s(from).is_morphism_to(&fam.build_s(to), &s_on_morphism(components))
}

/// Explicit unit and counit components for one module and one sheaf.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjunctionWitness<F: FieldScalar> {
    pub unit: Matrix<F>,
    pub counit: Vec<Matrix<F>>,
    pub unit_invertible: bool,
    pub unit_is_morphism: bool,
    pub counit_invertible: bool,
    pub counit_is_morphism: bool,
    pub unit_natural: bool,
    pub counit_natural: bool,
}

impl<F: FieldScalar> AdjunctionWitness<F> {
    pub fn holds(&self) -> bool {
        self.unit_invertible
            && self.unit_is_morphism
            && self.counit_invertible
            && self.counit_is_morphism
            && self.unit_natural
            && self.counit_natural
    }

    pub fn failures(&self) -> Vec<&'static str> {
        let checks = [
            (self.unit_invertible, "unit not invertible"),
            (self.unit_is_morphism, "unit not a module map"),
            (self.counit_invertible, "counit not invertible"),
            (self.counit_is_morphism, "counit not a sheaf map"),
            (self.unit_natural, "unit not natural"),
            (self.counit_natural, "counit not natural"),
        ];
        checks.iter().filter(|c| !c.0).map(|c| c.1).collect()
    }
}

fn random_combination<F: FieldScalar, R: Rng + ?Sized>(basis: &[Matrix<F>], rows: usize, cols: usize, rng: &mut R) -> Matrix<F> {
    let mut out = Matrix::zeros(rows, cols);
    for b in basis {
        out = out.add(&b.scale(&F::sample(rng)));
    }
    out
}

fn random_components<F: FieldScalar, R: Rng + ?Sized>(basis: &[Vec<Matrix<F>>], shapes: &[(usize, usize)], rng: &mut R) -> Vec<Matrix<F>> {
    let mut out: Vec<Matrix<F>> = shapes.iter().map(|&(r, c)| Matrix::zeros(r, c)).collect();
    for b in basis {
        let c = F::sample(rng);
        for (o, x) in out.iter_mut().zip(b) {
            *o = o.add(&x.scale(&c));
        }
    }
    out
}

/// A random module: `S` of a random sheaf, in a random basis.
pub fn random_module<F: FieldScalar, Fam: SheafModuleFamily<F>, R: Rng + ?Sized>(
    fam: &Fam,
    rng: &mut R,
    max_rank: usize,
) -> RightModule<F> {
    let s = fam.build_s(&fam.random_sheaf(rng, max_rank));
    let q = Matrix::<F>::random_unimodular(s.dim(), rng);
    s.conjugate(&q).expect("unimodular change of basis")
}

/// Builds the unit for `m`, the counit for `sheaf`, and checks naturality
/// against random morphisms into larger objects containing them.
pub fn adjunction_witness<F: FieldScalar, Fam: SheafModuleFamily<F>, R: Rng + ?Sized>(
    fam: &Fam,
    m: &RightModule<F>,
    sheaf: &Fam::Sheaf,
    rng: &mut R,
    max_rank: usize,
) -> Result<AdjunctionWitness<F>> {
    // unit at M
    let tm = functor_t(fam, m)?;
    let stm = fam.build_s(&tm.sheaf);
    let unit = unit_matrix(fam, m, &tm);
    let unit_invertible = unit.is_square() && unit.is_invertible();
    let unit_is_morphism = m.is_morphism_to(&stm, &unit);

    // counit at F
    let sf = fam.build_s(sheaf);
    let tsf = functor_t(fam, &sf)?;
    let counit = counit_blocks(fam, sheaf, &tsf);
    let counit_invertible = counit.iter().all(|c| c.is_square() && c.is_invertible());
    let counit_is_morphism = is_sheaf_morphism(fam, &tsf.sheaf, sheaf, &counit);

    // naturality of the unit along a random map M → N
    let extra = random_module(fam, rng, max_rank);
    let n = m.direct_sum(&extra).conjugate(&Matrix::random_unimodular(m.dim() + extra.dim(), rng))?;
    let phi = random_combination(&module_morphisms(fam, m, &n)?, n.dim(), m.dim(), rng);
    let tn = functor_t(fam, &n)?;
    let unit_n = unit_matrix(fam, &n, &tn);
    let st_phi = s_on_morphism(&t_on_morphism(&tm, &tn, &phi));
    let unit_natural = unit_n.mul(&phi) == st_phi.mul(&unit);

    // naturality of the counit along a random sheaf map F → G
    let g_module = sf.direct_sum(&fam.build_s(&fam.random_sheaf(rng, max_rank)));
    let g = functor_t(fam, &g_module)?.sheaf;
    let sg = fam.build_s(&g);
    let (rf, rg) = (fam.ranks(sheaf), fam.ranks(&g));
    let shapes: Vec<(usize, usize)> = rg.iter().copied().zip(rf.iter().copied()).collect();
    let psi = random_components(&sheaf_morphisms(fam, sheaf, &g), &shapes, rng);
    let tsg = functor_t(fam, &sg)?;
    let counit_g = counit_blocks(fam, &g, &tsg);
    let ts_psi = t_on_morphism(&tsf, &tsg, &s_on_morphism(&psi));
    let counit_natural = (0..fam.objects()).all(|x| counit_g[x].mul(&ts_psi[x]) == psi[x].mul(&counit[x]))
        && is_sheaf_morphism(fam, sheaf, &g, &psi);

    Ok(AdjunctionWitness {
        unit,
        counit,
        unit_invertible,
        unit_is_morphism,
        counit_invertible,
        counit_is_morphism,
        unit_natural,
        counit_natural,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub instances: usize,
    pub passed: usize,
    pub max_dim: usize,
    /// `(instance index, module dimension, failed checks)` for the smallest failing instance.
    pub first_failure: Option<(usize, usize, Vec<String>)>,
}

impl EquivalenceReport {
    pub fn holds(&self) -> bool {
        self.first_failure.is_none() && self.passed == self.instances
    }
}

/// Runs `count` random (module, sheaf) instances of rank at most `max_rank`.
pub fn verify_equivalence<F: FieldScalar, Fam: SheafModuleFamily<F>, R: Rng + ?Sized>(
    fam: &Fam,
    rng: &mut R,
    count: usize,
    max_rank: usize,
) -> EquivalenceReport {
    let mut report = EquivalenceReport {
        instances: count,
        passed: 0,
        max_dim: 0,
        first_failure: None,
    };
    for i in 0..count {
        let m = random_module(fam, rng, max_rank);
        let sheaf = fam.random_sheaf(rng, max_rank);
        report.max_dim = report.max_dim.max(m.dim());
        let failures: Vec<String> = match adjunction_witness(fam, &m, &sheaf, rng, max_rank) {
            Ok(w) => w.failures().iter().map(|s| s.to_string()).collect(),
            Err(e) => vec![e.to_string()],
        };
        if failures.is_empty() {
            report.passed += 1;
        } else {
            let smaller = report.first_failure.as_ref().is_none_or(|f| m.dim() < f.1);
            if smaller {
                report.first_failure = Some((i, m.dim(), failures));
            }
        }
    }
    report
}

/// A finite groupoid: generators `δ_γ` for every arrow, local units `δ_{1_x}`.
#[derive(Debug, Clone, Copy)]
pub struct GroupoidFamily<'a> {
    pub groupoid: &'a FiniteGroupoid,
}

impl<F: FieldScalar> SheafModuleFamily<F> for GroupoidFamily<'_> {
    type Sheaf = EquivariantSheaf<F>;

    fn objects(&self) -> usize {
        self.groupoid.object_count()
    }

    fn generators(&self) -> usize {
        self.groupoid.arrow_count()
    }

    fn generator_name(&self, g: usize) -> String {
        format!("δ[{}]", self.groupoid.arrow_name(g))
    }

    fn local_unit(&self, x: usize) -> usize {
        self.groupoid.identity(x)
    }

    fn generator_ends(&self, g: usize) -> (usize, usize) {
        (self.groupoid.tgt(g), self.groupoid.src(g))
    }

    fn ranks(&self, sheaf: &Self::Sheaf) -> Vec<usize> {
        sheaf.ranks().to_vec()
    }

    /// `δ_γ` acts by `ρ(γ⁻¹): F(tgt γ) → F(src γ)`.
    fn build_s(&self, sheaf: &Self::Sheaf) -> RightModule<F> {
        let g = self.groupoid;
        let off = offsets(sheaf.ranks());
        let dim = sheaf.ranks().iter().sum();
        let actions = (0..g.arrow_count())
            .map(|a| {
                let mut m = Matrix::zeros(dim, dim);
                m.set_block(off[g.src(a)], off[g.tgt(a)], sheaf.map(g.inverse(a)));
                m
            })
            .collect();
        RightModule { dim, actions }
    }

    fn assemble_sheaf(&self, ranks: Vec<usize>, restricted: &[Matrix<F>]) -> Result<Self::Sheaf> {
        let g = self.groupoid;
        let maps = (0..g.arrow_count()).map(|a| restricted[g.inverse(a)].clone()).collect();
        EquivariantSheaf::new(g, ranks, maps)
    }

    fn random_sheaf<R: Rng + ?Sized>(&self, rng: &mut R, max_rank: usize) -> Self::Sheaf {
        EquivariantSheaf::random(self.groupoid, rng, max_rank)
    }
}

/// A graph: generators `p_x`, then `v_a`, then `v_a*`.
#[derive(Debug, Clone, Copy)]
pub struct GraphFamily<'a> {
    pub graph: &'a Graph,
}

impl GraphFamily<'_> {
    pub fn generator(&self, g: usize) -> Generator {
        let (n, m) = (self.graph.vertex_count(), self.graph.edge_count());
        if g < n {
            Generator::P(g)
        } else if g < n + m {
            Generator::V(g - n)
        } else {
            Generator::W(g - n - m)
        }
    }
}

impl<F: FieldScalar> SheafModuleFamily<F> for GraphFamily<'_> {
    type Sheaf = GSheaf<F>;

    fn objects(&self) -> usize {
        self.graph.vertex_count()
    }

    fn generators(&self) -> usize {
        self.graph.vertex_count() + 2 * self.graph.edge_count()
    }

    fn generator_name(&self, g: usize) -> String {
        self.generator(g).name(self.graph)
    }

    fn local_unit(&self, x: usize) -> usize {
        x
    }

    fn generator_ends(&self, g: usize) -> (usize, usize) {
        match self.generator(g) {
            Generator::P(x) => (x, x),
            Generator::V(a) => (self.graph.tgt(a), self.graph.src(a)),
            Generator::W(a) => (self.graph.src(a), self.graph.tgt(a)),
        }
    }

    fn ranks(&self, sheaf: &Self::Sheaf) -> Vec<usize> {
        sheaf.ranks().to_vec()
    }

    fn build_s(&self, sheaf: &Self::Sheaf) -> RightModule<F> {
        let graph = self.graph;
        let module = module_from_gsheaf(graph, sheaf).expect("argument is a sheaf");
        let actions = (0..<Self as SheafModuleFamily<F>>::generators(self))
            .map(|g| match self.generator(g) {
                Generator::P(x) => module.projection(x),
                Generator::V(a) => module.action_v(graph, a),
                Generator::W(a) => module.action_w(graph, a),
            })
            .collect();
        RightModule {
            dim: module.dim(),
            actions,
        }
    }

    fn assemble_sheaf(&self, ranks: Vec<usize>, restricted: &[Matrix<F>]) -> Result<Self::Sheaf> {
        let n = self.graph.vertex_count();
        let maps = (0..self.graph.edge_count()).map(|a| restricted[n + a].clone()).collect();
        let sheaf = GSheaf::new(self.graph, ranks, maps)?;
        let check = gsheaf_check(self.graph, &sheaf);
        if !check.is_sheaf() {
            return Err(Error::invalid(format!("not a sheaf: {}", check.describe(self.graph))));
        }
        Ok(sheaf)
    }

    fn random_sheaf<R: Rng + ?Sized>(&self, rng: &mut R, max_rank: usize) -> Self::Sheaf {
        GSheaf::random(self.graph, rng, max_rank)
    }
}
