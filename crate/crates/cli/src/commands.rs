use std::fs;

use convalg::equivcore::{verify_equivalence, GroupoidFamily};
use convalg::finitegroupoid::{decompose, gpd_convolve, left_regular, FiniteGroupoid, GpdElement};
use convalg::graphtopos::{conv_mul, from_leavitt, to_leavitt, verify_relations, ConvElement, Engine, Relation};
use convalg::hecke::{hecke_compose, hecke_compose_lifted, TowerElement};
use convalg::leavitt::{lpa_mul, lpa_star, random_word, LpaElement};
use convalg::norms::{gpd_norm_report, graph_norm_report, to_f64, NormReport, RESIDUAL_TOLERANCE};
use convalg::stonelocale::Graph;
use convalg::{FieldScalar, RingDescriptor, RingKind, Scalar, Q, QI, Z, Z2, Z3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use thiserror::Error;

use convalg_cli::report::Check;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Precondition(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Precondition(_) => 3,
        }
    }

    pub fn core(context: &str, e: convalg::Error) -> Self {
        let msg = if context.is_empty() { e.to_string() } else { format!("{context}: {e}") };
        if e.is_parse() || matches!(e, convalg::Error::Invalid(_)) {
            CliError::Parse(msg)
        } else {
            CliError::Precondition(msg)
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Settings shared by every command, plus the input files read so far.
pub struct Context {
    pub ring: RingDescriptor,
    pub seed: u64,
    pub count: usize,
    pub depth: usize,
    pub inputs: Vec<(String, String)>,
}

impl Context {
    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }

    fn read(&mut self, path: &str) -> CliResult<String> {
        let text = fs::read_to_string(path).map_err(|e| CliError::Precondition(format!("{path}: {e}")))?;
        self.inputs.push((path.to_string(), text.clone()));
        Ok(text)
    }

    pub fn graph(&mut self, path: Option<&str>) -> CliResult<Graph> {
        let path = path.ok_or_else(|| CliError::Precondition("--graph FILE is required".into()))?;
        let text = self.read(path)?;
        Graph::parse(&text).map_err(|e| CliError::core(path, e))
    }

    pub fn groupoid(&mut self, path: Option<&str>) -> CliResult<FiniteGroupoid> {
        let path = path.ok_or_else(|| CliError::Precondition("--groupoid FILE is required".into()))?;
        let text = self.read(path)?;
        FiniteGroupoid::parse(&text).map_err(|e| CliError::core(path, e))
    }
}

/// Command output before it is wrapped in a report.
pub struct Outcome {
    pub results: Value,
    pub checks: Vec<Check>,
}

/// Runs `$body` with `S` bound to the scalar type of `$ring`.
macro_rules! with_ring {
    ($ring:expr, |$s:ident| $body:expr) => {
        match $ring.kind() {
            RingKind::Integers => {
                type $s = Z;
                $body
            }
            RingKind::Rationals => {
                type $s = Q;
                $body
            }
            RingKind::GaussianRationals => {
                type $s = QI;
                $body
            }
            RingKind::IntegersLocalizedAt(2) => {
                type $s = Z2;
                $body
            }
            RingKind::IntegersLocalizedAt(3) => {
                type $s = Z3;
                $body
            }
            RingKind::IntegersLocalizedAt(p) => Err(CliError::Precondition(format!(
                "Z[1/{p}] is not available; the localized rings are Z[1/2] and Z[1/3]"
            ))),
        }
    };
}

fn element_error(arg: &str, e: convalg::Error) -> CliError {
    CliError::core(&format!("element `{arg}`"), e)
}

// lpa

pub enum LpaOp {
    Mul(String, String),
    Star(String),
    VerifyRelations,
}

pub fn lpa(ctx: &Context, graph: &Graph, op: &LpaOp) -> CliResult<Outcome> {
    with_ring!(ctx.ring, |S| lpa_in::<S>(graph, op))
}

fn parse_lpa<S: Scalar>(graph: &Graph, text: &str) -> CliResult<LpaElement<S>> {
    LpaElement::parse(graph, text).map_err(|e| element_error(text, e))
}

fn lpa_in<S: Scalar>(graph: &Graph, op: &LpaOp) -> CliResult<Outcome> {
    match op {
        LpaOp::Mul(a, b) => {
            let (x, y) = (parse_lpa::<S>(graph, a)?, parse_lpa::<S>(graph, b)?);
            let product = lpa_mul(graph, &x, &y);
            let conv = to_leavitt(graph, &conv_mul(graph, &from_leavitt(graph, &x), &from_leavitt(graph, &y)));
            Ok(Outcome {
                results: json!({
                    "left": x.display(graph),
                    "right": y.display(graph),
                    "product": product.display(graph),
                }),
                checks: vec![Check::new(
                    "engines-agree",
                    conv == product,
                    format!("convolution engine gives {}", conv.display(graph)),
                )],
            })
        }
        LpaOp::Star(a) => {
            let x = parse_lpa::<S>(graph, a)?;
            let s = lpa_star(graph, &x);
            Ok(Outcome {
                results: json!({ "element": x.display(graph), "star": s.display(graph) }),
                checks: vec![Check::new("involutive", lpa_star(graph, &s) == x, "star(star(x)) = x")],
            })
        }
        LpaOp::VerifyRelations => {
            let all = verify_relations::<S>(graph);
            let mut checks = Vec::new();
            let mut failures = Vec::new();
            for rel in Relation::ALL {
                for engine in [Engine::Rewriting, Engine::Convolution] {
                    let here: Vec<_> = all.iter().filter(|c| c.relation == rel && c.engine == engine).collect();
                    let failed: Vec<&str> = here.iter().filter(|c| !c.holds).map(|c| c.instance.as_str()).collect();
                    failures.extend(failed.iter().map(|i| json!({ "engine": engine.name(), "instance": i })));
                    checks.push(Check::new(
                        format!("{}/{}", rel.name(), engine.name()),
                        failed.is_empty(),
                        format!("{} of {} instances hold", here.len() - failed.len(), here.len()),
                    ));
                }
            }
            Ok(Outcome {
                results: json!({ "instances": all.len(), "failures": failures }),
                checks,
            })
        }
    }
}

// conv

/// Random words of at most five generators, split into two factors and
/// multiplied in both engines.
pub fn conv_compare(ctx: &Context, graph: &Graph) -> CliResult<Outcome> {
    with_ring!(ctx.ring, |S| conv_compare_in::<S>(ctx, graph))
}

fn conv_compare_in<S: Scalar>(ctx: &Context, graph: &Graph) -> CliResult<Outcome> {
    let mut rng = ctx.rng();
    let mut first_mismatch = Value::Null;
    let mut agreed = 0usize;
    for case in 0..ctx.count {
        let word = random_word(graph, &mut rng, 5);
        let cut = rng.gen_range(0..=word.len());
        let (a, b) = word.split_at(cut);
        let c1 = S::sample(&mut rng);
        let c2 = S::sample(&mut rng);
        let f = ConvElement::<S>::word(graph, a).scale(graph, &c1);
        let g = ConvElement::<S>::word(graph, b).scale(graph, &c2);
        let lhs = to_leavitt(graph, &conv_mul(graph, &f, &g));
        let rhs = lpa_mul(graph, &to_leavitt(graph, &f), &to_leavitt(graph, &g));
        if lhs == rhs {
            agreed += 1;
        } else if first_mismatch.is_null() {
            first_mismatch = json!({
                "case": case,
                "left": to_leavitt(graph, &f).display(graph),
                "right": to_leavitt(graph, &g).display(graph),
                "convolution": lhs.display(graph),
                "rewriting": rhs.display(graph),
            });
        }
    }
    Ok(Outcome {
        results: json!({ "cases": ctx.count, "agreed": agreed, "first_mismatch": first_mismatch }),
        checks: vec![Check::new(
            "bridge",
            agreed == ctx.count,
            format!("{agreed} of {} products agree", ctx.count),
        )],
    })
}

// gpd

pub enum GpdOp {
    Convolve(String, String),
    Decompose,
    EquivCheck { max_rank: usize },
}

pub fn gpd(ctx: &Context, g: &FiniteGroupoid, op: &GpdOp) -> CliResult<Outcome> {
    match op {
        GpdOp::Convolve(a, b) => with_ring!(ctx.ring, |S| gpd_convolve_in::<S>(g, a, b)),
        GpdOp::Decompose => Ok(gpd_decompose(g)),
        GpdOp::EquivCheck { max_rank } => match ctx.ring.kind() {
            RingKind::Rationals => Ok(gpd_equiv_in::<Q>(ctx, g, *max_rank)),
            RingKind::GaussianRationals => Ok(gpd_equiv_in::<QI>(ctx, g, *max_rank)),
            _ => Err(CliError::Precondition(format!(
                "equiv-check needs a field; {} is not one",
                ctx.ring
            ))),
        },
    }
}

fn gpd_convolve_in<S: Scalar>(g: &FiniteGroupoid, a: &str, b: &str) -> CliResult<Outcome> {
    let f = GpdElement::<S>::parse(g, a).map_err(|e| element_error(a, e))?;
    let h = GpdElement::<S>::parse(g, b).map_err(|e| element_error(b, e))?;
    let product = gpd_convolve(g, &f, &h);
    let matrix = left_regular(g, &f).mul(&left_regular(g, &h)) == left_regular(g, &product);
    Ok(Outcome {
        results: json!({
            "left": f.display(g),
            "right": h.display(g),
            "product": product.display(g),
        }),
        checks: vec![Check::new("regular-representation", matrix, "L(f★h) = L(f)·L(h)")],
    })
}

fn gpd_decompose(g: &FiniteGroupoid) -> Outcome {
    let orbits = decompose(g);
    let covered: usize = orbits.iter().map(|o| o.size()).sum();
    let arrows: usize = orbits.iter().map(|o| o.size() * o.size() * o.isotropy.len()).sum();
    let listed: Vec<Value> = orbits
        .iter()
        .map(|o| {
            json!({
                "base": g.object_name(o.base),
                "objects": o.objects.iter().map(|&x| g.object_name(x)).collect::<Vec<_>>(),
                "isotropy": o.isotropy.iter().map(|&a| g.arrow_name(a)).collect::<Vec<_>>(),
                "isotropy_order": o.isotropy.len(),
            })
        })
        .collect();
    Outcome {
        results: json!({ "orbits": listed }),
        checks: vec![
            Check::new(
                "objects-partitioned",
                covered == g.object_count(),
                format!("{covered} of {} objects", g.object_count()),
            ),
            Check::new(
                "arrows-counted",
                arrows == g.arrow_count(),
                format!("Σ n²·|H| = {arrows}, {} arrows", g.arrow_count()),
            ),
        ],
    }
}

fn gpd_equiv_in<F: FieldScalar>(ctx: &Context, g: &FiniteGroupoid, max_rank: usize) -> Outcome {
    let mut rng = ctx.rng();
    let fam = GroupoidFamily { groupoid: g };
    let r = verify_equivalence::<F, _, _>(&fam, &mut rng, ctx.count, max_rank);
    let failure = match &r.first_failure {
        Some((i, dim, fails)) => json!({ "instance": i, "dimension": dim, "failed": fails }),
        None => Value::Null,
    };
    Outcome {
        results: json!({
            "instances": r.instances,
            "passed": r.passed,
            "max_rank": max_rank,
            "max_dimension": r.max_dim,
            "first_failure": failure,
        }),
        checks: vec![Check::new(
            "unit-and-counit",
            r.holds(),
            format!("{} of {} instances invertible and natural", r.passed, r.instances),
        )],
    }
}

// hecke

pub enum HeckeOp {
    Assoc { levels: u32 },
    Compose(String, String),
}

pub fn hecke(ctx: &Context, p: u64, op: &HeckeOp) -> CliResult<Outcome> {
    with_ring!(ctx.ring, |S| hecke_in::<S>(p, op))
}

fn hecke_in<S: Scalar>(p: u64, op: &HeckeOp) -> CliResult<Outcome> {
    let core = |e| CliError::core("", e);
    match op {
        HeckeOp::Assoc { levels } => {
            let levels = *levels;
            let basis = |a: u32, b: u32| TowerElement::<S>::basis(p, a, b).map_err(core);
            let (mut triples, mut assoc_ok, mut pairs, mut oracle_ok) = (0usize, true, 0usize, true);
            for k0 in 0..=levels {
                for k1 in 0..=levels {
                    let xs = basis(k0, k1)?;
                    for k2 in 0..=levels {
                        let ys = basis(k1, k2)?;
                        for x in &xs {
                            for y in &ys {
                                let yx = hecke_compose(x, y).map_err(core)?;
                                oracle_ok &= hecke_compose_lifted(x, y).map_err(core)? == yx;
                                pairs += 1;
                            }
                        }
                        for k3 in 0..=levels {
                            let zs = basis(k2, k3)?;
                            let zy: Vec<Vec<_>> = ys
                                .iter()
                                .map(|y| zs.iter().map(|z| hecke_compose(y, z)).collect::<Result<_, _>>())
                                .collect::<Result<_, _>>()
                                .map_err(core)?;
                            for x in &xs {
                                for (j, y) in ys.iter().enumerate() {
                                    let yx = hecke_compose(x, y).map_err(core)?;
                                    for (l, z) in zs.iter().enumerate() {
                                        let left = hecke_compose(&yx, z).map_err(core)?;
                                        let right = hecke_compose(x, &zy[j][l]).map_err(core)?;
                                        assoc_ok &= left == right;
                                        triples += 1;
                                    }
                                }
                            }
                        }
                    }
                }
            }
            Ok(Outcome {
                results: json!({ "p": p, "levels": levels, "triples": triples, "pairs": pairs }),
                checks: vec![
                    Check::new("associativity", assoc_ok, format!("{triples} basis triples")),
                    Check::new("lifted-oracle", oracle_ok, format!("{pairs} basis pairs")),
                ],
            })
        }
        HeckeOp::Compose(a, b) => {
            let f = TowerElement::<S>::parse(a).map_err(|e| element_error(a, e))?;
            let g = TowerElement::<S>::parse(b).map_err(|e| element_error(b, e))?;
            if f.p() != p || g.p() != p {
                return Err(CliError::Precondition(format!("elements must use p={p}")));
            }
            let gf = hecke_compose(&f, &g).map_err(core)?;
            let lifted = hecke_compose_lifted(&f, &g).map_err(core)?;
            Ok(Outcome {
                results: json!({ "first": f.to_string(), "second": g.to_string(), "composite": gf.to_string() }),
                checks: vec![Check::new("lifted-oracle", lifted == gf, format!("oracle gives {lifted}"))],
            })
        }
    }
}

// norm

pub enum NormTarget<'a> {
    Graph(&'a Graph),
    Groupoid(&'a FiniteGroupoid),
}

pub fn norm(ctx: &Context, target: &NormTarget<'_>, element: &str) -> CliResult<Outcome> {
    with_ring!(ctx.ring, |S| norm_in::<S>(ctx, target, element))
}

fn norm_in<S: Scalar>(ctx: &Context, target: &NormTarget<'_>, element: &str) -> CliResult<Outcome> {
    let report: NormReport = match target {
        NormTarget::Graph(g) => {
            let u = LpaElement::<S>::parse(g, element).map_err(|e| element_error(element, e))?;
            graph_norm_report(g, &from_leavitt(g, &u), ctx.depth).map_err(|e| CliError::core("", e))?
        }
        NormTarget::Groupoid(g) => {
            let f = GpdElement::<S>::parse(g, element).map_err(|e| element_error(element, e))?;
            gpd_norm_report(g, &f)
        }
    };
    let red = report.reduced_norm;
    let tol = 1e-9;
    Ok(Outcome {
        results: json!({
            "i_norm": report.i_norm.to_string(),
            "reduced_norm": format!("{red:.12}"),
            "residual_bound": format!("{:.0e}", RESIDUAL_TOLERANCE),
            "residual_ok": report.residual <= RESIDUAL_TOLERANCE * (red * red).max(1.0),
            "max_bound": report.max_bound.to_string(),
            "truncation_depth": report.depth,
        }),
        checks: vec![
            Check::new("reduced<=i_norm", red <= to_f64(&report.i_norm) + tol, "within 1e-9"),
            Check::new("reduced<=max_bound", red <= to_f64(&report.max_bound) + tol, "within 1e-9"),
        ],
    })
}
