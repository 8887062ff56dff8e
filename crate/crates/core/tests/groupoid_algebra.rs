mod common;

use std::collections::BTreeMap;

use common::groupoids;
use convalg::finitegroupoid::{decompose, gpd_convolve, gpd_star, ArrowId, FiniteGroupoid, GpdElement};
use convalg::{Scalar, Q, QI};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn fixtures_roundtrip_through_text() {
    for (name, g) in groupoids() {
        assert!(g.arrow_count() <= 8, "{name}");
        let again = FiniteGroupoid::parse(&g.to_text()).unwrap();
        assert_eq!(again, g, "{name}");
    }
}

#[test]
fn convolution_is_associative_on_all_basis_triples() {
    for (name, g) in groupoids() {
        let n = g.arrow_count();
        for a in 0..n {
            for b in 0..n {
                let ab = gpd_convolve(&g, &GpdElement::<Q>::delta(a), &GpdElement::delta(b));
                for c in 0..n {
                    let bc = gpd_convolve(&g, &GpdElement::<Q>::delta(b), &GpdElement::delta(c));
                    assert_eq!(
                        gpd_convolve(&g, &ab, &GpdElement::delta(c)),
                        gpd_convolve(&g, &GpdElement::delta(a), &bc),
                        "{name}"
                    );
                }
            }
        }
    }
}

#[test]
fn star_reverses_products() {
    for (name, g) in groupoids() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..200 {
            let f = GpdElement::<QI>::random(&g, &mut rng, 0.6);
            let h = GpdElement::<QI>::random(&g, &mut rng, 0.6);
            assert_eq!(gpd_star(&g, &gpd_star(&g, &f)), f, "{name}");
            assert_eq!(
                gpd_star(&g, &gpd_convolve(&g, &f, &h)),
                gpd_convolve(&g, &gpd_star(&g, &h), &gpd_star(&g, &f)),
                "{name}"
            );
        }
        for a in 0..g.arrow_count() {
            let c = QI::from_ints(1, 2);
            let f = GpdElement::from_terms([(a, c.clone())]);
            assert_eq!(gpd_star(&g, &f), GpdElement::from_terms([(g.inverse(a), c.star())]));
        }
    }
}

#[test]
fn identities_are_local_units() {
    for (name, g) in groupoids() {
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        let unit = GpdElement::<Q>::unit(&g);
        for _ in 0..50 {
            let f = GpdElement::<Q>::random(&g, &mut rng, 0.5);
            assert_eq!(gpd_convolve(&g, &unit, &f), f, "{name}");
            assert_eq!(gpd_convolve(&g, &f, &unit), f, "{name}");
        }
        for a in 0..g.arrow_count() {
            let left = GpdElement::<Q>::delta(g.identity(g.tgt(a)));
            let right = GpdElement::<Q>::delta(g.identity(g.src(a)));
            let d = GpdElement::delta(a);
            assert_eq!(gpd_convolve(&g, &gpd_convolve(&g, &left, &d), &right), d, "{name}");
        }
    }
}

/// `γ: x → y` ↦ `E_{yx} ⊗ t_y⁻¹ γ t_x` in `⊕ M_n(K[G_base])`.
type Model = BTreeMap<(usize, usize, usize, ArrowId), Q>;

fn model(g: &FiniteGroupoid, f: &GpdElement<Q>) -> Model {
    let orbits = decompose(g);
    let mut out = Model::new();
    for (a, c) in f.terms() {
        let (i, o) = orbits.iter().enumerate().find(|(_, o)| o.position(g.src(a)).is_some()).unwrap();
        let kx = o.position(g.src(a)).unwrap();
        let ky = o.position(g.tgt(a)).unwrap();
        let h = g
            .compose(g.inverse(o.transports[ky]), g.compose(a, o.transports[kx]).unwrap())
            .unwrap();
        assert!(o.isotropy.contains(&h));
        *out.entry((i, ky, kx, h)).or_insert_with(|| Q::from_i64(0)) += c.clone();
    }
    out.retain(|_, c| *c != Q::from_i64(0));
    out
}

fn model_mul(g: &FiniteGroupoid, x: &Model, y: &Model) -> Model {
    let mut out = Model::new();
    for ((i, r, k, h), c) in x {
        for ((j, k2, s, h2), d) in y {
            if i == j && k == k2 {
                let hh = g.compose(*h, *h2).unwrap();
                *out.entry((*i, *r, *s, hh)).or_insert_with(|| Q::from_i64(0)) += c.clone() * d.clone();
            }
        }
    }
    out.retain(|_, c| *c != Q::from_i64(0));
    out
}

#[test]
fn algebra_is_a_sum_of_matrix_algebras_over_isotropy() {
    for (name, g) in groupoids() {
        let orbits = decompose(&g);
        let mut seen = vec![false; g.object_count()];
        for o in &orbits {
            for &x in &o.objects {
                assert!(!seen[x], "{name}: orbits overlap");
                seen[x] = true;
            }
            for (k, &t) in o.transports.iter().enumerate() {
                assert_eq!((g.src(t), g.tgt(t)), (o.base, o.objects[k]));
            }
        }
        assert!(seen.iter().all(|&s| s), "{name}: orbits do not cover");
        let dim: usize = orbits.iter().map(|o| o.size() * o.size() * o.isotropy.len()).sum();
        assert_eq!(dim, g.arrow_count(), "{name}");
        let images: std::collections::BTreeSet<_> =
            (0..g.arrow_count()).map(|a| model(&g, &GpdElement::delta(a))).collect();
        assert_eq!(images.len(), g.arrow_count(), "{name}: not injective on the basis");
        for a in 0..g.arrow_count() {
            for b in 0..g.arrow_count() {
                let (da, db) = (GpdElement::delta(a), GpdElement::delta(b));
                assert_eq!(
                    model(&g, &gpd_convolve(&g, &da, &db)),
                    model_mul(&g, &model(&g, &da), &model(&g, &db)),
                    "{name}"
                );
            }
        }
    }
}

#[test]
fn known_decompositions() {
    let shape = |name: &str| -> Vec<(usize, usize)> {
        decompose(&common::groupoid(name)).iter().map(|o| (o.size(), o.isotropy.len())).collect()
    };
    assert_eq!(shape("pair2"), vec![(2, 1)]);
    assert_eq!(shape("z2_point"), vec![(1, 2), (1, 1)]);
    assert_eq!(shape("pair2_z2"), vec![(2, 2)]);
    assert_eq!(shape("s3"), vec![(1, 6)]);
}

#[test]
fn builders_match_fixtures() {
    assert_eq!(FiniteGroupoid::cyclic(3), common::groupoid("z3"));
    assert_eq!(FiniteGroupoid::pair(2), common::groupoid("pair2"));
}

#[test]
fn malformed_tables_are_rejected_with_lines() {
    let missing = "object x\narrow g x x\narrow h x x\ncompose g g h\ncompose h h g\ncompose g h 1_x\n";
    let e = FiniteGroupoid::parse(missing).unwrap_err();
    assert!(matches!(e, convalg::Error::Parse { line: 3, .. }), "{e:?}");
    let not_assoc = "object x\narrow g x x\narrow h x x\ncompose g g 1_x\ncompose h h 1_x\ncompose g h 1_x\ncompose h g g\n";
    let e = FiniteGroupoid::parse(not_assoc).unwrap_err();
    assert!(e.is_parse(), "{e:?}");
    let bad_endpoint = "object x\nobject y\narrow f x y\narrow f2 y x\ncompose f f2 1_x\ncompose f2 f 1_x\n";
    let e = FiniteGroupoid::parse(bad_endpoint).unwrap_err();
    assert!(matches!(e, convalg::Error::Parse { line: 5, .. }), "{e:?}");
}
