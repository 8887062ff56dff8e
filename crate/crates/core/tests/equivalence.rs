mod common;

use common::{graphs, groupoids};
use convalg::equivcore::{
    adjunction_witness, check_nondegenerate, functor_t, random_module, t_on_morphism, verify_equivalence,
    GraphFamily, GroupoidFamily, RightModule, SheafModuleFamily,
};
use convalg::finitegroupoid::{functor_s, gpd_convolve, EquivariantSheaf, FiniteGroupoid, GpdElement};
use convalg::linalg::Matrix;
use convalg::{Error, Q};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn groupoid_equivalence_on_random_instances() {
    for (name, g) in groupoids() {
        let fam = GroupoidFamily { groupoid: &g };
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let report = verify_equivalence::<Q, _, _>(&fam, &mut rng, 100, 4);
        assert!(report.holds(), "{name}: {:?}", report.first_failure);
        if g.arrow_count() > 1 {
            assert!(report.max_dim > 0, "{name}: only zero instances generated");
        }
    }
}

#[test]
fn graph_equivalence_on_random_instances() {
    for (name, graph) in graphs() {
        let fam = GraphFamily { graph: &graph };
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let report = verify_equivalence::<Q, _, _>(&fam, &mut rng, 30, 3);
        assert!(report.holds(), "{name}: {:?}", report.first_failure);
    }
}

#[test]
fn module_action_is_a_right_action_of_the_convolution_algebra() {
    for (name, g) in groupoids() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        let fam = GroupoidFamily { groupoid: &g };
        let m: RightModule<Q> = random_module(&fam, &mut rng, 4);
        let act = |f: &GpdElement<Q>| {
            let mut out = Matrix::zeros(m.dim(), m.dim());
            for (a, c) in f.terms() {
                out = out.add(&m.action(a).scale(c));
            }
            out
        };
        for _ in 0..20 {
            let f = GpdElement::<Q>::random(&g, &mut rng, 0.5);
            let h = GpdElement::<Q>::random(&g, &mut rng, 0.5);
            assert_eq!(act(&gpd_convolve(&g, &f, &h)), act(&h).mul(&act(&f)), "{name}");
        }
    }
}

#[test]
fn degenerate_module_rejected_with_killed_vector() {
    for (name, g) in groupoids() {
        let fam = GroupoidFamily { groupoid: &g };
        let mut rng = ChaCha8Rng::seed_from_u64(44);
        let m: RightModule<Q> = random_module(&fam, &mut rng, 3);
        let dead = RightModule::new(1, vec![Matrix::zeros(1, 1); g.arrow_count()]).unwrap();
        let bad = m.direct_sum(&dead);
        let mut expected = vec!["0".to_string(); bad.dim()];
        expected[bad.dim() - 1] = "1".to_string();
        match functor_t(&fam, &bad) {
            Err(Error::DegenerateModule { witness }) => assert_eq!(witness, expected, "{name}"),
            other => panic!("{name}: {other:?}"),
        }
        assert!(check_nondegenerate(&fam, &m).is_ok());
    }
}

#[test]
fn nondegeneracy_is_exactly_the_unit_condition() {
    let g = common::groupoid("z2");
    let fam = GroupoidFamily { groupoid: &g };
    // e acts as a non-identity idempotent: M·e ≠ M
    let e = Matrix::<Q>::from_i64(&[&[1, 0], &[0, 0]]);
    let m = RightModule::new(2, vec![e.clone(), e]).unwrap();
    assert!(matches!(check_nondegenerate(&fam, &m), Err(Error::DegenerateModule { .. })));
    let id = Matrix::<Q>::identity(2);
    let swap = Matrix::<Q>::from_i64(&[&[0, 1], &[1, 0]]);
    let ok = RightModule::new(2, vec![id, swap]).unwrap();
    assert!(check_nondegenerate(&fam, &ok).is_ok());
}

#[test]
fn regular_representation_of_z2() {
    let g = common::groupoid("z2");
    let gen = g.arrow("g1").unwrap();
    let swap = Matrix::<Q>::from_i64(&[&[0, 1], &[1, 0]]);
    let sheaf = EquivariantSheaf::new(&g, vec![2], vec![Matrix::identity(2), swap.clone()]).unwrap();
    let m = functor_s(&g, &sheaf);
    assert_eq!(m.action(gen), &swap);
    let back = convalg::finitegroupoid::functor_t(&g, &m).unwrap();
    let fam = GroupoidFamily { groupoid: &g };
    let mut rng = ChaCha8Rng::seed_from_u64(45);
    let w = adjunction_witness(&fam, &m, &sheaf, &mut rng, 2).unwrap();
    assert!(w.holds());
    assert_eq!(back.ranks(), &[2]);
}

#[test]
fn pair_groupoid_morita() {
    let g = FiniteGroupoid::pair(2);
    let sheaf = EquivariantSheaf::<Q>::induced(&g, &[1], |_, _| Matrix::identity(1)).unwrap();
    let m = functor_s(&g, &sheaf);
    assert_eq!(m.dim(), 2);
    let e12 = g.arrow("e12").unwrap();
    let e21 = g.arrow("e21").unwrap();
    // right action: R(e12 e21) = R(e21) R(e12) = R(e11)
    assert_eq!(m.action(e21).mul(m.action(e12)), *m.action(g.identity(0)));
    let fam = GroupoidFamily { groupoid: &g };
    let mut rng = ChaCha8Rng::seed_from_u64(46);
    assert!(adjunction_witness(&fam, &m, &sheaf, &mut rng, 2).unwrap().holds());
}

#[test]
fn zero_objects_correspond() {
    let g = common::groupoid("s3");
    let fam = GroupoidFamily { groupoid: &g };
    let zero = EquivariantSheaf::<Q>::zero(&g);
    let m = functor_s(&g, &zero);
    assert_eq!(m.dim(), 0);
    assert_eq!(functor_t(&fam, &m).unwrap().sheaf, zero);
}

/// Kernels, images and direct sums computed on the module side agree with
/// the objectwise computation on the sheaf side.
#[test]
fn s_preserves_kernels_cokernels_and_sums() {
    for (name, g) in groupoids() {
        let fam = GroupoidFamily { groupoid: &g };
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        for _ in 0..20 {
            let f: EquivariantSheaf<Q> = fam.random_sheaf(&mut rng, 3);
            let h: EquivariantSheaf<Q> = fam.random_sheaf(&mut rng, 3);
            let (sf, sh) = (functor_s(&g, &f), functor_s(&g, &h));
            let sum = sf.direct_sum(&sh);
            let t_sum = functor_t(&fam, &sum).unwrap().sheaf;
            let ranks: Vec<usize> = f.ranks().iter().zip(h.ranks()).map(|(a, b)| a + b).collect();
            assert_eq!(t_sum.ranks(), &ranks[..], "{name}");

            let morphisms = convalg::equivcore::module_morphisms(&fam, &sf, &sum).unwrap();
            let mut phi = Matrix::zeros(sum.dim(), sf.dim());
            for b in &morphisms {
                phi = phi.add(&b.scale(&convalg::Scalar::sample(&mut rng)));
            }
            // module kernel and cokernel
            let kernel = phi.kernel();
            let image = phi.column_space();
            // objectwise: the components of T(φ)
            let tf = functor_t(&fam, &sf).unwrap();
            let ts = functor_t(&fam, &sum).unwrap();
            let comps = t_on_morphism(&tf, &ts, &phi);
            let kernel_dims: usize = comps.iter().map(|c| c.cols() - c.rank()).sum();
            let image_dims: usize = comps.iter().map(|c| c.rank()).sum();
            assert_eq!(kernel.cols(), kernel_dims, "{name}");
            assert_eq!(image.cols(), image_dims, "{name}");
            assert_eq!(sum.dim() - image.cols(), ranks.iter().sum::<usize>() - image_dims, "{name}");
            // the kernel is a submodule
            for a in 0..g.arrow_count() {
                let moved = sf.action(a).mul(&kernel);
                assert!(kernel.solve(&moved).is_some() || kernel.cols() == 0, "{name}");
            }
        }
    }
}
