use convalg::hecke::{hecke_compose, hecke_compose_lifted, hecke_star, TowerElement};
use convalg::linalg::Matrix;
use convalg::{Error, Scalar, Q, QI, Z, Z2, Z3};
use num_traits::One;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn full_kernel<S: Scalar>(f: &TowerElement<S>) -> Matrix<S> {
    let p = f.p() as usize;
    let (rows, cols) = (p.pow(f.target()), p.pow(f.source()));
    let m = p.pow(f.source().min(f.target())) as i64;
    Matrix::from_fn(rows, cols, |a, b| f.values()[(a as i64 - b as i64).rem_euclid(m) as usize].clone())
}

/// Lift both kernels to `Z/p^N`, sum over the middle with weight
/// `p^-(N − k')`, and read the result back on the original levels.
fn lifted_compose<S: Scalar>(f: &TowerElement<S>, g: &TowerElement<S>) -> Vec<S> {
    let p = f.p() as usize;
    let n = f.source().max(f.target()).max(g.target());
    let big = p.pow(n);
    let weight = S::inv_nat((big / p.pow(f.target())) as u64).unwrap();
    let lift = |e: &TowerElement<S>, a: usize, b: usize| {
        let m = p.pow(e.source().min(e.target())) as i64;
        e.values()[(a as i64 - b as i64).rem_euclid(m) as usize].clone()
    };
    let m = p.pow(f.source().min(g.target()));
    (0..m)
        .map(|a| {
            let mut acc = S::zero();
            for b in 0..big {
                acc = acc + lift(g, a, b) * lift(f, b, 0);
            }
            acc * weight.clone()
        })
        .collect()
}

fn levels() -> Vec<u32> {
    (0..=3).collect()
}

fn check_tower<S: Scalar>(p: u64) {
    for &k in &levels() {
        for &k1 in &levels() {
            for &k2 in &levels() {
                for f in TowerElement::<S>::basis(p, k, k1).unwrap() {
                    for g in TowerElement::<S>::basis(p, k1, k2).unwrap() {
                        let gf = hecke_compose(&f, &g).unwrap();
                        assert_eq!(full_kernel(&gf), full_kernel(&g).mul(&full_kernel(&f)));
                        assert_eq!(gf.values(), &lifted_compose(&f, &g)[..]);
                        assert_eq!(hecke_compose_lifted(&f, &g).unwrap(), gf);
                    }
                }
            }
        }
    }
}

#[test]
fn compose_matches_both_oracles() {
    check_tower::<Z2>(2);
    check_tower::<Q>(3);
}

#[test]
fn associative_on_basis_triples() {
    for p in [2u64, 3] {
        for k0 in 0..=3 {
            for k1 in 0..=3 {
                for k2 in 0..=3 {
                    for k3 in 0..=3 {
                        let f = TowerElement::<Q>::basis(p, k0, k1).unwrap();
                        let g = TowerElement::<Q>::basis(p, k1, k2).unwrap();
                        let h = TowerElement::<Q>::basis(p, k2, k3).unwrap();
                        let zy: Vec<Vec<_>> =
                            g.iter().map(|y| h.iter().map(|z| hecke_compose(y, z).unwrap()).collect()).collect();
                        for x in &f {
                            for (j, y) in g.iter().enumerate() {
                                let yx = hecke_compose(x, y).unwrap();
                                for (l, z) in h.iter().enumerate() {
                                    let left = hecke_compose(&yx, z).unwrap();
                                    let right = hecke_compose(x, &zy[j][l]).unwrap();
                                    assert_eq!(left, right);
                                }
                            }
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn endomorphisms_form_the_group_algebra() {
    for p in [2u64, 3] {
        for k in 0..=3u32 {
            let n = (p as usize).pow(k);
            let basis = TowerElement::<Q>::basis(p, k, k).unwrap();
            assert_eq!(basis.len(), n);
            for a in 0..n {
                for b in 0..n {
                    let prod = hecke_compose(&basis[a], &basis[b]).unwrap();
                    assert_eq!(prod, basis[(a + b) % n]);
                }
            }
        }
    }
}

#[test]
fn star_is_an_anti_involution() {
    let mut rng = ChaCha8Rng::seed_from_u64(51);
    for _ in 0..300 {
        let p = if rand::Rng::gen_bool(&mut rng, 0.5) { 2 } else { 3 };
        let k: Vec<u32> = (0..3).map(|_| rand::Rng::gen_range(&mut rng, 0..=3)).collect();
        let f = TowerElement::<QI>::random(p, k[0], k[1], &mut rng).unwrap();
        let g = TowerElement::<QI>::random(p, k[1], k[2], &mut rng).unwrap();
        assert_eq!(hecke_star(&hecke_star(&f)), f);
        assert_eq!(
            hecke_star(&hecke_compose(&f, &g).unwrap()),
            hecke_compose(&hecke_star(&g), &hecke_star(&f)).unwrap()
        );
        assert_eq!(full_kernel(&hecke_star(&f)), full_kernel(&f).adjoint());
    }
}

#[test]
fn rings_without_inverse_of_p_are_rejected() {
    assert!(matches!(TowerElement::<Z>::zero(2, 1, 0), Err(Error::NotInvertible { n: 2, .. })));
    assert!(matches!(TowerElement::<Z>::zero(3, 0, 0), Err(Error::NotInvertible { n: 3, .. })));
    assert!(matches!(TowerElement::<Z3>::zero(2, 1, 1), Err(Error::NotInvertible { n: 2, .. })));
    assert!(TowerElement::<Z3>::zero(3, 1, 1).is_ok());
}

#[test]
fn mismatched_levels_are_rejected() {
    let f = TowerElement::<Q>::delta(2, 1, 2, 0).unwrap();
    let g = TowerElement::<Q>::delta(2, 1, 0, 0).unwrap();
    assert!(matches!(hecke_compose(&f, &g), Err(Error::ObjectMismatch { .. })));
    let h = TowerElement::<Q>::delta(3, 2, 0, 0).unwrap();
    assert!(matches!(hecke_compose(&f, &h), Err(Error::ObjectMismatch { .. })));
}

#[test]
fn through_the_point() {
    // X_1 → X_0 → X_1 with p = 2: the all-ones kernel on Z/2 × Z/2
    let down = TowerElement::<Z2>::delta(2, 1, 0, 0).unwrap();
    let up = TowerElement::<Z2>::delta(2, 0, 1, 0).unwrap();
    let loop_ = hecke_compose(&down, &up).unwrap();
    assert_eq!(loop_.values(), &[Z2::one(), Z2::one()]);
    let back = hecke_compose(&up, &down).unwrap();
    assert_eq!(back.values(), &[Z2::from_i64(2)]);
}
