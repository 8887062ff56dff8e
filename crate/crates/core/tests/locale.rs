mod common;

use std::collections::BTreeSet;

use common::{graph, graphs};
use convalg::stonelocale::{
    extend_with_support, partition_of_support, rather_below, way_below, Clopen, Graph, LCSection, Path,
};
use convalg::{Scalar, Q, Z};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CELL_DEPTH: usize = 3;

/// A clopen as the set of depth-3 cells it contains.
fn cells(g: &Graph, u: &Clopen) -> BTreeSet<Path> {
    u.refine_to_depth(g, CELL_DEPTH).unwrap().into_iter().collect()
}

fn all_cells(g: &Graph, x: usize) -> BTreeSet<Path> {
    g.extensions(&Path::empty(x), CELL_DEPTH).into_iter().collect()
}

fn random_paths(g: &Graph, rng: &mut impl Rng, x: usize) -> Vec<Path> {
    let n = rng.gen_range(0..4);
    (0..n)
        .filter_map(|_| {
            let paths = g.extensions(&Path::empty(x), rng.gen_range(0..=2));
            (!paths.is_empty()).then(|| paths[rng.gen_range(0..paths.len())].clone())
        })
        .collect()
}

fn random_clopen(g: &Graph, rng: &mut impl Rng, x: usize) -> Clopen {
    Clopen::from_cylinders(g, x, random_paths(g, rng, x)).unwrap()
}

fn random_section<S: Scalar>(g: &Graph, rng: &mut impl Rng, x: usize) -> LCSection<S> {
    let pieces = random_paths(g, rng, x).into_iter().map(|p| (p, S::sample(rng))).collect();
    LCSection::from_pieces(g, x, pieces).unwrap()
}

/// Value on a cell, read directly from the pieces.
fn value<S: Scalar>(s: &LCSection<S>, cell: &Path) -> S {
    s.pieces()
        .iter()
        .filter(|(p, _)| p.is_prefix_of(cell))
        .fold(S::zero(), |acc, (_, v)| acc + v.clone())
}

fn live_anchors(g: &Graph) -> Vec<usize> {
    (0..g.vertex_count()).filter(|&x| g.is_alive(x)).collect()
}

#[test]
fn boolean_operations_match_cell_sets() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for (name, g) in graphs() {
        for x in live_anchors(&g) {
            let full = all_cells(&g, x);
            for _ in 0..100 {
                let u = random_clopen(&g, &mut rng, x);
                let v = random_clopen(&g, &mut rng, x);
                let (cu, cv) = (cells(&g, &u), cells(&g, &v));
                let meet = u.meet(&g, &v).unwrap();
                let join = u.join(&g, &v).unwrap();
                assert_eq!(cells(&g, &meet), &cu & &cv, "{name}");
                assert_eq!(cells(&g, &join), &cu | &cv, "{name}");
                assert_eq!(cells(&g, &u.complement(&g)), &full - &cu, "{name}");
                assert_eq!(cells(&g, &u.difference(&g, &v).unwrap()), &cu - &cv);
                assert_eq!(u.complement(&g).complement(&g), u);
                assert_eq!(Clopen::full(&g, x).meet(&g, &u).unwrap(), u);
                // de Morgan and distributivity through the normal form
                assert_eq!(
                    join.complement(&g),
                    u.complement(&g).meet(&g, &v.complement(&g)).unwrap()
                );
                let w = random_clopen(&g, &mut rng, x);
                assert_eq!(
                    u.meet(&g, &v.join(&g, &w).unwrap()).unwrap(),
                    meet.join(&g, &u.meet(&g, &w).unwrap()).unwrap()
                );
            }
        }
    }
}

#[test]
fn normal_form_is_unique() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for (_, g) in graphs() {
        for x in live_anchors(&g) {
            for _ in 0..100 {
                let u = random_clopen(&g, &mut rng, x);
                // the same set written as its depth-3 cells
                let refined = Clopen::from_cylinders(&g, x, cells(&g, &u).into_iter().collect()).unwrap();
                assert_eq!(refined, u);
                let v = random_clopen(&g, &mut rng, x);
                assert_eq!(cells(&g, &u) == cells(&g, &v), u == v);
                let c = u.cylinders();
                assert!(c.windows(2).all(|w| w[0] < w[1]));
                for a in c {
                    for b in c {
                        assert!(a == b || a.disjoint_from(b));
                    }
                }
            }
        }
    }
}

#[test]
fn meet_of_nested_cylinders() {
    let g = graph("two_loops");
    for p in g.extensions(&Path::empty(0), 2) {
        let a = Clopen::cylinder(&g, Path::from_edge_names(&g, 0, "a").unwrap());
        let m = a.meet(&g, &Clopen::cylinder(&g, p.clone())).unwrap();
        if p.edges()[0] == g.edge("a").unwrap() {
            assert_eq!(m.cylinders(), &[p]);
        } else {
            assert!(m.is_empty());
        }
    }
}

#[test]
fn way_below_rather_below_and_inclusion_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let gs = graphs();
    for i in 0..1000 {
        let (_, g) = &gs[i % gs.len()];
        let anchors = live_anchors(g);
        let x = anchors[rng.gen_range(0..anchors.len())];
        let u = random_clopen(g, &mut rng, x);
        let v = if rng.gen_bool(0.3) {
            u.join(g, &random_clopen(g, &mut rng, x)).unwrap()
        } else {
            random_clopen(g, &mut rng, x)
        };
        let inclusion = cells(g, &u).is_subset(&cells(g, &v));
        assert_eq!(way_below(g, &u, &v).unwrap(), inclusion);
        let witness = rather_below(g, &u, &v).unwrap();
        assert_eq!(witness.is_some(), inclusion);
        if let Some(w) = witness {
            assert_eq!(w.join(g, &v).unwrap(), Clopen::full(g, x));
            assert!(w.meet(g, &u).unwrap().is_empty());
        }
    }
    let g = graph("two_loops");
    let a = Clopen::cylinder(&g, Path::from_edge_names(&g, 0, "a").unwrap());
    assert!(!way_below(&g, &Clopen::full(&g, 0), &a).unwrap());
    assert!(way_below(&g, &Clopen::empty(0), &a).unwrap());
}

#[test]
fn sections_extend_from_every_smaller_clopen() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for (name, g) in graphs() {
        for x in live_anchors(&g) {
            for _ in 0..100 {
                let v = random_clopen(&g, &mut rng, x);
                let u = v.meet(&g, &random_clopen(&g, &mut rng, x)).unwrap();
                let s = random_section::<Q>(&g, &mut rng, x);
                let ext = extend_with_support(&g, &s, &u, &v).unwrap_or_else(|e| panic!("{name}: {e}"));
                for cell in all_cells(&g, x) {
                    let inside_u = cells(&g, &u).contains(&cell);
                    if inside_u {
                        assert_eq!(value(&ext, &cell), value(&s, &cell));
                    }
                    if !cells(&g, &v).contains(&cell) {
                        assert!(value(&ext, &cell).is_zero());
                    }
                }
            }
        }
    }
}

fn partition_case<S: Scalar>(g: &Graph, rng: &mut ChaCha8Rng, x: usize) {
    let s = random_section::<S>(g, rng, x);
    let support = s.support(g);
    let k = rng.gen_range(1..=4);
    let mut cover: Vec<Clopen> = (0..k).map(|_| random_clopen(g, rng, x)).collect();
    // make the cover reach the whole support
    for cell in cells(g, &support) {
        if !cover.iter().any(|c| cells(g, c).contains(&cell)) {
            let i = rng.gen_range(0..k);
            cover[i] = cover[i].join(g, &Clopen::cylinder(g, cell)).unwrap();
        }
    }
    let parts = partition_of_support(g, &s, &cover).unwrap();
    assert_eq!(parts.len(), cover.len());
    for cell in all_cells(g, x) {
        let sum = parts.iter().fold(S::zero(), |acc, p| acc + value(p, &cell));
        assert_eq!(sum, value(&s, &cell));
    }
    for (p, c) in parts.iter().zip(&cover) {
        assert!(cells(g, &p.support(g)).is_subset(&cells(g, c)));
        assert!(way_below(g, &p.support(g), c).unwrap());
    }
}

#[test]
fn partition_of_support_splits_exactly() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let gs = graphs();
    for i in 0..1000 {
        let (_, g) = &gs[i % gs.len()];
        let anchors = live_anchors(g);
        let x = anchors[rng.gen_range(0..anchors.len())];
        if i % 2 == 0 {
            partition_case::<Q>(g, &mut rng, x);
        } else {
            partition_case::<Z>(g, &mut rng, x);
        }
    }
}

#[test]
fn partition_rejects_short_covers() {
    let g = graph("two_loops");
    let s = LCSection::constant(&g, &Clopen::full(&g, 0), Q::from_integer(1.into()));
    let a = Clopen::cylinder(&g, Path::from_edge_names(&g, 0, "a").unwrap());
    assert!(partition_of_support(&g, &s, &[a]).is_err());
}
