mod common;

use std::collections::BTreeSet;

use pi2bench::complex::{build_cubical, build_from_set, SparseBinaryMatrix};
use pi2bench::homology::{betti, boundary_ranks, q_hat, rank_gf2, VerdictKind};
use pi2bench::netbuilder::{boundary_net, cumulative_net, DyadicPoint, Method, NetStream};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use common::{dense_rank, reversed};

fn random_matrix(rng: &mut StdRng, max_side: usize) -> SparseBinaryMatrix {
    let rows = rng.gen_range(1..=max_side);
    let cols = rng.gen_range(1..=max_side);
    let density: f64 = rng.gen_range(0.005..0.3);
    let columns = (0..cols)
        .map(|_| (0..rows as u32).filter(|_| rng.gen_bool(density)).collect())
        .collect();
    SparseBinaryMatrix::from_columns(rows, columns)
}

/// Columns that are sums of earlier ones, so the rank is well below full.
fn low_rank_matrix(rng: &mut StdRng, rows: usize, cols: usize, rank: usize) -> SparseBinaryMatrix {
    let basis: Vec<Vec<u32>> = (0..rank)
        .map(|_| (0..rows as u32).filter(|_| rng.gen_bool(0.2)).collect())
        .collect();
    let columns = (0..cols)
        .map(|_| {
            basis
                .iter()
                .filter(|_| rng.gen_bool(0.5))
                .flatten()
                .copied()
                .collect()
        })
        .collect();
    SparseBinaryMatrix::from_columns(rows, columns)
}

#[test]
fn sparse_rank_agrees_with_dense_elimination() {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    for i in 0..200 {
        let m = if i % 4 == 3 {
            low_rank_matrix(&mut rng, 150, 200, 40)
        } else {
            random_matrix(&mut rng, 200)
        };
        assert_eq!(rank_gf2(&m), dense_rank(&m), "matrix {i}");
    }
}

#[test]
fn clearing_does_not_change_ranks() {
    let mut stream = NetStream::new(3).unwrap();
    for method in [Method::One, Method::Two, Method::Two] {
        stream.push(method).unwrap();
    }
    let nets = [
        cumulative_net(2, 3).unwrap().into_points(),
        boundary_net(2, 3).unwrap().into_points(),
        stream.union().clone(),
        boundary_net(3, 2).unwrap().into_points(),
    ];
    let levels = [2, 2, 2, 3];
    let dims = [3, 3, 3, 2];
    for ((pts, m), dim) in nets.iter().zip(levels).zip(dims) {
        let cx = build_from_set(pts, m, dim).unwrap();
        let plain: Vec<usize> = (1..=dim)
            .map(|k| dense_rank(&cx.boundary_matrix(k)))
            .collect();
        assert_eq!(boundary_ranks(&cx), plain);
    }
}

#[test]
fn boundary_squares_to_zero_and_euler_agrees() {
    let mut cases = Vec::new();
    for dim in 2..=3 {
        for m in 1..=3 {
            cases.push((cumulative_net(m, dim).unwrap().into_points(), m, dim));
            cases.push((boundary_net(m, dim).unwrap().into_points(), m, dim));
        }
    }
    let mut stream = NetStream::new(3).unwrap();
    for method in [Method::One, Method::One, Method::Two, Method::Two] {
        stream.push(method).unwrap();
        let m = stream.next_level() - 1;
        cases.push((stream.union().clone(), m, 3));
    }
    for (pts, m, dim) in cases {
        let cx = build_from_set(&pts, m, dim).unwrap();
        for k in 2..=dim {
            assert!(cx
                .boundary_matrix(k - 1)
                .mul(&cx.boundary_matrix(k))
                .is_zero());
        }
        let b = betti(&cx);
        assert_eq!(b.euler(), b.betti_euler(), "m={m} dim={dim}");
        assert_eq!(b.euler(), cx.euler_characteristic());
    }
}

#[test]
fn betti_numbers_are_stable_under_refinement() {
    for m in 1..=4 {
        let cube = q_hat(&cumulative_net(m, 3).unwrap(), m).unwrap();
        assert_eq!(cube.evidence.betti, vec![1, 0, 0, 0], "cube m={m}");
        let shell = q_hat(&boundary_net(m, 3).unwrap(), m).unwrap();
        assert_eq!(shell.evidence.betti, vec![1, 0, 1, 0], "shell m={m}");
    }
}

#[test]
fn punctured_verdict_across_dimensions() {
    let expected = [(2, vec![1, 1, 0]), (3, vec![1, 0, 1, 0])];
    for (dim, betti_vec) in expected {
        for m in 1..=3 {
            let mut s = NetStream::new(dim).unwrap();
            for _ in 0..=m {
                s.push(Method::Two).unwrap();
            }
            let v = q_hat(&s.accumulated().unwrap(), m).unwrap();
            assert_eq!(v.evidence.betti, betti_vec, "dim={dim} m={m}");
            assert_eq!(v.kind, VerdictKind::Nontrivial);
        }
    }
    for m in 1..=2 {
        let v = q_hat(&cumulative_net(m, 4).unwrap(), m).unwrap();
        assert_eq!(v.evidence.betti, vec![1, 0, 0, 0, 0]);
        assert_eq!(v.kind, VerdictKind::Trivial);
    }
}

#[test]
fn verdict_ignores_input_order() {
    let mut s = NetStream::new(3).unwrap();
    for method in [Method::One, Method::One, Method::Two] {
        s.push(method).unwrap();
    }
    let pts: BTreeSet<DyadicPoint> = s.union().clone();
    let forward = build_from_set(&pts, 2, 3).unwrap();
    let backward = build_cubical(reversed(&pts).iter(), 2, 3).unwrap();
    assert_eq!(forward, backward);
    assert_eq!(betti(&forward), betti(&backward));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_is_invariant_under_permutations(
        seed in any::<u64>(),
        row_perm_seed in any::<u64>(),
        col_perm_seed in any::<u64>(),
    ) {
        let mut rng = StdRng::seed_from_u64(seed);
        let m = random_matrix(&mut rng, 60);
        let mut rows: Vec<u32> = (0..m.rows() as u32).collect();
        let mut cols: Vec<usize> = (0..m.cols()).collect();
        shuffle(&mut rows, row_perm_seed);
        shuffle(&mut cols, col_perm_seed);
        let permuted = SparseBinaryMatrix::from_columns(
            m.rows(),
            cols.iter()
                .map(|&j| m.column(j).iter().map(|&r| rows[r as usize]).collect())
                .collect(),
        );
        prop_assert_eq!(rank_gf2(&permuted), rank_gf2(&m));
        prop_assert_eq!(rank_gf2(&m), dense_rank(&m));
    }

    #[test]
    fn removing_one_interior_point_opens_a_cavity(x in 1u64..4, y in 1u64..4, z in 1u64..4) {
        let mut pts = cumulative_net(2, 3).unwrap().into_points();
        pts.remove(&DyadicPoint::from_grid(&[x, y, z], 2).unwrap());
        let b = betti(&build_from_set(&pts, 2, 3).unwrap());
        prop_assert_eq!(b.betti, vec![1, 0, 1, 0]);
    }
}

fn shuffle<T>(xs: &mut [T], seed: u64) {
    use rand::seq::SliceRandom;
    xs.shuffle(&mut StdRng::seed_from_u64(seed));
}
