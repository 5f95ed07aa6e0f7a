//! Independent oracles shared by the integration tests. None of these route
//! through the engine code they are used to check.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

use pi2bench::complex::SparseBinaryMatrix;
use pi2bench::netbuilder::{DyadicPoint, EpsNet, SpaceTag, SquaredDistance};

/// Dense Gaussian elimination over GF(2) on bit-packed rows.
pub fn dense_rank(m: &SparseBinaryMatrix) -> usize {
    let words = m.cols().div_ceil(64).max(1);
    let mut rows = vec![vec![0u64; words]; m.rows()];
    for (j, col) in m.columns().iter().enumerate() {
        for &r in col {
            rows[r as usize][j / 64] ^= 1 << (j % 64);
        }
    }
    let mut rank = 0;
    for col in 0..m.cols() {
        let (w, bit) = (col / 64, 1u64 << (col % 64));
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][w] & bit != 0) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[w] & bit != 0 {
                for (a, b) in row.iter_mut().zip(&pivot) {
                    *a ^= b;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Reduced fraction k / 2^level as (numerator, denominator) via gcd.
fn frac(k: u64, level: u32) -> (u64, u64) {
    let d = 1u64 << level;
    let g = gcd(k, d);
    (k / g, d / g)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn tuples(level: u32, dim: usize) -> Vec<Vec<u64>> {
    let side = (1u64 << level) + 1;
    let mut out = vec![vec![]];
    for _ in 0..dim {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..side).map(move |x| {
                    let mut t = t.clone();
                    t.push(x);
                    t
                })
            })
            .collect();
    }
    out
}

/// The level-`level` grid as a set of reduced-fraction tuples.
pub fn grid_fractions(level: u32, dim: usize) -> HashSet<Vec<(u64, u64)>> {
    tuples(level, dim)
        .into_iter()
        .map(|t| t.into_iter().map(|k| frac(k, level)).collect())
        .collect()
}

/// Layer `m` by explicit set difference of two enumerated grids.
pub fn layer_by_enumeration(m: u32, dim: usize) -> HashSet<Vec<(u64, u64)>> {
    let fine = grid_fractions(m, dim);
    if m == 0 {
        return fine;
    }
    let coarse = grid_fractions(m - 1, dim);
    fine.difference(&coarse).cloned().collect()
}

pub fn to_fractions(p: &DyadicPoint) -> Vec<(u64, u64)> {
    p.coords()
        .iter()
        .map(|c| frac(c.numerator(), c.level()))
        .collect()
}

pub fn all_grid_points(level: u32, dim: usize) -> Vec<DyadicPoint> {
    tuples(level, dim)
        .into_iter()
        .map(|t| DyadicPoint::from_grid(&t, level).unwrap())
        .collect()
}

/// Brute-force max-min over every reference point of the net's space.
pub fn brute_covering_sq(net: &EpsNet, reference_level: u32) -> SquaredDistance {
    let in_space = |x: &DyadicPoint| match net.space() {
        SpaceTag::Cube => true,
        SpaceTag::Boundary => x
            .coords()
            .iter()
            .any(|c| c.numerator() == 0 || (c.numerator() == 1 && c.level() == 0)),
        SpaceTag::Punctured(ball) => x.sq_dist(&ball.center) >= ball.d_squared,
    };
    all_grid_points(reference_level, net.dim())
        .iter()
        .filter(|x| in_space(x))
        .map(|x| net.points().iter().map(|p| p.sq_dist(x)).min().unwrap())
        .max()
        .unwrap_or_else(SquaredDistance::zero)
}

/// Shuffle-free deterministic permutation of a point set, for order tests.
pub fn reversed(points: &BTreeSet<DyadicPoint>) -> Vec<DyadicPoint> {
    points.iter().rev().copied().collect()
}
