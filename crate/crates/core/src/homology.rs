//! Mod-2 homology of cubical complexes, and the finite-resolution verdict
//! that stands in for a triviality oracle on `π_{D-1}`.
//!
//! For the spaces handled here (the solid cube, the cube with a central
//! cavity, the cube boundary) the relevant spaces are simply connected when
//! `D >= 3`, so by Hurewicz the top-but-one homology detects exactly the
//! (non)triviality of `π_{D-1}`. The verdict only ever reads `β_{D-1}`.

use std::time::Instant;

use serde::Serialize;

use crate::complex::{build_cubical, CubicalComplex, SparseBinaryMatrix};
use crate::netbuilder::{EpsNet, NetError};

/// Rank over GF(2) by left-to-right column reduction on the lowest nonzero
/// row of each column.
pub fn rank_gf2(matrix: &SparseBinaryMatrix) -> usize {
    reduce(matrix, None).rank
}

struct Reduction {
    rank: usize,
    /// Pivot rows of the nonzero reduced columns.
    pivot_rows: Vec<u32>,
}

/// Column reduction. Columns listed in `skip` are known to reduce to zero
/// (they lie in the span of earlier columns) and are not touched.
fn reduce(matrix: &SparseBinaryMatrix, skip: Option<&[bool]>) -> Reduction {
    const NONE: u32 = u32::MAX;
    let mut owner = vec![NONE; matrix.rows()];
    let mut reduced: Vec<Vec<u32>> = Vec::new();
    let mut pivot_rows = Vec::new();
    let mut scratch = Vec::new();

    for (j, col) in matrix.columns().iter().enumerate() {
        if skip.is_some_and(|s| s[j]) || col.is_empty() {
            continue;
        }
        let mut work = col.clone();
        while let Some(&low) = work.last() {
            let o = owner[low as usize];
            if o == NONE {
                owner[low as usize] = reduced.len() as u32;
                pivot_rows.push(low);
                reduced.push(work);
                break;
            }
            symmetric_difference(&work, &reduced[o as usize], &mut scratch);
            std::mem::swap(&mut work, &mut scratch);
        }
    }
    Reduction {
        rank: reduced.len(),
        pivot_rows,
    }
}

fn symmetric_difference(a: &[u32], b: &[u32], out: &mut Vec<u32>) {
    out.clear();
    out.reserve(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
}

/// Betti numbers together with the data they were computed from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BettiVector {
    pub betti: Vec<usize>,
    pub cell_counts: Vec<usize>,
    /// `rank(∂_1) ..= rank(∂_D)`.
    pub ranks: Vec<usize>,
}

impl BettiVector {
    pub fn euler(&self) -> i64 {
        alternating(&self.cell_counts)
    }

    pub fn betti_euler(&self) -> i64 {
        alternating(&self.betti)
    }
}

fn alternating(xs: &[usize]) -> i64 {
    xs.iter()
        .enumerate()
        .map(|(k, &x)| if k % 2 == 0 { x as i64 } else { -(x as i64) })
        .sum()
}

/// Ranks of all boundary maps of `cx`, highest dimension first so that each
/// reduction can skip the columns already known to vanish.
///
/// If column `j` of the reduced `∂_{k+1}` has pivot row `i`, the reduced
/// column is a cycle whose last cell is `i`; hence column `i` of `∂_k` is a
/// combination of earlier columns and reduces to zero.
pub fn boundary_ranks(cx: &CubicalComplex) -> Vec<usize> {
    let dim = cx.dim();
    let mut ranks = vec![0; dim];
    let mut cleared: Option<Vec<bool>> = None;
    for k in (1..=dim).rev() {
        let matrix = cx.boundary_matrix(k);
        let r = reduce(&matrix, cleared.as_deref());
        ranks[k - 1] = r.rank;
        let mut next = vec![false; matrix.rows()];
        for row in r.pivot_rows {
            next[row as usize] = true;
        }
        cleared = Some(next);
    }
    ranks
}

pub fn betti(cx: &CubicalComplex) -> BettiVector {
    let dim = cx.dim();
    let counts = cx.cell_counts();
    let ranks = boundary_ranks(cx);
    let rank_at = |k: usize| -> usize {
        if k == 0 || k > dim {
            0
        } else {
            ranks[k - 1]
        }
    };
    let betti = (0..=dim)
        .map(|k| counts[k] - rank_at(k) - rank_at(k + 1))
        .collect();
    let out = BettiVector {
        betti,
        cell_counts: counts,
        ranks,
    };
    debug_assert_eq!(out.euler(), out.betti_euler());
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum VerdictKind {
    Trivial,
    Nontrivial,
}

/// Outcome of the finite-resolution oracle on one net.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub kind: VerdictKind,
    pub evidence: BettiVector,
    pub level: u32,
    pub dimension: usize,
    pub elapsed_ms: u128,
}

impl Verdict {
    pub fn is_nontrivial(&self) -> bool {
        self.kind == VerdictKind::Nontrivial
    }

    /// The Betti number the verdict reads, `β_{D-1}`.
    pub fn witness(&self) -> usize {
        self.evidence.betti[self.dimension - 1]
    }

    pub fn to_json(&self, with_timing: bool) -> VerdictJson {
        VerdictJson {
            verdict: self.kind,
            level: self.level,
            betti: self.evidence.betti.clone(),
            cell_counts: self.evidence.cell_counts.clone(),
            euler: self.evidence.euler(),
            elapsed_ms: with_timing.then_some(self.elapsed_ms),
        }
    }
}

/// Serialized form of a [`Verdict`]. Timing is optional so that reports can
/// be reproduced byte for byte.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerdictJson {
    pub verdict: VerdictKind,
    pub level: u32,
    pub betti: Vec<usize>,
    pub cell_counts: Vec<usize>,
    pub euler: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u128>,
}

/// Builds the level-`m` cubical complex of the net and reports `Nontrivial`
/// iff `β_{D-1} > 0`.
pub fn q_hat(net: &EpsNet, m: u32) -> Result<Verdict, NetError> {
    let started = Instant::now();
    let cx = build_cubical(net.points(), m, net.dim())?;
    let evidence = betti(&cx);
    let dimension = net.dim();
    let kind = if evidence.betti[dimension - 1] > 0 {
        VerdictKind::Nontrivial
    } else {
        VerdictKind::Trivial
    };
    Ok(Verdict {
        kind,
        evidence,
        level: m,
        dimension,
        elapsed_ms: started.elapsed().as_millis(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::build_from_set;
    use crate::netbuilder::{boundary_net, cumulative_net, DyadicPoint};

    fn identity(n: usize) -> SparseBinaryMatrix {
        SparseBinaryMatrix::from_columns(n, (0..n as u32).map(|i| vec![i]).collect())
    }

    #[test]
    fn small_ranks() {
        assert_eq!(rank_gf2(&identity(3)), 3);
        assert_eq!(rank_gf2(&SparseBinaryMatrix::zeros(4, 5)), 0);
        assert_eq!(
            rank_gf2(&SparseBinaryMatrix::from_columns(4, vec![vec![0, 1, 2, 3]])),
            1
        );
        // three columns of a triangle's boundary are dependent
        let tri = SparseBinaryMatrix::from_columns(3, vec![vec![0, 1], vec![1, 2], vec![0, 2]]);
        assert_eq!(rank_gf2(&tri), 2);
    }

    #[test]
    fn betti_of_small_spaces() {
        let cube = build_from_set(cumulative_net(2, 3).unwrap().points(), 2, 3).unwrap();
        assert_eq!(betti(&cube).betti, vec![1, 0, 0, 0]);

        let shell = build_from_set(boundary_net(1, 3).unwrap().points(), 1, 3).unwrap();
        assert_eq!(betti(&shell).betti, vec![1, 0, 1, 0]);

        let mut pts = cumulative_net(1, 3).unwrap().into_points();
        pts.remove(&DyadicPoint::center(3).unwrap());
        let holed = build_from_set(&pts, 1, 3).unwrap();
        let b = betti(&holed);
        assert_eq!(b.betti, vec![1, 0, 1, 0]);
        assert_eq!(b.euler(), 2);
    }

    #[test]
    fn verdicts() {
        let v = q_hat(&cumulative_net(2, 3).unwrap(), 2).unwrap();
        assert_eq!(v.kind, VerdictKind::Trivial);
        assert_eq!(v.evidence.betti, vec![1, 0, 0, 0]);
        let v = q_hat(&boundary_net(2, 3).unwrap(), 2).unwrap();
        assert_eq!(v.kind, VerdictKind::Nontrivial);
        assert_eq!(v.witness(), 1);
    }

    #[test]
    fn verdict_json_omits_timing_by_default() {
        let v = q_hat(&cumulative_net(1, 2).unwrap(), 1).unwrap();
        let json = serde_json::to_string(&v.to_json(false)).unwrap();
        assert_eq!(
            json,
            r#"{"verdict":"Trivial","level":1,"betti":[1,0,0],"cell_counts":[9,12,4],"euler":1}"#
        );
        assert!(serde_json::to_string(&v.to_json(true))
            .unwrap()
            .contains("elapsed_ms"));
    }
}
