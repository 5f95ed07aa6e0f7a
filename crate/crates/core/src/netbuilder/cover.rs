//! Covering radius of a grid net over its target space, measured on a finer
//! reference mesh.
//!
//! The reference mesh is split into the level-`m` cells of the net. A cell
//! whose corners are all net points and whose reference points all belong to
//! the target space contributes exactly its centre's squared distance to the
//! nearest corner, `D·(h/2)²`. Every other cell is scanned point by point with
//! an exact nearest-neighbour search over the net's grid.

use std::collections::BTreeSet;

use num_rational::Ratio;
use rayon::prelude::*;

use super::dyadic::{check_level, Dyadic, DyadicPoint, SquaredDistance, MAX_DIM};
use super::grid::Grid;
use super::{EpsNet, NetError, SpaceTag};

/// Squared covering radius of `net` over its space, maximised over the
/// reference grid at `reference_level` (which must be at least two levels
/// finer than the net).
pub fn covering_radius_sq(net: &EpsNet, reference_level: u32) -> Result<SquaredDistance, NetError> {
    covering_radius_parts(
        net.dim(),
        net.level(),
        net.points(),
        net.space(),
        reference_level,
    )
}

/// Largest `2^-k` (with `k <= reference_level`) strictly exceeding the
/// covering radius.
pub fn epsilon_from_cover(cover: SquaredDistance, reference_level: u32) -> Dyadic {
    let top = reference_level.min(31) as i32;
    (-4..=top)
        .rev()
        .find(|&k| cover.ratio() < Dyadic::pow2(k).square())
        .map_or(Dyadic::pow2(-4), Dyadic::pow2)
}

enum Region {
    Cube,
    Boundary,
    // centre in reference coordinates, radius as a rational in reference units²
    Ball {
        center: [u64; MAX_DIM],
        r2: Ratio<u64>,
    },
}

pub(super) fn covering_radius_parts(
    dim: usize,
    level: u32,
    points: &BTreeSet<DyadicPoint>,
    space: &SpaceTag,
    reference_level: u32,
) -> Result<SquaredDistance, NetError> {
    if reference_level < level + 2 {
        return Err(NetError::ReferenceTooCoarse {
            reference: reference_level,
            required: level + 2,
        });
    }
    check_level(reference_level)?;
    if points.is_empty() {
        return Err(NetError::EmptyNet);
    }
    let grid = Grid::new(dim, level)?;
    let present = grid.presence(points)?;
    let scale = 1u64 << (reference_level - level);

    let region = match space {
        SpaceTag::Cube => Region::Cube,
        SpaceTag::Boundary => Region::Boundary,
        SpaceTag::Punctured(ball) => {
            let center =
                ball.center
                    .grid_coords(reference_level)
                    .ok_or_else(|| NetError::OffGrid {
                        point: ball.center.to_string(),
                        level: reference_level,
                    })?;
            let units = 1u64 << (2 * reference_level);
            Region::Ball {
                center,
                r2: ball.d_squared.ratio() * Ratio::from_integer(units),
            }
        }
    };

    let search = Search {
        dim,
        grid: &grid,
        present: &present,
        scale,
        region: &region,
    };
    let cells_per_axis = (grid.side() - 1).max(1);
    let n_cells = cells_per_axis.pow(dim as u32) as usize;
    let worst = (0..n_cells)
        .into_par_iter()
        .map(|cell| search.cell_max(cell, cells_per_axis))
        .max()
        .unwrap_or(0);
    Ok(SquaredDistance::new(worst, 1u64 << (2 * reference_level)))
}

struct Search<'a> {
    dim: usize,
    grid: &'a Grid,
    present: &'a [bool],
    scale: u64,
    region: &'a Region,
}

impl Search<'_> {
    fn in_target(&self, x: &[u64; MAX_DIM]) -> bool {
        match self.region {
            Region::Cube => true,
            Region::Boundary => {
                let top = (self.grid.side() - 1) * self.scale;
                x[..self.dim].iter().any(|&v| v == 0 || v == top)
            }
            Region::Ball { center, r2 } => {
                let d2: u64 = (0..self.dim).map(|i| x[i].abs_diff(center[i]).pow(2)).sum();
                Ratio::from_integer(d2) >= *r2
            }
        }
    }

    fn cell_max(&self, cell: usize, per_axis: u64) -> u64 {
        let dim = self.dim;
        let mut anchor = [0u64; MAX_DIM];
        let mut rest = cell as u64;
        for axis in (0..dim).rev() {
            anchor[axis] = rest % per_axis;
            rest /= per_axis;
        }

        let full = (0..1usize << dim).all(|mask| {
            let mut c = anchor;
            for (axis, v) in c.iter_mut().enumerate().take(dim) {
                *v += ((mask >> axis) & 1) as u64;
            }
            self.present[self.grid.index(&c)]
        });

        let s = self.scale;
        let all_target = match self.region {
            Region::Cube => true,
            Region::Boundary => {
                let last = per_axis - 1;
                if anchor[..dim].iter().all(|&a| a != 0 && a != last) {
                    // no reference point of this cell is on the boundary
                    return 0;
                }
                false
            }
            Region::Ball { center, r2 } => {
                // nearest point of the cell box to the centre
                let d2: u64 = (0..dim)
                    .map(|i| {
                        let (lo, hi) = (anchor[i] * s, (anchor[i] + 1) * s);
                        let v = center[i].clamp(lo, hi);
                        v.abs_diff(center[i]).pow(2)
                    })
                    .sum();
                Ratio::from_integer(d2) >= *r2
            }
        };
        if full && all_target {
            return dim as u64 * (s / 2) * (s / 2);
        }

        let mut worst = 0;
        let mut offset = [0u64; MAX_DIM];
        loop {
            let mut x = [0u64; MAX_DIM];
            for i in 0..dim {
                x[i] = anchor[i] * s + offset[i];
            }
            if self.in_target(&x) {
                worst = worst.max(self.nearest_sq(&x));
            }
            // odometer over {0..=s}^dim
            let mut axis = 0;
            while axis < dim {
                offset[axis] += 1;
                if offset[axis] <= s {
                    break;
                }
                offset[axis] = 0;
                axis += 1;
            }
            if axis == dim {
                break;
            }
        }
        worst
    }

    /// Exact squared distance (reference units) from `x` to the nearest net
    /// point, searching Chebyshev rings around the closest grid vertex.
    fn nearest_sq(&self, x: &[u64; MAX_DIM]) -> u64 {
        let dim = self.dim;
        let s = self.scale;
        let top = self.grid.side() - 1;
        let mut g0 = [0u64; MAX_DIM];
        for i in 0..dim {
            g0[i] = ((x[i] + s / 2) / s).min(top);
        }
        let mut best = u64::MAX;
        for k in 0..=top {
            if k > 0 && best != u64::MAX {
                // every ring-k vertex is at least (k - 1/2)·s away along some axis
                let lb = (2 * k - 1) * s;
                if 4 * best <= lb * lb {
                    break;
                }
            }
            let lo: Vec<u64> = (0..dim).map(|i| g0[i].saturating_sub(k)).collect();
            let hi: Vec<u64> = (0..dim).map(|i| (g0[i] + k).min(top)).collect();
            let mut g = [0u64; MAX_DIM];
            g[..dim].copy_from_slice(&lo);
            loop {
                let on_ring = (0..dim).any(|i| g[i].abs_diff(g0[i]) == k);
                if on_ring && self.present[self.grid.index(&g)] {
                    let d2: u64 = (0..dim).map(|i| (g[i] * s).abs_diff(x[i]).pow(2)).sum();
                    best = best.min(d2);
                }
                let mut axis = 0;
                while axis < dim {
                    g[axis] += 1;
                    if g[axis] <= hi[axis] {
                        break;
                    }
                    g[axis] = lo[axis];
                    axis += 1;
                }
                if axis == dim {
                    break;
                }
            }
        }
        best
    }
}
