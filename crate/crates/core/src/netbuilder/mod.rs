//! Exact ε-nets on the unit cube built from dyadic grids.
//!
//! Layer `m` of the refinement is the set of level-`m` grid points that are
//! not on the level-`(m-1)` grid; layer 0 is the corner set `{0,1}^D`. The
//! union of layers `0..=m` is the full level-`m` grid. A punctured layer drops
//! every point strictly inside the open ball `N_d(C)` around the cube centre.

mod cover;
mod dyadic;
mod format;
mod grid;
mod stream;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use cover::{covering_radius_sq, epsilon_from_cover};
pub use dyadic::{Dyadic, DyadicPoint, SquaredDistance, MAX_DIM, MAX_LEVEL, MIN_DIM};
pub use format::{read_net, write_net, NetHeader};
pub use grid::{Grid, MAX_GRID_POINTS};
pub use stream::{Method, NetStream, StreamLayer};

use dyadic::{check_dim, check_level};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NetError {
    #[error("dimension {0} outside the supported range 2..=4")]
    Dimension(usize),
    #[error("level {0} exceeds the maximum of {MAX_LEVEL}")]
    Level(u32),
    #[error("coordinate {0} lies outside [0, 1]")]
    OutOfRange(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("point {point} is not on the level-{level} grid")]
    OffGrid { point: String, level: u32 },
    #[error("reference level {reference} is too coarse; at least {required} is needed")]
    ReferenceTooCoarse { reference: u32, required: u32 },
    #[error("puncture radius must be positive")]
    NonPositiveRadius,
    #[error("point {0} lies inside the puncture ball")]
    InsideBall(String),
    #[error("net has no points")]
    EmptyNet,
    #[error("grid of level {level} in dimension {dim} is too large")]
    TooLarge { dim: usize, level: u32 },
    #[error("a net stream cannot return to method one after switching")]
    MethodRegression,
    #[error("malformed value: {0}")]
    Malformed(String),
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
}

/// An open ball removed from the cube.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Puncture {
    pub center: DyadicPoint,
    pub d_squared: SquaredDistance,
}

impl Puncture {
    /// True when `p` lies strictly inside the open ball.
    pub fn contains(&self, p: &DyadicPoint) -> bool {
        p.sq_dist(&self.center) < self.d_squared
    }
}

/// The space a net is meant to cover.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SpaceTag {
    /// The solid cube `[0,1]^D`.
    Cube,
    /// The cube minus an open ball. If the centre itself is a net point it is
    /// part of the space too (an isolated point left over from coarser
    /// layers).
    Punctured(Puncture),
    /// The boundary `∂[0,1]^D`.
    Boundary,
}

impl SpaceTag {
    pub fn name(&self) -> &'static str {
        match self {
            SpaceTag::Cube => "cube",
            SpaceTag::Punctured(_) => "punctured",
            SpaceTag::Boundary => "boundary",
        }
    }
}

/// A finite net together with a certified covering bound for its space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpsNet {
    dim: usize,
    level: u32,
    points: BTreeSet<DyadicPoint>,
    epsilon_bound: Dyadic,
    space: SpaceTag,
}

impl EpsNet {
    /// Assembles a net with a caller-supplied bound, checking the structural
    /// invariants but not the bound itself.
    pub fn from_parts(
        dim: usize,
        level: u32,
        points: BTreeSet<DyadicPoint>,
        epsilon_bound: Dyadic,
        space: SpaceTag,
    ) -> Result<Self, NetError> {
        validate(dim, level, &points, &space)?;
        Ok(EpsNet {
            dim,
            level,
            points,
            epsilon_bound,
            space,
        })
    }

    /// Assembles a net and certifies its bound on the reference mesh two
    /// levels finer than `level`.
    pub fn certify(
        dim: usize,
        level: u32,
        points: BTreeSet<DyadicPoint>,
        space: SpaceTag,
    ) -> Result<Self, NetError> {
        validate(dim, level, &points, &space)?;
        let reference = level + 2;
        let cover = cover::covering_radius_parts(dim, level, &points, &space, reference)?;
        Ok(EpsNet {
            dim,
            level,
            points,
            epsilon_bound: epsilon_from_cover(cover, reference),
            space,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn points(&self) -> &BTreeSet<DyadicPoint> {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn epsilon_bound(&self) -> Dyadic {
        self.epsilon_bound
    }

    pub fn space(&self) -> &SpaceTag {
        &self.space
    }

    pub fn into_points(self) -> BTreeSet<DyadicPoint> {
        self.points
    }
}

fn validate(
    dim: usize,
    level: u32,
    points: &BTreeSet<DyadicPoint>,
    space: &SpaceTag,
) -> Result<(), NetError> {
    check_dim(dim)?;
    check_level(level)?;
    for p in points {
        if p.dim() != dim {
            return Err(NetError::DimensionMismatch {
                expected: dim,
                found: p.dim(),
            });
        }
        if p.level() > level {
            return Err(NetError::OffGrid {
                point: p.to_string(),
                level,
            });
        }
    }
    if let SpaceTag::Punctured(ball) = space {
        if ball.center.dim() != dim {
            return Err(NetError::DimensionMismatch {
                expected: dim,
                found: ball.center.dim(),
            });
        }
        if ball.d_squared.is_zero() {
            return Err(NetError::NonPositiveRadius);
        }
        if let Some(p) = points
            .iter()
            .find(|p| **p != ball.center && ball.contains(p))
        {
            return Err(NetError::InsideBall(p.to_string()));
        }
    }
    if let SpaceTag::Boundary = space {
        if let Some(p) = points.iter().find(|p| !on_boundary(p)) {
            return Err(NetError::Malformed(format!(
                "{p} is not on the cube boundary"
            )));
        }
    }
    Ok(())
}

fn on_boundary(p: &DyadicPoint) -> bool {
    p.coords()
        .iter()
        .any(|c| *c == Dyadic::ZERO || *c == Dyadic::ONE)
}

/// The refinement layer `B_m`: level-`m` grid points not on the coarser grid.
pub fn grid_layer(m: u32, dim: usize) -> Result<BTreeSet<DyadicPoint>, NetError> {
    let grid = Grid::new(dim, m)?;
    Ok(grid
        .iter()
        .filter(|c| m == 0 || c[..dim].iter().any(|x| x % 2 == 1))
        .map(|c| grid.point(&c))
        .collect())
}

/// Union of layers `0..=m`, i.e. the full level-`m` grid, covering the cube.
pub fn cumulative_net(m: u32, dim: usize) -> Result<EpsNet, NetError> {
    let grid = Grid::new(dim, m)?;
    let points = grid.iter().map(|c| grid.point(&c)).collect();
    EpsNet::certify(dim, m, points, SpaceTag::Cube)
}

/// Level-`m` grid points on the cube boundary.
pub fn boundary_net(m: u32, dim: usize) -> Result<EpsNet, NetError> {
    let grid = Grid::new(dim, m)?;
    let top = grid.side() - 1;
    let points = grid
        .iter()
        .filter(|c| c[..dim].iter().any(|&x| x == 0 || x == top))
        .map(|c| grid.point(&c))
        .collect();
    EpsNet::certify(dim, m, points, SpaceTag::Boundary)
}

/// Fallback puncture radius `d = 1/4`, squared.
pub fn fallback_puncture_sq() -> SquaredDistance {
    SquaredDistance::new(1, 16)
}

/// `d² = (min_x |x - C| / 2)²` over the given points other than `C`, falling
/// back to `(1/4)²` when no such point exists.
pub fn puncture_radius_sq<'a>(
    points: impl IntoIterator<Item = &'a DyadicPoint>,
    center: &DyadicPoint,
) -> SquaredDistance {
    points
        .into_iter()
        .filter(|p| *p != center)
        .map(|p| p.sq_dist(center))
        .min()
        .map_or_else(fallback_puncture_sq, SquaredDistance::quarter)
}

/// `B_m` minus the open ball of squared radius `d_sq` around `center`.
pub fn punctured_layer(
    m: u32,
    d_sq: SquaredDistance,
    center: &DyadicPoint,
    dim: usize,
) -> Result<BTreeSet<DyadicPoint>, NetError> {
    if d_sq.is_zero() {
        return Err(NetError::NonPositiveRadius);
    }
    if center.dim() != dim {
        return Err(NetError::DimensionMismatch {
            expected: dim,
            found: center.dim(),
        });
    }
    let mut layer = grid_layer(m, dim)?;
    layer.retain(|p| p.sq_dist(center) >= d_sq);
    Ok(layer)
}
