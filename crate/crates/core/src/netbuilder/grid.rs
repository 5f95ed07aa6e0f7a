use super::dyadic::{check_dim, check_level, DyadicPoint, MAX_DIM};
use super::NetError;

/// Largest grid (in vertices) that any routine will materialise.
pub const MAX_GRID_POINTS: u64 = 1 << 23;

/// The full dyadic grid `{k / 2^level : 0 <= k <= 2^level}^dim` with a dense
/// row-major numbering, axis 0 most significant.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Grid {
    dim: usize,
    level: u32,
    side: u64,
}

impl Grid {
    pub fn new(dim: usize, level: u32) -> Result<Self, NetError> {
        check_dim(dim)?;
        check_level(level)?;
        let side = (1u64 << level) + 1;
        let len = side.checked_pow(dim as u32);
        if len.is_none_or(|l| l > MAX_GRID_POINTS) {
            return Err(NetError::TooLarge { dim, level });
        }
        Ok(Grid { dim, level, side })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// Vertices per axis, `2^level + 1`.
    pub fn side(&self) -> u64 {
        self.side
    }

    pub fn len(&self) -> usize {
        self.side.pow(self.dim as u32) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn index(&self, c: &[u64]) -> usize {
        c[..self.dim]
            .iter()
            .fold(0u64, |acc, &x| acc * self.side + x) as usize
    }

    pub fn coords(&self, mut idx: usize) -> [u64; MAX_DIM] {
        let mut out = [0u64; MAX_DIM];
        for axis in (0..self.dim).rev() {
            out[axis] = idx as u64 % self.side;
            idx /= self.side as usize;
        }
        out
    }

    pub fn point(&self, c: &[u64]) -> DyadicPoint {
        DyadicPoint::from_grid(&c[..self.dim], self.level).expect("grid coordinates are in range")
    }

    /// All vertices in index order.
    pub fn iter(&self) -> impl Iterator<Item = [u64; MAX_DIM]> + '_ {
        (0..self.len()).map(move |i| self.coords(i))
    }

    /// Dense membership bitmap of a point set, which must lie on this grid.
    pub fn presence<'a>(
        &self,
        points: impl IntoIterator<Item = &'a DyadicPoint>,
    ) -> Result<Vec<bool>, NetError> {
        let mut present = vec![false; self.len()];
        for p in points {
            if p.dim() != self.dim {
                return Err(NetError::DimensionMismatch {
                    expected: self.dim,
                    found: p.dim(),
                });
            }
            let c = p.grid_coords(self.level).ok_or_else(|| NetError::OffGrid {
                point: p.to_string(),
                level: self.level,
            })?;
            present[self.index(&c)] = true;
        }
        Ok(present)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_round_trip_in_lex_order() {
        let g = Grid::new(3, 1).unwrap();
        assert_eq!(g.len(), 27);
        let all: Vec<_> = g.iter().collect();
        for (i, c) in all.iter().enumerate() {
            assert_eq!(g.index(c), i);
        }
        assert_eq!(all[1], [0, 0, 1, 0]);
        assert_eq!(all[9], [1, 0, 0, 0]);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn oversized_grids_are_refused() {
        assert!(matches!(Grid::new(4, 6), Err(NetError::TooLarge { .. })));
        assert!(matches!(Grid::new(5, 1), Err(NetError::Dimension(5))));
    }
}
