//! Cubical complexes on dyadic grids.
//!
//! Given a set of level-`m` grid points, a `k`-cell (an axis-aligned cube of
//! side `2^-m` spanning `k` axes) belongs to the complex exactly when all
//! `2^k` of its corners are in the set. The complex is therefore closed under
//! faces and its vertex set is the input set.
//!
//! Cells of each dimension are ordered by anchor (lexicographic, axis 0
//! first) and then by extent bitmask, so boundary matrices are reproducible.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::netbuilder::{DyadicPoint, Grid, NetError, MAX_DIM};

/// An axis-aligned grid cube: minimal corner plus the set of axes it spans.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CubicalCell {
    /// Integer grid coordinates of the minimal corner.
    pub anchor: [u32; MAX_DIM],
    /// Bit `i` set iff the cell extends along axis `i`.
    pub extent: u8,
}

impl CubicalCell {
    pub fn dimension(&self) -> usize {
        self.extent.count_ones() as usize
    }

    /// The `2k` codimension-one faces, lower face before upper face per axis.
    pub fn faces(&self) -> impl Iterator<Item = CubicalCell> + '_ {
        (0..MAX_DIM)
            .filter(move |&axis| self.extent & (1 << axis) != 0)
            .flat_map(move |axis| {
                let extent = self.extent & !(1 << axis);
                let mut upper = self.anchor;
                upper[axis] += 1;
                [
                    CubicalCell {
                        anchor: self.anchor,
                        extent,
                    },
                    CubicalCell {
                        anchor: upper,
                        extent,
                    },
                ]
            })
    }
}

/// Sparse 0/1 matrix over GF(2), stored by columns as sorted row indices.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SparseBinaryMatrix {
    rows: usize,
    columns: Vec<Vec<u32>>,
}

impl SparseBinaryMatrix {
    /// Entries are taken mod 2: a row index repeated an even number of times
    /// in one column cancels.
    pub fn from_columns(rows: usize, columns: Vec<Vec<u32>>) -> Self {
        let columns = columns
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                let mut out: Vec<u32> = Vec::with_capacity(c.len());
                for r in c {
                    assert!((r as usize) < rows, "row index {r} out of range");
                    if out.last() == Some(&r) {
                        out.pop();
                    } else {
                        out.push(r);
                    }
                }
                out
            })
            .collect();
        SparseBinaryMatrix { rows, columns }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseBinaryMatrix {
            rows,
            columns: vec![Vec::new(); cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, j: usize) -> &[u32] {
        &self.columns[j]
    }

    pub fn columns(&self) -> &[Vec<u32>] {
        &self.columns
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        self.columns[col].binary_search(&(row as u32)).is_ok()
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    /// Product over GF(2).
    pub fn mul(&self, rhs: &SparseBinaryMatrix) -> SparseBinaryMatrix {
        assert_eq!(self.cols(), rhs.rows(), "shape mismatch");
        let columns = rhs
            .columns
            .iter()
            .map(|c| {
                c.iter()
                    .flat_map(|&k| self.columns[k as usize].iter().copied())
                    .collect()
            })
            .collect();
        SparseBinaryMatrix::from_columns(self.rows, columns)
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubicalComplex {
    grid: Grid,
    cells: Vec<Vec<CubicalCell>>,
    // (vertex index << dim | extent) -> position within its dimension
    index: Vec<u32>,
}

const ABSENT: u32 = u32::MAX;

impl CubicalComplex {
    pub fn dim(&self) -> usize {
        self.grid.dim()
    }

    pub fn level(&self) -> u32 {
        self.grid.level()
    }

    pub fn cells(&self, k: usize) -> &[CubicalCell] {
        self.cells.get(k).map_or(&[], Vec::as_slice)
    }

    pub fn cell_counts(&self) -> Vec<usize> {
        self.cells.iter().map(Vec::len).collect()
    }

    fn code(&self, cell: &CubicalCell) -> usize {
        let a: Vec<u64> = cell.anchor[..self.dim()]
            .iter()
            .map(|&x| x as u64)
            .collect();
        (self.grid.index(&a) << self.dim()) | cell.extent as usize
    }

    /// Position of `cell` within its dimension's list, if present.
    pub fn position(&self, cell: &CubicalCell) -> Option<usize> {
        let top = self.grid.side() as u32 - 1;
        let fits = (0..self.dim()).all(|i| cell.anchor[i] + ((cell.extent >> i) & 1) as u32 <= top)
            && cell.anchor[self.dim()..].iter().all(|&x| x == 0)
            && (cell.extent as usize) < (1 << self.dim());
        if !fits {
            return None;
        }
        match self.index[self.code(cell)] {
            ABSENT => None,
            i => Some(i as usize),
        }
    }

    pub fn vertex_point(&self, cell: &CubicalCell) -> DyadicPoint {
        let a: Vec<u64> = cell.anchor[..self.dim()]
            .iter()
            .map(|&x| x as u64)
            .collect();
        self.grid.point(&a)
    }

    /// Boundary operator from `k`-cells to `(k-1)`-cells over GF(2).
    pub fn boundary_matrix(&self, k: usize) -> SparseBinaryMatrix {
        assert!(k >= 1, "boundary matrices start at k = 1");
        let rows = self.cells(k - 1).len();
        let columns = self
            .cells(k)
            .iter()
            .map(|cell| {
                cell.faces()
                    .map(|f| self.index[self.code(&f)])
                    .inspect(|&i| debug_assert_ne!(i, ABSENT, "complex is face-closed"))
                    .collect()
            })
            .collect();
        SparseBinaryMatrix::from_columns(rows, columns)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.cells
            .iter()
            .enumerate()
            .map(|(k, c)| {
                if k % 2 == 0 {
                    c.len() as i64
                } else {
                    -(c.len() as i64)
                }
            })
            .sum()
    }

    pub fn summary(&self) -> ComplexSummary {
        ComplexSummary {
            level: self.level(),
            dimension: self.dim(),
            cell_counts: self.cell_counts(),
            euler: self.euler_characteristic(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComplexSummary {
    pub level: u32,
    pub dimension: usize,
    pub cell_counts: Vec<usize>,
    pub euler: i64,
}

/// Builds the full-corner cubical complex of `points` on the level-`m` grid.
pub fn build_cubical<'a>(
    points: impl IntoIterator<Item = &'a DyadicPoint>,
    m: u32,
    dim: usize,
) -> Result<CubicalComplex, NetError> {
    let grid = Grid::new(dim, m)?;
    let present = grid.presence(points)?;
    let masks = 1usize << dim;
    let top = grid.side() - 1;
    let mut cells: Vec<Vec<CubicalCell>> = vec![Vec::new(); dim + 1];
    let mut index = vec![ABSENT; grid.len() * masks];

    for (v, c) in grid.iter().enumerate() {
        if !present[v] {
            continue;
        }
        for mask in 0..masks {
            if (0..dim).any(|i| mask & (1 << i) != 0 && c[i] == top) {
                continue;
            }
            let all_corners = (0..masks).filter(|s| s & !mask == 0).all(|sub| {
                let mut corner = c;
                for (i, x) in corner.iter_mut().enumerate().take(dim) {
                    *x += ((sub >> i) & 1) as u64;
                }
                present[grid.index(&corner)]
            });
            if all_corners {
                let mut anchor = [0u32; MAX_DIM];
                for i in 0..dim {
                    anchor[i] = c[i] as u32;
                }
                let k = mask.count_ones() as usize;
                index[(v << dim) | mask] = cells[k].len() as u32;
                cells[k].push(CubicalCell {
                    anchor,
                    extent: mask as u8,
                });
            }
        }
    }
    Ok(CubicalComplex { grid, cells, index })
}

/// Convenience for an owned point set.
pub fn build_from_set(
    points: &BTreeSet<DyadicPoint>,
    m: u32,
    dim: usize,
) -> Result<CubicalComplex, NetError> {
    build_cubical(points.iter(), m, dim)
}
