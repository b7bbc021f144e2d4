//! Vertex partitions, their characteristic matrices and the partition lattice.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::numeric::Scalar;

/// A partition of `{0..n}` into nonempty cells.
///
/// Cell order is significant (it fixes the column order of characteristic
/// matrices and quotients); vertices inside a cell are kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Partition {
    assignment: Vec<usize>,
    cells: Vec<Vec<usize>>,
}

impl Partition {
    pub fn from_cells(n: usize, cells: Vec<Vec<usize>>) -> Result<Self> {
        let mut assignment = vec![usize::MAX; n];
        let mut sorted = Vec::with_capacity(cells.len());
        for (i, mut cell) in cells.into_iter().enumerate() {
            if cell.is_empty() {
                return Err(Error::InvalidPartition(format!("cell {i} is empty")));
            }
            cell.sort_unstable();
            for &v in &cell {
                if v >= n {
                    return Err(Error::VertexOutOfRange { vertex: v, n });
                }
                if assignment[v] != usize::MAX {
                    return Err(Error::InvalidPartition(format!("vertex {v} appears twice")));
                }
                assignment[v] = i;
            }
            sorted.push(cell);
        }
        if let Some(v) = assignment.iter().position(|&c| c == usize::MAX) {
            return Err(Error::InvalidPartition(format!("vertex {v} is not covered")));
        }
        Ok(Self {
            assignment,
            cells: sorted,
        })
    }

    /// Cells numbered by first appearance of each label.
    pub fn from_labels<L: Eq + std::hash::Hash + Clone>(labels: &[L]) -> Self {
        let mut index = std::collections::HashMap::new();
        let mut cells: Vec<Vec<usize>> = Vec::new();
        let assignment = labels
            .iter()
            .enumerate()
            .map(|(v, l)| {
                let next = cells.len();
                let c = *index.entry(l.clone()).or_insert(next);
                if c == cells.len() {
                    cells.push(Vec::new());
                }
                cells[c].push(v);
                c
            })
            .collect();
        Self { assignment, cells }
    }

    pub fn singletons(n: usize) -> Self {
        Self {
            assignment: (0..n).collect(),
            cells: (0..n).map(|v| vec![v]).collect(),
        }
    }

    pub fn one_cell(n: usize) -> Self {
        Self {
            assignment: vec![0; n],
            cells: vec![(0..n).collect()],
        }
    }

    /// Size of the ground set.
    pub fn n(&self) -> usize {
        self.assignment.len()
    }

    /// Number of cells.
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    pub fn cell(&self, i: usize) -> &[usize] {
        &self.cells[i]
    }

    pub fn cell_of(&self, v: usize) -> usize {
        self.assignment[v]
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn cell_sizes(&self) -> Vec<usize> {
        self.cells.iter().map(Vec::len).collect()
    }

    /// Same cells, ordered by (size, smallest vertex).
    pub fn normalized(&self) -> Self {
        let mut cells = self.cells.clone();
        cells.sort_by_key(|c| (c.len(), c[0]));
        Self::from_cells(self.n(), cells).expect("reordering keeps validity")
    }

    /// Equality as set partitions, ignoring cell order.
    pub fn same_as(&self, other: &Self) -> bool {
        self.n() == other.n() && self.normalized() == other.normalized()
    }

    /// `self <= other`: every cell of `self` lies inside a cell of `other`.
    pub fn refines(&self, other: &Self) -> bool {
        self.n() == other.n() && self.first_straddling_cell(other).is_none()
    }

    /// A cell of `self` that meets more than one cell of `other`.
    pub fn first_straddling_cell(&self, other: &Self) -> Option<usize> {
        self.cells.iter().position(|cell| {
            let target = other.cell_of(cell[0]);
            cell.iter().any(|&v| other.cell_of(v) != target)
        })
    }

    fn check_ground(&self, other: &Self) -> Result<()> {
        if self.n() != other.n() {
            return Err(Error::GroundSetMismatch {
                left: self.n(),
                right: other.n(),
            });
        }
        Ok(())
    }

    /// Finest partition coarser than both: connected components of the
    /// relation "same cell in either".
    pub fn join(&self, other: &Self) -> Result<Self> {
        self.check_ground(other)?;
        let n = self.n();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for cell in self.cells.iter().chain(&other.cells) {
            for &v in &cell[1..] {
                let (a, b) = (find(&mut parent, cell[0]), find(&mut parent, v));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        let roots: Vec<usize> = (0..n).map(|v| find(&mut parent, v)).collect();
        Ok(Self::from_labels(&roots))
    }

    /// Coarsest partition finer than both: nonempty pairwise intersections.
    pub fn meet(&self, other: &Self) -> Result<Self> {
        self.check_ground(other)?;
        let keys: Vec<(usize, usize)> = (0..self.n())
            .map(|v| (self.cell_of(v), other.cell_of(v)))
            .collect();
        Ok(Self::from_labels(&keys))
    }

    /// The 0/1 matrix whose column `i` is the indicator of cell `i`.
    pub fn characteristic_matrix<T: Scalar>(&self) -> Matrix<T> {
        Matrix::from_fn(self.n(), self.len(), |v, i| {
            if self.assignment[v] == i {
                T::one()
            } else {
                T::zero()
            }
        })
    }

    /// Characteristic matrix with unit columns: entry `1/sqrt(|C_i|)` on cell `i`.
    pub fn normalized_characteristic_matrix(&self) -> Matrix<f64> {
        let scale: Vec<f64> = self.cells.iter().map(|c| 1.0 / (c.len() as f64).sqrt()).collect();
        Matrix::from_fn(self.n(), self.len(), |v, i| {
            if self.assignment[v] == i {
                scale[i]
            } else {
                0.0
            }
        })
    }

    /// Characteristic matrix with column `i` equal to `w` restricted to cell `i`.
    pub fn weighted_characteristic_matrix(&self, w: &[f64]) -> Matrix<f64> {
        assert_eq!(w.len(), self.n());
        Matrix::from_fn(self.n(), self.len(), |v, i| {
            if self.assignment[v] == i {
                w[v]
            } else {
                0.0
            }
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.cells).expect("cells serialize")
    }

    pub fn from_json(n: usize, s: &str) -> Result<Self> {
        let cells: Vec<Vec<usize>> =
            serde_json::from_str(s).map_err(|e| Error::Parse(format!("partition JSON: {e}")))?;
        Self::from_cells(n, cells)
    }
}

impl Serialize for Partition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.cells.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let cells = Vec::<Vec<usize>>::deserialize(d)?;
        let n = cells.iter().map(Vec::len).sum();
        Self::from_cells(n, cells).map_err(serde::de::Error::custom)
    }
}
