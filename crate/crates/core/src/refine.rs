//! Color refinement, equitability tests and exhaustive enumeration of
//! equitable partitions.
//!
//! A partition is equitable for a square matrix `A` when, for every pair of
//! cells `C_i`, `C_j`, the row sums of `A` restricted to the columns of `C_j`
//! are constant over the rows of `C_i`. For symmetric adjacency matrices this
//! is the usual "same number of neighbours" condition; for directed quotient
//! matrices it is exactly invariance of the column space of the
//! characteristic matrix.

use std::fmt;

use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::numeric::{classify, Scalar};
use crate::partition::Partition;

/// Default vertex cap for [`enumerate_equitable`].
pub const DEFAULT_ENUMERATION_CAP: usize = 12;

/// Two vertices of one cell with different weight into another cell.
#[derive(Debug, Clone, PartialEq)]
pub struct EquitabilityViolation {
    pub cell: usize,
    pub target: usize,
    pub u: usize,
    pub v: usize,
    pub sum_u: f64,
    pub sum_v: f64,
}

impl fmt::Display for EquitabilityViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "vertices {} and {} of cell {} send weight {} and {} into cell {}",
            self.u, self.v, self.cell, self.sum_u, self.sum_v, self.target
        )
    }
}

/// Row sums of `adj` into each cell: entry `(v, j)` is the weight from `v`
/// into cell `j`.
pub fn cell_sums<T: Scalar>(adj: &Matrix<T>, pi: &Partition) -> Matrix<T> {
    let mut out = Matrix::<T>::zeros(adj.rows(), pi.len());
    for v in 0..adj.rows() {
        for (u, w) in adj.row(v).iter().enumerate() {
            if !w.is_zero() {
                let j = pi.cell_of(u);
                out[(v, j)] = out[(v, j)].clone() + w.clone();
            }
        }
    }
    out
}

/// First violation of equitability, if any.
pub fn equitability_violation<T: Scalar>(
    adj: &Matrix<T>,
    pi: &Partition,
    tol: f64,
) -> Option<EquitabilityViolation> {
    assert!(adj.is_square() && adj.rows() == pi.n(), "partition does not match matrix");
    let sums = cell_sums(adj, pi);
    for (i, cell) in pi.cells().iter().enumerate() {
        let u = cell[0];
        for &v in &cell[1..] {
            for j in 0..pi.len() {
                if !sums[(u, j)].near(&sums[(v, j)], tol) {
                    return Some(EquitabilityViolation {
                        cell: i,
                        target: j,
                        u,
                        v,
                        sum_u: sums[(u, j)].to_f64(),
                        sum_v: sums[(v, j)].to_f64(),
                    });
                }
            }
        }
    }
    None
}

pub fn is_equitable<T: Scalar>(adj: &Matrix<T>, pi: &Partition, tol: f64) -> bool {
    equitability_violation(adj, pi, tol).is_none()
}

pub fn check_equitable<T: Scalar>(adj: &Matrix<T>, pi: &Partition, tol: f64) -> Result<()> {
    if !adj.is_square() || adj.rows() != pi.n() {
        return Err(Error::DimensionMismatch(format!(
            "partition of {} elements for a {}x{} matrix",
            pi.n(),
            adj.rows(),
            adj.cols()
        )));
    }
    match equitability_violation(adj, pi, tol) {
        None => Ok(()),
        Some(v) => Err(Error::NotEquitable(v)),
    }
}

/// Key of a refined color: the previous color and the weight sent into each
/// previous color.
#[derive(Debug, Clone, PartialEq)]
pub struct ColorKey<T> {
    pub parent: usize,
    pub sums: Vec<T>,
}

impl<T: Scalar> ColorKey<T> {
    pub fn near(&self, other: &Self, tol: f64) -> bool {
        self.parent == other.parent
            && self.sums.len() == other.sums.len()
            && self.sums.iter().zip(&other.sums).all(|(a, b)| a.near(b, tol))
    }
}

/// Every coloring produced by color refinement, with canonical color ids.
///
/// Colors of round `r + 1` are numbered by the sorted order of their keys,
/// so two isomorphic inputs produce identical traces.
#[derive(Debug, Clone, PartialEq)]
pub struct RefinementTrace<T> {
    /// Distinct colorings, from the initial one to the stable one. Cell `c`
    /// of each round holds the vertices of color `c`.
    pub rounds: Vec<Partition>,
    /// `histories[v][r]` is the color of `v` in round `r`.
    pub histories: Vec<Vec<usize>>,
    /// `color_tables[r][c]` is the key of color `c` obtained by refining
    /// round `r`; the last table is the one that confirmed stability.
    pub color_tables: Vec<Vec<ColorKey<T>>>,
}

impl<T: Scalar> RefinementTrace<T> {
    /// The stable coloring, cells in canonical color order.
    pub fn stable(&self) -> &Partition {
        self.rounds.last().expect("at least one round")
    }

    /// Same color tables and the same multiset of color histories.
    pub fn matches(&self, other: &Self, tol: f64) -> bool {
        if self.rounds.len() != other.rounds.len() || self.histories.len() != other.histories.len() {
            return false;
        }
        let tables_agree = self.color_tables.iter().zip(&other.color_tables).all(|(a, b)| {
            a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.near(y, tol))
        });
        if !tables_agree {
            return false;
        }
        let mut mine = self.histories.clone();
        let mut theirs = other.histories.clone();
        mine.sort();
        theirs.sort();
        mine == theirs
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Refinement<T> {
    /// The coarsest equitable partition refining the initial coloring, cells
    /// sorted by (size, smallest vertex).
    pub partition: Partition,
    pub trace: RefinementTrace<T>,
}

/// Colors refined once; ids are ranks of the sorted keys.
fn refine_colors<T: Scalar>(
    adj: &Matrix<T>,
    colors: &[usize],
    count: usize,
    tol: f64,
) -> (Vec<usize>, Vec<ColorKey<T>>) {
    let n = colors.len();
    let current = Partition::from_cells(
        n,
        (0..count)
            .map(|c| (0..n).filter(|&v| colors[v] == c).collect())
            .collect(),
    )
    .expect("colors form a partition");
    let sums = cell_sums(adj, &current);
    let classes: Vec<Vec<usize>> = (0..count)
        .map(|j| {
            let column: Vec<T> = (0..n).map(|v| sums[(v, j)].clone()).collect();
            classify(&column, tol)
        })
        .collect();
    let signature = |v: usize| -> (usize, Vec<usize>) {
        (colors[v], classes.iter().map(|c| c[v]).collect())
    };
    let mut distinct: Vec<((usize, Vec<usize>), usize)> = (0..n).map(|v| (signature(v), v)).collect();
    distinct.sort();
    distinct.dedup_by(|a, b| a.0 == b.0);
    let new_colors: Vec<usize> = (0..n)
        .map(|v| {
            let sig = signature(v);
            distinct
                .binary_search_by(|probe| probe.0.cmp(&sig))
                .expect("signature present")
        })
        .collect();
    let table = distinct
        .iter()
        .map(|((parent, _), rep)| ColorKey {
            parent: *parent,
            sums: (0..count).map(|j| sums[(*rep, j)].clone()).collect(),
        })
        .collect();
    (new_colors, table)
}

fn partition_of_colors(colors: &[usize], count: usize) -> Partition {
    let n = colors.len();
    Partition::from_cells(
        n,
        (0..count)
            .map(|c| (0..n).filter(|&v| colors[v] == c).collect())
            .collect(),
    )
    .expect("colors form a partition")
}

/// Coarsest equitable partition refining `initial` (or the one-cell
/// partition), by iterated splitting on weight sums into the current cells.
pub fn coarsest_equitable<T: Scalar>(
    adj: &Matrix<T>,
    initial: Option<&Partition>,
    tol: f64,
) -> Result<Refinement<T>> {
    let n = adj.rows();
    if !adj.is_square() || n == 0 {
        return Err(Error::DimensionMismatch("refinement needs a square matrix".into()));
    }
    let (mut colors, mut count) = match initial {
        Some(p) if p.n() != n => {
            return Err(Error::GroundSetMismatch {
                left: p.n(),
                right: n,
            })
        }
        Some(p) => (p.assignment().to_vec(), p.len()),
        None => (vec![0; n], 1),
    };
    let mut rounds = vec![partition_of_colors(&colors, count)];
    let mut histories: Vec<Vec<usize>> = colors.iter().map(|&c| vec![c]).collect();
    let mut color_tables = Vec::new();
    loop {
        let (next, table) = refine_colors(adj, &colors, count, tol);
        let next_count = table.len();
        color_tables.push(table);
        if next_count == count {
            break;
        }
        colors = next;
        count = next_count;
        rounds.push(partition_of_colors(&colors, count));
        for (h, &c) in histories.iter_mut().zip(&colors) {
            h.push(c);
        }
    }
    let partition = rounds.last().expect("nonempty").normalized();
    Ok(Refinement {
        partition,
        trace: RefinementTrace {
            rounds,
            histories,
            color_tables,
        },
    })
}

/// One splitting step: each cell is split by the vector of weight sums into
/// the current cells. Subcells keep the order of their parent cells.
pub fn refine_round<T: Scalar>(adj: &Matrix<T>, pi: &Partition, tol: f64) -> Partition {
    let sums = cell_sums(adj, pi);
    let classes: Vec<Vec<usize>> = (0..pi.len())
        .map(|j| {
            let column: Vec<T> = (0..pi.n()).map(|v| sums[(v, j)].clone()).collect();
            classify(&column, tol)
        })
        .collect();
    let mut cells = Vec::new();
    for cell in pi.cells() {
        let mut groups: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
        for &v in cell {
            let sig: Vec<usize> = classes.iter().map(|c| c[v]).collect();
            match groups.iter_mut().find(|(s, _)| *s == sig) {
                Some((_, members)) => members.push(v),
                None => groups.push((sig, vec![v])),
            }
        }
        cells.extend(groups.into_iter().map(|(_, m)| m));
    }
    Partition::from_cells(pi.n(), cells).expect("split of a partition")
}

/// Weights used by the enumerator: exact integers after clearing
/// denominators, or binary64 with a tolerance.
#[derive(Clone, Copy)]
enum Num {
    Int(i128),
    Real(f64),
}

impl Num {
    fn add(self, other: Num) -> Num {
        match (self, other) {
            (Num::Int(a), Num::Int(b)) => Num::Int(a + b),
            (Num::Real(a), Num::Real(b)) => Num::Real(a + b),
            _ => unreachable!("mixed backends"),
        }
    }

    fn near(self, other: Num, tol: f64) -> bool {
        match (self, other) {
            (Num::Int(a), Num::Int(b)) => a == b,
            (Num::Real(a), Num::Real(b)) => (a - b).abs() <= tol,
            _ => unreachable!("mixed backends"),
        }
    }
}

fn enumeration_weights<T: Scalar>(adj: &Matrix<T>) -> Result<Vec<Num>> {
    let n = adj.rows();
    if !T::EXACT {
        return Ok(adj.entries().map(|x| Num::Real(x.to_f64())).collect());
    }
    let values: Vec<_> = adj.entries().map(|x| x.to_rational().expect("exact")).collect();
    let lcm = values
        .iter()
        .fold(num_bigint::BigInt::from(1), |l, r| l.lcm(r.denom()));
    let too_large = || Error::InvalidArgument("weights too large for exact enumeration".into());
    let bound = i128::MAX / (2 * n.max(1) as i128);
    values
        .iter()
        .map(|r| {
            let scaled = (r.numer() * &lcm) / r.denom();
            let v = scaled.to_i128().ok_or_else(too_large)?;
            if v.abs() > bound {
                return Err(too_large());
            }
            Ok(Num::Int(v))
        })
        .collect()
}

struct Enumerator<'a> {
    n: usize,
    w: &'a [Num],
    totals: Vec<Num>,
    tol: f64,
    out: Vec<Vec<u64>>,
}

impl Enumerator<'_> {
    fn sum_into(&self, v: usize, set: u64) -> Num {
        let zero = match self.w[0] {
            Num::Int(_) => Num::Int(0),
            Num::Real(_) => Num::Real(0.0),
        };
        let mut acc = zero;
        let mut bits = set;
        while bits != 0 {
            let u = bits.trailing_zeros() as usize;
            acc = acc.add(self.w[v * self.n + u]);
            bits &= bits - 1;
        }
        acc
    }

    /// Rows of `from` all send the same weight into `to`.
    fn constant(&self, from: u64, to: u64) -> bool {
        let first = from.trailing_zeros() as usize;
        let reference = self.sum_into(first, to);
        let mut bits = from & (from - 1);
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            if !self.sum_into(v, to).near(reference, self.tol) {
                return false;
            }
            bits &= bits - 1;
        }
        true
    }

    fn search(&mut self, cells: &mut Vec<u64>, rest: u64) {
        if rest == 0 {
            self.out.push(cells.clone());
            return;
        }
        let v = rest.trailing_zeros() as usize;
        let mut candidates = 0u64;
        let mut bits = rest & !(1u64 << v);
        while bits != 0 {
            let u = bits.trailing_zeros() as usize;
            if self.totals[u].near(self.totals[v], self.tol) {
                candidates |= 1 << u;
            }
            bits &= bits - 1;
        }
        // All submasks of the candidate set, largest first.
        let mut sub = candidates;
        loop {
            let cell = sub | (1u64 << v);
            let remaining = rest & !cell;
            if self.admissible(cells, cell, remaining) {
                cells.push(cell);
                self.search(cells, remaining);
                cells.pop();
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & candidates;
        }
    }

    /// Checks the new cell against itself, every completed cell, and the
    /// union of the vertices still unassigned.
    fn admissible(&self, done: &[u64], cell: u64, remaining: u64) -> bool {
        if !self.constant(cell, cell) {
            return false;
        }
        if remaining != 0 && !self.constant(cell, remaining) {
            return false;
        }
        done.iter()
            .all(|&d| self.constant(cell, d) && self.constant(d, cell))
    }
}

/// Every equitable partition of the matrix, coarsest (fewest cells) first.
///
/// Exhaustive over set partitions, built one cell at a time; a branch is cut
/// as soon as the completed cells violate equitability among themselves or
/// against the set of unassigned vertices.
pub fn enumerate_equitable<T: Scalar>(
    adj: &Matrix<T>,
    max_n: usize,
    tol: f64,
) -> Result<Vec<Partition>> {
    let n = adj.rows();
    if !adj.is_square() || n == 0 {
        return Err(Error::DimensionMismatch("enumeration needs a square matrix".into()));
    }
    if n > max_n || n > 63 {
        return Err(Error::CapExceeded { n, cap: max_n.min(63) });
    }
    let w = enumeration_weights(adj)?;
    let full = (1u64 << n) - 1;
    let mut e = Enumerator {
        n,
        w: &w,
        totals: Vec::new(),
        tol,
        out: Vec::new(),
    };
    e.totals = (0..n).map(|v| e.sum_into(v, full)).collect();
    e.search(&mut Vec::new(), full);
    let mut partitions: Vec<Partition> = e
        .out
        .into_iter()
        .map(|masks| {
            let cells = masks
                .into_iter()
                .map(|m| (0..n).filter(|&v| m >> v & 1 == 1).collect())
                .collect();
            Partition::from_cells(n, cells).expect("search yields partitions")
        })
        .collect();
    partitions.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cells().cmp(b.cells())));
    Ok(partitions)
}
