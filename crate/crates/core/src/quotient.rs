//! Combinatorial and symmetrized quotient graphs, and the correspondence
//! between equitable partitions above `sigma` and equitable partitions of
//! the quotient by `sigma`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::numeric::{Rational, Scalar};
use crate::partition::Partition;
use crate::refine::{cell_sums, check_equitable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum QuotientKind {
    /// `(P^T P)^-1 P^T A P`; possibly asymmetric.
    Combinatorial,
    /// `P~^T A P~` with unit-norm cell columns; symmetric.
    Symmetrized,
}

/// Quotient of a graph by a partition. Cell `i` of the partition is vertex
/// `i` of the quotient.
#[derive(Debug, Clone, PartialEq)]
pub struct QuotientGraph<T> {
    pub mat: Matrix<T>,
    pub kind: QuotientKind,
    pub cell_sizes: Vec<usize>,
}

impl<T: Scalar> QuotientGraph<T> {
    pub fn k(&self) -> usize {
        self.mat.rows()
    }
}

/// Combinatorial quotient: entry `(i, j)` is the weight any vertex of `C_i`
/// sends into `C_j`. Satisfies `A P = P B` exactly.
pub fn quotient<T: Scalar>(adj: &Matrix<T>, pi: &Partition, tol: f64) -> Result<QuotientGraph<T>> {
    check_equitable(adj, pi, tol)?;
    let sums = cell_sums(adj, pi);
    let mat = Matrix::from_fn(pi.len(), pi.len(), |i, j| sums[(pi.cell(i)[0], j)].clone());
    Ok(QuotientGraph {
        mat,
        kind: QuotientKind::Combinatorial,
        cell_sizes: pi.cell_sizes(),
    })
}

/// Total weight between two cells, `1_{C_i}^T A 1_{C_j}`, for every pair.
pub fn cell_weights<T: Scalar>(adj: &Matrix<T>, pi: &Partition) -> Matrix<T> {
    let sums = cell_sums(adj, pi);
    let mut e = Matrix::<T>::zeros(pi.len(), pi.len());
    for v in 0..pi.n() {
        let i = pi.cell_of(v);
        for j in 0..pi.len() {
            e[(i, j)] = e[(i, j)].clone() + sums[(v, j)].clone();
        }
    }
    e
}

/// Symmetrized quotient `P~^T A P~`: entry `e(C_i, C_j) / sqrt(|C_i| |C_j|)`.
pub fn symmetrized_quotient<T: Scalar>(
    adj: &Matrix<T>,
    pi: &Partition,
    tol: f64,
) -> Result<QuotientGraph<f64>> {
    check_equitable(adj, pi, tol)?;
    let e = cell_weights(adj, pi);
    let sizes: Vec<f64> = pi.cells().iter().map(|c| c.len() as f64).collect();
    let mut mat = Matrix::from_fn(pi.len(), pi.len(), |i, j| {
        e[(i, j)].to_f64() / (sizes[i] * sizes[j]).sqrt()
    });
    // Exact symmetry, so downstream symmetric solvers see a symmetric input.
    for i in 0..pi.len() {
        for j in 0..i {
            let avg = 0.5 * (mat[(i, j)] + mat[(j, i)]);
            mat[(i, j)] = avg;
            mat[(j, i)] = avg;
        }
    }
    Ok(QuotientGraph {
        mat,
        kind: QuotientKind::Symmetrized,
        cell_sizes: pi.cell_sizes(),
    })
}

/// Symmetrizes a combinatorial quotient by the diagonal similarity
/// `D^{1/2} B D^{-1/2}`, `D = diag(cell sizes)`.
pub fn symmetrize<T: Scalar>(b: &QuotientGraph<T>) -> QuotientGraph<f64> {
    let s: Vec<f64> = b.cell_sizes.iter().map(|&c| (c as f64).sqrt()).collect();
    QuotientGraph {
        mat: Matrix::from_fn(b.k(), b.k(), |i, j| b.mat[(i, j)].to_f64() * s[i] / s[j]),
        kind: QuotientKind::Symmetrized,
        cell_sizes: b.cell_sizes.clone(),
    }
}

/// `max |A X - X B|`.
pub fn intertwining_residual(a: &Matrix<f64>, x: &Matrix<f64>, b: &Matrix<f64>) -> f64 {
    a.mul(x).max_abs_diff(&x.mul(b))
}

/// Whether the column space of `p` is invariant under `a`, by comparing
/// `rank [P | AP]` with `rank P` in exact arithmetic.
pub fn spans_invariant_subspace(a: &Matrix<Rational>, p: &Matrix<Rational>) -> bool {
    p.rank() == p.hstack(&a.mul(p)).rank()
}

/// Equitability of a partition of a (possibly directed, weighted) quotient
/// matrix. Exact matrices use the invariant-subspace rank test; binary64
/// falls back to row-sum constancy.
pub fn is_equitable_for_quotient<T: Scalar>(b: &Matrix<T>, s: &Partition, tol: f64) -> bool {
    if T::EXACT {
        let exact = b.map(|x| x.to_rational().expect("exact backend"));
        spans_invariant_subspace(&exact, &s.characteristic_matrix())
    } else {
        crate::refine::is_equitable(b, s, tol)
    }
}

/// The partition `pi` induces on the cells of `sigma`: one cell per cell of
/// `pi`, listing the indices of the `sigma` cells inside it.
pub fn push_partition<T: Scalar>(
    adj: &Matrix<T>,
    sigma: &Partition,
    pi: &Partition,
    tol: f64,
) -> Result<Partition> {
    check_equitable(adj, sigma, tol)?;
    check_equitable(adj, pi, tol)?;
    if let Some(cell) = sigma.first_straddling_cell(pi) {
        return Err(Error::NotRefinement { cell });
    }
    let mut groups = vec![Vec::new(); pi.len()];
    for (s, cell) in sigma.cells().iter().enumerate() {
        groups[pi.cell_of(cell[0])].push(s);
    }
    let pushed = Partition::from_cells(sigma.len(), groups)?;
    let b = quotient(adj, sigma, tol)?;
    debug_assert!(is_equitable_for_quotient(&b.mat, &pushed, tol));
    if !is_equitable_for_quotient(&b.mat, &pushed, tol) {
        return Err(Error::InvalidArgument("pushed partition is not equitable".into()));
    }
    Ok(pushed)
}

/// Inverse of [`push_partition`]: unions of `sigma` cells grouped by `s`.
pub fn lift_partition<T: Scalar>(
    adj: &Matrix<T>,
    sigma: &Partition,
    s: &Partition,
    tol: f64,
) -> Result<Partition> {
    let b = quotient(adj, sigma, tol)?;
    if s.n() != sigma.len() {
        return Err(Error::GroundSetMismatch {
            left: s.n(),
            right: sigma.len(),
        });
    }
    if !is_equitable_for_quotient(&b.mat, s, tol) {
        // Report a concrete violation through the row-sum test.
        check_equitable(&b.mat, s, tol)?;
        return Err(Error::InvalidArgument("partition of the quotient is not equitable".into()));
    }
    let cells = s
        .cells()
        .iter()
        .map(|group| {
            let mut cell: Vec<usize> = group.iter().flat_map(|&c| sigma.cell(c).iter().copied()).collect();
            cell.sort_unstable();
            cell
        })
        .collect();
    let lifted = Partition::from_cells(sigma.n(), cells)?;
    check_equitable(adj, &lifted, tol)?;
    Ok(lifted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families::*;
    use crate::numeric::rat;

    fn p(n: usize, cells: &[&[usize]]) -> Partition {
        Partition::from_cells(n, cells.iter().map(|c| c.to_vec()).collect()).unwrap()
    }

    fn rm(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| rat(x, 1)).collect()).collect()).unwrap()
    }

    #[test]
    fn combinatorial_examples() {
        let k3 = complete::<Rational>(3);
        let q = quotient(k3.adj(), &p(3, &[&[0], &[1, 2]]), 0.0).unwrap();
        assert_eq!(q.mat, rm(&[&[0, 2], &[1, 1]]));
        assert_eq!(q.cell_sizes, vec![1, 2]);

        let p3 = path::<Rational>(3);
        let q = quotient(p3.adj(), &p(3, &[&[0, 2], &[1]]), 0.0).unwrap();
        assert_eq!(q.mat, rm(&[&[0, 1], &[2, 0]]));

        let pet = petersen::<Rational>();
        let q = quotient(pet.adj(), &Partition::one_cell(10), 0.0).unwrap();
        assert_eq!(q.mat, rm(&[&[3]]));
    }

    #[test]
    fn non_equitable_is_reported() {
        let p3 = path::<Rational>(3);
        let err = quotient(p3.adj(), &p(3, &[&[0, 1], &[2]]), 0.0).unwrap_err();
        assert!(matches!(err, Error::NotEquitable(v) if v.u == 0 && v.v == 1));
        assert!(symmetrized_quotient(p3.adj(), &Partition::one_cell(3), 0.0).is_err());
    }

    #[test]
    fn symmetrized_examples() {
        let s = 2f64.sqrt();
        let k3 = complete::<Rational>(3);
        let q = symmetrized_quotient(k3.adj(), &p(3, &[&[0], &[1, 2]]), 0.0).unwrap();
        let expected = Matrix::from_rows(vec![vec![0.0, s], vec![s, 1.0]]).unwrap();
        assert!(q.mat.max_abs_diff(&expected) < 1e-12);

        let two = Matrix::from_rows(vec![vec![0.0, 2.0], vec![2.0, 0.0]]).unwrap();
        let star = star::<Rational>(4);
        let q = symmetrized_quotient(star.adj(), &p(5, &[&[0], &[1, 2, 3, 4]]), 0.0).unwrap();
        assert!(q.mat.max_abs_diff(&two) < 1e-12);
        let k22 = complete_bipartite::<Rational>(2, 2);
        let q = symmetrized_quotient(k22.adj(), &p(4, &[&[0, 1], &[2, 3]]), 0.0).unwrap();
        assert!(q.mat.max_abs_diff(&two) < 1e-12);
    }

    #[test]
    fn symmetrize_matches_direct_route() {
        let g = cycle::<Rational>(6);
        let pi = p(6, &[&[0], &[1, 5], &[2, 4], &[3]]);
        let direct = symmetrized_quotient(g.adj(), &pi, 0.0).unwrap();
        let via = symmetrize(&quotient(g.adj(), &pi, 0.0).unwrap());
        assert!(direct.mat.max_abs_diff(&via.mat) < 1e-12);
        let pt = pi.normalized_characteristic_matrix();
        assert!(intertwining_residual(&g.adj().to_f64(), &pt, &direct.mat) < 1e-12);
    }

    #[test]
    fn push_and_lift() {
        let c6 = cycle::<Rational>(6);
        let sigma = p(6, &[&[0, 3], &[1, 4], &[2, 5]]);
        let halves = p(6, &[&[0, 2, 4], &[1, 3, 5]]);
        assert_eq!(
            push_partition(c6.adj(), &sigma, &halves, 0.0).unwrap_err(),
            Error::NotRefinement { cell: 0 }
        );
        let pushed = push_partition(c6.adj(), &sigma, &sigma, 0.0).unwrap();
        assert!(pushed.same_as(&Partition::singletons(3)));
        let top = push_partition(c6.adj(), &sigma, &Partition::one_cell(6), 0.0).unwrap();
        assert!(top.same_as(&Partition::one_cell(3)));

        // C6 / sigma is K3 with loops; {cell0}, {cell1, cell2} is equitable there.
        let s = p(3, &[&[0], &[1, 2]]);
        let lifted = lift_partition(c6.adj(), &sigma, &s, 0.0).unwrap();
        assert!(lifted.same_as(&p(6, &[&[0, 3], &[1, 2, 4, 5]])));
        assert!(push_partition(c6.adj(), &sigma, &lifted, 0.0).unwrap().same_as(&s));
        assert!(lift_partition(c6.adj(), &sigma, &Partition::singletons(3), 0.0)
            .unwrap()
            .same_as(&sigma));
        assert!(lift_partition(c6.adj(), &sigma, &Partition::one_cell(3), 0.0)
            .unwrap()
            .same_as(&Partition::one_cell(6)));
    }

    #[test]
    fn lift_rejects_non_equitable() {
        let p3 = path::<Rational>(3);
        let sigma = Partition::singletons(3);
        let err = lift_partition(p3.adj(), &sigma, &p(3, &[&[0, 1], &[2]]), 0.0).unwrap_err();
        assert!(matches!(err, Error::NotEquitable(_)));
    }

    #[test]
    fn rank_test_agrees_with_row_sums() {
        let b = rm(&[&[0, 2, 0], &[1, 0, 1], &[0, 2, 0]]);
        for s in crate::refine::enumerate_equitable(&b, 12, 0.0).unwrap() {
            assert!(spans_invariant_subspace(&b, &s.characteristic_matrix()));
        }
        assert!(!spans_invariant_subspace(&b, &p(3, &[&[0, 1], &[2]]).characteristic_matrix()));
    }
}
