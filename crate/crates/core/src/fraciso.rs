//! Fractional isomorphism: decision by color refinement and explicit doubly
//! stochastic witnesses.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::partition::Partition;
use crate::quotient::{quotient, QuotientGraph};
use crate::refine::coarsest_equitable;
use crate::Scalar;

/// Outcome of [`fractionally_isomorphic`].
#[derive(Debug, Clone, PartialEq)]
pub struct FracIso<T> {
    pub isomorphic: bool,
    /// Stable colorings of both graphs, cells in canonical color order.
    pub g_partition: Partition,
    pub h_partition: Partition,
    /// `matching[r]` is the cell of `h_partition` matched to cell `r` of
    /// `g_partition`; present when the graphs are fractionally isomorphic.
    pub matching: Option<Vec<usize>>,
    /// The shared coarsest quotient, in the cell order of `g_partition`.
    pub quotient: Option<QuotientGraph<T>>,
}

/// Decides fractional isomorphism by comparing color refinement traces.
///
/// Graphs with different vertex counts are never fractionally isomorphic.
/// Because color ids are canonical, equal traces match stable color `r` of
/// one graph with stable color `r` of the other.
pub fn fractionally_isomorphic<T: Scalar>(g: &Matrix<T>, h: &Matrix<T>, tol: f64) -> Result<FracIso<T>> {
    let rg = coarsest_equitable(g, None, tol)?;
    let rh = coarsest_equitable(h, None, tol)?;
    let g_partition = rg.trace.stable().clone();
    let h_partition = rh.trace.stable().clone();
    let mut out = FracIso {
        isomorphic: false,
        g_partition,
        h_partition,
        matching: None,
        quotient: None,
    };
    if g.rows() != h.rows() || !rg.trace.matches(&rh.trace, tol) {
        return Ok(out);
    }
    let qg = quotient(g, &out.g_partition, tol)?;
    let qh = quotient(h, &out.h_partition, tol)?;
    if qg.cell_sizes != qh.cell_sizes || !qg.mat.approx_eq(&qh.mat, tol) {
        return Ok(out);
    }
    out.isomorphic = true;
    out.matching = Some((0..out.g_partition.len()).collect());
    out.quotient = Some(qg);
    Ok(out)
}

/// `M = P (P^T P)^-1 Q^T` from matched coarsest partitions: entry `1/|C_r|`
/// between `C_r` and its matched cell `D_r`.
pub fn fraciso_witness<T: Scalar>(g: &Matrix<T>, h: &Matrix<T>, tol: f64) -> Result<Matrix<T>> {
    let iso = fractionally_isomorphic(g, h, tol)?;
    let matching = iso.matching.ok_or(Error::NotFractionallyIsomorphic)?;
    Ok(witness_from_matching(&iso.g_partition, &iso.h_partition, &matching))
}

/// Witness for two partitions with equal cell sizes under `matching`.
pub fn witness_from_matching<T: Scalar>(pi: &Partition, sigma: &Partition, matching: &[usize]) -> Matrix<T> {
    let mut m = Matrix::<T>::zeros(pi.n(), sigma.n());
    for (r, cell) in pi.cells().iter().enumerate() {
        let value = T::one() / T::from_usize(cell.len());
        for &u in cell {
            for &v in sigma.cell(matching[r]) {
                m[(u, v)] = value.clone();
            }
        }
    }
    m
}

/// `M >= 0`, rows and columns summing to one, and `A_G M = A_H`-intertwining,
/// all exact for rationals and within `tol` for binary64.
pub fn verify_fraciso_witness<T: Scalar>(g: &Matrix<T>, h: &Matrix<T>, m: &Matrix<T>, tol: f64) -> Result<bool> {
    if m.rows() != g.rows() || m.cols() != h.rows() {
        return Err(Error::DimensionMismatch(format!(
            "witness is {}x{}, graphs have {} and {} vertices",
            m.rows(),
            m.cols(),
            g.rows(),
            h.rows()
        )));
    }
    let one = T::one();
    let stochastic = m.nonnegative(tol)
        && m.row_sums().iter().all(|s| s.near(&one, tol))
        && m.col_sums().iter().all(|s| s.near(&one, tol));
    Ok(stochastic && g.mul(m).approx_eq(&m.mul(h), tol))
}
