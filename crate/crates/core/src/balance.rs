//! Diagonal scaling of nonnegative matrices: total support, Sinkhorn,
//! symmetric Sinkhorn and the alternating scheme that makes both Gram
//! products of `N = D M E` doubly stochastic.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::symquot::support_components;

pub const DEFAULT_BALANCE_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_ITER: usize = 10_000;
/// Rounds over which the alternating scheme must make relative progress.
pub const STAGNATION_WINDOW: usize = 100;
pub const STAGNATION_RATIO: f64 = 1e-14;

const LOG_SWITCH: f64 = 1e150;

/// Left and right positive diagonals, as vectors.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingPair {
    pub d: Vec<f64>,
    pub e: Vec<f64>,
    pub iterations: usize,
    pub residual: f64,
}

impl ScalingPair {
    /// `diag(d) m diag(e)`.
    pub fn apply(&self, m: &Matrix<f64>) -> Matrix<f64> {
        m.scaled(&self.d, &self.e)
    }
}

/// A single diagonal `d` making `diag(d) M diag(d)` doubly stochastic.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymmetricScaling {
    pub d: Vec<f64>,
    pub iterations: usize,
    pub residual: f64,
}

fn check_nonnegative(m: &Matrix<f64>) -> Result<()> {
    if m.entries().any(|x| !x.is_finite()) {
        return Err(Error::NonFiniteWeight);
    }
    if !m.nonnegative(0.0) {
        return Err(Error::InvalidArgument("matrix has negative entries".into()));
    }
    Ok(())
}

/// Augmenting-path bipartite matching on the support, with row `skip_row`
/// and column `skip_col` removed. Returns whether every remaining row is
/// matched.
fn perfect_matching_without(support: &[Vec<usize>], n: usize, skip_row: usize, skip_col: usize) -> bool {
    fn augment(
        r: usize,
        support: &[Vec<usize>],
        skip_col: usize,
        seen: &mut [bool],
        owner: &mut [usize],
    ) -> bool {
        for &c in &support[r] {
            if c == skip_col || seen[c] {
                continue;
            }
            seen[c] = true;
            if owner[c] == usize::MAX || augment(owner[c], support, skip_col, seen, owner) {
                owner[c] = r;
                return true;
            }
        }
        false
    }
    let mut owner = vec![usize::MAX; n];
    for r in (0..n).filter(|&r| r != skip_row) {
        let mut seen = vec![false; n];
        if !augment(r, support, skip_col, &mut seen, &mut owner) {
            return false;
        }
    }
    true
}

/// Every nonzero entry lies on a positive diagonal: for each nonzero
/// `(a, b)`, the support minus row `a` and column `b` has a perfect matching.
pub fn has_total_support(m: &Matrix<f64>) -> Result<bool> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch("total support needs a square matrix".into()));
    }
    check_nonnegative(m)?;
    let n = m.rows();
    let support: Vec<Vec<usize>> = (0..n).map(|i| (0..n).filter(|&j| m[(i, j)] > 0.0).collect()).collect();
    if support.iter().any(Vec::is_empty) {
        return Ok(false);
    }
    for (a, row) in support.iter().enumerate() {
        for &b in row {
            if !perfect_matching_without(&support, n, a, b) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Entries at least `-tol` and all row and column sums within `tol` of one.
pub fn is_doubly_stochastic(m: &Matrix<f64>, tol: f64) -> bool {
    m.nonnegative(tol)
        && m.row_sums().iter().chain(m.col_sums().iter()).all(|s| (s - 1.0).abs() <= tol)
}

fn max_deviation(sums: &[f64]) -> f64 {
    sums.iter().fold(0.0f64, |acc, s| acc.max((s - 1.0).abs()))
}

/// Alternating row and column normalization until the row sums of `D M E`
/// are within `tol` of one (column sums are exact after each sweep).
pub fn sinkhorn(m: &Matrix<f64>, tol: f64, max_iter: usize) -> Result<ScalingPair> {
    if !has_total_support(m)? {
        return Err(Error::NoTotalSupport);
    }
    let n = m.rows();
    let mt = m.transpose();
    let mut d = vec![1.0; n];
    let mut e = vec![1.0; n];
    let mut residual = f64::INFINITY;
    for it in 1..=max_iter {
        let me = m.mat_vec(&e);
        for (di, s) in d.iter_mut().zip(&me) {
            *di = 1.0 / s;
        }
        let mtd = mt.mat_vec(&d);
        for (ej, s) in e.iter_mut().zip(&mtd) {
            *ej = 1.0 / s;
        }
        let rows: Vec<f64> = m.mat_vec(&e).iter().zip(&d).map(|(s, di)| s * di).collect();
        residual = max_deviation(&rows);
        if residual < tol {
            return Ok(ScalingPair {
                d,
                e,
                iterations: it,
                residual,
            });
        }
    }
    Err(Error::NoConvergence {
        iterations: max_iter,
        residual,
    })
}

fn log_sum_exp(values: impl Iterator<Item = f64>) -> f64 {
    let v: Vec<f64> = values.collect();
    let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + v.iter().map(|x| (x - max).exp()).sum::<f64>().ln()
}

/// Symmetric Sinkhorn without the up-front support check. The update
/// `d <- sqrt(d / (M d))` is the geometric mean of `d` and the row
/// normalization `1 / (M d)`; it continues in log scale if an entry of `d`
/// leaves `[1e-150, 1e150]`.
pub(crate) fn symmetric_sinkhorn_unchecked(
    m: &Matrix<f64>,
    init: Option<&[f64]>,
    tol: f64,
    max_iter: usize,
) -> Result<SymmetricScaling> {
    let n = m.rows();
    let mut d: Vec<f64> = init.map_or_else(|| vec![1.0; n], <[f64]>::to_vec);
    let residual_of = |d: &[f64]| {
        let md = m.mat_vec(d);
        max_deviation(&md.iter().zip(d).map(|(s, x)| s * x).collect::<Vec<_>>())
    };
    let mut residual = residual_of(&d);
    if residual < tol {
        return Ok(SymmetricScaling {
            d,
            iterations: 0,
            residual,
        });
    }
    let mut it = 0;
    while it < max_iter {
        it += 1;
        let md = m.mat_vec(&d);
        for (x, s) in d.iter_mut().zip(&md) {
            *x = (*x / s).sqrt();
        }
        if d.iter().any(|x| !(1.0 / LOG_SWITCH..=LOG_SWITCH).contains(x)) {
            return symmetric_sinkhorn_log(m, &d, tol, max_iter, it);
        }
        residual = residual_of(&d);
        if residual < tol {
            return Ok(SymmetricScaling {
                d,
                iterations: it,
                residual,
            });
        }
    }
    Err(Error::NoConvergence {
        iterations: max_iter,
        residual,
    })
}

fn symmetric_sinkhorn_log(m: &Matrix<f64>, d: &[f64], tol: f64, max_iter: usize, start: usize) -> Result<SymmetricScaling> {
    let n = m.rows();
    let log_m = m.map(|&x| if x > 0.0 { x.ln() } else { f64::NEG_INFINITY });
    let mut x: Vec<f64> = d.iter().map(|v| v.ln()).collect();
    let log_row = |x: &[f64]| -> Vec<f64> {
        (0..n)
            .map(|i| log_sum_exp((0..n).map(|j| log_m[(i, j)] + x[j])))
            .collect()
    };
    let mut residual = f64::INFINITY;
    for it in start + 1..=max_iter {
        let lr = log_row(&x);
        for (xi, l) in x.iter_mut().zip(&lr) {
            *xi = 0.5 * (*xi - l);
        }
        let lr = log_row(&x);
        residual = x
            .iter()
            .zip(&lr)
            .fold(0.0f64, |acc, (xi, l)| acc.max(((xi + l).exp() - 1.0).abs()));
        if residual < tol {
            return Ok(SymmetricScaling {
                d: x.iter().map(|v| v.exp()).collect(),
                iterations: it,
                residual,
            });
        }
    }
    Err(Error::NoConvergence {
        iterations: max_iter,
        residual,
    })
}

/// Positive `d` with `diag(d) M diag(d)` doubly stochastic.
pub fn symmetric_sinkhorn(m: &Matrix<f64>, tol: f64, max_iter: usize) -> Result<SymmetricScaling> {
    if !m.is_symmetric(0.0) {
        return Err(Error::InvalidArgument("symmetric Sinkhorn needs a symmetric matrix".into()));
    }
    if !has_total_support(m)? {
        return Err(Error::NoTotalSupport);
    }
    symmetric_sinkhorn_unchecked(m, None, tol, max_iter)
}

/// A connected component of the support graph of a rectangular matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Block {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    /// Every (row, column) pair inside the block is a nonzero.
    pub complete: bool,
}

/// Components of the bipartite support graph `[[0, M], [M^T, 0]]`.
pub fn block_structure(m: &Matrix<f64>) -> Vec<Block> {
    support_components(m, 0.0)
        .into_iter()
        .map(|(rows, cols)| {
            let complete = rows.iter().all(|&i| cols.iter().all(|&j| m[(i, j)] > 0.0));
            Block { rows, cols, complete }
        })
        .collect()
}

fn symmetrize_in_place(m: &mut Matrix<f64>) {
    for i in 0..m.rows() {
        for j in 0..i {
            let avg = 0.5 * (m[(i, j)] + m[(j, i)]);
            m[(i, j)] = avg;
            m[(j, i)] = avg;
        }
    }
}

/// Gram residual of `N = diag(d) M diag(e)`: the largest deviation from one
/// of a row sum of `N N^T` or `N^T N` (both are symmetric).
pub fn gram_residual(n: &Matrix<f64>) -> f64 {
    let nt = n.transpose();
    max_deviation(&n.mul(&nt).row_sums()).max(max_deviation(&nt.mul(n).row_sums()))
}

/// Alternating balance. Starting from `E = I`, `D` is the symmetric Sinkhorn
/// scaling of `M E^2 M^T` and then `E` that of `M^T D^2 M`, until both Gram
/// products of `N = D M E` are doubly stochastic within `tol`.
///
/// `M` must be nonnegative without null rows or columns, and each component
/// of its support graph must be complete bipartite.
pub fn alternating_balance(m: &Matrix<f64>, tol: f64, max_iter: usize) -> Result<ScalingPair> {
    check_nonnegative(m)?;
    let blocks = block_structure(m);
    if let Some(b) = blocks.iter().find(|b| b.rows.is_empty() || b.cols.is_empty()) {
        let what = if b.rows.is_empty() {
            format!("null column {}", b.cols[0])
        } else {
            format!("null row {}", b.rows[0])
        };
        return Err(Error::Structural(what));
    }
    if let Some(b) = blocks.iter().find(|b| !b.complete) {
        return Err(Error::Structural(format!(
            "support component with rows {:?} is not complete bipartite",
            b.rows
        )));
    }
    let inner_tol = (tol * 1e-2).max(1e-15);
    let inner_iter = max_iter.max(DEFAULT_MAX_ITER);
    let mt = m.transpose();
    let mut d = vec![1.0; m.rows()];
    let mut e = vec![1.0; m.cols()];
    let mut history: Vec<f64> = Vec::new();
    for it in 1..=max_iter {
        let e2: Vec<f64> = e.iter().map(|x| x * x).collect();
        let mut left = m.scaled(&vec![1.0; m.rows()], &e2).mul(&mt);
        symmetrize_in_place(&mut left);
        d = symmetric_sinkhorn_unchecked(&left, Some(&d), inner_tol, inner_iter)?.d;

        let d2: Vec<f64> = d.iter().map(|x| x * x).collect();
        let mut right = mt.scaled(&vec![1.0; m.cols()], &d2).mul(m);
        symmetrize_in_place(&mut right);
        e = symmetric_sinkhorn_unchecked(&right, Some(&e), inner_tol, inner_iter)?.d;

        let residual = gram_residual(&m.scaled(&d, &e));
        if residual < tol {
            return Ok(ScalingPair {
                d,
                e,
                iterations: it,
                residual,
            });
        }
        history.push(residual);
        if history.len() > STAGNATION_WINDOW {
            let old = history[history.len() - 1 - STAGNATION_WINDOW];
            if old - residual <= STAGNATION_RATIO * old {
                return Err(Error::Stagnation {
                    iterations: it,
                    residual,
                });
            }
        }
    }
    Err(Error::NoConvergence {
        iterations: max_iter,
        residual: history.last().copied().unwrap_or(f64::INFINITY),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[f64]]) -> Matrix<f64> {
        Matrix::from_rows(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn total_support_examples() {
        assert!(has_total_support(&Matrix::identity(3)).unwrap());
        assert!(!has_total_support(&m(&[&[1.0, 1.0], &[0.0, 1.0]])).unwrap());
        assert!(has_total_support(&m(&[&[1.0, 1.0], &[1.0, 1.0]])).unwrap());
        assert!(has_total_support(&m(&[&[1.0, 1.0, 1.0]])).is_err());
    }

    #[test]
    fn doubly_stochastic_examples() {
        assert!(is_doubly_stochastic(&Matrix::from_fn(3, 3, |_, _| 1.0 / 3.0), 1e-12));
        assert!(is_doubly_stochastic(&Matrix::identity(4), 0.0));
        assert!(!is_doubly_stochastic(&m(&[&[0.5, 0.6], &[0.5, 0.4]]), 1e-9));
    }

    #[test]
    fn sinkhorn_two_by_two_closed_form() {
        let a = m(&[&[1.0, 2.0], &[3.0, 4.0]]);
        let s = sinkhorn(&a, 1e-13, 10_000).unwrap();
        let n = s.apply(&a);
        let z = 2.0 + 6f64.sqrt();
        let expected = m(&[&[2.0 / z, 6f64.sqrt() / z], &[6f64.sqrt() / z, 2.0 / z]]);
        assert!(n.max_abs_diff(&expected) < 1e-12);
    }

    #[test]
    fn sinkhorn_fixed_points_and_failures() {
        let p = m(&[&[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0], &[1.0, 0.0, 0.0]]);
        let s = sinkhorn(&p, 1e-12, 100).unwrap();
        assert_eq!(s.d, vec![1.0; 3]);
        assert_eq!(s.e, vec![1.0; 3]);
        assert_eq!(sinkhorn(&m(&[&[1.0, 1.0], &[0.0, 1.0]]), 1e-12, 100).unwrap_err(), Error::NoTotalSupport);
    }

    #[test]
    fn symmetric_examples() {
        let s = symmetric_sinkhorn(&m(&[&[0.0, 1.0], &[1.0, 0.0]]), 1e-14, 100).unwrap();
        assert_eq!(s.d, vec![1.0, 1.0]);
        let s = symmetric_sinkhorn(&m(&[&[1.0, 1.0], &[1.0, 1.0]]), 1e-14, 100).unwrap();
        assert!(s.d.iter().all(|x| (x - 0.5f64.sqrt()).abs() < 1e-14));
        let s = symmetric_sinkhorn(&m(&[&[1.0, 2.0], &[2.0, 1.0]]), 1e-14, 100).unwrap();
        assert!(s.d.iter().all(|x| (x - 1.0 / 3f64.sqrt()).abs() < 1e-14));
        assert!(symmetric_sinkhorn(&m(&[&[1.0, 2.0], &[3.0, 1.0]]), 1e-14, 100).is_err());
    }

    #[test]
    fn log_scale_fallback() {
        let a = m(&[&[1e-306, 1.0], &[1.0, 1e306]]);
        let s = symmetric_sinkhorn(&a, 1e-12, 1000).unwrap();
        assert!(is_doubly_stochastic(&a.scaled(&s.d, &s.d), 1e-10));
    }

    #[test]
    fn alternating_examples() {
        let j = m(&[&[1.0, 1.0], &[1.0, 1.0]]);
        let s = alternating_balance(&j, 1e-12, 1000).unwrap();
        assert!(s.apply(&j).entries().all(|x| (x - 0.5).abs() < 1e-12));

        let two = m(&[&[1.0, 1.0, 0.0, 0.0], &[0.0, 0.0, 1.0, 1.0]]);
        let s = alternating_balance(&two, 1e-12, 1000).unwrap();
        let n = s.apply(&two);
        let r = 0.5f64.sqrt();
        assert!(n.max_abs_diff(&two.scale(&r)) < 1e-12);

        let id = Matrix::<f64>::identity(3);
        let s = alternating_balance(&id, 1e-12, 1000).unwrap();
        assert!(s.apply(&id).max_abs_diff(&id) < 1e-12);
    }

    #[test]
    fn alternating_rejects_bad_structure() {
        let err = alternating_balance(&m(&[&[1.0, 1.0], &[1.0, 0.0]]), 1e-10, 100).unwrap_err();
        assert!(matches!(err, Error::Structural(_)));
        let err = alternating_balance(&m(&[&[1.0, 0.0], &[0.0, 0.0]]), 1e-10, 100).unwrap_err();
        assert!(matches!(err, Error::Structural(s) if s.contains("null")));
    }

    #[test]
    fn blocks() {
        let b = block_structure(&m(&[&[1.0, 1.0], &[1.0, 1.0]]));
        assert_eq!(b.len(), 1);
        assert!(b[0].complete);
        let b = block_structure(&Matrix::identity(2));
        assert_eq!(b.len(), 2);
        assert!(b.iter().all(|x| x.complete && x.rows.len() == 1 && x.cols.len() == 1));
        let b = block_structure(&m(&[&[1.0, 1.0], &[1.0, 0.0]]));
        assert_eq!(b.len(), 1);
        assert!(!b[0].complete);
    }
}
