//! Pseudo-equitable partitions: partitions that become equitable after a
//! diagonal similarity by a positive vertex weighting, the nonnegative
//! projectors they correspond to, and common pseudo quotients read off a
//! balanced witness.

use nalgebra::SymmetricEigen;
use serde::Serialize;

use crate::balance::{alternating_balance, gram_residual, ScalingPair, DEFAULT_BALANCE_TOL, DEFAULT_MAX_ITER};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::numeric::Scalar;
use crate::partition::Partition;
use crate::quotient::{quotient, QuotientGraph, QuotientKind};
use crate::refine::check_equitable;
use crate::symquot::{support_components, NEGATIVE_CLAMP};

/// Residual target for [`perron_vector`], relative to the spectral radius.
pub const PERRON_TOL: f64 = 1e-12;
pub const MEET_TOL: f64 = 1e-12;

fn check_positive(w: &[f64], n: usize) -> Result<()> {
    if w.len() != n {
        return Err(Error::DimensionMismatch(format!("{} weights for {n} vertices", w.len())));
    }
    match w.iter().position(|&x| !(x > 0.0 && x.is_finite())) {
        Some(vertex) => Err(Error::NonPositiveWeight { vertex }),
        None => Ok(()),
    }
}

/// Rescales `w` so that its restriction to every cell has unit norm.
pub fn normalize_per_cell(w: &[f64], pi: &Partition) -> Vec<f64> {
    let norms: Vec<f64> = pi
        .cells()
        .iter()
        .map(|c| c.iter().map(|&v| w[v] * w[v]).sum::<f64>().sqrt())
        .collect();
    (0..w.len()).map(|v| w[v] / norms[pi.cell_of(v)]).collect()
}

/// `D_w^-1 A D_w`.
fn conjugated<T: Scalar>(adj: &Matrix<T>, w: &[f64]) -> Matrix<f64> {
    Matrix::from_fn(adj.rows(), adj.cols(), |u, v| adj[(u, v)].to_f64() * w[v] / w[u])
}

/// The matrix `B` with `A D_w P = D_w P B`, if the column space of `D_w P`
/// is invariant under `A`, i.e. if `pi` is equitable for `D_w^-1 A D_w`.
pub fn is_pseudo_equitable<T: Scalar>(
    adj: &Matrix<T>,
    w: &[f64],
    pi: &Partition,
    tol: f64,
) -> Result<Option<QuotientGraph<f64>>> {
    check_positive(w, adj.rows())?;
    if pi.n() != adj.rows() {
        return Err(Error::GroundSetMismatch {
            left: pi.n(),
            right: adj.rows(),
        });
    }
    match quotient(&conjugated(adj, w), pi, tol) {
        Ok(b) => Ok(Some(b)),
        Err(Error::NotEquitable(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

/// `P_w^T A P_w` with `P_w = D_w P` and `w` normalized per cell.
pub fn pseudo_symmetrized_quotient<T: Scalar>(
    adj: &Matrix<T>,
    w: &[f64],
    pi: &Partition,
    tol: f64,
) -> Result<QuotientGraph<f64>> {
    check_positive(w, adj.rows())?;
    let w = normalize_per_cell(w, pi);
    check_equitable(&conjugated(adj, &w), pi, tol)?;
    let pw = pi.weighted_characteristic_matrix(&w);
    let mut mat = pw.transpose().mul(&adj.to_f64()).mul(&pw);
    for i in 0..mat.rows() {
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

/// Whether the support graph of a square matrix is connected.
fn irreducible(m: &Matrix<f64>) -> bool {
    let n = m.rows();
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(u) = stack.pop() {
        for v in 0..n {
            if !seen[v] && (m[(u, v)] != 0.0 || m[(v, u)] != 0.0) {
                seen[v] = true;
                stack.push(v);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Unit-norm positive eigenvector for the spectral radius of a symmetric
/// nonnegative irreducible matrix, and the spectral radius.
///
/// A symmetric eigensolver supplies the starting vector, which shifted power
/// iteration with `A + c I` then polishes until `|A w - lambda w|` is below
/// `1e-12 * max(1, lambda)`.
pub fn perron_vector<T: Scalar>(adj: &Matrix<T>) -> Result<(Vec<f64>, f64)> {
    let a = adj.to_f64();
    if !a.is_square() || !a.is_symmetric(0.0) {
        return Err(Error::InvalidArgument("Perron vector needs a symmetric matrix".into()));
    }
    if !a.nonnegative(0.0) {
        return Err(Error::InvalidArgument("Perron vector needs nonnegative weights".into()));
    }
    if !irreducible(&a) {
        return Err(Error::Disconnected);
    }
    let n = a.rows();
    if n == 1 {
        return Ok((vec![1.0], a[(0, 0)]));
    }
    let eig = SymmetricEigen::new(a.to_nalgebra());
    let top = eig.eigenvalues.imax();
    let mut x: Vec<f64> = eig.eigenvectors.column(top).iter().map(|v| v.abs()).collect();
    let shift = a.max_abs().max(1.0);
    let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let mut lambda = 0.0;
    let mut residual = f64::INFINITY;
    for _ in 0..100_000 {
        let ax = a.mat_vec(&x);
        lambda = x.iter().zip(&ax).map(|(p, q)| p * q).sum::<f64>();
        residual = ax.iter().zip(&x).fold(0.0f64, |m, (p, q)| m.max((p - lambda * q).abs()));
        if residual < PERRON_TOL * lambda.max(1.0) {
            break;
        }
        let y: Vec<f64> = ax.iter().zip(&x).map(|(p, q)| p + shift * q).collect();
        let ny = norm(&y);
        x = y.into_iter().map(|v| v / ny).collect();
    }
    if residual >= PERRON_TOL * lambda.max(1.0) {
        return Err(Error::NoConvergence {
            iterations: 100_000,
            residual,
        });
    }
    if x.iter().any(|&v| v <= 0.0) {
        return Err(Error::InvalidArgument("Perron vector is not positive".into()));
    }
    Ok((x, lambda))
}

/// A symmetric idempotent nonnegative matrix with a positive eigenvector for
/// eigenvalue one.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Projector {
    pub s: Matrix<f64>,
    pub special_vector: Vec<f64>,
}

/// `S = D_w P P^T D_w`, for `w` positive and normalized on every cell.
pub fn projector_from_partition(w: &[f64], pi: &Partition, tol: f64) -> Result<Projector> {
    check_positive(w, pi.n())?;
    for (i, cell) in pi.cells().iter().enumerate() {
        let norm2: f64 = cell.iter().map(|&v| w[v] * w[v]).sum();
        if (norm2 - 1.0).abs() > tol {
            return Err(Error::NotNormalized { cell: i });
        }
    }
    let s = Matrix::from_fn(pi.n(), pi.n(), |u, v| {
        if pi.cell_of(u) == pi.cell_of(v) {
            w[u] * w[v]
        } else {
            0.0
        }
    });
    Ok(Projector {
        s,
        special_vector: w.to_vec(),
    })
}

/// Inverse of [`projector_from_partition`]: cells are the irreducible
/// blocks of `S` (components of the support `S_uv > tol`) and the weights
/// are the special positive eigenvector, `sqrt(S_vv)` on each block.
pub fn partition_from_projector(s: &Matrix<f64>, tol: f64) -> Result<(Vec<f64>, Partition)> {
    if !s.is_square() {
        return Err(Error::NotProjector("not square".into()));
    }
    if let Some((i, j)) = s.symmetry_defect(tol) {
        return Err(Error::NotProjector(format!("not symmetric at ({i}, {j})")));
    }
    if !s.nonnegative(NEGATIVE_CLAMP.max(tol)) {
        return Err(Error::NotProjector("negative entries".into()));
    }
    if s.mul(s).max_abs_diff(s) > tol {
        return Err(Error::NotProjector("not idempotent".into()));
    }
    let n = s.rows();
    if (0..n).any(|v| s[(v, v)] <= tol) {
        return Err(Error::NoPositiveRangeVector);
    }
    let s = s.clamp_small_negatives(NEGATIVE_CLAMP.max(tol));
    let cells: Vec<Vec<usize>> = support_components(&s, tol).into_iter().map(|(rows, _)| rows).collect();
    let pi = Partition::from_cells(n, cells.into_iter().filter(|c| !c.is_empty()).collect())?;
    let w: Vec<f64> = (0..n).map(|v| s[(v, v)].sqrt()).collect();
    // Each irreducible block of a nonnegative projector has rank one.
    for cell in pi.cells() {
        for &u in cell {
            for &v in cell {
                if (s[(u, v)] - w[u] * w[v]).abs() > tol {
                    return Err(Error::NotProjector(format!("block containing {u} is not rank one")));
                }
            }
        }
    }
    Ok((w, pi))
}

impl Projector {
    /// Validates `s` and attaches its special positive eigenvector.
    pub fn new(s: Matrix<f64>, tol: f64) -> Result<Self> {
        let (w, _) = partition_from_projector(&s, tol)?;
        Ok(Self { s, special_vector: w })
    }

    pub fn commutator_residual(&self, adj: &Matrix<f64>) -> f64 {
        self.s.mul(adj).max_abs_diff(&adj.mul(&self.s))
    }
}

/// Orthogonal projector onto `rng S1 ∩ rng S2`, the limit of
/// `(S1 S2 S1)^k`, computed by repeated squaring. If squaring has not
/// settled within `max_iter` products, the intersection is computed from the
/// eigenvectors of `(S1 + S2) / 2` with eigenvalue one instead.
pub fn projector_meet(s1: &Matrix<f64>, s2: &Matrix<f64>, max_iter: usize) -> Result<Matrix<f64>> {
    if !s1.is_square() || s1.rows() != s2.rows() || !s2.is_square() {
        return Err(Error::DimensionMismatch("projectors must have equal square shapes".into()));
    }
    let mut t = s1.mul(s2).mul(s1);
    let mut products = 0usize;
    while products < max_iter {
        let t2 = t.mul(&t);
        products += 1;
        let change = t2.max_abs_diff(&t);
        t = t2;
        if change < MEET_TOL {
            return Ok(symmetrized(&t));
        }
    }
    let avg = Matrix::from_fn(s1.rows(), s1.cols(), |i, j| 0.5 * (s1[(i, j)] + s2[(i, j)]));
    let eig = SymmetricEigen::new(avg.to_nalgebra());
    let n = s1.rows();
    let mut out = Matrix::<f64>::zeros(n, n);
    for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
        if (lambda - 1.0).abs() < 1e-9 {
            let v = eig.eigenvectors.column(k);
            for i in 0..n {
                for j in 0..n {
                    out[(i, j)] += v[i] * v[j];
                }
            }
        }
    }
    Ok(out)
}

fn symmetrized(m: &Matrix<f64>) -> Matrix<f64> {
    Matrix::from_fn(m.rows(), m.cols(), |i, j| 0.5 * (m[(i, j)] + m[(j, i)]))
}

/// Common pseudo quotient read off a witness.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PseudoCommon {
    #[serde(serialize_with = "cells")]
    pub pi: Partition,
    pub u: Vec<f64>,
    #[serde(serialize_with = "cells")]
    pub sigma: Partition,
    pub w: Vec<f64>,
    /// Shared symmetrized pseudo quotient (cell `r` of `pi` matches cell `r`
    /// of `sigma`).
    pub quotient: Matrix<f64>,
    pub quotient_deviation: f64,
    pub balance: ScalingPair,
    pub n: Matrix<f64>,
    /// `max |(D A_G D^-1) N - N (E^-1 A_H E)|`.
    pub intertwining_residual: f64,
    pub gram_residual: f64,
}

fn cells<S: serde::Serializer>(p: &Partition, s: S) -> std::result::Result<S::Ok, S::Error> {
    p.cells().serialize(s)
}

/// Weights and partitions from a nonnegative witness `M` with
/// `A_G M = M A_H` whose support components are complete bipartite.
///
/// `M` is balanced to `N = D M E` with doubly stochastic Gram products; the
/// cells are the two sides of the components of `Z_N` (equal to those of
/// `Z_M`). On a component with rows `C` and columns `D`, the weights are the
/// Perron vectors of the blocks `(M M^T)[C, C]` and `(M^T M)[D, D]`.
pub fn common_pseudo_quotient_from_witness<T: Scalar>(
    g: &Matrix<T>,
    h: &Matrix<T>,
    m: &Matrix<f64>,
    tol: f64,
) -> Result<PseudoCommon> {
    if m.rows() != g.rows() || m.cols() != h.rows() {
        return Err(Error::DimensionMismatch(format!(
            "witness is {}x{}, graphs have {} and {} vertices",
            m.rows(),
            m.cols(),
            g.rows(),
            h.rows()
        )));
    }
    if m.max_abs() == 0.0 {
        return Err(Error::InvalidWitness("witness is zero".into()));
    }
    let (ag, ah) = (g.to_f64(), h.to_f64());
    let scale = m.max_abs() * ag.max_abs().max(ah.max_abs()).max(1.0);
    if ag.mul(m).max_abs_diff(&m.mul(&ah)) > tol * scale {
        return Err(Error::InvalidWitness("A_G M differs from M A_H".into()));
    }
    let balance = alternating_balance(m, DEFAULT_BALANCE_TOL, DEFAULT_MAX_ITER)?;
    let n = balance.apply(m);
    let components = support_components(&n, 0.0);
    let pi = Partition::from_cells(g.rows(), components.iter().map(|c| c.0.clone()).collect())?;
    let sigma = Partition::from_cells(h.rows(), components.iter().map(|c| c.1.clone()).collect())?;

    let mt = m.transpose();
    let block_perron = |gram: &Matrix<f64>, part: &Partition| -> Result<Vec<f64>> {
        let mut out = vec![0.0; part.n()];
        for cell in part.cells() {
            let (v, _) = perron_vector(&gram.select(cell, cell))?;
            for (&x, val) in cell.iter().zip(v) {
                out[x] = val;
            }
        }
        Ok(out)
    };
    let u = block_perron(&symmetrized(&m.mul(&mt)), &pi)?;
    let w = block_perron(&symmetrized(&mt.mul(m)), &sigma)?;
    let qg = pseudo_symmetrized_quotient(g, &u, &pi, tol)?;
    let qh = pseudo_symmetrized_quotient(h, &w, &sigma, tol)?;
    let quotient_deviation = qg.mat.max_abs_diff(&qh.mat);
    if quotient_deviation > tol {
        return Err(Error::QuotientMismatch);
    }
    let (d, e) = (&balance.d, &balance.e);
    let inv = |v: &[f64]| v.iter().map(|x| 1.0 / x).collect::<Vec<_>>();
    let left = ag.scaled(d, &inv(d));
    let right = ah.scaled(&inv(e), e);
    let intertwining_residual = left.mul(&n).max_abs_diff(&n.mul(&right));
    let gram_residual = gram_residual(&n);
    Ok(PseudoCommon {
        pi,
        u,
        sigma,
        w,
        quotient: qg.mat,
        quotient_deviation,
        balance,
        n,
        intertwining_residual,
        gram_residual,
    })
}
