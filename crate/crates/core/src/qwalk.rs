//! Continuous-time quantum walks `U(t) = exp(i t A)` and perfect state
//! transfer.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::numeric::Scalar;
use crate::partition::Partition;
use crate::pseudo::{normalize_per_cell, pseudo_symmetrized_quotient};
use crate::quotient::symmetrized_quotient;

pub const DEFAULT_PST_TOL: f64 = 1e-6;
pub const UNITARITY_TOL: f64 = 1e-9;

/// Eigendecomposition `A = V diag(lambda) V^T`, reused across times.
#[derive(Debug, Clone)]
pub struct WalkSpectrum {
    values: Vec<f64>,
    vectors: DMatrix<f64>,
}

/// `U(t)` at one time.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkMatrix {
    pub t: f64,
    pub u: DMatrix<Complex64>,
}

impl WalkMatrix {
    /// `max |U U^* - I|`.
    pub fn unitarity_residual(&self) -> f64 {
        let n = self.u.nrows();
        let prod = &self.u * self.u.adjoint();
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| (prod[(i, j)] - if i == j { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) }).norm())
            .fold(0.0, f64::max)
    }

    /// `max |U - U^T|`.
    pub fn symmetry_residual(&self) -> f64 {
        (&self.u - self.u.transpose()).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

impl WalkSpectrum {
    pub fn new<T: Scalar>(adj: &Matrix<T>) -> Result<Self> {
        let a = adj.to_f64();
        if !a.is_square() || !a.is_symmetric(0.0) {
            return Err(Error::InvalidArgument("walk needs a symmetric matrix".into()));
        }
        let eig = SymmetricEigen::try_new(a.to_nalgebra(), f64::EPSILON, 0)
            .ok_or_else(|| Error::Eigen("symmetric eigensolver did not converge".into()))?;
        Ok(Self {
            values: eig.eigenvalues.iter().copied().collect(),
            vectors: eig.eigenvectors,
        })
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.values
    }

    fn phases(&self, t: f64) -> Vec<Complex64> {
        self.values.iter().map(|&l| Complex64::from_polar(1.0, t * l)).collect()
    }

    /// `U(t) = V exp(i t Lambda) V^T`.
    pub fn at(&self, t: f64) -> WalkMatrix {
        let n = self.n();
        if t == 0.0 {
            return WalkMatrix {
                t,
                u: DMatrix::identity(n, n),
            };
        }
        let phases = self.phases(t);
        let v = &self.vectors;
        let u = DMatrix::from_fn(n, n, |a, b| {
            (0..n).map(|k| phases[k] * (v[(a, k)] * v[(b, k)])).sum::<Complex64>()
        });
        WalkMatrix { t, u }
    }

    /// The single entry `U(t)[a][b]`.
    pub fn amplitude(&self, a: usize, b: usize, t: f64) -> Complex64 {
        if t == 0.0 {
            return Complex64::new(if a == b { 1.0 } else { 0.0 }, 0.0);
        }
        (0..self.n())
            .map(|k| Complex64::from_polar(1.0, t * self.values[k]) * (self.vectors[(a, k)] * self.vectors[(b, k)]))
            .sum()
    }

    pub fn fidelity(&self, a: usize, b: usize, t: f64) -> f64 {
        self.amplitude(a, b, t).norm_sqr()
    }
}

/// `U(t) = exp(i t A)`, checked to be unitary within `1e-9`.
pub fn walk_matrix<T: Scalar>(adj: &Matrix<T>, t: f64) -> Result<WalkMatrix> {
    if !t.is_finite() {
        return Err(Error::InvalidArgument("time must be finite".into()));
    }
    let w = WalkSpectrum::new(adj)?.at(t);
    let residual = w.unitarity_residual();
    if residual > UNITARITY_TOL {
        return Err(Error::Eigen(format!("unitarity residual {residual:e}")));
    }
    Ok(w)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PstCheck {
    pub transfer: bool,
    pub fidelity: f64,
}

fn check_pair(n: usize, u: usize, v: usize) -> Result<()> {
    if u == v {
        return Err(Error::InvalidArgument("transfer needs two distinct vertices".into()));
    }
    for x in [u, v] {
        if x >= n {
            return Err(Error::VertexOutOfRange { vertex: x, n });
        }
    }
    Ok(())
}

/// Fidelity `|U(t)[u][v]|^2`; transfer is reported when it is at least
/// `1 - tol`.
pub fn pst_check<T: Scalar>(adj: &Matrix<T>, u: usize, v: usize, t: f64, tol: f64) -> Result<PstCheck> {
    check_pair(adj.rows(), u, v)?;
    let fidelity = WalkSpectrum::new(adj)?.fidelity(u, v, t).min(1.0);
    Ok(PstCheck {
        transfer: fidelity >= 1.0 - tol,
        fidelity,
    })
}

const GOLDEN: f64 = 0.618_033_988_749_894_8;

fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let mut c = b - GOLDEN * (b - a);
    let mut d = a + GOLDEN * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if (b - a).abs() < 1e-13 * (1.0 + a.abs()) {
            break;
        }
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - GOLDEN * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + GOLDEN * (b - a);
            fd = f(d);
        }
    }
    let t = 0.5 * (a + b);
    (t, f(t))
}

/// Samples the fidelity on `t = k t_max / steps`, `k = 0..=steps`, refines
/// every local maximum by golden-section search over its two neighbouring
/// grid intervals, and keeps the refined maxima with fidelity at least
/// `1 - tol`, in increasing `t`.
pub fn pst_scan<T: Scalar>(
    adj: &Matrix<T>,
    u: usize,
    v: usize,
    t_max: f64,
    steps: usize,
    tol: f64,
) -> Result<Vec<(f64, f64)>> {
    check_pair(adj.rows(), u, v)?;
    if steps == 0 {
        return Err(Error::InvalidArgument("steps must be at least 1".into()));
    }
    if !(t_max.is_finite() && t_max > 0.0) {
        return Err(Error::InvalidArgument("t_max must be positive".into()));
    }
    let spectrum = WalkSpectrum::new(adj)?;
    let h = t_max / steps as f64;
    let grid: Vec<f64> = (0..=steps).into_par_iter().map(|k| spectrum.fidelity(u, v, k as f64 * h)).collect();
    let peaks: Vec<usize> = (0..=steps)
        .filter(|&k| {
            let left = k == 0 || grid[k] >= grid[k - 1];
            let right = k == steps || grid[k] >= grid[k + 1];
            left && right && (k > 0 || grid[0] > grid[1])
        })
        .collect();
    let refined: Vec<(f64, f64)> = peaks
        .par_iter()
        .map(|&k| {
            let a = (k as f64 - 1.0).max(0.0) * h;
            let b = ((k + 1).min(steps)) as f64 * h;
            let (t, f) = golden_max(|t| spectrum.fidelity(u, v, t), a, b);
            let grid_point = (k as f64 * h, grid[k]);
            if f >= grid_point.1 {
                (t, f.min(1.0))
            } else {
                (grid_point.0, grid_point.1.min(1.0))
            }
        })
        .collect();
    let mut out: Vec<(f64, f64)> = Vec::new();
    for (t, f) in refined {
        if f < 1.0 - tol {
            continue;
        }
        match out.last_mut() {
            Some(last) if (t - last.0).abs() < 0.5 * h => {
                if f > last.1 {
                    *last = (t, f);
                }
            }
            _ => out.push((t, f)),
        }
    }
    Ok(out)
}

/// `max |U_G(t) P~ - P~ U_B(t)|` for the (pseudo) symmetrized quotient `B`.
/// With `weights`, `P~` is `D_w P` normalized per cell.
pub fn quotient_walk_residual<T: Scalar>(
    adj: &Matrix<T>,
    pi: &Partition,
    weights: Option<&[f64]>,
    t: f64,
    tol: f64,
) -> Result<f64> {
    let (pt, b) = match weights {
        None => (pi.normalized_characteristic_matrix(), symmetrized_quotient(adj, pi, tol)?.mat),
        Some(w) => {
            let q = pseudo_symmetrized_quotient(adj, w, pi, tol)?;
            (pi.weighted_characteristic_matrix(&normalize_per_cell(w, pi)), q.mat)
        }
    };
    let ug = walk_matrix(adj, t)?.u;
    let ub = walk_matrix(&b, t)?.u;
    let ptc = pt.to_nalgebra().map(|x| Complex64::new(x, 0.0));
    let diff = ug * &ptc - ptc * ub;
    Ok(diff.iter().map(|z| z.norm()).fold(0.0, f64::max))
}
