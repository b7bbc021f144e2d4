//! Common symmetrized quotients: witnesses `M` with doubly stochastic Gram
//! products, recovery of the partitions from the support of `M`, and the
//! stronger "same combinatorial quotient" relation with its constant-sum
//! witness.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::numeric::{Rational, Scalar};
use crate::partition::Partition;
use crate::quotient::{quotient, symmetrized_quotient, QuotientGraph, QuotientKind};
use crate::refine::{coarsest_equitable, enumerate_equitable, is_equitable};

/// Tolerance on the row and column sums of the Gram products.
pub const WITNESS_TOL: f64 = 1e-8;
/// Entries at least this negative disqualify a witness; smaller negatives
/// are clamped to zero.
pub const NEGATIVE_CLAMP: f64 = 1e-12;

/// A witness matrix together with the connected components of its support
/// graph `Z_M`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymWitness {
    pub m: Matrix<f64>,
    /// Each component as (vertices of G, vertices of H), ordered by the
    /// smallest vertex of G (components without G vertices last).
    pub components: Vec<(Vec<usize>, Vec<usize>)>,
}

/// Connected components of the bipartite support graph of `m`; an entry is
/// in the support when it exceeds `threshold`.
pub fn support_components(m: &Matrix<f64>, threshold: f64) -> Vec<(Vec<usize>, Vec<usize>)> {
    let (k, l) = (m.rows(), m.cols());
    let mut parent: Vec<usize> = (0..k + l).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for i in 0..k {
        for j in 0..l {
            if m[(i, j)] > threshold {
                let (a, b) = (find(&mut parent, i), find(&mut parent, k + j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut index = vec![usize::MAX; k + l];
    let mut out: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
    for x in 0..k + l {
        let root = find(&mut parent, x);
        if index[root] == usize::MAX {
            index[root] = out.len();
            out.push((Vec::new(), Vec::new()));
        }
        let c = &mut out[index[root]];
        if x < k {
            c.0.push(x);
        } else {
            c.1.push(x - k);
        }
    }
    out
}

fn check_matching(matching: &[usize], k: usize) -> Result<()> {
    let mut seen = vec![false; k];
    if matching.len() != k {
        return Err(Error::InvalidArgument("matching must pair every cell".into()));
    }
    for &j in matching {
        if j >= k || std::mem::replace(&mut seen[j], true) {
            return Err(Error::InvalidArgument("matching is not a bijection".into()));
        }
    }
    Ok(())
}

/// `M = P~ Q~^T`, the columns of `Q~` reordered so that cell `r` of `pi`
/// meets cell `matching[r]` of `sigma`.
pub fn construct_witness<T: Scalar>(
    g: &Matrix<T>,
    pi: &Partition,
    h: &Matrix<T>,
    sigma: &Partition,
    matching: &[usize],
    tol: f64,
) -> Result<SymWitness> {
    if pi.len() != sigma.len() {
        return Err(Error::QuotientMismatch);
    }
    check_matching(matching, pi.len())?;
    let qg = symmetrized_quotient(g, pi, tol)?;
    let qh = symmetrized_quotient(h, sigma, tol)?;
    let k = pi.len();
    for i in 0..k {
        for j in 0..k {
            if !qg.mat[(i, j)].near(&qh.mat[(matching[i], matching[j])], tol) {
                return Err(Error::QuotientMismatch);
            }
        }
    }
    let mut m = Matrix::<f64>::zeros(pi.n(), sigma.n());
    for (r, cell) in pi.cells().iter().enumerate() {
        let other = sigma.cell(matching[r]);
        let value = 1.0 / ((cell.len() * other.len()) as f64).sqrt();
        for &u in cell {
            for &v in other {
                m[(u, v)] = value;
            }
        }
    }
    let components = support_components(&m, NEGATIVE_CLAMP);
    Ok(SymWitness { m, components })
}

/// Deviations of a candidate witness from the three conditions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WitnessDefects {
    pub min_entry: f64,
    /// Largest `|row or column sum - 1|` over `M M^T` and `M^T M`.
    pub gram_residual: f64,
    /// `max |A_G M - M A_H|`.
    pub intertwining: f64,
}

pub fn witness_defects<T: Scalar>(g: &Matrix<T>, h: &Matrix<T>, m: &Matrix<f64>) -> Result<WitnessDefects> {
    if m.rows() != g.rows() || m.cols() != h.rows() {
        return Err(Error::DimensionMismatch(format!(
            "witness is {}x{}, graphs have {} and {} vertices",
            m.rows(),
            m.cols(),
            g.rows(),
            h.rows()
        )));
    }
    let mt = m.transpose();
    let gram_residual = [m.mul(&mt), mt.mul(m)]
        .iter()
        .flat_map(|p| p.row_sums().into_iter().chain(p.col_sums()))
        .fold(0.0f64, |acc, s| acc.max((s - 1.0).abs()));
    let (ag, ah) = (g.to_f64(), h.to_f64());
    Ok(WitnessDefects {
        min_entry: m.entries().fold(f64::INFINITY, |a, &b| a.min(b)),
        gram_residual,
        intertwining: ag.mul(m).max_abs_diff(&m.mul(&ah)),
    })
}

/// `M >= 0`, `M M^T` and `M^T M` doubly stochastic, and `A_G M = M A_H`, all
/// within `tol`.
pub fn verify_witness<T: Scalar>(g: &Matrix<T>, h: &Matrix<T>, m: &Matrix<f64>, tol: f64) -> Result<bool> {
    let d = witness_defects(g, h, m)?;
    Ok(d.min_entry >= -NEGATIVE_CLAMP && d.gram_residual <= tol && d.intertwining <= tol)
}

/// Partitions read off a witness.
#[derive(Debug, Clone, PartialEq)]
pub struct Extracted {
    pub pi: Partition,
    pub sigma: Partition,
    /// Cell `r` of `pi` corresponds to cell `matching[r]` of `sigma`.
    pub matching: Vec<usize>,
    pub quotient: Matrix<f64>,
}

/// Cells are the traces of the components of `Z_M` on each side.
pub fn extract_partitions<T: Scalar>(g: &Matrix<T>, h: &Matrix<T>, m: &Matrix<f64>, tol: f64) -> Result<Extracted> {
    if !verify_witness(g, h, m, tol)? {
        return Err(Error::InvalidWitness("verification failed".into()));
    }
    let m = m.clamp_small_negatives(NEGATIVE_CLAMP);
    let components = support_components(&m, NEGATIVE_CLAMP);
    if components.iter().any(|(a, b)| a.is_empty() || b.is_empty()) {
        return Err(Error::InvalidWitness("a support component misses one of the graphs".into()));
    }
    let pi = Partition::from_cells(g.rows(), components.iter().map(|c| c.0.clone()).collect())?;
    let sigma = Partition::from_cells(h.rows(), components.iter().map(|c| c.1.clone()).collect())?;
    let qg = symmetrized_quotient(g, &pi, tol)?;
    let qh = symmetrized_quotient(h, &sigma, tol)?;
    if !qg.mat.approx_eq(&qh.mat, tol) {
        return Err(Error::QuotientMismatch);
    }
    Ok(Extracted {
        matching: (0..pi.len()).collect(),
        pi,
        sigma,
        quotient: qg.mat,
    })
}

/// Row and column multisets, sorted, used to prune candidate vertex pairs.
fn profile(m: &Matrix<f64>, i: usize) -> (f64, Vec<f64>, Vec<f64>) {
    let mut row: Vec<f64> = m.row(i).to_vec();
    let mut col: Vec<f64> = (0..m.rows()).map(|r| m[(r, i)]).collect();
    row.sort_by(f64::total_cmp);
    col.sort_by(f64::total_cmp);
    (m[(i, i)], row, col)
}

fn profiles_near(a: &(f64, Vec<f64>, Vec<f64>), b: &(f64, Vec<f64>, Vec<f64>), tol: f64) -> bool {
    (a.0 - b.0).abs() <= tol
        && a.1.iter().zip(&b.1).all(|(x, y)| (x - y).abs() <= tol)
        && a.2.iter().zip(&b.2).all(|(x, y)| (x - y).abs() <= tol)
}

/// A permutation `p` with `a[i][j] = b[p[i]][p[j]]` within `tol` and
/// `compatible(i, p[i])` for every `i`; the lexicographically first one.
pub fn find_isomorphism<T: Scalar>(
    a: &Matrix<T>,
    b: &Matrix<T>,
    tol: f64,
    compatible: impl Fn(usize, usize) -> bool,
) -> Option<Vec<usize>> {
    if !a.is_square() || !b.is_square() || a.rows() != b.rows() {
        return None;
    }
    let k = a.rows();
    let (af, bf) = (a.to_f64(), b.to_f64());
    let pa: Vec<_> = (0..k).map(|i| profile(&af, i)).collect();
    let pb: Vec<_> = (0..k).map(|i| profile(&bf, i)).collect();
    let candidates: Vec<Vec<usize>> = (0..k)
        .map(|i| {
            (0..k)
                .filter(|&j| compatible(i, j) && profiles_near(&pa[i], &pb[j], tol))
                .collect()
        })
        .collect();
    if candidates.iter().any(Vec::is_empty) {
        return None;
    }
    let mut p = vec![usize::MAX; k];
    let mut used = vec![false; k];
    fn extend<T: Scalar>(
        i: usize,
        a: &Matrix<T>,
        b: &Matrix<T>,
        tol: f64,
        candidates: &[Vec<usize>],
        p: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        if i == p.len() {
            return true;
        }
        for &j in &candidates[i] {
            if used[j] || !a[(i, i)].near(&b[(j, j)], tol) {
                continue;
            }
            let consistent = (0..i).all(|i2| {
                a[(i, i2)].near(&b[(j, p[i2])], tol) && a[(i2, i)].near(&b[(p[i2], j)], tol)
            });
            if !consistent {
                continue;
            }
            p[i] = j;
            used[j] = true;
            if extend(i + 1, a, b, tol, candidates, p, used) {
                return true;
            }
            used[j] = false;
        }
        p[i] = usize::MAX;
        false
    }
    extend(0, a, b, tol, &candidates, &mut p, &mut used).then_some(p)
}

/// Isomorphism of quotient graphs; combinatorial quotients must also agree
/// on cell sizes.
pub fn weighted_graph_isomorphic<T: Scalar>(
    b1: &QuotientGraph<T>,
    b2: &QuotientGraph<T>,
    tol: f64,
) -> Option<Vec<usize>> {
    let sized = b1.kind == QuotientKind::Combinatorial || b2.kind == QuotientKind::Combinatorial;
    find_isomorphism(&b1.mat, &b2.mat, tol, |i, j| !sized || b1.cell_sizes[i] == b2.cell_sizes[j])
}

/// Outcome of a successful [`common_symmetrized_quotient`] search.
#[derive(Debug, Clone, PartialEq)]
pub struct CommonQuotient {
    pub pi: Partition,
    pub sigma: Partition,
    pub matching: Vec<usize>,
    /// The shared symmetrized quotient in the cell order of `pi`.
    pub quotient: Matrix<f64>,
    pub witness: SymWitness,
}

fn sorted_entries(m: &Matrix<f64>) -> Vec<f64> {
    let mut v: Vec<f64> = m.entries().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Searches all pairs of equitable partitions, fewest cells first, for a
/// pair with isomorphic symmetrized quotients. The first hit in the order
/// (cell count, position of `pi`, position of `sigma`) is returned, already
/// turned into a verified witness.
pub fn common_symmetrized_quotient<T: Scalar>(
    g: &Matrix<T>,
    h: &Matrix<T>,
    max_n: usize,
    tol: f64,
) -> Result<Option<CommonQuotient>> {
    let pg = enumerate_equitable(g, max_n, tol)?;
    let ph = enumerate_equitable(h, max_n, tol)?;
    let quotients = |adj: &Matrix<T>, parts: &[Partition]| -> Result<Vec<(Matrix<f64>, Vec<f64>)>> {
        parts
            .iter()
            .map(|p| {
                let q = symmetrized_quotient(adj, p, tol)?.mat;
                let key = sorted_entries(&q);
                Ok((q, key))
            })
            .collect()
    };
    let qg = quotients(g, &pg)?;
    let qh = quotients(h, &ph)?;
    // Stream one cell count at a time so the pair list never materializes.
    let mut counts: Vec<usize> = pg.iter().map(Partition::len).collect();
    counts.sort_unstable();
    counts.dedup();
    let mut hit = None;
    for k in counts {
        let gi: Vec<usize> = (0..pg.len()).filter(|&i| pg[i].len() == k).collect();
        let hj: Vec<usize> = (0..ph.len()).filter(|&j| ph[j].len() == k).collect();
        if hj.is_empty() {
            continue;
        }
        hit = gi.par_iter().find_map_first(|&i| {
            let (a, ka) = &qg[i];
            hj.iter().find_map(|&j| {
                let (b, kb) = &qh[j];
                if ka.iter().zip(kb).any(|(x, y)| (x - y).abs() > tol) {
                    return None;
                }
                find_isomorphism(a, b, tol, |_, _| true).map(|p| (i, j, p))
            })
        });
        if hit.is_some() {
            break;
        }
    }
    let Some((i, j, matching)) = hit else {
        return Ok(None);
    };
    let witness = construct_witness(g, &pg[i], h, &ph[j], &matching, tol)?;
    if !verify_witness(g, h, &witness.m, tol.max(WITNESS_TOL))? {
        return Err(Error::InvalidWitness("constructed witness failed verification".into()));
    }
    Ok(Some(CommonQuotient {
        pi: pg[i].clone(),
        sigma: ph[j].clone(),
        matching,
        quotient: qg[i].0.clone(),
        witness,
    }))
}

/// The constant `lambda` with `|C_r| = lambda |D_{matching[r]}|` for every
/// cell, if there is one.
pub fn cell_ratio(pi_sizes: &[usize], sigma_sizes: &[usize], matching: &[usize]) -> Option<Rational> {
    if pi_sizes.len() != sigma_sizes.len() || matching.len() != pi_sizes.len() || pi_sizes.is_empty() {
        return None;
    }
    let ratio = |r: usize| Rational::new((pi_sizes[r] as i64).into(), (sigma_sizes[matching[r]] as i64).into());
    let lambda = ratio(0);
    (1..pi_sizes.len()).all(|r| ratio(r) == lambda).then_some(lambda)
}

/// Outcome of [`same_combinatorial_quotient`].
#[derive(Debug, Clone, PartialEq)]
pub struct SameQuotient<T> {
    pub decision: bool,
    /// Coarsest equitable partitions; on success the cells of `sigma` are
    /// reordered so that cell `r` matches cell `r` of `pi`.
    pub pi: Partition,
    pub sigma: Partition,
    pub lambda: Option<Rational>,
    pub quotient: Option<Matrix<T>>,
    /// `P~ Q~^T`, with constant row sums `row_sum` and column sums `col_sum`.
    pub witness: Option<Matrix<f64>>,
    pub row_sum: Option<f64>,
    pub col_sum: Option<f64>,
}

/// Whether the coarsest quotients of `g` and `h` are isomorphic with cell
/// sizes in a common ratio, and the constant-sum witness when they are.
///
/// The ratio is forced to be `|V(G)| / |V(H)|`, since the cell sizes on each
/// side add up to the vertex counts.
pub fn same_combinatorial_quotient<T: Scalar>(g: &Matrix<T>, h: &Matrix<T>, tol: f64) -> Result<SameQuotient<T>> {
    let pi = coarsest_equitable(g, None, tol)?.partition;
    let sigma = coarsest_equitable(h, None, tol)?.partition;
    let bg = quotient(g, &pi, tol)?;
    let bh = quotient(h, &sigma, tol)?;
    let (ng, nh) = (g.rows(), h.rows());
    let found = find_isomorphism(&bg.mat, &bh.mat, tol, |i, j| bg.cell_sizes[i] * nh == bh.cell_sizes[j] * ng);
    let Some(matching) = found else {
        return Ok(SameQuotient {
            decision: false,
            pi,
            sigma,
            lambda: None,
            quotient: None,
            witness: None,
            row_sum: None,
            col_sum: None,
        });
    };
    let lambda = cell_ratio(&pi.cell_sizes(), &sigma.cell_sizes(), &matching);
    debug_assert!(lambda.is_some());
    let sigma = Partition::from_cells(nh, matching.iter().map(|&j| sigma.cell(j).to_vec()).collect())?;
    let mut m = Matrix::<f64>::zeros(ng, nh);
    for (r, cell) in pi.cells().iter().enumerate() {
        let other = sigma.cell(r);
        let value = 1.0 / ((cell.len() * other.len()) as f64).sqrt();
        for &u in cell {
            for &v in other {
                m[(u, v)] = value;
            }
        }
    }
    let l = lambda.as_ref().map_or(f64::NAN, Scalar::to_f64);
    Ok(SameQuotient {
        decision: true,
        pi,
        sigma,
        lambda,
        quotient: Some(bg.mat),
        witness: Some(m),
        row_sum: Some(1.0 / l.sqrt()),
        col_sum: Some(l.sqrt()),
    })
}

/// Checks a constant-sum witness: `M >= 0`, `M != 0`, constant row sums,
/// constant column sums and `A_G M = M A_H`, all within `tol`.
pub fn verify_constant_sum_witness<T: Scalar>(g: &Matrix<T>, h: &Matrix<T>, m: &Matrix<f64>, tol: f64) -> Result<bool> {
    let d = witness_defects(g, h, m)?;
    let constant = |v: Vec<f64>| v.iter().all(|x| (x - v[0]).abs() <= tol);
    Ok(d.min_entry >= -NEGATIVE_CLAMP
        && m.max_abs() > tol
        && constant(m.row_sums())
        && constant(m.col_sums())
        && d.intertwining <= tol)
}

/// Whether `pi` and `sigma` are equitable and give equal symmetrized
/// quotients under the identity matching.
pub fn same_symmetrized_quotient<T: Scalar>(
    g: &Matrix<T>,
    pi: &Partition,
    h: &Matrix<T>,
    sigma: &Partition,
    tol: f64,
) -> bool {
    if pi.len() != sigma.len() || !is_equitable(g, pi, tol) || !is_equitable(h, sigma, tol) {
        return false;
    }
    match (symmetrized_quotient(g, pi, tol), symmetrized_quotient(h, sigma, tol)) {
        (Ok(a), Ok(b)) => a.mat.approx_eq(&b.mat, tol),
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families::*;
    use crate::numeric::rat;

    fn p(n: usize, cells: &[&[usize]]) -> Partition {
        Partition::from_cells(n, cells.iter().map(|c| c.to_vec()).collect()).unwrap()
    }

    #[test]
    fn star_and_square_witness() {
        let g = star::<Rational>(4);
        let h = complete_bipartite::<Rational>(2, 2);
        let w = construct_witness(
            g.adj(),
            &p(5, &[&[0], &[1, 2, 3, 4]]),
            h.adj(),
            &p(4, &[&[0, 1], &[2, 3]]),
            &[0, 1],
            1e-12,
        )
        .unwrap();
        let r = 0.5f64.sqrt();
        let leaf = 1.0 / (2.0 * 2f64.sqrt());
        assert!((w.m[(0, 0)] - r).abs() < 1e-15 && (w.m[(0, 1)] - r).abs() < 1e-15);
        assert_eq!((w.m[(0, 2)], w.m[(0, 3)]), (0.0, 0.0));
        for u in 1..5 {
            assert_eq!((w.m[(u, 0)], w.m[(u, 1)]), (0.0, 0.0));
            assert!((w.m[(u, 2)] - leaf).abs() < 1e-15 && (w.m[(u, 3)] - leaf).abs() < 1e-15);
        }
        assert!(verify_witness(g.adj(), h.adj(), &w.m, WITNESS_TOL).unwrap());
        assert_eq!(w.components.len(), 2);

        let ex = extract_partitions(g.adj(), h.adj(), &w.m, WITNESS_TOL).unwrap();
        assert!(ex.pi.same_as(&p(5, &[&[0], &[1, 2, 3, 4]])));
        assert_eq!(ex.sigma.cell(0), &[0, 1]);
        assert_eq!(ex.sigma.cell(1), &[2, 3]);
    }

    #[test]
    fn identity_and_uniform_witnesses() {
        let g = path::<Rational>(4);
        let n = 4;
        let w = construct_witness(g.adj(), &Partition::singletons(n), g.adj(), &Partition::singletons(n), &[0, 1, 2, 3], 1e-12)
            .unwrap();
        assert_eq!(w.m, Matrix::identity(n));
        let ex = extract_partitions(g.adj(), g.adj(), &w.m, WITNESS_TOL).unwrap();
        assert!(ex.pi.same_as(&Partition::singletons(n)));

        let pet = petersen::<Rational>();
        let w = construct_witness(pet.adj(), &Partition::one_cell(10), pet.adj(), &Partition::one_cell(10), &[0], 1e-12)
            .unwrap();
        assert!(w.m.entries().all(|&x| (x - 0.1).abs() < 1e-15));
        let ex = extract_partitions(pet.adj(), pet.adj(), &w.m, WITNESS_TOL).unwrap();
        assert_eq!(ex.pi.len(), 1);
        assert!((ex.quotient[(0, 0)] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn hexagon_uniform_witness() {
        let c6 = cycle::<Rational>(6);
        let c3 = cycle::<Rational>(3);
        let two = c3.disjoint_union(&c3);
        let m = Matrix::from_fn(6, 6, |_, _| 1.0 / 6.0);
        assert!(verify_witness(c6.adj(), two.adj(), &m, WITNESS_TOL).unwrap());
        let k3 = complete::<Rational>(3);
        let j = Matrix::from_fn(3, 3, |_, _| 1.0);
        assert!(!verify_witness(k3.adj(), k3.adj(), &j, WITNESS_TOL).unwrap());
        assert!(extract_partitions(k3.adj(), k3.adj(), &j, WITNESS_TOL).is_err());
    }

    #[test]
    fn mismatched_quotients_are_rejected() {
        let g = star::<Rational>(4);
        let h = complete_bipartite::<Rational>(2, 2);
        let err = construct_witness(
            g.adj(),
            &p(5, &[&[0], &[1, 2, 3, 4]]),
            h.adj(),
            &Partition::singletons(4),
            &[0, 1],
            1e-12,
        )
        .unwrap_err();
        assert_eq!(err, Error::QuotientMismatch);
    }

    #[test]
    fn isomorphism_examples() {
        let s = 2f64.sqrt();
        let q = |rows: Vec<Vec<f64>>| QuotientGraph {
            mat: Matrix::from_rows(rows).unwrap(),
            kind: QuotientKind::Symmetrized,
            cell_sizes: vec![],
        };
        let a = q(vec![vec![0.0, s], vec![s, 1.0]]);
        let b = q(vec![vec![1.0, s], vec![s, 0.0]]);
        assert_eq!(weighted_graph_isomorphic(&a, &a, 1e-12), Some(vec![0, 1]));
        assert_eq!(weighted_graph_isomorphic(&a, &b, 1e-12), Some(vec![1, 0]));

        let c = |rows: Vec<Vec<i64>>, sizes: Vec<usize>| QuotientGraph {
            mat: Matrix::from_rows(rows.into_iter().map(|r| r.into_iter().map(|x| rat(x, 1)).collect()).collect())
                .unwrap(),
            kind: QuotientKind::Combinatorial,
            cell_sizes: sizes,
        };
        let k3 = c(vec![vec![0, 2], vec![1, 1]], vec![1, 2]);
        assert_eq!(weighted_graph_isomorphic(&k3, &k3, 0.0), Some(vec![0, 1]));
        let star = c(vec![vec![0, 4], vec![1, 0]], vec![1, 4]);
        let square = c(vec![vec![2]], vec![4]);
        assert_eq!(weighted_graph_isomorphic(&star, &square, 0.0), None);
    }

    #[test]
    fn common_quotient_search() {
        let g = star::<Rational>(4);
        let h = complete_bipartite::<Rational>(2, 2);
        let hit = common_symmetrized_quotient(g.adj(), h.adj(), 12, 1e-9).unwrap().unwrap();
        let two = Matrix::from_rows(vec![vec![0.0, 2.0], vec![2.0, 0.0]]).unwrap();
        assert!(hit.quotient.max_abs_diff(&two) < 1e-12);

        let k3 = complete::<Rational>(3);
        assert!(common_symmetrized_quotient(k3.adj(), k3.adj(), 12, 1e-9).unwrap().is_some());
        let claw = star::<Rational>(3);
        assert!(common_symmetrized_quotient(k3.adj(), claw.adj(), 12, 1e-9).unwrap().is_none());
    }

    #[test]
    fn combinatorial_relation() {
        let c3 = cycle::<Rational>(3);
        let c6 = cycle::<Rational>(6);
        let r = same_combinatorial_quotient(c3.adj(), c6.adj(), 0.0).unwrap();
        assert!(r.decision);
        assert_eq!(r.lambda, Some(rat(1, 2)));
        let m = r.witness.unwrap();
        assert!(m.row_sums().iter().all(|s| (s - 2f64.sqrt()).abs() < 1e-12));
        assert!(m.col_sums().iter().all(|s| (s - 0.5f64.sqrt()).abs() < 1e-12));
        assert!(verify_constant_sum_witness(c3.adj(), c6.adj(), &m, 1e-12).unwrap());

        let g = star::<Rational>(4);
        let h = complete_bipartite::<Rational>(2, 2);
        assert!(!same_combinatorial_quotient(g.adj(), h.adj(), 0.0).unwrap().decision);

        let pet = petersen::<Rational>();
        let r = same_combinatorial_quotient(pet.adj(), pet.adj(), 0.0).unwrap();
        assert!(r.decision && r.lambda == Some(rat(1, 1)));
    }

    #[test]
    fn ratios() {
        assert_eq!(cell_ratio(&[1, 4], &[2, 2], &[0, 1]), None);
        assert_eq!(cell_ratio(&[3], &[6], &[0]), Some(rat(1, 2)));
        assert_eq!(cell_ratio(&[2, 3], &[2, 3], &[0, 1]), Some(rat(1, 1)));
        assert_eq!(cell_ratio(&[2, 4], &[2, 1], &[1, 0]), Some(rat(2, 1)));
    }
}
