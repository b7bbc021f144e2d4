//! Undirected weighted graphs with optional loops.
//!
//! Text format: a header line `n m [weighted]`, then `m` lines `u v [w]`
//! with 0-indexed endpoints. A loop `u u w` puts `w` on the diagonal once.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::numeric::{Rational, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct Graph<T> {
    adj: Matrix<T>,
    labels: Option<Vec<String>>,
}

/// Edge list entry; a missing weight means 1.
pub type Edge<T> = (usize, usize, Option<T>);

impl<T: Scalar> Graph<T> {
    /// Wraps an adjacency matrix, checking it is square, exactly symmetric
    /// and finite.
    pub fn new(adj: Matrix<T>) -> Result<Self> {
        if adj.rows() == 0 {
            return Err(Error::EmptyGraph);
        }
        if !adj.is_square() {
            return Err(Error::DimensionMismatch("adjacency must be square".into()));
        }
        if adj.entries().any(|w| !w.is_finite_value()) {
            return Err(Error::NonFiniteWeight);
        }
        if let Some((i, j)) = adj.symmetry_defect(0.0) {
            return Err(Error::NotSymmetric { i, j });
        }
        Ok(Self { adj, labels: None })
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = Edge<T>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut adj = Matrix::zeros(n, n);
        let mut seen = HashSet::new();
        for (u, v, w) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::VertexOutOfRange { vertex: x, n });
                }
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::DuplicateEdge { u, v });
            }
            let w = w.unwrap_or_else(T::one);
            if !w.is_finite_value() {
                return Err(Error::NonFiniteWeight);
            }
            adj[(u, v)] = w.clone();
            adj[(v, u)] = w;
        }
        Ok(Self { adj, labels: None })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n() {
            return Err(Error::DimensionMismatch("one label per vertex".into()));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.adj.rows()
    }

    pub fn adj(&self) -> &Matrix<T> {
        &self.adj
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn weight(&self, u: usize, v: usize) -> &T {
        &self.adj[(u, v)]
    }

    /// True when every entry is 0 or 1.
    pub fn is_unweighted(&self) -> bool {
        self.adj.entries().all(|w| w.is_zero() || w.is_one())
    }

    /// Edges `(u, v, w)` with `u <= v` and `w != 0`, in row-major order.
    pub fn edges(&self) -> Vec<(usize, usize, T)> {
        let mut out = Vec::new();
        for u in 0..self.n() {
            for v in u..self.n() {
                let w = &self.adj[(u, v)];
                if !w.is_zero() {
                    out.push((u, v, w.clone()));
                }
            }
        }
        out
    }

    pub fn to_real(&self) -> Graph<f64> {
        Graph {
            adj: self.adj.to_f64(),
            labels: self.labels.clone(),
        }
    }

    pub fn is_connected(&self) -> bool {
        let n = self.n();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for (v, s) in seen.iter_mut().enumerate() {
                if !*s && !self.adj[(u, v)].is_zero() {
                    *s = true;
                    stack.push(v);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Graph with vertex `v` renamed to `perm[v]`.
    pub fn relabeled(&self, perm: &[usize]) -> Result<Self> {
        let n = self.n();
        let mut inverse = vec![usize::MAX; n];
        if perm.len() != n {
            return Err(Error::DimensionMismatch("permutation length".into()));
        }
        for (v, &p) in perm.iter().enumerate() {
            if p >= n || inverse[p] != usize::MAX {
                return Err(Error::InvalidArgument("not a permutation".into()));
            }
            inverse[p] = v;
        }
        Ok(Self {
            adj: self.adj.permuted(&inverse),
            labels: None,
        })
    }

    pub fn disjoint_union(&self, other: &Self) -> Self {
        let (a, b) = (self.n(), other.n());
        let adj = Matrix::from_fn(a + b, a + b, |i, j| match (i < a, j < a) {
            (true, true) => self.adj[(i, j)].clone(),
            (false, false) => other.adj[(i - a, j - a)].clone(),
            _ => T::zero(),
        });
        Self { adj, labels: None }
    }

    pub fn to_text(&self) -> String {
        let edges = self.edges();
        let weighted = !self.is_unweighted();
        let mut s = format!(
            "{} {}{}\n",
            self.n(),
            edges.len(),
            if weighted { " weighted" } else { "" }
        );
        for (u, v, w) in edges {
            if weighted {
                s.push_str(&format!("{u} {v} {}\n", w.to_text()));
            } else {
                s.push_str(&format!("{u} {v}\n"));
            }
        }
        s
    }

    pub fn parse_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::Parse("empty input".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        let (n, m, weighted) = match fields.as_slice() {
            [n, m] => (*n, *m, false),
            [n, m, "weighted"] => (*n, *m, true),
            _ => return Err(Error::Parse(format!("bad header `{header}`"))),
        };
        let n: usize = n.parse().map_err(|_| Error::Parse(format!("bad vertex count `{n}`")))?;
        let m: usize = m.parse().map_err(|_| Error::Parse(format!("bad edge count `{m}`")))?;
        let mut edges = Vec::with_capacity(m);
        for k in 0..m {
            let line = lines
                .next()
                .ok_or_else(|| Error::Parse(format!("expected {m} edges, found {k}")))?;
            let f: Vec<&str> = line.split_whitespace().collect();
            let parse_v = |s: &str| {
                s.parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad vertex `{s}`")))
            };
            let edge = match (f.as_slice(), weighted) {
                ([u, v], false) => (parse_v(u)?, parse_v(v)?, None),
                ([u, v, w], true) => (parse_v(u)?, parse_v(v)?, Some(T::parse_text(w)?)),
                _ => return Err(Error::Parse(format!("bad edge line `{line}`"))),
            };
            edges.push(edge);
        }
        if let Some(extra) = lines.next() {
            return Err(Error::Parse(format!("trailing content `{extra}`")));
        }
        Self::from_edges(n, edges)
    }
}

/// Standard graph families, all with unit weights.
pub mod families {
    use super::*;

    fn build<T: Scalar>(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Graph<T> {
        Graph::from_edges(n, edges.into_iter().map(|(u, v)| (u, v, None)))
            .expect("family construction is valid")
    }

    pub fn path<T: Scalar>(n: usize) -> Graph<T> {
        build(n, (1..n).map(|i| (i - 1, i)))
    }

    pub fn cycle<T: Scalar>(n: usize) -> Graph<T> {
        assert!(n >= 3);
        build(n, (0..n).map(|i| (i, (i + 1) % n)))
    }

    pub fn complete<T: Scalar>(n: usize) -> Graph<T> {
        build(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))))
    }

    /// Sides `0..r` and `r..r+s`.
    pub fn complete_bipartite<T: Scalar>(r: usize, s: usize) -> Graph<T> {
        build(r + s, (0..r).flat_map(|i| (r..r + s).map(move |j| (i, j))))
    }

    /// Star with centre 0.
    pub fn star<T: Scalar>(leaves: usize) -> Graph<T> {
        complete_bipartite(1, leaves)
    }

    /// The `d`-cube on bit strings.
    pub fn hypercube<T: Scalar>(d: u32) -> Graph<T> {
        let n = 1usize << d;
        build(
            n,
            (0..n).flat_map(|v| (0..d).map(move |b| (v, v ^ (1 << b))).filter(|(u, w)| u < w)),
        )
    }

    pub fn petersen<T: Scalar>() -> Graph<T> {
        let outer = (0..5).map(|i| (i, (i + 1) % 5));
        let spokes = (0..5).map(|i| (i, i + 5));
        let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
        build(10, outer.chain(spokes).chain(inner))
    }

    pub fn circulant<T: Scalar>(n: usize, jumps: &[usize]) -> Graph<T> {
        let mut set = std::collections::BTreeSet::new();
        for i in 0..n {
            for &j in jumps {
                let k = (i + j) % n;
                if k != i {
                    set.insert((i.min(k), i.max(k)));
                }
            }
        }
        build(n, set)
    }
}

/// The 13-vertex graph whose level partition, weighted 1 on the white
/// vertices and 2 on the middle black vertex, has the 4-cube's level quotient.
///
/// Levels: `{0}`, `{1..=4}`, `{5, 6, 7}` (6 is black), `{8..=11}`, `{12}`.
pub fn collapsed_cube() -> Graph<Rational> {
    let mut edges = vec![];
    for q in 1..=4 {
        edges.push((0, q));
        edges.push((q + 7, 12));
    }
    // Vertices 1, 2 (and 8, 9) see {5, 6}; 3, 4 (and 10, 11) see {6, 7}.
    for (q, pair) in [(1, [5, 6]), (2, [5, 6]), (3, [6, 7]), (4, [6, 7])] {
        for a in pair {
            edges.push((q, a));
            edges.push((q + 7, a));
        }
    }
    Graph::from_edges(13, edges.into_iter().map(|(u, v)| (u, v, None))).expect("valid graph")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rat;

    #[test]
    fn triangle_adjacency() {
        let g = Graph::<Rational>::from_edges(3, [(0, 1, None), (1, 2, None), (2, 0, None)]).unwrap();
        let one = rat(1, 1);
        let zero = rat(0, 1);
        let expected = Matrix::from_rows(vec![
            vec![zero.clone(), one.clone(), one.clone()],
            vec![one.clone(), zero.clone(), one.clone()],
            vec![one.clone(), one.clone(), zero],
        ])
        .unwrap();
        assert_eq!(g.adj(), &expected);
    }

    #[test]
    fn single_loop() {
        let g = Graph::<f64>::from_edges(1, [(0, 0, Some(1.0))]).unwrap();
        assert_eq!(g.adj()[(0, 0)], 1.0);
    }

    #[test]
    fn weighted_pair_with_loop() {
        let s = 2f64.sqrt();
        let g = Graph::from_edges(2, [(0, 1, Some(s)), (1, 1, Some(1.0))]).unwrap();
        let expected = Matrix::from_rows(vec![vec![0.0, s], vec![s, 1.0]]).unwrap();
        assert_eq!(g.adj(), &expected);
    }

    #[test]
    fn edge_errors() {
        assert_eq!(
            Graph::<f64>::from_edges(2, [(0, 2, None)]).unwrap_err(),
            Error::VertexOutOfRange { vertex: 2, n: 2 }
        );
        assert_eq!(
            Graph::<f64>::from_edges(3, [(0, 1, None), (1, 0, None)]).unwrap_err(),
            Error::DuplicateEdge { u: 1, v: 0 }
        );
        assert_eq!(
            Graph::<f64>::from_edges(2, [(0, 1, Some(f64::INFINITY))]).unwrap_err(),
            Error::NonFiniteWeight
        );
        assert_eq!(Graph::<f64>::from_edges(0, []).unwrap_err(), Error::EmptyGraph);
    }

    #[test]
    fn rejects_asymmetric_matrix() {
        let m = Matrix::from_rows(vec![vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        assert_eq!(Graph::new(m).unwrap_err(), Error::NotSymmetric { i: 0, j: 1 });
    }

    #[test]
    fn text_format() {
        let g = Graph::<Rational>::parse_text("3 2\n0 1\n1 2\n").unwrap();
        assert_eq!(g, families::path(3));
        let w = Graph::<Rational>::parse_text("2 2 weighted\n0 1 0.5\n1 1 3/7\n").unwrap();
        assert_eq!(w.weight(0, 1), &rat(1, 2));
        assert_eq!(w.weight(1, 1), &rat(3, 7));
        assert_eq!(Graph::parse_text(&w.to_text()).unwrap(), w);
        assert!(Graph::<Rational>::parse_text("3 2\n0 1\n").is_err());
        assert!(Graph::<Rational>::parse_text("2 1\n0 1 2\n").is_err());
        assert!(Graph::<Rational>::parse_text("2 1\n0 1\n1 0\n").is_err());
    }

    #[test]
    fn families_have_expected_degrees() {
        let q4 = families::hypercube::<f64>(4);
        assert_eq!(q4.n(), 16);
        assert!(q4.adj().row_sums().iter().all(|&d| d == 4.0));
        let p = families::petersen::<f64>();
        assert!(p.adj().row_sums().iter().all(|&d| d == 3.0));
        let g = collapsed_cube();
        assert_eq!(g.edges().len(), 24);
        assert!(g.is_connected());
        assert!(!families::cycle::<f64>(3).disjoint_union(&families::cycle(3)).is_connected());
    }

    proptest::proptest! {
        #[test]
        fn text_round_trip_is_exact(
            n in 1usize..7,
            raw in proptest::collection::vec((0usize..7, 0usize..7, -50i64..50, 1i64..9), 0..12)
        ) {
            let mut seen = HashSet::new();
            let edges: Vec<Edge<Rational>> = raw
                .into_iter()
                .filter(|&(u, v, p, _)| u < n && v < n && p != 0 && seen.insert((u.min(v), u.max(v))))
                .map(|(u, v, p, q)| (u, v, Some(rat(p, q))))
                .collect();
            let g = Graph::from_edges(n, edges).unwrap();
            proptest::prop_assert_eq!(Graph::parse_text(&g.to_text()).unwrap(), g);
        }
    }
}
