//! Graph generators and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashSet;

use equiquot::numeric::rat;
use equiquot::{Graph, Matrix, Partition, Rational};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_permutation<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

pub fn erdos_renyi(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph<Rational> {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v, None));
            }
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

/// `k` cells of `s` vertices each. Inside a cell: a circulant with random
/// jumps; between two cells: a random union of shifted perfect matchings.
/// The cells form an equitable partition, so these graphs have plenty of
/// nontrivial equitable partitions.
pub fn random_lift(rng: &mut ChaCha8Rng, k: usize, s: usize) -> Graph<Rational> {
    let mut edges: HashSet<(usize, usize)> = HashSet::new();
    for c in 0..k {
        for jump in 1..=s / 2 {
            if rng.gen_bool(0.5) {
                for x in 0..s {
                    let (u, v) = (c * s + x, c * s + (x + jump) % s);
                    edges.insert((u.min(v), u.max(v)));
                }
            }
        }
        for d in c + 1..k {
            for shift in 0..s {
                if rng.gen_bool(0.35) {
                    for x in 0..s {
                        edges.insert((c * s + x, d * s + (x + shift) % s));
                    }
                }
            }
        }
    }
    let mut edges: Vec<_> = edges.into_iter().collect();
    edges.sort_unstable();
    let g = Graph::from_edges(k * s, edges.into_iter().map(|(u, v)| (u, v, None))).unwrap();
    let perm = random_permutation(rng, k * s);
    g.relabeled(&perm).unwrap()
}

/// A random equitable partition: refine a random initial coloring.
pub fn random_equitable(rng: &mut ChaCha8Rng, g: &Graph<Rational>) -> Partition {
    let colors = rng.gen_range(1..=3usize);
    let labels: Vec<usize> = (0..g.n()).map(|_| rng.gen_range(0..colors)).collect();
    let init = Partition::from_labels(&labels);
    equiquot::refine::coarsest_equitable(g.adj(), Some(&init), 0.0)
        .unwrap()
        .partition
}

fn edge_index(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                go(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// One representative of every isomorphism class of connected simple graphs
/// on exactly `n` vertices, by minimizing the edge bitmask over all
/// relabelings.
pub fn connected_graphs(n: usize) -> Vec<Graph<Rational>> {
    let pairs = edge_index(n);
    let index = |u: usize, v: usize| pairs.iter().position(|&p| p == (u.min(v), u.max(v))).unwrap();
    let perms = permutations(n);
    let remap: Vec<Vec<usize>> = perms
        .iter()
        .map(|p| pairs.iter().map(|&(u, v)| index(p[u], p[v])).collect())
        .collect();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for mask in 0u32..(1u32 << pairs.len()) {
        let canon = remap
            .iter()
            .map(|r| {
                (0..pairs.len())
                    .filter(|&e| mask >> e & 1 == 1)
                    .fold(0u32, |acc, e| acc | 1 << r[e])
            })
            .min()
            .unwrap();
        if !seen.insert(canon) {
            continue;
        }
        let edges = (0..pairs.len())
            .filter(|&e| canon >> e & 1 == 1)
            .map(|e| (pairs[e].0, pairs[e].1, None));
        let g = Graph::from_edges(n, edges).unwrap();
        if g.is_connected() {
            out.push(g);
        }
    }
    out
}

/// Canonical form of a combinatorial quotient with cell sizes given as
/// fractions of the vertex count: the lexicographically least
/// (sizes, matrix) over all cell orders.
pub fn quotient_canon(b: &Matrix<Rational>, sizes: &[usize], n: usize) -> Vec<Rational> {
    let k = sizes.len();
    permutations(k)
        .into_iter()
        .map(|p| {
            let mut key: Vec<Rational> = p.iter().map(|&i| rat(sizes[i] as i64, n as i64)).collect();
            for &i in &p {
                for &j in &p {
                    key.push(b[(i, j)].clone());
                }
            }
            key
        })
        .min()
        .unwrap()
}

/// Named small graphs used as a corpus.
pub fn named_corpus() -> Vec<(String, Graph<Rational>)> {
    use equiquot::families::*;
    let mut out: Vec<(String, Graph<Rational>)> = Vec::new();
    for n in 3..=8 {
        out.push((format!("C{n}"), cycle(n)));
        out.push((format!("P{n}"), path(n)));
    }
    for n in 2..=6 {
        out.push((format!("K{n}"), complete(n)));
    }
    for (r, s) in [(1, 3), (1, 5), (2, 2), (2, 3), (2, 4), (3, 3), (1, 7), (3, 4)] {
        out.push((format!("K{r},{s}"), complete_bipartite(r, s)));
    }
    out.push(("Q3".into(), hypercube(3)));
    out.push(("Circ8(1,3)".into(), circulant(8, &[1, 3])));
    out.push(("Circ7(1,2)".into(), circulant(7, &[1, 2])));
    let c3 = cycle::<Rational>(3);
    out.push(("2C3".into(), c3.disjoint_union(&c3)));
    out.push(("K2+P3".into(), complete::<Rational>(2).disjoint_union(&path(3))));
    out
}
