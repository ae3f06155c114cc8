use std::collections::{BTreeMap, VecDeque};

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::Serialize;

use super::graph::WordGraph;
use crate::error::{Error, Result};

pub const DEFAULT_TOLERANCE: f64 = 1e-10;
pub const DEFAULT_MAX_ITERATIONS: usize = 1000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Centrality {
    /// Unit-norm scores; words outside the largest component score 0.
    pub scores: BTreeMap<String, f64>,
    /// Rayleigh quotient of the converged vector on the largest component.
    pub eigenvalue: f64,
    pub iterations: usize,
}

impl Centrality {
    /// Words by descending score, ties by word.
    pub fn ranked(&self) -> Vec<(String, f64)> {
        let mut v: Vec<(String, f64)> = self.scores.iter().map(|(w, &s)| (w.clone(), s)).collect();
        v.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        v
    }
}

type Adjacency = Vec<Vec<(usize, f64)>>;

fn adjacency(graph: &WordGraph) -> (Vec<&str>, Adjacency) {
    let words: Vec<&str> = graph.nodes.keys().map(String::as_str).collect();
    let index: BTreeMap<&str, usize> = words.iter().enumerate().map(|(i, w)| (*w, i)).collect();
    let mut adj = vec![Vec::new(); words.len()];
    for ((a, b), &w) in &graph.edges {
        let (i, j) = (index[a.as_str()], index[b.as_str()]);
        adj[i].push((j, w as f64));
        adj[j].push((i, w as f64));
    }
    (words, adj)
}

/// Node indices of the largest connected component; ties go to the component
/// holding the alphabetically first word.
fn largest_component(adj: &Adjacency) -> Vec<usize> {
    let mut seen = vec![false; adj.len()];
    let mut best: Vec<usize> = Vec::new();
    for start in 0..adj.len() {
        if seen[start] {
            continue;
        }
        let mut comp = vec![start];
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for &(v, _) in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    comp.push(v);
                    queue.push_back(v);
                }
            }
        }
        if comp.len() > best.len() {
            best = comp;
        }
    }
    best.sort_unstable();
    best
}

const BLOCK: usize = 4;

fn multiply_shifted(adj: &Adjacency, local: &[usize], members: &[usize], x: &[f64]) -> Vec<f64> {
    members
        .iter()
        .enumerate()
        .map(|(i, &u)| {
            adj[u]
                .iter()
                .fold(x[i], |acc, &(v, w)| acc + w * x[local[v]])
        })
        .collect()
}

/// Starting block: uniform first column, fixed pseudo-random rest.
fn start_block(k: usize, p: usize) -> DMatrix<f64> {
    DMatrix::from_fn(k, p, |i, j| {
        if j == 0 {
            1.0
        } else {
            ((i as f64 + 1.0) * (j as f64 * 0.7548776662 + 0.5698402910)).fract() - 0.5
        }
    })
    .qr()
    .q()
}

/// Eigenvector centrality of the largest component by block power iteration.
///
/// Iterates an orthonormal block with `A + I`, which has the same
/// eigenvectors as `A` but a strictly dominant eigenvalue on bipartite graphs
/// too, and extracts the leading Ritz vector each step. The first block
/// vector starts uniform. Converged when the leading vector moves by less
/// than `tolerance`.
pub fn eigenvector_centrality(graph: &WordGraph, tolerance: f64, max_iterations: usize) -> Result<Centrality> {
    if !(tolerance > 0.0) {
        return Err(Error::InvalidTolerance(tolerance));
    }
    let (words, adj) = adjacency(graph);
    let mut scores: BTreeMap<String, f64> = words.iter().map(|w| (w.to_string(), 0.0)).collect();
    if words.is_empty() {
        return Ok(Centrality {
            scores,
            eigenvalue: 0.0,
            iterations: 0,
        });
    }

    let members = largest_component(&adj);
    let mut local = vec![usize::MAX; words.len()];
    for (k, &u) in members.iter().enumerate() {
        local[u] = k;
    }
    let k = members.len();
    let p = k.min(BLOCK);
    let mut q = start_block(k, p);
    let mut x = DVector::from_element(k, 1.0 / (k as f64).sqrt());
    let mut diff = f64::INFINITY;
    let mut iterations = 0;
    while iterations < max_iterations {
        iterations += 1;
        let mut w = DMatrix::zeros(k, p);
        for j in 0..p {
            let col: Vec<f64> = q.column(j).iter().copied().collect();
            w.set_column(j, &DVector::from_vec(multiply_shifted(&adj, &local, &members, &col)));
        }
        let t = q.transpose() * &w;
        let eig = SymmetricEigen::new((&t + t.transpose()) * 0.5);
        let top = eig.eigenvalues.imax();
        let mut y = &q * eig.eigenvectors.column(top);
        if y.sum() < 0.0 {
            y.neg_mut();
        }
        y /= y.norm();
        diff = (&y - &x).norm();
        x = y;
        if diff < tolerance {
            break;
        }
        q = w.qr().q();
    }
    if diff >= tolerance {
        return Err(Error::NonConvergence {
            iterations,
            residual: diff,
        });
    }

    let xs: Vec<f64> = x.iter().copied().collect();
    let ax = multiply_shifted(&adj, &local, &members, &xs);
    let eigenvalue = ax.iter().zip(&xs).fold(0.0, |a, (p, q)| a + p * q) - 1.0;
    for (i, &u) in members.iter().enumerate() {
        scores.insert(words[u].to_string(), xs[i].max(0.0));
    }
    Ok(Centrality {
        scores,
        eigenvalue,
        iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(edges: &[(&str, &str, usize)]) -> WordGraph {
        let mut g = WordGraph::default();
        for &(a, b, w) in edges {
            g.add_edge(a, b, w);
        }
        g
    }

    fn run(g: &WordGraph) -> Centrality {
        eigenvector_centrality(g, DEFAULT_TOLERANCE, DEFAULT_MAX_ITERATIONS).unwrap()
    }

    #[test]
    fn star_center_is_maximal() {
        let c = run(&graph(&[("hub", "a", 1), ("hub", "b", 1), ("hub", "c", 1), ("hub", "d", 1)]));
        let hub = c.scores["hub"];
        for leaf in ["a", "b", "c", "d"] {
            assert!(hub > c.scores[leaf]);
        }
        assert!((c.eigenvalue - 2.0).abs() < 1e-9);
    }

    #[test]
    fn complete_graph_uniform() {
        let words = ["a", "b", "c", "d", "e"];
        let mut edges = Vec::new();
        for (i, a) in words.iter().enumerate() {
            for b in &words[i + 1..] {
                edges.push((*a, *b, 1));
            }
        }
        let c = run(&graph(&edges));
        let expected = 1.0 / 5f64.sqrt();
        assert!(c.scores.values().all(|s| (s - expected).abs() < 1e-9));
    }

    #[test]
    fn path_matches_hand_eigenvector() {
        // adjacency [[0,1,0],[1,0,1],[0,1,0]]: λ = √2, x ∝ (1, √2, 1)
        let c = run(&graph(&[("a", "b", 1), ("b", "c", 1)]));
        let s2 = 2f64.sqrt();
        let expected = [1.0 / 2.0, s2 / 2.0, 1.0 / 2.0];
        for (w, e) in ["a", "b", "c"].iter().zip(expected) {
            assert!((c.scores[*w] - e).abs() < 1e-9);
        }
        assert!((c.eigenvalue - s2).abs() < 1e-9);
    }

    #[test]
    fn off_component_words_score_zero() {
        let mut g = graph(&[("a", "b", 2), ("b", "c", 1), ("x", "y", 5)]);
        g.nodes.insert("lonely".into(), 1);
        let c = run(&g);
        assert_eq!(c.scores["x"], 0.0);
        assert_eq!(c.scores["y"], 0.0);
        assert_eq!(c.scores["lonely"], 0.0);
        assert!(c.scores["b"] > 0.0);
    }

    #[test]
    fn scaling_weights_changes_nothing() {
        let g1 = graph(&[("a", "b", 1), ("b", "c", 2), ("c", "a", 3), ("c", "d", 1)]);
        let g3 = graph(&[("a", "b", 3), ("b", "c", 6), ("c", "a", 9), ("c", "d", 3)]);
        let (c1, c3) = (run(&g1), run(&g3));
        for (w, s) in &c1.scores {
            assert!((s - c3.scores[w]).abs() < 1e-8);
        }
    }

    #[test]
    fn non_convergence_reported() {
        let g = graph(&[("a", "b", 1), ("b", "c", 1), ("c", "d", 1), ("d", "e", 1), ("a", "c", 1)]);
        match eigenvector_centrality(&g, 1e-15, 2) {
            Err(Error::NonConvergence { iterations: 2, residual }) => assert!(residual > 0.0),
            other => panic!("{other:?}"),
        }
        assert!(eigenvector_centrality(&g, 0.0, 10).is_err());
    }

    #[test]
    fn empty_graph() {
        assert!(run(&WordGraph::default()).scores.is_empty());
    }
}
