use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

/// Undirected word co-occurrence graph. Edge keys are ordered pairs with the
/// smaller word first.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct WordGraph {
    pub nodes: BTreeMap<String, usize>,
    pub edges: BTreeMap<(String, String), usize>,
}

impl WordGraph {
    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn weight(&self, a: &str, b: &str) -> usize {
        let key = if a <= b {
            (a.to_string(), b.to_string())
        } else {
            (b.to_string(), a.to_string())
        };
        self.edges.get(&key).copied().unwrap_or(0)
    }

    /// Adds `weight` to the edge between `a` and `b`, creating missing
    /// endpoints with count 0. Self-loops are ignored.
    pub fn add_edge(&mut self, a: &str, b: &str, weight: usize) {
        if a == b || weight == 0 {
            return;
        }
        self.nodes.entry(a.to_string()).or_insert(0);
        self.nodes.entry(b.to_string()).or_insert(0);
        let key = if a < b {
            (a.to_string(), b.to_string())
        } else {
            (b.to_string(), a.to_string())
        };
        *self.edges.entry(key).or_insert(0) += weight;
    }
}

/// Node count = descriptions containing the word; edge weight = descriptions
/// containing both words.
pub fn build_cooccurrence_graph<S: AsRef<str>>(token_lists: &[Vec<S>]) -> WordGraph {
    let mut graph = WordGraph::default();
    for tokens in token_lists {
        let words: BTreeSet<&str> = tokens.iter().map(AsRef::as_ref).collect();
        for w in &words {
            *graph.nodes.entry(w.to_string()).or_insert(0) += 1;
        }
        let words: Vec<&str> = words.into_iter().collect();
        for (i, a) in words.iter().enumerate() {
            for b in &words[i + 1..] {
                *graph.edges.entry((a.to_string(), b.to_string())).or_insert(0) += 1;
            }
        }
    }
    graph
}

/// Words by descending count, ties by word.
pub fn word_frequencies(graph: &WordGraph) -> Vec<(String, usize)> {
    let mut freq: Vec<(String, usize)> = graph.nodes.iter().map(|(w, &c)| (w.clone(), c)).collect();
    freq.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    freq
}
