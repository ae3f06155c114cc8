//! Word networks from code descriptions: tokenization, co-occurrence graph,
//! eigenvector centrality and exports.

mod centrality;
mod export;
mod graph;
mod tokenize;

pub use centrality::{eigenvector_centrality, Centrality, DEFAULT_MAX_ITERATIONS, DEFAULT_TOLERANCE};
pub use export::{parse_dot, read_edge_csv, to_dot, write_edge_csv, write_frequency_csv};
pub use graph::{build_cooccurrence_graph, word_frequencies, WordGraph};
pub use tokenize::{
    default_residuals, default_stopwords, parse_word_list, tokenize, DEFAULT_RESIDUALS, MIN_TOKEN_LEN,
};
