//! Entropic complexity of medical code crosswalks.
//!
//! A crosswalk (general equivalence mapping) relates each code of an old
//! coding system to candidate codes of a new one. For every source code this
//! crate computes
//!
//! * `H(A)`, the summed per-position alphabet entropy of the candidate codes,
//! * `H(B) = log2(v)`, where `v` counts valid representations (stand-alone
//!   codes plus every ordered pick across a scenario's choice lists),
//! * `UR = log2(m)`, the candidate-count baseline,
//!
//! then standardizes them over the corpus, aggregates and ranks them by
//! clinical class, measures ranking agreement with Kendall's tau-b, isolates
//! outliers, and builds word networks from outlier descriptions.
//!
//! ```
//! use gem_entropy::{gem_io, entropy};
//!
//! let entries = gem_io::parse_gem_str(gem_io::MAP_0052_FIXTURE, "example").unwrap();
//! let map = &gem_io::group_maps(entries).unwrap()[0];
//! let scores = entropy::score_map(map, None).unwrap();
//! assert_eq!(scores.v, 9);
//! assert!((scores.h_a - 4.26).abs() < 0.01);
//! ```

pub mod analysis;
pub mod cli;
pub mod entropy;
pub mod error;
pub mod gem_io;
pub mod textnet;

pub use entropy::{Denominator, MapScores, Measure, NormalizedScores, WeightVector};
pub use error::{Error, Result};
pub use gem_io::{ClassDef, CodeMatrix, Flag, GemEntry, MapRecord};
