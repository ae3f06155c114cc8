//! Crosswalk ingestion: flags, entries, per-source maps, the alphabet matrix
//! and the auxiliary class/description/frequency tables.

mod entry;
mod flag;
mod map;
mod matrix;
mod tables;

pub use entry::{
    is_no_match_sentinel, normalize_code, parse_gem_file, parse_gem_line, parse_gem_str,
    GemEntry, Target, MAX_CODE_LEN, NO_MATCH_SENTINELS,
};
pub use flag::{parse_flag, Flag, FlagError};
pub use map::{group_maps, ChoiceList, MapRecord, Scenario};
pub use matrix::{build_matrix, CodeMatrix, PAD};
pub use tables::{
    assign_class, load_class_defs, load_descriptions, load_frequencies, ClassDef, ClassRange,
    DescriptionTable, FrequencyTable, UNCLASSIFIED,
};

use std::fs::File;
use std::io::BufReader;
use std::path::Path;

use crate::error::{Error, Result};

/// Parses and groups a crosswalk file from disk.
pub fn read_maps(path: &Path) -> Result<Vec<MapRecord>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let entries = parse_gem_file(BufReader::new(file), &path.display().to_string())?;
    group_maps(entries)
}

/// Map 0052 (eight candidate codes, one scenario of two choice lists).
pub const MAP_0052_FIXTURE: &str = include_str!("../../data/map_0052.txt");
