use super::map::MapRecord;
use crate::error::{Error, Result};

/// Filler for codes shorter than the widest code in a map. It is outside
/// `[A-Z0-9]` and counts as an ordinary alphabet in column entropy.
pub const PAD: u8 = b'_';

/// The m x n alphabet matrix of a map: one row per candidate code, one
/// column per character position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeMatrix {
    rows: Vec<Vec<u8>>,
    n: usize,
}

impl CodeMatrix {
    /// Rows keep the given order; shorter codes are right-padded with [`PAD`].
    pub fn from_codes<S: AsRef<str>>(codes: &[S]) -> Option<CodeMatrix> {
        let n = codes.iter().map(|c| c.as_ref().len()).max()?;
        let rows = codes
            .iter()
            .map(|c| {
                let mut row = c.as_ref().as_bytes().to_vec();
                row.resize(n, PAD);
                row
            })
            .collect();
        Some(CodeMatrix { rows, n })
    }

    pub fn rows(&self) -> &[Vec<u8>] {
        &self.rows
    }

    pub fn m(&self) -> usize {
        self.rows.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pad(&self) -> u8 {
        PAD
    }

    pub fn column(&self, j: usize) -> Vec<u8> {
        self.rows.iter().map(|r| r[j]).collect()
    }

    pub fn columns(&self) -> impl Iterator<Item = Vec<u8>> + '_ {
        (0..self.n).map(|j| self.column(j))
    }
}

pub fn build_matrix(map: &MapRecord) -> Result<CodeMatrix> {
    let codes: Vec<&str> = map.target_codes().collect();
    CodeMatrix::from_codes(&codes).ok_or_else(|| Error::EmptyMap {
        source_code: map.source.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gem_io::{group_maps, parse_gem_str};

    #[test]
    fn example_matrix_is_8_by_7() {
        let text = include_str!("../../data/map_0052.txt");
        let map = &group_maps(parse_gem_str(text, "t").unwrap()).unwrap()[0];
        let m = build_matrix(map).unwrap();
        assert_eq!((m.m(), m.n()), (8, 7));
        assert!(m.rows().iter().all(|r| !r.contains(&PAD)));
        assert_eq!(m.rows()[3], b"02H43KZ");
        assert_eq!(m.column(2), b"HHHHHPPP");
    }

    #[test]
    fn pads_short_codes() {
        let m = CodeMatrix::from_codes(&["E10", "E1065"]).unwrap();
        assert_eq!(m.n(), 5);
        assert_eq!(m.rows()[0], [b'E', b'1', b'0', PAD, PAD]);
        assert_eq!(m.rows()[1], b"E1065");
    }

    #[test]
    fn singleton() {
        let m = CodeMatrix::from_codes(&["86"]).unwrap();
        assert_eq!((m.m(), m.n()), (1, 2));
    }

    #[test]
    fn empty_map_errors() {
        let map = &group_maps(parse_gem_str("0001 NoPCS 11000", "t").unwrap()).unwrap()[0];
        assert!(matches!(build_matrix(map), Err(Error::EmptyMap { .. })));
    }
}
