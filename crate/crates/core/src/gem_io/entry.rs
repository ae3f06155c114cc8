use std::fmt;
use std::io::BufRead;

use serde::{Deserialize, Serialize};

use super::flag::{parse_flag, Flag};
use crate::error::{Error, Result};

/// Target fields that mean "no equivalent code" in published crosswalks.
pub const NO_MATCH_SENTINELS: [&str; 2] = ["NODX", "NOPCS"];

pub const MAX_CODE_LEN: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "text", rename_all = "snake_case")]
pub enum Target {
    Code(String),
    /// Keeps the text as written so the entry serializes back unchanged.
    NoMatch(String),
}

impl Target {
    pub fn code(&self) -> Option<&str> {
        match self {
            Target::Code(c) => Some(c),
            Target::NoMatch(_) => None,
        }
    }

    pub fn is_no_match(&self) -> bool {
        matches!(self, Target::NoMatch(_))
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::Code(c) | Target::NoMatch(c) => f.write_str(c),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GemEntry {
    pub source: String,
    pub target: Target,
    pub flag: Flag,
    pub line_number: usize,
}

impl fmt::Display for GemEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.source, self.target, self.flag)
    }
}

pub fn is_no_match_sentinel(text: &str) -> bool {
    NO_MATCH_SENTINELS
        .iter()
        .any(|s| s.eq_ignore_ascii_case(text))
}

/// Uppercases `raw` and checks it is 1..=8 characters of `[A-Z0-9]`.
pub fn normalize_code(raw: &str) -> Option<String> {
    let code = raw.trim().to_ascii_uppercase();
    let valid = !code.is_empty()
        && code.len() <= MAX_CODE_LEN
        && code.bytes().all(|b| b.is_ascii_uppercase() || b.is_ascii_digit());
    valid.then_some(code)
}

/// Parses one non-blank crosswalk line: `SOURCE TARGET FLAG`.
pub fn parse_gem_line(line: &str, origin: &str, line_number: usize) -> Result<GemEntry> {
    let parse_err = |message: String| Error::Parse {
        origin: origin.to_string(),
        line: line_number,
        message,
    };

    let fields: Vec<&str> = line.split_whitespace().collect();
    if fields.len() != 3 {
        return Err(parse_err(format!(
            "expected 3 fields (source target flag), found {}",
            fields.len()
        )));
    }
    let source = normalize_code(fields[0])
        .ok_or_else(|| parse_err(format!("invalid source code {:?}", fields[0])))?;
    let flag = parse_flag(fields[2]).map_err(|e| {
        if e.is_structural() {
            Error::Structural {
                context: format!("{origin}:{line_number}"),
                message: e.to_string(),
            }
        } else {
            parse_err(e.to_string())
        }
    })?;

    let raw_target = fields[1];
    let target = if is_no_match_sentinel(raw_target) {
        if flag.combination {
            return Err(Error::Structural {
                context: format!("{origin}:{line_number}"),
                message: format!(
                    "no-match target {raw_target} carries combination flag {flag}"
                ),
            });
        }
        Target::NoMatch(raw_target.to_string())
    } else {
        let code = normalize_code(raw_target)
            .ok_or_else(|| parse_err(format!("invalid target code {raw_target:?}")))?;
        if flag.no_map {
            Target::NoMatch(code)
        } else {
            Target::Code(code)
        }
    };

    Ok(GemEntry {
        source,
        target,
        flag,
        line_number,
    })
}

/// Reads a whitespace-separated crosswalk file. Blank lines are skipped; an
/// empty stream yields an empty list.
pub fn parse_gem_file<R: BufRead>(mut reader: R, origin: &str) -> Result<Vec<GemEntry>> {
    let mut entries = Vec::new();
    let mut buf = Vec::new();
    let mut line_number = 0;
    loop {
        buf.clear();
        let read = reader
            .read_until(b'\n', &mut buf)
            .map_err(|e| Error::io(origin, e))?;
        if read == 0 {
            break;
        }
        line_number += 1;
        let text = std::str::from_utf8(&buf).map_err(|_| Error::Parse {
            origin: origin.to_string(),
            line: line_number,
            message: "line is not valid UTF-8".to_string(),
        })?;
        let text = if line_number == 1 {
            text.trim_start_matches('\u{feff}')
        } else {
            text
        };
        if text.trim().is_empty() {
            continue;
        }
        entries.push(parse_gem_line(text, origin, line_number)?);
    }
    Ok(entries)
}

pub fn parse_gem_str(text: &str, origin: &str) -> Result<Vec<GemEntry>> {
    parse_gem_file(text.as_bytes(), origin)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_example_row() {
        let e = parse_gem_line("0052 02H43JZ 10000", "t", 1).unwrap();
        assert_eq!(e.source, "0052");
        assert_eq!(e.target, Target::Code("02H43JZ".into()));
        assert_eq!(e.flag.to_string(), "10000");
        assert_eq!(e.line_number, 1);
    }

    #[test]
    fn empty_stream() {
        assert!(parse_gem_str("", "t").unwrap().is_empty());
        assert!(parse_gem_str("\n  \n\t\n", "t").unwrap().is_empty());
    }

    #[test]
    fn tolerates_tabs_runs_and_trailing_space() {
        let entries = parse_gem_str("0052\t\t02H43JZ   10000   \r\n\n8609 0HB8XZZ 10000\n", "t").unwrap();
        assert_eq!(entries.len(), 2);
        assert_eq!(entries[1].line_number, 3);
    }

    #[test]
    fn uppercases_codes() {
        let e = parse_gem_line("e9990 y36891a 10000", "t", 1).unwrap();
        assert_eq!(e.source, "E9990");
        assert_eq!(e.target.code(), Some("Y36891A"));
    }

    #[test]
    fn sentinels() {
        let e = parse_gem_line("0001 NoPCS 11000", "t", 1).unwrap();
        assert_eq!(e.target, Target::NoMatch("NoPCS".into()));
        assert_eq!(e.to_string(), "0001 NoPCS 11000");
        let e = parse_gem_line("7999 nodx 10000", "t", 1).unwrap();
        assert!(e.target.is_no_match());
    }

    #[test]
    fn no_map_flag_forces_sentinel() {
        let e = parse_gem_line("0001 0000000 11000", "t", 1).unwrap();
        assert!(e.target.is_no_match());
    }

    #[test]
    fn sentinel_with_combination_is_structural() {
        let err = parse_gem_line("0001 NoPCS 10111", "t", 4).unwrap_err();
        assert!(matches!(err, Error::Structural { .. }), "{err}");
    }

    #[test]
    fn errors_name_file_and_line() {
        let err = parse_gem_str("0052 02H43JZ 10000\n0052 02H43JZ\n", "gem.txt").unwrap_err();
        match err {
            Error::Parse { origin, line, .. } => {
                assert_eq!(origin, "gem.txt");
                assert_eq!(line, 2);
            }
            other => panic!("unexpected {other}"),
        }
        let err = parse_gem_str("00.52 02H43JZ 10000", "gem.txt").unwrap_err();
        assert!(err.to_string().contains("gem.txt:1"), "{err}");
        let err = parse_gem_str("0052 02H43JZ 1000x", "gem.txt").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        let err = parse_gem_str("0052 02H43JZ 10100", "gem.txt").unwrap_err();
        assert!(matches!(err, Error::Structural { .. }));
        let err = parse_gem_str("0052 0123456789 10000", "gem.txt").unwrap_err();
        assert!(matches!(err, Error::Parse { .. }));
    }
}
