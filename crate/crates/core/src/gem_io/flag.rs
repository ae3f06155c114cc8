use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// The five supplemental digits attached to every crosswalk entry.
///
/// Digit 1 marks an approximate match, digit 2 marks a source code with no
/// target, digit 3 marks a combination entry, and digits 4 and 5 give the
/// scenario number and the choice-list position inside that scenario.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Flag {
    pub approximate: bool,
    pub no_map: bool,
    pub combination: bool,
    pub scenario: u8,
    pub choice_list: u8,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FlagError {
    #[error("malformed flag {0:?}: expected exactly 5 digits")]
    Malformed(String),
    #[error("inconsistent flag {flag}: {reason}")]
    Inconsistent { flag: String, reason: &'static str },
}

impl FlagError {
    pub fn is_structural(&self) -> bool {
        matches!(self, FlagError::Inconsistent { .. })
    }
}

fn binary_digit(d: u8, text: &str) -> Result<bool, FlagError> {
    match d {
        0 => Ok(false),
        1 => Ok(true),
        _ => Err(FlagError::Inconsistent {
            flag: text.to_string(),
            reason: "the first three digits must be 0 or 1",
        }),
    }
}

pub fn parse_flag(text: &str) -> Result<Flag, FlagError> {
    let bytes = text.as_bytes();
    if bytes.len() != 5 || !bytes.iter().all(u8::is_ascii_digit) {
        return Err(FlagError::Malformed(text.to_string()));
    }
    let d: Vec<u8> = bytes.iter().map(|b| b - b'0').collect();
    let flag = Flag {
        approximate: binary_digit(d[0], text)?,
        no_map: binary_digit(d[1], text)?,
        combination: binary_digit(d[2], text)?,
        scenario: d[3],
        choice_list: d[4],
    };
    flag.validate().map_err(|reason| FlagError::Inconsistent {
        flag: text.to_string(),
        reason,
    })?;
    Ok(flag)
}

impl Flag {
    fn validate(&self) -> Result<(), &'static str> {
        if self.no_map && self.combination {
            return Err("a no-map entry cannot be a combination");
        }
        if self.combination {
            if self.scenario == 0 || self.choice_list == 0 {
                return Err("combination entries need scenario and choice list >= 1");
            }
        } else if self.scenario != 0 || self.choice_list != 0 {
            return Err("scenario and choice list must be 0 unless the combination digit is set");
        }
        Ok(())
    }
}

impl FromStr for Flag {
    type Err = FlagError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_flag(s)
    }
}

impl fmt::Display for Flag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}{}{}{}",
            u8::from(self.approximate),
            u8::from(self.no_map),
            u8::from(self.combination),
            self.scenario,
            self.choice_list
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn approximate_one_to_one() {
        let f = parse_flag("10000").unwrap();
        assert!(f.approximate);
        assert!(!f.no_map && !f.combination);
        assert_eq!((f.scenario, f.choice_list), (0, 0));
    }

    #[test]
    fn exact_one_to_one() {
        let f = parse_flag("00000").unwrap();
        assert_eq!(
            f,
            Flag {
                approximate: false,
                no_map: false,
                combination: false,
                scenario: 0,
                choice_list: 0
            }
        );
    }

    #[test]
    fn combination_digits() {
        let f = parse_flag("10112").unwrap();
        assert!(f.approximate && f.combination && !f.no_map);
        assert_eq!((f.scenario, f.choice_list), (1, 2));
    }

    #[test]
    fn no_map_flag() {
        let f = parse_flag("11000").unwrap();
        assert!(f.no_map);
    }

    #[test]
    fn malformed() {
        for bad in ["", "1000", "100000", "1000a", " 1000", "１0000"] {
            let err = parse_flag(bad).unwrap_err();
            assert!(!err.is_structural(), "{bad:?}");
        }
    }

    #[test]
    fn inconsistent() {
        for bad in ["10100", "10110", "10101", "00012", "01112", "20000", "00200"] {
            let err = parse_flag(bad).unwrap_err();
            assert!(err.is_structural(), "{bad:?}");
        }
    }

    #[test]
    fn display_round_trip() {
        for s in ["00000", "10000", "11000", "10112", "00193"] {
            assert_eq!(parse_flag(s).unwrap().to_string(), s);
        }
    }
}
