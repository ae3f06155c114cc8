use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use super::entry::{GemEntry, Target};
use super::flag::Flag;
use crate::error::{Error, Result};

/// Codes from which exactly one must be picked at a given step of a scenario.
pub type ChoiceList = Vec<String>;
/// Ordered choice lists; one pick from each, in order, forms a representation.
pub type Scenario = Vec<ChoiceList>;

/// One source code and all of its candidate target codes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MapRecord {
    pub source: String,
    pub entries: Vec<GemEntry>,
    pub standalone_codes: Vec<String>,
    pub scenarios: Vec<Scenario>,
    /// Total number of candidate rows.
    pub m: usize,
    /// Number of stand-alone rows.
    pub m0: usize,
}

impl MapRecord {
    /// `true` when the source code has no target (m = 0).
    pub fn is_data_loss(&self) -> bool {
        self.m == 0
    }

    /// Target codes in file order, duplicates included.
    pub fn target_codes(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().filter_map(|e| e.target.code())
    }

    /// Builds a record from its stand-alone codes and scenario structure,
    /// synthesizing entries with the matching flags.
    pub fn from_lists(
        source: &str,
        standalone: &[&str],
        scenarios: &[Vec<Vec<&str>>],
    ) -> Result<MapRecord> {
        let mut entries = Vec::new();
        let mut push = |target: &str, flag: Flag| {
            entries.push(GemEntry {
                source: source.to_string(),
                target: Target::Code(target.to_string()),
                flag,
                line_number: entries.len() + 1,
            })
        };
        let plain = Flag {
            approximate: true,
            no_map: false,
            combination: false,
            scenario: 0,
            choice_list: 0,
        };
        for code in standalone {
            push(code, plain);
        }
        for (s, scenario) in scenarios.iter().enumerate() {
            for (c, list) in scenario.iter().enumerate() {
                if s >= 9 || c >= 9 {
                    return Err(Error::Structural {
                        context: format!("map {source}"),
                        message: "scenario and choice-list numbers are single digits".into(),
                    });
                }
                for code in list {
                    push(
                        code,
                        Flag {
                            combination: true,
                            scenario: s as u8 + 1,
                            choice_list: c as u8 + 1,
                            ..plain
                        },
                    );
                }
            }
        }
        let mut maps = group_maps(entries)?;
        Ok(maps.pop().unwrap_or_else(|| MapRecord {
            source: source.to_string(),
            entries: Vec::new(),
            standalone_codes: Vec::new(),
            scenarios: Vec::new(),
            m: 0,
            m0: 0,
        }))
    }
}

/// Groups entries by source code. Records come out in order of each source's
/// first appearance; entries keep their file order within a record.
pub fn group_maps(entries: Vec<GemEntry>) -> Result<Vec<MapRecord>> {
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut groups: Vec<Vec<GemEntry>> = Vec::new();
    for entry in entries {
        match index.get(&entry.source) {
            Some(&i) => groups[i].push(entry),
            None => {
                index.insert(entry.source.clone(), groups.len());
                groups.push(vec![entry]);
            }
        }
    }
    groups.into_iter().map(build_record).collect()
}

fn build_record(entries: Vec<GemEntry>) -> Result<MapRecord> {
    let source = entries[0].source.clone();
    let structural = |message: String| Error::Structural {
        context: format!("map {source}"),
        message,
    };

    let no_match = entries.iter().filter(|e| e.target.is_no_match()).count();
    if no_match > 0 {
        if no_match != entries.len() {
            let lines: Vec<String> = entries.iter().map(|e| e.line_number.to_string()).collect();
            return Err(structural(format!(
                "mixes no-match entries with candidate codes (lines {})",
                lines.join(", ")
            )));
        }
        return Ok(MapRecord {
            source,
            entries,
            standalone_codes: Vec::new(),
            scenarios: Vec::new(),
            m: 0,
            m0: 0,
        });
    }

    let mut standalone_codes = Vec::new();
    let mut buckets: BTreeMap<u8, BTreeMap<u8, ChoiceList>> = BTreeMap::new();
    for e in &entries {
        let code = e.target.code().expect("no-match entries handled above").to_string();
        if e.flag.combination {
            buckets
                .entry(e.flag.scenario)
                .or_default()
                .entry(e.flag.choice_list)
                .or_default()
                .push(code);
        } else {
            standalone_codes.push(code);
        }
    }

    let mut scenarios = Vec::with_capacity(buckets.len());
    for (expected_scenario, (scenario, lists)) in (1u8..).zip(buckets) {
        if scenario != expected_scenario {
            return Err(structural(format!(
                "scenario numbers are not contiguous from 1: expected {expected_scenario}, found {scenario}"
            )));
        }
        let mut choice_lists = Vec::with_capacity(lists.len());
        for (expected_list, (list, codes)) in (1u8..).zip(lists) {
            if list != expected_list {
                return Err(structural(format!(
                    "choice lists in scenario {scenario} are not contiguous from 1: expected {expected_list}, found {list}"
                )));
            }
            choice_lists.push(codes);
        }
        scenarios.push(choice_lists);
    }

    Ok(MapRecord {
        m: entries.len(),
        m0: standalone_codes.len(),
        source,
        entries,
        standalone_codes,
        scenarios,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gem_io::entry::parse_gem_str;

    use crate::gem_io::MAP_0052_FIXTURE as MAP_0052;

    #[test]
    fn example_map_structure() {
        let maps = group_maps(parse_gem_str(MAP_0052, "fixture").unwrap()).unwrap();
        assert_eq!(maps.len(), 1);
        let map = &maps[0];
        assert_eq!(map.source, "0052");
        assert_eq!((map.m, map.m0), (8, 3));
        assert_eq!(map.standalone_codes, ["02H43JZ", "02H43KZ", "02H43MZ"]);
        assert_eq!(map.scenarios.len(), 1);
        let sizes: Vec<usize> = map.scenarios[0].iter().map(Vec::len).collect();
        assert_eq!(sizes, [2, 3]);
    }

    #[test]
    fn one_to_one() {
        let maps = group_maps(parse_gem_str("8609 0HB8XZZ 00000", "t").unwrap()).unwrap();
        assert_eq!((maps[0].m, maps[0].m0), (1, 1));
        assert!(maps[0].scenarios.is_empty());
    }

    #[test]
    fn no_map_is_data_loss() {
        let maps = group_maps(parse_gem_str("0001 NoPCS 11000", "t").unwrap()).unwrap();
        assert!(maps[0].is_data_loss());
        assert_eq!(maps[0].entries.len(), 1);
        assert!(maps[0].standalone_codes.is_empty());
    }

    #[test]
    fn mixing_no_map_is_structural() {
        let text = "0001 NoPCS 11000\n0001 0016070 10000\n";
        let err = group_maps(parse_gem_str(text, "t").unwrap()).unwrap_err();
        assert!(err.to_string().contains("0001"), "{err}");
    }

    #[test]
    fn scenario_gap() {
        let text = "0052 02H43KZ 10111\n0052 02PA0MZ 10112\n0052 02H43KZ 10131\n0052 02PA0MZ 10132\n";
        let err = group_maps(parse_gem_str(text, "t").unwrap()).unwrap_err();
        assert!(matches!(err, Error::Structural { .. }));
        assert!(err.to_string().contains("0052"));
    }

    #[test]
    fn choice_list_gap() {
        let text = "0052 02H43KZ 10111\n0052 02PA0MZ 10113\n";
        assert!(group_maps(parse_gem_str(text, "t").unwrap()).is_err());
    }

    #[test]
    fn groups_interleaved_sources_by_key() {
        let text = "A1 B1 00000\nA2 B2 00000\nA1 B3 00000\n";
        let maps = group_maps(parse_gem_str(text, "t").unwrap()).unwrap();
        assert_eq!(maps.len(), 2);
        assert_eq!(maps[0].source, "A1");
        assert_eq!(maps[0].standalone_codes, ["B1", "B3"]);
        assert_eq!(maps[1].source, "A2");
    }

    #[test]
    fn from_lists_builds_valid_record() {
        let map = MapRecord::from_lists("X", &["A"], &[vec![vec!["B", "C"], vec!["D"]]]).unwrap();
        assert_eq!((map.m, map.m0), (4, 1));
        assert_eq!(map.scenarios, vec![vec![vec!["B".to_string(), "C".into()], vec!["D".into()]]]);
    }
}
