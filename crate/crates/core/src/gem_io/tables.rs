//! Auxiliary tables: clinical-class ranges, code descriptions and code
//! frequencies. All three are headed CSV files.

use std::collections::HashMap;
use std::io::Read;

use serde::Serialize;

use crate::error::{Error, Result};

/// Class id reported for codes outside every defined range.
pub const UNCLASSIFIED: &str = "unclassified";

pub type DescriptionTable = HashMap<String, String>;
pub type FrequencyTable = HashMap<String, f64>;

/// Inclusive prefix range. Bounds are stored right-padded with '0' to a common
/// width `k`; a code matches when its first `k` characters fall between them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassRange {
    pub low: String,
    pub high: String,
}

impl ClassRange {
    pub fn new(low: &str, high: &str) -> Result<ClassRange> {
        let bad = |message: &str| Error::InvalidClassRange {
            low: low.to_string(),
            high: high.to_string(),
            message: message.to_string(),
        };
        let lo = clean_code(low).ok_or_else(|| bad("bounds must be non-empty [A-Z0-9]"))?;
        let hi = clean_code(high).ok_or_else(|| bad("bounds must be non-empty [A-Z0-9]"))?;
        let k = lo.len().max(hi.len());
        let (lo, hi) = (pad_right(&lo, k, '0'), pad_right(&hi, k, '0'));
        if lo > hi {
            return Err(bad("low bound sorts after high bound"));
        }
        Ok(ClassRange { low: lo, high: hi })
    }

    pub fn width(&self) -> usize {
        self.low.len()
    }

    pub fn contains(&self, code: &str) -> bool {
        let k = self.width();
        let prefix: String = code.chars().take(k).collect();
        let prefix = pad_right(&prefix, k, '0');
        self.low <= prefix && prefix <= self.high
    }

    /// Whether any code could fall in both ranges.
    pub fn overlaps(&self, other: &ClassRange) -> bool {
        let k = self.width().max(other.width());
        let lo = pad_right(&self.low, k, '0').max(pad_right(&other.low, k, '0'));
        let hi = pad_right(&self.high, k, 'Z').min(pad_right(&other.high, k, 'Z'));
        lo <= hi
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassDef {
    pub id: String,
    pub label: String,
    pub ranges: Vec<ClassRange>,
}

impl ClassDef {
    pub fn contains(&self, code: &str) -> bool {
        self.ranges.iter().any(|r| r.contains(code))
    }
}

fn pad_right(s: &str, k: usize, fill: char) -> String {
    let mut out = s.to_string();
    while out.len() < k {
        out.push(fill);
    }
    out
}

/// Trims, uppercases and drops dots (`86.09` -> `8609`).
fn clean_code(raw: &str) -> Option<String> {
    let code: String = raw
        .trim()
        .chars()
        .filter(|&c| c != '.')
        .map(|c| c.to_ascii_uppercase())
        .collect();
    let ok = !code.is_empty() && code.bytes().all(|b| b.is_ascii_uppercase() || b.is_ascii_digit());
    ok.then_some(code)
}

fn csv_reader<R: Read>(reader: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader)
}

fn check_header<R: Read>(rdr: &mut csv::Reader<R>, origin: &str, expected: &[&str]) -> Result<()> {
    let headers = rdr.headers()?;
    let found: Vec<String> = headers.iter().map(|h| h.trim_start_matches('\u{feff}').to_ascii_lowercase()).collect();
    if found.len() < expected.len() || found.iter().zip(expected).any(|(f, e)| f != e) {
        return Err(Error::Parse {
            origin: origin.to_string(),
            line: 1,
            message: format!("expected header {:?}, found {:?}", expected.join(","), found.join(",")),
        });
    }
    Ok(())
}

fn line_of(record: &csv::StringRecord) -> usize {
    record.position().map(|p| p.line() as usize).unwrap_or(0)
}

/// Reads `low,high,label` rows. Rows sharing a label form one class. A row may
/// also give the range in a single field as `LOW-HIGH` followed by the label.
pub fn load_class_defs<R: Read>(reader: R, origin: &str) -> Result<Vec<ClassDef>> {
    let mut rdr = csv_reader(reader);
    check_header(&mut rdr, origin, &["low", "high", "label"])?;

    let mut defs: Vec<ClassDef> = Vec::new();
    for record in rdr.records() {
        let record = record?;
        let line = line_of(&record);
        let parse_err = |message: String| Error::Parse {
            origin: origin.to_string(),
            line,
            message,
        };
        let fields: Vec<&str> = record.iter().collect();
        if fields.iter().all(|f| f.is_empty()) {
            continue;
        }
        let (low, high, label) = match fields.as_slice() {
            [low, high, label] if !high.is_empty() => (low.to_string(), high.to_string(), *label),
            [range, label] | [range, _, label] => match range.split_once('-') {
                Some((lo, hi)) => (lo.to_string(), hi.to_string(), *label),
                None => (range.to_string(), range.to_string(), *label),
            },
            _ => return Err(parse_err(format!("expected low,high,label; found {} fields", fields.len()))),
        };
        if label.is_empty() {
            return Err(parse_err("empty class label".into()));
        }
        let range = ClassRange::new(&low, &high).map_err(|e| parse_err(e.to_string()))?;
        match defs.iter_mut().find(|d| d.label == label) {
            Some(def) => def.ranges.push(range),
            None => defs.push(ClassDef {
                id: String::new(),
                label: label.to_string(),
                ranges: vec![range],
            }),
        }
    }

    for def in &mut defs {
        def.id = def
            .ranges
            .iter()
            .map(|r| {
                if r.low == r.high {
                    r.low.clone()
                } else {
                    format!("{}-{}", r.low, r.high)
                }
            })
            .collect::<Vec<_>>()
            .join(";");
    }
    check_overlaps(&defs)?;
    Ok(defs)
}

fn check_overlaps(defs: &[ClassDef]) -> Result<()> {
    for (i, a) in defs.iter().enumerate() {
        for b in &defs[i + 1..] {
            for ra in &a.ranges {
                for rb in &b.ranges {
                    if ra.overlaps(rb) {
                        return Err(Error::OverlappingClasses {
                            first: format!("{} ({}-{})", a.label, ra.low, ra.high),
                            second: format!("{} ({}-{})", b.label, rb.low, rb.high),
                        });
                    }
                }
            }
        }
    }
    Ok(())
}

/// Id of the class whose range holds `code`, or [`UNCLASSIFIED`].
pub fn assign_class<'a>(code: &str, defs: &'a [ClassDef]) -> &'a str {
    defs.iter()
        .find(|d| d.contains(code))
        .map_or(UNCLASSIFIED, |d| d.id.as_str())
}

fn load_keyed<R: Read, T>(
    reader: R,
    origin: &str,
    header: [&str; 2],
    mut value: impl FnMut(&str) -> std::result::Result<T, String>,
) -> Result<HashMap<String, T>> {
    let mut rdr = csv_reader(reader);
    check_header(&mut rdr, origin, &header)?;
    let mut table = HashMap::new();
    for record in rdr.records() {
        let record = record?;
        let line = line_of(&record);
        let parse_err = |message: String| Error::Parse {
            origin: origin.to_string(),
            line,
            message,
        };
        if record.iter().all(str::is_empty) {
            continue;
        }
        if record.len() != 2 {
            return Err(parse_err(format!("expected 2 fields, found {}", record.len())));
        }
        let code = clean_code(&record[0]).ok_or_else(|| parse_err(format!("invalid code {:?}", &record[0])))?;
        let v = value(&record[1]).map_err(parse_err)?;
        if table.contains_key(&code) {
            return Err(Error::DuplicateKey {
                table: format!("{origin} (line {line})"),
                key: code,
            });
        }
        table.insert(code, v);
    }
    Ok(table)
}

/// Reads `code,description` rows.
pub fn load_descriptions<R: Read>(reader: R, origin: &str) -> Result<DescriptionTable> {
    load_keyed(reader, origin, ["code", "description"], |d| Ok(d.to_string()))
}

/// Reads `code,probability` rows; every probability must lie in [0, 1].
pub fn load_frequencies<R: Read>(reader: R, origin: &str) -> Result<FrequencyTable> {
    load_keyed(reader, origin, ["code", "probability"], |p| {
        let v: f64 = p.parse().map_err(|_| format!("invalid probability {p:?}"))?;
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::InvalidProbability(v).to_string());
        }
        Ok(v)
    })
}
