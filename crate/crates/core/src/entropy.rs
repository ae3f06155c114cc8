//! Entropic measures of a map.
//!
//! * `H(A)`: sum over character positions of the Shannon entropy of the
//!   alphabets in that position (column) of the padded code matrix.
//! * `H(B)`: `log2(v)`, where `v` counts the valid representations of the
//!   source code (one stand-alone code, or one pick from every choice list
//!   of a scenario).
//! * `UR`: `log2(m)`, the candidate-count baseline.
//!
//! All logarithms are base 2; results are in bits.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gem_io::{build_matrix, CodeMatrix, MapRecord};

/// Shannon entropy of one column, using empirical frequencies `count / m`.
pub fn column_entropy(column: &[u8]) -> Result<f64> {
    if column.is_empty() {
        return Err(Error::EmptyColumn);
    }
    let mut counts = [0usize; 256];
    for &a in column {
        counts[a as usize] += 1;
    }
    let m = column.len() as f64;
    let h = counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / m;
            -p * p.log2()
        })
        .fold(0.0, |acc, x| acc + x);
    // -p*log2(p) is -0.0 for p = 1
    Ok(if h > 0.0 { h } else { 0.0 })
}

pub fn column_entropies(matrix: &CodeMatrix) -> Vec<f64> {
    matrix
        .columns()
        .map(|c| column_entropy(&c).expect("matrix rows are non-empty"))
        .collect()
}

/// `H(A)`: sum of the column entropies.
pub fn alphabet_entropy(matrix: &CodeMatrix) -> f64 {
    column_entropies(matrix).into_iter().fold(0.0, |a, h| a + h)
}

/// Positive per-position weights for the weighted column entropy.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightVector(Vec<f64>);

impl WeightVector {
    pub fn new(weights: Vec<f64>) -> Result<WeightVector> {
        for (j, &w) in weights.iter().enumerate() {
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::NonPositiveWeight {
                    position: j + 1,
                    value: w,
                });
            }
        }
        Ok(WeightVector(weights))
    }

    pub fn uniform(n: usize) -> WeightVector {
        WeightVector(vec![1.0; n])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The weights of the first `n` positions, for maps narrower than the
    /// vector. Fails when the vector is shorter than `n`.
    pub fn prefix(&self, n: usize) -> Result<WeightVector> {
        if self.0.len() < n {
            return Err(Error::WeightLength {
                expected: n,
                got: self.0.len(),
            });
        }
        Ok(WeightVector(self.0[..n].to_vec()))
    }
}

/// `H(Ā) = Σ w_j·H(a_j) / Σ w_j`.
pub fn weighted_alphabet_entropy(matrix: &CodeMatrix, weights: &WeightVector) -> Result<f64> {
    if weights.len() != matrix.n() {
        return Err(Error::WeightLength {
            expected: matrix.n(),
            got: weights.len(),
        });
    }
    let hs = column_entropies(matrix);
    let num = hs
        .iter()
        .zip(weights.as_slice())
        .fold(0.0, |acc, (h, w)| acc + w * h);
    let den = weights.as_slice().iter().fold(0.0, |acc, w| acc + w);
    Ok(num / den)
}

/// `v = m0 + Σ_scenarios Π_choice-lists |list|`. Zero for a data-loss map.
pub fn count_valid_representations(map: &MapRecord) -> u64 {
    let combined = map
        .scenarios
        .iter()
        .map(|scenario| {
            scenario
                .iter()
                .fold(1u64, |acc, list| acc.saturating_mul(list.len() as u64))
        })
        .fold(0u64, u64::saturating_add);
    (map.m0 as u64).saturating_add(combined)
}

/// `H(B) = log2(v)`.
pub fn row_entropy(v: u64) -> Result<f64> {
    if v == 0 {
        return Err(Error::UndefinedScore {
            measure: "H(B)",
            value: v,
        });
    }
    Ok((v as f64).log2())
}

/// `UR = log2(m)`.
pub fn ur_measure(m: u64) -> Result<f64> {
    if m == 0 {
        return Err(Error::UndefinedScore {
            measure: "UR",
            value: m,
        });
    }
    Ok((m as f64).log2())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapScores {
    pub source: String,
    pub m: usize,
    pub m0: usize,
    pub v: u64,
    pub h_a: f64,
    pub h_b: f64,
    pub ur: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub h_a_weighted: Option<f64>,
}

pub fn score_map(map: &MapRecord, weights: Option<&WeightVector>) -> Result<MapScores> {
    if map.is_data_loss() {
        return Err(Error::EmptyMap {
            source_code: map.source.clone(),
        });
    }
    let matrix = build_matrix(map)?;
    let v = count_valid_representations(map);
    Ok(MapScores {
        source: map.source.clone(),
        m: map.m,
        m0: map.m0,
        v,
        h_a: alphabet_entropy(&matrix),
        h_b: row_entropy(v)?,
        ur: ur_measure(map.m as u64)?,
        h_a_weighted: weights
            .map(|w| weighted_alphabet_entropy(&matrix, w))
            .transpose()?,
    })
}

/// A map left out of scoring because it has no target code.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExcludedMap {
    pub source: String,
    pub lines: Vec<usize>,
    pub reason: &'static str,
}

#[derive(Debug, Clone, Default)]
pub struct ScoredCorpus {
    pub scores: Vec<MapScores>,
    pub excluded: Vec<ExcludedMap>,
}

/// Scores every map in parallel. Output order follows `maps`; data-loss maps
/// go to `excluded`. Weights wider than a map are cut to its width.
pub fn score_maps(maps: &[MapRecord], weights: Option<&WeightVector>) -> Result<ScoredCorpus> {
    let results: Vec<Option<MapScores>> = maps
        .par_iter()
        .map(|map| {
            if map.is_data_loss() {
                return Ok(None);
            }
            let w = match weights {
                Some(w) => Some(w.prefix(build_matrix(map)?.n()).map_err(|e| Error::Structural {
                    context: format!("map {}", map.source),
                    message: e.to_string(),
                })?),
                None => None,
            };
            score_map(map, w.as_ref()).map(Some)
        })
        .collect::<Result<_>>()?;

    let mut corpus = ScoredCorpus::default();
    for (map, scored) in maps.iter().zip(results) {
        match scored {
            Some(s) => corpus.scores.push(s),
            None => corpus.excluded.push(ExcludedMap {
                source: map.source.clone(),
                lines: map.entries.iter().map(|e| e.line_number).collect(),
                reason: "no match in target system",
            }),
        }
    }
    Ok(corpus)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Denominator {
    /// Sample standard deviation (n - 1).
    #[default]
    Std,
    /// Sample variance (n - 1).
    Variance,
}

impl FromStr for Denominator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "std" => Ok(Denominator::Std),
            "variance" | "var" => Ok(Denominator::Variance),
            other => Err(Error::Config(format!("unknown denominator {other:?} (std|variance)"))),
        }
    }
}

/// Which normalized score to rank, aggregate or threshold on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    ZAlpha,
    ZBeta,
    ZUr,
    /// Z(α) + Z(β) + Z(UR).
    Total,
}

impl Measure {
    pub const ALL: [Measure; 4] = [Measure::ZAlpha, Measure::ZBeta, Measure::ZUr, Measure::Total];

    pub fn name(self) -> &'static str {
        match self {
            Measure::ZAlpha => "z_alpha",
            Measure::ZBeta => "z_beta",
            Measure::ZUr => "z_ur",
            Measure::Total => "total",
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Measure::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown measure {s:?} (z_alpha|z_beta|z_ur|total)")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalizedScores {
    pub source: String,
    pub z_alpha: f64,
    pub z_beta: f64,
    pub z_ur: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub adjusted_z_alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub adjusted_z_beta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub adjusted_z_ur: Option<f64>,
}

impl NormalizedScores {
    /// The unadjusted score for `measure`.
    pub fn value(&self, measure: Measure) -> f64 {
        match measure {
            Measure::ZAlpha => self.z_alpha,
            Measure::ZBeta => self.z_beta,
            Measure::ZUr => self.z_ur,
            Measure::Total => self.z_alpha + self.z_beta + self.z_ur,
        }
    }
}

/// Mean computed as an offset from the first value, so a constant series
/// has exactly its value as mean (and exactly zero variance).
pub(crate) fn mean(values: &[f64]) -> f64 {
    let Some(&shift) = values.first() else {
        return f64::NAN;
    };
    shift + values.iter().fold(0.0, |a, x| a + (x - shift)) / values.len() as f64
}

/// Sample variance with the n - 1 denominator; two-pass, fixed order.
pub(crate) fn sample_variance(values: &[f64]) -> f64 {
    let n = values.len();
    if n < 2 {
        return 0.0;
    }
    let mu = mean(values);
    values.iter().fold(0.0, |a, x| a + (x - mu) * (x - mu)) / (n - 1) as f64
}

fn standardize(values: &[f64], denominator: Denominator, measure: &'static str) -> Result<Vec<f64>> {
    let mu = mean(values);
    let var = sample_variance(values);
    let scale = match denominator {
        Denominator::Std => var.sqrt(),
        Denominator::Variance => var,
    };
    if !(scale > 0.0) {
        return Err(Error::DegenerateMeasure { measure });
    }
    Ok(values.iter().map(|x| (x - mu) / scale).collect())
}

/// Centers `H(A)`, `H(B)` and `UR` over the whole list and divides each by
/// its sample standard deviation (or sample variance).
pub fn normalize_scores(scores: &[MapScores], denominator: Denominator) -> Result<Vec<NormalizedScores>> {
    if scores.len() < 2 {
        return Err(Error::InsufficientData(scores.len()));
    }
    let column = |f: fn(&MapScores) -> f64| scores.iter().map(f).collect::<Vec<_>>();
    let za = standardize(&column(|s| s.h_a), denominator, "H(A)")?;
    let zb = standardize(&column(|s| s.h_b), denominator, "H(B)")?;
    let zu = standardize(&column(|s| s.ur), denominator, "UR")?;
    Ok(scores
        .iter()
        .enumerate()
        .map(|(i, s)| NormalizedScores {
            source: s.source.clone(),
            z_alpha: za[i],
            z_beta: zb[i],
            z_ur: zu[i],
            adjusted_z_alpha: None,
            adjusted_z_beta: None,
            adjusted_z_ur: None,
        })
        .collect())
}

/// Weights the z-scores by the probability of the source concept.
pub fn adjust_by_frequency(z: &NormalizedScores, p: f64) -> Result<NormalizedScores> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidProbability(p));
    }
    Ok(NormalizedScores {
        adjusted_z_alpha: Some(z.z_alpha * p),
        adjusted_z_beta: Some(z.z_beta * p),
        adjusted_z_ur: Some(z.z_ur * p),
        ..z.clone()
    })
}
