use serde::Serialize;

use crate::entropy::{Measure, NormalizedScores};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OutlierRule {
    /// Keep maps scoring strictly above the value.
    Threshold(f64),
    /// Keep at most `ceil(fraction * N)` maps, using the smallest threshold
    /// that achieves it.
    TopFraction(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Outlier {
    pub source: String,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutlierReport {
    pub measure: Measure,
    /// Effective threshold; outliers score strictly above it.
    pub threshold: f64,
    pub outliers: Vec<Outlier>,
}

pub fn detect_outliers(
    normalized: &[NormalizedScores],
    measure: Measure,
    rule: OutlierRule,
) -> Result<OutlierReport> {
    if normalized.is_empty() {
        return Err(Error::EmptyInput("outlier detection needs scored maps"));
    }
    let mut ranked: Vec<Outlier> = normalized
        .iter()
        .map(|z| Outlier {
            source: z.source.clone(),
            score: z.value(measure),
        })
        .collect();
    ranked.sort_by(|a, b| b.score.total_cmp(&a.score).then_with(|| a.source.cmp(&b.source)));

    let threshold = match rule {
        OutlierRule::Threshold(t) => t,
        OutlierRule::TopFraction(f) => {
            if !(f > 0.0 && f <= 1.0) {
                return Err(Error::InvalidFraction(f));
            }
            let cap = (f * ranked.len() as f64).ceil() as usize;
            if cap >= ranked.len() {
                f64::NEG_INFINITY
            } else {
                // everything strictly above the (cap+1)-th largest score
                ranked[cap].score
            }
        }
    };
    ranked.retain(|o| o.score > threshold);
    Ok(OutlierReport {
        measure,
        threshold,
        outliers: ranked,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zs(scores: &[(&str, f64)]) -> Vec<NormalizedScores> {
        scores
            .iter()
            .map(|(s, a)| NormalizedScores {
                source: s.to_string(),
                z_alpha: *a,
                z_beta: 0.0,
                z_ur: 0.0,
                adjusted_z_alpha: None,
                adjusted_z_beta: None,
                adjusted_z_ur: None,
            })
            .collect()
    }

    #[test]
    fn threshold_above_max_is_empty() {
        let r = detect_outliers(&zs(&[("a", 1.0)]), Measure::ZAlpha, OutlierRule::Threshold(1.0)).unwrap();
        assert!(r.outliers.is_empty());
    }

    #[test]
    fn threshold_strict_descending() {
        let z = zs(&[("c", 1.0), ("a", 3.0), ("b", 2.0)]);
        let r = detect_outliers(&z, Measure::ZAlpha, OutlierRule::Threshold(1.5)).unwrap();
        let got: Vec<&str> = r.outliers.iter().map(|o| o.source.as_str()).collect();
        assert_eq!(got, ["a", "b"]);
        let r = detect_outliers(&z, Measure::ZAlpha, OutlierRule::Threshold(2.0)).unwrap();
        assert_eq!(r.outliers.len(), 1);
    }

    #[test]
    fn top_fraction() {
        let z: Vec<(String, f64)> = (0..10).map(|i| (format!("m{i}"), i as f64)).collect();
        let z: Vec<(&str, f64)> = z.iter().map(|(s, v)| (s.as_str(), *v)).collect();
        let r = detect_outliers(&zs(&z), Measure::ZAlpha, OutlierRule::TopFraction(0.25)).unwrap();
        // ceil(2.5) = 3
        assert_eq!(r.outliers.len(), 3);
        assert_eq!(r.threshold, 6.0);
        let r = detect_outliers(&zs(&z), Measure::ZAlpha, OutlierRule::TopFraction(1.0)).unwrap();
        assert_eq!(r.outliers.len(), 10);
    }

    #[test]
    fn top_fraction_ties_never_exceed_cap() {
        let z = zs(&[("a", 5.0), ("b", 5.0), ("c", 5.0), ("d", 1.0)]);
        let r = detect_outliers(&z, Measure::ZAlpha, OutlierRule::TopFraction(0.5)).unwrap();
        assert!(r.outliers.is_empty());
    }

    #[test]
    fn bad_fraction() {
        let z = zs(&[("a", 1.0)]);
        for f in [0.0, -0.1, 1.5, f64::NAN] {
            assert!(matches!(
                detect_outliers(&z, Measure::ZAlpha, OutlierRule::TopFraction(f)),
                Err(Error::InvalidFraction(_))
            ));
        }
    }

    #[test]
    fn empty_input() {
        assert!(detect_outliers(&[], Measure::ZAlpha, OutlierRule::Threshold(0.0)).is_err());
    }
}
