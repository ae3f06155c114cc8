//! Command implementations behind the `gem-entropy` binary. Each command
//! reads its inputs from a [`RunConfig`], writes its tables into the output
//! directory and returns an [`Outcome`] for the caller to print.

mod table;
mod verify;

pub use table::{format_g6, Cell, OutputFormat, Table};
pub use verify::{verify_example, verify_fixture, Check, VerifyReport};

use std::fs::{self, File};
use std::io::BufReader;
use std::path::{Path, PathBuf};

use crate::analysis::{
    aggregate_by_class, descriptive_stats, detect_outliers, kendall_tau, rank_classes, ClassScore,
    OutlierReport, OutlierRule, RankTable, RankedClass,
};
use crate::entropy::{
    adjust_by_frequency, normalize_scores, score_maps, Denominator, MapScores, Measure,
    NormalizedScores, ScoredCorpus, WeightVector,
};
use crate::error::{Error, Result};
use crate::gem_io::{
    load_class_defs, load_descriptions, load_frequencies, read_maps, ClassDef, DescriptionTable,
    FrequencyTable, MapRecord,
};
use crate::textnet::{
    build_cooccurrence_graph, default_residuals, default_stopwords, eigenvector_centrality,
    parse_word_list, to_dot, tokenize, word_frequencies, write_edge_csv, DEFAULT_MAX_ITERATIONS,
    DEFAULT_TOLERANCE,
};

#[derive(Debug, Clone, Default)]
pub struct RunConfig {
    pub gems: Option<PathBuf>,
    pub classes: Option<PathBuf>,
    pub descriptions: Option<PathBuf>,
    pub frequencies: Option<PathBuf>,
    pub weights: Option<WeightVector>,
    pub denominator: Denominator,
    pub outlier: Option<OutlierRule>,
    pub measure: Option<Measure>,
    pub format: OutputFormat,
    pub out: PathBuf,
    /// Replaces the built-in stopword list.
    pub stopwords: Option<PathBuf>,
    /// Extra residual words, added to the defaults.
    pub residuals: Option<PathBuf>,
}

impl RunConfig {
    /// Checks that every configured input exists and creates the output
    /// directory. Runs before any computation.
    pub fn validate(&self) -> Result<()> {
        let inputs = [
            ("--gems", &self.gems),
            ("--classes", &self.classes),
            ("--descriptions", &self.descriptions),
            ("--frequencies", &self.frequencies),
            ("--stopwords", &self.stopwords),
            ("--residuals", &self.residuals),
        ];
        for (flag, path) in inputs {
            if let Some(p) = path {
                if !p.is_file() {
                    return Err(Error::Config(format!("{flag}: {} is not a readable file", p.display())));
                }
            }
        }
        fs::create_dir_all(&self.out).map_err(|e| Error::io(&self.out, e))
    }

    fn require<'a>(path: &'a Option<PathBuf>, flag: &str) -> Result<&'a Path> {
        path.as_deref()
            .ok_or_else(|| Error::Config(format!("{flag} is required for this command")))
    }
}

/// What a command produced.
#[derive(Debug, Clone, Default)]
pub struct Outcome {
    pub files: Vec<PathBuf>,
    pub warnings: Vec<String>,
    pub summary: Vec<String>,
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path).map(BufReader::new).map_err(|e| Error::io(path, e))
}

fn origin(path: &Path) -> String {
    path.display().to_string()
}

pub fn read_class_defs(path: &Path) -> Result<Vec<ClassDef>> {
    load_class_defs(open(path)?, &origin(path))
}

pub fn read_descriptions(path: &Path) -> Result<DescriptionTable> {
    load_descriptions(open(path)?, &origin(path))
}

pub fn read_frequencies(path: &Path) -> Result<FrequencyTable> {
    load_frequencies(open(path)?, &origin(path))
}

/// Parsed, scored and (when possible) normalized crosswalk.
pub struct Pipeline {
    pub maps: Vec<MapRecord>,
    pub corpus: ScoredCorpus,
    /// `None` when normalization was impossible; the reason is in `warnings`.
    pub normalized: Option<Vec<NormalizedScores>>,
    pub probabilities: Option<Vec<Option<f64>>>,
    pub warnings: Vec<String>,
}

impl Pipeline {
    pub fn run(config: &RunConfig) -> Result<Pipeline> {
        let gems = RunConfig::require(&config.gems, "--gems")?;
        let maps = read_maps(gems)?;
        let corpus = score_maps(&maps, config.weights.as_ref())?;
        let mut warnings = Vec::new();

        let normalized = match normalize_scores(&corpus.scores, config.denominator) {
            Ok(mut z) => {
                let probabilities = match &config.frequencies {
                    Some(path) => {
                        let table = read_frequencies(path)?;
                        let probs: Vec<Option<f64>> =
                            z.iter().map(|s| table.get(&s.source).copied()).collect();
                        for (s, p) in z.iter_mut().zip(&probs) {
                            if let Some(p) = p {
                                *s = adjust_by_frequency(s, *p)?;
                            }
                        }
                        let missing = probs.iter().filter(|p| p.is_none()).count();
                        if missing > 0 {
                            warnings.push(format!(
                                "{missing} scored maps have no entry in the frequency table; adjusted scores left empty"
                            ));
                        }
                        Some(probs)
                    }
                    None => None,
                };
                return Ok(Pipeline {
                    maps,
                    corpus,
                    normalized: Some(z),
                    probabilities,
                    warnings,
                });
            }
            Err(e @ (Error::InsufficientData(_) | Error::DegenerateMeasure { .. })) => {
                warnings.push(format!("normalization skipped: {e}"));
                None
            }
            Err(e) => return Err(e),
        };
        Ok(Pipeline {
            maps,
            corpus,
            normalized,
            probabilities: None,
            warnings,
        })
    }

    pub fn normalized(&self) -> Result<&[NormalizedScores]> {
        self.normalized.as_deref().ok_or_else(|| {
            Error::Config(format!(
                "this command needs normalized scores, which require at least 2 scored maps with non-constant H(A), H(B) and UR ({} scored)",
                self.corpus.scores.len()
            ))
        })
    }

    fn line_summary(&self) -> String {
        let scored: usize = self.maps.iter().filter(|m| !m.is_data_loss()).map(|m| m.entries.len()).sum();
        let excluded: usize = self.corpus.excluded.iter().map(|e| e.lines.len()).sum();
        format!(
            "{} lines: {} in {} scored maps, {} in {} excluded maps",
            scored + excluded,
            scored,
            self.corpus.scores.len(),
            excluded,
            self.corpus.excluded.len()
        )
    }
}

pub fn cmd_score(config: &RunConfig) -> Result<Outcome> {
    config.validate()?;
    let p = Pipeline::run(config)?;
    let weighted = config.weights.is_some();
    let adjusted = p.probabilities.is_some();

    let mut columns = vec!["source", "m", "m0", "v", "h_a", "h_b", "ur", "z_alpha", "z_beta", "z_ur"];
    if weighted {
        columns.push("h_a_weighted");
    }
    if adjusted {
        columns.extend(["probability", "adjusted_z_alpha", "adjusted_z_beta", "adjusted_z_ur"]);
    }
    let mut scores = Table::new("scores", &columns);
    for (i, s) in p.corpus.scores.iter().enumerate() {
        let z = p.normalized.as_ref().map(|z| &z[i]);
        let mut row: Vec<Cell> = vec![
            s.source.as_str().into(),
            s.m.into(),
            s.m0.into(),
            s.v.into(),
            s.h_a.into(),
            s.h_b.into(),
            s.ur.into(),
            z.map(|z| z.z_alpha).into(),
            z.map(|z| z.z_beta).into(),
            z.map(|z| z.z_ur).into(),
        ];
        if weighted {
            row.push(s.h_a_weighted.into());
        }
        if let Some(probs) = &p.probabilities {
            row.push(probs[i].into());
            row.push(z.and_then(|z| z.adjusted_z_alpha).into());
            row.push(z.and_then(|z| z.adjusted_z_beta).into());
            row.push(z.and_then(|z| z.adjusted_z_ur).into());
        }
        scores.push(row);
    }

    let mut excluded = Table::new("excluded", &["source", "lines", "reason"]);
    for e in &p.corpus.excluded {
        let lines: Vec<String> = e.lines.iter().map(usize::to_string).collect();
        excluded.push(vec![e.source.as_str().into(), lines.join(" ").into(), e.reason.into()]);
    }

    let files = vec![scores.write(&config.out, config.format)?, excluded.write(&config.out, config.format)?];
    Ok(Outcome {
        files,
        summary: vec![p.line_summary()],
        warnings: p.warnings,
    })
}

pub fn cmd_stats(config: &RunConfig) -> Result<Outcome> {
    config.validate()?;
    let maps = read_maps(RunConfig::require(&config.gems, "--gems")?)?;
    let corpus = score_maps(&maps, config.weights.as_ref())?;
    if corpus.scores.is_empty() {
        return Err(Error::EmptyInput("no scored maps: every source code lacks a target"));
    }

    let mut measures: Vec<(&str, fn(&MapScores) -> f64)> =
        vec![("h_a", |s| s.h_a), ("h_b", |s| s.h_b), ("ur", |s| s.ur)];
    if config.weights.is_some() {
        measures.push(("h_a_weighted", |s| s.h_a_weighted.unwrap_or(f64::NAN)));
    }
    let stats = measures
        .iter()
        .map(|(_, f)| descriptive_stats(&corpus.scores.iter().map(f).collect::<Vec<_>>()))
        .collect::<Result<Vec<_>>>()?;

    let mut columns = vec!["statistic"];
    columns.extend(measures.iter().map(|(n, _)| *n));
    let mut table = Table::new("stats", &columns);
    let rows: [(&str, fn(&crate::analysis::Stats) -> Cell); 8] = [
        ("count", |s| s.count.into()),
        ("mean", |s| s.mean.into()),
        ("std", |s| s.std.into()),
        ("min", |s| s.min.into()),
        ("25%", |s| s.q25.into()),
        ("50%", |s| s.q50.into()),
        ("75%", |s| s.q75.into()),
        ("max", |s| s.max.into()),
    ];
    for (name, cell) in rows {
        let mut row = vec![Cell::from(name)];
        row.extend(stats.iter().map(cell));
        table.push(row);
    }
    Ok(Outcome {
        files: vec![table.write(&config.out, config.format)?],
        warnings: vec![],
        summary: vec![format!(
            "{} maps scored, {} excluded (std is the n-1 sample standard deviation)",
            corpus.scores.len(),
            corpus.excluded.len()
        )],
    })
}

fn class_scores(config: &RunConfig, p: &Pipeline) -> Result<Vec<ClassScore>> {
    let defs = read_class_defs(RunConfig::require(&config.classes, "--classes")?)?;
    Ok(aggregate_by_class(p.normalized()?, &defs))
}

fn rank_table(t: &RankTable) -> Table {
    let mut table = Table::new(&format!("rank_{}", t.measure), &["position", "class_id", "label", "score", "rank"]);
    for e in &t.entries {
        table.push(vec![
            e.position.into(),
            e.class_id.as_str().into(),
            e.label.as_str().into(),
            e.score.into(),
            e.rank.into(),
        ]);
    }
    table
}

pub fn cmd_rank(config: &RunConfig) -> Result<Outcome> {
    config.validate()?;
    let p = Pipeline::run(config)?;
    let classes = class_scores(config, &p)?;
    let measures: Vec<Measure> = match config.measure {
        Some(m) => vec![m],
        None => Measure::ALL.to_vec(),
    };
    let mut files = Vec::new();
    let mut summary = Vec::new();
    for m in measures {
        let t = rank_classes(&classes, m);
        if let Some(top) = t.entries.first() {
            summary.push(format!("{m}: top class {} ({}) with {}", top.class_id, top.label, format_g6(top.score)));
        }
        files.push(rank_table(&t).write(&config.out, config.format)?);
    }

    let mut members = Table::new("class_members", &["class_id", "source", "z_alpha", "z_beta", "z_ur"]);
    for c in &classes {
        for z in &c.member_zs {
            members.push(vec![
                c.class_id.as_str().into(),
                z.source.as_str().into(),
                z.z_alpha.into(),
                z.z_beta.into(),
                z.z_ur.into(),
            ]);
        }
    }
    files.push(members.write(&config.out, config.format)?);
    Ok(Outcome {
        files,
        warnings: p.warnings,
        summary,
    })
}

/// Reads a ranking written by `rank` (CSV or JSON, by extension).
pub fn read_rank_file(path: &Path) -> Result<RankTable> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let bad = |message: String| Error::Parse {
        origin: origin(path),
        line: 0,
        message,
    };
    let mut entries = Vec::new();
    if path.extension().is_some_and(|e| e == "json") {
        let rows: Vec<serde_json::Value> = serde_json::from_str(&text)?;
        for (i, row) in rows.iter().enumerate() {
            let id = row["class_id"].as_str().ok_or_else(|| bad(format!("row {i}: missing class_id")))?;
            let rank = row["rank"].as_f64().ok_or_else(|| bad(format!("row {i}: missing rank")))?;
            entries.push(RankedClass {
                position: i + 1,
                class_id: id.to_string(),
                label: row["label"].as_str().unwrap_or(id).to_string(),
                score: row["score"].as_f64().unwrap_or(f64::NAN),
                rank,
            });
        }
    } else {
        let mut rdr = csv::Reader::from_reader(text.as_bytes());
        let headers = rdr.headers()?.clone();
        let col = |name: &str| {
            headers
                .iter()
                .position(|h| h == name)
                .ok_or_else(|| bad(format!("missing column {name:?}")))
        };
        let (id_col, rank_col) = (col("class_id")?, col("rank")?);
        let label_col = headers.iter().position(|h| h == "label");
        let score_col = headers.iter().position(|h| h == "score");
        for (i, record) in rdr.records().enumerate() {
            let record = record?;
            let rank = record[rank_col]
                .parse()
                .map_err(|_| bad(format!("row {}: invalid rank {:?}", i + 1, &record[rank_col])))?;
            entries.push(RankedClass {
                position: i + 1,
                class_id: record[id_col].to_string(),
                label: label_col.map_or(&record[id_col], |c| &record[c]).to_string(),
                score: score_col.and_then(|c| record[c].parse().ok()).unwrap_or(f64::NAN),
                rank,
            });
        }
    }
    Ok(RankTable {
        measure: Measure::Total,
        entries,
    })
}

/// Pairwise tau-b between rankings. With no rank files, ranks the classes by
/// Z(α), Z(β) and Z(UR) from `--gems` and `--classes` and correlates those.
pub fn cmd_corr(config: &RunConfig, rank_files: &[PathBuf]) -> Result<Outcome> {
    config.validate()?;
    let mut warnings = Vec::new();
    let named: Vec<(String, RankTable)> = if rank_files.is_empty() {
        let p = Pipeline::run(config)?;
        warnings.extend(p.warnings.iter().cloned());
        let classes = class_scores(config, &p)?;
        [Measure::ZAlpha, Measure::ZBeta, Measure::ZUr]
            .into_iter()
            .map(|m| (m.name().to_string(), rank_classes(&classes, m)))
            .collect()
    } else {
        if rank_files.len() < 2 {
            return Err(Error::Config("corr needs at least two rank files".into()));
        }
        rank_files
            .iter()
            .map(|f| {
                let name = f.file_stem().map_or_else(|| origin(f), |s| s.to_string_lossy().into_owned());
                read_rank_file(f).map(|t| (name, t))
            })
            .collect::<Result<_>>()?
    };

    let mut columns = vec!["ranking"];
    columns.extend(named.iter().map(|(n, _)| n.as_str()));
    let mut table = Table::new("tau", &columns);
    let mut summary = Vec::new();
    for (i, (name_a, a)) in named.iter().enumerate() {
        let mut row = vec![Cell::from(name_a.as_str())];
        for (j, (name_b, b)) in named.iter().enumerate() {
            let tau = kendall_tau(a, b)?;
            if j > i {
                summary.push(format!("tau({name_a}, {name_b}) = {tau:.4}"));
            }
            row.push(tau.into());
        }
        table.push(row);
    }
    Ok(Outcome {
        files: vec![table.write(&config.out, config.format)?],
        warnings,
        summary,
    })
}

fn outlier_report(config: &RunConfig, p: &Pipeline) -> Result<OutlierReport> {
    let rule = config
        .outlier
        .ok_or_else(|| Error::Config("one of --threshold or --top-fraction is required".into()))?;
    detect_outliers(p.normalized()?, config.measure.unwrap_or(Measure::ZAlpha), rule)
}

fn outlier_table(report: &OutlierReport, p: &Pipeline, descriptions: Option<&DescriptionTable>) -> Table {
    let index: std::collections::HashMap<&str, usize> =
        p.corpus.scores.iter().enumerate().map(|(i, s)| (s.source.as_str(), i)).collect();
    let z = p.normalized.as_deref().unwrap_or_default();
    let mut table = Table::new(
        "outliers",
        &["source", "score", "m", "v", "h_a", "h_b", "ur", "z_alpha", "z_beta", "z_ur", "description"],
    );
    for o in &report.outliers {
        let i = index[o.source.as_str()];
        let (s, z) = (&p.corpus.scores[i], &z[i]);
        table.push(vec![
            o.source.as_str().into(),
            o.score.into(),
            s.m.into(),
            s.v.into(),
            s.h_a.into(),
            s.h_b.into(),
            s.ur.into(),
            z.z_alpha.into(),
            z.z_beta.into(),
            z.z_ur.into(),
            descriptions.and_then(|d| d.get(&o.source)).cloned().into(),
        ]);
    }
    table
}

pub fn cmd_outliers(config: &RunConfig) -> Result<Outcome> {
    config.validate()?;
    let p = Pipeline::run(config)?;
    let report = outlier_report(config, &p)?;
    let descriptions = config.descriptions.as_deref().map(read_descriptions).transpose()?;
    let table = outlier_table(&report, &p, descriptions.as_ref());
    Ok(Outcome {
        files: vec![table.write(&config.out, config.format)?],
        summary: vec![format!(
            "{} outliers on {} above {}",
            report.outliers.len(),
            report.measure,
            format_g6(report.threshold)
        )],
        warnings: p.warnings,
    })
}

pub fn cmd_textnet(config: &RunConfig) -> Result<Outcome> {
    config.validate()?;
    let descriptions = read_descriptions(RunConfig::require(&config.descriptions, "--descriptions")?)?;
    let stopwords = match &config.stopwords {
        Some(path) => parse_word_list(&fs::read_to_string(path).map_err(|e| Error::io(path, e))?),
        None => default_stopwords(),
    };
    let mut residuals = default_residuals();
    if let Some(path) = &config.residuals {
        residuals.extend(parse_word_list(&fs::read_to_string(path).map_err(|e| Error::io(path, e))?));
    }

    let p = Pipeline::run(config)?;
    let mut warnings = p.warnings.clone();
    let report = outlier_report(config, &p)?;

    let mut missing = Vec::new();
    let token_lists: Vec<Vec<String>> = report
        .outliers
        .iter()
        .filter_map(|o| match descriptions.get(&o.source) {
            Some(d) => Some(tokenize(d, &stopwords, &residuals)),
            None => {
                missing.push(o.source.clone());
                None
            }
        })
        .collect();
    if !missing.is_empty() {
        warnings.push(format!("no description for outlier maps: {}", missing.join(", ")));
    }

    let graph = build_cooccurrence_graph(&token_lists);
    let centrality = eigenvector_centrality(&graph, DEFAULT_TOLERANCE, DEFAULT_MAX_ITERATIONS)?;

    let mut files = vec![outlier_table(&report, &p, Some(&descriptions)).write(&config.out, config.format)?];

    let dot_path = config.out.join("graph.dot");
    fs::write(&dot_path, to_dot(&graph)).map_err(|e| Error::io(&dot_path, e))?;
    files.push(dot_path);

    let edges_path = config.out.join("edges.csv");
    write_edge_csv(&graph, File::create(&edges_path).map_err(|e| Error::io(&edges_path, e))?)?;
    files.push(edges_path);

    let mut freq = Table::new("frequencies", &["word", "count"]);
    for (w, c) in word_frequencies(&graph) {
        freq.push(vec![w.into(), c.into()]);
    }
    files.push(freq.write(&config.out, config.format)?);

    let ranked = centrality.ranked();
    let mut cent = Table::new("centrality", &["word", "centrality"]);
    for (w, s) in &ranked {
        cent.push(vec![w.as_str().into(), (*s).into()]);
    }
    files.push(cent.write(&config.out, config.format)?);

    let top: Vec<&str> = ranked.iter().take(6).map(|(w, _)| w.as_str()).collect();
    Ok(Outcome {
        files,
        warnings,
        summary: vec![
            format!(
                "{} outliers, {} words, {} edges",
                report.outliers.len(),
                graph.nodes.len(),
                graph.edges.len()
            ),
            format!("most central: {}", top.join(", ")),
        ],
    })
}

/// Parses `--weights w1,w2,...`.
pub fn parse_weights(text: &str) -> Result<WeightVector> {
    let weights = text
        .split(',')
        .map(|w| {
            w.trim()
                .parse::<f64>()
                .map_err(|_| Error::Config(format!("invalid weight {w:?}")))
        })
        .collect::<Result<Vec<_>>>()?;
    WeightVector::new(weights)
}
