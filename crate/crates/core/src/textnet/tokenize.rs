use std::collections::HashSet;

pub const MIN_TOKEN_LEN: usize = 3;

const DEFAULT_STOPWORDS: &str = include_str!("../../data/stopwords.txt");

/// Filler words of code descriptions that carry no clinical theme.
pub const DEFAULT_RESIDUALS: [&str; 5] = ["other", "unspecified", "specified", "nec", "nos"];

/// Parses a word list: one word per line, `#` starts a comment.
pub fn parse_word_list(text: &str) -> HashSet<String> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim().to_lowercase())
        .filter(|w| !w.is_empty())
        .collect()
}

pub fn default_stopwords() -> HashSet<String> {
    parse_word_list(DEFAULT_STOPWORDS)
}

pub fn default_residuals() -> HashSet<String> {
    DEFAULT_RESIDUALS.iter().map(|w| w.to_string()).collect()
}

/// Lowercases, splits on anything that is not a letter or digit, and drops
/// short tokens, stopwords and residual words. Each word is kept once, at its
/// first occurrence.
pub fn tokenize(description: &str, stopwords: &HashSet<String>, residuals: &HashSet<String>) -> Vec<String> {
    let mut seen = HashSet::new();
    description
        .split(|c: char| !c.is_alphanumeric())
        .map(str::to_lowercase)
        .filter(|w| w.chars().count() >= MIN_TOKEN_LEN)
        .filter(|w| !stopwords.contains(w) && !residuals.contains(w))
        .filter(|w| seen.insert(w.clone()))
        .collect()
}
