//! Graph exports: DOT, edge-list CSV (`word_a,word_b,weight`) and word
//! frequency CSV (`word,count`).

use std::fmt::Write as _;
use std::io::{Read, Write};

use super::graph::{word_frequencies, WordGraph};
use crate::error::{Error, Result};

fn quote(word: &str) -> String {
    format!("\"{}\"", word.replace('\\', "\\\\").replace('"', "\\\""))
}

pub fn to_dot(graph: &WordGraph) -> String {
    let mut out = String::from("graph words {\n");
    for (word, count) in &graph.nodes {
        let _ = writeln!(out, "  {} [count={}];", quote(word), count);
    }
    for ((a, b), weight) in &graph.edges {
        let _ = writeln!(out, "  {} -- {} [weight={}];", quote(a), quote(b), weight);
    }
    out.push_str("}\n");
    out
}

fn unquote(s: &str) -> Option<(String, &str)> {
    let s = s.trim_start();
    let mut chars = s.char_indices();
    if chars.next()?.1 != '"' {
        return None;
    }
    let mut word = String::new();
    let mut escaped = false;
    for (i, c) in chars {
        match (escaped, c) {
            (true, _) => {
                word.push(c);
                escaped = false;
            }
            (false, '\\') => escaped = true,
            (false, '"') => return Some((word, &s[i + 1..])),
            (false, _) => word.push(c),
        }
    }
    None
}

fn attribute(rest: &str, key: &str) -> Option<usize> {
    let start = rest.find(&format!("{key}="))? + key.len() + 1;
    let digits: String = rest[start..].chars().take_while(char::is_ascii_digit).collect();
    digits.parse().ok()
}

/// Reads back the DOT written by [`to_dot`].
pub fn parse_dot(text: &str) -> Result<WordGraph> {
    let mut graph = WordGraph::default();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with("graph") || line == "}" {
            continue;
        }
        let err = || Error::Parse {
            origin: "dot".into(),
            line: i + 1,
            message: format!("unrecognized statement {line:?}"),
        };
        let (a, rest) = unquote(line).ok_or_else(err)?;
        match rest.trim_start().strip_prefix("--") {
            Some(rest) => {
                let (b, rest) = unquote(rest).ok_or_else(err)?;
                let w = attribute(rest, "weight").ok_or_else(err)?;
                graph.add_edge(&a, &b, w);
            }
            None => {
                let count = attribute(rest, "count").ok_or_else(err)?;
                graph.nodes.insert(a, count);
            }
        }
    }
    Ok(graph)
}

pub fn write_edge_csv<W: Write>(graph: &WordGraph, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["word_a", "word_b", "weight"])?;
    for ((a, b), weight) in &graph.edges {
        w.write_record([a.as_str(), b.as_str(), &weight.to_string()])?;
    }
    w.flush().map_err(|e| Error::io("edge list", e))?;
    Ok(())
}

/// Edges only; nodes come from edge endpoints with count 0.
pub fn read_edge_csv<R: Read>(reader: R) -> Result<WordGraph> {
    let mut rdr = csv::Reader::from_reader(reader);
    let mut graph = WordGraph::default();
    for record in rdr.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let weight: usize = record.get(2).and_then(|w| w.parse().ok()).ok_or(Error::Parse {
            origin: "edge list".into(),
            line,
            message: "expected word_a,word_b,weight".into(),
        })?;
        graph.add_edge(&record[0], &record[1], weight);
    }
    Ok(graph)
}

pub fn write_frequency_csv<W: Write>(graph: &WordGraph, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["word", "count"])?;
    for (word, count) in word_frequencies(graph) {
        w.write_record([word, count.to_string()])?;
    }
    w.flush().map_err(|e| Error::io("frequencies", e))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::textnet::build_cooccurrence_graph;

    fn sample() -> WordGraph {
        build_cooccurrence_graph(&[
            vec!["incision", "skin", "tissue"],
            vec!["repair", "vessel", "tissue", "graft"],
            vec!["skin", "graft"],
        ])
    }

    #[test]
    fn dot_round_trip() {
        let g = sample();
        assert_eq!(parse_dot(&to_dot(&g)).unwrap(), g);
    }

    #[test]
    fn dot_edges_match_edge_csv() {
        let g = sample();
        let mut buf = Vec::new();
        write_edge_csv(&g, &mut buf).unwrap();
        let from_csv = read_edge_csv(buf.as_slice()).unwrap();
        let from_dot = parse_dot(&to_dot(&g)).unwrap();
        assert_eq!(from_csv.edges, from_dot.edges);
    }

    #[test]
    fn quoting() {
        let mut g = WordGraph::default();
        g.add_edge("a\"b", "c\\d", 2);
        assert_eq!(parse_dot(&to_dot(&g)).unwrap(), g);
    }

    #[test]
    fn frequency_csv() {
        let mut buf = Vec::new();
        write_frequency_csv(&sample(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("word,count\ngraft,2\nskin,2\ntissue,2\n"), "{text}");
    }
}
