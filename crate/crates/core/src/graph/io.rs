//! Line-based text formats for graphs and treedepth decompositions.
//!
//! Graph files:
//!
//! ```text
//! # comment
//! n 4
//! c red 0 2
//! e 0 1
//! e 1 2
//! ```
//!
//! Decomposition files start with `td <depth>` followed by one
//! `p <child> <parent|-1>` line per vertex.

use std::fmt::Write as _;

use super::{ColoredGraph, TreedepthDecomposition};
use crate::error::{Error, Result};

fn format_err(line: usize, message: impl Into<String>) -> Error {
    Error::GraphFormat {
        line,
        message: message.into(),
    }
}

fn parse_id(tok: &str, line: usize) -> Result<usize> {
    tok.parse::<usize>()
        .map_err(|_| format_err(line, format!("expected a vertex id, found `{tok}`")))
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("");
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.is_empty() {
            None
        } else {
            Some((i + 1, toks))
        }
    })
}

pub fn parse_graph(text: &str) -> Result<ColoredGraph> {
    let mut graph: Option<ColoredGraph> = None;
    for (lineno, toks) in content_lines(text) {
        match toks[0] {
            "n" => {
                if graph.is_some() {
                    return Err(format_err(lineno, "vertex count declared twice"));
                }
                if toks.len() != 2 {
                    return Err(format_err(lineno, "expected `n <count>`"));
                }
                graph = Some(ColoredGraph::new(parse_id(toks[1], lineno)?));
            }
            "e" | "c" => {
                let g = graph
                    .as_mut()
                    .ok_or_else(|| format_err(lineno, "`n <count>` must come first"))?;
                if toks[0] == "e" {
                    if toks.len() != 3 {
                        return Err(format_err(lineno, "expected `e <u> <v>`"));
                    }
                    let u = parse_id(toks[1], lineno)?;
                    let v = parse_id(toks[2], lineno)?;
                    g.add_edge(u, v).map_err(|e| format_err(lineno, e.to_string()))?;
                } else {
                    if toks.len() < 2 {
                        return Err(format_err(lineno, "expected `c <name> <ids...>`"));
                    }
                    let ids = toks[2..]
                        .iter()
                        .map(|t| parse_id(t, lineno))
                        .collect::<Result<Vec<_>>>()?;
                    g.add_color(toks[1], ids)
                        .map_err(|e| format_err(lineno, e.to_string()))?;
                }
            }
            other => return Err(format_err(lineno, format!("unknown directive `{other}`"))),
        }
    }
    graph.ok_or_else(|| format_err(0, "missing `n <count>` line"))
}

pub fn write_graph(graph: &ColoredGraph) -> String {
    let mut out = String::new();
    writeln!(out, "n {}", graph.n()).unwrap();
    for (name, bits) in graph.colors() {
        write!(out, "c {name}").unwrap();
        for v in bits.ones() {
            write!(out, " {v}").unwrap();
        }
        out.push('\n');
    }
    for (u, v) in graph.edges() {
        writeln!(out, "e {u} {v}").unwrap();
    }
    out
}

pub fn parse_treedepth(text: &str, n: usize) -> Result<TreedepthDecomposition> {
    let mut declared: Option<usize> = None;
    let mut parent: Vec<Option<Option<usize>>> = vec![None; n];
    for (lineno, toks) in content_lines(text) {
        match toks[0] {
            "td" if toks.len() == 2 => declared = Some(parse_id(toks[1], lineno)?),
            "p" if toks.len() == 3 => {
                let child = parse_id(toks[1], lineno)?;
                if child >= n {
                    return Err(format_err(lineno, format!("vertex {child} out of range")));
                }
                let par = if toks[2] == "-1" {
                    None
                } else {
                    let p = parse_id(toks[2], lineno)?;
                    if p >= n {
                        return Err(format_err(lineno, format!("vertex {p} out of range")));
                    }
                    Some(p)
                };
                if parent[child].is_some() {
                    return Err(format_err(lineno, format!("parent of {child} given twice")));
                }
                parent[child] = Some(par);
            }
            _ => return Err(format_err(lineno, "expected `td <depth>` or `p <child> <parent>`")),
        }
    }
    let parent = parent
        .into_iter()
        .enumerate()
        .map(|(v, p)| p.ok_or_else(|| format_err(0, format!("no parent line for vertex {v}"))))
        .collect::<Result<Vec<_>>>()?;
    let td = TreedepthDecomposition::from_parents(parent)?;
    if let Some(d) = declared {
        if d != td.depth() {
            return Err(format_err(
                0,
                format!("declared depth {d} but forest has depth {}", td.depth()),
            ));
        }
    }
    Ok(td)
}

pub fn write_treedepth(td: &TreedepthDecomposition) -> String {
    let mut out = String::new();
    writeln!(out, "td {}", td.depth()).unwrap();
    for (v, p) in td.parents().iter().enumerate() {
        match p {
            Some(p) => writeln!(out, "p {v} {p}").unwrap(),
            None => writeln!(out, "p {v} -1").unwrap(),
        }
    }
    out
}
