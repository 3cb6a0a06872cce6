//! Pajek `.net` and `.clu` text formats.
//!
//! Vertices are 1-based. Only the `*Vertices` and `*Edges` sections are
//! understood; directed `*Arcs` and anything else is rejected.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::model::{Edge, Partition, WeightedGraph};

enum Section {
    Preamble,
    Vertices,
    Edges,
}

/// Parses a `*Vertices n` header line, returning `n`.
fn vertices_header(line: &str, source: &str, lineno: usize) -> Result<usize> {
    let mut parts = line.split_whitespace();
    parts.next();
    let count = parts
        .next()
        .ok_or_else(|| Error::parse(source, lineno, "*Vertices needs a vertex count"))?;
    count
        .parse()
        .map_err(|_| Error::parse(source, lineno, format!("bad vertex count {count:?}")))
}

fn section_keyword(line: &str) -> String {
    line.split_whitespace()
        .next()
        .unwrap_or_default()
        .to_ascii_lowercase()
}

/// Splits a vertex line `i "label" ...` into its index and label.
fn vertex_line(line: &str, source: &str, lineno: usize) -> Result<(usize, Option<String>)> {
    let line = line.trim();
    let (index, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
    let index: usize = index
        .parse()
        .map_err(|_| Error::parse(source, lineno, format!("bad vertex index {index:?}")))?;
    let rest = rest.trim_start();
    let label = if let Some(quoted) = rest.strip_prefix('"') {
        let end = quoted
            .find('"')
            .ok_or_else(|| Error::parse(source, lineno, "unterminated vertex label"))?;
        Some(quoted[..end].to_owned())
    } else {
        rest.split_whitespace().next().map(str::to_owned)
    };
    Ok((index, label))
}

fn parse_edge_weight(field: Option<&str>, source: &str, lineno: usize) -> Result<u64> {
    let Some(field) = field else { return Ok(1) };
    let bad = || {
        Error::parse(
            source,
            lineno,
            format!("weight {field:?} is not a positive integer"),
        )
    };
    let w = match field.parse::<u64>() {
        Ok(w) => w,
        Err(_) => {
            let f: f64 = field.parse().map_err(|_| bad())?;
            if f.fract() != 0.0 || f < 1.0 || f > u64::MAX as f64 {
                return Err(bad());
            }
            f as u64
        }
    };
    if w == 0 {
        return Err(bad());
    }
    Ok(w)
}

/// Parses Pajek `.net` text. A missing edge weight defaults to 1 and
/// unlisted vertices take their index as label.
pub fn parse_pajek_net(text: &str, source: &str) -> Result<WeightedGraph> {
    if text.trim().is_empty() {
        return Err(Error::EmptyInput(source.to_owned()));
    }
    let mut section = Section::Preamble;
    let mut labels: Vec<Option<String>> = Vec::new();
    let mut weights: BTreeMap<(usize, usize), u64> = BTreeMap::new();
    let mut n = None;
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        if line.starts_with('*') {
            match section_keyword(line).as_str() {
                "*vertices" => {
                    if n.is_some() {
                        return Err(Error::parse(source, lineno, "repeated *Vertices section"));
                    }
                    let count = vertices_header(line, source, lineno)?;
                    n = Some(count);
                    labels = vec![None; count];
                    section = Section::Vertices;
                }
                "*edges" => {
                    if n.is_none() {
                        return Err(Error::parse(source, lineno, "*Edges before *Vertices"));
                    }
                    section = Section::Edges;
                }
                other => {
                    return Err(Error::parse(
                        source,
                        lineno,
                        format!("unknown section header {other:?}"),
                    ))
                }
            }
            continue;
        }
        match section {
            Section::Preamble => {
                return Err(Error::parse(source, lineno, "data before *Vertices"));
            }
            Section::Vertices => {
                let count = labels.len();
                let (index, label) = vertex_line(line, source, lineno)?;
                if index == 0 || index > count {
                    return Err(Error::parse(
                        source,
                        lineno,
                        format!("vertex index {index} out of range"),
                    ));
                }
                labels[index - 1] = label;
            }
            Section::Edges => {
                let count = labels.len();
                let mut fields = line.split_whitespace();
                let mut endpoint = || -> Result<usize> {
                    let f = fields
                        .next()
                        .ok_or_else(|| Error::parse(source, lineno, "edge needs two endpoints"))?;
                    let v: usize = f.parse().map_err(|_| {
                        Error::parse(source, lineno, format!("bad vertex index {f:?}"))
                    })?;
                    if v == 0 || v > count {
                        return Err(Error::parse(
                            source,
                            lineno,
                            format!("vertex index {v} out of range"),
                        ));
                    }
                    Ok(v - 1)
                };
                let a = endpoint()?;
                let b = endpoint()?;
                let w = parse_edge_weight(fields.next(), source, lineno)?;
                if a == b {
                    return Err(Error::parse(
                        source,
                        lineno,
                        format!("self-loop at vertex {}", a + 1),
                    ));
                }
                let key = (a.min(b), a.max(b));
                if let Some(&old) = weights.get(&key) {
                    if old != w {
                        return Err(Error::parse(
                            source,
                            lineno,
                            format!(
                                "duplicate edge {} {} with conflicting weights {old} and {w}",
                                key.0 + 1,
                                key.1 + 1
                            ),
                        ));
                    }
                }
                weights.insert(key, w);
            }
        }
    }
    if n.is_none() {
        return Err(Error::parse(source, 0, "missing *Vertices section"));
    }
    let labels = labels
        .into_iter()
        .enumerate()
        .map(|(i, l)| l.unwrap_or_else(|| (i + 1).to_string()))
        .collect();
    let edges = weights
        .into_iter()
        .map(|((a, b), weight)| Edge { a, b, weight })
        .collect();
    WeightedGraph::new(labels, edges, None)
}

fn check_label(label: &str) -> Result<()> {
    if label.contains('"') || label.contains('\n') || label.contains('\r') {
        return Err(Error::Invalid(format!(
            "label {label:?} cannot be written to Pajek (contains a quote or newline)"
        )));
    }
    Ok(())
}

pub fn write_pajek_net(graph: &WeightedGraph) -> Result<String> {
    let mut out = String::new();
    let _ = writeln!(out, "*Vertices {}", graph.n());
    for (i, label) in graph.labels().iter().enumerate() {
        check_label(label)?;
        let _ = writeln!(out, "{} \"{}\"", i + 1, label);
    }
    out.push_str("*Edges\n");
    for e in graph.edges() {
        let _ = writeln!(out, "{} {} {}", e.a + 1, e.b + 1, e.weight);
    }
    Ok(out)
}

pub fn write_pajek_clu(partition: &Partition) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "*Vertices {}", partition.len());
    for &c in partition.ids() {
        let _ = writeln!(out, "{c}");
    }
    out
}

/// Parses a `.clu` file expected to describe `n` vertices.
///
/// Ids already forming `1..=k` are kept as written; anything else (for
/// instance 0-based clusters) is renumbered by first appearance.
pub fn parse_pajek_clu(text: &str, n: usize, source: &str) -> Result<Partition> {
    let mut declared = None;
    let mut ids: Vec<i64> = Vec::with_capacity(n);
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        if line.starts_with('*') {
            if section_keyword(line) != "*vertices" || declared.is_some() {
                return Err(Error::parse(
                    source,
                    lineno,
                    format!("unexpected header {line:?}"),
                ));
            }
            declared = Some(vertices_header(line, source, lineno)?);
            continue;
        }
        let id: i64 = line
            .parse()
            .map_err(|_| Error::parse(source, lineno, format!("bad community id {line:?}")))?;
        ids.push(id);
    }
    if let Some(d) = declared {
        if d != n {
            return Err(Error::PartitionLength {
                expected: n,
                found: d,
            });
        }
    }
    if ids.len() != n {
        return Err(Error::PartitionLength {
            expected: n,
            found: ids.len(),
        });
    }
    let strict: Option<Vec<u32>> = ids.iter().map(|&c| u32::try_from(c).ok()).collect();
    match strict.map(Partition::new) {
        Some(Ok(p)) => Ok(p),
        _ => Ok(Partition::from_labels(&ids)),
    }
}
