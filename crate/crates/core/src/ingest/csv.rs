use std::collections::{BTreeMap, HashMap};

use csv::{ReaderBuilder, StringRecord, Trim, WriterBuilder};

use crate::error::{Error, Result};
use crate::model::{BipartiteIncidence, DissimMatrix, Edge, WeightedGraph};

/// Yields `(line, record)` for every data row after the header.
fn records(text: &str, source: &str, header_fields: usize) -> Result<Vec<(usize, StringRecord)>> {
    if text.trim().is_empty() {
        return Err(Error::EmptyInput(source.to_owned()));
    }
    let mut reader = ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(Trim::All)
        .from_reader(text.as_bytes());
    let mut out = Vec::new();
    let mut header_seen = false;
    for rec in reader.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            Error::parse(source, line, e.to_string())
        })?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        if rec.iter().all(str::is_empty) {
            continue;
        }
        if !header_seen {
            header_seen = true;
            if rec.len() != header_fields {
                return Err(Error::parse(
                    source,
                    line,
                    format!(
                        "header must have {header_fields} fields, found {}",
                        rec.len()
                    ),
                ));
            }
            continue;
        }
        out.push((line, rec));
    }
    Ok(out)
}

/// Parses `journal,entity` rows into an incidence.
///
/// An empty entity cell declares a journal without members.
pub fn parse_bipartite_csv(text: &str, source: &str) -> Result<BipartiteIncidence> {
    let rows = records(text, source, 2)?;
    let mut pairs = Vec::with_capacity(rows.len());
    for (line, rec) in &rows {
        if rec.len() != 2 {
            return Err(Error::parse(
                source,
                *line,
                format!("expected 2 fields (journal,entity), found {}", rec.len()),
            ));
        }
        let journal = &rec[0];
        if journal.is_empty() {
            return Err(Error::parse(source, *line, "empty journal label"));
        }
        let entity = (!rec[1].is_empty()).then(|| rec[1].to_owned());
        pairs.push((journal.to_owned(), entity));
    }
    Ok(BipartiteIncidence::from_pairs(pairs))
}

fn parse_weight(field: &str, source: &str, line: usize) -> Result<u64> {
    let w: u64 = field.parse().map_err(|_| {
        Error::parse(
            source,
            line,
            format!("weight {field:?} is not a positive integer"),
        )
    })?;
    if w == 0 {
        return Err(Error::parse(source, line, "weight must be ≥ 1"));
    }
    Ok(w)
}

/// Parses a `source,target,weight` edge list. A row whose target is empty
/// declares an isolated journal.
pub fn parse_edge_list_csv(text: &str, source: &str) -> Result<WeightedGraph> {
    let rows = records(text, source, 3)?;
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut labels = Vec::new();
    let mut intern = |label: &str| -> usize {
        *index.entry(label.to_owned()).or_insert_with(|| {
            labels.push(label.to_owned());
            labels.len() - 1
        })
    };
    let mut weights: BTreeMap<(usize, usize), u64> = BTreeMap::new();
    for (line, rec) in &rows {
        if rec.len() != 3 {
            return Err(Error::parse(
                source,
                *line,
                format!(
                    "expected 3 fields (source,target,weight), found {}",
                    rec.len()
                ),
            ));
        }
        if rec[0].is_empty() {
            return Err(Error::parse(source, *line, "empty source label"));
        }
        let a = intern(&rec[0]);
        if rec[1].is_empty() {
            continue;
        }
        let b = intern(&rec[1]);
        if a == b {
            return Err(Error::parse(
                source,
                *line,
                format!("self-loop at {:?}", &rec[0]),
            ));
        }
        let w = parse_weight(&rec[2], source, *line)?;
        let key = (a.min(b), a.max(b));
        if let Some(&old) = weights.get(&key) {
            if old != w {
                return Err(Error::parse(
                    source,
                    *line,
                    format!("duplicate edge with conflicting weights {old} and {w}"),
                ));
            }
        }
        weights.insert(key, w);
    }
    let edges = weights
        .into_iter()
        .map(|((a, b), weight)| Edge { a, b, weight })
        .collect();
    WeightedGraph::new(labels, edges, None)
}

pub fn write_edge_list_csv(graph: &WeightedGraph) -> Result<String> {
    let mut w = WriterBuilder::new().from_writer(Vec::new());
    let csv_err = |e: csv::Error| Error::Invalid(e.to_string());
    w.write_record(["source", "target", "weight"])
        .map_err(csv_err)?;
    let labels = graph.labels();
    for e in graph.edges() {
        w.write_record([
            labels[e.a].as_str(),
            labels[e.b].as_str(),
            &e.weight.to_string(),
        ])
        .map_err(csv_err)?;
    }
    for (i, &d) in graph.degrees().iter().enumerate() {
        if d == 0 {
            w.write_record([labels[i].as_str(), "", ""])
                .map_err(csv_err)?;
        }
    }
    finish(w)
}

/// Parses `journal,size` rows.
pub fn parse_sizes_csv(text: &str, source: &str) -> Result<HashMap<String, u64>> {
    let rows = records(text, source, 2)?;
    let mut out = HashMap::with_capacity(rows.len());
    for (line, rec) in &rows {
        if rec.len() != 2 {
            return Err(Error::parse(
                source,
                *line,
                "expected 2 fields (journal,size)",
            ));
        }
        let size: u64 = rec[1].parse().map_err(|_| {
            Error::parse(
                source,
                *line,
                format!("size {:?} is not an integer", &rec[1]),
            )
        })?;
        if out.insert(rec[0].to_owned(), size).is_some() {
            return Err(Error::parse(
                source,
                *line,
                format!("duplicate journal {:?}", &rec[0]),
            ));
        }
    }
    Ok(out)
}

pub fn write_sizes_csv(graph: &WeightedGraph) -> Result<String> {
    let sizes = graph.node_size().ok_or(Error::MissingSizes)?;
    let mut w = WriterBuilder::new().from_writer(Vec::new());
    let csv_err = |e: csv::Error| Error::Invalid(e.to_string());
    w.write_record(["journal", "size"]).map_err(csv_err)?;
    for (label, size) in graph.labels().iter().zip(sizes) {
        w.write_record([label.as_str(), &size.to_string()])
            .map_err(csv_err)?;
    }
    finish(w)
}

/// Labelled square matrix: the first row and column hold the labels.
pub fn parse_matrix_csv(text: &str, source: &str) -> Result<DissimMatrix> {
    if text.trim().is_empty() {
        return Err(Error::EmptyInput(source.to_owned()));
    }
    let mut reader = ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(Trim::All)
        .from_reader(text.as_bytes());
    let mut rows = reader.records();
    let header = rows
        .next()
        .ok_or_else(|| Error::EmptyInput(source.to_owned()))?
        .map_err(|e| Error::parse(source, 1, e.to_string()))?;
    let labels: Vec<String> = header.iter().skip(1).map(str::to_owned).collect();
    let n = labels.len();
    let mut data = Vec::with_capacity(n * n);
    let mut seen = 0;
    for rec in rows {
        let rec = rec.map_err(|e| Error::parse(source, 0, e.to_string()))?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        if rec.iter().all(str::is_empty) {
            continue;
        }
        if seen == n {
            return Err(Error::parse(
                source,
                line,
                format!("more than {n} data rows"),
            ));
        }
        if rec.len() != n + 1 {
            return Err(Error::parse(
                source,
                line,
                format!("expected {} fields, found {}", n + 1, rec.len()),
            ));
        }
        if rec[0] != labels[seen] {
            return Err(Error::parse(
                source,
                line,
                format!(
                    "row label {:?} does not match column label {:?}",
                    &rec[0], labels[seen]
                ),
            ));
        }
        for field in rec.iter().skip(1) {
            let v: f64 = field
                .parse()
                .map_err(|_| Error::parse(source, line, format!("{field:?} is not a number")))?;
            data.push(v);
        }
        seen += 1;
    }
    if seen != n {
        return Err(Error::parse(
            source,
            0,
            format!("{seen} data rows for {n} labels"),
        ));
    }
    DissimMatrix::new(labels, data)
}

/// Values are written in shortest round-trip form, so parsing the output
/// reproduces the matrix bit for bit.
pub fn write_matrix_csv(m: &DissimMatrix) -> Result<String> {
    let mut w = WriterBuilder::new().from_writer(Vec::new());
    let csv_err = |e: csv::Error| Error::Invalid(e.to_string());
    let mut header = vec![String::new()];
    header.extend(m.labels().iter().cloned());
    w.write_record(&header).map_err(csv_err)?;
    for i in 0..m.n() {
        let mut row = vec![m.labels()[i].clone()];
        row.extend((0..m.n()).map(|j| format!("{}", m.get(i, j))));
        w.write_record(&row).map_err(csv_err)?;
    }
    finish(w)
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| Error::Invalid(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Invalid(e.to_string()))
}
