//! Reading and writing the on-disk formats: bipartite and one-mode CSV,
//! dissimilarity matrix CSV, and Pajek `.net` / `.clu`.

mod csv;
mod pajek;

use std::fs;
use std::io::Write;
use std::path::Path;

pub use self::csv::{
    parse_bipartite_csv, parse_edge_list_csv, parse_matrix_csv, parse_sizes_csv,
    write_edge_list_csv, write_matrix_csv, write_sizes_csv,
};
pub use self::pajek::{parse_pajek_clu, parse_pajek_net, write_pajek_clu, write_pajek_net};

use crate::error::{Error, Result};
use crate::model::{BipartiteIncidence, DissimMatrix, Partition, WeightedGraph};

pub(crate) fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn display(path: &Path) -> String {
    path.display().to_string()
}

pub fn read_bipartite_csv(path: impl AsRef<Path>) -> Result<BipartiteIncidence> {
    let path = path.as_ref();
    parse_bipartite_csv(&read_text(path)?, &display(path))
}

pub fn read_edge_list_csv(path: impl AsRef<Path>) -> Result<WeightedGraph> {
    let path = path.as_ref();
    parse_edge_list_csv(&read_text(path)?, &display(path))
}

pub fn read_matrix_csv(path: impl AsRef<Path>) -> Result<DissimMatrix> {
    let path = path.as_ref();
    parse_matrix_csv(&read_text(path)?, &display(path))
}

pub fn read_pajek_net(path: impl AsRef<Path>) -> Result<WeightedGraph> {
    let path = path.as_ref();
    parse_pajek_net(&read_text(path)?, &display(path))
}

pub fn read_pajek_clu(path: impl AsRef<Path>, n: usize) -> Result<Partition> {
    let path = path.as_ref();
    parse_pajek_clu(&read_text(path)?, n, &display(path))
}

/// Attaches per-journal entity counts from a `journal,size` CSV.
pub fn read_sizes_into(graph: WeightedGraph, path: impl AsRef<Path>) -> Result<WeightedGraph> {
    let path = path.as_ref();
    let sizes = parse_sizes_csv(&read_text(path)?, &display(path))?;
    let mut ordered = Vec::with_capacity(graph.n());
    for label in graph.labels() {
        match sizes.get(label) {
            Some(&s) => ordered.push(s),
            None => {
                return Err(Error::Alignment(format!(
                    "{}: no size for journal {label:?}",
                    path.display()
                )))
            }
        }
    }
    if sizes.len() != graph.n() {
        return Err(Error::Alignment(format!(
            "{}: {} sizes for {} journals",
            path.display(),
            sizes.len(),
            graph.n()
        )));
    }
    graph.with_node_size(ordered)
}

/// Writes `contents` to `path` through a sibling temporary file, so a
/// failure never leaves a partial file behind.
pub fn write_atomic(path: impl AsRef<Path>, contents: &[u8]) -> Result<()> {
    let path = path.as_ref();
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(dir, e))?;
    tmp.write_all(contents).map_err(|e| Error::io(path, e))?;
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}
