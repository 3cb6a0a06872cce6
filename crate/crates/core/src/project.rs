//! One-mode projection of journal × entity incidences.

use std::collections::BTreeMap;

use crate::model::{BipartiteIncidence, Edge, WeightedGraph};

/// Journal network linking journals that share entities; the weight is
/// the number of shared entities.
///
/// Every journal is kept, including those sharing nothing (degree 0).
/// `node_size` records each journal's entity count so Jaccard
/// dissimilarities can be recovered from the graph alone.
pub fn project_interlocking(inc: &BipartiteIncidence) -> WeightedGraph {
    let n_entities = inc.entity_labels().len();
    let mut journals_of: Vec<Vec<usize>> = vec![Vec::new(); n_entities];
    for j in 0..inc.n_journals() {
        for &e in inc.members(j) {
            journals_of[e].push(j);
        }
    }
    let mut weights: BTreeMap<(usize, usize), u64> = BTreeMap::new();
    for journals in &journals_of {
        // journals are pushed in increasing j, so x < y below
        for (ix, &x) in journals.iter().enumerate() {
            for &y in &journals[ix + 1..] {
                *weights.entry((x, y)).or_insert(0) += 1;
            }
        }
    }
    let edges = weights
        .into_iter()
        .map(|((a, b), weight)| Edge { a, b, weight })
        .collect();
    let sizes = (0..inc.n_journals())
        .map(|j| inc.members(j).len() as u64)
        .collect();
    WeightedGraph::new(inc.journal_labels().to_vec(), edges, Some(sizes))
        .expect("projection of a valid incidence is a valid graph")
}

/// Co-citation network: entities are citing articles, and the weight of
/// `(i, j)` counts articles citing both journals. An article citing a
/// journal several times counts once.
pub fn project_cocitation(inc: &BipartiteIncidence) -> WeightedGraph {
    project_interlocking(inc)
}
