//! Jaccard dissimilarity matrices between journals.

use std::collections::HashSet;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{BipartiteIncidence, DissimMatrix, WeightedGraph};

/// Value given to a pair of journals that both have no members.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EmptyPolicy {
    /// Treat two empty journals as maximally dissimilar (1).
    #[default]
    Maximal,
    /// Treat them as identical (0).
    Identical,
}

impl EmptyPolicy {
    fn value(self) -> f64 {
        match self {
            EmptyPolicy::Maximal => 1.0,
            EmptyPolicy::Identical => 0.0,
        }
    }
}

/// `(|A ∪ B| − |A ∩ B|) / |A ∪ B|` from the two counts.
fn from_counts(intersection: u64, union: u64) -> f64 {
    (union - intersection) as f64 / union as f64
}

/// Jaccard dissimilarity of two sets. Undefined when both are empty.
pub fn jaccard<T: Eq + Hash>(a: &HashSet<T>, b: &HashSet<T>) -> Result<f64> {
    let inter = a.intersection(b).count() as u64;
    let union = (a.len() + b.len()) as u64 - inter;
    if union == 0 {
        return Err(Error::EmptySets);
    }
    Ok(from_counts(inter, union))
}

fn sorted_intersection(a: &[usize], b: &[usize]) -> u64 {
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

fn fill(
    n: usize,
    labels: Vec<String>,
    mut pair: impl FnMut(usize, usize) -> Result<f64>,
) -> Result<DissimMatrix> {
    let mut data = vec![0.0; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let d = pair(i, j)?;
            data[i * n + j] = d;
            data[j * n + i] = d;
        }
    }
    DissimMatrix::new(labels, data)
}

/// Pairwise Jaccard dissimilarity of the journals' member sets.
pub fn dissim_from_incidence(inc: &BipartiteIncidence, empty: EmptyPolicy) -> Result<DissimMatrix> {
    fill(inc.n_journals(), inc.journal_labels().to_vec(), |i, j| {
        let (a, b) = (inc.members(i), inc.members(j));
        let inter = sorted_intersection(a, b);
        let union = (a.len() + b.len()) as u64 - inter;
        Ok(if union == 0 {
            empty.value()
        } else {
            from_counts(inter, union)
        })
    })
}

/// Recovers the Jaccard matrix from a projected graph: the edge weight is
/// the intersection size and `node_size` the set sizes.
pub fn dissim_from_graph(graph: &WeightedGraph, empty: EmptyPolicy) -> Result<DissimMatrix> {
    let sizes = graph.node_size().ok_or(Error::MissingSizes)?;
    let weights = graph.weight_map();
    fill(graph.n(), graph.labels().to_vec(), |i, j| {
        let w = weights.get(&(i, j)).copied().unwrap_or(0);
        if w > sizes[i].min(sizes[j]) {
            return Err(Error::Invalid(format!(
                "edge ({:?},{:?}) weight {w} exceeds node sizes {} and {}",
                graph.labels()[i],
                graph.labels()[j],
                sizes[i],
                sizes[j]
            )));
        }
        let union = sizes[i] + sizes[j] - w;
        Ok(if union == 0 {
            empty.value()
        } else {
            from_counts(w, union)
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::project::project_interlocking;

    fn set(items: &[u32]) -> HashSet<u32> {
        items.iter().copied().collect()
    }

    #[test]
    fn identical_sets() {
        assert_eq!(jaccard(&set(&[1, 2, 3]), &set(&[1, 2, 3])).unwrap(), 0.0);
    }

    #[test]
    fn disjoint_sets() {
        assert_eq!(jaccard(&set(&[1, 2]), &set(&[3])).unwrap(), 1.0);
        assert_eq!(jaccard(&set(&[]), &set(&[3])).unwrap(), 1.0);
    }

    #[test]
    fn partial_overlap() {
        assert_eq!(jaccard(&set(&[1, 2]), &set(&[2, 3, 4])).unwrap(), 0.75);
    }

    #[test]
    fn both_empty_is_an_error() {
        assert!(matches!(
            jaccard(&set(&[]), &set(&[])),
            Err(Error::EmptySets)
        ));
    }

    fn example() -> BipartiteIncidence {
        BipartiteIncidence::from_pairs(
            [
                ("J1", "a"),
                ("J1", "b"),
                ("J2", "b"),
                ("J2", "c"),
                ("J3", "d"),
            ]
            .map(|(j, e)| (j, Some(e))),
        )
    }

    #[test]
    fn incidence_matrix_values() {
        let m = dissim_from_incidence(&example(), EmptyPolicy::default()).unwrap();
        assert_eq!(m.get(0, 1), 2.0 / 3.0);
        assert_eq!(m.get(0, 2), 1.0);
        assert_eq!(m.get(1, 2), 1.0);
    }

    #[test]
    fn identical_membership_gives_zero_matrix() {
        let inc = BipartiteIncidence::from_pairs(
            [
                ("A", "x"),
                ("A", "y"),
                ("B", "x"),
                ("B", "y"),
                ("C", "y"),
                ("C", "x"),
            ]
            .map(|(j, e)| (j, Some(e))),
        );
        let m = dissim_from_incidence(&inc, EmptyPolicy::default()).unwrap();
        assert!(m.as_slice().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn empty_pairs_follow_policy() {
        let inc = BipartiteIncidence::from_pairs([("A", None), ("B", None), ("C", Some("x"))]);
        let max = dissim_from_incidence(&inc, EmptyPolicy::Maximal).unwrap();
        let ident = dissim_from_incidence(&inc, EmptyPolicy::Identical).unwrap();
        assert_eq!(max.get(0, 1), 1.0);
        assert_eq!(ident.get(0, 1), 0.0);
        assert_eq!(ident.get(0, 2), 1.0);
    }

    #[test]
    fn graph_route() {
        let g = WeightedGraph::new(
            vec!["a".into(), "b".into(), "c".into()],
            vec![crate::model::Edge {
                a: 0,
                b: 1,
                weight: 1,
            }],
            Some(vec![2, 2, 4]),
        )
        .unwrap();
        let m = dissim_from_graph(&g, EmptyPolicy::default()).unwrap();
        assert_eq!(m.get(0, 1), 2.0 / 3.0);
        assert_eq!(m.get(1, 2), 1.0);
    }

    #[test]
    fn graph_route_needs_sizes() {
        let g = WeightedGraph::new(vec!["a".into(), "b".into()], vec![], None).unwrap();
        let err = dissim_from_graph(&g, EmptyPolicy::default()).unwrap_err();
        assert_eq!(err.to_string(), "sizes required for Jaccard recovery");
    }

    #[test]
    fn both_routes_agree_on_example() {
        let inc = example();
        assert_eq!(
            dissim_from_graph(&project_interlocking(&inc), EmptyPolicy::default()).unwrap(),
            dissim_from_incidence(&inc, EmptyPolicy::default()).unwrap()
        );
    }
}
