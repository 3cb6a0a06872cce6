//! Domain types shared by every stage of the pipeline.
//!
//! Everything here is immutable once built. Constructors validate their
//! invariants; `WeightedGraph::from_raw` is the one escape hatch, kept so
//! that [`validate`] has something to diagnose.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn check_unique(labels: &[String], what: &str) -> Result<()> {
    let mut seen = HashSet::with_capacity(labels.len());
    for label in labels {
        if !seen.insert(label.as_str()) {
            return Err(Error::Invalid(format!("duplicate {what} label {label:?}")));
        }
    }
    Ok(())
}

/// Journals × entities membership structure.
///
/// Entities are editors, authors or citing articles depending on which
/// network is being built. Membership lists are kept sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteIncidence {
    journals: Vec<String>,
    entities: Vec<String>,
    membership: Vec<Vec<usize>>,
}

impl BipartiteIncidence {
    pub fn new(
        journals: Vec<String>,
        entities: Vec<String>,
        membership: Vec<Vec<usize>>,
    ) -> Result<Self> {
        check_unique(&journals, "journal")?;
        check_unique(&entities, "entity")?;
        if membership.len() != journals.len() {
            return Err(Error::Invalid(format!(
                "membership has {} rows for {} journals",
                membership.len(),
                journals.len()
            )));
        }
        let mut membership = membership;
        for (j, members) in membership.iter_mut().enumerate() {
            let before = members.len();
            members.sort_unstable();
            members.dedup();
            if members.len() != before {
                return Err(Error::Invalid(format!(
                    "journal {:?} lists an entity twice",
                    journals[j]
                )));
            }
            if let Some(&bad) = members.iter().find(|&&e| e >= entities.len()) {
                return Err(Error::Invalid(format!(
                    "journal {:?} references entity index {bad} out of range",
                    journals[j]
                )));
            }
        }
        Ok(Self {
            journals,
            entities,
            membership,
        })
    }

    /// Builds an incidence from `(journal, entity)` pairs.
    ///
    /// Journals and entities are numbered in order of first appearance;
    /// repeated pairs collapse. A pair with `None` registers a journal
    /// without adding a member.
    pub fn from_pairs<J, E, I>(pairs: I) -> Self
    where
        J: AsRef<str>,
        E: AsRef<str>,
        I: IntoIterator<Item = (J, Option<E>)>,
    {
        let mut journal_ix: HashMap<String, usize> = HashMap::new();
        let mut entity_ix: HashMap<String, usize> = HashMap::new();
        let mut journals = Vec::new();
        let mut entities = Vec::new();
        let mut membership: Vec<Vec<usize>> = Vec::new();
        for (journal, entity) in pairs {
            let journal = journal.as_ref();
            let j = *journal_ix.entry(journal.to_owned()).or_insert_with(|| {
                journals.push(journal.to_owned());
                membership.push(Vec::new());
                journals.len() - 1
            });
            if let Some(entity) = entity {
                let entity = entity.as_ref();
                let e = *entity_ix.entry(entity.to_owned()).or_insert_with(|| {
                    entities.push(entity.to_owned());
                    entities.len() - 1
                });
                membership[j].push(e);
            }
        }
        for members in &mut membership {
            members.sort_unstable();
            members.dedup();
        }
        Self {
            journals,
            entities,
            membership,
        }
    }

    pub fn journal_labels(&self) -> &[String] {
        &self.journals
    }

    pub fn entity_labels(&self) -> &[String] {
        &self.entities
    }

    pub fn n_journals(&self) -> usize {
        self.journals.len()
    }

    /// Sorted entity indices affiliated with journal `j`.
    pub fn members(&self, j: usize) -> &[usize] {
        &self.membership[j]
    }

    /// Returns a copy with journals listed in `order` (a permutation of
    /// the current indices).
    pub fn permute_journals(&self, order: &[usize]) -> Result<Self> {
        let perm = Permutation::new(order.to_vec())?;
        if perm.len() != self.n_journals() {
            return Err(Error::Alignment(format!(
                "permutation of length {} for {} journals",
                perm.len(),
                self.n_journals()
            )));
        }
        Ok(Self {
            journals: order.iter().map(|&j| self.journals[j].clone()).collect(),
            entities: self.entities.clone(),
            membership: order.iter().map(|&j| self.membership[j].clone()).collect(),
        })
    }
}

/// An undirected weighted edge, stored with `a < b` once validated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub weight: u64,
}

/// Undirected, integer-weighted one-mode journal network.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedGraph {
    labels: Vec<String>,
    edges: Vec<Edge>,
    node_size: Option<Vec<u64>>,
}

impl WeightedGraph {
    /// Validating constructor. Edges are canonicalised to `a < b` and
    /// sorted; any [`validate`] violation is returned as an error.
    pub fn new(labels: Vec<String>, edges: Vec<Edge>, node_size: Option<Vec<u64>>) -> Result<Self> {
        let mut edges: Vec<Edge> = edges
            .into_iter()
            .map(|e| {
                if e.a > e.b {
                    Edge {
                        a: e.b,
                        b: e.a,
                        weight: e.weight,
                    }
                } else {
                    e
                }
            })
            .collect();
        edges.sort_unstable();
        let graph = Self {
            labels,
            edges,
            node_size,
        };
        let violations = validate(&graph);
        if let Some(first) = violations.first() {
            return Err(Error::Invalid(first.to_string()));
        }
        Ok(graph)
    }

    /// Builds a graph without checking invariants. Only useful for feeding
    /// [`validate`].
    pub fn from_raw(labels: Vec<String>, edges: Vec<Edge>, node_size: Option<Vec<u64>>) -> Self {
        Self {
            labels,
            edges,
            node_size,
        }
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn node_size(&self) -> Option<&[u64]> {
        self.node_size.as_deref()
    }

    pub fn with_node_size(mut self, sizes: Vec<u64>) -> Result<Self> {
        if sizes.len() != self.n() {
            return Err(Error::Invalid(format!(
                "{} node sizes for {} nodes",
                sizes.len(),
                self.n()
            )));
        }
        self.node_size = Some(sizes);
        let violations = validate(&self);
        if let Some(first) = violations.first() {
            return Err(Error::Invalid(first.to_string()));
        }
        Ok(self)
    }

    /// Unweighted degree of every node.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n()];
        for e in &self.edges {
            deg[e.a] += 1;
            deg[e.b] += 1;
        }
        deg
    }

    pub fn total_weight(&self) -> u64 {
        self.edges.iter().map(|e| e.weight).sum()
    }

    /// Weight lookup keyed by the canonical `(min, max)` pair.
    pub fn weight_map(&self) -> BTreeMap<(usize, usize), u64> {
        self.edges.iter().map(|e| ((e.a, e.b), e.weight)).collect()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Reorders nodes to follow `labels`. The label sets must match exactly.
    pub fn aligned_to(&self, labels: &[String]) -> Result<Self> {
        let order = alignment_order(&self.labels, labels)?;
        let mut new_index = vec![0; order.len()];
        for (new, &old) in order.iter().enumerate() {
            new_index[old] = new;
        }
        let edges = self
            .edges
            .iter()
            .map(|e| Edge {
                a: new_index[e.a],
                b: new_index[e.b],
                weight: e.weight,
            })
            .collect();
        let node_size = self
            .node_size
            .as_ref()
            .map(|s| order.iter().map(|&old| s[old]).collect());
        Self::new(labels.to_vec(), edges, node_size)
    }
}

/// For each label in `target`, its index in `source`. Fails unless both
/// hold exactly the same labels.
pub fn alignment_order(source: &[String], target: &[String]) -> Result<Vec<usize>> {
    let index: HashMap<&str, usize> = source
        .iter()
        .enumerate()
        .map(|(i, l)| (l.as_str(), i))
        .collect();
    let mut order = Vec::with_capacity(target.len());
    let mut missing = Vec::new();
    for label in target {
        match index.get(label.as_str()) {
            Some(&i) => order.push(i),
            None => missing.push(label.as_str()),
        }
    }
    if !missing.is_empty() || source.len() != target.len() {
        let target_set: HashSet<&str> = target.iter().map(String::as_str).collect();
        let extra: Vec<&str> = source
            .iter()
            .map(String::as_str)
            .filter(|l| !target_set.contains(l))
            .collect();
        return Err(Error::Alignment(format!(
            "journal sets differ (missing: {missing:?}, unexpected: {extra:?})"
        )));
    }
    Ok(order)
}

/// One broken [`WeightedGraph`] invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub rule: &'static str,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.message)
    }
}

/// Lists every invariant violation in `graph`; empty means valid.
pub fn validate(graph: &WeightedGraph) -> Vec<Violation> {
    let mut out = Vec::new();
    let n = graph.n();
    let mut seen = HashSet::new();
    for label in &graph.labels {
        if !seen.insert(label.as_str()) {
            out.push(Violation {
                rule: "unique-labels",
                message: format!("duplicate label {label:?}"),
            });
        }
    }
    let mut pairs = HashSet::new();
    for e in &graph.edges {
        if e.a >= n || e.b >= n {
            out.push(Violation {
                rule: "index-range",
                message: format!("edge ({},{}) references a node outside 0..{n}", e.a, e.b),
            });
            continue;
        }
        if e.a == e.b {
            out.push(Violation {
                rule: "no-self-loops",
                message: format!("self-loop at {}", e.a),
            });
        }
        if e.weight == 0 {
            out.push(Violation {
                rule: "positive-weight",
                message: format!("edge ({},{}) has weight 0", e.a, e.b),
            });
        }
        if !pairs.insert((e.a.min(e.b), e.a.max(e.b))) {
            out.push(Violation {
                rule: "simple-graph",
                message: format!("duplicate edge ({},{})", e.a, e.b),
            });
        }
    }
    if let Some(sizes) = &graph.node_size {
        if sizes.len() != n {
            out.push(Violation {
                rule: "node-size-length",
                message: format!("{} node sizes for {n} nodes", sizes.len()),
            });
        }
    }
    out
}

/// Symmetric dissimilarity matrix with zero diagonal and entries in [0, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct DissimMatrix {
    labels: Vec<String>,
    data: Vec<f64>,
}

impl DissimMatrix {
    /// `data` is row-major, `labels.len()²` entries.
    pub fn new(labels: Vec<String>, data: Vec<f64>) -> Result<Self> {
        let n = labels.len();
        check_unique(&labels, "matrix")?;
        if data.len() != n * n {
            return Err(Error::Invalid(format!(
                "{} entries for a {n}x{n} matrix",
                data.len()
            )));
        }
        for i in 0..n {
            if data[i * n + i] != 0.0 {
                return Err(Error::Invalid(format!("nonzero diagonal at {i}")));
            }
            for j in 0..n {
                let v = data[i * n + j];
                if !(0.0..=1.0).contains(&v) {
                    return Err(Error::Invalid(format!(
                        "entry ({i},{j}) = {v} outside [0,1]"
                    )));
                }
                if v != data[j * n + i] {
                    return Err(Error::Invalid(format!("asymmetric at ({i},{j})")));
                }
            }
        }
        Ok(Self { labels, data })
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n() + j]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// Applies the same permutation to rows and columns: entry `(i, j)` of
    /// the result is entry `(order[i], order[j])` of `self`.
    pub fn permuted(&self, order: &[usize]) -> Result<Self> {
        let n = self.n();
        let perm = Permutation::new(order.to_vec())?;
        if perm.len() != n {
            return Err(Error::Alignment(format!(
                "permutation of length {} for n={n}",
                perm.len()
            )));
        }
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                data[i * n + j] = self.data[order[i] * n + order[j]];
            }
        }
        Ok(Self {
            labels: order.iter().map(|&i| self.labels[i].clone()).collect(),
            data,
        })
    }

    pub fn aligned_to(&self, labels: &[String]) -> Result<Self> {
        let order = alignment_order(&self.labels, labels)?;
        self.permuted(&order)
    }
}

/// A validated permutation of `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(order: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; order.len()];
        for &i in &order {
            if i >= order.len() || seen[i] {
                return Err(Error::Invalid("not a permutation".into()));
            }
            seen[i] = true;
        }
        Ok(Self(order))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Non-overlapping assignment of nodes to communities `1..=k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    ids: Vec<u32>,
    k: u32,
}

impl Partition {
    /// Accepts ids that already form a contiguous `1..=k` range.
    pub fn new(ids: Vec<u32>) -> Result<Self> {
        let k = ids.iter().copied().max().unwrap_or(0);
        let mut used = vec![false; k as usize + 1];
        for &c in &ids {
            if c == 0 {
                return Err(Error::Invalid("community ids start at 1".into()));
            }
            used[c as usize] = true;
        }
        if let Some(gap) = (1..=k as usize).find(|&c| !used[c]) {
            return Err(Error::Invalid(format!("community id {gap} is unused")));
        }
        Ok(Self { ids, k })
    }

    /// Renumbers arbitrary labels to `1..=k` in order of first appearance.
    pub fn from_labels<T: std::hash::Hash + Eq>(labels: &[T]) -> Self {
        let mut map: HashMap<&T, u32> = HashMap::new();
        let ids = labels
            .iter()
            .map(|l| {
                let next = map.len() as u32 + 1;
                *map.entry(l).or_insert(next)
            })
            .collect();
        Self {
            ids,
            k: map.len() as u32,
        }
    }

    /// Renumbers communities by decreasing size; equal sizes keep the
    /// order of their lowest node index.
    pub fn canonical_by_size<T: std::hash::Hash + Eq>(labels: &[T]) -> Self {
        let first = Self::from_labels(labels);
        let sizes = first.sizes();
        let mut order: Vec<u32> = (1..=first.k).collect();
        order.sort_by_key(|&c| std::cmp::Reverse(sizes[c as usize - 1]));
        let mut remap = vec![0u32; first.k as usize + 1];
        for (new, &old) in order.iter().enumerate() {
            remap[old as usize] = new as u32 + 1;
        }
        Self {
            ids: first.ids.iter().map(|&c| remap[c as usize]).collect(),
            k: first.k,
        }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn n_communities(&self) -> usize {
        self.k as usize
    }

    pub fn ids(&self) -> &[u32] {
        &self.ids
    }

    /// Community of node `i`, in `1..=k`.
    pub fn community(&self, i: usize) -> u32 {
        self.ids[i]
    }

    /// Node count per community, index `c - 1`.
    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k as usize];
        for &c in &self.ids {
            sizes[c as usize - 1] += 1;
        }
        sizes
    }

    pub fn permuted(&self, order: &[usize]) -> Self {
        Self::from_labels(&order.iter().map(|&i| self.ids[i]).collect::<Vec<_>>())
    }
}

/// Outcome of a distance-correlation permutation test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DcorResult {
    pub dcov2: f64,
    pub dvar2_a: f64,
    pub dvar2_b: f64,
    pub rd: f64,
    pub sqrt_rd: f64,
    pub p_value: f64,
    pub exceed_count: u64,
    pub n_permutations: u64,
    pub seed: u64,
    pub centering: crate::dcor::Centering,
}

/// Cross-tabulation of two partitions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContingencyTable {
    rows: usize,
    cols: usize,
    counts: Vec<u64>,
    row_margins: Vec<u64>,
    col_margins: Vec<u64>,
    total: u64,
}

impl ContingencyTable {
    /// `counts` is row-major `rows × cols`.
    pub fn new(rows: usize, cols: usize, counts: Vec<u64>) -> Result<Self> {
        if counts.len() != rows * cols {
            return Err(Error::Invalid(format!(
                "{} counts for a {rows}x{cols} table",
                counts.len()
            )));
        }
        let mut row_margins = vec![0; rows];
        let mut col_margins = vec![0; cols];
        for r in 0..rows {
            for c in 0..cols {
                let v = counts[r * cols + c];
                row_margins[r] += v;
                col_margins[c] += v;
            }
        }
        let total = row_margins.iter().sum();
        Ok(Self {
            rows,
            cols,
            counts,
            row_margins,
            col_margins,
            total,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.counts[r * self.cols + c]
    }

    pub fn row_margins(&self) -> &[u64] {
        &self.row_margins
    }

    pub fn col_margins(&self) -> &[u64] {
        &self.col_margins
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn transposed(&self) -> Self {
        let mut counts = vec![0; self.counts.len()];
        for r in 0..self.rows {
            for c in 0..self.cols {
                counts[c * self.rows + r] = self.get(r, c);
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            counts,
            row_margins: self.col_margins.clone(),
            col_margins: self.row_margins.clone(),
            total: self.total,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NetworkStats {
    pub n: usize,
    pub edges: usize,
    pub density: f64,
    pub average_degree: f64,
    pub isolated_count: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CommunityStats {
    pub modularity: f64,
    pub resolution: f64,
    pub n_communities: usize,
    pub n_non_isolated_communities: usize,
    pub ei_unweighted: f64,
    pub ei_weighted: f64,
}

/// Association indices between two partitions of the same journals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AssocReport {
    pub chi2: f64,
    pub df: u64,
    pub cramers_v: f64,
    pub rajski_sym: f64,
    pub rajski_left: f64,
    pub rajski_right: f64,
    pub ari: f64,
}
