//! Louvain community detection with a resolution parameter, plus the
//! network- and partition-level descriptive statistics.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::dcor::with_workers;
use crate::error::{Error, Result};
use crate::model::{CommunityStats, NetworkStats, Partition, WeightedGraph};

/// Density, average degree and isolate count (unweighted).
pub fn network_stats(graph: &WeightedGraph) -> Result<NetworkStats> {
    let n = graph.n();
    if n < 2 {
        return Err(Error::TooFewNodes {
            required: 2,
            found: n,
        });
    }
    let m = graph.edges().len();
    let average_degree = 2.0 * m as f64 / n as f64;
    Ok(NetworkStats {
        n,
        edges: m,
        density: average_degree / (n - 1) as f64,
        average_degree,
        isolated_count: graph.degrees().iter().filter(|&&d| d == 0).count(),
    })
}

fn check_cover(graph: &WeightedGraph, partition: &Partition) -> Result<()> {
    if partition.len() != graph.n() {
        return Err(Error::PartitionLength {
            expected: graph.n(),
            found: partition.len(),
        });
    }
    Ok(())
}

/// Weighted modularity with multiplicative resolution:
/// `Q(γ) = Σ_c [ w_c/W − γ (s_c / 2W)² ]`.
pub fn modularity(graph: &WeightedGraph, partition: &Partition, resolution: f64) -> Result<f64> {
    check_cover(graph, partition)?;
    let total = graph.total_weight() as f64;
    if total == 0.0 {
        return Err(Error::ModularityUndefined);
    }
    let k = partition.n_communities();
    let mut internal = vec![0.0; k];
    let mut strength = vec![0.0; k];
    for e in graph.edges() {
        let (ca, cb) = (
            partition.community(e.a) as usize - 1,
            partition.community(e.b) as usize - 1,
        );
        let w = e.weight as f64;
        strength[ca] += w;
        strength[cb] += w;
        if ca == cb {
            internal[ca] += w;
        }
    }
    Ok(internal
        .iter()
        .zip(&strength)
        .map(|(&wc, &sc)| wc / total - resolution * (sc / (2.0 * total)).powi(2))
        .sum())
}

/// E-I index `(external − internal) / (external + internal)`: −1 when every
/// edge lies inside a community, +1 when every edge crosses communities.
pub fn ei_index(graph: &WeightedGraph, partition: &Partition, weighted: bool) -> Result<f64> {
    check_cover(graph, partition)?;
    if graph.edges().is_empty() {
        return Err(Error::NoEdges);
    }
    let (mut internal, mut external) = (0.0, 0.0);
    for e in graph.edges() {
        let w = if weighted { e.weight as f64 } else { 1.0 };
        if partition.community(e.a) == partition.community(e.b) {
            internal += w;
        } else {
            external += w;
        }
    }
    Ok((external - internal) / (external + internal))
}

/// Louvain settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LouvainConfig {
    pub resolution: f64,
    pub seed: u64,
    pub restarts: usize,
    /// Worker threads for restarts; the result does not depend on it.
    pub workers: Option<usize>,
}

impl Default for LouvainConfig {
    fn default() -> Self {
        Self {
            resolution: 1.0,
            seed: 0,
            restarts: 10,
            workers: None,
        }
    }
}

/// Working graph for one Louvain level. Self-loop weight stands for the
/// internal weight of an aggregated community.
struct Level {
    adj: Vec<Vec<(usize, f64)>>,
    self_loop: Vec<f64>,
    degree: Vec<f64>,
}

impl Level {
    fn from_graph(graph: &WeightedGraph) -> Self {
        let n = graph.n();
        let mut adj = vec![Vec::new(); n];
        let mut degree = vec![0.0; n];
        for e in graph.edges() {
            let w = e.weight as f64;
            adj[e.a].push((e.b, w));
            adj[e.b].push((e.a, w));
            degree[e.a] += w;
            degree[e.b] += w;
        }
        Self {
            adj,
            self_loop: vec![0.0; n],
            degree,
        }
    }

    fn n(&self) -> usize {
        self.adj.len()
    }

    /// Collapses each community into one node. `comm` must be dense `0..k`.
    fn aggregate(&self, comm: &[usize], k: usize) -> Self {
        let mut self_loop = vec![0.0; k];
        let mut degree = vec![0.0; k];
        let mut links: Vec<std::collections::BTreeMap<usize, f64>> = vec![Default::default(); k];
        for i in 0..self.n() {
            let ci = comm[i];
            self_loop[ci] += self.self_loop[i];
            degree[ci] += self.degree[i];
            for &(j, w) in &self.adj[i] {
                let cj = comm[j];
                if ci == cj {
                    // each internal edge is seen from both endpoints
                    if i < j {
                        self_loop[ci] += w;
                    }
                } else {
                    *links[ci].entry(cj).or_insert(0.0) += w;
                }
            }
        }
        let adj = links.into_iter().map(|m| m.into_iter().collect()).collect();
        Self {
            adj,
            self_loop,
            degree,
        }
    }
}

const GAIN_EPS: f64 = 1e-12;

/// Repeated local moving over `level` until a full sweep moves nothing.
/// Returns dense community ids and whether any node moved.
fn local_moving(
    level: &Level,
    resolution: f64,
    two_m: f64,
    rng: &mut ChaCha8Rng,
) -> (Vec<usize>, bool) {
    let n = level.n();
    let mut comm: Vec<usize> = (0..n).collect();
    let mut tot: Vec<f64> = level.degree.clone();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);

    let mut link_to = vec![0.0; n];
    let mut touched: Vec<usize> = Vec::new();
    let mut any_move = false;
    loop {
        let mut moved = false;
        for &i in &order {
            let ci = comm[i];
            let ki = level.degree[i];
            for &(j, w) in &level.adj[i] {
                let cj = comm[j];
                if link_to[cj] == 0.0 {
                    touched.push(cj);
                }
                link_to[cj] += w;
            }
            tot[ci] -= ki;
            let gain = |c: usize, link: f64| link - resolution * tot[c] * ki / two_m;
            let mut best = ci;
            let mut best_gain = gain(ci, link_to[ci]);
            touched.sort_unstable();
            for &c in &touched {
                if c == ci {
                    continue;
                }
                let g = gain(c, link_to[c]);
                if g > best_gain + GAIN_EPS {
                    best = c;
                    best_gain = g;
                }
            }
            tot[best] += ki;
            if best != ci {
                comm[i] = best;
                moved = true;
                any_move = true;
            }
            for &c in &touched {
                link_to[c] = 0.0;
            }
            touched.clear();
        }
        if !moved {
            break;
        }
    }
    // renumber densely by first appearance
    let mut remap = vec![usize::MAX; n];
    let mut next = 0;
    for c in comm.iter_mut() {
        if remap[*c] == usize::MAX {
            remap[*c] = next;
            next += 1;
        }
        *c = remap[*c];
    }
    (comm, any_move)
}

/// One full multi-level Louvain run; returns the community of every node.
fn louvain_once(graph: &WeightedGraph, resolution: f64, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut level = Level::from_graph(graph);
    let two_m: f64 = level.degree.iter().sum();
    let mut membership: Vec<usize> = (0..graph.n()).collect();
    loop {
        let (comm, moved) = local_moving(&level, resolution, two_m, rng);
        if !moved {
            break;
        }
        let k = comm.iter().max().map_or(0, |&c| c + 1);
        for m in membership.iter_mut() {
            *m = comm[*m];
        }
        level = level.aggregate(&comm, k);
    }
    membership
}

/// Best-of-`restarts` Louvain partition with its statistics.
///
/// Communities are numbered by decreasing size. Isolated journals end up
/// as singleton communities. Ties in modularity between restarts keep the
/// lowest restart index.
pub fn louvain(graph: &WeightedGraph, cfg: &LouvainConfig) -> Result<(Partition, CommunityStats)> {
    if !cfg.resolution.is_finite() || cfg.resolution <= 0.0 {
        return Err(Error::Invalid(format!(
            "resolution must be > 0, got {}",
            cfg.resolution
        )));
    }
    if cfg.restarts < 1 {
        return Err(Error::Invalid("restarts must be ≥ 1".into()));
    }
    if graph.edges().is_empty() {
        return Err(Error::ModularityUndefined);
    }
    let runs: Vec<Result<(Partition, f64)>> = with_workers(cfg.workers, || {
        (0..cfg.restarts)
            .into_par_iter()
            .map(|r| {
                let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
                rng.set_stream(r as u64);
                let membership = louvain_once(graph, cfg.resolution, &mut rng);
                let partition = Partition::canonical_by_size(&membership);
                let q = modularity(graph, &partition, cfg.resolution)?;
                Ok((partition, q))
            })
            .collect()
    })?;
    let mut best: Option<(Partition, f64)> = None;
    for run in runs {
        let (p, q) = run?;
        if best.as_ref().is_none_or(|(_, bq)| q > *bq) {
            best = Some((p, q));
        }
    }
    let (partition, q) = best.expect("at least one restart");
    let stats = community_stats(graph, &partition, cfg.resolution, q)?;
    Ok((partition, stats))
}

fn community_stats(
    graph: &WeightedGraph,
    partition: &Partition,
    resolution: f64,
    q: f64,
) -> Result<CommunityStats> {
    let degrees = graph.degrees();
    let mut non_isolated = vec![false; partition.n_communities()];
    for (i, &d) in degrees.iter().enumerate() {
        if d > 0 {
            non_isolated[partition.community(i) as usize - 1] = true;
        }
    }
    Ok(CommunityStats {
        modularity: q,
        resolution,
        n_communities: partition.n_communities(),
        n_non_isolated_communities: non_isolated.iter().filter(|&&x| x).count(),
        ei_unweighted: ei_index(graph, partition, false)?,
        ei_weighted: ei_index(graph, partition, true)?,
    })
}

/// Statistics of an externally supplied partition (e.g. read from `.clu`).
pub fn describe_partition(
    graph: &WeightedGraph,
    partition: &Partition,
    resolution: f64,
) -> Result<CommunityStats> {
    let q = modularity(graph, partition, resolution)?;
    community_stats(graph, partition, resolution, q)
}
