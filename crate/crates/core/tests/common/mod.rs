//! Independent reference implementations used as test oracles. Nothing
//! here calls into the library's numerical code.
#![allow(dead_code)]

use std::collections::HashSet;

use journet_core::{DissimMatrix, Edge, Partition, WeightedGraph};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("J{i}")).collect()
}

/// Random symmetric matrix with zero diagonal and entries in [0, 1].
pub fn random_dissim<R: Rng>(n: usize, rng: &mut R) -> DissimMatrix {
    let mut data = vec![0.0; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let v: f64 = rng.gen();
            data[i * n + j] = v;
            data[j * n + i] = v;
        }
    }
    DissimMatrix::new(labels(n), data).unwrap()
}

pub fn to_rows(m: &DissimMatrix) -> Vec<Vec<f64>> {
    (0..m.n())
        .map(|i| (0..m.n()).map(|j| m.get(i, j)).collect())
        .collect()
}

/// Double centring written out with explicit row, column and grand means.
pub fn literal_center(a: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = a.len();
    let mut row_mean = vec![0.0; n];
    let mut col_mean = vec![0.0; n];
    let mut grand = 0.0;
    for k in 0..n {
        for l in 0..n {
            row_mean[k] += a[k][l] / n as f64;
            col_mean[l] += a[k][l] / n as f64;
            grand += a[k][l] / (n * n) as f64;
        }
    }
    let mut c = vec![vec![0.0; n]; n];
    for k in 0..n {
        for l in 0..n {
            c[k][l] = a[k][l] - row_mean[k] - col_mean[l] + grand;
        }
    }
    c
}

/// `(1/n²) Σ_kl Â_kl B̂_kl`.
pub fn literal_dcov2(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    let n = a.len();
    let (ca, cb) = (literal_center(a), literal_center(b));
    let mut s = 0.0;
    for k in 0..n {
        for l in 0..n {
            s += ca[k][l] * cb[k][l];
        }
    }
    s / (n * n) as f64
}

/// `(dcov2, dvar2_a, dvar2_b, rd)` from the literal formulas.
pub fn literal_dcor(a: &[Vec<f64>], b: &[Vec<f64>]) -> (f64, f64, f64, f64) {
    let dcov2 = literal_dcov2(a, b).max(0.0);
    let va = literal_dcov2(a, a);
    let vb = literal_dcov2(b, b);
    let rd = (dcov2 / (va * vb).sqrt()).clamp(0.0, 1.0);
    (dcov2, va, vb, rd)
}

pub fn permute_rows_cols(b: &[Vec<f64>], perm: &[usize]) -> Vec<Vec<f64>> {
    let n = b.len();
    (0..n)
        .map(|k| (0..n).map(|l| b[perm[k]][perm[l]]).collect())
        .collect()
}

/// All permutations of `0..n` (Heap's algorithm).
pub fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    fn heap(k: usize, a: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(a.clone());
            return;
        }
        heap(k - 1, a, out);
        for i in 0..k - 1 {
            if k.is_multiple_of(2) {
                a.swap(i, k - 1);
            } else {
                a.swap(0, k - 1);
            }
            heap(k - 1, a, out);
        }
    }
    let mut out = Vec::new();
    heap(n, &mut (0..n).collect(), &mut out);
    out
}

/// Exact permutation p-value: the share of all `n!` simultaneous row/column
/// permutations of `b` (raw, then re-centred) whose dcov2 reaches the
/// observed one.
pub fn exact_perm_p(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    let observed = literal_dcov2(a, b);
    let perms = all_permutations(a.len());
    let hits = perms
        .iter()
        .filter(|p| literal_dcov2(a, &permute_rows_cols(b, p)) >= observed - 1e-12 * observed.abs())
        .count();
    hits as f64 / perms.len() as f64
}

pub fn random_graph<R: Rng>(n: usize, p: f64, max_w: u64, rng: &mut R) -> WeightedGraph {
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(p) {
                edges.push(Edge {
                    a,
                    b,
                    weight: rng.gen_range(1..=max_w),
                });
            }
        }
    }
    WeightedGraph::new(labels(n), edges, None).unwrap()
}

/// `(1/2W) Σ_ij (A_ij − γ k_i k_j / 2W) δ(c_i, c_j)` over ordered node pairs.
pub fn literal_modularity(g: &WeightedGraph, communities: &[u32], gamma: f64) -> f64 {
    let n = g.n();
    let mut adj = vec![vec![0.0; n]; n];
    for e in g.edges() {
        adj[e.a][e.b] = e.weight as f64;
        adj[e.b][e.a] = e.weight as f64;
    }
    let k: Vec<f64> = adj.iter().map(|r| r.iter().sum()).collect();
    let two_w: f64 = k.iter().sum();
    let mut q = 0.0;
    for i in 0..n {
        for j in 0..n {
            if communities[i] == communities[j] {
                q += adj[i][j] - gamma * k[i] * k[j] / two_w;
            }
        }
    }
    q / two_w
}

/// Every set partition of `0..n` as restricted growth strings (1-based ids).
pub fn all_set_partitions(n: usize) -> Vec<Vec<u32>> {
    fn rec(i: usize, n: usize, cur: &mut Vec<u32>, max: u32, out: &mut Vec<Vec<u32>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        for c in 1..=max + 1 {
            cur.push(c);
            rec(i + 1, n, cur, max.max(c), out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, &mut Vec::new(), 0, &mut out);
    out
}

pub fn random_partition<R: Rng>(n: usize, k: u32, rng: &mut R) -> Partition {
    let labels: Vec<u32> = (0..n).map(|_| rng.gen_range(0..k)).collect();
    Partition::from_labels(&labels)
}

/// Adjusted Rand index by enumerating all node pairs.
pub fn pairwise_ari(a: &[u32], b: &[u32]) -> f64 {
    let n = a.len();
    let (mut both, mut only_a, mut only_b, mut total) = (0.0, 0.0, 0.0, 0.0);
    for i in 0..n {
        for j in i + 1..n {
            let sa = a[i] == a[j];
            let sb = b[i] == b[j];
            total += 1.0;
            if sa && sb {
                both += 1.0;
            }
            if sa {
                only_a += 1.0;
            }
            if sb {
                only_b += 1.0;
            }
        }
    }
    let expected = only_a * only_b / total;
    let max = 0.5 * (only_a + only_b);
    if max == expected {
        return 0.0;
    }
    (both - expected) / (max - expected)
}

pub fn hash_jaccard(a: &HashSet<usize>, b: &HashSet<usize>) -> f64 {
    let inter = a.intersection(b).count();
    let union = a.union(b).count();
    (union - inter) as f64 / union as f64
}

pub fn shuffled<R: Rng>(n: usize, rng: &mut R) -> Vec<usize> {
    let mut v: Vec<usize> = (0..n).collect();
    v.shuffle(rng);
    v
}
