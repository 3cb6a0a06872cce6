//! Generalized distance correlation between two dissimilarity matrices and
//! its permutation test of independence.
//!
//! Both matrices are double-centred once. A permutation replicate applies
//! one random permutation to the rows and columns of the second matrix.
//! Centring commutes with a simultaneous row/column permutation, so the
//! replicate permutes the already-centred matrix instead of re-centring;
//! the identity permutation then reproduces the observed statistic bit for
//! bit, which keeps the `≥` tie rule exact.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{DcorResult, DissimMatrix};

/// Centring estimator. `Classical` is the V-statistic double centring;
/// `Unbiased` is U-centring (needs n ≥ 4).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Centering {
    #[default]
    Classical,
    Unbiased,
}

impl std::str::FromStr for Centering {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "classical" => Ok(Centering::Classical),
            "unbiased" => Ok(Centering::Unbiased),
            other => Err(Error::Invalid(format!(
                "unknown centering {other:?} (expected classical or unbiased)"
            ))),
        }
    }
}

/// A centred n×n matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CenteredMatrix {
    n: usize,
    data: Vec<f64>,
    centering: Centering,
}

impl CenteredMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, k: usize, l: usize) -> f64 {
        self.data[k * self.n + l]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }
}

fn row_sums(m: &DissimMatrix) -> Vec<f64> {
    let n = m.n();
    m.as_slice().chunks(n).map(|row| row.iter().sum()).collect()
}

/// `Â_kl = a_kl − ā_k· − ā_·l + ā_··`.
pub fn double_center(m: &DissimMatrix) -> Result<CenteredMatrix> {
    let n = m.n();
    if n < 2 {
        return Err(Error::TooFewNodes {
            required: 2,
            found: n,
        });
    }
    let nf = n as f64;
    // symmetric input: row means equal column means
    let means: Vec<f64> = row_sums(m).into_iter().map(|s| s / nf).collect();
    let grand = means.iter().sum::<f64>() / nf;
    let mut data = vec![0.0; n * n];
    for k in 0..n {
        for l in 0..n {
            data[k * n + l] = m.get(k, l) - means[k] - means[l] + grand;
        }
    }
    Ok(CenteredMatrix {
        n,
        data,
        centering: Centering::Classical,
    })
}

/// U-centring: off-diagonal `ã_kl = a_kl − a_k·/(n−2) − a_·l/(n−2) + a_··/((n−1)(n−2))`,
/// zero diagonal.
pub fn u_center(m: &DissimMatrix) -> Result<CenteredMatrix> {
    let n = m.n();
    if n < 4 {
        return Err(Error::TooFewNodes {
            required: 4,
            found: n,
        });
    }
    let nf = n as f64;
    let sums = row_sums(m);
    let total: f64 = sums.iter().sum();
    let mut data = vec![0.0; n * n];
    for k in 0..n {
        for l in 0..n {
            if k != l {
                data[k * n + l] = m.get(k, l) - sums[k] / (nf - 2.0) - sums[l] / (nf - 2.0)
                    + total / ((nf - 1.0) * (nf - 2.0));
            }
        }
    }
    Ok(CenteredMatrix {
        n,
        data,
        centering: Centering::Unbiased,
    })
}

pub fn center(m: &DissimMatrix, centering: Centering) -> Result<CenteredMatrix> {
    match centering {
        Centering::Classical => double_center(m),
        Centering::Unbiased => u_center(m),
    }
}

/// `Σ_kl a_kl · b_{π(k) π(l)}`, the unscaled permutation statistic.
fn cross_sum(a: &CenteredMatrix, b: &CenteredMatrix, perm: &[usize]) -> f64 {
    let n = a.n;
    let mut total = 0.0;
    for (k, &pk) in perm.iter().enumerate() {
        let arow = &a.data[k * n..(k + 1) * n];
        let brow = &b.data[pk * n..(pk + 1) * n];
        let mut row = 0.0;
        for (l, &pl) in perm.iter().enumerate() {
            row += arow[l] * brow[pl];
        }
        total += row;
    }
    total
}

fn scale(centering: Centering, n: usize) -> f64 {
    let nf = n as f64;
    match centering {
        Centering::Classical => nf * nf,
        Centering::Unbiased => nf * (nf - 3.0),
    }
}

/// Squared distance covariance/variance and the correlation built from them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DcorStats {
    pub dcov2: f64,
    pub dvar2_a: f64,
    pub dvar2_b: f64,
    pub rd: f64,
    pub sqrt_rd: f64,
}

struct Prepared {
    a: CenteredMatrix,
    b: CenteredMatrix,
    identity: Vec<usize>,
    observed: f64,
    stats: DcorStats,
}

fn prepare(a: &DissimMatrix, b: &DissimMatrix, centering: Centering) -> Result<Prepared> {
    if a.labels() != b.labels() {
        return Err(Error::Alignment(
            "dissimilarity matrices must share the same journal labels in the same order".into(),
        ));
    }
    let ca = center(a, centering)?;
    let cb = center(b, centering)?;
    let n = ca.n;
    let identity: Vec<usize> = (0..n).collect();
    let s = scale(centering, n);
    let observed = cross_sum(&ca, &cb, &identity);
    let dcov2 = (observed / s).max(0.0);
    let dvar2_a = (cross_sum(&ca, &ca, &identity) / s).max(0.0);
    let dvar2_b = (cross_sum(&cb, &cb, &identity) / s).max(0.0);
    if dvar2_a <= 0.0 {
        return Err(Error::DegenerateMatrix("first"));
    }
    if dvar2_b <= 0.0 {
        return Err(Error::DegenerateMatrix("second"));
    }
    let rd = (dcov2 / (dvar2_a * dvar2_b).sqrt()).clamp(0.0, 1.0);
    Ok(Prepared {
        a: ca,
        b: cb,
        identity,
        observed,
        stats: DcorStats {
            dcov2,
            dvar2_a,
            dvar2_b,
            rd,
            sqrt_rd: rd.sqrt(),
        },
    })
}

/// Classical generalized distance correlation of two aligned matrices.
pub fn dcor(a: &DissimMatrix, b: &DissimMatrix) -> Result<DcorStats> {
    dcor_with(a, b, Centering::Classical)
}

pub fn dcor_with(a: &DissimMatrix, b: &DissimMatrix, centering: Centering) -> Result<DcorStats> {
    Ok(prepare(a, b, centering)?.stats)
}

/// Settings for [`perm_test`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PermTestConfig {
    pub n_permutations: u64,
    pub seed: u64,
    pub centering: Centering,
    /// Worker threads; `None` uses the global rayon pool. The result does
    /// not depend on this value.
    pub workers: Option<usize>,
}

impl Default for PermTestConfig {
    fn default() -> Self {
        Self {
            n_permutations: 99_999,
            seed: 0,
            centering: Centering::Classical,
            workers: None,
        }
    }
}

/// Random permutation for replicate `r`: ChaCha8 keyed by `seed`, stream `r`.
pub fn replicate_permutation(seed: u64, replicate: u64, out: &mut [usize]) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(replicate);
    for (i, slot) in out.iter_mut().enumerate() {
        *slot = i;
    }
    out.shuffle(&mut rng);
}

/// Runs `f` on a dedicated pool of `workers` threads, or on the global
/// pool when `workers` is `None`.
pub(crate) fn with_workers<T: Send>(
    workers: Option<usize>,
    f: impl FnOnce() -> T + Send,
) -> Result<T> {
    match workers {
        None => Ok(f()),
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w.max(1))
                .build()
                .map_err(|e| Error::Invalid(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

/// Permutation test of independence.
///
/// `p = (1 + #{r : S_r ≥ S_obs}) / (1 + R)`, with replicate permutations
/// drawn uniformly (identity included).
pub fn perm_test(a: &DissimMatrix, b: &DissimMatrix, cfg: &PermTestConfig) -> Result<DcorResult> {
    if cfg.n_permutations < 1 {
        return Err(Error::Invalid("n_permutations must be ≥ 1".into()));
    }
    let prep = prepare(a, b, cfg.centering)?;
    let n = prep.identity.len();
    let exceed = with_workers(cfg.workers, || {
        (0..cfg.n_permutations)
            .into_par_iter()
            .map_init(
                || vec![0usize; n],
                |perm, r| {
                    replicate_permutation(cfg.seed, r, perm);
                    u64::from(cross_sum(&prep.a, &prep.b, perm) >= prep.observed)
                },
            )
            .sum::<u64>()
    })?;
    let s = prep.stats;
    Ok(DcorResult {
        dcov2: s.dcov2,
        dvar2_a: s.dvar2_a,
        dvar2_b: s.dvar2_b,
        rd: s.rd,
        sqrt_rd: s.sqrt_rd,
        p_value: (1 + exceed) as f64 / (1 + cfg.n_permutations) as f64,
        exceed_count: exceed,
        n_permutations: cfg.n_permutations,
        seed: cfg.seed,
        centering: cfg.centering,
    })
}

/// Outcome of comparing a p-value with the Bonferroni threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Decision {
    Reject,
    Accept,
}

/// Rejects each hypothesis whose p-value is strictly below `alpha / family_size`.
pub fn bonferroni_gate(p_values: &[f64], alpha: f64, family_size: usize) -> Vec<Decision> {
    let threshold = alpha / family_size.max(1) as f64;
    p_values
        .iter()
        .map(|&p| {
            if p < threshold {
                Decision::Reject
            } else {
                Decision::Accept
            }
        })
        .collect()
}
