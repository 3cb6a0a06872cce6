//! End-to-end driver for one field: load and align the three networks,
//! compare their dissimilarity matrices, detect communities and compare
//! the partitions.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use crate::assoc::assoc_report;
use crate::community::{louvain, network_stats, LouvainConfig};
use crate::config::{InputKind, Network, StudyConfig};
use crate::dcor::{bonferroni_gate, perm_test, with_workers, Decision, PermTestConfig};
use crate::dissim::{dissim_from_graph, dissim_from_incidence};
use crate::error::{Error, Result};
use crate::ingest::{
    self, write_edge_list_csv, write_matrix_csv, write_pajek_clu, write_pajek_net,
};
use crate::model::{
    AssocReport, CommunityStats, DcorResult, DissimMatrix, NetworkStats, Partition, WeightedGraph,
};
use crate::project::{project_cocitation, project_interlocking};

/// Environment variable overriding the worker count.
pub const WORKERS_ENV: &str = "JOURNET_WORKERS";

/// Worker count from [`WORKERS_ENV`], if set to a positive integer.
pub fn workers_from_env() -> Result<Option<usize>> {
    match std::env::var(WORKERS_ENV) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(w) if w > 0 => Ok(Some(w)),
            _ => Err(Error::Invalid(format!(
                "{WORKERS_ENV}={v:?} is not a positive integer"
            ))),
        },
    }
}

/// Dissimilarity-matrix comparisons, in table order.
pub const DCOR_PAIRS: [(Network, Network); 3] = [
    (Network::Cc, Network::Ie),
    (Network::Cc, Network::Ia),
    (Network::Ie, Network::Ia),
];

/// Partition comparisons, in table order.
pub const ASSOC_PAIRS: [(Network, Network); 3] = [
    (Network::Ie, Network::Cc),
    (Network::Ie, Network::Ia),
    (Network::Cc, Network::Ia),
];

/// Row order of the network table.
pub const NETWORK_ORDER: [Network; 3] = [Network::Ie, Network::Cc, Network::Ia];

fn pair_label(a: Network, b: Network) -> String {
    format!("{}-{}", a.name(), b.name())
}

#[derive(Debug, Clone)]
pub struct NetworkResult {
    pub network: Network,
    pub graph: WeightedGraph,
    pub dissim: DissimMatrix,
    pub stats: NetworkStats,
    pub partition: Partition,
    pub communities: CommunityStats,
}

#[derive(Debug, Clone)]
pub struct DcorRow {
    pub a: Network,
    pub b: Network,
    pub result: DcorResult,
    pub threshold: f64,
    pub decision: Decision,
}

#[derive(Debug, Clone)]
pub struct AssocRow {
    pub a: Network,
    pub b: Network,
    pub report: AssocReport,
}

#[derive(Debug, Clone, Serialize)]
struct InputRecord {
    network: Network,
    path: String,
    kind: InputKind,
    sizes: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
struct LouvainRecord {
    network: Network,
    resolution: f64,
    seed: u64,
    restarts: usize,
}

#[derive(Debug, Clone, Serialize)]
struct DcorRecord {
    pair: String,
    seed: u64,
    n_permutations: u64,
}

/// Everything needed to trace the emitted numbers back to their settings.
#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    software: &'static str,
    version: &'static str,
    field: String,
    journals: usize,
    inputs: Vec<InputRecord>,
    empty_policy: crate::dissim::EmptyPolicy,
    centering: crate::dcor::Centering,
    alpha: f64,
    family_size: usize,
    bonferroni_threshold: f64,
    permutation_tests: Vec<DcorRecord>,
    louvain: Vec<LouvainRecord>,
}

#[derive(Debug, Clone)]
pub struct StudyReport {
    pub field: String,
    pub networks: Vec<NetworkResult>,
    pub dcor: Vec<DcorRow>,
    pub assoc: Vec<AssocRow>,
    pub provenance: Provenance,
}

struct Loaded {
    graph: WeightedGraph,
    dissim: DissimMatrix,
}

fn load_network(cfg: &StudyConfig, net: Network) -> Result<Loaded> {
    let input = cfg.input(net);
    let stage = |s: &str| format!("{s} {}", net.key());
    let graph = match input.kind {
        InputKind::Bipartite => {
            let inc = ingest::read_bipartite_csv(cfg.resolve(&input.path))
                .map_err(|e| e.in_stage(stage("load")))?;
            let graph = match net {
                Network::Cc => project_cocitation(&inc),
                Network::Ie | Network::Ia => project_interlocking(&inc),
            };
            let dissim = dissim_from_incidence(&inc, cfg.empty_policy)
                .map_err(|e| e.in_stage(stage("dissimilarity")))?;
            return Ok(Loaded { graph, dissim });
        }
        InputKind::Net => ingest::read_pajek_net(cfg.resolve(&input.path)),
        InputKind::Edges => ingest::read_edge_list_csv(cfg.resolve(&input.path)),
    }
    .map_err(|e| e.in_stage(stage("load")))?;
    let graph = match &input.sizes {
        Some(sizes) => ingest::read_sizes_into(graph, cfg.resolve(sizes))
            .map_err(|e| e.in_stage(stage("load")))?,
        None => graph,
    };
    let dissim = dissim_from_graph(&graph, cfg.empty_policy)
        .map_err(|e| e.in_stage(stage("dissimilarity")))?;
    Ok(Loaded { graph, dissim })
}

/// Runs the whole pipeline. `workers` bounds the thread pool; results do
/// not depend on it.
pub fn run_study(cfg: &StudyConfig, workers: Option<usize>) -> Result<StudyReport> {
    cfg.check()?;
    with_workers(workers, || run_in_pool(cfg))?
}

fn run_in_pool(cfg: &StudyConfig) -> Result<StudyReport> {
    let loaded: Vec<Loaded> = Network::ALL
        .par_iter()
        .map(|&net| load_network(cfg, net))
        .collect::<Result<_>>()?;

    // IE's journal order is the reference; the other two must hold the same set
    let reference = loaded[0].graph.labels().to_vec();
    if reference.len() < 2 {
        return Err(Error::TooFewNodes {
            required: 2,
            found: reference.len(),
        }
        .in_stage("load ie"));
    }
    let aligned: Vec<Loaded> = loaded
        .into_iter()
        .zip(Network::ALL)
        .map(|(l, net)| {
            let stage = format!("align {}", net.key());
            Ok(Loaded {
                graph: l
                    .graph
                    .aligned_to(&reference)
                    .map_err(|e| e.in_stage(&stage))?,
                dissim: l
                    .dissim
                    .aligned_to(&reference)
                    .map_err(|e| e.in_stage(&stage))?,
            })
        })
        .collect::<Result<_>>()?;

    let networks: Vec<NetworkResult> = Network::ALL
        .par_iter()
        .zip(aligned)
        .map(|(&net, l)| {
            let stats =
                network_stats(&l.graph).map_err(|e| e.in_stage(format!("stats {}", net.key())))?;
            let lc = LouvainConfig {
                resolution: cfg.input(net).resolution,
                seed: cfg.louvain_seed(net),
                restarts: cfg.louvain_restarts(net),
                workers: None,
            };
            let (partition, communities) =
                louvain(&l.graph, &lc).map_err(|e| e.in_stage(format!("louvain {}", net.key())))?;
            Ok(NetworkResult {
                network: net,
                graph: l.graph,
                dissim: l.dissim,
                stats,
                partition,
                communities,
            })
        })
        .collect::<Result<_>>()?;
    let get = |net: Network| {
        networks
            .iter()
            .find(|r| r.network == net)
            .expect("all networks loaded")
    };

    let threshold = cfg.alpha / cfg.family_size as f64;
    let dcor_results: Vec<DcorResult> = DCOR_PAIRS
        .par_iter()
        .enumerate()
        .map(|(i, &(a, b))| {
            let pc = PermTestConfig {
                n_permutations: cfg.permutations,
                seed: cfg.seed.wrapping_add(i as u64),
                centering: cfg.centering,
                workers: None,
            };
            perm_test(&get(a).dissim, &get(b).dissim, &pc)
                .map_err(|e| e.in_stage(format!("dcor {}", pair_label(a, b))))
        })
        .collect::<Result<_>>()?;
    let p_values: Vec<f64> = dcor_results.iter().map(|r| r.p_value).collect();
    let decisions = bonferroni_gate(&p_values, cfg.alpha, cfg.family_size);
    let dcor: Vec<DcorRow> = DCOR_PAIRS
        .iter()
        .zip(dcor_results)
        .zip(decisions)
        .map(|((&(a, b), result), decision)| DcorRow {
            a,
            b,
            result,
            threshold,
            decision,
        })
        .collect();

    let assoc: Vec<AssocRow> = ASSOC_PAIRS
        .iter()
        .map(|&(a, b)| {
            let report = assoc_report(&get(a).partition, &get(b).partition)
                .map_err(|e| e.in_stage(format!("assoc {}", pair_label(a, b))))?;
            Ok(AssocRow { a, b, report })
        })
        .collect::<Result<_>>()?;

    let provenance = Provenance {
        software: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        field: cfg.field.clone(),
        journals: reference.len(),
        inputs: Network::ALL
            .iter()
            .map(|&net| {
                let i = cfg.input(net);
                InputRecord {
                    network: net,
                    path: i.path.display().to_string(),
                    kind: i.kind,
                    sizes: i.sizes.as_ref().map(|s| s.display().to_string()),
                }
            })
            .collect(),
        empty_policy: cfg.empty_policy,
        centering: cfg.centering,
        alpha: cfg.alpha,
        family_size: cfg.family_size,
        bonferroni_threshold: threshold,
        permutation_tests: dcor
            .iter()
            .map(|r| DcorRecord {
                pair: pair_label(r.a, r.b),
                seed: r.result.seed,
                n_permutations: r.result.n_permutations,
            })
            .collect(),
        louvain: networks
            .iter()
            .map(|r| LouvainRecord {
                network: r.network,
                resolution: r.communities.resolution,
                seed: cfg.louvain_seed(r.network),
                restarts: cfg.louvain_restarts(r.network),
            })
            .collect(),
    };

    Ok(StudyReport {
        field: cfg.field.clone(),
        networks,
        dcor,
        assoc,
        provenance,
    })
}

fn decision_str(d: Decision) -> &'static str {
    match d {
        Decision::Reject => "reject",
        Decision::Accept => "accept",
    }
}

impl StudyReport {
    pub fn network(&self, net: Network) -> &NetworkResult {
        self.networks
            .iter()
            .find(|r| r.network == net)
            .expect("all networks present")
    }

    /// Distance correlations between networks, one row per pair.
    pub fn dcor_table_csv(&self) -> String {
        let mut out = String::from(
            "pair,sqrt_rd,p_value,rd,dcov2,dvar2_a,dvar2_b,exceed_count,n_permutations,seed,centering,threshold,decision\n",
        );
        for r in &self.dcor {
            let d = &r.result;
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{},{},{}",
                pair_label(r.a, r.b),
                d.sqrt_rd,
                d.p_value,
                d.rd,
                d.dcov2,
                d.dvar2_a,
                d.dvar2_b,
                d.exceed_count,
                d.n_permutations,
                d.seed,
                match d.centering {
                    crate::dcor::Centering::Classical => "classical",
                    crate::dcor::Centering::Unbiased => "unbiased",
                },
                r.threshold,
                decision_str(r.decision)
            );
        }
        out
    }

    /// Network and community features, one row per network.
    pub fn network_table_csv(&self) -> String {
        let mut out = String::from(
            "network,journals,edges,density,average_degree,isolated,resolution,modularity,n_communities,n_non_isolated_communities,ei_unweighted,ei_weighted\n",
        );
        for net in NETWORK_ORDER {
            let r = self.network(net);
            let (s, c) = (&r.stats, &r.communities);
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{},{}",
                net.name(),
                s.n,
                s.edges,
                s.density,
                s.average_degree,
                s.isolated_count,
                c.resolution,
                c.modularity,
                c.n_communities,
                c.n_non_isolated_communities,
                c.ei_unweighted,
                c.ei_weighted
            );
        }
        out
    }

    /// Association indices between partitions, one row per pair.
    pub fn assoc_table_csv(&self) -> String {
        let mut out =
            String::from("pair,chi2,df,cramers_v,rajski,rajski_right,rajski_left,adjusted_rand\n");
        for r in &self.assoc {
            let a = &r.report;
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                pair_label(r.a, r.b),
                a.chi2,
                a.df,
                a.cramers_v,
                a.rajski_sym,
                a.rajski_right,
                a.rajski_left,
                a.ari
            );
        }
        out
    }

    pub fn provenance_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.provenance).expect("provenance serializes");
        s.push('\n');
        s
    }

    /// Every output file as `(name, contents)`, in a fixed order.
    pub fn files(&self) -> Result<Vec<(String, Vec<u8>)>> {
        let mut files = vec![
            (
                "table1_dcor.csv".to_owned(),
                self.dcor_table_csv().into_bytes(),
            ),
            (
                "table2_networks.csv".to_owned(),
                self.network_table_csv().into_bytes(),
            ),
            (
                "table3_assoc.csv".to_owned(),
                self.assoc_table_csv().into_bytes(),
            ),
            (
                "provenance.json".to_owned(),
                self.provenance_json().into_bytes(),
            ),
        ];
        for net in NETWORK_ORDER {
            let r = self.network(net);
            let k = net.key();
            files.push((format!("{k}.net"), write_pajek_net(&r.graph)?.into_bytes()));
            files.push((
                format!("{k}_edges.csv"),
                write_edge_list_csv(&r.graph)?.into_bytes(),
            ));
            files.push((
                format!("{k}.clu"),
                write_pajek_clu(&r.partition).into_bytes(),
            ));
            files.push((
                format!("{k}_dissim.csv"),
                write_matrix_csv(&r.dissim)?.into_bytes(),
            ));
        }
        Ok(files)
    }
}

/// Writes all report files into `out`, staging them in a temporary
/// directory first so that nothing appears unless every file was written.
pub fn write_report(report: &StudyReport, out: impl AsRef<Path>) -> Result<()> {
    let out = out.as_ref();
    let parent = match out.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    let staging = tempfile::Builder::new()
        .prefix(".journet-report-")
        .tempdir_in(parent)
        .map_err(|e| Error::io(parent, e))?;
    let files = report.files()?;
    for (name, bytes) in &files {
        let path = staging.path().join(name);
        fs::write(&path, bytes).map_err(|e| Error::io(&path, e))?;
    }
    if out.exists() {
        if !out.is_dir() {
            return Err(Error::Invalid(format!(
                "{} exists and is not a directory",
                out.display()
            )));
        }
        for (name, _) in &files {
            let from = staging.path().join(name);
            let to = out.join(name);
            fs::rename(&from, &to).map_err(|e| Error::io(&to, e))?;
        }
    } else {
        let kept = staging.keep();
        fs::rename(&kept, out).map_err(|e| Error::io(out, e))?;
    }
    Ok(())
}
