use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use journet_core::community::{louvain, network_stats, LouvainConfig};
use journet_core::config::StudyConfig;
use journet_core::dcor::{perm_test, Centering, PermTestConfig};
use journet_core::dissim::{dissim_from_graph, dissim_from_incidence, EmptyPolicy};
use journet_core::ingest::{
    read_bipartite_csv, read_matrix_csv, read_pajek_clu, read_pajek_net, read_sizes_into,
    write_atomic, write_matrix_csv, write_pajek_clu, write_pajek_net, write_sizes_csv,
};
use journet_core::project::{project_cocitation, project_interlocking};
use journet_core::study::{run_study, workers_from_env, write_report};
use journet_core::{assoc, Error};

#[derive(Parser)]
#[command(
    name = "journet",
    version,
    about = "Journal network construction and comparison"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    /// interlocking editorship: journal,editor rows
    Ie,
    /// interlocking authorship: journal,author rows
    Ia,
    /// co-citation: cited journal,citing article rows
    Cc,
}

#[derive(Clone, Copy, ValueEnum)]
enum CenteringArg {
    Classical,
    Unbiased,
}

impl From<CenteringArg> for Centering {
    fn from(c: CenteringArg) -> Self {
        match c {
            CenteringArg::Classical => Centering::Classical,
            CenteringArg::Unbiased => Centering::Unbiased,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum EmptyArg {
    Maximal,
    Identical,
}

impl From<EmptyArg> for EmptyPolicy {
    fn from(e: EmptyArg) -> Self {
        match e {
            EmptyArg::Maximal => EmptyPolicy::Maximal,
            EmptyArg::Identical => EmptyPolicy::Identical,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Project a two-column bipartite CSV onto a weighted journal network.
    Project {
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long)]
        input: PathBuf,
        /// Pajek .net output
        #[arg(long)]
        output: PathBuf,
        /// also write per-journal entity counts (journal,size)
        #[arg(long)]
        sizes: Option<PathBuf>,
    },
    /// Build a Jaccard dissimilarity matrix.
    Dissim {
        /// bipartite CSV
        #[arg(long, conflicts_with_all = ["net", "sizes"], required_unless_present = "net")]
        input: Option<PathBuf>,
        /// Pajek .net projection (needs --sizes)
        #[arg(long, requires = "sizes")]
        net: Option<PathBuf>,
        #[arg(long)]
        sizes: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "maximal")]
        empty: EmptyArg,
        #[arg(long)]
        output: PathBuf,
    },
    /// Distance correlation between two dissimilarity matrices with a permutation test.
    Dcor {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long, default_value_t = 99_999)]
        permutations: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_enum, default_value = "classical")]
        centering: CenteringArg,
    },
    /// Louvain communities of a Pajek network.
    Communities {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        resolution: f64,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        restarts: usize,
        /// Pajek .clu output
        #[arg(long)]
        output: PathBuf,
    },
    /// Association indexes between two partitions of the same journals.
    Assoc {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        /// number of journals
        #[arg(long)]
        n: usize,
    },
    /// Run the full pipeline for one field and write all tables.
    Report {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

fn print_json<T: serde::Serialize>(value: &T) -> Result<()> {
    println!("{}", serde_json::to_string(value)?);
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Project {
            mode,
            input,
            output,
            sizes,
        } => {
            let inc = read_bipartite_csv(&input)?;
            if inc.n_journals() < 2 {
                return Err(Error::TooFewNodes {
                    required: 2,
                    found: inc.n_journals(),
                }
                .into());
            }
            let graph = match mode {
                Mode::Ie | Mode::Ia => project_interlocking(&inc),
                Mode::Cc => project_cocitation(&inc),
            };
            let stats = network_stats(&graph)?;
            write_atomic(&output, write_pajek_net(&graph)?.as_bytes())?;
            if let Some(path) = sizes {
                write_atomic(&path, write_sizes_csv(&graph)?.as_bytes())?;
            }
            print_json(&stats)
        }
        Command::Dissim {
            input,
            net,
            sizes,
            empty,
            output,
        } => {
            let matrix = match (input, net, sizes) {
                (Some(input), _, _) => {
                    dissim_from_incidence(&read_bipartite_csv(&input)?, empty.into())?
                }
                (None, Some(net), Some(sizes)) => dissim_from_graph(
                    &read_sizes_into(read_pajek_net(&net)?, &sizes)?,
                    empty.into(),
                )?,
                _ => bail!("either --input or --net with --sizes is required"),
            };
            write_atomic(&output, write_matrix_csv(&matrix)?.as_bytes())?;
            Ok(())
        }
        Command::Dcor {
            a,
            b,
            permutations,
            seed,
            centering,
        } => {
            let ma = read_matrix_csv(&a)?;
            let mb = read_matrix_csv(&b)?;
            let cfg = PermTestConfig {
                n_permutations: permutations,
                seed,
                centering: centering.into(),
                workers: workers_from_env()?,
            };
            print_json(&perm_test(&ma, &mb, &cfg)?)
        }
        Command::Communities {
            input,
            resolution,
            seed,
            restarts,
            output,
        } => {
            let graph = read_pajek_net(&input)?;
            let cfg = LouvainConfig {
                resolution,
                seed,
                restarts,
                workers: workers_from_env()?,
            };
            let (partition, stats) = louvain(&graph, &cfg)?;
            write_atomic(&output, write_pajek_clu(&partition).as_bytes())?;
            print_json(&stats)
        }
        Command::Assoc { a, b, n } => {
            let pa = read_pajek_clu(&a, n)?;
            let pb = read_pajek_clu(&b, n)?;
            print_json(&assoc::assoc_report(&pa, &pb)?)
        }
        Command::Report { config, out } => {
            let cfg = StudyConfig::load(&config)?;
            let report = run_study(&cfg, workers_from_env()?)?;
            write_report(&report, &out)
                .with_context(|| format!("writing report to {}", out.display()))?;
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    // clap exits with status 2 on usage errors
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
