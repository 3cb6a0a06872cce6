//! Journal networks from editorial boards, authorships and co-citations,
//! and the statistics used to compare them.
//!
//! The pipeline for one field:
//!
//! 1. read journal × entity incidences ([`ingest`]) and project them to
//!    weighted one-mode networks ([`project`]);
//! 2. turn each network into a Jaccard dissimilarity matrix ([`dissim`]);
//! 3. compare matrices pairwise with the generalized distance correlation
//!    and a permutation test ([`dcor`]);
//! 4. detect Louvain communities and describe each network ([`community`]);
//! 5. compare the partitions pairwise ([`assoc`]).
//!
//! [`study`] chains the steps from a [`config::StudyConfig`].

pub mod assoc;
pub mod community;
pub mod config;
pub mod dcor;
pub mod dissim;
pub mod error;
pub mod ingest;
pub mod model;
pub mod project;
pub mod study;

pub use error::{Error, Result};
pub use model::{
    validate, AssocReport, BipartiteIncidence, CommunityStats, ContingencyTable, DcorResult,
    DissimMatrix, Edge, NetworkStats, Partition, Permutation, Violation, WeightedGraph,
};
