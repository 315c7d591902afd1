//! Exact combinatorial anonymity metrics for threshold-mix rounds.
//!
//! Given how many messages each sender sent and each receiver received in a
//! round, [`count_assignments`] returns how many sender-to-receiver volume
//! assignments are consistent with that observation, and
//! [`deg_anonymity`] turns it into a degree in `[0, 1]`. The competing
//! metrics (Edman's permanent degree, Gierlichs' class entropy, and the
//! entropy metrics of Serjantov-Danezis and Diaz) live in [`metrics`];
//! brute-force checks live in [`oracle`].

pub mod bigcount;
pub mod budget;
pub mod cli;
pub mod error;
pub mod exec;
pub mod metrics;
pub mod notation;
pub mod oracle;
pub mod partitions;
pub mod symfunc;
pub mod types;

pub use bigcount::BigCount;
pub use budget::Budget;
pub use error::{Error, Result};
pub use exec::Execution;
pub use metrics::{
    class_cardinality, deg_anonymity, diaz_degree, edman_degree, full_report, gierlichs_degree, permanent, sd_entropy,
    CompatibilityMatrix, LogBase, ReportConfig,
};
pub use notation::{parse_profile, render_profile};
pub use oracle::{brute_force_classes, brute_force_count};
pub use partitions::{partitions_of, profile_pairs};
pub use symfunc::{count_assignments, count_by_expansion, enumerate_tables, homogeneous, poly_multiply, MonomialPoly};
pub use types::{
    canonicalize, profile_from_observation, AnonymityReport, ContingencyTable, Partition, RoundObservation,
    TrafficProfile,
};
