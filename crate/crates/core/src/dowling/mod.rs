//! G-partitions with cyclic labels and the Dowling-lattice families
//! `Q_n(r)`, `Q_n(r,J)`, `Q_n(r,d)`, `Q_n(r,d,k)` and `Q_n(r,d,k,J)`.

mod family;
mod gpartition;

pub use family::{
    build_family, count_atoms, count_minimal_below, distinguished_element, rank_of, FamilyPoset,
    FamilySpec, BOT_KEY,
};
pub use gpartition::{Block, GPartition};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DowlingError {
    #[error("not a partition: {0}")]
    NotAPartition(String),
    #[error("invalid family spec: {0}")]
    InvalidSpec(String),
    #[error("element {0} is not in the family")]
    NotInFamily(String),
    #[error("cannot parse G-partition key {0:?}")]
    ParseKey(String),
}
