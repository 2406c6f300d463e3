//! Candidates, rankings, ballot spaces and exact-count profiles.

mod profile;
mod ranking;
mod space;

pub use profile::Profile;
pub use ranking::Ranking;
pub use space::{BallotCatalog, BallotSpace, Candidate, MAX_CANDIDATES};
