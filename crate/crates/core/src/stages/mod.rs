//! Conditions, swap-closed stages, sequential methods and their
//! classification.

mod grammar;
mod method;
mod outcome;
mod stage;

pub use grammar::{parse_method, MethodSpec};
pub use method::{ElectionMethod, Method, StageTrace};
pub use outcome::Outcome;
pub use stage::{stage_type, Condition, Stage, StageResult, StageType};
