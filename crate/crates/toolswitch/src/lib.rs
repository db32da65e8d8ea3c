//! Job sequencing and tool switching.
//!
//! A machine runs `n` jobs in some order. Job `i` needs the tool set `T_i`,
//! all of which must sit in the machine's magazine (capacity `C` slots) while
//! the job runs. Swapping one tool for another between jobs costs one switch;
//! the initial load is free. Two nested problems arise:
//!
//! * **Tool loading** (fixed order): choose the magazine contents at every
//!   instant so that the number of switches is minimal.
//! * **Job sequencing**: choose the order whose optimal loading cost is
//!   minimal.
//!
//! This crate provides four interchangeable evaluators for the tool-loading
//! objective (the hot inner loop of any sequencing heuristic), slow exact
//! oracles to validate them, instance parsing/generation, and an iterated
//! local search solver for the sequencing problem:
//!
//! * [`eval::ktns_evaluate`]: the classical keep-tool-needed-soonest policy
//!   driven by a next-needed matrix.
//! * [`eval::ktns_bitwise_evaluate`]: the same policy computed with block
//!   set operations instead of per-tool scans.
//! * [`eval::mpca_evaluate`]: pipe construction, counting the maximum
//!   number of tools that can be kept in the magazine across gaps between
//!   uses and converting that count into the switch total.
//! * [`eval::mpca_bitwise_evaluate`]: pipe construction with a sparse
//!   range-union table and slot bookkeeping that prunes impossible pipe
//!   starts.
//!
//! All four agree exactly on every valid input; the `oracle` module holds the
//! independent ground truths (subset dynamic programming, exhaustive search,
//! arc counting) that the test suite checks them against.
//!
//! Indices are 0-based everywhere in the API. File formats and printed
//! reports use 1-based job and tool numbers; the conversion happens at the
//! I/O boundary and nowhere else.

pub mod eval;
#[cfg(test)]
pub(crate) mod fixtures;
pub mod io;
pub mod model;
pub mod oracle;
pub mod rng;
pub mod solver;
pub mod toolset;

pub use model::{Instance, JobSequence, MagazineTrace, ModelError, Pipe, SequenceView};
pub use toolset::ToolSet;
