//! Hand-checked fixture shared by the unit tests.
//!
//! The six-job instance below (7 tools, capacity 5) is small enough to work
//! every algorithm by hand and rich enough to exercise evictions, capped
//! pipes and pruning. Expected values used across the test suite:
//!
//! * identity order: 5 switches, 10 pipes, `Σ|T_i|` = 20;
//! * order (1,2,5,3,4,6): 3 switches (the global optimum), 12 pipes.

use crate::model::{Instance, JobSequence};

/// Tool requirements (1-based in this table, 0-based in the built instance):
/// T1={4,5,6} T2={1,3,4,5} T3={1,2,7} T4={2,3,7} T5={4,5,7} T6={1,2,3,6}.
pub(crate) fn sample6() -> Instance {
    Instance::from_tool_lists(
        7,
        5,
        &[
            vec![3, 4, 5],
            vec![0, 2, 3, 4],
            vec![0, 1, 6],
            vec![1, 2, 6],
            vec![3, 4, 6],
            vec![0, 1, 2, 5],
        ],
    )
    .unwrap()
}

/// The optimal order (1,2,5,3,4,6), 0-based.
pub(crate) fn sample6_optimal_order() -> JobSequence {
    JobSequence::new(vec![0, 1, 4, 2, 3, 5]).unwrap()
}
