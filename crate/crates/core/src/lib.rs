//! Multistage combinatorial group testing.
//!
//! Up to `s` defective samples hide among `t`. A pool tests positive when it
//! contains at least one of them. Tests run in stages: all pools of a stage
//! are submitted together, and later stages may depend on earlier outcomes.
//!
//! * [`strategy::generic`]: four-stage search over any first-stage code, driven by the
//!   consistency hypergraph of the first outcome vector.
//! * [`strategy::two_defect`]: four-stage search for at most two defects over a
//!   concatenated constant-weight code, with an exact worst-case test count and a
//!   parameter optimizer.
//! * [`oracle`]: the simulated, stage-disciplined test oracle.
//! * [`verify`]: exhaustive correctness checks over all defect sets.

pub mod analysis;
pub mod binomial;
pub mod bits;
pub mod codes;
pub mod error;
pub mod hypergraph;
pub mod oracle;
pub mod strategy;
pub mod verify;

pub use bits::BitVector;
pub use codes::{concatenate, enumerate_constant_weight, BinaryCode, ConstantWeightCode, OutcomeVector, QaryCode};
pub use error::{Error, Result};
pub use hypergraph::{Coloring, ConsistencyHypergraph};
pub use oracle::{Oracle, Pool, StageTranscript};
pub use strategy::generic::{run_generic, GenericRunReport, GenericStrategyConfig};
pub use strategy::two_defect::{run_s2, select_params, worst_case_bound, S2Params, S2RunReport, TwoDefectStrategy};
pub use strategy::Strategy;
