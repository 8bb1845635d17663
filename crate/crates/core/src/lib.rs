//! Polynomial-coded distributed matrix multiplication.
//!
//! A master multiplies `A (r x s)` by `B (s x c)` on `N` unreliable workers by
//! partitioning the factors, encoding the partitions as evaluations of
//! univariate or bivariate polynomials (and their derivatives), and decoding
//! the product from whichever partial products arrive first. The crate
//! provides:
//!
//! * [`plan`] / [`encode`] — partitioning and polynomial (Hermite) encoding,
//! * [`scheme`] / [`order`] — the coding schemes, their storage constraints,
//!   per-worker computation orders, recovery thresholds and waste metrics,
//! * [`interp`] — interpolation-matrix assembly, the linear-system decoder,
//!   the coalescence discard policy and an empirical regularity checker,
//! * [`peel`] — the product-grid peeling decoder used by grid coding,
//! * [`sim`] — an event-driven Monte-Carlo straggler simulator under a
//!   shifted-exponential speed model,
//! * [`exec`] — an in-process master/worker runtime that runs the whole
//!   pipeline on real data.

pub mod encode;
pub mod error;
pub mod exec;
pub mod interp;
pub mod order;
pub mod peel;
pub mod plan;
pub mod scheme;
pub mod sim;
mod solve;

pub use encode::{eval_poly_a, eval_poly_b, eval_upc_b, partial_product, BlockKind, CodedBlock};
pub use error::Error;
pub use exec::{run_job, DelayModel, JobReport, ResponseMessage, RunOptions, WorkerTask};
pub use interp::{
    build_interpolation_system, check_regularity, decode_bivariate, discard_policy_nzo,
    discard_policy_zzo, interpolation_matrix, sample_distinct_points, select_responses_nzo,
    select_responses_zzo, DecodeOutput, DerivativeSet, InterpolationSystem, RegularityReport,
    ResponseRow, Selection,
};
pub use peel::{bproc_peel, GridState, PeelOutcome};
pub use plan::{assemble_product, concat_b_blocks, partition, stack_a_blocks, PartitionPlan};
pub use scheme::{allocate_storage, Metrics, Scheme, SchemeConfig};
pub use sim::{
    monte_carlo, run_trial, sample_worker_speed, MonteCarloSummary, SimOptions, SimOutcome,
    SpeedModel,
};

/// Dense `f64` matrix used for all payloads.
pub type Mat = nalgebra::DMatrix<f64>;
