use thiserror::Error;

/// Errors shared by every layer of the crate.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Matrix dimensions do not match the partition plan.
    #[error("dimension mismatch: {context} (expected {expected}, got {got})")]
    DimensionMismatch {
        context: &'static str,
        expected: String,
        got: String,
    },

    /// Partition counts must divide the matrix dimensions.
    #[error("{count} partitions do not divide dimension {dim}")]
    IndivisiblePartition { dim: usize, count: usize },

    /// Derivative order is at or above the polynomial degree bound.
    #[error("derivative order {order} out of range (must be < {max})")]
    DerivativeOrderOutOfRange { order: usize, max: usize },

    /// A scheme configuration violates its system constraints.
    #[error("invalid {scheme} configuration: {reason}")]
    InvalidConfig { scheme: &'static str, reason: String },

    /// No feasible storage split exists within the budget.
    #[error("storage budget {budget} infeasible for {scheme}: {reason}")]
    InfeasibleBudget {
        scheme: &'static str,
        budget: usize,
        reason: String,
    },

    /// The workers cannot jointly supply enough computations to decode.
    #[error("insufficient capacity: workers supply {capacity} computations, {required} required")]
    InsufficientCapacity { capacity: usize, required: usize },

    /// Two responses carry the same evaluation point and derivative order.
    #[error("duplicate response row: point ({x}, {y}), order ({k}, {l})")]
    DuplicateRow { x: f64, y: f64, k: usize, l: usize },

    /// Interpolation-system shape is wrong for the plan.
    #[error("interpolation system needs exactly {expected} rows, got {got}")]
    WrongRowCount { expected: usize, got: usize },

    /// The interpolation matrix is numerically singular.
    #[error("singular interpolation system (relative smallest singular value {rel_sv:.3e})")]
    SingularSystem { rel_sv: f64 },

    /// A decode selection could not gather enough usable responses.
    #[error("response selection kept {kept} rows, {required} required")]
    SelectionShortfall { kept: usize, required: usize },

    /// Worker runtime failed internally (channel closed early, thread panic).
    #[error("executor runtime failure: {0}")]
    Runtime(String),
}

pub type Result<T> = std::result::Result<T, Error>;
