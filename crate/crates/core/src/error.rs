use thiserror::Error;

/// Failure modes shared by every numerical layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("insufficient precision at {digits} digits (only {achieved} digits survived); retry with {suggested} digits")]
    InsufficientPrecision {
        digits: u32,
        achieved: u32,
        suggested: u32,
    },

    #[error("evaluation point is at a pole: {0}")]
    AtPole(String),

    #[error("Baecklund denominator vanishes at n = {n}")]
    BacklundSingularity { n: i64 },

    #[error("exceptional point: {0}")]
    ExceptionalPoint(String),

    #[error("p vanishes; the P34 residual divides by p")]
    PVanishes,

    #[error("partition function vanishes to working precision")]
    PartitionZero,

    #[error("continuation path passes near the branch point {re:.7}{im:+.7}i")]
    PathNearBranchPoint { re: f64, im: f64 },

    #[error("non-finite value produced in {0}")]
    Overflow(&'static str),

    #[error("internal consistency check failed: {0}")]
    InternalConsistency(String),

    #[error("integration failed: {0}")]
    Integration(String),
}

impl Error {
    /// Errors that reflect a mathematical singularity of the evaluated object
    /// rather than a numerical or usage problem.
    pub fn is_singularity(&self) -> bool {
        matches!(
            self,
            Error::AtPole(_)
                | Error::BacklundSingularity { .. }
                | Error::ExceptionalPoint(_)
                | Error::PVanishes
                | Error::PartitionZero
                | Error::PathNearBranchPoint { .. }
        )
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidInput(_) => "invalid_input",
            Error::InsufficientPrecision { .. } => "insufficient_precision",
            Error::AtPole(_) => "at_pole",
            Error::BacklundSingularity { .. } => "backlund_singularity",
            Error::ExceptionalPoint(_) => "exceptional_point",
            Error::PVanishes => "p_vanishes",
            Error::PartitionZero => "partition_zero",
            Error::PathNearBranchPoint { .. } => "path_near_branch_point",
            Error::Overflow(_) => "overflow",
            Error::InternalConsistency(_) => "internal_consistency",
            Error::Integration(_) => "integration",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
