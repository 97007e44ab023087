use alloc::string::String;
use core::fmt;

/// Errors produced by set construction and the operation library.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HpzError {
    /// Two blocks of a representation disagree on a shared dimension.
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
        detail: String,
    },
    /// A factor assignment does not match the owning set.
    LengthMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },
    /// A binary factor entry was neither -1 nor +1.
    InvalidBinaryFactor { index: usize },
    /// A continuous factor entry left the unit box.
    FactorOutOfBox { index: usize },
    /// The number of binary leaves exceeds the configured cap.
    BudgetExceeded { leaves_log2: u32, cap_log2: u32 },
    /// Every mode partition of a reachability step was provably empty.
    AllModesEmpty { step: usize },
}

impl fmt::Display for HpzError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HpzError::DimensionMismatch {
                context,
                expected,
                found,
                detail,
            } => write!(
                f,
                "dimension mismatch in {context}: expected {expected}, found {found} ({detail})"
            ),
            HpzError::LengthMismatch {
                context,
                expected,
                found,
            } => write!(
                f,
                "length mismatch in {context}: expected {expected}, found {found}"
            ),
            HpzError::InvalidBinaryFactor { index } => {
                write!(f, "binary factor {index} is not -1 or +1")
            }
            HpzError::FactorOutOfBox { index } => {
                write!(f, "continuous factor {index} outside [-1, 1]")
            }
            HpzError::BudgetExceeded {
                leaves_log2,
                cap_log2,
            } => write!(
                f,
                "binary leaf budget exceeded: 2^{leaves_log2} leaves, cap 2^{cap_log2}"
            ),
            HpzError::AllModesEmpty { step } => {
                write!(f, "all mode partitions provably empty at step {step}")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for HpzError {}

pub(crate) fn dim_err(
    context: &'static str,
    expected: usize,
    found: usize,
    detail: &str,
) -> HpzError {
    HpzError::DimensionMismatch {
        context,
        expected,
        found,
        detail: String::from(detail),
    }
}
