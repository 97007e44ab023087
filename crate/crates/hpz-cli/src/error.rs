//! CLI error taxonomy with a stable exit-code contract and a
//! machine-readable JSON rendering (printed to stderr on failure).

use std::fmt;

use hpz_core::HpzError;

#[derive(Debug)]
pub enum CliError {
    /// File IO failure.
    Io { path: String, message: String },
    /// JSON syntax error.
    Parse { message: String },
    /// Structurally valid JSON that violates the model schema.
    Schema { field: String, message: String },
    /// Matrix/vector shape disagreement, with the offending field path.
    Dimension {
        field: String,
        expected: usize,
        found: usize,
    },
    /// Error propagated from the set library.
    Core(HpzError),
    /// `--check-containment` found escaping trajectories.
    ContainmentFailed { failures: usize, total: usize },
    /// Flag combination that cannot be served (e.g. SVG for a 3-D model).
    Usage { message: String },
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Io { .. } => "io",
            CliError::Parse { .. } => "parse",
            CliError::Schema { .. } => "schema",
            CliError::Dimension { .. } => "dimension",
            CliError::Core(HpzError::BudgetExceeded { .. }) => "budget",
            CliError::Core(HpzError::AllModesEmpty { .. }) => "all-modes-empty",
            CliError::Core(_) => "core",
            CliError::ContainmentFailed { .. } => "containment",
            CliError::Usage { .. } => "usage",
        }
    }

    /// Distinct nonzero exit code per documented error path.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage { .. } => 2,
            CliError::Io { .. } => 3,
            CliError::Parse { .. } => 4,
            CliError::Schema { .. } => 5,
            CliError::Dimension { .. } => 6,
            CliError::Core(HpzError::BudgetExceeded { .. }) => 7,
            CliError::Core(HpzError::AllModesEmpty { .. }) => 8,
            CliError::Core(_) => 9,
            CliError::ContainmentFailed { .. } => 10,
        }
    }

    pub fn to_json(&self) -> String {
        let mut obj = serde_json::Map::new();
        obj.insert("kind".into(), self.kind().into());
        obj.insert("message".into(), self.to_string().into());
        obj.insert("exit_code".into(), self.exit_code().into());
        if let CliError::Dimension { field, expected, found } = self {
            obj.insert("field".into(), field.clone().into());
            obj.insert("expected".into(), (*expected as u64).into());
            obj.insert("found".into(), (*found as u64).into());
        }
        if let CliError::Schema { field, .. } = self {
            obj.insert("field".into(), field.clone().into());
        }
        serde_json::Value::Object(obj).to_string()
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io { path, message } => write!(f, "io error on {}: {}", path, message),
            CliError::Parse { message } => write!(f, "model parse error: {}", message),
            CliError::Schema { field, message } => {
                write!(f, "model schema error at {}: {}", field, message)
            }
            CliError::Dimension { field, expected, found } => {
                write!(f, "dimension mismatch at {}: expected {}, found {}", field, expected, found)
            }
            CliError::Core(e) => write!(f, "{}", e),
            CliError::ContainmentFailed { failures, total } => {
                write!(f, "containment check failed: {}/{} trajectories escaped", failures, total)
            }
            CliError::Usage { message } => write!(f, "{}", message),
        }
    }
}

impl std::error::Error for CliError {}

impl From<HpzError> for CliError {
    fn from(e: HpzError) -> Self {
        CliError::Core(e)
    }
}
