use thiserror::Error;

/// Errors raised while reading or running programs. Plain failure is not an
/// error; these all abort the proof that raised them.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("syntax error at line {line}, column {column}: {message}\n    {excerpt}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
        excerpt: String,
    },
    #[error("existence error: unknown procedure {name}/{arity}")]
    Existence { name: String, arity: usize },
    #[error("instantiation error: {context}")]
    Instantiation { context: String },
    #[error("type error: expected {expected}, found {found}")]
    Type { expected: String, found: String },
    #[error("evaluation error: {0}")]
    Evaluation(String),
    #[error("permission error: cannot {action} {name}/{arity}")]
    Permission {
        action: String,
        name: String,
        arity: usize,
    },
    #[error("native predicate {name}/{arity} is already defined")]
    DuplicateNative { name: String, arity: usize },
    #[error("resource error: {0}")]
    Resource(ResourceLimit),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum ResourceLimit {
    #[error("resolution step budget of {0} exhausted")]
    Steps(u64),
    #[error("choice point stack exceeded {0} entries")]
    ChoicePoints(usize),
}

impl EngineError {
    pub fn instantiation(context: impl Into<String>) -> Self {
        EngineError::Instantiation {
            context: context.into(),
        }
    }

    pub fn type_error(expected: impl Into<String>, found: &crate::Term) -> Self {
        EngineError::Type {
            expected: expected.into(),
            found: found.to_string(),
        }
    }

    pub fn permission(action: &str, key: &crate::PredKey) -> Self {
        EngineError::Permission {
            action: action.to_string(),
            name: key.name.to_string(),
            arity: key.arity,
        }
    }

    pub fn is_resource(&self) -> bool {
        matches!(self, EngineError::Resource(_))
    }
}

pub type Result<T, E = EngineError> = std::result::Result<T, E>;
