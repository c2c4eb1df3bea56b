use thiserror::Error;

/// Failure to read one of the text formats.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    /// Well-formed text that does not describe a valid document. `location`
    /// is a document path such as `components[1].diagram.linkages[0].to`,
    /// or `line:column` when only the position is known.
    #[error("schema error at {location}: {message}")]
    Schema { location: String, message: String },
    #[error("duplicate rule `{output}.{failure_type}` in block `{block}` at {line}:{column}")]
    DuplicateRuleKey {
        block: String,
        output: String,
        failure_type: String,
        line: usize,
        column: usize,
    },
}

impl FormatError {
    pub(crate) fn schema(location: impl Into<String>, message: impl Into<String>) -> Self {
        FormatError::Schema {
            location: location.into(),
            message: message.into(),
        }
    }

    pub(crate) fn from_json(e: serde_json::Error) -> Self {
        use serde_json::error::Category;
        match e.classify() {
            Category::Data => FormatError::Schema {
                location: format!("{}:{}", e.line(), e.column()),
                message: strip_position(&e.to_string()),
            },
            _ => FormatError::Syntax {
                line: e.line(),
                column: e.column(),
                message: strip_position(&e.to_string()),
            },
        }
    }
}

/// serde_json appends " at line L column C"; the position is kept in
/// dedicated fields instead.
fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg.to_string(),
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_')
}
