use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuiverError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    SyntaxError {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("duplicate name `{0}`")]
    DuplicateName(String),
    #[error("unknown vertex `{name}` at line {line}, column {column}")]
    UnknownVertex {
        name: String,
        line: usize,
        column: usize,
    },
    #[error("unknown arrow `{0}`")]
    UnknownArrow(String),
    #[error("path `{0}` is not composable")]
    NotComposable(String),
}
