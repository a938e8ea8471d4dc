use std::io;
use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("expected header `{expected}`, found `{found}`")]
    Header {
        expected: &'static str,
        found: String,
    },
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("sentence {sentence}: {reason}")]
    Invariant { sentence: usize, reason: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("{}:{line}: {message}", path.display())]
    Malformed {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
}

#[derive(Debug, Error)]
pub enum RuleFileError {
    #[error("expected header `{expected}`, found `{found}`")]
    Header {
        expected: &'static str,
        found: String,
    },
    #[error("rule file format version {found} is not supported (expected {expected})")]
    Version { expected: u32, found: u32 },
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: invalid rule: {reason}")]
    Invalid { line: usize, reason: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("invalid configuration: {0}")]
    Invalid(String),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("shape mismatch at sentence {sentence}: {reason}")]
    ShapeMismatch { sentence: usize, reason: String },
}
