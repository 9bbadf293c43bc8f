use std::path::PathBuf;

/// Errors produced by dataset handling, mining, imputation and benchmarking.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv parse error at line {line}: expected {expected} fields, found {found}")]
    RaggedRow {
        line: usize,
        expected: usize,
        found: usize,
    },

    #[error("csv parse error: {0}")]
    Csv(String),

    #[error("duplicate attribute name `{0}` in header")]
    DuplicateAttribute(String),

    #[error("invalid attribute name `{0}`: {1}")]
    BadAttributeName(String, &'static str),

    #[error("invalid token `{token}` for attribute `{attr}`: {reason}")]
    BadToken {
        attr: String,
        token: String,
        reason: &'static str,
    },

    #[error(
        "observed value at line {line}, attribute `{attr}` equals the sentinel `{sentinel}`; \
         refusing to load ambiguous data"
    )]
    SentinelCollision {
        line: usize,
        attr: String,
        sentinel: String,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dataset already contains missing cells")]
    AlreadyIncomplete,

    #[error("attribute `{0}` has no observed value other than the sentinel")]
    DegenerateAttribute(String),

    #[error("rate {rate} masks zero cells in this dataset")]
    DegenerateTrial { rate: f64 },

    #[error("rule parse error at line {line}: {msg}")]
    RuleParse { line: usize, msg: String },

    #[error("rule references unknown attribute `{0}`")]
    UnknownAttribute(String),
}

pub type Result<T> = std::result::Result<T, Error>;
