use thiserror::Error;

/// Errors raised while reading a serialized container or structure.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("bad magic bytes")]
    BadMagic,
    #[error("unsupported format version {0}")]
    UnsupportedVersion(u8),
    #[error("unknown scheme tag {0}")]
    UnknownScheme(u8),
    #[error("truncated input: needed {needed} bytes at offset {offset}")]
    Truncated { offset: usize, needed: usize },
    #[error("content checksum mismatch (stored {stored:#018x}, computed {computed:#018x})")]
    ContentChecksum { stored: u64, computed: u64 },
    #[error("malformed {what}: {detail}")]
    Malformed { what: &'static str, detail: String },
}

impl FormatError {
    pub(crate) fn malformed(what: &'static str, detail: impl Into<String>) -> Self {
        FormatError::Malformed {
            what,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("position {index} out of range (length {len})")]
    OutOfRange { index: usize, len: usize },
    #[error("corrupt parse: {0}")]
    CorruptParse(String),
    #[error("corrupt archive: {0}")]
    CorruptArchive(String),
    #[error("encoding error: {0}")]
    Encoding(String),
    #[error("reference mismatch: archive expects checksum {expected:#018x} (length {expected_len}), got {actual:#018x} (length {actual_len})")]
    ReferenceMismatch {
        expected: u64,
        expected_len: u64,
        actual: u64,
        actual_len: u64,
    },
    #[error("ingestion error at byte {offset}: {detail}")]
    Ingest { offset: usize, detail: String },
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[inline]
pub(crate) fn check_index(index: usize, len: usize) -> Result<()> {
    if index < len {
        Ok(())
    } else {
        Err(Error::OutOfRange { index, len })
    }
}
