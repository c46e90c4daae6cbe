use thiserror::Error;

/// Failure to parse a serialized value.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecodeError {
    #[error("truncated input")]
    Truncated,
    #[error("{0} trailing bytes")]
    TrailingBytes(usize),
    #[error("unsupported format version {0}")]
    UnsupportedVersion(u8),
    #[error("wrong length: expected {expected}, found {found}")]
    WrongLength { expected: usize, found: usize },
    #[error("not on group")]
    NotOnGroup,
    #[error("inconsistent dual representation")]
    InconsistentRepresentation,
    #[error("non-canonical encoding")]
    NonCanonical,
    #[error("invalid utf-8 in {0}")]
    InvalidUtf8(&'static str),
    #[error("invalid {field} tag {tag:#04x}")]
    InvalidTag { field: &'static str, tag: u8 },
    #[error("invalid hex armor")]
    InvalidHex,
    #[error("{0}")]
    Malformed(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("decode error: {0}")]
    Decode(#[from] DecodeError),
    #[error("suite mismatch: expected {expected}, found {found}")]
    SuiteMismatch { expected: String, found: String },
    #[error("pairing has no right-slot operand")]
    NoRightSlot,
    #[error("zero {0}")]
    ZeroScalar(&'static str),
    #[error("wrong key length: expected {expected}, found {found}")]
    KeyLength { expected: usize, found: usize },

    #[error("invalid warrant: {0}")]
    InvalidWarrant(String),
    #[error("unresolved identity: {0}")]
    UnresolvedIdentity(String),
    #[error("role mismatch for {id}: expected {expected}, found {found}")]
    RoleMismatch { id: String, expected: &'static str, found: &'static str },
    #[error("duplicate registry entry: {0}")]
    DuplicateEntry(String),

    #[error("missing {what} from {id}")]
    Missing { what: &'static str, id: String },
    #[error("duplicate {what} from {id}")]
    Duplicate { what: &'static str, id: String },
    #[error("unexpected {what} from {id}")]
    Unexpected { what: &'static str, id: String },
    #[error("share verification failed: {0}")]
    ShareVerification(String),
    #[error("partial from {0} was computed against a different r_p")]
    PartialMismatch(String),
    #[error("session of {0} already consumed")]
    SessionConsumed(String),
    #[error("secret source exhausted")]
    SecretsExhausted,

    #[error("{phase}: {source}")]
    Phase {
        phase: &'static str,
        #[source]
        source: Box<Error>,
    },
    #[error("{party}: {source}")]
    Party {
        party: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn in_phase(self, phase: &'static str) -> Error {
        Error::Phase { phase, source: Box::new(self) }
    }

    pub(crate) fn by_party(self, party: &str) -> Error {
        Error::Party { party: party.to_owned(), source: Box::new(self) }
    }

    /// Innermost error, skipping any phase and party wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::Phase { source, .. } | Error::Party { source, .. } => source.root(),
            other => other,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
