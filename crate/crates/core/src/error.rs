use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("elements belong to different groups ({0} vs {1})")]
    GroupMismatch(String, String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid homomorphism: {0}")]
    InvalidHom(String),
    #[error("subgroup is not normal: {0}")]
    NotNormal(String),
    #[error("quotient has torsion: {0}")]
    TorsionQuotient(String),
    #[error("order cannot be induced: {0}")]
    NotInducible(String),
    #[error("sequence is not exact: {0}")]
    NotExact(String),
    #[error("character is not injective on the center: {0}")]
    NotInjective(String),
    #[error("subgroup is not an antichain: {0}")]
    NotAntichain(String),
    #[error("positivity cannot be decided: {0}")]
    UnsupportedDecision(String),
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("zero character")]
    ZeroCharacter,
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),
    #[error("{line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("unresolved reference to {kind} '{name}'")]
    Unresolved { kind: String, name: String },
    #[error("in declaration '{decl}': {source}")]
    Declaration {
        decl: String,
        #[source]
        source: Box<Error>,
    },
    #[error("io: {0}")]
    Io(String),
}

impl Error {
    /// Process exit code for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } => 2,
            Error::ResourceLimit(_) => 4,
            Error::Declaration { source, .. } => source.exit_code(),
            Error::Io(_) => 1,
            _ => 3,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
