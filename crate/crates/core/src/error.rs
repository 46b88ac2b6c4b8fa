use thiserror::Error;

/// Every failure the engine can report. Variant names follow the operation
/// contracts so the CLI can surface them verbatim.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("multiplication is not associative: ({a}*{b})*{c} != {a}*({b}*{c})")]
    NonAssociative { a: usize, b: usize, c: usize },
    #[error("element 0 is not a two-sided identity (fails at element {element})")]
    NoIdentity { element: usize },
    #[error("element {element} has no inverse")]
    NoInverse { element: usize },
    #[error("generators do not generate the group: closure has {closure} of {order} elements")]
    GeneratorsDoNotGenerate { closure: usize, order: usize },
    #[error("group of order {order} exceeds the configured cap {cap}")]
    GroupTooLarge { order: usize, cap: usize },
    #[error("not a subgroup: {0}")]
    NotASubgroup(String),
    #[error("not subconjugate: {0}")]
    NotSubconjugate(String),
    #[error("mark vector not realizable at class {class}: {reason}")]
    NotRealizable { class: String, reason: String },
    #[error("map is not equivariant: {0}")]
    NotEquivariant(String),
    #[error("invalid action: {0}")]
    InvalidAction(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("too large: {0}")]
    TooLarge(String),
    #[error("bound too small: generator of carrier {carrier} exceeds bound {bound}")]
    BoundTooSmall { carrier: u64, bound: usize },
    #[error("query of carrier {carrier} exceeds window bound {bound}")]
    QueryExceedsBound { carrier: u64, bound: usize },
    #[error("not a family: {0}")]
    NotAFamily(String),
    #[error("objects live over different groups")]
    GroupMismatch,
    #[error("window bounds differ: {0} vs {1}")]
    BoundMismatch(usize, usize),
    #[error("not a subgroup of the ambient group: {0}")]
    NotSubgroup(String),
    #[error("spans are not composable: {0}")]
    NotComposable(String),
    #[error("index set is not admissible: {0}")]
    InadmissibleIndex(String),
    #[error("no witness required: {0}")]
    NoWitnessRequired(String),
    #[error("dimension function is not antitone: {0}")]
    NotAntitone(String),
    #[error("invalid weak indexing system: {0}")]
    InvalidSystem(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// Stable name of the variant, used in CLI diagnostics and JSON reports.
    pub fn name(&self) -> &'static str {
        match self {
            Error::NonAssociative { .. } => "NonAssociative",
            Error::NoIdentity { .. } => "NoIdentity",
            Error::NoInverse { .. } => "NoInverse",
            Error::GeneratorsDoNotGenerate { .. } => "GeneratorsDoNotGenerate",
            Error::GroupTooLarge { .. } => "GroupTooLarge",
            Error::NotASubgroup(_) => "NotASubgroup",
            Error::NotSubconjugate(_) => "NotSubconjugate",
            Error::NotRealizable { .. } => "NotRealizable",
            Error::NotEquivariant(_) => "NotEquivariant",
            Error::InvalidAction(_) => "InvalidAction",
            Error::ShapeMismatch(_) => "ShapeMismatch",
            Error::TooLarge(_) => "TooLarge",
            Error::BoundTooSmall { .. } => "BoundTooSmall",
            Error::QueryExceedsBound { .. } => "QueryExceedsBound",
            Error::NotAFamily(_) => "NotAFamily",
            Error::GroupMismatch => "GroupMismatch",
            Error::BoundMismatch(..) => "BoundMismatch",
            Error::NotSubgroup(_) => "NotSubgroup",
            Error::NotComposable(_) => "NotComposable",
            Error::InadmissibleIndex(_) => "InadmissibleIndex",
            Error::NoWitnessRequired(_) => "NoWitnessRequired",
            Error::NotAntitone(_) => "NotAntitone",
            Error::InvalidSystem(_) => "InvalidSystem",
            Error::Parse(_) => "Parse",
            Error::Io(_) => "Io",
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
