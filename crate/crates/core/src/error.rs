use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid name `{0}`: names must be nonempty and may not contain '.' or whitespace")]
    InvalidName(String),

    #[error("duplicate relation `{0}`")]
    DuplicateRelation(String),

    #[error("relation `{relation}` declares attribute `{attr}` twice")]
    DuplicateAttribute { relation: String, attr: String },

    #[error("relation `{0}` has no attributes")]
    EmptyRelation(String),

    #[error("attributes `{first}` and `{second}` share the canonical name `{canonical}`")]
    CanonicalCollision {
        canonical: String,
        first: String,
        second: String,
    },

    #[error("unknown relation `{0}`")]
    UnknownRelation(String),

    #[error("unknown attribute `{0}`")]
    UnknownAttribute(String),

    #[error("attribute `{0}` is not part of the schema universe")]
    OutsideUniverse(String),

    #[error("primary key of `{relation}` references `{attr}`, which the relation does not declare")]
    KeyOutsideRelation { relation: String, attr: String },

    #[error("reflexive functional dependency on `{0}`")]
    ReflexiveFd(String),

    #[error("functional dependency with empty left-hand side (rhs `{0}`)")]
    EmptyLhs(String),

    #[error("foreign key from `{from}` to `{to}` pairs {from_len} attribute(s) with {to_len}")]
    ForeignKeyArity {
        from: String,
        to: String,
        from_len: usize,
        to_len: usize,
    },

    #[error("foreign key on `{0}` must link two distinct relations")]
    ForeignKeySameRelation(String),

    #[error("security dependent set {members:?} needs at least two distinct attributes")]
    SetTooSmall { members: Vec<String> },

    #[error("relation `{relation}` has {arity} attributes; this path supports at most {limit}")]
    ArityLimit {
        relation: String,
        arity: usize,
        limit: usize,
    },

    #[error("view `{view}` mixes attributes of several relations (`{attr}` is not in `{base}`)")]
    ViewOutsideBase {
        view: String,
        base: String,
        attr: String,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Stable short code used in CLI output and tests.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidName(_) => "invalid-name",
            Error::DuplicateRelation(_) => "duplicate-relation",
            Error::DuplicateAttribute { .. } => "duplicate-attribute",
            Error::EmptyRelation(_) => "empty-relation",
            Error::CanonicalCollision { .. } => "canonical-collision",
            Error::UnknownRelation(_) => "unknown-relation",
            Error::UnknownAttribute(_) => "unknown-attribute",
            Error::OutsideUniverse(_) => "outside-universe",
            Error::KeyOutsideRelation { .. } => "key-outside-relation",
            Error::ReflexiveFd(_) => "reflexive-fd",
            Error::EmptyLhs(_) => "empty-lhs",
            Error::ForeignKeyArity { .. } => "foreign-key-arity",
            Error::ForeignKeySameRelation(_) => "foreign-key-same-relation",
            Error::SetTooSmall { .. } => "set-too-small",
            Error::ArityLimit { .. } => "arity-limit-exceeded",
            Error::ViewOutsideBase { .. } => "view-outside-base",
            Error::Json(_) => "malformed-document",
        }
    }
}
