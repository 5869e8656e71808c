use thiserror::Error;

/// Errors produced anywhere in the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed design: {0}")]
    MalformedDesign(String),
    #[error("design has no holes")]
    MissingHoles,
    #[error("design has no resolution")]
    MissingResolution,
    #[error("cross-pair count {pairs} of type {gtype} is not divisible by 6")]
    NonIntegral { gtype: String, pairs: usize },

    #[error("point {0} lies in no mapping segment")]
    UnmappedPoint(usize),
    #[error("unsupported step {0} for a Z_c x Z_3 segment")]
    UnsupportedStep(usize),
    #[error("developed block {0:?} duplicates an earlier block")]
    DuplicateBlock(Vec<u32>),
    #[error("developed block {0:?} has fewer than 4 distinct points")]
    CollapsedBlock(Vec<u32>),
    #[error("{file}:{line}: {msg}")]
    Syntax {
        file: String,
        line: usize,
        msg: String,
    },
    #[error("group directives do not partition the point set: {0}")]
    Partition(String),

    #[error("{0} is not a prime power")]
    NotPrimePower(usize),
    #[error("cannot build {what}: block size {k} exceeds the bound {bound} for side {q}")]
    TooManyGroups {
        what: &'static str,
        k: usize,
        q: usize,
        bound: usize,
    },
    #[error("internal check failed: {0}")]
    Internal(String),

    #[error("no ingredient 4-GDD of type {0} is available{1}")]
    MissingIngredient(String, String),
    #[error("bad ingredient: {0}")]
    BadIngredient(String),
    #[error("case (u, h) = ({u}, {h}) is excluded from hole-pattern synthesis")]
    ForbiddenCase { u: usize, h: usize },
    #[error("cannot align filler groups {filler:?} with cells {cells:?}")]
    Alignment {
        filler: Vec<usize>,
        cells: Vec<usize>,
    },
    #[error("filler has {got} points but the target group has {want}")]
    SizeMismatch { got: usize, want: usize },
    #[error("class index {index} out of range ({classes} classes)")]
    BadIndex { index: usize, classes: usize },
    #[error("in {op}: {source}")]
    Recipe {
        op: String,
        #[source]
        source: Box<Error>,
    },

    #[error("verification failed:\n{0}")]
    Verification(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Wrap an error with the recipe operator it occurred under.
    pub fn in_op(self, op: &str) -> Error {
        Error::Recipe {
            op: op.to_string(),
            source: Box::new(self),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
