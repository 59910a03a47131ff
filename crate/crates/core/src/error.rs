use thiserror::Error;

/// Errors produced by the toolkit.
///
/// Every variant has a stable machine-readable [`code`](Error::code) used by
/// the command-line front end.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("interval [{0}, {1}] is not finite")]
    NonLocallyFinite(String, String),

    #[error("component of {0} is unbounded (explored more than {1} elements)")]
    UnboundedComponent(String, usize),

    #[error("unknown element {0}")]
    UnknownElement(String),

    #[error("elements {0} and {1} are not comparable")]
    IncomparablePair(String, String),

    #[error("operands live on different carriers: {0}")]
    MismatchedCarrier(String),

    #[error("window is not convex: {0}")]
    WindowNotConvex(String),

    #[error("set meets more than one component: {0}")]
    SpansComponents(String),

    #[error("invalid ideal descriptor: {0}")]
    InvalidDescriptor(String),

    #[error("map is not order preserving: {0}")]
    NotOrderPreserving(String),

    #[error("map is not FCC: {0}")]
    NotFcc(String),

    #[error("maps are not composable or do not share source/target: {0}")]
    IncompatibleMaps(String),

    #[error("search budget of {0} exceeded")]
    BudgetExceeded(u64),

    #[error("coefficient ring is not commutative")]
    NonCommutativeRing,

    #[error("{0} is not a unit")]
    NotAUnit(String),

    #[error("matrix is not invertible")]
    NotInvertible,

    #[error("window family is not directed: no window contains {0} and {1}")]
    NotDirected(String, String),

    #[error("family is incompatible at windows {window_a} and {window_b}, entry ({row}, {col})")]
    Incompatible {
        window_a: String,
        window_b: String,
        row: String,
        col: String,
    },

    #[error("solvability undecided: {0}")]
    Undecided(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::NonLocallyFinite(..) => "non_locally_finite",
            Error::UnboundedComponent(..) => "unbounded_component",
            Error::UnknownElement(_) => "unknown_element",
            Error::IncomparablePair(..) => "incomparable_pair",
            Error::MismatchedCarrier(_) => "mismatched_carrier",
            Error::WindowNotConvex(_) => "window_not_convex",
            Error::SpansComponents(_) => "spans_components",
            Error::InvalidDescriptor(_) => "invalid_descriptor",
            Error::NotOrderPreserving(_) => "not_order_preserving",
            Error::NotFcc(_) => "not_fcc",
            Error::IncompatibleMaps(_) => "incompatible_maps",
            Error::BudgetExceeded(_) => "budget_exceeded",
            Error::NonCommutativeRing => "non_commutative_ring",
            Error::NotAUnit(_) => "not_a_unit",
            Error::NotInvertible => "not_invertible",
            Error::NotDirected(..) => "not_directed",
            Error::Incompatible { .. } => "incompatible",
            Error::Undecided(_) => "undecided",
            Error::DimensionMismatch(_) => "dimension_mismatch",
            Error::Parse(_) => "parse_error",
        }
    }

    /// Parse failures are distinguished from domain errors by the CLI exit code.
    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Parse(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
