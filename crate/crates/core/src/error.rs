use thiserror::Error;

use crate::degree::Degree;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("malformed shift `{0}` (expected m+pa, e.g. 0-1a)")]
    Shift(String),
    #[error("malformed range `{0}` (expected lo:hi)")]
    Range(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("composite of consecutive maps is nonzero in column {column}")]
    CompositionNotZero { column: usize },
    #[error("matrix is {rows}x{cols} but the groups have {expected_rows} and {expected_cols} generators")]
    ShapeMismatch { rows: usize, cols: usize, expected_rows: usize, expected_cols: usize },
    #[error("not a homomorphism: generator {column} has order {order} but its image is not killed by it")]
    NotAHomomorphism { column: usize, order: String },
    #[error("division by an even number is not defined in the 2-local integers")]
    EvenDenominator,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("page {page} carries no differential for height {n}")]
    NoDifferential { n: u32, page: u32 },
    #[error("monomial {monomial} cannot survive to page {page}")]
    NotOnPage { monomial: String, page: u32 },
    #[error("window is not closed under the page-{page} block shift: block {block} is missing")]
    WindowNotClosed { page: u32, block: String },
    #[error("monomial homology of block {block} disagrees with the Smith normal form computation")]
    HomologyMismatch { block: String },
    #[error("degree self-check failed for {name}: computed {computed}, closed form {expected}")]
    DegreeMismatch { name: String, computed: Degree, expected: Degree },
    #[error("map {kind} does not shift the v_n exponent by {expected} (got {got})")]
    BlockMismatch { kind: String, expected: i64, got: i64 },
    #[error("height must be at least 1 (got {0})")]
    BadHeight(u32),
}
