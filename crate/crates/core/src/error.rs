use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A structured mesh needs at least one cell per direction.
    ZeroSubdivisions,
    DegenerateTriangle {
        area: f64,
    },
    IndexOutOfBounds {
        row: usize,
        col: usize,
        nrows: usize,
        ncols: usize,
    },
    DimensionMismatch {
        expected: usize,
        found: usize,
    },
    /// Iterative solver stopped before reaching its tolerance.
    NotConverged {
        iterations: usize,
        relative_residual: f64,
    },
    /// Factorization met a (numerically) zero pivot.
    Singular {
        pivot: usize,
        relative_residual: f64,
    },
    NotPositiveDefinite {
        pivot: usize,
    },
    MeshMismatch,
    NotNested,
    InvalidProblem(&'static str),
    TooFewRecords {
        needed: usize,
        found: usize,
    },
    IterationCap {
        iterations: usize,
        stationarity: f64,
        feasibility: f64,
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ZeroSubdivisions => write!(f, "mesh needs at least one subdivision"),
            Error::DegenerateTriangle { area } => {
                write!(f, "degenerate or inverted triangle (signed area {area:e})")
            }
            Error::IndexOutOfBounds { row, col, nrows, ncols } => {
                write!(f, "entry ({row}, {col}) outside a {nrows}x{ncols} matrix")
            }
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::NotConverged { iterations, relative_residual } => write!(
                f,
                "solver did not converge after {iterations} iterations \
                 (relative residual {relative_residual:e})"
            ),
            Error::Singular { pivot, relative_residual } => write!(
                f,
                "matrix is numerically singular at pivot {pivot} \
                 (relative residual {relative_residual:e})"
            ),
            Error::NotPositiveDefinite { pivot } => {
                write!(f, "matrix is not positive definite (pivot {pivot})")
            }
            Error::MeshMismatch => write!(f, "functions live on different meshes"),
            Error::NotNested => write!(f, "meshes are not part of the same refinement hierarchy"),
            Error::InvalidProblem(msg) => write!(f, "invalid problem: {msg}"),
            Error::TooFewRecords { needed, found } => {
                write!(f, "rate fit needs {needed} usable records, found {found}")
            }
            Error::IterationCap { iterations, stationarity, feasibility } => write!(
                f,
                "active set iteration hit its cap of {iterations} \
                 (stationarity {stationarity:e}, feasibility {feasibility:e})"
            ),
        }
    }
}

impl core::error::Error for Error {}
