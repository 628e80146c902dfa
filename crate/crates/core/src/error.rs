use core::fmt;

use crate::thermo::ConservedState;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Density or pressure is not strictly positive.
    NonPhysical {
        cell: Option<(usize, usize)>,
        state: ConservedState,
    },
    /// The two states would generate vacuum: `2(a_L + a_R)/(γ-1) <= u_R - u_L`.
    Vacuum {
        critical: f64,
        delta_u: f64,
    },
    /// Newton/bisection for the star pressure did not converge.
    NoConvergence {
        iterations: usize,
        residual: f64,
    },
    /// A resolution is not an integer multiple of another.
    ResolutionMismatch {
        from: (usize, usize),
        to: (usize, usize),
    },
    /// Probability weights do not sum to one.
    UnnormalizedMeasure {
        total: f64,
    },
    /// An error study needs at least two mesh levels.
    InsufficientLevels {
        levels: usize,
    },
    InvalidParameter(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NonPhysical { cell, state } => {
                write!(f, "non-physical state ")?;
                if let Some((i, j)) = cell {
                    write!(f, "in cell ({i}, {j}) ")?;
                }
                write!(
                    f,
                    "(rho={}, mx={}, my={}, E={})",
                    state.rho, state.mx, state.my, state.e_total
                )
            }
            Error::Vacuum { critical, delta_u } => write!(
                f,
                "Riemann problem generates vacuum: pressure positivity needs {critical} > u_R - u_L = {delta_u}"
            ),
            Error::NoConvergence {
                iterations,
                residual,
            } => write!(
                f,
                "star pressure iteration did not converge after {iterations} iterations (residual {residual})"
            ),
            Error::ResolutionMismatch { from, to } => write!(
                f,
                "resolution {}x{} is not a divisor of {}x{}",
                from.0, from.1, to.0, to.1
            ),
            Error::UnnormalizedMeasure { total } => {
                write!(f, "measure weights sum to {total}, expected 1")
            }
            Error::InsufficientLevels { levels } => {
                write!(f, "error study needs at least 2 levels, got {levels}")
            }
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
