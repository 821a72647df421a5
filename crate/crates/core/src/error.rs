use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A scalar parameter is outside its admissible range.
    InvalidParameter {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },
    /// Site index does not exist in the tree.
    SiteOutOfRange {
        site: usize,
        sites: usize,
    },
    /// Generation index outside `1..=N`.
    GenerationOutOfRange {
        generation: usize,
        generations: u32,
    },
    /// Tree is too deep for the requested operation.
    ResourceGuard {
        generations: u32,
        max: u32,
    },
    /// `<C_m|H|C_m'>` disagrees with the effective chain.
    ReductionMismatch {
        row: usize,
        col: usize,
        deviation: f64,
    },
    /// Hamiltonian and basis were built from different trees.
    DimensionMismatch {
        expected: usize,
        found: usize,
    },
    /// Output grid is empty, unsorted, non-finite, or does not start at 0.
    InvalidTimeGrid(&'static str),
    /// Adaptive integrator could not meet its tolerance.
    StepSizeUnderflow {
        t: f64,
        step: f64,
    },
    MaxStepsExceeded {
        t: f64,
        steps: usize,
    },
    /// A transfer amplitude with modulus above one reached the protocol.
    AmplitudeExceedsUnity(f64),
    /// Post-selection on an outcome that never happens.
    ZeroSuccessProbability,
    /// Quadrature produced a non-finite value.
    QuadratureFailure,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParameter {
                name,
                value,
                expected,
            } => write!(f, "invalid {name} = {value}: expected {expected}"),
            Error::SiteOutOfRange { site, sites } => {
                write!(f, "site {site} does not exist (tree has sites 1..={sites})")
            }
            Error::GenerationOutOfRange {
                generation,
                generations,
            } => write!(
                f,
                "generation {generation} out of range (tree has generations 1..={generations})"
            ),
            Error::ResourceGuard { generations, max } => {
                write!(f, "{generations} generations exceeds the limit of {max}")
            }
            Error::ReductionMismatch {
                row,
                col,
                deviation,
            } => write!(
                f,
                "column-basis sandwich ({row}, {col}) deviates from the effective chain by {deviation:e}"
            ),
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::InvalidTimeGrid(why) => write!(f, "invalid time grid: {why}"),
            Error::StepSizeUnderflow { t, step } => {
                write!(f, "step size underflow at t = {t} (h = {step:e})")
            }
            Error::MaxStepsExceeded { t, steps } => {
                write!(f, "integrator exceeded {steps} steps at t = {t}")
            }
            Error::AmplitudeExceedsUnity(a) => {
                write!(f, "transfer amplitude modulus {a} exceeds 1")
            }
            Error::ZeroSuccessProbability => {
                f.write_str("protocol aborted, zero success probability")
            }
            Error::QuadratureFailure => f.write_str("quadrature produced a non-finite value"),
        }
    }
}

impl core::error::Error for Error {}
