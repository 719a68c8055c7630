use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    // artin
    #[error("ring is not artinian: no power of {0} lies in the ideal")]
    NotArtinian(String),
    #[error("operands live in different rings")]
    MixedRings,
    #[error("element is a unit, not nilpotent")]
    NotNilpotent,
    #[error("element is not a unit")]
    NotAUnit,

    // laurent / resinv
    #[error("insufficient precision: need coefficients below x^{needed}, known only below x^{available}")]
    InsufficientPrecision { needed: i64, available: i64 },
    #[error("series is not a unit of A((x)): {0}")]
    NotALaurentUnit(String),
    #[error("not a continuous endomorphism: nu(phi(x)) = {0} <= 0")]
    NotAnEndomorphism(i64),
    #[error("operation requires characteristic {expected}, ring has characteristic {found}")]
    WrongCharacteristic { expected: String, found: u64 },
    #[error("not a normalized nil-unit: {0}")]
    NotNilUnit(String),
    #[error("support exponent {exponent} is not divisible by {modulus}")]
    SupportNotDivisible { exponent: i64, modulus: i64 },
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    // tropical
    #[error("tropical curve has genus {0}, expected 1")]
    WrongGenus(u64),
    #[error("malformed tropical curve: {0}")]
    InvalidCurve(String),
    #[error("not radially aligned: lambda({0}) and lambda({1}) are incomparable")]
    NotRadiallyAligned(u32, u32),
    #[error("interior of the circle is not stable at vertex {0}")]
    NotStable(u32),
    #[error("edge {edge} cannot be split at distance {distance}: {reason}")]
    NonAligned {
        edge: usize,
        distance: String,
        reason: String,
    },
    #[error("invalid piecewise linear function: {0}")]
    InvalidPL(String),

    // contract
    #[error("jet order {have} too short, need at least {need}")]
    JetTooShort { need: usize, have: usize },
    #[error("node chart invariant violated: {0}")]
    ChartInvariant(String),
    #[error("smoothing parameter {0} is not assigned")]
    UnassignedParameter(String),
    #[error("element is not in Ann(t)")]
    NotInAnnihilator,
    #[error("charts at the next level do not truncate to the current charts: {0}")]
    IncompatibleCharts(String),
    #[error("contraction ring requires the residue field level, ring has nilpotency bound {0}")]
    NotResidueLevel(usize),
    #[error("invalid curve model: {0}")]
    InvalidModel(String),

    // singular
    #[error("delta invariant not stabilized: {at_n} at order {n}, {at_next} at order {next}")]
    NotStabilized {
        n: usize,
        at_n: usize,
        next: usize,
        at_next: usize,
    },
}

impl Error {
    /// Process exit code for this error: 2 parse, 3 precondition.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) => 2,
            _ => 3,
        }
    }
}
