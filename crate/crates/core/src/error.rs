use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("index {index} out of range for {size} qubits/orbitals")]
    IndexOutOfRange { index: usize, size: usize },

    #[error("dense oracle limited to {cap} qubits, got {requested}")]
    OracleCapExceeded { requested: usize, cap: usize },

    #[error("statevector limited to {cap} qubits, got {requested}")]
    TooManyQubits { requested: usize, cap: usize },

    #[error("invalid excitation: {0}")]
    InvalidExcitation(String),

    #[error("generator strings do not mutually commute")]
    NonCommutingGenerator,

    #[error("operator is not hermitian")]
    NonHermitian,

    #[error("expectation value has imaginary part {0:e}")]
    ImaginaryExpectation(f64),

    #[error("parameter `{0}` has no assigned value")]
    UnassignedParameter(String),

    #[error("unknown parameter `{0}`")]
    UnknownParameter(String),

    #[error("qubit count mismatch: {left} vs {right}")]
    QubitCountMismatch { left: usize, right: usize },

    #[error("gate {0} is not a fermionic excitation")]
    NotAFermionicGate(usize),

    #[error("gate position {0} out of range")]
    GatePosition(usize),

    #[error("generator of gate {0} does not have two eigenvalues ±r")]
    GeneratorNotTwoEigenvalue(usize),

    #[error("non-finite objective value at iteration {0}")]
    NonFinite(usize),

    #[error("operator pool is empty")]
    EmptyPool,

    #[error("solved energy {0} is not negative; supply explicit penalty factors")]
    NonNegativeEnergy(f64),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("I/O error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
