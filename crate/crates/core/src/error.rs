use core::fmt;

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;

/// Everything that can go wrong inside the engine.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Requested register is empty or larger than the configured cap.
    Capacity { requested: usize, max: usize },
    /// A qubit index does not exist in the register.
    QubitIndex { qubit: usize, num_qubits: usize },
    /// A two-qubit gate was given the same qubit twice.
    DuplicateQubit(usize),
    /// Rotation angle is NaN or infinite.
    NonFiniteAngle,
    /// Parameter vector length does not match the circuit.
    ParameterCount { expected: usize, found: usize },
    /// A gate references a parameter slot outside the circuit's range.
    ParameterSlot { slot: usize, num_params: usize },
    /// A declared parameter slot is never used by any gate.
    UnusedParameterSlot(usize),
    /// A fixed gate (H, X, CNOT) was bound to a parameter slot.
    SlotOnFixedGate,
    /// The next circuit does not extend the previous one.
    PrefixViolation,
    /// Bitstring entry other than 0 or 1.
    NonBinary { position: usize, value: u8 },
    /// A vector length is not a power of two or does not match.
    Length { expected: usize, found: usize },
    /// Requested resolution is not compatible with the operation.
    Resolution { requested: usize, available: usize },
    /// Probability mass is negative, non-finite or sums to zero.
    InvalidMass,
    /// Intensity outside `[0, 1]`.
    Intensity,
    /// Image dimensions are unsuitable for the operation.
    Dimensions { height: usize, width: usize, reason: &'static str },
    /// A value that must be a power of two is not.
    NotPowerOfTwo(usize),
    /// Stage index past the end of the schedule.
    StageIndex { stage: usize, stages: usize },
    /// Schedule or layout is inconsistent.
    Schedule(&'static str),
    /// Invalid training or analysis configuration.
    Config(&'static str),
    /// Qubit subset is empty.
    EmptySubset,
    /// Percentile outside `(0, 100]`.
    Percentile,
    /// A block is absent from an assembly request.
    MissingBlock(usize),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Capacity { requested, max } => {
                write!(f, "register of {requested} qubits outside supported range 1..={max}")
            }
            Error::QubitIndex { qubit, num_qubits } => {
                write!(f, "qubit {qubit} out of range for {num_qubits}-qubit register")
            }
            Error::DuplicateQubit(q) => write!(f, "two-qubit gate acts twice on qubit {q}"),
            Error::NonFiniteAngle => f.write_str("rotation angle is not finite"),
            Error::ParameterCount { expected, found } => {
                write!(f, "expected {expected} parameters, got {found}")
            }
            Error::ParameterSlot { slot, num_params } => {
                write!(f, "parameter slot {slot} out of range (circuit has {num_params})")
            }
            Error::UnusedParameterSlot(slot) => write!(f, "parameter slot {slot} is never used"),
            Error::SlotOnFixedGate => f.write_str("fixed gate bound to a parameter slot"),
            Error::PrefixViolation => f.write_str("circuit does not extend the previous stage"),
            Error::NonBinary { position, value } => {
                write!(f, "bit {position} has non-binary value {value}")
            }
            Error::Length { expected, found } => {
                write!(f, "length mismatch: expected {expected}, found {found}")
            }
            Error::Resolution { requested, available } => {
                write!(f, "resolution {requested} incompatible with {available}-qubit distribution")
            }
            Error::InvalidMass => f.write_str("probability mass is negative, non-finite or zero"),
            Error::Intensity => f.write_str("pixel intensity outside [0, 1]"),
            Error::Dimensions { height, width, reason } => {
                write!(f, "image {height}x{width}: {reason}")
            }
            Error::NotPowerOfTwo(v) => write!(f, "{v} is not a power of two"),
            Error::StageIndex { stage, stages } => {
                write!(f, "stage {stage} out of range for {stages}-stage schedule")
            }
            Error::Schedule(msg) => write!(f, "invalid schedule: {msg}"),
            Error::Config(msg) => write!(f, "invalid configuration: {msg}"),
            Error::EmptySubset => f.write_str("qubit subset is empty"),
            Error::Percentile => f.write_str("percentile must lie in (0, 100]"),
            Error::MissingBlock(i) => write!(f, "block {i} missing"),
        }
    }
}

impl core::error::Error for Error {}
