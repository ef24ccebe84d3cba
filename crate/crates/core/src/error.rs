use std::path::PathBuf;

use thiserror::Error;

use crate::circuit::GateKind;
use crate::decompose::PhysicalOpcode;
use crate::hardware::EncodingScheme;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CircuitError {
    #[error("{kind} expects {expected} operand(s), got {found}")]
    Arity {
        kind: GateKind,
        expected: usize,
        found: usize,
    },
    #[error("{kind} expects {expected} parameter(s), got {found}")]
    ParamCount {
        kind: GateKind,
        expected: usize,
        found: usize,
    },
    #[error("{kind} uses qubit {qubit} more than once")]
    DuplicateOperand { kind: GateKind, qubit: usize },
    #[error("qubit {qubit} is out of range for a {num_qubits}-qubit circuit")]
    OperandOutOfRange { qubit: usize, num_qubits: usize },
    #[error("angle {0} is not a finite number")]
    NonFiniteAngle(f64),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QasmError {
    #[error("{line}:{col}: syntax error: {msg}")]
    Syntax {
        line: usize,
        col: usize,
        msg: String,
    },
    #[error("{line}:{col}: unsupported gate `{name}`")]
    UnsupportedGate {
        name: String,
        line: usize,
        col: usize,
    },
    #[error("{line}:{col}: quantum register `{name}` is declared more than once")]
    RegisterRedeclared {
        name: String,
        line: usize,
        col: usize,
    },
    #[error("{line}:{col}: only a single quantum register is supported (found `{name}`)")]
    MultipleRegisters {
        name: String,
        line: usize,
        col: usize,
    },
    #[error(
        "{line}:{col}: qubit index {index} out of range for register `{register}` of size {size}"
    )]
    QubitOutOfRange {
        register: String,
        index: usize,
        size: usize,
        line: usize,
        col: usize,
    },
    #[error("{line}:{col}: unknown register `{name}`")]
    UnknownRegister {
        name: String,
        line: usize,
        col: usize,
    },
    #[error("{line}:{col}: {source}")]
    Circuit {
        line: usize,
        col: usize,
        source: CircuitError,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UnitaryError {
    #[error("unitary oracle is limited to {max} qubits, circuit has {num_qubits}")]
    TooManyQubits { num_qubits: usize, max: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HardwareError {
    #[error("{what} must be a positive power of two, got {value}")]
    NotPowerOfTwo { what: &'static str, value: usize },
    #[error(
        "{scheme} needs {what} >= 2 for a parallelizability factor of at least 2, got {value}"
    )]
    RhoTooSmall {
        scheme: EncodingScheme,
        what: &'static str,
        value: usize,
    },
    #[error("interface width must be at least one bit")]
    ZeroInterfaceWidth,
    #[error("data qubit {qubit} out of range ({count} data qubits)")]
    QubitOutOfRange { qubit: usize, count: usize },
    #[error("node {node} out of range ({count} nodes)")]
    NodeOutOfRange { node: usize, count: usize },
    #[error("{0} has no subnet organization")]
    NoSubnets(EncodingScheme),
    #[error("a {dist} map of {num_logical} logical qubits needs {needed} nodes, network has {available}")]
    NetworkTooSmall {
        dist: crate::hardware::DistributionMode,
        num_logical: usize,
        needed: usize,
        available: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DecomposeError {
    #[error("physical CX needs two distinct nodes, got {0} twice")]
    SameNode(usize),
    #[error("instruction {index} ({kind}) is not in the target basis; transpile first")]
    NotBasis { index: usize, kind: GateKind },
    #[error("circuit uses {circuit} logical qubits but the map holds {map}")]
    MapTooSmall { circuit: usize, map: usize },
    #[error("invalid CX template: {0}")]
    Template(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("group {group}: {reason}")]
    Illegal { group: usize, reason: String },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RuntimeError {
    #[error("timing model has no entry for {0}")]
    UnknownOpcode(PhysicalOpcode),
    #[error(transparent)]
    Group(#[from] GroupError),
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("failed to parse configuration: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("invalid configuration: {0}")]
    Invalid(String),
}

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("unknown benchmark `{0}`")]
    UnknownBenchmark(String),
    #[error("benchmark needs at least {min} logical qubits, got {got}")]
    TooFewQubits { min: usize, got: usize },
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Qasm(#[from] QasmError),
    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Bench(#[from] BenchError),
    #[error(transparent)]
    Hardware(#[from] HardwareError),
    #[error(transparent)]
    Decompose(#[from] DecomposeError),
    #[error(transparent)]
    Runtime(#[from] RuntimeError),
}

#[derive(Debug, Error)]
pub enum ReportError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("cannot plot an empty report")]
    Empty,
}
