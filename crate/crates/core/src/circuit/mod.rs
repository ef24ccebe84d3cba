//! Logical circuit representation.

mod qasm;
mod transpile;
mod unitary;

use std::f64::consts::TAU;
use std::fmt;

pub use qasm::{emit_qasm, parse_qasm, parse_qasm_with_warnings, QasmWarning};
pub use transpile::{lower_instruction, transpile_to_basis};
pub use unitary::{circuit_unitary, Unitary, MAX_ORACLE_QUBITS};

use crate::error::CircuitError;

/// Number of steps on the canonical angle grid (16-bit parameter words).
pub const ANGLE_STEPS: u32 = 1 << 16;

/// Logical gate kinds. The first four variants form the target basis; their
/// declaration order is the opcode order used when sorting dependency layers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GateKind {
    Rx,
    Ry,
    Rz,
    Cx,
    H,
    X,
    Y,
    Z,
    S,
    Sdg,
    T,
    Tdg,
    Cz,
    Swap,
}

impl GateKind {
    pub const ALL: [GateKind; 14] = [
        GateKind::Rx,
        GateKind::Ry,
        GateKind::Rz,
        GateKind::Cx,
        GateKind::H,
        GateKind::X,
        GateKind::Y,
        GateKind::Z,
        GateKind::S,
        GateKind::Sdg,
        GateKind::T,
        GateKind::Tdg,
        GateKind::Cz,
        GateKind::Swap,
    ];

    pub fn arity(self) -> usize {
        match self {
            GateKind::Cx | GateKind::Cz | GateKind::Swap => 2,
            _ => 1,
        }
    }

    pub fn param_count(self) -> usize {
        match self {
            GateKind::Rx | GateKind::Ry | GateKind::Rz => 1,
            _ => 0,
        }
    }

    pub fn is_basis(self) -> bool {
        matches!(
            self,
            GateKind::Rx | GateKind::Ry | GateKind::Rz | GateKind::Cx
        )
    }

    pub fn is_rotation(self) -> bool {
        matches!(self, GateKind::Rx | GateKind::Ry | GateKind::Rz)
    }

    pub fn qasm_name(self) -> &'static str {
        match self {
            GateKind::Rx => "rx",
            GateKind::Ry => "ry",
            GateKind::Rz => "rz",
            GateKind::Cx => "cx",
            GateKind::H => "h",
            GateKind::X => "x",
            GateKind::Y => "y",
            GateKind::Z => "z",
            GateKind::S => "s",
            GateKind::Sdg => "sdg",
            GateKind::T => "t",
            GateKind::Tdg => "tdg",
            GateKind::Cz => "cz",
            GateKind::Swap => "swap",
        }
    }

    pub fn from_qasm_name(name: &str) -> Option<Self> {
        GateKind::ALL.into_iter().find(|k| k.qasm_name() == name)
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            GateKind::Rx => "Rx",
            GateKind::Ry => "Ry",
            GateKind::Rz => "Rz",
            GateKind::Cx => "CX",
            GateKind::H => "H",
            GateKind::X => "X",
            GateKind::Y => "Y",
            GateKind::Z => "Z",
            GateKind::S => "S",
            GateKind::Sdg => "Sdg",
            GateKind::T => "T",
            GateKind::Tdg => "Tdg",
            GateKind::Cz => "CZ",
            GateKind::Swap => "SWAP",
        };
        f.write_str(name)
    }
}

/// Reduces an angle into `[0, 2π)` and quantizes it to the 16-bit grid.
pub fn angle_word(theta: f64) -> u16 {
    let reduced = theta.rem_euclid(TAU);
    let step = (reduced / TAU * f64::from(ANGLE_STEPS)).round() as u64;
    (step % u64::from(ANGLE_STEPS)) as u16
}

/// Radian value of a grid word.
pub fn word_angle(word: u16) -> f64 {
    f64::from(word) * TAU / f64::from(ANGLE_STEPS)
}

/// One gate applied to logical qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct Instruction {
    kind: GateKind,
    params: Vec<f64>,
    operands: Vec<usize>,
}

impl Instruction {
    pub fn new(
        kind: GateKind,
        params: Vec<f64>,
        operands: Vec<usize>,
    ) -> Result<Self, CircuitError> {
        if operands.len() != kind.arity() {
            return Err(CircuitError::Arity {
                kind,
                expected: kind.arity(),
                found: operands.len(),
            });
        }
        if params.len() != kind.param_count() {
            return Err(CircuitError::ParamCount {
                kind,
                expected: kind.param_count(),
                found: params.len(),
            });
        }
        if let Some(&bad) = params.iter().find(|p| !p.is_finite()) {
            return Err(CircuitError::NonFiniteAngle(bad));
        }
        if operands.len() == 2 && operands[0] == operands[1] {
            return Err(CircuitError::DuplicateOperand {
                kind,
                qubit: operands[0],
            });
        }
        Ok(Instruction {
            kind,
            params,
            operands,
        })
    }

    pub fn rx(theta: f64, qubit: usize) -> Self {
        Self::rotation(GateKind::Rx, theta, qubit)
    }

    pub fn ry(theta: f64, qubit: usize) -> Self {
        Self::rotation(GateKind::Ry, theta, qubit)
    }

    pub fn rz(theta: f64, qubit: usize) -> Self {
        Self::rotation(GateKind::Rz, theta, qubit)
    }

    pub fn cx(control: usize, target: usize) -> Self {
        Self::new(GateKind::Cx, Vec::new(), vec![control, target]).expect("cx operands must differ")
    }

    /// Parameterless gate of any arity.
    pub fn gate(kind: GateKind, operands: &[usize]) -> Self {
        Self::new(kind, Vec::new(), operands.to_vec()).expect("invalid fixed gate")
    }

    fn rotation(kind: GateKind, theta: f64, qubit: usize) -> Self {
        Self::new(kind, vec![theta], vec![qubit]).expect("invalid rotation")
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn operands(&self) -> &[usize] {
        &self.operands
    }

    /// Parameters on the canonical 16-bit grid.
    pub fn param_words(&self) -> impl Iterator<Item = u16> + '_ {
        self.params.iter().map(|&p| angle_word(p))
    }

    pub fn shares_qubit(&self, other: &Instruction) -> bool {
        self.operands.iter().any(|q| other.operands.contains(q))
    }
}

impl fmt::Display for Instruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind)?;
        if !self.params.is_empty() {
            let params: Vec<String> = self.params.iter().map(|p| format!("{p}")).collect();
            write!(f, "({})", params.join(","))?;
        }
        let ops: Vec<String> = self.operands.iter().map(|q| format!("q{q}")).collect();
        write!(f, " {}", ops.join(","))
    }
}

/// True iff both instructions perform the same operation with the same
/// canonicalized parameters. Operands are not compared.
pub fn params_equal(a: &Instruction, b: &Instruction) -> bool {
    a.kind == b.kind && a.param_words().eq(b.param_words())
}

/// An ordered list of logical instructions over `num_qubits` qubits.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Circuit {
    pub(crate) num_qubits: usize,
    pub(crate) instructions: Vec<Instruction>,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Self {
        Circuit {
            num_qubits,
            instructions: Vec::new(),
        }
    }

    pub fn from_instructions(
        num_qubits: usize,
        instructions: impl IntoIterator<Item = Instruction>,
    ) -> Result<Self, CircuitError> {
        let mut circuit = Circuit::new(num_qubits);
        for instr in instructions {
            circuit.push(instr)?;
        }
        Ok(circuit)
    }

    pub fn push(&mut self, instr: Instruction) -> Result<(), CircuitError> {
        if let Some(&qubit) = instr.operands.iter().find(|&&q| q >= self.num_qubits) {
            return Err(CircuitError::OperandOutOfRange {
                qubit,
                num_qubits: self.num_qubits,
            });
        }
        self.instructions.push(instr);
        Ok(())
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn instructions(&self) -> &[Instruction] {
        &self.instructions
    }

    pub fn len(&self) -> usize {
        self.instructions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instructions.is_empty()
    }

    pub fn is_basis(&self) -> bool {
        self.instructions.iter().all(|i| i.kind.is_basis())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn params_equal_examples() {
        assert!(params_equal(
            &Instruction::rx(0.5, 0),
            &Instruction::rx(0.5, 1)
        ));
        assert!(!params_equal(
            &Instruction::rx(0.5, 0),
            &Instruction::ry(0.5, 1)
        ));
        assert!(params_equal(
            &Instruction::rx(0.5, 0),
            &Instruction::rx(0.5 + TAU, 1)
        ));
    }

    #[test]
    fn angle_grid_wraps() {
        assert_eq!(angle_word(0.0), 0);
        assert_eq!(angle_word(TAU), 0);
        assert_eq!(angle_word(-1e-12), 0);
        assert_eq!(angle_word(PI), 1 << 15);
        assert_eq!(angle_word(-PI / 2.0), 3 << 14);
        assert_eq!(word_angle(1 << 14), PI / 2.0);
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(
            Instruction::new(GateKind::Cx, vec![], vec![1, 1]),
            Err(CircuitError::DuplicateOperand { .. })
        ));
        assert!(matches!(
            Instruction::new(GateKind::Rx, vec![], vec![0]),
            Err(CircuitError::ParamCount { .. })
        ));
        assert!(matches!(
            Instruction::new(GateKind::H, vec![], vec![0, 1]),
            Err(CircuitError::Arity { .. })
        ));
        assert!(matches!(
            Instruction::new(GateKind::Rz, vec![f64::NAN], vec![0]),
            Err(CircuitError::NonFiniteAngle(_))
        ));
        let mut c = Circuit::new(2);
        assert!(matches!(
            c.push(Instruction::cx(0, 2)),
            Err(CircuitError::OperandOutOfRange { qubit: 2, .. })
        ));
    }
}
