use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use super::{Circuit, GateKind, Instruction};

fn hadamard(q: usize, out: &mut Vec<Instruction>) {
    out.push(Instruction::rz(FRAC_PI_2, q));
    out.push(Instruction::rx(FRAC_PI_2, q));
    out.push(Instruction::rz(FRAC_PI_2, q));
}

/// Rewrites one instruction into the {Rx, Ry, Rz, CX} basis, appending to `out`.
pub fn lower_instruction(instr: &Instruction, out: &mut Vec<Instruction>) {
    let ops = instr.operands();
    match instr.kind() {
        GateKind::Rx | GateKind::Ry | GateKind::Rz | GateKind::Cx => out.push(instr.clone()),
        GateKind::X => out.push(Instruction::rx(PI, ops[0])),
        GateKind::Y => out.push(Instruction::ry(PI, ops[0])),
        GateKind::Z => out.push(Instruction::rz(PI, ops[0])),
        GateKind::S => out.push(Instruction::rz(FRAC_PI_2, ops[0])),
        GateKind::Sdg => out.push(Instruction::rz(-FRAC_PI_2, ops[0])),
        GateKind::T => out.push(Instruction::rz(FRAC_PI_4, ops[0])),
        GateKind::Tdg => out.push(Instruction::rz(-FRAC_PI_4, ops[0])),
        GateKind::H => hadamard(ops[0], out),
        GateKind::Cz => {
            hadamard(ops[1], out);
            out.push(Instruction::cx(ops[0], ops[1]));
            hadamard(ops[1], out);
        }
        GateKind::Swap => {
            out.push(Instruction::cx(ops[0], ops[1]));
            out.push(Instruction::cx(ops[1], ops[0]));
            out.push(Instruction::cx(ops[0], ops[1]));
        }
    }
}

/// Lowers every instruction through the fixed rewrite table. Basis gates pass
/// through unchanged.
pub fn transpile_to_basis(circuit: &Circuit) -> Circuit {
    let mut out = Vec::with_capacity(circuit.len() * 2);
    for instr in circuit.instructions() {
        lower_instruction(instr, &mut out);
    }
    Circuit {
        num_qubits: circuit.num_qubits(),
        instructions: out,
    }
}
