//! ASAP dependency layering of logical circuits.

use std::cmp::Ordering;
use std::fmt::Write as _;

use crate::circuit::{Circuit, Instruction};

/// True iff the two instructions touch a common qubit.
pub fn has_dependency(a: &Instruction, b: &Instruction) -> bool {
    a.shares_qubit(b)
}

/// Sort order inside a layer: opcode, then grid parameters, then lowest operand.
pub fn layer_order(a: &Instruction, b: &Instruction) -> Ordering {
    a.kind()
        .cmp(&b.kind())
        .then_with(|| a.param_words().cmp(b.param_words()))
        .then_with(|| a.operands().iter().min().cmp(&b.operands().iter().min()))
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct LayeredCircuit {
    num_qubits: usize,
    layers: Vec<Vec<Instruction>>,
}

impl LayeredCircuit {
    pub fn from_layers(num_qubits: usize, layers: Vec<Vec<Instruction>>) -> Self {
        LayeredCircuit { num_qubits, layers }
    }

    /// One instruction per layer, in program order.
    pub fn unscheduled(circuit: &Circuit) -> Self {
        LayeredCircuit {
            num_qubits: circuit.num_qubits(),
            layers: circuit
                .instructions()
                .iter()
                .map(|i| vec![i.clone()])
                .collect(),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn layers(&self) -> &[Vec<Instruction>] {
        &self.layers
    }

    pub fn len(&self) -> usize {
        self.layers.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.layers.iter().all(Vec::is_empty)
    }

    pub fn instructions(&self) -> impl Iterator<Item = &Instruction> {
        self.layers.iter().flatten()
    }

    pub fn flatten(&self) -> Circuit {
        Circuit {
            num_qubits: self.num_qubits,
            instructions: self.instructions().cloned().collect(),
        }
    }

    /// One layer per line.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (idx, layer) in self.layers.iter().enumerate() {
            let items: Vec<String> = layer.iter().map(ToString::to_string).collect();
            let _ = writeln!(out, "{idx}: {}", items.join("; "));
        }
        out
    }
}

/// Places each instruction one layer after the latest layer touching any of its
/// qubits, then sorts every layer with [`layer_order`].
pub fn schedule(circuit: &Circuit) -> LayeredCircuit {
    let mut next_free = vec![0usize; circuit.num_qubits()];
    let mut layers: Vec<Vec<Instruction>> = Vec::new();
    for instr in circuit.instructions() {
        let layer = instr
            .operands()
            .iter()
            .map(|&q| next_free[q])
            .max()
            .unwrap_or(0);
        for &q in instr.operands() {
            next_free[q] = layer + 1;
        }
        if layer == layers.len() {
            layers.push(Vec::new());
        }
        layers[layer].push(instr.clone());
    }
    for layer in &mut layers {
        layer.sort_by(layer_order);
    }
    LayeredCircuit {
        num_qubits: circuit.num_qubits(),
        layers,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dependency_examples() {
        assert!(has_dependency(
            &Instruction::rx(0.1, 0),
            &Instruction::ry(0.2, 0)
        ));
        assert!(!has_dependency(
            &Instruction::cx(0, 1),
            &Instruction::rx(0.1, 2)
        ));
        assert!(has_dependency(
            &Instruction::cx(0, 1),
            &Instruction::cx(1, 2)
        ));
    }

    #[test]
    fn asap_layers() {
        let c = Circuit::from_instructions(
            3,
            [
                Instruction::rx(0.3, 0),
                Instruction::rx(0.3, 1),
                Instruction::cx(0, 1),
                Instruction::rx(0.3, 2),
            ],
        )
        .unwrap();
        let lc = schedule(&c);
        assert_eq!(
            lc.layers(),
            &[
                vec![
                    Instruction::rx(0.3, 0),
                    Instruction::rx(0.3, 1),
                    Instruction::rx(0.3, 2)
                ],
                vec![Instruction::cx(0, 1)],
            ]
        );
        assert_eq!(lc.flatten().len(), 4);
    }

    #[test]
    fn chain_is_sequential() {
        let c = Circuit::from_instructions(
            4,
            [
                Instruction::cx(0, 1),
                Instruction::cx(1, 2),
                Instruction::cx(2, 3),
            ],
        )
        .unwrap();
        let lc = schedule(&c);
        assert_eq!(lc.layers().len(), 3);
        assert!(lc.layers().iter().all(|l| l.len() == 1));
    }

    #[test]
    fn layer_sorting_groups_equal_parameters() {
        let c = Circuit::from_instructions(
            4,
            [
                Instruction::rz(0.2, 3),
                Instruction::rx(0.5, 2),
                Instruction::rx(0.1, 1),
                Instruction::rx(0.5, 0),
            ],
        )
        .unwrap();
        let lc = schedule(&c);
        let layer = &lc.layers()[0];
        assert_eq!(
            layer,
            &[
                Instruction::rx(0.1, 1),
                Instruction::rx(0.5, 0),
                Instruction::rx(0.5, 2),
                Instruction::rz(0.2, 3),
            ]
        );
    }

    #[test]
    fn single_and_empty() {
        let c = Circuit::from_instructions(1, [Instruction::rz(1.0, 0)]).unwrap();
        assert_eq!(schedule(&c).layers().len(), 1);
        assert!(schedule(&Circuit::new(2)).layers().is_empty());
        let lc = LayeredCircuit::from_layers(
            2,
            vec![
                vec![Instruction::rx(0.1, 0), Instruction::rx(0.1, 1)],
                vec![Instruction::cx(0, 1)],
            ],
        );
        assert_eq!(lc.dump(), "0: Rx(0.1) q0; Rx(0.1) q1\n1: CX q0,q1\n");
    }
}
