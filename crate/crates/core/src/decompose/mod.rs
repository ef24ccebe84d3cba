//! Logical-to-physical decomposition.

mod optimized;
mod template;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::circuit::{angle_word, params_equal, GateKind, Instruction};
use crate::error::DecomposeError;
use crate::hardware::QubitMap;
use crate::schedule::LayeredCircuit;

pub use optimized::{find_parallel_sequence, optimized_decompose, subnet_frequency_order};
pub use template::{
    physical_cx_template, CxTemplate, Role, TemplateRow, ANCILLA_SLOT, DEFAULT_TEMPLATE_VERSION,
};

/// Grid word for a quarter turn; the phase word that turns an X drive into Y.
pub const Y_AXIS_PHASE: u16 = 1 << 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PhysicalOpcode {
    PRx,
    PRy,
    PRz,
    CRx,
    Entangle,
    Measure,
    CondPRx,
    CondPRy,
    CondPRz,
}

impl PhysicalOpcode {
    pub const ALL: [PhysicalOpcode; 9] = [
        PhysicalOpcode::PRx,
        PhysicalOpcode::PRy,
        PhysicalOpcode::PRz,
        PhysicalOpcode::CRx,
        PhysicalOpcode::Entangle,
        PhysicalOpcode::Measure,
        PhysicalOpcode::CondPRx,
        PhysicalOpcode::CondPRy,
        PhysicalOpcode::CondPRz,
    ];

    /// Unconditioned counterpart; timing and word layout follow this opcode.
    pub fn base(self) -> PhysicalOpcode {
        match self {
            PhysicalOpcode::CondPRx => PhysicalOpcode::PRx,
            PhysicalOpcode::CondPRy => PhysicalOpcode::PRy,
            PhysicalOpcode::CondPRz => PhysicalOpcode::PRz,
            other => other,
        }
    }

    pub fn is_conditioned(self) -> bool {
        self != self.base()
    }

    /// Number of 16-bit parameter words carried by the instruction.
    pub fn param_count(self) -> usize {
        match self.base() {
            PhysicalOpcode::PRx | PhysicalOpcode::PRy => 3,
            PhysicalOpcode::PRz => 1,
            PhysicalOpcode::CRx => 2,
            PhysicalOpcode::Entangle => 1,
            PhysicalOpcode::Measure => 0,
            _ => unreachable!("base opcodes are unconditioned"),
        }
    }

    pub fn target_count(self) -> usize {
        if self == PhysicalOpcode::Entangle {
            2
        } else {
            1
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PhysicalOpcode::PRx => "PRx",
            PhysicalOpcode::PRy => "PRy",
            PhysicalOpcode::PRz => "PRz",
            PhysicalOpcode::CRx => "CRx",
            PhysicalOpcode::Entangle => "Entangle",
            PhysicalOpcode::Measure => "Measure",
            PhysicalOpcode::CondPRx => "CondPRx",
            PhysicalOpcode::CondPRy => "CondPRy",
            PhysicalOpcode::CondPRz => "CondPRz",
        }
    }
}

impl fmt::Display for PhysicalOpcode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PhysicalOpcode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PhysicalOpcode::ALL
            .into_iter()
            .find(|op| op.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown physical opcode `{s}`"))
    }
}

/// Relation of an instruction to its predecessor in the stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SeqTag {
    Serial,
    Pipelined,
    ParallelCandidate,
}

impl SeqTag {
    pub fn name(self) -> &'static str {
        match self {
            SeqTag::Serial => "serial",
            SeqTag::Pipelined => "pipelined",
            SeqTag::ParallelCandidate => "parallel",
        }
    }
}

impl fmt::Display for SeqTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PhysicalInstruction {
    pub opcode: PhysicalOpcode,
    pub params: Vec<u16>,
    pub targets: Vec<usize>,
    /// Index of the Measure whose outcome gates this correction.
    pub condition: Option<usize>,
    pub tag: SeqTag,
    pub group: Option<usize>,
}

impl PhysicalInstruction {
    pub fn new(opcode: PhysicalOpcode, params: Vec<u16>, targets: Vec<usize>) -> Self {
        debug_assert_eq!(params.len(), opcode.param_count());
        debug_assert_eq!(targets.len(), opcode.target_count());
        PhysicalInstruction {
            opcode,
            params,
            targets,
            condition: None,
            tag: SeqTag::Serial,
            group: None,
        }
    }

    pub fn same_operation(&self, other: &PhysicalInstruction) -> bool {
        self.opcode == other.opcode && self.params == other.params
    }

    pub fn shares_node(&self, other: &PhysicalInstruction) -> bool {
        self.targets.iter().any(|t| other.targets.contains(t))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Parallel,
    Pipelined,
    Serial,
}

/// Anything that can be compared for same-operation and resource overlap.
pub trait Operation {
    fn same_operation(&self, other: &Self) -> bool;
    fn overlaps(&self, other: &Self) -> bool;
}

impl Operation for Instruction {
    fn same_operation(&self, other: &Self) -> bool {
        params_equal(self, other)
    }

    fn overlaps(&self, other: &Self) -> bool {
        self.shares_qubit(other)
    }
}

impl Operation for PhysicalInstruction {
    fn same_operation(&self, other: &Self) -> bool {
        PhysicalInstruction::same_operation(self, other)
    }

    fn overlaps(&self, other: &Self) -> bool {
        self.shares_node(other)
    }
}

pub fn relation<T: Operation>(a: &T, b: &T) -> Relation {
    if a.overlaps(b) {
        Relation::Serial
    } else if a.same_operation(b) {
        Relation::Parallel
    } else {
        Relation::Pipelined
    }
}

/// Tags every instruction against the block opened by the most recent Serial
/// tag: Serial when it touches a node used in the block or waits on a Measure
/// inside it, ParallelCandidate when it repeats its predecessor's operation,
/// Pipelined otherwise.
pub fn assign_tags(instructions: &mut [PhysicalInstruction]) {
    let Some(max_node) = instructions.iter().flat_map(|i| i.targets.iter()).max() else {
        return;
    };
    let mut stamp = vec![usize::MAX; max_node + 1];
    let mut block_start = 0;
    for i in 0..instructions.len() {
        let waits_in_block = instructions[i]
            .condition
            .is_some_and(|c| c >= block_start && c < i);
        let touches_block = instructions[i]
            .targets
            .iter()
            .any(|&t| stamp[t] == block_start);
        let tag = if i == 0 || waits_in_block || touches_block {
            block_start = i;
            SeqTag::Serial
        } else if instructions[i].same_operation(&instructions[i - 1]) {
            SeqTag::ParallelCandidate
        } else {
            SeqTag::Pipelined
        };
        instructions[i].tag = tag;
        for &t in &instructions[i].targets {
            stamp[t] = block_start;
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhysicalProgram {
    pub instructions: Vec<PhysicalInstruction>,
    pub map: QubitMap,
}

impl PhysicalProgram {
    pub fn len(&self) -> usize {
        self.instructions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instructions.is_empty()
    }

    pub fn count(&self, opcode: PhysicalOpcode) -> usize {
        self.instructions
            .iter()
            .filter(|i| i.opcode == opcode)
            .count()
    }

    /// Checks word counts, target ranges, condition references and that every
    /// ParallelCandidate repeats its predecessor on disjoint nodes.
    pub fn validate(&self) -> Result<(), String> {
        let nodes = self.map.node_count();
        for (idx, instr) in self.instructions.iter().enumerate() {
            if instr.params.len() != instr.opcode.param_count() {
                return Err(format!(
                    "{idx}: {} carries {} words",
                    instr.opcode,
                    instr.params.len()
                ));
            }
            if instr.targets.len() != instr.opcode.target_count() {
                return Err(format!(
                    "{idx}: {} has {} targets",
                    instr.opcode,
                    instr.targets.len()
                ));
            }
            if let Some(&t) = instr.targets.iter().find(|&&t| t >= nodes) {
                return Err(format!("{idx}: node {t} out of range ({nodes} nodes)"));
            }
            match (instr.opcode.is_conditioned(), instr.condition) {
                (true, Some(c))
                    if c < idx && self.instructions[c].opcode == PhysicalOpcode::Measure => {}
                (false, None) => {}
                _ => return Err(format!("{idx}: bad condition on {}", instr.opcode)),
            }
            if instr.tag == SeqTag::ParallelCandidate {
                let prev = idx.checked_sub(1).map(|p| &self.instructions[p]);
                if !prev.is_some_and(|p| p.same_operation(instr) && !p.shares_node(instr)) {
                    return Err(format!(
                        "{idx}: parallel candidate does not repeat its predecessor"
                    ));
                }
            }
        }
        Ok(())
    }

    /// Multiset view used to compare decompositions irrespective of order.
    pub fn operation_multiset(&self) -> Vec<(PhysicalOpcode, Vec<u16>, Vec<usize>)> {
        let mut ops: Vec<_> = self
            .instructions
            .iter()
            .map(|i| (i.opcode, i.params.clone(), i.targets.clone()))
            .collect();
        ops.sort();
        ops
    }

    /// One line per instruction: `idx | opcode | params | targets | tag | group`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (idx, instr) in self.instructions.iter().enumerate() {
            let params: Vec<String> = instr.params.iter().map(u16::to_string).collect();
            let targets: Vec<String> = instr.targets.iter().map(usize::to_string).collect();
            let mut opcode = instr.opcode.to_string();
            if let Some(c) = instr.condition {
                opcode.push_str(&format!("?{c}"));
            }
            let group = instr
                .group
                .map_or_else(|| "-".to_string(), |g| g.to_string());
            out.push_str(&format!(
                "{idx} | {opcode} | {} | {} | {} | {group}\n",
                params.join(","),
                targets.join(","),
                instr.tag
            ));
        }
        out
    }
}

/// The two physical rotations realizing a logical rotation: Rx/Ry on data
/// qubits 0 and 1, Rz on data qubits 0 and 2.
pub(crate) fn rotation_ops(instr: &Instruction, map: &QubitMap) -> [PhysicalInstruction; 2] {
    let logical = instr.operands()[0];
    let angle = angle_word(instr.params()[0]);
    let (opcode, second) = match instr.kind() {
        GateKind::Rx => (PhysicalOpcode::PRx, 1),
        GateKind::Ry => (PhysicalOpcode::PRy, 1),
        GateKind::Rz => (PhysicalOpcode::PRz, 2),
        other => unreachable!("{other} is not a rotation"),
    };
    [0, second].map(|index| {
        let data = map.data_qubit(logical, index);
        let node = data / map.dist().data_per_node();
        let slot = map.slot_of_data(data) as u16;
        let params = match opcode {
            PhysicalOpcode::PRx => vec![angle, 0, slot],
            PhysicalOpcode::PRy => vec![angle, Y_AXIS_PHASE, slot],
            _ => vec![angle],
        };
        PhysicalInstruction::new(opcode, params, vec![node])
    })
}

/// Node pair and data slot of the `k`-th transversal CX inside a logical CX.
pub(crate) fn intermediate_cx(
    instr: &Instruction,
    map: &QubitMap,
    k: usize,
) -> (usize, usize, u16) {
    let per = map.dist().data_per_node();
    let ctrl = map.data_qubit(instr.operands()[0], k);
    let tgt = map.data_qubit(instr.operands()[1], k);
    (ctrl / per, tgt / per, map.slot_of_data(ctrl) as u16)
}

/// Splits the four intermediates into node-disjoint sets, first fit.
pub(crate) fn disjoint_intermediate_sets(instr: &Instruction, map: &QubitMap) -> Vec<Vec<usize>> {
    let mut sets: Vec<(Vec<usize>, BTreeSet<usize>)> = Vec::new();
    for k in 0..crate::hardware::DATA_PER_LOGICAL {
        let (c, t, _) = intermediate_cx(instr, map, k);
        match sets
            .iter_mut()
            .find(|(_, nodes)| !nodes.contains(&c) && !nodes.contains(&t))
        {
            Some((members, nodes)) => {
                members.push(k);
                nodes.extend([c, t]);
            }
            None => sets.push((vec![k], BTreeSet::from([c, t]))),
        }
    }
    sets.into_iter().map(|(members, _)| members).collect()
}

/// Template rows of one intermediate CX awaiting emission. Conditions in
/// `rows` are row indices until the row is emitted.
pub(crate) struct PendingCx {
    rows: Vec<PhysicalInstruction>,
    positions: Vec<Option<usize>>,
}

impl PendingCx {
    pub(crate) fn new(
        instr: &Instruction,
        map: &QubitMap,
        k: usize,
        template: &CxTemplate,
    ) -> Result<Self, DecomposeError> {
        let (c, t, slot) = intermediate_cx(instr, map, k);
        let rows = template.instantiate(c, t, slot)?;
        let positions = vec![None; rows.len()];
        Ok(PendingCx { rows, positions })
    }

    pub(crate) fn len(&self) -> usize {
        self.rows.len()
    }

    pub(crate) fn emit(&mut self, row: usize, out: &mut Vec<PhysicalInstruction>) {
        let mut instr = self.rows[row].clone();
        instr.condition = instr
            .condition
            .map(|r| self.positions[r].expect("condition row is emitted first"));
        self.positions[row] = Some(out.len());
        out.push(instr);
    }
}

pub(crate) fn check_input(lc: &LayeredCircuit, map: &QubitMap) -> Result<(), DecomposeError> {
    if lc.num_qubits() > map.num_logical() {
        return Err(DecomposeError::MapTooSmall {
            circuit: lc.num_qubits(),
            map: map.num_logical(),
        });
    }
    for (index, instr) in lc.instructions().enumerate() {
        if !instr.kind().is_basis() {
            return Err(DecomposeError::NotBasis {
                index,
                kind: instr.kind(),
            });
        }
    }
    Ok(())
}

/// Table-driven decomposition: every logical instruction expands in isolation,
/// CX intermediates one after another.
pub fn naive_decompose(
    lc: &LayeredCircuit,
    map: &QubitMap,
    template: &CxTemplate,
) -> Result<PhysicalProgram, DecomposeError> {
    check_input(lc, map)?;
    let mut out = Vec::new();
    for instr in lc.instructions() {
        if instr.kind() == GateKind::Cx {
            for k in 0..crate::hardware::DATA_PER_LOGICAL {
                let mut pending = PendingCx::new(instr, map, k, template)?;
                for row in 0..pending.len() {
                    pending.emit(row, &mut out);
                }
            }
        } else {
            out.extend(rotation_ops(instr, map));
        }
    }
    assign_tags(&mut out);
    Ok(PhysicalProgram {
        instructions: out,
        map: *map,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Circuit;
    use crate::hardware::{map_logical, DistributionMode};

    fn naive(instrs: Vec<Instruction>, n: usize, dist: DistributionMode) -> PhysicalProgram {
        let c = Circuit::from_instructions(n, instrs).unwrap();
        naive_decompose(
            &LayeredCircuit::unscheduled(&c),
            &map_logical(n, dist),
            &CxTemplate::default(),
        )
        .unwrap()
    }

    fn shape(p: &PhysicalProgram) -> Vec<(PhysicalOpcode, Vec<usize>, SeqTag)> {
        p.instructions
            .iter()
            .map(|i| (i.opcode, i.targets.clone(), i.tag))
            .collect()
    }

    #[test]
    fn relation_examples() {
        let (a, b) = (Instruction::rx(0.5, 0), Instruction::rx(0.5, 1));
        assert_eq!(relation(&a, &b), Relation::Parallel);
        assert_eq!(relation(&a, &Instruction::ry(0.5, 1)), Relation::Pipelined);
        assert_eq!(relation(&a, &Instruction::rx(0.7, 0)), Relation::Serial);
    }

    #[test]
    fn naive_rx_semi_is_serial_pair() {
        let p = naive(vec![Instruction::rx(0.4, 0)], 1, DistributionMode::Semi);
        assert_eq!(
            shape(&p),
            [
                (PhysicalOpcode::PRx, vec![0], SeqTag::Serial),
                (PhysicalOpcode::PRx, vec![0], SeqTag::Serial)
            ]
        );
        assert_eq!(p.instructions[0].params[2], 0);
        assert_eq!(p.instructions[1].params[2], 1);
    }

    #[test]
    fn naive_rz_is_parallel_in_both_modes() {
        let p = naive(vec![Instruction::rz(0.4, 0)], 1, DistributionMode::Semi);
        assert_eq!(
            shape(&p),
            [
                (PhysicalOpcode::PRz, vec![0], SeqTag::Serial),
                (PhysicalOpcode::PRz, vec![1], SeqTag::ParallelCandidate)
            ]
        );
        let p = naive(vec![Instruction::rz(0.4, 0)], 1, DistributionMode::Fully);
        assert_eq!(p.instructions[1].tag, SeqTag::ParallelCandidate);
        assert_eq!(p.instructions[1].targets, [2]);
    }

    #[test]
    fn naive_rx_fully_is_parallel_pair() {
        let p = naive(vec![Instruction::rx(0.4, 0)], 1, DistributionMode::Fully);
        assert_eq!(
            shape(&p),
            [
                (PhysicalOpcode::PRx, vec![0], SeqTag::Serial),
                (PhysicalOpcode::PRx, vec![1], SeqTag::ParallelCandidate)
            ]
        );
    }

    #[test]
    fn naive_cx_semi_node_pattern() {
        let p = naive(vec![Instruction::cx(0, 1)], 2, DistributionMode::Semi);
        assert_eq!(p.len(), 36);
        assert_eq!(p.count(PhysicalOpcode::Entangle), 4);
        let entangles: Vec<(Vec<usize>, SeqTag)> = p
            .instructions
            .iter()
            .filter(|i| i.opcode == PhysicalOpcode::Entangle)
            .map(|i| (i.targets.clone(), i.tag))
            .collect();
        assert_eq!(
            entangles,
            [
                (vec![0, 2], SeqTag::Serial),
                (vec![0, 2], SeqTag::Serial),
                (vec![1, 3], SeqTag::Pipelined),
                (vec![1, 3], SeqTag::Serial),
            ]
        );
        p.validate().unwrap();
    }

    #[test]
    fn tagger_respects_conditions() {
        let mut instrs = vec![
            PhysicalInstruction::new(PhysicalOpcode::Measure, vec![], vec![0]),
            PhysicalInstruction::new(PhysicalOpcode::CondPRz, vec![5], vec![1]),
        ];
        instrs[1].condition = Some(0);
        assign_tags(&mut instrs);
        assert_eq!(instrs[1].tag, SeqTag::Serial);
    }

    #[test]
    fn rejects_non_basis_and_small_maps() {
        let c = Circuit::from_instructions(1, [Instruction::gate(GateKind::H, &[0])]).unwrap();
        let lc = LayeredCircuit::unscheduled(&c);
        let map = map_logical(1, DistributionMode::Semi);
        assert!(matches!(
            naive_decompose(&lc, &map, &CxTemplate::default()),
            Err(DecomposeError::NotBasis { index: 0, .. })
        ));
        let c = Circuit::from_instructions(2, [Instruction::rx(0.1, 1)]).unwrap();
        assert!(matches!(
            naive_decompose(
                &LayeredCircuit::unscheduled(&c),
                &map,
                &CxTemplate::default()
            ),
            Err(DecomposeError::MapTooSmall { .. })
        ));
    }

    #[test]
    fn opcode_metadata() {
        assert_eq!(PhysicalOpcode::CondPRx.param_count(), 3);
        assert_eq!(PhysicalOpcode::Entangle.target_count(), 2);
        assert_eq!(
            "condprz".parse::<PhysicalOpcode>(),
            Ok(PhysicalOpcode::CondPRz)
        );
    }
}
