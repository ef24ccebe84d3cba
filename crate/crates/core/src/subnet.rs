//! Splits parallel-candidate runs into groups one instruction can address.

use std::collections::BTreeSet;

use crate::decompose::{PhysicalInstruction, PhysicalProgram, SeqTag};
use crate::error::GroupError;
use crate::hardware::{AddressingMode, EncodingScheme};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParallelGroup {
    pub id: usize,
    pub members: Vec<usize>,
    pub subnets: BTreeSet<usize>,
    pub offsets: BTreeSet<usize>,
}

/// Node set with its subnet and offset projections.
#[derive(Default, Clone)]
struct Footprint {
    nodes: BTreeSet<usize>,
    subnets: BTreeSet<usize>,
    offsets: BTreeSet<usize>,
}

impl Footprint {
    /// Adds `instr`; false when it reuses a node.
    fn add(&mut self, instr: &PhysicalInstruction, mode: &AddressingMode) -> bool {
        for &node in &instr.targets {
            if !self.nodes.insert(node) {
                return false;
            }
            if let Ok(s) = mode.subnet_of_node(node) {
                self.subnets.insert(s);
            }
            if let Ok(o) = mode.nc_offset_of_node(node) {
                self.offsets.insert(o);
            }
        }
        true
    }

    /// Whether one instruction under `mode` can address exactly these nodes.
    fn addressable(&self, mode: &AddressingMode) -> Result<(), String> {
        if self.nodes.len() > mode.rho() {
            return Err(format!(
                "{} nodes exceed rho = {}",
                self.nodes.len(),
                mode.rho()
            ));
        }
        match mode.scheme() {
            EncodingScheme::Sisd if self.nodes.len() > 1 => {
                Err("SISD addresses a single node".into())
            }
            EncodingScheme::SubIdNcBit if self.subnets.len() > 1 => {
                Err(format!("nodes span subnets {:?}", self.subnets))
            }
            EncodingScheme::SubBitNcId if self.offsets.len() > 1 => {
                Err(format!("nodes use offsets {:?}", self.offsets))
            }
            EncodingScheme::SubBitNcBit
                if self.nodes.len() != self.subnets.len() * self.offsets.len() =>
            {
                Err("nodes are not a full subnet x offset product".into())
            }
            _ => Ok(()),
        }
    }
}

/// Length of the longest legal prefix of `run` (at least one).
fn longest_legal_prefix(run: &[PhysicalInstruction], mode: &AddressingMode) -> usize {
    let mut fp = Footprint::default();
    let mut best = 1;
    let remaining_nodes: usize = run.iter().map(|i| i.targets.len()).sum();
    let mut used = 0;
    for (len, instr) in run.iter().enumerate() {
        if !fp.add(instr, mode) || fp.nodes.len() > mode.rho() {
            break;
        }
        used += instr.targets.len();
        if len > 0 && fp.addressable(mode).is_ok() {
            best = len + 1;
        }
        let product = fp.subnets.len() * fp.offsets.len();
        if product > fp.nodes.len() + (remaining_nodes - used) {
            break;
        }
        if matches!(
            mode.scheme(),
            EncodingScheme::SubIdNcBit | EncodingScheme::SubBitNcId | EncodingScheme::Sisd
        ) && fp.addressable(mode).is_err()
        {
            break;
        }
    }
    best
}

/// Greedy grouping of every parallel-candidate run. Groups of one are left
/// ungrouped and their ParallelCandidate tag becomes Pipelined.
pub fn mark_groups(program: &PhysicalProgram, mode: &AddressingMode) -> PhysicalProgram {
    let mut out = program.clone();
    let instrs = &mut out.instructions;
    for instr in instrs.iter_mut() {
        instr.group = None;
    }
    let mut next_id = 0;
    let mut start = 0;
    while start < instrs.len() {
        let mut end = start + 1;
        while end < instrs.len() && instrs[end].tag == SeqTag::ParallelCandidate {
            end += 1;
        }
        let mut pos = start;
        while pos < end {
            let len = longest_legal_prefix(&instrs[pos..end], mode);
            if len >= 2 {
                for instr in &mut instrs[pos..pos + len] {
                    instr.group = Some(next_id);
                }
                next_id += 1;
            } else if instrs[pos].tag == SeqTag::ParallelCandidate {
                instrs[pos].tag = SeqTag::Pipelined;
            }
            pos += len;
        }
        start = end;
    }
    out
}

/// Groups present in the program, in order of first member.
pub fn collect_groups(program: &PhysicalProgram, mode: &AddressingMode) -> Vec<ParallelGroup> {
    let mut groups: Vec<ParallelGroup> = Vec::new();
    for (idx, instr) in program.instructions.iter().enumerate() {
        let Some(id) = instr.group else { continue };
        if groups.last().map(|g| g.id) != Some(id) {
            groups.push(ParallelGroup {
                id,
                members: Vec::new(),
                subnets: BTreeSet::new(),
                offsets: BTreeSet::new(),
            });
        }
        let g = groups.last_mut().expect("pushed above");
        g.members.push(idx);
        for &node in &instr.targets {
            if let Ok(s) = mode.subnet_of_node(node) {
                g.subnets.insert(s);
            }
            if let Ok(o) = mode.nc_offset_of_node(node) {
                g.offsets.insert(o);
            }
        }
    }
    groups
}

/// Re-derives every group invariant from the program and the mode alone.
pub fn validate_groups(program: &PhysicalProgram, mode: &AddressingMode) -> Result<(), GroupError> {
    let instrs = &program.instructions;
    let mut seen = BTreeSet::new();
    let mut idx = 0;
    while idx < instrs.len() {
        let Some(id) = instrs[idx].group else {
            idx += 1;
            continue;
        };
        let illegal = |reason: String| GroupError::Illegal { group: id, reason };
        if !seen.insert(id) {
            return Err(illegal("members are not contiguous".into()));
        }
        let mut end = idx + 1;
        while end < instrs.len() && instrs[end].group == Some(id) {
            end += 1;
        }
        let members = &instrs[idx..end];
        if members.len() < 2 {
            return Err(illegal("group has a single member".into()));
        }
        if let Some(m) = members.iter().find(|m| !m.same_operation(&members[0])) {
            return Err(illegal(format!(
                "{} differs from {}",
                m.opcode, members[0].opcode
            )));
        }
        let mut fp = Footprint::default();
        for m in members {
            if !fp.add(m, mode) {
                return Err(illegal("members share a node".into()));
            }
            if let Some(&node) = m.targets.iter().find(|&&n| n >= mode.node_count()) {
                return Err(illegal(format!("node {node} is outside the network")));
            }
        }
        fp.addressable(mode).map_err(illegal)?;
        idx = end;
    }
    Ok(())
}

/// Largest group size in instructions; 1 when nothing is grouped.
pub fn max_group_size(program: &PhysicalProgram) -> usize {
    let mut best = 1;
    let mut run = 0;
    let mut current = None;
    for instr in &program.instructions {
        if instr.group.is_some() && instr.group == current {
            run += 1;
        } else {
            run = 1;
            current = instr.group;
        }
        if current.is_some() {
            best = best.max(run);
        }
    }
    best
}
