//! Parallelism-aware decomposition of scheduled circuits.

use std::collections::HashMap;

use super::{
    assign_tags, check_input, disjoint_intermediate_sets, relation, rotation_ops, CxTemplate,
    PendingCx, PhysicalInstruction, PhysicalProgram, Relation,
};
use crate::circuit::{params_equal, GateKind, Instruction};
use crate::error::DecomposeError;
use crate::hardware::{AddressingMode, EncodingScheme, QubitMap};
use crate::schedule::LayeredCircuit;

/// End (exclusive) of the run starting at `start` whose members all perform
/// the same operation on pairwise distinct qubits.
pub fn find_parallel_sequence(instrs: &[Instruction], start: usize) -> usize {
    let mut used: Vec<usize> = instrs[start].operands().to_vec();
    let mut end = start + 1;
    while end < instrs.len() {
        let next = &instrs[end];
        if !params_equal(&instrs[start], next) || next.operands().iter().any(|q| used.contains(q)) {
            break;
        }
        used.extend_from_slice(next.operands());
        end += 1;
    }
    end
}

/// Stable reorder of a parallel sequence so gates on the most frequent subnet
/// come first; ties keep first-appearance order of the subnet.
pub fn subnet_frequency_order(
    seq: &[Instruction],
    map: &QubitMap,
    mode: &AddressingMode,
) -> Vec<Instruction> {
    let key = |instr: &Instruction| {
        let data = map.data_qubit(instr.operands()[0], 0);
        map.node_of_data(data)
            .ok()
            .and_then(|node| mode.subnet_of_node(node).ok())
            .unwrap_or(usize::MAX)
    };
    let mut counts: HashMap<usize, (usize, usize)> = HashMap::new();
    for (pos, instr) in seq.iter().enumerate() {
        counts.entry(key(instr)).or_insert((0, pos)).0 += 1;
    }
    let mut out = seq.to_vec();
    out.sort_by_key(|instr| {
        let (count, first) = counts[&key(instr)];
        (std::cmp::Reverse(count), first)
    });
    out
}

fn is_xy(kind: GateKind) -> bool {
    matches!(kind, GateKind::Rx | GateKind::Ry)
}

struct Builder<'a> {
    map: &'a QubitMap,
    template: &'a CxTemplate,
    out: Vec<PhysicalInstruction>,
}

impl Builder<'_> {
    fn pending(&self, cx: &Instruction) -> Result<Vec<PendingCx>, DecomposeError> {
        (0..crate::hardware::DATA_PER_LOGICAL)
            .map(|k| PendingCx::new(cx, self.map, k, self.template))
            .collect()
    }

    /// CX gates whose intermediates run set by set, each template row issued
    /// for every member of the set (and every gate) before the next row.
    /// `extra[s]` is emitted right after the mergeable row of set `s`.
    fn cx_sets(
        &mut self,
        gates: &[Instruction],
        mut extra: Vec<Vec<PhysicalInstruction>>,
    ) -> Result<(), DecomposeError> {
        let mut pending = Vec::with_capacity(gates.len());
        let mut sets = Vec::with_capacity(gates.len());
        for g in gates {
            pending.push(self.pending(g)?);
            sets.push(disjoint_intermediate_sets(g, self.map));
        }
        let set_count = sets.iter().map(Vec::len).max().unwrap_or(0);
        let rows = self.template.rows.len();
        let merge_row = self.template.first_mergeable_row();
        for s in 0..set_count {
            for row in 0..rows {
                for (g, gate_sets) in sets.iter().enumerate() {
                    for &k in gate_sets.get(s).into_iter().flatten() {
                        pending[g][k].emit(row, &mut self.out);
                    }
                }
                if merge_row == Some(row) && s < extra.len() {
                    self.out.append(&mut extra[s]);
                }
            }
        }
        for rest in extra {
            self.out.extend(rest);
        }
        Ok(())
    }

    fn basic(&mut self, instr: &Instruction) -> Result<(), DecomposeError> {
        if instr.kind() == GateKind::Cx {
            self.cx_sets(std::slice::from_ref(instr), Vec::new())
        } else {
            self.out.extend(rotation_ops(instr, self.map));
            Ok(())
        }
    }

    /// Phase-major emission: first physical op of every gate, then the second.
    fn rotation_phases(&mut self, seqs: &[&[Instruction]]) {
        let ops: Vec<Vec<[PhysicalInstruction; 2]>> = seqs
            .iter()
            .map(|seq| seq.iter().map(|i| rotation_ops(i, self.map)).collect())
            .collect();
        for phase in 0..2 {
            for seq_ops in &ops {
                self.out
                    .extend(seq_ops.iter().map(|pair| pair[phase].clone()));
            }
        }
    }

    fn parallel_sequence(&mut self, seq: &[Instruction]) -> Result<(), DecomposeError> {
        if seq[0].kind() == GateKind::Cx {
            self.cx_sets(seq, Vec::new())
        } else {
            self.rotation_phases(&[seq]);
            Ok(())
        }
    }

    fn cx_with_rotation(
        &mut self,
        cx: &Instruction,
        rot: &Instruction,
    ) -> Result<(), DecomposeError> {
        let extra = rotation_ops(rot, self.map)
            .into_iter()
            .map(|op| vec![op])
            .collect();
        self.cx_sets(std::slice::from_ref(cx), extra)
    }
}

fn disjoint(a: &[Instruction], b: &[Instruction]) -> bool {
    a.iter().all(|x| b.iter().all(|y| !x.shares_qubit(y)))
}

/// Chooses a decomposition strategy per position of the flattened schedule:
/// parallel runs of equal gates are expanded phase by phase (two adjacent
/// disjoint rotation runs are interleaved), a CX followed by an independent
/// Rx/Ry hosts that rotation inside its expansion, an Rx/Ry pair on
/// different qubits is interleaved, and everything else expands on its own.
/// Every CX splits its intermediates into node-disjoint sets.
pub fn optimized_decompose(
    lc: &LayeredCircuit,
    map: &QubitMap,
    mode: &AddressingMode,
    template: &CxTemplate,
) -> Result<PhysicalProgram, DecomposeError> {
    check_input(lc, map)?;
    let instrs: Vec<Instruction> = lc.instructions().cloned().collect();
    let by_subnet = mode.scheme() == EncodingScheme::SubBitNcBit;
    let order = |seq: &[Instruction]| {
        if by_subnet {
            subnet_frequency_order(seq, map, mode)
        } else {
            seq.to_vec()
        }
    };
    let mut b = Builder {
        map,
        template,
        out: Vec::new(),
    };
    let n = instrs.len();
    let mut i = 0;
    while i < n {
        let end = find_parallel_sequence(&instrs, i);
        if end - i >= 2 {
            let first = order(&instrs[i..end]);
            if end < n && instrs[i].kind().is_rotation() && instrs[end].kind().is_rotation() {
                let end2 = find_parallel_sequence(&instrs, end);
                if end2 - end >= 2 && disjoint(&instrs[i..end], &instrs[end..end2]) {
                    let second = order(&instrs[end..end2]);
                    b.rotation_phases(&[&first, &second]);
                    i = end2;
                    continue;
                }
            }
            b.parallel_sequence(&first)?;
            i = end;
            continue;
        }
        let cur = &instrs[i];
        if let Some(next) = instrs.get(i + 1) {
            if relation(cur, next) == Relation::Pipelined {
                if cur.kind() == GateKind::Cx && is_xy(next.kind()) {
                    b.cx_with_rotation(cur, next)?;
                    i += 2;
                    continue;
                }
                if is_xy(cur.kind()) && is_xy(next.kind()) {
                    let (a, c) = (rotation_ops(cur, map), rotation_ops(next, map));
                    let [a0, a1] = a;
                    let [c0, c1] = c;
                    b.out.extend([a0, c0, a1, c1]);
                    i += 2;
                    continue;
                }
            }
        }
        b.basic(cur)?;
        i += 1;
    }
    let mut out = b.out;
    assign_tags(&mut out);
    Ok(PhysicalProgram {
        instructions: out,
        map: *map,
    })
}
