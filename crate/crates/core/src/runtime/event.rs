use std::collections::HashMap;

use super::{issue_units, TimingModel};
use crate::decompose::PhysicalProgram;
use crate::error::RuntimeError;
use crate::hardware::AddressingMode;
use crate::subnet::validate_groups;

/// Resource-level replay: the interface sends one unit at a time in program
/// order; a unit starts once the interface, all its nodes and any Measure it
/// waits on are free, then occupies its nodes for issue plus execution.
pub fn event_sim_with_overhead(
    program: &PhysicalProgram,
    tm: &TimingModel,
    delta: u64,
    grouped: bool,
) -> Result<u64, RuntimeError> {
    let instrs = &program.instructions;
    let mut interface_free = 0u64;
    let mut node_free: HashMap<usize, u64> = HashMap::new();
    let mut done = vec![0u64; instrs.len()];
    let mut finish_all = 0;
    for unit in issue_units(instrs, grouped) {
        let members = &instrs[unit.clone()];
        let mut start = interface_free;
        for m in members {
            for t in &m.targets {
                start = start.max(node_free.get(t).copied().unwrap_or(0));
            }
            if let Some(c) = m.condition {
                start = start.max(done[c]);
            }
        }
        let timing = tm.get(members[0].opcode)?;
        let issued = start + timing.issue + delta;
        let finish = issued + timing.exec;
        interface_free = issued;
        for (offset, m) in members.iter().enumerate() {
            for &t in &m.targets {
                node_free.insert(t, finish);
            }
            done[unit.start + offset] = finish;
        }
        finish_all = finish_all.max(finish);
    }
    Ok(finish_all)
}

/// Event replay under `mode`, with hardware groups issuing once.
pub fn event_sim(
    program: &PhysicalProgram,
    tm: &TimingModel,
    mode: &AddressingMode,
) -> Result<u64, RuntimeError> {
    validate_groups(program, mode)?;
    event_sim_with_overhead(program, tm, u64::from(mode.delta()), true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decompose::{assign_tags, PhysicalInstruction, PhysicalOpcode};
    use crate::hardware::{map_logical, DistributionMode, EncodingScheme};
    use crate::subnet::mark_groups;

    fn prx(nodes: &[usize]) -> PhysicalProgram {
        let mut instrs: Vec<PhysicalInstruction> = nodes
            .iter()
            .map(|&n| PhysicalInstruction::new(PhysicalOpcode::PRx, vec![1, 0, 0], vec![n]))
            .collect();
        assign_tags(&mut instrs);
        PhysicalProgram {
            instructions: instrs,
            map: map_logical(2, DistributionMode::Semi),
        }
    }

    #[test]
    fn worked_traces() {
        let tm = TimingModel::default();
        let sisd = AddressingMode::sisd(4);
        assert_eq!(event_sim(&prx(&[0, 0]), &tm, &sisd), Ok(134));
        assert_eq!(event_sim(&prx(&[0, 1]), &tm, &sisd), Ok(72));
        let mode = AddressingMode::new(EncodingScheme::SubIdNcBit, 2, 2, 16).unwrap();
        let grouped = mark_groups(&prx(&[0, 1]), &mode);
        assert_eq!(event_sim(&grouped, &tm, &mode), Ok(67));
    }

    #[test]
    fn conditions_wait_for_measurement() {
        let tm = TimingModel::default();
        let mut instrs = vec![
            PhysicalInstruction::new(PhysicalOpcode::Measure, vec![], vec![0]),
            PhysicalInstruction::new(PhysicalOpcode::CondPRz, vec![1], vec![1]),
        ];
        instrs[1].condition = Some(0);
        let p = PhysicalProgram {
            instructions: instrs,
            map: map_logical(1, DistributionMode::Semi),
        };
        assert_eq!(event_sim_with_overhead(&p, &tm, 0, false), Ok(402 + 3 + 11));
    }
}
