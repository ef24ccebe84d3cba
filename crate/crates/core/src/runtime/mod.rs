//! Analytic run-time model and its discrete-event cross-check.

mod event;
mod timing;

use std::ops::Range;

pub use event::{event_sim, event_sim_with_overhead};
pub use timing::{
    exec_time, issue_time, wall_time, OpTiming, TimingModel, BASE_ISSUE_CYCLES, DEFAULT_CLOCK_HZ,
};

use crate::decompose::{PhysicalInstruction, PhysicalProgram, SeqTag};
use crate::error::RuntimeError;
use crate::hardware::AddressingMode;
use crate::subnet::validate_groups;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SegmentClass {
    Serial,
    Pipelined,
    Parallel,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceSegment {
    pub class: SegmentClass,
    pub range: Range<usize>,
    /// Issue slots after merging hardware groups.
    pub units: usize,
}

/// Consecutive instructions sharing a group id form one issue unit.
pub(crate) fn issue_units(instrs: &[PhysicalInstruction], grouped: bool) -> Vec<Range<usize>> {
    let mut units = Vec::new();
    let mut start = 0;
    while start < instrs.len() {
        let mut end = start + 1;
        if grouped {
            if let Some(g) = instrs[start].group {
                while end < instrs.len() && instrs[end].group == Some(g) {
                    end += 1;
                }
            }
        }
        units.push(start..end);
        start = end;
    }
    units
}

/// Splits a program at Serial tags. Runs of one-instruction blocks merge into a
/// Serial segment; longer blocks are Parallel when every follower is a
/// parallel candidate and Pipelined otherwise.
pub fn segment(program: &PhysicalProgram) -> Vec<SequenceSegment> {
    let instrs = &program.instructions;
    let mut blocks: Vec<Range<usize>> = Vec::new();
    for (idx, instr) in instrs.iter().enumerate() {
        if idx == 0 || instr.tag == SeqTag::Serial {
            blocks.push(idx..idx + 1);
        } else {
            blocks
                .last_mut()
                .expect("first instruction opens a block")
                .end = idx + 1;
        }
    }
    let mut segments: Vec<SequenceSegment> = Vec::new();
    for block in blocks {
        if block.len() == 1 {
            if let Some(last) = segments
                .last_mut()
                .filter(|s| s.class == SegmentClass::Serial)
            {
                last.range.end = block.end;
                last.units += 1;
                continue;
            }
            segments.push(SequenceSegment {
                class: SegmentClass::Serial,
                range: block,
                units: 1,
            });
            continue;
        }
        let all_parallel = instrs[block.start + 1..block.end]
            .iter()
            .all(|i| i.tag == SeqTag::ParallelCandidate);
        let units = issue_units(&instrs[block.clone()], true).len();
        segments.push(SequenceSegment {
            class: if all_parallel {
                SegmentClass::Parallel
            } else {
                SegmentClass::Pipelined
            },
            range: block,
            units,
        });
    }
    segments
}

/// Total cycles with `delta` extra issue cycles per issued unit. Without
/// `grouped`, every instruction issues on its own.
pub fn runtime_with_overhead(
    program: &PhysicalProgram,
    tm: &TimingModel,
    delta: u64,
    grouped: bool,
) -> Result<u64, RuntimeError> {
    let instrs = &program.instructions;
    let mut total = 0;
    for seg in segment(program) {
        let slice = &instrs[seg.range.clone()];
        match seg.class {
            SegmentClass::Serial => {
                for instr in slice {
                    let t = tm.get(instr.opcode)?;
                    total += t.issue + delta + t.exec;
                }
            }
            SegmentClass::Pipelined | SegmentClass::Parallel => {
                for unit in issue_units(slice, grouped) {
                    total += issue_time(&slice[unit.start], tm)? + delta;
                }
                total += exec_time(slice.last().expect("segments are non-empty"), tm)?;
            }
        }
    }
    Ok(total)
}

/// SISD issue: no address overhead, parallel runs billed as pipelined.
pub fn runtime_default(program: &PhysicalProgram, tm: &TimingModel) -> Result<u64, RuntimeError> {
    runtime_with_overhead(program, tm, 0, false)
}

/// Issue under `mode`: every unit pays the mode's overhead and each hardware
/// group issues once.
pub fn runtime_parallel(
    program: &PhysicalProgram,
    tm: &TimingModel,
    mode: &AddressingMode,
) -> Result<u64, RuntimeError> {
    validate_groups(program, mode)?;
    runtime_with_overhead(program, tm, u64::from(mode.delta()), true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decompose::{assign_tags, PhysicalOpcode};
    use crate::hardware::{map_logical, DistributionMode, EncodingScheme};
    use crate::subnet::mark_groups;

    fn program(ops: &[(PhysicalOpcode, usize)]) -> PhysicalProgram {
        let mut instrs: Vec<PhysicalInstruction> = ops
            .iter()
            .map(|&(op, node)| PhysicalInstruction::new(op, vec![0; op.param_count()], vec![node]))
            .collect();
        assign_tags(&mut instrs);
        PhysicalProgram {
            instructions: instrs,
            map: map_logical(4, DistributionMode::Semi),
        }
    }

    use PhysicalOpcode::{PRx, PRy, PRz};

    #[test]
    fn worked_default_values() {
        let tm = TimingModel::default();
        assert_eq!(
            runtime_default(&program(&[(PRx, 0), (PRx, 0)]), &tm),
            Ok(134)
        );
        assert_eq!(
            runtime_default(&program(&[(PRx, 0), (PRy, 1)]), &tm),
            Ok(72)
        );
        let four = program(&[(PRx, 0), (PRx, 1), (PRx, 2), (PRx, 3)]);
        assert_eq!(runtime_default(&four, &tm), Ok(82));
    }

    #[test]
    fn worked_parallel_values() {
        let tm = TimingModel::default();
        let mode = AddressingMode::new(EncodingScheme::SubIdNcBit, 4, 2, 16).unwrap();
        assert_eq!(mode.delta(), 0);
        let four = mark_groups(&program(&[(PRx, 0), (PRx, 1), (PRx, 2), (PRx, 3)]), &mode);
        assert_eq!(runtime_parallel(&four, &tm, &mode), Ok(72));
        let serial = program(&[(PRx, 0), (PRx, 0)]);
        assert_eq!(runtime_with_overhead(&serial, &tm, 2, true), Ok(138));
        let piped = program(&[(PRx, 0), (PRy, 1)]);
        assert_eq!(runtime_with_overhead(&piped, &tm, 1, true), Ok(74));
    }

    #[test]
    fn segments() {
        let serial = program(&[(PRx, 0), (PRy, 0), (PRz, 0)]);
        assert_eq!(segment(&serial).len(), 1);
        let fig = program(&[
            (PRx, 0),
            (PRx, 1),
            (PRx, 2),
            (PRx, 3),
            (PRy, 3),
            (PRz, 2),
            (PRx, 1),
            (PRy, 0),
            (PRz, 0),
            (PRz, 0),
            (PRx, 0),
            (PRy, 0),
        ]);
        let classes: Vec<SegmentClass> = segment(&fig).iter().map(|s| s.class).collect();
        assert_eq!(
            classes,
            [
                SegmentClass::Parallel,
                SegmentClass::Pipelined,
                SegmentClass::Serial
            ]
        );
        let empty = program(&[]);
        assert!(segment(&empty).is_empty());
        assert_eq!(runtime_default(&empty, &TimingModel::default()), Ok(0));
    }

    #[test]
    fn oversized_groups_are_rejected() {
        let tm = TimingModel::default();
        let mode = AddressingMode::new(EncodingScheme::SubIdNcBit, 4, 2, 16).unwrap();
        let mut p = program(&[(PRx, 0), (PRx, 1), (PRx, 2)]);
        for i in &mut p.instructions {
            i.group = Some(0);
        }
        assert!(matches!(
            runtime_parallel(&p, &tm, &mode),
            Err(RuntimeError::Group(_))
        ));
    }
}
