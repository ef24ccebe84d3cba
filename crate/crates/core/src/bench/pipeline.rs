use crate::circuit::{transpile_to_basis, Circuit};
use crate::decompose::{naive_decompose, optimized_decompose, CxTemplate, PhysicalProgram};
use crate::error::PipelineError;
use crate::hardware::{map_logical, AddressingMode, DistributionMode, EncodingScheme, QubitMap};
use crate::runtime::{
    event_sim, event_sim_with_overhead, runtime_default, runtime_parallel, TimingModel,
};
use crate::scalar::SpeedupScalar;
use crate::schedule::{schedule, LayeredCircuit};
use crate::subnet::{mark_groups, max_group_size};

/// Cycle counts of one circuit under one addressing mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PipelineResult {
    pub t_baseline: u64,
    pub t_compiler: u64,
    pub t_combined: u64,
    pub event_baseline: u64,
    pub event_compiler: u64,
    pub event_combined: u64,
    pub max_group: usize,
}

impl PipelineResult {
    pub fn speedups<T: SpeedupScalar>(&self) -> Speedups<T> {
        Speedups::from_cycles(self.t_baseline, self.t_compiler, self.t_combined)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Speedups<T> {
    /// Baseline over compiled, both issued SISD.
    pub compiler: T,
    /// Compiled SISD over compiled with hardware parallelism.
    pub hardware: T,
    pub combined: T,
}

impl<T: SpeedupScalar> Speedups<T> {
    pub fn from_cycles(baseline: u64, compiler: u64, combined: u64) -> Self {
        Speedups {
            compiler: T::from_cycles(baseline, compiler),
            hardware: T::from_cycles(compiler, combined),
            combined: T::from_cycles(baseline, combined),
        }
    }
}

/// Mode-independent half of the pipeline for one circuit and distribution.
#[derive(Debug, Clone)]
pub struct PreparedCircuit {
    pub map: QubitMap,
    pub naive: PhysicalProgram,
    pub scheduled: LayeredCircuit,
    /// Optimized program for every scheme that does not reorder by subnet.
    pub optimized: PhysicalProgram,
    pub t_baseline: u64,
    pub event_baseline: u64,
}

pub fn prepare(
    circuit: &Circuit,
    dist: DistributionMode,
    tm: &TimingModel,
    template: &CxTemplate,
) -> Result<PreparedCircuit, PipelineError> {
    let basis = transpile_to_basis(circuit);
    let map = map_logical(basis.num_qubits(), dist);
    let naive = naive_decompose(&LayeredCircuit::unscheduled(&basis), &map, template)?;
    let scheduled = schedule(&basis);
    let plain_mode = AddressingMode::sisd(map.node_count());
    let optimized = optimized_decompose(&scheduled, &map, &plain_mode, template)?;
    Ok(PreparedCircuit {
        t_baseline: runtime_default(&naive, tm)?,
        event_baseline: event_sim_with_overhead(&naive, tm, 0, false)?,
        map,
        naive,
        scheduled,
        optimized,
    })
}

impl PreparedCircuit {
    pub fn optimized_for(
        &self,
        mode: &AddressingMode,
        template: &CxTemplate,
    ) -> Result<PhysicalProgram, PipelineError> {
        if mode.scheme() == EncodingScheme::SubBitNcBit {
            Ok(optimized_decompose(
                &self.scheduled,
                &self.map,
                mode,
                template,
            )?)
        } else {
            Ok(self.optimized.clone())
        }
    }

    pub fn evaluate(
        &self,
        mode: &AddressingMode,
        tm: &TimingModel,
        template: &CxTemplate,
    ) -> Result<PipelineResult, PipelineError> {
        mode.check_fits(&self.map)?;
        let optimized = self.optimized_for(mode, template)?;
        let marked = mark_groups(&optimized, mode);
        Ok(PipelineResult {
            t_baseline: self.t_baseline,
            t_compiler: runtime_default(&optimized, tm)?,
            t_combined: runtime_parallel(&marked, tm, mode)?,
            event_baseline: self.event_baseline,
            event_compiler: event_sim_with_overhead(&optimized, tm, 0, false)?,
            event_combined: event_sim(&marked, tm, mode)?,
            max_group: max_group_size(&marked),
        })
    }
}

/// Baseline (naive decomposition of the original order, SISD), compiler
/// (scheduled and optimized, SISD) and combined (optimized and grouped for
/// `mode`) run times.
pub fn run_pipeline(
    circuit: &Circuit,
    dist: DistributionMode,
    mode: &AddressingMode,
    tm: &TimingModel,
    template: &CxTemplate,
) -> Result<PipelineResult, PipelineError> {
    prepare(circuit, dist, tm, template)?.evaluate(mode, tm, template)
}
