use std::collections::BTreeMap;
use std::path::PathBuf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::builtins::{builtin_benchmark, BUILTIN_BENCHMARKS};
use super::pipeline::{prepare, PipelineResult};
use crate::circuit::{parse_qasm, Circuit};
use crate::decompose::CxTemplate;
use crate::error::{BenchError, PipelineError};
use crate::hardware::{AddressingMode, DistributionMode, EncodingScheme, DEFAULT_INTERFACE_WIDTH};
use crate::runtime::TimingModel;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BenchmarkSource {
    Builtin(String),
    Qasm(PathBuf),
}

impl BenchmarkSource {
    pub fn name(&self) -> String {
        match self {
            BenchmarkSource::Builtin(name) => name.clone(),
            BenchmarkSource::Qasm(path) => path.file_stem().map_or_else(
                || path.display().to_string(),
                |s| s.to_string_lossy().into_owned(),
            ),
        }
    }

    pub fn load(&self, num_logical: usize, seed: u64) -> Result<Circuit, BenchError> {
        match self {
            BenchmarkSource::Builtin(name) => builtin_benchmark(name, num_logical, seed),
            BenchmarkSource::Qasm(path) => {
                let text = std::fs::read_to_string(path).map_err(|source| BenchError::Io {
                    path: path.clone(),
                    source,
                })?;
                Ok(parse_qasm(&text)?)
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub dists: Vec<DistributionMode>,
    pub schemes: Vec<EncodingScheme>,
    /// Subnet counts; `None` selects each scheme's default range.
    pub subnets: Option<Vec<usize>>,
    pub num_logical: usize,
    pub benchmarks: Vec<BenchmarkSource>,
    pub interface_width: u32,
    pub timing: TimingModel,
    pub template: CxTemplate,
    pub seed: u64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            dists: DistributionMode::ALL.to_vec(),
            schemes: vec![
                EncodingScheme::SubIdNcBit,
                EncodingScheme::SubBitNcId,
                EncodingScheme::SubBitNcBit,
            ],
            subnets: None,
            num_logical: 128,
            benchmarks: BUILTIN_BENCHMARKS
                .iter()
                .map(|b| BenchmarkSource::Builtin((*b).to_string()))
                .collect(),
            interface_width: DEFAULT_INTERFACE_WIDTH,
            timing: TimingModel::default(),
            template: CxTemplate::default(),
            seed: 1,
        }
    }
}

/// One CSV row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub benchmark: String,
    pub dist: DistributionMode,
    pub scheme: EncodingScheme,
    #[serde(rename = "M")]
    pub m: usize,
    #[serde(rename = "K")]
    pub k: usize,
    #[serde(rename = "W_S")]
    pub w_s: u32,
    #[serde(rename = "W_NC")]
    pub w_nc: u32,
    pub rho: usize,
    pub delta: u32,
    #[serde(rename = "T_baseline")]
    pub t_baseline: u64,
    #[serde(rename = "T_compiler")]
    pub t_compiler: u64,
    #[serde(rename = "T_combined")]
    pub t_combined: u64,
    pub compiler_speedup: f64,
    pub hardware_speedup: f64,
    pub combined_speedup: f64,
}

impl ReportRow {
    pub fn new(
        benchmark: &str,
        dist: DistributionMode,
        mode: &AddressingMode,
        r: &PipelineResult,
    ) -> Self {
        let (w_s, w_nc) = mode.address_widths();
        let s = r.speedups::<f64>();
        ReportRow {
            benchmark: benchmark.to_string(),
            dist,
            scheme: mode.scheme(),
            m: mode.subnets(),
            k: mode.nodes_per_subnet(),
            w_s,
            w_nc,
            rho: mode.rho(),
            delta: mode.delta(),
            t_baseline: r.t_baseline,
            t_compiler: r.t_compiler,
            t_combined: r.t_combined,
            compiler_speedup: s.compiler,
            hardware_speedup: s.hardware,
            combined_speedup: s.combined,
        }
    }

    pub fn label(&self) -> String {
        format!("({}, {})", self.w_s, self.w_nc)
    }
}

/// Analytic and event-replay cycle counts side by side.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EventRow {
    pub benchmark: String,
    pub dist: DistributionMode,
    pub scheme: EncodingScheme,
    #[serde(rename = "M")]
    pub m: usize,
    pub analytic_baseline: u64,
    pub event_baseline: u64,
    pub analytic_compiler: u64,
    pub event_compiler: u64,
    pub analytic_combined: u64,
    pub event_combined: u64,
    pub max_group: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AverageRow {
    pub dist: DistributionMode,
    pub scheme: EncodingScheme,
    #[serde(rename = "M")]
    pub m: usize,
    #[serde(rename = "K")]
    pub k: usize,
    #[serde(rename = "W_S")]
    pub w_s: u32,
    #[serde(rename = "W_NC")]
    pub w_nc: u32,
    pub benchmarks: usize,
    pub compiler_speedup: f64,
    pub hardware_speedup: f64,
    pub combined_speedup: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellFailure {
    pub benchmark: String,
    pub dist: DistributionMode,
    pub scheme: EncodingScheme,
    #[serde(rename = "M")]
    pub m: usize,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SpeedupReport {
    pub rows: Vec<ReportRow>,
    pub events: Vec<EventRow>,
    pub averages: Vec<AverageRow>,
    pub failures: Vec<CellFailure>,
}

type Key = (String, DistributionMode, EncodingScheme, usize);

enum CellOutcome {
    Done(Box<(ReportRow, EventRow)>),
    Failed(CellFailure),
}

fn mode_averages(rows: &[ReportRow]) -> Vec<AverageRow> {
    let mut acc: BTreeMap<(DistributionMode, EncodingScheme, usize), (AverageRow, usize)> =
        BTreeMap::new();
    for r in rows {
        let entry = acc.entry((r.dist, r.scheme, r.m)).or_insert_with(|| {
            (
                AverageRow {
                    dist: r.dist,
                    scheme: r.scheme,
                    m: r.m,
                    k: r.k,
                    w_s: r.w_s,
                    w_nc: r.w_nc,
                    benchmarks: 0,
                    compiler_speedup: 0.0,
                    hardware_speedup: 0.0,
                    combined_speedup: 0.0,
                },
                0,
            )
        });
        entry.0.compiler_speedup += r.compiler_speedup;
        entry.0.hardware_speedup += r.hardware_speedup;
        entry.0.combined_speedup += r.combined_speedup;
        entry.1 += 1;
    }
    acc.into_values()
        .map(|(mut avg, n)| {
            let n_f = n as f64;
            avg.benchmarks = n;
            avg.compiler_speedup /= n_f;
            avg.hardware_speedup /= n_f;
            avg.combined_speedup /= n_f;
            avg
        })
        .collect()
}

/// Evaluates every benchmark under every requested mode. Failing cells are
/// recorded and the rest of the sweep continues.
pub fn run_sweep(cfg: &SweepConfig) -> SpeedupReport {
    let timing = cfg.timing.clone().with_interface_width(cfg.interface_width);
    let mut report = SpeedupReport::default();
    let mut prepared = Vec::new();
    for source in &cfg.benchmarks {
        let name = source.name();
        for &dist in &cfg.dists {
            let prep = source
                .load(cfg.num_logical, cfg.seed)
                .map_err(PipelineError::from)
                .and_then(|c| prepare(&c, dist, &timing, &cfg.template));
            match prep {
                Ok(p) => prepared.push((name.clone(), dist, p)),
                Err(e) => {
                    for &scheme in &cfg.schemes {
                        report.failures.push(CellFailure {
                            benchmark: name.clone(),
                            dist,
                            scheme,
                            m: 0,
                            error: e.to_string(),
                        });
                    }
                }
            }
        }
    }

    let cells: Vec<(usize, EncodingScheme, usize)> = prepared
        .iter()
        .enumerate()
        .flat_map(|(idx, (_, dist, _))| {
            cfg.schemes.iter().flat_map(move |&scheme| {
                let subnets = cfg
                    .subnets
                    .clone()
                    .unwrap_or_else(|| scheme.default_subnet_range(*dist));
                subnets.into_iter().map(move |m| (idx, scheme, m))
            })
        })
        .collect();

    let outcomes: Vec<CellOutcome> = cells
        .par_iter()
        .map(|&(idx, scheme, m)| {
            let (name, dist, prep) = &prepared[idx];
            let result =
                AddressingMode::for_network(scheme, dist.network_size(), m, cfg.interface_width)
                    .map_err(PipelineError::from)
                    .and_then(|mode| Ok((mode, prep.evaluate(&mode, &timing, &cfg.template)?)));
            match result {
                Ok((mode, r)) => CellOutcome::Done(Box::new((
                    ReportRow::new(name, *dist, &mode, &r),
                    EventRow {
                        benchmark: name.clone(),
                        dist: *dist,
                        scheme,
                        m,
                        analytic_baseline: r.t_baseline,
                        event_baseline: r.event_baseline,
                        analytic_compiler: r.t_compiler,
                        event_compiler: r.event_compiler,
                        analytic_combined: r.t_combined,
                        event_combined: r.event_combined,
                        max_group: r.max_group,
                    },
                ))),
                Err(e) => {
                    log::warn!("{name} {dist} {scheme} M={m}: {e}");
                    CellOutcome::Failed(CellFailure {
                        benchmark: name.clone(),
                        dist: *dist,
                        scheme,
                        m,
                        error: e.to_string(),
                    })
                }
            }
        })
        .collect();

    for outcome in outcomes {
        match outcome {
            CellOutcome::Done(cell) => {
                let (row, event) = *cell;
                report.rows.push(row);
                report.events.push(event);
            }
            CellOutcome::Failed(f) => report.failures.push(f),
        }
    }
    let key = |b: &str, d, s, m| -> Key { (b.to_string(), d, s, m) };
    report
        .rows
        .sort_by_key(|r| key(&r.benchmark, r.dist, r.scheme, r.m));
    report
        .events
        .sort_by_key(|r| key(&r.benchmark, r.dist, r.scheme, r.m));
    report
        .failures
        .sort_by_key(|r| key(&r.benchmark, r.dist, r.scheme, r.m));
    report.averages = mode_averages(&report.rows);
    report
}
