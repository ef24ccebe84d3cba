use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;

use crate::decompose::{PhysicalInstruction, PhysicalOpcode};
use crate::error::{ConfigError, RuntimeError};
use crate::hardware::DEFAULT_INTERFACE_WIDTH;

pub const DEFAULT_CLOCK_HZ: f64 = 10e6;

/// Constant issue cycles before the parameter words.
pub const BASE_ISSUE_CYCLES: u64 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OpTiming {
    pub issue: u64,
    pub exec: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimingModel {
    entries: BTreeMap<PhysicalOpcode, OpTiming>,
    clock_hz: f64,
    interface_width: u32,
}

impl Default for TimingModel {
    fn default() -> Self {
        use PhysicalOpcode::*;
        let entries = [
            (PRx, 5, 62),
            (PRy, 5, 62),
            (PRz, 3, 11),
            (CRx, 4, 62),
            (Entangle, 3, 1160),
            (Measure, 2, 400),
        ]
        .into_iter()
        .map(|(op, issue, exec)| (op, OpTiming { issue, exec }))
        .collect();
        TimingModel {
            entries,
            clock_hz: DEFAULT_CLOCK_HZ,
            interface_width: DEFAULT_INTERFACE_WIDTH,
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TimingFile {
    clock_hz: Option<f64>,
    interface_width: Option<u32>,
    #[serde(default)]
    opcode: BTreeMap<PhysicalOpcode, OpcodeEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct OpcodeEntry {
    issue: u64,
    exec: u64,
    params: Option<usize>,
}

impl TimingModel {
    /// Overrides the defaults with the values present in a TOML document.
    pub fn from_toml_str(text: &str) -> Result<Self, ConfigError> {
        let file: TimingFile = toml::from_str(text)?;
        let mut model = TimingModel::default();
        if let Some(hz) = file.clock_hz {
            if !(hz.is_finite() && hz > 0.0) {
                return Err(ConfigError::Invalid(format!(
                    "clock_hz must be positive, got {hz}"
                )));
            }
            model.clock_hz = hz;
        }
        if let Some(width) = file.interface_width {
            if width == 0 {
                return Err(ConfigError::Invalid(
                    "interface_width must be at least 1".into(),
                ));
            }
            model.interface_width = width;
        }
        for (op, entry) in file.opcode {
            let words = op.param_count();
            if entry.params.is_some_and(|p| p != words) {
                return Err(ConfigError::Invalid(format!(
                    "{op} carries {words} parameter words"
                )));
            }
            if entry.issue != BASE_ISSUE_CYCLES + words as u64 {
                return Err(ConfigError::Invalid(format!(
                    "{op} issue must be {} cycles ({BASE_ISSUE_CYCLES} + {words} words), got {}",
                    BASE_ISSUE_CYCLES + words as u64,
                    entry.issue
                )));
            }
            model.entries.insert(
                op,
                OpTiming {
                    issue: entry.issue,
                    exec: entry.exec,
                },
            );
        }
        Ok(model)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_toml_str(&text)
    }

    /// Model with only the listed opcodes; used to exercise lookup failures.
    pub fn from_entries(entries: impl IntoIterator<Item = (PhysicalOpcode, OpTiming)>) -> Self {
        TimingModel {
            entries: entries.into_iter().collect(),
            ..TimingModel::default()
        }
    }

    /// Conditioned opcodes fall back to their base row.
    pub fn get(&self, op: PhysicalOpcode) -> Result<OpTiming, RuntimeError> {
        self.entries
            .get(&op)
            .or_else(|| self.entries.get(&op.base()))
            .copied()
            .ok_or(RuntimeError::UnknownOpcode(op))
    }

    pub fn clock_hz(&self) -> f64 {
        self.clock_hz
    }

    pub fn interface_width(&self) -> u32 {
        self.interface_width
    }

    pub fn with_interface_width(mut self, width: u32) -> Self {
        self.interface_width = width;
        self
    }
}

pub fn issue_time(instr: &PhysicalInstruction, tm: &TimingModel) -> Result<u64, RuntimeError> {
    tm.get(instr.opcode).map(|t| t.issue)
}

pub fn exec_time(instr: &PhysicalInstruction, tm: &TimingModel) -> Result<u64, RuntimeError> {
    tm.get(instr.opcode).map(|t| t.exec)
}

/// Seconds at the model's clock.
pub fn wall_time(cycles: u64, tm: &TimingModel) -> f64 {
    cycles as f64 / tm.clock_hz
}
