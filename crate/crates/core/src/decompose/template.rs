//! Configurable node-pair CX recipe.

use std::f64::consts::{FRAC_PI_2, PI};
use std::path::Path;

use serde::Deserialize;

use super::{PhysicalInstruction, PhysicalOpcode, Y_AXIS_PHASE};
use crate::circuit::angle_word;
use crate::error::{ConfigError, DecomposeError};

pub const DEFAULT_TEMPLATE_VERSION: u32 = 1;

/// Slot word selecting the node's ancilla instead of a data qubit.
pub const ANCILLA_SLOT: u16 = u16::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Ctrl,
    Tgt,
    Both,
}

/// One template step. `params` holds the angle in radians for rotations and
/// the attempt count for `Entangle`; `Measure` takes none.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TemplateRow {
    pub opcode: PhysicalOpcode,
    #[serde(default)]
    pub params: Vec<f64>,
    pub role: Role,
    #[serde(default)]
    pub condition: Option<usize>,
    #[serde(default)]
    pub mergeable: bool,
}

impl TemplateRow {
    fn new(opcode: PhysicalOpcode, params: &[f64], role: Role) -> Self {
        TemplateRow {
            opcode,
            params: params.to_vec(),
            role,
            condition: None,
            mergeable: false,
        }
    }

    fn conditioned_on(mut self, row: usize) -> Self {
        self.condition = Some(row);
        self
    }

    fn mergeable(mut self) -> Self {
        self.mergeable = true;
        self
    }

    fn value_count(opcode: PhysicalOpcode) -> usize {
        match opcode {
            PhysicalOpcode::Measure => 0,
            _ => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CxTemplate {
    pub version: u32,
    #[serde(rename = "row")]
    pub rows: Vec<TemplateRow>,
}

impl Default for CxTemplate {
    /// Entangle, control-side rotation and readout, target correction and
    /// rotation, target readout, control phase correction.
    fn default() -> Self {
        use PhysicalOpcode::*;
        CxTemplate {
            version: DEFAULT_TEMPLATE_VERSION,
            rows: vec![
                TemplateRow::new(Entangle, &[20.0], Role::Both),
                TemplateRow::new(CRx, &[FRAC_PI_2], Role::Ctrl),
                TemplateRow::new(PRy, &[-FRAC_PI_2], Role::Ctrl),
                TemplateRow::new(Measure, &[], Role::Ctrl),
                TemplateRow::new(CondPRx, &[PI], Role::Tgt).conditioned_on(3),
                TemplateRow::new(CRx, &[FRAC_PI_2], Role::Tgt),
                TemplateRow::new(PRy, &[FRAC_PI_2], Role::Tgt).mergeable(),
                TemplateRow::new(Measure, &[], Role::Tgt),
                TemplateRow::new(CondPRz, &[PI], Role::Ctrl).conditioned_on(7),
            ],
        }
    }
}

impl CxTemplate {
    pub fn from_toml_str(text: &str) -> Result<Self, ConfigError> {
        let template: CxTemplate = toml::from_str(text)?;
        template
            .validate()
            .map_err(|e| ConfigError::Invalid(e.to_string()))?;
        Ok(template)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_toml_str(&text)
    }

    pub fn validate(&self) -> Result<(), DecomposeError> {
        let err =
            |row: usize, msg: &str| Err(DecomposeError::Template(format!("row {row}: {msg}")));
        if self.rows.is_empty() {
            return Err(DecomposeError::Template("template has no rows".into()));
        }
        for (idx, row) in self.rows.iter().enumerate() {
            if (row.opcode == PhysicalOpcode::Entangle) != (row.role == Role::Both) {
                return err(idx, "only Entangle may (and must) use role `both`");
            }
            if row.params.len() != TemplateRow::value_count(row.opcode) {
                return err(idx, "wrong number of parameters");
            }
            if row.params.iter().any(|p| !p.is_finite()) {
                return err(idx, "non-finite parameter");
            }
            if row.opcode == PhysicalOpcode::Entangle {
                let attempts = row.params[0];
                if attempts.fract() != 0.0 || !(1.0..=f64::from(u16::MAX)).contains(&attempts) {
                    return err(idx, "entangle attempts must be an integer in 1..=65535");
                }
            }
            match row.condition {
                Some(c) if !row.opcode.is_conditioned() => {
                    return err(
                        idx,
                        &format!("condition on row {c} requires a conditioned opcode"),
                    )
                }
                Some(c) if c >= idx || self.rows[c].opcode != PhysicalOpcode::Measure => {
                    return err(idx, "condition must reference an earlier Measure row")
                }
                None if row.opcode.is_conditioned() => {
                    return err(idx, "conditioned opcode without a condition row")
                }
                _ => {}
            }
            if row.mergeable && !matches!(row.opcode, PhysicalOpcode::PRx | PhysicalOpcode::PRy) {
                return err(idx, "only PRx/PRy rows can be mergeable");
            }
        }
        Ok(())
    }

    pub fn first_mergeable_row(&self) -> Option<usize> {
        self.rows.iter().position(|r| r.mergeable)
    }

    /// Rows bound to a node pair. Conditions are row indices within the
    /// returned list; `data_slot` selects the data qubit touched by CRx and
    /// the corrections.
    pub fn instantiate(
        &self,
        ctrl: usize,
        tgt: usize,
        data_slot: u16,
    ) -> Result<Vec<PhysicalInstruction>, DecomposeError> {
        if ctrl == tgt {
            return Err(DecomposeError::SameNode(ctrl));
        }
        Ok(self
            .rows
            .iter()
            .map(|row| {
                let targets = match row.role {
                    Role::Ctrl => vec![ctrl],
                    Role::Tgt => vec![tgt],
                    Role::Both => vec![ctrl, tgt],
                };
                let value = row.params.first().copied().unwrap_or(0.0);
                let slot = if row.opcode.is_conditioned() {
                    data_slot
                } else {
                    ANCILLA_SLOT
                };
                let params = match row.opcode.base() {
                    PhysicalOpcode::PRx => vec![angle_word(value), 0, slot],
                    PhysicalOpcode::PRy => vec![angle_word(value), Y_AXIS_PHASE, slot],
                    PhysicalOpcode::PRz => vec![angle_word(value)],
                    PhysicalOpcode::CRx => vec![angle_word(value), data_slot],
                    PhysicalOpcode::Entangle => vec![value as u16],
                    _ => vec![],
                };
                let mut instr = PhysicalInstruction::new(row.opcode, params, targets);
                instr.condition = row.condition;
                instr
            })
            .collect())
    }
}

/// Default template bound to `(ctrl, tgt)` on data slot 0.
pub fn physical_cx_template(
    ctrl: usize,
    tgt: usize,
) -> Result<Vec<PhysicalInstruction>, DecomposeError> {
    CxTemplate::default().instantiate(ctrl, tgt, 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_template_shape() {
        let rows = physical_cx_template(3, 5).unwrap();
        assert_eq!(rows.len(), 9);
        assert_eq!(rows[0].opcode, PhysicalOpcode::Entangle);
        assert_eq!(rows[0].targets, [3, 5]);
        assert_eq!(rows[4].condition, Some(3));
        assert_eq!(rows[8].condition, Some(7));
        assert_eq!(rows[8].targets, [3]);
        CxTemplate::default().validate().unwrap();
    }

    #[test]
    fn same_node_is_rejected() {
        assert_eq!(physical_cx_template(2, 2), Err(DecomposeError::SameNode(2)));
    }

    #[test]
    fn loads_from_toml() {
        let text = r#"
            version = 7
            [[row]]
            opcode = "Entangle"
            params = [10]
            role = "both"
            [[row]]
            opcode = "Measure"
            role = "ctrl"
            [[row]]
            opcode = "CondPRx"
            params = [3.141592653589793]
            role = "tgt"
            condition = 1
        "#;
        let t = CxTemplate::from_toml_str(text).unwrap();
        assert_eq!(t.version, 7);
        let rows = t.instantiate(0, 1, 1).unwrap();
        assert_eq!(rows[0].params, [10]);
        assert_eq!(rows[2].params, [1 << 15, 0, 1]);
    }

    #[test]
    fn invalid_templates() {
        let bad_condition = r#"
            version = 1
            [[row]]
            opcode = "CondPRz"
            params = [1.0]
            role = "ctrl"
            condition = 0
        "#;
        assert!(matches!(
            CxTemplate::from_toml_str(bad_condition),
            Err(ConfigError::Invalid(_))
        ));
        let bad_role = r#"
            version = 1
            [[row]]
            opcode = "PRx"
            params = [1.0]
            role = "both"
        "#;
        assert!(matches!(
            CxTemplate::from_toml_str(bad_role),
            Err(ConfigError::Invalid(_))
        ));
        assert!(matches!(
            CxTemplate::from_toml_str("version = 1\nrow = []"),
            Err(ConfigError::Invalid(_))
        ));
        assert!(matches!(
            CxTemplate::from_toml_str("nonsense ="),
            Err(ConfigError::Toml(_))
        ));
    }
}
