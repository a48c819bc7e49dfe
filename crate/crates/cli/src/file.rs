//! JSON circuit files.
//!
//! ```json
//! {
//!   "modes": 2,
//!   "input": {"type": "core", "terms": [{"occ": [1, 0], "amp": [0.6, 0]}, {"occ": [0, 2], "amp": [0, 0.8]}]},
//!   "gates": [
//!     {"g": "sqz", "modes": [0], "r": 0.3, "theta": 0},
//!     {"g": "bs", "modes": [0, 1], "theta": 0.7, "phi": 0.1},
//!     {"g": "add", "modes": [1]}
//!   ],
//!   "measurement": {"measured_modes": [0]}
//! }
//! ```
//!
//! Inputs are `core`, `fock` or `vacuum`. Gates are `disp` (`beta`),
//! `rot` (`phi`), `sqz`/`tms` (`r`, optional `theta`; `ξ = r e^{iθ}`),
//! `bs` (`theta`, optional `phi`), `swap`, and the ladder events `add`/`sub`.

use std::path::Path;

use gcore::{Circuit, CircuitOp, CoreState, ElementaryGate, FockIndex, LadderEvent, C64};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Tolerated deviation of a file's core-state norm from one; the state is
/// renormalized exactly after the check.
pub const FILE_NORM_TOL: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitFile {
    pub modes: usize,
    pub input: InputRecord,
    #[serde(default)]
    pub gates: Vec<GateRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measurement: Option<MeasurementRecord>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum InputRecord {
    Core { terms: Vec<TermRecord> },
    Fock { occ: Vec<u32> },
    Vacuum,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermRecord {
    pub occ: Vec<u32>,
    pub amp: [f64; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "g", rename_all = "lowercase", deny_unknown_fields)]
pub enum GateRecord {
    Disp { modes: Vec<usize>, beta: [f64; 2] },
    Rot { modes: Vec<usize>, phi: f64 },
    Sqz { modes: Vec<usize>, r: f64, #[serde(default)] theta: f64 },
    Bs { modes: Vec<usize>, theta: f64, #[serde(default)] phi: f64 },
    Tms { modes: Vec<usize>, r: f64, #[serde(default)] theta: f64 },
    Swap { modes: Vec<usize> },
    Add { modes: Vec<usize> },
    Sub { modes: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasurementRecord {
    pub measured_modes: Vec<usize>,
}

/// A validated circuit file.
#[derive(Clone, Debug)]
pub struct LoadedCircuit {
    pub circuit: Circuit,
    /// Measured modes from the file; all modes when absent.
    pub measured_modes: Vec<usize>,
}

impl GateRecord {
    pub fn name(&self) -> &'static str {
        match self {
            GateRecord::Disp { .. } => "disp",
            GateRecord::Rot { .. } => "rot",
            GateRecord::Sqz { .. } => "sqz",
            GateRecord::Bs { .. } => "bs",
            GateRecord::Tms { .. } => "tms",
            GateRecord::Swap { .. } => "swap",
            GateRecord::Add { .. } => "add",
            GateRecord::Sub { .. } => "sub",
        }
    }

    fn modes(&self) -> &[usize] {
        match self {
            GateRecord::Disp { modes, .. }
            | GateRecord::Rot { modes, .. }
            | GateRecord::Sqz { modes, .. }
            | GateRecord::Bs { modes, .. }
            | GateRecord::Tms { modes, .. }
            | GateRecord::Swap { modes }
            | GateRecord::Add { modes }
            | GateRecord::Sub { modes } => modes,
        }
    }

    fn arity(&self) -> usize {
        match self {
            GateRecord::Bs { .. } | GateRecord::Tms { .. } | GateRecord::Swap { .. } => 2,
            _ => 1,
        }
    }

    fn to_op(&self, m: usize, ctx: &str) -> Result<CircuitOp, CliError> {
        let modes = self.modes();
        if modes.len() != self.arity() {
            return Err(CliError::Validation(format!(
                "{ctx}: '{}' takes {} mode index(es), found {}",
                self.name(),
                self.arity(),
                modes.len()
            )));
        }
        if let Some(&k) = modes.iter().find(|&&k| k >= m) {
            return Err(CliError::Validation(format!("{ctx}: mode index {k} out of range for {m} modes")));
        }
        let pair = || [modes[0], modes[1]];
        let op = match *self {
            GateRecord::Disp { beta, .. } => gate(ElementaryGate::Displacement { mode: modes[0], beta: c(beta) }),
            GateRecord::Rot { phi, .. } => gate(ElementaryGate::Rotation { mode: modes[0], phi }),
            GateRecord::Sqz { r, theta, .. } => gate(ElementaryGate::Squeeze { mode: modes[0], xi: C64::from_polar(r, theta) }),
            GateRecord::Bs { theta, phi, .. } => gate(ElementaryGate::Beamsplitter { modes: pair(), theta, phi }),
            GateRecord::Tms { r, theta, .. } => gate(ElementaryGate::TwoModeSqueeze { modes: pair(), xi: C64::from_polar(r, theta) }),
            GateRecord::Swap { .. } => gate(ElementaryGate::Swap { modes: pair() }),
            GateRecord::Add { .. } => CircuitOp::Ladder(LadderEvent::addition(modes[0])),
            GateRecord::Sub { .. } => CircuitOp::Ladder(LadderEvent::subtraction(modes[0])),
        };
        if let CircuitOp::Gate(g) = &op {
            g.validate(m).map_err(|e| CliError::Validation(format!("{ctx}: {e}")))?;
        }
        Ok(op)
    }

    /// Record for an elementary gate; `ξ` is written in polar form.
    pub fn from_gate(g: &ElementaryGate) -> GateRecord {
        match *g {
            ElementaryGate::Displacement { mode, beta } => GateRecord::Disp { modes: vec![mode], beta: [beta.re, beta.im] },
            ElementaryGate::Rotation { mode, phi } => GateRecord::Rot { modes: vec![mode], phi },
            ElementaryGate::Squeeze { mode, xi } => GateRecord::Sqz { modes: vec![mode], r: xi.norm(), theta: xi.arg() },
            ElementaryGate::Beamsplitter { modes, theta, phi } => GateRecord::Bs { modes: modes.to_vec(), theta, phi },
            ElementaryGate::TwoModeSqueeze { modes, xi } => GateRecord::Tms { modes: modes.to_vec(), r: xi.norm(), theta: xi.arg() },
            ElementaryGate::Swap { modes } => GateRecord::Swap { modes: modes.to_vec() },
        }
    }
}

fn gate(g: ElementaryGate) -> CircuitOp {
    CircuitOp::Gate(g)
}

fn c(v: [f64; 2]) -> C64 {
    C64::new(v[0], v[1])
}

impl CircuitFile {
    pub fn parse(text: &str, origin: &str) -> Result<CircuitFile, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Validation(format!("{origin}: {e}")))
    }

    pub fn read(path: &Path) -> Result<CircuitFile, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("circuit files serialize")
    }

    /// Checks the schema invariants and builds the circuit.
    pub fn load(&self, origin: &str) -> Result<LoadedCircuit, CliError> {
        let m = self.modes;
        let invalid = |msg: String| CliError::Validation(format!("{origin}: {msg}"));
        if m == 0 {
            return Err(invalid("modes: must be at least 1".into()));
        }
        let check_occ = |occ: &[u32], field: &str| {
            if occ.len() == m {
                Ok(())
            } else {
                Err(invalid(format!("{field}: occupation has length {}, expected {m}", occ.len())))
            }
        };
        let input = match &self.input {
            InputRecord::Vacuum => CoreState::vacuum(m).map_err(|e| invalid(format!("input: {e}")))?,
            InputRecord::Fock { occ } => {
                check_occ(occ, "input.occ")?;
                CoreState::fock(FockIndex::new(occ.clone())).map_err(|e| invalid(format!("input: {e}")))?
            }
            InputRecord::Core { terms } => {
                if terms.is_empty() {
                    return Err(invalid("input.terms: empty core state".into()));
                }
                for (k, t) in terms.iter().enumerate() {
                    check_occ(&t.occ, &format!("input.terms[{k}].occ"))?;
                    if !t.amp.iter().all(|v| v.is_finite()) {
                        return Err(invalid(format!("input.terms[{k}].amp: non-finite amplitude")));
                    }
                }
                let raw = CoreState::new(terms.iter().map(|t| (FockIndex::new(t.occ.clone()), c(t.amp))), false)
                    .map_err(|e| invalid(format!("input.terms: {e}")))?;
                let norm = raw.norm();
                if (norm - 1.0).abs() > FILE_NORM_TOL {
                    return Err(invalid(format!(
                        "input.terms: amplitudes are not normalized (norm {norm}, tolerance {FILE_NORM_TOL:e})"
                    )));
                }
                raw.normalized().0
            }
        };
        let ops = self
            .gates
            .iter()
            .enumerate()
            .map(|(k, g)| g.to_op(m, &format!("{origin}: gates[{k}] ({})", g.name())))
            .collect::<Result<Vec<_>, _>>()?;
        let measured_modes = match &self.measurement {
            None => (0..m).collect(),
            Some(rec) => validate_measured(&rec.measured_modes, m).map_err(|e| invalid(format!("measurement.{e}")))?,
        };
        let circuit = Circuit::new(input, ops).map_err(|e| invalid(e.to_string()))?;
        Ok(LoadedCircuit { circuit, measured_modes })
    }

    /// File for `Ĝ|C⟩` with `Ĝ` given as a gate list.
    pub fn from_parts(core: &CoreState, gates: &[ElementaryGate], measurement: Option<MeasurementRecord>) -> CircuitFile {
        CircuitFile {
            modes: core.modes(),
            input: InputRecord::Core {
                terms: core
                    .terms()
                    .map(|(p, a)| TermRecord { occ: p.occupations().to_vec(), amp: [a.re, a.im] })
                    .collect(),
            },
            gates: gates.iter().map(GateRecord::from_gate).collect(),
            measurement,
        }
    }
}

/// Distinct in-range mode indices.
pub fn validate_measured(modes: &[usize], m: usize) -> Result<Vec<usize>, String> {
    if modes.is_empty() {
        return Err("measured_modes: empty".into());
    }
    for (k, &j) in modes.iter().enumerate() {
        if j >= m {
            return Err(format!("measured_modes[{k}]: mode {j} out of range for {m} modes"));
        }
        if modes[..k].contains(&j) {
            return Err(format!("measured_modes[{k}]: mode {j} repeated"));
        }
    }
    Ok(modes.to_vec())
}
