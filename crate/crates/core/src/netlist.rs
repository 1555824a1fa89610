// SPDX-License-Identifier: Apache-2.0
//! Reversible netlist IR.
//!
//! A [`Circuit`] is a list of gate instances in topological order over dense
//! [`NetId`]s. Every net has exactly one driver and at most one reader, so
//! no fan-out and no feedback can be expressed through [`CircuitBuilder`].
//! Nets nobody reads are either named primary outputs or garbage.

use std::collections::HashSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::gate::{GateError, GateKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct NetId(pub u32);

impl NetId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Where a net's value comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NetSource {
    PrimaryInput(usize),
    ConstantInput { position: usize, value: bool },
    GatePin { gate: usize, pin: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GateInstance {
    pub kind: GateKind,
    pub inputs: Vec<NetId>,
    pub outputs: Vec<NetId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error("a circuit needs at least one primary input")]
    NoInputs,
    #[error("expected {expected} input names, got {actual}")]
    NameCount { expected: usize, actual: usize },
    #[error("net {0} does not exist")]
    UnknownNet(NetId),
    #[error("fan-out violation: net {0} is already consumed")]
    FanOut(NetId),
    #[error(transparent)]
    Arity(#[from] GateError),
    #[error("net {0} feeds a gate and cannot be an output")]
    ConsumedOutput(NetId),
    #[error("net {0} is named as an output more than once")]
    DuplicateOutputNet(NetId),
    #[error("duplicate output name `{0}`")]
    DuplicateName(String),
    #[error("width mismatch: {inputs} input lines but {outputs} output lines")]
    Width { inputs: usize, outputs: usize },
}

/// An immutable reversible netlist.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    input_names: Vec<String>,
    constants: Vec<(NetId, bool)>,
    gates: Vec<GateInstance>,
    outputs: Vec<(String, NetId)>,
    garbage: Vec<NetId>,
    net_count: usize,
}

impl Circuit {
    /// Assembles a circuit without any structural checks.
    ///
    /// Primary inputs are nets `0..input_names.len()`. Used by the netlist
    /// reader so that malformed circuits can still be inspected with
    /// [`validate_structure`].
    pub fn from_raw_parts(
        input_names: Vec<String>,
        constants: Vec<(NetId, bool)>,
        gates: Vec<GateInstance>,
        outputs: Vec<(String, NetId)>,
        garbage: Vec<NetId>,
        net_count: usize,
    ) -> Self {
        Circuit {
            input_names,
            constants,
            gates,
            outputs,
            garbage,
            net_count,
        }
    }

    pub fn primary_input_count(&self) -> usize {
        self.input_names.len()
    }

    pub fn input_names(&self) -> &[String] {
        &self.input_names
    }

    pub fn input_net(&self, position: usize) -> NetId {
        NetId(position as u32)
    }

    pub fn constants(&self) -> &[(NetId, bool)] {
        &self.constants
    }

    pub fn gates(&self) -> &[GateInstance] {
        &self.gates
    }

    pub fn primary_outputs(&self) -> &[(String, NetId)] {
        &self.outputs
    }

    pub fn garbage_outputs(&self) -> &[NetId] {
        &self.garbage
    }

    pub fn net_count(&self) -> usize {
        self.net_count
    }

    /// Total line count `W` on the input side: primary inputs plus constants.
    pub fn width(&self) -> usize {
        self.input_names.len() + self.constants.len()
    }

    /// Output line count: primary outputs plus garbage.
    pub fn output_width(&self) -> usize {
        self.outputs.len() + self.garbage.len()
    }

    /// Nets on the input side in line order (primary inputs, then constants).
    pub fn input_lines(&self) -> Vec<NetId> {
        (0..self.input_names.len())
            .map(|i| NetId(i as u32))
            .chain(self.constants.iter().map(|&(n, _)| n))
            .collect()
    }

    /// Nets on the output side in line order (primary outputs, then garbage).
    pub fn output_lines(&self) -> Vec<NetId> {
        self.outputs
            .iter()
            .map(|(_, n)| *n)
            .chain(self.garbage.iter().copied())
            .collect()
    }

    /// Driver of every net, `None` for undriven nets. Multiply driven nets
    /// keep their first driver.
    pub fn net_sources(&self) -> Vec<Option<NetSource>> {
        let mut sources = vec![None; self.net_count];
        let mut set = |net: NetId, src: NetSource| {
            if let Some(slot) = sources.get_mut(net.index()) {
                slot.get_or_insert(src);
            }
        };
        for i in 0..self.input_names.len() {
            set(NetId(i as u32), NetSource::PrimaryInput(i));
        }
        for (position, &(net, value)) in self.constants.iter().enumerate() {
            set(net, NetSource::ConstantInput { position, value });
        }
        for (gate, inst) in self.gates.iter().enumerate() {
            for (pin, &net) in inst.outputs.iter().enumerate() {
                set(net, NetSource::GatePin { gate, pin });
            }
        }
        sources
    }
}

/// Single-owner builder for [`Circuit`].
#[derive(Debug, Clone)]
pub struct CircuitBuilder {
    input_names: Vec<String>,
    constants: Vec<(NetId, bool)>,
    gates: Vec<GateInstance>,
    consumed: Vec<bool>,
}

impl CircuitBuilder {
    /// Starts a circuit with `n` primary inputs. Empty `names` yields
    /// `x0..x{n-1}`.
    pub fn new(n: usize, names: Vec<String>) -> Result<Self, BuildError> {
        if n == 0 {
            return Err(BuildError::NoInputs);
        }
        let input_names = if names.is_empty() {
            (0..n).map(|i| format!("x{i}")).collect()
        } else if names.len() == n {
            names
        } else {
            return Err(BuildError::NameCount {
                expected: n,
                actual: names.len(),
            });
        };
        Ok(CircuitBuilder {
            input_names,
            constants: Vec::new(),
            gates: Vec::new(),
            consumed: vec![false; n],
        })
    }

    pub fn input(&self, position: usize) -> NetId {
        assert!(
            position < self.input_names.len(),
            "input {position} out of range"
        );
        NetId(position as u32)
    }

    pub fn net_count(&self) -> usize {
        self.consumed.len()
    }

    pub fn gate_count(&self) -> usize {
        self.gates.len()
    }

    pub fn constant_count(&self) -> usize {
        self.constants.len()
    }

    pub fn gates(&self) -> &[GateInstance] {
        &self.gates
    }

    fn fresh(&mut self) -> NetId {
        let id = NetId(self.consumed.len() as u32);
        self.consumed.push(false);
        id
    }

    pub fn add_constant(&mut self, value: bool) -> NetId {
        let net = self.fresh();
        self.constants.push((net, value));
        net
    }

    /// Checks that `net` exists and is still unconsumed.
    pub fn check_available(&self, net: NetId) -> Result<(), BuildError> {
        match self.consumed.get(net.index()) {
            None => Err(BuildError::UnknownNet(net)),
            Some(true) => Err(BuildError::FanOut(net)),
            Some(false) => Ok(()),
        }
    }

    /// Appends a gate reading `inputs` and returns its fresh output nets.
    pub fn add_gate(&mut self, kind: GateKind, inputs: &[NetId]) -> Result<Vec<NetId>, BuildError> {
        if inputs.len() != kind.arity() {
            return Err(GateError::ArityMismatch {
                kind,
                expected: kind.arity(),
                actual: inputs.len(),
            }
            .into());
        }
        for (i, &net) in inputs.iter().enumerate() {
            self.check_available(net)?;
            if inputs[..i].contains(&net) {
                return Err(BuildError::FanOut(net));
            }
        }
        for &net in inputs {
            self.consumed[net.index()] = true;
        }
        let outputs: Vec<NetId> = (0..kind.arity()).map(|_| self.fresh()).collect();
        self.gates.push(GateInstance {
            kind,
            inputs: inputs.to_vec(),
            outputs: outputs.clone(),
        });
        Ok(outputs)
    }

    /// Names the primary outputs; every other unconsumed net becomes garbage,
    /// in ascending net order.
    pub fn finalize(self, primary_outputs: Vec<(String, NetId)>) -> Result<Circuit, BuildError> {
        let mut names = HashSet::new();
        let mut nets = HashSet::new();
        for (name, net) in &primary_outputs {
            self.check_available(*net).map_err(|e| match e {
                BuildError::FanOut(n) => BuildError::ConsumedOutput(n),
                other => other,
            })?;
            if !nets.insert(*net) {
                return Err(BuildError::DuplicateOutputNet(*net));
            }
            if !names.insert(name.as_str()) {
                return Err(BuildError::DuplicateName(name.clone()));
            }
        }
        let garbage: Vec<NetId> = (0..self.consumed.len())
            .map(|i| NetId(i as u32))
            .filter(|n| !self.consumed[n.index()] && !nets.contains(n))
            .collect();
        let width = self.input_names.len() + self.constants.len();
        let outputs = primary_outputs.len() + garbage.len();
        if width != outputs {
            return Err(BuildError::Width {
                inputs: width,
                outputs,
            });
        }
        Ok(Circuit {
            input_names: self.input_names,
            constants: self.constants,
            net_count: self.consumed.len(),
            gates: self.gates,
            outputs: primary_outputs,
            garbage,
        })
    }
}

/// One structural problem found by [`validate_structure`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// Net referenced but outside `0..net_count`.
    UnknownNet { net: NetId },
    /// Net with no driver.
    Undriven { net: NetId },
    /// Net driven more than once.
    MultipleDrivers { net: NetId, drivers: usize },
    /// Net read by more than one gate pin or output designation.
    FanOut { net: NetId, readers: usize },
    /// Gate reads a net that is not produced before it.
    Feedback { gate: usize, net: NetId },
    /// Gate whose pin lists disagree with its arity.
    Arity { gate: usize },
    /// Net that is neither consumed nor listed as an output.
    Dangling { net: NetId },
    /// Net listed as an output although a gate consumes it.
    ConsumedOutput { net: NetId },
    /// Input and output line counts differ.
    Width { inputs: usize, outputs: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::UnknownNet { net } => write!(f, "net {net} does not exist"),
            Violation::Undriven { net } => write!(f, "net {net} has no driver"),
            Violation::MultipleDrivers { net, drivers } => {
                write!(f, "net {net} has {drivers} drivers")
            }
            Violation::FanOut { net, readers } => {
                write!(f, "fan-out: net {net} has {readers} readers")
            }
            Violation::Feedback { gate, net } => {
                write!(
                    f,
                    "feedback: gate {gate} reads net {net} before it is produced"
                )
            }
            Violation::Arity { gate } => write!(f, "gate {gate} has wrong pin count"),
            Violation::Dangling { net } => write!(f, "net {net} is neither read nor an output"),
            Violation::ConsumedOutput { net } => {
                write!(f, "net {net} is both consumed and an output")
            }
            Violation::Width { inputs, outputs } => {
                write!(f, "width: {inputs} input lines vs {outputs} output lines")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StructuralReport {
    pub violations: Vec<Violation>,
    pub input_width: usize,
    pub output_width: usize,
}

impl StructuralReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Re-checks the single-driver, single-reader, acyclicity and width rules.
pub fn validate_structure(circuit: &Circuit) -> StructuralReport {
    let n = circuit.net_count;
    let mut violations = Vec::new();
    let mut drivers = vec![0usize; n];
    let mut gate_readers = vec![0usize; n];
    let mut output_refs = vec![0usize; n];
    // index of the gate producing each net; primary inputs and constants are -1
    let mut produced_by: Vec<Option<isize>> = vec![None; n];

    let mut drive = |net: NetId, by: isize, violations: &mut Vec<Violation>| {
        if net.index() >= n {
            violations.push(Violation::UnknownNet { net });
            return;
        }
        drivers[net.index()] += 1;
        produced_by[net.index()].get_or_insert(by);
    };
    for i in 0..circuit.input_names.len() {
        drive(NetId(i as u32), -1, &mut violations);
    }
    for &(net, _) in &circuit.constants {
        drive(net, -1, &mut violations);
    }
    for (g, inst) in circuit.gates.iter().enumerate() {
        if inst.inputs.len() != inst.kind.arity() || inst.outputs.len() != inst.kind.arity() {
            violations.push(Violation::Arity { gate: g });
        }
        for &net in &inst.outputs {
            drive(net, g as isize, &mut violations);
        }
    }

    for (g, inst) in circuit.gates.iter().enumerate() {
        for &net in &inst.inputs {
            if net.index() >= n {
                violations.push(Violation::UnknownNet { net });
                continue;
            }
            gate_readers[net.index()] += 1;
            match produced_by[net.index()] {
                Some(p) if p < g as isize => {}
                Some(_) => violations.push(Violation::Feedback { gate: g, net }),
                None => {}
            }
        }
    }
    for net in circuit.output_lines() {
        if net.index() >= n {
            violations.push(Violation::UnknownNet { net });
        } else {
            output_refs[net.index()] += 1;
        }
    }

    for i in 0..n {
        let net = NetId(i as u32);
        match drivers[i] {
            0 => violations.push(Violation::Undriven { net }),
            1 => {}
            d => violations.push(Violation::MultipleDrivers { net, drivers: d }),
        }
        let readers = gate_readers[i] + output_refs[i];
        if readers > 1 {
            violations.push(Violation::FanOut { net, readers });
        }
        if gate_readers[i] > 0 && output_refs[i] > 0 {
            violations.push(Violation::ConsumedOutput { net });
        }
        if readers == 0 {
            violations.push(Violation::Dangling { net });
        }
    }

    let input_width = circuit.width();
    let output_width = circuit.output_width();
    if input_width != output_width {
        violations.push(Violation::Width {
            inputs: input_width,
            outputs: output_width,
        });
    }
    StructuralReport {
        violations,
        input_width,
        output_width,
    }
}

/// Longest gate chain from any input line to any output line.
pub fn depth(circuit: &Circuit) -> usize {
    let mut level = vec![0usize; circuit.net_count];
    let mut deepest = 0;
    for inst in &circuit.gates {
        let d = 1 + inst
            .inputs
            .iter()
            .filter_map(|n| level.get(n.index()))
            .copied()
            .max()
            .unwrap_or(0);
        for n in &inst.outputs {
            if let Some(slot) = level.get_mut(n.index()) {
                *slot = d;
            }
        }
        deepest = deepest.max(d);
    }
    deepest
}
