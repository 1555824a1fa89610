// SPDX-License-Identifier: Apache-2.0
//! Forward and inverse circuit simulation.
//!
//! [`simulate`] and [`simulate_inverse`] evaluate one vector at a time via
//! the scalar gate functions. Exhaustive enumeration goes through
//! [`LaneSimulator`], which evaluates 64 input words per pass using
//! bit-sliced `u64` lanes, and can split the input space across threads.

use thiserror::Error;

use crate::exec::Exec;
use crate::gate::{eval_gate, eval_lanes, inverse_eval_gate, inverse_eval_lanes, GateKind};
use crate::netlist::{validate_structure, Circuit};

/// Default maximum width `W` for exhaustive enumeration.
pub const DEFAULT_EXHAUSTIVE_LIMIT: usize = 20;

/// Hard ceiling on exhaustive enumeration; permutation entries are `u32`.
pub const MAX_EXHAUSTIVE_WIDTH: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimError {
    #[error("expected {expected} bits, got {actual}")]
    InputLength { expected: usize, actual: usize },
    #[error("width {width} exceeds the exhaustive limit of {limit}; use sampled verification")]
    TooWide { width: usize, limit: usize },
    #[error("circuit cannot be simulated: {0}")]
    Malformed(String),
    #[error("inputs {first:#x} and {second:#x} both map to {image:#x}")]
    NotBijective { first: u64, second: u64, image: u64 },
}

fn check_len(expected: usize, actual: usize) -> Result<(), SimError> {
    if expected == actual {
        Ok(())
    } else {
        Err(SimError::InputLength { expected, actual })
    }
}

fn malformed(msg: impl Into<String>) -> SimError {
    SimError::Malformed(msg.into())
}

/// Evaluates the circuit on one primary-input vector. Returns the primary
/// outputs in declaration order and the garbage outputs in garbage order.
pub fn simulate(circuit: &Circuit, inputs: &[bool]) -> Result<(Vec<bool>, Vec<bool>), SimError> {
    check_len(circuit.primary_input_count(), inputs.len())?;
    let mut values: Vec<Option<bool>> = vec![None; circuit.net_count()];
    let set = |values: &mut [Option<bool>], net: usize, v: bool| -> Result<(), SimError> {
        *values
            .get_mut(net)
            .ok_or_else(|| malformed(format!("net {net} out of range")))? = Some(v);
        Ok(())
    };
    for (i, &v) in inputs.iter().enumerate() {
        set(&mut values, i, v)?;
    }
    for &(net, v) in circuit.constants() {
        set(&mut values, net.index(), v)?;
    }
    for (g, inst) in circuit.gates().iter().enumerate() {
        let ins = inst
            .inputs
            .iter()
            .map(|n| {
                values
                    .get(n.index())
                    .copied()
                    .flatten()
                    .ok_or_else(|| malformed(format!("gate {g} reads unset net {n}")))
            })
            .collect::<Result<Vec<bool>, _>>()?;
        let outs = eval_gate(inst.kind, &ins).map_err(|e| malformed(e.to_string()))?;
        if outs.len() != inst.outputs.len() {
            return Err(malformed(format!("gate {g} has wrong pin count")));
        }
        for (n, v) in inst.outputs.iter().zip(outs) {
            set(&mut values, n.index(), v)?;
        }
    }
    let read = |n: crate::netlist::NetId| {
        values
            .get(n.index())
            .copied()
            .flatten()
            .ok_or_else(|| malformed(format!("output net {n} is never set")))
    };
    let primary = circuit
        .primary_outputs()
        .iter()
        .map(|(_, n)| read(*n))
        .collect::<Result<Vec<_>, _>>()?;
    let garbage = circuit
        .garbage_outputs()
        .iter()
        .map(|&n| read(n))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((primary, garbage))
}

/// Runs the circuit backwards from a full output vector (primary outputs,
/// then garbage) to the full input vector (primary inputs, then constants).
///
/// Every `W`-bit vector has a preimage. Constant positions that differ from
/// their declared values mean the query lies outside the image of legal
/// inputs.
pub fn simulate_inverse(circuit: &Circuit, all_outputs: &[bool]) -> Result<Vec<bool>, SimError> {
    let report = validate_structure(circuit);
    if !report.passed() {
        return Err(malformed(report.violations[0].to_string()));
    }
    check_len(circuit.output_width(), all_outputs.len())?;
    let mut values: Vec<Option<bool>> = vec![None; circuit.net_count()];
    for (net, &v) in circuit.output_lines().iter().zip(all_outputs) {
        values[net.index()] = Some(v);
    }
    for (g, inst) in circuit.gates().iter().enumerate().rev() {
        let outs = inst
            .outputs
            .iter()
            .map(|n| {
                values[n.index()].ok_or_else(|| malformed(format!("gate {g} output {n} unset")))
            })
            .collect::<Result<Vec<bool>, _>>()?;
        let ins = inverse_eval_gate(inst.kind, &outs).map_err(|e| malformed(e.to_string()))?;
        for (n, v) in inst.inputs.iter().zip(ins) {
            values[n.index()] = Some(v);
        }
    }
    circuit
        .input_lines()
        .iter()
        .map(|n| values[n.index()].ok_or_else(|| malformed(format!("input net {n} unset"))))
        .collect()
}

/// Full forward evaluation over all `W` lines: constants are treated as free
/// inputs. Input and output vectors follow the line orders of
/// [`Circuit::input_lines`] and [`Circuit::output_lines`].
pub fn simulate_lines(circuit: &Circuit, lines: &[bool]) -> Result<Vec<bool>, SimError> {
    let sim = LaneSimulator::new(circuit)?;
    check_len(sim.width(), lines.len())?;
    let inputs: Vec<u64> = lines.iter().map(|&b| b as u64).collect();
    let mut out = vec![0u64; sim.output_width()];
    sim.forward(&inputs, &mut sim.scratch(), &mut out);
    Ok(out.into_iter().map(|w| w & 1 == 1).collect())
}

#[derive(Debug, Clone, Copy)]
struct CompiledGate {
    kind: GateKind,
    inputs: [usize; 3],
    outputs: [usize; 3],
}

/// A circuit lowered to flat net indices for 64-lane evaluation.
#[derive(Debug, Clone)]
pub struct LaneSimulator {
    net_count: usize,
    input_nets: Vec<usize>,
    output_nets: Vec<usize>,
    gates: Vec<CompiledGate>,
    invertible: bool,
}

impl LaneSimulator {
    /// Lowers `circuit`. Fails if some gate reads a net that is not driven
    /// earlier, or an output net is never driven.
    pub fn new(circuit: &Circuit) -> Result<Self, SimError> {
        let net_count = circuit.net_count();
        let mut known = vec![false; net_count];
        let mark = |known: &mut [bool], i: usize| -> Result<(), SimError> {
            *known
                .get_mut(i)
                .ok_or_else(|| malformed(format!("net {i} out of range")))? = true;
            Ok(())
        };
        let input_nets: Vec<usize> = circuit.input_lines().iter().map(|n| n.index()).collect();
        for &i in &input_nets {
            mark(&mut known, i)?;
        }
        let mut gates = Vec::with_capacity(circuit.gates().len());
        for (g, inst) in circuit.gates().iter().enumerate() {
            let arity = inst.kind.arity();
            if inst.inputs.len() != arity || inst.outputs.len() != arity {
                return Err(malformed(format!("gate {g} has wrong pin count")));
            }
            let mut cg = CompiledGate {
                kind: inst.kind,
                inputs: [0; 3],
                outputs: [0; 3],
            };
            for (slot, n) in cg.inputs.iter_mut().zip(&inst.inputs) {
                if !known.get(n.index()).copied().unwrap_or(false) {
                    return Err(malformed(format!("gate {g} reads unset net {n}")));
                }
                *slot = n.index();
            }
            for (slot, n) in cg.outputs.iter_mut().zip(&inst.outputs) {
                mark(&mut known, n.index())?;
                *slot = n.index();
            }
            gates.push(cg);
        }
        let output_nets: Vec<usize> = circuit.output_lines().iter().map(|n| n.index()).collect();
        if let Some(&n) = output_nets
            .iter()
            .find(|&&n| !known.get(n).copied().unwrap_or(false))
        {
            return Err(malformed(format!("output net {n} is never set")));
        }
        Ok(LaneSimulator {
            net_count,
            input_nets,
            output_nets,
            gates,
            invertible: validate_structure(circuit).passed(),
        })
    }

    pub fn width(&self) -> usize {
        self.input_nets.len()
    }

    pub fn output_width(&self) -> usize {
        self.output_nets.len()
    }

    /// Whether [`LaneSimulator::inverse`] is meaningful (structure valid).
    pub fn invertible(&self) -> bool {
        self.invertible
    }

    pub fn scratch(&self) -> Vec<u64> {
        vec![0; self.net_count]
    }

    /// Forward pass: `inputs[j]` holds 64 lanes of input line `j`.
    pub fn forward(&self, inputs: &[u64], nets: &mut [u64], outputs: &mut [u64]) {
        for (&n, &v) in self.input_nets.iter().zip(inputs) {
            nets[n] = v;
        }
        for g in &self.gates {
            let arity = g.kind.arity();
            let mut x = [0u64; 3];
            for k in 0..arity {
                x[k] = nets[g.inputs[k]];
            }
            let y = eval_lanes(g.kind, x);
            for k in 0..arity {
                nets[g.outputs[k]] = y[k];
            }
        }
        for (o, &n) in outputs.iter_mut().zip(&self.output_nets) {
            *o = nets[n];
        }
    }

    /// Inverse pass from output lanes back to input lanes.
    pub fn inverse(&self, outputs: &[u64], nets: &mut [u64], inputs: &mut [u64]) {
        debug_assert!(self.invertible);
        for (&n, &v) in self.output_nets.iter().zip(outputs) {
            nets[n] = v;
        }
        for g in self.gates.iter().rev() {
            let arity = g.kind.arity();
            let mut y = [0u64; 3];
            for k in 0..arity {
                y[k] = nets[g.outputs[k]];
            }
            let x = inverse_eval_lanes(g.kind, y);
            for k in 0..arity {
                nets[g.inputs[k]] = x[k];
            }
        }
        for (i, &n) in inputs.iter_mut().zip(&self.input_nets) {
            *i = nets[n];
        }
    }

    /// Maps every `W`-bit input word to its output word, line 0 most
    /// significant. The result does not depend on `exec`.
    pub fn exhaustive_map(&self, limit: usize, exec: Exec) -> Result<Vec<u32>, SimError> {
        let width = self.width();
        let limit = limit.min(MAX_EXHAUSTIVE_WIDTH);
        if width > limit {
            return Err(SimError::TooWide { width, limit });
        }
        if self.output_width() != width {
            return Err(malformed(format!(
                "{width} input lines but {} output lines",
                self.output_width()
            )));
        }
        let mut map = vec![0u32; 1usize << width];
        // Work items of BLOCK lanes-words keep scratch allocation off the hot path.
        const BLOCK: usize = 64 * 256;
        exec.for_each_chunk_mut(&mut map, BLOCK, |block_index, block| {
            self.fill_block((block_index * BLOCK) as u64, block);
        });
        Ok(map)
    }

    fn fill_block(&self, base: u64, block: &mut [u32]) {
        const PATTERNS: [u64; 6] = [
            0xAAAA_AAAA_AAAA_AAAA,
            0xCCCC_CCCC_CCCC_CCCC,
            0xF0F0_F0F0_F0F0_F0F0,
            0xFF00_FF00_FF00_FF00,
            0xFFFF_0000_FFFF_0000,
            0xFFFF_FFFF_0000_0000,
        ];
        let width = self.width();
        let mut inputs = vec![0u64; width];
        let mut nets = self.scratch();
        let mut outs = vec![0u64; width];
        for (i, chunk) in block.chunks_mut(64).enumerate() {
            let chunk_base = base + 64 * i as u64;
            for (line, word) in inputs.iter_mut().enumerate() {
                let pos = width - 1 - line;
                *word = if pos < 6 {
                    PATTERNS[pos]
                } else if (chunk_base >> pos) & 1 == 1 {
                    u64::MAX
                } else {
                    0
                };
            }
            self.forward(&inputs, &mut nets, &mut outs);
            for (lane, slot) in chunk.iter_mut().enumerate() {
                *slot = outs
                    .iter()
                    .fold(0u32, |acc, &o| (acc << 1) | ((o >> lane) & 1) as u32);
            }
        }
    }
}

/// First pair of distinct input words sharing an output word.
pub fn find_collision(map: &[u32]) -> Option<(u64, u64, u64)> {
    let mut seen: Vec<u32> = vec![u32::MAX; map.len()];
    for (input, &image) in map.iter().enumerate() {
        let slot = seen.get_mut(image as usize)?;
        if *slot != u32::MAX {
            return Some((*slot as u64, input as u64, image as u64));
        }
        *slot = input as u32;
    }
    None
}

/// The circuit's `2^W` input-to-output mapping, checked to be a permutation.
pub fn exhaustive_permutation(circuit: &Circuit, limit: usize) -> Result<Vec<u32>, SimError> {
    exhaustive_permutation_with(circuit, limit, Exec::default())
}

pub fn exhaustive_permutation_with(
    circuit: &Circuit,
    limit: usize,
    exec: Exec,
) -> Result<Vec<u32>, SimError> {
    let map = LaneSimulator::new(circuit)?.exhaustive_map(limit, exec)?;
    match find_collision(&map) {
        Some((first, second, image)) => Err(SimError::NotBijective {
            first,
            second,
            image,
        }),
        None => Ok(map),
    }
}
