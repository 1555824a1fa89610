// SPDX-License-Identifier: Apache-2.0
//! Cost metrics, reversibility verification, functional equivalence and the
//! MUX-vs-Fredkin comparison.

use std::fmt::Write as _;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::exec::Exec;
use crate::gate::GateKind;
use crate::netlist::{depth, validate_structure, Circuit, StructuralReport};
use crate::pla::{truth_table_of, PlaError, SopSpec};
use crate::sim::{find_collision, LaneSimulator, SimError, DEFAULT_EXHAUSTIVE_LIMIT};
use crate::synth::{synthesize_rpla, GateFamily, SynthError};

/// Boltzmann constant in J/K, to the five significant figures used for
/// energy estimates.
pub const BOLTZMANN: f64 = 1.3807e-23;

pub const DEFAULT_SAMPLES: u64 = 1_000_000;
pub const DEFAULT_SEED: u64 = 0x5EED_2013;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("temperature must be positive, got {0} K")]
    NonPositiveTemperature(f64),
    #[error("circuit has {circuit_inputs} inputs / {circuit_outputs} outputs but the spec has {spec_inputs} / {spec_outputs}")]
    ArityMismatch {
        circuit_inputs: usize,
        circuit_outputs: usize,
        spec_inputs: usize,
        spec_outputs: usize,
    },
    #[error("mux and fredkin designs differ in gate placement at gate {0}")]
    NotIsomorphic(usize),
    #[error(transparent)]
    Synth(#[from] SynthError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Pla(#[from] PlaError),
}

/// Minimum dissipation for erasing `bits_erased` bits at `temperature`
/// kelvin: `bits * k * T * ln 2`.
pub fn landauer_energy(bits_erased: u64, temperature: f64) -> Result<f64, AnalysisError> {
    if temperature.is_nan() || temperature <= 0.0 {
        return Err(AnalysisError::NonPositiveTemperature(temperature));
    }
    Ok(bits_erased as f64 * BOLTZMANN * temperature * std::f64::consts::LN_2)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct GateCounts {
    pub feynman: usize,
    pub mux: usize,
    pub fredkin: usize,
}

impl GateCounts {
    pub fn get(&self, kind: GateKind) -> usize {
        match kind {
            GateKind::Feynman => self.feynman,
            GateKind::Mux => self.mux,
            GateKind::Fredkin => self.fredkin,
        }
    }

    pub fn total(&self) -> usize {
        self.feynman + self.mux + self.fredkin
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricsReport {
    pub quantum_cost: u64,
    pub constant_inputs: usize,
    pub garbage_outputs: usize,
    pub constant_zeros: usize,
    pub constant_ones: usize,
    pub primary_inputs: usize,
    pub primary_outputs: usize,
    pub depth: usize,
    pub width: usize,
    pub gate_counts: GateCounts,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub temperature_k: Option<f64>,
    /// Landauer estimate treating every garbage bit as erased.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub landauer_j: Option<f64>,
}

pub fn compute_metrics(
    circuit: &Circuit,
    temperature: Option<f64>,
) -> Result<MetricsReport, AnalysisError> {
    let mut gate_counts = GateCounts::default();
    let mut quantum_cost = 0u64;
    for g in circuit.gates() {
        quantum_cost += g.kind.quantum_cost() as u64;
        match g.kind {
            GateKind::Feynman => gate_counts.feynman += 1,
            GateKind::Mux => gate_counts.mux += 1,
            GateKind::Fredkin => gate_counts.fredkin += 1,
        }
    }
    let constant_ones = circuit.constants().iter().filter(|(_, v)| *v).count();
    let garbage_outputs = circuit.garbage_outputs().len();
    let landauer_j = temperature
        .map(|t| landauer_energy(garbage_outputs as u64, t))
        .transpose()?;
    Ok(MetricsReport {
        quantum_cost,
        constant_inputs: circuit.constants().len(),
        garbage_outputs,
        constant_zeros: circuit.constants().len() - constant_ones,
        constant_ones,
        primary_inputs: circuit.primary_input_count(),
        primary_outputs: circuit.primary_outputs().len(),
        depth: depth(circuit),
        width: circuit.width(),
        gate_counts,
        temperature_k: temperature,
        landauer_j,
    })
}

impl MetricsReport {
    /// Single-line `key=value` form with stable field names.
    pub fn to_key_values(&self) -> String {
        let mut s = format!(
            "quantum_cost={} constant_inputs={} garbage_outputs={} constant_zeros={} constant_ones={} depth={} width={} gate_counts.feynman={} gate_counts.mux={} gate_counts.fredkin={}",
            self.quantum_cost,
            self.constant_inputs,
            self.garbage_outputs,
            self.constant_zeros,
            self.constant_ones,
            self.depth,
            self.width,
            self.gate_counts.feynman,
            self.gate_counts.mux,
            self.gate_counts.fredkin,
        );
        if let Some(e) = self.landauer_j {
            write!(s, " landauer_j={e:.4e}").unwrap();
        }
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "quantum cost      {}", self.quantum_cost).unwrap();
        writeln!(
            s,
            "constant inputs   {} ({} zero, {} one)",
            self.constant_inputs, self.constant_zeros, self.constant_ones
        )
        .unwrap();
        writeln!(s, "garbage outputs   {}", self.garbage_outputs).unwrap();
        writeln!(s, "depth             {}", self.depth).unwrap();
        writeln!(s, "width             {}", self.width).unwrap();
        writeln!(
            s,
            "gates             feynman={} mux={} fredkin={}",
            self.gate_counts.feynman, self.gate_counts.mux, self.gate_counts.fredkin
        )
        .unwrap();
        if let (Some(t), Some(e)) = (self.temperature_k, self.landauer_j) {
            writeln!(
                s,
                "landauer estimate {e:.4e} J at {t} K (garbage bits erased)"
            )
            .unwrap();
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum BijectivityVerdict {
    ProvedExhaustive {
        width: usize,
    },
    SampledNoCounterexample {
        samples: u64,
        seed: u64,
    },
    /// Two distinct input words (line 0 first) with the same image.
    Counterexample {
        first: Vec<bool>,
        second: Vec<bool>,
        image: Vec<bool>,
    },
    /// Inverse simulation failed to recover a sampled input.
    RoundTripFailure {
        input: Vec<bool>,
    },
    /// The circuit is too malformed to simulate.
    NotChecked {
        reason: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub width: usize,
    pub structural: StructuralReport,
    pub bijective: BijectivityVerdict,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.structural.passed()
            && matches!(
                self.bijective,
                BijectivityVerdict::ProvedExhaustive { .. }
                    | BijectivityVerdict::SampledNoCounterexample { .. }
            )
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        if self.structural.passed() {
            writeln!(s, "structure: pass").unwrap();
        } else {
            writeln!(s, "structure: FAIL").unwrap();
            for v in &self.structural.violations {
                writeln!(s, "  - {v}").unwrap();
            }
        }
        let bits = |v: &[bool]| {
            v.iter()
                .map(|&b| if b { '1' } else { '0' })
                .collect::<String>()
        };
        match &self.bijective {
            BijectivityVerdict::ProvedExhaustive { width } => {
                writeln!(s, "bijective: proved (W={width})").unwrap()
            }
            BijectivityVerdict::SampledNoCounterexample { samples, seed } => writeln!(
                s,
                "bijective: no counterexample in {samples} samples (W={}, seed={seed})",
                self.width
            )
            .unwrap(),
            BijectivityVerdict::Counterexample {
                first,
                second,
                image,
            } => writeln!(
                s,
                "bijective: COUNTEREXAMPLE {} and {} both map to {}",
                bits(first),
                bits(second),
                bits(image)
            )
            .unwrap(),
            BijectivityVerdict::RoundTripFailure { input } => {
                writeln!(s, "bijective: ROUND-TRIP FAILURE at {}", bits(input)).unwrap()
            }
            BijectivityVerdict::NotChecked { reason } => {
                writeln!(s, "bijective: not checked ({reason})").unwrap()
            }
        }
        s
    }
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyConfig {
    pub exhaustive_limit: usize,
    pub samples: u64,
    pub seed: u64,
    pub exec: Exec,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            exhaustive_limit: DEFAULT_EXHAUSTIVE_LIMIT,
            samples: DEFAULT_SAMPLES,
            seed: DEFAULT_SEED,
            exec: Exec::default(),
        }
    }
}

fn word_to_bits(word: u64, width: usize) -> Vec<bool> {
    (0..width).rev().map(|i| (word >> i) & 1 == 1).collect()
}

/// Structural checks, then an exhaustive bijectivity proof when `W` is
/// within the limit, or seeded random sampling otherwise.
pub fn verify_reversibility(circuit: &Circuit, config: &VerifyConfig) -> VerificationReport {
    let structural = validate_structure(circuit);
    let width = circuit.width();
    let bijective = match check_bijective(circuit, config) {
        Ok(v) => v,
        Err(e) => BijectivityVerdict::NotChecked {
            reason: e.to_string(),
        },
    };
    VerificationReport {
        width,
        structural,
        bijective,
    }
}

fn check_bijective(
    circuit: &Circuit,
    config: &VerifyConfig,
) -> Result<BijectivityVerdict, SimError> {
    let sim = LaneSimulator::new(circuit)?;
    let width = sim.width();
    if sim.output_width() != width {
        return Err(SimError::Malformed(format!(
            "{width} input lines but {} output lines",
            sim.output_width()
        )));
    }
    if width
        <= config
            .exhaustive_limit
            .min(crate::sim::MAX_EXHAUSTIVE_WIDTH)
    {
        let map = sim.exhaustive_map(config.exhaustive_limit, config.exec)?;
        return Ok(match find_collision(&map) {
            Some((a, b, img)) => BijectivityVerdict::Counterexample {
                first: word_to_bits(a, width),
                second: word_to_bits(b, width),
                image: word_to_bits(img, width),
            },
            None => BijectivityVerdict::ProvedExhaustive { width },
        });
    }
    Ok(sampled_check(&sim, config))
}

fn batch_inputs(seed: u64, batch: u64, width: usize) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(batch);
    (0..width).map(|_| rng.next_u64()).collect()
}

fn lane_bits(lanes: &[u64], lane: usize) -> Vec<bool> {
    lanes.iter().map(|&w| (w >> lane) & 1 == 1).collect()
}

fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

struct BatchOutcome {
    hashes: Vec<(u64, u64)>,
    round_trip_failure: Option<Vec<bool>>,
}

fn sampled_check(sim: &LaneSimulator, config: &VerifyConfig) -> BijectivityVerdict {
    let width = sim.width();
    let samples = config.samples;
    let batches = samples.div_ceil(64);
    let outcomes = config.exec.map_range(batches as usize, |k| {
        let k = k as u64;
        let lanes_here = (samples - k * 64).min(64) as usize;
        let inputs = batch_inputs(config.seed, k, width);
        let mut nets = sim.scratch();
        let mut outs = vec![0u64; width];
        sim.forward(&inputs, &mut nets, &mut outs);
        let mut round_trip_failure = None;
        if sim.invertible() {
            let mut back = vec![0u64; width];
            sim.inverse(&outs, &mut nets, &mut back);
            let diff = back
                .iter()
                .zip(&inputs)
                .fold(0u64, |acc, (a, b)| acc | (a ^ b));
            let mask = if lanes_here == 64 {
                u64::MAX
            } else {
                (1u64 << lanes_here) - 1
            };
            if diff & mask != 0 {
                let lane = (diff & mask).trailing_zeros() as usize;
                round_trip_failure = Some(lane_bits(&inputs, lane));
            }
        }
        let hashes = (0..lanes_here)
            .map(|lane| {
                let mut h = 0u64;
                for group in outs.chunks(64) {
                    let word = group
                        .iter()
                        .fold(0u64, |acc, &o| (acc << 1) | ((o >> lane) & 1));
                    h = mix(h ^ word);
                }
                (h, k * 64 + lane as u64)
            })
            .collect();
        BatchOutcome {
            hashes,
            round_trip_failure,
        }
    });

    let mut all = Vec::with_capacity(samples as usize);
    for o in outcomes {
        if let Some(input) = o.round_trip_failure {
            return BijectivityVerdict::RoundTripFailure { input };
        }
        all.extend(o.hashes);
    }
    all.sort_unstable();

    let regenerate = |index: u64| {
        let inputs = batch_inputs(config.seed, index / 64, width);
        let mut nets = sim.scratch();
        let mut outs = vec![0u64; width];
        sim.forward(&inputs, &mut nets, &mut outs);
        let lane = (index % 64) as usize;
        (lane_bits(&inputs, lane), lane_bits(&outs, lane))
    };
    for group in all.chunk_by(|a, b| a.0 == b.0) {
        if group.len() < 2 {
            continue;
        }
        let decoded: Vec<_> = group.iter().map(|&(_, i)| regenerate(i)).collect();
        for (i, (xa, ya)) in decoded.iter().enumerate() {
            for (xb, yb) in &decoded[i + 1..] {
                if ya == yb && xa != xb {
                    return BijectivityVerdict::Counterexample {
                        first: xa.clone(),
                        second: xb.clone(),
                        image: ya.clone(),
                    };
                }
            }
        }
    }
    BijectivityVerdict::SampledNoCounterexample {
        samples,
        seed: config.seed,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Equivalence {
    Equivalent,
    Mismatch {
        input: u64,
        expected: Vec<bool>,
        actual: Vec<bool>,
    },
}

/// Compares the circuit's primary outputs (constants at their declared
/// values) against the spec's truth table on every input word.
pub fn functional_equivalence(
    circuit: &Circuit,
    spec: &SopSpec,
    limit: usize,
    exec: Exec,
) -> Result<Equivalence, AnalysisError> {
    let (n, m) = (spec.num_inputs(), spec.num_outputs());
    if circuit.primary_input_count() != n || circuit.primary_outputs().len() != m {
        return Err(AnalysisError::ArityMismatch {
            circuit_inputs: circuit.primary_input_count(),
            circuit_outputs: circuit.primary_outputs().len(),
            spec_inputs: n,
            spec_outputs: m,
        });
    }
    let table = truth_table_of(spec, limit)?;
    let sim = LaneSimulator::new(circuit)?;
    let constants: Vec<u64> = circuit
        .constants()
        .iter()
        .map(|&(_, v)| if v { u64::MAX } else { 0 })
        .collect();
    let rows = table.rows.len();
    let chunks = rows.div_ceil(64);
    let first_bad = exec.map_range(chunks, |k| {
        let base = (k * 64) as u64;
        let lanes_here = (rows - k * 64).min(64);
        let mut inputs: Vec<u64> = (0..n)
            .map(|line| {
                let pos = n - 1 - line;
                (0..lanes_here as u64).fold(0u64, |acc, l| acc | ((((base + l) >> pos) & 1) << l))
            })
            .collect();
        inputs.extend_from_slice(&constants);
        let mut nets = sim.scratch();
        let mut outs = vec![0u64; sim.output_width()];
        sim.forward(&inputs, &mut nets, &mut outs);
        (0..lanes_here).find_map(|lane| {
            let actual = outs[..m]
                .iter()
                .fold(0u64, |acc, &o| (acc << 1) | ((o >> lane) & 1));
            let input = base + lane as u64;
            (actual != table.rows[input as usize]).then_some((input, actual))
        })
    });
    Ok(match first_bad.into_iter().flatten().next() {
        None => Equivalence::Equivalent,
        Some((input, actual)) => Equivalence::Mismatch {
            input,
            expected: word_to_bits(table.rows[input as usize], m),
            actual: word_to_bits(actual, m),
        },
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub mux: MetricsReport,
    pub fredkin: MetricsReport,
    /// `QC(fredkin) - QC(mux)`.
    pub qc_delta: i64,
    pub plane_gate_count: usize,
}

impl ComparisonReport {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        type Column = fn(&MetricsReport) -> String;
        let rows: [(&str, Column); 7] = [
            ("quantum_cost", |r| r.quantum_cost.to_string()),
            ("constant_inputs", |r| r.constant_inputs.to_string()),
            ("garbage_outputs", |r| r.garbage_outputs.to_string()),
            ("depth", |r| r.depth.to_string()),
            ("gate_counts.feynman", |r| r.gate_counts.feynman.to_string()),
            ("gate_counts.mux", |r| r.gate_counts.mux.to_string()),
            ("gate_counts.fredkin", |r| r.gate_counts.fredkin.to_string()),
        ];
        writeln!(s, "{:<20} {:>8} {:>8}", "metric", "mux", "fredkin").unwrap();
        for (name, get) in rows {
            writeln!(
                s,
                "{:<20} {:>8} {:>8}",
                name,
                get(&self.mux),
                get(&self.fredkin)
            )
            .unwrap();
        }
        writeln!(s, "plane_gates={}", self.plane_gate_count).unwrap();
        writeln!(s, "qc_delta={}", self.qc_delta).unwrap();
        s
    }
}

/// Synthesizes both families and checks that they place gates identically.
pub fn compare_designs(spec: &SopSpec) -> Result<ComparisonReport, AnalysisError> {
    let mux = synthesize_rpla(spec, GateFamily::Mux)?;
    let fredkin = synthesize_rpla(spec, GateFamily::Fredkin)?;
    if mux.gates().len() != fredkin.gates().len()
        || mux.constants() != fredkin.constants()
        || mux.primary_outputs() != fredkin.primary_outputs()
        || mux.garbage_outputs() != fredkin.garbage_outputs()
    {
        return Err(AnalysisError::NotIsomorphic(
            mux.gates().len().min(fredkin.gates().len()),
        ));
    }
    let mut plane_gate_count = 0;
    for (i, (a, b)) in mux.gates().iter().zip(fredkin.gates()).enumerate() {
        let kinds_match = matches!(
            (a.kind, b.kind),
            (GateKind::Feynman, GateKind::Feynman) | (GateKind::Mux, GateKind::Fredkin)
        );
        if !kinds_match || a.inputs != b.inputs || a.outputs != b.outputs {
            return Err(AnalysisError::NotIsomorphic(i));
        }
        if a.kind == GateKind::Mux {
            plane_gate_count += 1;
        }
    }
    let mux_metrics = compute_metrics(&mux, None)?;
    let fredkin_metrics = compute_metrics(&fredkin, None)?;
    Ok(ComparisonReport {
        qc_delta: fredkin_metrics.quantum_cost as i64 - mux_metrics.quantum_cost as i64,
        mux: mux_metrics,
        fredkin: fredkin_metrics,
        plane_gate_count,
    })
}
