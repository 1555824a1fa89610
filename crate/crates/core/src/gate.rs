// SPDX-License-Identifier: Apache-2.0
//! The reversible gate catalog: Feynman (CNOT), MUX and Fredkin.
//!
//! Every gate is an `N×N` bijection over bit-vectors. Line `A` is the first
//! input and is the most significant bit whenever a vector is encoded as an
//! index.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GateError {
    #[error("{kind} gate expects {expected} lines, got {actual}")]
    ArityMismatch {
        kind: GateKind,
        expected: usize,
        actual: usize,
    },
    #[error("unknown gate kind `{0}`")]
    UnknownKind(String),
}

/// A catalog gate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GateKind {
    /// `(A, B) -> (A, A^B)`.
    Feynman,
    /// `(A, B, C) -> (A, A^B^C, A'C ^ AB)`.
    Mux,
    /// Controlled swap: `(A, B, C) -> (A, A'B ^ AC, A'C ^ AB)`.
    Fredkin,
}

impl GateKind {
    pub const ALL: [GateKind; 3] = [GateKind::Feynman, GateKind::Mux, GateKind::Fredkin];

    pub const fn arity(self) -> usize {
        match self {
            GateKind::Feynman => 2,
            GateKind::Mux | GateKind::Fredkin => 3,
        }
    }

    pub const fn quantum_cost(self) -> u32 {
        match self {
            GateKind::Feynman => 1,
            GateKind::Mux => 4,
            GateKind::Fredkin => 5,
        }
    }

    /// Lowercase keyword used by the netlist format.
    pub const fn keyword(self) -> &'static str {
        match self {
            GateKind::Feynman => "feynman",
            GateKind::Mux => "mux",
            GateKind::Fredkin => "fredkin",
        }
    }

    fn check_arity(self, len: usize) -> Result<(), GateError> {
        if len == self.arity() {
            Ok(())
        } else {
            Err(GateError::ArityMismatch {
                kind: self,
                expected: self.arity(),
                actual: len,
            })
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

impl FromStr for GateKind {
    type Err = GateError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "feynman" => Ok(GateKind::Feynman),
            "mux" => Ok(GateKind::Mux),
            "fredkin" => Ok(GateKind::Fredkin),
            other => Err(GateError::UnknownKind(other.to_string())),
        }
    }
}

/// Evaluates `kind` on one input vector.
pub fn eval_gate(kind: GateKind, inputs: &[bool]) -> Result<Vec<bool>, GateError> {
    kind.check_arity(inputs.len())?;
    Ok(match kind {
        GateKind::Feynman => {
            let (a, b) = (inputs[0], inputs[1]);
            vec![a, a ^ b]
        }
        GateKind::Mux => {
            let (a, b, c) = (inputs[0], inputs[1], inputs[2]);
            vec![a, a ^ b ^ c, (!a & c) ^ (a & b)]
        }
        GateKind::Fredkin => {
            let (a, b, c) = (inputs[0], inputs[1], inputs[2]);
            vec![a, (!a & b) ^ (a & c), (!a & c) ^ (a & b)]
        }
    })
}

/// Recovers the unique input vector that `kind` maps onto `outputs`.
pub fn inverse_eval_gate(kind: GateKind, outputs: &[bool]) -> Result<Vec<bool>, GateError> {
    kind.check_arity(outputs.len())?;
    Ok(match kind {
        GateKind::Feynman | GateKind::Fredkin => eval_gate(kind, outputs)?,
        GateKind::Mux => {
            let (p, q, r) = (outputs[0], outputs[1], outputs[2]);
            if p {
                vec![true, r, q ^ r ^ true]
            } else {
                vec![false, q ^ r, r]
            }
        }
    })
}

/// Bit-sliced forward evaluation: each `u64` carries 64 independent lanes.
///
/// Unused trailing slots of the returned array are zero.
#[inline]
pub fn eval_lanes(kind: GateKind, x: [u64; 3]) -> [u64; 3] {
    let [a, b, c] = x;
    match kind {
        GateKind::Feynman => [a, a ^ b, 0],
        GateKind::Mux => [a, a ^ b ^ c, (!a & c) ^ (a & b)],
        GateKind::Fredkin => [a, (!a & b) ^ (a & c), (!a & c) ^ (a & b)],
    }
}

/// Bit-sliced inverse evaluation.
#[inline]
pub fn inverse_eval_lanes(kind: GateKind, y: [u64; 3]) -> [u64; 3] {
    match kind {
        GateKind::Feynman | GateKind::Fredkin => eval_lanes(kind, y),
        GateKind::Mux => {
            let [p, q, r] = y;
            let qr = q ^ r;
            [p, (p & r) | (!p & qr), (p & !qr) | (!p & r)]
        }
    }
}

/// Encodes a bit-vector as an index, first element most significant.
pub fn bits_to_index(bits: &[bool]) -> usize {
    bits.iter().fold(0, |acc, &b| (acc << 1) | b as usize)
}

/// Decodes the low `width` bits of `index`, most significant first.
pub fn index_to_bits(index: usize, width: usize) -> Vec<bool> {
    (0..width).rev().map(|i| (index >> i) & 1 == 1).collect()
}

/// The gate's truth table as a permutation of `0..2^arity`.
pub fn truth_permutation(kind: GateKind) -> Vec<usize> {
    let arity = kind.arity();
    (0..1usize << arity)
        .map(|i| {
            let out = eval_gate(kind, &index_to_bits(i, arity)).expect("arity matches");
            bits_to_index(&out)
        })
        .collect()
}

/// Every `(input, output)` pair whose Hamming weight differs, in index order.
pub fn conservativeness_violations(kind: GateKind) -> Vec<(Vec<bool>, Vec<bool>)> {
    let arity = kind.arity();
    let weight = |v: &[bool]| v.iter().filter(|&&b| b).count();
    (0..1usize << arity)
        .filter_map(|i| {
            let input = index_to_bits(i, arity);
            let output = eval_gate(kind, &input).expect("arity matches");
            (weight(&input) != weight(&output)).then_some((input, output))
        })
        .collect()
}

pub fn is_conservative(kind: GateKind) -> bool {
    conservativeness_violations(kind).is_empty()
}

pub fn is_self_inverse(kind: GateKind) -> bool {
    let arity = kind.arity();
    (0..1usize << arity).all(|i| {
        let input = index_to_bits(i, arity);
        let once = eval_gate(kind, &input).expect("arity matches");
        eval_gate(kind, &once).expect("arity matches") == input
    })
}
