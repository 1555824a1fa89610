// SPDX-License-Identifier: Apache-2.0
//! Two-plane reversible PLA synthesis.
//!
//! The pipeline conditions literals with Feynman inverters and copy chains,
//! builds one AND chain per cube and one OR chain per output. The plane
//! gate is either MUX or Fredkin; both realize AND on `R` with `C = 0` and
//! OR on `R` with `B = 1`, so the two families produce identical wiring.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::gate::GateKind;
use crate::netlist::{BuildError, Circuit, CircuitBuilder, NetId};
use crate::pla::{Literal, SopSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GateFamily {
    #[default]
    Mux,
    Fredkin,
}

impl GateFamily {
    pub fn plane_gate(self) -> GateKind {
        match self {
            GateFamily::Mux => GateKind::Mux,
            GateFamily::Fredkin => GateKind::Fredkin,
        }
    }
}

impl fmt::Display for GateFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.plane_gate().keyword())
    }
}

impl FromStr for GateFamily {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "mux" => Ok(GateFamily::Mux),
            "fredkin" => Ok(GateFamily::Fredkin),
            other => Err(format!(
                "unknown gate family `{other}` (expected mux or fredkin)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SynthError {
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error("cannot build a chain over zero nets")]
    EmptyChain,
}

/// Per-variable literal use counts across all cubes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiteralDemand {
    pub positive: Vec<usize>,
    pub negative: Vec<usize>,
}

pub fn count_literal_demand(spec: &SopSpec) -> LiteralDemand {
    let n = spec.num_inputs();
    let mut demand = LiteralDemand {
        positive: vec![0; n],
        negative: vec![0; n],
    };
    for cube in &spec.cubes {
        for (i, lit) in cube.literals.iter().enumerate() {
            match lit {
                Literal::Positive => demand.positive[i] += 1,
                Literal::Negative => demand.negative[i] += 1,
                Literal::Absent => {}
            }
        }
    }
    demand
}

/// Produces `copies` nets equal to `net` with a linear chain of Feynman
/// copiers; each gate's `P` feeds the next gate and its `Q` is emitted.
pub fn build_fanout_tree(
    builder: &mut CircuitBuilder,
    net: NetId,
    copies: usize,
) -> Result<Vec<NetId>, SynthError> {
    builder.check_available(net)?;
    if copies == 0 {
        return Ok(Vec::new());
    }
    let mut out = Vec::with_capacity(copies);
    let mut carry = net;
    for _ in 1..copies {
        let zero = builder.add_constant(false);
        let pq = builder.add_gate(GateKind::Feynman, &[carry, zero])?;
        out.push(pq[1]);
        carry = pq[0];
    }
    out.push(carry);
    Ok(out)
}

/// Feynman NOT with a constant-1 target. Returns `(inverted, true_copy)`.
pub fn build_inverter(
    builder: &mut CircuitBuilder,
    net: NetId,
) -> Result<(NetId, NetId), SynthError> {
    builder.check_available(net)?;
    let one = builder.add_constant(true);
    let pq = builder.add_gate(GateKind::Feynman, &[net, one])?;
    Ok((pq[1], pq[0]))
}

/// Left-to-right AND over `literals`, using `plane(acc, lit, 0).R`.
pub fn build_and_chain(
    builder: &mut CircuitBuilder,
    family: GateFamily,
    literals: &[NetId],
) -> Result<NetId, SynthError> {
    let (&first, rest) = literals.split_first().ok_or(SynthError::EmptyChain)?;
    for &net in literals {
        builder.check_available(net)?;
    }
    let mut acc = first;
    for &lit in rest {
        let zero = builder.add_constant(false);
        acc = builder.add_gate(family.plane_gate(), &[acc, lit, zero])?[2];
    }
    Ok(acc)
}

/// Left-to-right OR over `terms`, using `plane(acc, 1, term).R`.
pub fn build_or_chain(
    builder: &mut CircuitBuilder,
    family: GateFamily,
    terms: &[NetId],
) -> Result<NetId, SynthError> {
    let (&first, rest) = terms.split_first().ok_or(SynthError::EmptyChain)?;
    for &net in terms {
        builder.check_available(net)?;
    }
    let mut acc = first;
    for &term in rest {
        let one = builder.add_constant(true);
        acc = builder.add_gate(family.plane_gate(), &[acc, one, term])?[2];
    }
    Ok(acc)
}

/// Synthesizes the full reversible PLA for `spec`.
pub fn synthesize_rpla(spec: &SopSpec, family: GateFamily) -> Result<Circuit, SynthError> {
    let n = spec.num_inputs();
    let mut b = CircuitBuilder::new(n, spec.input_names.clone())?;
    let demand = count_literal_demand(spec);

    // literal conditioning
    let mut positive: Vec<VecDeque<NetId>> = vec![VecDeque::new(); n];
    let mut negative: Vec<VecDeque<NetId>> = vec![VecDeque::new(); n];
    for var in 0..n {
        let (pos, neg) = (demand.positive[var], demand.negative[var]);
        let x = b.input(var);
        if neg > 0 {
            let (inverted, true_copy) = build_inverter(&mut b, x)?;
            if pos > 0 {
                positive[var].extend(build_fanout_tree(&mut b, true_copy, pos)?);
            }
            negative[var].extend(build_fanout_tree(&mut b, inverted, neg)?);
        } else if pos > 0 {
            positive[var].extend(build_fanout_tree(&mut b, x, pos)?);
        }
    }

    // AND plane
    let mut terms = Vec::with_capacity(spec.cubes.len());
    for cube in &spec.cubes {
        let literals: Vec<NetId> = cube
            .literals
            .iter()
            .enumerate()
            .filter_map(|(var, lit)| match lit {
                Literal::Positive => positive[var].pop_front(),
                Literal::Negative => negative[var].pop_front(),
                Literal::Absent => None,
            })
            .collect();
        let term = if literals.is_empty() {
            b.add_constant(true)
        } else {
            build_and_chain(&mut b, family, &literals)?
        };
        terms.push(term);
    }

    // term sharing
    let mut term_copies: Vec<VecDeque<NetId>> = Vec::with_capacity(terms.len());
    for (cube, &term) in spec.cubes.iter().zip(&terms) {
        let uses = cube.outputs.iter().filter(|&&o| o).count();
        term_copies.push(build_fanout_tree(&mut b, term, uses)?.into());
    }

    // OR plane
    let mut primary = Vec::with_capacity(spec.num_outputs());
    for (out, name) in spec.output_names.iter().enumerate() {
        let feeding: Vec<NetId> = spec
            .cubes
            .iter()
            .enumerate()
            .filter(|(_, c)| c.outputs[out])
            .map(|(k, _)| term_copies[k].pop_front().expect("copy count matches uses"))
            .collect();
        let net = if feeding.is_empty() {
            b.add_constant(false)
        } else {
            build_or_chain(&mut b, family, &feeding)?
        };
        primary.push((name.clone(), net));
    }

    Ok(b.finalize(primary)?)
}
