// SPDX-License-Identifier: Apache-2.0
//! Reversible programmable logic array (RPLA) synthesis.
//!
//! A two-level sum-of-products specification ([`pla::SopSpec`]) is mapped onto
//! a netlist of reversible gates ([`netlist::Circuit`]): Feynman gates copy and
//! invert literals, and MUX (or, as a baseline, Fredkin) gates form the AND
//! and OR planes. The resulting circuits can be simulated in both directions,
//! checked for reversibility, costed, and written out as netlist, DOT or VHDL
//! text.
//!
//! ```
//! use rpla_core::{analysis, pla, synth};
//!
//! let spec = pla::parse_pla(".i 2\n.o 2\n10 10\n01 10\n11 01\n.e\n").unwrap();
//! let circuit = synth::synthesize_rpla(&spec, synth::GateFamily::Mux).unwrap();
//! let metrics = analysis::compute_metrics(&circuit, None).unwrap();
//! assert_eq!(metrics.quantum_cost, 20);
//! ```

pub mod analysis;
pub mod emit;
pub mod exec;
pub mod gate;
pub mod netlist;
pub mod pla;
pub mod sim;
pub mod synth;

pub use analysis::{
    compare_designs, compute_metrics, functional_equivalence, landauer_energy,
    verify_reversibility, ComparisonReport, MetricsReport, VerificationReport, VerifyConfig,
};
pub use exec::Exec;
pub use gate::GateKind;
pub use netlist::{Circuit, CircuitBuilder, NetId};
pub use pla::{parse_pla, serialize_pla, SopSpec};
pub use synth::{synthesize_rpla, GateFamily};
