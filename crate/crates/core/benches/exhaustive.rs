// SPDX-License-Identifier: Apache-2.0
use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use rpla_core::analysis::{verify_reversibility, VerifyConfig};
use rpla_core::netlist::{Circuit, CircuitBuilder, NetId};
use rpla_core::pla::parse_pla;
use rpla_core::sim::exhaustive_permutation_with;
use rpla_core::synth::{synthesize_rpla, GateFamily};
use rpla_core::{Exec, GateKind};

/// `width` primary inputs and no constants, mixed with a few layers of
/// three-line gates so every line depends on several others.
fn layered(width: usize, layers: usize) -> Circuit {
    let mut b = CircuitBuilder::new(width, vec![]).unwrap();
    let mut lines: Vec<NetId> = (0..width).map(|i| b.input(i)).collect();
    for layer in 0..layers {
        let kind = if layer % 2 == 0 {
            GateKind::Mux
        } else {
            GateKind::Fredkin
        };
        let shift = layer % 3;
        let mut i = shift;
        while i + 2 < width {
            let outs = b
                .add_gate(kind, &[lines[i], lines[i + 1], lines[i + 2]])
                .unwrap();
            lines[i..i + 3].copy_from_slice(&outs);
            i += 3;
        }
        lines.rotate_left(1);
    }
    let outputs = lines
        .iter()
        .enumerate()
        .map(|(i, &n)| (format!("y{i}"), n))
        .collect();
    b.finalize(outputs).unwrap()
}

fn execs() -> [(&'static str, Exec); 2] {
    [
        ("sequential", Exec::Sequential),
        ("parallel", Exec::Parallel),
    ]
}

fn exhaustive(c: &mut Criterion) {
    let mut group = c.benchmark_group("exhaustive_permutation");
    group.sample_size(10);
    for width in [16, 20] {
        let circuit = layered(width, 6);
        for (label, exec) in execs() {
            group.bench_with_input(BenchmarkId::new(label, width), &circuit, |bench, circ| {
                bench.iter(|| exhaustive_permutation_with(black_box(circ), 20, exec).unwrap())
            });
        }
    }
    group.finish();
}

fn sampled(c: &mut Criterion) {
    let text = include_str!("../tests/corpus/full_adder.pla");
    let circuit = synthesize_rpla(&parse_pla(text).unwrap(), GateFamily::Mux).unwrap();
    let mut group = c.benchmark_group("sampled_verify");
    group.sample_size(10);
    for (label, exec) in execs() {
        let config = VerifyConfig {
            exhaustive_limit: 0,
            samples: 1 << 18,
            exec,
            ..VerifyConfig::default()
        };
        group.bench_function(label, |bench| {
            bench.iter(|| verify_reversibility(black_box(&circuit), &config))
        });
    }
    group.finish();
}

fn synthesis(c: &mut Criterion) {
    let spec = parse_pla(include_str!("../tests/corpus/random4.pla")).unwrap();
    c.bench_function("synthesize_random4", |bench| {
        bench.iter(|| synthesize_rpla(black_box(&spec), GateFamily::Mux).unwrap())
    });
}

criterion_group!(benches, exhaustive, sampled, synthesis);
criterion_main!(benches);
