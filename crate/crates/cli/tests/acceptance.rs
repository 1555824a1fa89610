// SPDX-License-Identifier: Apache-2.0
//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::Instant;

use rpla_core::analysis::{compute_metrics, landauer_energy, verify_reversibility, VerifyConfig};
use rpla_core::emit::{emit_dot, emit_netlist, emit_vhdl, parse_netlist};
use rpla_core::gate::{
    conservativeness_violations, eval_gate, index_to_bits, inverse_eval_gate, is_conservative,
};
use rpla_core::netlist::validate_structure;
use rpla_core::pla::{parse_pla, serialize_pla, truth_table_of, Literal, SopSpec};
use rpla_core::sim::{exhaustive_permutation, simulate, simulate_inverse};
use rpla_core::synth::{synthesize_rpla, GateFamily};
use rpla_core::{Circuit, GateKind};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

const FAMILIES: [GateFamily; 2] = [GateFamily::Mux, GateFamily::Fredkin];

fn core_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core")
}

fn corpus_paths() -> Vec<PathBuf> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(core_dir().join("tests/corpus"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "pla"))
        .collect();
    paths.sort();
    paths
}

fn corpus() -> Vec<(String, SopSpec)> {
    corpus_paths()
        .iter()
        .map(|p| {
            let text = std::fs::read_to_string(p).unwrap();
            let name = p.file_stem().unwrap().to_string_lossy().into_owned();
            let spec = parse_pla(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
            (name, spec)
        })
        .collect()
}

fn designs() -> Vec<(String, GateFamily, SopSpec, Circuit)> {
    let mut out = Vec::new();
    for (name, spec) in corpus() {
        for family in FAMILIES {
            let c = synthesize_rpla(&spec, family).unwrap();
            out.push((name.clone(), family, spec.clone(), c));
        }
    }
    out
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

// Reference gate equations, written independently of the library.
fn oracle_gate(kind: GateKind, x: &[bool]) -> Vec<bool> {
    match kind {
        GateKind::Feynman => vec![x[0], x[0] ^ x[1]],
        GateKind::Mux => {
            let (a, b, c) = (x[0], x[1], x[2]);
            vec![a, a ^ b ^ c, (!a & c) ^ (a & b)]
        }
        GateKind::Fredkin => {
            let (a, b, c) = (x[0], x[1], x[2]);
            if a {
                vec![a, c, b]
            } else {
                vec![a, b, c]
            }
        }
    }
}

fn oracle_cost(kind: GateKind) -> u64 {
    match kind {
        GateKind::Feynman => 1,
        GateKind::Mux => 4,
        GateKind::Fredkin => 5,
    }
}

// Reference SOP evaluation straight from the cube list.
fn oracle_sop(spec: &SopSpec, x: &[bool]) -> Vec<bool> {
    (0..spec.num_outputs())
        .map(|o| {
            spec.cubes.iter().any(|cube| {
                cube.outputs[o]
                    && cube.literals.iter().zip(x).all(|(l, &v)| match l {
                        Literal::Positive => v,
                        Literal::Negative => !v,
                        Literal::Absent => true,
                    })
            })
        })
        .collect()
}

fn bits(v: &[bool]) -> String {
    v.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

fn c1_gate_soundness() -> Outcome {
    for kind in GateKind::ALL {
        let n = kind.arity();
        let mut images = BTreeSet::new();
        for i in 0..1usize << n {
            let x = index_to_bits(i, n);
            let y = eval_gate(kind, &x).map_err(|e| e.to_string())?;
            ensure(y == oracle_gate(kind, &x), || {
                format!("{kind} {} -> {}", bits(&x), bits(&y))
            })?;
            let back = inverse_eval_gate(kind, &y).map_err(|e| e.to_string())?;
            ensure(back == x, || {
                format!("{kind} inverse of {} gave {}", bits(&y), bits(&back))
            })?;
            images.insert(y);
        }
        ensure(images.len() == 1 << n, || {
            format!("{kind} is not bijective")
        })?;
        ensure(kind.quantum_cost() as u64 == oracle_cost(kind), || {
            format!("{kind} cost {}", kind.quantum_cost())
        })?;
    }
    Ok("3 gates bijective with exact inverses, QC 1/4/5".into())
}

fn c2_specializations() -> Outcome {
    let r = |kind, x: [bool; 3]| eval_gate(kind, &x).unwrap()[2];
    for a in [false, true] {
        let f0 = eval_gate(GateKind::Feynman, &[a, false]).unwrap();
        ensure(f0 == vec![a, a], || format!("Feynman({a},0) = {f0:?}"))?;
        let f1 = eval_gate(GateKind::Feynman, &[a, true]).unwrap();
        ensure(f1[1] == !a, || format!("Feynman({a},1).Q = {}", f1[1]))?;
        for v in [false, true] {
            for kind in [GateKind::Mux, GateKind::Fredkin] {
                ensure(r(kind, [a, v, false]) == (a && v), || {
                    format!("{kind} AND at {a},{v}")
                })?;
                ensure(r(kind, [a, true, v]) == (a || v), || {
                    format!("{kind} OR at {a},{v}")
                })?;
            }
        }
    }
    Ok("AND, OR, copy and NOT identities hold for all inputs".into())
}

fn c3_erratum() -> Outcome {
    ensure(is_conservative(GateKind::Fredkin), || {
        "Fredkin reported non-conservative".into()
    })?;
    ensure(!is_conservative(GateKind::Mux), || {
        "Mux reported conservative".into()
    })?;
    let v = conservativeness_violations(GateKind::Mux);
    let wanted = (vec![true, false, false], vec![true, true, false]);
    ensure(v.contains(&wanted), || {
        format!("(1,0,0)->(1,1,0) not among {v:?}")
    })?;
    Ok(format!(
        "Fredkin conservative; Mux not, {} violations incl. 100->110",
        v.len()
    ))
}

fn c4_functional() -> Outcome {
    let specs = corpus();
    let names: BTreeSet<&str> = specs.iter().map(|(n, _)| n.as_str()).collect();
    ensure(specs.len() >= 10, || format!("only {} specs", specs.len()))?;
    for required in [
        "and2",
        "or2",
        "xor2",
        "half_adder",
        "full_adder",
        "cmp2",
        "constants",
        "shared_term",
        "random4",
    ] {
        ensure(names.contains(required), || {
            format!("corpus lacks {required}")
        })?;
    }
    let mut vectors = 0;
    for (name, family, spec, c) in designs() {
        let n = spec.num_inputs();
        ensure(n <= 10, || format!("{name} has {n} inputs"))?;
        let table = truth_table_of(&spec, 10).map_err(|e| e.to_string())?;
        for i in 0..1usize << n {
            let x = index_to_bits(i, n);
            let (out, _) = simulate(&c, &x).map_err(|e| e.to_string())?;
            let expected = oracle_sop(&spec, &x);
            let from_table: Vec<bool> = (0..spec.num_outputs())
                .map(|o| table.output(i, o))
                .collect();
            ensure(expected == from_table, || {
                format!("{name}: truth table disagrees at {i}")
            })?;
            ensure(out == expected, || {
                format!(
                    "{name}/{family} at {}: got {} want {}",
                    bits(&x),
                    bits(&out),
                    bits(&expected)
                )
            })?;
            vectors += 1;
        }
    }
    Ok(format!(
        "{} specs x 2 families, {vectors} vectors, 0 mismatches",
        specs.len()
    ))
}

fn c5_reversibility() -> Outcome {
    let (mut proved, mut sampled) = (0, 0);
    for (name, family, _, c) in designs() {
        let report = validate_structure(&c);
        ensure(report.passed(), || {
            format!("{name}/{family}: {:?}", report.violations)
        })?;
        if c.width() <= 20 {
            let map =
                exhaustive_permutation(&c, 20).map_err(|e| format!("{name}/{family}: {e}"))?;
            let distinct: BTreeSet<u32> = map.iter().copied().collect();
            ensure(distinct.len() == 1 << c.width(), || {
                format!("{name}/{family} not a permutation")
            })?;
            proved += 1;
        } else {
            let config = VerifyConfig {
                samples: 100_000,
                ..VerifyConfig::default()
            };
            let r = verify_reversibility(&c, &config);
            ensure(r.passed(), || format!("{name}/{family}: {}", r.to_text()))?;
            sampled += 1;
        }
    }
    Ok(format!(
        "{proved} circuits proved exhaustively (W<=20), {sampled} wider ones sampled clean"
    ))
}

fn c6_qc_delta() -> Outcome {
    let mut with_planes = 0;
    for (name, spec) in corpus() {
        let mux = synthesize_rpla(&spec, GateFamily::Mux).unwrap();
        let fr = synthesize_rpla(&spec, GateFamily::Fredkin).unwrap();
        let qc = |c: &Circuit| c.gates().iter().map(|g| oracle_cost(g.kind)).sum::<u64>();
        let planes = mux
            .gates()
            .iter()
            .filter(|g| g.kind == GateKind::Mux)
            .count() as u64;
        let delta = qc(&fr) - qc(&mux);
        ensure(delta == planes, || {
            format!("{name}: delta {delta} vs {planes} plane gates")
        })?;
        ensure(planes == 0 || delta > 0, || format!("{name}: no reduction"))?;
        let reported = compute_metrics(&mux, None).unwrap().quantum_cost;
        ensure(reported == qc(&mux), || {
            format!("{name}: metrics QC {reported}")
        })?;
        if planes > 0 {
            with_planes += 1;
        }
        if name == "half_adder" {
            ensure((qc(&mux), qc(&fr)) == (20, 24), || {
                format!("half adder QC {} vs {}", qc(&mux), qc(&fr))
            })?;
        }
    }
    Ok(format!(
        "delta = plane gates on every spec ({with_planes} with planes); half adder 20 vs 24"
    ))
}

fn c7_inverse() -> Outcome {
    let mut vectors = 0;
    for (name, family, spec, c) in designs() {
        let consts: Vec<bool> = c.constants().iter().map(|&(_, v)| v).collect();
        for i in 0..1usize << spec.num_inputs() {
            let x = index_to_bits(i, spec.num_inputs());
            let (p, g) = simulate(&c, &x).unwrap();
            let all: Vec<bool> = p.into_iter().chain(g).collect();
            let back = simulate_inverse(&c, &all).map_err(|e| e.to_string())?;
            let mut expected = x.clone();
            expected.extend(&consts);
            ensure(back == expected, || {
                format!("{name}/{family} at {}", bits(&x))
            })?;
            vectors += 1;
        }
    }
    Ok(format!(
        "{vectors} round-trips recover inputs and constants"
    ))
}

fn c8_landauer() -> Outcome {
    let e = landauer_energy(1, 300.0).map_err(|e| e.to_string())?;
    let target = 2.8711e-21;
    let rel = ((e - target) / target).abs();
    ensure(rel <= 1e-4, || format!("{e:e} J, relative error {rel:e}"))?;
    let reference = 1.3807e-23 * 300.0 * std::f64::consts::LN_2;
    ensure(((e - reference) / reference).abs() < 1e-12, || {
        format!("{e:e} vs {reference:e}")
    })?;
    Ok(format!("{e:.4e} J, relative error {rel:.1e}"))
}

fn strip_ws(s: &str) -> String {
    s.chars().filter(|c| !c.is_whitespace()).collect()
}

fn c9_formats() -> Outcome {
    for (name, family, spec, c) in designs() {
        let pla = serialize_pla(&spec);
        ensure(parse_pla(&pla).as_ref() == Ok(&spec), || {
            format!("{name}: PLA round-trip")
        })?;
        let text = emit_netlist(&c);
        let back = parse_netlist(&text).map_err(|e| format!("{name}/{family}: {e}"))?;
        ensure(back == c, || format!("{name}/{family}: netlist round-trip"))?;
    }
    let golden = core_dir().join("tests/golden");
    let mut files = 0;
    for stem in ["and2", "half_adder"] {
        let text =
            std::fs::read_to_string(core_dir().join(format!("tests/corpus/{stem}.pla"))).unwrap();
        let c = synthesize_rpla(&parse_pla(&text).unwrap(), GateFamily::Mux).unwrap();
        let vhdl = emit_vhdl(&c, "rpla").map_err(|e| e.to_string())?;
        for (ext, actual) in [
            ("netlist", emit_netlist(&c)),
            ("dot", emit_dot(&c)),
            ("vhd", vhdl.clone()),
        ] {
            let path = golden.join(format!("{stem}.{ext}"));
            let expected =
                std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
            ensure(actual == expected, || format!("{} differs", path.display()))?;
            files += 1;
        }
        let flat = strip_ws(&vhdl);
        for signature in [
            "Entity MG3 is Port (IN1: in STD_LOGIC; IN2: in STD_LOGIC; IN3: in STD_LOGIC; \
             OUT1: out STD_LOGIC; OUT2: out STD_LOGIC; OUT3: out STD_LOGIC); End MG3;",
            "entity FY2 is port(IN1:in STD_LOGIC; IN2:in STD_LOGIC; OUT1:out STD_LOGIC; \
             OUT2:out STD_LOGIC); end FY2;",
            "OUT3<= (((NOT IN1) and IN3) xor (IN1 and IN2));",
        ] {
            let sig = strip_ws(signature);
            // the AND circuit has no Feynman gates, but the entity is always emitted
            ensure(flat.contains(&sig), || {
                format!("{stem}.vhd lacks `{signature}`")
            })?;
        }
    }
    Ok(format!("PLA and netlist round-trips exact; {files} golden files byte-equal; MG3/FY2 ports verbatim"))
}

fn c10_determinism() -> Outcome {
    let run = |args: &[&str]| -> Result<Vec<u8>, String> {
        let o = Command::new(env!("CARGO_BIN_EXE_rpla"))
            .args(args)
            .output()
            .map_err(|e| e.to_string())?;
        ensure(o.status.success(), || {
            format!("{args:?}: {}", String::from_utf8_lossy(&o.stderr))
        })?;
        Ok(o.stdout)
    };
    let mut runs = 0;
    for path in corpus_paths() {
        let p = path.to_string_lossy();
        for family in ["mux", "fredkin"] {
            for args in [
                vec!["synth", &p, "--family", family],
                vec!["synth", &p, "--family", family, "--emit", "vhdl"],
                vec!["metrics", &p, "--family", family, "--temperature", "300"],
            ] {
                let (a, b) = (run(&args)?, run(&args)?);
                ensure(a == b, || format!("{args:?} differs between runs"))?;
                runs += 2;
            }
        }
    }
    Ok(format!("{runs} CLI runs, every pair byte-identical"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("gate soundness", c1_gate_soundness),
        ("specialization identities", c2_specializations),
        ("conservativeness erratum", c3_erratum),
        ("functional correctness", c4_functional),
        ("reversibility", c5_reversibility),
        ("quantum cost reduction", c6_qc_delta),
        ("inverse simulation", c7_inverse),
        ("landauer energy", c8_landauer),
        ("format round-trips", c9_formats),
        ("determinism", c10_determinism),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        match outcome {
            Ok(detail) => println!("criterion {:>2} {name}: PASS ({detail})", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} {name}: FAIL ({why})", i + 1);
            }
        }
    }
    println!(
        "acceptance: {}/{} passed in {:.1}s",
        criteria.len() - failed,
        criteria.len(),
        start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
