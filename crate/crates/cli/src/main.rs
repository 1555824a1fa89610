// SPDX-License-Identifier: Apache-2.0
//! `rpla`: synthesize, simulate, verify and cost reversible PLAs.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage, I/O or parse error.

use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use rpla_core::analysis::{
    compare_designs, compute_metrics, verify_reversibility, BijectivityVerdict, VerifyConfig,
    DEFAULT_SEED,
};
use rpla_core::emit::{emit, parse_netlist, EmitFormat, EmitOptions};
use rpla_core::pla::parse_pla;
use rpla_core::sim::{simulate, DEFAULT_EXHAUSTIVE_LIMIT};
use rpla_core::synth::{synthesize_rpla, GateFamily};
use rpla_core::{Circuit, SopSpec};

#[derive(Parser, Debug)]
#[command(
    name = "rpla",
    version,
    about = "Reversible PLA synthesis and verification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Synthesize a PLA and print the circuit.
    Synth {
        #[command(flatten)]
        input: InputArgs,
        /// Output format: netlist, dot or vhdl.
        #[arg(long, default_value = "netlist")]
        emit: EmitFormat,
        /// Top-level entity name for VHDL output.
        #[arg(long, default_value = "rpla")]
        top: String,
    },
    /// Simulate one input vector and print `outputs=<bits> garbage=<bits>`.
    Sim {
        #[command(flatten)]
        input: InputArgs,
        /// Primary input bits, most significant (first input) first.
        bits: String,
        #[arg(long)]
        json: bool,
    },
    /// Check structure and bijectivity; exits 1 on any violation.
    Verify {
        #[command(flatten)]
        input: InputArgs,
        /// Largest width proved exhaustively.
        #[arg(long, default_value_t = DEFAULT_EXHAUSTIVE_LIMIT)]
        limit: usize,
        /// Random samples to draw when the width exceeds `--limit`.
        #[arg(long)]
        sample: Option<u64>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Print cost metrics as one `key=value` line.
    Metrics {
        #[command(flatten)]
        input: InputArgs,
        /// Temperature in kelvin for the Landauer estimate.
        #[arg(long)]
        temperature: Option<f64>,
        #[arg(long)]
        json: bool,
    },
    /// Synthesize with both gate families and compare costs.
    Compare {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args, Debug)]
struct InputArgs {
    /// PLA or netlist file, or `-` for standard input.
    input: PathBuf,
    /// Plane gate family used when the input is a PLA: mux or fredkin.
    #[arg(long, default_value = "mux")]
    family: GateFamily,
    /// Skip header sniffing and treat the input as this kind.
    #[arg(long, value_enum)]
    input_kind: Option<InputKind>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum InputKind {
    Pla,
    Netlist,
}

enum Loaded {
    Pla(SopSpec),
    Netlist(Circuit),
}

/// Error carrying its exit code.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl From<anyhow::Error> for Failure {
    fn from(error: anyhow::Error) -> Self {
        Failure { code: 2, error }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = String::new();
    let result = run(cli.command, &mut out);
    // Partial results still go out before the diagnostic.
    let _ = io::stdout().lock().write_all(out.as_bytes());
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure { code, error }) => {
            if code == 2 {
                eprintln!("rpla: {error:#}");
            }
            ExitCode::from(code)
        }
    }
}

fn run(command: Command, out: &mut String) -> Result<(), Failure> {
    match command {
        Command::Synth {
            input,
            emit: format,
            top,
        } => {
            let circuit = load_circuit(&input)?;
            let text = emit(
                &circuit,
                &EmitOptions {
                    format,
                    top_name: top,
                },
            )
            .map_err(anyhow::Error::from)?;
            out.push_str(&text);
        }
        Command::Sim { input, bits, json } => {
            let circuit = load_circuit(&input)?;
            let values = parse_bits(&bits, circuit.primary_input_count())?;
            let (primary, garbage) = simulate(&circuit, &values).map_err(anyhow::Error::from)?;
            let (primary, garbage) = (bit_string(&primary), bit_string(&garbage));
            if json {
                let v = serde_json::json!({ "outputs": primary, "garbage": garbage });
                out.push_str(&format!("{v}\n"));
            } else {
                out.push_str(&format!("outputs={primary} garbage={garbage}\n"));
            }
        }
        Command::Verify {
            input,
            limit,
            sample,
            seed,
            json,
        } => {
            let circuit = load_circuit(&input)?;
            let width = circuit.width();
            if width > limit && sample.is_none() {
                return Err(anyhow!(
                    "width W={width} exceeds the exhaustive limit of {limit}; \
                     pass `--sample <N>` to enable sampled verification or raise `--limit`"
                )
                .into());
            }
            let config = VerifyConfig {
                exhaustive_limit: limit,
                samples: sample.unwrap_or(0),
                seed,
                ..VerifyConfig::default()
            };
            let report = verify_reversibility(&circuit, &config);
            if json {
                out.push_str(&serde_json::to_string_pretty(&report).map_err(anyhow::Error::from)?);
                out.push('\n');
            } else {
                out.push_str(&report.to_text());
            }
            if let BijectivityVerdict::NotChecked { reason } = &report.bijective {
                if report.structural.passed() {
                    return Err(anyhow!("bijectivity not checked: {reason}").into());
                }
            }
            if !report.passed() {
                return Err(Failure {
                    code: 1,
                    error: anyhow!("verification failed"),
                });
            }
        }
        Command::Metrics {
            input,
            temperature,
            json,
        } => {
            let circuit = load_circuit(&input)?;
            let report = compute_metrics(&circuit, temperature).map_err(anyhow::Error::from)?;
            if json {
                out.push_str(&serde_json::to_string_pretty(&report).map_err(anyhow::Error::from)?);
                out.push('\n');
            } else {
                out.push_str(&report.to_key_values());
                out.push('\n');
            }
        }
        Command::Compare { input, json } => {
            let spec = match load(&input)? {
                Loaded::Pla(spec) => spec,
                Loaded::Netlist(_) => {
                    return Err(anyhow!("compare needs a PLA input, not a netlist").into())
                }
            };
            let report = compare_designs(&spec)
                .map_err(anyhow::Error::from)
                .with_context(|| display_name(&input))?;
            if json {
                out.push_str(&serde_json::to_string_pretty(&report).map_err(anyhow::Error::from)?);
                out.push('\n');
            } else {
                out.push_str(&report.to_text());
            }
        }
    }
    Ok(())
}

fn display_name(input: &InputArgs) -> String {
    if input.input.as_os_str() == "-" {
        "<stdin>".to_string()
    } else {
        input.input.display().to_string()
    }
}

fn read_input(input: &InputArgs) -> anyhow::Result<String> {
    let name = display_name(input);
    if input.input.as_os_str() == "-" {
        let mut text = String::new();
        io::stdin()
            .read_to_string(&mut text)
            .with_context(|| format!("{name}: cannot read"))?;
        Ok(text)
    } else {
        std::fs::read_to_string(&input.input).with_context(|| format!("{name}: cannot read"))
    }
}

/// Netlists start with their header; PLA files start with a `.` directive.
fn sniff(text: &str) -> Option<InputKind> {
    let first = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))?;
    if first.starts_with("rpla-netlist") {
        Some(InputKind::Netlist)
    } else if first.starts_with('.') {
        Some(InputKind::Pla)
    } else {
        None
    }
}

fn load(input: &InputArgs) -> anyhow::Result<Loaded> {
    let name = display_name(input);
    let text = read_input(input)?;
    let kind = match input.input_kind.or_else(|| sniff(&text)) {
        Some(kind) => kind,
        None => bail!("{name}: cannot tell whether this is a PLA or a netlist; pass --input-kind"),
    };
    Ok(match kind {
        InputKind::Pla => Loaded::Pla(parse_pla(&text).with_context(|| name.clone())?),
        InputKind::Netlist => Loaded::Netlist(parse_netlist(&text).with_context(|| name.clone())?),
    })
}

fn load_circuit(input: &InputArgs) -> anyhow::Result<Circuit> {
    match load(input)? {
        Loaded::Netlist(c) => Ok(c),
        Loaded::Pla(spec) => synthesize_rpla(&spec, input.family)
            .with_context(|| format!("{}: synthesis failed", display_name(input))),
    }
}

fn parse_bits(bits: &str, width: usize) -> anyhow::Result<Vec<bool>> {
    let values = bits
        .chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(anyhow!(
                "input bits must be 0 or 1, found `{other}`; expected {width} bits"
            )),
        })
        .collect::<anyhow::Result<Vec<bool>>>()?;
    if values.len() != width {
        bail!("expected {width} input bits, got {}", values.len());
    }
    Ok(values)
}

fn bit_string(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}
