// SPDX-License-Identifier: Apache-2.0
//! Circuit serialization: the canonical `rpla-netlist v1` text format, DOT
//! graphs and structural VHDL.

use std::collections::{BTreeSet, HashSet};
use std::fmt::Write as _;
use std::str::FromStr;

use thiserror::Error;

use crate::gate::GateKind;
use crate::netlist::{Circuit, GateInstance, NetId, NetSource};

pub const NETLIST_HEADER: &str = "rpla-netlist v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EmitFormat {
    #[default]
    Netlist,
    Dot,
    Vhdl,
}

impl FromStr for EmitFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "netlist" => Ok(EmitFormat::Netlist),
            "dot" => Ok(EmitFormat::Dot),
            "vhdl" => Ok(EmitFormat::Vhdl),
            other => Err(format!(
                "unknown emit format `{other}` (expected netlist, dot or vhdl)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmitOptions {
    pub format: EmitFormat,
    pub top_name: String,
}

impl Default for EmitOptions {
    fn default() -> Self {
        EmitOptions {
            format: EmitFormat::Netlist,
            top_name: "rpla".to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EmitError {
    #[error("`{0}` is not a legal VHDL entity name")]
    InvalidTopName(String),
}

pub fn emit(circuit: &Circuit, options: &EmitOptions) -> Result<String, EmitError> {
    match options.format {
        EmitFormat::Netlist => Ok(emit_netlist(circuit)),
        EmitFormat::Dot => Ok(emit_dot(circuit)),
        EmitFormat::Vhdl => emit_vhdl(circuit, &options.top_name),
    }
}

fn join_nets(nets: &[NetId]) -> String {
    nets.iter()
        .map(|n| n.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn emit_netlist(circuit: &Circuit) -> String {
    let mut s = String::new();
    writeln!(s, "{NETLIST_HEADER}").unwrap();
    write!(s, "inputs {}", circuit.primary_input_count()).unwrap();
    for name in circuit.input_names() {
        write!(s, " {name}").unwrap();
    }
    s.push('\n');
    for &(net, v) in circuit.constants() {
        writeln!(s, "const {net} {}", v as u8).unwrap();
    }
    for g in circuit.gates() {
        writeln!(
            s,
            "gate {} {} -> {}",
            g.kind,
            join_nets(&g.inputs),
            join_nets(&g.outputs)
        )
        .unwrap();
    }
    for (name, net) in circuit.primary_outputs() {
        writeln!(s, "output {name} {net}").unwrap();
    }
    let garbage = join_nets(circuit.garbage_outputs());
    if garbage.is_empty() {
        s.push_str("garbage\n");
    } else {
        writeln!(s, "garbage {garbage}").unwrap();
    }
    s
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NetlistError {
    #[error("line {line}: expected header `{NETLIST_HEADER}`")]
    Version { line: usize },
    #[error("line {line}: unknown gate kind `{kind}`")]
    UnknownKind { line: usize, kind: String },
    #[error("line {line}: net {net} is not declared")]
    UndeclaredNet { line: usize, net: u32 },
    #[error("line {line}: net {net} is already defined")]
    Redefined { line: usize, net: u32 },
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("net ids are not dense: net {missing} is never defined")]
    Sparse { missing: u32 },
    #[error("unexpected end of netlist: {0}")]
    Truncated(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Section {
    Inputs,
    Consts,
    Gates,
    Outputs,
    Garbage,
}

/// Reads the canonical netlist format.
///
/// Syntax, dangling references, redefinitions and out-of-order sections are
/// rejected. Fan-out and output coverage are not: those are reported by
/// [`crate::netlist::validate_structure`].
pub fn parse_netlist(text: &str) -> Result<Circuit, NetlistError> {
    let syntax = |line: usize, message: String| NetlistError::Syntax { line, message };
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());

    match lines.next() {
        Some((_, NETLIST_HEADER)) => {}
        Some((line, _)) => return Err(NetlistError::Version { line }),
        None => return Err(NetlistError::Truncated("missing header")),
    }

    let mut defined: BTreeSet<u32> = BTreeSet::new();
    let mut input_names = Vec::new();
    let mut constants = Vec::new();
    let mut gates = Vec::new();
    let mut outputs = Vec::new();
    let mut garbage = None;
    let mut section: Option<Section> = None;

    let parse_id = |line: usize, tok: &str| -> Result<u32, NetlistError> {
        tok.parse::<u32>()
            .map_err(|_| syntax(line, format!("`{tok}` is not a net id")))
    };

    for (line, content) in lines {
        let mut toks = content.split_whitespace();
        let keyword = toks.next().unwrap();
        let this = match keyword {
            "inputs" => Section::Inputs,
            "const" => Section::Consts,
            "gate" => Section::Gates,
            "output" => Section::Outputs,
            "garbage" => Section::Garbage,
            other => return Err(syntax(line, format!("unknown statement `{other}`"))),
        };
        let in_order = match section {
            None => this == Section::Inputs,
            Some(Section::Inputs) => this > Section::Inputs,
            Some(Section::Garbage) => false,
            Some(prev) => this >= prev && this != Section::Inputs,
        };
        if !in_order {
            return Err(syntax(line, format!("`{keyword}` is out of order")));
        }
        section = Some(this);
        let rest: Vec<&str> = toks.collect();

        match this {
            Section::Inputs => {
                let (count, names) = rest
                    .split_first()
                    .ok_or_else(|| syntax(line, "`inputs` needs a count".into()))?;
                let n: usize = count
                    .parse()
                    .map_err(|_| syntax(line, format!("`{count}` is not an input count")))?;
                if n == 0 {
                    return Err(syntax(line, "a circuit needs at least one input".into()));
                }
                input_names = if names.is_empty() {
                    (0..n).map(|i| format!("x{i}")).collect()
                } else if names.len() == n {
                    names.iter().map(|s| s.to_string()).collect()
                } else {
                    return Err(syntax(
                        line,
                        format!("{n} inputs but {} names", names.len()),
                    ));
                };
                defined.extend(0..n as u32);
            }
            Section::Consts => {
                let [id, value] = rest.as_slice() else {
                    return Err(syntax(line, "expected `const <net> <0|1>`".into()));
                };
                let id = parse_id(line, id)?;
                let value = match *value {
                    "0" => false,
                    "1" => true,
                    v => return Err(syntax(line, format!("constant value `{v}` is not 0 or 1"))),
                };
                if !defined.insert(id) {
                    return Err(NetlistError::Redefined { line, net: id });
                }
                constants.push((NetId(id), value));
            }
            Section::Gates => {
                let (kind, pins) = rest
                    .split_first()
                    .ok_or_else(|| syntax(line, "`gate` needs a kind".into()))?;
                let kind: GateKind = kind.parse().map_err(|_| NetlistError::UnknownKind {
                    line,
                    kind: kind.to_string(),
                })?;
                let arrow = pins
                    .iter()
                    .position(|&t| t == "->")
                    .ok_or_else(|| syntax(line, "missing `->`".into()))?;
                let ins = pins[..arrow]
                    .iter()
                    .map(|t| parse_id(line, t))
                    .collect::<Result<Vec<_>, _>>()?;
                let outs = pins[arrow + 1..]
                    .iter()
                    .map(|t| parse_id(line, t))
                    .collect::<Result<Vec<_>, _>>()?;
                if ins.len() != kind.arity() || outs.len() != kind.arity() {
                    return Err(syntax(
                        line,
                        format!(
                            "{kind} takes {} inputs and {} outputs",
                            kind.arity(),
                            kind.arity()
                        ),
                    ));
                }
                if let Some(&net) = ins.iter().find(|n| !defined.contains(n)) {
                    return Err(NetlistError::UndeclaredNet { line, net });
                }
                for &o in &outs {
                    if !defined.insert(o) {
                        return Err(NetlistError::Redefined { line, net: o });
                    }
                }
                gates.push(GateInstance {
                    kind,
                    inputs: ins.into_iter().map(NetId).collect(),
                    outputs: outs.into_iter().map(NetId).collect(),
                });
            }
            Section::Outputs => {
                let [name, id] = rest.as_slice() else {
                    return Err(syntax(line, "expected `output <name> <net>`".into()));
                };
                let id = parse_id(line, id)?;
                if !defined.contains(&id) {
                    return Err(NetlistError::UndeclaredNet { line, net: id });
                }
                outputs.push((name.to_string(), NetId(id)));
            }
            Section::Garbage => {
                let ids = rest
                    .iter()
                    .map(|t| parse_id(line, t))
                    .collect::<Result<Vec<_>, _>>()?;
                if let Some(&net) = ids.iter().find(|n| !defined.contains(n)) {
                    return Err(NetlistError::UndeclaredNet { line, net });
                }
                garbage = Some(ids.into_iter().map(NetId).collect::<Vec<_>>());
            }
        }
    }

    let garbage = garbage.ok_or(NetlistError::Truncated("missing `garbage` line"))?;
    let net_count = defined.len();
    if let Some(missing) = (0..net_count as u32).find(|i| !defined.contains(i)) {
        return Err(NetlistError::Sparse { missing });
    }
    Ok(Circuit::from_raw_parts(
        input_names,
        constants,
        gates,
        outputs,
        garbage,
        net_count,
    ))
}

fn pin_names(kind: GateKind) -> (&'static [&'static str], &'static [&'static str]) {
    match kind.arity() {
        2 => (&["A", "B"], &["P", "Q"]),
        _ => (&["A", "B", "C"], &["P", "Q", "R"]),
    }
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Graphviz rendering: one node per input, constant, gate and output line;
/// one edge per net.
pub fn emit_dot(circuit: &Circuit) -> String {
    let mut s = String::new();
    s.push_str("digraph rpla {\n  rankdir=LR;\n");
    for (i, name) in circuit.input_names().iter().enumerate() {
        writeln!(s, "  in{i} [shape=box, label=\"{}\"];", dot_escape(name)).unwrap();
    }
    for &(net, v) in circuit.constants() {
        writeln!(
            s,
            "  c{net} [shape=box, style=dashed, label=\"{}\"];",
            v as u8
        )
        .unwrap();
    }
    for (g, inst) in circuit.gates().iter().enumerate() {
        let (ins, outs) = pin_names(inst.kind);
        let port = |p: &&str| format!("<{}>{}", p.to_lowercase(), p);
        writeln!(
            s,
            "  g{g} [shape=record, label=\"{{{}}}|{} QC={}|{{{}}}\"];",
            ins.iter().map(port).collect::<Vec<_>>().join("|"),
            inst.kind,
            inst.kind.quantum_cost(),
            outs.iter().map(port).collect::<Vec<_>>().join("|"),
        )
        .unwrap();
    }
    for (j, (name, _)) in circuit.primary_outputs().iter().enumerate() {
        writeln!(
            s,
            "  out{j} [shape=box, peripheries=2, label=\"{}\"];",
            dot_escape(name)
        )
        .unwrap();
    }
    for j in 0..circuit.garbage_outputs().len() {
        writeln!(s, "  gb{j} [shape=plaintext, label=\"garbage\"];").unwrap();
    }

    let mut sinks: Vec<Vec<String>> = vec![Vec::new(); circuit.net_count()];
    for (g, inst) in circuit.gates().iter().enumerate() {
        let (ins, _) = pin_names(inst.kind);
        for (net, pin) in inst.inputs.iter().zip(ins) {
            if let Some(v) = sinks.get_mut(net.index()) {
                v.push(format!("g{g}:{}", pin.to_lowercase()));
            }
        }
    }
    for (j, (_, net)) in circuit.primary_outputs().iter().enumerate() {
        if let Some(v) = sinks.get_mut(net.index()) {
            v.push(format!("out{j}"));
        }
    }
    for (j, net) in circuit.garbage_outputs().iter().enumerate() {
        if let Some(v) = sinks.get_mut(net.index()) {
            v.push(format!("gb{j}"));
        }
    }
    for (i, (src, sinks)) in circuit.net_sources().iter().zip(&sinks).enumerate() {
        let tail = match src {
            Some(NetSource::PrimaryInput(p)) => format!("in{p}"),
            Some(NetSource::ConstantInput { .. }) => format!("c{i}"),
            Some(NetSource::GatePin { gate, pin }) => {
                let (_, outs) = pin_names(circuit.gates()[*gate].kind);
                format!("g{gate}:{}", outs[*pin].to_lowercase())
            }
            None => continue,
        };
        for head in sinks {
            writeln!(s, "  {tail} -> {head} [label=\"n{i}\"];").unwrap();
        }
    }
    s.push_str("}\n");
    s
}

const VHDL_RESERVED: &[&str] = &[
    "abs",
    "access",
    "after",
    "alias",
    "all",
    "and",
    "architecture",
    "array",
    "assert",
    "attribute",
    "begin",
    "block",
    "body",
    "buffer",
    "bus",
    "case",
    "component",
    "configuration",
    "constant",
    "disconnect",
    "downto",
    "else",
    "elsif",
    "end",
    "entity",
    "exit",
    "file",
    "for",
    "function",
    "generate",
    "generic",
    "group",
    "guarded",
    "if",
    "impure",
    "in",
    "inertial",
    "inout",
    "is",
    "label",
    "library",
    "linkage",
    "literal",
    "loop",
    "map",
    "mod",
    "nand",
    "new",
    "next",
    "nor",
    "not",
    "null",
    "of",
    "on",
    "open",
    "or",
    "others",
    "out",
    "package",
    "port",
    "postponed",
    "procedure",
    "process",
    "pure",
    "range",
    "record",
    "register",
    "reject",
    "rem",
    "report",
    "return",
    "rol",
    "ror",
    "select",
    "severity",
    "signal",
    "shared",
    "sla",
    "sll",
    "sra",
    "srl",
    "subtype",
    "then",
    "to",
    "transport",
    "type",
    "unaffected",
    "units",
    "until",
    "use",
    "variable",
    "wait",
    "when",
    "while",
    "with",
    "xnor",
    "xor",
];

const GATE_ENTITIES: [&str; 3] = ["mg3", "fy2", "fr3"];

/// Basic VHDL identifier: letter first, then letters, digits and single
/// underscores, no trailing underscore, not a reserved word.
pub fn is_vhdl_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    let Some(first) = chars.next() else {
        return false;
    };
    first.is_ascii_alphabetic()
        && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !s.ends_with('_')
        && !s.contains("__")
        && !VHDL_RESERVED.contains(&s.to_ascii_lowercase().as_str())
}

fn is_generated_name(lower: &str) -> bool {
    let mut chars = lower.chars();
    matches!(chars.next(), Some('n' | 'g')) && lower.len() > 1 && chars.all(|c| c.is_ascii_digit())
}

fn entity_name(kind: GateKind) -> &'static str {
    match kind {
        GateKind::Feynman => "FY2",
        GateKind::Mux => "MG3",
        GateKind::Fredkin => "FR3",
    }
}

fn port_clause(kind: GateKind, keyword: &str, indent: &str) -> String {
    let arity = kind.arity();
    let mut ports: Vec<String> = (1..=arity)
        .map(|i| format!("IN{i}: in STD_LOGIC"))
        .collect();
    ports.extend((1..=arity).map(|i| format!("OUT{i}: out STD_LOGIC")));
    let sep = format!(";\n{indent}      ");
    format!("{indent}{keyword} ({});\n", ports.join(&sep))
}

const CONTEXT_CLAUSE: &str =
    "library ieee;\nuse ieee.std_logic_1164.all;\nuse ieee.numeric_std.all;\n";

fn behavioral_entity(kind: GateKind) -> String {
    let name = entity_name(kind);
    let (arch, body): (&str, &[&str]) = match kind {
        GateKind::Mux => (
            "behavioral",
            &[
                "OUT1 <= IN1;",
                "OUT2 <= IN1 xor IN2 xor IN3;",
                "OUT3 <= (((NOT IN1) and IN3) xor (IN1 and IN2));",
            ],
        ),
        GateKind::Feynman => ("behavior", &["OUT1 <= IN1;", "OUT2 <= IN1 xor IN2;"]),
        GateKind::Fredkin => (
            "behavioral",
            &[
                "OUT1 <= IN1;",
                "OUT2 <= (((NOT IN1) and IN2) xor (IN1 and IN3));",
                "OUT3 <= (((NOT IN1) and IN3) xor (IN1 and IN2));",
            ],
        ),
    };
    let mut s = String::new();
    s.push_str(CONTEXT_CLAUSE);
    // MG3 keeps its customary capitalized keywords.
    let [entity, port, end] = match kind {
        GateKind::Mux => ["Entity", "Port", "End"],
        _ => ["entity", "port", "end"],
    };
    writeln!(s, "{entity} {name} is").unwrap();
    s.push_str(&port_clause(kind, port, "  "));
    writeln!(s, "{end} {name};\n").unwrap();
    writeln!(s, "architecture {arch} of {name} is\nbegin").unwrap();
    for line in body {
        writeln!(s, "  {line}").unwrap();
    }
    writeln!(s, "end {arch};").unwrap();
    s
}

/// Maps declared port names to legal, collision-free VHDL names. Names that
/// are not basic identifiers become extended identifiers `\name\`.
fn port_names(circuit: &Circuit, top: &str) -> (Vec<String>, Vec<String>) {
    let mut taken: HashSet<String> = GATE_ENTITIES.iter().map(|s| s.to_string()).collect();
    taken.insert(top.to_ascii_lowercase());
    let mut assign = |name: &str| {
        let lower = name.to_ascii_lowercase();
        if is_vhdl_identifier(name) && !is_generated_name(&lower) && taken.insert(lower) {
            name.to_string()
        } else {
            let mut ext = format!("\\{}\\", name.replace('\\', "\\\\"));
            while !taken.insert(ext.clone()) {
                ext.insert(ext.len() - 1, '_');
            }
            ext
        }
    };
    let inputs = circuit.input_names().iter().map(|n| assign(n)).collect();
    let outputs = circuit
        .primary_outputs()
        .iter()
        .map(|(n, _)| assign(n))
        .collect();
    (inputs, outputs)
}

/// Behavioral gate entities followed by a structural top entity with one
/// component instance per gate and one signal per internal net.
pub fn emit_vhdl(circuit: &Circuit, top_name: &str) -> Result<String, EmitError> {
    let lower = top_name.to_ascii_lowercase();
    if !is_vhdl_identifier(top_name) || GATE_ENTITIES.contains(&lower.as_str()) {
        return Err(EmitError::InvalidTopName(top_name.to_string()));
    }
    let used: BTreeSet<GateKind> = circuit.gates().iter().map(|g| g.kind).collect();
    let mut entities = vec![GateKind::Mux, GateKind::Feynman];
    if used.contains(&GateKind::Fredkin) {
        entities.push(GateKind::Fredkin);
    }

    let (in_ports, out_ports) = port_names(circuit, top_name);
    let n = circuit.primary_input_count();
    let signal = |net: NetId| -> String {
        if net.index() < n {
            in_ports[net.index()].clone()
        } else {
            format!("n{net}")
        }
    };

    let mut s = String::from("-- reversible PLA netlist, generated by rpla\n\n");
    for kind in entities {
        s.push_str(&behavioral_entity(kind));
        s.push('\n');
    }

    s.push_str(CONTEXT_CLAUSE);
    writeln!(s, "entity {top_name} is").unwrap();
    let ports: Vec<String> = in_ports
        .iter()
        .map(|p| format!("{p}: in STD_LOGIC"))
        .chain(out_ports.iter().map(|p| format!("{p}: out STD_LOGIC")))
        .collect();
    writeln!(s, "  port ({});", ports.join(";\n        ")).unwrap();
    writeln!(s, "end {top_name};\n").unwrap();

    writeln!(s, "architecture structural of {top_name} is").unwrap();
    for &kind in &used {
        writeln!(s, "  component {}", entity_name(kind)).unwrap();
        s.push_str(&port_clause(kind, "port", "    "));
        s.push_str("  end component;\n");
    }
    for i in n..circuit.net_count() {
        writeln!(s, "  signal n{i}: STD_LOGIC;").unwrap();
    }
    s.push_str("begin\n");
    for &(net, v) in circuit.constants() {
        writeln!(s, "  n{net} <= '{}';", v as u8).unwrap();
    }
    for (g, inst) in circuit.gates().iter().enumerate() {
        let maps: Vec<String> = inst
            .inputs
            .iter()
            .enumerate()
            .map(|(k, &net)| format!("IN{} => {}", k + 1, signal(net)))
            .chain(
                inst.outputs
                    .iter()
                    .enumerate()
                    .map(|(k, &net)| format!("OUT{} => {}", k + 1, signal(net))),
            )
            .collect();
        writeln!(
            s,
            "  g{g}: {} port map ({});",
            entity_name(inst.kind),
            maps.join(", ")
        )
        .unwrap();
    }
    for (port, (_, net)) in out_ports.iter().zip(circuit.primary_outputs()) {
        writeln!(s, "  {port} <= {};", signal(*net)).unwrap();
    }
    s.push_str("end structural;\n");
    Ok(s)
}
