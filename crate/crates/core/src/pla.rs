// SPDX-License-Identifier: Apache-2.0
//! A subset of the Berkeley PLA format.
//!
//! Supported directives are `.i`, `.o`, `.p`, `.ilb`, `.ob` and `.e`. Cube
//! lines carry an input part over `{0,1,-}` and an output part over `{0,1}`.
//! `#` starts a comment.

use std::fmt::Write as _;

use thiserror::Error;

/// Largest input count [`truth_table_of`] enumerates by default.
pub const DEFAULT_EXHAUSTIVE_LIMIT: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Literal {
    Positive,
    Negative,
    Absent,
}

impl Literal {
    fn from_char(c: char) -> Option<Self> {
        match c {
            '1' => Some(Literal::Positive),
            '0' => Some(Literal::Negative),
            '-' => Some(Literal::Absent),
            _ => None,
        }
    }

    fn as_char(self) -> char {
        match self {
            Literal::Positive => '1',
            Literal::Negative => '0',
            Literal::Absent => '-',
        }
    }

    #[inline]
    pub fn matches(self, value: bool) -> bool {
        match self {
            Literal::Positive => value,
            Literal::Negative => !value,
            Literal::Absent => true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cube {
    pub literals: Vec<Literal>,
    pub outputs: Vec<bool>,
}

impl Cube {
    /// Whether the cube covers the input assignment `input` (input 0 = MSB of
    /// an `n`-bit word).
    pub fn covers(&self, input: u64) -> bool {
        let n = self.literals.len();
        self.literals
            .iter()
            .enumerate()
            .all(|(i, lit)| lit.matches((input >> (n - 1 - i)) & 1 == 1))
    }
}

/// A parsed two-level sum-of-products specification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SopSpec {
    pub input_names: Vec<String>,
    pub output_names: Vec<String>,
    pub cubes: Vec<Cube>,
}

pub fn default_input_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("x{i}")).collect()
}

pub fn default_output_names(m: usize) -> Vec<String> {
    (0..m).map(|i| format!("y{i}")).collect()
}

impl SopSpec {
    pub fn num_inputs(&self) -> usize {
        self.input_names.len()
    }

    pub fn num_outputs(&self) -> usize {
        self.output_names.len()
    }

    /// Builds a spec from cube strings such as `"1-0"` / `"10"`, with default
    /// names.
    pub fn from_cubes(n: usize, m: usize, cubes: &[(&str, &str)]) -> Result<Self, PlaError> {
        let mut text = format!(".i {n}\n.o {m}\n");
        for (i, o) in cubes {
            writeln!(text, "{i} {o}").unwrap();
        }
        parse_pla(&text)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlaError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing `{0}` directive")]
    MissingDirective(&'static str),
    #[error("`.p {declared}` does not match the {actual} cubes present")]
    CubeCount { declared: usize, actual: usize },
    #[error("{n} inputs exceed the exhaustive limit of {limit}; use sampled checking instead")]
    TooManyInputs { n: usize, limit: usize },
    #[error("{0} outputs do not fit a 64-bit truth-table row")]
    TooManyOutputs(usize),
}

fn syntax(line: usize, message: impl Into<String>) -> PlaError {
    PlaError::Syntax {
        line,
        message: message.into(),
    }
}

fn parse_count(line: usize, directive: &str, arg: Option<&str>) -> Result<usize, PlaError> {
    let arg = arg.ok_or_else(|| syntax(line, format!("`{directive}` needs a value")))?;
    arg.parse()
        .map_err(|_| syntax(line, format!("`{directive}` value `{arg}` is not a count")))
}

pub fn parse_pla(text: &str) -> Result<SopSpec, PlaError> {
    let mut n: Option<usize> = None;
    let mut m: Option<usize> = None;
    let mut declared_p: Option<usize> = None;
    let mut ilb: Option<(usize, Vec<String>)> = None;
    let mut ob: Option<(usize, Vec<String>)> = None;
    let mut cubes = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let first = tokens.next().unwrap();
        if let Some(directive) = first.strip_prefix('.') {
            if !cubes.is_empty() && directive != "e" && directive != "end" {
                return Err(syntax(lineno, format!("`.{directive}` after cube lines")));
            }
            match directive {
                "i" => n = Some(parse_count(lineno, ".i", tokens.next())?),
                "o" => m = Some(parse_count(lineno, ".o", tokens.next())?),
                "p" => declared_p = Some(parse_count(lineno, ".p", tokens.next())?),
                "ilb" => ilb = Some((lineno, tokens.map(str::to_string).collect())),
                "ob" => ob = Some((lineno, tokens.map(str::to_string).collect())),
                "e" | "end" => break,
                other => return Err(syntax(lineno, format!("unsupported directive `.{other}`"))),
            }
            continue;
        }

        let n = n.ok_or(PlaError::MissingDirective(".i"))?;
        let m = m.ok_or(PlaError::MissingDirective(".o"))?;
        let rest: Vec<&str> = tokens.collect();
        let [out_part] = rest.as_slice() else {
            return Err(syntax(
                lineno,
                "cube line must have an input part and an output part",
            ));
        };
        if first.chars().count() != n {
            return Err(syntax(
                lineno,
                format!("cube input width {} != {n}", first.chars().count()),
            ));
        }
        if out_part.chars().count() != m {
            return Err(syntax(
                lineno,
                format!("cube output width {} != {m}", out_part.chars().count()),
            ));
        }
        let literals = first
            .chars()
            .map(|c| {
                Literal::from_char(c)
                    .ok_or_else(|| syntax(lineno, format!("invalid input character `{c}`")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let outputs = out_part
            .chars()
            .map(|c| match c {
                '1' => Ok(true),
                '0' => Ok(false),
                _ => Err(syntax(lineno, format!("invalid output character `{c}`"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        if !outputs.contains(&true) {
            return Err(syntax(lineno, "cube feeds no output"));
        }
        cubes.push(Cube { literals, outputs });
    }

    let n = n.ok_or(PlaError::MissingDirective(".i"))?;
    let m = m.ok_or(PlaError::MissingDirective(".o"))?;
    if n == 0 {
        return Err(PlaError::MissingDirective(".i"));
    }
    if m == 0 {
        return Err(PlaError::MissingDirective(".o"));
    }
    if let Some(declared) = declared_p {
        if declared != cubes.len() {
            return Err(PlaError::CubeCount {
                declared,
                actual: cubes.len(),
            });
        }
    }
    let input_names = match ilb {
        Some((line, names)) if names.len() != n => {
            return Err(syntax(
                line,
                format!("`.ilb` lists {} names, expected {n}", names.len()),
            ))
        }
        Some((_, names)) => names,
        None => default_input_names(n),
    };
    let output_names = match ob {
        Some((line, names)) if names.len() != m => {
            return Err(syntax(
                line,
                format!("`.ob` lists {} names, expected {m}", names.len()),
            ))
        }
        Some((_, names)) => names,
        None => default_output_names(m),
    };
    Ok(SopSpec {
        input_names,
        output_names,
        cubes,
    })
}

/// Canonical text form; `.ilb`/`.ob` only appear for non-default names.
pub fn serialize_pla(spec: &SopSpec) -> String {
    let (n, m) = (spec.num_inputs(), spec.num_outputs());
    let mut out = String::new();
    writeln!(out, ".i {n}").unwrap();
    writeln!(out, ".o {m}").unwrap();
    if spec.input_names != default_input_names(n) {
        writeln!(out, ".ilb {}", spec.input_names.join(" ")).unwrap();
    }
    if spec.output_names != default_output_names(m) {
        writeln!(out, ".ob {}", spec.output_names.join(" ")).unwrap();
    }
    writeln!(out, ".p {}", spec.cubes.len()).unwrap();
    for cube in &spec.cubes {
        let i: String = cube.literals.iter().map(|l| l.as_char()).collect();
        let o: String = cube
            .outputs
            .iter()
            .map(|&b| if b { '1' } else { '0' })
            .collect();
        writeln!(out, "{i} {o}").unwrap();
    }
    out.push_str(".e\n");
    out
}

/// Truth table of a spec: `rows[i]` is the output word for input word `i`.
/// Input 0 and output 0 are the most significant bits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruthTable {
    pub num_inputs: usize,
    pub num_outputs: usize,
    pub rows: Vec<u64>,
}

impl TruthTable {
    pub fn output(&self, input: usize, output: usize) -> bool {
        (self.rows[input] >> (self.num_outputs - 1 - output)) & 1 == 1
    }

    pub fn column(&self, output: usize) -> Vec<bool> {
        (0..self.rows.len())
            .map(|i| self.output(i, output))
            .collect()
    }
}

pub fn truth_table_of(spec: &SopSpec, limit: usize) -> Result<TruthTable, PlaError> {
    let (n, m) = (spec.num_inputs(), spec.num_outputs());
    if n > limit || n >= 64 {
        return Err(PlaError::TooManyInputs { n, limit });
    }
    if m > 64 {
        return Err(PlaError::TooManyOutputs(m));
    }
    let masks: Vec<u64> = spec
        .cubes
        .iter()
        .map(|c| c.outputs.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64))
        .collect();
    let rows = (0..1u64 << n)
        .map(|input| {
            spec.cubes
                .iter()
                .zip(&masks)
                .filter(|(c, _)| c.covers(input))
                .fold(0u64, |acc, (_, &mask)| acc | mask)
        })
        .collect();
    Ok(TruthTable {
        num_inputs: n,
        num_outputs: m,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const HALF_ADDER: &str = ".i 2\n.o 2\n10 10\n01 10\n11 01\n.e\n";

    #[test]
    fn parse_and2() {
        let spec = parse_pla(".i 2\n.o 1\n11 1\n.e").unwrap();
        assert_eq!(spec.num_inputs(), 2);
        assert_eq!(spec.num_outputs(), 1);
        assert_eq!(spec.cubes.len(), 1);
        assert_eq!(
            spec.cubes[0].literals,
            vec![Literal::Positive, Literal::Positive]
        );
        assert_eq!(spec.cubes[0].outputs, vec![true]);
    }

    #[test]
    fn parse_half_adder() {
        let spec = parse_pla(HALF_ADDER).unwrap();
        use Literal::*;
        let lits: Vec<_> = spec.cubes.iter().map(|c| c.literals.clone()).collect();
        assert_eq!(
            lits,
            vec![
                vec![Positive, Negative],
                vec![Negative, Positive],
                vec![Positive, Positive]
            ]
        );
        let outs: Vec<_> = spec.cubes.iter().map(|c| c.outputs.clone()).collect();
        assert_eq!(
            outs,
            vec![vec![true, false], vec![true, false], vec![false, true]]
        );
    }

    #[test]
    fn width_error_has_line_number() {
        let err = parse_pla(".i 2\n.o 1\n1-1 1\n.e").unwrap_err();
        match err {
            PlaError::Syntax { line, message } => {
                assert_eq!(line, 3);
                assert!(message.contains("width 3"), "{message}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn malformations() {
        assert_eq!(
            parse_pla(".o 1\n.e").unwrap_err(),
            PlaError::MissingDirective(".i")
        );
        assert_eq!(
            parse_pla(".i 1\n.e").unwrap_err(),
            PlaError::MissingDirective(".o")
        );
        assert!(matches!(
            parse_pla(".i 2\n.o 1\n1x 1\n"),
            Err(PlaError::Syntax { line: 3, .. })
        ));
        assert!(matches!(
            parse_pla(".i 2\n.o 1\n11 -\n"),
            Err(PlaError::Syntax { line: 3, .. })
        ));
        assert_eq!(
            parse_pla(".i 2\n.o 1\n.p 2\n11 1\n").unwrap_err(),
            PlaError::CubeCount {
                declared: 2,
                actual: 1
            }
        );
        assert!(matches!(
            parse_pla(".i 2\n.o 1\n11 0\n"),
            Err(PlaError::Syntax { line: 3, .. })
        ));
    }

    #[test]
    fn comments_and_crlf() {
        let spec = parse_pla("# and gate\r\n.i 2 # two\r\n.o 1\r\n11 1\r\n.e\r\n").unwrap();
        assert_eq!(spec.cubes.len(), 1);
    }

    #[test]
    fn serialize_is_canonical() {
        let spec = parse_pla(HALF_ADDER).unwrap();
        let text = serialize_pla(&spec);
        assert_eq!(text, ".i 2\n.o 2\n.p 3\n10 10\n01 10\n11 01\n.e\n");
        assert_eq!(parse_pla(&text).unwrap(), spec);

        let named = parse_pla(".i 2\n.o 1\n.ilb a b\n.ob f\n11 1\n").unwrap();
        let text = serialize_pla(&named);
        assert!(text.contains(".ilb a b\n") && text.contains(".ob f\n"));
        assert_eq!(parse_pla(&text).unwrap(), named);
    }

    #[test]
    fn truth_tables() {
        let and = parse_pla(".i 2\n.o 1\n11 1\n").unwrap();
        assert_eq!(truth_table_of(&and, 20).unwrap().rows, vec![0, 0, 0, 1]);

        let ha = truth_table_of(&parse_pla(HALF_ADDER).unwrap(), 20).unwrap();
        assert_eq!(ha.column(0), vec![false, true, true, false]);
        assert_eq!(ha.column(1), vec![false, false, false, true]);

        let taut = parse_pla(".i 2\n.o 2\n-- 10\n").unwrap();
        let t = truth_table_of(&taut, 20).unwrap();
        assert!(t.column(0).iter().all(|&b| b));
        assert!(t.column(1).iter().all(|&b| !b));
    }

    #[test]
    fn truth_table_limit() {
        let spec = SopSpec::from_cubes(5, 1, &[("1----", "1")]).unwrap();
        assert_eq!(
            truth_table_of(&spec, 4).unwrap_err(),
            PlaError::TooManyInputs { n: 5, limit: 4 }
        );
    }
}
