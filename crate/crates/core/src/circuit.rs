//! Toffoli–Hadamard circuit representation, the line-oriented text format,
//! the normalization pass and a seeded random-circuit generator.
//!
//! Text format:
//!
//! ```text
//! # comment
//! qubits 4
//! h 2
//! ccx 0 1 2   # controls 0 and 1, target 2
//! ```

use std::fmt;
use std::str::FromStr;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

/// A single gate of the universal Toffoli + Hadamard set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Gate {
    Hadamard(usize),
    Toffoli {
        control1: usize,
        control2: usize,
        target: usize,
    },
}

impl Gate {
    pub fn toffoli(control1: usize, control2: usize, target: usize) -> Self {
        Gate::Toffoli {
            control1,
            control2,
            target,
        }
    }

    /// Lines touched by the gate.
    pub fn lines(&self) -> impl Iterator<Item = usize> {
        let (a, b, c, n) = match *self {
            Gate::Hadamard(l) => (l, 0, 0, 1),
            Gate::Toffoli {
                control1,
                control2,
                target,
            } => (control1, control2, target, 3),
        };
        [a, b, c].into_iter().take(n)
    }

    pub fn is_toffoli(&self) -> bool {
        matches!(self, Gate::Toffoli { .. })
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Gate::Hadamard(l) => write!(f, "h {l}"),
            Gate::Toffoli {
                control1,
                control2,
                target,
            } => write!(f, "ccx {control1} {control2} {target}"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CircuitError {
    #[error("line {line}: expected `qubits <q>` before any gate")]
    MissingHeader { line: usize },
    #[error("line {line}: qubit index {index} out of range for {qubits} qubits")]
    IndexOutOfRange { line: usize, index: usize, qubits: usize },
    #[error("line {line}: toffoli indices must be pairwise distinct")]
    DuplicateToffoliIndex { line: usize },
    #[error("line {line}: unknown gate `{name}`")]
    UnknownGateName { line: usize, name: String },
    #[error("line {line}: {reason}")]
    MalformedLine { line: usize, reason: String },
    #[error("invalid gate {gate}: {reason}")]
    InvalidGate { gate: Gate, reason: &'static str },
}

/// An ordered gate list on `qubits` lines.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Circuit {
    qubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    /// Builds a circuit, checking every gate against the qubit count.
    pub fn new(qubits: usize, gates: Vec<Gate>) -> Result<Self, CircuitError> {
        for g in &gates {
            check_gate(g, qubits)?;
        }
        Ok(Circuit { qubits, gates })
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn hadamard_count(&self) -> usize {
        self.gates.iter().filter(|g| !g.is_toffoli()).count()
    }

    pub fn toffoli_count(&self) -> usize {
        self.gates.iter().filter(|g| g.is_toffoli()).count()
    }

    /// The inverse circuit: every gate here is self-inverse, so this is the reversed list.
    pub fn inverse(&self) -> Circuit {
        Circuit {
            qubits: self.qubits,
            gates: self.gates.iter().rev().copied().collect(),
        }
    }

    /// Concatenation `other ∘ self` (self runs first).
    pub fn then(&self, other: &Circuit) -> Result<Circuit, CircuitError> {
        let q = self.qubits.max(other.qubits);
        let mut gates = self.gates.clone();
        gates.extend_from_slice(&other.gates);
        Circuit::new(q, gates)
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

fn check_gate(g: &Gate, qubits: usize) -> Result<(), CircuitError> {
    if g.lines().any(|l| l >= qubits) {
        return Err(CircuitError::InvalidGate {
            gate: *g,
            reason: "qubit index out of range",
        });
    }
    if let Gate::Toffoli {
        control1,
        control2,
        target,
    } = *g
    {
        if control1 == control2 || control1 == target || control2 == target {
            return Err(CircuitError::InvalidGate {
                gate: *g,
                reason: "toffoli indices must be pairwise distinct",
            });
        }
    }
    Ok(())
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "qubits {}", self.qubits)?;
        for g in &self.gates {
            writeln!(f, "{g}")?;
        }
        Ok(())
    }
}

impl FromStr for Circuit {
    type Err = CircuitError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_circuit(s)
    }
}

/// Parses the circuit text format. Errors carry 1-based line numbers.
pub fn parse_circuit(text: &str) -> Result<Circuit, CircuitError> {
    let mut qubits: Option<usize> = None;
    let mut gates = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut tokens = content.split_whitespace();
        let name = tokens.next().unwrap_or_default();
        let args: Vec<&str> = tokens.collect();

        let Some(q) = qubits else {
            if name != "qubits" {
                return Err(CircuitError::MissingHeader { line });
            }
            let [count] = args[..] else {
                return Err(malformed(line, "expected `qubits <q>`"));
            };
            let q = parse_index(count, line)?;
            if q == 0 {
                return Err(malformed(line, "qubit count must be positive"));
            }
            qubits = Some(q);
            continue;
        };

        let indices = args
            .iter()
            .map(|a| parse_index(a, line))
            .collect::<Result<Vec<_>, _>>()?;
        let gate = match name {
            "h" => match indices[..] {
                [l] => Gate::Hadamard(l),
                _ => return Err(malformed(line, "`h` takes exactly one index")),
            },
            "ccx" => match indices[..] {
                [c1, c2, t] => Gate::toffoli(c1, c2, t),
                _ => return Err(malformed(line, "`ccx` takes exactly three indices")),
            },
            "qubits" => return Err(malformed(line, "duplicate `qubits` header")),
            other => {
                return Err(CircuitError::UnknownGateName {
                    line,
                    name: other.to_string(),
                })
            }
        };
        if let Some(&index) = indices.iter().find(|&&i| i >= q) {
            return Err(CircuitError::IndexOutOfRange { line, index, qubits: q });
        }
        if let Gate::Toffoli {
            control1,
            control2,
            target,
        } = gate
        {
            if control1 == control2 || control1 == target || control2 == target {
                return Err(CircuitError::DuplicateToffoliIndex { line });
            }
        }
        gates.push(gate);
    }

    match qubits {
        Some(qubits) => Ok(Circuit { qubits, gates }),
        None => Err(CircuitError::MissingHeader {
            line: text.lines().count().max(1),
        }),
    }
}

fn parse_index(token: &str, line: usize) -> Result<usize, CircuitError> {
    token
        .parse::<usize>()
        .map_err(|_| malformed(line, format!("`{token}` is not a non-negative integer")))
}

fn malformed(line: usize, reason: impl Into<String>) -> CircuitError {
    CircuitError::MalformedLine {
        line,
        reason: reason.into(),
    }
}

pub fn serialize_circuit(c: &Circuit) -> String {
    c.to_string()
}

/// A computational basis state. Bit `i` is qubit `i`; in string form
/// character 0 is qubit 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct BasisState {
    bits: Vec<bool>,
}

impl BasisState {
    pub fn new(bits: Vec<bool>) -> Self {
        BasisState { bits }
    }

    pub fn zeros(len: usize) -> Self {
        BasisState { bits: vec![false; len] }
    }

    /// Low `len` bits of `index`, qubit `i` taken from bit `i`.
    pub fn from_index(index: usize, len: usize) -> Self {
        BasisState {
            bits: (0..len).map(|i| (index >> i) & 1 == 1).collect(),
        }
    }

    pub fn index(&self) -> usize {
        self.bits
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &b)| acc | (usize::from(b) << i))
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bit(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }
}

impl fmt::Display for BasisState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("invalid basis state `{0}`: expected a string of 0/1 characters")]
pub struct BasisStateError(pub String);

impl FromStr for BasisState {
    type Err = BasisStateError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(BasisStateError(s.to_string())),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(BasisState::new)
    }
}

/// One inserted `h h` pair: placed on `line` directly after original gate `after_gate`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Insertion {
    pub line: usize,
    pub after_gate: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct NormalizationReport {
    pub inserted_pairs: usize,
    pub positions: Vec<Insertion>,
}

/// Inserts identity `h h` pairs so that every line segment (the stretch of a
/// line between consecutive Hadamards, or a boundary) touches at most one
/// Toffoli, and no final segment is a Toffoli target.
///
/// A pair is inserted right after the earlier of two Toffolis that share a
/// segment, and right after a Toffoli that targets a final segment.
pub fn normalize(c: &Circuit) -> (Circuit, NormalizationReport) {
    let gates = c.gates();
    let mut after: Vec<Vec<usize>> = vec![Vec::new(); gates.len()];
    // Toffoli (gate index, line is its target) sitting in the open segment of each line.
    let mut open: Vec<Option<(usize, bool)>> = vec![None; c.qubits()];

    for (i, g) in gates.iter().enumerate() {
        match *g {
            Gate::Hadamard(l) => open[l] = None,
            Gate::Toffoli { target, .. } => {
                for l in g.lines() {
                    if let Some((j, _)) = open[l] {
                        after[j].push(l);
                    }
                    open[l] = Some((i, l == target));
                }
            }
        }
    }
    for (l, seg) in open.iter().enumerate() {
        if let Some((j, true)) = *seg {
            after[j].push(l);
        }
    }

    let mut out = Vec::with_capacity(gates.len());
    let mut report = NormalizationReport::default();
    for (i, g) in gates.iter().enumerate() {
        out.push(*g);
        after[i].sort_unstable();
        for &line in &after[i] {
            out.push(Gate::Hadamard(line));
            out.push(Gate::Hadamard(line));
            report.positions.push(Insertion { line, after_gate: i });
        }
    }
    report.inserted_pairs = report.positions.len();
    (
        Circuit {
            qubits: c.qubits(),
            gates: out,
        },
        report,
    )
}

/// Checks the normal-form conditions directly; returns the offending gate
/// index (or `gates.len()` for a final-segment target) on failure.
pub fn normal_form_violation(c: &Circuit) -> Option<usize> {
    let mut open: Vec<Option<bool>> = vec![None; c.qubits()];
    for (i, g) in c.gates().iter().enumerate() {
        match *g {
            Gate::Hadamard(l) => open[l] = None,
            Gate::Toffoli { target, .. } => {
                for l in g.lines() {
                    if open[l].is_some() {
                        return Some(i);
                    }
                    open[l] = Some(l == target);
                }
            }
        }
    }
    open.contains(&Some(true)).then_some(c.gates().len())
}

/// Seeded random circuit: each gate is a Toffoli on three distinct uniform
/// lines with probability `p_toffoli` (forced to 0 when `q < 3`), otherwise a
/// Hadamard on a uniform line. Uses ChaCha8 seeded from `seed`.
pub fn random_circuit(q: usize, n_gates: usize, p_toffoli: f64, seed: u64) -> Circuit {
    assert!(q >= 1, "random_circuit needs at least one qubit");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = if q < 3 { 0.0 } else { p_toffoli };
    let gates = (0..n_gates)
        .map(|_| {
            if p > 0.0 && rng.random::<f64>() < p {
                let lines = sample(&mut rng, q, 3);
                Gate::toffoli(lines.index(0), lines.index(1), lines.index(2))
            } else {
                Gate::Hadamard(rng.random_range(0..q))
            }
        })
        .collect();
    Circuit { qubits: q, gates }
}
