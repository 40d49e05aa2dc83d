//! Phase-oracle synthesis from algebraic normal form.
//!
//! Each ANF monomial becomes one diagonal gate: a degree-1 term is a `Z`
//! (phase flip), a degree-2 term a `CZ`, and anything larger a multi-controlled
//! `Z`. The constant term only contributes a global sign and is dropped.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::boolfn::{Anf, Monomial, TruthTable};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GateOp {
    PhaseFlip(usize),
    /// Stored with the smaller qubit first.
    ControlledPhase(usize, usize),
    /// Three or more qubits, ascending.
    MultiControlledZ(Vec<usize>),
    Hadamard(usize),
}

impl GateOp {
    /// Symmetric CZ; the pair is normalized so the smaller index comes first.
    pub fn controlled_phase(a: usize, b: usize) -> Self {
        GateOp::ControlledPhase(a.min(b), a.max(b))
    }

    /// Builds the diagonal gate that flips the sign where every qubit of
    /// `qubits` is 1. Returns `None` for an empty set.
    pub fn phase_on(qubits: &[usize]) -> Option<Self> {
        let mut qs = qubits.to_vec();
        qs.sort_unstable();
        qs.dedup();
        match qs.as_slice() {
            [] => None,
            [q] => Some(GateOp::PhaseFlip(*q)),
            [j, k] => Some(GateOp::ControlledPhase(*j, *k)),
            _ => Some(GateOp::MultiControlledZ(qs)),
        }
    }

    pub fn qubits(&self) -> Vec<usize> {
        match self {
            GateOp::PhaseFlip(q) | GateOp::Hadamard(q) => vec![*q],
            GateOp::ControlledPhase(j, k) => vec![*j, *k],
            GateOp::MultiControlledZ(qs) => qs.clone(),
        }
    }

    pub fn is_diagonal(&self) -> bool {
        !matches!(self, GateOp::Hadamard(_))
    }

    pub fn mnemonic(&self) -> &'static str {
        match self {
            GateOp::PhaseFlip(_) => "z",
            GateOp::ControlledPhase(..) => "cz",
            GateOp::MultiControlledZ(_) => "ccz",
            GateOp::Hadamard(_) => "h",
        }
    }

    fn check(&self, n: usize) -> Result<()> {
        for q in self.qubits() {
            if q == 0 || q > n {
                return Err(Error::QubitOutOfRange { qubit: q, n });
            }
        }
        Ok(())
    }
}

impl fmt::Display for GateOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.mnemonic())?;
        for q in self.qubits() {
            write!(f, " {q}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    n: usize,
    gates: Vec<GateOp>,
}

impl Circuit {
    pub fn new(n: usize) -> Self {
        Circuit {
            n,
            gates: Vec::new(),
        }
    }

    pub fn from_gates(n: usize, gates: Vec<GateOp>) -> Result<Self> {
        let mut c = Circuit::new(n);
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn push(&mut self, gate: GateOp) -> Result<()> {
        gate.check(self.n)?;
        self.gates.push(gate);
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gates(&self) -> &[GateOp] {
        &self.gates
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn gate_counts(&self) -> GateCounts {
        gate_counts(self)
    }

    pub fn emit_text(&self) -> String {
        emit_text(self)
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&emit_text(self))
    }
}

impl FromStr for Circuit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_text(s)
    }
}

impl Serialize for Circuit {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&emit_text(self))
    }
}

/// Compiles `a` into a diagonal circuit equal to `diag((-1)^(f(x) ⊕ c))`,
/// where `c` is the constant ANF term. Gates come out as all phase flips by
/// qubit, then CZs, then multi-controlled Zs, each group in lexicographic
/// order.
pub fn synthesize(a: &Anf) -> Circuit {
    let mut monomials: Vec<Monomial> = a.monomials().filter(|m| !m.is_constant()).collect();
    monomials.sort_by(|x, y| x.degree().min(3).cmp(&y.degree().min(3)).then(x.cmp(y)));
    let gates = monomials
        .into_iter()
        .filter_map(|m| GateOp::phase_on(&m.qubits().collect::<Vec<_>>()))
        .collect();
    Circuit { n: a.n(), gates }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ConstructionType {
    Type1,
    Type2,
    Type3,
    Type4,
}

impl ConstructionType {
    pub const ALL: [ConstructionType; 4] = [
        ConstructionType::Type1,
        ConstructionType::Type2,
        ConstructionType::Type3,
        ConstructionType::Type4,
    ];

    /// 1-based type number.
    pub fn number(self) -> usize {
        self as usize + 1
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for ConstructionType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Type{}", self.number())
    }
}

/// Type is one plus the number of CZ gates. Only defined for three-qubit
/// oracles built from phase flips and CZs.
pub fn classify_construction(c: &Circuit) -> Result<ConstructionType> {
    if c.n != 3 {
        return Err(Error::Construction(format!(
            "defined for 3 qubits only, got {}",
            c.n
        )));
    }
    let counts = gate_counts(c);
    if counts.multi_controlled_z > 0 {
        return Err(Error::Construction(
            "circuit contains a multi-controlled Z".into(),
        ));
    }
    if counts.hadamard > 0 {
        return Err(Error::Construction("circuit contains a Hadamard".into()));
    }
    ConstructionType::ALL
        .get(counts.controlled_phase)
        .copied()
        .ok_or_else(|| {
            Error::Construction(format!(
                "{} controlled-phase gates, at most 3 allowed",
                counts.controlled_phase
            ))
        })
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct GateCounts {
    pub phase_flip: usize,
    pub controlled_phase: usize,
    pub multi_controlled_z: usize,
    pub hadamard: usize,
}

impl GateCounts {
    pub fn total(&self) -> usize {
        self.phase_flip + self.controlled_phase + self.multi_controlled_z + self.hadamard
    }
}

pub fn gate_counts(c: &Circuit) -> GateCounts {
    let mut counts = GateCounts::default();
    for g in &c.gates {
        match g {
            GateOp::PhaseFlip(_) => counts.phase_flip += 1,
            GateOp::ControlledPhase(..) => counts.controlled_phase += 1,
            GateOp::MultiControlledZ(_) => counts.multi_controlled_z += 1,
            GateOp::Hadamard(_) => counts.hadamard += 1,
        }
    }
    counts
}

/// Everything known about one compiled oracle.
#[derive(Debug, Clone, Serialize)]
pub struct SynthesisReport {
    pub truth_table: TruthTable,
    pub anf: Anf,
    pub circuit: Circuit,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub construction_type: Option<ConstructionType>,
    pub counts: GateCounts,
    /// True when the ANF had a constant term; the circuit then implements
    /// `-U_f`.
    pub dropped_global_sign: bool,
}

impl SynthesisReport {
    pub fn new(t: &TruthTable) -> Self {
        let anf = t.anf();
        let circuit = synthesize(&anf);
        let construction_type = if t.n() == 3 {
            classify_construction(&circuit).ok()
        } else {
            None
        };
        SynthesisReport {
            truth_table: t.clone(),
            counts: gate_counts(&circuit),
            dropped_global_sign: anf.constant_term(),
            anf,
            circuit,
            construction_type,
        }
    }

    /// `+1` or `-1`: the sign the circuit differs from `U_f` by.
    pub fn global_sign(&self) -> i8 {
        if self.dropped_global_sign {
            -1
        } else {
            1
        }
    }
}

pub fn emit_text(c: &Circuit) -> String {
    let mut out = format!("qubits {}\n", c.n);
    for g in &c.gates {
        out.push_str(&g.to_string());
        out.push('\n');
    }
    out
}

pub fn parse_text(text: &str) -> Result<Circuit> {
    let mut circuit: Option<Circuit> = None;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let err = |message: String| Error::Parse {
            line: line_no,
            message,
        };
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let mnemonic = tokens.next().unwrap_or_default();
        let args = tokens
            .map(|tok| {
                tok.parse::<usize>()
                    .map_err(|_| err(format!("invalid integer {tok:?}")))
            })
            .collect::<Result<Vec<_>>>()?;

        let Some(c) = circuit.as_mut() else {
            if mnemonic != "qubits" {
                return Err(err("missing \"qubits\" header".into()));
            }
            match args.as_slice() {
                [n] if *n >= 1 => circuit = Some(Circuit::new(*n)),
                _ => return Err(err("header must be \"qubits <n>\" with n >= 1".into())),
            }
            continue;
        };

        let arity_ok = match mnemonic {
            "z" | "h" => args.len() == 1,
            "cz" => args.len() == 2,
            "ccz" => args.len() >= 3,
            "qubits" => return Err(err("duplicate \"qubits\" header".into())),
            other => return Err(err(format!("unknown mnemonic {other:?}"))),
        };
        if !arity_ok {
            return Err(err(format!(
                "wrong number of qubits ({}) for {mnemonic:?}",
                args.len()
            )));
        }
        let mut sorted = args.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(err(format!("duplicate qubit in {mnemonic:?}")));
        }
        let gate = match mnemonic {
            "z" => GateOp::PhaseFlip(args[0]),
            "h" => GateOp::Hadamard(args[0]),
            "cz" => GateOp::controlled_phase(args[0], args[1]),
            _ => GateOp::MultiControlledZ(sorted),
        };
        c.push(gate).map_err(|e| err(e.to_string()))?;
    }
    circuit.ok_or(Error::Parse {
        line: 0,
        message: "missing \"qubits\" header".into(),
    })
}


#[cfg(test)]
mod proptests {
    use super::*;
    use proptest::prelude::*;

    fn gate(n: usize) -> impl Strategy<Value = GateOp> {
        prop_oneof![
            (1..=n).prop_map(GateOp::PhaseFlip),
            (1..=n).prop_map(GateOp::Hadamard),
            (1..=n, 1..=n)
                .prop_filter("distinct", |(a, b)| a != b)
                .prop_map(|(a, b)| GateOp::controlled_phase(a, b)),
            proptest::sample::subsequence((1..=n).collect::<Vec<_>>(), 3..=n)
                .prop_map(GateOp::MultiControlledZ),
        ]
    }

    proptest! {
        #[test]
        fn text_round_trip(gates in proptest::collection::vec(gate(5), 0..12)) {
            let c = Circuit::from_gates(5, gates).unwrap();
            prop_assert_eq!(parse_text(&emit_text(&c)).unwrap(), c);
        }
    }
}
