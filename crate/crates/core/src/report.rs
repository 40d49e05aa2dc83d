//! Whole-family sweeps: the enumeration report, the entanglement survey and
//! the self-verification harness behind `djsynth verify`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::boolfn::{enumerate_balanced, Anf, Monomial, TruthTable};
use crate::compiler::{
    classify_construction, gate_counts, synthesize, Circuit, ConstructionType, GateCounts, GateOp,
    SynthesisReport,
};
use crate::dj::{entanglement_profile, run_original, run_refined, zero_amplitude_formula, Verdict};
use crate::error::Result;
use crate::sim::equivalent_diagonal;

#[derive(Debug, Clone, Serialize)]
pub struct ClassRecord {
    pub truth_table: TruthTable,
    pub anf: Vec<Monomial>,
    pub circuit: String,
    #[serde(rename = "type", skip_serializing_if = "Option::is_none")]
    pub construction_type: Option<ConstructionType>,
    pub counts: GateCounts,
    pub zero_amplitude: f64,
    pub fully_product: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct EnumerationReport {
    pub n: usize,
    pub total_balanced: usize,
    pub classes: usize,
    /// Keyed `Type1`..`Type4`; empty unless `n == 3`.
    pub type_counts: BTreeMap<String, usize>,
    pub rows: Vec<ClassRecord>,
}

impl EnumerationReport {
    /// `(phase flips, classes)` histogram for each construction type.
    pub fn phase_flip_distribution(&self) -> BTreeMap<ConstructionType, BTreeMap<usize, usize>> {
        let mut out: BTreeMap<ConstructionType, BTreeMap<usize, usize>> = BTreeMap::new();
        for row in &self.rows {
            if let Some(ty) = row.construction_type {
                *out.entry(ty)
                    .or_default()
                    .entry(row.counts.phase_flip)
                    .or_default() += 1;
            }
        }
        out
    }
}

pub fn enumerate_report(n: usize, tol: f64) -> Result<EnumerationReport> {
    let all = enumerate_balanced(n)?;
    let total_balanced = all.len();
    let mut type_counts = BTreeMap::new();
    if n == 3 {
        for ty in ConstructionType::ALL {
            type_counts.insert(ty.to_string(), 0);
        }
    }
    let mut rows = Vec::new();
    for t in all.into_iter().filter(TruthTable::is_canonical) {
        let synth = SynthesisReport::new(&t);
        if let Some(ty) = synth.construction_type {
            *type_counts.entry(ty.to_string()).or_default() += 1;
        }
        let outcome = run_refined(&t, tol)?;
        let profile = entanglement_profile(&t, tol)?;
        rows.push(ClassRecord {
            anf: synth.anf.monomials().collect(),
            circuit: synth.circuit.emit_text(),
            construction_type: synth.construction_type,
            counts: synth.counts,
            zero_amplitude: outcome.zero_amplitude,
            fully_product: profile.fully_product,
            truth_table: t,
        });
    }
    Ok(EnumerationReport {
        n,
        total_balanced,
        classes: rows.len(),
        type_counts,
        rows,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SurveyRow {
    pub truth_table: TruthTable,
    pub anf: String,
    #[serde(rename = "type", skip_serializing_if = "Option::is_none")]
    pub construction_type: Option<ConstructionType>,
    pub purities: Vec<f64>,
    pub schmidt_ranks: Vec<usize>,
    pub fully_product: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct EntanglementSurvey {
    pub n: usize,
    pub product: usize,
    pub entangled: usize,
    pub rows: Vec<SurveyRow>,
}

/// Purity profile of the post-oracle state for every balanced class.
pub fn entanglement_survey(n: usize, tol: f64) -> Result<EntanglementSurvey> {
    let mut rows = Vec::new();
    for t in enumerate_balanced(n)?
        .into_iter()
        .filter(TruthTable::is_canonical)
    {
        let profile = entanglement_profile(&t, tol)?;
        let synth = SynthesisReport::new(&t);
        rows.push(SurveyRow {
            anf: synth.anf.to_string(),
            construction_type: synth.construction_type,
            purities: profile.purities,
            schmidt_ranks: profile.schmidt_ranks,
            fully_product: profile.fully_product,
            truth_table: t,
        });
    }
    let product = rows.iter().filter(|r| r.fully_product).count();
    Ok(EntanglementSurvey {
        n,
        product,
        entangled: rows.len() - product,
        rows,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub n: usize,
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&CheckResult> {
        self.checks.iter().find(|c| !c.passed)
    }
}

pub const VERIFY_QUBITS: usize = 3;

/// Runs every self-check with the production synthesizer.
pub fn verify(tol: f64) -> VerifyReport {
    verify_with(tol, synthesize)
}

/// Same as [`verify`] with a substitute synthesizer; used to confirm the
/// harness catches a broken compiler.
pub fn verify_with(tol: f64, synth: impl Fn(&Anf) -> Circuit) -> VerifyReport {
    let n = VERIFY_QUBITS;
    let checks = vec![
        check("oracle-equivalence", || oracle_equivalence(n, tol, &synth)),
        check("census", || census(n, &synth)),
        check("refined-original-agreement", || refined_original(n, tol)),
        check("formula-agreement", || formula_agreement(n, tol)),
    ];
    VerifyReport { n, checks }
}

fn check(
    name: &'static str,
    run: impl FnOnce() -> std::result::Result<String, String>,
) -> CheckResult {
    match run() {
        Ok(detail) => CheckResult {
            name,
            passed: true,
            detail,
        },
        Err(detail) => CheckResult {
            name,
            passed: false,
            detail,
        },
    }
}

fn promise_tables(n: usize) -> std::result::Result<Vec<TruthTable>, String> {
    let mut tables = enumerate_balanced(n).map_err(|e| e.to_string())?;
    for v in [false, true] {
        tables.push(TruthTable::constant(n, v).map_err(|e| e.to_string())?);
    }
    Ok(tables)
}

fn oracle_equivalence(
    n: usize,
    tol: f64,
    synth: &impl Fn(&Anf) -> Circuit,
) -> std::result::Result<String, String> {
    let mut count = 0;
    for t in crate::boolfn::all_truth_tables(n) {
        let anf = t.anf();
        let circuit = synth(&anf);
        let got = equivalent_diagonal(&circuit, &t, tol).map_err(|e| format!("{t}: {e}"))?;
        let want = if anf.constant_term() { -1 } else { 1 };
        if !got.matches || got.global_sign != want {
            return Err(format!(
                "{t}: circuit does not implement the phase oracle (match={}, sign={})",
                got.matches, got.global_sign
            ));
        }
        count += 1;
    }
    Ok(format!(
        "{count} truth tables match up to the dropped constant term"
    ))
}

fn census(n: usize, synth: &impl Fn(&Anf) -> Circuit) -> std::result::Result<String, String> {
    let balanced = enumerate_balanced(n).map_err(|e| e.to_string())?;
    if balanced.len() != 70 {
        return Err(format!(
            "{} balanced functions, expected 70",
            balanced.len()
        ));
    }
    let mut counts = [0usize; 4];
    let mut max_cp = 0;
    let mut classes = 0;
    for t in &balanced {
        let circuit = synth(&t.anf());
        let gc = gate_counts(&circuit);
        if gc.multi_controlled_z > 0 {
            return Err(format!("{t}: balanced oracle needs a multi-controlled Z"));
        }
        if t.is_canonical() {
            classes += 1;
            max_cp = max_cp.max(gc.controlled_phase);
            let ty = classify_construction(&circuit).map_err(|e| format!("{t}: {e}"))?;
            counts[ty.index()] += 1;
        }
    }
    if classes != 35 {
        return Err(format!("{classes} classes, expected 35"));
    }
    if counts != [7, 12, 12, 4] {
        return Err(format!("type counts {counts:?}, expected [7, 12, 12, 4]"));
    }
    if max_cp != 3 {
        return Err(format!("max CZ count {max_cp}, expected 3"));
    }
    Ok("70 balanced, 35 classes, types 7/12/12/4, at most 3 CZ".into())
}

fn refined_original(n: usize, tol: f64) -> std::result::Result<String, String> {
    let tables = promise_tables(n)?;
    for t in &tables {
        let r = run_refined(t, tol).map_err(|e| format!("{t}: refined: {e}"))?;
        let o = run_original(t, tol).map_err(|e| format!("{t}: original: {e}"))?;
        if Some(r.verdict) != Verdict::expected(t.classify()) {
            return Err(format!("{t}: refined verdict {} is wrong", r.verdict));
        }
        if r.verdict != o.verdict {
            return Err(format!(
                "{t}: refined {} vs original {}",
                r.verdict, o.verdict
            ));
        }
        let purity = o.working_qubit_purity.unwrap_or(0.0);
        if (purity - 1.0).abs() > tol {
            return Err(format!("{t}: working qubit purity {purity}"));
        }
    }
    Ok(format!(
        "{} promise tables agree; working qubit stays pure",
        tables.len()
    ))
}

fn formula_agreement(n: usize, tol: f64) -> std::result::Result<String, String> {
    let tables = promise_tables(n)?;
    for t in &tables {
        let sim = run_refined(t, tol)
            .map_err(|e| format!("{t}: {e}"))?
            .zero_amplitude;
        let formula = zero_amplitude_formula(t);
        if (sim - formula).abs() > tol {
            return Err(format!("{t}: simulated {sim} vs formula {formula}"));
        }
    }
    Ok(format!(
        "{} promise tables agree with the closed form",
        tables.len()
    ))
}

/// Test helper: a synthesizer that silently drops every CZ.
#[doc(hidden)]
pub fn drop_controlled_phase(a: &Anf) -> Circuit {
    let full = synthesize(a);
    let gates = full
        .gates()
        .iter()
        .filter(|g| !matches!(g, GateOp::ControlledPhase(..)))
        .cloned()
        .collect();
    Circuit::from_gates(full.n(), gates).expect("subset of a valid circuit")
}
