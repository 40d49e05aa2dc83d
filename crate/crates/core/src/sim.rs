//! Dense statevector simulation.
//!
//! Amplitude `i` belongs to basis state `|b1 b2 … bn⟩` with `b1` the most
//! significant bit of `i`, the same convention as [`crate::boolfn`].

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::boolfn::{qubit_mask, TruthTable};
use crate::compiler::{Circuit, GateOp};
use crate::error::{Error, Result};

pub const MAX_QUBITS: usize = 20;

/// Default numeric tolerance for equivalence and purity checks.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Largest register swept basis-state by basis-state in [`equivalent_diagonal`].
pub const MAX_EQUIVALENCE_QUBITS: usize = 12;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn basis_state(n: usize, index: usize) -> Result<Self> {
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::QubitCount(n, 1, MAX_QUBITS));
        }
        if index >= 1 << n {
            return Err(Error::IndexOutOfRange { index, n });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(StateVector { n, amps })
    }

    /// Wraps raw amplitudes. The caller is responsible for normalization;
    /// [`StateVector::norm_sqr`] can check it.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() || len > 1 << MAX_QUBITS {
            return Err(Error::BadLength(len));
        }
        Ok(StateVector {
            n: len.trailing_zeros() as usize,
            amps,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> Result<Complex64> {
        self.amps
            .get(index)
            .copied()
            .ok_or(Error::IndexOutOfRange { index, n: self.n })
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q == 0 || q > self.n {
            return Err(Error::QubitOutOfRange {
                qubit: q,
                n: self.n,
            });
        }
        Ok(())
    }

    /// Negates every amplitude whose index has all bits of `mask` set.
    fn flip_where_all(&mut self, mask: usize) {
        for (i, a) in self.amps.iter_mut().enumerate() {
            if i & mask == mask {
                *a = -*a;
            }
        }
    }

    fn hadamard(&mut self, q: usize) {
        let bit = qubit_mask(self.n, q);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                let (a0, a1) = (self.amps[i], self.amps[i | bit]);
                self.amps[i] = (a0 + a1) * s;
                self.amps[i | bit] = (a0 - a1) * s;
            }
        }
    }

    pub fn apply_gate(&mut self, gate: &GateOp) -> Result<()> {
        let qubits = gate.qubits();
        for &q in &qubits {
            self.check_qubit(q)?;
        }
        match gate {
            GateOp::Hadamard(q) => self.hadamard(*q),
            _ => {
                let mask = qubits.iter().fold(0, |m, &q| m | qubit_mask(self.n, q));
                self.flip_where_all(mask);
            }
        }
        Ok(())
    }

    pub fn apply_circuit(&mut self, circuit: &Circuit) -> Result<()> {
        if circuit.n() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: circuit.n(),
            });
        }
        for g in circuit.gates() {
            self.apply_gate(g)?;
        }
        Ok(())
    }

    pub fn apply_hadamard_all(&mut self) {
        for q in 1..=self.n {
            self.hadamard(q);
        }
    }

    /// Multiplies amplitude `i` by `(-1)^f(i)`, no global phase dropped.
    pub fn apply_phase_oracle(&mut self, t: &TruthTable) -> Result<()> {
        if t.n() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: t.n(),
            });
        }
        for (a, &v) in self.amps.iter_mut().zip(t.values()) {
            if v {
                *a = -*a;
            }
        }
        Ok(())
    }

    /// Bit oracle `|x⟩|y⟩ → |x⟩|y ⊕ f(x)⟩`. `t` is over every qubit except
    /// `target`, in their original order.
    pub fn apply_xor_oracle(&mut self, t: &TruthTable, target: usize) -> Result<()> {
        self.check_qubit(target)?;
        if t.n() + 1 != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n - 1,
                found: t.n(),
            });
        }
        let bit = qubit_mask(self.n, target);
        let low = bit - 1;
        for i in 0..self.amps.len() {
            if i & bit != 0 {
                continue;
            }
            // Drop the target bit to get the input index.
            let x = ((i >> 1) & !low) | (i & low);
            if t.get(x) {
                self.amps.swap(i, i | bit);
            }
        }
        Ok(())
    }

    /// Measurement histogram; see [`sample_probabilities`].
    pub fn sample(&self, shots: u64, seed: u64) -> Result<BTreeMap<usize, u64>> {
        sample_probabilities(&self.probabilities(), shots, seed)
    }

    /// Single-qubit reduced density matrix `[[ρ00, ρ01], [ρ10, ρ11]]` of
    /// qubit `q`, tracing out the rest.
    pub fn reduced_density(&self, q: usize) -> Result<[[Complex64; 2]; 2]> {
        self.check_qubit(q)?;
        let bit = qubit_mask(self.n, q);
        let mut rho = [[Complex64::new(0.0, 0.0); 2]; 2];
        for i in (0..self.amps.len()).filter(|i| i & bit == 0) {
            let (a0, a1) = (self.amps[i], self.amps[i | bit]);
            rho[0][0] += a0 * a0.conj();
            rho[0][1] += a0 * a1.conj();
            rho[1][1] += a1 * a1.conj();
        }
        rho[1][0] = rho[0][1].conj();
        Ok(rho)
    }

    pub fn entanglement_diagnostics(&self, tol: f64) -> Result<EntanglementProfile> {
        entanglement_diagnostics(self, tol)
    }
}

/// Draws `shots` samples from `probs` by inverse CDF over a ChaCha8 stream
/// seeded with `seed`. Keys are basis indices; only observed indices appear.
pub fn sample_probabilities(probs: &[f64], shots: u64, seed: u64) -> Result<BTreeMap<usize, u64>> {
    if shots == 0 {
        return Err(Error::ZeroShots);
    }
    let mut cdf = Vec::with_capacity(probs.len());
    let mut acc = 0.0;
    for &p in probs {
        acc += p;
        cdf.push(acc);
    }
    // Rounding can leave the tail a hair short of `acc`; never land on a
    // zero-probability trailing index.
    let last_nonzero = probs.iter().rposition(|&p| p > 0.0).unwrap_or(0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hist = BTreeMap::new();
    for _ in 0..shots {
        let u = rng.gen::<f64>() * acc;
        let idx = cdf.partition_point(|&c| c <= u).min(last_nonzero);
        *hist.entry(idx).or_insert(0) += 1;
    }
    Ok(hist)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntanglementProfile {
    /// `Tr(ρ_q²)` for qubits 1..=n.
    pub purities: Vec<f64>,
    /// Schmidt rank of the cut `{q} | rest`, one per qubit.
    pub schmidt_ranks: Vec<usize>,
    pub fully_product: bool,
}

impl EntanglementProfile {
    pub fn min_purity(&self) -> f64 {
        self.purities.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Reduced purity and Schmidt rank for every single-qubit cut of a pure
/// state. For pure states the state is a full product iff every single-qubit
/// marginal is pure.
pub fn entanglement_diagnostics(s: &StateVector, tol: f64) -> Result<EntanglementProfile> {
    let norm = s.norm_sqr();
    if (norm - 1.0).abs() > 1e-6 {
        return Err(Error::Unnormalized(norm));
    }
    let mut purities = Vec::with_capacity(s.n);
    let mut schmidt_ranks = Vec::with_capacity(s.n);
    for q in 1..=s.n {
        let rho = s.reduced_density(q)?;
        let (p00, p11, off) = (rho[0][0].re, rho[1][1].re, rho[0][1].norm_sqr());
        purities.push(p00 * p00 + p11 * p11 + 2.0 * off);
        // Eigenvalues of ρ are the squared singular values of the 2 × 2^(n-1)
        // coefficient matrix.
        let trace = p00 + p11;
        let disc = ((p00 - p11).powi(2) + 4.0 * off).sqrt();
        let eigen = [(trace + disc) / 2.0, (trace - disc) / 2.0];
        schmidt_ranks.push(eigen.iter().filter(|&&l| l.max(0.0).sqrt() > tol).count());
    }
    let fully_product = purities.iter().all(|&p| p >= 1.0 - tol);
    Ok(EntanglementProfile {
        purities,
        schmidt_ranks,
        fully_product,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DiagonalCheck {
    pub matches: bool,
    /// `+1` or `-1`; meaningful only when `matches`.
    pub global_sign: i8,
}

/// Sweeps every basis state through `c` and checks that it acts as
/// `s · (-1)^f(x)` with one consistent sign `s`.
pub fn equivalent_diagonal(c: &Circuit, t: &TruthTable, tol: f64) -> Result<DiagonalCheck> {
    let n = c.n();
    if t.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: t.n(),
        });
    }
    if n > MAX_EQUIVALENCE_QUBITS {
        return Err(Error::QubitCount(n, 1, MAX_EQUIVALENCE_QUBITS));
    }
    let mut sign: Option<f64> = None;
    for x in 0..1usize << n {
        let mut s = StateVector::basis_state(n, x)?;
        s.apply_circuit(c)?;
        let phase = if t.get(x) { -1.0 } else { 1.0 };
        let observed = s.amps[x].re * phase;
        let this_sign = if observed < 0.0 { -1.0 } else { 1.0 };
        let expected_sign = *sign.get_or_insert(this_sign);
        let ok = s.amps.iter().enumerate().all(|(i, a)| {
            let want = if i == x { expected_sign * phase } else { 0.0 };
            (a.re - want).abs() <= tol && a.im.abs() <= tol
        });
        if !ok {
            return Ok(DiagonalCheck {
                matches: false,
                global_sign: expected_sign as i8,
            });
        }
    }
    Ok(DiagonalCheck {
        matches: true,
        global_sign: sign.unwrap_or(1.0) as i8,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compiler::synthesize;

    const TOL: f64 = 1e-9;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn close(a: &StateVector, b: &StateVector, tol: f64) -> bool {
        a.n == b.n
            && a.amps
                .iter()
                .zip(&b.amps)
                .all(|(x, y)| (x - y).norm() <= tol)
    }

    fn tt(s: &str) -> TruthTable {
        s.parse().unwrap()
    }

    fn uniform(n: usize) -> StateVector {
        let mut s = StateVector::basis_state(n, 0).unwrap();
        s.apply_hadamard_all();
        s
    }

    #[test]
    fn basis_state_examples() {
        let s = StateVector::basis_state(3, 0).unwrap();
        assert_eq!(s.amplitude(0).unwrap(), c(1.0));
        let s = StateVector::basis_state(3, 5).unwrap();
        assert_eq!(s.amplitude(5).unwrap(), c(1.0));
        assert_eq!(s.probabilities().iter().sum::<f64>(), 1.0);
        assert!(StateVector::basis_state(3, 8).is_err());
        assert!(StateVector::basis_state(0, 0).is_err());
        assert!(StateVector::basis_state(21, 0).is_err());
    }

    #[test]
    fn gate_examples() {
        let mut s = StateVector::basis_state(3, 0b110).unwrap();
        s.apply_gate(&GateOp::ControlledPhase(1, 2)).unwrap();
        assert_eq!(s.amplitude(0b110).unwrap(), c(-1.0));

        let mut s = StateVector::basis_state(3, 0).unwrap();
        s.apply_gate(&GateOp::PhaseFlip(1)).unwrap();
        assert_eq!(s.amplitude(0).unwrap(), c(1.0));

        let mut s = StateVector::basis_state(3, 0b100).unwrap();
        s.apply_gate(&GateOp::PhaseFlip(1)).unwrap();
        assert_eq!(s.amplitude(0b100).unwrap(), c(-1.0));

        let mut s = StateVector::basis_state(3, 0b111).unwrap();
        s.apply_gate(&GateOp::MultiControlledZ(vec![1, 2, 3]))
            .unwrap();
        assert_eq!(s.amplitude(0b111).unwrap(), c(-1.0));

        assert!(s.apply_gate(&GateOp::PhaseFlip(4)).is_err());
    }

    #[test]
    fn cp_gate_truth_table() {
        // |00⟩,|01⟩,|10⟩ unchanged, |11⟩ negated, in every qubit pair.
        for (j, k) in [(1, 2), (1, 3), (2, 3)] {
            for x in 0..8usize {
                let mut s = StateVector::basis_state(3, x).unwrap();
                s.apply_gate(&GateOp::controlled_phase(k, j)).unwrap();
                let both = x & qubit_mask(3, j) != 0 && x & qubit_mask(3, k) != 0;
                assert_eq!(s.amplitude(x).unwrap(), c(if both { -1.0 } else { 1.0 }));
            }
        }
    }

    #[test]
    fn hadamard_examples() {
        let mut s = StateVector::basis_state(1, 0).unwrap();
        s.apply_gate(&GateOp::Hadamard(1)).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((s.amplitude(0).unwrap() - c(r)).norm() < 1e-15);
        assert!((s.amplitude(1).unwrap() - c(r)).norm() < 1e-15);

        let mut s = StateVector::basis_state(1, 1).unwrap();
        s.apply_gate(&GateOp::Hadamard(1)).unwrap();
        assert!((s.amplitude(1).unwrap() - c(-r)).norm() < 1e-15);

        let s0 = uniform(3);
        let mut s = s0.clone();
        s.apply_gate(&GateOp::Hadamard(2)).unwrap();
        s.apply_gate(&GateOp::Hadamard(2)).unwrap();
        assert!(close(&s, &s0, 1e-12));
    }

    #[test]
    fn circuit_examples() {
        let s0 = StateVector::basis_state(3, 3).unwrap();
        let mut s = s0.clone();
        s.apply_circuit(&Circuit::new(3)).unwrap();
        assert_eq!(s, s0);

        let hh = Circuit::from_gates(3, vec![GateOp::Hadamard(1), GateOp::Hadamard(1)]).unwrap();
        s.apply_circuit(&hh).unwrap();
        assert!(close(&s, &s0, 1e-12));

        assert!(s.apply_circuit(&Circuit::new(2)).is_err());

        let mut s = uniform(3);
        s.apply_circuit(&synthesize(&tt("00001111").anf())).unwrap();
        let amp = 8f64.sqrt().recip();
        for x in 0..8 {
            let want = if x >= 4 { -amp } else { amp };
            assert!((s.amplitude(x).unwrap() - c(want)).norm() < TOL);
        }
    }

    #[test]
    fn hadamard_all_examples() {
        let s = uniform(3);
        for a in s.amplitudes() {
            assert!((a - c(8f64.sqrt().recip())).norm() < 1e-15);
        }

        let mut s = StateVector::basis_state(3, 0b100).unwrap();
        s.apply_hadamard_all();
        // Row 4 of H⊗H⊗H: sign (-1)^(x1) since only b1 is set.
        for x in 0..8 {
            let want = if x >= 4 { -1.0 } else { 1.0 } / 8f64.sqrt();
            assert!((s.amplitude(x).unwrap() - c(want)).norm() < 1e-15);
        }
        s.apply_hadamard_all();
        assert!(close(&s, &StateVector::basis_state(3, 4).unwrap(), 1e-12));
    }

    #[test]
    fn phase_oracle_examples() {
        let s0 = uniform(3);
        let mut s = s0.clone();
        s.apply_phase_oracle(&tt("00000000")).unwrap();
        assert_eq!(s, s0);

        let mut s = s0.clone();
        s.apply_phase_oracle(&tt("11111111")).unwrap();
        for (a, b) in s.amplitudes().iter().zip(s0.amplitudes()) {
            assert_eq!(*a, -*b);
        }

        let mut s = s0.clone();
        s.apply_phase_oracle(&tt("00001111")).unwrap();
        for x in 0..8 {
            let sign = if x >= 4 { -1.0 } else { 1.0 };
            assert_eq!(s.amplitude(x).unwrap(), s0.amplitude(x).unwrap() * sign);
        }

        assert!(s.apply_phase_oracle(&tt("0110")).is_err());
    }

    #[test]
    fn amplitude_and_probability_examples() {
        assert_eq!(
            StateVector::basis_state(3, 0)
                .unwrap()
                .amplitude(0)
                .unwrap(),
            c(1.0)
        );
        assert!(StateVector::basis_state(3, 0)
            .unwrap()
            .amplitude(8)
            .is_err());
        let u = uniform(3);
        for p in u.probabilities() {
            assert!((p - 0.125).abs() < 1e-15);
        }
        assert_eq!(
            StateVector::basis_state(3, 0).unwrap().probabilities(),
            vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]
        );
    }

    #[test]
    fn xor_oracle_is_the_bit_oracle() {
        let t = tt("01010110");
        for x in 0..8 {
            for y in 0..2 {
                // Working qubit is the last, i.e. least significant bit.
                let mut s = StateVector::basis_state(4, (x << 1) | y).unwrap();
                s.apply_xor_oracle(&t, 4).unwrap();
                let out = (x << 1) | (y ^ usize::from(t.get(x)));
                assert_eq!(s.amplitude(out).unwrap(), c(1.0));
            }
        }
        // Middle target: input bits are qubits 1 and 3.
        let t = tt("0001");
        for i in 0..8usize {
            let mut s = StateVector::basis_state(3, i).unwrap();
            s.apply_xor_oracle(&t, 2).unwrap();
            let x = ((i >> 2) << 1) | (i & 1);
            let out = if t.get(x) { i ^ 0b010 } else { i };
            assert_eq!(s.amplitude(out).unwrap(), c(1.0));
        }
    }

    #[test]
    fn sample_examples() {
        let s = StateVector::basis_state(3, 0).unwrap();
        let h = s.sample(100, 7).unwrap();
        assert_eq!(h.into_iter().collect::<Vec<_>>(), vec![(0, 100)]);

        let u = uniform(3);
        let h = u.sample(8000, 0).unwrap();
        assert_eq!(h.values().sum::<u64>(), 8000);
        // mean 1000, sd ≈ 29.6; ±4σ ≈ ±120, well inside the 800..=1200 band.
        for x in 0..8 {
            let count = h.get(&x).copied().unwrap_or(0);
            assert!((800..=1200).contains(&count), "index {x}: {count}");
        }
        assert_eq!(u.sample(8000, 0).unwrap(), h);
        assert!(u.sample(0, 0).is_err());

        let s = StateVector::basis_state(3, 7).unwrap();
        assert_eq!(
            s.sample(50, 3).unwrap().into_iter().collect::<Vec<_>>(),
            vec![(7, 50)]
        );
    }

    #[test]
    fn entanglement_examples() {
        let p = entanglement_diagnostics(&StateVector::basis_state(3, 0).unwrap(), TOL).unwrap();
        assert_eq!(p.purities, vec![1.0, 1.0, 1.0]);
        assert_eq!(p.schmidt_ranks, vec![1, 1, 1]);
        assert!(p.fully_product);

        let r = std::f64::consts::FRAC_1_SQRT_2;
        let bell = StateVector::from_amplitudes(vec![
            c(r),
            c(0.0),
            c(0.0),
            c(0.0),
            c(0.0),
            c(0.0),
            c(r),
            c(0.0),
        ])
        .unwrap();
        let p = entanglement_diagnostics(&bell, TOL).unwrap();
        for (got, want) in p.purities.iter().zip([0.5, 0.5, 1.0]) {
            assert!((got - want).abs() < 1e-12);
        }
        assert_eq!(p.schmidt_ranks, vec![2, 2, 1]);
        assert!(!p.fully_product);

        let mut psi2 = uniform(3);
        psi2.apply_phase_oracle(&tt("01010110")).unwrap();
        let p = entanglement_diagnostics(&psi2, TOL).unwrap();
        for (got, want) in p.purities.iter().zip([0.5, 0.5, 1.0]) {
            assert!((got - want).abs() < 1e-12);
        }
        assert!(!p.fully_product);

        let unnormalized = StateVector::from_amplitudes(vec![c(1.0), c(1.0)]).unwrap();
        assert!(matches!(
            entanglement_diagnostics(&unnormalized, TOL),
            Err(Error::Unnormalized(_))
        ));
    }

    #[test]
    fn reduced_density_of_plus_state() {
        let s = uniform(1);
        let rho = s.reduced_density(1).unwrap();
        for row in rho {
            for e in row {
                assert!((e - c(0.5)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn equivalent_diagonal_examples() {
        let check = |gates: Vec<GateOp>, t: &str| {
            let c = Circuit::from_gates(3, gates).unwrap();
            equivalent_diagonal(&c, &tt(t), TOL).unwrap()
        };
        assert_eq!(
            check(vec![], "00000000"),
            DiagonalCheck {
                matches: true,
                global_sign: 1
            }
        );
        assert_eq!(
            check(vec![GateOp::PhaseFlip(1)], "00001111"),
            DiagonalCheck {
                matches: true,
                global_sign: 1
            }
        );
        assert_eq!(
            check(vec![GateOp::PhaseFlip(1)], "11110000"),
            DiagonalCheck {
                matches: true,
                global_sign: -1
            }
        );
        assert!(!check(vec![GateOp::PhaseFlip(2)], "00001111").matches);
        assert!(!check(vec![GateOp::Hadamard(1)], "00000000").matches);
        assert!(equivalent_diagonal(&Circuit::new(2), &tt("00000000"), TOL).is_err());
    }
}

#[cfg(test)]
mod proptests {
    use super::*;
    use proptest::prelude::*;

    const N: usize = 4;

    fn state() -> impl Strategy<Value = StateVector> {
        proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1 << N)
            .prop_filter("nonzero", |v| {
                v.iter().any(|(a, b)| a.abs() + b.abs() > 1e-3)
            })
            .prop_map(|v| {
                let amps: Vec<Complex64> =
                    v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect();
                let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
                StateVector::from_amplitudes(amps.into_iter().map(|a| a / norm).collect()).unwrap()
            })
    }

    fn diagonal_gate() -> impl Strategy<Value = GateOp> {
        prop_oneof![
            (1..=N).prop_map(GateOp::PhaseFlip),
            (1..=N, 1..=N)
                .prop_filter("distinct", |(a, b)| a != b)
                .prop_map(|(a, b)| GateOp::controlled_phase(a, b)),
            proptest::sample::subsequence((1..=N).collect::<Vec<_>>(), 3..=N)
                .prop_map(GateOp::MultiControlledZ),
        ]
    }

    fn any_gate() -> impl Strategy<Value = GateOp> {
        prop_oneof![diagonal_gate(), (1..=N).prop_map(GateOp::Hadamard)]
    }

    proptest! {
        #[test]
        fn gates_preserve_norm(mut s in state(), g in any_gate()) {
            let before = s.norm_sqr();
            s.apply_gate(&g).unwrap();
            prop_assert!((s.norm_sqr() - before).abs() <= 1e-12);
        }

        #[test]
        fn diagonal_gates_commute(s in state(), g1 in diagonal_gate(), g2 in diagonal_gate()) {
            let mut a = s.clone();
            a.apply_gate(&g1).unwrap();
            a.apply_gate(&g2).unwrap();
            let mut b = s;
            b.apply_gate(&g2).unwrap();
            b.apply_gate(&g1).unwrap();
            prop_assert_eq!(a, b);
        }

        #[test]
        fn hadamard_all_is_an_involution(s in state()) {
            let mut t = s.clone();
            t.apply_hadamard_all();
            t.apply_hadamard_all();
            for (x, y) in t.amplitudes().iter().zip(s.amplitudes()) {
                prop_assert!((x - y).norm() <= 1e-12);
            }
        }

        #[test]
        fn sampling_is_deterministic(s in state(), shots in 1u64..500, seed in any::<u64>()) {
            prop_assert_eq!(s.sample(shots, seed).unwrap(), s.sample(shots, seed).unwrap());
        }
    }
}
