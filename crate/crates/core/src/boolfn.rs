//! Boolean functions on `n` inputs: truth tables, algebraic normal form and
//! enumeration of the balanced functions.
//!
//! Indexing is big-endian throughout the crate: entry `i` of a truth table is
//! `f(b1 b2 … bn)` where `b1` is the most significant bit of `i` and belongs
//! to qubit 1. So for three inputs, index 1 is `001` and sets qubit 3.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest `n` accepted by [`enumerate_balanced`]. C(32, 16) is out of reach.
pub const MAX_ENUMERATE_QUBITS: usize = 4;

/// Largest `n` a truth table may have. Matches the simulator limit.
pub const MAX_TABLE_QUBITS: usize = 20;

/// Bit mask of qubit `q` (1-based) inside an `n`-bit basis index.
#[inline]
pub fn qubit_mask(n: usize, q: usize) -> usize {
    1 << (n - q)
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruthTable {
    n: usize,
    values: Vec<bool>,
}

impl TruthTable {
    pub fn new(n: usize, values: Vec<bool>) -> Result<Self> {
        if n == 0 || n > MAX_TABLE_QUBITS {
            return Err(Error::QubitCount(n, 1, MAX_TABLE_QUBITS));
        }
        if values.len() != 1 << n {
            return Err(Error::BadLength(values.len()));
        }
        Ok(TruthTable { n, values })
    }

    /// Tabulates `f` over all `2^n` basis indices.
    pub fn from_fn(n: usize, f: impl Fn(usize) -> bool) -> Result<Self> {
        if n == 0 || n > MAX_TABLE_QUBITS {
            return Err(Error::QubitCount(n, 1, MAX_TABLE_QUBITS));
        }
        Ok(TruthTable {
            n,
            values: (0..1usize << n).map(f).collect(),
        })
    }

    pub fn constant(n: usize, value: bool) -> Result<Self> {
        Self::from_fn(n, |_| value)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[bool] {
        &self.values
    }

    pub fn get(&self, index: usize) -> bool {
        self.values[index]
    }

    /// Number of inputs mapped to 1.
    pub fn weight(&self) -> usize {
        self.values.iter().filter(|&&v| v).count()
    }

    pub fn classify(&self) -> FunctionClass {
        match self.weight() {
            0 => FunctionClass::Constant0,
            w if w == self.len() => FunctionClass::Constant1,
            w if 2 * w == self.len() => FunctionClass::Balanced,
            _ => FunctionClass::Other,
        }
    }

    pub fn complement(&self) -> TruthTable {
        TruthTable {
            n: self.n,
            values: self.values.iter().map(|v| !v).collect(),
        }
    }

    /// The member of `{f, 1 ⊕ f}` with `f(0) = 0`.
    pub fn canonical(&self) -> TruthTable {
        if self.values[0] {
            self.complement()
        } else {
            self.clone()
        }
    }

    pub fn is_canonical(&self) -> bool {
        !self.values[0]
    }

    /// The truth table read as a binary integer, index 0 most significant.
    /// Only meaningful for `n <= 6`.
    pub fn as_integer(&self) -> u64 {
        self.values
            .iter()
            .fold(0u64, |acc, &v| (acc << 1) | u64::from(v))
    }

    /// Algebraic normal form via the binary Möbius butterfly.
    pub fn anf(&self) -> Anf {
        moebius_transform(self)
    }
}

impl fmt::Display for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &v in &self.values {
            f.write_str(if v { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruthTable({self})")
    }
}

impl FromStr for TruthTable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_truth_table(s)
    }
}

impl Serialize for TruthTable {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for TruthTable {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Parses a bare `0`/`1` string, leftmost character is `f` at index 0.
pub fn parse_truth_table(text: &str) -> Result<TruthTable> {
    let values = text
        .chars()
        .enumerate()
        .map(|(position, c)| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            found => Err(Error::NonBinary { position, found }),
        })
        .collect::<Result<Vec<_>>>()?;
    let len = values.len();
    if len < 2 || !len.is_power_of_two() {
        return Err(Error::BadLength(len));
    }
    TruthTable::new(len.trailing_zeros() as usize, values)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FunctionClass {
    Constant0,
    Constant1,
    Balanced,
    Other,
}

impl FunctionClass {
    /// Constant or balanced.
    pub fn satisfies_promise(self) -> bool {
        self != FunctionClass::Other
    }

    pub fn is_constant(self) -> bool {
        matches!(self, FunctionClass::Constant0 | FunctionClass::Constant1)
    }
}

/// A product of distinct variables, stored as a bit set where bit `j - 1`
/// marks qubit `j`. The empty monomial is the constant 1.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial(u32);

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    pub fn new(qubits: impl IntoIterator<Item = usize>) -> Self {
        Monomial(qubits.into_iter().fold(0, |m, q| m | (1 << (q - 1))))
    }

    pub fn from_mask(mask: u32) -> Self {
        Monomial(mask)
    }

    pub fn mask(self) -> u32 {
        self.0
    }

    pub fn degree(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_constant(self) -> bool {
        self.0 == 0
    }

    /// Qubits in ascending order.
    pub fn qubits(self) -> impl Iterator<Item = usize> {
        (0..32)
            .filter(move |b| self.0 & (1 << b) != 0)
            .map(|b| b + 1)
    }

    pub fn max_qubit(self) -> usize {
        32 - self.0.leading_zeros() as usize
    }

    /// Whether the monomial evaluates to 1 on basis index `x` of `n` qubits.
    pub fn evaluate(self, n: usize, x: usize) -> bool {
        self.qubits().all(|q| x & qubit_mask(n, q) != 0)
    }
}

impl Ord for Monomial {
    /// Lexicographic on the ascending qubit list, so `{1} < {1,2} < {2}`.
    fn cmp(&self, other: &Self) -> Ordering {
        self.qubits().cmp(other.qubits())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_constant() {
            return f.write_str("1");
        }
        for q in self.qubits() {
            write!(f, "x{q}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let qs: Vec<_> = self.qubits().collect();
        write!(f, "{qs:?}")
    }
}

impl Serialize for Monomial {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.qubits())
    }
}

/// Algebraic normal form: XOR of monomials.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Anf {
    n: usize,
    monomials: BTreeSet<Monomial>,
}

impl Anf {
    /// Builds an ANF from monomials; a monomial listed twice cancels.
    pub fn new(n: usize, monomials: impl IntoIterator<Item = Monomial>) -> Result<Self> {
        if n == 0 || n > MAX_TABLE_QUBITS {
            return Err(Error::QubitCount(n, 1, MAX_TABLE_QUBITS));
        }
        let mut set = BTreeSet::new();
        for m in monomials {
            if m.max_qubit() > n {
                return Err(Error::QubitOutOfRange {
                    qubit: m.max_qubit(),
                    n,
                });
            }
            if !set.insert(m) {
                set.remove(&m);
            }
        }
        Ok(Anf { n, monomials: set })
    }

    pub fn zero(n: usize) -> Self {
        Anf {
            n,
            monomials: BTreeSet::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn monomials(&self) -> impl Iterator<Item = Monomial> + '_ {
        self.monomials.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn contains(&self, m: Monomial) -> bool {
        self.monomials.contains(&m)
    }

    /// Whether the constant-1 term is present.
    pub fn constant_term(&self) -> bool {
        self.contains(Monomial::ONE)
    }

    pub fn degree(&self) -> usize {
        self.monomials.iter().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn evaluate(&self, x: usize) -> bool {
        self.monomials
            .iter()
            .filter(|m| m.evaluate(self.n, x))
            .count()
            % 2
            == 1
    }

    pub fn to_truth_table(&self) -> TruthTable {
        anf_to_truth_table(self)
    }
}

impl fmt::Display for Anf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.monomials.is_empty() {
            return f.write_str("0");
        }
        for (i, m) in self.monomials.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Anf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Anf(n={}, {self})", self.n)
    }
}

/// In-place GF(2) butterfly: along each bit, XOR the lower half into the
/// upper half. Self-inverse.
fn butterfly(bits: &mut [bool]) {
    let len = bits.len();
    let mut half = 1;
    while half < len {
        for block in (0..len).step_by(2 * half) {
            for i in block..block + half {
                bits[i + half] ^= bits[i];
            }
        }
        half <<= 1;
    }
}

/// Index `m` of the coefficient vector names the monomial over the qubits
/// whose bits are set in `m`, using the same big-endian convention.
fn index_to_monomial(n: usize, index: usize) -> Monomial {
    Monomial::new((1..=n).filter(|&q| index & qubit_mask(n, q) != 0))
}

fn monomial_to_index(n: usize, m: Monomial) -> usize {
    m.qubits().fold(0, |acc, q| acc | qubit_mask(n, q))
}

pub fn moebius_transform(t: &TruthTable) -> Anf {
    let mut coeffs = t.values.clone();
    butterfly(&mut coeffs);
    Anf {
        n: t.n,
        monomials: coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c)
            .map(|(i, _)| index_to_monomial(t.n, i))
            .collect(),
    }
}

pub fn anf_to_truth_table(a: &Anf) -> TruthTable {
    let mut values = vec![false; 1 << a.n];
    for &m in &a.monomials {
        values[monomial_to_index(a.n, m)] = true;
    }
    butterfly(&mut values);
    TruthTable { n: a.n, values }
}

pub fn degree(a: &Anf) -> usize {
    a.degree()
}

/// All truth tables of weight `2^(n-1)`, ascending by integer value.
pub fn enumerate_balanced(n: usize) -> Result<Vec<TruthTable>> {
    if !(2..=MAX_ENUMERATE_QUBITS).contains(&n) {
        return Err(Error::QubitCount(n, 2, MAX_ENUMERATE_QUBITS));
    }
    let len = 1usize << n;
    let half = (len / 2) as u32;
    Ok((0u64..1 << len)
        .filter(|v| v.count_ones() == half)
        .map(|v| TruthTable {
            n,
            values: (0..len).map(|i| v >> (len - 1 - i) & 1 == 1).collect(),
        })
        .collect())
}

/// One representative (with `f(0) = 0`) per complement pair of balanced
/// functions, ascending by integer value.
pub fn enumerate_balanced_classes(n: usize) -> Result<Vec<TruthTable>> {
    Ok(enumerate_balanced(n)?
        .into_iter()
        .filter(TruthTable::is_canonical)
        .collect())
}

/// Every truth table on `n` inputs, ascending. Intended for `n <= 4`.
pub fn all_truth_tables(n: usize) -> impl Iterator<Item = TruthTable> {
    let len = 1usize << n;
    (0u64..1 << len).map(move |v| TruthTable {
        n,
        values: (0..len).map(|i| v >> (len - 1 - i) & 1 == 1).collect(),
    })
}


#[cfg(test)]
mod proptests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn moebius_involution_n4(bits in proptest::collection::vec(any::<bool>(), 16)) {
            let t = TruthTable::new(4, bits).unwrap();
            prop_assert_eq!(t.anf().to_truth_table(), t);
        }

        #[test]
        fn canonical_is_idempotent(bits in proptest::collection::vec(any::<bool>(), 16)) {
            let t = TruthTable::new(4, bits).unwrap();
            let c = t.canonical();
            prop_assert_eq!(c.canonical(), c.clone());
            prop_assert_eq!(t.complement().canonical(), c);
        }
    }
}
