//! Phase-oracle compiler and statevector simulator for the three-qubit
//! refined Deutsch-Jozsa algorithm.
//!
//! A Boolean function is given as a [`TruthTable`], turned into its algebraic
//! normal form, and compiled monomial by monomial into `Z`, `CZ` and (only
//! when needed) multi-controlled `Z` gates. The [`sim`] module runs the
//! resulting circuits and [`dj`] drives the algorithm itself.

pub mod boolfn;
pub mod compiler;
pub mod dj;
pub mod error;
pub mod report;
pub mod sim;

pub use boolfn::{Anf, FunctionClass, Monomial, TruthTable};
pub use compiler::{Circuit, ConstructionType, GateCounts, GateOp, SynthesisReport};
pub use dj::{ClassicalOutcome, DjOutcome, Mode, Verdict};
pub use error::{Error, Result};
pub use sim::{DiagonalCheck, EntanglementProfile, StateVector, DEFAULT_TOL};
