//! Exact models of bipartite no-signalling correlations.
//!
//! The crate represents conditional distributions P[a,b|x,y] as exact
//! rational tables and builds on that base in layers:
//!
//! - [`boxes`]: normalization and no-signalling verification, marginals,
//!   and convex mixtures, all as exact equalities.
//! - [`games`] and [`quantum`]: Bell games with classical values by
//!   exhaustive strategy enumeration and quantum values from projective
//!   measurement strategies (the CHSH hierarchy 3/4 < (2+sqrt 2)/4 < 1).
//! - [`boolfn`], [`fbox`]: function boxes whose outputs are uniformly
//!   masked shares with a xor b = f(x, y), plus their noisy variants with
//!   per-input-pair correctness p.
//! - [`anf`], [`vandam`]: compilation of any Boolean function into a
//!   protocol consuming one PR box per mixed monomial.
//! - [`harness`]: two-party transcripts, later-time reconciliation, and
//!   majority-vote amplification with exact binomial bookkeeping.
//! - [`halting`]: a four-register counter machine whose step-bounded
//!   halting predicate becomes a function box at desk scale.
//! - [`format`]: bit-exact JSON and text file formats for all of the above.
//!
//! Sampling is reproducible: every randomized operation takes a caller
//! supplied generator and nothing else is a source of nondeterminism.

pub mod alphabet;
pub mod anf;
pub mod boolfn;
pub mod boxes;
pub mod error;
pub mod fbox;
pub mod format;
pub mod games;
pub mod halting;
pub mod harness;
pub mod quantum;
pub mod ratio;
pub mod vandam;

pub use alphabet::{Alphabet, BitString};
pub use anf::{anf_decompose, AnfForm};
pub use boolfn::BooleanFunction;
pub use boxes::{mix, BipartiteBox, NoSignallingReport, Party, SignallingViolation, TableEntry};
pub use error::{Error, Result};
pub use fbox::{make_fbox, make_noisy_fbox, sample_fbox, sample_noisy_fbox, NoisyBoxSpec};
pub use games::{chsh_game, classical_value, game_value, BellGame, DeterministicStrategy};
pub use halting::{
    bounded_halting_fbox, bounded_halting_function, interpret, BoundedHaltingSpec, Instruction,
    TinyProgram, Verdict,
};
pub use harness::{
    amplify, choose_k, majority_correctness, reconcile, run_noisy_fbox, AmplificationPlan, Event,
    EventKind, Transcript,
};
pub use quantum::{box_from_quantum, CMatrix, QuantumStrategy, RationalizationReport};
pub use vandam::{compile, run_compiled, CompiledProtocol, PlanStep, Side};

// Re-exported so downstream code and tests can build exact rationals
// without pinning the arithmetic crates themselves.
pub use num_bigint::BigInt;
pub use num_rational::BigRational;
