//! Finite-lattice engine for mutual induction and coinduction.
//!
//! A pair of generators `F: O → P` and `G: P → O` over two finite lattices
//! has a least and a greatest *simultaneous* fixed point, i.e. pairs
//! `(o, p)` with `F(o) = p` and `G(p) = o`. This crate builds such pairs,
//! solves for the extremal points by several independent routes, checks the
//! mutual (co)induction principles, and verifies the supporting order-theoretic
//! facts on generated instances.
//!
//! Modules, bottom-up:
//!
//! * [`lattice`]: posets, lattices, products, powersets.
//! * [`genfun`]: generator pairs, monotonicity and continuity checks.
//! * [`simpoints`]: simultaneous pre/post/fixed points, fibers, component sets.
//! * [`solvers`]: extremal simultaneous fixed points and proof principles.
//! * [`verifier`]: instance generation, lemma checks, counterexample mining.
//! * [`demos`]: subtyping/containment over interval types; a mutually
//!   recursive integer trio.

pub mod bitset;
pub mod demos;
pub mod fixtures;
pub mod genfun;
pub mod lattice;
pub mod simpoints;
pub mod solvers;
pub mod verifier;

pub use bitset::BitSet;
pub use num_bigint;
pub use genfun::{ContinuityMode, EndoFn, Generator, MapView, MutualPair};
pub use lattice::{FiniteLattice, FinitePoset, LatticeError, Subset};
pub use simpoints::{ComponentSets, FiberSet, PairPoint, Side};
pub use solvers::{Direction, Engine, Extremum, SolveError, SolveResult, Strategy, Verdict};
