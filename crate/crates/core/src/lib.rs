//! Workbench for quotient-coded structures: a pointclass calculus with a
//! formula DSL, exact integer linear algebra for finitely presented abelian
//! groups, executable hardness reductions, Grothendieck-group and K0
//! pipelines, Cantor-set automata, canonical quotient encodings, and sofic
//! approximation search.

pub mod abelian;
pub mod cantorset;
pub mod encoding;
pub mod formula;
pub mod grothendieck;
pub mod pointclass;
pub mod reductions;
pub mod sofic;

pub use abelian::{AbelianInvariants, AbelianPresentation, IntMatrix, SnfDecomposition};
pub use cantorset::{RawAutomaton, RegularClosedSet, StepFunction};
pub use encoding::FiniteCongruence;
pub use formula::{Atom, AtomKind, Formula, Quantifier, Ranked};
pub use grothendieck::{FDAlgebra, HermitianMatrix, MonoidData};
pub use pointclass::{CapResult, Connective, Lattice, Pointclass};
pub use reductions::{ReductionFamily, TruncatedCode, UPSequence, Witness};
pub use sofic::{PartialTable, SoficMap};
