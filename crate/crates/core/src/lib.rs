//! Hidden-symmetry operators of the asymmetric quantum Rabi model at integer
//! bias ε = N.
//!
//! * [`ring`]: exact Laurent polynomials in Δ and g.
//! * [`boson`]: normal-ordered algebra in the Bogoliubov pair (a₊†, a₋).
//! * [`solver`]: level-by-level construction of the symmetry operator tables.
//! * [`numeric`]: truncated Fock-space realization, commutation checks,
//!   J² fits, parity labels and level-crossing scans.
//!
//! Sweeps over independent parameter points run on rayon when the
//! `parallel` feature (on by default) is enabled; see [`Execution`].

mod par;

pub mod boson;
pub mod numeric;
pub mod ring;
pub mod solver;

pub use par::Execution;
pub use boson::{NormalOp, OpMatrix2};
pub use ring::{LaurentPoly, Rational, RingError};
pub use solver::{build_tables, CoeffTables, Element, SolveError, SymmetryOperator};
