//! Exact-arithmetic toolkit for the geometry of dual elliptic quintics and
//! elliptic K3 surfaces of multisection index five.
//!
//! The crate has three layers:
//!
//! * symbolic: Grothendieck-ring classes as polynomials in the Lefschetz
//!   symbol `L` ([`motivic`]) and Pieri-rule Schubert degrees ([`schubert`]);
//! * lattice-theoretic: classification of the rank-2 even lattices
//!   `Λ_{t,d}` ([`lattice`]) and Mukai-vector quotients of the extended
//!   Néron–Severi lattice ([`mukai`]);
//! * enumerative: brute-force point counts over small finite fields
//!   ([`ff`], [`ffcount`]) that independently corroborate the symbolic
//!   results.
//!
//! Everything is exact: `BigInt`/`BigRational` coefficients, integer
//! matrices, and table-driven finite-field arithmetic. All values are
//! immutable after construction and every operation is a pure function.

pub mod ff;
pub mod ffcount;
pub mod lattice;
pub mod linalg;
pub mod motivic;
pub mod mukai;
pub mod poly;
pub mod schubert;

pub use motivic::MotivicExpression;
pub use poly::LPoly;
pub use schubert::{Partition, SchubertCycle};
