//! Congruence lattices and term-condition commutators of finite algebras.
//!
//! An algebra is a finite universe `{0, .., n-1}` together with operation
//! tables. The crate computes congruence closures with replayable witness
//! chains, enumerates congruence lattices, and computes the commutator
//! `[alpha, beta]` of two congruences through a closure operator on the pair
//! algebra of `beta`, with brute-force oracles alongside for cross-checking
//! at small sizes.
//!
//! ```
//! use commutator_kit::catalog;
//! use commutator_kit::commutator::{commutator, is_abelian};
//! use commutator_kit::relations::Partition;
//!
//! let z4 = catalog::cyclic_group(4);
//! let one = Partition::one(4).unwrap();
//! assert_eq!(commutator(&z4, &one, &one).unwrap(), Partition::zero(4).unwrap());
//! assert!(is_abelian(&z4).unwrap());
//!
//! let sl = catalog::two_element_semilattice();
//! assert!(!is_abelian(&sl).unwrap());
//! ```

pub mod algebra;
pub mod catalog;
pub mod commutator;
pub mod congruence;
pub mod relations;

pub use algebra::{parse_algebra, FiniteAlgebra, Operation};
pub use commutator::{commutator, commutator_table, is_abelian, term_condition, DeltaContext};
pub use congruence::{cg, con_lattice, principal, witness_chain};
pub use relations::{is_congruence, PairSet, Partition, Tolerance};
