//! Exact solver and enumerator for bilayer (Halperin) quantum Hall K-matrices.
//!
//! Given a filling `ν = p/q` and a charge vector `(t₁, t₂)`, the crate finds
//! integer matrices `[[m, l], [l, n]]` with `m, n >= 1`, `l >= 0`,
//! `mn − l² >= 1` and
//!
//! ```text
//! (n·t₁² + m·t₂² − 2·l·t₁·t₂) / (m·n − l²) = ν
//! ```
//!
//! * [`constructors`] builds closed-form families for every filling and
//!   charge vector, with determinants as large as requested.
//! * [`enumerator`] searches boxes completely, solves the fixed-`l` problem
//!   exactly and certifies that a fixed `l` only reaches a bounded set of
//!   fillings.
//! * [`ntheory`] holds the residue, Legendre, Pythagorean and modular helpers
//!   the constructions rely on.
//!
//! All algorithms are generic over the integer scalar ([`Int`]). The aliases
//! below fix it to [`BigInt`], which is what the CLI uses; `i64` works for
//! fast searches over small boxes.
//!
//! ```
//! use halperin::{constructors, ChargeVector, Filling};
//! use num_bigint::BigInt;
//!
//! let nu = Filling::new(BigInt::from(2), BigInt::from(3)).unwrap();
//! let t = ChargeVector::new(BigInt::from(1), BigInt::from(1)).unwrap();
//! let s = constructors::construct(&nu, &t, &BigInt::from(0)).unwrap();
//! assert_eq!(s.to_string(), "(3, 15, 6, 9)");
//! ```

pub mod cli;
pub mod constructors;
pub mod enumerator;
pub mod error;
pub mod int;
pub mod kmatrix;
pub mod ntheory;

pub use error::{Error, Result};
pub use int::Int;
pub use kmatrix::{verify_solution, Family, ParityClass};
pub use num_bigint::BigInt;

pub type Filling = kmatrix::Filling<BigInt>;
pub type ChargeVector = kmatrix::ChargeVector<BigInt>;
pub type KMatrix = kmatrix::KMatrix<BigInt>;
pub type Solution = kmatrix::Solution<BigInt>;
pub type ConstructionTrace = kmatrix::ConstructionTrace<BigInt>;
pub type FixedLOutcome = enumerator::FixedLOutcome<BigInt>;
pub type BoundCertificate = enumerator::BoundCertificate<BigInt>;
pub type PythTriple = ntheory::PythTriple<BigInt>;
pub type ResidueWitness = ntheory::ResidueWitness<BigInt>;
