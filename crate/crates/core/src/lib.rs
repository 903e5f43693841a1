//! Exact-arithmetic toolkit for Morita equivalence of n-dimensional
//! noncommutative tori.
//!
//! Everything is computed over the rationals, so each identity the library
//! relies on is checked by equality rather than by tolerance:
//!
//! * [`exactmat`]: rational scalars, dense matrices, Pfaffians, symplectic
//!   congruence factors.
//! * [`group`]: the block-form group `O(n,n|Z)`, its generators `rho`, `nu`,
//!   `mu`, `sigma_k`, words in them, and the fractional-linear action
//!   `theta -> (A theta + B)(C theta + D)^-1`.
//! * [`heisenberg`]: the embedding matrices `T`, `J`, `Tbar`, the dual
//!   embedding `S` and the cocycle identities behind the `sigma_2p` Morita
//!   equivalence.
//! * [`grassmann`]: the Grassmann algebra, `exp(a theta a / 2)`, CAR operators,
//!   Clifford intertwiners and the projective action on the Fock space.
//! * [`ktheory`]: the even/odd integral exterior lattice, trace pairing,
//!   trace ranges and the `n = 3` wedge-square obstruction.
//! * [`torus_rep`]: finite phase-permutation representations realizing the
//!   torus relations for rational `theta`.

pub mod error;
pub mod exactmat;
pub mod grassmann;
pub mod group;
pub mod heisenberg;
pub mod ktheory;
pub mod torus_rep;

pub use error::{Error, Result};
pub use exactmat::{RatMatrix, Rational, SkewMatrix};
pub use group::{GeneratorWord, GroupElement, Token};
