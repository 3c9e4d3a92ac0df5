//! Exact computation in the cyclic free magma: binary trees under root-join.
//!
//! * [`element`]: interned trees, text syntax, order, level enumeration.
//! * [`arithmetic`]: the substitution product, left division, gcd, primes.
//! * [`counting`]: Catalan numbers and prime counts.
//! * [`submagma`]: finitely generated submagmas and principal ideals.
//! * [`primeset`]: additive prime sets, spectra, k-maximal levels, rooted-tree families.
//! * [`verify`]: executable checks of the structural theorems at bounded size.

pub mod arithmetic;
pub mod counting;
pub mod dot;
pub mod element;
pub mod error;
pub mod limits;
pub mod primeset;
pub mod report;
pub mod submagma;
pub mod verify;

pub use element::{Elem, MagmaElement};
pub use error::{MagmaError, Result};
pub use limits::Limits;
