//! Exact Hilbert functions of fat point schemes in projective space.
//!
//! The crate pairs two independent routes to the same numbers:
//!
//! * [`conjectural`] evaluates the Fröberg–Iarrobino conjectural function `G`
//!   (and Fröberg's `F`) exactly with big integers;
//! * [`interpolation`] computes actual Hilbert functions of explicit or
//!   randomly sampled fat point configurations as ranks of derivative
//!   condition matrices over a prime field.
//!
//! [`obstruction`] builds the codimension-one recursive upper bound on top of
//! the rank oracle, and [`scanner`] sweeps parameter space comparing the two.

pub mod cache;
pub mod conjectural;
pub mod decimal;
pub mod error;
pub mod field;
pub mod interpolation;
pub mod obstruction;
pub mod scanner;
pub mod seed;
pub mod uples;

pub use conjectural::{f, f_prime, g, ConjecturalValue};
pub use error::{Error, Result};
pub use interpolation::{FatPointConfig, HilbertValue, Method, PowerIdealConfig};
pub use obstruction::{ObstructionStep, UbdaReport};
pub use scanner::{ExceptionClass, GridSpec, Relation, ScanRecord};
pub use uples::{binomial, Uple};

/// Default prime modulus for every rank computation.
pub const DEFAULT_MODULUS: u64 = 1_000_003;
