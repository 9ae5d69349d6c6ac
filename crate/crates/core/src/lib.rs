//! Elliptic-curve primality tests for integers of the form `p = 2^k·n − 1`.
//!
//! The tests work on the curve family `y² = x³ − m·x` over `Z/pZ`. For
//! `p ≡ 3 (mod 4)` prime these curves are supersingular with `p + 1`
//! points, so a point whose abscissa is a non-residue has order divisible
//! by `2^k`. Verifying that a constructed point has the expected order
//! (through the x-only doubling sequence, or through scalar multiples)
//! proves primality once `p` is large relative to `n` (resp. `2^k`).
//!
//! Layout:
//!
//! * [`numtheory`]: Jacobi symbols, inverses with divisor reporting, integer
//!   roots, applicability gates, and classical baselines.
//! * [`ecring`]: affine curve arithmetic over `Z/NZ` for possibly composite `N`.
//! * [`sequence`]: the doubling-denominator sequence `S_i`.
//! * [`primality`]: the decision procedures, verdicts and certificate replay.
//! * [`oracle`]: brute-force group computations on small primes.
//! * [`cli`]: the command-line driver and its JSON records.

pub mod cli;
mod decimal;
pub mod ecring;
pub mod error;
pub mod numtheory;
pub mod oracle;
pub mod primality;
pub mod sequence;

pub use error::{Error, Result};
