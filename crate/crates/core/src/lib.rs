//! Exact set arithmetic for sums of dilates λ₁A + … + λₖA over Z_p.
//!
//! The crate has three layers:
//!
//! - dense word-packed set arithmetic over Z_p ([`zp`]) with
//!   arithmetic-progression structure on top ([`structure`]): diameter,
//!   rectification to the integers, a Freiman-isomorphism oracle;
//! - exact rational interval arithmetic on the circle [0,1) ([`circle`])
//!   and the explicit zero-run tower construction built on it
//!   ([`construct`]), producing large-density sets A ⊂ Z_p whose sumset
//!   A + λA misses a window of residues;
//! - bound evaluation ([`bounds`]) and exhaustive/randomized ground-truth
//!   searches ([`oracle`]) to compare everything against brute force at
//!   desk scale.
//!
//! All set and interval computations are exact: membership vectors for
//! Z_p, arbitrary-precision rationals on the circle. Floating point only
//! appears in the numeric bound solver and in reported densities.

pub mod arith;
pub mod bounds;
pub mod circle;
pub mod construct;
pub mod error;
pub mod oracle;
pub mod structure;
pub mod zp;

pub use circle::{IntervalSet, Rational};
pub use error::{Error, Result};
pub use zp::{DilateVector, ZpSet};
