//! Exact kernel for proving strict positivity of mixed trigonometric
//! polynomial functions on subintervals of (0, pi/2).
//!
//! A mixed trigonometric polynomial (MTP) is a finite sum of terms
//! `c * t^p * sin^q(t) * cos^r(t)` with coefficients in Q[pi], optionally
//! carrying `atan(sin t)` / `atan(cos t)` factors before bound elimination.
//! The prover rewrites a goal `e > 0` through a pipeline of exact,
//! certificate-producing steps:
//!
//! 1. substitute `x = sin t` to move an inverse-trigonometric inequality on
//!    `(0, 1)` into MTP form on `(0, pi/2)`,
//! 2. multiply by a positive monomial to clear denominators,
//! 3. replace `atan` atoms by one-sided Taylor approximations (direction
//!    chosen by the sign of the surrounding coefficient),
//! 4. rewrite power products into multiple-angle form (`cos kt`, `sin kt`),
//! 5. replace every multiple-angle atom by a one-sided Taylor approximation
//!    with a checked validity radius,
//! 6. decide strict positivity of the resulting polynomial over Q[pi] by a
//!    Sturm-sequence root count plus exact sign evaluations.
//!
//! All arithmetic is exact: rationals are arbitrary precision, coefficients
//! live in Q[pi], and signs of Q[pi] elements are decided rigorously by
//! adaptive rational enclosures of pi. Every accepted goal yields a
//! [`prover::Certificate`] that an independent checker replays step by step.

pub mod bounds;
pub mod coeff;
pub mod fixtures;
pub mod mtp;
pub mod numeric;
pub mod poly;
pub mod prover;

pub use coeff::{pi_enclosure, pipoly_sign, PiEnclosure, PiPoly, Rational, Sign, SignCtx};
pub use poly::{IntervalQPi, Poly};
