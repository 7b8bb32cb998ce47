//! Exact arithmetic for divisor class groups of curves over finite fields.
//!
//! The crate computes zeta functions of hyperelliptic curves by brute-force
//! point counting, realises the degree-zero divisor class group through
//! Mumford representatives and Cantor's algorithm, and evaluates a family of
//! lower bounds on group exponents and orders. All arithmetic is exact:
//! integers and rationals are arbitrary precision, and every real-valued
//! quantity (logarithms, fractional powers) is tracked as a directed-rounded
//! interval so that reported safe bounds are actual bounds.
//!
//! The crate is `no_std` compatible with `alloc`; the default `std` feature
//! only forwards to the numeric dependencies.

#![cfg_attr(not(feature = "std"), no_std)]
#![deny(unsafe_code)]

extern crate alloc;

pub mod curve;
pub mod exact;
pub mod ff;
pub mod jacobian;
pub mod nonfibral;
pub mod poly;
pub mod primes;
pub mod relative;
pub mod zeta;

pub mod bounds;

mod error;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;
