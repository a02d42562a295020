//! Exact arithmetic for k-step Narayana sequences and their self-convolutions.
//!
//! The crate is organised bottom-up:
//!
//! * [`sequences`] defines order-k integer recurrences and evaluates them
//!   either term by term or through characteristic-polynomial exponentiation.
//! * [`identities`] holds the closed-form right-hand sides of the
//!   self-convolution identities together with the brute-force Cauchy oracle.
//! * [`series`] is a truncated Laurent-series engine over exact rationals plus
//!   integer polynomial utilities (resultant, discriminant); [`series::gf`]
//!   rebuilds the generating functions used to prove the general identity.
//! * [`verify`] runs verification campaigns and produces structured reports.
//! * [`oeis`] reads OEIS b-files and cross-checks them against computed data.

pub mod error;
pub mod identities;
pub mod oeis;
pub mod sequences;
pub mod series;
pub mod verify;

pub use error::{Error, Result};
