//! Constructive approximation on high-dimensional spheres with localized zonal kernels.
//!
//! The crate is `no_std` (with `alloc`) unless the default `std` feature is enabled.
//! IO, file formats and the experiment CLI live in the companion `zonal` crate.
// `!(x > y)` is deliberate throughout: it also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod error;
pub mod jacobi;
pub mod approx;
pub mod kernels;
pub mod nnls;
pub mod pipeline;
pub mod probes;
pub mod quadrature;
pub mod sphere;
pub mod stats;
mod tridiag;

pub use error::{Error, Result};
