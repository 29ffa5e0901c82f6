//! Scattered-site kernel interpolation of Sobolev functions on the line.
//!
//! The crate covers the whole pipeline: perturbed-lattice site sequences
//! ([`sites`]), interpolator kernels and their band conditions ([`kernels`]),
//! Gaussian collocation at scaled sites ([`collocate`]), the intermediate
//! Paley–Wiener interpolant ([`bandlimited`]), Sobolev norms and divided
//! differences ([`norms`], [`catalog`]) and the convergence sweeps that tie
//! them together ([`harness`]).
//!
//! Everything is `no_std` + `alloc`; IO lives in the companion crate.

#![no_std]
// `!(x > 0.0)` is how NaN gets rejected throughout
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod bandlimited;
pub mod catalog;
pub mod collocate;
pub mod error;
pub mod fft;
pub mod harness;
pub mod kernels;
pub mod linalg;
pub mod norms;
pub mod quadrature;
pub mod sites;
pub mod special;

pub use error::{Error, Result};
