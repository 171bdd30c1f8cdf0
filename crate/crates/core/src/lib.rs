//! Outage probability and transmission capacity of Poisson-clustered
//! multicast networks.
//!
//! A network is modeled as a stationary Poisson field of transmitters, each
//! serving a disk-shaped cluster of Poisson-scattered receivers over a
//! Nakagami-m fading channel with a bounded power-law path loss. The crate
//! computes the multicast outage probability (the chance that some intended
//! receiver stays undecoded after a budget of transmission attempts), the
//! maximum transmitter density sustaining a target outage, multicast rate
//! bounds, and the capacity of the multihop variant that tessellates each
//! cluster into equal-area regions — each quantity two independent ways:
//!
//! * [`analytic`] — shot-noise Laplace functionals evaluated by adaptive
//!   quadrature, plus the closed-form scaling laws and the tessellation
//!   optimizer;
//! * [`simulate`] — a deterministic, counter-seeded Monte Carlo engine whose
//!   estimates cross-validate the analytic pipeline.
//!
//! The crate is `no_std` (with `alloc`); all I/O, file formats and the CLI
//! live in the companion `clustercast-cli` crate.

#![no_std]

extern crate alloc;

pub mod analytic;
mod interp;
pub mod math;
pub mod model;
pub mod quad;
pub mod rng;
pub mod simulate;

use core::fmt;

/// Errors shared across the analytic and simulation pipelines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// An argument violated a documented precondition.
    Domain(&'static str),
    /// Adaptive quadrature could not reach the requested tolerance.
    Quadrature(&'static str),
    /// A root bracket could not be established or refined.
    Bracket(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Quadrature(msg) => write!(f, "quadrature failure: {msg}"),
            Error::Bracket(msg) => write!(f, "bracketing failure: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
