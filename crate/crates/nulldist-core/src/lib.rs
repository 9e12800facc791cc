//! Null-distance geometry on product and warped-product spacetimes.
//!
//! A warped product `I ×_f Σ` carries the Lorentzian metric
//! `g_f = -dt² + f(t)² σ`. Given a (generalized) time function `τ`, the
//! null length of a piecewise causal curve is the sum of `|Δτ|` over its
//! monotone pieces, and the null distance `d̂_τ(p, q)` is the infimum of
//! null lengths over piecewise causal curves joining `p` and `q`.
//!
//! This crate provides
//! - exact geodesic oracles for the supported bases ([`base`]),
//! - warped spacetimes, causal reach and the causal relation ([`spacetime`]),
//! - generalized time functions with exact increments where the registry
//!   definition permits ([`timefn`]),
//! - piecewise causal curves, the null length functional, zig-zag and
//!   fractal curve generators ([`curves`]),
//! - closed forms, two-sided bounds, and a causal-lattice shortest-path
//!   oracle for the null distance ([`engine`], [`lattice`], [`profile`]),
//! - a finite-metric-space toolkit with GH/SWIF upper bounds ([`metric`]),
//! - a convergence laboratory for sequences of warpings ([`lab`]).
//!
//! The crate is `no_std`-compatible (requires `alloc`); all IO lives in the
//! companion CLI crate.

#![no_std]
#![deny(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod base;
pub mod curves;
pub mod engine;
pub mod error;
pub mod lab;
pub mod lattice;
pub mod metric;
pub mod profile;
pub mod quad;
pub mod scalar;
pub mod spacetime;
pub mod timefn;

pub use base::{BasePoint, RiemannianBase};
pub use engine::DistanceResult;
pub use error::Error;
pub use lattice::LatticeConfig;
pub use spacetime::{CausalRelation, SpacetimePoint, WarpedSpacetime, WarpingFunction};
pub use timefn::TimeFunction;

/// Result alias used throughout the crate.
pub type Result<T> = core::result::Result<T, Error>;
