//! Connectedness and tile tests for planar self-affine sets `T(A, D)` with
//! `A = [[p, 0], [l, q]]` and `D = {0..m-1} x {0..n-1}`.
//!
//! Closed-form criteria live next to brute-force oracles that re-derive them:
//! sequence enumeration with certified tail bounds ([`extremal`]), point-cloud
//! separation of the pieces ([`geometry`]) and digit collision search
//! ([`tiling`]). All decision paths use exact rationals.

pub mod connect;
pub mod error;
pub mod extremal;
pub mod geometry;
pub mod params;
pub mod rational;
pub mod render;
pub mod tiling;

pub use error::{Error, Result};
pub use params::{normalize_sign, validate, AffinePair, HypothesisReport};
pub use rational::{parse_rational, Rational, RationalInterval};
