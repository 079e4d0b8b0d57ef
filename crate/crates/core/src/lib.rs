//! Exact computation of residue fields, centers and blow-up charts for
//! monomial valuations on affine space over the rationals, with support for
//! finite groups acting by scaled coordinate permutations.
//!
//! Values live in [`exactvalue`], polynomials in [`polyring`]. A
//! [`valuation::MonomialValuation`] evaluates functions and computes
//! centers; [`residue`] presents its residue field as a rational function
//! field over the kernel lattice from [`lattice`]; [`birational`] builds
//! blow-up charts whose center has that residue field; [`group`] covers
//! invariant valuations and quotients; [`cli`] is the command-line layer.

pub mod birational;
pub mod cli;
pub mod error;
pub mod exactvalue;
pub mod group;
pub mod lattice;
pub mod polyring;
pub mod residue;
pub mod valuation;

pub use error::{Error, Result};
pub use exactvalue::{PrimeBasis, Value};
pub use polyring::{Poly, RatFn};
pub use residue::{ResidueElement, ResidueFieldDesc};
pub use valuation::MonomialValuation;
