//! Dimensions of linear systems of plane curves with assigned multiple points.
//!
//! The crate is `no_std` (it needs `alloc`) and contains only the algorithmic
//! pieces:
//!
//! * [`gfmat`]: prime-field arithmetic, dense rank over GF(p) and a
//!   fraction-free rank over the integers used as an oracle;
//! * [`linsys`]: Euler characteristic, expected dimension and Cremona
//!   standardization of systems `dH - sum m_i E_i`;
//! * [`interp`]: interpolation matrices at sampled points (general or on a
//!   smooth cubic) and nonspeciality certificates;
//! * [`elliptic`]: the twist by `mu` copies of the elliptic component, the
//!   reduction to the rational component and the resulting bounds.
//!
//! File formats, the persistent store and the command line live in the
//! companion `fatpoint-cli` crate.
#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod elliptic;
mod error;
pub mod gfmat;
pub mod interp;
pub mod linsys;

pub use error::{Error, Result};
