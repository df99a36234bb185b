//! Desk-verifiable structures of an infinity-adic Arakelov construction:
//! Schottky-group dynamics and geodesic coding, mapping-torus (co)homology
//! with its pairing and Archimedean-cohomology embeddings, Cuntz-Krieger
//! operator relations on finite truncations, transfer-operator fractal
//! dimension, and zeta-regularized-determinant / Gamma-factor identities.

pub mod ck;
pub mod coding;
pub mod cohomology;
pub mod error;
pub mod fractal;
pub mod io;
pub mod moebius;
pub mod par;
pub mod ratmat;
pub mod words;
pub mod zeta;

pub use error::{Result, SchottkyError};
