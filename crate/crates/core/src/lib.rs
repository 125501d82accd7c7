//! Hardy spaces on quotients of the polydisc by finite complex reflection
//! groups: invariant theory, Szegő kernels and Toeplitz windows.

pub mod error;
pub mod group;
pub mod invariant;
pub mod kernel;
pub mod poly;
pub mod sampling;
pub mod toeplitz;

pub use error::{Error, Result};
