//! Exact computer algebra for twisted generalized complex geometry.

pub mod error;
pub mod scalars;

pub use error::{Error, Result};
pub mod linalg;
pub mod spinor;
pub mod gcs;
pub mod polyforms;
pub mod dolbeault;
pub mod sample;
pub mod equivariant;
pub mod doublecomplex;
pub mod examples;
pub mod scene;
