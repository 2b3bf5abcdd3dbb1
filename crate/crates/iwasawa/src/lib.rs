//! Reconstruction of non-compact semi-simple Lie algebras from their Iwasawa
//! subalgebras.
//!
//! The library takes a completely solvable Lie algebra `s = a ⊕ n` given by
//! exact rational structure constants and rebuilds the semi-simple algebra it
//! came from: a maximal compact subalgebra `m` of `Der(s)` is recovered
//! through a numerically computed Einstein metric, `g₀ = m ⋉ s` is assembled
//! exactly, the complex root system of the complexification is extracted, and
//! the decorated Dynkin (Satake) diagram identifies the real form.
//!
//! Entry points:
//! - [`reconstruct::reconstruct_from_iwasawa`] — the full pipeline;
//! - [`catalog`] — exact constructors for classical real forms and their
//!   Iwasawa subalgebras, used as ground truth;
//! - [`einstein`] — the Einstein/nilsoliton metric solver;
//! - the `examples/` directory — one runnable walkthrough per capability.

pub mod algebra;
pub mod catalog;
pub mod compact;
pub mod complex;
pub mod dd;
pub mod deriv;
pub mod dynkin;
pub mod einstein;
pub mod numeric;
pub mod error;
pub mod json;
pub mod linalg;
pub mod poly;
pub mod roots;
pub mod satake;
pub mod scalar;

pub use crate::algebra::{LieAlgebra, SymmetricForm};
pub use crate::error::{Error, Result};
pub use crate::linalg::{Mat, Subspace};
pub use crate::scalar::{GaussRat, Rat};
