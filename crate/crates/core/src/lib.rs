//! Computational toolkit for finite-dimensional Euclidean Jordan algebras
//! and the bioctonionic projective plane: quantum transition probabilities
//! between atoms, the normalized geodesic metric on the atom manifold with
//! its constructive midpoints, certified automorphisms with two-point
//! homogeneity witnesses, and the non-homogeneous plane built on
//! H₃(ℂ⊗𝕆).
//!
//! Campaign entry points live in [`campaigns`]; they are seeded,
//! reproducible, and run their trials on rayon when the default `parallel`
//! feature is enabled (a sequential path is always available for
//! comparison).

pub mod automorphism;
pub mod bioct;
pub mod campaigns;
pub mod error;
pub mod hypercomplex;
pub mod jordan;
pub mod linalg;
pub mod metric;
pub mod par;

pub use error::{EjaError, Result};
pub use hypercomplex::{Bioctonion, Division, HMatrix, Hyper, Octonion};
pub use jordan::{Descriptor, Element, JordanAlgebra};
pub use metric::{MetricValue, TransitionValue};
