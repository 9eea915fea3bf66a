//! Exact classification of singularities at infinity for cubic polynomials
//! `f: C^3 -> C` with rational coefficients.
//!
//! The pipeline classifies the cubic part `f3`, moves `f` to a reduced form,
//! dispatches into data-driven classification tables and checks every claim
//! against an independent local Milnor number oracle.

pub mod affine;
pub mod audit;
pub mod atinf;
pub mod cubic;
pub mod fallback;
pub mod field;
pub mod germ;
pub mod groebner;
pub mod invariants;
pub mod linalg;
pub mod numfield;
pub mod parse;
pub mod pipeline;
pub mod poly;
pub mod rat;
pub mod tables;
pub mod unipoly;
pub mod verify;

pub use field::{ArithError, Field, Ring};
pub use numfield::{AlgNum, NumberField};
pub use poly::{Mono, Poly};
pub use rat::Rat;
pub use unipoly::UniPoly;
pub use pipeline::{classify_text, Options, PipelineError, Report};
