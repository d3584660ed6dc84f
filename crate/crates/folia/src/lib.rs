//! Exact symbolic toolkit for plane polynomial 1-forms: blow-up reduction of
//! singularities, classification of the reduced singular points, and the
//! discrete/formal invariants of the induced singular foliation (dual trees,
//! divisor multiplicities, Milnor numbers, Camacho-Sad indices, nerve graphs,
//! finite-type criteria and codimension numbers).
//!
//! Everything is computed over the rationals, growing algebraic extension
//! towers on demand when blow-ups meet irrational singular directions. There
//! is no floating point anywhere.
//!
//! The usual entry points are [`parse::parse_oneform`], [`reduction::reduce`],
//! [`invariants::invariant_report`] and [`nerve::build_nerve`]; the `folia`
//! binary wires them to a command line.

pub mod annot;
pub mod dual;
pub mod error;
pub mod factor;
pub mod family;
pub mod field;
pub mod invariants;
pub mod linalg;
pub mod localclass;
pub mod milnor;
pub mod nerve;
pub mod parse;
pub mod poly1;
pub mod poly2;
pub mod rat;
pub mod reduction;
pub mod report;
pub mod sep;

pub use error::Error;
pub use field::{FieldDescriptor, FieldElem};
pub use poly2::{LinearPart, OneForm, Poly2, RatioClass, RatioSign};
