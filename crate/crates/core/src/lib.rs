//! Exact two-variable zeta functions of odd-degree hyperelliptic curves
//! over finite fields.

pub mod abs_irr;
pub mod bipoly;
pub mod check;
pub mod curve;
pub mod error;
pub mod field;
pub mod fq_poly;
pub mod jacobian;
pub mod measure;
pub mod parse;
pub mod places;
pub mod qpoly;
pub mod report;
pub mod series;
pub mod strata;
pub mod zeta_one;
pub mod zeta_two;

pub use error::{Error, Result};
