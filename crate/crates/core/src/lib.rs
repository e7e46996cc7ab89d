#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod exponents;
pub mod grid;
pub mod harness;
pub mod hermite;
pub mod lorentz;
pub mod quadrature;
pub mod radial;
pub mod spectral;
