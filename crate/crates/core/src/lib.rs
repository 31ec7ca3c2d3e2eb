#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dirac;
pub mod error;
pub mod hopfion;
pub mod hydrogen;
pub mod quadrature;
pub mod radial;
pub mod specfun;
pub mod table;
pub mod uncertainty;

pub use error::{Error, Result};
pub use table::{SweepRow, SweepTable};
pub use uncertainty::{gamma_bound, RelativisticScale};
