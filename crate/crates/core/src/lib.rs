//! Generalized SEIR (SEIQRDP) epidemic modelling with vaccination control.
//!
//! The crate covers five numerical pieces and the plumbing around them:
//!
//! * [`epi`]: the compartmental dynamics with and without vaccination,
//! * [`ode`]: fixed-step RK4 integration on a uniform day grid,
//! * [`ocp`]: the optimal vaccination problem and its forward-backward sweep,
//! * [`calibration`]: Levenberg-Marquardt fitting of the model to (Q, R, D) data,
//! * [`thermal`]: heat diffusion in a cylindrical vial, forward and inverse,
//! * [`io`]: dataset ingestion, scenario configuration, reports and the CLI.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod calibration;
pub mod epi;
pub mod error;
pub mod io;
pub mod ocp;
pub mod ode;
pub mod thermal;

pub use error::{Error, Result};
