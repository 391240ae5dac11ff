//! Independent reference checkers for the integration and acceptance
//! suites. They read only the wire JSON of a payload and never call the
//! library's verifiers or solvers.
#![allow(dead_code)]

pub mod oracle;
pub mod optimum;
pub mod perturb;
