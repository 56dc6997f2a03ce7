//! Design, analysis and simulation of disturbance-observer (DOB) and
//! reaction-torque-observer (RTOB) based motion control loops.

pub mod analysis;
pub mod cli;
pub mod dob_design;
pub mod error;
pub mod format;
pub mod loop_models;
pub mod params;
pub mod poly_tf;
pub mod scenario;
pub mod timesim;

pub use error::{Error, Result};
