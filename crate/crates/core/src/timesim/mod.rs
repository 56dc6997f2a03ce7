//! Fixed-step simulation of the DOB position loop, the RTOB force loop and
//! their hybrid blend.
//!
//! The plant is discretized exactly under a zero-order hold (including the
//! contact spring-damper while engaged); every first-order filter uses the
//! bilinear map. The DOB and RTOB add `J g qdot_meas` inside their filter
//! and subtract it outside, so the velocity is never differentiated.

mod filter;
mod metrics;
mod plant;
mod sim;

pub use filter::LowPass;
pub use metrics::{trace_metrics, TraceMetrics, MIN_SEGMENT_FRACTION, SETTLING_BAND, TAIL_FRACTION};
pub use plant::Plant;
pub use sim::{simulate, Channel, SimTrace, BLOWUP_LIMIT};
