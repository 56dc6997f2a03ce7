//! Real polynomial and rational transfer-function algebra.
//!
//! Everything here is immutable once built; all operations are pure.

mod polynomial;
mod rational;
mod roots;
mod routh;

pub use polynomial::{poly_mul, Polynomial};
pub use rational::{tf_freq, tf_props, DcGain, RationalTF, TfProps, TOL_ORIGIN_REL};
pub use roots::{max_real_part, poly_roots, scaled_residual};
pub use routh::{routh_verdict, StabilityClass, StabilityVerdict, ROUTH_EPSILON};

use num_complex::Complex64;

/// Evaluate `p` at a complex point.
pub fn poly_eval(p: &Polynomial, s: Complex64) -> Complex64 {
    p.eval(s)
}
