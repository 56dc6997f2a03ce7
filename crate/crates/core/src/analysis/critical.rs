use crate::error::{Error, Result};
use crate::poly_tf::{max_real_part, poly_roots, RationalTF};

pub const CRITICAL_GAIN_MAX_ITER: usize = 80;
pub const CRITICAL_GAIN_REL_TOL: f64 = 1e-6;

/// Gain at which the closed loop `1 + k L` changes stability inside
/// `[k_lo, k_hi]`, found by bisection (geometric midpoints) on the largest
/// closed-loop real part.
pub fn critical_gain(l: &RationalTF, k_lo: f64, k_hi: f64) -> Result<f64> {
    if !(k_lo > 0.0 && k_hi > k_lo && k_hi.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "need 0 < k_lo < k_hi, got [{k_lo}, {k_hi}]"
        )));
    }
    let probe = |k: f64| -> Result<(f64, f64)> {
        let roots = poly_roots(&l.characteristic(k))?;
        let scale = roots.iter().fold(1.0_f64, |m, r| m.max(r.norm()));
        Ok((max_real_part(&roots), scale))
    };

    let (f_lo, _) = probe(k_lo)?;
    let (f_hi, _) = probe(k_hi)?;
    let (stable_lo, stable_hi) = (f_lo < 0.0, f_hi < 0.0);
    if stable_lo == stable_hi {
        return Err(Error::NoCrossing { stable_at_lo: stable_lo, stable_at_hi: stable_hi });
    }

    let (mut a, mut b) = (k_lo, k_hi);
    let mut mid = (a * b).sqrt();
    for _ in 0..CRITICAL_GAIN_MAX_ITER {
        mid = (a * b).sqrt();
        let (f, scale) = probe(mid)?;
        if f.abs() < CRITICAL_GAIN_REL_TOL * scale {
            break;
        }
        if (f < 0.0) == stable_lo {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(mid)
}
