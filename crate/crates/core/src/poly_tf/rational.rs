use num_complex::Complex64;
use serde::Serialize;

use super::{poly_roots, Polynomial};
use crate::error::{Error, Result};

/// Relative tolerance for deciding that `den(0) = 0`.
pub const TOL_ORIGIN_REL: f64 = 1e-9;

/// Relative tolerance for `|den(jw)|` below which the point lies on a pole.
const TOL_AXIS_REL: f64 = 1e-12;

/// Ratio of two real polynomials. Common factors are never cancelled.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalTF {
    num: Polynomial,
    den: Polynomial,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum DcGain {
    Finite(f64),
    /// `den(0) = 0` with a nonzero numerator at the origin.
    Infinite,
    /// `0/0` at the origin; the limit needs cancellation, which is not done.
    Indeterminate,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TfProps {
    pub poles: Vec<Complex64>,
    pub zeros: Vec<Complex64>,
    pub relative_degree: i64,
    pub dc_gain: DcGain,
    pub pole_at_origin: bool,
}

impl RationalTF {
    /// Proper (or strictly proper) transfer function.
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        let tf = Self::new_improper(num, den)?;
        let rd = tf.relative_degree();
        if rd < 0 {
            return Err(Error::Improper { relative_degree: rd });
        }
        Ok(tf)
    }

    /// Allows `deg(num) > deg(den)`, for derivative paths.
    pub fn new_improper(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Self { num, den })
    }

    /// Builder shortcut for denominators that are nonzero by construction.
    pub(crate) fn from_parts(num: Polynomial, den: Polynomial) -> Self {
        debug_assert!(!den.is_zero());
        Self { num, den }
    }

    pub fn gain(k: f64) -> Self {
        Self {
            num: Polynomial::constant(k),
            den: Polynomial::constant(1.0),
        }
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    /// `deg(den) - deg(num)`; the zero numerator counts as degree 0.
    pub fn relative_degree(&self) -> i64 {
        self.den.degree().unwrap_or(0) as i64 - self.num.degree().unwrap_or(0) as i64
    }

    pub fn is_proper(&self) -> bool {
        self.relative_degree() >= 0
    }

    pub fn eval(&self, s: Complex64) -> Complex64 {
        self.num.eval(s) / self.den.eval(s)
    }

    /// Series connection; no cancellation.
    pub fn series(&self, other: &Self) -> Self {
        Self {
            num: &self.num * &other.num,
            den: &self.den * &other.den,
        }
    }

    pub fn scale(&self, k: f64) -> Self {
        Self {
            num: self.num.scale(k),
            den: self.den.clone(),
        }
    }

    /// Unity negative feedback around `self`: `L / (1 + L)`.
    pub fn feedback(&self) -> Result<Self> {
        Self::new_improper(self.num.clone(), &self.den + &self.num)
    }

    /// `1 + k L(s)` characteristic polynomial, `den + k num`.
    pub fn characteristic(&self, k: f64) -> Polynomial {
        &self.den + &self.num.scale(k)
    }

    /// Equality as rational functions: `n1 d2 = n2 d1` coefficient-wise,
    /// relative to the largest coefficient of either cross product.
    pub fn equivalent(&self, other: &Self, rel_tol: f64) -> bool {
        let lhs = &self.num * &other.den;
        let rhs = &other.num * &self.den;
        lhs.approx_eq(&rhs, rel_tol)
    }
}

pub fn tf_props(tf: &RationalTF) -> Result<TfProps> {
    let poles = match tf.den.degree() {
        Some(0) => Vec::new(),
        _ => poly_roots(&tf.den)?,
    };
    let zeros = match tf.num.degree() {
        None | Some(0) => Vec::new(),
        _ => poly_roots(&tf.num)?,
    };
    let den0 = tf.den.coeff(0);
    let num0 = tf.num.coeff(0);
    let pole_at_origin = den0.abs() <= TOL_ORIGIN_REL * tf.den.max_abs_coeff();
    let dc_gain = if !pole_at_origin {
        DcGain::Finite(num0 / den0)
    } else if num0.abs() <= TOL_ORIGIN_REL * tf.num.max_abs_coeff() {
        DcGain::Indeterminate
    } else {
        DcGain::Infinite
    };
    Ok(TfProps {
        poles,
        zeros,
        relative_degree: tf.relative_degree(),
        dc_gain,
        pole_at_origin,
    })
}

/// Frequency response `num(jw) / den(jw)`.
pub fn tf_freq(tf: &RationalTF, omega: f64) -> Result<Complex64> {
    if omega < 0.0 || !omega.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "frequency must be finite and >= 0, got {omega}"
        )));
    }
    let s = Complex64::new(0.0, omega);
    let d = tf.den.eval(s);
    let scale: f64 = tf
        .den
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, c)| c.abs() * omega.powi(k as i32))
        .sum();
    if d.norm() <= TOL_AXIS_REL * scale {
        return Err(Error::PoleOnAxis { omega });
    }
    Ok(tf.num.eval(s) / d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn tf(num: &[f64], den: &[f64]) -> RationalTF {
        RationalTF::new(Polynomial::new(num.to_vec()), Polynomial::new(den.to_vec())).unwrap()
    }

    #[test]
    fn integrator_props() {
        let p = tf_props(&tf(&[200.0], &[0.0, 1.0])).unwrap();
        assert_eq!(p.relative_degree, 1);
        assert!(p.pole_at_origin);
        assert_eq!(p.dc_gain, DcGain::Infinite);
    }

    #[test]
    fn first_order_props() {
        let p = tf_props(&tf(&[1.0], &[1.0, 1.0])).unwrap();
        assert_eq!(p.dc_gain, DcGain::Finite(1.0));
        assert_eq!(p.relative_degree, 1);
        assert!(!p.pole_at_origin);
        assert!(p.zeros.is_empty());
    }

    #[test]
    fn first_order_corner() {
        let h = tf_freq(&tf(&[1.0], &[1.0, 1.0]), 1.0).unwrap();
        assert!((h.norm() - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((h.arg().to_degrees() + 45.0).abs() < 1e-12);
    }

    #[test]
    fn integrator_response() {
        let h = tf_freq(&tf(&[1.0], &[0.0, 1.0]), 10.0).unwrap();
        assert!((h.norm() - 0.1).abs() < 1e-15);
        assert!((h.arg().to_degrees() + 90.0).abs() < 1e-12);
    }

    #[test]
    fn pole_on_axis_detected() {
        assert!(matches!(
            tf_freq(&tf(&[1.0], &[0.0, 1.0]), 0.0),
            Err(Error::PoleOnAxis { .. })
        ));
        assert!(matches!(
            tf_freq(&tf(&[1.0], &[4.0, 0.0, 1.0]), 2.0),
            Err(Error::PoleOnAxis { .. })
        ));
    }

    #[test]
    fn constructor_rules() {
        assert_eq!(
            RationalTF::new(Polynomial::constant(1.0), Polynomial::zero()),
            Err(Error::ZeroDenominator)
        );
        assert!(matches!(
            RationalTF::new(Polynomial::new(vec![0.0, 1.0]), Polynomial::constant(1.0)),
            Err(Error::Improper { relative_degree: -1 })
        ));
        let d = RationalTF::new_improper(Polynomial::s(), Polynomial::constant(1.0)).unwrap();
        assert_eq!(d.relative_degree(), -1);
    }

    #[test]
    fn feedback_keeps_common_factors() {
        // L = (s+1)/((s+1) s): closed loop keeps the (s+1) factor.
        let l = RationalTF::new(
            Polynomial::linear(1.0),
            &Polynomial::linear(1.0) * &Polynomial::s(),
        )
        .unwrap();
        let t = l.feedback().unwrap();
        assert_eq!(t.den().degree(), Some(2));
        assert!(t.equivalent(&tf(&[1.0], &[1.0, 1.0]), 1e-15));
    }
}
