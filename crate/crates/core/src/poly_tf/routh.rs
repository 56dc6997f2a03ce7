//! Routh-Hurwitz tabulation.

use serde::Serialize;

use super::Polynomial;
use crate::error::{Error, Result};

/// Substitute for a zero pivot in an otherwise nonzero row.
pub const ROUTH_EPSILON: f64 = 1e-30;

/// Relative size below which a table entry counts as a cancellation to zero.
const ZERO_REL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum StabilityClass {
    Stable,
    Unstable,
    Marginal,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StabilityVerdict {
    pub class: StabilityClass,
    /// Number of sign changes in the first column, i.e. roots with Re > 0.
    pub rhp_count: usize,
    pub first_column: Vec<f64>,
    /// Set when an epsilon pivot or an auxiliary polynomial was needed.
    pub degenerate: bool,
}

impl StabilityVerdict {
    pub fn is_stable(&self) -> bool {
        self.class == StabilityClass::Stable
    }
}

pub fn routh_verdict(p: &Polynomial) -> Result<StabilityVerdict> {
    let n = p.degree().ok_or(Error::ZeroPolynomial)?;
    if n == 0 {
        return Err(Error::InvalidArgument(
            "Routh table needs a polynomial of degree >= 1".into(),
        ));
    }
    let p = if p.leading() < 0.0 { p.scale(-1.0) } else { p.clone() };

    // Row r holds the coefficients of s^(n-r), s^(n-r-2), ...
    let width = n / 2 + 1;
    let row_of = |offset: usize| -> Vec<f64> {
        (0..width)
            .map(|j| {
                let drop = offset + 2 * j;
                if drop <= n { p.coeff(n - drop) } else { 0.0 }
            })
            .collect()
    };

    let mut degenerate = false;
    let mut prev = row_of(0);
    let mut cur = row_of(1);
    let mut column = vec![prev[0]];
    let mut row_power = n - 1;

    loop {
        if cur.iter().all(|&x| x == 0.0) {
            // Auxiliary polynomial from the row above, of power row_power + 1,
            // holding only every other power. Replace the row by its derivative.
            degenerate = true;
            let aux_power = row_power + 1;
            for (j, x) in cur.iter_mut().enumerate() {
                let k = aux_power as i64 - 2 * j as i64;
                *x = if k > 0 { prev[j] * k as f64 } else { 0.0 };
            }
            if cur.iter().all(|&x| x == 0.0) {
                // Row above was a bare constant; nothing to differentiate.
                cur[0] = ROUTH_EPSILON;
            }
        } else if cur[0] == 0.0 {
            degenerate = true;
            cur[0] = ROUTH_EPSILON;
        }
        column.push(cur[0]);

        if row_power == 0 {
            break;
        }
        let next: Vec<f64> = (0..width)
            .map(|j| {
                let a = prev.get(j + 1).copied().unwrap_or(0.0);
                let b = cur.get(j + 1).copied().unwrap_or(0.0);
                let (x, y) = (cur[0] * a, prev[0] * b);
                if (x - y).abs() <= ZERO_REL * (x.abs() + y.abs()) {
                    0.0
                } else {
                    (x - y) / cur[0]
                }
            })
            .collect();
        prev = cur;
        cur = next;
        row_power -= 1;
    }

    let rhp_count = column
        .windows(2)
        .filter(|w| w[0].signum() != w[1].signum())
        .count();
    let class = if rhp_count > 0 {
        StabilityClass::Unstable
    } else if degenerate {
        StabilityClass::Marginal
    } else {
        StabilityClass::Stable
    };
    Ok(StabilityVerdict {
        class,
        rhp_count,
        first_column: column,
        degenerate,
    })
}
