//! Polynomial root finding through the eigenvalues of a balanced companion
//! matrix, with one Newton correction per root.

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;

use super::Polynomial;
use crate::error::{Error, Result};

const SCHUR_EPS: f64 = 1e-15;
const SCHUR_MAX_ITER: usize = 10_000;

/// All roots of `p`, repeated by multiplicity.
///
/// Roots at the origin are deflated exactly before the eigenvalue problem,
/// so `s^k q(s)` always reports `k` exact zeros.
pub fn poly_roots(p: &Polynomial) -> Result<Vec<Complex64>> {
    let degree = p.degree().ok_or(Error::ZeroPolynomial)?;
    if degree == 0 {
        return Err(Error::ConstantPolynomial);
    }

    let c = p.coeffs();
    let zeros_at_origin = c.iter().take_while(|&&x| x == 0.0).count();
    let reduced = &c[zeros_at_origin..];
    let mut roots = vec![Complex64::new(0.0, 0.0); zeros_at_origin];

    let n = reduced.len() - 1;
    match n {
        0 => {}
        1 => roots.push(Complex64::new(-reduced[0] / reduced[1], 0.0)),
        _ => {
            let eig = companion_eigenvalues(reduced)?;
            let q = Polynomial::new(reduced.to_vec());
            let dq = q.derivative();
            roots.extend(eig.into_iter().map(|r| newton_polish(&q, &dq, r)));
        }
    }
    Ok(roots)
}

fn companion_eigenvalues(c: &[f64]) -> Result<Vec<Complex64>> {
    let n = c.len() - 1;
    let lead = c[n];
    // Upper Hessenberg companion: first row holds -c_{n-1}/c_n ... -c_0/c_n.
    let mut m = DMatrix::<f64>::zeros(n, n);
    for j in 0..n {
        m[(0, j)] = -c[n - 1 - j] / lead;
    }
    for i in 1..n {
        m[(i, i - 1)] = 1.0;
    }
    balance(&mut m);

    let schur =
        Schur::try_new(m, SCHUR_EPS, SCHUR_MAX_ITER).ok_or(Error::RootsDidNotConverge { degree: n })?;
    Ok(schur.complex_eigenvalues().iter().copied().collect())
}

/// Parlett-Reinsch diagonal similarity balancing with radix-2 scale factors,
/// so the eigenvalues are unchanged bit-for-bit in exact arithmetic.
fn balance(m: &mut DMatrix<f64>) {
    const RADIX: f64 = 2.0;
    let n = m.nrows();
    let mut converged = false;
    while !converged {
        converged = true;
        for i in 0..n {
            let mut col = 0.0;
            let mut row = 0.0;
            for j in 0..n {
                if j != i {
                    col += m[(j, i)].abs();
                    row += m[(i, j)].abs();
                }
            }
            if col == 0.0 || row == 0.0 {
                continue;
            }
            let total = col + row;
            let mut f = 1.0;
            let mut g = row / RADIX;
            while col < g {
                f *= RADIX;
                col *= RADIX * RADIX;
            }
            g = row * RADIX;
            while col > g {
                f /= RADIX;
                col /= RADIX * RADIX;
            }
            if (col + row) / f < 0.95 * total {
                converged = false;
                let inv = 1.0 / f;
                for j in 0..n {
                    m[(i, j)] *= inv;
                }
                for j in 0..n {
                    m[(j, i)] *= f;
                }
            }
        }
    }
}

fn newton_polish(p: &Polynomial, dp: &Polynomial, r: Complex64) -> Complex64 {
    let f = p.eval(r);
    let d = dp.eval(r);
    if d.norm() == 0.0 || !d.is_finite() {
        return r;
    }
    let mut candidate = r - f / d;
    // Keep real roots real; the Schur form returns them with a zero imaginary part.
    if r.im == 0.0 {
        candidate.im = 0.0;
    }
    if candidate.is_finite() && p.eval(candidate).norm() < f.norm() {
        candidate
    } else {
        r
    }
}

/// Scaled residual `|p(r)| / (sum|c_i| * max(1,|r|)^deg)`.
pub fn scaled_residual(p: &Polynomial, r: Complex64) -> f64 {
    let deg = p.degree().unwrap_or(0) as i32;
    let scale = p.abs_coeff_sum() * r.norm().max(1.0).powi(deg);
    if scale == 0.0 {
        0.0
    } else {
        p.eval(r).norm() / scale
    }
}

/// Largest real part among the roots, `-inf` for an empty set.
pub fn max_real_part(roots: &[Complex64]) -> f64 {
    roots.iter().map(|r| r.re).fold(f64::NEG_INFINITY, f64::max)
}
