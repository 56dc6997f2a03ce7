use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly_tf::{tf_freq, RationalTF};

/// Phase jump between neighbouring points above which 360 degrees are
/// added or removed during unwrapping.
pub const UNWRAP_THRESHOLD_DEG: f64 = 180.0;

/// Minimum grid density of the peak search.
pub const PEAK_POINTS_PER_DECADE: usize = 200;

const GOLDEN_ITERS: usize = 100;
const DIVERGENCE: f64 = 1e12;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BodeGrid {
    pub omegas: Vec<f64>,
    pub mag_db: Vec<f64>,
    pub phase_deg: Vec<f64>,
    /// Grid frequencies dropped because they sit on a pole.
    pub skipped: Vec<f64>,
}

impl BodeGrid {
    pub fn len(&self) -> usize {
        self.omegas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omegas.is_empty()
    }

    pub fn max_mag_db(&self) -> f64 {
        self.mag_db.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Logarithmic grid from `lo` to `hi` inclusive with `per_decade` points
/// per decade (rounded to a whole number of steps).
pub fn log_grid(lo: f64, hi: f64, per_decade: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi > lo && hi.is_finite()) || per_decade == 0 {
        return Err(Error::InvalidArgument(format!(
            "need 0 < lo < hi and per_decade >= 1, got lo={lo} hi={hi} per_decade={per_decade}"
        )));
    }
    let (a, b) = (lo.log10(), hi.log10());
    let steps = (((b - a) * per_decade as f64).round() as usize).max(1);
    Ok((0..=steps)
        .map(|i| {
            if i == steps {
                hi
            } else {
                10f64.powf(a + (b - a) * i as f64 / steps as f64)
            }
        })
        .collect())
}

fn unwrap_step(prev: f64, raw: f64) -> f64 {
    let mut x = raw;
    while x - prev > UNWRAP_THRESHOLD_DEG {
        x -= 360.0;
    }
    while x - prev < -UNWRAP_THRESHOLD_DEG {
        x += 360.0;
    }
    x
}

pub fn bode(tf: &RationalTF, omega_lo: f64, omega_hi: f64, points_per_decade: usize) -> Result<BodeGrid> {
    let grid = log_grid(omega_lo, omega_hi, points_per_decade)?;
    let mut out = BodeGrid {
        omegas: Vec::with_capacity(grid.len()),
        mag_db: Vec::with_capacity(grid.len()),
        phase_deg: Vec::with_capacity(grid.len()),
        skipped: Vec::new(),
    };
    for w in grid {
        match tf_freq(tf, w) {
            Ok(h) => {
                let raw = h.arg().to_degrees();
                let phase = out.phase_deg.last().map_or(raw, |&p| unwrap_step(p, raw));
                out.omegas.push(w);
                out.mag_db.push(20.0 * h.norm().log10());
                out.phase_deg.push(phase);
            }
            Err(Error::PoleOnAxis { .. }) => out.skipped.push(w),
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Peak {
    pub omega_star: f64,
    /// Linear magnitude.
    pub peak: f64,
}

/// Largest `|tf(jw)|` over `band`, by dense log grid search followed by a
/// golden-section refinement around the best grid point.
pub fn sensitivity_peak(tf: &RationalTF, band: (f64, f64)) -> Result<Peak> {
    let (lo, hi) = band;
    let grid = log_grid(lo, hi, PEAK_POINTS_PER_DECADE)?;
    let mag = |w: f64| -> Result<f64> {
        let m = tf_freq(tf, w)?.norm();
        if !m.is_finite() || m > DIVERGENCE {
            return Err(Error::PoleOnAxis { omega: w });
        }
        Ok(m)
    };
    let mags = grid.iter().map(|&w| mag(w)).collect::<Result<Vec<_>>>()?;
    let (best, &best_mag) = mags
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("grid has at least two points");

    let mut peak = Peak { omega_star: grid[best], peak: best_mag };
    let left = grid[best.saturating_sub(1)].ln();
    let right = grid[(best + 1).min(grid.len() - 1)].ln();
    if right > left {
        let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
        let (mut a, mut b) = (left, right);
        let mut c = b - inv_phi * (b - a);
        let mut d = a + inv_phi * (b - a);
        let mut fc = mag(c.exp())?;
        let mut fd = mag(d.exp())?;
        for _ in 0..GOLDEN_ITERS {
            if fc > fd {
                b = d;
                d = c;
                fd = fc;
                c = b - inv_phi * (b - a);
                fc = mag(c.exp())?;
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + inv_phi * (b - a);
                fd = mag(d.exp())?;
            }
            if b - a < 1e-12 {
                break;
            }
        }
        let (w, m) = if fc > fd { (c.exp(), fc) } else { (d.exp(), fd) };
        if m > peak.peak {
            peak = Peak { omega_star: w, peak: m };
        }
    }
    Ok(peak)
}
