//! Frequency-response grids, sensitivity peaks, root-locus sweeps and
//! critical-gain search over built loops.

mod critical;
mod freq;
mod locus;

pub use critical::{critical_gain, CRITICAL_GAIN_MAX_ITER, CRITICAL_GAIN_REL_TOL};
pub use freq::{bode, log_grid, sensitivity_peak, BodeGrid, Peak, PEAK_POINTS_PER_DECADE, UNWRAP_THRESHOLD_DEG};
pub use locus::{parametric_locus, root_locus, RootLocusResult};

/// Logarithmic gain grid used when none is given.
pub const DEFAULT_GAINS_PER_DECADE: usize = 60;
