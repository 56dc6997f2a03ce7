use serde::Serialize;

use crate::error::{Error, Result};

use super::sim::{Channel, SimTrace};

/// Settling band as a fraction of the step size.
pub const SETTLING_BAND: f64 = 0.02;
/// Shortest final reference segment, as a fraction of the run.
pub const MIN_SEGMENT_FRACTION: f64 = 0.2;
/// Tail over which the steady-state error is averaged.
pub const TAIL_FRACTION: f64 = 0.05;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TraceMetrics {
    pub overshoot_pct: f64,
    pub settling_time_s: f64,
    pub ss_error: f64,
    pub rms_residual: f64,
}

/// Step metrics of `channel` against `ref_channel` over the final segment
/// in which the reference is constant.
///
/// The step size is the distance from the channel value at the start of the
/// segment to the final reference. For a zero step the band is 2% of the
/// reference magnitude.
pub fn trace_metrics(trace: &SimTrace, channel: Channel, ref_channel: Channel) -> Result<TraceMetrics> {
    let y = trace.column(channel);
    let r = trace.column(ref_channel);
    let t = &trace.t;
    let n = y.len();
    if n == 0 || r.len() != n || t.len() != n {
        return Err(Error::InvalidArgument("trace columns are empty or of unequal length".into()));
    }

    let start = (1..n).rev().find(|&i| r[i] != r[i - 1]).unwrap_or(0);
    if ((n - start) as f64) < MIN_SEGMENT_FRACTION * n as f64 {
        return Err(Error::NotSettled(ref_channel.name().to_string()));
    }
    let target = r[n - 1];
    let seg = &y[start..];

    let step = target - seg[0];
    let scale = target.abs().max(seg[0].abs()).max(1.0);
    let has_step = step.abs() > 1e-12 * scale;
    let overshoot_pct = if has_step {
        let dir = step.signum();
        let worst = seg.iter().map(|&v| (v - target) * dir).fold(0.0, f64::max);
        100.0 * worst / step.abs()
    } else {
        0.0
    };

    let band = SETTLING_BAND * if has_step { step.abs() } else { target.abs() };
    let settling_time_s = match seg.iter().rposition(|&v| (v - target).abs() > band) {
        None => 0.0,
        Some(j) => t[(start + j + 1).min(n - 1)] - t[start],
    };

    let tail = ((TAIL_FRACTION * n as f64).round() as usize).clamp(1, n);
    let ss_error = y[n - tail..].iter().sum::<f64>() / tail as f64 - target;

    let rms_residual =
        (seg.iter().zip(&r[start..]).map(|(a, b)| (a - b).powi(2)).sum::<f64>() / seg.len() as f64).sqrt();

    Ok(TraceMetrics { overshoot_pct, settling_time_s, ss_error, rms_residual })
}
