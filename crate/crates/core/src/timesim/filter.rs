/// First-order low-pass `g / (s + g)` discretized with the bilinear map.
#[derive(Clone, Debug)]
pub struct LowPass {
    pole: f64,
    gain: f64,
    y: f64,
    u_prev: f64,
}

impl LowPass {
    pub fn new(g: f64, t_s: f64) -> Self {
        let gt = g * t_s;
        Self {
            pole: (2.0 - gt) / (2.0 + gt),
            gain: gt / (2.0 + gt),
            y: 0.0,
            u_prev: 0.0,
        }
    }

    /// Put the filter at rest with constant input `u`.
    pub fn reset(&mut self, u: f64) {
        self.y = u;
        self.u_prev = u;
    }

    pub fn step(&mut self, u: f64) -> f64 {
        self.y = self.pole * self.y + self.gain * (u + self.u_prev);
        self.u_prev = u;
        self.y
    }

    pub fn output(&self) -> f64 {
        self.y
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_dc_gain() {
        let mut f = LowPass::new(200.0, 1e-4);
        let mut y = 0.0;
        for _ in 0..100_000 {
            y = f.step(3.0);
        }
        assert!((y - 3.0).abs() < 1e-12);
    }

    #[test]
    fn reset_is_rest() {
        let mut f = LowPass::new(50.0, 1e-3);
        f.reset(2.0);
        assert_eq!(f.step(2.0), 2.0);
    }

    #[test]
    fn step_response_tracks_exponential() {
        let (g, t_s) = (100.0, 1e-4);
        let mut f = LowPass::new(g, t_s);
        for k in 1..=1000 {
            let y = f.step(1.0);
            // Bilinear treats the step as a ramp over the first interval.
            let t = (k as f64 - 0.5) * t_s;
            assert!((y - (1.0 - (-g * t).exp())).abs() < 1e-4);
        }
    }
}
