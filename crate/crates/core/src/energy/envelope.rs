//! Hilbert envelopes of sampled waveforms.
//!
//! Analytic mode is the magnitude of the discrete analytic signal: FFT,
//! zero the negative frequencies, double the positive ones, inverse FFT.
//! The frame is zero-padded to the next power of two (an even length),
//! which leaves the real part equal to the input in exact arithmetic, so
//! the envelope dominates |m| up to rounding; samples near the frame
//! endpoints carry the usual edge error from the implicit truncation.
//! Literal mode is the per-sample identity √(m² + (−m)²) = √2·|m|.

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use super::Waveform;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EnvelopeMode {
    #[default]
    Analytic,
    Literal,
}

/// Per-sample nonnegative envelope on the same grid as its waveform.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Envelope {
    pub mode: EnvelopeMode,
    values: Vec<f64>,
}

impl Envelope {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Numerical slack under which the analytic envelope is required to
/// dominate |m|: 1e-6 · max|m|.
pub fn tau_env(w: &Waveform) -> f64 {
    1e-6 * w.values().iter().fold(0.0f64, |a, m| a.max(m.abs()))
}

/// Computes the envelope of a waveform in the requested mode.
pub fn hilbert_envelope(w: &Waveform, mode: EnvelopeMode) -> Envelope {
    let values = match mode {
        EnvelopeMode::Literal => w
            .values()
            .iter()
            .map(|m| std::f64::consts::SQRT_2 * m.abs())
            .collect(),
        EnvelopeMode::Analytic => analytic_magnitude(w.values()),
    };
    Envelope { mode, values }
}

fn analytic_magnitude(signal: &[f64]) -> Vec<f64> {
    let n = signal.len();
    let npad = n.next_power_of_two();
    let mut buf: Vec<Complex64> = signal.iter().map(|&m| Complex64::new(m, 0.0)).collect();
    buf.resize(npad, Complex64::new(0.0, 0.0));

    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(npad).process(&mut buf);

    // keep DC and Nyquist, double positive bins, zero negative bins
    let half = npad / 2;
    for z in buf.iter_mut().take(half).skip(1) {
        *z *= 2.0;
    }
    for z in buf.iter_mut().skip(half + 1) {
        *z = Complex64::new(0.0, 0.0);
    }

    planner.plan_fft_inverse(npad).process(&mut buf);
    let scale = 1.0 / npad as f64;
    buf.iter().take(n).map(|z| (z * scale).norm()).collect()
}
