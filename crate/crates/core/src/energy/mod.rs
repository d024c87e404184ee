//! Waveform energy pipeline: uniformly sampled motion waveforms, Hilbert
//! envelopes, signed lobe segmentation, trapezoidal lobe energies, and
//! energy-dissipation stability reports.
//!
//! The pipeline runs per frame: envelope, then zero-crossing lobe
//! segmentation, then per-lobe areas. Dissipation compares lobe energies
//! within a frame (a +ve lobe against its −ve partner) or between frames
//! (the same lobe location at two times); a relaxed proximity verdict
//! marks a pair near when the energy difference stays strictly under ε.
//! Published lobe-area tables can be ingested directly, bypassing
//! segmentation, so the dissipation arithmetic is reproducible without
//! the original signals.
//!
//! All integrals use one scheme: composite trapezoidal integration of
//! the piecewise-linear interpolant of the sampled integrand, with
//! partial cells split exactly at the requested bounds. Splitting a cell
//! preserves its trapezoid area, so lobe energies partition the
//! full-frame energy by construction.

mod dissipation;
mod envelope;
mod lobes;
mod plot;
mod report;

pub use dissipation::{
    dissipation_between_frames, dissipation_within_frame, relaxed_near, relaxed_near_refs,
    DissipationKind, DissipationRecord, LobeRef, ProximityVerdict,
};
pub use envelope::{hilbert_envelope, tau_env, Envelope, EnvelopeMode};
pub use lobes::{lobe_area, segment_lobes, EnvelopeLobe, Integrand, Polarity, SegmentedFrame};
pub use plot::{plot_csv, plot_svg};
pub use report::{
    frames_from_lobe_table, lobe_table_from_csv, render_text, stability_report, BetweenEntry,
    FrameLobes, FrameSection, LobeTableRow, StabilityReport, WithinEntry,
};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EnergyError {
    #[error("waveform needs at least 8 samples, got {got}")]
    TooFewSamples { got: usize },
    #[error("non-uniform sampling at index {index}")]
    NonUniformSampling { index: usize },
    #[error("non-finite value at row {row}, column `{column}`")]
    NonFiniteSample { row: usize, column: String },
    #[error("bad window: t0 = {t0} must be smaller than t1 = {t1}")]
    BadWindow { t0: f64, t1: f64 },
    #[error("support [{lo}, {hi}] lies outside the frame")]
    SupportOutOfFrame { lo: f64, hi: f64 },
    #[error("frame mismatch: {0}")]
    FrameMismatch(String),
    #[error("lobe mismatch: {0}")]
    LobeIdMismatch(String),
    #[error("lobe has no sampled support; its area is fixed at ingestion")]
    NoSupport,
    #[error("csv: {0}")]
    Csv(String),
}

pub type Result<T> = std::result::Result<T, EnergyError>;

/// A uniformly sampled waveform `m(t)` belonging to one frame.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Waveform {
    frame_id: String,
    times: Vec<f64>,
    values: Vec<f64>,
}

impl Waveform {
    /// Validates sample count (≥ 8), strictly increasing times, uniform
    /// spacing within 1e-9 relative, and finite values.
    pub fn new<S: Into<String>>(frame_id: S, samples: Vec<(f64, f64)>) -> Result<Self> {
        if samples.len() < 8 {
            return Err(EnergyError::TooFewSamples { got: samples.len() });
        }
        for (row, (t, m)) in samples.iter().enumerate() {
            if !t.is_finite() {
                return Err(EnergyError::NonFiniteSample {
                    row,
                    column: "t".into(),
                });
            }
            if !m.is_finite() {
                return Err(EnergyError::NonFiniteSample {
                    row,
                    column: "m".into(),
                });
            }
        }
        let dt = samples[1].0 - samples[0].0;
        if dt <= 0.0 {
            return Err(EnergyError::NonUniformSampling { index: 1 });
        }
        for i in 2..samples.len() {
            let step = samples[i].0 - samples[i - 1].0;
            if step <= 0.0 || (step - dt).abs() > 1e-9 * dt {
                return Err(EnergyError::NonUniformSampling { index: i });
            }
        }
        let (times, values) = samples.into_iter().unzip();
        Ok(Self {
            frame_id: frame_id.into(),
            times,
            values,
        })
    }

    /// Synthesizes a waveform by sampling `f` at `n` uniform steps of
    /// `dt` starting at t = 0.
    pub fn from_fn<S: Into<String>, F: Fn(f64) -> f64>(
        frame_id: S,
        dt: f64,
        n: usize,
        f: F,
    ) -> Result<Self> {
        let samples = (0..n)
            .map(|k| {
                let t = k as f64 * dt;
                (t, f(t))
            })
            .collect();
        Self::new(frame_id, samples)
    }

    /// Reads a waveform from CSV with header `t,m`.
    pub fn from_csv_reader<S: Into<String>, R: std::io::Read>(
        frame_id: S,
        reader: R,
    ) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .from_reader(reader);
        {
            let headers = rdr.headers().map_err(|e| EnergyError::Csv(e.to_string()))?;
            if headers.len() < 2 || &headers[0] != "t" || &headers[1] != "m" {
                return Err(EnergyError::Csv(format!(
                    "expected header `t,m`, got `{}`",
                    headers.iter().collect::<Vec<_>>().join(",")
                )));
            }
        }
        let mut samples = Vec::new();
        for (row, record) in rdr.records().enumerate() {
            let record = record.map_err(|e| EnergyError::Csv(e.to_string()))?;
            let t: f64 = record[0].trim().parse().map_err(|_| {
                EnergyError::Csv(format!("row {}: bad t `{}`", row + 1, &record[0]))
            })?;
            let m: f64 = record[1].trim().parse().map_err(|_| {
                EnergyError::Csv(format!("row {}: bad m `{}`", row + 1, &record[1]))
            })?;
            samples.push((t, m));
        }
        Self::new(frame_id, samples)
    }

    pub fn frame_id(&self) -> &str {
        &self.frame_id
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn dt(&self) -> f64 {
        self.times[1] - self.times[0]
    }

    pub fn t_start(&self) -> f64 {
        self.times[0]
    }

    pub fn t_end(&self) -> f64 {
        *self.times.last().unwrap()
    }

    fn frame_fuzz(&self) -> f64 {
        1e-9 * (self.t_end() - self.t_start())
    }

    pub(crate) fn check_window(&self, lo: f64, hi: f64) -> Result<()> {
        let fuzz = self.frame_fuzz();
        if lo < self.t_start() - fuzz || hi > self.t_end() + fuzz {
            return Err(EnergyError::SupportOutOfFrame { lo, hi });
        }
        Ok(())
    }
}

/// Trapezoidal energy `∫ |m(t)|² dt` over `[t0, t1]`.
pub fn waveform_energy(w: &Waveform, t0: f64, t1: f64) -> Result<f64> {
    if t0 >= t1 {
        return Err(EnergyError::BadWindow { t0, t1 });
    }
    w.check_window(t0, t1)?;
    let squared: Vec<f64> = w.values.iter().map(|m| m * m).collect();
    Ok(integrate_pwl(&w.times, &squared, t0, t1))
}

/// Integral over `[a, b]` of the piecewise-linear interpolant of the
/// samples `(times[i], g[i])`. Bounds are clamped to the sampled span;
/// partial cells contribute the trapezoid of the interpolated endpoint
/// values, so splitting a cell never changes the total.
pub(crate) fn integrate_pwl(times: &[f64], g: &[f64], a: f64, b: f64) -> f64 {
    let a = a.max(times[0]);
    let b = b.min(*times.last().unwrap());
    if b <= a {
        return 0.0;
    }
    let mut total = 0.0;
    for i in 0..times.len() - 1 {
        let (t_lo, t_hi) = (times[i], times[i + 1]);
        if t_hi <= a || t_lo >= b {
            continue;
        }
        let lo = t_lo.max(a);
        let hi = t_hi.min(b);
        let g_lo = interp(t_lo, t_hi, g[i], g[i + 1], lo);
        let g_hi = interp(t_lo, t_hi, g[i], g[i + 1], hi);
        total += 0.5 * (g_lo + g_hi) * (hi - lo);
    }
    total
}

fn interp(t0: f64, t1: f64, g0: f64, g1: f64, t: f64) -> f64 {
    if t == t0 {
        return g0;
    }
    if t == t1 {
        return g1;
    }
    g0 + (g1 - g0) * (t - t0) / (t1 - t0)
}
