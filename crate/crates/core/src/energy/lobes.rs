//! Zero-crossing lobe segmentation and lobe areas.
//!
//! Lobes are maximal same-sign runs of the waveform between consecutive
//! zero crossings; crossing times are linearly interpolated between the
//! straddling samples, and a run of exact zeros between opposite signs
//! crosses where the signal first reaches zero. Lobes are labeled L1,
//! L2, … left to right and alternate polarity by construction.

use serde::{Deserialize, Serialize};

use super::{integrate_pwl, EnergyError, Envelope, Result, Waveform};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    Positive,
    Negative,
}

impl Polarity {
    /// The table label: `+ve` / `-ve`.
    pub fn label(self) -> &'static str {
        match self {
            Polarity::Positive => "+ve",
            Polarity::Negative => "-ve",
        }
    }

    /// The sign prefix used in segment labels such as `+L4`.
    pub fn sign(self) -> char {
        match self {
            Polarity::Positive => '+',
            Polarity::Negative => '-',
        }
    }
}

/// Which sampled quantity a lobe area integrates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Integrand {
    /// The envelope itself — the "lobe area" reading (default).
    #[default]
    Envelope,
    /// |m(t)|² — the energy reading.
    Squared,
}

/// A signed lobe: its support interval, polarity, and cached area.
/// Table-ingested lobes carry no support; their area is given directly.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EnvelopeLobe {
    pub id: String,
    pub polarity: Polarity,
    pub support: Option<(f64, f64)>,
    pub area: f64,
    pub frame_id: String,
}

/// The lobes of one frame, left to right.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SegmentedFrame {
    pub frame_id: String,
    pub lobes: Vec<EnvelopeLobe>,
    /// Set when the waveform never changes sign: the single returned
    /// lobe spans the whole frame.
    pub no_crossings: bool,
}

/// Splits a waveform into signed lobes at its zero crossings and caches
/// each lobe's area under the given integrand.
pub fn segment_lobes(w: &Waveform, env: &Envelope, integrand: Integrand) -> Result<SegmentedFrame> {
    if env.len() != w.len() {
        return Err(EnergyError::FrameMismatch(format!(
            "envelope has {} samples, waveform has {}",
            env.len(),
            w.len()
        )));
    }
    let crossings = zero_crossings(w.times(), w.values());
    let no_crossings = crossings.is_empty();

    let mut bounds = Vec::with_capacity(crossings.len() + 2);
    bounds.push(w.t_start());
    bounds.extend(&crossings);
    bounds.push(w.t_end());

    // crossings sit exactly where the sign flips, so polarity alternates
    // from the first nonzero sample onward; a zero-width interval (a
    // crossing time rounding onto a frame bound) emits no lobe but still
    // flips
    let mut polarity = first_polarity(w.values());
    let mut lobes = Vec::with_capacity(bounds.len() - 1);
    for pair in bounds.windows(2) {
        let (lo, hi) = (pair[0], pair[1]);
        if hi > lo {
            let mut lobe = EnvelopeLobe {
                id: format!("L{}", lobes.len() + 1),
                polarity,
                support: Some((lo, hi)),
                area: 0.0,
                frame_id: w.frame_id().to_string(),
            };
            lobe.area = lobe_area(w, env, &lobe, integrand)?;
            lobes.push(lobe);
        }
        polarity = match polarity {
            Polarity::Positive => Polarity::Negative,
            Polarity::Negative => Polarity::Positive,
        };
    }
    Ok(SegmentedFrame {
        frame_id: w.frame_id().to_string(),
        lobes,
        no_crossings,
    })
}

/// Area of one lobe: trapezoidal integral of the chosen integrand over
/// the lobe support, with the end cells split at the crossing times.
pub fn lobe_area(
    w: &Waveform,
    env: &Envelope,
    lobe: &EnvelopeLobe,
    integrand: Integrand,
) -> Result<f64> {
    let (lo, hi) = lobe.support.ok_or(EnergyError::NoSupport)?;
    w.check_window(lo, hi)?;
    let g: Vec<f64> = match integrand {
        Integrand::Envelope => env.values().to_vec(),
        Integrand::Squared => w.values().iter().map(|m| m * m).collect(),
    };
    Ok(integrate_pwl(w.times(), &g, lo, hi))
}

/// Interior zero-crossing times, strictly increasing.
fn zero_crossings(times: &[f64], values: &[f64]) -> Vec<f64> {
    let mut crossings = Vec::new();
    let mut last_signed: Option<usize> = None;
    for (i, &v) in values.iter().enumerate() {
        if v == 0.0 {
            continue;
        }
        if let Some(j) = last_signed {
            if (values[j] > 0.0) != (v > 0.0) {
                if i == j + 1 {
                    // straddling samples: linear interpolation
                    let a = values[j];
                    let b = values[i];
                    crossings.push(times[j] + (times[i] - times[j]) * a / (a - b));
                } else {
                    // zero run between opposite signs: crossing where the
                    // signal first reaches zero
                    crossings.push(times[j + 1]);
                }
            }
        }
        last_signed = Some(i);
    }
    crossings
}

/// Sign of the first nonzero sample; an all-zero waveform defaults to
/// positive.
fn first_polarity(values: &[f64]) -> Polarity {
    for &v in values {
        if v > 0.0 {
            return Polarity::Positive;
        }
        if v < 0.0 {
            return Polarity::Negative;
        }
    }
    Polarity::Positive
}
