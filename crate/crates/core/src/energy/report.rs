//! Stability reports: within-frame and between-frame dissipation records
//! with ε-relaxed verdicts, plus lobe-table ingestion and the fixed-width
//! text rendering.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{
    dissipation_between_frames, dissipation_within_frame, relaxed_near_refs, DissipationRecord,
    EnergyError, EnvelopeLobe, Polarity, ProximityVerdict, Result, SegmentedFrame,
};

/// One row of a published lobe-area table.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LobeTableRow {
    pub frame: String,
    pub lobe: String,
    pub pos_area: f64,
    pub neg_area: f64,
}

/// Reads a lobe table from CSV with header `frame,lobe,pos_area,neg_area`.
pub fn lobe_table_from_csv<R: std::io::Read>(reader: R) -> Result<Vec<LobeTableRow>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(reader);
    {
        let headers = rdr.headers().map_err(|e| EnergyError::Csv(e.to_string()))?;
        let expected = ["frame", "lobe", "pos_area", "neg_area"];
        if headers.len() < 4 || headers.iter().zip(expected).any(|(h, e)| h != e) {
            return Err(EnergyError::Csv(format!(
                "expected header `frame,lobe,pos_area,neg_area`, got `{}`",
                headers.iter().collect::<Vec<_>>().join(",")
            )));
        }
    }
    let mut rows = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let record = record.map_err(|e| EnergyError::Csv(e.to_string()))?;
        let parse = |col: usize, name: &str| -> Result<f64> {
            let v: f64 = record[col].trim().parse().map_err(|_| {
                EnergyError::Csv(format!("row {}: bad {name} `{}`", i + 1, &record[col]))
            })?;
            if !v.is_finite() {
                return Err(EnergyError::NonFiniteSample {
                    row: i,
                    column: name.to_string(),
                });
            }
            Ok(v)
        };
        rows.push(LobeTableRow {
            frame: record[0].trim().to_string(),
            lobe: record[1].trim().to_string(),
            pos_area: parse(2, "pos_area")?,
            neg_area: parse(3, "neg_area")?,
        });
    }
    Ok(rows)
}

/// The lobes of one frame, however they were obtained.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FrameLobes {
    pub frame_id: String,
    pub lobes: Vec<EnvelopeLobe>,
}

impl From<SegmentedFrame> for FrameLobes {
    fn from(seg: SegmentedFrame) -> Self {
        Self {
            frame_id: seg.frame_id,
            lobes: seg.lobes,
        }
    }
}

/// Turns table rows into frames, two lobes per row (±), preserving the
/// order in which frames and lobes first appear.
pub fn frames_from_lobe_table(rows: &[LobeTableRow]) -> Vec<FrameLobes> {
    let mut frames: Vec<FrameLobes> = Vec::new();
    for row in rows {
        let frame = match frames.iter_mut().find(|f| f.frame_id == row.frame) {
            Some(f) => f,
            None => {
                frames.push(FrameLobes {
                    frame_id: row.frame.clone(),
                    lobes: Vec::new(),
                });
                frames.last_mut().unwrap()
            }
        };
        for (polarity, area) in [
            (Polarity::Positive, row.pos_area),
            (Polarity::Negative, row.neg_area),
        ] {
            frame.lobes.push(EnvelopeLobe {
                id: row.lobe.clone(),
                polarity,
                support: None,
                area,
                frame_id: row.frame.clone(),
            });
        }
    }
    frames
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WithinEntry {
    pub record: DissipationRecord,
    pub verdict: ProximityVerdict,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BetweenEntry {
    pub record: DissipationRecord,
    pub verdict: ProximityVerdict,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FrameSection {
    pub frame_id: String,
    pub rows: Vec<WithinEntry>,
    /// Every within-frame verdict of this frame is near.
    pub stable: bool,
}

/// The full dissipation/proximity report over a list of frames.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StabilityReport {
    pub epsilon: f64,
    pub frames: Vec<FrameSection>,
    pub between: Vec<BetweenEntry>,
    /// Lobe locations (e.g. `+L4`) whose between-frame verdicts are all
    /// near — the stable, low-dissipation segments.
    pub stable_segments: Vec<String>,
    /// Frames whose within-frame verdicts are all near.
    pub stable_frames: Vec<String>,
}

/// Builds the stability report: per-frame within-frame records, all
/// between-frame records for lobe locations shared by frame pairs (in
/// input order), and ε-verdicts on every record.
pub fn stability_report(frames: &[FrameLobes], epsilon: f64) -> Result<StabilityReport> {
    let mut sections = Vec::with_capacity(frames.len());
    for frame in frames {
        let mut rows = Vec::new();
        for (plus, minus) in within_pairs(frame) {
            let record = dissipation_within_frame(plus, minus)?;
            let verdict = relaxed_near_refs(
                (record.first.segment_label(), record.second.segment_label()),
                record.energy_first,
                record.energy_second,
                epsilon,
            );
            rows.push(WithinEntry { record, verdict });
        }
        let stable = !rows.is_empty() && rows.iter().all(|r| r.verdict.near);
        sections.push(FrameSection {
            frame_id: frame.frame_id.clone(),
            rows,
            stable,
        });
    }

    let mut between = Vec::new();
    for i in 0..frames.len() {
        for j in (i + 1)..frames.len() {
            for a in &frames[i].lobes {
                if let Some(b) = frames[j]
                    .lobes
                    .iter()
                    .find(|b| b.id == a.id && b.polarity == a.polarity)
                {
                    let record = dissipation_between_frames(a, b)?;
                    let verdict = relaxed_near_refs(
                        (
                            format!("{}@{}", record.first.segment_label(), record.first.frame_id),
                            format!(
                                "{}@{}",
                                record.second.segment_label(),
                                record.second.frame_id
                            ),
                        ),
                        record.energy_first,
                        record.energy_second,
                        epsilon,
                    );
                    between.push(BetweenEntry { record, verdict });
                }
            }
        }
    }

    let mut seen = BTreeSet::new();
    let mut stable_segments = Vec::new();
    for entry in &between {
        let label = entry.record.first.segment_label();
        if seen.insert(label.clone()) {
            let all_near = between
                .iter()
                .filter(|e| e.record.first.segment_label() == label)
                .all(|e| e.verdict.near);
            if all_near {
                stable_segments.push(label);
            }
        }
    }

    let stable_frames = sections
        .iter()
        .filter(|s| s.stable)
        .map(|s| s.frame_id.clone())
        .collect();

    Ok(StabilityReport {
        epsilon,
        frames: sections,
        between,
        stable_segments,
        stable_frames,
    })
}

/// Pairs each +ve lobe with its −ve partner. Table-ingested frames share
/// one id per ± pair; segmented frames pair adjacent opposite-polarity
/// lobes left to right.
fn within_pairs(frame: &FrameLobes) -> Vec<(&EnvelopeLobe, &EnvelopeLobe)> {
    let mut pairs = Vec::new();
    let shared_ids = frame.lobes.iter().any(|a| {
        frame
            .lobes
            .iter()
            .any(|b| b.id == a.id && b.polarity != a.polarity)
    });
    if shared_ids {
        let mut seen = BTreeSet::new();
        for lobe in &frame.lobes {
            if !seen.insert(lobe.id.clone()) {
                continue;
            }
            let plus = frame
                .lobes
                .iter()
                .find(|l| l.id == lobe.id && l.polarity == Polarity::Positive);
            let minus = frame
                .lobes
                .iter()
                .find(|l| l.id == lobe.id && l.polarity == Polarity::Negative);
            if let (Some(p), Some(m)) = (plus, minus) {
                pairs.push((p, m));
            }
        }
    } else {
        for pair in frame.lobes.chunks(2) {
            if pair.len() < 2 {
                break;
            }
            match (pair[0].polarity, pair[1].polarity) {
                (Polarity::Positive, Polarity::Negative) => pairs.push((&pair[0], &pair[1])),
                (Polarity::Negative, Polarity::Positive) => pairs.push((&pair[1], &pair[0])),
                _ => {}
            }
        }
    }
    pairs
}

const COL_LOBE: usize = 4;
const COL_POS: usize = 14;
const COL_NEG: usize = 14;
const COL_DISS: usize = 18;

/// Renders the report as fixed-width text tables; floats carry 4
/// decimals.
pub fn render_text(report: &StabilityReport) -> String {
    let mut out = String::new();
    for section in &report.frames {
        out.push_str(&format!("Lobe Energy for Frame {}\n", section.frame_id));
        out.push_str(&format!(
            "{:<COL_LOBE$} | {:>COL_POS$} | {:>COL_NEG$} | {:>COL_DISS$}\n",
            "Lobe", "+ve Lobe Areas", "-ve Lobe Areas", "Energy Dissipation"
        ));
        for row in &section.rows {
            let label = if row.record.first.lobe_id == row.record.second.lobe_id {
                row.record.first.lobe_id.clone()
            } else {
                format!("{}/{}", row.record.first.lobe_id, row.record.second.lobe_id)
            };
            out.push_str(&format!(
                "{:<COL_LOBE$} | {:>COL_POS$.4} | {:>COL_NEG$.4} | {:>COL_DISS$.4}\n",
                label, row.record.energy_first, row.record.energy_second, row.record.dissipation
            ));
        }
        out.push('\n');
    }

    if !report.between.is_empty() {
        out.push_str(&format!(
            "Relaxed proximities between frames (epsilon = {:.4})\n",
            report.epsilon
        ));
        out.push_str(&format!(
            "{:<14} | {:>10} | {:>10} | {:>COL_DISS$} | {}\n",
            "Lobe", "E(t)", "E(t')", "Energy Dissipation", "Near"
        ));
        for entry in &report.between {
            out.push_str(&format!(
                "{:<14} | {:>10.4} | {:>10.4} | {:>COL_DISS$.4} | {}\n",
                format!(
                    "{} {}->{}",
                    entry.record.first.segment_label(),
                    entry.record.first.frame_id,
                    entry.record.second.frame_id
                ),
                entry.record.energy_first,
                entry.record.energy_second,
                entry.record.dissipation,
                if entry.verdict.near { "yes" } else { "no" }
            ));
        }
        out.push('\n');
    }

    if report.between.is_empty() {
        if !report.stable_frames.is_empty() {
            out.push_str(&format!(
                "Stable frames (all within-frame dissipation < {:.4}): {}\n",
                report.epsilon,
                report.stable_frames.join(", ")
            ));
        }
    } else if report.stable_segments.is_empty() {
        out.push_str("Stable segments: none\n");
    } else {
        out.push_str(&format!(
            "Stable segments (all between-frame dissipation < {:.4}): {}\n",
            report.epsilon,
            report.stable_segments.join(", ")
        ));
    }
    out
}
