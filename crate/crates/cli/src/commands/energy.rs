//! `energy`: the per-frame envelope/lobe pipeline or the lobe-table
//! ingestion bypass, followed by the dissipation stability report.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use desprox_core::energy::{
    frames_from_lobe_table, hilbert_envelope, lobe_table_from_csv, plot_csv, plot_svg, render_text,
    segment_lobes, stability_report, EnvelopeMode, FrameLobes, Integrand, Waveform,
};

use crate::args::{EnergyArgs, EnvelopeModeArg, IntegrandArg, ReportFormat};
use crate::commands::emit_report;
use crate::manifest::RunManifest;
use crate::validate::{validate_lobe_table, validate_waveform_csv, ValidationReport};
use crate::{Failure, RunResult};

#[derive(Deserialize)]
struct FramesManifest {
    frames: Vec<FrameEntry>,
}

#[derive(Deserialize)]
struct FrameEntry {
    id: String,
    csv: PathBuf,
}

pub fn run(args: &EnergyArgs) -> RunResult<()> {
    if args.epsilon <= 0.0 {
        return Err(Failure::Validation("epsilon must be positive".into()));
    }
    let mut manifest = RunManifest::new("energy", args);

    let frames: Vec<FrameLobes> = if let Some(table_path) = &args.lobe_table {
        let mut findings = ValidationReport::default();
        validate_lobe_table(table_path, &mut findings);
        if !findings.is_ok() {
            return Err(Failure::Validation(findings.render()));
        }
        manifest.record_input(table_path)?;
        let text = std::fs::read_to_string(table_path)
            .map_err(|e| Failure::Validation(format!("cannot read lobe table: {e}")))?;
        let rows = manifest
            .timed("lobe_table_ingestion", || {
                lobe_table_from_csv(text.as_bytes())
            })
            .map_err(Failure::computation)?;
        if rows.is_empty() {
            return Err(Failure::Validation("lobe table has no rows".into()));
        }
        frames_from_lobe_table(&rows)
    } else {
        let manifest_path = args
            .frames
            .as_ref()
            .expect("clap enforces frames|lobe-table");
        segment_frames(args, manifest_path, &mut manifest)?
    };

    let report = manifest
        .timed("stability_report", || {
            stability_report(&frames, args.epsilon)
        })
        .map_err(Failure::computation)?;

    match args.report {
        ReportFormat::Json => {
            let json = serde_json::to_string_pretty(&report).map_err(Failure::computation)?;
            emit_report(&mut manifest, args.output.as_deref(), "report.json", &json)?;
        }
        ReportFormat::Text => {
            let text = render_text(&report);
            emit_report(&mut manifest, args.output.as_deref(), "report.txt", &text)?;
        }
    }
    manifest.finish(args.output.as_deref())
}

/// Runs the sampled-waveform pipeline for every frame in the manifest,
/// writing plot files along the way when requested.
fn segment_frames(
    args: &EnergyArgs,
    manifest_path: &Path,
    manifest: &mut RunManifest,
) -> RunResult<Vec<FrameLobes>> {
    let text = std::fs::read_to_string(manifest_path).map_err(|e| {
        Failure::Validation(format!("cannot read `{}`: {e}", manifest_path.display()))
    })?;
    let spec: FramesManifest =
        serde_json::from_str(&text).map_err(|e| Failure::Validation(e.to_string()))?;
    if spec.frames.is_empty() {
        return Err(Failure::Validation("frame manifest lists no frames".into()));
    }
    let base = manifest_path.parent().unwrap_or(Path::new("."));

    let mut findings = ValidationReport::default();
    let paths: Vec<PathBuf> = spec
        .frames
        .iter()
        .map(|f| {
            if f.csv.is_absolute() {
                f.csv.clone()
            } else {
                base.join(&f.csv)
            }
        })
        .collect();
    for path in &paths {
        validate_waveform_csv(path, &mut findings);
    }
    if !findings.is_ok() {
        return Err(Failure::Validation(findings.render()));
    }
    manifest.record_input(manifest_path)?;
    for path in &paths {
        manifest.record_input(path)?;
    }

    let mode = match args.envelope_mode {
        EnvelopeModeArg::Analytic => EnvelopeMode::Analytic,
        EnvelopeModeArg::Literal => EnvelopeMode::Literal,
    };
    let integrand = match args.integrand {
        IntegrandArg::Envelope => Integrand::Envelope,
        IntegrandArg::Squared => Integrand::Squared,
    };

    let mut frames = Vec::with_capacity(spec.frames.len());
    for (entry, path) in spec.frames.iter().zip(&paths) {
        let file = std::fs::File::open(path)
            .map_err(|e| Failure::Validation(format!("cannot open `{}`: {e}", path.display())))?;
        let w = Waveform::from_csv_reader(entry.id.clone(), file).map_err(Failure::computation)?;
        let label = format!("frame_{}", entry.id);
        let env = manifest.timed(&format!("{label}_envelope"), || hilbert_envelope(&w, mode));
        let seg = manifest
            .timed(&format!("{label}_segmentation"), || {
                segment_lobes(&w, &env, integrand)
            })
            .map_err(Failure::computation)?;
        if seg.no_crossings {
            eprintln!(
                "warning: frame {} never changes sign; one lobe spans the frame",
                entry.id
            );
        }
        if let Some(plot_dir) = &args.plot {
            std::fs::create_dir_all(plot_dir).map_err(|e| {
                Failure::Computation(format!("cannot create `{}`: {e}", plot_dir.display()))
            })?;
            let csv = plot_csv(&w, &env, &seg);
            let csv_name = format!("frame_{}.csv", entry.id);
            std::fs::write(plot_dir.join(&csv_name), csv).map_err(Failure::computation)?;
            let svg = plot_svg(&w, &env, &seg);
            let svg_name = format!("frame_{}.svg", entry.id);
            std::fs::write(plot_dir.join(&svg_name), svg).map_err(Failure::computation)?;
            manifest.outputs.push(csv_name);
            manifest.outputs.push(svg_name);
        }
        frames.push(FrameLobes::from(seg));
    }
    Ok(frames)
}
