//! `dynamics`: orbit and periodicity reports plus the bounded witness
//! searches when the system declares open regions.

use std::collections::BTreeSet;

use serde::Serialize;

use desprox_core::dynamics::{
    check_descriptive_sensitivity, check_descriptive_transitivity, check_periodic_density,
    classify_point, orbit, periodic_set, CompactFamily, DensityReport, DescriptiveSystem, Orbit,
    PeriodMode, PeriodicityVerdict, SensitivityMetric, SensitivityReport, StateId, SystemSpec,
    TransitivityReport,
};

use crate::args::{DynamicsArgs, ReportFormat};
use crate::commands::emit_report;
use crate::manifest::RunManifest;
use crate::validate::{validate_system, ValidationReport};
use crate::{Failure, RunResult};

#[derive(Serialize)]
struct PeriodicSummary {
    m: usize,
    raw_count: usize,
    descriptive_count: usize,
    raw_states: Vec<f64>,
    descriptive_states: Vec<f64>,
}

#[derive(Serialize)]
struct DynamicsReport {
    states: usize,
    dimension: usize,
    m_max: usize,
    n_max: usize,
    periodic: Vec<PeriodicSummary>,
    orbit: Option<Orbit>,
    classification: Option<PeriodicityVerdict>,
    transitivity: Option<TransitivityReport>,
    sensitivity: Option<SensitivityReport>,
    density: Option<DensityReport>,
}

pub fn run(args: &DynamicsArgs) -> RunResult<()> {
    let mut findings = ValidationReport::default();
    validate_system(&args.input, &mut findings);
    if !findings.is_ok() {
        return Err(Failure::Validation(findings.render()));
    }
    let text = std::fs::read_to_string(&args.input)
        .map_err(|e| Failure::Validation(format!("cannot read `{}`: {e}", args.input.display())))?;
    let (sys, spec): (DescriptiveSystem, SystemSpec) =
        DescriptiveSystem::from_json(&text).map_err(Failure::computation)?;

    let mut manifest = RunManifest::new("dynamics", args);
    manifest.record_input(&args.input)?;

    let values_of =
        |set: &BTreeSet<StateId>| -> Vec<f64> { set.iter().map(|&s| sys.value(s)).collect() };

    let periodic = manifest.timed("periodic_sets", || {
        (1..=args.m_max)
            .map(|m| {
                let raw = periodic_set(&sys, m, PeriodMode::Raw);
                let descriptive = periodic_set(&sys, m, PeriodMode::Descriptive);
                PeriodicSummary {
                    m,
                    raw_count: raw.len(),
                    descriptive_count: descriptive.len(),
                    raw_states: values_of(&raw),
                    descriptive_states: values_of(&descriptive),
                }
            })
            .collect::<Vec<_>>()
    });

    // the CLI snaps orbit seeds to the nearest state
    let (orbit_report, classification) = match args.orbit_from {
        Some(x) => {
            let seed = sys.value(sys.nearest(x));
            let o = manifest.timed("orbit", || orbit(&sys, seed, args.orbit_len));
            let c = manifest.timed("classify_point", || classify_point(&sys, seed, args.m_max));
            (
                Some(o.map_err(Failure::computation)?),
                Some(c.map_err(Failure::computation)?),
            )
        }
        None => (None, None),
    };

    let (transitivity, sensitivity, density) = match &spec.regions {
        Some(regions) => {
            let extra: Vec<BTreeSet<StateId>> = spec
                .family
                .as_deref()
                .unwrap_or(&[])
                .iter()
                .map(|values| values.iter().map(|&v| sys.nearest(v)).collect())
                .collect();
            let family =
                CompactFamily::singletons_plus(&sys, extra).map_err(Failure::computation)?;
            let u = sys.region(regions.u);
            let v = sys.region(regions.v);
            let radius = args
                .radius
                .or_else(|| sys.cell_width().map(|w| 2.0 * w))
                .unwrap_or(1.0);
            let t = manifest
                .timed("check_descriptive_transitivity", || {
                    check_descriptive_transitivity(&sys, &family, &u, &v, args.n_max)
                })
                .map_err(Failure::computation)?;
            let s = manifest
                .timed("check_descriptive_sensitivity", || {
                    check_descriptive_sensitivity(
                        &sys,
                        &family,
                        &u,
                        args.delta,
                        args.n_max,
                        SensitivityMetric::Hausdorff,
                    )
                })
                .map_err(Failure::computation)?;
            let d = manifest
                .timed("check_periodic_density", || {
                    check_periodic_density(&sys, &family, radius, args.m_max)
                })
                .map_err(Failure::computation)?;
            (Some(t), Some(s), Some(d))
        }
        None => (None, None, None),
    };

    let report = DynamicsReport {
        states: sys.len(),
        dimension: sys.dimension(),
        m_max: args.m_max,
        n_max: args.n_max,
        periodic,
        orbit: orbit_report,
        classification,
        transitivity,
        sensitivity,
        density,
    };

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

fn preview(values: &[f64]) -> String {
    const CAP: usize = 16;
    let shown: Vec<String> = values.iter().take(CAP).map(|v| format!("{v:.4}")).collect();
    if values.len() > CAP {
        format!("{}, … ({} total)", shown.join(", "), values.len())
    } else {
        shown.join(", ")
    }
}

fn render_text(report: &DynamicsReport) -> String {
    let mut out = format!(
        "System: {} states, description dimension {}\n\n",
        report.states, report.dimension
    );
    out.push_str("Periodic sets\n");
    for p in &report.periodic {
        out.push_str(&format!(
            "m = {}: raw {} state(s), descriptive {} state(s)\n",
            p.m, p.raw_count, p.descriptive_count
        ));
        out.push_str(&format!("  raw: [{}]\n", preview(&p.raw_states)));
        out.push_str(&format!(
            "  descriptive: [{}]\n",
            preview(&p.descriptive_states)
        ));
    }
    if let Some(o) = &report.orbit {
        out.push_str(&format!(
            "\nOrbit from {:.6}: [{}]\n",
            o.seed,
            preview(&o.values)
        ));
    }
    if let Some(c) = &report.classification {
        out.push_str(&format!(
            "Classification of {:.6}: {:?} (m = {:?}, raw match: {})\n",
            c.subject, c.kind, c.m, c.raw_match
        ));
    }
    if let Some(t) = &report.transitivity {
        out.push_str("\nTransitivity: ");
        match &t.witness {
            Some(w) => out.push_str(&format!(
                "witness at n = {}, member {} ([{}])\n",
                w.n,
                w.member_index,
                preview(&w.member_values)
            )),
            None => out.push_str(&format!("no witness up to n = {}\n", t.n_max)),
        }
    }
    if let Some(s) = &report.sensitivity {
        out.push_str("Sensitivity: ");
        match &s.witness {
            Some(w) => out.push_str(&format!(
                "witness at n = {}, members {} and {}, distance {:.4} > {:.4}\n",
                w.n, w.first_index, w.second_index, w.distance, s.delta
            )),
            None => out.push_str(&format!(
                "no separation beyond {:.4} up to n = {}\n",
                s.delta, s.n_max
            )),
        }
    }
    if let Some(d) = &report.density {
        let covered = d.entries.iter().filter(|e| e.covered).count();
        out.push_str(&format!(
            "Periodic density: {covered}/{} members within {:.6} of a periodic member ({})\n",
            d.entries.len(),
            d.radius,
            if d.all_covered { "dense" } else { "not dense" }
        ));
    }
    out
}
