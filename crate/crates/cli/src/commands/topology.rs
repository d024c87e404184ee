//! `topology`: open balls around every member of a collection and the
//! open-set-algebra verification over the generated family.

use serde::Serialize;

use desprox_core::hausdorff::{
    ball, verify_topology_axioms, AxiomReport, BallCover, DescribedCollection, DistanceMatrix,
};

use crate::args::{ReportFormat, TopologyArgs};
use crate::commands::{emit_report, load_sets};
use crate::manifest::RunManifest;
use crate::validate::{validate_described_sets, ValidationReport};
use crate::{Failure, RunResult};

#[derive(Serialize)]
struct TopologyReport {
    epsilon: f64,
    ids: Vec<String>,
    balls: Vec<BallCover>,
    axioms: AxiomReport,
}

pub fn run(args: &TopologyArgs) -> RunResult<()> {
    if args.epsilon <= 0.0 {
        return Err(Failure::Validation("epsilon must be positive".into()));
    }
    let mut findings = ValidationReport::default();
    validate_described_sets(&args.input, &mut findings);
    if !findings.is_ok() {
        return Err(Failure::Validation(findings.render()));
    }
    let sets = load_sets(&args.input, args.tau_eq)?;

    let mut manifest = RunManifest::new("topology", args);
    manifest.record_input(&args.input)?;

    let collection = DescribedCollection::new(sets).map_err(Failure::computation)?;
    let balls: Vec<BallCover> = manifest
        .timed("balls", || {
            collection
                .ids()
                .iter()
                .map(|id| ball(&collection, id, args.epsilon))
                .collect::<Result<_, _>>()
        })
        .map_err(Failure::computation)?;
    let axioms = manifest.timed("verify_topology_axioms", || {
        verify_topology_axioms(&collection, &balls)
    });
    let matrix = manifest
        .timed("descriptive_hausdorff_matrix", || {
            DistanceMatrix::descriptive_hausdorff(&collection)
        })
        .map_err(Failure::computation)?;

    let report = TopologyReport {
        epsilon: args.epsilon,
        ids: collection.ids(),
        balls,
        axioms,
    };

    if let Some(dir) = &args.output {
        manifest.write_output(dir, "descriptive_hausdorff.csv", &matrix.to_csv())?;
        let axioms_json =
            serde_json::to_string_pretty(&report.axioms).map_err(Failure::computation)?;
        manifest.write_output(dir, "axioms.json", &axioms_json)?;
    }
    match args.report {
        ReportFormat::Json => {
            let json = serde_json::to_string_pretty(&report).map_err(Failure::computation)?;
            emit_report(&mut manifest, args.output.as_deref(), "report.json", &json)?;
        }
        ReportFormat::Text => {
            let mut text = format!("Balls of radius {:.4}\n", report.epsilon);
            for b in &report.balls {
                text.push_str(&format!("B({}) = {{{}}}\n", b.center, b.members.join(", ")));
            }
            text.push_str(&format!(
                "\nGenerated algebra: {} sets\n",
                report.axioms.family_size
            ));
            text.push_str(&format!(
                "contains empty: {}\ncontains whole: {}\nunion closed: {}\nintersection closed: {}\nall axioms hold: {}\n",
                report.axioms.contains_empty,
                report.axioms.contains_whole,
                report.axioms.union_closed,
                report.axioms.intersection_closed,
                report.axioms.all_hold
            ));
            emit_report(&mut manifest, args.output.as_deref(), "report.txt", &text)?;
        }
    }
    manifest.finish(args.output.as_deref())
}
