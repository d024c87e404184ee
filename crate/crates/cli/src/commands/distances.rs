//! `distances`: pairwise descriptive and Hausdorff distance matrices,
//! nearness verdicts, and optional chain-convergence reports.

use serde::Serialize;

use desprox_core::description::{
    default_tau_eq, descriptive_distance_with, descriptively_near, indefinite_descriptive_distance,
    ConvergenceReport, FeatureChain, Norm,
};
use desprox_core::hausdorff::{DescribedCollection, DistanceMatrix};

use crate::args::{DistancesArgs, NormArg, ReportFormat};
use crate::commands::{emit_report, load_sets};
use crate::manifest::RunManifest;
use crate::validate::{validate_chain, validate_described_sets, ValidationReport};
use crate::{Failure, RunResult};

#[derive(Serialize)]
struct PairVerdict {
    a: String,
    b: String,
    distance: f64,
    near: bool,
}

#[derive(Serialize)]
struct PairConvergence {
    a: String,
    b: String,
    #[serde(flatten)]
    report: ConvergenceReport,
}

#[derive(Serialize)]
struct DistancesReport {
    norm: NormArg,
    tau_eq: f64,
    tau_conv: f64,
    ids: Vec<String>,
    descriptive: Vec<Vec<f64>>,
    descriptive_hausdorff: Vec<Vec<f64>>,
    near: Vec<PairVerdict>,
    convergence: Vec<PairConvergence>,
}

pub fn run(args: &DistancesArgs) -> RunResult<()> {
    let mut findings = ValidationReport::default();
    validate_described_sets(&args.input, &mut findings);
    let sets = if findings.is_ok() {
        load_sets(&args.input, args.tau_eq)?
    } else {
        return Err(Failure::Validation(findings.render()));
    };
    let probe_names: Vec<String> = sets[0]
        .suite()
        .probes()
        .iter()
        .map(|p| p.name.clone())
        .collect();
    if let Some(chain_path) = &args.chain {
        validate_chain(chain_path, &probe_names, &mut findings);
    }
    if !findings.is_ok() {
        return Err(Failure::Validation(findings.render()));
    }

    let mut manifest = RunManifest::new("distances", args);
    manifest.record_input(&args.input)?;
    if let Some(chain_path) = &args.chain {
        manifest.record_input(chain_path)?;
    }

    let tau_eq = args.tau_eq.unwrap_or_else(|| {
        let all_elements: Vec<_> = sets.iter().flat_map(|s| s.elements().to_vec()).collect();
        default_tau_eq(&all_elements)
    });
    let norm = match args.norm {
        NormArg::Euclidean => Norm::Euclidean,
        NormArg::Max => Norm::Max,
        NormArg::L1 => Norm::L1,
    };

    let collection = DescribedCollection::new(sets).map_err(Failure::computation)?;
    let descriptive = manifest
        .timed("descriptive_distance_matrix", || {
            DistanceMatrix::build(&collection, |a, b| {
                Ok(descriptive_distance_with(a, b, norm)?)
            })
        })
        .map_err(Failure::computation)?;
    let hausdorff = manifest
        .timed("descriptive_hausdorff_matrix", || {
            DistanceMatrix::descriptive_hausdorff(&collection)
        })
        .map_err(Failure::computation)?;

    let members = collection.members();
    let mut near = Vec::new();
    for i in 0..members.len() {
        for j in (i + 1)..members.len() {
            near.push(PairVerdict {
                a: members[i].id().to_string(),
                b: members[j].id().to_string(),
                distance: descriptive.values[i][j],
                near: descriptively_near(&members[i], &members[j], tau_eq)
                    .map_err(Failure::computation)?,
            });
        }
    }

    let mut convergence = Vec::new();
    if let Some(chain_path) = &args.chain {
        let text = std::fs::read_to_string(chain_path)
            .map_err(|e| Failure::Validation(format!("cannot read chain: {e}")))?;
        let names: Vec<Vec<String>> =
            serde_json::from_str(&text).map_err(|e| Failure::Validation(e.to_string()))?;
        let chain =
            FeatureChain::from_names(&names, members[0].suite()).map_err(Failure::computation)?;
        manifest.timed("chain_convergence", || -> RunResult<()> {
            for i in 0..members.len() {
                for j in (i + 1)..members.len() {
                    let report = indefinite_descriptive_distance(
                        &members[i],
                        &members[j],
                        &chain,
                        args.tau_conv,
                    )
                    .map_err(Failure::computation)?;
                    convergence.push(PairConvergence {
                        a: members[i].id().to_string(),
                        b: members[j].id().to_string(),
                        report,
                    });
                }
            }
            Ok(())
        })?;
    }

    let report = DistancesReport {
        norm: args.norm,
        tau_eq,
        tau_conv: args.tau_conv,
        ids: collection.ids(),
        descriptive: descriptive.values.clone(),
        descriptive_hausdorff: hausdorff.values.clone(),
        near,
        convergence,
    };

    if let Some(dir) = &args.output {
        manifest.write_output(dir, "descriptive.csv", &descriptive.to_csv())?;
        manifest.write_output(dir, "descriptive_hausdorff.csv", &hausdorff.to_csv())?;
    }
    match args.report {
        ReportFormat::Json => {
            let json = serde_json::to_string_pretty(&report).map_err(Failure::computation)?;
            emit_report(&mut manifest, args.output.as_deref(), "report.json", &json)?;
        }
        ReportFormat::Text => {
            let text = render_text(&report, &descriptive, &hausdorff);
            emit_report(&mut manifest, args.output.as_deref(), "report.txt", &text)?;
        }
    }
    manifest.finish(args.output.as_deref())
}

fn render_text(
    report: &DistancesReport,
    descriptive: &DistanceMatrix,
    hausdorff: &DistanceMatrix,
) -> String {
    let mut out = String::new();
    out.push_str("Descriptive distances\n");
    out.push_str(&descriptive.to_csv());
    out.push_str("\nDescriptive Hausdorff distances\n");
    out.push_str(&hausdorff.to_csv());
    out.push_str(&format!("\nNearness (tau_eq = {:e})\n", report.tau_eq));
    for v in &report.near {
        out.push_str(&format!(
            "{} ~ {}: {} (distance {:.4})\n",
            v.a,
            v.b,
            if v.near { "near" } else { "not near" },
            v.distance
        ));
    }
    if !report.convergence.is_empty() {
        out.push_str(&format!(
            "\nChain convergence (tau_conv = {:e})\n",
            report.tau_conv
        ));
        for c in &report.convergence {
            let seq = c
                .report
                .distances
                .iter()
                .map(|d| format!("{d:.4}"))
                .collect::<Vec<_>>()
                .join(", ");
            out.push_str(&format!(
                "{} ~ {}: [{}] -> {}\n",
                c.a,
                c.b,
                seq,
                if c.report.converged {
                    "limit 0"
                } else {
                    "no zero limit"
                }
            ));
        }
    }
    out
}
