//! Input validation that collects every finding instead of stopping at
//! the first: schema shape, finiteness, uniform sampling, and chain
//! nesting.

use std::collections::BTreeSet;
use std::path::Path;

use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct Finding {
    pub path: String,
    pub location: String,
    pub message: String,
}

#[derive(Debug, Default, Serialize)]
pub struct ValidationReport {
    pub findings: Vec<Finding>,
}

impl ValidationReport {
    pub fn push(&mut self, path: &Path, location: impl Into<String>, message: impl Into<String>) {
        self.findings.push(Finding {
            path: path.display().to_string(),
            location: location.into(),
            message: message.into(),
        });
    }

    pub fn is_ok(&self) -> bool {
        self.findings.is_empty()
    }

    pub fn render(&self) -> String {
        self.findings
            .iter()
            .map(|f| format!("{}: {}: {}", f.path, f.location, f.message))
            .collect::<Vec<_>>()
            .join("\n")
    }
}

fn read_text(path: &Path, report: &mut ValidationReport) -> Option<String> {
    match std::fs::read_to_string(path) {
        Ok(text) => Some(text),
        Err(e) => {
            report.push(path, "file", format!("cannot read: {e}"));
            None
        }
    }
}

/// Described-sets JSON: parseable, nonempty elements, unique probe
/// names, every probe valued and finite on every element, suites equal
/// across sets.
pub fn validate_described_sets(path: &Path, report: &mut ValidationReport) {
    let Some(text) = read_text(path, report) else {
        return;
    };
    let value: serde_json::Value = match serde_json::from_str(&text) {
        Ok(v) => v,
        Err(e) => {
            report.push(path, "json", e.to_string());
            return;
        }
    };
    let docs: Vec<&serde_json::Value> = match &value {
        serde_json::Value::Array(items) => items.iter().collect(),
        other => vec![other],
    };
    let mut first_probes: Option<Vec<String>> = None;
    for (di, doc) in docs.iter().enumerate() {
        let loc = |field: &str| format!("set[{di}].{field}");
        let id = doc.get("id").and_then(|v| v.as_str()).unwrap_or("");
        if id.is_empty() {
            report.push(path, loc("id"), "missing or empty id");
        }
        let probes: Vec<String> = doc
            .get("probes")
            .and_then(|v| v.as_array())
            .map(|ps| {
                ps.iter()
                    .filter_map(|p| p.get("name").and_then(|n| n.as_str()))
                    .map(str::to_string)
                    .collect()
            })
            .unwrap_or_default();
        if probes.is_empty() {
            report.push(path, loc("probes"), "no probes declared");
        }
        let unique: BTreeSet<&String> = probes.iter().collect();
        if unique.len() != probes.len() {
            report.push(path, loc("probes"), "duplicate probe names");
        }
        match &first_probes {
            None => first_probes = Some(probes.clone()),
            Some(first) if *first != probes => {
                report.push(
                    path,
                    loc("probes"),
                    "probe suite differs from the first set",
                );
            }
            _ => {}
        }
        let elements = doc.get("elements").and_then(|v| v.as_array());
        match elements {
            None => report.push(path, loc("elements"), "missing elements array"),
            Some(els) if els.is_empty() => {
                report.push(path, loc("elements"), "element set is empty")
            }
            Some(els) => {
                for (ei, el) in els.iter().enumerate() {
                    let handle = el.get("handle").and_then(|v| v.as_str()).unwrap_or("?");
                    let features = el.get("features").and_then(|v| v.as_object());
                    let Some(features) = features else {
                        report.push(
                            path,
                            format!("set[{di}].elements[{ei}]"),
                            "missing features table",
                        );
                        continue;
                    };
                    for probe in &probes {
                        match features.get(probe).and_then(|v| v.as_f64()) {
                            Some(v) if v.is_finite() => {}
                            Some(_) => report.push(
                                path,
                                format!("set[{di}].elements[{ei}].{probe}"),
                                "non-finite feature value",
                            ),
                            None => report.push(
                                path,
                                format!("set[{di}].elements[{ei}]"),
                                format!("probe `{probe}` undefined on element `{handle}`"),
                            ),
                        }
                    }
                }
            }
        }
    }
}

/// Feature-chain JSON: an array of probe-name arrays, strictly nested.
pub fn validate_chain(path: &Path, probe_names: &[String], report: &mut ValidationReport) {
    let Some(text) = read_text(path, report) else {
        return;
    };
    let chain: Vec<Vec<String>> = match serde_json::from_str(&text) {
        Ok(c) => c,
        Err(e) => {
            report.push(path, "json", e.to_string());
            return;
        }
    };
    if chain.is_empty() {
        report.push(path, "chain", "chain is empty");
        return;
    }
    for (k, names) in chain.iter().enumerate() {
        for n in names {
            if !probe_names.contains(n) {
                report.push(path, format!("chain[{k}]"), format!("unknown probe `{n}`"));
            }
        }
        if k == 0 && names.is_empty() {
            report.push(path, "chain[0]", "first subset is empty");
        }
        if k > 0 {
            let prev: BTreeSet<&String> = chain[k - 1].iter().collect();
            let cur: BTreeSet<&String> = names.iter().collect();
            if !prev.is_subset(&cur) || prev.len() >= cur.len() {
                report.push(
                    path,
                    format!("chain[{k}]"),
                    format!("subset {} does not strictly contain subset {k}", k + 1),
                );
            }
        }
    }
}

/// System JSON: delegate to the core parser, one finding per failure.
pub fn validate_system(path: &Path, report: &mut ValidationReport) {
    let Some(text) = read_text(path, report) else {
        return;
    };
    if let Err(e) = desprox_core::dynamics::DescriptiveSystem::from_json(&text) {
        report.push(path, "system", e.to_string());
    }
}

/// Waveform CSV: header `t,m`, parseable finite values per row, at
/// least 8 samples, strictly increasing uniform spacing.
pub fn validate_waveform_csv(path: &Path, report: &mut ValidationReport) {
    let Some(text) = read_text(path, report) else {
        return;
    };
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(text.as_bytes());
    match rdr.headers() {
        Ok(headers) if headers.len() >= 2 && &headers[0] == "t" && &headers[1] == "m" => {}
        Ok(headers) => {
            report.push(
                path,
                "header",
                format!(
                    "expected `t,m`, got `{}`",
                    headers.iter().collect::<Vec<_>>().join(",")
                ),
            );
        }
        Err(e) => {
            report.push(path, "header", e.to_string());
            return;
        }
    }
    let mut times: Vec<f64> = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let row = i + 1;
        let record = match record {
            Ok(r) => r,
            Err(e) => {
                report.push(path, format!("row {row}"), e.to_string());
                continue;
            }
        };
        for (col, name) in [(0usize, "t"), (1usize, "m")] {
            match record.get(col).map(str::trim).map(str::parse::<f64>) {
                Some(Ok(v)) if v.is_finite() => {
                    if col == 0 {
                        times.push(v);
                    }
                }
                Some(Ok(_)) => report.push(
                    path,
                    format!("row {row}, column `{name}`"),
                    "non-finite value",
                ),
                _ => report.push(path, format!("row {row}, column `{name}`"), "not a number"),
            }
        }
    }
    if times.len() < 8 {
        report.push(
            path,
            "samples",
            format!("need at least 8 samples, got {}", times.len()),
        );
        return;
    }
    let dt = times[1] - times[0];
    if dt <= 0.0 {
        report.push(path, "row 2", "times must be strictly increasing");
        return;
    }
    for i in 2..times.len() {
        let step = times[i] - times[i - 1];
        if step <= 0.0 || (step - dt).abs() > 1e-9 * dt {
            report.push(path, format!("row {}", i + 1), "non-uniform sample spacing");
        }
    }
}

/// Lobe-table CSV: header and finite areas.
pub fn validate_lobe_table(path: &Path, report: &mut ValidationReport) {
    let Some(text) = read_text(path, report) else {
        return;
    };
    if let Err(e) = desprox_core::energy::lobe_table_from_csv(text.as_bytes()) {
        report.push(path, "lobe-table", e.to_string());
    }
}
