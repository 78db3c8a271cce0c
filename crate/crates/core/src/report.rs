//! Maintenance-report assembly: maps an anomaly prediction and its ranked
//! feature attributions to knowledge-graph queries and collects the
//! preventive, predictive and corrective actions with provenance.
//!
//! The corrective lookups are thin wrappers over stored query text — the
//! row set of [`corrective_for_feature`] is exactly what executing
//! [`CORRECTIVE_FOR_FEATURE_QUERY`] with `$name` bound returns.

use crate::graph::{NodeId, NodeRecord, PropertyGraph, PropertyValue};
use crate::query::{self, ParamMap, QueryAst, ResultTable};
use crate::xai::{top_k_features, Attribution};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

pub const CORRECTIVE_FOR_FEATURE_QUERY: &str =
    "MATCH(n:Corrective)-[:ACTION]->(p)-[:FOR]->(q)-[:RELATESTO]-(r:Feature{name:$name}) RETURN p,q,r";
pub const CORRECTIVE_FOR_GROUP_QUERY: &str =
    "MATCH(n:Corrective)-[:ACTION]->(p)-[:FOR]->(q)-[:AFFECTS]-(r{fno:$fno}) RETURN p,q,r";
pub const PREVENTIVE_FOR_GROUP_QUERY: &str =
    "MATCH(n:Preventive)-[:ACTION]->(p)-[:FOR]->(q)-[:RELATESTO]-(r{fno:$fno}) RETURN p,q,r";
pub const PREDICTIVE_FOR_GROUP_QUERY: &str =
    "MATCH(n:Predictive)-[:ACTION]->(p)-[:FOR]->(q)-[:RELATESTO]-(r{fno:$fno}) RETURN p,q,r";

pub const FNO_RANGE: std::ops::RangeInclusive<i64> = 0..=13;

#[derive(Debug, Error, PartialEq)]
pub enum ReportError {
    #[error("functional-group number {0} outside 0-13")]
    InvalidGroup(i64),
}

/// A prediction handed to the report generator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionInput {
    pub predicted_fno: i64,
    pub class_probability: f64,
    pub attribution: Attribution,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
}

impl PredictionInput {
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("prediction serialization");
        text.push('\n');
        text
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ActionKind {
    Preventive,
    Predictive,
    Corrective,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matched_feature: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matched_fault_event: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matched_group: Option<String>,
    /// Further features that mapped to the same action node.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub also_matched: Vec<String>,
    /// Importance rank (1-based) of the feature that surfaced this entry.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub feature_rank: Option<usize>,
    /// Number of zero-result ranked features skipped before this one.
    pub fallback_depth: usize,
    /// Graph node of the matched fault event, when any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fault_event_node: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportEntry {
    pub kind: ActionKind,
    pub source_node_label: String,
    pub source_node_id: u64,
    pub details: String,
    pub activities: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub periodicity: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub image_urls: Vec<String>,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionSummary {
    pub predicted_fno: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group_name: Option<String>,
    pub class_probability: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PieSlice {
    pub feature: String,
    pub percent: f64,
}

/// Percentage contributions of the top features, ready for pie plotting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PieData {
    pub slices: Vec<PieSlice>,
    pub degenerate: bool,
}

impl PieData {
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("pie serialization");
        text.push('\n');
        text
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaintenanceReport {
    pub prediction: PredictionSummary,
    pub pie: PieData,
    pub preventive: Vec<ReportEntry>,
    pub predictive: Vec<ReportEntry>,
    pub corrective: Vec<ReportEntry>,
    pub notes: Vec<String>,
}

impl MaintenanceReport {
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serialization");
        text.push('\n');
        text
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

fn parse_stored(text: &str) -> QueryAst {
    query::parse(text).expect("stored query text parses")
}

/// These stored queries use no WHERE clause and all parameters are supplied,
/// so execution cannot fail.
fn run_stored(graph: &PropertyGraph, text: &str, params: ParamMap) -> ResultTable {
    query::execute(graph, &parse_stored(text), &params).expect("stored query executes")
}

fn node_cell<'t>(table: &'t ResultTable, row: usize, column: &str) -> &'t NodeRecord {
    table.get(row, column).and_then(|v| v.as_node()).expect("stored query returns nodes")
}

fn action_entry(kind: ActionKind, node: &NodeRecord) -> ReportEntry {
    ReportEntry {
        kind,
        source_node_label: node.labels.join(":"),
        source_node_id: node.id.0,
        details: node.text_property("details").unwrap_or_default().to_string(),
        activities: node.list_property("activities").unwrap_or_default().to_vec(),
        periodicity: node.text_property("gen_periodicity").map(str::to_string),
        image_urls: node.list_property("image_url").unwrap_or_default().to_vec(),
        provenance: Provenance::default(),
    }
}

/// Corrective actions for a SCADA feature by name. An unknown feature simply
/// yields no rows.
pub fn corrective_for_feature(graph: &PropertyGraph, feature_name: &str) -> Vec<ReportEntry> {
    let mut params = ParamMap::new();
    params.insert("name".into(), PropertyValue::Text(feature_name.to_string()));
    let table = run_stored(graph, CORRECTIVE_FOR_FEATURE_QUERY, params);
    (0..table.len())
        .map(|row| {
            let action = node_cell(&table, row, "p");
            let fault = node_cell(&table, row, "q");
            let mut entry = action_entry(ActionKind::Corrective, action);
            entry.details = fault.text_property("details").unwrap_or_default().to_string();
            entry.provenance.matched_feature = Some(feature_name.to_string());
            entry.provenance.matched_fault_event =
                fault.text_property("details").map(str::to_string);
            entry.provenance.fault_event_node = Some(fault.id.0);
            entry
        })
        .collect()
}

fn check_fno(fno: i64) -> Result<(), ReportError> {
    if FNO_RANGE.contains(&fno) {
        Ok(())
    } else {
        Err(ReportError::InvalidGroup(fno))
    }
}

fn group_query(
    graph: &PropertyGraph,
    text: &str,
    kind: ActionKind,
    fno: i64,
) -> Result<Vec<ReportEntry>, ReportError> {
    check_fno(fno)?;
    let mut params = ParamMap::new();
    params.insert("fno".into(), PropertyValue::Integer(fno));
    let table = run_stored(graph, text, params);
    let mut entries: Vec<ReportEntry> = (0..table.len())
        .map(|row| {
            let action = node_cell(&table, row, "p");
            let middle = node_cell(&table, row, "q");
            let group = node_cell(&table, row, "r");
            let mut entry = action_entry(kind, action);
            entry.provenance.matched_group = group.text_property("name").map(str::to_string);
            if kind == ActionKind::Corrective {
                entry.details = middle.text_property("details").unwrap_or_default().to_string();
                entry.provenance.matched_fault_event =
                    middle.text_property("details").map(str::to_string);
                entry.provenance.fault_event_node = Some(middle.id.0);
            }
            entry
        })
        .collect();
    // one entry per action node, ascending id
    entries.sort_by_key(|e| e.source_node_id);
    entries.dedup_by_key(|e| e.source_node_id);
    Ok(entries)
}

/// Corrective actions whose fault events affect the given functional group.
pub fn corrective_for_group(
    graph: &PropertyGraph,
    fno: i64,
) -> Result<Vec<ReportEntry>, ReportError> {
    group_query(graph, CORRECTIVE_FOR_GROUP_QUERY, ActionKind::Corrective, fno)
}

/// Preventive actions for the subsystems a functional group relates to.
pub fn preventive_for_group(
    graph: &PropertyGraph,
    fno: i64,
) -> Result<Vec<ReportEntry>, ReportError> {
    group_query(graph, PREVENTIVE_FOR_GROUP_QUERY, ActionKind::Preventive, fno)
}

/// Predictive actions for the subsystems a functional group relates to.
pub fn predictive_for_group(
    graph: &PropertyGraph,
    fno: i64,
) -> Result<Vec<ReportEntry>, ReportError> {
    group_query(graph, PREDICTIVE_FOR_GROUP_QUERY, ActionKind::Predictive, fno)
}

fn functional_group_node(graph: &PropertyGraph, fno: i64) -> Option<&NodeRecord> {
    for hub in graph.nodes_with_label("FunctionalGroup") {
        for (_, child) in graph
            .neighbors(hub.id, Some("TYPE"), crate::graph::Direction::Outgoing)
            .expect("hub exists")
        {
            let node = graph.node(child).expect("endpoint exists");
            if node.integer_property("fno") == Some(fno) {
                return Some(node);
            }
        }
    }
    None
}

fn groups_affected_by(graph: &PropertyGraph, fault_event: NodeId) -> Vec<i64> {
    graph
        .neighbors(fault_event, Some("AFFECTS"), crate::graph::Direction::Both)
        .map(|hits| {
            hits.iter()
                .filter_map(|(_, other)| graph.node(*other)?.integer_property("fno"))
                .collect()
        })
        .unwrap_or_default()
}

/// Assembles the full report: ranked-feature corrective lookups with the
/// next-feature fallback, the group-level corrective/preventive/predictive
/// sections, per-action de-duplication keeping the best feature rank, and
/// the pie percentages of the top-k features.
pub fn generate_report(
    graph: &PropertyGraph,
    input: &PredictionInput,
    k: usize,
) -> Result<MaintenanceReport, ReportError> {
    check_fno(input.predicted_fno)?;
    let group_node = functional_group_node(graph, input.predicted_fno);
    let group_name = group_node.and_then(|n| n.text_property("name")).map(str::to_string);
    let is_normal_operation = group_node.is_some_and(|n| n.has_label("NoFault"));

    let mut notes: Vec<String> = Vec::new();
    let full_ranking = top_k_features(&input.attribution, input.attribution.phi.len());
    let pie_top = top_k_features(&input.attribution, k);
    let pie = PieData {
        slices: pie_top
            .entries
            .iter()
            .map(|e| PieSlice { feature: e.name.clone(), percent: e.percent })
            .collect(),
        degenerate: pie_top.degenerate,
    };
    if pie_top.degenerate {
        notes.push("attribution is all-zero; percentage contributions are undefined".into());
    }

    let mut corrective: Vec<ReportEntry> = Vec::new();
    if is_normal_operation {
        notes.push(format!(
            "predicted class is {} (normal operation); no corrective actions apply",
            group_name.as_deref().unwrap_or("NoFault")
        ));
    } else {
        // feature-driven corrective actions with next-feature fallback
        let mut covered = 0usize;
        let mut misses = 0usize;
        for (idx, feature) in full_ranking.entries.iter().enumerate() {
            if covered == k {
                break;
            }
            let rank = idx + 1;
            let mut entries = corrective_for_feature(graph, &feature.name);
            if entries.is_empty() {
                notes.push(format!(
                    "feature {} (rank {rank}) has no associated corrective action; \
                     falling back to the next-ranked feature",
                    feature.name
                ));
                misses += 1;
                continue;
            }
            covered += 1;
            for entry in &mut entries {
                entry.provenance.feature_rank = Some(rank);
                entry.provenance.fallback_depth = misses;
            }
            corrective.extend(entries);
        }

        for entry in corrective_for_group(graph, input.predicted_fno)? {
            corrective.push(entry);
        }

        // de-duplicate by action node, keeping the best (lowest) feature rank
        // and folding the other matches into the provenance
        let mut merged: BTreeMap<u64, ReportEntry> = BTreeMap::new();
        for entry in corrective {
            match merged.get_mut(&entry.source_node_id) {
                None => {
                    merged.insert(entry.source_node_id, entry);
                }
                Some(existing) => {
                    let better = match (entry.provenance.feature_rank, existing.provenance.feature_rank)
                    {
                        (Some(a), Some(b)) => a < b,
                        (Some(_), None) => true,
                        _ => false,
                    };
                    if better {
                        let mut replacement = entry;
                        let old = existing.clone();
                        if let Some(f) = old.provenance.matched_feature {
                            if replacement.provenance.matched_feature.as_deref() != Some(&f)
                                && !replacement.provenance.also_matched.contains(&f)
                            {
                                replacement.provenance.also_matched.push(f);
                            }
                        }
                        if replacement.provenance.matched_group.is_none() {
                            replacement.provenance.matched_group = old.provenance.matched_group;
                        }
                        *existing = replacement;
                    } else {
                        if let Some(f) = entry.provenance.matched_feature {
                            if existing.provenance.matched_feature.as_deref() != Some(&f)
                                && !existing.provenance.also_matched.contains(&f)
                            {
                                existing.provenance.also_matched.push(f);
                            }
                        }
                        if existing.provenance.matched_group.is_none() {
                            existing.provenance.matched_group = entry.provenance.matched_group;
                        }
                    }
                }
            }
        }
        corrective = merged.into_values().collect();
        corrective.sort_by_key(|e| {
            (e.provenance.feature_rank.unwrap_or(usize::MAX), e.source_node_id)
        });

        // flag entries whose fault event belongs to another functional group
        for entry in &corrective {
            if let Some(fe) = entry.provenance.fault_event_node {
                let groups = groups_affected_by(graph, NodeId(fe));
                if !groups.is_empty() && !groups.contains(&input.predicted_fno) {
                    notes.push(format!(
                        "{}: fault event '{}' belongs to a different functional group than \
                         the predicted one (non-obvious feature association)",
                        entry.source_node_label,
                        entry.provenance.matched_fault_event.as_deref().unwrap_or("?")
                    ));
                }
            }
        }
    }

    let preventive = preventive_for_group(graph, input.predicted_fno)?;
    if preventive.is_empty() {
        notes.push("no preventive actions found for the predicted functional group".into());
    }
    let predictive = predictive_for_group(graph, input.predicted_fno)?;
    if predictive.is_empty() {
        notes.push("no predictive actions found for the predicted functional group".into());
    }

    Ok(MaintenanceReport {
        prediction: PredictionSummary {
            predicted_fno: input.predicted_fno,
            group_name,
            class_probability: input.class_probability,
            timestamp: input.timestamp.clone(),
        },
        pie,
        preventive,
        predictive,
        corrective,
        notes,
    })
}

/// Plain-text rendering: one block per section, corrective rows laid out as
/// feature | fault event | actions.
pub fn render_text(report: &MaintenanceReport) -> String {
    use std::fmt::Write;
    let mut out = String::new();
    let _ = writeln!(out, "MAINTENANCE REPORT");
    let _ = writeln!(out, "==================");
    let _ = writeln!(
        out,
        "Predicted functional group: {} (fno {}), probability {:.4}",
        report.prediction.group_name.as_deref().unwrap_or("unknown"),
        report.prediction.predicted_fno,
        report.prediction.class_probability
    );
    if let Some(ts) = &report.prediction.timestamp {
        let _ = writeln!(out, "Sample timestamp: {ts}");
    }

    let _ = writeln!(out, "\nTop contributing features");
    for (i, slice) in report.pie.slices.iter().enumerate() {
        let _ = writeln!(out, "  {}. {} ({:.1}%)", i + 1, slice.feature, slice.percent);
    }

    let section = |out: &mut String, title: &str, entries: &[ReportEntry]| {
        let _ = writeln!(out, "\n{title}");
        let _ = writeln!(out, "{}", "-".repeat(title.len()));
        if entries.is_empty() {
            let _ = writeln!(out, "  (none)");
        }
        for entry in entries {
            match entry.kind {
                ActionKind::Corrective => {
                    let feature = entry.provenance.matched_feature.as_deref().unwrap_or("-");
                    let _ = writeln!(
                        out,
                        "* {} | {} | {}",
                        feature,
                        entry.provenance.matched_fault_event.as_deref().unwrap_or("-"),
                        entry.source_node_label
                    );
                }
                _ => {
                    let periodicity = entry.periodicity.as_deref().unwrap_or("unscheduled");
                    let _ = writeln!(
                        out,
                        "* {} / {} ({})",
                        entry.details, periodicity, entry.source_node_label
                    );
                }
            }
            for activity in &entry.activities {
                let _ = writeln!(out, "    - {activity}");
            }
            for url in &entry.image_urls {
                let _ = writeln!(out, "    image: {url}");
            }
            if entry.provenance.fallback_depth > 0 {
                let _ = writeln!(
                    out,
                    "    (reached after {} fallback step(s))",
                    entry.provenance.fallback_depth
                );
            }
        }
    };
    section(&mut out, "Corrective actions", &report.corrective);
    section(&mut out, "Preventive actions", &report.preventive);
    section(&mut out, "Predictive actions", &report.predictive);

    let _ = writeln!(out, "\nNotes");
    let _ = writeln!(out, "-----");
    if report.notes.is_empty() {
        let _ = writeln!(out, "  (none)");
    }
    for note in &report.notes {
        let _ = writeln!(out, "  - {note}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ontology::{build_ontology, bundled::bundled_manifest};

    fn graph() -> PropertyGraph {
        build_ontology(&bundled_manifest()).unwrap()
    }

    fn attribution(phi: Vec<f64>) -> Attribution {
        let total: f64 = phi.iter().sum();
        Attribution {
            feature_names: crate::ontology::bundled::DESK_FEATURES
                .iter()
                .map(|s| s.to_string())
                .collect(),
            sample_values: vec![0.0; phi.len()],
            target_class: 0,
            phi,
            base_value: 0.0,
            prediction_value: total,
        }
    }

    #[test]
    fn gearbox_feature_finds_listing_activities() {
        let graph = graph();
        let entries = corrective_for_feature(&graph, "GearBoxTemperature_DegC_Mean");
        assert!(!entries.is_empty());
        let fault_details: Vec<&str> =
            entries.iter().map(|e| e.details.as_str()).collect();
        assert!(fault_details.contains(&"High temperature on the gearbox oil"));
        assert!(fault_details.contains(&"Temperature switch of the gearbox pump"));
        let act25 = entries
            .iter()
            .find(|e| e.source_node_label == "CorrAct25")
            .expect("CorrAct25 retrieved");
        assert!(act25.activities.iter().any(|a| a == "Checking the adjustment of louvers"));
        assert_eq!(
            act25.provenance.matched_feature.as_deref(),
            Some("GearBoxTemperature_DegC_Mean")
        );
    }

    #[test]
    fn pitch_feature_finds_blade_position_error() {
        let graph = graph();
        let entries = corrective_for_feature(&graph, "Pitch_Deg_Max");
        let labels: Vec<&str> = entries.iter().map(|e| e.source_node_label.as_str()).collect();
        assert!(labels.contains(&"CorrAct45"));
        assert!(entries
            .iter()
            .any(|e| e.provenance.matched_fault_event.as_deref() == Some("Blade Position Error")));
    }

    #[test]
    fn unknown_feature_yields_empty_list() {
        let graph = graph();
        assert!(corrective_for_feature(&graph, "NoSuchFeature").is_empty());
    }

    #[test]
    fn corrective_for_feature_equals_direct_query() {
        let graph = graph();
        let entries = corrective_for_feature(&graph, "GearBoxTemperature_DegC_Mean");
        let mut params = ParamMap::new();
        params.insert(
            "name".into(),
            PropertyValue::from("GearBoxTemperature_DegC_Mean"),
        );
        let ast = query::parse(CORRECTIVE_FOR_FEATURE_QUERY).unwrap();
        let table = query::execute(&graph, &ast, &params).unwrap();
        assert_eq!(entries.len(), table.len());
        for (entry, row) in entries.iter().zip(0..table.len()) {
            let p = table.get(row, "p").unwrap().as_node().unwrap();
            assert_eq!(entry.source_node_id, p.id.0);
        }
    }

    #[test]
    fn group_lookups_respect_fno_range() {
        let graph = graph();
        assert_eq!(corrective_for_group(&graph, 99), Err(ReportError::InvalidGroup(99)));
        assert_eq!(preventive_for_group(&graph, -1), Err(ReportError::InvalidGroup(-1)));

        // gearbox group: corrective entries tied to gearbox fault events
        let gearbox = corrective_for_group(&graph, 9).unwrap();
        assert!(!gearbox.is_empty());
        assert!(gearbox
            .iter()
            .any(|e| e.details == "High temperature on the gearbox oil"));

        // NoFault group: nothing is affected by normal operation
        assert!(corrective_for_group(&graph, 13).unwrap().is_empty());
    }

    #[test]
    fn preventive_group_rows_match_catalogue_periodicities() {
        let graph = graph();
        let gearbox = preventive_for_group(&graph, 9).unwrap();
        let oil = gearbox
            .iter()
            .find(|e| e.details == "Gearbox oil replacement")
            .expect("gearbox oil replacement row");
        assert_eq!(oil.periodicity.as_deref(), Some("48 months"));

        let pitch = preventive_for_group(&graph, 1).unwrap();
        let retightening = pitch
            .iter()
            .find(|e| e.details == "Pitch re-tightening")
            .expect("pitch re-tightening row");
        assert_eq!(retightening.periodicity.as_deref(), Some("12 months"));
    }

    #[test]
    fn report_for_gearbox_attribution() {
        let graph = graph();
        // strong phi on the two gearbox features, noise elsewhere
        let mut phi = vec![0.01; 12];
        phi[0] = 1.4;
        phi[1] = 1.0;
        let input = PredictionInput {
            predicted_fno: 9,
            class_probability: 0.97,
            attribution: attribution(phi),
            timestamp: Some("sample 17".into()),
        };
        let report = generate_report(&graph, &input, 10).unwrap();
        assert!(report
            .corrective
            .iter()
            .any(|e| e.details == "High temperature on the gearbox oil"));
        assert!(report
            .preventive
            .iter()
            .any(|e| e.details == "Gearbox oil replacement"
                && e.periodicity.as_deref() == Some("48 months")));
        assert!(!report.predictive.is_empty());
        // Power_kW_Stdev is ranked within the top 10 (all noise ties broken
        // by index) and has no fault event, so a fallback note must appear
        assert!(
            report.notes.iter().any(|n| n.contains("Power_kW_Stdev")),
            "notes: {:?}",
            report.notes
        );
        let pie_total: f64 = report.pie.slices.iter().map(|s| s.percent).sum();
        assert!((pie_total - 100.0).abs() < 1e-9);

        // determinism of the rendered text
        let again = generate_report(&graph, &input, 10).unwrap();
        assert_eq!(render_text(&again), render_text(&report));
        let text = render_text(&report);
        assert!(text.contains("Gearbox oil replacement / 48 months"));
    }

    #[test]
    fn nofault_report_is_empty_with_note() {
        let graph = graph();
        let input = PredictionInput {
            predicted_fno: 13,
            class_probability: 0.99,
            attribution: attribution(vec![0.0; 12]),
            timestamp: None,
        };
        let report = generate_report(&graph, &input, 10).unwrap();
        assert!(report.corrective.is_empty());
        assert!(report.notes.iter().any(|n| n.contains("normal operation")));
    }

    #[test]
    fn fallback_depth_marks_substituted_entries() {
        let graph = graph();
        // top feature has no corrective mapping, the runner-up does
        let mut phi = vec![0.0; 12];
        phi[8] = 2.0; // Power_kW_Stdev: no fault event
        phi[0] = 1.0; // GearBoxTemperature_DegC_Mean
        let input = PredictionInput {
            predicted_fno: 9,
            class_probability: 0.9,
            attribution: attribution(phi),
            timestamp: None,
        };
        let report = generate_report(&graph, &input, 1).unwrap();
        let substituted = report
            .corrective
            .iter()
            .find(|e| e.provenance.matched_feature.as_deref() == Some("GearBoxTemperature_DegC_Mean"))
            .expect("fallback entry");
        assert!(substituted.provenance.fallback_depth >= 1);
        assert!(report
            .notes
            .iter()
            .any(|n| n.contains("Power_kW_Stdev") && n.contains("falling back")));
    }

    #[test]
    fn duplicate_actions_keep_best_rank_and_all_features() {
        let graph = graph();
        // GearBoxTemperature Mean and Max both hit FaultEvent25/CorrAct25
        let mut phi = vec![0.0; 12];
        phi[0] = 2.0;
        phi[1] = 1.0;
        let input = PredictionInput {
            predicted_fno: 9,
            class_probability: 0.9,
            attribution: attribution(phi),
            timestamp: None,
        };
        let report = generate_report(&graph, &input, 10).unwrap();
        let act25: Vec<&ReportEntry> = report
            .corrective
            .iter()
            .filter(|e| e.source_node_label == "CorrAct25")
            .collect();
        assert_eq!(act25.len(), 1, "CorrAct25 deduplicated");
        let entry = act25[0];
        assert_eq!(entry.provenance.feature_rank, Some(1));
        assert_eq!(
            entry.provenance.matched_feature.as_deref(),
            Some("GearBoxTemperature_DegC_Mean")
        );
        assert!(entry
            .provenance
            .also_matched
            .contains(&"GearBoxTemperature_DegC_Max".to_string()));
        // group-level match merged into the same entry
        assert!(entry.provenance.matched_group.is_some());
    }

    #[test]
    fn prediction_input_round_trips() {
        let input = PredictionInput {
            predicted_fno: 9,
            class_probability: 0.5,
            attribution: attribution(vec![0.25; 12]),
            timestamp: Some("row 3".into()),
        };
        let reparsed = PredictionInput::from_json(&input.to_json()).unwrap();
        assert_eq!(reparsed, input);
    }
}
