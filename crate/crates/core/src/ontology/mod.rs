//! Turbine knowledge-graph construction from a declarative manifest, plus
//! structural validation of the built graph.
//!
//! The manifest describes the node families (system, subsystems, auxiliary
//! components, functional groups, SCADA features, alarms, fault events and
//! the preventive/predictive/corrective action catalogues) together with the
//! domain relationships (FOR, RELATESTO, CONSISTSOF, AFFECTS, MONITORS, ...).
//! The builder adds the structural skeleton itself: CONTAINS edges from the
//! system root, the SCADA-dataset HAS edge, TYPE edges from the functional
//! group and fault-event hubs, and ACTION edges from the maintenance-action
//! hubs to every action node.

pub mod bundled;

use crate::graph::{NodeId, PropertyGraph, PropertyMap, PropertyValue};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap, HashSet};
use thiserror::Error;

pub const SUBSYSTEM_COUNT: usize = 11;
pub const FUNCTIONAL_GROUP_COUNT: usize = 14;
pub const FEATURE_COUNT: usize = 102;
pub const ALARM_COUNT: usize = 26;
pub const FAULT_EVENT_COUNT: usize = 57;
pub const PREVENTIVE_COUNT: usize = 233;
pub const PREDICTIVE_COUNT: usize = 11;
pub const CORRECTIVE_COUNT: usize = 57;

/// Reserved manifest keys for the hub nodes created by the builder.
pub const HUB_KEYS: [&str; 8] = [
    "System",
    "SCADA",
    "FunctionalGroup",
    "FaultEvents",
    "MaintenanceAction",
    "Preventive",
    "Predictive",
    "Corrective",
];

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemEntry {
    pub name: String,
    pub location: String,
    pub rated_power: String,
    #[serde(rename = "type")]
    pub turbine_type: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubsystemEntry {
    pub label: String,
    pub name: String,
    /// Extra node properties (maintenance-activity lists, image links, ...).
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub properties: BTreeMap<String, PropertyValue>,
    #[serde(default, skip_serializing_if = "is_false")]
    pub placeholder: bool,
}

/// Auxiliary component beyond the 11 direct subsystems, linked via
/// CONSISTSOF.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentEntry {
    pub label: String,
    pub name: String,
    #[serde(default, skip_serializing_if = "is_false")]
    pub placeholder: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionalGroupEntry {
    /// Manifest-unique key; defaults to the label. Needed where a functional
    /// group shares its label with a subsystem (Gearbox, Yaw).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub key: Option<String>,
    pub label: String,
    pub name: String,
    pub fno: i64,
    #[serde(default, skip_serializing_if = "is_false")]
    pub placeholder: bool,
}

impl FunctionalGroupEntry {
    pub fn key(&self) -> &str {
        self.key.as_deref().unwrap_or(&self.label)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureEntry {
    pub name: String,
    pub description: String,
    pub unit: String,
    pub feature_no: i64,
    #[serde(default, skip_serializing_if = "is_false")]
    pub placeholder: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlarmEntry {
    pub label: String,
    pub description: String,
    pub alarm_no: String,
    #[serde(default, skip_serializing_if = "is_false")]
    pub placeholder: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FaultEventEntry {
    pub label: String,
    pub details: String,
    #[serde(default, skip_serializing_if = "is_false")]
    pub placeholder: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PreventiveEntry {
    pub label: String,
    pub act: i64,
    pub details: String,
    pub activities: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gen_periodicity: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_periodicity: Option<String>,
    #[serde(default, skip_serializing_if = "is_false")]
    pub placeholder: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictiveEntry {
    pub label: String,
    pub details: String,
    pub activities: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub image_urls: Vec<String>,
    #[serde(default, skip_serializing_if = "is_false")]
    pub placeholder: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrectiveEntry {
    pub label: String,
    pub activities: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub image_urls: Vec<String>,
    #[serde(default, skip_serializing_if = "is_false")]
    pub placeholder: bool,
}

/// A domain relationship between two manifest keys.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestRelationship {
    #[serde(rename = "type")]
    pub rel_type: String,
    pub start: String,
    pub end: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OntologyManifest {
    pub manifest_version: u32,
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub declared_node_total: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub declared_relationship_total: Option<usize>,
    pub system: SystemEntry,
    pub subsystems: Vec<SubsystemEntry>,
    #[serde(default)]
    pub components: Vec<ComponentEntry>,
    pub functional_groups: Vec<FunctionalGroupEntry>,
    pub features: Vec<FeatureEntry>,
    pub alarms: Vec<AlarmEntry>,
    pub fault_events: Vec<FaultEventEntry>,
    pub preventive_actions: Vec<PreventiveEntry>,
    pub predictive_actions: Vec<PredictiveEntry>,
    pub corrective_actions: Vec<CorrectiveEntry>,
    /// Extra properties for the hub nodes, keyed by hub key (for example the
    /// generic Cleaning / Retightening lists on the Preventive hub).
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub hub_properties: BTreeMap<String, BTreeMap<String, PropertyValue>>,
    pub relationships: Vec<ManifestRelationship>,
}

impl OntologyManifest {
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("manifest serialization");
        text.push('\n');
        text
    }

    pub fn from_json(text: &str) -> Result<Self, ManifestError> {
        serde_json::from_str(text).map_err(|e| ManifestError {
            rule: "M0",
            message: format!("manifest does not parse: {e}"),
        })
    }
}

#[derive(Debug, Error, PartialEq)]
#[error("manifest rule {rule}: {message}")]
pub struct ManifestError {
    pub rule: &'static str,
    pub message: String,
}

fn rule(rule: &'static str, message: impl Into<String>) -> ManifestError {
    ManifestError { rule, message: message.into() }
}

#[derive(Debug, Clone, Copy)]
pub struct BuildOptions {
    /// When set, the category cardinalities (11/14/102/26/57/233/11/57) and
    /// the fno permutation are enforced. Disabled for reduced test graphs.
    pub enforce_cardinalities: bool,
}

impl Default for BuildOptions {
    fn default() -> Self {
        Self { enforce_cardinalities: true }
    }
}

fn check_cardinalities(manifest: &OntologyManifest) -> Result<(), ManifestError> {
    let checks = [
        ("M1", "subsystems", manifest.subsystems.len(), SUBSYSTEM_COUNT),
        ("M2", "functional groups", manifest.functional_groups.len(), FUNCTIONAL_GROUP_COUNT),
        ("M3", "features", manifest.features.len(), FEATURE_COUNT),
        ("M4", "alarms", manifest.alarms.len(), ALARM_COUNT),
        ("M5", "fault events", manifest.fault_events.len(), FAULT_EVENT_COUNT),
        ("M6", "preventive actions", manifest.preventive_actions.len(), PREVENTIVE_COUNT),
        ("M7", "predictive actions", manifest.predictive_actions.len(), PREDICTIVE_COUNT),
        ("M8", "corrective actions", manifest.corrective_actions.len(), CORRECTIVE_COUNT),
    ];
    for (id, what, actual, expected) in checks {
        if actual != expected {
            return Err(rule(id, format!("expected {expected} {what}, manifest has {actual}")));
        }
    }
    // fno values must be a permutation of 0..13 with exactly one NoFault
    let mut fnos: Vec<i64> = manifest.functional_groups.iter().map(|g| g.fno).collect();
    fnos.sort_unstable();
    let expected: Vec<i64> = (0..FUNCTIONAL_GROUP_COUNT as i64).collect();
    if fnos != expected {
        return Err(rule("M2", "functional-group fno values must be a permutation of 0..13"));
    }
    let nofault = manifest
        .functional_groups
        .iter()
        .filter(|g| g.label == "NoFault")
        .count();
    if nofault != 1 {
        return Err(rule("M2", format!("expected exactly one NoFault group, found {nofault}")));
    }
    Ok(())
}

fn check_uniqueness(manifest: &OntologyManifest) -> Result<(), ManifestError> {
    let mut fnos = HashSet::new();
    for group in &manifest.functional_groups {
        if !fnos.insert(group.fno) {
            return Err(rule("M2", format!("duplicate functional-group fno {}", group.fno)));
        }
    }
    let mut feature_nos = HashSet::new();
    for feature in &manifest.features {
        if !feature_nos.insert(feature.feature_no) {
            return Err(rule("M3", format!("duplicate feature_no {}", feature.feature_no)));
        }
    }
    let mut alarm_nos = HashSet::new();
    for alarm in &manifest.alarms {
        let parsed: u32 = alarm
            .alarm_no
            .parse()
            .map_err(|_| rule("M4", format!("alarm_no `{}` is not numeric", alarm.alarm_no)))?;
        if !(901..=926).contains(&parsed) {
            return Err(rule("M4", format!("alarm_no {parsed} outside 901-926")));
        }
        if !alarm_nos.insert(parsed) {
            return Err(rule("M4", format!("duplicate alarm_no {parsed}")));
        }
    }
    let mut acts = HashSet::new();
    for action in &manifest.preventive_actions {
        if !acts.insert(action.act) {
            return Err(rule("M6", format!("duplicate preventive act number {}", action.act)));
        }
    }
    Ok(())
}

/// Builds the knowledge graph with default (strict) options.
pub fn build_ontology(manifest: &OntologyManifest) -> Result<PropertyGraph, ManifestError> {
    build_ontology_with(manifest, BuildOptions::default())
}

pub fn build_ontology_with(
    manifest: &OntologyManifest,
    options: BuildOptions,
) -> Result<PropertyGraph, ManifestError> {
    if options.enforce_cardinalities {
        check_cardinalities(manifest)?;
    }
    check_uniqueness(manifest)?;

    let mut graph = PropertyGraph::new();
    let mut keys: HashMap<String, NodeId> = HashMap::new();
    fn register(
        keys: &mut HashMap<String, NodeId>,
        key: &str,
        id: NodeId,
    ) -> Result<(), ManifestError> {
        if keys.insert(key.to_string(), id).is_some() {
            return Err(rule("M11", format!("duplicate manifest key `{key}`")));
        }
        Ok(())
    }
    let graph_err = |e: crate::graph::GraphError| rule("M11", e.to_string());

    let hub_props = |name: &str, key: &str| -> PropertyMap {
        let mut props = PropertyMap::new();
        props.insert("name".into(), PropertyValue::Text(name.to_string()));
        if let Some(extra) = manifest.hub_properties.get(key) {
            for (k, v) in extra {
                props.insert(k.clone(), v.clone());
            }
        }
        props
    };

    // System root.
    let system = graph
        .add_node(
            vec!["System".into()],
            crate::graph::props([
                ("name", PropertyValue::Text(manifest.system.name.clone())),
                ("location", PropertyValue::Text(manifest.system.location.clone())),
                ("rated_power", PropertyValue::Text(manifest.system.rated_power.clone())),
                ("type", PropertyValue::Text(manifest.system.turbine_type.clone())),
            ]),
        )
        .map_err(graph_err)?;
    register(&mut keys, "System", system)?;

    let mut subsystem_ids = Vec::new();
    for entry in &manifest.subsystems {
        let mut props = PropertyMap::new();
        props.insert("name".into(), PropertyValue::Text(entry.name.clone()));
        for (k, v) in &entry.properties {
            props.insert(k.clone(), v.clone());
        }
        let id = graph.add_node(vec![entry.label.clone()], props).map_err(graph_err)?;
        register(&mut keys, &entry.label, id)?;
        subsystem_ids.push(id);
    }

    for entry in &manifest.components {
        let id = graph
            .add_node(
                vec![entry.label.clone()],
                crate::graph::props([("name", PropertyValue::Text(entry.name.clone()))]),
            )
            .map_err(graph_err)?;
        register(&mut keys, &entry.label, id)?;
    }

    let scada = graph
        .add_node(vec!["SCADA".into()], hub_props("SCADA dataset", "SCADA"))
        .map_err(graph_err)?;
    register(&mut keys, "SCADA", scada)?;

    let fg_hub = graph
        .add_node(
            vec!["FunctionalGroup".into()],
            hub_props("Functional Groups", "FunctionalGroup"),
        )
        .map_err(graph_err)?;
    register(&mut keys, "FunctionalGroup", fg_hub)?;

    let mut group_ids = Vec::new();
    for entry in &manifest.functional_groups {
        let id = graph
            .add_node(
                vec![entry.label.clone()],
                crate::graph::props([
                    ("name", PropertyValue::Text(entry.name.clone())),
                    ("fno", PropertyValue::Integer(entry.fno)),
                ]),
            )
            .map_err(graph_err)?;
        register(&mut keys, entry.key(), id)?;
        group_ids.push(id);
    }

    let mut feature_ids = Vec::new();
    for entry in &manifest.features {
        let id = graph
            .add_node(
                vec!["Feature".into()],
                crate::graph::props([
                    ("name", PropertyValue::Text(entry.name.clone())),
                    ("description", PropertyValue::Text(entry.description.clone())),
                    ("unit", PropertyValue::Text(entry.unit.clone())),
                    ("feature_no", PropertyValue::Integer(entry.feature_no)),
                ]),
            )
            .map_err(graph_err)?;
        register(&mut keys, &entry.name, id)?;
        feature_ids.push(id);
    }

    for entry in &manifest.alarms {
        let id = graph
            .add_node(
                vec![entry.label.clone()],
                crate::graph::props([
                    ("description", PropertyValue::Text(entry.description.clone())),
                    ("alarm_no", PropertyValue::Text(entry.alarm_no.clone())),
                ]),
            )
            .map_err(graph_err)?;
        register(&mut keys, &entry.label, id)?;
    }

    let fe_hub = graph
        .add_node(vec!["FaultEvents".into()], hub_props("Fault Events", "FaultEvents"))
        .map_err(graph_err)?;
    register(&mut keys, "FaultEvents", fe_hub)?;

    let mut fault_ids = Vec::new();
    for entry in &manifest.fault_events {
        let id = graph
            .add_node(
                vec![entry.label.clone()],
                crate::graph::props([("details", PropertyValue::Text(entry.details.clone()))]),
            )
            .map_err(graph_err)?;
        register(&mut keys, &entry.label, id)?;
        fault_ids.push(id);
    }

    let action_hub = graph
        .add_node(
            vec!["MaintenanceAction".into()],
            hub_props("Maintenance Actions", "MaintenanceAction"),
        )
        .map_err(graph_err)?;
    register(&mut keys, "MaintenanceAction", action_hub)?;
    let preventive_hub = graph
        .add_node(vec!["Preventive".into()], hub_props("Preventive", "Preventive"))
        .map_err(graph_err)?;
    register(&mut keys, "Preventive", preventive_hub)?;
    let predictive_hub = graph
        .add_node(vec!["Predictive".into()], hub_props("Predictive", "Predictive"))
        .map_err(graph_err)?;
    register(&mut keys, "Predictive", predictive_hub)?;
    let corrective_hub = graph
        .add_node(vec!["Corrective".into()], hub_props("Corrective", "Corrective"))
        .map_err(graph_err)?;
    register(&mut keys, "Corrective", corrective_hub)?;

    let text_list = |items: &[String]| PropertyValue::TextList(items.to_vec());

    let mut preventive_ids = Vec::new();
    for entry in &manifest.preventive_actions {
        let mut props = crate::graph::props([
            ("details", PropertyValue::Text(entry.details.clone())),
            ("act", PropertyValue::Integer(entry.act)),
            ("activities", text_list(&entry.activities)),
        ]);
        if let Some(p) = &entry.gen_periodicity {
            props.insert("gen_periodicity".into(), PropertyValue::Text(p.clone()));
        }
        if let Some(p) = &entry.initial_periodicity {
            props.insert("initial_periodicity".into(), PropertyValue::Text(p.clone()));
        }
        let id = graph.add_node(vec![entry.label.clone()], props).map_err(graph_err)?;
        register(&mut keys, &entry.label, id)?;
        preventive_ids.push(id);
    }

    let mut predictive_ids = Vec::new();
    for entry in &manifest.predictive_actions {
        let mut props = crate::graph::props([
            ("details", PropertyValue::Text(entry.details.clone())),
            ("activities", text_list(&entry.activities)),
        ]);
        if !entry.image_urls.is_empty() {
            props.insert("image_url".into(), text_list(&entry.image_urls));
        }
        let id = graph.add_node(vec![entry.label.clone()], props).map_err(graph_err)?;
        register(&mut keys, &entry.label, id)?;
        predictive_ids.push(id);
    }

    let mut corrective_ids = Vec::new();
    for entry in &manifest.corrective_actions {
        let mut props = crate::graph::props([("activities", text_list(&entry.activities))]);
        if !entry.image_urls.is_empty() {
            props.insert("image_url".into(), text_list(&entry.image_urls));
        }
        let id = graph.add_node(vec![entry.label.clone()], props).map_err(graph_err)?;
        register(&mut keys, &entry.label, id)?;
        corrective_ids.push(id);
    }

    // Structural skeleton.
    let empty = PropertyMap::new();
    for id in &subsystem_ids {
        graph.add_relationship(system, "CONTAINS", *id, empty.clone()).map_err(graph_err)?;
    }
    graph.add_relationship(scada, "HAS", fg_hub, empty.clone()).map_err(graph_err)?;
    for id in &group_ids {
        graph.add_relationship(fg_hub, "TYPE", *id, empty.clone()).map_err(graph_err)?;
    }
    for id in &fault_ids {
        graph.add_relationship(fe_hub, "TYPE", *id, empty.clone()).map_err(graph_err)?;
    }
    for id in [preventive_hub, predictive_hub, corrective_hub] {
        graph.add_relationship(action_hub, "ACTION", id, empty.clone()).map_err(graph_err)?;
    }
    for id in &preventive_ids {
        graph.add_relationship(preventive_hub, "ACTION", *id, empty.clone()).map_err(graph_err)?;
    }
    for id in &predictive_ids {
        graph.add_relationship(predictive_hub, "ACTION", *id, empty.clone()).map_err(graph_err)?;
    }
    for id in &corrective_ids {
        graph.add_relationship(corrective_hub, "ACTION", *id, empty.clone()).map_err(graph_err)?;
    }

    // Declared domain relationships.
    for link in &manifest.relationships {
        let start = *keys.get(&link.start).ok_or_else(|| {
            rule("M9", format!("relationship start `{}` is not a known key", link.start))
        })?;
        let end = *keys.get(&link.end).ok_or_else(|| {
            rule("M9", format!("relationship end `{}` is not a known key", link.end))
        })?;
        graph.add_relationship(start, &link.rel_type, end, empty.clone()).map_err(|e| {
            rule("M9", format!("{} -{}-> {}: {e}", link.start, link.rel_type, link.end))
        })?;
    }

    if let Some(total) = manifest.declared_node_total {
        if graph.node_count() != total {
            return Err(rule(
                "M10",
                format!("declared node total {total}, built {}", graph.node_count()),
            ));
        }
    }
    if let Some(total) = manifest.declared_relationship_total {
        if graph.relationship_count() != total {
            return Err(rule(
                "M10",
                format!(
                    "declared relationship total {total}, built {}",
                    graph.relationship_count()
                ),
            ));
        }
    }
    Ok(graph)
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub severity: Severity,
    pub rule: String,
    pub nodes: Vec<u64>,
    pub message: String,
}

/// Outcome of [`validate_ontology`]; empty report means every rule passed.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn errors(&self) -> impl Iterator<Item = &Violation> {
        self.violations.iter().filter(|v| v.severity == Severity::Error)
    }

    pub fn warnings(&self) -> impl Iterator<Item = &Violation> {
        self.violations.iter().filter(|v| v.severity == Severity::Warning)
    }

    pub fn has_errors(&self) -> bool {
        self.errors().next().is_some()
    }

    fn push(&mut self, severity: Severity, rule: &str, nodes: Vec<NodeId>, message: String) {
        self.violations.push(Violation {
            severity,
            rule: rule.to_string(),
            nodes: nodes.into_iter().map(|n| n.0).collect(),
            message,
        });
    }
}

fn action_nodes_of(graph: &PropertyGraph, hub_label: &str) -> Vec<NodeId> {
    let mut out = Vec::new();
    for hub in graph.nodes_with_label(hub_label) {
        for (_, child) in graph
            .neighbors(hub.id, Some("ACTION"), crate::graph::Direction::Outgoing)
            .expect("hub exists")
        {
            // skip the category hubs hanging off MaintenanceAction
            let child_node = graph.node(child).expect("endpoint exists");
            if !child_node.has_label("Preventive")
                && !child_node.has_label("Predictive")
                && !child_node.has_label("Corrective")
            {
                out.push(child);
            }
        }
    }
    out
}

fn type_children_of(graph: &PropertyGraph, hub_label: &str) -> Vec<NodeId> {
    let mut out = Vec::new();
    for hub in graph.nodes_with_label(hub_label) {
        for (_, child) in graph
            .neighbors(hub.id, Some("TYPE"), crate::graph::Direction::Outgoing)
            .expect("hub exists")
        {
            out.push(child);
        }
    }
    out
}

/// Structural checks over a built graph.
///
/// R1 every corrective action node has a FOR edge to a fault event (error);
/// R2 every preventive action node has a FOR edge (error); R3 every alarm
/// node RELATESTO a fault event (error); R4 a SCADA feature that is linked
/// to maintainable equipment but has no RELATESTO fault-event mapping
/// (warning); R5 isolated nodes (warning — the catalogue explicitly permits
/// them); R6 functional groups carry unique fno values (error).
pub fn validate_ontology(graph: &PropertyGraph) -> ValidationReport {
    use crate::graph::Direction::*;
    let mut report = ValidationReport::default();

    let fault_events: HashSet<NodeId> =
        type_children_of(graph, "FaultEvents").into_iter().collect();

    for node_id in action_nodes_of(graph, "Corrective") {
        let has_for = graph
            .neighbors(node_id, Some("FOR"), Outgoing)
            .expect("node exists")
            .iter()
            .any(|(_, target)| fault_events.contains(target));
        if !has_for {
            let label = graph.node(node_id).unwrap().labels.join(":");
            report.push(
                Severity::Error,
                "R1",
                vec![node_id],
                format!("corrective action {label} has no FOR edge to a fault event"),
            );
        }
    }

    for node_id in action_nodes_of(graph, "Preventive") {
        let has_for = !graph
            .neighbors(node_id, Some("FOR"), Outgoing)
            .expect("node exists")
            .is_empty();
        if !has_for {
            let label = graph.node(node_id).unwrap().labels.join(":");
            report.push(
                Severity::Error,
                "R2",
                vec![node_id],
                format!("preventive action {label} has no FOR edge"),
            );
        }
    }

    // Alarm nodes are recognised by their alarm_no property.
    for node in graph.nodes() {
        if node.property("alarm_no").is_none() {
            continue;
        }
        let ok = graph
            .neighbors(node.id, Some("RELATESTO"), Both)
            .expect("node exists")
            .iter()
            .any(|(_, other)| fault_events.contains(other));
        if !ok {
            report.push(
                Severity::Error,
                "R3",
                vec![node.id],
                format!(
                    "alarm {} has no RELATESTO edge to a fault event",
                    node.labels.join(":")
                ),
            );
        }
    }

    for node in graph.nodes_with_label("Feature") {
        let incident = graph.neighbors(node.id, None, Both).expect("node exists");
        let has_relatesto = incident
            .iter()
            .any(|(rid, _)| graph.relationship(*rid).unwrap().rel_type == "RELATESTO");
        let has_domain_link = incident.iter().any(|(rid, _)| {
            let t = graph.relationship(*rid).unwrap().rel_type.as_str();
            t != "CONSISTSOF" && t != "RELATESTO"
        });
        if has_domain_link && !has_relatesto {
            let name = node.text_property("name").unwrap_or("<unnamed>");
            report.push(
                Severity::Warning,
                "R4",
                vec![node.id],
                format!("feature {name} is linked to equipment but maps to no fault event"),
            );
        }
    }

    for node in graph.nodes() {
        if graph.neighbors(node.id, None, Both).expect("node exists").is_empty() {
            report.push(
                Severity::Warning,
                "R5",
                vec![node.id],
                format!("node {} is isolated", node.labels.join(":")),
            );
        }
    }

    let mut seen_fno: HashMap<i64, NodeId> = HashMap::new();
    for group_id in type_children_of(graph, "FunctionalGroup") {
        let node = graph.node(group_id).unwrap();
        if let Some(fno) = node.integer_property("fno") {
            if let Some(first) = seen_fno.insert(fno, group_id) {
                report.push(
                    Severity::Error,
                    "R6",
                    vec![first, group_id],
                    format!("functional groups share fno {fno}"),
                );
            }
        }
    }

    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_manifest_builds_with_reference_totals() {
        let manifest = bundled::bundled_manifest();
        assert_eq!(manifest.declared_node_total, Some(537));
        assert_eq!(manifest.declared_relationship_total, Some(1059));
        let graph = build_ontology(&manifest).expect("bundled manifest builds");
        assert_eq!(graph.node_count(), 537);
        assert_eq!(graph.relationship_count(), 1059);
        assert_eq!(graph.count_by_label("Feature"), FEATURE_COUNT);
    }

    #[test]
    fn bundled_build_is_deterministic() {
        let manifest = bundled::bundled_manifest();
        let a = build_ontology(&manifest).unwrap();
        let b = build_ontology(&manifest).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn per_type_counts_sum_to_relationship_total() {
        let graph = build_ontology(&bundled::bundled_manifest()).unwrap();
        let mut types: Vec<String> = graph.relationships().map(|r| r.rel_type.clone()).collect();
        types.sort();
        types.dedup();
        // the catalogue uses nine distinct relationship types
        assert_eq!(types.len(), 9, "types: {types:?}");
        let total: usize = types.iter().map(|t| graph.count_by_type(t)).sum();
        assert_eq!(total, graph.relationship_count());
    }

    #[test]
    fn minimal_manifest_builds_without_cardinality_checks() {
        let manifest = OntologyManifest {
            manifest_version: 1,
            name: "minimal".into(),
            declared_node_total: None,
            declared_relationship_total: None,
            system: SystemEntry {
                name: "Study Turbine".into(),
                location: "Levenmouth,Fife".into(),
                rated_power: "7MW".into(),
                turbine_type: "Offshore".into(),
            },
            subsystems: vec![],
            components: vec![],
            functional_groups: vec![],
            features: vec![],
            alarms: vec![],
            fault_events: vec![],
            preventive_actions: vec![],
            predictive_actions: vec![],
            corrective_actions: vec![],
            hub_properties: BTreeMap::new(),
            relationships: vec![],
        };
        assert!(build_ontology(&manifest).is_err());
        let graph =
            build_ontology_with(&manifest, BuildOptions { enforce_cardinalities: false }).unwrap();
        assert_eq!(graph.count_by_label("System"), 1);
        assert_eq!(
            graph.node(crate::graph::NodeId(0)).unwrap().text_property("rated_power"),
            Some("7MW")
        );
    }

    #[test]
    fn duplicate_fno_is_rejected_with_rule_id() {
        let mut manifest = bundled::bundled_manifest();
        manifest.functional_groups[1].fno = manifest.functional_groups[0].fno;
        let err = build_ontology(&manifest).unwrap_err();
        assert_eq!(err.rule, "M2");
    }

    #[test]
    fn unknown_relationship_endpoint_is_rejected() {
        let mut manifest = bundled::bundled_manifest();
        manifest.relationships.push(ManifestRelationship {
            rel_type: "FOR".into(),
            start: "PrevAct1".into(),
            end: "NoSuchKey".into(),
        });
        let err = build_ontology(&manifest).unwrap_err();
        assert_eq!(err.rule, "M9");
    }

    #[test]
    fn manifest_round_trips_through_json() {
        let manifest = bundled::bundled_manifest();
        let text = manifest.to_json();
        let reparsed = OntologyManifest::from_json(&text).unwrap();
        assert_eq!(reparsed, manifest);
    }

    #[test]
    fn empty_graph_validates_clean() {
        let report = validate_ontology(&PropertyGraph::new());
        assert!(report.is_empty());
    }

    #[test]
    fn bundled_graph_has_no_validation_errors() {
        let graph = build_ontology(&bundled::bundled_manifest()).unwrap();
        let report = validate_ontology(&graph);
        assert!(!report.has_errors(), "errors: {:?}", report.errors().collect::<Vec<_>>());
        // golden warning set: exactly the action-less Power_kW_Stdev feature
        let warnings: Vec<&Violation> = report.warnings().collect();
        assert_eq!(warnings.len(), 1, "warnings: {warnings:?}");
        assert_eq!(warnings[0].rule, "R4");
        assert!(warnings[0].message.contains("Power_kW_Stdev"));
    }

    #[test]
    fn remaining_validation_rules_fire_on_a_hand_built_graph() {
        use crate::graph::{props, PropertyValue};
        let mut graph = PropertyGraph::new();
        // alarm with no RELATESTO (R3), isolated node (R5), duplicate fno (R6)
        graph
            .add_node(
                vec!["Alarm1".into()],
                props([
                    ("description", PropertyValue::from("test alarm")),
                    ("alarm_no", PropertyValue::from("901")),
                ]),
            )
            .unwrap();
        graph.add_node(vec!["Loner".into()], PropertyMap::new()).unwrap();
        let hub = graph
            .add_node(vec!["FunctionalGroup".into()], PropertyMap::new())
            .unwrap();
        let g1 = graph
            .add_node(vec!["Pitch".into()], props([("fno", PropertyValue::Integer(1))]))
            .unwrap();
        let g2 = graph
            .add_node(vec!["Yaw".into()], props([("fno", PropertyValue::Integer(1))]))
            .unwrap();
        graph.add_relationship(hub, "TYPE", g1, PropertyMap::new()).unwrap();
        graph.add_relationship(hub, "TYPE", g2, PropertyMap::new()).unwrap();

        let report = validate_ontology(&graph);
        assert!(report.errors().any(|v| v.rule == "R3"));
        assert!(report.errors().any(|v| v.rule == "R6"));
        assert!(report
            .warnings()
            .any(|v| v.rule == "R5" && v.message.contains("Loner")));
    }

    #[test]
    fn corrective_without_for_is_flagged() {
        let mut manifest = bundled::bundled_manifest();
        manifest.relationships.retain(|r| !(r.rel_type == "FOR" && r.start == "CorrAct1"));
        manifest.declared_relationship_total = Some(1058);
        let graph = build_ontology(&manifest).unwrap();
        let report = validate_ontology(&graph);
        let r1: Vec<&Violation> = report.errors().filter(|v| v.rule == "R1").collect();
        assert_eq!(r1.len(), 1);
        assert!(r1[0].message.contains("CorrAct1"));
    }
}
