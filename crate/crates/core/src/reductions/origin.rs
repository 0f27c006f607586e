use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::id::Id;

/// Part a produced vertex or edge plays in its gadget.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Role {
    SuperSource,
    SuperSink,
    SourceEdge,
    SinkEdge,
    PlainVertex,
    Subdivision,
    LossEdge,
    RecoveryEdge,
    Port,
    InternalEdge,
    ExternalEdge,
    Center,
    CenterIn,
    CenterOut,
    VariableSource,
    Literal,
    Merge,
    VariableSink,
    SelectEdge,
    MergeEdge,
    VariableSinkEdge,
    Clause,
    ClauseSink,
    ClauseEdge,
    ClauseSinkEdge,
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Role {
    pub fn name(&self) -> &'static str {
        match self {
            Role::SuperSource => "super-source",
            Role::SuperSink => "super-sink",
            Role::SourceEdge => "source-edge",
            Role::SinkEdge => "sink-edge",
            Role::PlainVertex => "plain-vertex",
            Role::Subdivision => "subdivision",
            Role::LossEdge => "loss-edge",
            Role::RecoveryEdge => "recovery-edge",
            Role::Port => "port",
            Role::InternalEdge => "internal-edge",
            Role::ExternalEdge => "external-edge",
            Role::Center => "center",
            Role::CenterIn => "center-in",
            Role::CenterOut => "center-out",
            Role::VariableSource => "variable-source",
            Role::Literal => "literal",
            Role::Merge => "merge",
            Role::VariableSink => "variable-sink",
            Role::SelectEdge => "select-edge",
            Role::MergeEdge => "merge-edge",
            Role::VariableSinkEdge => "variable-sink-edge",
            Role::Clause => "clause",
            Role::ClauseSink => "clause-sink",
            Role::ClauseEdge => "clause-edge",
            Role::ClauseSinkEdge => "clause-sink-edge",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Origin {
    /// Source-instance vertex (or variable, or clause) whose gadget owns this element.
    pub gadget: Option<Id>,
    /// Source-instance element this one was made from.
    pub source: Id,
    pub role: Role,
}

/// Provenance of every vertex and edge of a reduced network.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct OriginMap {
    pub vertices: BTreeMap<Id, Origin>,
    pub edges: BTreeMap<Id, Origin>,
    /// Free-form remarks about the construction, e.g. recalibrated constants.
    pub notes: Vec<String>,
}

impl OriginMap {
    pub fn vertex(&mut self, id: &Id, gadget: Option<&Id>, source: &Id, role: Role) {
        self.vertices.insert(
            id.clone(),
            Origin {
                gadget: gadget.cloned(),
                source: source.clone(),
                role,
            },
        );
    }

    pub fn edge(&mut self, id: &Id, gadget: Option<&Id>, source: &Id, role: Role) {
        self.edges.insert(
            id.clone(),
            Origin {
                gadget: gadget.cloned(),
                source: source.clone(),
                role,
            },
        );
    }

    /// Vertices grouped by owning gadget, for clustering.
    pub fn clusters(&self) -> BTreeMap<Id, Vec<Id>> {
        let mut out: BTreeMap<Id, Vec<Id>> = BTreeMap::new();
        for (v, o) in &self.vertices {
            if let Some(g) = &o.gadget {
                out.entry(g.clone()).or_default().push(v.clone());
            }
        }
        out
    }

    /// True when every vertex and edge of `network` has an entry.
    pub fn is_total_for(&self, network: &crate::network::AdditiveNetwork) -> bool {
        network
            .vertices()
            .iter()
            .all(|v| self.vertices.contains_key(v))
            && network
                .edges()
                .iter()
                .all(|e| self.edges.contains_key(&e.id))
    }
}
