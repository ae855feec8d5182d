//! Routing-scheme constructions, the model-aware size accountant and the
//! `G_k` permutation reconstruction.

mod builders;
mod full_info;
mod function;
pub mod lehmer;
mod reconstruct;
mod serialize;
mod size;
mod table;

pub use builders::{
    build_canonical_sp, build_sp_fixed_port, build_sp_neighbor_known, build_sp_neighbor_known_in,
    build_sp_relabel, build_stretch15, build_stretch2_hub, build_stretch_logn, relabel_label,
};
pub use full_info::build_full_info;
pub use function::{
    Action, Address, Component, Header, LocalRoutingFunction, NodeContext, Step, HUB,
    PROGRAM_TAG_BITS, TAG_HUB_NEIGHBOR, TAG_PROBE, TAG_RELABEL,
};
pub use reconstruct::{build_gk_functions, reconstruct_permutation, ReconstructError};
pub use serialize::{read_scheme, write_scheme};
pub use size::{measure_size, SizeReport};
pub use table::ClaimViolation;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bitcodec::{BitString, CodecError};
use crate::graphs::{GraphError, LabeledGraph, PortAssignment};

/// What a node knows about its neighborhood for free.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum InfoModel {
    /// Neighbors unknown, port assignment fixed.
    IA,
    /// Neighbors unknown, port assignment may be rewritten.
    IB,
    /// Neighbor labels known, and over which edge to reach them.
    II,
}

/// Whether and how nodes may be relabeled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Relabeling {
    Alpha,
    /// Permutation of `1..=n`.
    Beta,
    /// Arbitrary labels whose length is charged.
    Gamma,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ModelSpec {
    pub info: InfoModel,
    pub relabel: Relabeling,
}

impl ModelSpec {
    pub const fn new(info: InfoModel, relabel: Relabeling) -> Self {
        ModelSpec { info, relabel }
    }

    /// Rejects free port assignment combined with known neighbors.
    pub fn check_port_rewrite(&self, rewrites_ports: bool) -> Result<(), BuildError> {
        if rewrites_ports && self.info == InfoModel::II {
            return Err(BuildError::ForbiddenModel(*self));
        }
        Ok(())
    }
}

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let info = match self.info {
            InfoModel::IA => "IA",
            InfoModel::IB => "IB",
            InfoModel::II => "II",
        };
        let relabel = match self.relabel {
            Relabeling::Alpha => "alpha",
            Relabeling::Beta => "beta",
            Relabeling::Gamma => "gamma",
        };
        write!(f, "{info}-{relabel}")
    }
}

impl FromStr for ModelSpec {
    type Err = String;

    /// Accepts `II-alpha`, `IA/gamma`, `IB_beta` and the Greek letters.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (info, relabel) = s.split_once(['-', '/', '_', '^']).ok_or_else(|| {
            format!("model {s:?} is not of the form <IA|IB|II>-<alpha|beta|gamma>")
        })?;
        let info = match info.trim() {
            "IA" => InfoModel::IA,
            "IB" => InfoModel::IB,
            "II" => InfoModel::II,
            other => return Err(format!("unknown information model {other:?}")),
        };
        let relabel = match relabel.trim().to_ascii_lowercase().as_str() {
            "alpha" | "α" => Relabeling::Alpha,
            "beta" | "β" => Relabeling::Beta,
            "gamma" | "γ" => Relabeling::Gamma,
            other => return Err(format!("unknown relabeling model {other:?}")),
        };
        Ok(ModelSpec { info, relabel })
    }
}

impl Serialize for ModelSpecString {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

/// `ModelSpec` in its `II-alpha` string form, for config files.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModelSpecString(pub ModelSpec);

impl<'de> Deserialize<'de> for ModelSpecString {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse()
            .map(ModelSpecString)
            .map_err(serde::de::Error::custom)
    }
}

/// The routing program family a scheme belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemeKind {
    /// Explicit next-hop table for every non-neighbor; works on any connected graph.
    Canonical,
    NeighborKnown,
    Relabel,
    Stretch15,
    Stretch2Hub,
    StretchLogN,
    FixedPort,
    FullInfo,
}

impl SchemeKind {
    pub const ALL: [SchemeKind; 8] = [
        SchemeKind::Canonical,
        SchemeKind::NeighborKnown,
        SchemeKind::Relabel,
        SchemeKind::Stretch15,
        SchemeKind::Stretch2Hub,
        SchemeKind::StretchLogN,
        SchemeKind::FixedPort,
        SchemeKind::FullInfo,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SchemeKind::Canonical => "canonical_sp",
            SchemeKind::NeighborKnown => "sp_neighbor_known",
            SchemeKind::Relabel => "sp_relabel",
            SchemeKind::Stretch15 => "stretch15",
            SchemeKind::Stretch2Hub => "stretch2_hub",
            SchemeKind::StretchLogN => "stretch_logn",
            SchemeKind::FixedPort => "sp_fixed_port",
            SchemeKind::FullInfo => "full_info",
        }
    }

    /// Models the builder supports; the first is the default.
    pub fn legal_models(self) -> &'static [ModelSpec] {
        const II_ALPHA: ModelSpec = ModelSpec::new(InfoModel::II, Relabeling::Alpha);
        const IB_ALPHA: ModelSpec = ModelSpec::new(InfoModel::IB, Relabeling::Alpha);
        const IA_ALPHA: ModelSpec = ModelSpec::new(InfoModel::IA, Relabeling::Alpha);
        const II_GAMMA: ModelSpec = ModelSpec::new(InfoModel::II, Relabeling::Gamma);
        match self {
            SchemeKind::NeighborKnown => &[II_ALPHA, IB_ALPHA],
            SchemeKind::Relabel => &[II_GAMMA],
            SchemeKind::FixedPort | SchemeKind::FullInfo => &[IA_ALPHA],
            SchemeKind::Canonical
            | SchemeKind::Stretch15
            | SchemeKind::Stretch2Hub
            | SchemeKind::StretchLogN => &[II_ALPHA],
        }
    }

    pub fn default_model(self) -> ModelSpec {
        self.legal_models()[0]
    }

    /// True for schemes that promise stretch exactly one.
    pub fn is_shortest_path(self) -> bool {
        matches!(
            self,
            SchemeKind::Canonical
                | SchemeKind::NeighborKnown
                | SchemeKind::Relabel
                | SchemeKind::FixedPort
                | SchemeKind::FullInfo
        )
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchemeKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SchemeKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown scheme {s:?}"))
    }
}

/// Structural property a builder requires of its input graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Lemma {
    Degree,
    DiameterTwo,
    Coverage,
}

impl fmt::Display for Lemma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Lemma::Degree => "degree",
            Lemma::DiameterTwo => "diameter-two",
            Lemma::Coverage => "coverage",
        })
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BuildError {
    #[error("graph fails the {0} lemma")]
    PreconditionViolated(Lemma),
    #[error("node {node}: destination {destination} is not adjacent to any coverage neighbor")]
    Uncovered { node: usize, destination: usize },
    #[error("node {node} has no neighbor among the routing centers")]
    CenterUncovered { node: usize },
    #[error("graph is disconnected (node {node} cannot reach {destination})")]
    Disconnected { node: usize, destination: usize },
    #[error("model {0} combines known neighbors with free port assignment")]
    ForbiddenModel(ModelSpec),
    #[error("scheme {kind} does not support model {model}")]
    IllegalModel { kind: SchemeKind, model: ModelSpec },
    #[error("scheme has {found} functions for {n} nodes")]
    WrongFunctionCount { n: usize, found: usize },
    #[error("model {0} forwards by port and needs a port assignment")]
    PortsRequired(ModelSpec),
    #[error("labels must be present exactly under model gamma")]
    LabelMismatch,
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("encoding failed to decode: {0}")]
    Decode(#[from] DecodeError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecodeError {
    #[error(transparent)]
    Codec(#[from] CodecError),
    #[error("node {node}: entry {value} out of range (limit {limit})")]
    EntryOutOfRange {
        node: usize,
        value: usize,
        limit: usize,
    },
    #[error("node {node}: {count} unread bits after the encoding")]
    TrailingBits { node: usize, count: usize },
    #[error("node {node}: unexpected program tag {tag:#04x}")]
    BadTag { node: usize, tag: u64 },
    #[error("node {node}: label {label} is not a neighbor")]
    NotANeighbor { node: usize, label: usize },
    #[error(
        "node {node}: neighbor bitmap lists {bitmap} neighbors but the node has {ports} ports"
    )]
    DegreeMismatch {
        node: usize,
        bitmap: usize,
        ports: usize,
    },
    #[error("node {node}: the model does not provide the knowledge this function needs")]
    MissingKnowledge { node: usize },
    #[error("scheme {kind} cannot be decoded under this model")]
    UnsupportedModel { kind: SchemeKind },
    #[error("malformed scheme file: {0}")]
    BadFile(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("node {node}: invalid destination label")]
    InvalidLabel { node: usize },
    #[error("node {node}: no route to {destination}")]
    NoRoute { node: usize, destination: usize },
    #[error("node {node}: all coverage probes failed for {destination}")]
    ProbeExhausted { node: usize, destination: usize },
    #[error("node {node}: not a full-information function")]
    NotFullInformation { node: usize },
}

/// Facts recorded while building, not charged to any node.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Diagnostics {
    pub claim_violations: Vec<ClaimViolation>,
    /// Nodes whose coverage set was shorter than `⌈(c+3) log n⌉`; their
    /// labels were padded by repeating the last member.
    pub padded_labels: Vec<usize>,
    /// One entry per node that stores shortest-path tables.
    pub tables: Vec<TableStats>,
}

/// Cutoff stage `l` and deferred-destination count of one node's tables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TableStats {
    pub node: usize,
    pub cutoff: usize,
    pub deferred: usize,
}

/// Per-node local routing functions plus the model, optional labels and the
/// port wiring the functions refer to.
#[derive(Clone, Debug)]
pub struct RoutingScheme {
    kind: SchemeKind,
    model: ModelSpec,
    n: usize,
    c: u32,
    functions: Vec<LocalRoutingFunction>,
    labels: Option<Vec<BitString>>,
    ports: Option<PortAssignment>,
    diagnostics: Diagnostics,
}

impl RoutingScheme {
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn assemble(
        kind: SchemeKind,
        model: ModelSpec,
        n: usize,
        c: u32,
        functions: Vec<LocalRoutingFunction>,
        labels: Option<Vec<BitString>>,
        ports: Option<PortAssignment>,
        diagnostics: Diagnostics,
    ) -> Result<Self, BuildError> {
        model.check_port_rewrite(ports.is_some())?;
        if !kind.legal_models().contains(&model) {
            return Err(BuildError::IllegalModel { kind, model });
        }
        if functions.len() != n {
            return Err(BuildError::WrongFunctionCount {
                n,
                found: functions.len(),
            });
        }
        if labels.is_some() != (model.relabel == Relabeling::Gamma) {
            return Err(BuildError::LabelMismatch);
        }
        if ports.is_none() && model.info != InfoModel::II {
            return Err(BuildError::PortsRequired(model));
        }
        Ok(RoutingScheme {
            kind,
            model,
            n,
            c,
            functions,
            labels,
            ports,
            diagnostics,
        })
    }

    pub fn kind(&self) -> SchemeKind {
        self.kind
    }

    pub fn model(&self) -> ModelSpec {
        self.model
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn c(&self) -> u32 {
        self.c
    }

    pub fn function(&self, v: usize) -> &LocalRoutingFunction {
        &self.functions[v - 1]
    }

    pub fn functions(&self) -> &[LocalRoutingFunction] {
        &self.functions
    }

    /// Node labels under model gamma, index `v - 1`.
    pub fn labels(&self) -> Option<&[BitString]> {
        self.labels.as_deref()
    }

    pub fn ports(&self) -> Option<&PortAssignment> {
        self.ports.as_ref()
    }

    pub fn diagnostics(&self) -> &Diagnostics {
        &self.diagnostics
    }

    /// How a message addresses node `v` under this scheme's labeling.
    pub fn address_of(&self, v: usize) -> Address {
        match &self.labels {
            Some(labels) => Address::Bits(labels[v - 1].clone()),
            None => Address::Label(v),
        }
    }

    /// Free knowledge of node `v` under this scheme's model.
    pub fn context<'g>(&self, g: &'g LabeledGraph, v: usize) -> NodeContext<'g> {
        node_context(g, self.model, self.c, v)
    }

    /// Swaps in a new encoding for node `v`, re-decoding its function.
    pub fn replace_encoding(
        &mut self,
        g: &LabeledGraph,
        v: usize,
        encoding: BitString,
    ) -> Result<(), DecodeError> {
        let function = LocalRoutingFunction::decode(self.kind, &self.context(g, v), encoding)?;
        self.functions[v - 1] = function;
        Ok(())
    }
}

pub(crate) fn node_context(
    g: &LabeledGraph,
    model: ModelSpec,
    c: u32,
    v: usize,
) -> NodeContext<'_> {
    NodeContext {
        owner: v,
        n: g.n(),
        c,
        info: model.info,
        degree: g.degree(v),
        neighbors: (model.info == InfoModel::II).then(|| g.neighbors(v)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn model_strings_round_trip() {
        for info in [InfoModel::IA, InfoModel::IB, InfoModel::II] {
            for relabel in [Relabeling::Alpha, Relabeling::Beta, Relabeling::Gamma] {
                let m = ModelSpec::new(info, relabel);
                assert_eq!(m.to_string().parse::<ModelSpec>().unwrap(), m);
            }
        }
        assert_eq!(
            "II/γ".parse::<ModelSpec>().unwrap(),
            ModelSpec::new(InfoModel::II, Relabeling::Gamma)
        );
        assert!("III-alpha".parse::<ModelSpec>().is_err());
        assert!("II".parse::<ModelSpec>().is_err());
    }

    #[test]
    fn known_neighbors_with_free_ports_is_forbidden() {
        let ii = ModelSpec::new(InfoModel::II, Relabeling::Alpha);
        assert_eq!(
            ii.check_port_rewrite(true),
            Err(BuildError::ForbiddenModel(ii))
        );
        assert!(ii.check_port_rewrite(false).is_ok());
        let ib = ModelSpec::new(InfoModel::IB, Relabeling::Beta);
        assert!(ib.check_port_rewrite(true).is_ok());
    }

    #[test]
    fn scheme_names_parse() {
        for kind in SchemeKind::ALL {
            assert_eq!(kind.name().parse::<SchemeKind>().unwrap(), kind);
        }
        assert!("sp".parse::<SchemeKind>().is_err());
    }
}
