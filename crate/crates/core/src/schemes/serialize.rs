//! Scheme files.
//!
//! ```text
//! scheme=<name> model=<model> n=<n> c=<c>
//! bits=<length of the body in bits>
//! <lowercase hex body, most significant bit first, zero padded>
//! ```
//!
//! The body holds, for each node in label order, `label′` (model gamma only)
//! followed by `encoding′`, using the self-delimiting prime code.

use super::Diagnostics;
use super::{
    node_context, BuildError, DecodeError, LocalRoutingFunction, ModelSpec, Relabeling,
    RoutingScheme, SchemeKind,
};
use crate::bitcodec::{read_prime, sd_encode_prime, BitString};
use crate::graphs::{LabeledGraph, PortAssignment};

pub fn write_scheme(s: &RoutingScheme) -> String {
    let mut body = BitString::new();
    for v in 1..=s.n() {
        if let Some(labels) = s.labels() {
            body.extend_from(&sd_encode_prime(&labels[v - 1]));
        }
        body.extend_from(&sd_encode_prime(s.function(v).encoding()));
    }
    format!(
        "scheme={} model={} n={} c={}\nbits={}\n{}\n",
        s.kind(),
        s.model(),
        s.n(),
        s.c(),
        body.len(),
        hex::encode(body.to_bytes())
    )
}

fn bad(msg: impl Into<String>) -> DecodeError {
    DecodeError::BadFile(msg.into())
}

/// Reads a scheme for `g`; schemes that forward by port need the wiring.
pub fn read_scheme(
    text: &str,
    g: &LabeledGraph,
    ports: Option<&PortAssignment>,
) -> Result<RoutingScheme, DecodeError> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| bad("empty file"))?;
    let mut kind = None;
    let mut model = None;
    let mut n = None;
    let mut c = None;
    for field in header.split_whitespace() {
        let (key, value) = field
            .split_once('=')
            .ok_or_else(|| bad(format!("bad field {field:?}")))?;
        match key {
            "scheme" => kind = Some(value.parse::<SchemeKind>().map_err(bad)?),
            "model" => model = Some(value.parse::<ModelSpec>().map_err(bad)?),
            "n" => n = Some(value.parse::<usize>().map_err(|e| bad(e.to_string()))?),
            "c" => c = Some(value.parse::<u32>().map_err(|e| bad(e.to_string()))?),
            _ => return Err(bad(format!("unknown field {key:?}"))),
        }
    }
    let (Some(kind), Some(model), Some(n), Some(c)) = (kind, model, n, c) else {
        return Err(bad("header needs scheme, model, n and c"));
    };
    if n != g.n() {
        return Err(bad(format!("scheme is for {n} nodes, graph has {}", g.n())));
    }
    let len: usize = lines
        .next()
        .and_then(|l| l.trim().strip_prefix("bits="))
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| bad("missing bits= line"))?;
    let bytes = hex::decode(lines.next().unwrap_or("").trim()).map_err(|e| bad(e.to_string()))?;
    let body = BitString::from_bytes(&bytes, len)?;

    let gamma = model.relabel == Relabeling::Gamma;
    let mut reader = body.reader();
    let mut labels = Vec::new();
    let mut functions = Vec::with_capacity(n);
    for v in 1..=n {
        if gamma {
            labels.push(read_prime(&mut reader)?);
        }
        let encoding = read_prime(&mut reader)?;
        functions.push(LocalRoutingFunction::decode(
            kind,
            &node_context(g, model, c, v),
            encoding,
        )?);
    }
    if !reader.is_exhausted() {
        return Err(DecodeError::TrailingBits {
            node: n,
            count: reader.remaining(),
        });
    }
    let labels = gamma.then_some(labels);
    RoutingScheme::assemble(
        kind,
        model,
        n,
        c,
        functions,
        labels,
        ports.cloned(),
        Diagnostics::default(),
    )
    .map_err(|e| match e {
        BuildError::Decode(d) => d,
        other => bad(other.to_string()),
    })
}
