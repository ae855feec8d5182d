//! The canonical edge string `E(G)` and the on-disk graph file.
//!
//! A graph file is two lines:
//!
//! ```text
//! n=<node count>
//! <lowercase hex of E(G), most significant bit first, final byte zero padded>
//! ```
//!
//! The bit length is implied by `n` as `n(n-1)/2`; padding bits must be zero.

use super::{BitString, CodecError};
use crate::graphs::LabeledGraph;

/// Edge `(u, v)` for `u < v` maps to bit `(u-1)n - u(u+1)/2 + v - 1`, i.e.
/// lexicographic order `(1,2), (1,3), …, (1,n), (2,3), …`.
pub fn encode_graph(g: &LabeledGraph) -> BitString {
    let n = g.n();
    let mut bits = BitString::with_capacity(n * n.saturating_sub(1) / 2);
    for u in 1..=n {
        let row = g.neighbor_set(u);
        for v in u + 1..=n {
            bits.push(row.contains(v));
        }
    }
    bits
}

pub fn decode_graph(s: &BitString, n: usize) -> Result<LabeledGraph, CodecError> {
    let expected = n * n.saturating_sub(1) / 2;
    if s.len() != expected {
        return Err(CodecError::LengthMismatch {
            expected,
            found: s.len(),
        });
    }
    let mut g = LabeledGraph::empty(n);
    let mut i = 0;
    for u in 1..=n {
        for v in u + 1..=n {
            if s.get(i) {
                g.insert_edge(u, v);
            }
            i += 1;
        }
    }
    g.finish();
    Ok(g)
}

pub fn write_graph_file(g: &LabeledGraph) -> String {
    format!("n={}\n{}\n", g.n(), hex::encode(encode_graph(g).to_bytes()))
}

pub fn read_graph_file(text: &str) -> Result<LabeledGraph, CodecError> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| CodecError::BadGraphFile("empty file".into()))?;
    let n: usize = header
        .trim()
        .strip_prefix("n=")
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| CodecError::BadGraphFile(format!("bad header {header:?}")))?;
    let body = lines.next().unwrap_or("").trim();
    if lines.any(|l| !l.trim().is_empty()) {
        return Err(CodecError::BadGraphFile("trailing content".into()));
    }
    let bytes = hex::decode(body).map_err(|e| CodecError::BadGraphFile(e.to_string()))?;
    let bits = BitString::from_bytes(&bytes, n * n.saturating_sub(1) / 2)?;
    decode_graph(&bits, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::generate_uniform;

    #[test]
    fn small_encodings() {
        assert_eq!(encode_graph(&LabeledGraph::complete(3)).to_string(), "111");
        assert_eq!(encode_graph(&LabeledGraph::empty(3)).to_string(), "000");
        let path = LabeledGraph::from_edges(3, [(1, 2), (2, 3)]).unwrap();
        assert_eq!(encode_graph(&path).to_string(), "101");
    }

    #[test]
    fn small_decodings() {
        assert_eq!(
            decode_graph(&"111".parse().unwrap(), 3).unwrap(),
            LabeledGraph::complete(3)
        );
        assert_eq!(
            decode_graph(&"000".parse().unwrap(), 3).unwrap(),
            LabeledGraph::empty(3)
        );
        assert_eq!(
            decode_graph(&"1111".parse().unwrap(), 3),
            Err(CodecError::LengthMismatch {
                expected: 3,
                found: 4
            })
        );
    }

    #[test]
    fn graph_file_format() {
        let path = LabeledGraph::from_edges(3, [(1, 2), (2, 3)]).unwrap();
        assert_eq!(write_graph_file(&path), "n=3\na0\n");
        assert_eq!(read_graph_file("n=3\na0\n").unwrap(), path);
        assert!(read_graph_file("n=3\na1\n").is_err());
        assert!(read_graph_file("m=3\na0\n").is_err());
        assert!(read_graph_file("n=3\na0a0\n").is_err());

        let g = generate_uniform(37, 4).unwrap();
        assert_eq!(read_graph_file(&write_graph_file(&g)).unwrap(), g);
    }
}
