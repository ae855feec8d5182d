//! Bit-level primitives: bit strings, self-delimiting codes, and the
//! canonical edge-string encoding of labeled graphs.

mod bits;
mod codes;
mod graph_code;

pub use bits::{BitReader, BitString};
pub use codes::{
    bit_width, index_width, minimal_binary, nat_to_string, prime_length, read_bar, read_prime,
    sd_decode_bar, sd_decode_prime, sd_encode_bar, sd_encode_prime, string_to_nat,
};
pub use graph_code::{decode_graph, encode_graph, read_graph_file, write_graph_file};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodecError {
    #[error("expected {expected} units, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("no stop bit before the end of input (prefix started at bit {at})")]
    MissingStopBit { at: usize },
    #[error("payload needs {needed} bits but only {available} remain")]
    TruncatedPayload { needed: usize, available: usize },
    #[error("unexpected end of input at bit {at}")]
    UnexpectedEnd { at: usize },
    #[error("invalid bit symbol {symbol:?} at index {index}")]
    BadSymbol { index: usize, symbol: char },
    #[error("padding bits after the payload are not zero")]
    NonZeroPadding,
    #[error("encoded length does not fit in 63 bits")]
    LengthOverflow,
    #[error("malformed graph file: {0}")]
    BadGraphFile(String),
}
