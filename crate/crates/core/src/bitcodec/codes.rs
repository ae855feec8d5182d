//! Self-delimiting codes and the string/number correspondence.

use super::{BitReader, BitString, CodecError};

/// `x̄ = 1^|x| 0 x`, of length `2|x| + 1`.
pub fn sd_encode_bar(x: &BitString) -> BitString {
    let mut out = BitString::with_capacity(2 * x.len() + 1);
    out.push_unary(x.len());
    out.extend_from(x);
    out
}

/// Splits `s = x̄ y` into `(x, y)`.
pub fn sd_decode_bar(s: &BitString) -> Result<(BitString, BitString), CodecError> {
    let mut reader = s.reader();
    let x = read_bar(&mut reader)?;
    Ok((x, reader.rest()))
}

pub fn read_bar(reader: &mut BitReader<'_>) -> Result<BitString, CodecError> {
    let start = reader.position();
    let len = reader
        .read_unary()
        .map_err(|_| CodecError::MissingStopBit { at: start })?;
    if reader.remaining() < len {
        return Err(CodecError::TruncatedPayload {
            needed: len,
            available: reader.remaining(),
        });
    }
    reader.read_string(len)
}

/// `x' = bar(binary(|x|)) x`, of length `|x| + 2⌈log(|x|+1)⌉ + 1`.
///
/// The length field is the minimal binary representation of `|x|`, with zero
/// written as the empty string.
pub fn sd_encode_prime(x: &BitString) -> BitString {
    let header = sd_encode_bar(&minimal_binary(x.len() as u64));
    header.concat(x)
}

pub fn sd_decode_prime(s: &BitString) -> Result<(BitString, BitString), CodecError> {
    let mut reader = s.reader();
    let x = read_prime(&mut reader)?;
    Ok((x, reader.rest()))
}

pub fn read_prime(reader: &mut BitReader<'_>) -> Result<BitString, CodecError> {
    let len_bits = read_bar(reader)?;
    if len_bits.len() > 63 {
        return Err(CodecError::LengthOverflow);
    }
    let len = len_bits
        .iter()
        .fold(0u64, |acc, b| (acc << 1) | u64::from(b)) as usize;
    if reader.remaining() < len {
        return Err(CodecError::TruncatedPayload {
            needed: len,
            available: reader.remaining(),
        });
    }
    reader.read_string(len)
}

/// Binary representation of `value` without leading zeros; `0` maps to the
/// empty string. Its length is `⌈log(value+1)⌉`.
pub fn minimal_binary(value: u64) -> BitString {
    let width = bit_width(value);
    let mut out = BitString::with_capacity(width);
    out.push_bits(value, width);
    out
}

/// `⌈log2(value + 1)⌉`: the number of bits in the minimal binary form.
pub fn bit_width(value: u64) -> usize {
    (u64::BITS - value.leading_zeros()) as usize
}

/// `⌈log2(count)⌉` for `count ≥ 1`: bits needed to index `count` items.
pub fn index_width(count: usize) -> usize {
    assert!(count >= 1, "cannot index an empty range");
    bit_width(count as u64 - 1)
}

/// The string for natural number `n` under the correspondence
/// `(0, ε), (1, 0), (2, 1), (3, 00), (4, 01), …`: binary of `n + 1` without its
/// leading one.
pub fn nat_to_string(n: u64) -> BitString {
    let value = n + 1;
    let width = bit_width(value) - 1;
    let mut out = BitString::with_capacity(width);
    out.push_bits(value & !(1u64 << width), width);
    out
}

/// Inverse of [`nat_to_string`].
pub fn string_to_nat(s: &BitString) -> Result<u64, CodecError> {
    if s.len() > 63 {
        return Err(CodecError::LengthOverflow);
    }
    let value = s.iter().fold(1u64, |acc, b| (acc << 1) | u64::from(b));
    Ok(value - 1)
}

/// Length of `x'` for a payload of `len` bits.
pub fn prime_length(len: usize) -> usize {
    len + 2 * bit_width(len as u64) + 1
}
