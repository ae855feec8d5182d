use std::fmt;
use std::str::FromStr;

use super::CodecError;

const WORD: usize = 64;

/// A growable sequence of bits, most-significant-first within each word.
///
/// Bit `i` lives in word `i / 64` at position `63 - i % 64`, so serializing
/// words big-endian yields the bits in order.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct BitString {
    words: Vec<u64>,
    len: usize,
}

impl BitString {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(bits: usize) -> Self {
        BitString {
            words: Vec::with_capacity(bits.div_ceil(WORD)),
            len: 0,
        }
    }

    /// `len` zero bits.
    pub fn zeros(len: usize) -> Self {
        BitString {
            words: vec![0; len.div_ceil(WORD)],
            len,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn push(&mut self, bit: bool) {
        let offset = self.len % WORD;
        if offset == 0 {
            self.words.push(0);
        }
        if bit {
            let last = self.words.len() - 1;
            self.words[last] |= 1 << (WORD - 1 - offset);
        }
        self.len += 1;
    }

    /// Appends the low `width` bits of `value`, most significant first.
    pub fn push_bits(&mut self, value: u64, width: usize) {
        debug_assert!(width <= 64);
        debug_assert!(
            width == 64 || value >> width == 0,
            "value does not fit in width"
        );
        for shift in (0..width).rev() {
            self.push((value >> shift) & 1 == 1);
        }
    }

    /// Appends `count` ones followed by a single zero.
    pub fn push_unary(&mut self, count: usize) {
        for _ in 0..count {
            self.push(true);
        }
        self.push(false);
    }

    pub fn extend_from(&mut self, other: &BitString) {
        if self.len.is_multiple_of(WORD) {
            self.words.truncate(self.len / WORD);
            self.words.extend_from_slice(&other.words);
            self.len += other.len;
            return;
        }
        for bit in other.iter() {
            self.push(bit);
        }
    }

    /// Concatenation `self ++ other`.
    pub fn concat(&self, other: &BitString) -> BitString {
        let mut out = BitString::with_capacity(self.len + other.len);
        out.extend_from(self);
        out.extend_from(other);
        out
    }

    pub fn get(&self, index: usize) -> bool {
        assert!(
            index < self.len,
            "bit index {index} out of range {}",
            self.len
        );
        (self.words[index / WORD] >> (WORD - 1 - index % WORD)) & 1 == 1
    }

    pub fn set(&mut self, index: usize, bit: bool) {
        assert!(
            index < self.len,
            "bit index {index} out of range {}",
            self.len
        );
        let mask = 1 << (WORD - 1 - index % WORD);
        if bit {
            self.words[index / WORD] |= mask;
        } else {
            self.words[index / WORD] &= !mask;
        }
    }

    pub fn flip(&mut self, index: usize) {
        let bit = self.get(index);
        self.set(index, !bit);
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Copies bits `start..end` into a new string.
    pub fn slice(&self, start: usize, end: usize) -> BitString {
        assert!(start <= end && end <= self.len);
        let mut out = BitString::with_capacity(end - start);
        for i in start..end {
            out.push(self.get(i));
        }
        out
    }

    pub fn starts_with(&self, prefix: &BitString) -> bool {
        prefix.len <= self.len && (0..prefix.len).all(|i| self.get(i) == prefix.get(i))
    }

    /// Packs the bits into bytes, most significant bit first; the final byte
    /// is zero padded.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut bytes: Vec<u8> = self.words.iter().flat_map(|w| w.to_be_bytes()).collect();
        bytes.truncate(self.len.div_ceil(8));
        bytes
    }

    /// Inverse of [`BitString::to_bytes`]. Fails when the byte count does not
    /// match `len` or a padding bit is set.
    pub fn from_bytes(bytes: &[u8], len: usize) -> Result<BitString, CodecError> {
        if bytes.len() != len.div_ceil(8) {
            return Err(CodecError::LengthMismatch {
                expected: len.div_ceil(8),
                found: bytes.len(),
            });
        }
        let mut out = BitString::with_capacity(len);
        for i in 0..len {
            out.push((bytes[i / 8] >> (7 - i % 8)) & 1 == 1);
        }
        let padding_set = (len..bytes.len() * 8).any(|i| (bytes[i / 8] >> (7 - i % 8)) & 1 == 1);
        if padding_set {
            return Err(CodecError::NonZeroPadding);
        }
        Ok(out)
    }

    pub fn reader(&self) -> BitReader<'_> {
        BitReader { bits: self, pos: 0 }
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for bit in self.iter() {
            f.write_str(if bit { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString(\"{self}\")")
    }
}

impl FromStr for BitString {
    type Err = CodecError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut out = BitString::with_capacity(s.len());
        for (i, ch) in s.chars().enumerate() {
            match ch {
                '0' => out.push(false),
                '1' => out.push(true),
                other => {
                    return Err(CodecError::BadSymbol {
                        index: i,
                        symbol: other,
                    })
                }
            }
        }
        Ok(out)
    }
}

impl FromIterator<bool> for BitString {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        let mut out = BitString::new();
        for bit in iter {
            out.push(bit);
        }
        out
    }
}

/// Sequential cursor over a [`BitString`].
#[derive(Debug, Clone)]
pub struct BitReader<'a> {
    bits: &'a BitString,
    pos: usize,
}

impl<'a> BitReader<'a> {
    pub fn position(&self) -> usize {
        self.pos
    }

    pub fn remaining(&self) -> usize {
        self.bits.len() - self.pos
    }

    pub fn is_exhausted(&self) -> bool {
        self.pos == self.bits.len()
    }

    pub fn read_bit(&mut self) -> Result<bool, CodecError> {
        if self.pos >= self.bits.len() {
            return Err(CodecError::UnexpectedEnd { at: self.pos });
        }
        let bit = self.bits.get(self.pos);
        self.pos += 1;
        Ok(bit)
    }

    pub fn read_bits(&mut self, width: usize) -> Result<u64, CodecError> {
        debug_assert!(width <= 64);
        if self.remaining() < width {
            return Err(CodecError::UnexpectedEnd {
                at: self.bits.len(),
            });
        }
        let mut value = 0u64;
        for _ in 0..width {
            value = (value << 1) | u64::from(self.read_bit()?);
        }
        Ok(value)
    }

    /// Counts ones up to and including the terminating zero.
    pub fn read_unary(&mut self) -> Result<usize, CodecError> {
        let mut count = 0;
        while self.read_bit()? {
            count += 1;
        }
        Ok(count)
    }

    pub fn read_string(&mut self, len: usize) -> Result<BitString, CodecError> {
        if self.remaining() < len {
            return Err(CodecError::UnexpectedEnd {
                at: self.bits.len(),
            });
        }
        let out = self.bits.slice(self.pos, self.pos + len);
        self.pos += len;
        Ok(out)
    }

    /// The unconsumed remainder.
    pub fn rest(&self) -> BitString {
        self.bits.slice(self.pos, self.bits.len())
    }
}
