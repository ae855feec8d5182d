//! Permutation ranking through the factorial number system.
//!
//! A permutation `π` of `0..d` is ranked by its Lehmer code
//! `L_i = #{ j > i : π(j) < π(i) }`, read as a mixed-radix number with radices
//! `d, d-1, …, 1`. Ranks lie in `0..d!` and are stored in exactly
//! `⌈log2 d!⌉` bits.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::bitcodec::{BitReader, BitString, CodecError};

pub fn factorial(d: usize) -> BigUint {
    (2..=d).fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
}

/// `⌈log2 d!⌉`; zero for `d ≤ 1`.
pub fn permutation_bits(d: usize) -> usize {
    let f = factorial(d);
    if f <= BigUint::one() {
        0
    } else {
        (f - BigUint::one()).bits() as usize
    }
}

pub fn lehmer_code(perm: &[usize]) -> Vec<usize> {
    (0..perm.len())
        .map(|i| perm[i + 1..].iter().filter(|&&x| x < perm[i]).count())
        .collect()
}

pub fn rank(perm: &[usize]) -> BigUint {
    let d = perm.len();
    let code = lehmer_code(perm);
    let mut acc = BigUint::zero();
    for (i, &digit) in code.iter().enumerate() {
        acc = acc * BigUint::from(d - i) + BigUint::from(digit);
    }
    acc
}

/// Inverse of [`rank`]; `None` if `r ≥ d!`.
pub fn unrank(mut r: BigUint, d: usize) -> Option<Vec<usize>> {
    let mut code = vec![0usize; d];
    for i in (0..d).rev() {
        let radix = BigUint::from(d - i);
        code[i] = (&r % &radix).to_usize()?;
        r /= radix;
    }
    if !r.is_zero() {
        return None;
    }
    let mut pool: Vec<usize> = (0..d).collect();
    Some(code.into_iter().map(|digit| pool.remove(digit)).collect())
}

pub fn encode_permutation(perm: &[usize]) -> BitString {
    let width = permutation_bits(perm.len());
    let r = rank(perm);
    let mut out = BitString::with_capacity(width);
    for i in (0..width as u64).rev() {
        out.push(r.bit(i));
    }
    out
}

pub fn read_permutation(reader: &mut BitReader<'_>, d: usize) -> Result<Vec<usize>, CodecError> {
    let width = permutation_bits(d);
    let mut r = BigUint::zero();
    for i in (0..width as u64).rev() {
        if reader.read_bit()? {
            r.set_bit(i, true);
        }
    }
    unrank(r, d).ok_or(CodecError::LengthOverflow)
}
