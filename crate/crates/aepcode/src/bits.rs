//! MSB-first bit packing shared by the codeword wire format.

use crate::error::{Error, Result};

/// Packs bits MSB-first; the final byte is zero-padded on the right.
pub(crate) fn pack_msb(bits: &[bool]) -> Vec<u8> {
    let mut bytes = vec![0u8; bits.len().div_ceil(8)];
    for (i, &bit) in bits.iter().enumerate() {
        if bit {
            bytes[i / 8] |= 1 << (7 - (i % 8));
        }
    }
    bytes
}

/// Inverse of [`pack_msb`]: rejects byte slices of the wrong length and
/// nonzero padding bits.
pub(crate) fn unpack_msb(bytes: &[u8], nbits: usize) -> Result<Vec<bool>> {
    let expected = nbits.div_ceil(8);
    if bytes.len() != expected {
        return Err(Error::CodewordByteLengthMismatch {
            got: bytes.len(),
            expected,
            bits: nbits,
        });
    }
    let mut bits = Vec::with_capacity(nbits);
    for i in 0..nbits {
        bits.push(bytes[i / 8] & (1 << (7 - (i % 8))) != 0);
    }
    for i in nbits..expected * 8 {
        if bytes[i / 8] & (1 << (7 - (i % 8))) != 0 {
            return Err(Error::NonZeroPadding);
        }
    }
    Ok(bits)
}

/// Writes `value` into a field, MSB-first, left-padded with zeros.
/// The caller guarantees the field is wide enough.
pub(crate) fn write_value_msb(field: &mut [bool], value: u64) {
    debug_assert!(field.len() >= 64 || value < (1u64 << field.len()).max(1) || field.len() == 64);
    for (offset, slot) in field.iter_mut().rev().enumerate() {
        *slot = offset < 64 && (value >> offset) & 1 == 1;
    }
}

/// Reads an MSB-first field as an integer, saturating at `u128::MAX` when
/// the field holds set bits beyond 128 positions.
pub(crate) fn read_value_msb(field: &[bool]) -> u128 {
    let mut value: u128 = 0;
    for (offset, &bit) in field.iter().rev().enumerate() {
        if bit {
            if offset >= 128 {
                return u128::MAX;
            }
            value |= 1u128 << offset;
        }
    }
    value
}
