//! Label transformations used to break symmetry between the two agents.
//!
//! Every codec maps a positive integer label to a bit string, indexed from 1:
//!
//! | codec   | rule                                         | length   |
//! |---------|----------------------------------------------|----------|
//! | `trans` | `1 -> 010101`, `0 -> 101010`                 | `6s`     |
//! | `pf`    | `1 -> 10`, `0 -> 01`, then append `11`       | `2s + 2` |
//! | `adapt` | `pf` followed by another `1 -> 10, 0 -> 01`  | `4s + 4` |
//! | `pad`   | left-pad to `λ` bits, then `1 -> 10, 0 -> 01`| `2λ`     |
//!
//! where `s` is the binary length of the label and `λ = ceil(log2 L*) + 1`.
//! `adapt_star_bit` reads the infinite repetition of `adapt` without
//! materializing it.

use std::fmt;
use std::num::NonZeroU64;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodecError {
    #[error("labels must be >= 1")]
    ZeroLabel,
    #[error("label {label} needs {bits} bits but the padded width is {width}")]
    LabelTooWide { label: u64, bits: u32, width: u32 },
    #[error("label-space bound must be >= 1")]
    ZeroBound,
    #[error("bit index must be >= 1")]
    ZeroIndex,
    #[error("distinguishing offset needs distinct labels and start index >= 4 (got {l1}, {l2}, j = {j})")]
    OffsetPrecondition { l1: u64, l2: u64, j: u64 },
    #[error("malformed bit string {0:?}")]
    Parse(String),
}

/// An agent label, an integer `>= 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct Label(NonZeroU64);

impl Label {
    pub fn new(value: u64) -> Result<Self, CodecError> {
        NonZeroU64::new(value)
            .map(Label)
            .ok_or(CodecError::ZeroLabel)
    }

    pub fn get(self) -> u64 {
        self.0.get()
    }

    /// Length of the binary representation, `floor(log2 l) + 1`.
    pub fn bit_length(self) -> u32 {
        u64::BITS - self.get().leading_zeros()
    }
}

impl TryFrom<u64> for Label {
    type Error = CodecError;

    fn try_from(value: u64) -> Result<Self, Self::Error> {
        Label::new(value)
    }
}

impl From<Label> for u64 {
    fn from(label: Label) -> u64 {
        label.get()
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.get())
    }
}

/// Finite bit string with 1-based indexing.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct BitString {
    bits: Vec<bool>,
}

impl BitString {
    pub fn from_bits(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Bit at 1-based position `j`.
    pub fn bit(&self, j: usize) -> Option<bool> {
        j.checked_sub(1).and_then(|k| self.bits.get(k).copied())
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.bits
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        self.bits.iter().copied()
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn starts_with(&self, prefix: &BitString) -> bool {
        self.bits.starts_with(&prefix.bits)
    }

    /// Replaces every bit by a fixed block: `one` for 1, `zero` for 0.
    fn expand(&self, one: &[bool], zero: &[bool]) -> BitString {
        let mut bits = Vec::with_capacity(self.bits.len() * one.len().max(zero.len()));
        for &b in &self.bits {
            bits.extend_from_slice(if b { one } else { zero });
        }
        BitString { bits }
    }

    fn doubled(&self) -> BitString {
        self.expand(&[true, false], &[false, true])
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for BitString {
    type Err = CodecError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(CodecError::Parse(s.to_string())),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(BitString::from_bits)
    }
}

/// `ceil(log2 n)` for `n >= 1`.
pub fn ceil_log2(n: u64) -> u32 {
    if n <= 1 {
        0
    } else {
        u64::BITS - (n - 1).leading_zeros()
    }
}

/// Most-significant-bit-first binary representation, no leading zeros.
pub fn binary_rep(label: Label) -> BitString {
    binary_fixed_width(label.get(), label.bit_length())
}

fn binary_fixed_width(value: u64, width: u32) -> BitString {
    BitString::from_bits((0..width).rev().map(|k| (value >> k) & 1 == 1).collect())
}

const TRANS_ONE: [bool; 6] = [false, true, false, true, false, true];
const TRANS_ZERO: [bool; 6] = [true, false, true, false, true, false];

/// `1 -> 010101`, `0 -> 101010`. Never contains `000`.
pub fn trans(label: Label) -> BitString {
    binary_rep(label).expand(&TRANS_ONE, &TRANS_ZERO)
}

/// Prefix-free label: doubling code of the binary representation plus `11`.
pub fn pf(label: Label) -> BitString {
    let mut out = binary_rep(label).doubled();
    out.bits.extend_from_slice(&[true, true]);
    out
}

/// Adapted label: the doubling code applied to `pf`.
pub fn adapt(label: Label) -> BitString {
    pf(label).doubled()
}

/// `λ = ceil(log2 L*) + 1`, the padded binary width.
pub fn pad_width(lstar: u64) -> Result<u32, CodecError> {
    if lstar == 0 {
        return Err(CodecError::ZeroBound);
    }
    Ok(ceil_log2(lstar) + 1)
}

/// Padded label of fixed length `2λ`.
pub fn pad(label: Label, lstar: u64) -> Result<BitString, CodecError> {
    let width = pad_width(lstar)?;
    let bits = label.bit_length();
    if bits > width {
        return Err(CodecError::LabelTooWide {
            label: label.get(),
            bits,
            width,
        });
    }
    Ok(binary_fixed_width(label.get(), width).doubled())
}

/// Bit `j` (1-based) of the infinite repetition of `adapt(label)`.
pub fn adapt_star_bit(label: Label, j: u64) -> Result<bool, CodecError> {
    if j == 0 {
        return Err(CodecError::ZeroIndex);
    }
    Ok(AdaptStar::new(label).bit(j))
}

/// Cached view of `Adapt*(label)` for repeated reads.
#[derive(Clone, Debug)]
pub struct AdaptStar {
    period: BitString,
}

impl AdaptStar {
    pub fn new(label: Label) -> Self {
        Self {
            period: adapt(label),
        }
    }

    pub fn period(&self) -> &BitString {
        &self.period
    }

    /// Bit at 1-based position `j >= 1`.
    pub fn bit(&self, j: u64) -> bool {
        debug_assert!(j >= 1);
        let k = ((j - 1) % self.period.len() as u64) as usize;
        self.period.bits[k]
    }
}

/// Smallest `y >= 0` with `Adapt*(l1)[j + y] = 1` and `Adapt*(l2)[j + y] = 0`.
pub fn distinguishing_offset(l1: Label, l2: Label, j: u64) -> Result<u64, CodecError> {
    if l1 == l2 || j < 4 {
        return Err(CodecError::OffsetPrecondition {
            l1: l1.get(),
            l2: l2.get(),
            j,
        });
    }
    let a = AdaptStar::new(l1);
    let b = AdaptStar::new(l2);
    // Distinct labels give sequences that are not eventually equal, so a
    // (1, 0) position appears within one joint period.
    let joint = lcm(a.period.len() as u64, b.period.len() as u64);
    (0..=joint)
        .find(|&y| a.bit(j + y) && !b.bit(j + y))
        .ok_or(CodecError::OffsetPrecondition {
            l1: l1.get(),
            l2: l2.get(),
            j,
        })
}

/// Claimed ceiling on [`distinguishing_offset`] for labels in `1..=L`:
/// the real number `4 log2 L`.
pub fn offset_bound(label_space: u64) -> f64 {
    4.0 * (label_space as f64).log2()
}

/// First 1-based index where `a` has 1 and `b` has 0, scanning their common
/// length.
pub fn first_one_zero_index(a: &BitString, b: &BitString) -> Option<usize> {
    a.iter()
        .zip(b.iter())
        .position(|(x, y)| x && !y)
        .map(|k| k + 1)
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}
