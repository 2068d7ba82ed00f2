//! Analytic meeting deadlines, computed from schedule arithmetic and codec
//! lengths only.

use crate::label_codec::{self, ceil_log2, Label};
use crate::schedule_math::{self, ScheduleError};

/// URT: the later of the two agents finishing stage `i* + 2`, counted from
/// agent 1's wake-up.
pub fn urt_deadline(
    d: u64,
    distance: u64,
    l1: Label,
    l2: Label,
    delay: u64,
) -> Result<u64, ScheduleError> {
    let i_star = schedule_math::critical_stage(d, distance)?;
    let finish = |label: Label, wake: u64| -> Result<u64, ScheduleError> {
        let y = label_codec::trans(label).len() as u64;
        let span = schedule_math::cumulative_duration(d, i_star + 2, y)?;
        wake.checked_add(span)
            .ok_or(ScheduleError::Overflow("urt deadline"))
    };
    Ok(finish(l1, 0)?.max(finish(l2, delay)?))
}

/// Stage index `i*` for the doubling oriented algorithm: smallest `i` with
/// `distance <= 2^i`.
pub fn kbl_critical_stage(distance: u64) -> u64 {
    u64::from(ceil_log2(distance.max(1)))
}

/// KBL: cumulative duration through stage `i* + 1`, each stage lasting
/// `(4λ + 1) 2^i`.
pub fn kbl_deadline(distance: u64, lstar: u64) -> Result<u64, ScheduleError> {
    let lambda =
        u64::from(label_codec::pad_width(lstar).map_err(|_| ScheduleError::InvalidDistance)?);
    let i_star = kbl_critical_stage(distance);
    let stages = 1u64
        .checked_shl((i_star + 2) as u32)
        .ok_or(ScheduleError::Overflow("kbl deadline"))?
        - 1;
    (4 * lambda + 1)
        .checked_mul(stages)
        .ok_or(ScheduleError::Overflow("kbl deadline"))
}

/// KBD: `D* (2k + 2)` with `k` the longer adapted label.
pub fn kbd_deadline(dstar: u64, l1: Label, l2: Label) -> u64 {
    let k = label_codec::adapt(l1)
        .len()
        .max(label_codec::adapt(l2).len()) as u64;
    dstar * (2 * k + 2)
}

/// `ceil(4 log2 L)`, computed exactly as `ceil(log2(L^4))`.
pub fn ceil_four_log2(label_space: u64) -> u64 {
    let fourth = u128::from(label_space).pow(4);
    if fourth <= 1 {
        0
    } else {
        u64::from(u128::BITS - (fourth - 1).leading_zeros())
    }
}

/// NEK: all bits up to `t = max(D, 4) + ceil(4 log2 L)` (bit `j` costs
/// `3j`), plus `D` rounds for the second agent to reach the root.
pub fn nek_deadline(distance: u64, label_space: u64) -> u64 {
    let t = distance.max(4) + ceil_four_log2(label_space);
    3 * t * (t + 1) / 2 + distance
}
