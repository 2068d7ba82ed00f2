//! Exact schedule arithmetic for the unoriented-tree algorithm: ball sizes,
//! stage radii and durations, the critical stage and the time spent before
//! reaching it.
//!
//! All values are round counts in `u64`; every multiplication and addition is
//! checked and overflow is reported as [`ScheduleError::Overflow`].

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScheduleError {
    #[error("arithmetic overflow computing {0}")]
    Overflow(&'static str),
    #[error("degree must be >= 2, got {0}")]
    InvalidDegree(u64),
    #[error("transformed label length must be >= 6, got {0}")]
    InvalidLabelLength(u64),
    #[error("initial distance must be >= 1")]
    InvalidDistance,
    #[error("telescoping check needs stage >= {min} for degree {d}, got {i}")]
    StageTooSmall { d: u64, i: u64, min: u64 },
}

type Result<T> = std::result::Result<T, ScheduleError>;

fn check_degree(d: u64) -> Result<()> {
    if d < 2 {
        Err(ScheduleError::InvalidDegree(d))
    } else {
        Ok(())
    }
}

fn check_label_length(y: u64) -> Result<()> {
    if y < 6 {
        Err(ScheduleError::InvalidLabelLength(y))
    } else {
        Ok(())
    }
}

fn pow(base: u64, exp: u64, what: &'static str) -> Result<u64> {
    let exp = u32::try_from(exp).map_err(|_| ScheduleError::Overflow(what))?;
    base.checked_pow(exp).ok_or(ScheduleError::Overflow(what))
}

fn mul(a: u64, b: u64, what: &'static str) -> Result<u64> {
    a.checked_mul(b).ok_or(ScheduleError::Overflow(what))
}

fn add(a: u64, b: u64, what: &'static str) -> Result<u64> {
    a.checked_add(b).ok_or(ScheduleError::Overflow(what))
}

/// `z(r)`: number of nodes within distance `r` of any node.
pub fn ball_size(d: u64, r: u64) -> Result<u64> {
    check_degree(d)?;
    if d == 2 {
        return add(mul(2, r, "ball size")?, 1, "ball size");
    }
    let geometric = (pow(d - 1, r, "ball size")? - 1) / (d - 2);
    add(mul(d, geometric, "ball size")?, 1, "ball size")
}

/// `a(r) = 2(z(r) - 1)`: edge traversals of a closed DFS of a ball.
pub fn dfs_cost(d: u64, r: u64) -> Result<u64> {
    mul(2, ball_size(d, r)? - 1, "dfs cost")
}

/// `r_i`: `4^i` on the line, `2i` otherwise.
pub fn stage_radius(d: u64, i: u64) -> Result<u64> {
    check_degree(d)?;
    if d == 2 {
        pow(4, i, "stage radius")
    } else {
        mul(2, i, "stage radius")
    }
}

/// `π_i = 2 a(r_i)`: rounds spent on one bit in stage `i`.
pub fn bit_duration(d: u64, i: u64) -> Result<u64> {
    mul(2, dfs_cost(d, stage_radius(d, i)?)?, "bit duration")
}

/// `S_i = y π_i`: rounds of stage `i` for a transformed label of length `y`.
pub fn stage_duration(d: u64, i: u64, y: u64) -> Result<u64> {
    check_label_length(y)?;
    mul(y, bit_duration(d, i)?, "stage duration")
}

/// `i*`: first stage whose radius reaches `distance`.
pub fn critical_stage(d: u64, distance: u64) -> Result<u64> {
    check_degree(d)?;
    if distance == 0 {
        return Err(ScheduleError::InvalidDistance);
    }
    if d == 2 {
        let mut i = 0;
        while stage_radius(2, i)? < distance {
            i += 1;
        }
        Ok(i)
    } else {
        Ok(distance.div_ceil(2))
    }
}

/// `α = Σ_{i < i*} S_i`: rounds before the critical stage begins.
pub fn pre_critical_time(d: u64, i_star: u64, y: u64) -> Result<u64> {
    check_label_length(y)?;
    (0..i_star).try_fold(0u64, |acc, i| {
        add(acc, stage_duration(d, i, y)?, "pre-critical time")
    })
}

/// Cumulative duration `Σ_{i <= last} S_i`.
pub fn cumulative_duration(d: u64, last: u64, y: u64) -> Result<u64> {
    pre_critical_time(d, last + 1, y)
}

/// Whether `4 π_{i-1} <= π_i <= 5 π_{i-1}`.
pub fn telescoping_check(d: u64, i: u64) -> Result<bool> {
    check_degree(d)?;
    let min = if d == 2 { 1 } else { 2 };
    if i < min {
        return Err(ScheduleError::StageTooSmall { d, i, min });
    }
    let prev = bit_duration(d, i - 1)?;
    let cur = bit_duration(d, i)?;
    Ok(mul(4, prev, "telescoping")? <= cur && cur <= mul(5, prev, "telescoping")?)
}

/// Stage timetable of one agent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScheduleProfile {
    pub d: u64,
    pub y: u64,
    pub wake_round: u64,
    /// `T(i)` for `i = 0..=stages`; `T(0)` is the wake round.
    pub stage_starts: Vec<u64>,
    /// `S_i` for `i = 0..stages`.
    pub stage_durations: Vec<u64>,
    /// `π_i` for `i = 0..stages`.
    pub bit_durations: Vec<u64>,
    /// `r_i` for `i = 0..stages`.
    pub radii: Vec<u64>,
    pub critical_stage: u64,
    pub pre_critical_time: u64,
}

impl ScheduleProfile {
    /// Timetable covering stages `0..stages` of an agent waking at
    /// `wake_round`, with the critical stage for `distance`.
    pub fn new(d: u64, y: u64, wake_round: u64, distance: u64, stages: u64) -> Result<Self> {
        let critical = critical_stage(d, distance)?;
        let mut profile = ScheduleProfile {
            d,
            y,
            wake_round,
            stage_starts: vec![wake_round],
            stage_durations: Vec::new(),
            bit_durations: Vec::new(),
            radii: Vec::new(),
            critical_stage: critical,
            pre_critical_time: pre_critical_time(d, critical, y)?,
        };
        for i in 0..stages {
            let duration = stage_duration(d, i, y)?;
            let start = *profile.stage_starts.last().expect("non-empty");
            profile
                .stage_starts
                .push(add(start, duration, "stage start")?);
            profile.stage_durations.push(duration);
            profile.bit_durations.push(bit_duration(d, i)?);
            profile.radii.push(stage_radius(d, i)?);
        }
        Ok(profile)
    }

    pub fn stage_start(&self, i: usize) -> Option<u64> {
        self.stage_starts.get(i).copied()
    }
}

/// Closed forms used as independent cross-checks of the summations above.
pub mod closed_form {
    use super::*;

    /// `4^i · 8y` on the line, `4yd((d-1)^{2i} - 1)/(d-2)` otherwise.
    pub fn stage_duration(d: u64, i: u64, y: u64) -> Result<u64> {
        check_degree(d)?;
        check_label_length(y)?;
        if d == 2 {
            mul(
                pow(4, i, "closed-form stage")?,
                mul(8, y, "closed-form stage")?,
                "closed-form stage",
            )
        } else {
            let growth = pow(d - 1, 2 * i, "closed-form stage")? - 1;
            let scaled = mul(
                mul(4 * y, d, "closed-form stage")?,
                growth,
                "closed-form stage",
            )?;
            Ok(scaled / (d - 2))
        }
    }

    /// Line-only pre-critical time `8y r_{i*}/3 - 8y/3`.
    pub fn pre_critical_time_line(i_star: u64, y: u64) -> Result<u64> {
        check_label_length(y)?;
        let radius = stage_radius(2, i_star)?;
        let scaled = mul(8 * y, radius, "closed-form alpha")?;
        Ok((scaled - 8 * y) / 3)
    }

    /// For `d >= 3`: whether `α <= S_{i*} / ((d-1)^2 - 1)`, compared exactly.
    pub fn pre_critical_within_bound(d: u64, i_star: u64, y: u64) -> Result<bool> {
        check_degree(d)?;
        let alpha = pre_critical_time(d, i_star, y)?;
        let stage = super::stage_duration(d, i_star, y)?;
        let denom = (d - 1) * (d - 1) - 1;
        Ok(mul(alpha, denom, "alpha bound")? <= stage)
    }

    /// `S_{i+q} = 4^q S_i` on the line and `(d-1)^{2q} S_i + S_q` otherwise.
    pub fn stage_shift_holds(d: u64, i: u64, q: u64, y: u64) -> Result<bool> {
        let lhs = super::stage_duration(d, i + q, y)?;
        let si = super::stage_duration(d, i, y)?;
        let rhs = if d == 2 {
            mul(pow(4, q, "stage shift")?, si, "stage shift")?
        } else {
            let factor = pow(d - 1, 2 * q, "stage shift")?;
            add(
                mul(factor, si, "stage shift")?,
                super::stage_duration(d, q, y)?,
                "stage shift",
            )?
        };
        Ok(lhs == rhs)
    }

    /// `4 S_{i-1} <= S_i <= 5 S_{i-1}`.
    pub fn stage_ratio_holds(d: u64, i: u64, y: u64) -> Result<bool> {
        let prev = super::stage_duration(d, i - 1, y)?;
        let cur = super::stage_duration(d, i, y)?;
        Ok(4 * prev <= cur && cur <= 5 * prev)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ball_size_examples() {
        for d in 2..=6 {
            assert_eq!(ball_size(d, 0).unwrap(), 1);
        }
        assert_eq!(ball_size(2, 4).unwrap(), 9);
        assert_eq!(ball_size(3, 2).unwrap(), 10);
        assert!(ball_size(1, 2).is_err());
    }

    #[test]
    fn dfs_cost_examples() {
        assert_eq!(dfs_cost(3, 0).unwrap(), 0);
        assert_eq!(dfs_cost(2, 1).unwrap(), 4);
        assert_eq!(dfs_cost(3, 2).unwrap(), 18);
    }

    #[test]
    fn radius_and_bit_duration_examples() {
        assert_eq!(stage_radius(2, 2).unwrap(), 16);
        assert_eq!(stage_radius(3, 1).unwrap(), 2);
        assert_eq!(stage_radius(5, 0).unwrap(), 0);
        assert_eq!(bit_duration(2, 0).unwrap(), 8);
        assert_eq!(bit_duration(3, 1).unwrap(), 36);
        assert_eq!(bit_duration(3, 0).unwrap(), 0);
    }

    #[test]
    fn stage_duration_examples() {
        assert_eq!(stage_duration(2, 1, 6).unwrap(), 192);
        assert_eq!(stage_duration(3, 1, 6).unwrap(), 216);
        assert_eq!(stage_duration(3, 0, 18).unwrap(), 0);
        assert!(stage_duration(3, 1, 5).is_err());
    }

    #[test]
    fn critical_stage_examples() {
        assert_eq!(critical_stage(2, 1).unwrap(), 0);
        assert_eq!(critical_stage(2, 5).unwrap(), 2);
        assert_eq!(critical_stage(3, 5).unwrap(), 3);
        assert_eq!(critical_stage(4, 2).unwrap(), 1);
        assert!(critical_stage(3, 0).is_err());
    }

    #[test]
    fn pre_critical_examples() {
        assert_eq!(pre_critical_time(2, 1, 6).unwrap(), 48);
        assert_eq!(closed_form::pre_critical_time_line(1, 6).unwrap(), 48);
        assert_eq!(pre_critical_time(3, 1, 6).unwrap(), 0);
        assert_eq!(pre_critical_time(3, 2, 6).unwrap(), 216);
    }

    #[test]
    fn telescoping_examples() {
        assert!(telescoping_check(2, 3).unwrap());
        assert!(telescoping_check(3, 2).unwrap());
        // pi_3 / pi_2 = 728 / 80 on the 4-regular tree.
        assert!(!telescoping_check(4, 3).unwrap());
        assert!(telescoping_check(3, 4).unwrap());
        assert!(telescoping_check(3, 1).is_err());
    }

    #[test]
    fn no_overflow_at_moderate_sizes() {
        assert!(stage_duration(4, 6, 18).is_ok());
        assert!(matches!(
            stage_duration(2, 40, 6),
            Err(ScheduleError::Overflow(_))
        ));
    }

    #[test]
    fn profile_stage_starts_accumulate() {
        let p = ScheduleProfile::new(3, 12, 7, 3, 4).unwrap();
        assert_eq!(p.stage_starts[0], 7);
        for i in 0..4 {
            assert_eq!(
                p.stage_starts[i + 1],
                p.stage_starts[i] + p.stage_durations[i]
            );
        }
        assert_eq!(p.critical_stage, 2);
        assert_eq!(p.pre_critical_time, stage_duration(3, 1, 12).unwrap());
    }

    #[test]
    fn closed_forms_agree_on_grid() {
        for d in 2..=5 {
            for i in 0..=5 {
                for y in [6, 12, 18] {
                    assert_eq!(
                        stage_duration(d, i, y).unwrap(),
                        closed_form::stage_duration(d, i, y).unwrap()
                    );
                }
            }
        }
    }
}
