//! Per-round step machines for the four rendezvous algorithms.
//!
//! An [`AgentProgram`] is fed one [`Observation`] per round and answers with
//! one [`Action`]. Observations carry only what an agent may sense: the
//! degree of its node, the port it entered by (if it just moved), and, in
//! oriented trees, whether the node is the root. Programs never see node
//! identities; backtracking replays recorded entry ports.
//!
//! Programs are built from four procedures:
//!
//! - `Act(r)`: closed depth-limited DFS of the ball of radius `r`, ports in
//!   increasing order, `a(r)` moves.
//! - `Pass(t)`: stay idle for `t` rounds.
//! - `Up(x)`: up to `x` moves through port 0.
//! - `Up-and-Down(x)`: `Up(x)` then retrace the same edges back down.
//!
//! In oriented trees, observing the root halts the program for good.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::label_codec::{self, AdaptStar, BitString, CodecError, Label};
use crate::schedule_math;

/// What an agent senses at the start of a round.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Observation {
    pub degree: u32,
    /// Port of entry if the agent moved in the previous round.
    pub entry_port: Option<u32>,
    pub at_root: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Action {
    MovePort(u32),
    Idle,
}

impl Action {
    pub fn is_move(self) -> bool {
        matches!(self, Action::MovePort(_))
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Action::MovePort(p) => write!(f, "move({p})"),
            Action::Idle => f.write_str("idle"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlgorithmKind {
    Urt,
    Kbl,
    Kbd,
    Nek,
}

impl fmt::Display for AlgorithmKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AlgorithmKind::Urt => "urt",
            AlgorithmKind::Kbl => "kbl",
            AlgorithmKind::Kbd => "kbd",
            AlgorithmKind::Nek => "nek",
        })
    }
}

impl FromStr for AlgorithmKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "urt" => Ok(AlgorithmKind::Urt),
            "kbl" => Ok(AlgorithmKind::Kbl),
            "kbd" => Ok(AlgorithmKind::Kbd),
            "nek" => Ok(AlgorithmKind::Nek),
            other => Err(format!("unknown algorithm {other:?}")),
        }
    }
}

/// Algorithm together with the knowledge it is given.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algorithm {
    /// Unoriented regular trees of degree `degree`.
    Urt { degree: u32 },
    /// Oriented trees, known bound `lstar` on the label space.
    Kbl { lstar: u64 },
    /// Oriented trees, known bound `dstar` on the initial distance.
    Kbd { dstar: u64 },
    /// Oriented trees, no extra knowledge.
    Nek,
}

impl Algorithm {
    pub fn kind(&self) -> AlgorithmKind {
        match self {
            Algorithm::Urt { .. } => AlgorithmKind::Urt,
            Algorithm::Kbl { .. } => AlgorithmKind::Kbl,
            Algorithm::Kbd { .. } => AlgorithmKind::Kbd,
            Algorithm::Nek => AlgorithmKind::Nek,
        }
    }

    pub fn is_oriented(&self) -> bool {
        !matches!(self, Algorithm::Urt { .. })
    }
}

/// Deliberately broken program variants used to check that the deadline
/// suites can fail.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    #[default]
    Faithful,
    /// Up-and-Down idles instead of retracing its path.
    NoBacktrack,
    /// The raw binary label replaces the algorithm's label code.
    RawBinaryLabel,
}

/// Which procedure produced an action.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProcTag {
    Act,
    Pass,
    Up,
    UpAndDown,
    /// Idle after a completed single-pass schedule.
    Done,
    /// Idle at the root.
    Halted,
}

impl fmt::Display for ProcTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProcTag::Act => "act",
            ProcTag::Pass => "pass",
            ProcTag::Up => "up",
            ProcTag::UpAndDown => "up-and-down",
            ProcTag::Done => "done",
            ProcTag::Halted => "halted",
        })
    }
}

/// Schedule coordinates of the procedure currently running.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepInfo {
    pub stage: Option<u64>,
    /// 1-based bit index within the stage (the global bit index for NEK).
    pub bit: Option<u64>,
    pub proc: ProcTag,
}

#[derive(Clone, Copy, Debug)]
struct Frame {
    entry: Option<u32>,
    next_port: u32,
}

/// Closed DFS of `B(v, r)`. At the anchor all ports are tried in increasing
/// order; at interior nodes the entry port is skipped and used last to
/// return; at depth `r` the walk turns back at once.
#[derive(Clone, Debug)]
pub struct DfsWalk {
    radius: u64,
    frames: Vec<Frame>,
    started: bool,
    descending: bool,
}

impl DfsWalk {
    fn new(radius: u64) -> Self {
        Self {
            radius,
            frames: Vec::new(),
            started: false,
            descending: false,
        }
    }

    fn next_action(&mut self, obs: &Observation) -> Option<Action> {
        if self.descending {
            self.descending = false;
            self.frames.push(Frame {
                entry: obs.entry_port,
                next_port: 0,
            });
        }
        if !self.started {
            self.started = true;
            if self.radius == 0 {
                return None;
            }
            self.frames.push(Frame {
                entry: None,
                next_port: 0,
            });
        }
        let depth = self.frames.len().checked_sub(1)? as u64;
        if depth == self.radius {
            let frame = self.frames.pop().expect("frame at depth r");
            return frame.entry.map(Action::MovePort);
        }
        let top = self.frames.last_mut().expect("non-empty stack");
        let next = (top.next_port..obs.degree).find(|&p| Some(p) != top.entry);
        match next {
            Some(port) => {
                top.next_port = port + 1;
                self.descending = true;
                Some(Action::MovePort(port))
            }
            None => {
                let frame = self.frames.pop().expect("non-empty stack");
                frame.entry.map(Action::MovePort)
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct UpAndDownWalk {
    up_left: u64,
    down_idle_left: u64,
    entries: Vec<u32>,
    climbing: bool,
    backtrack: bool,
}

impl UpAndDownWalk {
    fn next_action(&mut self, obs: &Observation) -> Option<Action> {
        if self.climbing {
            self.climbing = false;
            self.entries
                .push(obs.entry_port.expect("entry port observed after a move"));
        }
        if self.up_left > 0 {
            self.up_left -= 1;
            self.climbing = true;
            return Some(Action::MovePort(0));
        }
        if self.backtrack {
            self.entries.pop().map(Action::MovePort)
        } else if self.down_idle_left > 0 {
            self.down_idle_left -= 1;
            Some(Action::Idle)
        } else {
            None
        }
    }
}

/// One sub-program. `next_action` returns `None` once it has finished; a
/// zero-length procedure finishes without consuming a round.
#[derive(Clone, Debug)]
pub enum Procedure {
    Act(DfsWalk),
    Pass { remaining: u64 },
    Up { remaining: u64 },
    UpAndDown(UpAndDownWalk),
    IdleForever,
}

impl Procedure {
    pub fn act(radius: u64) -> Self {
        Procedure::Act(DfsWalk::new(radius))
    }

    pub fn pass(rounds: u64) -> Self {
        Procedure::Pass { remaining: rounds }
    }

    pub fn up(x: u64) -> Self {
        Procedure::Up { remaining: x }
    }

    pub fn up_and_down(x: u64) -> Self {
        Self::up_and_down_variant(x, true)
    }

    fn up_and_down_variant(x: u64, backtrack: bool) -> Self {
        Procedure::UpAndDown(UpAndDownWalk {
            up_left: x,
            down_idle_left: if backtrack { 0 } else { x },
            entries: Vec::new(),
            climbing: false,
            backtrack,
        })
    }

    pub fn tag(&self) -> ProcTag {
        match self {
            Procedure::Act(_) => ProcTag::Act,
            Procedure::Pass { .. } => ProcTag::Pass,
            Procedure::Up { .. } => ProcTag::Up,
            Procedure::UpAndDown(_) => ProcTag::UpAndDown,
            Procedure::IdleForever => ProcTag::Done,
        }
    }

    pub fn next_action(&mut self, obs: &Observation) -> Option<Action> {
        match self {
            Procedure::Act(walk) => walk.next_action(obs),
            Procedure::Pass { remaining } | Procedure::Up { remaining } if *remaining == 0 => None,
            Procedure::Pass { remaining } => {
                *remaining -= 1;
                Some(Action::Idle)
            }
            Procedure::Up { remaining } => {
                *remaining -= 1;
                Some(Action::MovePort(0))
            }
            Procedure::UpAndDown(walk) => walk.next_action(obs),
            Procedure::IdleForever => Some(Action::Idle),
        }
    }
}

/// `ACT(v, r)`.
pub fn act_dfs(radius: u64) -> Procedure {
    Procedure::act(radius)
}

/// `Exec(d, b, i)`: two activity cycles for bit 1, two passivity cycles for
/// bit 0.
pub fn exec_bit(d: u64, bit: bool, stage: u64) -> Vec<Procedure> {
    let radius = schedule_math::stage_radius(d, stage).expect("stage radius fits in u64");
    if bit {
        vec![Procedure::act(radius), Procedure::act(radius)]
    } else {
        let rounds = schedule_math::bit_duration(d, stage).expect("bit duration fits in u64");
        vec![Procedure::pass(rounds)]
    }
}

/// `Up(x)`.
pub fn up(x: u64) -> Procedure {
    Procedure::up(x)
}

/// `Up-and-Down(x)`.
pub fn up_and_down(x: u64) -> Procedure {
    Procedure::up_and_down(x)
}

/// Position of a schedule between procedures.
#[derive(Clone, Debug)]
enum Cursor {
    /// Stage `stage`, 1-based `bit`, `half` = activity cycle within a 1-bit.
    Urt {
        stage: u64,
        bit: u64,
        half: u8,
    },
    /// `bit == 0` means the opening `Up` of the stage is next.
    Kbl {
        stage: u64,
        bit: u64,
    },
    Kbd {
        bit: u64,
    },
    /// `up_done` tells whether `Up(j)` of bit `j` already ran.
    Nek {
        bit: u64,
        up_done: bool,
    },
}

/// Step machine for one agent running one algorithm with one label.
#[derive(Clone, Debug)]
pub struct AgentProgram {
    algorithm: Algorithm,
    label: Label,
    variant: Variant,
    bits: BitString,
    adapt_star: Option<AdaptStar>,
    cursor: Cursor,
    current: Option<Procedure>,
    info: StepInfo,
    halted: bool,
    local_round: u64,
    moves: u64,
    stage_starts: Vec<u64>,
}

impl AgentProgram {
    pub fn new(algorithm: Algorithm, label: Label) -> Result<Self, CodecError> {
        Self::with_variant(algorithm, label, Variant::Faithful)
    }

    pub fn with_variant(
        algorithm: Algorithm,
        label: Label,
        variant: Variant,
    ) -> Result<Self, CodecError> {
        let raw = variant == Variant::RawBinaryLabel;
        let bits = match algorithm {
            _ if raw => label_codec::binary_rep(label),
            Algorithm::Urt { .. } => label_codec::trans(label),
            Algorithm::Kbl { lstar } => label_codec::pad(label, lstar)?,
            Algorithm::Kbd { .. } | Algorithm::Nek => label_codec::adapt(label),
        };
        let adapt_star = matches!(algorithm, Algorithm::Nek).then(|| AdaptStar::new(label));
        let cursor = match algorithm {
            Algorithm::Urt { .. } => Cursor::Urt {
                stage: 0,
                bit: 1,
                half: 0,
            },
            Algorithm::Kbl { .. } => Cursor::Kbl { stage: 0, bit: 0 },
            Algorithm::Kbd { .. } => Cursor::Kbd { bit: 0 },
            Algorithm::Nek => Cursor::Nek {
                bit: 1,
                up_done: false,
            },
        };
        Ok(Self {
            algorithm,
            label,
            variant,
            bits,
            adapt_star,
            cursor,
            current: None,
            info: StepInfo {
                stage: None,
                bit: None,
                proc: ProcTag::Pass,
            },
            halted: false,
            local_round: 0,
            moves: 0,
            stage_starts: Vec::new(),
        })
    }

    pub fn algorithm(&self) -> Algorithm {
        self.algorithm
    }

    pub fn label(&self) -> Label {
        self.label
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    /// The finite bit string the schedule reads (one period for NEK).
    pub fn label_bits(&self) -> &BitString {
        &self.bits
    }

    pub fn is_halted(&self) -> bool {
        self.halted
    }

    pub fn rounds_elapsed(&self) -> u64 {
        self.local_round
    }

    pub fn moves(&self) -> u64 {
        self.moves
    }

    /// Local round (0 = wake round) at which each stage started. NEK counts
    /// each bit as a stage.
    pub fn stage_starts(&self) -> &[u64] {
        &self.stage_starts
    }

    /// Schedule coordinates of the most recent action.
    pub fn last_info(&self) -> StepInfo {
        self.info
    }

    /// Consumes one round.
    pub fn step(&mut self, obs: &Observation) -> Action {
        let action = self.decide(obs);
        self.local_round += 1;
        if action.is_move() {
            self.moves += 1;
        }
        action
    }

    fn decide(&mut self, obs: &Observation) -> Action {
        if self.halted {
            return Action::Idle;
        }
        if self.algorithm.is_oriented() && obs.at_root {
            self.halted = true;
            self.current = None;
            self.info.proc = ProcTag::Halted;
            return Action::Idle;
        }
        loop {
            if let Some(action) = self.current.as_mut().and_then(|p| p.next_action(obs)) {
                return action;
            }
            self.advance();
        }
    }

    fn mark_stage(&mut self, stage: u64) {
        while self.stage_starts.len() as u64 <= stage {
            self.stage_starts.push(self.local_round);
        }
    }

    fn bit(&self, j: u64) -> bool {
        self.bits.bit(j as usize).expect("bit index within label")
    }

    fn set(&mut self, procedure: Procedure, stage: Option<u64>, bit: Option<u64>) {
        self.info = StepInfo {
            stage,
            bit,
            proc: procedure.tag(),
        };
        self.current = Some(procedure);
    }

    fn up_and_down_proc(&self, x: u64) -> Procedure {
        Procedure::up_and_down_variant(x, self.variant != Variant::NoBacktrack)
    }

    /// Installs the next procedure of the schedule.
    fn advance(&mut self) {
        let k = self.bits.len() as u64;
        match self.cursor.clone() {
            Cursor::Urt { stage, bit, half } => {
                let Algorithm::Urt { degree } = self.algorithm else {
                    unreachable!("URT cursor on another algorithm")
                };
                let d = u64::from(degree);
                if bit == 1 && half == 0 {
                    self.mark_stage(stage);
                }
                let b = self.bit(bit);
                let procedure = if b {
                    let radius = schedule_math::stage_radius(d, stage).expect("radius fits");
                    Procedure::act(radius)
                } else {
                    Procedure::pass(schedule_math::bit_duration(d, stage).expect("duration fits"))
                };
                let finished_bit = !b || half == 1;
                self.cursor = match (finished_bit, bit == k) {
                    (false, _) => Cursor::Urt {
                        stage,
                        bit,
                        half: 1,
                    },
                    (true, false) => Cursor::Urt {
                        stage,
                        bit: bit + 1,
                        half: 0,
                    },
                    (true, true) => Cursor::Urt {
                        stage: stage + 1,
                        bit: 1,
                        half: 0,
                    },
                };
                self.set(procedure, Some(stage), Some(bit));
            }
            Cursor::Kbl { stage, bit } => {
                let range = 1u64 << stage;
                if bit == 0 {
                    self.mark_stage(stage);
                    self.cursor = Cursor::Kbl { stage, bit: 1 };
                    self.set(Procedure::up(range), Some(stage), None);
                } else {
                    let procedure = if self.bit(bit) {
                        self.up_and_down_proc(range)
                    } else {
                        Procedure::pass(2 * range)
                    };
                    self.cursor = if bit == k {
                        Cursor::Kbl {
                            stage: stage + 1,
                            bit: 0,
                        }
                    } else {
                        Cursor::Kbl {
                            stage,
                            bit: bit + 1,
                        }
                    };
                    self.set(procedure, Some(stage), Some(bit));
                }
            }
            Cursor::Kbd { bit } => {
                let Algorithm::Kbd { dstar } = self.algorithm else {
                    unreachable!("KBD cursor on another algorithm")
                };
                if bit == 0 {
                    self.mark_stage(0);
                    self.cursor = Cursor::Kbd { bit: 1 };
                    self.set(Procedure::up(dstar), None, None);
                } else if bit <= k {
                    let procedure = if self.bit(bit) {
                        self.up_and_down_proc(dstar)
                    } else {
                        Procedure::pass(2 * dstar)
                    };
                    self.cursor = Cursor::Kbd { bit: bit + 1 };
                    self.set(procedure, None, Some(bit));
                } else if bit == k + 1 {
                    self.cursor = Cursor::Kbd { bit: k + 2 };
                    self.set(Procedure::up(dstar), None, None);
                } else {
                    self.set(Procedure::IdleForever, None, None);
                }
            }
            Cursor::Nek { bit, up_done } => {
                if !up_done {
                    self.mark_stage(bit);
                    self.cursor = Cursor::Nek { bit, up_done: true };
                    self.set(Procedure::up(bit), Some(bit), Some(bit));
                } else {
                    let b = match &self.adapt_star {
                        Some(star) if self.variant != Variant::RawBinaryLabel => star.bit(bit),
                        _ => self
                            .bits
                            .bit(((bit - 1) % k + 1) as usize)
                            .expect("in range"),
                    };
                    let procedure = if b {
                        self.up_and_down_proc(bit)
                    } else {
                        Procedure::pass(2 * bit)
                    };
                    self.cursor = Cursor::Nek {
                        bit: bit + 1,
                        up_done: false,
                    };
                    self.set(procedure, Some(bit), Some(bit));
                }
            }
        }
    }
}

/// `URT` program for degree `d`.
pub fn urt_program(d: u32, label: Label) -> AgentProgram {
    AgentProgram::new(Algorithm::Urt { degree: d }, label).expect("trans is total")
}

/// Known-Bound-on-L program.
pub fn kbl_program(label: Label, lstar: u64) -> Result<AgentProgram, CodecError> {
    AgentProgram::new(Algorithm::Kbl { lstar }, label)
}

/// Known-Bound-on-D program.
pub fn kbd_program(label: Label, dstar: u64) -> AgentProgram {
    AgentProgram::new(Algorithm::Kbd { dstar }, label).expect("adapt is total")
}

/// No-Extra-Knowledge program.
pub fn nek_program(label: Label) -> AgentProgram {
    AgentProgram::new(Algorithm::Nek, label).expect("adapt is total")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l(v: u64) -> Label {
        Label::new(v).unwrap()
    }

    fn idle_obs(degree: u32) -> Observation {
        Observation {
            degree,
            entry_port: None,
            at_root: false,
        }
    }

    /// Drives a program on an abstract line of depths: port 0 moves up and
    /// any other port moves down. Returns depth after each round.
    fn drive_depths(program: &mut AgentProgram, start_depth: u64, rounds: usize) -> Vec<u64> {
        let mut depth = start_depth;
        let mut obs = Observation {
            degree: 3,
            entry_port: None,
            at_root: depth == 0,
        };
        let mut out = Vec::new();
        for _ in 0..rounds {
            match program.step(&obs) {
                Action::MovePort(0) => {
                    depth -= 1;
                    obs.entry_port = Some(1);
                }
                Action::MovePort(_) => {
                    depth += 1;
                    obs.entry_port = Some(0);
                }
                Action::Idle => obs.entry_port = None,
            }
            obs.at_root = depth == 0;
            obs.degree = if depth == 0 { 2 } else { 3 };
            out.push(depth);
        }
        out
    }

    #[test]
    fn act_zero_radius_is_empty() {
        let mut p = act_dfs(0);
        assert_eq!(p.next_action(&idle_obs(3)), None);
    }

    #[test]
    fn act_on_line_radius_one() {
        // Symmetric line: entry port always equals exit port.
        let mut p = act_dfs(1);
        let mut obs = idle_obs(2);
        let mut seq = Vec::new();
        while let Some(a) = p.next_action(&obs) {
            seq.push(a);
            obs.entry_port = match a {
                Action::MovePort(q) => Some(q),
                Action::Idle => None,
            };
        }
        use Action::MovePort as M;
        assert_eq!(seq, vec![M(0), M(0), M(1), M(1)]);
    }

    #[test]
    fn exec_bit_shapes() {
        let pass = exec_bit(3, false, 1);
        assert!(matches!(
            pass.as_slice(),
            [Procedure::Pass { remaining: 36 }]
        ));
        assert_eq!(exec_bit(2, true, 0).len(), 2);
        let mut zero = exec_bit(4, true, 0);
        assert!(zero
            .iter_mut()
            .all(|p| p.next_action(&idle_obs(4)).is_none()));
        let mut zero_pass = exec_bit(4, false, 0);
        assert!(zero_pass[0].next_action(&idle_obs(4)).is_none());
    }

    #[test]
    fn up_stops_at_root() {
        let mut program = nek_program(l(1));
        let depths = drive_depths(&mut program, 2, 20);
        // bit 1: Up(1) -> depth 1; then Up-and-Down(1) reaches the root.
        assert_eq!(&depths[..2], &[1, 0]);
        assert!(depths[2..].iter().all(|&d| d == 0));
        assert!(program.is_halted());
    }

    #[test]
    fn up_and_down_returns() {
        let mut p = up_and_down(2);
        let mut obs = Observation {
            degree: 3,
            entry_port: None,
            at_root: false,
        };
        let mut actions = Vec::new();
        let mut entries = [2u32, 1u32].into_iter();
        while let Some(a) = p.next_action(&obs) {
            actions.push(a);
            obs.entry_port = match a {
                Action::MovePort(0) => entries.next(),
                _ => Some(0),
            };
        }
        use Action::MovePort as M;
        assert_eq!(actions, vec![M(0), M(0), M(1), M(2)]);
    }

    #[test]
    fn urt_line_prefix() {
        let mut program = urt_program(2, l(1));
        let obs = idle_obs(2);
        let mut first = Vec::new();
        for _ in 0..8 {
            first.push(program.step(&obs));
        }
        assert!(first.iter().all(|a| *a == Action::Idle));
        assert_eq!(program.last_info().proc, ProcTag::Pass);
        assert_eq!(program.step(&obs), Action::MovePort(0));
        assert_eq!(program.last_info().bit, Some(2));
    }

    #[test]
    fn urt_stage_starts_degree_three() {
        let mut program = urt_program(3, l(1));
        let mut obs = idle_obs(3);
        for _ in 0..=216 {
            let a = program.step(&obs);
            obs.entry_port = match a {
                // regular tree with symmetric ports
                Action::MovePort(p) => Some(p),
                Action::Idle => None,
            };
        }
        assert_eq!(program.stage_starts(), &[0, 0, 216]);
    }

    #[test]
    fn kbl_stage_durations() {
        let mut program = kbl_program(l(3), 4).unwrap();
        drive_depths(&mut program, 1000, 13 + 26 + 52 + 1);
        assert_eq!(program.stage_starts(), &[0, 13, 39, 91]);
    }

    #[test]
    fn kbl_halts_from_depth_one() {
        let mut program = kbl_program(l(2), 4).unwrap();
        let depths = drive_depths(&mut program, 1, 30);
        assert!(depths.iter().all(|&d| d == 0));
        assert!(program.is_halted());
        assert_eq!(program.moves(), 1);
    }

    #[test]
    fn kbd_single_pass_length() {
        let mut program = kbd_program(l(1), 3);
        let depths = drive_depths(&mut program, 100, 60);
        assert_eq!(depths[53], 94);
        assert_eq!(program.last_info().proc, ProcTag::Done);
        assert!(depths[54..].iter().all(|&d| d == 94));
        let mut again = kbd_program(l(1), 3);
        assert_eq!(drive_depths(&mut again, 100, 60), depths);
    }

    #[test]
    fn nek_bit_costs() {
        let mut program = nek_program(l(5));
        let t = 12u64;
        drive_depths(&mut program, 10_000, (3 * t * (t + 1) / 2 + 1) as usize);
        let starts = program.stage_starts();
        for j in 1..=t {
            assert_eq!(starts[j as usize], 3 * j * (j - 1) / 2, "bit {j}");
        }
        assert_eq!(starts.len() as u64, t + 2);
    }

    #[test]
    fn nek_first_bit_for_label_one() {
        let mut program = nek_program(l(1));
        let depths = drive_depths(&mut program, 50, 3);
        assert_eq!(depths, vec![49, 48, 49]);
    }

    #[test]
    fn no_backtrack_variant_stays_up() {
        let mut program =
            AgentProgram::with_variant(Algorithm::Nek, l(1), Variant::NoBacktrack).unwrap();
        let depths = drive_depths(&mut program, 50, 3);
        assert_eq!(depths, vec![49, 48, 48]);
    }
}
