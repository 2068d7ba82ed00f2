//! Synchronous round scheduler for two agents.
//!
//! Round semantics: agent 1 wakes at round 0 and agent 2 at round `delay`.
//! During round `t` every awake agent not yet halted consumes one action;
//! a sleeping agent occupies its start node. Positions are compared once all
//! moves of the round are applied, so the meeting round is the number of
//! completed rounds since agent 1 woke. Agents that swap across an edge in
//! the same round do not meet.

use std::collections::HashSet;
use std::io::Write;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::agent_programs::{
    Action, AgentProgram, Algorithm, Observation, ProcTag, Procedure, Variant,
};
use crate::label_codec::{CodecError, Label};
use crate::tree_model::{NodeRef, TreeError, TreeModel};

#[derive(Debug, Error)]
pub enum SimError {
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Codec(#[from] CodecError),
    #[error("trace output failed: {0}")]
    Io(#[from] std::io::Error),
}

/// Full description of one rendezvous experiment.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub tree: TreeModel,
    pub v1: NodeRef,
    pub v2: NodeRef,
    pub l1: Label,
    pub l2: Label,
    pub algorithm: Algorithm,
    pub variant: Variant,
    /// Rounds between the wake-ups of agent 1 and agent 2.
    pub delay: u64,
    pub horizon: u64,
    /// Allows a non-zero delay for the oriented algorithms.
    pub counterexample_probe: bool,
}

impl Scenario {
    pub fn distance(&self) -> usize {
        self.v1.distance(&self.v2)
    }

    pub fn validate(&self) -> Result<(), SimError> {
        let bad = |msg: String| Err(SimError::InvalidScenario(msg));
        if self.l1 == self.l2 {
            return bad(format!("labels must differ (both {})", self.l1));
        }
        if self.v1 == self.v2 {
            return bad(format!("start nodes must differ (both {})", self.v1));
        }
        self.tree.validate(&self.v1)?;
        self.tree.validate(&self.v2)?;
        match (self.algorithm, &self.tree) {
            (Algorithm::Urt { degree }, TreeModel::Unoriented(t)) if t.degree_param() != degree => {
                return bad(format!(
                    "URT degree {degree} does not match tree degree {}",
                    t.degree_param()
                ));
            }
            (Algorithm::Urt { .. }, _) => {}
            (_, TreeModel::Unoriented(_)) => {
                return bad("oriented algorithms need an oriented tree".into());
            }
            (Algorithm::Kbd { dstar: 0 }, _) => return bad("D* must be >= 1".into()),
            _ => {}
        }
        if self.algorithm.is_oriented() && self.delay != 0 && !self.counterexample_probe {
            return bad("oriented algorithms require simultaneous start".into());
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Termination {
    Met,
    HorizonExceeded,
}

/// Recording switches for a run.
#[derive(Clone, Copy, Debug, Default)]
pub struct RunOptions {
    pub record_history: bool,
    pub record_trace: bool,
}

/// One (round, agent) trace record.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub round: u64,
    pub agent: u8,
    /// Position after the action.
    pub node: NodeRef,
    pub action: String,
    pub stage: Option<u64>,
    pub bit: Option<u64>,
    pub proc: ProcTag,
}

#[derive(Clone, Debug)]
pub struct SimOutcome {
    pub met: bool,
    pub termination: Termination,
    pub meeting_round: Option<u64>,
    pub meeting_node: Option<NodeRef>,
    /// Rounds simulated.
    pub rounds: u64,
    /// Position of each agent after every completed round, index 0 being
    /// the initial position. Empty unless requested.
    pub history: [Vec<NodeRef>; 2],
    /// Global round at which each stage of each agent began.
    pub stage_starts: [Vec<u64>; 2],
    pub moves: [u64; 2],
    pub trace: Vec<TraceRecord>,
}

struct AgentState {
    program: AgentProgram,
    position: NodeRef,
    wake: u64,
    entry: Option<u32>,
}

impl AgentState {
    fn observe(&self, tree: &TreeModel) -> Observation {
        Observation {
            degree: tree.degree_unchecked(&self.position),
            entry_port: self.entry,
            at_root: tree.is_root(&self.position),
        }
    }
}

/// Step-by-step simulation shared by [`run`] and [`replay`].
struct Simulation<'a> {
    scenario: &'a Scenario,
    agents: [AgentState; 2],
    round: u64,
}

impl<'a> Simulation<'a> {
    fn new(scenario: &'a Scenario) -> Result<Self, SimError> {
        scenario.validate()?;
        let make = |label: Label, position: &NodeRef, wake: u64| -> Result<AgentState, SimError> {
            Ok(AgentState {
                program: AgentProgram::with_variant(scenario.algorithm, label, scenario.variant)?,
                position: position.clone(),
                wake,
                entry: None,
            })
        };
        Ok(Self {
            scenario,
            agents: [
                make(scenario.l1, &scenario.v1, 0)?,
                make(scenario.l2, &scenario.v2, scenario.delay)?,
            ],
            round: 0,
        })
    }

    fn co_located(&self) -> bool {
        self.agents[0].position == self.agents[1].position
    }

    /// Plays round `self.round` and advances the clock.
    fn play_round(&mut self, trace: Option<&mut Vec<TraceRecord>>) -> Result<(), SimError> {
        let tree = &self.scenario.tree;
        let t = self.round;
        let mut trace = trace;
        for (index, agent) in self.agents.iter_mut().enumerate() {
            if t < agent.wake {
                continue;
            }
            let obs = agent.observe(tree);
            let action = agent.program.step(&obs);
            agent.entry = match action {
                Action::MovePort(port) => Some(tree.traverse(&mut agent.position, port)?),
                Action::Idle => None,
            };
            if let Some(records) = trace.as_deref_mut() {
                let info = agent.program.last_info();
                records.push(TraceRecord {
                    round: t,
                    agent: index as u8 + 1,
                    node: agent.position.clone(),
                    action: action.to_string(),
                    stage: info.stage,
                    bit: info.bit,
                    proc: info.proc,
                });
            }
        }
        self.round += 1;
        Ok(())
    }

    fn stage_starts(&self) -> [Vec<u64>; 2] {
        let global = |a: &AgentState| {
            a.program
                .stage_starts()
                .iter()
                .map(|s| s + a.wake)
                .collect()
        };
        [global(&self.agents[0]), global(&self.agents[1])]
    }

    fn moves(&self) -> [u64; 2] {
        [
            self.agents[0].program.moves(),
            self.agents[1].program.moves(),
        ]
    }

    fn positions(&self) -> [NodeRef; 2] {
        [
            self.agents[0].position.clone(),
            self.agents[1].position.clone(),
        ]
    }
}

/// Runs until the agents meet or the horizon is reached.
pub fn run(scenario: &Scenario) -> Result<SimOutcome, SimError> {
    run_with(scenario, RunOptions::default())
}

pub fn run_with(scenario: &Scenario, options: RunOptions) -> Result<SimOutcome, SimError> {
    let mut sim = Simulation::new(scenario)?;
    let mut history: [Vec<NodeRef>; 2] = Default::default();
    let mut trace = Vec::new();
    let record = |sim: &Simulation, history: &mut [Vec<NodeRef>; 2]| {
        if options.record_history {
            for (h, p) in history.iter_mut().zip(sim.positions()) {
                h.push(p);
            }
        }
    };
    record(&sim, &mut history);
    let mut met = sim.co_located();
    while !met && sim.round < scenario.horizon {
        sim.play_round(options.record_trace.then_some(&mut trace))?;
        record(&sim, &mut history);
        met = sim.co_located();
    }
    let meeting_node = met.then(|| sim.agents[0].position.clone());
    Ok(SimOutcome {
        met,
        termination: if met {
            Termination::Met
        } else {
            Termination::HorizonExceeded
        },
        meeting_round: met.then_some(sim.round),
        meeting_node,
        rounds: sim.round,
        history,
        stage_starts: sim.stage_starts(),
        moves: sim.moves(),
        trace,
    })
}

/// Both trajectories for `round_limit` rounds, ignoring meetings.
#[derive(Clone, Debug)]
pub struct Replay {
    /// Positions after each round; index 0 is the initial position.
    pub positions: [Vec<NodeRef>; 2],
    pub moves: [u64; 2],
    pub stage_starts: [Vec<u64>; 2],
    pub trace: Vec<TraceRecord>,
}

pub fn replay(scenario: &Scenario, round_limit: u64) -> Result<Replay, SimError> {
    let mut sim = Simulation::new(scenario)?;
    let mut positions: [Vec<NodeRef>; 2] = Default::default();
    let mut trace = Vec::new();
    for (h, p) in positions.iter_mut().zip(sim.positions()) {
        h.push(p);
    }
    while sim.round < round_limit {
        sim.play_round(Some(&mut trace))?;
        for (h, p) in positions.iter_mut().zip(sim.positions()) {
            h.push(p);
        }
    }
    Ok(Replay {
        positions,
        moves: sim.moves(),
        stage_starts: sim.stage_starts(),
        trace,
    })
}

/// Writes trace records as JSON lines.
pub fn write_trace<W: Write>(records: &[TraceRecord], mut out: W) -> Result<(), SimError> {
    for record in records {
        serde_json::to_writer(&mut out, record).map_err(std::io::Error::from)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

/// Result of driving a single procedure from one node.
#[derive(Clone, Debug)]
pub struct ProcedureRun {
    pub moves: u64,
    pub rounds: u64,
    pub visited: HashSet<NodeRef>,
    pub end: NodeRef,
}

/// Drives `procedure` alone from `start` until it finishes or `max_rounds`
/// pass. Ignores roots.
pub fn run_procedure(
    tree: &TreeModel,
    start: &NodeRef,
    mut procedure: Procedure,
    max_rounds: u64,
) -> Result<ProcedureRun, SimError> {
    tree.validate(start)?;
    let mut position = start.clone();
    let mut visited = HashSet::from([position.clone()]);
    let mut entry = None;
    let mut moves = 0;
    let mut rounds = 0;
    while rounds < max_rounds {
        let obs = Observation {
            degree: tree.degree_unchecked(&position),
            entry_port: entry,
            at_root: tree.is_root(&position),
        };
        let Some(action) = procedure.next_action(&obs) else {
            break;
        };
        rounds += 1;
        entry = match action {
            Action::MovePort(port) => {
                moves += 1;
                let e = tree.traverse(&mut position, port)?;
                visited.insert(position.clone());
                Some(e)
            }
            Action::Idle => None,
        };
    }
    Ok(ProcedureRun {
        moves,
        rounds,
        visited,
        end: position,
    })
}
