//! Parameter sweeps: grid expansion, symbolic delay resolution, parallel
//! execution and CSV reports.
//!
//! Grid points are independent and run on the rayon pool; results are
//! collected in grid order, so the report does not depend on scheduling.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::deadlines;
use super::HarnessError;
use crate::agent_programs::{Algorithm, AlgorithmKind, Variant};
use crate::label_codec::{self, Label};
use crate::schedule_math;
use crate::sim_engine::{self, Scenario, SimOutcome};
use crate::tree_model::{
    place_oriented, place_unoriented, DegreeGen, LabelingMode, NodeRef, OrientedTree, TreeError,
    TreeModel, UnorientedRegularTree,
};

/// Delay thresholds named after the critical-stage quantities of agent 1:
/// `a*` is `a(r_{i*})` and `alpha` the time before its critical stage.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DelayMarker {
    AStar,
    ThreeAStarPlusOne,
    EightAStarPlusOne,
    AlphaPlusThreeAStarPlusFive,
}

impl DelayMarker {
    pub const ALL: [DelayMarker; 4] = [
        DelayMarker::AStar,
        DelayMarker::ThreeAStarPlusOne,
        DelayMarker::EightAStarPlusOne,
        DelayMarker::AlphaPlusThreeAStarPlusFive,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            DelayMarker::AStar => "a*",
            DelayMarker::ThreeAStarPlusOne => "3a*+1",
            DelayMarker::EightAStarPlusOne => "8a*+1",
            DelayMarker::AlphaPlusThreeAStarPlusFive => "alpha+3a*+5",
        }
    }

    /// Resolves the marker for degree `d`, distance `distance` and agent 1's
    /// transformed-label length `y1`.
    pub fn resolve(self, d: u64, distance: u64, y1: u64) -> Result<u64, HarnessError> {
        let i_star = schedule_math::critical_stage(d, distance)?;
        let a_star = schedule_math::dfs_cost(d, schedule_math::stage_radius(d, i_star)?)?;
        Ok(match self {
            DelayMarker::AStar => a_star,
            DelayMarker::ThreeAStarPlusOne => 3 * a_star + 1,
            DelayMarker::EightAStarPlusOne => 8 * a_star + 1,
            DelayMarker::AlphaPlusThreeAStarPlusFive => {
                schedule_math::pre_critical_time(d, i_star, y1)? + 3 * a_star + 5
            }
        })
    }
}

/// A delay grid entry: literal rounds or a marker resolved per scenario.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DelaySpec {
    Rounds(u64),
    Marker(DelayMarker),
}

impl fmt::Display for DelaySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DelaySpec::Rounds(n) => write!(f, "{n}"),
            DelaySpec::Marker(m) => f.write_str(m.as_str()),
        }
    }
}

impl FromStr for DelaySpec {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if let Ok(n) = s.parse::<u64>() {
            return Ok(DelaySpec::Rounds(n));
        }
        DelayMarker::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .map(DelaySpec::Marker)
            .ok_or_else(|| HarnessError::Config(format!("unknown delay marker {s:?}")))
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum NumberOrText {
    Number(u64),
    Text(String),
}

impl<'de> Deserialize<'de> for DelaySpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        match NumberOrText::deserialize(deserializer)? {
            NumberOrText::Number(n) => Ok(DelaySpec::Rounds(n)),
            NumberOrText::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

impl Serialize for DelaySpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            DelaySpec::Rounds(n) => serializer.serialize_u64(*n),
            DelaySpec::Marker(m) => serializer.serialize_str(m.as_str()),
        }
    }
}

/// Distance bound given to KBD: a constant, or `factor * D + offset`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DstarSpec {
    Fixed(u64),
    Relative { factor: u64, offset: u64 },
}

impl DstarSpec {
    pub fn resolve(self, distance: u64) -> u64 {
        match self {
            DstarSpec::Fixed(n) => n,
            DstarSpec::Relative { factor, offset } => factor * distance + offset,
        }
    }
}

impl fmt::Display for DstarSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            DstarSpec::Fixed(n) => write!(f, "{n}"),
            DstarSpec::Relative { factor, offset } => {
                if factor != 1 {
                    write!(f, "{factor}")?;
                }
                f.write_str("D")?;
                if offset != 0 {
                    write!(f, "+{offset}")?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for DstarSpec {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || HarnessError::Config(format!("bad D* spec {s:?}"));
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if let Ok(n) = compact.parse::<u64>() {
            return Ok(DstarSpec::Fixed(n));
        }
        let (head, tail) = compact.split_once('D').ok_or_else(bad)?;
        let factor = if head.is_empty() {
            1
        } else {
            head.parse().map_err(|_| bad())?
        };
        let offset = match tail.strip_prefix('+') {
            Some(n) => n.parse().map_err(|_| bad())?,
            None if tail.is_empty() => 0,
            None => return Err(bad()),
        };
        Ok(DstarSpec::Relative { factor, offset })
    }
}

impl<'de> Deserialize<'de> for DstarSpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        match NumberOrText::deserialize(deserializer)? {
            NumberOrText::Number(n) => Ok(DstarSpec::Fixed(n)),
            NumberOrText::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

impl Serialize for DstarSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            DstarSpec::Fixed(n) => serializer.serialize_u64(*n),
            other => serializer.collect_str(other),
        }
    }
}

/// Oriented start configuration: closest common ancestor at depth `h`,
/// agents `k1` and `k2` below it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "[u32; 3]", into = "[u32; 3]")]
pub struct Placement {
    pub k1: u32,
    pub k2: u32,
    pub h: u32,
}

impl From<[u32; 3]> for Placement {
    fn from([k1, k2, h]: [u32; 3]) -> Self {
        Placement { k1, k2, h }
    }
}

impl From<Placement> for [u32; 3] {
    fn from(p: Placement) -> Self {
        [p.k1, p.k2, p.h]
    }
}

impl fmt::Display for Placement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "k1={}/k2={}/h={}", self.k1, self.k2, self.h)
    }
}

fn default_labelings() -> Vec<LabelingMode> {
    vec![LabelingMode::Seeded]
}

fn default_delays() -> Vec<DelaySpec> {
    vec![DelaySpec::Rounds(0)]
}

fn default_seeds() -> Vec<u64> {
    vec![0]
}

fn default_horizon_factor() -> u64 {
    4
}

/// Declarative experiment grid, loadable from TOML.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    #[serde(default)]
    pub name: String,
    pub algorithm: AlgorithmKind,
    #[serde(default)]
    pub variant: Variant,
    /// Unoriented: tree degrees.
    #[serde(default)]
    pub degrees: Vec<u32>,
    /// Unoriented: initial distances.
    #[serde(default)]
    pub distances: Vec<u32>,
    #[serde(default = "default_labelings")]
    pub labelings: Vec<LabelingMode>,
    /// Oriented: child-count generators.
    #[serde(default)]
    pub degree_gens: Vec<DegreeGen>,
    /// Oriented: `[k1, k2, h]` triples.
    #[serde(default)]
    pub placements: Vec<Placement>,
    /// Labels whose ordered distinct pairs are swept.
    #[serde(default)]
    pub labels: Vec<u64>,
    /// Explicit `[l1, l2]` pairs, used instead of `labels` when present.
    #[serde(default)]
    pub label_pairs: Vec<[u64; 2]>,
    /// Size `L` of the label space; defaults the label set to `1..=L`.
    #[serde(default)]
    pub label_space: Option<u64>,
    /// KBL: label-space bounds; labels default to `1..=L*`.
    #[serde(default)]
    pub lstar: Vec<u64>,
    /// KBD: distance bounds.
    #[serde(default)]
    pub dstar: Vec<DstarSpec>,
    #[serde(default = "default_delays")]
    pub delays: Vec<DelaySpec>,
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
    /// Horizon as a multiple of the deadline.
    #[serde(default = "default_horizon_factor")]
    pub horizon_factor: u64,
    /// Permits non-zero delays for oriented algorithms.
    #[serde(default)]
    pub counterexample_probe: bool,
}

impl SweepSpec {
    pub fn new(algorithm: AlgorithmKind) -> Self {
        SweepSpec {
            name: String::new(),
            algorithm,
            variant: Variant::Faithful,
            degrees: Vec::new(),
            distances: Vec::new(),
            labelings: default_labelings(),
            degree_gens: Vec::new(),
            placements: Vec::new(),
            labels: Vec::new(),
            label_pairs: Vec::new(),
            label_space: None,
            lstar: Vec::new(),
            dstar: Vec::new(),
            delays: default_delays(),
            seeds: default_seeds(),
            horizon_factor: default_horizon_factor(),
            counterexample_probe: false,
        }
    }

    pub fn from_toml(text: &str) -> Result<Self, HarnessError> {
        toml::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))
    }

    pub fn to_toml(&self) -> Result<String, HarnessError> {
        toml::to_string(self).map_err(|e| HarnessError::Config(e.to_string()))
    }

    fn label_pairs_up_to(
        &self,
        default_max: Option<u64>,
    ) -> Result<Vec<(Label, Label)>, HarnessError> {
        let raw: Vec<(u64, u64)> = if !self.label_pairs.is_empty() {
            self.label_pairs.iter().map(|&[a, b]| (a, b)).collect()
        } else {
            let labels: Vec<u64> = if !self.labels.is_empty() {
                self.labels.clone()
            } else if let Some(max) = self.label_space.or(default_max) {
                (1..=max).collect()
            } else {
                return Err(HarnessError::Config(
                    "no labels: set labels, label_pairs or label_space".into(),
                ));
            };
            let mut pairs = Vec::new();
            for &a in &labels {
                for &b in &labels {
                    if a != b {
                        pairs.push((a, b));
                    }
                }
            }
            pairs
        };
        raw.into_iter()
            .map(|(a, b)| {
                if a == b {
                    return Err(HarnessError::Config(format!(
                        "label pair ({a}, {b}) is not distinct"
                    )));
                }
                Ok((Label::new(a)?, Label::new(b)?))
            })
            .collect()
    }

    fn label_space_for(&self, pairs: &[(Label, Label)]) -> u64 {
        self.label_space
            .unwrap_or_else(|| {
                pairs
                    .iter()
                    .map(|(a, b)| a.get().max(b.get()))
                    .max()
                    .unwrap_or(2)
            })
            .max(2)
    }
}

/// One fully resolved grid point.
#[derive(Clone, Debug)]
pub struct GridPoint {
    pub index: usize,
    pub scenario: Scenario,
    pub seed: u64,
    pub delay_spec: DelaySpec,
    /// Labeling mode or degree generator.
    pub tree_desc: String,
    /// `L*=..` / `D*=..` / empty.
    pub knowledge: String,
    pub placement: Option<Placement>,
    pub deadline: u64,
}

impl GridPoint {
    pub fn scenario_id(&self) -> String {
        format!("{}-{:06}", self.scenario.algorithm.kind(), self.index)
    }
}

/// Report row for one scenario.
#[derive(Clone, Debug, PartialEq)]
pub struct DeadlineReport {
    pub scenario_id: String,
    pub algo: AlgorithmKind,
    pub shape: String,
    pub distance: u64,
    pub l1: u64,
    pub l2: u64,
    pub delay: u64,
    pub delay_marker: Option<String>,
    pub seed: u64,
    pub met: bool,
    pub meeting_round: Option<u64>,
    pub deadline: u64,
    pub pass: bool,
    pub moves: [u64; 2],
    pub margin: Option<f64>,
    pub tree: String,
    pub knowledge: String,
    pub placement: String,
}

#[derive(Serialize)]
struct CsvRow<'a> {
    scenario_id: &'a str,
    algo: String,
    d: &'a str,
    #[serde(rename = "D")]
    distance: u64,
    l1: u64,
    l2: u64,
    delta: u64,
    seed: u64,
    met: bool,
    meeting_round: Option<u64>,
    deadline: u64,
    pass: bool,
    moves_a1: u64,
    moves_a2: u64,
    delta_marker: &'a str,
    tree: &'a str,
    knowledge: &'a str,
    placement: &'a str,
}

/// Rows of one sweep, in grid order.
#[derive(Clone, Debug, Default)]
pub struct SweepReport {
    pub rows: Vec<DeadlineReport>,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &DeadlineReport> {
        self.rows.iter().filter(|r| !r.pass)
    }

    /// Largest observed/deadline ratio among meeting rows.
    pub fn worst_margin(&self) -> Option<f64> {
        self.rows
            .iter()
            .filter_map(|r| r.margin)
            .fold(None, |acc, m| Some(acc.map_or(m, |a: f64| a.max(m))))
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), HarnessError> {
        let mut writer = csv::Writer::from_writer(out);
        if self.rows.is_empty() {
            writer.write_record([
                "scenario_id",
                "algo",
                "d",
                "D",
                "l1",
                "l2",
                "delta",
                "seed",
                "met",
                "meeting_round",
                "deadline",
                "pass",
                "moves_a1",
                "moves_a2",
                "delta_marker",
                "tree",
                "knowledge",
                "placement",
            ])?;
        }
        for r in &self.rows {
            writer.serialize(CsvRow {
                scenario_id: &r.scenario_id,
                algo: r.algo.to_string(),
                d: &r.shape,
                distance: r.distance,
                l1: r.l1,
                l2: r.l2,
                delta: r.delay,
                seed: r.seed,
                met: r.met,
                meeting_round: r.meeting_round,
                deadline: r.deadline,
                pass: r.pass,
                moves_a1: r.moves[0],
                moves_a2: r.moves[1],
                delta_marker: r.delay_marker.as_deref().unwrap_or(""),
                tree: &r.tree,
                knowledge: &r.knowledge,
                placement: &r.placement,
            })?;
        }
        writer.flush()?;
        Ok(())
    }
}

const PLACEMENT_ATTEMPTS: u64 = 64;

/// Tree and starting nodes for `placement`. Some generated trees cannot host
/// a placement (a forced single-child path above `w`), in which case the tree
/// seed is advanced; the seed actually used is returned.
fn oriented_instance(
    generator: DegreeGen,
    placement: Placement,
    seed: u64,
) -> Result<(OrientedTree, NodeRef, NodeRef, u64), HarnessError> {
    let mut last = None;
    for attempt in 0..PLACEMENT_ATTEMPTS {
        let tree_seed = seed.wrapping_add(attempt.wrapping_mul(1_000_003));
        let tree = OrientedTree::new(generator, tree_seed)?;
        match place_oriented(&tree, placement.k1, placement.k2, placement.h, tree_seed) {
            Ok((v1, v2)) => return Ok((tree, v1, v2, tree_seed)),
            Err(e @ TreeError::InsufficientBranching { .. }) => last = Some(e),
            Err(e) => return Err(e.into()),
        }
    }
    Err(last.expect("at least one attempt").into())
}

fn horizon(deadline: u64, factor: u64) -> u64 {
    deadline.saturating_mul(factor.max(1))
}

/// Expands the grid in a fixed nested order.
pub fn expand(spec: &SweepSpec) -> Result<Vec<GridPoint>, HarnessError> {
    let mut points = Vec::new();
    match spec.algorithm {
        AlgorithmKind::Urt => expand_unoriented(spec, &mut points)?,
        _ => expand_oriented(spec, &mut points)?,
    }
    Ok(points)
}

fn expand_unoriented(spec: &SweepSpec, points: &mut Vec<GridPoint>) -> Result<(), HarnessError> {
    let pairs = spec.label_pairs_up_to(None)?;
    for &d in &spec.degrees {
        for &distance in &spec.distances {
            for &labeling in &spec.labelings {
                for &seed in &spec.seeds {
                    let tree = UnorientedRegularTree::new(d, labeling, seed)?;
                    let (v1, v2) = place_unoriented(&tree, distance, seed)?;
                    for &(l1, l2) in &pairs {
                        let y1 = label_codec::trans(l1).len() as u64;
                        for &delay_spec in &spec.delays {
                            let delay = match delay_spec {
                                DelaySpec::Rounds(n) => n,
                                DelaySpec::Marker(m) => {
                                    m.resolve(u64::from(d), u64::from(distance), y1)?
                                }
                            };
                            let deadline = deadlines::urt_deadline(
                                u64::from(d),
                                u64::from(distance),
                                l1,
                                l2,
                                delay,
                            )?;
                            points.push(GridPoint {
                                index: points.len(),
                                scenario: Scenario {
                                    tree: TreeModel::Unoriented(tree.clone()),
                                    v1: v1.clone(),
                                    v2: v2.clone(),
                                    l1,
                                    l2,
                                    algorithm: Algorithm::Urt { degree: d },
                                    variant: spec.variant,
                                    delay,
                                    horizon: horizon(deadline, spec.horizon_factor),
                                    counterexample_probe: spec.counterexample_probe,
                                },
                                seed,
                                delay_spec,
                                tree_desc: labeling.to_string(),
                                knowledge: String::new(),
                                placement: None,
                                deadline,
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

fn expand_oriented(spec: &SweepSpec, points: &mut Vec<GridPoint>) -> Result<(), HarnessError> {
    // (algorithm, knowledge description, label pairs, label space) per
    // knowledge value.
    let knowledge: Vec<(Option<u64>, Option<DstarSpec>)> = match spec.algorithm {
        AlgorithmKind::Kbl => {
            if spec.lstar.is_empty() {
                return Err(HarnessError::Config("kbl sweep needs lstar values".into()));
            }
            spec.lstar.iter().map(|&l| (Some(l), None)).collect()
        }
        AlgorithmKind::Kbd => {
            if spec.dstar.is_empty() {
                return Err(HarnessError::Config("kbd sweep needs dstar values".into()));
            }
            spec.dstar.iter().map(|&d| (None, Some(d))).collect()
        }
        _ => vec![(None, None)],
    };
    for &generator in &spec.degree_gens {
        for &placement in &spec.placements {
            let distance = u64::from(placement.k1 + placement.k2);
            for &seed in &spec.seeds {
                let (tree, v1, v2, seed) = oriented_instance(generator, placement, seed)?;
                for &(lstar, dstar) in &knowledge {
                    let pairs = spec.label_pairs_up_to(lstar)?;
                    let label_space = spec.label_space_for(&pairs);
                    let (algorithm, knowledge_desc) = match spec.algorithm {
                        AlgorithmKind::Kbl => {
                            let lstar = lstar.expect("kbl knowledge");
                            (Algorithm::Kbl { lstar }, format!("L*={lstar}"))
                        }
                        AlgorithmKind::Kbd => {
                            let spec_d = dstar.expect("kbd knowledge");
                            let resolved = spec_d.resolve(distance);
                            (
                                Algorithm::Kbd { dstar: resolved },
                                format!("D*={spec_d}={resolved}"),
                            )
                        }
                        AlgorithmKind::Nek => (Algorithm::Nek, format!("L={label_space}")),
                        AlgorithmKind::Urt => unreachable!("oriented expansion"),
                    };
                    for &(l1, l2) in &pairs {
                        let deadline = match algorithm {
                            Algorithm::Kbl { lstar } => deadlines::kbl_deadline(distance, lstar)?,
                            Algorithm::Kbd { dstar } => deadlines::kbd_deadline(dstar, l1, l2),
                            Algorithm::Nek => deadlines::nek_deadline(distance, label_space),
                            Algorithm::Urt { .. } => unreachable!("oriented expansion"),
                        };
                        for &delay_spec in &spec.delays {
                            let delay = match delay_spec {
                                DelaySpec::Rounds(n) => n,
                                DelaySpec::Marker(m) => {
                                    return Err(HarnessError::Config(format!(
                                        "delay marker {} only applies to urt",
                                        m.as_str()
                                    )))
                                }
                            };
                            points.push(GridPoint {
                                index: points.len(),
                                scenario: Scenario {
                                    tree: TreeModel::Oriented(tree.clone()),
                                    v1: v1.clone(),
                                    v2: v2.clone(),
                                    l1,
                                    l2,
                                    algorithm,
                                    variant: spec.variant,
                                    delay,
                                    horizon: horizon(
                                        deadline.saturating_add(delay),
                                        spec.horizon_factor,
                                    ),
                                    counterexample_probe: spec.counterexample_probe,
                                },
                                seed,
                                delay_spec,
                                tree_desc: generator.to_string(),
                                knowledge: knowledge_desc.clone(),
                                placement: Some(placement),
                                deadline,
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

/// Runs one grid point and scores it against its deadline.
pub fn run_point(point: &GridPoint) -> Result<(DeadlineReport, SimOutcome), HarnessError> {
    let outcome = sim_engine::run(&point.scenario)?;
    let s = &point.scenario;
    let pass = outcome.met && outcome.meeting_round.is_some_and(|t| t <= point.deadline);
    let report = DeadlineReport {
        scenario_id: point.scenario_id(),
        algo: s.algorithm.kind(),
        shape: s.tree.shape(),
        distance: s.distance() as u64,
        l1: s.l1.get(),
        l2: s.l2.get(),
        delay: s.delay,
        delay_marker: match point.delay_spec {
            DelaySpec::Marker(m) => Some(m.as_str().to_string()),
            DelaySpec::Rounds(_) => None,
        },
        seed: point.seed,
        met: outcome.met,
        meeting_round: outcome.meeting_round,
        deadline: point.deadline,
        pass,
        moves: outcome.moves,
        margin: outcome
            .meeting_round
            .map(|t| t as f64 / point.deadline.max(1) as f64),
        tree: point.tree_desc.clone(),
        knowledge: point.knowledge.clone(),
        placement: point.placement.map(|p| p.to_string()).unwrap_or_default(),
    };
    Ok((report, outcome))
}

/// Expands and runs the whole grid.
pub fn sweep(spec: &SweepSpec) -> Result<SweepReport, HarnessError> {
    let points = expand(spec)?;
    let rows = points
        .par_iter()
        .map(|p| run_point(p).map(|(report, _)| report))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SweepReport { rows })
}

/// First failing point of the grid, if any. Stops early.
pub fn find_failure(spec: &SweepSpec) -> Result<Option<DeadlineReport>, HarnessError> {
    let points = expand(spec)?;
    let found = points
        .par_iter()
        .map(|p| run_point(p).map(|(report, _)| report))
        .find_any(|r| r.as_ref().map_or(true, |report| !report.pass));
    found.transpose()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_urt() -> SweepSpec {
        let mut spec = SweepSpec::new(AlgorithmKind::Urt);
        spec.degrees = vec![2, 3];
        spec.distances = vec![1, 2];
        spec.labels = vec![1, 2];
        spec.delays = vec![
            DelaySpec::Rounds(0),
            DelaySpec::Marker(DelayMarker::ThreeAStarPlusOne),
        ];
        spec
    }

    #[test]
    fn parse_config() {
        let text = r#"
            name = "demo"
            algorithm = "kbd"
            degree_gens = ["regular(2)", "random(1,3)"]
            placements = [[0, 3, 2], [2, 2, 0]]
            labels = [1, 2, 3]
            dstar = ["D", "D+3", "2D", 7]
            seeds = [1, 2]
        "#;
        let spec = SweepSpec::from_toml(text).unwrap();
        assert_eq!(spec.algorithm, AlgorithmKind::Kbd);
        assert_eq!(spec.placements[0], Placement { k1: 0, k2: 3, h: 2 });
        assert_eq!(
            spec.dstar,
            vec![
                DstarSpec::Relative {
                    factor: 1,
                    offset: 0
                },
                DstarSpec::Relative {
                    factor: 1,
                    offset: 3
                },
                DstarSpec::Relative {
                    factor: 2,
                    offset: 0
                },
                DstarSpec::Fixed(7),
            ]
        );
        assert_eq!(spec.delays, vec![DelaySpec::Rounds(0)]);
        let again = SweepSpec::from_toml(&spec.to_toml().unwrap()).unwrap();
        assert_eq!(again, spec);
        assert!(SweepSpec::from_toml("algorithm = \"urt\"\nbogus = 1").is_err());
    }

    #[test]
    fn delay_markers() {
        assert_eq!(
            "a*".parse::<DelaySpec>().unwrap(),
            DelaySpec::Marker(DelayMarker::AStar)
        );
        assert_eq!("12".parse::<DelaySpec>().unwrap(), DelaySpec::Rounds(12));
        assert!("b*".parse::<DelaySpec>().is_err());
        // d = 2, D = 5: i* = 2, r = 16, a* = 64; alpha for y = 6 is 48 + 192.
        assert_eq!(DelayMarker::AStar.resolve(2, 5, 6).unwrap(), 64);
        assert_eq!(
            DelayMarker::EightAStarPlusOne.resolve(2, 5, 6).unwrap(),
            513
        );
        assert_eq!(
            DelayMarker::AlphaPlusThreeAStarPlusFive
                .resolve(2, 5, 6)
                .unwrap(),
            240 + 192 + 5
        );
    }

    #[test]
    fn empty_grid_succeeds() {
        let mut spec = small_urt();
        spec.degrees.clear();
        let report = sweep(&spec).unwrap();
        assert!(report.rows.is_empty());
        assert!(report.passed());
        let mut buf = Vec::new();
        report.write_csv(&mut buf).unwrap();
        assert!(String::from_utf8(buf)
            .unwrap()
            .starts_with("scenario_id,algo,d,D,"));
    }

    #[test]
    fn rows_match_grid_and_csv_is_stable() {
        let spec = small_urt();
        let a = sweep(&spec).unwrap();
        assert_eq!(a.rows.len(), 2 * 2 * 2 * 2);
        assert!(a.passed(), "{:?}", a.failures().collect::<Vec<_>>());
        let b = sweep(&spec).unwrap();
        let (mut ca, mut cb) = (Vec::new(), Vec::new());
        a.write_csv(&mut ca).unwrap();
        b.write_csv(&mut cb).unwrap();
        assert_eq!(ca, cb);
        let text = String::from_utf8(ca).unwrap();
        assert!(text.lines().next().unwrap().starts_with(
            "scenario_id,algo,d,D,l1,l2,delta,seed,met,meeting_round,deadline,pass,moves_a1,moves_a2"
        ));
        assert!(text.contains(",3a*+1,"));
    }

    #[test]
    fn oriented_markers_rejected() {
        let mut spec = SweepSpec::new(AlgorithmKind::Nek);
        spec.degree_gens = vec![DegreeGen::Regular(2)];
        spec.placements = vec![Placement { k1: 1, k2: 1, h: 3 }];
        spec.labels = vec![1, 2];
        spec.delays = vec![DelaySpec::Marker(DelayMarker::AStar)];
        assert!(expand(&spec).is_err());
    }

    #[test]
    fn kbl_defaults_labels_to_lstar() {
        let mut spec = SweepSpec::new(AlgorithmKind::Kbl);
        spec.degree_gens = vec![DegreeGen::Regular(2)];
        spec.placements = vec![Placement { k1: 1, k2: 2, h: 3 }];
        spec.lstar = vec![4];
        assert_eq!(expand(&spec).unwrap().len(), 12);
    }
}
