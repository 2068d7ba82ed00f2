//! Named verification suites used by the CLI and the acceptance tests.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;

use super::grids;
use super::sweep::{self, SweepSpec};
use super::HarnessError;
use crate::agent_programs::{act_dfs, Variant};
use crate::label_codec::{self, first_one_zero_index, Label};
use crate::schedule_math::{self, closed_form};
use crate::sim_engine;
use crate::tree_model::{place_unoriented, LabelingMode, NodeRef, TreeModel};

/// Outcome of one named check.
#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {} ({:.2}s): {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.seconds,
            self.detail
        )
    }
}

fn timed(name: &str, body: impl FnOnce() -> Result<(bool, String), HarnessError>) -> Check {
    let start = Instant::now();
    let (passed, detail) = body().unwrap_or_else(|e| (false, format!("error: {e}")));
    Check {
        name: name.to_string(),
        passed,
        detail,
        seconds: start.elapsed().as_secs_f64(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Codecs,
    Schedule,
    Tree,
    UrtBounds,
    OrientedBounds,
    All,
}

impl FromStr for Suite {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "codecs" => Suite::Codecs,
            "schedule" => Suite::Schedule,
            "tree" => Suite::Tree,
            "urt-bounds" => Suite::UrtBounds,
            "oriented-bounds" => Suite::OrientedBounds,
            "all" => Suite::All,
            other => return Err(HarnessError::Config(format!("unknown suite {other:?}"))),
        })
    }
}

/// Runs every check of `suite`, in a fixed order.
pub fn run_suite(suite: Suite) -> Vec<Check> {
    run_suite_with(suite, |_| {})
}

/// Like [`run_suite`], reporting each check as soon as it finishes.
pub fn run_suite_with(suite: Suite, mut on_check: impl FnMut(&Check)) -> Vec<Check> {
    let mut out = Vec::new();
    let mut emit = |checks: Vec<Check>| {
        for check in checks {
            on_check(&check);
            out.push(check);
        }
    };
    let all = suite == Suite::All;
    if all || suite == Suite::Codecs {
        emit(vec![trans_no_triple_zero(4096)]);
        emit(vec![pf_prefix_free(256)]);
        emit(vec![pad_distinguishing(256, 256)]);
        emit(vec![adapt_star_offsets(64, 4..=100)]);
    }
    if all || suite == Suite::Schedule {
        emit(vec![schedule_algebra()]);
        emit(vec![dfs_agreement()]);
    }
    if all || suite == Suite::Tree {
        emit(vec![port_consistency()]);
    }
    if all || suite == Suite::UrtBounds {
        emit(urt_checks(&grids::urt()));
    }
    if all || suite == Suite::OrientedBounds {
        emit(vec![deadline_check("kbl-deadlines", &[grids::kbl()])]);
        emit(vec![deadline_check("kbd-deadlines", &[grids::kbd()])]);
        emit(vec![deadline_check("nek-deadlines", &[grids::nek()])]);
    }
    if all {
        emit(vec![mutation_check(
            "mutation-no-backtrack",
            Variant::NoBacktrack,
        )]);
        emit(vec![mutation_check(
            "mutation-raw-binary-label",
            Variant::RawBinaryLabel,
        )]);
    }
    out
}

fn label(v: u64) -> Label {
    Label::new(v).expect("positive label")
}

fn distinct_pairs(max: u64) -> impl ParallelIterator<Item = (Label, Label)> {
    (1..=max).into_par_iter().flat_map_iter(move |a| {
        (1..=max)
            .filter(move |&b| b != a)
            .map(move |b| (label(a), label(b)))
    })
}

pub fn trans_no_triple_zero(max: u64) -> Check {
    timed("trans-no-000", || {
        let bad: Vec<u64> = (1..=max)
            .filter(|&v| {
                let s = label_codec::trans(label(v)).to_string();
                s.contains("000")
            })
            .collect();
        Ok((
            bad.is_empty(),
            format!("labels 1..={max}, {} contain 000", bad.len()),
        ))
    })
}

pub fn pf_prefix_free(max: u64) -> Check {
    timed("pf-prefix-free", || {
        let codes: Vec<_> = (1..=max).map(|v| label_codec::pf(label(v))).collect();
        let bad = distinct_pairs(max)
            .filter(|&(a, b)| codes[b.get() as usize - 1].starts_with(&codes[a.get() as usize - 1]))
            .count();
        Ok((
            bad == 0,
            format!("pairs up to {max}, {bad} prefix relations"),
        ))
    })
}

pub fn pad_distinguishing(max: u64, lstar: u64) -> Check {
    timed("pad-distinguishing-index", || {
        let width = 2 * label_codec::pad_width(lstar)? as usize;
        let codes = (1..=max)
            .map(|v| label_codec::pad(label(v), lstar))
            .collect::<Result<Vec<_>, _>>()?;
        let bad = distinct_pairs(max)
            .filter(|&(a, b)| {
                let (ca, cb) = (&codes[a.get() as usize - 1], &codes[b.get() as usize - 1]);
                !matches!(first_one_zero_index(ca, cb), Some(j) if j <= width)
            })
            .count();
        Ok((
            bad == 0,
            format!("pairs up to {max}, L*={lstar}, 2λ={width}, {bad} without index"),
        ))
    })
}

pub fn adapt_star_offsets(max: u64, offsets: std::ops::RangeInclusive<u64>) -> Check {
    timed("adapt-star-offset", || {
        let bound = label_codec::offset_bound(max);
        let results = distinct_pairs(max)
            .map(|(a, b)| {
                let mut worst = (0u64, 0u64);
                let mut violations = 0u64;
                for j in offsets.clone() {
                    let y = label_codec::distinguishing_offset(a, b, j)?;
                    if y as f64 > bound {
                        violations += 1;
                    }
                    if y > worst.0 {
                        worst = (y, j);
                    }
                }
                Ok((violations, worst, a.get(), b.get()))
            })
            .collect::<Result<Vec<_>, HarnessError>>()?;
        let violations: u64 = results.iter().map(|r| r.0).sum();
        let worst = results
            .iter()
            .max_by_key(|r| (r.1 .0, std::cmp::Reverse((r.2, r.3))))
            .copied();
        let detail = match worst {
            Some((_, (y, j), a, b)) => format!(
                "bound {bound:.1}, worst offset {y} at ({a}, {b}, j={j}), {violations} violating (pair, j)"
            ),
            None => "no pairs".into(),
        };
        Ok((violations == 0, detail))
    })
}

/// Closed forms, the stage shift identity and the ratio bounds on the grid
/// `d in 2..=5`, `i <= 5`, `y in {6, 12, 18}`.
pub fn schedule_algebra() -> Check {
    timed("schedule-algebra", || {
        let mut failures = Vec::new();
        for d in 2..=5u64 {
            for y in [6u64, 12, 18] {
                for i in 0..=5u64 {
                    if closed_form::stage_duration(d, i, y)?
                        != schedule_math::stage_duration(d, i, y)?
                    {
                        failures.push(format!("closed form S_{i} d={d} y={y}"));
                    }
                    let alpha_ok = if d == 2 {
                        closed_form::pre_critical_time_line(i, y)?
                            == schedule_math::pre_critical_time(d, i, y)?
                    } else {
                        closed_form::pre_critical_within_bound(d, i, y)?
                    };
                    if !alpha_ok {
                        failures.push(format!("alpha i*={i} d={d} y={y}"));
                    }
                    for q in 0..=(5 - i) {
                        if !closed_form::stage_shift_holds(d, i, q, y)? {
                            failures.push(format!("shift i={i} q={q} d={d} y={y}"));
                        }
                    }
                    let min = if d == 2 { 1 } else { 2 };
                    if i >= min {
                        if !closed_form::stage_ratio_holds(d, i, y)? {
                            failures.push(format!("S ratio i={i} d={d} y={y}"));
                        }
                        if y == 6 && !schedule_math::telescoping_check(d, i)? {
                            failures.push(format!("pi ratio i={i} d={d}"));
                        }
                    }
                }
            }
        }
        let detail = if failures.is_empty() {
            "all identities hold".to_string()
        } else {
            format!(
                "{} failures, first: {}",
                failures.len(),
                failures[..failures.len().min(6)].join("; ")
            )
        };
        Ok((failures.is_empty(), detail))
    })
}

/// ACT on generated trees: `a(r)` moves, `z(r)` distinct nodes, back home.
pub fn dfs_agreement() -> Check {
    timed("dfs-agreement", || {
        let mut cases = 0;
        let mut failures = Vec::new();
        for d in 2..=4u32 {
            for labeling in [LabelingMode::Seeded, LabelingMode::Symmetric] {
                for seed in 0..5u64 {
                    let tree = TreeModel::unoriented(d, labeling, seed)?;
                    let TreeModel::Unoriented(inner) = &tree else {
                        unreachable!()
                    };
                    let (_, far) = place_unoriented(inner, 3, seed)?;
                    for start in [NodeRef::origin(), far] {
                        for r in 0..=6u64 {
                            let a = schedule_math::dfs_cost(u64::from(d), r)?;
                            let z = schedule_math::ball_size(u64::from(d), r)?;
                            let run = sim_engine::run_procedure(&tree, &start, act_dfs(r), a + 1)?;
                            cases += 1;
                            if run.moves != a || run.visited.len() as u64 != z || run.end != start {
                                failures.push(format!(
                                    "d={d} {labeling} seed={seed} r={r} start={start}: moves {} visited {} end {}",
                                    run.moves,
                                    run.visited.len(),
                                    run.end
                                ));
                            }
                        }
                    }
                }
            }
        }
        let detail = match failures.first() {
            None => format!("{cases} walks agree"),
            Some(first) => format!(
                "{} of {cases} walks disagree, first: {first}",
                failures.len()
            ),
        };
        Ok((failures.is_empty(), detail))
    })
}

fn sample_nodes(tree: &TreeModel, depth: usize) -> Result<Vec<NodeRef>, HarnessError> {
    let mut frontier = vec![NodeRef::origin()];
    let mut all = frontier.clone();
    for _ in 0..depth {
        let mut next = Vec::new();
        for node in &frontier {
            for port in 0..tree.degree(node)? {
                let (w, _) = tree.neighbor(node, port)?;
                if w.depth() > node.depth() {
                    next.push(w);
                }
            }
        }
        all.extend(next.iter().cloned());
        frontier = next;
    }
    Ok(all)
}

/// Port maps are bijective and edges are consistent from both ends.
pub fn port_consistency() -> Check {
    timed("tree-port-consistency", || {
        let mut models = Vec::new();
        for d in 2..=5 {
            for labeling in [LabelingMode::Seeded, LabelingMode::Symmetric] {
                for seed in 0..3 {
                    models.push(TreeModel::unoriented(d, labeling, seed)?);
                }
            }
        }
        for generator in grids::degree_gens() {
            for seed in 0..3 {
                models.push(TreeModel::oriented(generator, seed)?);
            }
        }
        let mut edges = 0u64;
        let mut failures = Vec::new();
        for tree in &models {
            for node in sample_nodes(tree, 4)? {
                let degree = tree.degree(&node)?;
                let mut seen = HashSet::new();
                for port in 0..degree {
                    let (w, back) = tree.neighbor(&node, port)?;
                    edges += 1;
                    let ok_back = tree.neighbor(&w, back)? == (node.clone(), port);
                    let symmetric = match tree {
                        TreeModel::Unoriented(t) if t.labeling() == LabelingMode::Symmetric => {
                            back == port
                        }
                        _ => true,
                    };
                    if !ok_back || !symmetric || node.distance(&w) != 1 || !seen.insert(w.clone()) {
                        failures.push(format!("{} at {node} port {port}", tree.shape()));
                    }
                }
                if tree.neighbor(&node, degree).is_ok() {
                    failures.push(format!(
                        "{} at {node}: port {degree} accepted",
                        tree.shape()
                    ));
                }
            }
        }
        let detail = match failures.first() {
            None => format!("{} models, {edges} port checks", models.len()),
            Some(first) => format!("{} failures, first: {first}", failures.len()),
        };
        Ok((failures.is_empty(), detail))
    })
}

fn summarize(report: &sweep::SweepReport) -> String {
    let fails = report.failures().count();
    let mut detail = format!(
        "{} runs, {fails} failures, worst ratio {:.3}",
        report.rows.len(),
        report.worst_margin().unwrap_or(0.0)
    );
    if let Some(f) = report.failures().next() {
        detail.push_str(&format!(
            ", first: {} {} D={} l=({}, {}) delta={} met={} round={:?} deadline={} {} {}",
            f.scenario_id,
            f.shape,
            f.distance,
            f.l1,
            f.l2,
            f.delay,
            f.met,
            f.meeting_round,
            f.deadline,
            f.tree,
            f.placement
        ));
    }
    detail
}

/// Every run of the grids meets within its deadline.
pub fn deadline_check(name: &str, specs: &[SweepSpec]) -> Check {
    timed(name, || {
        let mut all = sweep::SweepReport::default();
        for spec in specs {
            all.rows.extend(sweep::sweep(spec)?.rows);
        }
        Ok((all.passed(), summarize(&all)))
    })
}

/// URT deadlines plus delay sensitivity, from one pass over the grid: with
/// `delta >= alpha + 3a(r_{i*})`, agent 1 meets agent 2 at its start node
/// before agent 1's stage `i* + 1` starts.
pub fn urt_checks(specs: &[SweepSpec]) -> Vec<Check> {
    let start = Instant::now();
    let result = (|| -> Result<_, HarnessError> {
        let mut report = sweep::SweepReport::default();
        let mut sensitive = 0u64;
        let mut sensitive_failures = Vec::new();
        for spec in specs {
            let points = sweep::expand(spec)?;
            let rows = points
                .par_iter()
                .map(|p| -> Result<_, HarnessError> {
                    let (row, outcome) = sweep::run_point(p)?;
                    let s = &p.scenario;
                    let d = s.tree.degree_unchecked(&NodeRef::origin()) as u64;
                    let y1 = label_codec::trans(s.l1).len() as u64;
                    let i_star = schedule_math::critical_stage(d, row.distance)?;
                    let alpha = schedule_math::pre_critical_time(d, i_star, y1)?;
                    let a_star =
                        schedule_math::dfs_cost(d, schedule_math::stage_radius(d, i_star)?)?;
                    let sensitivity = if s.delay >= alpha + 3 * a_star {
                        let next_stage = schedule_math::cumulative_duration(d, i_star, y1)?;
                        let ok = outcome.meeting_node.as_ref() == Some(&s.v2)
                            && outcome.meeting_round.is_some_and(|t| t < next_stage);
                        Some((
                            ok,
                            format!(
                                "{} meeting {:?} at {:?}, stage start {next_stage}",
                                row.scenario_id,
                                outcome.meeting_round,
                                outcome.meeting_node.map(|n| n.to_string())
                            ),
                        ))
                    } else {
                        None
                    };
                    Ok((row, sensitivity))
                })
                .collect::<Result<Vec<_>, _>>()?;
            for (row, sensitivity) in rows {
                if let Some((ok, detail)) = sensitivity {
                    sensitive += 1;
                    if !ok {
                        sensitive_failures.push(detail);
                    }
                }
                report.rows.push(row);
            }
        }
        Ok((report, sensitive, sensitive_failures))
    })();
    let seconds = start.elapsed().as_secs_f64();
    match result {
        Ok((report, sensitive, failures)) => vec![
            Check {
                name: "urt-deadlines".into(),
                passed: report.passed(),
                detail: summarize(&report),
                seconds,
            },
            Check {
                name: "urt-delay-sensitivity".into(),
                passed: sensitive > 0 && failures.is_empty(),
                detail: match failures.first() {
                    None => format!("{sensitive} delayed runs meet at v2 before stage i*+1"),
                    Some(first) => {
                        format!("{} of {sensitive} violate, first: {first}", failures.len())
                    }
                },
                seconds: 0.0,
            },
        ],
        Err(e) => ["urt-deadlines", "urt-delay-sensitivity"]
            .into_iter()
            .map(|name| Check {
                name: name.into(),
                passed: false,
                detail: format!("error: {e}"),
                seconds,
            })
            .collect(),
    }
}

/// Passes when the mutated algorithm fails somewhere on the acceptance
/// grids.
pub fn mutation_check(name: &str, variant: Variant) -> Check {
    timed(name, || {
        for spec in grids::mutation_targets(variant) {
            if let Some(f) = sweep::find_failure(&spec)? {
                return Ok((
                    true,
                    format!(
                        "{variant:?} fails on {}: {} {} D={} l=({}, {}) delta={} met={} round={:?} deadline={}",
                        spec.name, f.scenario_id, f.shape, f.distance, f.l1, f.l2, f.delay, f.met, f.meeting_round, f.deadline
                    ),
                ));
            }
        }
        Ok((false, format!("{variant:?} passes every grid")))
    })
}
