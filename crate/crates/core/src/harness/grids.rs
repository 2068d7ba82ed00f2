//! Standard acceptance grids.

use super::sweep::{DelayMarker, DelaySpec, DstarSpec, Placement, SweepSpec};
use crate::agent_programs::{AlgorithmKind, Variant};
use crate::tree_model::{DegreeGen, LabelingMode};

pub const URT_LABELS: [u64; 6] = [1, 2, 3, 5, 9, 16];
pub const SEEDS: [u64; 3] = [11, 23, 37];
pub const ORIENTED_SEEDS: [u64; 2] = [5, 17];

/// Common-ancestor depths of the oriented grid.
pub const ANCESTOR_DEPTHS: [u32; 6] = [0, 1, 2, 4, 9, 24];

const BRANCH_LENGTHS: [(u32, u32); 13] = [
    (0, 1),
    (0, 2),
    (0, 3),
    (0, 5),
    (0, 8),
    (1, 1),
    (1, 2),
    (2, 2),
    (1, 4),
    (3, 3),
    (2, 6),
    (4, 4),
    (1, 7),
];

const LONG_BRANCH_LENGTHS: [(u32, u32); 3] = [(5, 5), (3, 7), (0, 10)];

pub fn urt_delays() -> Vec<DelaySpec> {
    vec![
        DelaySpec::Rounds(0),
        DelaySpec::Rounds(1),
        DelaySpec::Marker(DelayMarker::AStar),
        DelaySpec::Marker(DelayMarker::ThreeAStarPlusOne),
        DelaySpec::Marker(DelayMarker::EightAStarPlusOne),
        DelaySpec::Marker(DelayMarker::AlphaPlusThreeAStarPlusFive),
    ]
}

fn urt_base(degrees: Vec<u32>, distances: Vec<u32>) -> SweepSpec {
    let mut spec = SweepSpec::new(AlgorithmKind::Urt);
    spec.degrees = degrees;
    spec.distances = distances;
    spec.labelings = vec![LabelingMode::Seeded, LabelingMode::Symmetric];
    spec.labels = URT_LABELS.to_vec();
    spec.delays = urt_delays();
    spec.seeds = SEEDS.to_vec();
    spec
}

/// URT grids: the line up to distance 10, degrees 3 and 4 up to 5.
pub fn urt() -> Vec<SweepSpec> {
    let mut line = urt_base(vec![2], (1..=10).collect());
    line.name = "urt-line".into();
    let mut branching = urt_base(vec![3, 4], (1..=5).collect());
    branching.name = "urt-branching".into();
    vec![line, branching]
}

pub fn degree_gens() -> Vec<DegreeGen> {
    vec![
        DegreeGen::Regular(2),
        DegreeGen::Regular(3),
        DegreeGen::Random { min: 1, max: 3 },
    ]
}

fn placements(lengths: &[(u32, u32)]) -> Vec<Placement> {
    let mut out = Vec::new();
    for &h in &ANCESTOR_DEPTHS {
        for &(k1, k2) in lengths {
            out.push(Placement { k1, k2, h });
        }
    }
    out
}

/// Placements with `D <= 8`. Label pairs are ordered, so mirrored
/// placements are covered by swapping labels.
pub fn oriented_placements() -> Vec<Placement> {
    placements(&BRANCH_LENGTHS)
}

/// Placements with `D <= 10`.
pub fn extended_placements() -> Vec<Placement> {
    let mut lengths = BRANCH_LENGTHS.to_vec();
    lengths.extend_from_slice(&LONG_BRANCH_LENGTHS);
    placements(&lengths)
}

fn oriented_base(algorithm: AlgorithmKind, name: &str) -> SweepSpec {
    let mut spec = SweepSpec::new(algorithm);
    spec.name = name.into();
    spec.degree_gens = degree_gens();
    spec.placements = oriented_placements();
    spec.seeds = ORIENTED_SEEDS.to_vec();
    spec
}

/// KBL with `L* in {4, 16}`, all label pairs up to `L*`.
pub fn kbl() -> SweepSpec {
    let mut spec = oriented_base(AlgorithmKind::Kbl, "kbl");
    spec.lstar = vec![4, 16];
    spec
}

/// KBD with `D* in {D, D+3, 2D}`.
pub fn kbd() -> SweepSpec {
    let mut spec = oriented_base(AlgorithmKind::Kbd, "kbd");
    spec.label_space = Some(16);
    spec.dstar = vec![
        DstarSpec::Relative {
            factor: 1,
            offset: 0,
        },
        DstarSpec::Relative {
            factor: 1,
            offset: 3,
        },
        DstarSpec::Relative {
            factor: 2,
            offset: 0,
        },
    ];
    spec
}

/// NEK with `D <= 10` and labels up to 32.
pub fn nek() -> SweepSpec {
    let mut spec = oriented_base(AlgorithmKind::Nek, "nek");
    spec.placements = extended_placements();
    spec.label_space = Some(32);
    spec
}

/// Grids searched for a failure under `variant`, cheapest first.
pub fn mutation_targets(variant: Variant) -> Vec<SweepSpec> {
    let mut specs = vec![kbl(), kbd(), nek()];
    specs.extend(urt());
    match variant {
        Variant::RawBinaryLabel => specs.rotate_left(3),
        Variant::NoBacktrack | Variant::Faithful => {}
    }
    for spec in &mut specs {
        spec.variant = variant;
    }
    specs
}
