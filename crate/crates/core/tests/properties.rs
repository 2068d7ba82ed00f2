use proptest::prelude::*;

use tree_rendezvous::agent_programs::{act_dfs, Algorithm, Variant};
use tree_rendezvous::label_codec::{self, BitString, Label};
use tree_rendezvous::schedule_math;
use tree_rendezvous::sim_engine::{self, RunOptions, Scenario};
use tree_rendezvous::tree_model::{
    place_oriented, place_unoriented, DegreeGen, LabelingMode, NodeRef, TreeModel,
};

fn labeling() -> impl Strategy<Value = LabelingMode> {
    prop_oneof![Just(LabelingMode::Seeded), Just(LabelingMode::Symmetric)]
}

fn oriented_gen() -> impl Strategy<Value = DegreeGen> {
    prop_oneof![
        (1u32..4).prop_map(DegreeGen::Regular),
        (1u32..3, 0u32..3).prop_map(|(min, extra)| DegreeGen::Random {
            min,
            max: min + extra
        }),
    ]
}

fn walk(tree: &TreeModel, ports: &[u32]) -> NodeRef {
    let mut node = NodeRef::origin();
    for &p in ports {
        let degree = tree.degree(&node).unwrap();
        if degree > 0 {
            tree.traverse(&mut node, p % degree).unwrap();
        }
    }
    node
}

proptest! {
    #[test]
    fn node_text_round_trips(path in prop::collection::vec(0u32..7, 0..12)) {
        let node = NodeRef::from_path(path);
        prop_assert_eq!(node.to_string().parse::<NodeRef>().unwrap(), node);
    }

    #[test]
    fn unoriented_edges_are_consistent(
        d in 2u32..6,
        mode in labeling(),
        seed in any::<u64>(),
        ports in prop::collection::vec(any::<u32>(), 0..10),
    ) {
        let tree = TreeModel::unoriented(d, mode, seed).unwrap();
        let node = walk(&tree, &ports);
        for port in 0..d {
            let (next, back) = tree.neighbor(&node, port).unwrap();
            prop_assert_eq!(tree.neighbor(&next, back).unwrap(), (node.clone(), port));
            prop_assert_eq!(node.distance(&next), 1);
            if mode == LabelingMode::Symmetric {
                prop_assert_eq!(back, port);
            }
        }
    }

    #[test]
    fn oriented_port_zero_climbs(generator in oriented_gen(), seed in any::<u64>(), ports in prop::collection::vec(1u32..9, 0..10)) {
        let tree = TreeModel::oriented(generator, seed).unwrap();
        let mut node = walk(&tree, &ports);
        for _ in 0..node.depth() {
            prop_assert!(!tree.is_root(&node));
            tree.traverse(&mut node, 0).unwrap();
        }
        prop_assert!(tree.is_root(&node));
    }

    #[test]
    fn distance_is_a_metric(
        a in prop::collection::vec(0u32..3, 0..8),
        b in prop::collection::vec(0u32..3, 0..8),
        c in prop::collection::vec(0u32..3, 0..8),
    ) {
        let (a, b, c) = (NodeRef::from_path(a), NodeRef::from_path(b), NodeRef::from_path(c));
        prop_assert_eq!(a.distance(&b), b.distance(&a));
        prop_assert!(a.distance(&c) <= a.distance(&b) + b.distance(&c));
        prop_assert_eq!(a.distance(&b) == 0, a == b);
    }

    #[test]
    fn placements_have_requested_shape(d in 2u32..5, distance in 1u32..12, seed in any::<u64>()) {
        let TreeModel::Unoriented(tree) = TreeModel::unoriented(d, LabelingMode::Seeded, seed).unwrap() else { unreachable!() };
        let (v1, v2) = place_unoriented(&tree, distance, seed).unwrap();
        prop_assert_eq!(v1.distance(&v2), distance as usize);
    }

    #[test]
    fn oriented_placement_geometry(k1 in 0u32..5, k2 in 1u32..5, h in 0u32..6, seed in any::<u64>()) {
        let TreeModel::Oriented(tree) = TreeModel::oriented(DegreeGen::Regular(2), seed).unwrap() else { unreachable!() };
        let (v1, v2) = place_oriented(&tree, k1, k2, h, seed).unwrap();
        prop_assert_eq!(v1.common_prefix_len(&v2), h as usize);
        prop_assert_eq!(v1.depth(), (h + k1) as usize);
        prop_assert_eq!(v2.depth(), (h + k2) as usize);
    }

    #[test]
    fn codecs_separate_labels(a in 1u64..1_000_000, b in 1u64..1_000_000) {
        prop_assume!(a != b);
        let (la, lb) = (Label::new(a).unwrap(), Label::new(b).unwrap());
        prop_assert!(!label_codec::trans(la).to_string().contains("000"));
        prop_assert!(!label_codec::pf(lb).starts_with(&label_codec::pf(la)));
        let (aa, ab) = (label_codec::adapt(la), label_codec::adapt(lb));
        prop_assert!(label_codec::first_one_zero_index(&aa, &ab).is_some());
        let bound = a.max(b);
        let (pa, pb) = (label_codec::pad(la, bound).unwrap(), label_codec::pad(lb, bound).unwrap());
        prop_assert_eq!(pa.len(), pb.len());
        prop_assert!(label_codec::first_one_zero_index(&pa, &pb).is_some());
    }

    #[test]
    fn bit_strings_round_trip(bits in prop::collection::vec(any::<bool>(), 0..64)) {
        let s = BitString::from_bits(bits);
        prop_assert_eq!(s.to_string().parse::<BitString>().unwrap(), s);
    }

    #[test]
    fn stage_shift_identity(d in 2u64..6, i in 0u64..4, q in 0u64..4, y in 6u64..40) {
        let lhs = schedule_math::stage_duration(d, i + q, y).unwrap();
        let si = schedule_math::stage_duration(d, i, y).unwrap();
        let rhs = if d == 2 {
            4u64.pow(q as u32) * si
        } else {
            (d - 1).pow(2 * q as u32) * si + schedule_math::stage_duration(d, q, y).unwrap()
        };
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn dfs_returns_home(d in 2u32..5, mode in labeling(), seed in any::<u64>(), r in 0u64..5, ports in prop::collection::vec(any::<u32>(), 0..6)) {
        let tree = TreeModel::unoriented(d, mode, seed).unwrap();
        let start = walk(&tree, &ports);
        let a = schedule_math::dfs_cost(u64::from(d), r).unwrap();
        let run = sim_engine::run_procedure(&tree, &start, act_dfs(r), a + 5).unwrap();
        prop_assert_eq!(run.moves, a);
        prop_assert_eq!(run.end, start);
        prop_assert_eq!(run.visited.len() as u64, schedule_math::ball_size(u64::from(d), r).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn runs_are_deterministic_and_sound(
        d in 2u32..4,
        distance in 1u32..4,
        l1 in 1u64..8,
        l2 in 1u64..8,
        delay in 0u64..200,
        seed in any::<u64>(),
    ) {
        prop_assume!(l1 != l2);
        let tree = TreeModel::unoriented(d, LabelingMode::Seeded, seed).unwrap();
        let TreeModel::Unoriented(inner) = &tree else { unreachable!() };
        let (v1, v2) = place_unoriented(inner, distance, seed).unwrap();
        let scenario = Scenario {
            tree,
            v1,
            v2,
            l1: Label::new(l1).unwrap(),
            l2: Label::new(l2).unwrap(),
            algorithm: Algorithm::Urt { degree: d },
            variant: Variant::Faithful,
            delay,
            horizon: 400_000,
            counterexample_probe: false,
        };
        let options = RunOptions { record_history: true, record_trace: false };
        let a = sim_engine::run_with(&scenario, options).unwrap();
        let b = sim_engine::run_with(&scenario, options).unwrap();
        prop_assert_eq!(a.meeting_round, b.meeting_round);
        prop_assert_eq!(a.moves, b.moves);
        if let Some(t) = a.meeting_round {
            let t = t as usize;
            prop_assert_eq!(&a.history[0][t], &a.history[1][t]);
            prop_assert_eq!(a.meeting_node.as_ref(), Some(&a.history[0][t]));
            for s in 0..t {
                prop_assert_ne!(&a.history[0][s], &a.history[1][s]);
            }
        }
    }
}
