//! Lazily generated infinite trees with deterministic port labelings.
//!
//! Nothing is materialized: every query (degree, neighbor, child count) is a
//! pure function of the tree parameters and the queried [`NodeRef`], so two
//! models built from the same parameters are observationally identical.
//!
//! Two families are provided:
//!
//! - [`UnorientedRegularTree`]: every node has degree `d`. Ports are either
//!   permuted per node by a seeded hash, or assigned so that both endpoints of
//!   every edge carry the same port number (the "symmetric" labeling, in which
//!   an agent learns nothing from its entry ports).
//! - [`OrientedTree`]: a rooted tree in which port 0 at every non-root node
//!   leads to the parent. Child counts may vary per node.
//!
//! Node identity is the sequence of child slots from the origin (unoriented)
//! or the root (oriented). Agents never see it; the engine uses it for
//! meeting detection and traces.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error(
        "invalid node {node}: slot {slot} at depth {depth} but only {limit} child slots exist"
    )]
    InvalidNode {
        node: String,
        depth: usize,
        slot: u32,
        limit: u32,
    },
    #[error("port {port} out of range at node {node} (degree {degree})")]
    PortOutOfRange {
        node: String,
        port: u32,
        degree: u32,
    },
    #[error("node {node} has {children} children; a split placement needs at least 2")]
    InsufficientBranching { node: String, children: u32 },
    #[error("invalid tree parameter: {0}")]
    InvalidParameter(String),
    #[error("malformed node reference {0:?}")]
    Parse(String),
}

/// Canonical identity of a node: child-slot path from the origin or root.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeRef {
    path: Vec<u32>,
}

impl NodeRef {
    /// The origin of an unoriented tree, or the root of an oriented one.
    pub fn origin() -> Self {
        Self { path: Vec::new() }
    }

    pub fn from_path(path: Vec<u32>) -> Self {
        Self { path }
    }

    pub fn path(&self) -> &[u32] {
        &self.path
    }

    pub fn depth(&self) -> usize {
        self.path.len()
    }

    pub fn is_origin(&self) -> bool {
        self.path.is_empty()
    }

    pub fn child(&self, slot: u32) -> Self {
        let mut path = Vec::with_capacity(self.path.len() + 1);
        path.extend_from_slice(&self.path);
        path.push(slot);
        Self { path }
    }

    pub fn parent(&self) -> Option<Self> {
        let (_, rest) = self.path.split_last()?;
        Some(Self {
            path: rest.to_vec(),
        })
    }

    /// Slot of this node among its parent's children.
    pub fn last_slot(&self) -> Option<u32> {
        self.path.last().copied()
    }

    pub fn common_prefix_len(&self, other: &NodeRef) -> usize {
        self.path
            .iter()
            .zip(&other.path)
            .take_while(|(a, b)| a == b)
            .count()
    }

    /// Tree distance between two nodes of the same tree.
    pub fn distance(&self, other: &NodeRef) -> usize {
        self.depth() + other.depth() - 2 * self.common_prefix_len(other)
    }

    /// True if `self` lies on the path from `other` to the origin.
    pub fn is_ancestor_of(&self, other: &NodeRef) -> bool {
        other.path.starts_with(&self.path)
    }
}

impl fmt::Display for NodeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_empty() {
            return f.write_str("@");
        }
        for (k, slot) in self.path.iter().enumerate() {
            if k > 0 {
                f.write_str(".")?;
            }
            write!(f, "{slot}")?;
        }
        Ok(())
    }
}

impl FromStr for NodeRef {
    type Err = TreeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "@" {
            return Ok(Self::origin());
        }
        s.split('.')
            .map(|part| part.parse::<u32>())
            .collect::<Result<Vec<_>, _>>()
            .map(Self::from_path)
            .map_err(|_| TreeError::Parse(s.to_string()))
    }
}

impl Serialize for NodeRef {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for NodeRef {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Tree distance, `|u| + |v| - 2 * lcp(u, v)`.
pub fn distance(u: &NodeRef, v: &NodeRef) -> usize {
    u.distance(v)
}

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;
const CHILD_SALT: u64 = 0x5851_f42d_4c95_7f2d;

fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn node_key(seed: u64, path: &[u32]) -> u64 {
    path.iter().fold(mix64(seed ^ GOLDEN), |h, &slot| {
        mix64(h ^ (u64::from(slot) + 1).wrapping_mul(GOLDEN))
    })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LabelingMode {
    #[default]
    Seeded,
    Symmetric,
}

impl fmt::Display for LabelingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LabelingMode::Seeded => "seeded",
            LabelingMode::Symmetric => "symmetric",
        })
    }
}

impl FromStr for LabelingMode {
    type Err = TreeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "seeded" => Ok(LabelingMode::Seeded),
            "symmetric" => Ok(LabelingMode::Symmetric),
            other => Err(TreeError::InvalidParameter(format!(
                "unknown labeling mode {other:?}"
            ))),
        }
    }
}

/// Infinite `d`-regular tree. The origin has `d` child slots; every other
/// node has a parent edge and `d - 1` child slots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnorientedRegularTree {
    degree: u32,
    labeling: LabelingMode,
    seed: u64,
}

impl UnorientedRegularTree {
    pub fn new(degree: u32, labeling: LabelingMode, seed: u64) -> Result<Self, TreeError> {
        if degree < 2 {
            return Err(TreeError::InvalidParameter(format!(
                "regular tree degree must be >= 2, got {degree}"
            )));
        }
        Ok(Self {
            degree,
            labeling,
            seed,
        })
    }

    pub fn degree_param(&self) -> u32 {
        self.degree
    }

    pub fn labeling(&self) -> LabelingMode {
        self.labeling
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    fn child_slots(&self, node: &NodeRef) -> u32 {
        if node.is_origin() {
            self.degree
        } else {
            self.degree - 1
        }
    }

    fn validate(&self, node: &NodeRef) -> Result<(), TreeError> {
        for (depth, &slot) in node.path().iter().enumerate() {
            let limit = if depth == 0 {
                self.degree
            } else {
                self.degree - 1
            };
            if slot >= limit {
                return Err(TreeError::InvalidNode {
                    node: node.to_string(),
                    depth,
                    slot,
                    limit,
                });
            }
        }
        Ok(())
    }

    /// Port assigned to each incident edge, edges ordered parent-first then
    /// child slots (the origin has no parent edge).
    fn seeded_port_map(&self, path: &[u32]) -> Vec<u32> {
        let key = node_key(self.seed, path);
        let mut ports: Vec<u32> = (0..self.degree).collect();
        for k in (1..ports.len()).rev() {
            let draw = mix64(key.wrapping_add((k as u64).wrapping_mul(GOLDEN)));
            let swap = (draw % (k as u64 + 1)) as usize;
            ports.swap(k, swap);
        }
        ports
    }

    /// Port of the parent edge under the symmetric labeling (equal at both
    /// ends); `None` at the origin.
    fn symmetric_parent_port(path: &[u32]) -> Option<u32> {
        path.iter().fold(None, |incoming, &slot| {
            Some(match incoming {
                None => slot,
                Some(q) if slot < q => slot,
                Some(_) => slot + 1,
            })
        })
    }

    fn traverse(&self, node: &mut NodeRef, port: u32) -> Result<u32, TreeError> {
        if port >= self.degree {
            return Err(TreeError::PortOutOfRange {
                node: node.to_string(),
                port,
                degree: self.degree,
            });
        }
        match self.labeling {
            LabelingMode::Symmetric => {
                match Self::symmetric_parent_port(&node.path) {
                    None => node.path.push(port),
                    Some(q) if q == port => {
                        node.path.pop();
                    }
                    Some(q) => node.path.push(if port < q { port } else { port - 1 }),
                }
                Ok(port)
            }
            LabelingMode::Seeded => {
                let here = self.seeded_port_map(&node.path);
                let edge = here
                    .iter()
                    .position(|&p| p == port)
                    .expect("port map is a permutation") as u32;
                if node.is_origin() {
                    node.path.push(edge);
                    Ok(self.seeded_port_map(&node.path)[0])
                } else if edge == 0 {
                    let slot = node.path.pop().expect("non-origin node");
                    let index = if node.is_origin() { slot } else { slot + 1 };
                    Ok(self.seeded_port_map(&node.path)[index as usize])
                } else {
                    node.path.push(edge - 1);
                    Ok(self.seeded_port_map(&node.path)[0])
                }
            }
        }
    }
}

/// How many children each node of an oriented tree has.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DegreeGen {
    Regular(u32),
    Random { min: u32, max: u32 },
}

impl DegreeGen {
    fn validate(&self) -> Result<(), TreeError> {
        match *self {
            DegreeGen::Regular(c) if c >= 1 => Ok(()),
            DegreeGen::Random { min, max } if min >= 1 && min <= max => Ok(()),
            other => Err(TreeError::InvalidParameter(format!(
                "degree generator {other} needs at least one child per node"
            ))),
        }
    }
}

impl fmt::Display for DegreeGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DegreeGen::Regular(c) => write!(f, "regular({c})"),
            DegreeGen::Random { min, max } => write!(f, "random({min},{max})"),
        }
    }
}

impl FromStr for DegreeGen {
    type Err = TreeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || TreeError::InvalidParameter(format!("bad degree generator {s:?}"));
        let s = s.trim();
        let (name, rest) = s.split_once('(').ok_or_else(bad)?;
        let args = rest.strip_suffix(')').ok_or_else(bad)?;
        let nums = args
            .split(',')
            .map(|a| a.trim().parse::<u32>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| bad())?;
        let generator = match (name.trim(), nums.as_slice()) {
            ("regular", [c]) => DegreeGen::Regular(*c),
            ("random", [min, max]) => DegreeGen::Random {
                min: *min,
                max: *max,
            },
            _ => return Err(bad()),
        };
        generator.validate()?;
        Ok(generator)
    }
}

impl Serialize for DegreeGen {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for DegreeGen {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Rooted tree whose non-root nodes have port 0 toward the root and ports
/// `1..deg` toward children in slot order. The root's ports `0..deg` are its
/// children in slot order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrientedTree {
    degree_gen: DegreeGen,
    seed: u64,
}

impl OrientedTree {
    pub fn new(degree_gen: DegreeGen, seed: u64) -> Result<Self, TreeError> {
        degree_gen.validate()?;
        Ok(Self { degree_gen, seed })
    }

    pub fn degree_gen(&self) -> DegreeGen {
        self.degree_gen
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    fn children_at(&self, path: &[u32]) -> u32 {
        match self.degree_gen {
            DegreeGen::Regular(c) => c,
            DegreeGen::Random { min, max } => {
                let draw = mix64(node_key(self.seed, path) ^ CHILD_SALT);
                min + (draw % u64::from(max - min + 1)) as u32
            }
        }
    }

    pub fn children(&self, node: &NodeRef) -> u32 {
        self.children_at(node.path())
    }

    fn validate(&self, node: &NodeRef) -> Result<(), TreeError> {
        for (depth, &slot) in node.path().iter().enumerate() {
            let limit = self.children_at(&node.path()[..depth]);
            if slot >= limit {
                return Err(TreeError::InvalidNode {
                    node: node.to_string(),
                    depth,
                    slot,
                    limit,
                });
            }
        }
        Ok(())
    }

    fn degree_at(&self, node: &NodeRef) -> u32 {
        let children = self.children(node);
        if node.is_origin() {
            children
        } else {
            children + 1
        }
    }

    fn traverse(&self, node: &mut NodeRef, port: u32) -> Result<u32, TreeError> {
        let degree = self.degree_at(node);
        if port >= degree {
            return Err(TreeError::PortOutOfRange {
                node: node.to_string(),
                port,
                degree,
            });
        }
        if node.is_origin() {
            node.path.push(port);
            Ok(0)
        } else if port == 0 {
            let slot = node.path.pop().expect("non-root node");
            Ok(if node.is_origin() { slot } else { slot + 1 })
        } else {
            node.path.push(port - 1);
            Ok(0)
        }
    }
}

/// Either tree family behind one query interface.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TreeModel {
    Unoriented(UnorientedRegularTree),
    Oriented(OrientedTree),
}

impl TreeModel {
    pub fn unoriented(degree: u32, labeling: LabelingMode, seed: u64) -> Result<Self, TreeError> {
        UnorientedRegularTree::new(degree, labeling, seed).map(TreeModel::Unoriented)
    }

    pub fn oriented(degree_gen: DegreeGen, seed: u64) -> Result<Self, TreeError> {
        OrientedTree::new(degree_gen, seed).map(TreeModel::Oriented)
    }

    pub fn is_oriented(&self) -> bool {
        matches!(self, TreeModel::Oriented(_))
    }

    pub fn validate(&self, node: &NodeRef) -> Result<(), TreeError> {
        match self {
            TreeModel::Unoriented(t) => t.validate(node),
            TreeModel::Oriented(t) => t.validate(node),
        }
    }

    /// Number of incident edges at `node`.
    pub fn degree(&self, node: &NodeRef) -> Result<u32, TreeError> {
        self.validate(node)?;
        Ok(self.degree_unchecked(node))
    }

    pub(crate) fn degree_unchecked(&self, node: &NodeRef) -> u32 {
        match self {
            TreeModel::Unoriented(t) => t.degree,
            TreeModel::Oriented(t) => t.degree_at(node),
        }
    }

    /// Whether an agent at `node` observes the root label.
    pub fn is_root(&self, node: &NodeRef) -> bool {
        self.is_oriented() && node.is_origin()
    }

    /// The node across `port`, and the port by which it is entered.
    pub fn neighbor(&self, node: &NodeRef, port: u32) -> Result<(NodeRef, u32), TreeError> {
        self.validate(node)?;
        let mut next = node.clone();
        let entry = self.traverse(&mut next, port)?;
        Ok((next, entry))
    }

    /// Moves `node` across `port` in place and returns the entry port.
    /// `node` must already be valid for this tree.
    pub fn traverse(&self, node: &mut NodeRef, port: u32) -> Result<u32, TreeError> {
        match self {
            TreeModel::Unoriented(t) => t.traverse(node, port),
            TreeModel::Oriented(t) => t.traverse(node, port),
        }
    }

    pub fn distance(&self, u: &NodeRef, v: &NodeRef) -> usize {
        u.distance(v)
    }

    /// Short description used in reports: the degree for regular trees, the
    /// generator for oriented ones.
    pub fn shape(&self) -> String {
        match self {
            TreeModel::Unoriented(t) => t.degree.to_string(),
            TreeModel::Oriented(t) => t.degree_gen.to_string(),
        }
    }

    pub fn seed(&self) -> u64 {
        match self {
            TreeModel::Unoriented(t) => t.seed,
            TreeModel::Oriented(t) => t.seed,
        }
    }
}

/// Starting nodes at distance `distance`: the origin, and the end of a
/// pseudo-random non-backtracking walk from it.
pub fn place_unoriented(
    tree: &UnorientedRegularTree,
    distance: u32,
    placement_seed: u64,
) -> Result<(NodeRef, NodeRef), TreeError> {
    if distance == 0 {
        return Err(TreeError::InvalidParameter(
            "initial distance must be >= 1".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(placement_seed);
    let mut v2 = NodeRef::origin();
    for _ in 0..distance {
        let slots = tree.child_slots(&v2);
        v2.path.push(rng.gen_range(0..slots));
    }
    Ok((NodeRef::origin(), v2))
}

/// Starting nodes whose closest common ancestor `w` sits at depth `h`, with
/// `v1` at `k1` and `v2` at `k2` steps below `w`, descending through distinct
/// children of `w` when both are positive.
pub fn place_oriented(
    tree: &OrientedTree,
    k1: u32,
    k2: u32,
    h: u32,
    placement_seed: u64,
) -> Result<(NodeRef, NodeRef), TreeError> {
    if k1 + k2 == 0 {
        return Err(TreeError::InvalidParameter("k1 + k2 must be >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(placement_seed);
    let mut ancestor = NodeRef::origin();
    random_descent(tree, &mut ancestor, h, &mut rng);

    let children = tree.children(&ancestor);
    let (first1, first2) = if k1 > 0 && k2 > 0 {
        if children < 2 {
            return Err(TreeError::InsufficientBranching {
                node: ancestor.to_string(),
                children,
            });
        }
        let a = rng.gen_range(0..children);
        let mut b = rng.gen_range(0..children - 1);
        if b >= a {
            b += 1;
        }
        (Some(a), Some(b))
    } else {
        let only = rng.gen_range(0..children);
        if k1 > 0 {
            (Some(only), None)
        } else {
            (None, Some(only))
        }
    };

    let mut descend = |first: Option<u32>, steps: u32| {
        let mut node = ancestor.clone();
        if let Some(slot) = first {
            node.path.push(slot);
            random_descent(tree, &mut node, steps - 1, &mut rng);
        }
        node
    };
    let v1 = descend(first1, k1);
    let v2 = descend(first2, k2);
    Ok((v1, v2))
}

fn random_descent(tree: &OrientedTree, node: &mut NodeRef, steps: u32, rng: &mut ChaCha8Rng) {
    for _ in 0..steps {
        let children = tree.children(node);
        node.path.push(rng.gen_range(0..children));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn sample_nodes(tree: &TreeModel, depth: usize) -> Vec<NodeRef> {
        let mut frontier = vec![NodeRef::origin()];
        let mut all = frontier.clone();
        for _ in 0..depth {
            let mut next = Vec::new();
            for node in &frontier {
                let deg = tree.degree(node).unwrap();
                for port in 0..deg {
                    let (v, _) = tree.neighbor(node, port).unwrap();
                    if v.depth() > node.depth() {
                        next.push(v);
                    }
                }
            }
            all.extend(next.iter().cloned());
            frontier = next;
        }
        all
    }

    fn all_models() -> Vec<TreeModel> {
        let mut models = Vec::new();
        for d in 2..=5 {
            for mode in [LabelingMode::Seeded, LabelingMode::Symmetric] {
                models.push(TreeModel::unoriented(d, mode, 17).unwrap());
            }
        }
        for g in [
            "regular(1)",
            "regular(2)",
            "regular(3)",
            "random(1,3)",
            "random(2,4)",
        ] {
            models.push(TreeModel::oriented(g.parse().unwrap(), 99).unwrap());
        }
        models
    }

    #[test]
    fn degree_examples() {
        let t = TreeModel::unoriented(3, LabelingMode::Seeded, 1).unwrap();
        assert_eq!(t.degree(&NodeRef::from_path(vec![2, 1, 0])).unwrap(), 3);
        let o = TreeModel::oriented(DegreeGen::Regular(2), 1).unwrap();
        assert_eq!(o.degree(&NodeRef::origin()).unwrap(), 2);
        assert_eq!(o.degree(&NodeRef::from_path(vec![1, 0])).unwrap(), 3);
    }

    #[test]
    fn invalid_node_is_rejected() {
        let t = TreeModel::unoriented(3, LabelingMode::Seeded, 1).unwrap();
        assert!(t.degree(&NodeRef::from_path(vec![2, 2])).is_err());
        assert!(t.degree(&NodeRef::from_path(vec![3])).is_err());
        let o = TreeModel::oriented(DegreeGen::Regular(2), 1).unwrap();
        assert!(matches!(
            o.degree(&NodeRef::from_path(vec![0, 2])),
            Err(TreeError::InvalidNode { .. })
        ));
    }

    #[test]
    fn port_out_of_range() {
        let t = TreeModel::unoriented(3, LabelingMode::Seeded, 1).unwrap();
        assert!(matches!(
            t.neighbor(&NodeRef::origin(), 3),
            Err(TreeError::PortOutOfRange { .. })
        ));
    }

    #[test]
    fn edge_symmetry_and_bijectivity() {
        for tree in all_models() {
            for node in sample_nodes(&tree, 3) {
                let deg = tree.degree(&node).unwrap();
                let mut seen = HashSet::new();
                for port in 0..deg {
                    let (v, entry) = tree.neighbor(&node, port).unwrap();
                    assert_eq!(node.distance(&v), 1);
                    assert_eq!(tree.neighbor(&v, entry).unwrap(), (node.clone(), port));
                    seen.insert(v);
                }
                assert_eq!(seen.len(), deg as usize, "{tree:?} at {node}");
            }
        }
    }

    #[test]
    fn symmetric_mode_entry_equals_exit() {
        for d in 2..=5 {
            let tree = TreeModel::unoriented(d, LabelingMode::Symmetric, 0).unwrap();
            for node in sample_nodes(&tree, 3) {
                for port in 0..d {
                    assert_eq!(tree.neighbor(&node, port).unwrap().1, port);
                }
            }
        }
    }

    #[test]
    fn oriented_port_rules() {
        let tree = TreeModel::oriented("random(1,3)".parse().unwrap(), 5).unwrap();
        for node in sample_nodes(&tree, 3)
            .into_iter()
            .filter(|n| !n.is_origin())
        {
            let slot = node.last_slot().unwrap();
            let (parent, entry) = tree.neighbor(&node, 0).unwrap();
            assert_eq!(Some(parent.clone()), node.parent());
            let expected = if parent.is_origin() { slot } else { slot + 1 };
            assert_eq!(entry, expected);
            let deg = tree.degree(&node).unwrap();
            for port in 1..deg {
                assert_eq!(tree.neighbor(&node, port).unwrap().0, node.child(port - 1));
            }
        }
    }

    #[test]
    fn oriented_ascent_reaches_root() {
        let tree = TreeModel::oriented(DegreeGen::Regular(3), 5).unwrap();
        let mut node = NodeRef::from_path(vec![2, 0, 1, 2, 1]);
        for _ in 0..5 {
            assert!(!tree.is_root(&node));
            tree.traverse(&mut node, 0).unwrap();
        }
        assert!(tree.is_root(&node));
    }

    #[test]
    fn seeded_labeling_depends_on_seed_and_repeats() {
        let a = TreeModel::unoriented(4, LabelingMode::Seeded, 1).unwrap();
        let b = TreeModel::unoriented(4, LabelingMode::Seeded, 1).unwrap();
        let c = TreeModel::unoriented(4, LabelingMode::Seeded, 2).unwrap();
        let nodes = sample_nodes(&a, 2);
        let table = |t: &TreeModel| -> Vec<(NodeRef, u32)> {
            nodes
                .iter()
                .flat_map(|n| (0..4).map(|p| t.neighbor(n, p).unwrap()))
                .collect::<Vec<_>>()
        };
        assert_eq!(table(&a), table(&b));
        assert_ne!(table(&a), table(&c));
    }

    #[test]
    fn distance_examples() {
        let u = NodeRef::from_path(vec![0, 1]);
        assert_eq!(distance(&u, &u), 0);
        assert_eq!(distance(&NodeRef::origin(), &u), 2);
        assert_eq!(distance(&u, &NodeRef::from_path(vec![0, 2, 3])), 3);
    }

    #[test]
    fn node_ref_text_form() {
        assert_eq!(NodeRef::origin().to_string(), "@");
        let n = NodeRef::from_path(vec![3, 0, 12]);
        assert_eq!(n.to_string(), "3.0.12");
        assert_eq!("3.0.12".parse::<NodeRef>().unwrap(), n);
        assert_eq!("@".parse::<NodeRef>().unwrap(), NodeRef::origin());
        assert!("1..2".parse::<NodeRef>().is_err());
    }

    #[test]
    fn unoriented_placement() {
        let tree = UnorientedRegularTree::new(3, LabelingMode::Seeded, 4).unwrap();
        for dist in 1..=8 {
            let (v1, v2) = place_unoriented(&tree, dist, 77).unwrap();
            assert!(v1.is_origin());
            assert_eq!(distance(&v1, &v2), dist as usize);
            TreeModel::Unoriented(tree.clone()).validate(&v2).unwrap();
            assert_eq!(place_unoriented(&tree, dist, 77).unwrap(), (v1, v2));
        }
        assert!(place_unoriented(&tree, 0, 1).is_err());
    }

    #[test]
    fn oriented_placement_examples() {
        let tree = OrientedTree::new(DegreeGen::Regular(2), 3).unwrap();
        let (v1, v2) = place_oriented(&tree, 0, 3, 2, 11).unwrap();
        assert_eq!(v1.depth(), 2);
        assert_eq!(v2.depth(), 5);
        assert!(v1.is_ancestor_of(&v2));
        assert_eq!(distance(&v1, &v2), 3);

        let (v1, v2) = place_oriented(&tree, 2, 2, 0, 11).unwrap();
        assert_eq!(v1.common_prefix_len(&v2), 0);
        assert_eq!(distance(&v1, &v2), 4);
    }

    #[test]
    fn oriented_placement_needs_branching() {
        let tree = OrientedTree::new(DegreeGen::Regular(1), 3).unwrap();
        assert!(matches!(
            place_oriented(&tree, 1, 1, 2, 0),
            Err(TreeError::InsufficientBranching { .. })
        ));
        assert!(place_oriented(&tree, 0, 4, 2, 0).is_ok());
    }

    #[test]
    fn degree_gen_text_form() {
        assert_eq!(
            "regular(2)".parse::<DegreeGen>().unwrap(),
            DegreeGen::Regular(2)
        );
        assert_eq!(
            "random(1, 3)".parse::<DegreeGen>().unwrap(),
            DegreeGen::Random { min: 1, max: 3 }
        );
        assert!("random(3,1)".parse::<DegreeGen>().is_err());
        assert!("regular(0)".parse::<DegreeGen>().is_err());
        assert!("cube(2)".parse::<DegreeGen>().is_err());
    }
}
