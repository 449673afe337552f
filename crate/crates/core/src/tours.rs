//! Visiting orders for the object: MST double-and-shortcut, the universal
//! order induced by the hierarchy, and exact Held-Karp open walks.
//!
//! Every tour is an open walk starting at its anchor; it never returns.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hierarchy::{Cluster, PartitionHierarchy};
use crate::metric::{DistanceOracle, Length, NodeId};

/// Largest node count (anchor included) handled by [`exact_tour`].
pub const EXACT_TOUR_LIMIT: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TourError {
    #[error("exact tour over {0} nodes exceeds the limit of {EXACT_TOUR_LIMIT}")]
    TooLarge(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TourKind {
    Mst,
    Universal,
    Exact,
}

impl fmt::Display for TourKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TourKind::Mst => "mst",
            TourKind::Universal => "universal",
            TourKind::Exact => "exact",
        })
    }
}

impl FromStr for TourKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "mst" => Ok(TourKind::Mst),
            "universal" => Ok(TourKind::Universal),
            "exact" => Ok(TourKind::Exact),
            other => Err(format!("unknown tour kind `{other}` (expected mst, universal or exact)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TourOrder {
    pub anchor: NodeId,
    /// Starts at `anchor`, no repeats.
    pub visits: Vec<NodeId>,
    pub kind: TourKind,
}

/// `s ∪ {anchor}` with the anchor first and the rest ascending.
fn stops(s: &[NodeId], anchor: NodeId) -> Vec<NodeId> {
    let rest: BTreeSet<NodeId> = s.iter().copied().filter(|&v| v != anchor).collect();
    std::iter::once(anchor).chain(rest).collect()
}

/// Pre-order walk of the minimum spanning tree over `s ∪ {anchor}` in the
/// metric closure, rooted at `anchor`. Children are visited by ascending
/// connecting-edge weight, then node id.
pub fn mst_tour(d: &DistanceOracle, s: &[NodeId], anchor: NodeId) -> TourOrder {
    let nodes = stops(s, anchor);
    let m = nodes.len();
    let mut in_tree = vec![false; m];
    let mut key: Vec<(Length, NodeId)> = nodes.iter().map(|&v| (d.dist(anchor, v), v)).collect();
    let mut parent = vec![0usize; m];
    let mut children: Vec<Vec<(Length, NodeId, usize)>> = vec![Vec::new(); m];
    in_tree[0] = true;
    for _ in 1..m {
        let next = (0..m).filter(|&i| !in_tree[i]).min_by_key(|&i| key[i]).expect("vertex left");
        in_tree[next] = true;
        children[parent[next]].push((key[next].0, nodes[next], next));
        for i in 0..m {
            if !in_tree[i] {
                let w = d.dist(nodes[next], nodes[i]);
                if w < key[i].0 {
                    key[i] = (w, nodes[i]);
                    parent[i] = next;
                }
            }
        }
    }
    for list in &mut children {
        list.sort_unstable();
    }
    let mut visits = Vec::with_capacity(m);
    let mut stack = vec![0usize];
    while let Some(i) = stack.pop() {
        visits.push(nodes[i]);
        stack.extend(children[i].iter().rev().map(|c| c.2));
    }
    TourOrder { anchor, visits, kind: TourKind::Mst }
}

/// A fixed permutation of all nodes derived from the hierarchy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniversalOrder {
    order: Vec<NodeId>,
    rank: Vec<usize>,
}

impl UniversalOrder {
    pub fn order(&self) -> &[NodeId] {
        &self.order
    }

    pub fn rank(&self, v: NodeId) -> usize {
        self.rank[v.index()]
    }
}

/// Recursive pre-order over the hierarchy from the top cluster. The children
/// of a cluster are chained nearest-leader-first starting at its leader
/// (ties to the lower leader id); singletons emit their node.
pub fn universal_order(h: &PartitionHierarchy, d: &DistanceOracle) -> UniversalOrder {
    fn visit(h: &PartitionHierarchy, d: &DistanceOracle, c: &Cluster, out: &mut Vec<NodeId>) {
        if c.level == -1 {
            out.push(c.leader);
            return;
        }
        let mut remaining = h.children(c.id);
        let mut current = c.leader;
        while !remaining.is_empty() {
            let pick = (0..remaining.len())
                .min_by_key(|&i| (d.dist(current, remaining[i].leader), remaining[i].leader))
                .expect("non-empty");
            let child = remaining.remove(pick);
            current = child.leader;
            visit(h, d, child, out);
        }
    }
    let mut order = Vec::with_capacity(d.n());
    visit(h, d, h.top_cluster(), &mut order);
    let mut rank = vec![usize::MAX; d.n()];
    for (i, v) in order.iter().enumerate() {
        rank[v.index()] = i;
    }
    UniversalOrder { order, rank }
}

/// `s ∪ {anchor}` in universal order, rotated so the anchor comes first.
pub fn induced_tour(u: &UniversalOrder, s: &[NodeId], anchor: NodeId) -> TourOrder {
    let mut nodes = stops(s, anchor);
    nodes.sort_by_key(|&v| u.rank(v));
    let at = nodes.iter().position(|&v| v == anchor).expect("anchor present");
    nodes.rotate_left(at);
    TourOrder { anchor, visits: nodes, kind: TourKind::Universal }
}

/// Held-Karp table of shortest open walks that start at `nodes[0]` and visit
/// exactly the nodes of a subset mask (bit 0 always set).
#[derive(Debug, Clone)]
pub struct HeldKarp {
    nodes: Vec<NodeId>,
    /// `cost[mask * m + last]`, `Length::MAX` when unreachable.
    cost: Vec<Length>,
    parent: Vec<u8>,
}

impl HeldKarp {
    pub fn new(d: &DistanceOracle, nodes: Vec<NodeId>) -> Self {
        let m = nodes.len();
        assert!((1..=16).contains(&m), "Held-Karp supports 1..=16 nodes");
        let size = 1usize << m;
        let mut cost = vec![Length::MAX; size * m];
        let mut parent = vec![u8::MAX; size * m];
        // mask 0b1, ending at the anchor
        cost[m] = 0;
        for mask in (1..size).step_by(2) {
            for last in 0..m {
                let here = cost[mask * m + last];
                if here == Length::MAX {
                    continue;
                }
                for next in 1..m {
                    if mask & (1 << next) != 0 {
                        continue;
                    }
                    let to = (mask | 1 << next) * m + next;
                    let c = here + d.dist(nodes[last], nodes[next]);
                    if c < cost[to] {
                        cost[to] = c;
                        parent[to] = last as u8;
                    }
                }
            }
        }
        HeldKarp { nodes, cost, parent }
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    /// Shortest open walk over the subset `mask` (bit 0 implied) and the
    /// index of its final node; the lowest such index on ties.
    pub fn best(&self, mask: usize) -> (Length, usize) {
        let m = self.nodes.len();
        let mask = mask | 1;
        (0..m)
            .filter(|&last| mask & (1 << last) != 0)
            .map(|last| (self.cost[mask * m + last], last))
            .min()
            .expect("anchor bit set")
    }

    /// Node sequence of the walk reported by [`HeldKarp::best`].
    pub fn path(&self, mask: usize) -> Vec<NodeId> {
        let m = self.nodes.len();
        let mut mask = mask | 1;
        let (_, mut last) = self.best(mask);
        let mut rev = vec![self.nodes[last]];
        while last != 0 {
            let p = self.parent[mask * m + last] as usize;
            mask &= !(1 << last);
            last = p;
            rev.push(self.nodes[last]);
        }
        rev.reverse();
        rev
    }
}

/// Minimum-length open walk from `anchor` over `s` (Held-Karp).
pub fn exact_tour(d: &DistanceOracle, s: &[NodeId], anchor: NodeId) -> Result<(TourOrder, Length), TourError> {
    let nodes = stops(s, anchor);
    if nodes.len() > EXACT_TOUR_LIMIT {
        return Err(TourError::TooLarge(nodes.len()));
    }
    let full = (1usize << nodes.len()) - 1;
    let hk = HeldKarp::new(d, nodes);
    let (length, _) = hk.best(full);
    let visits = hk.path(full);
    Ok((TourOrder { anchor, visits, kind: TourKind::Exact }, length))
}

/// Sum of metric distances between consecutive visits.
pub fn tour_length(d: &DistanceOracle, t: &TourOrder) -> Length {
    d.walk_length(&t.visits)
}

/// Tour of the requested kind over `s ∪ {anchor}`. `Exact` falls back to
/// the MST tour above [`EXACT_TOUR_LIMIT`] nodes.
pub fn tour_of_kind(
    kind: TourKind,
    h: &PartitionHierarchy,
    d: &DistanceOracle,
    s: &[NodeId],
    anchor: NodeId,
) -> TourOrder {
    match kind {
        TourKind::Mst => mst_tour(d, s, anchor),
        TourKind::Universal => induced_tour(&universal_order(h, d), s, anchor),
        TourKind::Exact => exact_tour(d, s, anchor).map(|t| t.0).unwrap_or_else(|_| mst_tour(d, s, anchor)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hierarchy::build_hierarchy;
    use crate::metric::{generate, GeneratorSpec, WeightedGraph};
    use itertools::Itertools;
    use proptest::prelude::*;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn path(n: usize) -> DistanceOracle {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i, 1)).collect();
        DistanceOracle::new(&WeightedGraph::new(n, &edges).unwrap())
    }

    fn grid(w: usize, h: usize) -> DistanceOracle {
        DistanceOracle::new(&generate(&GeneratorSpec::grid(w, h)).unwrap())
    }

    /// Factorial search over all orders of `s \ {anchor}`.
    fn brute_force(d: &DistanceOracle, s: &[NodeId], anchor: NodeId) -> Length {
        let rest: Vec<NodeId> = stops(s, anchor).into_iter().skip(1).collect();
        let k = rest.len();
        rest.into_iter()
            .permutations(k)
            .map(|p| {
                let mut walk = vec![anchor];
                walk.extend(p);
                d.walk_length(&walk)
            })
            .min()
            .unwrap_or(0)
    }

    fn ids(v: &[usize]) -> Vec<NodeId> {
        v.iter().map(|&i| NodeId(i)).collect()
    }

    #[test]
    fn degenerate_tours() {
        let d = path(4);
        let a = NodeId(2);
        for t in [mst_tour(&d, &[], a), exact_tour(&d, &[], a).unwrap().0] {
            assert_eq!(t.visits, vec![a]);
            assert_eq!(tour_length(&d, &t), 0);
        }
        let t = mst_tour(&d, &[NodeId(0)], a);
        assert_eq!(t.visits, vec![a, NodeId(0)]);
        assert_eq!(tour_length(&d, &t), 2);
        let (t, len) = exact_tour(&d, &[NodeId(3)], a).unwrap();
        assert_eq!(t.visits, vec![a, NodeId(3)]);
        assert_eq!(len, 1);
    }

    #[test]
    fn exact_tour_on_a_line() {
        let d = path(6);
        let (t, len) = exact_tour(&d, &ids(&[4, 2, 5, 1]), NodeId(0)).unwrap();
        assert_eq!(t.visits, ids(&[0, 1, 2, 4, 5]));
        assert_eq!(len, 5);
    }

    #[test]
    fn exact_tour_rejects_large_sets() {
        let d = grid(4, 4);
        let s: Vec<NodeId> = (0..13).map(NodeId).collect();
        assert_eq!(exact_tour(&d, &s, NodeId(0)).unwrap_err(), TourError::TooLarge(13));
    }

    #[test]
    fn exact_matches_brute_force_on_random_subsets() {
        let d = DistanceOracle::new(&generate(&GeneratorSpec::unit_disk(14, 0.45, 1.0, 5)).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let all: Vec<NodeId> = d.nodes().collect();
        for _ in 0..12 {
            let s: Vec<NodeId> = all.choose_multiple(&mut rng, 8).copied().collect();
            let anchor = s[0];
            let (t, len) = exact_tour(&d, &s, anchor).unwrap();
            assert_eq!(len, brute_force(&d, &s, anchor));
            assert_eq!(tour_length(&d, &t), len);
        }
    }

    #[test]
    fn universal_order_single_node_and_path() {
        let d = DistanceOracle::new(&WeightedGraph::new(1, &[]).unwrap());
        let h = build_hierarchy(&d, 2.0).unwrap();
        assert_eq!(universal_order(&h, &d).order(), &[NodeId(0)]);

        let d = path(5);
        let h = build_hierarchy(&d, 2.0).unwrap();
        let u = universal_order(&h, &d);
        let mut sorted = u.order().to_vec();
        sorted.sort();
        assert_eq!(sorted, ids(&[0, 1, 2, 3, 4]));
        assert_eq!(u, universal_order(&build_hierarchy(&d, 2.0).unwrap(), &d));
    }

    #[test]
    fn induced_tour_is_rotated_subsequence() {
        let d = path(5);
        let h = build_hierarchy(&d, 2.0).unwrap();
        let u = universal_order(&h, &d);
        assert_eq!(induced_tour(&u, &[], NodeId(3)).visits, vec![NodeId(3)]);

        let full = induced_tour(&u, &ids(&[0, 1, 2, 3, 4]), NodeId(2));
        let at = u.order().iter().position(|&v| v == NodeId(2)).unwrap();
        let mut rotated = u.order().to_vec();
        rotated.rotate_left(at);
        assert_eq!(full.visits, rotated);

        let t = induced_tour(&u, &ids(&[4, 0]), NodeId(1));
        let mut expected: Vec<NodeId> = u.order().iter().copied().filter(|v| [0, 1, 4].contains(&v.0)).collect();
        let at = expected.iter().position(|&v| v == NodeId(1)).unwrap();
        expected.rotate_left(at);
        assert_eq!(t.visits, expected);
    }

    #[test]
    fn universal_quality_on_grid_is_logged() {
        let d = grid(4, 4);
        let h = build_hierarchy(&d, 2.0).unwrap();
        let u = universal_order(&h, &d);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let all: Vec<NodeId> = d.nodes().collect();
        let mut kappa: f64 = 1.0;
        for _ in 0..30 {
            let s: Vec<NodeId> = all.choose_multiple(&mut rng, 6).copied().collect();
            let t = induced_tour(&u, &s, s[0]);
            let (_, best) = exact_tour(&d, &s, s[0]).unwrap();
            let len = tour_length(&d, &t);
            assert!(len >= best);
            kappa = kappa.max(len as f64 / best as f64);
        }
        eprintln!("4x4 grid universal-tour kappa over 30 subsets: {kappa:.3}");
    }

    #[test]
    fn per_hop_re_expansion_matches() {
        let g = generate(&GeneratorSpec::unit_disk(12, 0.5, 1.0, 2)).unwrap();
        let d = DistanceOracle::new(&g);
        let t = mst_tour(&d, &ids(&[3, 7, 9, 11]), NodeId(0));
        // Re-sum each hop with a fresh single-pair Dijkstra over the graph.
        let hop = |a: NodeId, b: NodeId| -> Length {
            let mut best = vec![Length::MAX; g.n()];
            let mut heap = std::collections::BinaryHeap::new();
            best[a.0] = 0;
            heap.push(std::cmp::Reverse((0, a.0)));
            while let Some(std::cmp::Reverse((c, u))) = heap.pop() {
                if c > best[u] {
                    continue;
                }
                for &(v, w) in g.neighbors(NodeId(u)) {
                    if c + w < best[v.0] {
                        best[v.0] = c + w;
                        heap.push(std::cmp::Reverse((c + w, v.0)));
                    }
                }
            }
            best[b.0]
        };
        let resummed: Length = t.visits.windows(2).map(|p| hop(p[0], p[1])).sum();
        assert_eq!(resummed, tour_length(&d, &t));
    }

    fn arb_case() -> impl Strategy<Value = (DistanceOracle, Vec<NodeId>, NodeId)> {
        (any::<u64>(), 0usize..=9).prop_map(|(seed, k)| {
            let d = DistanceOracle::new(&generate(&GeneratorSpec::unit_disk(12, 0.5, 1.0, seed)).unwrap());
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
            let all: Vec<NodeId> = d.nodes().collect();
            let s: Vec<NodeId> = all.choose_multiple(&mut rng, k).copied().collect();
            let anchor = NodeId(rng.gen_range(0..d.n()));
            (d, s, anchor)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn tours_cover_exactly_the_stops((d, s, anchor) in arb_case()) {
            let h = build_hierarchy(&d, 2.0).unwrap();
            let mut expected = stops(&s, anchor);
            expected.sort();
            for kind in [TourKind::Mst, TourKind::Universal, TourKind::Exact] {
                let t = tour_of_kind(kind, &h, &d, &s, anchor);
                prop_assert_eq!(t.visits[0], anchor);
                let mut got = t.visits.clone();
                got.sort();
                prop_assert_eq!(&got, &expected);
            }
        }

        #[test]
        fn mst_within_twice_optimal((d, s, anchor) in arb_case()) {
            let mst = tour_length(&d, &mst_tour(&d, &s, anchor));
            let (_, best) = exact_tour(&d, &s, anchor).unwrap();
            prop_assert!(mst <= 2 * best);
        }

        #[test]
        fn exact_beats_random_orders((d, s, anchor) in arb_case(), seed in any::<u64>()) {
            let (_, best) = exact_tour(&d, &s, anchor).unwrap();
            let mut rest: Vec<NodeId> = stops(&s, anchor).into_iter().skip(1).collect();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..5 {
                rest.shuffle(&mut rng);
                let mut walk = vec![anchor];
                walk.extend(rest.iter().copied());
                prop_assert!(best <= d.walk_length(&walk));
            }
        }
    }
}
