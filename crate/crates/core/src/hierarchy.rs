//! Hierarchy of sparse partitions with per-cluster leaders.
//!
//! Level `l >= 0` is built from a greedy `r_l`-net (ascending node id) with
//! every node assigned to its nearest net point, ties to the lowest id. The
//! net point leads its cluster, so a cluster lies within `r_l` of its leader
//! and has diameter at most `2 r_l`. Level `-1` is the trivial partition and
//! level `h + 1` repeats the single top cluster of level `h`.

use std::fmt::Write as _;

use thiserror::Error;

use crate::metric::{doubling_dimension_estimate, DistanceOracle, Length, NodeId};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HierarchyError {
    #[error("stretch factor sigma must be at least 2, got {0}")]
    InvalidSigma(f64),
    #[error("level {level} cluster led by {leader} has diameter {diameter} > sigma * r = {bound}")]
    InvariantViolation { level: i32, leader: NodeId, diameter: Length, bound: f64 },
    #[error("cluster {0:?} is on the top level and has no parent")]
    NoParent(ClusterId),
    #[error("no cluster {0:?} in this hierarchy")]
    UnknownCluster(ClusterId),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PartitionParams {
    pub sigma: f64,
    /// `4 sigma`.
    pub rho: f64,
    /// Smallest `h >= 0` with `rho^h >= D`.
    pub h: u32,
    /// Measured intersection bound, maximum over all levels.
    pub intersection: usize,
    pub delta: u32,
    /// `2^(delta * log2(8 sigma))`.
    pub zeta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClusterId {
    pub level: i32,
    pub index: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cluster {
    pub id: ClusterId,
    pub level: i32,
    /// Ascending.
    pub members: Vec<NodeId>,
    pub leader: NodeId,
}

impl Cluster {
    pub fn contains(&self, v: NodeId) -> bool {
        self.members.binary_search(&v).is_ok()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PartitionLevel {
    pub level: i32,
    /// `min(D, rho^l)`.
    pub radius: f64,
    /// Ordered by ascending leader id.
    pub clusters: Vec<Cluster>,
    cluster_of: Vec<usize>,
}

impl PartitionLevel {
    /// Cluster holding node `v` on this level.
    pub fn cluster_of(&self, v: NodeId) -> &Cluster {
        &self.clusters[self.cluster_of[v.index()]]
    }

    pub fn cluster_index_of(&self, v: NodeId) -> usize {
        self.cluster_of[v.index()]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PartitionReport {
    pub max_diameter: Length,
    pub measured_i: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PartitionHierarchy {
    pub params: PartitionParams,
    diameter: Length,
    /// Index `l + 1` holds level `l`, for `l` in `-1..=h+1`.
    levels: Vec<PartitionLevel>,
    /// `parent_of[l + 1][i]`: index on level `l + 1` of the cluster holding
    /// the leader of cluster `i` on level `l`. Empty for the last level.
    parent_of: Vec<Vec<usize>>,
    children_of: Vec<Vec<Vec<usize>>>,
}

/// Radius of level `l`: `min(D, rho^l)`.
pub fn level_radius(diameter: Length, rho: f64, level: i32) -> f64 {
    (diameter as f64).min(rho.powi(level))
}

/// Smallest `h >= 0` with `rho^h >= D`.
pub fn top_level(diameter: Length, rho: f64) -> u32 {
    let mut h = 0;
    let mut reach = 1.0f64;
    while reach < diameter as f64 {
        reach *= rho;
        h += 1;
    }
    h
}

/// `2^(delta * log2(8 sigma))`.
pub fn zeta(delta: u32, sigma: f64) -> f64 {
    2f64.powf(delta as f64 * (8.0 * sigma).log2())
}

fn greedy_level(d: &DistanceOracle, level: i32, radius: f64) -> PartitionLevel {
    let mut net: Vec<NodeId> = Vec::new();
    for v in d.nodes() {
        if net.iter().all(|&p| d.dist(p, v) as f64 > radius) {
            net.push(v);
        }
    }
    let mut members = vec![Vec::new(); net.len()];
    let mut cluster_of = vec![0; d.n()];
    for v in d.nodes() {
        let mut best = 0;
        for (i, &p) in net.iter().enumerate().skip(1) {
            if d.dist(p, v) < d.dist(net[best], v) {
                best = i;
            }
        }
        members[best].push(v);
        cluster_of[v.index()] = best;
    }
    let clusters = net
        .iter()
        .zip(members)
        .enumerate()
        .map(|(index, (&leader, members))| Cluster { id: ClusterId { level, index }, level, members, leader })
        .collect();
    PartitionLevel { level, radius, clusters, cluster_of }
}

fn trivial_level(d: &DistanceOracle, radius: f64) -> PartitionLevel {
    let clusters = d
        .nodes()
        .map(|v| Cluster { id: ClusterId { level: -1, index: v.index() }, level: -1, members: vec![v], leader: v })
        .collect();
    PartitionLevel { level: -1, radius, clusters, cluster_of: (0..d.n()).collect() }
}

/// Largest intra-cluster distance and the measured intersection count
/// `max_v |{X : X ∩ N_r(v) != ∅}|` of one level.
pub fn verify_partition(d: &DistanceOracle, lvl: &PartitionLevel) -> PartitionReport {
    let max_diameter = lvl.clusters.iter().map(|c| cluster_diameter(d, c)).max().unwrap_or(0);
    let mut measured_i = 0;
    let mut hit = vec![usize::MAX; lvl.clusters.len()];
    for v in d.nodes() {
        let mut count = 0;
        for u in d.neighborhood(v, lvl.radius) {
            let c = lvl.cluster_index_of(u);
            if hit[c] != v.index() {
                hit[c] = v.index();
                count += 1;
            }
        }
        measured_i = measured_i.max(count);
    }
    PartitionReport { max_diameter, measured_i }
}

pub fn cluster_diameter(d: &DistanceOracle, c: &Cluster) -> Length {
    let mut worst = 0;
    for (i, &u) in c.members.iter().enumerate() {
        for &v in &c.members[i + 1..] {
            worst = worst.max(d.dist(u, v));
        }
    }
    worst
}

/// Builds the hierarchy for the metric `d` with stretch `sigma >= 2`.
pub fn build_hierarchy(d: &DistanceOracle, sigma: f64) -> Result<PartitionHierarchy, HierarchyError> {
    if sigma.is_nan() || sigma < 2.0 || !sigma.is_finite() {
        return Err(HierarchyError::InvalidSigma(sigma));
    }
    let rho = 4.0 * sigma;
    let diameter = d.diameter();
    let h = top_level(diameter, rho);
    let mut levels = vec![trivial_level(d, level_radius(diameter, rho, -1))];
    for l in 0..=(h as i32 + 1) {
        let lvl = greedy_level(d, l, level_radius(diameter, rho, l));
        let bound = sigma * lvl.radius;
        for c in &lvl.clusters {
            let diameter = cluster_diameter(d, c);
            if diameter as f64 > bound {
                return Err(HierarchyError::InvariantViolation { level: l, leader: c.leader, diameter, bound });
            }
        }
        levels.push(lvl);
    }

    let mut parent_of = Vec::with_capacity(levels.len());
    let mut children_of: Vec<Vec<Vec<usize>>> = levels.iter().map(|l| vec![Vec::new(); l.clusters.len()]).collect();
    for li in 0..levels.len() {
        if li + 1 == levels.len() {
            parent_of.push(Vec::new());
            continue;
        }
        let parents: Vec<usize> =
            levels[li].clusters.iter().map(|c| levels[li + 1].cluster_index_of(c.leader)).collect();
        for (child, &p) in parents.iter().enumerate() {
            children_of[li + 1][p].push(child);
        }
        parent_of.push(parents);
    }

    let intersection = levels.iter().map(|l| verify_partition(d, l).measured_i).max().unwrap_or(1);
    let delta = doubling_dimension_estimate(d);
    let params = PartitionParams { sigma, rho, h, intersection, delta, zeta: zeta(delta, sigma) };
    Ok(PartitionHierarchy { params, diameter, levels, parent_of, children_of })
}

impl PartitionHierarchy {
    pub fn h(&self) -> u32 {
        self.params.h
    }

    pub fn diameter(&self) -> Length {
        self.diameter
    }

    /// Highest level index stored (`h + 1`).
    pub fn last_level(&self) -> i32 {
        self.levels.len() as i32 - 2
    }

    pub fn levels(&self) -> impl Iterator<Item = &PartitionLevel> {
        self.levels.iter()
    }

    pub fn level(&self, l: i32) -> &PartitionLevel {
        &self.levels[(l + 1) as usize]
    }

    pub fn cluster(&self, id: ClusterId) -> Result<&Cluster, HierarchyError> {
        if id.level < -1 || id.level > self.last_level() {
            return Err(HierarchyError::UnknownCluster(id));
        }
        self.level(id.level).clusters.get(id.index).ok_or(HierarchyError::UnknownCluster(id))
    }

    /// The cluster one level up that contains `c`'s leader.
    pub fn parent_leader(&self, c: ClusterId) -> Result<&Cluster, HierarchyError> {
        self.cluster(c)?;
        if c.level >= self.last_level() {
            return Err(HierarchyError::NoParent(c));
        }
        let p = self.parent_of[(c.level + 1) as usize][c.index];
        Ok(&self.level(c.level + 1).clusters[p])
    }

    /// Clusters one level down whose parent is `c`, ascending index.
    pub fn children(&self, c: ClusterId) -> Vec<&Cluster> {
        if c.level <= -1 {
            return Vec::new();
        }
        let below = self.level(c.level - 1);
        self.children_of[(c.level + 1) as usize][c.index].iter().map(|&i| &below.clusters[i]).collect()
    }

    /// The single cluster of level `h`.
    pub fn top_cluster(&self) -> &Cluster {
        &self.level(self.h() as i32).clusters[0]
    }

    /// Leader of the top cluster.
    pub fn root(&self) -> NodeId {
        self.top_cluster().leader
    }

    /// One line per cluster: level, radius, leader, members.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for lvl in &self.levels {
            for c in &lvl.clusters {
                let members: Vec<String> = c.members.iter().map(|m| m.to_string()).collect();
                let _ = writeln!(
                    out,
                    "level={} radius={} leader={} members={}",
                    lvl.level,
                    lvl.radius,
                    c.leader,
                    members.join(",")
                );
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{generate, GeneratorSpec, WeightedGraph};

    fn metric_of(g: &WeightedGraph) -> DistanceOracle {
        DistanceOracle::new(g)
    }

    fn path(n: usize) -> DistanceOracle {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i, 1)).collect();
        metric_of(&WeightedGraph::new(n, &edges).unwrap())
    }

    #[test]
    fn single_node() {
        let d = metric_of(&WeightedGraph::new(1, &[]).unwrap());
        let h = build_hierarchy(&d, 2.0).unwrap();
        assert_eq!(h.h(), 0);
        for lvl in h.levels() {
            assert_eq!(lvl.clusters.len(), 1);
            assert_eq!(lvl.clusters[0].members, vec![NodeId(0)]);
        }
        assert_eq!(h.params.zeta, 1.0);
    }

    #[test]
    fn path_of_five() {
        let d = path(5);
        let h = build_hierarchy(&d, 2.0).unwrap();
        assert_eq!(d.diameter(), 4);
        assert_eq!(h.params.rho, 8.0);
        assert_eq!(h.h(), 1);
        assert_eq!(h.last_level(), 2);
        let top = h.level(1);
        assert_eq!(top.clusters.len(), 1);
        assert_eq!(top.clusters[0].members.len(), 5);
        for c in &h.level(0).clusters {
            let p = h.parent_leader(c.id).unwrap();
            assert_eq!(p.id, top.clusters[0].id);
        }
        // level 0, r = 1: net {0, 2, 4}
        let leaders: Vec<_> = h.level(0).clusters.iter().map(|c| c.leader.0).collect();
        assert_eq!(leaders, vec![0, 2, 4]);
    }

    #[test]
    fn parent_of_singleton_contains_it() {
        let d = metric_of(&generate(&GeneratorSpec::grid(4, 4)).unwrap());
        let h = build_hierarchy(&d, 2.0).unwrap();
        for c in &h.level(-1).clusters {
            let p = h.parent_leader(c.id).unwrap();
            assert_eq!(p.level, 0);
            assert!(p.contains(c.leader));
        }
        // a leader that also leads one level up maps onto its own cluster
        for l in 0..h.last_level() {
            for c in &h.level(l).clusters {
                let p = h.parent_leader(c.id).unwrap();
                if h.level(l + 1).clusters.iter().any(|x| x.leader == c.leader) {
                    assert_eq!(p.leader, c.leader);
                }
            }
        }
        let top = h.level(h.last_level()).clusters[0].id;
        assert!(matches!(h.parent_leader(top), Err(HierarchyError::NoParent(_))));
    }

    #[test]
    fn grid_levels_respect_diameter_and_partition() {
        let d = metric_of(&generate(&GeneratorSpec::grid(8, 8)).unwrap());
        let h = build_hierarchy(&d, 2.0).unwrap();
        for lvl in h.levels() {
            let mut seen = vec![0; d.n()];
            for c in &lvl.clusters {
                assert!(c.contains(c.leader));
                for &m in &c.members {
                    seen[m.index()] += 1;
                }
                if lvl.level >= 0 {
                    for &u in &c.members {
                        for &v in &c.members {
                            assert!(d.dist(u, v) as f64 <= 2.0 * lvl.radius);
                        }
                    }
                }
            }
            assert!(seen.iter().all(|&s| s == 1));
        }
    }

    #[test]
    fn verify_partition_extremes() {
        let d = metric_of(&generate(&GeneratorSpec::grid(4, 4)).unwrap());
        let h = build_hierarchy(&d, 2.0).unwrap();
        let trivial = verify_partition(&d, h.level(-1));
        assert_eq!(trivial.max_diameter, 0);
        assert_eq!(trivial.measured_i, 1);
        assert_eq!(verify_partition(&d, h.level(h.h() as i32)).measured_i, 1);

        // brute-force count for level 0 against the bound 2^(3 delta)
        let lvl = h.level(0);
        let mut brute = 0;
        for v in d.nodes() {
            let hits =
                lvl.clusters.iter().filter(|c| c.members.iter().any(|&u| d.dist(u, v) as f64 <= lvl.radius)).count();
            brute = brute.max(hits);
        }
        let report = verify_partition(&d, lvl);
        assert_eq!(report.measured_i, brute);
        assert!((report.measured_i as f64) <= 2f64.powi(3 * h.params.delta as i32));
    }

    #[test]
    fn parent_chains_reach_top() {
        let d = metric_of(&generate(&GeneratorSpec::unit_disk(40, 0.3, 1.0, 3)).unwrap());
        let h = build_hierarchy(&d, 2.0).unwrap();
        let top = h.top_cluster().id;
        for c in &h.level(-1).clusters {
            let mut cur = c.id;
            for _ in 0..=h.h() {
                cur = h.parent_leader(cur).unwrap().id;
            }
            assert_eq!(cur, top);
        }
    }

    #[test]
    fn deterministic_rebuild() {
        let d = metric_of(&generate(&GeneratorSpec::unit_disk(30, 0.35, 1.0, 11)).unwrap());
        assert_eq!(build_hierarchy(&d, 2.0).unwrap(), build_hierarchy(&d, 2.0).unwrap());
    }

    #[test]
    fn rejects_small_sigma() {
        let d = path(3);
        assert!(matches!(build_hierarchy(&d, 1.5), Err(HierarchyError::InvalidSigma(_))));
    }

    #[test]
    fn level_formula() {
        assert_eq!(top_level(0, 8.0), 0);
        assert_eq!(top_level(1, 8.0), 0);
        assert_eq!(top_level(8, 8.0), 1);
        assert_eq!(top_level(9, 8.0), 2);
        assert_eq!(level_radius(30, 8.0, 1), 8.0);
        assert_eq!(level_radius(30, 8.0, 2), 30.0);
        assert_eq!(zeta(1, 2.0), 16.0);
    }

    #[test]
    fn dump_lists_every_cluster() {
        let d = path(5);
        let h = build_hierarchy(&d, 2.0).unwrap();
        let text = h.dump();
        let count: usize = h.levels().map(|l| l.clusters.len()).sum();
        assert_eq!(text.lines().count(), count);
        assert!(text.starts_with("level=-1 radius=0.125 leader=0 members=0"));
    }
}
