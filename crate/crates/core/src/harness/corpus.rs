//! Seeded scenario corpora over grids and unit-disk graphs.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::metric::{generate, DistanceOracle, GeneratorKind, GeneratorSpec, NodeId};
use crate::schedule::{CostModel, GraphSource, ObjectId, ObjectSpec, Scenario, SchedConfig, TransactionSpec, TxnId};
use crate::tours::TourKind;

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusBounds {
    pub min_nodes: usize,
    pub max_nodes: usize,
    pub max_txns: usize,
    pub objects: usize,
    /// Largest object set of one transaction.
    pub max_k: usize,
    pub alphas: Vec<u64>,
    pub unit_disk_radius: f64,
}

impl CorpusBounds {
    pub fn single_object(max_nodes: usize, max_txns: usize) -> Self {
        CorpusBounds {
            min_nodes: 4,
            max_nodes,
            max_txns,
            objects: 1,
            max_k: 1,
            alphas: vec![2, 4, 8],
            unit_disk_radius: 0.5,
        }
    }

    pub fn multi_object(max_nodes: usize, max_txns: usize, k: usize) -> Self {
        CorpusBounds { objects: k.max(1), max_k: k.max(1), ..Self::single_object(max_nodes, max_txns) }
    }
}

fn draw_graph(rng: &mut ChaCha8Rng, b: &CorpusBounds, grid: bool) -> GeneratorSpec {
    loop {
        let spec = if grid {
            let w = rng.gen_range(1..=b.max_nodes);
            let h = rng.gen_range(1..=b.max_nodes / w);
            if w * h < b.min_nodes {
                continue;
            }
            GeneratorSpec::grid(w, h)
        } else {
            let n = rng.gen_range(b.min_nodes..=b.max_nodes);
            GeneratorSpec::unit_disk(n, b.unit_disk_radius, 1.0, rng.gen())
        };
        // the direct-move bound degenerates at diameter 1
        match generate(&spec) {
            Ok(g) if DistanceOracle::new(&g).diameter() >= 2 => return spec,
            _ => continue,
        }
    }
}

/// `count` scenarios, alternating grids and unit-disk graphs, identical for
/// identical arguments.
pub fn corpus(seed: u64, count: usize, b: &CorpusBounds) -> Vec<Scenario> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let grid = i % 2 == 0;
        let spec = draw_graph(&mut rng, b, grid);
        let n = generate(&spec).expect("drawn graph generates").n();
        let home = NodeId(rng.gen_range(0..n));
        let objects: Vec<ObjectSpec> = (0..b.objects).map(|o| ObjectSpec { id: ObjectId(o), home }).collect();
        let txn_count = rng.gen_range(1..=b.max_txns);
        let transactions = (0..txn_count)
            .map(|t| {
                let k = rng.gen_range(1..=b.max_k.min(b.objects));
                let mut objs: Vec<ObjectId> = sample(&mut rng, b.objects, k).into_iter().map(ObjectId).collect();
                objs.sort();
                TransactionSpec { id: TxnId(t), home: NodeId(rng.gen_range(0..n)), objs }
            })
            .collect();
        let alpha = b.alphas[rng.gen_range(0..b.alphas.len())];
        let name = match &spec.kind {
            GeneratorKind::Grid { width, height } => format!("s{seed}-{i:03}-grid{width}x{height}"),
            GeneratorKind::UnitDisk { n, .. } => format!("s{seed}-{i:03}-disk{n}"),
        };
        let config = SchedConfig { sigma: 2.0, tour: TourKind::Mst, seed: rng.gen() };
        let sc = Scenario::new(
            name,
            GraphSource::Generated(spec),
            CostModel { alpha, beta: 1 },
            objects,
            transactions,
            config,
        )
        .expect("corpus scenarios are valid by construction");
        out.push(sc);
    }
    out
}
