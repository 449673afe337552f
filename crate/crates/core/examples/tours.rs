//! Compares the MST, universal and exact tours over random stop sets.
//!
//! `cargo run --release --example tours -- [samples]`

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use txsched::hierarchy::build_hierarchy;
use txsched::metric::{generate, DistanceOracle, GeneratorSpec, NodeId};
use txsched::tours::{exact_tour, induced_tour, mst_tour, tour_length, universal_order};

fn main() {
    let samples = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(200);
    let g = generate(&GeneratorSpec::unit_disk(60, 0.25, 1.0, 3)).expect("unit disk");
    let d = DistanceOracle::new(&g);
    let h = build_hierarchy(&d, 2.0).expect("hierarchy");
    let universal = universal_order(&h, &d);
    let mut rng = ChaCha8Rng::seed_from_u64(9);

    let (mut worst_mst, mut worst_uni, mut sum_uni) = (1.0f64, 1.0f64, 0.0);
    for _ in 0..samples {
        let picked = sample(&mut rng, d.n(), 9);
        let nodes: Vec<NodeId> = picked.into_iter().map(NodeId).collect();
        let (anchor, stops) = nodes.split_first().expect("nonempty");
        let (_, star) = exact_tour(&d, stops, *anchor).expect("small set");
        if star == 0 {
            continue;
        }
        let m = tour_length(&d, &mst_tour(&d, stops, *anchor)) as f64 / star as f64;
        let u = tour_length(&d, &induced_tour(&universal, stops, *anchor)) as f64 / star as f64;
        worst_mst = worst_mst.max(m);
        worst_uni = worst_uni.max(u);
        sum_uni += u;
    }
    println!("{samples} stop sets of 8 plus an anchor on a 60-node unit-disk graph");
    println!("mst / exact:       worst {worst_mst:.3}");
    println!("universal / exact: worst {worst_uni:.3}, mean {:.3}", sum_uni / samples as f64);
}
