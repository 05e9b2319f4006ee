#![allow(dead_code)]

use std::fmt::Write as _;

use gdrst_core::geo::{GeoPoint, Heading};
use gdrst_core::grid::{build_grid, GridIndex};
use gdrst_core::network::{load_network, RoadNetwork};
use gdrst_core::poi::{load_pois, PoiCatalog, PreferenceSpec};
use gdrst_core::query::{Objective, SkylineQuery};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;
pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random connected-ish graph: a random spanning tree plus extra edges, with
/// a few isolated nodes when `isolated` is set. Weights are whole seconds.
pub fn random_graph_text(rng: &mut TestRng, n: usize, extra: usize, isolated: usize) -> (String, String) {
    let mut nodes = String::new();
    for i in 0..n {
        let lat = 34.0 + rng.gen_range(0.0..0.2);
        let lon = -118.0 + rng.gen_range(0.0..0.2);
        let _ = writeln!(nodes, "{i},{lat:.5},{lon:.5}");
    }
    let connected = n.saturating_sub(isolated);
    let mut edges = String::new();
    for i in 1..connected {
        let j = rng.gen_range(0..i);
        let _ = writeln!(edges, "{i},{j},{}", rng.gen_range(1..100));
    }
    for _ in 0..extra {
        if connected < 2 {
            break;
        }
        let a = rng.gen_range(0..connected);
        let b = rng.gen_range(0..connected);
        let _ = writeln!(edges, "{a},{b},{}", rng.gen_range(1..100));
    }
    (nodes, edges)
}

pub fn random_graph(rng: &mut TestRng, n: usize, extra: usize, isolated: usize) -> RoadNetwork<f64> {
    let (nodes, edges) = random_graph_text(rng, n, extra, isolated);
    load_network(&nodes, &edges).unwrap()
}

pub const CATEGORIES: [&str; 4] = ["apartment", "hospital", "restaurant", "temple"];
pub const CLASSES: [&str; 3] = ["LOW COST", "MEDIUM", "HIGH"];

pub struct Instance {
    pub net: RoadNetwork<f64>,
    pub grid: GridIndex<f64>,
    pub catalog: PoiCatalog<f64>,
}

/// Network plus POIs placed at random node coordinates with small integer
/// attributes (to provoke ties).
pub fn random_instance(rng: &mut TestRng, n: usize, pois: usize) -> Instance {
    let isolated = rng.gen_range(0..3);
    let net = random_graph(rng, n, n / 3, isolated);
    let grid = build_grid(&net, (0.02, 0.02)).unwrap();
    let nodes: Vec<_> = net.nodes().collect();
    let mut text = String::new();
    for i in 0..pois {
        let (_, p) = nodes[rng.gen_range(0..nodes.len())];
        let cat = CATEGORIES[rng.gen_range(0..CATEGORIES.len())];
        let class = CLASSES[rng.gen_range(0..CLASSES.len())];
        let _ = writeln!(
            text,
            "P{i},{},{},{cat},cost_class={class},price={},rating={}",
            p.lat(),
            p.lon(),
            rng.gen_range(1..6) * 10,
            rng.gen_range(1..6)
        );
    }
    let catalog = load_pois(&text, &net, &grid).unwrap();
    Instance { net, grid, catalog }
}

pub fn random_spec(rng: &mut TestRng, category: &str) -> PreferenceSpec<f64> {
    let mut spec = PreferenceSpec::category(category);
    if rng.gen_bool(0.3) {
        let mut classes = CLASSES.to_vec();
        classes.shuffle(rng);
        spec = spec.with_labels("cost_class", &classes[..rng.gen_range(1..3)]);
    }
    if rng.gen_bool(0.2) {
        spec = spec.with_range("price", 10.0, 40.0);
    }
    spec
}

/// Query with 2-4 cost dimensions and a half-angle of 90 or 180 degrees.
pub fn random_query(rng: &mut TestRng) -> SkylineQuery<f64> {
    let origin = GeoPoint::new(34.0 + rng.gen_range(0.0..0.2), -118.0 + rng.gen_range(0.0..0.2)).unwrap();
    let half = if rng.gen_bool(0.5) { 90.0 } else { 180.0 };
    let heading = Heading::new(rng.gen_range(0.0..360.0), half).unwrap();
    let mut cats = CATEGORIES.to_vec();
    cats.shuffle(rng);
    let mut q = SkylineQuery::new(origin, heading, random_spec(rng, cats[0]));
    let dims = rng.gen_range(2..=4);
    let n_secondary = rng.gen_range(0..dims);
    for c in cats.iter().skip(1).take(n_secondary) {
        q = q.with_secondary(random_spec(rng, c));
    }
    let attrs = ["price", "rating"];
    for k in 0..(dims - 1 - n_secondary) {
        let o = if rng.gen_bool(0.5) { Objective::minimize(attrs[k % 2]) } else { Objective::maximize(attrs[k % 2]) };
        q = q.with_objective(o);
    }
    q
}

/// Up to 300 nodes and 60 POIs.
pub fn random_sized_instance(rng: &mut TestRng) -> Instance {
    let n = rng.gen_range(2..=300);
    let pois = rng.gen_range(1..=60);
    random_instance(rng, n, pois)
}
