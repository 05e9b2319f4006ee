//! Seeded synthetic road networks: nodes uniform in a lat/lon box, joined
//! into a connected graph from short edges first, with POIs placed on nodes.

use std::collections::HashSet;
use std::fmt::Write as _;

use gdrst_core::geo::GeoPoint;
use gdrst_core::haversine_distance;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{WorkbenchError, WorkbenchResult};

pub const PRESET_NODES: usize = 21_050;
pub const PRESET_EDGES: usize = 21_693;

pub const COST_CLASSES: [&str; 3] = ["LOW COST", "MEDIUM", "HIGH"];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BBox {
    pub lat_min: f64,
    pub lat_max: f64,
    pub lon_min: f64,
    pub lon_max: f64,
}

impl BBox {
    /// Southern California, roughly where the hospital table lives.
    pub const SOCAL: BBox = BBox { lat_min: 32.5, lat_max: 37.5, lon_min: -119.5, lon_max: -117.0 };

    /// `lat_min,lon_min,lat_max,lon_max`
    pub fn parse(s: &str) -> WorkbenchResult<Self> {
        let v: Vec<f64> = s
            .split(',')
            .map(|x| x.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| WorkbenchError::Usage(format!("bad bbox {s:?}")))?;
        let [lat_min, lon_min, lat_max, lon_max] = v[..] else {
            return Err(WorkbenchError::Usage(format!("bbox needs 4 numbers, got {s:?}")));
        };
        let b = BBox { lat_min, lat_max, lon_min, lon_max };
        if !(lat_min < lat_max && lon_min < lon_max && lat_min >= -90.0 && lat_max <= 90.0) {
            return Err(WorkbenchError::Usage(format!("degenerate bbox {s:?}")));
        }
        Ok(b)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorSpec {
    pub node_count: usize,
    /// Target edge count is `round(edge_factor * node_count)`.
    pub edge_factor: f64,
    pub bbox: BBox,
    pub poi_counts: Vec<(String, usize)>,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn full_scale(seed: u64) -> Self {
        Self {
            node_count: PRESET_NODES,
            edge_factor: PRESET_EDGES as f64 / PRESET_NODES as f64,
            bbox: BBox::SOCAL,
            poi_counts: default_poi_counts(),
            seed,
        }
    }

    pub fn edge_budget(&self) -> usize {
        (self.edge_factor * self.node_count as f64).round() as usize
    }
}

pub fn default_poi_counts() -> Vec<(String, usize)> {
    [("apartment", 200), ("hospital", 60), ("restaurant", 250), ("temple", 60), ("beach", 40)]
        .into_iter()
        .map(|(c, n)| (c.to_string(), n))
        .collect()
}

/// `category:count,category:count,...`
pub fn parse_poi_counts(s: &str) -> WorkbenchResult<Vec<(String, usize)>> {
    s.split(',')
        .filter(|x| !x.trim().is_empty())
        .map(|item| {
            let (c, n) = item
                .split_once(':')
                .ok_or_else(|| WorkbenchError::Usage(format!("expected category:count, got {item:?}")))?;
            let n = n.trim().parse().map_err(|_| WorkbenchError::Usage(format!("bad count in {item:?}")))?;
            Ok((c.trim().to_string(), n))
        })
        .collect()
}

/// Text of the three dataset files.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratedDataset {
    pub nodes: String,
    pub edges: String,
    pub pois: String,
    pub edge_count: usize,
}

struct DisjointSets {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        Self { parent: (0..n).collect(), rank: vec![0; n] }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (a, b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        match self.rank[a].cmp(&self.rank[b]) {
            std::cmp::Ordering::Less => self.parent[a] = b,
            std::cmp::Ordering::Greater => self.parent[b] = a,
            std::cmp::Ordering::Equal => {
                self.parent[b] = a;
                self.rank[a] += 1;
            }
        }
        true
    }
}

/// k nearest neighbours of every node as `(length, lo, hi)` pairs, found
/// through a bucket grid of roughly two nodes per bucket.
fn knn_pairs(points: &[GeoPoint<f64>], bbox: BBox, k: usize) -> Vec<(f64, usize, usize)> {
    let n = points.len();
    let side = ((n as f64 / 2.0).sqrt().ceil() as usize).max(1);
    let (dlat, dlon) = ((bbox.lat_max - bbox.lat_min) / side as f64, (bbox.lon_max - bbox.lon_min) / side as f64);
    let bucket_of = |p: GeoPoint<f64>| {
        let r = (((p.lat() - bbox.lat_min) / dlat) as usize).min(side - 1);
        let c = (((p.lon() - bbox.lon_min) / dlon) as usize).min(side - 1);
        (r, c)
    };
    let mut buckets = vec![Vec::new(); side * side];
    for (i, &p) in points.iter().enumerate() {
        let (r, c) = bucket_of(p);
        buckets[r * side + c].push(i);
    }
    let mut seen = HashSet::new();
    let mut pairs = Vec::new();
    for (i, &p) in points.iter().enumerate() {
        let (r, c) = bucket_of(p);
        let mut near: Vec<(f64, usize)> = Vec::new();
        let mut ring = 0usize;
        // one extra ring after k are found keeps bucket-shape misses rare
        let mut extra = 1;
        loop {
            let (r0, r1) = (r.saturating_sub(ring), (r + ring).min(side - 1));
            let (c0, c1) = (c.saturating_sub(ring), (c + ring).min(side - 1));
            for rr in r0..=r1 {
                for cc in c0..=c1 {
                    if rr.abs_diff(r) != ring && cc.abs_diff(c) != ring {
                        continue;
                    }
                    for &j in &buckets[rr * side + cc] {
                        if j != i {
                            near.push((haversine_distance(p, points[j]), j));
                        }
                    }
                }
            }
            let covered = ring >= side;
            if near.len() >= k || covered {
                if extra == 0 || covered {
                    break;
                }
                extra -= 1;
            }
            ring += 1;
        }
        near.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        for &(d, j) in near.iter().take(k) {
            let key = (i.min(j), i.max(j));
            if seen.insert(key) {
                pairs.push((d, key.0, key.1));
            }
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then((a.1, a.2).cmp(&(b.1, b.2))));
    pairs
}

/// Builds a connected network with exactly `edge_budget()` edges. Output is
/// a pure function of its input.
pub fn generate_dataset(spec: &GeneratorSpec) -> WorkbenchResult<GeneratedDataset> {
    let n = spec.node_count;
    let budget = spec.edge_budget();
    if n == 0 {
        return Err(WorkbenchError::Usage("node count must be positive".into()));
    }
    if budget + 1 < n {
        return Err(WorkbenchError::Usage(format!(
            "edge budget {budget} cannot connect {n} nodes (needs at least {})",
            n - 1
        )));
    }
    let max_edges = n * (n - 1) / 2;
    if budget > max_edges {
        return Err(WorkbenchError::Usage(format!("edge budget {budget} exceeds the {max_edges} possible pairs")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let b = spec.bbox;

    // Coordinates are rounded to the precision they are written with, so a
    // reloaded dataset has the exact same geometry.
    let round6 = |x: f64| (x * 1e6).round() / 1e6;
    let points: Vec<GeoPoint<f64>> = (0..n)
        .map(|_| {
            let lat = round6(rng.gen_range(b.lat_min..b.lat_max));
            let lon = round6(rng.gen_range(b.lon_min..b.lon_max));
            GeoPoint::new(lat, lon).expect("bbox is valid")
        })
        .collect();

    let mut chosen: Vec<(usize, usize)> = Vec::with_capacity(budget);
    let mut used: HashSet<(usize, usize)> = HashSet::new();
    let mut sets = DisjointSets::new(n);
    let mut k = 6;
    let mut pairs = knn_pairs(&points, b, k);
    for &(_, u, v) in &pairs {
        if sets.union(u, v) {
            chosen.push((u, v));
            used.insert((u, v));
        }
    }

    // Join leftover components, smallest first, by their shortest outgoing pair.
    loop {
        let mut members: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for i in 0..n {
            members.entry(sets.find(i)).or_default().push(i);
        }
        if members.len() <= 1 {
            break;
        }
        let smallest = members.values().min_by_key(|m| (m.len(), m[0])).unwrap().clone();
        let root = sets.find(smallest[0]);
        let mut best: Option<(f64, usize, usize)> = None;
        for &i in &smallest {
            for j in 0..n {
                if sets.find(j) == root {
                    continue;
                }
                let d = haversine_distance(points[i], points[j]);
                if best.is_none_or(|(bd, bi, bj)| (d, i.min(j), i.max(j)) < (bd, bi, bj)) {
                    best = Some((d, i.min(j), i.max(j)));
                }
            }
        }
        let (_, u, v) = best.expect("another component exists");
        sets.union(u, v);
        chosen.push((u, v));
        used.insert((u, v));
    }

    // Top up with the shortest unused pairs.
    while chosen.len() < budget {
        for &(_, u, v) in &pairs {
            if chosen.len() == budget {
                break;
            }
            if used.insert((u, v)) {
                chosen.push((u, v));
            }
        }
        if chosen.len() < budget {
            k *= 2;
            pairs = knn_pairs(&points, b, k.min(n - 1));
        }
    }
    chosen.sort_unstable();

    let mut nodes = String::new();
    for (i, p) in points.iter().enumerate() {
        let _ = writeln!(nodes, "{i},{:.6},{:.6}", p.lat(), p.lon());
    }
    let mut edges = String::new();
    for &(u, v) in &chosen {
        let speed = rng.gen_range(5.0..=25.0);
        let secs = (haversine_distance(points[u], points[v]) / speed).ceil().max(1.0) as u64;
        let _ = writeln!(edges, "{u},{v},{secs}");
    }

    let mut pois = String::new();
    for (category, count) in &spec.poi_counts {
        for j in 0..*count {
            let p = points[rng.gen_range(0..n)];
            let class = COST_CLASSES.choose(&mut rng).unwrap();
            let price = rng.gen_range(1..=40) * 5;
            let rating = rng.gen_range(10..=50) as f64 / 10.0;
            let _ = writeln!(
                pois,
                "{}{j},{:.6},{:.6},{category},cost_class={class},price={price},rating={rating:.1}",
                poi_prefix(category),
                p.lat(),
                p.lon(),
            );
        }
    }
    Ok(GeneratedDataset { nodes, edges, pois, edge_count: chosen.len() })
}

fn poi_prefix(category: &str) -> String {
    let mut s: String = category.chars().filter(|c| c.is_ascii_alphanumeric()).take(3).collect();
    s.make_ascii_uppercase();
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(seed: u64) -> GeneratorSpec {
        GeneratorSpec {
            node_count: 10,
            edge_factor: 1.5,
            bbox: BBox::SOCAL,
            poi_counts: vec![("cafe".into(), 3)],
            seed,
        }
    }

    #[test]
    fn same_seed_same_bytes() {
        assert_eq!(generate_dataset(&small(7)).unwrap(), generate_dataset(&small(7)).unwrap());
        assert_ne!(generate_dataset(&small(7)).unwrap(), generate_dataset(&small(8)).unwrap());
    }

    #[test]
    fn budget_below_spanning_requirement_is_rejected() {
        let spec = GeneratorSpec { edge_factor: 0.5, ..small(1) };
        assert!(matches!(generate_dataset(&spec), Err(WorkbenchError::Usage(_))));
    }

    #[test]
    fn dense_budget_is_met() {
        let spec = GeneratorSpec { node_count: 12, edge_factor: 5.0, ..small(3) };
        let d = generate_dataset(&spec).unwrap();
        assert_eq!(d.edge_count, 60);
        assert_eq!(d.edges.lines().count(), 60);
    }

    #[test]
    fn poi_counts_parse() {
        assert_eq!(
            parse_poi_counts("apartment:3, hospital:2").unwrap(),
            vec![("apartment".to_string(), 3), ("hospital".to_string(), 2)]
        );
        assert!(parse_poi_counts("apartment").is_err());
    }
}
