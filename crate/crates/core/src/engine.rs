//! Goal-directed skyline evaluation: nearest vertex, filter phase, heap
//! phase, skyline refinement and result caching.

use std::collections::HashMap;
use std::time::Instant;

use crate::cache::{CacheKey, SkylineCache};
use crate::error::Result;
use crate::geo::{haversine_distance, within_sector, GeoPoint};
use crate::grid::GridIndex;
use crate::network::{IncrementalSearch, IndexStop, NodeId, RoadNetwork, SpeedBound, TravelTimeField};
use crate::poi::{filter_phase, Poi, PoiCatalog, PreferenceSpec};
use crate::query::{Objective, SkylineQuery};
use crate::scalar::Scalar;
use crate::skyline::{dominates_values, skyline_of, CostVector, Schema, Sense, SkylineResult};

/// Read-only view of everything a query runs against.
#[derive(Debug, Clone, Copy)]
pub struct Snapshot<'a, T> {
    pub network: &'a RoadNetwork<T>,
    pub catalog: &'a PoiCatalog<T>,
    pub grid: &'a GridIndex<T>,
}

impl<'a, T: Scalar> Snapshot<'a, T> {
    pub fn new(network: &'a RoadNetwork<T>, catalog: &'a PoiCatalog<T>, grid: &'a GridIndex<T>) -> Self {
        Self { network, catalog, grid }
    }
}

/// A candidate whose cost vector is filled in one dimension at a time.
#[derive(Debug, Clone)]
pub struct HeapEntry<T> {
    pub poi_id: String,
    pub node: NodeId,
    pub vector: CostVector<T>,
    /// Index of the first dimension not yet evaluated.
    pub next_dim: usize,
}

#[derive(Debug, Clone)]
pub struct HeapOutcome<T> {
    /// Entries ordered by travel time from the origin vertex, then id.
    pub entries: Vec<HeapEntry<T>>,
    pub expansions: u64,
    pub warnings: Vec<String>,
}

/// Runs a query, serving it from `cache` when a fresh entry exists.
/// Returns the result and whether it was a cache hit.
pub fn execute_query<T: Scalar>(
    snap: Snapshot<'_, T>,
    cache: &SkylineCache<T>,
    query: &SkylineQuery<T>,
) -> Result<(SkylineResult<T>, bool)> {
    let started = Instant::now();
    query.validate(snap.catalog)?;
    let key = CacheKey::for_query(snap.grid, query);
    if let Some(mut hit) = cache.lookup(&key, snap.network.revision()) {
        hit.expansions = 0;
        hit.cpu_nanos = started.elapsed().as_nanos() as u64;
        return Ok((hit, true));
    }
    let mut result = compute(snap, query)?;
    result.cpu_nanos = started.elapsed().as_nanos() as u64;
    cache.store(key, result.clone());
    Ok((result, false))
}

/// Uncached evaluation: nearest vertex, filter phase with the sector test,
/// then [`progressive_refine`].
pub fn compute<T: Scalar>(snap: Snapshot<'_, T>, query: &SkylineQuery<T>) -> Result<SkylineResult<T>> {
    let started = Instant::now();
    query.validate(snap.catalog)?;
    let net = snap.network;
    let origin_vertex = snap.grid.nearest_node(query.origin, Some(query.heading))?;

    let candidates: Vec<&Poi<T>> = filter_phase(snap.catalog, &query.primary)
        .iter()
        .map(|id| snap.catalog.get(id).expect("filter returns catalog ids"))
        .filter(|p| within_sector(query.origin, query.heading, p.location))
        .collect();
    let mut result = SkylineResult::empty(net.revision());
    if candidates.is_empty() {
        result.cpu_nanos = started.elapsed().as_nanos() as u64;
        return Ok(result);
    }

    let start_ix = net.index_of(origin_vertex).expect("grid and network agree");
    let outcome = progressive_refine(
        net,
        snap.catalog,
        start_ix,
        &candidates,
        &query.secondary,
        &query.objectives,
        query.schema(),
    );
    result.expansions = outcome.expansions;
    result.warnings = outcome.warnings;
    result.members = skyline_of(outcome.complete);
    result.cpu_nanos = started.elapsed().as_nanos() as u64;
    Ok(result)
}

/// Result of [`progressive_refine`].
#[derive(Debug, Clone)]
pub struct RefineOutcome<T> {
    /// Fully evaluated candidates that were never shown to be dominated.
    pub complete: Vec<CostVector<T>>,
    /// Candidates dropped because a complete vector dominated their bounds.
    pub pruned: usize,
    pub expansions: u64,
    pub warnings: Vec<String>,
}

struct Pending<'p, T> {
    poi: &'p Poi<T>,
    node: usize,
    values: Vec<T>,
    /// Straight-line lower bounds on the secondary travel times.
    geometric: Option<Vec<T>>,
    reached: bool,
    live: bool,
}

/// Heap and refine phases driven by one expansion from the origin vertex.
///
/// Candidates are met in travel-time order. Each one is first checked
/// against the complete vectors seen so far using lower bounds for its
/// secondary travel times; only a candidate that may still be an answer has
/// those times computed, each by a search from the candidate to the nearest
/// matching POI that is abandoned once its radius alone proves the candidate
/// dominated. The origin expansion stops when every candidate it has not
/// reached is dominated at the current frontier.
pub fn progressive_refine<T: Scalar>(
    net: &RoadNetwork<T>,
    catalog: &PoiCatalog<T>,
    origin_ix: usize,
    candidates: &[&Poi<T>],
    secondary: &[PreferenceSpec<T>],
    objectives: &[Objective],
    schema: Schema,
) -> RefineOutcome<T> {
    let n_travel = 1 + secondary.len();
    let mut outcome = RefineOutcome { complete: Vec::new(), pruned: 0, expansions: 0, warnings: Vec::new() };

    let mut member_nodes: Vec<Vec<usize>> = Vec::with_capacity(secondary.len());
    for spec in secondary {
        let members: Vec<usize> =
            filter_phase(catalog, spec).iter().map(|id| node_ix(net, catalog.get(id).unwrap().snapped_node)).collect();
        if members.is_empty() {
            outcome.warnings.push(format!("no POI satisfies preference {}", spec.canonical()));
        }
        member_nodes.push(members);
    }
    if member_nodes.iter().any(Vec::is_empty) {
        return outcome;
    }
    let member_marks: Vec<Vec<bool>> = member_nodes
        .iter()
        .map(|m| {
            let mut marks = vec![false; net.node_count()];
            m.iter().for_each(|&ix| marks[ix] = true);
            marks
        })
        .collect();
    let member_points: Vec<Vec<GeoPoint<T>>> =
        member_nodes.iter().map(|m| m.iter().map(|&ix| net.coord_at(ix)).collect()).collect();
    let speed = SpeedBound::new(net.max_edge_speed());
    let geometric = |node: usize| -> Vec<T> {
        let at = net.coord_at(node);
        member_points
            .iter()
            .map(|pts| speed.seconds(pts.iter().map(|&m| haversine_distance(at, m)).fold(T::infinity(), T::min)))
            .collect()
    };

    let mut pending: Vec<Pending<'_, T>> = Vec::with_capacity(candidates.len());
    for &poi in candidates {
        let mut values = vec![T::infinity(); schema.len()];
        let mut live = true;
        for (j, o) in objectives.iter().enumerate() {
            match poi.attribute(&o.attribute) {
                Some(v) if o.sense == Sense::Minimize => values[n_travel + j] = v,
                Some(v) => values[n_travel + j] = -v,
                None => live = false,
            }
        }
        let node = node_ix(net, poi.snapped_node);
        pending.push(Pending { poi, node, values, geometric: None, reached: false, live });
    }
    let mut at_node: HashMap<usize, Vec<usize>> = HashMap::new();
    for (i, p) in pending.iter().enumerate().filter(|(_, p)| p.live) {
        at_node.entry(p.node).or_default().push(i);
    }
    let mut unreached = pending.iter().filter(|p| p.live).count();

    let mut from_origin = IncrementalSearch::new(net.node_count(), &[origin_ix]);
    let mut probe = IncrementalSearch::new(net.node_count(), &[]);
    // complete, mutually non-dominated vectors used for pruning
    let mut window: Vec<Vec<T>> = Vec::new();
    let mut since_sweep = 0u32;
    let mut bound = vec![T::zero(); schema.len()];

    while unreached > 0 {
        let Some((ix, t0)) = from_origin.settle_next(net) else { break };
        for &i in at_node.get(&ix).map_or(&[][..], Vec::as_slice) {
            let p = &mut pending[i];
            if !p.live || p.reached {
                continue;
            }
            p.reached = true;
            unreached -= 1;
            p.values[0] = T::from_seconds(t0);
            let lower = p.geometric.get_or_insert_with(|| geometric(p.node)).clone();
            bound.copy_from_slice(&p.values);
            bound[1..n_travel].copy_from_slice(&lower);

            let mut alive = !window.iter().any(|w| dominates_values(w, &bound));
            for k in 1..n_travel {
                if !alive {
                    break;
                }
                probe.restart(&[p.node]);
                let mut steps = 0u32;
                let found = loop {
                    let Some((u, d)) = probe.settle_next(net) else { break None };
                    if member_marks[k - 1][u] {
                        break Some(d);
                    }
                    steps += 1;
                    if steps.is_multiple_of(16) {
                        if let Some(r) = probe.frontier() {
                            bound[k] = lower[k - 1].max(T::from_seconds(r));
                            if window.iter().any(|w| dominates_values(w, &bound)) {
                                alive = false;
                                outcome.pruned += 1;
                                break None;
                            }
                        }
                    }
                };
                match found {
                    Some(d) => {
                        p.values[k] = T::from_seconds(d);
                        bound[k] = p.values[k];
                        if k + 1 < n_travel && window.iter().any(|w| dominates_values(w, &bound)) {
                            alive = false;
                            outcome.pruned += 1;
                        }
                    }
                    None => alive = false,
                }
            }
            if !alive {
                p.live = false;
                continue;
            }
            if !window.iter().any(|w| dominates_values(w, &p.values)) {
                window.retain(|w| !dominates_values(&p.values, w));
                window.push(p.values.clone());
            }
            outcome.complete.push(CostVector::new(p.poi.id.clone(), schema.clone(), p.values.clone()));
        }

        since_sweep += 1;
        if since_sweep >= 64 && !window.is_empty() {
            since_sweep = 0;
            let Some(f) = from_origin.frontier() else { break };
            let f = T::from_seconds(f);
            for p in pending.iter_mut().filter(|p| p.live && !p.reached) {
                let lower = p.geometric.get_or_insert_with(|| geometric(p.node));
                bound.copy_from_slice(&p.values);
                bound[0] = f;
                bound[1..n_travel].copy_from_slice(lower);
                if window.iter().any(|w| dominates_values(w, &bound)) {
                    p.live = false;
                    unreached -= 1;
                    outcome.pruned += 1;
                }
            }
        }
    }

    outcome.expansions = from_origin.settled_count + probe.settled_count;
    outcome
}

fn node_ix<T: Scalar>(net: &RoadNetwork<T>, node: NodeId) -> usize {
    net.index_of(node).expect("POIs are snapped to network nodes")
}

fn all_targets<T: Scalar>(net: &RoadNetwork<T>, targets: &[usize]) -> IndexStop {
    let mut marks = vec![false; net.node_count()];
    let mut count = 0;
    for &t in targets {
        if !marks[t] {
            marks[t] = true;
            count += 1;
        }
    }
    IndexStop::AllTargets(marks, count)
}

/// Exhaustive heap phase: every candidate's full cost vector, with no
/// pruning. Dimensions are the travel time from the origin vertex, the
/// travel time to the nearest POI admitted by each secondary preference, and
/// the attribute objectives. Each secondary preference is filtered first and
/// expanded once as a multi-source search that stops when every pending
/// candidate is settled. Candidates missing a dimension are marked
/// unreachable.
pub fn heap_phase<T: Scalar>(
    net: &RoadNetwork<T>,
    catalog: &PoiCatalog<T>,
    origin_field: &TravelTimeField,
    candidates: &[&Poi<T>],
    secondary: &[PreferenceSpec<T>],
    objectives: &[Objective],
    schema: Schema,
) -> HeapOutcome<T> {
    let mut entries: Vec<HeapEntry<T>> = candidates
        .iter()
        .map(|p| {
            let mut vector = CostVector::new(p.id.clone(), schema.clone(), vec![T::infinity(); schema.len()]);
            match origin_field.time_at(node_ix(net, p.snapped_node)) {
                Some(t) => vector.values[0] = T::from_seconds(t),
                None => vector.unreachable = true,
            }
            HeapEntry { poi_id: p.id.clone(), node: p.snapped_node, vector, next_dim: 1 }
        })
        .collect();
    entries.sort_by(|a, b| {
        a.vector.values[0]
            .partial_cmp(&b.vector.values[0])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then_with(|| a.poi_id.cmp(&b.poi_id))
    });

    let mut expansions = 0u64;
    let mut warnings = Vec::new();
    for (i, spec) in secondary.iter().enumerate() {
        let dim = 1 + i;
        let members: Vec<usize> =
            filter_phase(catalog, spec).iter().map(|id| node_ix(net, catalog.get(id).unwrap().snapped_node)).collect();
        if members.is_empty() {
            warnings.push(format!("no POI satisfies preference {}", spec.canonical()));
            for e in &mut entries {
                e.vector.unreachable = true;
                e.next_dim = dim + 1;
            }
            continue;
        }
        let pending: Vec<usize> =
            entries.iter().filter(|e| !e.vector.unreachable).map(|e| node_ix(net, e.node)).collect();
        if pending.is_empty() {
            continue;
        }
        let field = net.dijkstra(&members, &all_targets(net, &pending), |_| true);
        expansions += field.settled() as u64;
        for e in entries.iter_mut().filter(|e| !e.vector.unreachable) {
            match field.time_at(node_ix(net, e.node)) {
                Some(t) => e.vector.values[dim] = T::from_seconds(t),
                None => e.vector.unreachable = true,
            }
            e.next_dim = dim + 1;
        }
    }

    let offset = 1 + secondary.len();
    for e in entries.iter_mut().filter(|e| !e.vector.unreachable) {
        let poi = catalog.get(&e.poi_id).unwrap();
        for (j, o) in objectives.iter().enumerate() {
            match poi.attribute(&o.attribute) {
                Some(v) => {
                    e.vector.values[offset + j] = match o.sense {
                        Sense::Minimize => v,
                        Sense::Maximize => -v,
                    }
                }
                None => e.vector.unreachable = true,
            }
        }
        e.next_dim = schema.len();
    }

    HeapOutcome { entries, expansions, warnings }
}
