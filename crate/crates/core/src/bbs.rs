//! Distance-based branch-and-bound skyline baseline.
//!
//! Best-first traversal of the grid: cells and POIs sit in one priority
//! queue keyed by a straight-line lower bound on their travel-time
//! dimensions (haversine distance over a speed ceiling). An entry is pruned
//! when a skyline member found so far dominates its lower-bound vector.
//! Popped POIs get exact costs from per-object network searches.

use std::cmp::{Ordering, Reverse};
use std::collections::{BTreeMap, BinaryHeap};
use std::time::Instant;

use crate::engine::Snapshot;
use crate::error::Result;
use crate::geo::{haversine_distance, within_sector, GeoPoint};
use crate::grid::Cell;
use crate::network::{IncrementalSearch, SpeedBound};
use crate::poi::{filter_phase, Poi};
use crate::query::SkylineQuery;
use crate::scalar::Scalar;
use crate::skyline::{dominates_values, skyline_of, CostVector, Sense, SkylineResult};

#[derive(Debug, Clone, Copy)]
enum Item {
    Cell(Cell),
    Poi(usize),
}

struct Queued<T> {
    key: T,
    seq: u64,
    bound: Vec<T>,
    item: Item,
}

impl<T: Scalar> PartialEq for Queued<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl<T: Scalar> Eq for Queued<T> {}
impl<T: Scalar> PartialOrd for Queued<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T: Scalar> Ord for Queued<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key.partial_cmp(&other.key).unwrap_or(Ordering::Equal).then(self.seq.cmp(&other.seq))
    }
}

/// Runs the baseline. `speed_ceiling` (m/s) must be at least the fastest
/// edge speed for the bounds to be admissible; `None` uses the network's
/// maximum observed edge speed.
pub fn bbs_baseline<T: Scalar>(
    snap: Snapshot<'_, T>,
    query: &SkylineQuery<T>,
    speed_ceiling: Option<T>,
) -> Result<SkylineResult<T>> {
    let started = Instant::now();
    query.validate(snap.catalog)?;
    let net = snap.network;
    let grid = snap.grid;
    let catalog = snap.catalog;
    let schema = query.schema();
    let v_max = speed_ceiling.unwrap_or_else(|| net.max_edge_speed());
    let speed = SpeedBound::new(v_max);
    let time_bound = |metres: T| speed.seconds(metres);

    let origin_vertex = grid.nearest_node(query.origin, Some(query.heading))?;
    let origin_ix = net.index_of(origin_vertex).unwrap();
    let origin_point = net.coord_at(origin_ix);
    let mut result = SkylineResult::empty(net.revision());

    let n_travel = 1 + query.secondary.len();
    let mut member_nodes: Vec<Vec<usize>> = Vec::with_capacity(query.secondary.len());
    for spec in &query.secondary {
        let nodes: Vec<usize> = filter_phase(catalog, spec)
            .iter()
            .map(|id| net.index_of(catalog.get(id).unwrap().snapped_node).unwrap())
            .collect();
        if nodes.is_empty() {
            result.warnings.push(format!("no POI satisfies preference {}", spec.canonical()));
        }
        member_nodes.push(nodes);
    }

    let candidates: Vec<&Poi<T>> = filter_phase(catalog, &query.primary)
        .iter()
        .map(|id| catalog.get(id).unwrap())
        .filter(|p| within_sector(query.origin, query.heading, p.location))
        .filter(|p| query.objectives.iter().all(|o| p.attribute(&o.attribute).is_some()))
        .collect();
    if candidates.is_empty() || member_nodes.iter().any(Vec::is_empty) {
        result.cpu_nanos = started.elapsed().as_nanos() as u64;
        return Ok(result);
    }

    let attr_values = |p: &Poi<T>| -> Vec<T> {
        query
            .objectives
            .iter()
            .map(|o| {
                let v = p.attribute(&o.attribute).unwrap();
                if o.sense == Sense::Maximize {
                    -v
                } else {
                    v
                }
            })
            .collect()
    };
    let member_points: Vec<Vec<GeoPoint<T>>> =
        member_nodes.iter().map(|m| m.iter().map(|&ix| net.coord_at(ix)).collect()).collect();

    let mut by_cell: BTreeMap<Cell, Vec<usize>> = BTreeMap::new();
    for (i, p) in candidates.iter().enumerate() {
        let node_point = net.location(p.snapped_node).unwrap();
        by_cell.entry(grid.cell_of(node_point)).or_default().push(i);
    }

    let mut queue: BinaryHeap<Reverse<Queued<T>>> = BinaryHeap::new();
    let mut seq = 0u64;
    let mut push = |queue: &mut BinaryHeap<Reverse<Queued<T>>>, bound: Vec<T>, item: Item| {
        let key = bound[..n_travel].iter().fold(T::zero(), |acc, &b| acc + b);
        queue.push(Reverse(Queued { key, seq, bound, item }));
        seq += 1;
    };
    for (&cell, members) in &by_cell {
        let mut bound = Vec::with_capacity(schema.len());
        bound.push(time_bound(grid.min_distance_to_cell(origin_point, cell)));
        for points in &member_points {
            let d = points.iter().map(|&m| grid.min_distance_to_cell(m, cell)).fold(T::infinity(), T::min);
            bound.push(time_bound(d));
        }
        for j in 0..query.objectives.len() {
            let lo = members.iter().map(|&i| attr_values(candidates[i])[j]).fold(T::infinity(), T::min);
            bound.push(lo);
        }
        push(&mut queue, bound, Item::Cell(cell));
    }

    let member_marks: Vec<Vec<bool>> = member_nodes
        .iter()
        .map(|m| {
            let mut marks = vec![false; net.node_count()];
            m.iter().for_each(|&ix| marks[ix] = true);
            marks
        })
        .collect();
    let mut from_origin = IncrementalSearch::new(net.node_count(), &[origin_ix]);
    let mut probe = IncrementalSearch::new(net.node_count(), &[]);
    let mut entries_expanded = 0u64;
    let mut working: Vec<Vec<T>> = Vec::new();
    let mut exact: Vec<CostVector<T>> = Vec::new();

    while let Some(Reverse(entry)) = queue.pop() {
        entries_expanded += 1;
        if working.iter().any(|w| dominates_values(w, &entry.bound)) {
            continue;
        }
        match entry.item {
            Item::Cell(cell) => {
                for &i in &by_cell[&cell] {
                    let p = candidates[i];
                    let at = net.location(p.snapped_node).unwrap();
                    let mut bound = Vec::with_capacity(schema.len());
                    bound.push(time_bound(haversine_distance(origin_point, at)));
                    for points in &member_points {
                        let d = points.iter().map(|&m| haversine_distance(at, m)).fold(T::infinity(), T::min);
                        bound.push(time_bound(d));
                    }
                    bound.extend(attr_values(p));
                    push(&mut queue, bound, Item::Poi(i));
                }
            }
            Item::Poi(i) => {
                let p = candidates[i];
                let node = net.index_of(p.snapped_node).unwrap();
                let Some(t0) = from_origin.time_to(net, node) else { continue };
                let mut values = vec![T::from_seconds(t0)];
                let mut complete = true;
                for marks in &member_marks {
                    probe.restart(&[node]);
                    match probe.nearest_marked(net, marks) {
                        Some(t) => values.push(T::from_seconds(t)),
                        None => {
                            complete = false;
                            break;
                        }
                    }
                }
                if !complete {
                    continue;
                }
                values.extend(attr_values(p));
                if !working.iter().any(|w| dominates_values(w, &values)) {
                    working.retain(|w| !dominates_values(&values, w));
                    working.push(values.clone());
                }
                exact.push(CostVector::new(p.id.clone(), schema.clone(), values));
            }
        }
    }

    result.members = skyline_of(exact);
    result.expansions = from_origin.settled_count + probe.settled_count + entries_expanded;
    result.cpu_nanos = started.elapsed().as_nanos() as u64;
    Ok(result)
}
