//! Brute-force reference evaluation used as ground truth in tests and in
//! the benchmark's comparison mode. No grid, no cache, no early stopping:
//! a full single-source search from every candidate.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::geo::{haversine_distance, within_sector};
use crate::network::{NodeId, RoadNetwork, StopCondition};
use crate::poi::PoiCatalog;
use crate::query::SkylineQuery;
use crate::scalar::Scalar;
use crate::skyline::{skyline_of, CostVector, Sense, SkylineResult};

/// Linear-scan nearest node, optionally restricted to the query sector.
pub fn nearest_node_linear<T: Scalar>(net: &RoadNetwork<T>, query: &SkylineQuery<T>) -> Result<NodeId> {
    if net.is_empty() {
        return Err(Error::EmptyIndex);
    }
    net.nodes()
        .filter(|&(_, p)| within_sector(query.origin, query.heading, p))
        .map(|(id, p)| (haversine_distance(query.origin, p), id))
        .min_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)))
        .map(|(_, id)| id)
        .ok_or(Error::NoNodeInSector)
}

pub fn oracle_gdrst<T: Scalar>(
    net: &RoadNetwork<T>,
    catalog: &PoiCatalog<T>,
    query: &SkylineQuery<T>,
) -> Result<SkylineResult<T>> {
    let started = Instant::now();
    query.validate(catalog)?;
    let origin_vertex = nearest_node_linear(net, query)?;
    let schema = query.schema();

    let member_nodes: Vec<Vec<NodeId>> = query
        .secondary
        .iter()
        .map(|spec| catalog.iter().filter(|p| spec.admits(p)).map(|p| p.snapped_node).collect())
        .collect();
    let mut result = SkylineResult::empty(net.revision());
    for (spec, members) in query.secondary.iter().zip(&member_nodes) {
        if members.is_empty() {
            result.warnings.push(format!("no POI satisfies preference {}", spec.canonical()));
        }
    }

    let mut vectors = Vec::new();
    for poi in catalog.iter() {
        if !query.primary.admits(poi) || !within_sector(query.origin, query.heading, poi.location) {
            continue;
        }
        let field = net.shortest_travel_time(&[poi.snapped_node], &StopCondition::Exhaust, |_| true)?;
        result.expansions += field.settled() as u64;

        let mut values = Vec::with_capacity(schema.len());
        let Some(t0) = field.time(origin_vertex) else { continue };
        values.push(T::from_seconds(t0));
        let mut complete = true;
        for members in &member_nodes {
            match members.iter().filter_map(|&m| field.time(m)).min() {
                Some(t) => values.push(T::from_seconds(t)),
                None => {
                    complete = false;
                    break;
                }
            }
        }
        for o in &query.objectives {
            match poi.attribute(&o.attribute) {
                Some(v) if o.sense == Sense::Minimize => values.push(v),
                Some(v) => values.push(-v),
                None => complete = false,
            }
        }
        if complete {
            vectors.push(CostVector::new(poi.id.clone(), schema.clone(), values));
        }
    }
    result.members = skyline_of(vectors);
    result.cpu_nanos = started.elapsed().as_nanos() as u64;
    Ok(result)
}
