//! Cache replay: runs a workload through one result cache, applying traffic
//! updates at scheduled positions.

use std::time::Instant;

use gdrst_core::{execute_query, oracle_gdrst, SkylineCache, SkylineResult};
use serde::Serialize;

use crate::dataset::Dataset;
use crate::error::{WorkbenchError, WorkbenchResult};
use crate::workload::{NamedQuery, Schedule};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CacheRecord {
    pub position: usize,
    pub query_id: String,
    pub cache_hit: bool,
    pub expansions: u64,
    /// Wall-clock time of the whole `execute_query` call.
    pub latency_nanos: u64,
    pub result_size: usize,
    pub revision: u64,
    /// Entries purged by traffic updates applied after this query.
    pub purged_after: usize,
}

#[derive(Debug, Clone)]
pub struct CacheConfig {
    pub capacity: usize,
    pub changed_edge_fraction: f64,
    /// Check every recomputed answer against the oracle.
    pub verify: bool,
}

/// Replays `queries`, returning one record per query plus the results.
pub fn cache_experiment(
    ds: &mut Dataset,
    queries: &[NamedQuery],
    config: &CacheConfig,
    schedule: &Schedule,
) -> WorkbenchResult<(Vec<CacheRecord>, Vec<SkylineResult>)> {
    let cache = SkylineCache::with_threshold(config.capacity, config.changed_edge_fraction);
    let mut records = Vec::with_capacity(queries.len());
    let mut results = Vec::with_capacity(queries.len());
    for (position, nq) in queries.iter().enumerate() {
        let started = Instant::now();
        let (result, hit) =
            execute_query(ds.snapshot(), &cache, &nq.query).map_err(|e| WorkbenchError::data(nq.id.clone(), e))?;
        let latency_nanos = started.elapsed().as_nanos() as u64;
        if config.verify && !hit {
            let oracle = oracle_gdrst(&ds.network, &ds.catalog, &nq.query)
                .map_err(|e| WorkbenchError::data(format!("{} (oracle)", nq.id), e))?;
            if !result.same_answer(&oracle) {
                return Err(WorkbenchError::Mismatch(format!(
                    "{} at revision {}: gdrst {:?}, oracle {:?}",
                    nq.id,
                    result.revision,
                    result.member_ids(),
                    oracle.member_ids()
                )));
            }
        }
        let mut purged_after = 0;
        for update in schedule.get(&position).into_iter().flatten() {
            let fraction = update.changed_fraction(&ds.network);
            let revision = ds
                .network
                .apply_traffic_update(update)
                .map_err(|e| WorkbenchError::data(format!("traffic update after position {position}"), e))?;
            purged_after += cache.on_traffic_update(revision, fraction);
        }
        records.push(CacheRecord {
            position,
            query_id: nq.id.clone(),
            cache_hit: hit,
            expansions: result.expansions,
            latency_nanos,
            result_size: result.members.len(),
            revision: result.revision,
            purged_after,
        });
        results.push(result);
    }
    Ok((records, results))
}
