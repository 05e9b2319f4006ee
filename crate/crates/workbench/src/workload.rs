//! Query files, synthetic workloads and traffic schedules.
//!
//! Query file: one query record per line; blank lines and `#` comments are
//! skipped. Queries are named `q0`, `q1`, ... in file order.
//!
//! Schedule file: `<after_query_index> u,v,t [u,v,t ...]` per line. The
//! listed edge times are applied as one traffic update once the query at
//! that 0-based position has run.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use gdrst_core::{RoadNetwork, SkylineQuery, TrafficUpdate};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{WorkbenchError, WorkbenchResult};

#[derive(Debug, Clone, PartialEq)]
pub struct NamedQuery {
    pub id: String,
    pub query: SkylineQuery,
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

pub fn parse_queries(text: &str) -> WorkbenchResult<Vec<NamedQuery>> {
    content_lines(text)
        .enumerate()
        .map(|(i, (line, record))| {
            let query =
                SkylineQuery::parse(record).map_err(|e| WorkbenchError::data(format!("query file line {line}"), e))?;
            Ok(NamedQuery { id: format!("q{i}"), query })
        })
        .collect()
}

pub type Schedule = BTreeMap<usize, Vec<TrafficUpdate>>;

pub fn parse_schedule(text: &str) -> WorkbenchResult<Schedule> {
    let mut out = Schedule::new();
    for (line, row) in content_lines(text) {
        let bad = |what: &str| WorkbenchError::Usage(format!("schedule line {line}: {what}"));
        let mut parts = row.split_whitespace();
        let after: usize = parts.next().and_then(|s| s.parse().ok()).ok_or_else(|| bad("expected a query index"))?;
        let mut changes = Vec::new();
        for change in parts {
            let f: Vec<&str> = change.split(',').collect();
            let [u, v, t] = f[..] else { return Err(bad(&format!("expected u,v,t, got {change:?}"))) };
            let parse = |s: &str| s.trim().parse::<u64>().map_err(|_| bad(&format!("bad number in {change:?}")));
            changes.push((parse(u)?, parse(v)?, parse(t)?));
        }
        if changes.is_empty() {
            return Err(bad("no edge changes"));
        }
        out.entry(after).or_default().push(TrafficUpdate::new(changes));
    }
    Ok(out)
}

/// Alternates the two motivating query shapes: an apartment close to a
/// hospital and a restaurant, and a low-cost restaurant close to a temple
/// and a beach, priced low. Origins sit near random nodes with a random
/// direction of travel.
pub fn synthetic_workload(net: &RoadNetwork, count: usize, seed: u64) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nodes: Vec<_> = net.nodes().map(|(_, p)| p).collect();
    let mut out = String::new();
    for i in 0..count {
        let p = nodes[rng.gen_range(0..nodes.len())];
        let lat = (p.lat() + rng.gen_range(-0.002..0.002)).clamp(-90.0, 90.0);
        let lon = p.lon() + rng.gen_range(-0.002..0.002);
        let bearing = rng.gen_range(0..360);
        let _ = write!(out, "origin_lat={lat:.6}, origin_lon={lon:.6}, bearing={bearing}, half_angle=90, ");
        if i % 2 == 0 {
            let _ = writeln!(out, "primary=apartment, secondary=hospital;restaurant");
        } else {
            let _ =
                writeln!(out, "primary=restaurant:cost_class=LOW COST, secondary=temple;beach, objectives=price:min");
        }
    }
    out
}
