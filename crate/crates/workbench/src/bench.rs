//! Workload replay, metric rows and cross-algorithm comparison.
//!
//! CSV columns, in order: `query_id, algorithm, repetition, expansions,
//! cpu_nanos, result_size, cache_hit, revision`. `expansions` counts settled
//! search nodes plus popped baseline queue entries; `cpu_nanos` covers query
//! evaluation only, never dataset loading or grid construction.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use gdrst_core::engine::compute;
use gdrst_core::{bbs_baseline, execute_query, oracle_gdrst, SkylineCache, SkylineQuery, SkylineResult};
use rayon::prelude::*;
use serde::Serialize;

use crate::dataset::{write, Dataset};
use crate::error::{WorkbenchError, WorkbenchResult};
use crate::workload::NamedQuery;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Gdrst,
    Bbs,
    Oracle,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Gdrst, Algorithm::Bbs, Algorithm::Oracle];

    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Gdrst => "gdrst",
            Algorithm::Bbs => "bbs",
            Algorithm::Oracle => "oracle",
        }
    }

    /// Comma-separated names, duplicates dropped, order kept.
    pub fn parse_list(s: &str) -> WorkbenchResult<Vec<Algorithm>> {
        let mut out = Vec::new();
        for name in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
            let a: Algorithm = name.parse()?;
            if !out.contains(&a) {
                out.push(a);
            }
        }
        if out.is_empty() {
            return Err(WorkbenchError::Usage("no algorithms given".into()));
        }
        Ok(out)
    }
}

impl FromStr for Algorithm {
    type Err = WorkbenchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.as_str() == s)
            .ok_or_else(|| WorkbenchError::Usage(format!("unknown algorithm {s:?} (gdrst, bbs, oracle)")))
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BenchmarkRecord {
    pub query_id: String,
    pub algorithm: Algorithm,
    pub repetition: usize,
    pub expansions: u64,
    pub cpu_nanos: u64,
    pub result_size: usize,
    pub cache_hit: bool,
    pub revision: u64,
}

impl Serialize for Algorithm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub algorithms: Vec<Algorithm>,
    pub repetitions: usize,
    pub compare: bool,
    /// Result cache size for gdrst; 0 disables caching.
    pub cache_capacity: usize,
    /// Re-run gdrst over all queries concurrently and check the answers
    /// match the sequential pass.
    pub parallel: bool,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self { algorithms: Algorithm::ALL.to_vec(), repetitions: 5, compare: false, cache_capacity: 0, parallel: false }
    }
}

/// Runs one algorithm. Only gdrst consults the cache.
pub fn run_algorithm(
    ds: &Dataset,
    cache: &SkylineCache,
    algorithm: Algorithm,
    query: &SkylineQuery,
) -> gdrst_core::Result<(SkylineResult, bool)> {
    match algorithm {
        Algorithm::Gdrst => execute_query(ds.snapshot(), cache, query),
        Algorithm::Bbs => bbs_baseline(ds.snapshot(), query, None).map(|r| (r, false)),
        Algorithm::Oracle => oracle_gdrst(&ds.network, &ds.catalog, query).map(|r| (r, false)),
    }
}

/// One algorithm's answer: member ids, or the error text.
pub type Answer = Result<Vec<String>, String>;

fn answer_of(r: &gdrst_core::Result<SkylineResult>) -> Answer {
    match r {
        Ok(r) => Ok(r.member_ids().into_iter().map(str::to_string).collect()),
        Err(e) => Err(e.to_string()),
    }
}

/// Uncached answers from each algorithm, if they are not all equal.
pub fn disagreement(ds: &Dataset, query: &SkylineQuery, algorithms: &[Algorithm]) -> Option<Vec<(Algorithm, Answer)>> {
    let cache = SkylineCache::new(0);
    let answers: Vec<(Algorithm, Answer)> =
        algorithms.iter().map(|&a| (a, answer_of(&run_algorithm(ds, &cache, a, query).map(|r| r.0)))).collect();
    let first = &answers[0].1;
    answers.iter().any(|(_, a)| a != first).then_some(answers)
}

/// Smallest failing input found by greedy POI removal.
#[derive(Debug, Clone)]
pub struct Counterexample {
    pub query: NamedQuery,
    pub dataset: Dataset,
    pub answers: Vec<(Algorithm, Answer)>,
}

impl Counterexample {
    pub fn summary(&self) -> String {
        let mut s = format!("{}: {}", self.query.id, self.query.query);
        for (a, ans) in &self.answers {
            match ans {
                Ok(ids) => s.push_str(&format!("\n  {a}: {{{}}}", ids.join(", "))),
                Err(e) => s.push_str(&format!("\n  {a}: error {e}")),
            }
        }
        s
    }

    /// Writes `nodes.csv`, `edges.csv`, `pois.csv`, `query.txt` and
    /// `answers.txt` into `dir`.
    pub fn write_to(&self, dir: &Path) -> WorkbenchResult<()> {
        std::fs::create_dir_all(dir).map_err(|e| WorkbenchError::io(dir, e))?;
        write(&dir.join("nodes.csv"), &self.dataset.network.write_nodes())?;
        write(&dir.join("edges.csv"), &self.dataset.network.write_edges())?;
        write(&dir.join("pois.csv"), &self.dataset.catalog.write())?;
        write(&dir.join("query.txt"), &format!("{}\n", self.query.query))?;
        write(&dir.join("answers.txt"), &format!("{}\n", self.summary()))
    }
}

pub fn minimize_counterexample(ds: &Dataset, query: &NamedQuery, algorithms: &[Algorithm]) -> Option<Counterexample> {
    let mut answers = disagreement(ds, &query.query, algorithms)?;
    let mut current = ds.clone();
    let ids: Vec<String> = ds.catalog.iter().map(|p| p.id.clone()).collect();
    for id in ids {
        let smaller = current.with_catalog(current.catalog.retain(|p| p.id != id));
        if let Some(a) = disagreement(&smaller, &query.query, algorithms) {
            current = smaller;
            answers = a;
        }
    }
    Some(Counterexample { query: query.clone(), dataset: current, answers })
}

#[derive(Debug, Clone, Default)]
pub struct BenchReport {
    pub records: Vec<BenchmarkRecord>,
    pub mismatch: Option<Counterexample>,
}

/// Replays `queries` in order: for each query, each algorithm, each
/// repetition. In comparison mode the first repetition's member sets must
/// agree across algorithms; the first disagreement stops the run and is
/// minimized into `mismatch`.
pub fn run_benchmark(ds: &Dataset, queries: &[NamedQuery], config: &BenchConfig) -> WorkbenchResult<BenchReport> {
    if config.repetitions == 0 {
        return Err(WorkbenchError::Usage("repetitions must be at least 1".into()));
    }
    let cache = SkylineCache::new(config.cache_capacity);
    let mut report = BenchReport::default();
    let mut sequential: Vec<Vec<String>> = Vec::new();
    for nq in queries {
        let mut answers: Vec<(Algorithm, Answer)> = Vec::new();
        for &alg in &config.algorithms {
            for rep in 0..config.repetitions {
                let outcome = run_algorithm(ds, &cache, alg, &nq.query);
                if rep == 0 {
                    answers.push((alg, answer_of(&outcome.as_ref().map(|r| r.0.clone()).map_err(Clone::clone))));
                }
                let (r, hit) = outcome.map_err(|e| WorkbenchError::data(format!("{} ({alg})", nq.id), e))?;
                report.records.push(BenchmarkRecord {
                    query_id: nq.id.clone(),
                    algorithm: alg,
                    repetition: rep,
                    expansions: r.expansions,
                    cpu_nanos: r.cpu_nanos,
                    result_size: r.members.len(),
                    cache_hit: hit,
                    revision: r.revision,
                });
            }
        }
        if config.compare && answers.iter().any(|(_, a)| *a != answers[0].1) {
            report.mismatch = minimize_counterexample(ds, nq, &config.algorithms)
                .or_else(|| Some(Counterexample { query: nq.clone(), dataset: ds.clone(), answers: answers.clone() }));
            return Ok(report);
        }
        if let Some((_, Ok(ids))) = answers.iter().find(|(a, _)| *a == Algorithm::Gdrst) {
            sequential.push(ids.clone());
        }
    }

    if config.parallel && config.algorithms.contains(&Algorithm::Gdrst) {
        let concurrent: Vec<Answer> =
            queries.par_iter().map(|nq| answer_of(&compute(ds.snapshot(), &nq.query))).collect();
        for ((nq, seq), par) in queries.iter().zip(&sequential).zip(&concurrent) {
            if par.as_ref() != Ok(seq) {
                return Err(WorkbenchError::Mismatch(format!(
                    "{}: parallel run returned {par:?}, sequential {seq:?}",
                    nq.id
                )));
            }
        }
    }
    Ok(report)
}

pub fn write_csv<W: Write, R: Serialize>(out: W, rows: &[R]) -> WorkbenchResult<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush().map_err(|e| WorkbenchError::io("<csv>", e))?;
    Ok(())
}

pub fn median(values: &mut [u64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    values.sort_unstable();
    let mid = values.len() / 2;
    if values.len() % 2 == 1 {
        values[mid] as f64
    } else {
        (values[mid - 1] as f64 + values[mid] as f64) / 2.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlgorithmSummary {
    pub algorithm: Algorithm,
    pub rows: usize,
    pub median_expansions: f64,
    pub median_cpu_nanos: f64,
}

/// Expansions and CPU nanoseconds of one query's repetitions.
type RunSamples = (Vec<u64>, Vec<u64>);

/// Per-algorithm medians. Each query contributes the median over its
/// repetitions, then the median is taken across queries.
pub fn summarize(records: &[BenchmarkRecord]) -> Vec<AlgorithmSummary> {
    let mut groups: BTreeMap<Algorithm, BTreeMap<&str, RunSamples>> = BTreeMap::new();
    for r in records {
        let g = groups.entry(r.algorithm).or_default().entry(&r.query_id).or_default();
        g.0.push(r.expansions);
        g.1.push(r.cpu_nanos);
    }
    groups
        .into_iter()
        .map(|(algorithm, per_query)| {
            let rows = per_query.values().map(|g| g.0.len()).sum();
            let (mut exp, mut cpu): (Vec<u64>, Vec<u64>) =
                per_query.into_values().map(|(mut e, mut c)| (median(&mut e) as u64, median(&mut c) as u64)).unzip();
            AlgorithmSummary {
                algorithm,
                rows,
                median_expansions: median(&mut exp),
                median_cpu_nanos: median(&mut cpu),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn algorithm_lists_parse() {
        assert_eq!(Algorithm::parse_list("gdrst, oracle,gdrst").unwrap(), vec![Algorithm::Gdrst, Algorithm::Oracle]);
        assert!(Algorithm::parse_list("gdrst,dijkstra").is_err());
        assert!(Algorithm::parse_list("").is_err());
    }

    #[test]
    fn medians() {
        assert_eq!(median(&mut [5, 1, 3]), 3.0);
        assert_eq!(median(&mut [4, 1, 3, 2]), 2.5);
        assert_eq!(median(&mut []), 0.0);
    }
}
