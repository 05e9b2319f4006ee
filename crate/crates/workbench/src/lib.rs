//! Dataset generation, workload replay and metric collection for the
//! skyline engine.

pub mod bench;
pub mod cache_bench;
pub mod dataset;
pub mod error;
pub mod generator;
pub mod workload;

pub use bench::{run_benchmark, summarize, Algorithm, BenchConfig, BenchReport, BenchmarkRecord};
pub use cache_bench::{cache_experiment, CacheConfig, CacheRecord};
pub use dataset::Dataset;
pub use error::{WorkbenchError, WorkbenchResult};
pub use generator::{generate_dataset, BBox, GeneratedDataset, GeneratorSpec};
pub use workload::{parse_queries, parse_schedule, synthetic_workload, NamedQuery, Schedule};
