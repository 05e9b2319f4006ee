//! Goal-directed skyline queries over travel-time road networks.
//!
//! The pipeline: snap the query origin to its nearest road vertex through a
//! lat/lon grid, filter the primary POI category by the user's preferences
//! and travel direction, expand the network once per secondary preference to
//! assemble each candidate's cost vector, and keep the Pareto-optimal
//! candidates. Results are cached per approximate query identity and
//! invalidated on traffic updates.
//!
//! All geometry and cost types are generic over a [`Scalar`] (`f32` or
//! `f64`); the un-suffixed aliases at the crate root fix the scalar to `f64`.

pub mod bbs;
pub mod cache;
pub mod engine;
pub mod error;
pub mod geo;
pub mod grid;
pub mod network;
pub mod oracle;
pub mod poi;
pub mod query;
pub mod scalar;
pub mod skyline;
mod text;

pub use bbs::bbs_baseline;
pub use cache::{CacheKey, DEFAULT_CACHE_CAPACITY};
pub use engine::{compute, execute_query, heap_phase, progressive_refine, HeapEntry};
pub use error::{Error, Result};
pub use geo::{angular_difference, haversine_distance, initial_bearing, within_sector, EARTH_RADIUS_M};
pub use grid::{build_grid, Cell, DEFAULT_CELL_DEG};
pub use network::{load_network, NodeId, Seconds, StopCondition, TrafficUpdate, TravelTimeField};
pub use oracle::oracle_gdrst;
pub use poi::{canonical_label, filter_phase, load_pois};
pub use query::Objective;
pub use scalar::Scalar;
pub use skyline::{dominates, skyline_of, Dim, Sense};

pub type GeoPoint = geo::GeoPoint<f64>;
pub type Heading = geo::Heading<f64>;
pub type RoadNetwork = network::RoadNetwork<f64>;
pub type GridIndex = grid::GridIndex<f64>;
pub type Poi = poi::Poi<f64>;
pub type PoiCatalog = poi::PoiCatalog<f64>;
pub type PreferenceSpec = poi::PreferenceSpec<f64>;
pub type CostVector = skyline::CostVector<f64>;
pub type SkylineResult = skyline::SkylineResult<f64>;
pub type SkylineQuery = query::SkylineQuery<f64>;
pub type SkylineCache = cache::SkylineCache<f64>;
pub type Snapshot<'a> = engine::Snapshot<'a, f64>;

pub type GeoPoint32 = geo::GeoPoint<f32>;
pub type Heading32 = geo::Heading<f32>;
pub type RoadNetwork32 = network::RoadNetwork<f32>;
pub type GridIndex32 = grid::GridIndex<f32>;
pub type PoiCatalog32 = poi::PoiCatalog<f32>;
pub type SkylineQuery32 = query::SkylineQuery<f32>;
pub type SkylineResult32 = skyline::SkylineResult<f32>;
pub type SkylineCache32 = cache::SkylineCache<f32>;
