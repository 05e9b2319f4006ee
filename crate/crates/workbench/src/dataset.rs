//! Loading the three dataset files and the precomputed structures built on
//! top of them.

use std::fs;
use std::path::Path;

use gdrst_core::{build_grid, load_network, load_pois, GridIndex, PoiCatalog, RoadNetwork, Snapshot, DEFAULT_CELL_DEG};

use crate::error::{WorkbenchError, WorkbenchResult};

#[derive(Debug, Clone)]
pub struct Dataset {
    pub network: RoadNetwork,
    pub grid: GridIndex,
    pub catalog: PoiCatalog,
}

impl Dataset {
    pub fn from_text(nodes: &str, edges: &str, pois: &str, cell_size: Option<f64>) -> WorkbenchResult<Self> {
        let network = load_network(nodes, edges).map_err(|e| WorkbenchError::data("network", e))?;
        let cell = cell_size.unwrap_or(DEFAULT_CELL_DEG);
        let grid = build_grid(&network, (cell, cell)).map_err(|e| WorkbenchError::data("grid", e))?;
        let catalog = load_pois(pois, &network, &grid).map_err(|e| WorkbenchError::data("pois", e))?;
        Ok(Self { network, grid, catalog })
    }

    pub fn load(nodes: &Path, edges: &Path, pois: &Path, cell_size: Option<f64>) -> WorkbenchResult<Self> {
        Self::from_text(&read(nodes)?, &read(edges)?, &read(pois)?, cell_size)
    }

    pub fn snapshot(&self) -> Snapshot<'_> {
        Snapshot::new(&self.network, &self.catalog, &self.grid)
    }

    /// Same network and grid with a reduced catalog.
    pub fn with_catalog(&self, catalog: PoiCatalog) -> Self {
        Self { network: self.network.clone(), grid: self.grid.clone(), catalog }
    }
}

pub fn read(path: &Path) -> WorkbenchResult<String> {
    fs::read_to_string(path).map_err(|e| WorkbenchError::io(path, e))
}

pub fn write(path: &Path, contents: &str) -> WorkbenchResult<()> {
    fs::write(path, contents).map_err(|e| WorkbenchError::io(path, e))
}
