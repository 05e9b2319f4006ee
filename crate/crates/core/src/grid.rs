//! Uniform latitude/longitude grid over the network nodes.
//!
//! Each node lands in exactly one cell `(row, col)` computed from the grid
//! origin (the dataset's south-west corner) and the cell size. Nearest-node
//! lookup expands square rings of cells around the probe and stops once the
//! best node found is strictly closer than anything outside the explored
//! block could be.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geo::{haversine_distance, within_sector, GeoPoint, Heading, EARTH_RADIUS_M};
use crate::network::{NodeId, RoadNetwork};
use crate::scalar::Scalar;

pub type Cell = (i64, i64);

/// Default cell edge in degrees (roughly 5.5 km of latitude).
pub const DEFAULT_CELL_DEG: f64 = 0.05;

#[derive(Debug, Clone)]
pub struct GridIndex<T> {
    cell_size: (T, T),
    origin: GeoPoint<T>,
    rows: i64,
    cols: i64,
    cells: HashMap<Cell, Vec<u32>>,
    ids: Arc<[NodeId]>,
    points: Vec<GeoPoint<T>>,
}

/// Partitions the network nodes into cells of `cell_size = (d_lat, d_lon)` degrees.
pub fn build_grid<T: Scalar>(net: &RoadNetwork<T>, cell_size: (T, T)) -> Result<GridIndex<T>> {
    let (d_lat, d_lon) = cell_size;
    if !(d_lat > T::zero() && d_lon > T::zero() && d_lat.is_finite() && d_lon.is_finite()) {
        return Err(Error::InvalidCellSize(d_lat.as_f64(), d_lon.as_f64()));
    }
    if net.is_empty() {
        return Err(Error::EmptyIndex);
    }
    let points = net.coords().to_vec();
    let min_lat = points.iter().map(|p| p.lat()).fold(T::infinity(), T::min);
    let min_lon = points.iter().map(|p| p.lon()).fold(T::infinity(), T::min);
    let origin = GeoPoint::new(min_lat, min_lon)?;

    let mut grid =
        GridIndex { cell_size, origin, rows: 0, cols: 0, cells: HashMap::new(), ids: net.node_ids().collect(), points };
    for ix in 0..grid.points.len() {
        let cell = grid.cell_of(grid.points[ix]);
        grid.rows = grid.rows.max(cell.0 + 1);
        grid.cols = grid.cols.max(cell.1 + 1);
        grid.cells.entry(cell).or_default().push(ix as u32);
    }
    Ok(grid)
}

impl<T: Scalar> GridIndex<T> {
    pub fn cell_size(&self) -> (T, T) {
        self.cell_size
    }

    pub fn origin(&self) -> GeoPoint<T> {
        self.origin
    }

    pub fn node_count(&self) -> usize {
        self.points.len()
    }

    /// Row and column extents; every occupied cell lies in `[0, rows) x [0, cols)`.
    pub fn extent(&self) -> (i64, i64) {
        (self.rows, self.cols)
    }

    pub fn cell_of(&self, p: GeoPoint<T>) -> Cell {
        let row = ((p.lat() - self.origin.lat()) / self.cell_size.0).floor();
        let col = ((p.lon() - self.origin.lon()) / self.cell_size.1).floor();
        (row.to_i64().unwrap_or(i64::MAX / 4), col.to_i64().unwrap_or(i64::MAX / 4))
    }

    /// Occupied cells in `(row, col)` order.
    pub fn cells(&self) -> Vec<Cell> {
        let mut cells: Vec<Cell> = self.cells.keys().copied().collect();
        cells.sort_unstable();
        cells
    }

    pub fn members(&self, cell: Cell) -> Vec<NodeId> {
        self.cells.get(&cell).map(|m| m.iter().map(|&ix| self.ids[ix as usize]).collect()).unwrap_or_default()
    }

    pub(crate) fn member_indices(&self, cell: Cell) -> &[u32] {
        self.cells.get(&cell).map(Vec::as_slice).unwrap_or(&[])
    }

    /// `(lat_min, lat_max, lon_min, lon_max)` of a cell in degrees.
    pub fn cell_bounds(&self, (row, col): Cell) -> (T, T, T, T) {
        let lat0 = self.origin.lat() + T::from_i64(row).unwrap() * self.cell_size.0;
        let lon0 = self.origin.lon() + T::from_i64(col).unwrap() * self.cell_size.1;
        (lat0, lat0 + self.cell_size.0, lon0, lon0 + self.cell_size.1)
    }

    /// Angular slack absorbing rounding in cell assignment and distance terms.
    fn slack_deg(&self) -> T {
        T::of(1e-9).max(T::of(720.0) * T::epsilon())
    }

    /// Network node nearest to `loc` by haversine distance, optionally
    /// restricted to nodes inside `heading`'s sector around `loc`. Ties go to
    /// the smaller node id.
    pub fn nearest_node(&self, loc: GeoPoint<T>, heading: Option<Heading<T>>) -> Result<NodeId> {
        if self.points.is_empty() {
            return Err(Error::EmptyIndex);
        }
        let heading = heading.filter(|h| !h.is_full_circle());
        let (r0, c0) = self.cell_of(loc);
        let gap = |v: i64, hi: i64| {
            if v < 0 {
                -v
            } else if v >= hi {
                v - (hi - 1)
            } else {
                0
            }
        };
        let mut k = gap(r0, self.rows).max(gap(c0, self.cols));
        let mut best: Option<(T, usize)> = None;
        loop {
            for cell in self.ring(r0, c0, k) {
                for &ix in self.member_indices(cell) {
                    let ix = ix as usize;
                    let p = self.points[ix];
                    if let Some(h) = heading {
                        if !within_sector(loc, h, p) {
                            continue;
                        }
                    }
                    let d = haversine_distance(loc, p);
                    let better = match best {
                        None => true,
                        Some((bd, bix)) => d < bd || (d == bd && ix < bix),
                    };
                    if better {
                        best = Some((d, ix));
                    }
                }
            }
            if r0 - k <= 0 && r0 + k >= self.rows - 1 && c0 - k <= 0 && c0 + k >= self.cols - 1 {
                break;
            }
            if let Some((bd, _)) = best {
                if bd < self.outside_block_bound(loc, r0, c0, k) {
                    break;
                }
            }
            k += 1;
        }
        best.map(|(_, ix)| self.ids[ix]).ok_or(Error::NoNodeInSector)
    }

    /// Cells at Chebyshev distance exactly `k` from `(r0, c0)`, clipped to the extent.
    fn ring(&self, r0: i64, c0: i64, k: i64) -> Vec<Cell> {
        let mut out = Vec::new();
        if k == 0 {
            if (0..self.rows).contains(&r0) && (0..self.cols).contains(&c0) {
                out.push((r0, c0));
            }
            return out;
        }
        let col_lo = (c0 - k).max(0);
        let col_hi = (c0 + k).min(self.cols - 1);
        for r in [r0 - k, r0 + k] {
            if (0..self.rows).contains(&r) {
                out.extend((col_lo..=col_hi).map(|c| (r, c)));
            }
        }
        let row_lo = (r0 - k + 1).max(0);
        let row_hi = (r0 + k - 1).min(self.rows - 1);
        for c in [c0 - k, c0 + k] {
            if (0..self.cols).contains(&c) {
                out.extend((row_lo..=row_hi).map(|r| (r, c)));
            }
        }
        out
    }

    /// Lower bound on the distance from `loc` to any point outside the block
    /// of cells within Chebyshev distance `k` of `(r0, c0)`: any such path
    /// crosses one of the block's bounding parallels or meridians.
    fn outside_block_bound(&self, loc: GeoPoint<T>, r0: i64, c0: i64, k: i64) -> T {
        let (south, _, west, _) = self.cell_bounds((r0 - k, c0 - k));
        let (_, north, _, east) = self.cell_bounds((r0 + k, c0 + k));
        let slack = self.slack_deg();
        let r = T::of(EARTH_RADIUS_M);
        let along = |deg: T| r * (deg - slack).max(T::zero()).to_radians();
        let mut bound = T::infinity();
        if south > T::of(-90.0) {
            bound = bound.min(along(loc.lat() - south));
        }
        if north < T::of(90.0) {
            bound = bound.min(along(north - loc.lat()));
        }
        let west = west.max(T::of(-180.0));
        let east = east.min(T::of(180.0));
        if east - west < T::of(360.0) {
            for meridian in [west, east] {
                bound = bound.min(meridian_bound(loc, meridian, slack));
            }
        }
        bound
    }

    /// Admissible lower bound on the haversine distance from `p` to any point
    /// of `cell`.
    pub fn min_distance_to_cell(&self, p: GeoPoint<T>, cell: Cell) -> T {
        let (lat_lo, lat_hi, lon_lo, lon_hi) = self.cell_bounds(cell);
        let slack = self.slack_deg();
        let r = T::of(EARTH_RADIUS_M);
        let lat_gap = if p.lat() < lat_lo {
            lat_lo - p.lat()
        } else if p.lat() > lat_hi {
            p.lat() - lat_hi
        } else {
            T::zero()
        };
        let lat_bound = r * (lat_gap - slack).max(T::zero()).to_radians();

        let full = T::of(360.0);
        let offset = |lon: T| {
            let mut d = (p.lon() - lon) % full;
            if d < T::zero() {
                d = d + full;
            }
            d
        };
        // p inside the cell's longitude band (modulo 360)?
        let inside_lon = offset(lon_lo) <= lon_hi - lon_lo;
        let lon_bound = if inside_lon || lon_hi - lon_lo >= T::of(180.0) {
            T::zero()
        } else {
            meridian_bound(p, lon_lo, slack).min(meridian_bound(p, lon_hi, slack))
        };
        lat_bound.max(lon_bound)
    }

    /// Occupied cells that may hold a node inside the sector. Cells are
    /// accepted when any corner or the center passes the sector test, and
    /// otherwise when any member node does, so no cell holding an in-sector
    /// node is ever dropped.
    pub fn cells_in_sector(&self, origin: GeoPoint<T>, heading: Heading<T>) -> BTreeSet<Cell> {
        let mut out = BTreeSet::new();
        for (&cell, members) in &self.cells {
            if heading.is_full_circle() || self.probe_cell(origin, heading, cell, members) {
                out.insert(cell);
            }
        }
        out
    }

    fn probe_cell(&self, origin: GeoPoint<T>, heading: Heading<T>, cell: Cell, members: &[u32]) -> bool {
        let (lat_lo, lat_hi, lon_lo, lon_hi) = self.cell_bounds(cell);
        let two = T::of(2.0);
        let clamp = |lat: T| lat.max(T::of(-90.0)).min(T::of(90.0));
        let probes = [
            (lat_lo, lon_lo),
            (lat_lo, lon_hi),
            (lat_hi, lon_lo),
            (lat_hi, lon_hi),
            ((lat_lo + lat_hi) / two, (lon_lo + lon_hi) / two),
        ];
        let quick = probes
            .iter()
            .any(|&(lat, lon)| GeoPoint::new(clamp(lat), lon).is_ok_and(|p| within_sector(origin, heading, p)));
        quick || members.iter().any(|&ix| within_sector(origin, heading, self.points[ix as usize]))
    }
}

/// Distance from `p` to the great circle through the meridian at `lon`,
/// which bounds the distance to any point on that meridian from below.
fn meridian_bound<T: Scalar>(p: GeoPoint<T>, lon: T, slack: T) -> T {
    let full = T::of(360.0);
    let mut d = (p.lon() - lon).abs() % full;
    if d > T::of(180.0) {
        d = full - d;
    }
    let folded = d.min(T::of(180.0) - d);
    let angle = (folded - slack).max(T::zero()).to_radians();
    let s = (angle.sin() * p.lat().to_radians().cos()).max(T::zero()).min(T::one());
    T::of(EARTH_RADIUS_M) * s.asin()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::load_network;

    fn net_of(points: &[(f64, f64)]) -> RoadNetwork<f64> {
        let nodes: String = points.iter().enumerate().map(|(i, (lat, lon))| format!("{i},{lat},{lon}\n")).collect();
        load_network(&nodes, "").unwrap()
    }

    fn p(lat: f64, lon: f64) -> GeoPoint<f64> {
        GeoPoint::new(lat, lon).unwrap()
    }

    #[test]
    fn single_node() {
        let net = net_of(&[(3.0, 4.0)]);
        let g = build_grid(&net, (0.1, 0.1)).unwrap();
        assert_eq!(g.cells(), vec![(0, 0)]);
        assert_eq!(g.nearest_node(p(-40.0, 100.0), None).unwrap(), 0);
        assert_eq!(g.nearest_node(p(3.0, 4.0), None).unwrap(), 0);
    }

    #[test]
    fn floor_formula_places_cells() {
        let net = net_of(&[(0.0, 0.0), (0.05, 0.05), (0.15, 0.05)]);
        let g = build_grid(&net, (0.1, 0.1)).unwrap();
        assert_eq!(g.cell_of(p(0.05, 0.05)), (0, 0));
        assert_eq!(g.cell_of(p(0.15, 0.05)), (1, 0));
        assert_eq!(g.members((1, 0)), vec![2]);
        let total: usize = g.cells().iter().map(|&c| g.members(c).len()).sum();
        assert_eq!(total, g.node_count());
    }

    #[test]
    fn build_errors() {
        let empty: RoadNetwork<f64> = load_network("", "").unwrap();
        assert_eq!(build_grid(&empty, (0.1, 0.1)).unwrap_err(), Error::EmptyIndex);
        let net = net_of(&[(0.0, 0.0)]);
        assert!(build_grid(&net, (0.0, 0.1)).is_err());
    }

    #[test]
    fn nearest_with_sector() {
        let net = net_of(&[(0.0, 0.0), (1.0, 0.0), (-0.5, 0.0)]);
        let g = build_grid(&net, (0.2, 0.2)).unwrap();
        let loc = p(0.1, 0.0);
        assert_eq!(g.nearest_node(loc, None).unwrap(), 0);
        let north = Heading::new(0.0, 45.0).unwrap();
        assert_eq!(g.nearest_node(loc, Some(north)).unwrap(), 1);
        let east = Heading::new(90.0, 10.0).unwrap();
        assert_eq!(g.nearest_node(loc, Some(east)).unwrap_err(), Error::NoNodeInSector);
    }

    #[test]
    fn ties_go_to_smaller_id() {
        let net = net_of(&[(0.0, 1.0), (0.0, -1.0), (0.0, 1.0)]);
        let g = build_grid(&net, (0.3, 0.3)).unwrap();
        assert_eq!(g.nearest_node(p(0.0, 0.0), None).unwrap(), 0);
        assert_eq!(g.nearest_node(p(0.0, 1.0), None).unwrap(), 0);
    }

    #[test]
    fn antimeridian_neighbours_are_found() {
        let net = net_of(&[(0.0, 179.95), (0.0, -179.99), (0.0, 170.0)]);
        let g = build_grid(&net, (0.01, 0.01)).unwrap();
        assert_eq!(g.nearest_node(p(0.0, 179.999), None).unwrap(), 1);
    }

    #[test]
    fn sector_cells() {
        let pts: Vec<(f64, f64)> = (0..5).flat_map(|r| (0..5).map(move |c| (r as f64 * 0.1, c as f64 * 0.1))).collect();
        let net = net_of(&pts);
        let g = build_grid(&net, (0.1, 0.1)).unwrap();
        let center = p(0.2, 0.2);
        assert_eq!(g.cells_in_sector(center, Heading::full_circle()).len(), g.cells().len());
        let north = Heading::new(0.0, 45.0).unwrap();
        let kept = g.cells_in_sector(center, north);
        assert!(kept.iter().all(|&(row, _)| row >= 1), "{kept:?}");
        for (id, loc) in net.nodes() {
            if within_sector(center, north, loc) {
                assert!(kept.contains(&g.cell_of(net.location(id).unwrap())));
            }
        }
    }

    #[test]
    fn cell_distance_bound_is_admissible() {
        let net = net_of(&[(0.0, 0.0), (1.0, 1.0)]);
        let g = build_grid(&net, (0.25, 0.25)).unwrap();
        let q = p(0.6, -0.3);
        for cell in g.cells() {
            let b = g.min_distance_to_cell(q, cell);
            for id in g.members(cell) {
                assert!(b <= haversine_distance(q, net.location(id).unwrap()));
            }
        }
        assert_eq!(g.min_distance_to_cell(p(0.1, 0.1), (0, 0)), 0.0);
    }

    #[test]
    fn single_precision_grid() {
        let net: RoadNetwork<f32> = load_network("0,0,0\n1,0.5,0.5\n2,1,1\n", "").unwrap();
        let g = build_grid(&net, (0.25f32, 0.25)).unwrap();
        assert_eq!(g.nearest_node(GeoPoint::new(0.6f32, 0.4).unwrap(), None).unwrap(), 1);
    }
}
