//! Undirected road graph weighted by travel time, multi-source Dijkstra
//! and revisioned traffic updates.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};
use std::fmt::Write as _;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geo::{haversine_distance, GeoPoint};
use crate::scalar::Scalar;
use crate::text::data_lines;

pub type NodeId = u64;

/// Travel time in whole seconds.
pub type Seconds = u64;

const UNSET: Seconds = Seconds::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Link {
    pub to: u32,
    pub time: Seconds,
}

/// The road graph. Node ids are kept sorted, so a node's dense index orders
/// the same way as its id.
#[derive(Debug, Clone)]
pub struct RoadNetwork<T> {
    ids: Arc<[NodeId]>,
    coords: Vec<GeoPoint<T>>,
    adjacency: Vec<Vec<Link>>,
    edge_count: usize,
    revision: u64,
    max_speed: T,
}

impl<T: Scalar> RoadNetwork<T> {
    /// Builds a network from node coordinates and undirected edges.
    /// Parallel edges collapse to their minimum travel time; self loops are
    /// dropped since they never shorten a path.
    pub fn from_parts(
        mut nodes: Vec<(NodeId, GeoPoint<T>)>,
        edges: impl IntoIterator<Item = (NodeId, NodeId, Seconds)>,
    ) -> Result<Self> {
        nodes.sort_by_key(|(id, _)| *id);
        for w in nodes.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::DuplicateNode(w[0].0));
            }
        }
        let ids: Arc<[NodeId]> = nodes.iter().map(|(id, _)| *id).collect();
        let coords = nodes.iter().map(|(_, p)| *p).collect();
        let mut net = Self {
            adjacency: vec![Vec::new(); ids.len()],
            ids,
            coords,
            edge_count: 0,
            revision: 0,
            max_speed: T::zero(),
        };
        for (u, v, time) in edges {
            let iu = net.index_of(u).ok_or(Error::UnknownNode(u))?;
            let iv = net.index_of(v).ok_or(Error::UnknownNode(v))?;
            if time == 0 {
                return Err(Error::InvalidTravelTime(u, v));
            }
            if iu != iv {
                net.insert_edge(iu, iv, time);
            }
        }
        net.max_speed = net.measure_max_speed();
        Ok(net)
    }

    fn insert_edge(&mut self, iu: usize, iv: usize, time: Seconds) {
        if let Some(arc) = self.adjacency[iu].iter_mut().find(|a| a.to as usize == iv) {
            if time < arc.time {
                arc.time = time;
                let back = self.adjacency[iv].iter_mut().find(|a| a.to as usize == iu).unwrap();
                back.time = time;
            }
            return;
        }
        self.adjacency[iu].push(Link { to: iv as u32, time });
        self.adjacency[iv].push(Link { to: iu as u32, time });
        self.edge_count += 1;
    }

    pub fn node_count(&self) -> usize {
        self.ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    /// Current traffic revision; starts at 0 and increases by one per update.
    pub fn revision(&self) -> u64 {
        self.revision
    }

    pub fn contains(&self, id: NodeId) -> bool {
        self.index_of(id).is_some()
    }

    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.ids.iter().copied()
    }

    pub fn location(&self, id: NodeId) -> Option<GeoPoint<T>> {
        self.index_of(id).map(|i| self.coords[i])
    }

    pub fn nodes(&self) -> impl Iterator<Item = (NodeId, GeoPoint<T>)> + '_ {
        self.ids.iter().copied().zip(self.coords.iter().copied())
    }

    pub fn neighbors(&self, id: NodeId) -> impl Iterator<Item = (NodeId, Seconds)> + '_ {
        let arcs = match self.index_of(id) {
            Some(i) => &self.adjacency[i][..],
            None => &[][..],
        };
        arcs.iter().map(|a| (self.ids[a.to as usize], a.time))
    }

    pub fn edge_time(&self, u: NodeId, v: NodeId) -> Option<Seconds> {
        let iu = self.index_of(u)?;
        let iv = self.index_of(v)?;
        self.adjacency[iu].iter().find(|a| a.to as usize == iv).map(|a| a.time)
    }

    /// Every undirected edge once, as `(u, v, time)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId, Seconds)> + '_ {
        self.adjacency.iter().enumerate().flat_map(move |(i, arcs)| {
            arcs.iter()
                .filter(move |a| (a.to as usize) > i)
                .map(move |a| (self.ids[i], self.ids[a.to as usize], a.time))
        })
    }

    /// Highest edge speed in m/s, measured as straight-line length over
    /// travel time. Dividing a haversine distance by this never overestimates
    /// a network travel time.
    pub fn max_edge_speed(&self) -> T {
        self.max_speed
    }

    fn measure_max_speed(&self) -> T {
        let mut best = T::zero();
        for (i, arcs) in self.adjacency.iter().enumerate() {
            for a in arcs {
                let len = haversine_distance(self.coords[i], self.coords[a.to as usize]);
                let speed = len / T::from_seconds(a.time);
                if speed > best {
                    best = speed;
                }
            }
        }
        best
    }

    pub(crate) fn index_of(&self, id: NodeId) -> Option<usize> {
        self.ids.binary_search(&id).ok()
    }

    pub(crate) fn coord_at(&self, ix: usize) -> GeoPoint<T> {
        self.coords[ix]
    }

    pub(crate) fn links(&self, ix: usize) -> &[Link] {
        &self.adjacency[ix]
    }

    pub(crate) fn coords(&self) -> &[GeoPoint<T>] {
        &self.coords
    }

    /// Replaces the named edge weights in both directions and bumps the
    /// revision. Nothing is applied unless every change is valid.
    pub fn apply_traffic_update(&mut self, update: &TrafficUpdate) -> Result<u64> {
        let mut resolved = Vec::with_capacity(update.changes.len());
        for &(u, v, time) in &update.changes {
            let iu = self.index_of(u).ok_or(Error::UnknownEdge(u, v))?;
            let iv = self.index_of(v).ok_or(Error::UnknownEdge(u, v))?;
            if !self.adjacency[iu].iter().any(|a| a.to as usize == iv) {
                return Err(Error::UnknownEdge(u, v));
            }
            if time == 0 {
                return Err(Error::InvalidTravelTime(u, v));
            }
            resolved.push((iu, iv, time));
        }
        for (iu, iv, time) in resolved {
            for (from, to) in [(iu, iv), (iv, iu)] {
                let arc = self.adjacency[from].iter_mut().find(|a| a.to as usize == to).unwrap();
                arc.time = time;
            }
        }
        self.max_speed = self.measure_max_speed();
        self.revision += 1;
        Ok(self.revision)
    }

    /// Multi-source Dijkstra restricted to edges whose endpoints both pass
    /// `node_filter`.
    pub fn shortest_travel_time(
        &self,
        sources: &[NodeId],
        stop: &StopCondition,
        node_filter: impl Fn(NodeId) -> bool,
    ) -> Result<TravelTimeField> {
        if sources.is_empty() {
            return Err(Error::NoSources);
        }
        let mut ixs = Vec::with_capacity(sources.len());
        for &s in sources {
            let ix = self.index_of(s).ok_or(Error::UnknownNode(s))?;
            if !node_filter(s) {
                return Err(Error::SourceFiltered(s));
            }
            ixs.push(ix);
        }
        let stop = self.resolve_stop(stop);
        Ok(self.dijkstra(&ixs, &stop, |ix| node_filter(self.ids[ix])))
    }

    /// Member of `targets` closest to `start`, ties going to the smaller id.
    pub fn nearest_poi_time(&self, start: NodeId, targets: &BTreeSet<NodeId>) -> Result<Option<(NodeId, Seconds)>> {
        if !self.contains(start) {
            return Err(Error::UnknownNode(start));
        }
        if targets.is_empty() {
            return Ok(None);
        }
        let field = self.shortest_travel_time(&[start], &StopCondition::FirstTarget(targets.clone()), |_| true)?;
        // first settled target is the answer: pops are ordered by (time, id)
        Ok(targets.iter().filter_map(|&t| field.time(t).map(|s| (t, s))).min_by_key(|&(t, s)| (s, t)))
    }

    /// Travel time from every node to its nearest member of `category_nodes`.
    pub fn category_field(&self, category_nodes: &BTreeSet<NodeId>) -> Result<TravelTimeField> {
        let sources: Vec<NodeId> = category_nodes.iter().copied().collect();
        self.shortest_travel_time(&sources, &StopCondition::Exhaust, |_| true)
    }

    pub(crate) fn resolve_stop(&self, stop: &StopCondition) -> IndexStop {
        let mark = |set: &BTreeSet<NodeId>| {
            let mut m = vec![false; self.ids.len()];
            let mut count = 0;
            for id in set {
                if let Some(ix) = self.index_of(*id) {
                    if !m[ix] {
                        m[ix] = true;
                        count += 1;
                    }
                }
            }
            (m, count)
        };
        match stop {
            StopCondition::Exhaust => IndexStop::Exhaust,
            StopCondition::Budget(b) => IndexStop::Budget(*b),
            StopCondition::FirstTarget(set) => IndexStop::FirstTarget(mark(set).0),
            StopCondition::AllTargets(set) => {
                let (m, count) = mark(set);
                IndexStop::AllTargets(m, count)
            }
        }
    }

    /// Index-level Dijkstra. Equal-time pops go to the smaller node id.
    pub(crate) fn dijkstra(
        &self,
        sources: &[usize],
        stop: &IndexStop,
        admit: impl Fn(usize) -> bool,
    ) -> TravelTimeField {
        let n = self.ids.len();
        let mut dist = vec![UNSET; n];
        let mut settled = vec![false; n];
        let mut times = vec![UNSET; n];
        let mut heap = BinaryHeap::new();
        for &s in sources {
            if dist[s] != 0 {
                dist[s] = 0;
                heap.push(Reverse((0, s as u32)));
            }
        }
        let mut remaining = match stop {
            IndexStop::AllTargets(_, count) => *count,
            _ => usize::MAX,
        };
        let mut settled_count = 0usize;
        if remaining == 0 {
            heap.clear();
        }
        while let Some(Reverse((d, u))) = heap.pop() {
            let u = u as usize;
            if settled[u] || d > dist[u] {
                continue;
            }
            if let IndexStop::Budget(b) = stop {
                if d > *b {
                    break;
                }
            }
            settled[u] = true;
            times[u] = d;
            settled_count += 1;
            match stop {
                IndexStop::FirstTarget(m) if m[u] => break,
                IndexStop::AllTargets(m, _) if m[u] => {
                    remaining -= 1;
                    if remaining == 0 {
                        break;
                    }
                }
                _ => {}
            }
            for a in &self.adjacency[u] {
                let v = a.to as usize;
                if settled[v] || !admit(v) {
                    continue;
                }
                let nd = d + a.time;
                if nd < dist[v] {
                    dist[v] = nd;
                    heap.push(Reverse((nd, v as u32)));
                }
            }
        }
        TravelTimeField {
            ids: Arc::clone(&self.ids),
            sources: sources.iter().map(|&s| self.ids[s]).collect(),
            times,
            revision: self.revision,
            settled: settled_count,
        }
    }

    /// Serializes the node table in the `node_id,lat,lon` format.
    pub fn write_nodes(&self) -> String {
        let mut out = String::new();
        for (id, p) in self.nodes() {
            let _ = writeln!(out, "{id},{},{}", p.lat(), p.lon());
        }
        out
    }

    /// Serializes the edge table in the `u,v,travel_time_s` format.
    pub fn write_edges(&self) -> String {
        let mut out = String::new();
        for (u, v, t) in self.edges() {
            let _ = writeln!(out, "{u},{v},{t}");
        }
        out
    }
}

/// When a shortest-path search may stop early.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StopCondition {
    /// Settle the whole reachable component.
    Exhaust,
    /// Stop right after the first target node is settled.
    FirstTarget(BTreeSet<NodeId>),
    /// Stop once every reachable target node is settled.
    AllTargets(BTreeSet<NodeId>),
    /// Settle only nodes within this many seconds.
    Budget(Seconds),
}

pub(crate) enum IndexStop {
    Exhaust,
    FirstTarget(Vec<bool>),
    AllTargets(Vec<bool>, usize),
    Budget(Seconds),
}

/// Multi-source Dijkstra advanced one settled node at a time. Equal-time
/// pops go to the smaller node id, as in the batch search. `restart` only
/// resets the nodes the previous run touched, so one instance can serve many
/// short searches.
#[derive(Debug, Clone)]
pub(crate) struct IncrementalSearch {
    dist: Vec<Seconds>,
    settled: Vec<bool>,
    touched: Vec<u32>,
    heap: BinaryHeap<Reverse<(Seconds, u32)>>,
    /// Nodes settled over every run of this instance.
    pub settled_count: u64,
}

impl IncrementalSearch {
    pub fn new(n: usize, sources: &[usize]) -> Self {
        let mut s = Self {
            dist: vec![UNSET; n],
            settled: vec![false; n],
            touched: Vec::new(),
            heap: BinaryHeap::new(),
            settled_count: 0,
        };
        s.restart(sources);
        s
    }

    pub fn restart(&mut self, sources: &[usize]) {
        for &t in &self.touched {
            self.dist[t as usize] = UNSET;
            self.settled[t as usize] = false;
        }
        self.touched.clear();
        self.heap.clear();
        for &s in sources {
            if self.dist[s] != 0 {
                self.dist[s] = 0;
                self.touched.push(s as u32);
                self.heap.push(Reverse((0, s as u32)));
            }
        }
    }

    fn drop_stale(&mut self) {
        while let Some(&Reverse((d, u))) = self.heap.peek() {
            let u = u as usize;
            if self.settled[u] || d > self.dist[u] {
                self.heap.pop();
            } else {
                break;
            }
        }
    }

    /// Lower bound on the time of every node not yet settled; `None` once
    /// the reachable part of the graph is exhausted.
    pub fn frontier(&mut self) -> Option<Seconds> {
        self.drop_stale();
        self.heap.peek().map(|r| r.0 .0)
    }

    pub fn settle_next<T: Scalar>(&mut self, net: &RoadNetwork<T>) -> Option<(usize, Seconds)> {
        self.drop_stale();
        let Reverse((d, u)) = self.heap.pop()?;
        let u = u as usize;
        self.settled[u] = true;
        self.settled_count += 1;
        for link in net.links(u) {
            let v = link.to as usize;
            let nd = d + link.time;
            if !self.settled[v] && nd < self.dist[v] {
                if self.dist[v] == UNSET {
                    self.touched.push(v as u32);
                }
                self.dist[v] = nd;
                self.heap.push(Reverse((nd, v as u32)));
            }
        }
        Some((u, d))
    }

    /// Settles nodes until one with `marks` set comes off the queue and
    /// returns its time.
    pub fn nearest_marked<T: Scalar>(&mut self, net: &RoadNetwork<T>, marks: &[bool]) -> Option<Seconds> {
        loop {
            let (u, d) = self.settle_next(net)?;
            if marks[u] {
                return Some(d);
            }
        }
    }

    /// Settles nodes until `target` is settled.
    pub fn time_to<T: Scalar>(&mut self, net: &RoadNetwork<T>, target: usize) -> Option<Seconds> {
        while !self.settled[target] {
            self.settle_next(net)?;
        }
        Some(self.dist[target])
    }
}

/// Converts straight-line metres into a travel-time lower bound, shaved so
/// rounding in the distance can never lift it past the true time.
#[derive(Debug, Clone, Copy)]
pub(crate) struct SpeedBound<T> {
    per_metre: T,
}

impl<T: Scalar> SpeedBound<T> {
    pub fn new(v_max: T) -> Self {
        let shave = T::one() - T::of(1e-9).max(T::of(64.0) * T::epsilon());
        let per_metre = if v_max > T::zero() { shave / v_max } else { T::zero() };
        Self { per_metre }
    }

    pub fn seconds(&self, metres: T) -> T {
        metres * self.per_metre
    }
}

/// Exact travel times for every node a search settled.
#[derive(Debug, Clone)]
pub struct TravelTimeField {
    ids: Arc<[NodeId]>,
    sources: Vec<NodeId>,
    times: Vec<Seconds>,
    revision: u64,
    settled: usize,
}

impl TravelTimeField {
    /// `None` when the node was not settled (unreachable or cut off).
    pub fn time(&self, id: NodeId) -> Option<Seconds> {
        let ix = self.ids.binary_search(&id).ok()?;
        self.time_at(ix)
    }

    pub(crate) fn time_at(&self, ix: usize) -> Option<Seconds> {
        let t = self.times[ix];
        (t != UNSET).then_some(t)
    }

    pub fn sources(&self) -> &[NodeId] {
        &self.sources
    }

    /// Network revision the field was computed against.
    pub fn revision(&self) -> u64 {
        self.revision
    }

    pub fn is_stale<T: Scalar>(&self, net: &RoadNetwork<T>) -> bool {
        self.revision != net.revision()
    }

    /// Number of settled nodes, the engine's I/O proxy.
    pub fn settled(&self) -> usize {
        self.settled
    }

    pub fn iter(&self) -> impl Iterator<Item = (NodeId, Seconds)> + '_ {
        self.ids.iter().zip(&self.times).filter(|(_, &t)| t != UNSET).map(|(&id, &t)| (id, t))
    }
}

/// A batch of edge re-weightings applied atomically.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TrafficUpdate {
    pub changes: Vec<(NodeId, NodeId, Seconds)>,
}

impl TrafficUpdate {
    pub fn new(changes: Vec<(NodeId, NodeId, Seconds)>) -> Self {
        Self { changes }
    }

    /// Share of the network's edges this update touches.
    pub fn changed_fraction<T: Scalar>(&self, net: &RoadNetwork<T>) -> f64 {
        if net.edge_count() == 0 {
            return 0.0;
        }
        let distinct: BTreeSet<(NodeId, NodeId)> = self.changes.iter().map(|&(u, v, _)| (u.min(v), u.max(v))).collect();
        distinct.len() as f64 / net.edge_count() as f64
    }
}

/// Parses the node (`node_id,lat,lon`) and edge (`u,v,travel_time_s`) tables.
pub fn load_network<T: Scalar>(nodes_source: &str, edges_source: &str) -> Result<RoadNetwork<T>> {
    let mut nodes = Vec::new();
    for (line, row) in data_lines(nodes_source) {
        let fields: Vec<&str> = row.split(',').map(str::trim).collect();
        if fields.len() != 3 {
            return Err(malformed(line, format!("expected node_id,lat,lon, got {row:?}")));
        }
        let id: NodeId = fields[0].parse().map_err(|_| malformed(line, format!("bad node id {:?}", fields[0])))?;
        let lat: T = parse_real(line, fields[1])?;
        let lon: T = parse_real(line, fields[2])?;
        let p = GeoPoint::new(lat, lon).map_err(|e| malformed(line, e.to_string()))?;
        nodes.push((id, p));
    }
    let mut edges = Vec::new();
    for (line, row) in data_lines(edges_source) {
        let fields: Vec<&str> = row.split(',').map(str::trim).collect();
        if fields.len() != 3 {
            return Err(malformed(line, format!("expected u,v,travel_time_s, got {row:?}")));
        }
        let u: NodeId = fields[0].parse().map_err(|_| malformed(line, format!("bad node id {:?}", fields[0])))?;
        let v: NodeId = fields[1].parse().map_err(|_| malformed(line, format!("bad node id {:?}", fields[1])))?;
        let w: i64 = fields[2].parse().map_err(|_| malformed(line, format!("bad travel time {:?}", fields[2])))?;
        if w <= 0 {
            return Err(Error::NonPositiveWeight { line, value: fields[2].to_string() });
        }
        edges.push((u, v, w as Seconds));
    }
    RoadNetwork::from_parts(nodes, edges)
}

pub(crate) fn malformed(line: usize, message: String) -> Error {
    Error::Malformed { line, message }
}

pub(crate) fn parse_real<T: Scalar>(line: usize, s: &str) -> Result<T> {
    s.parse::<T>().ok().filter(|v| v.is_finite()).ok_or_else(|| malformed(line, format!("bad number {s:?}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path_graph() -> RoadNetwork<f64> {
        load_network("0,0,0\n1,0,0.01\n2,0,0.02\n", "0,1,60\n1,2,30\n").unwrap()
    }

    #[test]
    fn loads_minimal_graph() {
        let net: RoadNetwork<f64> = load_network("0,0,0\n1,0,0.01\n", "0,1,60\n").unwrap();
        assert_eq!(net.node_count(), 2);
        assert_eq!(net.edge_count(), 1);
        assert_eq!(net.revision(), 0);
        assert_eq!(net.edge_time(1, 0), Some(60));
    }

    #[test]
    fn duplicate_edges_keep_minimum() {
        let net: RoadNetwork<f64> = load_network("0,0,0\n1,0,0.01\n", "0,1,60\n1,0,45\n0,1,90\n").unwrap();
        assert_eq!(net.edge_count(), 1);
        assert_eq!(net.edge_time(0, 1), Some(45));
        assert_eq!(net.edge_time(1, 0), Some(45));
        assert_eq!(net.neighbors(0).collect::<Vec<_>>(), vec![(1, 45)]);
    }

    #[test]
    fn loader_errors() {
        let e = load_network::<f64>("0,0,0\n1,0,0.01\n", "0,7,60\n").unwrap_err();
        assert_eq!(e.to_string(), "unknown node 7");
        let e = load_network::<f64>("0,0,0\n1,0,0.01\n", "0,1,0\n").unwrap_err();
        assert!(matches!(e, Error::NonPositiveWeight { line: 1, .. }));
        let e = load_network::<f64>("0,0,0\n1,0,0.01\n", "0,1,-3\n").unwrap_err();
        assert!(matches!(e, Error::NonPositiveWeight { .. }));
        let e = load_network::<f64>("# header\n0,0,0\n1,zero,0\n", "").unwrap_err();
        assert!(matches!(e, Error::Malformed { line: 3, .. }), "{e}");
        let e = load_network::<f64>("0,0,0\n0,1,1\n", "").unwrap_err();
        assert_eq!(e, Error::DuplicateNode(0));
        let e = load_network::<f64>("0,0,0\n1,0,1\n", "0,1\n").unwrap_err();
        assert!(matches!(e, Error::Malformed { line: 1, .. }));
    }

    #[test]
    fn loader_accepts_crlf_and_comments() {
        let net: RoadNetwork<f64> = load_network("# nodes\r\n0,0,0\r\n\r\n1,0,0.01\r\n", "#e\r\n0,1,60\r\n").unwrap();
        assert_eq!(net.edge_count(), 1);
    }

    #[test]
    fn path_graph_times() {
        let net = path_graph();
        let f = net.shortest_travel_time(&[0], &StopCondition::Exhaust, |_| true).unwrap();
        assert_eq!(f.iter().collect::<Vec<_>>(), vec![(0, 0), (1, 60), (2, 90)]);
        assert_eq!(f.settled(), 3);
        let f = net.shortest_travel_time(&[0, 2], &StopCondition::Exhaust, |_| true).unwrap();
        assert_eq!(f.iter().collect::<Vec<_>>(), vec![(0, 0), (1, 30), (2, 0)]);
    }

    #[test]
    fn unreachable_nodes_are_absent() {
        let net: RoadNetwork<f64> = load_network("0,0,0\n1,0,1\n2,1,1\n", "0,1,5\n").unwrap();
        let f = net.shortest_travel_time(&[0], &StopCondition::Exhaust, |_| true).unwrap();
        assert_eq!(f.time(2), None);
        assert_eq!(f.time(1), Some(5));
    }

    #[test]
    fn stop_conditions() {
        let net = path_graph();
        let f = net.shortest_travel_time(&[0], &StopCondition::Budget(60), |_| true).unwrap();
        assert_eq!(f.time(1), Some(60));
        assert_eq!(f.time(2), None);
        let f = net.shortest_travel_time(&[0], &StopCondition::FirstTarget([1, 2].into()), |_| true).unwrap();
        assert_eq!(f.settled(), 2);
        let f = net.shortest_travel_time(&[0], &StopCondition::AllTargets([0].into()), |_| true).unwrap();
        assert_eq!(f.settled(), 1);
    }

    #[test]
    fn node_filter_blocks_paths() {
        let net = path_graph();
        let f = net.shortest_travel_time(&[0], &StopCondition::Exhaust, |n| n != 1).unwrap();
        assert_eq!(f.time(2), None);
        assert_eq!(
            net.shortest_travel_time(&[1], &StopCondition::Exhaust, |n| n != 1).unwrap_err(),
            Error::SourceFiltered(1)
        );
        assert_eq!(net.shortest_travel_time(&[], &StopCondition::Exhaust, |_| true).unwrap_err(), Error::NoSources);
    }

    #[test]
    fn nearest_poi() {
        let net = path_graph();
        assert_eq!(net.nearest_poi_time(0, &[0].into()).unwrap(), Some((0, 0)));
        assert_eq!(net.nearest_poi_time(0, &[1, 2].into()).unwrap(), Some((1, 60)));
        assert_eq!(net.nearest_poi_time(0, &BTreeSet::new()).unwrap(), None);

        // star: 3 and 5 both 90 s away from 0
        let star: RoadNetwork<f64> = load_network("0,0,0\n3,0,1\n5,1,0\n9,5,5\n", "0,3,90\n0,5,90\n").unwrap();
        assert_eq!(star.nearest_poi_time(0, &[5, 3].into()).unwrap(), Some((3, 90)));
        assert_eq!(star.nearest_poi_time(0, &[9].into()).unwrap(), None);
    }

    #[test]
    fn category_field_single_member() {
        let net = path_graph();
        let f = net.category_field(&[2].into()).unwrap();
        assert_eq!(f.time(2), Some(0));
        assert_eq!(f.time(1), Some(30));
        assert_eq!(f.time(0), Some(90));
    }

    #[test]
    fn traffic_updates() {
        let mut net = path_graph();
        assert_eq!(net.apply_traffic_update(&TrafficUpdate::default()).unwrap(), 1);
        assert_eq!(net.edge_time(0, 1), Some(60));
        let field = net.category_field(&[0].into()).unwrap();
        net.apply_traffic_update(&TrafficUpdate::new(vec![(0, 1, 120)])).unwrap();
        assert_eq!(net.edge_time(0, 1), Some(120));
        assert_eq!(net.edge_time(1, 0), Some(120));
        assert!(field.is_stale(&net));

        let before = net.revision();
        let err = net.apply_traffic_update(&TrafficUpdate::new(vec![(1, 2, 7), (0, 9, 5)])).unwrap_err();
        assert_eq!(err, Error::UnknownEdge(0, 9));
        assert_eq!(net.revision(), before);
        assert_eq!(net.edge_time(1, 2), Some(30));
        assert!(net.apply_traffic_update(&TrafficUpdate::new(vec![(0, 2, 7)])).is_err());
    }

    #[test]
    fn changed_fraction_counts_distinct_edges() {
        let net = path_graph();
        let upd = TrafficUpdate::new(vec![(0, 1, 5), (1, 0, 6)]);
        assert_eq!(upd.changed_fraction(&net), 0.5);
    }

    #[test]
    fn writes_round_trip() {
        let net = path_graph();
        let again: RoadNetwork<f64> = load_network(&net.write_nodes(), &net.write_edges()).unwrap();
        assert_eq!(again.edges().collect::<Vec<_>>(), net.edges().collect::<Vec<_>>());
        assert_eq!(again.nodes().collect::<Vec<_>>(), net.nodes().collect::<Vec<_>>());
    }
}
