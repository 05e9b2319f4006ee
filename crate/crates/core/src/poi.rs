//! Points of interest, preference specs and the filter phase.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::geo::GeoPoint;
use crate::grid::GridIndex;
use crate::network::{malformed, parse_real, NodeId, RoadNetwork};
use crate::scalar::Scalar;
use crate::text::data_lines;

/// Canonical spelling of a label: alphanumerics only, upper case, so that
/// `LOW COST`, `LowCost` and `LOWCOST` match each other.
pub fn canonical_label(label: &str) -> String {
    label.chars().filter(|c| c.is_alphanumeric()).flat_map(char::to_uppercase).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Poi<T> {
    pub id: String,
    pub location: GeoPoint<T>,
    pub snapped_node: NodeId,
    pub category: String,
    pub attributes: BTreeMap<String, T>,
    pub labels: BTreeMap<String, String>,
}

impl<T: Scalar> Poi<T> {
    pub fn attribute(&self, name: &str) -> Option<T> {
        self.attributes.get(name).copied()
    }

    pub fn label(&self, name: &str) -> Option<&str> {
        self.labels.get(name).map(String::as_str)
    }
}

#[derive(Debug, Clone, Default)]
pub struct PoiCatalog<T> {
    pois: BTreeMap<String, Poi<T>>,
    by_category: BTreeMap<String, BTreeSet<String>>,
}

impl<T: Scalar> PoiCatalog<T> {
    pub fn new() -> Self {
        Self { pois: BTreeMap::new(), by_category: BTreeMap::new() }
    }

    pub fn insert(&mut self, poi: Poi<T>) -> Result<()> {
        if self.pois.contains_key(&poi.id) {
            return Err(Error::DuplicatePoi(poi.id));
        }
        if let Some((name, _)) = poi.attributes.iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::InvalidPreference(format!("{}: attribute {name} not finite", poi.id)));
        }
        self.by_category.entry(poi.category.clone()).or_default().insert(poi.id.clone());
        self.pois.insert(poi.id.clone(), poi);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.pois.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pois.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&Poi<T>> {
        self.pois.get(id)
    }

    /// All POIs in id order.
    pub fn iter(&self) -> impl Iterator<Item = &Poi<T>> {
        self.pois.values()
    }

    pub fn categories(&self) -> impl Iterator<Item = &str> {
        self.by_category.keys().map(String::as_str)
    }

    pub fn category_members(&self, category: &str) -> impl Iterator<Item = &Poi<T>> {
        self.by_category.get(category).into_iter().flatten().map(|id| &self.pois[id])
    }

    /// True when some POI carries the numeric attribute.
    pub fn has_attribute(&self, name: &str) -> bool {
        self.pois.values().any(|p| p.attributes.contains_key(name))
    }

    /// Serializes the catalog in the POI file format.
    pub fn write(&self) -> String {
        let mut out = String::new();
        for p in self.pois.values() {
            let _ = write!(out, "{},{},{},{}", p.id, p.location.lat(), p.location.lon(), p.category);
            for (k, v) in &p.labels {
                let _ = write!(out, ",{k}={v}");
            }
            for (k, v) in &p.attributes {
                let _ = write!(out, ",{k}={v}");
            }
            out.push('\n');
        }
        out
    }

    /// Copy keeping only the POIs `keep` accepts.
    pub fn retain(&self, mut keep: impl FnMut(&Poi<T>) -> bool) -> Self {
        let mut out = Self::new();
        for p in self.pois.values().filter(|p| keep(p)) {
            out.insert(p.clone()).expect("ids already unique");
        }
        out
    }
}

/// Admissible labels for one label attribute, stored canonically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelFilter {
    pub attribute: String,
    pub allowed: BTreeSet<String>,
}

impl LabelFilter {
    pub fn new<I, S>(attribute: &str, allowed: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        Self {
            attribute: attribute.to_string(),
            allowed: allowed.into_iter().map(|s| canonical_label(s.as_ref())).collect(),
        }
    }
}

/// Closed interval on a numeric attribute.
#[derive(Debug, Clone, PartialEq)]
pub struct RangeFilter<T> {
    pub attribute: String,
    pub min: T,
    pub max: T,
}

/// One user preference: a POI category plus the filters its members must pass.
#[derive(Debug, Clone, PartialEq)]
pub struct PreferenceSpec<T> {
    pub category: String,
    pub label_filter: Option<LabelFilter>,
    pub range_filters: Vec<RangeFilter<T>>,
}

impl<T: Scalar> PreferenceSpec<T> {
    pub fn category(category: &str) -> Self {
        Self { category: category.to_string(), label_filter: None, range_filters: Vec::new() }
    }

    pub fn with_labels<I, S>(mut self, attribute: &str, allowed: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        self.label_filter = Some(LabelFilter::new(attribute, allowed));
        self
    }

    pub fn with_range(mut self, attribute: &str, min: T, max: T) -> Self {
        self.range_filters.push(RangeFilter { attribute: attribute.to_string(), min, max });
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.category.is_empty() {
            return Err(Error::InvalidPreference("empty category".into()));
        }
        for r in &self.range_filters {
            if r.min.partial_cmp(&r.max).is_none_or(|o| o.is_gt()) {
                return Err(Error::InvalidPreference(format!(
                    "range on {} has min {} > max {}",
                    r.attribute, r.min, r.max
                )));
            }
        }
        Ok(())
    }

    /// Whether a POI satisfies the category and every filter. Missing
    /// attributes fail their filter.
    pub fn admits(&self, poi: &Poi<T>) -> bool {
        if poi.category != self.category {
            return false;
        }
        if let Some(lf) = &self.label_filter {
            match poi.label(&lf.attribute) {
                Some(label) if lf.allowed.contains(&canonical_label(label)) => {}
                _ => return false,
            }
        }
        self.range_filters.iter().all(|r| poi.attribute(&r.attribute).is_some_and(|v| v >= r.min && v <= r.max))
    }

    /// Stable textual form used in cache keys.
    pub fn canonical(&self) -> String {
        let mut s = self.category.clone();
        if let Some(lf) = &self.label_filter {
            let labels: Vec<&str> = lf.allowed.iter().map(String::as_str).collect();
            let _ = write!(s, "&{}={}", lf.attribute, labels.join("|"));
        }
        let mut ranges: Vec<String> =
            self.range_filters.iter().map(|r| format!("{}={:?}..{:?}", r.attribute, r.min, r.max)).collect();
        ranges.sort();
        for r in ranges {
            let _ = write!(s, "&{r}");
        }
        s
    }
}

/// Filter phase: the POIs of the preference's category passing all its filters,
/// in id order. No travel time is computed here.
pub fn filter_phase<T: Scalar>(catalog: &PoiCatalog<T>, spec: &PreferenceSpec<T>) -> Vec<String> {
    catalog.category_members(&spec.category).filter(|p| spec.admits(p)).map(|p| p.id.clone()).collect()
}

/// Parses `poi_id,lat,lon,category[,key=value...]` rows and snaps each POI to
/// its nearest network node. Numeric values become attributes, anything else
/// a label.
pub fn load_pois<T: Scalar>(source: &str, net: &RoadNetwork<T>, grid: &GridIndex<T>) -> Result<PoiCatalog<T>> {
    let mut catalog = PoiCatalog::new();
    for (line, row) in data_lines(source) {
        let fields: Vec<&str> = row.split(',').map(str::trim).collect();
        if fields.len() < 4 {
            return Err(malformed(line, format!("expected poi_id,lat,lon,category, got {row:?}")));
        }
        let (id, category) = (fields[0], fields[3]);
        if id.is_empty() || category.is_empty() {
            return Err(malformed(line, "empty poi id or category".into()));
        }
        let lat: T = parse_real(line, fields[1])?;
        let lon: T = parse_real(line, fields[2])?;
        let location = GeoPoint::new(lat, lon).map_err(|e| malformed(line, e.to_string()))?;

        let mut attributes = BTreeMap::new();
        let mut labels = BTreeMap::new();
        for kv in &fields[4..] {
            let (k, v) =
                kv.split_once('=').ok_or_else(|| malformed(line, format!("expected key=value, got {kv:?}")))?;
            let (k, v) = (k.trim(), v.trim());
            if k.is_empty() {
                return Err(malformed(line, format!("empty attribute name in {kv:?}")));
            }
            match v.parse::<T>() {
                Ok(x) if x.is_finite() => {
                    attributes.insert(k.to_string(), x);
                }
                _ => {
                    labels.insert(k.to_string(), v.to_string());
                }
            }
        }

        let snapped_node = grid.nearest_node(location, None)?;
        debug_assert!(net.contains(snapped_node));
        let poi =
            Poi { id: id.to_string(), location, snapped_node, category: category.to_string(), attributes, labels };
        catalog.insert(poi).map_err(|e| match e {
            Error::DuplicatePoi(id) => malformed(line, format!("duplicate poi id {id}")),
            other => other,
        })?;
    }
    Ok(catalog)
}
