//! Skyline query model and its one-line text record.
//!
//! A record is a comma-separated list of `key=value` fields:
//!
//! ```text
//! origin_lat=34.05, origin_lon=-118.25, bearing=90, half_angle=60,
//!   primary=apartment:cost_class=LOW COST|MEDIUM&price=0..150,
//!   secondary=hospital;restaurant:rating=3..5,
//!   objectives=price:min,rating:max
//! ```
//!
//! * `origin_lat`, `origin_lon`, `primary` are required.
//! * `bearing` is optional; without it the sector is the full circle.
//!   `half_angle` defaults to 90 when a bearing is given and 180 otherwise.
//! * A preference is `category[:filter(&filter)*]`, where a filter is either
//!   `attr=lo..hi` (closed numeric range) or `attr=LABEL|LABEL...` (at most
//!   one label filter per preference).
//! * `secondary` holds preferences separated by `;`.
//! * `objectives` holds `attr:min` / `attr:max` pairs separated by commas.
//!
//! Fields are split at commas that are followed by a known key and `=`, so
//! commas inside `objectives` need no escaping.

use std::fmt;

use crate::error::{Error, Result};
use crate::geo::{GeoPoint, Heading};
use crate::poi::{PoiCatalog, PreferenceSpec};
use crate::scalar::Scalar;
use crate::skyline::{Dim, Schema, Sense};

/// Half-angle applied when a bearing is given without one.
pub const DEFAULT_HALF_ANGLE: f64 = 90.0;

const KEYS: [&str; 7] = ["origin_lat", "origin_lon", "bearing", "half_angle", "primary", "secondary", "objectives"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Objective {
    pub attribute: String,
    pub sense: Sense,
}

impl Objective {
    pub fn minimize(attribute: &str) -> Self {
        Self { attribute: attribute.to_string(), sense: Sense::Minimize }
    }

    pub fn maximize(attribute: &str) -> Self {
        Self { attribute: attribute.to_string(), sense: Sense::Maximize }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SkylineQuery<T> {
    pub origin: GeoPoint<T>,
    pub heading: Heading<T>,
    /// Defines the candidate objects.
    pub primary: PreferenceSpec<T>,
    /// Each adds a travel-time dimension to the nearest matching POI.
    pub secondary: Vec<PreferenceSpec<T>>,
    pub objectives: Vec<Objective>,
}

impl<T: Scalar> SkylineQuery<T> {
    pub fn new(origin: GeoPoint<T>, heading: Heading<T>, primary: PreferenceSpec<T>) -> Self {
        Self { origin, heading, primary, secondary: Vec::new(), objectives: Vec::new() }
    }

    pub fn with_secondary(mut self, spec: PreferenceSpec<T>) -> Self {
        self.secondary.push(spec);
        self
    }

    pub fn with_objective(mut self, objective: Objective) -> Self {
        self.objectives.push(objective);
        self
    }

    pub fn validate(&self, catalog: &PoiCatalog<T>) -> Result<()> {
        self.primary.validate()?;
        for s in &self.secondary {
            s.validate()?;
        }
        for o in &self.objectives {
            if !catalog.has_attribute(&o.attribute) {
                return Err(Error::UnknownAttribute(o.attribute.clone()));
            }
        }
        Ok(())
    }

    /// Travel time from the origin, then one travel-time dimension per
    /// secondary preference, then the attribute objectives.
    pub fn schema(&self) -> Schema {
        let mut dims = vec![Dim::new("time:origin", Sense::Minimize)];
        dims.extend(self.secondary.iter().map(|s| Dim::new(format!("time:{}", s.category), Sense::Minimize)));
        dims.extend(self.objectives.iter().map(|o| Dim::new(o.attribute.clone(), o.sense)));
        dims.into()
    }

    pub fn dimension_count(&self) -> usize {
        1 + self.secondary.len() + self.objectives.len()
    }

    /// Canonical text of the preference part, independent of filter order.
    pub fn preference_key(&self) -> String {
        let secondary: Vec<String> = self.secondary.iter().map(|s| s.canonical()).collect();
        let objectives: Vec<String> =
            self.objectives.iter().map(|o| format!("{}:{}", o.attribute, o.sense.as_str())).collect();
        format!("{}|{}|{}", self.primary.canonical(), secondary.join(";"), objectives.join(","))
    }

    pub fn parse(record: &str) -> Result<Self> {
        let mut fields: Vec<(String, String)> = Vec::new();
        for seg in record.split(',') {
            let t = seg.trim_start();
            let starts_field = t.split_once('=').is_some_and(|(k, _)| KEYS.contains(&k.trim()));
            if starts_field {
                let (k, v) = t.split_once('=').unwrap();
                fields.push((k.trim().to_string(), v.to_string()));
            } else if let Some(last) = fields.last_mut() {
                last.1.push(',');
                last.1.push_str(seg);
            } else if !seg.trim().is_empty() {
                return Err(Error::QueryParse(format!("expected key=value, got {seg:?}")));
            }
        }
        let get = |key: &str| -> Result<Option<String>> {
            let mut found = fields.iter().filter(|(k, _)| k == key);
            let first = found.next().map(|(_, v)| v.trim().to_string());
            if found.next().is_some() {
                return Err(Error::QueryParse(format!("duplicate field {key}")));
            }
            Ok(first)
        };
        let number = |key: &str, v: String| -> Result<T> {
            v.parse::<T>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| Error::QueryParse(format!("{key}: bad number {v:?}")))
        };
        let require = |key: &str, v: Option<String>| v.ok_or_else(|| Error::QueryParse(format!("missing field {key}")));

        let lat = number("origin_lat", require("origin_lat", get("origin_lat")?)?)?;
        let lon = number("origin_lon", require("origin_lon", get("origin_lon")?)?)?;
        let origin = GeoPoint::new(lat, lon)?;
        let bearing = get("bearing")?.map(|v| number("bearing", v)).transpose()?;
        let half_angle = get("half_angle")?.map(|v| number("half_angle", v)).transpose()?;
        let heading = match (bearing, half_angle) {
            (None, None) => Heading::full_circle(),
            (b, h) => Heading::new(
                b.unwrap_or_else(T::zero),
                h.unwrap_or_else(|| if b.is_some() { T::of(DEFAULT_HALF_ANGLE) } else { T::of(180.0) }),
            )?,
        };
        let primary = parse_spec(&require("primary", get("primary")?)?)?;
        let secondary = match get("secondary")? {
            Some(v) if !v.is_empty() => v.split(';').map(|s| parse_spec(s.trim())).collect::<Result<Vec<_>>>()?,
            _ => Vec::new(),
        };
        let objectives = match get("objectives")? {
            Some(v) if !v.is_empty() => v
                .split(',')
                .map(|o| {
                    let (attr, sense) = o
                        .trim()
                        .split_once(':')
                        .ok_or_else(|| Error::QueryParse(format!("objective {o:?} needs :min or :max")))?;
                    let sense = match sense.trim() {
                        "min" => Sense::Minimize,
                        "max" => Sense::Maximize,
                        other => return Err(Error::QueryParse(format!("unknown sense {other:?}"))),
                    };
                    Ok(Objective { attribute: attr.trim().to_string(), sense })
                })
                .collect::<Result<Vec<_>>>()?,
            _ => Vec::new(),
        };
        Ok(Self { origin, heading, primary, secondary, objectives })
    }
}

fn parse_spec<T: Scalar>(text: &str) -> Result<PreferenceSpec<T>> {
    let (category, filters) = match text.split_once(':') {
        Some((c, f)) => (c.trim(), Some(f)),
        None => (text.trim(), None),
    };
    if category.is_empty() {
        return Err(Error::QueryParse(format!("empty category in {text:?}")));
    }
    let mut spec = PreferenceSpec::category(category);
    for filter in filters.into_iter().flat_map(|f| f.split('&')) {
        let (attr, value) =
            filter.split_once('=').ok_or_else(|| Error::QueryParse(format!("filter {filter:?} needs attr=value")))?;
        let (attr, value) = (attr.trim(), value.trim());
        let range = value
            .split_once("..")
            .and_then(|(lo, hi)| Some((lo.trim().parse::<T>().ok()?, hi.trim().parse::<T>().ok()?)));
        match range {
            Some((lo, hi)) => spec = spec.with_range(attr, lo, hi),
            None => {
                if spec.label_filter.is_some() {
                    return Err(Error::QueryParse(format!("second label filter in {text:?}")));
                }
                spec = spec.with_labels(attr, value.split('|').map(str::trim));
            }
        }
    }
    spec.validate()?;
    Ok(spec)
}

fn write_spec<T: Scalar>(f: &mut fmt::Formatter<'_>, spec: &PreferenceSpec<T>) -> fmt::Result {
    write!(f, "{}", spec.category)?;
    let mut sep = ':';
    if let Some(lf) = &spec.label_filter {
        let labels: Vec<&str> = lf.allowed.iter().map(String::as_str).collect();
        write!(f, "{sep}{}={}", lf.attribute, labels.join("|"))?;
        sep = '&';
    }
    for r in &spec.range_filters {
        write!(f, "{sep}{}={}..{}", r.attribute, r.min, r.max)?;
        sep = '&';
    }
    Ok(())
}

impl<T: Scalar> fmt::Display for SkylineQuery<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "origin_lat={}, origin_lon={}", self.origin.lat(), self.origin.lon())?;
        if !self.heading.is_full_circle() {
            write!(f, ", bearing={}, half_angle={}", self.heading.bearing(), self.heading.half_angle())?;
        }
        write!(f, ", primary=")?;
        write_spec(f, &self.primary)?;
        if !self.secondary.is_empty() {
            write!(f, ", secondary=")?;
            for (i, s) in self.secondary.iter().enumerate() {
                if i > 0 {
                    write!(f, ";")?;
                }
                write_spec(f, s)?;
            }
        }
        if !self.objectives.is_empty() {
            let objs: Vec<String> =
                self.objectives.iter().map(|o| format!("{}:{}", o.attribute, o.sense.as_str())).collect();
            write!(f, ", objectives={}", objs.join(","))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_full_record() {
        let q: SkylineQuery<f64> = SkylineQuery::parse(
            "origin_lat=34.05, origin_lon=-118.25, bearing=90, half_angle=60, \
             primary=apartment:cost_class=LOW COST|MEDIUM&price=0..150, \
             secondary=hospital;restaurant:rating=3..5, objectives=price:min,rating:max",
        )
        .unwrap();
        assert_eq!(q.origin, GeoPoint::new(34.05, -118.25).unwrap());
        assert_eq!(q.heading, Heading::new(90.0, 60.0).unwrap());
        assert_eq!(q.primary.category, "apartment");
        let lf = q.primary.label_filter.as_ref().unwrap();
        assert_eq!(lf.attribute, "cost_class");
        assert!(lf.allowed.contains("LOWCOST") && lf.allowed.contains("MEDIUM"));
        assert_eq!(q.primary.range_filters[0].max, 150.0);
        assert_eq!(q.secondary.len(), 2);
        assert_eq!(q.secondary[1].range_filters[0].min, 3.0);
        assert_eq!(q.objectives, vec![Objective::minimize("price"), Objective::maximize("rating")]);
        assert_eq!(q.dimension_count(), 5);
        assert_eq!(q.schema().len(), 5);
    }

    #[test]
    fn heading_defaults() {
        let q: SkylineQuery<f64> = SkylineQuery::parse("origin_lat=1,origin_lon=2,primary=h").unwrap();
        assert!(q.heading.is_full_circle());
        let q: SkylineQuery<f64> = SkylineQuery::parse("origin_lat=1,origin_lon=2,bearing=45,primary=h").unwrap();
        assert_eq!(q.heading.half_angle(), 90.0);
    }

    #[test]
    fn parse_errors() {
        for bad in [
            "origin_lon=2,primary=h",
            "origin_lat=x,origin_lon=2,primary=h",
            "origin_lat=1,origin_lon=2",
            "origin_lat=1,origin_lon=2,primary=h,objectives=price",
            "origin_lat=1,origin_lon=2,primary=h,objectives=price:avg",
            "origin_lat=1,origin_lon=2,primary=h:a=x&b=y",
            "origin_lat=1,origin_lon=2,primary=h:price=5..1",
            "origin_lat=1,origin_lon=2,primary=h,primary=r",
            "junk,origin_lat=1,origin_lon=2,primary=h",
            "origin_lat=1,origin_lon=2,half_angle=0,primary=h",
        ] {
            assert!(SkylineQuery::<f64>::parse(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn display_round_trips() {
        let text = "origin_lat=34.05, origin_lon=-118.25, bearing=90, half_angle=60, \
                    primary=apartment:cost_class=LOW COST&price=0..150.5, \
                    secondary=hospital;restaurant, objectives=price:min,rating:max";
        let q: SkylineQuery<f64> = SkylineQuery::parse(text).unwrap();
        let again: SkylineQuery<f64> = SkylineQuery::parse(&q.to_string()).unwrap();
        assert_eq!(q, again);
        assert_eq!(q.preference_key(), again.preference_key());
    }

    #[test]
    fn validate_checks_objectives() {
        let q: SkylineQuery<f64> =
            SkylineQuery::parse("origin_lat=1,origin_lon=2,primary=h,objectives=price:min").unwrap();
        assert_eq!(q.validate(&PoiCatalog::new()).unwrap_err(), Error::UnknownAttribute("price".into()));
    }
}
