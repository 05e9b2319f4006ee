//! Spherical geodesy: haversine distance, forward azimuth and angular
//! sector tests used for directional pruning.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Mean Earth radius in meters.
pub const EARTH_RADIUS_M: f64 = 6_371_000.0;

/// A latitude/longitude pair in decimal degrees.
///
/// Longitude is normalized into `[-180, 180)` on construction so that
/// aliases such as `180` and `-180` compare equal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeoPoint<T> {
    lat: T,
    lon: T,
}

impl<T: Scalar> GeoPoint<T> {
    pub fn new(lat: T, lon: T) -> Result<Self> {
        if !lat.is_finite() || !lon.is_finite() {
            return Err(Error::InvalidCoordinate(format!("({lat}, {lon}) is not finite")));
        }
        let ninety = T::of(90.0);
        if lat < -ninety || lat > ninety {
            return Err(Error::InvalidCoordinate(format!("latitude {lat} outside [-90, 90]")));
        }
        Ok(Self { lat, lon: normalize_lon(lon) })
    }

    pub fn lat(&self) -> T {
        self.lat
    }

    pub fn lon(&self) -> T {
        self.lon
    }
}

fn normalize_lon<T: Scalar>(lon: T) -> T {
    let half = T::of(180.0);
    if lon >= -half && lon < half {
        return lon;
    }
    let full = T::of(360.0);
    let mut wrapped = (lon + half) % full;
    if wrapped < T::zero() {
        wrapped = wrapped + full;
    }
    let out = wrapped - half;
    if out >= half {
        out - full
    } else {
        out
    }
}

/// Direction of travel: a compass bearing plus the half-width of the
/// admissible sector around it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Heading<T> {
    bearing: T,
    half_angle: T,
}

impl<T: Scalar> Heading<T> {
    /// `half_angle` of 180 disables pruning.
    pub fn new(bearing: T, half_angle: T) -> Result<Self> {
        if !bearing.is_finite() || !half_angle.is_finite() {
            return Err(Error::InvalidHeading("non-finite value".into()));
        }
        if half_angle <= T::zero() || half_angle > T::of(180.0) {
            return Err(Error::InvalidHeading(format!("half angle {half_angle} outside (0, 180]")));
        }
        Ok(Self { bearing: normalize_bearing(bearing), half_angle })
    }

    pub fn full_circle() -> Self {
        Self { bearing: T::zero(), half_angle: T::of(180.0) }
    }

    pub fn bearing(&self) -> T {
        self.bearing
    }

    pub fn half_angle(&self) -> T {
        self.half_angle
    }

    pub fn is_full_circle(&self) -> bool {
        self.half_angle >= T::of(180.0)
    }
}

fn normalize_bearing<T: Scalar>(deg: T) -> T {
    let full = T::of(360.0);
    let mut b = deg % full;
    if b < T::zero() {
        b = b + full;
    }
    if b >= full {
        b = b - full;
    }
    b
}

/// Great-circle distance in meters on a sphere of radius [`EARTH_RADIUS_M`].
pub fn haversine_distance<T: Scalar>(a: GeoPoint<T>, b: GeoPoint<T>) -> T {
    let two = T::of(2.0);
    let phi1 = a.lat.to_radians();
    let phi2 = b.lat.to_radians();
    // Absolute differences keep the result bit-identical under argument swap.
    let dphi = (b.lat - a.lat).abs().to_radians();
    let dlambda = (b.lon - a.lon).abs().to_radians();

    let s_phi = (dphi / two).sin();
    let s_lambda = (dlambda / two).sin();
    let mut h = s_phi * s_phi + phi1.cos() * phi2.cos() * s_lambda * s_lambda;
    h = h.max(T::zero()).min(T::one());
    let central = h.sqrt().atan2((T::one() - h).sqrt());
    two * T::of(EARTH_RADIUS_M) * central
}

/// Forward azimuth from `a` towards `b`, degrees clockwise from north in `[0, 360)`.
pub fn initial_bearing<T: Scalar>(a: GeoPoint<T>, b: GeoPoint<T>) -> Result<T> {
    if a == b {
        return Err(Error::UndefinedBearing);
    }
    let phi1 = a.lat.to_radians();
    let phi2 = b.lat.to_radians();
    let dlambda = (b.lon - a.lon).to_radians();
    let y = dlambda.sin() * phi2.cos();
    let x = phi1.cos() * phi2.sin() - phi1.sin() * phi2.cos() * dlambda.cos();
    Ok(normalize_bearing(y.atan2(x).to_degrees()))
}

/// Shortest angular separation of two bearings, in `[0, 180]`.
pub fn angular_difference<T: Scalar>(a: T, b: T) -> T {
    let full = T::of(360.0);
    let d = normalize_bearing(a - b);
    d.min(full - d)
}

/// True when `p` is the origin itself or lies within the heading's sector.
pub fn within_sector<T: Scalar>(origin: GeoPoint<T>, heading: Heading<T>, p: GeoPoint<T>) -> bool {
    if p == origin || heading.is_full_circle() {
        return true;
    }
    match initial_bearing(origin, p) {
        Ok(b) => angular_difference(b, heading.bearing) <= heading.half_angle,
        Err(_) => true,
    }
}
