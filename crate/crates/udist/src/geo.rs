//! Geodetic positioning on a spherical Earth model.
//!
//! Sites and source geometries given as latitude/longitude/depth are mapped
//! to Cartesian coordinates (in kilometres) with the x-axis through the
//! equator–prime-meridian point, the y-axis through 90°E on the equator,
//! and the z-axis through the north pole.

use crate::error::{invalid, Result};
use crate::geom::Point3;

/// Mean Earth radius in kilometres.
pub const EARTH_RADIUS_KM: f64 = 6371.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LatHemisphere {
    North,
    South,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LonHemisphere {
    East,
    West,
}

/// Position given as unsigned latitude/longitude plus hemisphere flags and
/// a depth below the surface (negative depth means altitude).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeodeticPoint {
    pub lat_deg: f64,
    pub lat_hemisphere: LatHemisphere,
    pub lon_deg: f64,
    pub lon_hemisphere: LonHemisphere,
    pub depth_km: f64,
}

/// Cartesian image of a geodetic point on a sphere of the given radius:
/// `(R − depth)·(cos φ cos λ, cos φ sin λ, sin φ)` with the y-coordinate
/// negated in the western hemisphere and z in the southern.
pub fn geodetic_to_cartesian(g: &GeodeticPoint, radius_km: f64) -> Result<Point3> {
    if !(radius_km > 0.0) || !radius_km.is_finite() {
        return Err(invalid(format!("sphere radius must be positive, got {radius_km}")));
    }
    if !(0.0..=90.0).contains(&g.lat_deg) {
        return Err(invalid(format!(
            "latitude must lie in [0, 90] degrees, got {}",
            g.lat_deg
        )));
    }
    if !(0.0..=180.0).contains(&g.lon_deg) {
        return Err(invalid(format!(
            "longitude must lie in [0, 180] degrees, got {}",
            g.lon_deg
        )));
    }
    if !g.depth_km.is_finite() || g.depth_km >= radius_km {
        return Err(invalid(format!(
            "depth {} km is not above the sphere center",
            g.depth_km
        )));
    }
    let r = radius_km - g.depth_km;
    let phi = g.lat_deg.to_radians();
    let lam = g.lon_deg.to_radians();
    let y_sign = match g.lon_hemisphere {
        LonHemisphere::East => 1.0,
        LonHemisphere::West => -1.0,
    };
    let z_sign = match g.lat_hemisphere {
        LatHemisphere::North => 1.0,
        LatHemisphere::South => -1.0,
    };
    Ok(Point3::new(
        r * phi.cos() * lam.cos(),
        y_sign * r * phi.cos() * lam.sin(),
        z_sign * r * phi.sin(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gp(lat: f64, lath: LatHemisphere, lon: f64, lonh: LonHemisphere, depth: f64) -> GeodeticPoint {
        GeodeticPoint {
            lat_deg: lat,
            lat_hemisphere: lath,
            lon_deg: lon,
            lon_hemisphere: lonh,
            depth_km: depth,
        }
    }

    #[test]
    fn cardinal_points() {
        use LatHemisphere::*;
        use LonHemisphere::*;
        let r = EARTH_RADIUS_KM;
        let origin = geodetic_to_cartesian(&gp(0.0, North, 0.0, East, 0.0), r).unwrap();
        assert!((origin.x - r).abs() < 1e-9 && origin.y.abs() < 1e-9 && origin.z.abs() < 1e-9);

        let pole = geodetic_to_cartesian(&gp(90.0, North, 0.0, East, 0.0), r).unwrap();
        assert!(pole.x.abs() < 1e-9 && (pole.z - r).abs() < 1e-9);

        let south = geodetic_to_cartesian(&gp(90.0, South, 0.0, East, 0.0), r).unwrap();
        assert!((south.z + r).abs() < 1e-9);

        let east = geodetic_to_cartesian(&gp(0.0, North, 90.0, East, 0.0), r).unwrap();
        assert!((east.y - r).abs() < 1e-9);
        let west = geodetic_to_cartesian(&gp(0.0, North, 90.0, West, 0.0), r).unwrap();
        assert!((west.y + r).abs() < 1e-9);
    }

    #[test]
    fn depth_shrinks_radius_and_altitude_grows_it() {
        use LatHemisphere::*;
        use LonHemisphere::*;
        let p = geodetic_to_cartesian(&gp(0.0, North, 0.0, East, 10.0), EARTH_RADIUS_KM).unwrap();
        assert!((p.x - (EARTH_RADIUS_KM - 10.0)).abs() < 1e-9);
        let up = geodetic_to_cartesian(&gp(0.0, North, 0.0, East, -5.0), EARTH_RADIUS_KM).unwrap();
        assert!((up.x - (EARTH_RADIUS_KM + 5.0)).abs() < 1e-9);
    }

    #[test]
    fn oblique_point_has_expected_norm_and_signs() {
        use LatHemisphere::*;
        use LonHemisphere::*;
        let p = geodetic_to_cartesian(&gp(45.0, South, 135.0, West, 0.0), EARTH_RADIUS_KM).unwrap();
        assert!(((p - Point3::new(0.0, 0.0, 0.0)).norm() - EARTH_RADIUS_KM).abs() < 1e-9);
        assert!(p.x < 0.0, "135°W has negative x");
        assert!(p.y < 0.0, "western hemisphere");
        assert!(p.z < 0.0, "southern hemisphere");
    }

    #[test]
    fn rejects_out_of_range() {
        use LatHemisphere::*;
        use LonHemisphere::*;
        assert!(geodetic_to_cartesian(&gp(91.0, North, 0.0, East, 0.0), EARTH_RADIUS_KM).is_err());
        assert!(geodetic_to_cartesian(&gp(-1.0, North, 0.0, East, 0.0), EARTH_RADIUS_KM).is_err());
        assert!(geodetic_to_cartesian(&gp(0.0, North, 181.0, East, 0.0), EARTH_RADIUS_KM).is_err());
        assert!(
            geodetic_to_cartesian(&gp(0.0, North, 0.0, East, 7000.0), EARTH_RADIUS_KM).is_err()
        );
    }
}
