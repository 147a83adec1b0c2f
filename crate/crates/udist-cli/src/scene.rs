//! Distance-scene files: one site plus one support (several support entries
//! form a disjoint union), with coordinates in the declared length unit.
//! Geodetic sites are converted to Earth-centered Cartesian coordinates.

use serde::{Deserialize, Serialize};

use udist::analytic::{Ball, Disk, Segment};
use udist::geo::{
    geodetic_to_cartesian, GeodeticPoint, LatHemisphere, LonHemisphere, EARTH_RADIUS_KM,
};
use udist::geom::{Point3, Vec3};
use udist::mixture::UnionSupport;
use udist::polygon::Polygon3;
use udist::support::Support;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneFile {
    pub units: Units,
    pub site: SitePoint,
    pub supports: Vec<SupportSpec>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Units {
    Km,
    M,
}

impl Units {
    /// Length of one scene unit in kilometres.
    pub fn km_per_unit(self) -> f64 {
        match self {
            Units::Km => 1.0,
            Units::M => 1e-3,
        }
    }
}

/// A site is either Cartesian in scene units or geodetic
/// (latitude/longitude in degrees with hemisphere letters, depth in km).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SitePoint {
    Cartesian(CartesianPoint),
    Geodetic(GeodeticSpec),
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CartesianPoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeodeticSpec {
    pub lat: f64,
    pub ns: NorthSouth,
    pub lon: f64,
    pub ew: EastWest,
    pub depth_km: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NorthSouth {
    N,
    S,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EastWest {
    E,
    W,
}

impl SitePoint {
    /// Site position in scene units.
    pub fn to_point(&self, units: Units) -> udist::Result<Point3> {
        match self {
            SitePoint::Cartesian(c) => Ok(Point3::new(c.x, c.y, c.z)),
            SitePoint::Geodetic(g) => {
                let gp = GeodeticPoint {
                    lat_deg: g.lat,
                    lat_hemisphere: match g.ns {
                        NorthSouth::N => LatHemisphere::North,
                        NorthSouth::S => LatHemisphere::South,
                    },
                    lon_deg: g.lon,
                    lon_hemisphere: match g.ew {
                        EastWest::E => LonHemisphere::East,
                        EastWest::W => LonHemisphere::West,
                    },
                    depth_km: g.depth_km,
                };
                let km = geodetic_to_cartesian(&gp, EARTH_RADIUS_KM)?;
                let s = 1.0 / units.km_per_unit();
                Ok(Point3::new(km.x * s, km.y * s, km.z * s))
            }
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum SupportSpec {
    Disk {
        center: [f64; 3],
        radius: f64,
        normal: [f64; 3],
    },
    Ball {
        center: [f64; 3],
        radius: f64,
    },
    Segment {
        a: [f64; 3],
        b: [f64; 3],
    },
    Polygon {
        vertices: Vec<[f64; 3]>,
    },
    Union {
        members: Vec<SupportSpec>,
    },
}

fn pt(a: [f64; 3]) -> Point3 {
    Point3::new(a[0], a[1], a[2])
}

impl SupportSpec {
    pub fn to_support(&self) -> udist::Result<Support> {
        Ok(match self {
            SupportSpec::Disk {
                center,
                radius,
                normal,
            } => Support::Disk(Disk::new(
                pt(*center),
                *radius,
                Vec3::new(normal[0], normal[1], normal[2]),
            )?),
            SupportSpec::Ball { center, radius } => {
                Support::Ball(Ball::new(pt(*center), *radius)?)
            }
            SupportSpec::Segment { a, b } => Support::Segment(Segment::new(pt(*a), pt(*b))?),
            SupportSpec::Polygon { vertices } => {
                Support::Polygon(Polygon3::new(vertices.iter().map(|v| pt(*v)).collect())?)
            }
            SupportSpec::Union { members } => {
                let parts = members
                    .iter()
                    .map(|m| m.to_support())
                    .collect::<udist::Result<Vec<_>>>()?;
                Support::Union(UnionSupport::new(parts)?)
            }
        })
    }
}

impl SceneFile {
    pub fn site(&self) -> udist::Result<Point3> {
        self.site.to_point(self.units)
    }

    /// The scene's single support; several entries form a disjoint union.
    pub fn support(&self) -> udist::Result<Support> {
        if self.supports.is_empty() {
            return Err(udist::Error::InvalidInput(
                "scene needs at least one support".into(),
            ));
        }
        if self.supports.len() == 1 {
            self.supports[0].to_support()
        } else {
            let parts = self
                .supports
                .iter()
                .map(|s| s.to_support())
                .collect::<udist::Result<Vec<_>>>()?;
            Ok(Support::Union(UnionSupport::new(parts)?))
        }
    }
}
