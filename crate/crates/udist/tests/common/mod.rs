//! Shared helpers for the integration suites: rigid motions, random
//! star-shaped polygons, and CDF quantile inversion.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use udist::analytic::{Ball, Disk, Segment};
use udist::geom::{Point2, Point3, Vec3};
use udist::mixture::UnionSupport;
use udist::polygon::{Polygon, Polygon3};
use udist::support::Support;

/// Proper or improper rigid motion: optional mirror, then rotation, then
/// translation.
#[derive(Clone, Copy, Debug)]
pub struct RigidMotion {
    rot: [[f64; 3]; 3],
    trans: Vec3,
    reflect: bool,
}

#[allow(dead_code)]
impl RigidMotion {
    /// Uniformly random rotation (via quaternion), translation in
    /// [-5, 5]³, and a coin-flip mirror.
    pub fn random(rng: &mut ChaCha8Rng) -> RigidMotion {
        let (u1, u2, u3): (f64, f64, f64) = (rng.gen(), rng.gen(), rng.gen());
        let two_pi = std::f64::consts::TAU;
        let (a, b) = ((1.0 - u1).sqrt(), u1.sqrt());
        let (w, x, y, z) = (
            a * (two_pi * u2).sin(),
            a * (two_pi * u2).cos(),
            b * (two_pi * u3).sin(),
            b * (two_pi * u3).cos(),
        );
        let rot = [
            [
                1.0 - 2.0 * (y * y + z * z),
                2.0 * (x * y - w * z),
                2.0 * (x * z + w * y),
            ],
            [
                2.0 * (x * y + w * z),
                1.0 - 2.0 * (x * x + z * z),
                2.0 * (y * z - w * x),
            ],
            [
                2.0 * (x * z - w * y),
                2.0 * (y * z + w * x),
                1.0 - 2.0 * (x * x + y * y),
            ],
        ];
        RigidMotion {
            rot,
            trans: Vec3::new(
                rng.gen_range(-5.0..5.0),
                rng.gen_range(-5.0..5.0),
                rng.gen_range(-5.0..5.0),
            ),
            reflect: rng.gen_bool(0.5),
        }
    }

    pub fn apply_vec(&self, v: Vec3) -> Vec3 {
        let v = if self.reflect {
            Vec3::new(-v.x, v.y, v.z)
        } else {
            v
        };
        let r = &self.rot;
        Vec3::new(
            r[0][0] * v.x + r[0][1] * v.y + r[0][2] * v.z,
            r[1][0] * v.x + r[1][1] * v.y + r[1][2] * v.z,
            r[2][0] * v.x + r[2][1] * v.y + r[2][2] * v.z,
        )
    }

    pub fn apply_point(&self, p: Point3) -> Point3 {
        let v = self.apply_vec(Vec3::new(p.x, p.y, p.z));
        Point3::new(v.x + self.trans.x, v.y + self.trans.y, v.z + self.trans.z)
    }

    pub fn apply_support(&self, s: &Support) -> Support {
        match s {
            Support::Disk(d) => Support::Disk(
                Disk::new(
                    self.apply_point(d.center()),
                    d.radius(),
                    self.apply_vec(d.frame().normal()),
                )
                .unwrap(),
            ),
            Support::Ball(b) => {
                Support::Ball(Ball::new(self.apply_point(b.center()), b.radius()).unwrap())
            }
            Support::Segment(seg) => Support::Segment(
                Segment::new(self.apply_point(seg.a()), self.apply_point(seg.b())).unwrap(),
            ),
            Support::Polygon(p) => Support::Polygon(
                Polygon3::new(p.vertices().iter().map(|&v| self.apply_point(v)).collect())
                    .unwrap(),
            ),
            Support::Union(u) => Support::Union(
                UnionSupport::new(u.members().iter().map(|m| self.apply_support(m)).collect())
                    .unwrap(),
            ),
        }
    }
}

/// Random star-shaped polygon around `center`: sorted random angles with a
/// minimum gap, random radii in `[0.3, 1]·scale`.  Star-shaped about its
/// center, hence always simple.
#[allow(dead_code)]
pub fn random_star_polygon(rng: &mut ChaCha8Rng, center: Point2, scale: f64) -> Polygon {
    loop {
        let n = rng.gen_range(5..=24);
        let mut angles: Vec<f64> = (0..n)
            .map(|_| rng.gen_range(0.0..std::f64::consts::TAU))
            .collect();
        angles.sort_by(f64::total_cmp);
        let min_gap = angles
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min)
            .min(std::f64::consts::TAU + angles[0] - angles[n - 1]);
        if min_gap < 1e-3 {
            continue;
        }
        let verts: Vec<Point2> = angles
            .iter()
            .map(|&a| {
                let r = scale * rng.gen_range(0.3..1.0);
                Point2::new(center.x + r * a.cos(), center.y + r * a.sin())
            })
            .collect();
        if let Ok(p) = Polygon::new(verts) {
            return p;
        }
    }
}

/// Distance at which `cdf` reaches level `q`, by bisection on a monotone
/// CDF.
#[allow(dead_code)]
pub fn quantile(cdf: impl Fn(f64) -> f64, d_lo: f64, d_hi: f64, q: f64) -> f64 {
    let (mut lo, mut hi) = (d_lo, d_hi);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if cdf(mid) < q {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
