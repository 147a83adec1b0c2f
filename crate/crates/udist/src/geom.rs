//! Geometric primitives shared by the distribution evaluators: points and
//! vectors in 2-D/3-D, segment–sphere intersection, orthogonal projections
//! and orthonormal plane frames.
//!
//! Floating-point comparisons go through scale-aware tolerances so the same
//! code handles metre- and kilometre-sized scenes.

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{degenerate, invalid, Result};

/// Relative tolerance for geometric predicates; multiplied by the scale of
/// the quantities being compared.
pub const REL_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    pub fn dot(self, o: Vec3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(self, o: Vec3) -> Vec3 {
        Vec3 {
            x: self.y * o.z - self.z * o.y,
            y: self.z * o.x - self.x * o.z,
            z: self.x * o.y - self.y * o.x,
        }
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Unit vector in the same direction; `None` for the zero vector.
    pub fn normalized(self) -> Option<Vec3> {
        let n = self.norm();
        if n == 0.0 {
            None
        } else {
            Some(self * (1.0 / n))
        }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

impl Point3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Point3 { x, y, z }
    }

    pub const ORIGIN: Point3 = Point3::new(0.0, 0.0, 0.0);

    pub fn dist(self, o: Point3) -> f64 {
        (self - o).norm()
    }

    pub fn dist_sq(self, o: Point3) -> f64 {
        (self - o).norm_sq()
    }

    pub fn to_vec(self) -> Vec3 {
        Vec3::new(self.x, self.y, self.z)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

impl Sub for Point3 {
    type Output = Vec3;
    fn sub(self, o: Point3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Add<Vec3> for Point3 {
    type Output = Point3;
    fn add(self, v: Vec3) -> Point3 {
        Point3::new(self.x + v.x, self.y + v.y, self.z + v.z)
    }
}

impl Sub<Vec3> for Point3 {
    type Output = Point3;
    fn sub(self, v: Vec3) -> Point3 {
        self + -v
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    pub fn dist(self, o: Point2) -> f64 {
        (self - o).norm()
    }

    pub fn dist_sq(self, o: Point2) -> f64 {
        (self - o).norm_sq()
    }

    /// Embeds the planar point in the z = 0 plane.
    pub fn lift(self) -> Point3 {
        Point3::new(self.x, self.y, 0.0)
    }
}

impl Vec2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    pub fn dot(self, o: Vec2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the cross product of the two vectors.
    pub fn cross(self, o: Vec2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm_sq().sqrt()
    }
}

impl Sub for Point2 {
    type Output = Vec2;
    fn sub(self, o: Point2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl Add<Vec2> for Point2 {
    type Output = Point2;
    fn add(self, v: Vec2) -> Point2 {
        Point2::new(self.x + v.x, self.y + v.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, s: f64) -> Vec2 {
        Vec2::new(self.x * s, self.y * s)
    }
}

/// Intersections of a segment with a sphere, in increasing order of the
/// segment parameter t (A at t = 0, B at t = 1).
#[derive(Clone, Copy, Debug)]
pub struct SegmentSphereResult {
    count: u8,
    points: [Point3; 2],
    params: [f64; 2],
}

impl SegmentSphereResult {
    fn empty() -> Self {
        SegmentSphereResult {
            count: 0,
            points: [Point3::ORIGIN; 2],
            params: [0.0; 2],
        }
    }

    fn push(&mut self, p: Point3, t: f64) {
        self.points[self.count as usize] = p;
        self.params[self.count as usize] = t;
        self.count += 1;
    }

    pub fn count(&self) -> usize {
        self.count as usize
    }

    pub fn points(&self) -> &[Point3] {
        &self.points[..self.count as usize]
    }

    /// Segment parameters of the intersection points, ascending.
    pub fn params(&self) -> &[f64] {
        &self.params[..self.count as usize]
    }
}

/// Intersection of the segment AB with the sphere of center `p`, radius `d`.
///
/// Solves the quadratic |A + t·AB − P|² = d² and keeps the roots whose points
/// I satisfy the closed-segment test ⟨IA, IB⟩ ≤ 0.  A discriminant within
/// `1e-12 · |AB|² · max(1, d²)` of zero is collapsed to a tangency, so grazing
/// configurations report one intersection point instead of two nearly equal
/// ones.
pub fn segment_sphere_intersections(
    a: Point3,
    b: Point3,
    p: Point3,
    d: f64,
) -> Result<SegmentSphereResult> {
    if !(d >= 0.0) {
        return Err(invalid(format!("sphere radius must be >= 0, got {d}")));
    }
    let ab = b - a;
    let ab_sq = ab.norm_sq();
    if ab_sq == 0.0 {
        return Err(degenerate("segment endpoints coincide"));
    }
    let pa = a - p;
    let half_b = pa.dot(ab);
    let c = pa.norm_sq() - d * d;
    let disc = half_b * half_b - ab_sq * c;
    let tol_disc = 1e-12 * ab_sq * d.mul_add(d, 0.0).max(1.0);

    let mut out = SegmentSphereResult::empty();
    if disc <= -tol_disc {
        return Ok(out);
    }
    if disc.abs() < tol_disc {
        // Tangency: single root of the collapsed quadratic.
        let t = -half_b / ab_sq;
        let i = a + ab * t;
        if (a - i).dot(b - i) <= 0.0 {
            out.push(i, t);
        }
        return Ok(out);
    }
    // Numerically stable pair of roots: the subtraction never cancels.
    let sq = disc.sqrt();
    let q = -(half_b + half_b.signum() * sq);
    let (mut t1, mut t2) = if half_b == 0.0 {
        (-sq / ab_sq, sq / ab_sq)
    } else {
        (q / ab_sq, c / q)
    };
    if t1 > t2 {
        std::mem::swap(&mut t1, &mut t2);
    }
    for t in [t1, t2] {
        let i = a + ab * t;
        if (a - i).dot(b - i) <= 0.0 {
            out.push(i, t);
        }
    }
    Ok(out)
}

/// Orthogonal projection of a point onto the line through A and B.
#[derive(Clone, Copy, Debug)]
pub struct LineProjection {
    /// Foot of the perpendicular from the query point.
    pub foot: Point3,
    /// Parameter of the foot along AB (A at 0, B at 1).
    pub t: f64,
    /// Whether the foot lies on the closed segment AB, decided by
    /// ⟨foot→A, foot→B⟩ ≤ 0.
    pub on_segment: bool,
    /// Distance from the query point to the foot.
    pub offset: f64,
}

pub fn project_point_to_line(p: Point3, a: Point3, b: Point3) -> Result<LineProjection> {
    let ab = b - a;
    let ab_sq = ab.norm_sq();
    if ab_sq == 0.0 {
        return Err(degenerate("line endpoints coincide"));
    }
    let t = (p - a).dot(ab) / ab_sq;
    let foot = a + ab * t;
    let on_segment = (a - foot).dot(b - foot) <= 0.0;
    Ok(LineProjection {
        foot,
        t,
        on_segment,
        offset: p.dist(foot),
    })
}

/// Orthonormal in-plane basis anchored at `origin`; `u` and `v` span the
/// plane and `normal() = u × v` completes the right-handed triad.
#[derive(Clone, Copy, Debug)]
pub struct PlaneFrame {
    pub origin: Point3,
    pub u: Vec3,
    pub v: Vec3,
}

/// In-plane coordinates of a projected point together with its signed
/// out-of-plane offset: `q = origin + x·u + y·v + offset·normal`.
#[derive(Clone, Copy, Debug)]
pub struct PlaneProjection {
    pub x: f64,
    pub y: f64,
    pub offset: f64,
    /// Foot of the perpendicular from the query point onto the plane.
    pub foot: Point3,
}

impl PlaneFrame {
    /// Frame of the plane through `s1`, `s2`, `s3` built by Gram–Schmidt:
    /// origin at `s2`, `u` along `s2 → s1`, `v` the orthogonal complement of
    /// `s2 → s3` within the plane.
    pub fn from_points(s1: Point3, s2: Point3, s3: Point3) -> Result<PlaneFrame> {
        let w1 = s1 - s2;
        let u = w1
            .normalized()
            .ok_or_else(|| degenerate("plane points s1 and s2 coincide"))?;
        let w2 = s3 - s2;
        let v_raw = w2 - u * w2.dot(u);
        let scale = w1.norm().max(w2.norm());
        if v_raw.norm() <= REL_TOL * scale {
            return Err(degenerate("plane points are collinear"));
        }
        let v = v_raw.normalized().expect("checked above");
        Ok(PlaneFrame { origin: s2, u, v })
    }

    /// Frame of the plane through `origin` orthogonal to `normal`; the
    /// in-plane basis is chosen deterministically from the normal.
    pub fn from_origin_normal(origin: Point3, normal: Vec3) -> Result<PlaneFrame> {
        let n = normal
            .normalized()
            .ok_or_else(|| degenerate("zero plane normal"))?;
        // Any axis not parallel to n gives a stable first basis vector.
        let helper = if n.x.abs() <= n.y.abs() && n.x.abs() <= n.z.abs() {
            Vec3::new(1.0, 0.0, 0.0)
        } else if n.y.abs() <= n.z.abs() {
            Vec3::new(0.0, 1.0, 0.0)
        } else {
            Vec3::new(0.0, 0.0, 1.0)
        };
        let u = n.cross(helper).normalized().expect("helper not parallel");
        let v = n.cross(u);
        Ok(PlaneFrame { origin, u, v })
    }

    pub fn normal(&self) -> Vec3 {
        self.u.cross(self.v)
    }

    /// Projects `q` onto the plane: in-plane coordinates are dot products
    /// with the basis, the offset is the remaining normal component.
    pub fn project(&self, q: Point3) -> PlaneProjection {
        let w = q - self.origin;
        let x = w.dot(self.u);
        let y = w.dot(self.v);
        let offset = w.dot(self.normal());
        PlaneProjection {
            x,
            y,
            offset,
            foot: self.origin + self.u * x + self.v * y,
        }
    }

    /// Point of the plane with in-plane coordinates (x, y).
    pub fn lift(&self, x: f64, y: f64) -> Point3 {
        self.origin + self.u * x + self.v * y
    }
}
