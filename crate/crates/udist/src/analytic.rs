//! Closed-form distance distributions for uniform random points on disks,
//! balls and segments, together with the circular-segment / spherical-cap
//! primitives they are built from.
//!
//! Every distribution is exposed as an evaluator struct that precomputes the
//! site-dependent quantities (projection foot, in-plane distance, branch
//! boundaries) once, so repeated CDF/pdf queries are cheap.

use crate::error::{degenerate, invalid, Result};
use crate::geom::{project_point_to_line, PlaneFrame, Point3, Vec3};

/// Support of the distance distribution: `[d_lo, d_hi]` is the smallest
/// interval with F(d_lo) = 0 and F(d_hi) = 1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DistBounds {
    pub d_lo: f64,
    pub d_hi: f64,
}

fn acos_clamped(x: f64) -> f64 {
    x.clamp(-1.0, 1.0).acos()
}

fn check_cap_domain(r: f64, h: f64) -> Result<()> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(invalid(format!("cap radius must be positive, got {r}")));
    }
    if !(0.0..=2.0 * r).contains(&h) {
        return Err(invalid(format!("cap height {h} outside [0, {}]", 2.0 * r)));
    }
    Ok(())
}

/// Area of a circular segment of height `h` cut from a disk of radius `r`:
/// `r²·arccos((r−h)/r) − (r−h)·√(r² − (r−h)²)`.
pub fn lens_area(r: f64, h: f64) -> Result<f64> {
    check_cap_domain(r, h)?;
    Ok(lens_area_unchecked(r, h))
}

fn lens_area_unchecked(r: f64, h: f64) -> f64 {
    let h = h.clamp(0.0, 2.0 * r);
    let a = r - h;
    r * r * acos_clamped(a / r) - a * (h * (2.0 * r - h)).max(0.0).sqrt()
}

/// Partial derivatives (∂/∂r, ∂/∂h) of [`lens_area`]:
/// `(2r·arccos(1 − h/r) − 2√(h(2r−h)), 2√(h(2r−h)))`.
pub fn lens_area_partials(r: f64, h: f64) -> Result<(f64, f64)> {
    check_cap_domain(r, h)?;
    Ok(lens_area_partials_unchecked(r, h))
}

fn lens_area_partials_unchecked(r: f64, h: f64) -> (f64, f64) {
    let h = h.clamp(0.0, 2.0 * r);
    let root = (h * (2.0 * r - h)).max(0.0).sqrt();
    (2.0 * r * acos_clamped(1.0 - h / r) - 2.0 * root, 2.0 * root)
}

/// Volume of a spherical cap of height `h` cut from a ball of radius `r`:
/// `πh²(3r − h)/3`.
pub fn cap_volume(r: f64, h: f64) -> Result<f64> {
    check_cap_domain(r, h)?;
    Ok(cap_volume_unchecked(r, h))
}

fn cap_volume_unchecked(r: f64, h: f64) -> f64 {
    let h = h.clamp(0.0, 2.0 * r);
    std::f64::consts::PI * h * h * (3.0 * r - h) / 3.0
}

/// Partial derivatives (∂/∂r, ∂/∂h) of [`cap_volume`]: `(πh², πh(2r−h))`.
pub fn cap_volume_partials(r: f64, h: f64) -> Result<(f64, f64)> {
    check_cap_domain(r, h)?;
    let h = h.clamp(0.0, 2.0 * r);
    let pi = std::f64::consts::PI;
    Ok((pi * h * h, pi * h * (2.0 * r - h)))
}

/// Heights of the two circular segments forming the overlap of a disk of
/// radius `r0` and a disk of radius `rd`, centers `r1 > 0` apart, in the
/// strictly overlapping regime: `x* = (r0² + r1² − rd²)/(2r1)`,
/// `h_rd = rd − r1 + x*` (cap of the rd-disk), `h_r0 = r0 − x*`.
fn overlap_heights(r0: f64, r1: f64, rd: f64) -> (f64, f64) {
    let x_star = (r0 * r0 + r1 * r1 - rd * rd) / (2.0 * r1);
    let h_rd = (rd - r1 + x_star).clamp(0.0, 2.0 * rd);
    let h_r0 = (r0 - x_star).clamp(0.0, 2.0 * r0);
    (h_rd, h_r0)
}

/// Area of the intersection of a disk of radius `r0` with a disk of radius
/// `d` whose center lies `r1` away from the first one.
///
/// Containment and disjointness are resolved before the two-segment sum, so
/// the function is defined (and continuous) for every `d ≥ 0`.
pub fn circle_circle_area(r0: f64, r1: f64, d: f64) -> Result<f64> {
    if !(r0 > 0.0) || !r0.is_finite() {
        return Err(invalid(format!("disk radius must be positive, got {r0}")));
    }
    if !(r1 >= 0.0) || !r1.is_finite() {
        return Err(invalid(format!("center distance must be >= 0, got {r1}")));
    }
    if !(d >= 0.0) || !d.is_finite() {
        return Err(invalid(format!("second radius must be >= 0, got {d}")));
    }
    let pi = std::f64::consts::PI;
    if d + r0 <= r1 {
        return Ok(0.0); // disjoint
    }
    if d >= r1 + r0 {
        return Ok(pi * r0 * r0); // r0-disk contained
    }
    if r0 >= r1 + d {
        return Ok(pi * d * d); // d-disk contained
    }
    let (h_d, h_r0) = overlap_heights(r0, r1, d);
    Ok(lens_area_unchecked(d, h_d) + lens_area_unchecked(r0, h_r0))
}

fn check_support_point(label: &str, p: Point3) -> Result<()> {
    if p.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("{label} has non-finite coordinates")))
    }
}

fn check_radius(r: f64) -> Result<()> {
    if r.is_finite() && r > 0.0 {
        Ok(())
    } else {
        Err(invalid(format!("radius must be positive and finite, got {r}")))
    }
}

/// Flat disk embedded in 3-space.
#[derive(Clone, Copy, Debug)]
pub struct Disk {
    center: Point3,
    radius: f64,
    frame: PlaneFrame,
}

impl Disk {
    pub fn new(center: Point3, radius: f64, normal: Vec3) -> Result<Disk> {
        check_support_point("disk center", center)?;
        check_radius(radius)?;
        let frame = PlaneFrame::from_origin_normal(center, normal)?;
        Ok(Disk {
            center,
            radius,
            frame,
        })
    }

    pub fn center(&self) -> Point3 {
        self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn frame(&self) -> &PlaneFrame {
        &self.frame
    }

    pub fn area(&self) -> f64 {
        std::f64::consts::PI * self.radius * self.radius
    }
}

/// Solid ball.
#[derive(Clone, Copy, Debug)]
pub struct Ball {
    center: Point3,
    radius: f64,
}

impl Ball {
    pub fn new(center: Point3, radius: f64) -> Result<Ball> {
        check_support_point("ball center", center)?;
        check_radius(radius)?;
        Ok(Ball { center, radius })
    }

    pub fn center(&self) -> Point3 {
        self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn volume(&self) -> f64 {
        4.0 / 3.0 * std::f64::consts::PI * self.radius.powi(3)
    }
}

/// Line segment with distinct endpoints.
#[derive(Clone, Copy, Debug)]
pub struct Segment {
    a: Point3,
    b: Point3,
}

impl Segment {
    pub fn new(a: Point3, b: Point3) -> Result<Segment> {
        check_support_point("segment endpoint", a)?;
        check_support_point("segment endpoint", b)?;
        if a.dist_sq(b) == 0.0 {
            return Err(degenerate("segment endpoints coincide"));
        }
        Ok(Segment { a, b })
    }

    pub fn a(&self) -> Point3 {
        self.a
    }

    pub fn b(&self) -> Point3 {
        self.b
    }

    pub fn length(&self) -> f64 {
        self.a.dist(self.b)
    }
}

/// In-plane center separations below `CONCENTRIC_COLLAPSE · radius` are
/// treated as exactly concentric: the two-segment overlap formula divides by
/// the separation and loses all precision there, while the concentric form is
/// exact in the limit.
const CONCENTRIC_COLLAPSE: f64 = 1e-9;

/// Distance distribution between a fixed site and a uniform point on a disk.
///
/// The site is first projected onto the disk plane; with `offset` the
/// out-of-plane distance and `r1` the in-plane distance from the foot to the
/// disk center, the in-plane sweep radius at distance `d` is
/// `R(d) = √(d² − offset²)` and all branches reduce to circle–circle overlap
/// at radius `R(d)`.  An in-plane site is the `offset = 0` special case of
/// the same code path.
#[derive(Clone, Copy, Debug)]
pub struct DiskDist {
    r0: f64,
    r1: f64,
    offset: f64,
    d_lo: f64,
    d_hi: f64,
    /// Upper end of the pure-quadratic branch (foot strictly inside the
    /// disk); equals `d_lo` when that branch is absent.
    quad_hi: f64,
}

impl DiskDist {
    pub fn new(site: Point3, disk: &Disk) -> Result<DiskDist> {
        check_support_point("site", site)?;
        let proj = disk.frame().project(site);
        let offset = proj.offset.abs();
        let mut r1 = proj.foot.dist(disk.center());
        let r0 = disk.radius();
        if r1 < CONCENTRIC_COLLAPSE * r0 {
            r1 = 0.0;
        }
        let quad_hi = if r1 < r0 {
            (offset * offset + (r0 - r1) * (r0 - r1)).sqrt()
        } else {
            f64::NAN // replaced below
        };
        let d_lo = if r1 <= r0 {
            offset
        } else {
            (offset * offset + (r1 - r0) * (r1 - r0)).sqrt()
        };
        Ok(DiskDist {
            r0,
            r1,
            offset,
            d_lo,
            d_hi: (offset * offset + (r1 + r0) * (r1 + r0)).sqrt(),
            quad_hi: if r1 < r0 { quad_hi } else { d_lo },
        })
    }

    pub fn bounds(&self) -> DistBounds {
        DistBounds {
            d_lo: self.d_lo,
            d_hi: self.d_hi,
        }
    }

    /// Interior distances where the CDF switches formula (and the density
    /// is not smooth); empty when every branch boundary coincides with a
    /// support endpoint.
    pub fn branch_points(&self) -> Vec<f64> {
        if self.quad_hi > self.d_lo && self.quad_hi < self.d_hi {
            vec![self.quad_hi]
        } else {
            Vec::new()
        }
    }

    /// In-plane sweep radius, guarded against negative rounding under the
    /// square root.
    fn sweep(&self, d: f64) -> f64 {
        (d * d - self.offset * self.offset).max(0.0).sqrt()
    }

    pub fn cdf(&self, d: f64) -> f64 {
        if !(d >= 0.0) {
            return 0.0;
        }
        if d <= self.d_lo {
            return 0.0;
        }
        if d >= self.d_hi {
            return 1.0;
        }
        let r = self.sweep(d);
        if d <= self.quad_hi {
            // Sweep disk entirely inside the support disk.
            return (r * r / (self.r0 * self.r0)).clamp(0.0, 1.0);
        }
        let (h_r, h_r0) = overlap_heights(self.r0, self.r1, r);
        let area = lens_area_unchecked(r, h_r) + lens_area_unchecked(self.r0, h_r0);
        (area / (std::f64::consts::PI * self.r0 * self.r0)).clamp(0.0, 1.0)
    }

    pub fn pdf(&self, d: f64) -> f64 {
        if d <= self.d_lo || d >= self.d_hi {
            return 0.0;
        }
        if d <= self.quad_hi {
            return 2.0 * d / (self.r0 * self.r0);
        }
        let r = self.sweep(d);
        let (h_r, h_r0) = overlap_heights(self.r0, self.r1, r);
        let (da_dr, da_dh) = lens_area_partials_unchecked(r, h_r);
        let (_, da_dh0) = lens_area_partials_unchecked(self.r0, h_r0);
        let v = (d / r) * da_dr + (d / r - d / self.r1) * da_dh + (d / self.r1) * da_dh0;
        (v / (std::f64::consts::PI * self.r0 * self.r0)).max(0.0)
    }
}

/// Distance distribution between a fixed site and a uniform point in a ball.
///
/// Same branch structure as [`DiskDist`] with spherical caps in place of
/// circular segments and no projection step.
#[derive(Clone, Copy, Debug)]
pub struct BallDist {
    r0: f64,
    r1: f64,
    d_lo: f64,
    d_hi: f64,
    cubic_hi: f64,
}

impl BallDist {
    pub fn new(site: Point3, ball: &Ball) -> Result<BallDist> {
        check_support_point("site", site)?;
        let r0 = ball.radius();
        let mut r1 = site.dist(ball.center());
        if r1 < CONCENTRIC_COLLAPSE * r0 {
            r1 = 0.0;
        }
        let (d_lo, cubic_hi) = if r1 < r0 {
            (0.0, r0 - r1)
        } else {
            (r1 - r0, r1 - r0)
        };
        Ok(BallDist {
            r0,
            r1,
            d_lo,
            d_hi: r1 + r0,
            cubic_hi,
        })
    }

    pub fn bounds(&self) -> DistBounds {
        DistBounds {
            d_lo: self.d_lo,
            d_hi: self.d_hi,
        }
    }

    /// Interior distances where the CDF switches formula; see
    /// [`DiskDist::branch_points`].
    pub fn branch_points(&self) -> Vec<f64> {
        if self.cubic_hi > self.d_lo && self.cubic_hi < self.d_hi {
            vec![self.cubic_hi]
        } else {
            Vec::new()
        }
    }

    pub fn cdf(&self, d: f64) -> f64 {
        if !(d >= 0.0) || d <= self.d_lo {
            return 0.0;
        }
        if d >= self.d_hi {
            return 1.0;
        }
        if d <= self.cubic_hi {
            return ((d / self.r0).powi(3)).clamp(0.0, 1.0);
        }
        let (h_d, h_r0) = overlap_heights(self.r0, self.r1, d);
        let volume = cap_volume_unchecked(d, h_d) + cap_volume_unchecked(self.r0, h_r0);
        (volume / (4.0 / 3.0 * std::f64::consts::PI * self.r0.powi(3))).clamp(0.0, 1.0)
    }

    pub fn pdf(&self, d: f64) -> f64 {
        if d <= self.d_lo || d >= self.d_hi {
            return 0.0;
        }
        if d <= self.cubic_hi {
            return 3.0 * d * d / self.r0.powi(3);
        }
        let (h_d, h_r0) = overlap_heights(self.r0, self.r1, d);
        // ∂V/∂r = πh², ∂V/∂h = πh(2r−h); dh_d/dd = 1 − d/r1, dh_r0/dd = d/r1.
        let pi = std::f64::consts::PI;
        let dv_dr = pi * h_d * h_d;
        let dv_dh = pi * h_d * (2.0 * d - h_d);
        let dv_dh0 = pi * h_r0 * (2.0 * self.r0 - h_r0);
        let v = dv_dr + (1.0 - d / self.r1) * dv_dh + (d / self.r1) * dv_dh0;
        (v / (4.0 / 3.0 * pi * self.r0.powi(3))).max(0.0)
    }
}

/// Distance distribution between a fixed site and a uniform point on a
/// segment.
///
/// With `offset` the distance from the site to the carrying line and
/// `R(d) = √(d² − offset²)` the in-line sweep radius, the CDF is piecewise
/// `2R(d)/L` then `(near + R(d))/L` when the foot of the perpendicular falls
/// on the segment, and `(R(d) − near)/L` when it falls outside (`near` is the
/// in-line distance from the foot to the closest endpoint).
#[derive(Clone, Copy, Debug)]
pub struct SegmentDist {
    len: f64,
    offset: f64,
    /// In-line distance from the foot to the nearest endpoint.
    near: f64,
    foot_on_segment: bool,
    d_lo: f64,
    d_mid: f64,
    d_hi: f64,
}

impl SegmentDist {
    pub fn new(site: Point3, segment: &Segment) -> Result<SegmentDist> {
        check_support_point("site", site)?;
        let proj = project_point_to_line(site, segment.a(), segment.b())?;
        let leg_a = proj.foot.dist(segment.a());
        let leg_b = proj.foot.dist(segment.b());
        let near = leg_a.min(leg_b);
        let far = leg_a.max(leg_b);
        let offset = proj.offset;
        let hyp = |leg: f64| (offset * offset + leg * leg).sqrt();
        if proj.on_segment {
            Ok(SegmentDist {
                len: segment.length(),
                offset,
                near,
                foot_on_segment: true,
                d_lo: offset,
                d_mid: hyp(near),
                d_hi: hyp(far),
            })
        } else {
            Ok(SegmentDist {
                len: segment.length(),
                offset,
                near,
                foot_on_segment: false,
                d_lo: hyp(near),
                d_mid: hyp(near),
                d_hi: hyp(far),
            })
        }
    }

    pub fn bounds(&self) -> DistBounds {
        DistBounds {
            d_lo: self.d_lo,
            d_hi: self.d_hi,
        }
    }

    fn sweep(&self, d: f64) -> f64 {
        (d * d - self.offset * self.offset).max(0.0).sqrt()
    }

    /// Interior distances where the CDF switches formula; see
    /// [`DiskDist::branch_points`].
    pub fn branch_points(&self) -> Vec<f64> {
        if self.foot_on_segment && self.d_mid > self.d_lo && self.d_mid < self.d_hi {
            vec![self.d_mid]
        } else {
            Vec::new()
        }
    }

    pub fn cdf(&self, d: f64) -> f64 {
        if !(d >= 0.0) || d <= self.d_lo {
            return 0.0;
        }
        if d >= self.d_hi {
            return 1.0;
        }
        let r = self.sweep(d);
        let f = if self.foot_on_segment {
            if d <= self.d_mid {
                2.0 * r / self.len
            } else {
                (self.near + r) / self.len
            }
        } else {
            (r - self.near) / self.len
        };
        f.clamp(0.0, 1.0)
    }

    /// Probability density.  Unbounded (inverse-square-root singularity) as
    /// `d` approaches the distance to an interior perpendicular foot from
    /// above; the returned value is `+∞` exactly at that point.
    pub fn pdf(&self, d: f64) -> f64 {
        if d <= self.d_lo && !(self.foot_on_segment && d == self.d_lo) {
            return 0.0;
        }
        if d < self.d_lo || d >= self.d_hi {
            return 0.0;
        }
        let r = self.sweep(d);
        if self.foot_on_segment {
            if r == 0.0 {
                // Exactly at the singular lower endpoint: in-line sites have
                // the uniform limit 2/L, off-line sites diverge.
                return if self.offset == 0.0 {
                    2.0 / self.len
                } else {
                    f64::INFINITY
                };
            }
            if d <= self.d_mid {
                2.0 * d / (self.len * r)
            } else {
                d / (self.len * r)
            }
        } else {
            d / (self.len * r)
        }
    }
}
