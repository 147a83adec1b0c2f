//! Uniform-distribution supports and the unified distance-distribution
//! evaluator.
//!
//! A [`Support`] is a set carrying a uniform probability measure: a disk,
//! ball, segment, embedded planar polygon, or a disjoint union of sets of
//! equal dimension.  [`DistanceDistribution`] evaluates the CDF (and, where
//! closed forms exist, the density) of the Euclidean distance between a
//! fixed site and a uniform random point on the support.

use crate::analytic::{Ball, BallDist, Disk, DiskDist, DistBounds, Segment, SegmentDist};
use crate::error::{invalid, Result};
use crate::exec;
use crate::geom::Point3;
use crate::mixture::{MixtureDist, UnionSupport};
use crate::polygon::{polygon_summary, Polygon3, Polygon3Dist};

/// Hausdorff dimension class of a support.  Unions must be homogeneous so
/// that the measure-proportional mixture weights are meaningful.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dimension {
    Curve,
    Surface,
    Volume,
}

/// A set supporting a uniform distribution.
#[derive(Clone, Debug)]
pub enum Support {
    Disk(Disk),
    Ball(Ball),
    Segment(Segment),
    Polygon(Polygon3),
    Union(UnionSupport),
}

impl Support {
    pub fn dimension(&self) -> Dimension {
        match self {
            Support::Disk(_) | Support::Polygon(_) => Dimension::Surface,
            Support::Ball(_) => Dimension::Volume,
            Support::Segment(_) => Dimension::Curve,
            Support::Union(u) => u.dimension(),
        }
    }

    /// Length, area, or volume according to the dimension.
    pub fn measure(&self) -> f64 {
        match self {
            Support::Disk(d) => d.area(),
            Support::Ball(b) => b.volume(),
            Support::Segment(s) => s.length(),
            Support::Polygon(p) => p.area(),
            Support::Union(u) => u.measure(),
        }
    }

    /// Membership test with an absolute tolerance, used by sampling-based
    /// checks.  Lower-dimensional sets are thickened by `tol` in their
    /// normal directions.
    pub fn contains(&self, p: Point3, tol: f64) -> bool {
        match self {
            Support::Disk(d) => {
                let pr = d.frame().project(p);
                pr.offset.abs() <= tol && (pr.x * pr.x + pr.y * pr.y).sqrt() <= d.radius() + tol
            }
            Support::Ball(b) => p.dist(b.center()) <= b.radius() + tol,
            Support::Segment(s) => {
                match crate::geom::project_point_to_line(p, s.a(), s.b()) {
                    Ok(proj) if proj.on_segment => proj.offset <= tol,
                    _ => p.dist(s.a()).min(p.dist(s.b())) <= tol,
                }
            }
            Support::Polygon(poly) => {
                let pr = poly.frame().project(p);
                if pr.offset.abs() > tol {
                    return false;
                }
                let s = polygon_summary(poly.planar(), crate::geom::Point2::new(pr.x, pr.y));
                s.in_polygon || s.d_min <= tol
            }
            Support::Union(u) => u.members().iter().any(|m| m.contains(p, tol)),
        }
    }
}

enum Inner<'a> {
    Disk(DiskDist),
    Ball(BallDist),
    Segment(SegmentDist),
    Polygon(Polygon3Dist<'a>),
    Mixture(MixtureDist<'a>),
}

/// Distance distribution between a fixed site and a uniform point on a
/// support.  Construction does all site-dependent precomputation; `cdf` is
/// then O(1) for analytic supports and O(n) per call for polygons.
pub struct DistanceDistribution<'a> {
    support: &'a Support,
    inner: Inner<'a>,
}

impl<'a> DistanceDistribution<'a> {
    pub fn new(site: Point3, support: &'a Support) -> Result<DistanceDistribution<'a>> {
        let inner = match support {
            Support::Disk(d) => Inner::Disk(DiskDist::new(site, d)?),
            Support::Ball(b) => Inner::Ball(BallDist::new(site, b)?),
            Support::Segment(s) => Inner::Segment(SegmentDist::new(site, s)?),
            Support::Polygon(p) => Inner::Polygon(Polygon3Dist::new(site, p)?),
            Support::Union(u) => Inner::Mixture(MixtureDist::new(site, u)?),
        };
        Ok(DistanceDistribution { support, inner })
    }

    pub fn support(&self) -> &'a Support {
        self.support
    }

    /// Support interval of the distance: F = 0 at or below `d_lo`, F = 1 at
    /// or above `d_hi`.
    pub fn bounds(&self) -> DistBounds {
        match &self.inner {
            Inner::Disk(d) => d.bounds(),
            Inner::Ball(b) => b.bounds(),
            Inner::Segment(s) => s.bounds(),
            Inner::Polygon(p) => p.bounds(),
            Inner::Mixture(m) => m.bounds(),
        }
    }

    pub fn cdf(&self, d: f64) -> f64 {
        match &self.inner {
            Inner::Disk(x) => x.cdf(d),
            Inner::Ball(x) => x.cdf(d),
            Inner::Segment(x) => x.cdf(d),
            Inner::Polygon(x) => x.cdf(d),
            Inner::Mixture(x) => x.cdf(d),
        }
    }

    /// Closed-form density where one exists (disks, balls, segments, and
    /// unions thereof); `None` for supports involving polygons, whose
    /// density is only available as a gridded estimate.
    pub fn pdf(&self, d: f64) -> Option<f64> {
        match &self.inner {
            Inner::Disk(x) => Some(x.pdf(d)),
            Inner::Ball(x) => Some(x.pdf(d)),
            Inner::Segment(x) => Some(x.pdf(d)),
            Inner::Polygon(_) => None,
            Inner::Mixture(x) => x.pdf(d),
        }
    }

    /// Cell-average density table over the full distance support: row i
    /// holds `(d_i, (F(d_i) − F(d_{i−1}))·n/(d_hi − d_lo))` for
    /// `d_i = d_lo + (d_hi − d_lo)·i/n`, i = 1..n−1.  CDF evaluations run in
    /// parallel when the `parallel` feature is enabled.
    pub fn density_table(&self, n: usize) -> Result<Vec<(f64, f64)>> {
        if n < 2 {
            return Err(invalid(format!(
                "density table needs at least 2 cells, got {n}"
            )));
        }
        let DistBounds { d_lo, d_hi } = self.bounds();
        if !(d_hi > d_lo) {
            return Err(invalid("degenerate distance range for density table"));
        }
        let step = (d_hi - d_lo) / n as f64;
        let grid = exec::map_indexed(n - 1, |k| {
            let d = d_lo + (d_hi - d_lo) * (k + 1) as f64 / n as f64;
            (d, self.cdf(d))
        });
        let mut out = Vec::with_capacity(n - 1);
        let mut prev = self.cdf(d_lo);
        for (d, f) in grid {
            out.push((d, (f - prev).max(0.0) / step));
            prev = f;
        }
        Ok(out)
    }
}
