//! Exact distance CDF for a uniform point on a planar polygon.
//!
//! The mass inside distance `d` of the site is `area(polygon ∩ disk)/area`,
//! and the overlap area is assembled by Green's theorem from line integrals
//! over the boundary of the intersection: polygon edges clipped to the disk
//! contribute chord integrals during a single pass over the edges, and the
//! circle contributes arcs selected by sorting entry/exit events by polar
//! angle.  One evaluation is O(n + k log k) for n edges and k circle
//! crossings.
//!
//! Circle-grazing contacts (vertex exactly on the sweep circle, tangent
//! edges) are classified by explicit tangent-line side tests so the event
//! list never acquires spurious or missing arcs.

use std::f64::consts::PI;

use crate::error::{degenerate, invalid, Result};
use crate::exec;
use crate::geom::{segment_sphere_intersections, PlaneFrame, Point2, Point3};

/// Relative tolerance deciding that a vertex lies on the sweep circle,
/// scaled by `max(1, d)`.
const ON_CIRCLE_TOL: f64 = 1e-9;
/// Angular gap below which two events count as simultaneous.
const ANGLE_TIE_TOL: f64 = 1e-12;

/// Simple planar polygon, stored counterclockwise.
///
/// Clockwise input is reversed on construction.  `new` performs the full
/// O(n²) validation (repeated vertices, self-intersection); for very large
/// polygons whose validity is known, `new_skip_simplicity` performs the
/// linear checks only.
#[derive(Clone, Debug)]
pub struct Polygon {
    verts: Vec<Point2>,
    area: f64,
}

fn signed_area(verts: &[Point2]) -> f64 {
    let n = verts.len();
    let mut s = 0.0;
    for i in 0..n {
        let a = verts[i];
        let b = verts[(i + 1) % n];
        s += a.x * b.y - b.x * a.y;
    }
    0.5 * s
}

fn coord_scale(verts: &[Point2]) -> f64 {
    verts
        .iter()
        .map(|v| v.x.abs().max(v.y.abs()))
        .fold(1.0, f64::max)
}

/// Proper or improper intersection test for segments ab and cd, used only
/// by polygon validation.
fn segments_intersect(a: Point2, b: Point2, c: Point2, d: Point2) -> bool {
    let orient = |p: Point2, q: Point2, r: Point2| (q - p).cross(r - p);
    let on_seg = |p: Point2, q: Point2, r: Point2| {
        // r collinear with pq: does it fall within the bounding box?
        r.x >= p.x.min(q.x) && r.x <= p.x.max(q.x) && r.y >= p.y.min(q.y) && r.y <= p.y.max(q.y)
    };
    let (o1, o2) = (orient(a, b, c), orient(a, b, d));
    let (o3, o4) = (orient(c, d, a), orient(c, d, b));
    if ((o1 > 0.0 && o2 < 0.0) || (o1 < 0.0 && o2 > 0.0))
        && ((o3 > 0.0 && o4 < 0.0) || (o3 < 0.0 && o4 > 0.0))
    {
        return true;
    }
    (o1 == 0.0 && on_seg(a, b, c))
        || (o2 == 0.0 && on_seg(a, b, d))
        || (o3 == 0.0 && on_seg(c, d, a))
        || (o4 == 0.0 && on_seg(c, d, b))
}

impl Polygon {
    pub fn new(verts: Vec<Point2>) -> Result<Polygon> {
        let poly = Self::new_skip_simplicity(verts)?;
        let v = &poly.verts;
        let n = v.len();
        for i in 0..n {
            for j in i + 1..n {
                if v[i] == v[j] {
                    return Err(invalid(format!("repeated vertex at indices {i} and {j}")));
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                // Edges sharing a vertex may touch there; skip adjacent pairs.
                if j == i + 1 || (i == 0 && j == n - 1) {
                    continue;
                }
                if segments_intersect(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n]) {
                    return Err(invalid(format!("edges {i} and {j} intersect")));
                }
            }
        }
        Ok(poly)
    }

    /// Linear-time construction: finiteness, vertex count, distinct
    /// consecutive vertices, nonzero area and counterclockwise
    /// normalization, but no O(n²) simplicity test.
    pub fn new_skip_simplicity(mut verts: Vec<Point2>) -> Result<Polygon> {
        if verts.len() < 3 {
            return Err(invalid(format!(
                "polygon needs at least 3 vertices, got {}",
                verts.len()
            )));
        }
        for (i, v) in verts.iter().enumerate() {
            if !v.x.is_finite() || !v.y.is_finite() {
                return Err(invalid(format!("vertex {i} has non-finite coordinates")));
            }
        }
        let n = verts.len();
        for i in 0..n {
            if verts[i] == verts[(i + 1) % n] {
                return Err(invalid(format!("consecutive vertices {i} and {} coincide", (i + 1) % n)));
            }
        }
        let mut area = signed_area(&verts);
        let scale = coord_scale(&verts);
        if area.abs() <= 1e-12 * scale * scale {
            return Err(degenerate("polygon area is zero"));
        }
        if area < 0.0 {
            verts.reverse();
            area = -area;
        }
        Ok(Polygon { verts, area })
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.verts
    }

    pub fn area(&self) -> f64 {
        self.area
    }
}

/// Per-site summary of a polygon: area, crossing number of a rightward ray,
/// distance to the boundary and to the farthest vertex.
#[derive(Clone, Copy, Debug)]
pub struct PolygonSummary {
    pub area: f64,
    pub crossing_number: u32,
    /// Distance from the site to the polygon boundary.
    pub d_min: f64,
    /// Distance from the site to the farthest vertex.
    pub d_max: f64,
    /// Site inside or on the boundary: odd crossing number, or boundary
    /// distance indistinguishable from zero.
    pub in_polygon: bool,
}

/// Distance from a point to a closed 2-D segment.
fn dist_to_edge(p: Point2, a: Point2, b: Point2) -> f64 {
    let ab = b - a;
    let t = (p - a).dot(ab) / ab.norm_sq();
    let foot = a + ab * t;
    if (a - foot).dot(b - foot) <= 0.0 {
        p.dist(foot)
    } else {
        p.dist(a).min(p.dist(b))
    }
}

/// Single O(n) pass computing [`PolygonSummary`].
///
/// The crossing count follows the half-open vertex rule: an edge is crossed
/// when the site's y lies in (y_i, y_{i+1}] for upward edges or (y_{i+1}, y_i]
/// for downward ones, and the intersection abscissa is strictly to the right
/// of the site.  Horizontal edges never satisfy either condition.
pub fn polygon_summary(poly: &Polygon, site: Point2) -> PolygonSummary {
    let v = poly.vertices();
    let n = v.len();
    let mut crossing = 0u32;
    let mut d_min = f64::INFINITY;
    let mut d_max: f64 = 0.0;
    for i in 0..n {
        let a = v[i];
        let b = v[(i + 1) % n];
        if (a.y < site.y && site.y <= b.y) || (b.y < site.y && site.y <= a.y) {
            let x_i = a.x + (b.x - a.x) / (b.y - a.y) * (site.y - a.y);
            if x_i > site.x {
                crossing += 1;
            }
        }
        d_min = d_min.min(dist_to_edge(site, a, b));
        d_max = d_max.max(site.dist(a));
    }
    let scale = d_max.max(coord_scale(&[site]));
    PolygonSummary {
        area: poly.area(),
        crossing_number: crossing,
        d_min,
        d_max,
        in_polygon: crossing % 2 == 1 || d_min <= 1e-12 * scale,
    }
}

/// Polar angle of `q` as seen from `site` on a circle of radius `r`:
/// `arccos((x_q − x_site)/r)` mirrored into [0, 2π) by the sign of
/// `y_q − y_site`.
fn polar_angle(site: Point2, r: f64, q: Point2) -> f64 {
    let c = ((q.x - site.x) / r).clamp(-1.0, 1.0);
    let a = c.acos();
    if q.y >= site.y {
        a
    } else {
        2.0 * PI - a
    }
}

/// Green line integral `x dy − y dx` along the straight chord from `a` to
/// `b` (twice the signed triangle area with the origin).
fn chord_green(a: Point2, b: Point2) -> f64 {
    a.x * b.y - b.x * a.y
}

fn arc_green(site: Point2, r: f64, theta: f64, a: Point2, b: Point2) -> f64 {
    r * r * theta + site.x * (b.y - a.y) - site.y * (b.x - a.x)
}

/// Green line integral along the counterclockwise circular arc from `a` to
/// `b` on the circle of center `p`, radius `r0`.
///
/// The swept angle wraps by 2π when `a`'s polar angle exceeds `b`'s; equal
/// angles yield a zero-length arc.  Errors if either endpoint is farther
/// than `1e-9·max(1, r0)` from the circle.
pub fn arc_integral(a: Point2, b: Point2, p: Point2, r0: f64) -> Result<f64> {
    if !(r0 > 0.0) || !r0.is_finite() {
        return Err(invalid(format!("arc radius must be positive, got {r0}")));
    }
    let tol = ON_CIRCLE_TOL * r0.max(1.0);
    for (label, q) in [("start", a), ("end", b)] {
        let err = (q.dist(p) - r0).abs();
        if err > tol {
            return Err(invalid(format!(
                "arc {label} point is off the circle by {err:.3e}"
            )));
        }
    }
    let ang_a = polar_angle(p, r0, a);
    let ang_b = polar_angle(p, r0, b);
    let theta = if ang_a <= ang_b {
        ang_b - ang_a
    } else {
        2.0 * PI + ang_b - ang_a
    };
    Ok(arc_green(p, r0, theta, a, b))
}

/// Tangent-line side tests deciding whether a circular arc of the sweep
/// circle starts or ends at a vertex `s1` lying exactly on the circle.
///
/// `in_flag` says the polygon boundary arrives at `s1` from inside the open
/// disk; `s2` is the vertex after `s1`.  With the tangent line at `s1`, an
/// arc event is emitted when the outgoing edge crosses to the opposite side
/// of the tangent from the site (`in_flag` true, closed far side) or stays
/// strictly on the site's side (`in_flag` false, open near side).  A site at
/// the same height as `s1` makes the tangent vertical and the tests reduce
/// to x-comparisons.
pub fn classify_vertex_on_circle(
    site: Point2,
    s1: Point2,
    s2: Point2,
    in_flag: bool,
) -> bool {
    if site.y != s1.y {
        let slope = (site.x - s1.x) / (s1.y - site.y);
        let tangent = |x: f64| s1.y + slope * (x - s1.x);
        let site_above = site.y > tangent(site.x);
        let t2 = tangent(s2.x);
        if in_flag {
            (site_above && s2.y <= t2) || (!site_above && s2.y >= t2)
        } else {
            (site_above && s2.y > t2) || (!site_above && s2.y < t2)
        }
    } else if in_flag {
        (site.x < s1.x && s2.x >= s1.x) || (site.x > s1.x && s2.x <= s1.x)
    } else {
        (site.x < s1.x && s2.x < s1.x) || (site.x > s1.x && s2.x > s1.x)
    }
}

#[derive(Clone, Copy, Debug)]
struct ArcEvent {
    angle: f64,
    point: Point2,
    /// true: an arc of the circle starts here (boundary leaves the disk);
    /// false: an arc ends here (boundary enters the disk).
    arc_start: bool,
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Place {
    Inside,
    On,
    Outside,
}

struct Sweep {
    events: Vec<ArcEvent>,
    /// Accumulated Green integral over chords (twice the area share).
    chords: f64,
}

/// Edge pass of the CDF evaluation: clips every polygon edge to the disk,
/// accumulating chord integrals and entry/exit events.
fn boundary_sweep(poly: &Polygon, site: Point2, d: f64) -> Sweep {
    let v = poly.vertices();
    let n = v.len();
    let tol_on = ON_CIRCLE_TOL * d.max(1.0);
    let site3 = site.lift();

    let place: Vec<Place> = v
        .iter()
        .map(|q| {
            let dist = q.dist(site);
            if (dist - d).abs() <= tol_on {
                Place::On
            } else if dist < d {
                Place::Inside
            } else {
                Place::Outside
            }
        })
        .collect();

    let mut events: Vec<ArcEvent> = Vec::new();
    let mut chords = 0.0;
    let push = |events: &mut Vec<ArcEvent>, point: Point2, arc_start: bool| {
        events.push(ArcEvent {
            angle: polar_angle(site, d, point),
            point,
            arc_start,
        });
    };
    // Circle crossings of the edge, ascending in the segment parameter.
    let hits = |a: Point2, b: Point2| {
        let r = segment_sphere_intersections(a.lift(), b.lift(), site3, d)
            .expect("validated polygon edge");
        let mut out: Vec<(Point2, f64)> = Vec::with_capacity(2);
        for (p3, t) in r.points().iter().zip(r.params()) {
            out.push((Point2::new(p3.x, p3.y), *t));
        }
        out
    };

    for i in 0..n {
        let s_i = v[i];
        let s_j = v[(i + 1) % n];
        let s_k = v[(i + 2) % n];
        if place[i] != Place::Outside {
            match place[(i + 1) % n] {
                // Edge stays in the closed disk: whole chord contributes.
                Place::Inside => chords += chord_green(s_i, s_j),
                Place::Outside => {
                    // Leaving the disk: chord up to the exit point, which
                    // opens an arc.  An intersection coinciding with the
                    // start vertex (already on the circle) is suppressed.
                    let exit = hits(s_i, s_j)
                        .into_iter()
                        .rfind(|(p, _)| p.dist(s_i) > tol_on);
                    if let Some((p, _)) = exit {
                        chords += chord_green(s_i, p);
                        push(&mut events, p, true);
                    }
                }
                Place::On => {
                    // Ends exactly on the circle: full chord, then the
                    // tangent test decides whether an arc starts at s_j.
                    chords += chord_green(s_i, s_j);
                    if classify_vertex_on_circle(site, s_j, s_k, true) {
                        push(&mut events, s_j, true);
                    }
                }
            }
        } else {
            match place[(i + 1) % n] {
                Place::Inside => {
                    // Entering the disk: the crossing closes an arc.
                    if let Some((p, _)) = hits(s_i, s_j).into_iter().next() {
                        chords += chord_green(p, s_j);
                        push(&mut events, p, false);
                    }
                }
                Place::Outside => {
                    let isects = hits(s_i, s_j);
                    if isects.len() == 2 {
                        // Dipping through: chord between the two crossings,
                        // closing an arc at the first and opening one at the
                        // second.  A single grazing contact is a tangency
                        // and contributes nothing.
                        chords += chord_green(isects[0].0, isects[1].0);
                        push(&mut events, isects[0].0, false);
                        push(&mut events, isects[1].0, true);
                    }
                }
                Place::On => {
                    // Arriving from outside onto the circle at s_j, possibly
                    // after dipping inside.
                    let dip = hits(s_i, s_j)
                        .into_iter()
                        .find(|(p, _)| p.dist(s_j) > tol_on);
                    if let Some((p, _)) = dip {
                        chords += chord_green(p, s_j);
                        push(&mut events, p, false);
                        if classify_vertex_on_circle(site, s_j, s_k, true) {
                            push(&mut events, s_j, true);
                        }
                    } else if classify_vertex_on_circle(site, s_j, s_k, false) {
                        push(&mut events, s_j, false);
                    }
                }
            }
        }
    }
    Sweep { events, chords }
}

fn sort_events(events: &mut [ArcEvent]) {
    events.sort_by(|a, b| {
        a.angle
            .total_cmp(&b.angle)
            .then(a.arc_start.cmp(&b.arc_start))
    });
    // Simultaneous events within the angular tie tolerance keep arc-closing
    // before arc-opening so coincident pairs form an empty arc.
    for w in 0..events.len().saturating_sub(1) {
        if events[w].arc_start
            && !events[w + 1].arc_start
            && events[w + 1].angle - events[w].angle <= ANGLE_TIE_TOL
        {
            events.swap(w, w + 1);
        }
    }
}

fn assemble_cdf(poly: &Polygon, site: Point2, crossing_odd: bool, d: f64, sweep: Sweep) -> f64 {
    let area = poly.area();
    let mut events = sweep.events;
    if events.is_empty() {
        // No circle events: the polygon is entirely inside the disk, the
        // disk entirely inside the polygon, or the two are disjoint.
        let l = 0.5 * sweep.chords;
        if (l - area).abs() <= 1e-9 * area {
            return 1.0;
        }
        if crossing_odd {
            return (PI * d * d / area).clamp(0.0, 1.0);
        }
        return 0.0;
    }
    sort_events(&mut events);
    let mut twice_area = sweep.chords;
    let m = events.len();
    for k in 0..m {
        if !events[k].arc_start {
            continue;
        }
        let a = &events[k];
        let b = &events[(k + 1) % m];
        let theta = if a.angle <= b.angle {
            b.angle - a.angle
        } else {
            2.0 * PI + b.angle - a.angle
        };
        twice_area += arc_green(site, d, theta, a.point, b.point);
    }
    (0.5 * twice_area / area).clamp(0.0, 1.0)
}

/// Exact CDF of the distance from `site` to a uniform point on the polygon,
/// given the site's precomputed summary.
pub fn polygon_cdf_with_summary(
    poly: &Polygon,
    site: Point2,
    summary: &PolygonSummary,
    d: f64,
) -> f64 {
    if !(d > 0.0) {
        return 0.0;
    }
    if d >= summary.d_max {
        return 1.0;
    }
    if d <= summary.d_min {
        return if summary.in_polygon {
            (PI * d * d / summary.area).clamp(0.0, 1.0)
        } else {
            0.0
        };
    }
    let sweep = boundary_sweep(poly, site, d);
    assemble_cdf(poly, site, summary.crossing_number % 2 == 1, d, sweep)
}

pub fn polygon_cdf(poly: &Polygon, site: Point2, d: f64) -> f64 {
    let summary = polygon_summary(poly, site);
    polygon_cdf_with_summary(poly, site, &summary, d)
}

/// Arcs of the sweep circle that border the polygon–disk intersection,
/// exposed for cross-checking the event selection against independent
/// methods.
#[derive(Clone, Debug, PartialEq)]
pub enum KeptArcs {
    /// The whole circle lies inside the polygon.
    Full,
    /// No part of the circle borders the intersection.
    Empty,
    /// Counterclockwise arcs as (start, end) polar angles in [0, 2π);
    /// `end < start` means the arc wraps through 0.
    Arcs(Vec<(f64, f64)>),
}

/// Runs the full boundary sweep (no shortcuts) and reports which arcs of
/// the circle of radius `d` around `site` the CDF evaluation keeps.
pub fn kept_arcs(poly: &Polygon, site: Point2, d: f64) -> KeptArcs {
    let summary = polygon_summary(poly, site);
    let sweep = boundary_sweep(poly, site, d);
    let mut events = sweep.events;
    if events.is_empty() {
        let l = 0.5 * sweep.chords;
        if (l - poly.area()).abs() <= 1e-9 * poly.area() {
            return KeptArcs::Empty; // polygon inside the disk
        }
        return if summary.crossing_number % 2 == 1 || summary.d_min <= ON_CIRCLE_TOL * d.max(1.0)
        {
            KeptArcs::Full
        } else {
            KeptArcs::Empty
        };
    }
    sort_events(&mut events);
    let m = events.len();
    let mut arcs = Vec::new();
    for k in 0..m {
        if events[k].arc_start {
            arcs.push((events[k].angle, events[(k + 1) % m].angle));
        }
    }
    KeptArcs::Arcs(arcs)
}

/// Uniform-density prefix of a polygon distance distribution whose site
/// (or site foot) lies inside the polygon: below the boundary distance the
/// sweep circle is entirely interior, so the density is exactly
/// `2πd / area` on `[d_start, d_end]`.
#[derive(Clone, Copy, Debug)]
pub struct PrefixDensity {
    pub d_start: f64,
    pub d_end: f64,
    area: f64,
}

impl PrefixDensity {
    pub fn eval(&self, d: f64) -> f64 {
        if d < self.d_start || d > self.d_end {
            0.0
        } else {
            2.0 * PI * d / self.area
        }
    }

    /// Probability mass carried by the prefix.
    pub fn mass(&self) -> f64 {
        PI * (self.d_end * self.d_end - self.d_start * self.d_start) / self.area
    }
}

/// Distance-distribution evaluator for a site and a planar polygon; the
/// per-site summary is computed once at construction.
#[derive(Clone, Debug)]
pub struct PolygonDist<'a> {
    poly: &'a Polygon,
    site: Point2,
    summary: PolygonSummary,
}

impl<'a> PolygonDist<'a> {
    pub fn new(site: Point2, poly: &'a Polygon) -> Result<PolygonDist<'a>> {
        if !site.x.is_finite() || !site.y.is_finite() {
            return Err(invalid("site has non-finite coordinates"));
        }
        Ok(PolygonDist {
            poly,
            site,
            summary: polygon_summary(poly, site),
        })
    }

    pub fn summary(&self) -> &PolygonSummary {
        &self.summary
    }

    pub fn cdf(&self, d: f64) -> f64 {
        polygon_cdf_with_summary(self.poly, self.site, &self.summary, d)
    }

    pub fn bounds(&self) -> crate::analytic::DistBounds {
        crate::analytic::DistBounds {
            d_lo: if self.summary.in_polygon {
                0.0
            } else {
                self.summary.d_min
            },
            d_hi: self.summary.d_max,
        }
    }

    /// Density estimate over `[d_min, d_max]` on an `n`-cell grid: row i is
    /// `(d_i, (F(d_i) − F(d_{i−1})) / Δ)` for i = 1..n−1, seeded with the
    /// interior-disk mass `π d_min²/area` when the site is inside.  CDF
    /// evaluations run in parallel when the `parallel` feature is enabled.
    pub fn density_grid(&self, n: usize) -> Result<Vec<(f64, f64)>> {
        density_grid_impl(
            self.summary.d_min,
            self.summary.d_max,
            n,
            self.interior_seed(),
            |d| self.cdf(d),
        )
    }

    /// Uniform prefix `2πd/area` on `[0, d_min]` when the site lies inside
    /// the polygon.
    pub fn analytic_prefix(&self) -> Option<PrefixDensity> {
        if self.summary.crossing_number % 2 == 1 {
            Some(PrefixDensity {
                d_start: 0.0,
                d_end: self.summary.d_min,
                area: self.summary.area,
            })
        } else {
            None
        }
    }

    fn interior_seed(&self) -> f64 {
        if self.summary.crossing_number % 2 == 1 {
            PI * self.summary.d_min * self.summary.d_min / self.summary.area
        } else {
            0.0
        }
    }
}

fn density_grid_impl(
    d_lo: f64,
    d_hi: f64,
    n: usize,
    seed: f64,
    cdf: impl Fn(f64) -> f64 + Sync + Send,
) -> Result<Vec<(f64, f64)>> {
    if n < 2 {
        return Err(invalid(format!("density grid needs at least 2 cells, got {n}")));
    }
    if !(d_hi > d_lo) {
        return Err(degenerate("degenerate distance range for density grid"));
    }
    let step = (d_hi - d_lo) / n as f64;
    let grid = exec::map_indexed(n - 1, |k| {
        let d = d_lo + (d_hi - d_lo) * (k + 1) as f64 / n as f64;
        (d, cdf(d))
    });
    let mut out = Vec::with_capacity(n - 1);
    let mut prev = seed;
    for (d, f) in grid {
        out.push((d, (f - prev).max(0.0) / step));
        prev = f;
    }
    Ok(out)
}

/// Planar polygon embedded in 3-space.
///
/// The carrying plane's frame is built by Gram–Schmidt from the first
/// non-collinear vertex triple; all vertices must lie on that plane within
/// `1e-8` of the polygon diameter.
#[derive(Clone, Debug)]
pub struct Polygon3 {
    verts: Vec<Point3>,
    frame: PlaneFrame,
    planar: Polygon,
}

impl Polygon3 {
    pub fn new(verts: Vec<Point3>) -> Result<Polygon3> {
        Self::build(verts, true)
    }

    pub fn new_skip_simplicity(verts: Vec<Point3>) -> Result<Polygon3> {
        Self::build(verts, false)
    }

    fn build(verts: Vec<Point3>, full_checks: bool) -> Result<Polygon3> {
        if verts.len() < 3 {
            return Err(invalid(format!(
                "polygon needs at least 3 vertices, got {}",
                verts.len()
            )));
        }
        for (i, v) in verts.iter().enumerate() {
            if !v.is_finite() {
                return Err(invalid(format!("vertex {i} has non-finite coordinates")));
            }
        }
        let n = verts.len();
        let frame = (0..n)
            .find_map(|i| {
                PlaneFrame::from_points(verts[i], verts[(i + 1) % n], verts[(i + 2) % n]).ok()
            })
            .ok_or_else(|| degenerate("all polygon vertices are collinear"))?;
        // Diameter estimate from the bounding box; exact pairwise distances
        // are not needed for a tolerance scale.
        let mut lo = verts[0];
        let mut hi = verts[0];
        for v in &verts {
            lo = Point3::new(lo.x.min(v.x), lo.y.min(v.y), lo.z.min(v.z));
            hi = Point3::new(hi.x.max(v.x), hi.y.max(v.y), hi.z.max(v.z));
        }
        let diameter = lo.dist(hi);
        let mut worst = 0.0f64;
        let mut planar_pts = Vec::with_capacity(n);
        for v in &verts {
            let pr = frame.project(*v);
            worst = worst.max(pr.offset.abs());
            planar_pts.push(Point2::new(pr.x, pr.y));
        }
        if worst > 1e-8 * diameter {
            return Err(degenerate(format!(
                "vertices deviate from the carrying plane by up to {worst:.3e} (diameter {diameter:.3e})"
            )));
        }
        let planar = if full_checks {
            Polygon::new(planar_pts)?
        } else {
            Polygon::new_skip_simplicity(planar_pts)?
        };
        Ok(Polygon3 {
            verts,
            frame,
            planar,
        })
    }

    pub fn vertices(&self) -> &[Point3] {
        &self.verts
    }

    pub fn frame(&self) -> &PlaneFrame {
        &self.frame
    }

    /// In-plane image of the polygon.  May be stored in reversed vertex
    /// order relative to [`Self::vertices`] after counterclockwise
    /// normalization.
    pub fn planar(&self) -> &Polygon {
        &self.planar
    }

    pub fn area(&self) -> f64 {
        self.planar.area()
    }
}

/// Distance-distribution evaluator for a site anywhere in 3-space and an
/// embedded planar polygon.
///
/// The site is projected onto the carrying plane; with out-of-plane offset
/// `h`, the distance CDF is the planar CDF evaluated at the in-plane sweep
/// radius `√(d² − h²)`.
#[derive(Clone, Debug)]
pub struct Polygon3Dist<'a> {
    planar: PolygonDist<'a>,
    offset: f64,
    d_lo: f64,
    d_m: f64,
    d_hi: f64,
}

impl<'a> Polygon3Dist<'a> {
    pub fn new(site: Point3, poly: &'a Polygon3) -> Result<Polygon3Dist<'a>> {
        if !site.is_finite() {
            return Err(invalid("site has non-finite coordinates"));
        }
        let pr = poly.frame().project(site);
        let offset = pr.offset.abs();
        let planar = PolygonDist::new(Point2::new(pr.x, pr.y), poly.planar())?;
        let s = planar.summary();
        let hyp = |r: f64| (offset * offset + r * r).sqrt();
        Ok(Polygon3Dist {
            d_lo: if s.in_polygon { offset } else { hyp(s.d_min) },
            d_m: hyp(s.d_min),
            d_hi: hyp(s.d_max),
            planar,
            offset,
        })
    }

    /// Summary of the planar reduction (crossing number and boundary
    /// distances measured in the plane).
    pub fn planar_summary(&self) -> &PolygonSummary {
        self.planar.summary()
    }

    pub fn bounds(&self) -> crate::analytic::DistBounds {
        crate::analytic::DistBounds {
            d_lo: self.d_lo,
            d_hi: self.d_hi,
        }
    }

    fn sweep(&self, d: f64) -> f64 {
        (d * d - self.offset * self.offset).max(0.0).sqrt()
    }

    pub fn cdf(&self, d: f64) -> f64 {
        if d <= self.offset {
            return 0.0;
        }
        self.planar.cdf(self.sweep(d))
    }

    /// Density grid over `[√(d_min² + h²), √(d_max² + h²)]`, differencing
    /// the composed CDF exactly like the planar grid.
    pub fn density_grid(&self, n: usize) -> Result<Vec<(f64, f64)>> {
        density_grid_impl(self.d_m, self.d_hi, n, self.planar.interior_seed(), |d| {
            self.cdf(d)
        })
    }

    /// Uniform prefix `2πd/area` on `[h, √(d_min² + h²)]` when the site
    /// projects strictly inside the polygon.
    pub fn analytic_prefix(&self) -> Option<PrefixDensity> {
        self.planar.analytic_prefix().map(|p| PrefixDensity {
            d_start: self.offset,
            d_end: self.d_m,
            area: p.area,
        })
    }
}
