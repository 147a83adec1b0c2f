//! Disjoint unions of supports and the resulting mixture distributions.
//!
//! A uniform point on a disjoint union lands in member k with probability
//! `measure_k / Σ measure`, so the distance CDF is the measure-weighted
//! mixture of the member CDFs.  Construction flattens nested unions,
//! enforces dimension homogeneity, and sorts members into a canonical order
//! so that permuted inputs produce identical evaluators.

use std::cmp::Ordering;

use crate::analytic::DistBounds;
use crate::error::{invalid, Result};
use crate::geom::Point3;
use crate::support::{Dimension, DistanceDistribution, Support};

/// Disjoint union of supports of equal dimension.
///
/// Members are stored flattened (unions of unions collapse) and in a
/// canonical order.  Pairwise disjointness cannot be decided exactly for
/// arbitrary members; debug builds run a seeded sampling spot-check and
/// reject unions where a sample from one member lands inside another.
/// Release builds skip the check.
#[derive(Clone, Debug)]
pub struct UnionSupport {
    members: Vec<Support>,
}

fn flatten(members: Vec<Support>, out: &mut Vec<Support>) {
    for m in members {
        match m {
            Support::Union(u) => flatten(u.members, out),
            other => out.push(other),
        }
    }
}

fn type_rank(s: &Support) -> u8 {
    match s {
        Support::Disk(_) => 0,
        Support::Ball(_) => 1,
        Support::Segment(_) => 2,
        Support::Polygon(_) => 3,
        Support::Union(_) => 4,
    }
}

/// Stored-coordinate key giving a deterministic total order on members.
fn sort_key(s: &Support) -> Vec<f64> {
    match s {
        Support::Disk(d) => {
            let c = d.center();
            vec![c.x, c.y, c.z, d.radius()]
        }
        Support::Ball(b) => {
            let c = b.center();
            vec![c.x, c.y, c.z, b.radius()]
        }
        Support::Segment(seg) => {
            let (a, b) = (seg.a(), seg.b());
            vec![a.x, a.y, a.z, b.x, b.y, b.z]
        }
        Support::Polygon(p) => p
            .vertices()
            .iter()
            .flat_map(|v| [v.x, v.y, v.z])
            .collect(),
        Support::Union(_) => Vec::new(),
    }
}

fn canonical_cmp(a: &Support, b: &Support) -> Ordering {
    type_rank(a).cmp(&type_rank(b)).then_with(|| {
        let (ka, kb) = (sort_key(a), sort_key(b));
        for (x, y) in ka.iter().zip(kb.iter()) {
            match x.total_cmp(y) {
                Ordering::Equal => continue,
                other => return other,
            }
        }
        ka.len().cmp(&kb.len())
    })
}

/// Debug-build sampling check: a few seeded draws from each member must not
/// land inside any other member.
#[cfg(debug_assertions)]
fn spot_check_disjoint(members: &[Support]) -> Result<()> {
    use rand::SeedableRng;
    const DRAWS: usize = 32;
    let scale = members
        .iter()
        .map(|m| sort_key(m).iter().fold(0.0f64, |s, x| s.max(x.abs())))
        .fold(1.0f64, f64::max);
    let tol = 1e-9 * scale;
    for (i, from) in members.iter().enumerate() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x0d15_701e + i as u64);
        for _ in 0..DRAWS {
            let p = crate::oracle::sample_point(from, &mut rng)?;
            for (j, other) in members.iter().enumerate() {
                if j != i && other.contains(p, tol) {
                    return Err(invalid(format!(
                        "union members {i} and {j} overlap near ({:.6}, {:.6}, {:.6})",
                        p.x, p.y, p.z
                    )));
                }
            }
        }
    }
    Ok(())
}

impl UnionSupport {
    pub fn new(members: Vec<Support>) -> Result<UnionSupport> {
        let mut flat = Vec::new();
        flatten(members, &mut flat);
        if flat.is_empty() {
            return Err(invalid("union needs at least one member"));
        }
        let dim = flat[0].dimension();
        for m in &flat {
            if m.dimension() != dim {
                return Err(invalid(format!(
                    "union mixes members of dimension {:?} and {:?}",
                    dim,
                    m.dimension()
                )));
            }
        }
        flat.sort_by(canonical_cmp);
        #[cfg(debug_assertions)]
        spot_check_disjoint(&flat)?;
        Ok(UnionSupport { members: flat })
    }

    pub fn members(&self) -> &[Support] {
        &self.members
    }

    pub fn dimension(&self) -> Dimension {
        self.members[0].dimension()
    }

    pub fn measure(&self) -> f64 {
        self.members.iter().map(|m| m.measure()).sum()
    }
}

/// Measure-weighted mixture of per-member distance distributions.
pub struct MixtureDist<'a> {
    comps: Vec<(f64, DistanceDistribution<'a>)>,
    bounds: DistBounds,
}

impl<'a> MixtureDist<'a> {
    pub(crate) fn new(site: Point3, union: &'a UnionSupport) -> Result<MixtureDist<'a>> {
        let total = union.measure();
        let mut comps = Vec::with_capacity(union.members().len());
        let mut d_lo = f64::INFINITY;
        let mut d_hi = 0.0f64;
        for m in union.members() {
            let dist = DistanceDistribution::new(site, m)?;
            let b = dist.bounds();
            d_lo = d_lo.min(b.d_lo);
            d_hi = d_hi.max(b.d_hi);
            comps.push((m.measure() / total, dist));
        }
        Ok(MixtureDist {
            comps,
            bounds: DistBounds { d_lo, d_hi },
        })
    }

    pub fn bounds(&self) -> DistBounds {
        self.bounds
    }

    pub fn cdf(&self, d: f64) -> f64 {
        self.comps
            .iter()
            .map(|(w, dist)| w * dist.cdf(d))
            .sum::<f64>()
            .clamp(0.0, 1.0)
    }

    /// Mixture density, available only when every member has a closed-form
    /// density.
    pub fn pdf(&self, d: f64) -> Option<f64> {
        let mut acc = 0.0;
        for (w, dist) in &self.comps {
            acc += w * dist.pdf(d)?;
        }
        Some(acc)
    }
}
