//! Hazard-curve assembly for sites exposed to seismic source zones.
//!
//! Each zone produces events as a Poisson process in time; an event's
//! epicenter is uniform on the zone geometry, its magnitude follows a
//! truncated exponential law, and the resulting ground motion is lognormal
//! around an attenuation model.  The per-event exceedance probability for a
//! threshold is the expectation of the lognormal tail over the joint
//! distance–magnitude law, computed here by combining the exact distance
//! CDF with closed-form magnitude cell masses on a product grid.  Thinning
//! the event process by that probability gives the annual exceedance rate,
//! and from it, exceedance probabilities over a time horizon and
//! design-value inversion.

use crate::analytic::DistBounds;
use crate::error::{invalid, Error, Result};
use crate::exec;
use crate::geom::Point3;
use crate::support::{DistanceDistribution, Support};

const SQRT_2: f64 = std::f64::consts::SQRT_2;

/// Truncated exponential magnitude law on `[m_min, m_max]` with rate
/// `beta`: density `β·e^{−β(m − m_min)} / (1 − e^{−β(m_max − m_min)})`.
#[derive(Clone, Copy, Debug)]
pub struct GutenbergRichter {
    beta: f64,
    m_min: f64,
    m_max: f64,
}

impl GutenbergRichter {
    pub fn new(beta: f64, m_min: f64, m_max: f64) -> Result<GutenbergRichter> {
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(invalid(format!("magnitude rate beta must be positive, got {beta}")));
        }
        if !m_min.is_finite() || !m_max.is_finite() || !(m_max > m_min) {
            return Err(invalid(format!(
                "magnitude range must satisfy m_min < m_max, got [{m_min}, {m_max}]"
            )));
        }
        Ok(GutenbergRichter { beta, m_min, m_max })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn m_min(&self) -> f64 {
        self.m_min
    }

    pub fn m_max(&self) -> f64 {
        self.m_max
    }

    fn norm(&self) -> f64 {
        1.0 - (-self.beta * (self.m_max - self.m_min)).exp()
    }

    pub fn pdf(&self, m: f64) -> f64 {
        if m < self.m_min || m > self.m_max {
            return 0.0;
        }
        self.beta * (-self.beta * (m - self.m_min)).exp() / self.norm()
    }

    pub fn cdf(&self, m: f64) -> f64 {
        if m <= self.m_min {
            return 0.0;
        }
        if m >= self.m_max {
            return 1.0;
        }
        (1.0 - (-self.beta * (m - self.m_min)).exp()) / self.norm()
    }

    /// Probability mass of `[a, b]`, in closed form:
    /// `(e^{−β(a − m_min)} − e^{−β(b − m_min)}) / (1 − e^{−β(m_max − m_min)})`
    /// after clipping `[a, b]` to the magnitude range.
    pub fn cell_mass(&self, a: f64, b: f64) -> f64 {
        let a = a.max(self.m_min);
        let b = b.min(self.m_max);
        if b <= a {
            return 0.0;
        }
        let e = |m: f64| (-self.beta * (m - self.m_min)).exp();
        (e(a) - e(b)) / self.norm()
    }

    /// Quantile function; inverse of [`Self::cdf`] on (0, 1).
    pub fn inverse_cdf(&self, u: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&u) {
            return Err(invalid(format!("quantile level must lie in [0, 1], got {u}")));
        }
        Ok(self.m_min - (-u * self.norm()).ln_1p() / self.beta)
    }
}

/// Ground-motion model: the natural log of the intensity measure is normal
/// with standard deviation `sigma` around a magnitude/distance mean.
#[derive(Clone, Copy, Debug)]
pub enum Gmpe {
    /// `ln a = c0 + c1·M − c2·ln(D + d_offset)`, distance D in kilometres.
    LogDistance {
        c0: f64,
        c1: f64,
        c2: f64,
        d_offset: f64,
        sigma: f64,
    },
    /// `ln a = c0 + c1·M − c2·D`: linear attenuation, mainly for synthetic
    /// models with hand-computable expectations.
    LinearDistance {
        c0: f64,
        c1: f64,
        c2: f64,
        sigma: f64,
    },
}

impl Gmpe {
    /// The classic Cornell (1968) peak-ground-acceleration law:
    /// `ln PGA = 0.152 + 0.859·M − 1.803·ln(D + 25)`, σ = 0.57.
    pub fn cornell_1968() -> Gmpe {
        Gmpe::LogDistance {
            c0: 0.152,
            c1: 0.859,
            c2: 1.803,
            d_offset: 25.0,
            sigma: 0.57,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (all_finite, sigma) = match *self {
            Gmpe::LogDistance {
                c0,
                c1,
                c2,
                d_offset,
                sigma,
            } => (
                c0.is_finite()
                    && c1.is_finite()
                    && c2.is_finite()
                    && d_offset.is_finite()
                    && d_offset >= 0.0,
                sigma,
            ),
            Gmpe::LinearDistance { c0, c1, c2, sigma } => {
                (c0.is_finite() && c1.is_finite() && c2.is_finite(), sigma)
            }
        };
        if !all_finite {
            return Err(invalid("ground-motion coefficients must be finite"));
        }
        if !(sigma > 0.0) || !sigma.is_finite() {
            return Err(invalid(format!(
                "ground-motion sigma must be positive, got {sigma}"
            )));
        }
        Ok(())
    }

    /// Mean of `ln a` at magnitude `m` and source distance `dist_km`.
    pub fn mean_ln(&self, m: f64, dist_km: f64) -> f64 {
        match *self {
            Gmpe::LogDistance {
                c0,
                c1,
                c2,
                d_offset,
                ..
            } => c0 + c1 * m - c2 * (dist_km + d_offset).ln(),
            Gmpe::LinearDistance { c0, c1, c2, .. } => c0 + c1 * m - c2 * dist_km,
        }
    }

    pub fn sigma(&self) -> f64 {
        match *self {
            Gmpe::LogDistance { sigma, .. } | Gmpe::LinearDistance { sigma, .. } => sigma,
        }
    }

    /// P(intensity > a) for one event at magnitude `m` and distance
    /// `dist_km`: the lognormal upper tail `½·erfc(z/√2)` with
    /// `z = (ln a − mean_ln)/σ`.  Non-positive thresholds are always
    /// exceeded.
    pub fn exceed_probability(&self, m: f64, dist_km: f64, a: f64) -> f64 {
        if a <= 0.0 {
            return 1.0;
        }
        let z = (a.ln() - self.mean_ln(m, dist_km)) / self.sigma();
        0.5 * libm::erfc(z / SQRT_2)
    }
}

/// One seismic source zone: a geometry carrying uniform epicenter
/// likelihood, an annual event rate, a magnitude law, and a ground-motion
/// model.
#[derive(Clone, Debug)]
pub struct SourceZone {
    pub geometry: Support,
    /// Annual rate of events with magnitude at or above the law's minimum.
    pub annual_rate: f64,
    pub magnitudes: GutenbergRichter,
    pub gmpe: Gmpe,
}

impl SourceZone {
    pub fn validate(&self) -> Result<()> {
        if !(self.annual_rate > 0.0) || !self.annual_rate.is_finite() {
            return Err(invalid(format!(
                "annual rate must be positive, got {}",
                self.annual_rate
            )));
        }
        self.gmpe.validate()
    }
}

/// Discretization settings for the distance–magnitude expectation.
#[derive(Clone, Copy, Debug)]
pub struct HazardConfig {
    pub distance_cells: usize,
    pub magnitude_cells: usize,
    /// Kilometres per geometry coordinate unit (1.0 when geometries are
    /// already in km); converts site–source distances for the
    /// ground-motion model.
    pub km_per_unit: f64,
}

impl Default for HazardConfig {
    fn default() -> Self {
        HazardConfig {
            distance_cells: 256,
            magnitude_cells: 128,
            km_per_unit: 1.0,
        }
    }
}

impl HazardConfig {
    pub fn validate(&self) -> Result<()> {
        if self.distance_cells < 1 || self.magnitude_cells < 1 {
            return Err(invalid("hazard grids need at least one cell per axis"));
        }
        if !(self.km_per_unit > 0.0) || !self.km_per_unit.is_finite() {
            return Err(invalid(format!(
                "km_per_unit must be positive, got {}",
                self.km_per_unit
            )));
        }
        Ok(())
    }
}

/// Product discretization of one zone as seen from a site.  Distance cell
/// masses come from exact CDF differences (they sum to 1 because the CDF is
/// exactly 0 and 1 at the support ends); magnitude masses are closed-form.
/// The grid is independent of the ground-motion threshold, so a full hazard
/// curve reuses it.
#[derive(Clone, Debug)]
pub struct ZoneGrid {
    /// (cell-midpoint distance in km, probability mass)
    distance_cells: Vec<(f64, f64)>,
    /// (cell-midpoint magnitude, probability mass)
    magnitude_cells: Vec<(f64, f64)>,
    gmpe: Gmpe,
    annual_rate: f64,
}

impl ZoneGrid {
    pub fn new(site: Point3, zone: &SourceZone, cfg: &HazardConfig) -> Result<ZoneGrid> {
        zone.validate()?;
        cfg.validate()?;
        let dist = DistanceDistribution::new(site, &zone.geometry)?;
        let DistBounds { d_lo, d_hi } = dist.bounds();
        let j = cfg.distance_cells;
        let mut distance_cells = Vec::with_capacity(j);
        if d_hi > d_lo {
            let mut prev = dist.cdf(d_lo);
            for k in 0..j {
                let b = d_lo + (d_hi - d_lo) * (k + 1) as f64 / j as f64;
                let f = dist.cdf(b);
                let mid = d_lo + (d_hi - d_lo) * (k as f64 + 0.5) / j as f64;
                distance_cells.push((mid * cfg.km_per_unit, (f - prev).max(0.0)));
                prev = f;
            }
        } else {
            // Degenerate support: all mass at a single distance.
            distance_cells.push((d_lo * cfg.km_per_unit, 1.0));
        }
        let gr = &zone.magnitudes;
        let k = cfg.magnitude_cells;
        let mut magnitude_cells = Vec::with_capacity(k);
        for i in 0..k {
            let a = gr.m_min() + (gr.m_max() - gr.m_min()) * i as f64 / k as f64;
            let b = gr.m_min() + (gr.m_max() - gr.m_min()) * (i + 1) as f64 / k as f64;
            let mid = 0.5 * (a + b);
            magnitude_cells.push((mid, gr.cell_mass(a, b)));
        }
        Ok(ZoneGrid {
            distance_cells,
            magnitude_cells,
            gmpe: zone.gmpe,
            annual_rate: zone.annual_rate,
        })
    }

    pub fn annual_rate(&self) -> f64 {
        self.annual_rate
    }

    /// Per-event probability that the threshold `a` is exceeded at the
    /// site: the double sum of distance mass × magnitude mass × lognormal
    /// tail over the product grid.
    pub fn exceedance_probability(&self, a: f64) -> f64 {
        let mut p = 0.0;
        for &(dist_km, dmass) in &self.distance_cells {
            if dmass == 0.0 {
                continue;
            }
            let mut inner = 0.0;
            for &(m, mmass) in &self.magnitude_cells {
                inner += mmass * self.gmpe.exceed_probability(m, dist_km, a);
            }
            p += dmass * inner;
        }
        p.clamp(0.0, 1.0)
    }
}

/// Per-site hazard model: the zone grids plus the bookkeeping to turn them
/// into rates, probabilities, and design values.
pub struct HazardModel {
    grids: Vec<ZoneGrid>,
}

impl HazardModel {
    pub fn new(site: Point3, zones: &[SourceZone], cfg: &HazardConfig) -> Result<HazardModel> {
        if zones.is_empty() {
            return Err(invalid("hazard model needs at least one source zone"));
        }
        let grids = zones
            .iter()
            .map(|z| ZoneGrid::new(site, z, cfg))
            .collect::<Result<Vec<_>>>()?;
        Ok(HazardModel { grids })
    }

    /// Annual rate of events exceeding `a` at the site: the event process
    /// of each zone thinned by its exceedance probability, summed over
    /// zones.
    pub fn exceedance_rate(&self, a: f64) -> f64 {
        self.grids
            .iter()
            .map(|g| g.annual_rate() * g.exceedance_probability(a))
            .sum()
    }

    /// Exceedance rates for a whole threshold grid, evaluated in parallel
    /// when the `parallel` feature is enabled.
    pub fn hazard_curve(&self, thresholds: &[f64]) -> Vec<f64> {
        exec::map_indexed(thresholds.len(), |i| self.exceedance_rate(thresholds[i]))
    }

    /// Probability of at least one exceedance of `a` within
    /// `horizon_years`.
    pub fn exceedance_probability(&self, a: f64, horizon_years: f64) -> f64 {
        event_probability(self.exceedance_rate(a), horizon_years)
    }

    /// Smallest threshold whose exceedance probability over the horizon is
    /// at most `target_prob`, found by bracketed bisection on the
    /// monotone-decreasing hazard curve; the bracket starts at `[1e-6, 1]`
    /// threshold units and doubles/halves outward as needed.
    ///
    /// Fails with [`Error::NoSolution`] when the target lies outside the
    /// attainable probability range (e.g. flat hazard from a degenerate
    /// model, or a target below the asymptotic floor).
    pub fn design_value(
        &self,
        target_prob: f64,
        horizon_years: f64,
        tol_a: f64,
    ) -> Result<f64> {
        if !(target_prob > 0.0 && target_prob < 1.0) {
            return Err(invalid(format!(
                "target probability must lie strictly in (0, 1), got {target_prob}"
            )));
        }
        if !(horizon_years > 0.0) || !horizon_years.is_finite() {
            return Err(invalid(format!(
                "horizon must be positive, got {horizon_years} years"
            )));
        }
        if !(tol_a > 0.0) || !tol_a.is_finite() {
            return Err(invalid(format!("tolerance must be positive, got {tol_a}")));
        }
        let prob = |a: f64| self.exceedance_probability(a, horizon_years);
        let mut a_lo = 1e-6;
        let mut a_hi = 1.0;
        // The exceedance probability decreases in a; expand until the
        // bracket straddles the target.
        let mut expansions = 0;
        while prob(a_lo) < target_prob {
            a_lo *= 0.5;
            expansions += 1;
            if expansions > 60 {
                let hi = prob(a_lo);
                let lo = prob(f64::MAX.min(a_hi * 2f64.powi(60)));
                return Err(Error::NoSolution {
                    target: target_prob,
                    attainable_lo: lo,
                    attainable_hi: hi,
                });
            }
        }
        expansions = 0;
        while prob(a_hi) > target_prob {
            a_hi *= 2.0;
            expansions += 1;
            if expansions > 60 {
                return Err(Error::NoSolution {
                    target: target_prob,
                    attainable_lo: prob(a_hi),
                    attainable_hi: prob(a_lo),
                });
            }
        }
        let mut iter = 0;
        while a_hi - a_lo > tol_a && iter < 200 {
            let mid = 0.5 * (a_lo + a_hi);
            if prob(mid) > target_prob {
                a_lo = mid;
            } else {
                a_hi = mid;
            }
            iter += 1;
        }
        Ok(0.5 * (a_lo + a_hi))
    }
}

/// Probability of at least one arrival of a Poisson process with the given
/// annual rate within the horizon: `1 − e^{−rate·t}`.
pub fn event_probability(annual_rate: f64, horizon_years: f64) -> f64 {
    -(-annual_rate * horizon_years).exp_m1()
}

/// Poisson probability of exactly `k` arrivals: computed in log space via
/// `lgamma` once `k` exceeds 20 so large counts neither overflow the
/// factorial nor underflow prematurely.
pub fn poisson_pmf(annual_rate: f64, horizon_years: f64, k: u64) -> f64 {
    let mu = annual_rate * horizon_years;
    if mu == 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    if k <= 20 {
        let mut fact = 1.0;
        for i in 1..=k {
            fact *= i as f64;
        }
        mu.powi(k as i32) * (-mu).exp() / fact
    } else {
        (k as f64 * mu.ln() - mu - libm::lgamma(k as f64 + 1.0)).exp()
    }
}

/// Rate of the thinned process keeping each arrival with probability `p`.
pub fn thinned_rate(annual_rate: f64, p: f64) -> f64 {
    annual_rate * p
}
