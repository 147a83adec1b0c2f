//! Hazard-model files: a site, an observation horizon, and source zones
//! combining a geometry, an annual rate, a truncated-exponential magnitude
//! law, and a ground-motion attenuation model.

use serde::{Deserialize, Serialize};

use udist::psha::{Gmpe, GutenbergRichter, HazardConfig, HazardModel, SourceZone};

use crate::scene::{SitePoint, SupportSpec, Units};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub units: Units,
    pub site: SitePoint,
    pub horizon_years: f64,
    pub zones: Vec<ZoneSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ZoneSpec {
    pub rate: f64,
    pub beta: f64,
    pub m_min: f64,
    pub m_max: f64,
    pub geometry: SupportSpec,
    pub gmpe: GmpeSpec,
}

/// `cornell` uses ln a = c0 + c1·m − c2·ln(d + d_offset) with the published
/// coefficient set unless `coeffs` = [c0, c1, c2, d_offset, sigma] overrides
/// it; `linear` uses ln a = c0 + c1·m + c2·d with coeffs = [c0, c1, c2,
/// sigma].
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum GmpeSpec {
    Cornell {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        coeffs: Option<[f64; 5]>,
    },
    Linear {
        coeffs: [f64; 4],
    },
}

impl GmpeSpec {
    pub fn to_gmpe(&self) -> udist::Result<Gmpe> {
        let g = match self {
            GmpeSpec::Cornell { coeffs: None } => Gmpe::cornell_1968(),
            GmpeSpec::Cornell { coeffs: Some(c) } => Gmpe::LogDistance {
                c0: c[0],
                c1: c[1],
                c2: c[2],
                d_offset: c[3],
                sigma: c[4],
            },
            GmpeSpec::Linear { coeffs: c } => Gmpe::LinearDistance {
                c0: c[0],
                c1: c[1],
                c2: c[2],
                sigma: c[3],
            },
        };
        g.validate()?;
        Ok(g)
    }
}

impl ZoneSpec {
    pub fn to_zone(&self) -> udist::Result<SourceZone> {
        let zone = SourceZone {
            geometry: self.geometry.to_support()?,
            annual_rate: self.rate,
            magnitudes: GutenbergRichter::new(self.beta, self.m_min, self.m_max)?,
            gmpe: self.to_gmpe_validated()?,
        };
        zone.validate()?;
        Ok(zone)
    }

    fn to_gmpe_validated(&self) -> udist::Result<Gmpe> {
        self.gmpe.to_gmpe()
    }
}

impl ModelFile {
    /// Builds the hazard model with the given product-grid resolution.
    /// Distances handed to the attenuation models are scaled to kilometres
    /// according to the declared unit.
    pub fn to_model(
        &self,
        distance_cells: usize,
        magnitude_cells: usize,
    ) -> udist::Result<HazardModel> {
        let cfg = HazardConfig {
            distance_cells,
            magnitude_cells,
            km_per_unit: self.units.km_per_unit(),
        };
        let site = self.site.to_point(self.units)?;
        let zones = self
            .zones
            .iter()
            .map(|z| z.to_zone())
            .collect::<udist::Result<Vec<_>>>()?;
        HazardModel::new(site, &zones, &cfg)
    }
}
