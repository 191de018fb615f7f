//! CDS par spreads, flat-hazard bootstrap, and the two ways of extending a
//! hazard curve past the last traded maturity: flat market-practice
//! extrapolation, or a physical-measure stress path.
//!
//! Premium and protection legs are both paid continuously, so a flat hazard
//! `λ` prices at `s = (1 - R) λ` regardless of discounting.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{integrate_panels, Tolerance};
use crate::sigmoid::{self, SigmoidParams};
use crate::termstructures::{DiscountCurve, HazardCurve};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CdsQuote {
    /// Last traded maturity, years.
    pub maturity: f64,
    /// Running spread as a rate, 0.01 = 100bp.
    pub spread: f64,
    pub recovery: f64,
}

impl CdsQuote {
    pub fn new(maturity: f64, spread: f64, recovery: f64) -> Result<Self> {
        let q = Self { maturity, spread, recovery };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.maturity.is_finite() && self.maturity > 0.0) {
            return Err(Error::InvalidQuote(format!("maturity {} must be positive", self.maturity)));
        }
        if !(self.spread.is_finite() && self.spread >= 0.0) {
            return Err(Error::InvalidQuote(format!("spread {} must be non-negative", self.spread)));
        }
        if !(0.0..1.0).contains(&self.recovery) {
            return Err(Error::InvalidQuote(format!("recovery {} outside [0, 1)", self.recovery)));
        }
        Ok(())
    }

    pub fn lgd(&self) -> f64 {
        1.0 - self.recovery
    }

    /// Flat hazard level consistent with the quote.
    pub fn flat_hazard(&self) -> Result<f64> {
        self.validate()?;
        Ok(self.spread / self.lgd())
    }
}

/// How CDS quotes are extended past the last traded maturity under market
/// practice. Only flat-spread extrapolation is provided; other internal
/// methodologies would be added as variants here.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExtrapolationPolicy {
    #[default]
    Flat,
}

const LEG_TOLERANCE: Tolerance = Tolerance { abs: 1e-16, rel: 1e-12, max_subdivisions: 2_000 };

/// Premium and protection legs per unit spread / notional.
fn legs(h: &HazardCurve, d: &DiscountCurve, maturity: f64) -> (f64, f64) {
    let breaks = h.node_times();
    let annuity = integrate_panels(|t| d.discount(t) * h.survival(t), 0.0, maturity, breaks, LEG_TOLERANCE);
    let protection = integrate_panels(
        |t| d.discount(t) * h.hazard_at(t) * h.survival(t),
        0.0,
        maturity,
        breaks,
        LEG_TOLERANCE,
    );
    (annuity, protection)
}

/// Par spread equating continuous premium and protection legs to `maturity`.
pub fn par_spread(h: &HazardCurve, d: &DiscountCurve, maturity: f64, recovery: f64) -> Result<f64> {
    if !(maturity.is_finite() && maturity > 0.0) {
        return Err(Error::InvalidQuote(format!("maturity {maturity} must be positive")));
    }
    if !(0.0..1.0).contains(&recovery) {
        return Err(Error::InvalidQuote(format!("recovery {recovery} outside [0, 1)")));
    }
    let (annuity, protection) = legs(h, d, maturity);
    if !(annuity.is_finite() && annuity > 0.0) {
        return Err(Error::ZeroAnnuity(maturity));
    }
    Ok((1.0 - recovery) * protection / annuity)
}

pub fn bootstrap_flat_hazard(q: &CdsQuote) -> Result<HazardCurve> {
    HazardCurve::flat(q.flat_hazard()?)
}

/// Market-practice curve: the bootstrapped flat hazard held for all times.
pub fn extend_curve_xi(q: &CdsQuote) -> Result<HazardCurve> {
    extend_curve(q, ExtrapolationPolicy::Flat)
}

pub fn extend_curve(q: &CdsQuote, policy: ExtrapolationPolicy) -> Result<HazardCurve> {
    match policy {
        ExtrapolationPolicy::Flat => bootstrap_flat_hazard(q),
    }
}

/// Joins the flat traded segment on `[0, q.maturity]` to a stressed segment
/// whose first node must sit at `q.maturity`. A jump at the join is allowed.
pub fn attach_stress_segment(q: &CdsQuote, stress: &HazardCurve) -> Result<HazardCurve> {
    let level = q.flat_hazard()?;
    let first = stress.node_times()[0];
    if (first - q.maturity).abs() > 1e-12 {
        return Err(Error::SegmentMismatch { t_start: first, maturity: q.maturity });
    }
    let mut nodes = vec![(0.0, level), (q.maturity, level)];
    nodes.extend(stress.nodes());
    HazardCurve::new(nodes)
}

/// Climate-stressed curve: traded flat segment up to the last maturity, the
/// sigmoid stress path afterwards.
pub fn extend_curve_p(q: &CdsQuote, p: &SigmoidParams) -> Result<HazardCurve> {
    if (p.t_start - q.maturity).abs() > 1e-12 {
        return Err(Error::SegmentMismatch { t_start: p.t_start, maturity: q.maturity });
    }
    let stress = sigmoid::build_curve(p)?;
    attach_stress_segment(q, stress.curve())
}
