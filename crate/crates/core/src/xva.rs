//! CVA and FVA under a given hazard curve, and the climate change valuation
//! adjustment as the difference between a stressed curve and flat
//! market-practice extrapolation.
//!
//! ```text
//! CVA = ∫₀ᵀ LGD λ(u) S(u) D(u) EPE(u) du
//! FVA = ∫₀ᵀ s_F S(u) D(u) E(u) du        E = EPE (FCA mode) or EE (signed)
//!
//! CD.CVA = CVA_CC - CVA_MP,  CD.FVA = FVA_CC - FVA_MP,  CCVA = CD.CVA + CD.FVA
//! ```
//!
//! Integrals are split at exposure grid points, swap payment dates and
//! hazard nodes, then refined adaptively on each smooth panel.

use serde::{Deserialize, Serialize};

use crate::cds::{self, CdsQuote};
use crate::error::{Error, Result};
use crate::exposure::{exposure_profile, ExposureProfile, SwapSpec};
use crate::quadrature::{integrate_panels, Tolerance};
use crate::sigmoid::SigmoidParams;
use crate::termstructures::{DiscountCurve, HazardCurve};

/// Which exposure the funding integral runs over.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FvaMode {
    /// Funding cost on positive exposure only.
    #[default]
    Fca,
    /// Signed expected exposure; zero for ATM swaps under the driftless model.
    Signed,
}

impl std::str::FromStr for FvaMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "fca" => Ok(Self::Fca),
            "signed" => Ok(Self::Signed),
            other => Err(format!("unknown FVA mode '{other}' (expected fca or signed)")),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct XvaInputs<'a> {
    pub exposure: &'a ExposureProfile,
    pub hazard: &'a HazardCurve,
    pub discount: DiscountCurve,
    pub lgd: f64,
    pub funding_spread: f64,
    pub fva_mode: FvaMode,
}

const XVA_TOLERANCE: Tolerance = Tolerance { abs: 1e-18, rel: 1e-11, max_subdivisions: 4_000 };

impl XvaInputs<'_> {
    fn validate(&self) -> Result<()> {
        if !(self.lgd > 0.0 && self.lgd <= 1.0) {
            return Err(Error::InvalidXvaInputs(format!("LGD {} outside (0, 1]", self.lgd)));
        }
        if !(self.funding_spread.is_finite() && self.funding_spread >= 0.0) {
            return Err(Error::InvalidXvaInputs(format!(
                "funding spread {} must be non-negative",
                self.funding_spread
            )));
        }
        let grid = self.exposure.grid();
        let (first, last) = (grid[0], grid[grid.len() - 1]);
        if first != 0.0 || (last - self.exposure.maturity()).abs() > 1e-12 {
            return Err(Error::DomainMismatch { grid_end: last, maturity: self.exposure.maturity() });
        }
        Ok(())
    }

    fn break_points(&self) -> Vec<f64> {
        let mut b = self.exposure.break_points();
        b.extend_from_slice(self.hazard.node_times());
        b
    }
}

pub fn cva(inputs: &XvaInputs<'_>) -> Result<f64> {
    inputs.validate()?;
    let XvaInputs { exposure, hazard, discount, lgd, .. } = *inputs;
    let integrand = |u: f64| lgd * hazard.hazard_at(u) * hazard.survival(u) * discount.discount(u) * exposure.epe_at(u);
    Ok(integrate_panels(integrand, 0.0, exposure.maturity(), &inputs.break_points(), XVA_TOLERANCE))
}

pub fn fva(inputs: &XvaInputs<'_>) -> Result<f64> {
    inputs.validate()?;
    let XvaInputs { exposure, hazard, discount, funding_spread, fva_mode, .. } = *inputs;
    let integrand = |u: f64| {
        let e = match fva_mode {
            FvaMode::Fca => exposure.epe_at(u),
            FvaMode::Signed => exposure.ee_at(u),
        };
        funding_spread * hazard.survival(u) * discount.discount(u) * e
    };
    Ok(integrate_panels(integrand, 0.0, exposure.maturity(), &inputs.break_points(), XVA_TOLERANCE))
}

/// Market-practice and climate-stressed valuation adjustments with their
/// differences. Percentages are relative to the market-practice values and
/// are `None` when that denominator is zero.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct XvaReport {
    pub cva_mp: f64,
    pub fva_mp: f64,
    pub cva_cc: f64,
    pub fva_cc: f64,
    pub cd_cva: f64,
    pub cd_fva: f64,
    pub ccva: f64,
    pub cd_cva_pct: Option<f64>,
    pub cd_fva_pct: Option<f64>,
    pub ccva_pct: Option<f64>,
}

fn pct(num: f64, den: f64) -> Option<f64> {
    (den != 0.0 && den.is_finite()).then(|| 100.0 * num / den)
}

impl XvaReport {
    pub fn from_values(cva_mp: f64, fva_mp: f64, cva_cc: f64, fva_cc: f64) -> Self {
        let cd_cva = cva_cc - cva_mp;
        let cd_fva = fva_cc - fva_mp;
        let ccva = cd_cva + cd_fva;
        Self {
            cva_mp,
            fva_mp,
            cva_cc,
            fva_cc,
            cd_cva,
            cd_fva,
            ccva,
            cd_cva_pct: pct(cd_cva, cva_mp),
            cd_fva_pct: pct(cd_fva, fva_mp),
            ccva_pct: pct(ccva, cva_mp + fva_mp),
        }
    }
}

/// The three percentage changes as printed in result tables.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PercentageRow {
    pub cva: Option<f64>,
    pub fva: Option<f64>,
    pub combined: Option<f64>,
}

pub fn report_percentage_changes(r: &XvaReport) -> PercentageRow {
    PercentageRow { cva: r.cd_cva_pct, fva: r.cd_fva_pct, combined: r.ccva_pct }
}

/// Market inputs shared by every report: discounting, rate vol, funding.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MarketConfig {
    pub discount: DiscountCurve,
    pub normal_vol: f64,
    pub funding_spread: f64,
    pub grid_step: f64,
    pub fva_mode: FvaMode,
}

impl Default for MarketConfig {
    fn default() -> Self {
        Self {
            discount: DiscountCurve::flat(0.02),
            normal_vol: 0.0020,
            funding_spread: 0.0100,
            grid_step: 0.25,
            fva_mode: FvaMode::Fca,
        }
    }
}

/// CCVA for an arbitrary stressed curve against flat extrapolation of `q`.
/// Exposure is shared between the two measures since credit and non-credit
/// events are independent.
pub fn ccva_report_for_curve(
    q: &CdsQuote,
    stressed: &HazardCurve,
    spec: &SwapSpec,
    market: &MarketConfig,
) -> Result<XvaReport> {
    let xi = cds::extend_curve_xi(q)?;
    let exposure = exposure_profile(spec, &market.discount, market.normal_vol, market.grid_step)?;
    let inputs = |hazard| XvaInputs {
        exposure: &exposure,
        hazard,
        discount: market.discount,
        lgd: q.lgd(),
        funding_spread: market.funding_spread,
        fva_mode: market.fva_mode,
    };
    let (mp, cc) = (inputs(&xi), inputs(stressed));
    Ok(XvaReport::from_values(cva(&mp)?, fva(&mp)?, cva(&cc)?, fva(&cc)?))
}

pub fn ccva_report(q: &CdsQuote, p: &SigmoidParams, spec: &SwapSpec, market: &MarketConfig) -> Result<XvaReport> {
    let stressed = cds::extend_curve_p(q, p)?;
    ccva_report_for_curve(q, &stressed, spec, market)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quote() -> CdsQuote {
        CdsQuote::new(10.0, 0.01, 0.4).unwrap()
    }

    fn inputs<'a>(e: &'a ExposureProfile, h: &'a HazardCurve) -> XvaInputs<'a> {
        XvaInputs {
            exposure: e,
            hazard: h,
            discount: DiscountCurve::default(),
            lgd: 0.6,
            funding_spread: 0.01,
            fva_mode: FvaMode::Fca,
        }
    }

    fn swap_profile() -> ExposureProfile {
        exposure_profile(&SwapSpec::atm(30.0), &DiscountCurve::default(), 0.002, 0.25).unwrap()
    }

    #[test]
    fn zero_hazard_or_exposure_gives_zero_cva() {
        let e = swap_profile();
        let h0 = HazardCurve::flat(0.0).unwrap();
        assert_eq!(cva(&inputs(&e, &h0)).unwrap(), 0.0);

        let flat = ExposureProfile::tabulated(30.0, vec![0.0, 30.0], vec![0.0; 2], vec![0.0; 2]).unwrap();
        let h = HazardCurve::flat(0.02).unwrap();
        assert_eq!(cva(&inputs(&flat, &h)).unwrap(), 0.0);
    }

    #[test]
    fn zero_funding_spread_gives_zero_fva() {
        let e = swap_profile();
        let h = HazardCurve::flat(0.02).unwrap();
        let i = XvaInputs { funding_spread: 0.0, ..inputs(&e, &h) };
        assert_eq!(fva(&i).unwrap(), 0.0);
    }

    #[test]
    fn signed_mode_is_zero_for_atm() {
        let e = swap_profile();
        let h = HazardCurve::flat(0.02).unwrap();
        let i = XvaInputs { fva_mode: FvaMode::Signed, ..inputs(&e, &h) };
        assert_eq!(fva(&i).unwrap(), 0.0);
    }

    #[test]
    fn higher_hazard_lowers_fva() {
        let e = swap_profile();
        let lo = HazardCurve::flat(0.01).unwrap();
        let hi = HazardCurve::new(vec![(0.0, 0.01), (10.0, 0.01), (40.0, 0.2)]).unwrap();
        assert!(fva(&inputs(&e, &hi)).unwrap() < fva(&inputs(&e, &lo)).unwrap());
    }

    #[test]
    fn tabulated_constant_exposure_closed_form() {
        // EPE ≡ 1, flat λ, flat r: CVA = LGD λ (1 - e^{-(λ+r)T}) / (λ+r)
        let e = ExposureProfile::tabulated(10.0, vec![0.0, 10.0], vec![1.0; 2], vec![0.0; 2]).unwrap();
        let h = HazardCurve::flat(0.03).unwrap();
        let k: f64 = 0.05;
        let expected = 0.6 * 0.03 * (1.0 - (-k * 10.0).exp()) / k;
        let got = cva(&inputs(&e, &h)).unwrap();
        assert!((got - expected).abs() < 1e-14, "{got} vs {expected}");
    }

    #[test]
    fn input_validation() {
        let e = swap_profile();
        let h = HazardCurve::flat(0.02).unwrap();
        assert!(cva(&XvaInputs { lgd: 0.0, ..inputs(&e, &h) }).is_err());
        assert!(fva(&XvaInputs { funding_spread: -0.01, ..inputs(&e, &h) }).is_err());
        let late = ExposureProfile::tabulated(10.0, vec![1.0, 10.0], vec![1.0; 2], vec![0.0; 2]).unwrap();
        assert!(matches!(cva(&inputs(&late, &h)), Err(Error::DomainMismatch { .. })));
        let short = ExposureProfile::tabulated(10.0, vec![0.0, 9.0], vec![1.0; 2], vec![0.0; 2]).unwrap();
        assert!(matches!(fva(&inputs(&short, &h)), Err(Error::DomainMismatch { .. })));
    }

    #[test]
    fn percentage_changes() {
        let r = XvaReport::from_values(2.0, 1.0, 2.0, 1.0);
        assert_eq!(r.cd_cva_pct, Some(0.0));
        let r = XvaReport::from_values(2.0, 1.0, 4.0, 1.0);
        assert_eq!(report_percentage_changes(&r).cva, Some(100.0));
        let r = XvaReport::from_values(0.0, 0.0, 1.0, 0.0);
        let row = report_percentage_changes(&r);
        assert_eq!((row.cva, row.fva, row.combined), (None, None, None));
    }

    #[test]
    fn no_stress_no_ccva() {
        let q = quote();
        let lvl = q.flat_hazard().unwrap();
        let p = SigmoidParams { h_max: lvl, ..SigmoidParams::example(lvl) };
        let r = ccva_report(&q, &p, &SwapSpec::atm(30.0), &MarketConfig::default()).unwrap();
        assert_eq!(r.cd_cva, 0.0);
        assert_eq!(r.cd_fva, 0.0);
        assert_eq!(r.ccva, 0.0);
    }

    #[test]
    fn beneficial_scenario_gives_negative_ccva() {
        // wide traded level, stress path that stays below it
        let q = CdsQuote::new(10.0, 0.03, 0.4).unwrap();
        let calm = HazardCurve::new(vec![(10.0, 0.01), (30.0, 0.01)]).unwrap();
        let p_curve = cds::attach_stress_segment(&q, &calm).unwrap();
        let r = ccva_report_for_curve(&q, &p_curve, &SwapSpec::atm(30.0), &MarketConfig::default()).unwrap();
        assert!(r.cd_cva < 0.0);
        assert!(r.ccva < 0.0);
    }
}
