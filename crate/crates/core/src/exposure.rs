//! Expected exposure of an uncollateralized at-the-money payer swap under a
//! flat normal volatility.
//!
//! The residual swap value at `t` is the forward annuity times the
//! displacement of the par rate since inception. With a driftless par rate
//! that displacement is `N(0, σ² t)`, so
//!
//! ```text
//! EPE(t) = notional · A(t) · σ √t · φ(0),   EE(t) = 0,   ENE(t) = -EPE(t)
//! ```
//!
//! where `A(t)` is the annuity of the remaining fixed payments, valued at `t`.
//! Collateral is zero throughout.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::termstructures::DiscountCurve;

/// `φ(0) = 1/√(2π)`.
const NORMAL_PDF_AT_ZERO: f64 = 0.398_942_280_401_432_7;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SwapSpec {
    pub maturity: f64,
    /// Fixed payments per year.
    pub frequency: u32,
    pub notional: f64,
    /// Fixed rate struck at the inception par rate. Only ATM is supported.
    pub atm: bool,
}

impl SwapSpec {
    pub fn atm(maturity: f64) -> Self {
        Self { maturity, frequency: 1, notional: 1.0, atm: true }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.maturity.is_finite() && self.maturity > 0.0) {
            return Err(Error::InvalidSwap(format!("maturity {} must be positive", self.maturity)));
        }
        if !(self.notional.is_finite() && self.notional > 0.0) {
            return Err(Error::InvalidSwap(format!("notional {} must be positive", self.notional)));
        }
        if self.frequency == 0 {
            return Err(Error::InvalidSwap("payment frequency must be at least 1".into()));
        }
        if !self.atm {
            return Err(Error::InvalidSwap("only at-the-money swaps are supported".into()));
        }
        Ok(())
    }

    pub fn payment_dates(&self) -> Vec<f64> {
        payment_dates(self.maturity, self.frequency)
    }
}

/// Regular schedule `k / frequency` with a short final period ending at
/// `maturity` when the tenor is not a whole number of periods.
pub fn payment_dates(maturity: f64, frequency: u32) -> Vec<f64> {
    let f = f64::from(frequency.max(1));
    let periods = (maturity * f - 1e-9).ceil().max(1.0) as usize;
    (1..=periods).map(|k| (k as f64 / f).min(maturity)).collect()
}

/// Annuity of the fixed payments strictly after `t`, valued at `t`:
/// `Σ_{t_k > t} α_k D(t_k) / D(t)`. Zero at and after maturity.
pub fn annuity(d: &DiscountCurve, t: f64, maturity: f64, frequency: u32) -> f64 {
    let dates = payment_dates(maturity, frequency);
    let df_t = d.discount(t);
    let mut prev = 0.0;
    let mut total = 0.0;
    for &pay in &dates {
        if pay > t {
            total += (pay - prev) * d.discount(pay) / df_t;
        }
        prev = pay;
    }
    total
}

/// Analytic exposure model for one ATM swap.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AtmSwapExposure {
    pub spec: SwapSpec,
    pub discount: DiscountCurve,
    /// Normal (absolute) rate volatility per √year.
    pub vol: f64,
}

impl AtmSwapExposure {
    pub fn new(spec: SwapSpec, discount: DiscountCurve, vol: f64) -> Result<Self> {
        spec.validate()?;
        if !(vol.is_finite() && vol >= 0.0) {
            return Err(Error::InvalidSwap(format!("normal vol {vol} must be non-negative")));
        }
        Ok(Self { spec, discount, vol })
    }

    pub fn epe(&self, t: f64) -> f64 {
        if t <= 0.0 || t >= self.spec.maturity {
            return 0.0;
        }
        let a = annuity(&self.discount, t, self.spec.maturity, self.spec.frequency);
        self.spec.notional * a * self.vol * t.sqrt() * NORMAL_PDF_AT_ZERO
    }

    pub fn ee(&self, _t: f64) -> f64 {
        0.0
    }

    pub fn ene(&self, t: f64) -> f64 {
        -self.epe(t)
    }
}

pub fn atm_epe(spec: &SwapSpec, d: &DiscountCurve, vol: f64, t: f64) -> Result<f64> {
    Ok(AtmSwapExposure::new(*spec, *d, vol)?.epe(t))
}

/// Exposure on a time grid covering `[0, maturity]`.
///
/// Profiles built from the analytic model keep it, so integrals can sample
/// exposure between grid points; tabulated profiles are interpolated
/// linearly.
#[derive(Clone, Debug)]
pub struct ExposureProfile {
    maturity: f64,
    grid: Vec<f64>,
    epe: Vec<f64>,
    ee: Vec<f64>,
    ene: Vec<f64>,
    model: Option<AtmSwapExposure>,
}

pub fn time_grid(maturity: f64, step: f64) -> Vec<f64> {
    let n = (maturity / step - 1e-9).ceil() as usize;
    let mut grid: Vec<f64> = (0..n).map(|i| i as f64 * step).collect();
    grid.push(maturity);
    grid
}

pub fn exposure_profile(spec: &SwapSpec, d: &DiscountCurve, vol: f64, grid_step: f64) -> Result<ExposureProfile> {
    if !(grid_step.is_finite() && grid_step > 0.0) {
        return Err(Error::InvalidSwap(format!("grid step {grid_step} must be positive")));
    }
    let model = AtmSwapExposure::new(*spec, *d, vol)?;
    let grid = time_grid(spec.maturity, grid_step);
    let epe: Vec<f64> = grid.iter().map(|&t| model.epe(t)).collect();
    let ee = grid.iter().map(|&t| model.ee(t)).collect();
    let ene = epe.iter().map(|e| -e).collect();
    Ok(ExposureProfile { maturity: spec.maturity, grid, epe, ee, ene, model: Some(model) })
}

impl ExposureProfile {
    /// Profile from an external exposure engine.
    pub fn tabulated(maturity: f64, grid: Vec<f64>, epe: Vec<f64>, ee: Vec<f64>) -> Result<Self> {
        if grid.is_empty() || grid.len() != epe.len() || grid.len() != ee.len() {
            return Err(Error::InvalidXvaInputs("grid and exposure columns differ in length".into()));
        }
        if grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidXvaInputs("exposure grid must be strictly increasing".into()));
        }
        if epe.iter().zip(&ee).any(|(p, e)| *p < 0.0 || p < e) {
            return Err(Error::InvalidXvaInputs("need 0 <= EE <= EPE pointwise".into()));
        }
        let ene = epe.iter().zip(&ee).map(|(p, e)| e - p).collect();
        Ok(Self { maturity, grid, epe, ee, ene, model: None })
    }

    pub fn maturity(&self) -> f64 {
        self.maturity
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn epe(&self) -> &[f64] {
        &self.epe
    }

    pub fn ee(&self) -> &[f64] {
        &self.ee
    }

    pub fn ene(&self) -> &[f64] {
        &self.ene
    }

    pub fn model(&self) -> Option<&AtmSwapExposure> {
        self.model.as_ref()
    }

    /// Grid points plus payment dates: the points where exposure may kink
    /// or jump.
    pub fn break_points(&self) -> Vec<f64> {
        let mut b = self.grid.clone();
        if let Some(m) = &self.model {
            b.extend(m.spec.payment_dates());
        }
        b.sort_by(f64::total_cmp);
        b.dedup();
        b
    }

    fn interpolate(&self, values: &[f64], t: f64) -> f64 {
        let i = self.grid.partition_point(|&g| g <= t);
        if i == 0 {
            return values[0];
        }
        if i == self.grid.len() {
            return values[i - 1];
        }
        let (t0, t1) = (self.grid[i - 1], self.grid[i]);
        values[i - 1] + (t - t0) * (values[i] - values[i - 1]) / (t1 - t0)
    }

    pub fn epe_at(&self, t: f64) -> f64 {
        match &self.model {
            Some(m) => m.epe(t),
            None => self.interpolate(&self.epe, t),
        }
    }

    pub fn ee_at(&self, t: f64) -> f64 {
        match &self.model {
            Some(m) => m.ee(t),
            None => self.interpolate(&self.ee, t),
        }
    }
}
