//! Scenario grids for the three experiment families: slowest uniform
//! approach to an endpoint, impact around the mid point, and transient
//! transitions.
//!
//! Cells are independent. They are evaluated in parallel and merged by
//! index, so output does not depend on the worker count.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cds::{self, CdsQuote};
use crate::error::{Error, Result};
use crate::exposure::SwapSpec;
use crate::sigmoid::{self, SigmoidParams};
use crate::termstructures::HazardCurve;
use crate::xva::{ccva_report_for_curve, MarketConfig, XvaReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScenarioFamily {
    SlowestUniform,
    Midpoint,
    Transition,
}

impl ScenarioFamily {
    pub fn name(self) -> &'static str {
        match self {
            Self::SlowestUniform => "slowest-uniform",
            Self::Midpoint => "midpoint",
            Self::Transition => "transition",
        }
    }
}

impl std::str::FromStr for ScenarioFamily {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "slowest-uniform" => Ok(Self::SlowestUniform),
            "midpoint" => Ok(Self::Midpoint),
            "transition" => Ok(Self::Transition),
            other => Err(format!(
                "unknown scenario family '{other}' (expected slowest-uniform, midpoint or transition)"
            )),
        }
    }
}

/// Trade and market set-up shared by every cell of a grid.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridMarket {
    pub quote: CdsQuote,
    pub market: MarketConfig,
    pub notional: f64,
    pub frequency: u32,
    /// Overrides the P-segment starting hazard; defaults to the level
    /// bootstrapped from the quote.
    pub h_start: Option<f64>,
}

impl Default for GridMarket {
    fn default() -> Self {
        Self {
            quote: CdsQuote { maturity: 10.0, spread: 0.01, recovery: 0.4 },
            market: MarketConfig::default(),
            notional: 1.0,
            frequency: 1,
            h_start: None,
        }
    }
}

impl GridMarket {
    fn h_start(&self) -> Result<f64> {
        match self.h_start {
            Some(h) => Ok(h),
            None => self.quote.flat_hazard(),
        }
    }

    fn swap(&self, maturity: f64) -> SwapSpec {
        SwapSpec { maturity, frequency: self.frequency, notional: self.notional, atm: true }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SlowestUniformConfig {
    /// Years from the last traded maturity to the endpoint.
    pub widths: Vec<f64>,
    pub irs: Vec<f64>,
    pub h_max: f64,
    /// Horizon for the extrapolated-level diagnostic.
    pub horizon: f64,
}

impl Default for SlowestUniformConfig {
    fn default() -> Self {
        Self {
            widths: vec![20.0, 30.0, 40.0, 50.0, 60.0, 70.0],
            irs: vec![20.0, 30.0, 40.0, 50.0],
            h_max: 0.25,
            horizon: 80.0,
        }
    }
}

/// Where the mid-impact point of the midpoint family is centred.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MidpointOrigin {
    /// Centre of `[t_start, t_end]`.
    #[default]
    TStart,
    /// Centre of `[0, t_end]`.
    Zero,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MidpointConfig {
    pub widths: Vec<f64>,
    pub irs: Vec<f64>,
    pub build_up: f64,
    pub h_max: f64,
    pub t_end: f64,
    pub origin: MidpointOrigin,
}

impl Default for MidpointConfig {
    fn default() -> Self {
        Self {
            widths: vec![1.0, 10.0, 20.0, 30.0, 40.0, 50.0, 60.0, 70.0],
            irs: vec![20.0, 30.0, 40.0, 50.0],
            build_up: 0.05,
            h_max: 0.25,
            t_end: 80.0,
            origin: MidpointOrigin::TStart,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TransitionConfig {
    pub midpoints: Vec<f64>,
    pub widths: Vec<f64>,
    pub irs: f64,
    pub build_up: f64,
    pub h_max: f64,
    pub t_end: f64,
}

impl Default for TransitionConfig {
    fn default() -> Self {
        Self {
            midpoints: vec![15.0, 25.0, 35.0, 45.0, 55.0, 65.0, 75.0],
            widths: vec![1.0, 5.0, 10.0],
            irs: 30.0,
            build_up: 0.05,
            h_max: 0.25,
            t_end: 80.0,
        }
    }
}

/// Extra per-cell columns. Which fields are populated depends on the family.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    /// Endpoint hazard over width, bp per year.
    pub cds_slope_bps_per_year: Option<f64>,
    /// Ramp extended linearly (uncapped) to the horizon, bp.
    pub level_at_horizon_bps: Option<f64>,
    /// Conditional survival change across the transition window, %.
    pub survival_change_pct: Option<f64>,
    /// Survival change across the window, stressed minus flat curve, in
    /// percentage points of unconditional probability.
    pub window_survival_change_pct: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CellResult {
    pub report: XvaReport,
    pub diagnostics: Diagnostics,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Cell {
    pub row: f64,
    pub col: f64,
    pub outcome: std::result::Result<CellResult, String>,
}

/// Row-major grid of cell results.
#[derive(Clone, Debug, PartialEq)]
pub struct ResultGrid {
    pub family: ScenarioFamily,
    pub row_label: &'static str,
    pub col_label: &'static str,
    pub rows: Vec<f64>,
    pub cols: Vec<f64>,
    pub cells: Vec<Cell>,
}

impl ResultGrid {
    pub fn cell(&self, row: usize, col: usize) -> &Cell {
        &self.cells[row * self.cols.len() + col]
    }

    pub fn find(&self, row: f64, col: f64) -> Option<&Cell> {
        self.cells.iter().find(|c| c.row == row && c.col == col)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Cell> {
        self.cells.iter().filter(|c| c.outcome.is_err())
    }
}

/// `100 (S(t2)/S(t1) - 1)`.
pub fn survival_change_over_window(h: &HazardCurve, t1: f64, t2: f64) -> Result<f64> {
    if !(t1 < t2) {
        return Err(Error::InvalidScenario(format!("window [{t1}, {t2}] is empty")));
    }
    Ok(100.0 * (h.survival(t2) / h.survival(t1) - 1.0))
}

/// Change in survival probability over `[t1, t2]` on the stressed curve in
/// excess of the change on the reference curve, in percentage points.
pub fn excess_survival_change_over_window(
    stressed: &HazardCurve,
    reference: &HazardCurve,
    t1: f64,
    t2: f64,
) -> Result<f64> {
    if !(t1 < t2) {
        return Err(Error::InvalidScenario(format!("window [{t1}, {t2}] is empty")));
    }
    let drop = |h: &HazardCurve| h.survival(t2) - h.survival(t1);
    Ok(100.0 * (drop(stressed) - drop(reference)))
}

fn check_axis(name: &str, axis: &[f64]) -> Result<()> {
    if axis.is_empty() {
        return Err(Error::InvalidScenario(format!("{name} axis is empty")));
    }
    if axis.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidScenario(format!("{name} axis has non-finite values")));
    }
    if axis.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidScenario(format!("{name} axis must be strictly increasing")));
    }
    Ok(())
}

fn run_cells<F>(rows: &[f64], cols: &[f64], workers: Option<usize>, eval: F) -> Result<Vec<Cell>>
where
    F: Fn(f64, f64) -> Result<CellResult> + Sync,
{
    let indices: Vec<(f64, f64)> = rows.iter().flat_map(|&r| cols.iter().map(move |&c| (r, c))).collect();
    let compute = || {
        indices
            .par_iter()
            .map(|&(row, col)| Cell { row, col, outcome: eval(row, col).map_err(|e| e.to_string()) })
            .collect()
    };
    match workers {
        None => Ok(compute()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| Error::InvalidScenario(format!("cannot start worker pool: {e}")))?;
            Ok(pool.install(compute))
        }
    }
}

pub fn run_slowest_uniform(gm: &GridMarket, cfg: &SlowestUniformConfig, workers: Option<usize>) -> Result<ResultGrid> {
    check_axis("width", &cfg.widths)?;
    check_axis("IRS maturity", &cfg.irs)?;
    gm.quote.validate()?;
    let h_start = gm.h_start()?;
    let t_start = gm.quote.maturity;

    let cells = run_cells(&cfg.widths, &cfg.irs, workers, |width, irs| {
        let ramp = sigmoid::slowest_uniform_curve(t_start, h_start, t_start + width, cfg.h_max)?;
        let stressed = cds::attach_stress_segment(&gm.quote, &ramp)?;
        let report = ccva_report_for_curve(&gm.quote, &stressed, &gm.swap(irs), &gm.market)?;
        let diagnostics = Diagnostics {
            cds_slope_bps_per_year: Some(1e4 * cfg.h_max / width),
            level_at_horizon_bps: Some(1e4 * (h_start + (cfg.h_max - h_start) * (cfg.horizon - t_start) / width)),
            ..Diagnostics::default()
        };
        Ok(CellResult { report, diagnostics })
    })?;
    Ok(ResultGrid {
        family: ScenarioFamily::SlowestUniform,
        row_label: "width_years",
        col_label: "irs_years",
        rows: cfg.widths.clone(),
        cols: cfg.irs.clone(),
        cells,
    })
}

pub fn midpoint_params(gm: &GridMarket, cfg: &MidpointConfig, width: f64) -> Result<SigmoidParams> {
    let t_start = gm.quote.maturity;
    let mid = match cfg.origin {
        MidpointOrigin::TStart => 0.5 * (t_start + cfg.t_end),
        MidpointOrigin::Zero => 0.5 * cfg.t_end,
    };
    Ok(SigmoidParams {
        transient: false,
        t_start,
        h_start: gm.h_start()?,
        mid,
        width,
        build_up: cfg.build_up,
        t_end: cfg.t_end,
        h_max: cfg.h_max,
    })
}

pub fn run_midpoint(gm: &GridMarket, cfg: &MidpointConfig, workers: Option<usize>) -> Result<ResultGrid> {
    check_axis("width", &cfg.widths)?;
    check_axis("IRS maturity", &cfg.irs)?;
    gm.quote.validate()?;

    let cells = run_cells(&cfg.widths, &cfg.irs, workers, |width, irs| {
        let p = midpoint_params(gm, cfg, width)?;
        let stressed = cds::extend_curve_p(&gm.quote, &p)?;
        let report = ccva_report_for_curve(&gm.quote, &stressed, &gm.swap(irs), &gm.market)?;
        Ok(CellResult { report, diagnostics: Diagnostics::default() })
    })?;
    Ok(ResultGrid {
        family: ScenarioFamily::Midpoint,
        row_label: "width_years",
        col_label: "irs_years",
        rows: cfg.widths.clone(),
        cols: cfg.irs.clone(),
        cells,
    })
}

pub fn transition_params(gm: &GridMarket, cfg: &TransitionConfig, mid: f64, width: f64) -> Result<SigmoidParams> {
    Ok(SigmoidParams {
        transient: true,
        t_start: gm.quote.maturity,
        h_start: gm.h_start()?,
        mid,
        width,
        build_up: cfg.build_up,
        t_end: cfg.t_end,
        h_max: cfg.h_max,
    })
}

pub fn run_transition(gm: &GridMarket, cfg: &TransitionConfig, workers: Option<usize>) -> Result<ResultGrid> {
    check_axis("midpoint", &cfg.midpoints)?;
    check_axis("width", &cfg.widths)?;
    gm.quote.validate()?;
    if let Some(&m) = cfg.midpoints.iter().find(|&&m| m <= gm.quote.maturity) {
        return Err(Error::InvalidScenario(format!(
            "transition midpoint {m} must lie beyond the last traded CDS maturity {}",
            gm.quote.maturity
        )));
    }
    let xi = cds::extend_curve_xi(&gm.quote)?;

    let cells = run_cells(&cfg.widths, &cfg.midpoints, workers, |width, mid| {
        let p = transition_params(gm, cfg, mid, width)?;
        let stressed = cds::extend_curve_p(&gm.quote, &p)?;
        let report = ccva_report_for_curve(&gm.quote, &stressed, &gm.swap(cfg.irs), &gm.market)?;
        let (t1, t2) = (mid - 0.5 * width, mid + 0.5 * width);
        let diagnostics = if width > 0.0 {
            Diagnostics {
                survival_change_pct: Some(survival_change_over_window(&stressed, t1, t2)?),
                window_survival_change_pct: Some(excess_survival_change_over_window(&stressed, &xi, t1, t2)?),
                ..Diagnostics::default()
            }
        } else {
            Diagnostics::default()
        };
        Ok(CellResult { report, diagnostics })
    })?;
    Ok(ResultGrid {
        family: ScenarioFamily::Transition,
        row_label: "width_years",
        col_label: "midpoint_years",
        rows: cfg.widths.clone(),
        cols: cfg.midpoints.clone(),
        cells,
    })
}
