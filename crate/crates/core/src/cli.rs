//! Run configuration and CSV output for the `ccva` command-line tool.
//!
//! Config files are TOML. Every key is optional; defaults reproduce the
//! standard set-up (10y CDS flat at 100bp, 40% recovery, 2% flat discount
//! rate, 20bp normal vol, 100bp funding spread, ATM annual swaps).

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::cds::{self, par_spread, CdsQuote};
use crate::scenarios::{
    self, GridMarket, MidpointConfig, ResultGrid, ScenarioFamily, SlowestUniformConfig, TransitionConfig,
};
use crate::sigmoid::{self, SigmoidParams};
use crate::termstructures::{DiscountCurve, HazardCurve};
use crate::xva::{ccva_report_for_curve, FvaMode, MarketConfig, XvaReport};

/// Environment variable capping the number of grid workers.
pub const WORKERS_ENV: &str = "CCVA_WORKERS";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("compute error: {0}")]
    Compute(String),
    #[error("output error: {0}")]
    Output(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Config(_) => 1,
            Self::Compute(_) | Self::Output(_) => 2,
        }
    }
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        Self::Compute(e.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CdsSection {
    pub maturity: f64,
    pub spread: f64,
    pub recovery: f64,
}

impl Default for CdsSection {
    fn default() -> Self {
        Self { maturity: 10.0, spread: 0.01, recovery: 0.4 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SwapSection {
    /// Swap maturities priced by `report`, years.
    pub maturities: Vec<f64>,
    pub frequency: u32,
    pub notional: f64,
}

impl Default for SwapSection {
    fn default() -> Self {
        Self { maturities: vec![20.0, 30.0, 40.0, 50.0], frequency: 1, notional: 1.0 }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StressShape {
    #[default]
    Sigmoid,
    /// Straight line from the last traded maturity to `(t_end, h_max)`.
    SlowestUniform,
}

/// Stress path used by `report` and `curves`. `t_start` is always the CDS
/// maturity; `h_start` defaults to the bootstrapped flat hazard.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StressSection {
    pub shape: StressShape,
    pub transient: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h_start: Option<f64>,
    pub mid: f64,
    pub width: f64,
    pub build_up: f64,
    pub t_end: f64,
    pub h_max: f64,
}

impl Default for StressSection {
    fn default() -> Self {
        Self {
            shape: StressShape::Sigmoid,
            transient: false,
            h_start: None,
            mid: 40.0,
            width: 20.0,
            build_up: 0.10,
            t_end: 80.0,
            h_max: 0.25,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CurvesSection {
    pub step: f64,
    pub horizon: f64,
}

impl Default for CurvesSection {
    fn default() -> Self {
        Self { step: 1.0, horizon: 80.0 }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<ScenarioFamily>,
    pub slowest_uniform: SlowestUniformConfig,
    pub midpoint: MidpointConfig,
    pub transition: TransitionConfig,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub as_of: String,
    pub discount_rate: f64,
    pub normal_vol: f64,
    pub funding_spread: f64,
    pub fva_mode: FvaMode,
    pub grid_step: f64,
    pub cds: CdsSection,
    pub swap: SwapSection,
    pub stress: StressSection,
    pub curves: CurvesSection,
    pub grid: GridSection,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            as_of: "2020-01-29".into(),
            discount_rate: 0.02,
            normal_vol: 0.0020,
            funding_spread: 0.0100,
            fva_mode: FvaMode::Fca,
            grid_step: 0.25,
            cds: CdsSection::default(),
            swap: SwapSection::default(),
            stress: StressSection::default(),
            curves: CurvesSection::default(),
            grid: GridSection::default(),
        }
    }
}

fn field_err(field: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("field `{field}`: {msg}"))
}

fn check_rate(field: &str, v: f64, allow_negative: bool) -> Result<(), CliError> {
    if !v.is_finite() || v.abs() >= 1.0 {
        return Err(field_err(field, format!("{v} is not a finite rate below 1 per year in magnitude")));
    }
    if !allow_negative && v < 0.0 {
        return Err(field_err(field, format!("{v} must be non-negative")));
    }
    Ok(())
}

fn check_positive(field: &str, v: f64) -> Result<(), CliError> {
    if !(v.is_finite() && v > 0.0) {
        return Err(field_err(field, format!("{v} must be positive")));
    }
    Ok(())
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string().trim_end().to_owned()))
    }

    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else { return Ok(Self::default()) };
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text).map_err(|e| match e {
            CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("run config always serializes")
    }

    pub fn validate(&self) -> Result<(), CliError> {
        check_rate("discount_rate", self.discount_rate, true)?;
        check_rate("normal_vol", self.normal_vol, false)?;
        check_rate("funding_spread", self.funding_spread, false)?;
        check_positive("grid_step", self.grid_step)?;

        check_positive("cds.maturity", self.cds.maturity)?;
        check_rate("cds.spread", self.cds.spread, false)?;
        if !(0.0..1.0).contains(&self.cds.recovery) {
            return Err(field_err("cds.recovery", format!("{} outside [0, 1)", self.cds.recovery)));
        }

        if self.swap.maturities.is_empty() {
            return Err(field_err("swap.maturities", "at least one maturity is required"));
        }
        for &m in &self.swap.maturities {
            check_positive("swap.maturities", m)?;
        }
        if self.swap.frequency == 0 {
            return Err(field_err("swap.frequency", "must be at least 1"));
        }
        check_positive("swap.notional", self.swap.notional)?;

        if let Some(h) = self.stress.h_start {
            check_rate("stress.h_start", h, false)?;
        }
        check_rate("stress.h_max", self.stress.h_max, false)?;
        check_rate("stress.build_up", self.stress.build_up, false)?;
        check_positive("stress.t_end", self.stress.t_end)?;
        if !self.stress.mid.is_finite() {
            return Err(field_err("stress.mid", "must be finite"));
        }
        if !(self.stress.width.is_finite() && self.stress.width >= 0.0) {
            return Err(field_err("stress.width", "must be non-negative"));
        }

        check_positive("curves.step", self.curves.step)?;
        check_positive("curves.horizon", self.curves.horizon)?;

        check_rate("grid.slowest_uniform.h_max", self.grid.slowest_uniform.h_max, false)?;
        check_rate("grid.midpoint.h_max", self.grid.midpoint.h_max, false)?;
        check_rate("grid.midpoint.build_up", self.grid.midpoint.build_up, false)?;
        check_rate("grid.transition.h_max", self.grid.transition.h_max, false)?;
        check_rate("grid.transition.build_up", self.grid.transition.build_up, false)?;
        check_positive("grid.transition.irs", self.grid.transition.irs)?;
        Ok(())
    }

    pub fn quote(&self) -> CdsQuote {
        CdsQuote { maturity: self.cds.maturity, spread: self.cds.spread, recovery: self.cds.recovery }
    }

    pub fn market(&self) -> MarketConfig {
        MarketConfig {
            discount: DiscountCurve::flat(self.discount_rate),
            normal_vol: self.normal_vol,
            funding_spread: self.funding_spread,
            grid_step: self.grid_step,
            fva_mode: self.fva_mode,
        }
    }

    pub fn grid_market(&self) -> GridMarket {
        GridMarket {
            quote: self.quote(),
            market: self.market(),
            notional: self.swap.notional,
            frequency: self.swap.frequency,
            h_start: self.stress.h_start,
        }
    }

    pub fn sigmoid_params(&self) -> Result<SigmoidParams, CliError> {
        let q = self.quote();
        let h_start = match self.stress.h_start {
            Some(h) => h,
            None => q.flat_hazard()?,
        };
        Ok(SigmoidParams {
            transient: self.stress.transient,
            t_start: q.maturity,
            h_start,
            mid: self.stress.mid,
            width: self.stress.width,
            build_up: self.stress.build_up,
            t_end: self.stress.t_end,
            h_max: self.stress.h_max,
        })
    }

    /// Climate-stressed hazard curve selected by the `[stress]` section.
    pub fn stressed_curve(&self) -> Result<HazardCurve, CliError> {
        let q = self.quote();
        let p = self.sigmoid_params()?;
        let curve = match self.stress.shape {
            StressShape::Sigmoid => cds::extend_curve_p(&q, &p)?,
            StressShape::SlowestUniform => {
                let ramp = sigmoid::slowest_uniform_curve(p.t_start, p.h_start, p.t_end, p.h_max)?;
                cds::attach_stress_segment(&q, &ramp)?
            }
        };
        Ok(curve)
    }
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}

fn fmt_opt(v: Option<f64>, decimals: usize) -> String {
    match v {
        Some(x) => format!("{x:.decimals$}"),
        None => "NA".to_owned(),
    }
}

pub const REPORT_HEADER: &str =
    "irs_years,cva_mp,fva_mp,cva_cc,fva_cc,cd_cva,cd_fva,ccva,cd_cva_pct,cd_fva_pct,ccva_pct";

pub fn report_csv(rows: &[(f64, XvaReport)]) -> String {
    let mut out = String::from(REPORT_HEADER);
    out.push('\n');
    for (irs, r) in rows {
        let _ = writeln!(
            out,
            "{irs:.2},{:.12},{:.12},{:.12},{:.12},{:.12},{:.12},{:.12},{},{},{}",
            r.cva_mp,
            r.fva_mp,
            r.cva_cc,
            r.fva_cc,
            r.cd_cva,
            r.cd_fva,
            r.ccva,
            fmt_opt(r.cd_cva_pct, 1),
            fmt_opt(r.cd_fva_pct, 1),
            fmt_opt(r.ccva_pct, 1),
        );
    }
    out
}

pub fn grid_header(family: ScenarioFamily) -> &'static str {
    match family {
        ScenarioFamily::SlowestUniform => {
            "width_years,irs_years,cds_slope_bps_per_year,level_at_horizon_bps,cva_change_pct,fva_change_pct,cva_fva_change_pct,status"
        }
        ScenarioFamily::Midpoint => "width_years,irs_years,cva_change_pct,fva_change_pct,cva_fva_change_pct,status",
        ScenarioFamily::Transition => {
            "width_years,midpoint_years,cva_change_pct,fva_change_pct,cva_fva_change_pct,survival_change_pct,window_survival_change_pct,status"
        }
    }
}

pub fn grid_csv(grid: &ResultGrid) -> String {
    let mut out = String::from(grid_header(grid.family));
    out.push('\n');
    for cell in &grid.cells {
        let mut fields = vec![format!("{:.2}", cell.row), format!("{:.2}", cell.col)];
        let (values, status): (Vec<String>, String) = match &cell.outcome {
            Ok(res) => {
                let r = &res.report;
                let d = &res.diagnostics;
                let mut v = Vec::new();
                if grid.family == ScenarioFamily::SlowestUniform {
                    v.push(fmt_opt(d.cds_slope_bps_per_year, 1));
                    v.push(fmt_opt(d.level_at_horizon_bps, 1));
                }
                v.push(fmt_opt(r.cd_cva_pct, 1));
                v.push(fmt_opt(r.cd_fva_pct, 1));
                v.push(fmt_opt(r.ccva_pct, 1));
                if grid.family == ScenarioFamily::Transition {
                    v.push(fmt_opt(d.survival_change_pct, 1));
                    v.push(fmt_opt(d.window_survival_change_pct, 1));
                }
                (v, "ok".to_owned())
            }
            Err(msg) => {
                let n = grid_header(grid.family).split(',').count() - 3;
                (vec![String::new(); n], csv_escape(&format!("error: {msg}")))
            }
        };
        fields.extend(values);
        fields.push(status);
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

pub const CURVES_HEADER: &str =
    "t_years,hazard_xi_bps,hazard_p_bps,survival_xi_pct,survival_p_pct,par_spread_xi_bps,par_spread_p_bps";

/// Hazard, survival and par spread for both curves at `step, 2 step, ..`
/// up to `horizon`.
pub fn curves_csv(cfg: &RunConfig) -> Result<String, CliError> {
    let q = cfg.quote();
    let xi = cds::extend_curve_xi(&q)?;
    let p = cfg.stressed_curve()?;
    let d = DiscountCurve::flat(cfg.discount_rate);
    let mut out = String::from(CURVES_HEADER);
    out.push('\n');
    let n = (cfg.curves.horizon / cfg.curves.step + 1e-9).floor() as usize;
    for i in 1..=n {
        let t = i as f64 * cfg.curves.step;
        let _ = writeln!(
            out,
            "{t:.2},{:.4},{:.4},{:.4},{:.4},{:.4},{:.4}",
            1e4 * xi.hazard_at(t),
            1e4 * p.hazard_at(t),
            100.0 * xi.survival(t),
            100.0 * p.survival(t),
            1e4 * par_spread(&xi, &d, t, q.recovery)?,
            1e4 * par_spread(&p, &d, t, q.recovery)?,
        );
    }
    Ok(out)
}

pub fn run_report(cfg: &RunConfig) -> Result<Vec<(f64, XvaReport)>, CliError> {
    let q = cfg.quote();
    let stressed = cfg.stressed_curve()?;
    let gm = cfg.grid_market();
    cfg.swap
        .maturities
        .iter()
        .map(|&m| {
            let spec = crate::exposure::SwapSpec {
                maturity: m,
                frequency: gm.frequency,
                notional: gm.notional,
                atm: true,
            };
            ccva_report_for_curve(&q, &stressed, &spec, &gm.market)
                .map(|r| (m, r))
                .map_err(|e| CliError::Compute(format!("swap maturity {m}: {e}")))
        })
        .collect()
}

pub fn run_grid(cfg: &RunConfig, family: ScenarioFamily, workers: Option<usize>) -> Result<ResultGrid, CliError> {
    let gm = cfg.grid_market();
    let grid = match family {
        ScenarioFamily::SlowestUniform => scenarios::run_slowest_uniform(&gm, &cfg.grid.slowest_uniform, workers),
        ScenarioFamily::Midpoint => scenarios::run_midpoint(&gm, &cfg.grid.midpoint, workers),
        ScenarioFamily::Transition => scenarios::run_transition(&gm, &cfg.grid.transition, workers),
    };
    grid.map_err(|e| match e {
        crate::Error::InvalidScenario(msg) => CliError::Config(format!("grid.{}: {msg}", family.name())),
        other => other.into(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subcommand {
    Report,
    Grid(Option<ScenarioFamily>),
    Curves,
}

/// Command-line overrides applied on top of the config file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub fva_mode: Option<FvaMode>,
    pub grid_step: Option<f64>,
    pub workers: Option<usize>,
}

#[derive(Serialize)]
struct RunMeta<'a> {
    tool: &'static str,
    version: &'static str,
    subcommand: &'a str,
    outputs: Vec<String>,
    unix_time: u64,
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::Output(format!("cannot write {}: {e}", path.display())))
}

/// Runs one subcommand, writing data files, the resolved config and a
/// metadata sidecar into `out_dir`. Returns the data files written.
///
/// Data files depend only on the resolved config; the sidecar carries the
/// wall-clock time and is kept apart so data stays byte-identical.
pub fn execute(
    cmd: Subcommand,
    mut cfg: RunConfig,
    overrides: &Overrides,
    out_dir: &Path,
) -> Result<Vec<PathBuf>, CliError> {
    if let Some(mode) = overrides.fva_mode {
        cfg.fva_mode = mode;
    }
    if let Some(step) = overrides.grid_step {
        cfg.grid_step = step;
    }
    if let Subcommand::Grid(Some(f)) = cmd {
        cfg.grid.family = Some(f);
    }
    cfg.validate()?;
    fs::create_dir_all(out_dir)
        .map_err(|e| CliError::Output(format!("cannot create {}: {e}", out_dir.display())))?;

    let (name, data_file, contents, failure) = match cmd {
        Subcommand::Report => ("report", "report.csv".to_owned(), report_csv(&run_report(&cfg)?), None),
        Subcommand::Curves => ("curves", "curves.csv".to_owned(), curves_csv(&cfg)?, None),
        Subcommand::Grid(_) => {
            let family = cfg.grid.family.unwrap_or(ScenarioFamily::SlowestUniform);
            cfg.grid.family = Some(family);
            let grid = run_grid(&cfg, family, overrides.workers)?;
            let failed: Vec<String> = grid
                .failures()
                .map(|c| {
                    format!(
                        "{}={} {}={}: {}",
                        grid.row_label,
                        c.row,
                        grid.col_label,
                        c.col,
                        c.outcome.as_ref().unwrap_err()
                    )
                })
                .collect();
            let failure = (!failed.is_empty()).then(|| failed.join("; "));
            ("grid", format!("grid_{}.csv", family.name()), grid_csv(&grid), failure)
        }
    };

    let data_path = out_dir.join(&data_file);
    write_file(&data_path, &contents)?;
    write_file(&out_dir.join("resolved_config.toml"), &cfg.to_toml())?;
    let meta = RunMeta {
        tool: "ccva",
        version: env!("CARGO_PKG_VERSION"),
        subcommand: name,
        outputs: vec![data_file, "resolved_config.toml".to_owned()],
        unix_time: std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
    };
    write_file(&out_dir.join("run_meta.toml"), &toml::to_string(&meta).expect("metadata serializes"))?;

    match failure {
        Some(msg) => Err(CliError::Compute(format!("failed cells: {msg}"))),
        None => Ok(vec![data_path]),
    }
}

/// Worker cap from [`WORKERS_ENV`], if set to a positive integer.
pub fn workers_from_env() -> Result<Option<usize>, CliError> {
    match std::env::var(WORKERS_ENV) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::Config(format!("{WORKERS_ENV}={v} is not a positive integer"))),
        },
    }
}
