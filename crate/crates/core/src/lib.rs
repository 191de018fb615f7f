//! Climate change valuation adjustment (CCVA) analytics.
//!
//! CVA and FVA are priced twice: once on the market-practice hazard curve
//! (traded CDS level extrapolated flat) and once on a curve whose
//! post-traded segment follows a parameterized climate stress path. The
//! differences are CD.CVA, CD.FVA and their sum, CCVA.
//!
//! Module map:
//!
//! - [`termstructures`]: flat discount curve, piecewise-linear hazard curve
//! - [`sigmoid`]: endpoint and transient stress paths
//! - [`cds`]: par spreads, flat bootstrap, flat vs. stressed extension
//! - [`exposure`]: analytic ATM swap exposure under normal vol
//! - [`xva`]: CVA/FVA integrals and the CCVA report
//! - [`scenarios`]: experiment grids
//! - [`cli`]: config schema and CSV output for the `ccva` binary

pub mod cds;
pub mod cli;
pub mod error;
pub mod exposure;
pub mod quadrature;
pub mod scenarios;
pub mod sigmoid;
pub mod termstructures;
pub mod xva;

pub use cds::{CdsQuote, ExtrapolationPolicy};
pub use error::{Error, Result};
pub use exposure::{ExposureProfile, SwapSpec};
pub use scenarios::{ResultGrid, ScenarioFamily};
pub use sigmoid::{SigmoidCurve, SigmoidParams};
pub use termstructures::{DiscountCurve, HazardCurve, SurvivalFn};
pub use xva::{FvaMode, MarketConfig, XvaReport};
