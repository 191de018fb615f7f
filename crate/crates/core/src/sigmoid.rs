//! Piecewise-linear "sigmoid" stress paths for the physical-measure hazard
//! segment that follows the last traded CDS maturity.
//!
//! A path is described by `S(transient, (t_start, h_start); m, w; u, (t_end, h_max))`:
//!
//! | point | endpoint variant                 | transient variant                |
//! |-------|----------------------------------|----------------------------------|
//! | 1     | `(t_start, h_start)`             | `(t_start, h_start)`             |
//! | 2     | `(m - w/2, h_start + u Δ)`       | `(m - w/2, h_start + u Δ)`       |
//! | 5     | —                                | `(m, h_max)`                     |
//! | 3     | `(m + w/2, h_max - u Δ)`         | `(m + w/2, h_start + u Δ)`       |
//! | 4     | `(t_end, h_max)`                 | `(t_end, h_start)`               |
//!
//! with `Δ = h_max - h_start`. In the endpoint variant point 3 is dropped
//! whenever the final section would be steeper than the middle one, so the
//! path never jumps at its end.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::termstructures::HazardCurve;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SigmoidParams {
    pub transient: bool,
    pub t_start: f64,
    pub h_start: f64,
    /// Time to mid-impact, years.
    pub mid: f64,
    /// Width of the middle section, years.
    pub width: f64,
    /// Build-up fraction `u` of the total impact, in `[0, 0.5)`.
    pub build_up: f64,
    pub t_end: f64,
    pub h_max: f64,
}

impl SigmoidParams {
    /// The worked example: 10y traded CDS, mid-impact at 40y over 20y, 10%
    /// build-up, 2500bp endpoint at 80y.
    pub fn example(h_start: f64) -> Self {
        Self {
            transient: false,
            t_start: 10.0,
            h_start,
            mid: 40.0,
            width: 20.0,
            build_up: 0.10,
            t_end: 80.0,
            h_max: 0.25,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("t_start", self.t_start),
            ("h_start", self.h_start),
            ("mid", self.mid),
            ("width", self.width),
            ("build_up", self.build_up),
            ("t_end", self.t_end),
            ("h_max", self.h_max),
        ];
        for (name, v) in fields {
            if !v.is_finite() {
                return Err(Error::InvalidSigmoid(format!("{name} is not finite")));
            }
        }
        if self.t_start < 0.0 {
            return Err(Error::InvalidSigmoid(format!("t_start {} is negative", self.t_start)));
        }
        if self.width < 0.0 {
            return Err(Error::InvalidSigmoid(format!("width {} is negative", self.width)));
        }
        if !(0.0..0.5).contains(&self.build_up) {
            return Err(Error::InvalidSigmoid(format!("build-up fraction {} outside [0, 0.5)", self.build_up)));
        }
        if self.h_start < 0.0 || self.h_max < self.h_start {
            return Err(Error::InvalidSigmoid(format!(
                "need 0 <= h_start <= h_max, got h_start {} h_max {}",
                self.h_start, self.h_max
            )));
        }
        let (lo, hi) = (self.mid - 0.5 * self.width, self.mid + 0.5 * self.width);
        if self.t_start >= self.t_end || lo < self.t_start || hi > self.t_end {
            return Err(Error::InvalidSigmoid(format!(
                "middle section [{lo}, {hi}] must lie within [t_start {}, t_end {}]",
                self.t_start, self.t_end
            )));
        }
        Ok(())
    }

    fn shoulder_low(&self) -> f64 {
        self.h_start + self.build_up * (self.h_max - self.h_start)
    }

    fn shoulder_high(&self) -> f64 {
        self.h_max - self.build_up * (self.h_max - self.h_start)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ControlPoint {
    /// Point number in the parameterization (1..=5).
    pub label: u8,
    pub time: f64,
    pub hazard: f64,
}

/// The realized stress path: surviving control points in time order and the
/// hazard curve through them.
#[derive(Clone, Debug)]
pub struct SigmoidCurve {
    points: Vec<ControlPoint>,
    curve: HazardCurve,
}

impl SigmoidCurve {
    fn from_points(points: Vec<ControlPoint>) -> Result<Self> {
        let curve = HazardCurve::new(points.iter().map(|p| (p.time, p.hazard)).collect())?;
        Ok(Self { points, curve })
    }

    pub fn points(&self) -> &[ControlPoint] {
        &self.points
    }

    pub fn curve(&self) -> &HazardCurve {
        &self.curve
    }

    pub fn into_curve(self) -> HazardCurve {
        self.curve
    }
}

fn slope(from: &ControlPoint, to: &ControlPoint) -> f64 {
    let dh = to.hazard - from.hazard;
    let dt = to.time - from.time;
    if dt > 0.0 {
        dh / dt
    } else if dh > 0.0 {
        f64::INFINITY
    } else if dh < 0.0 {
        f64::NEG_INFINITY
    } else {
        0.0
    }
}

pub fn build_endpoint_curve(p: &SigmoidParams) -> Result<SigmoidCurve> {
    if p.transient {
        return Err(Error::InvalidSigmoid("endpoint curve requested with transient flag set".into()));
    }
    p.validate()?;
    let half = 0.5 * p.width;
    let p1 = ControlPoint { label: 1, time: p.t_start, hazard: p.h_start };
    let p2 = ControlPoint { label: 2, time: p.mid - half, hazard: p.shoulder_low() };
    let p3 = ControlPoint { label: 3, time: p.mid + half, hazard: p.shoulder_high() };
    let p4 = ControlPoint { label: 4, time: p.t_end, hazard: p.h_max };

    let points = if slope(&p3, &p4) > slope(&p2, &p3) {
        vec![p1, p2, p4]
    } else {
        vec![p1, p2, p3, p4]
    };
    SigmoidCurve::from_points(points)
}

pub fn build_transient_curve(p: &SigmoidParams) -> Result<SigmoidCurve> {
    if !p.transient {
        return Err(Error::InvalidSigmoid("transient curve requested without transient flag".into()));
    }
    p.validate()?;
    let half = 0.5 * p.width;
    let shoulder = p.shoulder_low();
    SigmoidCurve::from_points(vec![
        ControlPoint { label: 1, time: p.t_start, hazard: p.h_start },
        ControlPoint { label: 2, time: p.mid - half, hazard: shoulder },
        ControlPoint { label: 5, time: p.mid, hazard: p.h_max },
        ControlPoint { label: 3, time: p.mid + half, hazard: shoulder },
        ControlPoint { label: 4, time: p.t_end, hazard: p.h_start },
    ])
}

/// Builds whichever variant the transient flag selects.
pub fn build_curve(p: &SigmoidParams) -> Result<SigmoidCurve> {
    if p.transient {
        build_transient_curve(p)
    } else {
        build_endpoint_curve(p)
    }
}

/// Straight line from `(t_start, h_start)` to `(t_end, h_max)`, flat after.
pub fn slowest_uniform_curve(t_start: f64, h_start: f64, t_end: f64, h_max: f64) -> Result<HazardCurve> {
    if !(t_end > t_start) {
        return Err(Error::InvalidSigmoid(format!("t_end {t_end} must exceed t_start {t_start}")));
    }
    if !(h_max >= h_start) {
        return Err(Error::InvalidSigmoid(format!("h_max {h_max} below h_start {h_start}")));
    }
    HazardCurve::new(vec![(t_start, h_start), (t_end, h_max)])
}
