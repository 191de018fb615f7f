//! Deterministic discounting and piecewise-linear hazard rate curves.
//!
//! Time is measured in real-valued years from the as-of date.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Flat continuously-compounded discount curve, `D(t) = exp(-r t)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscountCurve {
    flat_rate: f64,
}

impl DiscountCurve {
    pub fn flat(rate: f64) -> Self {
        Self { flat_rate: rate }
    }

    pub fn rate(&self) -> f64 {
        self.flat_rate
    }

    pub fn discount(&self, t: f64) -> f64 {
        (-self.flat_rate * t).exp()
    }
}

impl Default for DiscountCurve {
    fn default() -> Self {
        Self::flat(0.02)
    }
}

/// Instantaneous hazard rate `λ(t)`, linear between nodes and flat outside
/// them.
///
/// Node times are non-decreasing. Two nodes sharing a time encode a jump;
/// the curve is right-continuous there, so `hazard_at` returns the later
/// node's value. Cumulative hazard is integrated exactly segment by segment.
#[derive(Clone, Debug, PartialEq)]
pub struct HazardCurve {
    times: Vec<f64>,
    hazards: Vec<f64>,
    // Λ at each node time
    cumulative: Vec<f64>,
}

impl HazardCurve {
    pub fn new(nodes: Vec<(f64, f64)>) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::InvalidCurve("no nodes".into()));
        }
        let mut times = Vec::with_capacity(nodes.len());
        let mut hazards = Vec::with_capacity(nodes.len());
        for (i, &(t, h)) in nodes.iter().enumerate() {
            if !t.is_finite() || !h.is_finite() {
                return Err(Error::InvalidCurve(format!("node {i} is not finite: ({t}, {h})")));
            }
            if t < 0.0 {
                return Err(Error::InvalidCurve(format!("node {i} has negative time {t}")));
            }
            if h < 0.0 {
                return Err(Error::InvalidCurve(format!("node {i} has negative hazard {h}")));
            }
            if let Some(&prev) = times.last() {
                if t < prev {
                    return Err(Error::InvalidCurve(format!(
                        "node times must be non-decreasing: {t} follows {prev}"
                    )));
                }
                if t == prev && h == *hazards.last().unwrap() {
                    continue;
                }
            }
            times.push(t);
            hazards.push(h);
        }

        let mut cumulative = Vec::with_capacity(times.len());
        cumulative.push(hazards[0] * times[0]);
        for i in 1..times.len() {
            let dt = times[i] - times[i - 1];
            cumulative.push(cumulative[i - 1] + 0.5 * dt * (hazards[i - 1] + hazards[i]));
        }
        Ok(Self { times, hazards, cumulative })
    }

    pub fn flat(hazard: f64) -> Result<Self> {
        Self::new(vec![(0.0, hazard)])
    }

    pub fn nodes(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.times.iter().copied().zip(self.hazards.iter().copied())
    }

    /// Node times, useful as quadrature break points.
    pub fn node_times(&self) -> &[f64] {
        &self.times
    }

    // index of the last node with time <= t, or None before the first node
    fn locate(&self, t: f64) -> Option<usize> {
        self.times.partition_point(|&x| x <= t).checked_sub(1)
    }

    pub fn hazard_at(&self, t: f64) -> f64 {
        match self.locate(t) {
            None => self.hazards[0],
            Some(i) if i + 1 == self.times.len() => self.hazards[i],
            Some(i) => {
                let (t0, t1) = (self.times[i], self.times[i + 1]);
                let (h0, h1) = (self.hazards[i], self.hazards[i + 1]);
                h0 + (t - t0) * (h1 - h0) / (t1 - t0)
            }
        }
    }

    /// `Λ(t) = ∫₀ᵗ λ(s) ds`.
    pub fn cumulative_hazard(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        match self.locate(t) {
            None => self.hazards[0] * t,
            Some(i) => {
                let dt = t - self.times[i];
                self.cumulative[i] + 0.5 * dt * (self.hazards[i] + self.hazard_at(t))
            }
        }
    }

    pub fn survival(&self, t: f64) -> f64 {
        (-self.cumulative_hazard(t)).exp()
    }

    pub fn survival_fn(&self) -> SurvivalFn<'_> {
        SurvivalFn { curve: self }
    }
}

/// Survival view over a hazard curve: `S(t)` and the default density
/// `λ(t) S(t)`.
#[derive(Clone, Copy, Debug)]
pub struct SurvivalFn<'a> {
    curve: &'a HazardCurve,
}

impl SurvivalFn<'_> {
    pub fn survival(&self, t: f64) -> f64 {
        self.curve.survival(t)
    }

    pub fn default_density(&self, t: f64) -> f64 {
        self.curve.hazard_at(t) * self.curve.survival(t)
    }
}
