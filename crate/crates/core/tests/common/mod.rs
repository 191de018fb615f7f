//! Brute-force oracles shared by the integration tests. Nothing here calls
//! into the library's integration or interpolation code.

#![allow(dead_code)]

/// Piecewise-linear hazard given as strictly increasing nodes, flat outside.
pub fn hazard(nodes: &[(f64, f64)], t: f64) -> f64 {
    if t <= nodes[0].0 {
        return nodes[0].1;
    }
    for w in nodes.windows(2) {
        let ((t0, h0), (t1, h1)) = (w[0], w[1]);
        if t <= t1 {
            return h0 + (h1 - h0) * (t - t0) / (t1 - t0);
        }
    }
    nodes[nodes.len() - 1].1
}

/// Midpoint rule over `[a, b]` with cell edges forced onto `breaks`, about
/// `steps` cells in total.
pub fn midpoint<F: FnMut(f64, f64)>(a: f64, b: f64, breaks: &[f64], steps: usize, mut visit: F) {
    let mut edges = vec![a];
    edges.extend(breaks.iter().copied().filter(|&x| x > a && x < b));
    edges.push(b);
    edges.sort_by(f64::total_cmp);
    edges.dedup();
    for w in edges.windows(2) {
        let n = ((w[1] - w[0]) / (b - a) * steps as f64).ceil().max(1.0) as usize;
        let h = (w[1] - w[0]) / n as f64;
        for i in 0..n {
            visit(w[0] + (i as f64 + 0.5) * h, h);
        }
    }
}

pub fn cumulative_hazard(nodes: &[(f64, f64)], t: f64, steps: usize) -> f64 {
    let breaks: Vec<f64> = nodes.iter().map(|n| n.0).collect();
    let mut acc = 0.0;
    midpoint(0.0, t, &breaks, steps, |x, h| acc += hazard(nodes, x) * h);
    acc
}

pub fn annuity(rate: f64, t: f64, maturity: usize) -> f64 {
    (1..=maturity)
        .map(|k| k as f64)
        .filter(|&k| k > t)
        .map(|k| (-rate * (k - t)).exp())
        .sum()
}

/// ATM swap EPE, annual payments, unit notional.
pub fn epe(rate: f64, vol: f64, t: f64, maturity: usize) -> f64 {
    if t <= 0.0 || t >= maturity as f64 {
        return 0.0;
    }
    annuity(rate, t, maturity) * vol * t.sqrt() / (2.0 * std::f64::consts::PI).sqrt()
}

pub struct XvaOracle {
    pub cva: f64,
    pub fva: f64,
}

/// Dense midpoint sums for CVA and FCA-mode FVA. Survival is accumulated
/// cell by cell alongside the integrals.
pub fn xva(nodes: &[(f64, f64)], rate: f64, vol: f64, maturity: usize, lgd: f64, funding: f64, steps: usize) -> XvaOracle {
    let mut breaks: Vec<f64> = nodes.iter().map(|n| n.0).collect();
    breaks.extend((1..maturity).map(|k| k as f64));
    let (mut cva, mut fva) = (0.0, 0.0);
    let mut lambda_left = 0.0;
    midpoint(0.0, maturity as f64, &breaks, steps, |u, h| {
        let lam = hazard(nodes, u);
        let s_mid = (-(lambda_left + 0.5 * lam * h)).exp();
        let w = (-rate * u).exp() * epe(rate, vol, u, maturity) * h;
        cva += lgd * lam * s_mid * w;
        fva += funding * s_mid * w;
        lambda_left += lam * h;
    });
    XvaOracle { cva, fva }
}

/// Continuous-convention par spread by dense midpoint sums.
pub fn par_spread(nodes: &[(f64, f64)], rate: f64, maturity: f64, recovery: f64, steps: usize) -> f64 {
    let breaks: Vec<f64> = nodes.iter().map(|n| n.0).collect();
    let (mut prot, mut ann, mut lambda_left) = (0.0, 0.0, 0.0);
    midpoint(0.0, maturity, &breaks, steps, |u, h| {
        let lam = hazard(nodes, u);
        let s_mid = (-(lambda_left + 0.5 * lam * h)).exp();
        let d = (-rate * u).exp();
        prot += d * lam * s_mid * h;
        ann += d * s_mid * h;
        lambda_left += lam * h;
    });
    (1.0 - recovery) * prot / ann
}
