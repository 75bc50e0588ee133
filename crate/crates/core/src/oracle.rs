//! Brute-force checks: grid-refined utility maximization, sign bracketing
//! and central-difference gradients.

use serde::Serialize;

use crate::error::{check, ModelError, Result};
use crate::static_economy::{PreferenceParams, StaticIncomes};

/// Search box and refinement schedule for the decision variables `(g, s, eta')`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    /// Closed intervals for `g`, `s` and `eta'`; a degenerate interval pins the variable.
    pub bounds: [(f64, f64); 3],
    pub resolution: usize,
    pub refinement_rounds: usize,
}

impl GridSpec {
    pub const DEFAULT_RESOLUTION: usize = 64;
    pub const DEFAULT_ROUNDS: usize = 4;

    pub fn new(
        bounds: [(f64, f64); 3],
        resolution: usize,
        refinement_rounds: usize,
    ) -> Result<Self> {
        let g = Self {
            bounds,
            resolution,
            refinement_rounds,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn with_bounds(bounds: [(f64, f64); 3]) -> Result<Self> {
        Self::new(bounds, Self::DEFAULT_RESOLUTION, Self::DEFAULT_ROUNDS)
    }

    pub fn validate(&self) -> Result<()> {
        check(
            "resolution",
            self.resolution as f64,
            "[16, inf)",
            self.resolution >= 16,
        )?;
        for &(lo, hi) in &self.bounds {
            check("grid lower bound", lo, "finite", true)?;
            check("grid upper bound", hi, "[lower bound, inf)", hi >= lo)?;
        }
        Ok(())
    }
}

/// How inculcation is charged against middle-aged income.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CostKind {
    /// `d * eta'`.
    Proportional,
    /// `d` whenever `eta' > 0`.
    Fixed,
}

/// One middle-aged agent's lifetime problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LifetimeProblem {
    pub y_m: f64,
    /// Inculcation cost scale `d_t`.
    pub cost: f64,
    pub cost_kind: CostKind,
    pub eta_t: f64,
    pub beta: f64,
    pub n: f64,
    pub r_next: f64,
    pub y_e_next: f64,
}

impl LifetimeProblem {
    pub fn inculcation_spend(&self, eta_next: f64) -> f64 {
        match self.cost_kind {
            CostKind::Proportional => self.cost * eta_next,
            CostKind::Fixed if eta_next > 0.0 => self.cost,
            CostKind::Fixed => 0.0,
        }
    }

    pub fn middle_consumption(&self, g: f64, s: f64, eta_next: f64) -> f64 {
        self.y_m - self.inculcation_spend(eta_next) - s - g
    }

    /// Old-age consumption when each future middle-aged agent gives `gift_next`.
    pub fn elderly_consumption(&self, s: f64, gift_next: f64) -> f64 {
        s * self.r_next + (1.0 + self.n) * gift_next + self.y_e_next
    }

    /// Lifetime utility; `-inf` outside the feasible set.
    pub fn utility(&self, g: f64, s: f64, eta_next: f64, continuation: &dyn Fn(f64) -> f64) -> f64 {
        let c_m = self.middle_consumption(g, s, eta_next);
        let c_e = self.elderly_consumption(s, continuation(eta_next));
        if !(c_m > 0.0 && c_e > 0.0 && g >= 0.0 && s >= 0.0 && eta_next >= 0.0) {
            return f64::NEG_INFINITY;
        }
        let glow = if self.eta_t > 0.0 {
            if g <= 0.0 {
                return f64::NEG_INFINITY;
            }
            self.eta_t * g.ln()
        } else {
            0.0
        };
        (1.0 - self.eta_t) * c_m.ln() + glow + self.beta * c_e.ln()
    }

    /// First-order conditions for `g`, `s` and `eta'` under the conjecture
    /// that next period's gift is `eta' * psi_next`.
    pub fn foc_residuals(&self, g: f64, s: f64, eta_next: f64, psi_next: f64) -> [f64; 3] {
        let c_m = self.middle_consumption(g, s, eta_next);
        let c_e = self.elderly_consumption(s, eta_next * psi_next);
        let mu = (1.0 - self.eta_t) / c_m;
        [
            self.eta_t / g - mu,
            self.beta * self.r_next / c_e - mu,
            self.beta * (1.0 + self.n) * psi_next / c_e - mu * self.cost,
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Maximizer {
    pub g: f64,
    pub s: f64,
    pub eta_next: f64,
    pub utility: f64,
    pub evaluations: usize,
    /// Search-box widths at the start of each round.
    pub bracket_widths: Vec<[f64; 3]>,
}

fn axis(lo: f64, hi: f64, resolution: usize) -> Vec<f64> {
    if hi == lo {
        return vec![lo];
    }
    let step = (hi - lo) / (resolution - 1) as f64;
    (0..resolution)
        .map(|i| {
            if i + 1 == resolution {
                hi
            } else {
                lo + step * i as f64
            }
        })
        .collect()
}

/// Maximizes lifetime utility over the grid, with next period's gift per
/// middle-aged agent given by `continuation(eta')`.
pub fn maximize_lifetime_utility<F>(
    problem: &LifetimeProblem,
    continuation: F,
    grid: &GridSpec,
) -> Result<Maximizer>
where
    F: Fn(f64) -> f64,
{
    grid.validate()?;
    let mut bounds = grid.bounds;
    let mut best = (f64::NEG_INFINITY, [0.0; 3]);
    let mut evaluations = 0;
    let mut widths = Vec::with_capacity(grid.refinement_rounds + 1);
    for _ in 0..=grid.refinement_rounds {
        widths.push([
            bounds[0].1 - bounds[0].0,
            bounds[1].1 - bounds[1].0,
            bounds[2].1 - bounds[2].0,
        ]);
        let axes: Vec<Vec<f64>> = bounds
            .iter()
            .map(|&(lo, hi)| axis(lo, hi, grid.resolution))
            .collect();
        let mut round_best = (f64::NEG_INFINITY, [0.0; 3]);
        for &g in &axes[0] {
            for &s in &axes[1] {
                for &e in &axes[2] {
                    evaluations += 1;
                    let u = problem.utility(g, s, e, &continuation);
                    if u > round_best.0 {
                        round_best = (u, [g, s, e]);
                    }
                }
            }
        }
        if round_best.0 == f64::NEG_INFINITY {
            return Err(ModelError::EmptyFeasibleSet);
        }
        if round_best.0 >= best.0 {
            best = round_best;
        }
        for (i, b) in bounds.iter_mut().enumerate() {
            let step = (b.1 - b.0) / (grid.resolution - 1) as f64;
            let (lo0, hi0) = grid.bounds[i];
            b.0 = (best.1[i] - 2.0 * step).max(lo0);
            b.1 = (best.1[i] + 2.0 * step).min(hi0);
        }
    }
    Ok(Maximizer {
        g: best.1[0],
        s: best.1[1],
        eta_next: best.1[2],
        utility: best.0,
        evaluations,
        bracket_widths: widths,
    })
}

/// Bisection root of `f` on `[lo, hi]`.
pub fn bracket_threshold<F>(f: F, lo: f64, hi: f64, tolerance: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    check("tolerance", tolerance, "(0, inf)", tolerance > 0.0)?;
    let (mut a, mut b) = (lo.min(hi), lo.max(hi));
    let (mut fa, fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() || fa.is_nan() || fb.is_nan() {
        return Err(ModelError::NoSignChange { lo: a, hi: b });
    }
    while b - a > tolerance {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return Ok(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

/// Central-difference gradient. A step that leaves the domain (non-finite
/// objective) is halved up to 30 times before giving up.
pub fn finite_difference_gradient<F>(objective: F, point: &[f64], step: f64) -> Result<Vec<f64>>
where
    F: Fn(&[f64]) -> f64,
{
    check("step", step, "(0, inf)", step > 0.0)?;
    let mut x = point.to_vec();
    let mut grad = Vec::with_capacity(point.len());
    for i in 0..point.len() {
        let mut h = step;
        let mut done = None;
        for _ in 0..=30 {
            x[i] = point[i] + h;
            let up = objective(&x);
            x[i] = point[i] - h;
            let down = objective(&x);
            x[i] = point[i];
            if up.is_finite() && down.is_finite() {
                done = Some((up - down) / (2.0 * h));
                break;
            }
            h *= 0.5;
        }
        grad.push(done.ok_or(ModelError::InfeasibleStep { coordinate: i })?);
    }
    Ok(grad)
}

/// Utility gain from inculcating in the static economy, with each branch
/// solved on the grid.
pub fn static_delta_utility(
    prefs: &PreferenceParams,
    incomes: &StaticIncomes,
    resolution: usize,
    refinement_rounds: usize,
) -> Result<f64> {
    prefs.validate()?;
    incomes.validate()?;
    let (y_m, eta) = (incomes.y_m, prefs.eta_level);
    let base = LifetimeProblem {
        y_m,
        cost: prefs.delta * y_m,
        cost_kind: CostKind::Fixed,
        eta_t: eta,
        beta: prefs.beta,
        n: incomes.n,
        r_next: 1.0,
        y_e_next: incomes.y_e_next,
    };
    let future_gift = eta * (1.0 - prefs.delta) * y_m;
    let inc = maximize_lifetime_utility(
        &base,
        |e| if e > 0.0 { future_gift } else { 0.0 },
        &GridSpec::new(
            [(0.0, y_m), (0.0, 0.0), (eta, eta)],
            resolution,
            refinement_rounds,
        )?,
    )?;
    let noi = maximize_lifetime_utility(
        &base,
        |_| 0.0,
        &GridSpec::new(
            [(0.0, y_m), (0.0, 0.0), (0.0, 0.0)],
            resolution,
            refinement_rounds,
        )?,
    );
    match noi {
        Ok(noi) => Ok(inc.utility - noi.utility),
        Err(ModelError::EmptyFeasibleSet) => Ok(f64::INFINITY),
        Err(e) => Err(e),
    }
}
