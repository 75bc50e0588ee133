//! The economy with savings and capital accumulation.
//!
//! Middle-aged agents choose a gift, conventional savings `s` and the
//! inculcation level `eta'` of the next generation. Output is
//! `Y = L^alpha K^(1-alpha)`, factors earn their marginal products, effective
//! labor per agent grows at rate `a` and cohorts grow at rate `n`. Capital is
//! the previous middle-aged generation's savings, `K' = s N_m`.
//!
//! Capital `k` is always measured per effective unit of labor. Path levels
//! normalise the middle-aged labor endowment to 1 in period 0.

use serde::{Deserialize, Serialize};

use crate::error::{check, ModelError, Result};

/// Growth-model parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrowthParams {
    pub n: f64,
    pub a: f64,
    pub alpha: f64,
    pub beta: f64,
    pub delta: f64,
    /// Elderly labor endowment relative to a middle-aged agent.
    pub tau_e: f64,
}

impl GrowthParams {
    pub fn new(n: f64, a: f64, alpha: f64, beta: f64, delta: f64, tau_e: f64) -> Result<Self> {
        let p = Self {
            n,
            a,
            alpha,
            beta,
            delta,
            tau_e,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        check("n", self.n, "(-1, inf)", self.n > -1.0)?;
        check("a", self.a, "[0, inf)", self.a >= 0.0)?;
        check(
            "alpha",
            self.alpha,
            "(0, 1)",
            self.alpha > 0.0 && self.alpha < 1.0,
        )?;
        check("beta", self.beta, "(0, inf)", self.beta > 0.0)?;
        check(
            "delta",
            self.delta,
            "(0, 1)",
            self.delta > 0.0 && self.delta < 1.0,
        )?;
        check("tau_e", self.tau_e, "[0, inf)", self.tau_e >= 0.0)
    }

    /// Elderly share of aggregate effective labor.
    pub fn gamma_e(&self) -> f64 {
        self.tau_e / (self.tau_e + 1.0 + self.a)
    }

    /// `(1 - alpha) / alpha`.
    pub fn capital_intensity(&self) -> f64 {
        (1.0 - self.alpha) / self.alpha
    }

    /// Return on inculcation per unit of income growth: `(1+n)(1+a) / ((1+beta) delta)`.
    pub fn inculcation_return(&self) -> f64 {
        (1.0 + self.n) * (1.0 + self.a) / ((1.0 + self.beta) * self.delta)
    }

    /// Same parameters with `alpha` set from a capital intensity `(1-alpha)/alpha`.
    pub fn with_capital_intensity(&self, intensity: f64) -> Result<Self> {
        check("capital_intensity", intensity, "(0, inf)", intensity > 0.0)?;
        let mut p = *self;
        p.alpha = 1.0 / (1.0 + intensity);
        p.validate()?;
        Ok(p)
    }

    pub fn wage_middle(&self, k: f64, a_m: f64) -> f64 {
        self.alpha * a_m * k.powf(1.0 - self.alpha)
    }

    pub fn gross_return(&self, k: f64) -> f64 {
        (1.0 - self.alpha) * k.powf(-self.alpha)
    }

    /// Capital per effective labor that earns gross return `r`.
    pub fn capital_for_return(&self, r: f64) -> f64 {
        ((1.0 - self.alpha) / r).powf(1.0 / self.alpha)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    Inculcation,
    NoInculcation,
}

impl Regime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::Inculcation => "inculcation",
            Regime::NoInculcation => "no-inculcation",
        }
    }
}

/// Balanced-growth equilibrium.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SteadyState {
    pub r: f64,
    pub k: f64,
    pub eta: f64,
    pub regime: Regime,
    pub consumption_ratio: f64,
    /// Inculcation level implied by the interior return before clamping.
    pub eta_unclamped: f64,
}

/// Residuals of the equations that define a steady state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SteadyResiduals {
    /// Return equation (with inculcation) or the no-inculcation return formula.
    pub r: f64,
    /// Inculcation equation; identically zero in the no-inculcation regime.
    pub eta: f64,
    /// `R = (1-alpha) k^-alpha`.
    pub factor_price: f64,
}

impl SteadyResiduals {
    pub fn max_abs(&self) -> f64 {
        self.r
            .abs()
            .max(self.eta.abs())
            .max(self.factor_price.abs())
    }
}

impl SteadyState {
    pub fn residuals(&self, p: &GrowthParams) -> SteadyResiduals {
        let factor_price = self.r - p.gross_return(self.k);
        match self.regime {
            Regime::Inculcation => SteadyResiduals {
                r: self.r - p.inculcation_return() * (1.0 + (1.0 + p.a) * p.tau_e / self.r),
                eta: self.eta - eta_given_return(p, self.r),
                factor_price,
            },
            Regime::NoInculcation => SteadyResiduals {
                r: self.r - no_inculcation_return(p),
                eta: self.eta,
                factor_price,
            },
        }
    }
}

/// Equilibrium gift when savings and gifts coexist.
pub fn gift_with_accumulation(
    eta_t: f64,
    beta: f64,
    y_m: f64,
    y_e_next: f64,
    r_next: f64,
) -> Result<f64> {
    check("eta_t", eta_t, "[0, 1)", (0.0..1.0).contains(&eta_t))?;
    check("beta", beta, "(0, inf)", beta > 0.0)?;
    Ok(eta_t / (1.0 + beta) * lifetime_income(y_m, y_e_next, r_next)?)
}

fn lifetime_income(y_m: f64, y_e_next: f64, r_next: f64) -> Result<f64> {
    check("y_m", y_m, "[0, inf)", y_m >= 0.0)?;
    check("y_e_next", y_e_next, "[0, inf)", y_e_next >= 0.0)?;
    if y_e_next == 0.0 {
        return Ok(y_m);
    }
    check("r_next", r_next, "(0, inf)", r_next > 0.0)?;
    Ok(y_m + y_e_next / r_next)
}

/// Income set aside for old age, split between capital and inculcation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SavingsAllocation {
    /// `s + eta' d`.
    pub total: f64,
    /// Inculcation cost `d = delta y_m`.
    pub cost: f64,
}

impl SavingsAllocation {
    /// Conventional savings left once `eta_next` has been paid for.
    pub fn conventional(&self, eta_next: f64) -> f64 {
        self.total - eta_next * self.cost
    }

    /// Inculcation level financed when conventional savings are `s`.
    pub fn inculcation(&self, s: f64) -> f64 {
        (self.total - s) / self.cost
    }
}

pub fn savings_allocation(
    beta: f64,
    delta: f64,
    y_m: f64,
    y_e_next: f64,
    r_next: f64,
) -> Result<SavingsAllocation> {
    check("beta", beta, "(0, inf)", beta > 0.0)?;
    check("delta", delta, "(0, 1)", delta > 0.0 && delta < 1.0)?;
    let discounted = lifetime_income(y_m, y_e_next, r_next)? - y_m;
    let total = (beta * y_m - discounted) / (1.0 + beta);
    if total < 0.0 {
        return Err(ModelError::NoNetSaving { total });
    }
    Ok(SavingsAllocation {
        total,
        cost: delta * y_m,
    })
}

/// Quantities entering the return-equilibration condition at period `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EquilibrationInputs {
    pub r_t: f64,
    pub r_next: f64,
    pub y_m: f64,
    pub y_e_next: f64,
    /// Inculcation cost paid by the previous generation.
    pub cost_prev: f64,
    pub n: f64,
    pub beta: f64,
}

/// `R_t - (1+n)/(1+beta) (y_m + y_e'/R') / d_prev`; zero when capital and
/// inculcation earn the same return.
pub fn return_equilibration_residual(x: &EquilibrationInputs) -> Result<f64> {
    check("cost_prev", x.cost_prev, "(0, inf)", x.cost_prev > 0.0)?;
    let lifetime = lifetime_income(x.y_m, x.y_e_next, x.r_next)?;
    Ok(x.r_t - (1.0 + x.n) / (1.0 + x.beta) * lifetime / x.cost_prev)
}

/// Unclamped stationary inculcation level when the elderly have no labor income.
pub fn eta_star_unclamped(beta: f64, delta: f64, alpha: f64) -> f64 {
    beta / ((1.0 + beta) * delta) - (1.0 - alpha) / alpha * (1.0 + beta)
}

/// Stationary inculcation level when the elderly have no labor income,
/// clamped at zero.
pub fn eta_star_simple(beta: f64, delta: f64, alpha: f64) -> Result<f64> {
    check("beta", beta, "(0, inf)", beta > 0.0)?;
    check("delta", delta, "(0, 1)", delta > 0.0 && delta < 1.0)?;
    check("alpha", alpha, "(0, 1)", alpha > 0.0 && alpha < 1.0)?;
    let eta = eta_star_unclamped(beta, delta, alpha);
    if eta >= 1.0 {
        return Err(ModelError::UtilityWeightOutOfRange { eta });
    }
    Ok(eta.max(0.0))
}

/// Largest capital intensity `(1-alpha)/alpha` compatible with inculcation
/// when the elderly have no labor income.
pub fn inculcation_kink(beta: f64, delta: f64) -> f64 {
    beta / (delta * (1.0 + beta) * (1.0 + beta))
}

/// Positive root of `R^2 - A R - A tau_e (1+a) = 0`.
pub fn inculcation_steady_return(p: &GrowthParams) -> Result<f64> {
    let big_a = p.inculcation_return();
    let disc = big_a * big_a + 4.0 * big_a * p.tau_e * (1.0 + p.a);
    if !(disc >= 0.0) {
        return Err(ModelError::NoPositiveRoot);
    }
    let r = 0.5 * (big_a + disc.sqrt());
    if r > 0.0 {
        Ok(r)
    } else {
        Err(ModelError::NoPositiveRoot)
    }
}

/// Stationary inculcation level consistent with gross return `r`.
pub fn eta_given_return(p: &GrowthParams, r: f64) -> f64 {
    p.beta / (p.delta * (1.0 + p.beta))
        - (1.0 + p.a) / (p.delta * r)
            * (p.tau_e / (1.0 + p.beta) + (1.0 + p.n) / (1.0 - p.gamma_e()) * p.capital_intensity())
}

/// Steady-state gross return when nobody inculcates.
pub fn no_inculcation_return(p: &GrowthParams) -> f64 {
    (1.0 + p.a) / p.beta
        * ((1.0 + p.n) * (1.0 + p.beta) / (1.0 - p.gamma_e()) * p.capital_intensity() + p.tau_e)
}

/// `beta R / ((1 - eta)(1 + a))`, the consumption ratio on a balanced-growth path.
pub fn balanced_growth_consumption_ratio(p: &GrowthParams, r: f64, eta: f64) -> Result<f64> {
    check("eta", eta, "[0, 1)", (0.0..1.0).contains(&eta))?;
    Ok(p.beta * r / ((1.0 - eta) * (1.0 + p.a)))
}

pub fn steady_state(p: &GrowthParams) -> Result<SteadyState> {
    p.validate()?;
    let r_inc = inculcation_steady_return(p)?;
    let eta_unclamped = eta_given_return(p, r_inc);
    let (r, eta, regime) = if eta_unclamped > 0.0 {
        if eta_unclamped >= 1.0 {
            return Err(ModelError::UtilityWeightOutOfRange { eta: eta_unclamped });
        }
        (r_inc, eta_unclamped, Regime::Inculcation)
    } else {
        (no_inculcation_return(p), 0.0, Regime::NoInculcation)
    };
    Ok(SteadyState {
        r,
        k: p.capital_for_return(r),
        eta,
        regime,
        consumption_ratio: balanced_growth_consumption_ratio(p, r, eta)?,
        eta_unclamped,
    })
}

/// Both branches of the steady-state consumption ratio when the elderly
/// have no labor income.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CapitalOnlyRatios {
    pub no_inculcation: f64,
    pub inculcation: f64,
}

impl CapitalOnlyRatios {
    pub fn new(p: &GrowthParams) -> Self {
        let x = p.capital_intensity();
        let (b, n) = (p.beta, p.n);
        Self {
            no_inculcation: x * (1.0 + b) * (1.0 + n),
            inculcation: b * (1.0 + n) / (p.delta * (1.0 + b) * (1.0 + x * (1.0 + b)) - b),
        }
    }

    /// The branch that applies given the clamped inculcation level.
    pub fn select(&self, eta_star: f64) -> f64 {
        if eta_star > 0.0 {
            self.inculcation
        } else {
            self.no_inculcation
        }
    }
}

/// One point of a capital-intensity comparative-statics sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntensityPoint {
    pub capital_intensity: f64,
    pub alpha: f64,
    pub tau_e: f64,
    /// `None` when the implied inculcation level is not below 1.
    pub state: Option<SteadyState>,
}

pub fn capital_intensity_sweep(base: &GrowthParams, grid: &[f64]) -> Result<Vec<IntensityPoint>> {
    base.validate()?;
    grid.iter()
        .map(|&x| {
            let p = base.with_capital_intensity(x)?;
            let state = match steady_state(&p) {
                Ok(s) => Some(s),
                Err(ModelError::UtilityWeightOutOfRange { .. }) => None,
                Err(e) => return Err(e),
            };
            Ok(IntensityPoint {
                capital_intensity: x,
                alpha: p.alpha,
                tau_e: p.tau_e,
                state,
            })
        })
        .collect()
}

/// Fixed-point iteration settings for perfect-foresight paths.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathSolverOptions {
    pub damping: f64,
    pub max_iterations: usize,
    pub tolerance: f64,
}

impl Default for PathSolverOptions {
    fn default() -> Self {
        Self {
            damping: 0.5,
            max_iterations: 10_000,
            tolerance: 1e-8,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathSetup {
    pub k0: f64,
    pub horizon: usize,
    /// Taste of the period-0 middle-aged; defaults to the steady-state level.
    pub eta0: Option<f64>,
}

/// Per-period state of an equilibrium path, in per-agent levels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PeriodState {
    pub t: usize,
    pub k: f64,
    pub r: f64,
    pub a_m: f64,
    pub y_m: f64,
    pub y_e: f64,
    pub s_m: f64,
    pub g_m: f64,
    pub eta: f64,
    pub eta_next: f64,
    pub c_m: f64,
    pub c_e: f64,
    /// Gift per unit of taste, `(y_m + y_e'/R') / (1 + beta)`.
    pub psi: f64,
    pub regime_next: Regime,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PathDiagnostics {
    pub iterations: usize,
    /// Largest relative residual of the period equilibrium conditions.
    pub max_residual: f64,
    pub terminal_anchor: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EconomyPath {
    pub params: GrowthParams,
    pub steady: SteadyState,
    /// `k_0 ..= k_T`.
    pub k: Vec<f64>,
    /// Periods `0 .. T`.
    pub periods: Vec<PeriodState>,
    pub diagnostics: PathDiagnostics,
}

impl EconomyPath {
    /// Return-equilibration residual at period `t >= 1`.
    pub fn return_equilibration_residual(&self, t: usize) -> Result<f64> {
        let (prev, cur) = (&self.periods[t - 1], &self.periods[t]);
        let next_r = self.params.gross_return(self.k[t + 1]);
        let y_e_next = self.params.tau_e
            * self
                .params
                .wage_middle(self.k[t + 1], cur.a_m * (1.0 + self.params.a));
        return_equilibration_residual(&EquilibrationInputs {
            r_t: cur.r,
            r_next: next_r,
            y_m: cur.y_m,
            y_e_next,
            cost_prev: self.params.delta * prev.y_m,
            n: self.params.n,
            beta: self.params.beta,
        })
    }

    /// Consumption ratio at `t >= 1` from the closed form in incomes and returns.
    pub fn consumption_ratio(&self, t: usize) -> f64 {
        let p = &self.params;
        let (prev, cur) = (&self.periods[t - 1], &self.periods[t]);
        if cur.eta > 0.0 {
            let r_next = p.gross_return(self.k[t + 1]);
            let y_e_next = p.tau_e * p.wage_middle(self.k[t + 1], cur.a_m * (1.0 + p.a));
            p.beta * cur.r / (1.0 - cur.eta) * (prev.y_m + cur.y_e / cur.r)
                / (cur.y_m + y_e_next / r_next)
        } else {
            (cur.y_e + cur.r * prev.s_m) / (cur.y_m - cur.s_m - p.delta * cur.y_m * cur.eta_next)
        }
    }
}

struct PathLaw {
    p: GrowthParams,
    /// Return-on-inculcation factor.
    big_a: f64,
    /// Coefficient on `k_{t+1}` from discounted elderly labor income.
    lead: f64,
    /// `k_{t+1} = noi * k_t^(1-alpha)` when nobody inculcates.
    noi: f64,
}

impl PathLaw {
    fn new(p: &GrowthParams) -> Self {
        let (a, b, al) = (p.a, p.beta, p.alpha);
        let denom = p.tau_e * (1.0 + a) / ((1.0 - al) * (1.0 + b))
            + (1.0 + p.n) * (1.0 + a) / (al * (1.0 - p.gamma_e()));
        Self {
            p: *p,
            big_a: p.inculcation_return(),
            lead: p.tau_e * (1.0 + a) / (1.0 - al),
            noi: b / (1.0 + b) / denom,
        }
    }

    fn no_inculcation_next(&self, k: f64) -> f64 {
        self.noi * k.powf(1.0 - self.p.alpha)
    }

    /// Residual of return equilibration at `k` given its neighbours, as
    /// `ln R - ln RHS`; strictly decreasing in `k`.
    fn equilibration_log_gap(&self, k_prev: f64, k: f64, k_next: f64) -> f64 {
        let al = self.p.alpha;
        let rhs =
            self.big_a * ((k / k_prev).powf(1.0 - al) + self.lead * k_next / k_prev.powf(1.0 - al));
        ((1.0 - al) * k.powf(-al)).ln() - rhs.ln()
    }

    /// `k` that equalises the returns on capital and on inculcation.
    fn inculcation_capital(&self, k_prev: f64, k_next: f64, guess: f64) -> f64 {
        if self.lead == 0.0 {
            return (1.0 - self.p.alpha) / self.big_a * k_prev.powf(1.0 - self.p.alpha);
        }
        let f = |u: f64| self.equilibration_log_gap(k_prev, u.exp(), k_next);
        let mut lo = guess.ln() - 1.0;
        let mut hi = guess.ln() + 1.0;
        while f(lo) < 0.0 {
            lo -= 2.0;
        }
        while f(hi) > 0.0 {
            hi += 2.0;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo < 1e-15 {
                break;
            }
        }
        (0.5 * (lo + hi)).exp()
    }

    /// Capital chosen at `t` from the complementarity of `eta_t >= 0` and the
    /// capital return weakly exceeding the inculcation return.
    fn choose(&self, k_prev: f64, k_next: f64, guess: f64) -> (f64, Regime) {
        let k_inc = self.inculcation_capital(k_prev, k_next, guess);
        let k_noi = self.no_inculcation_next(k_prev);
        if k_inc < k_noi {
            (k_inc, Regime::Inculcation)
        } else {
            (k_noi, Regime::NoInculcation)
        }
    }

    fn relative_residual(&self, k_prev: f64, k: f64, k_next: f64, regime: Regime) -> f64 {
        match regime {
            Regime::Inculcation => self.equilibration_log_gap(k_prev, k, k_next).abs(),
            Regime::NoInculcation => (k / self.no_inculcation_next(k_prev) - 1.0).abs(),
        }
    }
}

/// Solves the perfect-foresight equilibrium path from `k0`.
///
/// With no elderly labor income the law of motion is first order and is
/// iterated forward. Otherwise period `t`'s conditions involve `k_{t+1}`,
/// so the interior of the sequence is solved by damped fixed-point
/// iteration with `k_T` pinned to the steady state.
pub fn simulate_path(
    p: &GrowthParams,
    setup: &PathSetup,
    opts: &PathSolverOptions,
) -> Result<EconomyPath> {
    p.validate()?;
    check("k0", setup.k0, "(0, inf)", setup.k0 > 0.0)?;
    check(
        "horizon",
        setup.horizon as f64,
        "[2, inf)",
        setup.horizon >= 2,
    )?;
    check(
        "damping",
        opts.damping,
        "(0, 1]",
        opts.damping > 0.0 && opts.damping <= 1.0,
    )?;
    let steady = steady_state(p)?;
    let eta0 = setup.eta0.unwrap_or(steady.eta);
    check("eta0", eta0, "[0, 1)", (0.0..1.0).contains(&eta0))?;
    let law = PathLaw::new(p);
    let horizon = setup.horizon;

    let mut k = vec![setup.k0; horizon + 1];
    let mut regimes = vec![steady.regime; horizon + 1];
    let mut iterations = 0;
    let terminal_anchor = p.tau_e > 0.0;

    if !terminal_anchor {
        for t in 1..=horizon {
            let (kt, reg) = law.choose(k[t - 1], f64::NAN, k[t - 1]);
            k[t] = kt;
            regimes[t] = reg;
        }
        iterations = 1;
    } else {
        for (t, kt) in k.iter_mut().enumerate() {
            let w = (-(t as f64) * 0.3).exp();
            *kt = steady.k + (setup.k0 - steady.k) * w;
        }
        k[horizon] = steady.k;
        let mut next = k.clone();
        let mut converged = false;
        while iterations < opts.max_iterations {
            iterations += 1;
            let mut change: f64 = 0.0;
            for t in 1..horizon {
                let (kt, reg) = law.choose(k[t - 1], k[t + 1], k[t]);
                next[t] = kt;
                regimes[t] = reg;
                change = change.max((kt / k[t] - 1.0).abs());
            }
            for t in 1..horizon {
                k[t] += opts.damping * (next[t] - k[t]);
            }
            if change < opts.tolerance * 1e-3 {
                converged = true;
                break;
            }
        }
        if !converged {
            let residual = max_path_residual(&law, &k, &regimes);
            return Err(ModelError::NonConvergence {
                iterations,
                residual,
            });
        }
        // Regime of the anchored period follows the steady state.
        regimes[horizon] = steady.regime;
    }

    let max_residual = max_path_residual(&law, &k, &regimes);
    if !(max_residual < opts.tolerance) {
        return Err(ModelError::NonConvergence {
            iterations,
            residual: max_residual,
        });
    }

    let periods = fill_periods(p, &k, &regimes, eta0);
    Ok(EconomyPath {
        params: *p,
        steady,
        k,
        periods,
        diagnostics: PathDiagnostics {
            iterations,
            max_residual,
            terminal_anchor,
        },
    })
}

fn max_path_residual(law: &PathLaw, k: &[f64], regimes: &[Regime]) -> f64 {
    let horizon = k.len() - 1;
    let last = if law.lead == 0.0 {
        horizon + 1
    } else {
        horizon
    };
    (1..last)
        .map(|t| {
            let k_next = k.get(t + 1).copied().unwrap_or(f64::NAN);
            law.relative_residual(k[t - 1], k[t], k_next, regimes[t])
        })
        .fold(0.0, f64::max)
}

fn fill_periods(p: &GrowthParams, k: &[f64], regimes: &[Regime], eta0: f64) -> Vec<PeriodState> {
    let horizon = k.len() - 1;
    let growth = (1.0 + p.n) * (1.0 + p.a) / (1.0 - p.gamma_e());
    // Savings of the period -1 middle-aged, per unit of period-0 labor endowment.
    let mut s_prev = k[0] * growth / (1.0 + p.a);
    let mut eta = eta0;
    let mut out = Vec::with_capacity(horizon);
    for t in 0..horizon {
        let a_m = (1.0 + p.a).powi(t as i32);
        let y_m = p.wage_middle(k[t], a_m);
        let y_e = p.tau_e * y_m;
        let r = p.gross_return(k[t]);
        let r_next = p.gross_return(k[t + 1]);
        let y_e_next = p.tau_e * p.wage_middle(k[t + 1], a_m * (1.0 + p.a));
        let psi = (y_m + y_e_next / r_next) / (1.0 + p.beta);
        let s_m = k[t + 1] * growth * a_m;
        let total = (p.beta * y_m - y_e_next / r_next) / (1.0 + p.beta);
        let cost = p.delta * y_m;
        let regime_next = regimes[t + 1];
        let eta_next = match regime_next {
            Regime::Inculcation => (total - s_m) / cost,
            Regime::NoInculcation => 0.0,
        };
        let g_m = eta * psi;
        let c_m = y_m - cost * eta_next - s_m - g_m;
        let c_e = r * s_prev + y_e + (1.0 + p.n) * g_m;
        out.push(PeriodState {
            t,
            k: k[t],
            r,
            a_m,
            y_m,
            y_e,
            s_m,
            g_m,
            eta,
            eta_next,
            c_m,
            c_e,
            psi,
            regime_next,
        });
        s_prev = s_m;
        eta = eta_next;
    }
    out
}
