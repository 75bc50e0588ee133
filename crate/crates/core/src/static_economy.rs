//! The economy without savings.
//!
//! Middle-aged agents split income between their own consumption, a gift to
//! the current elderly and (optionally) a fixed-intensity inculcation of the
//! young. Inculcation costs `d = delta * y_m` and is a binary choice between
//! intensity `0` and `eta_level`. Gifts received by one elderly agent are
//! `(1 + n)` times the gift of one middle-aged agent.

use serde::{Deserialize, Serialize};

use crate::error::{check, Result};

/// Tastes and inculcation technology.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PreferenceParams {
    /// Intensity of the gift motive when the young are inculcated.
    pub eta_level: f64,
    /// Weight on old-age consumption.
    pub beta: f64,
    /// Inculcation cost as a share of middle-aged income.
    pub delta: f64,
}

impl PreferenceParams {
    /// `delta = 0` is accepted as the free-inculcation limit.
    pub fn new(eta_level: f64, beta: f64, delta: f64) -> Result<Self> {
        let p = Self {
            eta_level,
            beta,
            delta,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        check(
            "eta_level",
            self.eta_level,
            "(0, 1)",
            self.eta_level > 0.0 && self.eta_level < 1.0,
        )?;
        check("beta", self.beta, "(0, inf)", self.beta > 0.0)?;
        check(
            "delta",
            self.delta,
            "[0, 1)",
            self.delta >= 0.0 && self.delta < 1.0,
        )
    }
}

/// Incomes faced by the deciding middle-aged agent.
///
/// The economy is stationary, so `y_m` is also the middle-aged income of the
/// next generation, whose gifts the current middle-aged receive when old.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StaticIncomes {
    pub y_m: f64,
    pub y_e_next: f64,
    /// Population growth rate.
    pub n: f64,
}

impl StaticIncomes {
    pub fn new(y_m: f64, y_e_next: f64, n: f64) -> Result<Self> {
        let inc = Self { y_m, y_e_next, n };
        inc.validate()?;
        Ok(inc)
    }

    pub fn validate(&self) -> Result<()> {
        check("y_m", self.y_m, "[0, inf)", self.y_m >= 0.0)?;
        check("y_e_next", self.y_e_next, "[0, inf)", self.y_e_next >= 0.0)?;
        check_growth(self.n)
    }

    pub fn income_ratio(&self) -> f64 {
        self.y_e_next / self.y_m
    }
}

fn check_growth(n: f64) -> Result<()> {
    check("n", n, "(-1, inf)", n > -1.0)
}

/// Utility gain from continuing inculcation over abandoning it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum UtilityGain {
    Finite(f64),
    /// The agent would have nothing in old age without gifts.
    Unbounded,
}

impl UtilityGain {
    /// Ties go to inculcation.
    pub fn prefers_inculcation(&self) -> bool {
        match *self {
            UtilityGain::Finite(v) => v >= 0.0,
            UtilityGain::Unbounded => true,
        }
    }

    pub fn value(&self) -> f64 {
        match *self {
            UtilityGain::Finite(v) => v,
            UtilityGain::Unbounded => f64::INFINITY,
        }
    }
}

/// Market for cultural goods supplied one unit per elderly agent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CulturalMarket {
    pub price: f64,
    pub demand: f64,
}

impl CulturalMarket {
    pub fn expenditure(&self) -> f64 {
        self.price * self.demand
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StaticOutcome {
    pub gift: f64,
    pub inculcate: bool,
    pub delta_u: f64,
    pub consumption_ratio: f64,
    pub cultural_price: f64,
    pub cultural_demand: f64,
}

/// Optimal gift of a middle-aged agent.
///
/// `inculcated` says whether this agent was taught the gift motive (taste
/// `eta_level`) or not (taste `0`). `terminal` marks the last gift before
/// inculcation is abandoned, in which case no inculcation cost is paid.
pub fn optimal_gift_simple(
    prefs: &PreferenceParams,
    inculcated: bool,
    y_m: f64,
    terminal: bool,
) -> Result<f64> {
    check("y_m", y_m, "[0, inf)", y_m >= 0.0)?;
    if !inculcated {
        return Ok(0.0);
    }
    let disposable = if terminal {
        y_m
    } else {
        y_m - prefs.delta * y_m
    };
    Ok(prefs.eta_level * disposable)
}

/// Relative elderly income at or below which inculcation is chosen.
///
/// Returns `+inf` when inculcation is free (`delta = 0`).
pub fn inculcation_threshold(prefs: &PreferenceParams, n: f64) -> Result<f64> {
    prefs.validate()?;
    check_growth(n)?;
    let keep = 1.0 - prefs.delta;
    let denom = keep.powf(-1.0 / prefs.beta) - 1.0;
    if denom <= 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok((1.0 + n) * prefs.eta_level * keep / denom)
}

/// Lifetime utility of keeping inculcation minus that of abandoning it.
pub fn delta_utility(prefs: &PreferenceParams, incomes: &StaticIncomes) -> Result<UtilityGain> {
    prefs.validate()?;
    incomes.validate()?;
    check("y_m", incomes.y_m, "(0, inf)", incomes.y_m > 0.0)?;
    if incomes.y_e_next == 0.0 {
        return Ok(UtilityGain::Unbounded);
    }
    let keep = 1.0 - prefs.delta;
    let received = (1.0 + incomes.n) * prefs.eta_level * keep * incomes.y_m / incomes.y_e_next;
    Ok(UtilityGain::Finite(
        keep.ln() + prefs.beta * received.ln_1p(),
    ))
}

/// Price and per-agent demand that clear the cultural-goods market.
pub fn cultural_market(
    prefs: &PreferenceParams,
    incomes: &StaticIncomes,
) -> Result<CulturalMarket> {
    prefs.validate()?;
    incomes.validate()?;
    let spend = prefs.eta_level * (incomes.y_m - prefs.delta * incomes.y_m);
    let price = (1.0 + incomes.n) * spend;
    Ok(CulturalMarket {
        price,
        demand: 1.0 / (1.0 + incomes.n),
    })
}

/// Elderly-to-middle-aged consumption ratio in a stationary equilibrium.
pub fn relative_consumption_static(
    prefs: &PreferenceParams,
    income_ratio: f64,
    n: f64,
) -> Result<f64> {
    check(
        "income_ratio",
        income_ratio,
        "[0, inf)",
        income_ratio >= 0.0,
    )?;
    let threshold = inculcation_threshold(prefs, n)?;
    Ok(consumption_ratio_given(
        prefs,
        income_ratio,
        n,
        income_ratio <= threshold,
    ))
}

pub(crate) fn consumption_ratio_given(
    prefs: &PreferenceParams,
    income_ratio: f64,
    n: f64,
    inculcate: bool,
) -> f64 {
    if !inculcate {
        return income_ratio;
    }
    let eta = prefs.eta_level;
    income_ratio / ((1.0 - eta) * (1.0 - prefs.delta)) + (1.0 + n) * eta / (1.0 - eta)
}

/// Full equilibrium summary for one stationary economy.
pub fn solve_static(prefs: &PreferenceParams, incomes: &StaticIncomes) -> Result<StaticOutcome> {
    let gain = delta_utility(prefs, incomes)?;
    let ratio = incomes.income_ratio();
    // Decided on the threshold so that exact ties resolve toward inculcation.
    let inculcate = ratio <= inculcation_threshold(prefs, incomes.n)?;
    let (gift, market) = if inculcate {
        (
            optimal_gift_simple(prefs, true, incomes.y_m, false)?,
            cultural_market(prefs, incomes)?,
        )
    } else {
        (
            0.0,
            CulturalMarket {
                price: 0.0,
                demand: 0.0,
            },
        )
    };
    Ok(StaticOutcome {
        gift,
        inculcate,
        delta_u: gain.value(),
        consumption_ratio: consumption_ratio_given(prefs, ratio, incomes.n, inculcate),
        cultural_price: market.price,
        cultural_demand: market.demand,
    })
}
