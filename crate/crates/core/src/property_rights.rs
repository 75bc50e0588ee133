//! Output attribution and property rights in a land economy.
//!
//! Output `F(L, T) = L^alpha T^(1-alpha)` is split by Euler's theorem into a
//! labor part (`F_L * L`) and a land part (`F_T * T`). Land shares move from
//! open access (`phi_T = 0`) to first-possession ownership by the elderly
//! (`phi_T = 1`), with `phi_T = phi^rho`. A share `1 - phi` of every agent's
//! output is pooled and split equally across the whole population.

use serde::{Deserialize, Serialize};

use crate::error::{check, ModelError, Result};
use crate::static_economy::{consumption_ratio_given, inculcation_threshold, PreferenceParams};

/// Technology and demographics of the no-savings production economy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LandEconomy {
    pub alpha: f64,
    pub a_m: f64,
    pub a_e: f64,
    pub land: f64,
    pub n_m: f64,
    pub n_e: f64,
}

impl LandEconomy {
    pub fn new(alpha: f64, a_m: f64, a_e: f64, land: f64, n_m: f64, n_e: f64) -> Result<Self> {
        let e = Self {
            alpha,
            a_m,
            a_e,
            land,
            n_m,
            n_e,
        };
        e.validate()?;
        Ok(e)
    }

    /// Normalised population: one elderly agent per `1 + n` middle-aged.
    pub fn from_growth(alpha: f64, a_m: f64, a_e: f64, land: f64, n: f64) -> Result<Self> {
        check("n", n, "(-1, inf)", n > -1.0)?;
        Self::new(alpha, a_m, a_e, land, 1.0 + n, 1.0)
    }

    pub fn validate(&self) -> Result<()> {
        check(
            "alpha",
            self.alpha,
            "(0, 1]",
            self.alpha > 0.0 && self.alpha <= 1.0,
        )?;
        check("a_m", self.a_m, "(0, inf)", self.a_m > 0.0)?;
        check("a_e", self.a_e, "[0, inf)", self.a_e >= 0.0)?;
        check("land", self.land, "(0, inf)", self.land > 0.0)?;
        check("n_m", self.n_m, "(0, inf)", self.n_m > 0.0)?;
        check("n_e", self.n_e, "(0, inf)", self.n_e > 0.0)
    }

    pub fn labor(&self) -> f64 {
        self.n_m * self.a_m + self.n_e * self.a_e
    }

    pub fn population(&self) -> f64 {
        self.n_m + self.n_e
    }

    /// Growth rate implied by the cohort sizes.
    pub fn implied_growth(&self) -> f64 {
        self.n_m / self.n_e - 1.0
    }

    /// Whether the elderly supply less effective labor than the middle-aged.
    pub fn u_shape_regime(&self) -> bool {
        self.a_e < self.a_m
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RightsParams {
    /// Share of own output an agent keeps.
    pub phi: f64,
    /// Exponent linking land rights to output rights.
    pub rho: f64,
}

impl RightsParams {
    pub fn new(phi: f64, rho: f64) -> Result<Self> {
        let r = Self { phi, rho };
        r.validate()?;
        Ok(r)
    }

    pub fn validate(&self) -> Result<()> {
        check("phi", self.phi, "[0, 1]", (0.0..=1.0).contains(&self.phi))?;
        check("rho", self.rho, "(0, inf)", self.rho > 0.0)
    }

    pub fn land_rights(&self) -> f64 {
        self.phi.powf(self.rho)
    }
}

/// Euler split of output into factor contributions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EulerDecomposition {
    pub labor: f64,
    pub output: f64,
    pub marginal_labor: f64,
    pub marginal_land: f64,
    /// Output created by one middle-aged agent's labor.
    pub q_m_labor: f64,
    /// Output created by one elderly agent's labor.
    pub q_e_labor: f64,
    /// Output attributable to land.
    pub q_land: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IncomeDecomposition {
    pub euler: EulerDecomposition,
    pub sigma_m: f64,
    pub sigma_e: f64,
    pub q_m: f64,
    pub q_e: f64,
    pub y_m: f64,
    pub y_e: f64,
}

pub fn euler_decompose(econ: &LandEconomy) -> Result<EulerDecomposition> {
    econ.validate()?;
    let labor = econ.labor();
    check("labor", labor, "(0, inf)", labor > 0.0)?;
    let alpha = econ.alpha;
    let output = labor.powf(alpha) * econ.land.powf(1.0 - alpha);
    let marginal_labor = alpha * output / labor;
    let marginal_land = (1.0 - alpha) * output / econ.land;
    Ok(EulerDecomposition {
        labor,
        output,
        marginal_labor,
        marginal_land,
        q_m_labor: econ.a_m * marginal_labor,
        q_e_labor: econ.a_e * marginal_labor,
        q_land: marginal_land * econ.land,
    })
}

/// Land ownership shares `(sigma_e, sigma_m)` per agent.
pub fn sigma_shares(econ: &LandEconomy, rights: &RightsParams) -> Result<(f64, f64)> {
    econ.validate()?;
    rights.validate()?;
    let labor = econ.labor();
    let owned = rights.land_rights();
    let sigma_e = owned / econ.n_e + (1.0 - owned) * econ.a_e / labor;
    let sigma_m = (1.0 - owned) * econ.a_m / labor;
    Ok((sigma_e, sigma_m))
}

/// Per-agent output and income after pooling.
pub fn income_decomposition(
    econ: &LandEconomy,
    rights: &RightsParams,
) -> Result<IncomeDecomposition> {
    let euler = euler_decompose(econ)?;
    let (sigma_e, sigma_m) = sigma_shares(econ, rights)?;
    let q_m = euler.q_m_labor + sigma_m * euler.q_land;
    let q_e = euler.q_e_labor + sigma_e * euler.q_land;
    let pooled = (1.0 - rights.phi) * euler.output / econ.population();
    Ok(IncomeDecomposition {
        euler,
        sigma_m,
        sigma_e,
        q_m,
        q_e,
        y_m: rights.phi * q_m + pooled,
        y_e: rights.phi * q_e + pooled,
    })
}

/// Relative income `y_e / y_m`.
pub fn income_ratio(econ: &LandEconomy, rights: &RightsParams) -> Result<f64> {
    let inc = income_decomposition(econ, rights)?;
    if inc.y_m <= 0.0 {
        return Err(ModelError::Domain {
            name: "y_m",
            value: inc.y_m,
            domain: "(0, inf)",
        });
    }
    Ok(inc.y_e / inc.y_m)
}

/// Cobb-Douglas closed form of the relative income ratio, scaled by `L / F`.
pub fn income_ratio_closed_form(econ: &LandEconomy, rights: &RightsParams) -> Result<f64> {
    econ.validate()?;
    rights.validate()?;
    let (phi, alpha) = (rights.phi, econ.alpha);
    let owned = rights.land_rights();
    let labor = econ.labor();
    let pooled = (1.0 - phi) * labor / econ.population();
    let num = phi
        * (econ.a_e * alpha
            + (econ.a_e * (1.0 - owned) + owned * labor / econ.n_e) * (1.0 - alpha))
        + pooled;
    let den = phi * (econ.a_m * alpha + econ.a_m * (1.0 - owned) * (1.0 - alpha)) + pooled;
    Ok(num / den)
}

/// Relative income with complete rights (`phi = 1`).
pub fn income_ratio_full_rights(econ: &LandEconomy) -> f64 {
    let alpha = econ.alpha;
    econ.a_e / (alpha * econ.a_m) + (1.0 - alpha) / alpha * econ.n_m / econ.n_e
}

/// Analytic slope of the relative income ratio in `phi`.
pub fn income_ratio_slope(econ: &LandEconomy, rights: &RightsParams) -> Result<f64> {
    econ.validate()?;
    rights.validate()?;
    let (phi, rho, alpha) = (rights.phi, rights.rho, econ.alpha);
    let (pop, labor) = (econ.population(), econ.labor());
    let num = pop * labor * slope_numerator(econ, rho, phi);
    let base = (1.0 - alpha) * econ.a_m * pop * phi.powf(rho + 1.0)
        - (econ.a_m - econ.a_e) * econ.n_e * phi
        - labor;
    Ok(num / (econ.n_e * base * base))
}

/// The sign-determining factor of the slope; increasing in `phi`.
pub fn slope_numerator(econ: &LandEconomy, rho: f64, phi: f64) -> f64 {
    econ.a_e * econ.n_e
        + econ.a_m
            * (econ.population() * phi.powf(rho) * (1.0 - econ.alpha) * (1.0 + rho) - econ.n_e)
}

/// Slope at `phi = 0`: `(a_e - a_m) N / L`.
pub fn income_ratio_slope_at_zero(econ: &LandEconomy) -> f64 {
    (econ.a_e - econ.a_m) * econ.population() / econ.labor()
}

/// Interior minimiser of the relative income ratio, if it lies in `(0, 1)`.
pub fn critical_phi(econ: &LandEconomy, rho: f64) -> Result<Option<f64>> {
    econ.validate()?;
    check("rho", rho, "(0, inf)", rho > 0.0)?;
    if !econ.u_shape_regime() {
        return Err(ModelError::RegimeViolated {
            a_e: econ.a_e,
            a_m: econ.a_m,
        });
    }
    let denom = econ.a_m * econ.population() * (1.0 - econ.alpha) * (1.0 + rho);
    if denom <= 0.0 {
        return Ok(None);
    }
    let base = (econ.a_m - econ.a_e) * econ.n_e / denom;
    let phi = base.powf(1.0 / rho);
    Ok((phi > 0.0 && phi < 1.0).then_some(phi))
}

/// One row of a property-rights sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhiRow {
    pub phi: f64,
    pub income_ratio: f64,
    pub consumption_ratio: f64,
    pub inculcation: bool,
}

/// Evenly spaced grid on `[0, 1]`.
pub fn phi_grid(points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..points)
            .map(|i| i as f64 / (points - 1) as f64)
            .collect(),
    }
}

/// Relative income and consumption across property-rights regimes, with the
/// inculcation decision overlaid from the threshold of the static economy.
pub fn phi_sweep(
    econ: &LandEconomy,
    rho: f64,
    prefs: &PreferenceParams,
    grid: &[f64],
) -> Result<Vec<PhiRow>> {
    let n = econ.implied_growth();
    let threshold = inculcation_threshold(prefs, n)?;
    grid.iter()
        .map(|&phi| {
            let rights = RightsParams::new(phi, rho)?;
            let ratio = income_ratio(econ, &rights)?;
            let inculcation = ratio <= threshold;
            Ok(PhiRow {
                phi,
                income_ratio: ratio,
                consumption_ratio: consumption_ratio_given(prefs, ratio, n, inculcation),
                inculcation,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn baseline() -> LandEconomy {
        LandEconomy::from_growth(0.5, 1.0, 0.025, 1.0, 0.0).unwrap()
    }

    #[test]
    fn euler_examples() {
        let e = LandEconomy::new(0.5, 1.0, 0.0, 1.0, 1.0, 1.0).unwrap();
        let d = euler_decompose(&e).unwrap();
        assert_relative_eq!(d.output, 1.0);
        assert_relative_eq!(d.marginal_labor, 0.5);
        assert_relative_eq!(d.marginal_land, 0.5);

        let e = LandEconomy::new(1.0, 1.0, 0.0, 3.0, 1.0, 1.0).unwrap();
        assert_eq!(euler_decompose(&e).unwrap().marginal_land, 0.0);

        let e = LandEconomy::new(0.5, 4.0, 0.0, 1.0, 1.0, 1.0).unwrap();
        let d = euler_decompose(&e).unwrap();
        assert_relative_eq!(d.output, 2.0, epsilon = 1e-15);
        assert_relative_eq!(d.marginal_labor, 0.25, epsilon = 1e-15);
        assert_relative_eq!(d.marginal_land, 1.0, epsilon = 1e-15);
        assert_relative_eq!(
            d.marginal_labor * d.labor + d.q_land,
            d.output,
            epsilon = 1e-15
        );
    }

    #[test]
    fn zero_labor_is_a_domain_error() {
        let e = LandEconomy {
            a_m: 0.0,
            ..baseline()
        };
        assert!(euler_decompose(&e).is_err());
    }

    #[test]
    fn sigma_endpoints() {
        let e = baseline();
        let l = e.labor();
        let (se, sm) = sigma_shares(&e, &RightsParams::new(0.0, 1.7).unwrap()).unwrap();
        assert_relative_eq!(se, e.a_e / l);
        assert_relative_eq!(sm, e.a_m / l);
        let (se, sm) = sigma_shares(&e, &RightsParams::new(1.0, 1.7).unwrap()).unwrap();
        assert_relative_eq!(se, 1.0 / e.n_e);
        assert_eq!(sm, 0.0);
    }

    #[test]
    fn sigma_interior_example() {
        let e = LandEconomy::new(0.5, 1.0, 0.0, 1.0, 1.0, 1.0).unwrap();
        let (se, sm) = sigma_shares(&e, &RightsParams::new(0.5, 2.0).unwrap()).unwrap();
        assert_relative_eq!(se, 0.25, epsilon = 1e-15);
        assert_relative_eq!(sm, 0.75, epsilon = 1e-15);
        assert_relative_eq!(se * e.n_e + sm * e.n_m, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn income_ratio_examples() {
        let e = baseline();
        assert_eq!(
            income_ratio(&e, &RightsParams::new(0.0, 1.0).unwrap()).unwrap(),
            1.0
        );
        let e0 = LandEconomy::from_growth(0.5, 1.0, 0.0, 1.0, 0.0).unwrap();
        assert_relative_eq!(
            income_ratio(&e0, &RightsParams::new(1.0, 1.0).unwrap()).unwrap(),
            1.0,
            epsilon = 1e-14
        );
        let r1 = income_ratio(&e, &RightsParams::new(1.0, 1.0).unwrap()).unwrap();
        assert_relative_eq!(r1, 1.05, epsilon = 1e-12);
        assert_relative_eq!(r1, income_ratio_full_rights(&e), epsilon = 1e-12);
    }

    #[test]
    fn closed_form_agrees_with_decomposition() {
        for &(alpha, a_e, n, rho, land) in &[
            (0.5, 0.025, 0.0, 1.0, 1.0),
            (0.3, 0.4, 0.5, 2.5, 3.0),
            (0.8, 0.0, -0.3, 0.4, 0.2),
        ] {
            let e = LandEconomy::from_growth(alpha, 1.0, a_e, land, n).unwrap();
            for phi in phi_grid(11) {
                let r = RightsParams::new(phi, rho).unwrap();
                assert_relative_eq!(
                    income_ratio(&e, &r).unwrap(),
                    income_ratio_closed_form(&e, &r).unwrap(),
                    max_relative = 1e-12
                );
            }
        }
    }

    #[test]
    fn ratio_invariant_to_land() {
        let a = baseline();
        let b = LandEconomy { land: 7.5, ..a };
        for phi in phi_grid(21) {
            let r = RightsParams::new(phi, 1.3).unwrap();
            assert_relative_eq!(
                income_ratio(&a, &r).unwrap(),
                income_ratio(&b, &r).unwrap(),
                max_relative = 1e-13
            );
        }
    }

    #[test]
    fn slope_matches_finite_difference() {
        let e = LandEconomy::new(0.3, 1.0, 0.1, 1.0, 1.5, 1.0).unwrap();
        let h = 1e-6;
        for &phi in &[0.1, 0.35, 0.6, 0.9] {
            let f = |p: f64| income_ratio(&e, &RightsParams::new(p, 2.0).unwrap()).unwrap();
            let fd = (f(phi + h) - f(phi - h)) / (2.0 * h);
            let slope = income_ratio_slope(&e, &RightsParams::new(phi, 2.0).unwrap()).unwrap();
            assert_relative_eq!(slope, fd, max_relative = 1e-6);
        }
        let at0 = income_ratio_slope(&e, &RightsParams::new(0.0, 2.0).unwrap()).unwrap();
        assert_relative_eq!(at0, income_ratio_slope_at_zero(&e), max_relative = 1e-12);
    }

    #[test]
    fn critical_phi_examples() {
        let e = LandEconomy::from_growth(0.25, 1.0, 0.0, 1.0, 0.0).unwrap();
        assert_relative_eq!(
            critical_phi(&e, 1.0).unwrap().unwrap(),
            1.0 / 3.0,
            epsilon = 1e-15
        );
        assert_relative_eq!(
            critical_phi(&baseline(), 1.0).unwrap().unwrap(),
            0.4875,
            epsilon = 1e-15
        );
        let labor_only = LandEconomy {
            alpha: 1.0,
            ..baseline()
        };
        assert_eq!(critical_phi(&labor_only, 1.0).unwrap(), None);
        let steep = LandEconomy {
            alpha: 0.9,
            ..baseline()
        };
        assert_eq!(critical_phi(&steep, 1.0).unwrap(), None);
        let strong_elderly = LandEconomy {
            a_e: 1.0,
            ..baseline()
        };
        assert!(matches!(
            critical_phi(&strong_elderly, 1.0),
            Err(ModelError::RegimeViolated { .. })
        ));
    }

    #[test]
    fn critical_phi_zeroes_slope_numerator() {
        let e = LandEconomy::new(0.4, 1.0, 0.2, 1.0, 1.4, 1.0).unwrap();
        let phi = critical_phi(&e, 1.6).unwrap().unwrap();
        assert!(slope_numerator(&e, 1.6, phi).abs() < 1e-13);
    }

    #[test]
    fn sweep_band_follows_threshold() {
        let prefs = PreferenceParams::new(0.25, 1.0, 0.2).unwrap();
        let rows = phi_sweep(&baseline(), 1.0, &prefs, &phi_grid(101)).unwrap();
        assert_eq!(rows.len(), 101);
        assert_eq!(rows[0].income_ratio, 1.0);
        let y_star = inculcation_threshold(&prefs, 0.0).unwrap();
        for r in &rows {
            assert_eq!(r.inculcation, r.income_ratio <= y_star);
            if !r.inculcation {
                assert_eq!(r.consumption_ratio, r.income_ratio);
            }
        }
        // Band is interior: off at both ends, on around the minimum.
        assert!(!rows[0].inculcation && !rows[100].inculcation);
        assert!(rows[49].inculcation);
    }

    #[test]
    fn phi_grid_shape() {
        let g = phi_grid(101);
        assert_eq!(g.len(), 101);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[100], 1.0);
        assert_relative_eq!(g[1], 0.01);
        assert_eq!(phi_grid(1), vec![0.0]);
    }
}
