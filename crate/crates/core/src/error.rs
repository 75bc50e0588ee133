use thiserror::Error;

/// Errors raised by the model solvers and closed forms.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("parameter `{name}` = {value} is outside its domain {domain}")]
    Domain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("the U-shape regime requires a_e < a_m (got a_e = {a_e}, a_m = {a_m})")]
    RegimeViolated { a_e: f64, a_m: f64 },

    #[error("no net saving motive: total future allocation {total} is negative")]
    NoNetSaving { total: f64 },

    #[error("utility weights out of range: inculcation level {eta} is not below 1")]
    UtilityWeightOutOfRange { eta: f64 },

    #[error("steady-state return equation has no positive root")]
    NoPositiveRoot,

    #[error(
        "path solver did not converge after {iterations} iterations (max residual {residual:e})"
    )]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("function does not change sign on [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },

    #[error("feasible set of the lifetime problem is empty")]
    EmptyFeasibleSet,

    #[error("finite-difference step could not be made feasible at coordinate {coordinate}")]
    InfeasibleStep { coordinate: usize },
}

pub type Result<T> = std::result::Result<T, ModelError>;

pub(crate) fn check(name: &'static str, value: f64, domain: &'static str, ok: bool) -> Result<()> {
    if ok && value.is_finite() {
        Ok(())
    } else {
        Err(ModelError::Domain {
            name,
            value,
            domain,
        })
    }
}
