//! Residual suite comparing closed forms with the brute-force oracle.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::accumulation::{
    eta_star_unclamped, gift_with_accumulation, inculcation_kink, savings_allocation,
    simulate_path, steady_state, CapitalOnlyRatios, GrowthParams, PathSetup, PathSolverOptions,
};
use crate::error::Result;
use crate::ethno::correlate;
use crate::oracle::{
    bracket_threshold, finite_difference_gradient, maximize_lifetime_utility, static_delta_utility,
    CostKind, GridSpec, LifetimeProblem,
};
use crate::property_rights::{
    critical_phi, income_decomposition, slope_numerator, LandEconomy, RightsParams,
};
use crate::static_economy::{
    cultural_market, inculcation_threshold, optimal_gift_simple, PreferenceParams, StaticIncomes,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SuiteOptions {
    pub seed: u64,
    pub draws: usize,
    pub oracle_instances: usize,
    pub resolution: usize,
    pub refinement_rounds: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            draws: 1000,
            oracle_instances: 100,
            resolution: GridSpec::DEFAULT_RESOLUTION,
            refinement_rounds: GridSpec::DEFAULT_ROUNDS,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl CheckOutcome {
    fn new(name: &'static str, residual: f64, tolerance: f64) -> Self {
        Self {
            name,
            residual,
            tolerance,
            passed: residual.is_finite() && residual < tolerance,
        }
    }
}

/// Random lifetime problem with an interior solution, and its closed-form choice.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleInstance {
    pub problem: LifetimeProblem,
    /// Gift per unit of next-period taste.
    pub psi_next: f64,
    pub g: f64,
    pub s: f64,
    pub eta_next: f64,
}

impl OracleInstance {
    pub fn draw<R: Rng>(rng: &mut R) -> Result<Self> {
        let beta = rng.gen_range(0.5..2.0);
        let y_m = rng.gen_range(0.5..2.0);
        let delta = rng.gen_range(0.05..0.3);
        let r_next = rng.gen_range(1.0..4.0);
        let y_e_next = rng.gen_range(0.0..0.5) * beta * y_m * r_next;
        let problem = LifetimeProblem {
            y_m,
            cost: delta * y_m,
            cost_kind: CostKind::Proportional,
            eta_t: rng.gen_range(0.1..0.9),
            beta,
            n: rng.gen_range(0.0..0.5),
            r_next,
            y_e_next,
        };
        let alloc = savings_allocation(beta, delta, y_m, y_e_next, r_next)?;
        let s = rng.gen_range(0.2..0.8) * alloc.total;
        Ok(Self {
            problem,
            psi_next: problem.cost * r_next / (1.0 + problem.n),
            g: gift_with_accumulation(problem.eta_t, beta, y_m, y_e_next, r_next)?,
            s,
            eta_next: alloc.inculcation(s),
        })
    }

    pub fn grid(&self, resolution: usize, rounds: usize) -> Result<GridSpec> {
        let p = &self.problem;
        GridSpec::new(
            [
                (0.0, p.y_m),
                (self.s, self.s),
                (0.0, (p.y_m - self.s) / p.cost),
            ],
            resolution,
            rounds,
        )
    }

    pub fn utility_at(&self, x: &[f64]) -> f64 {
        let psi = self.psi_next;
        self.problem.utility(x[0], x[1], x[2], &|e| e * psi)
    }
}

fn max_rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

pub fn run_suite(opts: &SuiteOptions) -> Result<Vec<CheckOutcome>> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut out = Vec::new();

    let mut worst: f64 = 0.0;
    for _ in 0..opts.draws {
        let prefs = PreferenceParams::new(
            rng.gen_range(0.01..0.99),
            rng.gen_range(0.1..3.0),
            rng.gen_range(0.0..0.9),
        )?;
        let inc = StaticIncomes::new(rng.gen_range(0.1..10.0), 1.0, rng.gen_range(-0.5..1.0))?;
        let m = cultural_market(&prefs, &inc)?;
        let g = optimal_gift_simple(&prefs, true, inc.y_m, false)?;
        worst = worst.max(max_rel(m.expenditure(), g));
    }
    out.push(CheckOutcome::new("gift-market equivalence", worst, 1e-12));

    let prefs = PreferenceParams::new(0.5, 1.0, 0.2)?;
    let bracketed = bracket_threshold(
        |r| {
            let inc = StaticIncomes::new(1.0, r, 0.0).expect("valid incomes");
            static_delta_utility(&prefs, &inc, opts.resolution, 4).unwrap_or(f64::NAN)
        },
        0.5,
        5.0,
        1e-10,
    )?;
    out.push(CheckOutcome::new(
        "threshold bracket vs closed form",
        (bracketed - inculcation_threshold(&prefs, 0.0)?).abs(),
        1e-6,
    ));

    let econ = LandEconomy::from_growth(0.5, 1.0, 0.025, 1.0, 0.0)?;
    let phi_star = critical_phi(&econ, 1.0)?.unwrap_or(f64::NAN);
    let bracketed = bracket_threshold(|phi| slope_numerator(&econ, 1.0, phi), 1e-6, 1.0, 1e-12)?;
    out.push(CheckOutcome::new(
        "critical phi bracket vs closed form",
        (bracketed - phi_star).abs(),
        1e-6,
    ));

    let mut worst: f64 = 0.0;
    for _ in 0..opts.draws {
        let a_m = rng.gen_range(0.5..2.0);
        let econ = LandEconomy::new(
            rng.gen_range(0.05..1.0),
            a_m,
            rng.gen_range(0.0..1.0) * a_m,
            rng.gen_range(0.1..10.0),
            rng.gen_range(0.5..3.0),
            rng.gen_range(0.5..3.0),
        )?;
        let rights = RightsParams::new(rng.gen_range(0.0..=1.0), rng.gen_range(0.5..3.0))?;
        let d = income_decomposition(&econ, &rights)?;
        let total = econ.n_m * d.y_m + econ.n_e * d.y_e;
        worst = worst.max(max_rel(total, d.euler.output));
    }
    out.push(CheckOutcome::new("income exhausts output", worst, 1e-12));

    let (mut comp, mut foc, mut grad, mut order): (f64, f64, f64, f64) = (0.0, 0.0, 0.0, 0.0);
    for _ in 0..opts.oracle_instances {
        let inst = OracleInstance::draw(&mut rng)?;
        let psi = inst.psi_next;
        let m = maximize_lifetime_utility(
            &inst.problem,
            |e| e * psi,
            &inst.grid(opts.resolution, opts.refinement_rounds)?,
        )?;
        comp = comp
            .max(max_rel(m.g, inst.g))
            .max(max_rel(m.s, inst.s))
            .max(max_rel(m.eta_next, inst.eta_next));
        let x = [inst.g, inst.s, inst.eta_next];
        for r in inst.problem.foc_residuals(x[0], x[1], x[2], psi) {
            foc = foc.max(r.abs());
        }
        for d in finite_difference_gradient(|v| inst.utility_at(v), &x, 1e-5)? {
            grad = grad.max(d.abs());
        }
        let off = [0.9 * inst.g, 1.1 * inst.s, 0.95 * inst.eta_next];
        let exact = inst.problem.foc_residuals(off[0], off[1], off[2], psi);
        let scaled = |v: &[f64]| {
            inst.utility_at(&[
                off[0] * (1.0 + v[0]),
                off[1] * (1.0 + v[1]),
                off[2] * (1.0 + v[2]),
            ])
        };
        let coarse = finite_difference_gradient(scaled, &[0.0; 3], 1e-2)?;
        let fine = finite_difference_gradient(scaled, &[0.0; 3], 5e-3)?;
        for i in 0..3 {
            let target = exact[i] * off[i];
            let ratio = (coarse[i] - target).abs() / (fine[i] - target).abs();
            if ratio.is_finite() {
                order = order.max((ratio.log2() - 2.0).abs());
            }
        }
    }
    out.push(CheckOutcome::new(
        "oracle maximizer vs closed form",
        comp,
        1e-5,
    ));
    out.push(CheckOutcome::new(
        "first-order conditions at closed form",
        foc,
        1e-8,
    ));
    out.push(CheckOutcome::new(
        "utility gradient at closed form",
        grad,
        1e-6,
    ));
    out.push(CheckOutcome::new(
        "finite-difference order deviation",
        order,
        0.1,
    ));

    let p = GrowthParams::new(0.0, 0.0, 0.5, 1.0, 0.2, 0.0)?;
    let ss = steady_state(&p)?;
    let res = ss
        .residuals(&p)
        .max_abs()
        .max((ss.r - 2.5).abs())
        .max((ss.eta - 0.5).abs())
        .max((ss.consumption_ratio - 5.0).abs());
    out.push(CheckOutcome::new(
        "steady state without elderly labor",
        res,
        1e-10,
    ));
    let p5 = GrowthParams { tau_e: 0.5, ..p };
    let ss5 = steady_state(&p5)?;
    let res = ss5
        .residuals(&p5)
        .max_abs()
        .max((ss5.r - 3.5).abs())
        .max((ss5.consumption_ratio - 3.5).abs())
        .max(ss5.eta);
    out.push(CheckOutcome::new(
        "steady state with elderly labor",
        res,
        1e-10,
    ));

    let b = CapitalOnlyRatios::new(&GrowthParams { delta: 0.25, ..p });
    out.push(CheckOutcome::new(
        "regime branches meet",
        (b.no_inculcation - 2.0)
            .abs()
            .max((b.inculcation - 2.0).abs()),
        1e-12,
    ));

    let kink = bracket_threshold(
        |x| eta_star_unclamped(p.beta, p.delta, 1.0 / (1.0 + x)),
        0.01,
        10.0,
        1e-13,
    )?;
    out.push(CheckOutcome::new(
        "capital-intensity kink",
        (kink - inculcation_kink(p.beta, p.delta)).abs(),
        1e-9,
    ));

    let path = simulate_path(
        &p,
        &PathSetup {
            k0: 0.01,
            horizon: 60,
            eta0: None,
        },
        &PathSolverOptions::default(),
    )?;
    out.push(CheckOutcome::new(
        "transition reaches steady state",
        (path.k[60] - ss.k).abs(),
        1e-10,
    ));
    let anchored = simulate_path(
        &GrowthParams {
            alpha: 1.0 / 1.9,
            tau_e: 0.1,
            ..p
        },
        &PathSetup {
            k0: 0.02,
            horizon: 120,
            eta0: None,
        },
        &PathSolverOptions::default(),
    )?;
    out.push(CheckOutcome::new(
        "anchored path residual",
        anchored.diagnostics.max_residual,
        1e-8,
    ));

    let r = correlate(&[1.0, 2.0, 3.0, 4.0, 5.0], &[1.0, 3.0, 2.0, 5.0, 4.0])
        .map(|c| (c.r - 0.8).abs())
        .unwrap_or(f64::NAN);
    out.push(CheckOutcome::new("pearson fixture", r, 1e-9));

    Ok(out)
}
