use std::fs::File;

use eldershare_core::accumulation::{capital_intensity_sweep, simulate_path, steady_state};
use eldershare_core::ethno::{
    build_index, builtin_index_specs, correlate_pairs, default_pairs, load_trait_table,
    parse_index_specs, IndexSpec, TraitTable,
};
use eldershare_core::property_rights::{
    critical_phi, income_decomposition, income_ratio_full_rights, phi_grid, phi_sweep, RightsParams,
};
use eldershare_core::static_economy::{inculcation_threshold, solve_static};
use eldershare_core::verify::{run_suite, SuiteOptions};
use rayon::prelude::*;

use crate::config::{Model, ScenarioConfig};
use crate::error::CliError;
use crate::output::{Cell, Table};

pub fn steady(cfg: &ScenarioConfig) -> Result<Table, CliError> {
    match cfg.model {
        Model::Accumulation => {
            let p = cfg.growth()?;
            let s = steady_state(&p)?;
            let mut t = Table::new(&[
                "r",
                "k",
                "eta",
                "consumption_ratio",
                "regime",
                "eta_unclamped",
                "gamma_e",
            ]);
            t.push(vec![
                s.r.into(),
                s.k.into(),
                s.eta.into(),
                s.consumption_ratio.into(),
                s.regime.as_str().into(),
                s.eta_unclamped.into(),
                p.gamma_e().into(),
            ]);
            Ok(t)
        }
        Model::Static => {
            let prefs = cfg.static_prefs()?;
            let inc = cfg.static_incomes()?;
            let o = solve_static(&prefs, &inc)?;
            let mut t = Table::new(&[
                "income_ratio",
                "threshold",
                "inculcation",
                "delta_u",
                "gift",
                "consumption_ratio",
                "cultural_price",
                "cultural_demand",
            ]);
            t.push(vec![
                inc.income_ratio().into(),
                inculcation_threshold(&prefs, inc.n)?.into(),
                o.inculcate.into(),
                o.delta_u.into(),
                o.gift.into(),
                o.consumption_ratio.into(),
                o.cultural_price.into(),
                o.cultural_demand.into(),
            ]);
            Ok(t)
        }
        Model::PropertyRights => {
            let econ = cfg.land_economy()?;
            let pr = &cfg.property_rights;
            let rights = RightsParams::new(pr.phi, pr.rho)?;
            let d = income_decomposition(&econ, &rights)?;
            let row = phi_sweep(&econ, pr.rho, &cfg.overlay_prefs()?, &[pr.phi])?[0];
            let mut t = Table::new(&[
                "phi",
                "income_ratio",
                "y_m",
                "y_e",
                "sigma_m",
                "sigma_e",
                "output",
                "critical_phi",
                "full_rights_ratio",
                "consumption_ratio",
                "inculcation",
            ]);
            t.push(vec![
                pr.phi.into(),
                row.income_ratio.into(),
                d.y_m.into(),
                d.y_e.into(),
                d.sigma_m.into(),
                d.sigma_e.into(),
                d.euler.output.into(),
                critical_phi(&econ, pr.rho)?.into(),
                income_ratio_full_rights(&econ).into(),
                row.consumption_ratio.into(),
                row.inculcation.into(),
            ]);
            Ok(t)
        }
    }
}

pub fn simulate(cfg: &ScenarioConfig) -> Result<Table, CliError> {
    let p = cfg.growth()?;
    let steady = steady_state(&p)?;
    let path = simulate_path(&p, &cfg.path_setup(steady.k), &cfg.solver())?;
    eprintln!(
        "path solved in {} iteration(s), max residual {:e}",
        path.diagnostics.iterations, path.diagnostics.max_residual
    );
    let mut t = Table::new(&[
        "t",
        "k",
        "r",
        "a_m",
        "y_m",
        "y_e",
        "s_m",
        "g_m",
        "eta",
        "eta_next",
        "c_m",
        "c_e",
        "consumption_ratio",
        "regime_next",
    ]);
    for s in &path.periods {
        t.push(vec![
            s.t.into(),
            s.k.into(),
            s.r.into(),
            s.a_m.into(),
            s.y_m.into(),
            s.y_e.into(),
            s.s_m.into(),
            s.g_m.into(),
            s.eta.into(),
            s.eta_next.into(),
            s.c_m.into(),
            s.c_e.into(),
            (s.c_e / s.c_m).into(),
            s.regime_next.as_str().into(),
        ]);
    }
    Ok(t)
}

pub fn sweep_phi(cfg: &ScenarioConfig) -> Result<Table, CliError> {
    let econ = cfg.land_economy()?;
    let prefs = cfg.overlay_prefs()?;
    let rho = cfg.property_rights.rho;
    if cfg.sweep.phi_points < 2 {
        return Err(CliError::Config(format!(
            "sweep.phi_points = {} must be at least 2",
            cfg.sweep.phi_points
        )));
    }
    let rows = phi_grid(cfg.sweep.phi_points)
        .par_iter()
        .map(|&phi| phi_sweep(&econ, rho, &prefs, &[phi]).map(|r| r[0]))
        .collect::<Result<Vec<_>, _>>()?;
    let mut t = Table::new(&["phi", "income_ratio", "consumption_ratio", "inculcation"]);
    for r in rows {
        t.push(vec![
            r.phi.into(),
            r.income_ratio.into(),
            r.consumption_ratio.into(),
            r.inculcation.into(),
        ]);
    }
    Ok(t)
}

pub fn sweep_capital_intensity(cfg: &ScenarioConfig) -> Result<Table, CliError> {
    let base = cfg.growth()?;
    let grid = cfg.intensity_grid()?;
    let blocks = cfg
        .sweep
        .tau_e
        .par_iter()
        .map(|&tau_e| {
            let p = eldershare_core::accumulation::GrowthParams { tau_e, ..base };
            p.validate()?;
            grid.par_chunks(16)
                .map(|chunk| capital_intensity_sweep(&p, chunk))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut t = Table::new(&[
        "tau_e",
        "capital_intensity",
        "alpha",
        "status",
        "regime",
        "r",
        "eta",
        "consumption_ratio",
    ]);
    for pt in blocks.into_iter().flatten().flatten() {
        let mut row: Vec<Cell> = vec![
            pt.tau_e.into(),
            pt.capital_intensity.into(),
            pt.alpha.into(),
        ];
        match pt.state {
            Some(s) => row.extend([
                "ok".into(),
                s.regime.as_str().into(),
                s.r.into(),
                s.eta.into(),
                s.consumption_ratio.into(),
            ]),
            None => row.extend([
                "eta-out-of-range".into(),
                Cell::Empty,
                Cell::Empty,
                Cell::Empty,
                Cell::Empty,
            ]),
        }
        t.push(row);
    }
    Ok(t)
}

fn ethno_inputs(cfg: &ScenarioConfig) -> Result<(TraitTable, Vec<IndexSpec>), CliError> {
    let path = cfg
        .ethno
        .table
        .as_ref()
        .ok_or_else(|| CliError::Config("ethno.table is required".into()))?;
    let path = cfg.resolve(path);
    let file = File::open(&path).map_err(|e| CliError::io(&path, e))?;
    let table = load_trait_table(file)?;
    let specs = match &cfg.ethno.indices {
        None => builtin_index_specs(),
        Some(p) => {
            let p = cfg.resolve(p);
            let text = std::fs::read_to_string(&p).map_err(|e| CliError::io(&p, e))?;
            parse_index_specs(&text)?
        }
    };
    Ok((table, specs))
}

pub fn indices(cfg: &ScenarioConfig) -> Result<Table, CliError> {
    let (table, specs) = ethno_inputs(cfg)?;
    let scores = specs
        .par_iter()
        .map(|s| build_index(&table, s))
        .collect::<Result<Vec<_>, _>>()?;
    let mut cols = vec!["society"];
    cols.extend(specs.iter().map(|s| s.name.as_str()));
    let mut t = Table::new(&cols);
    for (i, society) in table.societies.iter().enumerate() {
        let mut row: Vec<Cell> = vec![society.as_str().into()];
        row.extend(scores.iter().map(|s| Cell::Int(s[i] as i64)));
        t.push(row);
    }
    Ok(t)
}

pub fn correlate(cfg: &ScenarioConfig) -> Result<Table, CliError> {
    let (table, specs) = ethno_inputs(cfg)?;
    let pairs = cfg.ethno.pairs.clone().unwrap_or_else(default_pairs);
    let results = pairs
        .par_chunks(4)
        .map(|chunk| correlate_pairs(&table, &specs, chunk))
        .collect::<Result<Vec<_>, _>>()?;
    let mut t = Table::new(&[
        "index_a",
        "index_b",
        "r",
        "n",
        "t",
        "p_value",
        "test",
        "significant_95",
        "marker",
    ]);
    for c in results.into_iter().flatten() {
        let s = c.stats;
        t.push(vec![
            c.pair.0.into(),
            c.pair.1.into(),
            s.r.into(),
            s.n.into(),
            s.t.into(),
            s.p_value.into(),
            "two-tailed-student-t".into(),
            s.significant_95.into(),
            if s.significant_95 { "*" } else { "" }.into(),
        ]);
    }
    Ok(t)
}

pub fn verify(cfg: &ScenarioConfig, seed: u64) -> Result<(Table, usize), CliError> {
    let o = &cfg.oracle;
    let outcomes = run_suite(&SuiteOptions {
        seed,
        draws: o.draws,
        oracle_instances: o.instances,
        resolution: o.resolution,
        refinement_rounds: o.refinement_rounds,
    })?;
    let mut t = Table::new(&["check", "residual", "tolerance", "passed"]);
    let mut failed = 0;
    for c in &outcomes {
        eprintln!(
            "{:<40} {:>12.3e} < {:8.1e}  {}",
            c.name,
            c.residual,
            c.tolerance,
            if c.passed { "ok" } else { "FAIL" }
        );
        failed += usize::from(!c.passed);
        t.push(vec![
            c.name.into(),
            c.residual.into(),
            c.tolerance.into(),
            c.passed.into(),
        ]);
    }
    Ok((t, failed))
}
