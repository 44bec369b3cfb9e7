//! Exact-engine θ sweep with the closed forms alongside.

use gibbsmix::analytic::{energy_transfer_general, time_averaged_displacement};
use gibbsmix::{initial_moments, GasSpec, MembraneSpec};

use super::{exact_run, finish, par_map, Outcome};
use crate::config::ExperimentConfig;
use crate::error::CliResult;
use crate::grid::theta_grid;
use crate::output::{save_with, Table};
use crate::svg::{Plot, Series, Style};

pub const D_M: usize = 16;

pub fn run(cfg: &ExperimentConfig) -> CliResult<Outcome> {
    let p = cfg.system();
    let n = cfg.photons;
    let thetas = theta_grid(cfg.theta_points);
    let results = par_map(&thetas, |&t| {
        let states = (GasSpec::fock(n, 0.0), GasSpec::fock(n, t), MembraneSpec::ground());
        let (e, traj) = exact_run(&p, &states, D_M, cfg.periods)?;
        let mo = initial_moments(&states.0, &states.1, &states.2, &p)?;
        let analytic = (time_averaged_displacement(&mo, &p), energy_transfer_general(&mo, &p)?);
        Ok((e, analytic, traj))
    })?;

    let mut files = Vec::new();
    let mut table = Table::new(&[
        "theta",
        "exact_disp",
        "analytic_disp",
        "exact_dH",
        "analytic_dH",
        "max_norm_drift",
        "max_energy_drift",
        "dNH_drift",
        "trajectory_file",
    ]);
    for (k, (&t, (e, (xd, dh), traj))) in thetas.iter().zip(&results).enumerate() {
        let name = format!("sweep_theta_{k:03}.csv");
        let path = cfg.out.join(&name);
        save_with(&path, |w| traj.write_csv(w))?;
        files.push(path);
        table.push(vec![
            t.into(),
            e.displacement.into(),
            (*xd).into(),
            e.energy_transfer.into(),
            (*dh).into(),
            e.max_norm_drift.into(),
            e.max_energy_drift.into(),
            e.dnh_drift.into(),
            name.into(),
        ]);
    }
    let path = cfg.out.join("sweep.csv");
    table.save(&path)?;
    files.insert(0, path);

    if cfg.plots {
        let unit = p.length_unit();
        let mut plot = Plot::new(
            &format!("Exact sweep, Fock n = {n}"),
            "θ (rad)",
            "⟨X̄_M⟩  [ħg_H/(mω_M²)]",
        );
        let pts = |f: &dyn Fn(usize) -> f64| {
            thetas
                .iter()
                .enumerate()
                .map(|(k, &t)| (t, f(k) / unit))
                .collect::<Vec<_>>()
        };
        plot.add(Series::new("closed form", pts(&|k| results[k].1 .0), Style::Line, 0));
        plot.add(Series::new(
            "exact",
            pts(&|k| results[k].0.displacement),
            Style::Markers,
            1,
        ));
        let path = cfg.out.join("sweep.svg");
        plot.save(&path)?;
        files.push(path);
    }

    let norm = results.iter().map(|r| r.0.max_norm_drift).fold(0.0, f64::max);
    let summary = format!(
        "sweep: {} θ points, Fock n = {n}, d_M = {D_M}, max norm drift {norm:.2e}",
        thetas.len()
    );
    Ok(finish(cfg, files, summary))
}
