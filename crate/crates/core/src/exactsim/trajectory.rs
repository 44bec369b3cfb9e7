//! Time evolution of an ensemble and time averages of the result.

use std::collections::BTreeMap;
use std::io::Write;

use rayon::prelude::*;

use super::basis::Sector;
use super::ensemble::EnsembleState;
use super::hamiltonian::build_hamiltonian;
use super::observables::{dot, norm_sqr, vector_observables, Observables};
use super::propagate::{Propagator, PropagatorKind};
use super::sparse::SparseOperator;
use crate::csv::{fmt15, write_header, write_row};
use crate::error::{Error, Result};
use crate::params::SystemParams;
use crate::scalar::Real;

/// Uniform grid `t_k = k·dt`, `k = 0..=steps`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid<T> {
    pub dt: T,
    pub steps: usize,
}

impl<T: Real> TimeGrid<T> {
    pub fn new(dt: T, steps: usize) -> Result<Self> {
        if !(dt > T::zero()) || !dt.is_finite() {
            return Err(Error::Grid("time step must be positive".into()));
        }
        Ok(Self { dt, steps })
    }

    /// `periods` membrane periods sampled with `points_per_period` steps each.
    pub fn periods(omega_m: T, periods: usize, points_per_period: usize) -> Result<Self> {
        let period = T::lit(2.0) * T::PI() / omega_m;
        Self::new(
            period / T::from_usize(points_per_period).unwrap(),
            periods * points_per_period,
        )
    }

    pub fn time(&self, k: usize) -> T {
        self.dt * T::from_usize(k).unwrap()
    }

    pub fn end(&self) -> T {
        self.time(self.steps)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    X,
    X2,
    VarX,
    HM,
    DNV,
    DNH,
    DKV,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<T> {
    pub grid: TimeGrid<T>,
    pub omega_m: T,
    pub records: Vec<Observables<T>>,
    /// Largest `|‖ψ‖² − 1|` over members at each time.
    pub norm_drift: Vec<T>,
    /// Weighted `⟨H⟩` at each time.
    pub energy: Vec<T>,
    /// Largest relative change of a member's `⟨H⟩` over the run.
    pub max_energy_drift: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EvolveOptions {
    pub propagator: PropagatorKind,
}

struct MemberRun<T> {
    obs: Vec<Observables<T>>,
    norms: Vec<T>,
    energies: Vec<T>,
}

/// Evolves every member of `state` under the full Hamiltonian of `params`
/// and records ensemble observables on `grid`.
pub fn evolve<T: Real>(
    state: &EnsembleState<T>,
    params: &SystemParams<T>,
    grid: &TimeGrid<T>,
    opts: EvolveOptions,
) -> Result<Trajectory<T>> {
    let sectors: Vec<Sector> = state.bases.keys().copied().collect();
    let hams: Vec<SparseOperator<T>> = sectors
        .par_iter()
        .map(|s| build_hamiltonian(params, &state.bases[s]))
        .collect::<Result<_>>()?;
    let hams: BTreeMap<Sector, SparseOperator<T>> = sectors.into_iter().zip(hams).collect();
    let omega_max = params
        .omega
        .max(params.lambda_v)
        .max(params.lambda_h)
        .max(params.omega_m);

    let runs: Vec<MemberRun<T>> = state
        .members
        .par_iter()
        .map(|m| {
            let basis = state.basis(&m.sector);
            let h = &hams[&m.sector];
            let prop = Propagator::new(h, params.hbar, omega_max, opts.propagator);
            let mut psi = m.state.clone();
            let mut run = MemberRun {
                obs: Vec::with_capacity(grid.steps + 1),
                norms: Vec::with_capacity(grid.steps + 1),
                energies: Vec::with_capacity(grid.steps + 1),
            };
            for k in 0..=grid.steps {
                if k > 0 {
                    prop.step(&mut psi, grid.dt, grid.time(k))?;
                }
                run.obs.push(vector_observables(&psi, basis, params));
                run.norms.push(norm_sqr(&psi));
                run.energies.push(dot(&psi, &h.apply(&psi)).re);
            }
            Ok(run)
        })
        .collect::<Result<_>>()?;

    let total = state.total_weight();
    let mut records = vec![Observables::default(); grid.steps + 1];
    let mut energy = vec![T::zero(); grid.steps + 1];
    let mut norm_drift = vec![T::zero(); grid.steps + 1];
    let mut max_energy_drift = T::zero();
    for (m, run) in state.members.iter().zip(&runs) {
        let e0 = run.energies[0];
        let scale = e0.abs().max(params.hbar * params.omega_m);
        for k in 0..=grid.steps {
            records[k].accumulate(&run.obs[k], m.weight);
            energy[k] = energy[k] + m.weight * run.energies[k];
            norm_drift[k] = norm_drift[k].max((run.norms[k] - T::one()).abs());
            max_energy_drift = max_energy_drift.max((run.energies[k] - e0).abs() / scale);
        }
    }
    let inv = T::one() / total;
    for k in 0..=grid.steps {
        records[k] = records[k].scaled(inv);
        energy[k] = energy[k] * inv;
    }
    Ok(Trajectory {
        grid: *grid,
        omega_m: params.omega_m,
        records,
        norm_drift,
        energy,
        max_energy_drift,
    })
}

impl<T: Real> Trajectory<T> {
    pub fn times(&self) -> Vec<T> {
        (0..=self.grid.steps).map(|k| self.grid.time(k)).collect()
    }

    pub fn series(&self, q: Quantity) -> Vec<T> {
        self.records
            .iter()
            .map(|r| match q {
                Quantity::X => r.x,
                Quantity::X2 => r.x2,
                Quantity::VarX => r.x2 - r.x * r.x,
                Quantity::HM => r.h_m,
                Quantity::DNV => r.dnv,
                Quantity::DNH => r.dnh,
                Quantity::DKV => r.dkv,
            })
            .collect()
    }

    pub fn max_norm_drift(&self) -> T {
        self.norm_drift.iter().copied().fold(T::zero(), T::max)
    }

    /// Columns `t, X_M, X_M2, H_M, dNV, dNH, dKV, norm_drift`.
    pub fn write_csv<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        write_header(w, &["t", "X_M", "X_M2", "H_M", "dNV", "dNH", "dKV", "norm_drift"])?;
        for (k, r) in self.records.iter().enumerate() {
            let cells = [
                self.grid.time(k),
                r.x,
                r.x2,
                r.h_m,
                r.dnv,
                r.dnh,
                r.dkv,
                self.norm_drift[k],
            ]
            .map(|v| fmt15(v.to_f64_lossy()));
            write_row(w, &cells)?;
        }
        Ok(())
    }
}

/// Trapezoid-rule average of uniformly spaced samples.
pub fn trapezoid_average<T: Real>(values: &[T]) -> T {
    let n = values.len();
    if n < 2 {
        return values.first().copied().unwrap_or(T::zero());
    }
    let inner: T = values[1..n - 1].iter().copied().sum();
    (inner + (values[0] + values[n - 1]) * T::lit(0.5)) / T::from_usize(n - 1).unwrap()
}

/// Average of `q` over `[t0, t0 + τ]`. The window must be an integer
/// number of steps and the grid must resolve the membrane period with at
/// least 64 samples.
pub fn cycle_average_from<T: Real>(traj: &Trajectory<T>, t0: T, tau: T, q: Quantity) -> Result<T> {
    let period = T::lit(2.0) * T::PI() / traj.omega_m;
    if traj.grid.dt * T::lit(64.0) > period * T::lit(1.0 + 1e-9) {
        return Err(Error::Grid(format!(
            "time step {:e} gives fewer than 64 samples per membrane period",
            traj.grid.dt.to_f64_lossy()
        )));
    }
    let to_steps = |x: T, what: &str| -> Result<usize> {
        let s = (x / traj.grid.dt).to_f64_lossy();
        let r = s.round();
        if (s - r).abs() > 1e-6 * r.max(1.0) || r < 0.0 {
            return Err(Error::Grid(format!("{what} is not a whole number of time steps")));
        }
        Ok(r as usize)
    };
    let start = to_steps(t0, "window start")?;
    let len = to_steps(tau, "window length")?;
    if len == 0 || start + len > traj.grid.steps {
        return Err(Error::Grid("averaging window exceeds the trajectory".into()));
    }
    Ok(trapezoid_average(&traj.series(q)[start..=start + len]))
}

pub fn cycle_average<T: Real>(traj: &Trajectory<T>, tau: T, q: Quantity) -> Result<T> {
    cycle_average_from(traj, T::zero(), tau, q)
}
