//! The named experiments behind `usc-qed run`.

use std::path::Path;

use serde_json::json;

use super::config::{Experiment, FockSetting, HamiltonianKind, RunConfig};
use super::output::{Cell, RunOutput, Table};
use crate::dynamics::{
    build_ansatz, converge_fock, evolve, master_equation, steady_state, trace_distance, AnsatzForm, Dissipator,
    EvolveOptions, GroundObservable, Observable, SteadyOptions,
};
use crate::entanglement::{eof_lower_bound, EntanglementReport};
use crate::error::{Error, Result};
use crate::hilbert::{partial_trace, Slot};
use crate::linalg::ComplexMatrix;
use crate::model::{dressed_spectrum, jc_hamiltonian, rabi_hamiltonian, RabiParams};

fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

/// Keeps row order; the first failure is reported together with how many rows succeeded.
fn collect_rows<R>(results: Vec<Result<R>>) -> Result<Vec<R>> {
    let total = results.len();
    let completed = results.iter().filter(|r| r.is_ok()).count();
    let mut out = Vec::with_capacity(total);
    for r in results {
        match r {
            Ok(v) => out.push(v),
            Err(source) => return Err(Error::Partial { completed, total, source: Box::new(source) }),
        }
    }
    Ok(out)
}

fn params(cfg: &RunConfig, g: f64, d: usize) -> Result<RabiParams> {
    RabiParams { omega_a: cfg.omega_a, omega_f: cfg.omega_f, g, kappa: cfg.kappa, fock_dim: d }.validated()
}

/// Truncation for a dynamics run: fixed, or the ground-state convergence point of the A–F bound.
fn dynamics_fock_dim(cfg: &RunConfig, g: f64) -> Result<usize> {
    let floor = (cfg.initial_state.max_fock_index() + 2).max(4);
    match cfg.fock {
        FockSetting::Fixed(d) => Ok(d),
        FockSetting::Auto => {
            let c = converge_fock(
                &params(cfg, g, 2)?,
                GroundObservable::EofLowerBoundAF,
                cfg.tolerances.fock_tol,
                cfg.tolerances.fock_cap,
            )?;
            Ok(c.d_star.max(floor))
        }
    }
}

fn sweep_fock_dim(cfg: &RunConfig, p: &RabiParams, observable: GroundObservable) -> Result<usize> {
    match cfg.fock {
        FockSetting::Fixed(d) => Ok(d),
        FockSetting::Auto => Ok(converge_fock(p, observable, cfg.tolerances.fock_tol, cfg.tolerances.fock_cap)?.d_star),
    }
}

fn header(cfg: &RunConfig) -> Vec<(String, String)> {
    cfg.describe().into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

fn initial_rho(cfg: &RunConfig, p: &RabiParams) -> Result<ComplexMatrix> {
    Ok(ComplexMatrix::projector(&cfg.initial_state.ket(&p.layout())?))
}

/// Ansatz matching the dissipator, if one is defined and the initial state admits it.
fn ansatz_for(cfg: &RunConfig, p: &RabiParams, rho0: &ComplexMatrix) -> Result<Option<ComplexMatrix>> {
    let layout = p.layout();
    let rho_ab0 = partial_trace(rho0, &[Slot::A, Slot::B], &layout)?;
    let built = match cfg.dissipator {
        Dissipator::Standard => build_ansatz(&rho_ab0, AnsatzForm::Rwa, &layout),
        Dissipator::Improved => {
            let spec = dressed_spectrum(&rabi_hamiltonian(p)?)?;
            build_ansatz(&rho_ab0, AnsatzForm::NonRwa(&spec), &layout)
        }
        Dissipator::StandardRabi => return Ok(None),
    };
    match built {
        Ok(a) => Ok(Some(a.rho)),
        Err(Error::GroundDarkCoherence { overlap }) => {
            log::warn!("no steady-state ansatz: ground/dark coherence {overlap:.3e}");
            Ok(None)
        }
        Err(e) => Err(e),
    }
}

pub fn run(cfg: &RunConfig) -> Result<RunOutput> {
    match cfg.experiment {
        Experiment::Spectrum => run_spectrum(cfg),
        Experiment::Evolve => run_evolve(cfg),
        Experiment::Steady => run_steady(cfg),
        Experiment::GroundEofSweep => run_ground_sweep(cfg, false),
        Experiment::Fig1a => run_fig1a(cfg),
        Experiment::Fig1b => run_ground_sweep(cfg, true),
    }
}

/// Lowest `levels` eigenvalues of H_R (or H_JC) across the sweep.
pub fn run_spectrum(cfg: &RunConfig) -> Result<RunOutput> {
    let xs = cfg.sweep.points();
    let results = par_map(&xs, |&x| -> Result<(usize, Vec<f64>)> {
        let g = x * cfg.omega_f;
        let d = sweep_fock_dim(cfg, &params(cfg, g, 2)?, GroundObservable::MeanPhotons)?;
        let p = params(cfg, g, d)?;
        let h = match cfg.hamiltonian {
            HamiltonianKind::Rabi => rabi_hamiltonian(&p)?,
            HamiltonianKind::JaynesCummings => jc_hamiltonian(&p)?,
        };
        let spec = dressed_spectrum(&h)?;
        Ok((d, spec.energies.into_iter().take(cfg.levels).collect()))
    });
    let rows = collect_rows(results)?;
    let mut table = Table::new(vec!["g_over_omega", "level", "energy", "fock_d_used"]);
    for (x, (d, energies)) in xs.iter().zip(&rows) {
        for (level, e) in energies.iter().enumerate() {
            table.push(vec![Cell::from(*x), level.into(), (*e).into(), (*d).into()]);
        }
    }
    let mut head = header(cfg);
    head.push(("d_star".into(), rows.iter().map(|(d, _)| d.to_string()).collect::<Vec<_>>().join(",")));
    Ok(RunOutput {
        header: head,
        summary: json!({ "experiment": "spectrum", "config": cfg, "rows": table.rows.len() }),
        table,
    })
}

pub fn run_evolve(cfg: &RunConfig) -> Result<RunOutput> {
    let d = dynamics_fock_dim(cfg, cfg.g)?;
    let p = params(cfg, cfg.g, d)?;
    let eq = master_equation(&p, cfg.dissipator)?;
    let rho0 = initial_rho(cfg, &p)?;
    let opts = EvolveOptions {
        t_end: cfg.t_end,
        dt: cfg.dt,
        record_every: cfg.stride,
        keep_states: false,
        observables: Observable::ALL.to_vec(),
    };
    let traj = evolve(&rho0, eq.as_ref(), &opts)?;
    traj.diagnostics.check()?;

    let mut columns = vec!["omega_t"];
    columns.extend(Observable::ALL.iter().map(|o| o.name()));
    let mut table = Table::new(columns);
    for (i, t) in traj.times.iter().enumerate() {
        let mut row = vec![Cell::from(t * cfg.omega_f)];
        row.extend(Observable::ALL.iter().map(|o| Cell::from(traj.observables[o][i])));
        table.push(row);
    }
    let mut head = header(cfg);
    head.push(("d_star".into(), d.to_string()));
    Ok(RunOutput {
        header: head,
        summary: json!({
            "experiment": "evolve",
            "config": cfg,
            "fock_d_used": d,
            "rows": table.rows.len(),
            "diagnostics": traj.diagnostics,
        }),
        table,
    })
}

pub fn run_steady(cfg: &RunConfig) -> Result<RunOutput> {
    let d = dynamics_fock_dim(cfg, cfg.g)?;
    let p = params(cfg, cfg.g, d)?;
    let layout = p.layout();
    let eq = master_equation(&p, cfg.dissipator)?;
    let rho0 = initial_rho(cfg, &p)?;
    let mut opts = SteadyOptions::for_kappa(cfg.kappa);
    opts.tol = cfg.tolerances.steady_tol;
    opts.dt = cfg.dt;
    if let Some(t) = cfg.tolerances.t_max {
        opts.t_max = t;
    }
    let ss = steady_state(&rho0, eq.as_ref(), &opts)?.require_converged()?;
    ss.diagnostics.check()?;

    let report = EntanglementReport::for_state(&ss.rho, &layout)?;
    let bf = eof_lower_bound(&partial_trace(&ss.rho, &[Slot::B, Slot::F], &layout)?, d)?;
    let ansatz = ansatz_for(cfg, &p, &rho0)?;
    let (ansatz_distance, ansatz_bound) = match &ansatz {
        Some(a) => (
            Some(trace_distance(&ss.rho, a)?),
            Some(eof_lower_bound(&partial_trace(a, &[Slot::A, Slot::F], &layout)?, d)?.bound),
        ),
        None => (None, None),
    };

    let mut quantities: Vec<(&'static str, f64)> = vec![
        ("time", ss.time),
        ("residual", ss.residual),
        ("eof_AB", report.eof_two_qubit),
        ("concurrence_AB", report.concurrence),
        ("discord_AB", report.discord),
        ("cond_entropy_AB", report.conditional_entropy),
        ("lambda_AF", report.lambda),
        ("eof_lower_bound_AF", report.eof_lower_bound),
        ("lambda_BF", bf.lambda),
        ("eof_lower_bound_BF", bf.bound),
    ];
    for obs in [Observable::SubradiantPopulation, Observable::MeanPhotons, Observable::MeanExcitation] {
        quantities.push((obs.name(), obs.evaluate(&ss.rho, &layout)?));
    }
    if let (Some(dist), Some(bound)) = (ansatz_distance, ansatz_bound) {
        quantities.push(("ansatz_trace_distance", dist));
        quantities.push(("ansatz_eof_lower_bound_AF", bound));
    }
    let mut table = Table::new(vec!["quantity", "value"]);
    for (name, v) in &quantities {
        table.push(vec![Cell::from(*name), Cell::from(*v)]);
    }
    let mut head = header(cfg);
    head.push(("d_star".into(), d.to_string()));
    let values: serde_json::Map<String, serde_json::Value> =
        quantities.iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
    Ok(RunOutput {
        header: head,
        summary: json!({
            "experiment": "steady",
            "config": cfg,
            "fock_d_used": d,
            "converged": ss.converged,
            "values": values,
            "diagnostics": ss.diagnostics,
        }),
        table,
    })
}

struct Fig1aSeries {
    d: usize,
    times: Vec<f64>,
    bound: Vec<f64>,
    residual: f64,
    ansatz_bound: Option<f64>,
    ansatz_distance: Option<f64>,
}

pub fn run_fig1a(cfg: &RunConfig) -> Result<RunOutput> {
    let results = par_map(&cfg.g_list, |&x| -> Result<Fig1aSeries> {
        let g = x * cfg.omega_f;
        let d = dynamics_fock_dim(cfg, g)?;
        let p = params(cfg, g, d)?;
        let layout = p.layout();
        let eq = master_equation(&p, cfg.dissipator)?;
        let rho0 = initial_rho(cfg, &p)?;
        let opts = EvolveOptions {
            t_end: cfg.t_end,
            dt: cfg.dt,
            record_every: cfg.stride,
            keep_states: false,
            observables: vec![Observable::EofLowerBoundAF],
        };
        let traj = evolve(&rho0, eq.as_ref(), &opts)?;
        traj.diagnostics.check()?;
        let fin = eq.from_lab(&traj.final_state);
        let residual = eq.rhs(&fin)?.frobenius_norm() / fin.frobenius_norm();
        let ansatz = ansatz_for(cfg, &p, &rho0)?;
        let (ansatz_bound, ansatz_distance) = match &ansatz {
            Some(a) => (
                Some(eof_lower_bound(&partial_trace(a, &[Slot::A, Slot::F], &layout)?, d)?.bound),
                Some(trace_distance(&traj.final_state, a)?),
            ),
            None => (None, None),
        };
        Ok(Fig1aSeries {
            d,
            bound: traj.observables[&Observable::EofLowerBoundAF].clone(),
            times: traj.times,
            residual,
            ansatz_bound,
            ansatz_distance,
        })
    });
    let series = collect_rows(results)?;

    let mut table = Table::new(vec!["omega_t", "g_over_omega", "eof_lower_bound_AF"]);
    let mut head = header(cfg);
    let mut per_g = Vec::new();
    for (x, s) in cfg.g_list.iter().zip(&series) {
        for (t, b) in s.times.iter().zip(&s.bound) {
            table.push(vec![Cell::from(t * cfg.omega_f), Cell::from(*x), Cell::from(*b)]);
        }
        head.push((format!("d_star[g_over_omega={x}]"), s.d.to_string()));
        per_g.push(json!({
            "g_over_omega": x,
            "fock_d_used": s.d,
            "final_eof_lower_bound_AF": s.bound.last(),
            "final_residual": s.residual,
            "ansatz_eof_lower_bound_AF": s.ansatz_bound,
            "ansatz_trace_distance": s.ansatz_distance,
        }));
    }
    Ok(RunOutput {
        header: head,
        summary: json!({ "experiment": "fig1a", "config": cfg, "rows": table.rows.len(), "series": per_g }),
        table,
    })
}

/// Ground-state quantifiers across the g/ω sweep. `fig1b` keeps the short column set.
pub fn run_ground_sweep(cfg: &RunConfig, fig1b: bool) -> Result<RunOutput> {
    let xs = cfg.sweep.points();
    let results = par_map(&xs, |&x| -> Result<(usize, EntanglementReport, f64, f64)> {
        let g = x * cfg.omega_f;
        let d = sweep_fock_dim(cfg, &params(cfg, g, 2)?, GroundObservable::EofMonogamyAF)?;
        let p = params(cfg, g, d)?;
        let layout = p.layout();
        let rho = dressed_spectrum(&rabi_hamiltonian(&p)?)?.ground_projector();
        let report = EntanglementReport::for_state(&rho, &layout)?;
        let photons = Observable::MeanPhotons.evaluate(&rho, &layout)?;
        let excitation = Observable::MeanExcitation.evaluate(&rho, &layout)?;
        Ok((d, report, photons, excitation))
    });
    let rows = collect_rows(results)?;

    let columns = if fig1b {
        vec!["g_over_omega", "eof_monogamy", "eof_lower_bound", "discord_AB", "cond_entropy", "fock_d_used"]
    } else {
        vec![
            "g_over_omega",
            "eof_monogamy",
            "eof_lower_bound",
            "lambda",
            "concurrence_AB",
            "discord_AB",
            "cond_entropy",
            "mean_photons",
            "mean_excitation",
            "fock_d_used",
        ]
    };
    let mut table = Table::new(columns);
    for (x, (d, r, photons, excitation)) in xs.iter().zip(&rows) {
        let mono = Cell::from(r.eof_monogamy.ok_or_else(|| Error::Consistency("ground state is not pure".into()))?);
        let row = if fig1b {
            vec![
                Cell::from(*x),
                mono,
                r.eof_lower_bound.into(),
                r.discord.into(),
                r.conditional_entropy.into(),
                (*d).into(),
            ]
        } else {
            vec![
                Cell::from(*x),
                mono,
                r.eof_lower_bound.into(),
                r.lambda.into(),
                r.concurrence.into(),
                r.discord.into(),
                r.conditional_entropy.into(),
                (*photons).into(),
                (*excitation).into(),
                (*d).into(),
            ]
        };
        table.push(row);
    }
    let mut head = header(cfg);
    head.push(("d_star".into(), rows.iter().map(|r| r.0.to_string()).collect::<Vec<_>>().join(",")));

    let mono = table.numeric_column("eof_monogamy").unwrap_or_default();
    let (peak_idx, peak) = mono
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, v)| if v > acc.1 { (i, v) } else { acc });
    Ok(RunOutput {
        header: head,
        summary: json!({
            "experiment": cfg.experiment.name(),
            "config": cfg,
            "rows": table.rows.len(),
            "peak_g_over_omega": xs.get(peak_idx),
            "peak_eof_monogamy": peak,
        }),
        table,
    })
}

/// Writes the CSV to `csv_path` and the summary next to it with a `.json` extension;
/// without a path the CSV goes to stdout.
pub fn write_outputs(out: &RunOutput, csv_path: Option<&Path>) -> Result<()> {
    match csv_path {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir)?;
            }
            std::fs::write(path, out.to_csv())?;
            std::fs::write(path.with_extension("json"), out.summary_json())?;
        }
        None => print!("{}", out.to_csv()),
    }
    Ok(())
}
