//! wasm-bindgen exports for the static demo page in `www/`.
//!
//! Every function returns a flat `Float64Array`; the page reshapes it using the
//! row width noted on each export.

use wasm_bindgen::prelude::*;

use usc_qed::dynamics::{evolve, master_equation, Dissipator, EvolveOptions, GroundObservable, Observable};
use usc_qed::hilbert::{Qubit, SpaceLayout};
use usc_qed::model::{dressed_spectrum, jc_hamiltonian, rabi_hamiltonian, RabiParams};
use usc_qed::ComplexMatrix;

const MAX_FOCK: usize = 24;
const MAX_T_END: f64 = 400.0;

fn js(e: usc_qed::Error) -> JsError {
    JsError::new(&e.to_string())
}

fn fock(d: usize) -> Result<usize, JsError> {
    if (2..=MAX_FOCK).contains(&d) {
        Ok(d)
    } else {
        Err(JsError::new(&format!("Fock dimension must be in 2..={MAX_FOCK}")))
    }
}

fn grid(g_max: f64, steps: usize) -> Result<Vec<f64>, JsError> {
    if !(g_max > 0.0) || steps < 2 {
        return Err(JsError::new("need g_max > 0 and at least 2 points"));
    }
    Ok((0..steps).map(|i| g_max * i as f64 / (steps - 1) as f64).collect())
}

/// Lowest `levels` eigenvalues of H_R (or H_JC when `rwa`) at resonance,
/// in units of ω. Rows: `[g, E_0 .. E_{levels-1}]`.
#[wasm_bindgen]
pub fn spectrum(g_max: f64, steps: usize, levels: usize, d: usize, rwa: bool) -> Result<Vec<f64>, JsError> {
    let d = fock(d)?;
    let levels = levels.clamp(1, 4 * d);
    let mut out = Vec::with_capacity(steps * (levels + 1));
    for g in grid(g_max, steps)? {
        let p = RabiParams::resonant(1.0, g, 0.0, d).map_err(js)?;
        let h = if rwa { jc_hamiltonian(&p) } else { rabi_hamiltonian(&p) }.map_err(js)?;
        let spec = dressed_spectrum(&h).map_err(js)?;
        out.push(g);
        out.extend_from_slice(&spec.energies[..levels]);
    }
    Ok(out)
}

/// Ground-state entanglement of the Rabi model against g.
/// Rows: `[g, E_AF exact, E_AF lower bound, discord_AB]`.
#[wasm_bindgen]
pub fn ground_entanglement(g_max: f64, steps: usize, d: usize) -> Result<Vec<f64>, JsError> {
    let d = fock(d)?;
    let mut out = Vec::with_capacity(steps * 4);
    for g in grid(g_max, steps)? {
        let p = RabiParams::resonant(1.0, g, 0.0, d).map_err(js)?;
        out.push(g);
        for obs in [GroundObservable::EofMonogamyAF, GroundObservable::EofLowerBoundAF, GroundObservable::DiscordAB] {
            out.push(obs.evaluate(&p).map_err(js)?);
        }
    }
    Ok(out)
}

/// A–F lower-bound EOF and ⟨a†a⟩ along a trajectory from |ge0⟩.
/// `dissipator` is "improved" or "standard". Rows: `[ωt, E_lb(AF), ⟨a†a⟩]`.
#[wasm_bindgen]
pub fn lower_bound_dynamics(g: f64, kappa: f64, t_end: f64, d: usize, dissipator: &str) -> Result<Vec<f64>, JsError> {
    let d = fock(d)?;
    let dissipator = match dissipator {
        "improved" => Dissipator::Improved,
        "standard" => Dissipator::Standard,
        other => return Err(JsError::new(&format!("unknown dissipator '{other}'"))),
    };
    if !(t_end > 0.0 && t_end <= MAX_T_END) {
        return Err(JsError::new(&format!("t_end must be in (0, {MAX_T_END}]")));
    }
    let p = RabiParams::resonant(1.0, g, kappa, d).map_err(js)?;
    let eq = master_equation(&p, dissipator).map_err(js)?;
    let rho0 = ComplexMatrix::projector(&SpaceLayout::new(d).map_err(js)?.basis_ket(Qubit::G, Qubit::E, 0));
    let opts = EvolveOptions {
        t_end,
        record_every: (t_end / 200.0).max(0.05),
        observables: vec![Observable::EofLowerBoundAF, Observable::MeanPhotons],
        ..Default::default()
    };
    let traj = evolve(&rho0, eq.as_ref(), &opts).map_err(js)?;
    let lb = traj.series(Observable::EofLowerBoundAF).expect("requested observable");
    let n = traj.series(Observable::MeanPhotons).expect("requested observable");
    Ok(traj.times.iter().zip(lb).zip(n).flat_map(|((&t, &e), &n)| [t, e, n]).collect())
}
