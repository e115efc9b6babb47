//! Built-in physics invariant suite, shared by `usc-qed check` and the acceptance run.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dynamics::{evolve, liouvillian_apply, DressedFrame, EvolveOptions, LabFrame, Observable};
use crate::error::Result;
use crate::hilbert::Qubit::{E, G};
use crate::linalg::{hermitian_eig, ComplexMatrix};
use crate::model::{rabi_hamiltonian, standard_channel, RabiParams};
use crate::random;

#[derive(Debug, Clone, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn from_result(name: &'static str, r: Result<(bool, String)>) -> Self {
        match r {
            Ok((passed, detail)) => Self { name, passed, detail },
            Err(e) => Self { name, passed: false, detail: format!("error: {e}") },
        }
    }
}

/// Trace, Hermiticity and positivity along RWA and improved trajectories from |ge0⟩.
pub fn trajectory_health() -> Result<(bool, String)> {
    let opts = EvolveOptions { t_end: 200.0, ..Default::default() };
    let p = RabiParams::resonant(1.0, 0.1, 0.2, 4)?;
    let rho0 = ComplexMatrix::projector(&p.layout().basis_ket(G, E, 0));
    let rwa = evolve(&rho0, &LabFrame::rwa(&p)?, &opts)?.diagnostics;

    let p = RabiParams::resonant(1.0, 0.5, 0.2, 10)?;
    let rho0 = ComplexMatrix::projector(&p.layout().basis_ket(G, E, 0));
    let improved = evolve(&rho0, &DressedFrame::new(&p)?, &opts)?.diagnostics;

    let ok = rwa.check().is_ok() && improved.check().is_ok();
    Ok((
        ok,
        format!(
            "rwa: trace corr {:.1e}, herm {:.1e}, min eig {:.1e}; improved: trace corr {:.1e}, herm {:.1e}, min eig {:.1e}",
            rwa.max_trace_correction,
            rwa.max_hermiticity_error,
            rwa.min_eigenvalue,
            improved.max_trace_correction,
            improved.max_hermiticity_error,
            improved.min_eigenvalue
        ),
    ))
}

/// ⟨Φ⁻0|ρ|Φ⁻0⟩ stays put under H_JC with κ D[a].
pub fn subradiant_conservation() -> Result<(bool, String)> {
    let p = RabiParams::resonant(1.0, 0.1, 0.2, 4)?;
    let rho0 = ComplexMatrix::projector(&p.layout().basis_ket(G, E, 0));
    let opts = EvolveOptions {
        t_end: 200.0,
        record_every: 0.5,
        observables: vec![Observable::SubradiantPopulation],
        ..Default::default()
    };
    let traj = evolve(&rho0, &LabFrame::rwa(&p)?, &opts)?;
    let series = traj.series(Observable::SubradiantPopulation).unwrap_or_default();
    let drift = series.iter().map(|v| (v - series[0]).abs()).fold(0.0, f64::max);
    Ok((drift <= 1e-6, format!("max drift {drift:.2e} over ωt ∈ [0, 200]")))
}

/// The ground state of H_R is annihilated by the improved generator.
pub fn dressed_ground_stationary() -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for g in [0.1, 0.5, 1.0] {
        let p = RabiParams::resonant(1.0, g, 0.2, 10)?;
        let eq = DressedFrame::new(&p)?;
        let rho = eq.spectrum.ground_projector();
        let rdot = liouvillian_apply(&rho, &rabi_hamiltonian(&p)?, &eq.channels())?;
        worst = worst.max(rdot.frobenius_norm());
    }
    Ok((worst <= 1e-10, format!("max ‖ρ̇‖_F {worst:.2e} at g/ω ∈ {{0.1, 0.5, 1.0}}")))
}

/// Tr ρ̇ = 0 and ρ̇ = ρ̇† for random states under both generators.
pub fn liouvillian_traceless() -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let p = RabiParams::resonant(1.0, 0.4, 0.2, 4)?;
    let improved = DressedFrame::new(&p)?;
    let h = rabi_hamiltonian(&p)?;
    let imp_channels = improved.channels();
    let std_channels = vec![standard_channel(&p)?];
    let (mut worst_tr, mut worst_h) = (0.0f64, 0.0f64);
    for _ in 0..10 {
        let rho = random::density_matrix(&mut rng, p.layout().total_dim());
        for ch in [&imp_channels, &std_channels] {
            let rdot = liouvillian_apply(&rho, &h, ch)?;
            let scale = rdot.frobenius_norm();
            worst_tr = worst_tr.max(rdot.trace().norm() / scale);
            worst_h = worst_h.max(rdot.hermiticity_error() / scale);
        }
    }
    Ok((
        worst_tr <= 1e-12 && worst_h <= 1e-10,
        format!("|Tr ρ̇|/‖ρ̇‖ {worst_tr:.1e}, asymmetry/‖ρ̇‖ {worst_h:.1e}"),
    ))
}

/// ⟨a†a⟩(t) = e^{−κt} from |gg1⟩ with g = 0.
pub fn photon_decay() -> Result<(bool, String)> {
    let rel = photon_decay_error(0.2)?;
    Ok((rel <= 1e-5, format!("relative error {rel:.2e} at κt = 1")))
}

/// Relative error of ⟨a†a⟩ against e^{−1} after integrating to κt = 1.
pub fn photon_decay_error(kappa: f64) -> Result<f64> {
    let p = RabiParams::resonant(1.0, 0.0, kappa, 4)?;
    let rho0 = ComplexMatrix::projector(&p.layout().basis_ket(G, G, 1));
    let opts = EvolveOptions {
        t_end: 1.0 / kappa,
        record_every: 1.0 / kappa,
        observables: vec![Observable::MeanPhotons],
        ..Default::default()
    };
    let traj = evolve(&rho0, &LabFrame::rwa(&p)?, &opts)?;
    let n = *traj.series(Observable::MeanPhotons).and_then(|s| s.last()).unwrap_or(&f64::NAN);
    let exact = (-1.0f64).exp();
    Ok((n - exact).abs() / exact)
}

/// Eigendecomposition reconstruction on random Hermitian matrices.
pub fn eigensolver_reconstruction() -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst: f64 = 0.0;
    for n in [2, 5, 16, 40] {
        let m = random::hermitian(&mut rng, n);
        let eig = hermitian_eig(&m)?;
        let err = (&eig.reconstruct() - &m).max_abs() / m.max_abs();
        worst = worst.max(err);
    }
    Ok((worst <= 1e-9, format!("max relative reconstruction error {worst:.1e}")))
}

pub fn run_all() -> Vec<CheckOutcome> {
    let suite: [(&'static str, fn() -> Result<(bool, String)>); 6] = [
        ("eigensolver reconstruction", eigensolver_reconstruction),
        ("liouvillian traceless and hermitian", liouvillian_traceless),
        ("dressed ground state stationary", dressed_ground_stationary),
        ("photon decay e^-κt", photon_decay),
        ("subradiant population conserved (RWA)", subradiant_conservation),
        ("trajectory trace/hermiticity/positivity", trajectory_health),
    ];
    suite.into_iter().map(|(name, f)| CheckOutcome::from_result(name, f())).collect()
}
