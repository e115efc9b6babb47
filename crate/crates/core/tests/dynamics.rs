use usc_qed::dynamics::{
    build_ansatz, converge_fock, evolve, steady_state, trace_distance, AnsatzForm, DressedFrame, EvolveOptions,
    GroundObservable, LabFrame, MasterEquation, Observable, SteadyOptions,
};
use usc_qed::entanglement::eof_lower_bound;
use usc_qed::hilbert::{partial_trace, Qubit::E, Qubit::G, Slot};
use usc_qed::linalg::ComplexMatrix;
use usc_qed::model::RabiParams;
use usc_qed::Error;

#[test]
fn cavity_decay_is_exponential() {
    let kappa = 0.2;
    let p = RabiParams::resonant(1.0, 0.0, kappa, 4).unwrap();
    let rho0 = ComplexMatrix::projector(&p.layout().basis_ket(G, G, 1));
    let opts = EvolveOptions {
        t_end: 1.0 / kappa,
        record_every: 0.5,
        observables: vec![Observable::MeanPhotons],
        ..Default::default()
    };
    let traj = evolve(&rho0, &LabFrame::rwa(&p).unwrap(), &opts).unwrap();
    for (t, n) in traj.times.iter().zip(traj.series(Observable::MeanPhotons).unwrap()) {
        let exact = (-kappa * t).exp();
        assert!((n - exact).abs() <= 1e-5 * exact, "t = {t}: {n} vs {exact}");
    }
    assert!((traj.times.last().unwrap() * kappa - 1.0).abs() < 1e-12);
}

#[test]
fn vacuum_is_constant_under_rwa() {
    let p = RabiParams::resonant(1.0, 0.1, 0.2, 3).unwrap();
    let rho0 = ComplexMatrix::projector(&p.layout().basis_ket(G, G, 0));
    let opts = EvolveOptions { t_end: 50.0, record_every: 5.0, keep_states: true, ..Default::default() };
    let traj = evolve(&rho0, &LabFrame::rwa(&p).unwrap(), &opts).unwrap();
    assert_eq!(traj.states.len(), 11);
    for s in &traj.states {
        assert!((s - &rho0).max_abs() < 1e-15);
    }
}

#[test]
fn rwa_ge0_reaches_ansatz_by_200() {
    let p = RabiParams::resonant(1.0, 0.1, 0.2, 4).unwrap();
    let l = p.layout();
    let rho0 = ComplexMatrix::projector(&l.basis_ket(G, E, 0));
    let opts = EvolveOptions { t_end: 200.0, record_every: 200.0, ..Default::default() };
    let traj = evolve(&rho0, &LabFrame::rwa(&p).unwrap(), &opts).unwrap();
    traj.diagnostics.check().unwrap();
    let ansatz = build_ansatz(&partial_trace(&rho0, &[Slot::A, Slot::B], &l).unwrap(), AnsatzForm::Rwa, &l).unwrap();
    let dist = trace_distance(&traj.final_state, &ansatz.rho).unwrap();
    assert!(dist <= 1e-3, "trace distance {dist}");
}

#[test]
fn dark_initial_state_is_its_own_steady_state() {
    let p = RabiParams::resonant(1.0, 0.1, 0.2, 4).unwrap();
    let rho0 = ComplexMatrix::projector(&p.layout().basis_ket(G, G, 0));
    let ss = steady_state(&rho0, &LabFrame::rwa(&p).unwrap(), &SteadyOptions::for_kappa(0.2)).unwrap();
    assert!(ss.converged);
    assert_eq!(ss.time, 0.0);
    assert_eq!(ss.rho, rho0);
}

#[test]
fn improved_steady_state_matches_rabi_ansatz() {
    for (g, d) in [(0.25, 8), (0.4, 8), (0.5, 10)] {
        let p = RabiParams::resonant(1.0, g, 0.2, d).unwrap();
        let l = p.layout();
        let eq = DressedFrame::new(&p).unwrap();
        let rho0 = ComplexMatrix::projector(&l.basis_ket(G, E, 0));
        let ss = steady_state(&rho0, &eq, &SteadyOptions::for_kappa(0.2)).unwrap().require_converged().unwrap();
        let ansatz =
            build_ansatz(&partial_trace(&rho0, &[Slot::A, Slot::B], &l).unwrap(), AnsatzForm::NonRwa(&eq.spectrum), &l)
                .unwrap();
        assert!(trace_distance(&ss.rho, &ansatz.rho).unwrap() <= 0.05);
        // the field stays entangled with qubit A
        let bound = eof_lower_bound(&partial_trace(&ss.rho, &[Slot::A, Slot::F], &l).unwrap(), d).unwrap().bound;
        assert!(bound > 0.0, "g = {g}");
    }
}

#[test]
fn steady_state_reports_non_convergence() {
    let p = RabiParams::resonant(1.0, 0.3, 0.2, 4).unwrap();
    let rho0 = ComplexMatrix::projector(&p.layout().basis_ket(G, E, 0));
    let opts = SteadyOptions { t_max: 2.0, ..SteadyOptions::for_kappa(0.2) };
    let ss = steady_state(&rho0, &DressedFrame::new(&p).unwrap(), &opts).unwrap();
    assert!(!ss.converged);
    assert!(ss.residual > opts.tol);
    assert!(matches!(ss.require_converged(), Err(Error::NotConverged { .. })));
}

#[test]
fn oversized_step_trips_positivity_monitor() {
    let p = RabiParams::resonant(1.0, 0.5, 0.2, 8).unwrap();
    let rho0 = ComplexMatrix::projector(&p.layout().basis_ket(G, E, 0));
    let opts = EvolveOptions { t_end: 50.0, dt: 0.9, record_every: 0.9, ..Default::default() };
    let r = evolve(&rho0, &LabFrame::rabi_standard(&p).unwrap(), &opts);
    assert!(matches!(r, Err(Error::Positivity { .. })), "{r:?}");
}

#[test]
fn frames_agree_on_a_trajectory() {
    let p = RabiParams::resonant(1.0, 0.4, 0.2, 4).unwrap();
    let dressed = DressedFrame::new(&p).unwrap();
    let lab = LabFrame::new(p.layout(), dressed.hamiltonian(), dressed.channels()).unwrap();
    let rho0 = ComplexMatrix::projector(&p.layout().basis_ket(E, G, 0));
    let opts = EvolveOptions { t_end: 10.0, record_every: 10.0, ..Default::default() };
    let a = evolve(&rho0, &dressed, &opts).unwrap().final_state;
    let b = evolve(&rho0, &lab, &opts).unwrap().final_state;
    assert!((&a - &b).max_abs() < 1e-9, "{}", (&a - &b).max_abs());
    assert!(dressed.rhs(&dressed.from_lab(&a)).is_ok());
}

#[test]
fn ground_eof_convergence_at_half_coupling() {
    let tol = 1e-4;
    let p = RabiParams::resonant(1.0, 0.5, 0.2, 2).unwrap();
    let c = converge_fock(&p, GroundObservable::EofLowerBoundAF, tol, 40).unwrap();
    assert_eq!(c.d_star, D_STAR_HALF_COUPLING);
    // the value stays put as the truncation keeps growing
    for d in (c.d_star..=24).step_by(2) {
        let v = GroundObservable::EofLowerBoundAF.evaluate(&p.with_fock_dim(d)).unwrap();
        assert!((v - c.value).abs() < tol, "d = {d}: {v} vs {}", c.value);
    }
}

/// Fixture recorded from the convergence loop itself.
const D_STAR_HALF_COUPLING: usize = 8;
