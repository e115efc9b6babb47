//! Master-equation integration, steady states, Fock-space convergence and the
//! closed-form steady-state ansätze.
//!
//! Two generators implement [`MasterEquation`]:
//! - [`LabFrame`]: an arbitrary Hamiltonian with arbitrary jump channels, in the bare basis.
//! - [`DressedFrame`]: the Rabi Hamiltonian with the dressed-state dissipator, evolved in
//!   the eigenbasis of H_R, where the Hamiltonian is diagonal and every jump |j⟩⟨k| moves
//!   population between basis states. One RHS evaluation costs O(N²) instead of O(N³·channels).

use std::collections::BTreeMap;

use serde::Serialize;

use crate::entanglement::{
    conditional_entropy, eof_lower_bound, eof_two_qubit, eof_via_monogamy, quantum_discord,
};
use crate::error::{Error, Result};
use crate::hilbert::{partial_trace, Qubit, Slot, SpaceLayout};
use crate::linalg::{hermitian_eig, inner, trace_norm, ComplexMatrix, C64, I};
use crate::model::{
    dressed_spectrum, excitation_operator, improved_rates, jc_hamiltonian, photon_number_operator, rabi_hamiltonian, standard_channel,
    DressedSpectrum, JumpChannel, JumpOperator, RabiParams, RateTable,
};
use crate::policy::NumericPolicy;

/// Default RK4 step in units of 1/ω.
pub const DEFAULT_DT: f64 = 0.005;
/// Runs abort when the state develops an eigenvalue below this.
pub const POSITIVITY_ABORT: f64 = -1e-4;

/// ρ·A computed as (A†·ρ†)† so that a sparse A stays on the left of the product.
fn right_mul(rho: &ComplexMatrix, a_adj: &ComplexMatrix) -> ComplexMatrix {
    (a_adj * &rho.adjoint()).adjoint()
}

/// −i[H, ρ] + Σ Γ (m ρ m† − ½{m†m, ρ})
pub fn liouvillian_apply(rho: &ComplexMatrix, h: &ComplexMatrix, channels: &[JumpChannel]) -> Result<ComplexMatrix> {
    let n = rho.rows();
    if !rho.is_square() || h.rows() != n || h.cols() != n {
        return Err(Error::dim(format!(
            "state is {}x{}, Hamiltonian {}x{}",
            rho.rows(),
            rho.cols(),
            h.rows(),
            h.cols()
        )));
    }
    let hr = h.matmul(rho)?;
    let rh = right_mul(rho, &h.adjoint());
    let mut out = (&hr - &rh).scale(-I);
    for ch in channels {
        match &ch.operator {
            JumpOperator::Dense(m) => {
                if m.rows() != n || m.cols() != n {
                    return Err(Error::dim(format!("jump operator is {}x{}, state {n}x{n}", m.rows(), m.cols())));
                }
                let m_adj = m.adjoint();
                let m_rho = m * rho;
                let jump = right_mul(&m_rho, m);
                let mdm = &m_adj * m;
                let left = &mdm * rho;
                let right = right_mul(rho, &mdm.adjoint());
                out.add_scaled(C64::new(ch.rate, 0.0), &jump);
                out.add_scaled(C64::new(-0.5 * ch.rate, 0.0), &left);
                out.add_scaled(C64::new(-0.5 * ch.rate, 0.0), &right);
            }
            JumpOperator::Transition { lower_state: l, upper_state: u, .. } => {
                if l.len() != n || u.len() != n {
                    return Err(Error::dim("transition vectors do not match the state dimension"));
                }
                // ρ|u⟩ and ⟨u|ρ
                let rho_u = rho.apply(u)?;
                let u_rho: Vec<C64> = rho.adjoint().apply(u)?.into_iter().map(|z| z.conj()).collect();
                let pop = inner(u, &rho_u);
                let g = ch.rate;
                for r in 0..n {
                    for c in 0..n {
                        let jump = pop * l[r] * l[c].conj();
                        let anti = u[r] * u_rho[c] + rho_u[r] * u[c].conj();
                        out[(r, c)] += (jump - anti * 0.5) * g;
                    }
                }
            }
        }
    }
    Ok(out)
}

/// A time-independent Lindblad generator together with the frame it evolves in.
pub trait MasterEquation: Send + Sync {
    fn layout(&self) -> SpaceLayout;
    /// ρ̇ for a state expressed in the working frame.
    fn rhs(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix>;
    fn to_lab(&self, rho: &ComplexMatrix) -> ComplexMatrix;
    fn from_lab(&self, rho: &ComplexMatrix) -> ComplexMatrix;
}

/// Generic generator in the bare |ijn⟩ basis.
#[derive(Debug, Clone)]
pub struct LabFrame {
    layout: SpaceLayout,
    pub hamiltonian: ComplexMatrix,
    pub channels: Vec<JumpChannel>,
}

impl LabFrame {
    pub fn new(layout: SpaceLayout, hamiltonian: ComplexMatrix, channels: Vec<JumpChannel>) -> Result<Self> {
        if hamiltonian.rows() != layout.total_dim() || !hamiltonian.is_square() {
            return Err(Error::dim("Hamiltonian does not match the layout"));
        }
        Ok(Self { layout, hamiltonian, channels })
    }

    /// H_JC with κ D[a].
    pub fn rwa(p: &RabiParams) -> Result<Self> {
        Self::new(p.layout(), jc_hamiltonian(p)?, vec![standard_channel(p)?])
    }

    /// H_R with κ D[a].
    pub fn rabi_standard(p: &RabiParams) -> Result<Self> {
        Self::new(p.layout(), rabi_hamiltonian(p)?, vec![standard_channel(p)?])
    }
}

impl MasterEquation for LabFrame {
    fn layout(&self) -> SpaceLayout {
        self.layout
    }

    fn rhs(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        liouvillian_apply(rho, &self.hamiltonian, &self.channels)
    }

    fn to_lab(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        rho.clone()
    }

    fn from_lab(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        rho.clone()
    }
}

/// H_R with the dressed-state dissipator Σ Γ^{jk} D[|j⟩⟨k|], in the eigenbasis of H_R.
#[derive(Debug, Clone)]
pub struct DressedFrame {
    layout: SpaceLayout,
    pub spectrum: DressedSpectrum,
    pub rates: RateTable,
    decay: Vec<f64>,
    /// Nonzero (j, k, Γ^{jk}) triples.
    transitions: Vec<(usize, usize, f64)>,
}

impl DressedFrame {
    pub fn new(p: &RabiParams) -> Result<Self> {
        Self::with_policy(p, &NumericPolicy::DEFAULT)
    }

    pub fn with_policy(p: &RabiParams, policy: &NumericPolicy) -> Result<Self> {
        let spectrum = dressed_spectrum(&rabi_hamiltonian(p)?)?;
        let rates = improved_rates(&spectrum, p, policy)?;
        let decay = (0..rates.dim()).map(|k| rates.total_decay(k)).collect();
        let transitions = rates.iter().collect();
        Ok(Self { layout: p.layout(), spectrum, rates, decay, transitions })
    }

    /// The same dissipator as explicit channels, for the generic route.
    pub fn channels(&self) -> Vec<JumpChannel> {
        self.transitions
            .iter()
            .map(|&(j, k, rate)| JumpChannel {
                operator: JumpOperator::Transition {
                    lower: j,
                    upper: k,
                    lower_state: self.spectrum.state(j),
                    upper_state: self.spectrum.state(k),
                },
                rate,
            })
            .collect()
    }

    pub fn hamiltonian(&self) -> ComplexMatrix {
        ComplexMatrix::from_real_diagonal(&self.spectrum.energies).change_basis(&self.spectrum.states.adjoint())
            .expect("square spectrum")
    }
}

impl MasterEquation for DressedFrame {
    fn layout(&self) -> SpaceLayout {
        self.layout
    }

    fn rhs(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        let n = self.decay.len();
        if rho.rows() != n || rho.cols() != n {
            return Err(Error::dim(format!("state is {}x{}, generator {n}x{n}", rho.rows(), rho.cols())));
        }
        let w = &self.spectrum.energies;
        let mut out = ComplexMatrix::zeros(n, n);
        for m in 0..n {
            for k in 0..n {
                let damp = 0.5 * (self.decay[m] + self.decay[k]);
                out[(m, k)] = rho[(m, k)] * C64::new(-damp, -(w[m] - w[k]));
            }
        }
        for &(j, k, rate) in &self.transitions {
            out[(j, j)] += rho[(k, k)] * rate;
        }
        Ok(out)
    }

    fn to_lab(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        let v = &self.spectrum.states;
        &(v * rho) * &v.adjoint()
    }

    fn from_lab(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        rho.change_basis(&self.spectrum.states).expect("square spectrum")
    }
}

/// Which dissipator drives the dynamics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Dissipator {
    /// H_JC with κ D[a]
    Standard,
    /// H_R with the dressed-state dissipator
    Improved,
    /// H_R with κ D[a]
    StandardRabi,
}

pub fn master_equation(p: &RabiParams, dissipator: Dissipator) -> Result<Box<dyn MasterEquation>> {
    Ok(match dissipator {
        Dissipator::Standard => Box::new(LabFrame::rwa(p)?),
        Dissipator::Improved => Box::new(DressedFrame::new(p)?),
        Dissipator::StandardRabi => Box::new(LabFrame::rabi_standard(p)?),
    })
}

/// Scalar quantities recorded along a trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Observable {
    Trace,
    MeanPhotons,
    MeanExcitation,
    SubradiantPopulation,
    EofLowerBoundAF,
    EofLowerBoundBF,
    EofAB,
}

impl Observable {
    pub const ALL: [Observable; 7] = [
        Observable::Trace,
        Observable::MeanPhotons,
        Observable::MeanExcitation,
        Observable::SubradiantPopulation,
        Observable::EofLowerBoundAF,
        Observable::EofLowerBoundBF,
        Observable::EofAB,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Observable::Trace => "trace",
            Observable::MeanPhotons => "mean_photons",
            Observable::MeanExcitation => "mean_excitation",
            Observable::SubradiantPopulation => "subradiant_population",
            Observable::EofLowerBoundAF => "eof_lower_bound_AF",
            Observable::EofLowerBoundBF => "eof_lower_bound_BF",
            Observable::EofAB => "eof_AB",
        }
    }

    pub fn evaluate(self, rho: &ComplexMatrix, layout: &SpaceLayout) -> Result<f64> {
        let d = layout.fock_dim();
        Ok(match self {
            Observable::Trace => rho.trace().re,
            Observable::MeanPhotons => (&photon_number_operator(layout) * rho).trace().re,
            Observable::MeanExcitation => (&excitation_operator(layout) * rho).trace().re,
            Observable::SubradiantPopulation => {
                let phi = layout.phi_minus_ket(0);
                rho.sandwich(&phi, &phi)?.re
            }
            Observable::EofLowerBoundAF => eof_lower_bound(&partial_trace(rho, &[Slot::A, Slot::F], layout)?, d)?.bound,
            Observable::EofLowerBoundBF => eof_lower_bound(&partial_trace(rho, &[Slot::B, Slot::F], layout)?, d)?.bound,
            Observable::EofAB => eof_two_qubit(&partial_trace(rho, &[Slot::A, Slot::B], layout)?)?,
        })
    }
}

#[derive(Debug, Clone)]
pub struct EvolveOptions {
    pub t_end: f64,
    pub dt: f64,
    /// Time between recorded samples.
    pub record_every: f64,
    pub keep_states: bool,
    pub observables: Vec<Observable>,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        Self { t_end: 200.0, dt: DEFAULT_DT, record_every: 0.5, keep_states: false, observables: vec![Observable::Trace] }
    }
}

/// Health of a run, accumulated over every step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RunDiagnostics {
    /// Largest |Tr ρ − 1| seen right before a renormalization.
    pub max_trace_correction: f64,
    /// Largest entrywise |ρ − ρ†| seen right before re-Hermitization.
    pub max_hermiticity_error: f64,
    /// Smallest eigenvalue at any recorded sample.
    pub min_eigenvalue: f64,
    pub steps: usize,
}

impl Default for RunDiagnostics {
    fn default() -> Self {
        Self { max_trace_correction: 0.0, max_hermiticity_error: 0.0, min_eigenvalue: f64::INFINITY, steps: 0 }
    }
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    /// Lab-frame states at the recorded times (empty unless requested).
    pub states: Vec<ComplexMatrix>,
    pub observables: BTreeMap<Observable, Vec<f64>>,
    /// Lab-frame state at t_end.
    pub final_state: ComplexMatrix,
    pub diagnostics: RunDiagnostics,
}

/// Per-step trace correction allowed before a run counts as unhealthy.
pub const MAX_TRACE_CORRECTION: f64 = 1e-8;
pub const MAX_HERMITICITY_ERROR: f64 = 1e-8;
/// Smallest eigenvalue tolerated without complaint.
pub const MIN_EIGENVALUE: f64 = -1e-6;

impl RunDiagnostics {
    /// Fails with a physics-invariant error if any monitored quantity left its band.
    pub fn check(&self) -> Result<()> {
        if self.max_trace_correction > MAX_TRACE_CORRECTION {
            return Err(Error::Consistency(format!(
                "trace drifted by {:.3e} in one step",
                self.max_trace_correction
            )));
        }
        if self.max_hermiticity_error > MAX_HERMITICITY_ERROR {
            return Err(Error::NotHermitian { asymmetry: self.max_hermiticity_error });
        }
        if self.min_eigenvalue < MIN_EIGENVALUE {
            return Err(Error::Positivity { eigenvalue: self.min_eigenvalue });
        }
        Ok(())
    }
}

impl Trajectory {
    pub fn series(&self, obs: Observable) -> Option<&[f64]> {
        self.observables.get(&obs).map(Vec::as_slice)
    }
}

fn rk4_step(eq: &dyn MasterEquation, rho: &ComplexMatrix, dt: f64) -> Result<ComplexMatrix> {
    let k1 = eq.rhs(rho)?;
    let mut tmp = rho.clone();
    tmp.add_scaled(C64::new(0.5 * dt, 0.0), &k1);
    let k2 = eq.rhs(&tmp)?;
    let mut tmp = rho.clone();
    tmp.add_scaled(C64::new(0.5 * dt, 0.0), &k2);
    let k3 = eq.rhs(&tmp)?;
    let mut tmp = rho.clone();
    tmp.add_scaled(C64::new(dt, 0.0), &k3);
    let k4 = eq.rhs(&tmp)?;
    let mut out = rho.clone();
    out.add_scaled(C64::new(dt / 6.0, 0.0), &k1);
    out.add_scaled(C64::new(dt / 3.0, 0.0), &k2);
    out.add_scaled(C64::new(dt / 3.0, 0.0), &k3);
    out.add_scaled(C64::new(dt / 6.0, 0.0), &k4);
    Ok(out)
}

/// One RK4 step followed by re-Hermitization and trace renormalization.
fn step(eq: &dyn MasterEquation, rho: &ComplexMatrix, dt: f64, diag: &mut RunDiagnostics) -> Result<ComplexMatrix> {
    let next = rk4_step(eq, rho, dt)?;
    diag.max_hermiticity_error = diag.max_hermiticity_error.max(next.hermiticity_error());
    let mut next = next.hermitian_part();
    let tr = next.trace().re;
    diag.max_trace_correction = diag.max_trace_correction.max((tr - 1.0).abs());
    next = next.scale_real(1.0 / tr);
    diag.steps += 1;
    Ok(next)
}

fn check_positivity(rho: &ComplexMatrix, diag: &mut RunDiagnostics) -> Result<()> {
    let min = hermitian_eig(rho)?.values[0];
    diag.min_eigenvalue = diag.min_eigenvalue.min(min);
    if min < POSITIVITY_ABORT {
        return Err(Error::Positivity { eigenvalue: min });
    }
    Ok(())
}

fn check_initial(rho0: &ComplexMatrix, layout: &SpaceLayout) -> Result<()> {
    let n = layout.total_dim();
    if rho0.rows() != n || rho0.cols() != n {
        return Err(Error::dim(format!("initial state is {}x{}, expected {n}x{n}", rho0.rows(), rho0.cols())));
    }
    if (rho0.trace().re - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidParameter(format!("initial state has trace {}", rho0.trace().re)));
    }
    if rho0.hermiticity_error() > 1e-10 {
        return Err(Error::NotHermitian { asymmetry: rho0.hermiticity_error() });
    }
    Ok(())
}

/// Fixed-step RK4 integration, sampling observables every `record_every`.
pub fn evolve(rho0: &ComplexMatrix, eq: &dyn MasterEquation, opts: &EvolveOptions) -> Result<Trajectory> {
    let layout = eq.layout();
    check_initial(rho0, &layout)?;
    if !(opts.dt > 0.0) || !(opts.t_end >= 0.0) || !(opts.record_every > 0.0) {
        return Err(Error::InvalidParameter("dt and record stride must be > 0, t_end >= 0".into()));
    }
    let steps = (opts.t_end / opts.dt).round() as usize;
    let stride = ((opts.record_every / opts.dt).round() as usize).max(1);

    let mut traj = Trajectory {
        times: Vec::new(),
        states: Vec::new(),
        observables: opts.observables.iter().map(|&o| (o, Vec::new())).collect(),
        final_state: ComplexMatrix::zeros(0, 0),
        diagnostics: RunDiagnostics::default(),
    };
    let record = |t: f64, rho_frame: &ComplexMatrix, traj: &mut Trajectory| -> Result<()> {
        check_positivity(rho_frame, &mut traj.diagnostics)?;
        let lab = eq.to_lab(rho_frame);
        for (obs, series) in traj.observables.iter_mut() {
            series.push(obs.evaluate(&lab, &layout)?);
        }
        traj.times.push(t);
        if opts.keep_states {
            traj.states.push(lab);
        }
        Ok(())
    };

    let mut rho = eq.from_lab(rho0);
    record(0.0, &rho, &mut traj)?;
    for k in 1..=steps {
        rho = step(eq, &rho, opts.dt, &mut traj.diagnostics)?;
        if k % stride == 0 || k == steps {
            record(k as f64 * opts.dt, &rho, &mut traj)?;
        }
    }
    traj.final_state = eq.to_lab(&rho);
    Ok(traj)
}

#[derive(Debug, Clone, Copy)]
pub struct SteadyOptions {
    /// Stop once ‖ρ̇‖_F < tol·‖ρ‖_F.
    pub tol: f64,
    pub dt: f64,
    pub t_max: f64,
    /// Time between residual checks.
    pub check_every: f64,
}

impl SteadyOptions {
    /// t_max = 500/κ.
    pub fn for_kappa(kappa: f64) -> Self {
        Self { tol: 1e-7, dt: DEFAULT_DT, t_max: 500.0 / kappa.max(1e-3), check_every: 1.0 }
    }
}

#[derive(Debug, Clone)]
pub struct SteadyState {
    /// Final lab-frame state.
    pub rho: ComplexMatrix,
    pub converged: bool,
    pub time: f64,
    /// ‖ρ̇‖_F / ‖ρ‖_F at the final state.
    pub residual: f64,
    pub diagnostics: RunDiagnostics,
}

impl SteadyState {
    /// Turns a non-converged result into an error.
    pub fn require_converged(self) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::NotConverged {
                what: "steady state",
                detail: format!("residual {:.3e} at t = {}", self.residual, self.time),
            })
        }
    }
}

/// Integrates until the Liouvillian residual drops below tolerance or t_max is reached.
pub fn steady_state(rho0: &ComplexMatrix, eq: &dyn MasterEquation, opts: &SteadyOptions) -> Result<SteadyState> {
    let layout = eq.layout();
    check_initial(rho0, &layout)?;
    let check_stride = ((opts.check_every / opts.dt).round() as usize).max(1);
    let max_steps = (opts.t_max / opts.dt).ceil() as usize;
    let mut diag = RunDiagnostics::default();
    let mut rho = eq.from_lab(rho0);
    let residual_of = |rho: &ComplexMatrix| -> Result<f64> { Ok(eq.rhs(rho)?.frobenius_norm() / rho.frobenius_norm()) };
    let mut residual = residual_of(&rho)?;
    let mut k = 0;
    while residual >= opts.tol && k < max_steps {
        rho = step(eq, &rho, opts.dt, &mut diag)?;
        k += 1;
        if k % check_stride == 0 || k == max_steps {
            check_positivity(&rho, &mut diag)?;
            residual = residual_of(&rho)?;
        }
    }
    check_positivity(&rho, &mut diag)?;
    Ok(SteadyState {
        rho: eq.to_lab(&rho),
        converged: residual < opts.tol,
        time: k as f64 * opts.dt,
        residual,
        diagnostics: diag,
    })
}

/// ½‖a − b‖₁
pub fn trace_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    Ok(0.5 * trace_norm(&(a - b).hermitian_part())?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum AnsatzKind {
    /// (1−b)|gg0⟩⟨gg0| + b|Φ⁻0⟩⟨Φ⁻0|
    Rwa,
    /// (1−b)|G⟩⟨G| + b|Φ⁻0⟩⟨Φ⁻0| with |G⟩ the Rabi ground state
    NonRwa,
}

#[derive(Debug, Clone, Copy)]
pub enum AnsatzForm<'a> {
    Rwa,
    NonRwa(&'a DressedSpectrum),
}

#[derive(Debug, Clone)]
pub struct SteadyStateAnsatz {
    /// Subradiant population ⟨Φ⁻|ρ_AB(0)|Φ⁻⟩.
    pub b: f64,
    pub kind: AnsatzKind,
    pub rho: ComplexMatrix,
}

const ATOMIC_GG: usize = 3;

fn atomic_phi_minus() -> [C64; 4] {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    [C64::new(0.0, 0.0), C64::new(h, 0.0), C64::new(-h, 0.0), C64::new(0.0, 0.0)]
}

/// Steady state predicted from the initial atomic state alone.
pub fn build_ansatz(rho_ab0: &ComplexMatrix, form: AnsatzForm<'_>, layout: &SpaceLayout) -> Result<SteadyStateAnsatz> {
    if rho_ab0.rows() != 4 || rho_ab0.cols() != 4 {
        return Err(Error::dim("initial atomic state must be 4x4"));
    }
    let phi = atomic_phi_minus();
    let rho_phi = rho_ab0.apply(&phi)?;
    let b = inner(&phi, &rho_phi).re;
    let coherence = rho_phi[ATOMIC_GG].norm();
    if coherence > 1e-10 {
        return Err(Error::GroundDarkCoherence { overlap: coherence });
    }
    if !(-1e-12..=1.0 + 1e-12).contains(&b) {
        return Err(Error::InvalidParameter(format!("subradiant population {b} outside [0, 1]")));
    }
    let b = b.clamp(0.0, 1.0);
    let (kind, ground) = match form {
        AnsatzForm::Rwa => (AnsatzKind::Rwa, layout.basis_ket(Qubit::G, Qubit::G, 0)),
        AnsatzForm::NonRwa(spec) => {
            if spec.len() != layout.total_dim() {
                return Err(Error::dim("dressed spectrum does not match the layout"));
            }
            (AnsatzKind::NonRwa, spec.ground_state())
        }
    };
    let mut rho = ComplexMatrix::projector(&ground).scale_real(1.0 - b);
    rho.add_scaled(C64::new(b, 0.0), &ComplexMatrix::projector(&layout.phi_minus_ket(0)));
    Ok(SteadyStateAnsatz { b, kind, rho })
}

/// Ground-state quantities used in Fock-truncation convergence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GroundObservable {
    EofMonogamyAF,
    EofLowerBoundAF,
    DiscordAB,
    ConditionalEntropyAB,
    MeanPhotons,
}

/// Lowest eigenstate of H_R.
pub fn rabi_ground_state(p: &RabiParams) -> Result<Vec<C64>> {
    Ok(dressed_spectrum(&rabi_hamiltonian(p)?)?.ground_state())
}

impl GroundObservable {
    pub fn evaluate(self, p: &RabiParams) -> Result<f64> {
        let layout = p.layout();
        let rho = ComplexMatrix::projector(&rabi_ground_state(p)?);
        let rho_ab = || partial_trace(&rho, &[Slot::A, Slot::B], &layout);
        match self {
            GroundObservable::EofMonogamyAF => eof_via_monogamy(&rho, &layout),
            GroundObservable::EofLowerBoundAF => {
                Ok(eof_lower_bound(&partial_trace(&rho, &[Slot::A, Slot::F], &layout)?, layout.fock_dim())?.bound)
            }
            GroundObservable::DiscordAB => Ok(quantum_discord(&rho_ab()?)?.value),
            GroundObservable::ConditionalEntropyAB => conditional_entropy(&rho_ab()?),
            GroundObservable::MeanPhotons => Ok((&photon_number_operator(&layout) * &rho).trace().re),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FockConvergence {
    /// First d whose value changes by less than tol when d grows by 2.
    pub d_star: usize,
    pub value: f64,
    /// (d, value) for every truncation evaluated.
    pub history: Vec<(usize, f64)>,
}

pub const FOCK_START: usize = 2;
pub const FOCK_STEP: usize = 2;
pub const FOCK_CAP: usize = 40;

/// Grows d by 2 from 2 until |value(d+2) − value(d)| < tol.
pub fn converge_fock(p: &RabiParams, observable: GroundObservable, tol: f64, cap: usize) -> Result<FockConvergence> {
    converge_fock_with(p, tol, cap, |q| observable.evaluate(q))
}

pub fn converge_fock_with(
    p: &RabiParams,
    tol: f64,
    cap: usize,
    value_at: impl Fn(&RabiParams) -> Result<f64>,
) -> Result<FockConvergence> {
    let mut d = FOCK_START;
    let mut prev = value_at(&p.with_fock_dim(d).validated()?)?;
    let mut history = vec![(d, prev)];
    loop {
        let next_d = d + FOCK_STEP;
        if next_d > cap {
            return Err(Error::NotConverged {
                what: "Fock truncation",
                detail: format!("last change {:.3e} at d = {d} (cap {cap})", history_delta(&history)),
            });
        }
        let next = value_at(&p.with_fock_dim(next_d))?;
        history.push((next_d, next));
        if (next - prev).abs() < tol {
            return Ok(FockConvergence { d_star: d, value: prev, history });
        }
        d = next_d;
        prev = next;
    }
}

fn history_delta(history: &[(usize, f64)]) -> f64 {
    match history {
        [.., (_, a), (_, b)] => (b - a).abs(),
        _ => f64::NAN,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::Qubit::G;
    use approx::assert_abs_diff_eq;

    #[test]
    fn ground_state_stationary_under_rwa() {
        let p = RabiParams::resonant(1.0, 0.1, 0.2, 3).unwrap();
        let eq = LabFrame::rwa(&p).unwrap();
        let rho = ComplexMatrix::projector(&p.layout().basis_ket(G, G, 0));
        assert_eq!(eq.rhs(&rho).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn dressed_ground_state_stationary() {
        let p = RabiParams::resonant(1.0, 0.5, 0.2, 8).unwrap();
        let eq = DressedFrame::new(&p).unwrap();
        let rho = eq.spectrum.ground_projector();
        let generic = liouvillian_apply(&rho, &rabi_hamiltonian(&p).unwrap(), &eq.channels()).unwrap();
        assert!(generic.frobenius_norm() < 1e-10, "{}", generic.frobenius_norm());
        let fast = eq.rhs(&eq.from_lab(&rho)).unwrap();
        assert!(fast.frobenius_norm() < 1e-10);
    }

    #[test]
    fn photon_decay_rate() {
        // H = 0, κ D[a], Fock-diagonal ρ: d⟨a†a⟩/dt = −κ⟨a†a⟩
        let p = RabiParams::resonant(1.0, 0.0, 0.3, 4).unwrap();
        let l = p.layout();
        let mut rho = ComplexMatrix::zeros(16, 16);
        for (n, w) in [0.1, 0.2, 0.3, 0.4].into_iter().enumerate() {
            let i = l.index(G, G, n);
            rho[(i, i)] = C64::new(w, 0.0);
        }
        let h = ComplexMatrix::zeros(16, 16);
        let rdot = liouvillian_apply(&rho, &h, &[standard_channel(&p).unwrap()]).unwrap();
        let num = photon_number_operator(&l);
        let n_dot = (&num * &rdot).trace().re;
        let n_mean = (&num * &rho).trace().re;
        assert_abs_diff_eq!(n_dot, -0.3 * n_mean, epsilon = 1e-13);
    }

    #[test]
    fn dissipator_on_one_photon() {
        // κ D[a] |1⟩⟨1| = κ(|0⟩⟨0| − |1⟩⟨1|)
        let p = RabiParams::resonant(1.0, 0.0, 0.7, 3).unwrap();
        let l = p.layout();
        let rho = ComplexMatrix::projector(&l.basis_ket(G, G, 1));
        let h = ComplexMatrix::zeros(12, 12);
        let out = liouvillian_apply(&rho, &h, &[standard_channel(&p).unwrap()]).unwrap();
        let mut expected = ComplexMatrix::zeros(12, 12);
        expected[(l.index(G, G, 0), l.index(G, G, 0))] = C64::new(0.7, 0.0);
        expected[(l.index(G, G, 1), l.index(G, G, 1))] = C64::new(-0.7, 0.0);
        assert!((&out - &expected).max_abs() < 1e-15);
    }

    #[test]
    fn dressed_frame_matches_generic_route() {
        let p = RabiParams::resonant(1.0, 0.3, 0.2, 4).unwrap();
        let eq = DressedFrame::new(&p).unwrap();
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(7);
        let rho = crate::random::density_matrix(&mut rng, 16);
        let generic = liouvillian_apply(&rho, &rabi_hamiltonian(&p).unwrap(), &eq.channels()).unwrap();
        let fast = eq.to_lab(&eq.rhs(&eq.from_lab(&rho)).unwrap());
        assert!((&generic - &fast).max_abs() < 1e-12, "{}", (&generic - &fast).max_abs());
    }

    #[test]
    fn ansatz_examples() {
        let l = SpaceLayout::new(3).unwrap();
        let ge = ComplexMatrix::from_real_diagonal(&[0.0, 0.0, 1.0, 0.0]);
        let a = build_ansatz(&ge, AnsatzForm::Rwa, &l).unwrap();
        assert_abs_diff_eq!(a.b, 0.5, epsilon = 1e-15);

        let gg = ComplexMatrix::from_real_diagonal(&[0.0, 0.0, 0.0, 1.0]);
        let a = build_ansatz(&gg, AnsatzForm::Rwa, &l).unwrap();
        assert_eq!(a.b, 0.0);
        assert_eq!(a.rho, ComplexMatrix::projector(&l.basis_ket(G, G, 0)));

        let phi = ComplexMatrix::projector(&atomic_phi_minus());
        let a = build_ansatz(&phi, AnsatzForm::Rwa, &l).unwrap();
        assert_abs_diff_eq!(a.b, 1.0, epsilon = 1e-15);
        assert!((&a.rho - &ComplexMatrix::projector(&l.phi_minus_ket(0))).max_abs() < 1e-15);

        // coherent superposition of |gg⟩ and |Φ⁻⟩ violates the no-coherence condition
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mut psi = atomic_phi_minus().map(|z| z * h);
        psi[ATOMIC_GG] = C64::new(h, 0.0);
        match build_ansatz(&ComplexMatrix::projector(&psi), AnsatzForm::Rwa, &l) {
            Err(Error::GroundDarkCoherence { overlap }) => assert_abs_diff_eq!(overlap, 0.5, epsilon = 1e-12),
            other => panic!("expected coherence rejection, got {other:?}"),
        }
    }

    #[test]
    fn fock_convergence_weak_coupling() {
        let p = RabiParams::resonant(1.0, 1e-3, 0.2, 2).unwrap();
        let c = converge_fock(&p, GroundObservable::EofMonogamyAF, 1e-4, FOCK_CAP).unwrap();
        assert!((2..=4).contains(&c.d_star), "d* = {}", c.d_star);
    }

    #[test]
    fn fock_convergence_cap() {
        let p = RabiParams::resonant(1.0, 1.0, 0.2, 2).unwrap();
        let r = converge_fock(&p, GroundObservable::MeanPhotons, 1e-12, 6);
        assert!(matches!(r, Err(Error::NotConverged { .. })));
    }
}
