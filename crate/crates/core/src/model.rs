//! Rabi and Jaynes–Cummings Hamiltonians for two identical qubits in a single
//! cavity mode, their dressed spectra, and the two cavity-loss dissipators.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{annihilation, embed, sigma_minus, sigma_plus, sigma_x, sigma_z, Slot, SpaceLayout};
use crate::linalg::{hermitian_eig, ComplexMatrix, C64};
use crate::policy::NumericPolicy;

/// Physical parameters, all in the same frequency unit (ħ = 1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RabiParams {
    pub omega_a: f64,
    pub omega_f: f64,
    pub g: f64,
    pub kappa: f64,
    pub fock_dim: usize,
}

impl RabiParams {
    /// ω_a = ω_f = ω.
    pub fn resonant(omega: f64, g: f64, kappa: f64, fock_dim: usize) -> Result<Self> {
        Self { omega_a: omega, omega_f: omega, g, kappa, fock_dim }.validated()
    }

    pub fn validated(self) -> Result<Self> {
        let bad = |what: &str| Err(Error::InvalidParameter(what.to_string()));
        if !(self.omega_a > 0.0 && self.omega_a.is_finite()) {
            return bad("omega_a must be > 0");
        }
        if !(self.omega_f > 0.0 && self.omega_f.is_finite()) {
            return bad("omega_f must be > 0");
        }
        if !(self.g >= 0.0 && self.g.is_finite()) {
            return bad("g must be >= 0");
        }
        if !(self.kappa >= 0.0 && self.kappa.is_finite()) {
            return bad("kappa must be >= 0");
        }
        if self.fock_dim < 2 {
            return bad("fock dimension d must be >= 2");
        }
        Ok(self)
    }

    pub fn with_fock_dim(self, fock_dim: usize) -> Self {
        Self { fock_dim, ..self }
    }

    pub fn with_g(self, g: f64) -> Self {
        Self { g, ..self }
    }

    pub fn layout(&self) -> SpaceLayout {
        SpaceLayout::new(self.fock_dim).expect("validated params have d >= 2")
    }
}

/// The part shared by both Hamiltonians: ½ω_a(σ_z^A + σ_z^B) + ω_f a†a.
fn bare_hamiltonian(p: &RabiParams, layout: &SpaceLayout) -> Result<ComplexMatrix> {
    let a = annihilation(layout.fock_dim())?;
    let number = &a.adjoint() * &a;
    let sz = &embed(&sigma_z(), Slot::A, layout)? + &embed(&sigma_z(), Slot::B, layout)?;
    let mut h = sz.scale_real(0.5 * p.omega_a);
    h.add_scaled(C64::new(p.omega_f, 0.0), &embed(&number, Slot::F, layout)?);
    Ok(h)
}

/// H_R = ½ω_a Σ_j σ_z^j + ω_f a†a + g Σ_j σ_x^j (a + a†)
pub fn rabi_hamiltonian(p: &RabiParams) -> Result<ComplexMatrix> {
    let p = p.validated()?;
    let layout = p.layout();
    let mut h = bare_hamiltonian(&p, &layout)?;
    let a = annihilation(layout.fock_dim())?;
    let x = embed(&(&a + &a.adjoint()), Slot::F, &layout)?;
    let sx = &embed(&sigma_x(), Slot::A, &layout)? + &embed(&sigma_x(), Slot::B, &layout)?;
    h.add_scaled(C64::new(p.g, 0.0), &(&sx * &x));
    Ok(h)
}

/// H_JC = ½ω_a Σ_j σ_z^j + ω_f a†a + g Σ_j (σ_+^j a + σ_-^j a†)
pub fn jc_hamiltonian(p: &RabiParams) -> Result<ComplexMatrix> {
    let p = p.validated()?;
    let layout = p.layout();
    let mut h = bare_hamiltonian(&p, &layout)?;
    let a = embed(&annihilation(layout.fock_dim())?, Slot::F, &layout)?;
    let ad = a.adjoint();
    for slot in [Slot::A, Slot::B] {
        let sp = embed(&sigma_plus(), slot, &layout)?;
        let sm = embed(&sigma_minus(), slot, &layout)?;
        h.add_scaled(C64::new(p.g, 0.0), &(&sp * &a));
        h.add_scaled(C64::new(p.g, 0.0), &(&sm * &ad));
    }
    Ok(h)
}

/// N_exc = a†a + Σ_j |e⟩⟨e|_j
pub fn excitation_operator(layout: &SpaceLayout) -> ComplexMatrix {
    let diag: Vec<f64> = (0..layout.total_dim()).map(|i| layout.excitations(i) as f64).collect();
    ComplexMatrix::from_real_diagonal(&diag)
}

/// a†a on the full space.
pub fn photon_number_operator(layout: &SpaceLayout) -> ComplexMatrix {
    let diag: Vec<f64> = (0..layout.total_dim()).map(|i| layout.decompose(i).2 as f64).collect();
    ComplexMatrix::from_real_diagonal(&diag)
}

/// Energy-ordered eigenpairs of a Hamiltonian.
#[derive(Debug, Clone)]
pub struct DressedSpectrum {
    pub energies: Vec<f64>,
    /// Eigenstates as columns, in the order of `energies`.
    pub states: ComplexMatrix,
}

impl DressedSpectrum {
    pub fn len(&self) -> usize {
        self.energies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.energies.is_empty()
    }

    pub fn state(&self, j: usize) -> Vec<C64> {
        self.states.column(j)
    }

    /// The lowest-energy eigenstate.
    pub fn ground_state(&self) -> Vec<C64> {
        self.state(0)
    }

    pub fn ground_projector(&self) -> ComplexMatrix {
        ComplexMatrix::projector(&self.ground_state())
    }
}

pub fn dressed_spectrum(h: &ComplexMatrix) -> Result<DressedSpectrum> {
    let eig = hermitian_eig(h)?;
    Ok(DressedSpectrum { energies: eig.values, states: eig.vectors })
}

#[derive(Debug, Clone)]
pub enum JumpOperator {
    Dense(ComplexMatrix),
    /// |lower⟩⟨upper| between two dressed states, kept as the two vectors.
    Transition { lower: usize, upper: usize, lower_state: Vec<C64>, upper_state: Vec<C64> },
}

/// One dissipation channel Γ·D[m].
#[derive(Debug, Clone)]
pub struct JumpChannel {
    pub operator: JumpOperator,
    pub rate: f64,
}

impl JumpChannel {
    pub fn matrix(&self) -> ComplexMatrix {
        match &self.operator {
            JumpOperator::Dense(m) => m.clone(),
            JumpOperator::Transition { lower_state, upper_state, .. } => {
                ComplexMatrix::outer(lower_state, upper_state)
            }
        }
    }
}

/// Relaxation rates Γ^{jk} between dressed states, dense N×N with zeros for k ≤ j.
#[derive(Debug, Clone)]
pub struct RateTable {
    n: usize,
    rates: Vec<f64>,
}

impl RateTable {
    pub fn dim(&self) -> usize {
        self.n
    }

    /// Γ^{jk}, rate of the jump k → j.
    #[inline]
    pub fn rate(&self, j: usize, k: usize) -> f64 {
        self.rates[j * self.n + k]
    }

    /// Total decay rate out of level k, Σ_j Γ^{jk}.
    pub fn total_decay(&self, k: usize) -> f64 {
        (0..k).map(|j| self.rate(j, k)).sum()
    }

    /// Nonzero (j, k, Γ) triples.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n).flat_map(move |j| ((j + 1)..self.n).map(move |k| (j, k, self.rate(j, k)))).filter(|t| t.2 > 0.0)
    }
}

/// Γ^{jk} = κ (ω_k − ω_j)/ω_f |⟨j|(a + a†)|k⟩|² for k > j; rates below
/// `rate_floor · κ` are set to zero.
pub fn improved_rates(spec: &DressedSpectrum, p: &RabiParams, policy: &NumericPolicy) -> Result<RateTable> {
    let layout = p.layout();
    let n = layout.total_dim();
    if spec.len() != n {
        return Err(Error::dim(format!("spectrum has {} levels, layout needs {n}", spec.len())));
    }
    let a = annihilation(layout.fock_dim())?;
    let x = embed(&(&a + &a.adjoint()), Slot::F, &layout)?;
    let x_dressed = x.change_basis(&spec.states)?;
    let floor = policy.rate_floor * p.kappa;
    let mut rates = vec![0.0; n * n];
    for j in 0..n {
        for k in (j + 1)..n {
            let gap = spec.energies[k] - spec.energies[j];
            let rate = p.kappa * gap / p.omega_f * x_dressed[(j, k)].norm_sqr();
            if rate < 0.0 {
                return Err(Error::Consistency(format!("negative relaxation rate {rate:.3e} for {k} -> {j}")));
            }
            if rate > floor {
                rates[j * n + k] = rate;
            }
        }
    }
    Ok(RateTable { n, rates })
}

/// One channel |j⟩⟨k| per nonzero Γ^{jk}.
pub fn improved_channels(spec: &DressedSpectrum, p: &RabiParams) -> Result<Vec<JumpChannel>> {
    let table = improved_rates(spec, p, &NumericPolicy::DEFAULT)?;
    Ok(table
        .iter()
        .map(|(j, k, rate)| JumpChannel {
            operator: JumpOperator::Transition {
                lower: j,
                upper: k,
                lower_state: spec.state(j),
                upper_state: spec.state(k),
            },
            rate,
        })
        .collect())
}

/// κ D[a]
pub fn standard_channel(p: &RabiParams) -> Result<JumpChannel> {
    let layout = p.validated()?.layout();
    let a = embed(&annihilation(layout.fock_dim())?, Slot::F, &layout)?;
    Ok(JumpChannel { operator: JumpOperator::Dense(a), rate: p.kappa })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::Qubit::{E, G};
    use crate::linalg::inner;
    use approx::assert_abs_diff_eq;

    fn params(g: f64, d: usize) -> RabiParams {
        RabiParams::resonant(1.0, g, 0.2, d).unwrap()
    }

    #[test]
    fn params_validation() {
        assert!(RabiParams::resonant(1.0, -0.1, 0.2, 4).is_err());
        assert!(RabiParams::resonant(0.0, 0.1, 0.2, 4).is_err());
        assert!(RabiParams::resonant(1.0, 0.1, -0.2, 4).is_err());
        assert!(RabiParams::resonant(1.0, 0.1, 0.2, 1).is_err());
    }

    #[test]
    fn rabi_matrix_elements() {
        let p = RabiParams { omega_a: 1.3, omega_f: 0.9, g: 0.37, kappa: 0.1, fock_dim: 4 };
        let l = p.layout();
        let h = rabi_hamiltonian(&p).unwrap();
        let gg0 = l.index(G, G, 0);
        assert_abs_diff_eq!(h[(gg0, gg0)].re, -1.3, epsilon = 1e-15);
        assert_abs_diff_eq!(h[(l.index(G, G, 1), l.index(E, G, 0))].re, 0.37, epsilon = 1e-15);
        assert!(h.hermiticity_error() == 0.0);
    }

    #[test]
    fn decoupled_rabi_spectrum() {
        let p = RabiParams { omega_a: 1.0, omega_f: 0.7, g: 0.0, kappa: 0.1, fock_dim: 3 };
        let spec = dressed_spectrum(&rabi_hamiltonian(&p).unwrap()).unwrap();
        let mut expected = Vec::new();
        for sa in [1.0, -1.0] {
            for sb in [1.0, -1.0] {
                for n in 0..3 {
                    expected.push(0.5 * (sa + sb) + 0.7 * n as f64);
                }
            }
        }
        expected.sort_by(f64::total_cmp);
        for (a, b) in spec.energies.iter().zip(&expected) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-13);
        }
    }

    #[test]
    fn jc_matrix_elements_and_conservation() {
        let p = params(0.3, 4);
        let l = p.layout();
        let h = jc_hamiltonian(&p).unwrap();
        let (gg1, eg0, ge0, ge2) = (l.index(G, G, 1), l.index(E, G, 0), l.index(G, E, 0), l.index(G, E, 2));
        assert_eq!(h[(eg0, gg1)].re, 0.3);
        assert_eq!(h[(ge0, gg1)].re, 0.3);
        assert_eq!(h[(gg1, ge2)], C64::new(0.0, 0.0));
        // the counter-rotating element ⟨ee1|H|gg0⟩ is absent under RWA but present in H_R
        let (ee1, gg0) = (l.index(E, E, 1), l.index(G, G, 0));
        assert_eq!(h[(ee1, l.index(E, G, 0))].norm(), 0.0);
        let hr = rabi_hamiltonian(&p).unwrap();
        assert_eq!(hr[(ee1, l.index(E, G, 0))].re, 0.3);
        assert_eq!(hr[(gg0, gg0)], h[(gg0, gg0)]);
        let n = excitation_operator(&l);
        assert_eq!(h.commutator(&n).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn jc_single_excitation_splitting() {
        // Resonant single-excitation block {|gg1⟩, |Φ⁺0⟩, |Φ⁻0⟩}: energies 0 ± √2 g and 0.
        let g = 0.2;
        let spec = dressed_spectrum(&jc_hamiltonian(&params(g, 4)).unwrap()).unwrap();
        let one_exc: Vec<f64> = spec.energies.iter().copied().filter(|e| e.abs() < 0.5).collect();
        assert_eq!(one_exc.len(), 3);
        assert_abs_diff_eq!(one_exc[0], -(2f64).sqrt() * g, epsilon = 1e-12);
        assert_abs_diff_eq!(one_exc[1], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(one_exc[2], (2f64).sqrt() * g, epsilon = 1e-12);
    }

    #[test]
    fn ground_state_examples() {
        let spec0 = dressed_spectrum(&rabi_hamiltonian(&params(0.0, 4)).unwrap()).unwrap();
        assert_abs_diff_eq!(spec0.energies[0], -1.0, epsilon = 1e-14);
        let l = params(0.0, 4).layout();
        assert_abs_diff_eq!(spec0.ground_state()[l.index(G, G, 0)].re, 1.0, epsilon = 1e-14);

        let p = params(0.5, 16);
        let l = p.layout();
        let spec = dressed_spectrum(&rabi_hamiltonian(&p).unwrap()).unwrap();
        let psi = spec.ground_state();
        let ee_weight: f64 = (0..16).map(|n| psi[l.index(E, E, n)].norm_sqr()).sum();
        assert!(ee_weight > 1e-3, "ee admixture {ee_weight}");
        let photons = inner(&psi, &photon_number_operator(&l).apply(&psi).unwrap()).re;
        assert!(photons > 0.05, "virtual photons {photons}");
    }

    #[test]
    fn improved_rates_at_zero_coupling() {
        // bare photon ladder: Γ = κ n for |ij,n⟩ → |ij,n−1⟩, nothing else
        let p = RabiParams { omega_a: 1.0, omega_f: 0.7, g: 0.0, kappa: 0.2, fock_dim: 3 };
        let spec = dressed_spectrum(&rabi_hamiltonian(&p).unwrap()).unwrap();
        let channels = improved_channels(&spec, &p).unwrap();
        assert_eq!(channels.len(), 8);
        let l = p.layout();
        for ch in &channels {
            let JumpOperator::Transition { lower_state, upper_state, .. } = &ch.operator else { unreachable!() };
            let lo = lower_state.iter().position(|z| z.norm() > 0.5).unwrap();
            let hi = upper_state.iter().position(|z| z.norm() > 0.5).unwrap();
            let (a1, b1, n1) = l.decompose(lo);
            let (a2, b2, n2) = l.decompose(hi);
            assert_eq!((a1, b1), (a2, b2));
            assert_eq!(n1 + 1, n2);
            assert_abs_diff_eq!(ch.rate, 0.2 * n2 as f64, epsilon = 1e-12);
        }
    }

    #[test]
    fn degenerate_levels_have_zero_rate() {
        let p = params(0.0, 3);
        let spec = dressed_spectrum(&rabi_hamiltonian(&p).unwrap()).unwrap();
        let table = improved_rates(&spec, &p, &NumericPolicy::DEFAULT).unwrap();
        for (j, k, _) in table.iter() {
            assert!(spec.energies[k] - spec.energies[j] > 1e-9);
        }
    }

    #[test]
    fn standard_channel_properties() {
        let p = params(0.1, 3);
        let ch = standard_channel(&p).unwrap();
        assert_eq!(ch.rate, 0.2);
        let l = p.layout();
        let v = ch.matrix().apply(&l.basis_ket(G, G, 0)).unwrap();
        assert!(v.iter().all(|z| z.norm() == 0.0));
    }
}
