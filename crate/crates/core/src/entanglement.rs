//! Correlation quantifiers for the two-qubit (A–B) and qubit–cavity (A–F)
//! reduced states.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hilbert::{partial_trace, partial_transpose_a, realign, reduce, sigma_y, Slot, SpaceLayout};
use crate::linalg::{eigenvalues_2x2, hermitian_eig, kron, trace_norm, von_neumann_entropy, ComplexMatrix, C64};
use crate::policy::NumericPolicy;

/// H₂(x) = −x log₂ x − (1−x) log₂(1−x)
pub fn binary_entropy(x: f64) -> Result<f64> {
    if !(-1e-12..=1.0 + 1e-12).contains(&x) || x.is_nan() {
        return Err(Error::InvalidParameter(format!("binary entropy argument {x} outside [0, 1]")));
    }
    let x = x.clamp(0.0, 1.0);
    let term = |p: f64| if p > 0.0 { -p * p.log2() } else { 0.0 };
    Ok(term(x) + term(1.0 - x))
}

fn check_two_qubit(rho: &ComplexMatrix) -> Result<()> {
    if rho.rows() != 4 || rho.cols() != 4 {
        return Err(Error::dim(format!("two-qubit state must be 4x4, got {}x{}", rho.rows(), rho.cols())));
    }
    Ok(())
}

/// Wootters concurrence of a two-qubit state.
pub fn concurrence(rho: &ComplexMatrix) -> Result<f64> {
    check_two_qubit(rho)?;
    let yy = kron(&sigma_y(), &sigma_y());
    let flipped = &(&yy * &rho.conj()) * &yy;
    let sqrt_rho = hermitian_eig(&rho.hermitian_part())?.map_spectrum(|x| x.max(0.0).sqrt());
    // √ρ ρ̃ √ρ shares its spectrum with ρ ρ̃ and is Hermitian.
    let m = (&(&sqrt_rho * &flipped) * &sqrt_rho).hermitian_part();
    let mut s: Vec<f64> = hermitian_eig(&m)?.values.iter().map(|&x| x.max(0.0).sqrt()).collect();
    s.sort_by(|a, b| b.total_cmp(a));
    Ok((s[0] - s[1] - s[2] - s[3]).max(0.0))
}

/// H₂((1 + √(1 − C²))/2)
pub fn eof_from_concurrence(c: f64) -> Result<f64> {
    let c = c.clamp(0.0, 1.0);
    binary_entropy(0.5 * (1.0 + (1.0 - c * c).max(0.0).sqrt()))
}

/// Entanglement of formation of a two-qubit state.
pub fn eof_two_qubit(rho: &ComplexMatrix) -> Result<f64> {
    eof_from_concurrence(concurrence(rho)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LowerBound {
    /// ‖ρ^{T_A}‖
    pub ppt_norm: f64,
    /// ‖R(ρ)‖
    pub realignment_norm: f64,
    /// Λ, clamped to at most 2.
    pub lambda: f64,
    pub bound: f64,
}

/// Lower bound on the entanglement of formation of a 2 ⊗ d state from the
/// PPT and realignment trace norms.
pub fn eof_lower_bound(rho: &ComplexMatrix, d: usize) -> Result<LowerBound> {
    let ppt_norm = trace_norm(&partial_transpose_a(rho, d)?)?;
    let realignment_norm = trace_norm(&realign(rho, d)?)?;
    let mut lambda = ppt_norm.max(realignment_norm);
    if lambda > 2.0 + 1e-6 {
        return Err(Error::Consistency(format!("Λ = {lambda} exceeds 2 for a qubit-qudit state")));
    }
    if lambda > 2.0 {
        log::warn!("clamping Λ = {lambda:.9} to 2");
        lambda = 2.0;
    }
    let bound = if lambda <= 1.0 {
        0.0
    } else {
        let excess = lambda - 1.0;
        binary_entropy(0.5 * (1.0 + (1.0 - excess * excess).max(0.0).sqrt()))?
    };
    Ok(LowerBound { ppt_norm, realignment_norm, lambda, bound })
}

/// S(ρ_AB) − S(ρ_B)
pub fn conditional_entropy(rho_ab: &ComplexMatrix) -> Result<f64> {
    check_two_qubit(rho_ab)?;
    let rho_b = reduce(rho_ab, &[2, 2], &[false, true])?;
    Ok(von_neumann_entropy(rho_ab)? - von_neumann_entropy(&rho_b)?)
}

/// Result of the discord minimization over projective measurements on B.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Discord {
    pub value: f64,
    /// Minimal average conditional entropy Σ_k p_k S(ρ_{A|k}).
    pub min_conditional_entropy: f64,
    /// Bloch angles of the optimal measurement axis.
    pub theta: f64,
    pub phi: f64,
}

pub const DISCORD_GRID: usize = 64;

/// Σ_k p_k S(ρ_{A|k}) for the projective measurement on B along the Bloch
/// axis (θ, φ).
pub fn measured_conditional_entropy(rho_ab: &ComplexMatrix, theta: f64, phi: f64) -> f64 {
    let (c, s) = ((0.5 * theta).cos(), (0.5 * theta).sin());
    let e = C64::from_polar(1.0, phi);
    let up = [C64::new(c, 0.0), e * s];
    let down = [-e.conj() * s, C64::new(c, 0.0)];
    let mut total = 0.0;
    for u in [up, down] {
        // unnormalized ρ_{A|k}[a, a'] = Σ_{b,b'} ū_b ρ[(a,b),(a',b')] u_b'
        let mut sigma = ComplexMatrix::zeros(2, 2);
        for a in 0..2 {
            for ap in 0..2 {
                let mut acc = C64::new(0.0, 0.0);
                for b in 0..2 {
                    for bp in 0..2 {
                        acc += u[b].conj() * rho_ab[(2 * a + b, 2 * ap + bp)] * u[bp];
                    }
                }
                sigma[(a, ap)] = acc;
            }
        }
        let p = sigma.trace().re;
        if p <= 1e-15 {
            continue;
        }
        for lam in eigenvalues_2x2(&sigma) {
            if lam > 0.0 {
                total -= lam * (lam / p).log2();
            }
        }
    }
    total
}

/// Quantum discord of a two-qubit state with the measurement on B.
///
/// The average conditional entropy is minimized over a 64×64 grid of Bloch
/// angles, then refined with restarted Nelder–Mead from the best grid point.
pub fn quantum_discord(rho_ab: &ComplexMatrix) -> Result<Discord> {
    check_two_qubit(rho_ab)?;
    let rho_ab = rho_ab.hermitian_part();
    let rho_b = reduce(&rho_ab, &[2, 2], &[false, true])?;
    let base = von_neumann_entropy(&rho_b)? - von_neumann_entropy(&rho_ab)?;
    let f = |x: [f64; 2]| measured_conditional_entropy(&rho_ab, x[0], x[1]);

    let n = DISCORD_GRID;
    let dtheta = std::f64::consts::PI / (n - 1) as f64;
    let dphi = 2.0 * std::f64::consts::PI / n as f64;
    let mut best = ([0.0, 0.0], f64::INFINITY);
    for i in 0..n {
        for j in 0..n {
            let x = [i as f64 * dtheta, j as f64 * dphi];
            let v = f(x);
            if v < best.1 {
                best = (x, v);
            }
        }
    }
    // a flat direction (e.g. φ for z-symmetric states) can collapse the simplex,
    // so restart from the incumbent until a fresh simplex stops improving
    let (mut x, mut v) = best;
    let mut step = [dtheta, dphi];
    for _ in 0..20 {
        let (nx, nv) = nelder_mead(f, x, step, 1e-15, 2000);
        if nv >= v - 1e-15 {
            if step[0] < 1e-6 {
                break;
            }
            step = [step[0] * 0.1, step[1] * 0.1];
            continue;
        }
        (x, v) = (nx, nv);
    }

    let mut value = base + v;
    if value < 0.0 {
        if value < -NumericPolicy::DEFAULT.negativity_floor {
            return Err(Error::Consistency(format!("discord {value:.3e} is negative")));
        }
        log::debug!("clamping discord {value:.3e} to 0");
        value = 0.0;
    }
    Ok(Discord { value, min_conditional_entropy: v, theta: x[0], phi: x[1] })
}

/// Minimal two-parameter Nelder–Mead; stops once the spread of objective
/// values over the simplex falls below `ftol`.
fn nelder_mead(f: impl Fn([f64; 2]) -> f64, start: [f64; 2], step: [f64; 2], ftol: f64, max_iter: usize) -> ([f64; 2], f64) {
    let mut simplex = [start, [start[0] + step[0], start[1]], [start[0], start[1] + step[1]]];
    let mut values = simplex.map(&f);
    let lerp = |a: [f64; 2], b: [f64; 2], t: f64| [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];
    for _ in 0..max_iter {
        let mut idx = [0usize, 1, 2];
        idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        simplex = idx.map(|i| simplex[i]);
        values = idx.map(|i| values[i]);
        if values[2] - values[0] < ftol {
            break;
        }
        let centroid = lerp(simplex[0], simplex[1], 0.5);
        let reflected = lerp(centroid, simplex[2], -1.0);
        let fr = f(reflected);
        if fr < values[0] {
            let expanded = lerp(centroid, simplex[2], -2.0);
            let fe = f(expanded);
            if fe < fr {
                simplex[2] = expanded;
                values[2] = fe;
            } else {
                simplex[2] = reflected;
                values[2] = fr;
            }
        } else if fr < values[1] {
            simplex[2] = reflected;
            values[2] = fr;
        } else {
            let contracted = if fr < values[2] { lerp(centroid, reflected, 0.5) } else { lerp(centroid, simplex[2], 0.5) };
            let fc = f(contracted);
            if fc < values[2].min(fr) {
                simplex[2] = contracted;
                values[2] = fc;
            } else {
                for k in 1..3 {
                    simplex[k] = lerp(simplex[0], simplex[k], 0.5);
                    values[k] = f(simplex[k]);
                }
            }
        }
    }
    let k = (0..3).min_by(|&a, &b| values[a].total_cmp(&values[b])).unwrap();
    (simplex[k], values[k])
}

/// E(ρ_AF) of a pure tripartite state through E(ρ_AF) = D(ρ_AB) + S_{A|B}.
pub fn eof_via_monogamy(rho_abf: &ComplexMatrix, layout: &SpaceLayout) -> Result<f64> {
    let purity = (rho_abf * rho_abf).trace().re;
    if purity < 1.0 - NumericPolicy::DEFAULT.purity_tol {
        return Err(Error::NotPure { purity });
    }
    let rho_ab = partial_trace(rho_abf, &[Slot::A, Slot::B], layout)?;
    let total = quantum_discord(&rho_ab)?.value + conditional_entropy(&rho_ab)?;
    if total < 0.0 {
        if total < -NumericPolicy::DEFAULT.negativity_floor {
            return Err(Error::Consistency(format!("monogamy EOF {total:.3e} is negative")));
        }
        log::debug!("clamping monogamy EOF {total:.3e} to 0");
        return Ok(0.0);
    }
    Ok(total)
}

/// Same as [`eof_via_monogamy`] for a state vector.
pub fn eof_via_monogamy_ket(psi: &[C64], layout: &SpaceLayout) -> Result<f64> {
    eof_via_monogamy(&ComplexMatrix::projector(psi), layout)
}

/// Every quantifier for a state on the full A ⊗ B ⊗ F space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntanglementReport {
    /// Λ of ρ_AF
    pub lambda: f64,
    /// lower-bound EOF of ρ_AF
    pub eof_lower_bound: f64,
    pub concurrence: f64,
    /// EOF of ρ_AB
    pub eof_two_qubit: f64,
    /// discord of ρ_AB measured on B
    pub discord: f64,
    /// S_{A|B}
    pub conditional_entropy: f64,
    /// exact EOF of ρ_AF, only for pure global states
    pub eof_monogamy: Option<f64>,
}

impl EntanglementReport {
    pub fn for_state(rho: &ComplexMatrix, layout: &SpaceLayout) -> Result<Self> {
        let rho_ab = partial_trace(rho, &[Slot::A, Slot::B], layout)?;
        let rho_af = partial_trace(rho, &[Slot::A, Slot::F], layout)?;
        let lb = eof_lower_bound(&rho_af, layout.fock_dim())?;
        let concurrence = concurrence(&rho_ab)?;
        let discord = quantum_discord(&rho_ab)?.value;
        let conditional_entropy = conditional_entropy(&rho_ab)?;
        let purity = (rho * rho).trace().re;
        let eof_monogamy = if purity >= 1.0 - NumericPolicy::DEFAULT.purity_tol {
            Some((discord + conditional_entropy).max(0.0))
        } else {
            None
        };
        Ok(Self {
            lambda: lb.lambda,
            eof_lower_bound: lb.bound,
            concurrence,
            eof_two_qubit: eof_from_concurrence(concurrence)?,
            discord,
            conditional_entropy,
            eof_monogamy,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::Qubit::{E, G};
    use crate::linalg::{kron_vec, ONE, ZERO};
    use approx::assert_abs_diff_eq;

    fn bell() -> ComplexMatrix {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        ComplexMatrix::projector(&[C64::new(h, 0.0), ZERO, ZERO, C64::new(h, 0.0)])
    }

    /// Atomic marginal of the RWA steady state with b = 1/2:
    /// (1/2)|gg⟩⟨gg| + (1/2)|Φ⁻⟩⟨Φ⁻|
    fn steady_marginal() -> ComplexMatrix {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let phi = [ZERO, C64::new(h, 0.0), C64::new(-h, 0.0), ZERO];
        let mut rho = ComplexMatrix::projector(&phi).scale_real(0.5);
        rho[(3, 3)] += C64::new(0.5, 0.0);
        rho
    }

    fn product() -> ComplexMatrix {
        let a = [C64::new(0.6, 0.0), C64::new(0.0, 0.8)];
        let b = [C64::new(0.8, 0.0), C64::new(0.36, 0.48)];
        ComplexMatrix::projector(&kron_vec(&a, &b))
    }

    #[test]
    fn binary_entropy_examples() {
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        assert_abs_diff_eq!(binary_entropy(0.5).unwrap(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(binary_entropy(0.25).unwrap(), 0.811278, epsilon = 1e-6);
        assert_abs_diff_eq!(binary_entropy(0.3).unwrap(), binary_entropy(0.7).unwrap(), epsilon = 1e-15);
        assert!(binary_entropy(1.5).is_err());
        assert!(binary_entropy(-0.1).is_err());
    }

    #[test]
    fn concurrence_examples() {
        assert_abs_diff_eq!(concurrence(&bell()).unwrap(), 1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(concurrence(&product()).unwrap(), 0.0, epsilon = 1e-7);
        // X-state formula 2(|ρ₂₃| − √(ρ₁₁ρ₄₄)) = 2·(1/4)
        assert_abs_diff_eq!(concurrence(&steady_marginal()).unwrap(), 0.5, epsilon = 1e-10);
        assert!(concurrence(&ComplexMatrix::identity(2)).is_err());
    }

    #[test]
    fn eof_two_qubit_examples() {
        assert_abs_diff_eq!(eof_from_concurrence(1.0).unwrap(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(eof_from_concurrence(0.0).unwrap(), 0.0, epsilon = 1e-15);
        // H₂((1 + √0.75)/2)
        let x: f64 = 0.5 * (1.0 + 0.75f64.sqrt());
        let expected = -x * x.log2() - (1.0 - x) * (1.0 - x).log2();
        assert_abs_diff_eq!(expected, 0.354579, epsilon = 1e-6);
        assert_abs_diff_eq!(eof_two_qubit(&steady_marginal()).unwrap(), expected, epsilon = 1e-9);
    }

    #[test]
    fn lower_bound_examples() {
        // product qubit ⊗ qutrit
        let psi = kron_vec(&[C64::new(0.6, 0.0), C64::new(0.8, 0.0)], &[ZERO, ONE, ZERO]);
        let lb = eof_lower_bound(&ComplexMatrix::projector(&psi), 3).unwrap();
        assert_abs_diff_eq!(lb.lambda, 1.0, epsilon = 1e-9);
        assert!(lb.bound < 1e-8);

        let lb = eof_lower_bound(&bell(), 2).unwrap();
        assert_abs_diff_eq!(lb.lambda, 2.0, epsilon = 1e-9);
        assert_abs_diff_eq!(lb.bound, 1.0, epsilon = 1e-6);

        // (3/4)|g0⟩⟨g0| + (1/4)|e0⟩⟨e0| on 2 ⊗ 3
        let mut rho = ComplexMatrix::zeros(6, 6);
        rho[(3, 3)] = C64::new(0.75, 0.0);
        rho[(0, 0)] = C64::new(0.25, 0.0);
        let lb = eof_lower_bound(&rho, 3).unwrap();
        assert_abs_diff_eq!(lb.lambda, 1.0, epsilon = 1e-12);
        assert_eq!(lb.bound, 0.0);
    }

    #[test]
    fn conditional_entropy_examples() {
        assert_abs_diff_eq!(conditional_entropy(&product()).unwrap(), 0.0, epsilon = 1e-9);
        assert_abs_diff_eq!(conditional_entropy(&bell()).unwrap(), -1.0, epsilon = 1e-9);
        let mixed = ComplexMatrix::identity(4).scale_real(0.25);
        assert_abs_diff_eq!(conditional_entropy(&mixed).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn discord_examples() {
        assert_abs_diff_eq!(quantum_discord(&product()).unwrap().value, 0.0, epsilon = 1e-6);
        // pure state: D = S(ρ_A)
        let psi = [C64::new(0.8, 0.0), ZERO, ZERO, C64::new(0.0, 0.6)];
        let rho = ComplexMatrix::projector(&psi);
        let s_a = binary_entropy(0.64).unwrap();
        assert_abs_diff_eq!(quantum_discord(&rho).unwrap().value, s_a, epsilon = 1e-5);
        // classical-classical state
        let cc = ComplexMatrix::from_real_diagonal(&[0.1, 0.2, 0.3, 0.4]);
        assert_abs_diff_eq!(quantum_discord(&cc).unwrap().value, 0.0, epsilon = 1e-6);
    }

    #[test]
    fn monogamy_examples() {
        let l = SpaceLayout::new(3).unwrap();
        assert_abs_diff_eq!(eof_via_monogamy_ket(&l.basis_ket(G, G, 0), &l).unwrap(), 0.0, epsilon = 1e-9);
        let mixed = ComplexMatrix::identity(12).scale_real(1.0 / 12.0);
        assert!(matches!(eof_via_monogamy(&mixed, &l), Err(Error::NotPure { .. })));
        // |e⟩_A entangled with F, B a spectator: E(AF) = 1
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mut psi = vec![ZERO; 12];
        psi[l.index(E, G, 0)] = C64::new(h, 0.0);
        psi[l.index(G, G, 1)] = C64::new(h, 0.0);
        assert_abs_diff_eq!(eof_via_monogamy_ket(&psi, &l).unwrap(), 1.0, epsilon = 1e-6);
    }
}
