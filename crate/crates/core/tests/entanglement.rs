use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use usc_qed::dynamics::rabi_ground_state;
use usc_qed::entanglement::{
    conditional_entropy, eof_lower_bound, eof_via_monogamy, quantum_discord, EntanglementReport,
};
use usc_qed::hilbert::{partial_trace, sigma_x, sigma_y, sigma_z, Slot};
use usc_qed::linalg::{kron, von_neumann_entropy, ComplexMatrix, C64};
use usc_qed::model::RabiParams;
use usc_qed::random;

fn h2x2(m: [[C64; 2]; 2]) -> f64 {
    let tr = (m[0][0] + m[1][1]).re;
    let det = (m[0][0] * m[1][1] - m[0][1] * m[1][0]).re;
    let disc = (tr * tr - 4.0 * det).max(0.0).sqrt();
    [(tr + disc) / 2.0, (tr - disc) / 2.0]
        .iter()
        .filter(|&&l| l > 1e-15)
        .map(|&l| -l * l.log2())
        .sum()
}

/// Brute-force discord with B measured on a 512×512 (θ, φ) grid.
fn discord_grid_oracle(rho: &ComplexMatrix) -> f64 {
    const N: usize = 512;
    let mut best = f64::INFINITY;
    for it in 0..N {
        let theta = std::f64::consts::PI * it as f64 / (N - 1) as f64;
        for ip in 0..N {
            let phi = std::f64::consts::TAU * ip as f64 / N as f64;
            let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
            let e = C64::from_polar(1.0, phi);
            let basis = [[C64::new(c, 0.0), e * s], [-e.conj() * s, C64::new(c, 0.0)]];
            let mut total = 0.0;
            for b in &basis {
                let mut sigma = [[C64::new(0.0, 0.0); 2]; 2];
                for a in 0..2 {
                    for a2 in 0..2 {
                        for x in 0..2 {
                            for y in 0..2 {
                                sigma[a][a2] += b[x].conj() * rho[(2 * a + x, 2 * a2 + y)] * b[y];
                            }
                        }
                    }
                }
                let p = (sigma[0][0] + sigma[1][1]).re;
                if p > 1e-14 {
                    let norm = sigma.map(|r| r.map(|z| z / p));
                    total += p * h2x2(norm);
                }
            }
            best = best.min(total);
        }
    }
    let rho_b = usc_qed::hilbert::reduce(rho, &[2, 2], &[false, true]).unwrap();
    von_neumann_entropy(&rho_b).unwrap() - von_neumann_entropy(rho).unwrap() + best
}

fn steady_atomic_marginal() -> ComplexMatrix {
    // ½|gg⟩⟨gg| + ½|Φ⁻⟩⟨Φ⁻| in the ee, eg, ge, gg ordering
    ComplexMatrix::from_real_rows(&[
        [0.0, 0.0, 0.0, 0.0],
        [0.0, 0.25, -0.25, 0.0],
        [0.0, -0.25, 0.25, 0.0],
        [0.0, 0.0, 0.0, 0.5],
    ])
}

#[test]
fn discord_matches_dense_grid_on_steady_marginal() {
    let rho = steady_atomic_marginal();
    let refined = quantum_discord(&rho).unwrap().value;
    let oracle = discord_grid_oracle(&rho);
    assert!((refined - oracle).abs() <= 1e-4, "{refined} vs {oracle}");
    assert!(refined <= oracle + 1e-9);
}

#[test]
fn discord_matches_dense_grid_on_random_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(512);
    for _ in 0..3 {
        let rho = random::density_matrix(&mut rng, 4);
        let refined = quantum_discord(&rho).unwrap().value;
        let oracle = discord_grid_oracle(&rho);
        assert!((refined - oracle).abs() <= 1e-4, "{refined} vs {oracle}");
    }
}

#[test]
fn bell_diagonal_discord_closed_form() {
    // ρ = ¼(I + Σ c_i σ_i⊗σ_i): D = I(ρ) − C(ρ) with
    // I = 2 + Σ λ log₂ λ and C = ½[(1−c)log₂(1−c) + (1+c)log₂(1+c)], c = max|c_i|
    let paulis = [sigma_x(), sigma_y(), sigma_z()];
    for cs in [[0.3, -0.2, 0.1], [-0.5, 0.4, 0.6], [0.8, -0.8, 0.7], [0.0, 0.0, 0.9]] {
        let mut rho = ComplexMatrix::identity(4);
        for (c, s) in cs.iter().zip(&paulis) {
            rho.add_scaled(C64::new(*c, 0.0), &kron(s, s));
        }
        let rho = rho.scale_real(0.25);
        let (c1, c2, c3) = (cs[0], cs[1], cs[2]);
        let lambdas = [
            (1.0 - c1 - c2 - c3) / 4.0,
            (1.0 - c1 + c2 + c3) / 4.0,
            (1.0 + c1 - c2 + c3) / 4.0,
            (1.0 + c1 + c2 - c3) / 4.0,
        ];
        let mutual = 2.0 + lambdas.iter().filter(|&&l| l > 0.0).map(|l| l * l.log2()).sum::<f64>();
        let c = cs.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let xlog = |x: f64| if x > 0.0 { x * x.log2() } else { 0.0 };
        let classical = 0.5 * (xlog(1.0 - c) + xlog(1.0 + c));
        let expected = mutual - classical;
        let got = quantum_discord(&rho).unwrap().value;
        assert!((got - expected).abs() <= 1e-6, "{cs:?}: {got} vs {expected}");
    }
}

#[test]
fn ground_state_bound_below_monogamy() {
    let p = RabiParams::resonant(1.0, 0.5, 0.2, 12).unwrap();
    let l = p.layout();
    let rho = ComplexMatrix::projector(&rabi_ground_state(&p).unwrap());
    let exact = eof_via_monogamy(&rho, &l).unwrap();
    let bound = eof_lower_bound(&partial_trace(&rho, &[Slot::A, Slot::F], &l).unwrap(), 12).unwrap().bound;
    assert!(bound <= exact + 1e-6);
    assert!(bound > 0.25 && exact > 0.3, "{bound} {exact}");

    let report = EntanglementReport::for_state(&rho, &l).unwrap();
    assert_eq!(report.eof_monogamy, Some(exact));
    assert!((report.eof_lower_bound - bound).abs() < 1e-15);
}

#[test]
fn ground_state_is_symmetric_in_the_qubits() {
    let p = RabiParams::resonant(1.0, 0.6, 0.2, 12).unwrap();
    let l = p.layout();
    let rho = ComplexMatrix::projector(&rabi_ground_state(&p).unwrap());
    let af = eof_lower_bound(&partial_trace(&rho, &[Slot::A, Slot::F], &l).unwrap(), 12).unwrap();
    let bf = eof_lower_bound(&partial_trace(&rho, &[Slot::B, Slot::F], &l).unwrap(), 12).unwrap();
    assert!((af.lambda - bf.lambda).abs() < 1e-9);
}

#[test]
fn monogamy_rejects_mixed_states() {
    let p = RabiParams::resonant(1.0, 0.5, 0.2, 4).unwrap();
    let rho = ComplexMatrix::identity(16).scale_real(1.0 / 16.0);
    assert!(matches!(eof_via_monogamy(&rho, &p.layout()), Err(usc_qed::Error::NotPure { .. })));
}

#[test]
fn conditional_entropy_examples() {
    assert!((conditional_entropy(&ComplexMatrix::identity(4).scale_real(0.25)).unwrap() - 1.0).abs() < 1e-12);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let bell = ComplexMatrix::projector(&[C64::new(h, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(h, 0.0)]);
    assert!((conditional_entropy(&bell).unwrap() + 1.0).abs() < 1e-12);
}
