//! The composite space qubit A ⊗ qubit B ⊗ truncated cavity F.
//!
//! Basis vectors |ijn⟩ are ordered with index (2·i + j)·d + n, qubit code
//! e → 0 and g → 1, so that the atomic rows run ee, eg, ge, gg.

use crate::error::{Error, Result};
use crate::linalg::{kron, ComplexMatrix, C64, ONE, ZERO};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub enum Qubit {
    E,
    G,
}

impl Qubit {
    pub fn code(self) -> usize {
        match self {
            Qubit::E => 0,
            Qubit::G => 1,
        }
    }

    pub fn from_code(code: usize) -> Self {
        if code == 0 {
            Qubit::E
        } else {
            Qubit::G
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'e' => Some(Qubit::E),
            'g' => Some(Qubit::G),
            _ => None,
        }
    }
}

/// A tensor factor of the composite space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Slot {
    A,
    B,
    F,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpaceLayout {
    fock_dim: usize,
}

impl SpaceLayout {
    pub fn new(fock_dim: usize) -> Result<Self> {
        if fock_dim < 2 {
            return Err(Error::InvalidParameter(format!("Fock dimension must be at least 2, got {fock_dim}")));
        }
        Ok(Self { fock_dim })
    }

    #[inline]
    pub fn fock_dim(&self) -> usize {
        self.fock_dim
    }

    #[inline]
    pub fn total_dim(&self) -> usize {
        4 * self.fock_dim
    }

    #[inline]
    pub fn index(&self, a: Qubit, b: Qubit, n: usize) -> usize {
        debug_assert!(n < self.fock_dim);
        (2 * a.code() + b.code()) * self.fock_dim + n
    }

    pub fn decompose(&self, idx: usize) -> (Qubit, Qubit, usize) {
        let atoms = idx / self.fock_dim;
        (Qubit::from_code(atoms / 2), Qubit::from_code(atoms % 2), idx % self.fock_dim)
    }

    pub fn dims(&self) -> [usize; 3] {
        [2, 2, self.fock_dim]
    }

    pub fn basis_ket(&self, a: Qubit, b: Qubit, n: usize) -> Vec<C64> {
        let mut v = vec![ZERO; self.total_dim()];
        v[self.index(a, b, n)] = ONE;
        v
    }

    /// (|eg n⟩ − |ge n⟩)/√2
    pub fn phi_minus_ket(&self, n: usize) -> Vec<C64> {
        let mut v = vec![ZERO; self.total_dim()];
        let h = std::f64::consts::FRAC_1_SQRT_2;
        v[self.index(Qubit::E, Qubit::G, n)] = C64::new(h, 0.0);
        v[self.index(Qubit::G, Qubit::E, n)] = C64::new(-h, 0.0);
        v
    }

    /// Total excitation a†a + Σ_j |e⟩⟨e|_j, diagonal in this basis.
    pub fn excitations(&self, idx: usize) -> usize {
        let (a, b, n) = self.decompose(idx);
        n + usize::from(a == Qubit::E) + usize::from(b == Qubit::E)
    }
}

pub fn sigma_x() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[[0.0, 1.0], [1.0, 0.0]])
}

pub fn sigma_y() -> ComplexMatrix {
    ComplexMatrix::from_rows(&[[ZERO, C64::new(0.0, -1.0)], [C64::new(0.0, 1.0), ZERO]])
}

/// diag(+1, −1) in (e, g) order.
pub fn sigma_z() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[[1.0, 0.0], [0.0, -1.0]])
}

/// σ₊ = |e⟩⟨g|
pub fn sigma_plus() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[[0.0, 1.0], [0.0, 0.0]])
}

/// σ₋ = |g⟩⟨e|
pub fn sigma_minus() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[[0.0, 0.0], [1.0, 0.0]])
}

/// Truncated annihilation operator, ⟨n−1|a|n⟩ = √n.
pub fn annihilation(d: usize) -> Result<ComplexMatrix> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!("Fock dimension must be at least 2, got {d}")));
    }
    let mut a = ComplexMatrix::zeros(d, d);
    for n in 1..d {
        a[(n - 1, n)] = C64::new((n as f64).sqrt(), 0.0);
    }
    Ok(a)
}

/// Lifts a single-factor operator to the full space, identity elsewhere.
pub fn embed(op: &ComplexMatrix, slot: Slot, layout: &SpaceLayout) -> Result<ComplexMatrix> {
    let d = layout.fock_dim();
    let expected = if slot == Slot::F { d } else { 2 };
    if op.rows() != expected || op.cols() != expected {
        return Err(Error::dim(format!(
            "operator for slot {slot:?} must be {expected}x{expected}, got {}x{}",
            op.rows(),
            op.cols()
        )));
    }
    let i2 = ComplexMatrix::identity(2);
    let id = ComplexMatrix::identity(d);
    Ok(match slot {
        Slot::A => kron(&kron(op, &i2), &id),
        Slot::B => kron(&kron(&i2, op), &id),
        Slot::F => kron(&kron(&i2, &i2), op),
    })
}

/// Partial trace over every factor whose `keep` flag is false.
pub fn reduce(rho: &ComplexMatrix, dims: &[usize], keep: &[bool]) -> Result<ComplexMatrix> {
    let total: usize = dims.iter().product();
    if dims.len() != keep.len() {
        return Err(Error::dim("dims and keep mask differ in length"));
    }
    if rho.rows() != total || rho.cols() != total {
        return Err(Error::dim(format!(
            "state is {}x{}, expected {total}x{total}",
            rho.rows(),
            rho.cols()
        )));
    }
    if !keep.iter().any(|&k| k) {
        return Err(Error::InvalidParameter("partial trace must keep at least one factor".into()));
    }
    let kept_dim: usize = dims.iter().zip(keep).filter(|(_, &k)| k).map(|(d, _)| d).product();
    let traced_dim = total / kept_dim;

    // full index of (kept multi-index, traced multi-index)
    let mut table = vec![0usize; total];
    for full in 0..total {
        let mut rem = full;
        let mut digits = vec![0usize; dims.len()];
        for f in (0..dims.len()).rev() {
            digits[f] = rem % dims[f];
            rem /= dims[f];
        }
        let (mut k, mut t) = (0, 0);
        for f in 0..dims.len() {
            if keep[f] {
                k = k * dims[f] + digits[f];
            } else {
                t = t * dims[f] + digits[f];
            }
        }
        table[k * traced_dim + t] = full;
    }

    let mut out = ComplexMatrix::zeros(kept_dim, kept_dim);
    for k1 in 0..kept_dim {
        for k2 in 0..kept_dim {
            let mut acc = ZERO;
            for t in 0..traced_dim {
                acc += rho[(table[k1 * traced_dim + t], table[k2 * traced_dim + t])];
            }
            out[(k1, k2)] = acc;
        }
    }
    Ok(out)
}

/// Reduced state on `keep`, in A-before-B-before-F order.
pub fn partial_trace(rho: &ComplexMatrix, keep: &[Slot], layout: &SpaceLayout) -> Result<ComplexMatrix> {
    let mask = [keep.contains(&Slot::A), keep.contains(&Slot::B), keep.contains(&Slot::F)];
    reduce(rho, &layout.dims(), &mask)
}

fn check_qubit_qudit(rho: &ComplexMatrix, d: usize) -> Result<()> {
    if rho.rows() != 2 * d || rho.cols() != 2 * d {
        return Err(Error::dim(format!(
            "qubit-qudit state with d={d} must be {0}x{0}, got {1}x{2}",
            2 * d,
            rho.rows(),
            rho.cols()
        )));
    }
    Ok(())
}

/// ρ_{(i,m),(j,n)} ↦ ρ_{(j,m),(i,n)} on a 2 ⊗ d state.
pub fn partial_transpose_a(rho: &ComplexMatrix, d: usize) -> Result<ComplexMatrix> {
    check_qubit_qudit(rho, d)?;
    let mut out = ComplexMatrix::zeros(2 * d, 2 * d);
    for i in 0..2 {
        for j in 0..2 {
            for m in 0..d {
                for n in 0..d {
                    out[(i * d + m, j * d + n)] = rho[(j * d + m, i * d + n)];
                }
            }
        }
    }
    Ok(out)
}

/// Realigned matrix R_{(i,j),(m,n)} = ρ_{(i,m),(j,n)}, shape 4 × d².
pub fn realign(rho: &ComplexMatrix, d: usize) -> Result<ComplexMatrix> {
    check_qubit_qudit(rho, d)?;
    let mut out = ComplexMatrix::zeros(4, d * d);
    for i in 0..2 {
        for j in 0..2 {
            for m in 0..d {
                for n in 0..d {
                    out[(2 * i + j, m * d + n)] = rho[(i * d + m, j * d + n)];
                }
            }
        }
    }
    Ok(out)
}
