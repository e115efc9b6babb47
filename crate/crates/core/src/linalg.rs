//! Dense complex matrices and the handful of factorizations the physics needs:
//! Kronecker products, a cyclic Jacobi Hermitian eigensolver, trace norms and
//! von Neumann entropies.

use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Sub};

pub use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::policy::NumericPolicy;

pub const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub const ONE: C64 = C64 { re: 1.0, im: 0.0 };
pub const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Row-major dense complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                let z = self[(r, c)];
                write!(f, "{:+.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows * cols != data.len() {
            return Err(Error::dim(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from nested rows of real numbers.
    pub fn from_real_rows<const N: usize>(rows: &[[f64; N]]) -> Self {
        let data = rows.iter().flatten().map(|&x| C64::new(x, 0.0)).collect();
        Self { rows: rows.len(), cols: N, data }
    }

    pub fn from_rows<const N: usize>(rows: &[[C64; N]]) -> Self {
        let data = rows.iter().flatten().copied().collect();
        Self { rows: rows.len(), cols: N, data }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = C64::new(d, 0.0);
        }
        m
    }

    /// |u⟩⟨v|
    pub fn outer(u: &[C64], v: &[C64]) -> Self {
        Self::from_fn(u.len(), v.len(), |r, c| u[r] * v[c].conj())
    }

    /// |ψ⟩⟨ψ|
    pub fn projector(psi: &[C64]) -> Self {
        Self::outer(psi, psi)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [C64] {
        &mut self.data
    }

    pub fn column(&self, c: usize) -> Vec<C64> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)])
    }

    pub fn conj(&self) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z.conj()).collect() }
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z * s).collect() }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z * s).collect() }
    }

    /// self += s * other
    pub fn add_scaled(&mut self, s: C64, other: &ComplexMatrix) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch in add_scaled");
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += s * b;
        }
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Max entrywise |m - m†|; infinite for non-square input.
    pub fn hermiticity_error(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut worst = 0.0f64;
        for r in 0..n {
            for c in r..n {
                worst = worst.max((self[(r, c)] - self[(c, r)].conj()).norm());
            }
        }
        worst
    }

    /// (m + m†) / 2
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |r, c| (self[(r, c)] + self[(c, r)].conj()) * 0.5)
    }

    pub fn matmul(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.cols != other.rows {
            return Err(Error::dim(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = ComplexMatrix::zeros(self.rows, other.cols);
        let n = other.cols;
        for r in 0..self.rows {
            let out_row = &mut out.data[r * n..(r + 1) * n];
            for k in 0..self.cols {
                let a = self.data[r * self.cols + k];
                if a == ZERO {
                    continue;
                }
                let b_row = &other.data[k * n..(k + 1) * n];
                for (o, b) in out_row.iter_mut().zip(b_row) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &[C64]) -> Result<Vec<C64>> {
        if self.cols != v.len() {
            return Err(Error::dim(format!("cannot apply {}x{} to length {}", self.rows, self.cols, v.len())));
        }
        Ok((0..self.rows)
            .map(|r| self.data[r * self.cols..(r + 1) * self.cols].iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// ⟨u|M|v⟩
    pub fn sandwich(&self, u: &[C64], v: &[C64]) -> Result<C64> {
        let mv = self.apply(v)?;
        Ok(inner(u, &mv))
    }

    /// [A, B] = AB − BA
    pub fn commutator(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        Ok(&self.matmul(other)? - &other.matmul(self)?)
    }

    /// V† M V, the representation of `self` in the basis given by the columns of `v`.
    pub fn change_basis(&self, v: &ComplexMatrix) -> Result<ComplexMatrix> {
        v.adjoint().matmul(&self.matmul(v)?)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in add");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl AddAssign<&ComplexMatrix> for ComplexMatrix {
    fn add_assign(&mut self, rhs: &ComplexMatrix) {
        self.add_scaled(ONE, rhs);
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in sub");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

/// Matrix product; panics on shape mismatch. Use [`ComplexMatrix::matmul`] for a checked product.
impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs).expect("shape mismatch in mul")
    }
}

/// ⟨u|v⟩
pub fn inner(u: &[C64], v: &[C64]) -> C64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

pub fn norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Kronecker product a ⊗ b.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let rows = a.rows * b.rows;
    let cols = a.cols * b.cols;
    let mut out = ComplexMatrix::zeros(rows, cols);
    for ar in 0..a.rows {
        for ac in 0..a.cols {
            let x = a[(ar, ac)];
            if x == ZERO {
                continue;
            }
            for br in 0..b.rows {
                for bc in 0..b.cols {
                    out[(ar * b.rows + br, ac * b.cols + bc)] = x * b[(br, bc)];
                }
            }
        }
    }
    out
}

/// Kronecker product of two vectors.
pub fn kron_vec(a: &[C64], b: &[C64]) -> Vec<C64> {
    a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect()
}

/// Eigenpairs of a Hermitian matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors stored as columns, in the order of `values`.
    pub vectors: ComplexMatrix,
}

impl EigenDecomposition {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn vector(&self, j: usize) -> Vec<C64> {
        self.vectors.column(j)
    }

    /// V diag(λ) V†
    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map_spectrum(|x| x)
    }

    /// V diag(f(λ)) V†
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.values.len();
        let mut scaled = self.vectors.clone();
        for c in 0..n {
            let s = f(self.values[c]);
            for r in 0..n {
                scaled[(r, c)] *= s;
            }
        }
        &scaled * &self.vectors.adjoint()
    }
}

pub fn hermitian_eig(m: &ComplexMatrix) -> Result<EigenDecomposition> {
    hermitian_eig_with(m, &NumericPolicy::DEFAULT)
}

/// Cyclic Jacobi diagonalization of a Hermitian matrix.
///
/// Eigenvalues are returned ascending. Within a degenerate cluster the basis is
/// rebuilt deterministically (pivoted Gram–Schmidt of projected unit vectors),
/// ordered by the index of the unit vector that generated each member, and every
/// eigenvector is phased so that its first significant component is real positive.
pub fn hermitian_eig_with(m: &ComplexMatrix, policy: &NumericPolicy) -> Result<EigenDecomposition> {
    if !m.is_square() {
        return Err(Error::dim(format!("eigensolver needs a square matrix, got {}x{}", m.rows, m.cols)));
    }
    let n = m.rows;
    let asym = m.hermiticity_error();
    if asym > policy.hermitian_tol * m.max_abs().max(1.0) {
        return Err(Error::NotHermitian { asymmetry: asym });
    }
    let mut a = m.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let scale = m.frobenius_norm();
    let target = policy.jacobi_offdiag_tol * scale;

    let offdiag = |a: &ComplexMatrix| -> f64 {
        let mut s = 0.0;
        for r in 0..n {
            for c in 0..n {
                if r != c {
                    s += a[(r, c)].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    while offdiag(&a) > target {
        if sweeps >= policy.jacobi_max_sweeps {
            return Err(Error::NotConverged {
                what: "jacobi eigensolver",
                detail: format!("off-diagonal mass {:.3e} after {sweeps} sweeps", offdiag(&a)),
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag == 0.0 || mag < 1e-300 {
                    continue;
                }
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                // Negligible next to both diagonals: drop it outright.
                if mag < f64::EPSILON * 1e-3 * (app.abs() + aqq.abs()) {
                    a[(p, q)] = ZERO;
                    a[(q, p)] = ZERO;
                    continue;
                }
                let phase = apq / mag;
                let theta = (aqq - app) / (2.0 * mag);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // U = [[c, s·e^{iφ}], [−s·e^{−iφ}, c]] on the (p, q) plane.
                let u_pp = C64::new(c, 0.0);
                let u_pq = phase * s;
                let u_qp = -phase.conj() * s;
                let u_qq = C64::new(c, 0.0);

                // A ← A U (columns p, q)
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * u_pp + akq * u_qp;
                    a[(k, q)] = akp * u_pq + akq * u_qq;
                }
                // A ← U† A (rows p, q)
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = u_pp.conj() * apk + u_qp.conj() * aqk;
                    a[(q, k)] = u_pq.conj() * apk + u_qq.conj() * aqk;
                }
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
                a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
                // V ← V U
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * u_pp + vkq * u_qp;
                    v[(k, q)] = vkp * u_pq + vkq * u_qq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re).then(i.cmp(&j)));
    let values: Vec<f64> = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vectors = ComplexMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);

    canonicalize_degenerate(&values, &mut vectors, policy.degeneracy_tol * scale.max(1.0));
    for c in 0..n {
        fix_phase(&mut vectors, c);
    }
    Ok(EigenDecomposition { values, vectors })
}

fn canonicalize_degenerate(values: &[f64], vectors: &mut ComplexMatrix, tol: f64) {
    let n = values.len();
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && values[end] - values[end - 1] <= tol {
            end += 1;
        }
        if end - start > 1 {
            let cols: Vec<Vec<C64>> = (start..end).map(|c| vectors.column(c)).collect();
            let basis = canonical_subspace_basis(&cols, n);
            for (k, b) in basis.into_iter().enumerate() {
                for r in 0..n {
                    vectors[(r, start + k)] = b[r];
                }
            }
        }
        start = end;
    }
}

/// Deterministic orthonormal basis of span(cols): at each round pick the unit
/// vector e_i whose projection (minus what is already spanned) is largest,
/// lowest i on ties; output sorted by i.
fn canonical_subspace_basis(cols: &[Vec<C64>], n: usize) -> Vec<Vec<C64>> {
    let k = cols.len();
    // Column i of the projector: Σ_c v_c conj(v_c[i]).
    let projected = |i: usize| -> Vec<C64> {
        let mut out = vec![ZERO; n];
        for v in cols {
            let w = v[i].conj();
            for (o, x) in out.iter_mut().zip(v) {
                *o += x * w;
            }
        }
        out
    };
    let mut chosen: Vec<(usize, Vec<C64>)> = Vec::with_capacity(k);
    let mut candidates: Vec<Vec<C64>> = (0..n).map(projected).collect();
    for _ in 0..k {
        let mut best: Option<(usize, f64)> = None;
        for (i, cand) in candidates.iter().enumerate() {
            if chosen.iter().any(|(j, _)| *j == i) {
                continue;
            }
            let nrm = norm(cand);
            if best.map_or(true, |(_, b)| nrm > b * (1.0 + 1e-12)) {
                best = Some((i, nrm));
            }
        }
        let (i, nrm) = best.expect("subspace larger than ambient space");
        let u: Vec<C64> = candidates[i].iter().map(|z| z / nrm).collect();
        for cand in candidates.iter_mut() {
            // two passes of classical Gram–Schmidt
            for _ in 0..2 {
                let ov = inner(&u, cand);
                for (c, x) in cand.iter_mut().zip(&u) {
                    *c -= x * ov;
                }
            }
        }
        chosen.push((i, u));
    }
    chosen.sort_by_key(|(i, _)| *i);
    chosen.into_iter().map(|(_, u)| u).collect()
}

fn fix_phase(vectors: &mut ComplexMatrix, c: usize) {
    let n = vectors.rows;
    let Some(r0) = (0..n).find(|&r| vectors[(r, c)].norm() > 1e-6) else {
        return;
    };
    let z = vectors[(r0, c)];
    let ph = z.conj() / z.norm();
    for r in 0..n {
        vectors[(r, c)] *= ph;
    }
    vectors[(r0, c)] = C64::new(vectors[(r0, c)].re, 0.0);
}

/// Eigenvalues of a 2x2 Hermitian matrix, ascending; closed form.
pub fn eigenvalues_2x2(m: &ComplexMatrix) -> [f64; 2] {
    let a = m[(0, 0)].re;
    let d = m[(1, 1)].re;
    let b = m[(0, 1)];
    let mean = 0.5 * (a + d);
    let rad = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
    [mean - rad, mean + rad]
}

/// Singular values (descending) by one-sided Jacobi on whichever of `m`, `m†`
/// has fewer columns; small singular values keep their relative accuracy.
pub fn singular_values(m: &ComplexMatrix) -> Result<Vec<f64>> {
    if m.rows == 0 || m.cols == 0 {
        return Err(Error::dim("singular values of an empty matrix"));
    }
    let work = if m.cols <= m.rows { m.clone() } else { m.adjoint() };
    let (rows, k) = (work.rows, work.cols);
    let mut cols: Vec<Vec<C64>> = (0..k).map(|c| work.column(c)).collect();
    for _sweep in 0..60 {
        let mut rotated = false;
        for p in 0..k {
            for q in (p + 1)..k {
                let alpha: f64 = cols[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = cols[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma = inner(&cols[p], &cols[q]);
                let mag = gamma.norm();
                if mag <= 1e-15 * (alpha * beta).sqrt() || mag == 0.0 {
                    continue;
                }
                rotated = true;
                let phase = gamma / mag;
                let zeta = (beta - alpha) / (2.0 * mag);
                let t = if zeta == 0.0 { 1.0 } else { zeta.signum() / (zeta.abs() + (zeta * zeta + 1.0).sqrt()) };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for r in 0..rows {
                    let (x, y) = (cols[p][r], cols[q][r]);
                    cols[p][r] = x * c - y * phase.conj() * s;
                    cols[q][r] = x * phase * s + y * c;
                }
            }
        }
        if !rotated {
            let mut sv: Vec<f64> = cols.iter().map(|v| norm(v)).collect();
            sv.sort_by(|a, b| b.total_cmp(a));
            return Ok(sv);
        }
    }
    Err(Error::NotConverged { what: "one-sided Jacobi SVD", detail: "no convergence after 60 sweeps".into() })
}

/// Sum of singular values, Tr √(G G†).
///
/// Hermitian input uses Σ|λ| directly, anything else the singular values.
/// Rectangular input is accepted.
pub fn trace_norm(m: &ComplexMatrix) -> Result<f64> {
    if m.rows == 0 || m.cols == 0 {
        return Err(Error::dim("trace norm of an empty matrix"));
    }
    if m.is_square() && m.hermiticity_error() <= 1e-13 * m.max_abs().max(1.0) {
        let eig = hermitian_eig(m)?;
        return Ok(eig.values.iter().map(|x| x.abs()).sum());
    }
    Ok(singular_values(m)?.iter().sum())
}

/// −Σ λ log₂ λ over a spectrum, clamping values in [−tol, 0) to zero.
pub fn entropy_of_spectrum(values: &[f64], tol: f64) -> Result<f64> {
    let mut s = 0.0;
    for &x in values {
        if x < -tol {
            return Err(Error::Positivity { eigenvalue: x });
        }
        if x > 0.0 {
            s -= x * x.log2();
        }
    }
    Ok(s.max(0.0))
}

/// Von Neumann entropy in bits.
pub fn von_neumann_entropy(rho: &ComplexMatrix) -> Result<f64> {
    von_neumann_entropy_with(rho, &NumericPolicy::DEFAULT)
}

pub fn von_neumann_entropy_with(rho: &ComplexMatrix, policy: &NumericPolicy) -> Result<f64> {
    if rho.rows() == 2 && rho.cols() == 2 {
        let asym = rho.hermiticity_error();
        if asym > policy.hermitian_tol * rho.max_abs().max(1.0) {
            return Err(Error::NotHermitian { asymmetry: asym });
        }
        return entropy_of_spectrum(&eigenvalues_2x2(rho), policy.positivity_tol);
    }
    let eig = hermitian_eig_with(rho, policy)?;
    entropy_of_spectrum(&eig.values, policy.positivity_tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn sx() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[[0.0, 1.0], [1.0, 0.0]])
    }
    fn sz() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[[1.0, 0.0], [0.0, -1.0]])
    }

    #[test]
    fn kron_identity_and_pauli() {
        assert_eq!(kron(&ComplexMatrix::identity(2), &ComplexMatrix::identity(2)), ComplexMatrix::identity(4));
        assert_eq!(
            kron(&sz(), &ComplexMatrix::identity(2)),
            ComplexMatrix::from_real_diagonal(&[1.0, 1.0, -1.0, -1.0])
        );
        let flipped = kron(&sx(), &sx()).apply(&[ONE, ZERO, ZERO, ZERO]).unwrap();
        assert_eq!(flipped, vec![ZERO, ZERO, ZERO, ONE]);
    }

    #[test]
    fn eig_pauli_x() {
        let e = hermitian_eig(&sx()).unwrap();
        assert_abs_diff_eq!(e.values[0], -1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(e.values[1], 1.0, epsilon = 1e-14);
    }

    #[test]
    fn eig_identity() {
        let e = hermitian_eig(&ComplexMatrix::identity(5)).unwrap();
        assert!(e.values.iter().all(|&x| (x - 1.0).abs() < 1e-15));
        let gram = &e.vectors.adjoint() * &e.vectors;
        assert!((&gram - &ComplexMatrix::identity(5)).max_abs() < 1e-14);
    }

    #[test]
    fn eig_complex_two_by_two() {
        // λ² − 5λ + 4 = 0
        let m = ComplexMatrix::from_rows(&[
            [C64::new(2.0, 0.0), C64::new(1.0, 1.0)],
            [C64::new(1.0, -1.0), C64::new(3.0, 0.0)],
        ]);
        let e = hermitian_eig(&m).unwrap();
        assert_abs_diff_eq!(e.values[0], 1.0, epsilon = 1e-13);
        assert_abs_diff_eq!(e.values[1], 4.0, epsilon = 1e-13);
        assert!((&e.reconstruct() - &m).max_abs() < 1e-12);
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let m = ComplexMatrix::from_real_rows(&[[0.0, 1.0], [0.0, 0.0]]);
        match hermitian_eig(&m) {
            Err(Error::NotHermitian { asymmetry }) => assert_abs_diff_eq!(asymmetry, 1.0),
            other => panic!("expected NotHermitian, got {other:?}"),
        }
    }

    #[test]
    fn degenerate_basis_is_canonical() {
        // diag(1, 1, 2) rotated inside the degenerate block must come back as e0, e1.
        let c = 0.6;
        let s = 0.8;
        let u = ComplexMatrix::from_rows(&[
            [C64::new(c, 0.0), C64::new(0.0, s), ZERO],
            [C64::new(0.0, s), C64::new(c, 0.0), ZERO],
            [ZERO, ZERO, ONE],
        ]);
        let m = &(&u * &ComplexMatrix::from_real_diagonal(&[1.0, 1.0, 2.0])) * &u.adjoint();
        let e = hermitian_eig(&m).unwrap();
        assert!((e.vectors[(0, 0)] - ONE).norm() < 1e-12);
        assert!((e.vectors[(1, 1)] - ONE).norm() < 1e-12);
    }

    #[test]
    fn trace_norm_examples() {
        assert_abs_diff_eq!(trace_norm(&ComplexMatrix::identity(2)).unwrap(), 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(
            trace_norm(&ComplexMatrix::from_real_diagonal(&[3.0, -4.0])).unwrap(),
            7.0,
            epsilon = 1e-14
        );
        // GG† = diag(4, 0)
        let g = ComplexMatrix::from_real_rows(&[[0.0, 2.0], [0.0, 0.0]]);
        assert_abs_diff_eq!(trace_norm(&g).unwrap(), 2.0, epsilon = 1e-14);
    }

    #[test]
    fn trace_norm_rectangular() {
        // singular values of [[3, 0, 0], [0, 0, 4]] are 3 and 4
        let g = ComplexMatrix::from_real_rows(&[[3.0, 0.0, 0.0], [0.0, 0.0, 4.0]]);
        assert_abs_diff_eq!(trace_norm(&g).unwrap(), 7.0, epsilon = 1e-12);
        assert_abs_diff_eq!(trace_norm(&g.transpose()).unwrap(), 7.0, epsilon = 1e-12);
    }

    #[test]
    fn entropy_examples() {
        let psi = [C64::new(0.6, 0.0), C64::new(0.0, 0.8)];
        assert_abs_diff_eq!(von_neumann_entropy(&ComplexMatrix::projector(&psi)).unwrap(), 0.0, epsilon = 1e-12);
        let mixed = ComplexMatrix::identity(2).scale_real(0.5);
        assert_abs_diff_eq!(von_neumann_entropy(&mixed).unwrap(), 1.0, epsilon = 1e-14);
        // −(3/4)log₂(3/4) − (1/4)log₂(1/4)
        let expected = -(0.75f64 * 0.75f64.log2()) - 0.25 * 0.25f64.log2();
        assert_abs_diff_eq!(expected, 0.811278, epsilon = 1e-6);
        let rho = ComplexMatrix::from_real_diagonal(&[0.75, 0.25]);
        assert_abs_diff_eq!(von_neumann_entropy(&rho).unwrap(), expected, epsilon = 1e-14);
        let rho4 = ComplexMatrix::from_real_diagonal(&[0.75, 0.25, 0.0, 0.0]);
        assert_abs_diff_eq!(von_neumann_entropy(&rho4).unwrap(), expected, epsilon = 1e-14);
    }

    #[test]
    fn entropy_rejects_negative_eigenvalue() {
        let rho = ComplexMatrix::from_real_diagonal(&[1.1, -0.1, 0.0]);
        assert!(matches!(von_neumann_entropy(&rho), Err(Error::Positivity { .. })));
        let tiny = ComplexMatrix::from_real_diagonal(&[1.0 + 1e-10, -1e-10, 0.0]);
        assert!(von_neumann_entropy(&tiny).is_ok());
    }

    #[test]
    fn from_vec_checks_length() {
        assert!(ComplexMatrix::from_vec(2, 2, vec![ZERO; 3]).is_err());
    }
}
