//! Density-matrix validation and the Bloch representation.
//!
//! A d⊗d state ρ is expanded over the generator basis as
//!
//! ```text
//! ρ = (1/d²) (I⊗I + Σ r_i λ_i⊗I + Σ s_j I⊗λ_j + Σ t_ij λ_i⊗λ_j),
//! ```
//!
//! with r_i = (d/2)Tr(ρ λ_i⊗I), s_j = (d/2)Tr(ρ I⊗λ_j) and
//! t_ij = (d²/4)Tr(ρ λ_i⊗λ_j). The composite basis is |a⟩⊗|b⟩ ↦ a·d + b
//! (row-major, subsystem A major); all coefficients are real for Hermitian ρ.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gellmann;

/// Default validation tolerance for Hermiticity, trace and the PSD floor.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Largest imaginary residue tolerated when extracting Bloch coefficients.
pub const IMAG_TOL: f64 = 1e-10;

/// A validated d²×d² density matrix on H_A ⊗ H_B with d_A = d_B = d.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    dim: usize,
    data: DMatrix<Complex64>,
    tol: f64,
}

impl DensityMatrix {
    /// Local dimension d.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Side of the composite matrix, d².
    pub fn side(&self) -> usize {
        self.dim * self.dim
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.data
    }

    /// Tolerance the matrix was validated at.
    pub fn tolerance(&self) -> f64 {
        self.tol
    }

    /// Tr(ρ²), real part.
    pub fn purity(&self) -> f64 {
        let n = self.side();
        let mut p = Complex64::new(0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                p += self.data[(i, j)] * self.data[(j, i)];
            }
        }
        p.re
    }
}

/// Local vectors r, s and correlation matrix T of a state.
#[derive(Debug, Clone)]
pub struct BlochDecomposition {
    dim: usize,
    r: DVector<f64>,
    s: DVector<f64>,
    t: DMatrix<f64>,
}

impl BlochDecomposition {
    /// Assemble a decomposition from raw coefficients (lengths must be d²−1).
    pub fn new(dim: usize, r: DVector<f64>, s: DVector<f64>, t: DMatrix<f64>) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidDimension(dim));
        }
        let n = dim * dim - 1;
        if r.len() != n || s.len() != n || t.nrows() != n || t.ncols() != n {
            return Err(Error::ShapeMismatch {
                expected: format!("r, s of length {n} and T of shape {n}x{n}"),
                got: format!(
                    "r: {}, s: {}, T: {}x{}",
                    r.len(),
                    s.len(),
                    t.nrows(),
                    t.ncols()
                ),
            });
        }
        Ok(Self { dim, r, s, t })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn r(&self) -> &DVector<f64> {
        &self.r
    }

    pub fn s(&self) -> &DVector<f64> {
        &self.s
    }

    /// Correlation matrix T = [t_ij], indexed 0-based (entry (i,j) holds t_{i+1,j+1}).
    pub fn t(&self) -> &DMatrix<f64> {
        &self.t
    }
}

/// Validate a complex square matrix as a d⊗d density matrix.
///
/// Checks, in order: the side is a perfect square d² with d ≥ 2; Hermiticity
/// (max entrywise |M − M†| < tol); unit trace (|Tr M − 1| < tol); positive
/// semidefiniteness (smallest eigenvalue ≥ −tol).
pub fn validate_density(m: &DMatrix<Complex64>, tol: f64) -> Result<DensityMatrix> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare(m.nrows(), m.ncols()));
    }
    let side = m.nrows();
    let d = (side as f64).sqrt().round() as usize;
    if d < 2 || d * d != side {
        return Err(Error::NotBipartite(side));
    }

    let mut herm_dev = 0.0_f64;
    for i in 0..side {
        for j in i..side {
            let dev = (m[(i, j)] - m[(j, i)].conj()).norm();
            herm_dev = herm_dev.max(dev);
        }
    }
    if !herm_dev.is_finite() {
        return Err(Error::NonFinite("density matrix entries"));
    }
    if herm_dev > tol {
        return Err(Error::NotHermitian {
            deviation: herm_dev,
            tol,
        });
    }

    let trace: Complex64 = (0..side).map(|i| m[(i, i)]).sum();
    let trace_dev = (trace - Complex64::new(1.0, 0.0)).norm();
    if trace_dev > tol {
        return Err(Error::TraceNotOne {
            deviation: trace_dev,
            tol,
        });
    }

    let eigs = m.clone().symmetric_eigenvalues();
    let min_eig = eigs.iter().copied().fold(f64::INFINITY, f64::min);
    if min_eig < -tol {
        return Err(Error::NotPositiveSemidefinite {
            min_eigenvalue: min_eig,
            tol,
        });
    }

    Ok(DensityMatrix {
        dim: d,
        data: m.clone(),
        tol,
    })
}

/// Extract the Bloch coefficients of a validated state.
///
/// Imaginary residues above [`IMAG_TOL`] signal a non-Hermitian input that
/// slipped through validation and are reported as an error.
pub fn decompose(rho: &DensityMatrix) -> Result<BlochDecomposition> {
    let d = rho.dim();
    let n = d * d - 1;
    let basis = gellmann::basis(d)?;
    let m = rho.matrix();

    let mut max_imag = 0.0_f64;

    // Reduced matrices for the local vectors.
    let mut rho_a = DMatrix::<Complex64>::zeros(d, d);
    let mut rho_b = DMatrix::<Complex64>::zeros(d, d);
    for a in 0..d {
        for c in 0..d {
            let mut sum = Complex64::new(0.0, 0.0);
            for b in 0..d {
                sum += m[(a * d + b, c * d + b)];
            }
            rho_a[(a, c)] = sum;
        }
    }
    for b in 0..d {
        for e in 0..d {
            let mut sum = Complex64::new(0.0, 0.0);
            for a in 0..d {
                sum += m[(a * d + b, a * d + e)];
            }
            rho_b[(b, e)] = sum;
        }
    }

    let half_d = d as f64 / 2.0;
    let mut r = DVector::zeros(n);
    let mut s = DVector::zeros(n);
    for (idx, lam) in basis.generators().iter().enumerate() {
        let mut tr_a = Complex64::new(0.0, 0.0);
        let mut tr_b = Complex64::new(0.0, 0.0);
        for a in 0..d {
            for c in 0..d {
                tr_a += rho_a[(a, c)] * lam[(c, a)];
                tr_b += rho_b[(a, c)] * lam[(c, a)];
            }
        }
        max_imag = max_imag.max(tr_a.im.abs() * half_d).max(tr_b.im.abs() * half_d);
        r[idx] = half_d * tr_a.re;
        s[idx] = half_d * tr_b.re;
    }

    // t_ij = (d²/4) Σ_{a,b,c,e} ρ[(ab),(ce)] λ_i[c,a] λ_j[e,b]:
    // contract the A side once per i, then sweep j.
    let quarter_d2 = (d * d) as f64 / 4.0;
    let mut t = DMatrix::zeros(n, n);
    let mut w = DMatrix::<Complex64>::zeros(d, d);
    for (i, lam_i) in basis.generators().iter().enumerate() {
        for e in 0..d {
            for b in 0..d {
                let mut sum = Complex64::new(0.0, 0.0);
                for a in 0..d {
                    for c in 0..d {
                        sum += m[(a * d + b, c * d + e)] * lam_i[(c, a)];
                    }
                }
                w[(e, b)] = sum;
            }
        }
        for (j, lam_j) in basis.generators().iter().enumerate() {
            let mut sum = Complex64::new(0.0, 0.0);
            for e in 0..d {
                for b in 0..d {
                    sum += w[(e, b)] * lam_j[(e, b)];
                }
            }
            max_imag = max_imag.max(sum.im.abs() * quarter_d2);
            t[(i, j)] = quarter_d2 * sum.re;
        }
    }

    if max_imag > IMAG_TOL {
        return Err(Error::ImaginaryResidue {
            magnitude: max_imag,
            tol: IMAG_TOL,
        });
    }

    BlochDecomposition::new(d, r, s, t)
}

/// Rebuild the composite matrix of a decomposition.
///
/// The result is Hermitian with unit trace by construction but is not
/// required to be positive semidefinite: callers may be assembling trial
/// operators with out-of-range coefficients.
pub fn reconstruct(b: &BlochDecomposition) -> Result<DMatrix<Complex64>> {
    let d = b.dim();
    let basis = gellmann::basis(d)?;
    let eye = DMatrix::<Complex64>::identity(d, d);

    let mut m = DMatrix::<Complex64>::identity(d * d, d * d);
    for (i, lam) in basis.generators().iter().enumerate() {
        let ri = Complex64::new(b.r()[i], 0.0);
        let si = Complex64::new(b.s()[i], 0.0);
        m += lam.kronecker(&eye) * ri;
        m += eye.kronecker(lam) * si;
        // B_i = Σ_j t_ij λ_j, accumulated as λ_i ⊗ B_i.
        let mut bi = DMatrix::<Complex64>::zeros(d, d);
        for (j, lam_j) in basis.generators().iter().enumerate() {
            bi += lam_j * Complex64::new(b.t()[(i, j)], 0.0);
        }
        m += lam.kronecker(&bi);
    }
    m /= Complex64::new((d * d) as f64, 0.0);
    Ok(m)
}

/// Ky-Fan norm: the sum of all singular values, Tr√(T†T).
pub fn kyfan_norm(t: &DMatrix<f64>) -> Result<f64> {
    if t.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("Ky-Fan norm input"));
    }
    let svd = t.clone().svd(false, false);
    Ok(svd.singular_values.iter().sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn max_entangled_matrix(d: usize) -> DMatrix<Complex64> {
        let mut v = DVector::<Complex64>::zeros(d * d);
        let amp = Complex64::new(1.0 / (d as f64).sqrt(), 0.0);
        for s in 0..d {
            v[s * d + s] = amp;
        }
        &v * v.adjoint()
    }

    #[test]
    fn accepts_maximally_mixed() {
        let m = DMatrix::<Complex64>::identity(4, 4) * Complex64::new(0.25, 0.0);
        let rho = validate_density(&m, DEFAULT_TOL).unwrap();
        assert_eq!(rho.dim(), 2);
        assert_abs_diff_eq!(rho.purity(), 0.25, epsilon = 1e-14);
    }

    #[test]
    fn accepts_pure_projector_d3() {
        let m = max_entangled_matrix(3);
        let rho = validate_density(&m, DEFAULT_TOL).unwrap();
        assert_eq!(rho.dim(), 3);
        assert_abs_diff_eq!(rho.purity(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn rejects_doubled_trace_with_magnitude() {
        let m = max_entangled_matrix(3) * Complex64::new(2.0, 0.0);
        match validate_density(&m, DEFAULT_TOL) {
            Err(Error::TraceNotOne { deviation, .. }) => {
                assert_abs_diff_eq!(deviation, 1.0, epsilon = 1e-12)
            }
            other => panic!("expected trace error, got {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_shapes() {
        let m = DMatrix::<Complex64>::zeros(4, 5);
        assert!(matches!(validate_density(&m, 1e-10), Err(Error::NotSquare(4, 5))));
        let m = DMatrix::<Complex64>::identity(5, 5) * Complex64::new(0.2, 0.0);
        assert!(matches!(validate_density(&m, 1e-10), Err(Error::NotBipartite(5))));
        let m = DMatrix::<Complex64>::identity(1, 1);
        assert!(matches!(validate_density(&m, 1e-10), Err(Error::NotBipartite(1))));
    }

    #[test]
    fn rejects_non_hermitian_and_non_psd() {
        let mut m = DMatrix::<Complex64>::identity(4, 4) * Complex64::new(0.25, 0.0);
        m[(0, 1)] = Complex64::new(0.0, 0.3);
        assert!(matches!(
            validate_density(&m, DEFAULT_TOL),
            Err(Error::NotHermitian { .. })
        ));

        let mut m = DMatrix::<Complex64>::zeros(4, 4);
        m[(0, 0)] = Complex64::new(1.5, 0.0);
        m[(1, 1)] = Complex64::new(-0.5, 0.0);
        match validate_density(&m, DEFAULT_TOL) {
            Err(Error::NotPositiveSemidefinite { min_eigenvalue, .. }) => {
                assert_abs_diff_eq!(min_eigenvalue, -0.5, epsilon = 1e-12)
            }
            other => panic!("expected PSD error, got {other:?}"),
        }
    }

    #[test]
    fn maximally_mixed_decomposes_to_zero() {
        for d in 2..=4 {
            let side = d * d;
            let m = DMatrix::<Complex64>::identity(side, side)
                * Complex64::new(1.0 / side as f64, 0.0);
            let rho = validate_density(&m, DEFAULT_TOL).unwrap();
            let b = decompose(&rho).unwrap();
            assert!(b.r().iter().all(|x| x.abs() < 1e-14));
            assert!(b.s().iter().all(|x| x.abs() < 1e-14));
            assert!(b.t().iter().all(|x| x.abs() < 1e-14));
        }
    }

    #[test]
    fn phi_plus_d2_correlation_is_diag_1_1_m1() {
        // Direct-trace oracle: T = diag(⟨σ_z⊗σ_z⟩, ⟨σ_x⊗σ_x⟩, ⟨σ_y⊗σ_y⟩)
        // on |φ₊⟩ = (|00⟩+|11⟩)/√2, i.e. diag(1, 1, −1) in basis order (z, x, y).
        let rho = validate_density(&max_entangled_matrix(2), DEFAULT_TOL).unwrap();
        let b = decompose(&rho).unwrap();
        let expected = [1.0, 1.0, -1.0];
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { expected[i] } else { 0.0 };
                assert_abs_diff_eq!(b.t()[(i, j)], want, epsilon = 1e-13);
            }
        }
        assert!(b.r().iter().all(|x| x.abs() < 1e-13));
        assert!(b.s().iter().all(|x| x.abs() < 1e-13));
    }

    #[test]
    fn reconstruct_zero_decomposition_is_maximally_mixed() {
        let n = 8;
        let b = BlochDecomposition::new(
            3,
            DVector::zeros(n),
            DVector::zeros(n),
            DMatrix::zeros(n, n),
        )
        .unwrap();
        let m = reconstruct(&b).unwrap();
        for i in 0..9 {
            for j in 0..9 {
                let want = if i == j { 1.0 / 9.0 } else { 0.0 };
                assert_abs_diff_eq!(m[(i, j)].re, want, epsilon = 1e-15);
                assert_abs_diff_eq!(m[(i, j)].im, 0.0, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn round_trip_phi_plus() {
        let orig = max_entangled_matrix(2);
        let rho = validate_density(&orig, DEFAULT_TOL).unwrap();
        let back = reconstruct(&decompose(&rho).unwrap()).unwrap();
        let dev = (&back - &orig).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(dev < 1e-12, "round-trip deviation {dev}");
    }

    #[test]
    fn bloch_new_rejects_wrong_lengths() {
        let err = BlochDecomposition::new(3, DVector::zeros(7), DVector::zeros(8), DMatrix::zeros(8, 8));
        assert!(matches!(err, Err(Error::ShapeMismatch { .. })));
    }

    #[test]
    fn kyfan_basics() {
        assert_eq!(kyfan_norm(&DMatrix::zeros(3, 3)).unwrap(), 0.0);
        let t = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 1.0, -1.0]));
        assert_abs_diff_eq!(kyfan_norm(&t).unwrap(), 3.0, epsilon = 1e-13);
        let mut bad = DMatrix::zeros(2, 2);
        bad[(0, 0)] = f64::NAN;
        assert!(matches!(kyfan_norm(&bad), Err(Error::NonFinite(_))));
    }

    #[test]
    fn kyfan_orthogonal_invariance() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let n = 5;
        let t = DMatrix::<f64>::from_fn(n, n, |_, _| rng.random::<f64>() - 0.5);
        let g = DMatrix::<f64>::from_fn(n, n, |_, _| rng.random::<f64>() - 0.5);
        let q = g.qr().q();
        let base = kyfan_norm(&t).unwrap();
        assert_abs_diff_eq!(kyfan_norm(&(&q * &t)).unwrap(), base, epsilon = 1e-10);
        assert_abs_diff_eq!(kyfan_norm(&(&t * &q)).unwrap(), base, epsilon = 1e-10);
    }
}
