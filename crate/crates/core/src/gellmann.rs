//! The SU(d) generator basis {ω_m, u_lk, v_lk}.
//!
//! Generators are indexed 1..=d²−1 and partitioned into three classes:
//!
//! * Ω₁ = {1,…,d−1}: diagonal generators ω_m with
//!   ω_m = √(2/((m+1)(m+2))) (Σ_{t≤m} |t⟩⟨t| − (m+1)|m+1⟩⟨m+1|), m = i−1;
//! * Ω₂ = {d,…,(d−1)(d+2)/2}: symmetric generators u_lk = |l⟩⟨k| + |k⟩⟨l|;
//! * Ω₃ = {d(d+1)/2,…,d²−1}: antisymmetric generators v_lk = −i(|l⟩⟨k| − |k⟩⟨l|).
//!
//! Within Ω₂ and Ω₃ the pairs (l,k), 0 ≤ l < k ≤ d−1, are enumerated in
//! lexicographic order, so the whole basis has one reproducible layout. The
//! normalization is Tr(λ_i λ_j) = 2δ_ij; for d = 2 the basis is (σ_z, σ_x, σ_y).

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Partition class of a generator index, with its class-local coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndexClass {
    /// Diagonal generator ω_m (m = i − 1).
    Omega1 { m: usize },
    /// Symmetric off-diagonal generator u_lk.
    Omega2 { l: usize, k: usize },
    /// Antisymmetric off-diagonal generator v_lk.
    Omega3 { l: usize, k: usize },
}

impl IndexClass {
    pub fn is_omega1(&self) -> bool {
        matches!(self, IndexClass::Omega1 { .. })
    }

    pub fn is_omega3(&self) -> bool {
        matches!(self, IndexClass::Omega3 { .. })
    }

    /// The (l,k) pair for Ω₂/Ω₃ members.
    pub fn pair(&self) -> Option<(usize, usize)> {
        match *self {
            IndexClass::Omega1 { .. } => None,
            IndexClass::Omega2 { l, k } | IndexClass::Omega3 { l, k } => Some((l, k)),
        }
    }
}

/// The ordered generator basis of SU(d), immutable after construction.
#[derive(Debug, Clone)]
pub struct GellMannBasis {
    dim: usize,
    generators: Vec<DMatrix<Complex64>>,
    index_map: Vec<IndexClass>,
}

impl GellMannBasis {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of generators, d²−1.
    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Generator λ_i for a 1-based index i ∈ 1..=d²−1.
    pub fn generator(&self, i: usize) -> Result<&DMatrix<Complex64>> {
        check_index(self.dim, i)?;
        Ok(&self.generators[i - 1])
    }

    /// All generators in basis order (slot p holds λ_{p+1}).
    pub fn generators(&self) -> &[DMatrix<Complex64>] {
        &self.generators
    }

    /// Class of a 1-based index i.
    pub fn class(&self, i: usize) -> Result<IndexClass> {
        check_index(self.dim, i)?;
        Ok(self.index_map[i - 1])
    }

    /// All classes in basis order.
    pub fn classes(&self) -> &[IndexClass] {
        &self.index_map
    }
}

fn check_dim(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    Ok(())
}

fn check_index(d: usize, i: usize) -> Result<()> {
    let max = d * d - 1;
    if i < 1 || i > max {
        return Err(Error::IndexOutOfRange { index: i, max });
    }
    Ok(())
}

/// Last index of the Ω₂ block, (d−1)(d+2)/2.
pub fn omega2_end(d: usize) -> usize {
    (d - 1) * (d + 2) / 2
}

/// First index of the Ω₃ block, d(d+1)/2.
pub fn omega3_start(d: usize) -> usize {
    d * (d + 1) / 2
}

/// Classify a 1-based generator index without materializing the basis.
pub fn index_class(d: usize, i: usize) -> Result<IndexClass> {
    check_dim(d)?;
    check_index(d, i)?;
    if i < d {
        return Ok(IndexClass::Omega1 { m: i - 1 });
    }
    let pairs = pair_table(d);
    if i <= omega2_end(d) {
        let (l, k) = pairs[i - d];
        Ok(IndexClass::Omega2 { l, k })
    } else {
        let (l, k) = pairs[i - omega3_start(d)];
        Ok(IndexClass::Omega3 { l, k })
    }
}

/// Pairs (l,k), 0 ≤ l < k ≤ d−1, in lexicographic order.
fn pair_table(d: usize) -> Vec<(usize, usize)> {
    let mut pairs = Vec::with_capacity(d * (d - 1) / 2);
    for l in 0..d {
        for k in (l + 1)..d {
            pairs.push((l, k));
        }
    }
    pairs
}

/// Construct the full ordered basis for dimension d ≥ 2.
pub fn basis(d: usize) -> Result<GellMannBasis> {
    check_dim(d)?;
    let n = d * d - 1;
    let mut generators = Vec::with_capacity(n);
    let mut index_map = Vec::with_capacity(n);

    for m in 0..(d - 1) {
        let c = (2.0 / ((m + 1) as f64 * (m + 2) as f64)).sqrt();
        let mut g = DMatrix::zeros(d, d);
        for t in 0..=m {
            g[(t, t)] = Complex64::new(c, 0.0);
        }
        g[(m + 1, m + 1)] = Complex64::new(-((m + 1) as f64) * c, 0.0);
        generators.push(g);
        index_map.push(IndexClass::Omega1 { m });
    }

    let pairs = pair_table(d);
    for &(l, k) in &pairs {
        let mut g = DMatrix::zeros(d, d);
        g[(l, k)] = Complex64::new(1.0, 0.0);
        g[(k, l)] = Complex64::new(1.0, 0.0);
        generators.push(g);
        index_map.push(IndexClass::Omega2 { l, k });
    }
    for &(l, k) in &pairs {
        let mut g = DMatrix::zeros(d, d);
        g[(l, k)] = Complex64::new(0.0, -1.0);
        g[(k, l)] = Complex64::new(0.0, 1.0);
        generators.push(g);
        index_map.push(IndexClass::Omega3 { l, k });
    }

    Ok(GellMannBasis {
        dim: d,
        generators,
        index_map,
    })
}

/// Closed-form spectrum of λ_i, sorted ascending.
///
/// For i ∈ Ω₁ the eigenvalues are √(2/(i(i+1))) with multiplicity i, zero with
/// multiplicity d−1−i, and −i√(2/(i(i+1))); for i ∈ Ω₂ ∪ Ω₃ they are
/// {1, 0 (×(d−2)), −1}.
pub fn generator_spectrum(d: usize, i: usize) -> Result<Vec<f64>> {
    check_dim(d)?;
    check_index(d, i)?;
    let mut eig = Vec::with_capacity(d);
    if i < d {
        let a = (2.0 / (i as f64 * (i + 1) as f64)).sqrt();
        eig.push(-(i as f64) * a);
        eig.extend(std::iter::repeat_n(0.0, d - 1 - i));
        eig.extend(std::iter::repeat_n(a, i));
    } else {
        eig.push(-1.0);
        eig.extend(std::iter::repeat_n(0.0, d - 2));
        eig.push(1.0);
    }
    eig.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(eig)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn as_f64(g: &DMatrix<Complex64>, i: usize, j: usize) -> (f64, f64) {
        (g[(i, j)].re, g[(i, j)].im)
    }

    #[test]
    fn rejects_dimension_below_two() {
        assert!(matches!(basis(1), Err(Error::InvalidDimension(1))));
        assert!(matches!(basis(0), Err(Error::InvalidDimension(0))));
    }

    #[test]
    fn d2_basis_is_pauli_z_x_y() {
        let b = basis(2).unwrap();
        assert_eq!(b.len(), 3);
        let z = b.generator(1).unwrap();
        assert_eq!(as_f64(z, 0, 0), (1.0, 0.0));
        assert_eq!(as_f64(z, 1, 1), (-1.0, 0.0));
        let x = b.generator(2).unwrap();
        assert_eq!(as_f64(x, 0, 1), (1.0, 0.0));
        assert_eq!(as_f64(x, 1, 0), (1.0, 0.0));
        let y = b.generator(3).unwrap();
        assert_eq!(as_f64(y, 0, 1), (0.0, -1.0));
        assert_eq!(as_f64(y, 1, 0), (0.0, 1.0));
    }

    #[test]
    fn d3_block_layout() {
        let b = basis(3).unwrap();
        assert_eq!(b.len(), 8);
        for i in 1..=2 {
            assert!(b.class(i).unwrap().is_omega1());
        }
        for i in 3..=5 {
            assert!(matches!(b.class(i).unwrap(), IndexClass::Omega2 { .. }));
        }
        for i in 6..=8 {
            assert!(b.class(i).unwrap().is_omega3());
        }
        // omega_1 = (1/sqrt(3)) diag(1, 1, -2)
        let w1 = b.generator(2).unwrap();
        let c = 1.0 / 3.0_f64.sqrt();
        assert_abs_diff_eq!(w1[(0, 0)].re, c, epsilon = 1e-15);
        assert_abs_diff_eq!(w1[(1, 1)].re, c, epsilon = 1e-15);
        assert_abs_diff_eq!(w1[(2, 2)].re, -2.0 * c, epsilon = 1e-15);
    }

    #[test]
    fn index_class_examples() {
        assert_eq!(index_class(3, 1).unwrap(), IndexClass::Omega1 { m: 0 });
        assert_eq!(index_class(3, 5).unwrap(), IndexClass::Omega2 { l: 1, k: 2 });
        assert_eq!(index_class(3, 8).unwrap(), IndexClass::Omega3 { l: 1, k: 2 });
        assert!(matches!(
            index_class(3, 9),
            Err(Error::IndexOutOfRange { index: 9, max: 8 })
        ));
        assert!(matches!(index_class(3, 0), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn class_sizes_match_partition() {
        for d in 2..=6 {
            let b = basis(d).unwrap();
            let n1 = b.classes().iter().filter(|c| c.is_omega1()).count();
            let n3 = b.classes().iter().filter(|c| c.is_omega3()).count();
            let n2 = b.len() - n1 - n3;
            assert_eq!(n1, d - 1);
            assert_eq!(n2, d * (d - 1) / 2);
            assert_eq!(n3, d * (d - 1) / 2);
            assert_eq!(omega2_end(d) + 1, omega3_start(d));
        }
    }

    #[test]
    fn generators_hermitian_and_traceless() {
        for d in 2..=5 {
            let b = basis(d).unwrap();
            for g in b.generators() {
                let tr: Complex64 = (0..d).map(|i| g[(i, i)]).sum();
                assert!(tr.norm() < 1e-14);
                let dev = (g - g.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
                assert!(dev < 1e-14);
            }
        }
    }

    #[test]
    fn orthogonality_2_delta() {
        for d in 2..=5 {
            let b = basis(d).unwrap();
            let n = b.len();
            for i in 0..n {
                for j in 0..n {
                    let prod = &b.generators()[i] * &b.generators()[j];
                    let tr: Complex64 = (0..d).map(|t| prod[(t, t)]).sum();
                    let expected = if i == j { 2.0 } else { 0.0 };
                    assert!(
                        (tr.re - expected).abs() < 1e-12 && tr.im.abs() < 1e-12,
                        "d={} i={} j={} tr={}",
                        d,
                        i + 1,
                        j + 1,
                        tr
                    );
                }
            }
        }
    }

    #[test]
    fn diagonal_matrix_elements() {
        // <s|λ_i|s> piecewise values for Ω₁, zero for Ω₂ ∪ Ω₃.
        for d in 2..=5 {
            let b = basis(d).unwrap();
            for i in 1..=(d * d - 1) {
                let g = b.generator(i).unwrap();
                for s in 0..d {
                    let expected = match b.class(i).unwrap() {
                        IndexClass::Omega1 { .. } => {
                            let a = (2.0 / (i as f64 * (i + 1) as f64)).sqrt();
                            if s < i {
                                a
                            } else if s == i {
                                -(i as f64) * a
                            } else {
                                0.0
                            }
                        }
                        _ => 0.0,
                    };
                    assert_abs_diff_eq!(g[(s, s)].re, expected, epsilon = 1e-14);
                    assert_abs_diff_eq!(g[(s, s)].im, 0.0, epsilon = 1e-14);
                }
            }
        }
    }

    #[test]
    fn offdiagonal_matrix_elements() {
        // <l|λ_i|k> = <k|λ_i|l> = 1 on Ω₂; <k|λ_i|l> = i, <l|λ_i|k> = -i on Ω₃;
        // all other off-diagonal entries vanish.
        for d in 2..=5 {
            let b = basis(d).unwrap();
            for i in 1..=(d * d - 1) {
                let g = b.generator(i).unwrap();
                let class = b.class(i).unwrap();
                for s in 0..d {
                    for t in 0..d {
                        if s == t {
                            continue;
                        }
                        let expected = match class {
                            IndexClass::Omega1 { .. } => Complex64::new(0.0, 0.0),
                            IndexClass::Omega2 { l, k } => {
                                if (s, t) == (l, k) || (s, t) == (k, l) {
                                    Complex64::new(1.0, 0.0)
                                } else {
                                    Complex64::new(0.0, 0.0)
                                }
                            }
                            IndexClass::Omega3 { l, k } => {
                                if (s, t) == (k, l) {
                                    Complex64::new(0.0, 1.0)
                                } else if (s, t) == (l, k) {
                                    Complex64::new(0.0, -1.0)
                                } else {
                                    Complex64::new(0.0, 0.0)
                                }
                            }
                        };
                        assert!((g[(s, t)] - expected).norm() < 1e-14);
                    }
                }
            }
        }
    }

    #[test]
    fn spectrum_examples() {
        let mut s = generator_spectrum(3, 1).unwrap();
        s.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_abs_diff_eq!(s[0], -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(s[1], 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(s[2], 1.0, epsilon = 1e-15);

        let s = generator_spectrum(3, 4).unwrap();
        assert_eq!(s, vec![-1.0, 0.0, 1.0]);

        let s = generator_spectrum(2, 1).unwrap();
        assert_eq!(s, vec![-1.0, 1.0]);
    }

    #[test]
    fn spectrum_matches_eigendecomposition() {
        for d in 2..=5 {
            let b = basis(d).unwrap();
            for i in 1..=(d * d - 1) {
                let predicted = generator_spectrum(d, i).unwrap();
                let mut numeric: Vec<f64> = b
                    .generator(i)
                    .unwrap()
                    .clone()
                    .symmetric_eigenvalues()
                    .iter()
                    .copied()
                    .collect();
                numeric.sort_by(|a, b| a.partial_cmp(b).unwrap());
                for (p, n) in predicted.iter().zip(numeric.iter()) {
                    assert!(
                        (p - n).abs() < 1e-12,
                        "d={} i={} predicted {:?} numeric {:?}",
                        d,
                        i,
                        predicted,
                        numeric
                    );
                }
            }
        }
    }
}
