//! Constructors for the state families used by the test suites and the CLI.
//!
//! Every constructor returns a [`DensityMatrix`] validated at the default
//! tolerances. Families:
//!
//! * maximally entangled |φ₊⟩⟨φ₊|;
//! * isotropic ρ_θ = (1−θ)/d² I⊗I + θ|φ₊⟩⟨φ₊|, −1/(d²−1) ≤ θ ≤ 1;
//! * a 3⊗3 one-parameter family ρ_a (trace-normalized);
//! * the 3⊗3 mixture (8/9)σ + (1/9)|φ₊⟩⟨φ₊| with σ a diagonal product state;
//! * pure states |φ⟩ₓ = √x|00⟩ + √x|11⟩ + √(1−2x)|22⟩ and their mixtures;
//! * correlation-free states ρ₀ (T = 0) with requested local vectors;
//! * seeded random density matrices of prescribed rank.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::bloch::{self, BlochDecomposition, DensityMatrix, DEFAULT_TOL};
use crate::error::{Error, Result};

/// |φ₊⟩ = (1/√d) Σ_s |ss⟩ as a composite-basis vector.
pub fn max_entangled_vector(d: usize) -> DVector<Complex64> {
    let mut v = DVector::zeros(d * d);
    let amp = Complex64::new(1.0 / (d as f64).sqrt(), 0.0);
    for s in 0..d {
        v[s * d + s] = amp;
    }
    v
}

/// The maximally entangled state |φ₊⟩⟨φ₊|.
pub fn max_entangled(d: usize) -> Result<DensityMatrix> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    let v = max_entangled_vector(d);
    let m = &v * v.adjoint();
    bloch::validate_density(&m, DEFAULT_TOL)
}

/// The isotropic state ρ_θ.
pub fn isotropic(d: usize, theta: f64) -> Result<DensityMatrix> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    let lo = -1.0 / ((d * d - 1) as f64);
    if !(lo..=1.0).contains(&theta) {
        return Err(Error::ParameterOutOfRange {
            name: "theta",
            value: theta,
            min: lo,
            max: 1.0,
        });
    }
    let side = d * d;
    let v = max_entangled_vector(d);
    let mut m = &v * v.adjoint() * Complex64::new(theta, 0.0);
    let mixed = (1.0 - theta) / side as f64;
    for i in 0..side {
        m[(i, i)] += Complex64::new(mixed, 0.0);
    }
    bloch::validate_density(&m, DEFAULT_TOL)
}

/// The 3⊗3 family ρ_a, 0 ≤ a ≤ 1, normalized by its trace 8a + 1.
pub fn example1(a: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&a) {
        return Err(Error::ParameterOutOfRange {
            name: "a",
            value: a,
            min: 0.0,
            max: 1.0,
        });
    }
    let mut m = DMatrix::<Complex64>::zeros(9, 9);
    let ac = Complex64::new(a, 0.0);
    for idx in [0usize, 1, 2, 3, 4, 5, 7] {
        m[(idx, idx)] = ac;
    }
    let half_1a = Complex64::new((1.0 + a) / 2.0, 0.0);
    m[(6, 6)] = half_1a;
    m[(8, 8)] = half_1a;
    for (i, j) in [(0usize, 4usize), (0, 8), (4, 8)] {
        m[(i, j)] = ac;
        m[(j, i)] = ac;
    }
    let root = Complex64::new((1.0 - a * a).sqrt() / 2.0, 0.0);
    m[(6, 8)] = root;
    m[(8, 6)] = root;
    m /= Complex64::new(8.0 * a + 1.0, 0.0);
    bloch::validate_density(&m, DEFAULT_TOL)
}

/// The 3⊗3 mixture (8/9)σ + (1/9)|φ₊⟩⟨φ₊| with
/// σ = [x|0⟩⟨0| + (1−x)|1⟩⟨1|]⊗[x|0⟩⟨0| + (1−x)|1⟩⟨1|].
pub fn example2(x: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::ParameterOutOfRange {
            name: "x",
            value: x,
            min: 0.0,
            max: 1.0,
        });
    }
    let d = 3;
    let v = max_entangled_vector(d);
    let mut m = &v * v.adjoint() * Complex64::new(1.0 / 9.0, 0.0);
    let local = [x, 1.0 - x, 0.0];
    for a in 0..d {
        for b in 0..d {
            m[(a * d + b, a * d + b)] += Complex64::new(8.0 / 9.0 * local[a] * local[b], 0.0);
        }
    }
    bloch::validate_density(&m, DEFAULT_TOL)
}

/// The pure state |φ⟩ₓ = √x|00⟩ + √x|11⟩ + √(1−2x)|22⟩, 0 ≤ x ≤ 1/2.
pub fn phi_x(x: f64) -> Result<DensityMatrix> {
    if !(0.0..=0.5).contains(&x) {
        return Err(Error::ParameterOutOfRange {
            name: "x",
            value: x,
            min: 0.0,
            max: 0.5,
        });
    }
    let mut v = DVector::<Complex64>::zeros(9);
    v[0] = Complex64::new(x.sqrt(), 0.0);
    v[4] = Complex64::new(x.sqrt(), 0.0);
    v[8] = Complex64::new((1.0 - 2.0 * x).sqrt(), 0.0);
    let m = &v * v.adjoint();
    bloch::validate_density(&m, DEFAULT_TOL)
}

/// Convex mixture Σ_k p_k |φ⟩ₓₖ⟨φ| of the |φ⟩ₓ family.
///
/// Weights must be strictly positive and sum to one within 1e−12.
pub fn phi_mixture(weights: &[(f64, f64)]) -> Result<DensityMatrix> {
    if weights.is_empty() {
        return Err(Error::InvalidWeights("empty weight list".into()));
    }
    let mut total = 0.0;
    for &(p, x) in weights {
        if !(p > 0.0 && p <= 1.0) {
            return Err(Error::InvalidWeights(format!("weight p = {p} outside (0, 1]")));
        }
        if !(0.0..=0.5).contains(&x) {
            return Err(Error::ParameterOutOfRange {
                name: "x_k",
                value: x,
                min: 0.0,
                max: 0.5,
            });
        }
        total += p;
    }
    if (total - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidWeights(format!(
            "weights sum to {total}, expected 1 within 1e-12"
        )));
    }
    let mut m = DMatrix::<Complex64>::zeros(9, 9);
    for &(p, x) in weights {
        let term = phi_x(x)?;
        m += term.matrix() * Complex64::new(p, 0.0);
    }
    bloch::validate_density(&m, DEFAULT_TOL)
}

/// ρ₃ = y|φ⟩_{1/3}⟨φ| + (1−y)/2 |φ⟩_{1/2}⟨φ| + (1−y)/2 |φ⟩_0⟨φ|, y ∈ [0, 1].
pub fn rho3(y: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&y) {
        return Err(Error::ParameterOutOfRange {
            name: "y",
            value: y,
            min: 0.0,
            max: 1.0,
        });
    }
    let raw = [(y, 1.0 / 3.0), ((1.0 - y) / 2.0, 0.5), ((1.0 - y) / 2.0, 0.0)];
    let weights: Vec<(f64, f64)> = raw.iter().copied().filter(|&(p, _)| p > 0.0).collect();
    phi_mixture(&weights)
}

/// A correlation-free state ρ₀ = (1/d²)(I⊗I + Σ r_i λ_i⊗I + Σ s_j I⊗λ_j).
///
/// The requested local vectors are scaled by the largest factor in (0, 1]
/// that keeps the matrix positive semidefinite, found by bisection on the
/// smallest eigenvalue.
pub fn rho_zero(d: usize, r: &[f64], s: &[f64]) -> Result<DensityMatrix> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    let n = d * d - 1;
    if r.len() != n || s.len() != n {
        return Err(Error::ShapeMismatch {
            expected: format!("r and s of length {n}"),
            got: format!("r: {}, s: {}", r.len(), s.len()),
        });
    }
    if r.iter().chain(s.iter()).any(|x| !x.is_finite()) {
        return Err(Error::Construction("non-finite local vector entries".into()));
    }

    let build = |gamma: f64| -> Result<DMatrix<Complex64>> {
        let rv = DVector::from_iterator(n, r.iter().map(|x| gamma * x));
        let sv = DVector::from_iterator(n, s.iter().map(|x| gamma * x));
        let b = BlochDecomposition::new(d, rv, sv, DMatrix::zeros(n, n))?;
        bloch::reconstruct(&b)
    };
    let min_eig = |m: &DMatrix<Complex64>| -> f64 {
        m.clone()
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    };

    let full = build(1.0)?;
    if min_eig(&full) >= -1e-14 {
        return bloch::validate_density(&full, DEFAULT_TOL);
    }

    // gamma = 0 is the maximally mixed state, always strictly positive.
    let mut lo = 0.0;
    let mut hi = 1.0;
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        let m = build(mid)?;
        if min_eig(&m) >= 1e-12 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let m = build(lo)?;
    bloch::validate_density(&m, DEFAULT_TOL)
        .map_err(|e| Error::Construction(format!("rho_zero scaling failed: {e}")))
}

/// Product of two diagonal local states, diag(p) ⊗ diag(q).
pub fn product_diag(probs_a: &[f64], probs_b: &[f64]) -> Result<DensityMatrix> {
    let d = probs_a.len();
    if d < 2 || probs_b.len() != d {
        return Err(Error::ShapeMismatch {
            expected: "two probability vectors of equal length >= 2".into(),
            got: format!("{} and {}", probs_a.len(), probs_b.len()),
        });
    }
    for &p in probs_a.iter().chain(probs_b.iter()) {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidWeights(format!("probability {p} outside [0, 1]")));
        }
    }
    for (name, v) in [("probs_a", probs_a), ("probs_b", probs_b)] {
        let sum: f64 = v.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidWeights(format!("{name} sums to {sum}, expected 1")));
        }
    }
    let mut m = DMatrix::<Complex64>::zeros(d * d, d * d);
    for a in 0..d {
        for b in 0..d {
            m[(a * d + b, a * d + b)] = Complex64::new(probs_a[a] * probs_b[b], 0.0);
        }
    }
    bloch::validate_density(&m, DEFAULT_TOL)
}

/// Seeded random density matrix ρ = AA†/Tr(AA†) with A a d²×rank complex
/// Gaussian matrix; deterministic per seed.
pub fn random_density(d: usize, rank: usize, seed: u64) -> Result<DensityMatrix> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    let side = d * d;
    if rank < 1 || rank > side {
        return Err(Error::ParameterOutOfRange {
            name: "rank",
            value: rank as f64,
            min: 1.0,
            max: side as f64,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut a = DMatrix::<Complex64>::zeros(side, rank);
    for i in 0..side {
        for j in 0..rank {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            a[(i, j)] = Complex64::new(re, im);
        }
    }
    let mut rho = &a * a.adjoint();
    let trace: f64 = (0..side).map(|i| rho[(i, i)].re).sum();
    rho /= Complex64::new(trace, 0.0);
    bloch::validate_density(&rho, DEFAULT_TOL)
}

/// Serializable description of a state, the CLI's JSON parameter format.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum StateSpec {
    MaxEntangled { dim: usize },
    Isotropic { dim: usize, theta: f64 },
    Example1 { a: f64 },
    Example2 { x: f64 },
    PhiX { x: f64 },
    PhiMixture { weights: Vec<(f64, f64)> },
    Rho3 { y: f64 },
    RhoZero { dim: usize, r: Vec<f64>, s: Vec<f64> },
    ProductDiag { probs_a: Vec<f64>, probs_b: Vec<f64> },
    RandomDensity { dim: usize, rank: usize, seed: u64 },
}

impl StateSpec {
    pub fn build(&self) -> Result<DensityMatrix> {
        match self {
            StateSpec::MaxEntangled { dim } => max_entangled(*dim),
            StateSpec::Isotropic { dim, theta } => isotropic(*dim, *theta),
            StateSpec::Example1 { a } => example1(*a),
            StateSpec::Example2 { x } => example2(*x),
            StateSpec::PhiX { x } => phi_x(*x),
            StateSpec::PhiMixture { weights } => phi_mixture(weights),
            StateSpec::Rho3 { y } => rho3(*y),
            StateSpec::RhoZero { dim, r, s } => rho_zero(*dim, r, s),
            StateSpec::ProductDiag { probs_a, probs_b } => product_diag(probs_a, probs_b),
            StateSpec::RandomDensity { dim, rank, seed } => random_density(*dim, *rank, *seed),
        }
    }
}
