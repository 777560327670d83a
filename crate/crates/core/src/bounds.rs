//! Closed-form FEF quantities.
//!
//! The FEF objective at a fixed unitary, its Bloch-form rewrite
//!
//! ```text
//! 1/d² + (1/d³) ( Σ_{i∈Ω, j∈Ω₁∪Ω₂} t_ij Tr(U†λ_iUλ_j) − Σ_{i∈Ω, j∈Ω₃} t_ij Tr(U†λ_iUλ_j) ),
//! ```
//!
//! the singlet fraction (the objective at U = I), two closed-form upper
//! bounds driven by the Δ(U,i,j) = Tr(U†λ_iUλ_j) envelope, a Ky-Fan-norm
//! comparison bound, the exact FEF (d + 2‖T‖_KF)/d³ for states whose
//! correlation matrix is diagonal with t_ii ≥ 0 on Ω₁∪Ω₂ and t_ii ≤ 0 on Ω₃,
//! the two-qubit formula (1 + ‖T‖_KF)/4, the optimal teleportation fidelity
//! (dF + 1)/(d + 1) and the isotropic distillability threshold θ > 1/(d+1).

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::bloch::{self, BlochDecomposition, DensityMatrix};
use crate::error::{Error, Result};
use crate::gellmann;
use crate::states;

/// Max entrywise deviation of U†U from I tolerated by the objectives.
pub const UNITARY_TOL: f64 = 1e-8;

/// Imaginary residue tolerated when clamping objective values to the reals.
const OBJECTIVE_IMAG_TOL: f64 = 1e-10;

/// Condition tolerance for the diagonal-correlation exact-FEF class.
///
/// The closed form is exact only under exact sign/diagonality compliance, so
/// near-compliant states yield "absent" rather than an approximate value.
pub const THM3_COND_TOL: f64 = 1e-10;

fn check_unitary(u: &DMatrix<Complex64>, d: usize) -> Result<()> {
    if u.nrows() != d || u.ncols() != d {
        return Err(Error::ShapeMismatch {
            expected: format!("{d}x{d} unitary"),
            got: format!("{}x{}", u.nrows(), u.ncols()),
        });
    }
    let gram = u.adjoint() * u;
    let mut dev = 0.0_f64;
    for i in 0..d {
        for j in 0..d {
            let expected = if i == j {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            };
            dev = dev.max((gram[(i, j)] - expected).norm());
        }
    }
    if !dev.is_finite() || dev > UNITARY_TOL {
        return Err(Error::NotUnitary { deviation: dev });
    }
    Ok(())
}

/// ⟨φ₊| (U†⊗I) ρ (U⊗I) |φ₊⟩ for a single unitary (no maximization).
///
/// Uses (U⊗I)|φ₊⟩ = vec(U)/√d in the row-major composite basis, so each
/// evaluation is one matrix-vector product.
pub fn fef_objective(rho: &DensityMatrix, u: &DMatrix<Complex64>) -> Result<f64> {
    let d = rho.dim();
    check_unitary(u, d)?;
    let scale = 1.0 / (d as f64).sqrt();
    let psi = DVector::from_fn(d * d, |idx, _| u[(idx / d, idx % d)] * scale);
    let val = psi.dotc(&(rho.matrix() * &psi));
    if val.im.abs() > OBJECTIVE_IMAG_TOL {
        return Err(Error::ImaginaryResidue {
            magnitude: val.im.abs(),
            tol: OBJECTIVE_IMAG_TOL,
        });
    }
    Ok(val.re)
}

/// The Bloch-form objective of the same quantity, evaluated from the
/// correlation matrix alone.
pub fn fef_bloch_objective(b: &BlochDecomposition, u: &DMatrix<Complex64>) -> Result<f64> {
    let d = b.dim();
    check_unitary(u, d)?;
    let basis = gellmann::basis(d)?;
    let n = d * d - 1;
    let o3 = gellmann::omega3_start(d);

    let rotated: Vec<DMatrix<Complex64>> = basis
        .generators()
        .iter()
        .map(|lam| u.adjoint() * lam * u)
        .collect();

    let mut total = 0.0;
    for (i, rot) in rotated.iter().enumerate() {
        for j in 0..n {
            let lam_j = &basis.generators()[j];
            let mut delta = 0.0;
            for a in 0..d {
                for c in 0..d {
                    delta += (rot[(a, c)] * lam_j[(c, a)]).re;
                }
            }
            let sign = if j + 1 >= o3 { -1.0 } else { 1.0 };
            total += sign * b.t()[(i, j)] * delta;
        }
    }
    let d3 = (d * d * d) as f64;
    Ok(1.0 / (d * d) as f64 + total / d3)
}

/// Singlet fraction f(ρ) = ⟨φ₊|ρ|φ₊⟩ from the Bloch coefficients:
/// 1/d² + (2/d³)(Σ_{i∈Ω₁∪Ω₂} t_ii − Σ_{i∈Ω₃} t_ii).
pub fn singlet_fraction(b: &BlochDecomposition) -> f64 {
    let d = b.dim();
    let n = d * d - 1;
    let o3 = gellmann::omega3_start(d);
    let mut sum = 0.0;
    for i in 0..n {
        let sign = if i + 1 >= o3 { -1.0 } else { 1.0 };
        sum += sign * b.t()[(i, i)];
    }
    1.0 / (d * d) as f64 + 2.0 * sum / (d * d * d) as f64
}

/// The four weighted |t_ij| sums of the class-resolved upper bound.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct BoundBreakdown {
    /// Ω₁×Ω₁ block with weights 2(ij+min{i,j})/√(ij(i+1)(j+1)).
    pub t1: f64,
    /// Ω₁×(Ω₂∪Ω₃) block with weights √(2(i+1)/i).
    pub t2: f64,
    /// (Ω₂∪Ω₃)×Ω₁ block with weights √(2(j+1)/j).
    pub t3: f64,
    /// (Ω₂∪Ω₃)² block with weight 2.
    pub t4: f64,
}

impl BoundBreakdown {
    pub fn sum(&self) -> f64 {
        self.t1 + self.t2 + self.t3 + self.t4
    }
}

/// Upper bound F(ρ) ≤ 1/d² + (T₁+T₂+T₃+T₄)/d³ with per-class Δ envelopes.
pub fn upper_bound_thm1(b: &BlochDecomposition) -> (f64, BoundBreakdown) {
    let d = b.dim();
    let n = d * d - 1;
    let in_omega1 = |idx: usize| idx + 1 < d;
    let mut parts = BoundBreakdown {
        t1: 0.0,
        t2: 0.0,
        t3: 0.0,
        t4: 0.0,
    };
    for ii in 0..n {
        for jj in 0..n {
            let t_abs = b.t()[(ii, jj)].abs();
            let i = (ii + 1) as f64;
            let j = (jj + 1) as f64;
            match (in_omega1(ii), in_omega1(jj)) {
                (true, true) => {
                    let w = 2.0 * (i * j + i.min(j)) / (i * j * (i + 1.0) * (j + 1.0)).sqrt();
                    parts.t1 += w * t_abs;
                }
                (true, false) => {
                    parts.t2 += (2.0 * (i + 1.0) / i).sqrt() * t_abs;
                }
                (false, true) => {
                    parts.t3 += (2.0 * (j + 1.0) / j).sqrt() * t_abs;
                }
                (false, false) => {
                    parts.t4 += 2.0 * t_abs;
                }
            }
        }
    }
    let bound = 1.0 / (d * d) as f64 + parts.sum() / (d * d * d) as f64;
    (bound, parts)
}

/// Simplified upper bound F(ρ) ≤ 1/d² + (2/d³) Σ_{i,j} |t_ij|.
pub fn upper_bound_cor1(b: &BlochDecomposition) -> f64 {
    let d = b.dim();
    let sum: f64 = b.t().iter().map(|x| x.abs()).sum();
    1.0 / (d * d) as f64 + 2.0 * sum / (d * d * d) as f64
}

/// Ky-Fan comparison bound F(ρ) ≤ 1/d² + 4‖Mᵀ(ρ)M(|φ₊⟩⟨φ₊|)‖_KF with
/// M(ρ) = T(ρ)/d².
pub fn upper_bound_prior(b: &BlochDecomposition) -> Result<f64> {
    let d = b.dim();
    let scale = 1.0 / (d * d) as f64;
    let m_rho = b.t() * scale;
    let me = states::max_entangled(d)?;
    let m_phi = bloch::decompose(&me)?.t() * scale;
    let ky = bloch::kyfan_norm(&(m_rho.transpose() * m_phi))?;
    Ok(1.0 / (d * d) as f64 + 4.0 * ky)
}

/// Exact FEF (d + 2‖T‖_KF)/d³ for states with diagonal T obeying the sign
/// pattern t_ii ≥ 0 on Ω₁∪Ω₂, t_ii ≤ 0 on Ω₃; `None` when the conditions
/// fail beyond `tol`.
pub fn exact_fef_thm3(b: &BlochDecomposition, tol: f64) -> Option<f64> {
    let d = b.dim();
    let n = d * d - 1;
    let o3 = gellmann::omega3_start(d);
    for i in 0..n {
        let tii = b.t()[(i, i)];
        // NaN coefficients fall through to the Ky-Fan computation, which
        // rejects them.
        if i + 1 >= o3 {
            if tii > tol {
                return None;
            }
        } else if tii < -tol {
            return None;
        }
        for j in 0..n {
            if i != j && b.t()[(i, j)].abs() > tol {
                return None;
            }
        }
    }
    let ky = bloch::kyfan_norm(b.t()).ok()?;
    Some((d as f64 + 2.0 * ky) / (d * d * d) as f64)
}

/// Two-qubit closed form (1 + ‖T‖_KF)/4.
pub fn fef_two_qubit(b: &BlochDecomposition) -> Result<f64> {
    if b.dim() != 2 {
        return Err(Error::InvalidDimension(b.dim()));
    }
    Ok((1.0 + bloch::kyfan_norm(b.t())?) / 4.0)
}

/// Signed envelope (lo, hi) for Δ(U,i,j) = Tr(U†λ_iUλ_j) over all unitaries,
/// by index class; both ends additionally clamped to ±2.
pub fn delta_bound(d: usize, i: usize, j: usize) -> Result<(f64, f64)> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    let max = d * d - 1;
    for idx in [i, j] {
        if idx < 1 || idx > max {
            return Err(Error::IndexOutOfRange { index: idx, max });
        }
    }
    let in_omega1 = |idx: usize| idx < d;
    let (lo, hi) = match (in_omega1(i), in_omega1(j)) {
        (true, true) => {
            let (fi, fj) = (i as f64, j as f64);
            let denom = (fi * fj * (fi + 1.0) * (fj + 1.0)).sqrt();
            let hi = 2.0 * (fi * fj + fi.min(fj)) / denom;
            let lo = if i + j < d + 1 {
                -2.0 * (fi + fj) / denom
            } else {
                -2.0 * d as f64 / denom
            };
            (lo, hi)
        }
        (true, false) | (false, true) => {
            // min{i,j} is the Ω₁ index: Ω₁ indices precede all others.
            let m = i.min(j) as f64;
            let bound = (2.0 * (m + 1.0) / m).sqrt();
            (-bound, bound)
        }
        (false, false) => (-2.0, 2.0),
    };
    Ok((lo.max(-2.0), hi.min(2.0)))
}

/// Optimal teleportation fidelity f_max = (dF + 1)/(d + 1) from an FEF value.
pub fn optimal_fidelity(fef: f64, d: usize) -> Result<f64> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    if !(-1e-9..=1.0 + 1e-9).contains(&fef) {
        return Err(Error::ParameterOutOfRange {
            name: "fef",
            value: fef,
            min: 0.0,
            max: 1.0,
        });
    }
    Ok((d as f64 * fef + 1.0) / (d as f64 + 1.0))
}

/// Teleportation usefulness verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Usefulness {
    /// Σ_{Ω₁∪Ω₂} t_ii − Σ_{Ω₃} t_ii > d(d−1)/2, hence f(ρ) > 1/d.
    Yes,
    /// Some upper bound is ≤ 1/d, hence F(ρ) ≤ 1/d.
    No,
    /// Neither sufficient condition fires.
    Undetermined,
}

/// Tri-state usefulness test: the diagonal-sum sufficient condition gives
/// "yes", an upper bound at or below 1/d gives "no", anything else is
/// honestly undetermined.
pub fn useful_for_teleportation(b: &BlochDecomposition) -> Usefulness {
    let d = b.dim();
    let n = d * d - 1;
    let o3 = gellmann::omega3_start(d);
    let mut sum = 0.0;
    for i in 0..n {
        let sign = if i + 1 >= o3 { -1.0 } else { 1.0 };
        sum += sign * b.t()[(i, i)];
    }
    if sum > (d * (d - 1)) as f64 / 2.0 {
        return Usefulness::Yes;
    }
    let (thm1, _) = upper_bound_thm1(b);
    let cor1 = upper_bound_cor1(b);
    if thm1.min(cor1) <= 1.0 / d as f64 {
        return Usefulness::No;
    }
    Usefulness::Undetermined
}

/// Distillability of the isotropic state ρ_θ: possible iff θ > 1/(d+1), strict.
pub fn distillable_isotropic(theta: f64, d: usize) -> Result<bool> {
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
    Ok(theta > 1.0 / (d as f64 + 1.0))
}

/// Which quantity the reported optimal fidelity was computed from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FidelitySource {
    /// A closed-form exact FEF value.
    Exact,
    /// The numeric maximizer's lower estimate.
    NumericLowerEstimate,
    /// The tightest upper bound (the fidelity is then itself only a bound).
    UpperBound,
}

/// All computed bounds and values for one state.
#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub dim: usize,
    pub singlet_fraction: f64,
    pub thm1_bound: f64,
    pub thm1_breakdown: BoundBreakdown,
    pub cor1_bound: f64,
    pub prior_bound: f64,
    pub exact_thm3: Option<f64>,
    pub two_qubit_exact: Option<f64>,
    pub numeric_fef: Option<f64>,
    pub optimal_fidelity: f64,
    pub fidelity_source: FidelitySource,
    pub useful_for_teleportation: Usefulness,
}

impl BoundReport {
    /// Best lower bound on F(ρ) present in the report.
    pub fn best_lower(&self) -> f64 {
        match self.numeric_fef {
            Some(v) => v.max(self.singlet_fraction),
            None => self.singlet_fraction,
        }
    }

    /// Best upper bound on F(ρ) present in the report.
    pub fn best_upper(&self) -> f64 {
        self.thm1_bound.min(self.cor1_bound).min(self.prior_bound)
    }

    /// The FEF if the report determines it: a closed-form exact value, or a
    /// pinch of the lower and upper bounds within `tol`.
    pub fn known_fef(&self, tol: f64) -> Option<f64> {
        if let Some(v) = self.exact_thm3 {
            return Some(v);
        }
        if let Some(v) = self.two_qubit_exact {
            return Some(v);
        }
        let (lo, hi) = (self.best_lower(), self.best_upper());
        if hi - lo <= tol {
            Some(0.5 * (lo + hi))
        } else {
            None
        }
    }
}

/// Assemble a report around an externally computed numeric lower estimate
/// (or none). [`full_report`] and the optimizer's certification wrap this.
pub fn report_with_numeric(rho: &DensityMatrix, numeric: Option<f64>) -> Result<BoundReport> {
    let d = rho.dim();
    let b = bloch::decompose(rho)?;
    let singlet = singlet_fraction(&b);
    let (thm1, breakdown) = upper_bound_thm1(&b);
    let cor1 = upper_bound_cor1(&b);
    let prior = upper_bound_prior(&b)?;
    let exact3 = exact_fef_thm3(&b, THM3_COND_TOL);
    let two_qubit = if d == 2 {
        Some(fef_two_qubit(&b)?)
    } else {
        None
    };

    let (fef, source) = if let Some(v) = exact3 {
        (v, FidelitySource::Exact)
    } else if let Some(v) = two_qubit {
        (v, FidelitySource::Exact)
    } else if let Some(v) = numeric {
        (v, FidelitySource::NumericLowerEstimate)
    } else {
        (thm1.min(cor1).min(prior), FidelitySource::UpperBound)
    };
    let fidelity = optimal_fidelity(fef.clamp(0.0, 1.0), d)?;

    Ok(BoundReport {
        dim: d,
        singlet_fraction: singlet,
        thm1_bound: thm1,
        thm1_breakdown: breakdown,
        cor1_bound: cor1,
        prior_bound: prior,
        exact_thm3: exact3,
        two_qubit_exact: two_qubit,
        numeric_fef: numeric,
        optimal_fidelity: fidelity,
        fidelity_source: source,
        useful_for_teleportation: useful_for_teleportation(&b),
    })
}

/// Assemble every applicable quantity into one report; `with_optimizer` also
/// runs the numeric maximizer at its default configuration.
pub fn full_report(rho: &DensityMatrix, with_optimizer: bool) -> Result<BoundReport> {
    let numeric = if with_optimizer {
        Some(crate::optimizer::maximize_fef(rho, &crate::optimizer::OptimizerConfig::default())?.best_value)
    } else {
        None
    };
    report_with_numeric(rho, numeric)
}
