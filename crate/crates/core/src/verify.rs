//! Cross-validation suites wiring all modules together.
//!
//! Each suite checks one mathematical identity or envelope on randomized
//! inputs and reports the largest deviation it observed. `Fast` runs reduced
//! sample counts (the whole level finishes in well under a minute); `Full`
//! runs the documented counts.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bloch::{self, decompose, validate_density};
use crate::bounds;
use crate::gellmann;
use crate::optimizer::{self, haar_unitary, OptimizerConfig};
use crate::states;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyLevel {
    Fast,
    Full,
}

/// Outcome of one suite.
#[derive(Debug, Clone)]
pub struct SuiteResult {
    pub name: &'static str,
    pub passed: bool,
    pub cases: usize,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl SuiteResult {
    fn from_dev(name: &'static str, cases: usize, max_dev: f64, tol: f64) -> Self {
        SuiteResult {
            name,
            passed: max_dev <= tol,
            cases,
            max_deviation: max_dev,
            tolerance: tol,
            detail: String::new(),
        }
    }
}

fn counts(level: VerifyLevel, fast: usize, full: usize) -> usize {
    match level {
        VerifyLevel::Fast => fast,
        VerifyLevel::Full => full,
    }
}

fn random_state(d: usize, seed: u64) -> crate::bloch::DensityMatrix {
    let rank = 1 + (seed as usize) % (d * d);
    states::random_density(d, rank, seed).expect("random density construction")
}

fn suite_gellmann_orthogonality() -> SuiteResult {
    let mut dev = 0.0_f64;
    let mut cases = 0;
    for d in 2..=5 {
        let b = gellmann::basis(d).unwrap();
        let n = b.len();
        for i in 0..n {
            for j in 0..n {
                let prod = &b.generators()[i] * &b.generators()[j];
                let tr: Complex64 = (0..d).map(|t| prod[(t, t)]).sum();
                let expected = if i == j { 2.0 } else { 0.0 };
                dev = dev.max((tr.re - expected).abs()).max(tr.im.abs());
                cases += 1;
            }
        }
    }
    SuiteResult::from_dev("gellmann-orthogonality", cases, dev, 1e-12)
}

fn suite_gellmann_spectrum() -> SuiteResult {
    let mut dev = 0.0_f64;
    let mut cases = 0;
    for d in 2..=5 {
        let b = gellmann::basis(d).unwrap();
        for i in 1..=(d * d - 1) {
            let predicted = gellmann::generator_spectrum(d, i).unwrap();
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
                dev = dev.max((p - n).abs());
            }
            cases += 1;
        }
    }
    SuiteResult::from_dev("gellmann-spectrum", cases, dev, 1e-12)
}

fn suite_bloch_round_trip(level: VerifyLevel) -> SuiteResult {
    let n = counts(level, 20, 200);
    let mut dev = 0.0_f64;
    let mut cases = 0;
    for d in 2..=4 {
        for k in 0..n {
            let rho = random_state(d, 10_000 + (d * 1000 + k) as u64);
            let back = bloch::reconstruct(&decompose(&rho).unwrap()).unwrap();
            let delta = (&back - rho.matrix())
                .iter()
                .map(|z| z.norm())
                .fold(0.0, f64::max);
            dev = dev.max(delta);
            cases += 1;
        }
    }
    SuiteResult::from_dev("bloch-round-trip", cases, dev, 1e-10)
}

fn suite_purity_identity(level: VerifyLevel) -> SuiteResult {
    // Tr(ρ²) = (1/d²)(1 + (2/d)(‖r‖² + ‖s‖²) + (4/d²) Σ t_ij²).
    let n = counts(level, 20, 200);
    let mut dev = 0.0_f64;
    let mut cases = 0;
    for d in 2..=4 {
        for k in 0..n {
            let rho = random_state(d, 20_000 + (d * 1000 + k) as u64);
            let b = decompose(&rho).unwrap();
            let d_f = d as f64;
            let formula = (1.0
                + 2.0 / d_f * (b.r().norm_squared() + b.s().norm_squared())
                + 4.0 / (d_f * d_f) * b.t().iter().map(|x| x * x).sum::<f64>())
                / (d_f * d_f);
            dev = dev.max((rho.purity() - formula).abs());
            cases += 1;
        }
    }
    SuiteResult::from_dev("bloch-purity-identity", cases, dev, 1e-9)
}

fn suite_kyfan(level: VerifyLevel) -> SuiteResult {
    let n = counts(level, 10, 50);
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut dev = 0.0_f64;
    let mut cases = 0;
    for _ in 0..n {
        let size = 2 + rng.random_range(0..7usize);
        // Diagonal: Ky-Fan norm equals the sum of absolute diagonal entries.
        let diag: Vec<f64> = (0..size).map(|_| rng.random::<f64>() * 4.0 - 2.0).collect();
        let t = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(diag.clone()));
        let expected: f64 = diag.iter().map(|x| x.abs()).sum();
        dev = dev.max((bloch::kyfan_norm(&t).unwrap() - expected).abs());
        // Orthogonal invariance on a dense matrix.
        let a = DMatrix::<f64>::from_fn(size, size, |_, _| rng.random::<f64>() - 0.5);
        let q = DMatrix::<f64>::from_fn(size, size, |_, _| rng.random::<f64>() - 0.5)
            .qr()
            .q();
        let base = bloch::kyfan_norm(&a).unwrap();
        dev = dev.max((bloch::kyfan_norm(&(&q * &a)).unwrap() - base).abs());
        dev = dev.max((bloch::kyfan_norm(&(&a * &q)).unwrap() - base).abs());
        cases += 1;
    }
    SuiteResult::from_dev("kyfan-norm", cases, dev, 1e-10)
}

fn suite_prop1_equivalence(level: VerifyLevel) -> SuiteResult {
    let n = counts(level, 100, 1000);
    let mut dev = 0.0_f64;
    let mut cases = 0;
    for d in 2..=4 {
        let mut rng = ChaCha8Rng::seed_from_u64(40 + d as u64);
        for k in 0..n {
            let rho = random_state(d, 30_000 + (d * 10_000 + k) as u64);
            let u = haar_unitary(d, &mut rng);
            let direct = bounds::fef_objective(&rho, &u).unwrap();
            let via_bloch = bounds::fef_bloch_objective(&decompose(&rho).unwrap(), &u).unwrap();
            dev = dev.max((direct - via_bloch).abs());
            cases += 1;
        }
    }
    SuiteResult::from_dev("prop1-equivalence", cases, dev, 1e-9)
}

fn suite_thm2_overlap(level: VerifyLevel) -> SuiteResult {
    let n = counts(level, 50, 300);
    let mut dev = 0.0_f64;
    let mut cases = 0;
    for d in 2..=4 {
        for k in 0..n {
            let rho = random_state(d, 50_000 + (d * 10_000 + k) as u64);
            let via_bloch = bounds::singlet_fraction(&decompose(&rho).unwrap());
            let phi = states::max_entangled_vector(d);
            let direct = phi.dotc(&(rho.matrix() * &phi)).re;
            dev = dev.max((via_bloch - direct).abs());
            cases += 1;
        }
    }
    SuiteResult::from_dev("thm2-singlet-overlap", cases, dev, 1e-10)
}

fn suite_delta_envelope(level: VerifyLevel) -> SuiteResult {
    let n = counts(level, 100, 1000);
    let mut worst = f64::NEG_INFINITY;
    let mut cases = 0;
    for d in 2..=4 {
        let basis = gellmann::basis(d).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(60 + d as u64);
        for _ in 0..n {
            let u = haar_unitary(d, &mut rng);
            for i in 1..=(d * d - 1) {
                let rotated = u.adjoint() * basis.generator(i).unwrap() * &u;
                for j in 1..=(d * d - 1) {
                    let lam_j = basis.generator(j).unwrap();
                    let mut delta = 0.0;
                    for a in 0..d {
                        for c in 0..d {
                            delta += (rotated[(a, c)] * lam_j[(c, a)]).re;
                        }
                    }
                    let (lo, hi) = bounds::delta_bound(d, i, j).unwrap();
                    // Positive excess means a violated envelope.
                    worst = worst.max(lo - delta).max(delta - hi);
                    cases += 1;
                }
            }
        }
    }
    SuiteResult::from_dev("delta-envelope", cases, worst.max(0.0), 1e-9)
}

fn suite_bound_ordering(level: VerifyLevel) -> SuiteResult {
    let n = counts(level, 50, 300);
    let mut worst = 0.0_f64;
    let mut cases = 0;
    for d in 2..=4 {
        for k in 0..n {
            let rho = random_state(d, 70_000 + (d * 10_000 + k) as u64);
            let b = decompose(&rho).unwrap();
            let (thm1, _) = bounds::upper_bound_thm1(&b);
            let cor1 = bounds::upper_bound_cor1(&b);
            worst = worst.max(thm1 - cor1);
            let f = bounds::singlet_fraction(&b);
            worst = worst.max(f - thm1);
            cases += 1;
        }
    }
    SuiteResult::from_dev("bound-ordering", cases, worst.max(0.0), 1e-12)
}

fn suite_thm3_consistency(level: VerifyLevel) -> SuiteResult {
    let n = counts(level, 10, 40);
    let mut worst = 0.0_f64;
    let mut cases = 0;
    for k in 0..=n {
        let x = 0.5 * k as f64 / n as f64;
        let b = decompose(&states::phi_x(x).unwrap()).unwrap();
        if let Some(exact) = bounds::exact_fef_thm3(&b, bounds::THM3_COND_TOL) {
            let f = bounds::singlet_fraction(&b);
            let cor1 = bounds::upper_bound_cor1(&b);
            worst = worst.max(f - exact).max(exact - cor1);
            // Diagonal sign-patterned T: the closed form must coincide with f.
            worst = worst.max((exact - f).abs());
            cases += 1;
        }
        let theta = -0.1 + 1.1 * k as f64 / n as f64;
        if let Ok(rho) = states::isotropic(3, theta) {
            let b = decompose(&rho).unwrap();
            if let Some(exact) = bounds::exact_fef_thm3(&b, bounds::THM3_COND_TOL) {
                let f = bounds::singlet_fraction(&b);
                let cor1 = bounds::upper_bound_cor1(&b);
                worst = worst.max(f - exact).max(exact - cor1);
                cases += 1;
            }
        }
    }
    SuiteResult::from_dev("thm3-consistency", cases, worst.max(0.0), 1e-9)
}

fn suite_sandwich(level: VerifyLevel) -> SuiteResult {
    let n = counts(level, 4, 20);
    let restarts = counts(level, 4, 8);
    let cfg = OptimizerConfig {
        restarts,
        ..OptimizerConfig::default()
    };
    let mut worst = 0.0_f64;
    let mut cases = 0;
    for d in 2..=3 {
        for k in 0..n {
            let rho = random_state(d, 90_000 + (d * 10_000 + k) as u64);
            let report = optimizer::certify(&rho, &cfg).expect("sandwich");
            let numeric = report.numeric_fef.unwrap();
            worst = worst
                .max(report.singlet_fraction - numeric)
                .max(numeric - report.best_upper());
            cases += 1;
        }
    }
    SuiteResult::from_dev("sandwich-certify", cases, worst.max(0.0), 1e-9)
}

fn suite_local_unitary_invariance(level: VerifyLevel) -> SuiteResult {
    let n = counts(level, 1, 4);
    let restarts = counts(level, 12, 32);
    let cfg = OptimizerConfig {
        restarts,
        ..OptimizerConfig::default()
    };
    let mut dev = 0.0_f64;
    let mut cases = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(123);
    for d in 2..=3 {
        for k in 0..n {
            let rho = random_state(d, 110_000 + (d * 10_000 + k) as u64);
            let base = optimizer::maximize_fef(&rho, &cfg).unwrap().best_value;
            let va = haar_unitary(d, &mut rng);
            let vb = haar_unitary(d, &mut rng);
            let w = va.kronecker(&vb);
            let rotated = &w * rho.matrix() * w.adjoint();
            let rotated = validate_density(&rotated, 1e-8).expect("rotated state");
            let rot = optimizer::maximize_fef(&rotated, &cfg).unwrap().best_value;
            dev = dev.max((base - rot).abs());
            cases += 1;
        }
    }
    SuiteResult::from_dev("local-unitary-invariance", cases, dev, 1e-5)
}

fn suite_state_constructors(level: VerifyLevel) -> SuiteResult {
    let n = counts(level, 11, 51);
    let mut cases = 0;
    let mut dev = 0.0_f64;
    let mut run = |res: crate::error::Result<crate::bloch::DensityMatrix>| match res {
        Ok(_) => cases += 1,
        Err(_) => dev = f64::INFINITY,
    };
    for k in 0..n {
        let u = k as f64 / (n - 1) as f64;
        run(states::example1(u));
        run(states::example2(u));
        run(states::phi_x(0.5 * u));
        run(states::rho3(u));
        for d in 2..=4 {
            let lo = -1.0 / ((d * d - 1) as f64);
            run(states::isotropic(d, lo + (1.0 - lo) * u));
        }
    }
    for d in 2..=4 {
        run(states::max_entangled(d));
        let m = d * d - 1;
        let r: Vec<f64> = (0..m).map(|i| 0.2 * ((i as f64).sin())).collect();
        let s: Vec<f64> = (0..m).map(|i| 0.2 * ((i as f64).cos())).collect();
        run(states::rho_zero(d, &r, &s));
    }
    SuiteResult::from_dev("state-constructors-validate", cases, dev, 0.5)
}

fn suite_isotropic_bloch_form(level: VerifyLevel) -> SuiteResult {
    let n = counts(level, 5, 21);
    let mut dev = 0.0_f64;
    let mut cases = 0;
    for d in 2..=4 {
        let o3 = gellmann::omega3_start(d);
        for k in 0..n {
            let theta = 0.05 + 0.95 * k as f64 / n as f64;
            let b = decompose(&states::isotropic(d, theta).unwrap()).unwrap();
            let magnitude = theta * d as f64 / 2.0;
            for i in 0..(d * d - 1) {
                let expected = if i + 1 >= o3 { -magnitude } else { magnitude };
                dev = dev.max((b.t()[(i, i)] - expected).abs());
            }
            cases += 1;
        }
    }
    SuiteResult::from_dev("isotropic-bloch-form", cases, dev, 1e-10)
}

fn suite_mixture_linearity(level: VerifyLevel) -> SuiteResult {
    let n = counts(level, 5, 20);
    let mut rng = ChaCha8Rng::seed_from_u64(200);
    let mut dev = 0.0_f64;
    let mut cases = 0;
    for _ in 0..n {
        let k = 2 + rng.random_range(0..3usize);
        let mut raw: Vec<f64> = (0..k).map(|_| rng.random::<f64>() + 0.05).collect();
        let total: f64 = raw.iter().sum();
        for w in &mut raw {
            *w /= total;
        }
        let weights: Vec<(f64, f64)> = raw
            .iter()
            .map(|&p| (p, 0.5 * rng.random::<f64>()))
            .collect();
        let mixed = decompose(&states::phi_mixture(&weights).unwrap()).unwrap();
        let mut expected = DMatrix::<f64>::zeros(8, 8);
        for &(p, x) in &weights {
            expected += decompose(&states::phi_x(x).unwrap()).unwrap().t() * p;
        }
        let delta = (mixed.t() - &expected)
            .iter()
            .map(|x| x.abs())
            .fold(0.0, f64::max);
        dev = dev.max(delta);
        cases += 1;
    }
    SuiteResult::from_dev("mixture-linearity", cases, dev, 1e-12)
}

/// Run every suite at the given level.
pub fn run_all(level: VerifyLevel) -> Vec<SuiteResult> {
    vec![
        suite_gellmann_orthogonality(),
        suite_gellmann_spectrum(),
        suite_bloch_round_trip(level),
        suite_purity_identity(level),
        suite_kyfan(level),
        suite_prop1_equivalence(level),
        suite_thm2_overlap(level),
        suite_delta_envelope(level),
        suite_bound_ordering(level),
        suite_thm3_consistency(level),
        suite_sandwich(level),
        suite_local_unitary_invariance(level),
        suite_state_constructors(level),
        suite_isotropic_bloch_form(level),
        suite_mixture_linearity(level),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fast_level_passes() {
        for suite in run_all(VerifyLevel::Fast) {
            assert!(
                suite.passed,
                "suite {} failed: max deviation {:.3e} > tol {:.3e}",
                suite.name, suite.max_deviation, suite.tolerance
            );
        }
    }
}
