//! Parameter sweeps over the one-parameter state families, CSV emission and
//! usefulness-threshold search.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use fef_core::bloch::{decompose, DensityMatrix};
use fef_core::bounds;
use fef_core::optimizer::{self, OptimizerConfig};

use crate::error::Result;

/// Sweepable families. All are 3⊗3 except the isotropic family, which takes
/// its local dimension from the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Example1,
    Example2,
    PhiX,
    Rho3,
    Isotropic,
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Example1 => "example1",
            Family::Example2 => "example2",
            Family::PhiX => "phix",
            Family::Rho3 => "rho3",
            Family::Isotropic => "isotropic",
        }
    }

    /// Natural parameter domain, used as the default sweep range.
    pub fn domain(&self, d: usize) -> (f64, f64) {
        match self {
            Family::Example1 | Family::Example2 | Family::Rho3 => (0.0, 1.0),
            Family::PhiX => (0.0, 0.5),
            Family::Isotropic => (-1.0 / ((d * d - 1) as f64), 1.0),
        }
    }

    pub fn build(&self, d: usize, param: f64) -> fef_core::Result<DensityMatrix> {
        match self {
            Family::Example1 => fef_core::states::example1(param),
            Family::Example2 => fef_core::states::example2(param),
            Family::PhiX => fef_core::states::phi_x(param),
            Family::Rho3 => fef_core::states::rho3(param),
            Family::Isotropic => fef_core::states::isotropic(d, param),
        }
    }
}

/// One CSV row of a sweep.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub param: f64,
    pub f: f64,
    pub thm1: f64,
    pub cor1: f64,
    pub prior: f64,
    pub fef_numeric: Option<f64>,
    pub fef_exact: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub family: Family,
    pub dim: usize,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
    pub optimize: bool,
    pub restarts: usize,
    pub seed: u64,
}

pub fn grid(from: f64, to: f64, steps: usize) -> Vec<f64> {
    if steps <= 1 {
        return vec![from];
    }
    (0..steps)
        .map(|i| from + (to - from) * i as f64 / (steps - 1) as f64)
        .collect()
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Per-point seed, mixed from the base seed and the grid index so parallel
/// evaluation order never changes the output.
pub fn point_seed(base: u64, index: usize) -> u64 {
    splitmix64(base ^ splitmix64(index as u64 + 1))
}

/// Evaluate the sweep; rows come back in grid order regardless of the
/// parallel schedule.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    let params = grid(cfg.from, cfg.to, cfg.steps);
    let rows: std::result::Result<Vec<SweepRow>, fef_core::Error> = params
        .par_iter()
        .enumerate()
        .map(|(i, &param)| {
            let rho = cfg.family.build(cfg.dim, param)?;
            let report = if cfg.optimize {
                let ocfg = OptimizerConfig {
                    restarts: cfg.restarts,
                    seed: point_seed(cfg.seed, i),
                    ..OptimizerConfig::default()
                };
                optimizer::certify(&rho, &ocfg)?
            } else {
                bounds::full_report(&rho, false)?
            };
            Ok(SweepRow {
                param,
                f: report.singlet_fraction,
                thm1: report.thm1_bound,
                cor1: report.cor1_bound,
                prior: report.prior_bound,
                fef_numeric: report.numeric_fef,
                // Only the diagonal-class closed form is unconditionally exact.
                fef_exact: report.exact_thm3,
            })
        })
        .collect();
    Ok(rows?)
}

fn fmt_field(v: Option<f64>) -> String {
    // 17 significant digits: round-trippable doubles, empty for absent.
    match v {
        Some(x) => format!("{x:.16e}"),
        None => String::new(),
    }
}

/// Write rows as CSV with the fixed header. Deterministic byte-for-byte for
/// fixed inputs and seed.
pub fn write_csv<W: Write>(mut w: W, rows: &[SweepRow]) -> Result<()> {
    writeln!(w, "param,f,thm1,cor1,prior,fef_numeric,fef_exact")?;
    for row in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            fmt_field(Some(row.param)),
            fmt_field(Some(row.f)),
            fmt_field(Some(row.thm1)),
            fmt_field(Some(row.cor1)),
            fmt_field(Some(row.prior)),
            fmt_field(row.fef_numeric),
            fmt_field(row.fef_exact),
        )?;
    }
    Ok(())
}

/// Locate the crossings of f(ρ(param)) − 1/d inside the sweep range by
/// scanning the grid for sign changes and bisecting each bracket.
pub fn find_thresholds(family: Family, d: usize, from: f64, to: f64, steps: usize) -> Result<Vec<f64>> {
    let singlet_at = |p: f64| -> Result<f64> {
        let rho = family.build(d, p)?;
        Ok(bounds::singlet_fraction(&decompose(&rho)?))
    };
    let level = 1.0 / d as f64;
    let params = grid(from, to, steps.max(2));
    let mut values = Vec::with_capacity(params.len());
    for &p in &params {
        values.push(singlet_at(p)? - level);
    }

    let mut roots = Vec::new();
    for i in 0..params.len() - 1 {
        let (ga, gb) = (values[i], values[i + 1]);
        if ga == 0.0 {
            roots.push(params[i]);
            continue;
        }
        if ga * gb < 0.0 {
            let (mut lo, mut hi) = (params[i], params[i + 1]);
            let mut glo = ga;
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if hi - lo < 1e-13 {
                    break;
                }
                let gm = singlet_at(mid)? - level;
                if gm == 0.0 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if (glo < 0.0) == (gm < 0.0) {
                    lo = mid;
                    glo = gm;
                } else {
                    hi = mid;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
    }
    if *values.last().unwrap() == 0.0 {
        roots.push(*params.last().unwrap());
    }
    Ok(roots)
}
