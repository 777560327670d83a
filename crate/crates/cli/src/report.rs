//! Rendering of a single-state report, as aligned text or as a JSON document.

use serde::Serialize;

use fef_core::bounds::{BoundReport, FidelitySource, Usefulness};
use fef_core::optimizer::OptimizationResult;
use fef_core::states::StateSpec;

/// Optimization metadata attached to a report.
#[derive(Debug, Clone, Serialize)]
pub struct OptimizationMeta {
    pub restarts: usize,
    pub seed: u64,
    pub restarts_agreeing: usize,
    pub iterations_total: usize,
    pub converged: bool,
}

impl OptimizationMeta {
    pub fn from_result(res: &OptimizationResult, restarts: usize, seed: u64) -> Self {
        OptimizationMeta {
            restarts,
            seed,
            restarts_agreeing: res.restarts_agreeing,
            iterations_total: res.iterations_total,
            converged: res.converged,
        }
    }
}

/// The full JSON document emitted by `fef report`.
#[derive(Debug, Clone, Serialize)]
pub struct ReportDoc {
    /// Where the state came from: a family spec or a matrix file path.
    pub state: StateOrigin,
    pub report: BoundReport,
    /// Present when the numeric maximizer ran.
    pub optimization: Option<OptimizationMeta>,
    /// FEF when the report determines it (closed form, or bounds pinching
    /// within 1e−9).
    pub fef_known: Option<f64>,
    /// Isotropic family only: the distillability verdict.
    pub distillable: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StateOrigin {
    Family { spec: StateSpec },
    File { path: String },
}

fn fmt_opt(v: Option<f64>) -> String {
    match v {
        Some(x) => format!("{x:.12}"),
        None => "n/a".into(),
    }
}

fn usefulness_str(u: Usefulness) -> &'static str {
    match u {
        Usefulness::Yes => "yes",
        Usefulness::No => "no",
        Usefulness::Undetermined => "undetermined",
    }
}

fn source_str(s: FidelitySource) -> &'static str {
    match s {
        FidelitySource::Exact => "exact closed form",
        FidelitySource::NumericLowerEstimate => "numeric lower estimate",
        FidelitySource::UpperBound => "upper bound only",
    }
}

pub fn render_text(doc: &ReportDoc) -> String {
    let r = &doc.report;
    let mut out = String::new();
    let mut line = |k: &str, v: String| {
        out.push_str(&format!("{k:<28}{v}\n"));
    };

    match &doc.state {
        StateOrigin::Family { spec } => line("state:", format!("{spec:?}")),
        StateOrigin::File { path } => line("state:", format!("matrix file {path}")),
    }
    line("local dimension d:", format!("{}", r.dim));
    line("singlet fraction f:", format!("{:.12}", r.singlet_fraction));
    line(
        "upper bound (class sums):",
        format!(
            "{:.12}   [T1 {:.6} T2 {:.6} T3 {:.6} T4 {:.6}]",
            r.thm1_bound,
            r.thm1_breakdown.t1,
            r.thm1_breakdown.t2,
            r.thm1_breakdown.t3,
            r.thm1_breakdown.t4
        ),
    );
    line("upper bound (2Σ|t_ij|):", format!("{:.12}", r.cor1_bound));
    line("upper bound (Ky-Fan):", format!("{:.12}", r.prior_bound));
    line("exact FEF (diagonal T):", fmt_opt(r.exact_thm3));
    line("two-qubit closed form:", fmt_opt(r.two_qubit_exact));
    line("numeric FEF (lower est.):", fmt_opt(r.numeric_fef));
    if let Some(opt) = &doc.optimization {
        line(
            "optimizer:",
            format!(
                "{} restarts (seed {}), {} agreeing, {} sweeps, converged: {}",
                opt.restarts, opt.seed, opt.restarts_agreeing, opt.iterations_total, opt.converged
            ),
        );
    }
    line(
        "FEF bracket:",
        format!(
            "[{:.12}, {:.12}]  gap {:.3e}",
            r.best_lower(),
            r.best_upper(),
            r.best_upper() - r.best_lower()
        ),
    );
    line("FEF determined:", fmt_opt(doc.fef_known));
    line(
        "optimal fidelity f_max:",
        format!("{:.12}   ({})", r.optimal_fidelity, source_str(r.fidelity_source)),
    );
    line(
        "useful for teleportation:",
        usefulness_str(r.useful_for_teleportation).into(),
    );
    if let Some(dist) = doc.distillable {
        line("distillable (isotropic):", format!("{dist}"));
    }
    out
}

pub fn render_json(doc: &ReportDoc) -> serde_json::Result<String> {
    let mut s = serde_json::to_string_pretty(doc)?;
    s.push('\n');
    Ok(s)
}
