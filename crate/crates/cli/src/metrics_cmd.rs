//! Prints the per-scheme cost metrics for a budget.

use codedmm_core::SchemeConfig;

use crate::config::ExperimentConfig;

pub fn run_metrics(
    cfg: &ExperimentConfig,
    budget: usize,
    out: &mut impl std::io::Write,
) -> Result<(), String> {
    let plan = cfg.plan()?;
    let params = cfg.scheme_params();
    let schemes = cfg.schemes()?;
    if schemes.is_empty() {
        return Err("metrics needs a non-empty `schemes` list".into());
    }
    writeln!(
        out,
        "{:<12} {:>4} {:>4} {:>5} {:>6} {:>10} {:>12} {:>14}",
        "scheme", "m_a", "m_b", "eta", "r_th", "c_part", "c_max", "c_wasted"
    )
    .map_err(|e| e.to_string())?;
    for scheme in schemes {
        match SchemeConfig::from_budget(scheme, plan, cfg.n_workers, budget, params) {
            Ok(sc) => {
                let m = sc.metrics();
                let to_f = |r: num_rational::Ratio<i64>| *r.numer() as f64 / *r.denom() as f64;
                writeln!(
                    out,
                    "{:<12} {:>4} {:>4} {:>5} {:>6} {:>10} {:>12} {:>14}",
                    scheme.name(),
                    sc.workers[0].0,
                    sc.workers[0].1,
                    sc.eta(0),
                    sc.recovery_threshold(),
                    format!("{}", m.c_part),
                    format!("{} ({:.4})", m.c_max[0], to_f(m.c_max[0])),
                    format!("{} ({:.4})", m.c_wasted, to_f(m.c_wasted)),
                )
                .map_err(|e| e.to_string())?;
            }
            Err(e) => {
                writeln!(out, "{:<12} infeasible at budget {budget}: {e}", scheme.name())
                    .map_err(|e| e.to_string())?;
            }
        }
    }
    Ok(())
}
