//! One real end-to-end job on small matrices, with a human-readable report.

use codedmm_core::{run_job, DelayModel, Error, Mat, RunOptions, SchemeConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::ExperimentConfig;

pub enum DemoOutcome {
    /// Decode error below the gate; exit 0.
    Ok,
    /// Decode failed (singular system or shortfall); exit 1.
    DecodeFailed(String),
    /// Configuration infeasible at this budget; exit 2.
    Infeasible(String),
}

pub fn run_demo(
    cfg: &ExperimentConfig,
    seed: u64,
    force_duplicate_points: bool,
    out: &mut impl std::io::Write,
) -> Result<DemoOutcome, String> {
    let exec = cfg
        .exec
        .as_ref()
        .ok_or("demo-exec needs an [exec] section in the config")?;
    let plan = cfg.plan()?;
    if plan.k * plan.l > 64 {
        return Err(format!(
            "demo guard: K*L = {} exceeds 64; use the simulator for large grids",
            plan.k * plan.l
        ));
    }
    let scheme = exec.scheme.parse().map_err(|e: Error| e.to_string())?;
    let sc = match SchemeConfig::from_budget(
        scheme,
        plan,
        cfg.n_workers,
        exec.budget,
        cfg.scheme_params(),
    ) {
        Ok(sc) => sc,
        Err(e) => return Ok(DemoOutcome::Infeasible(e.to_string())),
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xD5);
    let a = Mat::from_fn(plan.r, plan.s, |_, _| rng.gen_range(-1.0..1.0));
    let b = Mat::from_fn(plan.s, plan.c, |_, _| rng.gen_range(-1.0..1.0));

    let opts = RunOptions {
        seed,
        parallelism: exec.parallelism,
        delays: DelayModel::Shifted(cfg.speed_model()?),
        time_scale: exec.time_scale,
        optimistic_stop: cfg.sim.optimistic_stop,
        force_duplicate_points,
    };

    let w = |line: String| -> Result<(), String> {
        writeln!(out, "{line}").map_err(|e| e.to_string())
    };

    match run_job(&a, &b, &sc, &opts) {
        Ok((product, report)) => {
            let direct = &a * &b;
            let rel = (&product - &direct).norm() / direct.norm();
            w(format!("scheme            {}", report.scheme))?;
            w(format!("plan              K={} L={} ({}x{} by {}x{})", plan.k, plan.l, plan.r, plan.s, plan.s, plan.c))?;
            w(format!("storage           m_a={} m_b={} (eta {})", sc.workers[0].0, sc.workers[0].1, sc.eta(0)))?;
            w(format!("recovery          {} of {} partial products", sc.recovery_threshold(), plan.k * plan.l))?;
            w(format!("completion time   {:.4}", report.completion_time))?;
            w(format!("arrivals          {} (used {}, discarded {}, ongoing {})", report.arrivals, report.used, report.discarded, report.ongoing_at_stop))?;
            w(format!("wasted fraction   {:.4}", report.realized_wasted_fraction))?;
            w(format!("decode condition  {:.3e} (rel sv {:.3e}, attempts {})", report.decode_condition, report.decode_rel_smallest_sv, report.attempts))?;
            w(format!("decode rel error  {rel:.3e} vs direct product"))?;
            w("worker  assigned  sent  collected  used  cut-by-stop".into())?;
            for wr in &report.workers {
                w(format!(
                    "{:6}  {:8}  {:4}  {:9}  {:4}  {}",
                    wr.worker, wr.assigned, wr.sent, wr.collected, wr.used,
                    if wr.stopped_by_flag { "yes" } else { "no" }
                ))?;
            }
            if rel < 1e-6 {
                Ok(DemoOutcome::Ok)
            } else {
                Ok(DemoOutcome::DecodeFailed(format!(
                    "decode error {rel:.3e} above 1e-6"
                )))
            }
        }
        Err(e @ (Error::SingularSystem { .. } | Error::DuplicateRow { .. } | Error::SelectionShortfall { .. })) => {
            Ok(DemoOutcome::DecodeFailed(e.to_string()))
        }
        Err(e @ (Error::InsufficientCapacity { .. } | Error::InvalidConfig { .. })) => {
            Ok(DemoOutcome::Infeasible(e.to_string()))
        }
        Err(e) => Err(e.to_string()),
    }
}
