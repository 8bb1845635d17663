//! Event-driven straggler simulation under a shifted-exponential speed model,
//! and Monte-Carlo estimation of completion time and wasted work.
//!
//! A worker's per-computation duration is `nu + E` with `E ~ Exp(lambda)`,
//! drawn once per worker per trial, so the time of its `p`-th completion is
//! `p * (nu + E)` and has CDF `F(p, t) = 1 - exp(-lambda * (t/p - nu))` for
//! `t >= p * nu`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::interp::{select_responses_nzo, select_responses_zzo};
use crate::peel::GridState;
use crate::scheme::{Scheme, SchemeConfig};

/// Shifted-exponential per-computation speed model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpeedModel {
    /// Minimum duration of one computation.
    pub nu: f64,
    /// Rate of the exponential tail; smaller means more heterogeneous workers.
    pub lambda: f64,
}

impl SpeedModel {
    pub fn new(nu: f64, lambda: f64) -> Result<Self> {
        if !(nu > 0.0) || !(lambda > 0.0) {
            return Err(Error::InvalidConfig {
                scheme: "speed model",
                reason: format!("nu and lambda must be positive, got nu={nu}, lambda={lambda}"),
            });
        }
        Ok(SpeedModel { nu, lambda })
    }

    /// Degenerate model where every computation takes exactly `nu`.
    pub fn deterministic(nu: f64) -> Self {
        SpeedModel {
            nu,
            lambda: f64::INFINITY,
        }
    }

    /// `F(p, t)`: probability that a worker finishes at least `p`
    /// computations by time `t`.
    pub fn completion_cdf(&self, p: usize, t: f64) -> f64 {
        let p = p as f64;
        if t < p * self.nu {
            0.0
        } else if self.lambda.is_finite() {
            1.0 - (-self.lambda * (t / p - self.nu)).exp()
        } else {
            1.0
        }
    }
}

/// Draws the per-computation duration `nu + E`, one exponential per worker
/// per trial.
pub fn sample_worker_speed<R: Rng + ?Sized>(model: &SpeedModel, rng: &mut R) -> f64 {
    let tail = if model.lambda.is_finite() {
        Exp::new(model.lambda).expect("validated rate").sample(rng)
    } else {
        0.0
    };
    model.nu + tail
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SimOptions {
    /// Stop zig-zag schemes as soon as the received counts admit a full
    /// selection, instead of waiting for the worst-case threshold.
    pub optimistic_stop: bool,
}

/// Outcome of a single simulated job.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimOutcome {
    pub completion_time: f64,
    /// Responses the master had received when it stopped.
    pub arrivals: usize,
    /// Computations used for decoding (always `K*L`).
    pub used: usize,
    /// Received but unused computations.
    pub discarded: usize,
    /// Workers mid-computation when the stop signal fired.
    pub ongoing_at_stop: usize,
    /// `(discarded + ongoing) / (K*L)`.
    pub realized_wasted_fraction: f64,
}

/// Online stop rule shared by the simulator and the executor.
pub(crate) enum StopRule {
    Count {
        target: usize,
        arrivals: usize,
    },
    Peel {
        grid: GridState,
        n_b: usize,
        m_a: usize,
        m_b: usize,
    },
    Adaptive {
        mu: usize,
        lane: usize,
        kl: usize,
        counts: Vec<usize>,
        arrivals: usize,
        zigzag_vertical: bool,
    },
}

impl StopRule {
    /// Builds the stop rule and performs the capacity feasibility checks.
    pub(crate) fn new(cfg: &SchemeConfig, optimistic: bool) -> Result<StopRule> {
        let kl = cfg.plan.total_products();
        let capacity = cfg.total_capacity();
        let require = |needed: usize| {
            if capacity < needed {
                Err(Error::InsufficientCapacity {
                    capacity,
                    required: needed,
                })
            } else {
                Ok(())
            }
        };
        match cfg.scheme {
            Scheme::Upc | Scheme::UpcPc | Scheme::BpcVo | Scheme::BpcHo | Scheme::LowerBound => {
                require(kl)?;
                Ok(StopRule::Count {
                    target: kl,
                    arrivals: 0,
                })
            }
            Scheme::BProc => {
                let (n_a, n_b) = cfg.params.grid.unwrap();
                let (m_a, m_b) = cfg.workers[0];
                Ok(StopRule::Peel {
                    grid: GridState::new(n_a * m_a, n_b * m_b, cfg.plan.k, cfg.plan.l),
                    n_b,
                    m_a,
                    m_b,
                })
            }
            Scheme::BpcNzo | Scheme::BpcZzo => {
                let vertical = cfg.scheme == Scheme::BpcNzo;
                let (mu, lane) = if vertical {
                    (cfg.params.mu_b.unwrap(), cfg.plan.k)
                } else {
                    (cfg.params.mu_a.unwrap(), cfg.plan.l)
                };
                let exhaustion_ok = || {
                    let etas = cfg.etas();
                    let sel = if vertical {
                        select_responses_nzo(&etas, kl, mu, lane)
                    } else {
                        select_responses_zzo(&etas, kl, mu, lane)
                    };
                    sel.is_ok()
                };
                if optimistic {
                    require(kl)?;
                    if !exhaustion_ok() {
                        return Err(Error::InsufficientCapacity {
                            capacity,
                            required: kl,
                        });
                    }
                    Ok(StopRule::Adaptive {
                        mu,
                        lane,
                        kl,
                        counts: vec![0; cfg.n_workers()],
                        arrivals: 0,
                        zigzag_vertical: vertical,
                    })
                } else {
                    let rth = cfg.recovery_threshold();
                    if capacity >= rth {
                        Ok(StopRule::Count {
                            target: rth,
                            arrivals: 0,
                        })
                    } else if capacity >= kl && exhaustion_ok() {
                        // Workers cannot reach the worst-case threshold, but
                        // exhausting them is provably decodable; stop there.
                        Ok(StopRule::Count {
                            target: capacity,
                            arrivals: 0,
                        })
                    } else {
                        Err(Error::InsufficientCapacity {
                            capacity,
                            required: rth,
                        })
                    }
                }
            }
        }
    }

    /// Feeds one arrival; true when the master can stop.
    pub(crate) fn feed(&mut self, worker: usize, cell: (usize, usize)) -> bool {
        match self {
            StopRule::Count { target, arrivals } => {
                *arrivals += 1;
                arrivals == target
            }
            StopRule::Peel {
                grid,
                n_b,
                m_a,
                m_b,
            } => {
                let col = (worker / *n_b) * *m_a + cell.0;
                let row = (worker % *n_b) * *m_b + cell.1;
                grid.add_received(col, row);
                grid.decodable()
            }
            StopRule::Adaptive {
                mu,
                lane,
                kl,
                counts,
                arrivals,
                zigzag_vertical,
            } => {
                counts[worker] += 1;
                *arrivals += 1;
                if *arrivals < *kl {
                    return false;
                }
                let sel = if *zigzag_vertical {
                    select_responses_nzo(counts, *kl, *mu, *lane)
                } else {
                    select_responses_zzo(counts, *kl, *mu, *lane)
                };
                sel.is_ok()
            }
        }
    }

    fn needs_cells(&self) -> bool {
        matches!(self, StopRule::Peel { .. })
    }
}

struct Arrival {
    t: f64,
    worker: usize,
    seq: usize,
}

impl PartialEq for Arrival {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Arrival {}
impl PartialOrd for Arrival {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Arrival {
    fn cmp(&self, other: &Self) -> Ordering {
        // Reversed: BinaryHeap is a max-heap, we want earliest first.
        other
            .t
            .total_cmp(&self.t)
            .then_with(|| other.worker.cmp(&self.worker))
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

/// Runs one trial. Trials are independent: trial `t` of `master_seed` uses
/// stream `t` of a counter RNG, so any subset can be reproduced in isolation.
pub fn run_trial(
    cfg: &SchemeConfig,
    model: &SpeedModel,
    master_seed: u64,
    trial: u64,
    opts: &SimOptions,
) -> Result<SimOutcome> {
    let mut rule = StopRule::new(cfg, opts.optimistic_stop)?;
    let n = cfg.n_workers();
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(trial);
    let durations: Vec<f64> = (0..n)
        .map(|_| sample_worker_speed(model, &mut rng))
        .collect();
    let etas = cfg.etas();
    let orders: Vec<Vec<(usize, usize)>> = if rule.needs_cells() {
        (0..n).map(|w| cfg.computation_order(w, &mut rng)).collect()
    } else {
        Vec::new()
    };

    let kl = cfg.plan.total_products();
    let mut heap: BinaryHeap<Arrival> = (0..n)
        .filter(|&w| etas[w] > 0)
        .map(|w| Arrival {
            t: durations[w],
            worker: w,
            seq: 0,
        })
        .collect();
    let mut popped = vec![0usize; n];
    let mut arrivals = 0usize;

    while let Some(a) = heap.pop() {
        popped[a.worker] += 1;
        arrivals += 1;
        let cell = if orders.is_empty() {
            (0, 0)
        } else {
            orders[a.worker][a.seq]
        };
        if rule.feed(a.worker, cell) {
            let ongoing = (0..n)
                .filter(|&w| w != a.worker && popped[w] < etas[w])
                .count();
            let discarded = arrivals - kl;
            return Ok(SimOutcome {
                completion_time: a.t,
                arrivals,
                used: kl,
                discarded,
                ongoing_at_stop: ongoing,
                realized_wasted_fraction: (discarded + ongoing) as f64 / kl as f64,
            });
        }
        if a.seq + 1 < etas[a.worker] {
            heap.push(Arrival {
                t: (a.seq as f64 + 2.0) * durations[a.worker],
                worker: a.worker,
                seq: a.seq + 1,
            });
        }
    }
    // Capacity checks make this unreachable for valid configs.
    Err(Error::InsufficientCapacity {
        capacity: cfg.total_capacity(),
        required: kl,
    })
}

/// Monte-Carlo aggregate over independent trials.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloSummary {
    pub trials: usize,
    pub mean_time: f64,
    /// 95% normal confidence half-width of the mean time.
    pub ci_half_width: f64,
    pub mean_wasted: f64,
    pub mean_arrivals: f64,
}

pub fn monte_carlo(
    cfg: &SchemeConfig,
    model: &SpeedModel,
    trials: usize,
    seed: u64,
    opts: &SimOptions,
) -> Result<MonteCarloSummary> {
    if trials == 0 {
        return Err(Error::InvalidConfig {
            scheme: "monte carlo",
            reason: "trials must be at least 1".into(),
        });
    }
    let outcomes: Vec<SimOutcome> = (0..trials as u64)
        .into_par_iter()
        .map(|t| run_trial(cfg, model, seed, t, opts))
        .collect::<Result<Vec<_>>>()?;

    let n = trials as f64;
    let mean_time = outcomes.iter().map(|o| o.completion_time).sum::<f64>() / n;
    let var = outcomes
        .iter()
        .map(|o| (o.completion_time - mean_time).powi(2))
        .sum::<f64>()
        / (n - 1.0).max(1.0);
    let mean_wasted = outcomes
        .iter()
        .map(|o| o.realized_wasted_fraction)
        .sum::<f64>()
        / n;
    let mean_arrivals = outcomes.iter().map(|o| o.arrivals as f64).sum::<f64>() / n;
    Ok(MonteCarloSummary {
        trials,
        mean_time,
        ci_half_width: 1.96 * (var / n).sqrt(),
        mean_wasted,
        mean_arrivals,
    })
}
