//! Coding schemes: system constraints, storage allocation, recovery
//! thresholds and the cost metrics used to compare them.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::order;
use crate::plan::PartitionPlan;

/// The supported coding schemes. `LowerBound` is a pseudo-scheme used by the
/// simulator as an idealized baseline: every computation is useful, storage
/// splits freely, decoding succeeds at exactly `K*L` arrivals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    Upc,
    UpcPc,
    BProc,
    BpcVo,
    BpcHo,
    BpcNzo,
    BpcZzo,
    LowerBound,
}

impl Scheme {
    pub fn name(&self) -> &'static str {
        match self {
            Scheme::Upc => "upc",
            Scheme::UpcPc => "upc-pc",
            Scheme::BProc => "b-proc",
            Scheme::BpcVo => "bpc-vo",
            Scheme::BpcHo => "bpc-ho",
            Scheme::BpcNzo => "bpc-nzo",
            Scheme::BpcZzo => "bpc-zzo",
            Scheme::LowerBound => "lower-bound",
        }
    }

    pub fn all() -> [Scheme; 8] {
        [
            Scheme::Upc,
            Scheme::UpcPc,
            Scheme::BProc,
            Scheme::BpcVo,
            Scheme::BpcHo,
            Scheme::BpcNzo,
            Scheme::BpcZzo,
            Scheme::LowerBound,
        ]
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "upc" => Ok(Scheme::Upc),
            "upc-pc" | "upcpc" => Ok(Scheme::UpcPc),
            "b-proc" | "bproc" => Ok(Scheme::BProc),
            "bpc-vo" | "vo" => Ok(Scheme::BpcVo),
            "bpc-ho" | "ho" => Ok(Scheme::BpcHo),
            "bpc-nzo" | "nzo" => Ok(Scheme::BpcNzo),
            "bpc-zzo" | "zzo" => Ok(Scheme::BpcZzo),
            "lower-bound" | "lowerbound" | "lb" => Ok(Scheme::LowerBound),
            other => Err(Error::InvalidConfig {
                scheme: "scheme",
                reason: format!("unknown scheme name {other:?}"),
            }),
        }
    }
}

/// Scheme-specific shape parameters.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SchemeParams {
    /// Vertical band width for the Z-zig-zag order (divides `K`).
    pub mu_a: Option<usize>,
    /// Horizontal band height for the N-zig-zag order (divides `L`).
    pub mu_b: Option<usize>,
    /// Worker-grid factorization `(n_a, n_b)` with `N = n_a * n_b` (grid coding).
    pub grid: Option<(usize, usize)>,
}

/// A fully specified experiment: scheme, geometry and per-worker storage.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemeConfig {
    pub scheme: Scheme,
    pub plan: PartitionPlan,
    /// `(m_a, m_b)` per worker: stored coded partitions of A and of B.
    pub workers: Vec<(usize, usize)>,
    pub params: SchemeParams,
}

fn constraint_ok(
    scheme: Scheme,
    plan: &PartitionPlan,
    params: &SchemeParams,
    m_a: usize,
    m_b: usize,
) -> bool {
    let (k, l) = (plan.k, plan.l);
    if m_a == 0 || m_b == 0 || m_a > k || m_b > l {
        return false;
    }
    match scheme {
        Scheme::Upc => m_a == 1 && m_b == 1,
        Scheme::UpcPc => m_a == m_b && m_a <= k.min(l),
        Scheme::BProc => match params.grid {
            Some((n_a, n_b)) => k <= n_a * m_a && l <= n_b * m_b,
            None => false,
        },
        Scheme::BpcVo => m_a == 1 || m_b == l,
        Scheme::BpcHo => m_b == 1 || m_a == k,
        Scheme::BpcNzo => match params.mu_b {
            Some(mu) if mu >= 1 && l % mu == 0 => {
                (m_b % mu == 0 && m_a == k) || (m_b == mu && m_a <= k) || (m_a == 1 && m_b <= mu)
            }
            _ => false,
        },
        Scheme::BpcZzo => match params.mu_a {
            Some(mu) if mu >= 1 && k % mu == 0 => {
                (m_a % mu == 0 && m_b == l) || (m_a == mu && m_b <= l) || (m_b == 1 && m_a <= mu)
            }
            _ => false,
        },
        Scheme::LowerBound => true,
    }
}

impl SchemeConfig {
    /// A config where every worker stores the same `(m_a, m_b)` pair.
    pub fn homogeneous(
        scheme: Scheme,
        plan: PartitionPlan,
        n_workers: usize,
        m_a: usize,
        m_b: usize,
        params: SchemeParams,
    ) -> Result<Self> {
        let cfg = SchemeConfig {
            scheme,
            plan,
            workers: vec![(m_a, m_b); n_workers],
            params,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// A homogeneous config with the storage split chosen by [`allocate_storage`].
    pub fn from_budget(
        scheme: Scheme,
        plan: PartitionPlan,
        n_workers: usize,
        budget: usize,
        params: SchemeParams,
    ) -> Result<Self> {
        let (m_a, m_b) = allocate_storage(scheme, &plan, &params, budget)?;
        Self::homogeneous(scheme, plan, n_workers, m_a, m_b, params)
    }

    pub fn n_workers(&self) -> usize {
        self.workers.len()
    }

    pub fn validate(&self) -> Result<()> {
        let invalid = |reason: String| Error::InvalidConfig {
            scheme: self.scheme.name(),
            reason,
        };
        if self.workers.is_empty() {
            return Err(invalid("no workers".into()));
        }
        let (k, l) = (self.plan.k, self.plan.l);
        match self.scheme {
            Scheme::Upc => {
                if self.n_workers() < k * l {
                    return Err(invalid(format!(
                        "needs at least K*L = {} workers, got {}",
                        k * l,
                        self.n_workers()
                    )));
                }
            }
            Scheme::BProc => {
                let (n_a, n_b) = self.params.grid.ok_or_else(|| {
                    invalid("grid factors (n_a, n_b) are required".into())
                })?;
                if n_a * n_b != self.n_workers() {
                    return Err(invalid(format!(
                        "n_a * n_b = {} does not match N = {}",
                        n_a * n_b,
                        self.n_workers()
                    )));
                }
                if self.workers.windows(2).any(|w| w[0] != w[1]) {
                    return Err(invalid("storage must be homogeneous".into()));
                }
            }
            Scheme::BpcNzo => {
                match self.params.mu_b {
                    Some(mu) if mu >= 1 && l % mu == 0 => {}
                    _ => return Err(invalid("mu_b must be set and divide L".into())),
                }
            }
            Scheme::BpcZzo => {
                match self.params.mu_a {
                    Some(mu) if mu >= 1 && k % mu == 0 => {}
                    _ => return Err(invalid("mu_a must be set and divide K".into())),
                }
            }
            _ => {}
        }
        for (i, &(m_a, m_b)) in self.workers.iter().enumerate() {
            if !constraint_ok(self.scheme, &self.plan, &self.params, m_a, m_b) {
                return Err(invalid(format!(
                    "worker {i} storage ({m_a}, {m_b}) violates the scheme constraints"
                )));
            }
        }
        Ok(())
    }

    /// Maximum number of computations worker `i` can contribute.
    pub fn eta(&self, worker: usize) -> usize {
        let (m_a, m_b) = self.workers[worker];
        match self.scheme {
            Scheme::Upc => 1,
            Scheme::UpcPc => m_a,
            Scheme::BProc | Scheme::LowerBound => m_a * m_b,
            Scheme::BpcVo => order::vertical_order(self.plan.k, self.plan.l, m_a, m_b).len(),
            Scheme::BpcHo => order::horizontal_order(self.plan.k, self.plan.l, m_a, m_b).len(),
            Scheme::BpcNzo => {
                order::n_zigzag_order(self.plan.k, self.plan.l, self.params.mu_b.unwrap(), m_a, m_b)
                    .len()
            }
            Scheme::BpcZzo => {
                order::z_zigzag_order(self.plan.k, self.plan.l, self.params.mu_a.unwrap(), m_a, m_b)
                    .len()
            }
        }
    }

    pub fn etas(&self) -> Vec<usize> {
        (0..self.n_workers()).map(|i| self.eta(i)).collect()
    }

    pub fn total_capacity(&self) -> usize {
        self.etas().iter().sum()
    }

    /// The ordered list of cells worker `i` will execute. Grid coding uses a
    /// uniform random order over the worker's rectangle, drawn from `rng`;
    /// the other schemes ignore `rng`.
    pub fn computation_order<R: Rng + ?Sized>(
        &self,
        worker: usize,
        rng: &mut R,
    ) -> Vec<(usize, usize)> {
        let (m_a, m_b) = self.workers[worker];
        let (k, l) = (self.plan.k, self.plan.l);
        match self.scheme {
            Scheme::Upc => vec![(0, 0)],
            Scheme::UpcPc => (0..m_a).map(|j| (j, j)).collect(),
            Scheme::BProc => {
                let mut cells = order::rectangle_cells(m_a, m_b);
                cells.shuffle(rng);
                cells
            }
            Scheme::LowerBound => order::rectangle_cells(m_a, m_b),
            Scheme::BpcVo => order::vertical_order(k, l, m_a, m_b),
            Scheme::BpcHo => order::horizontal_order(k, l, m_a, m_b),
            Scheme::BpcNzo => order::n_zigzag_order(k, l, self.params.mu_b.unwrap(), m_a, m_b),
            Scheme::BpcZzo => order::z_zigzag_order(k, l, self.params.mu_a.unwrap(), m_a, m_b),
        }
    }

    /// Worst-case number of received computations that guarantees decodability.
    pub fn recovery_threshold(&self) -> usize {
        let kl = self.plan.total_products();
        let (k, l) = (self.plan.k, self.plan.l);
        match self.scheme {
            Scheme::Upc | Scheme::UpcPc | Scheme::BpcVo | Scheme::BpcHo | Scheme::LowerBound => kl,
            Scheme::BpcNzo => kl + zigzag_overhead(self.params.mu_b.unwrap(), l),
            Scheme::BpcZzo => kl + zigzag_overhead(self.params.mu_a.unwrap(), k),
            Scheme::BProc => {
                let (n_a, n_b) = self.params.grid.unwrap();
                let (m_a, m_b) = self.workers[0];
                kl + (n_b * m_b - l) * (k - 1) + (n_a * m_a - k) * (l - 1)
            }
        }
    }

    /// Cost metrics in exact rational form.
    pub fn metrics(&self) -> Metrics {
        let k = self.plan.k as i64;
        let l = self.plan.l as i64;
        let c_part = Ratio::new(1, k * l);
        let frac = |m_a: usize, m_b: usize| {
            Ratio::new(m_a as i64, k) * Ratio::new(m_b as i64, l)
        };
        let c_max = self
            .workers
            .iter()
            .map(|&(m_a, m_b)| match self.scheme {
                Scheme::UpcPc => frac(m_a, m_b) / Ratio::from_integer(m_a as i64),
                _ => frac(m_a, m_b),
            })
            .collect();

        // Sum over all but the last worker: their in-flight computations are
        // lost when the stop signal lands.
        let inflight: Ratio<i64> = self
            .workers
            .iter()
            .take(self.n_workers() - 1)
            .map(|&(m_a, m_b)| frac(m_a, m_b) / Ratio::from_integer((m_a * m_b) as i64))
            .sum();

        let c_wasted = match self.scheme {
            Scheme::Upc => {
                let (m_a, m_b) = self.workers[0];
                frac(m_a, m_b) * Ratio::from_integer(self.n_workers() as i64)
                    - Ratio::from_integer(1)
            }
            Scheme::UpcPc => self
                .workers
                .iter()
                .take(self.n_workers() - 1)
                .map(|&(m_a, m_b)| frac(m_a, m_b) / Ratio::from_integer((m_a * m_a) as i64))
                .sum(),
            Scheme::BpcVo | Scheme::BpcHo | Scheme::LowerBound => inflight,
            Scheme::BpcNzo => {
                inflight
                    + Ratio::new(zigzag_overhead(self.params.mu_b.unwrap(), self.plan.l) as i64, k * l)
            }
            Scheme::BpcZzo => {
                inflight
                    + Ratio::new(zigzag_overhead(self.params.mu_a.unwrap(), self.plan.k) as i64, k * l)
            }
            Scheme::BProc => {
                let (n_a, n_b) = self.params.grid.unwrap();
                let (m_a, m_b) = self.workers[0];
                let ma_frac = Ratio::new(m_a as i64, k);
                let mb_frac = Ratio::new(m_b as i64, l);
                let one = Ratio::from_integer(1);
                inflight
                    + (mb_frac * Ratio::from_integer(n_b as i64) - one)
                        * (one - ma_frac / Ratio::from_integer(m_a as i64))
                    + (ma_frac * Ratio::from_integer(n_a as i64) - one)
                        * (one - mb_frac / Ratio::from_integer(m_b as i64))
            }
        };

        Metrics {
            c_part,
            c_max,
            c_wasted,
        }
    }
}

/// `max(0, (mu - 2) * (span / mu - 1))` — extra computations the zig-zag
/// schemes may need beyond `K*L`.
pub fn zigzag_overhead(mu: usize, span: usize) -> usize {
    if mu < 2 {
        return 0;
    }
    (mu - 2) * (span / mu - 1)
}

/// Per-worker and aggregate cost fractions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Metrics {
    /// Fraction of the job done by a single partial product: `1 / (K*L)`.
    pub c_part: Ratio<i64>,
    /// Maximum useful work fraction per worker.
    pub c_max: Vec<Ratio<i64>>,
    /// Worst-case wasted work fraction.
    pub c_wasted: Ratio<i64>,
}

/// Picks the per-worker storage split `(m_a, m_b)` that maximizes the number
/// of computations the worker can supply, subject to the scheme constraints
/// and a budget expressed as "rows of A plus columns of B" the worker can
/// hold.
///
/// Ties are broken toward the larger `m_a + m_b`, then toward larger `m_b`
/// for vertical-leaning schemes and larger `m_a` for horizontal-leaning ones
/// (larger `m_b` for the rest).
pub fn allocate_storage(
    scheme: Scheme,
    plan: &PartitionPlan,
    params: &SchemeParams,
    budget: usize,
) -> Result<(usize, usize)> {
    let a_unit = plan.a_block_rows();
    let b_unit = plan.b_block_cols();
    let prefers_m_a = matches!(scheme, Scheme::BpcHo | Scheme::BpcZzo);
    let probe = SchemeConfig {
        scheme,
        plan: *plan,
        workers: vec![(1, 1)],
        params: *params,
    };

    let mut best: Option<((usize, usize), (usize, usize, usize))> = None;
    for m_a in 1..=plan.k {
        for m_b in 1..=plan.l {
            if m_a * a_unit + m_b * b_unit > budget {
                continue;
            }
            if !constraint_ok(scheme, plan, params, m_a, m_b) {
                continue;
            }
            let mut cand = probe.clone();
            cand.workers[0] = (m_a, m_b);
            let eta = cand.eta(0);
            let rank = (eta, m_a + m_b, if prefers_m_a { m_a } else { m_b });
            if best.as_ref().map_or(true, |(_, r)| rank > *r) {
                best = Some(((m_a, m_b), rank));
            }
        }
    }
    best.map(|(pair, _)| pair).ok_or_else(|| Error::InfeasibleBudget {
        scheme: scheme.name(),
        budget,
        reason: "no storage split satisfies the scheme constraints".into(),
    })
}
