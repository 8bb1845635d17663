//! Acceptance suite: one test per acceptance criterion. Each prints a
//! `[PASS] criterion N` line with its measured numbers (visible with
//! `--nocapture`); failures carry the offending cases in the panic message.

use codedmm_core::order::{
    horizontal_order, n_zigzag_order, n_zigzag_score, rectangle_cells, vertical_order,
    z_zigzag_order, z_zigzag_score,
};
use codedmm_core::scheme::{SchemeParams, zigzag_overhead};
use codedmm_core::{
    check_regularity, monte_carlo, run_job, select_responses_nzo, select_responses_zzo,
    GridState, Mat, MonteCarloSummary, PartitionPlan, RunOptions, Scheme, SchemeConfig,
    SimOptions, SpeedModel,
};
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

const SV_GATE: f64 = 1e-12;

fn random_matrices(r: usize, s: usize, c: usize, seed: u64) -> (Mat, Mat) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (
        Mat::from_fn(r, s, |_, _| rng.gen_range(-1.0..1.0)),
        Mat::from_fn(s, c, |_, _| rng.gen_range(-1.0..1.0)),
    )
}

/// A runnable configuration of each scheme for a 30x12 by 12x30 product.
fn config_for(scheme: Scheme, k: usize, l: usize) -> SchemeConfig {
    let plan = PartitionPlan::new(30, 12, 30, k, l).unwrap();
    let kl = k * l;
    let (n, m_a, m_b, params) = match scheme {
        Scheme::Upc => (kl + 2, 1, 1, SchemeParams::default()),
        Scheme::UpcPc => {
            let m = k.min(l);
            (kl.div_ceil(m) + 1, m, m, SchemeParams::default())
        }
        Scheme::BProc => (
            6,
            k.div_ceil(3),
            l.div_ceil(2),
            SchemeParams { grid: Some((3, 2)), ..Default::default() },
        ),
        Scheme::BpcVo => (k + 2, 1, l, SchemeParams::default()),
        Scheme::BpcHo => (l + 2, k, 1, SchemeParams::default()),
        Scheme::BpcNzo => {
            let mu = if l == 6 { 3 } else { l };
            let eta = k * mu;
            let need = kl + zigzag_overhead(mu, l);
            (
                need.div_ceil(eta) + 1,
                k,
                mu,
                SchemeParams { mu_b: Some(mu), ..Default::default() },
            )
        }
        Scheme::BpcZzo => {
            let mu = if k == 6 { 3 } else { k };
            let eta = l * mu;
            let need = kl + zigzag_overhead(mu, k);
            (
                need.div_ceil(eta) + 1,
                mu,
                l,
                SchemeParams { mu_a: Some(mu), ..Default::default() },
            )
        }
        Scheme::LowerBound => unreachable!("not executable"),
    };
    SchemeConfig::homogeneous(scheme, plan, n, m_a, m_b, params).unwrap()
}

/// Criterion 1: every scheme decodes random 30x12 by 12x30 products exactly
/// (relative Frobenius error < 1e-6) across partition grids and 100 seeds.
#[test]
fn criterion_1_end_to_end_decode() {
    let schemes = [
        Scheme::Upc,
        Scheme::UpcPc,
        Scheme::BProc,
        Scheme::BpcVo,
        Scheme::BpcHo,
        Scheme::BpcNzo,
        Scheme::BpcZzo,
    ];
    // K must divide 30 rows of A and L the 30 columns of B, so of the target
    // grid values {2, 3, 4, 6} the usable ones are {2, 3, 6}.
    let sizes: Vec<(usize, usize)> = [2usize, 3, 6]
        .iter()
        .flat_map(|&k| [2usize, 3, 6].iter().map(move |&l| (k, l)))
        .collect();

    let mut failures = Vec::new();
    for &scheme in &schemes {
        for &(k, l) in &sizes {
            let cfg = config_for(scheme, k, l);
            let worst = (0..100u64)
                .into_par_iter()
                .map(|seed| {
                    let (a, b) = random_matrices(30, 12, 30, 1000 + seed);
                    let opts = RunOptions { seed, ..Default::default() };
                    match run_job(&a, &b, &cfg, &opts) {
                        Ok((product, _)) => {
                            let direct = &a * &b;
                            (product - &direct).norm() / direct.norm()
                        }
                        Err(e) => {
                            if seed < 2 {
                                eprintln!("  {scheme} K={k} L={l} seed={seed}: {e}");
                            }
                            f64::INFINITY
                        }
                    }
                })
                .reduce(|| 0.0, f64::max);
            let line = format!("{scheme} K={k} L={l}: worst rel err {worst:.3e}");
            if worst < 1e-6 {
                println!("  ok   {line}");
            } else {
                println!("  FAIL {line}");
                failures.push(line);
            }
        }
    }
    assert!(
        failures.is_empty(),
        "criterion 1 failures:\n{}",
        failures.join("\n")
    );
    println!("[PASS] criterion 1 — end-to-end decode, all schemes, 100 seeds each");
}

/// Random order-conforming response profile: worker storage pairs drawn from
/// `pairs`, each delivering a prefix of its computation order, trimmed to
/// exactly `total` responses.
fn conforming_profile(
    pairs: &[(usize, usize)],
    order_of: impl Fn(usize, usize) -> Vec<(usize, usize)>,
    total: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<Vec<(usize, usize)>> {
    let mut sets = Vec::new();
    let mut remaining = total;
    while remaining > 0 {
        let &(m_a, m_b) = &pairs[rng.gen_range(0..pairs.len())];
        let order = order_of(m_a, m_b);
        let take = rng.gen_range(1..=order.len()).min(remaining);
        sets.push(order[..take].to_vec());
        remaining -= take;
    }
    sets
}

/// Criterion 2: for the plain column/row orders, any K*L order-conforming
/// responses give a nonsingular system for every random point draw.
#[test]
fn criterion_2_any_kl_conforming_responses_decode() {
    let mut worst = f64::INFINITY;
    for &(k, l) in &[(4usize, 4usize), (6, 6)] {
        for vertical in [true, false] {
            let pairs: Vec<(usize, usize)> = if vertical {
                (1..=l).map(|m_b| (1, m_b)).chain((1..=k).map(|m_a| (m_a, l))).collect()
            } else {
                (1..=k).map(|m_a| (m_a, 1)).chain((1..=l).map(|m_b| (k, m_b))).collect()
            };
            let mut rng = ChaCha8Rng::seed_from_u64(0xC2 + k as u64);
            let profiles: Vec<Vec<Vec<(usize, usize)>>> = (0..200)
                .map(|_| {
                    conforming_profile(
                        &pairs,
                        |m_a, m_b| {
                            if vertical {
                                vertical_order(k, l, m_a, m_b)
                            } else {
                                horizontal_order(k, l, m_a, m_b)
                            }
                        },
                        k * l,
                        &mut rng,
                    )
                })
                .collect();
            let results: Vec<(f64, f64)> = profiles
                .par_iter()
                .enumerate()
                .map(|(i, sets)| {
                    let rep = check_regularity(k, l, sets, 50, 7000 + i as u64).unwrap();
                    (rep.fraction, rep.min_rel_sv)
                })
                .collect();
            let fraction: f64 =
                results.iter().map(|r| r.0).sum::<f64>() / results.len() as f64;
            let min_sv = results.iter().map(|r| r.1).fold(f64::INFINITY, f64::min);
            worst = worst.min(min_sv);
            assert_eq!(
                fraction, 1.0,
                "K={k} L={l} vertical={vertical}: fraction {fraction}, min sv {min_sv:.3e}"
            );
        }
    }
    println!(
        "[PASS] criterion 2 — 200 profiles x 50 draws each at K=L=4 and 6, zero singular systems \
         (worst relative sv {worst:.3e} vs gate {SV_GATE:.0e})"
    );
}

/// Criterion 3: greedy coalescence never discards more than the zig-zag
/// overhead bound, and the retained K*L responses stay nonsingular.
#[test]
fn criterion_3_zigzag_discard_bound() {
    let (k, l, mu) = (6usize, 6usize, 3usize);
    let kl = k * l;
    let bound = zigzag_overhead(mu, l); // (mu - 2) * (L / mu - 1) = 1
    assert_eq!(bound, 1);

    for vertical in [true, false] {
        let pairs: Vec<(usize, usize)> = if vertical {
            // N-zig-zag admissible storage for mu_b = 3.
            vec![(6, 3), (6, 6), (1, 3), (2, 3), (3, 3), (4, 3), (5, 3), (1, 1), (1, 2)]
        } else {
            vec![(3, 6), (6, 6), (3, 1), (3, 2), (3, 3), (3, 4), (3, 5), (1, 1), (2, 1)]
        };
        let order_of = |m_a: usize, m_b: usize| {
            if vertical {
                n_zigzag_order(k, l, mu, m_a, m_b)
            } else {
                z_zigzag_order(k, l, mu, m_a, m_b)
            }
        };
        let mut rng = ChaCha8Rng::seed_from_u64(if vertical { 0xA3 } else { 0xB3 });
        let mut max_discards = 0usize;
        let mut min_sv = f64::INFINITY;
        for profile_idx in 0..1000 {
            let sets = conforming_profile(&pairs, order_of, kl + bound, &mut rng);
            let sizes: Vec<usize> = sets.iter().map(|s| s.len()).collect();
            let sel = if vertical {
                select_responses_nzo(&sizes, kl, mu, k)
            } else {
                select_responses_zzo(&sizes, kl, mu, l)
            }
            .unwrap_or_else(|e| panic!("profile {profile_idx} unselectable: {e} ({sizes:?})"));
            assert_eq!(sel.use_counts.iter().sum::<usize>(), kl);
            assert!(
                sel.discarded <= bound,
                "profile {profile_idx} discarded {} > {bound} (sizes {sizes:?})",
                sel.discarded
            );
            max_discards = max_discards.max(sel.discarded);

            // The retained rows must be nonsingular in every point draw.
            let retained: Vec<Vec<(usize, usize)>> = sets
                .iter()
                .zip(&sel.use_counts)
                .map(|(s, &u)| s[..u].to_vec())
                .filter(|s| !s.is_empty())
                .collect();
            let rep = check_regularity(k, l, &retained, 5, 31_000 + profile_idx as u64).unwrap();
            min_sv = min_sv.min(rep.min_rel_sv);
            assert_eq!(
                rep.fraction, 1.0,
                "profile {profile_idx} ({}) produced a singular retained set, sv {:.3e}",
                if vertical { "nzo" } else { "zzo" },
                rep.min_rel_sv
            );
        }
        println!(
            "  {}: 1000 profiles, max discards {max_discards} <= {bound}, min sv {min_sv:.3e}",
            if vertical { "bpc-nzo" } else { "bpc-zzo" }
        );
    }
    println!("[PASS] criterion 3 — coalescence discards within the overhead bound");
}

/// Criterion 4: the grid worst case decodes exactly at its threshold, and an
/// over-threshold response count can still be insufficient.
#[test]
fn criterion_4_grid_worst_case() {
    // 10x10 product, 5x3 worker grid, 3x5 cells per worker: 15x15 points.
    let (k, l) = (10usize, 10usize);
    let (cols, rows) = (15usize, 15usize);
    let threshold = k * l + (15 - l) * (k - 1) + (15 - k) * (l - 1);
    assert_eq!(threshold, 190);

    let mut cells = Vec::new();
    for col in 0..k - 1 {
        for row in 0..rows {
            cells.push((col, row));
        }
    }
    for row in 0..l - 1 {
        for col in k - 1..cols {
            cells.push((col, row));
        }
    }
    cells.push((k - 1, l - 1));
    assert_eq!(cells.len(), threshold);

    let mut grid = GridState::new(cols, rows, k, l);
    for &(c, r) in &cells[..threshold - 1] {
        grid.add_received(c, r);
    }
    assert!(!grid.decodable(), "189 worst-case responses must not decode");
    let (c, r) = cells[threshold - 1];
    grid.add_received(c, r);
    assert!(grid.decodable(), "the 190th response completes the decode");

    // 110 responses > K*L = 100 arranged badly: seven full columns plus five
    // strays leave the product undecodable.
    let mut grid = GridState::new(cols, rows, k, l);
    for col in 0..7 {
        for row in 0..rows {
            grid.add_received(col, row);
        }
    }
    for row in 0..5 {
        grid.add_received(7, row);
    }
    assert_eq!(grid.received(), 110);
    assert!(!grid.decodable());

    println!("[PASS] criterion 4 — grid worst case flips at exactly {threshold}; 110-response example stays undecodable");
}

fn counting_form_c_wasted(cfg: &SchemeConfig) -> Ratio<i64> {
    // Independent derivation: waste counted in units of partial products.
    let kl = (cfg.plan.k * cfg.plan.l) as i64;
    let n = cfg.n_workers() as i64;
    let c_part = Ratio::new(1, kl);
    match cfg.scheme {
        Scheme::Upc => Ratio::from_integer(n - kl) * c_part,
        Scheme::UpcPc => Ratio::from_integer(n - 1) * c_part,
        _ => {
            let rth = cfg.recovery_threshold() as i64;
            Ratio::from_integer(n - 1) * c_part + Ratio::new(rth, kl) - Ratio::from_integer(1)
        }
    }
}

/// Criterion 5: the metric formulas agree exactly (as rationals) with an
/// independent counting-form derivation on randomized valid configs.
#[test]
fn criterion_5_metrics_cross_check() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC5);
    let mut checked = 0;
    while checked < 20 {
        let scheme = [
            Scheme::Upc,
            Scheme::UpcPc,
            Scheme::BProc,
            Scheme::BpcVo,
            Scheme::BpcHo,
            Scheme::BpcNzo,
            Scheme::BpcZzo,
        ][rng.gen_range(0..7)];
        let k = rng.gen_range(2..=8usize);
        let l = rng.gen_range(2..=8usize);
        let plan = PartitionPlan::new(k * 2, 3, l * 3, k, l).unwrap();
        let divisors = |n: usize| (1..=n).filter(|d| n % d == 0).collect::<Vec<_>>();
        let (da, db) = (divisors(k), divisors(l));
        let params = SchemeParams {
            mu_a: Some(da[rng.gen_range(0..da.len())]),
            mu_b: Some(db[rng.gen_range(0..db.len())]),
            grid: Some((rng.gen_range(1..4), rng.gen_range(1..4))),
        };
        let budget = rng.gen_range(4..30) * plan.a_block_rows().min(plan.b_block_cols());
        let n = match scheme {
            Scheme::Upc => k * l + rng.gen_range(0..10),
            Scheme::BProc => params.grid.unwrap().0 * params.grid.unwrap().1,
            _ => rng.gen_range(2..16),
        };
        let Ok(cfg) = SchemeConfig::from_budget(scheme, plan, n, budget, params) else {
            continue;
        };
        let metrics = cfg.metrics();
        // Eq-style oracles: c_part = 1/(KL), c_max_i = eta_i / (KL).
        let kl = (k * l) as i64;
        assert_eq!(metrics.c_part, Ratio::new(1, kl));
        for w in 0..cfg.n_workers() {
            assert_eq!(
                metrics.c_max[w],
                Ratio::new(cfg.eta(w) as i64, kl),
                "{scheme} c_max mismatch at worker {w}"
            );
        }
        assert_eq!(
            metrics.c_wasted,
            counting_form_c_wasted(&cfg),
            "{scheme} K={k} L={l} c_wasted mismatch"
        );
        checked += 1;
    }
    println!("[PASS] criterion 5 — 20 randomized configs, exact rational agreement");
}

struct SweepPoint {
    budget: usize,
    summary: Option<MonteCarloSummary>,
}

fn sweep_scheme(
    scheme: Scheme,
    plan: PartitionPlan,
    n: usize,
    params: SchemeParams,
    budgets: &[usize],
    model: &SpeedModel,
    trials: usize,
    seed: u64,
) -> Vec<SweepPoint> {
    budgets
        .iter()
        .map(|&budget| {
            let summary = SchemeConfig::from_budget(scheme, plan, n, budget, params)
                .ok()
                .and_then(|cfg| {
                    monte_carlo(&cfg, model, trials, seed, &SimOptions::default()).ok()
                });
            SweepPoint { budget, summary }
        })
        .collect()
}

fn mean_at(points: &[SweepPoint], budget: usize) -> Option<f64> {
    points
        .iter()
        .find(|p| p.budget == budget)
        .and_then(|p| p.summary.as_ref())
        .map(|s| s.mean_time)
}

/// Criterion 6: storage sweep with equal partition sizes reproduces the
/// qualitative ordering of the schemes.
#[test]
fn criterion_6_equal_size_sweep() {
    let plan = PartitionPlan::new(10, 1, 10, 10, 10).unwrap();
    let model = SpeedModel::new(0.01, 0.1).unwrap();
    let trials = 10_000;
    let seed = 0xF16;
    let budgets = [6usize, 7, 8, 9, 10, 12, 14, 16, 18, 20, 22, 24];
    let params = SchemeParams {
        mu_a: Some(5),
        mu_b: Some(5),
        grid: Some((5, 3)),
    };
    let run = |scheme| sweep_scheme(scheme, plan, 15, params, &budgets, &model, trials, seed);
    let upcpc = run(Scheme::UpcPc);
    let bproc = run(Scheme::BProc);
    let vo = run(Scheme::BpcVo);
    let ho = run(Scheme::BpcHo);
    let nzo = run(Scheme::BpcNzo);
    let zzo = run(Scheme::BpcZzo);
    let lb = run(Scheme::LowerBound);

    println!("  budget |   upc-pc |   b-proc |   bpc-vo |   bpc-ho |  bpc-nzo |  bpc-zzo |       lb");
    for (i, &b) in budgets.iter().enumerate() {
        let cell = |p: &[SweepPoint]| match &p[i].summary {
            Some(s) => format!("{:8.3}", s.mean_time),
            None => "       -".to_string(),
        };
        println!(
            "  {b:6} | {} | {} | {} | {} | {} | {} | {}",
            cell(&upcpc), cell(&bproc), cell(&vo), cell(&ho), cell(&nzo), cell(&zzo), cell(&lb)
        );
    }

    // (a) Univariate partial computations are strictly slowest wherever they
    // are feasible at all.
    for &b in &budgets {
        if let Some(u) = mean_at(&upcpc, b) {
            for (name, pts) in [("b-proc", &bproc), ("vo", &vo), ("ho", &ho), ("nzo", &nzo), ("zzo", &zzo), ("lb", &lb)] {
                if let Some(m) = mean_at(pts, b) {
                    assert!(u > m, "budget {b}: upc-pc {u} not above {name} {m}");
                }
            }
        }
    }
    // (b) Zig-zag orders beat the grid scheme in the low-storage regime.
    for &b in budgets.iter().filter(|&&b| b < 14) {
        if let (Some(n), Some(g)) = (mean_at(&nzo, b), mean_at(&bproc, b)) {
            assert!(n < g, "budget {b}: nzo {n} not below b-proc {g}");
        }
        if let (Some(z), Some(g)) = (mean_at(&zzo, b), mean_at(&bproc, b)) {
            assert!(z < g, "budget {b}: zzo {z} not below b-proc {g}");
        }
    }
    // (c) At high budgets every bivariate order sits within 10% of the lower
    // bound and strictly below the grid scheme.
    for &b in &[20usize, 22, 24] {
        let lb_mean = mean_at(&lb, b).expect("lower bound feasible at high budgets");
        let g = mean_at(&bproc, b).expect("b-proc feasible at high budgets");
        for (name, pts) in [("vo", &vo), ("ho", &ho), ("nzo", &nzo), ("zzo", &zzo)] {
            let m = mean_at(pts, b).unwrap_or_else(|| panic!("{name} infeasible at {b}"));
            assert!(
                m <= 1.10 * lb_mean,
                "budget {b}: {name} {m} above 1.1x lower bound {lb_mean}"
            );
            assert!(m < g, "budget {b}: {name} {m} not below b-proc {g}");
        }
    }
    // (d) The grid scheme's curve plateaus at high storage.
    let tops: Vec<f64> = [20usize, 22, 24]
        .iter()
        .map(|&b| mean_at(&bproc, b).unwrap())
        .collect();
    let (lo, hi) = tops
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    assert!(
        hi / lo - 1.0 < 0.02,
        "b-proc top-budget means vary by {:.3}%",
        (hi / lo - 1.0) * 100.0
    );
    println!("[PASS] criterion 6 — equal-size sweep ordering holds at {trials} trials");
}

/// Criterion 7: with B-partitions twice the size of A-partitions, the
/// horizontal-leaning orders win at low and intermediate storage and the
/// vertical order degrades toward univariate performance.
#[test]
fn criterion_7_unequal_size_sweep() {
    let plan = PartitionPlan::new(10, 1, 20, 10, 10).unwrap(); // c/L = 2 r/K
    let model = SpeedModel::new(0.01, 0.1).unwrap();
    let trials = 10_000;
    let seed = 0xF17;
    let budgets = [9usize, 10, 12, 14, 15, 16, 18, 20, 21, 24];
    let params = SchemeParams {
        mu_a: Some(5),
        mu_b: Some(5),
        grid: Some((5, 3)),
    };
    let run = |scheme| sweep_scheme(scheme, plan, 15, params, &budgets, &model, trials, seed);
    let upcpc = run(Scheme::UpcPc);
    let vo = run(Scheme::BpcVo);
    let ho = run(Scheme::BpcHo);
    let zzo = run(Scheme::BpcZzo);

    println!("  budget |   upc-pc |   bpc-vo |   bpc-ho |  bpc-zzo");
    for (i, &b) in budgets.iter().enumerate() {
        let cell = |p: &[SweepPoint]| match &p[i].summary {
            Some(s) => format!("{:8.3}", s.mean_time),
            None => "       -".to_string(),
        };
        println!("  {b:6} | {} | {} | {} | {}", cell(&upcpc), cell(&vo), cell(&ho), cell(&zzo));
    }

    // Horizontal-type orders strictly below the vertical order at low and
    // intermediate budgets (the vertical order pays double for each extra
    // computation here).
    for &b in budgets.iter().filter(|&&b| b <= 20) {
        if let Some(v) = mean_at(&vo, b) {
            let h = mean_at(&ho, b).unwrap();
            let z = mean_at(&zzo, b).unwrap();
            assert!(h < v, "budget {b}: ho {h} not below vo {v}");
            assert!(z < v, "budget {b}: zzo {z} not below vo {v}");
        }
    }
    // The vertical order degrades to roughly univariate performance: compare
    // the schemes at their respective minimum feasible budgets, where both
    // run the same number of computations per worker.
    let vo_min = budgets
        .iter()
        .copied()
        .find(|&b| mean_at(&vo, b).is_some())
        .expect("vo feasible somewhere");
    let upcpc_min = budgets
        .iter()
        .copied()
        .find(|&b| mean_at(&upcpc, b).is_some())
        .expect("upc-pc feasible somewhere");
    let v = mean_at(&vo, vo_min).unwrap();
    let u = mean_at(&upcpc, upcpc_min).unwrap();
    assert!(
        (v - u).abs() / u < 0.15,
        "vo at {vo_min} ({v}) not within 15% of upc-pc at {upcpc_min} ({u})"
    );
    println!("[PASS] criterion 7 — unequal-size sweep favors horizontal orders (vo@{vo_min}={v:.3} vs upc-pc@{upcpc_min}={u:.3})");
}

/// Criterion 8: simulated p-th completion times match the closed-form CDF.
#[test]
fn criterion_8_shifted_exponential_fidelity() {
    let model = SpeedModel::new(0.01, 0.1).unwrap();
    let n = 100_000usize;
    for p in [1usize, 5, 10] {
        let mut rng = ChaCha8Rng::seed_from_u64(0xC8 + p as u64);
        let mut samples: Vec<f64> = (0..n)
            .map(|_| p as f64 * codedmm_core::sample_worker_speed(&model, &mut rng))
            .collect();
        samples.sort_by(f64::total_cmp);
        let mut ks: f64 = 0.0;
        for (i, t) in samples.iter().enumerate() {
            let f = model.completion_cdf(p, *t);
            ks = ks
                .max(((i + 1) as f64 / n as f64 - f).abs())
                .max((f - i as f64 / n as f64).abs());
        }
        assert!(ks < 0.01, "p={p}: KS statistic {ks}");
        println!("  p={p}: KS statistic {ks:.5}");
    }
    println!("[PASS] criterion 8 — completion-time CDF matches at 1e5 samples");
}

/// Brute-force priority consistency: the emitted list must walk the score
/// ranking, skipping nothing available, and stop exactly at the first
/// unavailable cell in the ranking.
fn check_priority_consistency(
    k: usize,
    l: usize,
    m_a: usize,
    m_b: usize,
    score: impl Fn((usize, usize)) -> usize,
    order: &[(usize, usize)],
) -> Result<(), String> {
    let available = |c: &(usize, usize)| c.0 < m_a && c.1 < m_b;
    let mut all: Vec<(usize, usize)> = (0..k)
        .flat_map(|a| (0..l).map(move |b| (a, b)))
        .collect();
    all.sort_by_key(|&c| score(c));
    // The emitted order must be exactly the maximal prefix of the ranking
    // whose cells are all available.
    let expect: Vec<(usize, usize)> = all
        .iter()
        .take_while(|c| available(c))
        .copied()
        .collect();
    if order != expect.as_slice() {
        return Err(format!(
            "K={k} L={l} m=({m_a},{m_b}): got {order:?}, ranking implies {expect:?}"
        ));
    }
    // Redundant with the above but states the paper-facing property directly:
    // between consecutive entries no available cell is skipped.
    for w in order.windows(2) {
        let (lo, hi) = (score(w[0]), score(w[1]));
        for &c in &all {
            let s = score(c);
            if s > lo && s < hi && available(&c) {
                return Err(format!("available cell {c:?} skipped between {w:?}"));
            }
        }
    }
    Ok(())
}

/// Criterion 9: exhaustive priority-consistency over K, L <= 8 and every
/// valid storage pair of every scheme.
#[test]
fn criterion_9_computation_orders_are_priority_consistent() {
    let mut checked = 0usize;
    for k in 1..=8usize {
        for l in 1..=8usize {
            // Vertical / horizontal orders for every storage pair the
            // schemes admit.
            for m_a in 1..=k {
                for m_b in 1..=l {
                    if m_a == 1 || m_b == l {
                        check_priority_consistency(
                            k,
                            l,
                            m_a,
                            m_b,
                            |c| n_zigzag_score(k, l, c),
                            &vertical_order(k, l, m_a, m_b),
                        )
                        .unwrap();
                        checked += 1;
                    }
                    if m_b == 1 || m_a == k {
                        check_priority_consistency(
                            k,
                            l,
                            m_a,
                            m_b,
                            |c| z_zigzag_score(l, k, c),
                            &horizontal_order(k, l, m_a, m_b),
                        )
                        .unwrap();
                        checked += 1;
                    }
                    for mu in (1..=l).filter(|m| l % m == 0) {
                        let admissible = (m_b % mu == 0 && m_a == k)
                            || (m_b == mu && m_a <= k)
                            || (m_a == 1 && m_b <= mu);
                        if admissible {
                            check_priority_consistency(
                                k,
                                l,
                                m_a,
                                m_b,
                                |c| n_zigzag_score(k, mu, c),
                                &n_zigzag_order(k, l, mu, m_a, m_b),
                            )
                            .unwrap();
                            checked += 1;
                        }
                    }
                    for mu in (1..=k).filter(|m| k % m == 0) {
                        let admissible = (m_a % mu == 0 && m_b == l)
                            || (m_a == mu && m_b <= l)
                            || (m_b == 1 && m_a <= mu);
                        if admissible {
                            check_priority_consistency(
                                k,
                                l,
                                m_a,
                                m_b,
                                |c| z_zigzag_score(l, mu, c),
                                &z_zigzag_order(k, l, mu, m_a, m_b),
                            )
                            .unwrap();
                            checked += 1;
                        }
                    }
                }
            }
            // Structural checks for the order-free schemes.
            let diag: Vec<(usize, usize)> = (0..k.min(l)).map(|j| (j, j)).collect();
            assert!(diag.iter().all(|&(a, b)| a == b));
            let rect = rectangle_cells(k.min(3), l.min(3));
            assert_eq!(rect.len(), k.min(3) * l.min(3));
        }
    }
    println!("[PASS] criterion 9 — {checked} computation orders verified against the score ranking");
}
