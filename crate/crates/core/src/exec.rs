//! In-process master/worker runtime: encode, dispatch, multi-message partial
//! products with injected delays, online stop, decode.
//!
//! Workers are cooperative tasks on a bounded thread pool, sending responses
//! to the master over an in-memory channel. Each response carries a virtual
//! completion time derived from the injected delay model; the master merges
//! the per-worker streams in virtual-time order (ties by worker index, then
//! sequence), so the collected response set, the stop decision and the
//! decoded product are all deterministic for a given seed no matter how the
//! OS schedules the threads. Wall-clock timestamps are recorded alongside for
//! the stop-signal assertions; only those fields are schedule-dependent.

use std::collections::VecDeque;
use std::sync::atomic::{AtomicBool, Ordering as AtomicOrdering};
use std::sync::{mpsc, Arc, Mutex};
use std::thread;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::encode::{eval_poly_a, eval_poly_b, eval_upc_b, partial_product, CodedBlock};
use crate::error::{Error, Result};
use crate::interp::{
    build_interpolation_system, decode_bivariate, sample_chebyshev_stratified,
    sample_distinct_points, select_responses_nzo, select_responses_zzo, ResponseRow,
};
use crate::plan::{assemble_product, partition};
use crate::scheme::{Scheme, SchemeConfig};
use crate::sim::{sample_worker_speed, SpeedModel, StopRule};
use crate::solve::solve_refined;
use crate::Mat;

/// Point draws live on a separate RNG stream from speed draws so that decode
/// retries can resample points without disturbing the timing.
const POINT_STREAM: u64 = 1 << 32;
const MAX_DECODE_ATTEMPTS: usize = 4;
const RECV_TIMEOUT: Duration = Duration::from_secs(60);

/// Injected per-computation delays.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DelayModel {
    /// No delays: virtual time stays at zero, arrival order falls back to
    /// worker index then sequence.
    None,
    /// Shifted-exponential durations, drawn exactly like the simulator draws
    /// them, so executor runs are comparable to simulator trials per seed.
    Shifted(SpeedModel),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOptions {
    pub seed: u64,
    /// Maximum workers running concurrently; 0 means one thread per worker.
    pub parallelism: usize,
    pub delays: DelayModel,
    /// Wall seconds slept per unit of virtual delay. Zero: no sleeping.
    pub time_scale: f64,
    pub optimistic_stop: bool,
    /// Debug knob: give worker 1 the same evaluation point(s) as worker 0 to
    /// force duplicate rows at the decoder.
    pub force_duplicate_points: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            seed: 0,
            parallelism: 0,
            delays: DelayModel::None,
            time_scale: 0.0,
            optimistic_stop: false,
            force_duplicate_points: false,
        }
    }
}

/// Everything one worker needs to run.
#[derive(Debug, Clone)]
pub struct WorkerTask {
    pub worker: usize,
    pub a_blocks: Vec<CodedBlock>,
    pub b_blocks: Vec<CodedBlock>,
    /// Cells to execute, in order; `(k, l)` indexes `a_blocks` and `b_blocks`.
    pub order: Vec<(usize, usize)>,
    /// Injected duration of each computation, in virtual time units. The
    /// schedule is constant per worker (one speed draw per job), and the
    /// virtual completion time of computation `j` is `(j + 1) * delays[j]`,
    /// matching the simulator's arrival times bit for bit.
    pub delays: Vec<f64>,
}

/// One partial product sent to the master.
#[derive(Debug, Clone)]
pub struct ResponseMessage {
    pub worker: usize,
    /// Contiguous from 0 within each worker.
    pub seq: usize,
    /// Derivative orders or grid coordinates, scheme-dependent.
    pub cell: (usize, usize),
    pub payload: Mat,
    pub virtual_time: f64,
    pub wall_started: f64,
    pub wall_finished: f64,
}

#[derive(Debug, Clone, Default)]
pub struct WorkerReport {
    pub worker: usize,
    pub assigned: usize,
    /// Messages the worker actually sent before finishing or observing stop.
    pub sent: usize,
    /// Responses the master accepted before the stop decision.
    pub collected: usize,
    /// Responses that entered the decoder.
    pub used: usize,
    pub stopped_by_flag: bool,
    pub observed_stop_wall: Option<f64>,
    pub last_start_wall: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct JobReport {
    pub scheme: Scheme,
    /// Virtual time of the stop-triggering arrival.
    pub completion_time: f64,
    pub arrivals: usize,
    pub used: usize,
    pub discarded: usize,
    pub ongoing_at_stop: usize,
    pub realized_wasted_fraction: f64,
    /// Zig-zag selection drops, a subset of `discarded`.
    pub policy_discards: usize,
    pub decode_condition: f64,
    pub decode_rel_smallest_sv: f64,
    /// Decode attempts consumed (re-encoding with fresh points on failure).
    pub attempts: usize,
    pub stop_wall: f64,
    pub workers: Vec<WorkerReport>,
}

enum DecodeContext {
    /// Per-worker `(x, y)` evaluation point.
    Bivariate { points: Vec<(f64, f64)> },
    /// Per-worker, per-slot x points; y is implicitly `x^K`.
    Univariate { points: Vec<Vec<f64>> },
    /// Flat grid coordinates.
    Grid {
        xs: Vec<f64>,
        ys: Vec<f64>,
        n_b: usize,
        m_a: usize,
        m_b: usize,
    },
}

/// Runs a full coded multiplication job and returns the product with a report.
///
/// The decoded product is schedule-independent; on a numerically singular
/// decode the master re-encodes with fresh evaluation points (same timing
/// draws) and retries, which also covers the forced-duplicate debug path.
pub fn run_job(a: &Mat, b: &Mat, cfg: &SchemeConfig, opts: &RunOptions) -> Result<(Mat, JobReport)> {
    cfg.validate()?;
    if cfg.scheme == Scheme::LowerBound {
        return Err(Error::InvalidConfig {
            scheme: "lower-bound",
            reason: "idealized baseline has no executable encoding; simulate it instead".into(),
        });
    }
    let (a_blocks, b_blocks) = partition(a, b, &cfg.plan)?;
    let mut attempt = 0;
    loop {
        match run_attempt(&a_blocks, &b_blocks, cfg, opts, attempt) {
            Err(Error::SingularSystem { .. }) if attempt + 1 < MAX_DECODE_ATTEMPTS => {
                attempt += 1;
            }
            Ok((product, mut report)) => {
                report.attempts = attempt + 1;
                return Ok((product, report));
            }
            Err(e) => return Err(e),
        }
    }
}

fn elapsed(t0: Instant) -> f64 {
    t0.elapsed().as_secs_f64()
}

struct WorkerLog {
    sent: usize,
    stopped_by_flag: bool,
    observed_stop_wall: Option<f64>,
    last_start_wall: Option<f64>,
}

fn worker_loop(
    task: WorkerTask,
    stop: Arc<AtomicBool>,
    tx: mpsc::SyncSender<ResponseMessage>,
    t0: Instant,
    time_scale: f64,
) -> WorkerLog {
    let mut log = WorkerLog {
        sent: 0,
        stopped_by_flag: false,
        observed_stop_wall: None,
        last_start_wall: None,
    };
    for (seq, &cell) in task.order.iter().enumerate() {
        if stop.load(AtomicOrdering::Acquire) {
            log.stopped_by_flag = true;
            log.observed_stop_wall = Some(elapsed(t0));
            break;
        }
        let wall_started = elapsed(t0);
        log.last_start_wall = Some(wall_started);
        let delay = task.delays[seq];
        let virtual_time = (seq as f64 + 1.0) * delay;
        if time_scale > 0.0 && delay > 0.0 {
            thread::sleep(Duration::from_secs_f64(delay * time_scale));
        }
        let payload = partial_product(&task.a_blocks[cell.0], &task.b_blocks[cell.1])
            .expect("worker blocks are encoded consistently with the order");
        let msg = ResponseMessage {
            worker: task.worker,
            seq,
            cell,
            payload,
            virtual_time,
            wall_started,
            wall_finished: elapsed(t0),
        };
        if tx.send(msg).is_err() {
            break; // master is gone; nothing left to report to
        }
        log.sent += 1;
    }
    log
}

fn encode_tasks(
    a_blocks: &[Mat],
    b_blocks: &[Mat],
    cfg: &SchemeConfig,
    durations: &[f64],
    orders: &[Vec<(usize, usize)>],
    points_rng: &mut ChaCha8Rng,
    force_duplicate: bool,
) -> Result<(Vec<WorkerTask>, DecodeContext)> {
    let n = cfg.n_workers();
    let k = cfg.plan.k;
    let mut tasks = Vec::with_capacity(n);
    let make_task = |worker: usize, a: Vec<CodedBlock>, b: Vec<CodedBlock>| WorkerTask {
        worker,
        a_blocks: a,
        b_blocks: b,
        order: orders[worker].clone(),
        delays: vec![durations[worker]; orders[worker].len()],
    };

    match cfg.scheme {
        Scheme::Upc | Scheme::UpcPc => {
            let slots: Vec<usize> = cfg.workers.iter().map(|&(m_a, _)| m_a).collect();
            let total: usize = slots.iter().sum();
            // The decode solves a single degree KL-1 Vandermonde system, so
            // point spread decides whether f64 can recover the coefficients
            // at all; Chebyshev-like spacing keeps it tractable.
            let flat = sample_chebyshev_stratified(total, points_rng);
            let mut points: Vec<Vec<f64>> = Vec::with_capacity(n);
            let mut at = 0;
            for &m in &slots {
                points.push(flat[at..at + m].to_vec());
                at += m;
            }
            if force_duplicate && n > 1 {
                points[1] = points[0].clone();
            }
            for w in 0..n {
                let a: Vec<CodedBlock> = points[w]
                    .iter()
                    .map(|&x| eval_poly_a(a_blocks, x, 0))
                    .collect::<Result<_>>()?;
                let b: Vec<CodedBlock> = points[w]
                    .iter()
                    .map(|&x| eval_upc_b(b_blocks, k, x))
                    .collect();
                tasks.push(make_task(w, a, b));
            }
            Ok((tasks, DecodeContext::Univariate { points }))
        }
        Scheme::BpcVo | Scheme::BpcHo | Scheme::BpcNzo | Scheme::BpcZzo => {
            let xs = sample_distinct_points(n, points_rng);
            let ys = sample_distinct_points(n, points_rng);
            let mut points: Vec<(f64, f64)> = xs.into_iter().zip(ys).collect();
            if force_duplicate && n > 1 {
                points[1] = points[0];
            }
            for w in 0..n {
                let (m_a, m_b) = cfg.workers[w];
                let (x, y) = points[w];
                let a: Vec<CodedBlock> = (0..m_a)
                    .map(|d| eval_poly_a(a_blocks, x, d))
                    .collect::<Result<_>>()?;
                let b: Vec<CodedBlock> = (0..m_b)
                    .map(|d| eval_poly_b(b_blocks, y, d))
                    .collect::<Result<_>>()?;
                tasks.push(make_task(w, a, b));
            }
            Ok((tasks, DecodeContext::Bivariate { points }))
        }
        Scheme::BProc => {
            let (n_a, n_b) = cfg.params.grid.unwrap();
            let (m_a, m_b) = cfg.workers[0];
            let xs = sample_distinct_points(n_a * m_a, points_rng);
            let ys = sample_distinct_points(n_b * m_b, points_rng);
            for w in 0..n {
                let (ga, gb) = (w / n_b, w % n_b);
                let a: Vec<CodedBlock> = (0..m_a)
                    .map(|s| eval_poly_a(a_blocks, xs[ga * m_a + s], 0))
                    .collect::<Result<_>>()?;
                let b: Vec<CodedBlock> = (0..m_b)
                    .map(|s| eval_poly_b(b_blocks, ys[gb * m_b + s], 0))
                    .collect::<Result<_>>()?;
                tasks.push(make_task(w, a, b));
            }
            Ok((
                tasks,
                DecodeContext::Grid {
                    xs,
                    ys,
                    n_b,
                    m_a,
                    m_b,
                },
            ))
        }
        Scheme::LowerBound => unreachable!("rejected before encoding"),
    }
}

fn run_attempt(
    a_blocks: &[Mat],
    b_blocks: &[Mat],
    cfg: &SchemeConfig,
    opts: &RunOptions,
    attempt: usize,
) -> Result<(Mat, JobReport)> {
    let n = cfg.n_workers();
    let etas = cfg.etas();
    let kl = cfg.plan.total_products();

    // Timing draws mirror the simulator exactly: durations first, then the
    // grid-scheme shuffles, all on stream 0 of the seed.
    let mut speeds_rng = ChaCha8Rng::seed_from_u64(opts.seed);
    speeds_rng.set_stream(0);
    let durations: Vec<f64> = match opts.delays {
        DelayModel::None => vec![0.0; n],
        DelayModel::Shifted(model) => (0..n)
            .map(|_| sample_worker_speed(&model, &mut speeds_rng))
            .collect(),
    };
    let orders: Vec<Vec<(usize, usize)>> = (0..n)
        .map(|w| cfg.computation_order(w, &mut speeds_rng))
        .collect();

    let mut points_rng = ChaCha8Rng::seed_from_u64(opts.seed);
    points_rng.set_stream(POINT_STREAM + attempt as u64);
    let (tasks, ctx) = encode_tasks(
        a_blocks,
        b_blocks,
        cfg,
        &durations,
        &orders,
        &mut points_rng,
        opts.force_duplicate_points,
    )?;

    let mut rule = StopRule::new(cfg, opts.optimistic_stop)?;

    let stop = Arc::new(AtomicBool::new(false));
    let t0 = Instant::now();
    let (tx, rx) = mpsc::sync_channel::<ResponseMessage>(256);
    let queue: Arc<Mutex<VecDeque<WorkerTask>>> = Arc::new(Mutex::new(tasks.into()));
    let logs: Arc<Mutex<Vec<Option<WorkerLog>>>> = Arc::new(Mutex::new((0..n).map(|_| None).collect()));

    let pool_size = if opts.parallelism == 0 {
        n
    } else {
        opts.parallelism.min(n)
    };
    let mut handles = Vec::with_capacity(pool_size);
    for _ in 0..pool_size {
        let queue = Arc::clone(&queue);
        let logs = Arc::clone(&logs);
        let stop = Arc::clone(&stop);
        let tx = tx.clone();
        let time_scale = opts.time_scale;
        handles.push(thread::spawn(move || loop {
            let task = queue.lock().expect("queue lock").pop_front();
            match task {
                Some(t) => {
                    let w = t.worker;
                    let log = worker_loop(t, Arc::clone(&stop), tx.clone(), t0, time_scale);
                    logs.lock().expect("log lock")[w] = Some(log);
                }
                None => break,
            }
        }));
    }
    drop(tx);

    // Collect responses in virtual-time order across workers.
    let mut queues: Vec<VecDeque<ResponseMessage>> = (0..n).map(|_| VecDeque::new()).collect();
    let mut popped: Vec<usize> = vec![0; n];
    let mut popped_msgs: Vec<ResponseMessage> = Vec::new();
    let mut stop_info: Option<(f64, usize)> = None;
    let mut disconnected = false;
    'collect: loop {
        loop {
            let mut best: Option<(f64, usize)> = None;
            let mut waiting = false;
            for (w, q) in queues.iter().enumerate() {
                if popped[w] >= etas[w] {
                    continue;
                }
                match q.front() {
                    None => {
                        if !disconnected {
                            waiting = true;
                            break;
                        }
                    }
                    Some(m) => {
                        let better = match best {
                            None => true,
                            Some((t, _)) => m.virtual_time < t,
                        };
                        if better {
                            best = Some((m.virtual_time, w));
                        }
                    }
                }
            }
            if waiting {
                break;
            }
            let Some((_, w)) = best else {
                break 'collect;
            };
            let msg = queues[w].pop_front().expect("head checked");
            popped[w] += 1;
            let fired = rule.feed(w, msg.cell);
            let vt = msg.virtual_time;
            popped_msgs.push(msg);
            if fired {
                stop_info = Some((vt, w));
                break 'collect;
            }
        }
        if disconnected {
            break;
        }
        match rx.recv_timeout(RECV_TIMEOUT) {
            Ok(m) => queues[m.worker].push_back(m),
            Err(mpsc::RecvTimeoutError::Disconnected) => disconnected = true,
            Err(mpsc::RecvTimeoutError::Timeout) => {
                stop.store(true, AtomicOrdering::Release);
                return Err(Error::Runtime("timed out waiting for worker responses".into()));
            }
        }
    }

    stop.store(true, AtomicOrdering::Release);
    let stop_wall = elapsed(t0);
    // Keep receiving until every worker has observed the flag (or finished);
    // computations already underway complete and their messages are ignored.
    while rx.recv_timeout(RECV_TIMEOUT).is_ok() {}
    drop(rx);
    for h in handles {
        h.join().map_err(|_| Error::Runtime("worker thread panicked".into()))?;
    }

    let (completion_time, trigger) = stop_info.ok_or(Error::Runtime(
        "stop rule never fired despite capacity checks".into(),
    ))?;
    let arrivals = popped_msgs.len();
    let ongoing = (0..n)
        .filter(|&w| w != trigger && popped[w] < etas[w])
        .count();

    // Decode from the collected responses.
    let mut policy_discards = 0usize;
    let mut per_worker_used = vec![0usize; n];
    let decoded = match &ctx {
        DecodeContext::Univariate { points } => {
            let rows: Vec<ResponseRow> = popped_msgs
                .iter()
                .take(kl)
                .map(|m| {
                    per_worker_used[m.worker] += 1;
                    let x = points[m.worker][m.cell.0];
                    ResponseRow {
                        eval_point: (x, x.powi(cfg.plan.k as i32)),
                        order: (0, 0),
                        payload: m.payload.clone(),
                    }
                })
                .collect();
            let system = build_interpolation_system(cfg.plan.k, cfg.plan.l, &rows)?;
            decode_bivariate(&system)?
        }
        DecodeContext::Bivariate { points } => {
            let use_counts: Vec<usize> = match cfg.scheme {
                Scheme::BpcNzo => {
                    let sel =
                        select_responses_nzo(&popped, kl, cfg.params.mu_b.unwrap(), cfg.plan.k)?;
                    policy_discards = sel.discarded;
                    sel.use_counts
                }
                Scheme::BpcZzo => {
                    let sel =
                        select_responses_zzo(&popped, kl, cfg.params.mu_a.unwrap(), cfg.plan.l)?;
                    policy_discards = sel.discarded;
                    sel.use_counts
                }
                _ => popped.clone(), // exactly K*L arrivals for VO/HO
            };
            let mut taken = vec![0usize; n];
            let mut rows = Vec::with_capacity(kl);
            for m in &popped_msgs {
                if taken[m.worker] < use_counts[m.worker] {
                    taken[m.worker] += 1;
                    per_worker_used[m.worker] += 1;
                    rows.push(ResponseRow {
                        eval_point: points[m.worker],
                        order: m.cell,
                        payload: m.payload.clone(),
                    });
                }
            }
            let system = build_interpolation_system(cfg.plan.k, cfg.plan.l, &rows)?;
            decode_bivariate(&system)?
        }
        DecodeContext::Grid {
            xs,
            ys,
            n_b,
            m_a,
            m_b,
        } => {
            for m in &popped_msgs {
                per_worker_used[m.worker] += 1;
            }
            decode_grid(&popped_msgs, xs, ys, *n_b, *m_a, *m_b, cfg)?
        }
    };

    let product = assemble_product(&decoded.blocks, &cfg.plan)?;

    let logs = Arc::try_unwrap(logs)
        .map_err(|_| Error::Runtime("worker logs still shared".into()))?
        .into_inner()
        .map_err(|_| Error::Runtime("worker log lock poisoned".into()))?;
    let workers = logs
        .into_iter()
        .enumerate()
        .map(|(w, log)| {
            let log = log.unwrap_or(WorkerLog {
                sent: 0,
                stopped_by_flag: false,
                observed_stop_wall: None,
                last_start_wall: None,
            });
            WorkerReport {
                worker: w,
                assigned: etas[w],
                sent: log.sent,
                collected: popped[w],
                used: per_worker_used[w],
                stopped_by_flag: log.stopped_by_flag,
                observed_stop_wall: log.observed_stop_wall,
                last_start_wall: log.last_start_wall,
            }
        })
        .collect();

    let discarded = arrivals - kl;
    let report = JobReport {
        scheme: cfg.scheme,
        completion_time,
        arrivals,
        used: kl,
        discarded,
        ongoing_at_stop: ongoing,
        realized_wasted_fraction: (discarded + ongoing) as f64 / kl as f64,
        policy_discards,
        decode_condition: decoded.condition,
        decode_rel_smallest_sv: decoded.rel_smallest_sv,
        attempts: 1,
        stop_wall,
        workers,
    };
    Ok((product, report))
}

/// Value-level peeling for grid coding: completes columns/rows by univariate
/// interpolation until the whole grid is known, then solves the `K x L`
/// sub-grid system for the coefficient blocks.
fn decode_grid(
    msgs: &[ResponseMessage],
    xs: &[f64],
    ys: &[f64],
    n_b: usize,
    m_a: usize,
    m_b: usize,
    cfg: &SchemeConfig,
) -> Result<crate::interp::DecodeOutput> {
    let cols = xs.len();
    let rows_n = ys.len();
    let (k, l) = (cfg.plan.k, cfg.plan.l);
    let mut values: Vec<Option<Mat>> = vec![None; cols * rows_n];
    for m in msgs {
        let col = (m.worker / n_b) * m_a + m.cell.0;
        let row = (m.worker % n_b) * m_b + m.cell.1;
        values[col * rows_n + row] = Some(m.payload.clone());
    }

    let mut col_full = vec![false; cols];
    let mut row_full = vec![false; rows_n];
    loop {
        let mut changed = false;
        for col in 0..cols {
            if col_full[col] {
                continue;
            }
            let known: Vec<usize> = (0..rows_n)
                .filter(|&r| values[col * rows_n + r].is_some())
                .collect();
            if known.len() >= l {
                let pts: Vec<(f64, Mat)> = known
                    .iter()
                    .take(l)
                    .map(|&r| (ys[r], values[col * rows_n + r].clone().unwrap()))
                    .collect();
                let filled = interpolate_line(&pts, l, ys)?;
                for (r, v) in filled.into_iter().enumerate() {
                    values[col * rows_n + r] = Some(v);
                }
                col_full[col] = true;
                changed = true;
            }
        }
        for row in 0..rows_n {
            if row_full[row] {
                continue;
            }
            let known: Vec<usize> = (0..cols)
                .filter(|&c| values[c * rows_n + row].is_some())
                .collect();
            if known.len() >= k {
                let pts: Vec<(f64, Mat)> = known
                    .iter()
                    .take(k)
                    .map(|&c| (xs[c], values[c * rows_n + row].clone().unwrap()))
                    .collect();
                let filled = interpolate_line(&pts, k, xs)?;
                for (c, v) in filled.into_iter().enumerate() {
                    values[c * rows_n + row] = Some(v);
                }
                row_full[row] = true;
                changed = true;
            }
        }
        if col_full.iter().take(k).all(|&f| f) {
            break;
        }
        if !changed {
            return Err(Error::Runtime(
                "grid peeling stalled although the stop rule reported decodability".into(),
            ));
        }
    }

    // Any K x L sub-grid of plain evaluations decodes the product; use the
    // first K columns and first L rows.
    let mut rows = Vec::with_capacity(k * l);
    for b in 0..l {
        for a in 0..k {
            rows.push(ResponseRow {
                eval_point: (xs[a], ys[b]),
                order: (0, 0),
                payload: values[a * rows_n + b]
                    .clone()
                    .ok_or_else(|| Error::Runtime("sub-grid cell missing after peeling".into()))?,
            });
        }
    }
    let system = build_interpolation_system(k, l, &rows)?;
    decode_bivariate(&system)
}

/// Interpolates a univariate block polynomial of the given degree bound from
/// `degree` known (point, value) pairs and evaluates it at every point of
/// `at`.
fn interpolate_line(known: &[(f64, Mat)], degree: usize, at: &[f64]) -> Result<Vec<Mat>> {
    let shape = known[0].1.shape();
    let width = shape.0 * shape.1;
    let v = Mat::from_fn(degree, degree, |i, j| known[i].0.powi(j as i32));
    let mut rhs = Mat::zeros(degree, width);
    for (t, (_, val)) in known.iter().enumerate() {
        for i in 0..shape.0 {
            for j in 0..shape.1 {
                rhs[(t, i * shape.1 + j)] = val[(i, j)];
            }
        }
    }
    let solved = solve_refined(&v, &rhs)?;
    Ok(at
        .iter()
        .map(|&t| {
            let mut acc = Mat::zeros(shape.0, shape.1);
            for c in (0..degree).rev() {
                for i in 0..shape.0 {
                    for j in 0..shape.1 {
                        acc[(i, j)] = acc[(i, j)] * t + solved.x[(c, i * shape.1 + j)];
                    }
                }
            }
            acc
        })
        .collect())
}
