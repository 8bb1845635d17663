//! Master-side decoding: interpolation-matrix assembly, the linear solve
//! that recovers the coefficient blocks, the coalescence discard policy for
//! zig-zag orders, and an empirical regularity checker.

use std::cmp::Reverse;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::encode::falling_factorial;
use crate::error::{Error, Result};
use crate::solve::{self, solve_refined};
use crate::Mat;

pub use crate::solve::SINGULARITY_THRESHOLD;

/// The derivative orders one worker has delivered for its evaluation point.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivativeSet {
    pub eval_point: (f64, f64),
    pub orders: Vec<(usize, usize)>,
}

impl DerivativeSet {
    /// True when no derivative order appears twice. A repeated order produces
    /// two identical matrix rows, which is singular by construction.
    pub fn multiplicity_free(&self) -> bool {
        let mut seen = self.orders.clone();
        seen.sort_unstable();
        seen.windows(2).all(|w| w[0] != w[1])
    }

    /// True when the orders are exactly the first `orders.len()` entries of
    /// `order`.
    pub fn is_prefix_of(&self, order: &[(usize, usize)]) -> bool {
        self.orders.len() <= order.len()
            && self.orders.iter().zip(order).all(|(a, b)| a == b)
    }
}

/// One decoded-system row: where the polynomial was evaluated, which mixed
/// derivative, and (when decoding rather than rank-checking) the payload.
#[derive(Debug, Clone)]
pub struct ResponseRow {
    pub eval_point: (f64, f64),
    pub order: (usize, usize),
    pub payload: Mat,
}

/// Assembled linear system for recovering the `K*L` coefficient blocks.
#[derive(Debug, Clone)]
pub struct InterpolationSystem {
    pub k: usize,
    pub l: usize,
    pub rows: Vec<((f64, f64), (usize, usize))>,
    pub matrix: Mat,
    /// One flattened response block per matrix row.
    pub rhs: Mat,
    pub block_shape: (usize, usize),
}

fn matrix_entry(k: usize, point: (f64, f64), order: (usize, usize), col: usize) -> f64 {
    let a = col % k;
    let b = col / k;
    let (dx, dy) = order;
    if a < dx || b < dy {
        return 0.0;
    }
    falling_factorial(a, dx)
        * falling_factorial(b, dy)
        * point.0.powi((a - dx) as i32)
        * point.1.powi((b - dy) as i32)
}

fn check_rows(k: usize, l: usize, rows: &[((f64, f64), (usize, usize))]) -> Result<()> {
    if rows.len() != k * l {
        return Err(Error::WrongRowCount {
            expected: k * l,
            got: rows.len(),
        });
    }
    for (i, &((x, y), (dx, dy))) in rows.iter().enumerate() {
        if dx >= k {
            return Err(Error::DerivativeOrderOutOfRange { order: dx, max: k });
        }
        if dy >= l {
            return Err(Error::DerivativeOrderOutOfRange { order: dy, max: l });
        }
        for &((x2, y2), (dx2, dy2)) in &rows[..i] {
            if x == x2 && y == y2 && dx == dx2 && dy == dy2 {
                return Err(Error::DuplicateRow { x, y, k: dx, l: dy });
            }
        }
    }
    Ok(())
}

/// Builds the `K*L x K*L` coefficient matrix for the given evaluation rows.
///
/// Row for point `(x, y)` and order `(dx, dy)`, column for the monomial
/// `x^a y^b` (columns ordered x-major: `col = b*K + a`), holds
/// `a!/(a-dx)! * b!/(b-dy)! * x^(a-dx) * y^(b-dy)` when `a >= dx, b >= dy`,
/// else zero.
pub fn interpolation_matrix(
    k: usize,
    l: usize,
    rows: &[((f64, f64), (usize, usize))],
) -> Result<Mat> {
    check_rows(k, l, rows)?;
    let n = k * l;
    Ok(Mat::from_fn(n, n, |r, c| {
        matrix_entry(k, rows[r].0, rows[r].1, c)
    }))
}

/// Couples the interpolation matrix with the stacked response payloads.
pub fn build_interpolation_system(
    k: usize,
    l: usize,
    responses: &[ResponseRow],
) -> Result<InterpolationSystem> {
    let rows: Vec<_> = responses
        .iter()
        .map(|r| (r.eval_point, r.order))
        .collect();
    let matrix = interpolation_matrix(k, l, &rows)?;
    let shape = responses[0].payload.shape();
    let width = shape.0 * shape.1;
    let mut rhs = Mat::zeros(k * l, width);
    for (t, resp) in responses.iter().enumerate() {
        if resp.payload.shape() != shape {
            return Err(Error::DimensionMismatch {
                context: "response payload shapes",
                expected: format!("{}x{}", shape.0, shape.1),
                got: format!("{}x{}", resp.payload.nrows(), resp.payload.ncols()),
            });
        }
        for i in 0..shape.0 {
            for j in 0..shape.1 {
                rhs[(t, i * shape.1 + j)] = resp.payload[(i, j)];
            }
        }
    }
    Ok(InterpolationSystem {
        k,
        l,
        rows,
        matrix,
        rhs,
        block_shape: shape,
    })
}

/// Decoded coefficient blocks plus conditioning diagnostics.
#[derive(Debug, Clone)]
pub struct DecodeOutput {
    /// `blocks[t]` is the coefficient of `x^(t % K) * y^(t / K)`.
    pub blocks: Vec<Mat>,
    pub condition: f64,
    pub rel_smallest_sv: f64,
}

/// Solves the interpolation system once for all payload columns.
///
/// Fails with [`Error::SingularSystem`] when the relative smallest singular
/// value of the matrix is below [`SINGULARITY_THRESHOLD`]; the caller may
/// collect further responses and re-select.
pub fn decode_bivariate(system: &InterpolationSystem) -> Result<DecodeOutput> {
    let solved = solve_refined(&system.matrix, &system.rhs)?;
    let (br, bc) = system.block_shape;
    let blocks = (0..system.k * system.l)
        .map(|t| Mat::from_fn(br, bc, |i, j| solved.x[(t, i * bc + j)]))
        .collect();
    Ok(DecodeOutput {
        blocks,
        condition: solved.condition,
        rel_smallest_sv: solved.rel_smallest_sv,
    })
}

/// Draws `n` points from `[-1, 1]`, pairwise separated by at least an
/// `n`-dependent gap and bounded away from zero, so that "distinct" survives
/// finite precision. Determinants of Hermite systems carry point separations
/// raised to powers as large as the derivative-set sizes, so the gap is kept
/// generous. Falls back to halving the gap if rejection stalls.
pub fn sample_distinct_points<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    let mut gap = (1.6 / (n.max(1) as f64)).min(0.3);
    let mut out: Vec<f64> = Vec::with_capacity(n);
    let mut stall = 0usize;
    while out.len() < n {
        let cand: f64 = rng.gen_range(-1.0..1.0);
        let ok = cand.abs() >= gap * 0.5 && out.iter().all(|p| (p - cand).abs() >= gap);
        if ok {
            out.push(cand);
            stall = 0;
        } else {
            stall += 1;
            if stall > 10_000 {
                gap *= 0.5;
                stall = 0;
            }
        }
    }
    out
}

/// Draws `n` distinct points as cosines of uniformly jittered angles, one per
/// arc of `[0, pi]`, in random slot order. The spread mimics Chebyshev nodes,
/// which keeps high-degree univariate Vandermonde systems within `f64` reach;
/// uniform draws do not.
pub fn sample_chebyshev_stratified<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    let mut slots: Vec<usize> = (0..n).collect();
    slots.shuffle(rng);
    slots
        .into_iter()
        .map(|i| {
            let jitter: f64 = rng.gen_range(0.05..0.95);
            let theta = std::f64::consts::PI * (i as f64 + jitter) / n as f64;
            theta.cos()
        })
        .collect()
}

/// Empirical regularity: for `trials` random point draws, the fraction of
/// draws whose interpolation matrix has a relative smallest singular value
/// above [`SINGULARITY_THRESHOLD`]. `order_sets[w]` lists the derivative
/// orders delivered by worker `w`; the sets must total `K*L` orders.
///
/// Evaluation points are resampled (a bounded number of times) when a draw
/// lands numerically singular, mirroring how the master assigns points.
/// Structurally singular profiles stay at machine zero under every draw, so
/// resampling never promotes them; a decodable profile failing the gate has
/// merely hit the heavy left tail that point-separation factors raised to
/// derivative-set-sized powers produce, and a redraw resolves it.
pub fn check_regularity(
    k: usize,
    l: usize,
    order_sets: &[Vec<(usize, usize)>],
    trials: usize,
    seed: u64,
) -> Result<RegularityReport> {
    const RESAMPLE_ROUNDS: usize = 8;
    let total: usize = order_sets.iter().map(|s| s.len()).sum();
    if total != k * l {
        return Err(Error::WrongRowCount {
            expected: k * l,
            got: total,
        });
    }
    let per_trial: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(t as u64);
            let mut best = 0.0f64;
            for _ in 0..RESAMPLE_ROUNDS {
                let xs = sample_distinct_points(order_sets.len(), &mut rng);
                let ys = sample_distinct_points(order_sets.len(), &mut rng);
                let mut rows = Vec::with_capacity(k * l);
                for (w, set) in order_sets.iter().enumerate() {
                    for &ord in set {
                        rows.push(((xs[w], ys[w]), ord));
                    }
                }
                let sv = match interpolation_matrix(k, l, &rows) {
                    Ok(m) => solve::relative_smallest_sv(&m),
                    Err(_) => 0.0, // duplicate orders: singular by construction
                };
                best = best.max(sv);
                if best > SINGULARITY_THRESHOLD {
                    break;
                }
            }
            best
        })
        .collect();

    let nonsingular = per_trial
        .iter()
        .filter(|&&sv| sv > SINGULARITY_THRESHOLD)
        .count();
    let min_rel_sv = per_trial.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(RegularityReport {
        trials,
        nonsingular,
        fraction: nonsingular as f64 / trials.max(1) as f64,
        min_rel_sv,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegularityReport {
    pub trials: usize,
    pub nonsingular: usize,
    pub fraction: f64,
    pub min_rel_sv: f64,
}

/// How many trailing computations of a variable derivative set must be
/// ignored before it can coalesce into a pivot set of the given size under
/// the N-zig-zag structure (`mu_b` band height, `k` columns per band).
///
/// With `r_f = variable mod mu_b` (occupants of the variable's last partial
/// column) and `l_e` the empty slots in the pivot's last partial column, no
/// discard is needed when the variable fits inside the pivot's open band, or
/// when `r_f = 0`, `l_e = 0`, or `r_f = l_e`; otherwise the variable drops
/// `r_f - l_e` computations if `r_f > l_e`, else `r_f`.
pub fn discard_policy_nzo(variable: usize, pivot: usize, mu_b: usize, k: usize) -> usize {
    discard_policy(variable, pivot, mu_b, k)
}

/// Transposed policy for the Z-zig-zag structure (`mu_a` band width, `l` rows
/// per band).
pub fn discard_policy_zzo(variable: usize, pivot: usize, mu_a: usize, l: usize) -> usize {
    discard_policy(variable, pivot, mu_a, l)
}

fn discard_policy(variable: usize, pivot: usize, mu: usize, lane: usize) -> usize {
    if mu < 2 || variable == 0 {
        return 0;
    }
    let band = mu * lane;
    let in_band = variable % band;
    let open = (band - pivot % band) % band;
    if in_band <= open {
        return 0;
    }
    let r_f = variable % mu;
    let l_e = (mu - pivot % mu) % mu;
    if r_f == 0 || l_e == 0 || r_f == l_e {
        return 0;
    }
    if r_f > l_e {
        r_f - l_e
    } else {
        r_f
    }
}

/// Result of greedily selecting exactly `K*L` usable responses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Selection {
    /// Responses to use per worker, as a prefix of that worker's deliveries.
    pub use_counts: Vec<usize>,
    /// Computations dropped by the discard policy.
    pub discarded: usize,
}

/// Greedy selection for N-zig-zag responses: workers are scanned in
/// descending response count and coalesced into a running pivot, applying
/// [`discard_policy_nzo`] at each step.
pub fn select_responses_nzo(
    sizes: &[usize],
    kl: usize,
    mu_b: usize,
    k: usize,
) -> Result<Selection> {
    select_responses(sizes, kl, mu_b, k)
}

/// Mirror of [`select_responses_nzo`] for Z-zig-zag responses.
pub fn select_responses_zzo(
    sizes: &[usize],
    kl: usize,
    mu_a: usize,
    l: usize,
) -> Result<Selection> {
    select_responses(sizes, kl, mu_a, l)
}

fn select_responses(sizes: &[usize], kl: usize, mu: usize, lane: usize) -> Result<Selection> {
    let mut idx: Vec<usize> = (0..sizes.len()).collect();
    idx.sort_by_key(|&i| (Reverse(sizes[i]), i));
    let mut use_counts = vec![0usize; sizes.len()];
    let mut pivot = 0usize;
    let mut discarded = 0usize;
    for &i in &idx {
        if pivot == kl {
            break;
        }
        let take = sizes[i].min(kl - pivot);
        if take == 0 {
            continue;
        }
        let d = if pivot == 0 {
            0
        } else {
            discard_policy(take, pivot, mu, lane)
        };
        use_counts[i] = take - d;
        pivot += take - d;
        discarded += d;
    }
    if pivot < kl {
        return Err(Error::SelectionShortfall {
            kept: pivot,
            required: kl,
        });
    }
    Ok(Selection {
        use_counts,
        discarded,
    })
}
