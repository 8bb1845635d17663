//! Regularity study: sample response profiles, check how often their
//! interpolation systems are numerically nonsingular.

use codedmm_core::order::{horizontal_order, n_zigzag_order, vertical_order, z_zigzag_order};
use codedmm_core::{check_regularity, Scheme};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::ExperimentConfig;

pub struct RegularityRow {
    pub kind: String,
    pub profile: usize,
    pub sizes: Vec<usize>,
    pub draws: usize,
    pub fraction: f64,
    pub min_rel_sv: f64,
}

fn conforming_sets(
    kind: Scheme,
    k: usize,
    l: usize,
    mu_a: usize,
    mu_b: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<Vec<(usize, usize)>> {
    let order_of = |m_a: usize, m_b: usize| match kind {
        Scheme::BpcVo => vertical_order(k, l, m_a, m_b),
        Scheme::BpcHo => horizontal_order(k, l, m_a, m_b),
        Scheme::BpcNzo => n_zigzag_order(k, l, mu_b, m_a, m_b),
        Scheme::BpcZzo => z_zigzag_order(k, l, mu_a, m_a, m_b),
        _ => unreachable!("only order-based schemes have conforming profiles"),
    };
    let pairs: Vec<(usize, usize)> = (1..=k)
        .flat_map(|m_a| (1..=l).map(move |m_b| (m_a, m_b)))
        .filter(|&(m_a, m_b)| match kind {
            Scheme::BpcVo => m_a == 1 || m_b == l,
            Scheme::BpcHo => m_b == 1 || m_a == k,
            Scheme::BpcNzo => {
                (m_b % mu_b == 0 && m_a == k) || (m_b == mu_b) || (m_a == 1 && m_b <= mu_b)
            }
            Scheme::BpcZzo => {
                (m_a % mu_a == 0 && m_b == l) || (m_a == mu_a) || (m_b == 1 && m_a <= mu_a)
            }
            _ => false,
        })
        .collect();
    let mut sets = Vec::new();
    let mut remaining = k * l;
    while remaining > 0 {
        let (m_a, m_b) = pairs[rng.gen_range(0..pairs.len())];
        let order = order_of(m_a, m_b);
        let take = rng.gen_range(1..=order.len()).min(remaining);
        sets.push(order[..take].to_vec());
        remaining -= take;
    }
    sets
}

/// A deliberately non-conforming profile: one worker holds `(0,0)` together
/// with a cell strictly inside the lattice, which is a prefix of none of the
/// traversal orders; the rest are single plain evaluations. Such profiles may
/// or may not decode, which is exactly what the study reports.
fn violating_sets(k: usize, l: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<(usize, usize)>> {
    assert!(k >= 2 && l >= 2, "violating profiles need K, L >= 2");
    let hole = (rng.gen_range(1..k), rng.gen_range(1..l));
    let mut sets = vec![vec![(0, 0), hole]];
    sets.extend(std::iter::repeat(vec![(0, 0)]).take(k * l - 2));
    sets
}

pub fn run_regularity(
    cfg: &ExperimentConfig,
    profiles: usize,
    draws: usize,
    seed: u64,
) -> Result<Vec<RegularityRow>, String> {
    let plan = cfg.plan()?;
    let (k, l) = (plan.k, plan.l);
    let params = cfg.scheme_params();
    let mu_a = params.mu_a.unwrap_or(k);
    let mu_b = params.mu_b.unwrap_or(l);
    let kinds: Vec<String> = cfg
        .regularity
        .as_ref()
        .map(|r| r.kinds.clone())
        .filter(|k| !k.is_empty())
        .unwrap_or_else(|| vec!["bpc-vo".into(), "grid".into()]);

    let mut rows = Vec::new();
    for kind in &kinds {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9E3779B97F4A7C15);
        for p in 0..profiles {
            let sets: Vec<Vec<(usize, usize)>> = match kind.as_str() {
                "grid" => vec![vec![(0, 0)]; k * l],
                "violating" => violating_sets(k, l, &mut rng),
                name => {
                    let scheme: Scheme = name.parse().map_err(|e| format!("{e}"))?;
                    conforming_sets(scheme, k, l, mu_a, mu_b, &mut rng)
                }
            };
            let report = check_regularity(k, l, &sets, draws, seed.wrapping_add(p as u64))
                .map_err(|e| format!("profile {p} ({kind}): {e}"))?;
            rows.push(RegularityRow {
                kind: kind.clone(),
                profile: p,
                sizes: sets.iter().map(|s| s.len()).collect(),
                draws,
                fraction: report.fraction,
                min_rel_sv: report.min_rel_sv,
            });
            if kind == "grid" {
                break; // one canonical grid profile is enough
            }
        }
    }
    Ok(rows)
}

pub fn render_csv(rows: &[RegularityRow]) -> String {
    let mut out = String::from("kind,profile,sizes,draws,nonsingular_fraction,min_rel_sv\n");
    for row in rows {
        let sizes = row
            .sizes
            .iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>()
            .join("+");
        out.push_str(&format!(
            "{},{},{},{},{:.6},{:.3e}\n",
            row.kind, row.profile, sizes, row.draws, row.fraction, row.min_rel_sv
        ));
    }
    out
}
