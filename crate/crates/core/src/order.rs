//! Per-worker computation orders over the derivative order space.
//!
//! The derivative order space is the `K x L` lattice of cells `(k, l)`,
//! standing for the product of the `k`-th x-derivative with the `l`-th
//! y-derivative. Workers traverse it in a scheme-specific priority order and
//! must stop the moment the next cell in that order is outside their stored
//! range (`k < m_a`, `l < m_b`).

/// N-zig-zag traversal: horizontal bands of `mu_b` rows taken bottom-up,
/// column-major inside each band. `mu_b = l` gives the vertical order.
///
/// Returns the prefix the worker can execute before the stop rule fires.
pub fn n_zigzag_order(
    k: usize,
    l: usize,
    mu_b: usize,
    m_a: usize,
    m_b: usize,
) -> Vec<(usize, usize)> {
    debug_assert!(mu_b >= 1 && l % mu_b == 0);
    let mut out = Vec::new();
    for band in 0..l / mu_b {
        for col in 0..k {
            for row in 0..mu_b {
                let cell = (col, band * mu_b + row);
                if cell.0 < m_a && cell.1 < m_b {
                    out.push(cell);
                } else {
                    return out;
                }
            }
        }
    }
    out
}

/// Z-zig-zag traversal: vertical bands of `mu_a` columns taken left-to-right,
/// row-major inside each band. `mu_a = k` gives the horizontal order.
pub fn z_zigzag_order(
    k: usize,
    l: usize,
    mu_a: usize,
    m_a: usize,
    m_b: usize,
) -> Vec<(usize, usize)> {
    debug_assert!(mu_a >= 1 && k % mu_a == 0);
    let mut out = Vec::new();
    for band in 0..k / mu_a {
        for row in 0..l {
            for col in 0..mu_a {
                let cell = (band * mu_a + col, row);
                if cell.0 < m_a && cell.1 < m_b {
                    out.push(cell);
                } else {
                    return out;
                }
            }
        }
    }
    out
}

/// Column-by-column order (complete column `k`, then column `k + 1`).
pub fn vertical_order(k: usize, l: usize, m_a: usize, m_b: usize) -> Vec<(usize, usize)> {
    n_zigzag_order(k, l, l, m_a, m_b)
}

/// Row-by-row order (complete row `l`, then row `l + 1`).
pub fn horizontal_order(k: usize, l: usize, m_a: usize, m_b: usize) -> Vec<(usize, usize)> {
    z_zigzag_order(k, l, k, m_a, m_b)
}

/// All cells of the worker's `m_a x m_b` rectangle, row-major. Used where the
/// traversal order carries no decoding meaning (grid coding shuffles it,
/// the lower bound ignores it).
pub fn rectangle_cells(m_a: usize, m_b: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(m_a * m_b);
    for col in 0..m_a {
        for row in 0..m_b {
            out.push((col, row));
        }
    }
    out
}

/// Priority score of a cell under the N-zig-zag order; lower runs first.
pub fn n_zigzag_score(k: usize, mu_b: usize, cell: (usize, usize)) -> usize {
    let (a, b) = cell;
    (b / mu_b) * (k * mu_b) + a * mu_b + (b % mu_b)
}

/// Priority score of a cell under the Z-zig-zag order; lower runs first.
pub fn z_zigzag_score(l: usize, mu_a: usize, cell: (usize, usize)) -> usize {
    let (a, b) = cell;
    (a / mu_a) * (l * mu_a) + b * mu_a + (a % mu_a)
}
