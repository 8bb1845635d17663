//! Matrix partitioning geometry shared by every coding scheme.

use crate::error::{Error, Result};
use crate::Mat;

/// Shapes of the factors and how they are split: `A (r x s)` into `k`
/// horizontal partitions, `B (s x c)` into `l` vertical partitions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PartitionPlan {
    pub r: usize,
    pub s: usize,
    pub c: usize,
    pub k: usize,
    pub l: usize,
}

impl PartitionPlan {
    pub fn new(r: usize, s: usize, c: usize, k: usize, l: usize) -> Result<Self> {
        if r == 0 || s == 0 || c == 0 {
            return Err(Error::DimensionMismatch {
                context: "matrix dimensions must be positive",
                expected: "r, s, c >= 1".into(),
                got: format!("r={r}, s={s}, c={c}"),
            });
        }
        if k == 0 || r % k != 0 {
            return Err(Error::IndivisiblePartition { dim: r, count: k });
        }
        if l == 0 || c % l != 0 {
            return Err(Error::IndivisiblePartition { dim: c, count: l });
        }
        Ok(Self { r, s, c, k, l })
    }

    /// Rows of one A-partition.
    pub fn a_block_rows(&self) -> usize {
        self.r / self.k
    }

    /// Columns of one B-partition.
    pub fn b_block_cols(&self) -> usize {
        self.c / self.l
    }

    /// Number of partial products making up the full job.
    pub fn total_products(&self) -> usize {
        self.k * self.l
    }
}

/// Splits `A` into `k` row blocks and `B` into `l` column blocks.
pub fn partition(a: &Mat, b: &Mat, plan: &PartitionPlan) -> Result<(Vec<Mat>, Vec<Mat>)> {
    if a.nrows() != plan.r || a.ncols() != plan.s {
        return Err(Error::DimensionMismatch {
            context: "A does not match plan",
            expected: format!("{}x{}", plan.r, plan.s),
            got: format!("{}x{}", a.nrows(), a.ncols()),
        });
    }
    if b.nrows() != plan.s || b.ncols() != plan.c {
        return Err(Error::DimensionMismatch {
            context: "B does not match plan",
            expected: format!("{}x{}", plan.s, plan.c),
            got: format!("{}x{}", b.nrows(), b.ncols()),
        });
    }
    let br = plan.a_block_rows();
    let bc = plan.b_block_cols();
    let a_blocks = (0..plan.k).map(|i| a.rows(i * br, br).into_owned()).collect();
    let b_blocks = (0..plan.l).map(|j| b.columns(j * bc, bc).into_owned()).collect();
    Ok((a_blocks, b_blocks))
}

/// Re-stacks A-partitions vertically; inverse of [`partition`] for the A side.
pub fn stack_a_blocks(blocks: &[Mat]) -> Mat {
    let rows: usize = blocks.iter().map(|b| b.nrows()).sum();
    let cols = blocks[0].ncols();
    let mut out = Mat::zeros(rows, cols);
    let mut at = 0;
    for b in blocks {
        out.rows_mut(at, b.nrows()).copy_from(b);
        at += b.nrows();
    }
    out
}

/// Re-concatenates B-partitions horizontally; inverse of [`partition`] for the B side.
pub fn concat_b_blocks(blocks: &[Mat]) -> Mat {
    let rows = blocks[0].nrows();
    let cols: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = Mat::zeros(rows, cols);
    let mut at = 0;
    for b in blocks {
        out.columns_mut(at, b.ncols()).copy_from(b);
        at += b.ncols();
    }
    out
}

/// Assembles the decoded coefficient blocks into the full product `AB`.
///
/// `blocks[t]` must be the coefficient of the monomial with exponents
/// `(a, b) = (t % k, t / k)`, which is the product of the `a`-th A-partition
/// with the `b`-th B-partition.
pub fn assemble_product(blocks: &[Mat], plan: &PartitionPlan) -> Result<Mat> {
    if blocks.len() != plan.total_products() {
        return Err(Error::WrongRowCount {
            expected: plan.total_products(),
            got: blocks.len(),
        });
    }
    let br = plan.a_block_rows();
    let bc = plan.b_block_cols();
    let mut out = Mat::zeros(plan.r, plan.c);
    for (t, block) in blocks.iter().enumerate() {
        let a = t % plan.k;
        let b = t / plan.k;
        out.view_mut((a * br, b * bc), (br, bc)).copy_from(block);
    }
    Ok(out)
}
