//! Polynomial encoding of matrix partitions, including derivative (Hermite)
//! evaluations.
//!
//! The A-partitions are the coefficients of `A(x) = A_1 + A_2 x + ... + A_K x^(K-1)`
//! and the B-partitions of `B(y) = B_1 + B_2 y + ... + B_L y^(L-1)`. A worker
//! multiplying a `d_x`-th derivative of `A` by a `d_y`-th derivative of `B`
//! produces the mixed partial of `A(x)B(y)` at its point, which is what the
//! decoder interpolates.

use crate::error::{Error, Result};
use crate::Mat;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockKind {
    ASide,
    BSide,
}

/// One encoded partition as shipped to a worker.
#[derive(Debug, Clone)]
pub struct CodedBlock {
    pub kind: BlockKind,
    pub derivative_order: usize,
    pub eval_point: f64,
    pub payload: Mat,
}

/// `a! / (a - d)!` as a float; zero when `d > a`.
pub(crate) fn falling_factorial(a: usize, d: usize) -> f64 {
    if d > a {
        return 0.0;
    }
    (a - d + 1..=a).map(|v| v as f64).product()
}

fn eval_derivative(blocks: &[Mat], point: f64, d: usize, kind: BlockKind) -> Result<CodedBlock> {
    let degree_bound = blocks.len();
    if d >= degree_bound {
        return Err(Error::DerivativeOrderOutOfRange {
            order: d,
            max: degree_bound,
        });
    }
    let shape = blocks[0].shape();
    let mut payload = Mat::zeros(shape.0, shape.1);
    // d-th derivative of sum_j blocks[j] * t^j, evaluated by Horner on the
    // shifted coefficients.
    for j in (d..degree_bound).rev() {
        payload *= point;
        payload += blocks[j].scale(falling_factorial(j, d));
    }
    Ok(CodedBlock {
        kind,
        derivative_order: d,
        eval_point: point,
        payload,
    })
}

/// `d`-th derivative of the A-side encoding polynomial at `x`.
pub fn eval_poly_a(blocks: &[Mat], x: f64, d: usize) -> Result<CodedBlock> {
    eval_derivative(blocks, x, d, BlockKind::ASide)
}

/// `d`-th derivative of the B-side encoding polynomial at `y`.
pub fn eval_poly_b(blocks: &[Mat], y: f64, d: usize) -> Result<CodedBlock> {
    eval_derivative(blocks, y, d, BlockKind::BSide)
}

/// Univariate-scheme B encoding `sum_j B_j x^((j-1)K)`, i.e. `B(y)` at `y = x^K`.
pub fn eval_upc_b(blocks: &[Mat], k_partitions: usize, x: f64) -> CodedBlock {
    let y = x.powi(k_partitions as i32);
    let mut out = eval_derivative(blocks, y, 0, BlockKind::BSide).expect("order 0 always valid");
    out.eval_point = x;
    out
}

/// Product of one coded A-partition with one coded B-partition.
pub fn partial_product(a: &CodedBlock, b: &CodedBlock) -> Result<Mat> {
    if a.kind != BlockKind::ASide || b.kind != BlockKind::BSide {
        return Err(Error::DimensionMismatch {
            context: "partial product operands",
            expected: "A-side times B-side".into(),
            got: format!("{:?} times {:?}", a.kind, b.kind),
        });
    }
    if a.payload.ncols() != b.payload.nrows() {
        return Err(Error::DimensionMismatch {
            context: "partial product inner dimension",
            expected: format!("{}", a.payload.ncols()),
            got: format!("{}", b.payload.nrows()),
        });
    }
    Ok(&a.payload * &b.payload)
}
