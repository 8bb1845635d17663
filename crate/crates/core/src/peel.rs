//! Peeling decoder for grid coding.
//!
//! Evaluation points form a rectangular grid of `n_a * m_a` x-values by
//! `n_b * m_b` y-values. A grid column (fixed x) holds evaluations of a
//! univariate polynomial of degree `L - 1` in y, so any `L` known cells
//! complete the column; rows complete with `K` known cells symmetrically.
//! Completions cascade until a fixpoint. The product is decodable once `K`
//! columns are complete (equivalently every row then completes too).

/// Incremental known-cell state over the evaluation grid.
#[derive(Debug, Clone)]
pub struct GridState {
    cols: usize,
    rows: usize,
    k: usize,
    l: usize,
    known: Vec<bool>,
    col_count: Vec<usize>,
    row_count: Vec<usize>,
    col_done: Vec<bool>,
    row_done: Vec<bool>,
    decoded_cols: usize,
    decoded_rows: usize,
    received: usize,
}

impl GridState {
    /// Grid of `cols` x-values by `rows` y-values for a `K x L` product.
    pub fn new(cols: usize, rows: usize, k: usize, l: usize) -> Self {
        assert!(cols >= k && rows >= l, "grid must cover the product");
        GridState {
            cols,
            rows,
            k,
            l,
            known: vec![false; cols * rows],
            col_count: vec![0; cols],
            row_count: vec![0; rows],
            col_done: vec![false; cols],
            row_done: vec![false; rows],
            decoded_cols: 0,
            decoded_rows: 0,
            received: 0,
        }
    }

    fn idx(&self, col: usize, row: usize) -> usize {
        col * self.rows + row
    }

    pub fn is_known(&self, col: usize, row: usize) -> bool {
        self.known[self.idx(col, row)]
    }

    /// Feeds one received computation and cascades completions.
    /// Returns true when the cell was not already known.
    pub fn add_received(&mut self, col: usize, row: usize) -> bool {
        self.received += 1;
        let fresh = !self.is_known(col, row);
        if fresh {
            self.mark(col, row);
            self.cascade();
        }
        fresh
    }

    fn mark(&mut self, col: usize, row: usize) {
        let i = self.idx(col, row);
        if !self.known[i] {
            self.known[i] = true;
            self.col_count[col] += 1;
            self.row_count[row] += 1;
        }
    }

    fn cascade(&mut self) {
        loop {
            let mut changed = false;
            for col in 0..self.cols {
                if !self.col_done[col] && self.col_count[col] >= self.l {
                    self.col_done[col] = true;
                    self.decoded_cols += 1;
                    for row in 0..self.rows {
                        self.mark(col, row);
                    }
                    changed = true;
                }
            }
            for row in 0..self.rows {
                if !self.row_done[row] && self.row_count[row] >= self.k {
                    self.row_done[row] = true;
                    self.decoded_rows += 1;
                    for col in 0..self.cols {
                        self.mark(col, row);
                    }
                    changed = true;
                }
            }
            if !changed {
                return;
            }
        }
    }

    pub fn decodable(&self) -> bool {
        self.decoded_cols >= self.k
    }

    pub fn received(&self) -> usize {
        self.received
    }

    pub fn decoded_columns(&self) -> usize {
        self.decoded_cols
    }

    pub fn decoded_rows(&self) -> usize {
        self.decoded_rows
    }
}

/// Peeling outcome summary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PeelOutcome {
    pub decodable: bool,
    /// Computations contributing to the decoded product: the full `K*L` once
    /// decodable, otherwise everything received so far.
    pub useful: usize,
    pub received: usize,
}

/// Reads off the peeling fixpoint already maintained by [`GridState`].
pub fn bproc_peel(state: &GridState) -> PeelOutcome {
    let decodable = state.decodable();
    PeelOutcome {
        decodable,
        useful: if decodable {
            state.k * state.l
        } else {
            state.received
        },
        received: state.received,
    }
}
