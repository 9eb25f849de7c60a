//! Dense Gaussian elimination helpers shared by the commutant and
//! subalgebra computations. Partial pivoting, absolute pivot threshold.

/// Reduce `rows` to row echelon form in place; returns the pivot column of
/// each nonzero row, in order.
pub(crate) fn row_echelon(rows: &mut [Vec<f64>], tol: f64) -> Vec<usize> {
    let nrows = rows.len();
    if nrows == 0 {
        return Vec::new();
    }
    let ncols = rows[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        // partial pivot: largest |entry| in column c at or below row r
        let (best, best_abs) = (r..nrows)
            .map(|i| (i, rows[i][c].abs()))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        if best_abs <= tol {
            continue;
        }
        rows.swap(r, best);
        let p = rows[r][c];
        for j in c..ncols {
            rows[r][j] /= p;
        }
        for i in 0..nrows {
            if i != r {
                let f = rows[i][c];
                if f != 0.0 {
                    for j in c..ncols {
                        rows[i][j] -= f * rows[r][j];
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Rank of the row span.
#[cfg_attr(not(test), allow(dead_code))]
pub(crate) fn rank(rows: &[Vec<f64>], tol: f64) -> usize {
    let mut work = rows.to_vec();
    row_echelon(&mut work, tol).len()
}

/// True if `candidate` lies in the row span of `rows`.
#[cfg_attr(not(test), allow(dead_code))]
pub(crate) fn span_contains(rows: &[Vec<f64>], candidate: &[f64], tol: f64) -> bool {
    let mut builder = SpanBuilder::new(tol);
    for row in rows {
        builder.insert(row);
    }
    builder.contains(candidate)
}

/// Incrementally maintained reduced row echelon basis of a span.
pub(crate) struct SpanBuilder {
    rows: Vec<Vec<f64>>,
    pivots: Vec<usize>,
    tol: f64,
}

impl SpanBuilder {
    pub(crate) fn new(tol: f64) -> Self {
        SpanBuilder {
            rows: Vec::new(),
            pivots: Vec::new(),
            tol,
        }
    }

    fn reduce(&self, v: &mut [f64]) {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let f = v[p];
            if f != 0.0 {
                for (x, r) in v.iter_mut().zip(row) {
                    *x -= f * r;
                }
            }
        }
    }

    /// Insert a vector; returns true when the span dimension grew.
    pub(crate) fn insert(&mut self, v: &[f64]) -> bool {
        let mut v = v.to_vec();
        self.reduce(&mut v);
        let (pivot, max_abs) = v
            .iter()
            .enumerate()
            .map(|(i, x)| (i, x.abs()))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap_or((0, 0.0));
        if max_abs <= self.tol {
            return false;
        }
        let scale = v[pivot];
        v.iter_mut().for_each(|x| *x /= scale);
        for row in self.rows.iter_mut() {
            let f = row[pivot];
            if f != 0.0 {
                for (r, x) in row.iter_mut().zip(&v) {
                    *r -= f * x;
                }
            }
        }
        self.rows.push(v);
        self.pivots.push(pivot);
        true
    }

    pub(crate) fn contains(&self, v: &[f64]) -> bool {
        let mut v = v.to_vec();
        self.reduce(&mut v);
        v.iter().all(|x| x.abs() <= self.tol)
    }

    #[cfg_attr(not(test), allow(dead_code))]
    pub(crate) fn dim(&self) -> usize {
        self.rows.len()
    }
}

/// A basis of the nullspace of the `nrows x ncols` system `A s = 0`.
pub(crate) fn nullspace_basis(a: &[Vec<f64>], ncols: usize, tol: f64) -> Vec<Vec<f64>> {
    let mut work = a.to_vec();
    let pivots = row_echelon(&mut work, tol);
    let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
    let free: Vec<usize> = (0..ncols).filter(|c| !pivot_set.contains(c)).collect();
    let mut basis = Vec::with_capacity(free.len());
    for &f in &free {
        let mut v = vec![0.0; ncols];
        v[f] = 1.0;
        // back-substitute pivot variables; rows are already fully reduced
        for (row_idx, &p) in pivots.iter().enumerate() {
            v[p] = -work[row_idx][f];
        }
        basis.push(v);
    }
    basis
}
