use alloc::vec::Vec;

/// Square sparse matrix in compressed-row form; columns ascending within a row.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    values: Vec<f64>,
    diag: Vec<usize>,
}

impl CsrMatrix {
    /// Builds from per-row `(column, value)` lists. Duplicate columns are
    /// summed; every row gets a diagonal slot.
    pub fn from_rows(rows: Vec<Vec<(usize, f64)>>) -> CsrMatrix {
        let n = rows.len();
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut cols = Vec::new();
        let mut values = Vec::new();
        let mut diag = Vec::with_capacity(n);
        row_ptr.push(0);
        for (i, mut row) in rows.into_iter().enumerate() {
            row.push((i, 0.0));
            row.sort_by_key(|&(c, _)| c);
            let start = cols.len();
            for (c, v) in row {
                if cols.len() > start && *cols.last().unwrap() == c {
                    *values.last_mut().unwrap() += v;
                } else {
                    cols.push(c);
                    values.push(v);
                }
            }
            diag.push(start + cols[start..].iter().position(|&c| c == i).unwrap());
            row_ptr.push(cols.len());
        }
        CsrMatrix {
            row_ptr,
            cols,
            values,
            diag,
        }
    }

    pub fn nrows(&self) -> usize {
        self.diag.len()
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// `(column, value)` pairs of row `i`, diagonal included.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        self.cols[r.clone()].iter().copied().zip(self.values[r].iter().copied())
    }

    pub fn diagonal(&self, i: usize) -> f64 {
        self.values[self.diag[i]]
    }

    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        self.row(i).find(|&(c, _)| c == j).map(|(_, v)| v)
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.nrows())
            .map(|i| self.row(i).map(|(c, v)| v * x[c]).sum())
            .collect()
    }

    /// ‖b − A x‖₁.
    pub fn residual_l1(&self, x: &[f64], b: &[f64]) -> f64 {
        (0..self.nrows())
            .map(|i| {
                let ax: f64 = self.row(i).map(|(c, v)| v * x[c]).sum();
                libm::fabs(b[i] - ax)
            })
            .sum()
    }

    fn relax(&self, i: usize, x: &mut [f64], b: &[f64]) {
        let mut s = b[i];
        for (c, v) in self.row(i) {
            if c != i {
                s -= v * x[c];
            }
        }
        x[i] = s / self.diagonal(i);
    }

    /// One forward then one backward Gauss-Seidel sweep.
    pub fn symmetric_gauss_seidel(&self, x: &mut [f64], b: &[f64]) {
        for i in 0..self.nrows() {
            self.relax(i, x, b);
        }
        for i in (0..self.nrows()).rev() {
            self.relax(i, x, b);
        }
    }
}
