//! Compressed sparse row storage for the symmetric global stiffness.
//! The full pattern is stored (not just a triangle) so matrix–vector
//! products stay simple and cache-friendly.

use crate::mesh::DofMap;

#[derive(Debug, Clone)]
pub struct CsrMatrix {
    n: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl CsrMatrix {
    /// Build from unordered triplets; duplicates are summed. Triplet
    /// order does not affect the result beyond float associativity, and
    /// the sort is stable for equal keys, so assembly is deterministic
    /// for a fixed scatter order.
    pub fn from_triplets(n: usize, triplets: &mut [(usize, usize, f64)]) -> Self {
        triplets.sort_by_key(|&(r, c, _)| (r, c));
        let mut row_ptr = vec![0usize; n + 1];
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        let mut last: Option<(usize, usize)> = None;
        for &(r, c, v) in triplets.iter() {
            if last == Some((r, c)) {
                *values.last_mut().unwrap() += v;
            } else {
                col_idx.push(c);
                values.push(v);
                row_ptr[r + 1] = col_idx.len();
                last = Some((r, c));
            }
        }
        // rows without entries inherit the previous offset
        for r in 0..n {
            if row_ptr[r + 1] < row_ptr[r] {
                row_ptr[r + 1] = row_ptr[r];
            }
        }
        Self {
            n,
            row_ptr,
            col_idx,
            values,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row(&self, r: usize) -> (&[usize], &[f64]) {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        (&self.col_idx[span.clone()], &self.values[span])
    }

    pub fn diagonal(&self) -> Vec<f64> {
        let mut d = vec![0.0; self.n];
        for r in 0..self.n {
            let (cols, vals) = self.row(r);
            if let Some(k) = cols.iter().position(|&c| c == r) {
                d[r] = vals[k];
            }
        }
        d
    }

    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        debug_assert_eq!(x.len(), self.n);
        debug_assert_eq!(y.len(), self.n);
        for r in 0..self.n {
            let (cols, vals) = self.row(r);
            let mut s = 0.0;
            for (c, v) in cols.iter().zip(vals) {
                s += v * x[*c];
            }
            y[r] = s;
        }
    }

    /// Largest |row − col| over the nonzero pattern.
    pub fn half_bandwidth(&self) -> usize {
        let mut hb = 0usize;
        for r in 0..self.n {
            let (cols, _) = self.row(r);
            for &c in cols {
                hb = hb.max(r.abs_diff(c));
            }
        }
        hb
    }

    /// Restriction to the free DOFs of `map`, with rows and columns
    /// renumbered densely in ascending order.
    pub fn restrict(&self, map: &DofMap) -> CsrMatrix {
        let nf = map.free_count();
        let mut row_ptr = Vec::with_capacity(nf + 1);
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        row_ptr.push(0);
        for free_r in 0..nf {
            let r = map.dof_of_free_index(free_r);
            let (cols, vals) = self.row(r);
            for (c, v) in cols.iter().zip(vals) {
                if let Some(free_c) = map.free_index(*c) {
                    col_idx.push(free_c);
                    values.push(*v);
                }
            }
            row_ptr.push(col_idx.len());
        }
        CsrMatrix {
            n: nf,
            row_ptr,
            col_idx,
            values,
        }
    }

    pub fn to_dense(&self) -> nalgebra::DMatrix<f64> {
        let mut m = nalgebra::DMatrix::zeros(self.n, self.n);
        for r in 0..self.n {
            let (cols, vals) = self.row(r);
            for (c, v) in cols.iter().zip(vals) {
                m[(r, *c)] = *v;
            }
        }
        m
    }

    /// Relative asymmetry ‖K − Kᵀ‖∞ / max|K|, for diagnostics and tests.
    pub fn asymmetry(&self) -> f64 {
        let mut max_abs = 0.0f64;
        let mut max_diff = 0.0f64;
        for r in 0..self.n {
            let (cols, vals) = self.row(r);
            for (c, v) in cols.iter().zip(vals) {
                max_abs = max_abs.max(v.abs());
                let (tcols, tvals) = self.row(*c);
                let vt = match tcols.binary_search(&r) {
                    Ok(k) => tvals[k],
                    Err(_) => 0.0,
                };
                max_diff = max_diff.max((v - vt).abs());
            }
        }
        if max_abs == 0.0 {
            0.0
        } else {
            max_diff / max_abs
        }
    }
}
