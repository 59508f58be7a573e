use crate::scalar::Scalar;

/// Compressed sparse column matrix with sorted row indices.
#[derive(Debug, Clone, PartialEq)]
pub struct CscMatrix<T> {
    nrows: usize,
    ncols: usize,
    col_ptr: Vec<usize>,
    row_idx: Vec<usize>,
    values: Vec<T>,
}

impl<T: Scalar> CscMatrix<T> {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        CscMatrix {
            nrows,
            ncols,
            col_ptr: vec![0; ncols + 1],
            row_idx: Vec::new(),
            values: Vec::new(),
        }
    }

    /// Sums duplicate entries in input order, so equal triplet lists give bitwise-equal
    /// matrices.
    pub fn from_triplets(nrows: usize, ncols: usize, triplets: &[(usize, usize, T)]) -> Self {
        let mut order: Vec<usize> = (0..triplets.len()).collect();
        order.sort_by_key(|&k| (triplets[k].1, triplets[k].0));
        let mut col_ptr = vec![0usize; ncols + 1];
        let mut row_idx = Vec::with_capacity(triplets.len());
        let mut values: Vec<T> = Vec::with_capacity(triplets.len());
        let mut last: Option<(usize, usize)> = None;
        for k in order {
            let (i, j, v) = triplets[k];
            assert!(i < nrows && j < ncols, "triplet ({i}, {j}) outside {nrows}x{ncols}");
            if last == Some((i, j)) {
                *values.last_mut().expect("entry exists") += v;
            } else {
                row_idx.push(i);
                values.push(v);
                col_ptr[j + 1] += 1;
                last = Some((i, j));
            }
        }
        for j in 0..ncols {
            col_ptr[j + 1] += col_ptr[j];
        }
        CscMatrix {
            nrows,
            ncols,
            col_ptr,
            row_idx,
            values,
        }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn col_ptr(&self) -> &[usize] {
        &self.col_ptr
    }

    pub fn row_idx(&self) -> &[usize] {
        &self.row_idx
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// Stored entries as `(row, col, value)`, column by column.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, T)> + '_ {
        (0..self.ncols).flat_map(move |j| {
            (self.col_ptr[j]..self.col_ptr[j + 1]).map(move |k| (self.row_idx[k], j, self.values[k]))
        })
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        let (lo, hi) = (self.col_ptr[j], self.col_ptr[j + 1]);
        match self.row_idx[lo..hi].binary_search(&i) {
            Ok(k) => self.values[lo + k],
            Err(_) => T::zero(),
        }
    }

    pub fn transpose(&self) -> Self {
        let t: Vec<_> = self.iter().map(|(i, j, v)| (j, i, v)).collect();
        CscMatrix::from_triplets(self.ncols, self.nrows, &t)
    }

    pub fn max_abs(&self) -> T {
        self.values.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }

    /// `max |A - A^T| / max |A|` (zero for the zero matrix).
    pub fn asymmetry(&self) -> T {
        let scale = self.max_abs();
        if scale == T::zero() {
            return T::zero();
        }
        let mut worst = T::zero();
        for (i, j, v) in self.iter() {
            worst = worst.max((v - self.get(j, i)).abs());
        }
        worst / scale
    }

    pub fn mul_vec(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.ncols);
        let mut y = vec![T::zero(); self.nrows];
        for (i, j, v) in self.iter() {
            y[i] += v * x[j];
        }
        y
    }

    /// Keeps the rows and columns listed in `keep` (ascending), renumbered 0..keep.len().
    pub fn restrict(&self, keep: &[usize]) -> Self {
        let mut new_id = vec![usize::MAX; self.nrows.max(self.ncols)];
        for (k, &g) in keep.iter().enumerate() {
            new_id[g] = k;
        }
        let t: Vec<_> = self
            .iter()
            .filter_map(|(i, j, v)| {
                let (a, b) = (new_id[i], new_id[j]);
                (a != usize::MAX && b != usize::MAX).then_some((a, b, v))
            })
            .collect();
        CscMatrix::from_triplets(keep.len(), keep.len(), &t)
    }

    /// Dense column-major copy in double precision.
    pub fn to_dense_f64(&self) -> Vec<f64> {
        let mut d = vec![0.0; self.nrows * self.ncols];
        for (i, j, v) in self.iter() {
            d[i + j * self.nrows] += v.to_f64_lossy();
        }
        d
    }

    pub fn cast<U: Scalar>(&self) -> CscMatrix<U> {
        CscMatrix {
            nrows: self.nrows,
            ncols: self.ncols,
            col_ptr: self.col_ptr.clone(),
            row_idx: self.row_idx.clone(),
            values: self.values.iter().map(|v| U::lit(v.to_f64_lossy())).collect(),
        }
    }
}
