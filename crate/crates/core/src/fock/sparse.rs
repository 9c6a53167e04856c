//! Compressed sparse row storage for square complex matrices.

use ndarray::{Array2, ArrayView2};
use num_complex::Complex64 as C64;

#[derive(Clone, Debug, PartialEq)]
pub struct CsrMatrix {
    n: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    data: Vec<C64>,
}

impl CsrMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            indptr: vec![0; n + 1],
            indices: Vec::new(),
            data: Vec::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            n,
            indptr: (0..=n).collect(),
            indices: (0..n).collect(),
            data: vec![C64::new(1.0, 0.0); n],
        }
    }

    /// Builds from `(row, col, value)` triplets; duplicates are summed and exact zeros dropped.
    pub fn from_triplets(n: usize, mut triplets: Vec<(usize, usize, C64)>) -> Self {
        triplets.sort_by_key(|&(r, c, _)| (r, c));
        let mut indptr = vec![0usize; n + 1];
        let mut indices = Vec::with_capacity(triplets.len());
        let mut data: Vec<C64> = Vec::with_capacity(triplets.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in triplets {
            assert!(r < n && c < n, "triplet ({r}, {c}) out of bounds for {n}x{n}");
            if last == Some((r, c)) {
                *data.last_mut().unwrap() += v;
            } else {
                indices.push(c);
                data.push(v);
                indptr[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for i in 0..n {
            indptr[i + 1] += indptr[i];
        }
        Self { n, indptr, indices, data }.pruned()
    }

    pub fn from_dense(m: &ArrayView2<C64>) -> Self {
        let n = m.nrows();
        assert_eq!(n, m.ncols(), "CSR storage requires a square matrix");
        let mut indptr = Vec::with_capacity(n + 1);
        let mut indices = Vec::new();
        let mut data = Vec::new();
        indptr.push(0);
        for row in m.rows() {
            for (j, &v) in row.iter().enumerate() {
                if v != C64::new(0.0, 0.0) {
                    indices.push(j);
                    data.push(v);
                }
            }
            indptr.push(indices.len());
        }
        Self { n, indptr, indices, data }
    }

    fn pruned(self) -> Self {
        if self.data.iter().all(|v| *v != C64::new(0.0, 0.0)) {
            return self;
        }
        let mut triplets = Vec::with_capacity(self.data.len());
        for (r, c, v) in self.iter() {
            if v != C64::new(0.0, 0.0) {
                triplets.push((r, c, v));
            }
        }
        let mut indptr = vec![0usize; self.n + 1];
        let mut indices = Vec::with_capacity(triplets.len());
        let mut data = Vec::with_capacity(triplets.len());
        for (r, c, v) in triplets {
            indptr[r + 1] += 1;
            indices.push(c);
            data.push(v);
        }
        for i in 0..self.n {
            indptr[i + 1] += indptr[i];
        }
        Self { n: self.n, indptr, indices, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.data.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        (0..self.n).flat_map(move |r| {
            (self.indptr[r]..self.indptr[r + 1]).map(move |k| (r, self.indices[k], self.data[k]))
        })
    }

    pub fn row(&self, r: usize) -> (&[usize], &[C64]) {
        let span = self.indptr[r]..self.indptr[r + 1];
        (&self.indices[span.clone()], &self.data[span])
    }

    pub fn to_dense(&self) -> Array2<C64> {
        let mut out = Array2::zeros((self.n, self.n));
        for (r, c, v) in self.iter() {
            out[[r, c]] += v;
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        let triplets = self.iter().map(|(r, c, v)| (c, r, v.conj())).collect();
        Self::from_triplets(self.n, triplets)
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut out = self.clone();
        out.data.iter_mut().for_each(|v| *v *= s);
        out.pruned()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "CSR dimension mismatch");
        let triplets = self.iter().chain(other.iter()).collect();
        Self::from_triplets(self.n, triplets)
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "CSR dimension mismatch");
        let mut triplets = Vec::new();
        let mut acc = vec![C64::new(0.0, 0.0); self.n];
        let mut touched: Vec<usize> = Vec::new();
        let mut seen = vec![false; self.n];
        for r in 0..self.n {
            let (cols, vals) = self.row(r);
            for (&k, &a) in cols.iter().zip(vals) {
                let (cols2, vals2) = other.row(k);
                for (&c, &b) in cols2.iter().zip(vals2) {
                    if !seen[c] {
                        seen[c] = true;
                        touched.push(c);
                    }
                    acc[c] += a * b;
                }
            }
            for &c in &touched {
                triplets.push((r, c, acc[c]));
                acc[c] = C64::new(0.0, 0.0);
                seen[c] = false;
            }
            touched.clear();
        }
        Self::from_triplets(self.n, triplets)
    }

    pub fn kron(&self, other: &Self) -> Self {
        let n = self.n * other.n;
        let mut triplets = Vec::with_capacity(self.nnz() * other.nnz());
        for (r1, c1, v1) in self.iter() {
            for (r2, c2, v2) in other.iter() {
                triplets.push((r1 * other.n + r2, c1 * other.n + c2, v1 * v2));
            }
        }
        Self::from_triplets(n, triplets)
    }

    /// Largest absolute row sum (Gershgorin bound on the spectral radius).
    pub fn max_row_sum(&self) -> f64 {
        (0..self.n)
            .map(|r| self.row(r).1.iter().map(|v| v.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// `out += coef * self * m` for a row-major dense `m`.
    pub fn mul_dense_acc(&self, coef: C64, m: &[C64], out: &mut [C64]) {
        let n = self.n;
        debug_assert_eq!(m.len(), n * n);
        debug_assert_eq!(out.len(), n * n);
        for r in 0..n {
            let (cols, vals) = self.row(r);
            let out_row = &mut out[r * n..(r + 1) * n];
            for (&k, &v) in cols.iter().zip(vals) {
                let w = coef * v;
                let m_row = &m[k * n..(k + 1) * n];
                for (o, &x) in out_row.iter_mut().zip(m_row) {
                    *o += w * x;
                }
            }
        }
    }

    /// `out += coef * m * self` for a row-major dense `m`.
    pub fn dense_mul_acc(&self, coef: C64, m: &[C64], out: &mut [C64]) {
        let n = self.n;
        debug_assert_eq!(m.len(), n * n);
        debug_assert_eq!(out.len(), n * n);
        for i in 0..n {
            let m_row = &m[i * n..(i + 1) * n];
            let out_row = &mut out[i * n..(i + 1) * n];
            for (j, &x) in m_row.iter().enumerate() {
                if x == C64::new(0.0, 0.0) {
                    continue;
                }
                let w = coef * x;
                let (cols, vals) = self.row(j);
                for (&c, &v) in cols.iter().zip(vals) {
                    out_row[c] += w * v;
                }
            }
        }
    }

    pub(crate) fn indptr(&self) -> &[usize] {
        &self.indptr
    }

    pub(crate) fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub(crate) fn from_raw(n: usize, indptr: Vec<usize>, indices: Vec<usize>, data: Vec<C64>) -> Self {
        debug_assert_eq!(indptr.len(), n + 1);
        debug_assert_eq!(indices.len(), data.len());
        Self { n, indptr, indices, data }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn dense_round_trip_and_products() {
        let a = array![[c(1.0, 0.0), c(0.0, 2.0)], [c(0.0, 0.0), c(3.0, -1.0)]];
        let b = array![[c(0.5, 0.0), c(0.0, 0.0)], [c(1.0, 1.0), c(2.0, 0.0)]];
        let sa = CsrMatrix::from_dense(&a.view());
        let sb = CsrMatrix::from_dense(&b.view());
        assert_eq!(sa.to_dense(), a);
        assert_eq!(sa.matmul(&sb).to_dense(), a.dot(&b));
        assert_eq!(sa.add(&sb).to_dense(), &a + &b);
        assert_eq!(sa.adjoint().to_dense(), a.t().mapv(|z| z.conj()));

        let mut out = vec![c(0.0, 0.0); 4];
        sa.mul_dense_acc(c(1.0, 0.0), b.as_slice().unwrap(), &mut out);
        assert_eq!(out, a.dot(&b).into_raw_vec_and_offset().0);

        let mut out = vec![c(0.0, 0.0); 4];
        sa.dense_mul_acc(c(0.0, 1.0), b.as_slice().unwrap(), &mut out);
        let expected = b.dot(&a).mapv(|z| z * c(0.0, 1.0));
        assert_eq!(out, expected.into_raw_vec_and_offset().0);
    }

    #[test]
    fn kron_matches_block_structure() {
        let a = CsrMatrix::from_dense(&array![[c(0.0, 0.0), c(1.0, 0.0)], [c(2.0, 0.0), c(0.0, 0.0)]].view());
        let i = CsrMatrix::identity(2);
        let k = a.kron(&i).to_dense();
        assert_eq!(k[[0, 2]], c(1.0, 0.0));
        assert_eq!(k[[1, 3]], c(1.0, 0.0));
        assert_eq!(k[[2, 0]], c(2.0, 0.0));
        assert_eq!(k[[3, 1]], c(2.0, 0.0));
        assert_eq!(k.iter().filter(|v| **v != c(0.0, 0.0)).count(), 4);
    }

    #[test]
    fn duplicates_sum_and_zeros_drop() {
        let m = CsrMatrix::from_triplets(
            2,
            vec![(0, 1, c(1.0, 0.0)), (0, 1, c(-1.0, 0.0)), (1, 0, c(2.0, 0.0))],
        );
        assert_eq!(m.nnz(), 1);
        assert_eq!(m.to_dense()[[1, 0]], c(2.0, 0.0));
    }
}
