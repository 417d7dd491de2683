use alloc::vec;
use alloc::vec::Vec;

/// Sparse integer matrix stored as sorted rows of `(column, value)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<(usize, i64)>>,
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntegerMatrix {
            rows,
            cols,
            data: vec![Vec::new(); rows],
        }
    }

    pub fn from_dense(dense: &[Vec<i64>], rows: usize, cols: usize) -> Self {
        let mut m = Self::zeros(rows, cols);
        for (i, row) in dense.iter().enumerate().take(rows) {
            for (j, &v) in row.iter().enumerate().take(cols) {
                if v != 0 {
                    m.data[i].push((j, v));
                }
            }
        }
        m
    }

    /// Entries are summed when a position repeats.
    pub fn from_triplets(rows: usize, cols: usize, triplets: impl IntoIterator<Item = (usize, usize, i64)>) -> Self {
        let mut m = Self::zeros(rows, cols);
        for (i, j, v) in triplets {
            assert!(i < rows && j < cols, "entry ({}, {}) outside {}x{}", i, j, rows, cols);
            m.data[i].push((j, v));
        }
        for row in &mut m.data {
            row.sort_unstable_by_key(|e| e.0);
            let mut merged: Vec<(usize, i64)> = Vec::with_capacity(row.len());
            for &(j, v) in row.iter() {
                match merged.last_mut() {
                    Some((lj, lv)) if *lj == j => *lv += v,
                    _ => merged.push((j, v)),
                }
            }
            merged.retain(|e| e.1 != 0);
            *row = merged;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[(usize, i64)] {
        &self.data[i]
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i]
            .binary_search_by_key(&j, |e| e.0)
            .map(|k| self.data[i][k].1)
            .unwrap_or(0)
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, i64)> + '_ {
        self.data
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().map(move |&(j, v)| (i, j, v)))
    }

    pub fn transpose(&self) -> Self {
        Self::from_triplets(self.cols, self.rows, self.triplets().map(|(i, j, v)| (j, i, v)))
    }

    pub fn mul(&self, other: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut trip = Vec::new();
        for (i, row) in self.data.iter().enumerate() {
            for &(k, a) in row {
                for &(j, b) in &other.data[k] {
                    trip.push((i, j, a * b));
                }
            }
        }
        Self::from_triplets(self.rows, other.cols, trip)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }

    pub fn max_abs_entry(&self) -> i64 {
        self.triplets().map(|t| t.2.abs()).max().unwrap_or(0)
    }

    pub fn row_nnz(&self) -> Vec<usize> {
        self.data.iter().map(Vec::len).collect()
    }

    pub fn col_nnz(&self) -> Vec<usize> {
        let mut c = vec![0; self.cols];
        for (_, j, _) in self.triplets() {
            c[j] += 1;
        }
        c
    }

    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        let mut d = vec![vec![0; self.cols]; self.rows];
        for (i, j, v) in self.triplets() {
            d[i][j] = v;
        }
        d
    }

    /// Matrix-vector product over any ring the entries embed into.
    pub fn apply<T>(&self, x: &[T], embed: impl Fn(i64) -> T) -> Vec<T>
    where
        T: Clone + num_traits::Zero + core::ops::Mul<Output = T>,
    {
        assert_eq!(x.len(), self.cols, "vector length mismatch");
        self.data
            .iter()
            .map(|row| {
                row.iter()
                    .fold(T::zero(), |acc, &(j, v)| acc + embed(v) * x[j].clone())
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triplets_merge_and_cancel() {
        let m = IntegerMatrix::from_triplets(2, 2, [(0, 0, 1), (0, 0, 2), (1, 1, 1), (1, 1, -1)]);
        assert_eq!(m.get(0, 0), 3);
        assert_eq!(m.nnz(), 1);
    }

    #[test]
    fn transpose_and_product() {
        let a = IntegerMatrix::from_dense(&[vec![1, 2], vec![0, -1]], 2, 2);
        let t = a.transpose();
        assert_eq!(t.to_dense(), vec![vec![1, 0], vec![2, -1]]);
        assert_eq!(a.mul(&t).to_dense(), vec![vec![5, -2], vec![-2, 1]]);
        let v: Vec<i64> = a.apply(&[1i64, 1], |v| v);
        assert_eq!(v, vec![3, -1]);
    }
}
