//! Invariant factors of integer matrices.
//!
//! Simplicial incidence matrices are very sparse with unit entries, so a
//! sparse phase first eliminates every available ±1 pivot using checked
//! `i64` arithmetic. Whatever is left (usually a handful of rows carrying the
//! torsion) goes through a dense Smith normal form over `BigInt`.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::modular::{inv_mod, mul_mod};
use super::IntegerMatrix;

/// Nonzero invariant factors `d₁ | d₂ | … | d_rank` (all positive; units
/// included). The rank of the matrix is the length of the result.
pub fn invariant_factors(m: &IntegerMatrix) -> Vec<BigInt> {
    let mut sparse = SparseReducer::new(m);
    let units = sparse.eliminate_units();
    let rest = sparse.into_dense();
    let mut factors: Vec<BigInt> = vec![BigInt::one(); units];
    factors.extend(dense_invariant_factors(rest));
    normalize_chain(&mut factors);
    factors
}

/// Rank over ℚ.
pub fn integer_rank(m: &IntegerMatrix) -> usize {
    invariant_factors(m).len()
}

struct SparseReducer {
    cols: usize,
    rows: Vec<Option<Vec<(usize, i64)>>>,
    col_rows: Vec<BTreeSet<usize>>,
}

impl SparseReducer {
    fn new(m: &IntegerMatrix) -> Self {
        let mut col_rows = vec![BTreeSet::new(); m.cols()];
        let rows = (0..m.rows())
            .map(|i| {
                let r = m.row(i).to_vec();
                for &(j, _) in &r {
                    col_rows[j].insert(i);
                }
                Some(r)
            })
            .collect();
        SparseReducer {
            cols: m.cols(),
            rows,
            col_rows,
        }
    }

    fn pick_unit(&self) -> Option<(usize, usize, i64)> {
        let mut best: Option<(usize, usize, usize, i64)> = None;
        for (i, row) in self.rows.iter().enumerate() {
            let Some(row) = row else { continue };
            if let Some((c, ..)) = best {
                if c == 0 {
                    break;
                }
            }
            for &(j, v) in row {
                if v.abs() != 1 {
                    continue;
                }
                let cost = (row.len() - 1) * (self.col_rows[j].len() - 1);
                if best.is_none_or(|b| cost < b.0) {
                    best = Some((cost, i, j, v));
                }
            }
        }
        best.map(|(_, i, j, v)| (i, j, v))
    }

    /// Returns the number of unit pivots eliminated.
    fn eliminate_units(&mut self) -> usize {
        let mut count = 0;
        while let Some((pr, pc, pv)) = self.pick_unit() {
            let prow = self.rows[pr].take().unwrap();
            for &(j, _) in &prow {
                self.col_rows[j].remove(&pr);
            }
            let targets: Vec<usize> = self.col_rows[pc].iter().copied().collect();
            let mut overflow = false;
            for t in targets {
                let trow = self.rows[t].as_ref().unwrap();
                let tv = trow.iter().find(|e| e.0 == pc).unwrap().1;
                let factor = tv * pv;
                match axpy(trow, &prow, factor) {
                    Some(new) => {
                        for &(j, _) in trow {
                            self.col_rows[j].remove(&t);
                        }
                        for &(j, _) in &new {
                            self.col_rows[j].insert(t);
                        }
                        self.rows[t] = Some(new);
                    }
                    None => {
                        overflow = true;
                        break;
                    }
                }
            }
            if overflow {
                // Put the pivot row back untouched and let the dense phase finish.
                for &(j, _) in &prow {
                    self.col_rows[j].insert(pr);
                }
                self.rows[pr] = Some(prow);
                break;
            }
            // The pivot column is now zero outside the pivot row, so column
            // operations clear the rest of the pivot row without touching
            // any other row.
            count += 1;
        }
        count
    }

    fn into_dense(self) -> Vec<Vec<BigInt>> {
        let live_cols: Vec<usize> = (0..self.cols)
            .filter(|&j| !self.col_rows[j].is_empty())
            .collect();
        let mut index = vec![usize::MAX; self.cols];
        for (k, &j) in live_cols.iter().enumerate() {
            index[j] = k;
        }
        self.rows
            .into_iter()
            .flatten()
            .filter(|r| !r.is_empty())
            .map(|r| {
                let mut dense = vec![BigInt::zero(); live_cols.len()];
                for (j, v) in r {
                    dense[index[j]] = BigInt::from(v);
                }
                dense
            })
            .collect()
    }
}

/// `target − factor·source`, or `None` on overflow.
fn axpy(target: &[(usize, i64)], source: &[(usize, i64)], factor: i64) -> Option<Vec<(usize, i64)>> {
    let mut out = Vec::with_capacity(target.len() + source.len());
    let (mut a, mut b) = (0, 0);
    while a < target.len() || b < source.len() {
        let ja = target.get(a).map_or(usize::MAX, |e| e.0);
        let jb = source.get(b).map_or(usize::MAX, |e| e.0);
        let (j, v) = if ja < jb {
            a += 1;
            (ja, target[a - 1].1)
        } else if jb < ja {
            b += 1;
            (jb, source[b - 1].1.checked_mul(factor)?.checked_neg()?)
        } else {
            a += 1;
            b += 1;
            (ja, target[a - 1].1.checked_sub(source[b - 1].1.checked_mul(factor)?)?)
        };
        if v != 0 {
            out.push((j, v));
        }
    }
    Some(out)
}

/// Diagonal of a Smith normal form of a dense matrix (nonzero entries only,
/// not yet normalized into a divisibility chain).
fn dense_invariant_factors(mut a: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let m = a.len();
    if m == 0 {
        return Vec::new();
    }
    let n = a[0].len();
    let mut diag = Vec::new();
    for t in 0..m.min(n) {
        // Smallest nonzero entry of the trailing block.
        let mut best: Option<(usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(t) {
            for (j, v) in row.iter().enumerate().skip(t) {
                if !v.is_zero() && best.is_none_or(|(bi, bj)| v.abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        a.swap(t, bi);
        for row in a.iter_mut() {
            row.swap(t, bj);
        }
        loop {
            let mut clean = true;
            for i in t + 1..m {
                if !a[i][t].is_zero() {
                    let q = a[i][t].div_floor(&a[t][t]);
                    let pivot_row = a[t].clone();
                    for (x, p) in a[i].iter_mut().zip(pivot_row.iter()).skip(t) {
                        *x -= &q * p;
                    }
                    if !a[i][t].is_zero() {
                        clean = false;
                    }
                }
            }
            for j in t + 1..n {
                if !a[t][j].is_zero() {
                    let q = a[t][j].div_floor(&a[t][t]);
                    for row in a.iter_mut().skip(t) {
                        let p = row[t].clone();
                        row[j] -= &q * p;
                    }
                    if !a[t][j].is_zero() {
                        clean = false;
                    }
                }
            }
            if clean {
                break;
            }
            // Move the smallest remainder in row/column t into the pivot.
            let mut best = (t, t);
            for i in t + 1..m {
                if !a[i][t].is_zero() && a[i][t].abs() < a[best.0][best.1].abs() {
                    best = (i, t);
                }
            }
            for j in t + 1..n {
                if !a[t][j].is_zero() && a[t][j].abs() < a[best.0][best.1].abs() {
                    best = (t, j);
                }
            }
            if best.0 != t {
                a.swap(t, best.0);
            } else if best.1 != t {
                for row in a.iter_mut() {
                    row.swap(t, best.1);
                }
            }
        }
        diag.push(a[t][t].abs());
    }
    diag
}

/// Rewrite a diagonal into divisibility-chain form via gcd/lcm exchanges.
fn normalize_chain(d: &mut [BigInt]) {
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            let g = d[i].gcd(&d[j]);
            if g != d[i] {
                let l = d[i].lcm(&d[j]);
                d[i] = g;
                d[j] = l;
            }
        }
    }
}

/// Rank of an integer matrix reduced modulo a prime `p`.
pub fn rank_mod_p(rows: &[Vec<i64>], p: u64) -> usize {
    assert!(p >= 2, "modulus must be at least 2");
    let mut a: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| r.iter().map(|&v| v.rem_euclid(p as i64) as u64).collect())
        .collect();
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..n {
        let Some(pr) = (rank..m).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(rank, pr);
        let inv = inv_mod(a[rank][c], p);
        for x in a[rank].iter_mut() {
            *x = mul_mod(*x, inv, p);
        }
        for i in 0..m {
            if i != rank && a[i][c] != 0 {
                let f = a[i][c];
                let pivot = a[rank].clone();
                for (x, y) in a[i].iter_mut().zip(pivot.iter()) {
                    *x = (*x + p - mul_mod(f, *y, p)) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn factors(d: &[Vec<i64>]) -> Vec<i64> {
        let m = IntegerMatrix::from_dense(d, d.len(), d.first().map_or(0, Vec::len));
        invariant_factors(&m)
            .iter()
            .map(|b| i64::try_from(b).unwrap())
            .collect()
    }

    #[test]
    fn small_cases() {
        assert_eq!(factors(&[vec![2], vec![-3]]), vec![1]);
        assert_eq!(factors(&[vec![5]]), vec![5]);
        assert_eq!(factors(&[vec![0, 0]]), Vec::<i64>::new());
        assert_eq!(factors(&[vec![2, 0], vec![0, 3]]), vec![1, 6]);
        assert_eq!(factors(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]), vec![2, 6, 12]);
    }

    #[test]
    fn prime_rank() {
        assert_eq!(rank_mod_p(&[vec![2, 4], vec![1, 2]], 2), 1);
        assert_eq!(rank_mod_p(&[vec![2, 4], vec![1, 3]], 3), 2);
        assert_eq!(rank_mod_p(&[vec![5]], 5), 0);
    }

    /// Determinantal divisors: gcd of all k×k minors equals d₁⋯d_k.
    fn minors_gcd(a: &[Vec<i64>], k: usize) -> i64 {
        fn det(m: &[Vec<i64>]) -> i64 {
            if m.len() == 1 {
                return m[0][0];
            }
            let mut s = 0;
            for c in 0..m.len() {
                let sub: Vec<Vec<i64>> = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|&(j, _)| j != c).map(|(_, &v)| v).collect())
                    .collect();
                let sign = if c % 2 == 0 { 1 } else { -1 };
                s += sign * m[0][c] * det(&sub);
            }
            s
        }
        fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
            if k == 0 {
                return vec![vec![]];
            }
            if n < k {
                return vec![];
            }
            let mut out = subsets(n - 1, k);
            for mut s in subsets(n - 1, k - 1) {
                s.push(n - 1);
                out.push(s);
            }
            out
        }
        let (m, n) = (a.len(), a[0].len());
        let mut g = 0i64;
        for rs in subsets(m, k) {
            for cs in subsets(n, k) {
                let sub: Vec<Vec<i64>> = rs.iter().map(|&i| cs.iter().map(|&j| a[i][j]).collect()).collect();
                g = g.gcd(&det(&sub));
            }
        }
        g
    }

    proptest! {
        #[test]
        fn matches_determinantal_divisors(
            a in proptest::collection::vec(proptest::collection::vec(-4i64..5, 3), 1..4)
        ) {
            let f = factors(&a);
            for w in f.windows(2) {
                prop_assert_eq!(w[1] % w[0], 0);
            }
            let mut prod = 1i64;
            for k in 1..=a.len().min(3) {
                let g = minors_gcd(&a, k);
                if k <= f.len() {
                    prod *= f[k - 1];
                    prop_assert_eq!(g, prod);
                } else {
                    prop_assert_eq!(g, 0);
                }
            }
        }
    }
}
