//! Exact sparse Gaussian elimination over ℚ.
//!
//! The factorization is computed once and reused for many right-hand sides.
//! Pivots are chosen by a Markowitz cost with a preference for unit entries;
//! ties break on the lowest row then column index, so the factorization (and
//! therefore every particular solution) is deterministic.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{IntegerMatrix, Rational};

#[derive(Clone, Debug)]
struct Pivot {
    row: usize,
    col: usize,
    value: Rational,
    /// Remaining entries of the pivot row, excluding the pivot itself.
    rest: Vec<(usize, Rational)>,
}

#[derive(Clone, Debug)]
pub struct Elimination {
    rows: usize,
    cols: usize,
    /// `b[target] -= factor · b[source]`, in order.
    ops: Vec<(u32, u32, Rational)>,
    pivots: Vec<Pivot>,
    /// Rows reduced to zero; a consistent right-hand side vanishes there.
    zero_rows: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SolveError {
    #[error("right-hand side has length {got}, expected {expected}")]
    Length { expected: usize, got: usize },
    #[error("system is inconsistent at row {row}")]
    Inconsistent { row: usize },
}

impl Elimination {
    pub fn new(m: &IntegerMatrix) -> Self {
        let (nr, nc) = (m.rows(), m.cols());
        let mut rows: Vec<Option<Vec<(usize, Rational)>>> = (0..nr)
            .map(|i| {
                Some(
                    m.row(i)
                        .iter()
                        .map(|&(j, v)| (j, Rational::from_integer(BigInt::from(v))))
                        .collect(),
                )
            })
            .collect();
        let mut col_rows: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); nc];
        for (i, r) in rows.iter().enumerate() {
            for (j, _) in r.as_ref().unwrap() {
                col_rows[*j].insert(i);
            }
        }
        let mut ops = Vec::new();
        let mut pivots = Vec::new();

        while let Some((pr, pc)) = pick_pivot(&rows, &col_rows) {
            let prow = rows[pr].take().unwrap();
            for (j, _) in &prow {
                col_rows[*j].remove(&pr);
            }
            let pval = prow.iter().find(|e| e.0 == pc).unwrap().1.clone();
            let targets: Vec<usize> = col_rows[pc].iter().copied().collect();
            for t in targets {
                let trow = rows[t].take().unwrap();
                let tv = &trow.iter().find(|e| e.0 == pc).unwrap().1;
                let factor = tv / &pval;
                for (j, _) in &trow {
                    col_rows[*j].remove(&t);
                }
                let new = axpy(&trow, &prow, &factor);
                for (j, _) in &new {
                    col_rows[*j].insert(t);
                }
                rows[t] = Some(new);
                ops.push((pr as u32, t as u32, factor));
            }
            let rest = prow.into_iter().filter(|e| e.0 != pc).collect();
            pivots.push(Pivot {
                row: pr,
                col: pc,
                value: pval,
                rest,
            });
        }
        let zero_rows = rows
            .iter()
            .enumerate()
            .filter(|(_, r)| r.is_some())
            .map(|(i, _)| i)
            .collect();
        Elimination {
            rows: nr,
            cols: nc,
            ops,
            pivots,
            zero_rows,
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    /// Number of stored multipliers; a rough fill-in measure.
    pub fn fill(&self) -> usize {
        self.ops.len() + self.pivots.iter().map(|p| p.rest.len() + 1).sum::<usize>()
    }

    /// `|det|` for a square matrix (zero when singular).
    pub fn abs_det(&self) -> Rational {
        if !self.is_invertible() {
            return Rational::zero();
        }
        self.pivots
            .iter()
            .fold(Rational::one(), |acc, p| acc * p.value.abs())
    }

    /// Columns that received a pivot.
    pub fn pivot_columns(&self) -> Vec<usize> {
        let mut c: Vec<usize> = self.pivots.iter().map(|p| p.col).collect();
        c.sort_unstable();
        c
    }

    /// A solution of `A x = b`, free variables set to zero.
    pub fn solve(&self, b: &[Rational]) -> Result<Vec<Rational>, SolveError> {
        if b.len() != self.rows {
            return Err(SolveError::Length {
                expected: self.rows,
                got: b.len(),
            });
        }
        let mut y = b.to_vec();
        for (src, dst, f) in &self.ops {
            let (src, dst) = (*src as usize, *dst as usize);
            if !y[src].is_zero() {
                let delta = f * &y[src];
                y[dst] -= delta;
            }
        }
        if let Some(&row) = self.zero_rows.iter().find(|&&r| !y[r].is_zero()) {
            return Err(SolveError::Inconsistent { row });
        }
        let mut x = vec![Rational::zero(); self.cols];
        for p in self.pivots.iter().rev() {
            let mut acc = y[p.row].clone();
            for (j, v) in &p.rest {
                if !x[*j].is_zero() {
                    acc -= v * &x[*j];
                }
            }
            x[p.col] = acc / &p.value;
        }
        Ok(x)
    }
}

fn pick_pivot(
    rows: &[Option<Vec<(usize, Rational)>>],
    col_rows: &[BTreeSet<usize>],
) -> Option<(usize, usize)> {
    // (cost, non-unit, row, col)
    let mut best: Option<(usize, bool, usize, usize)> = None;
    for (i, row) in rows.iter().enumerate() {
        let Some(row) = row else { continue };
        if row.is_empty() {
            continue;
        }
        let rl = row.len() - 1;
        if best.is_some_and(|b| b.0 == 0 && !b.1) {
            break;
        }
        for (j, v) in row {
            let cost = rl * (col_rows[*j].len() - 1);
            let non_unit = !(v.is_integer() && v.numer().abs().is_one());
            let key = (cost, non_unit, i, *j);
            if best.is_none_or(|b| (key.0, key.1) < (b.0, b.1)) {
                best = Some(key);
            }
        }
    }
    best.map(|b| (b.2, b.3))
}

fn axpy(
    target: &[(usize, Rational)],
    source: &[(usize, Rational)],
    factor: &Rational,
) -> Vec<(usize, Rational)> {
    let mut out = Vec::with_capacity(target.len() + source.len());
    let (mut a, mut b) = (0, 0);
    while a < target.len() || b < source.len() {
        let ja = target.get(a).map_or(usize::MAX, |e| e.0);
        let jb = source.get(b).map_or(usize::MAX, |e| e.0);
        let (j, v) = if ja < jb {
            a += 1;
            (ja, target[a - 1].1.clone())
        } else if jb < ja {
            b += 1;
            (jb, -(factor * &source[b - 1].1))
        } else {
            a += 1;
            b += 1;
            (ja, &target[a - 1].1 - factor * &source[b - 1].1)
        };
        if !v.is_zero() {
            out.push((j, v));
        }
    }
    out
}
