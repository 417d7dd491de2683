//! Sparse elimination over `F_p` and the exact solvers built on it: `|det|`
//! by Chinese remaindering and `p`-adic lifting with rational
//! reconstruction for square nonsingular systems.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{IntegerMatrix, Rational};

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    (a as u128 * b as u128 % p as u128) as u64
}

pub(crate) fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    r
}

#[inline]
pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

#[inline]
fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

pub(crate) fn reduce_i64(v: i64, p: u64) -> u64 {
    v.rem_euclid(p as i64) as u64
}

fn reduce_big(v: &BigInt, p: u64) -> u64 {
    let r = v.mod_floor(&BigInt::from(p));
    u64::try_from(&r).unwrap()
}

/// Deterministic Miller–Rabin for all `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'bases: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Primes below `2⁶²`, descending.
fn primes() -> impl Iterator<Item = u64> {
    let mut n = (1u64 << 62) - 1;
    core::iter::from_fn(move || {
        while !is_prime(n) {
            n -= 2;
        }
        let p = n;
        n -= 2;
        Some(p)
    })
}

#[derive(Clone, Debug)]
struct ModPivot {
    row: usize,
    col: usize,
    inv: u64,
    rest: Vec<(usize, u64)>,
}

/// Sparse LU-style elimination modulo `p`, with the same Markowitz pivoting
/// as the rational elimination.
#[derive(Clone, Debug)]
pub struct ModularElimination {
    p: u64,
    rows: usize,
    cols: usize,
    ops: Vec<(u32, u32, u64)>,
    pivots: Vec<ModPivot>,
    zero_rows: Vec<usize>,
}

impl ModularElimination {
    pub fn new(m: &IntegerMatrix, p: u64) -> Self {
        let (nr, nc) = (m.rows(), m.cols());
        let mut rows: Vec<Option<Vec<(usize, u64)>>> = (0..nr)
            .map(|i| {
                Some(
                    m.row(i)
                        .iter()
                        .map(|&(j, v)| (j, reduce_i64(v, p)))
                        .filter(|e| e.1 != 0)
                        .collect(),
                )
            })
            .collect();
        let mut col_count = vec![0usize; nc];
        let mut col_rows: Vec<Vec<usize>> = vec![Vec::new(); nc];
        for (i, r) in rows.iter().enumerate() {
            for &(j, _) in r.as_ref().unwrap() {
                col_rows[j].push(i);
                col_count[j] += 1;
            }
        }
        let mut ops = Vec::new();
        let mut pivots = Vec::new();
        let mut live: Vec<usize> = (0..nr).collect();
        loop {
            // Markowitz (row length − 1)(column count − 1), unit entries
            // first, then lowest row and column.
            let mut best: Option<(usize, bool, usize, usize)> = None;
            live.retain(|&i| rows[i].as_ref().is_some_and(|r| !r.is_empty()));
            for &i in &live {
                let row = rows[i].as_ref().unwrap();
                let rl = row.len() - 1;
                if best.is_some_and(|b| b.0 == 0 && !b.1) {
                    break;
                }
                for &(j, v) in row {
                    let cost = rl * (col_count[j] - 1);
                    let non_unit = v != 1 && v != p - 1;
                    if best.is_none_or(|b| (cost, non_unit) < (b.0, b.1)) {
                        best = Some((cost, non_unit, i, j));
                    }
                }
            }
            let Some((_, _, pr, pc)) = best else { break };
            let prow = rows[pr].take().unwrap();
            for &(j, _) in &prow {
                col_count[j] -= 1;
            }
            let pval = prow.iter().find(|e| e.0 == pc).unwrap().1;
            let inv = inv_mod(pval, p);
            let mut targets: Vec<usize> = col_rows[pc]
                .iter()
                .copied()
                .filter(|&t| rows[t].as_ref().is_some_and(|r| r.binary_search_by_key(&pc, |e| e.0).is_ok()))
                .collect();
            targets.sort_unstable();
            targets.dedup();
            for t in targets {
                let trow = rows[t].take().unwrap();
                let tv = trow[trow.binary_search_by_key(&pc, |e| e.0).unwrap()].1;
                let factor = mul_mod(tv, inv, p);
                for &(j, _) in &trow {
                    col_count[j] -= 1;
                }
                let new = axpy_mod(&trow, &prow, factor, p);
                for &(j, _) in &new {
                    col_count[j] += 1;
                    if trow.binary_search_by_key(&j, |e| e.0).is_err() {
                        col_rows[j].push(t);
                    }
                }
                rows[t] = Some(new);
                ops.push((pr as u32, t as u32, factor));
            }
            let rest = prow.into_iter().filter(|e| e.0 != pc).collect();
            pivots.push(ModPivot {
                row: pr,
                col: pc,
                inv,
                rest,
            });
        }
        let zero_rows = (0..nr).filter(|&i| rows[i].is_some()).collect();
        ModularElimination {
            p,
            rows: nr,
            cols: nc,
            ops,
            pivots,
            zero_rows,
        }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    /// Determinant modulo `p` of a square matrix.
    pub fn det(&self) -> u64 {
        if !self.is_invertible() {
            return 0;
        }
        let p = self.p;
        let mut d = 1;
        for pv in &self.pivots {
            d = mul_mod(d, inv_mod(pv.inv, p), p);
        }
        let rows: Vec<usize> = self.pivots.iter().map(|x| x.row).collect();
        let cols: Vec<usize> = self.pivots.iter().map(|x| x.col).collect();
        if permutation_is_odd(&rows) != permutation_is_odd(&cols) {
            d = (p - d) % p;
        }
        d
    }

    /// A solution of `A x ≡ b`, free variables zero; `None` if inconsistent.
    pub fn solve(&self, b: &[u64]) -> Option<Vec<u64>> {
        let p = self.p;
        let mut y = b.to_vec();
        for &(src, dst, f) in &self.ops {
            let v = y[src as usize];
            if v != 0 {
                y[dst as usize] = sub_mod(y[dst as usize], mul_mod(f, v, p), p);
            }
        }
        if self.zero_rows.iter().any(|&r| y[r] != 0) {
            return None;
        }
        let mut x = vec![0u64; self.cols];
        for pv in self.pivots.iter().rev() {
            let mut acc = y[pv.row];
            for &(j, v) in &pv.rest {
                if x[j] != 0 {
                    acc = sub_mod(acc, mul_mod(v, x[j], p), p);
                }
            }
            x[pv.col] = mul_mod(acc, pv.inv, p);
        }
        Some(x)
    }
}

fn permutation_is_odd(perm: &[usize]) -> bool {
    let mut seen = vec![false; perm.len()];
    let mut odd = false;
    for s in 0..perm.len() {
        if seen[s] {
            continue;
        }
        let mut len = 0;
        let mut i = s;
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
            len += 1;
        }
        if len % 2 == 0 {
            odd = !odd;
        }
    }
    odd
}

fn axpy_mod(target: &[(usize, u64)], source: &[(usize, u64)], factor: u64, p: u64) -> Vec<(usize, u64)> {
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
            (jb, sub_mod(0, mul_mod(factor, source[b - 1].1, p), p))
        } else {
            a += 1;
            b += 1;
            (ja, sub_mod(target[a - 1].1, mul_mod(factor, source[b - 1].1, p), p))
        };
        if v != 0 {
            out.push((j, v));
        }
    }
    out
}

/// `log₂` of the Hadamard bound `Π ‖column‖₂`, rounded up.
fn hadamard_log2(m: &IntegerMatrix) -> f64 {
    let mut sq = vec![0f64; m.cols()];
    for (_, j, v) in m.triplets() {
        sq[j] += (v as f64) * (v as f64);
    }
    sq.iter().filter(|&&s| s > 0.0).map(|&s| 0.5 * libm::log2(s)).sum::<f64>() + 1.0
}

/// `|det|` of a square integer matrix by Chinese remaindering over enough
/// primes to exceed twice the Hadamard bound.
pub fn abs_det(m: &IntegerMatrix) -> BigInt {
    assert_eq!(m.rows(), m.cols(), "determinant of a non-square matrix");
    let need = hadamard_log2(m) + 2.0;
    let mut modulus = BigInt::one();
    let mut residue = BigInt::zero();
    let mut bits = 0.0;
    for p in primes() {
        let r = ModularElimination::new(m, p).det();
        // residue ≡ old mod modulus, ≡ r mod p
        let pb = BigInt::from(p);
        let cur = reduce_big(&residue, p);
        let inv = inv_mod(reduce_big(&modulus, p), p);
        let k = mul_mod(sub_mod(r, cur, p), inv, p);
        residue += &modulus * BigInt::from(k);
        modulus *= pb;
        bits += libm::log2(p as f64);
        if bits >= need {
            break;
        }
    }
    // symmetric residue
    if &residue * 2 > modulus {
        residue -= &modulus;
    }
    residue.abs()
}

/// Exact solver for a square nonsingular integer system by `p`-adic lifting.
#[derive(Clone, Debug)]
pub struct DixonSolver {
    matrix: IntegerMatrix,
    lu: ModularElimination,
    /// Digits after which reconstruction is guaranteed, given a right-hand
    /// side with unit column norm.
    log2_matrix_bound: f64,
}

impl DixonSolver {
    /// `None` when the matrix is not square or is singular modulo every
    /// prime tried, which for small entries means singular.
    pub fn new(m: &IntegerMatrix) -> Option<Self> {
        if m.rows() != m.cols() {
            return None;
        }
        let lu = primes().take(3).map(|p| ModularElimination::new(m, p)).find(|e| e.is_invertible())?;
        Some(DixonSolver {
            log2_matrix_bound: hadamard_log2(m),
            matrix: m.clone(),
            lu,
        })
    }

    /// Prime modulo which the matrix is nonsingular: an invertibility
    /// certificate over `ℚ`.
    pub fn prime(&self) -> u64 {
        self.lu.prime()
    }

    pub fn size(&self) -> usize {
        self.matrix.rows()
    }

    /// The unique `x` with `A x = b`, verified exactly.
    pub fn solve(&self, b: &[Rational]) -> Vec<Rational> {
        let n = self.size();
        assert_eq!(b.len(), n, "right-hand side length");
        let den = b.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let rhs: Vec<BigInt> = b.iter().map(|v| v.numer() * (&den / v.denom())).collect();
        if rhs.iter().all(Zero::is_zero) {
            return vec![Rational::zero(); n];
        }
        let p = self.lu.prime();
        let pb = BigInt::from(p);
        let log2_p = libm::log2(p as f64);
        let b_bits = rhs.iter().map(BigInt::bits).max().unwrap_or(0) as f64;
        let b_norm = b_bits + 0.5 * libm::log2(n as f64) + 1.0;
        // numerators ≤ H(A with b), denominators ≤ H(A); need p^k > 2·N·D.
        let max_digits = libm::ceil((2.0 * self.log2_matrix_bound + b_norm + 4.0) / log2_p) as usize + 2;

        let mut residual = rhs.clone();
        let mut acc = vec![BigInt::zero(); n];
        let mut power = BigInt::one();
        let mut next_try = 4usize;
        for k in 1..=max_digits {
            let r_mod: Vec<u64> = residual.iter().map(|v| reduce_big(v, p)).collect();
            let digit = self.lu.solve(&r_mod).expect("nonsingular modulo p");
            // residual ← (residual − A·digit) / p
            for (i, row) in (0..n).map(|i| (i, self.matrix.row(i))) {
                let mut s = core::mem::take(&mut residual[i]);
                for &(j, v) in row {
                    if digit[j] != 0 {
                        s -= BigInt::from(v) * BigInt::from(digit[j]);
                    }
                }
                debug_assert!((&s % &pb).is_zero());
                residual[i] = s / &pb;
            }
            for (a, &d) in acc.iter_mut().zip(&digit) {
                if d != 0 {
                    *a += &power * d;
                }
            }
            power *= &pb;
            if k >= next_try || k == max_digits {
                next_try = k + k.div_ceil(4).max(2);
                if let Some(x) = self.reconstruct(&acc, &power, &rhs) {
                    let den = Rational::from_integer(den);
                    return x.into_iter().map(|v| v / &den).collect();
                }
            }
        }
        panic!("p-adic lifting did not converge within the Hadamard bound");
    }

    /// Rational reconstruction with a running common denominator, accepted
    /// only if `A x = rhs` holds exactly.
    fn reconstruct(&self, acc: &[BigInt], m: &BigInt, rhs: &[BigInt]) -> Option<Vec<Rational>> {
        let bound = (m >> 1usize).sqrt();
        let mut common = BigInt::one();
        let mut nums = Vec::with_capacity(acc.len());
        for a in acc {
            let t = symmetric(&(a * &common).mod_floor(m), m);
            if t.abs() <= bound {
                nums.push(t);
                continue;
            }
            let (num, den) = rational_reconstruction(&t.mod_floor(m), m, &bound)?;
            // x = num / (den · common)
            for v in nums.iter_mut() {
                *v *= &den;
            }
            common *= &den;
            if common > bound {
                return None;
            }
            nums.push(num);
        }
        // A·nums = common · rhs
        for (i, r) in rhs.iter().enumerate() {
            let mut s = BigInt::zero();
            for &(j, v) in self.matrix.row(i) {
                s += &nums[j] * v;
            }
            if s != &common * r {
                return None;
            }
        }
        let c = Rational::from_integer(common);
        Some(nums.into_iter().map(|v| Rational::from_integer(v) / &c).collect())
    }
}

fn symmetric(r: &BigInt, m: &BigInt) -> BigInt {
    if r * 2 > *m {
        r - m
    } else {
        r.clone()
    }
}

/// `n/d ≡ a (mod m)` with `|n|, d ≤ bound`.
fn rational_reconstruction(a: &BigInt, m: &BigInt, bound: &BigInt) -> Option<(BigInt, BigInt)> {
    let (mut r0, mut r1) = (m.clone(), a.clone());
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1.abs() > *bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = core::mem::replace(&mut r1, r2);
        t0 = core::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > *bound {
        return None;
    }
    if t1.sign() == Sign::Minus {
        Some((-r1, -t1))
    } else {
        Some((r1, t1))
    }
}
