//! Oracles written independently of the library code paths they check.
#![allow(dead_code)]

use std::collections::HashMap;

use grpvol_core::linalg::Rational;
use grpvol_core::simplicial::{Cochain, Triangulation};
use num_bigint::BigInt;
use rand::Rng;

/// Number of subgroups of index `n` in a free group of rank `r`, by Hall's
/// recursion `a_n = n (n!)^(r-1) - Σ_{k<n} ((n-k)!)^(r-1) a_k`.
pub fn hall_counts(r: u32, max: usize) -> Vec<BigInt> {
    let fact = |n: usize| (1..=n).fold(BigInt::from(1), |a, k| a * k);
    let mut a: Vec<BigInt> = Vec::new();
    for n in 1..=max {
        let mut v = BigInt::from(n) * fact(n).pow(r - 1);
        for k in 1..n {
            v -= fact(n - k).pow(r - 1) * &a[k - 1];
        }
        a.push(v);
    }
    a
}

/// Dense Gaussian elimination over `F_l`.
pub fn dense_rank_mod(mut m: Vec<Vec<i64>>, l: i64) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    for row in m.iter_mut() {
        for x in row.iter_mut() {
            *x = x.rem_euclid(l);
        }
    }
    let inv = |a: i64| {
        let (mut r, mut b, mut e) = (1i64, a, l - 2);
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % l;
            }
            b = b * b % l;
            e >>= 1;
        }
        r
    };
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&i| m[i][c] != 0) else { continue };
        m.swap(rank, p);
        let f = inv(m[rank][c]);
        let pivot: Vec<i64> = m[rank].iter().map(|x| x * f % l).collect();
        for i in rank + 1..rows {
            let k = m[i][c];
            if k != 0 {
                for j in c..cols {
                    m[i][j] = (m[i][j] - k * pivot[j]).rem_euclid(l);
                }
            }
        }
        m[rank] = pivot;
        rank += 1;
    }
    rank
}

/// Face of a sorted simplex with position `i` removed.
fn face(s: &[usize], i: usize) -> Vec<usize> {
    s.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, &v)| v).collect()
}

/// Dense coboundary `C^k → C^{k+1}` built from vertex lists alone.
pub fn dense_coboundary(lower: &[Vec<usize>], upper: &[Vec<usize>]) -> Vec<Vec<i64>> {
    let index: HashMap<&[usize], usize> = lower.iter().enumerate().map(|(i, s)| (s.as_slice(), i)).collect();
    upper
        .iter()
        .map(|s| {
            let mut row = vec![0i64; lower.len()];
            for i in 0..s.len() {
                row[index[face(s, i).as_slice()]] += if i % 2 == 0 { 1 } else { -1 };
            }
            row
        })
        .collect()
}

/// Simplex lists of every dimension, rebuilt from the tetrahedra.
pub fn skeleta(t: &Triangulation) -> [Vec<Vec<usize>>; 4] {
    let mut out: [Vec<Vec<usize>>; 4] = Default::default();
    for tet in t.tetrahedra() {
        for mask in 1u32..16 {
            let s: Vec<usize> = (0..4).filter(|i| mask >> i & 1 == 1).map(|i| tet[i]).collect();
            out[s.len() - 1].push(s);
        }
    }
    for k in &mut out {
        k.sort();
        k.dedup();
    }
    out
}

/// `dim H^k(M; F_l)` from dense ranks.
pub fn cohomology_dims_mod(t: &Triangulation, l: i64) -> [usize; 4] {
    let s = skeleta(t);
    let r: Vec<usize> = (0..3).map(|k| dense_rank_mod(dense_coboundary(&s[k], &s[k + 1]), l)).collect();
    let c: Vec<usize> = s.iter().map(Vec::len).collect();
    [c[0] - r[0], c[1] - r[1] - r[0], c[2] - r[2] - r[1], c[3] - r[2]]
}

/// `Σ ε_t ∂t` over the tetrahedra, as a map on triangles; empty for a
/// fundamental cycle.
pub fn boundary_of_fundamental_chain(t: &Triangulation, eps: &[i8]) -> HashMap<Vec<usize>, i64> {
    let mut acc: HashMap<Vec<usize>, i64> = HashMap::new();
    for (tet, &e) in t.tetrahedra().iter().zip(eps) {
        for i in 0..4 {
            let sign = if i % 2 == 0 { 1 } else { -1 };
            *acc.entry(face(tet, i)).or_default() += e as i64 * sign;
        }
    }
    acc.retain(|_, v| *v != 0);
    acc
}

/// Cup pairing summed straight from vertex-keyed cochains.
pub fn brute_cup(
    t: &Triangulation,
    eps: &[i8],
    alpha: &HashMap<[usize; 2], Rational>,
    gamma: &HashMap<[usize; 3], Rational>,
) -> Rational {
    let zero = Rational::from_integer(0.into());
    let mut sum = zero.clone();
    for (&[a, b, c, d], &e) in t.tetrahedra().iter().zip(eps) {
        let x = alpha.get(&[a, b]).unwrap_or(&zero) * gamma.get(&[b, c, d]).unwrap_or(&zero);
        sum += x * Rational::from_integer(e.into());
    }
    sum
}

pub fn rational(rng: &mut impl Rng, num: i64, den: i64) -> Rational {
    Rational::new(rng.gen_range(-num..=num).into(), rng.gen_range(1..=den).into())
}

/// Random rational 1-cochain.
pub fn random_potential(t: &Triangulation, rng: &mut impl Rng) -> Cochain {
    Cochain::from_dense(1, (0..t.edges().len()).map(|_| rational(rng, 9, 4)).collect())
}

/// Random rational 2-cocycle `dα₀`.
pub fn random_cocycle(t: &Triangulation, rng: &mut impl Rng) -> Cochain {
    random_potential(t, rng).coboundary(t)
}

/// Fraction-free Bareiss determinant.
pub fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    let mut sign = 1;
    let mut prev = BigInt::from(1);
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| m[i][k] != BigInt::from(0)) else { return BigInt::from(0) };
        if p != k {
            m.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
            }
            m[i][k] = BigInt::from(0);
        }
        prev = m[k][k].clone();
    }
    prev * sign
}
