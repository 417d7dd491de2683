use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use super::{tietze_simplify, Presentation};
use crate::linalg::{invariant_factors, IntegerMatrix};
use num_traits::One;

/// Abelianization `ℤ^free_rank ⊕ ℤ/d₁ ⊕ … ⊕ ℤ/d_k` with `d₁ | d₂ | …`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AbelianInvariants {
    pub free_rank: usize,
    pub torsion: Vec<u64>,
}

impl AbelianInvariants {
    /// Minimal number of generators of the abelian group.
    pub fn min_generators(&self) -> usize {
        self.free_rank + self.torsion.len()
    }
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<alloc::string::String> = Vec::new();
        if self.free_rank == 1 {
            parts.push("Z".into());
        } else if self.free_rank > 1 {
            parts.push(alloc::format!("Z^{}", self.free_rank));
        }
        for t in &self.torsion {
            parts.push(alloc::format!("Z/{}", t));
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// Integer extended by ±∞.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExtInt {
    NegInf,
    Finite(i64),
    PosInf,
}

impl ExtInt {
    pub fn finite(self) -> Option<i64> {
        match self {
            ExtInt::Finite(v) => Some(v),
            _ => None,
        }
    }
}

impl Ord for ExtInt {
    fn cmp(&self, other: &Self) -> Ordering {
        use ExtInt::*;
        match (self, other) {
            (Finite(a), Finite(b)) => a.cmp(b),
            (NegInf, NegInf) | (PosInf, PosInf) => Ordering::Equal,
            (NegInf, _) | (_, PosInf) => Ordering::Less,
            (PosInf, _) | (_, NegInf) => Ordering::Greater,
        }
    }
}

impl PartialOrd for ExtInt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ExtInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtInt::NegInf => f.write_str("-inf"),
            ExtInt::Finite(v) => write!(f, "{}", v),
            ExtInt::PosInf => f.write_str("+inf"),
        }
    }
}

/// Closed interval `[lo, hi]` certifying an uncomputable integer invariant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lo: ExtInt,
    pub hi: ExtInt,
}

impl Interval {
    pub fn new(lo: i64, hi: i64) -> Self {
        debug_assert!(lo <= hi);
        Interval {
            lo: ExtInt::Finite(lo),
            hi: ExtInt::Finite(hi),
        }
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Invariant factors of the exponent-sum relation matrix.
pub fn abelianization(p: &Presentation) -> AbelianInvariants {
    let g = p.generator_count();
    let m = IntegerMatrix::from_dense(&p.relation_matrix(), g, p.relator_count());
    let factors = invariant_factors(&m);
    let rank = factors.len();
    let torsion = factors
        .into_iter()
        .filter(|d| !d.is_one())
        .map(|d| u64::try_from(&d).expect("torsion coefficient exceeds u64"))
        .collect();
    AbelianInvariants {
        free_rank: g - rank,
        torsion,
    }
}

/// Certified interval for the rank `r(Γ)`: the abelianization gives the
/// lower end, the Tietze-simplified generator count the upper end.
pub fn rank_bounds(p: &Presentation, simplify_budget: usize) -> Interval {
    let lo = abelianization(p).min_generators() as i64;
    let hi = tietze_simplify(p, simplify_budget).generator_count() as i64;
    Interval::new(lo, hi)
}

/// Certified interval for the deficiency `def(Γ)`.
///
/// Tietze moves in the sound set never decrease `g − r`, so the best
/// explored deficiency is that of the simplified presentation. The upper
/// end is the rank upper bound since `def(Γ) ≤ r(Γ)`.
pub fn deficiency_bounds(p: &Presentation, simplify_budget: usize) -> Interval {
    let simplified = tietze_simplify(p, simplify_budget);
    let lo = p.deficiency().max(simplified.deficiency());
    let hi = simplified.generator_count() as i64;
    Interval::new(lo, hi)
}
