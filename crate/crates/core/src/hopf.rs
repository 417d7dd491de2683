//! The combinatorial Hopf pairing `(α ∪ γ, [M])` with `dα = γ`, its
//! Hadamard-type complexity bound, and its behaviour under cyclic covers.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::cell::OnceCell;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::linalg::{Elimination, IntegerMatrix, Rational, SolveError};
use crate::simplicial::{
    assemble_dplusdelta, cyclic_cover, homology, pullback_cochain, qhs_failure, Cochain, CochainError, Cover,
    CoverError, CoverSpec, DPlusDelta, DPlusDeltaError, QhsFailure, Triangulation,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Gauge {
    /// The unique solution with `δα = 0` on `C̃⁰`, from the `d + δ` system.
    Harmonic,
    /// Whatever the elimination on `d₁` returns, free variables set to 0.
    Any,
}

impl fmt::Display for Gauge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Gauge::Harmonic => "harmonic",
            Gauge::Any => "any",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum HopfError {
    #[error("triangulation is non-orientable")]
    NonOrientable,
    #[error("not a rational homology sphere: {0}")]
    NotQhs(QhsFailure),
    #[error("cochain is not a cocycle: nonzero on tetrahedron {tetrahedron}")]
    NotCocycle { tetrahedron: usize },
    #[error(transparent)]
    Cochain(#[from] CochainError),
    #[error(transparent)]
    DPlusDelta(#[from] DPlusDeltaError),
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error("no potential: system inconsistent at row {0}")]
    NoPotential(usize),
    #[error("solver returned α with dα ≠ γ")]
    Unverified,
}

/// Solver state for one oriented triangulation; factorizations are built on
/// first use and reused.
#[derive(Debug)]
pub struct HopfEngine {
    t: Triangulation,
    qhs: Option<QhsFailure>,
    d1: IntegerMatrix,
    d2: IntegerMatrix,
    /// `(ε_t, edge v₀v₁, triangle v₁v₂v₃)` per tetrahedron.
    cup_terms: Vec<(i8, usize, usize)>,
    dplusdelta: OnceCell<DPlusDelta>,
    any: OnceCell<Elimination>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairingResult {
    pub value: Rational,
    pub potential: Cochain,
    pub gauge: Gauge,
}

impl HopfEngine {
    /// Requires an orientable triangulation; the rational homology sphere
    /// condition is recorded and enforced by [`solve_potential`](Self::solve_potential).
    pub fn new(t: Triangulation) -> Result<Self, HopfError> {
        let eps = t.orientation().map_err(|_| HopfError::NonOrientable)?.to_vec();
        let qhs = qhs_failure(&t, &homology(&t));
        let cup_terms = t
            .tetrahedra()
            .iter()
            .zip(eps)
            .map(|(&[v0, v1, v2, v3], e)| (e, t.edge_index([v0, v1]).unwrap(), t.triangle_index([v1, v2, v3]).unwrap()))
            .collect();
        Ok(HopfEngine {
            qhs,
            d1: t.coboundary_matrix(1),
            d2: t.coboundary_matrix(2),
            cup_terms,
            t,
            dplusdelta: OnceCell::new(),
            any: OnceCell::new(),
        })
    }

    pub fn triangulation(&self) -> &Triangulation {
        &self.t
    }

    pub fn qhs_failure(&self) -> Option<QhsFailure> {
        self.qhs
    }

    /// The `d + δ` matrix, factored on first call.
    pub fn dplusdelta(&self) -> Result<&DPlusDelta, HopfError> {
        if let Some(m) = self.qhs {
            return Err(HopfError::NotQhs(m));
        }
        if let Some(m) = self.dplusdelta.get() {
            return Ok(m);
        }
        let m = assemble_dplusdelta(&self.t)?;
        Ok(self.dplusdelta.get_or_init(|| m))
    }

    fn any_elimination(&self) -> &Elimination {
        self.any.get_or_init(|| Elimination::new(&self.d1))
    }

    /// Check that `γ` is a 2-cocycle on this triangulation.
    pub fn check_cocycle(&self, gamma: &Cochain) -> Result<(), HopfError> {
        gamma.expect_degree(2)?;
        gamma.validate(&self.t)?;
        let dg = gamma.apply(&self.d2);
        match dg.values().keys().next() {
            Some(&tetrahedron) => Err(HopfError::NotCocycle { tetrahedron }),
            None => Ok(()),
        }
    }

    /// `α` with `dα = γ`, verified exactly.
    pub fn solve_potential(&self, gamma: &Cochain, gauge: Gauge) -> Result<Cochain, HopfError> {
        if let Some(m) = self.qhs {
            return Err(HopfError::NotQhs(m));
        }
        self.check_cocycle(gamma)?;
        match gauge {
            Gauge::Harmonic => {
                let m = self.dplusdelta()?;
                let [c0, c1, c2, _] = self.t.counts();
                let mut rhs = vec![Rational::zero(); c0 - 1];
                rhs.extend(gamma.to_dense(c2));
                let mut x = m.solve(&rhs);
                x.truncate(c1);
                self.verified(Cochain::from_dense(1, x), gamma)
            }
            Gauge::Any => self.particular_potential(gamma),
        }
    }

    /// Any-gauge solve without the rational homology sphere precondition.
    pub fn particular_potential(&self, gamma: &Cochain) -> Result<Cochain, HopfError> {
        self.check_cocycle(gamma)?;
        let x = self
            .any_elimination()
            .solve(&gamma.to_dense(self.t.counts()[2]))
            .map_err(no_potential)?;
        self.verified(Cochain::from_dense(1, x), gamma)
    }

    fn verified(&self, alpha: Cochain, gamma: &Cochain) -> Result<Cochain, HopfError> {
        if alpha.apply(&self.d1) == *gamma {
            Ok(alpha)
        } else {
            Err(HopfError::Unverified)
        }
    }

    /// `Σ_t ε_t α(v₀v₁) γ(v₁v₂v₃)`.
    pub fn cup_pair(&self, alpha: &Cochain, gamma: &Cochain) -> Rational {
        let mut sum = Rational::zero();
        for &(e, edge, tri) in &self.cup_terms {
            let (Some(a), Some(g)) = (alpha.values().get(&edge), gamma.values().get(&tri)) else {
                continue;
            };
            let term = a * g;
            if e > 0 {
                sum += term;
            } else {
                sum -= term;
            }
        }
        sum
    }

    pub fn pairing(&self, gamma: &Cochain, gauge: Gauge) -> Result<PairingResult, HopfError> {
        let potential = self.solve_potential(gamma, gauge)?;
        Ok(PairingResult {
            value: self.cup_pair(&potential, gamma),
            potential,
            gauge,
        })
    }

    /// `|pairing| ≤ bound`, with the margin certified from below.
    pub fn verify_bound(&self, gamma: &Cochain, sup_norm: &SupNorm) -> Result<BoundReport, HopfError> {
        let pairing = self.pairing(gamma, Gauge::Harmonic)?.value;
        let bound = hadamard_bound(&self.t, sup_norm);
        let gamma_sup = gamma.sup_norm();
        let mut findings = Vec::new();
        if sup_norm.certainly_below(&gamma_sup) {
            findings.push(format!(
                "declared sup-norm {} is below the cochain's sup-norm {}",
                sup_norm, gamma_sup
            ));
        }
        let status = bound.compare(&pairing.abs());
        if status != BoundStatus::Holds {
            findings.push(format!("|pairing| <= bound is {}", status));
        }
        Ok(BoundReport {
            margin: &bound.lower - pairing.abs(),
            pairing,
            gamma_sup_norm: gamma_sup,
            bound,
            status,
            findings,
        })
    }
}

fn no_potential(e: SolveError) -> HopfError {
    match e {
        SolveError::Inconsistent { row } => HopfError::NoPotential(row),
        SolveError::Length { .. } => unreachable!("right-hand side sized from the triangulation"),
    }
}

pub fn solve_potential(t: &Triangulation, gamma: &Cochain, gauge: Gauge) -> Result<Cochain, HopfError> {
    HopfEngine::new(t.clone())?.solve_potential(gamma, gauge)
}

pub fn cup_pair(t: &Triangulation, alpha: &Cochain, gamma: &Cochain) -> Result<Rational, HopfError> {
    alpha.expect_degree(1)?;
    gamma.expect_degree(2)?;
    alpha.validate(t)?;
    gamma.validate(t)?;
    let eps = t.orientation().map_err(|_| HopfError::NonOrientable)?;
    let mut sum = Rational::zero();
    for (&[v0, v1, v2, v3], &e) in t.tetrahedra().iter().zip(eps) {
        let a = alpha.get(t.edge_index([v0, v1]).unwrap());
        let g = gamma.get(t.triangle_index([v1, v2, v3]).unwrap());
        sum += Rational::from_integer(e.into()) * a * g;
    }
    Ok(sum)
}

pub fn hopf_pairing(t: &Triangulation, gamma: &Cochain) -> Result<PairingResult, HopfError> {
    HopfEngine::new(t.clone())?.pairing(gamma, Gauge::Harmonic)
}

pub fn verify_pairing_bound(t: &Triangulation, gamma: &Cochain, sup_norm: &SupNorm) -> Result<BoundReport, HopfError> {
    HopfEngine::new(t.clone())?.verify_bound(gamma, sup_norm)
}

/// `π` to 40 decimals, rounded down and up.
const PI_LOWER: &str = "31415926535897932384626433832795028841971";
const PI_UPPER: &str = "31415926535897932384626433832795028841972";
const PI_SCALE: u32 = 40;

/// Fractional bits of the enclosure of `√a` for odd `n`.
const SQRT_BITS: usize = 128;

/// Declared bound on `|γ(σ)|` over 2-simplices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SupNorm {
    Pi,
    Value(Rational),
}

impl SupNorm {
    /// Exact rational enclosure `[lo, hi]` of the square.
    fn square(&self) -> (Rational, Rational) {
        match self {
            SupNorm::Pi => {
                let den = BigInt::from(10u32).pow(PI_SCALE);
                let lo = Rational::new(PI_LOWER.parse().unwrap(), den.clone());
                let hi = Rational::new(PI_UPPER.parse().unwrap(), den);
                (&lo * &lo, &hi * &hi)
            }
            SupNorm::Value(s) => (s * s, s * s),
        }
    }

    fn certainly_below(&self, x: &Rational) -> bool {
        match self {
            SupNorm::Pi => {
                let hi = Rational::new(PI_UPPER.parse().unwrap(), BigInt::from(10u32).pow(PI_SCALE));
                hi < *x
            }
            SupNorm::Value(s) => s.abs() < *x,
        }
    }
}

impl fmt::Display for SupNorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SupNorm::Pi => f.write_str("pi"),
            SupNorm::Value(v) => write!(f, "{}", v),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BoundStatus {
    Holds,
    Violated,
    /// The value falls inside the rounding enclosure of the bound.
    Undetermined,
}

impl fmt::Display for BoundStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundStatus::Holds => "holds",
            BoundStatus::Violated => "violated",
            BoundStatus::Undetermined => "undetermined",
        })
    }
}

/// `(√a)ⁿ · n · s² · c₃` enclosed by exact rationals `lower ≤ true ≤ upper`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexityBound {
    pub a: usize,
    pub n: usize,
    pub c3: usize,
    pub sup_norm: SupNorm,
    pub lower: Rational,
    pub upper: Rational,
}

impl ComplexityBound {
    /// The bound value, rounded up.
    pub fn value(&self) -> &Rational {
        &self.upper
    }

    pub fn compare(&self, x: &Rational) -> BoundStatus {
        if *x <= self.lower {
            BoundStatus::Holds
        } else if *x > self.upper {
            BoundStatus::Violated
        } else {
            BoundStatus::Undetermined
        }
    }
}

/// Enclosure of `(√a)ⁿ`.
fn sqrt_power(a: usize, n: usize) -> (Rational, Rational) {
    let a = BigInt::from(a);
    let even = Rational::from_integer(a.pow((n / 2) as u32));
    if n.is_multiple_of(2) {
        return (even.clone(), even);
    }
    let scale = BigInt::one() << SQRT_BITS;
    let r = (&a * &scale * &scale).sqrt();
    let exact = &r * &r == &a * &scale * &scale;
    let lo = Rational::new(r.clone(), scale.clone());
    let hi = if exact { lo.clone() } else { Rational::new(r + 1, scale) };
    (&even * lo, &even * hi)
}

pub fn hadamard_bound_parts(a: usize, n: usize, c3: usize, sup_norm: &SupNorm) -> ComplexityBound {
    let (s_lo, s_hi) = sup_norm.square();
    let (p_lo, p_hi) = sqrt_power(a, n);
    let k = Rational::from_integer(BigInt::from(n) * BigInt::from(c3));
    ComplexityBound {
        a,
        n,
        c3,
        sup_norm: sup_norm.clone(),
        lower: p_lo * &k * s_lo,
        upper: p_hi * &k * s_hi,
    }
}

pub fn hadamard_bound(t: &Triangulation, sup_norm: &SupNorm) -> ComplexityBound {
    hadamard_bound_parts(t.adjacency(), t.dplusdelta_size(), t.counts()[3], sup_norm)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundReport {
    pub pairing: Rational,
    pub gamma_sup_norm: Rational,
    pub bound: ComplexityBound,
    pub status: BoundStatus,
    /// `bound.lower − |pairing|`: a lower estimate of the true margin.
    pub margin: Rational,
    pub findings: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rounding {
    Up,
    Down,
}

impl fmt::Display for Rounding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rounding::Up => "up",
            Rounding::Down => "down",
        })
    }
}

const FIXED_DIGITS: u32 = 6;
const SCIENTIFIC_DIGITS: usize = 30;

fn round_div(n: &BigInt, d: &BigInt, mode: Rounding) -> BigInt {
    match mode {
        Rounding::Up => n.div_ceil(d),
        Rounding::Down => n.div_floor(d),
    }
}

/// Directed decimal rendering: fixed point with 6 decimals below `10³⁰`,
/// otherwise 30 significant digits in scientific notation.
pub fn render_decimal(r: &Rational, mode: Rounding) -> String {
    let (n, d) = (r.numer(), r.denom());
    let magnitude = r.abs().to_integer();
    let digits = if magnitude.is_zero() { 0 } else { magnitude.to_string().len() };
    if digits <= SCIENTIFIC_DIGITS {
        let scale = BigInt::from(10u32).pow(FIXED_DIGITS);
        let v = round_div(&(n * &scale), d, mode);
        let s = v.abs().to_string();
        let s = format!("{:0>width$}", s, width = FIXED_DIGITS as usize + 1);
        let (int, frac) = s.split_at(s.len() - FIXED_DIGITS as usize);
        let sign = if v.is_negative() { "-" } else { "" };
        return format!("{}{}.{}", sign, int, frac);
    }
    let mut exp = digits - 1;
    let shift = BigInt::from(10u32).pow((exp + 1 - SCIENTIFIC_DIGITS) as u32);
    let mut m = round_div(n, &(d * &shift), mode);
    if m.abs().to_string().len() > SCIENTIFIC_DIGITS {
        // 99…9 rounded up to 100…0
        m = round_div(&m, &BigInt::from(10), mode);
        exp += 1;
    }
    let s = m.abs().to_string();
    let sign = if m.is_negative() { "-" } else { "" };
    format!("{}{}.{}e{}", sign, &s[..1], &s[1..], exp)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverReport {
    pub degree: usize,
    pub connected: bool,
    pub cover_qhs: bool,
    pub counts: [usize; 4],
    pub base_pairing: Rational,
    pub cover_pairing: Option<Rational>,
    /// `cover_pairing = d · base_pairing`.
    pub multiplicative: Option<bool>,
    pub bound: Option<ComplexityBound>,
    /// `d · |base_pairing| ≤ bound(cover)`.
    pub bound_status: Option<BoundStatus>,
    pub skipped: Option<String>,
    pub findings: Vec<String>,
}

/// A cyclic cover together with its solver, for repeated multiplicativity
/// checks against one base.
#[derive(Debug)]
pub struct CoverHarness {
    pub cover: Cover,
    engine: Result<HopfEngine, String>,
}

impl CoverHarness {
    pub fn new(base: &HopfEngine, spec: &CoverSpec) -> Result<Self, HopfError> {
        let cover = cyclic_cover(base.triangulation(), spec)?;
        let engine = if !cover.is_connected() {
            Err("cover disconnected".to_string())
        } else {
            HopfEngine::new(cover.triangulation.clone()).map_err(|e| e.to_string())
        };
        Ok(CoverHarness { cover, engine })
    }

    pub fn engine(&self) -> Option<&HopfEngine> {
        self.engine.as_ref().ok()
    }

    pub fn check(&self, base: &HopfEngine, gamma: &Cochain, sup_norm: &SupNorm) -> Result<CoverReport, HopfError> {
        let base_pairing = base.pairing(gamma, Gauge::Harmonic)?.value;
        let d = self.cover.degree;
        let mut report = CoverReport {
            degree: d,
            connected: self.cover.is_connected(),
            cover_qhs: self.engine().is_some_and(|e| e.qhs_failure().is_none()),
            counts: self.cover.triangulation.counts(),
            base_pairing,
            cover_pairing: None,
            multiplicative: None,
            bound: None,
            bound_status: None,
            skipped: None,
            findings: Vec::new(),
        };
        let engine = match &self.engine {
            Ok(e) => e,
            Err(reason) => {
                report.skipped = Some(reason.clone());
                return Ok(report);
            }
        };
        let lifted = pullback_cochain(&self.cover, gamma)?;
        let potential = if report.cover_qhs {
            engine.solve_potential(&lifted, Gauge::Harmonic)
        } else {
            report
                .findings
                .push("cover is not a rational homology sphere; pairing is gauge dependent".to_string());
            engine.particular_potential(&lifted)
        };
        let potential = match potential {
            Ok(p) => p,
            Err(e) => {
                report.skipped = Some(format!("potential solve failed: {}", e));
                return Ok(report);
            }
        };
        let value = engine.cup_pair(&potential, &lifted);
        let expected = Rational::from_integer(BigInt::from(d)) * &report.base_pairing;
        let multiplicative = value == expected;
        if !multiplicative {
            report
                .findings
                .push(format!("cover pairing {} differs from {} x base pairing", value, d));
        }
        let bound = hadamard_bound(engine.triangulation(), sup_norm);
        let status = bound.compare(&expected.abs());
        if status != BoundStatus::Holds {
            report.findings.push(format!("d |pairing| <= bound(cover) is {}", status));
        }
        report.cover_pairing = Some(value);
        report.multiplicative = Some(multiplicative);
        report.bound = Some(bound);
        report.bound_status = Some(status);
        Ok(report)
    }
}

pub fn cover_multiplicativity(
    t: &Triangulation,
    spec: &CoverSpec,
    gamma: &Cochain,
    sup_norm: &SupNorm,
) -> Result<CoverReport, HopfError> {
    let base = HopfEngine::new(t.clone())?;
    CoverHarness::new(&base, spec)?.check(&base, gamma, sup_norm)
}

#[derive(Clone, Debug, PartialEq)]
pub struct GrowthRow {
    pub degree: usize,
    pub c3: usize,
    pub bound: ComplexityBound,
    /// Pairing computed on the cover; `None` when the cover was skipped.
    pub pairing: Option<Rational>,
    pub expected_pairing: Rational,
    /// Smallest `x ≥ 1` with `(3/2)·x·ln x ≥ ln d + const`.
    pub implied_c3_lower: Option<u64>,
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GrowthReport {
    pub rows: Vec<GrowthRow>,
    /// `ln|pairing(base)| − ln(s²)`; `None` when the base pairing is 0.
    pub constant: Option<f64>,
    pub constant_definition: &'static str,
    pub inapplicable: Option<String>,
}

fn ln_rational(r: &Rational) -> f64 {
    // ln of numerator and denominator separately keeps huge values finite.
    ln_bigint(r.numer()) - ln_bigint(r.denom())
}

fn ln_bigint(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        return libm::log(n.to_string().parse::<f64>().unwrap().abs());
    }
    let shift = bits - 64;
    let top: BigInt = n.abs() >> shift;
    libm::log(top.to_string().parse::<f64>().unwrap()) + shift as f64 * core::f64::consts::LN_2
}

fn sup_norm_ln_square(s: &SupNorm) -> f64 {
    match s {
        SupNorm::Pi => 2.0 * libm::log(core::f64::consts::PI),
        SupNorm::Value(v) => 2.0 * ln_rational(&v.abs()),
    }
}

/// Smallest integer `x ≥ 1` with `1.5·x·ln x ≥ rhs`.
pub fn invert_growth(rhs: f64) -> u64 {
    let f = |x: u64| 1.5 * x as f64 * libm::log(x as f64);
    if f(1) >= rhs {
        return 1;
    }
    let (mut lo, mut hi) = (1u64, 2u64);
    while f(hi) < rhs {
        lo = hi;
        hi *= 2;
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if f(mid) >= rhs {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// One row per cover degree, led by the base (`d = 1`).
pub fn growth_report(
    base: &HopfEngine,
    family: &[CoverSpec],
    gamma: &Cochain,
    sup_norm: &SupNorm,
) -> Result<GrowthReport, HopfError> {
    let base_pairing = base.pairing(gamma, Gauge::Harmonic)?.value;
    let constant = (!base_pairing.is_zero()).then(|| ln_rational(&base_pairing.abs()) - sup_norm_ln_square(sup_norm));
    let implied = |d: usize| constant.map(|c| invert_growth(libm::log(d as f64) + c));
    let t = base.triangulation();
    let mut rows = vec![GrowthRow {
        degree: 1,
        c3: t.counts()[3],
        bound: hadamard_bound(t, sup_norm),
        pairing: Some(base_pairing.clone()),
        expected_pairing: base_pairing.clone(),
        implied_c3_lower: implied(1),
        note: None,
    }];
    for spec in family {
        let harness = CoverHarness::new(base, spec)?;
        let r = harness.check(base, gamma, sup_norm)?;
        let d = spec.degree();
        rows.push(GrowthRow {
            degree: d,
            c3: r.counts[3],
            bound: hadamard_bound(&harness.cover.triangulation, sup_norm),
            pairing: r.cover_pairing,
            expected_pairing: Rational::from_integer(BigInt::from(d)) * &base_pairing,
            implied_c3_lower: implied(d),
            note: r.skipped.or_else(|| r.findings.first().cloned()),
        });
    }
    Ok(GrowthReport {
        rows,
        constant,
        constant_definition: "ln|pairing(base)| - ln(sup_norm^2)",
        inapplicable: base_pairing
            .is_zero()
            .then(|| "base pairing is 0; the growth estimate assumes a nonzero volume".to_string()),
    })
}
