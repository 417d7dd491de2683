//! Deficiency, rank, Euler and mod-p volume functionals over a truncated
//! lattice of finite-index subgroups.
//!
//! The group invariants behind these functionals are not computable, so every
//! base value is taken from a certified bound: the deficiency lower bound for
//! the lower volume, the rank upper bound for the upper volume. Truncations
//! are reported as such and never as the limit.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use alloc::{format, vec};
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::linalg::{invariant_factors, is_prime, rank_mod_p, IntegerMatrix, Rational};
use crate::presentations::{
    abelianization, deficiency_bounds, rank_bounds, tietze_simplify, AbelianInvariants, Interval,
    Presentation, Word,
};
use crate::subgroups::{
    enumerate_subgroups, reidemeister_schreier, EnumerationError, EnumerationOptions,
    SubgroupFilter, DEFAULT_NODE_BUDGET,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VolumeKind {
    Deficiency,
    Rank,
    Euler,
    ModP(u64),
}

impl fmt::Display for VolumeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VolumeKind::Deficiency => f.write_str("deficiency"),
            VolumeKind::Rank => f.write_str("rank"),
            VolumeKind::Euler => f.write_str("euler"),
            VolumeKind::ModP(p) => write!(f, "modp({})", p),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VolumeOptions {
    pub max_index: usize,
    pub simplify_budget: usize,
    pub node_budget: u64,
    pub filter: SubgroupFilter,
    /// User assertion that the group is of type F with an aspherical
    /// presentation complex. Never verified.
    pub aspherical: bool,
}

impl VolumeOptions {
    pub fn new(max_index: usize) -> Self {
        VolumeOptions {
            max_index,
            simplify_budget: crate::presentations::DEFAULT_SIMPLIFY_BUDGET,
            node_budget: DEFAULT_NODE_BUDGET,
            filter: SubgroupFilter::All,
            aspherical: false,
        }
    }

    pub fn with_filter(mut self, filter: SubgroupFilter) -> Self {
        self.filter = filter;
        self
    }

    fn enumeration(&self) -> EnumerationOptions {
        EnumerationOptions::new(self.max_index)
            .with_node_budget(self.node_budget)
            .with_filter(self.filter)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum VolumeError {
    #[error(transparent)]
    Enumeration(#[from] EnumerationError),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("the Euler volume needs an explicit asphericity assertion")]
    AsphericityNotAsserted,
}

/// Extremes of the ratios `functional(Δ) / [Γ:Δ]` at one index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexStats {
    pub index: usize,
    pub count: usize,
    pub min_ratio: Option<Rational>,
    pub max_ratio: Option<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VolumeEstimate {
    pub kind: VolumeKind,
    pub max_index: usize,
    pub filter: SubgroupFilter,
    pub per_index: Vec<IndexStats>,
    /// Infimum of all ratios seen.
    pub truncated_liminf: Rational,
    /// Supremum of all ratios seen.
    pub truncated_limsup: Rational,
    /// The kind's surrogate: infimum for the lower (deficiency) volume,
    /// supremum for the upper ones.
    pub truncated_value: Rational,
    /// Base functional of the whole group.
    pub base_value: Rational,
    pub assumptions: Vec<String>,
    pub findings: Vec<String>,
}

/// A finite-index subgroup together with its rewritten and simplified
/// presentations.
#[derive(Clone, Debug)]
pub struct SubgroupPresentation {
    pub index: usize,
    pub rewritten: Presentation,
    pub simplified: Presentation,
}

fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

fn ratio(n: i64, d: usize) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// `max(def_lb, 1) − 1`: a certified lower bound of the lower deficiency
/// volume.
pub fn lower_def_volume(p: &Presentation, simplify_budget: usize) -> Rational {
    let lo = deficiency_bounds(p, simplify_budget).lo.finite().unwrap();
    int(lo.max(1) - 1)
}

/// `max(r_ub, 1) − 1`: a certified upper bound of the upper rank volume.
/// The clamp only matters for the trivial group.
pub fn upper_rank_volume(p: &Presentation, simplify_budget: usize) -> Rational {
    let hi = rank_bounds(p, simplify_budget).hi.finite().unwrap();
    int(hi.max(1) - 1)
}

/// `|χ| = |1 − g + r|`, only under an asphericity assertion.
pub fn euler_volume(p: &Presentation, aspherical: bool) -> Option<Rational> {
    aspherical.then(|| int((1 - p.generator_count() as i64 + p.relator_count() as i64).abs()))
}

/// `dim H¹(Γ, F_p) = g − rank_{F_p}(relation matrix)`.
pub fn h1_dim_mod_p(p: &Presentation, prime: u64) -> usize {
    let m = p.relation_matrix();
    p.generator_count() - rank_mod_p(&m, prime)
}

/// Enumerate subgroups of the (simplified) presentation and rewrite each.
pub fn subgroup_presentations(
    p: &Presentation,
    opts: &VolumeOptions,
) -> Result<Vec<SubgroupPresentation>, EnumerationError> {
    let base = tietze_simplify(p, opts.simplify_budget);
    let tables = enumerate_subgroups(&base, opts.enumeration())?;
    Ok(tables
        .iter()
        .map(|t| {
            let rewritten = reidemeister_schreier(&base, t);
            let simplified = tietze_simplify(&rewritten, opts.simplify_budget);
            SubgroupPresentation {
                index: t.index(),
                rewritten,
                simplified,
            }
        })
        .collect())
}

fn base_functional(kind: VolumeKind, s: &SubgroupPresentation) -> i64 {
    match kind {
        // The simplified presentation already realizes the explored maximum.
        VolumeKind::Deficiency => s.simplified.deficiency().max(s.rewritten.deficiency()).max(1) - 1,
        VolumeKind::Rank => s.simplified.generator_count().max(1) as i64 - 1,
        VolumeKind::Euler => {
            (1 - s.rewritten.generator_count() as i64 + s.rewritten.relator_count() as i64).abs()
        }
        VolumeKind::ModP(prime) => h1_dim_mod_p(&s.rewritten, prime) as i64,
    }
}

/// Ratios `functional(Δ)/[Γ:Δ]` over every enumerated subgroup of index at
/// most `opts.max_index`, with running infimum and supremum.
pub fn truncated_volume(
    p: &Presentation,
    kind: VolumeKind,
    opts: &VolumeOptions,
) -> Result<VolumeEstimate, VolumeError> {
    let mut assumptions = vec![format!(
        "truncated at index {}; not the limit over the full subgroup lattice",
        opts.max_index
    )];
    match kind {
        VolumeKind::Deficiency => assumptions.push(
            "base functional uses the certified deficiency lower bound (lower volume)".to_string(),
        ),
        VolumeKind::Rank => assumptions
            .push("base functional uses the certified rank upper bound (upper volume)".to_string()),
        VolumeKind::Euler => {
            if !opts.aspherical {
                return Err(VolumeError::AsphericityNotAsserted);
            }
            assumptions.push("conditional on asserted asphericity".to_string());
        }
        VolumeKind::ModP(prime) => {
            if !is_prime(prime) {
                return Err(VolumeError::NotPrime(prime));
            }
            assumptions.push(format!(
                "dim H^1(-, F_{}) of discrete subgroups; the inequality is checked empirically",
                prime
            ));
        }
    }
    match opts.filter {
        SubgroupFilter::All => {}
        SubgroupFilter::Normal => assumptions.push("normal subgroups only".to_string()),
        SubgroupFilter::ConjugacyClasses => {
            assumptions.push("one subgroup per conjugacy class".to_string())
        }
    }

    let subs = subgroup_presentations(p, opts)?;
    let mut per_index: Vec<IndexStats> = (1..=opts.max_index)
        .map(|index| IndexStats {
            index,
            count: 0,
            min_ratio: None,
            max_ratio: None,
        })
        .collect();
    let mut values = Vec::with_capacity(subs.len());
    for s in &subs {
        let v = base_functional(kind, s);
        let r = ratio(v, s.index);
        let stats = &mut per_index[s.index - 1];
        stats.count += 1;
        if stats.min_ratio.as_ref().is_none_or(|m| r < *m) {
            stats.min_ratio = Some(r.clone());
        }
        if stats.max_ratio.as_ref().is_none_or(|m| r > *m) {
            stats.max_ratio = Some(r.clone());
        }
        values.push((s.index, v, r));
    }
    // Index 1 is always present.
    let base_value = int(values[0].1);
    let liminf = values.iter().map(|v| &v.2).min().unwrap().clone();
    let limsup = values.iter().map(|v| &v.2).max().unwrap().clone();
    let truncated_value = match kind {
        VolumeKind::Deficiency | VolumeKind::Euler => liminf.clone(),
        VolumeKind::Rank | VolumeKind::ModP(_) => limsup.clone(),
    };

    let mut findings = Vec::new();
    if let VolumeKind::ModP(_) = kind {
        // Lower-volume inequality dim H¹(Δ) ≤ [Γ:Δ]·dim H¹(Γ).
        let base = values[0].1;
        for (d, v, _) in &values {
            if *v > *d as i64 * base {
                findings.push(format!(
                    "index {}: dim H^1 = {} exceeds {} * {}",
                    d, v, d, base
                ));
            }
        }
    }
    Ok(VolumeEstimate {
        kind,
        max_index: opts.max_index,
        filter: opts.filter,
        per_index,
        truncated_liminf: liminf,
        truncated_limsup: limsup,
        truncated_value,
        base_value,
        assumptions,
        findings,
    })
}

/// Truncated μ₁ for a prime `p`.
pub fn modp_mu1(p: &Presentation, prime: u64, opts: &VolumeOptions) -> Result<VolumeEstimate, VolumeError> {
    truncated_volume(p, VolumeKind::ModP(prime), opts)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomCheck {
    pub index: usize,
    pub rank_ub: i64,
    pub def_lb: i64,
    /// `rank_ub(Δ) − 1 ≤ d·(rank_ub(Γ) − 1)`
    pub rank_holds: bool,
    pub rank_equality: bool,
    /// `def_lb(Δ) − 1 ≥ d·(def_lb(Γ) − 1)`
    pub def_holds: bool,
    pub def_equality: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomReport {
    pub max_index: usize,
    pub rank_ub: i64,
    pub def_lb: i64,
    pub checks: Vec<AxiomCheck>,
}

impl AxiomReport {
    pub fn violations(&self) -> impl Iterator<Item = &AxiomCheck> {
        self.checks.iter().filter(|c| !c.rank_holds || !c.def_holds)
    }

    pub fn all_hold(&self) -> bool {
        self.violations().next().is_none()
    }
}

/// Check the upper/lower volume inequalities for rank and deficiency at the
/// level of certified bounds, for every subgroup of index ≤ N. A violation
/// indicates a bug in enumeration or rewriting.
pub fn check_volume_axiom(p: &Presentation, opts: &VolumeOptions) -> Result<AxiomReport, VolumeError> {
    let rank_ub = rank_bounds(p, opts.simplify_budget).hi.finite().unwrap();
    let def_lb = deficiency_bounds(p, opts.simplify_budget).lo.finite().unwrap();
    let subs = subgroup_presentations(p, opts)?;
    let checks = subs
        .iter()
        .map(|s| {
            let d = s.index as i64;
            let r = s.simplified.generator_count() as i64;
            let df = s.simplified.deficiency().max(s.rewritten.deficiency());
            AxiomCheck {
                index: s.index,
                rank_ub: r,
                def_lb: df,
                rank_holds: r - 1 <= d * (rank_ub - 1),
                rank_equality: r - 1 == d * (rank_ub - 1),
                def_holds: df - 1 >= d * (def_lb - 1),
                def_equality: df - 1 == d * (def_lb - 1),
            }
        })
        .collect();
    Ok(AxiomReport {
        max_index: opts.max_index,
        rank_ub,
        def_lb,
        checks,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub functional: String,
    pub lower_bound: Rational,
    pub deficiency: Interval,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistinctabilityReport {
    pub distinctable: bool,
    pub certificate: Option<Certificate>,
    pub conclusion: Option<String>,
}

/// Positive lower deficiency volume certifies that isomorphic finite-index
/// subgroups have equal index.
pub fn distinctability_report(p: &Presentation, simplify_budget: usize) -> DistinctabilityReport {
    let v = lower_def_volume(p, simplify_budget);
    if v > Rational::zero() {
        DistinctabilityReport {
            distinctable: true,
            certificate: Some(Certificate {
                functional: "lower deficiency volume def_+ - 1".to_string(),
                lower_bound: v,
                deficiency: deficiency_bounds(p, simplify_budget),
            }),
            conclusion: Some(
                "any two isomorphic finite-index subgroups have the same index".to_string(),
            ),
        }
    } else {
        DistinctabilityReport {
            distinctable: false,
            certificate: None,
            conclusion: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum HopfianError {
    #[error("expected {expected} generator images, got {got}")]
    ImageCount { expected: usize, got: usize },
    #[error("image word uses generator {0}, outside the target presentation")]
    ImageGenerator(usize),
    #[error("relator {0} does not map to zero in the target abelianization")]
    NotHomomorphism(usize),
    #[error("map is not surjective on abelianizations")]
    NotSurjective,
    #[error(transparent)]
    Volume(#[from] VolumeError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HopfianReport {
    pub source_value: Rational,
    pub target_value: Rational,
    pub source_abelianization: AbelianInvariants,
    pub target_abelianization: AbelianInvariants,
    /// Truncated `V_r(source) ≥ V_r(target)`.
    pub holds: bool,
    pub assumptions: Vec<String>,
}

fn exponent_vector(w: &Word, g: usize) -> Vec<i64> {
    let mut v = vec![0; g];
    for l in w.letters() {
        v[l.gen] += l.sign();
    }
    v
}

/// Columns are lattice generators in ℤ^rows.
fn lattice_invariants(columns: &[Vec<i64>], rows: usize) -> (usize, BigInt) {
    let trip = columns
        .iter()
        .enumerate()
        .flat_map(|(j, c)| c.iter().enumerate().map(move |(i, &v)| (i, j, v)));
    let m = IntegerMatrix::from_triplets(rows, columns.len(), trip);
    let f = invariant_factors(&m);
    let prod = f.iter().fold(BigInt::one(), |a, b| a * b);
    (f.len(), prod)
}

/// Compare truncated rank volumes across a map `source → target` given by
/// generator images. Homomorphism and surjectivity are verified only after
/// abelianizing; the comparison is a consistency check, never a proof.
pub fn hopfian_harness(
    source: &Presentation,
    target: &Presentation,
    images: &[Word],
    opts: &VolumeOptions,
) -> Result<HopfianReport, HopfianError> {
    let gs = source.generator_count();
    let gt = target.generator_count();
    if images.len() != gs {
        return Err(HopfianError::ImageCount {
            expected: gs,
            got: images.len(),
        });
    }
    if let Some(l) = images.iter().flat_map(|w| w.letters()).find(|l| l.gen >= gt) {
        return Err(HopfianError::ImageGenerator(l.gen));
    }
    let image_vecs: Vec<Vec<i64>> = images.iter().map(|w| exponent_vector(w, gt)).collect();
    let relation_cols: Vec<Vec<i64>> = target.relators().iter().map(|r| exponent_vector(r, gt)).collect();
    let base = lattice_invariants(&relation_cols, gt);
    for (i, r) in source.relators().iter().enumerate() {
        let mut v = vec![0i64; gt];
        for l in r.letters() {
            for (k, x) in image_vecs[l.gen].iter().enumerate() {
                v[k] += l.sign() * x;
            }
        }
        let mut cols = relation_cols.clone();
        cols.push(v);
        if lattice_invariants(&cols, gt) != base {
            return Err(HopfianError::NotHomomorphism(i));
        }
    }
    let mut all = relation_cols.clone();
    all.extend(image_vecs.iter().cloned());
    let (rank, prod) = lattice_invariants(&all, gt);
    if rank != gt || !prod.is_one() {
        return Err(HopfianError::NotSurjective);
    }
    let src = truncated_volume(source, VolumeKind::Rank, opts)?;
    let dst = truncated_volume(target, VolumeKind::Rank, opts)?;
    Ok(HopfianReport {
        holds: src.truncated_value >= dst.truncated_value,
        source_value: src.truncated_value,
        target_value: dst.truncated_value,
        source_abelianization: abelianization(source),
        target_abelianization: abelianization(target),
        assumptions: vec![
            "homomorphism verified on abelianizations only".to_string(),
            "surjectivity verified on abelianizations only".to_string(),
            format!("rank volumes truncated at index {}", opts.max_index),
            "consistency check of the Hopfian property, not a proof".to_string(),
        ],
    })
}
