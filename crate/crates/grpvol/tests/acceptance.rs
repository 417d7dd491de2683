//! One line per acceptance criterion; exits nonzero if any fails.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::collections::BTreeMap;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use grpvol_core::fixtures::{boundary_4simplex, lens_space, presentation_text};
use grpvol_core::hopf::{BoundStatus, CoverHarness, Gauge, HopfEngine, SupNorm};
use grpvol_core::linalg::Rational;
use grpvol_core::presentations::{abelianization, parse_presentation, Presentation};
use grpvol_core::simplicial::{build_dplusdelta, homology, Cochain, Triangulation};
use grpvol_core::subgroups::{enumerate_subgroups, reidemeister_schreier, EnumerationOptions};
use grpvol_core::volumes::{
    distinctability_report, lower_def_volume, subgroup_presentations, truncated_volume, upper_rank_volume,
    VolumeKind, VolumeOptions,
};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GROUPS: [&str; 8] = ["f2", "f3", "z", "z2", "z3", "trefoil", "s3", "surface2"];
const COCYCLES: usize = 100;
const COVER_COCYCLES: usize = 20;

fn group(name: &str) -> Presentation {
    parse_presentation(&presentation_text(name).unwrap()).unwrap()
}

fn qhs_fixtures() -> Vec<(String, Triangulation)> {
    let mut v = vec![("boundary".to_string(), boundary_4simplex())];
    for (p, q) in [(2, 1), (3, 1), (4, 1), (5, 1), (5, 2)] {
        v.push((format!("L({},{})", p, q), lens_space(p, q).triangulation));
    }
    v
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    loop {
        let r = common::rational(rng, 7, 5);
        if !r.is_zero() {
            return r;
        }
    }
}

type Outcome = Result<String, String>;

fn schreier_identity() -> Outcome {
    let mut total = 0;
    for name in GROUPS {
        let p = group(name);
        let (g, r) = (p.generator_count() as i64, p.relator_count() as i64);
        for t in enumerate_subgroups(&p, EnumerationOptions::new(5)).map_err(|e| e.to_string())? {
            let d = t.index() as i64;
            let q = reidemeister_schreier(&p, &t);
            let ok = q.generator_count() as i64 == d * (g - 1) + 1
                && q.relator_count() as i64 == d * r
                && q.deficiency() - 1 == d * (p.deficiency() - 1);
            if !ok {
                return Err(format!("{} index {}", name, d));
            }
            total += 1;
        }
    }
    Ok(format!("{} subgroups over {} groups", total, GROUPS.len()))
}

fn hall_counts() -> Outcome {
    let oracle: Vec<BigInt> = common::hall_counts(2, 5);
    let tables = enumerate_subgroups(&group("f2"), EnumerationOptions::new(5)).map_err(|e| e.to_string())?;
    let counts: Vec<BigInt> = (1..=5).map(|d| BigInt::from(tables.iter().filter(|t| t.index() == d).count())).collect();
    let listed: Vec<String> = counts.iter().map(|c| c.to_string()).collect();
    if counts == oracle && oracle == [1, 3, 13, 71, 461].map(BigInt::from) {
        Ok(listed.join(", "))
    } else {
        Err(format!("counts {:?}, oracle {:?}", listed, oracle))
    }
}

fn sandwich() -> Outcome {
    let mut checked = 0;
    for name in GROUPS {
        let p = group(name);
        let (lo, hi) = (lower_def_volume(&p, 1000), upper_rank_volume(&p, 1000));
        for n in 1..=5 {
            let opts = VolumeOptions::new(n);
            let def = truncated_volume(&p, VolumeKind::Deficiency, &opts).map_err(|e| e.to_string())?;
            let rank = truncated_volume(&p, VolumeKind::Rank, &opts).map_err(|e| e.to_string())?;
            let (d, r) = (def.truncated_value, rank.truncated_value);
            if !(lo <= d && d <= r && r <= hi) {
                return Err(format!("{} N={}: {} <= {} <= {} <= {} fails", name, n, lo, d, r, hi));
            }
            checked += 1;
        }
    }
    Ok(format!("{} (group, N) pairs", checked))
}

fn free_group_signatures() -> Outcome {
    let p = group("f2");
    let subs = subgroup_presentations(&p, &VolumeOptions::new(5)).map_err(|e| e.to_string())?;
    let mut seen: BTreeMap<(usize, usize, String), usize> = BTreeMap::new();
    for s in &subs {
        let sig = (
            s.simplified.generator_count(),
            s.simplified.relator_count(),
            abelianization(&s.simplified).to_string(),
        );
        if let Some(&d) = seen.get(&sig) {
            if d != s.index {
                return Err(format!("signature {:?} at indices {} and {}", sig, d, s.index));
            }
        }
        seen.insert(sig, s.index);
    }
    let r = distinctability_report(&p, 1000);
    match r.certificate {
        Some(c) if r.distinctable && c.lower_bound >= Rational::one() => {
            Ok(format!("{} signatures, certificate lower bound {}", seen.len(), c.lower_bound))
        }
        _ => Err("distinctability certificate did not fire".to_string()),
    }
}

fn simplicial_kernel() -> Outcome {
    let t = boundary_4simplex();
    let (d0, d1, d2) = (t.coboundary_matrix(0), t.coboundary_matrix(1), t.coboundary_matrix(2));
    for (a, b) in [(&d0, &d1), (&d1, &d2)] {
        for i in 0..b.rows() {
            for j in 0..a.cols() {
                if b.row(i).iter().map(|&(m, y)| y * a.get(m, j)).sum::<i64>() != 0 {
                    return Err("d∘d != 0 on the boundary of the 4-simplex".to_string());
                }
            }
        }
    }
    let h = homology(&t).to_string();
    if h != "(Z, 0, 0, Z)" {
        return Err(format!("boundary homology {}", h));
    }
    for p in 2..=5 {
        let h = homology(&lens_space(p, 1).triangulation);
        if h.groups[1].free_rank != 0 || h.groups[1].torsion != [p as u64] {
            return Err(format!("H1(L({},1)) = {}", p, h.groups[1]));
        }
    }
    let mut sizes = Vec::new();
    for (name, t) in qhs_fixtures() {
        let [_, c1, _, c3] = t.counts();
        let m = build_dplusdelta(&t).map_err(|e| format!("{}: {}", name, e))?;
        if m.matrix.rows() != c1 + c3 - 1 || m.matrix.cols() != m.matrix.rows() {
            return Err(format!("{}: d+δ is {}x{}", name, m.matrix.rows(), m.matrix.cols()));
        }
        sizes.push(m.size().to_string());
    }
    Ok(format!("d+δ sizes {}", sizes.join(", ")))
}

fn gauge_and_scaling() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for (name, t) in qhs_fixtures() {
        let e = HopfEngine::new(t.clone()).map_err(|e| e.to_string())?;
        for i in 0..COCYCLES {
            let gamma = common::random_cocycle(&t, &mut rng);
            let h = e.pairing(&gamma, Gauge::Harmonic).map_err(|e| e.to_string())?.value;
            let a = e.pairing(&gamma, Gauge::Any).map_err(|e| e.to_string())?.value;
            if h != a {
                return Err(format!("{} cocycle {}: harmonic {} any {}", name, i, h, a));
            }
            let c = random_rational(&mut rng);
            let s = e.pairing(&gamma.scale(&c), Gauge::Harmonic).map_err(|e| e.to_string())?.value;
            if s != &h * &c * &c {
                return Err(format!("{} cocycle {}: scaling by {}", name, i, c));
            }
        }
    }
    Ok(format!("{} cocycles on each of {} fixtures", COCYCLES, qhs_fixtures().len()))
}

fn cover_multiplicativity() -> Outcome {
    let l = lens_space(4, 1);
    let base = HopfEngine::new(l.triangulation.clone()).map_err(|e| e.to_string())?;
    let harness = CoverHarness::new(&base, &l.cover_spec(2)).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut gammas = vec![l.generator_dual()];
    gammas.extend((1..COVER_COCYCLES).map(|_| common::random_cocycle(&l.triangulation, &mut rng)));
    for (i, gamma) in gammas.iter().enumerate() {
        let r = harness
            .check(&base, gamma, &SupNorm::Value(gamma.sup_norm()))
            .map_err(|e| e.to_string())?;
        if r.multiplicative != Some(true) || r.bound_status != Some(BoundStatus::Holds) {
            return Err(format!("cocycle {}: {:?}", i, r.findings));
        }
    }
    Ok(format!("L(4,1) double cover, {} cocycles", gammas.len()))
}

fn hadamard_sanity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let one = SupNorm::Value(Rational::one());
    for (name, t) in qhs_fixtures() {
        let e = HopfEngine::new(t.clone()).map_err(|e| e.to_string())?;
        for i in 0..COCYCLES {
            let gamma: Cochain = common::random_cocycle(&t, &mut rng);
            let s = gamma.sup_norm();
            let gamma = if s.is_zero() { gamma } else { gamma.scale(&(Rational::one() / s)) };
            let r = e.verify_bound(&gamma, &one).map_err(|e| e.to_string())?;
            if r.status != BoundStatus::Holds || !r.findings.is_empty() {
                return Err(format!("{} cocycle {}: {:?}", name, i, r.findings));
            }
        }
    }
    Ok(format!("{} normalized cocycles on each of {} fixtures", COCYCLES, qhs_fixtures().len()))
}

fn artifacts(dir: &Path) -> Result<Vec<Vec<u8>>, String> {
    let bin = env!("CARGO_BIN_EXE_grpvol");
    let run = |args: &[&str]| -> Result<Vec<u8>, String> {
        let out = Command::new(bin).args(args).current_dir(dir).output().map_err(|e| e.to_string())?;
        if out.status.success() {
            Ok(out.stdout)
        } else {
            Err(format!("{:?}: {}", args, String::from_utf8_lossy(&out.stdout)))
        }
    };
    let setup: [(&[&str], &str); 6] = [
        (&["fixtures", "f2"], "f2.grp"),
        (&["fixtures", "s3"], "s3.tri"),
        (&["fixtures", "lens", "4", "1"], "l41.tri"),
        (&["fixtures", "cocycle", "4", "1"], "g.coch"),
        (&["fixtures", "spec-family", "4", "1"], "family.json"),
        (&["fixtures", "cover-spec", "4", "1", "--degree", "2"], "cover.json"),
    ];
    let mut out = Vec::new();
    for (args, file) in setup {
        let bytes = run(args)?;
        std::fs::write(dir.join(file), &bytes).map_err(|e| e.to_string())?;
        out.push(bytes);
    }
    let suite: [&[&str]; 9] = [
        &["group", "volume", "--kind", "rank", "--max-index", "4", "f2.grp"],
        &["group", "axioms", "--max-index", "4", "f2.grp"],
        &["group", "distinct", "f2.grp"],
        &["manifold", "check", "--det", "s3.tri"],
        &["manifold", "pairing", "--gamma", "g.coch", "--potential", "l41.tri"],
        &["manifold", "bound", "--gamma", "g.coch", "l41.tri"],
        &["manifold", "cover", "--spec", "cover.json", "--gamma", "g.coch", "l41.tri"],
        &["manifold", "growth", "--spec-family", "family.json", "--gamma", "g.coch", "l41.tri"],
        &["--format", "csv", "manifold", "growth", "--spec-family", "family.json", "--gamma", "g.coch", "l41.tri"],
    ];
    for args in suite {
        out.push(run(args)?);
    }
    out.push(run(&["fixtures", "random-cocycle", "l41.tri", "--seed", "9"])?);
    Ok(out)
}

fn determinism() -> Outcome {
    let a = tempfile::tempdir().map_err(|e| e.to_string())?;
    let b = tempfile::tempdir().map_err(|e| e.to_string())?;
    let first = artifacts(a.path())?;
    let second = artifacts(b.path())?;
    match first.iter().zip(&second).position(|(x, y)| x != y) {
        None => Ok(format!("{} artifacts byte-identical", first.len())),
        Some(i) => Err(format!("artifact {} differs", i)),
    }
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, u64); 9] = [
        ("Schreier identity, index <= 5", schreier_identity, 10),
        ("F2 subgroup counts vs Hall recursion", hall_counts, 30),
        ("volume sandwich, N <= 5", sandwich, 60),
        ("F2 signatures and distinctability certificate", free_group_signatures, 60),
        ("simplicial kernel and d+δ invertibility", simplicial_kernel, 30),
        ("gauge invariance and quadratic scaling", gauge_and_scaling, 120),
        ("cover multiplicativity on L(4,1)", cover_multiplicativity, 120),
        ("Hadamard bound with sup-norm 1", hadamard_sanity, 120),
        ("byte-identical CLI artifacts", determinism, 120),
    ];
    let mut failed = 0;
    for (i, (name, check, limit)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(limit);
        let (status, detail) = match (&outcome, in_time) {
            (Ok(d), true) => ("PASS", d.clone()),
            (Ok(d), false) => ("FAIL", format!("{}; over time", d)),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!(
            "criterion {}: {} {} [{}; tolerance exact; {:.2}s of {}s]",
            i + 1,
            status,
            name,
            detail,
            elapsed.as_secs_f64(),
            limit
        );
    }
    if failed > 0 {
        println!("{} of 9 criteria failed", failed);
        std::process::exit(1);
    }
}
