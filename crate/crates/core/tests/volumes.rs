use grpvol_core::fixtures::presentation_text;
use grpvol_core::linalg::Rational;
use grpvol_core::presentations::{abelianization, parse_presentation, Presentation, Word};
use grpvol_core::volumes::{
    check_volume_axiom, distinctability_report, euler_volume, h1_dim_mod_p, hopfian_harness, lower_def_volume,
    truncated_volume, upper_rank_volume, VolumeError, VolumeKind, VolumeOptions,
};
use proptest::prelude::*;

fn named(name: &str) -> Presentation {
    parse_presentation(&presentation_text(name).unwrap()).unwrap()
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

#[test]
fn free_group_volumes_are_exact() {
    // Every index d subgroup of F_2 is free of rank d + 1.
    let p = named("f2");
    for n in 1..=4 {
        let opts = VolumeOptions::new(n);
        let def = truncated_volume(&p, VolumeKind::Deficiency, &opts).unwrap();
        let rank = truncated_volume(&p, VolumeKind::Rank, &opts).unwrap();
        assert_eq!(def.truncated_value, q(1, 1));
        assert_eq!(rank.truncated_value, q(1, 1));
        assert_eq!(def.truncated_liminf, def.truncated_limsup);
    }
    let r = distinctability_report(&p, 100);
    assert!(r.distinctable);
    assert_eq!(r.certificate.unwrap().lower_bound, q(1, 1));
}

#[test]
fn free_abelian_and_finite_groups() {
    let z2 = named("z2");
    let v = truncated_volume(&z2, VolumeKind::Rank, &VolumeOptions::new(4)).unwrap();
    // Rank 2 subgroups at every index: sup is the index 1 value.
    assert_eq!(v.truncated_value, q(1, 1));
    assert!(!distinctability_report(&z2, 100).distinctable);

    let s3 = named("s3");
    let m = truncated_volume(&s3, VolumeKind::ModP(2), &VolumeOptions::new(6)).unwrap();
    assert_eq!(h1_dim_mod_p(&s3, 2), 1);
    assert_eq!(h1_dim_mod_p(&s3, 3), 0);
    assert!(m.findings.is_empty());
}

#[test]
fn euler_requires_assertion() {
    let p = named("surface2");
    let opts = VolumeOptions::new(2);
    assert_eq!(
        truncated_volume(&p, VolumeKind::Euler, &opts).unwrap_err(),
        VolumeError::AsphericityNotAsserted
    );
    assert_eq!(euler_volume(&p, false), None);
    assert_eq!(euler_volume(&p, true), Some(q(2, 1)));
    let v = truncated_volume(&p, VolumeKind::Euler, &VolumeOptions { aspherical: true, ..opts }).unwrap();
    assert_eq!(v.truncated_value, q(2, 1));
    assert!(matches!(
        truncated_volume(&p, VolumeKind::ModP(4), &opts),
        Err(VolumeError::NotPrime(4))
    ));
}

#[test]
fn sandwich_and_monotonicity_on_fixtures() {
    for name in ["f2", "z", "z2", "z3", "trefoil", "s3", "surface2"] {
        let p = named(name);
        let lo = lower_def_volume(&p, 1000);
        let hi = upper_rank_volume(&p, 1000);
        let max = if name == "surface2" { 3 } else { 5 };
        let mut prev: Option<(Rational, Rational)> = None;
        for n in 1..=max {
            let opts = VolumeOptions::new(n);
            let def = truncated_volume(&p, VolumeKind::Deficiency, &opts).unwrap().truncated_value;
            let rank = truncated_volume(&p, VolumeKind::Rank, &opts).unwrap().truncated_value;
            assert!(lo <= def && def <= rank && rank <= hi, "{} N={}: {} {} {} {}", name, n, lo, def, rank, hi);
            if let Some((d0, r0)) = &prev {
                assert!(def <= *d0 && rank >= *r0, "{} N={}", name, n);
            }
            prev = Some((def, rank));
        }
        assert!(check_volume_axiom(&p, &VolumeOptions::new(max)).unwrap().all_hold(), "{}", name);
    }
}

#[test]
fn hopfian_identity_and_abelian_quotient() {
    let f2 = named("f2");
    let ids = [Word::power(0, 1), Word::power(1, 1)];
    let r = hopfian_harness(&f2, &f2, &ids, &VolumeOptions::new(3)).unwrap();
    assert!(r.holds);
    assert_eq!(r.source_value, r.target_value);

    let z2 = named("z2");
    let r = hopfian_harness(&f2, &z2, &ids, &VolumeOptions::new(3)).unwrap();
    assert!(r.holds);
    assert_eq!(r.target_abelianization, abelianization(&z2));
    // a ↦ a² is not onto on abelianizations.
    let bad = [Word::power(0, 2), Word::power(1, 1)];
    assert!(hopfian_harness(&f2, &z2, &bad, &VolumeOptions::new(2)).is_err());
}

fn two_generator() -> impl Strategy<Value = Presentation> {
    let rel = prop::collection::vec((0usize..2, -3i64..4), 1..4)
        .prop_map(|syl| syl.iter().fold(Word::empty(), |w, &(g, e)| w.concat(&Word::power(g, e))));
    prop::collection::vec(rel, 0..3).prop_map(|rels| Presentation::with_generated_names(2, rels).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn volume_axiom_never_violated(p in two_generator()) {
        let report = check_volume_axiom(&p, &VolumeOptions::new(4)).unwrap();
        prop_assert!(report.all_hold());
    }

    #[test]
    fn truncated_values_respect_bounds(p in two_generator(), n in 1usize..5) {
        let opts = VolumeOptions::new(n);
        let def = truncated_volume(&p, VolumeKind::Deficiency, &opts).unwrap();
        let rank = truncated_volume(&p, VolumeKind::Rank, &opts).unwrap();
        prop_assert!(lower_def_volume(&p, 1000) <= def.truncated_value);
        prop_assert!(def.truncated_value <= rank.truncated_value);
        prop_assert!(rank.truncated_value <= upper_rank_volume(&p, 1000));
    }
}
