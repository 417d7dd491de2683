use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use super::{Generator, Presentation, Word};

/// Relator length above which a substitution is skipped.
const MAX_TOTAL_LENGTH: usize = 1 << 16;

/// Simplify with at most `budget` Tietze moves.
///
/// Moves, in priority order:
/// 1. drop a relator equal to an earlier one up to cyclic permutation and
///    inversion;
/// 2. eliminate a generator occurring exactly once in some relator, taking
///    the shortest such relator first and the lowest generator id within it.
///
/// Relators are cyclically reduced before the first move. The result is
/// deterministic for a given input and budget.
pub fn tietze_simplify(p: &Presentation, budget: usize) -> Presentation {
    if budget == 0 {
        return p.clone();
    }
    let mut gens: Vec<Generator> = p.generators().to_vec();
    let mut rels: Vec<Word> = normalize(p.relators().iter().cloned());
    let mut left = budget;

    while left > 0 {
        if let Some(i) = first_duplicate(&rels) {
            rels.remove(i);
            left -= 1;
            continue;
        }
        if let Some((ri, gen, image)) = elimination(&rels) {
            let rest = rels
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != ri)
                .map(|(_, r)| r.substitute(gen, &image));
            let rest = normalize(rest);
            let map: Vec<Option<usize>> = (0..gens.len())
                .map(|g| match g.cmp(&gen) {
                    core::cmp::Ordering::Less => Some(g),
                    core::cmp::Ordering::Equal => None,
                    core::cmp::Ordering::Greater => Some(g - 1),
                })
                .collect();
            rels = rest.iter().map(|r| r.renumber(&map)).collect();
            gens.remove(gen);
            for (id, g) in gens.iter_mut().enumerate() {
                g.id = id;
            }
            left -= 1;
            continue;
        }
        break;
    }
    Presentation::from_parts_unchecked(gens, rels)
}

fn normalize(rels: impl Iterator<Item = Word>) -> Vec<Word> {
    rels.map(|r| r.cyclically_reduced())
        .filter(|r| !r.is_empty())
        .collect()
}

fn first_duplicate(rels: &[Word]) -> Option<usize> {
    let mut seen = BTreeSet::new();
    rels.iter()
        .position(|r| !seen.insert(r.cyclic_canonical()))
}

/// Pick `(relator index, generator, image)` for the next elimination.
fn elimination(rels: &[Word]) -> Option<(usize, usize, Word)> {
    let mut order: Vec<usize> = (0..rels.len()).collect();
    order.sort_by_key(|&i| (rels[i].len(), i));
    let total: usize = rels.iter().map(Word::len).sum();
    for ri in order {
        let r = &rels[ri];
        let mut candidates: Vec<usize> = r.letters().iter().map(|l| l.gen).collect();
        candidates.sort_unstable();
        candidates.dedup();
        for gen in candidates {
            if r.occurrences(gen) != 1 {
                continue;
            }
            let pos = r.letters().iter().position(|l| l.gen == gen).unwrap();
            // r rotated to x^e w, so x^e = w^-1.
            let rotated = r.rotated(pos);
            let x = rotated.letters()[0];
            let w = Word::new(rotated.letters()[1..].iter().copied());
            let image = if x.inverse { w } else { w.inverse() };
            let growth: usize = rels
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != ri)
                .map(|(_, o)| o.occurrences(gen) * image.len())
                .sum();
            if total + growth > MAX_TOTAL_LENGTH {
                continue;
            }
            return Some((ri, gen, image));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentations::{abelianization, parse_presentation};
    use alloc::string::ToString;
    use proptest::prelude::*;

    fn pres(s: &str) -> Presentation {
        parse_presentation(s).unwrap()
    }

    #[test]
    fn removes_generator_killed_by_relator() {
        let p = tietze_simplify(&pres("gens: a b; rels: b;"), 10);
        assert_eq!(p.to_string(), "gens: a;\nrels:;\n");
    }

    #[test]
    fn removes_duplicate_relator() {
        let p = pres("gens: a b; rels: a b a b^-1 a^-1 b^-1, a b a b^-1 a^-1 b^-1;");
        let s = tietze_simplify(&p, 1);
        assert_eq!(s.generator_count(), 2);
        assert_eq!(s.relator_count(), 1);
    }

    #[test]
    fn duplicate_up_to_rotation_and_inverse() {
        let p = pres("gens: a b; rels: a b a^-1 b^-1, b a^-1 b^-1 a, b a b^-1 a^-1;");
        let s = tietze_simplify(&p, 2);
        assert_eq!(s.relator_count(), 1);
    }

    #[test]
    fn minimal_presentation_is_fixed() {
        let f2 = pres("gens: a b; rels: ;");
        assert_eq!(tietze_simplify(&f2, 100), f2);
        let tref = pres("gens: a b; rels: a^2 b^-3;");
        assert_eq!(tietze_simplify(&tref, 100), tref);
    }

    #[test]
    fn zero_budget_is_identity() {
        let p = pres("gens: a b; rels: b;");
        assert_eq!(tietze_simplify(&p, 0), p);
    }

    #[test]
    fn eliminates_with_substitution() {
        // b = a^2 ; then a^3 b^-1 becomes a
        let p = pres("gens: a b; rels: a^2 b^-1, a^3 b^-1;");
        let s = tietze_simplify(&p, 1);
        assert_eq!(s.to_string(), "gens: a;\nrels: a;\n");
        let s = tietze_simplify(&p, 10);
        assert_eq!(s.generator_count(), 0);
        assert_eq!(s.relator_count(), 0);
    }

    #[test]
    fn z_squared_subgroup_shape() {
        let p = pres("gens: a b; rels: a b a^-1 b^-1;");
        let s = tietze_simplify(&p, 100);
        assert_eq!((s.generator_count(), s.relator_count()), (2, 1));
    }

    fn arb_presentation() -> impl Strategy<Value = Presentation> {
        (1usize..4).prop_flat_map(|g| {
            let letter = (0..g, any::<bool>()).prop_map(|(gen, inverse)| super::super::Letter { gen, inverse });
            let word = proptest::collection::vec(letter, 1..8).prop_map(Word::new);
            proptest::collection::vec(word, 0..4)
                .prop_map(move |rels| Presentation::with_generated_names(g, rels).unwrap())
        })
    }

    proptest! {
        #[test]
        fn preserves_abelianization(p in arb_presentation(), budget in 0usize..20) {
            let s = tietze_simplify(&p, budget);
            prop_assert_eq!(abelianization(&s), abelianization(&p));
            prop_assert!(s.generator_count() <= p.generator_count());
            prop_assert!(s.relator_count() <= p.relator_count());
            prop_assert!(s.deficiency() >= p.deficiency());
        }

        #[test]
        fn budget_extends_deterministically(p in arb_presentation(), budget in 0usize..10) {
            let small = tietze_simplify(&p, budget);
            let large = tietze_simplify(&p, budget + 5);
            prop_assert!(large.generator_count() <= small.generator_count());
            prop_assert!(large.deficiency() >= small.deficiency());
            prop_assert_eq!(tietze_simplify(&p, budget), small);
        }
    }
}
