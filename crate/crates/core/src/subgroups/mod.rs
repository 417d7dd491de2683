//! Finite-index subgroups as coset tables: low-index enumeration, Schreier
//! transversals and Reidemeister–Schreier rewriting.

mod lowindex;
mod schreier;

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use alloc::collections::VecDeque;

use crate::presentations::{Letter, Presentation, Word};

pub use lowindex::{enumerate_subgroups, EnumerationError, EnumerationOptions, SubgroupFilter, DEFAULT_NODE_BUDGET};
pub use schreier::{reidemeister_schreier, schreier_transversal, SchreierData, TreeEdge};

/// Right action of the generators on the cosets of a finite-index subgroup.
///
/// Coset 0 is the subgroup itself. `action[g][c]` is the coset `c·g`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CosetTable {
    base: Arc<Presentation>,
    index: usize,
    action: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum TableViolation {
    #[error("index must be at least 1")]
    ZeroIndex,
    #[error("table has {got} generator columns, presentation has {expected}")]
    GeneratorCount { expected: usize, got: usize },
    #[error("generator {gen} has {got} images, expected {expected}")]
    Length { gen: usize, expected: usize, got: usize },
    #[error("generator {gen} sends coset {coset} to {image}, outside the table")]
    OutOfRange { gen: usize, coset: usize, image: usize },
    #[error("generator {gen} is not a bijection: coset {image} is hit twice")]
    NotBijection { gen: usize, image: usize },
    #[error("unreachable coset {coset}")]
    Unreachable { coset: usize },
    #[error("relator {relator} acts nontrivially on coset {coset} (ends at {end})")]
    Relator { relator: usize, coset: usize, end: usize },
}

impl CosetTable {
    /// Build and validate a table.
    pub fn new(base: Arc<Presentation>, index: usize, action: Vec<Vec<usize>>) -> Result<Self, TableViolation> {
        let t = CosetTable { base, index, action };
        validate_table(&t)?;
        Ok(t)
    }

    /// Build without validation; [`validate_table`] reports what is wrong.
    pub fn new_unchecked(base: Arc<Presentation>, index: usize, action: Vec<Vec<usize>>) -> Self {
        CosetTable { base, index, action }
    }

    /// The index-1 table of the whole group.
    pub fn whole_group(base: Arc<Presentation>) -> Self {
        let g = base.generator_count();
        CosetTable {
            base,
            index: 1,
            action: vec![vec![0]; g],
        }
    }

    pub fn base(&self) -> &Arc<Presentation> {
        &self.base
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn action(&self) -> &[Vec<usize>] {
        &self.action
    }

    /// `c · l` for a letter.
    pub fn act(&self, coset: usize, l: Letter) -> usize {
        if l.inverse {
            self.action[l.gen]
                .iter()
                .position(|&img| img == coset)
                .expect("generator action is not a bijection")
        } else {
            self.action[l.gen][coset]
        }
    }

    /// Image of a coset under a word.
    pub fn trace(&self, coset: usize, w: &Word) -> usize {
        let inv = self.inverse_action();
        w.letters().iter().fold(coset, |c, l| {
            if l.inverse {
                inv[l.gen][c]
            } else {
                self.action[l.gen][c]
            }
        })
    }

    pub fn inverse_action(&self) -> Vec<Vec<usize>> {
        self.action
            .iter()
            .map(|perm| {
                let mut inv = vec![0; perm.len()];
                for (c, &img) in perm.iter().enumerate() {
                    inv[img] = c;
                }
                inv
            })
            .collect()
    }

    /// Whether the subgroup is normal: re-basing at every coset reproduces
    /// the same standardized table.
    pub fn is_normal(&self) -> bool {
        let me = lowindex::flat_standard(self, 0);
        (1..self.index).all(|c| lowindex::flat_standard(self, c) == me)
    }
}

/// Check every table invariant, returning the first violation found.
pub fn validate_table(t: &CosetTable) -> Result<(), TableViolation> {
    let d = t.index;
    if d == 0 {
        return Err(TableViolation::ZeroIndex);
    }
    let g = t.base.generator_count();
    if t.action.len() != g {
        return Err(TableViolation::GeneratorCount {
            expected: g,
            got: t.action.len(),
        });
    }
    for (gen, perm) in t.action.iter().enumerate() {
        if perm.len() != d {
            return Err(TableViolation::Length {
                gen,
                expected: d,
                got: perm.len(),
            });
        }
        let mut hit = vec![false; d];
        for (coset, &image) in perm.iter().enumerate() {
            if image >= d {
                return Err(TableViolation::OutOfRange { gen, coset, image });
            }
            if core::mem::replace(&mut hit[image], true) {
                return Err(TableViolation::NotBijection { gen, image });
            }
        }
    }
    let inv = t.inverse_action();
    let mut seen = vec![false; d];
    seen[0] = true;
    let mut queue = VecDeque::from([0usize]);
    while let Some(c) = queue.pop_front() {
        for gen in 0..g {
            for next in [t.action[gen][c], inv[gen][c]] {
                if !seen[next] {
                    seen[next] = true;
                    queue.push_back(next);
                }
            }
        }
    }
    if let Some(coset) = seen.iter().position(|s| !s) {
        return Err(TableViolation::Unreachable { coset });
    }
    for (relator, r) in t.base.relators().iter().enumerate() {
        for coset in 0..d {
            let end = r.letters().iter().fold(coset, |c, l| {
                if l.inverse {
                    inv[l.gen][c]
                } else {
                    t.action[l.gen][c]
                }
            });
            if end != coset {
                return Err(TableViolation::Relator { relator, coset, end });
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentations::parse_presentation;

    fn base(s: &str) -> Arc<Presentation> {
        Arc::new(parse_presentation(s).unwrap())
    }

    #[test]
    fn detects_relator_violation() {
        let p = base("gens: a b; rels: a^2;");
        // a acts as a 3-cycle, so a^2 moves every coset.
        let t = CosetTable::new_unchecked(p, 3, vec![vec![1, 2, 0], vec![0, 1, 2]]);
        assert_eq!(
            validate_table(&t),
            Err(TableViolation::Relator { relator: 0, coset: 0, end: 2 })
        );
    }

    #[test]
    fn detects_unreachable_coset() {
        let p = base("gens: a; rels: ;");
        let t = CosetTable::new_unchecked(p, 2, vec![vec![0, 1]]);
        assert_eq!(validate_table(&t), Err(TableViolation::Unreachable { coset: 1 }));
    }

    #[test]
    fn detects_non_bijection_and_range() {
        let p = base("gens: a; rels: ;");
        let t = CosetTable::new_unchecked(p.clone(), 2, vec![vec![1, 1]]);
        assert_eq!(validate_table(&t), Err(TableViolation::NotBijection { gen: 0, image: 1 }));
        let t = CosetTable::new_unchecked(p.clone(), 2, vec![vec![1, 2]]);
        assert!(matches!(validate_table(&t), Err(TableViolation::OutOfRange { .. })));
        let t = CosetTable::new_unchecked(p, 0, vec![vec![]]);
        assert_eq!(validate_table(&t), Err(TableViolation::ZeroIndex));
    }

    #[test]
    fn whole_group_is_valid() {
        let p = base("gens: a b; rels: a b a^-1 b^-1;");
        assert!(validate_table(&CosetTable::whole_group(p)).is_ok());
    }

    #[test]
    fn normality() {
        let p = base("gens: a b; rels: ;");
        // <a, b a b^-1, b^2>: index 2, normal.
        let t = CosetTable::new(p.clone(), 2, vec![vec![0, 1], vec![1, 0]]).unwrap();
        assert!(t.is_normal());
        // index 3 subgroup with a = (1 2), b = (0 1): not normal.
        let t = CosetTable::new(p, 3, vec![vec![0, 2, 1], vec![1, 0, 2]]).unwrap();
        assert!(!t.is_normal());
    }
}
