//! Low-index subgroup enumeration by backtracking over partial coset tables.
//!
//! Columns are interleaved `g, g⁻¹` per generator. The search always fills
//! the first undefined entry in row-major order, either with an existing
//! coset or with the next new one, so every table produced is standardized:
//! each subgroup of index ≤ N appears exactly once. Relators are scanned
//! from every coset after each choice to propagate forced entries and prune
//! contradictions.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use super::CosetTable;
use crate::presentations::{Letter, Presentation};

/// Default backtracking node budget.
pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

const UNDEF: u32 = u32::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SubgroupFilter {
    /// Every subgroup.
    All,
    /// One representative per conjugacy class (the table minimal over all
    /// choices of base coset).
    ConjugacyClasses,
    /// Normal subgroups only.
    Normal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationOptions {
    pub max_index: usize,
    pub node_budget: u64,
    pub filter: SubgroupFilter,
}

impl EnumerationOptions {
    pub fn new(max_index: usize) -> Self {
        EnumerationOptions {
            max_index,
            node_budget: DEFAULT_NODE_BUDGET,
            filter: SubgroupFilter::All,
        }
    }

    pub fn with_node_budget(mut self, budget: u64) -> Self {
        self.node_budget = budget;
        self
    }

    pub fn with_filter(mut self, filter: SubgroupFilter) -> Self {
        self.filter = filter;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum EnumerationError {
    #[error("maximum index must be at least 1")]
    ZeroIndex,
    #[error("node budget of {budget} exhausted after finding {found} subgroups")]
    NodeBudgetExceeded { budget: u64, found: usize },
}

/// All subgroups of index at most `opts.max_index`, sorted by index and then
/// lexicographically by standardized table. The whole group comes first.
pub fn enumerate_subgroups(
    p: &Presentation,
    opts: EnumerationOptions,
) -> Result<Vec<CosetTable>, EnumerationError> {
    if opts.max_index == 0 {
        return Err(EnumerationError::ZeroIndex);
    }
    let base = Arc::new(p.clone());
    let g = p.generator_count();
    if g == 0 {
        return Ok(vec![CosetTable::whole_group(base)]);
    }
    let relators: Vec<Vec<usize>> = p
        .relators()
        .iter()
        .map(|r| r.letters().iter().map(|l| l.column()).collect())
        .collect();
    let mut search = Search {
        cols: 2 * g,
        max: opts.max_index,
        relators,
        nodes: 0,
        budget: opts.node_budget,
        found: Vec::new(),
    };
    let mut state = State {
        table: vec![UNDEF; opts.max_index * 2 * g],
        n: 1,
    };
    // Entries forced by relators on the single initial coset.
    if search.deduce(&mut state) {
        search.descend(state)?;
    }
    let mut flats = search.found;
    flats.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
    let tables: Vec<CosetTable> = flats
        .into_iter()
        .map(|(n, flat)| to_table(&base, g, n, &flat))
        .filter(|t| match opts.filter {
            SubgroupFilter::All => true,
            SubgroupFilter::Normal => t.is_normal(),
            SubgroupFilter::ConjugacyClasses => {
                let me = flat_standard(t, 0);
                (1..t.index()).all(|c| flat_standard(t, c) >= me)
            }
        })
        .collect();
    Ok(tables)
}

struct State {
    table: Vec<u32>,
    n: usize,
}

struct Search {
    cols: usize,
    max: usize,
    relators: Vec<Vec<usize>>,
    nodes: u64,
    budget: u64,
    found: Vec<(usize, Vec<u32>)>,
}

#[inline]
fn inv_col(col: usize) -> usize {
    col ^ 1
}

impl Search {
    fn descend(&mut self, state: State) -> Result<(), EnumerationError> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(EnumerationError::NodeBudgetExceeded {
                budget: self.budget,
                found: self.found.len(),
            });
        }
        let live = state.n * self.cols;
        let Some(pos) = state.table[..live].iter().position(|&v| v == UNDEF) else {
            self.found.push((state.n, state.table[..live].to_vec()));
            return Ok(());
        };
        let (c, col) = (pos / self.cols, pos % self.cols);
        let icol = inv_col(col);
        let mut targets: Vec<usize> = (0..state.n)
            .filter(|&t| state.table[t * self.cols + icol] == UNDEF)
            .collect();
        if state.n < self.max {
            targets.push(state.n);
        }
        for t in targets {
            let mut next = State {
                table: state.table.clone(),
                n: state.n.max(t + 1),
            };
            if !set(&mut next.table, self.cols, c, col, t) {
                continue;
            }
            if self.deduce(&mut next) {
                self.descend(next)?;
            }
        }
        Ok(())
    }

    /// Scan all relators from all cosets until no new entry is forced.
    /// Returns false on a contradiction.
    fn deduce(&self, s: &mut State) -> bool {
        let cols = self.cols;
        loop {
            let mut changed = false;
            for r in &self.relators {
                let len = r.len();
                for c in 0..s.n {
                    // forward
                    let mut f = c;
                    let mut i = 0;
                    while i < len {
                        let v = s.table[f * cols + r[i]];
                        if v == UNDEF {
                            break;
                        }
                        f = v as usize;
                        i += 1;
                    }
                    if i == len {
                        if f != c {
                            return false;
                        }
                        continue;
                    }
                    // backward
                    let mut b = c;
                    let mut j = len;
                    while j > i {
                        let v = s.table[b * cols + inv_col(r[j - 1])];
                        if v == UNDEF {
                            break;
                        }
                        b = v as usize;
                        j -= 1;
                    }
                    if j == i {
                        if f != b {
                            return false;
                        }
                    } else if j == i + 1 {
                        if !set(&mut s.table, cols, f, r[i], b) {
                            return false;
                        }
                        changed = true;
                    }
                }
            }
            if !changed {
                return true;
            }
        }
    }
}

/// Define `c·col = t` and `t·col⁻¹ = c`; false if that contradicts the table.
fn set(table: &mut [u32], cols: usize, c: usize, col: usize, t: usize) -> bool {
    let a = c * cols + col;
    let b = t * cols + inv_col(col);
    match (table[a], table[b]) {
        (UNDEF, UNDEF) => {
            table[a] = t as u32;
            table[b] = c as u32;
            true
        }
        (x, y) => x == t as u32 && y == c as u32,
    }
}

fn to_table(base: &Arc<Presentation>, g: usize, n: usize, flat: &[u32]) -> CosetTable {
    let cols = 2 * g;
    let action = (0..g)
        .map(|gen| (0..n).map(|c| flat[c * cols + 2 * gen] as usize).collect())
        .collect();
    CosetTable::new_unchecked(base.clone(), n, action)
}

/// Flattened standardized table with `base` renumbered as coset 0.
pub(super) fn flat_standard(t: &CosetTable, base: usize) -> Vec<usize> {
    let n = t.index();
    let g = t.action().len();
    let inv = t.inverse_action();
    let image = |c: usize, col: usize| {
        let l = Letter::from_column(col);
        if l.inverse {
            inv[l.gen][c]
        } else {
            t.action()[l.gen][c]
        }
    };
    let mut new_of = vec![usize::MAX; n];
    let mut old_of = Vec::with_capacity(n);
    new_of[base] = 0;
    old_of.push(base);
    let mut k = 0;
    while k < old_of.len() {
        let c = old_of[k];
        for col in 0..2 * g {
            let d = image(c, col);
            if new_of[d] == usize::MAX {
                new_of[d] = old_of.len();
                old_of.push(d);
            }
        }
        k += 1;
    }
    let mut flat = Vec::with_capacity(n * 2 * g);
    for &c in &old_of {
        for col in 0..2 * g {
            flat.push(new_of[image(c, col)]);
        }
    }
    flat
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentations::parse_presentation;
    use crate::subgroups::validate_table;

    fn pres(s: &str) -> Presentation {
        parse_presentation(s).unwrap()
    }

    fn counts(p: &Presentation, n: usize, filter: SubgroupFilter) -> Vec<usize> {
        let ts = enumerate_subgroups(p, EnumerationOptions::new(n).with_filter(filter)).unwrap();
        (1..=n).map(|d| ts.iter().filter(|t| t.index() == d).count()).collect()
    }

    #[test]
    fn free_group_index_two() {
        let f2 = pres("gens: a b; rels: ;");
        let ts = enumerate_subgroups(&f2, EnumerationOptions::new(2)).unwrap();
        assert_eq!(ts.len(), 4);
        assert_eq!(ts[0].index(), 1);
        assert!(ts.iter().all(|t| validate_table(t).is_ok()));
    }

    #[test]
    fn integers_have_one_subgroup_per_index() {
        let z = pres("gens: a; rels: ;");
        assert_eq!(counts(&z, 5, SubgroupFilter::All), vec![1, 1, 1, 1, 1]);
    }

    #[test]
    fn cyclic_of_order_three() {
        let c3 = pres("gens: a; rels: a^3;");
        assert_eq!(counts(&c3, 3, SubgroupFilter::All), vec![1, 0, 1]);
    }

    #[test]
    fn conjugacy_and_normal_filters() {
        // S3 = <a, b | a^2, b^3, (ab)^2>: subgroups of index 2 (A3, normal),
        // index 3 (three conjugate order-2 subgroups), index 6 (trivial).
        let s3 = pres("gens: a b; rels: a^2, b^3, a b a b;");
        assert_eq!(counts(&s3, 6, SubgroupFilter::All), vec![1, 1, 3, 0, 0, 1]);
        assert_eq!(counts(&s3, 6, SubgroupFilter::ConjugacyClasses), vec![1, 1, 1, 0, 0, 1]);
        assert_eq!(counts(&s3, 6, SubgroupFilter::Normal), vec![1, 1, 0, 0, 0, 1]);
    }

    #[test]
    fn node_budget_is_reported() {
        let f2 = pres("gens: a b; rels: ;");
        let err = enumerate_subgroups(&f2, EnumerationOptions::new(4).with_node_budget(10)).unwrap_err();
        assert!(matches!(err, EnumerationError::NodeBudgetExceeded { budget: 10, .. }));
        assert_eq!(
            enumerate_subgroups(&f2, EnumerationOptions::new(0)).unwrap_err(),
            EnumerationError::ZeroIndex
        );
    }

    #[test]
    fn deterministic_output() {
        let p = pres("gens: a b; rels: a^2 b^-3;");
        let a = enumerate_subgroups(&p, EnumerationOptions::new(4)).unwrap();
        let b = enumerate_subgroups(&p, EnumerationOptions::new(4)).unwrap();
        assert_eq!(a, b);
    }
}
