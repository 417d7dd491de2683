use alloc::collections::{BTreeSet, VecDeque};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::CosetTable;
use crate::presentations::{Letter, Presentation, Word};

/// Edge of the spanning tree: `from · letter = to`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TreeEdge {
    pub from: usize,
    pub letter: Letter,
    pub to: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchreierData {
    /// `transversal[c]` maps coset 0 to coset `c`; prefix closed.
    pub transversal: Vec<Word>,
    pub tree_edges: Vec<TreeEdge>,
}

impl SchreierData {
    /// Positive-orientation edges `(coset, generator)` belonging to the tree.
    fn tree_set(&self) -> BTreeSet<(usize, usize)> {
        self.tree_edges
            .iter()
            .map(|e| {
                if e.letter.inverse {
                    // to · g = from
                    (e.to, e.letter.gen)
                } else {
                    (e.from, e.letter.gen)
                }
            })
            .collect()
    }
}

/// Breadth-first spanning tree of the Schreier graph from coset 0; at each
/// coset generators are tried in id order, positive letter before inverse.
pub fn schreier_transversal(t: &CosetTable) -> SchreierData {
    let d = t.index();
    let g = t.action().len();
    let inv = t.inverse_action();
    let mut transversal: Vec<Option<Word>> = vec![None; d];
    transversal[0] = Some(Word::empty());
    let mut tree_edges = Vec::with_capacity(d.saturating_sub(1));
    let mut queue = VecDeque::from([0usize]);
    while let Some(c) = queue.pop_front() {
        for gen in 0..g {
            for letter in [Letter::pos(gen), Letter::neg(gen)] {
                let next = if letter.inverse {
                    inv[gen][c]
                } else {
                    t.action()[gen][c]
                };
                if transversal[next].is_none() {
                    let w = transversal[c].as_ref().unwrap().concat(&Word::new([letter]));
                    transversal[next] = Some(w);
                    tree_edges.push(TreeEdge {
                        from: c,
                        letter,
                        to: next,
                    });
                    queue.push_back(next);
                }
            }
        }
    }
    SchreierData {
        transversal: transversal
            .into_iter()
            .map(|w| w.expect("coset table is not transitive"))
            .collect(),
        tree_edges,
    }
}

/// Presentation of the subgroup described by `t`.
///
/// Generators are the Schreier generators `s(c, x)` for non-tree edges,
/// named `x_c` and ordered by coset then generator; there are
/// `d·(g − 1) + 1` of them. Relators are every parent relator rewritten
/// from every coset (coset-major), freely reduced: `d·r` in total.
pub fn reidemeister_schreier(p: &Presentation, t: &CosetTable) -> Presentation {
    let d = t.index();
    let g = p.generator_count();
    let data = schreier_transversal(t);
    let tree = data.tree_set();
    let mut id_of = vec![vec![usize::MAX; g]; d];
    let mut names: Vec<String> = Vec::new();
    for (c, row) in id_of.iter_mut().enumerate() {
        for (gen, slot) in row.iter_mut().enumerate() {
            if !tree.contains(&(c, gen)) {
                *slot = names.len();
                names.push(format!("{}_{}", p.generator_name(gen), c));
            }
        }
    }
    let inv = t.inverse_action();
    let mut relators = Vec::with_capacity(d * p.relator_count());
    for c in 0..d {
        for r in p.relators() {
            let mut cur = c;
            let mut letters = Vec::with_capacity(r.len());
            for l in r.letters() {
                if l.inverse {
                    let prev = inv[l.gen][cur];
                    let id = id_of[prev][l.gen];
                    if id != usize::MAX {
                        letters.push(Letter::neg(id));
                    }
                    cur = prev;
                } else {
                    let id = id_of[cur][l.gen];
                    if id != usize::MAX {
                        letters.push(Letter::pos(id));
                    }
                    cur = t.action()[l.gen][cur];
                }
            }
            debug_assert_eq!(cur, c, "relator does not close up at coset {}", c);
            relators.push(Word::new(letters));
        }
    }
    Presentation::new(names, relators).expect("Schreier generator names are distinct")
}
