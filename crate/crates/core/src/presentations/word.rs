use alloc::vec::Vec;
use core::fmt;

/// A generator or its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub gen: usize,
    pub inverse: bool,
}

impl Letter {
    pub const fn pos(gen: usize) -> Self {
        Letter { gen, inverse: false }
    }

    pub const fn neg(gen: usize) -> Self {
        Letter { gen, inverse: true }
    }

    pub const fn inv(self) -> Self {
        Letter {
            gen: self.gen,
            inverse: !self.inverse,
        }
    }

    /// +1 or -1.
    pub const fn sign(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    /// Column index in a table with interleaved generator/inverse columns.
    pub const fn column(self) -> usize {
        2 * self.gen + self.inverse as usize
    }

    pub const fn from_column(col: usize) -> Self {
        Letter {
            gen: col / 2,
            inverse: col % 2 == 1,
        }
    }
}

/// A freely reduced word in the free group.
///
/// Construction through [`Word::new`] always reduces, so two words compare
/// equal exactly when they represent the same free group element.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        Word(free_reduce(letters))
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// `gen^exp` for a single generator.
    pub fn power(gen: usize, exp: i64) -> Self {
        let l = if exp < 0 {
            Letter::neg(gen)
        } else {
            Letter::pos(gen)
        };
        Word(core::iter::repeat_n(l, exp.unsigned_abs() as usize).collect())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word::new(self.0.iter().chain(other.0.iter()).copied())
    }

    /// Number of occurrences of `gen` (either sign).
    pub fn occurrences(&self, gen: usize) -> usize {
        self.0.iter().filter(|l| l.gen == gen).count()
    }

    pub fn exponent_sum(&self, gen: usize) -> i64 {
        self.0.iter().filter(|l| l.gen == gen).map(|l| l.sign()).sum()
    }

    /// Strip matching first/last letters until the word is cyclically reduced.
    pub fn cyclically_reduced(&self) -> Word {
        let s = &self.0;
        let (mut i, mut j) = (0, s.len());
        while j - i >= 2 && s[i] == s[j - 1].inv() {
            i += 1;
            j -= 1;
        }
        Word(s[i..j].to_vec())
    }

    /// Rotate a cyclically reduced word left by `k` letters.
    pub fn rotated(&self, k: usize) -> Word {
        if self.0.is_empty() {
            return Word::empty();
        }
        let k = k % self.0.len();
        let mut v = Vec::with_capacity(self.0.len());
        v.extend_from_slice(&self.0[k..]);
        v.extend_from_slice(&self.0[..k]);
        Word(v)
    }

    /// Replace every occurrence of `gen` by `image` (and its inverse by
    /// `image⁻¹`), then reduce.
    pub fn substitute(&self, gen: usize, image: &Word) -> Word {
        let inv = image.inverse();
        let mut out = Vec::with_capacity(self.0.len());
        for &l in &self.0 {
            if l.gen == gen {
                out.extend_from_slice(if l.inverse { &inv.0 } else { &image.0 });
            } else {
                out.push(l);
            }
        }
        Word::new(out)
    }

    /// Apply a generator renumbering. `map[g]` must be defined for every
    /// generator occurring in the word.
    pub fn renumber(&self, map: &[Option<usize>]) -> Word {
        Word(
            self.0
                .iter()
                .map(|l| Letter {
                    gen: map[l.gen].expect("generator removed while still in use"),
                    inverse: l.inverse,
                })
                .collect(),
        )
    }

    /// Runs of equal letters as `(gen, signed exponent)`.
    pub fn syllables(&self) -> Vec<(usize, i64)> {
        let mut out: Vec<(usize, i64)> = Vec::new();
        for l in &self.0 {
            match out.last_mut() {
                Some((g, e)) if *g == l.gen && (*e < 0) == l.inverse => *e += l.sign(),
                _ => out.push((l.gen, l.sign())),
            }
        }
        out
    }

    /// Smallest rotation of the word or its inverse; equal for relators that
    /// differ only by cyclic permutation and inversion.
    pub fn cyclic_canonical(&self) -> Word {
        let base = self.cyclically_reduced();
        let inv = base.inverse();
        let n = base.len();
        let mut best = base.clone();
        for k in 0..n {
            for cand in [base.rotated(k), inv.rotated(k)] {
                if cand < best {
                    best = cand;
                }
            }
        }
        best
    }
}

impl From<Vec<Letter>> for Word {
    fn from(v: Vec<Letter>) -> Self {
        Word::new(v)
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        for (i, (g, e)) in self.syllables().iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "x{}", g)?;
            if *e != 1 {
                write!(f, "^{}", e)?;
            }
        }
        Ok(())
    }
}

/// Free reduction of an arbitrary letter sequence.
pub fn free_reduce<I: IntoIterator<Item = Letter>>(letters: I) -> Vec<Letter> {
    let mut stack: Vec<Letter> = Vec::new();
    for l in letters {
        if stack.last() == Some(&l.inv()) {
            stack.pop();
        } else {
            stack.push(l);
        }
    }
    stack
}
