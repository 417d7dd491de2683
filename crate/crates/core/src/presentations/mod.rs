//! Finite group presentations: words, parsing, Tietze simplification and the
//! certified rank/deficiency bounds derived from them.

mod bounds;
mod parse;
mod tietze;
mod word;

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

pub use bounds::{
    abelianization, deficiency_bounds, rank_bounds, AbelianInvariants, ExtInt, Interval,
};
pub use parse::{parse_presentation, ParseError, ParseErrorKind};
pub use tietze::tietze_simplify;
pub use word::{free_reduce, Letter, Word};

/// Default number of Tietze moves used when a caller does not supply a budget.
pub const DEFAULT_SIMPLIFY_BUDGET: usize = 1000;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub id: usize,
    pub name: String,
}

/// A finite presentation `⟨generators | relators⟩`.
///
/// Relators are kept freely reduced and non-empty; they are not cyclically
/// reduced, so printing and re-parsing reproduces the value exactly.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Presentation {
    generators: Vec<Generator>,
    relators: Vec<Word>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum PresentationError {
    #[error("duplicate generator name `{0}`")]
    DuplicateGenerator(String),
    #[error("relator {relator} uses generator id {gen} but only {count} generators exist")]
    InvalidGenerator {
        relator: usize,
        gen: usize,
        count: usize,
    },
    #[error("invalid generator name `{0}`")]
    InvalidName(String),
}

pub(crate) fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && name != "gens"
        && name != "rels"
}

impl Presentation {
    /// Build a presentation, reducing relators and dropping empty ones.
    pub fn new<S: Into<String>>(
        names: impl IntoIterator<Item = S>,
        relators: impl IntoIterator<Item = Word>,
    ) -> Result<Self, PresentationError> {
        let mut generators: Vec<Generator> = Vec::new();
        for (id, name) in names.into_iter().enumerate() {
            let name = name.into();
            if !valid_name(&name) {
                return Err(PresentationError::InvalidName(name));
            }
            if generators.iter().any(|g| g.name == name) {
                return Err(PresentationError::DuplicateGenerator(name));
            }
            generators.push(Generator { id, name });
        }
        let count = generators.len();
        let mut rels = Vec::new();
        for (i, w) in relators.into_iter().enumerate() {
            if let Some(l) = w.letters().iter().find(|l| l.gen >= count) {
                return Err(PresentationError::InvalidGenerator {
                    relator: i,
                    gen: l.gen,
                    count,
                });
            }
            let w = Word::new(w.letters().iter().copied());
            if !w.is_empty() {
                rels.push(w);
            }
        }
        Ok(Presentation {
            generators,
            relators: rels,
        })
    }

    /// Presentation with generated names `x0, x1, …`.
    pub fn with_generated_names(
        gens: usize,
        relators: impl IntoIterator<Item = Word>,
    ) -> Result<Self, PresentationError> {
        Self::new((0..gens).map(|i| alloc::format!("x{}", i)), relators)
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    pub fn relator_count(&self) -> usize {
        self.relators.len()
    }

    pub fn generator_id(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn generator_name(&self, id: usize) -> &str {
        &self.generators[id].name
    }

    /// Deficiency of this particular presentation, `#generators − #relators`.
    pub fn deficiency(&self) -> i64 {
        self.generators.len() as i64 - self.relators.len() as i64
    }

    /// Exponent-sum matrix with one row per generator and one column per relator.
    pub fn relation_matrix(&self) -> Vec<Vec<i64>> {
        let g = self.generator_count();
        (0..g)
            .map(|gen| self.relators.iter().map(|r| r.exponent_sum(gen)).collect())
            .collect()
    }

    /// Render a word with this presentation's generator names.
    pub fn format_word(&self, w: &Word) -> String {
        use core::fmt::Write;
        let mut s = String::new();
        for (i, (g, e)) in w.syllables().iter().enumerate() {
            if i > 0 {
                s.push(' ');
            }
            s.push_str(self.generator_name(*g));
            if *e != 1 {
                let _ = write!(s, "^{}", e);
            }
        }
        s
    }

    /// Parse a word over this presentation's generators (grammar of a single
    /// relator).
    pub fn parse_word(&self, text: &str) -> Result<Word, ParseError> {
        parse::parse_word(self, text)
    }

    pub(crate) fn from_parts_unchecked(generators: Vec<Generator>, relators: Vec<Word>) -> Self {
        Presentation {
            generators,
            relators,
        }
    }
}

/// Canonical print form: `gens: a b;` then `rels: w1, w2;`.
impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("gens:")?;
        for g in &self.generators {
            write!(f, " {}", g.name)?;
        }
        f.write_str(";\nrels:")?;
        for (i, r) in self.relators.iter().enumerate() {
            f.write_str(if i == 0 { " " } else { ", " })?;
            f.write_str(&self.format_word(r))?;
        }
        f.write_str(";\n")
    }
}

/// Deficiency of the given presentation.
pub fn presentation_deficiency(p: &Presentation) -> i64 {
    p.deficiency()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn deficiency_examples() {
        let f2 = parse_presentation("gens: a b; rels: ;").unwrap();
        assert_eq!(presentation_deficiency(&f2), 2);
        let z = parse_presentation("gens: a; rels: ;").unwrap();
        assert_eq!(presentation_deficiency(&z), 1);
        let tref = parse_presentation("gens: a b; rels: a^2 b^-3;").unwrap();
        assert_eq!(presentation_deficiency(&tref), 1);
    }

    #[test]
    fn print_form_is_canonical() {
        let p = parse_presentation("gens:a b;rels: a a b^-1 b^-1 b^-1 , a b a^-1 b^-1;").unwrap();
        assert_eq!(p.to_string(), "gens: a b;\nrels: a^2 b^-3, a b a^-1 b^-1;\n");
        let z = parse_presentation("gens: a; rels: ;").unwrap();
        assert_eq!(z.to_string(), "gens: a;\nrels:;\n");
    }

    #[test]
    fn empty_relators_are_dropped() {
        let p = parse_presentation("gens: a b; rels: a a^-1, b;").unwrap();
        assert_eq!(p.relator_count(), 1);
    }

    #[test]
    fn constructor_rejects_bad_input() {
        assert!(matches!(
            Presentation::new(["a", "a"], []),
            Err(PresentationError::DuplicateGenerator(_))
        ));
        assert!(matches!(
            Presentation::new(["a"], [Word::new([Letter::pos(3)])]),
            Err(PresentationError::InvalidGenerator { gen: 3, .. })
        ));
    }
}
