use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::{valid_name, Generator, Letter, Presentation, Word};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ParseErrorKind {
    #[error("expected {expected}, found {found}")]
    Unexpected { expected: String, found: String },
    #[error("duplicate generator name `{0}`")]
    DuplicateGenerator(String),
    #[error("unknown generator `{0}` in relator")]
    UnknownGenerator(String),
    #[error("exponent `{0}` out of range")]
    BadExponent(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Name(String),
    Int(String),
    Colon,
    Semi,
    Comma,
    Caret,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Name(n) => alloc::format!("`{}`", n),
            Tok::Int(i) => alloc::format!("`{}`", i),
            Tok::Colon => "`:`".to_string(),
            Tok::Semi => "`;`".to_string(),
            Tok::Comma => "`,`".to_string(),
            Tok::Caret => "`^`".to_string(),
            Tok::Eof => "end of input".to_string(),
        }
    }
}

struct Lexer<'a> {
    chars: core::iter::Peekable<core::str::Chars<'a>>,
    line: usize,
    column: usize,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer {
            chars: text.chars().peekable(),
            line: 1,
            column: 1,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn tokens(mut self) -> Result<Vec<(Tok, usize, usize)>, ParseError> {
        let mut out = Vec::new();
        loop {
            while let Some(&c) = self.chars.peek() {
                if c == '#' {
                    while let Some(&c) = self.chars.peek() {
                        if c == '\n' {
                            break;
                        }
                        self.bump();
                    }
                } else if c.is_whitespace() {
                    self.bump();
                } else {
                    break;
                }
            }
            let (line, column) = (self.line, self.column);
            let Some(&c) = self.chars.peek() else {
                out.push((Tok::Eof, line, column));
                return Ok(out);
            };
            let tok = match c {
                ':' => {
                    self.bump();
                    Tok::Colon
                }
                ';' => {
                    self.bump();
                    Tok::Semi
                }
                ',' => {
                    self.bump();
                    Tok::Comma
                }
                '^' => {
                    self.bump();
                    Tok::Caret
                }
                c if c.is_ascii_alphabetic() => {
                    let mut s = String::new();
                    while let Some(&c) = self.chars.peek() {
                        if c.is_ascii_alphanumeric() || c == '_' {
                            s.push(c);
                            self.bump();
                        } else {
                            break;
                        }
                    }
                    Tok::Name(s)
                }
                c if c == '-' || c == '+' || c.is_ascii_digit() => {
                    let mut s = String::new();
                    s.push(c);
                    self.bump();
                    while let Some(&c) = self.chars.peek() {
                        if c.is_ascii_digit() {
                            s.push(c);
                            self.bump();
                        } else {
                            break;
                        }
                    }
                    Tok::Int(s)
                }
                other => {
                    return Err(ParseError {
                        line,
                        column,
                        kind: ParseErrorKind::Unexpected {
                            expected: "a name, `:`, `;`, `,` or `^`".to_string(),
                            found: alloc::format!("`{}`", other),
                        },
                    })
                }
            };
            out.push((tok, line, column));
        }
    }
}

struct Parser {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn err(&self, kind: ParseErrorKind) -> ParseError {
        let (_, line, column) = self.toks[self.pos];
        ParseError { line, column, kind }
    }

    fn unexpected(&self, expected: &str) -> ParseError {
        self.err(ParseErrorKind::Unexpected {
            expected: expected.to_string(),
            found: self.peek().describe(),
        })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.unexpected(what))
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        match self.peek() {
            Tok::Name(n) if n == kw => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.unexpected(&alloc::format!("`{}`", kw))),
        }
    }

    fn generators(&mut self) -> Result<Vec<Generator>, ParseError> {
        self.keyword("gens")?;
        self.expect(Tok::Colon, "`:`")?;
        let mut gens: Vec<Generator> = Vec::new();
        loop {
            match self.peek().clone() {
                Tok::Name(n) if valid_name(&n) => {
                    if gens.iter().any(|g| g.name == n) {
                        return Err(self.err(ParseErrorKind::DuplicateGenerator(n)));
                    }
                    gens.push(Generator {
                        id: gens.len(),
                        name: n,
                    });
                    self.pos += 1;
                }
                Tok::Semi if !gens.is_empty() => {
                    self.pos += 1;
                    return Ok(gens);
                }
                _ => {
                    return Err(self.unexpected(if gens.is_empty() {
                        "a generator name"
                    } else {
                        "a generator name or `;`"
                    }))
                }
            }
        }
    }

    fn word(&mut self, gens: &[Generator]) -> Result<Word, ParseError> {
        let mut letters = Vec::new();
        loop {
            let name = match self.peek() {
                Tok::Name(n) => n.clone(),
                _ if letters.is_empty() => return Err(self.unexpected("a generator name")),
                _ => break,
            };
            let Some(gen) = gens.iter().position(|g| g.name == name) else {
                return Err(self.err(ParseErrorKind::UnknownGenerator(name)));
            };
            self.pos += 1;
            let mut exp: i64 = 1;
            if *self.peek() == Tok::Caret {
                self.pos += 1;
                match self.peek().clone() {
                    Tok::Int(s) => {
                        exp = s
                            .parse::<i64>()
                            .ok()
                            .filter(|e| e.unsigned_abs() <= 1 << 24)
                            .ok_or_else(|| self.err(ParseErrorKind::BadExponent(s.clone())))?;
                        self.pos += 1;
                    }
                    _ => return Err(self.unexpected("an integer exponent")),
                }
            }
            let l = if exp < 0 {
                Letter::neg(gen)
            } else {
                Letter::pos(gen)
            };
            letters.extend(core::iter::repeat_n(l, exp.unsigned_abs() as usize));
        }
        // Returned as-is; the caller reduces.
        Ok(Word::new(letters))
    }

    fn relators(&mut self, gens: &[Generator]) -> Result<Vec<Word>, ParseError> {
        self.keyword("rels")?;
        self.expect(Tok::Colon, "`:`")?;
        let mut rels = Vec::new();
        if *self.peek() == Tok::Semi {
            self.pos += 1;
            return Ok(rels);
        }
        loop {
            let w = self.word(gens)?;
            if !w.is_empty() {
                rels.push(w);
            }
            match self.peek() {
                Tok::Comma => self.pos += 1,
                Tok::Semi => {
                    self.pos += 1;
                    return Ok(rels);
                }
                _ => return Err(self.unexpected("`,` or `;`")),
            }
        }
    }
}

/// Parse the `gens: …; rels: …;` text format.
pub fn parse_presentation(text: &str) -> Result<Presentation, ParseError> {
    let toks = Lexer::new(text).tokens()?;
    let mut p = Parser { toks, pos: 0 };
    let gens = p.generators()?;
    let rels = p.relators(&gens)?;
    p.expect(Tok::Eof, "end of input")?;
    Ok(Presentation::from_parts_unchecked(gens, rels))
}

pub(super) fn parse_word(pres: &Presentation, text: &str) -> Result<Word, ParseError> {
    let toks = Lexer::new(text).tokens()?;
    let mut p = Parser { toks, pos: 0 };
    if *p.peek() == Tok::Eof {
        return Ok(Word::empty());
    }
    let w = p.word(pres.generators())?;
    p.expect(Tok::Eof, "end of word")?;
    Ok(w)
}
