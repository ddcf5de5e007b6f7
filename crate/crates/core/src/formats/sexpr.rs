//! A minimal s-expression reader with source positions. `;` starts a
//! comment that runs to the end of the line.

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SExpr {
    Atom {
        text: String,
        line: usize,
        column: usize,
    },
    List {
        items: Vec<SExpr>,
        line: usize,
        column: usize,
    },
}

impl SExpr {
    pub fn position(&self) -> (usize, usize) {
        match self {
            SExpr::Atom { line, column, .. } | SExpr::List { line, column, .. } => (*line, *column),
        }
    }

    pub fn error(&self, message: impl Into<String>) -> Error {
        let (line, column) = self.position();
        Error::syntax(line, column, message)
    }

    pub fn as_atom(&self) -> Option<&str> {
        match self {
            SExpr::Atom { text, .. } => Some(text),
            SExpr::List { .. } => None,
        }
    }
}

struct Reader<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
}

impl Reader<'_> {
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

    fn skip_blank(&mut self) {
        while let Some(&c) = self.chars.peek() {
            if c == ';' {
                while self.chars.peek().is_some_and(|&c| c != '\n') {
                    self.bump();
                }
            } else if c.is_whitespace() {
                self.bump();
            } else {
                break;
            }
        }
    }

    fn read(&mut self) -> Result<Option<SExpr>> {
        self.skip_blank();
        let (line, column) = (self.line, self.column);
        match self.chars.peek().copied() {
            None => Ok(None),
            Some(')') => Err(Error::syntax(line, column, "unexpected `)`")),
            Some('(') => {
                self.bump();
                let mut items = Vec::new();
                loop {
                    self.skip_blank();
                    match self.chars.peek() {
                        None => return Err(Error::syntax(line, column, "unclosed `(`")),
                        Some(')') => {
                            self.bump();
                            return Ok(Some(SExpr::List {
                                items,
                                line,
                                column,
                            }));
                        }
                        Some(_) => items.push(self.read()?.expect("input remains")),
                    }
                }
            }
            Some(_) => {
                let mut text = String::new();
                while let Some(&c) = self.chars.peek() {
                    if c.is_whitespace() || c == '(' || c == ')' || c == ';' {
                        break;
                    }
                    text.push(c);
                    self.bump();
                }
                Ok(Some(SExpr::Atom { text, line, column }))
            }
        }
    }
}

/// Reads every top-level expression of `text`.
pub fn parse_all(text: &str) -> Result<Vec<SExpr>> {
    let mut reader = Reader {
        chars: text.chars().peekable(),
        line: 1,
        column: 1,
    };
    let mut out = Vec::new();
    while let Some(e) = reader.read()? {
        out.push(e);
    }
    Ok(out)
}

/// Reads exactly one expression.
pub fn parse_one(text: &str) -> Result<SExpr> {
    let mut all = parse_all(text)?;
    match all.len() {
        0 => Err(Error::syntax(1, 1, "empty input")),
        1 => Ok(all.pop().expect("one element")),
        _ => Err(all[1].error("trailing input")),
    }
}
