//! Lexer and recursive-descent parser for the diagram language.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DiagramExpr {
    Id(Vec<String>),
    Braid(String, String),
    BraidInv(String, String),
    Cup(String),
    Cap(String),
    /// A named generator, optionally indexed by labels (`m` or `m[a,b,c]`).
    Gen(String, Option<Vec<String>>),
    /// `Compose(f, g)` is `f . g`: first `g`, then `f`.
    Compose(Box<DiagramExpr>, Box<DiagramExpr>),
    Tensor(Box<DiagramExpr>, Box<DiagramExpr>),
    Dagger(Box<DiagramExpr>),
}

fn labels(f: &mut fmt::Formatter<'_>, ls: &[String]) -> fmt::Result {
    write!(f, "[{}]", ls.join(","))
}

impl fmt::Display for DiagramExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DiagramExpr::Id(w) => {
                f.write_str("id")?;
                labels(f, w)
            }
            DiagramExpr::Braid(a, b) => write!(f, "braid[{a},{b}]"),
            DiagramExpr::BraidInv(a, b) => write!(f, "ibraid[{a},{b}]"),
            DiagramExpr::Cup(a) => write!(f, "cup[{a}]"),
            DiagramExpr::Cap(a) => write!(f, "cap[{a}]"),
            DiagramExpr::Gen(n, None) => f.write_str(n),
            DiagramExpr::Gen(n, Some(ls)) => {
                f.write_str(n)?;
                labels(f, ls)
            }
            DiagramExpr::Compose(x, y) => write!(f, "({x} . {y})"),
            DiagramExpr::Tensor(x, y) => write!(f, "({x} * {y})"),
            DiagramExpr::Dagger(x) => write!(f, "{x}†"),
        }
    }
}

impl DiagramExpr {
    pub fn compose(f: DiagramExpr, g: DiagramExpr) -> Self {
        DiagramExpr::Compose(Box::new(f), Box::new(g))
    }

    pub fn tensor(f: DiagramExpr, g: DiagramExpr) -> Self {
        DiagramExpr::Tensor(Box::new(f), Box::new(g))
    }

    pub fn dagger(f: DiagramExpr) -> Self {
        DiagramExpr::Dagger(Box::new(f))
    }

    pub fn id<S: AsRef<str>>(word: &[S]) -> Self {
        DiagramExpr::Id(word.iter().map(|s| s.as_ref().to_string()).collect())
    }

    /// Number of atoms in the tree.
    pub fn size(&self) -> usize {
        match self {
            DiagramExpr::Compose(x, y) | DiagramExpr::Tensor(x, y) => x.size() + y.size(),
            DiagramExpr::Dagger(x) => x.size(),
            _ => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    LBrack,
    RBrack,
    LParen,
    RParen,
    Comma,
    Dot,
    Star,
    Dagger,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::LBrack => f.write_str("`[`"),
            Tok::RBrack => f.write_str("`]`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::Star => f.write_str("`*`"),
            Tok::Dagger => f.write_str("`†`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

fn lex(text: &str) -> Result<Vec<Spanned>> {
    let mut out = Vec::new();
    let (mut line, mut column) = (1usize, 1usize);
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (l, col) = (line, column);
        let simple = match c {
            '[' => Some(Tok::LBrack),
            ']' => Some(Tok::RBrack),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            '.' | '∘' => Some(Tok::Dot),
            '*' | '⊗' => Some(Tok::Star),
            '†' => Some(Tok::Dagger),
            _ => None,
        };
        if let Some(tok) = simple {
            chars.next();
            column += 1;
            out.push(Spanned { tok, line: l, column: col });
        } else if c == '\n' {
            chars.next();
            line += 1;
            column = 1;
        } else if c.is_whitespace() {
            chars.next();
            column += 1;
        } else if is_ident_char(c) {
            let mut s = String::new();
            while let Some(&c) = chars.peek() {
                if !is_ident_char(c) {
                    break;
                }
                s.push(c);
                chars.next();
                column += 1;
            }
            out.push(Spanned {
                tok: Tok::Ident(s),
                line: l,
                column: col,
            });
        } else {
            return Err(Error::Parse {
                line: l,
                column: col,
                message: format!("unexpected character `{c}`"),
            });
        }
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        column,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, message: String) -> Error {
        let s = &self.toks[self.pos];
        Error::Parse {
            line: s.line,
            column: s.column,
            message,
        }
    }

    fn expect(&mut self, want: Tok) -> Result<()> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(self.error(format!("expected {want}, found {}", self.peek())))
        }
    }

    fn expr(&mut self) -> Result<DiagramExpr> {
        let mut lhs = self.tensor()?;
        while *self.peek() == Tok::Dot {
            self.bump();
            let rhs = self.tensor()?;
            lhs = DiagramExpr::compose(lhs, rhs);
        }
        Ok(lhs)
    }

    fn tensor(&mut self) -> Result<DiagramExpr> {
        let mut lhs = self.postfix()?;
        while *self.peek() == Tok::Star {
            self.bump();
            let rhs = self.postfix()?;
            lhs = DiagramExpr::tensor(lhs, rhs);
        }
        Ok(lhs)
    }

    fn postfix(&mut self) -> Result<DiagramExpr> {
        let mut e = self.atom()?;
        while *self.peek() == Tok::Dagger {
            self.bump();
            e = DiagramExpr::dagger(e);
        }
        Ok(e)
    }

    fn label_list(&mut self) -> Result<Vec<String>> {
        self.expect(Tok::LBrack)?;
        let mut out = Vec::new();
        if *self.peek() == Tok::RBrack {
            self.bump();
            return Ok(out);
        }
        loop {
            match self.bump() {
                Tok::Ident(s) => out.push(s),
                t => {
                    self.pos -= 1;
                    return Err(self.error(format!("expected a label, found {t}")));
                }
            }
            match self.peek() {
                Tok::Comma => {
                    self.bump();
                }
                Tok::RBrack => {
                    self.bump();
                    return Ok(out);
                }
                t => return Err(self.error(format!("expected `,` or `]`, found {t}"))),
            }
        }
    }

    fn arity(&self, name: &str, ls: Vec<String>, n: usize, start: usize) -> Result<Vec<String>> {
        if ls.len() != n {
            let s = &self.toks[start];
            return Err(Error::Parse {
                line: s.line,
                column: s.column,
                message: format!("`{name}` takes {n} label(s), got {}", ls.len()),
            });
        }
        Ok(ls)
    }

    fn atom(&mut self) -> Result<DiagramExpr> {
        let start = self.pos;
        match self.bump() {
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::Ident(name) => {
                let ls = if *self.peek() == Tok::LBrack {
                    Some(self.label_list()?)
                } else {
                    None
                };
                let builtin = matches!(name.as_str(), "id" | "braid" | "ibraid" | "cup" | "cap");
                let Some(ls) = ls else {
                    if builtin {
                        return Err(self.error(format!("`{name}` requires a label list")));
                    }
                    return Ok(DiagramExpr::Gen(name, None));
                };
                Ok(match name.as_str() {
                    "id" => DiagramExpr::Id(ls),
                    "braid" | "ibraid" => {
                        let mut ls = self.arity(&name, ls, 2, start)?.into_iter();
                        let (a, b) = (ls.next().unwrap(), ls.next().unwrap());
                        if name == "braid" {
                            DiagramExpr::Braid(a, b)
                        } else {
                            DiagramExpr::BraidInv(a, b)
                        }
                    }
                    "cup" => DiagramExpr::Cup(self.arity(&name, ls, 1, start)?.remove(0)),
                    "cap" => DiagramExpr::Cap(self.arity(&name, ls, 1, start)?.remove(0)),
                    _ => DiagramExpr::Gen(name, Some(ls)),
                })
            }
            t => {
                self.pos = start;
                Err(self.error(format!("expected a generator or `(`, found {t}")))
            }
        }
    }
}

/// Parses a diagram word. `.` composes right to left and binds looser than `*`.
pub fn parse_diagram(text: &str) -> Result<DiagramExpr> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::Eof {
        return Err(p.error(format!("unexpected {}", p.peek())));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gen(n: &str) -> DiagramExpr {
        DiagramExpr::Gen(n.into(), None)
    }

    #[test]
    fn precedence() {
        let e = parse_diagram("braid[t,t] . braid[t,t]").unwrap();
        let b = DiagramExpr::Braid("t".into(), "t".into());
        assert_eq!(e, DiagramExpr::compose(b.clone(), b));
        let e = parse_diagram("m . (id[q] * m)").unwrap();
        assert_eq!(e, DiagramExpr::compose(gen("m"), DiagramExpr::tensor(DiagramExpr::id(&["q"]), gen("m"))));
        let e = parse_diagram("a * b . c").unwrap();
        assert_eq!(e, DiagramExpr::compose(DiagramExpr::tensor(gen("a"), gen("b")), gen("c")));
        let e = parse_diagram("m†† * v[1,t,t]").unwrap();
        let v = DiagramExpr::Gen("v".into(), Some(vec!["1".into(), "t".into(), "t".into()]));
        assert_eq!(e, DiagramExpr::tensor(DiagramExpr::dagger(DiagramExpr::dagger(gen("m"))), v));
        assert_eq!(parse_diagram("id[]").unwrap(), DiagramExpr::Id(vec![]));
    }

    #[test]
    fn display_reparses() {
        for s in ["cap[τ] . cup[τ]", "(braid[a,b] * id[c]) . ibraid[b,a]†", "m . (m * id[x]) . (id[x] * m)"] {
            let e = parse_diagram(s).unwrap();
            assert_eq!(parse_diagram(&e.to_string()).unwrap(), e);
        }
    }

    #[test]
    fn error_positions() {
        let Err(Error::Parse { line, column, .. }) = parse_diagram("cup[a") else {
            panic!()
        };
        assert_eq!((line, column), (1, 6));
        let Err(Error::Parse { line, column, .. }) = parse_diagram("id[a]\n . $") else {
            panic!()
        };
        assert_eq!((line, column), (2, 4));
        assert!(parse_diagram("braid[a]").is_err());
        assert!(parse_diagram("cup").is_err());
        assert!(parse_diagram("f g").is_err());
        assert!(parse_diagram("").is_err());
    }
}
