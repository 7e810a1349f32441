//! Recursive descent parsers for formulas and labelled sequents.
//!
//! Line comments start with `#`. The surface syntax is ASCII:
//! `bot top box dia rhd /\ \/ |- : :: => ;`.

use thiserror::Error;

use super::ast::*;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("{line}:{col}: unexpected character `{ch}`")]
    BadChar { ch: char, line: usize, col: usize },
    #[error("{line}:{col}: expected {expected}, found `{found}`")]
    Unexpected {
        expected: String,
        found: String,
        line: usize,
        col: usize,
    },
    #[error("{line}:{col}: unbalanced parenthesis")]
    Unbalanced { line: usize, col: usize },
    #[error("{line}:{col}: {source}")]
    Sort {
        #[source]
        source: SyntaxError,
        line: usize,
        col: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Colon,
    DColon,
    Comma,
    Turnstile,
    LParen,
    RParen,
    Arrow,
    Semi,
    AndOp,
    OrOp,
    Eof,
}

impl std::fmt::Display for Tok {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "{s}"),
            Tok::Colon => write!(f, ":"),
            Tok::DColon => write!(f, "::"),
            Tok::Comma => write!(f, ","),
            Tok::Turnstile => write!(f, "|-"),
            Tok::LParen => write!(f, "("),
            Tok::RParen => write!(f, ")"),
            Tok::Arrow => write!(f, "=>"),
            Tok::Semi => write!(f, ";"),
            Tok::AndOp => write!(f, "/\\"),
            Tok::OrOp => write!(f, "\\/"),
            Tok::Eof => write!(f, "<end of input>"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

pub fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = text.chars().peekable();
    macro_rules! push {
        ($t:expr, $len:expr) => {{
            out.push(Token {
                tok: $t,
                line,
                col,
            });
            col += $len;
        }};
    }
    while let Some(&c) = chars.peek() {
        match c {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
            }
            ' ' | '\t' | '\r' => {
                chars.next();
                col += 1;
            }
            '#' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                }
            }
            ',' => {
                chars.next();
                push!(Tok::Comma, 1);
            }
            '(' => {
                chars.next();
                push!(Tok::LParen, 1);
            }
            ')' => {
                chars.next();
                push!(Tok::RParen, 1);
            }
            ';' => {
                chars.next();
                push!(Tok::Semi, 1);
            }
            ':' => {
                chars.next();
                if chars.peek() == Some(&':') {
                    chars.next();
                    push!(Tok::DColon, 2);
                } else {
                    push!(Tok::Colon, 1);
                }
            }
            '|' => {
                chars.next();
                if chars.peek() == Some(&'-') {
                    chars.next();
                    push!(Tok::Turnstile, 2);
                } else {
                    return Err(ParseError::BadChar { ch: '|', line, col });
                }
            }
            '=' => {
                chars.next();
                if chars.peek() == Some(&'>') {
                    chars.next();
                    push!(Tok::Arrow, 2);
                } else {
                    return Err(ParseError::BadChar { ch: '=', line, col });
                }
            }
            '/' => {
                chars.next();
                if chars.peek() == Some(&'\\') {
                    chars.next();
                    push!(Tok::AndOp, 2);
                } else {
                    return Err(ParseError::BadChar { ch: '/', line, col });
                }
            }
            '\\' => {
                chars.next();
                if chars.peek() == Some(&'/') {
                    chars.next();
                    push!(Tok::OrOp, 2);
                } else {
                    return Err(ParseError::BadChar { ch: '\\', line, col });
                }
            }
            c if c.is_ascii_alphanumeric() || c == '_' => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        s.push(c);
                        chars.next();
                    } else {
                        break;
                    }
                }
                let len = s.len();
                push!(Tok::Ident(s), len);
            }
            other => return Err(ParseError::BadChar { ch: other, line, col }),
        }
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}

pub struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    pub fn new(text: &str) -> Result<Parser, ParseError> {
        Ok(Parser {
            toks: lex(text)?,
            pos: 0,
        })
    }

    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, expected: &str) -> Result<T, ParseError> {
        let t = self.peek();
        Err(ParseError::Unexpected {
            expected: expected.to_string(),
            found: t.tok.to_string(),
            line: t.line,
            col: t.col,
        })
    }

    fn expect(&mut self, tok: Tok) -> Result<Token, ParseError> {
        if self.peek().tok == tok {
            Ok(self.next())
        } else {
            self.err(&format!("`{tok}`"))
        }
    }

    fn sort_err<T>(&self, at: &Token, e: SyntaxError) -> Result<T, ParseError> {
        Err(ParseError::Sort {
            source: e,
            line: at.line,
            col: at.col,
        })
    }

    fn ident(&mut self, what: &str) -> Result<(String, Token), ParseError> {
        let t = self.peek().clone();
        match &t.tok {
            Tok::Ident(s) => {
                let s = s.clone();
                self.next();
                Ok((s, t))
            }
            _ => self.err(what),
        }
    }

    pub fn eof(&mut self) -> Result<(), ParseError> {
        if self.peek().tok == Tok::Eof {
            Ok(())
        } else {
            self.err("end of input")
        }
    }

    // formula := or
    // or      := and (\/ and)*      (left associative)
    // and     := unary (/\ unary)*
    // unary   := (box|dia|rhd) unary | atom
    // atom    := bot | top | ident | ( formula )
    pub fn formula(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.formula_and()?;
        while self.peek().tok == Tok::OrOp {
            self.next();
            let rhs = self.formula_and()?;
            acc = Formula::or(acc, rhs);
        }
        Ok(acc)
    }

    fn formula_and(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.formula_unary()?;
        while self.peek().tok == Tok::AndOp {
            self.next();
            let rhs = self.formula_unary()?;
            acc = Formula::and(acc, rhs);
        }
        Ok(acc)
    }

    fn formula_unary(&mut self) -> Result<Formula, ParseError> {
        if let Tok::Ident(s) = &self.peek().tok {
            let op: Option<fn(Formula) -> Formula> = match s.as_str() {
                "box" => Some(Formula::boxed),
                "dia" => Some(Formula::dia),
                "rhd" => Some(Formula::rhd),
                _ => None,
            };
            if let Some(op) = op {
                self.next();
                let inner = self.formula_unary()?;
                return Ok(op(inner));
            }
        }
        self.formula_atom()
    }

    fn formula_atom(&mut self) -> Result<Formula, ParseError> {
        match self.peek().tok.clone() {
            Tok::Ident(s) => {
                self.next();
                Ok(match s.as_str() {
                    "bot" => Formula::Bot,
                    "top" => Formula::Top,
                    _ => Formula::Prop(s),
                })
            }
            Tok::LParen => {
                let open = self.next();
                let f = self.formula()?;
                if self.peek().tok != Tok::RParen {
                    return Err(ParseError::Unbalanced {
                        line: open.line,
                        col: open.col,
                    });
                }
                self.next();
                Ok(f)
            }
            _ => self.err("a formula"),
        }
    }

    fn label(&mut self) -> Result<Label, ParseError> {
        let (s, tok) = self.ident("a label")?;
        match Label::new(&s) {
            Ok(l) => Ok(l),
            Err(e) => self.sort_err(&tok, e),
        }
    }

    // relexpr := RELNAME | ( relexpr ; relexpr )
    fn rel_expr(&mut self) -> Result<RelExpr, ParseError> {
        match self.peek().tok.clone() {
            Tok::Ident(s) => match RelSym::from_name(&s) {
                Some(sym) => {
                    self.next();
                    Ok(RelExpr::Atom(sym))
                }
                None => self.err("a relation symbol"),
            },
            Tok::LParen => {
                let open = self.next();
                let r = self.rel_expr()?;
                self.expect(Tok::Semi)?;
                let s = self.rel_expr()?;
                if self.peek().tok != Tok::RParen {
                    return Err(ParseError::Unbalanced {
                        line: open.line,
                        col: open.col,
                    });
                }
                self.next();
                Ok(RelExpr::comp(r, s))
            }
            _ => self.err("a relation expression"),
        }
    }

    // relatom := label RELNAME label | label ( relexpr ; relexpr ) label
    fn rel_atom(&mut self) -> Result<RelAtom, ParseError> {
        let at = self.peek().clone();
        let lhs = self.label()?;
        let rel = self.rel_expr()?;
        let rhs = self.label()?;
        match RelAtom::new(lhs, rel, rhs) {
            Ok(a) => Ok(a),
            Err(e) => self.sort_err(&at, e),
        }
    }

    // item := ( relatom => relatom )
    //       | label : formula | label :: formula
    //       | relatom
    pub fn item(&mut self) -> Result<SequentItem, ParseError> {
        let at = self.peek().clone();
        if at.tok == Tok::LParen {
            // An implication term; composite atoms start with a label.
            self.next();
            let ante = self.rel_atom()?;
            self.expect(Tok::Arrow)?;
            let cons = self.rel_atom()?;
            self.expect(Tok::RParen)?;
            return match ImplTerm::new(ante, cons) {
                Ok(t) => Ok(SequentItem::Impl(t)),
                Err(e) => self.sort_err(&at, e),
            };
        }
        let lhs = self.label()?;
        match self.peek().tok.clone() {
            Tok::Colon => {
                self.next();
                if lhs.sort() != Sort::Object {
                    return self.sort_err(
                        &at,
                        SyntaxError::SortMismatch {
                            expected: Sort::Object,
                            got: lhs.name().to_string(),
                        },
                    );
                }
                Ok(SequentItem::Fo(lhs, self.formula()?))
            }
            Tok::DColon => {
                self.next();
                if lhs.sort() != Sort::Feature {
                    return self.sort_err(
                        &at,
                        SyntaxError::SortMismatch {
                            expected: Sort::Feature,
                            got: lhs.name().to_string(),
                        },
                    );
                }
                Ok(SequentItem::Fo(lhs, self.formula()?))
            }
            Tok::Ident(_) | Tok::LParen => {
                let rel = self.rel_expr()?;
                let rhs = self.label()?;
                match RelAtom::new(lhs, rel, rhs) {
                    Ok(a) => Ok(SequentItem::Rel(a)),
                    Err(e) => self.sort_err(&at, e),
                }
            }
            _ => self.err("`:`, `::`, or a relation"),
        }
    }

    // sequent := items? |- items?
    pub fn sequent(&mut self) -> Result<Sequent, ParseError> {
        let mut left = Vec::new();
        if self.peek().tok != Tok::Turnstile {
            left.push(self.item()?);
            while self.peek().tok == Tok::Comma {
                self.next();
                left.push(self.item()?);
            }
        }
        self.expect(Tok::Turnstile)?;
        let mut right = Vec::new();
        if self.peek().tok != Tok::Eof && self.peek().tok != Tok::RParen {
            right.push(self.item()?);
            while self.peek().tok == Tok::Comma {
                self.next();
                right.push(self.item()?);
            }
        }
        Ok(Sequent::new(left, right))
    }
}

/// Parses a modal formula.
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser::new(text)?;
    let f = p.formula()?;
    p.eof()?;
    Ok(f)
}

/// Parses a labelled sequent.
pub fn parse_sequent(text: &str) -> Result<Sequent, ParseError> {
    let mut p = Parser::new(text)?;
    let s = p.sequent()?;
    p.eof()?;
    Ok(s)
}

/// Parses a single sequent item.
pub fn parse_item(text: &str) -> Result<SequentItem, ParseError> {
    let mut p = Parser::new(text)?;
    let it = p.item()?;
    p.eof()?;
    Ok(it)
}

/// Parses a relation expression such as `Rbox` or `(J;(I;RBdia))`.
pub fn parse_rel_expr(text: &str) -> Result<RelExpr, ParseError> {
    let mut p = Parser::new(text)?;
    let e = p.rel_expr()?;
    p.eof()?;
    Ok(e)
}

/// Parses `phi |- psi` where both sides are single unlabelled formulas.
pub fn parse_formula_sequent(text: &str) -> Result<(Formula, Formula), ParseError> {
    let (lhs_text, rhs_text) = match text.split_once("|-") {
        Some(parts) => parts,
        None => {
            let mut p = Parser::new(text)?;
            p.pos = p.toks.len() - 1;
            return p.err("`|-`");
        }
    };
    Ok((parse_formula(lhs_text)?, parse_formula(rhs_text)?))
}
