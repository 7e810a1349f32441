//! Proof script format: one s-expression per node,
//!
//! ```text
//! (rule-id "<conclusion sequent>"
//!   (bind <metavar> <value>)*
//!   <premise-node>*)
//! ```
//!
//! `#` starts a line comment outside string literals.

use thiserror::Error;

use super::check::ProofNode;
use super::rules::RuleId;
use crate::syntax::parse_sequent;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ScriptError {
    #[error("line {0}: unterminated string literal")]
    UnterminatedString(usize),
    #[error("line {0}: unbalanced parenthesis")]
    Unbalanced(usize),
    #[error("line {line}: expected {expected}")]
    Expected { expected: String, line: usize },
    #[error("line {0}: unknown rule `{1}`")]
    UnknownRule(usize, String),
    #[error("line {line}: bad sequent: {msg}")]
    BadSequent { line: usize, msg: String },
    #[error("trailing input after the root node")]
    Trailing,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum SExp {
    Atom(String, usize),
    Str(String, usize),
    List(Vec<SExp>, usize),
}

impl SExp {
    fn line(&self) -> usize {
        match self {
            SExp::Atom(_, l) | SExp::Str(_, l) | SExp::List(_, l) => *l,
        }
    }
}

fn lex_sexp(text: &str) -> Result<Vec<SExp>, ScriptError> {
    #[derive(Debug)]
    enum Tok {
        L(usize),
        R(usize),
        Atom(String, usize),
        Str(String, usize),
    }
    let mut toks = Vec::new();
    let mut line = 1usize;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            '\n' => {
                line += 1;
                chars.next();
            }
            ' ' | '\t' | '\r' => {
                chars.next();
            }
            '#' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                }
            }
            '(' => {
                toks.push(Tok::L(line));
                chars.next();
            }
            ')' => {
                toks.push(Tok::R(line));
                chars.next();
            }
            '"' => {
                chars.next();
                let start = line;
                let mut s = String::new();
                loop {
                    match chars.next() {
                        None => return Err(ScriptError::UnterminatedString(start)),
                        Some('"') => break,
                        Some('\n') => {
                            line += 1;
                            s.push('\n');
                        }
                        Some(c) => s.push(c),
                    }
                }
                toks.push(Tok::Str(s, start));
            }
            _ => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_whitespace() || c == '(' || c == ')' || c == '"' || c == '#' {
                        break;
                    }
                    s.push(c);
                    chars.next();
                }
                toks.push(Tok::Atom(s, line));
            }
        }
    }

    let mut stack: Vec<(Vec<SExp>, usize)> = vec![(Vec::new(), 0)];
    for t in toks {
        match t {
            Tok::L(l) => stack.push((Vec::new(), l)),
            Tok::R(l) => {
                let (items, open_line) = stack.pop().unwrap();
                if stack.is_empty() {
                    return Err(ScriptError::Unbalanced(l));
                }
                stack.last_mut().unwrap().0.push(SExp::List(items, open_line));
            }
            Tok::Atom(s, l) => stack.last_mut().unwrap().0.push(SExp::Atom(s, l)),
            Tok::Str(s, l) => stack.last_mut().unwrap().0.push(SExp::Str(s, l)),
        }
    }
    if stack.len() != 1 {
        return Err(ScriptError::Unbalanced(line));
    }
    Ok(stack.pop().unwrap().0)
}

fn node_from_sexp(e: &SExp) -> Result<ProofNode, ScriptError> {
    let SExp::List(items, line) = e else {
        return Err(ScriptError::Expected {
            expected: "a node (rule \"sequent\" ...)".to_string(),
            line: e.line(),
        });
    };
    let mut it = items.iter();
    let rule = match it.next() {
        Some(SExp::Atom(name, l)) => RuleId::from_script_name(name)
            .ok_or_else(|| ScriptError::UnknownRule(*l, name.clone()))?,
        other => {
            return Err(ScriptError::Expected {
                expected: "a rule name".to_string(),
                line: other.map_or(*line, |e| e.line()),
            })
        }
    };
    let conclusion = match it.next() {
        Some(SExp::Str(text, l)) => parse_sequent(text).map_err(|e| ScriptError::BadSequent {
            line: *l,
            msg: e.to_string(),
        })?,
        other => {
            return Err(ScriptError::Expected {
                expected: "a quoted conclusion sequent".to_string(),
                line: other.map_or(*line, |e| e.line()),
            })
        }
    };
    let mut binds = Vec::new();
    let mut premises = Vec::new();
    for e in it {
        match e {
            SExp::List(parts, l)
                if matches!(parts.first(), Some(SExp::Atom(kw, _)) if kw == "bind") =>
            {
                let (name, value) = match (parts.get(1), parts.get(2)) {
                    (Some(SExp::Atom(n, _)), Some(SExp::Atom(v, _)))
                    | (Some(SExp::Atom(n, _)), Some(SExp::Str(v, _))) => (n.clone(), v.clone()),
                    _ => {
                        return Err(ScriptError::Expected {
                            expected: "(bind <metavar> <value>)".to_string(),
                            line: *l,
                        })
                    }
                };
                binds.push((name, value));
            }
            node => premises.push(node_from_sexp(node)?),
        }
    }
    Ok(ProofNode {
        rule,
        conclusion,
        binds,
        premises,
    })
}

/// Parses a proof script; the file root is one node.
pub fn parse_proof(text: &str) -> Result<ProofNode, ScriptError> {
    let tops = lex_sexp(text)?;
    let mut nodes = tops.iter();
    let root = match nodes.next() {
        Some(e) => node_from_sexp(e)?,
        None => {
            return Err(ScriptError::Expected {
                expected: "a root node".to_string(),
                line: 1,
            })
        }
    };
    if nodes.next().is_some() {
        return Err(ScriptError::Trailing);
    }
    Ok(root)
}

fn quote(s: &str) -> String {
    format!("\"{s}\"")
}

fn print_into(node: &ProofNode, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    out.push_str(&format!(
        "{pad}({} {}",
        node.rule.script_name(),
        quote(&node.conclusion.to_string())
    ));
    for (name, value) in &node.binds {
        let v = if value.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            value.clone()
        } else {
            quote(value)
        };
        out.push_str(&format!("\n{pad}  (bind {name} {v})"));
    }
    for p in &node.premises {
        out.push('\n');
        print_into(p, depth + 1, out);
    }
    out.push(')');
}

/// Serializes a proof tree in the script format.
pub fn print_proof(node: &ProofNode) -> String {
    let mut out = String::new();
    print_into(node, 0, &mut out);
    out.push('\n');
    out
}
