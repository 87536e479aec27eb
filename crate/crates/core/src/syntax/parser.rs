use std::collections::HashMap;
use std::sync::Arc;

use super::lexer::{tokenize, Tok, Token};
use super::{Goal, Mode, ModeDirective, ParseError, PredKey, SourceClause, SourceProgram};
use crate::terms::{Term, Var, CONS, TUPLE};

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    scope: HashMap<String, Var>,
}

impl Parser {
    fn new(text: &str) -> Result<Parser, ParseError> {
        Ok(Parser {
            toks: tokenize(text)?,
            pos: 0,
            scope: HashMap::new(),
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn here(&self) -> (usize, usize) {
        let t = &self.toks[self.pos];
        (t.line, t.column)
    }

    fn advance(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        let (line, column) = self.here();
        Err(ParseError::syntax(line, column, message))
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.advance();
            Ok(())
        } else {
            self.error(format!("expected {}, found {}", tok.describe(), self.peek().describe()))
        }
    }

    fn variable(&mut self, name: &str) -> Term {
        if name == "_" {
            return Term::Var(Var::fresh("_"));
        }
        let v = self
            .scope
            .entry(name.to_string())
            .or_insert_with(|| Var::fresh(name))
            .clone();
        Term::Var(v)
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        match self.peek().clone() {
            Tok::Var(name) => {
                self.advance();
                Ok(self.variable(&name))
            }
            Tok::Int(n) => {
                self.advance();
                Ok(Term::int(n))
            }
            Tok::Atom(name) => {
                self.advance();
                if *self.peek() == Tok::LParen {
                    self.advance();
                    let args = self.args(Tok::RParen)?;
                    self.expect(Tok::RParen)?;
                    if args.is_empty() {
                        return self.error("empty argument list");
                    }
                    Ok(Term::compound(&name, args))
                } else {
                    Ok(Term::atom(&name))
                }
            }
            Tok::LBracket => {
                self.advance();
                if *self.peek() == Tok::RBracket {
                    self.advance();
                    return Ok(Term::nil());
                }
                let items = self.args(Tok::RBracket)?;
                let tail = if *self.peek() == Tok::Bar {
                    self.advance();
                    self.term()?
                } else {
                    Term::nil()
                };
                self.expect(Tok::RBracket)?;
                Ok(Term::list_with_tail(items, tail))
            }
            Tok::LAngle => {
                self.advance();
                let args = if *self.peek() == Tok::RAngle {
                    Vec::new()
                } else {
                    self.args(Tok::RAngle)?
                };
                self.expect(Tok::RAngle)?;
                Ok(Term::tuple(args))
            }
            other => self.error(format!("expected a term, found {}", other.describe())),
        }
    }

    /// Comma-separated terms up to (not including) `close` or `|`.
    fn args(&mut self, close: Tok) -> Result<Vec<Term>, ParseError> {
        let mut out = vec![self.term()?];
        while *self.peek() == Tok::Comma {
            self.advance();
            out.push(self.term()?);
        }
        if *self.peek() != close && *self.peek() != Tok::Bar {
            return self.error(format!(
                "expected `,` or {}, found {}",
                close.describe(),
                self.peek().describe()
            ));
        }
        Ok(out)
    }

    fn atom_goal(&mut self, what: &str) -> Result<Term, ParseError> {
        let (line, column) = self.here();
        let t = self.term()?;
        match &t {
            Term::Atom(_) => Ok(t),
            Term::Compound(f, _) if &**f != TUPLE && &**f != CONS => Ok(t),
            _ => Err(ParseError::syntax(
                line,
                column,
                format!("{what} must be an atom or compound term"),
            )),
        }
    }

    fn directive(&mut self, prog: &mut SourceProgram) -> Result<(), ParseError> {
        let line = self.here().0;
        let kind = match self.peek().clone() {
            Tok::Atom(a) if a == "mode" || a == "defn" => a,
            other => return self.error(format!("unknown directive {}", other.describe())),
        };
        self.advance();
        self.expect(Tok::LParen)?;
        let name = match self.peek().clone() {
            Tok::Atom(a) => {
                self.advance();
                a
            }
            other => return self.error(format!("expected predicate name, found {}", other.describe())),
        };
        self.expect(Tok::Comma)?;
        self.expect(Tok::LBracket)?;
        let mut modes = Vec::new();
        if *self.peek() != Tok::RBracket {
            loop {
                match self.peek().clone() {
                    Tok::Atom(m) if kind == "mode" && m == "in" => modes.push(Mode::In),
                    Tok::Atom(m) if kind == "mode" && m == "out" => modes.push(Mode::Out),
                    other => {
                        let expected = if kind == "mode" { "`in` or `out`" } else { "`]`" };
                        return self.error(format!("expected {expected}, found {}", other.describe()));
                    }
                }
                self.advance();
                if *self.peek() == Tok::Comma {
                    self.advance();
                } else {
                    break;
                }
            }
        }
        self.expect(Tok::RBracket)?;
        self.expect(Tok::RParen)?;
        self.expect(Tok::Dot)?;
        if kind == "defn" {
            prog.empty_defns.push(Arc::from(name.as_str()));
            return Ok(());
        }
        if prog.modes.iter().any(|m| *m.predicate.name == *name) {
            return Err(ParseError::DuplicateMode { name, line });
        }
        prog.modes.push(ModeDirective {
            predicate: PredKey::new(&name, modes.len()),
            modes,
        });
        Ok(())
    }

    fn clause(&mut self) -> Result<SourceClause, ParseError> {
        self.scope.clear();
        let (line, column) = self.here();
        let head = self.atom_goal("clause head")?;
        if matches!(head, Term::Atom(_)) {
            return Err(ParseError::syntax(line, column, "clause head must be a compound term"));
        }
        let mut body = Vec::new();
        if *self.peek() == Tok::Neck {
            self.advance();
            body.push(self.atom_goal("body goal")?);
            while *self.peek() == Tok::Comma {
                self.advance();
                body.push(self.atom_goal("body goal")?);
            }
        }
        self.expect(Tok::Dot)?;
        Ok(SourceClause { head, body })
    }
}

/// Parses a program text. Variables are scoped per clause; clause order is
/// preserved.
pub fn parse_program(text: &str) -> Result<SourceProgram, ParseError> {
    let mut p = Parser::new(text)?;
    let mut prog = SourceProgram::default();
    while *p.peek() != Tok::Eof {
        if *p.peek() == Tok::Neck {
            p.advance();
            p.directive(&mut prog)?;
        } else {
            let c = p.clause()?;
            prog.clauses.push(c);
        }
    }
    for m in &prog.modes {
        for c in &prog.clauses {
            for a in c.atoms() {
                if let Some(k) = PredKey::of(a) {
                    if k.name == m.predicate.name && k.arity != m.predicate.arity {
                        return Err(ParseError::ModeArity {
                            name: k.name.to_string(),
                            declared: m.predicate.arity,
                            used: k.arity,
                        });
                    }
                }
            }
        }
    }
    Ok(prog)
}

/// Parses a single-atom goal, with or without a trailing `.`.
pub fn parse_goal(text: &str) -> Result<Goal, ParseError> {
    let mut p = Parser::new(text)?;
    let atom = p.atom_goal("goal")?;
    if *p.peek() == Tok::Comma {
        return Err(ParseError::Conjunction);
    }
    if *p.peek() == Tok::Dot {
        p.advance();
    }
    if *p.peek() != Tok::Eof {
        return p.error(format!("unexpected {} after goal", p.peek().describe()));
    }
    Ok(Goal { atom })
}
