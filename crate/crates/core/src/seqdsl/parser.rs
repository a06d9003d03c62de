use std::collections::{BTreeSet, HashSet};

use super::ast::{Expr, ExprKind, LetValue, Query, Script, Stmt};
use super::lexer::{tokenize, Token, TokenKind};
use super::{Diagnostic, DiagnosticKind, Span};

const RESERVED: [&str; 7] = ["let", "query", "O", "sym", "wedge", "twist", "coker"];
const QUERIES: [&str; 5] = ["chern", "maxtwist", "chi", "h", "stable"];
const MAX_DEPTH: usize = 128;

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    /// Optional tokens that were looked for at the current position and absent.
    alternatives: BTreeSet<String>,
    depth: usize,
}

type PResult<T> = Result<T, Diagnostic>;

fn quoted(s: &str) -> String {
    format!("\"{s}\"")
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn advance(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if t.kind != TokenKind::Eof {
            self.pos += 1;
        }
        self.alternatives.clear();
        t
    }

    fn error(&self, expected: impl IntoIterator<Item = String>) -> Diagnostic {
        let tok = self.peek();
        let mut set = self.alternatives.clone();
        set.extend(expected);
        Diagnostic {
            kind: DiagnosticKind::Syntax,
            span: tok.span,
            message: format!("unexpected {}", tok.kind.describe()),
            expected: set,
        }
    }

    fn eat(&mut self, kind: &TokenKind) -> bool {
        if &self.peek().kind == kind {
            self.advance();
            true
        } else {
            self.alternatives.insert(quoted(kind.symbol()));
            false
        }
    }

    fn expect(&mut self, kind: TokenKind) -> PResult<Span> {
        if self.peek().kind == kind {
            Ok(self.advance().span)
        } else {
            Err(self.error([quoted(kind.symbol())]))
        }
    }

    fn expect_int(&mut self) -> PResult<i64> {
        match self.peek().kind {
            TokenKind::Int(v) => {
                self.advance();
                Ok(v)
            }
            _ => Err(self.error(["INT".to_string()])),
        }
    }

    fn script(&mut self) -> PResult<Script> {
        let mut statements = Vec::new();
        loop {
            let span = self.peek().span;
            match self.peek().kind.clone() {
                TokenKind::Eof => break,
                TokenKind::Newline => {
                    self.advance();
                    continue;
                }
                TokenKind::Comment(text) => {
                    self.advance();
                    statements.push(Stmt::Comment { text, span });
                }
                TokenKind::Ident(w) if w == "let" => {
                    self.advance();
                    statements.push(self.let_stmt(span)?);
                }
                TokenKind::Ident(w) if w == "query" => {
                    self.advance();
                    let query = self.query()?;
                    statements.push(Stmt::Query { query, span });
                }
                _ => {
                    return Err(self.error(
                        [quoted("let"), quoted("query"), "COMMENT".into(), "NEWLINE".into()],
                    ))
                }
            }
            match self.peek().kind {
                TokenKind::Newline => {
                    self.advance();
                }
                TokenKind::Eof => break,
                _ => return Err(self.error(["NEWLINE".to_string()])),
            }
        }
        Ok(Script { statements })
    }

    fn let_stmt(&mut self, span: Span) -> PResult<Stmt> {
        let name = match &self.peek().kind {
            TokenKind::Ident(s) if !RESERVED.contains(&s.as_str()) => s.clone(),
            _ => return Err(self.error(["IDENT".to_string()])),
        };
        self.advance();
        self.expect(TokenKind::Equals)?;
        let value = if let TokenKind::Int(v) = self.peek().kind {
            self.advance();
            LetValue::Int(v)
        } else {
            self.alternatives.insert("INT".into());
            LetValue::Bundle(self.bexpr()?)
        };
        Ok(Stmt::Let { name, value, span })
    }

    fn bexpr(&mut self) -> PResult<Expr> {
        let first = self.term()?;
        let span = first.span;
        let mut items = vec![first];
        while self.eat(&TokenKind::PlusPlus) {
            items.push(self.term()?);
        }
        if items.len() == 1 {
            Ok(items.pop().expect("one item"))
        } else {
            Ok(Expr {
                kind: ExprKind::Sum(items),
                span,
            })
        }
    }

    fn term(&mut self) -> PResult<Expr> {
        if self.depth >= MAX_DEPTH {
            let mut d = self.error([]);
            d.message = format!("expression nested deeper than {MAX_DEPTH} levels");
            return Err(d);
        }
        self.depth += 1;
        let result = self.term_inner();
        self.depth -= 1;
        result
    }

    fn term_inner(&mut self) -> PResult<Expr> {
        let span = self.peek().span;
        let word = match self.peek().kind.clone() {
            TokenKind::Ident(w) => w,
            TokenKind::LParen => {
                self.advance();
                let inner = self.bexpr()?;
                self.expect(TokenKind::RParen)?;
                return Ok(Expr {
                    kind: ExprKind::Paren(Box::new(inner)),
                    span,
                });
            }
            _ => {
                let mut first: Vec<String> = ["O", "sym", "wedge", "twist", "coker", "("]
                    .iter()
                    .map(|s| quoted(s))
                    .collect();
                first.push("IDENT".into());
                return Err(self.error(first));
            }
        };
        if !RESERVED.contains(&word.as_str()) {
            self.advance();
            return Ok(Expr {
                kind: ExprKind::Name(word),
                span,
            });
        }
        self.advance();
        let kind = match word.as_str() {
            "O" => {
                self.expect(TokenKind::LParen)?;
                let twist = self.expect_int()?;
                self.expect(TokenKind::RParen)?;
                let power = if self.eat(&TokenKind::Caret) {
                    Some(self.expect_int()?)
                } else {
                    None
                };
                ExprKind::Line { twist, power }
            }
            "sym" | "wedge" => {
                self.expect(TokenKind::LParen)?;
                let k = self.expect_int()?;
                self.expect(TokenKind::Comma)?;
                let expr = Box::new(self.bexpr()?);
                self.expect(TokenKind::RParen)?;
                if word == "sym" {
                    ExprKind::Sym { k, expr }
                } else {
                    ExprKind::Wedge { q: k, expr }
                }
            }
            "twist" => {
                self.expect(TokenKind::LParen)?;
                let expr = Box::new(self.bexpr()?);
                self.expect(TokenKind::Comma)?;
                let t = self.expect_int()?;
                self.expect(TokenKind::RParen)?;
                ExprKind::Twist { expr, t }
            }
            "coker" => {
                self.expect(TokenKind::LParen)?;
                let source = Box::new(self.bexpr()?);
                self.expect(TokenKind::Arrow)?;
                let target = Box::new(self.bexpr()?);
                self.expect(TokenKind::RParen)?;
                ExprKind::Coker { source, target }
            }
            _ => {
                // `let` or `query` in expression position
                self.pos -= 1;
                return Err(self.error(["IDENT".to_string()]));
            }
        };
        Ok(Expr { kind, span })
    }

    fn query(&mut self) -> PResult<Query> {
        let word = match &self.peek().kind {
            TokenKind::Ident(w) if QUERIES.contains(&w.as_str()) => w.clone(),
            _ => return Err(self.error(QUERIES.iter().map(|q| quoted(q)))),
        };
        self.advance();
        self.expect(TokenKind::LParen)?;
        let query = match word.as_str() {
            "chern" => Query::Chern(self.bexpr()?),
            "maxtwist" => Query::MaxTwist(self.bexpr()?),
            "chi" => {
                let e = self.bexpr()?;
                self.expect(TokenKind::Comma)?;
                Query::Chi(e, self.expect_int()?)
            }
            "h" => {
                let expr = self.bexpr()?;
                self.expect(TokenKind::Comma)?;
                let from = self.expect_int()?;
                self.expect(TokenKind::DotDot)?;
                let to = self.expect_int()?;
                Query::H { expr, from, to }
            }
            _ => {
                let n = self.expect_int()?;
                self.expect(TokenKind::Comma)?;
                let alpha = self.expect_int()?;
                self.expect(TokenKind::Comma)?;
                let gamma = self.expect_int()?;
                Query::Stable { n, alpha, gamma }
            }
        };
        self.expect(TokenKind::RParen)?;
        Ok(query)
    }
}

/// Lexing and parsing only; see [`check_scopes`] for name resolution.
pub fn parse_syntax(text: &str) -> Result<Script, Diagnostic> {
    let tokens = tokenize(text)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        alternatives: BTreeSet::new(),
        depth: 0,
    };
    parser.script()
}

fn check_names(e: &Expr, defined: &HashSet<String>) -> Result<(), Diagnostic> {
    if let ExprKind::Name(name) = &e.kind {
        if !defined.contains(name) {
            return Err(Diagnostic::scope(
                e.span,
                format!("`{name}` is used before it is defined"),
            ));
        }
    }
    e.children().into_iter().try_for_each(|c| check_names(c, defined))
}

/// `n` is declared exactly once, before any bundle expression; bundle names
/// are bound once and defined before use.
pub fn check_scopes(script: &Script) -> Result<(), Diagnostic> {
    let mut defined = HashSet::new();
    let mut have_n = false;
    let need_n = |span: Span, have_n: bool| {
        if have_n {
            Ok(())
        } else {
            Err(Diagnostic::scope(
                span,
                "`let n = ...` must come before any bundle expression".into(),
            ))
        }
    };
    for stmt in &script.statements {
        match stmt {
            Stmt::Let { name, value, span } => match value {
                LetValue::Int(_) if name == "n" => {
                    if have_n {
                        return Err(Diagnostic::scope(*span, "`n` is declared twice".into()));
                    }
                    have_n = true;
                }
                LetValue::Int(_) => {
                    return Err(Diagnostic::scope(
                        *span,
                        format!("only `n` may be bound to an integer, not `{name}`"),
                    ))
                }
                LetValue::Bundle(e) => {
                    if name == "n" {
                        return Err(Diagnostic::scope(
                            *span,
                            "`n` is reserved for the ambient dimension".into(),
                        ));
                    }
                    need_n(e.span, have_n)?;
                    check_names(e, &defined)?;
                    if !defined.insert(name.clone()) {
                        return Err(Diagnostic::scope(
                            *span,
                            format!("`{name}` is already defined"),
                        ));
                    }
                }
            },
            Stmt::Query { query, .. } => {
                if let Some(e) = query.expr() {
                    need_n(e.span, have_n)?;
                    check_names(e, &defined)?;
                }
            }
            Stmt::Comment { .. } => {}
        }
    }
    Ok(())
}
