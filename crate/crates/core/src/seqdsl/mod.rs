//! A line-oriented language for split bundles, cokernels and cohomology
//! queries on Pⁿ.
//!
//! ```text
//! let n = 4
//! let Q = coker(O(-1) -> O(0)^5)
//! query h(twist(Q, -1), -2..2)
//! ```

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

mod ast;
mod eval;
mod lexer;
mod parser;

pub use ast::{Expr, ExprKind, LetValue, Query, Script, Stmt};
pub use eval::{evaluate, QueryResult, QueryValue};
pub use lexer::{tokenize, Token, TokenKind};
pub use parser::{check_scopes, parse_syntax};

/// 1-based source position.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Span {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DiagnosticKind {
    Lexical,
    Syntax,
    Scope,
    Evaluation,
}

impl fmt::Display for DiagnosticKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DiagnosticKind::Lexical => "lexical",
            DiagnosticKind::Syntax => "syntax",
            DiagnosticKind::Scope => "scope",
            DiagnosticKind::Evaluation => "evaluation",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub kind: DiagnosticKind,
    pub span: Span,
    pub message: String,
    /// Tokens that would have been accepted; only filled for syntax errors.
    pub expected: BTreeSet<String>,
}

impl Diagnostic {
    fn new(kind: DiagnosticKind, span: Span, message: String) -> Self {
        Diagnostic {
            kind,
            span,
            message,
            expected: BTreeSet::new(),
        }
    }

    pub(crate) fn lexical(span: Span, message: String) -> Self {
        Diagnostic::new(DiagnosticKind::Lexical, span, message)
    }

    pub(crate) fn scope(span: Span, message: String) -> Self {
        Diagnostic::new(DiagnosticKind::Scope, span, message)
    }

    pub(crate) fn evaluation(span: Span, message: String) -> Self {
        Diagnostic::new(DiagnosticKind::Evaluation, span, message)
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} error: {}", self.span, self.kind, self.message)?;
        if !self.expected.is_empty() {
            let list: Vec<&str> = self.expected.iter().map(String::as_str).collect();
            write!(f, "; expected one of {}", list.join(", "))?;
        }
        Ok(())
    }
}

impl std::error::Error for Diagnostic {}

/// Tokenize, parse and scope-check.
pub fn parse(text: &str) -> Result<Script, Diagnostic> {
    let script = parse_syntax(text)?;
    check_scopes(&script)?;
    Ok(script)
}

/// Parse and evaluate every query.
pub fn run(text: &str) -> Result<Vec<QueryResult>, Diagnostic> {
    evaluate(&parse(text)?)
}

/// One block per query, separated by newlines.
pub fn render_text(results: &[QueryResult]) -> String {
    let mut out = String::new();
    for r in results {
        out.push_str(&r.to_string());
        out.push('\n');
    }
    out
}

pub fn render_json(results: &[QueryResult]) -> String {
    serde_json::to_string_pretty(results).expect("query results serialize")
}
