use std::fmt;

use super::Span;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Script {
    pub statements: Vec<Stmt>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Stmt {
    Let {
        name: String,
        value: LetValue,
        span: Span,
    },
    Query {
        query: Query,
        span: Span,
    },
    Comment {
        text: String,
        span: Span,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LetValue {
    Int(i64),
    Bundle(Expr),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExprKind {
    /// `O(t)` or `O(t)^k`
    Line { twist: i64, power: Option<i64> },
    Name(String),
    /// two or more summands joined by `++`
    Sum(Vec<Expr>),
    Sym { k: i64, expr: Box<Expr> },
    Wedge { q: i64, expr: Box<Expr> },
    Twist { expr: Box<Expr>, t: i64 },
    Coker { source: Box<Expr>, target: Box<Expr> },
    Paren(Box<Expr>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Query {
    Chern(Expr),
    MaxTwist(Expr),
    Chi(Expr, i64),
    H { expr: Expr, from: i64, to: i64 },
    Stable { n: i64, alpha: i64, gamma: i64 },
}

impl Script {
    /// Copy with every span reset, for structural comparison.
    pub fn without_spans(&self) -> Script {
        let mut s = self.clone();
        for stmt in &mut s.statements {
            match stmt {
                Stmt::Let { value, span, .. } => {
                    *span = Span::default();
                    if let LetValue::Bundle(e) = value {
                        e.erase_spans();
                    }
                }
                Stmt::Query { query, span } => {
                    *span = Span::default();
                    if let Some(e) = query.expr_mut() {
                        e.erase_spans();
                    }
                }
                Stmt::Comment { span, .. } => *span = Span::default(),
            }
        }
        s
    }
}

impl Expr {
    fn erase_spans(&mut self) {
        self.span = Span::default();
        for child in self.children_mut() {
            child.erase_spans();
        }
    }

    pub fn children(&self) -> Vec<&Expr> {
        match &self.kind {
            ExprKind::Line { .. } | ExprKind::Name(_) => vec![],
            ExprKind::Sum(items) => items.iter().collect(),
            ExprKind::Sym { expr, .. }
            | ExprKind::Wedge { expr, .. }
            | ExprKind::Twist { expr, .. }
            | ExprKind::Paren(expr) => vec![expr],
            ExprKind::Coker { source, target } => vec![source, target],
        }
    }

    fn children_mut(&mut self) -> Vec<&mut Expr> {
        match &mut self.kind {
            ExprKind::Line { .. } | ExprKind::Name(_) => vec![],
            ExprKind::Sum(items) => items.iter_mut().collect(),
            ExprKind::Sym { expr, .. }
            | ExprKind::Wedge { expr, .. }
            | ExprKind::Twist { expr, .. }
            | ExprKind::Paren(expr) => vec![expr],
            ExprKind::Coker { source, target } => vec![source, target],
        }
    }
}

impl Query {
    pub fn expr(&self) -> Option<&Expr> {
        match self {
            Query::Chern(e) | Query::MaxTwist(e) | Query::Chi(e, _) => Some(e),
            Query::H { expr, .. } => Some(expr),
            Query::Stable { .. } => None,
        }
    }

    fn expr_mut(&mut self) -> Option<&mut Expr> {
        match self {
            Query::Chern(e) | Query::MaxTwist(e) | Query::Chi(e, _) => Some(e),
            Query::H { expr, .. } => Some(expr),
            Query::Stable { .. } => None,
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ExprKind::Line { twist, power } => {
                write!(f, "O({twist})")?;
                if let Some(p) = power {
                    write!(f, "^{p}")?;
                }
                Ok(())
            }
            ExprKind::Name(name) => f.write_str(name),
            ExprKind::Sum(items) => {
                for (i, e) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ++ ")?;
                    }
                    write!(f, "{e}")?;
                }
                Ok(())
            }
            ExprKind::Sym { k, expr } => write!(f, "sym({k}, {expr})"),
            ExprKind::Wedge { q, expr } => write!(f, "wedge({q}, {expr})"),
            ExprKind::Twist { expr, t } => write!(f, "twist({expr}, {t})"),
            ExprKind::Coker { source, target } => write!(f, "coker({source} -> {target})"),
            ExprKind::Paren(e) => write!(f, "({e})"),
        }
    }
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Query::Chern(e) => write!(f, "chern({e})"),
            Query::MaxTwist(e) => write!(f, "maxtwist({e})"),
            Query::Chi(e, t) => write!(f, "chi({e}, {t})"),
            Query::H { expr, from, to } => write!(f, "h({expr}, {from}..{to})"),
            Query::Stable { n, alpha, gamma } => write!(f, "stable({n}, {alpha}, {gamma})"),
        }
    }
}

impl fmt::Display for Stmt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stmt::Let { name, value, .. } => match value {
                LetValue::Int(v) => write!(f, "let {name} = {v}"),
                LetValue::Bundle(e) => write!(f, "let {name} = {e}"),
            },
            Stmt::Query { query, .. } => write!(f, "query {query}"),
            Stmt::Comment { text, .. } => f.write_str(text),
        }
    }
}

impl fmt::Display for Script {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for stmt in &self.statements {
            writeln!(f, "{stmt}")?;
        }
        Ok(())
    }
}
