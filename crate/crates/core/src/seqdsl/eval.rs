use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use super::ast::{Expr, ExprKind, LetValue, Query, Script, Stmt};
use super::{Diagnostic, Span};
use crate::bundlecalc::{
    self, chase_sequence, chern_div, chern_total, is_stable, split_cohomology, BundleError,
    ChernPoly, CohProfile, SplitBundle, StabilityReport,
};

const MAX_LITERAL: i64 = 1_000_000;
const MAX_TWIST: i64 = 1_000_000_000_000;
const MAX_H_RANGE: i64 = 1000;
const MAX_N: i64 = 64;

/// The cokernel of a left resolution `terms[0] → terms[1] → … → terms[k]`.
/// A split bundle is a one-term resolution. Each term is a twist multiset,
/// possibly empty so that sums of resolutions of different lengths align.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Value {
    terms: Vec<Vec<i64>>,
}

impl Value {
    fn rank(&self) -> i64 {
        let last = self.terms.len() - 1;
        self.terms
            .iter()
            .enumerate()
            .map(|(k, t)| {
                let r = t.len() as i64;
                if (last - k) % 2 == 0 {
                    r
                } else {
                    -r
                }
            })
            .sum()
    }

    fn split(&self) -> Option<&[i64]> {
        match self.terms.as_slice() {
            [only] => Some(only),
            _ => None,
        }
    }

    fn twisted(&self, t: i64) -> Value {
        Value {
            terms: self
                .terms
                .iter()
                .map(|term| term.iter().map(|x| x + t).collect())
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum QueryValue {
    Chern { classes: Vec<i128> },
    Cohomology { rows: Vec<(i64, CohProfile)> },
    Chi { value: i128 },
    MaxTwist { value: i64 },
    Stable { verdict: String, report: StabilityReport },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QueryResult {
    pub span: Span,
    pub query: String,
    #[serde(flatten)]
    pub value: QueryValue,
}

fn join<T: fmt::Display>(items: &[T]) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(", ")
}

impl fmt::Display for QueryResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.value {
            QueryValue::Chern { classes } => write!(f, "{} = ({})", self.query, join(classes)),
            QueryValue::Chi { value } => write!(f, "{} = {value}", self.query),
            QueryValue::MaxTwist { value } => write!(f, "{} = {value}", self.query),
            QueryValue::Stable { verdict, .. } => write!(f, "{} = {verdict}", self.query),
            QueryValue::Cohomology { rows } => {
                writeln!(f, "{} =", self.query)?;
                let n = rows.first().map_or(0, |(_, p)| p.n);
                let mut header = vec!["t".to_string()];
                header.extend((0..=n).map(|i| format!("h{i}")));
                header.push("chi".into());
                let mut table = vec![header];
                for (t, p) in rows {
                    let mut row = vec![t.to_string()];
                    row.extend(p.h.iter().map(|e| e.to_string()));
                    row.push(p.chi.to_string());
                    table.push(row);
                }
                let widths: Vec<usize> = (0..table[0].len())
                    .map(|c| table.iter().map(|r| r[c].len()).max().unwrap_or(0))
                    .collect();
                let lines: Vec<String> = table
                    .iter()
                    .map(|r| {
                        let cells: Vec<String> = r
                            .iter()
                            .zip(&widths)
                            .map(|(s, w)| format!("{s:>w$}"))
                            .collect();
                        format!("  {}", cells.join("  "))
                    })
                    .collect();
                f.write_str(&lines.join("\n"))
            }
        }
    }
}

struct Evaluator {
    n: usize,
    env: HashMap<String, Value>,
}

fn bundle_err(span: Span) -> impl Fn(BundleError) -> Diagnostic {
    move |e| Diagnostic::evaluation(span, e.to_string())
}

fn literal(span: Span, what: &str, v: i64) -> Result<i64, Diagnostic> {
    if v.abs() > MAX_LITERAL {
        Err(Diagnostic::evaluation(
            span,
            format!("{what} {v} exceeds the supported magnitude {MAX_LITERAL}"),
        ))
    } else {
        Ok(v)
    }
}

impl Evaluator {
    fn split_bundle(&self, twists: &[i64]) -> SplitBundle {
        SplitBundle::new(self.n, twists.to_vec()).expect("caller checks for empty terms")
    }

    fn expr(&self, e: &Expr) -> Result<Value, Diagnostic> {
        let span = e.span;
        let value = match &e.kind {
            ExprKind::Line { twist, power } => {
                let t = literal(span, "twist", *twist)?;
                let p = literal(span, "power", power.unwrap_or(1))?;
                if p < 1 {
                    return Err(Diagnostic::evaluation(
                        span,
                        format!("power of O({t}) must be at least 1, got {p}"),
                    ));
                }
                Value {
                    terms: vec![vec![t; p as usize]],
                }
            }
            ExprKind::Name(name) => self.env[name].clone(),
            ExprKind::Paren(inner) => self.expr(inner)?,
            ExprKind::Sum(items) => {
                let values = items
                    .iter()
                    .map(|i| self.expr(i))
                    .collect::<Result<Vec<_>, _>>()?;
                let len = values.iter().map(|v| v.terms.len()).max().unwrap_or(1);
                let mut terms = vec![Vec::new(); len];
                for v in &values {
                    let offset = len - v.terms.len();
                    for (k, term) in v.terms.iter().enumerate() {
                        terms[offset + k].extend_from_slice(term);
                    }
                }
                Value { terms }
            }
            ExprKind::Sym { k, expr } | ExprKind::Wedge { q: k, expr } => {
                let is_sym = matches!(e.kind, ExprKind::Sym { .. });
                let name = if is_sym { "sym" } else { "wedge" };
                let inner = self.expr(expr)?;
                let Some(twists) = inner.split() else {
                    return Err(Diagnostic::evaluation(
                        span,
                        format!("{name} needs a split bundle, not a cokernel"),
                    ));
                };
                let k = literal(span, "power", *k)?;
                if k < 0 {
                    return Err(Diagnostic::evaluation(
                        span,
                        format!("{name} power must be nonnegative, got {k}"),
                    ));
                }
                let b = self.split_bundle(twists);
                let out = if is_sym {
                    bundlecalc::sym_power(&b, k as usize)
                } else {
                    bundlecalc::wedge_power(&b, k as usize)
                }
                .map_err(bundle_err(span))?;
                Value {
                    terms: vec![out.twists().to_vec()],
                }
            }
            ExprKind::Twist { expr, t } => {
                let t = literal(span, "twist", *t)?;
                self.expr(expr)?.twisted(t)
            }
            ExprKind::Coker { source, target } => {
                let s = self.expr(source)?;
                let t = self.expr(target)?;
                let Some(target_twists) = t.split() else {
                    return Err(Diagnostic::evaluation(
                        target.span,
                        "the target of coker must be a split bundle".into(),
                    ));
                };
                if t.rank() <= s.rank() {
                    return Err(Diagnostic::evaluation(
                        span,
                        format!(
                            "coker needs rank(target) > rank(source), got {} and {}",
                            t.rank(),
                            s.rank()
                        ),
                    ));
                }
                let mut terms = s.terms.clone();
                terms.push(target_twists.to_vec());
                Value { terms }
            }
        };
        if value.terms.iter().flatten().any(|x| x.abs() > MAX_TWIST) {
            return Err(Diagnostic::evaluation(
                span,
                format!("a twist exceeds the supported magnitude {MAX_TWIST}"),
            ));
        }
        Ok(value)
    }

    fn chern(&self, v: &Value, span: Span) -> Result<ChernPoly, Diagnostic> {
        let mut c = ChernPoly::one(self.n);
        let last = v.terms.len() - 1;
        for (k, term) in v.terms.iter().enumerate() {
            if term.is_empty() {
                continue;
            }
            let ct = chern_total(&self.split_bundle(term)).map_err(bundle_err(span))?;
            c = if (last - k) % 2 == 0 {
                c.mul(&ct)
            } else {
                chern_div(&c, &ct)
            }
            .map_err(bundle_err(span))?;
        }
        Ok(c)
    }

    fn profile(&self, twists: &[i64], span: Span) -> Result<CohProfile, Diagnostic> {
        if twists.is_empty() {
            Ok(CohProfile::zero(self.n))
        } else {
            split_cohomology(&self.split_bundle(twists)).map_err(bundle_err(span))
        }
    }

    fn cohomology(&self, v: &Value, span: Span) -> Result<CohProfile, Diagnostic> {
        let mut current = self.profile(&v.terms[0], span)?;
        for term in &v.terms[1..] {
            let mid = self.profile(term, span)?;
            current = chase_sequence(Some(&current), Some(&mid), None).map_err(bundle_err(span))?;
        }
        Ok(current)
    }

    fn query(&self, q: &Query, span: Span) -> Result<QueryValue, Diagnostic> {
        Ok(match q {
            Query::Chern(e) => QueryValue::Chern {
                classes: self.chern(&self.expr(e)?, e.span)?.coeffs,
            },
            Query::MaxTwist(e) => {
                let v = self.expr(e)?;
                let Some(twists) = v.split() else {
                    return Err(Diagnostic::evaluation(
                        e.span,
                        "maxtwist needs a split bundle".into(),
                    ));
                };
                QueryValue::MaxTwist {
                    value: bundlecalc::max_embedding_twist(&self.split_bundle(twists)),
                }
            }
            Query::Chi(e, t) => {
                let v = self.expr(e)?.twisted(literal(span, "twist", *t)?);
                QueryValue::Chi {
                    value: self.cohomology(&v, e.span)?.chi,
                }
            }
            Query::H { expr, from, to } => {
                let (from, to) = (literal(span, "twist", *from)?, literal(span, "twist", *to)?);
                if from > to || to - from >= MAX_H_RANGE {
                    return Err(Diagnostic::evaluation(
                        span,
                        format!("twist range {from}..{to} must be increasing and shorter than {MAX_H_RANGE}"),
                    ));
                }
                let v = self.expr(expr)?;
                let rows = (from..=to)
                    .map(|t| Ok((t, self.cohomology(&v.twisted(t), expr.span)?)))
                    .collect::<Result<Vec<_>, Diagnostic>>()?;
                QueryValue::Cohomology { rows }
            }
            Query::Stable { n, alpha, gamma } => {
                if !(0..=MAX_N).contains(n) {
                    return Err(Diagnostic::evaluation(
                        span,
                        format!("n must lie in 0..={MAX_N}, got {n}"),
                    ));
                }
                let report = is_stable(
                    *n as usize,
                    literal(span, "alpha", *alpha)?,
                    literal(span, "gamma", *gamma)?,
                )
                .map_err(bundle_err(span))?;
                let relation = match gamma.cmp(&report.threshold()) {
                    std::cmp::Ordering::Greater => ">",
                    std::cmp::Ordering::Equal => "=",
                    std::cmp::Ordering::Less => "<",
                };
                let verdict = format!(
                    "{}: gamma {relation} 2(n-1)alpha",
                    if report.stable { "stable" } else { "unstable" }
                );
                QueryValue::Stable { verdict, report }
            }
        })
    }
}

/// Evaluate a parsed, scope-checked script.
pub fn evaluate(script: &Script) -> Result<Vec<QueryResult>, Diagnostic> {
    let mut ev = Evaluator {
        n: 0,
        env: HashMap::new(),
    };
    let mut results = Vec::new();
    for stmt in &script.statements {
        match stmt {
            Stmt::Let { name, value, span } => match value {
                LetValue::Int(v) => {
                    if !(1..=MAX_N).contains(v) {
                        return Err(Diagnostic::evaluation(
                            *span,
                            format!("n must lie in 1..={MAX_N}, got {v}"),
                        ));
                    }
                    ev.n = *v as usize;
                }
                LetValue::Bundle(e) => {
                    let v = ev.expr(e)?;
                    ev.env.insert(name.clone(), v);
                }
            },
            Stmt::Query { query, span } => {
                let value = ev.query(query, *span)?;
                results.push(QueryResult {
                    span: *span,
                    query: query.to_string(),
                    value,
                });
            }
            Stmt::Comment { .. } => {}
        }
    }
    Ok(results)
}
