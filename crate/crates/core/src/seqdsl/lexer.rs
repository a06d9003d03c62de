use super::{Diagnostic, Span};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenKind {
    Ident(String),
    Int(i64),
    Comment(String),
    LParen,
    RParen,
    Comma,
    Equals,
    Caret,
    PlusPlus,
    Arrow,
    DotDot,
    Newline,
    Eof,
}

impl TokenKind {
    /// How the token is named in "expected ..." lists.
    pub fn describe(&self) -> String {
        match self {
            TokenKind::Ident(s) => format!("identifier `{s}`"),
            TokenKind::Int(v) => format!("integer {v}"),
            TokenKind::Comment(_) => "comment".into(),
            TokenKind::Newline => "end of line".into(),
            TokenKind::Eof => "end of input".into(),
            other => format!("\"{}\"", other.symbol()),
        }
    }

    pub fn symbol(&self) -> &'static str {
        match self {
            TokenKind::LParen => "(",
            TokenKind::RParen => ")",
            TokenKind::Comma => ",",
            TokenKind::Equals => "=",
            TokenKind::Caret => "^",
            TokenKind::PlusPlus => "++",
            TokenKind::Arrow => "->",
            TokenKind::DotDot => "..",
            TokenKind::Ident(_) => "IDENT",
            TokenKind::Int(_) => "INT",
            TokenKind::Comment(_) => "COMMENT",
            TokenKind::Newline => "NEWLINE",
            TokenKind::Eof => "EOF",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub span: Span,
}

pub fn tokenize(text: &str) -> Result<Vec<Token>, Diagnostic> {
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);

    while i < chars.len() {
        let c = chars[i];
        let span = Span { line, col };
        let start = i;
        let kind = match c {
            '\n' => {
                tokens.push(Token {
                    kind: TokenKind::Newline,
                    span,
                });
                i += 1;
                line += 1;
                col = 1;
                continue;
            }
            ' ' | '\t' | '\r' => {
                i += 1;
                col += 1;
                continue;
            }
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
                TokenKind::Comment(chars[start..i].iter().collect::<String>().trim_end().into())
            }
            '(' | ')' | ',' | '=' | '^' => {
                i += 1;
                match c {
                    '(' => TokenKind::LParen,
                    ')' => TokenKind::RParen,
                    ',' => TokenKind::Comma,
                    '=' => TokenKind::Equals,
                    _ => TokenKind::Caret,
                }
            }
            '+' if chars.get(i + 1) == Some(&'+') => {
                i += 2;
                TokenKind::PlusPlus
            }
            '.' if chars.get(i + 1) == Some(&'.') => {
                i += 2;
                TokenKind::DotDot
            }
            '-' if chars.get(i + 1) == Some(&'>') => {
                i += 2;
                TokenKind::Arrow
            }
            '-' | '0'..='9' => {
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                if s == "-" {
                    return Err(Diagnostic::lexical(
                        span,
                        "a digit or \">\" must follow \"-\"".into(),
                    ));
                }
                match s.parse::<i64>() {
                    Ok(v) => TokenKind::Int(v),
                    Err(_) => {
                        return Err(Diagnostic::lexical(
                            span,
                            format!("integer literal {s} is out of range"),
                        ))
                    }
                }
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                TokenKind::Ident(chars[start..i].iter().collect())
            }
            other => {
                return Err(Diagnostic::lexical(
                    span,
                    format!("unexpected character {other:?}"),
                ))
            }
        };
        col += i - start;
        tokens.push(Token { kind, span });
    }
    tokens.push(Token {
        kind: TokenKind::Eof,
        span: Span { line, col },
    });
    Ok(tokens)
}
