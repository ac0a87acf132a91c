//! Line-oriented `key = value` / section text format shared by parameter and
//! scenario files.
//!
//! ```text
//! # comment
//! [params]
//! eta = 0.5
//! [events]
//! 1630-04-30 NetWorthHelicopter 421168 "reconstructed"
//! ```

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub text: String,
    /// 1-based column of the token's first character.
    pub column: usize,
    pub quoted: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LineKind {
    Section(String),
    KeyValue {
        key: Token,
        value: Token,
    },
    /// Anything else: whitespace-separated tokens, double quotes group.
    Tokens(Vec<Token>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Line {
    /// 1-based.
    pub number: usize,
    pub kind: LineKind,
}

/// Splits `input` into meaningful lines, dropping blanks and `#` comments.
pub fn lines(input: &str) -> Result<Vec<Line>, ParseError> {
    let mut out = Vec::new();
    for (idx, raw) in input.lines().enumerate() {
        let number = idx + 1;
        let tokens = tokenize(raw).map_err(|(col, msg)| ParseError::new(number, col, msg))?;
        if tokens.is_empty() {
            continue;
        }
        let kind = classify(raw, number, tokens)?;
        out.push(Line { number, kind });
    }
    Ok(out)
}

fn classify(raw: &str, number: usize, tokens: Vec<Token>) -> Result<LineKind, ParseError> {
    let first = &tokens[0];
    if !first.quoted && first.text.starts_with('[') {
        let trimmed = raw.trim();
        let trimmed = trimmed.split('#').next().unwrap_or("").trim();
        if !trimmed.ends_with(']') {
            return Err(ParseError::new(
                number,
                first.column,
                "malformed section header",
            ));
        }
        let name = trimmed[1..trimmed.len() - 1].trim().to_string();
        if name.is_empty() {
            return Err(ParseError::new(number, first.column, "empty section name"));
        }
        return Ok(LineKind::Section(name));
    }
    if tokens.len() == 3 && tokens[1].text == "=" && !tokens[1].quoted {
        let mut it = tokens.into_iter();
        let key = it.next().unwrap();
        let _eq = it.next();
        let value = it.next().unwrap();
        return Ok(LineKind::KeyValue { key, value });
    }
    if tokens.iter().any(|t| !t.quoted && t.text == "=") {
        let col = tokens.iter().find(|t| t.text == "=").unwrap().column;
        return Err(ParseError::new(number, col, "expected `key = value`"));
    }
    Ok(LineKind::Tokens(tokens))
}

fn tokenize(raw: &str) -> Result<Vec<Token>, (usize, String)> {
    let mut tokens = Vec::new();
    let chars: Vec<char> = raw.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c == '#' {
            break;
        }
        let column = i + 1;
        if c == '"' {
            let mut text = String::new();
            i += 1;
            loop {
                match chars.get(i) {
                    None => return Err((column, "unterminated string".into())),
                    Some('"') => {
                        i += 1;
                        break;
                    }
                    Some('\\') => {
                        match chars.get(i + 1) {
                            Some('"') => text.push('"'),
                            Some('\\') => text.push('\\'),
                            Some('n') => text.push('\n'),
                            Some(other) => {
                                return Err((i + 1, format!("unknown escape `\\{other}`")))
                            }
                            None => return Err((i + 1, "dangling escape".into())),
                        }
                        i += 2;
                    }
                    Some(ch) => {
                        text.push(*ch);
                        i += 1;
                    }
                }
            }
            tokens.push(Token {
                text,
                column,
                quoted: true,
            });
        } else if c == '=' {
            tokens.push(Token {
                text: "=".into(),
                column,
                quoted: false,
            });
            i += 1;
        } else {
            let start = i;
            while i < chars.len()
                && !chars[i].is_whitespace()
                && chars[i] != '"'
                && chars[i] != '='
                && chars[i] != '#'
            {
                i += 1;
            }
            tokens.push(Token {
                text: chars[start..i].iter().collect(),
                column,
                quoted: false,
            });
        }
    }
    Ok(tokens)
}

/// Quotes a string for the token format.
pub fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            other => out.push(other),
        }
    }
    out.push('"');
    out
}

/// Parses a finite float token.
pub fn parse_f64(token: &Token, line: usize) -> Result<f64, ParseError> {
    token
        .text
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| {
            ParseError::new(
                line,
                token.column,
                format!("expected a number, got `{}`", token.text),
            )
        })
}

pub fn parse_i64(token: &Token, line: usize) -> Result<i64, ParseError> {
    let cleaned: String = token.text.chars().filter(|c| *c != '_').collect();
    cleaned.parse::<i64>().map_err(|_| {
        ParseError::new(
            line,
            token.column,
            format!("expected a whole number of ducats, got `{}`", token.text),
        )
    })
}

/// Float formatting that survives a parse round trip.
pub struct Exact(pub f64);

impl fmt::Display for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}
