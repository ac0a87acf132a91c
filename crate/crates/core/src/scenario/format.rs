//! Scenario text files.
//!
//! ```text
//! name = "example"
//! [params]
//! eta = 0.5
//! [initial]
//! date = 1619-06-01
//! monetary.liabilities.MB = 500000
//! [events]
//! 1630-09-24 ReversalBailout 716652 rate:0.07 "account transfer"
//! [agio]
//! "early 1629" 1000000 0.195
//! ```

use std::fmt::Write as _;

use chrono::NaiveDate;

use super::{Event, EventKind, Scenario, ScenarioError};
use crate::ledger::{Balances, Money, Position};
use crate::market::AgioObservation;
use crate::policy::ModelParams;
use crate::text::{self, quote, Exact, LineKind, ParseError, Token};

#[derive(Clone, Copy, PartialEq)]
enum Section {
    Preamble,
    Params,
    Initial,
    Events,
    Agio,
}

fn date(token: &Token, line: usize) -> Result<NaiveDate, ParseError> {
    token.text.parse().map_err(|_| {
        ParseError::new(
            line,
            token.column,
            format!("expected a YYYY-MM-DD date, got `{}`", token.text),
        )
    })
}

fn unquoted<'a>(token: &'a Token, line: usize, what: &str) -> Result<&'a str, ParseError> {
    if token.quoted {
        Err(ParseError::new(line, token.column, format!("expected {what}, got a quoted string")))
    } else {
        Ok(&token.text)
    }
}

fn event(tokens: &[Token], line: usize) -> Result<Event, ParseError> {
    if tokens.len() < 3 {
        let col = tokens.last().map_or(1, |t| t.column + t.text.len());
        return Err(ParseError::new(
            line,
            col,
            "expected `date kind amount [rate:R] [\"note\"]`",
        ));
    }
    let when = date(&tokens[0], line)?;
    let kind: EventKind = unquoted(&tokens[1], line, "an event kind")?
        .parse()
        .map_err(|msg: String| ParseError::new(line, tokens[1].column, msg))?;
    let amount = text::parse_i64(&tokens[2], line)?;
    let mut ev = Event::new(when, kind, amount, "");
    let mut note_seen = false;
    for tok in &tokens[3..] {
        if tok.quoted && !note_seen {
            ev.note = tok.text.clone();
            note_seen = true;
        } else if let (false, Some(r)) = (tok.quoted || note_seen, tok.text.strip_prefix("rate:")) {
            if ev.rate.is_some() {
                return Err(ParseError::new(line, tok.column, "rate given twice"));
            }
            let rate_tok = Token {
                text: r.to_string(),
                column: tok.column + 5,
                quoted: false,
            };
            ev.rate = Some(text::parse_f64(&rate_tok, line)?);
        } else {
            return Err(ParseError::new(
                line,
                tok.column,
                format!("unexpected `{}` after the amount", tok.text),
            ));
        }
    }
    Ok(ev)
}

fn observation(tokens: &[Token], line: usize) -> Result<AgioObservation, ParseError> {
    if tokens.len() != 3 {
        return Err(ParseError::new(
            line,
            tokens[0].column,
            "expected `\"label\" money_stock agio`",
        ));
    }
    Ok(AgioObservation {
        label: tokens[0].text.clone(),
        money_stock: text::parse_f64(&tokens[1], line)?,
        agio: text::parse_f64(&tokens[2], line)?,
    })
}

/// Parses and validates a scenario file.
pub fn parse(input: &str) -> Result<Scenario, ScenarioError> {
    let mut section = Section::Preamble;
    let mut name = String::new();
    let mut params = ModelParams::default();
    let mut start: Option<NaiveDate> = None;
    let mut initial = Balances::default();
    let mut events = Vec::new();
    let mut observations = Vec::new();

    for line in text::lines(input)? {
        let n = line.number;
        match (&line.kind, section) {
            (LineKind::Section(s), _) => {
                section = match s.as_str() {
                    "params" => Section::Params,
                    "initial" => Section::Initial,
                    "events" => Section::Events,
                    "agio" => Section::Agio,
                    other => {
                        return Err(ParseError::new(n, 1, format!("unknown section `[{other}]`")).into())
                    }
                }
            }
            (LineKind::KeyValue { key, value }, Section::Preamble) if key.text == "name" => {
                name = value.text.clone();
            }
            (LineKind::KeyValue { key, value }, Section::Params) => {
                params.set_from_tokens(key, value, n)?;
            }
            (LineKind::KeyValue { key, value }, Section::Initial) if key.text == "date" => {
                start = Some(date(value, n)?);
            }
            (LineKind::KeyValue { key, value }, Section::Initial) => {
                let pos = Position::parse_key(&key.text).map_err(|e| {
                    ParseError::new(n, key.column, format!("`{}`: {e}", key.text))
                })?;
                initial.set(pos, Money(text::parse_i64(value, n)?));
            }
            (LineKind::Tokens(tokens), Section::Events) => events.push(event(tokens, n)?),
            (LineKind::Tokens(tokens), Section::Agio) => observations.push(observation(tokens, n)?),
            (LineKind::KeyValue { key, .. }, _) => {
                return Err(
                    ParseError::new(n, key.column, format!("unexpected key `{}` here", key.text)).into(),
                )
            }
            (LineKind::Tokens(tokens), _) => {
                return Err(ParseError::new(
                    n,
                    tokens[0].column,
                    "expected `key = value` in this section",
                )
                .into())
            }
        }
    }
    let start = start.ok_or_else(|| {
        ScenarioError::Validation("the [initial] section needs `date = YYYY-MM-DD`".into())
    })?;
    Scenario::new(name, params, start, initial, events, observations)
}

/// Renders a scenario in the text format; [`parse`] reads it back to an
/// equal value.
pub fn export(scenario: &Scenario) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "name = {}", quote(&scenario.name));
    out.push_str("\n[params]\n");
    out.push_str(&scenario.params.to_text());
    let _ = writeln!(out, "\n[initial]\ndate = {}", scenario.start);
    for (pos, amount) in scenario.initial.iter() {
        if amount != Money::ZERO {
            let _ = writeln!(out, "{} = {}", pos.key(), amount);
        }
    }
    out.push_str("\n[events]\n");
    for e in &scenario.events {
        let _ = write!(out, "{} {} {}", e.date, e.kind, e.amount);
        if let Some(r) = e.rate {
            let _ = write!(out, " rate:{}", Exact(r));
        }
        if !e.note.is_empty() {
            let _ = write!(out, " {}", quote(&e.note));
        }
        out.push('\n');
    }
    out.push_str("\n[agio]\n");
    for o in &scenario.agio_observations {
        let _ = writeln!(
            out,
            "{} {} {}",
            quote(&o.label),
            Exact(o.money_stock),
            Exact(o.agio)
        );
    }
    out
}
