use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::ModelError;
use crate::text::{self, Exact, LineKind, ParseError};

/// Structural parameters of the welfare model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Elasticity of labour supply to the tax rate, in (0, 1).
    pub eta: f64,
    /// Interest rate on public bonds.
    pub i: f64,
    /// Aversion to monetary instability.
    pub phi: f64,
    /// Aversion to the pandemic externality.
    pub eps: f64,
    /// Weight of political pressure on the actual monetization decision.
    pub chi: f64,
    /// Probability of the pandemic state.
    pub p: f64,
    /// Average risky earnings, normalized to one.
    pub theta_bar: f64,
}

impl Default for ModelParams {
    fn default() -> Self {
        ModelParams {
            eta: 0.5,
            i: 0.07,
            phi: 0.14,
            eps: 0.2,
            chi: 0.4,
            p: 1.0,
            theta_bar: 1.0,
        }
    }
}

#[derive(Debug, Error)]
pub enum ParamsError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Invalid(#[from] ModelError),
}

pub(crate) const KEYS: [&str; 7] = ["eta", "i", "phi", "eps", "chi", "p", "theta_bar"];

impl ModelParams {
    pub fn validate(&self) -> Result<(), ModelError> {
        let bad = |msg: String| Err(ModelError::InvalidParams(msg));
        let all = [
            self.eta,
            self.i,
            self.phi,
            self.eps,
            self.chi,
            self.p,
            self.theta_bar,
        ];
        if all.iter().any(|v| !v.is_finite()) {
            return bad("all parameters must be finite".into());
        }
        if !(self.eta > 0.0 && self.eta < 1.0) {
            return bad(format!("eta must lie strictly inside (0, 1), got {}", self.eta));
        }
        if self.i < 0.0 {
            return bad(format!("i must be non-negative, got {}", self.i));
        }
        if self.phi <= 0.0 {
            return bad(format!("phi must be positive, got {}", self.phi));
        }
        if self.eps < 0.0 {
            return bad(format!("eps must be non-negative, got {}", self.eps));
        }
        if !(0.0..=1.0).contains(&self.chi) {
            return bad(format!("chi must lie in [0, 1], got {}", self.chi));
        }
        if !(0.0..=1.0).contains(&self.p) {
            return bad(format!("p must lie in [0, 1], got {}", self.p));
        }
        if self.theta_bar <= 0.0 {
            return bad(format!("theta_bar must be positive, got {}", self.theta_bar));
        }
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<f64> {
        Some(match key {
            "eta" => self.eta,
            "i" => self.i,
            "phi" => self.phi,
            "eps" => self.eps,
            "chi" => self.chi,
            "p" => self.p,
            "theta_bar" => self.theta_bar,
            _ => return None,
        })
    }

    fn slot(&mut self, key: &str) -> Option<&mut f64> {
        Some(match key {
            "eta" => &mut self.eta,
            "i" => &mut self.i,
            "phi" => &mut self.phi,
            "eps" => &mut self.eps,
            "chi" => &mut self.chi,
            "p" => &mut self.p,
            "theta_bar" => &mut self.theta_bar,
            _ => return None,
        })
    }

    /// Sets one `key = value` pair, reporting errors at the given line.
    pub(crate) fn set_from_tokens(
        &mut self,
        key: &text::Token,
        value: &text::Token,
        line: usize,
    ) -> Result<(), ParseError> {
        let parsed = text::parse_f64(value, line)?;
        let slot = self.slot(&key.text).ok_or_else(|| {
            ParseError::new(
                line,
                key.column,
                format!(
                    "unknown parameter `{}` (expected one of {})",
                    key.text,
                    KEYS.join(", ")
                ),
            )
        })?;
        *slot = parsed;
        Ok(())
    }

    /// Parses a `key = value` parameter file. Keys not given keep their
    /// default values. A `[params]` header is accepted but optional.
    pub fn parse(input: &str) -> Result<Self, ParamsError> {
        let mut params = ModelParams::default();
        for line in text::lines(input)? {
            match &line.kind {
                LineKind::KeyValue { key, value } => {
                    params.set_from_tokens(key, value, line.number)?
                }
                LineKind::Section(name) if name == "params" => {}
                LineKind::Section(name) => {
                    return Err(ParseError::new(
                        line.number,
                        1,
                        format!("unexpected section `[{name}]` in a parameter file"),
                    )
                    .into())
                }
                LineKind::Tokens(tokens) => {
                    return Err(ParseError::new(
                        line.number,
                        tokens[0].column,
                        "expected `key = value`",
                    )
                    .into())
                }
            }
        }
        params.validate()?;
        Ok(params)
    }

    pub fn load(path: &Path) -> Result<Self, ParamsError> {
        let input = std::fs::read_to_string(path).map_err(|source| ParamsError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&input)
    }

    /// `key = value` lines for every parameter.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for key in KEYS {
            let _ = writeln!(out, "{key} = {}", Exact(self.get(key).unwrap()));
        }
        out
    }
}
