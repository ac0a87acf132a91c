//! Log-linear map from the stock of bank money to its agio over coin:
//!
//! ```text
//! agio(M) = agio_ref - kappa * ln(M / m_ref)
//! ```
//!
//! This is a calibration overlay with no price-formation mechanism behind
//! it; it is monotone and fits two observations exactly.

use std::io::Read;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MarketError {
    #[error("degenerate fit: {0}")]
    DegenerateFit(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("observation CSV: {0}")]
    Parse(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgioObservation {
    pub label: String,
    /// Ducats of bank money outstanding.
    pub money_stock: f64,
    /// Premium of bank money over coin as a signed fraction.
    pub agio: f64,
}

impl AgioObservation {
    pub fn new(label: impl Into<String>, money_stock: f64, agio: f64) -> Result<Self, MarketError> {
        let obs = AgioObservation {
            label: label.into(),
            money_stock,
            agio,
        };
        obs.validate()?;
        Ok(obs)
    }

    pub fn validate(&self) -> Result<(), MarketError> {
        if !(self.money_stock > 0.0 && self.money_stock.is_finite()) {
            return Err(MarketError::Domain(format!(
                "observation `{}`: money stock must be positive, got {}",
                self.label, self.money_stock
            )));
        }
        if !(self.agio > -1.0 && self.agio.is_finite()) {
            return Err(MarketError::Domain(format!(
                "observation `{}`: agio must exceed -1, got {}",
                self.label, self.agio
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AgioModel {
    pub kappa: f64,
    pub m_ref: f64,
    pub agio_ref: f64,
}

impl AgioModel {
    pub fn new(kappa: f64, m_ref: f64, agio_ref: f64) -> Result<Self, MarketError> {
        if !(m_ref > 0.0 && m_ref.is_finite()) || !kappa.is_finite() || !agio_ref.is_finite() {
            return Err(MarketError::Domain(format!(
                "invalid agio model: kappa={kappa}, m_ref={m_ref}, agio_ref={agio_ref}"
            )));
        }
        Ok(AgioModel {
            kappa,
            m_ref,
            agio_ref,
        })
    }

    pub fn predict(&self, money_stock: f64) -> Result<f64, MarketError> {
        if money_stock.is_nan() || money_stock <= 0.0 {
            return Err(MarketError::Domain(format!(
                "money stock must be positive, got {money_stock}"
            )));
        }
        Ok(self.agio_ref - self.kappa * (money_stock / self.m_ref).ln())
    }

    pub fn residuals(&self, observations: &[AgioObservation]) -> Result<Vec<f64>, MarketError> {
        observations
            .iter()
            .map(|o| Ok(o.agio - self.predict(o.money_stock)?))
            .collect()
    }
}

/// Least-squares fit referenced at the smallest observed money stock.
pub fn fit(observations: &[AgioObservation]) -> Result<AgioModel, MarketError> {
    let m_ref = observations
        .iter()
        .map(|o| o.money_stock)
        .fold(f64::INFINITY, f64::min);
    fit_with_reference(observations, m_ref)
}

/// Least-squares fit of `agio = agio_ref - kappa * ln(M/m_ref)` with a
/// caller-chosen reference stock. Exact for two observations.
pub fn fit_with_reference(
    observations: &[AgioObservation],
    m_ref: f64,
) -> Result<AgioModel, MarketError> {
    if observations.len() < 2 {
        return Err(MarketError::DegenerateFit(format!(
            "need at least two observations, got {}",
            observations.len()
        )));
    }
    for o in observations {
        o.validate()?;
    }
    if !(m_ref > 0.0 && m_ref.is_finite()) {
        return Err(MarketError::Domain(format!(
            "reference money stock must be positive, got {m_ref}"
        )));
    }
    let n = observations.len() as f64;
    let xs: Vec<f64> = observations
        .iter()
        .map(|o| (o.money_stock / m_ref).ln())
        .collect();
    let x_mean = xs.iter().sum::<f64>() / n;
    let y_mean = observations.iter().map(|o| o.agio).sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - x_mean).powi(2)).sum();
    if sxx == 0.0 {
        return Err(MarketError::DegenerateFit(
            "all observations share the same money stock".into(),
        ));
    }
    let sxy: f64 = xs
        .iter()
        .zip(observations)
        .map(|(x, o)| (x - x_mean) * (o.agio - y_mean))
        .sum();
    let slope = sxy / sxx;
    AgioModel::new(-slope, m_ref, y_mean - slope * x_mean)
}

/// Value of bank money in units of coin at par: `par * (1 + agio)`.
pub fn silver_value(agio: f64, par: f64) -> Result<f64, MarketError> {
    if agio.is_nan() || agio <= -1.0 || par.is_nan() || par <= 0.0 {
        return Err(MarketError::Domain(format!(
            "need agio > -1 and par > 0, got agio={agio}, par={par}"
        )));
    }
    Ok(par * (1.0 + agio))
}

/// Reads a `label,money_stock,agio` CSV.
pub fn read_observations(reader: impl Read) -> Result<Vec<AgioObservation>, MarketError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| MarketError::Parse(e.to_string()))?
        .clone();
    if headers.iter().collect::<Vec<_>>() != ["label", "money_stock", "agio"] {
        return Err(MarketError::Parse(format!(
            "expected header `label,money_stock,agio`, got `{}`",
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut out = Vec::new();
    for row in rdr.deserialize::<AgioObservation>() {
        let obs = row.map_err(|e| MarketError::Parse(e.to_string()))?;
        obs.validate()?;
        out.push(obs);
    }
    Ok(out)
}

pub fn load_observations(path: &Path) -> Result<Vec<AgioObservation>, MarketError> {
    let file = std::fs::File::open(path).map_err(|source| MarketError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    read_observations(file)
}
