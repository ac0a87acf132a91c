use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{LedgerError, Money, Position, Transaction};

/// Composite operations on the public sector. Each one expands into a short
/// sequence of balanced transactions that are posted atomically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Strategy {
    /// Bonds sold to the public for bank money, which the Treasury then
    /// spends. Net: fiscal `TB +x`, `TW -x`; monetary side unchanged.
    ClassicalExpansion,
    /// The central bank buys newly issued bonds and the Treasury spends the
    /// resulting deposit. Net: `TW -x`, fiscal and monetary `TB +x`, `MB +x`.
    MonetaryBaseHelicopter,
    /// The central bank credits private accounts with nothing on the asset
    /// side. Net: `MB +x`, `BW -x`; the Treasury is untouched.
    ///
    /// In principle the new money is matched by direct loans to the
    /// Treasury (`TL +x` on both sheets), but those loans never formally
    /// exist, so only the end state with the bank's loss is posted.
    NetWorthHelicopter,
    /// The Treasury borrows bank money from the public with new bonds and
    /// hands it to the bank for nothing, retiring that money. Net: fiscal
    /// `TB +x`, `TW -x`; monetary `MB -x`, `BW +x`.
    ReversalBailout,
}

impl Strategy {
    pub const ALL: [Strategy; 4] = [
        Strategy::ClassicalExpansion,
        Strategy::MonetaryBaseHelicopter,
        Strategy::NetWorthHelicopter,
        Strategy::ReversalBailout,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::ClassicalExpansion => "ClassicalExpansion",
            Strategy::MonetaryBaseHelicopter => "MonetaryBaseHelicopter",
            Strategy::NetWorthHelicopter => "NetWorthHelicopter",
            Strategy::ReversalBailout => "ReversalBailout",
        }
    }

    /// Expands the strategy into its constituent transactions. A zero
    /// amount yields no transactions.
    pub fn transactions(self, x: Money) -> Result<Vec<Transaction>, LedgerError> {
        if x.is_negative() {
            return Err(LedgerError::NegativeAmount(x));
        }
        if x == Money::ZERO {
            return Ok(Vec::new());
        }
        let txs = match self {
            Strategy::ClassicalExpansion => vec![
                Transaction::new("classical expansion: bond sale to the public")
                    .post(Position::FISCAL_TD, x)
                    .post(Position::FISCAL_TB, x)
                    .post(Position::MONETARY_MB, -x)
                    .post(Position::MONETARY_TD, x),
                Transaction::new("classical expansion: Treasury spending")
                    .post(Position::FISCAL_TD, -x)
                    .post(Position::FISCAL_TW, -x)
                    .post(Position::MONETARY_TD, -x)
                    .post(Position::MONETARY_MB, x),
            ],
            Strategy::MonetaryBaseHelicopter => vec![
                Transaction::new("monetary-base helicopter: bond purchase by the bank")
                    .post(Position::FISCAL_TD, x)
                    .post(Position::FISCAL_TB, x)
                    .post(Position::MONETARY_TB, x)
                    .post(Position::MONETARY_TD, x),
                Transaction::new("monetary-base helicopter: Treasury spending")
                    .post(Position::FISCAL_TD, -x)
                    .post(Position::FISCAL_TW, -x)
                    .post(Position::MONETARY_TD, -x)
                    .post(Position::MONETARY_MB, x),
            ],
            Strategy::NetWorthHelicopter => vec![Transaction::new(
                "net-worth helicopter: unbacked credit to private accounts",
            )
            .post(Position::MONETARY_MB, x)
            .post(Position::MONETARY_BW, -x)],
            Strategy::ReversalBailout => vec![
                Transaction::new("reversal: bond issue paid in bank money")
                    .post(Position::FISCAL_TD, x)
                    .post(Position::FISCAL_TB, x)
                    .post(Position::MONETARY_MB, -x)
                    .post(Position::MONETARY_TD, x),
                Transaction::new("reversal: gratuitous transfer to the bank")
                    .post(Position::FISCAL_TD, -x)
                    .post(Position::FISCAL_TW, -x)
                    .post(Position::MONETARY_TD, -x)
                    .post(Position::MONETARY_BW, x),
            ],
        };
        Ok(txs)
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Strategy::ALL
            .into_iter()
            .find(|st| st.name() == s)
            .ok_or_else(|| format!("unknown strategy `{s}`"))
    }
}
