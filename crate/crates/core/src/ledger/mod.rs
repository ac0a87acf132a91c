//! Double-entry accounts of a fiscal authority (the Treasury) and a monetary
//! authority (the central bank), kept side by side.
//!
//! Every change goes through a [`Transaction`] that must keep each
//! authority's balance sheet balanced on its own and must move the mirrored
//! items (Treasury deposits `TD`, direct loans `TL`) by the same amount on
//! both sheets. Marketable bonds `TB` are not mirrored: the difference
//! between the fiscal and monetary `TB` is what the private sector holds.

mod export;
mod position;
mod strategy;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use export::{balances_json, write_transaction_log};
pub use position::{Authority, Item, Money, Position, Side};
pub use strategy::Strategy;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LedgerError {
    #[error("unbalanced transaction `{label}`: {authority} assets move by {assets} but liabilities by {liabilities}")]
    UnbalancedTransaction {
        label: String,
        authority: Authority,
        assets: Money,
        liabilities: Money,
    },
    #[error("mirror violation in `{label}`: {item} moves by {fiscal} at the fiscal authority but by {monetary} at the monetary authority")]
    MirrorViolation {
        label: String,
        item: Item,
        fiscal: Money,
        monetary: Money,
    },
    #[error("negative balance in `{label}`: {position} would fall to {balance}")]
    NegativeBalance {
        label: String,
        position: Position,
        balance: Money,
    },
    #[error("illegal position: {authority} has no {item} on the {side} side")]
    IllegalPosition {
        authority: Authority,
        item: Item,
        side: Side,
    },
    #[error("strategy amount must not be negative (got {0})")]
    NegativeAmount(Money),
    #[error("consolidated net worth is {actual}, expected {expected} from posted net-worth deltas")]
    NetWorthDrift { expected: Money, actual: Money },
    #[error("replaying the transaction history does not reproduce the balances")]
    ReplayMismatch,
    #[error("arithmetic overflow in `{0}`")]
    Overflow(String),
}

impl LedgerError {
    /// Variant name, for reports.
    pub fn kind(&self) -> &'static str {
        match self {
            LedgerError::UnbalancedTransaction { .. } => "UnbalancedTransaction",
            LedgerError::MirrorViolation { .. } => "MirrorViolation",
            LedgerError::NegativeBalance { .. } => "NegativeBalance",
            LedgerError::IllegalPosition { .. } => "IllegalPosition",
            LedgerError::NegativeAmount(_) => "NegativeAmount",
            LedgerError::NetWorthDrift { .. } => "NetWorthDrift",
            LedgerError::ReplayMismatch => "ReplayMismatch",
            LedgerError::Overflow(_) => "Overflow",
        }
    }
}

/// Balances of every legal [`Position`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Balances([Money; Position::COUNT]);

impl Balances {
    pub fn get(&self, position: Position) -> Money {
        self.0[position.index()]
    }

    pub fn set(&mut self, position: Position, amount: Money) {
        self.0[position.index()] = amount;
    }

    pub fn iter(&self) -> impl Iterator<Item = (Position, Money)> + '_ {
        Position::ALL.iter().map(move |p| (*p, self.get(*p)))
    }

    pub fn total(&self, authority: Authority, side: Side) -> Money {
        self.iter()
            .filter(|(p, _)| p.authority() == authority && p.side() == side)
            .map(|(_, m)| m)
            .sum()
    }

    pub fn consolidated_net_worth(&self) -> Money {
        self.get(Position::FISCAL_TW) + self.get(Position::MONETARY_BW)
    }

    /// Bonds outstanding at the Treasury that the central bank does not hold.
    pub fn privately_held_bonds(&self) -> Money {
        self.get(Position::FISCAL_TB) - self.get(Position::MONETARY_TB)
    }

    /// Checks both identities and the sign constraints. Used on opening
    /// balances; posted transactions preserve these by construction.
    pub fn validate(&self) -> Result<(), LedgerError> {
        const LABEL: &str = "opening balances";
        for authority in Authority::ALL {
            let assets = self.total(authority, Side::Asset);
            let liabilities = self.total(authority, Side::Liability);
            if assets != liabilities {
                return Err(LedgerError::UnbalancedTransaction {
                    label: LABEL.into(),
                    authority,
                    assets,
                    liabilities,
                });
            }
        }
        for (fiscal, monetary, item) in MIRRORS {
            if self.get(fiscal) != self.get(monetary) {
                return Err(LedgerError::MirrorViolation {
                    label: LABEL.into(),
                    item,
                    fiscal: self.get(fiscal),
                    monetary: self.get(monetary),
                });
            }
        }
        for (position, balance) in self.iter() {
            if !position.is_net_worth() && balance.is_negative() {
                return Err(LedgerError::NegativeBalance {
                    label: LABEL.into(),
                    position,
                    balance,
                });
            }
        }
        Ok(())
    }

    pub fn to_map(&self) -> BTreeMap<String, i64> {
        self.iter().map(|(p, m)| (p.key(), m.get())).collect()
    }
}

const MIRRORS: [(Position, Position, Item); 2] = [
    (Position::FISCAL_TD, Position::MONETARY_TD, Item::TD),
    (Position::FISCAL_TL, Position::MONETARY_TL, Item::TL),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Posting {
    pub position: Position,
    pub delta: Money,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transaction {
    pub label: String,
    pub postings: Vec<Posting>,
}

impl Transaction {
    pub fn new(label: impl Into<String>) -> Self {
        Transaction {
            label: label.into(),
            postings: Vec::new(),
        }
    }

    pub fn post(mut self, position: Position, delta: Money) -> Self {
        self.postings.push(Posting { position, delta });
        self
    }

    fn net(&self, position: Position) -> Money {
        self.postings
            .iter()
            .filter(|p| p.position == position)
            .map(|p| p.delta)
            .sum()
    }

    /// Per-authority balance and the TD/TL mirror rule.
    pub fn validate(&self) -> Result<(), LedgerError> {
        for authority in Authority::ALL {
            let side_total = |side: Side| -> Money {
                self.postings
                    .iter()
                    .filter(|p| p.position.authority() == authority && p.position.side() == side)
                    .map(|p| p.delta)
                    .sum()
            };
            let assets = side_total(Side::Asset);
            let liabilities = side_total(Side::Liability);
            if assets != liabilities {
                return Err(LedgerError::UnbalancedTransaction {
                    label: self.label.clone(),
                    authority,
                    assets,
                    liabilities,
                });
            }
        }
        for (fiscal, monetary, item) in MIRRORS {
            let (f, m) = (self.net(fiscal), self.net(monetary));
            if f != m {
                return Err(LedgerError::MirrorViolation {
                    label: self.label.clone(),
                    item,
                    fiscal: f,
                    monetary: m,
                });
            }
        }
        Ok(())
    }

    /// Sum of the deltas posted to TW and BW.
    pub fn net_worth_delta(&self) -> Money {
        self.postings
            .iter()
            .filter(|p| p.position.is_net_worth())
            .map(|p| p.delta)
            .sum()
    }

    fn apply_to(&self, balances: &mut Balances) -> Result<(), LedgerError> {
        self.validate()?;
        let mut next = *balances;
        for posting in &self.postings {
            let updated = next
                .get(posting.position)
                .checked_add(posting.delta)
                .ok_or_else(|| LedgerError::Overflow(self.label.clone()))?;
            next.set(posting.position, updated);
        }
        for posting in &self.postings {
            let balance = next.get(posting.position);
            if !posting.position.is_net_worth() && balance.is_negative() {
                return Err(LedgerError::NegativeBalance {
                    label: self.label.clone(),
                    position: posting.position,
                    balance,
                });
            }
        }
        *balances = next;
        Ok(())
    }
}

/// The paired balance sheets plus the append-only log of what was posted.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PublicSector {
    opening: Balances,
    balances: Balances,
    history: Vec<Transaction>,
}

impl PublicSector {
    /// Both balance sheets empty.
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_opening(opening: Balances) -> Result<Self, LedgerError> {
        opening.validate()?;
        Ok(PublicSector {
            opening,
            balances: opening,
            history: Vec::new(),
        })
    }

    /// Rebuilds a sector by re-posting `history` on top of `opening`.
    pub fn replay<'a>(
        opening: Balances,
        history: impl IntoIterator<Item = &'a Transaction>,
    ) -> Result<Self, LedgerError> {
        let mut sector = Self::with_opening(opening)?;
        for tx in history {
            sector.post(tx.clone())?;
        }
        Ok(sector)
    }

    pub fn balances(&self) -> &Balances {
        &self.balances
    }

    pub fn opening(&self) -> &Balances {
        &self.opening
    }

    pub fn balance(&self, position: Position) -> Money {
        self.balances.get(position)
    }

    pub fn history(&self) -> &[Transaction] {
        &self.history
    }

    pub fn consolidated_net_worth(&self) -> Money {
        self.balances.consolidated_net_worth()
    }

    /// Posts a single transaction. On error nothing changes.
    pub fn post(&mut self, tx: Transaction) -> Result<(), LedgerError> {
        tx.apply_to(&mut self.balances)?;
        self.history.push(tx);
        Ok(())
    }

    /// Posts a batch atomically: either every transaction applies, in order,
    /// or the sector is left untouched. Intermediate states are checked.
    pub fn post_all(&mut self, txs: Vec<Transaction>) -> Result<(), LedgerError> {
        let mut scratch = self.balances;
        for tx in &txs {
            tx.apply_to(&mut scratch)?;
        }
        self.balances = scratch;
        self.history.extend(txs);
        Ok(())
    }

    pub fn apply(&mut self, strategy: Strategy, amount: Money) -> Result<(), LedgerError> {
        self.post_all(strategy.transactions(amount)?)
    }

    /// Bonds sold to the public, proceeds spent. Only the Treasury moves.
    pub fn classical_fiscal_expansion(&mut self, amount: Money) -> Result<(), LedgerError> {
        self.apply(Strategy::ClassicalExpansion, amount)
    }

    pub fn monetary_base_helicopter(&mut self, amount: Money) -> Result<(), LedgerError> {
        self.apply(Strategy::MonetaryBaseHelicopter, amount)
    }

    pub fn net_worth_helicopter(&mut self, amount: Money) -> Result<(), LedgerError> {
        self.apply(Strategy::NetWorthHelicopter, amount)
    }

    pub fn reversal_bailout(&mut self, amount: Money) -> Result<(), LedgerError> {
        self.apply(Strategy::ReversalBailout, amount)
    }

    /// Re-checks every invariant against the current balances and against a
    /// fresh replay of the history.
    pub fn check_invariants(&self) -> Result<(), LedgerError> {
        self.balances.validate()?;
        let posted: Money = self.history.iter().map(Transaction::net_worth_delta).sum();
        let expected = self.opening.consolidated_net_worth() + posted;
        if self.consolidated_net_worth() != expected {
            return Err(LedgerError::NetWorthDrift {
                expected,
                actual: self.consolidated_net_worth(),
            });
        }
        let rebuilt = PublicSector::replay(self.opening, &self.history)?;
        if rebuilt.balances != self.balances {
            return Err(LedgerError::ReplayMismatch);
        }
        Ok(())
    }
}
