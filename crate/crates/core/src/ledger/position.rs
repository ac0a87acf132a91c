use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::LedgerError;

/// Whole ducats. Sub-ducat amounts are not representable.
#[derive(
    Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct Money(pub i64);

impl Money {
    pub const ZERO: Money = Money(0);

    pub const fn ducats(amount: i64) -> Self {
        Money(amount)
    }

    pub const fn get(self) -> i64 {
        self.0
    }

    pub fn is_negative(self) -> bool {
        self.0 < 0
    }

    pub fn checked_add(self, rhs: Money) -> Option<Money> {
        self.0.checked_add(rhs.0).map(Money)
    }
}

impl fmt::Display for Money {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl Add for Money {
    type Output = Money;
    fn add(self, rhs: Money) -> Money {
        Money(self.0 + rhs.0)
    }
}

impl AddAssign for Money {
    fn add_assign(&mut self, rhs: Money) {
        self.0 += rhs.0;
    }
}

impl Sub for Money {
    type Output = Money;
    fn sub(self, rhs: Money) -> Money {
        Money(self.0 - rhs.0)
    }
}

impl SubAssign for Money {
    fn sub_assign(&mut self, rhs: Money) {
        self.0 -= rhs.0;
    }
}

impl Neg for Money {
    type Output = Money;
    fn neg(self) -> Money {
        Money(-self.0)
    }
}

impl Sum for Money {
    fn sum<I: Iterator<Item = Money>>(iter: I) -> Money {
        iter.fold(Money::ZERO, Add::add)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Authority {
    Fiscal,
    Monetary,
}

impl Authority {
    pub const ALL: [Authority; 2] = [Authority::Fiscal, Authority::Monetary];

    pub fn as_str(self) -> &'static str {
        match self {
            Authority::Fiscal => "fiscal",
            Authority::Monetary => "monetary",
        }
    }
}

impl fmt::Display for Authority {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Balance-sheet items of the stylized public sector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Item {
    /// Treasury deposits with the central bank.
    TD,
    /// Other Treasury assets.
    TA,
    /// Treasury net worth.
    TW,
    /// Marketable government bonds.
    TB,
    /// Direct central-bank loans to the Treasury.
    TL,
    /// Central-bank reserves (coin, bullion).
    BR,
    /// Central-bank net worth.
    BW,
    /// Monetary base: private deposits with the central bank.
    MB,
}

impl Item {
    pub fn as_str(self) -> &'static str {
        match self {
            Item::TD => "TD",
            Item::TA => "TA",
            Item::TW => "TW",
            Item::TB => "TB",
            Item::TL => "TL",
            Item::BR => "BR",
            Item::BW => "BW",
            Item::MB => "MB",
        }
    }

    pub fn is_net_worth(self) -> bool {
        matches!(self, Item::TW | Item::BW)
    }
}

impl fmt::Display for Item {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Item {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "TD" => Item::TD,
            "TA" => Item::TA,
            "TW" => Item::TW,
            "TB" => Item::TB,
            "TL" => Item::TL,
            "BR" => Item::BR,
            "BW" => Item::BW,
            "MB" => Item::MB,
            other => return Err(format!("unknown balance-sheet item `{other}`")),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Side {
    Asset,
    Liability,
}

impl Side {
    pub fn as_str(self) -> &'static str {
        match self {
            Side::Asset => "asset",
            Side::Liability => "liability",
        }
    }

    pub fn plural(self) -> &'static str {
        match self {
            Side::Asset => "assets",
            Side::Liability => "liabilities",
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One cell of the two-authority balance sheet. Only the eleven cells of the
/// stylized public sector can be constructed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Position {
    authority: Authority,
    item: Item,
    side: Side,
}

macro_rules! cells {
    ($($name:ident = ($auth:ident, $item:ident, $side:ident);)*) => {
        impl Position {
            $(pub const $name: Position = Position {
                authority: Authority::$auth,
                item: Item::$item,
                side: Side::$side,
            };)*

            /// Every legal cell, in balance-sheet order.
            pub const ALL: [Position; Position::COUNT] = [$(Position::$name),*];
        }
    };
}

cells! {
    FISCAL_TD = (Fiscal, TD, Asset);
    FISCAL_TA = (Fiscal, TA, Asset);
    FISCAL_TW = (Fiscal, TW, Liability);
    FISCAL_TL = (Fiscal, TL, Liability);
    FISCAL_TB = (Fiscal, TB, Liability);
    MONETARY_TB = (Monetary, TB, Asset);
    MONETARY_BR = (Monetary, BR, Asset);
    MONETARY_TL = (Monetary, TL, Asset);
    MONETARY_BW = (Monetary, BW, Liability);
    MONETARY_TD = (Monetary, TD, Liability);
    MONETARY_MB = (Monetary, MB, Liability);
}

impl Position {
    pub const COUNT: usize = 11;

    pub fn new(authority: Authority, item: Item, side: Side) -> Result<Self, LedgerError> {
        let candidate = Position {
            authority,
            item,
            side,
        };
        if Position::ALL.contains(&candidate) {
            Ok(candidate)
        } else {
            Err(LedgerError::IllegalPosition {
                authority,
                item,
                side,
            })
        }
    }

    pub fn authority(&self) -> Authority {
        self.authority
    }

    pub fn item(&self) -> Item {
        self.item
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn is_net_worth(&self) -> bool {
        self.item.is_net_worth()
    }

    pub(crate) fn index(&self) -> usize {
        Position::ALL
            .iter()
            .position(|p| p == self)
            .expect("positions are validated on construction")
    }

    /// Snapshot key such as `fiscal.assets.TD`.
    pub fn key(&self) -> String {
        format!(
            "{}.{}.{}",
            self.authority.as_str(),
            self.side.plural(),
            self.item
        )
    }

    pub fn parse_key(key: &str) -> Result<Self, String> {
        let mut parts = key.split('.');
        let (Some(auth), Some(side), Some(item), None) =
            (parts.next(), parts.next(), parts.next(), parts.next())
        else {
            return Err(format!(
                "expected `<authority>.<assets|liabilities>.<ITEM>`, got `{key}`"
            ));
        };
        let authority = match auth {
            "fiscal" => Authority::Fiscal,
            "monetary" => Authority::Monetary,
            other => return Err(format!("unknown authority `{other}`")),
        };
        let side = match side {
            "assets" => Side::Asset,
            "liabilities" => Side::Liability,
            other => return Err(format!("unknown side `{other}`")),
        };
        let item: Item = item.parse()?;
        Position::new(authority, item, side).map_err(|e| e.to_string())
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.key())
    }
}

impl Serialize for Position {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.key())
    }
}

impl<'de> Deserialize<'de> for Position {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let key = String::deserialize(deserializer)?;
        Position::parse_key(&key).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exactly_the_stylized_cells_are_legal() {
        let items = [
            Item::TD,
            Item::TA,
            Item::TW,
            Item::TB,
            Item::TL,
            Item::BR,
            Item::BW,
            Item::MB,
        ];
        let mut legal = 0;
        for authority in Authority::ALL {
            for item in items {
                for side in [Side::Asset, Side::Liability] {
                    if Position::new(authority, item, side).is_ok() {
                        legal += 1;
                    }
                }
            }
        }
        assert_eq!(legal, Position::COUNT);
        assert!(Position::new(Authority::Fiscal, Item::MB, Side::Liability).is_err());
        assert!(Position::new(Authority::Monetary, Item::TA, Side::Asset).is_err());
        assert!(Position::new(Authority::Fiscal, Item::TD, Side::Liability).is_err());
    }

    #[test]
    fn keys_round_trip() {
        for p in Position::ALL {
            assert_eq!(Position::parse_key(&p.key()).unwrap(), p);
        }
        assert_eq!(Position::FISCAL_TD.key(), "fiscal.assets.TD");
        assert_eq!(Position::MONETARY_MB.key(), "monetary.liabilities.MB");
        assert!(Position::parse_key("fiscal.assets.MB").is_err());
        assert!(Position::parse_key("fiscal.TD").is_err());
    }
}
