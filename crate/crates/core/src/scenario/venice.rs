use chrono::NaiveDate;

use super::{Event, EventKind, Scenario};
use crate::ledger::{Balances, Money, Position};
use crate::market::AgioObservation;
use crate::policy::ModelParams;

fn d(y: i32, m: u32, day: u32) -> NaiveDate {
    NaiveDate::from_ymd_opt(y, m, day).expect("valid built-in date")
}

/// Giro bank and Treasury of Venice, June 1619 to 1638.
///
/// Documented figures: the 1619 foundation (150,000 coin reserve, 500,000
/// of balances), 700,000 in January 1620, +100,000 in May and +40,000 in
/// June 1621, 2,071,168 in April 1630, 2,666,926 in June 1630, the 716,652
/// account transfer of 24 September 1630 into 7% Mint deposits, 1.4 million
/// at the end of 1630 and 900,000 by 1638. Everything else is marked
/// `reconstructed` in its note: the 1622-1628 fill-in, the split of the
/// 1629-30 issuance before April 1630, the 550,274 of voluntary
/// conversions (the residual to 1.4 million) and the timing of the 1638
/// drawdown funded by 14% life annuities.
///
/// The opening reserve is a coin asset funded by the bank's capital, and
/// the 500,000 of balances are matched by a claim on the Mint (`TL`).
pub fn venice_1629_builtin() -> Scenario {
    use EventKind::*;

    let mut initial = Balances::default();
    initial.set(Position::FISCAL_TL, Money(500_000));
    initial.set(Position::FISCAL_TW, Money(-500_000));
    initial.set(Position::MONETARY_BR, Money(150_000));
    initial.set(Position::MONETARY_TL, Money(500_000));
    initial.set(Position::MONETARY_MB, Money(500_000));
    initial.set(Position::MONETARY_BW, Money(150_000));

    let mut events = vec![
        Event::new(d(1619, 6, 1), Observe, 10_000, "Mint repays Giro balances in coin at 10,000 a month, up to 50,000"),
        Event::new(d(1620, 1, 1), MonetaryBaseHelicopter, 200_000, "balances raised to 700,000"),
        Event::new(d(1620, 1, 1), Observe, 20_000, "monthly Mint repayments raised to 20,000"),
        Event::new(d(1621, 5, 1), MonetaryBaseHelicopter, 100_000, "balances increased by 100,000"),
        Event::new(d(1621, 6, 1), MonetaryBaseHelicopter, 40_000, "balances increased by 40,000"),
    ];
    for year in 1622..=1628 {
        events.push(Event::new(
            d(year, 1, 1),
            MonetaryBaseHelicopter,
            20_000,
            format!("reconstructed: linear growth in {year}"),
        ));
    }
    events.extend([
        Event::new(d(1624, 1, 1), SetAgioModel, 1_000_000, "agio model fitted to the 1624-1630 observations"),
        Event::new(d(1625, 8, 1), Observe, 80_000, "monthly Mint repayments raised to 80,000"),
        Event::new(d(1629, 6, 30), NetWorthHelicopter, 200_000, "reconstructed: famine subsidies"),
        Event::new(d(1629, 9, 30), NetWorthHelicopter, 200_000, "reconstructed: famine subsidies"),
        Event::new(d(1629, 12, 31), NetWorthHelicopter, 300_000, "reconstructed: famine subsidies"),
        Event::new(d(1630, 4, 30), NetWorthHelicopter, 391_168, "balances reach 2,071,168"),
        Event::new(d(1630, 6, 30), NetWorthHelicopter, 595_758, "balances reach 2,666,926"),
        Event::new(d(1630, 7, 1), Observe, 0, "committee to reduce the bank's liabilities established"),
        Event::new(d(1630, 9, 24), ReversalBailout, 716_652, "accounts of public administrations moved to the Mint")
            .with_rate(0.07),
        Event::new(d(1630, 12, 31), ReversalBailout, 550_274, "reconstructed: voluntary conversions into Mint deposits")
            .with_rate(0.07),
        Event::new(d(1638, 6, 30), ReversalBailout, 500_000, "reconstructed: drawdown funded by life annuities")
            .with_rate(0.14),
    ]);

    let agio = vec![
        AgioObservation {
            label: "1624".into(),
            money_stock: 900_000.0,
            agio: 0.20,
        },
        AgioObservation {
            label: "early 1629".into(),
            money_stock: 1_000_000.0,
            agio: 0.195,
        },
        AgioObservation {
            label: "1630".into(),
            money_stock: 2_666_926.0,
            agio: -0.10,
        },
    ];

    Scenario::new(
        "venice-1629",
        ModelParams::default(),
        d(1619, 6, 1),
        initial,
        events,
        agio,
    )
    .expect("built-in scenario is valid")
}
