use std::io::Write;

use serde_json::{Map, Value};

use super::{Balances, PublicSector};

/// Writes one CSV row per posting: `seq,label,authority,item,side,delta`.
/// `seq` numbers transactions from 1.
pub fn write_transaction_log<W: Write>(sector: &PublicSector, out: W) -> csv::Result<()> {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    writer.write_record(["seq", "label", "authority", "item", "side", "delta"])?;
    for (seq, tx) in sector.history().iter().enumerate() {
        for posting in &tx.postings {
            let p = posting.position;
            writer.write_record([
                (seq + 1).to_string(),
                tx.label.clone(),
                p.authority().to_string(),
                p.item().to_string(),
                p.side().to_string(),
                posting.delta.to_string(),
            ])?;
        }
    }
    writer.flush()?;
    Ok(())
}

/// Balance snapshot keyed `fiscal.assets.TD` and so on.
pub fn balances_json(balances: &Balances) -> Value {
    let map: Map<String, Value> = balances
        .iter()
        .map(|(p, m)| (p.key(), Value::from(m.get())))
        .collect();
    Value::Object(map)
}
