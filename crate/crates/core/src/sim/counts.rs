use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantum::GlobalObservable;

/// Coincidence counts for one measurement setting.
///
/// `counts[i]` belongs to the outcome whose bits, site 1 most significant,
/// spell `i`; bit 0 at a site is the +1 eigenvector of that site's observable.
#[derive(Debug, Clone, PartialEq)]
pub struct CountsTable {
    pub setting: GlobalObservable,
    pub counts: Vec<u64>,
    pub duration_s: f64,
    pub rate_hz: f64,
}

impl CountsTable {
    pub fn new(setting: GlobalObservable, counts: Vec<u64>, duration_s: f64, rate_hz: f64) -> Result<Self> {
        let dim = 1usize << setting.n_qubits();
        if counts.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, actual: counts.len() });
        }
        Ok(Self { setting, counts, duration_s, rate_hz })
    }

    pub fn n_qubits(&self) -> usize {
        self.setting.n_qubits()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// `"0110"`-style label of outcome `index`, site 1 first.
    pub fn outcome_bits(&self, index: usize) -> String {
        let n = self.n_qubits();
        (0..n).map(|k| if index >> (n - 1 - k) & 1 == 0 { '0' } else { '1' }).collect()
    }

    /// Sum of counts over outcomes where `select(index)` holds.
    pub fn sum_where(&self, select: impl Fn(usize) -> bool) -> u64 {
        self.counts.iter().enumerate().filter(|(i, _)| select(*i)).map(|(_, c)| c).sum()
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct CsvRow {
    setting: String,
    outcome_bits: String,
    count: u64,
    duration_s: f64,
    rate_hz: f64,
}

fn parse_bits(bits: &str, n: usize) -> Result<usize> {
    if bits.len() != n || !bits.chars().all(|c| c == '0' || c == '1') {
        return Err(Error::Parse(format!("outcome_bits {bits:?} is not a {n}-character 0/1 string")));
    }
    Ok(usize::from_str_radix(bits, 2).expect("validated binary string"))
}

/// Writes tables one row per outcome, in table order then outcome order.
pub fn write_csv<W: Write>(tables: &[CountsTable], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for t in tables {
        for (i, &count) in t.counts.iter().enumerate() {
            w.serialize(CsvRow {
                setting: t.setting.to_string(),
                outcome_bits: t.outcome_bits(i),
                count,
                duration_s: t.duration_s,
                rate_hz: t.rate_hz,
            })?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Reads tables back, grouped by setting in order of first appearance.
/// Every setting must list each outcome exactly once.
pub fn read_csv<R: Read>(reader: R) -> Result<Vec<CountsTable>> {
    let mut r = csv::Reader::from_reader(reader);
    let mut tables: Vec<(CountsTable, Vec<bool>)> = Vec::new();
    for row in r.deserialize() {
        let row: CsvRow = row?;
        let setting: GlobalObservable = row.setting.parse()?;
        let pos = match tables.iter().position(|(t, _)| t.setting == setting) {
            Some(p) => p,
            None => {
                let dim = 1usize << setting.n_qubits();
                let t = CountsTable::new(setting, vec![0; dim], row.duration_s, row.rate_hz)?;
                tables.push((t, vec![false; dim]));
                tables.len() - 1
            }
        };
        let (table, seen) = &mut tables[pos];
        let idx = parse_bits(&row.outcome_bits, table.n_qubits())?;
        if seen[idx] {
            return Err(Error::Parse(format!("outcome {} listed twice for [{}]", row.outcome_bits, table.setting)));
        }
        if row.duration_s != table.duration_s || row.rate_hz != table.rate_hz {
            return Err(Error::Parse(format!("inconsistent duration or rate for [{}]", table.setting)));
        }
        seen[idx] = true;
        table.counts[idx] = row.count;
    }
    tables
        .into_iter()
        .map(|(t, seen)| {
            if seen.iter().all(|&s| s) {
                Ok(t)
            } else {
                Err(Error::Parse(format!("missing outcomes for [{}]", t.setting)))
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> CountsTable {
        let g: GlobalObservable = "X P(-0.7853981633974483) Z".parse().unwrap();
        CountsTable::new(g, (0..8).map(|i| i * 3).collect(), 180.0, 6.8).unwrap()
    }

    #[test]
    fn bits_are_site_one_first() {
        let t = table();
        assert_eq!(t.outcome_bits(1), "001");
        assert_eq!(t.outcome_bits(4), "100");
        assert_eq!(t.total(), 84);
    }

    #[test]
    fn csv_round_trip() {
        let t = table();
        let mut buf = Vec::new();
        write_csv(std::slice::from_ref(&t), &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("setting,outcome_bits,count,duration_s,rate_hz\n"));
        assert_eq!(read_csv(buf.as_slice()).unwrap(), vec![t]);
    }

    #[test]
    fn csv_rejects_incomplete_tables() {
        let mut buf = Vec::new();
        write_csv(&[table()], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let cut: String = text.lines().take(5).map(|l| format!("{l}\n")).collect();
        assert!(read_csv(cut.as_bytes()).is_err());
        let doubled = text.replace(",001,", ",000,");
        assert!(read_csv(doubled.as_bytes()).is_err());
    }

    #[test]
    fn wrong_length_rejected() {
        assert!(CountsTable::new(GlobalObservable::paulis("XX").unwrap(), vec![1, 2, 3], 1.0, 1.0).is_err());
    }
}
