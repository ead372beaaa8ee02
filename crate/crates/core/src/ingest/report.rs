use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::records::FieldRecord;
use crate::classify::{classify, detect_state, screen_ipad, Ipad};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Screen,
    Classify,
    Stats,
}

/// A table with a fixed header; rendered as CSV or serialized.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Report {
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for r in &self.rows {
            w.write_record(r).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
    }

    /// Values of one column.
    pub fn column(&self, name: &str) -> Vec<&str> {
        let k = self.header.iter().position(|h| h == name).expect("known column");
        self.rows.iter().map(|r| r[k].as_str()).collect()
    }
}

const RECORD_COLUMNS: [&str; 7] = ["disc", "ipad", "screen", "state", "tkt", "verdict", "reason"];

fn record_row(r: &FieldRecord, mode: Mode) -> Vec<String> {
    let (screen, state) = match screen_ipad(&r.ipad) {
        Ok(s) => {
            let state = s
                .state()
                .cloned()
                .unwrap_or_else(|| detect_state(r.ipad.extensions()));
            (s.to_string(), state.label().unwrap_or_default())
        }
        Err(e) => (format!("error: {e}"), String::new()),
    };
    let tkt = r
        .tkt
        .map(|k| k.type_name().map_or_else(|| k.to_string(), str::to_string))
        .unwrap_or_default();
    let (verdict, reason) = match (mode, &r.tkt) {
        (Mode::Classify, Some(k)) => match classify(k, r.disc.signature(), r.ati2.as_ref()) {
            Ok(v) => {
                let mut reason = v.reason.clone();
                if v.conjectural {
                    reason.push_str("; conjectural for n>=5");
                }
                (v.length.to_string(), reason)
            }
            Err(e) => (String::new(), e.to_string()),
        },
        _ => (String::new(), String::new()),
    };
    vec![r.disc.to_string(), r.ipad.to_string(), screen, state, tkt, verdict, reason]
}

/// Rows sorted by `|disc|`; stats mode groups by IPAD and sorts groups by
/// their least `|disc|`.
pub fn report(records: &[FieldRecord], mode: Mode) -> Report {
    match mode {
        Mode::Screen | Mode::Classify => {
            let mut sorted: Vec<&FieldRecord> = records.iter().collect();
            sorted.sort_by_key(|r| (r.disc.get().unsigned_abs(), r.disc.get()));
            Report {
                header: RECORD_COLUMNS.iter().map(|s| s.to_string()).collect(),
                rows: sorted.into_iter().map(|r| record_row(r, mode)).collect(),
            }
        }
        Mode::Stats => {
            let mut groups: BTreeMap<&Ipad, (usize, u64)> = BTreeMap::new();
            for r in records {
                let e = groups.entry(&r.ipad).or_insert((0, u64::MAX));
                e.0 += 1;
                e.1 = e.1.min(r.disc.get().unsigned_abs());
            }
            let mut rows: Vec<(u64, Vec<String>)> = groups
                .into_iter()
                .map(|(ipad, (count, min))| {
                    let screen = screen_ipad(ipad).map_or_else(|e| format!("error: {e}"), |s| s.to_string());
                    (min, vec![ipad.to_string(), count.to_string(), min.to_string(), screen])
                })
                .collect();
            rows.sort();
            Report {
                header: ["ipad", "count", "min_disc", "screen"].iter().map(|s| s.to_string()).collect(),
                rows: rows.into_iter().map(|(_, r)| r).collect(),
            }
        }
    }
}
