//! CSV and JSON output of scans.

use serde::Serialize;

use super::scan::SpectrumScan;
use super::spectrum::Parity;

fn parity_field(p: Parity) -> &'static str {
    match p {
        Parity::Even => "1",
        Parity::Odd => "-1",
        Parity::Undefined => "",
    }
}

/// `param,level,energy,parity`, one row per grid point and level. Parity is
/// `1`, `-1`, or empty when undefined.
pub fn spectrum_csv(scan: &SpectrumScan) -> String {
    let mut out = String::from("param,level,energy,parity\n");
    for (m, x) in scan.points.iter().enumerate() {
        for (k, e) in scan.energies[m].iter().enumerate() {
            let p = scan.parities[m].get(k).copied().unwrap_or(Parity::Undefined);
            out.push_str(&format!("{x},{k},{e},{}\n", parity_field(p)));
        }
    }
    out
}

#[derive(Serialize)]
struct CrossingRecord {
    parameter: &'static str,
    value: f64,
    levels: [usize; 2],
    gap: f64,
    classification: &'static str,
}

pub fn crossings_json(scan: &SpectrumScan) -> String {
    let recs: Vec<CrossingRecord> = scan
        .crossings
        .iter()
        .map(|c| CrossingRecord {
            parameter: scan.axis.name(),
            value: c.value,
            levels: [c.levels.0, c.levels.1],
            gap: c.gap,
            classification: c.classification.name(),
        })
        .collect();
    let mut s = serde_json::to_string_pretty(&recs).expect("crossings always serialize");
    s.push('\n');
    s
}
