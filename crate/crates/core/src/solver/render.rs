//! JSON and LaTeX serialization of coefficient tables.
//!
//! JSON layout:
//! `{"N": n, "A": [{"i": i, "j": j, "poly": [...]}, ...], "B": ..., "C": ..., "D": ...}`
//! where `poly` uses the term-list encoding of [`LaurentPoly`]. Every index of
//! the triangle i + j ≤ N is listed, zero entries as empty term lists.

use serde::{Deserialize, Serialize};

use crate::ring::LaurentPoly;

use super::{CoeffTables, Element};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    Json,
    Latex,
}

#[derive(Serialize, Deserialize)]
struct EntryRecord {
    i: u32,
    j: u32,
    poly: LaurentPoly,
}

#[derive(Serialize, Deserialize)]
struct TablesRecord {
    #[serde(rename = "N")]
    n: u32,
    #[serde(rename = "A")]
    a: Vec<EntryRecord>,
    #[serde(rename = "B")]
    b: Vec<EntryRecord>,
    #[serde(rename = "C")]
    c: Vec<EntryRecord>,
    #[serde(rename = "D")]
    d: Vec<EntryRecord>,
}

fn records(t: &CoeffTables, e: Element) -> Vec<EntryRecord> {
    t.entries(e)
        .map(|(i, j, poly)| EntryRecord { i, j, poly: poly.clone() })
        .collect()
}

pub fn tables_to_json(t: &CoeffTables) -> String {
    let rec = TablesRecord {
        n: t.n(),
        a: records(t, Element::A),
        b: records(t, Element::B),
        c: records(t, Element::C),
        d: records(t, Element::D),
    };
    let mut s = serde_json::to_string_pretty(&rec).expect("tables always serialize");
    s.push('\n');
    s
}

pub fn tables_from_json(s: &str) -> Result<CoeffTables, serde_json::Error> {
    let rec: TablesRecord = serde_json::from_str(s)?;
    let mut t = CoeffTables::zeros(rec.n);
    for (e, list) in [(Element::A, rec.a), (Element::B, rec.b), (Element::C, rec.c), (Element::D, rec.d)] {
        for r in list {
            if r.i + r.j > rec.n {
                return Err(serde::de::Error::custom(format!(
                    "{e}[{},{}] lies outside the triangle for N = {}",
                    r.i, r.j, rec.n
                )));
            }
            t.set(e, r.i, r.j, r.poly);
        }
    }
    Ok(t)
}

fn monomial_latex(i: u32, j: u32) -> String {
    let mut parts = Vec::new();
    match i {
        0 => {}
        1 => parts.push("a_{+}^{\\dagger}".to_string()),
        p => parts.push(format!("a_{{+}}^{{\\dagger {p}}}")),
    }
    match j {
        0 => {}
        1 => parts.push("a_{-}".to_string()),
        p => parts.push(format!("a_{{-}}^{{{p}}}")),
    }
    parts.join(" ")
}

fn term_latex(c: &LaurentPoly, i: u32, j: u32) -> (bool, String) {
    let mono = monomial_latex(i, j);
    if mono.is_empty() {
        let s = c.to_latex();
        return match s.strip_prefix('-') {
            Some(rest) if c.len() == 1 => (true, rest.to_string()),
            _ if c.len() == 1 => (false, s),
            _ => (false, format!("\\left({s}\\right)")),
        };
    }
    if c.len() == 1 {
        let (e, r) = c.terms().next().expect("one term");
        let abs = LaurentPoly::monomial(num_traits::Signed::abs(r), e.delta, e.g);
        let negative = num_traits::Signed::is_negative(r);
        let coeff = if abs == LaurentPoly::one() { String::new() } else { format!("{} ", abs.to_latex()) };
        return (negative, format!("{coeff}{mono}"));
    }
    (false, format!("\\left({}\\right) {mono}", c.to_latex()))
}

/// Renders the element as a sum ordered by total degree i+j descending, then
/// by i ascending.
pub fn operator_latex(t: &CoeffTables, e: Element) -> String {
    let mut entries: Vec<(u32, u32, &LaurentPoly)> = t.entries(e).filter(|(_, _, c)| !c.is_zero()).collect();
    entries.sort_by_key(|&(i, j, _)| (std::cmp::Reverse(i + j), i));
    if entries.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (idx, (i, j, c)) in entries.into_iter().enumerate() {
        let (negative, body) = term_latex(c, i, j);
        match (idx, negative) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        out.push_str(&body);
    }
    out
}

pub fn tables_to_latex(t: &CoeffTables) -> String {
    let mut out = format!("% symmetry operator elements, bias N = {}\n\\begin{{align*}}\n", t.n());
    for (k, e) in Element::ALL.into_iter().enumerate() {
        out.push_str(&format!("{e} &= {}", operator_latex(t, e)));
        out.push_str(if k < 3 { " \\\\\n" } else { "\n" });
    }
    out.push_str("\\end{align*}\n");
    out.push_str("% coefficients\n");
    for e in Element::ALL {
        for (i, j, c) in t.entries(e) {
            if !c.is_zero() {
                out.push_str(&format!("% {e}_{{{i},{j}}} = {}\n", c.to_latex()));
            }
        }
    }
    out
}
