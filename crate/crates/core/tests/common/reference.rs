//! Reference tables for N = 0…5, transcribed in the factored form they are
//! usually written in and expanded here with ring arithmetic.

use aqrm_core::ring::rat;
use aqrm_core::{Element, LaurentPoly};

use Element::{A, B, C, D};

pub type Entry = (Element, u32, u32, LaurentPoly);

fn q(n: i64, d: i64) -> LaurentPoly {
    LaurentPoly::constant(rat(n, d))
}

fn dl(k: u32) -> LaurentPoly {
    LaurentPoly::monomial(rat(1, 1), k, 0)
}

fn gg(k: i32) -> LaurentPoly {
    LaurentPoly::monomial(rat(1, 1), 0, k)
}

/// c·Δ^dp/g^gden
fn t(n: i64, d: i64, dp: u32, gden: i32) -> LaurentPoly {
    LaurentPoly::frac(n, d, dp, -gden)
}

/// Nonzero entries of the reference tables for bias `n`.
pub fn entries(n: u32) -> Vec<Entry> {
    match n {
        0 => vec![(B, 0, 0, q(1, 1)), (C, 0, 0, q(1, 1))],
        1 => vec![
            (A, 0, 0, t(1, 4, 1, 1)),
            (B, 0, 1, q(1, 1)),
            (C, 1, 0, q(-1, 1)),
            (D, 0, 0, t(1, 4, 1, 1)),
        ],
        2 => vec![
            (B, 0, 2, q(1, 1)),
            (B, 0, 0, t(1, 16, 2, 2)),
            (D, 0, 1, t(1, 4, 1, 1)),
            (D, 1, 0, t(-1, 4, 1, 1)),
            (D, 0, 0, t(1, 8, 1, 2)),
            (C, 2, 0, q(1, 1)),
            (C, 0, 0, t(1, 16, 2, 2)),
            (A, 0, 1, t(1, 4, 1, 1)),
            (A, 1, 0, t(-1, 4, 1, 1)),
            (A, 0, 0, t(-1, 8, 1, 2)),
        ],
        3 => {
            let d00 = (dl(3) + q(8, 1) * dl(1)) * q(1, 64) * gg(-3);
            vec![
                (B, 0, 3, q(1, 1)),
                (B, 0, 1, t(1, 8, 2, 2)),
                (B, 1, 0, t(-1, 16, 2, 2)),
                (D, 0, 2, t(1, 4, 1, 1)),
                (D, 1, 1, t(-1, 4, 1, 1)),
                (D, 2, 0, t(1, 4, 1, 1)),
                (D, 0, 1, t(1, 4, 1, 2)),
                (D, 1, 0, t(-1, 4, 1, 2)),
                (D, 0, 0, d00.clone()),
                (C, 3, 0, q(-1, 1)),
                (C, 0, 1, t(1, 16, 2, 2)),
                (C, 1, 0, t(-1, 8, 2, 2)),
                (A, 1, 1, t(-1, 4, 1, 1)),
                (A, 2, 0, t(1, 4, 1, 1)),
                (A, 0, 2, t(1, 4, 1, 1)),
                (A, 1, 0, t(1, 4, 1, 2)),
                (A, 0, 1, t(-1, 4, 1, 2)),
                (A, 0, 0, d00 - t(1, 4, 1, 1)),
            ]
        }
        4 => {
            let b00 = (q(12, 1) * dl(2) - q(16, 1) * gg(2) * dl(2) + dl(4)) * q(1, 256) * gg(-4);
            let d01 = dl(1) * (dl(2) + q(12, 1)) * q(1, 32) * gg(-3);
            let a01 = d01.clone() - t(1, 2, 1, 1);
            vec![
                (B, 0, 4, q(1, 1)),
                (B, 0, 2, t(3, 16, 2, 2)),
                (B, 1, 1, t(-1, 8, 2, 2)),
                (B, 2, 0, t(1, 16, 2, 2)),
                (B, 0, 0, b00.clone()),
                (D, 0, 3, t(1, 4, 1, 1)),
                (D, 1, 2, t(-1, 4, 1, 1)),
                (D, 2, 1, t(1, 4, 1, 1)),
                (D, 3, 0, t(-1, 4, 1, 1)),
                (D, 0, 2, t(3, 8, 1, 2)),
                (D, 1, 1, t(-1, 2, 1, 2)),
                (D, 2, 0, t(3, 8, 1, 2)),
                (D, 0, 1, d01.clone()),
                (D, 1, 0, -d01),
                (D, 0, 0, (dl(3) + q(12, 1) * dl(1)) * q(1, 64) * gg(-4)),
                (C, 4, 0, q(1, 1)),
                (C, 2, 0, t(3, 16, 2, 2)),
                (C, 1, 1, t(-1, 8, 2, 2)),
                (C, 0, 2, t(1, 16, 2, 2)),
                (C, 0, 0, b00),
                (A, 3, 0, t(-1, 4, 1, 1)),
                (A, 0, 3, t(1, 4, 1, 1)),
                (A, 2, 1, t(1, 4, 1, 1)),
                (A, 1, 2, t(-1, 4, 1, 1)),
                (A, 2, 0, t(-3, 8, 1, 2)),
                (A, 0, 2, t(-3, 8, 1, 2)),
                (A, 1, 1, t(1, 2, 1, 2)),
                (A, 0, 1, a01.clone()),
                (A, 1, 0, -a01),
                (A, 0, 0, -((dl(3) + q(12, 1) * dl(1) - q(32, 1) * gg(2) * dl(1)) * q(1, 64) * gg(-4))),
            ]
        }
        5 => {
            let y = dl(2) * (q(16, 1) * gg(2) - q(16, 1) - dl(2)) * q(1, 256) * gg(-4);
            let d02 = dl(1) * (dl(2) + q(16, 1)) * q(3, 64) * gg(-3);
            let d11 = -(dl(1) * (dl(2) + q(18, 1)) * q(1, 16) * gg(-3));
            let d10 = -(dl(1) * (dl(2) + q(16, 1)) * q(3, 64) * gg(-4));
            let d00 = dl(1)
                * (-(q(16, 1) * gg(2) * dl(2)) + dl(4) + q(40, 1) * dl(2) + q(384, 1))
                * q(1, 1024)
                * gg(-5);
            let a20 = dl(1) * (q(16, 1) + dl(2)) * q(3, 64) * gg(-3) - t(3, 4, 1, 1);
            let a11 = t(1, 1, 1, 1) - (dl(3) + q(18, 1) * dl(1)) * q(1, 16) * gg(-3);
            let a10 = dl(1) * (q(16, 1) + dl(2)) * q(3, 64) * gg(-4) - t(3, 2, 1, 2);
            let a00 = d00.clone() + t(1, 2, 1, 1) - (dl(3) + q(18, 1) * dl(1)) * q(1, 16) * gg(-3);
            vec![
                (B, 0, 5, q(1, 1)),
                (B, 0, 3, t(1, 4, 2, 2)),
                (B, 1, 2, t(-3, 16, 2, 2)),
                (B, 2, 1, t(1, 8, 2, 2)),
                (B, 3, 0, t(-1, 16, 2, 2)),
                (B, 0, 1, t(3, 16, 2, 4) + dl(2) * (dl(2) - q(16, 1) * gg(2)) * q(3, 256) * gg(-4)),
                (B, 1, 0, dl(2) * (q(16, 1) * gg(2) - dl(2) - q(16, 1)) * q(1, 128) * gg(-4)),
                (B, 0, 0, t(1, 16, 2, 3)),
                (D, 0, 4, t(1, 4, 1, 1)),
                (D, 1, 3, t(-1, 4, 1, 1)),
                (D, 2, 2, t(1, 4, 1, 1)),
                (D, 3, 1, t(-1, 4, 1, 1)),
                (D, 4, 0, t(1, 4, 1, 1)),
                (D, 0, 3, t(1, 2, 1, 2)),
                (D, 1, 2, t(-3, 4, 1, 2)),
                (D, 2, 1, t(3, 4, 1, 2)),
                (D, 3, 0, t(-1, 2, 1, 2)),
                (D, 0, 2, d02.clone()),
                (D, 1, 1, d11),
                (D, 2, 0, d02),
                (D, 1, 0, d10.clone()),
                (D, 0, 1, -d10),
                (D, 0, 0, d00),
                (C, 5, 0, q(-1, 1)),
                (C, 0, 3, t(1, 16, 2, 2)),
                (C, 3, 0, t(-1, 4, 2, 2)),
                (C, 1, 2, t(-1, 8, 2, 2)),
                (C, 2, 1, t(3, 16, 2, 2)),
                (C, 0, 1, y.scale_int(-2)),
                (C, 1, 0, y.scale_int(3)),
                (C, 0, 0, t(1, 16, 2, 3)),
                (A, 4, 0, t(1, 4, 1, 1)),
                (A, 0, 4, t(1, 4, 1, 1)),
                (A, 1, 3, t(-1, 4, 1, 1)),
                (A, 3, 1, t(-1, 4, 1, 1)),
                (A, 2, 2, t(1, 4, 1, 1)),
                (A, 0, 3, t(-1, 2, 1, 2)),
                (A, 3, 0, t(1, 2, 1, 2)),
                (A, 2, 1, t(-3, 4, 1, 2)),
                (A, 1, 2, t(3, 4, 1, 2)),
                (A, 2, 0, a20.clone()),
                (A, 0, 2, a20),
                (A, 1, 1, a11),
                (A, 1, 0, a10.clone()),
                (A, 0, 1, -a10),
                (A, 0, 0, a00),
            ]
        }
        _ => panic!("no reference table for N = {n}"),
    }
}

/// Entries of `tables` that disagree with the reference, including entries
/// the reference leaves at zero.
pub fn mismatches(tables: &aqrm_core::CoeffTables) -> Vec<(Element, u32, u32)> {
    let reference = entries(tables.n());
    assert!(reference.iter().all(|(_, i, j, _)| i + j <= tables.n()));
    let mut out = Vec::new();
    for e in Element::ALL {
        for (i, j, actual) in tables.entries(e) {
            let want = reference
                .iter()
                .find(|(re, ri, rj, _)| *re == e && *ri == i && *rj == j)
                .map(|r| r.3.clone())
                .unwrap_or_else(LaurentPoly::zero);
            if &want != actual {
                out.push((e, i, j));
            }
        }
    }
    out
}
