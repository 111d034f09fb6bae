//! Hierarchical construction of the symmetry operator J = e^{iπa†a}Q at
//! integer bias ε = N.
//!
//! Q = [[A, B], [C, D]] with every element expanded as
//! Σ_{i+j≤N} M_{i,j} (a₊†)^i (a₋)^j. The tables are filled from the top level
//! i+j = N downwards. At each level the D and B recursions are
//! over-determined by one equation; the extra instance is evaluated exactly
//! and must vanish.

mod render;
mod verify;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::boson::{NormalOp, OpMatrix2};
use crate::ring::{LaurentPoly, RingError};

pub use render::{operator_latex, tables_from_json, tables_to_json, tables_to_latex, TableFormat};
pub use verify::{
    verify_closed_forms, verify_defining_equations, ClosedFormCheck, ClosedFormReport, DefiningReport,
    EquationCheck,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Element {
    A,
    B,
    C,
    D,
}

impl Element {
    pub const ALL: [Element; 4] = [Element::A, Element::B, Element::C, Element::D];

    pub fn name(self) -> &'static str {
        match self {
            Element::A => "A",
            Element::B => "B",
            Element::C => "C",
            Element::D => "D",
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Which relation produced a nonzero surplus.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    /// The first-order D recursion.
    DLevel,
    /// The eight-term B recursion.
    BLevel,
    /// The independent A relation used to re-validate the derived A.
    ARelation,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("{stage:?} recursion inconsistent at level {level}, index i = {index}: residual {residual}")]
    Inconsistent {
        stage: Stage,
        level: u32,
        index: u32,
        residual: LaurentPoly,
    },
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("level {level} out of range for N = {n}")]
    LevelOutOfRange { level: u32, n: u32 },
}

/// One surplus (redundant) equation instance, evaluated exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurplusCheck {
    pub stage: Stage,
    pub level: u32,
    pub residual: LaurentPoly,
}

/// Exact coefficient tables A, B, C, D for bias N, indexed by (i, j) with
/// i + j ≤ N. Every index in the triangle is stored, zeros included.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoeffTables {
    n: u32,
    maps: [BTreeMap<(u32, u32), LaurentPoly>; 4],
}

impl CoeffTables {
    /// All-zero tables for bias N.
    pub fn zeros(n: u32) -> Self {
        let mut tri = BTreeMap::new();
        for i in 0..=n {
            for j in 0..=(n - i) {
                tri.insert((i, j), LaurentPoly::zero());
            }
        }
        Self {
            n,
            maps: [tri.clone(), tri.clone(), tri.clone(), tri],
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Coefficient with out-of-triangle or negative indices reading as zero.
    pub fn at(&self, e: Element, i: i64, j: i64) -> LaurentPoly {
        if i < 0 || j < 0 {
            return LaurentPoly::zero();
        }
        self.maps[e as usize]
            .get(&(i as u32, j as u32))
            .cloned()
            .unwrap_or_default()
    }

    pub fn get(&self, e: Element, i: u32, j: u32) -> Option<&LaurentPoly> {
        self.maps[e as usize].get(&(i, j))
    }

    /// Overwrites one coefficient; panics if (i, j) lies outside the triangle.
    pub fn set(&mut self, e: Element, i: u32, j: u32, value: LaurentPoly) {
        let slot = self.maps[e as usize]
            .get_mut(&(i, j))
            .unwrap_or_else(|| panic!("({i}, {j}) outside the level-{} triangle", self.n));
        *slot = value;
    }

    /// (i, j, coefficient) in ascending index order.
    pub fn entries(&self, e: Element) -> impl Iterator<Item = (u32, u32, &LaurentPoly)> + '_ {
        self.maps[e as usize].iter().map(|(&(i, j), c)| (i, j, c))
    }

    pub fn operator(&self, e: Element) -> NormalOp {
        self.entries(e)
            .fold(NormalOp::zero(), |acc, (i, j, c)| acc.add(&NormalOp::monomial(c.clone(), i, j)))
    }

    /// Q = [[A, B], [C, D]].
    pub fn q_matrix(&self) -> OpMatrix2 {
        OpMatrix2::new(
            self.operator(Element::A),
            self.operator(Element::B),
            self.operator(Element::C),
            self.operator(Element::D),
        )
    }

    /// Number of nonzero stored coefficients across all four tables.
    pub fn nonzero_count(&self) -> usize {
        self.maps.iter().flat_map(|m| m.values()).filter(|c| !c.is_zero()).count()
    }

    /// Checks the structural relations every solved table must satisfy:
    /// top-level normalization, C/B mirror relation and the self-adjointness
    /// symmetry of A and D. Returns a description of each violation.
    pub fn invariant_violations(&self) -> Vec<String> {
        let n = self.n as i64;
        let mut out = Vec::new();
        for i in 0..=n {
            let j = n - i;
            let want_b = if i == 0 { LaurentPoly::one() } else { LaurentPoly::zero() };
            if self.at(Element::B, i, j) != want_b {
                out.push(format!("B[{i},{j}] normalization"));
            }
            for e in [Element::A, Element::D] {
                if !self.at(e, i, j).is_zero() {
                    out.push(format!("{e}[{i},{j}] must vanish at the top level"));
                }
            }
        }
        for i in 0..=n {
            for j in 0..=(n - i) {
                let sign = |p: LaurentPoly| if (i + j) % 2 == 0 { p } else { -p };
                if self.at(Element::C, i, j) != sign(self.at(Element::B, j, i)) {
                    out.push(format!("C[{i},{j}] != (-1)^(i+j) B[{j},{i}]"));
                }
                for e in [Element::A, Element::D] {
                    if self.at(e, i, j) != sign(self.at(e, j, i)) {
                        out.push(format!("{e}[{i},{j}] != (-1)^(i+j) {e}[{j},{i}]"));
                    }
                }
            }
        }
        out
    }
}

/// Multiplies by 1/(2k·g).
fn div_2kg(p: &LaurentPoly, k: i64) -> LaurentPoly {
    p.scale(&crate::ring::rat(1, 2 * k)).shift_g(-1)
}

fn two_g() -> LaurentPoly {
    LaurentPoly::frac(2, 1, 0, 1)
}

fn sign(k: i64) -> i64 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Tables with only the top level set: B_{0,N} = 1, everything else zero.
pub fn initial_tables(n: u32) -> CoeffTables {
    let mut t = CoeffTables::zeros(n);
    t.set(Element::B, 0, n, LaurentPoly::one());
    t
}

/// Solves the D recursion
/// (i−j)D_{i,j} + 2g D_{i−1,j} + 2g D_{i,j−1} = (Δ/2)(B_{i,j} − (−1)^{i+j} B_{j,i})
/// on level `ell` for the level-(ell−1) unknowns, iterating i upward from 0.
/// The instance i = ell is redundant and its residual is returned.
pub fn solve_d_level(t: &mut CoeffTables, ell: u32) -> Result<SurplusCheck, SolveError> {
    check_level(t, ell)?;
    let ell_i = ell as i64;
    let half_delta = LaurentPoly::frac(1, 2, 1, 0);
    for i in 0..=ell_i {
        let j = ell_i - i;
        let source = &t.at(Element::B, i, j) - &t.at(Element::B, j, i).scale_int(sign(i + j));
        let mut rest = &half_delta * &source;
        rest -= &t.at(Element::D, i, j).scale_int(i - j);
        rest -= &(&two_g() * &t.at(Element::D, i - 1, j));
        if i < ell_i {
            // 2g·D_{i,j−1} = rest
            t.set(Element::D, i as u32, (j - 1) as u32, div_2kg(&rest, 1));
        } else {
            return surplus(Stage::DLevel, ell, i as u32, rest);
        }
    }
    unreachable!()
}

/// Solves the eight-term B recursion on level `ell` for the level-(ell−1)
/// unknowns. The pivot 2g(j−i−1−N) on B_{i,j−1} is strictly negative for
/// ell ≤ N. The instance i = ell is redundant and its residual is returned.
pub fn solve_b_level(t: &mut CoeffTables, ell: u32) -> Result<SurplusCheck, SolveError> {
    check_level(t, ell)?;
    let n = t.n as i64;
    let ell_i = ell as i64;
    let g = LaurentPoly::g();
    let g2 = LaurentPoly::frac(1, 1, 0, 2);
    let delta = LaurentPoly::delta();
    for i in 0..=ell_i {
        let j = ell_i - i;
        let b = |p: i64, q: i64| t.at(Element::B, p, q);
        let d = |p: i64, q: i64| t.at(Element::D, p, q);

        let mut known = LaurentPoly::zero();
        known += &(&g2 * &b(i + 2, j)).scale_int(4 * (i + 2) * (i + 1));
        known += &(&g2 * &b(i + 1, j + 1)).scale_int(4 * (i + 1) * (j + 1));
        known += &(&g * &b(i + 1, j)).scale_int(2 * (2 * j - 2 * i - 1 - n) * (i + 1));
        known += &(&g * &b(i, j + 1)).scale_int(2 * (j + 1) * (j + 1 - i - n));
        known += &(&g2 * &b(i + 1, j - 1)).scale_int(4 * (i + 1));
        known += &(&(&g2.scale_int(4 * i) + &LaurentPoly::int((j - i) * (j - i - n))) * &b(i, j));
        known += &(&g * &b(i - 1, j)).scale_int(2 * (j - i + 1 - n));

        let mut rhs = d(i, j).scale_int(i - j);
        rhs -= &(&g * &d(i, j + 1)).scale_int(j + 1);
        rhs -= &(&g * &d(i + 1, j)).scale_int(i + 1);
        let rhs = &delta * &rhs;

        let rest = &rhs - &known;
        if i < ell_i {
            // 2g(j−i−1−N)·B_{i,j−1} = rest
            t.set(Element::B, i as u32, (j - 1) as u32, div_2kg(&rest, j - i - 1 - n));
        } else {
            return surplus(Stage::BLevel, ell, i as u32, rest);
        }
    }
    unreachable!()
}

fn check_level(t: &CoeffTables, ell: u32) -> Result<(), SolveError> {
    if ell == 0 || ell > t.n {
        return Err(SolveError::LevelOutOfRange { level: ell, n: t.n });
    }
    Ok(())
}

fn surplus(stage: Stage, level: u32, index: u32, residual: LaurentPoly) -> Result<SurplusCheck, SolveError> {
    if residual.is_zero() {
        Ok(SurplusCheck { stage, level, residual })
    } else {
        Err(SolveError::Inconsistent { stage, level, index, residual })
    }
}

/// C_{i,j} = (−1)^{i+j} B_{j,i}.
pub fn derive_c(t: &mut CoeffTables) {
    let n = t.n;
    for i in 0..=n {
        for j in 0..=(n - i) {
            let v = t.at(Element::B, j as i64, i as i64).scale_int(sign((i + j) as i64));
            t.set(Element::C, i, j, v);
        }
    }
}

/// A_{i,j} = D_{i,j} + (2/Δ)[(j−i−N)B_{i,j} + 2g(i+1)B_{i+1,j}], then
/// re-checks A against the independent second-order A recursion.
pub fn derive_a(t: &mut CoeffTables) -> Result<(), SolveError> {
    let n = t.n as i64;
    for i in 0..=n {
        for j in 0..=(n - i) {
            let bracket = t.at(Element::B, i, j).scale_int(j - i - n)
                + (&two_g() * &t.at(Element::B, i + 1, j)).scale_int(i + 1);
            let v = &t.at(Element::D, i, j) + &bracket.scale_int(2).div_exact_by_delta()?;
            t.set(Element::A, i as u32, j as u32, v);
        }
    }
    for (level, index, residual) in a_relation_residuals(t) {
        if !residual.is_zero() {
            return Err(SolveError::Inconsistent { stage: Stage::ARelation, level, index, residual });
        }
    }
    Ok(())
}

/// Residuals of
/// (j−i)A_{i,j} + 2gA_{i−1,j} + 2gA_{i,j−1} + 2g(j+1)A_{i,j+1} + 2g(i+1)A_{i+1,j}
///   − (Δ/2)(B_{i,j} − (−1)^{i+j}B_{j,i})
/// for every i + j ≤ N + 1, as (level, i, residual).
pub fn a_relation_residuals(t: &CoeffTables) -> Vec<(u32, u32, LaurentPoly)> {
    let n = t.n as i64;
    let a = |p: i64, q: i64| t.at(Element::A, p, q);
    let two_g = two_g();
    let half_delta = LaurentPoly::frac(1, 2, 1, 0);
    let mut out = Vec::new();
    for ell in 0..=(n + 1) {
        for i in 0..=ell {
            let j = ell - i;
            let mut lhs = a(i, j).scale_int(j - i);
            lhs += &(&two_g * &(&a(i - 1, j) + &a(i, j - 1)));
            lhs += &(&two_g * &a(i, j + 1)).scale_int(j + 1);
            lhs += &(&two_g * &a(i + 1, j)).scale_int(i + 1);
            let source = &t.at(Element::B, i, j) - &t.at(Element::B, j, i).scale_int(sign(i + j));
            let residual = &lhs - &(&half_delta * &source);
            out.push((ell as u32, i as u32, residual));
        }
    }
    out
}

/// Complete tables plus the exact residual of every surplus equation met on
/// the way down.
#[derive(Debug, Clone)]
pub struct SolveTrace {
    pub tables: CoeffTables,
    pub surplus: Vec<SurplusCheck>,
}

/// Builds the full tables for bias N.
pub fn build_tables(n: u32) -> Result<CoeffTables, SolveError> {
    build_tables_traced(n).map(|t| t.tables)
}

pub fn build_tables_traced(n: u32) -> Result<SolveTrace, SolveError> {
    let mut t = initial_tables(n);
    let mut surplus = Vec::with_capacity(2 * n as usize);
    for ell in (1..=n).rev() {
        surplus.push(solve_d_level(&mut t, ell)?);
        surplus.push(solve_b_level(&mut t, ell)?);
    }
    derive_c(&mut t);
    derive_a(&mut t)?;
    Ok(SolveTrace { tables: t, surplus })
}

/// The symmetry operator's Q matrix together with the tables it came from.
#[derive(Debug, Clone)]
pub struct SymmetryOperator {
    pub tables: CoeffTables,
    pub q: OpMatrix2,
}

impl SymmetryOperator {
    pub fn new(tables: CoeffTables) -> Self {
        let q = tables.q_matrix();
        Self { tables, q }
    }

    pub fn build(n: u32) -> Result<Self, SolveError> {
        build_tables(n).map(Self::new)
    }
}
