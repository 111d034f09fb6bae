//! Normal-ordered operator polynomials in the Bogoliubov pair (a₊†, a₋)
//! with `[a₋, a₊†] = 1`, and 2×2 matrices of such operators.
//!
//! A monomial `(i, j)` stands for (a₊†)^i (a₋)^j. Products are brought back
//! to normal order immediately using
//! (a₋)^j (a₊†)^i = Σ_k k!·C(j,k)·C(i,k)·(a₊†)^{i−k} (a₋)^{j−k}.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::One;

use crate::ring::{LaurentPoly, Rational};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NormalOp {
    terms: BTreeMap<(u32, u32), LaurentPoly>,
}

impl NormalOp {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(LaurentPoly::one())
    }

    pub fn constant(c: LaurentPoly) -> Self {
        Self::monomial(c, 0, 0)
    }

    /// `c · (a₊†)^i (a₋)^j`
    pub fn monomial(c: LaurentPoly, i: u32, j: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((i, j), c);
        }
        Self { terms }
    }

    /// a₊†
    pub fn create() -> Self {
        Self::monomial(LaurentPoly::one(), 1, 0)
    }

    /// a₋
    pub fn annihilate() -> Self {
        Self::monomial(LaurentPoly::one(), 0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, i: u32, j: u32) -> Option<&LaurentPoly> {
        self.terms.get(&(i, j))
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), &LaurentPoly)> + '_ {
        self.terms.iter().map(|(k, v)| (*k, v))
    }

    /// Highest total degree i+j present; `None` for the zero operator.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|(i, j)| i + j).max()
    }

    fn accumulate(&mut self, key: (u32, u32), c: LaurentPoly) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &NormalOp) -> NormalOp {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.accumulate(*k, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &NormalOp) -> NormalOp {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.accumulate(*k, -c);
        }
        out
    }

    pub fn scale(&self, c: &LaurentPoly) -> NormalOp {
        let mut out = NormalOp::zero();
        for (k, v) in &self.terms {
            out.accumulate(*k, c * v);
        }
        out
    }

    /// Normal-ordered product `self · other`.
    pub fn mul(&self, other: &NormalOp) -> NormalOp {
        let mut out = NormalOp::zero();
        for (&(i1, j1), c1) in &self.terms {
            for (&(i2, j2), c2) in &other.terms {
                let c12 = c1 * c2;
                for k in 0..=j1.min(i2) {
                    let w = reorder_weight(j1, i2, k);
                    out.accumulate(
                        (i1 + i2 - k, j1 + j2 - k),
                        c12.scale(&Rational::from_integer(w)),
                    );
                }
            }
        }
        out
    }

    /// X(a₋, a₊†) ↦ X(−a₊†, −a₋) read coefficientwise: (i,j) ↦ (j,i) with
    /// sign (−1)^{i+j}. This is the parity-conjugated adjoint, an involutive
    /// anti-automorphism of the algebra.
    pub fn mirror_conjugate(&self) -> NormalOp {
        NormalOp {
            terms: self
                .terms
                .iter()
                .map(|(&(i, j), c)| ((j, i), if (i + j) % 2 == 0 { c.clone() } else { -c }))
                .collect(),
        }
    }
}

/// k!·C(j,k)·C(i,k)
fn reorder_weight(j: u32, i: u32, k: u32) -> BigInt {
    let mut w = BigInt::one();
    for t in 0..k {
        // k!·C(j,k)·C(i,k) = j!/(j−k)! · i!/(i−k)! / k!
        w *= BigInt::from(j - t) * BigInt::from(i - t);
    }
    let mut fact = BigInt::one();
    for t in 2..=k {
        fact *= BigInt::from(t);
    }
    w / fact
}

impl Add for &NormalOp {
    type Output = NormalOp;
    fn add(self, rhs: &NormalOp) -> NormalOp {
        NormalOp::add(self, rhs)
    }
}

impl Sub for &NormalOp {
    type Output = NormalOp;
    fn sub(self, rhs: &NormalOp) -> NormalOp {
        NormalOp::sub(self, rhs)
    }
}

impl Mul for &NormalOp {
    type Output = NormalOp;
    fn mul(self, rhs: &NormalOp) -> NormalOp {
        NormalOp::mul(self, rhs)
    }
}

impl Neg for &NormalOp {
    type Output = NormalOp;
    fn neg(self) -> NormalOp {
        NormalOp::zero().sub(self)
    }
}

/// a₊†a₊ written in the (a₊†, a₋) pair: a₊†a₋ + 2g·a₊†.
pub fn number_plus() -> NormalOp {
    NormalOp::monomial(LaurentPoly::one(), 1, 1).add(&NormalOp::monomial(LaurentPoly::frac(2, 1, 0, 1), 1, 0))
}

/// a₋†a₋ written in the (a₊†, a₋) pair: a₊†a₋ − 2g·a₋.
pub fn number_minus() -> NormalOp {
    NormalOp::monomial(LaurentPoly::one(), 1, 1).add(&NormalOp::monomial(LaurentPoly::frac(-2, 1, 0, 1), 0, 1))
}

/// 2×2 matrix of operators, rows and columns indexed from 0.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct OpMatrix2 {
    pub entries: [[NormalOp; 2]; 2],
}

impl OpMatrix2 {
    pub fn new(e00: NormalOp, e01: NormalOp, e10: NormalOp, e11: NormalOp) -> Self {
        Self { entries: [[e00, e01], [e10, e11]] }
    }

    pub fn identity() -> Self {
        Self::new(NormalOp::one(), NormalOp::zero(), NormalOp::zero(), NormalOp::one())
    }

    pub fn get(&self, r: usize, c: usize) -> &NormalOp {
        &self.entries[r][c]
    }

    pub fn mat_mul(&self, rhs: &OpMatrix2) -> OpMatrix2 {
        let e = |r: usize, c: usize| {
            self.entries[r][0]
                .mul(&rhs.entries[0][c])
                .add(&self.entries[r][1].mul(&rhs.entries[1][c]))
        };
        Self::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
    }

    pub fn mat_add(&self, rhs: &OpMatrix2) -> OpMatrix2 {
        let e = |r: usize, c: usize| self.entries[r][c].add(&rhs.entries[r][c]);
        Self::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
    }

    pub fn mat_sub(&self, rhs: &OpMatrix2) -> OpMatrix2 {
        let e = |r: usize, c: usize| self.entries[r][c].sub(&rhs.entries[r][c]);
        Self::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(NormalOp::is_zero)
    }
}

fn bias_shift(bias: &Rational, sign: i64) -> LaurentPoly {
    // −g² ± ε/2
    LaurentPoly::frac(-1, 1, 0, 2) + LaurentPoly::constant(bias * Rational::new(sign.into(), 2.into()))
}

/// The Bogoliubov-frame Hamiltonian
/// `[[a₊†a₊ − g² + ε/2, −Δ/2], [−Δ/2, a₋†a₋ − g² − ε/2]]`.
pub fn hamiltonian(bias: &Rational) -> OpMatrix2 {
    let off = NormalOp::constant(LaurentPoly::frac(-1, 2, 1, 0));
    OpMatrix2::new(
        number_plus().add(&NormalOp::constant(bias_shift(bias, 1))),
        off.clone(),
        off,
        number_minus().add(&NormalOp::constant(bias_shift(bias, -1))),
    )
}

/// The partner Hamiltonian H̃ with the two number operators swapped, so that
/// a symmetry J = e^{iπa†a}Q requires QH = H̃Q.
pub fn hamiltonian_tilde(bias: &Rational) -> OpMatrix2 {
    let off = NormalOp::constant(LaurentPoly::frac(-1, 2, 1, 0));
    OpMatrix2::new(
        number_minus().add(&NormalOp::constant(bias_shift(bias, 1))),
        off.clone(),
        off,
        number_plus().add(&NormalOp::constant(bias_shift(bias, -1))),
    )
}
