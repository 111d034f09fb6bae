//! Exact bivariate Laurent polynomials in the formal symbols Δ (qubit
//! splitting) and g (coupling) over arbitrary-precision rationals.
//!
//! Δ only ever appears with non-negative powers; g may carry negative powers.
//! Every coefficient of the symmetry-operator tables lives in this ring.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Reduced fraction with positive denominator.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("polynomial is not divisible by Delta: term with Delta^0 g^{g_pow} present")]
    NotDivisible { g_pow: i32 },
    #[error("cannot evaluate g^{g_pow} at g = 0")]
    Domain { g_pow: i32 },
    #[error("malformed polynomial encoding: {0}")]
    Decode(String),
}

/// Exponent pair of a monomial Δ^delta g^g.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Exponent {
    pub delta: u32,
    pub g: i32,
}

impl Exponent {
    pub const fn new(delta: u32, g: i32) -> Self {
        Self { delta, g }
    }
}

/// A finite sum of rational multiples of Δ^p g^q with p ≥ 0.
///
/// Zero coefficients are never stored, so structural equality is
/// mathematical equality.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    terms: BTreeMap<Exponent, Rational>,
}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn int(c: i64) -> Self {
        Self::constant(Rational::from_integer(BigInt::from(c)))
    }

    pub fn monomial(c: Rational, delta: u32, g: i32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Exponent::new(delta, g), c);
        }
        Self { terms }
    }

    /// `num/den · Δ^delta g^g`, the usual way table entries are written.
    pub fn frac(num: i64, den: i64, delta: u32, g: i32) -> Self {
        Self::monomial(rat(num, den), delta, g)
    }

    /// The symbol Δ.
    pub fn delta() -> Self {
        Self::frac(1, 1, 1, 0)
    }

    /// The symbol g.
    pub fn g() -> Self {
        Self::frac(1, 1, 0, 1)
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

    pub fn coeff(&self, delta: u32, g: i32) -> Option<&Rational> {
        self.terms.get(&Exponent::new(delta, g))
    }

    /// Terms in canonical order: Δ power descending, then g power descending.
    pub fn terms(&self) -> impl Iterator<Item = (Exponent, &Rational)> + '_ {
        self.terms.iter().rev().map(|(e, c)| (*e, c))
    }

    fn accumulate(&mut self, e: Exponent, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect(),
        }
    }

    pub fn scale_int(&self, c: i64) -> Self {
        self.scale(&Rational::from_integer(BigInt::from(c)))
    }

    /// Multiplies by g^k (k may be negative).
    pub fn shift_g(&self, k: i32) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(e, v)| (Exponent::new(e.delta, e.g + k), v.clone()))
                .collect(),
        }
    }

    /// Divides by Δ, failing if any term lacks a factor of Δ.
    pub fn div_exact_by_delta(&self) -> Result<Self, RingError> {
        if let Some(e) = self.terms.keys().find(|e| e.delta == 0) {
            return Err(RingError::NotDivisible { g_pow: e.g });
        }
        Ok(Self {
            terms: self
                .terms
                .iter()
                .map(|(e, v)| (Exponent::new(e.delta - 1, e.g), v.clone()))
                .collect(),
        })
    }

    /// Double-precision value at (Δ, g); terms are summed in order of
    /// increasing magnitude.
    pub fn eval(&self, delta: f64, g: f64) -> Result<f64, RingError> {
        let mut values = Vec::with_capacity(self.terms.len());
        for (e, c) in &self.terms {
            if g == 0.0 && e.g < 0 {
                return Err(RingError::Domain { g_pow: e.g });
            }
            values.push(rational_to_f64(c) * delta.powi(e.delta as i32) * g.powi(e.g));
        }
        values.sort_by(|a, b| a.abs().total_cmp(&b.abs()));
        Ok(values.into_iter().sum())
    }

    /// Deterministic LaTeX rendering, e.g. `\frac{\Delta^{2}}{16g^{2}}`.
    pub fn to_latex(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (e, c)) in self.terms().enumerate() {
            let negative = c.is_negative();
            match (idx, negative) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            out.push_str(&latex_term(e, &c.abs()));
        }
        out
    }
}

fn latex_term(e: Exponent, c: &Rational) -> String {
    let mut num = String::new();
    let has_symbols = e.delta > 0 || e.g > 0;
    if !c.numer().is_one() || !has_symbols {
        num.push_str(&c.numer().to_string());
    }
    match e.delta {
        0 => {}
        1 => num.push_str("\\Delta"),
        p => num.push_str(&format!("\\Delta^{{{p}}}")),
    }
    if e.g > 0 {
        if e.delta > 0 {
            num.push(' ');
        }
        num.push_str(&latex_g(e.g));
    }
    let mut den = String::new();
    if !c.denom().is_one() {
        den.push_str(&c.denom().to_string());
    }
    if e.g < 0 {
        den.push_str(&latex_g(-e.g));
    }
    if den.is_empty() {
        num
    } else {
        format!("\\frac{{{num}}}{{{den}}}")
    }
}

fn latex_g(p: i32) -> String {
    if p == 1 {
        "g".to_string()
    } else {
        format!("g^{{{p}}}")
    }
}

pub(crate) fn rational_to_f64(c: &Rational) -> f64 {
    c.to_f64().unwrap_or_else(|| {
        c.numer().to_f64().unwrap_or(f64::NAN) / c.denom().to_f64().unwrap_or(f64::NAN)
    })
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_latex())
    }
}

impl From<Rational> for LaurentPoly {
    fn from(c: Rational) -> Self {
        Self::constant(c)
    }
}

impl From<i64> for LaurentPoly {
    fn from(c: i64) -> Self {
        Self::int(c)
    }
}

impl Add<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(mut self, rhs: LaurentPoly) -> LaurentPoly {
        self += &rhs;
        self
    }
}

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        for (e, c) in &rhs.terms {
            self.accumulate(*e, c.clone());
        }
    }
}

impl SubAssign<&LaurentPoly> for LaurentPoly {
    fn sub_assign(&mut self, rhs: &LaurentPoly) {
        for (e, c) in &rhs.terms {
            self.accumulate(*e, -c);
        }
    }
}

impl Sub<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(mut self, rhs: LaurentPoly) -> LaurentPoly {
        self -= &rhs;
        self
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl Mul<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                out.accumulate(Exponent::new(ea.delta + eb.delta, ea.g + eb.g), ca * cb);
            }
        }
        out
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        &self * &rhs
    }
}

#[derive(Serialize, Deserialize)]
struct TermRecord {
    dp: i64,
    gp: i64,
    num: String,
    den: String,
}

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let records: Vec<TermRecord> = self
            .terms()
            .map(|(e, c)| TermRecord {
                dp: e.delta as i64,
                gp: e.g as i64,
                num: c.numer().to_string(),
                den: c.denom().to_string(),
            })
            .collect();
        records.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let records = Vec::<TermRecord>::deserialize(deserializer)?;
        LaurentPoly::from_records(records).map_err(serde::de::Error::custom)
    }
}

impl LaurentPoly {
    fn from_records(records: Vec<TermRecord>) -> Result<Self, RingError> {
        let mut out = LaurentPoly::zero();
        for r in records {
            let delta = u32::try_from(r.dp)
                .map_err(|_| RingError::Decode(format!("invalid Delta power {}", r.dp)))?;
            let g = i32::try_from(r.gp)
                .map_err(|_| RingError::Decode(format!("invalid g power {}", r.gp)))?;
            let num: BigInt = r
                .num
                .parse()
                .map_err(|_| RingError::Decode(format!("bad numerator {:?}", r.num)))?;
            let den: BigInt = r
                .den
                .parse()
                .map_err(|_| RingError::Decode(format!("bad denominator {:?}", r.den)))?;
            if !den.is_positive() {
                return Err(RingError::Decode(format!("non-positive denominator {den}")));
            }
            out.accumulate(Exponent::new(delta, g), Rational::new(num, den));
        }
        Ok(out)
    }
}
