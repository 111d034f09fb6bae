use crate::boson::{hamiltonian, hamiltonian_tilde, number_minus, number_plus, NormalOp};
use crate::ring::{rat, LaurentPoly, Rational};

use super::{CoeffTables, Element};

/// One of the four operator equations that QH = H̃Q splits into.
#[derive(Debug, Clone)]
pub struct EquationCheck {
    pub name: &'static str,
    pub statement: &'static str,
    pub residual: NormalOp,
}

impl EquationCheck {
    pub fn passed(&self) -> bool {
        self.residual.is_zero()
    }

    /// (i, j) monomials with a nonzero residual coefficient.
    pub fn offending(&self) -> Vec<(u32, u32)> {
        self.residual.terms().map(|(k, _)| k).collect()
    }
}

#[derive(Debug, Clone)]
pub struct DefiningReport {
    pub n: u32,
    pub equations: Vec<EquationCheck>,
    /// QH − H̃Q computed directly with 2×2 operator matrices.
    pub intertwiner_zero: bool,
}

impl DefiningReport {
    pub fn all_passed(&self) -> bool {
        self.intertwiner_zero && self.equations.iter().all(EquationCheck::passed)
    }
}

/// Evaluates the four defining equations
///
/// ```text
/// A n₊ − n₋ A + (Δ/2)C − (Δ/2)B = 0
/// n₊ D − D n₋ + (Δ/2)C − (Δ/2)B = 0
/// [B, n₋] − εB + (Δ/2)D − (Δ/2)A = 0
/// [n₊, C] − εC + (Δ/2)D − (Δ/2)A = 0
/// ```
///
/// symbolically, where n₊ = a₊†a₊ and n₋ = a₋†a₋, and also the full
/// intertwining relation QH − H̃Q.
pub fn verify_defining_equations(t: &CoeffTables) -> DefiningReport {
    let a = t.operator(Element::A);
    let b = t.operator(Element::B);
    let c = t.operator(Element::C);
    let d = t.operator(Element::D);
    let np = number_plus();
    let nm = number_minus();
    let eps = NormalOp::constant(LaurentPoly::int(t.n() as i64));
    let half_delta = NormalOp::constant(LaurentPoly::frac(1, 2, 1, 0));
    let c_minus_b = half_delta.mul(&c.sub(&b));
    let d_minus_a = half_delta.mul(&d.sub(&a));

    let eq1 = a.mul(&np).sub(&nm.mul(&a)).add(&c_minus_b);
    let eq2 = np.mul(&d).sub(&d.mul(&nm)).add(&c_minus_b);
    let eq3 = b.mul(&nm).sub(&nm.mul(&b)).sub(&eps.mul(&b)).add(&d_minus_a);
    let eq4 = np.mul(&c).sub(&c.mul(&np)).sub(&eps.mul(&c)).add(&d_minus_a);

    let bias = Rational::from_integer(t.n().into());
    let q = t.q_matrix();
    let intertwiner = q.mat_mul(&hamiltonian(&bias)).mat_sub(&hamiltonian_tilde(&bias).mat_mul(&q));

    DefiningReport {
        n: t.n(),
        equations: vec![
            EquationCheck { name: "eq-A", statement: "A n+ - n- A + (D/2)(C - B) = 0", residual: eq1 },
            EquationCheck { name: "eq-D", statement: "n+ D - D n- + (D/2)(C - B) = 0", residual: eq2 },
            EquationCheck { name: "eq-B", statement: "[B, n-] - eps B + (D/2)(D - A) = 0", residual: eq3 },
            EquationCheck { name: "eq-C", statement: "[n+, C] - eps C + (D/2)(D - A) = 0", residual: eq4 },
        ],
        intertwiner_zero: intertwiner.is_zero(),
    }
}

#[derive(Debug, Clone)]
pub struct ClosedFormCheck {
    pub element: Element,
    /// k in level N − k.
    pub depth: u32,
    pub i: u32,
    pub expected: LaurentPoly,
    pub actual: LaurentPoly,
}

impl ClosedFormCheck {
    pub fn passed(&self) -> bool {
        self.expected == self.actual
    }
}

#[derive(Debug, Clone)]
pub struct ClosedFormReport {
    pub n: u32,
    pub checks: Vec<ClosedFormCheck>,
}

impl ClosedFormReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(ClosedFormCheck::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ClosedFormCheck> {
        self.checks.iter().filter(|c| !c.passed())
    }
}

fn alt(i: i64) -> i64 {
    if i % 2 == 0 {
        1
    } else {
        -1
    }
}

fn poly(num: i64, den: i64, dp: u32, gp: i32) -> LaurentPoly {
    LaurentPoly::frac(num, den, dp, gp)
}

/// Closed-form value of `element` at (i, N−k−i), for the depths k = 0…4
/// where one is known. Depth-0 and depth-1 forms come straight from the top
/// of the recursion; the deeper ones are the summarized iteration results.
pub fn closed_form(element: Element, n: u32, depth: u32, i: u32) -> Option<LaurentPoly> {
    let n = n as i64;
    let i = i as i64;
    let s = alt(i);
    let v = match (element, depth) {
        (Element::A | Element::D, 0) => LaurentPoly::zero(),
        (Element::B, 0) => {
            if i == 0 {
                LaurentPoly::one()
            } else {
                LaurentPoly::zero()
            }
        }
        (Element::D, 1) => poly(s, 4, 1, -1),
        (Element::B, 1) | (Element::B, 3) => LaurentPoly::zero(),
        (Element::B, 2) => poly(s * (n - i - 1), 16, 2, -2),
        (Element::D, 2) => poly(s * (n - i - 1) * (i + 1), 8, 1, -2),
        (Element::D, 3) => {
            let inner = poly((n - i - 1) * (i + 2), 32, 1, -3) + poly(1, 64, 3, -3);
            inner.scale(&rat(s * (n - i - 2) * (i + 1), 1))
        }
        (Element::B, 4) => {
            let first = poly((n - i - 3) * (n - i - 2) * (n - i - 1) * (i + 1) * (i + 3), 384, 2, -4);
            let second = (poly(1, 512, 4, -4) - poly(1, 32, 2, -2)).scale_int((n - i - 3) * (n - i - 2) * (i + 1));
            (first + second).scale_int(s)
        }
        (Element::D, 4) => {
            let inner = poly((n - i - 1) * (i + 3), 192, 1, -4) + poly(1, 256, 3, -4);
            inner.scale_int(s * (n - i - 3) * (i + 2) * (n - i - 2) * (i + 1))
        }
        _ => return None,
    };
    Some(v)
}

/// Compares every level N, N−1, …, N−4 that exists against its closed form.
pub fn verify_closed_forms(t: &CoeffTables) -> ClosedFormReport {
    let n = t.n();
    let mut checks = Vec::new();
    for depth in 0..=4u32.min(n) {
        let level = n - depth;
        let elements: &[Element] = if depth == 0 {
            &[Element::A, Element::B, Element::D]
        } else {
            &[Element::B, Element::D]
        };
        for &element in elements {
            for i in 0..=level {
                let expected = closed_form(element, n, depth, i).expect("closed form defined for depth <= 4");
                let actual = t.at(element, i as i64, (level - i) as i64);
                checks.push(ClosedFormCheck { element, depth, i, expected, actual });
            }
        }
    }
    ClosedFormReport { n, checks }
}
