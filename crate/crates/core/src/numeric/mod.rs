//! Dense realization of the model on a truncated Fock ⊗ qubit space.
//!
//! All matrices live in the rotated frame where the Hamiltonian reads
//! `[[a†a + g(a†+a) + ε/2, −Δ/2], [−Δ/2, a†a − g(a†+a) − ε/2]]` (ω = 1), so
//! every operator involved is real. Basis index = qubit_block·dim + fock_level.
//!
//! Normal-ordered monomials (a₊†)^i (a₋)^j are realized exactly: a product of
//! a lower-triangular and an upper-triangular truncated factor never touches
//! states beyond the cutoff. Products of realized operators are only exact
//! away from the cutoff, which is why all norms are taken on the interior
//! block (fock_level ≤ dim − margin in both qubit blocks).

mod export;
mod scan;
mod spectrum;

use nalgebra::DMatrix;
use thiserror::Error;

use crate::boson::NormalOp;
use crate::par::Execution;
use crate::ring::RingError;
use crate::solver::{CoeffTables, Element};

pub use export::{crossings_json, spectrum_csv};
pub use scan::{
    scan_crossings, Axis, AxisSpec, Classification, Crossing, ScanModel, ScanOptions, SpectrumScan,
};
pub use spectrum::{
    diagonalize, eigenvalues, fit_j_squared_from, fit_j_squared_poly, parity_labels, parity_labels_from,
    FitOptions, J2Fit, Parity, ParityOptions, ParityState, Spectrum,
};

pub const DEFAULT_DIM: usize = 120;
pub const DEFAULT_EXTRA_MARGIN: usize = 6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericError {
    #[error("invalid truncation parameters: {0}")]
    InvalidParams(String),
    #[error("J^2 fit is ill-conditioned: condition number {condition:.3e} exceeds {bound:.3e}")]
    IllConditioned { condition: f64, bound: f64 },
    #[error("need at least {needed} interior eigenpairs, only {available} available")]
    TooFewEigenpairs { needed: usize, available: usize },
    #[error("tables are for N = {tables} but parameters ask for N = {params}")]
    BiasMismatch { tables: u32, params: u32 },
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// Truncation and model parameters for one numeric evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncParams {
    /// Fock-space cutoff per qubit block.
    pub dim: usize,
    /// Guard band: Fock levels above `dim - margin` are excluded from norms.
    pub margin: usize,
    pub delta: f64,
    pub g: f64,
    /// Integer bias ε = N.
    pub n: u32,
}

impl TruncParams {
    /// Defaults: dim = 120, margin = N + 6.
    pub fn new(n: u32, delta: f64, g: f64) -> Self {
        Self {
            dim: DEFAULT_DIM,
            margin: n as usize + DEFAULT_EXTRA_MARGIN,
            delta,
            g,
            n,
        }
    }

    pub fn with_dim(mut self, dim: usize) -> Self {
        self.dim = dim;
        self
    }

    pub fn with_margin(mut self, margin: usize) -> Self {
        self.margin = margin;
        self
    }

    pub fn with_point(mut self, delta: f64, g: f64) -> Self {
        self.delta = delta;
        self.g = g;
        self
    }

    pub fn validate(&self) -> Result<(), NumericError> {
        let bad = |m: String| Err(NumericError::InvalidParams(m));
        if self.dim < 8 {
            return bad(format!("dim = {} < 8", self.dim));
        }
        if self.margin < self.n as usize + 2 {
            return bad(format!("margin = {} < N + 2 = {}", self.margin, self.n + 2));
        }
        if 2 * self.margin >= self.dim {
            return bad(format!("margin = {} must be below dim/2 = {}", self.margin, self.dim / 2));
        }
        if !(self.delta.is_finite() && self.delta > 0.0) {
            return bad(format!("Delta = {} must be finite and > 0", self.delta));
        }
        if !(self.g.is_finite() && self.g > 0.0) {
            return bad(format!("g = {} must be finite and > 0", self.g));
        }
        Ok(())
    }

    /// Highest Fock level inside the interior block.
    pub fn interior_max(&self) -> usize {
        self.dim - self.margin
    }

    /// Basis indices of the interior block, both qubit blocks.
    pub fn interior_indices(&self) -> Vec<usize> {
        let top = self.interior_max();
        (0..=top).chain((0..=top).map(|n| self.dim + n)).collect()
    }
}

/// Dense real operator on the 2·dim dimensional qubit ⊗ Fock space.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedOperator {
    dim: usize,
    matrix: DMatrix<f64>,
}

impl TruncatedOperator {
    pub fn from_matrix(dim: usize, matrix: DMatrix<f64>) -> Self {
        assert_eq!(matrix.nrows(), 2 * dim);
        assert_eq!(matrix.ncols(), 2 * dim);
        Self { dim, matrix }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.matrix
    }

    /// Restriction to the interior block.
    pub fn interior(&self, p: &TruncParams) -> DMatrix<f64> {
        interior_block(&self.matrix, p)
    }

    /// Frobenius norm of the interior block.
    pub fn interior_norm(&self, p: &TruncParams) -> f64 {
        self.interior(p).norm()
    }

    pub fn is_finite(&self) -> bool {
        self.matrix.iter().all(|v| v.is_finite())
    }
}

pub fn interior_block(m: &DMatrix<f64>, p: &TruncParams) -> DMatrix<f64> {
    let idx = p.interior_indices();
    DMatrix::from_fn(idx.len(), idx.len(), |r, c| m[(idx[r], idx[c])])
}

/// Truncated lowering matrix, L[n−1, n] = √n.
pub fn lowering(dim: usize) -> DMatrix<f64> {
    let mut l = DMatrix::zeros(dim, dim);
    for n in 1..dim {
        l[(n - 1, n)] = (n as f64).sqrt();
    }
    l
}

/// Realizes Σ c_{i,j}(Δ,g)·(a₊†)^i (a₋)^j with a₊† ↦ L† + g and a₋ ↦ L − g.
pub fn realize(x: &NormalOp, dim: usize, delta: f64, g: f64) -> Result<DMatrix<f64>, NumericError> {
    let (max_i, max_j) = x
        .terms()
        .fold((0, 0), |(mi, mj), ((i, j), _)| (mi.max(i as usize), mj.max(j as usize)));
    let eye = DMatrix::<f64>::identity(dim, dim);
    let l = lowering(dim);
    let raise = l.transpose() + &eye * g;
    let lower = l - &eye * g;
    let powers = |m: &DMatrix<f64>, k: usize| {
        let mut out = Vec::with_capacity(k + 1);
        out.push(eye.clone());
        for t in 1..=k {
            out.push(&out[t - 1] * m);
        }
        out
    };
    let raise_pow = powers(&raise, max_i);
    let lower_pow = powers(&lower, max_j);
    let mut out = DMatrix::zeros(dim, dim);
    for ((i, j), c) in x.terms() {
        let v = c.eval(delta, g)?;
        out += (&raise_pow[i as usize] * &lower_pow[j as usize]) * v;
    }
    Ok(out)
}

/// Hamiltonian in the rotated frame for an arbitrary real bias ε.
pub fn hamiltonian_matrix(dim: usize, delta: f64, g: f64, bias: f64) -> TruncatedOperator {
    let mut h = DMatrix::zeros(2 * dim, 2 * dim);
    for (block, s) in [(0usize, 1.0f64), (1, -1.0)] {
        let o = block * dim;
        for n in 0..dim {
            h[(o + n, o + n)] = n as f64 + s * bias / 2.0;
            if n + 1 < dim {
                let c = s * g * ((n + 1) as f64).sqrt();
                h[(o + n, o + n + 1)] = c;
                h[(o + n + 1, o + n)] = c;
            }
        }
    }
    for n in 0..dim {
        h[(n, dim + n)] = -delta / 2.0;
        h[(dim + n, n)] = -delta / 2.0;
    }
    TruncatedOperator::from_matrix(dim, h)
}

/// Hamiltonian at bias ε = N.
pub fn build_h(p: &TruncParams) -> TruncatedOperator {
    hamiltonian_matrix(p.dim, p.delta, p.g, p.n as f64)
}

/// J = e^{iπa†a}·Q, with the Fock parity diag((−1)^n) applied to every block row.
pub fn build_j(tables: &CoeffTables, p: &TruncParams) -> Result<TruncatedOperator, NumericError> {
    if tables.n() != p.n {
        return Err(NumericError::BiasMismatch { tables: tables.n(), params: p.n });
    }
    let dim = p.dim;
    let mut j = DMatrix::zeros(2 * dim, 2 * dim);
    let blocks = [
        (0, 0, Element::A),
        (0, 1, Element::B),
        (1, 0, Element::C),
        (1, 1, Element::D),
    ];
    for (r, c, e) in blocks {
        let m = realize(&tables.operator(e), dim, p.delta, p.g)?;
        for row in 0..dim {
            let sign = if row % 2 == 0 { 1.0 } else { -1.0 };
            for col in 0..dim {
                j[(r * dim + row, c * dim + col)] = sign * m[(row, col)];
            }
        }
    }
    Ok(TruncatedOperator::from_matrix(dim, j))
}

/// ‖P(JH − HJ)P‖_F with P the interior projector.
pub fn interior_commutator_norm(j: &TruncatedOperator, h: &TruncatedOperator, p: &TruncParams) -> f64 {
    let jh = j.matrix() * h.matrix();
    let hj = h.matrix() * j.matrix();
    interior_block(&(jh - hj), p).norm()
}

/// Interior norm of J² − Σ xₙHⁿ.
pub fn j_squared_residual_norm(
    j: &TruncatedOperator,
    h: &TruncatedOperator,
    p: &TruncParams,
    coeffs: &[f64],
) -> f64 {
    let j2 = j.matrix() * j.matrix();
    let size = 2 * p.dim;
    let mut poly = DMatrix::zeros(size, size);
    let mut hp = DMatrix::<f64>::identity(size, size);
    for (k, x) in coeffs.iter().enumerate() {
        if k > 0 {
            hp = &hp * h.matrix();
        }
        poly += &hp * *x;
    }
    interior_block(&(j2 - poly), p).norm()
}

/// Commutator check at one parameter point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CommutationCheck {
    pub params: TruncParams,
    pub commutator_norm: f64,
    pub j_norm: f64,
    pub h_norm: f64,
}

impl CommutationCheck {
    /// commutator_norm / (‖J‖·‖H‖), all on the interior block.
    pub fn relative(&self) -> f64 {
        self.commutator_norm / (self.j_norm * self.h_norm)
    }
}

pub fn check_commutation(tables: &CoeffTables, p: &TruncParams) -> Result<CommutationCheck, NumericError> {
    p.validate()?;
    let h = build_h(p);
    let j = build_j(tables, p)?;
    Ok(CommutationCheck {
        params: *p,
        commutator_norm: interior_commutator_norm(&j, &h, p),
        j_norm: j.interior_norm(p),
        h_norm: h.interior_norm(p),
    })
}

/// Commutation checks over a grid of parameter points, each with the tables
/// for its own bias. `tables` must contain an entry for every N in `points`.
pub fn commutation_sweep(
    tables: &[CoeffTables],
    points: &[TruncParams],
    exec: Execution,
) -> Result<Vec<CommutationCheck>, NumericError> {
    exec.map(points, |p| {
        let t = tables
            .iter()
            .find(|t| t.n() == p.n)
            .ok_or(NumericError::BiasMismatch { tables: u32::MAX, params: p.n })?;
        check_commutation(t, p)
    })
    .into_iter()
    .collect()
}
