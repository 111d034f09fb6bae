//! Parameter scans of the low-lying spectrum with level-crossing detection.
//!
//! Minima of the gap between adjacent sorted levels are located on the grid,
//! refined by golden-section search on the gap inside the neighbouring grid
//! cells, and classified. A true crossing closes the gap below `gap_tol` and
//! joins two states of opposite parity; anything else is avoided. In gap-only
//! mode (non-integer bias, no symmetry operator) the gap alone decides.

use crate::par::Execution;
use crate::solver::CoeffTables;

use super::spectrum::{
    diagonalize, eigenvalues, fit_j_squared_from, parity_labels_from, FitOptions, Parity, ParityOptions,
};
use super::{build_j, hamiltonian_matrix, NumericError, TruncParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    /// Scan the coupling g.
    Coupling,
    /// Scan the qubit splitting Δ.
    Splitting,
}

impl Axis {
    pub fn name(self) -> &'static str {
        match self {
            Axis::Coupling => "g",
            Axis::Splitting => "delta",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisSpec {
    pub axis: Axis,
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

impl AxisSpec {
    pub fn coupling(lo: f64, hi: f64, steps: usize) -> Self {
        Self { axis: Axis::Coupling, lo, hi, steps }
    }

    pub fn points(&self) -> Vec<f64> {
        let span = self.hi - self.lo;
        (0..self.steps)
            .map(|k| self.lo + span * k as f64 / (self.steps - 1) as f64)
            .collect()
    }
}

/// What is scanned: the integer-bias model with its symmetry operator, or
/// any real bias classified by gap only.
#[derive(Debug, Clone, Copy)]
pub enum ScanModel<'a> {
    Symmetric(&'a CoeffTables),
    GapOnly { bias: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanOptions {
    /// Lowest K levels reported and searched for crossings.
    pub levels: usize,
    pub gap_tol: f64,
    /// Parameter tolerance of the golden-section refinement.
    pub param_tol: f64,
    pub fit: FitOptions,
    pub parity: ParityOptions,
    pub exec: Execution,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self {
            levels: 10,
            gap_tol: 1e-8,
            param_tol: 1e-12,
            fit: FitOptions::default(),
            parity: ParityOptions::default(),
            exec: Execution::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    TrueCrossing,
    Avoided,
}

impl Classification {
    pub fn name(self) -> &'static str {
        match self {
            Classification::TrueCrossing => "true-crossing",
            Classification::Avoided => "avoided",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossing {
    /// Refined parameter value.
    pub value: f64,
    pub levels: (usize, usize),
    pub gap: f64,
    pub classification: Classification,
    /// Labels of the two levels at the refined point (symmetric mode only).
    pub parities: Option<(Parity, Parity)>,
}

#[derive(Debug, Clone)]
pub struct SpectrumScan {
    pub axis: Axis,
    pub points: Vec<f64>,
    /// `energies[m][k]`: level k at grid point m, ascending in k.
    pub energies: Vec<Vec<f64>>,
    pub parities: Vec<Vec<Parity>>,
    pub crossings: Vec<Crossing>,
}

impl SpectrumScan {
    pub fn true_crossings(&self) -> impl Iterator<Item = &Crossing> {
        self.crossings
            .iter()
            .filter(|c| c.classification == Classification::TrueCrossing)
    }
}

struct Scanner<'a> {
    model: ScanModel<'a>,
    base: TruncParams,
    axis: Axis,
    opts: ScanOptions,
}

impl Scanner<'_> {
    fn params_at(&self, x: f64) -> TruncParams {
        match self.axis {
            Axis::Coupling => self.base.with_point(self.base.delta, x),
            Axis::Splitting => self.base.with_point(x, self.base.g),
        }
    }

    fn bias(&self) -> f64 {
        match self.model {
            ScanModel::Symmetric(t) => t.n() as f64,
            ScanModel::GapOnly { bias } => bias,
        }
    }

    fn gap(&self, x: f64, k: usize) -> f64 {
        let p = self.params_at(x);
        let ev = eigenvalues(&hamiltonian_matrix(p.dim, p.delta, p.g, self.bias()));
        ev[k + 1] - ev[k]
    }

    /// Energies and labels of the lowest `levels` states at `x`.
    fn evaluate(&self, x: f64, levels: usize) -> Result<(Vec<f64>, Vec<Parity>), NumericError> {
        let p = self.params_at(x);
        let h = hamiltonian_matrix(p.dim, p.delta, p.g, self.bias());
        match self.model {
            ScanModel::GapOnly { .. } => {
                let ev = eigenvalues(&h);
                Ok((ev[..levels].to_vec(), vec![Parity::Undefined; levels]))
            }
            ScanModel::Symmetric(tables) => {
                let spec = diagonalize(&h);
                let j = build_j(tables, &p)?;
                let fit = fit_j_squared_from(&spec, &j, &p, &self.opts.fit)?;
                let popts = ParityOptions { levels, ..self.opts.parity };
                let labels = parity_labels_from(&spec, &j, &fit, &popts);
                Ok((
                    spec.energies[..levels].to_vec(),
                    labels.into_iter().map(|s| s.label).collect(),
                ))
            }
        }
    }

    /// Golden-section minimization of the gap between levels k and k+1.
    fn refine(&self, k: usize, mut a: f64, mut b: f64) -> (f64, f64) {
        let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
        let mut c = b - inv_phi * (b - a);
        let mut d = a + inv_phi * (b - a);
        let mut fc = self.gap(c, k);
        let mut fd = self.gap(d, k);
        while (b - a).abs() > self.opts.param_tol {
            if fc < fd {
                b = d;
                d = c;
                fd = fc;
                c = b - inv_phi * (b - a);
                fc = self.gap(c, k);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + inv_phi * (b - a);
                fd = self.gap(d, k);
            }
        }
        if fc < fd {
            (c, fc)
        } else {
            (d, fd)
        }
    }

    fn classify(&self, k: usize, value: f64, gap: f64) -> Result<Crossing, NumericError> {
        let closed = gap < self.opts.gap_tol;
        let (classification, parities) = match self.model {
            ScanModel::GapOnly { .. } => (closed, None),
            ScanModel::Symmetric(_) => {
                let (_, labels) = self.evaluate(value, k + 2)?;
                let pair = (labels[k], labels[k + 1]);
                (closed && pair.0.opposite(pair.1), Some(pair))
            }
        };
        Ok(Crossing {
            value,
            levels: (k, k + 1),
            gap,
            classification: if classification { Classification::TrueCrossing } else { Classification::Avoided },
            parities,
        })
    }
}

/// Grid-local minima of each adjacent gap as (level k, grid index m).
fn gap_minima(energies: &[Vec<f64>], levels: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for k in 0..levels.saturating_sub(1) {
        let gaps: Vec<f64> = energies.iter().map(|e| e[k + 1] - e[k]).collect();
        for m in 1..gaps.len() - 1 {
            if gaps[m] < gaps[m - 1] && gaps[m] <= gaps[m + 1] {
                out.push((k, m));
            }
        }
    }
    out
}

/// Scans the lowest `opts.levels` levels along `spec`, starting from `base`
/// for the fixed parameters.
pub fn scan_crossings(
    model: ScanModel<'_>,
    base: &TruncParams,
    spec: &AxisSpec,
    opts: &ScanOptions,
) -> Result<SpectrumScan, NumericError> {
    if spec.steps < 16 {
        return Err(NumericError::InvalidParams(format!("steps = {} < 16", spec.steps)));
    }
    if !(spec.lo > 0.0 && spec.hi > spec.lo && spec.hi.is_finite()) {
        return Err(NumericError::InvalidParams(format!(
            "axis range [{}, {}] must satisfy 0 < lo < hi",
            spec.lo, spec.hi
        )));
    }
    if opts.levels < 2 || opts.levels > 2 * base.dim {
        return Err(NumericError::InvalidParams(format!("levels = {} out of range", opts.levels)));
    }
    if let ScanModel::Symmetric(t) = model {
        if t.n() != base.n {
            return Err(NumericError::BiasMismatch { tables: t.n(), params: base.n });
        }
    }
    let scanner = Scanner { model, base: *base, axis: spec.axis, opts: *opts };
    scanner.params_at(spec.lo).validate()?;

    let points = spec.points();
    let evaluated: Result<Vec<_>, _> = opts
        .exec
        .map(&points, |&x| scanner.evaluate(x, opts.levels))
        .into_iter()
        .collect();
    let (energies, parities): (Vec<_>, Vec<_>) = evaluated?.into_iter().unzip();

    let minima = gap_minima(&energies, opts.levels);
    let crossings: Result<Vec<_>, _> = opts
        .exec
        .map(&minima, |&(k, m)| {
            let (value, gap) = scanner.refine(k, points[m - 1], points[m + 1]);
            scanner.classify(k, value, gap)
        })
        .into_iter()
        .collect();
    let mut crossings = crossings?;
    crossings.sort_by(|a, b| a.value.total_cmp(&b.value).then(a.levels.cmp(&b.levels)));

    Ok(SpectrumScan { axis: spec.axis, points, energies, parities, crossings })
}
