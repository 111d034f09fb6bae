use std::fmt;

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use super::{NumericError, TruncParams, TruncatedOperator};

/// Eigenpairs of a truncated Hamiltonian, energies ascending; column k of
/// `vectors` belongs to `energies[k]`.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub energies: Vec<f64>,
    pub vectors: DMatrix<f64>,
}

pub fn diagonalize(h: &TruncatedOperator) -> Spectrum {
    let eig = SymmetricEigen::new(h.matrix().clone());
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let energies = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = DMatrix::from_fn(eig.eigenvectors.nrows(), order.len(), |r, c| eig.eigenvectors[(r, order[c])]);
    Spectrum { energies, vectors }
}

/// Sorted eigenvalues only.
pub fn eigenvalues(h: &TruncatedOperator) -> Vec<f64> {
    let mut ev: Vec<f64> = h.matrix().clone().symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

impl Spectrum {
    /// Weight of eigenvector k on Fock levels above the interior block.
    pub fn leakage(&self, k: usize, p: &TruncParams) -> f64 {
        let top = p.interior_max();
        let col = self.vectors.column(k);
        (top + 1..p.dim)
            .flat_map(|n| [col[n], col[p.dim + n]])
            .map(|v| v * v)
            .sum::<f64>()
            .sqrt()
    }

    /// Number of lowest eigenpairs, counted consecutively from the ground
    /// state, whose leakage stays below `tol`.
    pub fn interior_count(&self, p: &TruncParams, tol: f64) -> usize {
        (0..self.energies.len()).take_while(|&k| self.leakage(k, p) < tol).count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    /// Eigenpairs used; `None` means 4(N+1).
    pub count: Option<usize>,
    /// Largest acceptable condition number of the scaled Vandermonde system.
    pub condition_bound: f64,
    /// Leakage threshold that makes an eigenpair count as interior.
    pub leak_tol: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self { count: None, condition_bound: 1e10, leak_tol: 1e-10 }
    }
}

/// Coefficients x₀…x_N of J² = Σ xₙHⁿ fitted on eigenpairs.
#[derive(Debug, Clone, PartialEq)]
pub struct J2Fit {
    pub coeffs: Vec<f64>,
    pub max_rel_residual: f64,
    pub condition: f64,
    pub energies: Vec<f64>,
}

impl J2Fit {
    /// Σ xₙEⁿ
    pub fn eval(&self, e: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, x| acc * e + x)
    }
}

pub fn fit_j_squared_poly(j: &TruncatedOperator, h: &TruncatedOperator, p: &TruncParams) -> Result<J2Fit, NumericError> {
    fit_j_squared_from(&diagonalize(h), j, p, &FitOptions::default())
}

/// Least-squares fit of ⟨ψ_k|J²|ψ_k⟩ ≈ Σ xₙE_kⁿ over the lowest interior
/// eigenpairs, solved in the scaled variable E/max|E| to keep the
/// Vandermonde system well conditioned.
pub fn fit_j_squared_from(
    spec: &Spectrum,
    j: &TruncatedOperator,
    p: &TruncParams,
    opts: &FitOptions,
) -> Result<J2Fit, NumericError> {
    let unknowns = p.n as usize + 1;
    let needed = 3 * unknowns;
    let wanted = opts.count.unwrap_or(4 * unknowns).max(needed);
    let available = spec.interior_count(p, opts.leak_tol);
    if available < needed {
        return Err(NumericError::TooFewEigenpairs { needed, available });
    }
    let used = wanted.min(available);
    let energies: Vec<f64> = spec.energies[..used].to_vec();
    let targets: Vec<f64> = (0..used)
        .map(|k| {
            let psi = spec.vectors.column(k);
            let jpsi = j.matrix() * psi;
            let j2psi = j.matrix() * &jpsi;
            psi.dot(&j2psi)
        })
        .collect();

    let scale = energies.iter().fold(0.0f64, |m, e| m.max(e.abs())).max(1.0);
    let vander = DMatrix::from_fn(used, unknowns, |r, c| (energies[r] / scale).powi(c as i32));
    let svd = vander.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if condition > opts.condition_bound {
        return Err(NumericError::IllConditioned { condition, bound: opts.condition_bound });
    }
    let rhs = DVector::from_vec(targets.clone());
    let scaled = svd
        .solve(&rhs, 0.0)
        .map_err(|e| NumericError::InvalidParams(format!("least squares failed: {e}")))?;
    let coeffs: Vec<f64> = (0..unknowns).map(|n| scaled[n] / scale.powi(n as i32)).collect();

    let fit = J2Fit { coeffs, max_rel_residual: 0.0, condition, energies };
    let max_rel_residual = fit
        .energies
        .iter()
        .zip(&targets)
        .map(|(&e, &y)| (y - fit.eval(e)).abs() / y.abs().max(f64::MIN_POSITIVE))
        .fold(0.0, f64::max);
    Ok(J2Fit { max_rel_residual, ..fit })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
    Undefined,
}

impl Parity {
    pub fn sign(self) -> Option<i8> {
        match self {
            Parity::Even => Some(1),
            Parity::Odd => Some(-1),
            Parity::Undefined => None,
        }
    }

    /// Both defined and different.
    pub fn opposite(self, other: Parity) -> bool {
        matches!((self, other), (Parity::Even, Parity::Odd) | (Parity::Odd, Parity::Even))
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "+1",
            Parity::Odd => "-1",
            Parity::Undefined => "undefined",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParityOptions {
    /// Number of lowest eigenstates to label.
    pub levels: usize,
    /// Below this |Σ xₙEⁿ| the normalized parity is undefined.
    pub guard: f64,
    /// Defined labels need |⟨ψ|Π|ψ⟩| within this of 1.
    pub tol: f64,
    /// Energies closer than this are treated as one degenerate cluster and
    /// re-diagonalized with respect to J.
    pub cluster_tol: f64,
}

impl Default for ParityOptions {
    fn default() -> Self {
        Self { levels: 10, guard: 1e-8, tol: 1e-6, cluster_tol: 1e-6 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParityState {
    pub energy: f64,
    /// ⟨ψ|J|ψ⟩ / √(Σ xₙEⁿ); NaN when the denominator is guarded out.
    pub value: f64,
    pub label: Parity,
}

pub fn parity_labels(
    j: &TruncatedOperator,
    h: &TruncatedOperator,
    p: &TruncParams,
    fit: &J2Fit,
) -> Vec<ParityState> {
    let spec = diagonalize(h);
    let defaults = ParityOptions::default();
    let opts = ParityOptions {
        levels: defaults.levels.min(spec.interior_count(p, FitOptions::default().leak_tol)),
        ..defaults
    };
    parity_labels_from(&spec, j, fit, &opts)
}

/// Labels the lowest `opts.levels` eigenstates by the sign of
/// ⟨ψ|Π|ψ⟩ with Π = J/√(Σ xₙEⁿ). Inside a degenerate cluster the eigensolver's
/// basis is arbitrary, so J is diagonalized within the cluster first.
pub fn parity_labels_from(spec: &Spectrum, j: &TruncatedOperator, fit: &J2Fit, opts: &ParityOptions) -> Vec<ParityState> {
    let levels = opts.levels.min(spec.energies.len());
    let mut out = Vec::with_capacity(levels);
    let mut start = 0;
    while start < levels {
        let mut end = start + 1;
        while end < spec.energies.len() && spec.energies[end] - spec.energies[end - 1] < opts.cluster_tol {
            end += 1;
        }
        let basis = spec.vectors.columns(start, end - start).into_owned();
        let jb = j.matrix() * &basis;
        let mut small = basis.transpose() * &jb;
        small = (&small + small.transpose()) * 0.5;
        let values: Vec<f64> = if end - start == 1 {
            vec![small[(0, 0)]]
        } else {
            let mut v: Vec<f64> = SymmetricEigen::new(small).eigenvalues.iter().copied().collect();
            v.sort_by(f64::total_cmp);
            v
        };
        for (offset, jval) in values.into_iter().enumerate() {
            let k = start + offset;
            if k >= levels {
                break;
            }
            let energy = spec.energies[k];
            let denom = fit.eval(energy);
            let (value, label) = if denom.abs() < opts.guard || denom < 0.0 {
                (f64::NAN, Parity::Undefined)
            } else {
                let v = jval / denom.sqrt();
                let label = if (v.abs() - 1.0).abs() > opts.tol {
                    Parity::Undefined
                } else if v > 0.0 {
                    Parity::Even
                } else {
                    Parity::Odd
                };
                (v, label)
            };
            out.push(ParityState { energy, value, label });
        }
        start = end;
    }
    out
}
