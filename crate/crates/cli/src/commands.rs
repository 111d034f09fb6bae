use std::io::Write;
use std::path::Path;

use aqrm_core::numeric::{
    build_h, build_j, check_commutation, crossings_json, fit_j_squared_poly, scan_crossings, spectrum_csv, AxisSpec,
    Classification, NumericError, ScanModel, ScanOptions, TruncParams, DEFAULT_DIM, DEFAULT_EXTRA_MARGIN,
};
use aqrm_core::solver::{
    tables_from_json, tables_to_json, tables_to_latex, verify_closed_forms, verify_defining_equations,
};
use aqrm_core::{build_tables, CoeffTables, Execution};
use serde::Serialize;
use serde_json::json;

use crate::settings::{pick, require, ConfigFile, EnvDefaults, Layers};
use crate::{Cli, CliError, Command, CoeffsArgs, FitArgs, ModeArg, PointArgs, ReportArg, ScanArgs, TableFormatArg, VerifyArgs};

const DEFAULT_COMM_TOL: f64 = 1e-10;
const DEFAULT_FIT_TOL: f64 = 1e-8;
const DEFAULT_GAP_TOL: f64 = 1e-8;

pub fn run(cli: Cli) -> Result<(), CliError> {
    let layers = Layers { config: ConfigFile::load(cli.config.as_deref())?, env: EnvDefaults::from_env()? };
    match cli.command {
        Command::Coeffs(a) => coeffs(&a),
        Command::Verify(a) => verify(&a, &layers),
        Command::FitJ2(a) => fit_j2(&a, &layers),
        Command::Scan(a) => scan(&a, &layers),
    }
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Failed(format!("cannot write {}: {e}", p.display()))),
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Failed(format!("cannot write to stdout: {e}"))),
    }
}

fn build(n: u32) -> Result<CoeffTables, CliError> {
    build_tables(n).map_err(|e| CliError::Failed(format!("tables for N = {n} are inconsistent: {e}")))
}

fn numeric_error(e: NumericError) -> CliError {
    match e {
        NumericError::InvalidParams(_) | NumericError::BiasMismatch { .. } | NumericError::Ring(_) => {
            CliError::Usage(e.to_string())
        }
        NumericError::IllConditioned { .. } | NumericError::TooFewEigenpairs { .. } => CliError::Failed(e.to_string()),
    }
}

fn positive(name: &str, v: f64) -> Result<f64, CliError> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(CliError::Usage(format!("--{name} must be a finite number > 0, got {v}")))
    }
}

fn params(n: u32, point: &PointArgs, layers: &Layers) -> Result<TruncParams, CliError> {
    let c = &layers.config;
    let delta = positive("delta", require(point.delta, c.delta, "delta")?)?;
    let g = positive("g", require(point.g, c.g, "g")?)?;
    let dim = pick(point.dim, c.dim, layers.env.dim, DEFAULT_DIM);
    let margin = pick(point.margin, c.margin, None, n as usize + DEFAULT_EXTRA_MARGIN);
    let p = TruncParams::new(n, delta, g).with_dim(dim).with_margin(margin);
    p.validate().map_err(numeric_error)?;
    Ok(p)
}

fn coeffs(a: &CoeffsArgs) -> Result<(), CliError> {
    let t = build(a.n)?;
    let text = match a.format {
        TableFormatArg::Json => tables_to_json(&t),
        TableFormatArg::Latex => tables_to_latex(&t),
    };
    write_output(a.out.as_deref(), &text)
}

fn load_tables(a: &VerifyArgs) -> Result<CoeffTables, CliError> {
    match (&a.tables, a.n) {
        (Some(path), n) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
            let t = tables_from_json(&text)
                .map_err(|e| CliError::Usage(format!("{} is not a table file: {e}", path.display())))?;
            if let Some(n) = n.filter(|&n| n != t.n()) {
                return Err(CliError::Usage(format!("--n {n} disagrees with N = {} in {}", t.n(), path.display())));
            }
            Ok(t)
        }
        (None, Some(n)) => build(n),
        (None, None) => Err(CliError::Usage("either --n or --tables is required".into())),
    }
}

fn print_report(kind: ReportArg, text: String, value: serde_json::Value) -> Result<(), CliError> {
    let out = match kind {
        ReportArg::Text => text,
        ReportArg::Json => serde_json::to_string_pretty(&value).expect("report serializes") + "\n",
    };
    write_output(None, &out)
}

fn verify(a: &VerifyArgs, layers: &Layers) -> Result<(), CliError> {
    match a.mode {
        ModeArg::Symbolic => verify_symbolic(a),
        ModeArg::Numeric => verify_numeric(a, layers),
    }
}

fn verify_symbolic(a: &VerifyArgs) -> Result<(), CliError> {
    let t = load_tables(a)?;
    let defining = verify_defining_equations(&t);
    let closed = verify_closed_forms(&t);
    let invariants = t.invariant_violations();
    let passed = defining.all_passed() && closed.all_passed() && invariants.is_empty();

    let mut text = format!("symbolic verification, N = {}\n", t.n());
    for eq in &defining.equations {
        text.push_str(&format!("  {}  {}  {}\n", eq.name, if eq.passed() { "pass" } else { "FAIL" }, eq.statement));
        if !eq.passed() {
            text.push_str(&format!("      nonzero monomials (i, j): {:?}\n", eq.offending()));
        }
    }
    text.push_str(&format!("  QH - H~Q = 0  {}\n", if defining.intertwiner_zero { "pass" } else { "FAIL" }));
    let failed: Vec<String> = closed
        .failures()
        .map(|f| format!("{}[i={}] at level N-{}", f.element, f.i, f.depth))
        .collect();
    text.push_str(&format!(
        "  closed forms  {}  ({} checked)\n",
        if failed.is_empty() { "pass" } else { "FAIL" },
        closed.checks.len()
    ));
    for f in &failed {
        text.push_str(&format!("      mismatch {f}\n"));
    }
    text.push_str(&format!("  invariants  {}\n", if invariants.is_empty() { "pass" } else { "FAIL" }));
    for v in &invariants {
        text.push_str(&format!("      {v}\n"));
    }
    text.push_str(if passed { "result: pass\n" } else { "result: FAIL\n" });

    let value = json!({
        "mode": "symbolic",
        "N": t.n(),
        "passed": passed,
        "equations": defining.equations.iter().map(|e| json!({
            "name": e.name,
            "statement": e.statement,
            "passed": e.passed(),
            "offending": e.offending(),
        })).collect::<Vec<_>>(),
        "intertwiner_zero": defining.intertwiner_zero,
        "closed_forms": { "checked": closed.checks.len(), "failed": failed },
        "invariant_violations": invariants,
    });
    print_report(a.report, text, value)?;
    if passed {
        Ok(())
    } else {
        Err(CliError::Failed(format!("symbolic verification failed for N = {}", t.n())))
    }
}

fn verify_numeric(a: &VerifyArgs, layers: &Layers) -> Result<(), CliError> {
    let n = a.n.or_else(|| a.tables.as_ref().map(|_| 0)).unwrap_or(0);
    // validate parameters before any table work, so bad input is a usage error
    let p0 = params(n, &a.point, layers)?;
    let t = load_tables(a)?;
    let p = if t.n() == n { p0 } else { params(t.n(), &a.point, layers)? };
    let tol = pick(a.comm_tol, layers.config.comm_tol, layers.env.comm_tol, DEFAULT_COMM_TOL);
    let c = check_commutation(&t, &p).map_err(numeric_error)?;
    let passed = c.relative() < tol;
    let text = format!(
        "numeric verification, N = {}, delta = {}, g = {}, dim = {}, margin = {}\n  \
         ||[J,H]|| = {:e}\n  ||J|| = {:e}\n  ||H|| = {:e}\n  relative = {:e} (tolerance {:e})\nresult: {}\n",
        p.n,
        p.delta,
        p.g,
        p.dim,
        p.margin,
        c.commutator_norm,
        c.j_norm,
        c.h_norm,
        c.relative(),
        tol,
        if passed { "pass" } else { "FAIL" }
    );
    let value = json!({
        "mode": "numeric",
        "N": p.n,
        "delta": p.delta,
        "g": p.g,
        "dim": p.dim,
        "margin": p.margin,
        "commutator_norm": c.commutator_norm,
        "j_norm": c.j_norm,
        "h_norm": c.h_norm,
        "relative": c.relative(),
        "tolerance": tol,
        "passed": passed,
    });
    print_report(a.report, text, value)?;
    if passed {
        Ok(())
    } else {
        Err(CliError::Failed(format!("commutator {:e} exceeds tolerance {tol:e}", c.relative())))
    }
}

#[derive(Serialize)]
struct CoefficientCheck {
    fitted: f64,
    expected: f64,
    error: f64,
}

fn fit_j2(a: &FitArgs, layers: &Layers) -> Result<(), CliError> {
    let p = params(a.n, &a.point, layers)?;
    let t = build(a.n)?;
    let h = build_h(&p);
    let j = build_j(&t, &p).map_err(numeric_error)?;
    let fit = fit_j_squared_poly(&j, &h, &p).map_err(numeric_error)?;
    let tol = pick(a.fit_tol, layers.config.fit_tol, None, DEFAULT_FIT_TOL);
    let k = a.n as usize;
    let lead = fit.coeffs[k];
    let leading = CoefficientCheck { fitted: lead, expected: 1.0, error: (lead - 1.0).abs() };
    let next = (k > 0).then(|| {
        let expected = a.n as f64 * (p.g * p.g + 0.5 + p.delta * p.delta / (16.0 * p.g * p.g));
        let fitted = fit.coeffs[k - 1];
        CoefficientCheck { fitted, expected, error: (fitted - expected).abs() / expected }
    });
    let passed = leading.error < tol && next.as_ref().is_none_or(|c| c.error < tol);

    let mut text = format!(
        "J^2 fit, N = {}, delta = {}, g = {}, dim = {}, eigenpairs = {}\n",
        a.n,
        p.delta,
        p.g,
        p.dim,
        fit.energies.len()
    );
    for (i, x) in fit.coeffs.iter().enumerate() {
        text.push_str(&format!("  x{i} = {x}\n"));
    }
    text.push_str(&format!("  max relative residual = {:e}\n  condition = {:e}\n", fit.max_rel_residual, fit.condition));
    text.push_str(&format!("  x_N: fitted {} expected 1 (abs error {:e})\n", leading.fitted, leading.error));
    if let Some(c) = &next {
        text.push_str(&format!(
            "  x_(N-1): fitted {} expected {} (rel error {:e})\n",
            c.fitted, c.expected, c.error
        ));
    }
    text.push_str(if passed { "result: pass\n" } else { "result: FAIL\n" });
    let value = json!({
        "N": a.n,
        "delta": p.delta,
        "g": p.g,
        "dim": p.dim,
        "coeffs": fit.coeffs,
        "max_rel_residual": fit.max_rel_residual,
        "condition": fit.condition,
        "leading": leading,
        "next": next,
        "tolerance": tol,
        "passed": passed,
    });
    print_report(a.report, text, value)?;
    if passed {
        Ok(())
    } else {
        Err(CliError::Failed("fitted leading coefficients disagree with their closed forms".into()))
    }
}

fn scan(a: &ScanArgs, layers: &Layers) -> Result<(), CliError> {
    let c = &layers.config;
    let delta = positive("delta", require(a.delta, c.delta, "delta")?)?;
    let lo = positive("g-lo", require(a.g_lo, c.g_lo, "g-lo")?)?;
    let hi = positive("g-hi", require(a.g_hi, c.g_hi, "g-hi")?)?;
    if hi <= lo {
        return Err(CliError::Usage(format!("--g-hi ({hi}) must exceed --g-lo ({lo})")));
    }
    let steps = pick(a.steps, c.steps, None, 64);
    let levels = pick(a.levels, c.levels, None, 10);
    let dim = pick(a.dim, c.dim, layers.env.dim, DEFAULT_DIM);
    let gap_tol = pick(a.gap_tol, c.gap_tol, layers.env.gap_tol, DEFAULT_GAP_TOL);
    if let Some(b) = a.bias.filter(|b| !b.is_finite()) {
        return Err(CliError::Usage(format!("--bias must be finite, got {b}")));
    }
    let n = a.n.unwrap_or(0);
    let margin = pick(a.margin, c.margin, None, n as usize + DEFAULT_EXTRA_MARGIN);
    let base = TruncParams::new(n, delta, lo).with_dim(dim).with_margin(margin);
    let opts = ScanOptions {
        levels,
        gap_tol,
        exec: if a.sequential { Execution::Sequential } else { Execution::default() },
        ..ScanOptions::default()
    };
    let spec = AxisSpec::coupling(lo, hi, steps);
    let tables;
    let model = match a.n {
        Some(n) => {
            tables = build(n)?;
            ScanModel::Symmetric(&tables)
        }
        None => ScanModel::GapOnly { bias: a.bias.expect("clap enforces --n or --bias") },
    };
    let result = scan_crossings(model, &base, &spec, &opts).map_err(numeric_error)?;
    write_output(a.out_csv.as_deref(), &spectrum_csv(&result))?;
    if let Some(path) = &a.out_json {
        write_output(Some(path), &crossings_json(&result))?;
    }
    let trues = result.true_crossings().count();
    let avoided = result.crossings.iter().filter(|c| c.classification == Classification::Avoided).count();
    eprintln!("scan: {} points, {trues} true crossings, {avoided} avoided", result.points.len());
    Ok(())
}
