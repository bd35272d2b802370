//! One function per subcommand. Each only evaluates library routines and
//! lays the results out as rows.

use rayon::prelude::*;

use grazing::grazing::{w_on_ray, w_on_ray_closed, Method};
use grazing::ray_beam::{beam_field, beam_on_ray, central_ray, flow_general, hamiltonian, RayParams};
use grazing::stationary::ray_time;
use grazing::verify::{self, Suite, VerificationReport};
use grazing::Error;

use crate::table::{Cell, Table};
use crate::CliError;

/// Largest `k` accepted by the spectral route; its cost grows like `k`.
pub const SPECTRAL_K_CAP: f64 = 1e4;

/// `u`-integral needs `k >= 10` for its Airy argument scaling.
const U_INTEGRAL_K_MIN: f64 = 10.0;

fn require_positive(name: &str, values: &[f64]) -> Result<(), CliError> {
    match values.iter().find(|v| !(**v > 0.0)) {
        Some(v) => Err(CliError::Usage(format!("{name} must be positive, got {v}"))),
        None => Ok(()),
    }
}

pub fn ray_trace(ys: &[f64], params: Option<RayParams<f64>>) -> Table {
    let mut t = Table::new(&["y", "x", "t", "xi", "eta", "tau", "hamiltonian"]);
    for &y in ys {
        let p = match &params {
            Some(p0) => flow_general(p0, y),
            None => central_ray(y),
        };
        t.push(vec![
            y.into(),
            p.x.into(),
            p.t.into(),
            p.xi.into(),
            p.eta.into(),
            p.tau.into(),
            hamiltonian(&p).into(),
        ]);
    }
    t
}

pub fn beam_grid(xs: &[f64], ys: &[f64], ts: &[f64], ks: &[f64]) -> Result<Table, CliError> {
    require_positive("k", ks)?;
    let mut t = Table::new(&["x", "y", "t", "k", "re_v", "im_v", "abs_v"]);
    for &k in ks {
        for &x in xs {
            for &y in ys {
                for &tt in ts {
                    let v = beam_field(x, y, tt, k).map_err(|e| CliError::Numerical(e.to_string()))?;
                    t.push(vec![
                        x.into(),
                        y.into(),
                        tt.into(),
                        k.into(),
                        v.re.into(),
                        v.im.into(),
                        v.norm().into(),
                    ]);
                }
            }
        }
    }
    Ok(t)
}

pub fn beam_ray(xs: &[f64]) -> Result<Table, CliError> {
    if let Some(x) = xs.iter().find(|x| !(**x >= 0.0)) {
        return Err(CliError::Usage(format!("x must be non-negative, got {x}")));
    }
    let mut t = Table::new(&["x", "y", "t", "re_v", "im_v", "abs_v"]);
    for &x in xs {
        let v = beam_on_ray(x).map_err(|e| CliError::Numerical(e.to_string()))?;
        t.push(vec![
            x.into(),
            (2.0 * x.sqrt()).into(),
            ray_time(x).into(),
            v.re.into(),
            v.im.into(),
            v.norm().into(),
        ]);
    }
    Ok(t)
}

/// Default absolute tolerance of each route when `--tol` is absent.
pub fn default_tol(method: Method) -> f64 {
    match method {
        Method::UIntegral => 1e-10,
        Method::ZIntegral => 1e-8,
        Method::Spectral => 1e-3,
        Method::ClosedForm => 0.0,
    }
}

/// Rows of `graze w` and whether any cell failed numerically.
pub fn graze_w(xs: &[f64], ks: &[f64], methods: &[Method], tol: Option<f64>) -> Result<(Table, bool), CliError> {
    require_positive("x", xs)?;
    require_positive("k", ks)?;
    if let Some(tol) = tol {
        require_positive("tol", &[tol])?;
    }
    let needs_k = methods.iter().any(|m| *m != Method::ClosedForm);
    if needs_k && ks.is_empty() {
        return Err(CliError::Usage("--k is required for the integral routes".into()));
    }
    if methods.contains(&Method::Spectral) {
        if let Some(k) = ks.iter().find(|k| **k > SPECTRAL_K_CAP) {
            return Err(CliError::Usage(format!(
                "spectral route refused at k = {k}: its cost grows with k and the budget caps it at k <= {SPECTRAL_K_CAP:e}"
            )));
        }
    }
    if methods.contains(&Method::UIntegral) {
        if let Some(k) = ks.iter().find(|k| **k < U_INTEGRAL_K_MIN) {
            return Err(CliError::Usage(format!(
                "u-integral needs k >= {U_INTEGRAL_K_MIN}, got {k}"
            )));
        }
    }

    let mut cells: Vec<(f64, Option<f64>, Method)> = Vec::new();
    for &x in xs {
        for &m in methods {
            if m == Method::ClosedForm {
                cells.push((x, None, m));
            } else {
                cells.extend(ks.iter().map(|&k| (x, Some(k), m)));
            }
        }
    }

    let rows: Vec<(Vec<Cell>, bool)> = cells
        .par_iter()
        .map(|&(x, k, m)| graze_row(x, k, m, tol.unwrap_or_else(|| default_tol(m))))
        .collect();
    let failed = rows.iter().any(|(_, f)| *f);
    let mut t = Table::new(&[
        "x",
        "k",
        "method",
        "re_w",
        "im_w",
        "abs_w",
        "re_closed",
        "im_closed",
        "rel_err",
        "quad_err",
        "status",
    ]);
    for (row, _) in rows {
        t.push(row);
    }
    Ok((t, failed))
}

fn graze_row(x: f64, k: Option<f64>, m: Method, tol: f64) -> (Vec<Cell>, bool) {
    let closed = match w_on_ray_closed(x) {
        Ok(c) => c,
        Err(e) => return (error_row(x, k, m, &e), true),
    };
    let (w, quad_err, status, failed) = match w_on_ray(x, k.unwrap_or(f64::INFINITY), m, tol) {
        Ok(r) => (r.w_value, r.error_estimate, "ok".to_owned(), false),
        Err(Error::NonConvergence { re, im, error, .. }) => (
            num_complex::Complex::new(re, im),
            error,
            "non-converged".to_owned(),
            true,
        ),
        Err(e) => return (error_row(x, k, m, &e), true),
    };
    let rel_err = if m == Method::ClosedForm {
        0.0
    } else {
        (w - closed).norm() / closed.norm()
    };
    let row = vec![
        x.into(),
        k.map_or(Cell::Empty, Cell::Num),
        m.name().into(),
        w.re.into(),
        w.im.into(),
        w.norm().into(),
        closed.re.into(),
        closed.im.into(),
        rel_err.into(),
        quad_err.into(),
        status.into(),
    ];
    (row, failed)
}

fn error_row(x: f64, k: Option<f64>, m: Method, e: &Error) -> Vec<Cell> {
    let mut row = vec![x.into(), k.map_or(Cell::Empty, Cell::Num), m.name().into()];
    row.extend(std::iter::repeat_n(Cell::Empty, 7));
    row.push(format!("error: {e}").into());
    row
}

pub fn graze_reflected(xs: &[f64]) -> Result<Table, CliError> {
    if xs.is_empty() {
        return Err(CliError::Usage("empty x list".into()));
    }
    require_positive("x", xs)?;
    let mut t = Table::new(&["x", "abs_v", "abs_w", "abs_v_minus_w", "ratio"]);
    for &x in xs {
        let numeric = |e: Error| CliError::Numerical(e.to_string());
        let v = beam_on_ray(x).map_err(numeric)?;
        let w = w_on_ray_closed(x).map_err(numeric)?;
        let r = (v - w).norm();
        t.push(vec![
            x.into(),
            v.norm().into(),
            w.norm().into(),
            r.into(),
            (r / v.norm()).into(),
        ]);
    }
    Ok(t)
}

pub fn verify_suites(suites: &[Suite]) -> Result<Vec<VerificationReport>, CliError> {
    suites
        .par_iter()
        .map(|&s| verify::run(s).map_err(|e| CliError::Numerical(format!("suite {s}: {e}"))))
        .collect()
}

pub fn verification_table(reports: &[VerificationReport]) -> Table {
    let mut t = Table::new(&["suite", "name", "expected", "actual", "tolerance", "pass"]);
    for r in reports {
        for c in &r.checks {
            t.push(vec![
                r.suite.name().into(),
                c.name.clone().into(),
                c.expected.into(),
                c.actual.into(),
                c.tolerance.into(),
                c.pass.to_string().into(),
            ]);
        }
    }
    t
}
